//! The starred horizontal heat g-function of ell_0 in one dimension: closed
//! formula against quadrature, and its growth like x ell_0(x).

use laguerre_lp::czcheck::counterexample_profile;
use laguerre_lp::kernels::ZetaGridSpec;

fn main() -> laguerre_lp::Result<()> {
    let xs = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
    for alpha in [-0.5, 0.0, 1.0] {
        let p = counterexample_profile(alpha, &xs, &ZetaGridSpec::default())?;
        println!("alpha = {alpha}: max |quadrature - closed| = {:.2e}, limit ratio {:.6}", p.max_deviation, p.growth_limit());
        for ((x, q), r) in p.x.iter().zip(&p.quadrature).zip(p.growth_ratios()) {
            println!("  x = {x:>5}: profile {q:.10e}, profile / (x ell_0) = {r:.6}");
        }
    }
    Ok(())
}
