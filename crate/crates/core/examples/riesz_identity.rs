//! d/dt P~_t R_j f = -delta_j P_t f on random expansions.

use laguerre_lp::basis::{BasisFamily, Expansion};
use laguerre_lp::czcheck::riesz_identity_check;
use laguerre_lp::measure::{AlphaParam, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> laguerre_lp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ts = [0.05, 0.5, 2.0];
    for a in [vec![-0.5], vec![0.4, 2.0]] {
        let alpha = AlphaParam::new(a)?;
        let e = Expansion::random(&mut rng, &alpha, BasisFamily::Plain, 10, 12)?;
        let xs = (0..8)
            .map(|_| Point::new((0..alpha.dim()).map(|_| rng.random_range(0.1..3.0)).collect()))
            .collect::<laguerre_lp::Result<Vec<_>>>()?;
        for j in 0..alpha.dim() {
            let dev = riesz_identity_check(&e, j, &ts, &xs)?;
            println!("alpha {:?}, j = {}: max |lhs + rhs| = {dev:.2e}", alpha.components(), j + 1);
        }
    }
    Ok(())
}
