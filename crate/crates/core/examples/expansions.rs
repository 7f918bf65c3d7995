//! Expand a function in the Laguerre system, resynthesize it, and apply
//! `delta_j`, `delta_j^*` and the Riesz transform to the coefficients.

use laguerre_lp::basis::{analyze, delta_apply, delta_star_apply, riesz_transform, BasisFamily, MultiIndex};
use laguerre_lp::measure::{AlphaParam, Point};

fn main() -> laguerre_lp::Result<()> {
    let alpha = AlphaParam::new(vec![0.5, -0.5])?;
    // a Gaussian bump times a polynomial, well inside L^2(dmu_alpha)
    let f = |p: &Point| {
        let (x, y) = (p[0], p[1]);
        (1.0 + x * x - 0.3 * y * y) * (-(x * x + y * y)).exp()
    };
    let cutoff = 12;
    let e = analyze(&alpha, BasisFamily::Plain, f, cutoff, cutoff + 20)?;
    println!("{} coefficients up to |k| = {cutoff}, ||f|| = {:.12}", e.coeffs().len(), e.norm());
    for k in [MultiIndex::zero(2), MultiIndex::unit(2, 0), MultiIndex::new(vec![1, 1])] {
        println!("  c_{:?} = {:+.12e}", k.entries(), e.get(&k));
    }

    for coords in [[0.3, 0.7], [1.0, 1.0], [2.0, 0.4]] {
        let p = Point::new(coords.to_vec())?;
        println!("f{coords:?} = {:+.12e}, synthesized {:+.12e}", f(&p), e.synthesize(&p));
    }

    let d0 = delta_apply(&e, 0)?;
    let back = delta_star_apply(&d0, 0)?;
    println!(
        "delta_1 f: {} terms in the differentiated family, ||delta_1 f|| = {:.6}; delta_1^* delta_1 f has {} terms",
        d0.coeffs().len(),
        d0.norm(),
        back.coeffs().len()
    );
    let r = riesz_transform(&e, 1)?;
    println!("||R_2 f|| = {:.6} <= ||f|| = {:.6}", r.norm(), e.norm());
    Ok(())
}
