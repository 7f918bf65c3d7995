//! The ten g-functions on a random expansion, pointwise and in L^2, with the
//! isometry and the horizontal sums.

use laguerre_lp::basis::{BasisFamily, Expansion};
use laguerre_lp::gfunctions::{
    gfun_exact, gfun_l2_norm, gfun_quadrature, horizontal_family, horizontal_heat_spectral,
    horizontal_modified_poisson_spectral, l2_order_for, GFunctionKind,
};
use laguerre_lp::kernels::ZetaGridSpec;
use laguerre_lp::measure::{AlphaParam, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> laguerre_lp::Result<()> {
    let alpha = AlphaParam::new(vec![0.0, 1.3])?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = Point::new(vec![0.7, 1.2])?;
    let spec = ZetaGridSpec::default();

    println!("{:<16} {:>20} {:>20} {:>12}", "g-function", "exact g(f)(x)", "quadrature", "||g(f)||/||f||");
    for kind in GFunctionKind::representatives(2) {
        let e = Expansion::random(&mut rng, &alpha, kind.family(), 6, 6)?;
        let exact = gfun_exact(kind, &e, &x)?;
        let quad = gfun_quadrature(kind, &e, &x, &spec)?;
        let ratio = gfun_l2_norm(kind, &e, l2_order_for(&e))? / e.norm();
        println!("{:<16} {exact:>20.13e} {quad:>20.13e} {ratio:>12.9}", kind.to_string());
    }

    let f = Expansion::random(&mut rng, &alpha, BasisFamily::Plain, 8, 6)?;
    let f = Expansion::from_terms(alpha.clone(), BasisFamily::Plain, f.terms().filter(|(k, _)| k.order() > 0).map(|(k, c)| (k.clone(), c)))?;
    let total: f64 = horizontal_family(2, BasisFamily::Plain)
        .into_iter()
        .map(|k| Ok(gfun_l2_norm(k, &f, l2_order_for(&f))?.powi(2)))
        .sum::<laguerre_lp::Result<f64>>()?;
    println!("sum_i ||g_HT^i f||^2 = {total:.12e}, spectral {:.12e}", horizontal_heat_spectral(&f));

    let h = Expansion::random(&mut rng, &alpha, BasisFamily::Differentiated(0), 8, 6)?;
    let total: f64 = horizontal_family(2, BasisFamily::Differentiated(0))
        .into_iter()
        .map(|k| Ok(gfun_l2_norm(k, &h, l2_order_for(&h))?.powi(2)))
        .sum::<laguerre_lp::Result<f64>>()?;
    println!("modified Poisson horizontal sum = {total:.12e}, spectral {:.12e}", horizontal_modified_poisson_spectral(&h));
    Ok(())
}
