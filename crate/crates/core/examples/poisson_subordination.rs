//! Poisson kernels by subordination of the heat kernel.

use laguerre_lp::basis::{ell, eigenvalue, MultiIndex};
use laguerre_lp::kernels::{poisson_kernel, subordinate_mode, PoissonVariant, SubordinationGrid};
use laguerre_lp::measure::{AlphaParam, Point};

fn main() -> laguerre_lp::Result<()> {
    let grid = SubordinationGrid::default();
    println!("per-mode identity, |computed - exp(-t sqrt(lambda))|:");
    for t in [0.1, 1.0, 5.0] {
        let worst = (1..=50)
            .map(|l| {
                let l = l as f64;
                Ok((subordinate_mode(l, t, grid)? - (-t * l.sqrt()).exp()).abs())
            })
            .collect::<laguerre_lp::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("  t = {t}: {worst:.2e} over lambda = 1..50");
    }

    let alpha = AlphaParam::new(vec![0.3])?;
    let (x, y) = (Point::new(vec![0.9])?, Point::new(vec![1.4])?);
    for t in [0.2, 1.0, 4.0] {
        let p = poisson_kernel(&alpha, PoissonVariant::Plain, t, &x, &y, grid)?;
        // spectral form: sum e^{-t sqrt(lambda_k)} ell_k(x) ell_k(y)
        let s: f64 = (0..4000)
            .map(|k| {
                let k = MultiIndex::new(vec![k]);
                (-t * eigenvalue(&alpha, k.order()).sqrt()).exp() * ell(&alpha, &k, &x) * ell(&alpha, &k, &y)
            })
            .sum();
        let m = poisson_kernel(&alpha, PoissonVariant::Modified(0), t, &x, &y, grid)?;
        println!("t = {t}: P = {p:.12e}, spectral {s:.12e}, modified {m:.12e}");
    }
    Ok(())
}
