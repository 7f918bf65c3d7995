//! Ball measures of mu_alpha and doubling ratios across scales.

use laguerre_lp::measure::{doubling_ratio, mu_ball, mu_box, AlphaParam, Point};

fn main() -> laguerre_lp::Result<()> {
    for a in [vec![-0.5], vec![2.0], vec![0.0, 1.3], vec![-0.5, -0.5, 0.5]] {
        let alpha = AlphaParam::new(a)?;
        let d = alpha.dim();
        let mut worst: f64 = 0.0;
        for c in [0.01, 0.3, 1.0, 5.0] {
            let center = Point::new(vec![c; d])?;
            for r in [1e-3, 0.1, 1.0, 10.0] {
                worst = worst.max(doubling_ratio(&alpha, &center, r)?);
            }
        }
        let unit = mu_ball(&alpha, &Point::new(vec![1.0; d])?, 0.5)?;
        let cube = mu_box(&alpha, &vec![0.0; d], &vec![1.0; d])?;
        println!(
            "alpha {:?}: mu(B(1, 1/2)) = {unit:.10e}, mu([0,1]^d) = {cube:.10e}, largest doubling ratio {worst:.4}",
            alpha.components()
        );
    }
    Ok(())
}
