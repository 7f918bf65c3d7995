//! The heat kernel three ways (closed Bessel form, Schläfli integral, spectral
//! series) and the modified kernel of one coordinate.

use laguerre_lp::kernels::{heat_kernel_closed, heat_kernel_schlafli, heat_kernel_spectral, modified_heat_kernel};
use laguerre_lp::measure::{AlphaParam, Point};

fn main() -> laguerre_lp::Result<()> {
    let alpha = AlphaParam::new(vec![-0.5, 1.2])?;
    let x = Point::new(vec![0.8, 1.5])?;
    let y = Point::new(vec![1.1, 0.6])?;
    println!("{:>6} {:>22} {:>22} {:>22}", "t", "closed", "schlafli", "spectral(N=150)");
    for t in [0.1, 0.5, 1.0, 3.0] {
        let c = heat_kernel_closed(&alpha, t, &x, &y)?;
        let s = heat_kernel_schlafli(&alpha, t, &x, &y, 20)?;
        let p = heat_kernel_spectral(&alpha, t, &x, &y, 150)?;
        println!("{t:>6} {c:>22.15e} {s:>22.15e} {p:>22.15e}");
    }

    // alpha_i in (-1, -1/2) is fine for the closed and spectral forms
    let low = AlphaParam::new(vec![-0.8])?;
    let (u, v) = (Point::new(vec![0.4])?, Point::new(vec![1.3])?);
    println!(
        "alpha = -0.8: closed {:.15e}, spectral {:.15e}",
        heat_kernel_closed(&low, 0.7, &u, &v)?,
        heat_kernel_spectral(&low, 0.7, &u, &v, 80)?
    );

    for j in 0..2 {
        println!("modified kernel, coordinate {}: {:.15e}", j + 1, modified_heat_kernel(&alpha, j, 0.5, &x, &y)?);
    }
    Ok(())
}
