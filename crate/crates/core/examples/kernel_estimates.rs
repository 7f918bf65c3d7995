//! Growth and smoothness ratios of the ten vector-valued kernels on random
//! pairs, with the effect of doubling the time-grid order.

use laguerre_lp::czcheck::{scan_refinement, Estimate, SamplerSpec};
use laguerre_lp::kernels::{KernelKind, ZetaGridSpec};
use laguerre_lp::measure::AlphaParam;

fn main() -> laguerre_lp::Result<()> {
    let alpha = AlphaParam::new(vec![-0.5, 0.7])?;
    let sampler = SamplerSpec { count: 200, seed: 7, ..SamplerSpec::default() };
    let spec = ZetaGridSpec::with_order(12);
    println!("{:<14} {:<9} {:>14} {:>14} {:>10}", "kernel", "estimate", "max ratio", "median", "change");
    for kind in KernelKind::representatives(2) {
        for estimate in Estimate::ALL {
            let r = scan_refinement(&alpha, kind, estimate, &sampler, &spec)?;
            println!(
                "{:<14} {:<9} {:>14.6e} {:>14.6e} {:>10.2e}",
                kind.to_string(),
                estimate.to_string(),
                r.fine.max,
                r.fine.median,
                r.relative_change
            );
        }
    }
    Ok(())
}
