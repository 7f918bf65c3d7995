//! The auxiliary inequalities behind the kernel estimates, sampled.

use laguerre_lp::czcheck::{lemma_suite, LemmaSettings};
use laguerre_lp::measure::AlphaParam;

fn main() -> laguerre_lp::Result<()> {
    let alpha = AlphaParam::new(vec![0.0, 1.3])?;
    let settings = LemmaSettings { samples: 20_000, pairs: 40, ..LemmaSettings::default() };
    for o in lemma_suite(&alpha, &settings)? {
        let c = o.constant.map_or(String::from("-"), |c| format!("{c:.6e}"));
        println!(
            "{:<4} {:<52} violations {:>3}  margin {:>10.3e}  constant {c}",
            if o.passed { "ok" } else { "FAIL" },
            o.name,
            o.violations,
            o.worst_margin
        );
    }
    Ok(())
}
