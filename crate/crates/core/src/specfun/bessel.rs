use crate::error::{domain, Result};
use std::f64::consts::PI;

/// Argument above which the large-argument expansion is tried first.
pub const BESSEL_SWITCH: f64 = 20.0;

/// A positive quantity stored as `mantissa * exp(log_scale)`.
///
/// Large-argument Bessel values overflow long before the Gaussian factors of
/// the heat kernel bring them back down, so callers combine `log_scale` with
/// their own exponents before exponentiating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn value(self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn ln(self) -> f64 {
        self.mantissa.ln() + self.log_scale
    }
}

/// `i_nu(z) = z^{-nu} I_nu(z)` as a mantissa/exponent pair.
///
/// Orders in `(-1, -1/2)` are accepted as well: the ascending series is valid
/// for every `nu > -1`, and the heat kernel is defined on that whole range.
pub fn scaled_bessel_i_parts(nu: f64, z: f64) -> Result<Scaled> {
    if !(nu > -1.0) || !nu.is_finite() {
        return domain(format!("scaled Bessel order must exceed -1, got {nu}"));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return domain(format!("scaled Bessel argument must be >= 0, got {z}"));
    }
    if z > BESSEL_SWITCH {
        if let Some(v) = asymptotic(nu, z) {
            return Ok(v);
        }
    }
    Ok(series(nu, z))
}

/// `i_nu(z) = z^{-nu} I_nu(z)`; overflows to `inf` for very large `z`.
pub fn scaled_bessel_i(nu: f64, z: f64) -> Result<f64> {
    scaled_bessel_i_parts(nu, z).map(Scaled::value)
}

/// `I_{nu+1}(z) / I_nu(z)`, which is also `d/dz ln i_nu(z)`.
pub fn bessel_ratio(nu: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        scaled_bessel_i_parts(nu, 0.0)?;
        return Ok(0.0);
    }
    let lo = scaled_bessel_i_parts(nu, z)?;
    let hi = scaled_bessel_i_parts(nu + 1.0, z)?;
    Ok(z * hi.mantissa / lo.mantissa * (hi.log_scale - lo.log_scale).exp())
}

/// Logarithmic data of `i_nu` at one argument, arranged so that callers never
/// subtract two numbers of size `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselJet {
    /// `ln(e^{-z} i_nu(z))`.
    pub ln_exp_scaled: f64,
    /// `I_{nu+1}(z) / I_nu(z) = d/dz ln i_nu(z)`.
    pub ratio: f64,
    /// `1 - ratio`, computed without cancellation for large `z`.
    pub defect: f64,
}

pub fn bessel_jet(nu: f64, z: f64) -> Result<BesselJet> {
    scaled_bessel_i_parts(nu, 0.0)?;
    if !(z >= 0.0) || !z.is_finite() {
        return domain(format!("scaled Bessel argument must be >= 0, got {z}"));
    }
    if z > BESSEL_SWITCH {
        if let Some((s0, s1, diff)) = asymptotic_pair(nu, z) {
            let log_rest = -(nu + 0.5) * z.ln() - 0.5 * (2.0 * PI).ln();
            return Ok(BesselJet {
                ln_exp_scaled: log_rest + s0.ln(),
                ratio: s1 / s0,
                defect: diff / s0,
            });
        }
    }
    let lo = series(nu, z);
    let ratio = if z == 0.0 {
        0.0
    } else {
        let hi = series(nu + 1.0, z);
        z * hi.mantissa / lo.mantissa * (hi.log_scale - lo.log_scale).exp()
    };
    Ok(BesselJet { ln_exp_scaled: lo.ln() - z, ratio, defect: 1.0 - ratio })
}

/// Hankel sums `S_nu`, `S_{nu+1}` and `S_nu - S_{nu+1}` summed termwise.
fn asymptotic_pair(nu: f64, z: f64) -> Option<(f64, f64, f64)> {
    let mu0 = 4.0 * nu * nu;
    let mu1 = 4.0 * (nu + 1.0) * (nu + 1.0);
    let (mut t0, mut t1) = (1.0f64, 1.0f64);
    let (mut s0, mut s1, mut diff) = (1.0, 1.0, 0.0);
    for k in 1..=80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let n0 = -t0 * (mu0 - odd * odd) / (8.0 * kf * z);
        let n1 = -t1 * (mu1 - odd * odd) / (8.0 * kf * z);
        if (n0.abs() > t0.abs() && n0 != 0.0) || (n1.abs() > t1.abs() && n1 != 0.0) {
            return None;
        }
        t0 = n0;
        t1 = n1;
        s0 += t0;
        s1 += t1;
        diff += t0 - t1;
        if t0.abs() < 1e-17 * s0.abs() && t1.abs() < 1e-17 * s1.abs() {
            return (s0 > 0.0 && s1 > 0.0).then_some((s0, s1, diff));
        }
    }
    None
}

fn series(nu: f64, z: f64) -> Scaled {
    const RESCALE: f64 = 1e280;
    let q = 0.25 * z * z;
    let mut log_scale = -nu * std::f64::consts::LN_2 - statrs::function::gamma::ln_gamma(nu + 1.0);
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut m = 0.0;
    loop {
        term *= q / ((m + 1.0) * (m + 1.0 + nu));
        sum += term;
        m += 1.0;
        if term <= 1e-17 * sum {
            break;
        }
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    Scaled { mantissa: sum, log_scale }
}

/// Hankel expansion `I_nu(z) ~ e^z / sqrt(2 pi z) * sum (-1)^k a_k(nu) / z^k`.
/// Returns `None` when the terms stop decreasing before reaching full precision.
fn asymptotic(nu: f64, z: f64) -> Option<Scaled> {
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut term: f64 = 1.0;
    for k in 1..=80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * kf * z);
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        if k == 80 {
            return None;
        }
    }
    if !(sum > 0.0) {
        return None;
    }
    let log_scale = z - (nu + 0.5) * z.ln() - 0.5 * (2.0 * PI).ln();
    Some(Scaled { mantissa: sum, log_scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain power series with gamma from statrs, summed to 60 terms.
    fn oracle(nu: f64, z: f64) -> f64 {
        let g = statrs::function::gamma::gamma;
        (0..60)
            .map(|m| {
                let mf = m as f64;
                (0.25 * z * z).powi(m) / (g(mf + 1.0) * g(mf + nu + 1.0))
            })
            .sum::<f64>()
            / 2f64.powf(nu)
    }

    #[test]
    fn jet_matches_plain_values() {
        for &nu in &[-0.7, -0.5, 0.0, 1.3, 6.0] {
            for &z in &[0.0, 0.4, 3.0, 19.0, 25.0, 60.0, 300.0] {
                let jet = bessel_jet(nu, z).unwrap();
                let ln = scaled_bessel_i_parts(nu, z).unwrap().ln();
                assert!((jet.ln_exp_scaled + z - ln).abs() < 1e-12 * (1.0 + ln.abs()), "nu={nu} z={z}");
                let r = bessel_ratio(nu, z).unwrap();
                assert!((jet.ratio - r).abs() < 1e-13, "nu={nu} z={z}");
                assert!((jet.defect - (1.0 - r)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn jet_defect_is_accurate_at_huge_arguments() {
        // 1 - I_{nu+1}/I_nu = (2 nu + 1)/(2z) + O(z^-2)
        for &nu in &[-0.5, 0.0, 2.5] {
            let z = 1e12;
            let jet = bessel_jet(nu, z).unwrap();
            let lead = (2.0 * nu + 1.0) / (2.0 * z);
            let next = (2.0 * nu + 1.0) * (2.0 * nu + 3.0) / (8.0 * z * z);
            if lead == 0.0 {
                assert!(jet.defect.abs() < 1e-30);
            } else {
                assert!((jet.defect - lead - next).abs() < 1e-6 * lead, "{} vs {}", jet.defect, lead);
            }
            let want = -(nu + 0.5) * z.ln() - 0.5 * (2.0 * PI).ln();
            assert!((jet.ln_exp_scaled - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn value_at_zero() {
        for &nu in &[-0.5, 0.0, 0.3, 2.0, 5.5] {
            let want = 1.0 / (2f64.powf(nu) * statrs::function::gamma::gamma(nu + 1.0));
            let got = scaled_bessel_i(nu, 0.0).unwrap();
            assert!((got - want).abs() <= 1e-14 * want);
        }
    }

    #[test]
    fn half_order_closed_forms() {
        let v = scaled_bessel_i(0.5, 1.0).unwrap();
        let want = (2.0 / PI).sqrt() * 1f64.sinh();
        assert!((v - want).abs() < 1e-14, "{v} vs {want}");
        assert!((v - 0.9376748882).abs() < 1e-9);
        assert!((v - oracle(0.5, 1.0)).abs() < 1e-13);

        // I_{-1/2}(z) = sqrt(2/(pi z)) cosh z, so i_{-1/2}(z) = sqrt(2/pi) cosh z.
        for &z in &[2.0, 19.0, 25.0, 60.0] {
            let got = scaled_bessel_i(-0.5, z).unwrap();
            let want = (2.0 / PI).sqrt() * z.cosh();
            assert!((got - want).abs() <= 1e-12 * want, "z={z}: {got} vs {want}");
        }
        let got = scaled_bessel_i(-0.5, 2.0).unwrap();
        assert!((got - oracle(-0.5, 2.0)).abs() <= 1e-12 * got);
    }

    #[test]
    fn series_and_asymptotic_regimes_agree_with_oracle() {
        for &nu in &[-0.5, 0.0, 0.7, 1.5, 3.0, 4.3] {
            for &z in &[0.1, 1.0, 7.5, 19.9, 20.1, 24.0, 30.0] {
                let got = scaled_bessel_i(nu, z).unwrap();
                let want = oracle(nu, z);
                assert!((got - want).abs() <= 1e-10 * want, "nu={nu} z={z}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn huge_argument_stays_finite_in_log_form() {
        let s = scaled_bessel_i_parts(1.3, 5.0e4).unwrap();
        assert!(s.mantissa.is_finite() && s.log_scale.is_finite());
        assert!(s.value().is_infinite());
        // ln I_nu(z) ~ z - ln sqrt(2 pi z)
        let ln_i = s.ln() + 1.3 * 5.0e4f64.ln();
        assert!((ln_i - (5.0e4 - 0.5 * (2.0 * PI * 5.0e4).ln())).abs() < 1e-3);
    }

    #[test]
    fn ratio_matches_derivative_of_log() {
        for &nu in &[-0.5, 0.0, 2.2] {
            for &z in &[0.3f64, 4.0, 22.0, 80.0] {
                let h = 1e-5 * z.max(1.0);
                let lp = scaled_bessel_i_parts(nu, z + h).unwrap().ln();
                let lm = scaled_bessel_i_parts(nu, z - h).unwrap().ln();
                let fd = (lp - lm) / (2.0 * h);
                let r = bessel_ratio(nu, z).unwrap();
                assert!((fd - r).abs() < 1e-7, "nu={nu} z={z}: {fd} vs {r}");
                assert!(r > 0.0 && r <= 1.0 + 1e-14, "nu={nu} z={z}: r={r}");
            }
        }
    }

    #[test]
    fn positive_and_nondecreasing() {
        for &nu in &[-0.5, 0.0, 0.5, 1.0, 3.7] {
            let mut prev = 0.0;
            for s in 0..400 {
                let z = s as f64 * 0.1;
                let v = scaled_bessel_i(nu, z).unwrap();
                assert!(v > 0.0);
                assert!(v >= prev, "nu={nu} z={z}");
                prev = v;
            }
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert!(scaled_bessel_i(-1.0, 1.0).is_err());
        assert!(scaled_bessel_i(0.0, -1.0).is_err());
    }
}
