//! Laguerre function systems on `R_+^d`, finite expansions in them, and the
//! operators `delta_j`, `delta_j^*`, `L_alpha` and the Riesz transforms acting
//! on coefficients.
//!
//! Coordinates are zero-based throughout the library: `Differentiated(0)` is
//! the system built from `x_1 ell_{k-e_1}^{alpha+e_1}`.

use crate::error::{domain, Error, Result};
use crate::measure::{AlphaParam, Point};
use crate::specfun::gauss_laguerre_rule;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        Self(entries)
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn unit(d: usize, j: usize) -> Self {
        let mut e = vec![0; d];
        e[j] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|k| = k_1 + ... + k_d`.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    /// `k - e_j`, or `None` when `k_j = 0`.
    pub fn lowered(&self, j: usize) -> Option<Self> {
        let mut e = self.0.clone();
        e[j] = e[j].checked_sub(1)?;
        Some(Self(e))
    }

    /// All indices in `N^d` with `|k| <= n`, in lexicographic order.
    pub fn all_up_to(d: usize, n: usize) -> Vec<Self> {
        fn rec(d: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if prefix.len() == d {
                out.push(MultiIndex(prefix.clone()));
                return;
            }
            for k in 0..=budget {
                prefix.push(k);
                rec(d, budget - k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, n, &mut Vec::with_capacity(d), &mut out);
        out
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFamily {
    /// `ell_k^alpha`.
    Plain,
    /// `x_j ell_{k-e_j}^{alpha+e_j}`, zero when `k_j = 0`.
    Differentiated(usize),
}

/// `lambda_n^alpha = 4n + 2|alpha| + 2d`.
pub fn eigenvalue(alpha: &AlphaParam, n: usize) -> f64 {
    4.0 * n as f64 + 2.0 * alpha.sum() + 2.0 * alpha.dim() as f64
}

/// `ell_0^a(x), ..., ell_kmax^a(x)` in one dimension.
pub fn ell_table(kmax: usize, a: f64, x: f64) -> Vec<f64> {
    let u = x * x;
    let gauss = (-0.5 * u).exp();
    // squared normalization 2 k! / Γ(k + a + 1), advanced by the factor k / (k + a)
    let mut norm_sq = 2.0 / statrs::function::gamma::gamma(a + 1.0);
    let mut out = Vec::with_capacity(kmax + 1);
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..=kmax {
        if k > 0 {
            let kf = k as f64;
            norm_sq *= kf / (kf + a);
            let next = ((2.0 * kf - 1.0 + a - u) * cur - (kf - 1.0 + a) * prev) / kf;
            prev = cur;
            cur = next;
        }
        out.push(norm_sq.sqrt() * cur * gauss);
    }
    out
}

/// One-dimensional `ell_k^a(x)`.
pub fn ell_1d(k: usize, a: f64, x: f64) -> f64 {
    ell_table(k, a, x)[k]
}

/// Tensor-product Laguerre function `ell_k^alpha(x)`.
pub fn ell(alpha: &AlphaParam, k: &MultiIndex, x: &Point) -> f64 {
    alpha
        .components()
        .iter()
        .zip(k.entries())
        .zip(x.coords())
        .map(|((&a, &ki), &xi)| ell_1d(ki, a, xi))
        .product()
}

pub fn basis_eval(alpha: &AlphaParam, family: BasisFamily, k: &MultiIndex, x: &Point) -> f64 {
    match family {
        BasisFamily::Plain => ell(alpha, k, x),
        BasisFamily::Differentiated(j) => match k.lowered(j) {
            Some(km) => x[j] * ell(&alpha.shifted(j), &km, x),
            None => 0.0,
        },
    }
}

/// Per-coordinate tables of basis factors, so that a whole expansion is
/// evaluated at a point with one recurrence per coordinate.
struct PointTables {
    tables: Vec<Vec<f64>>,
    family: BasisFamily,
    xj: f64,
}

impl PointTables {
    fn new(alpha: &AlphaParam, family: BasisFamily, kmax: &[usize], x: &Point) -> Self {
        let tables = (0..alpha.dim())
            .map(|i| {
                let shift = matches!(family, BasisFamily::Differentiated(j) if j == i);
                let a = alpha.components()[i] + if shift { 1.0 } else { 0.0 };
                ell_table(kmax[i], a, x[i])
            })
            .collect();
        let xj = match family {
            BasisFamily::Differentiated(j) => x[j],
            BasisFamily::Plain => 1.0,
        };
        Self { tables, family, xj }
    }

    fn value(&self, k: &MultiIndex) -> f64 {
        let mut v = self.xj;
        for (i, (&ki, t)) in k.entries().iter().zip(&self.tables).enumerate() {
            let idx = match self.family {
                BasisFamily::Differentiated(j) if j == i => match ki.checked_sub(1) {
                    Some(m) => m,
                    None => return 0.0,
                },
                _ => ki,
            };
            v *= t[idx];
        }
        v
    }
}

/// A finite expansion `sum_k c_k b_k` in one of the basis families.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    alpha: AlphaParam,
    family: BasisFamily,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl Expansion {
    pub fn new(alpha: AlphaParam, family: BasisFamily) -> Result<Self> {
        if let BasisFamily::Differentiated(j) = family {
            if j >= alpha.dim() {
                return domain(format!("coordinate {j} out of range for d = {}", alpha.dim()));
            }
        }
        Ok(Self { alpha, family, coeffs: BTreeMap::new() })
    }

    pub fn from_terms(
        alpha: AlphaParam,
        family: BasisFamily,
        terms: impl IntoIterator<Item = (MultiIndex, f64)>,
    ) -> Result<Self> {
        let mut e = Self::new(alpha, family)?;
        for (k, c) in terms {
            e.insert(k, c)?;
        }
        Ok(e)
    }

    /// Adds `c` to the coefficient at `k`. A differentiated index with
    /// `k_j = 0` only accepts a zero coefficient.
    pub fn insert(&mut self, k: MultiIndex, c: f64) -> Result<()> {
        self.alpha.check_dim(k.dim())?;
        if let BasisFamily::Differentiated(j) = self.family {
            if k[j] == 0 {
                if c == 0.0 {
                    return Ok(());
                }
                return domain(format!("index {:?} has k_j = 0 in the differentiated family", k.entries()));
            }
        }
        *self.coeffs.entry(k).or_insert(0.0) += c;
        Ok(())
    }

    pub fn alpha(&self) -> &AlphaParam {
        &self.alpha
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.coeffs
    }

    pub fn get(&self, k: &MultiIndex) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(k, &c)| (k, c))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.values().all(|&c| c == 0.0)
    }

    /// `l^2` norm of the coefficients, equal to the `L^2(dmu_alpha)` norm.
    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_order(&self) -> usize {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    fn max_entries(&self) -> Vec<usize> {
        let mut m = vec![0; self.alpha.dim()];
        for k in self.coeffs.keys() {
            for (mi, &ki) in m.iter_mut().zip(k.entries()) {
                *mi = (*mi).max(ki);
            }
        }
        m
    }

    /// Basis values `b_k(x)` for every stored index, in index order.
    pub fn basis_values(&self, x: &Point) -> Vec<f64> {
        let tables = PointTables::new(&self.alpha, self.family, &self.max_entries(), x);
        self.coeffs.keys().map(|k| tables.value(k)).collect()
    }

    /// `sum_k c_k b_k(x)`.
    pub fn synthesize(&self, x: &Point) -> f64 {
        self.coeffs.values().zip(self.basis_values(x)).map(|(c, b)| c * b).sum()
    }

    /// Coefficientwise map into another family, dropping exact zeros.
    fn remap(
        &self,
        family: BasisFamily,
        f: impl Fn(&MultiIndex, f64) -> f64,
    ) -> Expansion {
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(k, &c)| {
                if let BasisFamily::Differentiated(j) = family {
                    if k[j] == 0 {
                        return None;
                    }
                }
                Some((k.clone(), f(k, c)))
            })
            .collect();
        Expansion { alpha: self.alpha.clone(), family, coeffs }
    }

    /// A random expansion with `modes` distinct indices of order `<= max_order`
    /// and standard normal-ish coefficients in `[-1, 1]`.
    pub fn random(
        rng: &mut impl Rng,
        alpha: &AlphaParam,
        family: BasisFamily,
        modes: usize,
        max_order: usize,
    ) -> Result<Self> {
        let mut pool = MultiIndex::all_up_to(alpha.dim(), max_order);
        if let BasisFamily::Differentiated(j) = family {
            pool.retain(|k| k[j] > 0);
        }
        if pool.len() < modes {
            return domain(format!("only {} indices of order <= {max_order}", pool.len()));
        }
        let mut e = Expansion::new(alpha.clone(), family)?;
        for _ in 0..modes {
            let k = pool.swap_remove(rng.random_range(0..pool.len()));
            let c: f64 = rng.random_range(-1.0..1.0);
            e.insert(k, if c == 0.0 { 0.5 } else { c })?;
        }
        Ok(e)
    }
}

fn require_plain(e: &Expansion) -> Result<()> {
    match e.family {
        BasisFamily::Plain => Ok(()),
        f => Err(Error::Usage(format!("expected the plain family, got {f:?}"))),
    }
}

/// Tensor Gauss-Laguerre discretization of `dmu_alpha` in `u_i = x_i^2`.
///
/// `sum_m weights[m] F(points[m])` equals `int F dmu_alpha` exactly when
/// `F e^{|x|^2}` is a polynomial of degree `< 2 order` in each `x_i^2`.
#[derive(Debug, Clone)]
pub struct MuRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl MuRule {
    pub fn new(alpha: &AlphaParam, order: usize) -> Result<Self> {
        let axes: Vec<(Vec<f64>, Vec<f64>)> = alpha
            .components()
            .iter()
            .map(|&a| {
                let r = gauss_laguerre_rule(order, a)?;
                let x = r.nodes.iter().map(|u| u.sqrt()).collect();
                let w = r.nodes.iter().zip(&r.weights).map(|(u, w)| 0.5 * w * u.exp()).collect();
                Ok((x, w))
            })
            .collect::<Result<_>>()?;
        let mut points = vec![Vec::new()];
        let mut weights = vec![1.0];
        for (xs, ws) in &axes {
            let mut np = Vec::with_capacity(points.len() * xs.len());
            let mut nw = Vec::with_capacity(points.len() * xs.len());
            for (p, w) in points.iter().zip(&weights) {
                for (&x, &wx) in xs.iter().zip(ws) {
                    let mut q = p.clone();
                    q.push(x);
                    np.push(q);
                    nw.push(w * wx);
                }
            }
            points = np;
            weights = nw;
        }
        let points = points.into_iter().map(Point::new).collect::<Result<_>>()?;
        Ok(Self { points, weights })
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Coefficients `<f, b_k>_{dmu_alpha}` for all `|k| <= cutoff`.
pub fn analyze(
    alpha: &AlphaParam,
    family: BasisFamily,
    f: impl Fn(&Point) -> f64,
    cutoff: usize,
    order: usize,
) -> Result<Expansion> {
    let rule = MuRule::new(alpha, order)?;
    let mut probe = Expansion::new(alpha.clone(), family)?;
    for k in MultiIndex::all_up_to(alpha.dim(), cutoff) {
        if let BasisFamily::Differentiated(j) = family {
            if k[j] == 0 {
                continue;
            }
        }
        probe.coeffs.insert(k, 0.0);
    }
    let mut acc = vec![0.0; probe.coeffs.len()];
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        let fw = w * f(p);
        if fw == 0.0 {
            continue;
        }
        for (a, b) in acc.iter_mut().zip(probe.basis_values(p)) {
            *a += fw * b;
        }
    }
    for (c, a) in probe.coeffs.values_mut().zip(acc) {
        *c = a;
    }
    Ok(probe)
}

/// `delta_j = d/dx_j + x_j`: `delta_j ell_k = -2 sqrt(k_j) x_j ell_{k-e_j}^{alpha+e_j}`.
pub fn delta_apply(e: &Expansion, j: usize) -> Result<Expansion> {
    require_plain(e)?;
    check_coord(e, j)?;
    Ok(e.remap(BasisFamily::Differentiated(j), |k, c| -2.0 * (k[j] as f64).sqrt() * c))
}

/// `delta_j^* = -d/dx_j + x_j - (2 alpha_j + 1)/x_j`, mapping the
/// differentiated system back: `delta_j^*(x_j ell_{k-e_j}^{alpha+e_j}) = -2 sqrt(k_j) ell_k`.
pub fn delta_star_apply(e: &Expansion, j: usize) -> Result<Expansion> {
    check_coord(e, j)?;
    if e.family != BasisFamily::Differentiated(j) {
        return Err(Error::Usage(format!(
            "delta_star_apply({j}) needs the differentiated({j}) family, got {:?}",
            e.family
        )));
    }
    Ok(e.remap(BasisFamily::Plain, |k, c| -2.0 * (k[j] as f64).sqrt() * c))
}

/// `L_alpha ell_k = lambda_{|k|} ell_k`.
pub fn laguerre_operator_apply(e: &Expansion) -> Result<Expansion> {
    require_plain(e)?;
    Ok(e.remap(BasisFamily::Plain, |k, c| eigenvalue(&e.alpha, k.order()) * c))
}

/// `R_j = delta_j L_alpha^{-1/2}` on coefficients.
pub fn riesz_transform(e: &Expansion, j: usize) -> Result<Expansion> {
    require_plain(e)?;
    check_coord(e, j)?;
    Ok(e.remap(BasisFamily::Differentiated(j), |k, c| {
        -2.0 * (k[j] as f64).sqrt() / eigenvalue(&e.alpha, k.order()).sqrt() * c
    }))
}

fn check_coord(e: &Expansion, j: usize) -> Result<()> {
    if j < e.alpha.dim() {
        Ok(())
    } else {
        domain(format!("coordinate {j} out of range for d = {}", e.alpha.dim()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::laguerre_poly;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alpha(v: &[f64]) -> AlphaParam {
        AlphaParam::new(v.to_vec()).unwrap()
    }

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(&alpha(&[0.0]), 0), 2.0);
        assert_eq!(eigenvalue(&alpha(&[-0.5, -0.5]), 1), 6.0);
        assert_eq!(eigenvalue(&alpha(&[-0.5]), 0), 1.0);
    }

    #[test]
    fn ell_examples() {
        let v = ell(&alpha(&[0.0]), &mi(&[0]), &pt(&[1.0]));
        assert!((v - 2f64.sqrt() * (-0.5f64).exp()).abs() < 1e-15);
        let a = alpha(&[0.3, -0.5]);
        let x = pt(&[0.7, 1.9]);
        let joint = ell(&a, &mi(&[3, 2]), &x);
        assert!((joint - ell_1d(3, 0.3, 0.7) * ell_1d(2, -0.5, 1.9)).abs() < 1e-15);
        // table agrees with the definition through laguerre_poly
        for k in 0..15 {
            let a = 1.7;
            let x = 2.3f64;
            let g = statrs::function::gamma::gamma;
            let def = (2.0 * g(k as f64 + 1.0) / g(k as f64 + a + 1.0)).sqrt()
                * laguerre_poly(k, a, x * x)
                * (-x * x / 2.0).exp();
            assert!((ell_1d(k, a, x) - def).abs() < 1e-13 * (1.0 + def.abs()));
        }
        let d = basis_eval(&alpha(&[0.0]), BasisFamily::Differentiated(0), &mi(&[1]), &pt(&[1.0]));
        assert!((d - 2f64.sqrt() * (-0.5f64).exp()).abs() < 1e-15);
        for x in [0.1, 1.0, 3.0] {
            let z = basis_eval(&alpha(&[0.4, 0.0]), BasisFamily::Differentiated(0), &mi(&[0, 3]), &pt(&[x, 1.0]));
            assert_eq!(z, 0.0);
        }
    }

    fn gram(a: &AlphaParam, family: BasisFamily, idx: &[MultiIndex], order: usize) -> f64 {
        let rule = MuRule::new(a, order).unwrap();
        let mut worst: f64 = 0.0;
        for (p, k) in idx.iter().enumerate() {
            for m in &idx[p..] {
                let v = rule.integrate(|x| basis_eval(a, family, k, x) * basis_eval(a, family, m, x));
                let want = if k == m { 1.0 } else { 0.0 };
                worst = worst.max((v - want).abs());
            }
        }
        worst
    }

    #[test]
    fn gram_one_dim_plain() {
        let idx: Vec<_> = (0..=10).map(|k| mi(&[k])).collect();
        for a in [-0.5, 0.0, 0.3, 1.3] {
            assert!(gram(&alpha(&[a]), BasisFamily::Plain, &idx, 16) < 1e-10);
        }
    }

    #[test]
    fn gram_both_families() {
        for comps in [vec![-0.5], vec![0.0], vec![1.3], vec![-0.5, -0.5], vec![0.0, 0.0], vec![1.3, 1.3], vec![0.3, -0.5]] {
            let a = alpha(&comps);
            let d = a.dim();
            let all = MultiIndex::all_up_to(d, if d == 1 { 8 } else { 6 });
            assert!(gram(&a, BasisFamily::Plain, &all, 12) < 1e-9, "{comps:?}");
            for j in 0..d {
                let idx: Vec<_> = all.iter().filter(|k| k[j] >= 1).cloned().collect();
                assert!(gram(&a, BasisFamily::Differentiated(j), &idx, 12) < 1e-9, "{comps:?} j={j}");
            }
        }
    }

    #[test]
    fn analyze_examples() {
        let a = alpha(&[0.4, -0.2]);
        let f = Expansion::from_terms(a.clone(), BasisFamily::Plain, [(mi(&[0, 0]), 3.0), (mi(&[1, 0]), 2.0)]).unwrap();
        let got = analyze(&a, BasisFamily::Plain, |x| f.synthesize(x), 5, 10).unwrap();
        for (k, c) in got.terms() {
            assert!((c - f.get(k)).abs() < 1e-12, "{k:?}");
        }
        for m in MultiIndex::all_up_to(2, 3) {
            let got = analyze(&a, BasisFamily::Plain, |x| ell(&a, &m, x), 4, 8).unwrap();
            for (k, c) in got.terms() {
                let want = if *k == m { 1.0 } else { 0.0 };
                assert!((c - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn round_trip_both_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for comps in [vec![0.7], vec![-0.5, 1.2]] {
            let a = alpha(&comps);
            for family in [BasisFamily::Plain, BasisFamily::Differentiated(0)] {
                let modes = if a.dim() == 1 { 4 } else { 6 };
                let e = Expansion::random(&mut rng, &a, family, modes, 5).unwrap();
                let back = analyze(&a, family, |x| e.synthesize(x), 5, 10).unwrap();
                for (k, c) in back.terms() {
                    assert!((c - e.get(k)).abs() < 1e-9);
                }
                // Parseval through the quadrature norm
                let rule = MuRule::new(&a, 10).unwrap();
                let l2 = rule.integrate(|x| e.synthesize(x).powi(2)).sqrt();
                assert!((l2 - e.norm()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn synthesize_trivial_cases() {
        let a = alpha(&[0.2, 0.0]);
        let x = pt(&[0.8, 1.5]);
        assert_eq!(Expansion::new(a.clone(), BasisFamily::Plain).unwrap().synthesize(&x), 0.0);
        let k = mi(&[2, 1]);
        let e = Expansion::from_terms(a.clone(), BasisFamily::Differentiated(1), [(k.clone(), 1.0)]).unwrap();
        let want = basis_eval(&a, BasisFamily::Differentiated(1), &k, &x);
        assert!((e.synthesize(&x) - want).abs() < 1e-15);
        assert!(Expansion::from_terms(a, BasisFamily::Differentiated(1), [(mi(&[2, 0]), 1.0)]).is_err());
    }

    #[test]
    fn delta_examples() {
        let a = alpha(&[0.5]);
        let zero = Expansion::from_terms(a.clone(), BasisFamily::Plain, [(mi(&[0]), 1.0)]).unwrap();
        assert!(delta_apply(&zero, 0).unwrap().is_empty());
        let one = Expansion::from_terms(a.clone(), BasisFamily::Plain, [(mi(&[1]), 1.0)]).unwrap();
        let d = delta_apply(&one, 0).unwrap();
        assert_eq!(d.family(), BasisFamily::Differentiated(0));
        assert_eq!(d.get(&mi(&[1])), -2.0);
        let ds = delta_star_apply(&Expansion::from_terms(a.clone(), BasisFamily::Differentiated(0), [(mi(&[1]), 1.0)]).unwrap(), 0).unwrap();
        assert_eq!(ds.get(&mi(&[1])), -2.0);
        assert!(delta_star_apply(&one, 0).is_err());
        assert!(delta_apply(&d, 0).is_err());
    }

    #[test]
    fn delta_against_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = 1e-4;
        for comps in [vec![0.0], vec![-0.5, 0.8]] {
            let a = alpha(&comps);
            for j in 0..a.dim() {
                let e = Expansion::random(&mut rng, &a, BasisFamily::Plain, 5, 5).unwrap();
                let de = delta_apply(&e, j).unwrap();
                let g = Expansion::random(&mut rng, &a, BasisFamily::Differentiated(j), 5, 5).unwrap();
                let dsg = delta_star_apply(&g, j).unwrap();
                for _ in 0..20 {
                    let c: Vec<f64> = (0..a.dim()).map(|_| rng.random_range(0.1..3.0)).collect();
                    let x = pt(&c);
                    let shift = |s: f64, ex: &Expansion| {
                        let mut cc = c.clone();
                        cc[j] += s;
                        ex.synthesize(&pt(&cc))
                    };
                    let dfd = (shift(h, &e) - shift(-h, &e)) / (2.0 * h);
                    let fd = dfd + c[j] * e.synthesize(&x);
                    assert!((de.synthesize(&x) - fd).abs() < 1e-6);
                    let dgd = (shift(h, &g) - shift(-h, &g)) / (2.0 * h);
                    let fd = -dgd + (c[j] - (2.0 * comps[j] + 1.0) / c[j]) * g.synthesize(&x);
                    assert!((dsg.synthesize(&x) - fd).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn laguerre_operator_decomposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = alpha(&[0.3, -0.5]);
        let e = Expansion::random(&mut rng, &a, BasisFamily::Plain, 8, 6).unwrap();
        let le = laguerre_operator_apply(&e).unwrap();
        let base = 2.0 * a.sum() + 2.0 * a.dim() as f64;
        for (k, c) in e.terms() {
            let mut v = base * c;
            for j in 0..2 {
                v += delta_star_apply(&delta_apply(&e, j).unwrap(), j).unwrap().get(k);
            }
            assert!((v - le.get(k)).abs() < 1e-12);
        }
        let ell0 = Expansion::from_terms(alpha(&[0.0]), BasisFamily::Plain, [(mi(&[0]), 1.0)]).unwrap();
        assert_eq!(laguerre_operator_apply(&ell0).unwrap().get(&mi(&[0])), 2.0);
        // second-order finite differences of -Δ + |x|^2 - Σ (2a_i+1)/x_i ∂_i
        let h = 1e-4;
        for _ in 0..10 {
            let c: Vec<f64> = (0..2).map(|_| rng.random_range(0.2..2.5)).collect();
            let f = |cc: &[f64]| e.synthesize(&pt(cc));
            let mut v = (c[0] * c[0] + c[1] * c[1]) * f(&c);
            for i in 0..2 {
                let mut p = c.clone();
                let mut m = c.clone();
                p[i] += h;
                m[i] -= h;
                let (fp, fm) = (f(&p), f(&m));
                v -= (fp - 2.0 * f(&c) + fm) / (h * h);
                v -= (2.0 * a.components()[i] + 1.0) / c[i] * (fp - fm) / (2.0 * h);
            }
            assert!((v - le.synthesize(&pt(&c))).abs() < 1e-5);
        }
    }

    #[test]
    fn riesz_examples() {
        let a = alpha(&[0.0]);
        let ell0 = Expansion::from_terms(a.clone(), BasisFamily::Plain, [(mi(&[0]), 1.0)]).unwrap();
        assert!(riesz_transform(&ell0, 0).unwrap().is_empty());
        let ell1 = Expansion::from_terms(a, BasisFamily::Plain, [(mi(&[1]), 1.0)]).unwrap();
        let r = riesz_transform(&ell1, 0).unwrap();
        assert!((r.get(&mi(&[1])) + 2.0 / 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn adjointness_by_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = alpha(&[0.6, -0.5]);
        let rule = MuRule::new(&a, 12).unwrap();
        for j in 0..2 {
            let f = Expansion::random(&mut rng, &a, BasisFamily::Plain, 6, 5).unwrap();
            let g = Expansion::random(&mut rng, &a, BasisFamily::Differentiated(j), 6, 5).unwrap();
            let df = delta_apply(&f, j).unwrap();
            let dsg = delta_star_apply(&g, j).unwrap();
            let lhs = rule.integrate(|x| df.synthesize(x) * g.synthesize(x));
            let rhs = rule.integrate(|x| f.synthesize(x) * dsg.synthesize(x));
            assert!((lhs - rhs).abs() < 1e-8);
        }
    }

    proptest! {
        #[test]
        fn star_after_delta_is_4kj(coeffs in proptest::collection::vec(-5.0f64..5.0, 10), j in 0usize..2) {
            let a = alpha(&[0.2, 1.1]);
            let idx = MultiIndex::all_up_to(2, 3);
            let e = Expansion::from_terms(a, BasisFamily::Plain, idx.into_iter().zip(coeffs)).unwrap();
            let back = delta_star_apply(&delta_apply(&e, j).unwrap(), j).unwrap();
            for (k, c) in e.terms() {
                prop_assert!((back.get(k) - 4.0 * k[j] as f64 * c).abs() <= 1e-14 * (1.0 + c.abs()) * 4.0 * (1.0 + k[j] as f64));
            }
        }
    }
}
