use crate::error::{Error, Result};
use crate::measure::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seeded log-uniform sampler of points in the box `(lo, hi)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub count: usize,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        Self { count: 1000, seed: 1, lo: 0.05, hi: 10.0 }
    }
}

/// Which argument of `K(x, y)` is moved in a smoothness estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arg {
    X,
    Y,
}

/// `(x, y)` together with the moved argument `x'` or `y'`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbed {
    pub x: Point,
    pub y: Point,
    pub moved: Point,
}

impl Perturbed {
    /// `|x - y| > 2 |x - x'|` (or `2 |y - y'|`).
    pub fn constraint_ok(&self, which: Arg) -> bool {
        let base = match which {
            Arg::X => &self.x,
            Arg::Y => &self.y,
        };
        self.x.dist(&self.y) > 2.0 * base.dist(&self.moved)
    }
}

/// Smallest and largest `|x - x'| / |x - y|` drawn by [`SamplerSpec::perturbed`].
pub const PERTURBATION_RANGE: (f64, f64) = (1e-3, 0.49);

impl SamplerSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite()) {
            return Err(Error::Sampler(format!("need 0 < lo < hi, got lo = {}, hi = {}", self.lo, self.hi)));
        }
        Ok(())
    }

    fn log_uniform(&self, rng: &mut ChaCha8Rng, d: usize) -> Result<Point> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        Point::new((0..d).map(|_| rng.random_range(a..b).exp()).collect())
    }

    fn pairs_from(&self, rng: &mut ChaCha8Rng, d: usize) -> Result<Vec<(Point, Point)>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.count);
        while out.len() < self.count {
            let x = self.log_uniform(rng, d)?;
            let y = self.log_uniform(rng, d)?;
            if x != y {
                out.push((x, y));
            }
        }
        Ok(out)
    }

    /// `count` pairs `x != y`, independent and log-uniform per coordinate.
    pub fn pairs(&self, d: usize) -> Result<Vec<(Point, Point)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.pairs_from(&mut rng, d)
    }

    /// The pairs of [`SamplerSpec::pairs`], each with one argument moved by a
    /// log-uniform fraction of `|x - y|` (see [`PERTURBATION_RANGE`]) in a
    /// random direction, staying inside the orthant.
    pub fn perturbed(&self, d: usize, which: Arg) -> Result<Vec<Perturbed>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let pairs = self.pairs_from(&mut rng, d)?;
        let (a, b) = (PERTURBATION_RANGE.0.ln(), PERTURBATION_RANGE.1.ln());
        pairs
            .into_iter()
            .map(|(x, y)| {
                let base = match which {
                    Arg::X => &x,
                    Arg::Y => &y,
                };
                let mut r = x.dist(&y) * rng.random_range(a..b).exp();
                let moved = loop {
                    if let Some(p) = (0..64).find_map(|_| step(&mut rng, base, r)) {
                        break p;
                    }
                    r *= 0.5;
                };
                Ok(Perturbed { x: x.clone(), y: y.clone(), moved })
            })
            .collect()
    }
}

/// `base + r u` for a random unit vector `u`, if it stays in the orthant.
fn step(rng: &mut ChaCha8Rng, base: &Point, r: f64) -> Option<Point> {
    let u: Vec<f64> = (0..base.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let n = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(n > 0.1 && n <= 1.0) {
        return None;
    }
    let p: Vec<f64> = base.coords().iter().zip(&u).map(|(b, v)| b + r * v / n).collect();
    if p.iter().all(|c| *c > 0.0) {
        Point::new(p).ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_seeded_and_in_the_box() {
        let s = SamplerSpec { count: 200, seed: 9, lo: 0.05, hi: 10.0 };
        let p = s.pairs(2).unwrap();
        assert_eq!(p, s.pairs(2).unwrap());
        assert_eq!(p.len(), 200);
        assert!(p.iter().all(|(x, y)| x.coords().iter().chain(y.coords()).all(|c| *c > 0.05 && *c < 10.0)));
        assert_ne!(p, SamplerSpec { seed: 10, ..s }.pairs(2).unwrap());
    }

    #[test]
    fn perturbations_respect_the_constraint() {
        let s = SamplerSpec { count: 500, seed: 3, lo: 0.05, hi: 10.0 };
        let pairs = s.pairs(2).unwrap();
        for which in [Arg::X, Arg::Y] {
            let t = s.perturbed(2, which).unwrap();
            for (p, (x, y)) in t.iter().zip(&pairs) {
                assert_eq!((&p.x, &p.y), (x, y));
                assert!(p.constraint_ok(which));
                let base = if which == Arg::X { x } else { y };
                let frac = base.dist(&p.moved) / x.dist(y);
                assert!(frac < PERTURBATION_RANGE.1 && frac > 0.0);
            }
        }
    }

    #[test]
    fn bad_box_is_a_sampler_error() {
        let s = SamplerSpec { count: 1, seed: 0, lo: 2.0, hi: 1.0 };
        assert!(matches!(s.pairs(1), Err(Error::Sampler(_))));
    }
}
