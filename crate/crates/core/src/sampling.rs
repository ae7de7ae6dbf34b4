//! Seeded random sampling: points of the sampling box and random polynomial
//! fixtures.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::ExactPoint;
use crate::symexpr::{Expr, ZeroTestError};

/// Attempts allowed when redrawing points that hit a pole.
pub const MAX_ATTEMPTS: usize = 1000;

/// Coordinates are rationals `n/d` with `n` in `[-num_bound, num_bound]` and
/// `d` in `[1, den_bound]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleBox {
    pub num_bound: i64,
    pub den_bound: i64,
}

impl Default for SampleBox {
    fn default() -> Self {
        Self {
            num_bound: 100,
            den_bound: 10,
        }
    }
}

impl SampleBox {
    pub fn sampler(self, seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bounds: self,
        }
    }
}

/// Deterministic stream of sample points.
pub struct Sampler {
    rng: ChaCha8Rng,
    bounds: SampleBox,
}

impl Sampler {
    pub fn point(&mut self, dim: usize) -> ExactPoint {
        let coords = (0..dim)
            .map(|_| {
                let n = self
                    .rng
                    .gen_range(-self.bounds.num_bound..=self.bounds.num_bound);
                let d = self.rng.gen_range(1..=self.bounds.den_bound);
                BigRational::new(BigInt::from(n), BigInt::from(d))
            })
            .collect();
        ExactPoint::new(coords)
    }

    /// Draws points until `accept` returns a value, redrawing up to
    /// [`MAX_ATTEMPTS`] times.
    pub fn draw_where<R>(
        &mut self,
        dim: usize,
        mut accept: impl FnMut(&ExactPoint) -> Option<R>,
    ) -> Result<R, ZeroTestError> {
        for _ in 0..MAX_ATTEMPTS {
            let p = self.point(dim);
            if let Some(r) = accept(&p) {
                return Ok(r);
            }
        }
        Err(ZeroTestError::SamplingFailed(MAX_ATTEMPTS))
    }

    /// First point (in draw order) at which every expression is pole-free.
    pub fn regular_point(
        &mut self,
        dim: usize,
        exprs: &[Expr],
    ) -> Result<ExactPoint, ZeroTestError> {
        self.draw_where(dim, |p| {
            exprs
                .iter()
                .all(|e| e.evaluate(p).is_ok())
                .then(|| p.clone())
        })
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Seeded generator of random polynomial expressions.
pub struct PolyGen {
    rng: ChaCha8Rng,
}

impl PolyGen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn small_int(&mut self, bound: i64) -> i64 {
        self.rng.gen_range(-bound..=bound)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let k = self.small_int(bound);
            if k != 0 {
                return k;
            }
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Random polynomial of total degree at most `max_degree` in the given
    /// generator expressions, with small integer coefficients. Each monomial
    /// is included with probability one half; the result is never the zero
    /// polynomial unless `gens` is empty and the constant is dropped.
    pub fn poly_in(&mut self, gens: &[Expr], max_degree: u32) -> Expr {
        let monomials = exponent_vectors(gens.len(), max_degree);
        let mut acc = Expr::zero();
        for exps in &monomials {
            if !self.rng.gen_bool(0.5) {
                continue;
            }
            let c = self.nonzero_int(3);
            let mut term = Expr::int(c);
            for (g, &e) in gens.iter().zip(exps) {
                for _ in 0..e {
                    term = &term * g;
                }
            }
            acc = &acc + &term;
        }
        if acc.is_exactly_zero() {
            // Fall back to a single nonconstant term when available.
            let g = gens.first().cloned().unwrap_or_else(Expr::one);
            acc = &Expr::int(self.nonzero_int(3)) * &g;
        }
        acc
    }
}

/// All exponent vectors of length `n` with total degree at most `max_degree`,
/// in a fixed order.
pub fn exponent_vectors(n: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(n, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_degree, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_is_deterministic() {
        let a = SampleBox::default().sampler(7).point(3);
        let b = SampleBox::default().sampler(7).point(3);
        assert_eq!(a, b);
        for c in a.coords() {
            assert!(c.denom() <= &BigInt::from(10));
            assert!(c.numer().magnitude() <= &num_bigint::BigUint::from(100u32));
        }
    }

    #[test]
    fn exponent_vector_count() {
        // C(n + d, d)
        assert_eq!(exponent_vectors(3, 2).len(), 10);
        assert_eq!(exponent_vectors(2, 3).len(), 10);
        assert_eq!(exponent_vectors(0, 3).len(), 1);
    }

    #[test]
    fn poly_gen_is_deterministic_and_nonzero() {
        let gens = [Expr::coord(0), Expr::coord(1)];
        let a = PolyGen::new(3).poly_in(&gens, 2);
        let b = PolyGen::new(3).poly_in(&gens, 2);
        assert_eq!(a, b);
        assert!(!a.is_exactly_zero());
    }
}
