//! Canonical rational functions `num / den`.
//!
//! Invariants: `gcd(num, den) = 1`, the leading coefficient of `den` is 1,
//! and zero is represented as `0 / 1`. Equal functions therefore have equal
//! representations.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{gcd, Poly};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Division by the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroDenominator;

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ZeroDenominator> {
        if den.is_zero() {
            return Err(ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::normalized_sign(num, den))
    }

    /// Builds from an already coprime pair.
    fn normalized_sign(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            Self { num, den }
        } else {
            let k = lc.recip();
            Self {
                num: num.scale(&k),
                den: den.scale(&k),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(index: usize) -> Self {
        Self::from_poly(Poly::var(index))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            return Self::new(num, self.den.clone()).expect("nonzero denominator");
        }
        // a/b + c/d with g = gcd(b, d): only g can share factors with the sum.
        let g = gcd(&self.den, &other.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        let den = self.den.mul(&d1);
        if g.is_one() {
            return Self::normalized_sign(num, den);
        }
        let g2 = gcd(&num, &g);
        if g2.is_one() {
            Self::normalized_sign(num, den)
        } else {
            Self::normalized_sign(
                num.div_exact(&g2).expect("gcd divides"),
                den.div_exact(&g2).expect("gcd divides"),
            )
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = other.den.div_exact(&g1).expect("gcd divides");
        let c = other.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        Self::normalized_sign(a.mul(&c), b.mul(&d))
    }

    pub fn recip(&self) -> Result<Self, ZeroDenominator> {
        if self.is_zero() {
            return Err(ZeroDenominator);
        }
        Ok(Self::normalized_sign(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ZeroDenominator> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn powi(&self, e: i64) -> Result<Self, ZeroDenominator> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        // Powers of coprime polynomials stay coprime.
        Ok(Self {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn derivative(&self, var: usize) -> Self {
        let dn = self.num.derivative(var);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone()).expect("nonzero denominator");
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Evaluates at `point`; `None` at a pole.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Option<T> {
        let d: T = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval::<T>(point) / d)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars().max(self.den.nvars())
    }
}
