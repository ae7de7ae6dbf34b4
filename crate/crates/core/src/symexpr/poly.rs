//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order on the
//! exponent vector, with no zero coefficients, so two polynomials are equal
//! exactly when their term lists are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::scalar::Scalar;

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one() -> Self {
        Self(SmallVec::new())
    }

    pub fn var(index: usize) -> Self {
        Self::one().with_exponent(index, 1)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Self(exps.iter().copied().collect());
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with_exponent(&self, index: usize, e: u32) -> Self {
        let mut v = self.0.clone();
        if v.len() <= index {
            v.resize(index + 1, 0);
        }
        v[index] = e;
        let mut m = Self(v);
        m.trim();
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Self(v)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.len() <= other.0.len()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &e)| e <= other.exponent(i))
    }

    /// `self / other`; caller guarantees `other` divides `self`.
    pub fn div(&self, other: &Self) -> Self {
        let mut m = Self(
            (0..self.0.len())
                .map(|i| self.exponent(i) - other.exponent(i))
                .collect(),
        );
        m.trim();
        m
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let n = self.0.len().min(other.0.len());
        let mut m = Self((0..n).map(|i| self.0[i].min(other.0[i])).collect());
        m.trim();
        m
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> T {
        let mut acc = T::one();
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                acc = acc * point[i].clone();
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}", self.0.as_slice())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(index: usize) -> Self {
        Self::monomial(Monomial::var(index), BigRational::one())
    }

    fn from_map(map: BTreeMap<Monomial, BigRational>) -> Self {
        let terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(map)
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    /// Number of variable slots touched (highest variable index + 1).
    pub fn nvars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.0.len()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<usize> {
        let n = self.nvars();
        (0..n)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponent(i) > 0))
            .collect()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        // Multiplying by a monomial preserves the term order.
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c * k))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Self { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *map.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Self::from_map(map)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var);
            (e > 0).then(|| {
                (
                    m.with_exponent(var, e - 1),
                    c * BigRational::from_integer(BigInt::from(e)),
                )
            })
        }))
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (m, c)| {
            acc + T::from_rational(c) * m.eval(point)
        })
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => Self::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading()?;
        if divisor.is_constant() {
            return Some(self.scale(&lc.recip()));
        }
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, BigRational)> = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            if !lm.divides(&rm) {
                return None;
            }
            let tm = rm.div(lm);
            let tc = rc / lc;
            rem = rem.sub(&divisor.mul_monomial(&tm, &tc));
            quot.push((tm, tc));
        }
        // Quotient terms come out in strictly decreasing order.
        Some(Self { terms: quot })
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of
    /// `var^k`, a polynomial free of `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            buckets[e].push((m.with_exponent(var, 0), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    fn coeff_in(&self, var: usize, k: u32) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(var) == k)
                .map(|(m, c)| (m.with_exponent(var, 0), c.clone())),
        )
    }

    /// Pseudo-remainder of `self` by `divisor` viewed as polynomials in `var`.
    fn pseudo_rem(&self, divisor: &Self, var: usize) -> Self {
        let db = divisor.degree_in(var);
        let lcb = divisor.coeff_in(var, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lcr = r.coeff_in(var, dr);
            let shift = Monomial::var(var).with_exponent(var, dr - db);
            let shifted = divisor.mul_monomial(&shift, &BigRational::one()).mul(&lcr);
            r = r.mul(&lcb).sub(&shifted);
        }
        r
    }

    /// Content with respect to `var`: the gcd of the coefficients.
    fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(var) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    /// Gcd of the rational coefficients, positive, as a rational number.
    pub fn rational_content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num.abs(), den)
        }
    }
}

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() {
        return monomial_gcd(&a.terms[0].0, b);
    }
    if b.is_monomial() {
        return monomial_gcd(&b.terms[0].0, a);
    }
    if a.total_degree() >= b.total_degree() {
        if a.div_exact(b).is_some() {
            return b.monic();
        }
    } else if b.div_exact(a).is_some() {
        return a.monic();
    }

    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_with_coeffs(b, a, v);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_with_coeffs(a, b, v);
    }

    if va.len() == 1 {
        return univariate_gcd(a, b);
    }

    // Recursive primitive remainder sequence in the variable of lowest degree.
    let var = *va
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .unwrap();
    let ca = a.content_in(var);
    let cb = b.content_in(var);
    let content = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut r0, mut r1) = if pa.degree_in(var) >= pb.degree_in(var) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let g = loop {
        let r = r0.pseudo_rem(&r1, var);
        if r.is_zero() {
            break r1;
        }
        if r.degree_in(var) == 0 {
            break Poly::one();
        }
        let cr = r.content_in(var);
        r0 = r1;
        r1 = r.div_exact(&cr).expect("content divides");
    };
    let cg = g.content_in(var);
    let g = g.div_exact(&cg).expect("content divides");
    content.mul(&g).monic()
}

/// Gcd of `fixed` with every coefficient of `other` in `var` (where `fixed`
/// does not involve `var`).
fn gcd_with_coeffs(fixed: &Poly, other: &Poly, var: usize) -> Poly {
    let mut g = fixed.monic();
    for c in other.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let g = p.terms.iter().fold(m.clone(), |g, (pm, _)| g.gcd(pm));
    Poly::monomial(g, BigRational::one())
}

fn univariate_gcd(a: &Poly, b: &Poly) -> Poly {
    let var = a.vars()[0];
    let (mut r0, mut r1) = if a.degree_in(var) >= b.degree_in(var) {
        (a.monic(), b.monic())
    } else {
        (b.monic(), a.monic())
    };
    while !r1.is_zero() {
        let r = univariate_rem(&r0, &r1, var);
        r0 = r1;
        r1 = r.monic();
    }
    r0.monic()
}

fn univariate_rem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lcb = b.leading_coeff();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let (rm, rc) = r.leading().cloned().unwrap();
        let shift = Monomial::var(var).with_exponent(var, rm.exponent(var) - db);
        r = r.sub(&b.mul_monomial(&shift, &(rc / &lcb)));
    }
    r
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(int(n))
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::from_exponents(&[0, 2]);
        let b = Monomial::from_exponents(&[1, 0, 0]);
        let ab = Monomial::from_exponents(&[1, 1]);
        assert!(a > b);
        assert!(Monomial::from_exponents(&[2]) > ab);
        assert!(ab > a);
        assert_eq!(b, Monomial::var(0));
    }

    #[test]
    fn arithmetic_collects_terms() {
        let p = x(0).add(&x(0));
        assert_eq!(p, x(0).scale(&int(2)));
        let sq = x(0).add(&x(1)).pow(2);
        let expanded = x(0)
            .mul(&x(0))
            .add(&x(0).mul(&x(1)).scale(&int(2)))
            .add(&x(1).mul(&x(1)));
        assert_eq!(sq, expanded);
        assert!(sq.sub(&expanded).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)));
        let b = x(0).sub(&x(1));
        assert_eq!(a.div_exact(&b), Some(x(0).add(&x(1))));
        assert_eq!(x(0).add(&c(1)).div_exact(&x(1)), None);
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)));
        let b = x(0).mul(&x(2)).sub(&x(1).mul(&x(2))).scale(&int(3));
        assert_eq!(gcd(&a, &b), x(0).sub(&x(1)).monic());
    }

    #[test]
    fn gcd_multivariate_prs() {
        // (q + p z + 1)(q - z) and (q + p z + 1)(p^2 + q)
        let g = x(0).add(&x(1).mul(&x(2))).add(&c(1));
        let a = g.mul(&x(0).sub(&x(2)));
        let b = g.mul(&x(1).mul(&x(1)).add(&x(0)));
        assert_eq!(gcd(&a, &b), g.monic());
        let one_minus_p = c(1).sub(&x(1));
        let d = one_minus_p.pow(3);
        let n = one_minus_p.mul(&x(0).add(&x(2)));
        assert_eq!(gcd(&d, &n), one_minus_p.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = x(0).mul(&x(0)).add(&c(1));
        let b = x(0).add(&x(1));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn derivative_and_eval() {
        let p = x(0).mul(&x(1)).add(&x(1).pow(2));
        let dp = p.derivative(1);
        assert_eq!(dp, x(0).add(&x(1).scale(&int(2))));
        let v: BigRational = p.eval(&[int(3), rat(1, 3), int(0)]);
        assert_eq!(v, rat(10, 9));
    }
}
