use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::symexpr::{EvalError, Expr, ZeroPolicy, ZeroTestError};

/// Strictly increasing list of coordinate indices.
pub type IndexSet = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("operands live on charts of dimension {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operation needs degree at least {needed}, got {got}")]
    DegreeTooLow { needed: usize, got: usize },
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("index list {0:?} has a repeated entry or the wrong length")]
    BadIndices(Vec<usize>),
}

/// Marker for the variance of an antisymmetric tensor.
pub trait Variance: Clone + fmt::Debug + PartialEq + 'static {
    /// Prefix printed before each basis index (`d` for forms).
    const BASIS_PREFIX: &'static str;
}

/// Differential forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Covariant;

/// Multivector fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contravariant;

impl Variance for Covariant {
    const BASIS_PREFIX: &'static str = "d";
}

impl Variance for Contravariant {
    const BASIS_PREFIX: &'static str = "∂";
}

/// Antisymmetric tensor field of fixed degree with sparse [`Expr`] components.
///
/// Components are keyed by strictly increasing index sets and follow the
/// determinant convention: `dx^i ∧ dx^j` has the single component `{ij: 1}`.
/// Zero components are never stored.
#[derive(Clone, PartialEq)]
pub struct Antisym<V: Variance> {
    dim: usize,
    degree: usize,
    comps: BTreeMap<IndexSet, Expr>,
    _variance: PhantomData<V>,
}

pub type DiffForm = Antisym<Covariant>;
pub type MultiVector = Antisym<Contravariant>;

/// Sign and sorted copy of `indices`, or `None` if an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(IndexSet, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Sign of the shuffle merging two disjoint increasing sets, with the merge.
pub(crate) fn merge_sign(a: &[usize], b: &[usize]) -> Option<(IndexSet, i32)> {
    let mut inversions = 0usize;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, if inversions % 2 == 0 { 1 } else { -1 }))
}

pub(crate) fn signed(e: Expr, sign: i32) -> Expr {
    if sign < 0 {
        -e
    } else {
        e
    }
}

impl<V: Variance> Antisym<V> {
    pub fn zero(dim: usize, degree: usize) -> Result<Self, ExteriorError> {
        if degree > dim {
            return Err(ExteriorError::DegreeOverflow { degree, dim });
        }
        Ok(Self {
            dim,
            degree,
            comps: BTreeMap::new(),
            _variance: PhantomData,
        })
    }

    pub fn scalar(dim: usize, value: Expr) -> Self {
        let mut out = Self::zero(dim, 0).expect("degree 0 fits");
        out.insert(Vec::new(), value);
        out
    }

    /// `dx^i` or `∂_i`.
    pub fn coordinate(dim: usize, index: usize) -> Result<Self, ExteriorError> {
        Self::basis(dim, &[index])
    }

    /// Basis element for an arbitrary (possibly unsorted) index list.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self, ExteriorError> {
        Self::monomial(dim, indices, Expr::one())
    }

    /// `coeff` times the basis element for `indices`.
    pub fn monomial(dim: usize, indices: &[usize], coeff: Expr) -> Result<Self, ExteriorError> {
        let mut out = Self::zero(dim, indices.len())?;
        out.add_component(indices, coeff)?;
        Ok(out)
    }

    pub fn from_components(
        dim: usize,
        degree: usize,
        comps: impl IntoIterator<Item = (IndexSet, Expr)>,
    ) -> Result<Self, ExteriorError> {
        let mut out = Self::zero(dim, degree)?;
        for (idx, e) in comps {
            out.add_component(&idx, e)?;
        }
        Ok(out)
    }

    /// Vector of degree-1 components `[c_0, .., c_{dim-1}]`.
    pub fn from_vec(values: Vec<Expr>) -> Self {
        let dim = values.len();
        let mut out = Self::zero(dim, 1).expect("degree 1 fits");
        for (i, v) in values.into_iter().enumerate() {
            out.insert(vec![i], v);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Stored (nonzero) components in increasing key order.
    pub fn components(&self) -> impl Iterator<Item = (&IndexSet, &Expr)> {
        self.comps.iter()
    }

    pub fn nnz(&self) -> usize {
        self.comps.len()
    }

    /// Component on an increasing key; zero if absent.
    pub fn get(&self, key: &[usize]) -> Expr {
        self.comps.get(key).cloned().unwrap_or_else(Expr::zero)
    }

    /// Component on any index list, with the antisymmetry sign applied.
    pub fn at(&self, indices: &[usize]) -> Expr {
        match sort_with_sign(indices) {
            Some((key, sign)) => signed(self.get(&key), sign),
            None => Expr::zero(),
        }
    }

    /// Degree-0 value.
    pub fn as_scalar(&self) -> Option<Expr> {
        (self.degree == 0).then(|| self.get(&[]))
    }

    /// Degree-1 components as a dense vector.
    pub fn to_vec(&self) -> Vec<Expr> {
        (0..self.dim).map(|i| self.get(&[i])).collect()
    }

    fn insert(&mut self, key: IndexSet, value: Expr) {
        if value.is_exactly_zero() {
            self.comps.remove(&key);
        } else {
            self.comps.insert(key, value);
        }
    }

    /// Adds `value` to the component at `indices` (any order).
    pub fn add_component(&mut self, indices: &[usize], value: Expr) -> Result<(), ExteriorError> {
        if indices.len() != self.degree {
            return Err(ExteriorError::BadIndices(indices.to_vec()));
        }
        if let Some(&index) = indices.iter().find(|&&i| i >= self.dim) {
            return Err(ExteriorError::IndexOutOfRange {
                index,
                dim: self.dim,
            });
        }
        let (key, sign) =
            sort_with_sign(indices).ok_or_else(|| ExteriorError::BadIndices(indices.to_vec()))?;
        let current = self.get(&key);
        self.insert(key, current + signed(value, sign));
        Ok(())
    }

    fn same_shape(&self, other: &Self) -> Result<(), ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(ExteriorError::BadIndices(vec![self.degree, other.degree]));
        }
        Ok(())
    }

    pub(crate) fn same_dim(&self, other_dim: usize) -> Result<(), ExteriorError> {
        if self.dim != other_dim {
            Err(ExteriorError::DimensionMismatch {
                left: self.dim,
                right: other_dim,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.comps {
            let current = out.get(k);
            out.insert(k.clone(), current + v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    /// Multiplies every component by the function `f`.
    pub fn scale(&self, f: &Expr) -> Self {
        self.map(|e| e * f)
    }

    /// Applies `f` to every stored component.
    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        let mut out = Self::zero(self.dim, self.degree).expect("same degree");
        for (k, v) in &self.comps {
            out.insert(k.clone(), f(v));
        }
        out
    }

    /// Componentwise partial derivative.
    pub fn partial(&self, coord: usize) -> Self {
        self.map(|e| e.differentiate(coord))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_dim(other.dim)?;
        let mut out = Self::zero(self.dim, self.degree + other.degree)?;
        for (a, x) in &self.comps {
            for (b, y) in &other.comps {
                if let Some((key, sign)) = merge_sign(a, b) {
                    let current = out.get(&key);
                    out.insert(key, current + signed(x * y, sign));
                }
            }
        }
        Ok(out)
    }

    /// Contracts a degree-1 tensor of the opposite kind into the first slot:
    /// `(i_v t)(..) = t(v, ..)`.
    pub(crate) fn contract_first(&self, v: &[Expr]) -> Result<Self, ExteriorError> {
        if self.degree == 0 {
            return Err(ExteriorError::DegreeTooLow { needed: 1, got: 0 });
        }
        self.same_dim(v.len())?;
        let mut out = Self::zero(self.dim, self.degree - 1)?;
        for (key, c) in &self.comps {
            for (pos, &i) in key.iter().enumerate() {
                if v[i].is_exactly_zero() {
                    continue;
                }
                let mut rest = key.clone();
                rest.remove(pos);
                let term = signed(&v[i] * c, if pos % 2 == 0 { 1 } else { -1 });
                let current = out.get(&rest);
                out.insert(rest, current + term);
            }
        }
        Ok(out)
    }

    /// Zero test of every component under `policy`.
    pub fn is_zero(&self, policy: &ZeroPolicy) -> Result<bool, ZeroTestError> {
        for v in self.comps.values() {
            if !v.is_zero(policy)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of all components under `policy`.
    pub fn equals(&self, other: &Self, policy: &ZeroPolicy) -> Result<bool, ZeroTestError> {
        if self.dim != other.dim || self.degree != other.degree {
            return Ok(false);
        }
        match self.sub(other) {
            Ok(diff) => diff.is_zero(policy),
            Err(_) => Ok(false),
        }
    }

    /// Numeric components at a point.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<BTreeMap<IndexSet, T>, EvalError> {
        self.comps
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.eval(point)?)))
            .collect()
    }

    /// Component keys rendered as `a^b` using coordinate names.
    pub fn key_name(key: &[usize], names: &[String]) -> String {
        key.iter()
            .map(|&i| names[i].as_str())
            .collect::<Vec<_>>()
            .join("^")
    }

    /// Component map in DSL syntax, e.g. `{q^p: 1, p^z: -p}`.
    pub fn to_dsl(&self, names: &[String]) -> String {
        let body: Vec<String> = self
            .comps
            .iter()
            .map(|(k, v)| format!("{}: {}", Self::key_name(k, names), v.to_dsl(names)))
            .collect();
        format!("{{{}}}", body.join(", "))
    }

    /// Expression form, e.g. `-1*dq^dp + p*dp^dz` style with basis prefixes.
    pub fn to_basis_string(&self, names: &[String]) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .comps
            .iter()
            .map(|(k, v)| {
                let basis = k
                    .iter()
                    .map(|&i| format!("{}{}", V::BASIS_PREFIX, names[i]))
                    .collect::<Vec<_>>()
                    .join("∧");
                if basis.is_empty() {
                    format!("({})", v.to_dsl(names))
                } else {
                    format!("({})·{basis}", v.to_dsl(names))
                }
            })
            .collect();
        terms.join(" + ")
    }
}

impl<V: Variance> fmt::Debug for Antisym<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        write!(
            f,
            "{}[{}]{}",
            V::BASIS_PREFIX,
            self.degree,
            self.to_dsl(&names)
        )
    }
}
