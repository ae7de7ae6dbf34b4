//! The twisted algebroid on `TM ⊕ ℝ`: sections `(X, f̆)`, the bracket
//! twisted by a closed 2-form `F`, and the maps to and from pairs.

use thiserror::Error;

use crate::duality::{AccStructure, AcpjStructure};
use crate::exterior::{
    directional, exterior_derivative, interior_form, lie_bracket, lie_derivative_form, pairing,
    DiffForm, ExteriorError, MultiVector,
};
use crate::symalg::{hamiltonian_vector, pre_hamiltonian_lift, reeb_derivative, PairFH};
use crate::symexpr::{Expr, ZeroPolicy, ZeroTestError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebroidError {
    #[error("twisting form is not closed")]
    NotClosed,
    #[error("twisting form must have degree 2, got {0}")]
    NotTwoForm(usize),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    ZeroTest(#[from] ZeroTestError),
}

/// A section `(X, f̆)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidSection {
    pub x: MultiVector,
    pub fbreve: Expr,
}

impl AlgebroidSection {
    pub fn new(x: MultiVector, fbreve: Expr) -> Self {
        Self { x, fbreve }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(MultiVector::zero(dim, 1).expect("dim >= 1"), Expr::zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        Ok(Self::new(
            self.x.add(&other.x)?,
            &self.fbreve + &other.fbreve,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExteriorError> {
        Ok(Self::new(
            self.x.sub(&other.x)?,
            &self.fbreve - &other.fbreve,
        ))
    }

    pub fn scale(&self, g: &Expr) -> Self {
        Self::new(self.x.scale(g), &self.fbreve * g)
    }

    pub fn is_zero(&self, policy: &ZeroPolicy) -> Result<bool, ZeroTestError> {
        Ok(self.x.is_zero(policy)? && self.fbreve.is_zero(policy)?)
    }

    pub fn equals(&self, other: &Self, policy: &ZeroPolicy) -> Result<bool, AlgebroidError> {
        Ok(self.sub(other)?.is_zero(policy)?)
    }

    pub fn to_dsl(&self, names: &[String]) -> String {
        format!("({}, {})", self.x.to_dsl(names), self.fbreve.to_dsl(names))
    }
}

/// A 2-form verified to be closed.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedTwoForm(DiffForm);

impl ClosedTwoForm {
    pub fn new(form: DiffForm, policy: &ZeroPolicy) -> Result<Self, AlgebroidError> {
        if form.degree() != 2 {
            return Err(AlgebroidError::NotTwoForm(form.degree()));
        }
        if form.dim() > 2 && !exterior_derivative(&form)?.is_zero(policy)? {
            return Err(AlgebroidError::NotClosed);
        }
        Ok(Self(form))
    }

    /// `F = Ω + dω`.
    pub fn from_structure(s: &AccStructure, policy: &ZeroPolicy) -> Result<Self, AlgebroidError> {
        Self::new(s.twisted_form(), policy)
    }

    pub fn zero(dim: usize) -> Self {
        Self(DiffForm::zero(dim, 2).expect("dim >= 2"))
    }

    pub fn form(&self) -> &DiffForm {
        &self.0
    }
}

/// `([X_1, X_2], X_1.f̆_2 - X_2.f̆_1 + F(X_1, X_2))`.
pub fn algebroid_bracket(
    f: &ClosedTwoForm,
    a: &AlgebroidSection,
    b: &AlgebroidSection,
) -> Result<AlgebroidSection, ExteriorError> {
    let x = lie_bracket(&a.x, &b.x)?;
    let fb = directional(&a.x, &b.fbreve)? - directional(&b.x, &a.fbreve)?
        + pairing(f.form(), &[&a.x, &b.x])?;
    Ok(AlgebroidSection::new(x, fb))
}

/// `[a; h b]_F = h [a; b]_F + (X_a.h) b`.
pub fn check_leibniz(
    f: &ClosedTwoForm,
    a: &AlgebroidSection,
    b: &AlgebroidSection,
    h: &Expr,
    policy: &ZeroPolicy,
) -> Result<bool, AlgebroidError> {
    let lhs = algebroid_bracket(f, a, &b.scale(h))?;
    let rhs = algebroid_bracket(f, a, b)?
        .scale(h)
        .add(&b.scale(&directional(&a.x, h)?))?;
    lhs.equals(&rhs, policy)
}

/// `s(f, h) = (X_(f,h), f - h)`.
pub fn morphism_s(d: &AcpjStructure, pair: &PairFH) -> AlgebroidSection {
    AlgebroidSection::new(pre_hamiltonian_lift(d, pair), &pair.f - &pair.h)
}

/// `r(X, f̆) = (ω(X) + f̆, ω(X))`.
pub fn morphism_r(s: &AccStructure, sec: &AlgebroidSection) -> Result<PairFH, ExteriorError> {
    let w = pairing(s.omega(), &[&sec.x])?;
    Ok(PairFH::new(&w + &sec.fbreve, w))
}

/// `X = d(ω(X) + f̆)♯ + ω(X) E`.
pub fn reconstruction_holds(
    s: &AccStructure,
    d: &AcpjStructure,
    sec: &AlgebroidSection,
    policy: &ZeroPolicy,
) -> Result<bool, AlgebroidError> {
    let pair = morphism_r(s, sec)?;
    let rebuilt = hamiltonian_vector(d, &pair.f).add(&d.reeb().scale(&pair.h))?;
    Ok(rebuilt.equals(&sec.x, policy)?)
}

/// Sections whose field preserves `ω` and `Ω` and whose function part
/// satisfies `E.f̆ = -E.ω(X)`.
pub fn is_symmetric_section(
    s: &AccStructure,
    d: &AcpjStructure,
    sec: &AlgebroidSection,
    policy: &ZeroPolicy,
) -> Result<bool, AlgebroidError> {
    if !lie_derivative_form(&sec.x, s.omega())?.is_zero(policy)? {
        return Ok(false);
    }
    if !lie_derivative_form(&sec.x, s.Omega())?.is_zero(policy)? {
        return Ok(false);
    }
    let w = interior_form(&sec.x, s.omega())?
        .as_scalar()
        .expect("1-form on a vector");
    Ok((reeb_derivative(d, &sec.fbreve) + reeb_derivative(d, &w)).is_zero(policy)?)
}

/// Section `(0, g)`; symmetric exactly when `g` is conserved.
pub fn function_section(dim: usize, g: Expr) -> AlgebroidSection {
    AlgebroidSection::new(MultiVector::zero(dim, 1).expect("dim >= 1"), g)
}

/// Section `(df♯, 0)`, a convenient non-symmetric test section.
pub fn gradient_section(d: &AcpjStructure, f: &Expr) -> AlgebroidSection {
    AlgebroidSection::new(hamiltonian_vector(d, f), Expr::zero())
}
