//! Pairs of functions `(f, h)`, their pre-Hamiltonian lifts, symmetry
//! predicates and the local Lie algebra brackets on them.

use std::fmt;

use thiserror::Error;

use crate::duality::{flat, sharp, AccStructure, AcpjStructure};
use crate::exterior::{
    differential, directional, interior_form, lie_bracket, lie_derivative_form, pairing, schouten,
    DiffForm, ExteriorError, MultiVector,
};
use crate::symexpr::{Expr, ZeroPolicy, ZeroTestError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymalgError {
    #[error("{condition} violated for pair {pair}")]
    Precondition {
        pair: usize,
        condition: &'static str,
    },
    #[error("bracket forms disagree: {0}")]
    BracketMismatch(&'static str),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    ZeroTest(#[from] ZeroTestError),
}

/// A pair of functions `(f, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairFH {
    pub f: Expr,
    pub h: Expr,
}

impl PairFH {
    pub fn new(f: Expr, h: Expr) -> Self {
        Self { f, h }
    }

    pub fn zero() -> Self {
        Self::new(Expr::zero(), Expr::zero())
    }

    pub fn unit() -> Self {
        Self::new(Expr::one(), Expr::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.f + &other.f, &self.h + &other.h)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.f - &other.f, &self.h - &other.h)
    }

    /// Multiplies both members by the function `g`.
    pub fn scale(&self, g: &Expr) -> Self {
        Self::new(&self.f * g, &self.h * g)
    }

    pub fn is_zero(&self, policy: &ZeroPolicy) -> Result<bool, ZeroTestError> {
        Ok(self.f.is_zero(policy)? && self.h.is_zero(policy)?)
    }

    pub fn equals(&self, other: &Self, policy: &ZeroPolicy) -> Result<bool, ZeroTestError> {
        self.sub(other).is_zero(policy)
    }

    pub fn to_dsl(&self, names: &[String]) -> String {
        format!("({}, {})", self.f.to_dsl(names), self.h.to_dsl(names))
    }
}

/// The three conditions characterizing symmetry generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorClass {
    /// `E.f = 0`
    pub cond1: bool,
    /// `E.h + Λ(L_E ω, df) = 0`
    pub cond2: bool,
    /// `σ(Λ♯β) = 0` for every 1-form `β`
    pub cond3: bool,
}

impl GeneratorClass {
    pub fn lgen_omega(&self) -> bool {
        self.cond2 && self.cond3
    }

    #[allow(non_snake_case)]
    pub fn lgen_Omega(&self) -> bool {
        self.cond1
    }

    pub fn lgen_lambda(&self) -> bool {
        self.cond1 && self.cond3
    }

    #[allow(non_snake_case)]
    pub fn lgen_reeb_Omega(&self) -> bool {
        self.cond1 && self.cond2
    }

    pub fn lgen_acc(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }

    /// Membership rows in display order.
    pub fn memberships(&self) -> [(&'static str, bool); 5] {
        [
            ("LGen(omega)", self.lgen_omega()),
            ("LGen(Omega)", self.lgen_Omega()),
            ("LGen(Lambda)", self.lgen_lambda()),
            ("LGen(E,Omega)", self.lgen_reeb_Omega()),
            ("LGen(omega,Omega)", self.lgen_acc()),
        ]
    }
}

/// Tensor fields whose infinitesimal symmetries are tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryTarget {
    Omega1,
    Omega2,
    Reeb,
    Lambda,
    /// The pair `(ω, Ω)`.
    Acc,
    /// The pair `(E, Λ)`.
    Acpj,
}

impl SymmetryTarget {
    pub const ALL: [SymmetryTarget; 6] = [
        SymmetryTarget::Omega1,
        SymmetryTarget::Omega2,
        SymmetryTarget::Reeb,
        SymmetryTarget::Lambda,
        SymmetryTarget::Acc,
        SymmetryTarget::Acpj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryTarget::Omega1 => "omega",
            SymmetryTarget::Omega2 => "Omega",
            SymmetryTarget::Reeb => "E",
            SymmetryTarget::Lambda => "Lambda",
            SymmetryTarget::Acc => "acc",
            SymmetryTarget::Acpj => "acpj",
        }
    }
}

impl fmt::Display for SymmetryTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `{f, g} = Λ(df, dg)`.
pub fn poisson_bracket(d: &AcpjStructure, f: &Expr, g: &Expr) -> Expr {
    let dim = d.dim();
    d.lambda_pair(&differential(dim, f), &differential(dim, g))
}

/// `E.f`.
pub fn reeb_derivative(d: &AcpjStructure, f: &Expr) -> Expr {
    directional(d.reeb(), f).expect("E is a vector field")
}

/// `[f, g] = {f, g} - f E.g + g E.f`.
pub fn jacobi_bracket(d: &AcpjStructure, f: &Expr, g: &Expr) -> Expr {
    poisson_bracket(d, f, g) - f * &reeb_derivative(d, g) + g * &reeb_derivative(d, f)
}

/// `df♯`.
pub fn hamiltonian_vector(d: &AcpjStructure, f: &Expr) -> MultiVector {
    sharp(d, &differential(d.dim(), f)).expect("1-form on the chart")
}

/// `X_f = df♯ - f E`.
pub fn hamilton_jacobi_lift(d: &AcpjStructure, f: &Expr) -> MultiVector {
    hamiltonian_vector(d, f)
        .sub(&d.reeb().scale(f))
        .expect("same shape")
}

/// `X_(f,h) = df♯ + h E`.
pub fn pre_hamiltonian_lift(d: &AcpjStructure, pair: &PairFH) -> MultiVector {
    hamiltonian_vector(d, &pair.f)
        .add(&d.reeb().scale(&pair.h))
        .expect("same shape")
}

pub fn is_conserved(
    d: &AcpjStructure,
    f: &Expr,
    policy: &ZeroPolicy,
) -> Result<bool, ZeroTestError> {
    reeb_derivative(d, f).is_zero(policy)
}

/// `Λ(L_E ω, df)`, the derivative of `f` along `(L_E ω)♯`.
pub fn lie_reeb_omega_derivative(d: &AcpjStructure, f: &Expr) -> Expr {
    d.lambda_pair(d.lie_e_omega(), &differential(d.dim(), f))
}

/// `E.h + Λ(L_E ω, df)`.
pub fn reeb_condition(d: &AcpjStructure, pair: &PairFH) -> Expr {
    reeb_derivative(d, &pair.h) + lie_reeb_omega_derivative(d, &pair.f)
}

/// `σ = i_{df♯} dω + h i_E dω + dh`, which equals `L_{X_(f,h)} ω`.
pub fn symmetry_form(d: &AcpjStructure, pair: &PairFH) -> DiffForm {
    let dim = d.dim();
    let first = interior_form(&hamiltonian_vector(d, &pair.f), d.domega()).expect("2-form");
    let second = interior_form(d.reeb(), d.domega())
        .expect("2-form")
        .scale(&pair.h);
    first
        .add(&second)
        .and_then(|a| a.add(&differential(dim, &pair.h)))
        .expect("same shape")
}

/// Values `σ(Λ♯ dx^i)` for every coordinate covector.
pub fn cond3_values(d: &AcpjStructure, pair: &PairFH) -> Vec<Expr> {
    let sigma = symmetry_form(d, pair);
    (0..d.dim())
        .map(|i| {
            let beta = DiffForm::coordinate(d.dim(), i).expect("index in range");
            let v = sharp(d, &beta).expect("1-form");
            pairing(&sigma, &[&v]).expect("1-form on a vector")
        })
        .collect()
}

fn all_zero(values: &[Expr], policy: &ZeroPolicy) -> Result<bool, ZeroTestError> {
    for v in values {
        if !v.is_zero(policy)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn classify_generator(
    d: &AcpjStructure,
    pair: &PairFH,
    policy: &ZeroPolicy,
) -> Result<GeneratorClass, ZeroTestError> {
    Ok(GeneratorClass {
        cond1: is_conserved(d, &pair.f, policy)?,
        cond2: reeb_condition(d, pair).is_zero(policy)?,
        cond3: all_zero(&cond3_values(d, pair), policy)?,
    })
}

/// `(d(E.f) - (E.f) L_E ω)♯`, which must vanish for symmetries of `E`.
pub fn reeb_symmetry_vector(d: &AcpjStructure, f: &Expr) -> MultiVector {
    let ef = reeb_derivative(d, f);
    let form = differential(d.dim(), &ef)
        .sub(&d.lie_e_omega().scale(&ef))
        .expect("same shape");
    sharp(d, &form).expect("1-form")
}

/// Symmetry predicate through the generator conditions.
pub fn is_symmetry(
    which: SymmetryTarget,
    d: &AcpjStructure,
    pair: &PairFH,
    policy: &ZeroPolicy,
) -> Result<bool, ZeroTestError> {
    let omega_sym = || symmetry_form(d, pair).is_zero(policy);
    Ok(match which {
        SymmetryTarget::Omega1 => omega_sym()?,
        SymmetryTarget::Omega2 => is_conserved(d, &pair.f, policy)?,
        SymmetryTarget::Reeb => {
            reeb_symmetry_vector(d, &pair.f).is_zero(policy)?
                && reeb_condition(d, pair).is_zero(policy)?
        }
        SymmetryTarget::Lambda => classify_generator(d, pair, policy)?.lgen_lambda(),
        SymmetryTarget::Acc | SymmetryTarget::Acpj => {
            is_conserved(d, &pair.f, policy)? && omega_sym()?
        }
    })
}

/// Symmetry predicate by differentiating the tensors along the lift.
pub fn is_symmetry_direct(
    which: SymmetryTarget,
    s: &AccStructure,
    d: &AcpjStructure,
    pair: &PairFH,
    policy: &ZeroPolicy,
) -> Result<bool, SymalgError> {
    let x = pre_hamiltonian_lift(d, pair);
    let omega1 = || -> Result<bool, SymalgError> {
        Ok(lie_derivative_form(&x, s.omega())?.is_zero(policy)?)
    };
    let omega2 = || -> Result<bool, SymalgError> {
        Ok(lie_derivative_form(&x, s.Omega())?.is_zero(policy)?)
    };
    let reeb = || -> Result<bool, SymalgError> { Ok(lie_bracket(&x, d.reeb())?.is_zero(policy)?) };
    let lambda = || -> Result<bool, SymalgError> { Ok(schouten(&x, d.lambda())?.is_zero(policy)?) };
    Ok(match which {
        SymmetryTarget::Omega1 => omega1()?,
        SymmetryTarget::Omega2 => omega2()?,
        SymmetryTarget::Reeb => reeb()?,
        SymmetryTarget::Lambda => lambda()?,
        SymmetryTarget::Acc => omega1()? && omega2()?,
        SymmetryTarget::Acpj => reeb()? && lambda()?,
    })
}

/// `dω(df_1♯, df_2♯)`.
fn domega_of_hamiltonians(d: &AcpjStructure, f1: &Expr, f2: &Expr) -> Expr {
    let x1 = hamiltonian_vector(d, f1);
    let x2 = hamiltonian_vector(d, f2);
    pairing(d.domega(), &[&x1, &x2]).expect("2-form on two vectors")
}

/// `(L_{df♯} + h L_E) ω`.
fn lifted_lie_omega(d: &AcpjStructure, f: &Expr, h: &Expr) -> DiffForm {
    let along_f = lie_derivative_form(&hamiltonian_vector(d, f), d.omega()).expect("1-form");
    along_f.add(&d.lie_e_omega().scale(h)).expect("same shape")
}

/// Right-hand side of the commutator formula for two pre-Hamiltonian lifts,
/// assembled term by term.
pub fn pair_lift_commutator(d: &AcpjStructure, p1: &PairFH, p2: &PairFH) -> MultiVector {
    let dim = d.dim();
    let (f1, h1, f2, h2) = (&p1.f, &p1.h, &p2.f, &p2.h);
    let ef1 = reeb_derivative(d, f1);
    let ef2 = reeb_derivative(d, f2);
    let form = differential(dim, &poisson_bracket(d, f1, f2))
        .add(&lifted_lie_omega(d, f2, h2).scale(&ef1))
        .and_then(|a| a.sub(&lifted_lie_omega(d, f1, h1).scale(&ef2)))
        .and_then(|a| a.sub(&differential(dim, &ef1).scale(h2)))
        .and_then(|a| a.add(&differential(dim, &ef2).scale(h1)))
        .expect("same shape");
    let coeff =
        poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - domega_of_hamiltonians(d, f1, f2)
            + h1 * &reeb_condition(d, p2)
            - h2 * &reeb_condition(d, p1);
    sharp(d, &form)
        .expect("1-form")
        .add(&d.reeb().scale(&coeff))
        .expect("same shape")
}

/// Right side of the formula for `[E, df♯]`.
pub fn reeb_hamiltonian_commutator(d: &AcpjStructure, f: &Expr) -> MultiVector {
    reeb_symmetry_vector(d, f)
        .add(&d.reeb().scale(&lie_reeb_omega_derivative(d, f)))
        .expect("same shape")
}

/// Right side of the formula for `[df♯, dh♯]`.
pub fn hamiltonian_commutator(d: &AcpjStructure, f: &Expr, h: &Expr) -> MultiVector {
    let dim = d.dim();
    let along = |g: &Expr| interior_form(&hamiltonian_vector(d, g), d.domega()).expect("2-form");
    let form = differential(dim, &poisson_bracket(d, f, h))
        .add(&along(h).scale(&reeb_derivative(d, f)))
        .and_then(|a| a.sub(&along(f).scale(&reeb_derivative(d, h))))
        .expect("same shape");
    sharp(d, &form)
        .expect("1-form")
        .sub(&d.reeb().scale(&domega_of_hamiltonians(d, f, h)))
        .expect("same shape")
}

/// Predicted bracket of a constant pair `(c, k)` with a pair whose `f` is
/// conserved: `(0, k (E.h + Λ(L_E ω, df)))`.
pub fn centralizer_prediction(d: &AcpjStructure, constant: &PairFH, pair: &PairFH) -> PairFH {
    PairFH::new(Expr::zero(), &constant.h * &reeb_condition(d, pair))
}

/// `½ (L_{X_1} p_2 - L_{X_2} p_1)`.
pub fn half_difference(d: &AcpjStructure, p1: &PairFH, p2: &PairFH) -> PairFH {
    let a = lie_derive_pair(&pre_hamiltonian_lift(d, p1), p2);
    let b = lie_derive_pair(&pre_hamiltonian_lift(d, p2), p1);
    a.sub(&b).scale(&Expr::constant(crate::scalar::rat(1, 2)))
}

/// Reduced commutator for two symmetry generators of `E`.
pub fn reeb_generator_commutator(d: &AcpjStructure, p1: &PairFH, p2: &PairFH) -> MultiVector {
    let dim = d.dim();
    let (f1, h1, f2, h2) = (&p1.f, &p1.h, &p2.f, &p2.h);
    let lie_along =
        |f: &Expr| lie_derivative_form(&hamiltonian_vector(d, f), d.omega()).expect("1-form");
    let form = differential(dim, &poisson_bracket(d, f1, f2))
        .add(&lie_along(f2).scale(&reeb_derivative(d, f1)))
        .and_then(|a| a.sub(&lie_along(f1).scale(&reeb_derivative(d, f2))))
        .expect("same shape");
    let coeff =
        poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - domega_of_hamiltonians(d, f1, f2);
    sharp(d, &form)
        .expect("1-form")
        .add(&d.reeb().scale(&coeff))
        .expect("same shape")
}

/// Bracket on generators of symmetries of `ω`; evaluated on any pairs.
pub fn bracket_omega(d: &AcpjStructure, p1: &PairFH, p2: &PairFH) -> PairFH {
    let (f1, h1, f2, h2) = (&p1.f, &p1.h, &p2.f, &p2.h);
    let first =
        poisson_bracket(d, f1, f2) - h2 * &reeb_derivative(d, f1) + h1 * &reeb_derivative(d, f2);
    let second =
        poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - domega_of_hamiltonians(d, f1, f2);
    PairFH::new(first, second)
}

fn require(pair: usize, ok: bool, condition: &'static str) -> Result<(), SymalgError> {
    if ok {
        Ok(())
    } else {
        Err(SymalgError::Precondition { pair, condition })
    }
}

/// Bracket on pairs with conserved `f`; the precondition is enforced.
#[allow(non_snake_case)]
pub fn bracket_Omega(
    d: &AcpjStructure,
    p1: &PairFH,
    p2: &PairFH,
    policy: &ZeroPolicy,
) -> Result<PairFH, SymalgError> {
    require(1, is_conserved(d, &p1.f, policy)?, "cond1")?;
    require(2, is_conserved(d, &p2.f, policy)?, "cond1")?;
    Ok(bracket_Omega_unchecked(d, p1, p2))
}

/// The same formula without the membership check.
#[allow(non_snake_case)]
pub fn bracket_Omega_unchecked(d: &AcpjStructure, p1: &PairFH, p2: &PairFH) -> PairFH {
    let (f1, h1, f2, h2) = (&p1.f, &p1.h, &p2.f, &p2.h);
    let second =
        poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - domega_of_hamiltonians(d, f1, f2)
            + h1 * &reeb_condition(d, p2)
            - h2 * &reeb_condition(d, p1);
    PairFH::new(poisson_bracket(d, f1, f2), second)
}

/// The three equivalent forms of the bracket on symmetry generators of `(ω, Ω)`.
pub fn bracket_acc_forms(d: &AcpjStructure, p1: &PairFH, p2: &PairFH) -> [PairFH; 3] {
    let (f1, h1, f2, h2) = (&p1.f, &p1.h, &p2.f, &p2.h);
    let first = poisson_bracket(d, f1, f2);
    let dw = domega_of_hamiltonians(d, f1, f2);
    let line1 = poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - &dw;
    let line2 =
        &dw + h2 * &lie_reeb_omega_derivative(d, f1) - h1 * &lie_reeb_omega_derivative(d, f2);
    let line3 = &dw + h1 * &reeb_derivative(d, h2) - h2 * &reeb_derivative(d, h1);
    [
        PairFH::new(first.clone(), line1),
        PairFH::new(first.clone(), line2),
        PairFH::new(first, line3),
    ]
}

/// Bracket on symmetry generators of `(ω, Ω)`. Membership is enforced and
/// the three equivalent forms are compared before the first is returned.
pub fn bracket_acc(
    d: &AcpjStructure,
    p1: &PairFH,
    p2: &PairFH,
    policy: &ZeroPolicy,
) -> Result<PairFH, SymalgError> {
    for (i, p) in [(1, p1), (2, p2)] {
        let class = classify_generator(d, p, policy)?;
        require(i, class.cond1, "cond1")?;
        require(i, class.cond2, "cond2")?;
        require(i, class.cond3, "cond3")?;
    }
    let [l1, l2, l3] = bracket_acc_forms(d, p1, p2);
    if !l1.equals(&l2, policy)? {
        return Err(SymalgError::BracketMismatch("first and second forms"));
    }
    if !l1.equals(&l3, policy)? {
        return Err(SymalgError::BracketMismatch("first and third forms"));
    }
    Ok(l1)
}

/// `(f_1 f_2, f_1 h_2 + f_2 h_1)`.
pub fn product(p1: &PairFH, p2: &PairFH) -> PairFH {
    PairFH::new(&p1.f * &p2.f, &p1.f * &p2.h + &p2.f * &p1.h)
}

/// `X_{p_1 p_2} = f_1 X_2 + f_2 X_1`.
pub fn lift_of_product_check(
    d: &AcpjStructure,
    p1: &PairFH,
    p2: &PairFH,
    policy: &ZeroPolicy,
) -> Result<bool, ZeroTestError> {
    let lhs = pre_hamiltonian_lift(d, &product(p1, p2));
    let rhs = pre_hamiltonian_lift(d, p2)
        .scale(&p1.f)
        .add(&pre_hamiltonian_lift(d, p1).scale(&p2.f))
        .expect("same shape");
    lhs.equals(&rhs, policy)
}

/// `L_X (f, h) = (X.f, X.h)`.
pub fn lie_derive_pair(x: &MultiVector, pair: &PairFH) -> PairFH {
    PairFH::new(
        directional(x, &pair.f).expect("vector field"),
        directional(x, &pair.h).expect("vector field"),
    )
}

/// `Ω♭(X_(f,h))`, used in the reconstruction identities.
pub fn lift_flat(s: &AccStructure, d: &AcpjStructure, pair: &PairFH) -> DiffForm {
    flat(s, &pre_hamiltonian_lift(d, pair)).expect("vector field")
}
