//! Almost-cosymplectic-contact pairs `(ω, Ω)` and their dual
//! almost-coPoisson-Jacobi pairs `(E, Λ)`.

use std::fmt;

use thiserror::Error;

use crate::chart::Chart;
use crate::exterior::{
    copairing, exterior_derivative, interior_form, interior_vector, lambda_sharp_transport,
    lie_derivative_form, schouten, DiffForm, ExteriorError, MultiVector,
};
use crate::linalg::{self, Field, SolveError};
use crate::sampling::{SampleBox, MAX_ATTEMPTS};
use crate::scalar::{ExactPoint, Scalar};
use crate::symexpr::{Expr, Value, ZeroPolicy, ZeroTestError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualityError {
    #[error("omega must be a 1-form and Omega a 2-form on the chart")]
    WrongShape,
    #[error("Omega not closed")]
    NotClosed,
    #[error("omega ∧ Omega^n vanishes identically (degenerate)")]
    Degenerate,
    #[error("witness search failed after {0} samples")]
    WitnessSearchFailed(usize),
    #[error("dual system is singular at the regularity witness")]
    SingularSystem,
    #[error("symbolic elimination found no pivot in column {column}: needs chart restriction")]
    NeedsChartRestriction { column: usize },
    #[error("dual system is inconsistent")]
    Inconsistent,
    #[error("deformation 2-form is not closed")]
    DeformationNotClosed,
    #[error("projection {0:?} applied to the wrong kind of argument")]
    KindMismatch(Projection),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    ZeroTest(#[from] ZeroTestError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureClass {
    Contact,
    Cosymplectic,
    Mixed,
}

impl StructureClass {
    pub fn name(self) -> &'static str {
        match self {
            StructureClass::Contact => "contact",
            StructureClass::Cosymplectic => "cosymplectic",
            StructureClass::Mixed => "mixed",
        }
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Validated pair `(ω, Ω)` with `dΩ = 0` and `ω ∧ Ω^n ≢ 0`.
#[derive(Clone, Debug)]
pub struct AccStructure {
    chart: Chart,
    omega: DiffForm,
    big_omega: DiffForm,
    domega: DiffForm,
    witness: ExactPoint,
}

impl AccStructure {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn omega(&self) -> &DiffForm {
        &self.omega
    }

    #[allow(non_snake_case)]
    pub fn Omega(&self) -> &DiffForm {
        &self.big_omega
    }

    pub fn domega(&self) -> &DiffForm {
        &self.domega
    }

    /// A point where `ω ∧ Ω^n` is nonzero and every component is defined.
    pub fn witness(&self) -> &ExactPoint {
        &self.witness
    }

    /// `ω ∧ Ω^n`.
    pub fn volume(&self) -> Result<DiffForm, ExteriorError> {
        volume_form(&self.omega, &self.big_omega, self.chart.n())
    }

    /// `F = Ω + dω`.
    pub fn twisted_form(&self) -> DiffForm {
        self.big_omega.add(&self.domega).expect("same shape")
    }

    /// Copy with `ω` replaced without revalidation (for fault injection).
    pub fn with_omega_unchecked(&self, omega: DiffForm) -> Self {
        let domega = exterior_derivative(&omega).expect("degree 1");
        Self {
            omega,
            domega,
            ..self.clone()
        }
    }

    /// All component expressions of `ω` and `Ω`.
    fn component_exprs(&self) -> Vec<Expr> {
        self.omega
            .components()
            .chain(self.big_omega.components())
            .map(|(_, e)| e.clone())
            .collect()
    }
}

fn volume_form(
    omega: &DiffForm,
    big_omega: &DiffForm,
    n: usize,
) -> Result<DiffForm, ExteriorError> {
    let mut acc = omega.clone();
    for _ in 0..n {
        acc = acc.wedge(big_omega)?;
    }
    Ok(acc)
}

fn policy_seed(policy: &ZeroPolicy) -> u64 {
    match policy {
        ZeroPolicy::Exact => 0,
        ZeroPolicy::Sampled { seed, .. } => *seed,
    }
}

fn policy_tol(policy: &ZeroPolicy) -> f64 {
    match policy {
        ZeroPolicy::Exact => 0.0,
        ZeroPolicy::Sampled { tol, .. } => *tol,
    }
}

fn value_is_nonzero(v: &Value, tol: f64) -> bool {
    match v {
        Value::Exact(q) => !num_traits::Zero::is_zero(q),
        Value::Float(x) => x.abs() > tol,
    }
}

/// First point of the seeded sequence where `top` is nonzero and all `exprs`
/// are defined.
fn find_witness(
    dim: usize,
    top: &Expr,
    exprs: &[Expr],
    policy: &ZeroPolicy,
) -> Result<ExactPoint, DualityError> {
    let tol = policy_tol(policy);
    let mut sampler = SampleBox::default().sampler(policy_seed(policy));
    for _ in 0..MAX_ATTEMPTS {
        let point = sampler.point(dim);
        if exprs.iter().any(|e| e.evaluate(&point).is_err()) {
            continue;
        }
        if let Ok(v) = top.evaluate(&point) {
            if value_is_nonzero(&v, tol) {
                return Ok(point);
            }
        }
    }
    Err(DualityError::WitnessSearchFailed(MAX_ATTEMPTS))
}

/// Checks `dΩ = 0` and `ω ∧ Ω^n ≢ 0` and finds a regularity witness.
#[allow(non_snake_case)]
pub fn validate_acc(
    chart: &Chart,
    omega: DiffForm,
    Omega: DiffForm,
    policy: &ZeroPolicy,
) -> Result<AccStructure, DualityError> {
    let dim = chart.dim();
    if omega.degree() != 1 || Omega.degree() != 2 || omega.dim() != dim || Omega.dim() != dim {
        return Err(DualityError::WrongShape);
    }
    if !exterior_derivative(&Omega)?.is_zero(policy)? {
        return Err(DualityError::NotClosed);
    }
    let top = volume_form(&omega, &Omega, chart.n())?.get(&(0..dim).collect::<Vec<_>>());
    if top.is_zero(policy)? {
        return Err(DualityError::Degenerate);
    }
    let domega = exterior_derivative(&omega)?;
    let mut s = AccStructure {
        chart: chart.clone(),
        omega,
        big_omega: Omega,
        domega,
        witness: ExactPoint::new(Vec::new()),
    };
    s.witness = find_witness(dim, &top, &s.component_exprs(), policy)?;
    Ok(s)
}

/// Contact iff `Ω = dω`, cosymplectic iff `dω = 0`, mixed otherwise.
pub fn classify(s: &AccStructure, policy: &ZeroPolicy) -> Result<StructureClass, DualityError> {
    if s.big_omega.equals(&s.domega, policy)? {
        Ok(StructureClass::Contact)
    } else if s.domega.is_zero(policy)? {
        Ok(StructureClass::Cosymplectic)
    } else {
        Ok(StructureClass::Mixed)
    }
}

/// Dual pair `(E, Λ)` with cached `ω`, `dω` and `L_E ω`.
#[derive(Clone, Debug)]
pub struct AcpjStructure {
    e: MultiVector,
    lambda: MultiVector,
    omega: DiffForm,
    domega: DiffForm,
    lie_e_omega: DiffForm,
}

impl AcpjStructure {
    /// Assembles a pair from given fields; caches are recomputed from `omega`.
    pub fn from_parts(
        e: MultiVector,
        lambda: MultiVector,
        omega: &DiffForm,
    ) -> Result<Self, ExteriorError> {
        let lie_e_omega = lie_derivative_form(&e, omega)?;
        Ok(Self {
            e,
            lambda,
            omega: omega.clone(),
            domega: exterior_derivative(omega)?,
            lie_e_omega,
        })
    }

    pub fn dim(&self) -> usize {
        self.e.dim()
    }

    pub fn reeb(&self) -> &MultiVector {
        &self.e
    }

    pub fn lambda(&self) -> &MultiVector {
        &self.lambda
    }

    pub fn omega(&self) -> &DiffForm {
        &self.omega
    }

    pub fn domega(&self) -> &DiffForm {
        &self.domega
    }

    /// `L_E ω`.
    pub fn lie_e_omega(&self) -> &DiffForm {
        &self.lie_e_omega
    }

    /// Copy with `Λ` replaced (for fault injection).
    pub fn with_lambda(&self, lambda: MultiVector) -> Self {
        Self {
            lambda,
            ..self.clone()
        }
    }

    /// `Λ(α, β)`.
    pub fn lambda_pair(&self, alpha: &DiffForm, beta: &DiffForm) -> Expr {
        copairing(&self.lambda, &[alpha, beta]).expect("1-forms on the chart")
    }
}

fn zero_test(policy: &ZeroPolicy) -> impl Fn(&Expr) -> bool + '_ {
    move |e: &Expr| match policy {
        ZeroPolicy::Exact if e.is_rational() => e.is_exactly_zero(),
        _ => e.is_zero(policy).unwrap_or(true),
    }
}

/// Coefficient matrix of `{i_V Ω = β, ω(V) = c}`: rows are the components of
/// `i_V Ω` followed by `ω(V)`, columns are the components of `V`.
fn dual_system<T: Clone>(omega: &[T], big_omega: impl Fn(usize, usize) -> T) -> Vec<Vec<T>> {
    let dim = omega.len();
    let mut rows: Vec<Vec<T>> = (0..dim)
        .map(|j| (0..dim).map(|i| big_omega(i, j)).collect())
        .collect();
    rows.push(omega.to_vec());
    rows
}

fn solve_dual<T: Field>(
    a: &[Vec<T>],
    omega: &[T],
    is_zero: impl Fn(&T) -> bool,
) -> Result<(Vec<T>, Vec<Vec<T>>), SolveError> {
    let dim = omega.len();
    let zero = T::zero();
    let one = {
        let mut rhs = vec![zero.clone(); dim + 1];
        rhs[dim] = T::one();
        rhs
    };
    let e = linalg::solve(a, &[one], &is_zero)?.remove(0);
    let rhs: Vec<Vec<T>> = (0..dim)
        .map(|k| {
            let mut b: Vec<T> = omega.iter().map(|w| zero.sub(&e[k].mul(w))).collect();
            b[k] = b[k].add(&T::one());
            b.push(zero.clone());
            b
        })
        .collect();
    let columns = linalg::solve(a, &rhs, &is_zero)?;
    Ok((e, columns))
}

/// `E` and the rows `Λ♯(dx^i)` at a single point.
pub fn pointwise_dual<T: Scalar>(
    s: &AccStructure,
    point: &[T],
) -> Result<(Vec<T>, Vec<Vec<T>>), DualityError> {
    let omega = s
        .omega
        .to_vec()
        .iter()
        .map(|e| e.eval(point).map_err(|_| DualityError::SingularSystem))
        .collect::<Result<Vec<T>, _>>()?;
    let mut big = vec![vec![T::zero(); s.dim()]; s.dim()];
    for (key, e) in s.big_omega.components() {
        let v: T = e.eval(point).map_err(|_| DualityError::SingularSystem)?;
        big[key[0]][key[1]] = v.clone();
        big[key[1]][key[0]] = -v;
    }
    let a = dual_system(&omega, |i, j| big[i][j].clone());
    solve_dual(&a, &omega, |v: &T| v.is_zero()).map_err(|err| match err {
        SolveError::Inconsistent { .. } => DualityError::Inconsistent,
        _ => DualityError::SingularSystem,
    })
}

/// Rank of the dual system at a rational point.
pub fn dual_system_rank(s: &AccStructure, point: &ExactPoint) -> Result<usize, DualityError> {
    let eval = |e: &Expr| {
        e.eval(point.coords())
            .map_err(|_| DualityError::SingularSystem)
    };
    let omega = s
        .omega
        .to_vec()
        .iter()
        .map(eval)
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries =
        vec![vec![num_rational::BigRational::from_integer(0.into()); s.dim()]; s.dim()];
    for i in 0..s.dim() {
        for j in 0..s.dim() {
            entries[i][j] = eval(&s.big_omega.at(&[i, j]))?;
        }
    }
    let a = dual_system(&omega, |i, j| entries[i][j].clone());
    Ok(linalg::rank(&a, |v| num_traits::Zero::is_zero(v)))
}

/// Solves for `E` and `Λ` by fraction-free elimination over the component
/// expressions.
pub fn compute_dual(s: &AccStructure, policy: &ZeroPolicy) -> Result<AcpjStructure, DualityError> {
    let dim = s.dim();
    if s.witness.dim() == dim && dual_system_rank_at_witness(s)? < dim {
        return Err(DualityError::SingularSystem);
    }
    let omega = s.omega.to_vec();
    let a = dual_system(&omega, |i, j| s.big_omega.at(&[i, j]));
    let (e, columns) = solve_dual(&a, &omega, zero_test(policy)).map_err(|err| match err {
        SolveError::NoPivot { column } => DualityError::NeedsChartRestriction { column },
        SolveError::Inconsistent { .. } => DualityError::Inconsistent,
        SolveError::Shape => DualityError::WrongShape,
    })?;
    let mut lambda = MultiVector::zero(dim, 2)?;
    for (i, column) in columns.iter().enumerate() {
        for (j, v) in column.iter().enumerate().skip(i + 1) {
            lambda.add_component(&[i, j], v.clone())?;
        }
    }
    Ok(AcpjStructure::from_parts(
        MultiVector::from_vec(e),
        lambda,
        &s.omega,
    )?)
}

fn dual_system_rank_at_witness(s: &AccStructure) -> Result<usize, DualityError> {
    let exact = s.component_exprs().iter().all(|e| e.is_rational());
    if exact {
        dual_system_rank(s, &s.witness)
    } else {
        let point = s.witness.to_float();
        Ok(match pointwise_dual::<f64>(s, point.coords()) {
            Ok(_) => s.dim(),
            Err(_) => 0,
        })
    }
}

/// `Λ♯(α) = i_α Λ`.
pub fn sharp(d: &AcpjStructure, alpha: &DiffForm) -> Result<MultiVector, ExteriorError> {
    interior_vector(alpha, &d.lambda)
}

/// `Ω♭(X) = i_X Ω`.
pub fn flat(s: &AccStructure, x: &MultiVector) -> Result<DiffForm, ExteriorError> {
    interior_form(x, &s.big_omega)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// `X - ω(X) E`
    P1,
    /// `ω(X) E`
    P2,
    /// `β - β(E) ω`
    Q1,
    /// `β(E) ω`
    Q2,
}

/// Argument of a splitting projection.
#[derive(Clone, Debug, PartialEq)]
pub enum Tangent {
    Vector(MultiVector),
    Covector(DiffForm),
}

pub fn project(
    which: Projection,
    d: &AcpjStructure,
    arg: &Tangent,
) -> Result<Tangent, DualityError> {
    match (which, arg) {
        (Projection::P1 | Projection::P2, Tangent::Vector(x)) => {
            let w = interior_form(x, &d.omega)?.as_scalar().expect("degree 0");
            let along = d.e.scale(&w);
            Ok(Tangent::Vector(if which == Projection::P2 {
                along
            } else {
                x.sub(&along)?
            }))
        }
        (Projection::Q1 | Projection::Q2, Tangent::Covector(beta)) => {
            let b = interior_form(&d.e, beta)?.as_scalar().expect("degree 0");
            let along = d.omega.scale(&b);
            Ok(Tangent::Covector(if which == Projection::Q2 {
                along
            } else {
                beta.sub(&along)?
            }))
        }
        _ => Err(DualityError::KindMismatch(which)),
    }
}

/// Outcome of one named identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// Whether the identity is expected for this structure class.
    pub required: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualReport {
    pub class: StructureClass,
    pub checks: Vec<IdentityCheck>,
}

impl DualReport {
    pub fn all_required_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds || !c.required)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Right-hand side of `[E, Λ] = -E ∧ Λ♯(L_E ω)`.
pub fn reeb_lambda_rhs(d: &AcpjStructure) -> Result<MultiVector, ExteriorError> {
    Ok(d.e.wedge(&sharp(d, &d.lie_e_omega)?)?.neg())
}

/// Right-hand side of `[Λ, Λ] = 2 E ∧ (Λ♯ ⊗ Λ♯)(dω)`.
pub fn lambda_lambda_rhs(d: &AcpjStructure) -> Result<MultiVector, ExteriorError> {
    let transported = lambda_sharp_transport(&d.lambda, &d.domega)?;
    Ok(d.e.wedge(&transported)?.scale(&Expr::int(2)))
}

/// Checks every defining property of the dual pair and the bracket identities.
pub fn verify_dual_identities(
    s: &AccStructure,
    d: &AcpjStructure,
    policy: &ZeroPolicy,
) -> Result<DualReport, DualityError> {
    let class = classify(s, policy)?;
    let dim = s.dim();
    let mut checks = Vec::new();
    let mut push = |name: &'static str, holds: bool, required: bool, detail: String| {
        checks.push(IdentityCheck {
            name,
            holds,
            required,
            detail,
        })
    };

    let e_omega = interior_form(&d.e, &s.omega)?
        .as_scalar()
        .expect("degree 0");
    push(
        "reeb_normalization",
        (&e_omega - &Expr::one()).is_zero(policy)?,
        true,
        "i_E omega = 1".into(),
    );
    push(
        "reeb_kernel",
        interior_form(&d.e, &s.big_omega)?.is_zero(policy)?,
        true,
        "i_E Omega = 0".into(),
    );
    push(
        "lambda_annihilates_omega",
        interior_vector(&s.omega, &d.lambda)?.is_zero(policy)?,
        true,
        "i_omega Lambda = 0".into(),
    );

    let mut sharp_flat = true;
    let mut flat_sharp = true;
    for i in 0..dim {
        let x = MultiVector::coordinate(dim, i)?;
        let Tangent::Vector(p1) = project(Projection::P1, d, &Tangent::Vector(x.clone()))? else {
            unreachable!("vector projection");
        };
        sharp_flat &= sharp(d, &flat(s, &x)?)?.equals(&p1, policy)?;
        let beta = DiffForm::coordinate(dim, i)?;
        let Tangent::Covector(q1) = project(Projection::Q1, d, &Tangent::Covector(beta.clone()))?
        else {
            unreachable!("covector projection");
        };
        flat_sharp &= flat(s, &sharp(d, &beta)?)?.equals(&q1, policy)?;
    }
    push(
        "sharp_flat_p1",
        sharp_flat,
        true,
        "Lambda# o Omega_flat = p1".into(),
    );
    push(
        "flat_sharp_q1",
        flat_sharp,
        true,
        "Omega_flat o Lambda# = q1".into(),
    );

    let e_lambda = schouten(&d.e, &d.lambda)?;
    let lambda_lambda = schouten(&d.lambda, &d.lambda)?;
    push(
        "e_lambda_identity",
        e_lambda.equals(&reeb_lambda_rhs(d)?, policy)?,
        true,
        "[E,Lambda] = -E ^ Lambda#(L_E omega)".into(),
    );
    push(
        "lambda_lambda_identity",
        lambda_lambda.equals(&lambda_lambda_rhs(d)?, policy)?,
        true,
        "[Lambda,Lambda] = 2 E ^ (Lambda# x Lambda#)(d omega)".into(),
    );

    let e_lambda_zero = e_lambda.is_zero(policy)?;
    let jacobi_rhs = d.e.wedge(&d.lambda)?.scale(&Expr::int(-2));
    push(
        "jacobi_pair",
        e_lambda_zero && lambda_lambda.equals(&jacobi_rhs, policy)?,
        class == StructureClass::Contact,
        "[E,Lambda] = 0, [Lambda,Lambda] = -2 E ^ Lambda".into(),
    );
    push(
        "copoisson_pair",
        e_lambda_zero && lambda_lambda.is_zero(policy)?,
        class == StructureClass::Cosymplectic,
        "[E,Lambda] = 0, [Lambda,Lambda] = 0".into(),
    );
    Ok(DualReport { class, checks })
}

/// Result of deforming `Ω` by a closed 2-form.
#[derive(Clone, Debug)]
pub enum Deformation {
    Regular(AccStructure),
    Degenerate(DualityError),
}

/// Attempts to validate `(ω, Ω + G)`.
#[allow(non_snake_case)]
pub fn deform(
    s: &AccStructure,
    G: &DiffForm,
    policy: &ZeroPolicy,
) -> Result<Deformation, DualityError> {
    if G.degree() != 2 || G.dim() != s.dim() {
        return Err(DualityError::WrongShape);
    }
    if !exterior_derivative(G)?.is_zero(policy)? {
        return Err(DualityError::DeformationNotClosed);
    }
    let Omega = s.big_omega.add(G)?;
    match validate_acc(&s.chart, s.omega.clone(), Omega, policy) {
        Ok(t) => Ok(Deformation::Regular(t)),
        Err(e @ (DualityError::Degenerate | DualityError::WitnessSearchFailed(_))) => {
            Ok(Deformation::Degenerate(e))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{form_from_text, get_example};
    use crate::scalar::{int, rat};

    const EXACT: ZeroPolicy = ZeroPolicy::Exact;

    fn qpz() -> Chart {
        Chart::new(["q", "p", "z"]).unwrap()
    }

    fn form(degree: usize, comps: &[(&str, &str)]) -> DiffForm {
        form_from_text(&qpz(), degree, comps).unwrap()
    }

    fn dual_of(name: &str) -> (AccStructure, AcpjStructure) {
        let s = get_example(name).unwrap().structure;
        let d = compute_dual(&s, &EXACT).unwrap();
        (s, d)
    }

    #[test]
    fn validation_examples() {
        let c3 = get_example("C3").unwrap().structure;
        assert_eq!(classify(&c3, &EXACT).unwrap(), StructureClass::Contact);
        let degenerate = validate_acc(&qpz(), form(1, &[("z", "1")]), form(2, &[]), &EXACT);
        assert_eq!(degenerate.unwrap_err(), DualityError::Degenerate);
        let m3b = get_example("M3b").unwrap().structure;
        assert_ne!(m3b.witness().coords()[1], int(1));
        let not_closed = validate_acc(
            &qpz(),
            form(1, &[("z", "1")]),
            form(2, &[("q^p", "z")]),
            &EXACT,
        );
        assert_eq!(not_closed.unwrap_err(), DualityError::NotClosed);
    }

    #[test]
    fn classification() {
        for (name, class) in [
            ("C3", StructureClass::Contact),
            ("K3", StructureClass::Cosymplectic),
            ("M3", StructureClass::Mixed),
        ] {
            let s = get_example(name).unwrap().structure;
            assert_eq!(classify(&s, &EXACT).unwrap(), class, "{name}");
        }
    }

    #[test]
    fn duals_of_hand_solved_examples() {
        let (_, k3) = dual_of("K3");
        assert_eq!(k3.reeb(), &MultiVector::coordinate(3, 2).unwrap());
        assert_eq!(k3.lambda().get(&[0, 1]), Expr::int(-1));
        assert_eq!(k3.lambda().nnz(), 1);

        let (_, m3) = dual_of("M3");
        assert_eq!(m3.reeb(), &MultiVector::coordinate(3, 2).unwrap());
        assert_eq!(m3.lambda().get(&[0, 1]), Expr::int(1));
        assert_eq!(m3.lambda().get(&[1, 2]), -Expr::coord(1));
    }

    #[test]
    fn m3b_dual_has_rational_reeb_field() {
        let (s, d) = dual_of("M3b");
        let e = d.reeb();
        let at = [int(3), rat(1, 2), int(-2)];
        assert_eq!(e.get(&[0]).eval(&at).unwrap(), int(2));
        assert_eq!(e.get(&[2]).eval(&at).unwrap(), int(2));
        assert_eq!(e.get(&[1]), Expr::zero());
        let (pe, rows) = pointwise_dual::<f64>(&s, &[3.0, 0.5, -2.0]).unwrap();
        assert!((pe[0] - 2.0).abs() < 1e-12);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let sym: f64 = d
                    .lambda()
                    .at(&[i, j])
                    .eval(&[3.0, 0.5, -2.0])
                    .unwrap_or(0.0);
                let sym = if i == j { 0.0 } else { sym };
                assert!((sym - v).abs() < 1e-12, "{i}{j}");
            }
        }
        assert_eq!(dual_system_rank(&s, s.witness()).unwrap(), 3);
    }

    #[test]
    fn musical_maps_and_projections() {
        let (s, d) = dual_of("M3");
        let omega = s.omega().clone();
        assert_eq!(sharp(&d, &omega).unwrap().nnz(), 0);
        assert_eq!(
            sharp(&d, &DiffForm::coordinate(3, 0).unwrap()).unwrap(),
            MultiVector::coordinate(3, 1).unwrap()
        );
        assert_eq!(flat(&s, d.reeb()).unwrap().nnz(), 0);
        assert_eq!(
            flat(&s, &MultiVector::coordinate(3, 1).unwrap()).unwrap(),
            DiffForm::coordinate(3, 0).unwrap()
        );
        let e = Tangent::Vector(d.reeb().clone());
        assert_eq!(project(Projection::P2, &d, &e).unwrap(), e);
        let Tangent::Vector(p1) = project(Projection::P1, &d, &e).unwrap() else {
            panic!("vector expected")
        };
        assert_eq!(p1.nnz(), 0);
        let dz = Tangent::Covector(DiffForm::coordinate(3, 2).unwrap());
        assert_eq!(
            project(Projection::Q1, &d, &dz).unwrap(),
            Tangent::Covector(form(1, &[("q", "p")]))
        );
        assert!(project(Projection::P1, &d, &dz).is_err());
    }

    #[test]
    fn identity_reports() {
        let (s, d) = dual_of("C3");
        let r = verify_dual_identities(&s, &d, &EXACT).unwrap();
        assert!(r.get("jacobi_pair").unwrap().holds);
        assert!(r.all_required_hold());

        let (s, d) = dual_of("K3");
        let r = verify_dual_identities(&s, &d, &EXACT).unwrap();
        assert!(r.get("copoisson_pair").unwrap().holds);
        assert!(r.all_required_hold());

        let (s, d) = dual_of("M3");
        let r = verify_dual_identities(&s, &d, &EXACT).unwrap();
        assert!(r.get("e_lambda_identity").unwrap().holds);
        assert!(r.get("lambda_lambda_identity").unwrap().holds);
        assert!(!r.get("jacobi_pair").unwrap().holds);
        assert!(r.all_required_hold());
    }

    #[test]
    fn deformations() {
        let c3 = get_example("C3").unwrap().structure;
        match deform(&c3, &form(2, &[]), &EXACT).unwrap() {
            Deformation::Regular(t) => assert_eq!(t.Omega(), c3.Omega()),
            Deformation::Degenerate(e) => panic!("{e}"),
        }
        let minus_domega = c3.domega().neg();
        assert!(matches!(
            deform(&c3, &minus_domega, &EXACT).unwrap(),
            Deformation::Degenerate(DualityError::Degenerate)
        ));
        let k3 = get_example("K3").unwrap().structure;
        match deform(&k3, &form(2, &[("p^z", "-1")]), &EXACT).unwrap() {
            Deformation::Regular(t) => {
                assert_eq!(classify(&t, &EXACT).unwrap(), StructureClass::Cosymplectic)
            }
            Deformation::Degenerate(e) => panic!("{e}"),
        }
        assert_eq!(
            deform(&k3, &form(2, &[("q^p", "z")]), &EXACT).unwrap_err(),
            DualityError::DeformationNotClosed
        );
    }
}
