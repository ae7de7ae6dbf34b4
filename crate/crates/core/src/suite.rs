//! The invariant suite: every identity of the theory, run as a named check
//! against one structure on seeded fixtures.
//!
//! Each check draws its fixtures from a generator seeded by the suite seed
//! and the check name, so results do not depend on execution order. The
//! report lists checks sorted by name.

use std::cell::Cell;
use std::fmt;

use crate::algebroid::{
    algebroid_bracket, check_leibniz, function_section, is_symmetric_section, morphism_r,
    morphism_s, reconstruction_holds, AlgebroidError, AlgebroidSection, ClosedTwoForm,
};
use crate::duality::StructureClass;
use crate::duality::{
    compute_dual, dual_system_rank, verify_dual_identities, AccStructure, AcpjStructure,
    DualReport, DualityError,
};
use crate::exterior::{
    exterior_derivative, interior_form, lie_bracket, lie_derivative_form, pairing, schouten,
    DiffForm, ExteriorError, MultiVector,
};
use crate::fixtures::{
    acpj_symmetry_fields, generator_basis, random_member, random_pair, random_vector,
    reeb_commuting_fields, Conditions,
};
use crate::sampling::{PolyGen, SampleBox};
use crate::symalg::{
    bracket_Omega, bracket_Omega_unchecked, bracket_acc, bracket_omega, centralizer_prediction,
    classify_generator, half_difference, hamiltonian_commutator, is_conserved, is_symmetry,
    is_symmetry_direct, lie_derive_pair, lift_of_product_check, pair_lift_commutator,
    poisson_bracket, pre_hamiltonian_lift, product, reeb_condition, reeb_generator_commutator,
    reeb_hamiltonian_commutator, PairFH, SymalgError, SymmetryTarget,
};
use crate::symexpr::{Expr, ZeroPolicy};

/// Suite parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub policy: ZeroPolicy,
    /// Seeded cases per property.
    pub cases: usize,
    /// Seeded pairs for the symmetry agreement check.
    pub symmetry_cases: usize,
    /// Random forms per degree for `d∘d = 0`.
    pub form_cases: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            policy: ZeroPolicy::Exact,
            cases: 10,
            symmetry_cases: 20,
            form_cases: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub class: Option<StructureClass>,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .collect()
    }
}

/// Expected dual in closed form, compared by exact normal forms.
#[derive(Clone, Debug)]
pub struct ExpectedDual {
    pub reeb: Option<MultiVector>,
    pub lambda: Option<MultiVector>,
}

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

type CheckResult = Result<Verdict, String>;

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs `n` cases; the first failing case ends the check.
fn cases(n: usize, mut case: impl FnMut(usize) -> Result<bool, String>) -> CheckResult {
    for i in 0..n {
        if !case(i)? {
            return Ok(Verdict::Fail(format!("case {i} of {n} failed")));
        }
    }
    Ok(Verdict::Pass(format!("{n} cases")))
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    if ok {
        Verdict::Pass(detail.into())
    } else {
        Verdict::Fail(detail.into())
    }
}

/// FNV-1a, used to derive per-check seeds.
fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

struct Bases {
    acc: Vec<PairFH>,
    omega: Vec<PairFH>,
    conserved: Vec<PairFH>,
    reeb_omega: Vec<PairFH>,
}

struct Ctx<'a> {
    s: &'a AccStructure,
    d: &'a AcpjStructure,
    f: ClosedTwoForm,
    cfg: &'a SuiteConfig,
    bases: Bases,
    acc_calls: Cell<usize>,
    acc_mismatches: Cell<usize>,
}

impl Ctx<'_> {
    fn policy(&self) -> &ZeroPolicy {
        &self.cfg.policy
    }

    fn dim(&self) -> usize {
        self.s.dim()
    }

    fn gen(&self, name: &str) -> PolyGen {
        PolyGen::new(self.cfg.seed ^ name_hash(name))
    }

    fn zero(&self, e: &Expr) -> Result<bool, String> {
        e.is_zero(self.policy()).map_err(err)
    }

    fn pairs_eq(&self, a: &PairFH, b: &PairFH) -> Result<bool, String> {
        a.equals(b, self.policy()).map_err(err)
    }

    fn vec_eq(&self, a: &MultiVector, b: &MultiVector) -> Result<bool, String> {
        a.equals(b, self.policy()).map_err(err)
    }

    fn sec_eq(&self, a: &AlgebroidSection, b: &AlgebroidSection) -> Result<bool, String> {
        a.equals(b, self.policy()).map_err(err)
    }

    /// `bracket_acc`, counting calls and disagreements between its forms.
    fn acc(&self, p1: &PairFH, p2: &PairFH) -> Result<PairFH, String> {
        self.acc_calls.set(self.acc_calls.get() + 1);
        match bracket_acc(self.d, p1, p2, self.policy()) {
            Ok(r) => Ok(r),
            Err(e @ SymalgError::BracketMismatch(_)) => {
                self.acc_mismatches.set(self.acc_mismatches.get() + 1);
                Err(err(e))
            }
            Err(e) => Err(err(e)),
        }
    }

    fn omega_bracket(&self, p1: &PairFH, p2: &PairFH) -> PairFH {
        bracket_omega(self.d, p1, p2)
    }

    #[allow(non_snake_case)]
    fn Omega_bracket(&self, p1: &PairFH, p2: &PairFH) -> Result<PairFH, String> {
        bracket_Omega(self.d, p1, p2, self.policy()).map_err(err)
    }

    fn member(&self, basis: &[PairFH], gen: &mut PolyGen) -> PairFH {
        random_member(basis, gen)
    }

    fn random_pair(&self, gen: &mut PolyGen) -> PairFH {
        random_pair(self.dim(), gen)
    }

    fn random_section(&self, gen: &mut PolyGen) -> AlgebroidSection {
        let coords: Vec<Expr> = (0..self.dim()).map(Expr::coord).collect();
        AlgebroidSection::new(random_vector(self.dim(), gen), gen.poly_in(&coords, 2))
    }

    /// Sections meeting the symmetric-section conditions: images of
    /// generators, plus `(0, g)` with `g` conserved.
    fn symmetric_section(&self, gen: &mut PolyGen) -> Result<AlgebroidSection, String> {
        let g = self.member(&self.bases.conserved, gen).f;
        self.image_section(gen)?
            .add(&function_section(self.dim(), g))
            .map_err(err)
    }

    /// Symmetric sections in the image of `s`: `s(p) + (0, c)` with `c`
    /// constant. On these `r` inverts `s`.
    fn image_section(&self, gen: &mut PolyGen) -> Result<AlgebroidSection, String> {
        let p = self.member(&self.bases.acc, gen);
        let c = Expr::int(gen.small_int(5));
        morphism_s(self.d, &p)
            .add(&function_section(self.dim(), c))
            .map_err(err)
    }

    fn random_form(&self, degree: usize, gen: &mut PolyGen) -> DiffForm {
        let coords: Vec<Expr> = (0..self.dim()).map(Expr::coord).collect();
        let mut out = DiffForm::zero(self.dim(), degree).expect("degree within chart");
        let keys = index_sets(self.dim(), degree);
        for _ in 0..2 {
            let key = &keys[gen.below(keys.len())];
            out.add_component(key, gen.poly_in(&coords, 2))
                .expect("valid key");
        }
        out
    }

    fn random_multivector(&self, degree: usize, gen: &mut PolyGen) -> MultiVector {
        let coords: Vec<Expr> = (0..self.dim()).map(Expr::coord).collect();
        let mut out = MultiVector::zero(self.dim(), degree).expect("degree within chart");
        let keys = index_sets(self.dim(), degree);
        for _ in 0..2 {
            let key = &keys[gen.below(keys.len())];
            out.add_component(key, gen.poly_in(&coords, 1))
                .expect("valid key");
        }
        out
    }
}

/// Strictly increasing index sets of the given length.
fn index_sets(dim: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, k, &mut Vec::new(), &mut out);
    out
}

type Check = fn(&Ctx) -> CheckResult;

/// All suite checks, in name order.
const CHECKS: &[(&str, Check)] = &[
    ("algebroid.antisymmetry", algebroid_antisymmetry),
    ("algebroid.closed_twisting_form", algebroid_closed_form),
    ("algebroid.jacobi", algebroid_jacobi),
    ("algebroid.leibniz", algebroid_leibniz),
    ("algebroid.r_after_s", algebroid_r_after_s),
    ("algebroid.r_intertwines_brackets", algebroid_r_intertwines),
    ("algebroid.reconstruction", algebroid_reconstruction),
    (
        "algebroid.reconstruction_requires_image",
        algebroid_reconstruction_requires_image,
    ),
    ("algebroid.s_is_morphism", algebroid_s_morphism),
    ("algebroid.symmetric_sections_closed", algebroid_closure),
    (
        "duality.hamiltonian_commutator",
        duality_hamiltonian_commutator,
    ),
    (
        "duality.reeb_hamiltonian_commutator",
        duality_reeb_hamiltonian_commutator,
    ),
    ("duality.unique_solution", duality_unique_solution),
    ("exterior.d_squared_zero", exterior_dd),
    (
        "exterior.interior_antiderivation",
        exterior_interior_antiderivation,
    ),
    ("exterior.lie_commutator", exterior_lie_commutator),
    ("exterior.lie_leibniz", exterior_lie_leibniz),
    ("exterior.pairing_alternating", exterior_pairing_alternating),
    (
        "exterior.schouten_antisymmetry",
        exterior_schouten_antisymmetry,
    ),
    ("exterior.schouten_jacobi", exterior_schouten_jacobi),
    ("symalg.antisymmetry", symalg_antisymmetry),
    ("symalg.centralizer", symalg_centralizer),
    ("symalg.closure_Omega", symalg_closure_big_omega),
    ("symalg.closure_omega", symalg_closure_omega),
    ("symalg.derivation_Omega", symalg_derivation),
    ("symalg.half_difference", symalg_half_difference),
    ("symalg.jacobi_Omega", symalg_jacobi),
    (
        "symalg.lie_derivation_bracket",
        symalg_lie_derivation_bracket,
    ),
    (
        "symalg.lie_derivation_membership",
        symalg_lie_derivation_membership,
    ),
    (
        "symalg.lie_derivation_product",
        symalg_lie_derivation_product,
    ),
    ("symalg.lift_commutator", symalg_lift_commutator),
    ("symalg.lift_of_product", symalg_lift_of_product),
    ("symalg.locality", symalg_locality),
    ("symalg.product_laws", symalg_product_laws),
    ("symalg.reduced_commutator", symalg_reduced_commutator),
    ("symalg.reduction_contact", symalg_reduction_contact),
    (
        "symalg.reduction_cosymplectic",
        symalg_reduction_cosymplectic,
    ),
    ("symalg.symmetry_agreement", symalg_symmetry_agreement),
    ("symalg.symmetry_per_tensor", symalg_symmetry_per_tensor),
];

/// Name of the check that aggregates every `bracket_acc` call of a run.
pub const BRACKET_FORMS_CHECK: &str = "symalg.bracket_acc_forms";

/// Every check name the suite can report, sorted.
pub fn check_names() -> Vec<String> {
    let mut names: Vec<String> = CHECKS.iter().map(|(n, _)| n.to_string()).collect();
    names.push(BRACKET_FORMS_CHECK.to_string());
    names.push("duality.class".to_string());
    names.push("duality.expected_dual".to_string());
    names.sort();
    names
}

/// Runs the whole suite against `s`.
pub fn run_suite(
    s: &AccStructure,
    expected: Option<&ExpectedDual>,
    cfg: &SuiteConfig,
) -> SuiteReport {
    let mut out = Vec::new();
    let mut push = |name: &str, status: Status, detail: String| {
        out.push(CheckOutcome {
            name: name.to_string(),
            status,
            detail,
        })
    };
    let class = match crate::duality::classify(s, &cfg.policy) {
        Ok(c) => {
            push("duality.class", Status::Pass, c.name().to_string());
            Some(c)
        }
        Err(e) => {
            push("duality.class", Status::Fail, e.to_string());
            None
        }
    };
    let d = match compute_dual(s, &cfg.policy) {
        Ok(d) => d,
        Err(e) => {
            push("duality.compute_dual", Status::Fail, e.to_string());
            let mut checks = out;
            checks.sort_by(|a, b| a.name.cmp(&b.name));
            return SuiteReport {
                class,
                seed: cfg.seed,
                checks,
            };
        }
    };
    match expected {
        Some(exp) => {
            let reeb_ok = exp
                .reeb
                .as_ref()
                .map_or(Ok(true), |e| d.reeb().equals(e, &cfg.policy));
            let lambda_ok = exp
                .lambda
                .as_ref()
                .map_or(Ok(true), |l| d.lambda().equals(l, &cfg.policy));
            match (reeb_ok, lambda_ok) {
                (Ok(a), Ok(b)) => push(
                    "duality.expected_dual",
                    if a && b { Status::Pass } else { Status::Fail },
                    format!("E matches: {a}, Lambda matches: {b}"),
                ),
                (Err(e), _) | (_, Err(e)) => {
                    push("duality.expected_dual", Status::Fail, e.to_string())
                }
            }
        }
        None => push(
            "duality.expected_dual",
            Status::Skipped,
            "no closed-form dual given".into(),
        ),
    }
    match verify_dual_identities(s, &d, &cfg.policy) {
        Ok(report) => {
            for c in report.checks {
                let status = match (c.holds, c.required) {
                    (true, _) => Status::Pass,
                    (false, true) => Status::Fail,
                    (false, false) => Status::Skipped,
                };
                let detail = if status == Status::Skipped {
                    format!("{} (not expected for {})", c.detail, report.class)
                } else {
                    c.detail
                };
                push(&format!("duality.identity.{}", c.name), status, detail);
            }
        }
        Err(e) => push("duality.identity", Status::Fail, e.to_string()),
    }

    let ctx = match build_ctx(s, &d, cfg) {
        Ok(ctx) => ctx,
        Err(e) => {
            push("fixtures", Status::Fail, e);
            let mut checks = out;
            checks.sort_by(|a, b| a.name.cmp(&b.name));
            return SuiteReport {
                class,
                seed: cfg.seed,
                checks,
            };
        }
    };
    for (name, check) in CHECKS {
        let (status, detail) = match check(&ctx) {
            Ok(Verdict::Pass(d)) => (Status::Pass, d),
            Ok(Verdict::Fail(d)) => (Status::Fail, d),
            Ok(Verdict::Skip(d)) => (Status::Skipped, d),
            Err(e) => (Status::Fail, e),
        };
        push(name, status, detail);
    }
    let calls = ctx.acc_calls.get();
    let mismatches = ctx.acc_mismatches.get();
    push(
        BRACKET_FORMS_CHECK,
        if mismatches == 0 && calls > 0 {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("{calls} calls, {mismatches} disagreements"),
    );
    let mut checks = out;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteReport {
        class,
        seed: cfg.seed,
        checks,
    }
}

fn build_ctx<'a>(
    s: &'a AccStructure,
    d: &'a AcpjStructure,
    cfg: &'a SuiteConfig,
) -> Result<Ctx<'a>, String> {
    let basis = |which, salt: u64| {
        generator_basis(d, which, 2, cfg.seed.wrapping_add(salt), &cfg.policy).map_err(err)
    };
    let bases = Bases {
        acc: basis(Conditions::ACC, 1)?,
        omega: basis(Conditions::OMEGA, 2)?,
        conserved: basis(Conditions::CONSERVED, 3)?,
        reeb_omega: basis(
            Conditions {
                cond1: true,
                cond2: true,
                cond3: false,
            },
            4,
        )?,
    };
    Ok(Ctx {
        s,
        d,
        f: ClosedTwoForm::from_structure(s, &cfg.policy).map_err(err)?,
        cfg,
        bases,
        acc_calls: Cell::new(0),
        acc_mismatches: Cell::new(0),
    })
}

// ---- duality ----

fn duality_unique_solution(c: &Ctx) -> CheckResult {
    let rank = dual_system_rank(c.s, c.s.witness()).map_err(err)?;
    Ok(verdict(
        rank == c.dim(),
        format!("rank {rank} at witness {}", c.s.witness()),
    ))
}

fn duality_reeb_hamiltonian_commutator(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("duality.reeb_hamiltonian_commutator");
    cases(c.cfg.cases, |_| {
        let f = c.random_pair(&mut gen).f;
        let lhs =
            lie_bracket(c.d.reeb(), &crate::symalg::hamiltonian_vector(c.d, &f)).map_err(err)?;
        c.vec_eq(&lhs, &reeb_hamiltonian_commutator(c.d, &f))
    })
}

fn duality_hamiltonian_commutator(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("duality.hamiltonian_commutator");
    cases(c.cfg.cases, |_| {
        let p = c.random_pair(&mut gen);
        let hv = |g: &Expr| crate::symalg::hamiltonian_vector(c.d, g);
        let lhs = lie_bracket(&hv(&p.f), &hv(&p.h)).map_err(err)?;
        c.vec_eq(&lhs, &hamiltonian_commutator(c.d, &p.f, &p.h))
    })
}

// ---- exterior ----

fn exterior_dd(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("exterior.d_squared_zero");
    let degrees = c.dim() - 1;
    let n = c.cfg.form_cases;
    for k in 0..degrees {
        for i in 0..n {
            let a = c.random_form(k, &mut gen);
            let dd = exterior_derivative(&exterior_derivative(&a).map_err(err)?).map_err(err)?;
            if !dd.is_zero(c.policy()).map_err(err)? {
                return Ok(Verdict::Fail(format!("degree {k}, case {i}")));
            }
        }
    }
    Ok(Verdict::Pass(format!(
        "{n} forms of each degree below {degrees}"
    )))
}

fn exterior_interior_antiderivation(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("exterior.interior_antiderivation");
    cases(c.cfg.cases, |i| {
        let ka = 1 + i % 2;
        let a = c.random_form(ka, &mut gen);
        let b = c.random_form(1, &mut gen);
        let x = random_vector(c.dim(), &mut gen);
        let lhs = interior_form(&x, &a.wedge(&b).map_err(err)?).map_err(err)?;
        let first = interior_form(&x, &a).map_err(err)?.wedge(&b).map_err(err)?;
        let second = a.wedge(&interior_form(&x, &b).map_err(err)?).map_err(err)?;
        let second = if ka % 2 == 1 { second.neg() } else { second };
        lhs.equals(&first.add(&second).map_err(err)?, c.policy())
            .map_err(err)
    })
}

fn exterior_lie_leibniz(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("exterior.lie_leibniz");
    cases(c.cfg.cases, |_| {
        let a = c.random_form(1, &mut gen);
        let b = c.random_form(1, &mut gen);
        let x = random_vector(c.dim(), &mut gen);
        let lhs = lie_derivative_form(&x, &a.wedge(&b).map_err(err)?).map_err(err)?;
        let rhs = lie_derivative_form(&x, &a)
            .and_then(|la| la.wedge(&b))
            .and_then(|t| t.add(&a.wedge(&lie_derivative_form(&x, &b)?)?))
            .map_err(err)?;
        lhs.equals(&rhs, c.policy()).map_err(err)
    })
}

fn exterior_lie_commutator(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("exterior.lie_commutator");
    cases(c.cfg.cases, |i| {
        let a = c.random_form(i % 3, &mut gen);
        let x = random_vector(c.dim(), &mut gen);
        let y = random_vector(c.dim(), &mut gen);
        let run = || -> Result<bool, ExteriorError> {
            let lhs = lie_derivative_form(&lie_bracket(&x, &y)?, &a)?;
            let xy = lie_derivative_form(&x, &lie_derivative_form(&y, &a)?)?;
            let yx = lie_derivative_form(&y, &lie_derivative_form(&x, &a)?)?;
            Ok(lhs.equals(&xy.sub(&yx)?, c.policy()).unwrap_or(false))
        };
        run().map_err(err)
    })
}

fn exterior_pairing_alternating(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("exterior.pairing_alternating");
    cases(c.cfg.cases, |_| {
        let a = c.random_form(2, &mut gen);
        let x = random_vector(c.dim(), &mut gen);
        let y = random_vector(c.dim(), &mut gen);
        let xy = pairing(&a, &[&x, &y]).map_err(err)?;
        let yx = pairing(&a, &[&y, &x]).map_err(err)?;
        let xx = pairing(&a, &[&x, &x]).map_err(err)?;
        Ok(c.zero(&(xy + yx))? && c.zero(&xx)?)
    })
}

const SCHOUTEN_DEGREES: [(usize, usize, usize); 3] = [(1, 1, 2), (1, 2, 2), (2, 2, 2)];

fn exterior_schouten_antisymmetry(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("exterior.schouten_antisymmetry");
    cases(c.cfg.cases, |i| {
        let (dp, dq, _) = SCHOUTEN_DEGREES[i % 3];
        let p = c.random_multivector(dp, &mut gen);
        let q = c.random_multivector(dq, &mut gen);
        let pq = schouten(&p, &q).map_err(err)?;
        let qp = schouten(&q, &p).map_err(err)?;
        let sign = if (dp - 1) * (dq - 1) % 2 == 0 { -1 } else { 1 };
        let expected = qp.scale(&Expr::int(sign));
        c.vec_eq(&pq, &expected)
    })
}

/// `(-1)^{(p-1)(r-1)} [P,[Q,R]]` summed cyclically vanishes.
fn exterior_schouten_jacobi(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("exterior.schouten_jacobi");
    cases(c.cfg.cases, |i| {
        let (dp, dq, dr) = SCHOUTEN_DEGREES[i % 3];
        if dp + dq + dr - 2 > c.dim() {
            return Ok(true);
        }
        let p = c.random_multivector(dp, &mut gen);
        let q = c.random_multivector(dq, &mut gen);
        let r = c.random_multivector(dr, &mut gen);
        let term = |a: &MultiVector,
                    b: &MultiVector,
                    cc: &MultiVector|
         -> Result<MultiVector, ExteriorError> {
            let inner = schouten(b, cc)?;
            let outer = schouten(a, &inner)?;
            let sign = if (a.degree() - 1) * (cc.degree() - 1) % 2 == 0 {
                1
            } else {
                -1
            };
            Ok(outer.scale(&Expr::int(sign)))
        };
        let sum = term(&p, &q, &r)
            .and_then(|t| t.add(&term(&q, &r, &p)?))
            .and_then(|t| t.add(&term(&r, &p, &q)?))
            .map_err(err)?;
        sum.is_zero(c.policy()).map_err(err)
    })
}

// ---- symalg ----

fn symalg_lift_commutator(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.lift_commutator");
    cases(c.cfg.cases, |_| {
        let p1 = c.random_pair(&mut gen);
        let p2 = c.random_pair(&mut gen);
        let direct = lie_bracket(
            &pre_hamiltonian_lift(c.d, &p1),
            &pre_hamiltonian_lift(c.d, &p2),
        )
        .map_err(err)?;
        c.vec_eq(&pair_lift_commutator(c.d, &p1, &p2), &direct)
    })
}

fn symalg_closure_omega(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.closure_omega");
    if c.bases.omega.is_empty() {
        return Ok(Verdict::Skip(
            "no polynomial generators of omega symmetries".into(),
        ));
    }
    cases(c.cfg.cases, |_| {
        let p1 = c.member(&c.bases.omega, &mut gen);
        let p2 = c.member(&c.bases.omega, &mut gen);
        let r = c.omega_bracket(&p1, &p2);
        let class = classify_generator(c.d, &r, c.policy()).map_err(err)?;
        let lifted = lie_bracket(
            &pre_hamiltonian_lift(c.d, &p1),
            &pre_hamiltonian_lift(c.d, &p2),
        )
        .map_err(err)?;
        Ok(class.lgen_omega() && c.vec_eq(&pre_hamiltonian_lift(c.d, &r), &lifted)?)
    })
}

fn symalg_closure_big_omega(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.closure_Omega");
    cases(c.cfg.cases, |_| {
        let p1 = c.member(&c.bases.conserved, &mut gen);
        let p2 = c.member(&c.bases.conserved, &mut gen);
        let r = c.Omega_bracket(&p1, &p2)?;
        let lifted = lie_bracket(
            &pre_hamiltonian_lift(c.d, &p1),
            &pre_hamiltonian_lift(c.d, &p2),
        )
        .map_err(err)?;
        Ok(is_conserved(c.d, &r.f, c.policy()).map_err(err)?
            && c.vec_eq(&pre_hamiltonian_lift(c.d, &r), &lifted)?)
    })
}

fn symalg_jacobi(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.jacobi_Omega");
    cases(c.cfg.cases, |_| {
        let p: Vec<PairFH> = (0..3)
            .map(|_| c.member(&c.bases.conserved, &mut gen))
            .collect();
        let cyc = |a: &PairFH, b: &PairFH, cc: &PairFH| -> Result<PairFH, String> {
            c.Omega_bracket(a, &c.Omega_bracket(b, cc)?)
        };
        let sum = cyc(&p[0], &p[1], &p[2])?
            .add(&cyc(&p[1], &p[2], &p[0])?)
            .add(&cyc(&p[2], &p[0], &p[1])?);
        sum.is_zero(c.policy()).map_err(err)
    })
}

fn symalg_antisymmetry(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.antisymmetry");
    cases(c.cfg.cases, |_| {
        let (a, b) = (c.random_pair(&mut gen), c.random_pair(&mut gen));
        let omega_ok = c
            .omega_bracket(&a, &b)
            .add(&c.omega_bracket(&b, &a))
            .is_zero(c.policy())
            .map_err(err)?;
        let (a, b) = (
            c.member(&c.bases.conserved, &mut gen),
            c.member(&c.bases.conserved, &mut gen),
        );
        let big_ok = c
            .Omega_bracket(&a, &b)?
            .add(&c.Omega_bracket(&b, &a)?)
            .is_zero(c.policy())
            .map_err(err)?;
        let (a, b) = (
            c.member(&c.bases.acc, &mut gen),
            c.member(&c.bases.acc, &mut gen),
        );
        let acc_ok = c
            .acc(&a, &b)?
            .add(&c.acc(&b, &a)?)
            .is_zero(c.policy())
            .map_err(err)?;
        Ok(omega_ok && big_ok && acc_ok)
    })
}

/// Brackets with the zero pair vanish, and brackets are first order in each
/// argument: scaling by a function with a double zero at a point kills the
/// bracket there.
fn symalg_locality(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.locality");
    let mut sampler = SampleBox::default().sampler(c.cfg.seed ^ name_hash("symalg.locality"));
    cases(c.cfg.cases, |_| {
        let (a, b) = (c.random_pair(&mut gen), c.random_pair(&mut gen));
        let zero_ok = c
            .omega_bracket(&PairFH::zero(), &b)
            .is_zero(c.policy())
            .map_err(err)?
            && bracket_Omega_unchecked(c.d, &PairFH::zero(), &b)
                .is_zero(c.policy())
                .map_err(err)?;
        let pt = sampler.point(c.dim());
        let bump = pt
            .coords()
            .iter()
            .enumerate()
            .fold(Expr::zero(), |acc, (i, v)| {
                let t = Expr::coord(i) - Expr::constant(v.clone());
                acc + &t * &t
            });
        let r = c.omega_bracket(&a.scale(&bump), &b);
        let r2 = bracket_Omega_unchecked(c.d, &a.scale(&bump), &b);
        let vanish = |e: &Expr| -> Result<bool, String> {
            use num_traits::Zero;
            Ok(e.eval(pt.coords()).map_err(err)?.is_zero())
        };
        Ok(zero_ok && vanish(&r.f)? && vanish(&r.h)? && vanish(&r2.f)? && vanish(&r2.h)?)
    })
}

fn symalg_reduction_cosymplectic(c: &Ctx) -> CheckResult {
    if c.s.domega().nnz() != 0 && !c.s.domega().is_zero(c.policy()).map_err(err)? {
        return Ok(Verdict::Skip("d omega does not vanish".into()));
    }
    let mut gen = c.gen("symalg.reduction_cosymplectic");
    // every generator has constant h
    for p in &c.bases.acc {
        let dim = c.dim();
        if !crate::exterior::differential(dim, &p.h)
            .is_zero(c.policy())
            .map_err(err)?
        {
            return Ok(Verdict::Fail("generator with nonconstant h".into()));
        }
    }
    cases(c.cfg.cases, |_| {
        let f1 = c.member(&c.bases.conserved, &mut gen).f;
        let f2 = c.member(&c.bases.conserved, &mut gen).f;
        let p1 = PairFH::new(f1.clone(), Expr::int(gen.small_int(5)));
        let p2 = PairFH::new(f2.clone(), Expr::int(gen.small_int(5)));
        if !classify_generator(c.d, &p1, c.policy())
            .map_err(err)?
            .lgen_acc()
        {
            return Ok(false);
        }
        let expected = PairFH::new(poisson_bracket(c.d, &f1, &f2), Expr::zero());
        c.pairs_eq(&c.acc(&p1, &p2)?, &expected)
    })
}

fn symalg_reduction_contact(c: &Ctx) -> CheckResult {
    let domega_is_omega = c.s.domega().equals(c.s.Omega(), c.policy()).map_err(err)?;
    if !domega_is_omega {
        return Ok(Verdict::Skip("Omega differs from d omega".into()));
    }
    let mut gen = c.gen("symalg.reduction_contact");
    // every generator lifts to a field of the form df♯ - f E
    for p in &c.bases.acc {
        let dim = c.dim();
        if !crate::exterior::differential(dim, &(&p.f + &p.h))
            .is_zero(c.policy())
            .map_err(err)?
        {
            return Ok(Verdict::Fail("generator with d(f + h) != 0".into()));
        }
    }
    cases(c.cfg.cases, |_| {
        let f1 = c.member(&c.bases.conserved, &mut gen).f;
        let f2 = c.member(&c.bases.conserved, &mut gen).f;
        let p1 = PairFH::new(f1.clone(), -&f1);
        let p2 = PairFH::new(f2.clone(), -&f2);
        if !classify_generator(c.d, &p1, c.policy())
            .map_err(err)?
            .lgen_acc()
        {
            return Ok(false);
        }
        let pb = poisson_bracket(c.d, &f1, &f2);
        let expected = PairFH::new(pb.clone(), -pb);
        c.pairs_eq(&c.acc(&p1, &p2)?, &expected)
    })
}

/// Pairs drawn for the symmetry comparisons: generators, conserved pairs and
/// unconstrained pairs.
fn symmetry_pairs(c: &Ctx, name: &str) -> Vec<PairFH> {
    let mut gen = c.gen(name);
    (0..c.cfg.symmetry_cases)
        .map(|i| match i % 4 {
            0 | 1 => c.member(&c.bases.acc, &mut gen),
            2 => c.member(&c.bases.conserved, &mut gen),
            _ => c.random_pair(&mut gen),
        })
        .collect()
}

/// The predicates for symmetries of `(ω, Ω)` and of `(E, Λ)` agree with each
/// other and with direct Lie derivatives of all four tensors along the lift.
fn symalg_symmetry_agreement(c: &Ctx) -> CheckResult {
    let pairs = symmetry_pairs(c, "symalg.symmetry_agreement");
    let mut positives = 0;
    for (i, pair) in pairs.iter().enumerate() {
        let pred = |w| is_symmetry(w, c.d, pair, c.policy()).map_err(err);
        let direct = |w| is_symmetry_direct(w, c.s, c.d, pair, c.policy()).map_err(err);
        let acc = pred(SymmetryTarget::Acc)?;
        let acpj = pred(SymmetryTarget::Acpj)?;
        let forms = direct(SymmetryTarget::Omega1)? && direct(SymmetryTarget::Omega2)?;
        let fields = direct(SymmetryTarget::Reeb)? && direct(SymmetryTarget::Lambda)?;
        positives += usize::from(acc);
        if acc != acpj || acc != forms || acc != fields {
            return Ok(Verdict::Fail(format!(
                "case {i}: acc {acc}, acpj {acpj}, direct (omega, Omega) {forms}, \
                 direct (E, Lambda) {fields}"
            )));
        }
    }
    Ok(Verdict::Pass(format!(
        "{} pairs, {positives} symmetric",
        pairs.len()
    )))
}

/// Each single-tensor predicate is sufficient for the direct condition. It is
/// also necessary when the lift is injective modulo constants, which holds
/// wherever `ω ∧ dω` is nonzero. Otherwise pairs `(f + φ, h)` with
/// `dφ ∧ ω = 0` share a lift with `(f, h)`, so the converse is counted and
/// reported but not required.
fn symalg_symmetry_per_tensor(c: &Ctx) -> CheckResult {
    let pairs = symmetry_pairs(c, "symalg.symmetry_per_tensor");
    let injective =
        !c.s.omega()
            .wedge(c.s.domega())
            .map_err(err)?
            .is_zero(c.policy())
            .map_err(err)?;
    let mut converse_gaps = 0;
    for (i, pair) in pairs.iter().enumerate() {
        for which in SymmetryTarget::ALL {
            let pred = is_symmetry(which, c.d, pair, c.policy()).map_err(err)?;
            let direct = is_symmetry_direct(which, c.s, c.d, pair, c.policy()).map_err(err)?;
            if pred && !direct {
                return Ok(Verdict::Fail(format!(
                    "case {i}: {which} predicate holds, direct fails"
                )));
            }
            if direct && !pred {
                if injective {
                    return Ok(Verdict::Fail(format!(
                        "case {i}: {which} direct holds, predicate fails"
                    )));
                }
                converse_gaps += 1;
            }
        }
    }
    let note = if injective {
        "lift injective, both directions checked".to_string()
    } else {
        format!(
            "lift has a kernel, {converse_gaps} direct-only symmetries from non-canonical pairs"
        )
    };
    Ok(Verdict::Pass(format!("{} pairs, {note}", pairs.len())))
}

fn symalg_reduced_commutator(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.reduced_commutator");
    cases(c.cfg.cases, |_| {
        let p1 = c.member(&c.bases.reeb_omega, &mut gen);
        let p2 = c.member(&c.bases.reeb_omega, &mut gen);
        let sym = is_symmetry(SymmetryTarget::Reeb, c.d, &p1, c.policy()).map_err(err)?
            && is_symmetry(SymmetryTarget::Reeb, c.d, &p2, c.policy()).map_err(err)?;
        Ok(sym
            && c.vec_eq(
                &pair_lift_commutator(c.d, &p1, &p2),
                &reeb_generator_commutator(c.d, &p1, &p2),
            )?)
    })
}

/// Brackets with constant pairs reproduce the predicted centralizer term,
/// which vanishes for all constants exactly for symmetries of `E`.
fn symalg_centralizer(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.centralizer");
    cases(c.cfg.cases, |i| {
        let pair = if i % 2 == 0 {
            c.member(&c.bases.conserved, &mut gen)
        } else {
            c.member(&c.bases.reeb_omega, &mut gen)
        };
        let k = gen.nonzero_int(5);
        let constant = PairFH::new(Expr::int(gen.small_int(5)), Expr::int(k));
        let r = c.Omega_bracket(&constant, &pair)?;
        let matches = c.pairs_eq(&r, &centralizer_prediction(c.d, &constant, &pair))?;
        let vanishes = r.is_zero(c.policy()).map_err(err)?;
        let cond2 = c.zero(&reeb_condition(c.d, &pair))?;
        let reeb_sym = is_symmetry(SymmetryTarget::Reeb, c.d, &pair, c.policy()).map_err(err)?;
        Ok(matches && vanishes == cond2 && cond2 == reeb_sym)
    })
}

fn symalg_product_laws(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.product_laws");
    cases(c.cfg.cases, |_| {
        let (a, b, d) = (
            c.random_pair(&mut gen),
            c.random_pair(&mut gen),
            c.random_pair(&mut gen),
        );
        Ok(c.pairs_eq(&product(&PairFH::unit(), &a), &a)?
            && c.pairs_eq(&product(&a, &b), &product(&b, &a))?
            && c.pairs_eq(
                &product(&product(&a, &b), &d),
                &product(&a, &product(&b, &d)),
            )?)
    })
}

fn symalg_lift_of_product(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.lift_of_product");
    cases(c.cfg.cases, |_| {
        let (a, b) = (c.random_pair(&mut gen), c.random_pair(&mut gen));
        lift_of_product_check(c.d, &a, &b, c.policy()).map_err(err)
    })
}

fn symalg_derivation(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.derivation_Omega");
    cases(c.cfg.cases, |_| {
        let p: Vec<PairFH> = (0..3)
            .map(|_| c.member(&c.bases.conserved, &mut gen))
            .collect();
        let lhs = c.Omega_bracket(&p[0], &product(&p[1], &p[2]))?;
        let rhs = product(&p[1], &c.Omega_bracket(&p[0], &p[2])?)
            .add(&product(&p[2], &c.Omega_bracket(&p[0], &p[1])?));
        c.pairs_eq(&lhs, &rhs)
    })
}

fn symalg_lie_derivation_product(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.lie_derivation_product");
    let fields = reeb_commuting_fields(c.d, &c.bases.acc, c.policy()).map_err(err)?;
    cases(c.cfg.cases, |i| {
        let x = &fields[i % fields.len()];
        let (a, b) = (
            c.member(&c.bases.conserved, &mut gen),
            c.member(&c.bases.conserved, &mut gen),
        );
        let lhs = lie_derive_pair(x, &product(&a, &b));
        let rhs = product(&lie_derive_pair(x, &a), &b).add(&product(&a, &lie_derive_pair(x, &b)));
        c.pairs_eq(&lhs, &rhs)
    })
}

fn symalg_lie_derivation_membership(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.lie_derivation_membership");
    let fields = reeb_commuting_fields(c.d, &c.bases.acc, c.policy()).map_err(err)?;
    let n = c.cfg.cases.max(fields.len());
    cases(n, |i| {
        let x = &fields[i % fields.len()];
        let p = c.member(&c.bases.conserved, &mut gen);
        is_conserved(c.d, &lie_derive_pair(x, &p).f, c.policy()).map_err(err)
    })
}

fn symalg_lie_derivation_bracket(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.lie_derivation_bracket");
    let fields = acpj_symmetry_fields(c.d, &c.bases.acc, c.policy()).map_err(err)?;
    if fields.is_empty() {
        return Ok(Verdict::Skip(
            "no symmetry fields among the candidates".into(),
        ));
    }
    let n = c.cfg.cases.max(fields.len());
    let verdict = cases(n, |i| {
        let x = &fields[i % fields.len()];
        let (a, b) = (
            c.member(&c.bases.acc, &mut gen),
            c.member(&c.bases.acc, &mut gen),
        );
        let lhs = lie_derive_pair(x, &c.acc(&a, &b)?);
        let rhs = c
            .acc(&lie_derive_pair(x, &a), &b)?
            .add(&c.acc(&a, &lie_derive_pair(x, &b))?);
        c.pairs_eq(&lhs, &rhs)
    })?;
    Ok(match verdict {
        Verdict::Pass(d) => Verdict::Pass(format!("{d}, {} symmetry fields", fields.len())),
        other => other,
    })
}

fn symalg_half_difference(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("symalg.half_difference");
    cases(c.cfg.cases, |_| {
        let (a, b) = (
            c.member(&c.bases.acc, &mut gen),
            c.member(&c.bases.acc, &mut gen),
        );
        c.pairs_eq(&c.acc(&a, &b)?, &half_difference(c.d, &a, &b))
    })
}

// ---- algebroid ----

fn algebroid_closed_form(c: &Ctx) -> CheckResult {
    let dim = c.dim();
    let twist = DiffForm::monomial(dim, &[0, 1], Expr::coord(dim - 1)).map_err(err)?;
    let bad = c.f.form().add(&twist).map_err(err)?;
    let rejected = matches!(
        ClosedTwoForm::new(bad, c.policy()),
        Err(AlgebroidError::NotClosed)
    );
    Ok(verdict(
        rejected,
        "Omega + d omega accepted, perturbation rejected",
    ))
}

fn algebroid_antisymmetry(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.antisymmetry");
    cases(c.cfg.cases, |_| {
        let (a, b) = (c.random_section(&mut gen), c.random_section(&mut gen));
        let ab = algebroid_bracket(&c.f, &a, &b).map_err(err)?;
        let ba = algebroid_bracket(&c.f, &b, &a).map_err(err)?;
        ab.add(&ba).map_err(err)?.is_zero(c.policy()).map_err(err)
    })
}

fn algebroid_jacobi(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.jacobi");
    cases(c.cfg.cases, |_| {
        let s: Vec<AlgebroidSection> = (0..3).map(|_| c.random_section(&mut gen)).collect();
        let br = |a: &AlgebroidSection, b: &AlgebroidSection| algebroid_bracket(&c.f, a, b);
        let run = || -> Result<AlgebroidSection, ExteriorError> {
            br(&s[0], &br(&s[1], &s[2])?)?
                .add(&br(&s[1], &br(&s[2], &s[0])?)?)?
                .add(&br(&s[2], &br(&s[0], &s[1])?)?)
        };
        run().map_err(err)?.is_zero(c.policy()).map_err(err)
    })
}

fn algebroid_leibniz(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.leibniz");
    let coords: Vec<Expr> = (0..c.dim()).map(Expr::coord).collect();
    cases(c.cfg.cases, |_| {
        let (a, b) = (c.random_section(&mut gen), c.random_section(&mut gen));
        let h = gen.poly_in(&coords, 2);
        check_leibniz(&c.f, &a, &b, &h, c.policy()).map_err(err)
    })
}

fn algebroid_s_morphism(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.s_is_morphism");
    cases(c.cfg.cases, |_| {
        let (a, b) = (
            c.member(&c.bases.acc, &mut gen),
            c.member(&c.bases.acc, &mut gen),
        );
        let lhs = morphism_s(c.d, &c.acc(&a, &b)?);
        let rhs =
            algebroid_bracket(&c.f, &morphism_s(c.d, &a), &morphism_s(c.d, &b)).map_err(err)?;
        c.sec_eq(&lhs, &rhs)
    })
}

fn algebroid_r_after_s(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.r_after_s");
    cases(c.cfg.cases, |_| {
        let p = c.member(&c.bases.acc, &mut gen);
        let back = morphism_r(c.s, &morphism_s(c.d, &p)).map_err(err)?;
        c.pairs_eq(&back, &p)
    })
}

fn algebroid_r_intertwines(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.r_intertwines_brackets");
    cases(c.cfg.cases, |_| {
        let a = c.image_section(&mut gen)?;
        let b = c.image_section(&mut gen)?;
        let lhs = morphism_r(c.s, &algebroid_bracket(&c.f, &a, &b).map_err(err)?).map_err(err)?;
        let ra = morphism_r(c.s, &a).map_err(err)?;
        let rb = morphism_r(c.s, &b).map_err(err)?;
        c.pairs_eq(&lhs, &c.acc(&ra, &rb)?)
    })
}

fn algebroid_closure(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.symmetric_sections_closed");
    cases(c.cfg.cases, |_| {
        let a = c.symmetric_section(&mut gen)?;
        let b = c.symmetric_section(&mut gen)?;
        let inputs = is_symmetric_section(c.s, c.d, &a, c.policy()).map_err(err)?
            && is_symmetric_section(c.s, c.d, &b, c.policy()).map_err(err)?;
        let out = algebroid_bracket(&c.f, &a, &b).map_err(err)?;
        Ok(inputs && is_symmetric_section(c.s, c.d, &out, c.policy()).map_err(err)?)
    })
}

fn algebroid_reconstruction(c: &Ctx) -> CheckResult {
    let mut gen = c.gen("algebroid.reconstruction");
    cases(c.cfg.cases, |_| {
        let a = c.image_section(&mut gen)?;
        let lands = classify_generator(c.d, &morphism_r(c.s, &a).map_err(err)?, c.policy())
            .map_err(err)?
            .lgen_acc();
        Ok(lands && reconstruction_holds(c.s, c.d, &a, c.policy()).map_err(err)?)
    })
}

/// The symmetric-section conditions alone do not force reconstruction:
/// `(0, g)` with `g` conserved meets them, yet `r` sends it to `(g, 0)`
/// whose lift `dg♯` is nonzero unless `g` is a Casimir.
fn algebroid_reconstruction_requires_image(c: &Ctx) -> CheckResult {
    for p in &c.bases.conserved {
        let sec = function_section(c.dim(), p.f.clone());
        if crate::symalg::hamiltonian_vector(c.d, &p.f)
            .is_zero(c.policy())
            .map_err(err)?
        {
            continue;
        }
        let symmetric = is_symmetric_section(c.s, c.d, &sec, c.policy()).map_err(err)?;
        let rebuilt = reconstruction_holds(c.s, c.d, &sec, c.policy()).map_err(err)?;
        let names = c.s.chart().names();
        return Ok(verdict(
            symmetric && !rebuilt,
            format!("witness (0, {})", p.f.to_dsl(names)),
        ));
    }
    Ok(Verdict::Skip(
        "every conserved polynomial is a Casimir".into(),
    ))
}

// ---- fault injection ----

/// A single-component perturbation of a dual pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Add to the `Λ` component with the given increasing index pair.
    Lambda(usize, usize),
    /// Add to the `ω` component with the given index.
    Omega(usize),
}

impl Fault {
    /// Every single-component fault on a chart of dimension `dim`.
    pub fn all(dim: usize) -> Vec<Fault> {
        let mut out: Vec<Fault> = (0..dim).map(Fault::Omega).collect();
        for i in 0..dim {
            for j in i + 1..dim {
                out.push(Fault::Lambda(i, j));
            }
        }
        out
    }

    pub fn describe(&self, names: &[String]) -> String {
        match self {
            Fault::Lambda(i, j) => format!("Lambda {}^{}", names[*i], names[*j]),
            Fault::Omega(i) => format!("omega {}", names[*i]),
        }
    }
}

/// The duality identity report for the structure with `fault` applied. A
/// tampered `Λ` is checked against the original `ω`; a tampered `ω` against
/// the original dual.
pub fn identities_under_fault(
    s: &AccStructure,
    d: &AcpjStructure,
    fault: &Fault,
    delta: &Expr,
    policy: &ZeroPolicy,
) -> Result<DualReport, DualityError> {
    let (s2, d2) = match fault {
        Fault::Lambda(i, j) => {
            let mut lambda = d.lambda().clone();
            lambda.add_component(&[*i, *j], delta.clone())?;
            (s.clone(), d.with_lambda(lambda))
        }
        Fault::Omega(i) => {
            let mut omega = s.omega().clone();
            omega.add_component(&[*i], delta.clone())?;
            (s.with_omega_unchecked(omega), d.clone())
        }
    };
    verify_dual_identities(&s2, &d2, policy)
}

/// Names of the required identities that fail under `fault`.
pub fn failing_identities_under_fault(
    s: &AccStructure,
    d: &AcpjStructure,
    fault: &Fault,
    delta: &Expr,
    policy: &ZeroPolicy,
) -> Result<Vec<&'static str>, DualityError> {
    let report = identities_under_fault(s, d, fault, delta, policy)?;
    Ok(report
        .checks
        .iter()
        .filter(|c| c.required && !c.holds)
        .map(|c| c.name)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::get_example;

    #[test]
    fn check_names_are_sorted_and_unique() {
        let names: Vec<&str> = CHECKS.iter().map(|(n, _)| *n).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
    }

    #[test]
    fn index_sets_count() {
        assert_eq!(index_sets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(index_sets(5, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn suite_passes_on_k3() {
        let s = get_example("K3").unwrap().structure;
        let cfg = SuiteConfig {
            form_cases: 20,
            ..SuiteConfig::default()
        };
        let report = run_suite(&s, None, &cfg);
        assert!(report.passed(), "{:#?}", report.failures());
        let mut names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        let copy = names.clone();
        names.sort();
        assert_eq!(names, copy);
    }
}
