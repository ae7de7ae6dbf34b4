//! Acceptance suite: runs every acceptance criterion on the whole corpus and
//! prints one pass/fail line per criterion.

use std::collections::BTreeMap;

use cosymp_core::corpus::{get_example, list_examples};
use cosymp_core::duality::{compute_dual, AccStructure, AcpjStructure};
use cosymp_core::sampling::SampleBox;
use cosymp_core::scalar::rat;
use cosymp_core::suite::{
    failing_identities_under_fault, run_suite, ExpectedDual, Fault, Status, SuiteConfig,
    SuiteReport, BRACKET_FORMS_CHECK,
};
use cosymp_core::{Expr, ZeroPolicy};

const EXACT: ZeroPolicy = ZeroPolicy::Exact;
const ORACLE_TOL: f64 = 1e-9;
const ORACLE_POINTS: usize = 20;

struct Run {
    name: &'static str,
    s: AccStructure,
    d: AcpjStructure,
    report: SuiteReport,
}

struct Criterion {
    id: usize,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: usize, title: &'static str) -> Self {
        Self {
            id,
            title,
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    /// The named check must pass (not merely be skipped) on `run`.
    fn require_pass(&mut self, run: &Run, check: &str) {
        match run.report.get(check) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => self
                .failures
                .push(format!("{}: {check} {} ({})", run.name, c.status, c.detail)),
            None => self.failures.push(format!("{}: {check} missing", run.name)),
        }
    }
}

fn runs() -> Vec<Run> {
    let cfg = SuiteConfig::default();
    list_examples()
        .into_iter()
        .map(|(name, _)| {
            let entry = get_example(name).unwrap();
            let expected = ExpectedDual {
                reeb: entry.expected_reeb.clone(),
                lambda: entry.expected_lambda.clone(),
            };
            let report = run_suite(&entry.structure, Some(&expected), &cfg);
            let d = compute_dual(&entry.structure, &EXACT).unwrap();
            Run {
                name,
                s: entry.structure,
                d,
                report,
            }
        })
        .collect()
}

// ---- independent numeric oracle for the dual pair ----

type Matrix = Vec<Vec<f64>>;

fn dense_form(t: &BTreeMap<Vec<usize>, f64>, n: usize, degree: usize) -> Matrix {
    let mut m = vec![vec![0.0; n]; if degree == 1 { 1 } else { n }];
    for (key, v) in t {
        match key.as_slice() {
            [i] => m[0][*i] = *v,
            [i, j] => {
                m[*i][*j] = *v;
                m[*j][*i] = -*v;
            }
            _ => unreachable!("degree at most two"),
        }
    }
    m
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
fn invert(mut a: Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for j in 0..n {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

/// `E` and `Λ` at a point from `K = Ωᵀ + ω ωᵀ`: `K E = ω` and
/// `Λ = (K⁻¹)ᵀ - E Eᵀ`.
fn oracle_dual(omega: &[f64], big_omega: &Matrix) -> Option<(Vec<f64>, Matrix)> {
    let n = omega.len();
    let k: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| big_omega[j][i] + omega[i] * omega[j])
                .collect()
        })
        .collect();
    let kinv = invert(k)?;
    let e: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| kinv[i][j] * omega[j]).sum())
        .collect();
    let lambda = (0..n)
        .map(|i| (0..n).map(|j| kinv[j][i] - e[i] * e[j]).collect())
        .collect();
    Some((e, lambda))
}

fn check_numeric_dual(run: &Run, seed: u64) -> Result<usize, String> {
    let n = run.s.dim();
    let mut sampler = SampleBox::default().sampler(seed);
    let mut checked = 0;
    while checked < ORACLE_POINTS {
        let pt = sampler.point(n).to_float();
        let x = pt.coords();
        let omega = dense_form(&run.s.omega().eval(x).map_err(|e| e.to_string())?, n, 1);
        let big = dense_form(&run.s.Omega().eval(x).map_err(|e| e.to_string())?, n, 2);
        let Ok(reeb) = run.d.reeb().eval(x) else {
            continue;
        };
        let Ok(lambda) = run.d.lambda().eval(x) else {
            continue;
        };
        let Some((e, l)) = oracle_dual(&omega[0], &big) else {
            continue;
        };
        let reeb = dense_form(&reeb, n, 1);
        let lambda = dense_form(&lambda, n, 2);
        let scale = 1.0
            + e.iter()
                .chain(l.iter().flatten())
                .fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            if (reeb[0][i] - e[i]).abs() > ORACLE_TOL * scale {
                return Err(format!("E^{i} at {x:?}: {} vs {}", reeb[0][i], e[i]));
            }
            for j in 0..n {
                if (lambda[i][j] - l[i][j]).abs() > ORACLE_TOL * scale {
                    return Err(format!(
                        "Lambda^{i}{j} at {x:?}: {} vs {}",
                        lambda[i][j], l[i][j]
                    ));
                }
            }
        }
        checked += 1;
    }
    Ok(checked)
}

#[test]
fn numeric_oracle_inverts_a_known_dual() {
    // C3 at the origin: omega = dz - p dq, Omega = dq ^ dp.
    let (e, l) = oracle_dual(
        &[0.0, 0.0, 1.0],
        &dense_form(&BTreeMap::from([(vec![0, 1], 1.0)]), 3, 2),
    )
    .unwrap();
    assert_eq!(e, vec![0.0, 0.0, 1.0]);
    assert!((l[0][1] + 1.0).abs() < 1e-15 && (l[1][0] - 1.0).abs() < 1e-15);
}

// ---- criteria ----

fn by_name<'a>(runs: &'a [Run], name: &str) -> &'a Run {
    runs.iter().find(|r| r.name == name).expect("corpus entry")
}

fn criterion_1(runs: &[Run]) -> Criterion {
    let mut c = Criterion::new(1, "duality reconstruction");
    for name in ["C3", "K3", "M3"] {
        c.require_pass(by_name(runs, name), "duality.expected_dual");
    }
    let m3b = by_name(runs, "M3b");
    match check_numeric_dual(m3b, 0x5eed) {
        Ok(n) => c.require(n == ORACLE_POINTS, || {
            format!("M3b: only {n} oracle points")
        }),
        Err(e) => c.failures.push(format!("M3b: {e}")),
    }
    c
}

fn criterion_2(runs: &[Run]) -> Criterion {
    let mut c = Criterion::new(2, "dual-pair identities");
    for run in runs {
        c.require_pass(run, "duality.identity.e_lambda_identity");
        c.require_pass(run, "duality.identity.lambda_lambda_identity");
    }
    c.require_pass(by_name(runs, "C3"), "duality.identity.jacobi_pair");
    c.require_pass(by_name(runs, "K3"), "duality.identity.copoisson_pair");
    c
}

fn per_structure(id: usize, title: &'static str, runs: &[Run], checks: &[&str]) -> Criterion {
    let mut c = Criterion::new(id, title);
    for run in runs {
        for check in checks {
            c.require_pass(run, check);
        }
    }
    c
}

fn criterion_7(runs: &[Run]) -> Criterion {
    let mut c = Criterion::new(7, "cosymplectic and contact reductions");
    c.require_pass(by_name(runs, "K3"), "symalg.reduction_cosymplectic");
    c.require_pass(by_name(runs, "C3"), "symalg.reduction_contact");
    c
}

fn criterion_12(runs: &[Run]) -> Criterion {
    let mut c = Criterion::new(12, "fault injection");
    let delta = Expr::constant(rat(1, 100));
    for run in runs {
        let names = run.s.chart().names();
        for fault in Fault::all(run.s.dim()) {
            match failing_identities_under_fault(&run.s, &run.d, &fault, &delta, &EXACT) {
                Ok(failing) => c.require(!failing.is_empty(), || {
                    format!(
                        "{}: {} left every identity intact",
                        run.name,
                        fault.describe(names)
                    )
                }),
                Err(e) => c.failures.push(format!("{}: {e}", run.name)),
            }
        }
    }
    c
}

#[test]
fn acceptance() {
    let runs = runs();
    let criteria = vec![
        criterion_1(&runs),
        criterion_2(&runs),
        per_structure(
            3,
            "lift commutator formula",
            &runs,
            &["symalg.lift_commutator"],
        ),
        per_structure(
            4,
            "bracket closure",
            &runs,
            &["symalg.closure_omega", "symalg.closure_Omega"],
        ),
        per_structure(
            5,
            "Jacobi identity of the conserved bracket",
            &runs,
            &["symalg.jacobi_Omega"],
        ),
        per_structure(
            6,
            "three bracket forms agree",
            &runs,
            &[BRACKET_FORMS_CHECK],
        ),
        criterion_7(&runs),
        per_structure(
            8,
            "symmetry predicates agree with direct Lie derivatives",
            &runs,
            &["symalg.symmetry_agreement", "symalg.symmetry_per_tensor"],
        ),
        per_structure(
            9,
            "product laws, lift identity, derivation",
            &runs,
            &[
                "symalg.product_laws",
                "symalg.lift_of_product",
                "symalg.derivation_Omega",
            ],
        ),
        per_structure(
            10,
            "Lie derivatives along symmetries",
            &runs,
            &[
                "symalg.lie_derivation_membership",
                "symalg.lie_derivation_bracket",
                "symalg.lie_derivation_product",
                "symalg.half_difference",
            ],
        ),
        per_structure(
            11,
            "twisted algebroid",
            &runs,
            &[
                "algebroid.jacobi",
                "algebroid.leibniz",
                "algebroid.s_is_morphism",
                "algebroid.r_after_s",
                "algebroid.r_intertwines_brackets",
                "algebroid.symmetric_sections_closed",
                "algebroid.reconstruction",
            ],
        ),
        criterion_12(&runs),
    ];

    for c in &criteria {
        let status = if c.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {:>2} {status}: {}", c.id, c.title);
        for f in &c.failures {
            println!("    {f}");
        }
    }
    let other: Vec<String> = runs
        .iter()
        .flat_map(|r| {
            r.report
                .failures()
                .into_iter()
                .map(move |c| format!("{}: {} ({})", r.name, c.name, c.detail))
        })
        .collect();
    println!(
        "suite: {} structures, {} failing checks",
        runs.len(),
        other.len()
    );
    for f in &other {
        println!("    {f}");
    }

    let failed: Vec<usize> = criteria
        .iter()
        .filter(|c| !c.failures.is_empty())
        .map(|c| c.id)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    assert!(other.is_empty(), "failing suite checks: {other:?}");
}

#[test]
fn fault_injection_covers_every_component() {
    let entry = get_example("C3").unwrap();
    let faults = Fault::all(entry.structure.dim());
    // three omega components and three Lambda components
    assert_eq!(faults.len(), 6);
    let keys: Vec<Vec<usize>> = faults
        .iter()
        .filter_map(|f| match f {
            Fault::Lambda(i, j) => Some(vec![*i, *j]),
            Fault::Omega(_) => None,
        })
        .collect();
    assert_eq!(keys, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
}
