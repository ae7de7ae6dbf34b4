//! Command implementations. Each returns a finished [`Report`] for
//! mathematical outcomes and a [`CliError`] for usage and input problems.

use std::path::{Path, PathBuf};

use cosymp_core::algebroid::{algebroid_bracket, ClosedTwoForm};
use cosymp_core::corpus::{get_example, list_examples, CATALOGUE};
use cosymp_core::duality::{classify, compute_dual, AccStructure, AcpjStructure, DualReport};
use cosymp_core::scalar::rat;
use cosymp_core::suite::{
    identities_under_fault, run_suite, ExpectedDual, Fault, Status, SuiteConfig,
};
use cosymp_core::symalg::{
    bracket_Omega, bracket_acc, bracket_omega, classify_generator, PairFH, SymalgError,
};
use cosymp_core::{Chart, Expr, ZeroPolicy};
use thiserror::Error;

use crate::args::{Algebra, Cli, Command, GlobalOpts, Input, Mode};
use crate::format::{parse_structure, render_example, FormatError, LoadedStructure, PolicyBlock};
use crate::operands::{self, OperandError};
use crate::report::{components, CheckStatus, ComponentMap, Report, StructureSummary};

/// Usage and input errors; all map to exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("unknown example `{0}`; run `cosymp examples` for the list")]
    UnknownExample(String),
    #[error(transparent)]
    Operand(#[from] OperandError),
    #[error("--tamper: {0}")]
    Tamper(String),
}

impl CliError {
    pub const EXIT_CODE: i32 = 2;
}

const DEFAULT_SAMPLES: usize = 50;
const DEFAULT_TOL: f64 = 1e-9;
const RUNTIME_NOTE: &str =
    "runtime budget: the whole corpus suite is expected to finish in well under 5 minutes";

struct Loaded {
    source: String,
    structure: LoadedStructure,
    expected: Option<ExpectedDual>,
}

fn load(input: &Input) -> Result<Loaded, CliError> {
    if let Some(name) = &input.example {
        let entry = get_example(name).map_err(|_| CliError::UnknownExample(name.clone()))?;
        let s = &entry.structure;
        return Ok(Loaded {
            source: format!("example {name}"),
            structure: LoadedStructure {
                chart: s.chart().clone(),
                omega: s.omega().clone(),
                big_omega: s.Omega().clone(),
                policy: PolicyBlock::default(),
            },
            expected: Some(ExpectedDual {
                reeb: entry.expected_reeb.clone(),
                lambda: entry.expected_lambda.clone(),
            }),
        });
    }
    let path = input.file.as_ref().expect("clap enforces one input");
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    let structure = parse_structure(&text).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })?;
    Ok(Loaded {
        source: path.display().to_string(),
        structure,
        expected: None,
    })
}

/// Flags override the file's policy block, which overrides the defaults.
struct Settings {
    policy: ZeroPolicy,
    seed: u64,
}

fn settings(opts: &GlobalOpts, file: &PolicyBlock) -> Settings {
    let seed = opts.seed.or(file.seed).unwrap_or(0);
    let mode = opts.mode.unwrap_or(match file.mode.as_deref() {
        Some("sampled") => Mode::Sampled,
        _ => Mode::Exact,
    });
    let policy = match mode {
        Mode::Exact => ZeroPolicy::Exact,
        Mode::Sampled => ZeroPolicy::Sampled {
            count: opts.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            seed,
            tol: opts.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
        },
    };
    Settings { policy, seed }
}

fn describe_policy(p: &ZeroPolicy) -> String {
    match p {
        ZeroPolicy::Exact => "exact".to_string(),
        ZeroPolicy::Sampled { count, seed, tol } => {
            format!("sampled (samples {count}, seed {seed}, tol {tol:e})")
        }
    }
}

/// Shared state of the structure-based commands.
struct Session {
    report: Report,
    loaded: Loaded,
    settings: Settings,
}

impl Session {
    fn chart(&self) -> &Chart {
        &self.loaded.structure.chart
    }

    fn names(&self) -> &[String] {
        self.loaded.structure.chart.names()
    }

    /// Validates the structure; a failure is recorded in the report.
    fn validate(&mut self) -> Option<AccStructure> {
        match self.loaded.structure.validate(&self.settings.policy) {
            Ok(s) => {
                self.report
                    .pass("structure.valid", format!("witness {}", s.witness()));
                match classify(&s, &self.settings.policy) {
                    Ok(c) => {
                        self.report.pass("structure.class", c.name());
                        if let Some(summary) = &mut self.report.structure {
                            summary.class = Some(c.name().to_string());
                        }
                    }
                    Err(e) => self.report.fail("structure.class", e.to_string()),
                }
                Some(s)
            }
            Err(e) => {
                self.report.fail("structure.valid", e.to_string());
                None
            }
        }
    }

    fn dual(&mut self, s: &AccStructure) -> Option<AcpjStructure> {
        match compute_dual(s, &self.settings.policy) {
            Ok(d) => {
                self.report.pass("dual.solve", "unique solution");
                let names = self.names().to_vec();
                self.report.object("E", components(d.reeb(), &names));
                self.report.object("Lambda", components(d.lambda(), &names));
                Some(d)
            }
            Err(e) => {
                self.report.fail("dual.solve", e.to_string());
                None
            }
        }
    }

    fn identity_rows(&mut self, r: &DualReport) {
        for c in &r.checks {
            let status = match (c.holds, c.required) {
                (true, _) => CheckStatus::Pass,
                (false, true) => CheckStatus::Fail,
                (false, false) => CheckStatus::Skipped,
            };
            self.report.check(
                format!("duality.identity.{}", c.name),
                status,
                c.detail.clone(),
            );
        }
    }
}

fn session(opts: &GlobalOpts, input: &Input, echo: String) -> Result<Session, CliError> {
    let loaded = load(input)?;
    let settings = settings(opts, &loaded.structure.policy);
    let mut report = Report::new(echo);
    report.structure = Some(StructureSummary {
        source: loaded.source.clone(),
        chart: loaded.structure.chart.names().to_vec(),
        class: None,
        policy: describe_policy(&settings.policy),
    });
    Ok(Session {
        report,
        loaded,
        settings,
    })
}

pub fn run(cli: &Cli, echo: String) -> Result<Report, CliError> {
    let opts = &cli.global;
    match &cli.command {
        Command::Verify(input) => verify(session(opts, input, echo)?),
        Command::Classify(input) => {
            let mut ss = session(opts, input, echo)?;
            ss.validate();
            Ok(ss.report.finish())
        }
        Command::Dual(input) => {
            let mut ss = session(opts, input, echo)?;
            if let Some(s) = ss.validate() {
                ss.dual(&s);
            }
            Ok(ss.report.finish())
        }
        Command::PairCheck { input, f, h } => pair_check(session(opts, input, echo)?, f, h),
        Command::Bracket {
            input,
            alg,
            left,
            right,
        } => bracket(session(opts, input, echo)?, *alg, left, right),
        Command::Suite { input, tamper } => suite(session(opts, input, echo)?, tamper.as_deref()),
        Command::Examples { export } => examples(echo, export.as_deref()),
    }
}

fn verify(mut ss: Session) -> Result<Report, CliError> {
    if let Some(s) = ss.validate() {
        if let Some(d) = ss.dual(&s) {
            match cosymp_core::duality::verify_dual_identities(&s, &d, &ss.settings.policy) {
                Ok(r) => ss.identity_rows(&r),
                Err(e) => ss.report.fail("duality.identity", e.to_string()),
            }
        }
    }
    Ok(ss.report.finish())
}

fn truth(b: bool) -> String {
    b.to_string()
}

fn pair_check(mut ss: Session, f: &str, h: &str) -> Result<Report, CliError> {
    let pair = PairFH::new(
        operands::expr("--f", f, ss.chart())?,
        operands::expr("--h", h, ss.chart())?,
    );
    let Some(s) = ss.validate() else {
        return Ok(ss.report.finish());
    };
    let Some(d) = ss.dual(&s) else {
        return Ok(ss.report.finish());
    };
    let names = ss.names().to_vec();
    ss.report.object(
        "pair",
        ComponentMap::from([
            ("f".to_string(), pair.f.to_dsl(&names)),
            ("h".to_string(), pair.h.to_dsl(&names)),
        ]),
    );
    match classify_generator(&d, &pair, &ss.settings.policy) {
        Ok(class) => {
            ss.report.pass("pair.classify", "conditions evaluated");
            ss.report.object(
                "conditions",
                ComponentMap::from([
                    ("cond1".to_string(), truth(class.cond1)),
                    ("cond2".to_string(), truth(class.cond2)),
                    ("cond3".to_string(), truth(class.cond3)),
                ]),
            );
            ss.report.object(
                "memberships",
                class
                    .memberships()
                    .iter()
                    .map(|(n, b)| (n.to_string(), truth(*b)))
                    .collect(),
            );
        }
        Err(e) => ss.report.fail("pair.classify", e.to_string()),
    }
    Ok(ss.report.finish())
}

fn pair_object(p: &PairFH, names: &[String]) -> ComponentMap {
    ComponentMap::from([
        ("f".to_string(), p.f.to_dsl(names)),
        ("h".to_string(), p.h.to_dsl(names)),
    ])
}

fn bracket(mut ss: Session, alg: Algebra, left: &str, right: &str) -> Result<Report, CliError> {
    let names = ss.names().to_vec();
    enum Operands {
        Pairs(PairFH, PairFH),
        Sections(
            cosymp_core::algebroid::AlgebroidSection,
            cosymp_core::algebroid::AlgebroidSection,
        ),
    }
    let ops = if alg == Algebra::Algebroid {
        Operands::Sections(
            operands::section("section 1", left, ss.chart())?,
            operands::section("section 2", right, ss.chart())?,
        )
    } else {
        Operands::Pairs(
            operands::pair("pair 1", left, ss.chart())?,
            operands::pair("pair 2", right, ss.chart())?,
        )
    };
    let Some(s) = ss.validate() else {
        return Ok(ss.report.finish());
    };
    let Some(d) = ss.dual(&s) else {
        return Ok(ss.report.finish());
    };
    let policy = ss.settings.policy.clone();
    let outcome: Result<ComponentMap, String> = match (&ops, alg) {
        (Operands::Pairs(a, b), Algebra::Omega) => {
            Ok(pair_object(&bracket_omega(&d, a, b), &names))
        }
        (Operands::Pairs(a, b), Algebra::BigOmega) => bracket_Omega(&d, a, b, &policy)
            .map(|r| pair_object(&r, &names))
            .map_err(|e| e.to_string()),
        (Operands::Pairs(a, b), Algebra::Acc) => match bracket_acc(&d, a, b, &policy) {
            Ok(r) => Ok(pair_object(&r, &names)),
            Err(e @ SymalgError::BracketMismatch(_)) => Err(format!("internal inconsistency: {e}")),
            Err(e) => Err(e.to_string()),
        },
        (Operands::Sections(a, b), _) => ClosedTwoForm::from_structure(&s, &policy)
            .map_err(|e| e.to_string())
            .and_then(|f| algebroid_bracket(&f, a, b).map_err(|e| e.to_string()))
            .map(|r| {
                let mut m = components(&r.x, &names);
                m.insert("fbreve".to_string(), r.fbreve.to_dsl(&names));
                m
            }),
        (Operands::Pairs(..), Algebra::Algebroid) => unreachable!("operands follow the algebra"),
    };
    match outcome {
        Ok(result) => {
            ss.report.pass("bracket.preconditions", "satisfied");
            ss.report.object("result", result);
        }
        Err(e) => ss.report.fail("bracket.preconditions", e),
    }
    Ok(ss.report.finish())
}

fn parse_fault(spec: &str, chart: &Chart) -> Result<Fault, CliError> {
    let bad = || CliError::Tamper(format!("`{spec}`: expected `Lambda:a^b` or `omega:a`"));
    let (which, key) = spec.split_once(':').ok_or_else(bad)?;
    let index = |n: &str| chart.index_of(n.trim()).ok_or_else(bad);
    match which {
        "Lambda" => {
            let (a, b) = key.split_once('^').ok_or_else(bad)?;
            let (i, j) = (index(a)?, index(b)?);
            if i < j {
                Ok(Fault::Lambda(i, j))
            } else {
                Err(bad())
            }
        }
        "omega" => Ok(Fault::Omega(index(key)?)),
        _ => Err(bad()),
    }
}

fn suite(mut ss: Session, tamper: Option<&str>) -> Result<Report, CliError> {
    let fault = tamper.map(|t| parse_fault(t, ss.chart())).transpose()?;
    let Some(s) = ss.validate() else {
        return Ok(ss.report.finish());
    };
    let cfg = SuiteConfig {
        seed: ss.settings.seed,
        policy: ss.settings.policy.clone(),
        ..SuiteConfig::default()
    };
    let report = run_suite(&s, ss.loaded.expected.as_ref(), &cfg);
    ss.report.notes.push(format!("seed: {}", report.seed));
    ss.report.notes.push(RUNTIME_NOTE.to_string());
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => CheckStatus::Pass,
            Status::Fail => CheckStatus::Fail,
            Status::Skipped => CheckStatus::Skipped,
        };
        // the class row duplicates structure.class
        if c.name != "duality.class" {
            ss.report.check(c.name.clone(), status, c.detail.clone());
        }
    }
    if let Some(fault) = fault {
        let names = ss.names().to_vec();
        ss.report
            .notes
            .push(format!("tampered: {} + 1/100", fault.describe(&names)));
        ss.report
            .checks
            .retain(|c| !c.name.starts_with("duality.identity."));
        let d = compute_dual(&s, &cfg.policy);
        match d.and_then(|d| {
            identities_under_fault(&s, &d, &fault, &Expr::constant(rat(1, 100)), &cfg.policy)
        }) {
            Ok(r) => ss.identity_rows(&r),
            Err(e) => ss.report.fail("duality.identity", e.to_string()),
        }
    }
    Ok(ss.report.finish())
}

fn examples(echo: String, export: Option<&Path>) -> Result<Report, CliError> {
    let mut report = Report::new(echo);
    let mut listing = ComponentMap::new();
    for (spec, (name, class)) in CATALOGUE.iter().zip(list_examples()) {
        listing.insert(name.to_string(), format!("{class}: {}", spec.notes));
    }
    report.object("examples", listing);
    if let Some(dir) = export {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, _) in list_examples() {
            let entry = get_example(name).expect("catalogue entries load");
            let path = dir.join(format!("{name}.toml"));
            std::fs::write(&path, render_example(&entry))
                .map_err(|source| CliError::Write { path, source })?;
        }
        report
            .notes
            .push(format!("exported fixtures to {}", dir.display()));
    }
    Ok(report.finish())
}
