//! Built-in example structures.

use thiserror::Error;

use crate::chart::{Chart, ChartError};
use crate::duality::{validate_acc, AccStructure, DualityError, StructureClass};
use crate::exterior::{DiffForm, MultiVector};
use crate::symexpr::{parse_expr, ParseError, ZeroPolicy};

/// Component maps in DSL text, keyed by coordinate name or `a^b`.
pub type TextComponents<'a> = &'a [(&'a str, &'a str)];

/// Static description of a catalogue entry.
#[derive(Clone, Copy, Debug)]
pub struct ExampleSpec {
    pub name: &'static str,
    pub chart: &'static [&'static str],
    pub omega: TextComponents<'static>,
    pub big_omega: TextComponents<'static>,
    pub class: StructureClass,
    pub reeb: Option<TextComponents<'static>>,
    pub lambda: Option<TextComponents<'static>>,
    pub notes: &'static str,
}

const QPZ: &[&str] = &["q", "p", "z"];

pub const CATALOGUE: &[ExampleSpec] = &[
    ExampleSpec {
        name: "C3",
        chart: QPZ,
        omega: &[("q", "-p"), ("z", "1")],
        big_omega: &[("q^p", "1")],
        class: StructureClass::Contact,
        reeb: Some(&[("z", "1")]),
        lambda: Some(&[("q^p", "-1"), ("p^z", "p")]),
        notes: "standard contact form dz - p dq with Omega = d omega",
    },
    ExampleSpec {
        name: "C5",
        chart: &["q1", "p1", "q2", "p2", "z"],
        omega: &[("q1", "-p1"), ("q2", "-p2"), ("z", "1")],
        big_omega: &[("q1^p1", "1"), ("q2^p2", "1")],
        class: StructureClass::Contact,
        reeb: Some(&[("z", "1")]),
        lambda: Some(&[
            ("q1^p1", "-1"),
            ("q2^p2", "-1"),
            ("p1^z", "p1"),
            ("p2^z", "p2"),
        ]),
        notes: "contact structure with two canonical pairs",
    },
    ExampleSpec {
        name: "K3",
        chart: QPZ,
        omega: &[("z", "1")],
        big_omega: &[("q^p", "1")],
        class: StructureClass::Cosymplectic,
        reeb: Some(&[("z", "1")]),
        lambda: Some(&[("q^p", "-1")]),
        notes: "cosymplectic pair, d omega = 0",
    },
    ExampleSpec {
        name: "M3",
        chart: QPZ,
        omega: &[("q", "-p"), ("z", "1")],
        big_omega: &[("q^p", "-1")],
        class: StructureClass::Mixed,
        reeb: Some(&[("z", "1")]),
        lambda: Some(&[("q^p", "1"), ("p^z", "-p")]),
        notes: "Omega = -d omega, so F = Omega + d omega vanishes",
    },
    ExampleSpec {
        name: "M3b",
        chart: QPZ,
        omega: &[("q", "-p"), ("z", "1")],
        big_omega: &[("q^p", "-1"), ("p^z", "-1")],
        class: StructureClass::Mixed,
        reeb: Some(&[("q", "(1 - p)^-1"), ("z", "(1 - p)^-1")]),
        lambda: None,
        notes: "L_E omega != 0; regular where p != 1",
    },
    ExampleSpec {
        name: "EM3",
        chart: QPZ,
        omega: &[("q", "-p"), ("z", "1")],
        big_omega: &[("q^p", "1"), ("q^z", "1/10")],
        class: StructureClass::Mixed,
        reeb: Some(&[("p", "-1/10"), ("z", "1")]),
        lambda: Some(&[("q^p", "-1"), ("p^z", "p")]),
        notes: "contact structure deformed by the closed form 1/10 dq^dz",
    },
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("in component `{key}`: {source}")]
    Parse { key: String, source: ParseError },
    #[error("`{0}` is not a coordinate")]
    UnknownCoordinate(String),
    #[error("component key `{0}` must list distinct coordinates in chart order")]
    BadKey(String),
    #[error("component key `{0}` appears twice")]
    DuplicateKey(String),
    #[error(transparent)]
    Duality(#[from] DualityError),
}

fn key_indices(chart: &Chart, key: &str, degree: usize) -> Result<Vec<usize>, CorpusError> {
    let parts: Vec<&str> = key.split('^').map(str::trim).collect();
    if parts.len() != degree {
        return Err(CorpusError::BadKey(key.to_string()));
    }
    let idx = parts
        .iter()
        .map(|p| {
            chart
                .index_of(p)
                .ok_or_else(|| CorpusError::UnknownCoordinate(p.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CorpusError::BadKey(key.to_string()));
    }
    Ok(idx)
}

/// Builds a `degree`-form from DSL component text.
pub fn form_from_text<K: AsRef<str>, V: AsRef<str>>(
    chart: &Chart,
    degree: usize,
    comps: &[(K, V)],
) -> Result<DiffForm, CorpusError> {
    let mut out = DiffForm::zero(chart.dim(), degree).expect("degree within chart");
    let mut seen = std::collections::BTreeSet::new();
    for (key, text) in comps {
        let idx = key_indices(chart, key.as_ref(), degree)?;
        if !seen.insert(idx.clone()) {
            return Err(CorpusError::DuplicateKey(key.as_ref().to_string()));
        }
        let e = parse_expr(text.as_ref(), chart).map_err(|source| CorpusError::Parse {
            key: key.as_ref().to_string(),
            source,
        })?;
        out.add_component(&idx, e).expect("valid key");
    }
    Ok(out)
}

/// Builds a multivector from DSL component text.
pub fn multivector_from_text<K: AsRef<str>, V: AsRef<str>>(
    chart: &Chart,
    degree: usize,
    comps: &[(K, V)],
) -> Result<MultiVector, CorpusError> {
    let form = form_from_text(chart, degree, comps)?;
    Ok(MultiVector::from_components(
        chart.dim(),
        degree,
        form.components().map(|(k, v)| (k.clone(), v.clone())),
    )
    .expect("same shape"))
}

/// A catalogue entry with its validated structure.
#[derive(Clone, Debug)]
pub struct ExampleEntry {
    pub spec: &'static ExampleSpec,
    pub structure: AccStructure,
    pub expected_class: StructureClass,
    pub expected_reeb: Option<MultiVector>,
    pub expected_lambda: Option<MultiVector>,
}

impl ExampleEntry {
    pub fn name(&self) -> &'static str {
        self.spec.name
    }

    pub fn notes(&self) -> &'static str {
        self.spec.notes
    }
}

pub fn find_spec(name: &str) -> Option<&'static ExampleSpec> {
    CATALOGUE.iter().find(|s| s.name == name)
}

pub fn get_example(name: &str) -> Result<ExampleEntry, CorpusError> {
    let spec = find_spec(name).ok_or_else(|| CorpusError::UnknownExample(name.to_string()))?;
    let chart = Chart::new(spec.chart.iter().copied())?;
    let omega = form_from_text(&chart, 1, spec.omega)?;
    let big_omega = form_from_text(&chart, 2, spec.big_omega)?;
    let structure = validate_acc(&chart, omega, big_omega, &ZeroPolicy::Exact)?;
    let expected_reeb = spec
        .reeb
        .map(|c| multivector_from_text(&chart, 1, c))
        .transpose()?;
    let expected_lambda = spec
        .lambda
        .map(|c| multivector_from_text(&chart, 2, c))
        .transpose()?;
    Ok(ExampleEntry {
        spec,
        structure,
        expected_class: spec.class,
        expected_reeb,
        expected_lambda,
    })
}

/// Catalogue names with their classes, in catalogue order.
pub fn list_examples() -> Vec<(&'static str, StructureClass)> {
    CATALOGUE.iter().map(|s| (s.name, s.class)).collect()
}
