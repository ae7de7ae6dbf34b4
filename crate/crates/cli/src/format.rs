//! Structure files: a TOML document naming the chart, the 1-form, the 2-form
//! and optionally a zero-test policy.
//!
//! ```toml
//! chart = ["q", "p", "z"]
//!
//! [omega]
//! q = "-p"
//! z = "1"
//!
//! [Omega]
//! "q^p" = "1"
//!
//! [policy]
//! mode = "sampled"
//! samples = 50
//! seed = 0
//! tol = 1e-9
//! ```
//!
//! Components are DSL expressions keyed by coordinate name (1-form) or by
//! `a^b` with `a` before `b` in chart order (2-form). Absent components are
//! zero. Serialization lists components in chart order, so files written for
//! the corpus are byte-stable.

use std::collections::BTreeMap;

use cosymp_core::corpus::{form_from_text, CorpusError, ExampleEntry};
use cosymp_core::duality::{validate_acc, AccStructure, DualityError};
use cosymp_core::exterior::DiffForm;
use cosymp_core::{Chart, ChartError, ZeroPolicy};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("structure file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("structure file: {0}")]
    Chart(#[from] ChartError),
    #[error("structure file, {section}: {source}")]
    Component {
        section: &'static str,
        source: CorpusError,
    },
    #[error("structure file, policy: unknown mode `{0}` (expected exact or sampled)")]
    Mode(String),
}

/// The optional `[policy]` table.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyBlock {
    pub mode: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

/// Raw document as read; see [`render_structure`] for the written form.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub chart: Vec<String>,
    #[serde(default)]
    pub omega: BTreeMap<String, String>,
    #[serde(rename = "Omega", default)]
    pub big_omega: BTreeMap<String, String>,
    pub policy: Option<PolicyBlock>,
}

/// A parsed structure file before validation.
#[derive(Clone, Debug)]
pub struct LoadedStructure {
    pub chart: Chart,
    pub omega: DiffForm,
    pub big_omega: DiffForm,
    pub policy: PolicyBlock,
}

impl LoadedStructure {
    pub fn validate(&self, policy: &ZeroPolicy) -> Result<AccStructure, DualityError> {
        validate_acc(
            &self.chart,
            self.omega.clone(),
            self.big_omega.clone(),
            policy,
        )
    }
}

pub fn parse_structure(text: &str) -> Result<LoadedStructure, FormatError> {
    let file: StructureFile = toml::from_str(text)?;
    let chart = Chart::new(file.chart.iter().cloned())?;
    let comps = |m: &BTreeMap<String, String>| -> Vec<(String, String)> {
        m.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    };
    let omega = form_from_text(&chart, 1, &comps(&file.omega)).map_err(|source| {
        FormatError::Component {
            section: "omega",
            source,
        }
    })?;
    let big_omega = form_from_text(&chart, 2, &comps(&file.big_omega)).map_err(|source| {
        FormatError::Component {
            section: "Omega",
            source,
        }
    })?;
    let policy = file.policy.unwrap_or_default();
    if let Some(mode) = &policy.mode {
        if mode != "exact" && mode != "sampled" {
            return Err(FormatError::Mode(mode.clone()));
        }
    }
    Ok(LoadedStructure {
        chart,
        omega,
        big_omega,
        policy,
    })
}

/// Renders a structure as a file document, components in chart order.
pub fn render_structure(chart: &Chart, omega: &DiffForm, big_omega: &DiffForm) -> String {
    let names = chart.names();
    let mut out = String::new();
    let quoted: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
    out.push_str(&format!("chart = [{}]\n", quoted.join(", ")));
    for (title, form) in [("omega", omega), ("Omega", big_omega)] {
        out.push_str(&format!("\n[{title}]\n"));
        for (key, value) in form.components() {
            let key = DiffForm::key_name(key, names);
            let key = if key.contains('^') {
                format!("\"{key}\"")
            } else {
                key
            };
            out.push_str(&format!("{key} = \"{}\"\n", value.to_dsl(names)));
        }
    }
    out
}

/// The fixture file for a corpus entry.
pub fn render_example(entry: &ExampleEntry) -> String {
    let s = &entry.structure;
    format!(
        "# {} ({}): {}\n{}",
        entry.name(),
        entry.expected_class,
        entry.notes(),
        render_structure(s.chart(), s.omega(), s.Omega())
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use cosymp_core::corpus::get_example;

    #[test]
    fn rendered_examples_parse_back_to_the_same_forms() {
        let entry = get_example("M3b").unwrap();
        let text = render_example(&entry);
        let loaded = parse_structure(&text).unwrap();
        assert_eq!(&loaded.omega, entry.structure.omega());
        assert_eq!(&loaded.big_omega, entry.structure.Omega());
        assert_eq!(loaded.policy, PolicyBlock::default());
    }

    #[test]
    fn bad_documents_are_rejected() {
        assert!(matches!(
            parse_structure("chart = [\"q\", \"p\"]\n"),
            Err(FormatError::Chart(_))
        ));
        assert!(matches!(
            parse_structure("chart = [\"q\", \"p\", \"z\"]\n[omega]\nz = \"1 +\"\n"),
            Err(FormatError::Component {
                section: "omega",
                ..
            })
        ));
        assert!(matches!(
            parse_structure("chart = [\"q\", \"p\", \"z\"]\n[Omega]\n\"p^q\" = \"1\"\n"),
            Err(FormatError::Component {
                section: "Omega",
                ..
            })
        ));
        assert!(matches!(
            parse_structure("chart = [\"q\", \"p\", \"z\"]\n[policy]\nmode = \"fast\"\n"),
            Err(FormatError::Mode(_))
        ));
        assert!(matches!(
            parse_structure("chart = [\"q\", \"p\", \"z\"]\nextra = 1\n"),
            Err(FormatError::Toml(_))
        ));
    }

    #[test]
    fn policy_block_is_read() {
        let text = "chart = [\"q\", \"p\", \"z\"]\n[omega]\nz = \"1\"\n[Omega]\n\"q^p\" = \"1\"\n\
                    [policy]\nmode = \"sampled\"\nsamples = 12\nseed = 3\ntol = 1e-6\n";
        let loaded = parse_structure(text).unwrap();
        assert_eq!(loaded.policy.mode.as_deref(), Some("sampled"));
        assert_eq!(loaded.policy.samples, Some(12));
        assert_eq!(loaded.policy.seed, Some(3));
    }
}
