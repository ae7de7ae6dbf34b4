//! Command reports, rendered as TOML documents.

use std::collections::BTreeMap;

use cosymp_core::exterior::{Antisym, Variance};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StructureSummary {
    pub source: String,
    pub chart: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub policy: String,
}

/// Components keyed by name, values in DSL syntax.
pub type ComponentMap = BTreeMap<String, String>;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSummary>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub objects: BTreeMap<String, ComponentMap>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRow>,
}

impl Report {
    pub fn new(command: String) -> Self {
        Self {
            command,
            ..Self::default()
        }
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        status: CheckStatus,
        detail: impl Into<String>,
    ) {
        self.checks.push(CheckRow {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.check(name, CheckStatus::Pass, detail);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.check(name, CheckStatus::Fail, detail);
    }

    pub fn object(&mut self, name: impl Into<String>, comps: ComponentMap) {
        self.objects.insert(name.into(), comps);
    }

    pub fn failed(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count()
    }

    /// Sorts checks by name and sets status and exit code from them.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        let ok = self.failed() == 0;
        self.status = if ok { "pass" } else { "fail" }.to_string();
        self.exit_code = if ok { 0 } else { 1 };
        self
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("report fields are plain data")
    }

    /// One line: the overall status and the failing check names.
    pub fn summary(&self) -> String {
        let failing: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect();
        if failing.is_empty() {
            format!("{}: {} checks", self.status, self.checks.len())
        } else {
            format!(
                "{}: {} of {} checks failed: {}",
                self.status,
                failing.len(),
                self.checks.len(),
                failing.join(", ")
            )
        }
    }
}

/// Nonzero components of a tensor keyed `a` or `a^b`.
pub fn components<V: Variance>(t: &Antisym<V>, names: &[String]) -> ComponentMap {
    t.components()
        .map(|(k, v)| (Antisym::<V>::key_name(k, names), v.to_dsl(names)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finish_sorts_and_sets_exit_code() {
        let mut r = Report::new("cosymp verify x".into());
        r.pass("b", "");
        r.fail("a", "broken");
        let r = r.finish();
        assert_eq!(r.checks[0].name, "a");
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.summary(), "fail: 1 of 2 checks failed: a");
        let text = r.render();
        assert!(text.starts_with("command = \"cosymp verify x\"\nstatus = \"fail\"\n"));
        assert!(text.contains("[[checks]]\nname = \"a\"\nstatus = \"fail\""));
    }
}
