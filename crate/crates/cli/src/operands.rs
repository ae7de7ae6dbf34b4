//! Command-line operands: pairs `(f, h)` and algebroid sections
//! `(X_1, ..., X_n; g)`, components in DSL syntax.

use cosymp_core::algebroid::AlgebroidSection;
use cosymp_core::exterior::MultiVector;
use cosymp_core::symalg::PairFH;
use cosymp_core::{parse_expr, Chart, Expr};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OperandError {
    #[error("{what}: expected {expected}")]
    Shape {
        what: String,
        expected: &'static str,
    },
    #[error("{what}: {message}")]
    Parse { what: String, message: String },
}

pub fn expr(what: &str, text: &str, chart: &Chart) -> Result<Expr, OperandError> {
    parse_expr(text, chart).map_err(|e| OperandError::Parse {
        what: what.to_string(),
        message: e.to_string(),
    })
}

/// Splits `(a, b; c)` at top-level separators. Returns the groups separated
/// by `;`, each split at `,`.
fn tuple(what: &str, text: &str, expected: &'static str) -> Result<Vec<Vec<String>>, OperandError> {
    let shape = || OperandError::Shape {
        what: what.to_string(),
        expected,
    };
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(shape)?;
    let mut groups = vec![vec![String::new()]];
    let mut depth = 0i32;
    for ch in inner.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(shape());
        }
        match ch {
            ',' if depth == 0 => groups.last_mut().expect("nonempty").push(String::new()),
            ';' if depth == 0 => groups.push(vec![String::new()]),
            _ => groups
                .last_mut()
                .and_then(|g| g.last_mut())
                .expect("nonempty")
                .push(ch),
        }
    }
    if depth != 0 {
        return Err(shape());
    }
    Ok(groups
        .into_iter()
        .map(|g| g.into_iter().map(|s| s.trim().to_string()).collect())
        .collect())
}

pub fn pair(what: &str, text: &str, chart: &Chart) -> Result<PairFH, OperandError> {
    const EXPECTED: &str = "a pair `(f, h)`";
    let groups = tuple(what, text, EXPECTED)?;
    match groups.as_slice() {
        [parts] if parts.len() == 2 => Ok(PairFH::new(
            expr(&format!("{what}, f"), &parts[0], chart)?,
            expr(&format!("{what}, h"), &parts[1], chart)?,
        )),
        _ => Err(OperandError::Shape {
            what: what.to_string(),
            expected: EXPECTED,
        }),
    }
}

pub fn section(what: &str, text: &str, chart: &Chart) -> Result<AlgebroidSection, OperandError> {
    const EXPECTED: &str = "a section `(X_1, ..., X_n; g)` with one component per coordinate";
    let groups = tuple(what, text, EXPECTED)?;
    match groups.as_slice() {
        [field, fbreve] if field.len() == chart.dim() && fbreve.len() == 1 => {
            let comps = field
                .iter()
                .zip(chart.names())
                .map(|(t, n)| expr(&format!("{what}, X^{n}"), t, chart))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AlgebroidSection::new(
                MultiVector::from_vec(comps),
                expr(&format!("{what}, g"), &fbreve[0], chart)?,
            ))
        }
        _ => Err(OperandError::Shape {
            what: what.to_string(),
            expected: EXPECTED,
        }),
    }
}
