//! Serializable verification reports shared by every module.

use crate::scalars::field::Field;
use serde::Serialize;

/// How a dimension or equality was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Exact computation over the parameter field.
    Symbolic,
    /// Exact computation over the field itself (no parameters involved).
    Direct,
    /// Exact symbolic containment plus a rank lower bound after mapping the
    /// parameters to residues modulo `modulus`; ranks cannot rise under such
    /// a map, so matching bounds pin the dimension.
    Certified { modulus: u64, seed: u64 },
    /// Exact computation over GF(modulus) after mapping the parameters to
    /// residues; the specialized configuration is itself an instance with a
    /// distinct orbit, so it checks the statement there.
    Specialized { modulus: u64, seed: u64 },
}

impl Method {
    /// `Symbolic` over a parameter field, `Direct` otherwise.
    pub fn exact<F: Field>(ctx: &F::Ctx) -> Method {
        if F::is_parametric(ctx) {
            Method::Symbolic
        } else {
            Method::Direct
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub predicted: usize,
    pub computed: usize,
    pub pass: bool,
}

impl DegreeRow {
    pub fn new(degree: usize, predicted: usize, computed: usize) -> Self {
        DegreeRow { degree, predicted, computed, pass: predicted == computed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(label: impl Into<String>, pass: bool) -> Self {
        Check { label: label.into(), pass, detail: None }
    }

    pub fn with(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { label: label.into(), pass, detail: Some(detail.into()) }
    }
}

/// Rows of predicted-vs-computed dimensions plus free-form checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub method: Method,
    pub rows: Vec<DegreeRow>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(name: impl Into<String>, method: Method) -> Self {
        Report { name: name.into(), method, rows: Vec::new(), checks: Vec::new(), notes: Vec::new(), pass: true }
    }

    pub fn row(&mut self, r: DegreeRow) {
        self.pass &= r.pass;
        self.rows.push(r);
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn absorb(&mut self, other: Report) {
        for r in other.rows {
            self.row(r);
        }
        for c in other.checks {
            self.check(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("degree {}: predicted {}, computed {}", r.degree, r.predicted, r.computed))
            .collect();
        out.extend(self.checks.iter().filter(|c| !c.pass).map(|c| match &c.detail {
            Some(d) => format!("{}: {}", c.label, d),
            None => c.label.clone(),
        }));
        out
    }
}
