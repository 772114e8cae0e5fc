//! In-band validation reports.
//!
//! Well-formedness checks never abort on the first problem; they collect
//! every violated axiom together with a witness so a bad input can be
//! diagnosed in one pass.

use std::fmt;

/// A single violated axiom with the indices that witness the violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Name of the violated axiom, e.g. `"triangle"` or `"associativity"`.
    pub axiom: String,
    /// Witness indices (meaning depends on the axiom).
    pub witness: Vec<usize>,
    /// Optional free-form detail.
    pub detail: String,
}

impl Violation {
    pub fn new(axiom: impl Into<String>, witness: Vec<usize>, detail: impl Into<String>) -> Self {
        Violation {
            axiom: axiom.into(),
            witness,
            detail: detail.into(),
        }
    }
}

/// Outcome of a well-formedness check. `ok` holds exactly when no
/// violation was recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(violations: Vec<Violation>) -> Self {
        ValidationReport { violations }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn into_violations(self) -> Vec<Violation> {
        self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "violation: {} at {:?}", v.axiom, v.witness)?;
            if !v.detail.is_empty() {
                write!(f, " ({})", v.detail)?;
            }
        }
        Ok(())
    }
}

/// Collects violations during a check.
#[derive(Debug, Default)]
pub struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    pub fn new() -> Self {
        Checker::default()
    }

    pub fn fail(
        &mut self,
        axiom: impl Into<String>,
        witness: Vec<usize>,
        detail: impl Into<String>,
    ) {
        self.violations.push(Violation::new(axiom, witness, detail));
    }

    pub fn finish(self) -> ValidationReport {
        ValidationReport::new(self.violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ok_iff_empty() {
        let mut c = Checker::new();
        assert!(c.violations.is_empty());
        c.fail("positivity", vec![0, 1], "d = 0");
        let report = c.finish();
        assert!(!report.ok());
        assert_eq!(report.violations().len(), 1);
        assert!(ValidationReport::new(vec![]).ok());
    }
}
