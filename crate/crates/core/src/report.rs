use std::fmt;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail { witness: String },
    Info(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

/// Ordered list of check outcomes. Renders one line per check:
/// `PASS <name>`, `FAIL <name> witness=<...>` or `INFO <name> <text>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check { name: name.into(), outcome: Outcome::Pass });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.checks.push(Check { name: name.into(), outcome: Outcome::Fail { witness: witness.into() } });
    }

    pub fn info(&mut self, name: impl Into<String>, text: impl Into<String>) {
        self.checks.push(Check { name: name.into(), outcome: Outcome::Info(text.into()) });
    }

    /// Records a pass when `witness` is `None`, a failure otherwise.
    pub fn check(&mut self, name: impl Into<String>, witness: Option<String>) {
        match witness {
            None => self.pass(name),
            Some(w) => self.fail(name, w),
        }
    }

    /// Appends another report, prefixing its check names.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", c.name), outcome: c.outcome });
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.outcome, Outcome::Fail { .. }))
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail { .. }))
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }

    pub fn is_pass(&self, name: &str) -> bool {
        matches!(self.outcome(name), Some(Outcome::Pass))
    }

    pub fn is_fail(&self, name: &str) -> bool {
        matches!(self.outcome(name), Some(Outcome::Fail { .. }))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "PASS {}", self.name),
            Outcome::Fail { witness } => write!(f, "FAIL {} witness={}", self.name, witness),
            Outcome::Info(t) => write!(f, "INFO {} {}", self.name, t),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
