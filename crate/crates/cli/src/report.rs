//! Line-oriented `key=value` reports.

use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub fields: Vec<(String, String)>,
    pub pass: bool,
    pub elapsed: Duration,
}

impl Check {
    pub fn new(name: &str, pass: bool) -> Self {
        Check { name: name.to_string(), fields: Vec::new(), pass, elapsed: Duration::ZERO }
    }

    pub fn field(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    /// Echo of the command and its resolved inputs.
    pub command: Vec<(String, String)>,
    /// Data lines, each a record kind followed by fields.
    pub rows: Vec<(String, Vec<(String, String)>)>,
    pub checks: Vec<Check>,
    pub timings: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: vec![("command".into(), command.into())], ..Default::default() }
    }

    pub fn echo(&mut self, key: &str, value: impl fmt::Display) {
        self.command.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, kind: &str, fields: Vec<(&str, String)>) {
        self.rows.push((kind.to_string(), fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect()));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

fn write_fields(f: &mut fmt::Formatter<'_>, fields: &[(String, String)]) -> fmt::Result {
    for (k, v) in fields {
        write!(f, " {k}={v}")?;
    }
    Ok(())
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (first, rest) = self.command.split_first().expect("command is always set");
        write!(f, "{}={}", first.0, first.1)?;
        write_fields(f, rest)?;
        writeln!(f)?;
        for (kind, fields) in &self.rows {
            write!(f, "{kind}")?;
            write_fields(f, fields)?;
            writeln!(f)?;
        }
        for c in &self.checks {
            write!(f, "check={}", c.name)?;
            write_fields(f, &c.fields)?;
            write!(f, " status={}", if c.pass { "PASS" } else { "FAIL" })?;
            if self.timings {
                write!(f, " elapsed_ms={}", c.elapsed.as_millis())?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "overall={} checks={} failed={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures()
        )
    }
}
