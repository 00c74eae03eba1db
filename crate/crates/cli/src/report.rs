use std::io::Write;
use std::time::Duration;

use deligne_lab::abelian::DiffCohGroup;
use deligne_lab::checks::CheckOutcome;
use deligne_lab::error::Error;
use serde::Serialize;
use serde_json::Value;

/// One labelled group in a report.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub label: String,
    pub group: DiffCohGroup,
}

pub fn entry(label: impl Into<String>, group: DiffCohGroup) -> Entry {
    Entry { label: label.into(), group }
}

/// What a successful command produces.
#[derive(Debug, Default)]
pub struct Outcome {
    pub request: Value,
    pub results: Vec<Entry>,
    pub checks: Vec<CheckOutcome>,
    pub provenance: Vec<String>,
    pub details: Option<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Usage,
    Parse,
    Validation,
    Precondition,
    Ambiguous,
    Mismatch,
    CheckFailed,
}

impl FailureKind {
    fn exit_code(self) -> u8 {
        match self {
            FailureKind::Usage | FailureKind::Parse | FailureKind::Validation => 1,
            FailureKind::Precondition => 2,
            FailureKind::Ambiguous => 3,
            FailureKind::Mismatch | FailureKind::CheckFailed => 4,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
    /// Obstruction cochain, descriptor candidates or mismatching groups.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
    /// Partial results gathered before the failure.
    #[serde(skip)]
    pub partial: Option<Box<Outcome>>,
}

impl Failure {
    pub fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Failure { kind, message: message.into(), certificate: None, hint: None, partial: None }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(FailureKind::Usage, message)
    }

    pub fn with_certificate(mut self, c: Value) -> Self {
        self.certificate = Some(c);
        self
    }

    pub fn with_hint(mut self, h: impl Into<String>) -> Self {
        self.hint = Some(h.into());
        self
    }

    pub fn with_partial(mut self, o: Outcome) -> Self {
        self.partial = Some(Box::new(o));
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Parse { .. } => FailureKind::Parse,
            Error::InvalidSimplex(_)
            | Error::NotACocycle(_)
            | Error::DegreeMismatch(_)
            | Error::WeightMismatch(_)
            | Error::NotASubcomplex(_)
            | Error::BadDecomposition(_)
            | Error::InvalidCdga(_) => FailureKind::Validation,
            _ => FailureKind::Precondition,
        };
        Failure::new(kind, e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: &'static str,
    pub request: Value,
    pub results: Vec<Entry>,
    pub checks: Vec<CheckOutcome>,
    pub provenance: Vec<String>,
    pub details: Option<Value>,
    pub error: Option<Failure>,
    pub timing_ms: f64,
}

impl Report {
    pub fn finish(command: &str, outcome: Result<Outcome, Failure>, elapsed: Duration) -> Report {
        let (out, error) = match outcome {
            Ok(o) => (o, None),
            Err(mut f) => (f.partial.take().map(|b| *b).unwrap_or_default(), Some(f)),
        };
        Report {
            command: command.into(),
            status: if error.is_none() { "ok" } else { "error" },
            request: out.request,
            results: out.results,
            checks: out.checks,
            provenance: out.provenance,
            details: out.details,
            error,
            timing_ms: elapsed.as_secs_f64() * 1e3,
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.error.as_ref().map_or(0, |e| e.kind.exit_code())
    }

    pub fn print_text(&self) {
        // a closed pipe is not an error of the computation
        let _ = self.write_text(&mut std::io::stdout().lock());
        if let Some(e) = &self.error {
            eprintln!("error: {}", e.message);
            if let Some(c) = &e.certificate {
                eprintln!("certificate: {c}");
            }
            if let Some(h) = &e.hint {
                eprintln!("hint: {h}");
            }
        }
    }

    fn write_text(&self, out: &mut impl Write) -> std::io::Result<()> {
        for e in &self.results {
            writeln!(out, "{:<12} {}", e.label, e.group)?;
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| !c.passed).count();
            for c in &self.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                if c.detail.is_empty() || c.passed {
                    writeln!(out, "{mark} [{}] {}", c.suite, c.case)?;
                } else {
                    writeln!(out, "{mark} [{}] {}: {}", c.suite, c.case, c.detail)?;
                }
            }
            writeln!(out, "{} checks, {failed} failed", self.checks.len())?;
        }
        if let Some(d) = &self.details {
            writeln!(out, "{}", serde_json::to_string_pretty(d).expect("details serialize"))?;
        }
        for p in &self.provenance {
            writeln!(out, "via: {p}")?;
        }
        Ok(())
    }
}
