use serde::Serialize;
use serde_json::Value;

use crux_core::format::{ParseError, ParseErrorCode, SourceLocation};
use crux_core::generator::GenerationError;
use crux_core::grading::GradingError;
use crux_core::validate::ValidationReport;
use crux_core::PlanError;

/// How a failure maps onto HTTP statuses and CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Malformed,
    Invalid,
    Conflict,
    NotFound,
    Internal,
}

impl Kind {
    pub fn status(self) -> u16 {
        match self {
            Kind::Malformed => 400,
            Kind::Invalid => 422,
            Kind::Conflict => 409,
            Kind::NotFound => 404,
            Kind::Internal => 500,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Internal => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EngineError {
    #[serde(skip)]
    pub kind: Kind,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<Value>,
}

impl EngineError {
    pub fn new(kind: Kind, code: impl Into<String>, message: impl Into<String>) -> Self {
        EngineError { kind, code: code.into(), message: message.into(), issues: vec![] }
    }

    pub fn malformed(message: impl Into<String>) -> Self {
        Self::new(Kind::Malformed, "MALFORMED_JSON", message)
    }

    pub fn not_found(what: impl Into<String>) -> Self {
        Self::new(Kind::NotFound, "NOT_FOUND", what)
    }

    pub fn internal(message: impl ToString) -> Self {
        Self::new(Kind::Internal, "INTERNAL", message.to_string())
    }

    pub fn invalid(issues: Vec<ParseError>) -> Self {
        let message = issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        EngineError {
            kind: Kind::Invalid,
            code: "INVALID".into(),
            message,
            issues: issues.iter().map(|e| serde_json::to_value(e).expect("error serializes")).collect(),
        }
    }

    /// A single request-body issue at a JSON path.
    pub fn field(code: ParseErrorCode, message: impl Into<String>) -> Self {
        Self::invalid(vec![ParseError::new(SourceLocation::new(1, 1), code, message)])
    }

    pub fn body(&self) -> Value {
        serde_json::to_value(self).expect("error serializes")
    }
}

impl std::fmt::Display for EngineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for EngineError {}

fn with_report(mut e: EngineError, report: &ValidationReport) -> EngineError {
    e.issues = report.issues.iter().map(|i| serde_json::to_value(i).expect("issue serializes")).collect();
    e
}

impl From<PlanError> for EngineError {
    fn from(e: PlanError) -> Self {
        let kind = match e {
            PlanError::Unreachable => Kind::Conflict,
            _ => Kind::Invalid,
        };
        let out = Self::new(kind, e.code(), e.to_string());
        match &e {
            PlanError::Invalid(report) => with_report(out, report),
            _ => out,
        }
    }
}

impl From<GradingError> for EngineError {
    fn from(e: GradingError) -> Self {
        let kind = match e {
            GradingError::Locked(_) => Kind::Conflict,
            _ => Kind::Invalid,
        };
        let out = Self::new(kind, e.code(), e.to_string());
        match &e {
            GradingError::Invalid(report) => with_report(out, report),
            _ => out,
        }
    }
}

impl From<GenerationError> for EngineError {
    fn from(e: GenerationError) -> Self {
        match e {
            GenerationError::Grading(g) => g.into(),
            other => Self::new(Kind::Invalid, other.code(), other.to_string()),
        }
    }
}
