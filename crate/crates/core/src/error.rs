use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the box a model or operation is defined on.
    #[error("{0}")]
    Domain(String),

    #[error("contraction ratio {eps} outside [0, {eps_max}] at this pressure")]
    ContractionOutOfRange { eps: f64, eps_max: f64 },

    #[error("joint angle {theta} rad outside [-{theta_max}, {theta_max}] rad")]
    JointOutOfRange { theta: f64, theta_max: f64 },

    #[error("pole of (cP+e)/(P+d) at P = {pressure} Pa (d = {d} Pa)")]
    Pole { pressure: f64, d: f64 },

    #[error("singular linear system (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("unknown unit `{0}`")]
    UnknownUnit(String),

    #[error("cannot convert {from} to {to}: dimension mismatch")]
    DimensionMismatch { from: String, to: String },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    /// Every rejected row of an input file, as (line, reason).
    #[error("{} invalid rows:{}", .0.len(), list_rows(.0))]
    Rows(Vec<(usize, String)>),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for model-domain and feasibility failures, false for input/parse/I/O failures.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::ContractionOutOfRange { .. }
                | Error::JointOutOfRange { .. }
                | Error::Pole { .. }
                | Error::Singular { .. }
                | Error::Degenerate(_)
                | Error::Infeasible(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

fn list_rows(rows: &[(usize, String)]) -> String {
    rows.iter()
        .map(|(line, msg)| format!("\n  line {line}: {msg}"))
        .collect()
}

pub(crate) fn ensure_finite(x: f64, what: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what))
    }
}
