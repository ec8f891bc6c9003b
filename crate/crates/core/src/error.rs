use std::fmt;

/// Errors raised by table construction, variance sweeps, arc systems and the
/// experiment runner.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Config(ConfigErrors),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

/// One problem found while validating an experiment configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1-based line of the config text, `None` for whole-config checks.
    pub line: Option<usize>,
    pub message: String,
}

/// Every violation found in a configuration, in line order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<Violation>);

impl ConfigErrors {
    pub fn push(&mut self, line: Option<usize>, message: impl Into<String>) {
        self.0.push(Violation {
            line,
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} config violation(s)", self.0.len())?;
        for v in &self.0 {
            match v.line {
                Some(line) => write!(f, "\n  line {line}: {}", v.message)?,
                None => write!(f, "\n  {}", v.message)?,
            }
        }
        Ok(())
    }
}
