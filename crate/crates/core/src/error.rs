use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input. `field` names the offending argument.
    #[error("invalid input `{field}`: {message}")]
    Input { field: String, message: String },

    /// An iteration did not converge or a count did not come out right.
    #[error("numerical failure: {message}")]
    Numerical { message: String, diagnostics: Vec<String> },

    #[error("flatness violation at s = {s}: {message}")]
    Flatness { s: String, message: String },

    #[error("degenerate input: {message}")]
    DegenerateInput { message: String },

    #[error("non-proper intersection: {message}")]
    NonProperIntersection { message: String },

    #[error("sections intersect at {point}")]
    IntersectingSections { point: String },

    #[error("path error at t = {t}: {message}")]
    Path { t: f64, message: String },
}

impl Error {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Error::Numerical {
            message: message.into(),
            diagnostics: Vec::new(),
        }
    }

    pub fn numerical_with(message: impl Into<String>, diagnostics: Vec<String>) -> Self {
        Error::Numerical {
            message: message.into(),
            diagnostics,
        }
    }

    pub fn degenerate(message: impl Into<String>) -> Self {
        Error::DegenerateInput {
            message: message.into(),
        }
    }

    /// Everything except a failed computation counts as bad input (exit
    /// code 2); numerical failures map to exit code 3.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Numerical { .. })
    }
}
