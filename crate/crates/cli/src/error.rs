use std::fmt;
use std::path::Path;

use thiserror::Error;

/// A malformed input document, located by line and/or key where possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError { line: None, key: None, message: message.into() }
    }

    pub(crate) fn at_key(text: Option<&str>, key: &str, message: impl Into<String>) -> Self {
        ParseError { line: text.and_then(|t| line_of_key(t, key)), key: Some(key.to_string()), message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key \"{key}\": ")?;
        }
        f.write_str(&self.message)
    }
}

/// First line on which `"key"` appears as an object key.
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    let mut from = 0;
    while let Some(pos) = text[from..].find(&quoted) {
        let at = from + pos;
        let after = text[at + quoted.len()..].trim_start();
        if after.starts_with(':') {
            return Some(text[..at].matches('\n').count() + 1);
        }
        from = at + quoted.len();
    }
    None
}

/// Input-level failure before any game-theoretic work starts.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl From<ParseError> for InputError {
    fn from(e: ParseError) -> Self {
        InputError::Parse(e)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input { path: String, source: InputError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] tucoop::Error),
}

impl CliError {
    pub(crate) fn input(path: &Path, source: InputError) -> Self {
        CliError::Input { path: path.display().to_string(), source }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Input { source: InputError::Parse(_), .. } => "ParseError",
            CliError::Input { source: InputError::Invariant(_), .. } => "InvariantViolation",
            CliError::Io { .. } => "IoError",
            CliError::Usage(_) => "UsageError",
            CliError::Domain(e) => e.code(),
        }
    }

    /// 2 for domain errors, 1 for parse, IO and usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_lines() {
        let text = "{\n  \"n\": 2,\n  \"values\": {\n    \"2,1\": \"1\"\n  }\n}";
        assert_eq!(line_of_key(text, "2,1"), Some(4));
        assert_eq!(line_of_key(text, "values"), Some(3));
        assert_eq!(line_of_key("{\"a\": \"b\"}", "b"), None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Domain(tucoop::Error::EmptyK).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let e = CliError::input(Path::new("g.json"), InputError::Invariant("nonzero".into()));
        assert_eq!((e.code(), e.exit_code()), ("InvariantViolation", 1));
    }
}
