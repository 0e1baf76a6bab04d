use std::fmt;

/// CLI-level errors, each mapped to a stable process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Input file could not be interpreted; carries a 1-based line number.
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    Core(featmass::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    /// Exit codes: 2 parse, 3 sample too small, 4 invalid parameters,
    /// 5 I/O, 6 source exhausted.
    pub fn exit_code(&self) -> i32 {
        use featmass::Error as E;
        match self {
            CliError::Parse { .. } => 2,
            CliError::Core(e) => match e {
                E::EmptySample { .. } | E::SampleTooSmall { .. } | E::NoOccurrences => 3,
                E::SourceExhausted { .. } => 6,
                _ => 4,
            },
            CliError::Io(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { path, line, msg } => write!(f, "{path}:{line}: {msg}"),
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<featmass::Error> for CliError {
    fn from(e: featmass::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
