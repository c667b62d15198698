use std::fmt;

/// Everything that stops a run before an artifact is produced.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input file. `location` is a field path or a
    /// line/column pair.
    #[error("{file}: {location}: {message}")]
    Input {
        file: String,
        location: String,
        message: String,
    },

    /// Bad flag values or combinations.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Engine(#[from] synclat::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use synclat::Error as E;
        match self {
            CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Engine(E::ElementCap { .. }) => 3,
            CliError::Engine(E::Parse(_) | E::Dimension(_) | E::Invalid(_) | E::TooLarge(_)) => 2,
            CliError::Engine(E::Internal(_)) => 1,
        }
    }
}

/// Path to a JSON field, printed like `arrows[3].from`.
#[derive(Clone, Debug, Default)]
pub struct FieldPath(Vec<Segment>);

#[derive(Clone, Debug)]
enum Segment {
    Key(&'static str),
    Index(usize),
}

impl FieldPath {
    pub fn key(&self, k: &'static str) -> FieldPath {
        let mut p = self.clone();
        p.0.push(Segment::Key(k));
        p
    }

    pub fn index(&self, i: usize) -> FieldPath {
        let mut p = self.clone();
        p.0.push(Segment::Index(i));
        p
    }
}

impl fmt::Display for FieldPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("top level");
        }
        for (i, s) in self.0.iter().enumerate() {
            match s {
                Segment::Key(k) if i == 0 => write!(f, "{k}")?,
                Segment::Key(k) => write!(f, ".{k}")?,
                Segment::Index(n) => write!(f, "[{n}]")?,
            }
        }
        Ok(())
    }
}
