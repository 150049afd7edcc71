use quasistatic_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A flag value violates a precondition.
    #[error("{flag}: {reason}")]
    Usage { flag: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// An input file was read but could not be understood.
    #[error("{path}: {reason}")]
    Format { path: String, reason: String },

    #[error("{0}")]
    Capacity(String),

    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn usage(flag: &str, reason: impl Into<String>) -> Self {
        CliError::Usage {
            flag: flag.to_string(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Io { .. } | CliError::Format { .. } => 3,
            CliError::Capacity(_) => 4,
            CliError::Compute(_) => 1,
        }
    }
}

/// Command-line flag that feeds a core argument of this name.
fn flag_for(name: &str) -> String {
    let flag = match name {
        "tau" => "--tau-us",
        "n" => "--n",
        "k" => "--k",
        "j" | "seq" => "--seq",
        "theta" => "--model",
        "sigma" => "--sigma",
        "n_spins" => "--n-spins",
        "r_min/r_max" => "--r-min-nm/--r-max-nm",
        "b_z" => "--b-tesla",
        "n_bins" => "--bins",
        "t" | "times" => "--t-start/--t-stop",
        other => return other.to_string(),
    };
    flag.to_string()
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument { name, reason } => CliError::Usage {
                flag: flag_for(name),
                reason,
            },
            CoreError::Capacity { .. } => CliError::Capacity(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}
