use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:?}")
}

/// A CSV table followed by optional `#` comment lines, written to a file or
/// to standard output.
pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
    target: String,
}

impl Table {
    pub fn create(out: Option<&Path>, header: &[&str]) -> Result<Self, CliError> {
        let (sink, target): (Box<dyn Write>, String) = match out {
            Some(p) => (
                Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
                p.display().to_string(),
            ),
            None => (Box::new(BufWriter::new(io::stdout())), "<stdout>".into()),
        };
        let mut table = Table {
            writer: csv::Writer::from_writer(sink),
            target,
        };
        table.row(header.iter().map(|s| s.to_string()))?;
        Ok(table)
    }

    fn fail(&self, e: impl Into<io::Error>) -> CliError {
        CliError::io(PathBuf::from(&self.target), e.into())
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<(), CliError> {
        let r = self.writer.write_record(fields.into_iter().collect::<Vec<_>>());
        r.map_err(|e| self.fail(e))
    }

    pub fn finish(self, comments: &[String]) -> Result<(), CliError> {
        let target = PathBuf::from(&self.target);
        let mut inner = self.writer.into_inner().map_err(|e| CliError::io(&target, e.into_error()))?;
        for c in comments {
            writeln!(inner, "# {c}").map_err(|e| CliError::io(&target, e))?;
        }
        inner.flush().map_err(|e| CliError::io(&target, e))
    }
}
