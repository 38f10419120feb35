//! Running an external SMT solver on a script file.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use thiserror::Error;
use wait_timeout::ChildExt;

/// Environment variable naming the solver executable.
pub const SOLVER_ENV: &str = "PARAMARK_SOLVER";

#[derive(Debug, Error)]
pub enum SolverRunError {
    #[error("cannot start solver {path}: {source}")]
    Spawn {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("solver did not answer within {0:?}")]
    Timeout(Duration),
    #[error("i/o error while talking to the solver: {0}")]
    Io(#[from] std::io::Error),
}

/// The solver given explicitly, else the one named by [`SOLVER_ENV`].
pub fn configured_solver(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        std::env::var_os(SOLVER_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

/// Writes `script` to a temporary file, runs `solver <file>` and returns
/// its standard output. The process is killed after `timeout`.
pub fn run_solver(
    solver: &Path,
    script: &str,
    timeout: Duration,
) -> Result<String, SolverRunError> {
    let mut file = tempfile::Builder::new().suffix(".smt2").tempfile()?;
    file.write_all(script.as_bytes())?;
    file.flush()?;
    let mut child = Command::new(solver)
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| SolverRunError::Spawn {
            path: solver.to_path_buf(),
            source,
        })?;
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = std::thread::spawn(move || {
        let mut out = String::new();
        stdout.read_to_string(&mut out).map(|_| out)
    });
    match child.wait_timeout(timeout)? {
        Some(_) => {}
        None => {
            child.kill()?;
            child.wait()?;
            return Err(SolverRunError::Timeout(timeout));
        }
    }
    let out = reader.join().expect("reader thread does not panic")?;
    Ok(out)
}
