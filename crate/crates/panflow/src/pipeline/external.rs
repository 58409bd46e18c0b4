//! Runs an external solver executable with a deadline, capturing its output.

use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, ExitStatus, Stdio};
use std::sync::mpsc::{self, Receiver};
use std::thread;
use std::time::{Duration, Instant};

#[derive(Debug)]
pub struct ProgramOutput {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ExternalError {
    #[error("cannot start {program}: {source}")]
    Spawn {
        program: PathBuf,
        source: std::io::Error,
    },
    #[error("{program} failed ({status}); outputs kept in {quarantine}\n{stderr}")]
    ExternalSolverFailure {
        program: PathBuf,
        status: String,
        stderr: String,
        quarantine: PathBuf,
    },
    #[error("{program} did not finish within {seconds} s; outputs kept in {quarantine}")]
    Timeout {
        program: PathBuf,
        seconds: f64,
        quarantine: PathBuf,
    },
    #[error("{program} finished without writing {file}")]
    MissingOutput { program: PathBuf, file: String },
    #[error("{file} from {program} is unreadable: {msg}")]
    BadOutput {
        program: PathBuf,
        file: String,
        msg: String,
    },
}

/// Outcome of [`run_with_deadline`] before any judgement of the exit status.
#[derive(Debug)]
pub enum Finished {
    Exited(ProgramOutput),
    TimedOut { stdout: String, stderr: String },
}

fn drain(r: Option<impl Read + Send + 'static>) -> Receiver<String> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut r) = r {
            let _ = r.read_to_end(&mut buf);
        }
        let _ = tx.send(String::from_utf8_lossy(&buf).into_owned());
    });
    rx
}

/// A grandchild that outlives the program keeps the pipe open, so the
/// reader is only given a grace period.
fn collect(rx: &Receiver<String>, grace: Duration) -> String {
    rx.recv_timeout(grace).unwrap_or_default()
}

/// ETXTBSY: the executable is still open for writing somewhere, typically
/// in a process forked while a script was being written. It clears up.
const TEXT_FILE_BUSY: i32 = 26;

fn spawn(cmd: &mut Command) -> io::Result<Child> {
    let mut tries = 0;
    loop {
        match cmd.spawn() {
            Err(e) if e.raw_os_error() == Some(TEXT_FILE_BUSY) && tries < 20 => {
                tries += 1;
                thread::sleep(Duration::from_millis(25));
            }
            r => return r,
        }
    }
}

/// Starts `program args` in `cwd` and polls it until it exits or `timeout`
/// passes, in which case it is killed. Both output streams are read on
/// their own threads so a chatty child cannot block on a full pipe.
/// Spawn is retried briefly while the executable is busy being written.
pub fn run_with_deadline(
    program: &Path,
    args: &[&str],
    cwd: &Path,
    timeout: Duration,
) -> Result<Finished, ExternalError> {
    let mut child = spawn(
        Command::new(program)
            .args(args)
            .current_dir(cwd)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped()),
    )
    .map_err(|source| ExternalError::Spawn {
        program: program.to_path_buf(),
        source,
    })?;
    let out = drain(child.stdout.take());
    let err = drain(child.stderr.take());
    let start = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(s)) => break Some(s),
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => thread::sleep(Duration::from_millis(10)),
            Err(source) => {
                let _ = child.kill();
                return Err(ExternalError::Spawn {
                    program: program.to_path_buf(),
                    source,
                });
            }
        }
    };
    let grace = Duration::from_secs(if status.is_some() { 5 } else { 1 });
    let stdout = collect(&out, grace);
    let stderr = collect(&err, grace);
    Ok(match status {
        Some(status) => Finished::Exited(ProgramOutput {
            status,
            stdout,
            stderr,
        }),
        None => Finished::TimedOut { stdout, stderr },
    })
}
