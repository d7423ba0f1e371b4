//! Line protocol bridge to an out-of-process evaluator (e.g. an EM solver
//! wrapper).
//!
//! Request: the genome as `D` ASCII '0'/'1' characters followed by `\n`.
//! Reply: one decimal cost followed by `\n`. Replies come back in request
//! order; the child runs until its stdin is closed.
//!
//! Any failure (timeout, exit, unparsable reply) kills the child. The next
//! request respawns it if the restart policy allows.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use crate::error::{Error, EvaluatorFailure, Result};
use crate::genome::Genome;
use crate::objective::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartPolicy {
    Never,
    /// Respawn after a failure at most this many times over the evaluator's life.
    UpTo(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalConfig {
    /// Program followed by its arguments.
    pub command: Vec<String>,
    pub dim: usize,
    pub timeout: Duration,
    pub restart: RestartPolicy,
}

impl ExternalConfig {
    pub fn new(command: Vec<String>, dim: usize) -> Self {
        Self {
            command,
            dim,
            timeout: Duration::from_secs(600),
            restart: RestartPolicy::UpTo(3),
        }
    }

    /// Run `script` through `sh -c`.
    pub fn shell(script: &str, dim: usize) -> Self {
        Self::new(vec!["sh".into(), "-c".into(), script.into()], dim)
    }
}

struct ChildIo {
    child: Child,
    stdin: Option<ChildStdin>,
    replies: Receiver<std::io::Result<String>>,
}

impl ChildIo {
    fn spawn(config: &ExternalConfig) -> std::result::Result<Self, EvaluatorFailure> {
        let (program, args) = config
            .command
            .split_first()
            .ok_or_else(|| EvaluatorFailure::Spawn("empty command".into()))?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| EvaluatorFailure::Spawn(format!("{program}: {e}")))?;
        let stdin = child.stdin.take();
        let stdout = child
            .stdout
            .take()
            .ok_or_else(|| EvaluatorFailure::Spawn("no stdout pipe".into()))?;
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let failed = line.is_err();
                if tx.send(line).is_err() || failed {
                    break;
                }
            }
        });
        Ok(Self {
            child,
            stdin,
            replies: rx,
        })
    }

    fn request(
        &mut self,
        genome: &Genome,
        timeout: Duration,
    ) -> std::result::Result<f64, EvaluatorFailure> {
        let stdin = self.stdin.as_mut().ok_or(EvaluatorFailure::Exited)?;
        stdin
            .write_all(genome.to_line().as_bytes())
            .and_then(|_| stdin.flush())
            .map_err(|e| EvaluatorFailure::Io(e.to_string()))?;
        match self.replies.recv_timeout(timeout) {
            Ok(Ok(line)) => parse_reply(&line),
            Ok(Err(e)) => Err(EvaluatorFailure::Io(e.to_string())),
            Err(RecvTimeoutError::Timeout) => Err(EvaluatorFailure::Timeout {
                secs: timeout.as_secs_f64(),
            }),
            Err(RecvTimeoutError::Disconnected) => Err(EvaluatorFailure::Exited),
        }
    }

    fn shutdown(mut self, graceful: bool) {
        drop(self.stdin.take());
        if graceful {
            for _ in 0..100 {
                if let Ok(Some(_)) = self.child.try_wait() {
                    return;
                }
                thread::sleep(Duration::from_millis(10));
            }
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

fn parse_reply(line: &str) -> std::result::Result<f64, EvaluatorFailure> {
    match line.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(EvaluatorFailure::Malformed(line.to_string())),
    }
}

struct State {
    child: Option<ChildIo>,
    spawned: bool,
    restarts: u32,
}

/// Objective backed by a child process speaking the line protocol.
pub struct ExternalEvaluator {
    config: ExternalConfig,
    state: Mutex<State>,
}

impl ExternalEvaluator {
    pub fn new(config: ExternalConfig) -> Result<Self> {
        if config.command.is_empty() {
            return Err(Error::config("external evaluator command is empty"));
        }
        Ok(Self {
            config,
            state: Mutex::new(State {
                child: None,
                spawned: false,
                restarts: 0,
            }),
        })
    }

    pub fn config(&self) -> &ExternalConfig {
        &self.config
    }

    pub fn restarts(&self) -> u32 {
        self.state.lock().map(|s| s.restarts).unwrap_or(0)
    }

    fn fail(genome: &Genome, failure: EvaluatorFailure) -> Error {
        Error::Evaluator {
            genome: genome.to_string(),
            failure,
        }
    }
}

/// Send one genome to the child and read back its cost.
pub fn external_cost(genome: &Genome, evaluator: &ExternalEvaluator) -> Result<f64> {
    let mut state = evaluator
        .state
        .lock()
        .map_err(|_| ExternalEvaluator::fail(genome, EvaluatorFailure::Io("poisoned".into())))?;
    if state.child.is_none() {
        if state.spawned {
            let allowed = match evaluator.config.restart {
                RestartPolicy::Never => 0,
                RestartPolicy::UpTo(n) => n,
            };
            if state.restarts >= allowed {
                return Err(ExternalEvaluator::fail(
                    genome,
                    EvaluatorFailure::RestartsExhausted,
                ));
            }
            state.restarts += 1;
        }
        state.spawned = true;
        let io = ChildIo::spawn(&evaluator.config)
            .map_err(|failure| ExternalEvaluator::fail(genome, failure))?;
        state.child = Some(io);
    }
    let io = state.child.as_mut().expect("child present");
    match io.request(genome, evaluator.config.timeout) {
        Ok(cost) => Ok(cost),
        Err(failure) => {
            if let Some(io) = state.child.take() {
                io.shutdown(false);
            }
            Err(ExternalEvaluator::fail(genome, failure))
        }
    }
}

impl Objective for ExternalEvaluator {
    fn dim(&self) -> usize {
        self.config.dim
    }

    fn cost(&self, genome: &Genome) -> Result<f64> {
        external_cost(genome, self)
    }

    fn describe(&self) -> String {
        format!(
            "external `{}` D={}",
            self.config.command.join(" "),
            self.config.dim
        )
    }
}

impl Drop for ExternalEvaluator {
    fn drop(&mut self) {
        if let Ok(state) = self.state.get_mut() {
            if let Some(io) = state.child.take() {
                io.shutdown(true);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shell(script: &str) -> ExternalEvaluator {
        let mut cfg = ExternalConfig::shell(script, 4);
        cfg.timeout = Duration::from_secs(10);
        ExternalEvaluator::new(cfg).unwrap()
    }

    #[test]
    fn constant_child() {
        let ev = shell("while read l; do echo 1.0; done");
        assert_eq!(ev.cost(&Genome::zeros(4)).unwrap(), 1.0);
        assert_eq!(ev.cost(&Genome::ones(4)).unwrap(), 1.0);
    }

    #[test]
    fn child_sees_exact_wire_format() {
        // Reply with the request length: 4 bits + no trailing junk.
        let ev = shell("while IFS= read -r l; do echo ${#l}; done");
        assert_eq!(ev.cost(&Genome::ones(4)).unwrap(), 4.0);
    }

    #[test]
    fn malformed_reply() {
        let ev = shell("while read l; do echo abc; done");
        let err = ev.cost(&Genome::zeros(4)).unwrap_err();
        assert_eq!(
            err,
            Error::Evaluator {
                genome: "0000".into(),
                failure: EvaluatorFailure::Malformed("abc".into())
            }
        );
    }

    #[test]
    fn negative_or_nan_reply_is_malformed() {
        for reply in ["-1", "nan", "inf"] {
            let ev = shell(&format!("while read l; do echo {reply}; done"));
            assert!(matches!(
                ev.cost(&Genome::zeros(4)),
                Err(Error::Evaluator {
                    failure: EvaluatorFailure::Malformed(_),
                    ..
                })
            ));
        }
    }

    #[test]
    fn exit_then_restart_limit() {
        let mut cfg = ExternalConfig::shell("exit 0", 4);
        cfg.restart = RestartPolicy::UpTo(1);
        let ev = ExternalEvaluator::new(cfg).unwrap();
        let failure = |r: Result<f64>| match r {
            Err(Error::Evaluator { failure, .. }) => failure,
            other => panic!("expected evaluator error, got {other:?}"),
        };
        assert!(matches!(
            failure(ev.cost(&Genome::zeros(4))),
            EvaluatorFailure::Exited | EvaluatorFailure::Io(_)
        ));
        assert!(matches!(
            failure(ev.cost(&Genome::zeros(4))),
            EvaluatorFailure::Exited | EvaluatorFailure::Io(_)
        ));
        assert_eq!(
            failure(ev.cost(&Genome::zeros(4))),
            EvaluatorFailure::RestartsExhausted
        );
        assert_eq!(ev.restarts(), 1);
    }

    #[test]
    fn timeout() {
        let mut cfg = ExternalConfig::shell("sleep 5", 4);
        cfg.timeout = Duration::from_millis(100);
        cfg.restart = RestartPolicy::Never;
        let ev = ExternalEvaluator::new(cfg).unwrap();
        assert!(matches!(
            ev.cost(&Genome::zeros(4)),
            Err(Error::Evaluator {
                failure: EvaluatorFailure::Timeout { .. },
                ..
            })
        ));
    }

    #[test]
    fn missing_program() {
        let ev = ExternalEvaluator::new(ExternalConfig::new(vec!["/nonexistent/eval".into()], 4))
            .unwrap();
        assert!(matches!(
            ev.cost(&Genome::zeros(4)),
            Err(Error::Evaluator {
                failure: EvaluatorFailure::Spawn(_),
                ..
            })
        ));
    }
}
