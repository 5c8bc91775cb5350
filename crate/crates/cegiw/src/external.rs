//! Adapter for an external SMV bounded model checker (nuXmv command line).
//!
//! The checker is invoked as `<cmd> -bmc -bmc_length <bound> <file>` and its
//! standard output is scanned for the verdict and a counterexample of the form
//!
//! ```text
//!   -> State: 1.1 <-
//!     state = RESTING
//!     battery = 15
//!   -- Loop starts here
//!   -> State: 1.2 <-
//!     state = LEAVING_HOME
//! ```
//!
//! Only changed variables are printed after the first state. The state after
//! the last `Loop starts here` marker opens the loop; when the trace closes by
//! repeating that state at the end, the repetition is dropped.

use std::io::Read;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use cegiw_core::{Formula, LassoTrace};

use crate::check::{CheckError, CheckVerdict, Checker};
use crate::model::{Model, Value};
use crate::smv::external_input;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("counterexample has no loop marker; only lasso-shaped traces are supported")]
    MissingLoop,
    #[error("counterexample contains no states")]
    Empty,
    #[error("line {line}: cannot parse `{text}`")]
    BadLine { line: usize, text: String },
    #[error("line {line}: `{name}` is not a variable of the model")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: value `{value}` is outside the domain of `{name}`")]
    BadValue {
        line: usize,
        name: String,
        value: String,
    },
    #[error("first state leaves `{0}` unassigned")]
    Incomplete(String),
    #[error("trace step {0} is not a transition of the model")]
    NotAPath(usize),
}

/// Parses one lasso counterexample and labels its states through the model.
pub fn parse_external_counterexample(m: &Model, text: &str) -> Result<LassoTrace, TraceError> {
    let mut states: Vec<Vec<Option<usize>>> = Vec::new();
    let mut loop_start = None;
    let mut marker_pending = false;
    let mut in_input = false;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let line_no = k + 1;
        if line.starts_with("-- Loop starts here") {
            marker_pending = true;
        } else if line.starts_with("-> State:") {
            in_input = false;
            let carried = states
                .last()
                .cloned()
                .unwrap_or_else(|| vec![None; m.vars.len()]);
            states.push(carried);
            if marker_pending {
                loop_start = Some(states.len() - 1);
                marker_pending = false;
            }
        } else if line.starts_with("-> Input:") {
            in_input = true;
        } else if in_input {
            continue;
        } else if let (Some(cur), Some((name, value))) = (states.last_mut(), line.split_once(" = "))
        {
            let (name, value) = (name.trim(), value.trim());
            let Some(var) = m.var_index(name) else {
                if m.define_index(name).is_some() {
                    continue;
                }
                return Err(TraceError::UnknownVariable {
                    line: line_no,
                    name: name.into(),
                });
            };
            let parsed = parse_value(value);
            let idx = m
                .domain_index(var, &parsed)
                .ok_or_else(|| TraceError::BadValue {
                    line: line_no,
                    name: name.into(),
                    value: value.into(),
                })?;
            cur[var] = Some(idx);
        } else if !states.is_empty() && !line.is_empty() && !line.starts_with("--") {
            return Err(TraceError::BadLine {
                line: line_no,
                text: line.into(),
            });
        }
    }
    if states.is_empty() {
        return Err(TraceError::Empty);
    }
    let k = loop_start.ok_or(TraceError::MissingLoop)?;
    let mut valuations = Vec::with_capacity(states.len());
    for s in states {
        let full: Option<Vec<usize>> = s.iter().copied().collect();
        match full {
            Some(v) => valuations.push(v),
            None => {
                let missing = s
                    .iter()
                    .position(Option::is_none)
                    .expect("some variable is unassigned");
                return Err(TraceError::Incomplete(m.vars[missing].name.clone()));
            }
        }
    }
    if valuations.len() > k + 1 && valuations.last() == Some(&valuations[k]) {
        valuations.pop();
    }
    let g = m.graph();
    let ids = valuations
        .iter()
        .enumerate()
        .map(|(i, v)| {
            g.valuations
                .binary_search(v)
                .map_err(|_| TraceError::NotAPath(i))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if !g.initial.contains(&ids[0]) {
        return Err(TraceError::NotAPath(0));
    }
    for (i, w) in ids.windows(2).enumerate() {
        if !g.has_edge(w[0], w[1]) {
            return Err(TraceError::NotAPath(i + 1));
        }
    }
    if !g.has_edge(*ids.last().expect("non-empty"), ids[k]) {
        return Err(TraceError::NotAPath(ids.len()));
    }
    let labels: Vec<_> = ids.iter().map(|i| g.labels[*i].clone()).collect();
    Ok(
        LassoTrace::canonicalize(labels[..k].to_vec(), labels[k..].to_vec())
            .expect("loop is non-empty"),
    )
}

fn parse_value(text: &str) -> Value {
    match text {
        "TRUE" => Value::Bool(true),
        "FALSE" => Value::Bool(false),
        _ => text
            .parse::<i64>()
            .map_or_else(|_| Value::Sym(text.to_string()), Value::Int),
    }
}

/// Verdict from the checker's complete standard output.
pub fn parse_external_output(
    m: &Model,
    text: &str,
    bound: usize,
) -> Result<CheckVerdict, CheckError> {
    if text
        .lines()
        .any(|l| l.contains("-- specification") && l.trim_end().ends_with("is false"))
    {
        let trace = parse_external_counterexample(m, text)
            .map_err(|e| CheckError::External(e.to_string()))?;
        return Ok(CheckVerdict::Violated(vec![trace]));
    }
    if text.contains("-- no counterexample found with bound") || text.contains("is true") {
        return Ok(CheckVerdict::HoldsUpToBound(bound));
    }
    let tail: String = text
        .lines()
        .rev()
        .take(5)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect::<Vec<_>>()
        .join("\n");
    Err(CheckError::External(format!(
        "no verdict in checker output:\n{tail}"
    )))
}

/// Runs a command with a timeout, returning its standard output.
pub fn run_with_timeout(cmd: &mut Command, timeout: Duration) -> Result<String, CheckError> {
    let mut child = cmd
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    let mut out = child.stdout.take().expect("piped");
    let mut err = child.stderr.take().expect("piped");
    let out_reader = std::thread::spawn(move || {
        let mut s = String::new();
        out.read_to_string(&mut s).map(|_| s)
    });
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        err.read_to_string(&mut s).map(|_| s)
    });
    let start = Instant::now();
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if start.elapsed() >= timeout {
            child.kill()?;
            child.wait()?;
            return Err(CheckError::External(format!(
                "timed out after {} s",
                timeout.as_secs_f64()
            )));
        }
        std::thread::sleep(Duration::from_millis(10));
    };
    let stdout = out_reader.join().expect("reader thread")?;
    let stderr = err_reader.join().expect("reader thread")?;
    if !status.success() {
        return Err(CheckError::External(format!(
            "exited with {status}: {}",
            stderr.trim()
        )));
    }
    Ok(stdout)
}

/// One child process per check; yields at most one counterexample.
pub struct ExternalChecker<'m> {
    pub model: &'m Model,
    pub command: PathBuf,
    pub bound: usize,
    pub timeout: Duration,
}

impl<'m> ExternalChecker<'m> {
    pub fn new(model: &'m Model, command: impl Into<PathBuf>, bound: usize) -> Self {
        ExternalChecker {
            model,
            command: command.into(),
            bound,
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

impl Checker for ExternalChecker<'_> {
    fn check(&mut self, phi: &Formula) -> Result<CheckVerdict, CheckError> {
        let input =
            external_input(self.model, phi).map_err(|e| CheckError::External(e.to_string()))?;
        let mut file = tempfile::Builder::new().suffix(".smv").tempfile()?;
        std::io::Write::write_all(&mut file, input.as_bytes())?;
        let mut cmd = Command::new(&self.command);
        cmd.arg("-bmc")
            .arg("-bmc_length")
            .arg(self.bound.to_string())
            .arg(file.path());
        let stdout = run_with_timeout(&mut cmd, self.timeout)?;
        parse_external_output(self.model, &stdout, self.bound)
    }

    fn bound(&self) -> usize {
        self.bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;
    use cegiw_core::lasso::state;

    fn model() -> Model {
        parse_model("VAR s : {A, B, C}; DEFINE a := s = A; b := s = B; c := s = C; INIT s = A TRANS next(s) != s")
            .unwrap()
    }

    #[test]
    fn repeated_loop_state_is_dropped() {
        let text = "
  -> State: 1.1 <-
    s = A
    a = TRUE
  -- Loop starts here
  -> State: 1.2 <-
    s = B
  -> State: 1.3 <-
    s = C
  -> State: 1.4 <-
    s = B
";
        let pi = parse_external_counterexample(&model(), text).unwrap();
        assert_eq!(
            pi,
            LassoTrace::canonicalize(vec![state(["a"])], vec![state(["b"]), state(["c"])]).unwrap()
        );
    }

    #[test]
    fn missing_marker() {
        let text = "-> State: 1.1 <-\n s = A\n-> State: 1.2 <-\n s = B\n";
        assert_eq!(
            parse_external_counterexample(&model(), text),
            Err(TraceError::MissingLoop)
        );
    }

    #[test]
    fn values_are_checked() {
        let text = "-- Loop starts here\n-> State: 1.1 <-\n s = D\n";
        assert!(matches!(
            parse_external_counterexample(&model(), text),
            Err(TraceError::BadValue { .. })
        ));
        let text = "-- Loop starts here\n-> State: 1.1 <-\n t = A\n";
        assert!(matches!(
            parse_external_counterexample(&model(), text),
            Err(TraceError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn steps_must_be_transitions() {
        let text = "-> State: 1.1 <-\n s = A\n-- Loop starts here\n-> State: 1.2 <-\n s = A\n";
        assert_eq!(
            parse_external_counterexample(&model(), text),
            Err(TraceError::NotAPath(1))
        );
    }
}
