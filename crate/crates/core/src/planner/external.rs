//! Invocation of an external PDDL planner executable.
//!
//! The command is a user-supplied argv template with `{domain}`, `{problem}`
//! and `{plan_out}` placeholders. Every call runs in its own temporary
//! directory, so concurrent invocations never share files.

use std::fs;
use std::io::Read;
use std::path::Path;
use std::process::Command;

use thiserror::Error;

use super::{Plan, PlanSource, PlanStep, SolveResult};

#[derive(Debug, Error)]
pub enum InvocationError {
    #[error("external planner configuration: {0}")]
    Config(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("could not start '{program}': {source}")]
    Spawn {
        program: String,
        source: std::io::Error,
    },
    #[error("planner exited with status {code:?}\nstdout:\n{stdout}\nstderr:\n{stderr}")]
    NonZeroExit {
        code: Option<i32>,
        stdout: String,
        stderr: String,
    },
    #[error("planner reported success but wrote no plan file\nstdout:\n{stdout}")]
    PlanFileMissing { stdout: String },
    #[error("unparsable plan line {line_no}: '{content}'")]
    PlanLine { line_no: usize, content: String },
}

/// Command template plus the exit codes the planner uses to signal a proven
/// unsolvable instance (FastDownward-style translators use their own codes;
/// they are configuration, not convention).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalPlannerConfig {
    pub command: Vec<String>,
    pub unsolvable_exit_codes: Vec<i32>,
}

impl ExternalPlannerConfig {
    pub fn from_json(text: &str) -> Result<Self, InvocationError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| InvocationError::Config(format!("invalid JSON: {e}")))?;
        let command = value
            .get("command")
            .and_then(|c| c.as_array())
            .ok_or_else(|| InvocationError::Config("missing \"command\" array".into()))?
            .iter()
            .map(|t| {
                t.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| InvocationError::Config("command tokens must be strings".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let unsolvable_exit_codes = match value.get("unsolvable_exit_codes") {
            None => vec![],
            Some(v) => v
                .as_array()
                .ok_or_else(|| {
                    InvocationError::Config("\"unsolvable_exit_codes\" must be an array".into())
                })?
                .iter()
                .map(|c| {
                    c.as_i64().map(|c| c as i32).ok_or_else(|| {
                        InvocationError::Config("exit codes must be integers".into())
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        if command.is_empty() {
            return Err(InvocationError::Config("command must not be empty".into()));
        }
        Ok(ExternalPlannerConfig {
            command,
            unsolvable_exit_codes,
        })
    }

    pub fn from_json_file(path: &Path) -> Result<Self, InvocationError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Parses sequential-plan text: one `(name arg1 arg2)` per line, `;`-prefixed
/// comment lines and blank lines ignored.
pub fn parse_plan_text(text: &str) -> Result<Vec<PlanStep>, InvocationError> {
    let mut steps = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let bad = || InvocationError::PlanLine {
            line_no: line_no + 1,
            content: raw.to_string(),
        };
        let inner = line
            .strip_prefix('(')
            .and_then(|l| l.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut parts = inner.split_whitespace();
        let schema = parts.next().ok_or_else(bad)?;
        steps.push(PlanStep {
            schema: schema.to_string(),
            args: parts.map(str::to_string).collect(),
        });
    }
    Ok(steps)
}

/// Writes domain/problem files into a fresh temp directory, runs the
/// configured command, and reads back the emitted plan file.
pub fn invoke_external(
    config: &ExternalPlannerConfig,
    domain_text: &str,
    problem_text: &str,
) -> Result<SolveResult, InvocationError> {
    if config.command.is_empty() {
        return Err(InvocationError::Config("command must not be empty".into()));
    }
    let workdir = tempfile::tempdir()?;
    let domain_path = workdir.path().join("domain.pddl");
    let problem_path = workdir.path().join("problem.pddl");
    let plan_path = workdir.path().join("plan.txt");
    fs::write(&domain_path, domain_text)?;
    fs::write(&problem_path, problem_text)?;

    let argv: Vec<String> = config
        .command
        .iter()
        .map(|token| {
            token
                .replace("{domain}", &domain_path.to_string_lossy())
                .replace("{problem}", &problem_path.to_string_lossy())
                .replace("{plan_out}", &plan_path.to_string_lossy())
        })
        .collect();

    let output = Command::new(&argv[0])
        .args(&argv[1..])
        .current_dir(workdir.path())
        .output()
        .map_err(|source| InvocationError::Spawn {
            program: argv[0].clone(),
            source,
        })?;

    let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&output.stderr).into_owned();

    if !output.status.success() {
        let code = output.status.code();
        if let Some(code) = code {
            if config.unsolvable_exit_codes.contains(&code) {
                return Ok(SolveResult::Unsolvable);
            }
        }
        return Err(InvocationError::NonZeroExit {
            code,
            stdout,
            stderr,
        });
    }

    let mut plan_text = String::new();
    match fs::File::open(&plan_path) {
        Ok(mut f) => {
            f.read_to_string(&mut plan_text)?;
        }
        Err(_) => return Err(InvocationError::PlanFileMissing { stdout }),
    }
    let steps = parse_plan_text(&plan_text)?;
    Ok(SolveResult::Plan(Plan {
        steps,
        source: PlanSource::External,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_text_skips_comments_and_blanks() {
        let text = "; cost = 3\n\n(pick ball1 room_a grip_left)\n(move room_a room_b)\n(drop ball1 room_b grip_left)\n";
        let steps = parse_plan_text(text).unwrap();
        assert_eq!(steps.len(), 3);
        assert_eq!(steps[0], PlanStep::new("pick", &["ball1", "room_a", "grip_left"]));
    }

    #[test]
    fn malformed_plan_line_is_an_error() {
        let err = parse_plan_text("(pick ball1\n").unwrap_err();
        assert!(matches!(err, InvocationError::PlanLine { line_no: 1, .. }));
    }

    #[test]
    fn missing_executable_is_an_invocation_error() {
        let config = ExternalPlannerConfig {
            command: vec!["/nonexistent/planner-binary".into(), "{domain}".into()],
            unsolvable_exit_codes: vec![],
        };
        assert!(matches!(
            invoke_external(&config, "(define (domain d))", "(define (problem p))"),
            Err(InvocationError::Spawn { .. })
        ));
    }

    #[test]
    fn config_parses_from_json() {
        let config = ExternalPlannerConfig::from_json(
            r#"{"command": ["fd", "{domain}", "{problem}", "{plan_out}"], "unsolvable_exit_codes": [11, 12]}"#,
        )
        .unwrap();
        assert_eq!(config.command.len(), 4);
        assert_eq!(config.unsolvable_exit_codes, vec![11, 12]);
        assert!(ExternalPlannerConfig::from_json("{}").is_err());
    }
}
