//! Command-line front end: `cstlc (check|run|dump-ast) [--format text|json] [--fuel N] FILE|-`.
//!
//! Exit codes: 0 ok, 1 diagnostics (parse or check failure, or a stuck
//! evaluation), 2 usage or IO error, 3 out of fuel.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, ValueEnum};
use cstlc_core::eval::{eval, EvalResult};
use cstlc_core::typecheck::check_program;
use cstlc_core::{parse, Diagnostics, ParseError};
use serde_json::{json, Map, Value};

pub mod ast_json;

pub const DEFAULT_FUEL: u64 = 100_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OUT_OF_FUEL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Parse and typecheck, print the main type.
    Check,
    /// Typecheck, then evaluate main and print its value.
    Run,
    /// Print the parsed program.
    DumpAst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "cstlc", version, about = "Typecheck and run STLC programs with concepts and models")]
pub struct CliConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Source file, or `-` for standard input.
    pub input: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Evaluation step budget for `run`.
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    pub fuel: u64,
}

/// One diagnostic as reported to the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reported {
    pub code: String,
    pub subject: String,
    pub message: String,
    pub line: Option<u32>,
    pub col: Option<u32>,
}

impl Reported {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("code".into(), json!(self.code));
        m.insert("subject".into(), json!(self.subject));
        m.insert("message".into(), json!(self.message));
        if let Some(line) = self.line {
            m.insert("line".into(), json!(line));
        }
        if let Some(col) = self.col {
            m.insert("col".into(), json!(col));
        }
        Value::Object(m)
    }

    fn to_text(&self) -> String {
        match (self.line, self.col) {
            (Some(l), Some(c)) => format!("{l}:{c}: error[{}] {}: {}", self.code, self.subject, self.message),
            _ => format!("error[{}] {}: {}", self.code, self.subject, self.message),
        }
    }
}

fn from_parse_error(e: &ParseError) -> Reported {
    Reported {
        code: "parse-error".into(),
        subject: e.found.clone(),
        message: format!("expected {}", e.expected.join(" or ")),
        line: Some(e.line),
        col: Some(e.col),
    }
}

fn from_diagnostics(ds: &Diagnostics) -> Vec<Reported> {
    ds.iter()
        .map(|d| Reported {
            code: d.code.as_str().into(),
            subject: d.subject.to_string(),
            message: d.message.clone(),
            line: d.location.map(|s| s.line),
            col: d.location.map(|s| s.col),
        })
        .collect()
}

/// Result of one invocation, before rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: &'static str,
    pub exit_code: i32,
    pub main_type: Option<String>,
    /// Pretty-printed value for `run`, structured AST for `dump-ast`.
    pub value: Option<Value>,
    pub diagnostics: Vec<Reported>,
    /// Text-mode standard output.
    pub text: Option<String>,
    /// Extra text-mode line for the error stream.
    pub note: Option<String>,
}

impl Report {
    fn new(status: &'static str, exit_code: i32) -> Self {
        Report { status, exit_code, main_type: None, value: None, diagnostics: Vec::new(), text: None, note: None }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("status".into(), json!(self.status));
        if let Some(t) = &self.main_type {
            m.insert("mainType".into(), json!(t));
        }
        if let Some(v) = &self.value {
            m.insert("value".into(), v.clone());
        }
        m.insert("diagnostics".into(), Value::Array(self.diagnostics.iter().map(Reported::to_json).collect()));
        Value::Object(m)
    }
}

/// Runs `command` on program text `src`.
pub fn execute(command: Command, fuel: u64, src: &str) -> Report {
    let program = match parse(src) {
        Ok(p) => p,
        Err(e) => {
            let mut r = Report::new("parse-error", EXIT_DIAGNOSTICS);
            r.diagnostics.push(from_parse_error(&e));
            return r;
        }
    };

    if command == Command::DumpAst {
        let mut r = Report::new("ok", EXIT_OK);
        r.value = Some(ast_json::program(&program));
        r.text = Some(format!("{program:#?}"));
        return r;
    }

    let checked = match check_program(&program) {
        Ok(c) => c,
        Err(ds) => {
            let mut r = Report::new("check-error", EXIT_DIAGNOSTICS);
            r.diagnostics = from_diagnostics(&ds);
            return r;
        }
    };
    let main_type = checked.main_ty.to_string();

    if command == Command::Check {
        let mut r = Report::new("ok", EXIT_OK);
        r.text = Some(main_type.clone());
        r.main_type = Some(main_type);
        return r;
    }

    let mut r = match eval(&checked.models, &program.main, fuel) {
        EvalResult::Converged(v) => {
            let mut r = Report::new("ok", EXIT_OK);
            r.value = Some(json!(v.to_string()));
            r.text = Some(v.to_string());
            r
        }
        EvalResult::Stuck(t) => {
            let mut r = Report::new("stuck", EXIT_DIAGNOSTICS);
            r.note = Some(format!("evaluation stuck at: {t}"));
            r
        }
        EvalResult::OutOfFuel(_) => {
            let mut r = Report::new("out-of-fuel", EXIT_OUT_OF_FUEL);
            r.note = Some(format!("evaluation did not finish within {fuel} steps"));
            r
        }
    };
    r.main_type = Some(main_type);
    r
}

fn read_input(input: &str, stdin: &mut dyn Read) -> std::io::Result<String> {
    if input == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(input)
    }
}

fn render(report: &Report, format: Format, stdout: &mut dyn Write, stderr: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(stdout, "{}", report.to_json()),
        Format::Text => {
            if let Some(t) = &report.text {
                writeln!(stdout, "{t}")?;
            }
            for d in &report.diagnostics {
                writeln!(stderr, "{}", d.to_text())?;
            }
            if let Some(n) = &report.note {
                writeln!(stderr, "{n}")?;
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name), runs, writes output and
/// returns the exit code.
pub fn run_cli<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };

    let report = match read_input(&config.input, stdin) {
        Ok(src) => execute(config.command, config.fuel, &src),
        Err(e) => {
            let mut r = Report::new("io-error", EXIT_USAGE);
            r.diagnostics.push(Reported {
                code: "io-error".into(),
                subject: config.input.clone(),
                message: e.to_string(),
                line: None,
                col: None,
            });
            r
        }
    };

    match render(&report, config.format, stdout, stderr) {
        Ok(()) => report.exit_code,
        Err(_) => EXIT_USAGE,
    }
}
