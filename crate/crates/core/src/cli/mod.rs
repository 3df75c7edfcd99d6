//! The `spinorbit` command line: argument model, reports and exit codes.
//!
//! Exit codes: 0 when every check passes, 1 when one fails, 2 for usage
//! and parse errors.

mod commands;

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::SystemId;
use crate::determining::Stage;

#[derive(Parser, Debug)]
#[command(name = "spinorbit", version, about = "Exact checks of integrals of motion for spin-orbit Hamiltonians")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for every randomized check.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Print only failures and the summary.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    #[value(name = "2d")]
    Two,
    #[value(name = "3d")]
    Three,
}

impl Space {
    fn as_str(self) -> &'static str {
        match self {
            Space::Two => "2d",
            Space::Three => "3d",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check [H, X] = 0 for every cataloged integral of a system.
    Verify {
        system: SystemId,
        /// Value of the coupling in the planar superintegrable system.
        #[arg(long)]
        gamma: Option<String>,
        /// Keep the Planck constant as the parameter `hbar`.
        #[arg(long)]
        hbar: bool,
        /// Random spinors per integral for the pointwise probe.
        #[arg(long, value_name = "N")]
        numeric_probe: Option<usize>,
        /// Added to V0 before checking.
        #[arg(long, value_name = "EXPR")]
        v0_extra: Option<String>,
    },
    /// Generate determining equations for the general first-order ansatz.
    Determining {
        #[arg(long, value_enum)]
        space: Space,
        /// All stages when omitted.
        #[arg(long, value_parser = parse_stage)]
        stage: Option<Stage>,
        /// Compare with the transcribed reference blocks.
        #[arg(long = "match")]
        match_reference: bool,
    },
    /// Commutation table of the superintegrable algebra.
    Algebra {
        #[arg(long, value_enum)]
        system: Space,
        #[arg(long)]
        casimir: bool,
        #[arg(long)]
        relations: bool,
        #[arg(long)]
        hbar: bool,
    },
    /// Gauge-transform planar potentials.
    Gauge {
        /// Derivative of the gauge phase; may use `xi` for y/x.
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        alpha_dot: String,
        #[arg(long, value_name = "EXPR", default_value = "0", allow_hyphen_values = true)]
        v0: String,
        #[arg(long, value_name = "EXPR", default_value = "0", allow_hyphen_values = true)]
        v1: String,
    },
    /// Potentials and integrals under hbar -> 0.
    Limit {
        #[arg(long, default_value = "3d-superintegrable")]
        system: SystemId,
    },
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    s.parse()
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Report {
    pub command: String,
    pub system: String,
    /// Sorted by name.
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
}

/// Collects checks, streaming each to stderr as it completes.
pub struct Session {
    global: Global,
    checks: Vec<Check>,
    /// Text-mode listing printed before the checks.
    listing: Vec<String>,
}

impl Session {
    fn new(global: Global) -> Session {
        Session {
            global,
            checks: Vec::new(),
            listing: Vec::new(),
        }
    }

    fn streams(&self) -> bool {
        self.global.format == Format::Text && !self.global.quiet
    }

    fn push(&mut self, check: Check) {
        if self.streams() {
            let tag = if check.passed() { "pass" } else { "FAIL" };
            eprintln!("  .. {tag} {}", check.name);
        }
        self.checks.push(check);
    }

    fn list(&mut self, line: impl Into<String>) {
        self.listing.push(line.into());
    }
}

/// Runs one command; `Err` is a usage or parse error.
pub fn run(cli: &Cli) -> Result<(Report, Vec<String>), CliError> {
    let start = Instant::now();
    let mut s = Session::new(cli.global.clone());
    let (command, system) = match &cli.command {
        Command::Verify {
            system,
            gamma,
            hbar,
            numeric_probe,
            v0_extra,
        } => {
            commands::verify(&mut s, *system, gamma.as_deref(), *hbar, *numeric_probe, v0_extra.as_deref())?;
            ("verify", system.to_string())
        }
        Command::Determining {
            space,
            stage,
            match_reference,
        } => {
            commands::determining(&mut s, *space, *stage, *match_reference)?;
            ("determining", space.as_str().to_string())
        }
        Command::Algebra {
            system,
            casimir,
            relations,
            hbar,
        } => {
            commands::algebra(&mut s, *system, *casimir, *relations, *hbar)?;
            ("algebra", system.as_str().to_string())
        }
        Command::Gauge { alpha_dot, v0, v1 } => {
            commands::gauge(&mut s, alpha_dot, v0, v1)?;
            ("gauge", "2d".to_string())
        }
        Command::Limit { system } => {
            commands::limit(&mut s, *system)?;
            ("limit", system.to_string())
        }
    };
    let mut checks = s.checks;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let report = Report {
        command: command.to_string(),
        system,
        checks,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, s.listing))
}

pub fn render_text(report: &Report, listing: &[String], quiet: bool) -> String {
    let mut out = String::new();
    if !quiet {
        out.push_str(&format!("{} {}\n", report.command, report.system));
        for line in listing {
            out.push_str(line);
            out.push('\n');
        }
    }
    for c in &report.checks {
        if quiet && c.passed() {
            continue;
        }
        let tag = if c.passed() { "pass" } else { "FAIL" };
        out.push_str(&format!("{tag}  {}: {}\n", c.name, c.detail));
    }
    let failed = report.checks.iter().filter(|c| !c.passed()).count();
    out.push_str(&format!(
        "{} passed, {failed} failed in {} ms\n",
        report.checks.len() - failed,
        report.elapsed_ms
    ));
    out
}

/// Parses `args`, runs, prints and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(&cli) {
        Ok((report, listing)) => {
            let text = match cli.global.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable report") + "\n",
                Format::Text => render_text(&report, &listing, cli.global.quiet),
            };
            let _ = write!(out, "{text}");
            report.exit_code()
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}
