//! Command-line front end. `main` lives in `src/bin/densecode.rs`; everything
//! testable is here.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::measures;
use crate::protocols::{self, ControlBasis, ProtocolOutcome};
use crate::states::StateFamily;
use crate::thresholds;

pub const MAX_STEPS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "densecode",
    version,
    about = "Dense-coding capacity and steering thresholds of Werner and isotropic states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dense-coding capacity of one family member, as JSON.
    Capacity(CapacityArgs),
    /// Dense-coding threshold and steering boundary of a family, as JSON.
    Threshold(ThresholdArgs),
    /// Capacity and labels over a parameter grid, as CSV or JSON.
    Sweep(SweepArgs),
    /// Success statistics of a dense-coding protocol, as JSON.
    Protocol(ProtocolArgs),
    /// Region map of a family, as JSON.
    Regions(RegionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Werner,
    Isotropic,
}

#[derive(Debug, Args)]
pub struct FamilySelect {
    #[arg(long, value_enum, default_value = "werner")]
    pub family: FamilyArg,
    /// Local dimension (isotropic only; defaults to 3).
    #[arg(long)]
    pub d: Option<usize>,
}

impl FamilySelect {
    fn resolve(&self) -> Result<StateFamily, CliError> {
        let name = match self.family {
            FamilyArg::Werner => "werner",
            FamilyArg::Isotropic => "isotropic",
        };
        Ok(StateFamily::from_name(name, self.d)?)
    }
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub family: FamilySelect,
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub family: FamilySelect,
    #[arg(long, default_value_t = thresholds::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Column {
    #[value(name = "chi")]
    Chi,
    #[value(name = "S_B")]
    SB,
    #[value(name = "S_AB")]
    SAb,
    #[value(name = "steerable")]
    Steerable,
    #[value(name = "dense_codeable")]
    DenseCodeable,
}

impl Column {
    pub const ALL: [Column; 5] =
        [Column::Chi, Column::SB, Column::SAb, Column::Steerable, Column::DenseCodeable];

    pub fn header(self) -> &'static str {
        match self {
            Column::Chi => "chi",
            Column::SB => "S_B",
            Column::SAb => "S_AB",
            Column::Steerable => "steerable",
            Column::DenseCodeable => "dense_codeable",
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilySelect,
    #[arg(long, default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub steps: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Subset of columns to emit (comma separated); all by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub outputs: Option<Vec<Column>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolKind {
    Superdense,
    Controlled,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolKind,
    #[command(flatten)]
    pub family: FamilySelect,
    /// Channel parameter for `superdense`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Cliff's basis angle in radians for `controlled`.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub family: FamilySelect,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 for bad arguments, 3 for numerical failures, 1 for i/o.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(e) if e.is_numerical() => 3,
            CliError::Compute(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Validated sweep request.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: StateFamily,
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub outputs: Vec<Column>,
}

impl SweepSpec {
    pub fn new(
        family: StateFamily,
        p_min: f64,
        p_max: f64,
        steps: usize,
        outputs: Option<Vec<Column>>,
    ) -> Result<Self, CliError> {
        if !(0.0..=1.0).contains(&p_min) || !(0.0..=1.0).contains(&p_max) || p_min >= p_max {
            return Err(CliError::Usage(format!("need 0 <= p_min < p_max <= 1, got [{p_min}, {p_max}]")));
        }
        if !(2..=MAX_STEPS).contains(&steps) {
            return Err(CliError::Usage(format!("steps must lie in 2..={MAX_STEPS}, got {steps}")));
        }
        let mut outputs = outputs.unwrap_or_else(|| Column::ALL.to_vec());
        outputs.sort();
        outputs.dedup();
        Ok(Self { family, p_min, p_max, steps, outputs })
    }

    /// Grid point `i`; the last point is exactly `p_max`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.p_max
        } else {
            self.p_min + (self.p_max - self.p_min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub chi: f64,
    #[serde(rename = "S_B")]
    pub s_b: f64,
    #[serde(rename = "S_AB")]
    pub s_ab: f64,
    pub steerable: bool,
    pub dense_codeable: bool,
}

pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>, Error> {
    (0..spec.steps)
        .map(|i| {
            let p = spec.point(i);
            let report = measures::family_capacity(&spec.family, p)?;
            let steer = measures::is_steerable(&spec.family, p)?;
            Ok(SweepRow {
                p,
                chi: report.chi,
                s_b: report.s_b,
                s_ab: report.s_ab,
                steerable: steer.steerable,
                dense_codeable: report.dense_codeable,
            })
        })
        .collect()
}

/// Formats `x` with nine significant digits; plain decimal for moderate
/// magnitudes, scientific otherwise.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        format!("{:.*}", (8 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn write_csv(rows: &[SweepRow], columns: &[Column], out: &mut impl Write) -> io::Result<()> {
    let mut header = vec!["p"];
    header.extend(columns.iter().map(|c| c.header()));
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut fields = vec![format_sig9(row.p)];
        for c in columns {
            fields.push(match c {
                Column::Chi => format_sig9(row.chi),
                Column::SB => format_sig9(row.s_b),
                Column::SAb => format_sig9(row.s_ab),
                Column::Steerable => u8::from(row.steerable).to_string(),
                Column::DenseCodeable => u8::from(row.dense_codeable).to_string(),
            });
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

fn rows_json(rows: &[SweepRow], columns: &[Column]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                obj.insert("p".into(), json!(row.p));
                for c in columns {
                    let v = match c {
                        Column::Chi => json!(row.chi),
                        Column::SB => json!(row.s_b),
                        Column::SAb => json!(row.s_ab),
                        Column::Steerable => json!(row.steerable),
                        Column::DenseCodeable => json!(row.dense_codeable),
                    };
                    obj.insert(c.header().into(), v);
                }
                Value::Object(obj)
            })
            .collect(),
    )
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(m.entries().iter().map(|z| json!([z.re, z.im])).collect())
}

fn outcome_json(kind: &str, p: Option<f64>, theta: Option<f64>, outcome: &ProtocolOutcome) -> Value {
    json!({
        "protocol": kind,
        "p": p,
        "theta": theta,
        "per_message_success": outcome.per_message_success,
        "success_probability": outcome.success_probability,
        "shared_state_after_control": outcome
            .shared_state_after_control
            .as_ref()
            .map(|s| matrix_json(s.matrix())),
    })
}

fn threshold_json(family: &StateFamily, tol: f64) -> Result<Value, CliError> {
    let dense = thresholds::find_dense_coding_threshold(family, tol)?;
    let steer = thresholds::steering_boundary(family)?;
    let rule = measures::is_steerable(family, 1.0)?.rule;
    Ok(json!({
        "family": family.name(),
        "d": family.local_dim(),
        "kind": dense.kind,
        "p_star": dense.p_star,
        "tolerance": dense.tolerance,
        "iterations": dense.iterations,
        "steerability_threshold": steer.p_star,
        "steerability_rule": rule.as_str(),
        "gap": dense.p_star - steer.p_star,
    }))
}

fn print_json(value: &Value, out: &mut impl Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// Executes one parsed command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Capacity(args) => {
            let family = args.family.resolve()?;
            let report = measures::family_capacity(&family, args.p)?;
            print_json(&serde_json::to_value(report).expect("plain struct"), out)
        }
        Command::Threshold(args) => {
            let family = args.family.resolve()?;
            if !(args.tol > 0.0 && args.tol < 1.0) {
                return Err(CliError::Usage(format!("tol must lie in (0, 1), got {}", args.tol)));
            }
            print_json(&threshold_json(&family, args.tol)?, out)
        }
        Command::Sweep(args) => {
            let family = args.family.resolve()?;
            let spec = SweepSpec::new(family, args.p_min, args.p_max, args.steps, args.outputs.clone())?;
            let rows = sweep_rows(&spec)?;
            let mut buf = Vec::new();
            match args.format {
                Format::Csv => write_csv(&rows, &spec.outputs, &mut buf)?,
                Format::Json => print_json(&rows_json(&rows, &spec.outputs), &mut buf)?,
            }
            match &args.out {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    file.write_all(&buf)?;
                    file.flush()?;
                }
                None => out.write_all(&buf)?,
            }
            Ok(())
        }
        Command::Protocol(args) => match args.protocol {
            ProtocolKind::Superdense => {
                let p = args.p.ok_or_else(|| CliError::Usage("superdense needs --p".into()))?;
                let family = args.family.resolve()?;
                let channel = family.evaluate(p)?;
                let outcome = protocols::superdense_run(&channel)?;
                print_json(&outcome_json("superdense", Some(p), None, &outcome), out)
            }
            ProtocolKind::Controlled => {
                let theta = args.theta.ok_or_else(|| CliError::Usage("controlled needs --theta".into()))?;
                let outcome = protocols::controlled_dense_coding_run(ControlBasis::new(theta)?)?;
                print_json(&outcome_json("controlled", None, Some(theta), &outcome), out)
            }
        },
        Command::Regions(args) => {
            let family = args.family.resolve()?;
            let map = thresholds::build_region_map(&family, args.steps)?;
            print_json(&serde_json::to_value(map).expect("plain struct"), out)
        }
    }
}

/// Parses `std::env::args`, runs, and maps failures to exit codes.
pub fn main_with_args() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("densecode: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
