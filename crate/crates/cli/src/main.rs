use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use oddleech::analysis::{is_even, is_unimodular, min_norm, short_vectors, theta_coeffs};
use oddleech::codes::{code_c11, code_c4, code_d4, ZkCode};
use oddleech::construction_a::{construction_a, LatticeRep};
use oddleech::frames::{build_frame, check_frame, represent_quaternary, FrameCertificate, FrameError};
use oddleech::qseries::{quaternary_gram, quaternary_theta, IdentityForm, IdentityInputs, IDENTITY_BOUND};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "oddleech", version, about = "Orthogonal frames in the odd Leech lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or verify frame certificates.
    Frame {
        #[command(subcommand)]
        action: FrameAction,
    },
    /// Lattice invariants of a Construction A lattice.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Theta/eta identity checks.
    Qseries {
        #[command(subcommand)]
        action: QseriesAction,
    },
    /// Representation of 4k by a² + 11b² + c² + 11d² with a≡d, b≡c (mod 4).
    Represent {
        #[arg(long)]
        k: u64,
    },
    /// Theta series coefficients a(0..=n).
    Theta {
        #[arg(long, value_enum)]
        code: ThetaSource,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum FrameAction {
    Build {
        #[arg(long)]
        k: u64,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify { path: PathBuf },
}

#[derive(Subcommand)]
enum LatticeAction {
    Analyze {
        #[arg(long, value_enum)]
        code: CodeId,
        #[arg(long, default_value_t = 4)]
        bound: u64,
    },
}

#[derive(Subcommand)]
enum QseriesAction {
    Identity {
        #[arg(long, default_value_t = IDENTITY_BOUND)]
        bound: u64,
        /// Compare at every n with the character factors instead of only n coprime to 22.
        #[arg(long)]
        as_printed: bool,
        /// Add 1 to b(n) before checking.
        #[arg(long, hide = true)]
        inject_b_fault: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeId {
    #[value(name = "C4")]
    C4,
    #[value(name = "D4")]
    D4,
    #[value(name = "C11")]
    C11,
}

impl CodeId {
    fn code(self) -> ZkCode {
        match self {
            CodeId::C4 => code_c4(),
            CodeId::D4 => code_d4(),
            CodeId::C11 => code_c11(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            CodeId::C4 => "C4",
            CodeId::D4 => "D4",
            CodeId::C11 => "C11",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaSource {
    #[value(name = "C4")]
    C4,
    #[value(name = "D4")]
    D4,
    #[value(name = "C11")]
    C11,
    /// The quaternary form of discriminant 121.
    #[value(name = "M")]
    M,
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn lattice_of(code: CodeId) -> Result<LatticeRep, ExitCode> {
    construction_a(&code.code()).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_FAILURE)
    })
}

fn frame_build(k: u64, out: Option<PathBuf>) -> ExitCode {
    let cert = match build_frame(k) {
        Ok(c) => c,
        Err(e @ FrameError::NormTooSmall(_)) => return usage_error(e),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    };
    let text = serde_json::to_string_pretty(&cert.to_json()).expect("serializable");
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_FAILURE);
            }
            print_json(&json!({ "k": k, "out": path.display().to_string(), "checks": cert.checks().to_json() }));
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}

fn frame_verify(path: PathBuf) -> ExitCode {
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("cannot read {}: {e}", path.display())),
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return usage_error(format!("malformed JSON: {e}")),
    };
    let cert = match FrameCertificate::from_json(&value) {
        Ok(c) => c,
        Err(e) => return usage_error(format!("malformed certificate: {e}")),
    };
    let checks = check_frame(&cert);
    print_json(&json!({
        "k": cert.k,
        "gram_ok": checks.gram_ok,
        "membership_ok": checks.membership_ok,
        "verified": checks.ok(),
    }));
    status(checks.ok())
}

fn lattice_analyze(code: CodeId, bound: u64) -> ExitCode {
    let lattice = match lattice_of(code) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let report = match short_vectors(&lattice, bound, false) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let min = match report.min_norm() {
        Some(m) => m,
        None => match min_norm(&lattice) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FAILURE);
            }
        },
    };
    let counts: serde_json::Map<String, Value> = report
        .counts_by_norm
        .iter()
        .map(|(n, c)| (n.to_string(), Value::from(*c)))
        .collect();
    print_json(&json!({
        "code": code.name(),
        "bound": bound,
        "unimodular": is_unimodular(&lattice),
        "even": is_even(&lattice),
        "minNorm": min,
        "countsByNorm": counts,
    }));
    ExitCode::SUCCESS
}

fn qseries_identity(bound: u64, as_printed: bool, fault: Option<u64>) -> ExitCode {
    let mut inputs = IdentityInputs::compute(bound);
    if let Some(n) = fault {
        let n = n as i64;
        let v = inputs.b.coeff(n) + BigInt::from(1);
        inputs.b.set_coeff(n, v);
    }
    let form = if as_printed {
        IdentityForm::AsPrinted
    } else {
        IdentityForm::Coprime22
    };
    let report = inputs.check(form);
    print_json(&report.to_json());
    status(report.holds)
}

fn represent(k: u64) -> ExitCode {
    if k == 0 {
        return usage_error("k must be at least 1");
    }
    match represent_quaternary(k) {
        Some(r) => println!("{r}"),
        None => println!("none"),
    }
    ExitCode::SUCCESS
}

fn theta(source: ThetaSource, n: u64) -> ExitCode {
    let (name, coeffs): (&str, Vec<Value>) = match source {
        ThetaSource::M => match quaternary_theta(&quaternary_gram(), n) {
            Ok(s) => ("M", (0..=n as i64).map(|i| oddleech::json::int_to_json(&s.coeff(i))).collect()),
            Err(e) => return usage_error(e),
        },
        other => {
            let id = match other {
                ThetaSource::C4 => CodeId::C4,
                ThetaSource::D4 => CodeId::D4,
                _ => CodeId::C11,
            };
            let lattice = match lattice_of(id) {
                Ok(l) => l,
                Err(c) => return c,
            };
            match theta_coeffs(&lattice, n) {
                Ok(c) => (id.name(), c.into_iter().map(Value::from).collect()),
                Err(e) => return usage_error(e),
            }
        }
    };
    print_json(&json!({ "code": name, "n": n, "coeffs": coeffs }));
    ExitCode::SUCCESS
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var("NUM_WORKERS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("NUM_WORKERS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_workers() {
        return usage_error(e);
    }
    match cli.command {
        Command::Frame { action } => match action {
            FrameAction::Build { k, out } => frame_build(k, out),
            FrameAction::Verify { path } => frame_verify(path),
        },
        Command::Lattice {
            action: LatticeAction::Analyze { code, bound },
        } => lattice_analyze(code, bound),
        Command::Qseries {
            action:
                QseriesAction::Identity {
                    bound,
                    as_printed,
                    inject_b_fault,
                },
        } => qseries_identity(bound, as_printed, inject_b_fault),
        Command::Represent { k } => represent(k),
        Command::Theta { code, n } => theta(code, n),
    }
}
