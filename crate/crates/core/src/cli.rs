//! Command line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagonalize::{diagonalize, snf_q, verify_certificate};
use crate::error::{Error, Result};
use crate::geometry::Arrangement;
use crate::io::{parse_arrangement, read_arrangement, Artifact, CheckJson, DetJson};
use crate::matinvariants::obstruction_report;
use crate::signedsets::{check_vector_axioms, ElementSet, SignedFamily};
use crate::varchenko::{det_bruteforce, det_formula, factor_over, varchenko_from_regions};

/// Environment variable limiting the worker threads.
pub const THREADS_ENV: &str = "VARCHENKO_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DetMethod {
    Formula,
    Bruteforce,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "varchenko", version, about = "Varchenko matrices and their diagonal forms")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    /// Re-read an artifact previously emitted by the same subcommand.
    #[arg(long, global = true)]
    pub from_json: Option<PathBuf>,
    /// Dimension for covector-list inputs (inferred when omitted).
    #[arg(long, global = true)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Arrangement JSON or covector list.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regions as sign vectors.
    Regions(Input),
    /// All faces.
    Faces(Input),
    /// Intersection poset with Möbius values.
    Poset(Input),
    /// Characteristic polynomial in t.
    Charpoly(Input),
    /// Varchenko matrix.
    Matrix(Input),
    /// Determinant of the Varchenko matrix.
    Det {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = DetMethod::Formula)]
        method: DetMethod,
    },
    /// Semigeneral position test.
    Check(Input),
    /// Diagonal form with its transformation certificate.
    Diagonalize {
        #[command(flatten)]
        input: Input,
        /// Also write the certificate JSON to this path.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Diagonal entries after setting every variable to q.
    SnfQ(Input),
    /// Diagnostics for arrangements that are not semigeneral.
    Obstruct(Input),
    /// Oriented-matroid axioms on the face family.
    Axioms(Input),
}

impl Command {
    fn input(&self) -> &Input {
        match self {
            Command::Regions(i)
            | Command::Faces(i)
            | Command::Poset(i)
            | Command::Charpoly(i)
            | Command::Matrix(i)
            | Command::Check(i)
            | Command::SnfQ(i)
            | Command::Obstruct(i)
            | Command::Axioms(i) => i,
            Command::Det { input, .. } | Command::Diagonalize { input, .. } => input,
        }
    }

    fn artifact_kind(&self) -> &'static str {
        match self {
            Command::Regions(_) => "regions",
            Command::Faces(_) => "faces",
            Command::Poset(_) => "poset",
            Command::Charpoly(_) => "charpoly",
            Command::Matrix(_) => "matrix",
            Command::Det { .. } => "det",
            Command::Check(_) => "check",
            Command::Diagonalize { .. } => "certificate",
            Command::SnfQ(_) => "snf_q",
            Command::Obstruct(_) => "obstruction",
            Command::Axioms(_) => "axioms",
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn load(cfg: &RunConfig) -> Result<Arrangement> {
    let path =
        cfg.command.input().input.as_ref().ok_or_else(|| Error::InvalidInput("an input file is required".into()))?;
    read_arrangement(path, cfg.dim)
}

fn determinant(a: &Arrangement, method: DetMethod) -> Result<Artifact> {
    let formula = match method {
        DetMethod::Bruteforce => None,
        _ => Some(det_formula(a)?),
    };
    let bruteforce = match method {
        DetMethod::Formula => None,
        _ => {
            let regions = a.enumerate_regions()?;
            let det = det_bruteforce(&varchenko_from_regions(&regions).matrix)?;
            let mut sets: Vec<ElementSet> = match a.intersection_poset() {
                Ok(p) => p.flats().iter().map(|f| f.defining_set).filter(|s| !s.is_empty()).collect(),
                Err(_) => Vec::new(),
            };
            sets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp_lex(*y)));
            Some(match factor_over(&det, &sets) {
                Some(f) => (f.to_string(), det),
                None => (det.to_string(), det),
            })
        }
    };
    if let (Some(f), Some((_, d))) = (&formula, &bruteforce) {
        if f.expand() != *d {
            return Err(Error::ClosedFormViolation {
                step: 0,
                detail: format!("formula {f} differs from the expanded determinant {d}"),
            });
        }
    }
    Ok(Artifact::Det(DetJson {
        method: format!("{method:?}").to_lowercase(),
        formula: formula.map(|f| f.to_string()),
        bruteforce: bruteforce.map(|(s, _)| s),
    }))
}

/// Raw covector lists are checked without the validation applied on load.
fn axiom_family(cfg: &RunConfig) -> Result<SignedFamily> {
    let path =
        cfg.command.input().input.as_ref().ok_or_else(|| Error::InvalidInput("an input file is required".into()))?;
    let text = read_text(path)?;
    let t = text.trim_start();
    if t.starts_with('{') {
        return parse_arrangement(&text, cfg.dim)?.axiom_family();
    }
    if t.starts_with('[') {
        let items: Vec<String> = serde_json::from_str(&text)?;
        return SignedFamily::parse(&items.join("\n"));
    }
    let lines: Vec<&str> =
        text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
    SignedFamily::parse(&lines.join("\n"))
}

fn execute(cfg: &RunConfig) -> Result<Artifact> {
    if let Some(path) = &cfg.from_json {
        let art = Artifact::from_json_str(&read_text(path)?)?;
        if art.kind() != cfg.command.artifact_kind() {
            return Err(Error::InvalidInput(format!(
                "{} holds a {} artifact, expected {}",
                path.display(),
                art.kind(),
                cfg.command.artifact_kind()
            )));
        }
        if let (Artifact::Certificate(c), Some(_)) = (&art, &cfg.command.input().input) {
            let a = load(cfg)?;
            let mut cert = c.to_certificate()?;
            let checks = verify_certificate(&a, &cert)?;
            if !checks.pvq_equals_d || checks.det_p.abs() != 1 || checks.det_q.abs() != 1 {
                return Err(Error::InvalidInput("certificate does not verify against the arrangement".into()));
            }
            cert.checks = checks;
            return Ok(Artifact::certificate(&cert));
        }
        return Ok(art);
    }
    if let Command::Axioms(_) = cfg.command {
        let family = axiom_family(cfg)?;
        let report = check_vector_axioms(&family)?;
        return Ok(Artifact::axioms(&family, &report));
    }
    let a = load(cfg)?;
    Ok(match &cfg.command {
        Command::Regions(_) => Artifact::regions(&a, &a.enumerate_regions()?),
        Command::Faces(_) => Artifact::faces(&a, &a.enumerate_faces()?),
        Command::Poset(_) => Artifact::poset(&a, &a.intersection_poset()?),
        Command::Charpoly(_) => Artifact::charpoly(&a.characteristic_polynomial()?),
        Command::Matrix(_) => {
            let regions = a.enumerate_regions()?;
            Artifact::matrix(&regions, &varchenko_from_regions(&regions))
        }
        Command::Det { method, .. } => determinant(&a, *method)?,
        Command::Check(_) => Artifact::Check(match a.is_semigeneral()? {
            Ok(()) => CheckJson { semigeneral: true, witness: None },
            Err(w) => CheckJson { semigeneral: false, witness: Some(w.to_string()) },
        }),
        Command::Diagonalize { certificate, .. } => {
            let art = Artifact::certificate(&diagonalize(&a)?);
            if let Some(path) = certificate {
                write_text(path, &art.to_json())?;
            }
            art
        }
        Command::SnfQ(_) => Artifact::snf_q(&snf_q(&a)?),
        Command::Obstruct(i) => {
            let id = i
                .input
                .as_ref()
                .and_then(|p| p.file_stem())
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Artifact::obstruction(&obstruction_report(&a, &id)?)
        }
        Command::Axioms(_) => unreachable!(),
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let result = execute(&cfg).and_then(|art| {
        let text = match cfg.format {
            Format::Text => art.to_text(),
            Format::Json => art.to_json(),
        };
        match &cfg.output {
            Some(path) => write_text(path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', "; "));
            e.exit_code()
        }
    }
}
