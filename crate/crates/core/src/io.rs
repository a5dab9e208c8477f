//! Input loading and the JSON/text artifacts written by the command line tool.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagonalize::{CertificateChecks, DiagonalizationCertificate, SnfQ, StepRecord};
use crate::error::{Error, Result};
use crate::geometry::{Arrangement, IntersectionPoset};
use crate::linalg::Matrix;
use crate::matinvariants::ObstructionReport;
use crate::polyring::{Polynomial, UniPoly};
use crate::signedsets::{check_composition_closure, AxiomReport, SignVector, SignedFamily};
use crate::varchenko::{FactoredDeterminant, LabeledMatrix};

/// Reads an arrangement: a JSON object, a JSON array of sign strings, or one
/// sign string per line (`#` starts a comment). `dim` overrides the inferred
/// dimension of covector lists.
pub fn parse_arrangement(text: &str, dim: Option<usize>) -> Result<Arrangement> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let a = Arrangement::from_json_str(text)?;
        return match dim {
            Some(d) if d != a.dim() => {
                Err(Error::InvalidInput(format!("--dim {d} disagrees with the file's dim {}", a.dim())))
            }
            _ => Ok(a),
        };
    }
    let family = if trimmed.starts_with('[') {
        let items: Vec<String> = serde_json::from_str(text)?;
        SignedFamily::parse(&items.join("\n"))?
    } else {
        let lines: Vec<&str> =
            text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
        SignedFamily::parse(&lines.join("\n"))?
    };
    let d = dim.unwrap_or_else(|| Arrangement::infer_covector_dim(&family));
    Arrangement::from_covectors(d, family, None)
}

pub fn read_arrangement(path: &Path, dim: Option<usize>) -> Result<Arrangement> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_arrangement(&text, dim)
}

fn polynomial_grid(m: &Matrix<Polynomial>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
}

fn parse_grid(grid: &[Vec<String>]) -> Result<Matrix<Polynomial>> {
    let rows = grid
        .iter()
        .map(|r| r.iter().map(|s| s.parse::<Polynomial>()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

fn check_signs(items: &[String]) -> Result<()> {
    for s in items {
        s.parse::<SignVector>()?;
    }
    Ok(())
}

fn aligned(grid: &[Vec<String>]) -> String {
    let cols = grid.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols).map(|j| grid.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in grid {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignList {
    pub hyperplanes: Vec<String>,
    pub items: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatJson {
    pub id: usize,
    pub set: String,
    pub dim: i64,
    pub mobius: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosetJson {
    pub hyperplanes: Vec<String>,
    pub flats: Vec<FlatJson>,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharpolyJson {
    pub polynomial: String,
    /// Coefficients in ascending degree.
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub regions: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetJson {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bruteforce: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckJson {
    pub semigeneral: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub k: usize,
    #[serde(default)]
    pub region: usize,
    pub flat: usize,
    pub entry: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChecksJson {
    pub pvq_equals_d: bool,
    pub det_p: String,
    pub det_q: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub ordering: Vec<usize>,
    pub steps: Vec<StepJson>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<String>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<String>>,
    pub checks: ChecksJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnfQJson {
    /// `[k, multiplicity]` for diagonal entries `(1 - q^2)^k`.
    pub multiplicities: Vec<(u32, usize)>,
    /// `[d - dim, count]` over the flats.
    pub flat_counts: Vec<(u32, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomsJson {
    pub family_size: usize,
    pub a: String,
    pub b: String,
    pub c: String,
    pub composition: String,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionJson {
    pub id: String,
    pub semigeneral: bool,
    pub checks: Vec<ObstructionCheckJson>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionCheckJson {
    pub name: String,
    pub inputs: serde_json::Value,
    pub result: serde_json::Value,
    pub consistent: bool,
}

/// Every artifact the tool emits, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Artifact {
    Regions(SignList),
    Faces(SignList),
    Poset(PosetJson),
    Charpoly(CharpolyJson),
    Matrix(MatrixJson),
    Det(DetJson),
    Check(CheckJson),
    Certificate(CertificateJson),
    SnfQ(SnfQJson),
    Obstruction(ObstructionJson),
    Axioms(AxiomsJson),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Regions(_) => "regions",
            Artifact::Faces(_) => "faces",
            Artifact::Poset(_) => "poset",
            Artifact::Charpoly(_) => "charpoly",
            Artifact::Matrix(_) => "matrix",
            Artifact::Det(_) => "det",
            Artifact::Check(_) => "check",
            Artifact::Certificate(_) => "certificate",
            Artifact::SnfQ(_) => "snf_q",
            Artifact::Obstruction(_) => "obstruction",
            Artifact::Axioms(_) => "axioms",
        }
    }

    pub fn regions(a: &Arrangement, regions: &[SignVector]) -> Self {
        Artifact::Regions(SignList { hyperplanes: a.names(), items: regions.iter().map(ToString::to_string).collect() })
    }

    pub fn faces(a: &Arrangement, faces: &SignedFamily) -> Self {
        Artifact::Faces(SignList { hyperplanes: a.names(), items: faces.to_strings() })
    }

    pub fn poset(a: &Arrangement, p: &IntersectionPoset) -> Self {
        Artifact::Poset(PosetJson {
            hyperplanes: a.names(),
            flats: p
                .flats()
                .iter()
                .map(|f| FlatJson { id: f.id, set: f.defining_set.to_string(), dim: f.dim, mobius: p.mobius(f.id) })
                .collect(),
            covers: p.covers(),
        })
    }

    pub fn charpoly(chi: &UniPoly) -> Self {
        Artifact::Charpoly(CharpolyJson {
            polynomial: chi.display_with("t"),
            coefficients: chi.coeffs().iter().map(ToString::to_string).collect(),
        })
    }

    pub fn matrix(regions: &[SignVector], v: &LabeledMatrix) -> Self {
        Artifact::Matrix(MatrixJson {
            regions: v.labels.iter().map(|&i| regions[i].to_string()).collect(),
            matrix: v.to_string_grid(),
        })
    }

    pub fn certificate(cert: &DiagonalizationCertificate) -> Self {
        Artifact::Certificate(CertificateJson::from(cert))
    }

    pub fn snf_q(s: &SnfQ) -> Self {
        Artifact::SnfQ(SnfQJson { multiplicities: s.multiplicities.clone(), flat_counts: s.flat_counts.clone() })
    }

    pub fn axioms(family: &SignedFamily, report: &AxiomReport) -> Self {
        let lines: Vec<String> = report.to_string().lines().map(str::to_string).collect();
        let composition = match check_composition_closure(family) {
            None => "pass".to_string(),
            Some((x, y)) => format!("FAIL: {x} o {y} is missing"),
        };
        let all_pass = report.all_pass() && composition == "pass";
        Artifact::Axioms(AxiomsJson {
            family_size: family.len(),
            a: lines[0].trim_start_matches("(a) ").to_string(),
            b: lines[1].trim_start_matches("(b) ").to_string(),
            c: lines[2].trim_start_matches("(c) ").to_string(),
            composition,
            all_pass,
        })
    }

    pub fn obstruction(r: &ObstructionReport) -> Self {
        Artifact::Obstruction(ObstructionJson {
            id: r.id.clone(),
            semigeneral: r.semigeneral,
            checks: r
                .checks
                .iter()
                .map(|c| ObstructionCheckJson {
                    name: c.name.clone(),
                    inputs: c.inputs.clone(),
                    result: c.result.clone(),
                    consistent: c.consistent,
                })
                .collect(),
            note: r.note.clone(),
        })
    }

    /// Parses and validates an emitted artifact.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let a: Artifact = serde_json::from_str(text)?;
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        match self {
            Artifact::Regions(l) | Artifact::Faces(l) => check_signs(&l.items),
            Artifact::Matrix(m) => {
                check_signs(&m.regions)?;
                let v = parse_grid(&m.matrix)?;
                if !v.is_square() || v.rows() != m.regions.len() {
                    return Err(Error::InvalidInput("matrix artifact is not square over its regions".into()));
                }
                Ok(())
            }
            Artifact::Det(d) => {
                for s in d.formula.iter().chain(&d.bruteforce) {
                    if s.parse::<FactoredDeterminant>().is_err() {
                        s.parse::<Polynomial>()?;
                    }
                }
                Ok(())
            }
            Artifact::Certificate(c) => c.to_certificate().map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifacts serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Artifact::Regions(l) | Artifact::Faces(l) => {
                let tag = if matches!(self, Artifact::Regions(_)) { "R" } else { "F" };
                for (i, s) in l.items.iter().enumerate() {
                    let _ = writeln!(out, "{tag}{} {s}", i + 1);
                }
            }
            Artifact::Poset(p) => {
                for f in &p.flats {
                    let _ = writeln!(out, "L{} set={} dim={} mu={}", f.id, f.set, f.dim, f.mobius);
                }
            }
            Artifact::Charpoly(c) => {
                let _ = writeln!(out, "{}", c.polynomial);
            }
            Artifact::Matrix(m) => out = aligned(&m.matrix),
            Artifact::Det(d) => match (&d.formula, &d.bruteforce) {
                (Some(f), Some(b)) => {
                    let _ = writeln!(out, "formula: {f}\nbruteforce: {b}");
                }
                (Some(x), None) | (None, Some(x)) => {
                    let _ = writeln!(out, "{x}");
                }
                (None, None) => {}
            },
            Artifact::Check(c) => {
                let _ = match &c.witness {
                    None => writeln!(out, "semigeneral"),
                    Some(w) => writeln!(out, "not semigeneral: {w}"),
                };
            }
            Artifact::Certificate(c) => {
                let ids: Vec<String> = c.ordering.iter().map(|i| format!("R{}", i + 1)).collect();
                let _ = writeln!(out, "ordering: {}", ids.join(" "));
                for s in &c.steps {
                    let _ = writeln!(out, "step {}: R{} L{} {}", s.k, s.region + 1, s.flat, s.entry);
                }
                let _ = writeln!(
                    out,
                    "PVQ = D: {}\ndet P = {}, det Q = {}",
                    if c.checks.pvq_equals_d { "yes" } else { "no" },
                    c.checks.det_p,
                    c.checks.det_q
                );
            }
            Artifact::SnfQ(s) => {
                for &(k, m) in &s.multiplicities {
                    let _ = writeln!(out, "(1-q^2)^{k}: {m}");
                }
            }
            Artifact::Obstruction(r) => {
                for c in &r.checks {
                    let verdict = if c.consistent { "consistent" } else { "INCONSISTENT" };
                    let _ = writeln!(out, "{}: {verdict} {}", c.name, c.result);
                }
                let _ = writeln!(out, "note: {}", r.note);
            }
            Artifact::Axioms(a) => {
                let _ = writeln!(out, "(a) {}\n(b) {}\n(c) {}\ncomposition {}", a.a, a.b, a.c, a.composition);
            }
        }
        out
    }
}

impl From<&DiagonalizationCertificate> for CertificateJson {
    fn from(cert: &DiagonalizationCertificate) -> Self {
        CertificateJson {
            ordering: cert.ordering.clone(),
            steps: cert
                .steps
                .iter()
                .map(|s| StepJson { k: s.k, region: s.region, flat: s.flat, entry: s.entry.to_string() })
                .collect(),
            p: polynomial_grid(&cert.p),
            q: polynomial_grid(&cert.q),
            checks: ChecksJson {
                pvq_equals_d: cert.checks.pvq_equals_d,
                det_p: cert.checks.det_p.to_string(),
                det_q: cert.checks.det_q.to_string(),
            },
        }
    }
}

impl CertificateJson {
    pub fn to_certificate(&self) -> Result<DiagonalizationCertificate> {
        let sign = |s: &str| match s {
            "1" => Ok(1),
            "-1" => Ok(-1),
            _ => Err(Error::InvalidInput(format!("determinant {s:?} is not 1 or -1"))),
        };
        let steps = self
            .steps
            .iter()
            .map(|s| Ok(StepRecord { k: s.k, region: s.region, flat: s.flat, entry: s.entry.parse()? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalizationCertificate {
            ordering: self.ordering.clone(),
            steps,
            p: parse_grid(&self.p)?,
            q: parse_grid(&self.q)?,
            checks: CertificateChecks {
                pvq_equals_d: self.checks.pvq_equals_d,
                det_p: sign(&self.checks.det_p)?,
                det_q: sign(&self.checks.det_q)?,
                closed_form_steps: 0,
                backtracked: false,
            },
        })
    }
}
