//! The `mdiag` command line: arrangements, faces and strata, and the diagram checkers.
//!
//! Exit codes: 0 when the input is accepted, 1 when it is rejected with evidence, 2 when it
//! cannot be read.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use matrix_diagrams::arrangement::{tits_product, DEFAULT_FACE_BUDGET};
use matrix_diagrams::catalog::{catalog, negative_examples};
use matrix_diagrams::cousin::{compact_cohomology, perversity_report, PerversityReport};
use matrix_diagrams::diagram::{validate, LoadOptions, ValidationReport};
use matrix_diagrams::dirac::{to_dirac, validate_dirac};
use matrix_diagrams::{Arrangement, FacePoset, FieldSpec, MatrixDiagram, Strata};

#[derive(Parser, Debug)]
#[command(name = "mdiag", version, about = "Check matrix diagrams of real hyperplane arrangements")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Field of coefficients, `Q` or `Fp:p`; overrides the diagram file.
    #[arg(long, global = true)]
    pub field: Option<FieldSpec>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Give up when an arrangement has more faces than this.
    #[arg(long, global = true, default_value_t = DEFAULT_FACE_BUDGET)]
    pub max_faces: usize,
    /// Read `dsecond` keys as `A1->A2|B` (smaller face first).
    #[arg(long, global = true)]
    pub dsecond_covariant: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the faces with dimensions and interior points.
    Faces { arrangement: PathBuf },
    /// List the covering relations of the face poset.
    Poset { arrangement: PathBuf },
    /// Tits product `B∘A`, or the whole table when no faces are given.
    Tits {
        arrangement: PathBuf,
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// Product cells with their stratum keys.
    Strata { arrangement: PathBuf },
    /// Check the matrix diagram axioms.
    Validate { arrangement: PathBuf, diagram: PathBuf },
    /// Print the dual diagram.
    Dualize { arrangement: PathBuf, diagram: PathBuf },
    /// Convert a diagram over the line `{0} ⊂ R` to a Dirac diagram.
    ToDirac { arrangement: PathBuf, diagram: PathBuf },
    /// Validate, then decide constructibility and perversity.
    Check { arrangement: PathBuf, diagram: PathBuf },
    /// Compactly supported cohomology.
    Hc { arrangement: PathBuf, diagram: PathBuf },
    /// Write the example catalog as JSON files.
    Catalog {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Whether the input was accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Rejected,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Accepted
        } else {
            Outcome::Rejected
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Accepted => 0,
            Outcome::Rejected => 1,
        }
    }
}

pub const EXIT_MALFORMED: i32 = 2;

fn load_strata(path: &Path, opts: &Opts) -> Result<Strata> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let arr = Arrangement::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    for w in arr.warnings() {
        log::warn!("{w}");
    }
    Ok(Strata::new(arr, opts.max_faces)?)
}

fn load_diagram(strata: &Strata, path: &Path, opts: &Opts) -> Result<MatrixDiagram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let lo = LoadOptions { field: opts.field, dsecond_covariant: opts.dsecond_covariant };
    MatrixDiagram::from_json(strata, &text, lo).with_context(|| format!("loading {}", path.display()))
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.opts.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build()?;
    // reports are buffered and written in one piece
    let (outcome, buf) = pool.install(|| {
        let mut buf = Vec::new();
        let r = dispatch(cli, &mut buf);
        (r, buf)
    });
    out.write_all(&buf)?;
    outcome
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let opts = &cli.opts;
    let text = opts.format == Format::Text;
    match &cli.command {
        Command::Faces { arrangement } => {
            let s = load_strata(arrangement, opts)?;
            let faces = faces_json(s.real());
            if text {
                for f in faces.as_array().expect("array") {
                    writeln!(out, "{:<12} dim {}  at ({})", f["label"].as_str().unwrap_or(""), f["dim"], join(&f["witness"]))?;
                }
                writeln!(out, "{} faces", s.real().len())?;
            } else {
                emit_json(out, &faces)?;
            }
        }
        Command::Poset { arrangement } => {
            let s = load_strata(arrangement, opts)?;
            let p = s.real();
            let covers: Vec<(String, String)> = p.covers().into_iter().map(|(x, y)| (p.label(x), p.label(y))).collect();
            if text {
                for (x, y) in &covers {
                    writeln!(out, "{x} < {y}")?;
                }
            } else {
                emit_json(out, &json!({ "faces": p.ids().map(|f| p.label(f)).collect::<Vec<_>>(), "covers": covers }))?;
            }
        }
        Command::Tits { arrangement, b, a } => {
            let s = load_strata(arrangement, opts)?;
            let p = s.real();
            match (b, a) {
                (Some(b), Some(a)) => {
                    let (fb, fa) = (p.parse(b)?, p.parse(a)?);
                    let ba = p.label(tits_product(p, fb, fa)?);
                    if text {
                        writeln!(out, "{ba}")?;
                    } else {
                        emit_json(out, &json!({ "b": p.label(fb), "a": p.label(fa), "product": ba }))?;
                    }
                }
                (None, None) => {
                    let mut table = Vec::new();
                    for fb in p.ids() {
                        for fa in p.ids() {
                            table.push((p.label(fb), p.label(fa), p.label(tits_product(p, fb, fa)?)));
                        }
                    }
                    if text {
                        for (b, a, ba) in &table {
                            writeln!(out, "{b} o {a} = {ba}")?;
                        }
                    } else {
                        emit_json(out, &table)?;
                    }
                }
                _ => bail!("give both faces B and A, or neither"),
            }
        }
        Command::Strata { arrangement } => {
            let s = load_strata(arrangement, opts)?;
            let cells: Vec<Value> = s
                .cells()
                .into_iter()
                .map(|c| {
                    let key = s.key(c);
                    json!({ "cell": s.cell_label(c), "key": key.to_string(), "codim": s.codim(&key) })
                })
                .collect();
            let keys: Vec<Value> = s.keys().into_iter().map(|k| json!({ "key": k.to_string(), "codim": s.codim(&k) })).collect();
            if text {
                for c in &cells {
                    writeln!(out, "{:<16} {} codim {}", c["cell"].as_str().unwrap_or(""), c["key"].as_str().unwrap_or(""), c["codim"])?;
                }
                writeln!(out, "{} cells, {} strata", cells.len(), keys.len())?;
            } else {
                emit_json(out, &json!({ "cells": cells, "strata": keys }))?;
            }
        }
        Command::Validate { arrangement, diagram } => {
            let s = load_strata(arrangement, opts)?;
            let d = load_diagram(&s, diagram, opts)?;
            let r = validate(&s, &d)?;
            if text {
                write!(out, "{}", render_validation(&r))?;
            } else {
                emit_json(out, &json!({ "valid": r.passes(), "report": r }))?;
            }
            return Ok(Outcome::from_bool(r.passes()));
        }
        Command::Dualize { arrangement, diagram } => {
            let s = load_strata(arrangement, opts)?;
            let d = load_diagram(&s, diagram, opts)?;
            writeln!(out, "{}", d.dualize(&s)?.to_json(&s))?;
        }
        Command::ToDirac { arrangement, diagram } => {
            let s = load_strata(arrangement, opts)?;
            let d = load_diagram(&s, diagram, opts)?;
            let r = validate(&s, &d)?;
            if !r.passes() {
                if text {
                    write!(out, "{}", render_validation(&r))?;
                } else {
                    emit_json(out, &json!({ "valid": false, "report": r }))?;
                }
                return Ok(Outcome::Rejected);
            }
            let dd = to_dirac(&s, &d)?;
            let view = dd.view()?;
            let ok = validate_dirac(&dd)?.passes();
            if text {
                let (m, z, p) = view.dims;
                writeln!(out, "E_- = k^{m}, E_0 = k^{z}, E_+ = k^{p}")?;
                for (name, mat) in [("delta_-", &view.delta_minus), ("delta_+", &view.delta_plus), ("gamma_-", &view.gamma_minus), ("gamma_+", &view.gamma_plus)] {
                    writeln!(out, "{name} = {}", render_matrix(mat))?;
                }
                if ok {
                    writeln!(out, "Dirac conditions hold")?;
                }
                for f in &view.report.failures {
                    writeln!(out, "fails: {f}")?;
                }
            } else {
                emit_json(out, &view)?;
            }
            return Ok(Outcome::from_bool(ok));
        }
        Command::Check { arrangement, diagram } => {
            let s = load_strata(arrangement, opts)?;
            let d = load_diagram(&s, diagram, opts)?;
            let r = perversity_report(&s, &d)?;
            if text {
                if let Some(grid) = grid(&s, &d) {
                    writeln!(out, "{grid}")?;
                }
                write!(out, "{}", render_check(&r))?;
            } else {
                emit_json(out, &r)?;
            }
            return Ok(Outcome::from_bool(r.verdicts.perverse));
        }
        Command::Hc { arrangement, diagram } => {
            let s = load_strata(arrangement, opts)?;
            let d = load_diagram(&s, diagram, opts)?;
            let h = compact_cohomology(&s, &d)?;
            if text {
                if h.cohomology.is_empty() {
                    writeln!(out, "H_c = 0")?;
                }
                for (k, v) in &h.cohomology {
                    writeln!(out, "H^{k}_c = k^{v}")?;
                }
                writeln!(out, "euler characteristic {} (stalk sum {})", h.euler_characteristic, h.stalk_euler_sum)?;
            } else {
                emit_json(out, &h)?;
            }
        }
        Command::Catalog { out: dir } => {
            let n = write_catalog(dir)?;
            writeln!(out, "wrote {n} files to {}", dir.display())?;
        }
    }
    Ok(Outcome::Accepted)
}

fn join(v: &Value) -> String {
    v.as_array().map(|a| a.iter().map(|x| x.as_str().unwrap_or("?").to_string()).collect::<Vec<_>>().join(", ")).unwrap_or_default()
}

fn faces_json(p: &FacePoset) -> Value {
    Value::Array(
        p.ids()
            .map(|f| {
                let face = p.face(f);
                let w: Vec<String> = face.witness.iter().map(matrix_diagrams::linalg::format_rational).collect();
                json!({ "label": p.label(f), "dim": face.dim, "witness": w })
            })
            .collect(),
    )
}

fn render_matrix(m: &[Vec<String>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| r.join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

pub fn render_validation(r: &ValidationReport) -> String {
    let mut s = String::new();
    if r.passes() {
        let _ = writeln!(s, "valid ({} required isomorphisms)", r.required_isos);
        return s;
    }
    let _ = writeln!(s, "not a matrix diagram");
    for q in &r.squares {
        let _ = writeln!(s, "  square {:?} does not commute: imag {} <= {}, real {} <= {}", q.kind, q.imag_low, q.imag_high, q.real_low, q.real_high);
    }
    for (name, list) in [("dprime", &r.m3_prime), ("dsecond", &r.m3_second)] {
        for f in list {
            let _ = writeln!(
                s,
                "  {name} at {} from {} to {} is not invertible (rank {}, {}x{}; same stratum: {} = {})",
                f.fixed, f.low, f.high, f.rank, f.target_dim, f.source_dim, f.witnesses.0, f.witnesses.1
            );
        }
    }
    for m in &r.tits_key_mismatches {
        let _ = writeln!(s, "  Tits and key conditions disagree at {m}");
    }
    s
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_check(r: &PerversityReport) -> String {
    let v = &r.verdicts;
    let mut s = String::new();
    let _ = writeln!(s, "matrix diagram   {}", yes(v.well_formed));
    let _ = writeln!(s, "constructible    {}", yes(v.constructible));
    let _ = writeln!(s, "(P-)             {}", yes(v.p_minus));
    let _ = writeln!(s, "(P+)             {}", yes(v.p_plus));
    let _ = writeln!(s, "verdict          {}", if v.perverse { "perverse" } else { "rejected" });
    if !v.well_formed {
        s.push_str(&render_validation(&r.validation));
    }
    for d in &r.defects {
        let _ = writeln!(s, "  defect: {d}");
    }
    for f in &r.constructibility_failures {
        let _ = writeln!(s, "  {:?} map {} -> {} in stratum {}: {}", f.direction, f.from, f.to, f.key, f.reason);
    }
    for e in &r.p_minus_violations {
        let _ = writeln!(s, "  (P-) H^{} = k^{} at {} but the stratum {} has codimension {}", e.degree, e.dim, e.cell, e.key, e.codim);
    }
    for e in &r.p_plus_dual_violations {
        let _ = writeln!(s, "  (P+) dual has H^{} = k^{} at {} in stratum {} of codimension {}", e.degree, e.dim, e.cell, e.key, e.codim);
    }
    for e in &r.p_plus_costalk_violations {
        let _ = writeln!(s, "  (P+) costalk H^{} = k^{} at {} below degree {}", e.degree, e.dim, e.cell, e.bound);
    }
    let _ = writeln!(s, "stalk cohomology:");
    for e in &r.support {
        let _ = writeln!(s, "  H^{} = k^{} at {} (stratum {}, codim {})", e.degree, e.dim, e.cell, e.key, e.codim);
    }
    s
}

/// Dimensions `E_{A,B}` of a diagram over a line, with imaginary faces as rows (top `+`) and
/// real faces as columns in their order along the line. Arrows are the cover maps.
pub fn grid(s: &Strata, d: &MatrixDiagram) -> Option<String> {
    if s.dim() != 1 {
        return None;
    }
    let along = |p: &FacePoset| {
        let mut v: Vec<_> = p.ids().collect();
        v.sort_by(|x, y| p.face(*x).witness[0].cmp(&p.face(*y).witness[0]));
        v
    };
    let (imag, real) = (s.imag(), s.real());
    let cols = along(real);
    let mut rows = along(imag);
    rows.reverse();
    let w = cols.iter().map(|&b| real.label(b).len()).max().unwrap_or(1).max(2);
    let mut out = String::new();
    let _ = write!(out, "{:>4}  ", "");
    for &b in &cols {
        let _ = write!(out, "{:^w$}    ", real.label(b));
    }
    out.push('\n');
    for (i, &a) in rows.iter().enumerate() {
        let _ = write!(out, "{:>4}  ", imag.label(a));
        for (j, &b) in cols.iter().enumerate() {
            let _ = write!(out, "{:^w$}", d.dim(a, b));
            if j + 1 < cols.len() {
                let arrow = if real.dim(b) < real.dim(cols[j + 1]) { " -> " } else { " <- " };
                out.push_str(arrow);
            }
        }
        out.push('\n');
        if i + 1 < rows.len() {
            // ∂″ points from the chambers towards the middle row
            let arrow = if imag.dim(a) > imag.dim(rows[i + 1]) { "v" } else { "^" };
            let _ = write!(out, "{:>4}  ", "");
            for _ in &cols {
                let _ = write!(out, "{:^w$}    ", arrow);
            }
            out.push('\n');
        }
    }
    Some(out.lines().map(str::trim_end).collect::<Vec<_>>().join("\n"))
}

/// Writes arrangements, diagrams, expectations and morphisms under `dir`.
pub fn write_catalog(dir: &Path) -> Result<usize> {
    let c = catalog()?;
    let mut count = 0;
    let mut put = |sub: &str, name: &str, body: String| -> Result<()> {
        let d = dir.join(sub);
        fs::create_dir_all(&d)?;
        fs::write(d.join(format!("{name}.json")), body + "\n")?;
        count += 1;
        Ok(())
    };
    for a in &c.arrangements {
        put("arrangements", a.name, a.strata.arrangement().to_json())?;
    }
    for e in &c.entries {
        let s = c.strata_of(e);
        let mut file = e.diagram.to_file(s);
        file.name = Some(e.name.to_string());
        put("diagrams", e.name, serde_json::to_string_pretty(&file)?)?;
        let expect = json!({ "arrangement": c.arrangement_name(e), "diagram": e.name, "expect": e.expect });
        put("expectations", e.name, serde_json::to_string_pretty(&expect)?)?;
    }
    for (name, arrangement, d) in negative_examples()? {
        let s = &c.arrangements[arrangement].strata;
        let mut file = d.to_file(s);
        file.name = Some(name.to_string());
        put("negative", name, serde_json::to_string_pretty(&file)?)?;
    }
    for m in &c.morphisms {
        let (src, tgt) = (&c.entries[m.source], &c.entries[m.target]);
        let s = c.strata_of(src);
        let mut comps = serde_json::Map::new();
        for a in s.imag().ids() {
            for b in s.real().ids() {
                let f = m.morphism.component(a, b);
                if f.rows() > 0 && f.cols() > 0 {
                    comps.insert(format!("{}|{}", s.imag().label(a), s.real().label(b)), json!(f.to_strings()));
                }
            }
        }
        let body = json!({ "source": src.name, "target": tgt.name, "components": comps });
        put("morphisms", m.name, serde_json::to_string_pretty(&body)?)?;
    }
    Ok(count)
}
