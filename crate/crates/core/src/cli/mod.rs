//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage,
//! parse or schema errors.

pub mod emit;
pub mod input;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactla::{Field, PrimeField, Rationals};
use crate::rep::{hom_matrices, is_morphism, Rep};
use crate::unfam::{
    ar_quiver, compute_almost_split, decompose_with, mesh_discrepancies, reference_mesh_arrows,
    reference_sequence_report, AlmostSplitReport, UnFamily,
};
use emit::{emit_dot, emit_json, Naming, QuiverView};
use input::{parse_input, FieldSpec, InputDocument, InputError};

#[derive(Parser, Debug)]
#[command(name = "posinv", version, about = "Representations of posets with an involution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Against {
    /// The tabulated sequence list with its printed maps.
    Theorem,
    /// The drawn mesh of arrows.
    Figure,
    /// The sequences found by search.
    Computed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the order condition of the representation in FILE.
    Validate { file: PathBuf },
    /// Split the representation in FILE into indecomposable summands.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// gf:P or q; overrides the field of the document.
        #[arg(long)]
        field: Option<String>,
    },
    /// Basis of the morphisms between two representations.
    Hom {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// The quiver of almost split sequences of the chain family.
    Arquiver {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Draw the infinite-chain quiver truncated at this level.
        #[arg(long)]
        infty_level: Option<usize>,
        #[arg(long, default_value = "gf:101")]
        field: String,
    },
    /// Clause-by-clause verification of almost split sequences.
    VerifyArs {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Against::Computed)]
        against: Against,
        #[arg(long, default_value = "gf:101")]
        field: String,
    },
    /// The indecomposables of the chain family written out.
    Indecomposables {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gf:101")]
        field: String,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Gf { p } => {
                let $f = PrimeField::new(p).map_err(|e| Failure::Usage(format!("field: {e}")))?;
                $body
            }
            FieldSpec::Rational => {
                let $f = Rationals;
                $body
            }
        }
    };
}

/// Runs one command line, writing normal output to `out` and diagnostics to
/// `err`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{shown}");
                0
            } else {
                let _ = write!(err, "{shown}");
                2
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Verification(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Validate { file } => {
            let doc = read_doc(&file)?;
            with_field!(doc.field.clone(), |f| validate(&doc, f, out))
        }
        Command::Decompose { file, seed, field } => {
            let doc = read_doc(&file)?;
            let spec = match field {
                Some(s) => FieldSpec::parse_flag(&s).map_err(Failure::Usage)?,
                None => doc.field.clone(),
            };
            with_field!(spec, |f| decompose_cmd(&doc, f, seed, out))
        }
        Command::Hom { source, target } => {
            let (a, b) = (read_doc(&source)?, read_doc(&target)?);
            if a.field != b.field {
                return Err(Failure::Usage("source and target are over different fields".into()));
            }
            with_field!(a.field.clone(), |f| hom_cmd(&a, &b, f, out))
        }
        Command::Arquiver { n, format, infty_level, field } => {
            let spec = FieldSpec::parse_flag(&field).map_err(Failure::Usage)?;
            with_field!(spec, |f| arquiver_cmd(n, format, infty_level, f, out))
        }
        Command::VerifyArs { n, against, field } => {
            let spec = FieldSpec::parse_flag(&field).map_err(Failure::Usage)?;
            with_field!(spec, |f| verify_cmd(n, against, f, out))
        }
        Command::Indecomposables { n, field } => {
            let spec = FieldSpec::parse_flag(&field).map_err(Failure::Usage)?;
            with_field!(spec, |f| indecomposables_cmd(n, f, out))
        }
    }
}

fn read_doc(path: &Path) -> Result<InputDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_input(&text)?)
}

fn need_rep<F: Field>(doc: &InputDocument, f: F) -> Result<input::Loaded<F>, Failure> {
    let l = doc.load(f)?;
    if l.rep.is_none() {
        return Err(Failure::Usage("document has no representation".into()));
    }
    Ok(l)
}

fn io(e: std::io::Error) -> Failure {
    Failure::Usage(format!("write failed: {e}"))
}

fn chain_n(n: usize) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    Ok(n)
}

fn family<F: Field>(n: usize, f: F) -> Result<UnFamily<F>, Failure> {
    UnFamily::new(chain_n(n)?, f).map_err(|e| Failure::Verification(e.to_string()))
}

fn validate<F: Field>(doc: &InputDocument, f: F, out: &mut dyn Write) -> Outcome {
    let l = need_rep(doc, f)?;
    let v = l.rep.unwrap();
    let mut ok = report_violations("representation", &v, out)?;
    if let Some((t, m)) = &l.morphism {
        ok &= report_violations("morphism target", t, out)?;
        let check = is_morphism(&v, t, m).map_err(|e| Failure::Usage(e.to_string()))?;
        if check.holds() {
            writeln!(out, "morphism: valid").map_err(io)?;
        } else {
            ok = false;
            writeln!(out, "morphism: image leaves the target at classes {:?}", check.failing_classes).map_err(io)?;
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn report_violations<F: Field>(what: &str, v: &Rep<F>, out: &mut dyn Write) -> Result<bool, Failure> {
    let bad = v.violations();
    if bad.is_empty() {
        writeln!(out, "{what}: valid").map_err(io)?;
        return Ok(true);
    }
    writeln!(out, "{what}: invalid").map_err(io)?;
    for (x, y) in bad {
        let p = v.poset();
        writeln!(out, "  violation: {} < {} but V+_{} is not inside V-_{}", p.label(x), p.label(y), p.label(x), p.label(y))
            .map_err(io)?;
    }
    Ok(false)
}

fn decompose_cmd<F: Field>(doc: &InputDocument, f: F, seed: u64, out: &mut dyn Write) -> Outcome {
    let l = need_rep(doc, f.clone())?;
    let v = l.rep.unwrap();
    if !v.is_valid() {
        return Err(Failure::Usage("representation violates the order condition; run validate".into()));
    }
    let fam = UnFamily::over(v.poset().clone(), f.clone()).ok();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = decompose_with(&v, fam.as_ref(), &mut rng);
    writeln!(out, "field: {}", f.describe()).map_err(io)?;
    writeln!(out, "dim V0: {}", v.d0()).map_err(io)?;
    writeln!(out, "class dims: {:?}", v.class_dims()).map_err(io)?;
    writeln!(out, "summands:").map_err(io)?;
    match d.labels() {
        Some(ls) => {
            for (l, k) in ls {
                writeln!(out, "  {l} x{k}").map_err(io)?;
            }
        }
        None => {
            for (s, k) in d.multiset() {
                writeln!(out, "  {s} x{k}").map_err(io)?;
            }
        }
    }
    let status = if d.certified { "verified in both directions" } else { "NOT verified" };
    writeln!(out, "certificate: block isomorphism of size {} {status}", v.d0()).map_err(io)?;
    if let Some(fam) = fam {
        match fam.multiplicities(&v) {
            Ok(m) => {
                let agrees = d.labels().as_ref() == Some(&m);
                let shown: Vec<String> = m.iter().map(|(l, k)| format!("{l} x{k}")).collect();
                writeln!(out, "hom-dimension count: {} ({})", shown.join(", "), if agrees { "agrees" } else { "DISAGREES" })
                    .map_err(io)?;
            }
            Err(e) => writeln!(out, "hom-dimension count: {e}").map_err(io)?,
        }
    }
    Ok(0)
}

fn hom_cmd<F: Field>(a: &InputDocument, b: &InputDocument, f: F, out: &mut dyn Write) -> Outcome {
    let v = need_rep(a, f.clone())?.rep.unwrap();
    let w = need_rep(b, f)?.rep.unwrap();
    let basis = hom_matrices(&v, &w).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "dim Hom = {}", basis.len()).map_err(io)?;
    for (i, m) in basis.iter().enumerate() {
        writeln!(out, "basis[{i}]:").map_err(io)?;
        write!(out, "{m}").map_err(io)?;
    }
    Ok(0)
}

fn arquiver_cmd<F: Field>(n: usize, format: Format, infty: Option<usize>, f: F, out: &mut dyn Write) -> Outcome {
    let (level, naming, drop) = match infty {
        Some(m) => (chain_n(m)?, Naming::Extended, true),
        None => (chain_n(n)?, Naming::Finite, false),
    };
    let fam = family(level, f)?;
    let q = ar_quiver(&fam).map_err(|e| Failure::Verification(e.to_string()))?;
    let view = QuiverView { quiver: &q, naming, drop_trivial_left: drop };
    let text = match format {
        Format::Dot => emit_dot(&view),
        Format::Json => emit_json(&view),
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(0)
}

fn write_report(out: &mut dyn Write, r: &AlmostSplitReport) -> Result<(), Failure> {
    for (name, c) in r.clauses() {
        writeln!(out, "    {name}: {c}").map_err(io)?;
    }
    Ok(())
}

fn verify_cmd<F: Field>(n: usize, against: Against, f: F, out: &mut dyn Write) -> Outcome {
    let fam = family(n, f)?;
    let computed = compute_almost_split(&fam).map_err(|e| Failure::Verification(e.to_string()))?;
    match against {
        Against::Computed => {
            for s in &computed {
                writeln!(out, "{} -> {} -> {}", s.x, s.y, s.z).map_err(io)?;
                writeln!(out, "  u = {:?}", input::matrix_value(s.seq.u.matrix())).map_err(io)?;
                writeln!(out, "  v = {:?}", input::matrix_value(s.seq.v.matrix())).map_err(io)?;
                write_report(out, &s.report)?;
            }
            let ok = computed.iter().all(|s| s.report.passed());
            writeln!(out, "{} sequences, {}", computed.len(), if ok { "all verified" } else { "FAILURES" }).map_err(io)?;
            Ok(if ok { 0 } else { 1 })
        }
        Against::Theorem => {
            let rep = reference_sequence_report(&fam, &computed).map_err(|e| Failure::Verification(e.to_string()))?;
            for (r, report) in &rep.reports {
                writeln!(out, "listed {} -> {} -> {} with u = (0,1)^t, v = (1,0)", r.x, r.y, r.z).map_err(io)?;
                write_report(out, report)?;
            }
            writeln!(out, "label discrepancies: {}", rep.label_discrepancies.len()).map_err(io)?;
            for d in &rep.label_discrepancies {
                writeln!(out, "  {d}").map_err(io)?;
            }
            writeln!(out, "map discrepancies: {}", rep.map_discrepancies.len()).map_err(io)?;
            for d in &rep.map_discrepancies {
                writeln!(out, "  {d}").map_err(io)?;
            }
            Ok(if rep.all_verified() && rep.label_discrepancies.is_empty() { 0 } else { 1 })
        }
        Against::Figure => {
            let q = ar_quiver(&fam).map_err(|e| Failure::Verification(e.to_string()))?;
            let drawn = reference_mesh_arrows(n);
            writeln!(out, "drawn arrows: {}", drawn.len()).map_err(io)?;
            writeln!(out, "computed arrows: {}", q.arrows.len()).map_err(io)?;
            let diffs = mesh_discrepancies(&q);
            for d in &diffs {
                writeln!(out, "  {d}").map_err(io)?;
            }
            let bij = q.tau_is_bijection();
            writeln!(out, "translation is a bijection from non-projectives to non-injectives: {bij}").map_err(io)?;
            writeln!(out, "mesh {}", if diffs.is_empty() { "matches" } else { "DIFFERS" }).map_err(io)?;
            Ok(if diffs.is_empty() && bij { 0 } else { 1 })
        }
    }
}

fn indecomposables_cmd<F: Field>(n: usize, f: F, out: &mut dyn Write) -> Outcome {
    let fam = family(n, f)?;
    for (l, r) in fam.members() {
        writeln!(out, "== {l} ==").map_err(io)?;
        write!(out, "{r}").map_err(io)?;
    }
    Ok(0)
}
