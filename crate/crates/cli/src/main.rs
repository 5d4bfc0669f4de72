//! `transversal`: command-line front end.
//!
//! Exit codes: 0 success/affirmative, 1 negative decision, 2 precondition or parse
//! failure, 3 theorem violation or internal inconsistency (a bug), 4 generator
//! exhaustion.

mod report;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use transversal_core::certificate::{full_certificate, CertificateOutcome};
use transversal_core::exactla::format_rational;
use transversal_core::format::{parse_instance, write_instance, Meta, WitnessRecord};
use transversal_core::transversal::{
    check_colorful, k_transversal, partition_separators, verify_theorem, Instance,
    TransversalWitness,
};
use transversal_core::witness::{
    gen_colorful_random, gen_counterexample, gen_planted, Representation,
};
use transversal_core::Error;

use report::{to_json, CertificateDoc, ColorfulDoc, SeparationRecord, TheoremDoc, TransversalDoc};

#[derive(Parser, Debug)]
#[command(
    name = "transversal",
    version,
    about = "Exact k-transversal decisions for colorful convex families"
)]
struct Cli {
    /// Worker threads for independent LPs. Output does not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that every choice of one set per family has a common point.
    CheckColorful {
        path: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether one family of k+2 polytopes has a k-transversal.
    Transversal {
        path: PathBuf,
        /// 1-based family index.
        #[arg(long)]
        family: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the family that admits its transversal on an instance in dimension n+m-1.
    VerifyTheorem {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated instance file.
    Generate {
        kind: Kind,
        /// Transversal targets k_1,...,k_n.
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Repr::Truncated)]
        representation: Repr,
        /// Ambient dimension (planted instances only; defaults to n+m-1).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the separating-normal certificate or confirm a transversal.
    Certificate {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Counterexample,
    Planted,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Repr {
    Flats,
    Truncated,
}

impl From<Repr> for Representation {
    fn from(r: Repr) -> Self {
        match r {
            Repr::Flats => Representation::Flats,
            Repr::Truncated => Representation::Truncated,
        }
    }
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_BUG: u8 = 3;
const EXIT_EXHAUSTED: u8 = 4;

/// A failed run: exit code plus message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RetryExhausted { .. } => EXIT_EXHAUSTED,
            Error::TheoremViolation
            | Error::Internal(_)
            | Error::CertificateInconsistency(_)
            | Error::WitnessInvalid(_) => EXIT_BUG,
            _ => EXIT_PRECONDITION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Stdout text plus exit code for a completed decision.
struct Outcome {
    code: u8,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_PRECONDITION);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<(Instance, Option<Meta>), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PRECONDITION, format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| fail(EXIT_PRECONDITION, format!("{}: {e}", path.display())))
}

/// Writes via a temporary file in the target directory and renames it into place.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| fail(EXIT_PRECONDITION, format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn write_report(out: Option<&Path>, json: String) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, &json),
        None => Ok(()),
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::CheckColorful { path, out } => cmd_check_colorful(&path, out.as_deref()),
        Command::Transversal { path, family, out } => {
            cmd_transversal(&path, family, out.as_deref())
        }
        Command::VerifyTheorem { path, out } => cmd_verify_theorem(&path, out.as_deref()),
        Command::Generate {
            kind,
            ks,
            seed,
            representation,
            dim,
            out,
        } => cmd_generate(kind, &ks, seed, representation.into(), dim, &out),
        Command::Certificate { path, out } => cmd_certificate(&path, out.as_deref()),
    }
}

fn tuple_text(t: &[usize]) -> String {
    transversal_core::error::display_tuple(t)
}

fn cmd_check_colorful(path: &Path, out: Option<&Path>) -> Result<Outcome, Failure> {
    let (inst, _) = load(path)?;
    let report = check_colorful(&inst)?;
    write_report(out, to_json(&ColorfulDoc::new(&report)))?;
    let mut text = String::new();
    for (t, p) in &report.witnesses {
        let _ = writeln!(text, "tuple {} point {p}", tuple_text(t));
    }
    match &report.failing_tuple {
        None => {
            let _ = writeln!(text, "colorful PASS {} tuples", report.witnesses.len());
            Ok(Outcome { code: 0, text })
        }
        Some(t) => {
            let _ = writeln!(
                text,
                "colorful FAIL tuple {} has empty intersection",
                tuple_text(t)
            );
            Ok(Outcome {
                code: EXIT_NEGATIVE,
                text,
            })
        }
    }
}

fn witness_text(w: &TransversalWitness) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "partition {}", w.partition);
    let _ = writeln!(text, "crossing-point {}", w.crossing_point);
    for (i, a) in w.anchors.iter().enumerate() {
        let _ = writeln!(text, "anchor[{}] {a}", i + 1);
    }
    let _ = writeln!(text, "flat-dimension {}", w.flat.dim());
    let _ = writeln!(text, "flat-base {}", w.flat.base());
    for d in w.flat.directions() {
        let _ = writeln!(text, "flat-direction {d}");
    }
    text
}

fn family_at(inst: &Instance, family: usize) -> Result<usize, Failure> {
    if family == 0 || family > inst.n() {
        return Err(fail(
            EXIT_PRECONDITION,
            format!("--family must be in 1..={}", inst.n()),
        ));
    }
    Ok(family - 1)
}

fn cmd_transversal(path: &Path, family: usize, out: Option<&Path>) -> Result<Outcome, Failure> {
    let (inst, _) = load(path)?;
    let idx = family_at(&inst, family)?;
    let fam = &inst.families[idx];
    if !fam.is_polytopal() {
        return Err(fail(
            EXIT_PRECONDITION,
            "family contains flats; regenerate with --representation truncated",
        ));
    }
    let mut doc = TransversalDoc {
        command: "transversal".into(),
        family,
        k: fam.k,
        present: false,
        witness: None,
        separations: Vec::new(),
    };
    let mut text = String::new();
    let code = match k_transversal(fam)? {
        Some(w) => {
            doc.present = true;
            doc.witness = Some(WitnessRecord::from_witness(&w));
            let _ = writeln!(text, "transversal PRESENT family {family} k={}", fam.k);
            text += &witness_text(&w);
            0
        }
        None => {
            let _ = writeln!(text, "transversal ABSENT family {family} k={}", fam.k);
            for (p, h) in partition_separators(fam)? {
                let h = h.ok_or_else(|| {
                    fail(
                        EXIT_BUG,
                        format!("partition {p} unseparated yet no witness"),
                    )
                })?;
                let _ = writeln!(
                    text,
                    "separated {p} normal {} offset {}",
                    h.normal,
                    format_rational(&h.offset)
                );
                doc.separations.push(SeparationRecord::new(&p, &h));
            }
            EXIT_NEGATIVE
        }
    };
    write_report(out, to_json(&doc))?;
    Ok(Outcome { code, text })
}

fn cmd_verify_theorem(path: &Path, out: Option<&Path>) -> Result<Outcome, Failure> {
    let (inst, _) = load(path)?;
    if inst.dim == inst.n() + inst.m() {
        return Err(fail(
            EXIT_PRECONDITION,
            format!(
                "dimension {} = n + m is counterexample mode; the theorem needs n + m - 1 = {}. Use `certificate` instead",
                inst.dim,
                inst.n() + inst.m() - 1
            ),
        ));
    }
    match verify_theorem(&inst) {
        Ok(r) => {
            let fam = &inst.families[r.family_index];
            let doc = TheoremDoc {
                command: "verify-theorem".into(),
                family: r.family_index + 1,
                k: fam.k,
                witness: WitnessRecord::from_witness(&r.witness),
            };
            write_report(out, to_json(&doc))?;
            let mut text = format!(
                "theorem PASS family {} admits a {}-transversal\n",
                r.family_index + 1,
                fam.k
            );
            text += &witness_text(&r.witness);
            Ok(Outcome { code: 0, text })
        }
        Err(Error::TheoremViolation) => {
            eprint!("{}", write_instance(&inst, None));
            Err(fail(
                EXIT_BUG,
                "no family admits its transversal on a valid instance; instance dumped above",
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_generate(
    kind: Kind,
    ks: &[usize],
    seed: u64,
    representation: Representation,
    dim: Option<usize>,
    out: &Path,
) -> Result<Outcome, Failure> {
    let n = ks.len();
    let m: usize = ks.iter().sum();
    let mut meta = Meta {
        seed: Some(seed),
        ks: Some(ks.to_vec()),
        ..Meta::default()
    };
    let mut sidecar = None;
    let inst = match kind {
        Kind::Counterexample => {
            let ce = gen_counterexample(ks, seed, representation)?;
            meta.generator = Some("counterexample".into());
            meta.mode = Some("counterexample".into());
            meta.representation = Some(representation.to_string());
            sidecar = Some(ce.certificate.ledger());
            ce.instance
        }
        Kind::Planted => {
            let d = dim.unwrap_or((n + m).saturating_sub(1).max(1));
            meta.generator = Some("planted".into());
            meta.mode = Some(if d + 1 == n + m { "theorem" } else { "planted" }.into());
            gen_planted(d, ks, seed)?
        }
        Kind::Random => {
            meta.generator = Some("random".into());
            meta.mode = Some("theorem".into());
            gen_colorful_random(ks, seed)?
        }
    };
    write_atomic(out, &write_instance(&inst, Some(meta)))?;
    let mut text = format!(
        "wrote {} (dimension {}, {} families)\n",
        out.display(),
        inst.dim,
        inst.n()
    );
    if let Some(ledger) = sidecar {
        let mut side = out.as_os_str().to_owned();
        side.push(".cert.txt");
        let side = PathBuf::from(side);
        write_atomic(&side, &ledger)?;
        let _ = writeln!(text, "wrote {}", side.display());
    }
    Ok(Outcome { code: 0, text })
}

fn cmd_certificate(path: &Path, out: Option<&Path>) -> Result<Outcome, Failure> {
    let (inst, _) = load(path)?;
    let outcome = full_certificate(&inst)?;
    write_report(out, to_json(&CertificateDoc::new(&outcome)))?;
    let text = match &outcome {
        CertificateOutcome::TheoremConfirmed {
            family_index,
            pair,
            witness,
        } => {
            let mut t = format!(
                "{} family {} pair {pair} is inseparable\n",
                report::THEOREM_CONFIRMED,
                family_index + 1
            );
            t += &witness_text(witness);
            t
        }
        CertificateOutcome::CertificateComplete(r) => {
            format!("{}\n{}", report::CERTIFICATE_COMPLETE, r.ledger())
        }
    };
    Ok(Outcome { code: 0, text })
}
