//! Batch harness behind the `hecke2` binary: `verify <campaign>` and
//! `emit <table>`.

pub mod campaign;
pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use campaign::{Campaign, Target};
pub use report::{Format, ReportRow, Sink, Status, Summary};

use crate::adapted::{adapted_with_growth, extract_u};
use crate::error::Error;
use crate::modforms::{gen_theta, is_hecke_prime, ThetaKind};
use crate::recurrence::{KernelBasis, SequenceTable};

#[derive(Debug, Parser)]
#[command(name = "hecke2", version, about = "Verification harness for the kernel of U_5 + I on mod-2 forms of level 5")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "HECKE2_THREADS")]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification campaign.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Emit a computed table.
    Emit {
        #[arg(value_enum)]
        what: EmitTarget,
        #[command(flatten)]
        range: RangeArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitTarget {
    Sequences,
    KernelBasis,
    AdaptedBasis,
    Theta,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RangeArgs {
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub max_m: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Comma-separated odd primes other than 5.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Input precision floor for series campaigns.
    #[arg(long)]
    pub precision: Option<usize>,
}

impl RangeArgs {
    pub fn campaign(&self, target: Target) -> Result<Campaign, Error> {
        let mut c = Campaign::new(target);
        if let Some(n) = self.max_n {
            c.max_n = n;
        }
        if self.max_m.is_some() {
            c.max_m = self.max_m;
        }
        if let Some(d) = self.depth {
            c.depth = d;
        }
        if let Some(p) = &self.primes {
            if let Some(bad) = p.iter().find(|&&p| !is_hecke_prime(p)) {
                return Err(Error::Config(format!("--primes: {bad} is not an odd prime other than 5")));
            }
            c.primes = p.clone();
        }
        c.precision = self.precision;
        Ok(c)
    }
}

/// Exit status: 0 when every row passed, 1 on a fail row, 2 on bad
/// configuration or I/O failure.
pub fn main_with(cli: Cli) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("hecke2: {e}");
            return 2;
        }
    };
    let mut out: Box<dyn Write + Send> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("hecke2: {}: {e}", path.display());
                return 2;
            }
        },
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let result = pool.install(|| match &cli.command {
        Command::Verify { target, range } => range
            .campaign(*target)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))
            .and_then(|c| verify(&c, cli.format, &mut out)),
        Command::Emit { what, range } => emit(*what, range, cli.format, &mut out).map(|_| Summary::default()),
    });
    match result {
        Ok(s) if s.fail == 0 => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("hecke2: {e}");
            2
        }
    }
}

pub fn verify(c: &Campaign, format: Format, out: &mut dyn Write) -> io::Result<Summary> {
    let mut sink = Sink::new(out, format, c.target.id());
    campaign::run(c, &mut sink)?;
    sink.finish()
}

fn write_record(out: &mut dyn Write, format: Format, rec: serde_json::Value, text: String) -> io::Result<()> {
    match format {
        Format::Jsonl => {
            serde_json::to_writer(&mut *out, &rec)?;
            writeln!(out)
        }
        Format::Text => writeln!(out, "{text}"),
    }
}

pub fn emit(what: EmitTarget, range: &RangeArgs, format: Format, out: &mut dyn Write) -> io::Result<()> {
    let invalid = |e: Error| io::Error::new(io::ErrorKind::InvalidData, e);
    match what {
        EmitTarget::Sequences => {
            let n_max = range.max_n.unwrap_or(30);
            let t = SequenceTable::generate(n_max);
            for n in 0..=n_max {
                let rec = json!({ "n": n, "C": t.c(n).exponents(), "A": t.a(n).exponents() });
                write_record(out, format, rec, format!("C_{n} = {}    A_{n} = {}", t.c(n), t.a(n)))?;
            }
        }
        EmitTarget::KernelBasis => {
            let n_max = range.max_n.unwrap_or(60);
            let t = SequenceTable::generate(n_max);
            let reduced = KernelBasis::compute(&t, n_max).map_err(invalid)?;
            let normalized = reduced.normalize_lemma34().map_err(invalid)?;
            for (n, g) in reduced.iter() {
                let h = normalized.get(n).expect("same degrees");
                let rec = json!({ "n": n, "reduced": g.exponents(), "normalized": h.exponents() });
                write_record(out, format, rec, format!("g_{n} = {g}    normalized: {h}"))?;
            }
        }
        EmitTarget::AdaptedBasis => {
            let c = range.campaign(Target::HeckeU).map_err(invalid)?;
            let (setup, ab) = adapted_with_growth(c.depth, &c.primes, 16, 4096, c.precision).map_err(invalid)?;
            for ((i, j), x) in &ab.cells {
                let coords: Vec<usize> = x.iter_exponents().map(|k| setup.basis.entries()[k].n).collect();
                let rec = json!({ "cell": [i, j], "coords": coords });
                write_record(out, format, rec, format!("m_{{{i},{j}}} = sum of f_n for n in {coords:?}"))?;
            }
            for (&p, m) in &setup.matrices {
                let u = extract_u(p, &ab, m).map_err(invalid)?;
                let terms: Vec<[usize; 2]> = u.terms.iter().map(|&(a, b)| [a, b]).collect();
                let rec = json!({ "p": p, "u": terms });
                let text = u
                    .terms
                    .iter()
                    .map(|&(a, b)| format!("X^{a} Y^{b}"))
                    .collect::<Vec<_>>()
                    .join(" + ");
                write_record(out, format, rec, format!("u_{p} = {text} + O(deg {})", c.depth + 1))?;
            }
        }
        EmitTarget::Theta => {
            let p = range.precision.unwrap_or(100);
            for (name, kind) in [("R", ThetaKind::R), ("F", ThetaKind::F), ("G", ThetaKind::G), ("D", ThetaKind::D)] {
                let s = gen_theta(kind, p);
                let rec = json!({ "kind": name, "series": s.to_record() });
                write_record(out, format, rec, format!("{name} = {} + O(x^{p})", s.bits().format_exponents()))?;
            }
        }
    }
    out.flush()
}
