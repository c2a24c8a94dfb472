//! Command-line front end: pasting operations, sketches, monad checks,
//! coherator and globular generation, verification suites and export.
//!
//! Exit status: 0 when the command succeeded and every check passed, 1 when
//! a check failed, 2 on bad input.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cubipaste::coherator::{self, Bounds};
use cubipaste::export::{self, Format};
use cubipaste::globular::{self, GlobularTree};
use cubipaste::io;
use cubipaste::lifting::Induction;
use cubipaste::pastings::{Divisor, Terminal};
use cubipaste::runner::{self, RunReport};
use cubipaste::sketches;
use cubipaste::words::Letter;

#[derive(Parser)]
#[command(name = "cubipaste", version, about = "Cubical pasting diagrams, free monads and coherators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Operations on divisor files.
    Paste {
        #[command(subcommand)]
        op: PasteOp,
    },
    /// Sketch of a divisor.
    Sketch {
        #[command(subcommand)]
        op: SketchOp,
    },
    /// Monad law and cartesianity checks.
    Monad {
        #[command(subcommand)]
        op: MonadOp,
    },
    /// Bounded levels of a cubical coherator.
    Coherator {
        #[command(subcommand)]
        op: CoheratorOp,
    },
    /// Globular sums and globular coherators.
    Globular {
        #[command(subcommand)]
        op: GlobularOp,
    },
    /// Runs verification suites, or checks the identities of a cubical-set file.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all", conflicts_with = "set")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound overrides as key=value, repeatable.
        #[arg(long = "bound", value_parser = parse_bound)]
        bounds: Vec<(String, usize)>,
        /// Record wall time in the report.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Cubical-set file whose identities are checked instead of a suite.
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Renders a divisor grid as dot or TikZ.
    Export {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PasteOp {
    /// Composite of two divisors in a direction.
    Compose {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        dir: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Source face in a direction.
    Sigma {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        dir: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Target face in a direction.
    Tau {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        dir: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degeneracy or connection, e.g. `--letter e2` or `--letter g+1`.
    Degen {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        letter: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SketchOp {
    /// Cocone graph as dot or TikZ.
    Export {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cubical set obtained by gluing the terms.
    Realize {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "R")]
    R,
    #[value(name = "S")]
    S,
    #[value(name = "S-noconn")]
    SNoconn,
}

#[derive(Subcommand)]
enum MonadOp {
    Check {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        max_dim: Option<usize>,
        /// Term bound, for S.
        #[arg(long)]
        size: Option<usize>,
        /// Dimension the extension is computed to, for R.
        #[arg(long)]
        up_to: Option<usize>,
        #[arg(long)]
        max_cells: Option<usize>,
        /// Only `small` is available: every cubical set within the cell bound.
        #[arg(long, default_value = "small")]
        family: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theory {
    #[value(name = "W")]
    W,
    #[value(name = "W0")]
    W0,
}

#[derive(Subcommand)]
enum CoheratorOp {
    Generate {
        #[arg(long, value_enum)]
        theory: Theory,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        max_dim: usize,
        #[arg(long)]
        max_term_size: usize,
        /// chain3, chain2, edge, point, square, or a cubical-set file.
        #[arg(long)]
        shape: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InductionArg {
    Literal,
    Cumulative,
}

#[derive(Subcommand)]
enum GlobularOp {
    /// Globular set of a tree.
    Sum {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded levels of the globular coherator over a tree.
    Generate {
        #[command(flatten)]
        tree: TreeArg,
        /// Reversors exist from dimension max(m, 1) up.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        max_dim: usize,
        #[arg(long)]
        max_term_size: usize,
        #[arg(long, value_enum, default_value = "literal")]
        induction: InductionArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct TreeArg {
    /// Tree file with `top` and `bottom` rows.
    #[arg(long, conflicts_with_all = ["top", "bottom"])]
    tree: Option<PathBuf>,
    /// Top row, comma separated.
    #[arg(long, value_delimiter = ',')]
    top: Vec<usize>,
    /// Bottom row, comma separated.
    #[arg(long, value_delimiter = ',')]
    bottom: Vec<usize>,
}

impl TreeArg {
    fn load(&self) -> Result<GlobularTree> {
        match &self.tree {
            Some(p) => Ok(io::parse_tree(&read(p)?).with_context(|| p.display().to_string())?),
            None if self.top.is_empty() => bail!("give --tree or --top"),
            None => Ok(GlobularTree::new(self.top.clone(), self.bottom.clone())?),
        }
    }
}

fn parse_bound(s: &str) -> Result<(String, usize), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v = v.trim().parse().map_err(|_| format!("bound `{k}` needs a number, got `{v}`"))?;
    Ok((k.trim().to_string(), v))
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            let res = stdout
                .write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") });
            match res {
                // a closed pipe (e.g. `| head`) ends the output quietly
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("cannot write to stdout"),
            }
        }
    }
}

fn load_divisor(p: &Path) -> Result<Divisor> {
    io::parse_divisor(&read(p)?).with_context(|| p.display().to_string())
}

/// Prints one summary line per report to stderr and the JSON to `report`
/// or stdout; returns whether everything passed.
fn finish(reports: &[RunReport], report: &Option<PathBuf>) -> Result<bool> {
    for r in reports {
        let failed: usize = r.checks.iter().map(|c| c.failures).sum();
        let total: usize = r.checks.iter().map(|c| c.instances).sum();
        eprintln!("{}: {} ({} checks, {} failed)", r.suite, if r.passed { "pass" } else { "FAIL" }, total, failed);
    }
    let json = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(reports).expect("serializable")
    };
    emit(report, &json)?;
    Ok(reports.iter().all(|r| r.passed))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Paste { op } => {
            let (x, out) = match op {
                PasteOp::Compose { left, right, dir, out } => {
                    let (a, b) = (load_divisor(&left)?, load_divisor(&right)?);
                    (a.compose(&Terminal, &b, dir)?, out)
                }
                PasteOp::Sigma { divisor, dir, out } => (load_divisor(&divisor)?.pasting_source(&Terminal, dir)?, out),
                PasteOp::Tau { divisor, dir, out } => (load_divisor(&divisor)?.pasting_target(&Terminal, dir)?, out),
                PasteOp::Degen { divisor, letter, out } => {
                    let l: Letter = letter.parse()?;
                    (load_divisor(&divisor)?.degenerate(&Terminal, l)?, out)
                }
            };
            emit(&out, &io::print_divisor(&x.normalized()))?;
            Ok(true)
        }
        Cmd::Sketch { op } => match op {
            SketchOp::Export { divisor, format, out } => {
                let x = load_divisor(&divisor)?;
                emit(&out, &export::sketch(&sketches::build_sketch(&x), format))?;
                Ok(true)
            }
            SketchOp::Realize { divisor, out } => {
                let r = sketches::realize(&load_divisor(&divisor)?).map_err(|e| anyhow!(e))?;
                emit(&out, &io::print_cubical_set(&r.set))?;
                Ok(true)
            }
        },
        Cmd::Monad { op: MonadOp::Check { which, max_dim, size, up_to, max_cells, family, report } } => {
            if family != "small" {
                bail!("unknown family `{family}`; only `small` is available");
            }
            let suite = match which {
                Which::R => "monad-R",
                Which::S => "monad-S",
                Which::SNoconn => "monad-S-noconn",
            };
            let mut ov = BTreeMap::new();
            for (k, v) in [("max_dim", max_dim), ("size", size), ("up_to", up_to), ("max_cells", max_cells)] {
                if let Some(v) = v {
                    ov.insert(k.to_string(), v);
                }
            }
            let r = runner::run_suite(suite, &ov, 0, false)?;
            finish(&[r], &report)
        }
        Cmd::Coherator { op: CoheratorOp::Generate { theory, levels, max_dim, max_term_size, shape, out } } => {
            let base = match coherator::shape(&shape) {
                Some(b) => b,
                None => io::parse_cubical_set(&read(Path::new(&shape))?)
                    .with_context(|| format!("`{shape}` is neither a built-in shape nor a readable cubical set"))?,
            };
            let bounds = Bounds { levels, max_dim, max_term_size };
            let (name, rev) = match theory {
                Theory::W => ("W", false),
                Theory::W0 => ("W0", true),
            };
            let g = coherator::generate(&base, rev, &bounds).map_err(|e| anyhow!(e))?;
            let v = g.verify();
            for msg in &v {
                eprintln!("violation: {msg}");
            }
            let dump = g.dump(&format!("{name} over {shape}"), &bounds);
            emit(&out, &serde_json::to_string_pretty(&dump)?)?;
            Ok(v.is_empty())
        }
        Cmd::Globular { op } => match op {
            GlobularOp::Sum { tree, out } => {
                let t = tree.load()?;
                let s = globular::globular_sum(&t)?;
                let value = serde_json::json!({ "tree": t, "counts": s.set.counts(), "set": s.set });
                emit(&out, &serde_json::to_string_pretty(&value)?)?;
                Ok(true)
            }
            GlobularOp::Generate { tree, m, levels, max_dim, max_term_size, induction, out } => {
                let t = tree.load()?;
                let bounds = Bounds { levels, max_dim, max_term_size };
                let ind = match induction {
                    InductionArg::Literal => Induction::Literal,
                    InductionArg::Cumulative => Induction::Cumulative,
                };
                let g = globular::generate(&t, m, &bounds, ind).map_err(|e| anyhow!(e))?;
                let v = g.verify();
                for msg in &v {
                    eprintln!("violation: {msg}");
                }
                emit(&out, &serde_json::to_string_pretty(&g.dump(&bounds))?)?;
                Ok(v.is_empty())
            }
        },
        Cmd::Verify { suite, seed, bounds, timing, report, set } => {
            if let Some(p) = set {
                let c = io::parse_cubical_set_unchecked(&read(&p)?).with_context(|| p.display().to_string())?;
                let v = c.check_identities();
                emit(&report, &serde_json::to_string_pretty(&serde_json::json!({ "violations": format!("{v:?}"), "count": v.len() }))?)?;
                return Ok(v.is_empty());
            }
            let ov: BTreeMap<String, usize> = bounds.into_iter().collect();
            let reports = if suite == "all" {
                if !ov.is_empty() {
                    bail!("bound overrides need a single --suite");
                }
                runner::run_all(seed, timing)?
            } else {
                vec![runner::run_suite(&suite, &ov, seed, timing)?]
            };
            finish(&reports, &report)
        }
        Cmd::Export { divisor, format, out } => {
            emit(&out, &export::divisor(&load_divisor(&divisor)?, format))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = runner::configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
