//! The `grl` command line.
//!
//! Exit codes: 0 success, proved, or nothing found; 1 rejected input or a
//! countermodel; 2 unknown; 3 usage or I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::cutelim::{eliminate_cuts, CutElimError};
use crate::fixtures::{self, Fixture};
use crate::kernel::{check_proof, KernelOptions, Proof};
use crate::parse::{parse_items, parse_proof, parse_sequent, Item, SourceText};
use crate::print::{formula_to_string, proof_to_string, sequent_to_string, Glyphs, ASCII, UNICODE};
use crate::proof::ProofNode;
use crate::search::{prove, SearchBudget, Verdict};
use crate::semantics::{self, countermodel_to_string, Enumeration};
use crate::translate::{translate, translate_sequent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "grl", version, about = "Sequent calculus toolkit for lambda abstracts and definite descriptions")]
struct Cli {
    /// Print with logical symbols instead of ASCII keywords.
    #[arg(long, global = true)]
    unicode: bool,
    /// Let the eigenparameter of iotar occur in the abstract's body.
    #[arg(long, global = true)]
    lax_iota_eigen: bool,
    /// Single worker; output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads for search and fixture checking.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate and pretty-print a .rlf or .rlp file.
    Parse { file: PathBuf },
    /// Check a proof script.
    Check { file: PathBuf },
    /// Search for a proof or a countermodel.
    Prove(ProveArgs),
    /// Transform a proof into a cut-free proof of the same sequent.
    EliminateCut {
        file: PathBuf,
        /// Log every reduction step to stderr.
        #[arg(long)]
        emit_trace: bool,
    },
    /// Search for a countermodel only.
    Countermodel {
        sequent: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Eliminate lambda abstracts and descriptions from a .rlf file.
    Translate { file: PathBuf },
    /// Rebuild and check the golden proofs.
    Fixtures {
        /// Also write each proof to DIR/<name>.rlp.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ProveArgs {
    sequent: String,
    #[arg(long, env = "RL_MAX_DEPTH", default_value_t = 20)]
    depth: usize,
    #[arg(long, env = "RL_MAX_MODEL", default_value_t = 3)]
    models: usize,
    /// Candidate terms per instantiation.
    #[arg(long, default_value_t = 4)]
    pool: usize,
    /// Reuses of a kept principal formula per branch.
    #[arg(long, default_value_t = 2)]
    contraction: usize,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    glyphs: &'static Glyphs,
    opts: KernelOptions,
}

/// A failure that ends the command with the given exit code.
struct Fail(i32, String);

type Outcome = Result<i32, Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

fn rejected(msg: impl Into<String>) -> Fail {
    Fail(EXIT_REJECTED, msg.into())
}

fn io_err(e: std::io::Error) -> Fail {
    usage(format!("write failed: {e}"))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    // Commands run on a large-stack thread and write to buffers.
    let glyphs = if cli.unicode { &UNICODE } else { &ASCII };
    let opts = KernelOptions {
        lax_iota_eigen: cli.lax_iota_eigen,
    };
    let jobs = if cli.deterministic { 1 } else { cli.jobs.max(1) };
    let (code, o, e) = crate::stack::deep(move || {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut io = Io {
            out: &mut o,
            err: &mut e,
            glyphs,
            opts,
        };
        let code = match dispatch(cli.command, jobs, &mut io) {
            Ok(code) => code,
            Err(Fail(code, msg)) => {
                let _ = writeln!(io.err, "grl: {msg}");
                code
            }
        };
        (code, o, e)
    });
    if out.write_all(&o).and_then(|_| out.flush()).is_err() || err.write_all(&e).is_err() {
        return EXIT_USAGE;
    }
    code
}

fn dispatch(cmd: Command, jobs: usize, io: &mut Io<'_>) -> Outcome {
    match cmd {
        Command::Parse { file } => cmd_parse(&file, io),
        Command::Check { file } => cmd_check(&file, io),
        Command::Prove(args) => cmd_prove(&args, jobs, io),
        Command::EliminateCut { file, emit_trace } => cmd_eliminate(&file, emit_trace, io),
        Command::Countermodel { sequent, max_size } => cmd_countermodel(&sequent, max_size, io),
        Command::Translate { file } => cmd_translate(&file, io),
        Command::Fixtures { out } => cmd_fixtures(out.as_deref(), jobs, io),
    }
}

fn read(path: &Path) -> Result<SourceText, Fail> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(SourceText::new(text, path.display().to_string()))
}

fn is_proof_file(path: &Path, src: &SourceText) -> bool {
    match path.extension().and_then(|e| e.to_str()) {
        Some("rlp") => true,
        Some("rlf") => false,
        _ => src.text.trim_start().starts_with('('),
    }
}

/// Checks `p` and prints it. Nothing reaches the output unchecked.
fn emit_proof(p: &ProofNode, io: &mut Io<'_>) -> Result<Proof, Fail> {
    let checked = check_proof(p, &io.opts).map_err(|r| Fail(EXIT_REJECTED, format!("internal: emitted proof rejected: {r}")))?;
    io.out
        .write_all(proof_to_string(checked.root(), io.glyphs).as_bytes())
        .map_err(io_err)?;
    Ok(checked)
}

fn cmd_parse(path: &Path, io: &mut Io<'_>) -> Outcome {
    let src = read(path)?;
    if is_proof_file(path, &src) {
        let p = parse_proof(src).map_err(|e| rejected(e.to_string()))?;
        write!(io.out, "{}", proof_to_string(&p, io.glyphs)).map_err(io_err)?;
        return Ok(EXIT_OK);
    }
    for item in parse_items(src).map_err(|e| rejected(e.to_string()))? {
        let line = match item {
            Item::Formula(f) => formula_to_string(&f, io.glyphs),
            Item::Sequent(s) => sequent_to_string(&s, io.glyphs),
        };
        writeln!(io.out, "{line}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_check(path: &Path, io: &mut Io<'_>) -> Outcome {
    let p = parse_proof(read(path)?).map_err(|e| rejected(e.to_string()))?;
    match check_proof(&p, &io.opts) {
        Ok(proof) => {
            writeln!(io.out, "OK height={}", proof.height()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Err(r) => {
            writeln!(io.out, "{r}").map_err(io_err)?;
            Ok(EXIT_REJECTED)
        }
    }
}

fn parse_goal(s: &str) -> Result<crate::syntax::Sequent, Fail> {
    parse_sequent(SourceText::new(s, "<argument>")).map_err(|e| usage(e.to_string()))
}

fn cmd_prove(args: &ProveArgs, jobs: usize, io: &mut Io<'_>) -> Outcome {
    let goal = parse_goal(&args.sequent)?;
    if args.depth == 0 || args.models == 0 || args.pool == 0 {
        return Err(usage("--depth, --models and --pool must be positive"));
    }
    let budget = SearchBudget {
        max_depth: args.depth,
        model_cap: args.models,
        term_pool_cap: args.pool,
        contraction_cap: args.contraction,
        jobs,
        ..SearchBudget::default()
    };
    match prove(&goal, &budget) {
        Verdict::Proved(p) => {
            emit_proof(p.root(), io)?;
            Ok(EXIT_OK)
        }
        Verdict::Refuted(m, v) => {
            write!(io.out, "{}", countermodel_to_string(&m, &v)).map_err(io_err)?;
            Ok(EXIT_REJECTED)
        }
        Verdict::Unknown(reason) => {
            writeln!(io.out, "unknown: {reason}").map_err(io_err)?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn cmd_eliminate(path: &Path, emit_trace: bool, io: &mut Io<'_>) -> Outcome {
    let p = parse_proof(read(path)?).map_err(|e| rejected(e.to_string()))?;
    let e = match eliminate_cuts(&p, &io.opts) {
        Ok(e) => e,
        Err(CutElimError::Rejected(r)) => {
            writeln!(io.out, "{r}").map_err(io_err)?;
            return Ok(EXIT_REJECTED);
        }
        Err(other) => return Err(rejected(other.to_string())),
    };
    if emit_trace {
        for (i, step) in e.trace.iter().enumerate() {
            writeln!(io.err, "step {}: {step}", i + 1).map_err(io_err)?;
        }
    }
    emit_proof(e.proof.root(), io)?;
    Ok(EXIT_OK)
}

fn cmd_countermodel(sequent: &str, max_size: usize, io: &mut Io<'_>) -> Outcome {
    let goal = parse_goal(sequent)?;
    if max_size == 0 {
        return Err(usage("--max-size must be positive"));
    }
    match semantics::search(&goal, &Enumeration::new(max_size)) {
        Ok(Some((m, v))) => {
            write!(io.out, "{}", countermodel_to_string(&m, &v)).map_err(io_err)?;
            Ok(EXIT_REJECTED)
        }
        Ok(None) => {
            writeln!(io.out, "no countermodel with at most {max_size} elements").map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(io.out, "unknown: {e}").map_err(io_err)?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn cmd_translate(path: &Path, io: &mut Io<'_>) -> Outcome {
    for item in parse_items(read(path)?).map_err(|e| rejected(e.to_string()))? {
        let line = match item {
            Item::Formula(f) => formula_to_string(&translate(&f), io.glyphs),
            Item::Sequent(s) => sequent_to_string(&translate_sequent(&s), io.glyphs),
        };
        writeln!(io.out, "{line}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

/// One line of the fixtures report.
fn fixture_line(fx: &Fixture, opts: &KernelOptions) -> (String, bool) {
    let checked = match check_proof(&fx.proof, opts) {
        Ok(p) => p,
        Err(r) => return (format!("{} {r}", fx.name), false),
    };
    let mut line = format!("{} OK height={}", fx.name, checked.height());
    if !checked.root().is_cut_free() {
        match eliminate_cuts(checked.root(), opts) {
            Ok(e) => line.push_str(&format!(
                " cut-free height={} steps={}",
                e.proof.height(),
                e.trace.len()
            )),
            Err(err) => return (format!("{line} eliminate-cut FAILED: {err}"), false),
        }
    }
    (line, true)
}

fn cmd_fixtures(dir: Option<&Path>, jobs: usize, io: &mut Io<'_>) -> Outcome {
    let all = fixtures::golden().map_err(|e| rejected(format!("building fixtures: {e}")))?;
    let opts = io.opts;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .stack_size(crate::stack::STACK_SIZE)
        .build()
        .map_err(|e| usage(e.to_string()))?;
    let lines: Vec<(String, bool)> = pool.install(|| all.par_iter().map(|fx| fixture_line(fx, &opts)).collect());
    let mut ok = true;
    for (line, good) in &lines {
        ok &= good;
        writeln!(io.out, "{line}").map_err(io_err)?;
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
        for fx in &all {
            let path = dir.join(format!("{}.rlp", fx.name.replace('-', "_")));
            let text = proof_to_string(&fx.proof, io.glyphs);
            fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
}
