//! `baranyai`: list, query, certify and seed Baranyai partitions BP(n, 4).
//!
//! Exit status: 0 ok, 1 usage, 2 validation failure, 3 verification
//! failure, 4 seed-search timeout.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use baranyai::enumcode::ColumnOracle;
use baranyai::format::{labeled_block, labeled_class_line, read_design, write_design, Header};
use baranyai::planner::{construct_bp4, plan, Step};
use baranyai::seeds::SeedStore;
use baranyai::verify::verify_with_census;
use baranyai::{Design, DesignKind, Error, ParallelClass};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};

#[derive(Parser)]
#[command(name = "baranyai", version, about = "Explicit Baranyai partitions of quadruples")]
struct Cli {
    /// Only print results, no progress notes.
    #[arg(long, global = true, conflicts_with = "verbose")]
    quiet: bool,
    /// Progress notes and timings on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    /// Seed cache directory (default: $BARANYAI_CACHE, then the user cache dir).
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List BP(N,4), one parallel class per line.
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Print points as (x,i) over Z_t x Z_L instead of flat integers.
        #[arg(long)]
        labeled: bool,
        /// Certify the design before writing it.
        #[arg(long)]
        verify: bool,
    },
    /// Print column I (1-based) of BP(N,4) without listing the design.
    Column {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        labeled: bool,
    },
    /// Print block J of column I of BP(N,4).
    Entry {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        labeled: bool,
    },
    /// Certify a design file: exactly-once coverage plus the type census.
    Verify {
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
    },
    /// Build a seed design (embedded, cached or searched) and cache it.
    Seed {
        #[arg(long, value_enum)]
        kind: SeedKind,
        #[arg(long)]
        n: u32,
        /// Block size for `bp` seeds.
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Search budget in seconds.
        #[arg(long, default_value_t = 600)]
        budget: u64,
        /// Also print the design.
        #[arg(long)]
        print: bool,
    },
    /// Time column and entry queries on BP(N,4).
    Bench {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        queries: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum SeedKind {
    Bp,
    Rsqs,
}

enum Failure {
    Core(Error),
    Io(io::Error),
    NotCertified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::SearchTimeout { .. }) => 4,
            Failure::Core(Error::Verification(_) | Error::CorruptCache { .. }) | Failure::NotCertified(_) => 3,
            Failure::Core(_) | Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
            Failure::NotCertified(s) => s.clone(),
        }
    }
}

struct Ctx {
    quiet: bool,
    verbose: bool,
    store: SeedStore,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("baranyai: {}", msg.as_ref());
        }
    }
}

/// Layer width used by `--labeled`: the base size of the last construction step.
fn label_width(n: u32) -> u32 {
    match plan(n) {
        Ok(Step::Double) => n / 2,
        Ok(Step::Quadruple(_)) => n / 4,
        _ => n,
    }
}

fn class_text(c: &ParallelClass, n: u32, labeled: bool) -> String {
    if labeled {
        labeled_class_line(c, label_width(n))
    } else {
        c.to_string()
    }
}

fn generate(ctx: &Ctx, n: u32, out: Option<PathBuf>, labeled: bool, verify: bool) -> Result<(), Failure> {
    let start = Instant::now();
    let d = construct_bp4(n, &ctx.store)?;
    ctx.note(format!("built BP({n},4): {} classes, provenance {}, {:.3}s", d.classes.len(), d.provenance, start.elapsed().as_secs_f64()));
    if verify {
        certify(ctx, &d)?;
    }
    let sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    if labeled {
        writeln!(w, "{}", Header::of(&d).line())?;
        for c in &d.classes {
            writeln!(w, "{}", class_text(c, n, true))?;
        }
    } else {
        write_design(&d, &mut w)?;
    }
    w.flush()?;
    if let Some(path) = out {
        if !ctx.quiet {
            eprintln!("wrote {} classes to {}", d.classes.len(), path.display());
        }
    }
    Ok(())
}

fn certify(ctx: &Ctx, d: &Design) -> Result<(), Failure> {
    let start = Instant::now();
    let report = verify_with_census(d);
    ctx.note(format!("verified in {:.3}s", start.elapsed().as_secs_f64()));
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::NotCertified(report.to_kv()))
    }
}

fn verify(ctx: &Ctx, file: PathBuf) -> Result<(), Failure> {
    let f = File::open(&file).map_err(|e| Failure::Core(Error::Io { path: file.clone(), source: e }))?;
    let d = read_design(BufReader::new(f))?;
    let start = Instant::now();
    let report = verify_with_census(&d);
    ctx.note(format!("verified {} classes in {:.3}s", d.classes.len(), start.elapsed().as_secs_f64()));
    print!("{}", report.to_kv());
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::NotCertified(format!("{} failed verification", file.display())))
    }
}

fn seed(ctx: &Ctx, kind: SeedKind, n: u32, k: usize, budget: u64, print: bool) -> Result<(), Failure> {
    let store = SeedStore { budget: Duration::from_secs(budget), ..ctx.store.clone() };
    let start = Instant::now();
    let d = match kind {
        SeedKind::Bp => store.bp(n, k)?,
        SeedKind::Rsqs => store.rsqs(n)?,
    };
    let report = verify_with_census(&d);
    if !report.ok() {
        return Err(Failure::NotCertified(report.to_kv()));
    }
    let path = match &store.cache {
        Some(cache) if d.kind != DesignKind::Of => {
            let p = cache.path(d.kind, d.n, d.k);
            if !p.exists() {
                cache.store(&d)?;
            }
            Some(p)
        }
        _ => None,
    };
    if print {
        write_design(&d, BufWriter::new(io::stdout().lock()))?;
    } else if !ctx.quiet {
        println!("KIND={}", d.kind.tag());
        println!("N={}", d.n);
        println!("K={}", d.k);
        println!("CLASSES={}", d.classes.len());
        println!("PROVENANCE={}", d.provenance);
        if let Some(p) = path {
            println!("CACHE_FILE={}", p.display());
        }
        println!("SECONDS={:.3}", start.elapsed().as_secs_f64());
    }
    Ok(())
}

fn bench(ctx: &Ctx, n: u32, queries: u32, seed: u64) -> Result<(), Failure> {
    let start = Instant::now();
    let oracle = ColumnOracle::new(n, &ctx.store)?;
    let setup = start.elapsed();
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let total = oracle.column_count();
    let picks: Vec<(u64, u64)> = (0..queries).map(|_| (rng.gen_range(1..=total), rng.gen_range(1..=u64::from(n / 4)))).collect();
    let mut sink = 0u64;
    let start = Instant::now();
    for &(i, _) in &picks {
        sink ^= u64::from(oracle.column(i)?.blocks()[0].max_point());
    }
    let col = start.elapsed();
    let start = Instant::now();
    for &(i, j) in &picks {
        sink ^= u64::from(oracle.entry(i, j)?.max_point());
    }
    let ent = start.elapsed();
    let per = |d: Duration| d.as_nanos() as f64 / f64::from(queries.max(1));
    println!("N={n}");
    println!("QUERIES={queries}");
    println!("SETUP_SECONDS={:.6}", setup.as_secs_f64());
    println!("COLUMN_NS_PER_QUERY={:.0}", per(col));
    println!("ENTRY_NS_PER_QUERY={:.0}", per(ent));
    ctx.note(format!("checksum {sink}"));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let store = match &cli.cache {
        Some(dir) => SeedStore::with_cache(dir),
        None => SeedStore::default(),
    };
    let ctx = Ctx { quiet: cli.quiet, verbose: cli.verbose, store };
    match cli.command {
        Command::Generate { n, out, labeled, verify } => generate(&ctx, n, out, labeled, verify),
        Command::Column { n, i, labeled } => {
            let c = ColumnOracle::new(n, &ctx.store)?.column(i)?;
            println!("{}", class_text(&c, n, labeled));
            Ok(())
        }
        Command::Entry { n, i, j, labeled } => {
            let b = ColumnOracle::new(n, &ctx.store)?.entry(i, j)?;
            if labeled {
                println!("{}", labeled_block(&b, label_width(n)));
            } else {
                println!("{b}");
            }
            Ok(())
        }
        Command::Verify { file } => verify(&ctx, file),
        Command::Seed { kind, n, k, budget, print } => seed(&ctx, kind, n, k, budget, print),
        Command::Bench { n, queries, seed } => bench(&ctx, n, queries, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("baranyai: {}", f.message().trim_end());
            ExitCode::from(f.exit_code())
        }
    }
}
