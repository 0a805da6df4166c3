//! Batch interface over the good-semigroup library: validation, Apéry level
//! partitions, subspace reports, theorem checks, corpus generation and
//! oracle diffing. Output is plain text with fixed lexicographic ordering so
//! runs are byte-reproducible.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use goodsemi::{
    apery, brute_force_partition, parse_small_file, random_good_semigroup, subspaces_of_level,
    theorem_main_check, validate_elements, CorpusSpec, ExtPoint, GeneratorKind, GoodIdeal,
    GoodSemigroup, LevelPartition,
};

#[derive(Parser)]
#[command(
    name = "goodsemi",
    version,
    about = "Good semigroups of N^d: Apéry levels and subspaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the good-semigroup axioms of a file; exit 0 iff all pass.
    Validate { file: PathBuf },
    /// Print the level partition of Ap(S, ω).
    #[command(visible_alias = "levels")]
    Apery {
        file: PathBuf,
        /// Generator, e.g. (1,2,3)
        #[arg(long)]
        omega: String,
    },
    /// Print the per-level subspace dimensions of Ap(S, ω).
    Subspaces {
        file: PathBuf,
        #[arg(long)]
        omega: String,
    },
    /// Verify that Ap(S, ω) has Σωᵢ levels with the dimension thresholds.
    CheckTheorem {
        file: PathBuf,
        #[arg(long, conflicts_with = "all_small")]
        omega: Option<String>,
        /// Sweep every nonzero small element as ω.
        #[arg(long)]
        all_small: bool,
    },
    /// Write a reproducible corpus of semigroup files.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Per-axis conductor cap (default 10 for d ≤ 2, else 6).
        #[arg(long)]
        cap: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare the representative partition against the brute-force grid.
    OracleDiff {
        file: PathBuf,
        #[arg(long)]
        omega: String,
        /// Per-axis grid margin beyond c_E (default Σωᵢ + 2, clearing the
        /// peeling staircase of up to Σωᵢ boundary cells).
        #[arg(long)]
        padding: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Product,
    ClosureRepair,
}

impl From<KindArg> for GeneratorKind {
    fn from(k: KindArg) -> GeneratorKind {
        match k {
            KindArg::Product => GeneratorKind::Product,
            KindArg::ClosureRepair => GeneratorKind::ClosureRepair,
        }
    }
}

const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    // Die quietly when the consumer of a pipe goes away (e.g. `… | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

enum Failure {
    Domain(String),
    Usage(String),
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Apery { file, omega } => {
            let (_, p) = load_partition(&file, &omega)?;
            print!("{}", p.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Subspaces { file, omega } => {
            let (_, p) = load_partition(&file, &omega)?;
            let mut out = String::new();
            for i in 1..=p.n_levels() {
                let subs = subspaces_of_level(&p, i);
                let _ = writeln!(out, "A{} ({})", i, subs.len());
                for s in subs {
                    let _ = writeln!(out, "dim={} {}", s.dimension(), s.point());
                }
            }
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckTheorem {
            file,
            omega,
            all_small,
        } => cmd_check_theorem(&file, omega.as_deref(), all_small),
        Command::Generate {
            seed,
            d,
            count,
            kind,
            cap,
            out,
        } => cmd_generate(seed, d, count, kind.into(), cap, &out),
        Command::OracleDiff {
            file,
            omega,
            padding,
        } => cmd_oracle_diff(&file, &omega, padding),
    }
}

fn load_semigroup(file: &Path) -> Result<GoodSemigroup, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Domain(format!("{}: {e}", file.display())))?;
    GoodSemigroup::from_file_str(&text).map_err(domain)
}

fn parse_omega(s: &GoodSemigroup, omega: &str) -> Result<ExtPoint, Failure> {
    let w: ExtPoint = omega.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
    if w.dim() != s.dim() {
        return Err(Failure::Usage(format!(
            "--omega has dimension {} but the file has dimension {}",
            w.dim(),
            s.dim()
        )));
    }
    if !w.is_finite() {
        return Err(Failure::Usage("--omega must be fully finite".into()));
    }
    Ok(w)
}

fn load_partition(file: &Path, omega: &str) -> Result<(GoodSemigroup, LevelPartition), Failure> {
    let s = load_semigroup(file)?;
    let w = parse_omega(&s, omega)?;
    let p = apery(&s, &w).map_err(domain)?;
    Ok((s, p))
}

fn cmd_validate(file: &Path) -> Result<ExitCode, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Domain(format!("{}: {e}", file.display())))?;
    let parsed = parse_small_file(&text).map_err(domain)?;
    for p in &parsed.elements {
        if p.dim() != parsed.dim {
            return Err(Failure::Domain(format!(
                "element {p} has dimension {} instead of {}",
                p.dim(),
                parsed.dim
            )));
        }
        if !p.is_finite() {
            return Err(Failure::Domain(format!("element {p} is not fully finite")));
        }
    }
    let report = validate_elements(parsed.dim, &parsed.elements);
    print!(
        "d={} elements={} conductor={}\n{}",
        parsed.dim,
        parsed.elements.len(),
        report.conductor,
        report.render()
    );
    let mut ok = report.passed();
    if let Some(declared) = &parsed.declared_conductor {
        if *declared != report.conductor {
            println!(
                "declared-conductor: FAIL {declared} differs from inferred {}",
                report.conductor
            );
            ok = false;
        } else {
            println!("declared-conductor: ok");
        }
    }
    println!("RESULT: {}", if ok { "valid" } else { "invalid" });
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DOMAIN)
    })
}

fn cmd_check_theorem(
    file: &Path,
    omega: Option<&str>,
    all_small: bool,
) -> Result<ExitCode, Failure> {
    let s = load_semigroup(file)?;
    if all_small {
        let zero = ExtPoint::zero(s.dim());
        let mut all_ok = true;
        for w in s.small_elements().iter().filter(|w| **w != zero) {
            let p = apery(&s, w).map_err(domain)?;
            let report = theorem_main_check(&p, w);
            all_ok &= report.pass;
            println!("omega={w} {}", report.render());
        }
        return Ok(if all_ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_DOMAIN)
        });
    }
    let w = match omega {
        Some(o) => parse_omega(&s, o)?,
        None => {
            return Err(Failure::Usage(
                "one of --omega or --all-small is required".into(),
            ))
        }
    };
    let p = apery(&s, &w).map_err(domain)?;
    let report = theorem_main_check(&p, &w);
    println!("{}", report.render());
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DOMAIN)
    })
}

fn cmd_generate(
    seed: u64,
    d: usize,
    count: usize,
    kind: GeneratorKind,
    cap: Option<u64>,
    out: &Path,
) -> Result<ExitCode, Failure> {
    if d == 0 || d > 16 {
        return Err(Failure::Usage(format!("--d must be in 1..=16, got {d}")));
    }
    let cap = cap.unwrap_or(if d <= 2 { 10 } else { 6 });
    let spec = CorpusSpec {
        seed,
        dim: d,
        count,
        kind,
        caps: vec![cap; d],
    };
    std::fs::create_dir_all(out).map_err(|e| Failure::Domain(format!("{}: {e}", out.display())))?;
    for index in 0..count {
        let s = random_good_semigroup(&spec, index).map_err(domain)?;
        let path = out.join(format!("{seed}-{index}.gs"));
        std::fs::write(&path, s.to_file_string())
            .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle_diff(file: &Path, omega: &str, padding: Option<u64>) -> Result<ExitCode, Failure> {
    let s = load_semigroup(file)?;
    let w = parse_omega(&s, omega)?;
    let e = GoodIdeal::principal(&s, &w).map_err(domain)?;
    let p = apery(&s, &w).map_err(domain)?;
    let pad =
        padding.unwrap_or_else(|| w.coords().iter().filter_map(|c| c.finite()).sum::<u64>() + 2);
    let pad1 = vec![pad; s.dim()];
    let pad2 = vec![pad * 2; s.dim()];
    let g1 = brute_force_partition(&s, &e, &pad1).map_err(domain)?;
    let g2 = brute_force_partition(&s, &e, &pad2).map_err(domain)?;

    let mut identical = true;
    println!(
        "N: {} oracle={} oracle2p={}",
        p.n_levels(),
        g1.n_levels(),
        g2.n_levels()
    );
    identical &= p.n_levels() == g1.n_levels() && p.n_levels() == g2.n_levels();

    for (label, g) in [("interior", &g1), ("interior2p", &g2)] {
        let mut ok = g.n_levels() == p.n_levels();
        if ok {
            for (k, level) in g.interior_levels(e.gamma()).iter().enumerate() {
                for x in level {
                    if p.level_of(x).ok() != Some(k + 1) {
                        ok = false;
                        println!("{label}: {x} sits in level A{} only on the grid", k + 1);
                    }
                }
            }
        }
        println!("{label}: {}", if ok { "identical" } else { "DIFFERENT" });
        identical &= ok;
    }

    // Every saturated representative must cover a level-constant ray family
    // away from the grid's boundary staircase.
    let mut rays_ok = true;
    for g in [&g1, &g2] {
        for msg in goodsemi::oracle::check_ray_constancy(g, &p) {
            rays_ok = false;
            println!("ray: {msg}");
        }
    }
    println!("rays: {}", if rays_ok { "constant" } else { "BROKEN" });
    identical &= rays_ok;

    println!(
        "RESULT: {}",
        if identical { "identical" } else { "different" }
    );
    Ok(if identical {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DOMAIN)
    })
}
