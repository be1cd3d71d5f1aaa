use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use chm_core::catalog::builtin_matrix;
use chm_core::classification::{DitaDetector, DEFAULT_NODE_LIMIT};
use chm_core::families::AffineFamily;
use chm_core::io::{parse_auto, to_json, to_text};
use chm_core::{
    brute_force_equivalent, build_dita, builtin_family, family_instantiate, family_verify, haagerup_invariant,
    szabo_base_set, szabo_matrix, szabo_modified_spectrum, EquivalenceOutcome, GroupSpec, LogHadamardMatrix,
    PhaseRational,
};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_LIMIT: u8 = 2;

/// Matrix arguments are a path, `-` for stdin, or `builtin:NAME` with NAME
/// one of S8, S12, S16, H8, F<n>.
#[derive(Parser)]
#[command(name = "chm", version, about = "Exact complex Hadamard matrix constructions and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a matrix from a construction.
    #[command(subcommand)]
    Construct(Construct),
    /// Exit 0 iff the matrix is complex Hadamard, 1 otherwise.
    Verify { file: String },
    /// Search every factorization for Dita structure; exit 0 found, 1 none, 2 exhausted.
    DetectDita {
        file: String,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Affine families.
    #[command(subcommand)]
    Family(Family),
    /// Equivalence invariants.
    #[command(subcommand)]
    Invariant(Invariant),
    /// Search for an equivalence taking B to A; exit 0 equivalent, 1 inequivalent, 2 exhausted.
    Equiv {
        file_a: String,
        file_b: String,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Re-serialize a matrix.
    Export {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Block composition with outer matrix M and one inner matrix per column of M.
    Dita {
        #[arg(long)]
        m: String,
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Modified grid spectrum over Z_{p1 q1} x Z_{p2 q2} x Z_{p3 q3}.
    Szabo {
        #[arg(long)]
        group: GroupSpec,
        /// Print a JSON object with the element set and spectrum as well.
        #[arg(long)]
        show_pair: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct FamilySource {
    /// Built-in family: S8_4, S12_5 or S16_11.
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    name: Option<String>,
    /// Family JSON file.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Subcommand)]
enum Family {
    /// Evaluate the family at the given parameters, in turns unless --radians.
    Instantiate {
        #[command(flatten)]
        source: FamilySource,
        /// NAME=VALUE, e.g. a=1/4; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Read values as radians: an exact multiple of pi such as pi/2 or 3pi/4.
        #[arg(long)]
        radians: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check seeded random rational members; exit 0 if all are Hadamard.
    Verify {
        #[command(flatten)]
        source: FamilySource,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Invariant {
    /// Multiset of quadruple phases.
    Haagerup { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<chm_core::Error> for Failure {
    fn from(e: chm_core::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn load(arg: &str) -> Result<LogHadamardMatrix, Failure> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin_matrix(name).ok_or_else(|| Failure::Usage(format!("unknown builtin matrix `{name}`")));
    }
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Data(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Data(format!("{arg}: {e}")))?
    };
    parse_auto(&text).map_err(|e| Failure::Data(format!("{arg}: {e}")))
}

fn emit(l: &LogHadamardMatrix, format: Format) {
    match format {
        Format::Text => print!("{}", to_text(l)),
        Format::Json => println!("{}", to_json(l)),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn family_of(source: &FamilySource) -> Result<AffineFamily, Failure> {
    match (&source.name, &source.file) {
        (Some(name), _) => builtin_family(name).map_err(|e| Failure::Usage(e.to_string())),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Failure::Data(format!("{path}: {e}")))
        }
        (None, None) => Err(Failure::Usage("--name or --file is required".into())),
    }
}

/// `r*pi` radians is `r/2` turns. Accepts `0`, `pi`, `-pi/3`, `3pi/4`, `3*pi/4`.
fn parse_radians(s: &str) -> Option<PhaseRational> {
    let t = s.replace(' ', "");
    if t == "0" {
        return Some(PhaseRational::ZERO);
    }
    let (coef, rest) = t.split_once("pi")?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let num: i64 = match coef {
        "" | "+" => 1,
        "-" => -1,
        c => c.parse().ok()?,
    };
    let den: u64 = match rest {
        "" => 1,
        r => r.strip_prefix('/')?.parse().ok().filter(|&d| d > 0)?,
    };
    Some(PhaseRational::new(num, 2 * den))
}

fn parse_params(items: &[String], radians: bool) -> Result<BTreeMap<String, PhaseRational>, Failure> {
    let mut out = BTreeMap::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--param `{item}` should be NAME=VALUE")))?;
        let phase = if radians {
            parse_radians(value)
                .ok_or_else(|| Failure::Usage(format!("`{value}` is not an exact radian value like 3pi/4")))?
        } else {
            value.parse().map_err(|e: chm_core::Error| Failure::Usage(e.to_string()))?
        };
        if out.insert(name.to_string(), phase).is_some() {
            return Err(Failure::Usage(format!("parameter `{name}` given twice")));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct SzaboPair {
    group: String,
    elements: chm_core::ElementSet,
    spectrum: chm_core::SpectrumSet,
    matrix: LogHadamardMatrix,
}

#[derive(Serialize)]
struct HaagerupSummary {
    size: usize,
    total: u64,
    distinct: usize,
    multiset: Vec<HaagerupItem>,
}

#[derive(Serialize)]
struct HaagerupItem {
    phase: PhaseRational,
    count: u64,
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Construct(Construct::Dita { m, n, format }) => {
            let outer = load(&m)?;
            let inner = n.iter().map(|f| load(f)).collect::<Result<Vec<_>, _>>()?;
            emit(&build_dita(&outer, &inner)?, format);
            Ok(0)
        }
        Command::Construct(Construct::Szabo { group, show_pair, format }) => {
            let matrix = szabo_matrix(&group);
            if show_pair {
                print_json(&SzaboPair {
                    group: group.to_string(),
                    elements: szabo_base_set(&group),
                    spectrum: szabo_modified_spectrum(&group),
                    matrix,
                });
            } else {
                emit(&matrix, format);
            }
            Ok(0)
        }
        Command::Verify { file } => {
            let l = load(&file)?;
            match l.first_non_orthogonal_rows() {
                None => {
                    println!("hadamard: {}x{} over denominator {}", l.size(), l.size(), l.common_denominator());
                    Ok(0)
                }
                Some((a, b)) => {
                    println!("not hadamard: rows {} and {} are not orthogonal", a + 1, b + 1);
                    Ok(1)
                }
            }
        }
        Command::DetectDita { file, node_limit } => {
            let l = load(&file)?;
            if l.size() > 128 {
                return Err(Failure::Data(format!("{file}: detection supports N <= 128")));
            }
            let report = DitaDetector::with_node_limit(node_limit).is_dita_type(&l).named(file);
            print_json(&report);
            Ok(if report.any_found() {
                0
            } else if report.any_exhausted() {
                EXIT_LIMIT
            } else {
                1
            })
        }
        Command::Family(Family::Instantiate { source, params, radians, format }) => {
            let f = family_of(&source)?;
            let values = parse_params(&params, radians)?;
            if let Some(extra) = values.keys().find(|k| !f.params().contains(k)) {
                return Err(Failure::Usage(format!("family has no parameter `{extra}`")));
            }
            let l = family_instantiate(&f, &values).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&l, format);
            Ok(0)
        }
        Command::Family(Family::Verify { source, samples, seed }) => {
            let f = family_of(&source)?;
            let report = family_verify(&f, samples as usize, seed);
            print_json(&report);
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Invariant(Invariant::Haagerup { file }) => {
            let h = haagerup_invariant(&load(&file)?);
            print_json(&HaagerupSummary {
                size: h.size(),
                total: h.total(),
                distinct: h.multiset().len(),
                multiset: h.multiset().iter().map(|&(phase, count)| HaagerupItem { phase, count }).collect(),
            });
            Ok(0)
        }
        Command::Equiv { file_a, file_b, budget } => {
            let (a, b) = (load(&file_a)?, load(&file_b)?);
            let outcome = brute_force_equivalent(&a, &b, budget)?;
            print_json(&outcome);
            Ok(match outcome {
                EquivalenceOutcome::Equivalent(_) => 0,
                EquivalenceOutcome::Inequivalent => 1,
                EquivalenceOutcome::Exhausted => EXIT_LIMIT,
            })
        }
        Command::Export { file, format } => {
            emit(&load(&file)?, format);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
