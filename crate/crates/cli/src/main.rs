use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use glnz_core::embed::{format_bits, generator_automorphism, phi, Generator};
use glnz_core::free::{binary_generators, depth_conjugacy_check, freeness_check};
use glnz_core::matrix::{factorize, factors_to_json, IntMatrix};
use glnz_core::verify::{self, ClaimResult};
use glnz_core::{format_word, parse_word, Letter, TreeAutomorphism};

#[derive(Parser)]
#[command(name = "glnz", version, about = "Finite-state tree automorphisms representing GL(n,Z)")]
struct Cli {
    /// Print letters as bit vectors instead of 1-based indices.
    #[arg(long, global = true)]
    bits: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the number of states of the automorphism of a matrix.
    Phi {
        #[arg(long)]
        matrix: PathBuf,
        /// Write the Moore diagram in DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the automaton as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the elementary factors of a matrix as JSON.
    Factorize {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Apply the automorphism of a matrix to a word.
    Act {
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated 1-based letters; empty for the root.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Write the Moore diagram of a generator: t1, t2, s i j, a or d.
    Dot {
        #[arg(long, num_args = 1..=3, required = true)]
        generator: Vec<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run bounded verification suites; all of them when none is selected.
    Verify {
        #[arg(long)]
        theorem1: bool,
        #[arg(long)]
        lemma1: bool,
        #[arg(long)]
        lemma2: bool,
        #[arg(long)]
        corollary: bool,
        /// Dimension; 2 and 3 when omitted.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 20)]
        kmax: i64,
    },
    /// Search for relations between a and d and check the conjugacy by levels.
    Free {
        #[arg(long, default_value_t = 8)]
        max_length: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

const COROLLARY_SAMPLES: usize = 100;
const COROLLARY_SEED: u64 = 5;

type Outcome = Result<bool, String>;

fn read_matrix(path: &Path) -> Result<IntMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let m = IntMatrix::from_json(&text).map_err(|e| e.to_string())?;
    m.check_unimodular().map_err(|e| e.to_string())?;
    Ok(m)
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn letter_formatter(bits: bool, degree: usize) -> impl Fn(Letter) -> String {
    let width = degree.trailing_zeros() as usize;
    move |x| if bits { format_bits(x, width) } else { (x + 1).to_string() }
}

fn show_word(word: &[Letter], bits: bool, degree: usize) -> String {
    if bits {
        let f = letter_formatter(true, degree);
        word.iter().map(|&x| f(x)).collect::<Vec<_>>().join(" ")
    } else {
        format_word(word)
    }
}

fn generator(tokens: &[String], n: usize) -> Result<TreeAutomorphism, String> {
    let (a, d) = binary_generators();
    match tokens {
        [t] if t == "a" => Ok(a),
        [t] if t == "d" => Ok(d),
        _ => {
            let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
            let g = Generator::parse(&refs).map_err(|e| e.to_string())?;
            generator_automorphism(g, n).map_err(|e| e.to_string())
        }
    }
}

fn report(results: &[ClaimResult]) -> bool {
    for r in results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.claim, r.detail);
    }
    results.iter().all(|r| r.passed)
}

fn run(cli: Cli) -> Outcome {
    let err = |e: glnz_core::Error| e.to_string();
    match cli.command {
        Command::Phi { matrix, dot, json } => {
            let g = phi(&read_matrix(&matrix)?).map_err(err)?;
            println!("states: {}", g.num_states());
            if let Some(path) = dot {
                write(&path, &g.to_dot_with(letter_formatter(cli.bits, g.degree())))?;
            }
            if let Some(path) = json {
                write(&path, &(g.to_json() + "\n"))?;
            }
        }
        Command::Factorize { matrix } => {
            let factors = factorize(&read_matrix(&matrix)?).map_err(err)?;
            println!("{}", factors_to_json(&factors));
        }
        Command::Act { matrix, word } => {
            let g = phi(&read_matrix(&matrix)?).map_err(err)?;
            let w = parse_word(&word, g.degree()).map_err(err)?;
            println!("{}", show_word(&g.act(&w).map_err(err)?, cli.bits, g.degree()));
        }
        Command::Dot { generator: tokens, n, out } => {
            let g = generator(&tokens, n)?;
            write(&out, &g.to_dot_with(letter_formatter(cli.bits, g.degree())))?;
        }
        Command::Verify { theorem1, lemma1, lemma2, corollary, n, kmax } => {
            let all = !(theorem1 || lemma1 || lemma2 || corollary);
            let dims = match n {
                Some(n) => vec![n],
                None => vec![2, 3],
            };
            let mut results = Vec::new();
            for n in dims {
                if all || theorem1 {
                    results.extend(verify::theorem1(n, kmax).map_err(err)?);
                }
                if all || lemma1 {
                    results.extend(verify::lemma1(n).map_err(err)?);
                }
                if all || lemma2 {
                    results.extend(verify::lemma2(n, kmax).map_err(err)?);
                }
                if all || corollary {
                    results.extend(verify::corollary(n, COROLLARY_SAMPLES, COROLLARY_SEED).map_err(err)?);
                }
            }
            return Ok(report(&results));
        }
        Command::Free { max_length, depth } => {
            let report = freeness_check(max_length);
            let conjugate = depth_conjugacy_check(depth);
            println!("checked {} reduced words of length <= {max_length}", report.words_checked);
            let relation = match &report.counterexample {
                Some(w) => format!("relation found: {w}"),
                None => "no relation found".to_string(),
            };
            let conjugacy = if conjugate { "conjugacy OK".to_string() } else { format!("conjugacy FAILED at depth {depth}") };
            println!("{relation}; {conjugacy}");
            return Ok(report.counterexample.is_none() && conjugate);
        }
    }
    Ok(true)
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("GLNZ_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| format!("GLNZ_THREADS: not a number: {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
