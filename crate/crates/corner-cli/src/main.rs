//! `corner`: run verification suites, dump computed objects, and time the corner computation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use corner::braidrep::Lg;
use corner::closure::{corner_dimension, Multipliers};
use corner::cyclo::Cyc;
use corner::heis::{multi_indices, Heis};
use corner::linalg::Matrix;
use corner::spectral::{Block, Norm, ZeroBlock};
use corner::suites::{self, Params, Suite, DEFAULT_MAX_AMBIENT, DEFAULT_MAX_GROUP_ORDER};
use corner::words::FiniteGroup;

#[derive(Parser)]
#[command(
    name = "corner",
    version,
    about = "Exact verification of braid representations on Heisenberg group algebra blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Odd prime.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Genus.
    #[arg(long, global = true, default_value_t = 1)]
    g: usize,
    /// Seed for the random words of the fox and heisenberg suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; all results are independent of this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Guard on the ambient dimension of the corner computation.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_AMBIENT)]
    max_dim: usize,
    /// Guard on |G| for the suites that work in the group algebra.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    max_group_order: usize,
    /// Output file; a directory for `dump` in text format.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite. Exit code 0 when no check fails, 1 otherwise.
    Verify {
        /// fox, heisenberg, matrix-units, braid-relations, jordan, action-formulas, u-basis,
        /// spectral-operators, separation or main-theorem.
        suite: String,
    },
    /// Write a computed object.
    Dump {
        #[arg(value_enum)]
        object: Object,
    },
    /// Time the corner computation over a grid of parameters.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "3,5")]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        genera: Vec<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Object {
    /// `Psi^_l` and its inverse on `L_g^eta` for every generator.
    PsiMatrices,
    /// The elements `E_ij` of `C[G]`, as coefficient rows indexed by group elements.
    MatrixUnits,
    /// The distinguished basis of the `0`-block, as column vectors in `L_g^eta`.
    DistinguishedBasis,
    /// The `0`-block operators on `L_g^eta`.
    Operators,
    /// One row per group element: index, exponents of `x_1..x_2g`, exponent of `c`, normal word.
    GroupTable,
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Verify { suite } => verify(&cli, suite),
        Command::Dump { object } => dump(&cli, *object).map(|()| true),
        Command::Bench { primes, genera } => bench(&cli, primes, genera).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(cli: &Cli, name: &str) -> CliResult<bool> {
    let suite: Suite = name.parse().map_err(|e: suites::SuiteError| e.to_string())?;
    let params =
        Params { p: cli.p, g: cli.g, seed: cli.seed, max_ambient: cli.max_dim, max_group_order: cli.max_group_order };
    let report = suites::run(suite, &params).map_err(|e| e.to_string())?;
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut v = report.to_json();
            v["command"] = json!(format!("verify {suite} --p {} --g {} --seed {}", cli.p, cli.g, cli.seed));
            format!("{}\n", serde_json::to_string_pretty(&v).expect("report serializes"))
        }
    };
    emit(cli, &text)?;
    Ok(report.passed())
}

fn bench(cli: &Cli, primes: &[u64], genera: &[usize]) -> CliResult<()> {
    let mut rows = Vec::new();
    for &p in primes {
        for &g in genera {
            let row = match corner_dimension(p, g, Multipliers::Forward, cli.max_dim) {
                Ok(r) => json!({
                    "p": p,
                    "g": g,
                    "ambient_dim": r.ambient_dim,
                    "corner_dim": r.corner_dim,
                    "expected": r.full_dim,
                    "verdict": if p <= 3 || g < 2 { "reported" } else if r.corner_dim == r.full_dim { "equal" } else { "proper" },
                    "rounds": r.rounds,
                    "growth": r.growth,
                    "wall_time_ms": r.wall_time_ms,
                }),
                Err(e) => json!({ "p": p, "g": g, "error": e.to_string() }),
            };
            rows.push(row);
        }
    }
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows).expect("rows serialize")),
        Format::Text => {
            let mut s = format!(
                "{:>3} {:>3} {:>8} {:>8} {:>8} {:>9} {:>7} {:>10}  growth\n",
                "p", "g", "ambient", "corner", "expected", "verdict", "rounds", "ms"
            );
            for r in &rows {
                if let Some(e) = r.get("error") {
                    s.push_str(&format!("{:>3} {:>3}  skipped: {}\n", cell(&r["p"]), cell(&r["g"]), cell(e)));
                } else {
                    s.push_str(&format!(
                        "{:>3} {:>3} {:>8} {:>8} {:>8} {:>9} {:>7} {:>10}  {}\n",
                        cell(&r["p"]),
                        cell(&r["g"]),
                        cell(&r["ambient_dim"]),
                        cell(&r["corner_dim"]),
                        cell(&r["expected"]),
                        cell(&r["verdict"]),
                        cell(&r["rounds"]),
                        cell(&r["wall_time_ms"]),
                        r["growth"]
                    ));
                }
            }
            s
        }
    };
    emit(cli, &text)
}

/// A JSON scalar as table text, strings without quotes.
fn cell(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn dump(cli: &Cli, object: Object) -> CliResult<()> {
    let (p, g) = (cli.p, cli.g);
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match object {
        Object::GroupTable => {
            let heis = Heis::new(p, g).map_err(|e| err(&e))?;
            let rows: Vec<(usize, Vec<u64>, u64, String)> = (0..heis.order())
                .map(|i| {
                    let (a, m) = heis.decode(i);
                    (i, a, m, heis.normal_word(i).to_string())
                })
                .collect();
            let text = match cli.format {
                Format::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|(i, a, m, w)| json!({ "index": i, "exponents": a, "central": m, "word": w }))
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("table serializes"))
                }
                Format::Text => rows
                    .iter()
                    .map(|(i, a, m, w)| {
                        let exps: Vec<String> = a.iter().map(u64::to_string).collect();
                        format!("{i} {} {m} {w}\n", exps.join(" "))
                    })
                    .collect(),
            };
            emit(cli, &text)
        }
        Object::MatrixUnits => {
            let heis = Heis::new(p, g).map_err(|e| err(&e))?;
            let idx = multi_indices(p, g);
            let mut named = Vec::new();
            for i in &idx {
                for j in &idx {
                    let e = heis.matrix_unit(i, j);
                    named.push((
                        format!("E_{}_{}", index_name(i), index_name(j)),
                        Matrix::from_data(1, heis.order(), e.to_dense(heis.order())),
                    ));
                }
            }
            write_matrices(cli, &named)
        }
        Object::PsiMatrices => {
            let lg = Lg::new(p, g).map_err(|e| err(&e))?;
            let gens = lg.generators().map_err(|e| err(&e))?;
            let mut named = Vec::new();
            for (l, gen) in gens.iter().enumerate() {
                named.push((format!("psi_hat_{}", l + 1), gen.psi.clone()));
                named.push((format!("psi_hat_{}_inverse", l + 1), gen.inverse.clone()));
            }
            write_matrices(cli, &named)
        }
        Object::DistinguishedBasis => {
            let lg = Lg::new(p, g).map_err(|e| err(&e))?;
            let gens = lg.generators().map_err(|e| err(&e))?;
            let block = Block::new(&lg, &gens, &vec![0; g]).map_err(|e| err(&e))?;
            let named: Vec<(String, Matrix<Cyc>)> = (0..block.dim())
                .map(|c| (block.label_string(c), Matrix::from_cols(lg.dim, &[block.basis.col(c)])))
                .collect();
            write_matrices(cli, &named)
        }
        Object::Operators => {
            let zb = ZeroBlock::new(p, g, Norm::Consistent).map_err(|e| err(&e))?;
            let ops = &zb.ops;
            let mut named = Vec::new();
            let numbered = |prefix: &str, ms: &[Matrix<Cyc>], first: usize| -> Vec<(String, Matrix<Cyc>)> {
                ms.iter().enumerate().map(|(i, m)| (format!("{prefix}_{}", i + first), m.clone())).collect()
            };
            named.extend(numbered("A", &ops.a, 1));
            named.extend(numbered("B", &ops.b, 1));
            named.extend(numbered("D", &ops.d, 1));
            named.extend(numbered("B_dagger", &ops.b_dag, 1));
            named.extend(numbered("D_dagger", &ops.d_dag, 2));
            named.push((format!("T_{g}"), ops.t.clone()));
            named.push((format!("T_dagger_{g}"), ops.t_dag.clone()));
            named.push(("Theta".into(), ops.theta.clone()));
            named.push(("Theta_dagger".into(), ops.theta_dag.clone()));
            write_matrices(cli, &named)
        }
    }
}

fn index_name(i: &[u64]) -> String {
    i.iter().map(u64::to_string).collect::<Vec<_>>().join("")
}

/// Text format: one coordinate-text file per matrix in the `--out` directory, or all matrices
/// on standard output under `# name rows x cols` headers. JSON: one object keyed by name.
fn write_matrices(cli: &Cli, named: &[(String, Matrix<Cyc>)]) -> CliResult<()> {
    let p = cli.p;
    match cli.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (name, m) in named {
                let entries: Vec<Value> = m
                    .to_coordinate_text(p)
                    .lines()
                    .map(|l| {
                        let mut parts = l.splitn(3, ' ');
                        let (i, j, c) = (parts.next(), parts.next(), parts.next());
                        json!([i.and_then(|x| x.parse::<usize>().ok()), j.and_then(|x| x.parse::<usize>().ok()), c])
                    })
                    .collect();
                obj.insert(name.clone(), json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries }));
            }
            emit(cli, &format!("{}\n", serde_json::to_string_pretty(&Value::Object(obj)).expect("matrices serialize")))
        }
        Format::Text => match &cli.out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                for (name, m) in named {
                    let path = dir.join(format!("{}.txt", file_name(name)));
                    write_file(&path, &m.to_coordinate_text(p))?;
                }
                Ok(())
            }
            None => {
                for (name, m) in named {
                    print!("# {name} {} x {}\n{}", m.rows(), m.cols(), m.to_coordinate_text(p));
                }
                Ok(())
            }
        },
    }
}

fn file_name(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect()
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}
