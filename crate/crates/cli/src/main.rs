mod matrix_file;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use skewswitch::algfrontend::{classify_pair, grmod_witness_as_lambdas, SkewAlgebraSpec};
use skewswitch::census::{
    brute_force_census, census, census_with_representatives, count_eulerian_classes_with,
    count_switching_classes_with, CensusResult, Solver,
};
use skewswitch::eulerian::eulerize;
use skewswitch::pointcomplex::{
    complexes_isomorphic, facets, facets_via_isolations, variety_components, SimplicialComplex,
};
use skewswitch::skewmat::{isomorphic, switching_equivalent};
use skewswitch::{AltMatrix, EquivWitness, Permutation, SwitchExponents};

use matrix_file::{load, MatrixDoc};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 10;
const EXIT_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 3;

/// Switching classes of skew-symmetric matrices over Z/lZ.
///
/// Vertices are 1-indexed. Matrix files are JSON
/// `{"modulus": l, "size": n, "entries": [[..], ..]}` or plain text with
/// `l n` on the first line followed by `n` rows; `-` reads standard input.
#[derive(Parser)]
#[command(name = "skewswitch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Switch at one vertex: subtract 1 across its row, add 1 down its column.
    Switch {
        #[arg(short = 'v', long = "vertex")]
        vertex: usize,
        file: PathBuf,
    },
    /// The pure switching that clears the row and column of a vertex.
    Isolate {
        #[arg(short = 'v', long = "vertex")]
        vertex: usize,
        file: PathBuf,
    },
    /// The modular Eulerian matrix in the switching orbit (needs gcd(n, l) = 1).
    Eulerize {
        file: PathBuf,
        /// Also print s, the row-sum buckets and the switch exponents.
        #[arg(long)]
        explain: bool,
    },
    /// Switching equivalence with a witness. Exit 0 if equivalent, 10 if not.
    Equiv { a: PathBuf, b: PathBuf },
    /// Matrix isomorphism with a witness. Exit 0 if isomorphic, 10 if not.
    Iso { a: PathBuf, b: PathBuf },
    /// Facets of the point simplicial complex.
    Complex {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Triples)]
        via: Route,
        /// List one linear component per facet.
        #[arg(long)]
        components: bool,
        /// Print the digraph in graphviz format instead of JSON.
        #[arg(long)]
        emit_dot: bool,
    },
    /// Isomorphism of point complexes. Exit 0 if isomorphic, 10 if not.
    ComplexIso { a: PathBuf, b: PathBuf },
    /// Algebra isomorphism, module-category equivalence and point-variety isomorphism.
    Classify { a: PathBuf, b: PathBuf },
    /// Exact number of switching classes or of Eulerian isomorphism classes.
    Count {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = What::Classes)]
        what: What,
        #[arg(long, value_enum, default_value_t = SolverArg::Smith)]
        solver: SolverArg,
    },
    /// Both counts, optionally by exhaustive enumeration or with representatives.
    Census {
        #[arg(long)]
        modulus: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        brute_force: bool,
        /// Include one canonical Eulerian matrix per isomorphism class.
        #[arg(long)]
        list: bool,
    },
    /// Recompute the published count tables.
    Tables {
        /// Compare with the published values; exit 1 on any mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Randomised consistency checks.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Triples,
    Isolations,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Classes,
    Eulerian,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Smith,
    Prime,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let guard = err
                .downcast_ref::<skewswitch::Error>()
                .is_some_and(skewswitch::Error::is_guard);
            ExitCode::from(if guard { EXIT_GUARD } else { EXIT_INPUT })
        }
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn big(n: &BigUint) -> Value {
    Value::Number(n.to_string().parse().expect("integer literal"))
}

fn matrix_json(m: &AltMatrix) -> Value {
    serde_json::to_value(MatrixDoc::from_matrix(m)).expect("serializable")
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn vertex(v: usize, m: &AltMatrix) -> Result<usize> {
    if v == 0 || v > m.size() {
        bail!("vertex {v} out of range 1..={}", m.size());
    }
    Ok(v - 1)
}

fn same_shape(a: &AltMatrix, b: &AltMatrix) -> Result<()> {
    if a.modulus() != b.modulus() {
        bail!(skewswitch::Error::ModulusMismatch(a.modulus(), b.modulus()));
    }
    Ok(())
}

fn witness_json(w: Option<&EquivWitness>) -> Value {
    match w {
        Some(w) => json!({
            "equivalent": true,
            "permutation": w.sigma.to_one_based(),
            "switch_exponents": w.exponents.values(),
        }),
        None => json!({
            "equivalent": false,
            "permutation": null,
            "switch_exponents": null,
        }),
    }
}

fn facet_json(c: &SimplicialComplex) -> Value {
    json!(c.to_one_based())
}

fn verdict(yes: bool) -> u8 {
    if yes {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Switch { vertex: v, file } => {
            let m = load(&file)?;
            print_json(&matrix_json(&m.switch(vertex(v, &m)?)?));
            Ok(EXIT_YES)
        }
        Command::Isolate { vertex: v, file } => {
            let m = load(&file)?;
            print_json(&matrix_json(&m.isolate(vertex(v, &m)?)?));
            Ok(EXIT_YES)
        }
        Command::Eulerize { file, explain } => {
            let m = load(&file)?;
            let e = eulerize(&m)?;
            let mut out = matrix_json(&e.matrix);
            if explain {
                let buckets: Vec<Vec<usize>> = e.profile.buckets.iter().map(|b| one_based(b)).collect();
                out["s"] = json!(e.s);
                out["row_sums"] = json!(e.profile.sums);
                out["buckets"] = json!(buckets);
                out["switch_exponents"] = json!(e.exponents.values());
            }
            print_json(&out);
            Ok(EXIT_YES)
        }
        Command::Equiv { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            same_shape(&a, &b)?;
            let w = if a.size() == b.size() {
                switching_equivalent(&a, &b)?
            } else {
                None
            };
            print_json(&witness_json(w.as_ref()));
            Ok(verdict(w.is_some()))
        }
        Command::Iso { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            same_shape(&a, &b)?;
            let p = if a.size() == b.size() {
                isomorphic(&a, &b)?
            } else {
                None
            };
            print_json(&json!({
                "isomorphic": p.is_some(),
                "permutation": p.as_ref().map(Permutation::to_one_based),
            }));
            Ok(verdict(p.is_some()))
        }
        Command::Complex {
            file,
            via,
            components,
            emit_dot,
        } => {
            let m = load(&file)?;
            let c = match via {
                Route::Triples => facets(&m)?,
                Route::Isolations => facets_via_isolations(&m)?,
            };
            if emit_dot {
                print!("{}", dot(&m, &c));
                return Ok(EXIT_YES);
            }
            let mut out = json!({
                "facets": facet_json(&c),
                "dimension": c.dimension(),
            });
            if components {
                let comps: Vec<Value> = variety_components(&c)
                    .iter()
                    .map(|d| {
                        json!({
                            "support": one_based(&d.support),
                            "projective_dimension": d.projective_dimension,
                        })
                    })
                    .collect();
                out["components"] = json!(comps);
            }
            print_json(&out);
            Ok(EXIT_YES)
        }
        Command::ComplexIso { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let (ca, cb) = (facets(&a)?, facets(&b)?);
            let p = complexes_isomorphic(&ca, &cb);
            print_json(&json!({
                "isomorphic": p.is_some(),
                "permutation": p.as_ref().map(Permutation::to_one_based),
                "facets": [facet_json(&ca), facet_json(&cb)],
            }));
            Ok(verdict(p.is_some()))
        }
        Command::Classify { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let r = classify_pair(&SkewAlgebraSpec::new(a), &SkewAlgebraSpec::new(b))?;
            let lambdas = r.grmod_equivalent.as_ref().map(|w| {
                grmod_witness_as_lambdas(w)
                    .into_iter()
                    .map(|(i, a)| json!([i + 1, a]))
                    .collect::<Vec<_>>()
            });
            print_json(&json!({
                "algebra_isomorphic": r.algebra_isomorphic.is_some(),
                "algebra_permutation": r.algebra_isomorphic.as_ref().map(Permutation::to_one_based),
                "grmod_equivalent": witness_json(r.grmod_equivalent.as_ref()),
                "lambda_exponents": lambdas,
                "complexes_isomorphic": r.complexes_isomorphic.is_some(),
                "complex_permutation": r.complexes_isomorphic.as_ref().map(Permutation::to_one_based),
                "facets": [facet_json(&r.facets.0), facet_json(&r.facets.1)],
                "dimensions": [r.dimensions.0, r.dimensions.1],
                "note": r.note,
            }));
            Ok(EXIT_YES)
        }
        Command::Count {
            modulus,
            n,
            what,
            solver,
        } => {
            let solver = match solver {
                SolverArg::Smith => Solver::Smith,
                SolverArg::Prime => Solver::PrimeField,
            };
            let value = match what {
                What::Classes => count_switching_classes_with(modulus, n, solver)?,
                What::Eulerian => count_eulerian_classes_with(modulus, n, solver)?,
            };
            println!("{value}");
            Ok(EXIT_YES)
        }
        Command::Census {
            modulus,
            n,
            brute_force,
            list,
        } => {
            let result = if brute_force {
                let mut r = brute_force_census(modulus, n)?;
                if !list {
                    r.representatives = None;
                }
                r
            } else if list {
                census_with_representatives(modulus, n)?
            } else {
                census(modulus, n)?
            };
            print_json(&census_json(&result, brute_force));
            Ok(EXIT_YES)
        }
        Command::Tables { check } => tables(check),
        Command::Selfcheck { seed, cases } => selfcheck(seed, cases),
    }
}

fn census_json(r: &CensusResult, brute_force: bool) -> Value {
    let mut out = json!({
        "modulus": r.modulus,
        "n": r.n,
        "method": if brute_force { "enumeration" } else { "burnside" },
        "s": big(&r.s),
        "t": big(&r.t),
    });
    if let Some(reps) = &r.representatives {
        out["representatives"] = json!(reps.iter().map(matrix_json).collect::<Vec<_>>());
    }
    out
}

/// Arcs `i -> j` for entries in `1..=l/2`, labelled when the entry is not 1.
fn dot(m: &AltMatrix, c: &SimplicialComplex) -> String {
    let l = m.modulus();
    let mut out = String::from("digraph G {\n");
    out.push_str(&format!("  // facets {c}\n"));
    for v in 0..m.size() {
        out.push_str(&format!("  {};\n", v + 1));
    }
    for i in 0..m.size() {
        for j in 0..m.size() {
            let x = m.get(i, j);
            if x == 0 || 2 * x > l || (2 * x == l && i > j) {
                continue;
            }
            if x == 1 {
                out.push_str(&format!("  {} -> {};\n", i + 1, j + 1));
            } else {
                out.push_str(&format!("  {} -> {} [label=\"{x}\"];\n", i + 1, j + 1));
            }
        }
    }
    out.push_str("}\n");
    out
}

struct Table {
    name: &'static str,
    modulus: u64,
    what: What,
    values: &'static [&'static str],
}

const TABLES: [Table; 3] = [
    Table {
        name: "switching classes, modulus 2",
        modulus: 2,
        what: What::Classes,
        values: &["1", "1", "2", "3", "7", "16", "54", "243", "2038", "33120", "1182004"],
    },
    Table {
        name: "switching classes, modulus 3",
        modulus: 3,
        what: What::Classes,
        values: &[
            "1",
            "1",
            "2",
            "4",
            "14",
            "120",
            "3222",
            "271287",
            "64154817",
            "41653775052",
            "74220906305025",
        ],
    },
    Table {
        name: "Eulerian isomorphism classes, modulus 4",
        modulus: 4,
        what: What::Eulerian,
        values: &["1", "1", "3", "8", "62", "1760"],
    },
];

fn tables(check: bool) -> Result<u8> {
    let mut mismatches = 0;
    for table in &TABLES {
        println!("{}", table.name);
        for (k, expected) in table.values.iter().enumerate() {
            let n = k + 1;
            let start = Instant::now();
            let value = match table.what {
                What::Classes => count_switching_classes_with(table.modulus, n, Solver::Smith)?,
                What::Eulerian => count_eulerian_classes_with(table.modulus, n, Solver::Smith)?,
            };
            let ok = value.to_string() == *expected;
            if !ok {
                mismatches += 1;
            }
            let status = match (check, ok) {
                (false, _) => String::new(),
                (true, true) => "  ok".to_string(),
                (true, false) => format!("  MISMATCH (expected {expected})"),
            };
            println!(
                "  n={n:<3}{value:>18}  {:>8.3}s{status}",
                start.elapsed().as_secs_f64()
            );
        }
    }
    if check {
        println!("{mismatches} mismatches");
        return Ok(if mismatches == 0 { 0 } else { 1 });
    }
    Ok(0)
}

fn random_matrix(rng: &mut ChaCha8Rng, l: u32, n: usize) -> AltMatrix {
    let upper: Vec<i64> = (0..n * (n - 1) / 2).map(|_| rng.gen_range(0..l as i64)).collect();
    AltMatrix::from_upper(l, n, &upper).expect("reduced entries")
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        images.swap(i, rng.gen_range(0..=i));
    }
    Permutation::from_images(images).expect("shuffled identity")
}

fn selfcheck(seed: u64, cases: usize) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let l = rng.gen_range(2..=7u32);
        let n = rng.gen_range(1..=7usize);
        let m = random_matrix(&mut rng, l, n);
        let v = rng.gen_range(0..n);
        let mut check = |name: &str, ok: bool| {
            if !ok {
                failures.push(format!("case {case}: {name}"));
            }
        };

        let mut x = m.clone();
        for _ in 0..l {
            x = x.switch(v)?;
        }
        check("switching l times is the identity", x == m);

        let values: Vec<i64> = (0..n).map(|_| rng.gen_range(0..l as i64)).collect();
        let a = SwitchExponents::new(l, &values)?;
        let sigma = random_permutation(&mut rng, n);
        let target = m.switch_many(&a)?.relabel(&sigma)?;
        let w = switching_equivalent(&m, &target)?;
        check("witness found and re-verifies", w.is_some_and(|w| w.verify(&m, &target)));
        check(
            "triple tensor is switching invariant",
            m.switch_many(&a)?.triple_tensor() == m.triple_tensor(),
        );
        check("isolation route gives the facets", facets(&m)? == facets_via_isolations(&m)?);

        if skewswitch::modlinalg::inverse_mod(n as u64, l as u64).is_some() {
            let e1 = eulerize(&m)?;
            let e2 = eulerize(&m.switch_many(&a)?)?;
            check("Eulerization is constant on orbits", e1.matrix == e2.matrix);
        }
    }
    print_json(&json!({
        "seed": seed,
        "cases": cases,
        "failures": failures,
    }));
    Ok(if failures.is_empty() { 0 } else { 1 })
}
