use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use karyhom_core::complex::{differential_matrix, verify_d_squared};
use karyhom_core::homology::{
    betti_all_named, verify_acj, verify_free3, verify_heisenberg, Check, Validation,
};
use karyhom_core::schur::{character_by_weights, decompose_character};
use karyhom_core::toral::{toral_table, verify_toral};
use karyhom_core::{Error, FamilySpec, KaryAlgebra, Limits};

const SCHEMA: &str = "karyhom/1";

#[derive(Parser)]
#[command(name = "karyhom", version, about = "Exact homology of nilpotent k-ary Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Largest chain space dimension allowed.
    #[arg(long, global = true)]
    size_cap: Option<u128>,

    /// Worker threads (defaults to available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers at every chain degree.
    Compute {
        #[command(flatten)]
        source: Source,
        /// Restrict the listed degrees.
        #[arg(long, value_delimiter = ',')]
        degree: Vec<usize>,
        /// Write each differential as a MatrixMarket file into this directory.
        #[arg(long)]
        export_mm: Option<PathBuf>,
    },
    /// Run every validator that applies to the algebra.
    Verify {
        #[command(flatten)]
        source: Source,
    },
    /// Toral refinement bound table.
    Table {
        #[arg(long, required = true)]
        toral: bool,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long = "k", value_delimiter = ',', default_values_t = [2, 3, 4, 5])]
        ks: Vec<usize>,
    },
    /// Schur decomposition of one homology group of a weight-graded algebra.
    Decompose {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        degree: usize,
    },
    /// Jacobi identity and ∂∘∂ = 0 only.
    Check {
        #[command(flatten)]
        source: Source,
    },
    /// Print the algebra in the JSON input format.
    Dump {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Heisenberg,
    Acj,
    Free2,
    Free3small,
    Abelian,
    Current,
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct Source {
    #[arg(long, value_enum, conflicts_with = "input")]
    family: Option<Family>,
    /// Algebra JSON document.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Truncation order of a current algebra.
    #[arg(long)]
    j: Option<usize>,
    /// Inner family of a current algebra.
    #[arg(long, value_enum)]
    inner: Option<Family>,
}

enum Failure {
    Usage(String),
    Resource(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => Failure::Resource(e.to_string()),
            Error::InvalidInput(_) | Error::NotGraded | Error::NotAcjShaped(_) | Error::Io(_) | Error::Json(_) => {
                Failure::Usage(e.to_string())
            }
            Error::NotNilpotent | Error::Internal(_) => Failure::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Loaded {
    name: String,
    spec: Option<FamilySpec>,
    alg: KaryAlgebra,
}

fn need(v: Option<usize>, flag: &str, family: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for family {family}")))
}

fn family_spec(f: Family, s: &Source) -> Result<FamilySpec, Failure> {
    Ok(match f {
        Family::Heisenberg => FamilySpec::Heisenberg { k: need(s.k, "k", "heisenberg")?, m: need(s.m, "m", "heisenberg")? },
        Family::Acj => FamilySpec::Acj { k: need(s.k, "k", "acj")?, m: need(s.m, "m", "acj")? },
        Family::Free2 => FamilySpec::Free2 { k: need(s.k, "k", "free2")?, n: need(s.n, "n", "free2")? },
        Family::Free3small => FamilySpec::Free3small { k: need(s.k, "k", "free3small")? },
        Family::Abelian => FamilySpec::Abelian { k: need(s.k, "k", "abelian")?, n: need(s.n, "n", "abelian")? },
        Family::Current => {
            let inner = s.inner.ok_or_else(|| Failure::Usage("--inner is required for family current".into()))?;
            if inner == Family::Current {
                return Err(Failure::Usage("--inner cannot be current".into()));
            }
            FamilySpec::Current { inner: Box::new(family_spec(inner, s)?), j: need(s.j, "j", "current")? }
        }
    })
}

fn load(s: &Source) -> Result<Loaded, Failure> {
    match (&s.family, &s.input) {
        (Some(f), None) => {
            let spec = family_spec(*f, s)?;
            Ok(Loaded { name: spec.describe(), alg: spec.build()?, spec: Some(spec) })
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let alg = KaryAlgebra::from_json_str(&text)?;
            let file = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
            Ok(Loaded { name: format!("input({file})"), spec: None, alg })
        }
        _ => Err(Failure::Usage("give exactly one of --family or --input".into())),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    kind: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

fn json<T: Serialize>(kind: &'static str, body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, kind, body }).expect("serializable report");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct ValidationDoc<'a> {
    passed: bool,
    validations: &'a [Validation],
}

fn render_validations(vs: &[Validation], format: Format) -> String {
    let passed = vs.iter().all(Validation::passed);
    match format {
        Format::Json => json("validation", &ValidationDoc { passed, validations: vs }),
        Format::Csv => {
            let mut s = String::from("subject,check,relation,expected,actual,asserted,passed\n");
            for v in vs {
                for c in &v.checks {
                    let cells = [&v.subject, &c.name, c.relation, &c.expected, &c.actual];
                    let cells: Vec<String> = cells.iter().map(|x| csv_field(x)).collect();
                    s.push_str(&format!("{},{},{}\n", cells.join(","), c.asserted, c.passed));
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for v in vs {
                s.push_str(&format!("{v}\n"));
            }
            s.push_str(if passed { "all checks passed\n" } else { "some checks FAILED\n" });
            s
        }
    }
}

fn structural_checks(l: &Loaded) -> Validation {
    let mut v = Validation::new(format!("structure {}", l.name));
    v.push(Check::eq("Jacobi violations", 0, l.alg.check_jacobi().len(), true));
    v.push(Check::eq("degrees with ∂∘∂ ≠ 0", "[]".to_string(), format!("{:?}", verify_d_squared(&l.alg)), true));
    v
}

fn export_differentials(alg: &KaryAlgebra, dir: &Path, limits: &Limits) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    let layout = karyhom_core::ChainLayout::new(alg);
    for t in layout.degrees().into_iter().filter(|&t| t >= alg.arity()) {
        limits.check(alg, t)?;
        let d = differential_matrix(alg, t)?;
        let file = fs::File::create(dir.join(format!("d{t}.mtx")))?;
        d.write_matrix_market(std::io::BufWriter::new(file))?;
    }
    Ok(())
}

/// Rendered output and whether every assertion held.
fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let limits = match cli.size_cap {
        Some(size_cap) => Limits { size_cap },
        None => Limits::default(),
    };
    let format = cli.format;
    match &cli.command {
        Command::Compute { source, degree, export_mm } => {
            let l = load(source)?;
            let mut report = betti_all_named(&l.alg, &l.name, &limits)?;
            if let Some(t) = degree.iter().find(|t| report.betti(**t).is_none()) {
                return Err(Failure::Usage(format!("degree {t} is not a chain degree of {}", l.name)));
            }
            if !degree.is_empty() {
                report.degrees.retain(|d| degree.contains(&d.degree));
            }
            if let Some(dir) = export_mm {
                export_differentials(&l.alg, dir, &limits)?;
            }
            let ok = report.euler_holds() && report.image_in_kernel();
            let out = match format {
                Format::Json => json("homology", &report),
                Format::Csv => report.to_csv(),
                Format::Text => format!("{report}\n"),
            };
            Ok((out, ok))
        }
        Command::Verify { source } => {
            let l = load(source)?;
            let mut vs = vec![structural_checks(&l)];
            match &l.spec {
                Some(FamilySpec::Heisenberg { k, m }) => vs.push(verify_heisenberg(*k, *m, &limits)?),
                Some(FamilySpec::Acj { k, m }) => vs.push(verify_acj(*k, *m, &limits)?),
                Some(FamilySpec::Free3small { k }) => vs.push(verify_free3(*k, &limits)?),
                _ => {}
            }
            if l.alg.is_nilpotent() {
                vs.push(verify_toral(&l.alg, &l.name, &limits)?.validation);
            }
            let ok = vs.iter().all(Validation::passed);
            Ok((render_validations(&vs, format), ok))
        }
        Command::Table { toral: _, nmax, ks } => {
            let table = toral_table(*nmax, ks)?;
            let out = match format {
                Format::Json => json("toral-table", &table),
                Format::Csv => table.to_csv(),
                Format::Text => table.to_text(),
            };
            Ok((out, true))
        }
        Command::Decompose { source, degree } => {
            let l = load(source)?;
            let d = decompose_character(&character_by_weights(&l.alg, *degree, &limits)?)?;
            #[derive(Serialize)]
            struct Doc<'a> {
                algebra: &'a str,
                degree: usize,
                total_dimension: u128,
                decomposition: &'a karyhom_core::SchurDecomposition,
            }
            let out = match format {
                Format::Json => json(
                    "schur",
                    &Doc { algebra: &l.name, degree: *degree, total_dimension: d.total_dimension(), decomposition: &d },
                ),
                Format::Csv => {
                    let mut s = String::from("partition,multiplicity,dimension\n");
                    for x in &d.summands {
                        s.push_str(&format!("{},{},{}\n", csv_field(&x.partition.to_string()), x.multiplicity, x.dimension));
                    }
                    s
                }
                Format::Text => format!("H^{degree}({}) = {d}   (dim {})\n", l.name, d.total_dimension()),
            };
            Ok((out, true))
        }
        Command::Check { source } => {
            let l = load(source)?;
            let v = structural_checks(&l);
            let ok = v.passed();
            Ok((render_validations(&[v], format), ok))
        }
        Command::Dump { source } => {
            let l = load(source)?;
            let doc = l.alg.to_json();
            let out = match format {
                Format::Json => json("algebra", &doc),
                _ => return Err(Failure::Usage("dump supports --format json only".into())),
            };
            Ok((out, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((out, ok)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
