//! Command-line front end: file I/O, the isotopism and isomorphism
//! commands, labeling reports, generators, oracles, and the experiment
//! drivers.

mod experiments;
mod report;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use galg::bimap::Bimap;
use galg::field::Field;
use galg::graded::GradedIsoOptions;
use galg::hermitian::{HermitianBimap, IsometryMethod, PseudoOptions};
use galg::io;
use galg::isotopism::{CosetOptions, GStrategy, LiftOptions};
use galg::labels;
use galg::linalg::Matrix;
use galg::oracle;
use galg::rings::{self, RingKind};
use galg::units;
use report::{emit, matrix_entry, Format};
use serde_json::{json, Value};
use std::path::PathBuf;

/// Exit status signalling a computed-but-empty coset.
const EXIT_EMPTY: i32 = 2;

#[derive(Parser)]
#[command(
    name = "galg",
    version,
    about = "Bimap isotopism and graded algebra isomorphism"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Labels,
    Full,
    Trivial,
}

impl From<StrategyArg> for GStrategy {
    fn from(s: StrategyArg) -> GStrategy {
        match s {
            StrategyArg::Labels => GStrategy::Labels,
            StrategyArg::Full => GStrategy::Full,
            StrategyArg::Trivial => GStrategy::TrivialPlus,
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Budget cap for candidate-group and unit enumerations; also read
    /// from GALG_BUDGET.
    #[arg(long)]
    budget: Option<u128>,
}

impl BudgetArgs {
    fn get(&self, default: u128) -> u128 {
        self.budget
            .or_else(|| {
                std::env::var("GALG_BUDGET")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(default)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Operator ring dimensions and bases of a bimap.
    Rings { file: PathBuf },
    /// Closure, unitality, and unit group of a matrix algebra file.
    Units {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Isotopism coset of two bimaps.
    Isotopism {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Labels)]
        strategy: StrategyArg,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graded isomorphism coset of two graded algebra files.
    GradedIso {
        a: PathBuf,
        b: PathBuf,
        /// Layer selection: "auto" or a comma-separated degree like "2".
        #[arg(long, default_value = "auto")]
        layers: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Point labels (and optionally line labels / fingerprint) of a bimap.
    Labels {
        file: PathBuf,
        #[arg(long)]
        lines: bool,
        #[arg(long)]
        fingerprint: bool,
    },
    /// Pseudo-isometry coset of two (anti)symmetric bimaps.
    PseudoIsometry {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Labels)]
        strategy: StrategyArg,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Isometry group of an (anti)symmetric bimap.
    IsometryGroup {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Adjoint)]
        method: MethodArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generators for the example families.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Brute-force oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Experiment drivers.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Labeled geometries of the worked bimaps D and E over GF(3).
    Figure2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Adjoint,
    Gl,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Nondegenerate alternating (2n, 2n, 1) bimap.
    Heisenberg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Twisted Heisenberg bimap over GF(p), optionally projected to e slices.
    TwistedHeisenberg {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        sigma: u32,
        #[arg(long)]
        e: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// e random alternating d x d slices over GF(p).
    Random2 {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense nilpotent Lie algebra for the given flag gaps.
    Dense {
        /// Comma-separated block sizes, e.g. 1,1,1.
        #[arg(long)]
        dims: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        thin_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive isotopisms between two bimap files.
    Isotopism {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exhaustive graded isomorphisms between two graded algebra files.
    GradedIso {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exhaustive isometries (f, f, h) for h = identity.
    Isometries {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exhaustive pseudo-isometries (f, f0).
    PseudoIsometries {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Twisted Heisenberg label/lift experiment.
    Table1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        e: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random alternating-system experiment.
    Table2 {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_bimap(path: &PathBuf) -> anyhow::Result<Bimap> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).context("parsing JSON")?;
    io::bimap_from_json(&v).map_err(|e| anyhow!("{e}"))
}

fn load_graded(path: &PathBuf) -> anyhow::Result<galg::graded::GradedAlgebra> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).context("parsing JSON")?;
    io::graded_from_json(&v).map_err(|e| anyhow!("{e}"))
}

fn write_or_print(out: Option<&PathBuf>, v: &Value, format: Format) -> anyhow::Result<()> {
    match out {
        Some(p) => {
            std::fs::write(p, serde_json::to_string_pretty(v)?)
                .with_context(|| format!("writing {}", p.display()))?;
            Ok(())
        }
        None => {
            emit(v, format);
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let fmt = cli.format;
    match cli.command {
        Command::Rings { file } => {
            let u = load_bimap(&file)?;
            let (l, m, r, t, c) = rings::tri_ring_dims(&u).map_err(|e| anyhow!("{e}"))?;
            let spaces: Vec<(&str, RingKind)> =
                vec![("L", RingKind::L), ("M", RingKind::M), ("R", RingKind::R)];
            let mut bases = serde_json::Map::new();
            for (name, kind) in spaces {
                let sp = rings::adjoint_space(kind, &u, None).map_err(|e| anyhow!("{e}"))?;
                let pairs: Vec<Value> = sp
                    .basis
                    .iter()
                    .map(|(a, b)| json!([matrix_entry(a), matrix_entry(b)]))
                    .collect();
                bases.insert(name.to_string(), Value::Array(pairs));
            }
            let cen = rings::centroid(&u).map_err(|e| anyhow!("{e}"))?;
            let cen_basis: Vec<Value> = cen
                .basis
                .iter()
                .map(|(a, b, h)| json!([matrix_entry(a), matrix_entry(b), matrix_entry(h)]))
                .collect();
            let rep = report::envelope(
                "rings",
                json!({
                    "dims": {"L": l, "M": m, "R": r, "T": t, "C": c},
                    "bases": Value::Object(bases),
                    "centroid_basis": cen_basis,
                }),
                None,
            );
            emit(&rep, fmt);
            Ok(0)
        }
        Command::Units { file, budget } => {
            let text = std::fs::read_to_string(&file)?;
            let v: Value = serde_json::from_str(&text)?;
            let alg = io::algebra_from_json(&v).map_err(|e| anyhow!("{e}"))?;
            let ug = units::unit_group(&alg, budget.get(units::UNIT_ENUM_BUDGET))
                .map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope(
                "units",
                json!({
                    "ambient_dim": alg.ambient_dim,
                    "algebra_dim": alg.dim(),
                    "unital": alg.unital,
                    "unit_order": ug.order.to_string(),
                    "monte_carlo": ug.monte_carlo,
                    "generator_count": ug.generators.len(),
                }),
                None,
            );
            emit(&rep, fmt);
            Ok(0)
        }
        Command::Isotopism {
            a,
            b,
            strategy,
            budget,
            seed,
        } => {
            let u = load_bimap(&a)?;
            let v = load_bimap(&b)?;
            let opts = CosetOptions {
                strategy: strategy.into(),
                gl_budget: budget.get(labels::GL_FILTER_BUDGET),
                unit_budget: budget.get(units::UNIT_ENUM_BUDGET),
                lift: LiftOptions {
                    random_tries: 16,
                    seed,
                },
            };
            let coset =
                galg::isotopism::isotopism_coset(&u, &v, &opts).map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope(
                "isotopism",
                json!({
                    "isotopic": !coset.is_empty(),
                    "method": "desk-scale-exact",
                    "order": coset.order.map(|o| o.to_string()),
                    "m_unit_order": coset.m_unit_order.to_string(),
                    "lift_count": coset.lift_count.to_string(),
                    "monte_carlo": coset.monte_carlo,
                    "representative": coset.representative.as_ref().map(|h| json!({
                        "f2": matrix_entry(&h.f2),
                        "f1": matrix_entry(&h.f1),
                        "f0": matrix_entry(&h.f0),
                    })),
                }),
                Some(seed),
            );
            emit(&rep, fmt);
            Ok(if coset.is_empty() { EXIT_EMPTY } else { 0 })
        }
        Command::GradedIso {
            a,
            b,
            layers,
            seed,
            budget,
        } => {
            let aa = load_graded(&a)?;
            let bb = load_graded(&b)?;
            let layer_choice = if layers == "auto" {
                None
            } else {
                let deg: galg::graded::Degree = layers
                    .split(',')
                    .map(|p| p.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| anyhow!("bad --layers value"))?;
                Some(vec![deg])
            };
            let opts = GradedIsoOptions {
                coset: CosetOptions {
                    lift: LiftOptions {
                        random_tries: 16,
                        seed,
                    },
                    ..CosetOptions::default()
                },
                layers: layer_choice,
                enum_budget: budget.get(1_000_000),
                unit_budget: budget.get(units::UNIT_ENUM_BUDGET),
            };
            let coset = galg::graded::graded_isomorphism_coset(&aa, &bb, &opts)
                .map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope(
                "graded-iso",
                json!({
                    "isomorphic": coset.representative.is_some(),
                    "order": coset.order.to_string(),
                    "layer": coset.layer,
                    "candidates_examined": coset.candidates_examined.to_string(),
                    "representative": coset.representative.as_ref().map(|g| {
                        let maps: serde_json::Map<String, Value> = g
                            .maps
                            .iter()
                            .map(|(d, m)| (format!("{d:?}"), matrix_entry(m)))
                            .collect();
                        Value::Object(maps)
                    }),
                }),
                Some(seed),
            );
            emit(&rep, fmt);
            Ok(if coset.representative.is_some() {
                0
            } else {
                EXIT_EMPTY
            })
        }
        Command::Labels {
            file,
            lines,
            fingerprint,
        } => {
            let u = load_bimap(&file)?;
            let rep = report::envelope(
                "labels",
                experiments::geometry_report(&u, lines, fingerprint)?,
                None,
            );
            emit(&rep, fmt);
            Ok(0)
        }
        Command::PseudoIsometry {
            a,
            b,
            strategy,
            budget,
            seed,
        } => {
            let u = HermitianBimap::detect(load_bimap(&a)?).map_err(|e| anyhow!("{e}"))?;
            let v = HermitianBimap::detect(load_bimap(&b)?).map_err(|e| anyhow!("{e}"))?;
            let mut opts = PseudoOptions {
                strategy: strategy.into(),
                gl_budget: budget.get(labels::GL_FILTER_BUDGET),
                ..PseudoOptions::default()
            };
            opts.isometry.seed = seed;
            let coset = galg::hermitian::pseudo_isometry_coset(&u, &v, &opts)
                .map_err(|e| anyhow!("{e}"))?;
            let empty = coset.representative.is_none();
            let rep = report::envelope(
                "pseudo-isometry",
                json!({
                    "pseudo_isometric": !empty,
                    "method": "desk-scale-exact",
                    "candidate_count": coset.candidate_count.to_string(),
                    "lift_count": coset.lift_count.to_string(),
                    "isometry_group_order": coset.isometry_group_order.map(|o| o.to_string()),
                    "order": coset.order.map(|o| o.to_string()),
                    "representative": coset.representative.as_ref().map(|(f, f0)| json!({
                        "f": matrix_entry(f),
                        "f0": matrix_entry(f0),
                    })),
                }),
                Some(seed),
            );
            emit(&rep, fmt);
            Ok(if empty { EXIT_EMPTY } else { 0 })
        }
        Command::IsometryGroup {
            file,
            method,
            budget,
        } => {
            let u = HermitianBimap::detect(load_bimap(&file)?).map_err(|e| anyhow!("{e}"))?;
            let m = match method {
                MethodArg::Adjoint => IsometryMethod::AdjointUnitary,
                MethodArg::Gl => IsometryMethod::ExhaustiveGl,
            };
            let g = galg::hermitian::isometry_group(
                &u,
                m,
                budget.get(galg::hermitian::UNITARY_ENUM_BUDGET),
            )
            .map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope(
                "isometry-group",
                json!({
                    "order": g.order.to_string(),
                    "generator_count": g.generators.len(),
                    "method": match g.method {
                        IsometryMethod::AdjointUnitary => "adjoint-unitary",
                        IsometryMethod::ExhaustiveGl => "exhaustive-gl",
                    },
                }),
                None,
            );
            emit(&rep, fmt);
            Ok(0)
        }
        Command::Gen(cmd) => run_gen(cmd, fmt),
        Command::Oracle(cmd) => run_oracle(cmd, fmt),
        Command::Experiment(cmd) => {
            let rep = match cmd {
                ExperimentCommand::Table1 {
                    p,
                    k,
                    e,
                    trials,
                    seed,
                } => experiments::table1(p, k, e, trials, seed)?,
                ExperimentCommand::Table2 {
                    d,
                    p,
                    e,
                    trials,
                    seed,
                } => experiments::table2(d, p, e, trials, seed)?,
            };
            emit(&rep, fmt);
            Ok(0)
        }
        Command::Figure2 => {
            let rep = experiments::figure2()?;
            emit(&rep, fmt);
            Ok(0)
        }
    }
}

fn run_gen(cmd: GenCommand, fmt: Format) -> anyhow::Result<i32> {
    match cmd {
        GenCommand::Heisenberg { n, p, out } => {
            let f = Field::prime(p).map_err(|e| anyhow!("{e}"))?;
            let h = galg::gen::heisenberg(n, &f).map_err(|e| anyhow!("{e}"))?;
            write_or_print(out.as_ref(), &io::bimap_to_json(&h), fmt)?;
            Ok(0)
        }
        GenCommand::TwistedHeisenberg {
            p,
            k,
            sigma,
            e,
            seed,
            out,
        } => {
            let th =
                galg::gen::twisted_heisenberg(p, k, sigma, seed).map_err(|e| anyhow!("{e}"))?;
            let bimap = match e {
                Some(e) => galg::gen::project_random(&th.bimap, e, galg::gen::split_seed(seed, 1))
                    .map_err(|er| anyhow!("{er}"))?,
                None => th.bimap.clone(),
            };
            let mut v = io::bimap_to_json(&bimap);
            v["meta"] = json!({
                "albert_constant": th.albert_constant,
                "sigma_exp": th.sigma_exp,
                "seed": seed,
            });
            write_or_print(out.as_ref(), &v, fmt)?;
            Ok(0)
        }
        GenCommand::Random2 { d, p, e, seed, out } => {
            let u =
                galg::gen::random_alternating_bimap(d, p, e, seed).map_err(|e| anyhow!("{e}"))?;
            write_or_print(out.as_ref(), &io::bimap_to_json(&u), fmt)?;
            Ok(0)
        }
        GenCommand::Dense {
            dims,
            q,
            thin_seed,
            out,
        } => {
            let dims: Vec<usize> = dims
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| anyhow!("bad --dims"))?;
            let (a, dense) =
                galg::gen::dense_lie(&dims, q, thin_seed).map_err(|e| anyhow!("{e}"))?;
            let mut v = io::graded_to_json(&a);
            v["meta"] = json!({"dense": dense, "thin_seed": thin_seed});
            write_or_print(out.as_ref(), &v, fmt)?;
            Ok(0)
        }
    }
}

fn run_oracle(cmd: OracleCommand, fmt: Format) -> anyhow::Result<i32> {
    match cmd {
        OracleCommand::Isotopism { a, b, budget } => {
            let u = load_bimap(&a)?;
            let v = load_bimap(&b)?;
            let isos = oracle::brute_isotopisms(&u, &v, budget.get(oracle::ORACLE_BUDGET))
                .map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope(
                "oracle-isotopism",
                json!({"count": isos.len(), "isotopic": !isos.is_empty()}),
                None,
            );
            emit(&rep, fmt);
            Ok(if isos.is_empty() { EXIT_EMPTY } else { 0 })
        }
        OracleCommand::GradedIso { a, b, budget } => {
            let aa = load_graded(&a)?;
            let bb = load_graded(&b)?;
            let isos =
                oracle::brute_graded_isomorphisms(&aa, &bb, budget.get(oracle::ORACLE_BUDGET))
                    .map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope(
                "oracle-graded-iso",
                json!({"count": isos.len(), "isomorphic": !isos.is_empty()}),
                None,
            );
            emit(&rep, fmt);
            Ok(if isos.is_empty() { EXIT_EMPTY } else { 0 })
        }
        OracleCommand::Isometries { a, b, budget } => {
            let u = load_bimap(&a)?;
            let v = load_bimap(&b)?;
            let h = Matrix::identity(u.field.clone(), u.dims.2);
            let isos = oracle::brute_isometries(&u, &v, &h, budget.get(oracle::ORACLE_BUDGET))
                .map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope("oracle-isometries", json!({"count": isos.len()}), None);
            emit(&rep, fmt);
            Ok(if isos.is_empty() { EXIT_EMPTY } else { 0 })
        }
        OracleCommand::PseudoIsometries { a, b, budget } => {
            let u = load_bimap(&a)?;
            let v = load_bimap(&b)?;
            let isos = oracle::brute_pseudo_isometries(&u, &v, budget.get(oracle::ORACLE_BUDGET))
                .map_err(|e| anyhow!("{e}"))?;
            let rep = report::envelope(
                "oracle-pseudo-isometries",
                json!({"count": isos.len()}),
                None,
            );
            emit(&rep, fmt);
            Ok(if isos.is_empty() { EXIT_EMPTY } else { 0 })
        }
    }
}
