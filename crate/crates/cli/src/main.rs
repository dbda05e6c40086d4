use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use domtree::audit::{self, Finding};
use domtree::constructions::construct;
use domtree::export::{self, Format};
use domtree::formulas::FormulaError;
use domtree::harness::{self, Header, Report, VerifyOptions};
use domtree::solver::{Outcome, Solver, SolverConfig};
use domtree::{check, generate, Family, FamilySpec, Graph, Variant};

#[derive(Parser)]
#[command(
    name = "domtree",
    version,
    about = "Domination parameters of hypertrees and sibling trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family member as DOT, JSON or an edge list.
    Generate {
        #[command(flatten)]
        graph: SpecArgs,
        #[arg(long, default_value = "dot")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact minimum set for one variant.
    Solve {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        variant: Variant,
        #[command(flatten)]
        solver: SolverArgs,
        /// Report the lexicographically least minimum set.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        seedless: bool,
    },
    /// The explicit set of closed-form size.
    Construct {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        variant: Variant,
        /// Also run the checker on the set.
        #[arg(long)]
        check: bool,
    },
    /// Compare closed forms, constructions and exact search.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "ht,st")]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_value = "all")]
        variants: Vec<String>,
        #[arg(long, default_value_t = 1)]
        min_level: u32,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[command(flatten)]
        solver: SolverArgs,
        /// Largest graph handed to the exact solver.
        #[arg(long, default_value_t = 31)]
        solver_max_vertices: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Add one to the formula value at family:variant:n (harness self-test).
        #[arg(long, hide = true)]
        perturb_formula: Option<String>,
    },
    /// Closed-form values as CSV.
    Table {
        #[arg(long, default_value_t = 10)]
        max_n: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Test level-distribution claims on every minimum set.
    Audit {
        /// Claim id, or "all".
        #[arg(long, default_value = "all")]
        claim: String,
        #[arg(long, value_delimiter = ',', default_value = "ht,st")]
        families: Vec<Family>,
        #[arg(long, default_value_t = 2)]
        min_level: u32,
        #[arg(long, default_value_t = 3)]
        max_level: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: AuditFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    levels: u32,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, required_unless_present = "input", requires = "levels")]
    family: Option<Family>,
    #[arg(long)]
    levels: Option<u32>,
    /// A JSON graph document instead of --family/--levels.
    #[arg(long, conflicts_with_all = ["family", "levels"])]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// Seconds before falling back to bounds.
    #[arg(long, env = "DOMTREE_TIME_LIMIT")]
    time_limit: Option<u64>,
    #[arg(long, env = "DOMTREE_WORKERS", default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditFormat {
    Json,
    Markdown,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        match (&self.input, self.family, self.levels) {
            (Some(path), _, _) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(export::from_json(&text)?)
            }
            (None, Some(family), Some(n)) => Ok(generate(FamilySpec::new(family, n)?)?),
            _ => bail!("pass --family and --levels, or --input"),
        }
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn spec_json(g: &Graph) -> Value {
    match g.origin() {
        Some(spec) => json!({ "family": spec.family, "n": spec.n, "vertices": g.vertex_count() }),
        None => json!({ "family": null, "vertices": g.vertex_count() }),
    }
}

fn parse_variants(names: &[String]) -> Result<Vec<Variant>> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(Variant::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| n.parse::<Variant>().map_err(|e| anyhow!(e)))
        .collect()
}

fn parse_perturbation(text: &str) -> Result<(Family, Variant, u32)> {
    let parts: Vec<&str> = text.split(':').collect();
    let [f, v, n] = parts[..] else {
        bail!("--perturb-formula expects family:variant:n")
    };
    Ok((f.parse()?, v.parse()?, n.parse()?))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            graph,
            format,
            output,
        } => {
            let g = generate(FamilySpec::new(graph.family, graph.levels)?)?;
            emit(&export::render(&g, format), &output)?;
        }
        Command::Solve {
            graph,
            variant,
            solver,
            seedless,
        } => {
            let g = graph.load()?;
            let config = SolverConfig {
                time_limit: solver.time_limit.map(Duration::from_secs),
                workers: solver.workers.max(1),
                deterministic: seedless,
            };
            let r = Solver::new(config).solve(&g, variant)?;
            let header = Header::new(
                "solve",
                json!({ "graph": spec_json(&g), "variant": variant }),
            );
            let (lower, upper) = match r.outcome {
                Outcome::BoundOnly { lower, upper } => (Some(lower), Some(upper)),
                _ => (None, None),
            };
            let body = json!({
                "header": header,
                "variant": variant,
                "value": r.value(),
                "outcome": r.outcome,
                "lower": lower,
                "upper": upper,
                "witness": r.witness_set,
                "lex_least": r.lex_least,
            });
            print!("{}", pretty(&body));
        }
        Command::Construct {
            graph,
            variant,
            check: run_check,
        } => {
            let g = graph.load()?;
            let spec = g
                .origin()
                .ok_or_else(|| anyhow!("constructions need a family graph"))?;
            let set = construct(spec.family, variant, spec.n)?;
            let mut body = json!({
                "header": Header::new("construct", json!({ "graph": spec_json(&g), "variant": variant })),
                "variant": variant,
                "size": set.len(),
                "set": set,
            });
            if run_check {
                let cert = check(&g, &set, variant)?;
                body["valid"] = json!(cert.valid);
                body["witnesses"] = json!(cert.witnesses);
            }
            print!("{}", pretty(&body));
        }
        Command::Verify {
            families,
            variants,
            min_level,
            max_n,
            solver,
            solver_max_vertices,
            format,
            output,
            perturb_formula,
        } => {
            let opts = VerifyOptions {
                families,
                variants: parse_variants(&variants)?,
                min_n: min_level,
                max_n,
                time_limit: Some(Duration::from_secs(solver.time_limit.unwrap_or(10))),
                solver_max_vertices,
                workers: solver.workers.max(1),
            };
            let bump = perturb_formula
                .as_deref()
                .map(parse_perturbation)
                .transpose()?;
            let formula = move |f: Family, v: Variant, n: u32| -> Result<_, FormulaError> {
                let x = harness::standard_formula(f, v, n)?;
                Ok(if bump == Some((f, v, n)) { x + 1u32 } else { x })
            };
            let rows = harness::verify(&opts, &formula)?;
            let text = match format {
                TableFormat::Csv => harness::verification_csv(&rows),
                TableFormat::Json => {
                    let params = json!({
                        "families": opts.families,
                        "variants": opts.variants,
                        "min_n": opts.min_n,
                        "max_n": opts.max_n,
                        "time_limit_secs": opts.time_limit.map(|d| d.as_secs()),
                        "solver_max_vertices": opts.solver_max_vertices,
                    });
                    pretty(&Report {
                        header: Header::new("verify", params),
                        results: &rows,
                    })
                }
            };
            emit(&text, &output)?;
            if harness::any_mismatch(&rows) {
                eprintln!("verify: mismatch found");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Table {
            max_n,
            format,
            output,
        } => {
            let rows = harness::table(max_n)?;
            let text = match format {
                TableFormat::Csv => harness::table_csv(&rows),
                TableFormat::Json => pretty(&Report {
                    header: Header::new("table", json!({ "max_n": max_n })),
                    results: &rows,
                }),
            };
            emit(&text, &output)?;
        }
        Command::Audit {
            claim,
            families,
            min_level,
            max_level,
            format,
            output,
        } => {
            let findings: Vec<Finding> = if claim.eq_ignore_ascii_case("all") {
                audit::audit_all(&families, min_level..=max_level)?
            } else {
                audit::audit(&claim, &families, min_level..=max_level)?
            };
            let text = match format {
                AuditFormat::Markdown => audit::to_markdown(&findings),
                AuditFormat::Json => {
                    let params = json!({
                        "claim": claim,
                        "families": families,
                        "min_level": min_level,
                        "max_level": max_level,
                    });
                    pretty(&Report {
                        header: Header::new("audit", params),
                        results: &findings,
                    })
                }
            };
            emit(&text, &output)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
