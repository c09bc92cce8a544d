use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use reebspace::algebra::{homology, Coefficients};
use reebspace::branched::{collapse_to, CollapseGoal, CollapseOutcome, CollapseSettings};
use reebspace::cohomology::CohomologyRing;
use reebspace::reeb::{reeb_graph, VertexField};
use reebspace::verify::{
    disc_candidates, standard_flap_cases, standard_instances, verify_disc_candidate, verify_double_attachment,
    DiscCandidate, DoubleInstance, FlapCase, FlapPiece, HandleData, Report,
};
use reebspace::VertexId;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::recipe::{parse_recipe, recipe_from_value, Recipe};

#[derive(Debug, Parser)]
#[command(name = "reebspace", version, about = "Build and check simplicial Reeb-space models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Recipe (or bundle, for the verify commands) to read.
    #[arg(long, global = true)]
    pub recipe: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Coeff::Z)]
    pub coeff: Coeff,
    #[arg(long, global = true)]
    pub reduced: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 32)]
    pub restarts: u32,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Remove degree-2 nodes from Reeb graphs.
    #[arg(long = "smooth-degree-2", global = true)]
    pub smooth_degree_2: bool,
    /// Named subcomplex to collapse onto; a point when absent.
    #[arg(long, global = true)]
    pub target: Option<String>,
    /// Field file with a `values` array; otherwise the stored field `--field-name`.
    #[arg(long, global = true)]
    pub field: Option<PathBuf>,
    #[arg(long = "field-name", global = true, default_value = "height")]
    pub field_name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate a recipe and write the resulting model.
    Build,
    Homology,
    Cohomology,
    Reeb,
    /// Double-attachment homology, exactness, restriction and cup checks.
    VerifyThm5,
    /// Flap bouquets: collapses, homology sum and local structure.
    VerifyThm3,
    /// Disc-like branched surfaces collapsing to a point.
    VerifyFact3,
    Collapse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coeff {
    Z,
    Z2,
}

/// A finished report and whether every claim in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

impl Cli {
    fn settings(&self) -> CollapseSettings {
        CollapseSettings { seed: self.seed, restarts: self.restarts, budget: self.budget }
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Build => "build",
        Command::Homology => "homology",
        Command::Cohomology => "cohomology",
        Command::Reeb => "reeb",
        Command::VerifyThm5 => "verify-thm5",
        Command::VerifyThm3 => "verify-thm3",
        Command::VerifyFact3 => "verify-fact3",
        Command::Collapse => "collapse",
    }
}

/// A document and the directory relative paths inside it resolve against.
struct Source {
    value: Value,
    dir: PathBuf,
    digest: String,
}

fn read_source(path: &Path) -> Result<Source> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let value = serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Source {
        value,
        dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        digest: format!("{:x}", Sha256::digest(&bytes)),
    })
}

/// A recipe given inline or as a path relative to `dir`.
fn recipe_ref(v: &Value, dir: &Path) -> Result<Recipe> {
    match v {
        Value::String(p) => {
            let path = dir.join(p);
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_recipe(&text)?)
        }
        other => Ok(recipe_from_value(other)?),
    }
}

fn require_recipe(cli: &Cli) -> Result<Source> {
    match &cli.recipe {
        Some(p) => read_source(p),
        None => bail!("`{}` needs --recipe", command_name(cli.command)),
    }
}

fn claims_outcome(mut head: Value, report: &Report) -> Outcome {
    let body = report.to_json();
    head["pass"] = body["pass"].clone();
    head["claims"] = body["claims"].clone();
    Outcome { report: head, pass: report.passed() }
}

/// Runs one command and returns its report.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let source = match (&cli.recipe, cli.command) {
        (None, Command::VerifyThm5 | Command::VerifyThm3 | Command::VerifyFact3) => None,
        _ => Some(require_recipe(cli)?),
    };
    let head = json!({
        "command": command_name(cli.command),
        "recipe_digest": source.as_ref().map_or("builtin".to_string(), |s| s.digest.clone()),
        "seed": cli.seed,
    });
    match cli.command {
        Command::VerifyThm5 => verify_doubles(head, source.as_ref()),
        Command::VerifyThm3 => verify_flaps(head, source.as_ref(), cli.settings()),
        Command::VerifyFact3 => verify_discs(head, source.as_ref(), cli.settings()),
        _ => {
            let source = source.expect("recipe required");
            let model = recipe_from_value(&source.value)?.evaluate()?;
            let mut report = head;
            let c = &model.complex;
            let mut pass = true;
            match cli.command {
                Command::Build => {
                    report["model"] = model.to_json();
                    report["f_vector"] = json!(c.f_vector());
                    report["euler_characteristic"] = json!(c.euler_characteristic());
                }
                Command::Homology => {
                    let coefficients = match cli.coeff {
                        Coeff::Z => Coefficients::Integers,
                        Coeff::Z2 => Coefficients::Mod2,
                    };
                    let groups = homology(c, coefficients, cli.reduced);
                    report["coefficients"] = json!(coefficients);
                    report["reduced"] = json!(cli.reduced);
                    report["ranks"] = json!(groups.iter().map(|g| g.rank).collect::<Vec<_>>());
                    report["groups"] = Value::Array(groups.iter().map(|g| g.to_json()).collect());
                }
                Command::Cohomology => {
                    report["ring"] = CohomologyRing::new(std::sync::Arc::new(c.clone())).ring_report();
                }
                Command::Reeb => {
                    let field = match &cli.field {
                        Some(path) => VertexField::from_json(c.clone(), &read_source(path)?.value)?,
                        None => VertexField::named(c.clone(), &cli.field_name)?,
                    };
                    let raw = reeb_graph(&field);
                    let graph = if cli.smooth_degree_2 { raw.smooth_degree_2() } else { raw.clone() };
                    report["raw_invariants"] = json!(raw.invariants());
                    report["graph"] = graph.to_json();
                    if cli.smooth_degree_2 {
                        report["note"] = json!(
                            "degree-2 nodes removed; this stands in for keeping only level components through critical points"
                        );
                    }
                }
                Command::Collapse => {
                    let goal = match &cli.target {
                        Some(label) => CollapseGoal::Subcomplex(c.subcomplex(label)?),
                        None => CollapseGoal::Point,
                    };
                    report["target"] = json!(cli.target.as_deref().unwrap_or("point"));
                    match collapse_to(c, goal, cli.settings())? {
                        CollapseOutcome::Certificate(cert) => {
                            pass = cert.verify(c).is_ok();
                            report["outcome"] = json!("certificate");
                            report["certificate"] = cert.to_json();
                        }
                        CollapseOutcome::Inconclusive { restarts, best_remaining, reason } => {
                            pass = false;
                            report["outcome"] = json!("inconclusive");
                            report["restarts"] = json!(restarts);
                            report["best_remaining"] = json!(best_remaining);
                            report["reason"] = json!(reason);
                        }
                    }
                }
                _ => unreachable!("verify commands handled above"),
            }
            report["pass"] = json!(pass);
            Ok(Outcome { report, pass })
        }
    }
}

fn verify_doubles(head: Value, source: Option<&Source>) -> Result<Outcome> {
    let instances: Vec<DoubleInstance> = match source {
        None => standard_instances()?,
        Some(s) => {
            let Some(items) = s.value.get("instances").and_then(Value::as_array) else {
                bail!("bundle needs an `instances` array");
            };
            items
                .iter()
                .enumerate()
                .map(|(i, item)| -> Result<DoubleInstance> {
                    let label = item.get("label").and_then(Value::as_str).unwrap_or("instance").to_string();
                    let base = recipe_ref(item.get("base").context(format!("instance {i}: missing `base`"))?, &s.dir)?
                        .evaluate()?;
                    let data: HandleData = serde_json::from_value(
                        item.get("handle_data").cloned().context(format!("instance {i}: missing `handle_data`"))?,
                    )?;
                    let subs: Vec<String> = serde_json::from_value(
                        item.get("submanifolds").cloned().context(format!("instance {i}: missing `submanifolds`"))?,
                    )?;
                    let subs: Vec<&str> = subs.iter().map(String::as_str).collect();
                    Ok(DoubleInstance::new(&label, data, &base.complex, &subs)?)
                })
                .collect::<Result<_>>()?
        }
    };
    let mut report = Report::new();
    for inst in &instances {
        report.extend(verify_double_attachment(inst)?);
    }
    Ok(claims_outcome(head, &report))
}

fn verify_flaps(head: Value, source: Option<&Source>, settings: CollapseSettings) -> Result<Outcome> {
    let cases = match source {
        None => standard_flap_cases()?,
        Some(s) => {
            let Some(items) = s.value.get("cases").and_then(Value::as_array) else {
                bail!("bundle needs a `cases` array");
            };
            let mut cases = Vec::new();
            for (i, item) in items.iter().enumerate() {
                let mut pieces = Vec::new();
                for p in item.get("pieces").and_then(Value::as_array).into_iter().flatten() {
                    let base = recipe_ref(p.get("base").context(format!("case {i}: piece without `base`"))?, &s.dir)?;
                    let sigma =
                        p.get("sigma").and_then(Value::as_str).context(format!("case {i}: piece without `sigma`"))?;
                    pieces.push(FlapPiece { base: base.evaluate()?.complex, sigma: sigma.into() });
                }
                let last = recipe_ref(item.get("last").context(format!("case {i}: missing `last`"))?, &s.dir)?;
                let basepoints: Vec<VertexId> = serde_json::from_value(
                    item.get("basepoints").cloned().context(format!("case {i}: missing `basepoints`"))?,
                )?;
                cases.push(FlapCase {
                    label: item.get("label").and_then(Value::as_str).unwrap_or("case").into(),
                    pieces,
                    last: last.evaluate()?.complex,
                    basepoints,
                });
            }
            cases
        }
    };
    let mut report = Report::new();
    for case in &cases {
        report.extend(case.verify(settings)?);
    }
    Ok(claims_outcome(head, &report))
}

fn verify_discs(head: Value, source: Option<&Source>, settings: CollapseSettings) -> Result<Outcome> {
    let candidates: Vec<DiscCandidate> = match source {
        None => disc_candidates()?,
        Some(s) => {
            let Some(items) = s.value.get("candidates").and_then(Value::as_array) else {
                bail!("bundle needs a `candidates` array");
            };
            items
                .iter()
                .enumerate()
                .map(|(i, item)| -> Result<DiscCandidate> {
                    let recipe =
                        recipe_ref(item.get("recipe").context(format!("candidate {i}: missing `recipe`"))?, &s.dir)?;
                    Ok(DiscCandidate {
                        label: item.get("label").and_then(Value::as_str).unwrap_or("candidate").into(),
                        model: recipe.evaluate()?,
                        simply_connected: recipe.simply_connected_by_construction(),
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    let mut report = Report::new();
    for c in &candidates {
        report.extend(verify_disc_candidate(c, settings)?);
    }
    Ok(claims_outcome(head, &report))
}
