//! Command-line interface over the structure library.
//!
//! JSON files in, line-oriented canonical text (or JSON with `--json`)
//! out. Exit codes: 0 = computed or positive decision, 1 = invalid input
//! (validation report on stderr), 2 = decidable negative ("none"/"false").

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cms_core::bilipschitz::{canonical_pattern, dominates, optimal_distortion, Distortion};
use cms_core::embeddings::kuratowski_embed;
use cms_core::error::{Error, Result};
use cms_core::gen;
use cms_core::groups::{
    alexandrov_structure, decide_translation_equiv, roelcke_structure, translation_structure,
    weighted_word_metric, FiniteGroup, LeftInvariantMetric,
};
use cms_core::heaps::{group_from_heap, heap_from_group, subheaps};
use cms_core::isometry::{brute_force_isometric_iso, decide_isometric_iso, full_signature};
use cms_core::json;
use cms_core::parse_rat;
use cms_core::stone::{clopen_algebra, stone_decode};
use cms_core::structure::MetricStructure;

#[derive(Parser)]
#[command(
    name = "cms",
    version,
    about = "Finite compact metric structures toolbox"
)]
struct Cli {
    /// Emit machine-readable JSON instead of plain text where both exist.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide isometric isomorphism of two structures.
    Isometry {
        x: String,
        y: String,
        /// Use the exhaustive brute-force oracle instead of the decider.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the canonical ordering-quantified signature of a structure.
    Signature { x: String },
    /// Exact optimal bi-Lipschitz distortion between two structures.
    Distortion { x: String, y: String },
    /// Test perturbation-invariant dominance at a constant.
    Dominates {
        x: String,
        y: String,
        /// Dominance constant (rational, >= 1).
        #[arg(long)]
        c: String,
        /// JSON file with a pattern list.
        #[arg(long, conflicts_with = "canonical")]
        patterns: Option<String>,
        /// Use the canonical pattern read off the left structure.
        #[arg(long)]
        canonical: bool,
    },
    /// Group encodings.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Heap operations.
    #[command(subcommand)]
    Heap(HeapCommand),
    /// Clopen-algebra encoding and decoding.
    #[command(subcommand)]
    Stone(StoneCommand),
    /// Embed a structure into the truncated Hilbert cube.
    Embed {
        x: String,
        /// Number of coordinates (at least the point count).
        #[arg(long)]
        dims: usize,
    },
    /// Multiply all distances by a positive rational (e.g. to bring the
    /// diameter within 1 before embedding).
    Scale {
        x: String,
        #[arg(long)]
        factor: String,
    },
    /// Generate a seeded random structure corpus (one JSON per line).
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        /// Relation signature, e.g. `R:2,P:1`.
        #[arg(long, default_value = "")]
        relations: String,
        #[arg(long, default_value_t = 0.3)]
        tuple_prob: f64,
    },
}

#[derive(Args)]
struct MetricArgs {
    /// Generators as comma-separated element indices, e.g. `1,4`.
    #[arg(long, value_delimiter = ',')]
    gens: Vec<usize>,
    /// Weights parallel to --gens, as rationals.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<String>,
    /// Explicit length function (one rational per element) instead.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["gens", "weights"])]
    lengths: Vec<String>,
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Roelcke-metric structure of a group with a left-invariant metric.
    Roelcke {
        group: String,
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Weighted word metric as a length function.
    Wordmetric {
        group: String,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        weights: Vec<String>,
    },
    /// One-point compactification of a pointed metric structure.
    Alexandrov {
        space: String,
        #[arg(long)]
        base: usize,
    },
    /// Decide whether a left translation maps subset A onto subset B.
    Translate {
        group: String,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long = "A", value_delimiter = ',', num_args = 0.., default_value = "")]
        set_a: Vec<String>,
        #[arg(long = "B", value_delimiter = ',', num_args = 0.., default_value = "")]
        set_b: Vec<String>,
    },
}

#[derive(Subcommand)]
enum HeapCommand {
    /// Check the heap axioms of a table.
    Validate { heap: String },
    /// Heap of a group: `[x,y,z] = x y^-1 z`.
    FromGroup { group: String },
    /// Group of a heap at a chosen identity.
    ToGroup {
        heap: String,
        #[arg(long)]
        e: usize,
    },
    /// List all subheaps (cosets).
    Subheaps { heap: String },
}

#[derive(Subcommand)]
enum StoneCommand {
    /// Encode a structure as its clopen algebra.
    Encode { x: String },
    /// Decode an algebra back to a discrete structure.
    Decode { algebra: String },
}

fn read_structure(path: &str) -> Result<MetricStructure> {
    json::structure_from_json(&read(path)?)
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))
}

fn parse_index_set(items: &[String]) -> Result<BTreeSet<usize>> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad element index {s:?}")))
        })
        .collect()
}

fn left_invariant_metric(g: &FiniteGroup, args: &MetricArgs) -> Result<LeftInvariantMetric> {
    if !args.lengths.is_empty() {
        let lengths = args
            .lengths
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()?;
        return LeftInvariantMetric::new(g, lengths);
    }
    let gens = json::weighted_generators_from_lists(g, &args.gens, &args.weights)?;
    weighted_word_metric(g, &gens)
}

fn bijection_line(f: &[usize]) -> String {
    f.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Outcome of a command: what to print and how to exit.
enum Outcome {
    Computed(String),
    Negative(String),
}

use Outcome::{Computed, Negative};

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Isometry { x, y, oracle } => {
            let sx = read_structure(x)?;
            let sy = read_structure(y)?;
            let witness = if *oracle {
                brute_force_isometric_iso(&sx, &sy)?
            } else {
                decide_isometric_iso(&sx, &sy)?
            };
            Ok(match witness {
                Some(f) if cli.json => Computed(serde_json::json!({ "witness": f }).to_string()),
                Some(f) => Computed(bijection_line(&f)),
                None if cli.json => Negative(serde_json::json!({ "witness": null }).to_string()),
                None => Negative("none".to_string()),
            })
        }
        Command::Signature { x } => {
            let s = read_structure(x)?;
            Ok(Computed(json::signature_to_json(&full_signature(&s))))
        }
        Command::Distortion { x, y } => {
            let sx = read_structure(x)?;
            let sy = read_structure(y)?;
            let d = optimal_distortion(&sx, &sy)?;
            Ok(match d {
                Distortion::Finite(_) if cli.json => {
                    Computed(serde_json::json!({ "distortion": d.to_string() }).to_string())
                }
                Distortion::Finite(_) => Computed(d.to_string()),
                Distortion::None if cli.json => {
                    Negative(serde_json::json!({ "distortion": null }).to_string())
                }
                Distortion::None => Negative("none".to_string()),
            })
        }
        Command::Dominates {
            x,
            y,
            c,
            patterns,
            canonical,
        } => {
            let sx = read_structure(x)?;
            let sy = read_structure(y)?;
            let c = parse_rat(c)?;
            let pattern_list = match (patterns, canonical) {
                (Some(path), _) => json::patterns_from_json(&read(path)?)?,
                (None, true) => vec![canonical_pattern(&sx)],
                (None, false) => {
                    return Err(Error::InvalidParameter(
                        "pass --patterns <file> or --canonical".into(),
                    ))
                }
            };
            let held = dominates(&sx, &sy, &c, &pattern_list)?;
            let text = if cli.json {
                serde_json::json!({ "dominates": held }).to_string()
            } else {
                held.to_string()
            };
            Ok(if held { Computed(text) } else { Negative(text) })
        }
        Command::Group(group_command) => run_group(cli, group_command),
        Command::Heap(heap_command) => run_heap(cli, heap_command),
        Command::Stone(stone_command) => match stone_command {
            StoneCommand::Encode { x } => {
                let s = read_structure(x)?;
                Ok(Computed(json::boolean_to_json(&clopen_algebra(&s)?)))
            }
            StoneCommand::Decode { algebra } => {
                let a = json::boolean_from_json(&read(algebra)?)?;
                Ok(Computed(json::structure_to_json(&stone_decode(&a)?)))
            }
        },
        Command::Embed { x, dims } => {
            let s = read_structure(x)?;
            let image = kuratowski_embed(&s, *dims)?;
            Ok(Computed(json::cube_points_to_json(&image)))
        }
        Command::Scale { x, factor } => {
            let s = read_structure(x)?;
            let factor = parse_rat(factor)?;
            Ok(Computed(json::structure_to_json(&s.scale_metric(&factor)?)))
        }
        Command::Corpus {
            seed,
            count,
            max_points,
            relations,
            tuple_prob,
        } => {
            if !(0.0..=1.0).contains(tuple_prob) {
                return Err(Error::InvalidParameter(format!(
                    "--tuple-prob must lie in [0, 1], got {tuple_prob}"
                )));
            }
            let signature = parse_signature(relations)?;
            let mut rng = gen::rng_from_seed(*seed);
            let mut lines = Vec::with_capacity(*count);
            for _ in 0..*count {
                let s = gen::random_structure(&mut rng, *max_points, &signature, *tuple_prob);
                lines.push(json::structure_to_json(&s));
            }
            Ok(Computed(lines.join("\n")))
        }
    }
}

fn parse_signature(spec: &str) -> Result<Vec<(String, usize)>> {
    spec.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (name, arity) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidParameter(format!("bad relation spec {part:?}")))?;
            let arity = arity
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad arity in {part:?}")))?;
            Ok((name.trim().to_string(), arity))
        })
        .collect()
}

fn run_group(cli: &Cli, command: &GroupCommand) -> Result<Outcome> {
    match command {
        GroupCommand::Roelcke { group, metric } => {
            let g = json::group_from_json(&read(group)?)?;
            let d = left_invariant_metric(&g, metric)?;
            Ok(Computed(json::structure_to_json(&roelcke_structure(
                &g, &d,
            )?)))
        }
        GroupCommand::Wordmetric {
            group,
            gens,
            weights,
        } => {
            let g = json::group_from_json(&read(group)?)?;
            let generators = json::weighted_generators_from_lists(&g, gens, weights)?;
            let rho = weighted_word_metric(&g, &generators)?;
            Ok(Computed(json::word_metric_to_json(&rho)))
        }
        GroupCommand::Alexandrov { space, base } => {
            let p = read_structure(space)?;
            Ok(Computed(json::structure_to_json(&alexandrov_structure(
                &p, *base,
            )?)))
        }
        GroupCommand::Translate {
            group,
            a,
            b,
            set_a,
            set_b,
        } => {
            let g = json::group_from_json(&read(group)?)?;
            let subset_a = parse_index_set(set_a)?;
            let subset_b = parse_index_set(set_b)?;
            // Exercise the structure encoding on both sides before deciding.
            translation_structure(&g, *a, *b, &subset_a)?;
            match decide_translation_equiv(&g, *a, *b, &subset_a, &subset_b)? {
                Some(t) if cli.json => {
                    Ok(Computed(serde_json::json!({ "witness": t }).to_string()))
                }
                Some(t) => Ok(Computed(t.to_string())),
                None if cli.json => {
                    Ok(Negative(serde_json::json!({ "witness": null }).to_string()))
                }
                None => Ok(Negative("none".to_string())),
            }
        }
    }
}

fn run_heap(cli: &Cli, command: &HeapCommand) -> Result<Outcome> {
    match command {
        HeapCommand::Validate { heap } => {
            // The validating constructor carries the report as the error
            // payload for bad tables.
            json::heap_from_json(&read(heap)?)?;
            Ok(Computed("ok".to_string()))
        }
        HeapCommand::FromGroup { group } => {
            let g = json::group_from_json(&read(group)?)?;
            Ok(Computed(json::heap_to_json(&heap_from_group(&g))))
        }
        HeapCommand::ToGroup { heap, e } => {
            let h = json::heap_from_json(&read(heap)?)?;
            Ok(Computed(json::group_to_json(&group_from_heap(&h, *e)?)))
        }
        HeapCommand::Subheaps { heap } => {
            let h = json::heap_from_json(&read(heap)?)?;
            let subs = subheaps(&h)?;
            if cli.json {
                Ok(Computed(serde_json::to_string(&subs).expect("serializes")))
            } else {
                let lines: Vec<String> = subs.iter().map(|s| bijection_line(s)).collect();
                Ok(Computed(lines.join("\n")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Computed(text)) => {
            println!("{text}");
            ExitCode::from(0)
        }
        Ok(Negative(text)) => {
            println!("{text}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
