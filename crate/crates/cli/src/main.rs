use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use isog::arena::{interpret_type, Arena};
use isog::correspondence::{decode_term, encode_term};
use isog::export::{
    arena_dot, augmentation_dot, augmentation_from_json, augmentation_to_json, strategy_from_json, strategy_to_json,
    AugmentationJson, StrategyJson,
};
use isog::interp::{bag_laws, generate_corpus, interpret_term, soundness};
use isog::rewrite::{normalize_with, Order};
use isog::strategy::laws::{algebraic_laws, check_laws};
use isog::strategy::{Interface, Strategy};
use isog::syntax::{parse_context, parse_term, parse_type, print_sum, print_term, Context, SimpleType, Term, TermSum};
use isog::typing::typecheck_term;

#[derive(Parser)]
#[command(name = "isog", version, about = "Resource terms, their normal forms and their strategies")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TermArgs {
    /// A resource term, e.g. `(\x:o. f[x][x])[y, z]`.
    term: String,
    /// Typing context, e.g. `f:o->o->o, y:o`.
    #[arg(long, default_value = "")]
    ctx: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Outermost,
    Innermost,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term and print it back.
    Parse(TermArgs),
    /// Print the type of a term.
    Typecheck(TermArgs),
    /// Print the normal form of a term as a sum.
    Normalize {
        #[command(flatten)]
        t: TermArgs,
        #[arg(long, default_value_t = isog::rewrite::DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, value_enum, default_value = "outermost")]
        order: OrderArg,
    },
    /// Encode a normal term as an augmentation.
    Encode(TermArgs),
    /// Decode an augmentation (JSON file, `-` for stdin) into a term.
    Decode {
        file: String,
        /// Names for the left side of the arena, e.g. `f:o->o->o, y:o`.
        #[arg(long)]
        ctx: Option<String>,
    },
    /// Interpret a term as a strategy.
    Interpret(TermArgs),
    /// Compose two strategies given as JSON files: `outer ∘ inner`.
    Compose { outer: String, inner: String },
    /// Check the structural laws on one arena up to a window.
    CheckLaws {
        #[arg(long, default_value_t = 6)]
        window: usize,
        #[arg(long, default_value = "o")]
        arena: String,
    },
    /// Compare interpretations with encoded normal forms on a random corpus.
    Soundness {
        #[arg(long, default_value_t = 500)]
        corpus: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 14)]
        max_size: usize,
    },
    /// Render an arena, an augmentation or a normal term as DOT.
    ExportDot {
        /// Type whose arena is drawn.
        #[arg(long, conflicts_with_all = ["augmentation", "term"])]
        r#type: Option<String>,
        /// Augmentation JSON file.
        #[arg(long, conflicts_with = "term")]
        augmentation: Option<String>,
        /// Normal term whose encoding is drawn.
        #[arg(long)]
        term: Option<String>,
        #[arg(long, default_value = "")]
        ctx: String,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn parse_term_args(t: &TermArgs) -> Result<(Context, Term)> {
    let ctx = parse_context(&t.ctx).map_err(|e| anyhow!("context: {e}"))?;
    let term = parse_term(&t.term).map_err(|e| anyhow!("term: {e}"))?;
    Ok((ctx, term))
}

fn typed(t: &TermArgs) -> Result<(Context, Term, SimpleType)> {
    let (ctx, term) = parse_term_args(t)?;
    let ty = typecheck_term(&ctx, &term).map_err(|e| anyhow!("type error: {e}"))?;
    Ok((ctx, term, ty))
}

fn sum_json(s: &TermSum) -> serde_json::Value {
    json!(s.iter().map(|(t, c)| json!({"term": print_term(t), "coefficient": c.to_string()})).collect::<Vec<_>>())
}

fn print_strategy(s: &Strategy, as_json: bool) -> Result<()> {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&strategy_to_json(s))?);
    } else {
        print!("{s}");
    }
    Ok(())
}

fn load_strategy(path: &str) -> Result<Strategy> {
    let j: StrategyJson = serde_json::from_str(&read_input(path)?).with_context(|| format!("parsing {path}"))?;
    Ok(strategy_from_json(&j)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let as_json = cli.json;
    match cli.cmd {
        Cmd::Parse(t) => {
            let (_, term) = parse_term_args(&t)?;
            if as_json {
                println!("{}", json!({"term": print_term(&term), "size": term.size(), "normal": term.is_normal()}));
            } else {
                println!("{}", print_term(&term));
            }
        }
        Cmd::Typecheck(t) => {
            let (_, _, ty) = typed(&t)?;
            if as_json {
                println!("{}", json!({"type": ty.to_string()}));
            } else {
                println!("{ty}");
            }
        }
        Cmd::Normalize { t, fuel, order } => {
            let (_, term, _) = typed(&t)?;
            let order = match order {
                OrderArg::Outermost => Order::LeftmostOutermost,
                OrderArg::Innermost => Order::RightmostInnermost,
            };
            let nf = normalize_with(&TermSum::single(term), fuel, order)?;
            if as_json {
                println!("{}", json!({"normal_form": print_sum(&nf), "summands": sum_json(&nf)}));
            } else {
                println!("{}", print_sum(&nf));
            }
        }
        Cmd::Encode(t) => {
            let (ctx, term, _) = typed(&t)?;
            let (iso, ty) = encode_term(&ctx, &term)?;
            let iface = Interface::new(ctx.types(), vec![ty]);
            let j = augmentation_to_json(&iso.representative, &iface);
            if as_json {
                println!("{}", serde_json::to_string_pretty(&j)?);
            } else {
                println!("{} events on {}", iso.representative.len(), j.arena);
                println!("key {}", iso.key);
            }
        }
        Cmd::Decode { file, ctx } => {
            let j: AugmentationJson = serde_json::from_str(&read_input(&file)?).context("parsing augmentation")?;
            let (iface, q) = augmentation_from_json(&j)?;
            let [ty] = iface.right.as_slice() else {
                bail!("decoding needs exactly one type on the right");
            };
            let ctx = match ctx {
                Some(c) => parse_context(&c).map_err(|e| anyhow!("context: {e}"))?,
                None => {
                    let names: Vec<String> = iface.left.iter().map(|t| t.to_string()).collect();
                    parse_context(&names.join(", ")).map_err(|e| anyhow!("context: {e}"))?
                }
            };
            if ctx.types() != iface.left {
                bail!("context {ctx} does not match the arena {}", j.arena);
            }
            let term = decode_term(&ctx, ty, &q)?;
            if as_json {
                println!("{}", json!({"term": print_term(&term), "type": ty.to_string()}));
            } else {
                println!("{}", print_term(&term));
            }
        }
        Cmd::Interpret(t) => {
            let (ctx, term, _) = typed(&t)?;
            print_strategy(&interpret_term(&ctx, &term)?, as_json)?;
        }
        Cmd::Compose { outer, inner } => {
            let (tau, sigma) = (load_strategy(&outer)?, load_strategy(&inner)?);
            if sigma.interface().right != tau.interface().left {
                bail!("cannot compose {} after {}", tau.interface(), sigma.interface());
            }
            print_strategy(&Strategy::compose(&tau, &sigma), as_json)?;
        }
        Cmd::CheckLaws { window, arena } => {
            let a = parse_type(&arena).map_err(|e| anyhow!("arena: {e}"))?;
            let mut laws = algebraic_laws(&a, &SimpleType::Base);
            laws.extend(bag_laws(&a, &a));
            let reports = check_laws(&laws, window);
            let failed = reports.iter().filter(|r| !r.passed).count();
            if as_json {
                println!("{}", serde_json::to_string_pretty(&json!({"arena": a.to_string(), "window": window, "laws": reports}))?);
            } else {
                for r in &reports {
                    let status = if r.passed { "ok" } else { "FAILED" };
                    match &r.detail {
                        Some(d) => println!("{status:6} {}: {d}", r.name),
                        None => println!("{status:6} {}", r.name),
                    }
                }
                println!("{} laws, {failed} failed", reports.len());
            }
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Soundness { corpus, seed, max_size } => {
            let items = generate_corpus(corpus, seed, max_size);
            let r = soundness(&items);
            if as_json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                println!(
                    "{} terms, {} passed, {} with a repeated summand, {} normalizing to 0",
                    r.total, r.passed, r.with_repeated_summand, r.normalizing_to_zero
                );
                for f in &r.failures {
                    println!("FAILED {} in {}: {:?} {:?}", f.term, f.context, f.error, f.mismatches);
                }
            }
            if !r.ok() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::ExportDot { r#type, augmentation, term, ctx } => {
            let dot = if let Some(ty) = r#type {
                let t = parse_type(&ty).map_err(|e| anyhow!("type: {e}"))?;
                arena_dot(&interpret_type(&t), &t.to_string())
            } else if let Some(path) = augmentation {
                let j: AugmentationJson = serde_json::from_str(&read_input(&path)?).context("parsing augmentation")?;
                let (iface, q) = augmentation_from_json(&j)?;
                augmentation_dot(&q, &iface.arena, &j.arena)
            } else if let Some(src) = term {
                let (ctx, term, _) = typed(&TermArgs { term: src, ctx })?;
                let (iso, ty) = encode_term(&ctx, &term)?;
                let iface = Interface::new(ctx.types(), vec![ty]);
                let arena: &Arena = &iface.arena;
                augmentation_dot(&iso.representative, arena, &print_term(&term))
            } else {
                bail!("one of --type, --augmentation or --term is required");
            };
            print!("{dot}");
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
