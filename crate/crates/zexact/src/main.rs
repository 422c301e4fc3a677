//! Command-line surface: validate models, compute zero parts and
//! Z-kernels, check exactness, search for Z-cokernels, run the lemma
//! verifiers and seeded campaigns.
//!
//! Exit codes: 0 = holds/valid, 1 = refuted/invalid (certificate
//! emitted), 2 = hypotheses unmet, 3 = usage or IO error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use zexact::algebra::check_model;
use zexact::campaign::{run_campaign, CampaignConfig, LemmaSelector};
use zexact::catalog::{build_catalog, Catalog};
use zexact::hom::enumerate_homs;
use zexact::io;
use zexact::lemmas::{
    verify_nine, verify_pb_iff_mono, verify_regepi_transfer, verify_short_five, NineVariant,
    ShortFiveMode,
};
use zexact::verdict::{Verdict, VerdictKind};
use zexact::zcore::{
    is_zexact, verify_zero_context, zcokernel_search, zero_part, zkernel, InitialOutcome,
    ZCokernelOutcome,
};
use zexact::FiniteAlgebra;

type CliError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(
    name = "zexact",
    version,
    about = "Finite-model engine for zero parts, Z-kernels and exact sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Variety preset: ring1, bool, heyting or mv.
    #[arg(long, default_value = "ring1")]
    preset: String,
    /// Directory of extra algebra files (JSON), resolvable by id.
    #[arg(long, value_name = "DIR")]
    catalog: Option<PathBuf>,
    /// Size bound for the builtin catalog.
    #[arg(long, default_value_t = 8)]
    bound: usize,
    /// Write the JSON report to a file as well.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Suppress stdout; exit code still reflects the verdict.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algebra against the preset axioms.
    Validate {
        /// Algebra file or builtin id.
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compute the constant-generated subalgebra Z(A) and its embedding.
    ZeroPart {
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate all homomorphisms between two algebras.
    Homs {
        source: String,
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compute the Z-kernel of a homomorphism (hom file).
    Zkernel {
        hom: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a sequence file { "k": hom, "f": hom } for short Z-exactness.
    Exact {
        sequence: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Bounded Z-cokernel search over quotient candidates.
    ZcokerSearch {
        hom: PathBuf,
        /// Probes file (JSON array of homs out of the codomain); defaults
        /// to every enumerable hom from the codomain into the catalog.
        #[arg(long, value_name = "FILE")]
        probes: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a lemma verifier on a ladder or grid file.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Verify the zero-structure context conditions over the catalog.
    ContextCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Construct the initial object from the catalog's trivial objects
    /// and certify unique arrows into every catalog member.
    Initial {
        #[command(flatten)]
        common: Common,
    },
    /// Run a seeded verification campaign.
    Campaign {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Nine-lemma variant: a, b or c.
        #[arg(long)]
        variant: Option<String>,
        /// Short-five mode: iso, regepi or mono.
        #[arg(long)]
        mode: Option<String>,
        /// Direct lemma selector: short-five-iso, short-five-regepi,
        /// short-five-mono, pb-mono, regepi-transfer, nine-a, nine-b,
        /// nine-c.
        #[arg(long)]
        lemma: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Short five lemma on a ladder file.
    ShortFive {
        ladder: PathBuf,
        /// iso, regepi or mono.
        #[arg(long, default_value = "iso")]
        mode: String,
        #[command(flatten)]
        common: Common,
    },
    /// Pullback-iff-mono lemma on a ladder file.
    PbMono {
        ladder: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Regular-epi transfer on the lower two thirds of a grid file.
    Regepi {
        grid: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Nine lemma on a grid file.
    Nine {
        grid: PathBuf,
        /// a, b or c.
        #[arg(long, default_value = "b")]
        variant: String,
        #[command(flatten)]
        common: Common,
    },
}

struct Context {
    catalog: Catalog,
    extra: Vec<Arc<FiniteAlgebra>>,
}

impl Context {
    fn build(common: &Common) -> Result<Self, CliError> {
        let catalog = build_catalog(&common.preset, common.bound)?;
        let mut extra = Vec::new();
        if let Some(dir) = &common.catalog {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "json"))
                .collect();
            paths.sort();
            for p in paths {
                extra.push(io::parse_algebra_file(&p, catalog.preset.signature())?);
            }
        }
        Ok(Context { catalog, extra })
    }

    fn resolve(&self, id: &str) -> Option<Arc<FiniteAlgebra>> {
        self.extra
            .iter()
            .find(|a| a.id() == id)
            .or_else(|| self.catalog.get(id))
            .cloned()
    }

    fn resolver(&self) -> impl Fn(&str) -> Option<Arc<FiniteAlgebra>> + '_ {
        move |id| self.resolve(id)
    }

    /// A positional algebra operand: a file path if one exists, otherwise
    /// a catalog id.
    fn operand(&self, spec: &str) -> Result<Arc<FiniteAlgebra>, CliError> {
        let path = Path::new(spec);
        if path.exists() {
            return Ok(io::parse_algebra_file(path, self.catalog.preset.signature())?);
        }
        self.resolve(spec)
            .ok_or_else(|| format!("`{spec}` is neither a file nor a known algebra id").into())
    }
}

fn verdict_exit(v: &Verdict) -> i32 {
    match v.kind {
        VerdictKind::Holds => 0,
        VerdictKind::Fails => 1,
        VerdictKind::HypothesesUnmet => 2,
    }
}

fn emit(common: &Common, report: &Value, code: i32) -> Result<i32, CliError> {
    let text = serde_json::to_string_pretty(report)?;
    if let Some(out) = &common.out {
        std::fs::write(out, format!("{text}\n"))?;
    }
    if !common.quiet {
        println!("{text}");
    }
    Ok(code)
}

fn parse_short_five_mode(s: &str) -> Result<ShortFiveMode, CliError> {
    match s {
        "iso" => Ok(ShortFiveMode::Iso),
        "regepi" => Ok(ShortFiveMode::RegEpi),
        "mono" => Ok(ShortFiveMode::Mono),
        other => Err(format!("unknown mode `{other}` (expected iso, regepi or mono)").into()),
    }
}

fn parse_nine_variant(s: &str) -> Result<NineVariant, CliError> {
    match s {
        "a" => Ok(NineVariant::A),
        "b" => Ok(NineVariant::B),
        "c" => Ok(NineVariant::C),
        other => Err(format!("unknown variant `{other}` (expected a, b or c)").into()),
    }
}

fn parse_selector(
    lemma: &Option<String>,
    mode: &Option<String>,
    variant: &Option<String>,
) -> Result<LemmaSelector, CliError> {
    match (lemma, mode, variant) {
        (Some(l), None, None) => match l.as_str() {
            "short-five-iso" => Ok(LemmaSelector::ShortFive(ShortFiveMode::Iso)),
            "short-five-regepi" => Ok(LemmaSelector::ShortFive(ShortFiveMode::RegEpi)),
            "short-five-mono" => Ok(LemmaSelector::ShortFive(ShortFiveMode::Mono)),
            "pb-mono" => Ok(LemmaSelector::PbIffMono),
            "regepi-transfer" => Ok(LemmaSelector::RegEpiTransfer),
            "nine-a" => Ok(LemmaSelector::Nine(NineVariant::A)),
            "nine-b" => Ok(LemmaSelector::Nine(NineVariant::B)),
            "nine-c" => Ok(LemmaSelector::Nine(NineVariant::C)),
            other => Err(format!("unknown lemma `{other}`").into()),
        },
        (None, Some(m), None) => Ok(LemmaSelector::ShortFive(parse_short_five_mode(m)?)),
        (None, None, Some(v)) => Ok(LemmaSelector::Nine(parse_nine_variant(v)?)),
        _ => Err("pass exactly one of --lemma, --mode (short five) or --variant (nine)".into()),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate { algebra, common } => {
            let ctx = Context::build(&common)?;
            let alg = ctx.operand(&algebra)?;
            let report = check_model(&alg, &ctx.catalog.preset)?;
            match report {
                zexact::algebra::ModelReport::Valid => emit(
                    &common,
                    &json!({ "algebra": alg.id(), "valid": true }),
                    0,
                ),
                zexact::algebra::ModelReport::Violation {
                    axiom, assignment, ..
                } => emit(
                    &common,
                    &json!({
                        "algebra": alg.id(),
                        "valid": false,
                        "axiom": axiom,
                        "assignment": assignment,
                    }),
                    1,
                ),
            }
        }
        Command::ZeroPart { algebra, common } => {
            let ctx = Context::build(&common)?;
            let alg = ctx.operand(&algebra)?;
            let zp = zero_part(&alg);
            emit(
                &common,
                &json!({
                    "algebra": alg.id(),
                    "size": zp.zero.size(),
                    "carrier": zp.carrier(),
                    "zero_part": io::algebra_to_value(&zp.zero),
                    "trivial": zp.zero.size() == alg.size(),
                }),
                0,
            )
        }
        Command::Homs {
            source,
            target,
            common,
        } => {
            let ctx = Context::build(&common)?;
            let src = ctx.operand(&source)?;
            let dst = ctx.operand(&target)?;
            let homs = enumerate_homs(&src, &dst)?;
            emit(
                &common,
                &json!({
                    "source": src.id(),
                    "target": dst.id(),
                    "count": homs.len(),
                    "homs": homs.iter().map(io::hom_to_value).collect::<Vec<_>>(),
                }),
                0,
            )
        }
        Command::Zkernel { hom, common } => {
            let ctx = Context::build(&common)?;
            let f = io::parse_hom_file(&hom, ctx.catalog.preset.signature(), &ctx.resolver())?;
            let ker = zkernel(&f);
            emit(
                &common,
                &json!({
                    "arrow": io::hom_to_value(&f),
                    "kernel_size": ker.kernel().size(),
                    "carrier": ker.carrier(),
                    "k": io::hom_to_value(ker.k()),
                    "chi": io::hom_to_value(ker.chi()),
                }),
                0,
            )
        }
        Command::Exact { sequence, common } => {
            let ctx = Context::build(&common)?;
            let (k, f) =
                io::parse_sequence_file(&sequence, ctx.catalog.preset.signature(), &ctx.resolver())?;
            let report = is_zexact(&k, &f)?;
            let code = if report.exact { 0 } else { 1 };
            emit(
                &common,
                &json!({
                    "exact": report.exact,
                    "reason": report.failed.map(|r| format!("{r:?}")),
                }),
                code,
            )
        }
        Command::ZcokerSearch {
            hom,
            probes,
            common,
        } => {
            let ctx = Context::build(&common)?;
            let f = io::parse_hom_file(&hom, ctx.catalog.preset.signature(), &ctx.resolver())?;
            let probe_list = match probes {
                Some(path) => {
                    let value = io::read_json(&path)?;
                    let arr = value
                        .as_array()
                        .ok_or("probes file must be a JSON array of homs")?;
                    arr.iter()
                        .enumerate()
                        .map(|(i, v)| {
                            io::hom_from_value(
                                v,
                                ctx.catalog.preset.signature(),
                                &ctx.resolver(),
                                &format!("probes[{i}]"),
                            )
                        })
                        .collect::<Result<Vec<_>, _>>()?
                }
                None => {
                    let mut all = Vec::new();
                    for t in &ctx.catalog.algebras {
                        all.extend(enumerate_homs(f.target(), t)?);
                    }
                    all
                }
            };
            match zcokernel_search(&f, common.bound, &probe_list)? {
                ZCokernelOutcome::Found {
                    q,
                    congruence,
                    mediators,
                } => emit(
                    &common,
                    &json!({
                        "found": true,
                        "q": io::hom_to_value(&q),
                        "congruence": congruence.blocks(),
                        "mediators": mediators
                            .iter()
                            .map(|(i, m)| json!({ "probe": i, "hom": io::hom_to_value(m) }))
                            .collect::<Vec<_>>(),
                    }),
                    0,
                ),
                ZCokernelOutcome::NotFound { refutations } => emit(
                    &common,
                    &json!({
                        "found": false,
                        "note": "no Z-cokernel among quotient candidates vs. these probes",
                        "refutations": refutations
                            .iter()
                            .map(|r| json!({
                                "congruence": r.congruence.blocks(),
                                "quotient_size": r.quotient_size,
                                "failure": format!("{:?}", r.failure),
                            }))
                            .collect::<Vec<_>>(),
                    }),
                    1,
                ),
            }
        }
        Command::Verify { what } => match what {
            VerifyCommand::ShortFive {
                ladder,
                mode,
                common,
            } => {
                let ctx = Context::build(&common)?;
                let d =
                    io::parse_ladder_file(&ladder, ctx.catalog.preset.signature(), &ctx.resolver())?;
                let v = verify_short_five(&d, parse_short_five_mode(&mode)?);
                emit(&common, &serde_json::to_value(&v)?, verdict_exit(&v))
            }
            VerifyCommand::PbMono { ladder, common } => {
                let ctx = Context::build(&common)?;
                let d =
                    io::parse_ladder_file(&ladder, ctx.catalog.preset.signature(), &ctx.resolver())?;
                let v = verify_pb_iff_mono(&d);
                emit(&common, &serde_json::to_value(&v)?, verdict_exit(&v))
            }
            VerifyCommand::Regepi { grid, common } => {
                let ctx = Context::build(&common)?;
                let g =
                    io::parse_grid_file(&grid, ctx.catalog.preset.signature(), &ctx.resolver())?;
                let v = verify_regepi_transfer(&g.lower_two_thirds());
                emit(&common, &serde_json::to_value(&v)?, verdict_exit(&v))
            }
            VerifyCommand::Nine {
                grid,
                variant,
                common,
            } => {
                let ctx = Context::build(&common)?;
                let g =
                    io::parse_grid_file(&grid, ctx.catalog.preset.signature(), &ctx.resolver())?;
                let v = verify_nine(&g, parse_nine_variant(&variant)?);
                emit(&common, &serde_json::to_value(&v)?, verdict_exit(&v))
            }
        },
        Command::ContextCheck { common } => {
            let ctx = Context::build(&common)?;
            let mut algebras = ctx.catalog.algebras.clone();
            algebras.extend(ctx.extra.iter().cloned());
            let report = verify_zero_context(&algebras)?;
            let code = if report.holds { 0 } else { 1 };
            emit(&common, &serde_json::to_value(&report)?, code)
        }
        Command::Initial { common } => {
            let ctx = Context::build(&common)?;
            let zlist: Vec<_> = ctx
                .catalog
                .algebras
                .iter()
                .filter(|a| a.constant_generated())
                .cloned()
                .collect();
            match zexact::zcore::initial_from_catalog(&zlist, &ctx.catalog.algebras)? {
                InitialOutcome::Initial {
                    object,
                    certificates,
                } => emit(
                    &common,
                    &json!({
                        "initial": true,
                        "object": io::algebra_to_value(&object),
                        "certificates": certificates
                            .iter()
                            .map(io::hom_to_value)
                            .collect::<Vec<_>>(),
                    }),
                    0,
                ),
                InitialOutcome::NotInitial { target, hom_count } => emit(
                    &common,
                    &json!({ "initial": false, "target": target, "hom_count": hom_count }),
                    1,
                ),
            }
        }
        Command::Campaign {
            seed,
            count,
            variant,
            mode,
            lemma,
            common,
        } => {
            let ctx = Context::build(&common)?;
            let selector = parse_selector(&lemma, &mode, &variant)?;
            let cfg = CampaignConfig {
                seed,
                preset: ctx.catalog.preset.clone(),
                catalog: ctx.catalog.algebras.clone(),
                count,
                variant: selector,
            };
            let report = run_campaign(&cfg)?;
            let code = if report.counters.failed == 0 { 0 } else { 1 };
            emit(&common, &serde_json::to_value(&report)?, code)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap would exit 2, which collides with the hypotheses-unmet
            // code; usage errors are 3 here
            let _ = err.print();
            std::process::exit(if err.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(3);
        }
    }
}
