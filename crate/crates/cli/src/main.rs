//! bott-lab: exact cohomology, K-theory, KO-theory and stably complex
//! structure enumeration for Bott towers.
//!
//! Exit codes: 0 success (and all checks passed for `verify`), 1 failed
//! verification or internal inconsistency, 2 invalid list or arguments,
//! 3 unsupported request (e.g. exact KO products on a mixed-parity list),
//! 4 height cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bott_core::cohom::chern_numbers_of_total;
use bott_core::{
    bb_profile, enumerate_structures, euler_characteristic, h_algebra, ko_groups_from_bb,
    ko_minus2_basis, total_chern, verify_all, verify_family, BottError, BottList, EnumOptions,
    Family, IntegerScalar, KTheory, Omniorientation, Parity, Scalar, TeRing, ToRing, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(name = "bott-lab", version, about = "Exact invariants of Bott towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct ListArgs {
    /// Inline list: stages separated by ';', entries by ',' (e.g. "1;0,1")
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["file", "family"])]
    list: Option<String>,

    /// File containing a list (canonical text or a JSON array of arrays)
    #[arg(long, conflicts_with = "family")]
    file: Option<PathBuf>,

    /// Preset family: cp1-power, bounded-flag, a-family, big-entry
    #[arg(long)]
    family: Option<String>,

    /// Height for a family preset
    #[arg(long)]
    height: Option<usize>,

    /// Seed for the big-entry preset
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CommonArgs {
    /// Output format (csv is available for the enumerate classes table)
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,

    /// Height cap override (also via BOTTLAB_CAP)
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a list and report height, parity and basic invariants
    Info {
        #[command(flatten)]
        list: ListArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Integral cohomology presentation: the relations x_j² = (Σ a(i,j)x_i)x_j
    Cohomology {
        #[command(flatten)]
        list: ListArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// K-theory presentation: the relations g_j² = z⁻¹(Π(1+zg_i)^{a(i,j)}−1)g_j
    Ktheory {
        #[command(flatten)]
        list: ListArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sq²-derived summand counts α_p, β_q
    Bb {
        #[command(flatten)]
        list: ListArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// KO⁻² basis and the family presentation (totally even or terminally odd)
    Ko {
        #[command(flatten)]
        list: ListArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Total Chern class and Chern numbers of an omnioriented structure
    Chern {
        #[command(flatten)]
        list: ListArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Omniorientation as "<k delta bits>;<k epsilon bits>" (default: none flipped)
        #[arg(long)]
        omni: Option<String>,
    },
    /// Enumerate all 4^k omniorientations and group them into structures
    Enumerate {
        #[command(flatten)]
        list: ListArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the verification suite against the closed-form counts
    Verify {
        /// Preset family; all four presets when omitted
        #[arg(long)]
        family: Option<String>,
        /// Largest height to verify
        #[arg(long, default_value_t = 4)]
        max_height: usize,
        /// Seed for randomized presets
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify a custom list instead of a preset
        #[arg(long, allow_hyphen_values = true, conflicts_with = "family")]
        list: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn resolve_list(args: &ListArgs) -> Result<BottList> {
    match (&args.list, &args.file, &args.family) {
        (Some(s), None, None) => Ok(BottList::from_str(s)?),
        (None, Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| BottError::Parse(format!("cannot read {}: {e}", path.display())))?;
            let text = text.trim();
            if text.starts_with('[') {
                let value: Value = serde_json::from_str(text)
                    .map_err(|e| BottError::Parse(format!("bad JSON list: {e}")))?;
                Ok(BottList::from_json(&value)?)
            } else {
                Ok(BottList::from_str(text)?)
            }
        }
        (None, None, Some(name)) => {
            let family = Family::parse(name)?;
            let height = args
                .height
                .ok_or_else(|| BottError::Parse("--family requires --height".to_string()))?;
            Ok(family.list(height, args.seed))
        }
        _ => Err(
            BottError::Parse("provide exactly one of --list, --file, --family".to_string()).into(),
        ),
    }
}

fn resolve_cap(common: &CommonArgs) -> Result<usize> {
    if let Some(cap) = common.cap {
        return Ok(cap);
    }
    if let Ok(env) = std::env::var("BOTTLAB_CAP") {
        return env
            .parse::<usize>()
            .map_err(|_| anyhow!(BottError::Parse(format!("bad BOTTLAB_CAP {env:?}"))));
    }
    Ok(DEFAULT_CAP)
}

fn enum_options(common: &CommonArgs) -> Result<EnumOptions> {
    Ok(EnumOptions {
        cap: resolve_cap(common)?,
        jobs: common.jobs,
    })
}

fn check_cap(list: &BottList, common: &CommonArgs) -> Result<()> {
    let cap = resolve_cap(common)?;
    let k = list.height();
    if k > cap {
        return Err(BottError::CapExceeded { height: k, cap }.into());
    }
    if k > DEFAULT_CAP {
        let bytes = (1u128 << (2 * k)) * 64;
        eprintln!(
            "warning: height {k} means a {}-element basis and {} omniorientations (~{} GiB working set)",
            1u128 << k,
            1u128 << (2 * k),
            bytes >> 30
        );
    }
    Ok(())
}

fn format_of(common: &CommonArgs, default: Format) -> Format {
    common.format.unwrap_or(default)
}

fn emit_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Info { list, common } => {
            let list = resolve_list(&list)?;
            check_cap(&list, &common)?;
            let parity = list.parity();
            let value = json!({
                "list": list.canonical_string(),
                "stages": list.to_json(),
                "height": list.height(),
                "parity": parity.as_str(),
                "totally_even": parity.is_totally_even(),
                "terminally_odd": parity.is_terminally_odd(),
                "basis_rank": 1u64 << list.height(),
                "euler": euler_characteristic(&list).to_string(),
            });
            match format_of(&common, Format::Json) {
                Format::Json => emit_json(&value),
                Format::Text => {
                    println!("list        {}", list.canonical_string());
                    println!("height      {}", list.height());
                    println!("parity      {}", parity.as_str());
                    println!("basis rank  {}", 1u64 << list.height());
                    println!("euler       {}", euler_characteristic(&list));
                }
                Format::Csv => return Err(BottError::UnsupportedFamily.into()),
            }
            Ok(true)
        }
        Command::Cohomology { list, common } => {
            let list = resolve_list(&list)?;
            check_cap(&list, &common)?;
            let alg = h_algebra(&list);
            let relations: Vec<Value> = (1..=list.height())
                .map(|j| {
                    let xj = alg.generator(j);
                    let square = alg.mul(&xj, &xj);
                    json!({
                        "generator": format!("x{j}"),
                        "square": square.to_json('x', "coeff"),
                    })
                })
                .collect();
            let value = json!({
                "k": list.height(),
                "list": list.canonical_string(),
                "basis_rank": 1u64 << list.height(),
                "euler": euler_characteristic(&list).to_string(),
                "relations": relations,
            });
            match format_of(&common, Format::Json) {
                Format::Json => emit_json(&value),
                Format::Text => {
                    for j in 1..=list.height() {
                        let xj = alg.generator(j);
                        println!("x{j}^2 = {}", alg.mul(&xj, &xj).render('x'));
                    }
                }
                Format::Csv => return Err(BottError::UnsupportedFamily.into()),
            }
            Ok(true)
        }
        Command::Ktheory { list, common } => {
            let list = resolve_list(&list)?;
            check_cap(&list, &common)?;
            let kt = KTheory::new(&list);
            let relations: Vec<Value> = (1..=list.height())
                .map(|j| {
                    let gj = kt.generator(j);
                    let square = kt.mul(&gj, &gj);
                    json!({
                        "generator": format!("g{j}"),
                        "square": square.to_json('g', "laurent"),
                    })
                })
                .collect();
            let value = json!({
                "k": list.height(),
                "list": list.canonical_string(),
                "relations": relations,
            });
            match format_of(&common, Format::Json) {
                Format::Json => emit_json(&value),
                Format::Text => {
                    for j in 1..=list.height() {
                        let gj = kt.generator(j);
                        println!("g{j}^2 = {}", kt.mul(&gj, &gj).render('g'));
                    }
                }
                Format::Csv => return Err(BottError::UnsupportedFamily.into()),
            }
            Ok(true)
        }
        Command::Bb { list, common } => {
            let list = resolve_list(&list)?;
            check_cap(&list, &common)?;
            let profile = bb_profile(&list)?;
            match format_of(&common, Format::Json) {
                Format::Json => emit_json(&profile.to_json()),
                Format::Text => {
                    println!("alpha = {:?}", profile.alpha);
                    println!("beta  = {:?}", profile.beta);
                }
                Format::Csv => return Err(BottError::UnsupportedFamily.into()),
            }
            Ok(true)
        }
        Command::Ko { list, common } => {
            let list = resolve_list(&list)?;
            check_cap(&list, &common)?;
            let basis = ko_minus2_basis(&list)?;
            let via_bb = ko_groups_from_bb(&bb_profile(&list)?, -2);
            let mut value = json!({
                "list": list.canonical_string(),
                "family": basis.family.as_str(),
                "ko_minus2": basis.to_json(),
                "bb_minus2": via_bb.to_json(),
            });
            let obj = value.as_object_mut().expect("object");
            match list.parity() {
                Parity::TotallyEven | Parity::Trivial => {
                    let ring = TeRing::new(&list)?;
                    let relations: Vec<Value> = (1..=list.height())
                        .map(|j| {
                            let rel = ring.te_relation(j)?;
                            Ok(json!({
                                "generator": format!("d{j}"),
                                "u": rel.u.to_json(),
                                "torsion_determined": rel.torsion_determined,
                            }))
                        })
                        .collect::<Result<_>>()?;
                    obj.insert("relations".to_string(), Value::Array(relations));
                }
                Parity::TerminallyOdd => {
                    let ring = ToRing::new(&list)?;
                    let gens: Vec<Value> = ring
                        .generators()
                        .iter()
                        .map(|g| Value::String(g.name()))
                        .collect();
                    obj.insert("generators".to_string(), Value::Array(gens));
                }
                Parity::Mixed => unreachable!("rejected by ko_minus2_basis"),
            }
            match format_of(&common, Format::Json) {
                Format::Json => emit_json(&value),
                Format::Text => {
                    println!("family   {}", basis.family.as_str());
                    println!("KO^-2    {}", basis.group.render());
                    for e in &basis.elements {
                        let order = match e.order {
                            None => "Z".to_string(),
                            Some(t) => format!("Z/{t}"),
                        };
                        println!("  {:30} {}", e.name, order);
                    }
                    if let Parity::TotallyEven | Parity::Trivial = list.parity() {
                        let ring = TeRing::new(&list)?;
                        for j in 1..=list.height() {
                            let rel = ring.te_relation(j)?;
                            let note = if rel.torsion_determined {
                                ""
                            } else {
                                "   (torsion component undetermined)"
                            };
                            if rel.u.is_zero() {
                                println!("d{j}^2 = 0{note}");
                            } else {
                                println!("d{j}^2 = ({})*d{j}{note}", rel.u.render());
                            }
                        }
                    }
                }
                Format::Csv => return Err(BottError::UnsupportedFamily.into()),
            }
            Ok(true)
        }
        Command::Chern { list, common, omni } => {
            let list = resolve_list(&list)?;
            check_cap(&list, &common)?;
            let k = list.height();
            let omni = match omni {
                None => Omniorientation::canonical(k),
                Some(s) => Omniorientation::parse(&s, k)?,
            };
            let total = total_chern(&list, &omni);
            let numbers = chern_numbers_of_total(&list, &total);
            let almost_complex = {
                let full = if k == 0 { 0u32 } else { (1u32 << k) - 1 };
                let two_pow = IntegerScalar::from(1) << k;
                let expected = if k % 2 == 1 { -two_pow } else { two_pow };
                total.coeff(full) == expected
            };
            let bounds = numbers.iter().all(|(_, v)| Scalar::is_zero(v));
            let num_map: serde_json::Map<String, Value> = numbers
                .iter()
                .map(|(p, v)| (p.name(), Value::String(v.to_string())))
                .collect();
            let value = json!({
                "list": list.canonical_string(),
                "delta": omni.delta_bits(),
                "epsilon": omni.epsilon_bits(),
                "total_chern": total.to_json('x', "coeff"),
                "chern_numbers": num_map,
                "almost_complex": almost_complex,
                "bounds": bounds,
                "euler": euler_characteristic(&list).to_string(),
            });
            match format_of(&common, Format::Json) {
                Format::Json => emit_json(&value),
                Format::Text => {
                    println!("c(tau) = {}", total.render('x'));
                    for (p, v) in &numbers {
                        println!("c[{}] = {}", p.name(), v);
                    }
                    println!("almost_complex = {almost_complex}, bounds = {bounds}");
                }
                Format::Csv => return Err(BottError::UnsupportedFamily.into()),
            }
            Ok(true)
        }
        Command::Enumerate { list, common } => {
            let list = resolve_list(&list)?;
            let opts = enum_options(&common)?;
            check_cap(&list, &common)?;
            let report = enumerate_structures(&list, &opts)?;
            match format_of(&common, Format::Json) {
                Format::Json => emit_json(&report.to_json()),
                Format::Csv => print!("{}", report.to_csv()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(true)
        }
        Command::Verify {
            family,
            max_height,
            seed,
            list,
            common,
        } => {
            let opts = enum_options(&common)?;
            let checks = if let Some(text) = list {
                let list = BottList::from_str(&text)?;
                verify_family(&Family::Custom(list), max_height, seed, &opts)?
            } else if let Some(name) = family {
                verify_family(&Family::parse(&name)?, max_height, seed, &opts)?
            } else {
                verify_all(max_height, seed, &opts)?
            };
            let all_passed = checks.iter().all(|c| c.passed);
            match format_of(&common, Format::Text) {
                Format::Json => {
                    let value = json!({
                        "passed": all_passed,
                        "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                    });
                    emit_json(&value);
                }
                Format::Text | Format::Csv => {
                    for c in &checks {
                        println!("{}", c.render());
                    }
                    println!(
                        "{} of {} checks passed",
                        checks.iter().filter(|c| c.passed).count(),
                        checks.len()
                    );
                }
            }
            Ok(all_passed)
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    match err.downcast_ref::<BottError>() {
        Some(BottError::Shape { .. })
        | Some(BottError::Parse(_))
        | Some(BottError::FiberRange { .. })
        | Some(BottError::StageRange { .. }) => ExitCode::from(2),
        Some(BottError::UnsupportedFamily) => ExitCode::from(3),
        Some(BottError::CapExceeded { .. }) => ExitCode::from(4),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    // Die quietly when a pager closes the pipe, like other line-oriented
    // tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    }
}
