//! `micp-forge`: build, inspect, and analyze mixed-integer convex
//! formulations over exact rational arithmetic.
//!
//! Every subcommand is a thin shell over the library. Exit codes: 0 for
//! success, 2 when an analysis ran to completion and the queried property is
//! absent (not ideal, not periodic, hypothesis violated), 1 for errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::{Signed, ToPrimitive};
use serde_json::{json, Value};

use micp_forge_core::bounds::{witness_from_points, strongest_witness, MidpointWitness, SearchMode};
use micp_forge_core::cones::ConicSet;
use micp_forge_core::error::{Error, Result};
use micp_forge_core::fixtures::{self, FixtureArtifact};
use micp_forge_core::formulations::{
    decompose_bounded, union_basic, union_ideal, union_projected, IdealVerdict, MicpFormulation,
    SliceFamily,
};
use micp_forge_core::io::{
    emit_lp, from_json_str, render_family_svg, ConicSetJson, IndexedFamilyJson,
    MicpFormulationJson, PolyhedronHJson,
};
use micp_forge_core::naturals::{
    default_window_floor, detect_periodicity_with_floor, to_milp, NaturalOracle,
    PeriodicNaturalSet, PeriodicityOutcome,
};
use micp_forge_core::pwl::{detect_pwl_period, pwl_decompose, pwl_to_milp, PwlFunction, PwlMode,
    PwlPeriodicity};
use micp_forge_core::rational::{
    format_rational, hnf_int, parse_integer, parse_rational, unimodular_completion,
    ColumnPosition, Int, IntegerMatrix, Rat,
};
use micp_forge_core::shapes::{classify_family, FamilyVerdict, IndexedFamily};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "micp-forge", version, about = "Formulation compiler and analyzer for mixed-integer convex representability", max_term_width = 100)]
struct Cli {
    /// Seed for randomized operations (accepted by every subcommand; all
    /// current analyses are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Integer search window: comma-separated `lo..hi` ranges, one per index
    /// coordinate (a single range is reused for all coordinates).
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the JSON payload to this file; with --format text a summary
    /// still prints to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnionMode {
    Basic,
    Projected,
    Ideal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompileMode {
    Global,
    Eventual,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Position {
    First,
    Last,
}

#[derive(Subcommand)]
enum Command {
    /// Join conic sets (conic_set.v1 files) into one formulation of their union.
    BuildUnion {
        /// Union construction: basic (shared recession cone), projected
        /// (norm-bounded lift), or ideal (homogenized, ideal relaxation).
        #[arg(long, value_enum, default_value_t = UnionMode::Ideal)]
        mode: UnionMode,
        /// Output dimension (length of the x block); required for projected
        /// and ideal modes.
        #[arg(long)]
        n: Option<usize>,
        /// Input files, one conic set each.
        #[arg(required = true)]
        sets: Vec<PathBuf>,
    },
    /// Decide whether a formulation's continuous relaxation is ideal.
    CheckIdeal {
        /// micp_formulation.v1 file.
        formulation: PathBuf,
    },
    /// Midpoint-witness search: a lower bound on the number of integer
    /// variables any formulation of the point set needs.
    LowerBound {
        /// JSON file: array of points, each an array of rationals.
        #[arg(long, conflicts_with = "fixture")]
        points: Option<PathBuf>,
        /// Point-set fixture: parity_cube or primes.
        #[arg(long)]
        fixture: Option<String>,
        /// Fixture parameter, `key=value` (repeatable).
        #[arg(long = "param")]
        params: Vec<String>,
        /// Exhaustive maximum-clique search instead of the greedy heuristic.
        #[arg(long)]
        exact: bool,
        /// Stop at the first witness of this size.
        #[arg(long)]
        target: Option<usize>,
    },
    /// Scan a natural-number set for eventual periodicity on a finite window.
    NatDetect {
        /// Oracle fixture: s_epsilon or primes.
        #[arg(long, conflicts_with = "members")]
        oracle: Option<String>,
        /// Epsilon for the s_epsilon oracle, as "p/q".
        #[arg(long)]
        eps: Option<String>,
        /// Newline-delimited integer file giving the set's members.
        #[arg(long)]
        members: Option<PathBuf>,
        /// Certified window [0, bound] to scan.
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, default_value_t = 20)]
        max_period: u64,
        /// Smallest admissible window; defaults to 4 * max_period^2, capped
        /// at the certified bound.
        #[arg(long)]
        floor: Option<u64>,
    },
    /// Compile an eventually periodic set of naturals to a formulation.
    NatCompile {
        /// Comma-separated periodic offsets (may be empty).
        #[arg(long, default_value = "")]
        offsets: String,
        #[arg(long, default_value_t = 1)]
        period: u64,
        /// Comma-separated exceptional members (may be empty).
        #[arg(long, default_value = "")]
        exceptional: String,
        /// Newline-delimited integer file: compile this finite set instead.
        #[arg(long, conflicts_with_all = ["offsets", "exceptional"])]
        members: Option<PathBuf>,
        /// Also write the formulation in LP format to this file.
        #[arg(long)]
        lp: Option<PathBuf>,
    },
    /// Compile a piecewise linear graph over the naturals to a formulation.
    PwlCompile {
        /// Comma-separated values at 0..=m (the non-repeating head).
        #[arg(long)]
        prefix: String,
        /// Comma-separated repeating slope block.
        #[arg(long)]
        block_slopes: String,
        #[arg(long, value_enum, default_value_t = CompileMode::Eventual)]
        mode: CompileMode,
        /// Also write the formulation in LP format (polyhedral formulations
        /// only).
        #[arg(long)]
        lp: Option<PathBuf>,
    },
    /// Test an indexed family of polytopes against the equal-volume
    /// translation structure.
    ShapeCheck {
        /// indexed_family.v1 file.
        #[arg(long)]
        family: PathBuf,
        /// Render the family (2D only) to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Column-style Hermite normal form of a square integer matrix.
    Hnf {
        /// JSON file: array of matrix rows, integer entries.
        matrix: PathBuf,
    },
    /// Complete a primitive integer vector to a unimodular matrix.
    UnimodularComplete {
        /// Comma-separated integer entries.
        #[arg(long)]
        vector: String,
        /// Where the input vector appears as a column.
        #[arg(long, value_enum, default_value_t = Position::First)]
        position: Position,
    },
    /// Split a bounded-generator formulation into finitely many polytope
    /// pieces plus integer recession directions.
    DecomposeBounded {
        /// JSON file: { "n", "p", "d", "vertices": [[rationals]], "rays": [[integers]] }.
        generators: PathBuf,
    },
    /// Build a named example from the registry.
    Fixture {
        name: String,
        /// Fixture parameter, `key=value` (repeatable).
        #[arg(long = "param")]
        params: Vec<String>,
        /// Also write the formulation in LP format (formulation fixtures
        /// with polyhedral rows only).
        #[arg(long)]
        lp: Option<PathBuf>,
        /// For oracle fixtures: list members up to this value.
        #[arg(long, default_value_t = 100)]
        list_upto: u64,
    },
    /// Enumerate the integer-indexed slices of a formulation over a window.
    SliceEnum {
        /// micp_formulation.v1 file.
        formulation: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}

struct Emitter {
    format: Format,
    out: Option<PathBuf>,
}

impl Emitter {
    fn deliver(&self, payload: &Value, text: &str) -> Result<()> {
        let json = {
            let mut s = serde_json::to_string_pretty(payload).expect("serializable");
            s.push('\n');
            s
        };
        if let Some(path) = &self.out {
            write_file(path, &json)?;
        }
        match self.format {
            Format::Json if self.out.is_none() => print!("{}", json),
            Format::Json => {}
            Format::Text => {
                let mut s = text.to_string();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                print!("{}", s);
            }
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {}", path.display(), e)))
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::Invalid(format!("cannot write {}: {}", path.display(), e)))
}

fn parse_params(pairs: &[String]) -> Result<BTreeMap<String, Rat>> {
    let mut map = BTreeMap::new();
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("parameter '{}' is not key=value", pair)))?;
        map.insert(k.trim().to_string(), parse_rational(v)?);
    }
    Ok(map)
}

fn parse_window_arg(arg: Option<&str>, d: usize) -> Result<Option<Vec<(Int, Int)>>> {
    let Some(s) = arg else { return Ok(None) };
    let mut ranges = Vec::new();
    for part in s.split(',') {
        let (lo, hi) = part
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("window range '{}' is not lo..hi", part)))?;
        let lo = parse_integer(lo)?;
        let hi = parse_integer(hi)?;
        if lo > hi {
            return Err(Error::Invalid(format!("empty window range '{}'", part)));
        }
        ranges.push((lo, hi));
    }
    if ranges.len() == 1 && d > 1 {
        let only = ranges[0].clone();
        ranges = vec![only; d];
    }
    if ranges.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "window has {} ranges, formulation has d = {}",
            ranges.len(),
            d
        )));
    }
    Ok(Some(ranges))
}

fn comma_u64s(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad natural number '{}'", t)))
        })
        .collect()
}

fn comma_rats(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect()
}

fn read_formulation(path: &Path) -> Result<MicpFormulation> {
    let j: MicpFormulationJson = from_json_str(&read_file(path)?)?;
    MicpFormulation::try_from(&j)
}

fn json_rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(format_rational(r))).collect())
}

fn json_ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|i| Value::String(i.to_string())).collect())
}

fn json_int_rows(m: &IntegerMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| json_ints(r)).collect())
}

fn formulation_value(f: &MicpFormulation) -> Value {
    serde_json::to_value(MicpFormulationJson::from(f)).expect("serializable")
}

fn formulation_text(f: &MicpFormulation) -> String {
    format!(
        "formulation: {}\n n = {}, p = {}, d = {}\n rows = {}, cones = {}",
        f.provenance,
        f.n,
        f.p,
        f.d,
        f.set.a.rows,
        f.set.cones.len()
    )
}

fn slice_family_value(fam: &SliceFamily) -> Value {
    json!({
        "window": fam
            .window
            .iter()
            .map(|(lo, hi)| vec![lo.to_string(), hi.to_string()])
            .collect::<Vec<_>>(),
        "slices": fam
            .slices
            .iter()
            .map(|(z, p)| {
                json!({
                    "z": z.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "polyhedron": serde_json::to_value(PolyhedronHJson::from(p)).expect("serializable"),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn maybe_write_lp(f: &MicpFormulation, lp: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = lp {
        write_file(path, &emit_lp(f)?)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    let emitter = Emitter {
        format: cli.format,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::BuildUnion { mode, n, sets } => {
            let mut parsed = Vec::new();
            for path in sets {
                let j: ConicSetJson = from_json_str(&read_file(path)?)?;
                parsed.push(ConicSet::try_from(&j)?);
            }
            let f = match mode {
                UnionMode::Basic => union_basic(&parsed)?,
                UnionMode::Projected => {
                    let n = n.ok_or_else(|| Error::Invalid("projected mode needs --n".into()))?;
                    union_projected(&parsed, n)?
                }
                UnionMode::Ideal => {
                    let n = n.ok_or_else(|| Error::Invalid("ideal mode needs --n".into()))?;
                    union_ideal(&parsed, n)?
                }
            };
            emitter.deliver(&formulation_value(&f), &formulation_text(&f))?;
            Ok(EXIT_OK)
        }
        Command::CheckIdeal { formulation } => {
            let f = read_formulation(formulation)?;
            match f.check_ideal()? {
                IdealVerdict::Ideal => {
                    emitter.deliver(&json!({"verdict": "ideal"}), "ideal")?;
                    Ok(EXIT_OK)
                }
                IdealVerdict::NotIdeal { witness } => {
                    emitter.deliver(
                        &json!({"verdict": "not_ideal", "witness": json_rats(&witness)}),
                        &format!(
                            "not ideal; minimal face with fractional index at ({})",
                            witness
                                .iter()
                                .map(format_rational)
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                    )?;
                    Ok(EXIT_NEGATIVE)
                }
                IdealVerdict::Indeterminate => {
                    emitter.deliver(
                        &json!({"verdict": "indeterminate"}),
                        "indeterminate: the relaxation's lineality moves the index block",
                    )?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::LowerBound {
            points,
            fixture,
            params,
            exact,
            target,
        } => {
            let mode = if *exact {
                SearchMode::Exact
            } else {
                SearchMode::Greedy
            };
            let witness = match (points, fixture) {
                (Some(path), None) => {
                    let pts = parse_points_file(&read_file(path)?)?;
                    witness_from_points(&pts, mode, *target)?
                }
                (None, Some(name)) => lower_bound_fixture(name, &parse_params(params)?, mode, *target)?,
                _ => {
                    return Err(Error::Invalid(
                        "provide exactly one of --points or --fixture".into(),
                    ))
                }
            };
            let MidpointWitness { points, w, bound } = &witness;
            emitter.deliver(
                &json!({
                    "w": w,
                    "bound": bound,
                    "witness": points.iter().map(|p| json_rats(p)).collect::<Vec<_>>(),
                }),
                &format!(
                    "w = {}, bound = {} integer variable(s)\nwitness points:\n{}",
                    w,
                    bound,
                    points
                        .iter()
                        .map(|p| format!(
                            "  ({})",
                            p.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                        ))
                        .collect::<Vec<_>>()
                        .join("\n")
                ),
            )?;
            Ok(EXIT_OK)
        }
        Command::NatDetect {
            oracle,
            eps,
            members,
            bound,
            max_period,
            floor,
        } => {
            let oracle = build_oracle(oracle.as_deref(), eps.as_deref(), members.as_deref(), *bound)?;
            let window = oracle.certified_bound;
            let recommended = default_window_floor(*max_period);
            let floor = floor.unwrap_or_else(|| recommended.min(window));
            match detect_periodicity_with_floor(&oracle, *max_period, floor)? {
                PeriodicityOutcome::Periodic(p) => {
                    emitter.deliver(
                        &json!({
                            "outcome": "periodic",
                            "exceptional": p.exceptional,
                            "offsets": p.offsets,
                            "period": p.period,
                            "window": window,
                        }),
                        &format!(
                            "periodic: exceptional {:?}, offsets {:?} repeating every {}\n(window [0, {}])",
                            p.exceptional, p.offsets, p.period, window
                        ),
                    )?;
                    Ok(EXIT_OK)
                }
                PeriodicityOutcome::NotPeriodicUpTo(t) => {
                    emitter.deliver(
                        &json!({
                            "outcome": "not_periodic_up_to",
                            "max_period": t,
                            "window": window,
                            "recommended_floor": recommended,
                        }),
                        &format!(
                            "no eventual period up to {} on the window [0, {}]",
                            t, window
                        ),
                    )?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::NatCompile {
            offsets,
            period,
            exceptional,
            members,
            lp,
        } => {
            let set = match members {
                Some(path) => {
                    let values = read_naturals_file(path)?;
                    PeriodicNaturalSet::new(values, Vec::new(), 1)?
                }
                None => PeriodicNaturalSet::new(
                    comma_u64s(exceptional)?,
                    comma_u64s(offsets)?,
                    *period,
                )?,
            };
            let f = to_milp(&set)?;
            maybe_write_lp(&f, lp.as_ref())?;
            emitter.deliver(&formulation_value(&f), &formulation_text(&f))?;
            Ok(EXIT_OK)
        }
        Command::PwlCompile {
            prefix,
            block_slopes,
            mode,
            lp,
        } => {
            let p = PwlFunction::new(comma_rats(prefix)?, comma_rats(block_slopes)?)?;
            match mode {
                CompileMode::Global => match detect_pwl_period(&p, PwlMode::Global) {
                    PwlPeriodicity::Periodic { period, .. } => {
                        let f = pwl_to_milp(&p)?;
                        maybe_write_lp(&f, lp.as_ref())?;
                        let mut v = formulation_value(&f);
                        v["period"] = json!(period);
                        emitter.deliver(
                            &v,
                            &format!("{}\n slope period = {}", formulation_text(&f), period),
                        )?;
                        Ok(EXIT_OK)
                    }
                    PwlPeriodicity::NotPeriodic => {
                        emitter.deliver(
                            &json!({"outcome": "not_globally_periodic"}),
                            "the slope word is not globally periodic; rerun with --mode eventual",
                        )?;
                        Ok(EXIT_NEGATIVE)
                    }
                },
                CompileMode::Eventual => {
                    let dec = pwl_decompose(&p)?;
                    maybe_write_lp(&dec.formulation, lp.as_ref())?;
                    let head: Vec<Value> = dec
                        .head
                        .segments
                        .iter()
                        .map(|(i, v, c)| {
                            json!({
                                "index": i,
                                "value": format_rational(v),
                                "slope": format_rational(c),
                            })
                        })
                        .collect();
                    let payload = json!({
                        "threshold": dec.threshold,
                        "period": dec.period,
                        "head_segments": head,
                        "formulation": formulation_value(&dec.formulation),
                    });
                    let text = format!(
                        "eventually periodic from {} with period {}\nhead segments: {}\n{}",
                        dec.threshold,
                        dec.period,
                        if dec.head.is_empty() {
                            "none".to_string()
                        } else {
                            dec.head
                                .segments
                                .iter()
                                .map(|(i, v, c)| {
                                    format!(
                                        "[{}, {}] from {} slope {}",
                                        i,
                                        i + 1,
                                        format_rational(v),
                                        format_rational(c)
                                    )
                                })
                                .collect::<Vec<_>>()
                                .join("; ")
                        },
                        formulation_text(&dec.formulation)
                    );
                    emitter.deliver(&payload, &text)?;
                    Ok(EXIT_OK)
                }
            }
        }
        Command::ShapeCheck { family, svg } => {
            let j: IndexedFamilyJson = from_json_str(&read_file(family)?)?;
            let fam = IndexedFamily::try_from(&j)?;
            if let Some(path) = svg {
                write_file(path, &render_family_svg(&fam)?)?;
            }
            match classify_family(&fam)? {
                FamilyVerdict::TheoremConsistent { classes } => {
                    let class_values: Vec<Value> = classes
                        .iter()
                        .map(|c| {
                            json!({
                                "parity": c.parity,
                                "representative": json_ints(&c.representative),
                                "members": c.members.iter().map(|z| json_ints(z)).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    emitter.deliver(
                        &json!({"verdict": "theorem_consistent", "parity_classes": class_values}),
                        &format!(
                            "consistent: members are translates within each of {} parity class(es)",
                            classes.len()
                        ),
                    )?;
                    Ok(EXIT_OK)
                }
                FamilyVerdict::EqualVolumeUnmet { homothety_classes } => {
                    emitter.deliver(
                        &json!({
                            "verdict": "equal_volume_unmet",
                            "homothety_classes": homothety_classes
                                .iter()
                                .map(|class| class.iter().map(|z| json_ints(z)).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                        }),
                        &format!(
                            "volumes differ; {} homothety class(es) cover the family",
                            homothety_classes.len()
                        ),
                    )?;
                    Ok(EXIT_NEGATIVE)
                }
                FamilyVerdict::HypothesisViolated { z, w, midpoint } => {
                    emitter.deliver(
                        &json!({
                            "verdict": "hypothesis_violated",
                            "z": json_ints(&z),
                            "w": json_ints(&w),
                            "midpoint": json_ints(&midpoint),
                        }),
                        &format!(
                            "not a convex family: the midpoint member at {:?} is smaller than the half-sum of the members at {:?} and {:?}",
                            midpoint, z, w
                        ),
                    )?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Hnf { matrix } => {
            let rows = parse_int_matrix_file(&read_file(matrix)?)?;
            let a = IntegerMatrix::from_rows(rows)?;
            let (h, u) = hnf_int(&a)?;
            emitter.deliver(
                &json!({"h": json_int_rows(&h), "u": json_int_rows(&u)}),
                &format!("H =\n{}\nU =\n{}", int_grid(&h), int_grid(&u)),
            )?;
            Ok(EXIT_OK)
        }
        Command::UnimodularComplete { vector, position } => {
            let entries: Vec<Int> = vector
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(parse_integer)
                .collect::<Result<_>>()?;
            let pos = match position {
                Position::First => ColumnPosition::First,
                Position::Last => ColumnPosition::Last,
            };
            let u = unimodular_completion(&entries, pos)?;
            emitter.deliver(
                &json!({"matrix": json_int_rows(&u)}),
                &format!("U =\n{}", int_grid(&u)),
            )?;
            Ok(EXIT_OK)
        }
        Command::DecomposeBounded { generators } => {
            let (n, p, d, vertices, rays) = parse_generators_file(&read_file(generators)?)?;
            let dec = decompose_bounded(&vertices, &rays, n, p, d)?;
            let payload = json!({
                "rays_x": dec.rays_x.iter().map(|r| json_ints(r)).collect::<Vec<_>>(),
                "pieces": slice_family_value(&dec.pieces),
            });
            let text = format!(
                "{} piece(s) over z window {:?}; recession directions: {}",
                dec.pieces.slices.len(),
                dec.pieces
                    .window
                    .iter()
                    .map(|(lo, hi)| format!("{}..{}", lo, hi))
                    .collect::<Vec<_>>(),
                if dec.rays_x.is_empty() {
                    "none".to_string()
                } else {
                    dec.rays_x
                        .iter()
                        .map(|r| format!("({})", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
                        .collect::<Vec<_>>()
                        .join(", ")
                }
            );
            emitter.deliver(&payload, &text)?;
            Ok(EXIT_OK)
        }
        Command::Fixture {
            name,
            params,
            lp,
            list_upto,
        } => {
            let artifact = fixtures::fixture(name, &parse_params(params)?)?;
            match &artifact {
                FixtureArtifact::Formulation(f) => {
                    maybe_write_lp(f, lp.as_ref())?;
                    emitter.deliver(&formulation_value(f), &formulation_text(f))?;
                }
                FixtureArtifact::Oracle(o) => {
                    let upto = (*list_upto).min(o.certified_bound);
                    let members: Vec<u64> = (0..=upto).filter(|&x| o.member(x).unwrap_or(false)).collect();
                    emitter.deliver(
                        &json!({
                            "kind": "natural_oracle",
                            "certified_bound": o.certified_bound,
                            "listed_upto": upto,
                            "members": members,
                        }),
                        &format!(
                            "membership oracle certified on [0, {}]\nmembers up to {}: {:?}",
                            o.certified_bound, upto, members
                        ),
                    )?;
                }
                FixtureArtifact::Pwl(p) => {
                    emitter.deliver(
                        &json!({
                            "kind": "pwl_function",
                            "prefix_values": p.prefix_values.iter().map(format_rational).collect::<Vec<_>>(),
                            "repeating_slopes": p.repeating_slopes.iter().map(format_rational).collect::<Vec<_>>(),
                        }),
                        &format!(
                            "piecewise linear function\n values at 0..={}: {}\n repeating slopes: {}",
                            p.m,
                            p.prefix_values
                                .iter()
                                .map(format_rational)
                                .collect::<Vec<_>>()
                                .join(", "),
                            p.repeating_slopes
                                .iter()
                                .map(format_rational)
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::SliceEnum { formulation } => {
            let f = read_formulation(formulation)?;
            let window = match parse_window_arg(cli.window.as_deref(), f.d)? {
                Some(w) => w,
                None => f.default_z_window()?,
            };
            let fam = f.enumerate_slices(&window)?;
            let text = format!(
                "{} nonempty slice(s) on window {}\n{}",
                fam.slices.len(),
                fam.window
                    .iter()
                    .map(|(lo, hi)| format!("{}..{}", lo, hi))
                    .collect::<Vec<_>>()
                    .join(", "),
                fam.slices
                    .iter()
                    .map(|(z, p)| format!(
                        "  z = ({}): {} inequality row(s), {} equality row(s)",
                        z.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
                        p.ineqs.len(),
                        p.eqs.len()
                    ))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            emitter.deliver(&slice_family_value(&fam), &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn parse_points_file(text: &str) -> Result<Vec<Vec<Rat>>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {}", e)))?;
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("points file must be a JSON array".into()))?;
    arr.iter().map(|p| parse_point(p)).collect()
}

fn parse_point(v: &Value) -> Result<Vec<Rat>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("each point must be an array".into()))?;
    arr.iter().map(json_to_rat).collect()
}

fn json_to_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("non-integer JSON number {}, write it as a string", n)))?;
            Ok(Rat::from_integer(Int::from(i)))
        }
        _ => Err(Error::Parse("rationals must be strings or integers".into())),
    }
}

fn count_or(params: &BTreeMap<String, Rat>, key: &str, default: u64) -> Result<u64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) if v.is_integer() && !v.is_negative() => v
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::DeskScale(format!("parameter '{}' too large", key))),
        Some(v) => Err(Error::NonIntegral(format!("parameter '{}' = {}", key, v))),
    }
}

fn lower_bound_fixture(
    name: &str,
    params: &BTreeMap<String, Rat>,
    mode: SearchMode,
    target: Option<usize>,
) -> Result<MidpointWitness> {
    match name {
        "parity_cube" => {
            let n = count_or(params, "n", 3)? as usize;
            witness_from_points(&fixtures::even_parity_points(n), mode, target)
        }
        "primes" => {
            let bound = count_or(params, "bound", 50)?;
            let candidates: Vec<Vec<Rat>> = fixtures::primes_upto(bound)
                .into_iter()
                .map(|p| vec![Rat::from_integer(Int::from(p))])
                .collect();
            strongest_witness(
                &candidates,
                &mut |x: &[Rat]| {
                    Ok(x[0].is_integer()
                        && !x[0].is_negative()
                        && x[0].to_integer().to_u64().map(fixtures::is_prime).unwrap_or(false))
                },
                mode,
                target,
            )
        }
        other => Err(Error::Invalid(format!(
            "lower-bound fixtures are point sets: parity_cube or primes (got '{}')",
            other
        ))),
    }
}

fn build_oracle(
    name: Option<&str>,
    eps: Option<&str>,
    members: Option<&Path>,
    bound: Option<u64>,
) -> Result<NaturalOracle> {
    match (name, members) {
        (Some("s_epsilon"), None) => {
            let eps = match eps {
                Some(s) => parse_rational(s)?,
                None => parse_rational("2/5")?,
            };
            let mut o = micp_forge_core::naturals::fixture_s_epsilon(&eps)?;
            if let Some(b) = bound {
                if b > o.certified_bound {
                    return Err(Error::InsufficientWindow(format!(
                        "s_epsilon is certified only up to {}",
                        o.certified_bound
                    )));
                }
                o.certified_bound = b;
            } else {
                o.certified_bound = 100_000;
            }
            Ok(o)
        }
        (Some("primes"), None) => Ok(fixtures::primes_oracle(bound.unwrap_or(10_000))),
        (Some(other), None) => Err(Error::Invalid(format!(
            "nat-detect oracles: s_epsilon or primes (got '{}')",
            other
        ))),
        (None, Some(path)) => {
            let values = read_naturals_file(path)?;
            let max = values.iter().copied().max().unwrap_or(0);
            let bound = bound.unwrap_or(max + 1);
            Ok(NaturalOracle::from_members(
                values.into_iter().collect(),
                bound,
            ))
        }
        _ => Err(Error::Invalid(
            "provide exactly one of --oracle or --members".into(),
        )),
    }
}

fn read_naturals_file(path: &Path) -> Result<Vec<u64>> {
    read_file(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad natural number '{}'", l)))
        })
        .collect()
}

fn parse_int_matrix_file(text: &str) -> Result<Vec<Vec<Int>>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {}", e)))?;
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix file must be a JSON array of rows".into()))?;
    arr.iter()
        .map(|row| {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("each matrix row must be an array".into()))?;
            row.iter()
                .map(|v| match v {
                    Value::String(s) => parse_integer(s),
                    Value::Number(n) => n
                        .as_i64()
                        .map(Int::from)
                        .ok_or_else(|| Error::Parse(format!("bad integer {}", n))),
                    _ => Err(Error::Parse("matrix entries must be integers".into())),
                })
                .collect()
        })
        .collect()
}

fn parse_generators_file(text: &str) -> Result<(usize, usize, usize, Vec<Vec<Rat>>, Vec<Vec<Int>>)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {}", e)))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("generators file must be a JSON object".into()))?;
    let dim = |key: &str| -> Result<usize> {
        obj.get(key)
            .and_then(|x| x.as_u64())
            .map(|x| x as usize)
            .ok_or_else(|| Error::Parse(format!("missing count field '{}'", key)))
    };
    let (n, p, d) = (dim("n")?, dim("p")?, dim("d")?);
    let vertices = obj
        .get("vertices")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Parse("missing 'vertices' array".into()))?
        .iter()
        .map(|p| parse_point(p))
        .collect::<Result<Vec<_>>>()?;
    let rays = match obj.get("rays") {
        None => Vec::new(),
        Some(r) => r
            .as_array()
            .ok_or_else(|| Error::Parse("'rays' must be an array".into()))?
            .iter()
            .map(|row| {
                parse_point(row)?
                    .into_iter()
                    .map(|x| {
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(Error::NonIntegral(format!(
                                "ray entry {}",
                                format_rational(&x)
                            )))
                        }
                    })
                    .collect::<Result<Vec<Int>>>()
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok((n, p, d, vertices, rays))
}

fn int_grid(m: &IntegerMatrix) -> String {
    let rows = m.row_vecs();
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    rows.iter()
        .map(|r| {
            format!(
                "  [{}]",
                r.iter()
                    .map(|v| format!("{:>width$}", v.to_string(), width = width))
                    .collect::<Vec<_>>()
                    .join(" ")
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}
