//! `mukai` — exact lattice computations for moduli spaces of sheaves on
//! K3 and Abelian surfaces.
//!
//! Every subcommand reads its inputs from flags, from a JSON config file
//! (`--config`), or both, with flags winning; emits a single report object
//! on stdout; and reserves stderr for errors. Exit codes: 0 success,
//! 2 bad invocation or malformed input, 3 mathematically meaningful but
//! unsupported request, 4 domain error (the inputs name something that
//! does not exist).

mod config;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use mukai_core::classify::{classify, moduli_dim, ClassifyError, DeformationClass, B2};
use mukai_core::fujiki::{
    fujiki_kv, fujiki_mv, psi_degree, pullback_scaling, strata_dimensions, FujikiError, Space,
};
use mukai_core::lattice::invariants;
use mukai_core::mukai::{
    vperp_abstract, vperp_explicit, MukaiError, MukaiVector, SurfaceKind, SurfaceModel,
};
use mukai_core::walls::{
    enumerate_walls, is_v_generic_with_candidates, v_norm_bound, AmpleSegment, Genericity, Wall,
    WallSource, WallsError,
};
use mukai_core::Lattice;

use config::{MukaiConfig, NsConfig, RunConfig, SegmentConfig, SurfaceConfig};
use report::{big, big_vec, rational, Report};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Parser)]
#[command(
    name = "mukai",
    version,
    about = "Exact lattice invariants for moduli of sheaves on K3 and Abelian surfaces"
)]
struct Cli {
    /// JSON file supplying any input a flag could supply; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<std::path::PathBuf>,

    /// Output format for the report on stdout.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Name the moduli space attached to (kind, space, m, k).
    Classify {
        /// Surface kind: k3 or abelian.
        #[arg(long)]
        kind: Option<String>,
        /// Which space: m (the moduli space) or k (the fiber).
        #[arg(long)]
        space: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// Fujiki constant of the moduli space attached to (m, k).
    Fujiki {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        space: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// Enumerate the walls a Mukai vector cuts through an ample segment.
    Walls {
        /// Surface kind: k3 or abelian (default k3).
        #[arg(long)]
        kind: Option<String>,
        /// NS Gram matrix as a JSON array of rows, e.g. "[[0,1],[1,0]]".
        #[arg(long, value_name = "JSON")]
        ns: Option<String>,
        /// Ample class in NS coordinates (defaults to the segment start).
        #[arg(long, value_name = "JSON")]
        ample: Option<String>,
        /// Mukai vector as JSON, e.g. '{"r":2,"c":[0,0],"s":-1}'.
        #[arg(long, value_name = "JSON")]
        mukai: Option<String>,
        /// Segment ends as two JSON arrays joined by ';', e.g. "[6,1];[1,6]".
        #[arg(long, value_name = "H1;H2")]
        segment: Option<String>,
    },
    /// Decide whether a polarization is generic for a Mukai vector.
    Generic {
        /// Surface kind: k3 or abelian (default k3).
        #[arg(long)]
        kind: Option<String>,
        /// NS Gram matrix as a JSON array of rows.
        #[arg(long, value_name = "JSON")]
        ns: Option<String>,
        /// Mukai vector as JSON.
        #[arg(long, value_name = "JSON")]
        mukai: Option<String>,
        /// Polarization in NS coordinates, e.g. "[2,1]".
        #[arg(long, value_name = "JSON")]
        h: Option<String>,
        /// Candidate subsheaf vector for rank-zero inputs; repeatable.
        #[arg(long = "candidate", value_name = "JSON")]
        candidates: Vec<String>,
    },
    /// Invariants of the orthogonal complement of a Mukai vector.
    Vperp {
        /// Surface kind: k3 or abelian.
        #[arg(long)]
        kind: Option<String>,
        /// Half-square of the primitive vector: v² = 2k.
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
        /// Explicit vector in the full Mukai lattice instead of k.
        #[arg(long, value_name = "JSON")]
        full: Option<String>,
    },
    /// Dimension table of the semistable boundary strata of M_v.
    Strata {
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// Degree of the support morphism datum attached to (m, k).
    PsiDegree {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
    },
}

enum CliError {
    /// Malformed invocation or input that never names a mathematical object.
    Usage(String),
    /// Well-posed question this tool declines to answer.
    Unsupported(String),
    /// Well-formed input naming something that does not exist.
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Domain(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Unsupported(m) | CliError::Domain(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(rendered) => {
            print!("{rendered}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("--config {}: {e}", path.display()))
            })?;
            config::parse(&text).map_err(CliError::Usage)?
        }
        None => RunConfig::default(),
    };
    let report = match cli.command {
        Cmd::Classify { kind, space, m, k } => {
            merge_scalars(&mut cfg, kind, space, m, k);
            cmd_classify(&cfg)?
        }
        Cmd::Fujiki { kind, space, m, k } => {
            merge_scalars(&mut cfg, kind, space, m, k);
            cmd_fujiki(&cfg)?
        }
        Cmd::Walls {
            kind,
            ns,
            ample,
            mukai,
            segment,
        } => {
            merge_scalars(&mut cfg, kind, None, None, None);
            merge_surface(&mut cfg, ns, ample)?;
            if let Some(text) = mukai {
                cfg.mukai = Some(parse_json_flag("mukai", &text)?);
            }
            if let Some(text) = segment {
                cfg.segment = Some(parse_segment_flag(&text)?);
            }
            config::validate(&cfg).map_err(CliError::Usage)?;
            cmd_walls(&cfg)?
        }
        Cmd::Generic {
            kind,
            ns,
            mukai,
            h,
            candidates,
        } => {
            merge_scalars(&mut cfg, kind, None, None, None);
            merge_surface(&mut cfg, ns, None)?;
            if let Some(text) = mukai {
                cfg.mukai = Some(parse_json_flag("mukai", &text)?);
            }
            if let Some(text) = h {
                cfg.h = Some(parse_json_flag("h", &text)?);
            }
            if !candidates.is_empty() {
                let mut parsed = Vec::with_capacity(candidates.len());
                for text in &candidates {
                    parsed.push(parse_json_flag("candidate", text)?);
                }
                cfg.candidates = Some(parsed);
            }
            config::validate(&cfg).map_err(CliError::Usage)?;
            cmd_generic(&cfg)?
        }
        Cmd::Vperp { kind, k, full } => {
            merge_scalars(&mut cfg, kind, None, None, k);
            if let Some(text) = full {
                cfg.full = Some(parse_json_flag("full", &text)?);
            }
            cmd_vperp(&cfg)?
        }
        Cmd::Strata { m, k } => {
            merge_scalars(&mut cfg, None, None, m, k);
            cmd_strata(&cfg)?
        }
        Cmd::PsiDegree { kind, m, k } => {
            merge_scalars(&mut cfg, kind, None, m, k);
            cmd_psi_degree(&cfg)?
        }
    };
    Ok(match cli.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Text => report.to_text(),
    })
}

// ---- flag merging ------------------------------------------------------

fn merge_scalars(
    cfg: &mut RunConfig,
    kind: Option<String>,
    space: Option<String>,
    m: Option<i64>,
    k: Option<i64>,
) {
    if kind.is_some() {
        cfg.kind = kind;
    }
    if space.is_some() {
        cfg.space = space;
    }
    if m.is_some() {
        cfg.m = m;
    }
    if k.is_some() {
        cfg.k = k;
    }
}

fn merge_surface(
    cfg: &mut RunConfig,
    ns: Option<String>,
    ample: Option<String>,
) -> Result<(), CliError> {
    if let Some(text) = ns {
        let gram: Vec<Vec<i64>> = parse_json_flag("ns", &text)?;
        match &mut cfg.surface {
            Some(surface) => surface.ns = NsConfig { gram },
            None => {
                cfg.surface = Some(SurfaceConfig {
                    kind: None,
                    ns: NsConfig { gram },
                    ample: None,
                })
            }
        }
    }
    if let Some(text) = ample {
        let coords: Vec<i64> = parse_json_flag("ample", &text)?;
        match &mut cfg.surface {
            Some(surface) => surface.ample = Some(coords),
            None => return Err(CliError::Usage("--ample given without an NS Gram matrix".into())),
        }
    }
    Ok(())
}

fn parse_json_flag<T: serde::de::DeserializeOwned>(name: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn parse_segment_flag(text: &str) -> Result<SegmentConfig, CliError> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(
            "--segment: expected two JSON arrays joined by ';', e.g. \"[6,1];[1,6]\"".into(),
        ));
    }
    Ok(SegmentConfig {
        h1: parse_json_flag("segment", parts[0])?,
        h2: parse_json_flag("segment", parts[1])?,
    })
}

// ---- resolving merged inputs -------------------------------------------

fn parse_kind(s: &str) -> Result<SurfaceKind, CliError> {
    match s {
        "k3" => Ok(SurfaceKind::K3),
        "abelian" => Ok(SurfaceKind::Abelian),
        other => Err(CliError::Usage(format!(
            "kind must be \"k3\" or \"abelian\", got \"{other}\""
        ))),
    }
}

fn req_kind(cfg: &RunConfig) -> Result<SurfaceKind, CliError> {
    match kind_opt(cfg) {
        Some(s) => parse_kind(&s),
        None => Err(CliError::Usage("--kind is required (k3 or abelian)".into())),
    }
}

fn kind_or_k3(cfg: &RunConfig) -> Result<SurfaceKind, CliError> {
    match kind_opt(cfg) {
        Some(s) => parse_kind(&s),
        None => Ok(SurfaceKind::K3),
    }
}

fn kind_opt(cfg: &RunConfig) -> Option<String> {
    cfg.kind
        .clone()
        .or_else(|| cfg.surface.as_ref().and_then(|s| s.kind.clone()))
}

fn req_space(cfg: &RunConfig) -> Result<Space, CliError> {
    match cfg.space.as_deref() {
        Some("m") | Some("mv") => Ok(Space::Mv),
        Some("k") | Some("kv") => Ok(Space::Kv),
        Some(other) => Err(CliError::Usage(format!(
            "space must be \"m\" or \"k\", got \"{other}\""
        ))),
        None => Err(CliError::Usage("--space is required (m or k)".into())),
    }
}

fn req_i64(value: Option<i64>, name: &str) -> Result<i64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}

fn big_coords(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn to_mukai(mc: &MukaiConfig) -> MukaiVector {
    MukaiVector::from_i64(mc.r, &mc.c, mc.s)
}

fn req_surface<'a>(cfg: &'a RunConfig) -> Result<&'a SurfaceConfig, CliError> {
    cfg.surface
        .as_ref()
        .ok_or_else(|| CliError::Usage("an NS Gram matrix is required (--ns or config ns.gram)".into()))
}

fn req_mukai<'a>(cfg: &'a RunConfig) -> Result<&'a MukaiConfig, CliError> {
    cfg.mukai
        .as_ref()
        .ok_or_else(|| CliError::Usage("a Mukai vector is required (--mukai or config mukai)".into()))
}

fn build_model(
    kind: SurfaceKind,
    surface: &SurfaceConfig,
    fallback_ample: Option<&[i64]>,
) -> Result<SurfaceModel, CliError> {
    let rows: Vec<&[i64]> = surface.ns.gram.iter().map(|r| r.as_slice()).collect();
    let ns = Lattice::from_i64(&rows).map_err(|e| CliError::Domain(e.to_string()))?;
    let ample = surface
        .ample
        .as_deref()
        .or(fallback_ample)
        .ok_or_else(|| CliError::Usage("an ample class is required (--ample or config ample)".into()))?;
    SurfaceModel::new(kind, ns, big_coords(ample)).map_err(map_mukai)
}

// ---- error mapping -----------------------------------------------------

fn map_mukai(e: MukaiError) -> CliError {
    CliError::Domain(e.to_string())
}

fn map_classify(e: ClassifyError) -> CliError {
    CliError::Domain(e.to_string())
}

fn map_fujiki(e: FujikiError) -> CliError {
    CliError::Domain(e.to_string())
}

fn map_walls(e: WallsError) -> CliError {
    match e {
        WallsError::Unsupported(msg) => CliError::Unsupported(msg),
        other => CliError::Domain(other.to_string()),
    }
}

// ---- per-command handlers ----------------------------------------------

fn scalar_inputs(kind: SurfaceKind, space: Option<Space>, m: i64, k: i64) -> Value {
    let mut inputs = json!({
        "kind": kind.to_string(),
        "m": m,
        "k": k,
    });
    if let Some(space) = space {
        inputs["space"] = json!(space.to_string());
    }
    inputs
}

fn wall_value(w: &Wall) -> Value {
    json!({
        "d": big_vec(&w.d),
        "d_square": big(&w.d_square),
        "source": match w.source {
            WallSource::PositiveRank => "positive_rank",
            WallSource::TorsionFree => "torsion_free",
        },
    })
}

fn lattice_value(l: &Lattice) -> Value {
    let inv = invariants(l);
    json!({
        "rank": inv.rank,
        "signature": [inv.signature.positive, inv.signature.negative, inv.signature.null],
        "discriminant": match inv.discriminant {
            Some(d) => big_vec(&d),
            None => Value::Null,
        },
    })
}

fn cmd_classify(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = req_kind(cfg)?;
    let space = req_space(cfg)?;
    let m = req_i64(cfg.m, "m")?;
    let k = req_i64(cfg.k, "k")?;
    let r = classify(kind, space, m, k).map_err(map_classify)?;
    let deformation_class = match r.deformation_class {
        Some(DeformationClass::HilbN(n)) => json!(format!("hilb_{n}")),
        Some(DeformationClass::KumN(n)) => json!(format!("kum_{n}")),
        Some(DeformationClass::Og10) => json!("og10"),
        Some(DeformationClass::Og6) => json!("og6"),
        None => Value::Null,
    };
    let outputs = json!({
        "class": r.class.to_string(),
        "deformation_class": deformation_class,
        "dim": r.dim,
        "b2": match r.b2 {
            B2::Known(n) => json!(n),
            B2::Unknown => Value::Null,
        },
        "singularities": r.singularities.to_string(),
        "factoriality": r.factoriality.to_string(),
        "beauville_form": match &r.beauville_gram {
            Some(l) => lattice_value(l),
            None => Value::Null,
        },
        "fujiki": match &r.fujiki {
            Some(c) => big(c),
            None => Value::Null,
        },
    });
    Ok(Report::new(
        "classify",
        scalar_inputs(kind, Some(space), m, k),
        outputs,
        r.warnings,
    ))
}

fn cmd_fujiki(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = req_kind(cfg)?;
    let space = req_space(cfg)?;
    let m = req_i64(cfg.m, "m")?;
    let k = req_i64(cfg.k, "k")?;
    let mut warnings = Vec::new();
    let value = match (kind, space) {
        (SurfaceKind::K3, Space::Mv) => fujiki_mv(m, k).map_err(map_fujiki)?.value,
        (SurfaceKind::Abelian, Space::Kv) => match fujiki_kv(m, k) {
            Ok(fv) => fv.value,
            // The (1,2) fiber is an honest K3 surface: the generic-dimension
            // formula does not apply, the surface constant does.
            Err(FujikiError::KvIsK3Surface {
                formula_value,
                surface_constant,
            }) => {
                warnings.push(format!(
                    "the (1, 2) fiber is a K3 surface; reporting its Fujiki constant \
                     {surface_constant} rather than the generic-parameter formula value \
                     {formula_value}"
                ));
                surface_constant
            }
            Err(e) => return Err(map_fujiki(e)),
        },
        _ => {
            return Err(CliError::Unsupported(format!(
                "no closed form wired up for space {space} on a {kind} surface; \
                 supported pairs are (k3, m) and (abelian, k)"
            )))
        }
    };
    let dim = moduli_dim(kind, space, m, k).map_err(map_classify)?;
    let outputs = json!({
        "value": big(&value),
        "dim": dim,
    });
    Ok(Report::new(
        "fujiki",
        scalar_inputs(kind, Some(space), m, k),
        outputs,
        warnings,
    ))
}

fn cmd_walls(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = kind_or_k3(cfg)?;
    let surface = req_surface(cfg)?;
    let mukai = req_mukai(cfg)?;
    let seg_cfg = cfg
        .segment
        .as_ref()
        .ok_or_else(|| CliError::Usage("a segment is required (--segment or config segment)".into()))?;
    let model = build_model(kind, surface, Some(&seg_cfg.h1))?;
    let v = to_mukai(mukai);
    let seg = AmpleSegment::new(&model, big_coords(&seg_cfg.h1), big_coords(&seg_cfg.h2))
        .map_err(map_walls)?;
    let bound = v_norm_bound(&v, &model).map_err(map_walls)?;
    let walls = enumerate_walls(&v, &model, &seg).map_err(map_walls)?;
    let inputs = json!({
        "kind": kind.to_string(),
        "ns": surface.ns.gram,
        "mukai": {"r": mukai.r, "c": mukai.c, "s": mukai.s},
        "segment": {"h1": seg_cfg.h1, "h2": seg_cfg.h2},
    });
    let outputs = json!({
        "bound": rational(&bound),
        "count": walls.len(),
        "walls": walls.iter().map(wall_value).collect::<Vec<_>>(),
    });
    Ok(Report::new("walls", inputs, outputs, Vec::new()))
}

fn cmd_generic(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = kind_or_k3(cfg)?;
    let surface = req_surface(cfg)?;
    let mukai = req_mukai(cfg)?;
    let h = cfg
        .h
        .as_deref()
        .ok_or_else(|| CliError::Usage("a polarization is required (--h or config h)".into()))?;
    let model = build_model(kind, surface, Some(h))?;
    let v = to_mukai(mukai);
    let candidates: Vec<MukaiVector> = cfg
        .candidates
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .map(to_mukai)
        .collect();
    let verdict = is_v_generic_with_candidates(&big_coords(h), &v, &model, &candidates)
        .map_err(map_walls)?;
    let mut inputs = json!({
        "kind": kind.to_string(),
        "ns": surface.ns.gram,
        "mukai": {"r": mukai.r, "c": mukai.c, "s": mukai.s},
        "h": h,
    });
    if let Some(c) = &cfg.candidates {
        inputs["candidates"] = serde_json::to_value(c).expect("candidates serialize");
    }
    let outputs = match verdict {
        Genericity::Generic => json!({"status": "generic", "witness": Value::Null}),
        Genericity::OnWall(w) => json!({"status": "on_wall", "witness": wall_value(&w)}),
        Genericity::Unsupported(reason) => return Err(CliError::Unsupported(reason)),
    };
    Ok(Report::new("generic", inputs, outputs, Vec::new()))
}

fn cmd_vperp(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = req_kind(cfg)?;
    let (lattice, inputs) = match &cfg.full {
        Some(coords) => {
            let l = vperp_explicit(&big_coords(coords), kind).map_err(map_mukai)?;
            (l, json!({"kind": kind.to_string(), "full": coords}))
        }
        None => {
            let k = req_i64(cfg.k, "k")?;
            let l = vperp_abstract(k, kind).map_err(map_mukai)?;
            (l, json!({"kind": kind.to_string(), "k": k}))
        }
    };
    Ok(Report::new(
        "vperp",
        inputs,
        lattice_value(&lattice),
        Vec::new(),
    ))
}

fn cmd_strata(cfg: &RunConfig) -> Result<Report, CliError> {
    let m = req_i64(cfg.m, "m")?;
    let k = req_i64(cfg.k, "k")?;
    let table = strata_dimensions(m, k).map_err(map_fujiki)?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            json!({
                "i": row.i,
                "case": row.case.to_string(),
                "dim": row.dim,
                "upper_bound": row.upper_bound,
                "codim": row.codim,
            })
        })
        .collect();
    let outputs = json!({
        "dim_moduli": table.dim_moduli,
        "min_codim": table.min_codim(),
        "rows": rows,
    });
    Ok(Report::new(
        "strata",
        json!({"m": m, "k": k}),
        outputs,
        Vec::new(),
    ))
}

fn cmd_psi_degree(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = req_kind(cfg)?;
    let m = req_i64(cfg.m, "m")?;
    let k = req_i64(cfg.k, "k")?;
    let degree = psi_degree(m, k, kind).map_err(map_fujiki)?;
    let scaling = pullback_scaling(m, k).map_err(map_fujiki)?;
    let genus = (k as i128)
        .checked_mul((m as i128) * (m as i128))
        .and_then(|x| x.checked_add(1))
        .filter(|&g| i64::try_from(g).is_ok())
        .ok_or_else(|| CliError::Domain("parameters overflow the genus computation".into()))?;
    let outputs = json!({
        "genus": genus as i64,
        "degree": big(&degree),
        "pullback_scaling": big(&scaling),
    });
    Ok(Report::new(
        "psi-degree",
        scalar_inputs(kind, None, m, k),
        outputs,
        Vec::new(),
    ))
}
