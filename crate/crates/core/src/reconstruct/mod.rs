//! Recognition of the four graph families from invariant tables, recovery of
//! their parameters, and round-trip verification.

mod f4;
mod f5;
mod sh2;
mod three_vertex;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::families::{
    build_family_iv, build_family_v, build_sh2, build_three_vertex, FamilyIVParams, FamilyVParams,
    SphericalParams, ThreeVertexParams,
};
use crate::graph::{are_isomorphic, DirectedGraph};
use crate::invariants::{loop_values, tabulate, InvariantTable};
use crate::shift::ShiftContext;

pub use f4::reconstruct_f4;
pub use f5::reconstruct_f5;
pub use sh2::{reconstruct_sh2, solve_sh2, Sh2Counting, Sh2Inputs, Sh2Solution};
pub use three_vertex::{
    reconstruct_three_vertex, reconstruct_three_vertex_with, ThreeVertexCase, ThreeVertexReconstruction,
};

/// Family recognised from an invariant table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyTag {
    #[serde(rename = "F_IV")]
    FIV {
        #[serde(rename = "H")]
        big_h: usize,
    },
    #[serde(rename = "F_V")]
    FV,
    #[serde(rename = "SH2")]
    Sh2,
    ThreeVertex,
    Unknown,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::FIV { big_h } => write!(f, "F_IV({big_h})"),
            FamilyTag::FV => f.write_str("F_V"),
            FamilyTag::Sh2 => f.write_str("SH2"),
            FamilyTag::ThreeVertex => f.write_str("ThreeVertex"),
            FamilyTag::Unknown => f.write_str("Unknown"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Use `floor((Lambda-1)/2)` in the bound on `tau`, which matches the
    /// constructor's inequality for odd `H`; the default is the ceiling.
    pub floor_c3: bool,
}

/// Every family whose predicate holds, in the fixed order F_IV, F_V, SH2,
/// ThreeVertex; `primary` is the first, or `Unknown`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub primary: FamilyTag,
    pub tags: Vec<FamilyTag>,
    /// Families the horizon was too short to decide. Only ever lower in the
    /// order than `primary`, which is therefore settled.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undecided: Vec<FamilyTag>,
}

impl Classification {
    pub fn has(&self, tag: FamilyTag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn family_iv_height(&self) -> Option<usize> {
        self.tags.iter().find_map(|t| match t {
            FamilyTag::FIV { big_h } => Some(*big_h),
            _ => None,
        })
    }
}

pub fn classify_family(t: &InvariantTable) -> Result<Classification> {
    classify_family_with(t, ClassifyOptions::default())
}

pub fn classify_family_with(t: &InvariantTable, opts: ClassifyOptions) -> Result<Classification> {
    t.check_horizon()?;
    let mut tags = Vec::new();
    let mut undecided = Vec::new();
    let single = t.contracted_vertices == 1;
    let lambdas = loop_values(t, |m| m.lambda);
    let deltas = loop_values(t, |m| m.delta);

    if single && t.nu == 4 && lambdas.len() == 1 && deltas.len() == 1 && deltas.contains(&Some(2)) {
        if let Some(Some(lambda)) = lambdas.first().copied() {
            let h = lambda - 1;
            let half = if opts.floor_c3 { h / 2 } else { h.div_ceil(2) };
            if t.tau <= h + half {
                tags.push(FamilyTag::FIV { big_h: h });
            }
        }
    }
    if single && deltas.contains(&Some(t.nu as i64 - 1)) {
        tags.push(FamilyTag::FV);
    }
    if single && t.nu > 0 && lambdas.len() == 1 && lambdas.contains(&Some(3)) {
        if t.max_period < 10 {
            if tags.is_empty() {
                let first = t.loop_multipliers().next().expect("nu > 0");
                return Err(Error::HorizonTooSmall {
                    multiplier: first.multiplier.to_string(),
                    horizon: t.max_period,
                    needed: 10,
                });
            }
            undecided.push(FamilyTag::Sh2);
        } else if [5, 9, 10].iter().all(|&k| loop_values(t, |m| m.count(k)).len() == 1) {
            tags.push(FamilyTag::Sh2);
        }
    }
    if t.contracted_vertices == 2 {
        let s = t.loop_multipliers().count() as u64;
        let a = t.nu as u64 - s;
        if t.i0(2) == 1 + s + a {
            tags.push(FamilyTag::ThreeVertex);
        }
    }
    let primary = tags.first().copied().unwrap_or(FamilyTag::Unknown);
    Ok(Classification {
        primary,
        tags,
        undecided,
    })
}

/// Source of invariant tables for the reference graphs built during
/// reconstruction.
pub trait InvariantOracle: Sync {
    /// The table of `g` up to `max_period`, without the horizon check.
    fn invariants(&self, g: &DirectedGraph, max_period: usize) -> Result<InvariantTable>;
}

/// Oracle backed by exhaustive orbit enumeration.
#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerationOracle {
    pub config: SearchConfig,
}

impl EnumerationOracle {
    pub fn new(config: SearchConfig) -> Self {
        EnumerationOracle { config }
    }
}

impl InvariantOracle for EnumerationOracle {
    fn invariants(&self, g: &DirectedGraph, max_period: usize) -> Result<InvariantTable> {
        let ctx = ShiftContext::new(g)?;
        tabulate(&ctx, max_period, &self.config)
    }
}

/// Grows the horizon until every loop multiplier has its `Delta`.
pub(crate) fn table_with_deltas(g: &DirectedGraph, oracle: &dyn InvariantOracle, start: usize) -> Result<InvariantTable> {
    let mut horizon = start.max(2);
    loop {
        let t = oracle.invariants(g, horizon)?;
        match t.check_horizon() {
            Ok(()) => return Ok(t),
            Err(Error::HorizonTooSmall { needed, .. }) => horizon = needed.max(horizon + 1),
            Err(e) => return Err(e),
        }
    }
}

/// Like [`table_with_deltas`], and also long enough to classify.
pub(crate) fn classified_table(
    g: &DirectedGraph,
    oracle: &dyn InvariantOracle,
    start: usize,
    opts: ClassifyOptions,
) -> Result<(InvariantTable, Classification)> {
    let mut t = table_with_deltas(g, oracle, start)?;
    loop {
        match classify_family_with(&t, opts) {
            Ok(c) => return Ok((t, c)),
            Err(Error::HorizonTooSmall { needed, .. }) if needed > t.max_period => {
                t = table_with_deltas(g, oracle, needed)?;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Parameters of any of the four families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum FamilyParams {
    #[serde(rename = "f4")]
    F4(FamilyIVParams),
    #[serde(rename = "f5")]
    F5(FamilyVParams),
    #[serde(rename = "sh2")]
    Sh2(SphericalParams),
    #[serde(rename = "tv")]
    ThreeVertex(ThreeVertexParams),
}

impl FamilyParams {
    pub fn build(&self, strict: bool) -> Result<DirectedGraph> {
        match self {
            FamilyParams::F4(p) => build_family_iv(p, strict),
            FamilyParams::F5(p) => build_family_v(p),
            FamilyParams::Sh2(p) => build_sh2(p),
            FamilyParams::ThreeVertex(p) => build_three_vertex(p),
        }
    }

    /// A horizon large enough for classification and reconstruction.
    pub fn suggested_horizon(&self) -> usize {
        match self {
            FamilyParams::F4(p) => p.big_h + 3,
            FamilyParams::F5(p) => 3 * p.ell + 3,
            FamilyParams::Sh2(_) => 10,
            FamilyParams::ThreeVertex(_) => 6,
        }
    }
}

/// Result of reconstructing a graph from its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub classification: Classification,
    /// `None` when the graph is in no family.
    pub params: Option<FamilyParams>,
    /// Branch of the three-vertex analysis, when that family applied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<ThreeVertexCase>,
    pub table: InvariantTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundTripOptions {
    pub horizon: usize,
    pub classify: ClassifyOptions,
    /// Build family IV inputs with the strict parameter set.
    pub strict: bool,
}

impl RoundTripOptions {
    pub fn new(horizon: usize) -> Self {
        RoundTripOptions {
            horizon,
            classify: ClassifyOptions::default(),
            strict: false,
        }
    }
}

/// Classifies `g` and recovers the parameters of its primary family.
pub fn reconstruct(g: &DirectedGraph, opts: &RoundTripOptions, oracle: &dyn InvariantOracle) -> Result<Reconstruction> {
    let t = oracle.invariants(g, opts.horizon)?;
    let classification = classify_family_with(&t, opts.classify)?;
    let mut case = None;
    let params = match classification.primary {
        FamilyTag::FIV { .. } => Some(FamilyParams::F4(reconstruct_f4(g, oracle, opts.classify)?)),
        FamilyTag::FV => Some(FamilyParams::F5(reconstruct_f5(&t, oracle)?)),
        FamilyTag::Sh2 => Some(FamilyParams::Sh2(reconstruct_sh2(&t)?)),
        FamilyTag::ThreeVertex => {
            let ctx = ShiftContext::new(g)?;
            let r = reconstruct_three_vertex_with(&t, &ctx.contracted, oracle)?;
            case = Some(r.case);
            Some(FamilyParams::ThreeVertex(r.params))
        }
        FamilyTag::Unknown => None,
    };
    Ok(Reconstruction {
        classification,
        params,
        case,
        table: t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundTripStatus {
    Pass,
    Fail,
    /// The graph is in no family, so nothing was reconstructed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub status: RoundTripStatus,
    pub input: Option<FamilyParams>,
    #[serde(flatten)]
    pub reconstruction: Reconstruction,
    /// Vertex of the input graph -> vertex of the rebuilt graph.
    pub witness: Option<BTreeMap<String, String>>,
    /// Why the round trip failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
}

/// What to round-trip: family parameters or an arbitrary graph.
#[derive(Debug, Clone)]
pub enum RoundTripInput {
    Params(FamilyParams),
    Graph(DirectedGraph),
}

/// Build, tabulate, classify, reconstruct, rebuild and compare.
pub fn verify_roundtrip(
    input: &RoundTripInput,
    opts: &RoundTripOptions,
    oracle: &dyn InvariantOracle,
) -> Result<RoundTripReport> {
    let (g, params_in) = match input {
        RoundTripInput::Params(p) => (p.build(opts.strict)?, Some(p.clone())),
        RoundTripInput::Graph(g) => (g.clone(), None),
    };
    let reconstruction = reconstruct(&g, opts, oracle)?;
    let Some(params) = &reconstruction.params else {
        return Ok(RoundTripReport {
            status: RoundTripStatus::Skipped,
            input: params_in,
            reconstruction,
            witness: None,
            diff: None,
        });
    };
    let rebuilt = params.build(false)?;
    let (status, witness, diff) = match are_isomorphic(&g, &rebuilt)? {
        Some(map) => {
            let witness = g
                .vertex_ids()
                .map(|v| {
                    (
                        g.vertex_name(v).to_string(),
                        rebuilt.vertex_name(map[v.0]).to_string(),
                    )
                })
                .collect();
            (RoundTripStatus::Pass, Some(witness), None)
        }
        None => {
            let diff = format!(
                "recovered {params:?} builds {} vertices / {} edges, input has {} / {}",
                rebuilt.vertex_count(),
                rebuilt.edge_count(),
                g.vertex_count(),
                g.edge_count()
            );
            (RoundTripStatus::Fail, None, Some(diff))
        }
    };
    Ok(RoundTripReport {
        status,
        input: params_in,
        reconstruction,
        witness,
        diff,
    })
}
