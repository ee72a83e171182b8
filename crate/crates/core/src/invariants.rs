//! Conjugacy invariants of a Markov-Dyck shift, computed from its periodic
//! orbits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::graph::{ContractedGraph, DirectedGraph, TreePartition};
use crate::shift::{enumerate_orbits_with, OrbitClass, ShiftContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Neg,
    Pos,
}

/// A primitive cycle of the contracted graph, as the least rotation of its
/// edge names, with the sign of the orbits it multiplies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Multiplier {
    pub sign: Sign,
    pub cycle: Vec<String>,
}

impl Multiplier {
    pub fn neg(cycle: &[&str]) -> Self {
        Multiplier {
            sign: Sign::Neg,
            cycle: cycle.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Neg => '-',
            Sign::Pos => '+',
        };
        write!(f, "({}){s}", self.cycle.join(","))
    }
}

/// Orbit counts for one negative multiplier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierCounts {
    pub multiplier: Multiplier,
    /// period -> number of orbits; zero entries omitted.
    pub counts: BTreeMap<usize, u64>,
    /// Least period with an orbit, if one was seen within the horizon.
    pub lambda: Option<usize>,
    /// `I_{lambda+2} - lambda`, when `lambda + 2` is within the horizon.
    pub delta: Option<i64>,
}

impl MultiplierCounts {
    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTable {
    /// Number of edges of the contracted graph.
    pub nu: usize,
    /// Number of tree edges.
    pub tau: usize,
    /// Number of vertices of the contracted graph.
    pub contracted_vertices: usize,
    pub max_period: usize,
    /// Neutral orbits by period.
    pub i0: BTreeMap<usize, u64>,
    /// Orbits with a negative multiplier by period.
    pub ineg: BTreeMap<usize, u64>,
    /// Orbits with a positive multiplier by period.
    pub ipos: BTreeMap<usize, u64>,
    /// Negative multipliers in multiplier order.
    pub multipliers: Vec<MultiplierCounts>,
    /// Number of fixed points with a negative multiplier.
    pub fixed_neg: u64,
    /// Loop multipliers grouped by the contracted vertex carrying the loop.
    pub compat: Vec<Vec<Multiplier>>,
    /// Neutral orbits `e- e+` grouped by the contracted vertex of `s(e)`.
    pub i2_by_part: BTreeMap<String, u64>,
}

fn get(m: &BTreeMap<usize, u64>, k: usize) -> u64 {
    m.get(&k).copied().unwrap_or(0)
}

impl InvariantTable {
    pub fn i0(&self, k: usize) -> u64 {
        get(&self.i0, k)
    }

    pub fn ineg(&self, k: usize) -> u64 {
        get(&self.ineg, k)
    }

    pub fn ipos(&self, k: usize) -> u64 {
        get(&self.ipos, k)
    }

    pub fn entry(&self, mu: &Multiplier) -> Option<&MultiplierCounts> {
        self.multipliers.iter().find(|m| &m.multiplier == mu)
    }

    /// `I^(mu)_k`; zero for multipliers never seen.
    pub fn ik(&self, mu: &Multiplier, k: usize) -> u64 {
        self.entry(mu).map_or(0, |m| m.count(k))
    }

    pub fn lambda(&self, mu: &Multiplier) -> Option<usize> {
        self.entry(mu).and_then(|m| m.lambda)
    }

    pub fn delta(&self, mu: &Multiplier) -> Option<i64> {
        self.entry(mu).and_then(|m| m.delta)
    }

    /// Multipliers whose cycle is a loop of the contracted graph.
    pub fn loop_multipliers(&self) -> impl Iterator<Item = &MultiplierCounts> {
        self.multipliers.iter().filter(|m| m.multiplier.len() == 1)
    }

    /// Multipliers of a given cycle length.
    pub fn multipliers_of_length(&self, len: usize) -> impl Iterator<Item = &MultiplierCounts> {
        self.multipliers.iter().filter(move |m| m.multiplier.len() == len)
    }

    /// Fails unless every loop multiplier has its `Delta` within the horizon.
    pub fn check_horizon(&self) -> Result<()> {
        for m in self.loop_multipliers() {
            if m.delta.is_none() {
                let needed = m.lambda.map_or(self.max_period + 1, |l| l + 2);
                return Err(Error::HorizonTooSmall {
                    multiplier: m.multiplier.to_string(),
                    horizon: self.max_period,
                    needed,
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialises")
    }
}

/// Invariant table from all orbits of period `<= max_period`.
pub fn compute_invariants(g: &DirectedGraph, max_period: usize) -> Result<InvariantTable> {
    let ctx = ShiftContext::new(g)?;
    compute_invariants_with(&ctx, max_period, &SearchConfig::default())
}

pub fn compute_invariants_with(
    ctx: &ShiftContext,
    max_period: usize,
    config: &SearchConfig,
) -> Result<InvariantTable> {
    let table = tabulate(ctx, max_period, config)?;
    table.check_horizon()?;
    Ok(table)
}

/// Builds the table without checking that the horizon covers every `Delta`.
pub fn tabulate(ctx: &ShiftContext, max_period: usize, config: &SearchConfig) -> Result<InvariantTable> {
    if max_period < 2 {
        return Err(Error::InvalidParams(format!(
            "horizon must be at least 2, got {max_period}"
        )));
    }
    let g = &ctx.graph;
    let c = &ctx.contracted;
    let cg = c.graph();
    let mut i0 = BTreeMap::new();
    let mut ineg = BTreeMap::new();
    let mut ipos = BTreeMap::new();
    let mut per_mult: BTreeMap<Multiplier, BTreeMap<usize, u64>> = BTreeMap::new();
    let mut i2_by_part: BTreeMap<String, u64> = BTreeMap::new();

    // every loop of the contracted graph is a multiplier, even if unseen
    for e in cg.edge_ids().filter(|&e| cg.src(e) == cg.dst(e)) {
        per_mult.entry(Multiplier::neg(&[cg.edge_name(e)])).or_default();
    }

    for k in 1..=max_period {
        let orbits = enumerate_orbits_with(ctx, k, config)?;
        for (orbit, class) in &orbits {
            match class {
                OrbitClass::Neutral(_) => {
                    *i0.entry(k).or_default() += 1;
                    if k == 2 {
                        let e = orbit.word[0].edge().expect("shift words carry edges");
                        let part = cg.vertex_name(c.hat_vertex(g.src(e))).to_string();
                        *i2_by_part.entry(part).or_default() += 1;
                    }
                }
                OrbitClass::NegMultiplier { .. } => {
                    *ineg.entry(k).or_default() += 1;
                    let mu = class.multiplier(c).expect("multiplier class");
                    *per_mult.entry(mu).or_default().entry(k).or_default() += 1;
                }
                OrbitClass::PosMultiplier { .. } => {
                    *ipos.entry(k).or_default() += 1;
                }
            }
        }
    }

    let multipliers: Vec<MultiplierCounts> = per_mult
        .into_iter()
        .map(|(multiplier, counts)| {
            let lambda = counts.keys().next().copied();
            let delta = lambda
                .filter(|l| l + 2 <= max_period)
                .map(|l| get(&counts, l + 2) as i64 - l as i64);
            MultiplierCounts {
                multiplier,
                counts,
                lambda,
                delta,
            }
        })
        .collect();

    let mut groups: BTreeMap<String, Vec<Multiplier>> = BTreeMap::new();
    for e in cg.edge_ids().filter(|&e| cg.src(e) == cg.dst(e)) {
        groups
            .entry(cg.vertex_name(cg.src(e)).to_string())
            .or_default()
            .push(Multiplier::neg(&[cg.edge_name(e)]));
    }
    let compat = groups.into_values().collect();

    Ok(InvariantTable {
        nu: cg.edge_count(),
        tau: ctx.partition.tree_edge_count(),
        contracted_vertices: cg.vertex_count(),
        max_period,
        fixed_neg: get(&ineg, 1),
        i0,
        ineg,
        ipos,
        multipliers,
        compat,
        i2_by_part,
    })
}

/// Whether two loop multipliers sit at the same contracted vertex.
pub fn multiplier_compatible(t: &InvariantTable, m1: &Multiplier, m2: &Multiplier) -> Result<bool> {
    let class_of = |m: &Multiplier| {
        t.compat
            .iter()
            .position(|class| class.contains(m))
            .ok_or_else(|| Error::UnknownMultiplier(m.to_string()))
    };
    Ok(class_of(m1)? == class_of(m2)?)
}

/// Multiset of neutral two-orbit counts per contracted vertex, computed from
/// the orbits of period two.
pub fn i2_parts(g: &DirectedGraph, p: &TreePartition, c: &ContractedGraph) -> Result<BTreeMap<String, u64>> {
    let ctx = ShiftContext {
        graph: g.clone(),
        partition: p.clone(),
        contracted: c.clone(),
    };
    let orbits = enumerate_orbits_with(&ctx, 2, &SearchConfig::default())?;
    let cg = c.graph();
    let mut parts: BTreeMap<String, u64> = cg
        .vertex_names()
        .iter()
        .map(|v| (v.clone(), 0))
        .collect();
    for (orbit, class) in orbits {
        if class.is_neutral() {
            let e = orbit.word[0].edge().expect("shift words carry edges");
            *parts
                .get_mut(cg.vertex_name(c.hat_vertex(g.src(e))))
                .expect("contracted vertex") += 1;
        }
    }
    Ok(parts)
}

/// Sorted values of [`i2_parts`].
pub fn i2_multiset(parts: &BTreeMap<String, u64>) -> Vec<u64> {
    let mut v: Vec<u64> = parts.values().copied().collect();
    v.sort_unstable();
    v
}

/// Closed-form invariants of the height-two spherically homogeneous graph
/// with branching `K`, `L` and leaf multiplicity `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sh2ClosedForm {
    pub i5: u64,
    pub i9: u64,
    pub i10: u64,
    pub i4_0: u64,
    pub nu: u64,
    pub tau: u64,
}

pub fn closed_form_sh2(k: u64, l: u64, m: u64) -> Result<Sh2ClosedForm> {
    if k == 0 || l == 0 || m == 0 {
        return Err(Error::InvalidParams(format!(
            "K, L, M must be positive, got ({k},{l},{m})"
        )));
    }
    if (k, l, m) == (1, 1, 1) {
        return Err(Error::DegenerateCycle);
    }
    Ok(Sh2ClosedForm {
        i5: k + l + m,
        i9: k * (k * k + 3 * k * l + 2 * k * m + 7 * l * m + 2 * l * l + 2 * m * m)
            + l * (l * l + 3 * l * m + 2 * m * m)
            + m * m * m,
        i10: k * k + l * l + m * m + 3 * k * l + 3 * l * m + 3 * k * m,
        i4_0: k * k - k + k * l * l + k * l * m * m + k * k * l * m,
        nu: k * l * m,
        tau: k + k * l,
    })
}

/// Orbit counts of the height-two spherically homogeneous graph, derived from
/// the return-word generating functions rather than from the printed
/// formulas of [`closed_form_sh2`].
///
/// Every multiplier cycle runs root, child, leaf, so a period `3 + 2d` orbit
/// with exponent one is a choice of return words of total length `2d` at
/// those three vertices. Period ten needs exponent two, and swapping the two
/// halves is a rotation, hence the halving.
pub fn orbit_count_sh2(k: u64, l: u64, m: u64) -> Result<Sh2ClosedForm> {
    closed_form_sh2(k, l, m)?;
    // [x^i] of 1/(1 - c_v(x)) for v = root, child, leaf, up to x^3
    let degree = [k, l, m];
    let mut c = [[0u64; 4]; 3];
    let mut seq = [[1u64, 0, 0, 0]; 3];
    for i in 1..4 {
        for v in 0..3 {
            c[v][i] = degree[v] * seq[(v + 1) % 3][i - 1];
        }
        for v in 0..3 {
            seq[v][i] = (1..=i).map(|j| c[v][j] * seq[v][i - j]).sum();
        }
    }
    let mut path = [1u64, 0, 0, 0];
    for s in &seq {
        let mut next = [0u64; 4];
        for i in 0..4 {
            next[i] = (0..=i).map(|j| path[j] * s[i - j]).sum();
        }
        path = next;
    }
    let pairs = 2 * path[2] + path[1] * path[1];
    let half = |x: u64| x * x.saturating_sub(1) / 2;
    Ok(Sh2ClosedForm {
        i5: path[1],
        i9: path[3],
        i10: (pairs - path[1]) / 2,
        i4_0: half(k) + k * l + k * half(l) + k * l * m + k * l * half(m) + k * k * l * m,
        nu: k * l * m,
        tau: k + k * l,
    })
}

/// Distinct values taken by `f` over the loop multipliers.
pub(crate) fn loop_values<T: Ord>(t: &InvariantTable, f: impl Fn(&MultiplierCounts) -> T) -> BTreeSet<T> {
    t.loop_multipliers().map(f).collect()
}
