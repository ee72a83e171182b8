use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EnumerationOracle, InvariantOracle};
use crate::error::{Error, Result};
use crate::families::{build_three_vertex, ThreeVertexParams};
use crate::graph::{are_isomorphic, ContractedGraph};
use crate::invariants::{i2_multiset, multiplier_compatible, InvariantTable, MultiplierCounts};

/// Branch of the case analysis that recovered the parameters.
///
/// `alpha` is the contracted vertex holding the tree edge `a0 -> a1`, `beta`
/// the other one; `da` counts edges `a0 -> b` and `dA` edges `a1 -> a0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeVertexCase {
    /// `dA > 0`: some loop multiplier first appears at period two.
    TreeReturn,
    /// `dA = 0` and both contracted vertices carry loops.
    IncompatibleLoops,
    /// Loops at one vertex only, `1 + da != Tba`; `I4` of a loop decides.
    OneLoopVertexByI4,
    /// Loops at one vertex only, `1 + da = Tba != Tab - da`; `I6` decides.
    OneLoopVertexByI6,
    /// Loops at one vertex only, `1 + da = Tba = Tab - da` and `da = 0`;
    /// both orientations give isomorphic graphs.
    OneLoopVertexSymmetric,
    /// As above with `da > 0`; the shape of the contracted graph decides.
    OneLoopVertexByShape,
    /// No loops, `da > 0`.
    LooplessCrossing,
    /// No loops, `da = 0`; the neutral two-orbits per vertex decide.
    LooplessByParts,
}

impl ThreeVertexCase {
    pub const ALL: [ThreeVertexCase; 8] = [
        ThreeVertexCase::TreeReturn,
        ThreeVertexCase::IncompatibleLoops,
        ThreeVertexCase::OneLoopVertexByI4,
        ThreeVertexCase::OneLoopVertexByI6,
        ThreeVertexCase::OneLoopVertexSymmetric,
        ThreeVertexCase::OneLoopVertexByShape,
        ThreeVertexCase::LooplessCrossing,
        ThreeVertexCase::LooplessByParts,
    ];

    /// The branch a parameter tuple belongs to.
    pub fn of(p: &ThreeVertexParams) -> Self {
        let ThreeVertexParams {
            taa,
            tbb,
            tab,
            tba,
            da,
            d_up,
        } = *p;
        if d_up > 0 {
            ThreeVertexCase::TreeReturn
        } else if taa > 0 && tbb > 0 {
            ThreeVertexCase::IncompatibleLoops
        } else if taa + tbb > 0 {
            if 1 + da != tba {
                ThreeVertexCase::OneLoopVertexByI4
            } else if tab - da != tba {
                ThreeVertexCase::OneLoopVertexByI6
            } else if da == 0 {
                ThreeVertexCase::OneLoopVertexSymmetric
            } else {
                ThreeVertexCase::OneLoopVertexByShape
            }
        } else if da > 0 {
            ThreeVertexCase::LooplessCrossing
        } else {
            ThreeVertexCase::LooplessByParts
        }
    }
}

impl fmt::Display for ThreeVertexCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ThreeVertexCase::TreeReturn => "tree return (dA > 0)",
            ThreeVertexCase::IncompatibleLoops => "loops at both vertices",
            ThreeVertexCase::OneLoopVertexByI4 => "loops at one vertex, I4 test",
            ThreeVertexCase::OneLoopVertexByI6 => "loops at one vertex, I6 test",
            ThreeVertexCase::OneLoopVertexSymmetric => "loops at one vertex, symmetric",
            ThreeVertexCase::OneLoopVertexByShape => "loops at one vertex, contracted shape",
            ThreeVertexCase::LooplessCrossing => "no loops, da > 0",
            ThreeVertexCase::LooplessByParts => "no loops, da = 0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeVertexReconstruction {
    pub params: ThreeVertexParams,
    pub case: ThreeVertexCase,
}

fn fallthrough(msg: impl Into<String>) -> Error {
    Error::CaseFallthrough(msg.into())
}

fn half(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

/// The contracted graph read as a 2x2 matrix over its vertex ids.
struct Shape<'c> {
    c: &'c ContractedGraph,
    loops: [usize; 2],
    /// `off[v]`: edges from `v` to the other vertex.
    off: [usize; 2],
}

impl<'c> Shape<'c> {
    fn new(c: &'c ContractedGraph) -> Result<Self> {
        let g = c.graph();
        if g.vertex_count() != 2 {
            return Err(Error::NotInFamily(format!(
                "contracted graph has {} vertices, not 2",
                g.vertex_count()
            )));
        }
        let m = g.adjacency();
        Ok(Shape {
            c,
            loops: [m[0][0] as usize, m[1][1] as usize],
            off: [m[0][1] as usize, m[1][0] as usize],
        })
    }

    /// Contracted vertex carrying a loop multiplier.
    fn vertex_of(&self, m: &MultiplierCounts) -> Result<usize> {
        let g = self.c.graph();
        g.edge_by_name(&m.multiplier.cycle[0])
            .map(|e| g.src(e).0)
            .ok_or_else(|| Error::UnknownMultiplier(m.multiplier.to_string()))
    }

    fn crosses(&self, m: &MultiplierCounts) -> bool {
        let g = self.c.graph();
        let srcs: Vec<Option<usize>> = m
            .multiplier
            .cycle
            .iter()
            .map(|e| g.edge_by_name(e).map(|e| g.src(e).0))
            .collect();
        srcs[0].is_some() && srcs[0] != srcs[1]
    }

    /// Parameters with `alpha` as the tree vertex, if they are admissible.
    fn params(&self, alpha: usize, da: usize, d_up: usize) -> Option<ThreeVertexParams> {
        let beta = 1 - alpha;
        let p = ThreeVertexParams::new(
            self.loops[alpha],
            self.loops[beta],
            self.off[alpha],
            self.off[beta],
            da,
            d_up,
        );
        p.validate().ok().map(|_| p)
    }

    /// `I4` of a fixed loop multiplier at `v` under `p` with tree vertex
    /// `alpha`: the out-degree of `a0`, or of `b`.
    fn fixed_loop_i4(&self, p: &ThreeVertexParams, alpha: usize, v: usize) -> u64 {
        if v == alpha {
            (p.taa - p.d_up + 1 + p.da) as u64
        } else {
            (p.tbb + p.tba) as u64
        }
    }
}

/// `x / y` when exact.
fn quotient(x: i64, y: i64, what: &str) -> Result<usize> {
    if y == 0 || x % y != 0 || x / y < 0 {
        return Err(fallthrough(format!("{what} = {x}/{y} is not a natural number")));
    }
    Ok((x / y) as usize)
}

type Fingerprint = (
    BTreeMap<usize, u64>,
    BTreeMap<usize, u64>,
    BTreeMap<usize, u64>,
    Vec<Vec<(usize, u64)>>,
    Vec<u64>,
);

/// Everything in a table that does not depend on edge names.
fn fingerprint(t: &InvariantTable) -> Fingerprint {
    let mut mults: Vec<Vec<(usize, u64)>> = t
        .multipliers
        .iter()
        .map(|m| {
            let mut v: Vec<(usize, u64)> = m.counts.iter().map(|(&k, &n)| (k, n)).collect();
            v.insert(0, (0, m.multiplier.len() as u64));
            v
        })
        .collect();
    mults.sort();
    (
        t.i0.clone(),
        t.ineg.clone(),
        t.ipos.clone(),
        mults,
        i2_multiset(&t.i2_by_part),
    )
}

/// Picks one of several candidates: the ones whose tables match `t`, and
/// among those any one if they all build isomorphic graphs.
fn settle(
    mut cands: Vec<(usize, ThreeVertexParams)>,
    t: &InvariantTable,
    oracle: &dyn InvariantOracle,
) -> Result<ThreeVertexParams> {
    cands.sort_by_key(|&(a, p)| (a, p.taa, p.tbb, p.tab, p.tba, p.da, p.d_up));
    cands.dedup_by_key(|(_, p)| *p);
    if cands.len() > 1 {
        let target = fingerprint(t);
        let mut kept = Vec::new();
        for (a, p) in cands {
            let other = oracle.invariants(&build_three_vertex(&p)?, t.max_period)?;
            if fingerprint(&other) == target {
                kept.push((a, p));
            }
        }
        cands = kept;
    }
    let (_, first) = *cands
        .first()
        .ok_or_else(|| fallthrough("no orientation is consistent with the table"))?;
    let g = build_three_vertex(&first)?;
    for (_, p) in &cands[1..] {
        if are_isomorphic(&g, &build_three_vertex(p)?)?.is_none() {
            return Err(fallthrough(format!(
                "{first:?} and {p:?} share every invariant but are not isomorphic"
            )));
        }
    }
    Ok(first)
}

pub fn reconstruct_three_vertex(t: &InvariantTable, c: &ContractedGraph) -> Result<ThreeVertexReconstruction> {
    reconstruct_three_vertex_with(t, c, &EnumerationOracle::default())
}

/// Recovers the adjacency matrix from the table and the contracted graph.
///
/// Which contracted vertex holds the tree edge is not visible in the
/// contracted graph; each branch derives `da` and `dA` for the orientations
/// its invariants allow, and any remaining choice is settled by comparing
/// the tables of the candidate graphs with `t`.
pub fn reconstruct_three_vertex_with(
    t: &InvariantTable,
    c: &ContractedGraph,
    oracle: &dyn InvariantOracle,
) -> Result<ThreeVertexReconstruction> {
    if t.max_period < 4 {
        return Err(Error::HorizonTooSmall {
            multiplier: "three-vertex".into(),
            horizon: t.max_period,
            needed: 4,
        });
    }
    let shape = Shape::new(c)?;
    let loops: Vec<&MultiplierCounts> = t.loop_multipliers().collect();
    let fixed: Vec<&MultiplierCounts> = loops.iter().copied().filter(|m| m.lambda == Some(1)).collect();
    let from_two: Vec<&MultiplierCounts> = loops.iter().copied().filter(|m| m.lambda == Some(2)).collect();
    // two-edge multipliers of period-two orbits that cross between the
    // vertices; pairs of loops at one vertex are excluded
    let crossing: Vec<&MultiplierCounts> = t
        .multipliers_of_length(2)
        .filter(|m| m.count(2) > 0 && shape.crosses(m))
        .collect();
    let i1 = t.ineg(1) as usize;
    let i2 = t.ineg(2) as i64;

    let mut cands: Vec<(usize, ThreeVertexParams)> = Vec::new();
    if let Some(first) = from_two.first() {
        let alpha = shape.vertex_of(first)?;
        let d_up = from_two.len();
        let mut same = 0;
        for m in &fixed {
            if multiplier_compatible(t, &m.multiplier, &first.multiplier)? {
                same += 1;
            }
        }
        let taa = same + d_up;
        let tab = first.count(4) as i64 - taa as i64 - 1;
        if taa != shape.loops[alpha] || tab != shape.off[alpha] as i64 {
            return Err(fallthrough(format!(
                "Taa = {taa}, Tab = {tab} disagree with the contracted graph"
            )));
        }
        let tbb = shape.loops[1 - alpha];
        let tba = shape.off[1 - alpha] as i64;
        let rest = i2 - half(taa - d_up) as i64 - half(tbb) as i64 - d_up as i64;
        let da = quotient(rest, tba, "da")?;
        cands.extend(shape.params(alpha, da, d_up).map(|p| (alpha, p)));
    } else if let Some(other) = fixed
        .iter()
        .find(|m| !multiplier_compatible(t, &m.multiplier, &fixed[0].multiplier).unwrap_or(true))
    {
        let e = fixed[0];
        let class_size = |x: &MultiplierCounts| -> Result<usize> {
            let mut n = 0;
            for m in &fixed {
                if multiplier_compatible(t, &m.multiplier, &x.multiplier)? {
                    n += 1;
                }
            }
            Ok(n)
        };
        let (te, to) = (class_size(e)?, class_size(other)?);
        // da + Tba and da * Tba
        let sum = e.count(4) as i64 + other.count(4) as i64 - te as i64 - to as i64 - 1;
        let prod = i2 - half(te) as i64 - half(to) as i64;
        let a = (shape.off[0] + shape.off[1]) as i64;
        let b = (shape.off[0] * shape.off[1]) as i64;
        let tba = quotient(b - prod, a - sum, "Tba")?;
        let da = quotient(sum - tba as i64, 1, "da")?;
        for alpha in 0..2 {
            if shape.off[1 - alpha] != tba {
                continue;
            }
            if let Some(p) = shape.params(alpha, da, 0) {
                let ok_e = shape.fixed_loop_i4(&p, alpha, shape.vertex_of(e)?) == e.count(4);
                let ok_o = shape.fixed_loop_i4(&p, alpha, shape.vertex_of(other)?) == other.count(4);
                if ok_e && ok_o {
                    cands.push((alpha, p));
                }
            }
        }
    } else if i1 > 0 {
        let e = fixed[0];
        let at = shape.vertex_of(e)?;
        if shape.loops[at] != i1 {
            return Err(fallthrough(format!("I1- = {i1} but the loop vertex has {}", shape.loops[at])));
        }
        let prod = i2 - half(i1) as i64;
        let sum = crossing.first().map(|m| m.count(4) as i64 - i1 as i64 - 1);
        // loops at the tree vertex, or at the other one
        for alpha in [at, 1 - at] {
            let tba = shape.off[1 - alpha];
            let Ok(da) = quotient(prod, tba as i64, "da") else {
                continue;
            };
            if sum.is_some_and(|s| s != (da + tba) as i64) || (sum.is_none() && da != 0) {
                continue;
            }
            if let Some(p) = shape.params(alpha, da, 0) {
                if shape.fixed_loop_i4(&p, alpha, at) == e.count(4) {
                    cands.push((alpha, p));
                }
            }
        }
    } else if i2 > 0 {
        let mu = crossing
            .first()
            .ok_or_else(|| fallthrough("I2- > 0 without a two-edge multiplier"))?;
        let sum = mu.count(4) as i64 - 1;
        for alpha in 0..2 {
            let tba = shape.off[1 - alpha];
            let Ok(da) = quotient(i2, tba as i64, "da") else {
                continue;
            };
            if (da + tba) as i64 == sum {
                cands.extend(shape.params(alpha, da, 0).map(|p| (alpha, p)));
            }
        }
    } else {
        let parts = i2_multiset(&t.i2_by_part);
        for alpha in 0..2 {
            let mut want = vec![1 + shape.off[alpha] as u64, shape.off[1 - alpha] as u64];
            want.sort_unstable();
            if want == parts {
                cands.extend(shape.params(alpha, 0, 0).map(|p| (alpha, p)));
            }
        }
    }

    let params = settle(cands, t, oracle)?;
    Ok(ThreeVertexReconstruction {
        params,
        case: ThreeVertexCase::of(&params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::compute_invariants;
    use crate::shift::ShiftContext;

    fn roundtrip(p: ThreeVertexParams) -> ThreeVertexReconstruction {
        let g = build_three_vertex(&p).unwrap();
        let t = compute_invariants(&g, 6).unwrap();
        let ctx = ShiftContext::new(&g).unwrap();
        let r = reconstruct_three_vertex(&t, &ctx.contracted).unwrap();
        let back = build_three_vertex(&r.params).unwrap();
        assert!(are_isomorphic(&g, &back).unwrap().is_some(), "{p:?} -> {r:?}");
        r
    }

    #[test]
    fn examples() {
        let p = ThreeVertexParams::new(1, 0, 2, 2, 1, 0);
        let r = roundtrip(p);
        assert_eq!(r.params, p);
        // 1 + da = Tba, so the I4 test cannot separate the orientations
        assert_eq!(r.case, ThreeVertexCase::OneLoopVertexByI6);

        let p = ThreeVertexParams::new(1, 0, 2, 1, 1, 0);
        assert_eq!(roundtrip(p).case, ThreeVertexCase::OneLoopVertexByI4);

        let r = roundtrip(ThreeVertexParams::new(0, 0, 2, 2, 0, 0));
        assert_eq!(r.case, ThreeVertexCase::LooplessByParts);

        let p = ThreeVertexParams::new(2, 1, 1, 1, 0, 1);
        let r = roundtrip(p);
        assert_eq!(r.params, p);
        assert_eq!(r.case, ThreeVertexCase::TreeReturn);
    }

    #[test]
    fn symmetric_case_is_unreachable() {
        // Tab = Tba = 1 and da = 0 force Taa + Tba > 1 and Tab + Tbb > 1, so
        // both vertices carry loops
        for taa in 0..4 {
            for tbb in 0..4 {
                let p = ThreeVertexParams::new(taa, tbb, 1, 1, 0, 0);
                if p.validate().is_ok() {
                    assert_ne!(ThreeVertexCase::of(&p), ThreeVertexCase::OneLoopVertexSymmetric);
                }
            }
        }
    }
}
