//! Validated constructors for four parametrised graph families.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphBuilder};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

/// Parameters of the two-branch tree family: a trunk of length `h`, two
/// branches of lengths `h0 <= h1`, and four tails bringing every leaf to
/// level `H`, each leaf returning to the root along one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyIVParams {
    #[serde(rename = "H")]
    pub big_h: usize,
    pub h: usize,
    pub h0: usize,
    pub h1: usize,
}

impl FamilyIVParams {
    pub fn new(big_h: usize, h: usize, h0: usize, h1: usize) -> Self {
        FamilyIVParams { big_h, h, h0, h1 }
    }

    /// Number of tree edges, `4H - 3h - h0 - h1`.
    pub fn tree_edges(&self) -> usize {
        4 * self.big_h - 3 * self.h - self.h0 - self.h1
    }

    /// Checks the base parameter set: `0 < h < H`, `0 < h0 <= h1 <= H - h`,
    /// and the weak trunk condition `2h >= H`.
    ///
    /// The trunk condition admits the balanced reference graph
    /// `(H, ceil(H/2), floor(H/2), floor(H/2))` for even `H` while still
    /// rejecting degenerate inputs such as `(3,1,1,1)`.
    pub fn validate_base(&self) -> Result<()> {
        let FamilyIVParams { big_h, h, h0, h1 } = *self;
        if h == 0 || h0 == 0 || h1 == 0 {
            return Err(invalid(format!("all parameters must be positive: {self:?}")));
        }
        if h >= big_h {
            return Err(invalid(format!("h < H violated: h={h}, H={big_h}")));
        }
        if h0 > h1 {
            return Err(invalid(format!("h0 <= h1 violated: h0={h0}, h1={h1}")));
        }
        if h1 > big_h - h {
            return Err(invalid(format!("h1 <= H - h violated: h1={h1}, H-h={}", big_h - h)));
        }
        if 2 * h < big_h {
            return Err(invalid(format!("2h >= H violated: h={h}, H={big_h}")));
        }
        Ok(())
    }

    /// Checks the strict parameter set: additionally `h1 <= H - h - h0` and
    /// `3h + h0 + h1 >= 2H + ceil(H/2)`.
    ///
    /// With `tau = 4H - 3h - h0 - h1` the recognition condition
    /// `tau <= H + ceil(H/2)` amounts to `3h + h0 + h1 >= 2H + floor(H/2)`,
    /// which is weaker for odd `H`. This check follows the ceiling.
    pub fn validate_strict(&self) -> Result<()> {
        self.validate_base()?;
        let FamilyIVParams { big_h, h, h0, h1 } = *self;
        if h1 + h0 + h > big_h {
            return Err(invalid(format!(
                "h1 <= H - h - h0 violated: h1={h1}, H-h-h0={}",
                big_h as i64 - h as i64 - h0 as i64
            )));
        }
        if 3 * h + h0 + h1 < 2 * big_h + big_h.div_ceil(2) {
            return Err(invalid(format!(
                "3h + h0 + h1 >= 2H + ceil(H/2) violated: {} < {}",
                3 * h + h0 + h1,
                2 * big_h + big_h.div_ceil(2)
            )));
        }
        if 2 * h <= big_h {
            return Err(invalid(format!("h > H/2 violated: h={h}, H={big_h}")));
        }
        Ok(())
    }
}

pub fn build_family_iv(p: &FamilyIVParams, strict: bool) -> Result<DirectedGraph> {
    if strict {
        p.validate_strict()?;
    } else {
        p.validate_base()?;
    }
    let FamilyIVParams { big_h, h, h0, h1 } = *p;
    let mut b = GraphBuilder::new();
    b.vertex("v0");
    for i in 1..=h {
        b.edge(format!("f{i}"), format!("v{}", i - 1), format!("v{i}"));
    }
    for (alpha, ha) in [(0, h0), (1, h1)] {
        let mut prev = format!("v{h}");
        for i in 1..=ha {
            let v = format!("a{alpha}_{i}");
            b.edge(format!("f{alpha}_{i}"), prev, v.clone());
            prev = v;
        }
        let branch_end = prev;
        let tail = big_h - h - ha;
        for beta in 0..2 {
            let mut prev = branch_end.clone();
            for i in 1..=tail {
                let v = format!("t{alpha}{beta}_{i}");
                b.edge(format!("f{alpha}{beta}_{i}"), prev, v.clone());
                prev = v;
            }
            b.edge(format!("e{alpha}{beta}"), prev, "v0");
        }
    }
    b.build()
}

/// One branch of the trunk-with-legs family: the trunk level `eta` where the
/// legs hang, and `mu[L]` legs of length `L` (legs of length 0 are return
/// edges leaving the trunk vertex itself).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Branch {
    pub eta: usize,
    pub mu: BTreeMap<usize, usize>,
}

impl Branch {
    pub fn new(eta: usize, mu: &[(usize, usize)]) -> Self {
        Branch {
            eta,
            mu: mu.iter().copied().filter(|&(_, m)| m > 0).collect(),
        }
    }

    /// Number of return edges of the branch.
    pub fn total(&self) -> usize {
        self.mu.values().sum()
    }
}

/// A trunk `V(0) .. V(ell)` closed by a top return edge, with branches of legs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyVParams {
    pub ell: usize,
    pub branches: Vec<Branch>,
}

impl FamilyVParams {
    pub fn k(&self) -> usize {
        self.branches.len()
    }

    /// Number of tree edges, `ell + sum L * mu_k(L)`.
    pub fn tree_edges(&self) -> usize {
        self.ell
            + self
                .branches
                .iter()
                .flat_map(|b| b.mu.iter().map(|(l, m)| l * m))
                .sum::<usize>()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if k == 0 {
            return Err(invalid("at least one branch is required"));
        }
        if self.ell + 1 < k {
            return Err(invalid(format!("ell >= K - 1 violated: ell={}, K={k}", self.ell)));
        }
        for w in self.branches.windows(2) {
            if w[0].eta >= w[1].eta {
                return Err(invalid(format!(
                    "eta must be strictly increasing: {} then {}",
                    w[0].eta, w[1].eta
                )));
            }
        }
        for (i, b) in self.branches.iter().enumerate() {
            if b.total() == 0 {
                return Err(invalid(format!("branch {} has no return edges", i + 1)));
            }
        }
        let last = &self.branches[k - 1];
        if last.eta > self.ell {
            return Err(invalid(format!("eta_K <= ell violated: eta_K={}, ell={}", last.eta, self.ell)));
        }
        if let Some((&l, _)) = last.mu.iter().rev().find(|(_, &m)| m > 0) {
            if l > self.ell - last.eta {
                return Err(invalid(format!(
                    "legs of the last branch must not exceed ell - eta_K = {}: found length {l}",
                    self.ell - last.eta
                )));
            }
        }
        Ok(())
    }
}

pub fn build_family_v(p: &FamilyVParams) -> Result<DirectedGraph> {
    p.validate()?;
    build_family_v_unchecked(p)
}

/// Builds the graph without checking the parameter constraints. Used for
/// auxiliary models whose last branch may carry legs longer than the trunk.
pub(crate) fn build_family_v_unchecked(p: &FamilyVParams) -> Result<DirectedGraph> {
    let mut b = GraphBuilder::new();
    b.vertex("v0");
    for i in 1..=p.ell {
        b.edge(format!("f{i}"), format!("v{}", i - 1), format!("v{i}"));
    }
    b.edge("etop", format!("v{}", p.ell), "v0");
    for (k, br) in p.branches.iter().enumerate() {
        let k = k + 1;
        if br.eta > p.ell {
            return Err(invalid(format!("branch {k} hangs below the trunk")));
        }
        for (&len, &count) in &br.mu {
            for m in 1..=count {
                let mut prev = format!("v{}", br.eta);
                for l in 1..=len {
                    let v = format!("w{k}_{len}_{m}_{l}");
                    b.edge(format!("g{k}_{len}_{m}_{l}"), prev, v.clone());
                    prev = v;
                }
                b.edge(format!("e{k}_{len}_{m}"), prev, "v0");
            }
        }
    }
    b.build()
}

/// Height-two spherically homogeneous tree: the root has `K` children, each
/// of those `L` children, and every leaf `M` return edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphericalParams {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
}

impl SphericalParams {
    pub fn new(k: usize, l: usize, m: usize) -> Self {
        SphericalParams { k, l, m }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.l == 0 || self.m == 0 {
            return Err(invalid(format!("K, L, M must be positive: {self:?}")));
        }
        if (self.k, self.l, self.m) == (1, 1, 1) {
            return Err(Error::DegenerateCycle);
        }
        Ok(())
    }
}

pub fn build_sh2(p: &SphericalParams) -> Result<DirectedGraph> {
    p.validate()?;
    let mut b = GraphBuilder::new();
    for i in 1..=p.k {
        b.edge(format!("f{i}"), "r", format!("x{i}"));
        for j in 1..=p.l {
            let leaf = format!("y{i}_{j}");
            b.edge(format!("f{i}_{j}"), format!("x{i}"), leaf.clone());
            for m in 1..=p.m {
                b.edge(format!("e{i}_{j}_{m}"), leaf.clone(), "r");
            }
        }
    }
    b.build()
}

/// Three-vertex graphs with one tree edge `a0 -> a1` and a separate root `b`.
///
/// Adjacency matrix, rows are sources, in the order `a0, a1, b`:
///
/// ```text
/// Taa - dA   1   da
/// dA         0   Tab - da
/// Tba        0   Tbb
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThreeVertexParams {
    pub taa: usize,
    pub tbb: usize,
    pub tab: usize,
    pub tba: usize,
    /// Edges `a0 -> b`.
    pub da: usize,
    /// Edges `a1 -> a0`.
    #[serde(rename = "dA")]
    pub d_up: usize,
}

impl ThreeVertexParams {
    pub fn new(taa: usize, tbb: usize, tab: usize, tba: usize, da: usize, d_up: usize) -> Self {
        ThreeVertexParams {
            taa,
            tbb,
            tab,
            tba,
            da,
            d_up,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ThreeVertexParams {
            taa,
            tbb,
            tab,
            tba,
            da,
            d_up,
        } = *self;
        if tab == 0 || tba == 0 {
            return Err(invalid(format!("Tab and Tba must be positive: {self:?}")));
        }
        if d_up > taa {
            return Err(invalid(format!("dA <= Taa violated: dA={d_up}, Taa={taa}")));
        }
        if da > tab {
            return Err(invalid(format!("da <= Tab violated: da={da}, Tab={tab}")));
        }
        if taa + tba <= 1 {
            return Err(invalid(format!("Taa + Tba > 1 violated: {}", taa + tba)));
        }
        if tab + tbb <= 1 {
            return Err(invalid(format!("Tab + Tbb > 1 violated: {}", tab + tbb)));
        }
        if d_up == 0 && da >= tab {
            return Err(invalid(format!(
                "dA = 0 requires da < Tab: da={da}, Tab={tab}"
            )));
        }
        if taa == 0 && tbb == 0 && da == 0 && (tab < 2 || tba < 2) {
            return Err(invalid(format!(
                "Taa = Tbb = da = 0 requires Tab >= 2 and Tba >= 2: Tab={tab}, Tba={tba}"
            )));
        }
        Ok(())
    }

    /// The adjacency matrix in the vertex order `a0, a1, b`.
    pub fn matrix(&self) -> [[usize; 3]; 3] {
        [
            [self.taa - self.d_up, 1, self.da],
            [self.d_up, 0, self.tab - self.da],
            [self.tba, 0, self.tbb],
        ]
    }
}

pub fn build_three_vertex(p: &ThreeVertexParams) -> Result<DirectedGraph> {
    p.validate()?;
    let names = ["a0", "a1", "b"];
    let mut b = GraphBuilder::new();
    for v in names {
        b.vertex(v);
    }
    for (i, row) in p.matrix().iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            for m in 1..=count {
                let id = if (i, j) == (0, 1) {
                    "f".to_string()
                } else {
                    format!("{}{}_{m}", names[i], names[j])
                };
                b.edge(id, names[i], names[j]);
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_connectivity, compute_tree_partition, contract};

    fn assert_valid(g: &DirectedGraph) {
        let c = check_connectivity(g);
        assert!(c.strongly_connected && !c.is_cycle, "{g:?}");
    }

    #[test]
    fn family_iv_shape() {
        let p = FamilyIVParams::new(8, 6, 1, 1);
        let g = build_family_iv(&p, true).unwrap();
        assert_valid(&g);
        assert_eq!(g.vertex_count(), 13);
        let part = compute_tree_partition(&g).unwrap();
        assert_eq!(part.tree_edge_count(), 12);
        assert_eq!(part.tree_edge_count(), p.tree_edges());
        assert_eq!(g.edge_count() - part.tree_edge_count(), 4);
        assert!(part.is_single_tree());
        for e in part.non_tree_edges() {
            assert_eq!(part.level(g.src(e)), 8);
        }
    }

    #[test]
    fn family_iv_validation() {
        let bad = FamilyIVParams::new(3, 1, 1, 1);
        assert!(matches!(build_family_iv(&bad, false), Err(Error::InvalidParams(_))));
        assert!(build_family_iv(&FamilyIVParams::new(8, 4, 4, 4), false).is_ok());
        assert!(build_family_iv(&FamilyIVParams::new(8, 4, 4, 4), true).is_err());
        assert!(build_family_iv(&FamilyIVParams::new(9, 7, 1, 1), true).is_ok());
        assert!(build_family_iv(&FamilyIVParams::new(8, 5, 1, 1), true).is_err());
    }

    #[test]
    fn family_v_examples() {
        let p = FamilyVParams {
            ell: 1,
            branches: vec![Branch::new(1, &[(0, 2)])],
        };
        let g = build_family_v(&p).unwrap();
        assert_valid(&g);
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 4));
        let part = compute_tree_partition(&g).unwrap();
        assert_eq!(part.tree_edge_count(), p.tree_edges());

        let bouquet = FamilyVParams {
            ell: 0,
            branches: vec![Branch::new(0, &[(0, 3)])],
        };
        let g = build_family_v(&bouquet).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 4));
    }

    #[test]
    fn family_v_validation() {
        let deep_leg = FamilyVParams {
            ell: 1,
            branches: vec![Branch::new(1, &[(1, 1)])],
        };
        assert!(build_family_v(&deep_leg).is_err());
        let unordered = FamilyVParams {
            ell: 3,
            branches: vec![Branch::new(2, &[(0, 1)]), Branch::new(1, &[(0, 1)])],
        };
        assert!(build_family_v(&unordered).is_err());
    }

    #[test]
    fn sh2_shape() {
        let g = build_sh2(&SphericalParams::new(2, 1, 1)).unwrap();
        assert_valid(&g);
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 6));
        assert_eq!(build_sh2(&SphericalParams::new(1, 1, 1)), Err(Error::DegenerateCycle));
        let g = build_sh2(&SphericalParams::new(1, 2, 2)).unwrap();
        let part = compute_tree_partition(&g).unwrap();
        assert_eq!(g.edge_count() - part.tree_edge_count(), 4);
    }

    #[test]
    fn three_vertex_contracts_to_two_by_two() {
        let p = ThreeVertexParams::new(1, 0, 2, 2, 1, 0);
        let g = build_three_vertex(&p).unwrap();
        assert_valid(&g);
        assert_eq!(g.edge_count(), 6);
        let part = compute_tree_partition(&g).unwrap();
        let c = contract(&g, &part);
        let a = c.graph().vertex_by_name("a0").unwrap();
        let b = c.graph().vertex_by_name("b").unwrap();
        let m = c.graph().adjacency();
        assert_eq!(
            [m[a.0][a.0], m[a.0][b.0], m[b.0][a.0], m[b.0][b.0]],
            [1, 2, 2, 0]
        );
        let bad = ThreeVertexParams::new(1, 1, 2, 2, 2, 0);
        assert!(matches!(build_three_vertex(&bad), Err(Error::InvalidParams(_))));
    }
}
