//! The language of the Markov-Dyck shift of a graph: admissible words,
//! periodic points and their classification.
//!
//! A word over `{e-, e+}` is admissible when its product in the graph inverse
//! semigroup is nonzero. A periodic orbit is stored as the least rotation of a
//! primitive word all of whose powers are admissible.

mod codes;
mod enumerate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ContractedGraph, DirectedGraph, EdgeId, TreePartition, VertexId};
use crate::invariants::{Multiplier, Sign};
use crate::semigroup::{hat_word, Accumulator, NormalForm, Symbol};

pub use codes::{code_counts, CodeCounts};
pub use enumerate::{count_admissible, enumerate_orbits, enumerate_orbits_with};

/// A finite word over the shift alphabet. Identity symbols are not letters.
pub type ShiftWord = Vec<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicOrbit {
    /// Least rotation of a primitive periodic word.
    pub word: ShiftWord,
    pub period: usize,
}

impl PeriodicOrbit {
    /// Canonical orbit of a periodic word. The word is reduced to its
    /// primitive root and rotated to its least rotation.
    pub fn from_word(w: &[Symbol]) -> Self {
        let root = &w[..primitive_period(w)];
        let word = least_rotation(root);
        PeriodicOrbit {
            period: word.len(),
            word,
        }
    }
}

/// Classification of a periodic orbit by the hatted period word.
///
/// Vertices and edges refer to the contracted graph. A multiplier cycle is
/// primitive and stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitClass {
    Neutral(VertexId),
    NegMultiplier { cycle: Vec<EdgeId>, exponent: usize },
    PosMultiplier { cycle: Vec<EdgeId>, exponent: usize },
}

impl OrbitClass {
    pub fn is_neutral(&self) -> bool {
        matches!(self, OrbitClass::Neutral(_))
    }

    /// The multiplier as names of contracted edges, `None` for neutral orbits.
    pub fn multiplier(&self, c: &ContractedGraph) -> Option<Multiplier> {
        let (sign, cycle) = match self {
            OrbitClass::Neutral(_) => return None,
            OrbitClass::NegMultiplier { cycle, .. } => (Sign::Neg, cycle),
            OrbitClass::PosMultiplier { cycle, .. } => (Sign::Pos, cycle),
        };
        Some(Multiplier {
            sign,
            cycle: cycle
                .iter()
                .map(|&e| c.graph().edge_name(e).to_string())
                .collect(),
        })
    }

    pub fn exponent(&self) -> Option<usize> {
        match self {
            OrbitClass::Neutral(_) => None,
            OrbitClass::NegMultiplier { exponent, .. }
            | OrbitClass::PosMultiplier { exponent, .. } => Some(*exponent),
        }
    }
}

/// Smallest `d` such that `w` is a power of `w[..d]`.
pub fn primitive_period<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| w[i] == w[i - d]))
        .unwrap_or(n)
}

pub fn least_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let n = w.len();
    (0..n.max(1))
        .map(|r| rotate(w, r))
        .min()
        .unwrap_or_default()
}

fn rotate<T: Clone>(w: &[T], r: usize) -> Vec<T> {
    if w.is_empty() {
        return Vec::new();
    }
    let r = r % w.len();
    w[r..].iter().chain(&w[..r]).cloned().collect()
}

fn in_alphabet(g: &DirectedGraph, w: &[Symbol]) -> bool {
    w.iter().all(|s| match s {
        Symbol::Minus(e) | Symbol::Plus(e) => e.0 < g.edge_count(),
        Symbol::Ident(_) => false,
    })
}

/// Product of `w` or `None` when it is zero. The empty word has no product.
fn product(g: &DirectedGraph, w: &[Symbol]) -> Option<NormalForm> {
    let mut acc = Accumulator::new(g);
    for &s in w {
        if !acc.mul_symbol(s) {
            return None;
        }
    }
    acc.into_normal_form()
}

/// Whether the product of `w` is nonzero. The empty word is admissible.
pub fn is_admissible(g: &DirectedGraph, w: &[Symbol]) -> bool {
    in_alphabet(g, w) && (w.is_empty() || product(g, w).is_some())
}

/// Shape of a nonzero product that is stable under taking powers.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Stable {
    Idempotent(VertexId),
    Descending(Vec<EdgeId>),
    Ascending(Vec<EdgeId>),
}

fn stable_shape(g: &DirectedGraph, nf: &NormalForm) -> Option<Stable> {
    let x = nf.as_elem()?;
    let up = x.ascending();
    let down = x.descending();
    match (up.is_empty(), down.is_empty()) {
        (true, true) => Some(Stable::Idempotent(x.apex())),
        (true, false) if x.right_vertex(g) == x.apex() => Some(Stable::Descending(down.to_vec())),
        (false, true) if x.left_vertex(g) == x.apex() => Some(Stable::Ascending(up)),
        _ => None,
    }
}

/// Whether every power of `w` is admissible.
///
/// Decided by the rotation criterion: some rotation of `w` multiplies out to
/// an idempotent, or to a descending or ascending path that closes up.
pub fn is_periodic_word(g: &DirectedGraph, w: &[Symbol]) -> bool {
    if w.is_empty() || !in_alphabet(g, w) {
        return false;
    }
    (0..w.len()).any(|r| {
        product(g, &rotate(w, r))
            .and_then(|nf| stable_shape(g, &nf))
            .is_some()
    })
}

/// Brute-force check that `w^k` is nonzero for `k <= |w| + |V| + 2`.
pub fn power_oracle(g: &DirectedGraph, w: &[Symbol]) -> bool {
    if w.is_empty() || !in_alphabet(g, w) {
        return false;
    }
    let mut acc = Accumulator::new(g);
    for _ in 0..w.len() + g.vertex_count() + 2 {
        for &s in w {
            if !acc.mul_symbol(s) {
                return false;
            }
        }
    }
    true
}

/// Classifies the orbit of a periodic word by reducing the rotations of its
/// image in the contracted graph.
pub fn classify_period_word(
    g: &DirectedGraph,
    p: &TreePartition,
    c: &ContractedGraph,
    w: &[Symbol],
) -> Result<OrbitClass> {
    let not_periodic = || Error::NotAPeriodicPoint(crate::semigroup::format_word(g, w));
    if !is_periodic_word(g, w) {
        return Err(not_periodic());
    }
    let hat = hat_word(p, c, g, w);
    let cg = c.graph();
    let mut found: Option<OrbitClass> = None;
    for r in 0..hat.len() {
        let Some(shape) = product(cg, &rotate(&hat, r)).and_then(|nf| stable_shape(cg, &nf))
        else {
            continue;
        };
        let class = match shape {
            Stable::Idempotent(v) => OrbitClass::Neutral(v),
            Stable::Descending(path) => {
                let d = primitive_period(&path);
                OrbitClass::NegMultiplier {
                    cycle: least_rotation(&path[..d]),
                    exponent: path.len() / d,
                }
            }
            Stable::Ascending(path) => {
                let d = primitive_period(&path);
                OrbitClass::PosMultiplier {
                    cycle: least_rotation(&path[..d]),
                    exponent: path.len() / d,
                }
            }
        };
        match &found {
            None => found = Some(class),
            Some(prev) => debug_assert_eq!(prev, &class, "rotations disagree"),
        }
        if !cfg!(debug_assertions) {
            break;
        }
    }
    found.ok_or_else(not_periodic)
}

/// Tree partition and contraction of a graph, computed once.
#[derive(Debug, Clone)]
pub struct ShiftContext {
    pub graph: DirectedGraph,
    pub partition: TreePartition,
    pub contracted: ContractedGraph,
}

impl ShiftContext {
    pub fn new(g: &DirectedGraph) -> Result<Self> {
        let partition = crate::graph::compute_tree_partition(g)?;
        let contracted = crate::graph::contract(g, &partition);
        Ok(ShiftContext {
            graph: g.clone(),
            partition,
            contracted,
        })
    }

    pub fn classify(&self, w: &[Symbol]) -> Result<OrbitClass> {
        classify_period_word(&self.graph, &self.partition, &self.contracted, w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassJson {
    Neutral {
        root: String,
    },
    Neg {
        cycle: Vec<String>,
        #[serde(rename = "M")]
        m: usize,
    },
    Pos {
        cycle: Vec<String>,
        #[serde(rename = "M")]
        m: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub word: String,
    pub period: usize,
    pub class: ClassJson,
}

pub fn orbit_json(ctx: &ShiftContext, orbit: &PeriodicOrbit, class: &OrbitClass) -> OrbitJson {
    let cg = ctx.contracted.graph();
    let names = |cycle: &[EdgeId]| cycle.iter().map(|&e| cg.edge_name(e).to_string()).collect();
    let class = match class {
        OrbitClass::Neutral(v) => ClassJson::Neutral {
            root: cg.vertex_name(*v).to_string(),
        },
        OrbitClass::NegMultiplier { cycle, exponent } => ClassJson::Neg {
            cycle: names(cycle),
            m: *exponent,
        },
        OrbitClass::PosMultiplier { cycle, exponent } => ClassJson::Pos {
            cycle: names(cycle),
            m: *exponent,
        },
    };
    OrbitJson {
        word: crate::semigroup::format_word(&ctx.graph, &orbit.word),
        period: orbit.period,
        class,
    }
}

/// The orbit list as a JSON array.
pub fn orbits_to_json(ctx: &ShiftContext, orbits: &[(PeriodicOrbit, OrbitClass)]) -> String {
    let list: Vec<OrbitJson> = orbits.iter().map(|(o, c)| orbit_json(ctx, o, c)).collect();
    serde_json::to_string(&list).expect("orbit list serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::parse_word;

    fn d2() -> DirectedGraph {
        DirectedGraph::new(vec!["v"], vec![("a", "v", "v"), ("b", "v", "v")]).unwrap()
    }

    fn w(g: &DirectedGraph, s: &str) -> Vec<Symbol> {
        parse_word(g, s).unwrap()
    }

    #[test]
    fn admissibility() {
        let g = d2();
        assert!(is_admissible(&g, &w(&g, "a-,a+")));
        assert!(!is_admissible(&g, &w(&g, "a-,b+")));
        assert!(is_admissible(&g, &w(&g, "a+,b-")));
        assert!(is_admissible(&g, &[]));
        assert!(!is_admissible(&g, &[Symbol::Ident(VertexId(0))]));
    }

    #[test]
    fn periodic_words() {
        let g = d2();
        for (s, expect) in [("a-,a+", true), ("a+,b-", false), ("a-,b-", true), ("a+", true)] {
            assert_eq!(is_periodic_word(&g, &w(&g, s)), expect, "{s}");
            assert_eq!(power_oracle(&g, &w(&g, s)), expect, "{s}");
        }
    }

    #[test]
    fn classification_in_d2() {
        let g = d2();
        let ctx = ShiftContext::new(&g).unwrap();
        let a = EdgeId(0);
        assert_eq!(ctx.classify(&w(&g, "a-,a+")).unwrap(), OrbitClass::Neutral(VertexId(0)));
        assert_eq!(
            ctx.classify(&w(&g, "a-")).unwrap(),
            OrbitClass::NegMultiplier { cycle: vec![a], exponent: 1 }
        );
        assert_eq!(
            ctx.classify(&w(&g, "a+")).unwrap(),
            OrbitClass::PosMultiplier { cycle: vec![a], exponent: 1 }
        );
        assert!(matches!(
            ctx.classify(&w(&g, "a+,b-")),
            Err(Error::NotAPeriodicPoint(_))
        ));
    }

    #[test]
    fn tree_edges_raise_the_exponent() {
        // r -f-> x -e-> r, plus a loop so that the graph is not a cycle
        let g = DirectedGraph::new(
            vec!["r", "x"],
            vec![("f", "r", "x"), ("e", "x", "r"), ("l", "r", "r")],
        )
        .unwrap();
        let ctx = ShiftContext::new(&g).unwrap();
        let class = ctx.classify(&w(&g, "f-,e-")).unwrap();
        let e_hat = ctx.contracted.graph().edge_by_name("e").unwrap();
        assert_eq!(class, OrbitClass::NegMultiplier { cycle: vec![e_hat], exponent: 1 });
        let m = class.multiplier(&ctx.contracted).unwrap();
        assert_eq!(m.cycle, vec!["e".to_string()]);
    }

    #[test]
    fn canonical_orbit() {
        let w = [3, 1, 2, 3, 1, 2];
        assert_eq!(primitive_period(&w), 3);
        assert_eq!(least_rotation(&w[..3]), vec![1, 2, 3]);
        assert_eq!(primitive_period(&[1, 1, 2]), 3);
    }

    #[test]
    fn orbit_json_shape() {
        let g = d2();
        let ctx = ShiftContext::new(&g).unwrap();
        let word = w(&g, "a-,b-");
        let class = ctx.classify(&word).unwrap();
        let json = orbits_to_json(&ctx, &[(PeriodicOrbit::from_word(&word), class)]);
        assert_eq!(
            json,
            r#"[{"word":"a-,b-","period":2,"class":{"kind":"neg","cycle":["a","b"],"M":1}}]"#
        );
    }
}
