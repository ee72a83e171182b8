//! The graph inverse semigroup of a directed graph.
//!
//! Generators are `e-` and `e+` for each edge and an idempotent `1@V` for each
//! vertex. `e-` runs forward along `e` (from `s(e)` to `t(e)`), `e+` runs
//! backward. A nonzero element has the unique normal form
//!
//! ```text
//! p_m+ ... p_1+ . q_1- ... q_n-
//! ```
//!
//! where `p` and `q` are directed paths leaving a common apex vertex. Products
//! are computed by absorbing one generator at a time into such a pair.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{ContractedGraph, DirectedGraph, EdgeId, TreePartition, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Minus(EdgeId),
    Plus(EdgeId),
    Ident(VertexId),
}

impl Symbol {
    pub fn edge(self) -> Option<EdgeId> {
        match self {
            Symbol::Minus(e) | Symbol::Plus(e) => Some(e),
            Symbol::Ident(_) => None,
        }
    }
}

/// Nonzero normal form: ascending path, descending path and their shared apex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    // ascending path stored far end first, so prepending at the apex is a push
    up_rev: Vec<EdgeId>,
    down: Vec<EdgeId>,
    apex: VertexId,
}

impl Elem {
    pub fn idempotent(v: VertexId) -> Self {
        Elem {
            up_rev: Vec::new(),
            down: Vec::new(),
            apex: v,
        }
    }

    pub fn from_paths(up: &[EdgeId], down: &[EdgeId], apex: VertexId) -> Self {
        Elem {
            up_rev: up.iter().rev().copied().collect(),
            down: down.to_vec(),
            apex,
        }
    }

    /// Ascending path `(p_1, ..., p_m)` in path order, starting at the apex.
    pub fn ascending(&self) -> Vec<EdgeId> {
        self.up_rev.iter().rev().copied().collect()
    }

    /// Descending path `(q_1, ..., q_n)`, starting at the apex.
    pub fn descending(&self) -> &[EdgeId] {
        &self.down
    }

    pub fn apex(&self) -> VertexId {
        self.apex
    }

    pub fn is_idempotent(&self) -> bool {
        self.up_rev.is_empty() && self.down.is_empty()
    }

    pub fn left_vertex(&self, g: &DirectedGraph) -> VertexId {
        self.up_rev.first().map_or(self.apex, |&e| g.dst(e))
    }

    pub fn right_vertex(&self, g: &DirectedGraph) -> VertexId {
        self.down.last().map_or(self.apex, |&e| g.dst(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormalForm {
    Zero,
    Elem(Elem),
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        matches!(self, NormalForm::Zero)
    }

    pub fn as_elem(&self) -> Option<&Elem> {
        match self {
            NormalForm::Zero => None,
            NormalForm::Elem(e) => Some(e),
        }
    }

    /// `Some(v)` when this is the idempotent `1@v`.
    pub fn idempotent_vertex(&self) -> Option<VertexId> {
        self.as_elem().filter(|e| e.is_idempotent()).map(|e| e.apex)
    }
}

/// How to revert one successful [`Accumulator::push`].
#[derive(Debug, Clone, Copy)]
pub(crate) enum Undo {
    Start,
    Nothing,
    PushedDown,
    PoppedDown(EdgeId),
    PushedUp(VertexId),
}

/// Running product of a word, multiplied one generator at a time.
///
/// A push that would make the product zero is rejected and leaves the state
/// untouched, which lets depth-first searches prune on the first zero prefix.
#[derive(Debug, Clone)]
pub struct Accumulator<'g> {
    g: &'g DirectedGraph,
    elem: Elem,
    empty: bool,
}

impl<'g> Accumulator<'g> {
    pub fn new(g: &'g DirectedGraph) -> Self {
        Accumulator {
            g,
            elem: Elem::idempotent(VertexId(0)),
            empty: true,
        }
    }

    pub fn from_elem(g: &'g DirectedGraph, elem: Elem) -> Self {
        Accumulator {
            g,
            elem,
            empty: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn elem(&self) -> Option<&Elem> {
        (!self.empty).then_some(&self.elem)
    }

    pub fn right_vertex(&self) -> Option<VertexId> {
        (!self.empty).then(|| self.elem.right_vertex(self.g))
    }

    /// Top of the descending stack, i.e. the only edge `e` for which `e+`
    /// can follow without producing zero.
    pub fn open_edge(&self) -> Option<EdgeId> {
        if self.empty {
            None
        } else {
            self.elem.down.last().copied()
        }
    }

    pub(crate) fn push(&mut self, s: Symbol) -> Option<Undo> {
        let g = self.g;
        if self.empty {
            self.empty = false;
            self.elem = match s {
                Symbol::Minus(e) => Elem {
                    up_rev: Vec::new(),
                    down: vec![e],
                    apex: g.src(e),
                },
                Symbol::Plus(e) => Elem {
                    up_rev: vec![e],
                    down: Vec::new(),
                    apex: g.src(e),
                },
                Symbol::Ident(v) => Elem::idempotent(v),
            };
            return Some(Undo::Start);
        }
        let right = self.elem.right_vertex(g);
        match s {
            Symbol::Ident(v) => (v == right).then_some(Undo::Nothing),
            Symbol::Minus(e) => {
                if g.src(e) != right {
                    return None;
                }
                self.elem.down.push(e);
                Some(Undo::PushedDown)
            }
            Symbol::Plus(e) => {
                if g.dst(e) != right {
                    return None;
                }
                match self.elem.down.last() {
                    Some(&top) if top == e => {
                        self.elem.down.pop();
                        Some(Undo::PoppedDown(e))
                    }
                    Some(_) => None,
                    None => {
                        let old = self.elem.apex;
                        self.elem.up_rev.push(e);
                        self.elem.apex = g.src(e);
                        Some(Undo::PushedUp(old))
                    }
                }
            }
        }
    }

    pub(crate) fn undo(&mut self, u: Undo) {
        match u {
            Undo::Start => {
                self.empty = true;
                self.elem.up_rev.clear();
                self.elem.down.clear();
            }
            Undo::Nothing => {}
            Undo::PushedDown => {
                self.elem.down.pop();
            }
            Undo::PoppedDown(e) => self.elem.down.push(e),
            Undo::PushedUp(old) => {
                self.elem.up_rev.pop();
                self.elem.apex = old;
            }
        }
    }

    /// Multiplies by `s`; returns `false` (state unchanged) if the product is zero.
    pub fn mul_symbol(&mut self, s: Symbol) -> bool {
        self.push(s).is_some()
    }

    pub fn into_normal_form(self) -> Option<NormalForm> {
        (!self.empty).then_some(NormalForm::Elem(self.elem))
    }
}

fn check_symbol(g: &DirectedGraph, s: Symbol) -> Result<()> {
    let ok = match s {
        Symbol::Minus(e) | Symbol::Plus(e) => e.0 < g.edge_count(),
        Symbol::Ident(v) => v.0 < g.vertex_count(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnknownSymbol(format!("{s:?}")))
    }
}

/// Normal form of the product of `word`.
pub fn reduce(g: &DirectedGraph, word: &[Symbol]) -> Result<NormalForm> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut acc = Accumulator::new(g);
    for &s in word {
        check_symbol(g, s)?;
        if !acc.mul_symbol(s) {
            return Ok(NormalForm::Zero);
        }
    }
    Ok(acc.into_normal_form().expect("nonempty word"))
}

/// Generators whose product is the given element, starting with its left idempotent.
pub fn expand(g: &DirectedGraph, x: &Elem) -> Vec<Symbol> {
    let mut w = Vec::with_capacity(1 + x.up_rev.len() + x.down.len());
    w.push(Symbol::Ident(x.left_vertex(g)));
    w.extend(x.up_rev.iter().map(|&e| Symbol::Plus(e)));
    w.extend(x.down.iter().map(|&e| Symbol::Minus(e)));
    w
}

pub fn multiply(g: &DirectedGraph, x: &NormalForm, y: &NormalForm) -> NormalForm {
    let (NormalForm::Elem(a), NormalForm::Elem(b)) = (x, y) else {
        return NormalForm::Zero;
    };
    let mut acc = Accumulator::from_elem(g, a.clone());
    for s in expand(g, b) {
        if !acc.mul_symbol(s) {
            return NormalForm::Zero;
        }
    }
    acc.into_normal_form().expect("nonempty")
}

/// Image of a word under the projection onto the contracted graph: tree edges
/// collapse to the idempotent of their root, other edges map to their images.
pub fn hat_word(p: &TreePartition, c: &ContractedGraph, g: &DirectedGraph, word: &[Symbol]) -> Vec<Symbol> {
    word.iter()
        .map(|&s| hat_symbol(p, c, g, s))
        .collect()
}

pub fn hat_symbol(p: &TreePartition, c: &ContractedGraph, g: &DirectedGraph, s: Symbol) -> Symbol {
    match s {
        Symbol::Minus(e) => match c.hat_edge(e) {
            Some(h) => Symbol::Minus(h),
            None => Symbol::Ident(c.hat_vertex(p.root_of(g.src(e)))),
        },
        Symbol::Plus(e) => match c.hat_edge(e) {
            Some(h) => Symbol::Plus(h),
            None => Symbol::Ident(c.hat_vertex(p.root_of(g.src(e)))),
        },
        Symbol::Ident(v) => Symbol::Ident(c.hat_vertex(v)),
    }
}

/// Parses the text form `e-,e+,1@V`.
pub fn parse_word(g: &DirectedGraph, text: &str) -> Result<Vec<Symbol>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| parse_symbol(g, tok))
        .collect()
}

pub fn parse_symbol(g: &DirectedGraph, tok: &str) -> Result<Symbol> {
    let unknown = || Error::UnknownSymbol(tok.to_string());
    if let Some(v) = tok.strip_prefix("1@") {
        return g.vertex_by_name(v).map(Symbol::Ident).ok_or_else(unknown);
    }
    if let Some(e) = tok.strip_suffix('-') {
        return g.edge_by_name(e).map(Symbol::Minus).ok_or_else(unknown);
    }
    if let Some(e) = tok.strip_suffix('+') {
        return g.edge_by_name(e).map(Symbol::Plus).ok_or_else(unknown);
    }
    Err(unknown())
}

pub fn format_symbol(g: &DirectedGraph, s: Symbol) -> String {
    match s {
        Symbol::Minus(e) => format!("{}-", g.edge_name(e)),
        Symbol::Plus(e) => format!("{}+", g.edge_name(e)),
        Symbol::Ident(v) => format!("1@{}", g.vertex_name(v)),
    }
}

pub fn format_word(g: &DirectedGraph, w: &[Symbol]) -> String {
    w.iter()
        .map(|&s| format_symbol(g, s))
        .collect::<Vec<_>>()
        .join(",")
}

/// Display adapter for a normal form over a given graph.
pub struct ShowNormalForm<'a>(pub &'a DirectedGraph, pub &'a NormalForm);

impl fmt::Display for ShowNormalForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.0;
        match self.1 {
            NormalForm::Zero => write!(f, "0"),
            NormalForm::Elem(e) if e.is_idempotent() => write!(f, "1@{}", g.vertex_name(e.apex)),
            NormalForm::Elem(e) => {
                let w = &expand(g, e)[1..];
                write!(f, "{}", format_word(g, w))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> DirectedGraph {
        DirectedGraph::new(vec!["v"], vec![("a", "v", "v"), ("b", "v", "v")]).unwrap()
    }

    fn w(g: &DirectedGraph, s: &str) -> Vec<Symbol> {
        parse_word(g, s).unwrap()
    }

    #[test]
    fn cancellation_relations() {
        let g = d2();
        let v = VertexId(0);
        assert_eq!(
            reduce(&g, &w(&g, "a-,a+")).unwrap(),
            NormalForm::Elem(Elem::idempotent(v))
        );
        assert_eq!(reduce(&g, &w(&g, "a-,b+")).unwrap(), NormalForm::Zero);
        let a = g.edge_by_name("a").unwrap();
        assert_eq!(
            reduce(&g, &w(&g, "a+,a-")).unwrap(),
            NormalForm::Elem(Elem::from_paths(&[a], &[a], v))
        );
    }

    #[test]
    fn idempotents() {
        let g = DirectedGraph::new(vec!["u", "w"], vec![("x", "u", "w"), ("y", "w", "u")]).unwrap();
        let u = NormalForm::Elem(Elem::idempotent(VertexId(0)));
        let wv = NormalForm::Elem(Elem::idempotent(VertexId(1)));
        assert_eq!(multiply(&g, &u, &u), u);
        assert_eq!(multiply(&g, &u, &wv), NormalForm::Zero);
        // 1_s(f) f- = f- 1_t(f)
        assert_eq!(
            reduce(&g, &w(&g, "1@u,x-")).unwrap(),
            reduce(&g, &w(&g, "x-,1@w")).unwrap()
        );
        assert_eq!(reduce(&g, &w(&g, "1@w,x-")).unwrap(), NormalForm::Zero);
    }

    #[test]
    fn square_of_mixed_loop_element() {
        let g = d2();
        let a = g.edge_by_name("a").unwrap();
        let x = NormalForm::Elem(Elem::from_paths(&[a], &[a], VertexId(0)));
        assert_eq!(multiply(&g, &x, &x), x);
    }

    #[test]
    fn ascending_paths_compose_backwards() {
        // r -f-> x, x -e-> r
        let g = DirectedGraph::new(vec!["r", "x"], vec![("f", "r", "x"), ("e", "x", "r"), ("l", "r", "r")]).unwrap();
        let nf = reduce(&g, &w(&g, "f+,e+")).unwrap();
        let elem = nf.as_elem().unwrap();
        let (f, e) = (g.edge_by_name("f").unwrap(), g.edge_by_name("e").unwrap());
        assert_eq!(elem.ascending(), vec![e, f]);
        assert_eq!(elem.apex(), g.vertex_by_name("x").unwrap());
        assert_eq!(reduce(&g, &w(&g, "e+,l+")).unwrap(), NormalForm::Zero);
    }

    #[test]
    fn parse_and_format() {
        let g = d2();
        let word = w(&g, "a-, b+,1@v");
        assert_eq!(format_word(&g, &word), "a-,b+,1@v");
        assert!(matches!(parse_word(&g, "c-"), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_word(&g, "a"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn empty_word_is_an_error() {
        assert_eq!(reduce(&d2(), &[]), Err(Error::EmptyWord));
    }
}
