use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};

/// Sizes of the return-word sets at a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeCounts {
    /// `c[i]`: words of length `2i` with product `1_V` and no proper nonempty
    /// prefix of even length with product `1_V`. `c[0] = 0`.
    pub c: Vec<u128>,
    /// `d[eta]`: words `d_1- ... d_eta- d_eta+ ... d_1+` over paths of length
    /// `eta` leaving `V`.
    pub d: Vec<u128>,
}

fn overflow(what: &str, n: usize) -> Error {
    Error::InvalidParams(format!("{what} count overflows at length {n}"))
}

/// Exact `card C_V(I)` and `card D_V(eta)` for `I, eta <= bound`.
///
/// A first return to `V` is `d- w d+` with `w` a sequence of first returns to
/// `t(d)`, so the generating functions satisfy
/// `c_V(x) = x * sum_{s(d)=V} 1 / (1 - c_{t(d)}(x))`.
pub fn code_counts(g: &DirectedGraph, v: VertexId, bound: usize) -> Result<CodeCounts> {
    if v.0 >= g.vertex_count() {
        return Err(Error::UnknownSymbol(format!("vertex {}", v.0)));
    }
    let n = g.vertex_count();
    // c[w][i] and seq[w][i] = [x^i] 1/(1 - c_w(x))
    let mut c = vec![vec![0u128; bound + 1]; n];
    let mut seq = vec![vec![0u128; bound + 1]; n];
    for s in seq.iter_mut() {
        s[0] = 1;
    }
    for i in 1..=bound {
        for w in 0..n {
            let mut total = 0u128;
            for &d in g.out_edges(VertexId(w)) {
                total = total
                    .checked_add(seq[g.dst(d).0][i - 1])
                    .ok_or_else(|| overflow("code", i))?;
            }
            c[w][i] = total;
        }
        for w in 0..n {
            let mut total = 0u128;
            for j in 1..=i {
                let term = c[w][j]
                    .checked_mul(seq[w][i - j])
                    .ok_or_else(|| overflow("code", i))?;
                total = total.checked_add(term).ok_or_else(|| overflow("code", i))?;
            }
            seq[w][i] = total;
        }
    }

    let mut paths = vec![1u128; n];
    let mut d = vec![1u128];
    for eta in 1..=bound {
        let mut next = vec![0u128; n];
        for (w, slot) in next.iter_mut().enumerate() {
            for &e in g.out_edges(VertexId(w)) {
                *slot = slot
                    .checked_add(paths[g.dst(e).0])
                    .ok_or_else(|| overflow("path", eta))?;
            }
        }
        paths = next;
        d.push(paths[v.0]);
    }
    Ok(CodeCounts {
        c: c.swap_remove(v.0),
        d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d2_values() {
        let g = DirectedGraph::new(vec!["v"], vec![("a", "v", "v"), ("b", "v", "v")]).unwrap();
        let cc = code_counts(&g, VertexId(0), 3).unwrap();
        assert_eq!(cc.d, vec![1, 2, 4, 8]);
        assert_eq!(cc.c[1], 2);
        // d- x d+ with x one of the two first returns
        assert_eq!(cc.c[2], 4);
    }
}
