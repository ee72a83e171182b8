use super::{classified_table, ClassifyOptions, InvariantOracle};
use crate::error::{Error, Result};
use crate::families::{build_family_iv, FamilyIVParams};
use crate::graph::DirectedGraph;
use crate::invariants::InvariantTable;

/// Sum over the loop multipliers of the orbit counts at period `k`.
fn loop_total(t: &InvariantTable, k: usize) -> u64 {
    t.loop_multipliers().map(|m| m.count(k)).sum()
}

fn reference(p: FamilyIVParams) -> Result<DirectedGraph> {
    build_family_iv(&p, false).map_err(|e| Error::ReferenceBuildFailed(format!("{p:?}: {e}")))
}

/// Least `eta` in `range` at which `g` has more loop orbits than `r` at
/// period `lambda + 2(eta + 1)`, together with the excess.
fn first_excess(
    g: &DirectedGraph,
    r: &DirectedGraph,
    lambda: usize,
    range: std::ops::Range<usize>,
    oracle: &dyn InvariantOracle,
) -> Result<Option<(usize, i64)>> {
    for eta in range {
        let k = lambda + 2 * (eta + 1);
        let real = loop_total(&oracle.invariants(g, k)?, k) as i64;
        let refr = loop_total(&oracle.invariants(r, k)?, k) as i64;
        if real != refr {
            return Ok(Some((eta, real - refr)));
        }
    }
    Ok(None)
}

/// Largest `x` in `(h0, floor(H/2)]` for which the tree-edge count `tau`
/// leaves an integral trunk `h` with `x <= H - h`.
fn max_h1(big_h: usize, h0: usize, tau: usize) -> Option<usize> {
    (h0 + 1..=big_h / 2).rev().find(|&x| {
        let rest = (4 * big_h).checked_sub(h0 + x + tau);
        rest.is_some_and(|r| r % 3 == 0 && x + r / 3 <= big_h)
    })
}

/// Recovers `(H, h, h0, h1)` by comparing loop orbit counts against balanced
/// reference graphs of the same height.
pub fn reconstruct_f4(g: &DirectedGraph, oracle: &dyn InvariantOracle, opts: ClassifyOptions) -> Result<FamilyIVParams> {
    let (t, classification) = classified_table(g, oracle, 4, opts)?;
    let big_h = classification
        .family_iv_height()
        .ok_or_else(|| Error::NotInFamily("graph is not in family IV".into()))?;
    let lambda = big_h + 1;
    let half = big_h / 2;
    let balanced = FamilyIVParams::new(big_h, big_h.div_ceil(2), half, half);
    let r = reference(balanced)?;

    let Some((h0, excess)) = first_excess(g, &r, lambda, 1..half, oracle)? else {
        return Ok(balanced);
    };
    let h1 = match excess {
        4 => h0,
        2 => {
            let top = max_h1(big_h, h0, t.tau).ok_or_else(|| {
                Error::ReferenceBuildFailed(format!("no admissible h1 above h0 = {h0} for tau = {}", t.tau))
            })?;
            let rr = reference(FamilyIVParams::new(big_h, big_h.div_ceil(2), h0, top))?;
            match first_excess(g, &rr, lambda, h0 + 1..top, oracle)? {
                Some((eta, _)) => eta,
                None => top,
            }
        }
        other => return Err(Error::ExcessNeither2Nor4(other)),
    };

    let num = 4 * lambda as i64 + t.nu as i64 - h0 as i64 - h1 as i64 - t.i0(2) as i64 - 4;
    if num <= 0 || num % 3 != 0 {
        return Err(Error::NonIntegerSolution(format!("h = {num}/3")));
    }
    let p = FamilyIVParams::new(big_h, (num / 3) as usize, h0, h1);
    p.validate_base()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::EnumerationOracle;

    #[test]
    fn trunk_formula() {
        // Lambda = 9, nu = 4, h0 = h1 = 1, I0[2] = 16
        assert_eq!((4 * 9 + 4 - 1 - 1 - 16 - 4) / 3, 6);
    }

    #[test]
    fn h1_bound_respects_residue() {
        // (10, 6, 1, 2) has tau = 19
        assert_eq!(max_h1(10, 1, 19), Some(5));
        // (8, 5, 1, 2) has tau = 15, shared with (8, 4, 1, 4)
        assert_eq!(max_h1(8, 1, 15), Some(4));
        // (9, 7, 1, 1) has tau = 13: x = 4 needs h = 6 > H - 4, x = 2, 3
        // leave a fractional trunk
        assert_eq!(max_h1(9, 1, 13), None);
    }

    #[test]
    fn balanced_graph_is_its_own_reference() {
        let p = FamilyIVParams::new(4, 2, 2, 2);
        let g = build_family_iv(&p, false).unwrap();
        let got = reconstruct_f4(&g, &EnumerationOracle::default(), ClassifyOptions::default()).unwrap();
        assert_eq!(got, p);
    }

    #[test]
    fn recovers_8_6_1_1() {
        let p = FamilyIVParams::new(8, 6, 1, 1);
        let g = build_family_iv(&p, true).unwrap();
        let got = reconstruct_f4(&g, &EnumerationOracle::default(), ClassifyOptions::default()).unwrap();
        assert_eq!(got, p);
    }
}
