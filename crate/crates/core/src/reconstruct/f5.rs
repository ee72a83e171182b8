use std::collections::BTreeMap;

use super::{classify_family, FamilyTag, InvariantOracle};
use crate::error::{Error, Result};
use crate::families::{build_family_v_unchecked, Branch, FamilyVParams};
use crate::invariants::{InvariantTable, MultiplierCounts};

fn not_in_family(msg: impl Into<String>) -> Error {
    Error::NotInFamily(msg.into())
}

fn lambda_of(m: &MultiplierCounts) -> usize {
    m.lambda.expect("classified tables carry every lambda")
}

/// Leg counts of one branch hanging at `eta`, read from the cycle lengths of
/// its return edges.
fn legs(group: &[&MultiplierCounts], eta: usize) -> Result<BTreeMap<usize, usize>> {
    let mut mu = BTreeMap::new();
    for m in group {
        let len = lambda_of(m)
            .checked_sub(eta + 1)
            .ok_or_else(|| not_in_family(format!("{} is shorter than its branch", m.multiplier)))?;
        *mu.entry(len).or_insert(0) += 1;
    }
    Ok(mu)
}

/// Least `d` at which some return edge of `real` sees more orbits at period
/// `lambda + 2d` than an auxiliary return edge with the same `lambda`.
fn first_excess(real: &[&MultiplierCounts], aux: &[&MultiplierCounts], horizon: usize) -> Result<usize> {
    let shortest = real.iter().map(|m| lambda_of(m)).min().expect("nonempty group");
    for d in 1.. {
        if shortest + 2 * d > horizon {
            return Err(Error::HorizonTooSmall {
                multiplier: real[0].multiplier.to_string(),
                horizon,
                needed: shortest + 2 * d,
            });
        }
        for e in real {
            let k = lambda_of(e) + 2 * d;
            if k > horizon {
                continue;
            }
            let excess = aux
                .iter()
                .filter(|a| a.lambda == e.lambda)
                .any(|a| e.count(k) > a.count(k));
            if excess {
                return Ok(d);
            }
        }
    }
    unreachable!("the loop exits through the horizon check")
}

/// Recovers the trunk length, branch levels and leg counts.
///
/// Branches are peeled off in order of their `Delta`. Each one is located by
/// building the graph of the branches found so far, with every level shifted
/// down by the unknown `eta_1` and the legs lengthened to compensate, and
/// finding the first period at which the input has more orbits. `eta_1`
/// itself comes last, from `I0[2]`.
pub fn reconstruct_f5(t: &InvariantTable, oracle: &dyn InvariantOracle) -> Result<FamilyVParams> {
    if !classify_family(t)?.has(FamilyTag::FV) {
        return Err(not_in_family("no return edge has Delta = nu - 1"));
    }
    let loops: Vec<&MultiplierCounts> = t.loop_multipliers().collect();
    let mut sums: Vec<i64> = loops.iter().map(|m| m.delta.expect("checked horizon")).collect();
    sums.sort_unstable();
    sums.dedup();
    if sums[0] <= 0 {
        return Err(not_in_family(format!("Delta = {} is not positive", sums[0])));
    }
    let k_count = sums.len();
    let sizes: Vec<usize> = sums
        .iter()
        .scan(0, |prev, &s| {
            let m = (s - *prev) as usize;
            *prev = s;
            Some(m)
        })
        .collect();

    let mut groups: Vec<Vec<&MultiplierCounts>> = sums
        .iter()
        .map(|&s| loops.iter().copied().filter(|m| m.delta == Some(s)).collect())
        .collect();
    let ell = groups[k_count - 1].iter().map(|m| lambda_of(m)).max().expect("nonempty") - 1;
    let top = groups[k_count - 1]
        .iter()
        .position(|m| lambda_of(m) == ell + 1)
        .expect("maximum is attained");
    groups[k_count - 1].remove(top);
    for (k, (g, &m)) in groups.iter().zip(&sizes).enumerate() {
        if g.len() != m {
            return Err(not_in_family(format!(
                "branch {} has {} return edges, Delta steps say {m}",
                k + 1,
                g.len()
            )));
        }
    }

    // levels and legs relative to eta_1
    let mut etas = vec![0usize];
    let mut mus = vec![legs(&groups[0], 0)?];
    for k in 0..k_count - 1 {
        let aux = FamilyVParams {
            ell,
            branches: etas
                .iter()
                .zip(&mus)
                .map(|(&eta, mu)| Branch { eta, mu: mu.clone() })
                .collect(),
        };
        let at = oracle.invariants(&build_family_v_unchecked(&aux)?, t.max_period)?;
        let prefix = format!("e{}_", k + 1);
        let aux_group: Vec<&MultiplierCounts> = at
            .loop_multipliers()
            .filter(|m| m.multiplier.cycle[0].starts_with(&prefix))
            .collect();
        let d = first_excess(&groups[k], &aux_group, t.max_period)?;
        if d < 2 {
            return Err(not_in_family(format!("branches {} and {} share a level", k + 1, k + 2)));
        }
        let eta = etas[k] + d - 1;
        if eta > ell {
            return Err(not_in_family(format!("branch {} would hang above the trunk", k + 2)));
        }
        etas.push(eta);
        mus.push(legs(&groups[k + 1], eta)?);
    }

    // With one branch this is (sum of all lambdas - I0[2]) / M_1.
    let weighted: usize = mus.iter().flat_map(|mu| mu.iter().map(|(l, m)| (l + 1) * m)).sum();
    let num = (ell + 1 + weighted) as i64 - t.i0(2) as i64;
    let den = t.nu as i64 - 1;
    if num < 0 || num % den != 0 {
        return Err(Error::NonIntegerEta(format!("{num}/{den}")));
    }
    let eta1 = (num / den) as usize;

    let mut branches = Vec::with_capacity(k_count);
    for (eta, mu) in etas.iter().zip(&mus) {
        let mut shifted = BTreeMap::new();
        for (&l, &m) in mu {
            let l = l
                .checked_sub(eta1)
                .ok_or_else(|| Error::NonIntegerEta(format!("leg of length {l} is shorter than eta_1 = {eta1}")))?;
            shifted.insert(l, m);
        }
        branches.push(Branch {
            eta: eta1 + eta,
            mu: shifted,
        });
    }
    let p = FamilyVParams { ell, branches };
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_family_v;
    use crate::invariants::compute_invariants;
    use crate::reconstruct::EnumerationOracle;

    fn roundtrip(p: &FamilyVParams, horizon: usize) -> FamilyVParams {
        let t = compute_invariants(&build_family_v(p).unwrap(), horizon).unwrap();
        reconstruct_f5(&t, &EnumerationOracle::default()).unwrap()
    }

    #[test]
    fn two_vertices_three_returns() {
        let p = FamilyVParams {
            ell: 1,
            branches: vec![Branch::new(1, &[(0, 2)])],
        };
        assert_eq!(roundtrip(&p, 4), p);
    }

    #[test]
    fn bouquet() {
        for n in 2..5 {
            let p = FamilyVParams {
                ell: 0,
                branches: vec![Branch::new(0, &[(0, n - 1)])],
            };
            assert_eq!(roundtrip(&p, 3), p);
        }
    }

    #[test]
    fn two_branches() {
        let p = FamilyVParams {
            ell: 2,
            branches: vec![Branch::new(0, &[(1, 1)]), Branch::new(1, &[(0, 1)])],
        };
        assert_eq!(roundtrip(&p, 9), p);
    }
}
