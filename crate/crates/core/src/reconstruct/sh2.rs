use serde::{Deserialize, Serialize};

use super::{classify_family, FamilyTag};
use crate::error::{Error, Result};
use crate::families::SphericalParams;
use crate::invariants::{closed_form_sh2, loop_values, orbit_count_sh2, InvariantTable, Sh2ClosedForm};

/// The four numbers the height-two reconstruction reads off a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sh2Inputs {
    pub nu: u64,
    pub tau: u64,
    pub i5: u64,
    /// Neutral orbits of period four.
    pub i4_0: u64,
}

impl Sh2Inputs {
    /// Requires a table whose loop multipliers share one `I5`.
    pub fn from_table(t: &InvariantTable) -> Result<Self> {
        let i5 = loop_values(t, |m| m.count(5));
        if i5.len() != 1 {
            return Err(Error::NotSH2);
        }
        Ok(Sh2Inputs {
            nu: t.nu as u64,
            tau: t.tau as u64,
            i5: *i5.first().expect("one value"),
            i4_0: t.i0(4),
        })
    }

    pub fn from_closed_form(f: &Sh2ClosedForm) -> Self {
        Sh2Inputs {
            nu: f.nu,
            tau: f.tau,
            i5: f.i5,
            i4_0: f.i4_0,
        }
    }
}

/// How `I0[4]` was counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sh2Counting {
    /// The closed forms of [`closed_form_sh2`], which count ordered pairs of
    /// return words where orbits see unordered ones.
    Printed,
    /// Genuine orbit counts, as produced by enumeration.
    Orbits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sh2Solution {
    pub params: SphericalParams,
    /// The `M = 1` test held and the quadratic was not needed.
    pub m_is_one: bool,
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub disc: i128,
    pub disc_is_square: bool,
}

fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).find(|&x| x >= 0 && x * x == n)
}

fn exact_div(num: i128, den: i128, what: &str) -> Result<i128> {
    if den == 0 || num % den != 0 {
        return Err(Error::NonIntegerSolution(format!("{what} = {num}/{den}")));
    }
    Ok(num / den)
}

fn positive(x: i128, what: &str) -> Result<usize> {
    if x <= 0 {
        return Err(Error::NonIntegerSolution(format!("{what} = {x} is not positive")));
    }
    Ok(x as usize)
}

/// Solves for `(K, L, M)` in exact integer arithmetic and checks the answer
/// by recomputing the inputs from it.
pub fn solve_sh2(inputs: Sh2Inputs, counting: Sh2Counting) -> Result<Sh2Solution> {
    let nu = inputs.nu as i128;
    let tau = inputs.tau as i128;
    let i5 = inputs.i5 as i128;
    let i4 = inputs.i4_0 as i128;

    let (a, b) = match counting {
        Sh2Counting::Printed => (1 + tau + i5, (nu - tau) * (i5 + 2) - 2 * tau - i4),
        Sh2Counting::Orbits => (nu + tau + i5, (nu - tau) * (i5 + 3) - 2 * i4),
    };
    let c = tau * (2 * tau - nu);
    let disc = b * b - 4 * a * c;
    let root = exact_sqrt(disc);

    let m_is_one = (tau - nu) * (i5 - 1) == (tau - nu) * (tau - nu) + nu;
    let (k, l, m) = if m_is_one {
        let k = tau - nu;
        (k, exact_div(nu, k, "L")?, 1)
    } else {
        let root = root.ok_or_else(|| Error::NonIntegerSolution(format!("discriminant {disc} is not a square")))?;
        let k = exact_div(-b + root, 2 * a, "K")?;
        let l = exact_div(tau - k, k, "L")?;
        let m = exact_div(nu, tau - k, "M")?;
        (k, l, m)
    };
    let params = SphericalParams::new(positive(k, "K")?, positive(l, "L")?, positive(m, "M")?);
    let (k, l, m) = (params.k as u64, params.l as u64, params.m as u64);
    let forward = match counting {
        Sh2Counting::Printed => closed_form_sh2(k, l, m)?,
        Sh2Counting::Orbits => orbit_count_sh2(k, l, m)?,
    };
    if Sh2Inputs::from_closed_form(&forward) != inputs {
        return Err(Error::NonIntegerSolution(format!(
            "({k},{l},{m}) does not reproduce {inputs:?}"
        )));
    }
    Ok(Sh2Solution {
        params,
        m_is_one,
        a,
        b,
        c,
        disc,
        disc_is_square: root.is_some(),
    })
}

/// Recovers `(K, L, M)` from an enumerated table.
pub fn reconstruct_sh2(t: &InvariantTable) -> Result<SphericalParams> {
    if !classify_family(t)?.has(FamilyTag::Sh2) {
        return Err(Error::NotSH2);
    }
    Ok(solve_sh2(Sh2Inputs::from_table(t)?, Sh2Counting::Orbits)?.params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_sh2;
    use crate::invariants::compute_invariants;

    fn inputs(nu: u64, tau: u64, i5: u64, i4_0: u64) -> Sh2Inputs {
        Sh2Inputs { nu, tau, i5, i4_0 }
    }

    #[test]
    fn printed_examples() {
        let s = solve_sh2(inputs(2, 4, 4, 10), Sh2Counting::Printed).unwrap();
        assert_eq!(s.params, SphericalParams::new(2, 1, 1));
        assert!(s.m_is_one);

        let s = solve_sh2(inputs(4, 3, 5, 16), Sh2Counting::Printed).unwrap();
        assert_eq!(s.params, SphericalParams::new(1, 2, 2));
        assert_eq!((s.a, s.b, s.c, s.disc), (9, -15, 6, 9));

        let s = solve_sh2(inputs(2, 2, 4, 7), Sh2Counting::Printed).unwrap();
        assert_eq!(s.params, SphericalParams::new(1, 1, 2));
        assert_eq!((s.a, s.b, s.c, s.disc), (7, -11, 4, 9));
    }

    #[test]
    fn inconsistent_inputs() {
        assert!(matches!(
            solve_sh2(inputs(4, 3, 5, 17), Sh2Counting::Printed),
            Err(Error::NonIntegerSolution(_))
        ));
    }

    #[test]
    fn from_enumeration() {
        for (k, l, m) in [(2, 1, 1), (1, 2, 2), (1, 1, 2), (2, 2, 1)] {
            let p = SphericalParams::new(k, l, m);
            let t = compute_invariants(&build_sh2(&p).unwrap(), 10).unwrap();
            assert_eq!(reconstruct_sh2(&t).unwrap(), p);
        }
    }
}
