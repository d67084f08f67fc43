//! Chooses a recursion for BP(n, 4) and gathers its inputs.
//!
//! Bases: n = 4, 8 closed form; n = 12 seed. Otherwise doubling when
//! `n/2 = 4, 8 (mod 12)`, else quadrupling when `n = 4t` with
//! `t = 0, 3, 6, 9 (mod 12)` (and `t >= 15`, `t >= 21` for residues 3 and 9).

use crate::block::Design;
use crate::doubling::{double, DoublingInput};
use crate::error::{Error, Result};
use crate::factor::one_factorization;
use crate::quadrupling::{case_of, delta1, quadruple_bp, QuadInput};
use crate::seeds::{bp_8_4, rsqs_provider, SeedStore};

/// How BP(n, 4) is obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Closed form or stored seed.
    Base,
    /// From BP(n/2, 4).
    Double,
    /// From BP(n/4 + δ1, 4) and BP(n/4, 3); carries the assembly case.
    Quadruple(u8),
}

pub fn plan(n: u32) -> Result<Step> {
    if matches!(n, 4 | 8 | 12) {
        return Ok(Step::Base);
    }
    if !n.is_multiple_of(4) || n == 0 {
        return Err(Error::InvalidParameter(format!("BP(n,4) needs 4 | n, got n = {n}")));
    }
    if matches!((n / 2) % 12, 4 | 8) {
        return Ok(Step::Double);
    }
    let t = n / 4;
    match case_of(t) {
        Ok(c @ (1 | 2 | 4 | 6)) => Ok(Step::Quadruple(c)),
        _ => Err(Error::Unsupported(format!("no construction route to BP({n},4)"))),
    }
}

/// Whether [`construct_bp4`] has a route to `n` (seed availability aside).
pub fn supported(n: u32) -> bool {
    match plan(n) {
        Ok(Step::Base) => true,
        Ok(Step::Double) => supported(n / 2),
        Ok(Step::Quadruple(_)) => supported(n / 4 + delta1(n / 4)),
        Err(_) => false,
    }
}

pub fn construct_bp4(n: u32, store: &SeedStore) -> Result<Design> {
    match plan(n)? {
        Step::Base if n == 8 => Ok(bp_8_4()),
        Step::Base => store.bp(n, 4),
        Step::Double => {
            let t = n / 2;
            double(&DoublingInput {
                bp: construct_bp4(t, store)?,
                rsqs: rsqs_provider(t, store)?.to_design(),
                of: one_factorization(t)?,
            })
        }
        Step::Quadruple(_) => quadruple_bp(&quad_input(n / 4, store)?),
    }
}

/// Inputs for the quadrupling step on `t`.
pub fn quad_input(t: u32, store: &SeedStore) -> Result<QuadInput> {
    let case = case_of(t)?;
    let bp4 = construct_bp4(t + delta1(t), store)?;
    let bp3 = if t.is_multiple_of(3) { Some(store.bp3(t)?) } else { None };
    let rsqs = if matches!(case, 3 | 5) {
        Some((rsqs_provider(t, store)?.to_design(), rsqs_provider(2 * t, store)?.to_design()))
    } else {
        None
    };
    Ok(QuadInput { t, bp4, bp3, rsqs })
}
