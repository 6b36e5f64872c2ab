//! Trace coordinates of SL2 triples and the Fricke relation.
//!
//! The seven-tuple is (m1, m2, m3, m12, m23, m13, m321); the source of the
//! coordinate list has m13 repeated where m12 belongs, and this ordering is
//! the only reading consistent with the displayed trace definitions.

use serde::{Deserialize, Serialize};

use crate::convolution::{is_irreducible, module_isomorphic, IsoConfig, MatrixTuple};
use crate::error::{Error, Result};
use crate::exact::cyclo::CycloNum;

/// The seven trace coordinates of an SL2 triple.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSeven {
    pub m1: CycloNum,
    pub m2: CycloNum,
    pub m3: CycloNum,
    pub m12: CycloNum,
    pub m23: CycloNum,
    pub m13: CycloNum,
    pub m321: CycloNum,
}

impl TraceSeven {
    pub fn coords(&self) -> [&CycloNum; 7] {
        [
            &self.m1, &self.m2, &self.m3, &self.m12, &self.m23, &self.m13, &self.m321,
        ]
    }

    pub const NAMES: [&'static str; 7] = ["m1", "m2", "m3", "m12", "m23", "m13", "m321"];
}

impl std::fmt::Debug for TraceSeven {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(m1={}, m2={}, m3={}, m12={}, m23={}, m13={}, m321={})",
            self.m1.render(),
            self.m2.render(),
            self.m3.render(),
            self.m12.render(),
            self.m23.render(),
            self.m13.render(),
            self.m321.render()
        )
    }
}

/// Validate 2x2 / det 1 and return an error naming the first offender.
pub fn check_sl2_triple(triple: &MatrixTuple) -> Result<()> {
    if triple.len() != 3 || triple.dimension() != 2 {
        return Err(Error::NotSl2Triple {
            length: triple.len(),
            dimension: triple.dimension(),
        });
    }
    for k in 0..3 {
        if !triple.get(k).det()?.is_one() {
            return Err(Error::NotSl2 { index: k + 1 });
        }
    }
    Ok(())
}

/// The seven traces of an SL2 triple; rejects non-SL2 input.
pub fn trace_coordinates(triple: &MatrixTuple) -> Result<TraceSeven> {
    check_sl2_triple(triple)?;
    Ok(raw_trace_coordinates(triple)?)
}

/// The same seven traces without the SL2 membership check; callers that
/// merely compare trace data (e.g. the theorem verifier's grid) use this.
pub fn raw_trace_coordinates(triple: &MatrixTuple) -> Result<TraceSeven> {
    if triple.len() != 3 || triple.dimension() != 2 {
        return Err(Error::NotSl2Triple {
            length: triple.len(),
            dimension: triple.dimension(),
        });
    }
    let m1m = triple.get(0);
    let m2m = triple.get(1);
    let m3m = triple.get(2);
    Ok(TraceSeven {
        m1: m1m.trace(),
        m2: m2m.trace(),
        m3: m3m.trace(),
        m12: m1m.mul(m2m)?.trace(),
        m23: m2m.mul(m3m)?.trace(),
        m13: m1m.mul(m3m)?.trace(),
        m321: m3m.mul(m2m)?.mul(m1m)?.trace(),
    })
}

/// The Fricke polynomial evaluated at a seven-tuple; zero on every tuple
/// arising from an actual SL2 triple (certified by a sampling oracle
/// before the coefficients were frozen).
pub fn fricke_residual(m: &TraceSeven) -> CycloNum {
    let TraceSeven {
        m1,
        m2,
        m3,
        m12,
        m23,
        m13,
        m321,
    } = m;
    let mut acc = &(m12 * m23) * m13;
    for sq in [m12, m23, m13, m1, m2, m3, m321] {
        acc = &acc + &(sq * sq);
    }
    acc = &acc - &(&(&(m1 * m2) + &(m3 * m321)) * m12);
    acc = &acc - &(&(&(m2 * m3) + &(m1 * m321)) * m23);
    acc = &acc - &(&(&(m1 * m3) + &(m2 * m321)) * m13);
    acc = &acc + &(&(&(m1 * m2) * m3) * m321);
    &acc - &CycloNum::from_int(4)
}

/// Equivalence of SL2 triples up to simultaneous conjugation. Irreducible
/// triples are separated by their trace coordinates; reducible ones fall
/// back to the intertwiner search (inconclusive counts as false).
pub fn triple_equivalent(a: &MatrixTuple, b: &MatrixTuple) -> Result<bool> {
    check_sl2_triple(a)?;
    check_sl2_triple(b)?;
    let ta = trace_coordinates(a)?;
    let tb = trace_coordinates(b)?;
    if ta != tb {
        return Ok(false);
    }
    if is_irreducible(a) && is_irreducible(b) {
        return Ok(true);
    }
    Ok(module_isomorphic(a, b, IsoConfig::default())?.is_isomorphic())
}
