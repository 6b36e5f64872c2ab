//! Jordan block data computed exactly from rank sequences.
//!
//! The number of Jordan blocks of eigenvalue a with length >= k equals
//! rank((M-a)^(k-1)) - rank((M-a)^k), so block multisets follow from ranks
//! alone; no eigenvector chains are ever computed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::cyclo::CycloNum;
use crate::exact::matrix::Matrix;

/// Multiset of (eigenvalue, block length) pairs, canonically sorted.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanData {
    blocks: Vec<(CycloNum, usize)>,
}

impl JordanData {
    pub fn new(mut blocks: Vec<(CycloNum, usize)>) -> JordanData {
        for (ev, _) in blocks.iter_mut() {
            *ev = ev.canonical();
        }
        blocks.sort_by(|a, b| a.0.structural_cmp(&b.0).then(a.1.cmp(&b.1)));
        JordanData { blocks }
    }

    pub fn empty() -> JordanData {
        JordanData { blocks: Vec::new() }
    }

    pub fn blocks(&self) -> &[(CycloNum, usize)] {
        &self.blocks
    }

    /// Sum of block lengths.
    pub fn total_size(&self) -> usize {
        self.blocks.iter().map(|(_, l)| l).sum()
    }

    pub fn push(&mut self, eigenvalue: CycloNum, length: usize) {
        self.blocks.push((eigenvalue.canonical(), length));
        self.blocks
            .sort_by(|a, b| a.0.structural_cmp(&b.0).then(a.1.cmp(&b.1)));
    }

    /// Multiset difference self - other; None if other is not contained.
    pub fn multiset_sub(&self, other: &JordanData) -> Option<JordanData> {
        let mut rest = self.blocks.clone();
        for b in &other.blocks {
            let pos = rest.iter().position(|x| x == b)?;
            rest.remove(pos);
        }
        Some(JordanData { blocks: rest })
    }
}

impl std::fmt::Debug for JordanData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(ev, l)| format!("J({}, {})", ev.render(), l))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JordanAnalysis {
    pub data: JordanData,
    /// True iff the candidate eigenvalues exhaust the spectrum.
    pub complete: bool,
}

/// Jordan data of `m` restricted to the candidate eigenvalues.
pub fn jordan_data(m: &Matrix, candidates: &[CycloNum]) -> Result<JordanAnalysis> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("jordan_data of non-square".into()));
    }
    let n = m.rows();
    let mut seen: Vec<CycloNum> = Vec::new();
    let mut blocks = Vec::new();
    let mut covered = 0usize;
    for cand in candidates {
        let cand = cand.canonical();
        if seen.iter().any(|c| c == &cand) {
            continue;
        }
        seen.push(cand.clone());
        let order = num::Integer::lcm(&m.order(), &cand.order());
        let mm = m.promote_order(order)?;
        let shift = Matrix::identity(order, n).scale(&cand);
        let b = mm.sub(&shift)?;
        // rank sequence of powers of (M - a)
        let mut ranks = vec![n];
        let mut power = b.clone();
        loop {
            let r = power.rank();
            ranks.push(r);
            if r == *ranks.get(ranks.len() - 2).unwrap() {
                break;
            }
            power = power.mul(&b)?;
        }
        let alg_mult = n - *ranks.last().unwrap();
        covered += alg_mult;
        let max_len = ranks.len() - 1;
        for len in 1..=max_len {
            let at_least_len = ranks[len - 1] - ranks[len];
            let at_least_next = if len < max_len {
                ranks[len] - ranks[len + 1]
            } else {
                0
            };
            for _ in 0..at_least_len.saturating_sub(at_least_next) {
                blocks.push((cand.clone(), len));
            }
        }
    }
    Ok(JordanAnalysis {
        data: JordanData::new(blocks),
        complete: covered == n,
    })
}

/// Block-diagonal matrix with the given Jordan structure; test utility and
/// the reconstruction side of the rank-sequence invariant.
pub fn jordan_matrix(order: u64, data: &JordanData) -> Matrix {
    let n = data.total_size();
    let mut m = Matrix::zeros(order, n, n);
    let mut at = 0usize;
    for (ev, len) in data.blocks() {
        let ev = ev.promote(order).expect("order must contain eigenvalues");
        for k in 0..*len {
            *m.at_mut(at + k, at + k) = ev.clone();
            if k + 1 < *len {
                *m.at_mut(at + k, at + k + 1) = CycloNum::one(order);
            }
        }
        at += len;
    }
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// (eigenvalue, geometric multiplicity), canonically sorted.
    pub eigenvalues: Vec<(CycloNum, usize)>,
    /// True iff multiplicities sum to the dimension.
    pub resolved: bool,
}

/// Eigenvalue discovery by candidate testing: scalar c times a primitive
/// d-th root of unity, d <= max_order, c drawn from `scalars`.
pub fn roots_of_unity_eigenvalues(
    m: &Matrix,
    max_order: u64,
    scalars: &[CycloNum],
    cap: u64,
) -> Result<SpectrumReport> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of non-square".into()));
    }
    let n = m.rows();
    let mut found: Vec<(CycloNum, usize)> = Vec::new();
    let mut total = 0usize;
    for d in 1..=max_order {
        for j in 0..d {
            if d > 1 && (j == 0 || num::Integer::gcd(&d, &j) != 1) {
                continue;
            }
            let mu = CycloNum::zeta_pow(d, j);
            for c in scalars {
                let cand = (c * &mu).canonical();
                if cand.is_zero() || found.iter().any(|(ev, _)| ev == &cand) {
                    continue;
                }
                let order = num::Integer::lcm(&m.order(), &cand.order());
                if order > cap {
                    return Err(Error::OrderCapExceeded {
                        requested: order,
                        cap,
                    });
                }
                let mm = m.promote_order(order)?;
                let shift = Matrix::identity(order, n).scale(&cand);
                let mult = n - mm.sub(&shift)?.rank();
                if mult > 0 {
                    found.push((cand, mult));
                    total += mult;
                }
            }
        }
        if total == n {
            break;
        }
    }
    found.sort_by(|a, b| a.0.structural_cmp(&b.0));
    Ok(SpectrumReport {
        eigenvalues: found,
        resolved: total == n,
    })
}

/// The default scalar candidates {1, -1} of the eigenvalue search.
pub fn default_scalars() -> Vec<CycloNum> {
    vec![CycloNum::from_int(1), CycloNum::from_int(-1)]
}
