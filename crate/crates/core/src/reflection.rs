//! GL3 pseudo-reflection triples, their invariants, the square-root data,
//! the trace map phi, and the verifier connecting them through the middle
//! convolution.
//!
//! A triple (r_3, r_2, r_1) is stored index-1-first like every tuple; the
//! distinguished product r_3 r_2 r_1 is the reversed tuple product.

use serde::{Deserialize, Serialize};

use crate::convolution::{middle_convolution, MatrixTuple};
use crate::error::{Error, Result};
use crate::exact::cyclo::CycloNum;
use crate::exact::jordan::{default_scalars, roots_of_unity_eigenvalues};
use crate::exact::matrix::Matrix;
use crate::slfricke::{raw_trace_coordinates, TraceSeven};

/// An invertible matrix of the form 1 + e (x) alpha, rank(M - 1) = 1.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoReflection {
    matrix: Matrix,
    e: Vec<CycloNum>,
    alpha: Vec<CycloNum>,
}

impl PseudoReflection {
    /// Build 1 + e (x) alpha; the certificate is recomputed and validated.
    pub fn new(e: Vec<CycloNum>, alpha: Vec<CycloNum>) -> Result<PseudoReflection> {
        if e.len() != alpha.len() {
            return Err(Error::DimensionMismatch("e and alpha lengths".into()));
        }
        let n = e.len();
        let mut order = 1u64;
        for v in e.iter().chain(alpha.iter()) {
            order = num::Integer::lcm(&order, &v.order());
        }
        let e: Result<Vec<CycloNum>> = e.iter().map(|v| v.promote(order)).collect();
        let alpha: Result<Vec<CycloNum>> = alpha.iter().map(|v| v.promote(order)).collect();
        let (e, alpha) = (e?, alpha?);
        if e.iter().all(|v| v.is_zero()) || alpha.iter().all(|v| v.is_zero()) {
            return Err(Error::NotPseudoReflection(
                "e and alpha must be nonzero".into(),
            ));
        }
        let mut matrix = Matrix::identity(order, n);
        for i in 0..n {
            for j in 0..n {
                let add = &e[i] * &alpha[j];
                let v = matrix.at(i, j) + &add;
                *matrix.at_mut(i, j) = v;
            }
        }
        // alpha(e) != -1 makes 1 + e (x) alpha invertible
        let mut pairing = CycloNum::zero(order);
        for i in 0..n {
            pairing = &pairing + &(&alpha[i] * &e[i]);
        }
        if (&pairing + &CycloNum::one(order)).is_zero() {
            return Err(Error::NotPseudoReflection(
                "alpha(e) = -1 makes the matrix singular".into(),
            ));
        }
        Ok(PseudoReflection { matrix, e, alpha })
    }

    /// Factor a matrix with rank(M - 1) = 1 as 1 + e (x) alpha.
    pub fn from_matrix(m: &Matrix) -> Result<PseudoReflection> {
        if !is_pseudo_reflection(m) {
            return Err(Error::NotPseudoReflection(format!(
                "rank(M-1) must be 1 and M invertible, got rank {}",
                m.sub(&Matrix::identity(m.order(), m.rows())).map(|d| d.rank()).unwrap_or(0)
            )));
        }
        let order = m.order();
        let n = m.rows();
        let dev = m.sub(&Matrix::identity(order, n))?;
        // first nonzero column is e (deterministic); alpha follows by division
        let col = (0..n)
            .find(|&j| (0..n).any(|i| !dev.at(i, j).is_zero()))
            .expect("rank 1 deviation is nonzero");
        let e: Vec<CycloNum> = (0..n).map(|i| dev.at(i, col).clone()).collect();
        let pivot_row = (0..n).find(|&i| !e[i].is_zero()).expect("nonzero column");
        let inv = e[pivot_row].try_inv()?;
        let alpha: Vec<CycloNum> = (0..n).map(|j| dev.at(pivot_row, j) * &inv).collect();
        let rebuilt = PseudoReflection::new(e, alpha)?;
        if rebuilt.matrix != *m {
            return Err(Error::NotPseudoReflection(
                "rank-1 factorization failed to reproduce the matrix".into(),
            ));
        }
        Ok(rebuilt)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn e(&self) -> &[CycloNum] {
        &self.e
    }

    pub fn alpha(&self) -> &[CycloNum] {
        &self.alpha
    }
}

impl std::fmt::Debug for PseudoReflection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PseudoReflection({:?})", self.matrix)
    }
}

/// rank(M - 1) = 1 and det(M) != 0.
pub fn is_pseudo_reflection(m: &Matrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let id = Matrix::identity(m.order(), m.rows());
    match m.sub(&id) {
        Ok(dev) => dev.rank() == 1 && m.is_invertible(),
        Err(_) => false,
    }
}

/// A triple of pseudo-reflections (r_3, r_2, r_1) in GL3.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReflectionTriple {
    reflections: [PseudoReflection; 3],
}

impl ReflectionTriple {
    pub fn new(r1: PseudoReflection, r2: PseudoReflection, r3: PseudoReflection) -> Result<ReflectionTriple> {
        for r in [&r1, &r2, &r3] {
            if r.matrix.rows() != 3 {
                return Err(Error::DimensionMismatch(
                    "reflection triples live in GL3".into(),
                ));
            }
        }
        Ok(ReflectionTriple {
            reflections: [r1, r2, r3],
        })
    }

    pub fn from_tuple(tuple: &MatrixTuple) -> Result<ReflectionTriple> {
        if tuple.len() != 3 || tuple.dimension() != 3 {
            return Err(Error::DimensionMismatch(
                "expected a triple of 3x3 matrices".into(),
            ));
        }
        let r1 = PseudoReflection::from_matrix(tuple.get(0))?;
        let r2 = PseudoReflection::from_matrix(tuple.get(1))?;
        let r3 = PseudoReflection::from_matrix(tuple.get(2))?;
        ReflectionTriple::new(r1, r2, r3)
    }

    pub fn get(&self, k: usize) -> &PseudoReflection {
        &self.reflections[k]
    }

    pub fn to_tuple(&self) -> MatrixTuple {
        MatrixTuple::new(vec![
            self.reflections[0].matrix.clone(),
            self.reflections[1].matrix.clone(),
            self.reflections[2].matrix.clone(),
        ])
        .expect("pseudo-reflections are invertible")
    }

    /// The distinguished product r_3 r_2 r_1.
    pub fn product(&self) -> Matrix {
        self.to_tuple().product_reversed()
    }
}

/// The eight invariants of a reflection triple plus the resolved spectrum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TInvariants {
    /// det(r_i) = t_i^2.
    pub t_sq: [CycloNum; 3],
    pub t12: CycloNum,
    pub t23: CycloNum,
    pub t13: CycloNum,
    /// n_1^2 + n_2^2 + n_3^2 (= trace of the product).
    pub t321: CycloNum,
    /// (n_1 n_2)^2 + (n_2 n_3)^2 + (n_1 n_3)^2.
    pub t321p: CycloNum,
    /// Spectrum of r_3 r_2 r_1 with multiplicity, canonically sorted.
    pub spectrum: [CycloNum; 3],
    /// Repeated eigenvalues (theorem hypothesis fails).
    pub degenerate: bool,
}

/// Compute the eight invariants; the spectrum is resolved by the
/// root-of-unity search and cross-checked against the characteristic
/// polynomial of the product.
pub fn t_invariants(triple: &ReflectionTriple, max_order: u64, cap: u64) -> Result<TInvariants> {
    let prod = triple.product();
    let spec = roots_of_unity_eigenvalues(&prod, max_order, &default_scalars(), cap)?;
    if !spec.resolved {
        return Err(Error::UnresolvedSpectrum {
            found: spec.eigenvalues.iter().map(|(_, m)| m).sum(),
            dimension: 3,
        });
    }
    let mut flat: Vec<CycloNum> = Vec::new();
    for (ev, mult) in &spec.eigenvalues {
        for _ in 0..*mult {
            flat.push(ev.clone());
        }
    }
    flat.sort_by(|a, b| a.structural_cmp(b));
    let degenerate = flat[0] == flat[1] || flat[1] == flat[2];
    let spectrum: [CycloNum; 3] = [flat[0].clone(), flat[1].clone(), flat[2].clone()];

    let t_sq = [
        triple.get(0).matrix().det()?,
        triple.get(1).matrix().det()?,
        triple.get(2).matrix().det()?,
    ];
    let one = CycloNum::from_int(1);
    let tr = |a: &PseudoReflection, b: &PseudoReflection| -> Result<CycloNum> {
        Ok(&a.matrix().mul(b.matrix())?.trace() - &one)
    };
    let t12 = tr(triple.get(0), triple.get(1))?;
    let t23 = tr(triple.get(1), triple.get(2))?;
    let t13 = tr(triple.get(0), triple.get(2))?;

    let t321 = &(&spectrum[0] + &spectrum[1]) + &spectrum[2];
    let t321p = &(&(&spectrum[0] * &spectrum[1]) + &(&spectrum[1] * &spectrum[2]))
        + &(&spectrum[0] * &spectrum[2]);

    // cross-checks against the product's characteristic polynomial
    if t321 != prod.trace() {
        return Err(Error::Consistency(
            "t321 disagrees with the trace of the product".into(),
        ));
    }
    let cp = prod.char_poly()?;
    if t321p != cp[1] {
        return Err(Error::Consistency(
            "t321' disagrees with the second symmetric function".into(),
        ));
    }
    Ok(TInvariants {
        t_sq,
        t12,
        t23,
        t13,
        t321,
        t321p,
        spectrum,
        degenerate,
    })
}

/// The square-root data (t_1,t_2,t_3,n_1,n_2,n_3,t_12,t_23,t_13), square
/// roots chosen so that t_1 t_2 t_3 = n_1 n_2 n_3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TTuple {
    pub t1: CycloNum,
    pub t2: CycloNum,
    pub t3: CycloNum,
    pub n1: CycloNum,
    pub n2: CycloNum,
    pub n3: CycloNum,
    pub t12: CycloNum,
    pub t23: CycloNum,
    pub t13: CycloNum,
    pub t321: CycloNum,
    pub t321p: CycloNum,
}

/// All sign assignments (base square roots times +-1, 64 candidates)
/// meeting the constraint, deterministically ordered; the labeling decides
/// which spectrum eigenvalue each n_i is a square root of.
pub fn choose_roots_with_labeling(
    inv: &TInvariants,
    labeling: [usize; 3],
    cap: u64,
) -> Result<Vec<TTuple>> {
    let base_t: [CycloNum; 3] = [
        inv.t_sq[0].sqrt_in_cyclotomic(cap)?,
        inv.t_sq[1].sqrt_in_cyclotomic(cap)?,
        inv.t_sq[2].sqrt_in_cyclotomic(cap)?,
    ];
    let base_n: [CycloNum; 3] = [
        inv.spectrum[labeling[0]].sqrt_in_cyclotomic(cap)?,
        inv.spectrum[labeling[1]].sqrt_in_cyclotomic(cap)?,
        inv.spectrum[labeling[2]].sqrt_in_cyclotomic(cap)?,
    ];
    let mut out = Vec::new();
    for signs in 0u32..64 {
        let pick = |base: &CycloNum, bit: u32| -> CycloNum {
            if signs & (1 << bit) != 0 {
                -base
            } else {
                base.clone()
            }
        };
        let t1 = pick(&base_t[0], 0);
        let t2 = pick(&base_t[1], 1);
        let t3 = pick(&base_t[2], 2);
        let n1 = pick(&base_n[0], 3);
        let n2 = pick(&base_n[1], 4);
        let n3 = pick(&base_n[2], 5);
        let lhs = &(&t1 * &t2) * &t3;
        let rhs = &(&n1 * &n2) * &n3;
        if lhs == rhs {
            out.push(TTuple {
                t1,
                t2,
                t3,
                n1,
                n2,
                n3,
                t12: inv.t12.clone(),
                t23: inv.t23.clone(),
                t13: inv.t13.clone(),
                t321: inv.t321.clone(),
                t321p: inv.t321p.clone(),
            });
        }
    }
    Ok(out)
}

/// Root choices for the canonical (sorted-spectrum) labeling.
pub fn choose_roots(triple: &ReflectionTriple, max_order: u64, cap: u64) -> Result<Vec<TTuple>> {
    let inv = t_invariants(triple, max_order, cap)?;
    choose_roots_with_labeling(&inv, [0, 1, 2], cap)
}

/// Candidate readings of the displayed trace-map formulas. `Verbatim` is
/// the map exactly as displayed (n_1 in all of m_1, m_2, m_3 and no
/// reciprocal term in m_1); the others are the plausible typo repairs the
/// verifier discriminates between.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiReading {
    /// m_1 = t_1/n_1, m_i = t_i/n_1 + n_1/t_i (i = 2, 3).
    Verbatim,
    /// m_1 = t_1/n_1 + n_1/t_1, m_i as displayed.
    SymmetricM1,
    /// m_i = t_i/n_i + n_i/t_i for all i.
    PerIndex,
    /// m_1 = t_1/n_1 bare, m_i = t_i/n_i + n_i/t_i (i = 2, 3).
    PerIndexBareM1,
}

impl PhiReading {
    pub const ALL: [PhiReading; 4] = [
        PhiReading::Verbatim,
        PhiReading::SymmetricM1,
        PhiReading::PerIndex,
        PhiReading::PerIndexBareM1,
    ];
}

/// The displayed map phi from square-root data to a seven-tuple.
pub fn phi(t: &TTuple) -> Result<TraceSeven> {
    phi_with_reading(t, PhiReading::Verbatim)
}

pub fn phi_with_reading(t: &TTuple, reading: PhiReading) -> Result<TraceSeven> {
    let sym = |num: &CycloNum, den: &CycloNum| -> Result<CycloNum> {
        Ok(&num.try_div(den)? + &den.try_div(num)?)
    };
    let (m1, m2, m3) = match reading {
        PhiReading::Verbatim => (
            t.t1.try_div(&t.n1)?,
            sym(&t.t2, &t.n1)?,
            sym(&t.t3, &t.n1)?,
        ),
        PhiReading::SymmetricM1 => (
            sym(&t.t1, &t.n1)?,
            sym(&t.t2, &t.n1)?,
            sym(&t.t3, &t.n1)?,
        ),
        PhiReading::PerIndex => (
            sym(&t.t1, &t.n1)?,
            sym(&t.t2, &t.n2)?,
            sym(&t.t3, &t.n3)?,
        ),
        PhiReading::PerIndexBareM1 => (
            t.t1.try_div(&t.n1)?,
            sym(&t.t2, &t.n2)?,
            sym(&t.t3, &t.n3)?,
        ),
    };
    Ok(TraceSeven {
        m1,
        m2,
        m3,
        m12: t.t12.try_div(&(&t.t1 * &t.t2))?,
        m23: t.t23.try_div(&(&t.t2 * &t.t3))?,
        m13: t.t13.try_div(&(&t.t1 * &t.t3))?,
        m321: {
            let q = t.n2.try_div(&t.n3)?;
            &q + &q.try_inv()?
        },
    })
}

/// Componentwise scalar multiplication; scalars[k] scales M_{k+1}.
pub fn scale_tuple(tuple: &MatrixTuple, scalars: &[CycloNum]) -> Result<MatrixTuple> {
    if scalars.len() != tuple.len() {
        return Err(Error::DimensionMismatch(
            "one scalar per tuple entry".into(),
        ));
    }
    for (i, s) in scalars.iter().enumerate() {
        if s.is_zero() {
            return Err(Error::ZeroScalar { index: i + 1 });
        }
    }
    let mats: Vec<Matrix> = tuple
        .matrices()
        .iter()
        .zip(scalars)
        .map(|(m, s)| m.scale(s))
        .collect();
    MatrixTuple::new(mats)
}

/// Which slot each n_i scales: as displayed (n_i with M_i') or reversed
/// (n_1 with M_3').
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlotPairing {
    Forward,
    Reversed,
}

impl SlotPairing {
    pub const ALL: [SlotPairing; 2] = [SlotPairing::Forward, SlotPairing::Reversed];

    fn scalars(&self, t: &TTuple) -> [CycloNum; 3] {
        match self {
            SlotPairing::Forward => [t.n1.clone(), t.n2.clone(), t.n3.clone()],
            SlotPairing::Reversed => [t.n3.clone(), t.n2.clone(), t.n1.clone()],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaAttempt {
    pub lambda: CycloNum,
    /// "eigenvalue" or "inverse_eigenvalue" (of r_3 r_2 r_1).
    pub source: String,
    pub mc_dim: usize,
}

/// One grid point of the theorem verification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyRow {
    pub lambda: CycloNum,
    pub lambda_source: String,
    /// Which sorted-spectrum eigenvalue is labeled n_1^2 (0-based).
    pub labeling: usize,
    pub roots: TTuple,
    pub pairing: SlotPairing,
    pub reading: PhiReading,
    /// det(M_i) = 1 checks after scaling.
    pub sl2: [bool; 3],
    /// Per-coordinate equality of the seven trace coordinates.
    pub matches: [bool; 7],
    pub all_match: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub attempts: Vec<LambdaAttempt>,
    pub rows: Vec<VerifyRow>,
    pub verified: bool,
    /// Readings that achieved a full seven-coordinate match somewhere.
    pub matching_readings: Vec<PhiReading>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_order: u64,
    pub cap: u64,
    /// Restrict lambda to this value instead of searching.
    pub lambda_override: Option<CycloNum>,
    pub readings: Vec<PhiReading>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_order: 28,
            cap: crate::exact::cyclo::DEFAULT_ORDER_CAP,
            lambda_override: None,
            readings: PhiReading::ALL.to_vec(),
        }
    }
}

/// Run the full verification grid: lambda candidates (eigenvalues of
/// r_3 r_2 r_1 and their inverses) x spectrum labelings x valid root
/// choices x slot pairings x formula readings. Each grid point records the
/// seven per-coordinate matches between the trace data of the scaled MC
/// output and phi of the root data.
pub fn verify_theorem(
    triple: &ReflectionTriple,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let inv = t_invariants(triple, options.max_order, options.cap)?;
    if inv.degenerate {
        return Err(Error::DegenerateSpectrum);
    }
    let tuple = triple.to_tuple();

    // lambda grid: each eigenvalue and each inverse, deduplicated
    let mut lambdas: Vec<(CycloNum, String)> = Vec::new();
    if let Some(l) = &options.lambda_override {
        lambdas.push((l.clone(), "override".to_string()));
    } else {
        for ev in &inv.spectrum {
            if !lambdas.iter().any(|(l, _)| l == ev) {
                lambdas.push((ev.clone(), "eigenvalue".to_string()));
            }
        }
        for ev in &inv.spectrum {
            let li = ev.try_inv()?;
            if !lambdas.iter().any(|(l, _)| l == &li) {
                lambdas.push((li, "inverse_eigenvalue".to_string()));
            }
        }
    }

    let mut attempts = Vec::new();
    let mut rows = Vec::new();
    let mut matching_readings: Vec<PhiReading> = Vec::new();

    for (lambda, source) in &lambdas {
        let mc = middle_convolution(&tuple, lambda)?;
        attempts.push(LambdaAttempt {
            lambda: lambda.clone(),
            source: source.clone(),
            mc_dim: mc.tuple.dimension(),
        });
        if mc.tuple.dimension() != 2 {
            continue;
        }
        for labeling in 0..3usize {
            let perm = match labeling {
                0 => [0, 1, 2],
                1 => [1, 0, 2],
                _ => [2, 0, 1],
            };
            let root_choices = choose_roots_with_labeling(&inv, perm, options.cap)?;
            for roots in &root_choices {
                for pairing in SlotPairing::ALL {
                    let scaled = scale_tuple(&mc.tuple, &pairing.scalars(roots))?;
                    let one = CycloNum::from_int(1);
                    let sl2 = [
                        scaled.get(0).det()? == one,
                        scaled.get(1).det()? == one,
                        scaled.get(2).det()? == one,
                    ];
                    let actual = raw_trace_coordinates(&scaled)?;
                    for &reading in &options.readings {
                        let expected = phi_with_reading(roots, reading)?;
                        let mut matches = [false; 7];
                        let av = actual.coords();
                        let ev = expected.coords();
                        for k in 0..7 {
                            matches[k] = av[k] == ev[k];
                        }
                        let all_match = matches.iter().all(|&b| b);
                        if all_match && !matching_readings.contains(&reading) {
                            matching_readings.push(reading);
                        }
                        rows.push(VerifyRow {
                            lambda: lambda.clone(),
                            lambda_source: source.clone(),
                            labeling,
                            roots: roots.clone(),
                            pairing,
                            reading,
                            sl2,
                            matches,
                            all_match,
                        });
                    }
                }
            }
        }
    }

    let verified = rows.iter().any(|r| r.all_match);
    Ok(VerificationReport {
        attempts,
        rows,
        verified,
        matching_readings,
    })
}
