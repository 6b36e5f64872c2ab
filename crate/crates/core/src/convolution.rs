//! The middle convolution MC_lambda on tuples of invertible matrices.
//!
//! Tuple convention: the tuple (M_r, ..., M_1) is stored with index 1 first,
//! so `matrices[k]` is M_{k+1}. All I/O carries explicit 1-based index
//! labels. Products written M_1...M_r multiply left to right in index
//! order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::cyclo::CycloNum;
use crate::exact::jordan::{jordan_data, JordanAnalysis, JordanData};
use crate::exact::matrix::Matrix;

/// An ordered tuple (M_r, ..., M_1) of invertible square matrices over a
/// common cyclotomic field.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixTuple {
    matrices: Vec<Matrix>,
    dimension: usize,
    order: u64,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<Matrix>) -> Result<MatrixTuple> {
        if matrices.is_empty() {
            return Err(Error::DimensionMismatch("empty tuple".into()));
        }
        let dim = matrices[0].rows();
        let mut order = 1u64;
        for m in &matrices {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::DimensionMismatch(
                    "tuple entries must be square of common dimension".into(),
                ));
            }
            order = num::Integer::lcm(&order, &m.order());
        }
        let matrices: Result<Vec<Matrix>> =
            matrices.into_iter().map(|m| m.promote_order(order)).collect();
        let matrices = matrices?;
        for (i, m) in matrices.iter().enumerate() {
            if m.rank() != dim {
                return Err(Error::NotInvertible { index: i + 1 });
            }
        }
        Ok(MatrixTuple {
            matrices,
            dimension: dim,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// M_{k+1} (0-based access into the index-1-first storage).
    pub fn get(&self, k: usize) -> &Matrix {
        &self.matrices[k]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn promote_order(&self, target: u64) -> Result<MatrixTuple> {
        let ms: Result<Vec<Matrix>> = self
            .matrices
            .iter()
            .map(|m| m.promote_order(target))
            .collect();
        Ok(MatrixTuple {
            matrices: ms?,
            dimension: self.dimension,
            order: target,
        })
    }

    /// The product M_1 M_2 ... M_r (left to right in index order); this is
    /// the product appearing in the dimension formula and in the braid
    /// invariant.
    pub fn product(&self) -> Matrix {
        let mut p = Matrix::identity(self.order, self.dimension);
        for m in &self.matrices {
            p = p.mul(m).expect("dimensions agree");
        }
        p
    }

    /// The reversed product M_r ... M_1.
    pub fn product_reversed(&self) -> Matrix {
        let mut p = Matrix::identity(self.order, self.dimension);
        for m in self.matrices.iter().rev() {
            p = p.mul(m).expect("dimensions agree");
        }
        p
    }

    /// Componentwise conjugation g M_i g^{-1}.
    pub fn conjugate(&self, g: &Matrix) -> Result<MatrixTuple> {
        let ginv = g.inverse()?;
        let ms: Result<Vec<Matrix>> = self
            .matrices
            .iter()
            .map(|m| g.mul(m)?.mul(&ginv))
            .collect();
        MatrixTuple::new(ms?)
    }
}

impl std::fmt::Debug for MatrixTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "MatrixTuple r={} dim={} over Q(zeta_{})",
            self.len(),
            self.dimension,
            self.order
        )?;
        for (k, m) in self.matrices.iter().enumerate() {
            writeln!(f, "M_{} = {:?}", k + 1, m)?;
        }
        Ok(())
    }
}

/// A failed instance of the "no 1-dimensional factors/submodules on which
/// at most one M_i acts nontrivially" condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisWarning {
    /// 1-based index of the possibly-nontrivially-acting matrix.
    pub index: usize,
    /// False: submodule side; true: factor side (transposed check).
    pub dual: bool,
    /// Dimension of the offending invariant subspace.
    pub dim: usize,
}

/// Check the prose hypothesis of the main theorem: for every i, the largest
/// M_i-invariant subspace of the common fixed space of the other matrices
/// must be zero, and dually for transposes.
pub fn hypothesis_warnings(tuple: &MatrixTuple) -> Vec<HypothesisWarning> {
    let mut warnings = Vec::new();
    for dual in [false, true] {
        let mats: Vec<Matrix> = tuple
            .matrices()
            .iter()
            .map(|m| if dual { m.transpose() } else { m.clone() })
            .collect();
        for i in 0..mats.len() {
            let dim = invariant_core_dimension(&mats, i, tuple.dimension(), tuple.order());
            if dim > 0 {
                warnings.push(HypothesisWarning {
                    index: i + 1,
                    dual,
                    dim,
                });
            }
        }
    }
    warnings
}

/// Dimension of the largest M_i-invariant subspace of
/// the intersection of ker(M_j - 1), j != i.
fn invariant_core_dimension(mats: &[Matrix], i: usize, dim: usize, order: u64) -> usize {
    // W = common fixed space of the other matrices
    let mut stacked: Option<Matrix> = None;
    for (j, m) in mats.iter().enumerate() {
        if j == i {
            continue;
        }
        let shifted = m.sub(&Matrix::identity(order, dim)).unwrap();
        stacked = Some(match stacked {
            None => shifted,
            Some(s) => s.vstack(&shifted).unwrap(),
        });
    }
    let mut basis: Vec<Vec<CycloNum>> = match stacked {
        None => (0..dim)
            .map(|k| {
                let mut v = vec![CycloNum::zero(order); dim];
                v[k] = CycloNum::one(order);
                v
            })
            .collect(),
        Some(s) => s.rank_and_kernel().1,
    };
    // shrink to the largest M_i-invariant subspace
    loop {
        if basis.is_empty() {
            return 0;
        }
        let b = Matrix::from_columns(order, &basis).unwrap();
        let mib = mats[i].mul(&b).unwrap();
        // {c : M_i B c = B d for some d}  =  c-part of ker [M_i B | -B]
        let sys = mib.hstack(&b.neg()).unwrap();
        let (_, kernel) = sys.rank_and_kernel();
        let w = basis.len();
        let mut coeff_vecs: Vec<Vec<CycloNum>> = kernel
            .into_iter()
            .map(|v| v[..w].to_vec())
            .collect();
        // column space of the c-parts
        let new_dim = if coeff_vecs.is_empty() {
            0
        } else {
            let m = Matrix::from_columns(order, &coeff_vecs).unwrap();
            let (rref, pivots) = m.transpose().rref();
            coeff_vecs = (0..pivots.len()).map(|p| rref.row(p)).collect();
            pivots.len()
        };
        if new_dim == w {
            return w;
        }
        basis = coeff_vecs
            .iter()
            .map(|c| {
                let bc = b
                    .mul_vec(c)
                    .expect("coefficients match basis size");
                bc
            })
            .collect();
    }
}

/// The block matrices N_k of C_lambda(M) on V^r: row-block k carries
/// (M_1-1), ..., (M_{k-1}-1), lambda M_k, lambda (M_{k+1}-1), ...,
/// lambda (M_r-1); every other row-block is an identity row.
pub fn build_c_lambda(tuple: &MatrixTuple, lambda: &CycloNum) -> Result<MatrixTuple> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let r = tuple.len();
    let m = tuple.dimension();
    let order = num::Integer::lcm(&tuple.order(), &lambda.order());
    let tuple = tuple.promote_order(order)?;
    let lambda = lambda.promote(order)?;
    let id = Matrix::identity(order, m);
    let mut out = Vec::with_capacity(r);
    for k in 0..r {
        let mut n = Matrix::zeros(order, r * m, r * m);
        for i in 0..r {
            if i != k {
                n.set_block(i * m, i * m, &id);
            }
        }
        for j in 0..r {
            let block = if j < k {
                tuple.get(j).sub(&id)?
            } else if j == k {
                tuple.get(k).scale(&lambda)
            } else {
                tuple.get(j).sub(&id)?.scale(&lambda)
            };
            n.set_block(k * m, j * m, &block);
        }
        out.push(n);
    }
    MatrixTuple::new(out)
}

/// The invariant subspaces K_k (ker(M_k - 1) in slot k) and
/// L = intersection of ker(N_k - 1).
pub fn invariant_subspaces(
    tuple: &MatrixTuple,
    lambda: &CycloNum,
) -> Result<(Vec<Vec<Vec<CycloNum>>>, Vec<Vec<CycloNum>>)> {
    let big = build_c_lambda(tuple, lambda)?;
    let r = tuple.len();
    let m = tuple.dimension();
    let order = big.order();
    let tuple = tuple.promote_order(order)?;
    let id = Matrix::identity(order, m);
    let mut k_bases = Vec::with_capacity(r);
    for k in 0..r {
        let (_, kernel) = tuple.get(k).sub(&id)?.rank_and_kernel();
        let lifted: Vec<Vec<CycloNum>> = kernel
            .into_iter()
            .map(|v| {
                let mut big_v = vec![CycloNum::zero(order); r * m];
                for (t, e) in v.into_iter().enumerate() {
                    big_v[k * m + t] = e;
                }
                big_v
            })
            .collect();
        k_bases.push(lifted);
    }
    let big_id = Matrix::identity(order, r * m);
    let mut stacked: Option<Matrix> = None;
    for k in 0..r {
        let shifted = big.get(k).sub(&big_id)?;
        stacked = Some(match stacked {
            None => shifted,
            Some(s) => s.vstack(&shifted)?,
        });
    }
    let (_, l_basis) = stacked.unwrap().rank_and_kernel();
    Ok((k_bases, l_basis))
}

/// True iff every basis vector stays inside the span under every matrix.
pub fn is_invariant_subspace(basis: &[Vec<CycloNum>], mats: &[Matrix]) -> bool {
    if basis.is_empty() {
        return true;
    }
    let order = mats[0].order();
    let b = Matrix::from_columns(order, basis).unwrap();
    for m in mats {
        for v in basis {
            let img = m.mul_vec(v).unwrap();
            // img must be a combination of basis columns
            let rhs = Matrix::from_columns(order, &[img.clone()]).unwrap();
            let sys = b.hstack(&rhs).unwrap();
            if sys.rank() != b.rank() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvolutionResult {
    /// MC_lambda(M): the induced tuple on the quotient V^r / (K + L).
    pub tuple: MatrixTuple,
    /// C_lambda(M): the N_k on V^r.
    pub big_tuple: MatrixTuple,
    /// Bases of the K_k, embedded in V^r.
    pub k_bases: Vec<Vec<Vec<CycloNum>>>,
    /// Basis of L.
    pub l_basis: Vec<Vec<CycloNum>>,
    /// The complement basis: the non-pivot standard coordinate vectors of
    /// the reduced echelon form of the K+L basis matrix.
    pub quotient_basis: Vec<Vec<CycloNum>>,
    pub lambda: CycloNum,
    /// Quotient dimension 0.
    pub degenerate: bool,
    /// Hypothesis-check findings; empty means the theorem hypotheses held.
    pub warnings: Vec<HypothesisWarning>,
    /// The closed-form dimension when lambda != 1.
    pub formula_dim: Option<i64>,
}

/// The middle convolution MC_lambda(M) with a deterministic quotient basis.
pub fn middle_convolution(tuple: &MatrixTuple, lambda: &CycloNum) -> Result<ConvolutionResult> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let warnings = hypothesis_warnings(tuple);
    let big = build_c_lambda(tuple, lambda)?;
    let order = big.order();
    let lambda = lambda.promote(order)?;
    let (k_bases, l_basis) = invariant_subspaces(tuple, &lambda)?;
    let n = big.dimension();

    // K + L as the row space of all basis vectors
    let mut all_rows: Vec<Vec<CycloNum>> = Vec::new();
    for kb in &k_bases {
        all_rows.extend(kb.iter().cloned());
    }
    all_rows.extend(l_basis.iter().cloned());

    let (sub_basis, complement): (Vec<Vec<CycloNum>>, Vec<usize>) = if all_rows.is_empty() {
        (Vec::new(), (0..n).collect())
    } else {
        let kl = Matrix::from_rows(all_rows)?.promote_order(order)?;
        let (rref, pivots) = kl.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let sub: Vec<Vec<CycloNum>> = (0..pivots.len()).map(|i| rref.row(i)).collect();
        let comp: Vec<usize> = (0..n).filter(|j| !pivot_set.contains(j)).collect();
        (sub, comp)
    };
    let s = sub_basis.len();
    let q = n - s;

    // change of basis [subspace | complement]
    let mut cols: Vec<Vec<CycloNum>> = sub_basis.clone();
    for &j in &complement {
        let mut e = vec![CycloNum::zero(order); n];
        e[j] = CycloNum::one(order);
        cols.push(e);
    }
    let b = Matrix::from_columns(order, &cols)?;
    let binv = b.inverse()?;

    let mut small = Vec::with_capacity(big.len());
    for k in 0..big.len() {
        let c = binv.mul(big.get(k))?.mul(&b)?;
        // the subspace is invariant, so the lower-left block must vanish
        if s > 0 && q > 0 && !c.block(s, 0, q, s).is_zero() {
            return Err(Error::Consistency(
                "K+L is not invariant under C_lambda".into(),
            ));
        }
        small.push(c.block(s, s, q, q));
    }
    let quotient_tuple = if q == 0 {
        MatrixTuple {
            matrices: small,
            dimension: 0,
            order,
        }
    } else {
        MatrixTuple::new(small)?
    };

    let formula_dim = if lambda.is_one() {
        None
    } else {
        Some(convolution_dimension(tuple, &lambda)?)
    };

    let quotient_basis: Vec<Vec<CycloNum>> = complement
        .iter()
        .map(|&j| {
            let mut e = vec![CycloNum::zero(order); n];
            e[j] = CycloNum::one(order);
            e
        })
        .collect();

    Ok(ConvolutionResult {
        tuple: quotient_tuple,
        big_tuple: big,
        k_bases,
        l_basis,
        quotient_basis,
        lambda,
        degenerate: q == 0,
        warnings,
        formula_dim,
    })
}

/// The closed-form dimension of MC_lambda(V) for lambda != 1:
/// sum_k rk(M_k - 1) - (dim V - rk(lambda M_1...M_r - 1)).
pub fn convolution_dimension(tuple: &MatrixTuple, lambda: &CycloNum) -> Result<i64> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    if lambda.is_one() {
        return Err(Error::LambdaOne);
    }
    let order = num::Integer::lcm(&tuple.order(), &lambda.order());
    let tuple = tuple.promote_order(order)?;
    let lambda = lambda.promote(order)?;
    let m = tuple.dimension();
    let id = Matrix::identity(order, m);
    let mut total: i64 = 0;
    for k in 0..tuple.len() {
        total += tuple.get(k).sub(&id)?.rank() as i64;
    }
    let scaled_prod = tuple.product().scale(&lambda);
    let rk = scaled_prod.sub(&id)?.rank() as i64;
    Ok(total - (m as i64 - rk))
}

/// Monodromy at infinity, normalized so that M_1 ... M_r M_{r+1} = 1.
pub fn monodromy_at_infinity(tuple: &MatrixTuple) -> Result<Matrix> {
    tuple.product().inverse()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransferPosition {
    /// One of the finite positions k = 1..r.
    Index,
    /// The monodromy at infinity M_{r+1}.
    Infinity,
}

/// The Jordan-block transfer map: J(a, l) of the input contributes
/// J(a*lambda, l') to the output, where l' depends on the position and on
/// whether a is 1 or lambda^{-1}. Free J(1,1) (position k) or J(lambda,1)
/// (infinity) blocks are not predicted; their count is fixed by the output
/// dimension.
pub fn jordan_transfer_predict(
    input: &JordanData,
    lambda: &CycloNum,
    position: TransferPosition,
) -> JordanData {
    let mut blocks = Vec::new();
    for (alpha, l) in input.blocks() {
        let is_one = alpha.is_one();
        let is_lambda_inv = (alpha * lambda).is_one();
        let l_new = if !is_one && !is_lambda_inv {
            *l as i64
        } else {
            match (position, is_one) {
                (TransferPosition::Index, true) => *l as i64 - 1,
                (TransferPosition::Index, false) => *l as i64 + 1,
                (TransferPosition::Infinity, true) => *l as i64 + 1,
                (TransferPosition::Infinity, false) => *l as i64 - 1,
            }
        };
        if l_new > 0 {
            blocks.push((alpha * lambda, l_new as usize));
        }
    }
    JordanData::new(blocks)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransferCheck {
    pub predicted: JordanData,
    pub actual: JordanData,
    pub free_blocks: usize,
    pub ok: bool,
}

/// Compare the transfer prediction for one position against the Jordan data
/// of the corresponding MC output matrix. The surplus of the actual data
/// over the prediction must consist solely of J(1,1) blocks (finite
/// positions) or J(lambda,1) blocks (infinity).
pub fn jordan_transfer_check(
    input: &JordanAnalysis,
    output_matrix: &Matrix,
    lambda: &CycloNum,
    position: TransferPosition,
) -> Result<TransferCheck> {
    if !input.complete {
        return Err(Error::IncompleteJordanData);
    }
    let predicted = jordan_transfer_predict(&input.data, lambda, position);
    let free_ev = match position {
        TransferPosition::Index => CycloNum::one(lambda.order()),
        TransferPosition::Infinity => lambda.clone(),
    };
    let mut candidates: Vec<CycloNum> = predicted
        .blocks()
        .iter()
        .map(|(ev, _)| ev.clone())
        .collect();
    candidates.push(free_ev.clone());
    let actual = jordan_data(output_matrix, &candidates)?;
    if !actual.complete {
        return Ok(TransferCheck {
            predicted,
            actual: actual.data,
            free_blocks: 0,
            ok: false,
        });
    }
    let ok;
    let mut free_blocks = 0;
    match actual.data.multiset_sub(&predicted) {
        Some(rest) => {
            free_blocks = rest.blocks().len();
            ok = rest
                .blocks()
                .iter()
                .all(|(ev, l)| *l == 1 && ev == &free_ev);
        }
        None => ok = false,
    }
    Ok(TransferCheck {
        predicted,
        actual: actual.data,
        free_blocks,
        ok,
    })
}

/// Outcome of the intertwiner search between two tuples.
#[derive(Clone, Debug)]
pub enum IsoOutcome {
    /// An explicit invertible X with X A_i = B_i X for all i.
    Isomorphic(Matrix),
    /// Certified: the intertwiner space makes an isomorphism impossible.
    NotIsomorphic,
    /// Nonzero intertwiner space, but no invertible element found within
    /// the search bound.
    Inconclusive,
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IsoConfig {
    /// Integer coefficients range over [-bound, bound].
    pub coeff_bound: i64,
    /// Cap on enumerated combinations beyond the basis vectors.
    pub max_candidates: usize,
}

impl Default for IsoConfig {
    fn default() -> Self {
        IsoConfig {
            coeff_bound: 2,
            max_candidates: 4096,
        }
    }
}

/// Solve X A_i = B_i X for all i and search the solution space for an
/// invertible element: basis vectors first, then small integer
/// combinations in deterministic lexicographic order.
pub fn module_isomorphic(a: &MatrixTuple, b: &MatrixTuple, cfg: IsoConfig) -> Result<IsoOutcome> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(
            "tuples of different length".into(),
        ));
    }
    if a.dimension() != b.dimension() {
        return Ok(IsoOutcome::NotIsomorphic);
    }
    let m = a.dimension();
    if m == 0 {
        return Ok(IsoOutcome::Isomorphic(Matrix::identity(1, 0)));
    }
    let order = num::Integer::lcm(&a.order(), &b.order());
    let a = a.promote_order(order)?;
    let b = b.promote_order(order)?;

    // unknowns x_{p,k} = X[p][k], flattened p*m + k
    let mut rows: Vec<Vec<CycloNum>> = Vec::with_capacity(a.len() * m * m);
    for i in 0..a.len() {
        let am = a.get(i);
        let bm = b.get(i);
        for p in 0..m {
            for q in 0..m {
                let mut row = vec![CycloNum::zero(order); m * m];
                for k in 0..m {
                    // X[p][k] * A[k][q]
                    row[p * m + k] = &row[p * m + k] + am.at(k, q);
                    // - B[p][k] * X[k][q]
                    row[k * m + q] = &row[k * m + q] - bm.at(p, k);
                }
                rows.push(row);
            }
        }
    }
    let sys = Matrix::from_rows(rows)?.promote_order(order)?;
    let (_, kernel) = sys.rank_and_kernel();
    if kernel.is_empty() {
        return Ok(IsoOutcome::NotIsomorphic);
    }

    let to_matrix = |v: &[CycloNum]| -> Matrix {
        let mut x = Matrix::zeros(order, m, m);
        for p in 0..m {
            for k in 0..m {
                *x.at_mut(p, k) = v[p * m + k].clone();
            }
        }
        x
    };

    for v in &kernel {
        let x = to_matrix(v);
        if x.is_invertible() {
            return Ok(IsoOutcome::Isomorphic(x));
        }
    }

    // small integer combinations, lexicographic over [-bound, bound]^k
    let kdim = kernel.len();
    let bound = cfg.coeff_bound;
    let radix = (2 * bound + 1) as usize;
    let mut total = 1usize;
    for _ in 0..kdim {
        total = total.saturating_mul(radix);
        if total > cfg.max_candidates {
            total = cfg.max_candidates;
            break;
        }
    }
    'outer: for idx in 0..total.min(cfg.max_candidates) {
        let mut digits = idx;
        let mut combo = vec![CycloNum::zero(order); m * m];
        let mut nonzero = 0;
        for kd in kernel.iter() {
            let c = (digits % radix) as i64 - bound;
            digits /= radix;
            if c != 0 {
                nonzero += 1;
                let cq = CycloNum::from_int(c).promote(order)?;
                for (t, e) in kd.iter().enumerate() {
                    if !e.is_zero() {
                        combo[t] = &combo[t] + &(e * &cq);
                    }
                }
            }
        }
        if nonzero < 2 {
            continue 'outer; // single-vector candidates already tried
        }
        let x = to_matrix(&combo);
        if x.is_invertible() {
            return Ok(IsoOutcome::Isomorphic(x));
        }
    }
    Ok(IsoOutcome::Inconclusive)
}

/// Burnside criterion: the unital algebra generated by the tuple spans the
/// full matrix algebra iff the module is irreducible over the closure.
pub fn is_irreducible(tuple: &MatrixTuple) -> bool {
    let m = tuple.dimension();
    if m == 0 {
        return true;
    }
    let order = tuple.order();
    let nn = m * m;

    // linear basis in echelon form: (pivot index, vector)
    let mut basis: Vec<(usize, Vec<CycloNum>)> = Vec::new();
    let mut insert = |mut v: Vec<CycloNum>, basis: &mut Vec<(usize, Vec<CycloNum>)>| -> bool {
        for (piv, row) in basis.iter() {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (t, e) in row.iter().enumerate() {
                    if !e.is_zero() {
                        v[t] = &v[t] - &(e * &f);
                    }
                }
            }
        }
        if let Some(piv) = v.iter().position(|e| !e.is_zero()) {
            let inv = v[piv].try_inv().unwrap();
            for e in v.iter_mut() {
                *e = &*e * &inv;
            }
            basis.push((piv, v));
            true
        } else {
            false
        }
    };

    let flatten = |mat: &Matrix| -> Vec<CycloNum> {
        let mut v = Vec::with_capacity(nn);
        for i in 0..m {
            for j in 0..m {
                v.push(mat.at(i, j).clone());
            }
        }
        v
    };

    let mut frontier: Vec<Matrix> = Vec::new();
    let id = Matrix::identity(order, m);
    if insert(flatten(&id), &mut basis) {
        frontier.push(id);
    }
    while let Some(e) = frontier.pop() {
        if basis.len() == nn {
            return true;
        }
        for g in tuple.matrices() {
            let prod = g.mul(&e).unwrap();
            if insert(flatten(&prod), &mut basis) {
                frontier.push(prod);
            }
        }
    }
    basis.len() == nn
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple_from_int(order: u64, mats: &[&[&[i64]]]) -> MatrixTuple {
        let ms: Vec<Matrix> = mats
            .iter()
            .map(|rows| Matrix::from_int_rows(order, rows))
            .collect();
        MatrixTuple::new(ms).unwrap()
    }

    #[test]
    fn c_lambda_r1_is_lambda_m1() {
        let t = tuple_from_int(1, &[&[&[2, 1], &[1, 1]]]);
        let lambda = CycloNum::from_int(3);
        let big = build_c_lambda(&t, &lambda).unwrap();
        assert_eq!(big.len(), 1);
        assert_eq!(*big.get(0), t.get(0).scale(&lambda));
    }

    #[test]
    fn c_lambda_identities_collapse() {
        // all M_i = I: every (M_j - 1) vanishes, so N_k is the identity
        // with a lambda I block at (k, k)
        let t = tuple_from_int(1, &[&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]]);
        let lambda = CycloNum::from_int(5);
        let big = build_c_lambda(&t, &lambda).unwrap();
        for k in 0..2 {
            let mut expected = Matrix::identity(1, 4);
            expected.set_block(2 * k, 2 * k, &Matrix::identity(1, 2).scale(&lambda));
            assert_eq!(*big.get(k), expected);
        }
    }

    #[test]
    fn c_lambda_hand_evaluated_pair() {
        // M1 = [[1,1],[0,1]], M2 = diag(2,3), lambda = -1
        let t = tuple_from_int(1, &[&[&[1, 1], &[0, 1]], &[&[2, 0], &[0, 3]]]);
        let lambda = CycloNum::from_int(-1);
        let big = build_c_lambda(&t, &lambda).unwrap();
        let n1 = Matrix::from_int_rows(
            1,
            &[
                &[-1, -1, -1, 0],
                &[0, -1, 0, -2],
                &[0, 0, 1, 0],
                &[0, 0, 0, 1],
            ],
        );
        let n2 = Matrix::from_int_rows(
            1,
            &[
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[0, 1, -2, 0],
                &[0, 0, 0, -3],
            ],
        );
        assert_eq!(*big.get(0), n1);
        assert_eq!(*big.get(1), n2);
    }

    #[test]
    fn no_unit_eigenvalue_means_zero_k_spaces() {
        let t = tuple_from_int(1, &[&[&[2, 0], &[0, 3]], &[&[5, 0], &[0, 7]]]);
        let (k_bases, _) = invariant_subspaces(&t, &CycloNum::from_int(2)).unwrap();
        assert!(k_bases.iter().all(|b| b.is_empty()));
    }

    #[test]
    fn identity_tuple_degenerates_for_lambda_one() {
        let t = tuple_from_int(1, &[&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]]);
        let res = middle_convolution(&t, &CycloNum::from_int(1)).unwrap();
        assert!(res.degenerate);
        assert_eq!(res.tuple.dimension(), 0);
        assert!(!res.warnings.is_empty(), "identity tuple violates hypotheses");
    }

    #[test]
    fn scalar_example_dimension_two() {
        // r = 2, V = Q, M1 = (2), M2 = (3), lambda = 5
        let t = tuple_from_int(1, &[&[&[2]], &[&[3]]]);
        let lambda = CycloNum::from_int(5);
        assert_eq!(convolution_dimension(&t, &lambda).unwrap(), 2);
        let res = middle_convolution(&t, &lambda).unwrap();
        assert_eq!(res.tuple.dimension(), 2);
        assert!(!res.degenerate);
        // K and L vanish, so the quotient matrices are the N_k themselves
        assert_eq!(res.tuple, res.big_tuple);
    }

    #[test]
    fn dimension_formula_rejects_lambda_one() {
        let t = tuple_from_int(1, &[&[&[2]], &[&[3]]]);
        assert!(matches!(
            convolution_dimension(&t, &CycloNum::from_int(1)),
            Err(Error::LambdaOne)
        ));
    }

    #[test]
    fn transfer_prediction_cases() {
        let lambda = CycloNum::from_int(5);
        // J(a,1), a not 1 or 1/lambda -> J(5a,1)
        let jd = JordanData::new(vec![(CycloNum::from_int(2), 1)]);
        let out = jordan_transfer_predict(&jd, &lambda, TransferPosition::Index);
        assert_eq!(out, JordanData::new(vec![(CycloNum::from_int(10), 1)]));
        // J(1,2) -> J(lambda,1)
        let jd = JordanData::new(vec![(CycloNum::from_int(1), 2)]);
        let out = jordan_transfer_predict(&jd, &lambda, TransferPosition::Index);
        assert_eq!(out, JordanData::new(vec![(CycloNum::from_int(5), 1)]));
        // J(1/lambda,1) -> J(1,2)
        let jd = JordanData::new(vec![(CycloNum::from_ratio(1, 5), 1)]);
        let out = jordan_transfer_predict(&jd, &lambda, TransferPosition::Index);
        assert_eq!(out, JordanData::new(vec![(CycloNum::from_int(1), 2)]));
        // at infinity the exceptional lengths flip: J(1,2) -> J(lambda,3)
        let jd = JordanData::new(vec![(CycloNum::from_int(1), 2)]);
        let out = jordan_transfer_predict(&jd, &lambda, TransferPosition::Infinity);
        assert_eq!(out, JordanData::new(vec![(CycloNum::from_int(5), 3)]));
    }

    #[test]
    fn isomorphism_finds_conjugation_witness() {
        let t = tuple_from_int(1, &[&[&[1, 1], &[0, 1]], &[&[2, 0], &[1, 3]]]);
        let g = Matrix::from_int_rows(1, &[&[1, 2], &[1, 3]]);
        let conj = t.conjugate(&g).unwrap();
        match module_isomorphic(&t, &conj, IsoConfig::default()).unwrap() {
            IsoOutcome::Isomorphic(x) => {
                // witness intertwines: X M_i = C_i X
                for i in 0..t.len() {
                    let lhs = x.mul(t.get(i)).unwrap();
                    let rhs = conj.get(i).mul(&x).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            other => panic!("expected isomorphism, got {other:?}"),
        }
    }

    #[test]
    fn different_jordan_data_not_isomorphic() {
        let a = tuple_from_int(1, &[&[&[2, 0], &[0, 3]]]);
        let b = tuple_from_int(1, &[&[&[2, 0], &[0, 2]]]);
        match module_isomorphic(&a, &b, IsoConfig::default()).unwrap() {
            IsoOutcome::Isomorphic(_) => panic!("must not be isomorphic"),
            IsoOutcome::NotIsomorphic | IsoOutcome::Inconclusive => {}
        }
    }

    #[test]
    fn irreducibility_basic_cases() {
        // any 1x1 tuple
        let t = tuple_from_int(1, &[&[&[5]]]);
        assert!(is_irreducible(&t));
        // commuting diagonal pair has common eigenvectors
        let t = tuple_from_int(1, &[&[&[2, 0], &[0, 3]], &[&[5, 0], &[0, 7]]]);
        assert!(!is_irreducible(&t));
        // rotations about distinct axes generate everything
        let t = tuple_from_int(
            1,
            &[&[&[0, -1], &[1, 0]], &[&[1, 1], &[0, 1]], &[&[1, 0], &[1, 1]]],
        );
        assert!(is_irreducible(&t));
    }

    #[test]
    fn hypothesis_warning_on_identity_slot() {
        // M2 = I: the common fixed space of {M2} is everything, and M1 has
        // eigenvectors there
        let t = tuple_from_int(1, &[&[&[2, 0], &[0, 3]], &[&[1, 0], &[0, 1]]]);
        let w = hypothesis_warnings(&t);
        assert!(w.iter().any(|w| w.index == 1));
    }

    #[test]
    fn clean_tuple_has_no_warnings() {
        let t = tuple_from_int(1, &[&[&[0, -1], &[1, 0]], &[&[1, 1], &[0, 1]]]);
        // neither matrix fixes a line of the other's fixed space nontrivially
        let w = hypothesis_warnings(&t);
        assert!(w.is_empty(), "unexpected warnings: {w:?}");
    }
}
