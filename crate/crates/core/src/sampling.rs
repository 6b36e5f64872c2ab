//! Seeded random generators for matrices, tuples and triples.
//!
//! Everything is driven by an explicit ChaCha seed so test corpora and
//! reports are reproducible run to run.

use num::{BigInt, BigRational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convolution::{hypothesis_warnings, is_irreducible, MatrixTuple};
use crate::exact::cyclo::{euler_phi, CycloNum};
use crate::exact::jordan::{jordan_matrix, JordanData};
use crate::exact::matrix::Matrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random element with small integer coordinates in the power basis.
pub fn random_cyclo(rng: &mut SeededRng, order: u64, height: i64) -> CycloNum {
    let phi = euler_phi(order) as usize;
    let poly: Vec<BigRational> = (0..phi)
        .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-height..=height))))
        .collect();
    CycloNum::from_poly(order, &poly)
}

pub fn random_nonzero_cyclo(rng: &mut SeededRng, order: u64, height: i64) -> CycloNum {
    loop {
        let v = random_cyclo(rng, order, height);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_matrix(rng: &mut SeededRng, order: u64, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(order, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            *m.at_mut(i, j) = random_cyclo(rng, order, 2);
        }
    }
    m
}

pub fn random_invertible(rng: &mut SeededRng, order: u64, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, order, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random tuple of invertible matrices.
pub fn random_tuple(rng: &mut SeededRng, order: u64, r: usize, dim: usize) -> MatrixTuple {
    let mats: Vec<Matrix> = (0..r).map(|_| random_invertible(rng, order, dim)).collect();
    MatrixTuple::new(mats).expect("entries are invertible")
}

/// Random tuple passing the theorem hypothesis check.
pub fn random_hypothesis_tuple(
    rng: &mut SeededRng,
    order: u64,
    r: usize,
    dim: usize,
) -> MatrixTuple {
    loop {
        let t = random_tuple(rng, order, r, dim);
        if hypothesis_warnings(&t).is_empty() {
            return t;
        }
    }
}

/// Random irreducible tuple passing the hypothesis check.
pub fn random_irreducible_tuple(
    rng: &mut SeededRng,
    order: u64,
    r: usize,
    dim: usize,
) -> MatrixTuple {
    loop {
        let t = random_tuple(rng, order, r, dim);
        if is_irreducible(&t) && hypothesis_warnings(&t).is_empty() {
            return t;
        }
    }
}

/// Random SL2 matrix: the last entry is solved from det = 1.
pub fn random_sl2(rng: &mut SeededRng, order: u64) -> Matrix {
    loop {
        let a = random_cyclo(rng, order, 2);
        let b = random_cyclo(rng, order, 2);
        let c = random_cyclo(rng, order, 2);
        if a.is_zero() {
            continue;
        }
        // d = (1 + b c) / a
        let bc = &b * &c;
        let d = (&CycloNum::one(order) + &bc).try_div(&a).unwrap();
        let m = Matrix::from_rows(vec![vec![a, b], vec![c, d]])
            .unwrap()
            .promote_order(order)
            .unwrap();
        return m;
    }
}

pub fn random_sl2_triple(rng: &mut SeededRng, order: u64) -> MatrixTuple {
    let mats = vec![
        random_sl2(rng, order),
        random_sl2(rng, order),
        random_sl2(rng, order),
    ];
    MatrixTuple::new(mats).expect("SL2 matrices are invertible")
}

/// A matrix with the given planted Jordan structure, hidden by a random
/// conjugation.
pub fn conjugated_jordan_matrix(rng: &mut SeededRng, order: u64, data: &JordanData) -> Matrix {
    let j = jordan_matrix(order, data);
    let g = random_invertible(rng, order, data.total_size());
    g.mul(&j).unwrap().mul(&g.inverse().unwrap()).unwrap()
}
