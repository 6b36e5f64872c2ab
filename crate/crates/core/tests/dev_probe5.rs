//! Find the normalization of the Klein generators with (ST)^3 = 1.

use midconv::exact::cyclo::CycloNum;
use midconv::exact::matrix::Matrix;

fn z(k: u64) -> CycloNum {
    CycloNum::zeta_pow(7, k)
}

fn diag(a: u64, b: u64, c: u64) -> Matrix {
    let zero = CycloNum::zero(7);
    Matrix::from_rows(vec![
        vec![z(a), zero.clone(), zero.clone()],
        vec![zero.clone(), z(b), zero.clone()],
        vec![zero.clone(), zero.clone(), z(c)],
    ])
    .unwrap()
}

fn circulant_t(sign: i64) -> Matrix {
    let s = &(&(&z(1) + &z(2)) + &z(4)) - &(&(&z(3) + &z(5)) + &z(6));
    let a1 = &z(1) - &z(6);
    let a2 = &z(2) - &z(5);
    let a3 = &z(4) - &z(3);
    let c = s
        .try_div(&CycloNum::from_int(7 * sign))
        .unwrap();
    Matrix::from_rows(vec![
        vec![&a1 * &c, &a2 * &c, &a3 * &c],
        vec![&a2 * &c, &a3 * &c, &a1 * &c],
        vec![&a3 * &c, &a1 * &c, &a2 * &c],
    ])
    .unwrap()
}

#[test]
fn probe_normalizations() {
    let perms: [(u64, u64, u64); 6] = [
        (1, 2, 4),
        (1, 4, 2),
        (2, 1, 4),
        (2, 4, 1),
        (4, 1, 2),
        (4, 2, 1),
    ];
    let mut lines = Vec::new();
    for sign in [1i64, -1] {
        let t = circulant_t(sign);
        for (a, b, c) in perms {
            let s = diag(a, b, c);
            let st = s.mul(&t).unwrap();
            let st3 = st.mul(&st).unwrap().mul(&st).unwrap();
            if st3.is_identity() {
                lines.push(format!("sign={sign} diag=({a},{b},{c}): (ST)^3 = I"));
            }
        }
    }
    panic!("{}", lines.join("\n"));
}
