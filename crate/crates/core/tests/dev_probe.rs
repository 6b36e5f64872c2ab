//! Temporary convention probes; deleted once results are frozen.

use midconv::braid::{apply_braid, equivariance_check, BraidWord};
use midconv::convolution::{
    build_c_lambda, convolution_dimension, hypothesis_warnings, invariant_subspaces,
    jordan_transfer_check, middle_convolution, module_isomorphic, IsoConfig, IsoOutcome,
    MatrixTuple, TransferPosition,
};
use midconv::exact::jordan::{jordan_data, roots_of_unity_eigenvalues, default_scalars};
use midconv::exact::matrix::Matrix;
use midconv::exact::cyclo::CycloNum;
use midconv::sampling::*;

fn span_eq(a: &[Vec<CycloNum>], b: &[Vec<CycloNum>], n: usize, order: u64) -> bool {
    if a.is_empty() && b.is_empty() {
        return true;
    }
    let rows_a = if a.is_empty() {
        Matrix::zeros(order, 1, n)
    } else {
        Matrix::from_rows(a.to_vec()).unwrap()
    };
    let rows_b = if b.is_empty() {
        Matrix::zeros(order, 1, n)
    } else {
        Matrix::from_rows(b.to_vec()).unwrap()
    };
    let ra = rows_a.rank();
    let rb = rows_b.rank();
    let combined = rows_a.vstack(&rows_b).unwrap().rank();
    ra == rb && combined == ra
}

#[test]
fn probe_l_product_order() {
    let mut rng = rng_from_seed(1);
    let mut asc_ok = 0;
    let mut desc_ok = 0;
    let mut total = 0;
    for _ in 0..12 {
        let r = rng.clone().gen_range(2..=3);
        let t = random_hypothesis_tuple(&mut rng, 4, r, 2);
        let lambda = CycloNum::from_int(2);
        let big = build_c_lambda(&t, &lambda).unwrap();
        let (_kb, l_basis) = invariant_subspaces(&t, &lambda).unwrap();
        let n = big.dimension();
        let ord = big.order();
        let id = Matrix::identity(ord, n);
        let asc = big.product().sub(&id).unwrap().rank_and_kernel().1;
        let desc = big.product_reversed().sub(&id).unwrap().rank_and_kernel().1;
        total += 1;
        if span_eq(&l_basis, &asc, n, ord) {
            asc_ok += 1;
        }
        if span_eq(&l_basis, &desc, n, ord) {
            desc_ok += 1;
        }
    }
    panic!("L-product probe: total={total} asc_ok={asc_ok} desc_ok={desc_ok}");
}

use rand::Rng;

fn b3_reflection_triple() -> MatrixTuple {
    let r1 = Matrix::from_int_rows(1, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let r2 = Matrix::from_int_rows(1, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let r3 = Matrix::from_int_rows(1, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
    MatrixTuple::new(vec![r1, r2, r3]).unwrap()
}

#[test]
fn probe_infinity_orientation() {
    let t = b3_reflection_triple();
    println!("warnings: {:?}", hypothesis_warnings(&t));
    let lambda = CycloNum::zeta(4);
    let res = middle_convolution(&t, &lambda).unwrap();
    println!("MC dim = {} (formula {:?})", res.tuple.dimension(), res.formula_dim);

    let minf_asc = t.product().inverse().unwrap();
    let minf_desc = t.product_reversed().inverse().unwrap();
    let ninf_asc = res.tuple.product().inverse().unwrap();
    let ninf_desc = res.tuple.product_reversed().inverse().unwrap();

    for (mname, minf) in [("Masc", &minf_asc), ("Mdesc", &minf_desc)] {
        let spec = roots_of_unity_eigenvalues(minf, 16, &default_scalars(), 1000).unwrap();
        println!("{mname} spectrum resolved={} {:?}", spec.resolved, spec.eigenvalues);
        if !spec.resolved {
            continue;
        }
        let cands: Vec<CycloNum> = spec.eigenvalues.iter().map(|(e, _)| e.clone()).collect();
        let input = jordan_data(minf, &cands).unwrap();
        for (nname, ninf) in [("Nasc", &ninf_asc), ("Ndesc", &ninf_desc)] {
            let check =
                jordan_transfer_check(&input, ninf, &res.lambda, TransferPosition::Infinity);
            println!("  {mname} vs {nname}: {:?}", check.map(|c| (c.ok, c.predicted, c.actual)));
        }
    }

    // also probe finite positions for sanity
    for k in 0..3 {
        let spec = roots_of_unity_eigenvalues(t.get(k), 16, &default_scalars(), 1000).unwrap();
        let cands: Vec<CycloNum> = spec.eigenvalues.iter().map(|(e, _)| e.clone()).collect();
        let input = jordan_data(t.get(k), &cands).unwrap();
        let check = jordan_transfer_check(&input, res.tuple.get(k), &res.lambda, TransferPosition::Index).unwrap();
        println!("position {}: ok={} pred={:?} act={:?}", k + 1, check.ok, check.predicted, check.actual);
    }

    // what are the actual eigenvalues of the quotient products?
    for (nname, ninf) in [("Nasc_inv", &ninf_asc), ("Ndesc_inv", &ninf_desc)] {
        let spec = roots_of_unity_eigenvalues(ninf, 48, &default_scalars(), 1000).unwrap();
        println!("{nname}: resolved={} {:?}", spec.resolved, spec.eigenvalues);
    }
    // and of the products themselves (not inverted)
    let pasc = res.tuple.product();
    let pdesc = res.tuple.product_reversed();
    for (nname, p) in [("Nasc_prod", &pasc), ("Ndesc_prod", &pdesc)] {
        let spec = roots_of_unity_eigenvalues(p, 48, &default_scalars(), 1000).unwrap();
        println!("{nname}: resolved={} {:?}", spec.resolved, spec.eigenvalues);
    }
    // input product spectra for reference
    let spec = roots_of_unity_eigenvalues(&t.product(), 48, &default_scalars(), 1000).unwrap();
    println!("input asc prod: {:?}", spec.eigenvalues);
    println!("lambda = {:?}", res.lambda);
    panic!("see output");
}

#[test]
fn probe_infinity_orientation_asymmetric() {
    // r1 = diag(zeta_5,1,1), r2 = swap(1,2), r3 = swap(2,3): product spectra
    // are primitive 15th roots, not closed under inversion once scaled by
    // lambda = -1, so the orientation is visible.
    let z5 = CycloNum::zeta(5);
    let one = CycloNum::one(5);
    let zero = CycloNum::zero(5);
    let r1 = Matrix::from_rows(vec![
        vec![z5.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), one.clone(), zero.clone()],
        vec![zero.clone(), zero.clone(), one.clone()],
    ])
    .unwrap();
    let r2 = Matrix::from_int_rows(5, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let r3 = Matrix::from_int_rows(5, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
    let t = MatrixTuple::new(vec![r1, r2, r3]).unwrap();
    println!("warnings: {:?}", hypothesis_warnings(&t));
    let lambda = CycloNum::from_int(-1);
    let res = middle_convolution(&t, &lambda).unwrap();
    println!("MC dim = {} formula = {:?}", res.tuple.dimension(), res.formula_dim);

    let scan = |name: &str, m: &Matrix| {
        let spec = roots_of_unity_eigenvalues(m, 30, &default_scalars(), 1000).unwrap();
        println!("{name}: resolved={} {:?}", spec.resolved, spec.eigenvalues);
        spec
    };
    let pasc = t.product();
    let pdesc = t.product_reversed();
    scan("P_asc", &pasc);
    scan("P_asc_inv", &pasc.inverse().unwrap());
    scan("P_desc", &pdesc);
    scan("P_desc_inv", &pdesc.inverse().unwrap());
    scan("Nt_asc", &res.tuple.product());
    scan("Nt_asc_inv", &res.tuple.product().inverse().unwrap());
    scan("Nt_desc", &res.tuple.product_reversed());
    scan(
        "Nt_desc_inv",
        &res.tuple.product_reversed().inverse().unwrap(),
    );
    println!("lambda = -1; prediction = (input spectrum) * lambda, free J(lambda,1)");
    panic!("see output");
}

#[test]
fn probe_equivariance() {
    let mut rng = rng_from_seed(5);
    let mut results = Vec::new();
    for _ in 0..6 {
        let t = random_irreducible_tuple(&mut rng, 4, 3, 2);
        let lambda = CycloNum::from_int(-1);
        for w in [vec![1], vec![2, -1], vec![1, 1, 2]] {
            let out = equivariance_check(&t, &lambda, &BraidWord::new(w.clone()), IsoConfig::default()).unwrap();
            results.push((w, out.is_isomorphic()));
        }
    }
    panic!("equivariance: {results:?}");
}

#[test]
fn probe_multiplicativity() {
    let mut rng = rng_from_seed(9);
    let mut oks = 0;
    let mut total = 0;
    for _ in 0..6 {
        let t = random_irreducible_tuple(&mut rng, 4, 3, 2);
        let l1 = CycloNum::from_int(2);
        let l2 = CycloNum::from_int(-3);
        let first = middle_convolution(&t, &l1).unwrap();
        let second = middle_convolution(&first.tuple, &l2).unwrap();
        let combined = middle_convolution(&t, &(&l1 * &l2)).unwrap();
        total += 1;
        println!(
            "dims: first={} second={} combined={}",
            first.tuple.dimension(),
            second.tuple.dimension(),
            combined.tuple.dimension()
        );
        let iso = module_isomorphic(&second.tuple, &combined.tuple, IsoConfig::default()).unwrap();
        if iso.is_isomorphic() {
            oks += 1;
        }
    }
    panic!("multiplicativity: {oks}/{total}");
}

#[test]
fn probe_dimension_formula() {
    let mut rng = rng_from_seed(13);
    let mut oks = 0;
    let mut desc_oks = 0;
    let mut total = 0;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=3usize);
        let t = random_hypothesis_tuple(&mut rng, 4, 3, dim);
        let lambda = random_nonzero_cyclo(&mut rng, 4, 1);
        if lambda.is_one() || lambda.is_zero() {
            continue;
        }
        let res = middle_convolution(&t, &lambda).unwrap();
        total += 1;
        if res.formula_dim == Some(res.tuple.dimension() as i64) {
            oks += 1;
        } else {
            println!("MISMATCH dim={} formula={:?}", res.tuple.dimension(), res.formula_dim);
        }
        // formula with the reversed product
        let ord = res.big_tuple.order();
        let id = Matrix::identity(ord, dim);
        let mut sum = 0i64;
        for k in 0..3 {
            sum += t.promote_order(ord).unwrap().get(k).sub(&id).unwrap().rank() as i64;
        }
        let lam = res.lambda.clone();
        let desc = t
            .promote_order(ord)
            .unwrap()
            .product_reversed()
            .scale(&lam)
            .sub(&id)
            .unwrap()
            .rank() as i64;
        let desc_formula = sum - (dim as i64 - desc);
        if desc_formula == res.tuple.dimension() as i64 {
            desc_oks += 1;
        }
    }
    panic!("dimension formula: asc {oks}/{total}, desc {desc_oks}/{total}");
}

#[test]
fn probe_braid_product_conventions() {
    let mut rng = rng_from_seed(21);
    let t = random_tuple(&mut rng, 4, 3, 2);
    let asc = t.product();
    let desc = t.product_reversed();
    let mut asc_inv = true;
    let mut desc_inv = true;
    for w in [vec![1], vec![2], vec![-1], vec![-2]] {
        let u = apply_braid(&t, &BraidWord::new(w)).unwrap();
        if u.product() != asc {
            asc_inv = false;
        }
        if u.product_reversed() != desc {
            desc_inv = false;
        }
    }
    panic!("braid product invariance: asc={asc_inv} desc={desc_inv}");
}
