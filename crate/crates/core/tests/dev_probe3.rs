//! Debug the fingerprint collision flagged non-isomorphic.

use midconv::braid::*;
use midconv::convolution::{is_irreducible, module_isomorphic, IsoConfig, MatrixTuple};
use midconv::exact::matrix::Matrix;
use std::collections::BTreeMap;

fn tuple_from_int(order: u64, mats: &[&[&[i64]]]) -> MatrixTuple {
    let ms: Vec<Matrix> = mats
        .iter()
        .map(|rows| Matrix::from_int_rows(order, rows))
        .collect();
    MatrixTuple::new(ms).unwrap()
}

#[test]
fn find_collision() {
    let t = tuple_from_int(
        1,
        &[&[&[1, 1], &[0, 1]], &[&[1, 0], &[1, 1]], &[&[0, -1], &[1, 0]]],
    );
    let cfg = OrbitConfig {
        cap: 60,
        depth: 3,
        collision: CollisionPolicy::Trust,
    };
    // manual BFS replicating orbit_enumerate with Trust, recording collisions
    let words = GeneratorSet::Full.words(3).unwrap();
    let mut visited: BTreeMap<Fingerprint, MatrixTuple> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    visited.insert(fingerprint(&t, cfg.depth), t.clone());
    queue.push_back(t.clone());
    let mut checked = 0;
    while let Some(cur) = queue.pop_front() {
        for w in &words {
            let u = apply_braid(&cur, w).unwrap();
            let fp = fingerprint(&u, cfg.depth);
            match visited.get(&fp) {
                None => {
                    if visited.len() >= cfg.cap {
                        queue.clear();
                        break;
                    }
                    visited.insert(fp, u.clone());
                    queue.push_back(u);
                }
                Some(existing) => {
                    checked += 1;
                    let iso = module_isomorphic(existing, &u, IsoConfig::default()).unwrap();
                    if matches!(iso, midconv::convolution::IsoOutcome::NotIsomorphic) {
                        println!("COLLISION after {checked} checks");
                        println!("existing irreducible: {}", is_irreducible(existing));
                        println!("new irreducible: {}", is_irreducible(&u));
                        println!("existing = {existing:?}");
                        println!("new = {u:?}");
                        let fpe = fingerprint(existing, 6);
                        let fpu = fingerprint(&u, 6);
                        println!("depth-6 fp equal: {}", fpe == fpu);
                        panic!("found the pair");
                    }
                }
            }
        }
    }
    panic!("no bad collision found; checks = {checked}");
}
