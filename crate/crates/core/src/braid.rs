//! Artin braid group action on matrix tuples and orbit enumeration.
//!
//! The generator beta_i acts on the stored indices (i, i+1) by
//!
//!   (a_i, a_{i+1})  ->  (a_{i+1}, a_{i+1} a_i a_{i+1}^{-1});
//!
//! inverse letters apply the inverse substitution
//! (a_i, a_{i+1}) -> (a_i^{-1} a_{i+1} a_i, a_i). This is the Hurwitz move
//! with the conjugation pattern x y x^{-1}; it satisfies the braid
//! relations, fixes the tuple product M_r ... M_1 exactly, and is the
//! orientation under which the middle convolution is braid-equivariant
//! (the opposite orientation fails the equivariance check on random
//! irreducible tuples, which pins the convention).

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::convolution::{
    middle_convolution, module_isomorphic, IsoConfig, IsoOutcome, MatrixTuple,
};
use crate::error::{Error, Result};
use crate::exact::cyclo::CycloNum;

/// A braid word: signed generator indices applied left to right,
/// e.g. [1, -2, 1] = beta_1 beta_2^{-1} beta_1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidWord(pub Vec<i32>);

impl BraidWord {
    pub fn new(letters: Vec<i32>) -> BraidWord {
        BraidWord(letters)
    }

    pub fn identity() -> BraidWord {
        BraidWord(Vec::new())
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BraidWord(v)
    }

    /// Validate letters against a tuple length.
    pub fn check(&self, r: usize) -> Result<()> {
        for &l in &self.0 {
            if l == 0 || l.unsigned_abs() as usize >= r {
                return Err(Error::BraidIndexOutOfRange {
                    letter: l,
                    length: r,
                });
            }
        }
        Ok(())
    }

    /// Parse "1,-2,1" (or with whitespace) into a word.
    pub fn parse(text: &str) -> Result<BraidWord> {
        let mut letters = Vec::new();
        for (i, part) in text.split(',').enumerate() {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let l: i32 = part.parse().map_err(|_| Error::Parse {
                col: i + 1,
                msg: format!("bad braid letter {part:?}"),
            })?;
            letters.push(l);
        }
        Ok(BraidWord(letters))
    }
}

impl std::fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Apply a braid word letter by letter.
pub fn apply_braid(tuple: &MatrixTuple, word: &BraidWord) -> Result<MatrixTuple> {
    word.check(tuple.len())?;
    let mut mats: Vec<_> = tuple.matrices().to_vec();
    for &l in word.letters() {
        let i = (l.unsigned_abs() as usize) - 1; // 0-based position of index i
        let a = mats[i].clone();
        let b = mats[i + 1].clone();
        if l > 0 {
            mats[i] = b.clone();
            mats[i + 1] = b.mul(&a)?.mul(&b.inverse()?)?;
        } else {
            mats[i] = a.inverse()?.mul(&b)?.mul(&a)?;
            mats[i + 1] = a;
        }
    }
    MatrixTuple::new(mats)
}

/// Conjugation-invariant dedup key: the traces of all words in the tuple's
/// matrices of length <= depth, in index-lexicographic word order, entries
/// in canonical minimal-order form.
///
/// The list is deliberately NOT sorted: braid moves permute the slot
/// conjugacy classes, and sorting would merge distinct orbit elements that
/// differ by such a permutation (observed on depth-6 collisions of
/// non-isomorphic orbit members). Keeping word order makes the key exact
/// for slot-labeled tuples while staying a class function.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint(Vec<CycloNum>);

impl Fingerprint {
    pub fn traces(&self) -> &[CycloNum] {
        &self.0
    }
}

impl PartialOrd for Fingerprint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fingerprint {
    fn cmp(&self, other: &Self) -> Ordering {
        // entries are canonical, so the structural order is semantic
        let mut it = self.0.iter().zip(&other.0);
        loop {
            match it.next() {
                Some((a, b)) => match a.structural_cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
                None => return self.0.len().cmp(&other.0.len()),
            }
        }
    }
}

impl std::fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.render()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Fingerprint of a tuple at the given word depth (default 3, which for
/// r = 3 in SL2 subsumes the seven trace coordinates).
pub fn fingerprint(tuple: &MatrixTuple, depth: usize) -> Fingerprint {
    assert!(depth >= 1, "depth must be at least 1");
    let mut traces = Vec::new();
    let mut level: Vec<crate::exact::matrix::Matrix> = tuple.matrices().to_vec();
    for t in &level {
        traces.push(t.trace().canonical());
    }
    for _ in 1..depth {
        let mut next = Vec::with_capacity(level.len() * tuple.len());
        for w in &level {
            for g in tuple.matrices() {
                let p = w.mul(g).expect("square");
                traces.push(p.trace().canonical());
                next.push(p);
            }
        }
        level = next;
    }
    Fingerprint(traces)
}

/// The standard generating set {beta_1^2, beta_2^2, beta_2 beta_1^2
/// beta_2^{-1}} of the pure braid group P^3.
pub fn pure_braid_generators(r: usize) -> Result<Vec<BraidWord>> {
    if r != 3 {
        return Err(Error::UnsupportedBraidLength(r));
    }
    Ok(vec![
        BraidWord(vec![1, 1]),
        BraidWord(vec![2, 2]),
        BraidWord(vec![2, 1, 1, -2]),
    ])
}

/// Which braid subgroup drives an orbit enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorSet {
    /// The full braid group B_r.
    Full,
    /// The pure braid group P^3 (r = 3 only).
    Pure,
    /// Explicit words (inverses are added automatically).
    Custom(Vec<BraidWord>),
}

impl GeneratorSet {
    pub fn label(&self) -> &'static str {
        match self {
            GeneratorSet::Full => "full_B3",
            GeneratorSet::Pure => "pure_P3",
            GeneratorSet::Custom(_) => "custom",
        }
    }

    /// The word list including inverses, deduplicated and sorted.
    pub fn words(&self, r: usize) -> Result<Vec<BraidWord>> {
        let base: Vec<BraidWord> = match self {
            GeneratorSet::Full => (1..r as i32).map(|i| BraidWord(vec![i])).collect(),
            GeneratorSet::Pure => pure_braid_generators(r)?,
            GeneratorSet::Custom(words) => words.clone(),
        };
        let mut all = Vec::with_capacity(base.len() * 2);
        for w in base {
            let inv = w.inverse();
            if inv != w && !all.contains(&inv) {
                all.push(inv);
            }
            if !all.contains(&w) {
                all.push(w);
            }
        }
        all.sort();
        Ok(all)
    }
}

/// What to do when two distinct tuples share a fingerprint.
#[derive(Clone, Copy, Debug)]
pub enum CollisionPolicy {
    /// Trust the fingerprint.
    Trust,
    /// Cross-check with the intertwiner search and escalate the depth on a
    /// certified non-isomorphic collision.
    Escalate { max_depth: usize },
}

#[derive(Clone, Debug)]
pub struct OrbitConfig {
    pub cap: usize,
    pub depth: usize,
    pub collision: CollisionPolicy,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            cap: 100_000,
            depth: 3,
            collision: CollisionPolicy::Escalate { max_depth: 6 },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitReport {
    pub generator_set: String,
    /// Sorted fingerprints of the orbit representatives.
    pub representatives: Vec<Fingerprint>,
    pub size: usize,
    pub finite: bool,
    pub cap_hit: bool,
    /// The fingerprint depth actually used (after any escalation).
    pub depth: usize,
}

pub struct OrbitEnumeration {
    pub report: OrbitReport,
    /// One representative tuple per fingerprint, in report order.
    pub members: Vec<MatrixTuple>,
}

/// Breadth-first closure of a tuple under a braid generator set,
/// deduplicating by fingerprint.
pub fn orbit_enumerate(
    tuple: &MatrixTuple,
    generators: &GeneratorSet,
    cfg: &OrbitConfig,
) -> Result<OrbitEnumeration> {
    let words = generators.words(tuple.len())?;
    let mut depth = cfg.depth;
    'depth: loop {
        let mut visited: BTreeMap<Fingerprint, MatrixTuple> = BTreeMap::new();
        let mut queue: VecDeque<MatrixTuple> = VecDeque::new();
        visited.insert(fingerprint(tuple, depth), tuple.clone());
        queue.push_back(tuple.clone());
        let mut cap_hit = false;
        while let Some(t) = queue.pop_front() {
            for w in &words {
                let u = apply_braid(&t, w)?;
                let fp = fingerprint(&u, depth);
                match visited.get(&fp) {
                    None => {
                        if visited.len() >= cfg.cap {
                            cap_hit = true;
                            queue.clear();
                            break;
                        }
                        visited.insert(fp, u.clone());
                        queue.push_back(u);
                    }
                    Some(existing) => {
                        if let CollisionPolicy::Escalate { max_depth } = cfg.collision {
                            if let IsoOutcome::NotIsomorphic =
                                module_isomorphic(existing, &u, IsoConfig::default())?
                            {
                                if depth >= max_depth {
                                    return Err(Error::Consistency(format!(
                                        "fingerprint collision between non-isomorphic tuples persists at depth {depth}"
                                    )));
                                }
                                depth += 1;
                                continue 'depth;
                            }
                        }
                    }
                }
            }
            if cap_hit {
                break;
            }
        }
        let size = visited.len();
        let (fps, members): (Vec<Fingerprint>, Vec<MatrixTuple>) = visited.into_iter().unzip();
        return Ok(OrbitEnumeration {
            report: OrbitReport {
                generator_set: generators.label().to_string(),
                representatives: fps,
                size,
                finite: !cap_hit,
                cap_hit,
                depth,
            },
            members,
        });
    }
}

/// Theorem-level equivariance: MC_lambda(beta(M)) and beta(MC_lambda(M))
/// agree up to simultaneous conjugation.
pub fn equivariance_check(
    tuple: &MatrixTuple,
    lambda: &CycloNum,
    word: &BraidWord,
    cfg: IsoConfig,
) -> Result<IsoOutcome> {
    let lhs = middle_convolution(&apply_braid(tuple, word)?, lambda)?.tuple;
    let rhs = apply_braid(&middle_convolution(tuple, lambda)?.tuple, word)?;
    module_isomorphic(&lhs, &rhs, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::Matrix;

    fn tuple_from_int(order: u64, mats: &[&[&[i64]]]) -> MatrixTuple {
        let ms: Vec<Matrix> = mats
            .iter()
            .map(|rows| Matrix::from_int_rows(order, rows))
            .collect();
        MatrixTuple::new(ms).unwrap()
    }

    fn sl2_test_triple() -> MatrixTuple {
        tuple_from_int(
            1,
            &[&[&[1, 1], &[0, 1]], &[&[1, 0], &[1, 1]], &[&[0, -1], &[1, 0]]],
        )
    }

    #[test]
    fn braid_fixes_identity_tuple() {
        let t = tuple_from_int(1, &[&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]]);
        let u = apply_braid(&t, &BraidWord(vec![1])).unwrap();
        assert_eq!(u, t);
    }

    #[test]
    fn braid_word_inverse_cancels() {
        let t = sl2_test_triple();
        for w in [vec![1, -1], vec![2, -2], vec![-1, 1]] {
            let u = apply_braid(&t, &BraidWord(w)).unwrap();
            assert_eq!(u, t);
        }
    }

    #[test]
    fn braid_relation_holds() {
        let t = sl2_test_triple();
        let lhs = apply_braid(&t, &BraidWord(vec![1, 2, 1])).unwrap();
        let rhs = apply_braid(&t, &BraidWord(vec![2, 1, 2])).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn braid_preserves_tuple_product() {
        let t = sl2_test_triple();
        let p = t.product_reversed();
        for w in [vec![1], vec![2], vec![-1], vec![1, 2, -1, 2]] {
            let u = apply_braid(&t, &BraidWord(w)).unwrap();
            assert_eq!(
                u.product_reversed(),
                p,
                "product M_r ... M_1 must be fixed"
            );
        }
    }

    #[test]
    fn beta1_hand_evaluated() {
        // beta_1 on (M3, M2, M1) with M1 = [[1,1],[0,1]], M2 = [[1,0],[1,1]],
        // M3 = I: index 1 becomes M2 and index 2 becomes
        // M2 M1 M2^{-1} = [[0,1],[-1,2]].
        let t = tuple_from_int(
            1,
            &[&[&[1, 1], &[0, 1]], &[&[1, 0], &[1, 1]], &[&[1, 0], &[0, 1]]],
        );
        let u = apply_braid(&t, &BraidWord(vec![1])).unwrap();
        assert_eq!(*u.get(0), Matrix::from_int_rows(1, &[&[1, 0], &[1, 1]]));
        assert_eq!(*u.get(1), Matrix::from_int_rows(1, &[&[0, 1], &[-1, 2]]));
        assert_eq!(*u.get(2), Matrix::from_int_rows(1, &[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn fingerprint_is_conjugation_invariant() {
        let t = sl2_test_triple();
        let g = Matrix::from_int_rows(1, &[&[2, 1], &[1, 1]]);
        let conj = t.conjugate(&g).unwrap();
        assert_eq!(fingerprint(&t, 3), fingerprint(&conj, 3));
    }

    #[test]
    fn central_tuple_orbit_is_singleton() {
        let t = tuple_from_int(
            1,
            &[
                &[&[-1, 0], &[0, -1]],
                &[&[-1, 0], &[0, -1]],
                &[&[-1, 0], &[0, -1]],
            ],
        );
        let out = orbit_enumerate(&t, &GeneratorSet::Full, &OrbitConfig::default()).unwrap();
        assert_eq!(out.report.size, 1);
        assert!(out.report.finite);
    }

    #[test]
    fn pure_generators_fixed_list() {
        let gens = pure_braid_generators(3).unwrap();
        assert_eq!(
            gens,
            vec![
                BraidWord(vec![1, 1]),
                BraidWord(vec![2, 2]),
                BraidWord(vec![2, 1, 1, -2]),
            ]
        );
        assert!(pure_braid_generators(4).is_err());
    }

    #[test]
    fn pure_braids_fix_conjugacy_classes() {
        let t = sl2_test_triple();
        for w in pure_braid_generators(3).unwrap() {
            let u = apply_braid(&t, &w).unwrap();
            // traces of the individual entries are preserved slot by slot
            for k in 0..3 {
                assert_eq!(u.get(k).trace(), t.get(k).trace(), "word {w}");
            }
        }
    }

    #[test]
    fn orbit_generator_order_independent() {
        let t = sl2_test_triple();
        let cfg = OrbitConfig {
            cap: 60,
            ..OrbitConfig::default()
        };
        let a = orbit_enumerate(&t, &GeneratorSet::Full, &cfg).unwrap();
        let shuffled = GeneratorSet::Custom(vec![BraidWord(vec![2]), BraidWord(vec![1])]);
        let b = orbit_enumerate(&t, &shuffled, &cfg).unwrap();
        assert_eq!(a.report.representatives, b.report.representatives);
        assert_eq!(a.report.cap_hit, b.report.cap_hit);
    }

    #[test]
    fn braid_word_parsing() {
        let w = BraidWord::parse("1,-2, 1").unwrap();
        assert_eq!(w, BraidWord(vec![1, -2, 1]));
        assert!(BraidWord::parse("1,x").is_err());
        assert!(BraidWord(vec![3]).check(3).is_err());
        assert!(BraidWord(vec![0]).check(3).is_err());
    }
}
