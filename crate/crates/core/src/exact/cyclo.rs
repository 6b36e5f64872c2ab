//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! Elements are represented in the power basis 1, z, ..., z^(phi(n)-1) of
//! Q[z]/(Phi_n(z)) with big-rational coefficients, fully reduced mod the
//! n-th cyclotomic polynomial. Reduction mod Phi_n (not mod z^n - 1) makes
//! the representation unique, so same-order equality is coefficient-wise.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on field orders reached by auto-promotion.
pub const DEFAULT_ORDER_CAP: u64 = 1000;

/// Safety net for operator-based arithmetic, which cannot surface a Result.
/// Explicit promotion paths enforce the configured cap before this is hit.
const HARD_PROMOTION_CAP: u64 = 1_000_000;

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Coefficients of Phi_d for every divisor d of n, ascending-degree, monic.
fn cyclotomic_polys(n: u64) -> BTreeMap<u64, Vec<BigInt>> {
    let mut polys: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for d in divisors(n) {
        // x^d - 1
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = -BigInt::one();
        num[d as usize] = BigInt::one();
        for e in divisors(d) {
            if e == d {
                continue;
            }
            num = poly_div_exact_int(&num, &polys[&e]);
        }
        polys.insert(d, num);
    }
    polys
}

/// Exact division of integer polynomials (divisor monic), ascending coeffs.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for j in 0..=dd {
                let t = &den[j] * &c;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    quot
}

/// Cached per-order data: Phi_n and the reduction table of powers of z.
struct CycloField {
    phi: usize,
    /// Phi_n over Q, ascending, monic; used by the extended-Euclid inverse.
    min_poly_rat: Vec<BigRational>,
    /// z^k mod Phi_n for k in 0..table_len, integer coefficients.
    power_table: Vec<Vec<BigInt>>,
}

impl CycloField {
    fn build(order: u64) -> CycloField {
        let phi = euler_phi(order) as usize;
        let polys = cyclotomic_polys(order);
        let min_poly = polys[&order].clone();
        assert_eq!(min_poly.len(), phi + 1);
        let table_len = (order as usize).max(2 * phi) + 1;
        let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(table_len);
        for k in 0..table_len {
            if k < phi {
                let mut row = vec![BigInt::zero(); phi];
                row[k] = BigInt::one();
                table.push(row);
            } else {
                // z^k = z * z^(k-1); fold z^phi = -(a_0 + ... + a_{phi-1} z^{phi-1})
                let prev = &table[k - 1];
                let lead = prev[phi - 1].clone();
                let mut row = vec![BigInt::zero(); phi];
                for j in 1..phi {
                    row[j] = prev[j - 1].clone();
                }
                if !lead.is_zero() {
                    for j in 0..phi {
                        let t = &min_poly[j] * &lead;
                        row[j] -= t;
                    }
                }
                table.push(row);
            }
        }
        let min_poly_rat = min_poly
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        CycloField {
            phi,
            min_poly_rat,
            power_table: table,
        }
    }
}

fn field(order: u64) -> Arc<CycloField> {
    static REGISTRY: OnceLock<Mutex<BTreeMap<u64, Arc<CycloField>>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut map = reg.lock().unwrap();
    map.entry(order)
        .or_insert_with(|| Arc::new(CycloField::build(order)))
        .clone()
}

/// An element of Q(zeta_n), canonical mod Phi_n.
#[derive(Clone)]
pub struct CycloNum {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CycloNum {
    pub fn zero(order: u64) -> CycloNum {
        let phi = euler_phi(order) as usize;
        CycloNum {
            order,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn one(order: u64) -> CycloNum {
        let mut v = CycloNum::zero(order);
        v.coeffs[0] = BigRational::one();
        v
    }

    pub fn from_rational(q: BigRational) -> CycloNum {
        CycloNum {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(k: i64) -> CycloNum {
        CycloNum::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_ratio(num: i64, den: i64) -> CycloNum {
        CycloNum::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The primitive n-th root of unity zeta_n.
    pub fn zeta(order: u64) -> CycloNum {
        CycloNum::zeta_pow(order, 1)
    }

    /// zeta_n^k, reduced.
    pub fn zeta_pow(order: u64, k: u64) -> CycloNum {
        let f = field(order);
        let k = (k % order) as usize;
        let row = &f.power_table[k];
        CycloNum {
            order,
            coeffs: row
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// Reduce an arbitrary-degree polynomial in zeta_n to canonical form.
    pub fn from_poly(order: u64, poly: &[BigRational]) -> CycloNum {
        let f = field(order);
        let mut out = vec![BigRational::zero(); f.phi];
        for (k, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k % (f.power_table.len().min(usize::MAX));
            let row = &f.power_table[k];
            for j in 0..f.phi {
                if !row[j].is_zero() {
                    out[j] += c * BigRational::from_integer(row[j].clone());
                }
            }
        }
        CycloNum { order, coeffs: out }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Some(q) iff the value lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Value-preserving embedding zeta_m -> zeta_n^(n/m); m must divide n.
    pub fn promote(&self, target: u64) -> Result<CycloNum> {
        if self.order == target {
            return Ok(self.clone());
        }
        if target % self.order != 0 {
            return Err(Error::NonDivisibleOrders {
                from: self.order,
                to: target,
            });
        }
        let stride = (target / self.order) as usize;
        let f = field(target);
        let mut out = vec![BigRational::zero(); f.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.power_table[k * stride];
            for j in 0..f.phi {
                if !row[j].is_zero() {
                    out[j] += c * BigRational::from_integer(row[j].clone());
                }
            }
        }
        Ok(CycloNum {
            order: target,
            coeffs: out,
        })
    }

    /// Promote both values into Q(zeta_lcm), enforcing `cap`.
    pub fn promote_pair(a: &CycloNum, b: &CycloNum, cap: u64) -> Result<(CycloNum, CycloNum)> {
        let target = a.order.lcm(&b.order);
        if target > cap {
            return Err(Error::OrderCapExceeded {
                requested: target,
                cap,
            });
        }
        Ok((a.promote(target)?, b.promote(target)?))
    }

    fn promoted_with(&self, other: &CycloNum) -> (CycloNum, CycloNum) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let target = self.order.lcm(&other.order);
        assert!(
            target <= HARD_PROMOTION_CAP,
            "field order promotion to {target} exceeds the hard cap"
        );
        (self.promote(target).unwrap(), other.promote(target).unwrap())
    }

    pub fn try_add(&self, other: &CycloNum, cap: u64) -> Result<CycloNum> {
        let (a, b) = CycloNum::promote_pair(self, other, cap)?;
        Ok(&a + &b)
    }

    pub fn try_mul(&self, other: &CycloNum, cap: u64) -> Result<CycloNum> {
        let (a, b) = CycloNum::promote_pair(self, other, cap)?;
        Ok(&a * &b)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn try_inv(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            let mut out = CycloNum::zero(self.order);
            out.coeffs[0] = BigRational::one() / q;
            return Ok(out);
        }
        let f = field(self.order);
        let (g, u, _) = poly_ext_gcd(&self.coeffs, &f.min_poly_rat);
        // g is a nonzero constant since Phi_n is irreducible over Q
        debug_assert!(g.len() == 1 && !g[0].is_zero());
        let ginv = BigRational::one() / g[0].clone();
        let scaled: Vec<BigRational> = u.iter().map(|c| c * &ginv).collect();
        Ok(CycloNum::from_poly(self.order, &scaled))
    }

    pub fn try_div(&self, other: &CycloNum) -> Result<CycloNum> {
        let inv = other.try_inv()?;
        Ok(self * &inv)
    }

    /// Integer power; negative exponents invert first (errors on zero base).
    pub fn try_pow(&self, exp: i64) -> Result<CycloNum> {
        if exp < 0 {
            return Ok(self.try_inv()?.pow_u64(exp.unsigned_abs()));
        }
        Ok(self.pow_u64(exp as u64))
    }

    fn pow_u64(&self, mut exp: u64) -> CycloNum {
        let mut base = self.clone();
        let mut acc = CycloNum::one(self.order);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Minimal-order representation: descend to the smallest cyclotomic
    /// subfield Q(zeta_d), d | order, containing the value.
    pub fn canonical(&self) -> CycloNum {
        if let Some(q) = self.as_rational() {
            return CycloNum {
                order: 1,
                coeffs: vec![q],
            };
        }
        let f = field(self.order);
        for d in divisors(self.order) {
            if d == self.order {
                break;
            }
            let phi_d = euler_phi(d) as usize;
            let stride = (self.order / d) as usize;
            // Columns: embeddings of the power basis of Q(zeta_d).
            let cols: Vec<&[BigInt]> = (0..phi_d)
                .map(|j| f.power_table[j * stride].as_slice())
                .collect();
            if let Some(sol) = solve_int_cols(&cols, &self.coeffs) {
                return CycloNum {
                    order: d,
                    coeffs: sol,
                };
            }
        }
        self.clone()
    }

    /// Order in the multiplicative group, when the value is a root of unity.
    /// Torsion in Q(zeta_n) is generated by -zeta_n, so candidate orders
    /// divide lcm(2, n).
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let bound = self.order.lcm(&2);
        for d in divisors(bound) {
            if self.pow_u64(d).is_one() {
                return Some(d);
            }
        }
        None
    }

    /// Express the value as zeta_d^j with d the exact multiplicative order.
    pub fn as_root_of_unity(&self) -> Option<(u64, u64)> {
        let d = self.multiplicative_order()?;
        let target = self.order.lcm(&d);
        let me = self.promote(target).ok()?;
        for j in 0..d {
            if d.gcd(&j.max(1)) == 1 || (j == 0 && d == 1) {
                let cand = CycloNum::zeta_pow(d, j).promote(target).ok()?;
                if cand == me {
                    return Some((d, j));
                }
            }
        }
        None
    }

    /// One square root, when the value is (perfect-square rational) x (root
    /// of unity) or a scaled power-basis monomial; deterministic choice.
    pub fn sqrt_in_cyclotomic(&self, cap: u64) -> Result<CycloNum> {
        if self.is_zero() {
            return Ok(CycloNum::zero(1));
        }
        if let Some(q) = self.as_rational() {
            if let Some(r) = rational_sqrt(&q) {
                return Ok(CycloNum::from_rational(r));
            }
            if q.is_negative() {
                if let Some(r) = rational_sqrt(&(-&q)) {
                    if cap < 4 {
                        return Err(Error::OrderCapExceeded { requested: 4, cap });
                    }
                    return Ok(&CycloNum::from_rational(r) * &CycloNum::zeta(4));
                }
            }
        }
        if let Some((d, j)) = self.as_root_of_unity() {
            let dd = 2 * d;
            if dd > cap {
                return Err(Error::OrderCapExceeded { requested: dd, cap });
            }
            return Ok(CycloNum::zeta_pow(dd, j).canonical());
        }
        // c * z^k with a single nonzero coefficient
        let nonzero: Vec<usize> = (0..self.coeffs.len())
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect();
        if nonzero.len() == 1 {
            let k = nonzero[0];
            let c = CycloNum::from_rational(self.coeffs[k].clone());
            let root_part = CycloNum::zeta_pow(self.order, k as u64);
            let sc = c.sqrt_in_cyclotomic(cap)?;
            let sr = root_part.sqrt_in_cyclotomic(cap)?;
            return Ok(&sc * &sr);
        }
        Err(Error::NoSquareRoot {
            value: self.to_string(),
            cap,
        })
    }

    /// Total order on canonical forms: (order, coefficients) lexicographic.
    /// Agrees with semantic equality when both sides are canonical.
    pub fn structural_cmp(&self, other: &CycloNum) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Render in the literal grammar, descending powers of z.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_str = render_rational(&abs);
            if k == 0 {
                out.push_str(&coeff_str);
            } else {
                if !abs.is_one() {
                    out.push_str(&coeff_str);
                    out.push('*');
                }
                if k == 1 {
                    out.push('z');
                } else {
                    out.push_str(&format!("z^{k}"));
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parse the literal grammar at a given field order.
    pub fn parse(order: u64, text: &str) -> Result<CycloNum> {
        let terms = parse_poly(text)?;
        let mut max_pow = 0usize;
        for &(_, p) in &terms {
            max_pow = max_pow.max(p as usize);
        }
        let mut poly = vec![BigRational::zero(); max_pow + 1];
        for (c, p) in terms {
            let p = (p % order) as usize;
            poly[p] += c;
        }
        Ok(CycloNum::from_poly(order, &poly))
    }
}

fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Square root of a nonnegative rational if numerator and denominator are
/// perfect squares.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

// --- polynomial helpers over Q (ascending coefficients) ---

fn poly_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
}

fn poly_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let mut bb = b.to_vec();
    poly_trim(&mut bb);
    assert!(!poly_is_zero(&bb));
    let db = bb.len() - 1;
    if rem.len() - 1 < db || poly_is_zero(&rem) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    let lead = bb[db].clone();
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                let t = &bb[j] * &c;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    poly_trim(&mut rem);
    (quot, rem)
}

/// Extended Euclid: returns (g, u, v) with u*a + v*b = g.
fn poly_ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    poly_trim(&mut r0);
    let mut r1 = b.to_vec();
    poly_trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    let mut t0 = vec![BigRational::zero()];
    let mut t1 = vec![BigRational::one()];
    while !poly_is_zero(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        let t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

/// Solve sum_j x_j * cols[j] = rhs over Q; None when inconsistent.
fn solve_int_cols(cols: &[&[BigInt]], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let ncols = cols.len();
    // augmented matrix
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = cols
                .iter()
                .map(|c| BigRational::from_integer(c[i].clone()))
                .collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut r = 0;
    for c in 0..ncols {
        let mut piv = None;
        for i in r..rows {
            if !m[i][c].is_zero() {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for j in c..=ncols {
            m[r][j] *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // inconsistent iff a zero row has nonzero rhs
    for i in r..rows {
        if !m[i][ncols].is_zero() {
            return None;
        }
    }
    // embedded basis columns are linearly independent, so all columns pivot
    let mut sol = vec![BigRational::zero(); ncols];
    for c in 0..ncols {
        match pivot_of_col[c] {
            Some(p) => sol[c] = m[p][ncols].clone(),
            None => return None,
        }
    }
    Some(sol)
}

// --- operators ---

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let a = self.canonical();
        let b = other.canonical();
        a.order == b.order && a.coeffs == b.coeffs
    }
}

impl Eq for CycloNum {}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl std::ops::$trait for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                let (a, b) = self.promoted_with(rhs);
                let f: fn(&CycloNum, &CycloNum) -> CycloNum = $imp;
                f(&a, &b)
            }
        }
        impl std::ops::$trait for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| {
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x + y)
        .collect();
    CycloNum {
        order: a.order,
        coeffs,
    }
});

impl_binop!(Sub, sub, |a, b| {
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x - y)
        .collect();
    CycloNum {
        order: a.order,
        coeffs,
    }
});

impl_binop!(Mul, mul, |a, b| {
    let n = a.coeffs.len();
    let mut prod = vec![BigRational::zero(); 2 * n - 1];
    for i in 0..n {
        if a.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if !b.coeffs[j].is_zero() {
                prod[i + j] += &a.coeffs[i] * &b.coeffs[j];
            }
        }
    }
    CycloNum::from_poly(a.order, &prod)
});

impl std::ops::Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum(n={}, {})", self.order, self.render())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

// --- literal grammar ---

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse {
                col: self.pos + 1,
                msg: "expected an integer".into(),
            });
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(BigInt::from_str(&s).expect("digits"))
    }
}

/// Parse into (coefficient, power-of-z) terms.
fn parse_poly(text: &str) -> Result<Vec<(BigRational, u64)>> {
    let mut lex = Lexer::new(text);
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match lex.peek() {
            None if first => {
                return Err(Error::Parse {
                    col: 1,
                    msg: "empty literal".into(),
                })
            }
            None => break,
            Some('+') => {
                lex.bump();
            }
            Some('-') => {
                lex.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => {
                return Err(Error::Parse {
                    col: lex.pos + 1,
                    msg: format!("expected '+' or '-', found {c:?}"),
                })
            }
        }
        first = false;
        // a term: '*'-joined factors, each a rational or a z-power
        let mut coeff = sign;
        let mut power = 0u64;
        loop {
            match lex.peek() {
                Some('z') => {
                    lex.bump();
                    let mut p = 1u64;
                    if lex.peek() == Some('^') {
                        lex.bump();
                        let e = lex.integer()?;
                        p = u64::try_from(&e).map_err(|_| Error::Parse {
                            col: lex.pos,
                            msg: "exponent too large".into(),
                        })?;
                    }
                    power += p;
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = lex.integer()?;
                    let mut q = BigRational::from_integer(num);
                    if lex.peek() == Some('/') {
                        lex.bump();
                        let den = lex.integer()?;
                        if den.is_zero() {
                            return Err(Error::Parse {
                                col: lex.pos,
                                msg: "zero denominator".into(),
                            });
                        }
                        q /= BigRational::from_integer(den);
                    }
                    coeff *= q;
                }
                Some(c) => {
                    return Err(Error::Parse {
                        col: lex.pos + 1,
                        msg: format!("unexpected character {c:?}"),
                    })
                }
                None => {
                    return Err(Error::Parse {
                        col: lex.pos,
                        msg: "dangling operator".into(),
                    })
                }
            }
            if lex.peek() == Some('*') {
                lex.bump();
                continue;
            }
            break;
        }
        terms.push((coeff, power));
        match lex.peek() {
            None => break,
            Some('+') | Some('-') => continue,
            Some(c) => {
                return Err(Error::Parse {
                    col: lex.pos + 1,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(terms)
}

// --- serde: {"order": n, "value": "literal"} ---

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    order: u64,
    value: String,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            order: self.order,
            value: self.render(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(deserializer)?;
        if repr.order == 0 {
            return Err(D::Error::custom("field order must be positive"));
        }
        CycloNum::parse(repr.order, &repr.value).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_cyclo(rng: &mut StdRng, order: u64) -> CycloNum {
        let phi = euler_phi(order) as usize;
        let coeffs: Vec<BigRational> = (0..phi)
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.gen_range(-6i64..=6)),
                    BigInt::from(rng.gen_range(1i64..=4)),
                )
            })
            .collect();
        CycloNum { order, coeffs }
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z4 = CycloNum::zeta(4);
        assert_eq!(&z4 * &z4, CycloNum::from_int(-1));
    }

    #[test]
    fn zeta6_squared_is_zeta6_minus_one() {
        let z6 = CycloNum::zeta(6);
        let expected = &z6 - &CycloNum::one(6);
        assert_eq!(&z6 * &z6, expected);
    }

    #[test]
    fn inverse_of_zeta4_is_minus_zeta4() {
        let z4 = CycloNum::zeta(4);
        let inv = CycloNum::one(4).try_div(&z4).unwrap();
        assert_eq!(inv, -&z4);
    }

    #[test]
    fn embed_minus_one_into_order_four() {
        let m1 = CycloNum::from_int(-1);
        let e = m1.promote(4).unwrap();
        assert_eq!(e, CycloNum::from_int(-1));
        assert_eq!(e.order(), 4);
    }

    #[test]
    fn embed_zeta2_into_order_six() {
        // zeta_2 = -1 maps to zeta_6^3 which reduces back to -1
        let z2 = CycloNum::zeta(2);
        assert_eq!(z2, CycloNum::from_int(-1));
        let e = z2.promote(6).unwrap();
        assert_eq!(e, CycloNum::zeta_pow(6, 3));
        assert_eq!(e, CycloNum::from_int(-1));
    }

    #[test]
    fn embed_zeta3_into_order_twelve() {
        // z^4 mod Phi_12 = z^4 - z^2 + 1 gives z^2 - 1
        let z3 = CycloNum::zeta(3);
        let e = z3.promote(12).unwrap();
        let expected = &CycloNum::zeta_pow(12, 2) - &CycloNum::one(12);
        assert_eq!(e, expected);
    }

    #[test]
    fn embed_round_trip_preserves_value() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let v = random_cyclo(&mut rng, 6);
            let up = v.promote(24).unwrap();
            assert_eq!(up, v, "promotion must preserve the value");
            assert_eq!(up.canonical(), v.canonical());
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(7);
        for order in [4u64, 5, 8, 12] {
            for _ in 0..25 {
                let a = random_cyclo(&mut rng, order);
                let b = random_cyclo(&mut rng, order);
                let c = random_cyclo(&mut rng, order);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                if !a.is_zero() {
                    let inv = a.try_inv().unwrap();
                    assert!((&a * &inv).is_one(), "a * a^-1 = 1");
                }
            }
        }
    }

    #[test]
    fn promotion_is_a_ring_homomorphism() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..30 {
            let a = random_cyclo(&mut rng, 8);
            let b = random_cyclo(&mut rng, 8);
            let prod_then = (&a * &b).promote(24).unwrap();
            let then_prod = &a.promote(24).unwrap() * &b.promote(24).unwrap();
            assert_eq!(prod_then, then_prod);
        }
    }

    #[test]
    fn canonical_descends_orders() {
        let v = CycloNum::zeta_pow(14, 2); // zeta_14^2 = zeta_7
        let c = v.canonical();
        assert_eq!(c.order(), 7);
        assert_eq!(c, CycloNum::zeta(7));
        assert_eq!(CycloNum::from_int(5).promote(12).unwrap().canonical().order(), 1);
    }

    #[test]
    fn root_of_unity_detection() {
        let v = -&CycloNum::zeta(7);
        let (d, j) = v.as_root_of_unity().unwrap();
        assert_eq!(d, 14);
        assert_eq!(v, CycloNum::zeta_pow(14, j));
        assert_eq!(random_non_root().multiplicative_order(), None);
    }

    fn random_non_root() -> CycloNum {
        CycloNum::from_int(3)
    }

    #[test]
    fn sqrt_of_roots_of_unity() {
        let m1 = CycloNum::from_int(-1);
        let s = m1.sqrt_in_cyclotomic(1000).unwrap();
        assert_eq!(&s * &s, m1);
        let z7 = CycloNum::zeta(7);
        let s = z7.sqrt_in_cyclotomic(1000).unwrap();
        assert_eq!(&s * &s, z7);
        let v = CycloNum::from_ratio(9, 4);
        let s = v.sqrt_in_cyclotomic(1000).unwrap();
        assert_eq!(&s * &s, v);
        let v = -&CycloNum::from_ratio(9, 4);
        let s = v.sqrt_in_cyclotomic(1000).unwrap();
        assert_eq!(&s * &s, v);
    }

    #[test]
    fn sqrt_respects_cap() {
        let z7 = CycloNum::zeta(7);
        match z7.sqrt_in_cyclotomic(10) {
            Err(Error::OrderCapExceeded { requested: 14, cap: 10 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn literal_round_trip() {
        let mut rng = StdRng::seed_from_u64(99);
        for order in [1u64, 2, 4, 7, 12, 28] {
            for _ in 0..20 {
                let v = random_cyclo(&mut rng, order);
                let s = v.render();
                let back = CycloNum::parse(order, &s).unwrap();
                assert_eq!(back, v, "round trip failed for {s}");
            }
        }
        let v = CycloNum::parse(7, "1/2*z^3 - z + 2").unwrap();
        assert_eq!(v.coeffs()[3], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(v.coeffs()[1], BigRational::from_integer(BigInt::from(-1)));
        assert_eq!(v.coeffs()[0], BigRational::from_integer(BigInt::from(2)));
        // whitespace-insensitive
        let w = CycloNum::parse(7, " 1/2 * z^3-z+ 2 ").unwrap();
        assert_eq!(w, v);
    }

    #[test]
    fn parse_errors_carry_position() {
        match CycloNum::parse(4, "1 + &") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let one = CycloNum::one(4);
        let zero = CycloNum::zero(4);
        assert!(matches!(one.try_div(&zero), Err(Error::DivisionByZero)));
    }

    #[test]
    fn promotion_cap_enforced() {
        let a = CycloNum::zeta(7);
        let b = CycloNum::zeta(11);
        match CycloNum::promote_pair(&a, &b, 50) {
            Err(Error::OrderCapExceeded { requested: 77, cap: 50 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
        assert!(CycloNum::promote_pair(&a, &b, 100).is_ok());
    }
}
