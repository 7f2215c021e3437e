//! Exact arithmetic in the finite field F_q with q = p^m.
//!
//! Elements are polynomials over F_p reduced modulo a monic irreducible
//! polynomial of degree m, stored as little-endian coefficient vectors.
//! Every element has a canonical index e = sum coeffs\[i\] * p^i in \[0, q);
//! all matrix and vector indexing elsewhere in the crate derives from this
//! single bijection so that reports are reproducible bit for bit.
//!
//! Construction validates primality of p and irreducibility of the modulus
//! by exhaustive factor search, and precomputes full q x q operation tables.
//! This caps the supported field size (see [`MAX_Q`]) but makes every later
//! field operation a table lookup, which is what the incidence and spectral
//! machinery lean on.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field size for table-based arithmetic.
pub const MAX_Q: u64 = 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("p = {0} is not prime")]
    NonPrimeP(u64),
    #[error("modulus polynomial is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("modulus must be monic of degree {expected}, got degree {got}")]
    BadModulus { expected: u32, got: usize },
    #[error("division by zero in F_q")]
    DivisionByZero,
    #[error("index {index} out of range [0, {q})")]
    IndexOutOfRange { index: u64, q: u64 },
    #[error("field size {q} exceeds the table-arithmetic cap {max}")]
    FieldTooLarge { q: u64, max: u64 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("malformed field spec {0:?}, expected \"p\", \"p^m\" or \"p^m/c0,c1,...,cm\"")]
    BadSpec(String),
}

/// An element of F_q: little-endian coefficient vector over F_p, length m.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem{:?}", self.coeffs)
    }
}

/// A validated finite field F_{p^m} with canonical element indexing and
/// precomputed operation tables.
pub struct FieldCtx {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus, little-endian, length m+1.
    modulus: Vec<u64>,
    add_tbl: Vec<u32>,
    mul_tbl: Vec<u32>,
    neg_tbl: Vec<u32>,
    /// inv_tbl[0] is a sentinel (0); inversion of zero is rejected separately.
    inv_tbl: Vec<u32>,
    /// Trace values Tr(a) in [0, p), indexed by element index.
    trace_tbl: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.spec_string())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense little-endian polynomial helpers over F_p, used only during
// construction (all later arithmetic goes through the tables).
mod poly_fp {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ai * bj) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of a modulo the monic polynomial b.
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        debug_assert_eq!(b[db], 1, "modulus must be monic");
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            if lead != 0 {
                for i in 0..=db {
                    let sub = (lead * b[i]) % p;
                    r[shift + i] = (r[shift + i] + p - sub) % p;
                }
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    /// Exhaustive irreducibility test for a monic polynomial of degree >= 1:
    /// no monic divisor of degree 1..=deg/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let deg = f.len() - 1;
        if deg == 1 {
            return true;
        }
        for k in 1..=deg / 2 {
            let count = p.pow(k as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(k + 1);
                let mut t = idx;
                for _ in 0..k {
                    g.push(t % p);
                    t /= p;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldCtx {
    /// Build F_{p^m}. When `modulus` is omitted: for m = 1 the convention is
    /// the polynomial x; for m > 1 the monic irreducible of degree m whose
    /// non-leading coefficient vector has the smallest canonical index
    /// (little-endian base-p) is selected.
    pub fn new(p: u64, m: u32, modulus: Option<Vec<u64>>) -> Result<Arc<FieldCtx>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeP(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p.checked_pow(m).ok_or(FieldError::FieldTooLarge {
            q: u64::MAX,
            max: MAX_Q,
        })?;
        if q > MAX_Q {
            return Err(FieldError::FieldTooLarge { q, max: MAX_Q });
        }

        let modulus = match modulus {
            Some(mut v) => {
                for c in v.iter_mut() {
                    *c %= p;
                }
                if v.len() != m as usize + 1 || v[m as usize] != 1 {
                    return Err(FieldError::BadModulus {
                        expected: m,
                        got: v.len().saturating_sub(1),
                    });
                }
                if !poly_fp::is_irreducible(&v, p) {
                    return Err(FieldError::ReducibleModulus { p });
                }
                v
            }
            None => {
                if m == 1 {
                    vec![0, 1]
                } else {
                    Self::least_irreducible(p, m)
                }
            }
        };

        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            add_tbl: Vec::new(),
            mul_tbl: Vec::new(),
            neg_tbl: Vec::new(),
            inv_tbl: Vec::new(),
            trace_tbl: Vec::new(),
        };
        ctx.build_tables()?;
        Ok(Arc::new(ctx))
    }

    /// Parse a field spec string: "p", "p^m", or "p^m/c0,c1,...,cm".
    pub fn parse(spec: &str) -> Result<Arc<FieldCtx>, FieldError> {
        let bad = || FieldError::BadSpec(spec.to_string());
        let (pm, modpart) = match spec.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (spec, None),
        };
        let (p, m) = match pm.split_once('^') {
            Some((ps, ms)) => (
                ps.trim().parse::<u64>().map_err(|_| bad())?,
                ms.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => (pm.trim().parse::<u64>().map_err(|_| bad())?, 1),
        };
        let modulus = match modpart {
            Some(s) => Some(
                s.split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        FieldCtx::new(p, m, modulus)
    }

    /// Canonical spec string "p^m/c0,...,cm" (just "p" for prime fields).
    pub fn spec_string(&self) -> String {
        if self.m == 1 {
            format!("{}", self.p)
        } else {
            let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            format!("{}^{}/{}", self.p, self.m, coeffs.join(","))
        }
    }

    fn least_irreducible(p: u64, m: u32) -> Vec<u64> {
        let count = p.pow(m);
        for idx in 0..count {
            let mut f = Vec::with_capacity(m as usize + 1);
            let mut t = idx;
            for _ in 0..m {
                f.push(t % p);
                t /= p;
            }
            f.push(1);
            if poly_fp::is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("an irreducible of every degree exists over F_p");
    }

    fn elem_from_index_raw(&self, idx: u64) -> Vec<u64> {
        let mut coeffs = Vec::with_capacity(self.m as usize);
        let mut t = idx;
        for _ in 0..self.m {
            coeffs.push(t % self.p);
            t /= self.p;
        }
        coeffs
    }

    fn index_raw(&self, coeffs: &[u64]) -> u64 {
        let mut idx = 0;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    fn build_tables(&mut self) -> Result<(), FieldError> {
        let q = self.q as usize;
        let p = self.p;

        let elems: Vec<Vec<u64>> = (0..self.q).map(|i| self.elem_from_index_raw(i)).collect();

        let mut add_tbl = vec![0u32; q * q];
        let mut mul_tbl = vec![0u32; q * q];
        for a in 0..q {
            for b in a..q {
                let sum: Vec<u64> = elems[a]
                    .iter()
                    .zip(&elems[b])
                    .map(|(&x, &y)| (x + y) % p)
                    .collect();
                let s = self.index_raw(&sum) as u32;
                add_tbl[a * q + b] = s;
                add_tbl[b * q + a] = s;

                let prod = poly_fp::mul(&elems[a], &elems[b], p);
                let mut red = poly_fp::rem(&prod, &self.modulus, p);
                red.resize(self.m as usize, 0);
                let pr = self.index_raw(&red) as u32;
                mul_tbl[a * q + b] = pr;
                mul_tbl[b * q + a] = pr;
            }
        }

        let mut neg_tbl = vec![0u32; q];
        for a in 0..q {
            let neg: Vec<u64> = elems[a].iter().map(|&x| (p - x) % p).collect();
            neg_tbl[a] = self.index_raw(&neg) as u32;
        }

        let mut inv_tbl = vec![0u32; q];
        for a in 1..q {
            for b in 1..q {
                if mul_tbl[a * q + b] == 1 {
                    inv_tbl[a] = b as u32;
                    break;
                }
            }
            if inv_tbl[a] == 0 {
                // Every nonzero element of a field is invertible; reaching
                // here means the modulus was reducible after all.
                return Err(FieldError::ReducibleModulus { p });
            }
        }

        // Tr(a) = a + a^p + ... + a^{p^{m-1}} lies in the prime subfield.
        let mut trace_tbl = vec![0u32; q];
        for (a, slot) in trace_tbl.iter_mut().enumerate() {
            let mut acc = a as u32;
            let mut frob = a as u32;
            for _ in 1..self.m {
                let mut powed = frob;
                // frob^p by repeated multiplication (p is small at desk scale)
                for _ in 1..p {
                    powed = mul_tbl[powed as usize * q + frob as usize];
                }
                frob = powed;
                acc = add_tbl[acc as usize * q + frob as usize];
            }
            let coeffs = &elems[acc as usize];
            if coeffs.iter().skip(1).any(|&c| c != 0) {
                return Err(FieldError::ReducibleModulus { p });
            }
            *slot = coeffs[0] as u32;
        }

        self.add_tbl = add_tbl;
        self.mul_tbl = mul_tbl;
        self.neg_tbl = neg_tbl;
        self.inv_tbl = inv_tbl;
        self.trace_tbl = trace_tbl;
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    // ----- canonical index bijection -----

    pub fn index_to_elem(&self, idx: u64) -> Result<FieldElem, FieldError> {
        if idx >= self.q {
            return Err(FieldError::IndexOutOfRange {
                index: idx,
                q: self.q,
            });
        }
        Ok(FieldElem {
            coeffs: self.elem_from_index_raw(idx),
        })
    }

    pub fn elem_to_index(&self, e: &FieldElem) -> u64 {
        debug_assert_eq!(e.coeffs.len(), self.m as usize);
        self.index_raw(&e.coeffs)
    }

    pub fn elem(&self, idx: u64) -> FieldElem {
        self.index_to_elem(idx).expect("element index in range")
    }

    /// Embed an integer k via k mod p (the prime-subfield copy of Z).
    pub fn from_int(&self, k: i64) -> FieldElem {
        let r = k.rem_euclid(self.p as i64) as u64;
        FieldElem {
            coeffs: self.elem_from_index_raw(r),
        }
    }

    pub fn from_int_idx(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    // ----- index-level operations (hot paths) -----

    #[inline]
    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        self.add_tbl[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.mul_tbl[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg_idx(&self, a: u32) -> u32 {
        self.neg_tbl[a as usize]
    }

    #[inline]
    pub fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn inv_idx(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.inv_tbl[a as usize])
    }

    /// Trace value in [0, p) as an index into the prime subfield.
    #[inline]
    pub fn trace_idx(&self, a: u32) -> u32 {
        self.trace_tbl[a as usize]
    }

    /// x^b by square-and-multiply on element indices; x^0 = 1 for all x.
    pub fn pow_idx(&self, x: u32, b: u64) -> u32 {
        let mut result = 1u32;
        let mut base = x;
        let mut e = b;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_idx(result, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        result
    }

    // ----- element-level operations -----

    pub fn add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        self.elem(self.add_idx(self.elem_to_index(x) as u32, self.elem_to_index(y) as u32) as u64)
    }

    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        self.elem(self.mul_idx(self.elem_to_index(x) as u32, self.elem_to_index(y) as u32) as u64)
    }

    pub fn neg(&self, x: &FieldElem) -> FieldElem {
        self.elem(self.neg_idx(self.elem_to_index(x) as u32) as u64)
    }

    pub fn sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        self.elem(self.sub_idx(self.elem_to_index(x) as u32, self.elem_to_index(y) as u32) as u64)
    }

    pub fn inv(&self, x: &FieldElem) -> Result<FieldElem, FieldError> {
        let idx = self.inv_idx(self.elem_to_index(x) as u32)?;
        Ok(self.elem(idx as u64))
    }

    /// Tr(a) = a + a^p + ... + a^{p^{m-1}}, returned as an element of the
    /// prime subfield.
    pub fn trace(&self, a: &FieldElem) -> FieldElem {
        self.elem(self.trace_idx(self.elem_to_index(a) as u32) as u64)
    }

    pub fn pow_map(&self, b: u64, x: &FieldElem) -> FieldElem {
        self.elem(self.pow_idx(self.elem_to_index(x) as u32, b) as u64)
    }

    // ----- canonical indexing of coordinate vectors over F_q -----

    /// Canonical index of a coordinate vector (little-endian base q:
    /// coords\[0\] is least significant).
    pub fn vector_index(&self, coords: &[u32]) -> u64 {
        let mut idx = 0u64;
        for &c in coords.iter().rev() {
            idx = idx * self.q + c as u64;
        }
        idx
    }

    pub fn vector_from_index(&self, len: usize, mut idx: u64) -> Vec<u32> {
        let mut coords = Vec::with_capacity(len);
        for _ in 0..len {
            coords.push((idx % self.q) as u32);
            idx /= self.q;
        }
        coords
    }

    /// q^len as u128 (for guard checks before any allocation).
    pub fn space_size(&self, len: usize) -> u128 {
        (self.q as u128).pow(len as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent oracle: irreducibility of a monic quadratic over F_p by
    // exhaustive root search.
    fn quadratic_has_root(c0: u64, c1: u64, p: u64) -> bool {
        (0..p).any(|x| (x * x + c1 * x + c0).is_multiple_of(p))
    }

    #[test]
    fn prime_field_basics() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        assert_eq!(f3.q(), 3);
        let two = f3.elem(2);
        assert_eq!(f3.add(&two, &two), f3.elem(1));

        let f5 = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f5.inv(&f5.elem(2)).unwrap(), f5.elem(3));
        assert_eq!(f5.inv(&f5.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn f4_multiplication_forced_by_modulus() {
        // x^2 + x + 1 is the unique irreducible quadratic over F_2.
        let f4 = FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        let x = f4.elem(2); // coeffs (0,1)
        assert_eq!(f4.mul(&x, &x), f4.elem(3)); // x*x = x+1, coeffs (1,1)
        assert_eq!(f4.elem_to_index(&x), 2);
    }

    #[test]
    fn default_modulus_is_least_irreducible() {
        // Oracle: scan all 9 monic quadratics over F_3 in canonical index
        // order; the first irreducible one is x^2 + 1.
        let mut expect = None;
        for idx in 0..9u64 {
            let (c0, c1) = (idx % 3, idx / 3);
            if !quadratic_has_root(c0, c1, 3) {
                expect = Some(vec![c0, c1, 1]);
                break;
            }
        }
        assert_eq!(expect.as_deref(), Some(&[1, 0, 1][..]));

        let f9 = FieldCtx::new(3, 2, None).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.q(), 9);
    }

    #[test]
    fn rejects_bad_construction() {
        assert_eq!(
            FieldCtx::new(4, 1, None).unwrap_err(),
            FieldError::NonPrimeP(4)
        );
        // x^2 + 2x + 1 = (x+1)^2 over F_3
        assert_eq!(
            FieldCtx::new(3, 2, Some(vec![1, 2, 1])).unwrap_err(),
            FieldError::ReducibleModulus { p: 3 }
        );
    }

    #[test]
    fn trace_examples() {
        let f9 = FieldCtx::new(3, 2, None).unwrap();
        assert_eq!(f9.trace(&f9.zero()), f9.zero());
        assert_eq!(f9.trace(&f9.one()), f9.elem(2)); // 1 + 1^3 = 2

        let f4 = FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        assert_eq!(f4.trace(&f4.one()), f4.zero()); // 1 + 1 = 0 in char 2
        assert_eq!(f4.trace(&f4.elem(2)), f4.one()); // Tr(x) = x + x^2 = 1
    }

    #[test]
    fn pow_map_tables() {
        // Oracle: repeated multiplication.
        let naive_pow = |ctx: &FieldCtx, x: u32, b: u64| {
            let mut r = 1u32;
            for _ in 0..b {
                r = ctx.mul_idx(r, x);
            }
            r
        };

        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let table: Vec<u32> = (0..5).map(|x| f5.pow_idx(x, 3)).collect();
        assert_eq!(table, vec![0, 1, 3, 2, 4]);
        for x in 0..5u32 {
            assert_eq!(f5.pow_idx(x, 3), naive_pow(&f5, x, 3));
        }
        let mut sorted = table.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4], "b=3 is a bijection on F_5");

        // b = 1 is the identity on any ctx.
        let f9 = FieldCtx::new(3, 2, None).unwrap();
        for x in 0..9u32 {
            assert_eq!(f9.pow_idx(x, 1), x);
        }

        // gcd(2, 6) = 2: squaring is not injective on F_7.
        let f7 = FieldCtx::new(7, 1, None).unwrap();
        assert_eq!(f7.pow_idx(3, 2), 2);
        assert_eq!(f7.pow_idx(4, 2), 2);
    }

    #[test]
    fn index_bijection() {
        let f4 = FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        assert_eq!(f4.elem_to_index(&f4.elem(2)), 2);

        let f9 = FieldCtx::new(3, 2, None).unwrap();
        // 2x + 1 has coeffs (1, 2): index 1 + 2*3 = 7.
        let e = f9.elem(7);
        assert_eq!(e.coeffs(), &[1, 2]);
        for idx in 0..9 {
            assert_eq!(f9.elem_to_index(&f9.elem(idx)), idx);
        }
        assert!(f9.index_to_elem(9).is_err());
    }

    #[test]
    fn spec_string_round_trip() {
        let f9 = FieldCtx::parse("3^2/1,0,1").unwrap();
        assert_eq!(f9.spec_string(), "3^2/1,0,1");
        let f3 = FieldCtx::parse("3").unwrap();
        assert_eq!(f3.spec_string(), "3");
        assert!(FieldCtx::parse("abc").is_err());
        // default modulus fills in
        let f9b = FieldCtx::parse("3^2").unwrap();
        assert_eq!(f9b.modulus(), &[1, 0, 1]);
    }

    fn all_test_fields() -> Vec<Arc<FieldCtx>> {
        vec![
            FieldCtx::new(2, 1, None).unwrap(),
            FieldCtx::new(3, 1, None).unwrap(),
            FieldCtx::new(5, 1, None).unwrap(),
            FieldCtx::new(7, 1, None).unwrap(),
            FieldCtx::new(2, 2, None).unwrap(),
            FieldCtx::new(2, 3, None).unwrap(),
            FieldCtx::new(3, 2, None).unwrap(),
            FieldCtx::new(2, 4, None).unwrap(),
            FieldCtx::new(5, 2, None).unwrap(),
            FieldCtx::new(3, 3, None).unwrap(),
            FieldCtx::new(7, 2, None).unwrap(),
        ]
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for ctx in all_test_fields() {
            let q = ctx.q() as u32;
            let mut seen = vec![false; ctx.p() as usize];
            for a in 0..q {
                seen[ctx.trace_idx(a) as usize] = true;
                for b in 0..q {
                    let lhs = ctx.trace_idx(ctx.add_idx(a, b));
                    let rhs = (ctx.trace_idx(a) + ctx.trace_idx(b)) % ctx.p() as u32;
                    assert_eq!(lhs, rhs);
                }
            }
            assert!(seen.iter().all(|&s| s), "trace surjective for {:?}", ctx);
        }
    }

    #[test]
    fn coprime_power_maps_are_bijections() {
        for ctx in all_test_fields() {
            let q = ctx.q();
            for b in 1..=(2 * q) {
                if num_integer::gcd(b, q - 1) != 1 {
                    continue;
                }
                let mut image: Vec<u32> = (0..q as u32).map(|x| ctx.pow_idx(x, b)).collect();
                image.sort_unstable();
                image.dedup();
                assert_eq!(image.len() as u64, q, "x^{b} on {:?}", ctx);
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms(seed in 0u64..1_000_000) {
            let fields = all_test_fields();
            let ctx = &fields[(seed % fields.len() as u64) as usize];
            let q = ctx.q();
            let a = ((seed / 7) % q) as u32;
            let b = ((seed / 11) % q) as u32;
            let c = ((seed / 13) % q) as u32;

            prop_assert_eq!(ctx.add_idx(a, b), ctx.add_idx(b, a));
            prop_assert_eq!(ctx.mul_idx(a, b), ctx.mul_idx(b, a));
            prop_assert_eq!(
                ctx.add_idx(ctx.add_idx(a, b), c),
                ctx.add_idx(a, ctx.add_idx(b, c))
            );
            prop_assert_eq!(
                ctx.mul_idx(ctx.mul_idx(a, b), c),
                ctx.mul_idx(a, ctx.mul_idx(b, c))
            );
            prop_assert_eq!(
                ctx.mul_idx(a, ctx.add_idx(b, c)),
                ctx.add_idx(ctx.mul_idx(a, b), ctx.mul_idx(a, c))
            );
            prop_assert_eq!(ctx.add_idx(a, ctx.neg_idx(a)), 0);
            if a != 0 {
                prop_assert_eq!(ctx.mul_idx(a, ctx.inv_idx(a).unwrap()), 1);
            }
        }

        #[test]
        fn vector_index_round_trip(len in 1usize..5, idx in 0u64..10_000) {
            let ctx = FieldCtx::new(3, 1, None).unwrap();
            let total = ctx.space_size(len) as u64;
            let idx = idx % total;
            let coords = ctx.vector_from_index(len, idx);
            prop_assert_eq!(ctx.vector_index(&coords), idx);
        }
    }
}
