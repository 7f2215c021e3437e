//! The variety families under study: graphs in F_q^{n+d} of maps
//! p -> (h_i + f_{a_i})(p), with f_{a_i}(x) = a_{i,n+1} plus
//! sum_j a_{i,j} x_j^{b_{i,j}}. The h_i are fixed polynomials of total
//! degree at most q-1; every exponent b_{i,j} is coprime to q-1 (so
//! x -> x^b permutes F_q).
//!
//! Two distinguished specializations:
//!   * the flat family (b = all ones, h = 0), whose varieties are exactly
//!     the n-flats expressible as graphs of affine maps;
//!   * the paraboloid family (d = 1, h = sum x_i^2, b = ones), whose
//!     varieties are translated paraboloid graphs with vertex (p, 0).
//!
//! Varieties are kept intensional (parameter tuple + family); membership is
//! evaluated directly instead of materializing point lists, since the
//! variety side of the incidence graph is the huge one.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_integer::gcd;
use thiserror::Error;

use crate::gf::FieldCtx;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("n and d must both be at least 1 (got n={n}, d={d})")]
    DegenerateDims { n: usize, d: usize },
    #[error("gcd(b[{i}][{j}]={b}, q-1={qm1}) != 1")]
    GcdViolation {
        i: usize,
        j: usize,
        b: u64,
        qm1: u64,
    },
    #[error("h[{i}] has total degree {deg}, exceeding q-1 = {max}")]
    DegreeTooLarge { i: usize, deg: u64, max: u64 },
    #[error("expected {expected} polynomials/exponent vectors, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("polynomial arity {got} does not match n = {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration of {count} varieties exceeds the guard {guard}")]
    TooLarge { count: u128, guard: u128 },
    #[error("q = {q} is even; this construction needs odd characteristic")]
    EvenCharacteristic { q: u64 },
    #[error("family is not the paraboloid family (d=1, b=1, h=sum of squares)")]
    NotParaboloid,
    #[error("malformed polynomial spec {0:?}")]
    BadPolySpec(String),
    #[error("coefficient {coeff} is not a canonical element index (< {q})")]
    BadCoefficient { coeff: u64, q: u64 },
}

/// Sparse polynomial over F_q in `arity` variables. Terms are pairs of an
/// exponent vector and a coefficient given as a canonical element index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    arity: usize,
    terms: Vec<(Vec<u64>, u32)>,
}

impl Poly {
    pub fn zero(arity: usize) -> Poly {
        Poly {
            arity,
            terms: vec![],
        }
    }

    pub fn from_terms(arity: usize, terms: Vec<(Vec<u64>, u32)>) -> Poly {
        for (exps, _) in &terms {
            assert_eq!(exps.len(), arity);
        }
        let terms = terms.into_iter().filter(|&(_, c)| c != 0).collect();
        Poly { arity, terms }
    }

    /// sum_i x_i^2
    pub fn sum_of_squares(arity: usize) -> Poly {
        let terms = (0..arity)
            .map(|j| {
                let mut e = vec![0u64; arity];
                e[j] = 2;
                (e, 1u32)
            })
            .collect();
        Poly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u64>())
            .max()
            .unwrap_or(0)
    }

    pub fn eval_idx(&self, ctx: &FieldCtx, x: &[u32]) -> u32 {
        debug_assert_eq!(x.len(), self.arity);
        let mut acc = 0u32;
        for (exps, coeff) in &self.terms {
            let mut term = *coeff;
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = ctx.mul_idx(term, ctx.pow_idx(x[j], e));
                }
            }
            acc = ctx.add_idx(acc, term);
        }
        acc
    }

    /// Parse "c*x1^e1*x2^e2 + ..." where c is a canonical element index;
    /// a bare variable factor has implicit exponent 1, a bare coefficient
    /// term is a constant, and "0" is the zero polynomial.
    pub fn parse(spec: &str, arity: usize, ctx: &FieldCtx) -> Result<Poly, FamilyError> {
        let bad = || FamilyError::BadPolySpec(spec.to_string());
        let q = ctx.q();
        let mut terms = Vec::new();
        for term_str in spec.split('+') {
            let term_str = term_str.trim();
            if term_str.is_empty() {
                return Err(bad());
            }
            let mut coeff: u32 = 1;
            let mut exps = vec![0u64; arity];
            let mut saw_factor = false;
            for factor in term_str.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(bad());
                }
                saw_factor = true;
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (
                            v.parse::<usize>().map_err(|_| bad())?,
                            e.parse::<u64>().map_err(|_| bad())?,
                        ),
                        None => (rest.parse::<usize>().map_err(|_| bad())?, 1),
                    };
                    if var == 0 || var > arity {
                        return Err(bad());
                    }
                    exps[var - 1] += exp;
                } else {
                    let c = factor.parse::<u64>().map_err(|_| bad())?;
                    if c >= q {
                        return Err(FamilyError::BadCoefficient { coeff: c, q });
                    }
                    coeff = ctx.mul_idx(coeff, c as u32);
                }
            }
            if !saw_factor {
                return Err(bad());
            }
            if coeff != 0 {
                terms.push((exps, coeff));
            }
        }
        Ok(Poly::from_terms(arity, terms))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(exps, coeff)| {
                let mut parts = vec![coeff.to_string()];
                for (j, &e) in exps.iter().enumerate() {
                    if e == 1 {
                        parts.push(format!("x{}", j + 1));
                    } else if e > 1 {
                        parts.push(format!("x{}^{}", j + 1, e));
                    }
                }
                parts.join("*")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Exponent vector b_i; every entry must be coprime to q-1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn ones(n: usize) -> ExponentVector {
        ExponentVector(vec![1; n])
    }
}

/// A point of F_q^{n+d}, stored as canonical coordinate indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Point {
    pub coords: Vec<u32>,
}

/// The parameter tuple (a_1, ..., a_d), each a_i in F_q^{n+1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarietyId {
    pub a: Vec<Vec<u32>>,
}

/// The family data (ctx, n, d, h_1..h_d, b_1..b_d).
pub struct VarietyFamily {
    ctx: Arc<FieldCtx>,
    n: usize,
    d: usize,
    h: Vec<Poly>,
    b: Vec<ExponentVector>,
    /// pow_cache[i][j][x] = x^{b_{i,j}} as element indices.
    pow_cache: Vec<Vec<Vec<u32>>>,
    /// Value table of each h_i over F_q^n, built when q^n <= 2^16.
    h_tbl: Option<Vec<Vec<u32>>>,
}

/// Point-list table threshold for h value caching.
const H_TABLE_MAX: u128 = 1 << 16;

impl fmt::Debug for VarietyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VarietyFamily(q={}, n={}, d={})",
            self.ctx.q(),
            self.n,
            self.d
        )
    }
}

impl VarietyFamily {
    pub fn new(
        ctx: Arc<FieldCtx>,
        n: usize,
        d: usize,
        h: Vec<Poly>,
        b: Vec<ExponentVector>,
    ) -> Result<VarietyFamily, FamilyError> {
        if n == 0 || d == 0 {
            return Err(FamilyError::DegenerateDims { n, d });
        }
        if h.len() != d {
            return Err(FamilyError::WrongLength {
                expected: d,
                got: h.len(),
            });
        }
        if b.len() != d {
            return Err(FamilyError::WrongLength {
                expected: d,
                got: b.len(),
            });
        }
        let q = ctx.q();
        for (i, hi) in h.iter().enumerate() {
            if hi.arity() != n {
                return Err(FamilyError::ArityMismatch {
                    expected: n,
                    got: hi.arity(),
                });
            }
            let deg = hi.total_degree();
            if deg > q - 1 {
                return Err(FamilyError::DegreeTooLarge { i, deg, max: q - 1 });
            }
        }
        for (i, bi) in b.iter().enumerate() {
            if bi.0.len() != n {
                return Err(FamilyError::ArityMismatch {
                    expected: n,
                    got: bi.0.len(),
                });
            }
            for (j, &bij) in bi.0.iter().enumerate() {
                if bij == 0 || gcd(bij, q - 1) != 1 {
                    return Err(FamilyError::GcdViolation {
                        i,
                        j,
                        b: bij,
                        qm1: q - 1,
                    });
                }
            }
        }

        let pow_cache: Vec<Vec<Vec<u32>>> = b
            .iter()
            .map(|bi| {
                bi.0.iter()
                    .map(|&bij| (0..q as u32).map(|x| ctx.pow_idx(x, bij)).collect())
                    .collect()
            })
            .collect();

        let h_tbl = if ctx.space_size(n) <= H_TABLE_MAX {
            let qn = ctx.space_size(n) as u64;
            Some(
                h.iter()
                    .map(|hi| {
                        (0..qn)
                            .map(|xi| hi.eval_idx(&ctx, &ctx.vector_from_index(n, xi)))
                            .collect()
                    })
                    .collect(),
            )
        } else {
            None
        };

        Ok(VarietyFamily {
            ctx,
            n,
            d,
            h,
            b,
            pow_cache,
            h_tbl,
        })
    }

    /// The flat family: b = all ones, h = 0. Its varieties are the n-flats
    /// expressible as graphs of affine maps F_q^n -> F_q^d.
    pub fn flat_family(
        ctx: Arc<FieldCtx>,
        n: usize,
        d: usize,
    ) -> Result<VarietyFamily, FamilyError> {
        let h = (0..d).map(|_| Poly::zero(n)).collect();
        let b = (0..d).map(|_| ExponentVector::ones(n)).collect();
        VarietyFamily::new(ctx, n, d, h, b)
    }

    /// The paraboloid family: d = 1, h = sum x_i^2, b = ones. Requires odd q.
    pub fn paraboloid_family(ctx: Arc<FieldCtx>, n: usize) -> Result<VarietyFamily, FamilyError> {
        if ctx.q().is_multiple_of(2) {
            return Err(FamilyError::EvenCharacteristic { q: ctx.q() });
        }
        let h = vec![Poly::sum_of_squares(n)];
        let b = vec![ExponentVector::ones(n)];
        VarietyFamily::new(ctx, n, 1, h, b)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn h(&self) -> &[Poly] {
        &self.h
    }

    pub fn b(&self) -> &[ExponentVector] {
        &self.b
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + self.d
    }

    /// q^{n+d}
    pub fn num_points(&self) -> u128 {
        self.ctx.space_size(self.n + self.d)
    }

    /// q^{d(n+1)}
    pub fn num_varieties(&self) -> u128 {
        self.ctx.space_size(self.d * (self.n + 1))
    }

    // ----- canonical id indexing -----

    pub fn id_from_index(&self, idx: u64) -> VarietyId {
        let flat = self.ctx.vector_from_index(self.d * (self.n + 1), idx);
        let a = flat.chunks(self.n + 1).map(|c| c.to_vec()).collect();
        VarietyId { a }
    }

    pub fn id_index(&self, id: &VarietyId) -> u64 {
        let flat: Vec<u32> = id.a.iter().flatten().copied().collect();
        self.ctx.vector_index(&flat)
    }

    pub fn point_from_index(&self, idx: u64) -> Point {
        Point {
            coords: self.ctx.vector_from_index(self.n + self.d, idx),
        }
    }

    pub fn point_index(&self, pt: &Point) -> u64 {
        self.ctx.vector_index(&pt.coords)
    }

    // ----- evaluation -----

    /// f_{a_i}(x) = sum_j a_{i,j} x_j^{b_{i,j}} + a_{i,n+1}, with i zero-based.
    pub fn f_eval(&self, i: usize, a_i: &[u32], x: &[u32]) -> Result<u32, FamilyError> {
        if i >= self.d {
            return Err(FamilyError::DimensionMismatch {
                expected: self.d,
                got: i,
            });
        }
        if a_i.len() != self.n + 1 {
            return Err(FamilyError::DimensionMismatch {
                expected: self.n + 1,
                got: a_i.len(),
            });
        }
        if x.len() != self.n {
            return Err(FamilyError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let ctx = &self.ctx;
        let mut acc = a_i[self.n];
        for j in 0..self.n {
            let pw = self.pow_cache[i][j][x[j] as usize];
            acc = ctx.add_idx(acc, ctx.mul_idx(a_i[j], pw));
        }
        Ok(acc)
    }

    fn h_eval(&self, i: usize, x: &[u32], x_index: u64) -> u32 {
        match &self.h_tbl {
            Some(tbl) => tbl[i][x_index as usize],
            None => self.h[i].eval_idx(&self.ctx, x),
        }
    }

    /// Coordinate n+i of the graph point over base point x:
    /// (h_i + f_{a_i})(x).
    pub fn graph_coord(&self, i: usize, a_i: &[u32], x: &[u32], x_index: u64) -> u32 {
        let f = self
            .f_eval(i, a_i, x)
            .expect("validated dimensions inside graph_coord");
        self.ctx.add_idx(self.h_eval(i, x, x_index), f)
    }

    /// All q^n points of the variety, sorted by canonical point index.
    pub fn variety_points(&self, id: &VarietyId) -> Vec<Point> {
        let qn = self.ctx.space_size(self.n) as u64;
        let mut pts = Vec::with_capacity(qn as usize);
        for xi in 0..qn {
            let x = self.ctx.vector_from_index(self.n, xi);
            let mut coords = x.clone();
            for i in 0..self.d {
                coords.push(self.graph_coord(i, &id.a[i], &x, xi));
            }
            pts.push(Point { coords });
        }
        pts.sort_by_key(|p| self.point_index(p));
        pts
    }

    pub fn variety_contains(&self, id: &VarietyId, pt: &Point) -> bool {
        debug_assert_eq!(pt.coords.len(), self.n + self.d);
        let x = &pt.coords[..self.n];
        let xi = self.ctx.vector_index(x);
        (0..self.d).all(|i| pt.coords[self.n + i] == self.graph_coord(i, &id.a[i], x, xi))
    }

    /// Membership by raw point index (hot path for incidence counting).
    pub fn contains_index(&self, id: &VarietyId, point_index: u64) -> bool {
        let pt = self.point_from_index(point_index);
        self.variety_contains(id, &pt)
    }

    /// Pairwise distinctness of all q^{d(n+1)} varieties as point sets.
    pub fn distinctness_check(&self, guard: u128) -> Result<bool, FamilyError> {
        let count = self.num_varieties();
        if count > guard {
            return Err(FamilyError::TooLarge { count, guard });
        }
        let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(count as usize);
        for idx in 0..count as u64 {
            let id = self.id_from_index(idx);
            let pts: Vec<u64> = self
                .variety_points(&id)
                .iter()
                .map(|p| self.point_index(p))
                .collect();
            if !seen.insert(pts) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The paraboloid variety with vertex (p, 0):
    /// a = (-2 p_1, ..., -2 p_n, sum p_i^2).
    pub fn paraboloid_id(&self, p: &[u32]) -> Result<VarietyId, FamilyError> {
        let ctx = &self.ctx;
        if ctx.q().is_multiple_of(2) {
            return Err(FamilyError::EvenCharacteristic { q: ctx.q() });
        }
        let is_paraboloid = self.d == 1
            && self.b[0].0.iter().all(|&b| b == 1)
            && self.h[0] == Poly::sum_of_squares(self.n);
        if !is_paraboloid {
            return Err(FamilyError::NotParaboloid);
        }
        if p.len() != self.n {
            return Err(FamilyError::DimensionMismatch {
                expected: self.n,
                got: p.len(),
            });
        }
        let neg2 = ctx.neg_idx(ctx.from_int_idx(2));
        let mut a = Vec::with_capacity(self.n + 1);
        let mut sum_sq = 0u32;
        for &pj in p {
            a.push(ctx.mul_idx(neg2, pj));
            sum_sq = ctx.add_idx(sum_sq, ctx.mul_idx(pj, pj));
        }
        a.push(sum_sq);
        Ok(VarietyId { a: vec![a] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Arc<FieldCtx> {
        FieldCtx::new(q, 1, None).unwrap()
    }

    #[test]
    fn poly_parse_and_display() {
        let ctx = f(3);
        let p = Poly::parse("1*x1^2 + 2*x2 + 1", 2, &ctx).unwrap();
        assert_eq!(p.total_degree(), 2);
        assert_eq!(p.to_string(), "1*x1^2 + 2*x2 + 1");
        let rt = Poly::parse(&p.to_string(), 2, &ctx).unwrap();
        assert_eq!(p, rt);

        assert_eq!(Poly::parse("0", 2, &ctx).unwrap(), Poly::zero(2));
        assert!(Poly::parse("x3", 2, &ctx).is_err());
        assert!(Poly::parse("5*x1", 1, &ctx).is_err()); // coeff not an index
                                                        // implicit coefficient 1 and implicit exponent 1
        let p2 = Poly::parse("x1*x2", 2, &f(5)).unwrap();
        assert_eq!(p2.total_degree(), 2);
    }

    #[test]
    fn f_eval_examples() {
        // a = 0 gives the zero function
        let fam = VarietyFamily::flat_family(f(3), 2, 1).unwrap();
        for xi in 0..9u64 {
            let x = fam.ctx().vector_from_index(2, xi);
            assert_eq!(fam.f_eval(0, &[0, 0, 0], &x).unwrap(), 0);
        }

        // F_3, n=1, b=(1), a=(1,2), x=2: 1*2 + 2 = 1
        let fam = VarietyFamily::flat_family(f(3), 1, 1).unwrap();
        assert_eq!(fam.f_eval(0, &[1, 2], &[2]).unwrap(), 1);

        // F_5, n=2, b=(3,1), a=(1,1,0), x=(2,4): 2^3 + 4 = 2
        let fam = VarietyFamily::new(
            f(5),
            2,
            1,
            vec![Poly::zero(2)],
            vec![ExponentVector(vec![3, 1])],
        )
        .unwrap();
        assert_eq!(fam.f_eval(0, &[1, 1, 0], &[2, 4]).unwrap(), 2);

        assert!(fam.f_eval(0, &[1, 1], &[2, 4]).is_err());
    }

    #[test]
    fn variety_points_examples() {
        // F_2, n=1, d=1, h=0, a=(1,0): the identity line {(0,0),(1,1)}
        let fam = VarietyFamily::flat_family(f(2), 1, 1).unwrap();
        let pts = fam.variety_points(&VarietyId {
            a: vec![vec![1, 0]],
        });
        let coords: Vec<Vec<u32>> = pts.into_iter().map(|p| p.coords).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![1, 1]]);

        // graph of x^2 over F_3: {(0,0),(1,1),(2,1)}
        let ctx = f(3);
        let fam = VarietyFamily::new(
            ctx.clone(),
            1,
            1,
            vec![Poly::parse("1*x1^2", 1, &ctx).unwrap()],
            vec![ExponentVector::ones(1)],
        )
        .unwrap();
        let pts = fam.variety_points(&VarietyId {
            a: vec![vec![0, 0]],
        });
        let coords: Vec<Vec<u32>> = pts.into_iter().map(|p| p.coords).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![1, 1], vec![2, 1]]);

        // |variety_points| = q^n for every id in a couple of families
        for (q, n, d) in [(2u64, 1usize, 2usize), (3, 2, 1)] {
            let fam = VarietyFamily::flat_family(f(q), n, d).unwrap();
            for idx in 0..fam.num_varieties() as u64 {
                let id = fam.id_from_index(idx);
                let pts = fam.variety_points(&id);
                assert_eq!(pts.len() as u128, fam.ctx().space_size(n));
                // sorted by canonical index
                let idxs: Vec<u64> = pts.iter().map(|p| fam.point_index(p)).collect();
                assert!(idxs.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn membership_agrees_with_point_lists() {
        let ctx = f(3);
        let fam = VarietyFamily::new(
            ctx.clone(),
            1,
            2,
            vec![Poly::zero(1), Poly::parse("1*x1^2", 1, &ctx).unwrap()],
            vec![ExponentVector::ones(1), ExponentVector(vec![1])],
        )
        .unwrap();
        for idx in 0..fam.num_varieties() as u64 {
            let id = fam.id_from_index(idx);
            let member: HashSet<u64> = fam
                .variety_points(&id)
                .iter()
                .map(|p| fam.point_index(p))
                .collect();
            let mut hits = 0;
            for pi in 0..fam.num_points() as u64 {
                let c = fam.contains_index(&id, pi);
                assert_eq!(c, member.contains(&pi));
                hits += c as u64;
            }
            // exactly q^n memberships across all q^{n+d} points
            assert_eq!(hits, 3);
        }
    }

    #[test]
    fn perturbed_graph_point_is_outside() {
        let fam = VarietyFamily::flat_family(f(3), 2, 2).unwrap();
        let id = fam.id_from_index(17);
        for pt in fam.variety_points(&id) {
            for i in 0..2 {
                let mut bad = pt.clone();
                bad.coords[2 + i] = fam.ctx().add_idx(bad.coords[2 + i], 1);
                assert!(!fam.variety_contains(&id, &bad));
            }
        }
    }

    #[test]
    fn flat_family_shape() {
        // (F_2, n=1, d=1): 4 lines of size 2
        let fam = VarietyFamily::flat_family(f(2), 1, 1).unwrap();
        assert_eq!(fam.num_varieties(), 4);
        for idx in 0..4 {
            assert_eq!(fam.variety_points(&fam.id_from_index(idx)).len(), 2);
        }

        // membership of the origin iff a_{n+1} = 0
        let fam = VarietyFamily::flat_family(f(3), 2, 1).unwrap();
        let origin = Point {
            coords: vec![0, 0, 0],
        };
        for idx in 0..fam.num_varieties() as u64 {
            let id = fam.id_from_index(idx);
            assert_eq!(fam.variety_contains(&id, &origin), id.a[0][2] == 0);
        }
    }

    #[test]
    fn flat_family_closed_under_affine_combinations() {
        let ctx = f(3);
        let fam = VarietyFamily::flat_family(ctx.clone(), 1, 2).unwrap();
        for idx in 0..fam.num_varieties() as u64 {
            let id = fam.id_from_index(idx);
            let pts = fam.variety_points(&id);
            for lam in 0..3u32 {
                let one_minus = ctx.sub_idx(1, lam);
                for x in &pts {
                    for y in &pts {
                        let comb: Vec<u32> = x
                            .coords
                            .iter()
                            .zip(&y.coords)
                            .map(|(&a, &b)| {
                                ctx.add_idx(ctx.mul_idx(lam, a), ctx.mul_idx(one_minus, b))
                            })
                            .collect();
                        assert!(fam.variety_contains(&id, &Point { coords: comb }));
                    }
                }
            }
        }
    }

    #[test]
    fn paraboloid_ids() {
        let ctx = f(5);
        let fam = VarietyFamily::paraboloid_family(ctx.clone(), 1).unwrap();
        // p = 0: a = (0, 0)
        assert_eq!(
            fam.paraboloid_id(&[0]).unwrap(),
            VarietyId {
                a: vec![vec![0, 0]]
            }
        );
        // F_5, n=1, p=2: a = (-4, 4) = (1, 4)
        assert_eq!(
            fam.paraboloid_id(&[2]).unwrap(),
            VarietyId {
                a: vec![vec![1, 4]]
            }
        );

        // vertex (p, 0) lies on the paraboloid of p
        let fam2 = VarietyFamily::paraboloid_family(f(7), 2).unwrap();
        for pi in 0..49u64 {
            let p = fam2.ctx().vector_from_index(2, pi);
            let id = fam2.paraboloid_id(&p).unwrap();
            let mut vertex = p.clone();
            vertex.push(0);
            assert!(fam2.variety_contains(&id, &Point { coords: vertex }));
        }

        assert_eq!(
            VarietyFamily::paraboloid_family(f(2), 1).unwrap_err(),
            FamilyError::EvenCharacteristic { q: 2 }
        );
    }

    #[test]
    fn distinctness_small_families() {
        let fam = VarietyFamily::flat_family(f(2), 1, 1).unwrap();
        assert!(fam.distinctness_check(1 << 20).unwrap());

        // F_3, n=1, d=2 with an arbitrary h: 81 distinct varieties
        let ctx = f(3);
        let fam = VarietyFamily::new(
            ctx.clone(),
            1,
            2,
            vec![Poly::parse("2*x1^2 + 1", 1, &ctx).unwrap(), Poly::zero(1)],
            vec![ExponentVector(vec![3]), ExponentVector::ones(1)],
        )
        .unwrap();
        assert_eq!(fam.num_varieties(), 81);
        assert!(fam.distinctness_check(1 << 20).unwrap());

        // F_3, n=2, d=1, h = x1*x2
        let fam = VarietyFamily::new(
            ctx.clone(),
            2,
            1,
            vec![Poly::parse("1*x1*x2", 2, &ctx).unwrap()],
            vec![ExponentVector::ones(2)],
        )
        .unwrap();
        assert!(fam.distinctness_check(1 << 20).unwrap());

        assert_eq!(
            fam.distinctness_check(10).unwrap_err(),
            FamilyError::TooLarge {
                count: 27,
                guard: 10
            }
        );
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert_eq!(
            VarietyFamily::flat_family(f(3), 0, 1).unwrap_err(),
            FamilyError::DegenerateDims { n: 0, d: 1 }
        );
        // gcd(2, q-1) = 2 over F_7
        let err = VarietyFamily::new(
            f(7),
            1,
            1,
            vec![Poly::zero(1)],
            vec![ExponentVector(vec![2])],
        )
        .unwrap_err();
        assert_eq!(
            err,
            FamilyError::GcdViolation {
                i: 0,
                j: 0,
                b: 2,
                qm1: 6
            }
        );
        // degree cap q-1
        let ctx2 = f(2);
        let err = VarietyFamily::new(
            ctx2.clone(),
            1,
            1,
            vec![Poly::parse("1*x1^2", 1, &ctx2).unwrap()],
            vec![ExponentVector::ones(1)],
        )
        .unwrap_err();
        assert_eq!(
            err,
            FamilyError::DegreeTooLarge {
                i: 0,
                deg: 2,
                max: 1
            }
        );
    }

    #[test]
    fn id_index_round_trip() {
        let fam = VarietyFamily::flat_family(f(3), 1, 2).unwrap();
        for idx in 0..fam.num_varieties() as u64 {
            assert_eq!(fam.id_index(&fam.id_from_index(idx)), idx);
        }
    }
}
