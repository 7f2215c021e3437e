//! Exact spectral certificates for the two Gram matrices.
//!
//! Both Gram matrices have spectrum {q^{(d+1)n}, q^{dn}, 0}. The top
//! eigenvalue is simple; the middle one has multiplicity q^{n+d} - q^n on
//! both sides; the nullity is q^n - 1 on the point side and
//! q^{d(n+1)} - q^{n+d} + q^n - 1 on the variety side.
//!
//! Verification is certificate-based, never a numeric eigendecomposition:
//!
//! * annihilation: G (G - lam1 I)(G - lam0 I) = 0 as an exact integer
//!   matrix identity pins the eigenvalue set;
//! * moments + rank: trace(G), trace(G^2) and the fraction-free rank pin
//!   the multiplicities (the 2x2 Vandermonde system in (mult0, mult1) is
//!   nonsingular);
//! * characters: G chi = lambda chi holds in Z\[zeta_p\] for every additive
//!   character, with lambda assigned by the case analysis on the index
//!   vector;
//! * projectors: Lagrange interpolation on the three-point spectrum gives
//!   exact rational spectral projectors, checked idempotent with pairwise
//!   zero products and traces equal to the multiplicities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chr::CycInt;
use crate::incidence::{GramMatrix, Side};
use crate::linalg::IntMatrix;
use crate::variety::VarietyFamily;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("annihilation identity failed on the {side:?} side (max |residual| = {max_residual})")]
    AnnihilationFailed { side: Side, max_residual: BigInt },
    #[error("multiplicity certificate failed: {what}")]
    MultiplicityMismatch { what: String },
    #[error("eigenvector identity failed for character {char_index} at row {row} ({side:?} side)")]
    EigenvectorMismatch {
        side: Side,
        char_index: u64,
        row: usize,
    },
    #[error("projector invariant failed: {what}")]
    ProjectorCheckFailed { what: String },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
}

/// Expected spectrum and multiplicities for one side of the incidence
/// graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSpec {
    pub side: Side,
    pub order: u64,
    pub lam0: BigInt,
    pub lam1: BigInt,
    pub mult0: u64,
    pub mult1: u64,
    pub mult2: u64,
}

impl SpectrumSpec {
    pub fn new(fam: &VarietyFamily, side: Side) -> SpectrumSpec {
        let q = fam.ctx().q();
        let n = fam.n() as u32;
        let d = fam.d() as u32;
        let lam0 = BigInt::from(q).pow((d + 1) * n);
        let lam1 = BigInt::from(q).pow(d * n);
        let qn = q.pow(n);
        let qnd = q.pow(n + d);
        let mult1 = qnd - qn;
        let (order, mult2) = match side {
            Side::Points => (qnd, qn - 1),
            Side::Varieties => {
                let ord = q.pow(d * (n + 1));
                (ord, ord - qnd + qn - 1)
            }
        };
        let spec = SpectrumSpec {
            side,
            order,
            lam0,
            lam1,
            mult0: 1,
            mult1,
            mult2,
        };
        debug_assert_eq!(spec.mult0 + spec.mult1 + spec.mult2, spec.order);
        spec
    }

    pub fn multiplicities(&self) -> [u64; 3] {
        [self.mult0, self.mult1, self.mult2]
    }

    /// lam0 * mult0 + lam1 * mult1 (the expected trace).
    pub fn expected_trace(&self) -> BigInt {
        &self.lam0 * BigInt::from(self.mult0) + &self.lam1 * BigInt::from(self.mult1)
    }

    pub fn expected_trace_sq(&self) -> BigInt {
        &self.lam0 * &self.lam0 * BigInt::from(self.mult0)
            + &self.lam1 * &self.lam1 * BigInt::from(self.mult1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnihilationCertificate {
    pub side: Side,
    pub order: u64,
    /// max |entry| of G itself (a size witness for the report).
    pub gram_max_entry: String,
    /// max |entry| across the two partial products, the largest integers
    /// touched by the certificate.
    pub max_intermediate_entry: String,
}

/// Verify G (G - lam1 I)(G - lam0 I) = 0 exactly.
pub fn annihilation_check(
    g: &GramMatrix,
    spec: &SpectrumSpec,
) -> Result<AnnihilationCertificate, SpectralError> {
    if !g.entries.is_symmetric() {
        return Err(SpectralError::NotSymmetric);
    }
    let m1 = g.entries.sub_scalar_diag(&spec.lam1);
    let partial = g.entries.mul(&m1);
    let m0 = g.entries.sub_scalar_diag(&spec.lam0);
    let product = partial.mul(&m0);
    if !product.is_zero() {
        return Err(SpectralError::AnnihilationFailed {
            side: g.side,
            max_residual: product.max_abs(),
        });
    }
    Ok(AnnihilationCertificate {
        side: g.side,
        order: spec.order,
        gram_max_entry: g.entries.max_abs().to_string(),
        max_intermediate_entry: partial.max_abs().max(m0.max_abs()).to_string(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityCertificate {
    pub side: Side,
    pub rank: u64,
    pub trace: String,
    pub trace_sq: String,
    pub table_row_counts: [u64; 3],
}

/// Certify the multiplicities by trace, trace of the square, and rank.
/// Together with the annihilation certificate these pin the spectrum of G
/// to lam0 with multiplicity mult0, lam1 with mult1, and 0 with mult2.
pub fn multiplicity_check(
    g: &GramMatrix,
    spec: &SpectrumSpec,
) -> Result<MultiplicityCertificate, SpectralError> {
    let trace = g.entries.trace();
    let expected = spec.expected_trace();
    if trace != expected {
        return Err(SpectralError::MultiplicityMismatch {
            what: format!("trace {trace} != lam0*mult0 + lam1*mult1 = {expected}"),
        });
    }
    let trace_sq = g.entries.trace_of_square_symmetric();
    let expected_sq = spec.expected_trace_sq();
    if trace_sq != expected_sq {
        return Err(SpectralError::MultiplicityMismatch {
            what: format!("trace(G^2) {trace_sq} != {expected_sq}"),
        });
    }
    let rank = g.entries.rank_fraction_free() as u64;
    if rank != spec.mult0 + spec.mult1 {
        return Err(SpectralError::MultiplicityMismatch {
            what: format!("rank {rank} != mult0 + mult1 = {}", spec.mult0 + spec.mult1),
        });
    }
    Ok(MultiplicityCertificate {
        side: g.side,
        rank,
        trace: trace.to_string(),
        trace_sq: trace_sq.to_string(),
        table_row_counts: spec.multiplicities(),
    })
}

/// Which eigenvalue a character index vector belongs to (0 = top, 1 =
/// middle, 2 = kernel), per the three-case analysis on the index vector.
pub fn character_case(fam: &VarietyFamily, side: Side, v: &[u32]) -> usize {
    let n = fam.n();
    let d = fam.d();
    match side {
        Side::Points => {
            debug_assert_eq!(v.len(), n + d);
            if v.iter().all(|&x| x == 0) {
                0
            } else if v[n..].iter().any(|&x| x != 0) {
                1
            } else {
                2
            }
        }
        Side::Varieties => {
            debug_assert_eq!(v.len(), d * (n + 1));
            if v.iter().all(|&x| x == 0) {
                return 0;
            }
            // middle case: a_i = c_i (y, 1) for all i, for some y in F_q^n
            // and c != 0; the last coordinate of a_i forces c_i.
            let ctx = fam.ctx();
            let c: Vec<u32> = (0..d).map(|i| v[i * (n + 1) + n]).collect();
            let Some(i0) = c.iter().position(|&ci| ci != 0) else {
                return 2;
            };
            let inv = ctx.inv_idx(c[i0]).expect("nonzero");
            let y: Vec<u32> = (0..n)
                .map(|j| ctx.mul_idx(v[i0 * (n + 1) + j], inv))
                .collect();
            for i in 0..d {
                for j in 0..n {
                    if v[i * (n + 1) + j] != ctx.mul_idx(c[i], y[j]) {
                        return 2;
                    }
                }
            }
            1
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterCertificate {
    pub side: Side,
    /// Number of characters verified (the full group order).
    pub characters_checked: u64,
    /// Characters per eigenvalue case, which must equal the table counts.
    pub case_counts: [u64; 3],
}

/// Verify G chi = lambda chi in Z\[zeta_p\] for every character on the given
/// side, with lambda chosen by [`character_case`].
pub fn character_eigenvector_check(
    g: &GramMatrix,
    fam: &VarietyFamily,
    spec: &SpectrumSpec,
) -> Result<CharacterCertificate, SpectralError> {
    let ctx = fam.ctx();
    let p = ctx.p();
    let k = match g.side {
        Side::Points => fam.n() + fam.d(),
        Side::Varieties => fam.d() * (fam.n() + 1),
    };
    let order = spec.order as usize;
    debug_assert_eq!(ctx.space_size(k) as usize, order);

    let lambdas = [spec.lam0.clone(), spec.lam1.clone(), BigInt::zero()];
    let mut case_counts = [0u64; 3];

    // Coordinates of every group element, reused across characters.
    let coords: Vec<Vec<u32>> = (0..order as u64)
        .map(|i| ctx.vector_from_index(k, i))
        .collect();

    for vi in 0..order as u64 {
        let v = &coords[vi as usize];
        let case = character_case(fam, g.side, v);
        case_counts[case] += 1;
        let lam = &lambdas[case];

        // trace exponents t(w) = Tr(<v, w>) for all group elements w
        let exps: Vec<u64> = coords
            .iter()
            .map(|w| {
                let mut acc = 0u32;
                for (&a, &b) in v.iter().zip(w) {
                    acc = ctx.add_idx(acc, ctx.mul_idx(a, b));
                }
                ctx.trace_idx(acc) as u64
            })
            .collect();

        for row in 0..order {
            // sum_w G[row, w] zeta^{t(w)} accumulated in exponent space
            let mut raw = vec![BigInt::zero(); p as usize];
            for (w, t) in exps.iter().enumerate() {
                let e = g.entries.get(row, w);
                if !e.is_zero() {
                    raw[*t as usize] += e;
                }
            }
            let lhs = CycInt::from_exponent_coeffs(p, raw);
            let rhs = CycInt::zeta_pow(p, exps[row]).scale(lam);
            if lhs != rhs {
                return Err(SpectralError::EigenvectorMismatch {
                    side: g.side,
                    char_index: vi,
                    row,
                });
            }
        }
    }

    if case_counts != spec.multiplicities() {
        return Err(SpectralError::MultiplicityMismatch {
            what: format!(
                "character case counts {:?} != table counts {:?}",
                case_counts,
                spec.multiplicities()
            ),
        });
    }

    Ok(CharacterCertificate {
        side: g.side,
        characters_checked: spec.order,
        case_counts,
    })
}

/// A spectral projector stored as an integer matrix over a positive
/// denominator: P = num / den, exactly.
#[derive(Clone, Debug)]
pub struct Projector {
    pub eigenvalue: BigInt,
    num: IntMatrix,
    den: BigInt,
}

impl Projector {
    pub fn num(&self) -> &IntMatrix {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(self.num.trace(), self.den.clone())
    }

    /// 1_S' P 1_S for the indicator of `support` (sorted canonical indices).
    pub fn indicator_norm_sq(&self, support: &[u64]) -> BigRational {
        BigRational::new(self.num.quadratic_form_indicator(support), self.den.clone())
    }
}

/// The three projectors for eigenvalues lam0, lam1, 0 (in that order).
pub struct SpectralProjectors {
    pub spec: SpectrumSpec,
    pub projs: [Projector; 3],
}

/// Build the projectors by Lagrange interpolation on {lam0, lam1, 0} and
/// verify idempotency, pairwise-zero products, the sum-to-identity, and
/// traces equal to the multiplicities.
pub fn projectors(
    g: &GramMatrix,
    spec: &SpectrumSpec,
) -> Result<SpectralProjectors, SpectralError> {
    let order = spec.order as usize;
    let lam0 = &spec.lam0;
    let lam1 = &spec.lam1;
    let gap = lam0 - lam1; // > 0

    // P0 = G (G - lam1 I) / (lam0 (lam0 - lam1))
    let num_top = g.entries.mul(&g.entries.sub_scalar_diag(lam1));
    let den_top = lam0 * &gap;

    // P1 = G (lam0 I - G) / (lam1 (lam0 - lam1))
    let num_mid = g.entries.scale(lam0).sub(&g.entries.mul(&g.entries));
    let den_mid = lam1 * &gap;

    // P2 = I - P0 - P1 over the common denominator lam0 lam1 (lam0 - lam1)
    let den_ker = lam0 * lam1 * &gap;
    let num_ker = IntMatrix::identity(order)
        .scale(&den_ker)
        .sub(&num_top.scale(lam1))
        .sub(&num_mid.scale(lam0));

    let projs = [
        Projector {
            eigenvalue: lam0.clone(),
            num: num_top,
            den: den_top,
        },
        Projector {
            eigenvalue: lam1.clone(),
            num: num_mid,
            den: den_mid,
        },
        Projector {
            eigenvalue: BigInt::zero(),
            num: num_ker,
            den: den_ker,
        },
    ];

    for (i, p) in projs.iter().enumerate() {
        if p.den.is_negative() || p.den.is_zero() {
            return Err(SpectralError::ProjectorCheckFailed {
                what: format!("projector {i} has nonpositive denominator"),
            });
        }
        // P^2 = P  <=>  num * num = den * num
        if p.num.mul(&p.num) != p.num.scale(&p.den) {
            return Err(SpectralError::ProjectorCheckFailed {
                what: format!("projector {i} is not idempotent"),
            });
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if !projs[i].num.mul(&projs[j].num).is_zero() {
                return Err(SpectralError::ProjectorCheckFailed {
                    what: format!("projectors {i} and {j} are not orthogonal"),
                });
            }
        }
    }
    // sum to identity over the common denominator
    let common = &projs[2].den;
    let sum = projs[0]
        .num
        .scale(&(common / &projs[0].den))
        .add(&projs[1].num.scale(&(common / &projs[1].den)))
        .add(&projs[2].num);
    if sum != IntMatrix::identity(order).scale(common) {
        return Err(SpectralError::ProjectorCheckFailed {
            what: "projectors do not sum to the identity".into(),
        });
    }
    // traces = multiplicities
    for (p, mult) in projs.iter().zip(spec.multiplicities()) {
        if p.num.trace() != &p.den * BigInt::from(mult) {
            return Err(SpectralError::ProjectorCheckFailed {
                what: format!(
                    "projector for {} has trace != multiplicity {mult}",
                    p.eigenvalue
                ),
            });
        }
    }

    Ok(SpectralProjectors {
        spec: spec.clone(),
        projs,
    })
}

/// Middle-eigenspace bound for 1_P on the point side: (1 - 1/q^d) |P|.
pub fn points_middle_bound(q: u64, d: u32, size_p: u64) -> BigRational {
    let qd = BigInt::from(q).pow(d);
    BigRational::new((&qd - 1) * BigInt::from(size_p), qd)
}

/// Middle-eigenspace bound for 1_V on the variety side:
/// |V| / q^{(d-1)n} * (1 - 1/q + |V| (q^{d-1} - 1) / q^d).
pub fn varieties_middle_bound(q: u64, n: u32, d: u32, size_v: u64) -> BigRational {
    let qb = BigInt::from(q);
    let v = BigInt::from(size_v);
    let scale = BigRational::new(v.clone(), qb.pow((d - 1) * n));
    let inner = BigRational::new(&qb - 1, qb.clone())
        + BigRational::new(v * (qb.pow(d - 1) - 1), qb.pow(d));
    scale * inner
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionNormReport {
    pub side: Side,
    pub size: u64,
    pub norms: [String; 3],
    pub top_equality: bool,
    pub middle_within_bound: bool,
    pub nonnegative_and_sum_to_size: bool,
}

/// Exact projection norms of an indicator vector, with the lemma checks:
/// the top norm equals |S|^2 / order and the middle norm obeys the side's
/// closed-form bound.
pub fn projection_norm_check(
    projs: &SpectralProjectors,
    fam: &VarietyFamily,
    support: &[u64],
) -> ProjectionNormReport {
    let spec = &projs.spec;
    let size = support.len() as u64;
    let norms: Vec<BigRational> = projs
        .projs
        .iter()
        .map(|p| p.indicator_norm_sq(support))
        .collect();

    let top_expected = BigRational::new(
        BigInt::from(size) * BigInt::from(size),
        BigInt::from(spec.order),
    );
    let top_equality = norms[0] == top_expected;

    let q = fam.ctx().q();
    let n = fam.n() as u32;
    let d = fam.d() as u32;
    let middle_bound = match spec.side {
        Side::Points => points_middle_bound(q, d, size),
        Side::Varieties => varieties_middle_bound(q, n, d, size),
    };
    let middle_within_bound = norms[1] <= middle_bound;

    let total: BigRational = norms.iter().cloned().sum();
    let nonnegative_and_sum_to_size = norms.iter().all(|x| !x.is_negative())
        && total == BigRational::from_integer(BigInt::from(size));

    ProjectionNormReport {
        side: spec.side,
        size,
        norms: [
            norms[0].to_string(),
            norms[1].to_string(),
            norms[2].to_string(),
        ],
        top_equality,
        middle_within_bound,
        nonnegative_and_sum_to_size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::incidence::{
        gram_points, gram_varieties, DEFAULT_GRAM_ORDER_GUARD, DEFAULT_T_BITS_GUARD,
    };
    use crate::sampling;
    use crate::variety::{ExponentVector, Poly};
    use num_traits::One;

    fn flat_fam(q: u64, n: usize, d: usize) -> VarietyFamily {
        let ctx = FieldCtx::new(q, 1, None).unwrap();
        VarietyFamily::flat_family(ctx, n, d).unwrap()
    }

    fn grams(fam: &VarietyFamily) -> (GramMatrix, GramMatrix) {
        (
            gram_points(fam, DEFAULT_T_BITS_GUARD, DEFAULT_GRAM_ORDER_GUARD).unwrap(),
            gram_varieties(fam, DEFAULT_T_BITS_GUARD, DEFAULT_GRAM_ORDER_GUARD).unwrap(),
        )
    }

    #[test]
    fn annihilation_3_1_1_points() {
        // A(A - 3I)(A - 9I) = 0 for the 9x9 point-side Gram at (3,1,1).
        let fam = flat_fam(3, 1, 1);
        let (a, _) = grams(&fam);
        let spec = SpectrumSpec::new(&fam, Side::Points);
        assert_eq!(spec.lam0, BigInt::from(9));
        assert_eq!(spec.lam1, BigInt::from(3));
        annihilation_check(&a, &spec).unwrap();
    }

    #[test]
    fn annihilation_2_1_2_varieties() {
        // B(B - 4I)(B - 8I) = 0 for the 16x16 variety-side Gram at (2,1,2):
        // lam0 = q^{(d+1)n} = 8, lam1 = q^{dn} = 4.
        let fam = flat_fam(2, 1, 2);
        let (_, b) = grams(&fam);
        let spec = SpectrumSpec::new(&fam, Side::Varieties);
        assert_eq!(spec.order, 16);
        assert_eq!(spec.lam0, BigInt::from(8));
        assert_eq!(spec.lam1, BigInt::from(4));
        annihilation_check(&b, &spec).unwrap();

        // wrong eigenvalues must fail
        let mut broken = spec.clone();
        broken.lam0 = BigInt::from(16);
        assert!(matches!(
            annihilation_check(&b, &broken),
            Err(SpectralError::AnnihilationFailed { .. })
        ));
    }

    #[test]
    fn multiplicities_3_1_1_points() {
        // trace 27 = 9*1 + 3*6, rank 7 = 1 + 6, nullity 2 = q - 1.
        let fam = flat_fam(3, 1, 1);
        let (a, _) = grams(&fam);
        let spec = SpectrumSpec::new(&fam, Side::Points);
        let cert = multiplicity_check(&a, &spec).unwrap();
        assert_eq!(cert.rank, 7);
        assert_eq!(cert.trace, "27");
        assert_eq!(cert.table_row_counts, [1, 6, 2]);
    }

    #[test]
    fn multiplicities_2_1_2_varieties() {
        // order 16, mult2 = 16 - 8 + 2 - 1 = 9.
        let fam = flat_fam(2, 1, 2);
        let (_, b) = grams(&fam);
        let spec = SpectrumSpec::new(&fam, Side::Varieties);
        assert_eq!(spec.multiplicities(), [1, 6, 9]);
        assert_eq!(spec.mult0 + spec.mult1 + spec.mult2, spec.order);
        let cert = multiplicity_check(&b, &spec).unwrap();
        assert_eq!(cert.rank, 7);
    }

    #[test]
    fn character_cases_match_tables() {
        let fam = flat_fam(3, 1, 1);
        // points side: v = (0,1) has nonzero tail -> middle eigenvalue
        assert_eq!(character_case(&fam, Side::Points, &[0, 1]), 1);
        assert_eq!(character_case(&fam, Side::Points, &[0, 0]), 0);
        assert_eq!(character_case(&fam, Side::Points, &[1, 0]), 2);
        // varieties side: a = (1,0) has zero last coordinate, so no c != 0
        // can produce it -> kernel
        assert_eq!(character_case(&fam, Side::Varieties, &[1, 0]), 2);
        assert_eq!(character_case(&fam, Side::Varieties, &[0, 0]), 0);
        // a = c(y,1) with c=1, y=2
        assert_eq!(character_case(&fam, Side::Varieties, &[2, 1]), 1);
    }

    #[test]
    fn character_eigenvectors_both_sides() {
        for (q, n, d) in [(3u64, 1usize, 1usize), (2, 1, 2), (2, 2, 1)] {
            let fam = flat_fam(q, n, d);
            let (a, b) = grams(&fam);
            let sp = SpectrumSpec::new(&fam, Side::Points);
            let sv = SpectrumSpec::new(&fam, Side::Varieties);
            let cp = character_eigenvector_check(&a, &fam, &sp).unwrap();
            assert_eq!(cp.case_counts, sp.multiplicities());
            let cv = character_eigenvector_check(&b, &fam, &sv).unwrap();
            assert_eq!(cv.case_counts, sv.multiplicities());
        }
    }

    #[test]
    fn character_eigenvectors_twisted_family() {
        // nonlinear h and b > 1 where gcd permits
        let ctx = FieldCtx::new(3, 1, None).unwrap();
        let fam = VarietyFamily::new(
            ctx.clone(),
            1,
            1,
            vec![Poly::parse("1*x1^2", 1, &ctx).unwrap()],
            vec![ExponentVector(vec![3])],
        )
        .unwrap();
        let a = gram_points(&fam, DEFAULT_T_BITS_GUARD, DEFAULT_GRAM_ORDER_GUARD).unwrap();
        let b = gram_varieties(&fam, DEFAULT_T_BITS_GUARD, DEFAULT_GRAM_ORDER_GUARD).unwrap();
        let sp = SpectrumSpec::new(&fam, Side::Points);
        let sv = SpectrumSpec::new(&fam, Side::Varieties);
        annihilation_check(&a, &sp).unwrap();
        annihilation_check(&b, &sv).unwrap();
        character_eigenvector_check(&a, &fam, &sp).unwrap();
        character_eigenvector_check(&b, &fam, &sv).unwrap();
    }

    #[test]
    fn wrong_multiplicity_spec_is_rejected() {
        let fam = flat_fam(3, 1, 1);
        let (a, _) = grams(&fam);
        let mut broken = SpectrumSpec::new(&fam, Side::Points);
        broken.mult1 = 5;
        broken.mult2 = 3;
        assert!(matches!(
            multiplicity_check(&a, &broken),
            Err(SpectralError::MultiplicityMismatch { .. })
        ));
    }

    #[test]
    fn wrong_eigenvalue_assignment_is_rejected() {
        let fam = flat_fam(3, 1, 1);
        let (a, _) = grams(&fam);
        let mut broken = SpectrumSpec::new(&fam, Side::Points);
        broken.lam1 = BigInt::from(5);
        assert!(matches!(
            character_eigenvector_check(&a, &fam, &broken),
            Err(SpectralError::EigenvectorMismatch { .. })
        ));
    }

    #[test]
    fn group_algebra_route_matches_tables() {
        // Independent route: the eigenvalue of chi_v is <f, chi_v> where f
        // is the defining group-algebra element; check it against the table
        // case analysis on the point side at (3,1,1).
        use crate::chr::{char_inner_product, Character};
        let fam = flat_fam(3, 1, 1);
        let ctx = fam.ctx().clone();
        let k = 2usize;
        let order = ctx.space_size(k) as u64;
        // f(u) = q^{dn} at u=0; q^{d(n-1)} when u|_[n] != 0; else 0
        let f: Vec<CycInt> = (0..order)
            .map(|ui| {
                let u = ctx.vector_from_index(k, ui);
                let c = if ui == 0 {
                    3u64
                } else if u[0] != 0 {
                    1
                } else {
                    0
                };
                CycInt::from_int(3, BigInt::from(c))
            })
            .collect();
        let spec = SpectrumSpec::new(&fam, Side::Points);
        let zero = BigInt::zero();
        for vi in 0..order {
            let v = ctx.vector_from_index(k, vi);
            let chi = Character::new(ctx.clone(), v.clone());
            let lam = char_inner_product(&f, &chi).unwrap();
            let case = character_case(&fam, Side::Points, &v);
            let expected = [&spec.lam0, &spec.lam1, &zero][case];
            assert_eq!(lam, CycInt::from_int(3, expected.clone()));
        }
    }

    #[test]
    fn nonzero_spectra_of_both_sides_agree() {
        // A = T'T and B = TT' share their positive eigenvalues with equal
        // multiplicities; certifying both sides against the same
        // (lam0, lam1, mult0, mult1) is exactly that statement.
        for (q, n, d) in [(3u64, 1usize, 1usize), (2, 1, 2), (3, 2, 1)] {
            let fam = flat_fam(q, n, d);
            let (a, b) = grams(&fam);
            let sp = SpectrumSpec::new(&fam, Side::Points);
            let sv = SpectrumSpec::new(&fam, Side::Varieties);
            assert_eq!((&sp.lam0, &sp.lam1), (&sv.lam0, &sv.lam1));
            assert_eq!((sp.mult0, sp.mult1), (sv.mult0, sv.mult1));
            annihilation_check(&a, &sp).unwrap();
            annihilation_check(&b, &sv).unwrap();
            multiplicity_check(&a, &sp).unwrap();
            multiplicity_check(&b, &sv).unwrap();
        }
    }

    #[test]
    fn middle_bound_values() {
        // hand-computed: q=3, n=1, d=2, |V|=5:
        // (5/3)(1 - 1/3 + 5*(3-1)/9) = (5/3)(16/9) = 80/27
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(varieties_middle_bound(3, 1, 2, 5), r(80, 27));
        // q=3, d=2, |P|=7: (1 - 1/9) * 7 = 56/9
        assert_eq!(points_middle_bound(3, 2, 7), r(56, 9));
        // d=1 collapses to |V|(1 - 1/q)
        assert_eq!(varieties_middle_bound(3, 1, 1, 6), r(4, 1));
    }

    #[test]
    fn group_algebra_route_matches_variety_side() {
        // Independent of the Gram matrix: the variety-side multiplication
        // operator is defined by z[w] = #common zeros of the f-tuple of w,
        // and <z, chi_a> must equal the eigenvalue the case analysis
        // assigns to a.
        use crate::chr::{char_inner_product, Character};
        use crate::incidence::gram_varieties_root_count;
        for (q, n, d) in [(3u64, 1usize, 1usize), (2, 1, 2)] {
            let fam = flat_fam(q, n, d);
            let ctx = fam.ctx().clone();
            let p = ctx.p();
            let k = d * (n + 1);
            let order = fam.num_varieties() as u64;
            let z: Vec<CycInt> = (0..order)
                .map(|w| CycInt::from_int(p, BigInt::from(gram_varieties_root_count(&fam, w, 0))))
                .collect();
            let spec = SpectrumSpec::new(&fam, Side::Varieties);
            let zero = BigInt::zero();
            for ai in 0..order {
                let a = ctx.vector_from_index(k, ai);
                let chi = Character::new(ctx.clone(), a.clone());
                let lam = char_inner_product(&z, &chi).unwrap();
                let case = character_case(&fam, Side::Varieties, &a);
                let expected = [&spec.lam0, &spec.lam1, &zero][case];
                assert_eq!(
                    lam,
                    CycInt::from_int(p, expected.clone()),
                    "q={q} n={n} d={d} a={a:?}"
                );
            }
        }
    }

    #[test]
    fn projector_construction_and_traces() {
        let fam = flat_fam(3, 1, 1);
        let (a, _) = grams(&fam);
        let spec = SpectrumSpec::new(&fam, Side::Points);
        annihilation_check(&a, &spec).unwrap();
        let projs = projectors(&a, &spec).unwrap();
        // trace of the top projector = 1; trace of the kernel = mult2
        assert_eq!(
            projs.projs[0].trace(),
            BigRational::from_integer(BigInt::one())
        );
        assert_eq!(
            projs.projs[2].trace(),
            BigRational::from_integer(BigInt::from(spec.mult2))
        );
    }

    #[test]
    fn projection_norms_full_and_random_sets() {
        for (q, n, d) in [(3u64, 1usize, 1usize), (3, 1, 2)] {
            let fam = flat_fam(q, n, d);
            let (a, b) = grams(&fam);
            for (g, side) in [(a, Side::Points), (b, Side::Varieties)] {
                let spec = SpectrumSpec::new(&fam, side);
                let projs = projectors(&g, &spec).unwrap();

                // full set: middle norm is exactly 0
                let full: Vec<u64> = (0..spec.order).collect();
                let rep = projection_norm_check(&projs, &fam, &full);
                assert!(rep.top_equality);
                assert!(rep.nonnegative_and_sum_to_size);
                assert_eq!(rep.norms[1], "0");

                // random sets
                for trial in 0..60u64 {
                    let mut rng = sampling::trial_rng(99, trial);
                    let sz = sampling::sample_size(&mut rng, spec.order);
                    let s = sampling::sample_subset(&mut rng, spec.order, sz);
                    let rep = projection_norm_check(&projs, &fam, &s);
                    assert!(rep.top_equality, "{side:?} size {sz}");
                    assert!(rep.middle_within_bound, "{side:?} size {sz}");
                    assert!(rep.nonnegative_and_sum_to_size);
                }
            }
        }
    }
}
