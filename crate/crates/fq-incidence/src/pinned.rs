//! Pinned distance sets over F_q^n (odd q) and their verification through
//! the paraboloid incidence chain.
//!
//! For a pin y the pinned distance set is {sum (x_i - y_i)^2 : x in P}.
//! Two conclusions are checked for point sets meeting the size threshold
//! |P| >= (sqrt(1-eps)/eps)(q^{(n+1)/2} - q^{(n-1)/2}):
//!   * the average pinned-distance count over pins in P is at least (1-eps)q;
//!   * at least (1-sqrt(eps))|P| pins see at least (1-sqrt(eps))q distances.
//!
//! Every threshold involving sqrt(eps) or sqrt(1-eps) is decided by the
//! squared-comparison protocol; epsilon is an exact rational and no float
//! appears anywhere.
//!
//! The combinatorial engine behind the corollary is also checked directly:
//! mapping each p in P to the paraboloid variety with vertex (p, 0) is a
//! bijection, and the lifted set P~ = {(p, t) : t in Delta(P, p)} satisfies
//! I(P~, V) = |P|^2 exactly, with the d = 1 incidence bound holding for
//! (P~, V).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    eval_bound_squared, ge_sqrt, incidence_discrepancy, le_sqrt, BoundName, BoundSpec,
    ComparisonRow, ExactComparison,
};
use crate::gf::FieldCtx;
use crate::variety::VarietyFamily;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PinnedError {
    #[error("q = {q} is even; pinned distances need odd characteristic")]
    EvenCharacteristic { q: u64 },
    #[error("epsilon must be a rational strictly between 0 and 1, got {0}")]
    BadEpsilon(String),
    #[error(
        "size precondition failed: |P| = {size_p} is below the threshold for epsilon = {epsilon}"
    )]
    PreconditionFailed { size_p: u64, epsilon: String },
}

/// Configuration for one corollary verification run.
#[derive(Clone, Debug)]
pub struct PinnedConfig {
    pub ctx: Arc<FieldCtx>,
    pub n: usize,
    pub epsilon: BigRational,
    /// Sorted canonical indices into F_q^n.
    pub points: Vec<u64>,
}

impl PinnedConfig {
    pub fn new(
        ctx: Arc<FieldCtx>,
        n: usize,
        epsilon: BigRational,
        points: Vec<u64>,
    ) -> Result<PinnedConfig, PinnedError> {
        if ctx.q().is_multiple_of(2) {
            return Err(PinnedError::EvenCharacteristic { q: ctx.q() });
        }
        if epsilon <= BigRational::zero() || epsilon >= BigRational::one() {
            return Err(PinnedError::BadEpsilon(epsilon.to_string()));
        }
        Ok(PinnedConfig {
            ctx,
            n,
            epsilon,
            points,
        })
    }
}

/// sum (x_i - y_i)^2 as an element index.
fn dist_idx(ctx: &FieldCtx, x: &[u32], y: &[u32]) -> u32 {
    let mut acc = 0u32;
    for (&a, &b) in x.iter().zip(y) {
        let diff = ctx.sub_idx(a, b);
        acc = ctx.add_idx(acc, ctx.mul_idx(diff, diff));
    }
    acc
}

/// Delta(P, y): the set of pinned distances from the pin y to P.
pub fn pinned_distance_set(
    ctx: &FieldCtx,
    n: usize,
    points: &[u64],
    pin: u64,
) -> Result<BTreeSet<u32>, PinnedError> {
    if ctx.q().is_multiple_of(2) {
        return Err(PinnedError::EvenCharacteristic { q: ctx.q() });
    }
    let y = ctx.vector_from_index(n, pin);
    Ok(points
        .iter()
        .map(|&pi| dist_idx(ctx, &ctx.vector_from_index(n, pi), &y))
        .collect())
}

/// The size precondition
/// |P| >= (sqrt(1 - eps)/eps)(q^{(n+1)/2} - q^{(n-1)/2}),
/// decided exactly as (|P| eps)^2 >= (1 - eps) q^{n-1} (q - 1)^2.
pub fn size_precondition_met(q: u64, n: usize, epsilon: &BigRational, size_p: u64) -> bool {
    assert!(n >= 1, "pin space must have positive dimension");
    let lhs = BigRational::from_integer(BigInt::from(size_p)) * epsilon;
    let rhs = (BigRational::one() - epsilon)
        * BigRational::from_integer(BigInt::from(q).pow(n as u32 - 1) * BigInt::from(q - 1).pow(2));
    ge_sqrt(&lhs, &rhs)
}

/// The stronger baseline threshold |P| >= (sqrt(1-eps)/eps) q^{(n+1)/2}
/// (no -q^{(n-1)/2} correction); any P meeting it also meets the weaker
/// precondition above.
pub fn baseline_size_precondition_met(
    q: u64,
    n: usize,
    epsilon: &BigRational,
    size_p: u64,
) -> bool {
    assert!(n >= 1, "pin space must have positive dimension");
    let lhs = BigRational::from_integer(BigInt::from(size_p)) * epsilon;
    let rhs = (BigRational::one() - epsilon)
        * BigRational::from_integer(BigInt::from(q).pow(n as u32 + 1));
    ge_sqrt(&lhs, &rhs)
}

/// Smallest |P| <= q^n meeting the size precondition, when one exists.
pub fn min_admissible_size(q: u64, n: usize, epsilon: &BigRational) -> Option<u64> {
    let total = u64::try_from((q as u128).pow(n as u32)).ok()?;
    let mut lo = 0u64;
    let mut hi = total + 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if size_precondition_met(q, n, epsilon, mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (lo <= total).then_some(lo)
}

#[derive(Clone, Debug, Serialize)]
pub struct PinnedReport {
    pub q: u64,
    pub n: usize,
    pub epsilon: String,
    #[serde(rename = "sizeP")]
    pub size_p: u64,
    pub precondition_met: bool,
    /// sum over pins y in P of |Delta(P, y)|.
    pub sum_pinned: u64,
    /// sum_pinned / |P| as an exact rational.
    pub average_pinned: String,
    /// average >= (1 - eps) q, decided exactly.
    pub average_ok: bool,
    /// Smallest integer distance count that qualifies a pin for Q, i.e.
    /// the least s with s >= (1 - sqrt(eps)) q.
    pub threshold: u64,
    /// |Q| where Q = {y in P : |Delta(P,y)| >= threshold}.
    #[serde(rename = "countQ")]
    pub count_q: u64,
    /// |Q| >= (1 - sqrt(eps)) |P|, decided by the squared protocol.
    pub count_ok: bool,
    /// |Delta(P, y)| value -> number of pins.
    pub histogram: BTreeMap<u64, u64>,
}

/// Brute-force statistics for the corollary; works whether or not the size
/// precondition holds (report-only mode).
pub fn pinned_stats(cfg: &PinnedConfig) -> Result<PinnedReport, PinnedError> {
    let ctx = &cfg.ctx;
    let q = ctx.q();
    if q.is_multiple_of(2) {
        return Err(PinnedError::EvenCharacteristic { q });
    }
    let size_p = cfg.points.len() as u64;
    let coords: Vec<Vec<u32>> = cfg
        .points
        .iter()
        .map(|&pi| ctx.vector_from_index(cfg.n, pi))
        .collect();

    let mut sum_pinned = 0u64;
    let mut count_q = 0u64;
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();

    // membership threshold |Delta| >= (1 - sqrt(eps)) q, decided as
    // (q - |Delta|) <= sqrt(eps q^2); |Delta| <= q always, so the left side
    // is nonnegative.
    let eps_q_sq = &cfg.epsilon * BigRational::from_integer(BigInt::from(q).pow(2));
    let qualifies = |sz: u64| {
        let gap = BigRational::from_integer(BigInt::from(q - sz));
        le_sqrt(&gap, &eps_q_sq)
    };
    let threshold = (0..=q).find(|&s| qualifies(s)).expect("s = q qualifies");

    for y in &coords {
        let mut delta: BTreeSet<u32> = BTreeSet::new();
        for x in &coords {
            delta.insert(dist_idx(ctx, x, y));
        }
        let sz = delta.len() as u64;
        sum_pinned += sz;
        *histogram.entry(sz).or_insert(0) += 1;
        count_q += (sz >= threshold) as u64;
    }

    // average >= (1 - eps) q  <=>  sum >= (1 - eps) q |P|
    let average_ok = BigRational::from_integer(BigInt::from(sum_pinned))
        >= (BigRational::one() - &cfg.epsilon)
            * BigRational::from_integer(BigInt::from(q) * BigInt::from(size_p));

    // |Q| >= (1 - sqrt(eps)) |P|  <=>  (|P| - |Q|) <= sqrt(eps |P|^2)
    let count_gap = BigRational::from_integer(BigInt::from(size_p - count_q));
    let eps_p_sq = &cfg.epsilon * BigRational::from_integer(BigInt::from(size_p).pow(2));
    let count_ok = le_sqrt(&count_gap, &eps_p_sq);

    let average_pinned = if size_p == 0 {
        "0".to_string()
    } else {
        BigRational::new(BigInt::from(sum_pinned), BigInt::from(size_p)).to_string()
    };
    Ok(PinnedReport {
        q,
        n: cfg.n,
        epsilon: cfg.epsilon.to_string(),
        size_p,
        precondition_met: size_precondition_met(q, cfg.n, &cfg.epsilon, size_p),
        sum_pinned,
        average_pinned,
        average_ok,
        threshold,
        count_q,
        count_ok,
        histogram,
    })
}

/// Corollary verification: requires the size precondition, then asserts
/// both conclusions.
pub fn verify_pinned_corollary(cfg: &PinnedConfig) -> Result<PinnedReport, PinnedError> {
    let report = pinned_stats(cfg)?;
    if !report.precondition_met {
        return Err(PinnedError::PreconditionFailed {
            size_p: report.size_p,
            epsilon: report.epsilon,
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    #[serde(rename = "sizeP")]
    pub size_p: u64,
    #[serde(rename = "sizePTilde")]
    pub size_p_tilde: u64,
    pub incidences: u64,
    /// I(P~, V) = |P|^2: each ordered pair of base points contributes
    /// exactly one incidence.
    pub identity_holds: bool,
    /// the pin -> variety map is injective, so |V| = |P|.
    pub bijection_ok: bool,
    pub bound_row: ComparisonRow,
}

/// The incidence chain: V = paraboloid varieties of P, P~ = the lifted
/// pinned-distance graph. Verifies I(P~, V) = |P|^2 and the d = 1 bound.
pub fn pinned_incidence_chain(
    ctx: Arc<FieldCtx>,
    n: usize,
    points: &[u64],
) -> Result<ChainReport, PinnedError> {
    let q = ctx.q();
    if q.is_multiple_of(2) {
        return Err(PinnedError::EvenCharacteristic { q });
    }
    let fam = VarietyFamily::paraboloid_family(ctx.clone(), n).expect("odd q checked");
    let coords: Vec<Vec<u32>> = points
        .iter()
        .map(|&pi| ctx.vector_from_index(n, pi))
        .collect();

    // the pin bijection p <-> V(p)
    let ids: Vec<u64> = coords
        .iter()
        .map(|p| fam.id_index(&fam.paraboloid_id(p).expect("paraboloid family")))
        .collect();
    let distinct: BTreeSet<u64> = ids.iter().copied().collect();
    let bijection_ok = distinct.len() == ids.len();

    // P~ as (base point, distance) pairs
    let mut p_tilde: Vec<(usize, u32)> = Vec::new();
    for (pi, p) in coords.iter().enumerate() {
        let mut delta: BTreeSet<u32> = BTreeSet::new();
        for x in &coords {
            delta.insert(dist_idx(&ctx, x, p));
        }
        for t in delta {
            p_tilde.push((pi, t));
        }
    }
    let size_p = points.len() as u64;
    let size_p_tilde = p_tilde.len() as u64;

    // I(P~, V): (p, t) lies on V(y) iff t = dist(p, y)
    let mut incidences = 0u64;
    for y in &coords {
        for &(pi, t) in &p_tilde {
            incidences += (dist_idx(&ctx, &coords[pi], y) == t) as u64;
        }
    }
    let identity_holds = incidences == size_p * size_p;

    let delta = incidence_discrepancy(q, 1, incidences, size_p_tilde, size_p);
    let spec = BoundSpec::MainD1 {
        q,
        n: n as u32,
        size_p: size_p_tilde,
        size_v: size_p,
    };
    let cmp = ExactComparison::new(
        BoundName::MainD1,
        &delta * &delta,
        eval_bound_squared(&spec),
    );

    Ok(ChainReport {
        size_p,
        size_p_tilde,
        incidences,
        identity_holds,
        bijection_ok,
        bound_row: ComparisonRow::from(&cmp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{count_incidences, PointSet, VarietySet};
    use crate::sampling;

    fn f(q: u64) -> Arc<FieldCtx> {
        FieldCtx::new(q, 1, None).unwrap()
    }

    fn eps(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn distance_set_examples() {
        let ctx = f(5);
        // P = {y} -> {0}
        let d = pinned_distance_set(&ctx, 1, &[3], 3).unwrap();
        assert_eq!(d, BTreeSet::from([0]));

        // F_5, n=1, P = {0,1,2}, y = 0 -> {0, 1, 4}
        let d = pinned_distance_set(&ctx, 1, &[0, 1, 2], 0).unwrap();
        assert_eq!(d, BTreeSet::from([0, 1, 4]));

        assert_eq!(
            pinned_distance_set(&f(2), 1, &[0], 0).unwrap_err(),
            PinnedError::EvenCharacteristic { q: 2 }
        );
    }

    #[test]
    fn full_space_sees_every_distance() {
        // P = all of F_q^n, n = 2: every value is a sum of two squares
        for q in [3u64, 5, 7] {
            let ctx = f(q);
            let all: Vec<u64> = (0..q * q).collect();
            for pin in 0..q * q {
                let d = pinned_distance_set(&ctx, 2, &all, pin).unwrap();
                assert_eq!(d.len() as u64, q, "q={q} pin={pin}");
            }
        }
    }

    #[test]
    fn precondition_thresholds() {
        // q=7, n=2, eps=1/2: threshold = sqrt(2) (7^{3/2} - 7^{1/2}) ~ 22.45
        let e = eps(1, 2);
        assert_eq!(min_admissible_size(7, 2, &e), Some(23));
        assert!(!size_precondition_met(7, 2, &e, 22));
        assert!(size_precondition_met(7, 2, &e, 23));

        // q=5, n=2, eps=1/4: threshold ~ 30.98 exceeds q^n = 25
        let e4 = eps(1, 4);
        assert_eq!(min_admissible_size(5, 2, &e4), None);
        assert!(!size_precondition_met(5, 2, &e4, 25));

        // q=11, n=2, eps=1/4: threshold ~ 114.9 <= 121
        assert_eq!(min_admissible_size(11, 2, &e4), Some(115));
    }

    #[test]
    fn weaker_precondition_than_baseline() {
        // the threshold with the -q^{(n-1)/2} correction admits every set
        // the baseline admits, and strictly more for some sizes
        let mut strictly_weaker_somewhere = false;
        for q in [5u64, 7, 11] {
            for eps in [eps(1, 4), eps(1, 2), eps(3, 4)] {
                for s in 0..=q * q {
                    let base = baseline_size_precondition_met(q, 2, &eps, s);
                    let cor = size_precondition_met(q, 2, &eps, s);
                    assert!(!base || cor, "q={q} s={s}");
                    strictly_weaker_somewhere |= cor && !base;
                }
            }
        }
        assert!(strictly_weaker_somewhere);
    }

    #[test]
    fn corollary_holds_on_random_draws() {
        let ctx = f(7);
        let e = eps(1, 2);
        let min = min_admissible_size(7, 2, &e).unwrap();
        for trial in 0..100u64 {
            let mut rng = sampling::trial_rng(0x0c0, trial);
            let pts = sampling::sample_subset(&mut rng, 49, min as usize);
            let cfg = PinnedConfig::new(ctx.clone(), 2, e.clone(), pts).unwrap();
            let rep = verify_pinned_corollary(&cfg).unwrap();
            assert!(rep.average_ok, "trial {trial}");
            assert!(rep.count_ok, "trial {trial}");
            assert_eq!(rep.histogram.values().sum::<u64>(), rep.size_p);
            // |Delta(P, y)| <= min(|P|, q) always
            let cap = rep.size_p.min(rep.q);
            assert!(rep.histogram.keys().all(|&sz| sz <= cap));
        }
    }

    #[test]
    fn full_space_average_is_q() {
        let ctx = f(5);
        let all: Vec<u64> = (0..25).collect();
        let cfg = PinnedConfig::new(ctx, 2, eps(1, 2), all).unwrap();
        let rep = verify_pinned_corollary(&cfg).unwrap();
        assert_eq!(rep.sum_pinned, 25 * 5);
        assert!(rep.average_ok);
        assert_eq!(rep.count_q, 25);
    }

    #[test]
    fn precondition_failure_reports() {
        let ctx = f(7);
        let cfg = PinnedConfig::new(ctx, 2, eps(1, 2), vec![0, 1, 2]).unwrap();
        assert!(matches!(
            verify_pinned_corollary(&cfg),
            Err(PinnedError::PreconditionFailed { size_p: 3, .. })
        ));
        // report-only mode still emits statistics
        let rep = pinned_stats(&cfg).unwrap();
        assert!(!rep.precondition_met);
        assert_eq!(rep.size_p, 3);
    }

    #[test]
    fn chain_identity_singleton() {
        let ctx = f(5);
        let rep = pinned_incidence_chain(ctx, 1, &[2]).unwrap();
        assert_eq!(rep.size_p_tilde, 1);
        assert_eq!(rep.incidences, 1);
        assert!(rep.identity_holds);
        assert!(rep.bijection_ok);
    }

    #[test]
    fn chain_identity_random_sets() {
        let ctx = f(5);
        for trial in 0..30u64 {
            let mut rng = sampling::trial_rng(0xabc, trial);
            let pts = sampling::sample_subset(&mut rng, 25, 10);
            let rep = pinned_incidence_chain(ctx.clone(), 2, &pts).unwrap();
            assert!(rep.identity_holds, "trial {trial}");
            assert_eq!(rep.incidences, 100);
            assert!(rep.bijection_ok);
            assert_eq!(rep.bound_row.verdict, crate::bounds::Verdict::Holds);
        }
    }

    #[test]
    fn chain_count_matches_variety_membership_route() {
        // The fast distance-table route must agree with direct variety
        // membership counting.
        let ctx = f(5);
        let pts: Vec<u64> = vec![0, 3, 7, 12, 24];
        let rep = pinned_incidence_chain(ctx.clone(), 2, &pts).unwrap();

        let fam = VarietyFamily::paraboloid_family(ctx.clone(), 2).unwrap();
        let mut vids: Vec<u64> = pts
            .iter()
            .map(|&pi| {
                let p = ctx.vector_from_index(2, pi);
                fam.id_index(&fam.paraboloid_id(&p).unwrap())
            })
            .collect();
        vids.sort_unstable();
        let v = VarietySet::new(vids, &fam).unwrap();

        let mut tilde: Vec<u64> = Vec::new();
        for &pi in &pts {
            let p = ctx.vector_from_index(2, pi);
            for t in pinned_distance_set(&ctx, 2, &pts, pi).unwrap() {
                let mut coords = p.clone();
                coords.push(t);
                tilde.push(ctx.vector_index(&coords));
            }
        }
        tilde.sort_unstable();
        let p_tilde = PointSet::new(tilde, &fam).unwrap();

        assert_eq!(count_incidences(&fam, &p_tilde, &v), rep.incidences);
        assert_eq!(rep.incidences, 25);
    }
}
