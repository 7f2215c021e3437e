//! Closed-form incidence bound evaluators and the square-root-free
//! comparison protocol.
//!
//! Every bound here has the shape |I - |P||V|/q^d| <= s * sqrt(t) with
//! rational s, t >= 0. Comparisons are performed on squares: the evaluators
//! return the exact rational square of the right-hand side and the checkers
//! compare Delta^2 against it. No tolerance parameter exists anywhere in
//! this module.
//!
//! Bound names (CLI-facing):
//!   main_d1           the d = 1 branch of the main point-variety bound
//!   main_dge2         the d >= 2 branch
//!   main_intermediate the sharper product form the d >= 2 branch rounds up
//!   phuong            the q^{dn/2} sqrt(|P||V|) comparator
//!   flats_cor         the main bound specialized to graph flats
//!   flats_thm_d1      the all-flats bound, d = 1 branch
//!   flats_thm_dge2    the all-flats bound, d >= 2 branch
//!   lund_leading      leading term of the BIBD-based all-flats bound
//!                     (informational: its 1 + o_q(1) factor is not
//!                     computable, so it is never falsified)
//!   expander_generic  the generic biregular mixing bound with lambda_3^2
//!                     supplied explicitly

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::str::FromStr;
use thiserror::Error;

use crate::incidence::{count_incidences, IncidenceMatrix, PointSet, VarietySet};
use crate::variety::VarietyFamily;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid range: binomial parameters n={n}, k={k}")]
    InvalidRange { n: i64, k: i64 },
    #[error("unknown bound name {0:?}")]
    UnknownBound(String),
    #[error("bound {name} requires d {requires}, family has d = {d}")]
    WrongBranch {
        name: &'static str,
        requires: &'static str,
        d: usize,
    },
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qpow(q: u64, e: u32) -> BigInt {
    BigInt::from(q).pow(e)
}

/// Gaussian binomial [n choose k]_q by the exact product formula
/// prod_{i=0}^{k-1} (q^{n-i} - 1) / prod_{i=0}^{k-1} (q^{k-i} - 1).
pub fn gaussian_binomial(n: i64, k: i64, q: u64) -> Result<BigInt, BoundsError> {
    if n < 0 || k < 0 || k > n {
        return Err(BoundsError::InvalidRange { n, k });
    }
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for i in 0..k as u32 {
        numer *= qpow(q, n as u32 - i) - 1;
        denom *= qpow(q, k as u32 - i) - 1;
    }
    debug_assert!((&numer % &denom).is_zero());
    Ok(numer / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    MainD1,
    MainDge2,
    MainIntermediate,
    Phuong,
    FlatsCor,
    FlatsThmD1,
    FlatsThmDge2,
    LundLeading,
    ExpanderGeneric,
}

impl BoundName {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::MainD1 => "main_d1",
            BoundName::MainDge2 => "main_dge2",
            BoundName::MainIntermediate => "main_intermediate",
            BoundName::Phuong => "phuong",
            BoundName::FlatsCor => "flats_cor",
            BoundName::FlatsThmD1 => "flats_thm_d1",
            BoundName::FlatsThmDge2 => "flats_thm_dge2",
            BoundName::LundLeading => "lund_leading",
            BoundName::ExpanderGeneric => "expander_generic",
        }
    }

    /// lund_leading drops an uncomputable 1 + o_q(1) factor; a violation of
    /// its leading term is information, not a falsification.
    pub fn falsifiable(&self) -> bool {
        !matches!(self, BoundName::LundLeading)
    }
}

impl FromStr for BoundName {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "main_d1" => BoundName::MainD1,
            "main_dge2" => BoundName::MainDge2,
            "main_intermediate" => BoundName::MainIntermediate,
            "phuong" => BoundName::Phuong,
            "flats_cor" => BoundName::FlatsCor,
            "flats_thm_d1" => BoundName::FlatsThmD1,
            "flats_thm_dge2" => BoundName::FlatsThmDge2,
            "lund_leading" => BoundName::LundLeading,
            "expander_generic" => BoundName::ExpanderGeneric,
            other => return Err(BoundsError::UnknownBound(other.to_string())),
        })
    }
}

/// A bound instance with its parameters. Sizes are |P| and |V| (or |F|).
#[derive(Debug, Clone)]
pub enum BoundSpec {
    MainD1 {
        q: u64,
        n: u32,
        size_p: u64,
        size_v: u64,
    },
    MainDge2 {
        q: u64,
        n: u32,
        size_p: u64,
        size_v: u64,
    },
    MainIntermediate {
        q: u64,
        n: u32,
        d: u32,
        size_p: u64,
        size_v: u64,
    },
    Phuong {
        q: u64,
        n: u32,
        d: u32,
        size_p: u64,
        size_v: u64,
    },
    FlatsCor {
        q: u64,
        n: u32,
        d: u32,
        size_p: u64,
        size_f: u64,
    },
    FlatsThmD1 {
        q: u64,
        n: u32,
        size_p: u64,
        size_f: u64,
    },
    FlatsThmDge2 {
        q: u64,
        n: u32,
        d: u32,
        size_p: u64,
        size_f: u64,
    },
    LundLeading {
        q: u64,
        n: u32,
        d: u32,
        size_p: u64,
        size_f: u64,
    },
    /// |e(X,Y) - a|X||Y|/|B|| <= lambda_3 sqrt(|X||Y|(1-|X|/|A|)(1-|Y|/|B|)),
    /// with lambda_3 passed as its square to stay square-root-free.
    ExpanderGeneric {
        lambda3_sq: BigRational,
        size_x: u64,
        size_y: u64,
        size_a: u64,
        size_b: u64,
    },
}

impl BoundSpec {
    pub fn name(&self) -> BoundName {
        match self {
            BoundSpec::MainD1 { .. } => BoundName::MainD1,
            BoundSpec::MainDge2 { .. } => BoundName::MainDge2,
            BoundSpec::MainIntermediate { .. } => BoundName::MainIntermediate,
            BoundSpec::Phuong { .. } => BoundName::Phuong,
            BoundSpec::FlatsCor { .. } => BoundName::FlatsCor,
            BoundSpec::FlatsThmD1 { .. } => BoundName::FlatsThmD1,
            BoundSpec::FlatsThmDge2 { .. } => BoundName::FlatsThmDge2,
            BoundSpec::LundLeading { .. } => BoundName::LundLeading,
            BoundSpec::ExpanderGeneric { .. } => BoundName::ExpanderGeneric,
        }
    }

    /// Build the named bound for a point-variety (or point-flat) experiment.
    pub fn for_sizes(
        name: BoundName,
        q: u64,
        n: u32,
        d: u32,
        size_p: u64,
        size_v: u64,
    ) -> Result<BoundSpec, BoundsError> {
        Ok(match name {
            BoundName::MainD1 => {
                if d != 1 {
                    return Err(BoundsError::WrongBranch {
                        name: "main_d1",
                        requires: "= 1",
                        d: d as usize,
                    });
                }
                BoundSpec::MainD1 {
                    q,
                    n,
                    size_p,
                    size_v,
                }
            }
            BoundName::MainDge2 => {
                if d < 2 {
                    return Err(BoundsError::WrongBranch {
                        name: "main_dge2",
                        requires: ">= 2",
                        d: d as usize,
                    });
                }
                BoundSpec::MainDge2 {
                    q,
                    n,
                    size_p,
                    size_v,
                }
            }
            BoundName::MainIntermediate => BoundSpec::MainIntermediate {
                q,
                n,
                d,
                size_p,
                size_v,
            },
            BoundName::Phuong => BoundSpec::Phuong {
                q,
                n,
                d,
                size_p,
                size_v,
            },
            BoundName::FlatsCor => BoundSpec::FlatsCor {
                q,
                n,
                d,
                size_p,
                size_f: size_v,
            },
            BoundName::FlatsThmD1 => {
                if d != 1 {
                    return Err(BoundsError::WrongBranch {
                        name: "flats_thm_d1",
                        requires: "= 1",
                        d: d as usize,
                    });
                }
                BoundSpec::FlatsThmD1 {
                    q,
                    n,
                    size_p,
                    size_f: size_v,
                }
            }
            BoundName::FlatsThmDge2 => {
                if d < 2 {
                    return Err(BoundsError::WrongBranch {
                        name: "flats_thm_dge2",
                        requires: ">= 2",
                        d: d as usize,
                    });
                }
                BoundSpec::FlatsThmDge2 {
                    q,
                    n,
                    d,
                    size_p,
                    size_f: size_v,
                }
            }
            BoundName::LundLeading => BoundSpec::LundLeading {
                q,
                n,
                d,
                size_p,
                size_f: size_v,
            },
            BoundName::ExpanderGeneric => {
                return Err(BoundsError::UnknownBound(
                    "expander_generic needs explicit |A|, |B|, lambda3^2".into(),
                ))
            }
        })
    }

    /// The stated main-theorem branch for a family of codimension d.
    pub fn stated_main(q: u64, n: u32, d: u32, size_p: u64, size_v: u64) -> BoundSpec {
        if d == 1 {
            BoundSpec::MainD1 {
                q,
                n,
                size_p,
                size_v,
            }
        } else {
            BoundSpec::MainDge2 {
                q,
                n,
                size_p,
                size_v,
            }
        }
    }
}

/// Exact rational square of the bound's right-hand side.
pub fn eval_bound_squared(spec: &BoundSpec) -> BigRational {
    match spec {
        // q^n (1 - 1/q)^2 |P||V|
        BoundSpec::MainD1 {
            q,
            n,
            size_p,
            size_v,
        } => {
            let factor = BigRational::new(BigInt::from(*q - 1).pow(2), qpow(*q, 2));
            BigRational::from_integer(qpow(*q, *n)) * factor * rat(*size_p) * rat(*size_v)
        }
        // q^n |P||V| (1 + |V|/q)
        BoundSpec::MainDge2 {
            q,
            n,
            size_p,
            size_v,
        } => {
            let paren =
                BigRational::one() + BigRational::new(BigInt::from(*size_v), BigInt::from(*q));
            BigRational::from_integer(qpow(*q, *n)) * rat(*size_p) * rat(*size_v) * paren
        }
        // q^n (1 - 1/q^d) |P||V| (1 - 1/q + |V|(q^{d-1} - 1)/q^d)
        BoundSpec::MainIntermediate {
            q,
            n,
            d,
            size_p,
            size_v,
        } => {
            let qd = qpow(*q, *d);
            let lead = BigRational::new(&qd - 1, qd.clone());
            let paren = BigRational::new(BigInt::from(*q) - 1, BigInt::from(*q))
                + BigRational::new(BigInt::from(*size_v) * (qpow(*q, *d - 1) - 1), qd);
            BigRational::from_integer(qpow(*q, *n)) * lead * rat(*size_p) * rat(*size_v) * paren
        }
        // q^{dn} |P||V|
        BoundSpec::Phuong {
            q,
            n,
            d,
            size_p,
            size_v,
        } => BigRational::from_integer(qpow(*q, *d * *n)) * rat(*size_p) * rat(*size_v),
        // the main bound applied to the graph-flat family
        BoundSpec::FlatsCor {
            q,
            n,
            d,
            size_p,
            size_f,
        } => eval_bound_squared(&BoundSpec::stated_main(*q, *n, *d, *size_p, *size_f)),
        // q^n (1 - 1/q)^2 |P||F| ([n+1 choose 1]_q / q^n)
        BoundSpec::FlatsThmD1 {
            q,
            n,
            size_p,
            size_f,
        } => {
            let gauss = gaussian_binomial(*n as i64 + 1, 1, *q).expect("valid range");
            let factor = BigRational::new(BigInt::from(*q - 1).pow(2), qpow(*q, 2));
            let paren = BigRational::new(gauss, qpow(*q, *n));
            BigRational::from_integer(qpow(*q, *n)) * factor * rat(*size_p) * rat(*size_f) * paren
        }
        // q^n |P||F| (|F|/q + [n+d choose d]_q / q^{dn})
        BoundSpec::FlatsThmDge2 {
            q,
            n,
            d,
            size_p,
            size_f,
        } => {
            let gauss = gaussian_binomial((*n + *d) as i64, *d as i64, *q).expect("valid range");
            let paren = BigRational::new(BigInt::from(*size_f), BigInt::from(*q))
                + BigRational::new(gauss, qpow(*q, *d * *n));
            BigRational::from_integer(qpow(*q, *n)) * rat(*size_p) * rat(*size_f) * paren
        }
        // q^{dn} |P||F|, leading term only
        BoundSpec::LundLeading {
            q,
            n,
            d,
            size_p,
            size_f,
        } => BigRational::from_integer(qpow(*q, *d * *n)) * rat(*size_p) * rat(*size_f),
        // lambda3^2 |X||Y| (1 - |X|/|A|)(1 - |Y|/|B|)
        BoundSpec::ExpanderGeneric {
            lambda3_sq,
            size_x,
            size_y,
            size_a,
            size_b,
        } => {
            let fx =
                BigRational::one() - BigRational::new(BigInt::from(*size_x), BigInt::from(*size_a));
            let fy =
                BigRational::one() - BigRational::new(BigInt::from(*size_y), BigInt::from(*size_b));
            lambda3_sq.clone() * rat(*size_x) * rat(*size_y) * fx * fy
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
}

/// The exact squared comparison |Delta| <= sqrt(bound^2).
#[derive(Debug, Clone)]
pub struct ExactComparison {
    pub bound: BoundName,
    pub lhs_squared: BigRational,
    pub rhs_squared: BigRational,
    pub verdict: Verdict,
    /// Delta^2 / bound^2 when the bound is nonzero.
    pub ratio: Option<BigRational>,
    /// false for lund_leading (asymptotic leading term only).
    pub falsifiable: bool,
}

impl ExactComparison {
    pub fn new(
        bound: BoundName,
        lhs_squared: BigRational,
        rhs_squared: BigRational,
    ) -> ExactComparison {
        let verdict = if lhs_squared <= rhs_squared {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        let ratio = if rhs_squared.is_zero() {
            None
        } else {
            Some(&lhs_squared / &rhs_squared)
        };
        ExactComparison {
            bound,
            lhs_squared,
            rhs_squared,
            verdict,
            ratio,
            falsifiable: bound.falsifiable(),
        }
    }
}

/// Report row shape {bound, Delta^2, bound^2, ratio, verdict}.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub bound: BoundName,
    pub delta_squared: String,
    pub bound_squared: String,
    pub ratio: Option<String>,
    pub verdict: Verdict,
    pub falsifiable: bool,
}

impl From<&ExactComparison> for ComparisonRow {
    fn from(c: &ExactComparison) -> ComparisonRow {
        ComparisonRow {
            bound: c.bound,
            delta_squared: c.lhs_squared.to_string(),
            bound_squared: c.rhs_squared.to_string(),
            ratio: c.ratio.as_ref().map(|r| r.to_string()),
            verdict: c.verdict,
            falsifiable: c.falsifiable,
        }
    }
}

/// CSV projection of comparison rows (a lossless view of the JSON rows).
pub fn rows_to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("bound,delta_squared,bound_squared,ratio,verdict,falsifiable\n");
    for r in rows {
        let verdict = match r.verdict {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.bound.as_str(),
            r.delta_squared,
            r.bound_squared,
            r.ratio.as_deref().unwrap_or(""),
            verdict,
            r.falsifiable
        ));
    }
    out
}

/// Delta = I - |P||V|/q^d as an exact rational.
pub fn incidence_discrepancy(
    q: u64,
    d: u32,
    incidences: u64,
    size_p: u64,
    size_v: u64,
) -> BigRational {
    BigRational::from_integer(BigInt::from(incidences))
        - BigRational::new(BigInt::from(size_p) * BigInt::from(size_v), qpow(q, d))
}

/// Count I(P, V), form Delta, and compare Delta^2 against the named bound.
/// Pass the incidence matrix when one is already built; otherwise counting
/// falls back to direct membership evaluation.
pub fn check_incidence_bound(
    fam: &VarietyFamily,
    p: &PointSet,
    v: &VarietySet,
    name: BoundName,
    t: Option<&IncidenceMatrix>,
) -> Result<ExactComparison, BoundsError> {
    let incidences = match t {
        Some(t) => t.count(v, p),
        None => count_incidences(fam, p, v),
    };
    let q = fam.ctx().q();
    let n = fam.n() as u32;
    let d = fam.d() as u32;
    let spec = BoundSpec::for_sizes(name, q, n, d, p.len() as u64, v.len() as u64)?;
    let delta = incidence_discrepancy(q, d, incidences, p.len() as u64, v.len() as u64);
    Ok(ExactComparison::new(
        name,
        &delta * &delta,
        eval_bound_squared(&spec),
    ))
}

/// The d = 1 branch equals (1 - 1/q) times the phuong comparator, exactly:
/// main_d1^2 * q^2 = phuong^2 * (q-1)^2.
pub fn d1_factor_identity(q: u64, n: u32, size_p: u64, size_v: u64) -> bool {
    let main = eval_bound_squared(&BoundSpec::MainD1 {
        q,
        n,
        size_p,
        size_v,
    });
    let phuong = eval_bound_squared(&BoundSpec::Phuong {
        q,
        n,
        d: 1,
        size_p,
        size_v,
    });
    let factor = BigRational::new(BigInt::from(q - 1).pow(2), qpow(q, 2));
    main == phuong * factor
}

/// d >= 2 regime: the main bound improves on the phuong comparator exactly
/// when |V| < q^{(d-1)n+1} - q.
pub fn dge2_improvement_regime(q: u64, n: u32, d: u32, size_p: u64, size_v: u64) -> (bool, bool) {
    let in_regime = BigInt::from(size_v) < qpow(q, (d - 1) * n + 1) - BigInt::from(q);
    let main = eval_bound_squared(&BoundSpec::MainDge2 {
        q,
        n,
        size_p,
        size_v,
    });
    let phuong = eval_bound_squared(&BoundSpec::Phuong {
        q,
        n,
        d,
        size_p,
        size_v,
    });
    let improves = if size_p == 0 || size_v == 0 {
        // both sides degenerate to zero
        in_regime
    } else {
        main < phuong
    };
    (in_regime, improves)
}

// ----- square-root-free comparison protocol -----

/// x <= sqrt(t) with t >= 0, decided exactly on squares.
pub fn le_sqrt(x: &BigRational, t: &BigRational) -> bool {
    debug_assert!(!t.is_negative());
    if x.is_negative() {
        return true;
    }
    &(x * x) <= t
}

/// x >= sqrt(t) with t >= 0, decided exactly on squares.
pub fn ge_sqrt(x: &BigRational, t: &BigRational) -> bool {
    debug_assert!(!t.is_negative());
    if x.is_negative() {
        return false;
    }
    &(x * x) >= t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::sampling;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bound_values_at_3_1_1() {
        // main_d1 at q=3, n=1, |P|=|V|=9: 3 * (2/3)^2 * 81 = 108
        let main = eval_bound_squared(&BoundSpec::MainD1 {
            q: 3,
            n: 1,
            size_p: 9,
            size_v: 9,
        });
        assert_eq!(main, r(108, 1));

        // phuong at the same parameters: 3 * 81 = 243
        let phuong = eval_bound_squared(&BoundSpec::Phuong {
            q: 3,
            n: 1,
            d: 1,
            size_p: 9,
            size_v: 9,
        });
        assert_eq!(phuong, r(243, 1));

        // and the exact (1 - 1/q) factor relation between them
        assert!(d1_factor_identity(3, 1, 9, 9));
        assert!(d1_factor_identity(5, 2, 17, 113));

        // |P| = 0 gives a zero bound
        let zero = eval_bound_squared(&BoundSpec::MainD1 {
            q: 3,
            n: 1,
            size_p: 0,
            size_v: 9,
        });
        assert!(zero.is_zero());
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 2).unwrap(), BigInt::from(3));
        assert_eq!(gaussian_binomial(3, 2, 2).unwrap(), BigInt::from(7));
        assert_eq!(gaussian_binomial(3, 1, 3).unwrap(), BigInt::from(13));
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), BigInt::from(35));
        for n in 0..6 {
            assert_eq!(gaussian_binomial(n, n, 5).unwrap(), BigInt::one());
            assert_eq!(gaussian_binomial(n, 0, 5).unwrap(), BigInt::one());
        }
        assert!(gaussian_binomial(2, 3, 2).is_err());
        assert!(gaussian_binomial(-1, 0, 2).is_err());
    }

    #[test]
    fn gaussian_symmetry() {
        // [m choose k]_q = [m choose m-k]_q, so the subspace count can be
        // taken over either side of the flat
        for q in [2u64, 3, 5] {
            for m in 0..=8i64 {
                for k in 0..=m {
                    assert_eq!(
                        gaussian_binomial(m, k, q).unwrap(),
                        gaussian_binomial(m, m - k, q).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn gaussian_pascal_recurrence() {
        // [n k]_q = [n-1 k-1]_q + q^k [n-1 k]_q
        for q in [2u64, 3, 5, 7] {
            for n in 1..=8i64 {
                for k in 1..n {
                    let lhs = gaussian_binomial(n, k, q).unwrap();
                    let rhs = gaussian_binomial(n - 1, k - 1, q).unwrap()
                        + BigInt::from(q).pow(k as u32) * gaussian_binomial(n - 1, k, q).unwrap();
                    assert_eq!(lhs, rhs, "n={n} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn regime_dge2_improvement() {
        // |V| < q^{(d-1)n+1} - q = 3^2 - 3 = 6 at (3,1,2); the improvement
        // is an exact iff for nonempty sets
        for v in 0..20u64 {
            let (in_regime, improves) = dge2_improvement_regime(3, 1, 2, 5, v);
            assert_eq!(in_regime, v < 6);
            if v > 0 {
                assert_eq!(improves, in_regime, "|V| = {v}");
            }
        }
    }

    #[test]
    fn intermediate_below_stated_for_dge2() {
        for q in [2u64, 3, 5] {
            for n in 1..=2u32 {
                for d in 2..=3u32 {
                    for sp in [0u64, 1, 7, 100] {
                        for sv in [0u64, 1, 9, 50] {
                            let inter = eval_bound_squared(&BoundSpec::MainIntermediate {
                                q,
                                n,
                                d,
                                size_p: sp,
                                size_v: sv,
                            });
                            let stated = eval_bound_squared(&BoundSpec::MainDge2 {
                                q,
                                n,
                                size_p: sp,
                                size_v: sv,
                            });
                            assert!(inter <= stated, "q={q} n={n} d={d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn intermediate_equals_main_at_d1() {
        for (sp, sv) in [(3u64, 4u64), (9, 9), (1, 27)] {
            let inter = eval_bound_squared(&BoundSpec::MainIntermediate {
                q: 3,
                n: 1,
                d: 1,
                size_p: sp,
                size_v: sv,
            });
            let main = eval_bound_squared(&BoundSpec::MainD1 {
                q: 3,
                n: 1,
                size_p: sp,
                size_v: sv,
            });
            assert_eq!(inter, main);
        }
    }

    #[test]
    fn full_sets_have_zero_discrepancy() {
        use crate::incidence::{PointSet, VarietySet};
        use crate::variety::VarietyFamily;
        let ctx = FieldCtx::new(3, 1, None).unwrap();
        let fam = VarietyFamily::flat_family(ctx, 1, 1).unwrap();
        let p = PointSet::all(&fam);
        let v = VarietySet::all(&fam);
        let cmp = check_incidence_bound(&fam, &p, &v, BoundName::MainD1, None).unwrap();
        assert!(cmp.lhs_squared.is_zero());
        assert_eq!(cmp.verdict, Verdict::Holds);
    }

    #[test]
    fn random_draws_hold_main_d1() {
        use crate::incidence::{PointSet, VarietySet};
        use crate::variety::VarietyFamily;
        let ctx = FieldCtx::new(3, 1, None).unwrap();
        let fam = VarietyFamily::flat_family(ctx, 1, 1).unwrap();
        let np = fam.num_points() as u64;
        let nv = fam.num_varieties() as u64;
        for trial in 0..500u64 {
            let mut rng = sampling::trial_rng(0x5eed, trial);
            let p = PointSet::new(sampling::sample_subset(&mut rng, np, 5), &fam).unwrap();
            let v = VarietySet::new(sampling::sample_subset(&mut rng, nv, 5), &fam).unwrap();
            let cmp = check_incidence_bound(&fam, &p, &v, BoundName::MainD1, None).unwrap();
            assert_eq!(cmp.verdict, Verdict::Holds, "trial {trial}");
        }
    }

    #[test]
    fn expander_generic_below_phuong() {
        // With lambda3^2 = q^{dn} the generic mixing bound implies the
        // phuong comparator (the (1 - .)(1 - .) factors only shrink it).
        let (q, n, d) = (3u64, 1u32, 2u32);
        let size_a = q.pow(d * (n + 1)); // varieties
        let size_b = q.pow(n + d); // points
        for trial in 0..50u64 {
            let mut rng = sampling::trial_rng(17, trial);
            let x = sampling::sample_size(&mut rng, size_a) as u64;
            let y = sampling::sample_size(&mut rng, size_b) as u64;
            let gen = eval_bound_squared(&BoundSpec::ExpanderGeneric {
                lambda3_sq: BigRational::from_integer(qpow(q, d * n)),
                size_x: x,
                size_y: y,
                size_a,
                size_b,
            });
            let ph = eval_bound_squared(&BoundSpec::Phuong {
                q,
                n,
                d,
                size_p: y,
                size_v: x,
            });
            assert!(gen <= ph);
        }
    }

    #[test]
    fn sqrt_protocol() {
        assert!(le_sqrt(&r(-5, 1), &r(0, 1)));
        assert!(le_sqrt(&r(3, 2), &r(9, 4)));
        assert!(!le_sqrt(&r(3, 2), &r(2, 1)));
        assert!(ge_sqrt(&r(3, 2), &r(2, 1)));
        assert!(!ge_sqrt(&r(-1, 1), &r(0, 1)));
        assert!(ge_sqrt(&r(0, 1), &r(0, 1)));
    }

    #[test]
    fn csv_projection_is_lossless() {
        let cmp = ExactComparison::new(BoundName::MainD1, r(4, 9), r(4, 3));
        let rows = vec![ComparisonRow::from(&cmp)];
        let csv = rows_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("bound,delta_squared,bound_squared,ratio,verdict,falsifiable")
        );
        assert_eq!(lines.next(), Some("main_d1,4/9,4/3,1/3,holds,true"));
    }

    #[test]
    fn branch_validation() {
        assert!(BoundSpec::for_sizes(BoundName::MainD1, 3, 1, 2, 5, 5).is_err());
        assert!(BoundSpec::for_sizes(BoundName::MainDge2, 3, 1, 1, 5, 5).is_err());
        assert!(BoundSpec::for_sizes(BoundName::FlatsThmD1, 3, 1, 2, 5, 5).is_err());
        assert_eq!("main_d1".parse::<BoundName>().unwrap(), BoundName::MainD1);
        assert!("bogus".parse::<BoundName>().is_err());
    }
}
