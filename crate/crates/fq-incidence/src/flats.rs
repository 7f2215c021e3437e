//! Census of all n-flats of F_q^{n+d}, affine-group actions, and
//! point-flat incidence experiments.
//!
//! A flat is stored canonically as a reduced-row-echelon basis of its
//! direction space together with the unique coset representative having
//! zeros in every pivot column, so flat equality is structural and the
//! census is hash-friendly. The graph-flat subfamily F0 (the varieties of
//! the flat family) is exactly the set of flats whose pivot columns are the
//! first n coordinates; the census identifies it by converting each
//! variety's point set to canonical form.

use std::collections::HashSet;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    eval_bound_squared, gaussian_binomial, incidence_discrepancy, BoundName, BoundSpec,
    ComparisonRow, ExactComparison,
};
use crate::gf::FieldCtx;
use crate::variety::VarietyFamily;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlatsError {
    #[error("flat census of {count} flats exceeds the guard {guard}")]
    TooLarge { count: u128, guard: u128 },
    #[error("affine map matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Default census guard (number of flats).
pub const DEFAULT_FLAT_CENSUS_GUARD: u128 = 1_000_000;

/// An n-flat in canonical (RREF basis, pivot-zero offset) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Flat {
    pub pivots: Vec<usize>,
    pub basis: Vec<Vec<u32>>,
    pub offset: Vec<u32>,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    /// Dump line "pivots=...; basis=r1|r2|...; offset=..." with rows as
    /// comma-separated element indices.
    pub fn dump_line(&self) -> String {
        let pivots = self.pivots.iter().map(|p| p.to_string()).join(",");
        let basis = self
            .basis
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).join(","))
            .join("|");
        let offset = self.offset.iter().map(|x| x.to_string()).join(",");
        format!("pivots={pivots}; basis={basis}; offset={offset}")
    }
}

// ----- small dense linear algebra over F_q on index vectors -----

/// Reduced row echelon form; returns the nonzero rows and their pivot
/// columns. Deterministic: first nonzero pivot, columns left to right.
pub fn rref(ctx: &FieldCtx, mut rows: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = ctx.inv_idx(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = ctx.mul_idx(*x, inv);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                let pivot_row = rows[rank].clone();
                for (x, &pv) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = ctx.sub_idx(*x, ctx.mul_idx(factor, pv));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

pub fn rank(ctx: &FieldCtx, rows: Vec<Vec<u32>>) -> usize {
    rref(ctx, rows).0.len()
}

fn mat_vec(ctx: &FieldCtx, m: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u32, |acc, (&a, &b)| ctx.add_idx(acc, ctx.mul_idx(a, b)))
        })
        .collect()
}

/// Inverse of a square matrix over F_q by Gauss-Jordan on the augmented
/// system; None when singular.
fn mat_inv(ctx: &FieldCtx, m: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let dim = m.len();
    let aug: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..dim).map(|j| (i == j) as u32));
            r
        })
        .collect();
    let (reduced, pivots) = rref(ctx, aug);
    if pivots.len() < dim || pivots.iter().take(dim).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(reduced.into_iter().map(|r| r[dim..].to_vec()).collect())
}

/// Canonicalize a flat from any spanning set of directions and one point.
pub fn flat_from_span(ctx: &FieldCtx, directions: Vec<Vec<u32>>, point: &[u32]) -> Flat {
    let (basis, pivots) = rref(ctx, directions);
    let mut offset = point.to_vec();
    for (row, &p) in basis.iter().zip(&pivots) {
        let c = offset[p];
        if c != 0 {
            for (o, &b) in offset.iter_mut().zip(row) {
                *o = ctx.sub_idx(*o, ctx.mul_idx(c, b));
            }
        }
    }
    Flat {
        pivots,
        basis,
        offset,
    }
}

/// Canonical flat through a set of points (first point is the base).
pub fn flat_from_points(ctx: &FieldCtx, pts: &[Vec<u32>]) -> Flat {
    let base = &pts[0];
    let dirs: Vec<Vec<u32>> = pts[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(base)
                .map(|(&a, &b)| ctx.sub_idx(a, b))
                .collect()
        })
        .collect();
    flat_from_span(ctx, dirs, base)
}

pub fn flat_contains(ctx: &FieldCtx, flat: &Flat, pt: &[u32]) -> bool {
    debug_assert_eq!(pt.len(), flat.ambient_dim());
    let mut v: Vec<u32> = pt
        .iter()
        .zip(&flat.offset)
        .map(|(&a, &b)| ctx.sub_idx(a, b))
        .collect();
    for (row, &p) in flat.basis.iter().zip(&flat.pivots) {
        let c = v[p];
        if c != 0 {
            for (x, &b) in v.iter_mut().zip(row) {
                *x = ctx.sub_idx(*x, ctx.mul_idx(c, b));
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

/// All q^dim points of a flat.
pub fn flat_points(ctx: &FieldCtx, flat: &Flat) -> Vec<Vec<u32>> {
    let dim = flat.dim();
    let total = ctx.space_size(dim) as u64;
    (0..total)
        .map(|ti| {
            let t = ctx.vector_from_index(dim, ti);
            let mut pt = flat.offset.clone();
            for (coef, row) in t.iter().zip(&flat.basis) {
                if *coef != 0 {
                    for (x, &b) in pt.iter_mut().zip(row) {
                        *x = ctx.add_idx(*x, ctx.mul_idx(*coef, b));
                    }
                }
            }
            pt
        })
        .collect()
}

/// Enumerate all n-flats of F_q^{n+d}: one RREF basis per (pivot set, free
/// fill) and q^d offsets each. The count is q^d [n+d choose n]_q exactly.
pub fn enumerate_all_flats(
    ctx: &FieldCtx,
    n: usize,
    d: usize,
    guard: u128,
) -> Result<Vec<Flat>, FlatsError> {
    assert!(n >= 1 && d >= 1, "n-flats need 1 <= n < n+d");
    let q = ctx.q();
    let ambient = n + d;
    let subspaces = gaussian_binomial(ambient as i64, n as i64, q).expect("valid range");
    let count: u128 =
        (q as u128).pow(d as u32) * u128::try_from(subspaces.clone()).expect("desk-scale census");
    if count > guard {
        return Err(FlatsError::TooLarge { count, guard });
    }

    let mut flats = Vec::with_capacity(count as usize);
    for pivots in (0..ambient).combinations(n) {
        let nonpivots: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        // free cells: (row i, non-pivot column j) with j > pivots[i]
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for &j in nonpivots.iter().filter(|&&j| j > p) {
                free.push((i, j));
            }
        }
        let fills = q.pow(free.len() as u32);
        for fill in 0..fills {
            let mut basis = vec![vec![0u32; ambient]; n];
            for (i, &p) in pivots.iter().enumerate() {
                basis[i][p] = 1;
            }
            let mut t = fill;
            for &(i, j) in &free {
                basis[i][j] = (t % q) as u32;
                t /= q;
            }
            let offsets = q.pow(d as u32);
            for oi in 0..offsets {
                let mut offset = vec![0u32; ambient];
                let mut t = oi;
                for &j in &nonpivots {
                    offset[j] = (t % q) as u32;
                    t /= q;
                }
                flats.push(Flat {
                    pivots: pivots.clone(),
                    basis: basis.clone(),
                    offset,
                });
            }
        }
    }
    debug_assert_eq!(flats.len() as u128, count);
    Ok(flats)
}

/// The census: all n-flats plus the graph-flat subfamily F0 identified by
/// converting each variety of the flat family to canonical form.
pub struct FlatCensus {
    pub all: Vec<Flat>,
    /// parallel to `all`: member of F0?
    pub in_family: Vec<bool>,
    pub family_count: u64,
}

impl FlatCensus {
    pub fn family_flats(&self) -> Vec<&Flat> {
        self.all
            .iter()
            .zip(&self.in_family)
            .filter_map(|(f, &m)| m.then_some(f))
            .collect()
    }
}

pub fn flat_family_census(
    ctx: Arc<FieldCtx>,
    n: usize,
    d: usize,
    guard: u128,
) -> Result<FlatCensus, FlatsError> {
    let all = enumerate_all_flats(&ctx, n, d, guard)?;
    let fam = VarietyFamily::flat_family(ctx.clone(), n, d).expect("valid flat family");
    let mut family: HashSet<Flat> = HashSet::with_capacity(fam.num_varieties() as usize);
    for idx in 0..fam.num_varieties() as u64 {
        let id = fam.id_from_index(idx);
        let pts: Vec<Vec<u32>> = fam
            .variety_points(&id)
            .into_iter()
            .map(|p| p.coords)
            .collect();
        let flat = flat_from_points(&ctx, &pts);
        debug_assert_eq!(flat.dim(), n);
        family.insert(flat);
    }
    let family_count = family.len() as u64;
    let in_family: Vec<bool> = all.iter().map(|f| family.contains(f)).collect();
    // F0 is a subfamily of F1: every converted variety must appear in `all`.
    debug_assert_eq!(
        in_family.iter().filter(|&&m| m).count() as u64,
        family_count
    );
    Ok(FlatCensus {
        all,
        in_family,
        family_count,
    })
}

/// An invertible affine map x -> M x + s on F_q^{dim}.
#[derive(Clone, Debug)]
pub struct AffineMap {
    matrix: Vec<Vec<u32>>,
    shift: Vec<u32>,
}

impl AffineMap {
    pub fn new(
        ctx: &FieldCtx,
        matrix: Vec<Vec<u32>>,
        shift: Vec<u32>,
    ) -> Result<AffineMap, FlatsError> {
        let dim = matrix.len();
        if shift.len() != dim || matrix.iter().any(|r| r.len() != dim) {
            return Err(FlatsError::DimensionMismatch {
                expected: dim,
                got: shift.len(),
            });
        }
        if rank(ctx, matrix.clone()) != dim {
            return Err(FlatsError::SingularMatrix);
        }
        Ok(AffineMap { matrix, shift })
    }

    pub fn identity(dim: usize) -> AffineMap {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| (i == j) as u32).collect())
            .collect();
        AffineMap {
            matrix,
            shift: vec![0; dim],
        }
    }

    /// Uniform random invertible map by rejection sampling on the matrix.
    pub fn random(ctx: &FieldCtx, dim: usize, rng: &mut ChaCha8Rng) -> AffineMap {
        let q = ctx.q();
        loop {
            let matrix: Vec<Vec<u32>> = (0..dim)
                .map(|_| (0..dim).map(|_| rng.gen_range(0..q) as u32).collect())
                .collect();
            if rank(ctx, matrix.clone()) == dim {
                let shift = (0..dim).map(|_| rng.gen_range(0..q) as u32).collect();
                return AffineMap { matrix, shift };
            }
        }
    }

    pub fn apply_point(&self, ctx: &FieldCtx, pt: &[u32]) -> Vec<u32> {
        let mut out = mat_vec(ctx, &self.matrix, pt);
        for (o, &s) in out.iter_mut().zip(&self.shift) {
            *o = ctx.add_idx(*o, s);
        }
        out
    }

    pub fn apply_flat(&self, ctx: &FieldCtx, flat: &Flat) -> Flat {
        let dirs: Vec<Vec<u32>> = flat
            .basis
            .iter()
            .map(|b| mat_vec(ctx, &self.matrix, b))
            .collect();
        let image_offset = self.apply_point(ctx, &flat.offset);
        flat_from_span(ctx, dirs, &image_offset)
    }
}

/// Complete a set of independent rows to a full basis of F_q^{dim} using
/// standard basis vectors, keeping the given rows first.
fn complete_basis(ctx: &FieldCtx, rows: &[Vec<u32>], dim: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = rows.to_vec();
    for j in 0..dim {
        if out.len() == dim {
            break;
        }
        let mut e = vec![0u32; dim];
        e[j] = 1;
        let mut candidate = out.clone();
        candidate.push(e.clone());
        if rank(ctx, candidate) == out.len() + 1 {
            out.push(e);
        }
    }
    debug_assert_eq!(out.len(), dim);
    out
}

/// A witness for transitivity: an affine map sending `from` onto `to`
/// (flats of equal dimension).
pub fn map_between(ctx: &FieldCtx, from: &Flat, to: &Flat) -> AffineMap {
    assert_eq!(from.dim(), to.dim());
    let dim = from.ambient_dim();
    let b1 = complete_basis(ctx, &from.basis, dim);
    let b2 = complete_basis(ctx, &to.basis, dim);
    // M maps the columns of B1' onto the columns of B2': M = B2' (B1')^{-1}
    let b1t: Vec<Vec<u32>> = (0..dim)
        .map(|i| (0..dim).map(|j| b1[j][i]).collect())
        .collect();
    let b2t: Vec<Vec<u32>> = (0..dim)
        .map(|i| (0..dim).map(|j| b2[j][i]).collect())
        .collect();
    let b1t_inv = mat_inv(ctx, &b1t).expect("completed basis is invertible");
    let matrix: Vec<Vec<u32>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    (0..dim).fold(0u32, |acc, k| {
                        ctx.add_idx(acc, ctx.mul_idx(b2t[i][k], b1t_inv[k][j]))
                    })
                })
                .collect()
        })
        .collect();
    let m_offset = mat_vec(ctx, &matrix, &from.offset);
    let shift: Vec<u32> = to
        .offset
        .iter()
        .zip(&m_offset)
        .map(|(&a, &b)| ctx.sub_idx(a, b))
        .collect();
    AffineMap { matrix, shift }
}

/// I(P, F) by direct membership over decoded point coordinates.
pub fn count_point_flat_incidences(ctx: &FieldCtx, points: &[u64], flats: &[&Flat]) -> u64 {
    let ambient = flats.first().map_or(0, |f| f.ambient_dim());
    let coords: Vec<Vec<u32>> = points
        .iter()
        .map(|&pi| ctx.vector_from_index(ambient, pi))
        .collect();
    let mut acc = 0u64;
    for f in flats {
        for c in &coords {
            acc += flat_contains(ctx, f, c) as u64;
        }
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatsComparisonReport {
    pub size_p: u64,
    pub size_f: u64,
    pub incidences: u64,
    pub rows: Vec<ComparisonRow>,
    pub all_falsifiable_hold: bool,
}

/// Theorem-level comparison for a point set and a set of flats, plus the
/// graph-flat corollary row when every flat lies in F0.
pub fn check_flats_theorem(
    ctx: &FieldCtx,
    n: usize,
    d: usize,
    points: &[u64],
    flats: &[&Flat],
) -> FlatsComparisonReport {
    let q = ctx.q();
    let size_p = points.len() as u64;
    let size_f = flats.len() as u64;
    let incidences = count_point_flat_incidences(ctx, points, flats);
    let delta = incidence_discrepancy(q, d as u32, incidences, size_p, size_f);
    let delta_sq = &delta * &delta;

    let mut comparisons = Vec::new();
    let thm = if d == 1 {
        BoundSpec::FlatsThmD1 {
            q,
            n: n as u32,
            size_p,
            size_f,
        }
    } else {
        BoundSpec::FlatsThmDge2 {
            q,
            n: n as u32,
            d: d as u32,
            size_p,
            size_f,
        }
    };
    comparisons.push(ExactComparison::new(
        thm.name(),
        delta_sq.clone(),
        eval_bound_squared(&thm),
    ));

    // graph flats have pivot columns exactly 0..n
    let all_in_family = !flats.is_empty()
        && flats
            .iter()
            .all(|f| f.pivots.len() == n && f.pivots.iter().enumerate().all(|(i, &p)| p == i));
    if all_in_family {
        let cor = BoundSpec::FlatsCor {
            q,
            n: n as u32,
            d: d as u32,
            size_p,
            size_f,
        };
        comparisons.push(ExactComparison::new(
            BoundName::FlatsCor,
            delta_sq.clone(),
            eval_bound_squared(&cor),
        ));
    }

    // informational leading-term comparator
    let lund = BoundSpec::LundLeading {
        q,
        n: n as u32,
        d: d as u32,
        size_p,
        size_f,
    };
    comparisons.push(ExactComparison::new(
        BoundName::LundLeading,
        delta_sq,
        eval_bound_squared(&lund),
    ));

    let all_falsifiable_hold = comparisons
        .iter()
        .filter(|c| c.falsifiable)
        .all(|c| c.verdict == crate::bounds::Verdict::Holds);
    FlatsComparisonReport {
        size_p,
        size_f,
        incidences,
        rows: comparisons.iter().map(ComparisonRow::from).collect(),
        all_falsifiable_hold,
    }
}

/// Remark-level regime display for the all-flats bound: with the o-term set
/// to zero the d >= 2 branch beats the leading term when
/// |F| < q^{(d-1)n+1} - q. Informational (the threshold is asymptotic).
#[derive(Debug, Clone, Serialize)]
pub struct FlatsRegimeRow {
    pub size_f: u64,
    pub predicted_improves: bool,
    pub actually_improves: bool,
    pub asymptotic: bool,
}

pub fn flats_regime_row(q: u64, n: u32, d: u32, size_p: u64, size_f: u64) -> FlatsRegimeRow {
    let predicted = BigInt::from(size_f) < BigInt::from(q).pow((d - 1) * n + 1) - BigInt::from(q);
    let thm = eval_bound_squared(&BoundSpec::FlatsThmDge2 {
        q,
        n,
        d,
        size_p,
        size_f,
    });
    let lund = eval_bound_squared(&BoundSpec::LundLeading {
        q,
        n,
        d,
        size_p,
        size_f,
    });
    FlatsRegimeRow {
        size_f,
        predicted_improves: predicted,
        actually_improves: thm < lund,
        asymptotic: true,
    }
}
