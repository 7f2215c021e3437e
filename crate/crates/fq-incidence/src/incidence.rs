//! The point-variety incidence matrix T and its two Gram matrices.
//!
//! T has q^{d(n+1)} rows (varieties) and q^{n+d} columns (points). The graph
//! is biregular: every row sums to q^n and every column to q^{dn}; both are
//! verified whenever a matrix is built. A = T'T lives on the point side and
//! B = TT' on the variety side. Each Gram matrix is computed twice, once as
//! a matrix product and once from its combinatorial entry description, and
//! the two must agree entry for entry: a mismatch aborts with
//! [`IncidenceError::FormulaMismatch`] since it can only mean a bug.

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::variety::VarietyFamily;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("incidence matrix needs {bits} bits, exceeding the guard {guard}")]
    TooLarge { bits: u128, guard: u128 },
    #[error("gram order {order} exceeds the guard {guard}")]
    GramTooLarge { order: u128, guard: u128 },
    #[error("degree invariant violated: {what}")]
    DegreeInvariant { what: String },
    #[error("gram {side:?} entry ({row},{col}) differs between product and formula")]
    FormulaMismatch { side: Side, row: usize, col: usize },
    #[error("index {index} out of range [0, {max})")]
    IndexOutOfRange { index: u64, max: u64 },
    #[error("indices must be strictly increasing")]
    NotSorted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Points,
    Varieties,
}

/// Sorted canonical point indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    indices: Vec<u64>,
}

/// Sorted canonical variety indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarietySet {
    indices: Vec<u64>,
}

fn validate_sorted(indices: &[u64], max: u64) -> Result<(), IncidenceError> {
    for w in indices.windows(2) {
        if w[0] >= w[1] {
            return Err(IncidenceError::NotSorted);
        }
    }
    if let Some(&last) = indices.last() {
        if last >= max {
            return Err(IncidenceError::IndexOutOfRange { index: last, max });
        }
    }
    Ok(())
}

impl PointSet {
    pub fn new(indices: Vec<u64>, fam: &VarietyFamily) -> Result<PointSet, IncidenceError> {
        validate_sorted(&indices, fam.num_points() as u64)?;
        Ok(PointSet { indices })
    }

    pub fn all(fam: &VarietyFamily) -> PointSet {
        PointSet {
            indices: (0..fam.num_points() as u64).collect(),
        }
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

impl VarietySet {
    pub fn new(indices: Vec<u64>, fam: &VarietyFamily) -> Result<VarietySet, IncidenceError> {
        validate_sorted(&indices, fam.num_varieties() as u64)?;
        Ok(VarietySet { indices })
    }

    pub fn all(fam: &VarietyFamily) -> VarietySet {
        VarietySet {
            indices: (0..fam.num_varieties() as u64).collect(),
        }
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Dense 0/1 incidence matrix, row-major bitset, rows = varieties.
#[derive(Debug)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

/// Default bit guard for T (2^26 bits = 8 MiB).
pub const DEFAULT_T_BITS_GUARD: u128 = 1 << 26;
/// Default order guard for Gram matrices.
pub const DEFAULT_GRAM_ORDER_GUARD: u128 = 2048;

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        let w = self.bits[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words_per_row + c / 64] |= 1u64 << (c % 64);
    }

    pub fn row_sum(&self, r: usize) -> u64 {
        self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum()
    }

    pub fn col_sum(&self, c: usize) -> u64 {
        (0..self.rows).filter(|&r| self.get(r, c)).count() as u64
    }

    pub fn total_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// 1_V . T . 1_P' by direct bit lookups.
    pub fn count(&self, v: &VarietySet, p: &PointSet) -> u64 {
        let mut acc = 0u64;
        for &r in v.indices() {
            for &c in p.indices() {
                acc += self.get(r as usize, c as usize) as u64;
            }
        }
        acc
    }

    /// Number of common points of two varieties (AND + popcount of rows).
    pub fn row_intersection(&self, r1: usize, r2: usize) -> u64 {
        let a = &self.bits[r1 * self.words_per_row..(r1 + 1) * self.words_per_row];
        let b = &self.bits[r2 * self.words_per_row..(r2 + 1) * self.words_per_row];
        a.iter()
            .zip(b)
            .map(|(x, y)| (x & y).count_ones() as u64)
            .sum()
    }

    /// Portable text dump: "rows cols" then one 0/1 digit string per row.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Build T and verify both degree invariants (row sums q^n, column sums
/// q^{dn}).
pub fn build_t(fam: &VarietyFamily, bits_guard: u128) -> Result<IncidenceMatrix, IncidenceError> {
    let rows_u = fam.num_varieties();
    let cols_u = fam.num_points();
    let bits = rows_u * cols_u;
    if bits > bits_guard {
        return Err(IncidenceError::TooLarge {
            bits,
            guard: bits_guard,
        });
    }
    let rows = rows_u as usize;
    let cols = cols_u as usize;
    let words_per_row = cols.div_ceil(64);
    let mut t = IncidenceMatrix {
        rows,
        cols,
        words_per_row,
        bits: vec![0u64; rows * words_per_row],
    };

    let ctx = fam.ctx().clone();
    let n = fam.n();
    let qn = ctx.space_size(n) as u64;
    for vi in 0..rows as u64 {
        let id = fam.id_from_index(vi);
        for xi in 0..qn {
            let x = ctx.vector_from_index(n, xi);
            let mut coords = x.clone();
            for i in 0..fam.d() {
                coords.push(fam.graph_coord(i, &id.a[i], &x, xi));
            }
            let pi = ctx.vector_index(&coords);
            t.set(vi as usize, pi as usize);
        }
    }

    let q = ctx.q();
    let expect_row = q.pow(n as u32);
    let expect_col = q.pow((fam.d() * n) as u32);
    for r in 0..rows {
        if t.row_sum(r) != expect_row {
            return Err(IncidenceError::DegreeInvariant {
                what: format!("row {r} sum != q^n"),
            });
        }
    }
    for c in 0..cols {
        if t.col_sum(c) != expect_col {
            return Err(IncidenceError::DegreeInvariant {
                what: format!("column {c} sum != q^dn"),
            });
        }
    }
    Ok(t)
}

/// I(P, V) by direct membership evaluation; never materializes T.
pub fn count_incidences(fam: &VarietyFamily, p: &PointSet, v: &VarietySet) -> u64 {
    let mut acc = 0u64;
    for &vi in v.indices() {
        let id = fam.id_from_index(vi);
        for &pi in p.indices() {
            acc += fam.contains_index(&id, pi) as u64;
        }
    }
    acc
}

/// Symmetric positive semi-definite Gram matrix of one side.
pub struct GramMatrix {
    pub side: Side,
    pub entries: IntMatrix,
}

impl GramMatrix {
    pub fn order(&self) -> usize {
        self.entries.rows()
    }
}

/// Closed-form entry of A = T'T: q^{dn} on the diagonal, q^{d(n-1)} when the
/// base coordinates differ, 0 otherwise.
pub fn gram_points_formula_entry(fam: &VarietyFamily, u: u64, v: u64) -> BigInt {
    let q = fam.ctx().q();
    let n = fam.n();
    let d = fam.d() as u32;
    if u == v {
        return BigInt::from(q).pow(d * n as u32);
    }
    let cu = fam.ctx().vector_from_index(n + fam.d(), u);
    let cv = fam.ctx().vector_from_index(n + fam.d(), v);
    if cu[..n] != cv[..n] {
        BigInt::from(q).pow(d * (n as u32 - 1))
    } else {
        BigInt::from(0)
    }
}

/// A = T'T, cross-checked against the closed-form entry description.
pub fn gram_points(
    fam: &VarietyFamily,
    bits_guard: u128,
    order_guard: u128,
) -> Result<GramMatrix, IncidenceError> {
    let order_u = fam.num_points();
    if order_u > order_guard {
        return Err(IncidenceError::GramTooLarge {
            order: order_u,
            guard: order_guard,
        });
    }
    let t = build_t(fam, bits_guard)?;
    let order = order_u as usize;
    let mut entries = IntMatrix::zeros(order, order);
    for u in 0..order {
        for v in u..order {
            let mut count = 0u64;
            for r in 0..t.rows() {
                count += (t.get(r, u) && t.get(r, v)) as u64;
            }
            entries.set(u, v, BigInt::from(count));
            if u != v {
                entries.set(v, u, BigInt::from(count));
            }
        }
    }
    for u in 0..order {
        for v in 0..order {
            if *entries.get(u, v) != gram_points_formula_entry(fam, u as u64, v as u64) {
                return Err(IncidenceError::FormulaMismatch {
                    side: Side::Points,
                    row: u,
                    col: v,
                });
            }
        }
    }
    Ok(GramMatrix {
        side: Side::Points,
        entries,
    })
}

/// Number of common zeros over F_q^n of the f-differences of two parameter
/// tuples; this is the combinatorial description of B's entries.
pub fn gram_varieties_root_count(fam: &VarietyFamily, u: u64, v: u64) -> u64 {
    let ctx = fam.ctx();
    let n = fam.n();
    let id_u = fam.id_from_index(u);
    let id_v = fam.id_from_index(v);
    let qn = ctx.space_size(n) as u64;
    let mut count = 0u64;
    for xi in 0..qn {
        let x = ctx.vector_from_index(n, xi);
        let all_match = (0..fam.d()).all(|i| {
            let fu = fam.f_eval(i, &id_u.a[i], &x).expect("validated dims");
            let fv = fam.f_eval(i, &id_v.a[i], &x).expect("validated dims");
            fu == fv
        });
        count += all_match as u64;
    }
    count
}

/// B = TT', cross-checked against direct root counting of the f-differences.
pub fn gram_varieties(
    fam: &VarietyFamily,
    bits_guard: u128,
    order_guard: u128,
) -> Result<GramMatrix, IncidenceError> {
    let order_u = fam.num_varieties();
    if order_u > order_guard {
        return Err(IncidenceError::GramTooLarge {
            order: order_u,
            guard: order_guard,
        });
    }
    let t = build_t(fam, bits_guard)?;
    let order = order_u as usize;
    let mut entries = IntMatrix::zeros(order, order);
    for u in 0..order {
        for v in u..order {
            let count = t.row_intersection(u, v);
            entries.set(u, v, BigInt::from(count));
            if u != v {
                entries.set(v, u, BigInt::from(count));
            }
        }
    }
    for u in 0..order {
        for v in 0..order {
            let formula = gram_varieties_root_count(fam, u as u64, v as u64);
            if *entries.get(u, v) != BigInt::from(formula) {
                return Err(IncidenceError::FormulaMismatch {
                    side: Side::Varieties,
                    row: u,
                    col: v,
                });
            }
        }
    }
    Ok(GramMatrix {
        side: Side::Varieties,
        entries,
    })
}
