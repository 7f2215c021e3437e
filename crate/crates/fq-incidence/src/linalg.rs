//! Dense exact integer matrices used by the Gram and spectral machinery.
//!
//! Entries are arbitrary-precision integers: the annihilation products reach
//! third-power magnitudes of the Gram matrices and must be checked by exact
//! equality, never by tolerance. Rank is computed by fraction-free (Bareiss)
//! elimination with first-nonzero pivoting, so every intermediate value is an
//! exact minor.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigInt,
    ) -> IntMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[r * other.cols + c] += a * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// self - k * I
    pub fn sub_scalar_diag(&self, k: &BigInt) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] -= k;
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn trace(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// trace(M^2) for symmetric M without forming the product.
    pub fn trace_of_square_symmetric(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let mut acc = BigInt::zero();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                acc += e * e;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// v' M v for an indicator vector supported on `support` (sorted indices).
    pub fn quadratic_form_indicator(&self, support: &[u64]) -> BigInt {
        let mut acc = BigInt::zero();
        for &r in support {
            for &c in support {
                acc += self.get(r as usize, c as usize);
            }
        }
        acc
    }

    /// Rank over Q by one-step fraction-free Gaussian elimination (Bareiss).
    /// Pivot choice is the first row with a nonzero entry in the current
    /// column, scanning columns left to right; fully deterministic.
    pub fn rank_fraction_free(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let pivot_row = (rank..rows).find(|&r| !m.get(r, col).is_zero());
            let Some(pr) = pivot_row else { continue };
            if pr != rank {
                for c in 0..cols {
                    m.data.swap(pr * cols + c, rank * cols + c);
                }
            }
            let pivot = m.get(rank, col).clone();
            for r in rank + 1..rows {
                let lead = m.get(r, col).clone();
                for c in col..cols {
                    let num = &pivot * m.get(r, c) - &lead * m.get(rank, c);
                    debug_assert!((&num % &prev).is_zero(), "fraction-free step not exact");
                    m.set(r, c, num / &prev);
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Portable text dump: first line "rows cols", then one row per line of
    /// space-separated decimal integers.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}
