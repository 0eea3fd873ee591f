//! Dense LU factorisation with partial pivoting.
//!
//! Hand-rolled rather than borrowed so that a zero pivot can be reported as the column
//! (circuit unknown) that lost rank.

/// Pivots at or below this magnitude are treated as exact zeros.
const PIVOT_FLOOR: f64 = 1e-30;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn clear(&mut self) {
        self.data.fill(0.0);
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.n + col] += value;
    }

    #[cfg(test)]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }
}

/// Solve `a · x = b` in place: on success `b` holds `x`. `a` is destroyed.
///
/// Returns the column index whose pivot vanished when the matrix is singular. Row ties in
/// the pivot search go to the lowest row, so results are deterministic.
pub(crate) fn solve_in_place(a: &mut Matrix, b: &mut [f64]) -> Result<(), usize> {
    let n = a.n;
    debug_assert_eq!(b.len(), n);
    let d = &mut a.data;
    for k in 0..n {
        let mut pivot_row = k;
        let mut best = d[k * n + k].abs();
        for r in k + 1..n {
            let v = d[r * n + k].abs();
            if v > best {
                best = v;
                pivot_row = r;
            }
        }
        if !(best > PIVOT_FLOOR) {
            return Err(k);
        }
        if pivot_row != k {
            for c in 0..n {
                d.swap(k * n + c, pivot_row * n + c);
            }
            b.swap(k, pivot_row);
        }
        let pivot = d[k * n + k];
        for r in k + 1..n {
            let factor = d[r * n + k] / pivot;
            if factor == 0.0 {
                continue;
            }
            d[r * n + k] = 0.0;
            for c in k + 1..n {
                d[r * n + c] -= factor * d[k * n + c];
            }
            b[r] -= factor * b[k];
        }
    }
    for k in (0..n).rev() {
        let mut sum = b[k];
        for c in k + 1..n {
            sum -= d[k * n + c] * b[c];
        }
        b[k] = sum / d[k * n + k];
    }
    Ok(())
}
