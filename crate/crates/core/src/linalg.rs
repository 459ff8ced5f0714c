//! Gaussian elimination with partial pivoting for banded row storage.
//!
//! Rows are kept as `(first column, values)` windows that grow only as far as fill-in
//! requires, so a system with bandwidth `b` costs `O(n b^2)`.

/// A pivot below `PIVOT_TOLERANCE` times the column's original scale marks a free column.
const PIVOT_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone)]
struct Row {
    start: usize,
    vals: Vec<f64>,
}

impl Row {
    fn get(&self, col: usize) -> f64 {
        if col < self.start {
            return 0.0;
        }
        self.vals.get(col - self.start).copied().unwrap_or(0.0)
    }

    fn end(&self) -> usize {
        self.start + self.vals.len()
    }

    /// `self -= factor * other` over `other`'s columns from `from` on.
    fn sub_scaled(&mut self, other: &Row, factor: f64, from: usize) {
        let end = other.end();
        if end > self.end() {
            self.vals.resize(end - self.start, 0.0);
        }
        for col in from.max(other.start)..end {
            self.vals[col - self.start] -= factor * other.vals[col - other.start];
        }
    }

    /// Drops leading columns before `col`.
    fn trim_before(&mut self, col: usize) {
        if col > self.start {
            let cut = (col - self.start).min(self.vals.len());
            self.vals.drain(..cut);
            self.start = col;
        }
    }
}

/// Echelon form of a banded system, possibly with free columns.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    ncols: usize,
    rows: Vec<Row>,
    rhs: Vec<f64>,
    /// pivot column of each echelon row
    pivots: Vec<usize>,
    pub free: Vec<usize>,
}

/// Reduces `rows` (each `(first column, values)`) to echelon form, applying the same
/// row operations to `rhs`.
pub(crate) fn echelon(rows: Vec<(usize, Vec<f64>)>, ncols: usize, rhs: Vec<f64>) -> Echelon {
    assert_eq!(rows.len(), rhs.len());
    let mut col_scale = vec![0.0f64; ncols];
    let mut reach = 0usize;
    let mut rows: Vec<Row> = rows
        .into_iter()
        .enumerate()
        .map(|(i, (start, vals))| {
            for (j, v) in vals.iter().enumerate() {
                col_scale[start + j] = col_scale[start + j].max(v.abs());
            }
            reach = reach.max(i.saturating_sub(start));
            Row { start, vals }
        })
        .collect();
    let mut rhs = rhs;
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut free = Vec::new();
    let mut r = 0usize;
    for k in 0..ncols {
        if r == nrows {
            free.push(k);
            continue;
        }
        // rows with a nonzero in column k sit within `reach` of k once earlier columns are cleared
        let last = (k + reach + 1).min(nrows - 1).max(r);
        let mut best = r;
        let mut best_abs = 0.0;
        for i in r..=last {
            let a = rows[i].get(k).abs();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        if best_abs <= PIVOT_TOLERANCE * col_scale[k] || best_abs == 0.0 {
            free.push(k);
            continue;
        }
        rows.swap(r, best);
        rhs.swap(r, best);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row.get(k);
        for (off, row) in tail.iter_mut().enumerate().take(last - r) {
            let v = row.get(k);
            if v != 0.0 {
                let factor = v / pivot;
                row.sub_scaled(pivot_row, factor, k + 1);
                row.trim_before(k + 1);
                rhs[r + 1 + off] -= factor * rhs[r];
            } else {
                row.trim_before(k + 1);
            }
        }
        pivots.push(k);
        r += 1;
    }
    Echelon { ncols, rows, rhs, pivots, free }
}

impl Echelon {
    /// Back-substitutes with the free columns set to `free_values`.
    ///
    /// Intermediate values are rescaled by powers of two when they grow large, so the
    /// result is only meaningful up to a common factor when `rescale` is true.
    pub fn back_substitute(&self, free_values: &[f64], rescale: bool) -> Vec<f64> {
        assert_eq!(free_values.len(), self.free.len());
        let mut x = vec![0.0; self.ncols];
        for (&col, &v) in self.free.iter().zip(free_values) {
            x[col] = v;
        }
        let mut rhs_scale = 1.0;
        for r in (0..self.pivots.len()).rev() {
            let k = self.pivots[r];
            let row = &self.rows[r];
            let mut acc = self.rhs[r] * rhs_scale;
            for col in (k + 1)..row.end() {
                acc -= row.get(col) * x[col];
            }
            x[k] = acc / row.get(k);
            if rescale && x[k].abs() > 1e200 {
                let f = 2f64.powi(-600);
                x.iter_mut().for_each(|v| *v *= f);
                rhs_scale *= f;
            }
        }
        x
    }
}

/// Solves the square system `A x = b`; `None` if a pivot vanishes.
pub(crate) fn solve(rows: Vec<(usize, Vec<f64>)>, b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let e = echelon(rows, n, b);
    if !e.free.is_empty() {
        return None;
    }
    Some(e.back_substitute(&[], false))
}
