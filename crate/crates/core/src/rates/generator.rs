use serde::{Deserialize, Serialize};

use super::{rising_factorial_count, ChannelKind, RateError, RateFunctions, RateTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Truncated rate matrix `G` on photon numbers `0..=nmax`, with `dp/dt = G p`.
///
/// Stored as a dense band: row `i` keeps columns `i - bandwidth ..= i + bandwidth`.
/// Off-diagonal entries are nonnegative and every column sums to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMatrix {
    nmax: usize,
    bandwidth: usize,
    band: Vec<f64>,
}

impl GeneratorMatrix {
    fn zeros(nmax: usize, bandwidth: usize) -> Self {
        GeneratorMatrix { nmax, bandwidth, band: vec![0.0; (nmax + 1) * (2 * bandwidth + 1)] }
    }

    fn slot(&self, row: usize, col: usize) -> Option<usize> {
        let dim = self.dim();
        if row >= dim || col >= dim || row.abs_diff(col) > self.bandwidth {
            return None;
        }
        Some(row * (2 * self.bandwidth + 1) + (col + self.bandwidth - row))
    }

    fn add(&mut self, row: usize, col: usize, value: f64) {
        let i = self.slot(row, col).expect("entry outside the band");
        self.band[i] += value;
    }

    /// Records a transition `from → to` with the given rate (gain in `to`, loss in `from`).
    fn add_transition(&mut self, from: usize, to: usize, rate: f64) {
        if rate == 0.0 {
            return;
        }
        self.add(to, from, rate);
        self.add(from, from, -rate);
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn dim(&self) -> usize {
        self.nmax + 1
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.slot(row, col).map_or(0.0, |i| self.band[i])
    }

    /// Column range `[lo, hi]` of the stored band of `row`.
    pub fn row_span(&self, row: usize) -> (usize, usize) {
        (row.saturating_sub(self.bandwidth), (row + self.bandwidth).min(self.nmax))
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim()).flat_map(move |row| {
            let (lo, hi) = self.row_span(row);
            (lo..=hi).filter_map(move |col| {
                let v = self.get(row, col);
                (v != 0.0).then_some((row, col, v))
            })
        })
    }

    /// `G p`
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        assert_eq!(p.len(), self.dim(), "vector length must match the generator dimension");
        (0..self.dim())
            .map(|row| {
                let (lo, hi) = self.row_span(row);
                (lo..=hi).map(|col| self.get(row, col) * p[col]).sum()
            })
            .collect()
    }

    /// `‖G p‖₁`
    pub fn residual_l1(&self, p: &[f64]) -> f64 {
        self.apply(p).iter().map(|v| v.abs()).sum()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.dim()];
        for (_, col, v) in self.entries() {
            sums[col] += v;
        }
        sums
    }

    /// Largest total outflow rate `|G_nn|`.
    pub fn max_exit_rate(&self) -> f64 {
        (0..self.dim()).map(|n| -self.get(n, n)).fold(0.0, f64::max)
    }

    /// True when no entry couples an even photon number to an odd one.
    pub fn is_parity_split(&self) -> bool {
        self.entries().all(|(row, col, _)| (row + col) % 2 == 0)
    }

    /// Photon numbers of one parity and the generator restricted to them.
    ///
    /// Only meaningful for parity-split generators, where the restriction is itself a
    /// conservative generator.
    pub fn sector(&self, parity: Parity) -> (Vec<usize>, GeneratorMatrix) {
        let first = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        let indices: Vec<usize> = (first..self.dim()).step_by(2).collect();
        assert!(!indices.is_empty(), "empty parity sector");
        let mut sub = GeneratorMatrix::zeros(indices.len() - 1, self.bandwidth.div_ceil(2));
        for (row, col, v) in self.entries() {
            if row % 2 == first && col % 2 == first {
                sub.add(row / 2, col / 2, v);
            }
        }
        (indices, sub)
    }

    /// Builds `I - dt·G` as rows for the banded solver.
    pub(crate) fn implicit_step_matrix(&self, dt: f64) -> Vec<(usize, Vec<f64>)> {
        (0..self.dim())
            .map(|row| {
                let (lo, hi) = self.row_span(row);
                let vals = (lo..=hi)
                    .map(|col| {
                        let identity = if row == col { 1.0 } else { 0.0 };
                        identity - dt * self.get(row, col)
                    })
                    .collect();
                (lo, vals)
            })
            .collect()
    }

    /// Rows of `G` as `(first column, values)` for the banded solver.
    pub(crate) fn band_rows(&self) -> Vec<(usize, Vec<f64>)> {
        (0..self.dim())
            .map(|row| {
                let (lo, hi) = self.row_span(row);
                (lo, (lo..=hi).map(|col| self.get(row, col)).collect())
            })
            .collect()
    }

    /// Assembles directly from rate functions, tabulating them on `[0, nmax]` first.
    pub fn from_rates(rates: &impl RateFunctions, nmax: usize) -> Result<Self, RateError> {
        assemble_generator(&RateTables::tabulate(rates, nmax))
    }
}

/// Assembles the truncated generator from tabulated rates.
///
/// Absorption of order `k` moves `n + k → n` at rate `(n+k)!/n! f(n)`; emission moves
/// `n → n + k` at the same combinatorial weight. Emission from `n > nmax - k` would leave
/// the truncated space; such transitions are dropped together with their loss terms, so
/// every column still sums to zero.
pub fn assemble_generator(tables: &RateTables) -> Result<GeneratorMatrix, RateError> {
    let nmax = tables.nmax;
    if nmax < 4 {
        return Err(RateError::TruncationTooSmall(nmax));
    }
    tables.validate()?;
    let bandwidth = tables.channels.iter().map(|c| c.order).max().unwrap_or(1).max(2);
    let mut g = GeneratorMatrix::zeros(nmax, bandwidth);
    for ch in &tables.channels {
        let k = ch.order;
        if k > nmax {
            continue;
        }
        for n in 0..=nmax - k {
            let rate = rising_factorial_count(n, k) * ch.values[n];
            match ch.kind {
                ChannelKind::Absorption => g.add_transition(n + k, n, rate),
                ChannelKind::Emission => g.add_transition(n, n + k, rate),
            }
        }
    }
    Ok(g)
}
