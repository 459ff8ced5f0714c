use serde::{Deserialize, Serialize};

/// Photon-number probabilities `p_0 ..= p_nmax` with an estimate of the mass beyond `nmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonDistribution {
    pub probs: Vec<f64>,
    pub nmax: usize,
    pub tail_bound: f64,
}

impl PhotonDistribution {
    /// Wraps `probs`, clamping round-off negatives (down to `-1e-12`) to zero.
    ///
    /// # Panics
    /// If `probs` is empty or holds a value below `-1e-12`.
    pub fn new(probs: Vec<f64>, tail_bound: f64) -> Self {
        assert!(!probs.is_empty(), "empty distribution");
        let probs: Vec<f64> = probs
            .into_iter()
            .map(|p| {
                assert!(p >= -1e-12, "probability {p} is negative beyond round-off");
                p.max(0.0)
            })
            .collect();
        let nmax = probs.len() - 1;
        PhotonDistribution { probs, nmax, tail_bound: tail_bound.max(0.0) }
    }

    /// All mass on `|n⟩`.
    pub fn fock(n: usize, nmax: usize) -> Self {
        assert!(n <= nmax);
        let mut probs = vec![0.0; nmax + 1];
        probs[n] = 1.0;
        PhotonDistribution { probs, nmax, tail_bound: 0.0 }
    }

    pub fn vacuum(nmax: usize) -> Self {
        Self::fock(0, nmax)
    }

    pub fn get(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mass on odd photon numbers.
    pub fn odd_mass(&self) -> f64 {
        self.probs.iter().skip(1).step_by(2).sum()
    }

    pub fn even_mass(&self) -> f64 {
        self.probs.iter().step_by(2).sum()
    }

    /// `Σ n(n-1)...(n-m+1) p_n`
    pub fn factorial_moment(&self, m: usize) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .skip(m)
            .map(|(n, p)| p * (0..m).map(|i| (n - i) as f64).product::<f64>())
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.factorial_moment(1)
    }

    /// Mandel's `Q = N2/N1 − N1`; `None` for zero mean.
    pub fn mandel_q(&self) -> Option<f64> {
        let n1 = self.mean();
        (n1 > 0.0).then(|| self.factorial_moment(2) / n1 - n1)
    }

    /// `Σ p_n^2`, the purity of the diagonal state.
    pub fn purity(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum()
    }

    /// `max_n |p_n − q_n|` over the union of supports.
    pub fn sup_distance(&self, other: &PhotonDistribution) -> f64 {
        let n = self.probs.len().max(other.probs.len());
        (0..n).map(|i| (self.get(i) - other.get(i)).abs()).fold(0.0, f64::max)
    }

    /// `½ Σ |p_n − q_n|`
    pub fn total_variation(&self, other: &PhotonDistribution) -> f64 {
        let n = self.probs.len().max(other.probs.len());
        0.5 * (0..n).map(|i| (self.get(i) - other.get(i)).abs()).sum::<f64>()
    }

    /// Entrywise `(1 − w)·self + w·other`.
    pub fn mix(&self, other: &PhotonDistribution, w: f64) -> PhotonDistribution {
        let n = self.probs.len().max(other.probs.len());
        let probs = (0..n).map(|i| (1.0 - w) * self.get(i) + w * other.get(i)).collect();
        PhotonDistribution::new(probs, (1.0 - w) * self.tail_bound + w * other.tail_bound)
    }
}

/// Odd-parity weight `β = Σ_k p_{2k+1}` of an initial distribution.
pub fn beta_from_initial(p0: &PhotonDistribution) -> f64 {
    p0.odd_mass()
}
