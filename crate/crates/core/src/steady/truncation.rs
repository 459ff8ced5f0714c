use crate::rates::{rising_factorial_count, ChannelKind, RateFunctions};

/// Smallest truncation ever returned.
pub const MIN_NMAX: usize = 20;
/// Largest truncation considered; models whose tail never decays stop here.
pub const MAX_NMAX: usize = 20_000;

/// Extra tail suppression applied on top of the requested `eps`.
const TAIL_SAFETY: f64 = 1e-3;

struct Channels<'a, R: RateFunctions> {
    rates: &'a R,
    list: Vec<(ChannelKind, usize)>,
}

impl<'a, R: RateFunctions> Channels<'a, R> {
    fn new(rates: &'a R) -> Self {
        Channels { rates, list: rates.channels() }
    }

    /// Local decay ratio `t ≈ p_{n+1}/p_n` from the flux balance across the cut
    /// `n | n+1`, assuming the distribution is locally geometric around the cut.
    fn local_ratio(&self, n: usize) -> f64 {
        let mut up = Vec::new(); // (weight, power of 1/t)
        let mut down = Vec::new(); // (weight, power of t), overall factor t
        for (idx, &(kind, k)) in self.list.iter().enumerate() {
            for i in 0..k {
                match kind {
                    ChannelKind::Emission => {
                        if i <= n {
                            let from = n - i;
                            let w = rising_factorial_count(from, k) * self.rates.rate(idx, from);
                            if w > 0.0 {
                                up.push((w, i as i32));
                            }
                        }
                    }
                    ChannelKind::Absorption => {
                        let from = n + 1 + i;
                        if from < k {
                            continue;
                        }
                        let w = rising_factorial_count(from - k, k) * self.rates.rate(idx, from - k);
                        if w > 0.0 {
                            down.push((w, i as i32));
                        }
                    }
                }
            }
        }
        if up.is_empty() {
            return 0.0;
        }
        if down.is_empty() {
            return 1.0;
        }
        // balance(ln t) = ln D(t) − ln U(t) is increasing; bisect on ln t
        let balance = |lt: f64| {
            let d: f64 = down.iter().map(|&(w, p)| w * (lt * (p + 1) as f64).exp()).sum();
            let u: f64 = up.iter().map(|&(w, p)| w * (-lt * p as f64).exp()).sum();
            d.ln() - u.ln()
        };
        let (mut lo, mut hi) = (-300.0f64, 300.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if balance(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// Unnormalized log-weights of the geometric-ratio model up to where it is negligible.
    fn log_weights(&self) -> Vec<f64> {
        let mut logw = vec![0.0f64];
        let mut peak = 0.0f64;
        for n in 0..MAX_NMAX {
            let t = self.local_ratio(n);
            if t == 0.0 {
                break;
            }
            let next = logw[n] + t.ln();
            logw.push(next);
            peak = peak.max(next);
            if t < 0.5 && next < peak - 120.0 {
                break;
            }
        }
        logw
    }
}

/// Fraction of the modelled mass beyond each index: `tails[N] = Σ_{n>N} w_n / Σ w_n`.
fn tail_fractions(logw: &[f64]) -> Vec<f64> {
    let peak = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logw.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = w.iter().sum();
    let mut tails = vec![0.0; w.len()];
    let mut acc = 0.0;
    for n in (0..w.len()).rev() {
        tails[n] = acc / total;
        acc += w[n];
    }
    tails
}

/// Picks `nmax` so that the modelled stationary mass beyond it is below `eps`.
///
/// The tail model follows the local flux balance of all channels, so it captures
/// Poisson-like (two-photon) and geometric (one-photon) tails alike. The cut-off is
/// taken at `eps · 1e-3`, then widened by 20% plus 10 states, and never below 20.
pub fn choose_truncation(rates: &impl RateFunctions, eps: f64) -> usize {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1), got {eps}");
    let tails = tail_fractions(&Channels::new(rates).log_weights());
    let cut = tails.iter().position(|&t| t < eps * TAIL_SAFETY).unwrap_or(tails.len());
    let nmax = (1.2 * cut as f64).ceil() as usize + 10;
    nmax.clamp(MIN_NMAX, MAX_NMAX)
}

/// Modelled stationary mass beyond `nmax`.
pub fn tail_estimate(rates: &impl RateFunctions, nmax: usize) -> f64 {
    let tails = tail_fractions(&Channels::new(rates).log_weights());
    tails.get(nmax).copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{DimensionlessParams, FamilyRates, RawRates};

    fn dim(nu: f64, s: f64, sigma: f64, r: f64) -> DimensionlessParams {
        DimensionlessParams { nu, s, sigma, r }
    }

    #[test]
    fn two_photon_ratio_is_poisson_like() {
        // only two-photon processes: t^2 (n+1)(n+2) ≈ r^2 far out
        let rates = dim(0.0, 0.0, 0.0, 3.0);
        let t = Channels::new(&rates).local_ratio(200);
        let expect = 3.0 / ((201.0f64) * 202.0).sqrt();
        assert!((t / expect - 1.0).abs() < 0.02, "{t} vs {expect}");
    }

    #[test]
    fn one_photon_ratio_is_geometric() {
        // birth-death limit: t = s (n+1) / (n+1) = s
        let rates = FamilyRates::from(RawRates { d1a: 1.0, d1e: 0.4, ..RawRates::default() });
        let t = Channels::new(&rates).local_ratio(10);
        assert!((t - 0.4).abs() < 1e-9);
    }

    #[test]
    fn paeos_scale_truncations() {
        let n1 = choose_truncation(&dim(0.0, 0.0, 0.0, 1.0), 1e-12);
        assert!(n1 >= 30, "nmax = {n1}");
        let r = 10.0f64;
        let n10 = choose_truncation(&dim(0.0, 0.0, 0.0, r), 1e-12);
        let scale = r + 10.0 * r.sqrt();
        assert!(n10 as f64 >= scale && (n10 as f64) <= 3.0 * scale, "nmax = {n10}");
    }

    #[test]
    fn floor_and_monotone_in_eps() {
        assert_eq!(choose_truncation(&dim(1.0, 0.0, 0.0, 0.1), 0.5), MIN_NMAX);
        let p = dim(1.0, 0.5, 1.0, 2.0);
        assert!(choose_truncation(&p, 1e-14) >= choose_truncation(&p, 1e-6));
    }

    #[test]
    fn pure_emission_never_decays() {
        let rates = FamilyRates::from(RawRates { d1e: 1.0, ..RawRates::default() });
        assert_eq!(choose_truncation(&rates, 1e-12), MAX_NMAX);
    }
}
