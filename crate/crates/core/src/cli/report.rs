//! Machine-readable reports. Every float is written with 17 significant digits so that a
//! round trip through JSON or CSV reproduces the `f64` bit for bit.

use serde::ser::Serializer;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::distribution::PhotonDistribution;
use crate::wigner::RadialWignerCurve;

/// `f64` written as `d.dddddddddddddddde±x`; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_f64(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsOut {
    pub nu: Num,
    pub s: Num,
    pub sigma: Num,
    pub r: Num,
}

#[derive(Debug, Clone, Serialize)]
#[allow(non_snake_case)]
pub struct ConstantsOut {
    pub R: Num,
    pub h: Num,
    pub g: Num,
    pub a: Num,
    pub c: Num,
}

/// Summary statistics and the probability table shared by all distribution reports.
#[derive(Debug, Clone, Serialize)]
pub struct DistributionOut {
    pub nmax: usize,
    pub total: Num,
    pub tail_bound: Num,
    pub mean: Num,
    pub n2: Num,
    pub mandel_q: Option<Num>,
    pub purity: Num,
    pub probabilities: Vec<Num>,
}

impl DistributionOut {
    pub fn from_distribution(d: &PhotonDistribution) -> Self {
        DistributionOut {
            nmax: d.nmax,
            total: Num(d.total()),
            tail_bound: Num(d.tail_bound),
            mean: Num(d.mean()),
            n2: Num(d.factorial_moment(2)),
            mandel_q: d.mandel_q().map(Num),
            purity: Num(d.purity()),
            probabilities: nums(&d.probs),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub command: &'static str,
    pub params: ParamsOut,
    pub constants: ConstantsOut,
    /// closed-form `N1`, `N2`, `Q` from the generating function itself
    pub exact_mean: Num,
    pub exact_n2: Num,
    pub exact_mandel_q: Option<Num>,
    pub distribution: DistributionOut,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub command: &'static str,
    pub method: &'static str,
    pub residual: Num,
    pub parity_weight: Option<Num>,
    pub distribution: DistributionOut,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitsReport {
    pub command: &'static str,
    pub case: &'static str,
    pub s: Num,
    pub sigma: Num,
    pub rho: Option<Num>,
    /// `1 + σ/s` or `1 + γ`
    pub exponent: Num,
    pub exact_mean: Num,
    pub distribution: DistributionOut,
}

#[derive(Debug, Clone, Serialize)]
pub struct PaeosReport {
    pub command: &'static str,
    pub r: Num,
    pub beta: Num,
    #[serde(rename = "S")]
    pub s_eff: Option<Num>,
    pub beta_threshold: Num,
    pub mandel_q: Option<Num>,
    pub mandel_q_weak: Option<Num>,
    pub purity: Num,
    pub distribution: DistributionOut,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub command: &'static str,
    pub figure: Option<u8>,
    pub r: Num,
    pub beta: Num,
    pub xmax: Num,
    pub points: usize,
    pub x: Vec<Num>,
    #[serde(rename = "W")]
    pub w: Vec<Num>,
}

impl CurveReport {
    pub fn new(figure: Option<u8>, r: f64, beta: f64, curve: &RadialWignerCurve) -> Self {
        CurveReport {
            command: if figure.is_some() { "figure" } else { "wigner" },
            figure,
            r: Num(r),
            beta: Num(beta),
            xmax: Num(*curve.xs.last().unwrap_or(&0.0)),
            points: curve.xs.len(),
            x: nums(&curve.xs),
            w: nums(&curve.ws),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub max_deviation: Num,
    pub tolerance: Num,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub quick: bool,
    pub pass: bool,
    pub checks: Vec<CheckOut>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Report {
    Solve(SolveReport),
    Oracle(OracleReport),
    Limits(LimitsReport),
    Paeos(PaeosReport),
    Curve(CurveReport),
    Verify(VerifyReport),
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// `n,p_n` for distributions, `x,W` for curves, one row per check for `verify`.
    pub fn to_csv(&self) -> String {
        let probs = |d: &DistributionOut| {
            let mut out = String::from("n,p_n\n");
            for (n, p) in d.probabilities.iter().enumerate() {
                out.push_str(&format!("{n},{}\n", fmt_f64(p.0)));
            }
            out
        };
        match self {
            Report::Solve(r) => probs(&r.distribution),
            Report::Oracle(r) => probs(&r.distribution),
            Report::Limits(r) => probs(&r.distribution),
            Report::Paeos(r) => probs(&r.distribution),
            Report::Curve(r) => {
                let mut out = String::from("x,W\n");
                for (x, w) in r.x.iter().zip(&r.w) {
                    out.push_str(&format!("{},{}\n", fmt_f64(x.0), fmt_f64(w.0)));
                }
                out
            }
            Report::Verify(r) => {
                let mut out = String::from("check,max_deviation,tolerance,pass\n");
                for c in &r.checks {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        c.name,
                        fmt_f64(c.max_deviation.0),
                        fmt_f64(c.tolerance.0),
                        c.pass
                    ));
                }
                out
            }
        }
    }

    /// Human-readable table for `verify`.
    pub fn to_table(&self) -> Option<String> {
        let Report::Verify(r) = self else { return None };
        let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  {:>12}  {:>9}  result\n", "check", "max dev", "tol");
        for c in &r.checks {
            out.push_str(&format!(
                "{:<width$}  {:>12.3e}  {:>9.1e}  {}\n",
                c.name,
                c.max_deviation.0,
                c.tolerance.0,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        let failed = r.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!("{} checks, {} failed\n", r.checks.len(), failed));
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let json = serde_json::to_string(&Num(x)).unwrap();
            assert_eq!(json, s);
            let back: f64 = serde_json::from_str(&json).unwrap();
            assert_eq!(back, x);
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
    }

    #[test]
    fn csv_layouts() {
        let d = PhotonDistribution::new(vec![0.75, 0.25], 0.0);
        let out = DistributionOut::from_distribution(&d);
        let rep = Report::Oracle(OracleReport {
            command: "oracle",
            method: "nullspace",
            residual: Num(0.0),
            parity_weight: None,
            distribution: out,
        });
        assert_eq!(rep.to_csv(), "n,p_n\n0,7.5000000000000000e-1\n1,2.5000000000000000e-1\n");
        let curve = RadialWignerCurve { xs: vec![0.0, 1.0], ws: vec![2.0, -0.5] };
        let c = Report::Curve(CurveReport::new(None, 1.0, 0.0, &curve));
        assert!(c.to_csv().starts_with("x,W\n0.0000000000000000e0,2.0000000000000000e0\n"));
    }
}
