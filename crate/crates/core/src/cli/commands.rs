use std::path::Path;

use super::report::{
    ConstantsOut, CurveReport, DistributionOut, LimitsReport, Num, OracleReport, PaeosReport, ParamsOut, Report,
    SolveReport,
};
use super::{verify, CliError, LimitCase, OracleMethod, ParamFlags};
use crate::distribution::PhotonDistribution;
use crate::gf::{
    closed_form, factorial_moment, mandel_q, negbin_limit, no_two_photon_absorption, paeos_limit, paeos_mandel_q,
    paeos_mandel_q_weak, paeos_probabilities, paeos_threshold, photon_probabilities, No2aForm, PaeosLimit, PaeosParams,
};
use crate::rates::{DimensionlessParams, FamilyRates, GeneratorMatrix, RawRates, RateFunctions};
use crate::steady::{choose_truncation, evolve_to_steady, steady_state, EvolveOptions};
use crate::wigner::{purity_paeos, RadialWignerCurve};

impl ParamFlags {
    fn any(&self) -> bool {
        self.nu.is_some() || self.s.is_some() || self.sigma.is_some() || self.r.is_some()
    }

    /// All four flags, each required.
    pub fn dimensionless(&self) -> Result<DimensionlessParams, CliError> {
        let get = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("missing --{name}")));
        let p = DimensionlessParams::new(get(self.nu, "nu")?, get(self.s, "s")?, get(self.sigma, "sigma")?, get(self.r, "r")?)?;
        Ok(p)
    }
}

fn truncation(rates: &impl RateFunctions, nmax: Option<usize>, eps: f64) -> usize {
    nmax.unwrap_or_else(|| choose_truncation(rates, eps))
}

fn check_nmax(nmax: usize) -> Result<(), CliError> {
    if nmax < 4 {
        return Err(CliError::Usage(format!("nmax must be at least 4, got {nmax}")));
    }
    Ok(())
}

pub fn cmd_solve(flags: &ParamFlags, nmax: Option<usize>, eps: f64) -> Result<Report, CliError> {
    let p = flags.dimensionless()?;
    let cf = closed_form(p)?;
    let nmax = truncation(&p, nmax, eps);
    check_nmax(nmax)?;
    let dist = photon_probabilities(&cf, nmax)?;
    let exact_mean = factorial_moment(&cf, 1)?;
    Ok(Report::Solve(SolveReport {
        command: "solve",
        params: ParamsOut { nu: Num(p.nu), s: Num(p.s), sigma: Num(p.sigma), r: Num(p.r) },
        constants: ConstantsOut { R: Num(cf.R), h: Num(cf.h), g: Num(cf.g), a: Num(cf.a), c: Num(cf.c) },
        exact_mean: Num(exact_mean),
        exact_n2: Num(factorial_moment(&cf, 2)?),
        exact_mandel_q: if exact_mean > 0.0 { Some(Num(mandel_q(&cf)?)) } else { None },
        distribution: DistributionOut::from_distribution(&dist),
    }))
}

/// Reads a general-family JSON config; absent keys default to zero.
pub fn load_config(path: &Path) -> Result<FamilyRates, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let rates: FamilyRates =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
    rates.validate()?;
    Ok(rates)
}

fn oracle_with(
    rates: &impl RateFunctions,
    beta0: Option<f64>,
    nmax: Option<usize>,
    method: OracleMethod,
    eps: f64,
) -> Result<Report, CliError> {
    let nmax = truncation(rates, nmax, eps);
    check_nmax(nmax)?;
    let g = GeneratorMatrix::from_rates(rates, nmax)?;
    let rep = match method {
        OracleMethod::Nullspace => steady_state(&g, beta0)?,
        OracleMethod::Evolve => {
            let beta = beta0.unwrap_or(0.0);
            if !(0.0..=1.0).contains(&beta) {
                return Err(CliError::Usage(format!("--beta0 must lie in [0, 1], got {beta}")));
            }
            let p0 = PhotonDistribution::vacuum(nmax).mix(&PhotonDistribution::fock(1, nmax), beta);
            evolve_to_steady(&g, &p0, 1e-11, EvolveOptions::default())?
        }
    };
    Ok(Report::Oracle(OracleReport {
        command: "oracle",
        method: match rep.method {
            crate::steady::SteadyMethod::Nullspace => "nullspace",
            crate::steady::SteadyMethod::Evolve => "evolve",
        },
        residual: Num(rep.residual),
        parity_weight: rep.parity_weight.map(Num),
        distribution: DistributionOut::from_distribution(&rep.distribution),
    }))
}

pub fn cmd_oracle(
    flags: &ParamFlags,
    config: Option<&Path>,
    beta0: Option<f64>,
    nmax: Option<usize>,
    method: OracleMethod,
    eps: f64,
) -> Result<Report, CliError> {
    match config {
        Some(path) => oracle_with(&load_config(path)?, beta0, nmax, method, eps),
        None if flags.any() => oracle_with(&flags.dimensionless()?, beta0, nmax, method, eps),
        None => Err(CliError::Usage("oracle needs --nu --s --sigma --r or --config FILE".into())),
    }
}

pub fn cmd_limits(case: LimitCase, s: f64, sigma: f64, rho: f64, nmax: Option<usize>, eps: f64) -> Result<Report, CliError> {
    // the same process as a rate model, used only to size the truncation
    let model = FamilyRates::from(RawRates { d1a: 1.0, d1e: s, d11e: sigma, d2e: rho, ..RawRates::default() });
    let (name, dist, exponent, exact_mean, rho_out) = match case {
        LimitCase::Negbin => {
            if rho != 0.0 {
                return Err(CliError::Usage("--rho applies to --case no2a only".into()));
            }
            let nb = negbin_limit(s, sigma)?;
            let n = truncation(&model, nmax, eps);
            check_nmax(n)?;
            ("negbin", nb.probabilities(n), nb.alpha(), nb.mean(), None)
        }
        LimitCase::No2a => {
            let l = no_two_photon_absorption(No2aForm { rho, s, sigma })?;
            let n = truncation(&model, nmax, eps);
            check_nmax(n)?;
            ("no2a", l.probabilities(n), 1.0 + l.gamma, l.mean(), Some(Num(rho)))
        }
    };
    Ok(Report::Limits(LimitsReport {
        command: "limits",
        case: name,
        s: Num(s),
        sigma: Num(sigma),
        rho: rho_out,
        exponent: Num(exponent),
        exact_mean: Num(exact_mean),
        distribution: DistributionOut::from_distribution(&dist),
    }))
}

pub fn cmd_paeos(r: f64, beta: Option<f64>, s_eff: Option<f64>, nmax: Option<usize>, eps: f64) -> Result<Report, CliError> {
    let params = match (beta, s_eff) {
        (Some(b), None) => PaeosParams::new(b, r)?,
        (None, Some(s)) => {
            // S = σ when s = 0
            let dim = DimensionlessParams::new(0.0, 0.0, s, r)?;
            match paeos_limit(dim)? {
                PaeosLimit::Mixture(p) => p,
                PaeosLimit::Vacuum => PaeosParams { beta: 0.0, r: 0.0, s_eff: Some(0.0) },
            }
        }
        _ => return Err(CliError::Usage("paeos needs exactly one of --beta and --S".into())),
    };
    let two_photon = DimensionlessParams { nu: 0.0, s: 0.0, sigma: 0.0, r };
    let n = truncation(&two_photon, nmax, eps);
    check_nmax(n)?;
    let dist = paeos_probabilities(&params, n)?;
    let weak = match params.s_eff {
        Some(s) if r > 0.0 => Some(Num(paeos_mandel_q_weak(r, s)?)),
        _ => None,
    };
    Ok(Report::Paeos(PaeosReport {
        command: "paeos",
        r: Num(r),
        beta: Num(params.beta),
        s_eff: params.s_eff.map(Num),
        beta_threshold: Num(paeos_threshold(r)),
        mandel_q: if r > 0.0 { Some(Num(paeos_mandel_q(&params)?)) } else { None },
        mandel_q_weak: weak,
        purity: Num(purity_paeos(&params)),
        distribution: DistributionOut::from_distribution(&dist),
    }))
}

fn curve(figure: Option<u8>, r: f64, beta: f64, xmax: f64, points: usize) -> Result<Report, CliError> {
    let p = PaeosParams::new(beta, r)?;
    if r == 0.0 {
        return Err(CliError::Usage("wigner needs r > 0".into()));
    }
    let c = RadialWignerCurve::paeos(&p, xmax, points)?;
    Ok(Report::Curve(CurveReport::new(figure, r, beta, &c)))
}

pub fn cmd_wigner(r: f64, beta: f64, xmax: f64, points: usize) -> Result<Report, CliError> {
    curve(None, r, beta, xmax, points)
}

/// `(β, r)` of figures 1–3.
pub fn figure_preset(id: u8) -> Option<(f64, f64)> {
    match id {
        1 => Some((0.0, 10.0)),
        2 => Some((1.0, 10.0)),
        3 => Some((0.5, 10.0)),
        _ => None,
    }
}

pub fn cmd_figure(id: u8, xmax: f64, points: usize) -> Result<Report, CliError> {
    let (beta, r) = figure_preset(id).ok_or_else(|| CliError::Usage(format!("figure id must be 1, 2 or 3, got {id}")))?;
    curve(Some(id), r, beta, xmax, points)
}

pub fn cmd_verify(quick: bool, perturb: f64) -> Result<Report, CliError> {
    let report = verify::run_checks(quick, perturb);
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    let report = Report::Verify(report);
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed, report: Box::new(report) });
    }
    Ok(report)
}
