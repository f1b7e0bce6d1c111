//! Verification campaigns built from the analytic and oracle layers:
//! degeneracy ladders, Gram matrices, sweep tables and named check suites.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{pt_params, BoundState};
use crate::model::{MassModel, Parity, QuantumNumbers};
use crate::oracle::{log_grid, max_relative_residual, radial_residual, solve_pt};
use crate::pct::{u_d_closed, u_d_general, PctMap};
use crate::specfun::quad;
use crate::{Error, Result};

/// Pass/fail thresholds shared by every campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative oracle-vs-analytic energy mismatch.
    pub oracle_rel: f64,
    /// `|int R^2 dr - 1|`.
    pub norm: f64,
    /// Radial-equation residual relative to the largest operator term.
    pub residual_rel: f64,
    /// Entrywise `|G - I|` of the Gram matrix.
    pub orthonormality: f64,
    /// Ladder spread, relative to the largest rung energy, below which the
    /// rungs count as degenerate.
    pub degeneracy_rel: f64,
    /// Closed-form vs derivative-built transform quantities, relative.
    pub transform_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            oracle_rel: 1e-5,
            norm: 1e-8,
            residual_rel: 1e-8,
            orthonormality: 1e-8,
            degeneracy_rel: 1e-9,
            transform_rel: 1e-10,
        }
    }
}

pub const DEFAULT_GRID: usize = 8192;

/// Radii used for residual checks.
pub fn residual_radii() -> Vec<f64> {
    log_grid(0.05, 20.0, 200)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderRung {
    pub n_r: u32,
    pub ell: u32,
    pub d: u32,
    pub ell_d: f64,
    pub e_analytic: f64,
    pub e_numeric: Option<f64>,
    pub abs_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub zeta: f64,
    pub ladder: Vec<LadderRung>,
    pub max_pairwise_spread: f64,
    /// Whether the rungs are degenerate within `Tolerances::degeneracy_rel`.
    pub claim_satisfied: bool,
    /// Whether every rung's oracle energy matched its analytic energy;
    /// `None` when the oracle was not run.
    pub oracle_confirmed: Option<bool>,
}

/// Energies along `(ell - k, d_start + 2k)`, `k = 0..=ell`. The rungs share
/// `ell_d`; whether they share an energy is measured, not assumed.
pub fn degeneracy_ladder(
    n_r: u32,
    ell: u32,
    d_start: u32,
    zeta: f64,
    oracle_grid: Option<usize>,
    tolerances: &Tolerances,
) -> Result<DegeneracyReport> {
    if ell == 0 {
        return Err(Error::InvalidInput(
            "a ladder needs ell >= 1 for at least two rungs".into(),
        ));
    }
    if !(d_start == 2 || d_start == 3) {
        return Err(Error::InvalidInput(format!(
            "ladders start at d = 2 or d = 3, got {d_start}"
        )));
    }
    let rungs: Vec<QuantumNumbers> = (0..=ell)
        .map(|k| QuantumNumbers::radial(n_r, ell - k, d_start + 2 * k))
        .collect::<Result<_>>()?;
    let ladder = rungs
        .par_iter()
        .map(|qn| {
            let params = pt_params(qn, zeta)?;
            let e_analytic = params.energy(n_r);
            let e_numeric = match oracle_grid {
                Some(grid) => {
                    let report = solve_pt(&params, n_r as usize + 1, grid)?;
                    report.energy(n_r as usize)
                }
                None => None,
            };
            Ok(LadderRung {
                n_r,
                ell: qn.ell,
                d: qn.d,
                ell_d: qn.ell_d()?.to_f64(),
                e_analytic,
                e_numeric,
                abs_err: e_numeric.map(|e| (e - e_analytic).abs()),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (lo, hi) = ladder
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.e_analytic), hi.max(r.e_analytic))
        });
    let spread = hi - lo;
    let scale = ladder
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.e_analytic.abs()));
    let oracle_confirmed = oracle_grid.map(|_| {
        ladder.iter().all(|r| {
            r.abs_err
                .is_some_and(|err| err <= tolerances.oracle_rel * r.e_analytic.abs())
        })
    });
    Ok(DegeneracyReport {
        zeta,
        max_pairwise_spread: spread,
        claim_satisfied: spread <= tolerances.degeneracy_rel * scale,
        ladder,
        oracle_confirmed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub matrix: Vec<Vec<f64>>,
    /// `max |G - I|` over all entries.
    pub max_deviation: f64,
    pub max_asymmetry: f64,
}

/// Gram matrix of the normalized `phi_n`, `n = 0..=n_max`, for one `(ell, d)`.
pub fn orthonormality_matrix(
    ell: u32,
    d: u32,
    parity: Option<Parity>,
    zeta: f64,
    n_max: u32,
) -> Result<GramReport> {
    if n_max > 10 {
        return Err(Error::InvalidInput(format!(
            "n_max must be at most 10, got {n_max}"
        )));
    }
    let base = QuantumNumbers::new(0, ell, d, parity)?;
    let states = (0..=n_max)
        .map(|n| BoundState::new(base.with_n(n), zeta))
        .collect::<Result<Vec<_>>>()?;
    let matrix = states
        .iter()
        .map(|a| {
            states
                .iter()
                .map(|b| a.overlap(b))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_deviation = 0.0_f64;
    let mut max_asymmetry = 0.0_f64;
    for (i, row) in matrix.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((g - target).abs());
            max_asymmetry = max_asymmetry.max((g - matrix[j][i]).abs());
        }
    }
    Ok(GramReport {
        matrix,
        max_deviation,
        max_asymmetry,
    })
}

/// `|int R^2 dr - 1|` computed from the closed radial formula through
/// `r = tan(zeta t)/zeta`, independent of the `phi` route used to normalize.
pub fn radial_norm_error(state: &BoundState) -> Result<f64> {
    let zeta = state.zeta();
    let limit = FRAC_PI_2 / zeta;
    let half = quad(
        |t| {
            let c = (zeta * t).cos();
            state.radial((zeta * t).tan() / zeta).powi(2) / (c * c)
        },
        0.0,
        limit,
        1e-13,
    )?
    .value;
    let total = if state.qn().d == 1 { 2.0 * half } else { half };
    Ok((total - 1.0).abs())
}

/// Perturbs one state's energy before comparison, for exercising FAIL paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultInjection {
    pub qn: QuantumNumbers,
    pub zeta: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_max: u32,
    pub ell_max: u32,
    pub dims: Vec<u32>,
    pub zetas: Vec<f64>,
    /// Restricts `d = 1` rows to one parity; both otherwise.
    pub parity: Option<Parity>,
    pub grid_size: usize,
    pub run_oracle: bool,
    pub tolerances: Tolerances,
    pub fault: Option<FaultInjection>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_max: 4,
            ell_max: 2,
            dims: vec![3],
            zetas: vec![1.0],
            parity: None,
            grid_size: DEFAULT_GRID,
            run_oracle: true,
            tolerances: Tolerances::default(),
            fault: None,
        }
    }
}

impl SweepConfig {
    /// `(n = 0` representative, zeta) for every `(ell, d, parity, zeta)` family
    /// in output order.
    pub fn families(&self) -> Result<Vec<(QuantumNumbers, f64)>> {
        let mut out = Vec::new();
        for &zeta in &self.zetas {
            for &d in &self.dims {
                if d == 1 {
                    let parities = match self.parity {
                        Some(p) => vec![p],
                        None => vec![Parity::Even, Parity::Odd],
                    };
                    for p in parities {
                        out.push((QuantumNumbers::line(0, p), zeta));
                    }
                } else {
                    for ell in 0..=self.ell_max {
                        out.push((QuantumNumbers::radial(0, ell, d)?, zeta));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub zeta: f64,
    pub n_r: u32,
    pub ell: u32,
    pub d: u32,
    pub parity: Option<Parity>,
    pub ell_d: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub delta: f64,
    pub e_analytic: f64,
    pub e_numeric: Option<f64>,
    pub rel_err: Option<f64>,
    pub nodes: usize,
    pub norm_error: f64,
    pub residual_max: f64,
    pub pass: bool,
    pub error: Option<String>,
}

impl ComparisonRow {
    fn failed(qn: QuantumNumbers, zeta: f64, err: &Error) -> Self {
        Self {
            zeta,
            n_r: qn.n_r,
            ell: qn.ell,
            d: qn.d,
            parity: qn.parity,
            ell_d: qn.ell_d().map(|l| l.to_f64()).unwrap_or(f64::NAN),
            kappa: f64::NAN,
            lambda: f64::NAN,
            delta: f64::NAN,
            e_analytic: f64::NAN,
            e_numeric: None,
            rel_err: None,
            nodes: 0,
            norm_error: f64::NAN,
            residual_max: f64::NAN,
            pass: false,
            error: Some(err.to_string()),
        }
    }
}

fn family_rows(config: &SweepConfig, base: QuantumNumbers, zeta: f64) -> Vec<ComparisonRow> {
    let oracle = if config.run_oracle {
        pt_params(&base, zeta)
            .and_then(|p| solve_pt(&p, config.n_max as usize + 1, config.grid_size))
            .map(Some)
    } else {
        Ok(None)
    };
    let radii = residual_radii();
    (0..=config.n_max)
        .map(|n| {
            let qn = base.with_n(n);
            let row = || -> Result<ComparisonRow> {
                let mut state = BoundState::new(qn, zeta)?;
                if let Some(fault) = config.fault {
                    if fault.qn == qn && fault.zeta == zeta {
                        state = state.clone().with_energy(state.energy() + fault.delta);
                    }
                }
                let p = *state.params();
                let e_analytic = state.energy();
                let e_numeric = match &oracle {
                    Ok(Some(report)) => report.energy(n as usize),
                    Ok(None) => None,
                    Err(e) => return Err(e.clone()),
                };
                let rel_err = e_numeric.map(|e| (e - e_analytic).abs() / e_analytic.abs());
                let nodes = state.nodes();
                let norm_error = radial_norm_error(&state)?;
                let residual_max = max_relative_residual(&radial_residual(&state, &radii)?);
                let tol = &config.tolerances;
                let pass = rel_err.is_none_or(|r| r <= tol.oracle_rel)
                    && nodes == n as usize
                    && norm_error <= tol.norm
                    && residual_max <= tol.residual_rel;
                Ok(ComparisonRow {
                    zeta,
                    n_r: n,
                    ell: qn.ell,
                    d: qn.d,
                    parity: qn.parity,
                    ell_d: p.ell_d.to_f64(),
                    kappa: p.kappa,
                    lambda: p.lambda,
                    delta: p.delta,
                    e_analytic,
                    e_numeric,
                    rel_err,
                    nodes,
                    norm_error,
                    residual_max,
                    pass,
                    error: None,
                })
            };
            row().unwrap_or_else(|e| ComparisonRow::failed(qn, zeta, &e))
        })
        .collect()
}

/// One row per state of the sweep, in sweep order. Failures are recorded in
/// the affected rows rather than aborting.
pub fn full_comparison(config: &SweepConfig) -> Result<Vec<ComparisonRow>> {
    if config.run_oracle {
        crate::oracle::check_sizes(config.n_max as usize + 1, config.grid_size)?;
    }
    for &zeta in &config.zetas {
        MassModel::squared_lorentzian(zeta)?;
    }
    let families = config.families()?;
    let rows: Vec<Vec<ComparisonRow>> = families
        .par_iter()
        .map(|&(base, zeta)| family_rows(config, base, zeta))
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Named groups of checks run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Transform,
    Spectrum,
    Residual,
    Structure,
    Scaling,
    Degeneracy,
    Convergence,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Transform,
        Suite::Spectrum,
        Suite::Residual,
        Suite::Structure,
        Suite::Scaling,
        Suite::Degeneracy,
        Suite::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Transform => "transform",
            Suite::Spectrum => "spectrum",
            Suite::Residual => "residual",
            Suite::Structure => "structure",
            Suite::Scaling => "scaling",
            Suite::Degeneracy => "degeneracy",
            Suite::Convergence => "convergence",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::ALL)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub check: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckOutcome {
    fn at_most(suite: Suite, check: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            suite: suite.name(),
            check: check.into(),
            measured,
            threshold,
            pass: measured <= threshold,
        }
    }
}

pub const SWEEP_DIMS: [u32; 4] = [1, 2, 3, 5];
pub const SWEEP_ZETAS: [f64; 3] = [0.5, 1.0, 2.0];

/// Runs the checks of `suite` (every suite for [`Suite::All`]).
pub fn run_suite(suite: Suite, grid_size: usize, tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::ALL.to_vec()
    } else {
        vec![suite]
    };
    let mut out = Vec::new();
    for s in suites {
        match s {
            Suite::Transform => out.extend(transform_checks(tol)?),
            Suite::Spectrum => out.extend(spectrum_checks(grid_size, tol)?),
            Suite::Residual => out.extend(residual_checks(tol)?),
            Suite::Structure => out.extend(structure_checks(tol)?),
            Suite::Scaling => out.extend(scaling_checks()?),
            Suite::Degeneracy => out.extend(degeneracy_checks(grid_size, tol)?),
            Suite::Convergence => out.extend(convergence_checks()?),
            Suite::All => unreachable!(),
        }
    }
    Ok(out)
}

/// Worst relative gap between closed-form and derivative-built `U_d`, and
/// between the two `V_eff` routes, over `r in [0.01, 20]`.
pub fn transform_mismatch(zeta: f64, d: u32) -> Result<(f64, f64)> {
    let model = MassModel::squared_lorentzian(zeta)?;
    let map = PctMap::new(model.clone(), d)?;
    let radii = log_grid(0.01, 20.0, 400);
    let mut worst_u = 0.0_f64;
    let mut worst_v = 0.0_f64;
    for &r in &radii {
        let q = map.q_of_r(r)?;
        let general = u_d_general(&model, d, r)?;
        let closed = u_d_closed(zeta, d, q)?;
        worst_u = worst_u.max((general - closed).abs() / (1.0 + general.abs()));
    }
    let ell_ds: Vec<_> = if d == 1 {
        vec![-1, 0]
    } else {
        (0..=2).map(|ell| 2 * ell + d as i64 - 3).collect()
    };
    for twice in ell_ds {
        let v = map.effective_potential(crate::model::HalfInteger::from_twice(twice));
        for &r in &radii {
            let q = map.q_of_r(r)?;
            let a = v.general(q)?;
            let b = v.closed(q)?;
            worst_v = worst_v.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
        }
    }
    Ok((worst_u, worst_v))
}

fn transform_checks(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let mut worst_u = 0.0_f64;
    let mut worst_v = 0.0_f64;
    for &zeta in &SWEEP_ZETAS {
        for &d in &SWEEP_DIMS {
            let (u, v) = transform_mismatch(zeta, d)?;
            worst_u = worst_u.max(u);
            worst_v = worst_v.max(v);
        }
    }
    Ok(vec![
        CheckOutcome::at_most(
            Suite::Transform,
            "u_d closed vs general",
            worst_u,
            tol.transform_rel,
        ),
        CheckOutcome::at_most(
            Suite::Transform,
            "v_eff closed vs general",
            worst_v,
            tol.transform_rel,
        ),
    ])
}

fn spectrum_checks(grid_size: usize, tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let config = SweepConfig {
        n_max: 4,
        ell_max: 2,
        dims: SWEEP_DIMS.to_vec(),
        zetas: SWEEP_ZETAS.to_vec(),
        grid_size,
        tolerances: *tol,
        ..SweepConfig::default()
    };
    let families = config.families()?;
    let worst = families
        .par_iter()
        .map(|&(base, zeta)| -> Result<f64> {
            let p = pt_params(&base, zeta)?;
            let report = solve_pt(&p, 5, grid_size)?;
            Ok((0..5u32)
                .map(|n| {
                    let e = p.energy(n);
                    (report.energy(n as usize).unwrap_or(f64::NAN) - e).abs() / e.abs()
                })
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut out = vec![CheckOutcome::at_most(
        Suite::Spectrum,
        "oracle vs analytic, n<=4 ell<=2 d in {1,2,3,5} zeta in {0.5,1,2}",
        worst,
        tol.oracle_rel,
    )];
    for (label, qn, expected) in anchors() {
        let p = pt_params(&qn, 1.0)?;
        let report = solve_pt(&p, qn.n_r as usize + 1, grid_size)?;
        let numeric = report.energy(qn.n_r as usize).unwrap_or(f64::NAN);
        let analytic = p.energy(qn.n_r);
        let gap =
            ((numeric - expected).abs() / expected).max((analytic - expected).abs() / expected);
        out.push(CheckOutcome::at_most(
            Suite::Spectrum,
            label,
            gap,
            tol.oracle_rel,
        ));
    }
    Ok(out)
}

/// Fixed anchor energies at `zeta = 1`.
pub fn anchors() -> Vec<(&'static str, QuantumNumbers, f64)> {
    vec![
        (
            "E(0,0,3)=7.5",
            QuantumNumbers::radial(0, 0, 3).expect("valid"),
            7.5,
        ),
        (
            "E(1,0,3)=17.5",
            QuantumNumbers::radial(1, 0, 3).expect("valid"),
            17.5,
        ),
        (
            "E(0,d=1 even)=1.5",
            QuantumNumbers::line(0, Parity::Even),
            1.5,
        ),
        (
            "E(0,d=1 odd)=4.0",
            QuantumNumbers::line(0, Parity::Odd),
            4.0,
        ),
    ]
}

fn residual_checks(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let config = SweepConfig {
        n_max: 3,
        ell_max: 2,
        dims: vec![1, 3, 5],
        zetas: SWEEP_ZETAS.to_vec(),
        ..SweepConfig::default()
    };
    let radii = residual_radii();
    let mut states = Vec::new();
    for (base, zeta) in config.families()? {
        for n in 0..=config.n_max {
            states.push((base.with_n(n), zeta));
        }
    }
    let worst = states
        .par_iter()
        .map(|&(qn, zeta)| -> Result<f64> {
            let state = BoundState::new(qn, zeta)?;
            Ok(max_relative_residual(&radial_residual(&state, &radii)?))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(vec![CheckOutcome::at_most(
        Suite::Residual,
        "radial equation residual, n<=3 ell<=2 d in {1,3,5}",
        worst,
        tol.residual_rel,
    )])
}

/// `(max |nodes - n_r|, max Gram deviation, max relative spread of
/// R / (m^(1/4) phi(q)))` over the structure sweep.
fn structure_checks(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let config = SweepConfig {
        n_max: 4,
        ell_max: 2,
        dims: SWEEP_DIMS.to_vec(),
        zetas: vec![1.0],
        ..SweepConfig::default()
    };
    let mut node_misses = 0usize;
    let mut gram = 0.0_f64;
    let mut ratio_var = 0.0_f64;
    for (base, zeta) in config.families()? {
        let report = orthonormality_matrix(base.ell, base.d, base.parity, zeta, config.n_max)?;
        gram = gram.max(report.max_deviation);
        for n in 0..=config.n_max {
            let state = BoundState::new(base.with_n(n), zeta)?;
            if state.nodes() != n as usize {
                node_misses += 1;
            }
            ratio_var = ratio_var.max(pct_ratio_variance(&state)?);
        }
    }
    Ok(vec![
        CheckOutcome::at_most(
            Suite::Structure,
            "node count mismatches",
            node_misses as f64,
            0.0,
        ),
        CheckOutcome::at_most(Suite::Structure, "gram |G - I|", gram, tol.orthonormality),
        CheckOutcome::at_most(Suite::Structure, "variance of R/(g phi)", ratio_var, 1e-16),
    ])
}

/// Variance of `R(r) / (m(r)^(1/4) phi(q(r)))` over 50 radii, skipping
/// points where either side vanishes.
pub fn pct_ratio_variance(state: &BoundState) -> Result<f64> {
    let zeta = state.zeta();
    let map = PctMap::new(MassModel::squared_lorentzian(zeta)?, state.qn().d)?;
    let ratios = (1..=50)
        .map(|k| -> Result<Option<f64>> {
            let r = 0.1 * k as f64 / zeta;
            let via_q = map.g_of_r(r)? * state.phi(map.q_of_r(r)?);
            let direct = state.radial(r);
            Ok((via_q.abs() > 1e-250 && direct.abs() > 1e-250).then(|| direct / via_q))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(ratios.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / ratios.len() as f64)
}

fn scaling_checks() -> Result<Vec<CheckOutcome>> {
    let mut worst = 0.0_f64;
    for zeta in [0.5, 2.0, 3.7] {
        for d in SWEEP_DIMS {
            for ell in 0..=2 {
                for n in 0..=4 {
                    let qns = if d == 1 {
                        if ell > 0 {
                            continue;
                        }
                        vec![
                            QuantumNumbers::line(n, Parity::Even),
                            QuantumNumbers::line(n, Parity::Odd),
                        ]
                    } else {
                        vec![QuantumNumbers::radial(n, ell, d)?]
                    };
                    for qn in qns {
                        let scaled = crate::analytic::energy(&qn, zeta)?;
                        let unit = crate::analytic::energy(&qn, 1.0)?;
                        worst = worst.max((scaled - zeta * zeta * unit).abs() / scaled.abs());
                    }
                }
            }
        }
    }
    Ok(vec![CheckOutcome::at_most(
        Suite::Scaling,
        "E(zeta) vs zeta^2 E(1)",
        worst,
        f64::EPSILON,
    )])
}

fn degeneracy_checks(grid_size: usize, tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let report = degeneracy_ladder(0, 1, 3, 1.0, Some(grid_size), tol)?;
    let worst = report
        .ladder
        .iter()
        .map(|r| r.abs_err.unwrap_or(f64::NAN) / r.e_analytic.abs())
        .fold(0.0, f64::max);
    let anchors = [13.930703, 17.5];
    let anchor_gap = report
        .ladder
        .iter()
        .zip(anchors)
        .map(|(r, a)| (r.e_analytic - a).abs())
        .fold(0.0, f64::max);
    Ok(vec![
        CheckOutcome::at_most(
            Suite::Degeneracy,
            "ladder oracle agreement",
            worst,
            tol.oracle_rel,
        ),
        CheckOutcome::at_most(
            Suite::Degeneracy,
            "ladder anchors 13.9307 / 17.5",
            anchor_gap,
            5e-7,
        ),
        CheckOutcome {
            suite: Suite::Degeneracy.name(),
            check: "ladder spread reported (nonzero)".into(),
            measured: report.max_pairwise_spread,
            threshold: 0.0,
            pass: report.max_pairwise_spread > 0.0,
        },
    ])
}

/// Log-log slope of the unextrapolated ground-state error for
/// `(kappa, lambda) = (1, 3)` over 1000, 2000 and 4000 intervals.
pub fn convergence_slope() -> Result<f64> {
    let params = pt_params(&QuantumNumbers::radial(0, 0, 3)?, 1.0)?;
    let exact = params.epsilon(0);
    let points = [1000usize, 2000, 4000]
        .iter()
        .map(|&n| -> Result<(f64, f64)> {
            let t = crate::oracle::fd_hamiltonian(
                |q| params.potential(q),
                params.q_limit(),
                n,
                crate::oracle::OriginCondition::Dirichlet,
            )?;
            let eps = t.lowest_eigenvalues(1)?[0];
            Ok(((params.q_limit() / n as f64).ln(), (eps - exact).abs().ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    Ok(num / den)
}

fn convergence_checks() -> Result<Vec<CheckOutcome>> {
    let slope = convergence_slope()?;
    Ok(vec![CheckOutcome {
        suite: Suite::Convergence.name(),
        check: "error slope in [1.7, 2.3]".into(),
        measured: slope,
        threshold: 2.0,
        pass: (1.7..=2.3).contains(&slope),
    }])
}
