//! Independent numerical checks of the closed-form results.
//!
//! [`solve_pt`] discretizes `-phi''/2 + V(q) phi = eps phi` on the finite
//! `q` interval with second-order central differences, pulls the lowest
//! eigenvalues out of the tridiagonal matrix by Sturm-sequence bisection, and
//! Richardson-combines two grids. [`radial_residual`] applies the original
//! position-dependent-mass radial operator to the analytic `R(r)`.

use serde::Serialize;

use crate::analytic::{BoundState, PtParams};
use crate::pct::{energy_shift, EffectivePotential};
use crate::{Error, Result};

pub const MIN_GRID: usize = 64;

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "tridiagonal needs n >= 1 diagonal and n - 1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `x` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.off.iter().fold(1.0_f64, |m, e| m.max(e * e));
        let mut count = 0;
        let mut pivot = self.diag[0] - x;
        for i in 0..self.diag.len() {
            if i > 0 {
                pivot = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / pivot;
            }
            if pivot.abs() < pivmin {
                pivot = -pivmin;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let radius = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            (lo.min(self.diag[i] - radius), hi.max(self.diag[i] + radius))
        })
    }

    /// The `count` smallest eigenvalues, bisected to brackets narrower than
    /// `1e-12 * max(1, |lambda|)`.
    pub fn lowest_eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        if count > self.len() {
            return Err(Error::InvalidInput(format!(
                "asked for {count} eigenvalues of a {}x{} matrix",
                self.len(),
                self.len()
            )));
        }
        let (g_lo, g_hi) = self.gershgorin();
        let spread = (g_hi - g_lo).abs().max(1.0);
        let (g_lo, g_hi) = (g_lo - 1e-10 * spread, g_hi + 1e-10 * spread);
        let mut values = Vec::with_capacity(count);
        let mut floor = g_lo;
        for k in 0..count {
            let (mut lo, mut hi) = (floor, g_hi);
            if self.sturm_count(lo) > k || self.sturm_count(hi) <= k {
                return Err(Error::Internal(format!(
                    "Sturm bracket [{lo}, {hi}] does not isolate eigenvalue {k}"
                )));
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= 1e-12 * mid.abs().max(1.0) || mid <= lo || mid >= hi {
                    break;
                }
                if self.sturm_count(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let value = 0.5 * (lo + hi);
            values.push(value);
            floor = lo;
        }
        Ok(values)
    }
}

/// Boundary condition at `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OriginCondition {
    /// `phi(0) = 0`.
    Dirichlet,
    /// `phi'(0) = 0`, for even states on the half interval.
    Reflecting,
}

/// `-1/2 d2/dq2 + V` on `[0, length]` with `intervals` cells and `phi = 0`
/// at `q = length`. Dirichlet unknowns are `q_j = j h, j = 1..N-1`; the
/// reflecting variant adds `q_0 = 0` with ghost `phi_{-1} = phi_1`, which
/// is symmetrized by rescaling the first unknown by `sqrt(2)`.
pub fn fd_hamiltonian<V>(
    potential: V,
    length: f64,
    intervals: usize,
    origin: OriginCondition,
) -> Result<Tridiagonal>
where
    V: Fn(f64) -> Result<f64>,
{
    let h = length / intervals as f64;
    let kinetic = 1.0 / (h * h);
    let first = match origin {
        OriginCondition::Dirichlet => 1,
        OriginCondition::Reflecting => 0,
    };
    let mut diag = Vec::with_capacity(intervals);
    for j in first..intervals {
        diag.push(kinetic + potential(j as f64 * h)?);
    }
    let mut off = vec![-0.5 * kinetic; diag.len().saturating_sub(1)];
    if origin == OriginCondition::Reflecting && !off.is_empty() {
        off[0] = -kinetic / std::f64::consts::SQRT_2;
    }
    Tridiagonal::new(diag, off)
}

/// Pöschl–Teller operator with `phi = sin^kappa(zeta q) u` factored out,
/// for half-integer `kappa` where plain differences on `phi` lose accuracy at
/// the origin. `u` is smooth and satisfies
/// `-1/2 (w u')' + w (zeta^2/2)(kappa^2 + lambda(lambda-1)/cos^2) u = eps w u`
/// with `w = sin^(2 kappa)`. Finite volumes around `q_j = j h, j = 0..N-1`
/// (a half cell at the origin, where the flux vanishes) give `K u = eps M u`
/// with diagonal `M`; the returned matrix is `M^(-1/2) K M^(-1/2)`.
pub fn weighted_pt_hamiltonian(params: &PtParams, intervals: usize) -> Result<Tridiagonal> {
    let zeta = params.zeta;
    let length = params.q_limit();
    let h = length / intervals as f64;
    let exponent = (2.0 * params.kappa).round() as i32;
    let weight = |q: f64| (zeta * q).sin().powi(exponent);
    let (_, b) = params.singular_strength();
    let k2 = params.kappa * params.kappa;
    let reduced = |q: f64| {
        let c = (zeta * q).cos();
        0.5 * zeta * zeta * (k2 + b / (c * c))
    };
    let rule = cell_rule();
    let cell = |lo: f64, hi: f64| {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        rule.iter().fold((0.0, 0.0), |(m, p), &(x, wgt)| {
            let q = mid + half * x;
            let wq = weight(q);
            (m + wgt * half * wq, p + wgt * half * wq * reduced(q))
        })
    };

    let n = intervals;
    let mut mass = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    // flux weight on the face between node j and j + 1
    let faces: Vec<f64> = (0..n).map(|j| weight((j as f64 + 0.5) * h)).collect();
    for j in 0..n {
        let q = j as f64 * h;
        let (m, p) = if j == 0 {
            cell(0.0, 0.5 * h)
        } else {
            cell(q - 0.5 * h, q + 0.5 * h)
        };
        let left = if j == 0 { 0.0 } else { faces[j - 1] };
        mass.push(m);
        diag.push(0.5 * (left + faces[j]) / h + p);
    }
    if mass.iter().any(|m| !(*m > 0.0)) {
        return Err(Error::Internal("non-positive finite-volume mass".into()));
    }
    let off = (0..n - 1)
        .map(|j| -0.5 * faces[j] / h / (mass[j] * mass[j + 1]).sqrt())
        .collect();
    let diag = diag.iter().zip(&mass).map(|(k, m)| k / m).collect();
    Tridiagonal::new(diag, off)
}

fn cell_rule() -> &'static [(f64, f64)] {
    static RULE: std::sync::OnceLock<Vec<(f64, f64)>> = std::sync::OnceLock::new();
    RULE.get_or_init(|| crate::specfun::gauss_legendre(6))
}

/// Grid-refined eigenvalues for one operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    pub grid_size: usize,
    pub domain: (f64, f64),
    pub origin: OriginCondition,
    /// Finest-grid eigenvalues of the discretized operator.
    pub eigenvalues: Vec<f64>,
    /// Same states on the grid with half as many intervals.
    pub coarse_eigenvalues: Vec<f64>,
    pub extrapolated: Vec<f64>,
    pub error_estimates: Vec<f64>,
    /// Added to `extrapolated` to obtain energies.
    pub shift_applied: f64,
}

impl EigenReport {
    pub fn energies(&self) -> Vec<f64> {
        self.extrapolated
            .iter()
            .map(|e| e + self.shift_applied)
            .collect()
    }

    pub fn energy(&self, n: usize) -> Option<f64> {
        self.extrapolated.get(n).map(|e| e + self.shift_applied)
    }
}

/// Validates a state count against a grid size.
pub fn check_sizes(n_states: usize, grid_size: usize) -> Result<()> {
    if grid_size < MIN_GRID {
        return Err(Error::InvalidInput(format!(
            "grid_size must be at least {MIN_GRID}, got {grid_size}"
        )));
    }
    if n_states == 0 || n_states > grid_size / 4 {
        return Err(Error::InvalidInput(format!(
            "n_states must be in 1..={}, got {n_states}",
            grid_size / 4
        )));
    }
    Ok(())
}

/// Eigenvalues on `grid_size` and `grid_size/2` intervals, Richardson-combined
/// assuming an `h^2` leading error.
pub fn solve_on_interval<V>(
    potential: V,
    length: f64,
    origin: OriginCondition,
    n_states: usize,
    grid_size: usize,
    shift: f64,
) -> Result<EigenReport>
where
    V: Fn(f64) -> Result<f64> + Sync,
{
    check_sizes(n_states, grid_size)?;
    let (fine, coarse) = rayon::join(
        || fd_hamiltonian(&potential, length, grid_size, origin)?.lowest_eigenvalues(n_states),
        || fd_hamiltonian(&potential, length, grid_size / 2, origin)?.lowest_eigenvalues(n_states),
    );
    assemble_report(fine?, coarse?, grid_size, length, origin, shift)
}

fn assemble_report(
    fine: Vec<f64>,
    coarse: Vec<f64>,
    grid_size: usize,
    length: f64,
    origin: OriginCondition,
    shift: f64,
) -> Result<EigenReport> {
    if fine.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Internal(format!(
            "eigenvalues not strictly increasing: {fine:?}"
        )));
    }
    let extrapolated: Vec<f64> = fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (4.0 * f - c) / 3.0)
        .collect();
    let error_estimates = extrapolated
        .iter()
        .zip(&fine)
        .map(|(x, f)| (x - f).abs())
        .collect();
    Ok(EigenReport {
        grid_size,
        domain: (0.0, length),
        origin,
        eigenvalues: fine,
        coarse_eigenvalues: coarse,
        extrapolated,
        error_estimates,
        shift_applied: shift,
    })
}

/// Lowest `n_states` Pöschl–Teller eigenvalues `eps`. Energies are
/// `eps - zeta^2/2`, available through [`EigenReport::energies`].
pub fn solve_pt(params: &PtParams, n_states: usize, grid_size: usize) -> Result<EigenReport> {
    if params.ell_d.is_integer() {
        let origin = if params.is_reflecting() {
            OriginCondition::Reflecting
        } else {
            OriginCondition::Dirichlet
        };
        return solve_on_interval(
            |q| params.potential(q),
            params.q_limit(),
            origin,
            n_states,
            grid_size,
            energy_shift(params.zeta),
        );
    }
    check_sizes(n_states, grid_size)?;
    let (fine, coarse) = rayon::join(
        || weighted_pt_hamiltonian(params, grid_size)?.lowest_eigenvalues(n_states),
        || weighted_pt_hamiltonian(params, grid_size / 2)?.lowest_eigenvalues(n_states),
    );
    assemble_report(
        fine?,
        coarse?,
        grid_size,
        params.q_limit(),
        OriginCondition::Dirichlet,
        energy_shift(params.zeta),
    )
}

/// Same discretization applied to a transformed potential assembled from the
/// mass derivatives. The potential already carries its constant, so the
/// extrapolated eigenvalues are energies directly.
pub fn solve_pct(
    potential: &EffectivePotential,
    length: f64,
    origin: OriginCondition,
    n_states: usize,
    grid_size: usize,
) -> Result<EigenReport> {
    solve_on_interval(
        |q| potential.general(q),
        length,
        origin,
        n_states,
        grid_size,
        0.0,
    )
}

/// One evaluation of the radial operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub r: f64,
    pub residual: f64,
    /// Largest magnitude among the individual operator terms.
    pub scale: f64,
}

impl ResidualPoint {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.abs()
        } else {
            self.residual.abs() / self.scale
        }
    }
}

/// `R'' - ell_d(ell_d+1)/r^2 R + m'/m ((d-1)/(2r) R - R') + 2 m E R` for the
/// state's energy and closed-form `R`, at each radius.
pub fn radial_residual(state: &BoundState, r_grid: &[f64]) -> Result<Vec<ResidualPoint>> {
    let zeta = state.zeta();
    let model = crate::model::MassModel::squared_lorentzian(zeta)?;
    let d = state.qn().d as f64;
    let centrifugal = state.params().ell_d.centrifugal();
    let e = state.energy();
    r_grid
        .iter()
        .map(|&r| {
            if !(r > 0.0) {
                return Err(Error::Domain {
                    value: r,
                    domain: "r > 0".into(),
                });
            }
            let s = model.mass_at(r)?;
            let (big_r, d1, d2) = state.radial_with_derivatives(r);
            let ratio = s.dm / s.m;
            let terms = [
                d2,
                -centrifugal / (r * r) * big_r,
                ratio * (d - 1.0) / (2.0 * r) * big_r,
                -ratio * d1,
                2.0 * s.m * e * big_r,
            ];
            Ok(ResidualPoint {
                r,
                residual: terms.iter().sum(),
                scale: terms.iter().fold(0.0_f64, |m, t| m.max(t.abs())),
            })
        })
        .collect()
}

pub fn max_relative_residual(points: &[ResidualPoint]) -> f64 {
    points
        .iter()
        .map(ResidualPoint::relative)
        .fold(0.0, f64::max)
}

/// `count` radii spread geometrically over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|k| lo * (ratio * k as f64).exp()).collect()
}
