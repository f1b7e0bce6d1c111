//! Exact spectrum and eigenfunctions.
//!
//! In the `q` coordinate the effective potential is the Pöschl–Teller well
//! `zeta^2/2 [kappa(kappa-1)/sin^2 + lambda(lambda-1)/cos^2] - zeta^2/2` with
//!
//! ```text
//! kappa (kappa - 1)   = ell_d (ell_d + 1)
//! lambda (lambda - 1) = ell_d (ell_d + 1) + 2 d
//! ```
//!
//! We always take `kappa = ell_d + 1`, so `R ~ rho^(ell_d+1)` at the origin,
//! and `lambda = (1 + Delta)/2` with `Delta = sqrt((2 ell_d + 1)^2 + 8 d)`.
//! For one-dimensional even states `ell_d = -1` and therefore `kappa = 0`;
//! the same formulas then reduce to the `kappa = 0` family with third
//! hypergeometric parameter `1/2`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::model::{HalfInteger, QuantumNumbers};
use crate::pct::energy_shift;
use crate::specfun::{count_nodes, quad, TerminatingHyp};
use crate::{Error, Result};

/// Number of samples used when counting nodes of `phi`.
pub const NODE_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtParams {
    pub kappa: f64,
    pub lambda: f64,
    pub delta: f64,
    pub c: f64,
    pub zeta: f64,
    #[serde(skip)]
    pub ell_d: HalfInteger,
    pub d: u32,
}

impl PtParams {
    pub fn from_ell_d(ell_d: HalfInteger, d: u32, zeta: f64) -> Self {
        let l = ell_d.to_f64();
        let delta = ((2.0 * l + 1.0).powi(2) + 8.0 * d as f64).sqrt();
        Self {
            kappa: l + 1.0,
            lambda: 0.5 * (1.0 + delta),
            delta,
            c: l + 1.5,
            zeta,
            ell_d,
            d,
        }
    }

    /// `ell_d` shifted by one is an exact half-integer, so this is too.
    fn kappa_exponent(&self) -> HalfInteger {
        HalfInteger::from_twice(self.ell_d.twice() + 2)
    }

    /// The `kappa = 0` family (one-dimensional even parity).
    pub fn is_reflecting(&self) -> bool {
        self.kappa_exponent().twice() == 0
    }

    pub fn q_limit(&self) -> f64 {
        FRAC_PI_2 / self.zeta
    }

    /// Symmetric interval for `d = 1`, `(0, pi/(2 zeta))` otherwise.
    pub fn q_domain(&self) -> (f64, f64) {
        let limit = self.q_limit();
        if self.d == 1 {
            (-limit, limit)
        } else {
            (0.0, limit)
        }
    }

    pub fn singular_strength(&self) -> (f64, f64) {
        (
            self.kappa * (self.kappa - 1.0),
            self.lambda * (self.lambda - 1.0),
        )
    }

    /// Pöschl–Teller potential without the constant shift.
    pub fn potential(&self, q: f64) -> Result<f64> {
        let limit = self.q_limit();
        if !(q.abs() < limit) {
            return Err(Error::Domain {
                value: q,
                domain: format!("(-{limit}, {limit})"),
            });
        }
        let (a, b) = self.singular_strength();
        let (s, c) = (self.zeta * q).sin_cos();
        let inner = if a == 0.0 {
            0.0
        } else if s == 0.0 {
            return Ok(f64::INFINITY.copysign(a));
        } else {
            a / (s * s)
        };
        Ok(0.5 * self.zeta * self.zeta * (inner + b / (c * c)))
    }

    /// Pöschl–Teller eigenvalue `zeta^2/2 (kappa + lambda + 2 n)^2`.
    pub fn epsilon(&self, n_r: u32) -> f64 {
        let x = self.kappa + self.lambda + 2.0 * n_r as f64;
        0.5 * self.zeta * self.zeta * x * x
    }

    /// Energy as `epsilon - zeta^2/2`.
    pub fn energy_from_epsilon(&self, n_r: u32) -> f64 {
        self.epsilon(n_r) + energy_shift(self.zeta)
    }

    /// Energy in terms of `c` and `Delta`.
    pub fn energy(&self, n_r: u32) -> f64 {
        let x = self.c + 0.5 * self.delta + 2.0 * n_r as f64;
        self.zeta * self.zeta * (0.5 * (x * x - 1.0))
    }

    /// `kappa = 0` family: `2 zeta^2 (n + lambda/2)^2 - zeta^2/2`.
    pub fn energy_reflecting(&self, n_r: u32) -> f64 {
        let x = n_r as f64 + 0.5 * self.lambda;
        let z2 = self.zeta * self.zeta;
        2.0 * z2 * x * x - 0.5 * z2
    }

    /// Unnormalized `phi` with a freshly built series.
    pub fn phi(&self, n_r: u32, q: f64) -> Result<f64> {
        let hyp = self.phi_series(n_r)?;
        Ok(self.phi_with(&hyp, q))
    }

    fn phi_series(&self, n_r: u32) -> Result<TerminatingHyp> {
        TerminatingHyp::new(n_r, self.kappa + self.lambda + n_r as f64, self.kappa + 0.5)
    }

    fn radial_series(&self, n_r: u32) -> Result<TerminatingHyp> {
        TerminatingHyp::new(n_r, self.c + 0.5 * self.delta + n_r as f64, self.c)
    }

    fn phi_with(&self, hyp: &TerminatingHyp, q: f64) -> f64 {
        let (s, c) = (self.zeta * q).sin_cos();
        half_power(s, self.kappa_exponent()) * c.powf(self.lambda) * hyp.eval(s * s)
    }
}

/// `x^p` for a half-integer `p`; integer powers keep the sign of `x`.
fn half_power(x: f64, p: HalfInteger) -> f64 {
    if p.is_integer() {
        x.powi((p.twice() / 2) as i32)
    } else {
        x.powf(p.to_f64())
    }
}

pub fn pt_params(qn: &QuantumNumbers, zeta: f64) -> Result<PtParams> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "zeta must be positive and finite, got {zeta}"
        )));
    }
    Ok(PtParams::from_ell_d(qn.ell_d()?, qn.d, zeta))
}

/// Bound-state energy `E = zeta^2/2 ((c + Delta/2 + 2 n_r)^2 - 1)`.
pub fn energy(qn: &QuantumNumbers, zeta: f64) -> Result<f64> {
    Ok(pt_params(qn, zeta)?.energy(qn.n_r))
}

/// Unnormalized `phi` for `n_r` at `q`.
pub fn phi(params: &PtParams, n_r: u32, q: f64) -> Result<f64> {
    params.phi(n_r, q)
}

/// An eigenstate together with its normalization constant.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    qn: QuantumNumbers,
    params: PtParams,
    energy: f64,
    norm_constant: f64,
    phi_series: TerminatingHyp,
    radial_series: TerminatingHyp,
}

impl BoundState {
    /// Normalized state.
    pub fn new(qn: QuantumNumbers, zeta: f64) -> Result<Self> {
        Self::unnormalized(qn, zeta)?.normalize()
    }

    /// State with `norm_constant = 1`.
    pub fn unnormalized(qn: QuantumNumbers, zeta: f64) -> Result<Self> {
        let params = pt_params(&qn, zeta)?;
        Ok(Self {
            qn,
            energy: params.energy(qn.n_r),
            norm_constant: 1.0,
            phi_series: params.phi_series(qn.n_r)?,
            radial_series: params.radial_series(qn.n_r)?,
            params,
        })
    }

    pub fn qn(&self) -> &QuantumNumbers {
        &self.qn
    }

    pub fn params(&self) -> &PtParams {
        &self.params
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn zeta(&self) -> f64 {
        self.params.zeta
    }

    /// Energy override; only used to inject faults into verification runs.
    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = energy;
        self
    }

    pub fn phi(&self, q: f64) -> f64 {
        self.norm_constant * self.params.phi_with(&self.phi_series, q)
    }

    /// `R(r)` from the closed radial formula with `rho = zeta r`.
    pub fn radial(&self, r: f64) -> f64 {
        self.radial_with_derivatives(r).0
    }

    /// `(R, dR/dr, d2R/dr2)` by term-wise differentiation of
    /// `rho^a (1 + rho^2)^(-b) F(rho^2/(1 + rho^2))`.
    pub fn radial_with_derivatives(&self, r: f64) -> (f64, f64, f64) {
        let p = &self.params;
        let zeta = p.zeta;
        let rho = zeta * r;
        let a = p.kappa_exponent();
        let af = a.to_f64();
        let b = (2.0 * p.ell_d.to_f64() + 5.0 + p.delta) / 4.0;

        let (pw, dpw, d2pw) = match a.twice() {
            0 => (1.0, 0.0, 0.0),
            2 => (rho, 1.0, 0.0),
            _ => (
                half_power(rho, a),
                af * half_power(rho, HalfInteger::from_twice(a.twice() - 2)),
                af * (af - 1.0) * half_power(rho, HalfInteger::from_twice(a.twice() - 4)),
            ),
        };

        let s = 1.0 + rho * rho;
        let env = s.powf(-b);
        let denv = -2.0 * b * rho * env / s;
        let d2env = -2.0 * b * env / s + 4.0 * b * (b + 1.0) * rho * rho * env / (s * s);

        let x = rho * rho / s;
        let dx = 2.0 * rho / (s * s);
        let d2x = (2.0 - 6.0 * rho * rho) / (s * s * s);
        let (f, fx, fxx) = self.radial_series.eval_with_derivatives(x);
        let df = fx * dx;
        let d2f = fxx * dx * dx + fx * d2x;

        let value = pw * env * f;
        let d1 = dpw * env * f + pw * denv * f + pw * env * df;
        let d2 = d2pw * env * f
            + pw * d2env * f
            + pw * env * d2f
            + 2.0 * (dpw * denv * f + dpw * env * df + pw * denv * df);

        let n = self.norm_constant;
        (n * value, n * zeta * d1, n * zeta * zeta * d2)
    }

    /// Interval over which `phi` is normalized.
    pub fn q_domain(&self) -> (f64, f64) {
        self.params.q_domain()
    }

    /// Rescale so that `int phi^2 dq = 1` over [`q_domain`](Self::q_domain).
    pub fn normalize(self) -> Result<Self> {
        let current = self.norm_squared()?;
        if !(current > 0.0 && current.is_finite()) {
            return Err(Error::Internal(format!(
                "cannot normalize {}: integral {current}",
                self.qn
            )));
        }
        let norm_constant = self.norm_constant / current.sqrt();
        Ok(Self {
            norm_constant,
            ..self
        })
    }

    /// `int phi^2 dq` over the full domain, exploiting parity for `d = 1`.
    pub fn norm_squared(&self) -> Result<f64> {
        let limit = self.params.q_limit();
        let scale = (1..64)
            .map(|k| self.phi(k as f64 * limit / 64.0).powi(2))
            .fold(0.0_f64, f64::max)
            * limit;
        let tol = 1e-14 * scale.max(f64::MIN_POSITIVE);
        let half = quad(|q| self.phi(q).powi(2), 0.0, limit, tol)?.value;
        Ok(if self.qn.d == 1 { 2.0 * half } else { half })
    }

    /// `int phi_self phi_other dq` over the shared domain.
    pub fn overlap(&self, other: &BoundState) -> Result<f64> {
        if self.params.q_domain() != other.params.q_domain() {
            return Err(Error::InvalidInput(
                "overlap needs states on the same q domain".into(),
            ));
        }
        let (lo, hi) = self.params.q_domain();
        Ok(quad(|q| self.phi(q) * other.phi(q), lo, hi, 1e-14)?.value)
    }

    /// Sign changes of `phi` on `(0, pi/(2 zeta))`.
    pub fn nodes(&self) -> usize {
        count_nodes(|q| self.phi(q), 0.0, self.params.q_limit(), NODE_SAMPLES)
    }
}

/// Free-function form of [`BoundState::radial`].
pub fn radial(state: &BoundState, r: f64) -> f64 {
    state.radial(r)
}

/// Free-function form of [`BoundState::normalize`].
pub fn normalize(state: BoundState) -> Result<BoundState> {
    state.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MassModel, Parity};
    use crate::pct::PctMap;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn qn(n: u32, ell: u32, d: u32) -> QuantumNumbers {
        QuantumNumbers::radial(n, ell, d).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = pt_params(&qn(0, 0, 3), 1.0).unwrap();
        assert_eq!((p.kappa, p.delta, p.lambda, p.c), (1.0, 5.0, 3.0, 1.5));

        let p = pt_params(&QuantumNumbers::line(0, Parity::Even), 1.0).unwrap();
        assert_eq!((p.kappa, p.delta, p.lambda, p.c), (0.0, 3.0, 2.0, 0.5));
        assert!(p.is_reflecting());

        let p = pt_params(&qn(0, 1, 3), 1.0).unwrap();
        assert_eq!(p.kappa, 2.0);
        assert!((p.delta - 33f64.sqrt()).abs() < 1e-15);
        assert!((p.lambda - (1.0 + 33f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(p.c, 2.5);
        assert!((p.lambda * (p.lambda - 1.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_relations_hold() {
        for d in 1..=9 {
            let parities: &[Option<Parity>] = if d == 1 {
                &[Some(Parity::Even), Some(Parity::Odd)]
            } else {
                &[None]
            };
            for &parity in parities {
                for ell in 0..=(if d == 1 { 0 } else { 6 }) {
                    let q = QuantumNumbers::new(0, ell, d, parity).unwrap();
                    let p = pt_params(&q, 1.0).unwrap();
                    let l = q.ell_d().unwrap().centrifugal();
                    assert!((p.kappa * (p.kappa - 1.0) - l).abs() <= 1e-12 * l.abs().max(1.0));
                    let rhs = l + 2.0 * d as f64;
                    assert!((p.lambda * (p.lambda - 1.0) - rhs).abs() <= 1e-12 * rhs);
                    assert!(p.lambda > 1.0 && p.kappa >= 0.0);
                }
            }
        }
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(&qn(0, 0, 3), 1.0).unwrap(), 7.5);
        assert_eq!(energy(&qn(1, 0, 3), 1.0).unwrap(), 17.5);
        assert_eq!(
            energy(&QuantumNumbers::line(0, Parity::Even), 1.0).unwrap(),
            1.5
        );
        assert_eq!(
            energy(&QuantumNumbers::line(0, Parity::Odd), 1.0).unwrap(),
            4.0
        );
    }

    #[test]
    fn energy_routes_agree() {
        for d in [2, 3, 4, 5, 7] {
            for ell in 0..4 {
                let p = pt_params(&qn(0, ell, d), 1.3).unwrap();
                for n in 0..=10 {
                    let a = p.energy(n);
                    let b = p.energy_from_epsilon(n);
                    assert!((a - b).abs() <= 1e-12 * a.abs(), "{a} {b}");
                }
            }
        }
        let p = pt_params(&QuantumNumbers::line(0, Parity::Even), 0.7).unwrap();
        for n in 0..=10 {
            let (a, b) = (p.energy(n), p.energy_reflecting(n));
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn energies_increase_with_n_and_ell() {
        for d in [2, 3, 5] {
            for ell in 0..4 {
                for n in 0..6 {
                    let e = energy(&qn(n, ell, d), 1.0).unwrap();
                    assert!(energy(&qn(n + 1, ell, d), 1.0).unwrap() > e);
                    assert!(energy(&qn(n, ell + 1, d), 1.0).unwrap() > e);
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        let p = pt_params(&qn(0, 0, 3), 1.0).unwrap();
        assert!((p.phi(0, FRAC_PI_4).unwrap() - 0.25).abs() < 1e-15);
        assert!(p.phi(0, FRAC_PI_2 - 1e-9).unwrap().abs() < 1e-20);

        // kappa = 0, lambda = 2, n = 1: 2F1(-1, 3; 1/2; s^2) = 1 - 6 s^2
        let even = pt_params(&QuantumNumbers::line(0, Parity::Even), 1.0).unwrap();
        let q0 = (1.0f64 / 6.0).sqrt().asin();
        assert!(even.phi(1, q0).unwrap().abs() < 1e-15);
        let state = BoundState::new(QuantumNumbers::line(1, Parity::Even), 1.0).unwrap();
        assert_eq!(state.nodes(), 1);
    }

    #[test]
    fn radial_examples() {
        let s = BoundState::new(qn(2, 0, 3), 1.0).unwrap();
        assert_eq!(s.radial(0.0), 0.0);
        let e = BoundState::new(QuantumNumbers::line(0, Parity::Even), 1.0).unwrap();
        assert_eq!(e.radial(0.0), e.norm_constant());
    }

    #[test]
    fn radial_matches_transformed_phi() {
        for (q, zeta) in [
            (qn(0, 0, 3), 1.0),
            (qn(3, 2, 5), 0.5),
            (qn(2, 1, 2), 2.0),
            (QuantumNumbers::line(2, Parity::Odd), 1.0),
            (QuantumNumbers::line(3, Parity::Even), 1.0),
        ] {
            let state = BoundState::new(q, zeta).unwrap();
            let map = PctMap::new(MassModel::squared_lorentzian(zeta).unwrap(), q.d).unwrap();
            for k in 1..=50 {
                let r = 0.1 * k as f64 / zeta;
                let via_q = map.g_of_r(r).unwrap() * state.phi(map.q_of_r(r).unwrap());
                let direct = state.radial(r);
                assert!(
                    (via_q - direct).abs() <= 1e-12 * direct.abs().max(1e-300),
                    "{q} r={r}: {via_q} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn ground_state_norm_is_wallis() {
        let state = BoundState::new(qn(0, 0, 3), 1.0).unwrap();
        let expected = (256.0 / (5.0 * PI)).sqrt();
        assert!((state.norm_constant() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn normalization_is_idempotent() {
        let state = BoundState::new(qn(3, 1, 3), 1.0).unwrap();
        let again = state.clone().normalize().unwrap();
        let rel = (again.norm_constant() - state.norm_constant()).abs() / state.norm_constant();
        assert!(rel < 1e-12);
    }

    #[test]
    fn distinct_levels_are_orthogonal() {
        for d in [2, 3] {
            let states: Vec<_> = (0..4)
                .map(|n| BoundState::new(qn(n, 1, d), 1.0).unwrap())
                .collect();
            for i in 0..states.len() {
                for j in (i + 1)..states.len() {
                    assert!(states[i].overlap(&states[j]).unwrap().abs() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn radial_normalized_on_half_line() {
        // int_0^inf R^2 dr with r = tan(zeta t)/zeta, dr = sec^2(zeta t) dt
        let zeta = 1.0;
        let state = BoundState::new(qn(1, 1, 3), zeta).unwrap();
        let v = quad(
            |t| {
                let r = (zeta * t).tan() / zeta;
                state.radial(r).powi(2) / (zeta * t).cos().powi(2)
            },
            0.0,
            FRAC_PI_2 / zeta,
            1e-13,
        )
        .unwrap()
        .value;
        assert!((v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn node_count_equals_radial_quantum_number() {
        for n in 0..6 {
            for q in [
                qn(n, 0, 3),
                qn(n, 2, 2),
                QuantumNumbers::line(n, Parity::Even),
            ] {
                assert_eq!(BoundState::new(q, 1.0).unwrap().nodes(), n as usize, "{q}");
            }
        }
    }

    #[test]
    fn radial_derivatives_match_finite_differences() {
        let state = BoundState::new(qn(2, 1, 2), 1.0).unwrap();
        for &r in &[0.3, 1.0, 2.5] {
            let (_, d1, d2) = state.radial_with_derivatives(r);
            let h = 1e-4;
            let f = |x: f64| state.radial(x);
            let fd1 = (f(r + h) - f(r - h)) / (2.0 * h);
            let fd2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
            assert!((d1 - fd1).abs() < 1e-6 * d1.abs().max(1.0));
            assert!((d2 - fd2).abs() < 1e-4 * d2.abs().max(1.0));
        }
    }

    #[test]
    fn radial_tail_is_negligible() {
        // doubling the cutoff changes int R^2 dr by < 1e-8
        let state = BoundState::new(qn(2, 0, 3), 1.0).unwrap();
        let tail = |a: f64, b: f64| {
            quad(|r| state.radial(r).powi(2), a, b, 1e-15)
                .unwrap()
                .value
        };
        let r_max = 50.0;
        assert!(tail(r_max, 2.0 * r_max) < 1e-8);
    }

    proptest::proptest! {
        #[test]
        fn energy_scales_with_zeta_squared(
            zeta in 1e-3f64..1e3, n in 0u32..10, ell in 0u32..6, d in 2u32..8,
        ) {
            let q = qn(n, ell, d);
            let e = energy(&q, zeta).unwrap();
            let e1 = energy(&q, 1.0).unwrap();
            proptest::prop_assert_eq!(e, zeta * zeta * e1);
        }
    }
}
