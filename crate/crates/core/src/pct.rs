//! Point canonical transformation `R(r) = g(r) phi(q(r))` with
//! `q' = sqrt(m)` and `g = m^(1/4)`, which turns the radial equation into
//! `-phi''/2 + V_eff(q) phi = E phi`.

use std::f64::consts::FRAC_PI_2;

use crate::analytic::PtParams;
use crate::model::{HalfInteger, MassModel, MassSample};
use crate::specfun::try_quad;
use crate::{Error, Result};

/// Absolute tolerance for `q(r)` quadrature on numeric profiles.
pub const TRANSFORM_TOL: f64 = 1e-12;

/// Below this radius the centrifugal and `(d-1)/r` terms use their limits.
pub const NEAR_ORIGIN: f64 = 1e-8;

/// Constant offset between the Pöschl–Teller eigenvalue and the energy,
/// `E = eps + energy_shift(zeta)`.
pub fn energy_shift(zeta: f64) -> f64 {
    -0.5 * zeta * zeta
}

#[derive(Debug, Clone)]
pub struct PctMap {
    model: MassModel,
    d: u32,
}

impl PctMap {
    pub fn new(model: MassModel, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        Ok(Self { model, d })
    }

    pub fn model(&self) -> &MassModel {
        &self.model
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Upper end of the `q` range, `pi/(2 zeta)`, when it is known in closed form.
    pub fn q_limit(&self) -> Option<f64> {
        self.model
            .is_squared_lorentzian()
            .then(|| FRAC_PI_2 / self.model.zeta())
    }

    /// `q(r) = int_0^r sqrt(m(t)) dt`.
    pub fn q_of_r(&self, r: f64) -> Result<f64> {
        if !r.is_finite() {
            return Err(Error::Domain {
                value: r,
                domain: "finite r".into(),
            });
        }
        if self.model.is_squared_lorentzian() {
            let zeta = self.model.zeta();
            return Ok((zeta * r).atan() / zeta);
        }
        self.integrate_sqrt_mass(0.0, r)
    }

    fn integrate_sqrt_mass(&self, from: f64, to: f64) -> Result<f64> {
        if from == to {
            return Ok(0.0);
        }
        let (a, b, sign) = if from < to {
            (from, to, 1.0)
        } else {
            (to, from, -1.0)
        };
        let q = try_quad(|t| self.model.mass(t).map(f64::sqrt), a, b, TRANSFORM_TOL)?;
        Ok(sign * q.value)
    }

    /// Inverse of [`q_of_r`](Self::q_of_r).
    pub fn r_of_q(&self, q: f64) -> Result<f64> {
        if let Some(limit) = self.q_limit() {
            if !(q.abs() < limit) {
                return Err(Error::Domain {
                    value: q,
                    domain: format!("(-{limit}, {limit})"),
                });
            }
            let zeta = self.model.zeta();
            return Ok((zeta * q).tan() / zeta);
        }
        if !q.is_finite() {
            return Err(Error::Domain {
                value: q,
                domain: "finite q".into(),
            });
        }
        let target = q.abs();
        let r = self.invert_numeric(target)?;
        Ok(r.copysign(q))
    }

    /// Safeguarded Newton on `q(r) - target` over a doubling bracket, with
    /// `q` advanced incrementally between iterates.
    fn invert_numeric(&self, target: f64) -> Result<f64> {
        if target == 0.0 {
            return Ok(0.0);
        }
        let (mut lo, mut q_lo) = (0.0, 0.0);
        let mut hi = target.max(1.0 / self.model.zeta());
        let mut q_hi = self.integrate_sqrt_mass(0.0, hi)?;
        let mut doublings = 0;
        while q_hi < target {
            lo = hi;
            q_lo = q_hi;
            hi *= 2.0;
            q_hi += self.integrate_sqrt_mass(lo, hi)?;
            doublings += 1;
            if doublings > 60 {
                return Err(Error::Domain {
                    value: target,
                    domain: format!("q range of the profile (reached {q_hi} at r = {hi})"),
                });
            }
        }
        // linear interpolation start, then Newton steps that stay in the bracket
        let mut r = lo + (target - q_lo) / (q_hi - q_lo) * (hi - lo);
        let mut q_r = q_lo + self.integrate_sqrt_mass(lo, r)?;
        for _ in 0..100 {
            let f = q_r - target;
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let slope = self.model.mass(r)?.sqrt();
            let mut next = r - f / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = next - r;
            q_r += self.integrate_sqrt_mass(r, next)?;
            r = next;
            if step.abs() <= 1e-15 * r.abs().max(1e-300) || (q_r - target).abs() <= 1e-15 * target {
                return Ok(r);
            }
        }
        Err(Error::NonConvergence {
            estimate: r,
            error_estimate: (q_r - target).abs(),
            tolerance: 1e-15 * target,
        })
    }

    /// `g(r) = m(r)^(1/4)`.
    pub fn g_of_r(&self, r: f64) -> Result<f64> {
        Ok(self.model.mass(r)?.powf(0.25))
    }

    /// Mass-derivative correction `U_d(r)` from `(m, m', m'')`.
    pub fn u_d(&self, r: f64) -> Result<f64> {
        u_d_general(&self.model, self.d, r)
    }

    pub fn effective_potential(&self, ell_d: HalfInteger) -> EffectivePotential {
        EffectivePotential {
            map: self.clone(),
            ell_d,
        }
    }
}

fn u_d_terms(s: MassSample, d: u32, dm_over_r: f64) -> f64 {
    let m2 = s.m * s.m;
    s.d2m / (8.0 * m2) - 7.0 * s.dm * s.dm / (32.0 * m2 * s.m)
        + dm_over_r * (d as f64 - 1.0) / (4.0 * m2)
}

/// `U_d(r) = m''/(8 m^2) - 7 m'^2/(32 m^3) + m' (d - 1)/(4 r m^2)`.
pub fn u_d_general(model: &MassModel, d: u32, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::Singular {
            r,
            reason: "the (d-1)/r term of U_d is undefined at the origin".into(),
        });
    }
    if !(r > 0.0) {
        return Err(Error::Domain {
            value: r,
            domain: "r > 0".into(),
        });
    }
    let s = model.mass_at(r)?;
    Ok(u_d_terms(s, d, s.dm / r))
}

/// Limit of `U_d` as `r -> 0` for a profile with `m'(0) = 0`.
fn u_d_origin_limit(model: &MassModel, d: u32) -> Result<f64> {
    let s = model.mass_at(0.0)?;
    Ok(u_d_terms(s, d, s.d2m))
}

/// Closed form of `U_d` for the decaying profile, as a function of `q`.
pub fn u_d_closed(zeta: f64, d: u32, q: f64) -> Result<f64> {
    let limit = FRAC_PI_2 / zeta;
    if !(q.abs() < limit) {
        return Err(Error::Domain {
            value: q,
            domain: format!("(-{limit}, {limit})"),
        });
    }
    let z2 = zeta * zeta;
    let d = d as f64;
    let t = (zeta * q).tan();
    Ok(-z2 * d * t * t + 0.5 * z2 * (1.0 - 2.0 * d))
}

/// Which formula evaluates `V_eff`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Centrifugal term plus `-U_d` built from `(m, m', m'')`; any profile.
    General,
    /// Pöschl–Teller form in `q`; decaying profile only.
    Closed,
}

/// `V_eff(q)` for one `ell_d`. Both routes include the constant
/// [`energy_shift`], so eigenvalues of `-phi''/2 + V_eff` are energies.
#[derive(Debug, Clone)]
pub struct EffectivePotential {
    map: PctMap,
    ell_d: HalfInteger,
}

impl EffectivePotential {
    pub fn map(&self) -> &PctMap {
        &self.map
    }

    pub fn ell_d(&self) -> HalfInteger {
        self.ell_d
    }

    pub fn shift(&self) -> f64 {
        energy_shift(self.map.model.zeta())
    }

    pub fn eval(&self, route: Route, q: f64) -> Result<f64> {
        match route {
            Route::General => self.general(q),
            Route::Closed => self.closed(q),
        }
    }

    pub fn general(&self, q: f64) -> Result<f64> {
        let r = self.map.r_of_q(q)?.abs();
        let centrifugal = self.ell_d.centrifugal();
        let d = self.map.d;
        if r < NEAR_ORIGIN {
            if centrifugal != 0.0 {
                return Ok(f64::INFINITY.copysign(centrifugal));
            }
            return Ok(-u_d_origin_limit(&self.map.model, d)?);
        }
        let m = self.map.model.mass(r)?;
        Ok(centrifugal / (2.0 * r * r * m) - u_d_general(&self.map.model, d, r)?)
    }

    pub fn closed(&self, q: f64) -> Result<f64> {
        if !self.map.model.is_squared_lorentzian() {
            return Err(Error::InvalidInput(
                "the closed form exists only for the decaying profile".into(),
            ));
        }
        let zeta = self.map.model.zeta();
        let params = PtParams::from_ell_d(self.ell_d, self.map.d, zeta);
        Ok(params.potential(q)? + self.shift())
    }
}

/// `V_eff` at `q` for the given `ell_d`.
pub fn v_eff(map: &PctMap, ell_d: HalfInteger, q: f64, route: Route) -> Result<f64> {
    map.effective_potential(ell_d).eval(route, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};
    use std::sync::Arc;

    fn profile_map(zeta: f64, d: u32) -> PctMap {
        PctMap::new(MassModel::squared_lorentzian(zeta).unwrap(), d).unwrap()
    }

    /// m(r) = exp(-r^2/4): positive, even, q range finite but not closed-form.
    fn gaussian_map(d: u32) -> PctMap {
        let model = MassModel::numeric(
            1.0,
            Arc::new(|r| Ok((-r * r / 4.0f64).exp())),
            Arc::new(|r| Ok(-r / 2.0 * (-r * r / 4.0f64).exp())),
            Arc::new(|r| Ok((r * r / 4.0 - 0.5) * (-r * r / 4.0f64).exp())),
        )
        .unwrap();
        PctMap::new(model, d).unwrap()
    }

    #[test]
    fn q_of_r_examples() {
        let map = profile_map(1.0, 3);
        assert_eq!(map.q_of_r(0.0).unwrap(), 0.0);
        assert!((map.q_of_r(1.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((map.q_of_r(1e6).unwrap() - FRAC_PI_2).abs() < 1e-5);
    }

    #[test]
    fn r_of_q_examples_and_round_trip() {
        assert!((profile_map(1.0, 3).r_of_q(FRAC_PI_4).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(profile_map(2.0, 3).r_of_q(0.0).unwrap(), 0.0);
        for &zeta in &[0.5, 1.0, 2.0] {
            let map = profile_map(zeta, 3);
            for &r in &[0.1, 1.0, 10.0] {
                let back = map.r_of_q(map.q_of_r(r).unwrap()).unwrap();
                assert!((back - r).abs() <= 1e-12 * r.max(1.0), "{back} vs {r}");
            }
        }
    }

    #[test]
    fn r_of_q_rejects_outside_domain() {
        let map = profile_map(1.0, 3);
        assert!(matches!(map.r_of_q(FRAC_PI_2), Err(Error::Domain { .. })));
        assert!(matches!(map.r_of_q(-2.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn numeric_profile_transform_round_trip() {
        let map = gaussian_map(3);
        for &r in &[0.1, 1.0, 3.0, -2.0] {
            let q = map.q_of_r(r).unwrap();
            let back = map.r_of_q(q).unwrap();
            assert!((back - r).abs() < 1e-10, "{back} vs {r}");
        }
        // q(inf) = sqrt(2 pi) for exp(-r^2/4), so larger q is out of range
        assert!(map.r_of_q(2.6).is_err());
    }

    #[test]
    fn constant_mass_maps_identity() {
        let map = PctMap::new(MassModel::constant(1.0).unwrap(), 3).unwrap();
        assert!((map.q_of_r(2.5).unwrap() - 2.5).abs() < 1e-13);
        assert!((map.r_of_q(7.0).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_of_q_is_sqrt_mass() {
        for map in [profile_map(1.0, 3), profile_map(2.0, 2), gaussian_map(3)] {
            for &r in &[0.05, 0.3, 1.0, 2.0, 4.0] {
                let h = 1e-3;
                let q = |x: f64| map.q_of_r(x).unwrap();
                let fd =
                    (8.0 * (q(r + h) - q(r - h)) - (q(r + 2.0 * h) - q(r - 2.0 * h))) / (12.0 * h);
                let exact = map.model().mass(r).unwrap().sqrt();
                assert!((fd - exact).abs() < 1e-8, "r = {r}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn u_d_examples() {
        let model = MassModel::squared_lorentzian(1.0).unwrap();
        assert!((u_d_general(&model, 1, 1.0).unwrap() + 1.5).abs() < 1e-14);
        assert!((u_d_closed(1.0, 1, FRAC_PI_4).unwrap() + 1.5).abs() < 1e-14);
        assert_eq!(u_d_closed(1.0, 3, 0.0).unwrap(), -2.5);
        assert!((u_d_general(&model, 3, 1e-9).unwrap() + 2.5).abs() < 1e-12);
        assert!(u_d_closed(1.0, 3, FRAC_PI_2 - 1e-9).unwrap() < -1e15);

        let flat = MassModel::constant(1.0).unwrap();
        for d in 1..6 {
            assert_eq!(u_d_general(&flat, d, 0.7).unwrap(), 0.0);
        }
    }

    #[test]
    fn u_d_general_is_singular_at_origin() {
        let model = MassModel::squared_lorentzian(1.0).unwrap();
        assert!(matches!(
            u_d_general(&model, 3, 0.0),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            u_d_general(&model, 3, -1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn v_eff_examples() {
        let map = profile_map(1.0, 3);
        let v = map.effective_potential(HalfInteger::from_int(0));
        assert!((v.closed(FRAC_PI_4).unwrap() - 5.5).abs() < 1e-13);
        assert!((v.general(FRAC_PI_4).unwrap() - 5.5).abs() < 1e-13);

        let line = profile_map(1.0, 1).effective_potential(HalfInteger::from_int(-1));
        assert!((line.closed(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((line.general(0.0).unwrap() - 0.5).abs() < 1e-15);
        // even parity potential is symmetric about q = 0
        let a = line.general(-0.4).unwrap();
        let b = line.general(0.4).unwrap();
        assert!((a - b).abs() < 1e-13 * a.abs());

        let free = PctMap::new(MassModel::constant(1.0).unwrap(), 3)
            .unwrap()
            .effective_potential(HalfInteger::from_int(0));
        for &q in &[0.0, 0.5, 3.0] {
            assert_eq!(free.general(q).unwrap(), 0.0);
        }
        assert!(free.closed(0.5).is_err());
    }

    #[test]
    fn v_eff_singular_origin_is_signed_infinity() {
        let map = profile_map(1.0, 3);
        let v = map.effective_potential(HalfInteger::from_int(2));
        assert_eq!(v.general(0.0).unwrap(), f64::INFINITY);
        assert_eq!(v.closed(0.0).unwrap(), f64::INFINITY);
        // ell_d = -1/2 (d = 2, ell = 0) is attractive at the origin
        let v = profile_map(1.0, 2).effective_potential(HalfInteger::from_twice(-1));
        assert_eq!(v.general(0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(v.closed(0.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn v_eff_diverges_at_outer_edge() {
        let map = profile_map(1.5, 3);
        let v = map.effective_potential(HalfInteger::from_int(1));
        let edge = FRAC_PI_2 / 1.5;
        assert!(v.closed(edge * (1.0 - 1e-7)).unwrap() > 1e12);
        assert!(v.general(edge * (1.0 - 1e-7)).unwrap() > 1e12);
    }

    #[test]
    fn routes_agree_on_a_grid() {
        for &zeta in &[0.5, 1.0, 2.0] {
            for &d in &[1, 2, 3, 5] {
                let map = profile_map(zeta, d);
                for twice in -2..6 {
                    let v = map.effective_potential(HalfInteger::from_twice(twice));
                    for k in 1..200 {
                        let q = (k as f64 / 200.0) * PI / (2.0 * zeta);
                        let a = v.general(q).unwrap();
                        let b = v.closed(q).unwrap();
                        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} {b}");
                    }
                }
            }
        }
    }
}
