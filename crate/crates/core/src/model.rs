//! Mass profiles and quantum-number bookkeeping.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A fallible scalar function of `r`, used for user-supplied mass profiles.
pub type ProfileFn = Arc<dyn Fn(f64) -> std::result::Result<f64, String> + Send + Sync>;

/// `m(r)` together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSample {
    pub m: f64,
    pub dm: f64,
    pub d2m: f64,
}

#[derive(Clone)]
pub enum MassKind {
    /// `m(r) = 1/(1 + zeta^2 r^2)^2`.
    SquaredLorentzian,
    /// Arbitrary positive profile with caller-provided derivatives.
    NumericProfile {
        m: ProfileFn,
        dm: ProfileFn,
        d2m: ProfileFn,
    },
}

impl fmt::Debug for MassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MassKind::SquaredLorentzian => f.write_str("SquaredLorentzian"),
            MassKind::NumericProfile { .. } => f.write_str("NumericProfile(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MassModel {
    zeta: f64,
    kind: MassKind,
}

impl MassModel {
    /// The decaying profile `1/(1 + zeta^2 r^2)^2`.
    pub fn squared_lorentzian(zeta: f64) -> Result<Self> {
        check_zeta(zeta)?;
        Ok(Self {
            zeta,
            kind: MassKind::SquaredLorentzian,
        })
    }

    /// A numerically specified profile. `zeta` sets the length scale used for
    /// default grids; the mass itself is whatever `m` returns.
    pub fn numeric(zeta: f64, m: ProfileFn, dm: ProfileFn, d2m: ProfileFn) -> Result<Self> {
        check_zeta(zeta)?;
        Ok(Self {
            zeta,
            kind: MassKind::NumericProfile { m, dm, d2m },
        })
    }

    /// Constant unit mass, handy as a free-particle reference.
    pub fn constant(zeta: f64) -> Result<Self> {
        Self::numeric(
            zeta,
            Arc::new(|_| Ok(1.0)),
            Arc::new(|_| Ok(0.0)),
            Arc::new(|_| Ok(0.0)),
        )
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn kind(&self) -> &MassKind {
        &self.kind
    }

    pub fn is_squared_lorentzian(&self) -> bool {
        matches!(self.kind, MassKind::SquaredLorentzian)
    }

    /// `(m, m', m'')` at `r`.
    pub fn mass_at(&self, r: f64) -> Result<MassSample> {
        match &self.kind {
            MassKind::SquaredLorentzian => Ok(squared_lorentzian_mass(self.zeta, r)),
            MassKind::NumericProfile { m, dm, d2m } => {
                let eval = |f: &ProfileFn| {
                    f(r).map_err(|message| Error::Evaluation { r, message })
                        .and_then(|v| {
                            if v.is_finite() {
                                Ok(v)
                            } else {
                                Err(Error::Evaluation {
                                    r,
                                    message: format!("non-finite value {v}"),
                                })
                            }
                        })
                };
                let sample = MassSample {
                    m: eval(m)?,
                    dm: eval(dm)?,
                    d2m: eval(d2m)?,
                };
                if sample.m <= 0.0 {
                    return Err(Error::Evaluation {
                        r,
                        message: format!("mass must be positive, got {}", sample.m),
                    });
                }
                Ok(sample)
            }
        }
    }

    /// Mass value only.
    pub fn mass(&self, r: f64) -> Result<f64> {
        self.mass_at(r).map(|s| s.m)
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta.is_finite() && zeta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "zeta must be a positive finite number, got {zeta}"
        )))
    }
}

fn squared_lorentzian_mass(zeta: f64, r: f64) -> MassSample {
    let rho = zeta * r;
    let z2 = zeta * zeta;
    let s = 1.0 + rho * rho;
    let s2 = s * s;
    let s3 = s2 * s;
    MassSample {
        m: 1.0 / s2,
        dm: -4.0 * zeta * rho / s3,
        d2m: -4.0 * z2 / s3 + 24.0 * z2 * rho * rho / (s3 * s),
    }
}

/// Free-function form of [`MassModel::mass_at`].
pub fn mass_at(model: &MassModel, r: f64) -> Result<MassSample> {
    model.mass_at(r)
}

/// Parity of a one-dimensional state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::InvalidInput(format!("unknown parity {other:?}"))),
        }
    }
}

/// An exact multiple of one half, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        Self { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `l (l + 1)`, exact in quarters.
    pub fn centrifugal(self) -> f64 {
        // (t/2)(t/2 + 1) = t (t + 2) / 4
        (self.twice * (self.twice + 2)) as f64 / 4.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n_r: u32,
    pub ell: u32,
    pub d: u32,
    pub parity: Option<Parity>,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, ell: u32, d: u32, parity: Option<Parity>) -> Result<Self> {
        let qn = Self {
            n_r,
            ell,
            d,
            parity,
        };
        qn.validate()?;
        Ok(qn)
    }

    /// `d >= 2` state with no parity label.
    pub fn radial(n_r: u32, ell: u32, d: u32) -> Result<Self> {
        Self::new(n_r, ell, d, None)
    }

    /// One-dimensional state of the given parity.
    pub fn line(n_r: u32, parity: Parity) -> Self {
        Self {
            n_r,
            ell: 0,
            d: 1,
            parity: Some(parity),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.d, self.parity) {
            (0, _) => Err(Error::InvalidInput("dimension must be at least 1".into())),
            (1, None) => Err(Error::InvalidInput(
                "d = 1 requires an explicit parity".into(),
            )),
            (1, Some(_)) if self.ell != 0 => Err(Error::InvalidInput(format!(
                "d = 1 admits only ell = 0, got {}",
                self.ell
            ))),
            (d, Some(_)) if d >= 2 => Err(Error::InvalidInput(format!(
                "parity is only meaningful for d = 1, got d = {d}"
            ))),
            _ => Ok(()),
        }
    }

    /// `ell_d = ell + (d - 3)/2` for `d >= 2`; `-1` (even) or `0` (odd) for `d = 1`.
    pub fn ell_d(&self) -> Result<HalfInteger> {
        self.validate()?;
        Ok(match self.parity {
            Some(Parity::Even) => HalfInteger::from_int(-1),
            Some(Parity::Odd) => HalfInteger::from_int(0),
            None => HalfInteger::from_twice(2 * self.ell as i64 + self.d as i64 - 3),
        })
    }

    pub fn with_n(self, n_r: u32) -> Self {
        Self { n_r, ..self }
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n_r={}, ell={}, d={}", self.n_r, self.ell, self.d)?;
        if let Some(p) = self.parity {
            write!(f, ", {p:?}")?;
        }
        f.write_str(")")
    }
}

pub fn ell_d_of(qn: &QuantumNumbers) -> Result<f64> {
    qn.ell_d().map(HalfInteger::to_f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn profile_at_origin() {
        let s = MassModel::squared_lorentzian(1.0)
            .unwrap()
            .mass_at(0.0)
            .unwrap();
        assert_eq!((s.m, s.dm, s.d2m), (1.0, 0.0, -4.0));
    }

    #[test]
    fn profile_at_unit_radius() {
        // d/dr (1+r^2)^-2 = -4r (1+r^2)^-3, d2/dr2 = -4(1+r^2)^-3 + 24 r^2 (1+r^2)^-4
        let s = MassModel::squared_lorentzian(1.0)
            .unwrap()
            .mass_at(1.0)
            .unwrap();
        assert_eq!(s.m, 0.25);
        assert_eq!(s.dm, -0.5);
        assert!((s.d2m - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mass_vanishes_far_out() {
        let m = MassModel::squared_lorentzian(2.0)
            .unwrap()
            .mass(1e8)
            .unwrap();
        assert!(m > 0.0 && m < 1e-30);
    }

    #[test]
    fn derivatives_match_central_differences() {
        for &zeta in &[0.5, 1.0, 2.0] {
            let model = MassModel::squared_lorentzian(zeta).unwrap();
            let mut r = 0.1;
            while r <= 10.0 {
                let s = model.mass_at(r).unwrap();
                let h = 1e-4 * r.max(1e-2);
                let f = |x: f64| model.mass(x).unwrap();
                let fd1 = (f(r + h) - f(r - h)) / (2.0 * h);
                let dm = |x: f64| model.mass_at(x).unwrap().dm;
                let fd2 = (dm(r + h) - dm(r - h)) / (2.0 * h);
                assert!(
                    (s.dm - fd1).abs() <= 1e-6 * s.dm.abs().max(1.0),
                    "m' at {r}"
                );
                assert!(
                    (s.d2m - fd2).abs() <= 1e-6 * s.d2m.abs().max(1.0),
                    "m'' at {r}"
                );
                r *= 1.3;
            }
        }
    }

    #[test]
    fn rejects_bad_zeta() {
        assert!(MassModel::squared_lorentzian(0.0).is_err());
        assert!(MassModel::squared_lorentzian(-1.0).is_err());
        assert!(MassModel::squared_lorentzian(f64::NAN).is_err());
    }

    #[test]
    fn numeric_profile_propagates_failures() {
        let model = MassModel::numeric(
            1.0,
            Arc::new(|r| {
                if r > 1.0 {
                    Err("out of table".into())
                } else {
                    Ok(1.0)
                }
            }),
            Arc::new(|_| Ok(0.0)),
            Arc::new(|_| Ok(0.0)),
        )
        .unwrap();
        assert!(model.mass_at(0.5).is_ok());
        assert!(matches!(model.mass_at(2.0), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn ell_d_examples() {
        assert_eq!(
            ell_d_of(&QuantumNumbers::radial(0, 0, 3).unwrap()).unwrap(),
            0.0
        );
        assert_eq!(
            ell_d_of(&QuantumNumbers::radial(0, 2, 2).unwrap()).unwrap(),
            1.5
        );
        assert_eq!(
            ell_d_of(&QuantumNumbers::line(0, Parity::Even)).unwrap(),
            -1.0
        );
        assert_eq!(
            ell_d_of(&QuantumNumbers::line(0, Parity::Odd)).unwrap(),
            0.0
        );
    }

    #[test]
    fn d1_without_parity_is_rejected() {
        let qn = QuantumNumbers {
            n_r: 0,
            ell: 0,
            d: 1,
            parity: None,
        };
        assert!(matches!(ell_d_of(&qn), Err(Error::InvalidInput(_))));
        assert!(QuantumNumbers::new(0, 1, 1, Some(Parity::Odd)).is_err());
        assert!(QuantumNumbers::new(0, 0, 3, Some(Parity::Odd)).is_err());
        assert!(QuantumNumbers::new(0, 0, 0, None).is_err());
    }

    proptest! {
        #[test]
        fn positive_everywhere(zeta in 1e-3f64..1e3, r in -1e3f64..1e3) {
            let m = MassModel::squared_lorentzian(zeta).unwrap().mass(r).unwrap();
            prop_assert!(m > 0.0);
        }

        #[test]
        fn scaling_in_zeta(zeta in 1e-2f64..1e2, r in 0.0f64..1e2) {
            let a = MassModel::squared_lorentzian(zeta).unwrap().mass(r).unwrap();
            let b = MassModel::squared_lorentzian(1.0).unwrap().mass(zeta * r).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn transcription_preserves_ell_d(ell in 0u32..40, d in 2u32..40) {
            let a = QuantumNumbers::radial(0, ell, d).unwrap().ell_d().unwrap();
            let b = QuantumNumbers::radial(0, 0, d + 2 * ell).unwrap().ell_d().unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
