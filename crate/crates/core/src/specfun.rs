//! Terminating Gauss hypergeometric series, composite Gauss–Legendre
//! quadrature and sign-change node counting.

use std::sync::OnceLock;

use crate::{Error, Result};

/// `2F1(-n, b; c; x)`, a polynomial of degree `n` in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminatingHyp {
    n: u32,
    b: f64,
    c: f64,
    coefficients: Vec<f64>,
}

impl TerminatingHyp {
    pub fn new(n: u32, b: f64, c: f64) -> Result<Self> {
        let mut coefficients = Vec::with_capacity(n as usize + 1);
        let mut coeff = 1.0;
        coefficients.push(coeff);
        for k in 0..n {
            let kf = k as f64;
            let denom = (c + kf) * (kf + 1.0);
            if denom == 0.0 {
                return Err(Error::Parameter(format!(
                    "c = {c} hits a pole of (c)_k at k = {}",
                    k + 1
                )));
            }
            coeff *= (kf - n as f64) * (b + kf) / denom;
            coefficients.push(coeff);
        }
        Ok(Self {
            n,
            b,
            c,
            coefficients,
        })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &a| acc * x + a)
    }

    /// Value and first two derivatives with respect to `x`.
    pub fn eval_with_derivatives(&self, x: f64) -> (f64, f64, f64) {
        let (mut p, mut dp, mut d2p) = (0.0, 0.0, 0.0);
        for &a in self.coefficients.iter().rev() {
            d2p = d2p * x + 2.0 * dp;
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp, d2p)
    }
}

/// `2F1(-n, b; c; x)` evaluated once.
pub fn hyp_eval(n: u32, b: f64, c: f64, x: f64) -> Result<f64> {
    Ok(TerminatingHyp::new(n, b, c)?.eval(x))
}

/// Result of [`quad`]: the final estimate and the difference from the
/// previous refinement level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

const GAUSS_ORDER: usize = 16;
const MAX_PANELS: usize = 1 << 20;

fn gauss_legendre_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_ORDER))
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.reverse();
    rule
}

fn composite<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre_rule();
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let panel: f64 = rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum();
        total += panel * half;
    }
    total
}

/// Composite Gauss–Legendre integration of `f` over `[a, b]`, doubling the
/// panel count until two successive estimates agree within `tol`.
pub fn quad<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "quad needs a < b and tol > 0, got [{a}, {b}] with tol {tol}"
        )));
    }
    let mut panels = 1;
    let mut previous = composite(&mut f, a, b, panels);
    let mut diff = f64::INFINITY;
    while panels < MAX_PANELS {
        panels *= 2;
        let current = composite(&mut f, a, b, panels);
        diff = (current - previous).abs();
        previous = current;
        if !current.is_finite() {
            break;
        }
        if diff <= tol {
            return Ok(Quadrature {
                value: current,
                error_estimate: diff,
                panels,
            });
        }
    }
    Err(Error::NonConvergence {
        estimate: previous,
        error_estimate: diff,
        tolerance: tol,
    })
}

/// [`quad`] for integrands that can fail; the first failure aborts.
pub fn try_quad<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let result = quad(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => result,
    }
}

/// Strict sign changes of `f` on `samples` equally spaced interior points of
/// `(a, b)`. Values below `1e-13 * max|f|` are treated as zero and skipped.
pub fn count_nodes<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, samples: usize) -> usize {
    let step = (b - a) / (samples as f64 + 1.0);
    let values: Vec<f64> = (1..=samples).map(|i| f(a + i as f64 * step)).collect();
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = 1e-13 * scale;
    let mut last_sign = 0.0;
    let mut changes = 0;
    for v in values {
        if v.abs() <= floor || v.is_nan() {
            continue;
        }
        let sign = v.signum();
        if last_sign != 0.0 && sign != last_sign {
            changes += 1;
        }
        last_sign = sign;
    }
    changes
}
