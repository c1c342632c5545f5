use crate::error::{HypoError, Result};

/// Scalings and their first two `t`-derivatives at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingJet {
    pub t: f64,
    pub s: Vec<f64>,
    pub ds: Vec<f64>,
    pub dds: Vec<f64>,
}

/// `g = (pt + q)^{1/4}`, `f = c g²` for the scales `(f, g)` of
/// [`DiagonalAnsatz::example_one`](super::DiagonalAnsatz::example_one).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormOne {
    pub p: f64,
    pub q: f64,
    pub c: f64,
}

/// The evolution equations force `c p = −2`; other triples are rejected.
pub fn closed_form_solution_1(p: f64, q: f64, c: f64) -> Result<ClosedFormOne> {
    if p == 0.0 {
        return Err(HypoError::InvalidArgument("p must be nonzero".into()));
    }
    if (c * p + 2.0).abs() > 1e-12 * (1.0 + (c * p).abs()) {
        return Err(HypoError::InvalidArgument(format!(
            "c·p = {} but the flow requires c·p = −2",
            c * p
        )));
    }
    Ok(ClosedFormOne { p, q, c })
}

impl ClosedFormOne {
    /// Open interval where `pt + q > 0`.
    pub fn interval(&self) -> (f64, f64) {
        let root = -self.q / self.p;
        if self.p > 0.0 {
            (root, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, root)
        }
    }

    pub fn jet(&self, t: f64) -> Result<ScalingJet> {
        let x = self.p * t + self.q;
        if x <= 0.0 {
            return Err(HypoError::InvalidArgument(format!(
                "t = {t} outside the existence interval"
            )));
        }
        let p = self.p;
        let g = x.powf(0.25);
        let dg = p / 4.0 * x.powf(-0.75);
        let ddg = -3.0 * p * p / 16.0 * x.powf(-1.75);
        let c = self.c;
        Ok(ScalingJet {
            t,
            s: vec![c * g * g, g],
            ds: vec![2.0 * c * g * dg, dg],
            dds: vec![2.0 * c * (dg * dg + g * ddg), ddg],
        })
    }
}

/// `g = (1 + sin u)^{1/2}`, `h = (1 − sin u)^{1/2}`, `t = u/2 + sin(2u)/4`, for
/// the scales `(g, h)` of [`DiagonalAnsatz::example_two`](super::DiagonalAnsatz::example_two).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ClosedFormTwo;

pub fn closed_form_solution_2() -> ClosedFormTwo {
    ClosedFormTwo
}

impl ClosedFormTwo {
    pub fn time(&self, u: f64) -> f64 {
        u / 2.0 + (2.0 * u).sin() / 4.0
    }

    /// `dt/du = cos²u`.
    pub fn dt_du(&self, u: f64) -> f64 {
        u.cos().powi(2)
    }

    /// Inverse of [`time`](Self::time) on `(−π/4, π/4)`, by bisection.
    pub fn parameter(&self, t: f64) -> Result<f64> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        if t.abs() >= half_pi / 2.0 {
            return Err(HypoError::InvalidArgument(format!(
                "t = {t} outside (−π/4, π/4)"
            )));
        }
        let (mut lo, mut hi) = (-half_pi, half_pi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.time(mid) < t {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * half_pi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn jet_at_u(&self, u: f64) -> Result<ScalingJet> {
        if u.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(HypoError::InvalidArgument(format!(
                "u = {u} outside (−π/2, π/2)"
            )));
        }
        let g = (1.0 + u.sin()).sqrt();
        let h = (1.0 - u.sin()).sqrt();
        let dg = 0.5 / (g * g * h);
        let dh = -0.5 / (g * h * h);
        let ddg = 0.5 * (-2.0 * dg / (g * g * g * h) - dh / (g * g * h * h));
        let ddh = -0.5 * (-dg / (g * g * h * h) - 2.0 * dh / (g * h * h * h));
        Ok(ScalingJet {
            t: self.time(u),
            s: vec![g, h],
            ds: vec![dg, dh],
            dds: vec![ddg, ddh],
        })
    }

    pub fn jet(&self, t: f64) -> Result<ScalingJet> {
        let mut j = self.jet_at_u(self.parameter(t)?)?;
        j.t = t;
        Ok(j)
    }
}
