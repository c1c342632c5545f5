use std::fmt::Write as _;

use super::ansatz::{flow_rhs, DiagonalAnsatz, RHS_TOL};
use crate::error::{HypoError, Result};

/// Bound on the hypo residual re-checked at every accepted state.
pub const HYPO_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub s: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrajectory {
    pub groups: Vec<String>,
    pub states: Vec<FlowState>,
    pub interval: (f64, f64),
    /// `max |y_h − y_{h/2}| / 15` over the grid (step-halving estimate).
    pub richardson_error: f64,
    /// Coefficient-matching residual at each state.
    pub rhs_residuals: Vec<f64>,
    /// Largest hypo residual seen over accepted states.
    pub max_hypo_residual: f64,
}

impl FlowTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|st| st.t).collect()
    }

    /// Values of scaling group `g` along the grid.
    pub fn series(&self, g: usize) -> Vec<f64> {
        self.states.iter().map(|st| st.s[g]).collect()
    }

    /// Whitespace-separated table: `t`, scalings, residual; 17 significant digits.
    pub fn to_table(&self) -> String {
        let mut out = String::from("t");
        for g in &self.groups {
            out.push(' ');
            out.push_str(g);
        }
        out.push_str(" residual\n");
        for (st, r) in self.states.iter().zip(&self.rhs_residuals) {
            write!(out, "{:.16e}", st.t).unwrap();
            for x in &st.s {
                write!(out, " {x:.16e}").unwrap();
            }
            writeln!(out, " {r:.16e}").unwrap();
        }
        out
    }
}

fn rate(ansatz: &DiagonalAnsatz, t: f64, s: &[f64]) -> Result<(Vec<f64>, f64)> {
    let r = flow_rhs(ansatz, s).map_err(|e| HypoError::Integration {
        t,
        reason: e.to_string(),
    })?;
    if r.residual > RHS_TOL {
        return Err(HypoError::Integration {
            t,
            reason: format!("coefficient matching residual {:e}", r.residual),
        });
    }
    Ok((r.ds, r.residual))
}

fn axpy(s: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    s.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_step(ansatz: &DiagonalAnsatz, t: f64, s: &[f64], h: f64) -> Result<Vec<f64>> {
    let (k1, _) = rate(ansatz, t, s)?;
    let (k2, _) = rate(ansatz, t + h / 2.0, &axpy(s, h / 2.0, &k1))?;
    let (k3, _) = rate(ansatz, t + h / 2.0, &axpy(s, h / 2.0, &k2))?;
    let (k4, _) = rate(ansatz, t + h, &axpy(s, h, &k3))?;
    let next: Vec<f64> = (0..s.len())
        .map(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    if next.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(HypoError::Integration {
            t: t + h,
            reason: "a scaling reached zero (end of the existence interval)".into(),
        });
    }
    Ok(next)
}

/// Plain fixed-step RK4 from `s0`, returning all `n_steps + 1` states.
pub fn rk4(
    ansatz: &DiagonalAnsatz,
    s0: &[f64],
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Result<Vec<Vec<f64>>> {
    if n_steps == 0 {
        return Err(HypoError::InvalidArgument(
            "n_steps must be positive".into(),
        ));
    }
    let h = (t1 - t0) / n_steps as f64;
    let mut out = vec![s0.to_vec()];
    for k in 0..n_steps {
        let next = rk4_step(ansatz, t0 + k as f64 * h, &out[k], h)?;
        out.push(next);
    }
    Ok(out)
}

/// Integrate the hypo evolution equations on `[t0, t1]` with `n_steps` RK4
/// steps, re-checking validity and the hypo condition at every state.
pub fn integrate(
    ansatz: &DiagonalAnsatz,
    s0: &[f64],
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Result<FlowTrajectory> {
    rate(ansatz, t0, s0)?;
    let coarse = rk4(ansatz, s0, t0, t1, n_steps)?;
    let fine = rk4(ansatz, s0, t0, t1, 2 * n_steps)?;
    let richardson_error = coarse
        .iter()
        .enumerate()
        .flat_map(|(k, y)| {
            y.iter()
                .zip(&fine[2 * k])
                .map(|(a, b)| (a - b).abs() / 15.0)
        })
        .fold(0.0, f64::max);

    let h = (t1 - t0) / n_steps as f64;
    let alg = ansatz.algebra.to_f64();
    let mut states = Vec::with_capacity(coarse.len());
    let mut rhs_residuals = Vec::with_capacity(coarse.len());
    let mut max_hypo_residual: f64 = 0.0;
    for (k, s) in coarse.into_iter().enumerate() {
        let t = t0 + k as f64 * h;
        let st = ansatz.structure_at(&s);
        let v = st.validate(1e-9);
        if !v.is_valid() {
            return Err(HypoError::Integration {
                t,
                reason: format!("invalid SU(2)-structure: {}", v.failure().unwrap_or("")),
            });
        }
        let hypo = st.is_hypo(&alg, HYPO_TOL);
        max_hypo_residual =
            max_hypo_residual.max(hypo.residuals.iter().copied().fold(0.0, f64::max));
        if !hypo.hypo {
            return Err(HypoError::Integration {
                t,
                reason: "hypo condition lost".into(),
            });
        }
        rhs_residuals.push(rate(ansatz, t, &s)?.1);
        states.push(FlowState { t, s });
    }
    Ok(FlowTrajectory {
        groups: ansatz.groups.clone(),
        states,
        interval: (t0, t1),
        richardson_error,
        rhs_residuals,
        max_hypo_residual,
    })
}
