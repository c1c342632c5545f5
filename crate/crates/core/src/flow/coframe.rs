use super::ansatz::{flow_rhs, DiagonalAnsatz};
use super::closed_form::ScalingJet;
use super::integrate::FlowTrajectory;
use crate::curvature::CoframePoint;
use crate::error::{HypoError, Result};
use crate::exterior::{Form, LieAlgebra};
use crate::su2::{su3_lift, SU3Structure, DIM};

/// Index of `E^6 = dt` in the six-dimensional coframe.
pub const TIME_INDEX: usize = DIM + 1;

/// The orthonormal coframe `(E^1..E^5, dt)` at one time.
#[derive(Clone, Debug)]
pub struct CoframeSample {
    pub t: f64,
    /// `E^i = w_i e^i`.
    pub weights: Vec<f64>,
    pub point: CoframePoint<f64>,
    /// The SU(3)-structure, constant in the `E` coframe.
    pub su3: SU3Structure<f64>,
}

impl CoframeSample {
    /// Largest coefficient of `dω`, `dψ₊`, `dψ₋`.
    pub fn integrability_residual(&self) -> f64 {
        let d = LieAlgebra::from_differentials(self.point.de.clone());
        [&self.su3.omega, &self.su3.psi_plus, &self.su3.psi_minus]
            .iter()
            .map(|f| d.d(f).max_abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct CoframeFamily {
    pub samples: Vec<CoframeSample>,
}

impl CoframeFamily {
    pub fn max_integrability_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(CoframeSample::integrability_residual)
            .fold(0.0, f64::max)
    }
}

/// `dE^i = r_i E^6∧E^i + Σ (w_i / w_j w_k) c^i_jk E^{jk}` with `r_i = w_i'/w_i`,
/// together with the `t`-derivatives of these coefficients.
pub fn coframe_point(ansatz: &DiagonalAnsatz, jet: &ScalingJet) -> CoframeSample {
    let n = TIME_INDEX;
    let w = ansatz.weights(&jet.s);
    let g = ansatz.n_groups();
    let rate = |i: usize| -> f64 {
        (0..g)
            .map(|k| ansatz.exponents[i][k] as f64 * jet.ds[k] / jet.s[k])
            .sum()
    };
    let rate_dt = |i: usize| -> f64 {
        (0..g)
            .map(|k| {
                let r = jet.ds[k] / jet.s[k];
                ansatz.exponents[i][k] as f64 * (jet.dds[k] / jet.s[k] - r * r)
            })
            .sum()
    };
    let mut de = Vec::with_capacity(n);
    let mut de_dt = Vec::with_capacity(n);
    for i in 0..DIM {
        let ri = rate(i);
        let mut f = Form::monomial(n, &[n, i + 1], ri);
        let mut fd = Form::monomial(n, &[n, i + 1], rate_dt(i));
        for (m, c) in ansatz.algebra.de(i + 1).terms() {
            let idx = m.indices();
            let (j, k) = (idx[0] - 1, idx[1] - 1);
            let coeff = w[i] / (w[j] * w[k]) * <crate::Q as crate::Scalar>::to_f64(c);
            f = f.add(&Form::monomial(n, &[j + 1, k + 1], coeff));
            fd = fd.add(&Form::monomial(
                n,
                &[j + 1, k + 1],
                coeff * (ri - rate(j) - rate(k)),
            ));
        }
        de.push(f);
        de_dt.push(fd);
    }
    de.push(Form::zero(n, 2));
    de_dt.push(Form::zero(n, 2));
    CoframeSample {
        t: jet.t,
        weights: w,
        point: CoframePoint::new(de).with_time(n, de_dt),
        su3: su3_lift(&ansatz.base.to_f64()),
    }
}

pub fn coframe_family(ansatz: &DiagonalAnsatz, jets: &[ScalingJet]) -> CoframeFamily {
    CoframeFamily {
        samples: jets.iter().map(|j| coframe_point(ansatz, j)).collect(),
    }
}

/// Jets along an integrated trajectory: `s'` from the flow equations, `s''`
/// by centered differences of `s'` (second-order one-sided at the ends).
pub fn trajectory_jets(ansatz: &DiagonalAnsatz, traj: &FlowTrajectory) -> Result<Vec<ScalingJet>> {
    let m = traj.states.len();
    if m < 3 {
        return Err(HypoError::InvalidArgument(
            "need at least three states to differentiate".into(),
        ));
    }
    let h = traj.states[1].t - traj.states[0].t;
    let ds: Vec<Vec<f64>> = traj
        .states
        .iter()
        .map(|st| flow_rhs(ansatz, &st.s).map(|r| r.ds))
        .collect::<Result<_>>()?;
    let g = ansatz.n_groups();
    Ok((0..m)
        .map(|k| {
            let dds = (0..g)
                .map(|q| match k {
                    0 => (-3.0 * ds[0][q] + 4.0 * ds[1][q] - ds[2][q]) / (2.0 * h),
                    _ if k == m - 1 => {
                        (3.0 * ds[k][q] - 4.0 * ds[k - 1][q] + ds[k - 2][q]) / (2.0 * h)
                    }
                    _ => (ds[k + 1][q] - ds[k - 1][q]) / (2.0 * h),
                })
                .collect();
            ScalingJet {
                t: traj.states[k].t,
                s: traj.states[k].s.clone(),
                ds: ds[k].clone(),
                dds,
            }
        })
        .collect())
}
