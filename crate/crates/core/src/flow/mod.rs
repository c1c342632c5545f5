//! Hypo evolution equations for diagonal coframe ansätze.

mod ansatz;
mod closed_form;
mod coframe;
mod integrate;

pub use ansatz::{flow_rhs, flow_rhs_checked, DiagonalAnsatz, FlowRhs, RHS_TOL};
pub use closed_form::{
    closed_form_solution_1, closed_form_solution_2, ClosedFormOne, ClosedFormTwo, ScalingJet,
};
pub use coframe::{
    coframe_family, coframe_point, trajectory_jets, CoframeFamily, CoframeSample, TIME_INDEX,
};
pub use integrate::{integrate, rk4, FlowState, FlowTrajectory, HYPO_TOL};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::LieAlgebra;
    use crate::su2::SU2Structure;

    #[test]
    fn example_one_rates() {
        let a = DiagonalAnsatz::example_one();
        let (f, g) = (1.3, 0.8);
        let r = flow_rhs(&a, &[f, g]).unwrap();
        assert!(r.residual < 1e-12);
        let (df, dg) = (r.ds[0], r.ds[1]);
        assert!((df * g * g + 2.0 * f * g * dg + 2.0).abs() < 1e-12);
        assert!((df / (g * g) - 2.0 * f * dg / (g * g * g)).abs() < 1e-12);
        assert!((df + 1.0 / (g * g)).abs() < 1e-12);
    }

    #[test]
    fn example_two_rates() {
        let a = DiagonalAnsatz::example_two();
        let (g, h) = (1.1, 0.7);
        let r = flow_rhs(&a, &[g, h]).unwrap();
        assert!(r.residual < 1e-12);
        assert!((2.0 * g * g * h * r.ds[0] - 1.0).abs() < 1e-12);
        assert!((2.0 * g * h * h * r.ds[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn abelian_flow_is_static() {
        let base = SU2Structure::reference();
        let exps = vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, -1], vec![0, -1]];
        let a = DiagonalAnsatz::new(LieAlgebra::abelian(5), base, &["f", "g"], exps).unwrap();
        let r = flow_rhs(&a, &[1.0, 1.0]).unwrap();
        assert!(r.ds.iter().all(|x| x.abs() < 1e-15));
        let traj = integrate(&a, &[1.0, 1.0], 0.0, 1.0, 10).unwrap();
        assert!(traj.states.iter().all(|st| st.s == vec![1.0, 1.0]));
        let fam = coframe_family(&a, &trajectory_jets(&a, &traj).unwrap());
        assert!(fam
            .samples
            .iter()
            .all(|s| s.point.de.iter().all(|f| f.max_abs() == 0.0)));
    }

    #[test]
    fn closed_form_one_checks() {
        assert!(closed_form_solution_1(0.0, 1.0, 1.0).is_err());
        assert!(closed_form_solution_1(-2.0, 1.0, 2.0).is_err());
        let cf = closed_form_solution_1(-2.0, 1.0, 1.0).unwrap();
        assert_eq!(cf.interval(), (f64::NEG_INFINITY, 0.5));
        let j = cf.jet(0.0).unwrap();
        assert_eq!(j.s, vec![1.0, 1.0]);
        assert_eq!(j.ds[1], -0.5);
        // 2cg³g' = −1
        assert!((2.0 * j.s[1].powi(3) * j.ds[1] + 1.0).abs() < 1e-15);
        assert!(cf.jet(0.5).is_err());
        let other = closed_form_solution_1(4.0, 1.0, -0.5).unwrap();
        assert_eq!(other.jet(0.0).unwrap().s[1], 1.0);
    }

    #[test]
    fn closed_form_two_checks() {
        let cf = closed_form_solution_2();
        let j = cf.jet_at_u(0.0).unwrap();
        assert_eq!((j.t, j.s.clone()), (0.0, vec![1.0, 1.0]));
        for u in [-1.2, -0.3, 0.4, 1.1] {
            let j = cf.jet_at_u(u).unwrap();
            assert!((j.s[0].powi(2) + j.s[1].powi(2) - 2.0).abs() < 1e-14);
            let du = 1e-6;
            let num = (cf.time(u + du) - cf.time(u - du)) / (2.0 * du);
            assert!((num - cf.dt_du(u)).abs() < 1e-9);
            assert!((cf.parameter(j.t).unwrap() - u).abs() < 1e-12);
        }
        assert!(cf.jet_at_u(std::f64::consts::FRAC_PI_2).is_err());
    }
}
