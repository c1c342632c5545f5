use hypo_core::curvature::{curvature, holonomy_span, levi_civita, CurvatureData};
use hypo_core::flow::{
    closed_form_solution_1, closed_form_solution_2, coframe_family, coframe_point, integrate,
    trajectory_jets, DiagonalAnsatz, ScalingJet, HYPO_TOL,
};
use hypo_core::linalg::Mat;

fn example_one_errors(n: usize) -> (f64, f64) {
    let a = DiagonalAnsatz::example_one();
    let cf = closed_form_solution_1(-2.0, 1.0, 1.0).unwrap();
    let traj = integrate(&a, &[1.0, 1.0], 0.0, 0.45, n).unwrap();
    let err = traj
        .states
        .iter()
        .map(|st| {
            let j = cf.jet(st.t).unwrap();
            (st.s[0] - j.s[0]).abs().max((st.s[1] - j.s[1]).abs())
        })
        .fold(0.0, f64::max);
    (err, traj.richardson_error)
}

#[test]
fn example_one_matches_closed_form_with_fourth_order() {
    let (e1000, rich) = example_one_errors(1000);
    let (e2000, _) = example_one_errors(2000);
    assert!(e1000 <= 1e-10, "{e1000:e}");
    let ratio = e1000 / e2000;
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    assert!(rich <= 1e-10);
}

#[test]
fn example_one_conserves_f_over_g_squared() {
    let a = DiagonalAnsatz::example_one();
    let traj = integrate(&a, &[1.0, 1.0], 0.0, 0.45, 1000).unwrap();
    assert!(traj.max_hypo_residual <= HYPO_TOL);
    for st in &traj.states {
        assert!((st.s[0] / (st.s[1] * st.s[1]) - 1.0).abs() <= 1e-10);
    }
    let table = traj.to_table();
    assert!(table.starts_with("t f g residual\n"));
    assert_eq!(table.lines().count(), 1002);
}

#[test]
fn example_two_conserves_and_matches_closed_form() {
    let a = DiagonalAnsatz::example_two();
    let cf = closed_form_solution_2();
    let forward = integrate(&a, &[1.0, 1.0], 0.0, 0.7, 1000).unwrap();
    let backward = integrate(&a, &[1.0, 1.0], 0.0, -0.7, 1000).unwrap();
    for st in forward.states.iter().chain(&backward.states) {
        assert!((st.s[0].powi(2) + st.s[1].powi(2) - 2.0).abs() <= 1e-12);
        let j = cf.jet(st.t).unwrap();
        assert!((st.s[0] - j.s[0]).abs() <= 1e-9 && (st.s[1] - j.s[1]).abs() <= 1e-9);
    }
}

#[test]
fn integration_stops_at_the_end_of_the_interval() {
    let a = DiagonalAnsatz::example_one();
    assert!(integrate(&a, &[1.0, 1.0], 0.0, 0.6, 100).is_err());
}

fn curvature_at(a: &DiagonalAnsatz, jet: &ScalingJet) -> CurvatureData<f64> {
    let s = coframe_point(a, jet);
    assert!(s.integrability_residual() <= 1e-9);
    let conn = levi_civita(&s.point).unwrap();
    assert!(conn.structure_residual(&s.point) <= 1e-9);
    let curv = curvature(&conn, &s.point).unwrap();
    assert!(
        curv.ricci_sup_norm() <= 1e-8,
        "ric {:e}",
        curv.ricci_sup_norm()
    );
    assert!(curv.bianchi_residual() <= 1e-8);
    assert!(curv.ricci.sub(&curv.ricci.transpose()).max_abs() <= 1e-12);
    curv
}

#[test]
fn example_metrics_are_ricci_flat_with_full_su3_span() {
    let a = DiagonalAnsatz::example_one();
    let cf = closed_form_solution_1(-2.0, 1.0, 1.0).unwrap();
    let samples: Vec<_> = [-1.0, 0.0, 0.4]
        .iter()
        .map(|&t| curvature_at(&a, &cf.jet(t).unwrap()))
        .collect();
    let omega = coframe_point(&a, &cf.jet(0.0).unwrap()).su3.omega;
    let hol = holonomy_span(&samples, &omega).unwrap();
    assert_eq!(hol.dimension, 8);
    assert!(hol.contained_in_su3);

    let b = DiagonalAnsatz::example_two();
    let cf2 = closed_form_solution_2();
    let samples: Vec<_> = [-1.0, 0.0, 1.0]
        .iter()
        .map(|&u| curvature_at(&b, &cf2.jet_at_u(u).unwrap()))
        .collect();
    let omega = coframe_point(&b, &cf2.jet_at_u(0.0).unwrap()).su3.omega;
    let hol = holonomy_span(&samples, &omega).unwrap();
    assert_eq!(hol.dimension, 8);
    assert!(hol.contained_in_su3);
}

#[test]
fn integrated_family_is_integrable() {
    let a = DiagonalAnsatz::example_one();
    let traj = integrate(&a, &[1.0, 1.0], 0.0, 0.45, 200).unwrap();
    let fam = coframe_family(&a, &trajectory_jets(&a, &traj).unwrap());
    assert!(fam.max_integrability_residual() <= 1e-9);
    let first = &fam.samples[0];
    assert_eq!(first.weights, vec![1.0; 5]);
}

#[test]
fn flat_cylinder_has_trivial_holonomy() {
    use hypo_core::su2::SU2Structure;
    use hypo_core::LieAlgebra;
    let exps = vec![vec![1]; 5];
    let a = DiagonalAnsatz::new(
        LieAlgebra::abelian(5),
        SU2Structure::reference(),
        &["s"],
        exps,
    )
    .unwrap();
    let jet = ScalingJet {
        t: 0.0,
        s: vec![1.0],
        ds: vec![0.0],
        dds: vec![0.0],
    };
    let s = coframe_point(&a, &jet);
    let curv = curvature(&levi_civita(&s.point).unwrap(), &s.point).unwrap();
    assert_eq!(holonomy_span(&[curv], &s.su3.omega).unwrap().dimension, 0);
    assert!(holonomy_span(&[], &s.su3.omega).is_err());
}

/// Left-invariant coframe of (0,0,0,12,13) in coordinates `(x1..x5, t)`:
/// `e^4 = dx4 − x2 dx1`, `e^5 = dx5 − x3 dx1`, scaled by `w(t)`.
fn coframe_matrix(x: &[f64; 6], w: &[f64]) -> Mat<f64> {
    let mut m = Mat::zeros(6, 6);
    for i in 0..5 {
        m[(i, i)] = w[i];
    }
    m[(3, 0)] = -x[1] * w[3];
    m[(4, 0)] = -x[2] * w[4];
    m[(5, 5)] = 1.0;
    m
}

/// Connection coefficients `ω^i_j(E_k)` from coordinate Christoffel symbols
/// computed by finite differences of the metric.
fn christoffel_oracle(weights: impl Fn(f64) -> Vec<f64>, x: [f64; 6]) -> Vec<Vec<Vec<f64>>> {
    let h = 1e-4;
    let metric = |y: &[f64; 6]| {
        let th = coframe_matrix(y, &weights(y[5]));
        th.transpose().mul(&th)
    };
    let frame = |y: &[f64; 6]| coframe_matrix(y, &weights(y[5])).inverse(0.0).unwrap();
    let shifted = |a: usize, s: f64| {
        let mut y = x;
        y[a] += s;
        y
    };
    // fourth-order central differences
    let diff = |f: &dyn Fn(&[f64; 6]) -> Mat<f64>, a: usize| {
        let at = |s: f64| f(&shifted(a, s));
        at(-2.0 * h)
            .sub(&at(2.0 * h))
            .add(&at(h).sub(&at(-h)).scale(&8.0))
            .scale(&(1.0 / (12.0 * h)))
    };
    let dg: Vec<Mat<f64>> = (0..6).map(|a| diff(&metric, a)).collect();
    let df: Vec<Mat<f64>> = (0..6).map(|a| diff(&frame, a)).collect();
    let ginv = metric(&x).inverse(0.0).unwrap();
    // Γ^b_ac
    let mut gamma = vec![vec![vec![0.0; 6]; 6]; 6];
    for b in 0..6 {
        for a in 0..6 {
            for c in 0..6 {
                gamma[b][a][c] = (0..6)
                    .map(|d| 0.5 * ginv[(b, d)] * (dg[a][(d, c)] + dg[c][(d, a)] - dg[d][(a, c)]))
                    .sum();
            }
        }
    }
    let th = coframe_matrix(&x, &weights(x[5]));
    let e = frame(&x); // column j = E_j
    let mut out = vec![vec![vec![0.0; 6]; 6]; 6];
    for j in 0..6 {
        for k in 0..6 {
            // ∇_{E_k} E_j in coordinates
            let v: Vec<f64> = (0..6)
                .map(|b| {
                    let deriv: f64 = (0..6).map(|a| e[(a, k)] * df[a][(b, j)]).sum();
                    let chr: f64 = (0..6)
                        .flat_map(|a| (0..6).map(move |c| (a, c)))
                        .map(|(a, c)| e[(a, k)] * e[(c, j)] * gamma[b][a][c])
                        .sum();
                    deriv + chr
                })
                .collect();
            for i in 0..6 {
                out[i][j][k] = (0..6).map(|b| th[(i, b)] * v[b]).sum();
            }
        }
    }
    out
}

fn compare_with_oracle(a: &DiagonalAnsatz, jet: &ScalingJet, weights: impl Fn(f64) -> Vec<f64>) {
    let conn = levi_civita(&coframe_point(a, jet).point).unwrap();
    let oracle = christoffel_oracle(weights, [0.3, -0.2, 0.5, 0.1, 0.7, jet.t]);
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                let d = (conn.gamma[i][j][k] - oracle[i][j][k]).abs();
                assert!(d <= 1e-7, "t={} Γ[{i}][{j}][{k}] differs by {d:e}", jet.t);
            }
        }
    }
}

#[test]
fn connection_matches_coordinate_christoffel_oracle() {
    let a = DiagonalAnsatz::example_one();
    let cf = closed_form_solution_1(-2.0, 1.0, 1.0).unwrap();
    for t in [-1.0, 0.0, 0.4] {
        compare_with_oracle(&a, &cf.jet(t).unwrap(), |t| {
            a.weights(&cf.jet(t).unwrap().s)
        });
    }
    let b = DiagonalAnsatz::example_two();
    let cf2 = closed_form_solution_2();
    for u in [-1.0, 0.0, 1.0] {
        compare_with_oracle(&b, &cf2.jet_at_u(u).unwrap(), |t| {
            b.weights(&cf2.jet(t).unwrap().s)
        });
    }
}
