use hypo_core::flow::closed_form_solution_1;
use hypo_core::linalg::Mat;
use hypo_core::pencil::{
    annihilator_subspace, base_form, eisenstein_expansion, flow_sample, pencil_alpha, pencil_beta,
    pencil_closedness, restriction_norm, rotate_coframe, rotate_form, rotate_subspace,
    slag_phase_check, theta_samples, CircleElement,
};
use hypo_core::{Form, HypoError, LieAlgebra};
use std::f64::consts::PI;

const TOL: f64 = 1e-12;

#[test]
fn rotation_basics() {
    let id = Mat::<f64>::identity(6);
    assert!(
        rotate_coframe(CircleElement::new(0.0), &id)
            .sub(&id)
            .max_abs()
            == 0.0
    );
    let half = rotate_coframe(CircleElement::new(PI), &id);
    assert!(half.add(&id).max_abs() <= 1e-15);
    for th in [0.3, 1.7, -2.2] {
        let r = rotate_coframe(CircleElement::new(th), &id);
        assert!(r.mul(&r.transpose()).sub(&id).max_abs() <= 1e-15);
        let full = rotate_coframe(CircleElement::new(th + 2.0 * PI), &id);
        assert!(full.sub(&r).max_abs() <= TOL);
    }
    let a = pencil_alpha().add(&pencil_beta());
    assert_eq!(rotate_form(CircleElement::new(0.0), &a), a);
}

#[test]
fn closed_spanning_forms() {
    let s = flow_sample(0.2).unwrap();
    let d = LieAlgebra::from_differentials(s.point.de.clone());
    for f in [
        base_form(),
        Form::monomial(6, &[5, 4, 1], 1.0),
        pencil_alpha(),
        pencil_beta(),
    ] {
        assert!(d.d(&f).max_abs() <= TOL);
    }
    assert!(d.d(&s.su3.psi_plus).max_abs() <= TOL && d.d(&s.su3.psi_minus).max_abs() <= TOL);
}

#[test]
fn pencil_is_closed_lagrangian_and_equivariant() {
    let thetas = theta_samples();
    assert_eq!(thetas.len(), 13);
    for t in [-1.0, 0.0, 0.4] {
        let rows = pencil_closedness(&flow_sample(t).unwrap(), &thetas).unwrap();
        for r in rows {
            assert!(r.max_residual() <= TOL, "{r:?}");
        }
    }
}

#[test]
fn orbit_spans_four_dimensions() {
    // the span of the orbit is that of E^{326}, α, β, E^{541}
    let forms: Vec<Vec<f64>> = (0..16)
        .map(|k| rotate_form(CircleElement::new(0.37 * k as f64), &base_form()).coeff_vector())
        .collect();
    assert_eq!(
        hypo_core::linalg::numerical_rank(&Mat::from_rows(forms.clone()), 1e-9),
        4
    );
    let mut with: Vec<Vec<f64>> = forms;
    for f in [
        base_form(),
        pencil_alpha(),
        pencil_beta(),
        Form::monomial(6, &[5, 4, 1], 1.0),
    ] {
        with.push(f.coeff_vector());
    }
    assert_eq!(
        hypo_core::linalg::numerical_rank(&Mat::from_rows(with), 1e-9),
        4
    );
}

#[test]
fn special_lagrangian_phases() {
    let s = flow_sample(0.0).unwrap();
    let im = &s.su3.psi_minus;
    assert!(base_form().wedge(im).max_abs() == 0.0);
    for th in [0.0, PI / 3.0, 2.0 * PI / 3.0, PI / 5.0] {
        let c = slag_phase_check(&s, th);
        assert!(c.holds(TOL), "{c:?}");
    }
    for n in 0..6 {
        assert!(slag_phase_check(&s, n as f64 * PI / 3.0).shares_phase_with_v(TOL));
    }
    assert!(!slag_phase_check(&s, PI / 5.0).shares_phase_with_v(1e-3));
}

#[test]
fn annihilators() {
    let v = annihilator_subspace(&base_form()).unwrap();
    let e = |i: usize| {
        let mut x = vec![0.0; 6];
        x[i - 1] = 1.0;
        x
    };
    let expected = hypo_core::Subspace::span(6, vec![e(5), e(4), e(1)], 1e-12);
    assert!(v.same_as(&expected, 1e-12));
    let u = CircleElement::new(0.9);
    let rotated = annihilator_subspace(&rotate_form(u, &base_form())).unwrap();
    assert!(rotated.same_as(&rotate_subspace(u, &v), 1e-10));
    let s = flow_sample(0.0).unwrap();
    assert!(restriction_norm(&s.su3.omega, &rotated) <= TOL);
    let bad = Form::monomial(6, &[1, 2, 3], 1.0).add(&Form::monomial(6, &[4, 5, 6], 1.0));
    assert_eq!(
        annihilator_subspace(&bad).unwrap_err(),
        HypoError::NonSimple(0)
    );
}

#[test]
fn eisenstein_expansion_at_g_one() {
    let s = flow_sample(0.0).unwrap();
    let (lhs, rhs) = eisenstein_expansion(&s);
    assert!(
        lhs.sub(&rhs).max_abs() <= TOL,
        "{:e}",
        lhs.sub(&rhs).max_abs()
    );
    // first line of the expansion
    let r3 = 3f64.sqrt();
    let f = |a: &[(usize, f64)]| {
        a.iter().fold(Form::zero(6, 1), |acc, &(i, c)| {
            acc.add(&Form::monomial(6, &[i], c))
        })
    };
    let first = f(&[(3, 1.0), (5, r3)])
        .wedge(&f(&[(2, 1.0), (4, r3)]))
        .wedge(&f(&[(6, 1.0), (1, -r3)]))
        .neg();
    assert!(lhs.sub(&first).max_abs() <= TOL);
    // away from g = 1 the identity still holds with the e-coframe expressions
    let cf = closed_form_solution_1(-2.0, 1.0, 1.0).unwrap();
    assert!(cf.jet(0.3).is_ok());
    let (l2, r2) = eisenstein_expansion(&flow_sample(0.3).unwrap());
    assert!(l2.sub(&r2).max_abs() <= TOL);
}
