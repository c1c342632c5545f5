use hypo_core::catalog::{Catalog, TABLE};
use hypo_core::linalg::Mat;
use hypo_core::polar::{
    build_polar_system, build_polar_system_with, polar_rank_certificate, su3_algebra,
    taut_derivatives, unknown_position, HypoFrame, EXPECTED_RANK, UNKNOWNS,
};
use hypo_core::scalar::{q, qr, Q};
use hypo_core::su2::SU2Structure;
use hypo_core::LieAlgebra;

fn frames() -> Vec<(String, HypoFrame<Q>)> {
    Catalog::bundled()
        .entries
        .iter()
        .map(|e| {
            let f = HypoFrame::adapted(&e.algebra, &e.structure, 0.0).unwrap();
            (format!("{} catalog:{}", e.algebra_text, e.id), f)
        })
        .collect()
}

#[test]
fn every_admitting_algebra_has_rank_22_and_compatible_system() {
    let fs = frames();
    for row in TABLE.iter().filter(|r| r.admits_hypo) {
        assert!(
            fs.iter().any(|(l, _)| l.starts_with(row.algebra)),
            "{}",
            row.algebra
        );
    }
    for (label, f) in &fs {
        let c = polar_rank_certificate(&build_polar_system(f), 0.0);
        assert_eq!(c.rank, EXPECTED_RANK, "{label}");
        assert!(c.compatible, "{label}");
        assert_eq!(c.extension_dim, 14);
        let mut sizes = c.block_sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 3, 3, 4, 4, 4, 6]);
    }
}

#[test]
fn derivatives_are_read_off_the_structure_constants() {
    let alg = LieAlgebra::parse_salamon("(0,0,0,12,13)").unwrap();
    let f = HypoFrame::from_coframe(&alg, &Mat::identity(5), 0.0).unwrap();
    let t = taut_derivatives(&f);
    assert_eq!(t.get(4, 1, 2), q(1));
    assert_eq!(t.get(4, 2, 1), q(-1));
    assert_eq!(t.get(5, 1, 3), q(1));
    assert_eq!(t.get(5, 2, 3), q(0));
    for i in 1..=6 {
        for j in 1..=6 {
            assert_eq!(t.get(6, i, j), q(0));
            for k in 1..=6 {
                assert_eq!(t.get(i, j, k), -t.get(i, k, j));
            }
        }
    }
    let flat =
        HypoFrame::from_coframe(&LieAlgebra::<Q>::abelian(5), &Mat::identity(5), 0.0).unwrap();
    let sys = build_polar_system(&flat);
    assert!(sys.rhs().iter().all(|b| *b == q(0)));
    let c = polar_rank_certificate(&sys, 0.0);
    assert_eq!((c.rank, c.compatible), (22, true));
}

#[test]
fn first_block_matches_the_displayed_equations() {
    // σ^1_1 + σ^2_2 and σ^3_3 + σ^4_4, with right-hand sides dη^5(e_1,e_2) and
    // dη^5(e_3,e_4) scaled by η^6(v)
    for (label, f) in frames() {
        let t = taut_derivatives(&f);
        let sys = build_polar_system_with(&f, q(1));
        for (pair, rhs) in [((1, 2), t.get(5, 1, 2)), ((3, 4), t.get(5, 3, 4))] {
            let eq = sys
                .equations
                .iter()
                .find(|e| e.form == "omega" && e.slots == vec![pair.0, pair.1])
                .unwrap();
            let lead = eq.coefficients[unknown_position(pair.0, pair.0)].clone();
            let normalized: Vec<Q> = eq.coefficients.iter().map(|c| c / &lead).collect();
            let mut expected = vec![q(0); UNKNOWNS];
            expected[unknown_position(pair.0, pair.0)] = q(1);
            expected[unknown_position(pair.1, pair.1)] = q(1);
            assert_eq!(normalized, expected, "{label}");
            assert_eq!(&eq.rhs / &lead, rhs, "{label}");
        }
    }
}

#[test]
fn vertical_solutions_are_gl6_5_plus_su3() {
    let (_, f) = &frames()[0];
    let sys = build_polar_system_with(f, q(0));
    let a = sys.matrix();
    let kernel = a.kernel(0.0);
    assert_eq!(kernel.len(), 14);
    let mut span: Vec<Vec<Q>> = su3_algebra::<Q>();
    assert_eq!(span.len(), 8);
    for i in 1..=6 {
        let mut v = vec![q(0); UNKNOWNS];
        v[unknown_position(i, 6)] = q(1);
        span.push(v);
    }
    for v in &span {
        assert!(a.mul_vec(v).iter().all(|x| *x == q(0)));
    }
    assert_eq!(Mat::from_rows(span).rank(0.0), 14);
}

#[test]
fn duplicated_rows_keep_the_rank() {
    let (_, f) = &frames()[3];
    let sys = build_polar_system(f).with_duplicate(0).with_duplicate(17);
    let c = polar_rank_certificate(&sys, 0.0);
    assert_eq!((c.rank, c.compatible), (22, true));
    assert_eq!(c.block_sizes.iter().sum::<usize>(), 32);
}

#[test]
fn solution_satisfies_the_system_exactly() {
    for (label, f) in frames() {
        let sys = build_polar_system(&f);
        let x = sys.solve(0.0).unwrap_or_else(|| panic!("{label}"));
        assert_eq!(sys.matrix().mul_vec(&x), sys.rhs());
    }
}

#[test]
fn perturbed_frames_are_compatible_exactly_when_hypo() {
    let cat = Catalog::bundled();
    let mut incompatible = 0;
    for e in &cat.entries {
        let b = e.structure.adapted_coframe(0.0).unwrap();
        for k in 0..5 {
            // lengthen η^k by 10%
            let mut scale = Mat::identity(5);
            scale[(k, k)] = qr(11, 10);
            let bp = scale.mul(&b);
            let hypo = SU2Structure::reference()
                .pullback(&bp)
                .is_hypo(&e.algebra, 0.0)
                .hypo;
            let f = HypoFrame::from_coframe(&e.algebra, &bp, 0.0).unwrap();
            let c = polar_rank_certificate(&build_polar_system(&f), 0.0);
            assert_eq!(c.rank, 22);
            assert_eq!(
                c.compatible,
                hypo,
                "{} catalog:{} η^{}",
                e.algebra_text,
                e.id,
                k + 1
            );
            if !hypo {
                incompatible += 1;
                assert!(c.violation > 1e-3);
            }
        }
    }
    assert!(incompatible >= 20, "{incompatible}");
}

#[test]
fn frame_constructor_rejects_non_orthonormal_frames() {
    let alg = LieAlgebra::<Q>::abelian(5);
    assert!(HypoFrame::new(alg.clone(), &SU2Structure::reference(), 0.0).is_ok());
    let mut b = Mat::identity(5);
    b[(1, 1)] = q(2);
    let stretched = SU2Structure::reference().pullback(&b);
    assert!(HypoFrame::new(alg, &stretched, 0.0).is_err());
}
