//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use hypo_core::curvature::CoframePoint;
use hypo_core::exterior::parse_form;
use hypo_core::linalg::Mat;
use hypo_core::scalar::{q, qr, Q};
use hypo_core::su2::{torsion_decompose, weingarten_in_frame, SU2Structure};
use hypo_core::{Form, LieAlgebra};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// An invertible matrix with entries in `-2..=2`.
pub fn random_frame(rng: &mut ChaCha8Rng) -> Mat<Q> {
    loop {
        let b = Mat::from_fn(5, 5, |_, _| q(rng.gen_range(-2..=2)));
        if b.determinant() != q(0) {
            return b;
        }
    }
}

/// A hypo structure rotated in the (ω2, ω3) plane and rescaled; both moves
/// preserve the hypo condition.
pub fn hypo_sample(base: &SU2Structure, rng: &mut ChaCha8Rng) -> SU2Structure {
    let (a, b, c) = TRIPLES[rng.gen_range(0..TRIPLES.len())];
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let lambda = qr(rng.gen_range(1..=4), rng.gen_range(1..=3));
    base.rotate_phase(&qr(a, c), &qr(sign * b, c))
        .pullback(&Mat::identity(5).scale(&lambda))
}

pub fn form_rows(rows: &[[&str; 5]]) -> Vec<Vec<Form<Q>>> {
    rows.iter()
        .map(|r| r.iter().map(|t| parse_form(t, 5, 1).unwrap()).collect())
        .collect()
}

/// (0,0,0,12,13+24) in the frame η = (e^4, -e^3, e^2, e^5, e^1+e^5), with the
/// Weingarten matrix of its hypo structure in that frame.
pub fn codazzi_point() -> (CoframePoint<Q>, Mat<Q>) {
    let alg = LieAlgebra::parse_salamon("(0,0,0,12,13+24)").unwrap();
    let rows = ["4", "-3", "2", "5", "1+5"]
        .iter()
        .map(|t| parse_form(t, 5, 1).unwrap().coeff_vector())
        .collect();
    let eta = Mat::from_rows(rows);
    let s = SU2Structure::parse("1+5", "-43+25", "42-53", "45-32").unwrap();
    let t = torsion_decompose(&s, &alg, 0.0).unwrap();
    let theta = weingarten_in_frame(&t, &eta, 0.0).unwrap().matrix;
    (
        CoframePoint::from_algebra(&alg.in_coframe(&eta, 0.0).unwrap()),
        theta,
    )
}

/// `∇Θ` of the Codazzi example, entry `(j, k)` a 1-form in η.
pub fn codazzi_expected() -> Vec<Vec<Form<Q>>> {
    form_rows(&[
        ["-2*3", "5-4", "0", "2", "0"],
        ["5-4", "0", "0", "-1", "0"],
        ["0", "0", "0", "4", "4-5"],
        ["2", "-1", "4", "0", "0"],
        ["0", "0", "4-5", "0", "2*3"],
    ])
}
