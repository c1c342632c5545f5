use crate::error::{HypoError, Result};
use crate::exterior::Form;
use crate::linalg::{singular_values, Mat};

use super::CurvatureData;

pub const SPAN_THRESHOLD: f64 = 1e-7;
pub const COMMUTATOR_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-10;

/// Span of the curvature endomorphisms `Ω(E_a, E_b)` over sampled points.
///
/// By Ambrose–Singer this is a lower bound for the holonomy algebra.
#[derive(Clone, Debug)]
pub struct HolonomySpan {
    pub generators: Vec<Mat<f64>>,
    pub singular_values: Vec<f64>,
    pub dimension: usize,
    /// Largest entry of `[m, J]` over generators.
    pub commutator: f64,
    /// Largest `|tr(J m)|` over generators.
    pub trace: f64,
    pub contained_in_su3: bool,
}

/// `J` with `g(JX, Y) = ω(X, Y)` in an orthonormal frame.
pub fn j_matrix(omega: &Form<f64>) -> Mat<f64> {
    let n = omega.dim();
    Mat::from_fn(n, n, |b, a| omega.coeff_of(&[a + 1, b + 1]))
}

pub fn holonomy_span(samples: &[CurvatureData<f64>], omega: &Form<f64>) -> Result<HolonomySpan> {
    let Some(first) = samples.first() else {
        return Err(HypoError::InvalidArgument("no curvature samples".into()));
    };
    let n = first.dim();
    if omega.dim() != n || omega.degree() != 2 {
        return Err(HypoError::DimensionMismatch {
            left: omega.dim(),
            right: n,
        });
    }
    let j = j_matrix(omega);
    let mut generators = Vec::new();
    for s in samples {
        for a in 0..n {
            for b in a + 1..n {
                generators.push(s.endomorphism(a, b));
            }
        }
    }
    let rows: Vec<Vec<f64>> = generators.iter().map(|m| m.to_rows().concat()).collect();
    let sv = singular_values(&Mat::from_rows(rows));
    let dimension = sv.iter().filter(|&&s| s > SPAN_THRESHOLD).count();
    let mut commutator: f64 = 0.0;
    let mut trace: f64 = 0.0;
    for m in &generators {
        commutator = commutator.max(m.mul(&j).sub(&j.mul(m)).max_abs());
        let jm = j.mul(m);
        trace = trace.max((0..n).map(|i| jm[(i, i)]).sum::<f64>().abs());
    }
    Ok(HolonomySpan {
        generators,
        singular_values: sv,
        dimension,
        commutator,
        trace,
        contained_in_su3: commutator <= COMMUTATOR_TOL && trace <= TRACE_TOL,
    })
}
