use crate::exterior::Form;
use crate::linalg::Mat;
use crate::scalar::Scalar;

use super::ConnectionForms;

/// `∇Θ` for a symmetric `Θ` with constant entries in the frame, as a symmetric
/// matrix of 1-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct NablaTheta<C> {
    pub entries: Vec<Vec<Form<C>>>,
}

impl<C: Scalar> NablaTheta<C> {
    /// `T(i; j, k) = (∇_{E_i} Θ)(E_j, E_k)`, 0-based.
    pub fn t(&self, i: usize, j: usize, k: usize) -> C {
        self.entries[j][k].coeff_of(&[i + 1])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Form::is_zero)
    }
}

/// `∇Θ = ωΘ − Θω` with `ω` the connection matrix.
pub fn nabla_theta<C: Scalar>(conn: &ConnectionForms<C>, theta: &Mat<C>) -> NablaTheta<C> {
    let n = conn.dim();
    assert_eq!(theta.nrows(), n, "Θ must match the frame dimension");
    let entries = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let mut f = Form::zero(n, 1);
                    for i in 0..n {
                        f = f.add(&conn.omega[j][i].scale(&theta[(i, k)]));
                        f = f.sub(&conn.omega[i][k].scale(&theta[(j, i)]));
                    }
                    f
                })
                .collect()
        })
        .collect();
    NablaTheta { entries }
}

/// `max |T(i; j, k) − T(j; i, k)|`; zero exactly when Codazzi holds.
pub fn codazzi_check<C: Scalar>(table: &NablaTheta<C>) -> C {
    let n = table.entries.len();
    let mut best = C::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let d = (table.t(i, j, k) - table.t(j, i, k)).abs_val();
                if d.to_f64() > best.to_f64() {
                    best = d;
                }
            }
        }
    }
    best
}
