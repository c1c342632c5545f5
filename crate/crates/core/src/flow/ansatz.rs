use crate::error::{HypoError, Result};
use crate::exterior::{Form, LieAlgebra};
use crate::linalg::{least_squares, Mat};
use crate::scalar::Q;
use crate::su2::{SU2Structure, DIM};

/// Default bound on the coefficient-matching residual.
pub const RHS_TOL: f64 = 1e-9;

/// Diagonal deformation `E^i = (Π_g s_g^{p_ig}) e^i` of a hypo structure.
///
/// The deformed structure at a state is the base quadruplet with every `e^i`
/// replaced by `E^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalAnsatz {
    pub algebra: LieAlgebra<Q>,
    pub base: SU2Structure<Q>,
    /// Names of the scaling functions, for reports.
    pub groups: Vec<String>,
    /// `exponents[i][g]`: power of `s_g` in the scale of `e^{i+1}`.
    pub exponents: Vec<Vec<i32>>,
}

/// Result of [`flow_rhs`].
#[derive(Clone, Debug, PartialEq)]
pub struct FlowRhs {
    /// `∂t s_g`.
    pub ds: Vec<f64>,
    /// `∂t s_g / s_g`.
    pub log_rates: Vec<f64>,
    /// Norm of the unmatched coefficients.
    pub residual: f64,
}

impl DiagonalAnsatz {
    pub fn new(
        algebra: LieAlgebra<Q>,
        base: SU2Structure<Q>,
        groups: &[&str],
        exponents: Vec<Vec<i32>>,
    ) -> Result<Self> {
        if algebra.dim() != DIM || exponents.len() != DIM {
            return Err(HypoError::InvalidArgument(
                "ansatz needs five coframe scales".into(),
            ));
        }
        if exponents.iter().any(|e| e.len() != groups.len()) {
            return Err(HypoError::InvalidArgument(
                "one exponent per scaling group".into(),
            ));
        }
        base.require_valid(0.0)?;
        Ok(Self {
            algebra,
            base,
            groups: groups.iter().map(|g| g.to_string()).collect(),
            exponents,
        })
    }

    /// `E^1 = f e^1`, `E^2,3 = g e^2,3`, `E^4,5 = g⁻¹ e^4,5` on (0,0,0,12,13).
    pub fn example_one() -> Self {
        let alg = LieAlgebra::parse_salamon("(0,0,0,12,13)").unwrap();
        let s = SU2Structure::parse("1", "35+24", "32+45", "34+52").unwrap();
        let exps = vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, -1], vec![0, -1]];
        Self::new(alg, s, &["f", "g"], exps).unwrap()
    }

    /// Scales `(gh, g, h, g⁻¹, h⁻¹)` on (0,0,0,12,13) with the anti-self-dual forms.
    pub fn example_two() -> Self {
        let alg = LieAlgebra::parse_salamon("(0,0,0,12,13)").unwrap();
        let s = SU2Structure::parse("1", "35-24", "-32+45", "34-52").unwrap();
        let exps = vec![vec![1, 1], vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        Self::new(alg, s, &["g", "h"], exps).unwrap()
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// Coframe scales `w_i = Π_g s_g^{p_ig}`.
    pub fn weights(&self, s: &[f64]) -> Vec<f64> {
        self.exponents
            .iter()
            .map(|e| e.iter().zip(s).map(|(&p, &x)| x.powi(p)).product())
            .collect()
    }

    /// The deformed quadruplet in the fixed coframe `e^i`.
    pub fn structure_at(&self, s: &[f64]) -> SU2Structure<f64> {
        let w = self.weights(s);
        let b = Mat::from_fn(DIM, DIM, |i, j| if i == j { w[i] } else { 0.0 });
        self.base.to_f64().pullback(&b)
    }

    /// The derivation `e^i ↦ p_ig e^i` extended to forms.
    fn scale_derivation(&self, g: usize, f: &Form<f64>) -> Form<f64> {
        Form::from_terms(
            f.dim(),
            f.degree(),
            f.terms().map(|(m, c)| {
                let k: i32 = m.indices().iter().map(|&i| self.exponents[i - 1][g]).sum();
                (*m, c * k as f64)
            }),
        )
    }
}

fn check_state(s: &[f64], n: usize) -> Result<()> {
    if s.len() != n {
        return Err(HypoError::DimensionMismatch {
            left: s.len(),
            right: n,
        });
    }
    if s.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(HypoError::InvalidArgument(format!(
            "scalings must be positive, got {s:?}"
        )));
    }
    Ok(())
}

/// Match `∂tω1 = −dα`, `∂t(ω2∧α) = −dω3`, `∂t(ω3∧α) = dω2` coefficient by
/// coefficient; the unknowns are the log-derivatives of the scalings.
pub fn flow_rhs(ansatz: &DiagonalAnsatz, s: &[f64]) -> Result<FlowRhs> {
    check_state(s, ansatz.n_groups())?;
    let st = ansatz.structure_at(s);
    let alg = ansatz.algebra.to_f64();
    let lhs = [
        st.omega1.clone(),
        st.omega2.wedge(&st.alpha),
        st.omega3.wedge(&st.alpha),
    ];
    let rhs = [
        alg.d(&st.alpha).neg(),
        alg.d(&st.omega3).neg(),
        alg.d(&st.omega2),
    ];
    let columns: Vec<Vec<f64>> = (0..ansatz.n_groups())
        .map(|g| {
            lhs.iter()
                .flat_map(|f| ansatz.scale_derivation(g, f).coeff_vector())
                .collect()
        })
        .collect();
    let b: Vec<f64> = rhs.iter().flat_map(Form::coeff_vector).collect();
    let a = Mat::from_fn(b.len(), columns.len(), |i, j| columns[j][i]);
    let (log_rates, residual) = least_squares(&a, &b).ok_or_else(|| {
        HypoError::Singular("coefficient matching system is rank deficient".into())
    })?;
    let ds = log_rates.iter().zip(s).map(|(r, x)| r * x).collect();
    Ok(FlowRhs {
        ds,
        log_rates,
        residual,
    })
}

/// [`flow_rhs`], failing when the ansatz is not closed under the flow.
pub fn flow_rhs_checked(ansatz: &DiagonalAnsatz, s: &[f64], tol: f64) -> Result<FlowRhs> {
    let r = flow_rhs(ansatz, s)?;
    if r.residual > tol {
        return Err(HypoError::Residual {
            what: "flow coefficient matching".into(),
            value: r.residual,
            tol,
        });
    }
    Ok(r)
}
