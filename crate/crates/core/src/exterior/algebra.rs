use std::fmt;

use super::form::{Form, MultiIndex};
use super::parse::parse_form;
use crate::error::{parse_err, Result};
use crate::linalg::Mat;
use crate::scalar::{Scalar, Q};

/// A coframe `e^1..e^n` together with the 2-forms `de^k`.
///
/// Over `Q` this is a Lie algebra given by its structure constants. Over `f64`
/// it is also used for rescaled coframes, where `d` acts on forms with
/// constant coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<C = Q> {
    diffs: Vec<Form<C>>,
}

/// Failure of `d² = 0`: generator index and the offending 3-form.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport<C> {
    pub ok: bool,
    pub violations: Vec<(usize, Form<C>)>,
}

impl<C: Scalar> LieAlgebra<C> {
    /// Build from the differentials of the generators.
    ///
    /// # Panics
    /// If some `de^k` is not a 2-form over `diffs.len()` generators.
    pub fn from_differentials(diffs: Vec<Form<C>>) -> Self {
        let n = diffs.len();
        for (k, f) in diffs.iter().enumerate() {
            assert!(
                f.dim() == n && f.degree() == 2,
                "de^{} must be a 2-form over {n} generators",
                k + 1
            );
        }
        Self { diffs }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_differentials(vec![Form::zero(dim, 2); dim])
    }

    pub fn dim(&self) -> usize {
        self.diffs.len()
    }

    /// `de^k` for 1-based `k`.
    pub fn de(&self, k: usize) -> &Form<C> {
        &self.diffs[k - 1]
    }

    pub fn differentials(&self) -> &[Form<C>] {
        &self.diffs
    }

    /// Exterior derivative of a constant-coefficient form, extended from the
    /// generators as an antiderivation: `d(e^I) = Σ_p (-1)^p de^{i_p} ∧ e^{I∖i_p}`.
    pub fn d(&self, a: &Form<C>) -> Form<C> {
        assert_eq!(a.dim(), self.dim(), "coframe dimension mismatch in d");
        let n = self.dim();
        let mut out = Form::zero(n, a.degree() + 1);
        for (m, c) in a.terms() {
            for (p, i) in m.indices().into_iter().enumerate() {
                let de = &self.diffs[i - 1];
                if de.is_zero() {
                    continue;
                }
                let rest = MultiIndex::from_mask(m.mask() & !(1 << (i - 1)));
                let sign = if p % 2 == 0 { c.clone() } else { -c.clone() };
                let rest_form = Form::from_terms(n, rest.degree(), [(rest, sign)]);
                out = out.add(&de.wedge(&rest_form));
            }
        }
        out
    }

    pub fn jacobi_check(&self) -> JacobiReport<C> {
        let violations: Vec<_> = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, de)| (k + 1, self.d(de)))
            .filter(|(_, dd)| !dd.is_zero())
            .collect();
        JacobiReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// Matrix of `d: Λ^k → Λ^{k+1}` in the canonical monomial bases (columns = inputs).
    pub fn d_matrix(&self, k: usize) -> Mat<C> {
        let n = self.dim();
        let src = MultiIndex::all(n, k);
        let dst = MultiIndex::all(n, k + 1);
        let images: Vec<Form<C>> = src
            .iter()
            .map(|m| self.d(&Form::from_terms(n, k, [(*m, C::one())])))
            .collect();
        Mat::from_fn(dst.len(), src.len(), |i, j| images[j].coeff(dst[i]))
    }

    /// The same differential written in the coframe `e'^a = Σ_i b[a][i] e^i`.
    pub fn in_coframe(&self, b: &Mat<C>, tol: f64) -> Result<Self> {
        let n = self.dim();
        let binv = b.inverse(tol).ok_or_else(|| {
            crate::error::HypoError::Singular("coframe change is not invertible".into())
        })?;
        let back: Vec<Form<C>> = (0..n)
            .map(|i| Form::from_coeffs(n, 1, binv.row(i)))
            .collect();
        let diffs = (0..n)
            .map(|a| self.d(&Form::from_coeffs(n, 1, b.row(a))).substitute(&back))
            .collect();
        Ok(Self { diffs })
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> LieAlgebra<D> {
        LieAlgebra {
            diffs: self.diffs.iter().map(|d| d.map(f)).collect(),
        }
    }
}

impl LieAlgebra<Q> {
    pub fn to_f64(&self) -> LieAlgebra<f64> {
        self.map(Scalar::to_f64)
    }

    /// Second Betti number of the Chevalley-Eilenberg complex.
    pub fn betti2(&self) -> usize {
        let d1 = self.d_matrix(1);
        let d2 = self.d_matrix(2);
        let ker2 = d2.ncols() - d2.rank(0.0);
        ker2 - d1.rank(0.0)
    }

    pub fn betti1(&self) -> usize {
        let d1 = self.d_matrix(1);
        d1.ncols() - d1.rank(0.0)
    }

    /// The ascending series `V_1 ⊂ V_2 ⊂ ...` of 1-forms with `V_1 = ker d`
    /// and `V_k = {θ : dθ ∈ Λ²V_{k-1}}`, as bases. Stops when it stabilizes.
    pub fn ascending_series(&self) -> Vec<Vec<Vec<Q>>> {
        let n = self.dim();
        let mut series: Vec<Vec<Vec<Q>>> = Vec::new();
        let mut current: Vec<Vec<Q>> = Vec::new();
        loop {
            let next = self.lift_subspace(&current);
            if next.len() == current.len() {
                break;
            }
            series.push(next.clone());
            current = next;
            if current.len() == n {
                break;
            }
        }
        series
    }

    /// Nilpotency step (length of the ascending series), or `None` when the
    /// series stalls before exhausting the dual space.
    pub fn nilpotency_step(&self) -> Option<usize> {
        let series = self.ascending_series();
        (series.last().map_or(0, Vec::len) == self.dim()).then_some(series.len())
    }

    /// `{θ ∈ Λ¹ : dθ ∈ Λ²W}` where `W` is spanned by `basis`.
    fn lift_subspace(&self, basis: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let n = self.dim();
        let two = MultiIndex::all(n, 2);
        let w: Vec<Form<Q>> = basis.iter().map(|v| Form::from_coeffs(n, 1, v)).collect();
        let mut spanning: Vec<Vec<Q>> = Vec::new();
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                spanning.push(w[a].wedge(&w[b]).coeff_vector());
            }
        }
        let cols = n + spanning.len();
        let system = Mat::from_fn(two.len(), cols, |r, c| {
            if c < n {
                self.diffs[c].coeff(two[r])
            } else {
                -spanning[c - n][r].clone()
            }
        });
        let projected: Vec<Vec<Q>> = system
            .kernel(0.0)
            .into_iter()
            .map(|v| v[..n].to_vec())
            .collect();
        if projected.is_empty() {
            return Vec::new();
        }
        let (r, pivots) = Mat::from_rows(projected).rref(0.0);
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    /// Parse Salamon notation such as `(0,0,0,12,13+24)`.
    pub fn parse_salamon(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| parse_err(text, "expected a parenthesized list"))?;
        let entries: Vec<&str> = inner.split(',').collect();
        let n = entries.len();
        if n == 0 || n > 9 {
            return Err(parse_err(text, format!("{n} generators; 1..=9 supported")));
        }
        let diffs = entries
            .iter()
            .map(|e| parse_form(e, n, 2))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_differentials(diffs))
    }
}

impl<C: Scalar> fmt::Display for LieAlgebra<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, de) in self.diffs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{de}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::parse_salamon(s).unwrap()
    }

    #[test]
    fn parses_table_entries() {
        let a = alg("(0,0,0,12,13+24)");
        assert_eq!(a.dim(), 5);
        assert_eq!(a.de(5), &parse_form("13+24", 5, 2).unwrap());
        assert!(a.de(1).is_zero());
        assert!(alg("(0,0,0,0,0)").differentials().iter().all(Form::is_zero));
        assert!(LieAlgebra::parse_salamon("(0,0,12").is_err());
        assert!(LieAlgebra::parse_salamon("(0,0,0,12,16)").is_err());
        assert!(LieAlgebra::parse_salamon("(0,0,0,12,1)").is_err());
    }

    #[test]
    fn derivative_of_two_form_follows_antiderivation() {
        let a = alg("(0,0,0,12,13)");
        let e34 = Form::monomial(5, &[3, 4], q(1));
        assert_eq!(a.d(&e34), Form::monomial(5, &[1, 2, 3], q(-1)));
        let b = alg("(0,0,0,12,13+24)");
        let e5 = Form::generator(5, 5);
        assert_eq!(b.d(&e5), parse_form("13+24", 5, 2).unwrap());
        assert!(b.d(&b.d(&e5)).is_zero());
    }

    #[test]
    fn jacobi() {
        assert!(alg("(0,0,12,13,23)").jacobi_check().ok);
        assert!(alg("(0,0,0,0,0)").jacobi_check().ok);
        // d(e^{15}) = -e^1∧e^{15} = 0: closed, but not nilpotent
        let solvable = alg("(0,0,0,0,15)");
        assert!(solvable.jacobi_check().ok);
        assert_eq!(solvable.nilpotency_step(), None);
        let broken = alg("(0,0,0,12,34)");
        let report = broken.jacobi_check();
        assert!(!report.ok);
        assert_eq!(report.violations[0].0, 5);
    }

    #[test]
    fn step_and_betti_numbers() {
        let a = alg("(0,0,0,12,13)");
        assert_eq!(a.nilpotency_step(), Some(2));
        assert_eq!(a.betti2(), 6);
        assert_eq!(alg("(0,0,0,0,0)").betti2(), 10);
        assert_eq!(alg("(0,0,0,0,0)").nilpotency_step(), Some(1));
        assert_eq!(alg("(0,0,12,13,14+23)").nilpotency_step(), Some(4));
        assert_eq!(alg("(0,0,12,13,14+23)").betti2(), 3);
    }

    #[test]
    fn display_round_trip() {
        for s in ["(0,0,0,12,13+24)", "(0,0,0,0,12+34)", "(0,0,12,13,14+23)"] {
            assert_eq!(alg(s).to_string(), s);
        }
    }
}
