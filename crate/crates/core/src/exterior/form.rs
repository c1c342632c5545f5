use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{HypoError, Result};
use crate::scalar::{Scalar, Q};

/// Largest supported coframe dimension (indices are stored in a `u16` mask).
pub const MAX_DIM: usize = 16;

/// A basis monomial `e^{i1...ik}` with `i1 < ... < ik`.
///
/// Stored as a bitmask (bit `i` is generator `i+1`). Monomials of equal degree
/// are ordered lexicographically on their index lists.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub const EMPTY: Self = Self(0);

    /// Build from 1-based indices; they must be distinct and within `1..=dim`.
    pub fn new(indices: &[usize], dim: usize) -> Result<Self> {
        let mut mask = 0u16;
        for &i in indices {
            if i == 0 || i > dim {
                return Err(HypoError::InvalidArgument(format!(
                    "index {i} out of range 1..={dim}"
                )));
            }
            let bit = 1u16 << (i - 1);
            if mask & bit != 0 {
                return Err(HypoError::InvalidArgument(format!("repeated index {i}")));
            }
            mask |= bit;
        }
        Ok(Self(mask))
    }

    pub(crate) fn from_mask(mask: u16) -> Self {
        Self(mask)
    }

    pub(crate) fn mask(self) -> u16 {
        self.0
    }

    pub fn single(i: usize) -> Self {
        Self(1 << (i - 1))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..16)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    /// Sign and product of `e^self ∧ e^other`, or `None` if they share an index.
    pub fn wedge(self, other: Self) -> Option<(bool, Self)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            inversions += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        Some((inversions % 2 == 1, Self(self.0 | other.0)))
    }

    /// Sign and result of `e_i ⌟ e^self` for 1-based `i`, or `None` if `i` is absent.
    pub fn contract(self, i: usize) -> Option<(bool, Self)> {
        let bit = 1u16 << (i - 1);
        if self.0 & bit == 0 {
            return None;
        }
        let below = (self.0 & (bit - 1)).count_ones();
        Some((below % 2 == 1, Self(self.0 & !bit)))
    }

    /// All monomials of degree `k` in `dim` generators, in canonical order.
    pub fn all(dim: usize, k: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (0u32..(1 << dim))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| Self(m as u16))
            .collect();
        out.sort();
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.reverse_bits().cmp(&self.0.reverse_bits()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// A homogeneous exterior form over a coframe `e^1..e^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<C> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Scalar> Form<C> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "coframe dimension {dim} exceeds {MAX_DIM}");
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(MultiIndex::EMPTY, c);
        f
    }

    /// The generator `e^i` (1-based).
    pub fn generator(dim: usize, i: usize) -> Self {
        Self::monomial(dim, &[i], C::one())
    }

    /// `c · e^{i1} ∧ ... ∧ e^{ik}`; indices need not be sorted.
    pub fn monomial(dim: usize, indices: &[usize], c: C) -> Self {
        let mut f = Self::zero(dim, indices.len());
        let mut acc = Self::constant(dim, c);
        for &i in indices {
            assert!(i >= 1 && i <= dim, "index {i} out of range 1..={dim}");
            let g = Self {
                dim,
                degree: 1,
                terms: BTreeMap::from([(MultiIndex::single(i), C::one())]),
            };
            acc = acc.wedge(&g);
        }
        f.terms = acc.terms;
        f
    }

    /// Build from a list of (basis monomial, coefficient) pairs.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, C)>,
    ) -> Self {
        let mut f = Self::zero(dim, degree);
        for (m, c) in terms {
            assert_eq!(m.degree(), degree, "monomial degree mismatch");
            f.add_term(m, c);
        }
        f
    }

    /// Build from a coefficient vector over [`MultiIndex::all`]`(dim, degree)`.
    pub fn from_coeffs(dim: usize, degree: usize, coeffs: &[C]) -> Self {
        let basis = MultiIndex::all(dim, degree);
        assert_eq!(basis.len(), coeffs.len());
        Self::from_terms(dim, degree, basis.into_iter().zip(coeffs.iter().cloned()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: MultiIndex) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `e^{indices}` (indices sorted or not; sign adjusted).
    pub fn coeff_of(&self, indices: &[usize]) -> C {
        let unit = Self::monomial(self.dim, indices, C::one());
        match unit.terms.iter().next() {
            Some((m, s)) => self.coeff(*m) * s.clone(),
            None => C::zero(),
        }
    }

    /// Coefficient vector over [`MultiIndex::all`]`(dim, degree)`.
    pub fn coeff_vector(&self) -> Vec<C> {
        MultiIndex::all(self.dim, self.degree)
            .into_iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    fn add_term(&mut self, m: MultiIndex, c: C) {
        if c.is_zero_tol(0.0) {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero_tol(0.0) {
            self.terms.remove(&m);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(HypoError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Sum of two forms of equal degree.
    ///
    /// # Panics
    /// On mismatched dimension or degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "coframe dimension mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch in sum");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    /// Exterior product.
    ///
    /// # Panics
    /// On mismatched coframe dimension; see [`Form::checked_wedge`].
    pub fn wedge(&self, other: &Self) -> Self {
        self.checked_wedge(other)
            .expect("coframe dimension mismatch in wedge")
    }

    pub fn checked_wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((neg, m)) = a.wedge(*b) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `e_i ⌟ self` for the 1-based basis vector `e_i`.
    pub fn contract_basis(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            if let Some((neg, r)) = m.contract(i) {
                out.add_term(r, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// `X ⌟ self`, with `X` given by its components in the dual frame.
    pub fn interior(&self, x: &[C]) -> Self {
        assert_eq!(
            x.len(),
            self.dim,
            "vector length must equal coframe dimension"
        );
        let mut out = Self::zero(self.dim, self.degree.saturating_sub(1));
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero_tol(0.0) {
                continue;
            }
            out = out.add(&self.contract_basis(i + 1).scale(xi));
        }
        out
    }

    /// Evaluate on `degree` vectors: `a(X1, ..., Xk)`.
    pub fn eval(&self, vectors: &[&[C]]) -> C {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let mut f = self.clone();
        for v in vectors {
            f = f.interior(v);
        }
        f.coeff(MultiIndex::EMPTY)
    }

    /// Drop every term containing generator `i` (pullback to `e_i`-orthogonal slice).
    pub fn drop_index(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.terms.retain(|m, _| !m.contains(i));
        out
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(Scalar::to_f64)
    }

    /// Remove floating-point coefficients with `|c| <= tol`.
    pub fn prune(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, c| !c.is_zero_tol(tol));
        out
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Re-express the form in the coframe `e'^a = Σ_i m[a][i] e^i`:
    /// each `e^i` is replaced by the 1-form `images[i]`.
    pub fn substitute(&self, images: &[Form<C>]) -> Self {
        assert_eq!(images.len(), self.dim);
        let target_dim = images.first().map_or(self.dim, Form::dim);
        let mut out = Form::zero(target_dim, self.degree);
        for (m, c) in &self.terms {
            let mut acc = Form::constant(target_dim, c.clone());
            for i in m.indices() {
                acc = acc.wedge(&images[i - 1]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Embed into a larger coframe, keeping indices.
    pub fn extend_dim(&self, dim: usize) -> Self {
        assert!(dim >= self.dim && dim <= MAX_DIM);
        Self {
            dim,
            degree: self.degree,
            terms: self.terms.clone(),
        }
    }

    /// Remove generator `k` from the coframe: terms containing `e^k` are
    /// dropped and higher indices shift down by one.
    pub fn delete_generator(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.dim);
        let bit = 1u16 << (k - 1);
        let low = bit - 1;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.mask() & bit == 0)
            .map(|(m, c)| {
                let mask = m.mask();
                (
                    MultiIndex::from_mask((mask & low) | ((mask >> 1) & !low)),
                    c.clone(),
                )
            })
            .collect();
        Self {
            dim: self.dim - 1,
            degree: self.degree,
            terms,
        }
    }

    /// Restrict to a smaller coframe, dropping terms with indices above `dim`.
    pub fn truncate_dim(&self, dim: usize) -> Self {
        let keep = if dim >= 16 {
            u16::MAX
        } else {
            (1u16 << dim) - 1
        };
        Self {
            dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.mask() & !keep == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

impl Form<Q> {
    pub fn lift<C: Scalar>(&self) -> Form<C> {
        self.map(C::from_q)
    }
}

impl<C: Scalar> fmt::Display for Form<C> {
    /// Salamon-style text: `2*12-34`, `1/2*13`, `0` for the zero form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.to_f64() < 0.0;
            let mag = c.abs_val();
            if negative {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn mono(ix: &[usize]) -> Form<Q> {
        Form::monomial(5, ix, q(1))
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(mono(&[1, 2]).wedge(&mono(&[3, 4])), mono(&[1, 2, 3, 4]));
        assert_eq!(
            mono(&[1, 3]).wedge(&mono(&[2, 4])),
            mono(&[1, 2, 3, 4]).neg()
        );
        let w = mono(&[1, 2]).add(&mono(&[3, 4]));
        assert_eq!(w.wedge(&w), mono(&[1, 2, 3, 4]).scale(&q(2)));
        assert!(mono(&[1, 2]).wedge(&mono(&[2, 3])).is_zero());
    }

    #[test]
    fn interior_signs() {
        assert_eq!(mono(&[1, 2]).contract_basis(1), mono(&[2]));
        assert!(mono(&[1, 2])
            .add(&mono(&[3, 4]))
            .contract_basis(5)
            .is_zero());
        assert_eq!(mono(&[1, 2, 3]).contract_basis(2), mono(&[1, 3]).neg());
        assert_eq!(
            mono(&[1, 2]).eval(&[
                &[q(1), q(0), q(0), q(0), q(0)],
                &[q(0), q(1), q(0), q(0), q(0)]
            ]),
            q(1)
        );
    }

    #[test]
    fn monomial_ordering_is_lexicographic() {
        let all = MultiIndex::all(4, 2);
        let words: Vec<String> = all.iter().map(|m| m.to_string()).collect();
        assert_eq!(words, ["12", "13", "14", "23", "24", "34"]);
    }

    #[test]
    fn unsorted_monomial_carries_sign() {
        assert_eq!(mono(&[4, 3]), mono(&[3, 4]).neg());
        assert_eq!(mono(&[4, 3]).coeff_of(&[4, 3]), q(1));
        assert_eq!(mono(&[3, 1, 2]), mono(&[1, 2, 3]));
    }

    #[test]
    fn display_uses_salamon_words() {
        let f = mono(&[1, 2]).scale(&q(2)).sub(&mono(&[3, 4]));
        assert_eq!(f.to_string(), "2*12-34");
        assert_eq!(Form::<Q>::zero(5, 2).to_string(), "0");
    }
}
