//! The linear system for a sixth vector `v` extending the tangent space of a
//! hypo frame section to an integral element of the Calabi–Yau exterior system.
//!
//! Unknowns are the entries `σ^i_j(v)` of a `gl(6)` connection value. On the
//! section, the tautological forms satisfy `dη^i = η^j∧σ^i_j`, so
//! `dη^i(e_j, v) = σ^i_j(v)` and the conditions `dω(e_i,e_j,v) = 0`,
//! `dψ±(e_i,e_j,e_k,v) = 0` become affine equations in the `σ^i_j(v)`.

use crate::error::{HypoError, Result};
use crate::exterior::{Form, LieAlgebra, MultiIndex};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::su2::{reference_structure, su3_lift, SU2Structure, DIM};

/// Dimension of the ambient coframe `(η^1..η^5, η^6)`.
pub const N: usize = DIM + 1;
/// Number of `gl(6)` unknowns.
pub const UNKNOWNS: usize = N * N;
/// Rank of the system at any point.
pub const EXPECTED_RANK: usize = 22;

/// An orthonormal coframe `η^1..η^5` adapted to a hypo structure, recorded
/// through its structure equations. The structure is the reference
/// quadruplet in this coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct HypoFrame<C> {
    pub algebra: LieAlgebra<C>,
}

impl<C: Scalar> HypoFrame<C> {
    /// `structure` must be the reference quadruplet in the coframe whose
    /// differentials are given by `algebra`.
    pub fn new(algebra: LieAlgebra<C>, structure: &SU2Structure<C>, tol: f64) -> Result<Self> {
        if algebra.dim() != DIM {
            return Err(HypoError::DimensionMismatch {
                left: algebra.dim(),
                right: DIM,
            });
        }
        let g = structure.metric(tol)?;
        if g.sub(&Mat::identity(DIM)).max_abs() > tol {
            return Err(HypoError::InvalidStructure(
                "frame is not orthonormal".into(),
            ));
        }
        if !structure.approx_eq(&reference_structure(), tol) {
            return Err(HypoError::InvalidStructure(
                "frame is not adapted to the structure".into(),
            ));
        }
        Ok(Self { algebra })
    }

    /// The coframe `η^a = Σ_i b[a][i] e^i` (rows of `b`).
    pub fn from_coframe(alg: &LieAlgebra<C>, b: &Mat<C>, tol: f64) -> Result<Self> {
        Ok(Self {
            algebra: alg.in_coframe(b, tol)?,
        })
    }

    /// The adapted coframe of `structure`.
    pub fn adapted(alg: &LieAlgebra<C>, structure: &SU2Structure<C>, tol: f64) -> Result<Self> {
        Self::from_coframe(alg, &structure.adapted_coframe(tol)?, tol)
    }
}

/// `dη^i(e_j, e_k)` on the section, `i, j, k` in `1..=6`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeTable<C> {
    values: Vec<C>,
}

impl<C: Scalar> DerivativeTable<C> {
    pub fn get(&self, i: usize, j: usize, k: usize) -> C {
        self.values[((i - 1) * N + (j - 1)) * N + (k - 1)].clone()
    }

    /// `dη^i` as a 2-form on the section, including `dη^6 = 0`.
    pub fn form(&self, i: usize) -> Form<C> {
        let terms = MultiIndex::all(N, 2).into_iter().map(|m| {
            let ix = m.indices();
            (m, self.get(i, ix[0], ix[1]))
        });
        Form::from_terms(N, 2, terms)
    }
}

pub fn taut_derivatives<C: Scalar>(frame: &HypoFrame<C>) -> DerivativeTable<C> {
    let mut values = vec![C::zero(); N * N * N];
    for i in 1..=DIM {
        for (m, c) in frame.algebra.de(i).terms() {
            let ix = m.indices();
            let (j, k) = (ix[0], ix[1]);
            values[((i - 1) * N + (j - 1)) * N + (k - 1)] = c.clone();
            values[((i - 1) * N + (k - 1)) * N + (j - 1)] = -c.clone();
        }
    }
    DerivativeTable { values }
}

/// One affine equation `Σ coefficients·σ = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarEquation<C> {
    /// `"omega"`, `"psi+"` or `"psi-"`.
    pub form: &'static str,
    /// The frame vectors `e_i` fed to the form together with `v`.
    pub slots: Vec<usize>,
    pub coefficients: Vec<C>,
    pub rhs: C,
    pub block: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarSystem<C> {
    /// `(i, j)` for the unknown `σ^i_j(v)`, in column order.
    pub unknowns: Vec<(usize, usize)>,
    pub equations: Vec<PolarEquation<C>>,
    /// Number of equations in each block.
    pub block_sizes: Vec<usize>,
    /// `η^6(v)`.
    pub normal_component: C,
}

fn unknown_index(i: usize, j: usize) -> usize {
    (i - 1) * N + (j - 1)
}

/// The system with `η^6(v) = 1/2`.
pub fn build_polar_system<C: Scalar>(frame: &HypoFrame<C>) -> PolarSystem<C> {
    build_polar_system_with(frame, C::from_ratio(1, 2))
}

/// Setting `normal_component` to zero gives the homogeneous system of the
/// vertical directions.
pub fn build_polar_system_with<C: Scalar>(
    frame: &HypoFrame<C>,
    normal_component: C,
) -> PolarSystem<C> {
    let table = taut_derivatives(frame);
    let su3 = su3_lift(&reference_structure::<C>());
    // dη^i restricted to span(e_1..e_5, v), split into the known part and
    // one linear piece per unknown
    let known = LieAlgebra::from_differentials((1..=N).map(|i| table.form(i)).collect());
    let pieces: Vec<LieAlgebra<C>> = (1..=N)
        .flat_map(|i| (1..=N).map(move |j| (i, j)))
        .map(|(i, j)| {
            let diffs = (1..=N)
                .map(|a| {
                    if a == i && j < N {
                        Form::monomial(N, &[j, N], C::one())
                    } else {
                        Form::zero(N, 2)
                    }
                })
                .collect();
            LieAlgebra::from_differentials(diffs)
        })
        .collect();
    let e6 = MultiIndex::single(N);
    let mut equations = Vec::new();
    for (name, phi) in [
        ("omega", &su3.omega),
        ("psi+", &su3.psi_plus),
        ("psi-", &su3.psi_minus),
    ] {
        let d0 = known.d(phi);
        let dk: Vec<Form<C>> = pieces.iter().map(|p| p.d(phi)).collect();
        for m in MultiIndex::all(DIM, phi.degree()) {
            // an undifferentiated η^6 contributes η^6(v); the σ pieces already
            // carry their v-slot
            let (_, target) = m.wedge(e6).expect("η^6 not in I");
            let coefficients: Vec<C> = dk.iter().map(|f| f.coeff(target)).collect();
            let rhs = -(d0.coeff(target) * normal_component.clone());
            equations.push(PolarEquation {
                form: name,
                slots: m.indices(),
                coefficients,
                rhs,
                block: 0,
            });
        }
    }
    let block_sizes = label_blocks(&mut equations);
    PolarSystem {
        unknowns: (1..=N).flat_map(|i| (1..=N).map(move |j| (i, j))).collect(),
        equations,
        block_sizes,
        normal_component,
    }
}

/// Connected components of the equations under sharing an unknown.
fn label_blocks<C: Scalar>(equations: &mut [PolarEquation<C>]) -> Vec<usize> {
    let n = equations.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut owner: Vec<Option<usize>> = vec![None; UNKNOWNS];
    for (e, eq) in equations.iter().enumerate() {
        for (u, c) in eq.coefficients.iter().enumerate() {
            if c.is_zero_tol(0.0) {
                continue;
            }
            match owner[u] {
                None => owner[u] = Some(e),
                Some(o) => {
                    let (a, b) = (find(&mut parent, o), find(&mut parent, e));
                    parent[a] = b;
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for e in 0..n {
        let r = find(&mut parent, e);
        let b = match roots.iter().position(|&x| x == r) {
            Some(b) => b,
            None => {
                roots.push(r);
                sizes.push(0);
                roots.len() - 1
            }
        };
        equations[e].block = b;
        sizes[b] += 1;
    }
    sizes
}

impl<C: Scalar> PolarSystem<C> {
    pub fn matrix(&self) -> Mat<C> {
        Mat::from_rows(
            self.equations
                .iter()
                .map(|e| e.coefficients.clone())
                .collect(),
        )
    }

    pub fn rhs(&self) -> Vec<C> {
        self.equations.iter().map(|e| e.rhs.clone()).collect()
    }

    /// The value of each compatibility condition: `y·rhs` for a basis `y` of
    /// the left kernel of the coefficient matrix. All vanish iff the system
    /// is solvable.
    pub fn compatibility_conditions(&self, tol: f64) -> Vec<C> {
        let b = self.rhs();
        self.matrix()
            .transpose()
            .kernel(tol)
            .into_iter()
            .map(|y| {
                y.iter()
                    .zip(&b)
                    .fold(C::zero(), |acc, (p, q)| acc + p.clone() * q.clone())
            })
            .collect()
    }

    /// A solution, when one exists.
    pub fn solve(&self, tol: f64) -> Option<Vec<C>> {
        self.matrix().solve(&self.rhs(), tol)
    }

    /// Append a copy of equation `k`.
    pub fn with_duplicate(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.equations.push(self.equations[k].clone());
        out.block_sizes[self.equations[k].block] += 1;
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarCertificate {
    pub rank: usize,
    pub compatible: bool,
    /// Unknowns minus rank: the dimension of the affine solution space.
    pub extension_dim: usize,
    /// Largest compatibility condition value.
    pub violation: f64,
    pub block_sizes: Vec<usize>,
}

/// `tol` is the pivot tolerance; pass 0 in exact arithmetic.
pub fn polar_rank_certificate<C: Scalar>(sys: &PolarSystem<C>, tol: f64) -> PolarCertificate {
    let rank = sys.matrix().rank(tol);
    let violation = sys
        .compatibility_conditions(tol)
        .iter()
        .map(|c| c.to_f64().abs())
        .fold(0.0, f64::max);
    let compatible = sys
        .compatibility_conditions(tol)
        .iter()
        .all(|c| c.is_zero_tol(tol.max(1e-12)));
    PolarCertificate {
        rank,
        compatible,
        extension_dim: UNKNOWNS - rank,
        violation,
        block_sizes: sys.block_sizes.clone(),
    }
}

/// Basis of the stabilizer of the lifted SU(3)-structure in `gl(6)`, as
/// flattened matrices `x[i][j]` acting by `η^i ↦ Σ_j x[i][j] η^j`.
pub fn su3_algebra<C: Scalar>() -> Vec<Vec<C>> {
    let su3 = su3_lift(&reference_structure::<C>());
    let mut rows: Vec<Vec<C>> = Vec::new();
    for i in 1..=N {
        for j in 1..=N {
            let mut images = vec![Form::zero(N, 1); N];
            images[i - 1] = Form::generator(N, j);
            let col: Vec<C> = [&su3.omega, &su3.psi_plus, &su3.psi_minus]
                .iter()
                .flat_map(|phi| derive(phi, &images).coeff_vector())
                .collect();
            rows.push(col);
        }
    }
    Mat::from_rows(rows).transpose().kernel(0.0)
}

/// The derivation extending `η^i ↦ images[i]` (degree zero).
fn derive<C: Scalar>(phi: &Form<C>, images: &[Form<C>]) -> Form<C> {
    let mut out = Form::zero(N, phi.degree());
    for (m, c) in phi.terms() {
        let ix = m.indices();
        for p in 0..ix.len() {
            let mut w = Form::constant(N, c.clone());
            for (s, &g) in ix.iter().enumerate() {
                w = w.wedge(&if s == p {
                    images[g - 1].clone()
                } else {
                    Form::generator(N, g)
                });
            }
            out = out.add(&w);
        }
    }
    out
}

/// The coordinates of the unknown `σ^i_j` in a flattened solution.
pub fn unknown_position(i: usize, j: usize) -> usize {
    unknown_index(i, j)
}
