//! Numerical and exact evidence for the classification of hypo nilpotent Lie
//! algebras in dimension five.
//!
//! Every SU(2)-structure is the pullback of the reference quadruplet by some
//! `B ∈ GL(5)` (rows of `B` are the new coframe). The hypo defect measures the
//! failure of the three hypo conditions in the `B`-coframe. Since nilpotent
//! algebras degenerate to the abelian one under rescaling, the search minimizes
//! the defect relative to the size of the structure constants in that coframe,
//! with a barrier on the determinant of the Frobenius-normalized `B`.

use std::cell::RefCell;
use std::fmt::Write as _;

use argmin::core::{CostFunction, Error as ArgminError, Executor};
use argmin::solver::neldermead::NelderMead;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{Catalog, TableRow, TABLE};
use crate::error::{HypoError, Result};
use crate::exterior::{Form, LieAlgebra, MultiIndex};
use nalgebra::{DMatrix, DVector, Matrix5};

use crate::linalg::Mat;
use crate::scalar::{rationalize, Scalar, Q};
use crate::su2::{reference_structure, SU2Structure, DIM};

/// Lower bound on `|det B̂|` for `B̂ = √5 B / ‖B‖_F`.
pub const DET_BARRIER: f64 = 1e-6;
/// Objective value returned inside the barrier.
const BARRIER_COST: f64 = 1e3;
/// Default bound on the Frobenius condition number `‖B‖_F ‖B⁻¹‖_F` (5 for
/// orthogonal `B`). It is the smallest bound for which every algebra in the
/// table admitting hypo structures has a catalog frame inside the domain.
pub const MAX_CONDITION: f64 = 6.0;
pub const MAX_EVALUATIONS: u64 = 100_000;
pub const STEP_TOLERANCE: f64 = 1e-10;

/// Best normalized defects measured over 200 starts with seed 0 on the
/// algebras without hypo structures (3.00e-3, 2.42e-2, 3.48e-2), rounded
/// down. Empirical floors, not lower bounds.
pub const NO_ROW_FLOORS: [(&str, f64); 3] = [
    ("(0,0,12,13,14+23)", 2.9e-3),
    ("(0,0,12,13,23)", 2.4e-2),
    ("(0,0,0,12,14)", 3.4e-2),
];

fn hypo_forms<C: Scalar>(s: &SU2Structure<C>) -> [Form<C>; 3] {
    [
        s.omega1.clone(),
        s.alpha.wedge(&s.omega2),
        s.alpha.wedge(&s.omega3),
    ]
}

fn frobenius_normalized_det<C: Scalar>(b: &Mat<C>) -> f64 {
    let bf = b.to_f64();
    let fro = bf
        .to_rows()
        .concat()
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    if fro == 0.0 {
        return 0.0;
    }
    bf.scale(&((DIM as f64).sqrt() / fro)).determinant()
}

/// `‖dω1‖² + ‖d(α∧ω2)‖² + ‖d(α∧ω3)‖²` for the `B`-pullback of the reference
/// forms, with norms taken in the `B`-coframe.
pub fn defect<C: Scalar>(b: &Mat<C>, alg: &LieAlgebra<Q>) -> Result<C> {
    if frobenius_normalized_det(b).abs() < DET_BARRIER {
        return Err(HypoError::Singular("B is too close to singular".into()));
    }
    let d = alg.map(C::from_q).in_coframe(b, 0.0)?;
    let mut total = C::zero();
    for f in hypo_forms(&reference_structure::<C>()) {
        for (_, c) in d.d(&f).terms() {
            total = total + c.clone() * c.clone();
        }
    }
    Ok(total)
}

/// Fast evaluator of the defect for a fixed algebra.
///
/// In the `B`-coframe the structure constants are `c'^a = Σ_k B_ak Pᵀ C^k P`
/// with `P = B⁻¹`, and the hypo forms have constant coefficients, so the
/// defect is `‖L c'‖²` for a fixed matrix `L`.
///
/// The search domain is `‖B‖_F ‖B⁻¹‖_F ≤ max_condition`: every excluded algebra has
/// algebras admitting hypo structures in its orbit closure, so over all of
/// `GL(5)` the normalized defect has infimum zero.
#[derive(Clone, Debug)]
pub struct DefectProblem {
    pub algebra: LieAlgebra<Q>,
    /// `C^k` as full antisymmetric matrices.
    constants: [Matrix5<f64>; DIM],
    /// Rows: coefficients of the three derivatives; columns: `(a, b < c)`.
    l: DMatrix<f64>,
    /// Points with `‖B‖_F ‖B⁻¹‖_F` above this are inside the barrier.
    pub max_condition: f64,
}

const PAIRS: usize = DIM * (DIM - 1) / 2;

impl DefectProblem {
    pub fn new(algebra: &LieAlgebra<Q>) -> Result<Self> {
        if algebra.dim() != DIM {
            return Err(HypoError::DimensionMismatch {
                left: algebra.dim(),
                right: DIM,
            });
        }
        let constants = std::array::from_fn(|k| {
            let de = algebra.de(k + 1).to_f64();
            Matrix5::from_fn(|i, j| {
                if i == j {
                    0.0
                } else {
                    de.coeff_of(&[i + 1, j + 1])
                }
            })
        });
        let pairs = MultiIndex::all(DIM, 2);
        let forms = hypo_forms(&reference_structure::<f64>());
        let mut columns = Vec::with_capacity(DIM * PAIRS);
        for a in 0..DIM {
            for m in &pairs {
                let mut diffs = vec![Form::zero(DIM, 2); DIM];
                diffs[a] = Form::from_terms(DIM, 2, [(*m, 1.0)]);
                let unit = LieAlgebra::from_differentials(diffs);
                columns.push(
                    forms
                        .iter()
                        .flat_map(|f| unit.d(f).coeff_vector())
                        .collect::<Vec<f64>>(),
                );
            }
        }
        let l = DMatrix::from_fn(columns[0].len(), columns.len(), |i, j| columns[j][i]);
        Ok(Self {
            algebra: algebra.clone(),
            constants,
            l,
            max_condition: MAX_CONDITION,
        })
    }

    pub fn with_max_condition(mut self, k: f64) -> Self {
        self.max_condition = k;
        self
    }

    /// `(defect, ‖c'‖²)`, or `None` inside the barrier.
    pub fn evaluate(&self, b: &Mat<f64>) -> Option<(f64, f64)> {
        self.evaluate_slice(&b.to_rows().concat())
    }

    /// [`evaluate`](Self::evaluate) on the row-major entries of `B`.
    pub fn evaluate_slice(&self, x: &[f64]) -> Option<(f64, f64)> {
        let b = Matrix5::from_row_slice(x);
        let fro = b.norm();
        if fro == 0.0 || (b * ((DIM as f64).sqrt() / fro)).determinant().abs() < DET_BARRIER {
            return None;
        }
        let p = b.try_inverse()?;
        if fro * p.norm() > self.max_condition {
            return None;
        }
        let t: Vec<Matrix5<f64>> = self
            .constants
            .iter()
            .map(|c| p.transpose() * c * p)
            .collect();
        let mut c = DVector::zeros(DIM * PAIRS);
        let mut idx = 0;
        for a in 0..DIM {
            for bb in 0..DIM {
                for cc in bb + 1..DIM {
                    c[idx] = (0..DIM).map(|k| b[(a, k)] * t[k][(bb, cc)]).sum();
                    idx += 1;
                }
            }
        }
        Some(((&self.l * &c).norm_squared(), c.norm_squared()))
    }

    pub fn defect(&self, b: &Mat<f64>) -> Option<f64> {
        self.evaluate(b).map(|(d, _)| d)
    }

    /// Defect divided by the squared norm of the structure constants in the
    /// `B`-coframe; zero on the abelian algebra.
    pub fn normalized_defect(&self, b: &Mat<f64>) -> Option<f64> {
        self.evaluate(b).map(normalize)
    }
}

fn normalize((d, n): (f64, f64)) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        d / n
    }
}

fn to_matrix(x: &[f64]) -> Mat<f64> {
    Mat::from_fn(DIM, DIM, |i, j| x[i * DIM + j])
}

/// Cost with an evaluation budget; remembers the best point seen.
struct Objective<'a> {
    problem: &'a DefectProblem,
    tally: &'a RefCell<Tally>,
}

#[derive(Debug)]
struct Tally {
    evaluations: u64,
    barrier_hits: u64,
    best: Vec<f64>,
    best_cost: f64,
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, ArgminError> {
        let mut t = self.tally.borrow_mut();
        if t.evaluations >= MAX_EVALUATIONS {
            return Err(ArgminError::msg("evaluation budget exhausted"));
        }
        t.evaluations += 1;
        let v = match self.problem.evaluate_slice(x) {
            Some(v) => normalize(v),
            None => {
                t.barrier_hits += 1;
                BARRIER_COST
            }
        };
        if v < t.best_cost {
            t.best_cost = v;
            t.best = x.clone();
        }
        Ok(v)
    }
}

/// Outcome of one local descent.
#[derive(Clone, Debug)]
pub struct StartResult {
    pub start: usize,
    pub defect: f64,
    pub b: Mat<f64>,
    pub evaluations: u64,
    pub barrier_hits: u64,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub algebra: String,
    pub best_defect: f64,
    pub best_b: Mat<f64>,
    pub starts: usize,
    pub seed: u64,
    /// Final normalized defect of each start, in start order.
    pub defect_trace: Vec<f64>,
    pub evaluations: u64,
    /// Starts whose final point is inside the barrier.
    pub barrier_starts: usize,
    /// Exact hypo check of the rational reconstruction of `best_b`, when one exists.
    pub exact_certificate: Option<bool>,
}

/// A random orthogonal matrix (Gram–Schmidt on uniform entries) plus noise.
fn initial_point(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(DIM);
    while rows.len() < DIM {
        let mut v: Vec<f64> = (0..DIM).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for r in &rows {
            let dot: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(r).for_each(|(a, b)| *a -= dot * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            rows.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    rows.concat()
        .into_iter()
        .map(|x| x + 0.05 * rng.gen_range(-1.0..1.0))
        .collect()
}

fn local_descent(problem: &DefectProblem, start: usize, seed: u64) -> StartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    let x0 = initial_point(&mut rng);
    let tally = RefCell::new(Tally {
        evaluations: 0,
        barrier_hits: 0,
        best: x0.clone(),
        best_cost: f64::INFINITY,
    });
    Objective {
        problem,
        tally: &tally,
    }
    .cost(&x0)
    .expect("budget not yet used");
    let mut scale = 0.2;
    // restarted Nelder-Mead: stop once a restart no longer moves the best point
    loop {
        let (center, before) = {
            let t = tally.borrow();
            (t.best.clone(), t.best_cost)
        };
        // the solver's initial simplex must fit in the remaining budget
        let simplex_cost = (DIM * DIM + 1) as u64;
        if before == 0.0 || tally.borrow().evaluations + simplex_cost > MAX_EVALUATIONS {
            break;
        }
        let simplex: Vec<Vec<f64>> = std::iter::once(center.clone())
            .chain((0..DIM * DIM).map(|i| {
                let mut v = center.clone();
                v[i] += scale;
                v
            }))
            .collect();
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-18)
            .expect("valid tolerance");
        // an exhausted budget surfaces as an error; the tally keeps the best point
        let _ = Executor::new(
            Objective {
                problem,
                tally: &tally,
            },
            solver,
        )
        .configure(|s| s.max_iters(MAX_EVALUATIONS))
        .run();
        let t = tally.borrow();
        let step = t
            .best
            .iter()
            .zip(&center)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if step <= STEP_TOLERANCE {
            break;
        }
        scale = (step * 0.5).clamp(1e-6, 0.2);
    }
    let t = tally.into_inner();
    StartResult {
        start,
        defect: t.best_cost,
        b: to_matrix(&t.best),
        evaluations: t.evaluations,
        barrier_hits: t.barrier_hits,
    }
}

/// Exact hypo check of `b` after rational reconstruction (denominators ≤ 64).
pub fn exact_certificate(b: &Mat<f64>, alg: &LieAlgebra<Q>) -> Option<bool> {
    let rows: Option<Vec<Vec<Q>>> = b
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&x| rationalize(x, 1e-9, 64)).collect())
        .collect();
    let bq = Mat::from_rows(rows?);
    let s = reference_structure::<Q>().pullback(&bq);
    if !s.validate(0.0).is_valid() {
        return Some(false);
    }
    Some(s.is_hypo(alg, 0.0).hypo)
}

/// Multi-start defect minimization; deterministic in `seed`.
pub fn search(alg: &LieAlgebra<Q>, n_starts: usize, seed: u64) -> Result<SearchReport> {
    search_with(&DefectProblem::new(alg)?, n_starts, seed)
}

pub fn search_with(problem: &DefectProblem, n_starts: usize, seed: u64) -> Result<SearchReport> {
    if n_starts == 0 {
        return Err(HypoError::InvalidArgument(
            "n_starts must be at least 1".into(),
        ));
    }
    let alg = &problem.algebra;
    let results: Vec<StartResult> = (0..n_starts)
        .into_par_iter()
        .map(|k| local_descent(problem, k, seed))
        .collect();
    let best = results
        .iter()
        .min_by(|a, b| a.defect.total_cmp(&b.defect).then(a.start.cmp(&b.start)))
        .expect("at least one start");
    let exact_certificate = if best.defect < 1e-9 {
        exact_certificate(&best.b, alg)
    } else {
        None
    };
    Ok(SearchReport {
        algebra: alg.to_string(),
        best_defect: best.defect,
        best_b: best.b.clone(),
        starts: n_starts,
        seed,
        defect_trace: results.iter().map(|r| r.defect).collect(),
        evaluations: results.iter().map(|r| r.evaluations).sum(),
        barrier_starts: results.iter().filter(|r| r.defect >= BARRIER_COST).count(),
        exact_certificate,
    })
}

pub fn recorded_floor(alg: &LieAlgebra<Q>) -> Option<f64> {
    let key = alg.to_string();
    NO_ROW_FLOORS
        .iter()
        .find(|(a, _)| LieAlgebra::parse_salamon(a).is_ok_and(|x| x.to_string() == key))
        .map(|(_, f)| *f)
}

#[derive(Clone, Debug)]
pub enum Evidence {
    /// Every catalog structure on the algebra is valid and has defect exactly 0.
    Exact { catalog_ids: Vec<usize> },
    /// Best normalized defect found by the search, against the recorded floor.
    Search { report: SearchReport, floor: f64 },
}

#[derive(Clone, Debug)]
pub struct TableVerdict {
    pub row: TableRow,
    pub jacobi_ok: bool,
    pub step: Option<usize>,
    pub b2: usize,
    pub evidence: Evidence,
}

impl TableVerdict {
    pub fn admits_hypo(&self) -> bool {
        matches!(self.evidence, Evidence::Exact { .. })
    }

    /// Recomputed columns and evidence all agree with the table row.
    pub fn matches(&self) -> bool {
        let evidence_ok = match &self.evidence {
            Evidence::Exact { catalog_ids } => !catalog_ids.is_empty(),
            Evidence::Search { report, floor } => report.best_defect >= *floor && *floor > 0.0,
        };
        self.jacobi_ok
            && self.step == Some(self.row.step)
            && self.b2 == self.row.b2
            && self.admits_hypo() == self.row.admits_hypo
            && evidence_ok
    }
}

/// Verify every row of the classification table.
pub fn reproduce_table(catalog: &Catalog, n_starts: usize, seed: u64) -> Result<Vec<TableVerdict>> {
    TABLE
        .iter()
        .map(|row| {
            let alg = LieAlgebra::parse_salamon(row.algebra)?;
            let entries = catalog.for_algebra(&alg);
            if entries.is_empty() == row.admits_hypo {
                return Err(HypoError::Catalog(format!(
                    "catalog and table disagree on {}",
                    row.algebra
                )));
            }
            let evidence = if row.admits_hypo {
                let mut ids = Vec::new();
                for e in entries {
                    e.structure.require_valid(0.0)?;
                    let b = e.structure.adapted_coframe(0.0)?;
                    if !num::Zero::is_zero(&defect(&b, &alg)?)
                        || !e.structure.is_hypo(&alg, 0.0).hypo
                    {
                        return Err(HypoError::Catalog(format!(
                            "catalog:{} on {} is not hypo",
                            e.id, row.algebra
                        )));
                    }
                    ids.push(e.id);
                }
                Evidence::Exact { catalog_ids: ids }
            } else {
                let floor = recorded_floor(&alg).ok_or_else(|| {
                    HypoError::Catalog(format!("no recorded floor for {}", row.algebra))
                })?;
                Evidence::Search {
                    report: search(&alg, n_starts, seed)?,
                    floor,
                }
            };
            Ok(TableVerdict {
                row: *row,
                jacobi_ok: alg.jacobi_check().ok,
                step: alg.nilpotency_step(),
                b2: alg.betti2(),
                evidence,
            })
        })
        .collect()
}

/// Text rendering in the layout of the classification table.
pub fn render_table(verdicts: &[TableVerdict]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<20} {:>4} {:>3}  {:<5} evidence",
        "algebra", "step", "b2", "hypo"
    )
    .unwrap();
    for v in verdicts {
        let step = v.step.map_or("-".to_string(), |s| s.to_string());
        let yes = if v.admits_hypo() { "yes" } else { "no" };
        let ev = match &v.evidence {
            Evidence::Exact { catalog_ids } => format!("exact: catalog {catalog_ids:?} defect 0"),
            Evidence::Search { report, floor } => format!(
                "empirical: best defect {:.3e} over {} starts (floor {:.3e}); not a proof",
                report.best_defect, report.starts, floor
            ),
        };
        let mark = if v.matches() { "" } else { "  MISMATCH" };
        writeln!(
            out,
            "{:<20} {:>4} {:>3}  {:<5} {ev}{mark}",
            v.row.algebra, step, v.b2, yes
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn abelian_defect_vanishes_at_the_first_point() {
        let r = search(&LieAlgebra::abelian(5), 1, 0).unwrap();
        assert_eq!(r.best_defect, 0.0);
        assert_eq!(r.evaluations, 1);
        assert_eq!(
            defect(&Mat::<Q>::identity(5), &LieAlgebra::abelian(5)).unwrap(),
            q(0)
        );
    }

    #[test]
    fn identity_on_excluded_algebra_is_positive() {
        let alg = LieAlgebra::parse_salamon("(0,0,0,12,14)").unwrap();
        assert!(defect(&Mat::<Q>::identity(5), &alg).unwrap() > q(0));
        let p = DefectProblem::new(&alg).unwrap();
        assert!(p.normalized_defect(&Mat::identity(5)).unwrap() > 0.0);
    }

    #[test]
    fn fast_defect_matches_exact_defect() {
        let alg = LieAlgebra::parse_salamon("(0,0,12,13,14+23)").unwrap();
        let p = DefectProblem::new(&alg).unwrap().with_max_condition(1e6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows: Vec<Vec<Q>> = (0..DIM)
                .map(|i| {
                    (0..DIM)
                        .map(|j| q(rng.gen_range(-3..=3) + if i == j { 4 } else { 0 }))
                        .collect()
                })
                .collect();
            let b = Mat::from_rows(rows);
            let exact = defect(&b, &alg).unwrap().to_f64();
            let fast = p.defect(&b.to_f64()).unwrap();
            assert!(
                (exact - fast).abs() <= 1e-10 * (1.0 + exact),
                "{exact} vs {fast}"
            );
        }
    }

    #[test]
    fn barrier_rejects_degenerate_frames() {
        let alg = LieAlgebra::parse_salamon("(0,0,0,12,14)").unwrap();
        let mut b = Mat::<f64>::identity(5);
        b[(4, 4)] = 1e-8;
        assert!(defect(&b, &alg).is_err());
        assert!(DefectProblem::new(&alg).unwrap().evaluate(&b).is_none());
        assert!(search(&alg, 0, 0).is_err());
    }

    #[test]
    fn search_is_deterministic() {
        let alg = LieAlgebra::parse_salamon("(0,0,0,0,12)").unwrap();
        let a = search(&alg, 2, 3).unwrap();
        let b = search(&alg, 2, 3).unwrap();
        assert_eq!(a.defect_trace, b.defect_trace);
        assert_eq!(a.best_b, b.best_b);
    }

    #[test]
    fn floors_are_recorded_for_every_excluded_algebra() {
        for row in TABLE.iter().filter(|r| !r.admits_hypo) {
            let alg = LieAlgebra::parse_salamon(row.algebra).unwrap();
            assert!(recorded_floor(&alg).unwrap() > 1e-3);
        }
    }
}
