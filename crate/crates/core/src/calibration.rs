//! Numerical comass of special forms: the largest value of a form on an
//! oriented unit p-plane, found by multi-start ascent over orthonormal
//! p-frames.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{OrientedSubset, Sign, SpecialForm};

/// Default tolerance on `‖XᵀX - I‖` for a frame.
pub const GRAM_TOL: f64 = 1e-10;

/// `p` orthonormal vectors in `R^d`, stored as the columns of a `d × p` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameJson", into = "FrameJson")]
pub struct Frame(DMatrix<f64>);

#[derive(Serialize, Deserialize)]
struct FrameJson {
    d: usize,
    p: usize,
    vectors: Vec<Vec<f64>>,
}

impl TryFrom<FrameJson> for Frame {
    type Error = Error;

    fn try_from(j: FrameJson) -> Result<Self> {
        if j.vectors.len() != j.p || j.vectors.iter().any(|v| v.len() != j.d) {
            return Err(Error::domain("frame shape does not match d and p"));
        }
        Frame::from_vectors(&j.vectors)
    }
}

impl From<Frame> for FrameJson {
    fn from(f: Frame) -> Self {
        FrameJson {
            d: f.d(),
            p: f.p(),
            vectors: f.vectors(),
        }
    }
}

impl Frame {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(m, GRAM_TOL)
    }

    pub fn with_tolerance(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if m.ncols() == 0 || m.ncols() > m.nrows() {
            return Err(Error::domain(format!(
                "a frame needs 1 ≤ p ≤ d, got d = {}, p = {}",
                m.nrows(),
                m.ncols()
            )));
        }
        let defect = (m.transpose() * &m - DMatrix::identity(m.ncols(), m.ncols())).amax();
        if !defect.is_finite() || defect > tol {
            return Err(Error::precondition(format!(
                "frame is not orthonormal (Gram defect {defect:e})"
            )));
        }
        Ok(Frame(m))
    }

    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let p = vectors.len();
        let d = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != d) {
            return Err(Error::domain("frame vectors differ in length"));
        }
        Self::new(DMatrix::from_fn(d, p, |i, j| vectors[j][i]))
    }

    /// The standard basis vectors `e_μ` for `μ` in `subset` (1-based), in order.
    pub fn coordinate(d: usize, subset: &OrientedSubset) -> Result<Self> {
        if subset.max_index() > d {
            return Err(Error::domain(format!(
                "{subset} does not fit in dimension {d}"
            )));
        }
        let idx = subset.indices();
        Self::new(DMatrix::from_fn(d, idx.len(), |i, j| {
            if idx[j] == i + 1 {
                1.0
            } else {
                0.0
            }
        }))
    }

    /// Orthonormalised standard Gaussian `d × p` sample.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, p: usize) -> Self {
        loop {
            let g = DMatrix::from_fn(d, p, |_, _| StandardNormal.sample(rng));
            if let Some(q) = orthonormalize(g) {
                return Frame(q);
            }
        }
    }

    pub fn d(&self) -> usize {
        self.0.nrows()
    }

    pub fn p(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        self.0
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect()
    }

    /// Same plane, opposite orientation.
    pub fn reversed(&self) -> Frame {
        let mut m = self.0.clone();
        m.column_mut(0).neg_mut();
        Frame(m)
    }
}

/// Thin QR with the signs fixed so that `R` has a positive diagonal.
fn orthonormalize(m: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let rjj = r[(j, j)];
        if rjj.abs() < 1e-12 {
            return None;
        }
        if rjj < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Some(q)
}

fn check_shape(form: &SpecialForm, frame: &Frame) -> Result<()> {
    if form.d() != frame.d() || form.p() != frame.p() {
        return Err(Error::domain(format!(
            "form is a {}-form on R^{}, frame spans {} vectors in R^{}",
            form.p(),
            form.d(),
            frame.p(),
            frame.d()
        )));
    }
    Ok(())
}

/// `φ(e_1, …, e_p)`: for each term, the sign times the determinant of the
/// frame rows at the term's indices.
pub fn evaluate(form: &SpecialForm, frame: &Frame) -> Result<f64> {
    check_shape(form, frame)?;
    Ok(value_and_gradient(form, frame.matrix(), false).0)
}

fn rows(x: &DMatrix<f64>, subset: &OrientedSubset) -> DMatrix<f64> {
    let idx = subset.indices();
    DMatrix::from_fn(idx.len(), x.ncols(), |i, j| x[(idx[i] - 1, j)])
}

/// Value and, if asked, the Euclidean gradient with respect to the frame
/// entries. The gradient of `det A` is its cofactor matrix.
fn value_and_gradient(form: &SpecialForm, x: &DMatrix<f64>, grad: bool) -> (f64, DMatrix<f64>) {
    let p = form.p();
    let mut value = 0.0;
    let mut g = DMatrix::zeros(if grad { x.nrows() } else { 0 }, if grad { p } else { 0 });
    for term in form.terms() {
        let s = term.sign.value() as f64;
        let a = rows(x, &term.subset);
        value += s * a.determinant();
        if !grad {
            continue;
        }
        let idx = term.subset.indices();
        for i in 0..p {
            for j in 0..p {
                let cof = if p == 1 {
                    1.0
                } else {
                    let minor = a.clone().remove_row(i).remove_column(j);
                    let sgn = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    sgn * minor.determinant()
                };
                g[(idx[i] - 1, j)] += s * cof;
            }
        }
    }
    (value, g)
}

/// Settings for [`comass_with`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComassConfig {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub tol: f64,
}

impl Default for ComassConfig {
    fn default() -> Self {
        ComassConfig {
            seed: 0,
            restarts: 200,
            iterations: 500,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComassReport {
    /// Best value of the form on an oriented unit p-plane.
    pub max_value: f64,
    pub argmax_frame: Frame,
    /// Largest `|component|`, attained on a coordinate plane.
    pub coordinate_bound: f64,
    /// `max_value` is within `tol` of `coordinate_bound`.
    pub achieved_on_coordinate_plane: bool,
    /// `|max_value - 1| ≤ tol`.
    pub is_calibration: bool,
    pub n_restarts: usize,
    /// Restarts whose projected gradient fell below the stopping threshold.
    pub converged_restarts: usize,
    /// Final value of each restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// [`comass_with`] using the default seed and iteration budget.
pub fn comass(form: &SpecialForm, restarts: usize, tol: f64) -> Result<ComassReport> {
    comass_with(
        form,
        &ComassConfig {
            restarts,
            tol,
            ..ComassConfig::default()
        },
    )
}

struct Ascent {
    value: f64,
    frame: DMatrix<f64>,
    converged: bool,
}

/// Estimates `sup φ(U)` over oriented unit p-planes. Since reversing the
/// orientation negates the value, this is also `sup |φ(U)|`.
///
/// Each restart starts from a random frame and sweeps over its vectors,
/// replacing each by the unit vector orthogonal to the others that
/// maximises the form (the form is linear in each vector), then
/// re-orthonormalises. A restart stops when a sweep no longer increases
/// the value or the projected gradient vanishes.
pub fn comass_with(form: &SpecialForm, cfg: &ComassConfig) -> Result<ComassReport> {
    if cfg.restarts == 0 {
        return Err(Error::precondition("need at least one restart"));
    }
    if form.p() == 0 || form.p() > form.d() {
        return Err(Error::domain(format!(
            "no unit {}-planes in R^{}",
            form.p(),
            form.d()
        )));
    }
    let (d, p) = (form.d(), form.p());
    let runs: Vec<Ascent> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            ascend(form, Frame::random(&mut rng, d, p).0, cfg.iterations)
        })
        .collect();

    // best value; near-ties go to the lexicographically smallest rounded frame
    let best = runs
        .iter()
        .map(|a| a.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let key =
        |m: &DMatrix<f64>| -> Vec<i64> { m.iter().map(|x| (x * 1e9).round() as i64).collect() };
    let winner = runs
        .iter()
        .filter(|a| a.value >= best - 1e-12)
        .min_by_key(|a| key(&a.frame))
        .expect("at least one restart");

    let coordinate_bound = if form.is_empty() { 0.0 } else { 1.0 };
    let (max_value, argmax) = if coordinate_bound >= winner.value {
        let frame = match form.terms().first() {
            Some(t) => {
                let f = Frame::coordinate(d, &t.subset)?;
                if t.sign == Sign::Minus {
                    f.reversed()
                } else {
                    f
                }
            }
            None => Frame(winner.frame.clone()),
        };
        (coordinate_bound, frame)
    } else {
        (winner.value, Frame(winner.frame.clone()))
    };
    Ok(ComassReport {
        max_value,
        argmax_frame: argmax,
        coordinate_bound,
        achieved_on_coordinate_plane: max_value <= coordinate_bound + cfg.tol,
        is_calibration: (max_value - 1.0).abs() <= cfg.tol,
        n_restarts: cfg.restarts,
        converged_restarts: runs.iter().filter(|a| a.converged).count(),
        restart_values: runs.iter().map(|a| a.value).collect(),
    })
}

fn ascend(form: &SpecialForm, mut x: DMatrix<f64>, iterations: usize) -> Ascent {
    let p = x.ncols();
    let mut value = value_and_gradient(form, &x, false).0;
    let mut converged = false;
    for _ in 0..iterations {
        // tangent projection: G - X sym(XᵀG)
        let g = value_and_gradient(form, &x, true).1;
        let xtg = x.transpose() * &g;
        let sym = (&xtg + xtg.transpose()) * 0.5;
        if (&g - &x * sym).norm() < 1e-11 {
            converged = true;
            break;
        }
        // the form is linear in each vector: replace vector j by its best
        // unit choice orthogonal to the others
        let mut y = x.clone();
        for j in 0..p {
            let mut c: DVector<f64> = value_and_gradient(form, &y, true).1.column(j).into();
            for k in (0..p).filter(|&k| k != j) {
                let yk = y.column(k);
                c -= yk * yk.dot(&c);
            }
            let n = c.norm();
            if n > 1e-300 {
                y.set_column(j, &(c / n));
            }
        }
        // re-orthonormalise against drift
        let y = orthonormalize(y).unwrap_or(x.clone());
        let v = value_and_gradient(form, &y, false).0;
        if v <= value {
            converged = true;
            break;
        }
        x = y;
        value = v;
    }
    Ascent {
        value,
        frame: x,
        converged,
    }
}

/// The coordinate planes on which the form takes the value `±1`: its
/// support with signs.
pub fn calibrated_coordinate_planes(form: &SpecialForm) -> Vec<(OrientedSubset, Sign)> {
    form.terms()
        .iter()
        .map(|t| (t.subset.clone(), t.sign))
        .collect()
}
