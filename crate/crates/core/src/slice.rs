//! Slice analysis of operator-valued functions on quaternionic domains.
//!
//! A slice `C_j` (`j ∈ S`) is identified with `C` through `ψ_j(r + si) = r + sj`.
//! Complex scalars act on operator values by right multiplication through `ψ_j`,
//! which is the complex structure under which right slice regular functions
//! restrict to holomorphic maps on each slice.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hmat::QMatrix;
use crate::quat::Quaternion;
use crate::resolvent::resolvent_bundle;

/// Default number of quadrature nodes on the contour.
pub const DEFAULT_NODES: usize = 256;

/// Operator-valued function of a quaternion. Evaluation must be pure; it fails
/// outside the domain.
pub trait SliceFunction: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, q: Quaternion) -> Result<QMatrix>;
}

/// Closure-backed evaluator.
pub struct SliceEvaluator<F> {
    n: usize,
    f: F,
}

impl<F> SliceEvaluator<F>
where
    F: Fn(Quaternion) -> Result<QMatrix> + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F> SliceFunction for SliceEvaluator<F>
where
    F: Fn(Quaternion) -> Result<QMatrix> + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, q: Quaternion) -> Result<QMatrix> {
        (self.f)(q)
    }
}

/// `q ↦ g(q)·I` on `H^n`.
pub fn scalar_function(
    n: usize,
    g: impl Fn(Quaternion) -> Quaternion + Sync,
) -> SliceEvaluator<impl Fn(Quaternion) -> Result<QMatrix> + Sync> {
    SliceEvaluator::new(n, move |q| Ok(QMatrix::scalar(n, g(q))))
}

/// The left S-resolvent `q ↦ S_q^{-1}(A)` on `ρ_S(A)`.
pub struct SResolventFn {
    pub a: QMatrix,
}

impl SliceFunction for SResolventFn {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn eval(&self, q: Quaternion) -> Result<QMatrix> {
        Ok(resolvent_bundle(&self.a, q)?.s_left)
    }
}

/// `ψ_j(z) = Re z + Im z·j`.
pub fn psi(j: Quaternion, z: Complex64) -> Quaternion {
    Quaternion::on_slice(z.re, z.im, j)
}

fn check_unit(j: Quaternion) -> Result<()> {
    if j.w != 0.0 || ((j * j).w + 1.0).abs() > 1e-12 || !j.is_finite() {
        return Err(Error::InvalidInput(format!("{j} is not a unit imaginary quaternion")));
    }
    Ok(())
}

/// Values `F1, F2` at `z` of the stem decomposition `f(r + sj) = F1 + F2 j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StemPair {
    pub f1: QMatrix,
    pub f2: QMatrix,
    pub z: Complex64,
}

impl StemPair {
    /// `F1 + F2 j'`, the value at `r + s j'` when `f` is slice.
    pub fn reconstruct(&self, j: Quaternion) -> QMatrix {
        &self.f1 + &self.f2.scale_right(j)
    }
}

/// `F1 = ½(f(r+sj) + f(r−sj))`, `F2 = −½(f(r+sj) − f(r−sj))·j`.
pub fn stem_decompose<F: SliceFunction + ?Sized>(f: &F, z: Complex64, j: Quaternion) -> Result<StemPair> {
    check_unit(j)?;
    let plus = f.eval(psi(j, z))?;
    let minus = f.eval(psi(j, z.conj()))?;
    let f1 = (&plus + &minus).scale_real(0.5);
    let f2 = (&plus - &minus).scale_right(j).scale_real(-0.5);
    Ok(StemPair { f1, f2, z })
}

/// Spherical derivative `∂_S f(q)`.
///
/// Off the real axis this is `(f(q) − f(q̄))(q − q̄)^{-1}`. On it, a central difference
/// along the real direction with `h = 1e-5(1 + |q|)` and one Richardson step.
pub fn sderiv_operator<F: SliceFunction + ?Sized>(f: &F, q: Quaternion) -> Result<QMatrix> {
    if !q.is_real() {
        let d = &f.eval(q)? - &f.eval(q.conj())?;
        return Ok(d.scale_right((q - q.conj()).inv()?));
    }
    let h = 1e-5 * (1.0 + q.norm());
    let central = |h: f64| -> Result<QMatrix> {
        let d = &f.eval(q + Quaternion::real(h))? - &f.eval(q - Quaternion::real(h))?;
        Ok(d.scale_real(0.5 / h))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok((&fine.scale_real(4.0) - &coarse).scale_real(1.0 / 3.0))
}

/// `‖∂f_j/∂r + (∂f_j/∂s)·j‖` at `z` by central differences of step `h`, where
/// `f_j(r, s) = f(r + sj)`.
///
/// Only the given slice is examined; connectedness of the domain is not checked.
pub fn cr_residual<F: SliceFunction + ?Sized>(f: &F, z: Complex64, j: Quaternion, h: f64) -> Result<f64> {
    check_unit(j)?;
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("step {h} must be positive")));
    }
    let at = |dr: f64, ds: f64| f.eval(psi(j, z + Complex64::new(dr, ds)));
    let dr = (&at(h, 0.0)? - &at(-h, 0.0)?).scale_real(0.5 / h);
    let ds = (&at(0.0, h)? - &at(0.0, -h)?).scale_real(0.5 / h);
    Ok((&dr + &ds.scale_right(j)).op_norm())
}

/// Taylor coefficients `a_n` of `f_j` around `z0` with `f_j(z) = Σ a_n ψ_j((z − z0)^n)`,
/// from the trapezoid rule on the circle `|z − z0| = δ` with `M` nodes.
///
/// Nodes are evaluated in parallel and reduced in node order.
pub fn cauchy_coeffs<F: SliceFunction + ?Sized>(
    f: &F,
    j: Quaternion,
    z0: Complex64,
    delta: f64,
    m: usize,
    nmax: usize,
) -> Result<Vec<QMatrix>> {
    check_unit(j)?;
    if m < 8 * (nmax + 1) {
        return Err(Error::InvalidInput(format!("{m} nodes are too few for {nmax} coefficients; need at least {}", 8 * (nmax + 1))));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidInput(format!("radius {delta} must be positive")));
    }
    let nodes: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    let values: Vec<QMatrix> = nodes
        .par_iter()
        .map(|&w| f.eval(psi(j, z0 + w * delta)))
        .collect::<Result<_>>()?;
    let coeffs = (0..=nmax)
        .map(|n| {
            let scale = delta.powi(-(n as i32)) / m as f64;
            values
                .iter()
                .zip(&nodes)
                .fold(QMatrix::zeros(f.dim()), |acc, (v, w)| {
                    let weight = w.conj().powu(n as u32) * scale;
                    &acc + &v.scale_right(psi(j, weight))
                })
        })
        .collect();
    Ok(coeffs)
}

/// `Σ a_n ψ_j((z − z0)^n)`.
pub fn taylor_eval(coeffs: &[QMatrix], j: Quaternion, z0: Complex64, z: Complex64) -> QMatrix {
    let n = coeffs.first().map_or(0, QMatrix::dim);
    let mut pw = Complex64::new(1.0, 0.0);
    let mut acc = QMatrix::zeros(n);
    for a in coeffs {
        acc = &acc + &a.scale_right(psi(j, pw));
        pw *= z - z0;
    }
    acc
}
