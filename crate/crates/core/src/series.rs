//! Spherical series expansion of the S-resolvent around a point `q0` of the
//! S-resolvent set, and of the pseudo-resolvent through spherical derivatives.
//!
//! With `Q = Q_{q0}(A)` and `S = S_{q0}^{-1}(A)` the coefficients are
//! `B_{2k} = Q^k` and `B_{2k+1} = Q^k S`, and for `u(q, q0) < R = ‖Q‖^{-1/2}`
//!
//! ```text
//! S_q^{-1}(A) = Σ_n (−1)^n     B_{n+1} p_{q0,n}(q)
//! Q_q(A)      = Σ_n (−1)^{n+1} B_{n+1} ∂_S p_{q0,n}(q)
//! ```
//!
//! Tail bounds use `ρ = ‖Q‖·|△_{q0}(q)|` together with `‖B_{2k+1}‖ ≤ ‖S‖‖Q‖^k`,
//! `‖B_{2k+2}‖ ≤ ‖Q‖^{k+1}`, `|p_{2k}| = |△|^k` and `|p_{2k+1}| = |q − q0||△|^k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmat::QMatrix;
use crate::quat::{cassini_u, spherical_power, spherical_power_sderiv, triangle, Quaternion};
use crate::resolvent::{resolvent_bundle, ResolventBundle};
use crate::spectrum::real_resolvent_point;

/// Default cap on the truncation index of the automatic stopping rule.
pub const DEFAULT_NMAX: usize = 200;

/// Immutable expansion data around `q0`: coefficients `B_1, …, B_{N+1}`.
#[derive(Debug, Clone)]
pub struct SeriesState {
    pub a: QMatrix,
    pub q0: Quaternion,
    pub bundle0: ResolventBundle,
    pub radius: f64,
    coeffs: Vec<QMatrix>,
    norm_s: f64,
}

/// Builds `B_1 = S`, `B_2 = Q`, `B_{n+2} = Q B_n` up to `B_{N+1}`.
pub fn series_init(a: &QMatrix, q0: Quaternion, n_max: usize) -> Result<SeriesState> {
    // the expansion theory needs a real resolvent point; for matrices one always exists
    real_resolvent_point(a)?;
    let bundle0 = resolvent_bundle(a, q0)?;
    let radius = bundle0.norm_pseudo.powf(-0.5);
    let mut coeffs: Vec<QMatrix> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let b = match n {
            0 => bundle0.s_left.clone(),
            1 => bundle0.pseudo.clone(),
            _ => &bundle0.pseudo * &coeffs[n - 2],
        };
        coeffs.push(b);
    }
    let norm_s = bundle0.s_left.op_norm();
    Ok(SeriesState { a: a.clone(), q0, bundle0, radius, coeffs, norm_s })
}

/// A truncated sum with its tail majorant.
#[derive(Debug, Clone)]
pub struct SeriesEval {
    pub sum: QMatrix,
    pub n: usize,
    pub tail_bound: f64,
    pub converged: bool,
}

/// Geometric tail `Σ_{k≥K} ρ^k`.
fn geo_tail(rho: f64, k: usize) -> f64 {
    rho.powi(k as i32) / (1.0 - rho)
}

/// `Σ_{k≥K} k ρ^{k−1}`.
fn poly_tail(rho: f64, k: usize) -> f64 {
    let d = 1.0 - rho;
    if k == 0 {
        return 1.0 / (d * d);
    }
    (k as f64 * rho.powi(k as i32 - 1) * d + rho.powi(k as i32)) / (d * d)
}

impl SeriesState {
    /// `B_n` for `1 ≤ n ≤ N + 1`.
    pub fn coeff(&self, n: usize) -> &QMatrix {
        &self.coeffs[n - 1]
    }

    /// Largest truncation index the stored coefficients support.
    pub fn max_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm_q(&self) -> f64 {
        self.bundle0.norm_pseudo
    }

    pub fn norm_s(&self) -> f64 {
        self.norm_s
    }

    /// `ρ = ‖Q_{q0}‖·|△_{q0}(q)|`, or the domain error when `u(q, q0) ≥ R`.
    pub fn rho(&self, q: Quaternion) -> Result<f64> {
        let rho = self.norm_q() * triangle(self.q0, q).norm();
        if !(rho < 1.0) {
            return Err(Error::OutsideConvergenceDomain {
                q,
                distance: cassini_u(q, self.q0),
                radius: self.radius,
            });
        }
        Ok(rho)
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.max_index() {
            return Err(Error::InvalidInput(format!(
                "truncation index {n} exceeds the {} stored coefficients",
                self.max_index()
            )));
        }
        Ok(())
    }

    /// `(−1)^n B_{n+1} p_{q0,n}(q)`.
    pub fn term_s(&self, n: usize, q: Quaternion) -> QMatrix {
        let t = self.coeff(n + 1).scale_right(spherical_power(self.q0, n as u32, q));
        if n % 2 == 1 {
            -&t
        } else {
            t
        }
    }

    /// `(−1)^{n+1} B_{n+1} ∂_S p_{q0,n}(q)`.
    pub fn term_q(&self, n: usize, q: Quaternion) -> QMatrix {
        let t = self.coeff(n + 1).scale_right(spherical_power_sderiv(self.q0, n as u32, q));
        if n % 2 == 0 {
            -&t
        } else {
            t
        }
    }

    /// Majorant of `Σ_{n>N} ‖(−1)^n B_{n+1} p_{q0,n}(q)‖`.
    pub fn tail_bound_s(&self, q: Quaternion, n: usize) -> Result<f64> {
        let rho = self.rho(q)?;
        let (even_from, odd_from) = ((n + 2) / 2, n.div_ceil(2));
        let odd_scale = self.norm_q() * (q - self.q0).norm();
        Ok(self.norm_s * geo_tail(rho, even_from) + odd_scale * geo_tail(rho, odd_from))
    }

    /// Majorant of `Σ_{n>N} ‖B_{n+1} ∂_S p_{q0,n}(q)‖`, from
    /// `|∂_S p_{2k}| ≤ 2kc|△|^{k−1}` and `|∂_S p_{2k+1}| ≤ |△|^k + 2kc²|△|^{k−1}`,
    /// `c = max(1, |q| + |q0|)`.
    pub fn tail_bound_q(&self, q: Quaternion, n: usize) -> Result<f64> {
        let rho = self.rho(q)?;
        let (even_from, odd_from) = ((n + 2) / 2, n.div_ceil(2));
        let c = (q.norm() + self.q0.norm()).max(1.0);
        let nq = self.norm_q();
        let even = 2.0 * c * self.norm_s * nq * poly_tail(rho, even_from);
        let odd = nq * geo_tail(rho, odd_from) + 2.0 * c * c * nq * nq * poly_tail(rho, odd_from);
        Ok(even + odd)
    }

    /// Partial sum through index `n` of the S-series and its tail bound.
    pub fn eval_s(&self, q: Quaternion, n: usize) -> Result<(QMatrix, f64)> {
        self.check_index(n)?;
        let bound = self.tail_bound_s(q, n)?;
        let sum = (0..=n).fold(QMatrix::zeros(self.a.dim()), |acc, k| &acc + &self.term_s(k, q));
        Ok((sum, bound))
    }

    /// Partial sum through index `n` of the Q-series and its tail bound.
    pub fn eval_q(&self, q: Quaternion, n: usize) -> Result<(QMatrix, f64)> {
        self.check_index(n)?;
        let bound = self.tail_bound_q(q, n)?;
        let sum = (0..=n).fold(QMatrix::zeros(self.a.dim()), |acc, k| &acc + &self.term_q(k, q));
        Ok((sum, bound))
    }

    /// Smallest `N` whose S-series tail bound is below `rtol·‖partial‖`; stops at the
    /// stored coefficient count with `converged = false` otherwise.
    pub fn eval_s_auto(&self, q: Quaternion, rtol: f64) -> Result<SeriesEval> {
        self.auto(q, rtol, |k| self.term_s(k, q), |n| self.tail_bound_s(q, n))
    }

    /// As [`SeriesState::eval_s_auto`] for the Q-series.
    pub fn eval_q_auto(&self, q: Quaternion, rtol: f64) -> Result<SeriesEval> {
        self.auto(q, rtol, |k| self.term_q(k, q), |n| self.tail_bound_q(q, n))
    }

    fn auto(
        &self,
        q: Quaternion,
        rtol: f64,
        term: impl Fn(usize) -> QMatrix,
        bound: impl Fn(usize) -> Result<f64>,
    ) -> Result<SeriesEval> {
        self.rho(q)?;
        let mut sum = QMatrix::zeros(self.a.dim());
        let mut tail_bound = f64::INFINITY;
        for n in 0..=self.max_index() {
            sum = &sum + &term(n);
            tail_bound = bound(n)?;
            if tail_bound < rtol * sum.op_norm() {
                return Ok(SeriesEval { sum, n, tail_bound, converged: true });
            }
        }
        Ok(SeriesEval { sum, n: self.max_index(), tail_bound, converged: false })
    }

    /// Automatic S-series evaluation at many points, in input order.
    pub fn eval_s_many(&self, qs: &[Quaternion], rtol: f64) -> Vec<Result<SeriesEval>> {
        qs.par_iter().map(|&q| self.eval_s_auto(q, rtol)).collect()
    }

    /// `‖(−1)^n B_{n+1} p_{q0,n}(q)‖` for `n = 0..=N`.
    pub fn term_norms_s(&self, q: Quaternion, n: usize) -> Result<Vec<f64>> {
        self.check_index(n)?;
        Ok((0..=n).map(|k| self.term_s(k, q).op_norm()).collect())
    }

    /// Finite expansion through index `2N + 1` against the exact remainder
    /// `Q^{N+1} S_q^{-1} △_{q0}(q)^{N+1}`.
    pub fn remainder_exact(&self, q: Quaternion, n: usize) -> Result<RemainderCheck> {
        self.check_index(2 * n + 1)?;
        let direct = resolvent_bundle(&self.a, q)?.s_left;
        let partial = (0..=2 * n + 1).fold(QMatrix::zeros(self.a.dim()), |acc, k| &acc + &self.term_s(k, q));
        let h = triangle(self.q0, q);
        let rem = (&self.bundle0.pseudo.powi(n as u32 + 1) * &direct).scale_right(h.powi(n as u32 + 1));
        let remainder = rem.op_norm();
        let gap = (&direct - &partial).op_norm();
        let identity = (&(&partial + &rem) - &direct).op_norm();
        let norm_direct = direct.op_norm();
        let scale = norm_direct + partial.op_norm() + remainder;
        let bound = norm_direct * (h.norm() * self.norm_q()).powi(n as i32 + 1);
        Ok(RemainderCheck { remainder, gap, identity, scale, bound })
    }

    /// Automatic S-series evaluation compared with the direct resolvent at `q`.
    pub fn report(&self, q: Quaternion, rtol: f64) -> Result<SeriesReport> {
        let eval = self.eval_s_auto(q, rtol)?;
        let direct = resolvent_bundle(&self.a, q)?.s_left;
        Ok(SeriesReport {
            q0: self.q0,
            radius: self.radius,
            q,
            n: eval.n,
            tail_bound: eval.tail_bound,
            residual_vs_direct: (&eval.sum - &direct).op_norm(),
            converged: eval.converged,
        })
    }

    /// Per-index truncation rows `(N, tail bound, ‖partial − S_q^{-1}‖)` for `N = 0..=n`.
    pub fn trace(&self, q: Quaternion, n: usize) -> Result<Vec<TraceRow>> {
        self.check_index(n)?;
        self.rho(q)?;
        let direct = resolvent_bundle(&self.a, q)?.s_left;
        let mut sum = QMatrix::zeros(self.a.dim());
        (0..=n)
            .map(|k| {
                let term = self.term_s(k, q);
                sum = &sum + &term;
                Ok(TraceRow {
                    n: k,
                    term_norm: term.op_norm(),
                    tail_bound: self.tail_bound_s(q, k)?,
                    residual_vs_direct: (&sum - &direct).op_norm(),
                })
            })
            .collect()
    }
}

/// Norms around the finite expansion identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderCheck {
    /// `‖Q^{N+1} S_q^{-1} △^{N+1}‖`.
    pub remainder: f64,
    /// `‖S_q^{-1} − partial‖`.
    pub gap: f64,
    /// `‖partial + remainder − S_q^{-1}‖`.
    pub identity: f64,
    pub scale: f64,
    /// `‖S_q^{-1}‖ (‖Q‖|△|)^{N+1}`.
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub q0: Quaternion,
    #[serde(rename = "R")]
    pub radius: f64,
    pub q: Quaternion,
    #[serde(rename = "N")]
    pub n: usize,
    pub tail_bound: f64,
    pub residual_vs_direct: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub term_norm: f64,
    pub tail_bound: f64,
    pub residual_vs_direct: f64,
}
