//! The pencil `Δ_q(A)`, the pseudo-resolvent `Q_q(A)`, left and right S-resolvents,
//! and residual evaluators for the operator identities relating them.
//!
//! Residuals are absolute operator norms paired with a scale (the sum of the norms
//! of the terms involved) so that callers can form relative residuals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmat::{QMatrix, SINGULAR_RTOL};
use crate::quat::{triangle, Quaternion};

/// `Δ_q(A) = A² − 2Re(q)A + |q|²I`.
pub fn delta_op(a: &QMatrix, q: Quaternion) -> QMatrix {
    let n = a.dim();
    let a2 = a * a;
    &(&a2 - &a.scale_real(2.0 * q.re())) + &QMatrix::scalar(n, Quaternion::real(q.norm_sqr()))
}

/// Operators attached to a point `q` of the S-resolvent set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolventBundle {
    pub q: Quaternion,
    /// `Q_q(A) = Δ_q(A)^{-1}`.
    #[serde(rename = "Q")]
    pub pseudo: QMatrix,
    /// `S_q^{-1}(A) = Q_q(A)q̄ − A Q_q(A)`.
    #[serde(rename = "S_left")]
    pub s_left: QMatrix,
    /// `S_{R,q}^{-1}(A) = (q̄I − A)Q_q(A)`.
    #[serde(rename = "S_right")]
    pub s_right: QMatrix,
    #[serde(rename = "norm_Q")]
    pub norm_pseudo: f64,
}

/// Builds the bundle, refusing `q` when `σ_min(Δ_q(A)) ≤ 1e-10·‖Δ_q(A)‖`.
pub fn resolvent_bundle(a: &QMatrix, q: Quaternion) -> Result<ResolventBundle> {
    let delta = delta_op(a, q);
    let (smin, smax) = delta.singular_range();
    if !(smin > SINGULAR_RTOL * smax) {
        return Err(Error::NotInResolventSet { q, smallest_singular: smin });
    }
    let pseudo = delta.inverse().map_err(|e| match e {
        Error::SingularOperator { smallest_singular } => {
            Error::NotInResolventSet { q, smallest_singular }
        }
        other => other,
    })?;
    let aq = a * &pseudo;
    let s_left = &pseudo.scale_right(q.conj()) - &aq;
    let s_right = &pseudo.scale_left(q.conj()) - &aq;
    let norm_pseudo = pseudo.op_norm();
    Ok(ResolventBundle { q, pseudo, s_left, s_right, norm_pseudo })
}

/// Absolute residual of an identity and the magnitude of the terms it balances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn new(abs: f64, scale: f64) -> Self {
        Self { abs, scale }
    }

    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.abs / self.scale
        } else {
            self.abs
        }
    }
}

/// `S_p^{-1} − S_q^{-1} = Q_q(q − p) + Q_q S_p^{-1} △_q(p)`.
pub fn residual_resolvent_eq(a: &QMatrix, p: Quaternion, q: Quaternion) -> Result<Residual> {
    let bp = resolvent_bundle(a, p)?;
    let bq = resolvent_bundle(a, q)?;
    Ok(resolvent_eq_from(&bp, &bq))
}

pub(crate) fn resolvent_eq_from(bp: &ResolventBundle, bq: &ResolventBundle) -> Residual {
    let (p, q) = (bp.q, bq.q);
    let tri = triangle(q, p);
    let lhs = &bp.s_left - &bq.s_left;
    let t1 = bq.pseudo.scale_right(q - p);
    let qs = &bq.pseudo * &bp.s_left;
    let t2 = qs.scale_right(tri);
    let abs = (&lhs - &(&t1 + &t2)).op_norm();
    let scale = bp.s_left.op_norm()
        + bq.s_left.op_norm()
        + bq.norm_pseudo * (q - p).norm()
        + qs.op_norm() * tri.norm();
    Residual::new(abs, scale)
}

/// `Q_p − Q_q = (Δ_q − Δ_p)Q_pQ_q = (Δ_q − Δ_p)Q_qQ_p`, one residual per ordering.
pub fn residual_q_eq(a: &QMatrix, p: Quaternion, q: Quaternion) -> Result<(Residual, Residual)> {
    let bp = resolvent_bundle(a, p)?;
    let bq = resolvent_bundle(a, q)?;
    Ok(q_eq_from(a, &bp, &bq))
}

pub(crate) fn q_eq_from(a: &QMatrix, bp: &ResolventBundle, bq: &ResolventBundle) -> (Residual, Residual) {
    let lhs = &bp.pseudo - &bq.pseudo;
    let dd = &delta_op(a, bq.q) - &delta_op(a, bp.q);
    let nd = dd.op_norm();
    let res = |prod: QMatrix| {
        let scale = bp.norm_pseudo + bq.norm_pseudo + nd * prod.op_norm();
        Residual::new((&lhs - &(&dd * &prod)).op_norm(), scale)
    };
    (res(&bp.pseudo * &bq.pseudo), res(&bq.pseudo * &bp.pseudo))
}

/// `S_{R,q}S_{L,p} = [(S_{R,q} − S_{L,p})p − q̄(S_{R,q} − S_{L,p})]·△_q(p)^{-1}`.
pub fn residual_mixed_eq(a: &QMatrix, p: Quaternion, q: Quaternion) -> Result<Residual> {
    let tri = triangle(q, p);
    if p.same_sphere(q) || tri.norm() == 0.0 {
        return Err(Error::DegenerateConfiguration(format!(
            "{p} lies on the sphere of {q}, so △_q(p) = 0"
        )));
    }
    let bp = resolvent_bundle(a, p)?;
    let bq = resolvent_bundle(a, q)?;
    mixed_eq_from(&bp, &bq)
}

pub(crate) fn mixed_eq_from(bp: &ResolventBundle, bq: &ResolventBundle) -> Result<Residual> {
    let (p, q) = (bp.q, bq.q);
    let tri_inv = triangle(q, p).inv()?;
    let lhs = &bq.s_right * &bp.s_left;
    let d = &bq.s_right - &bp.s_left;
    let inner = &d.scale_right(p) - &d.scale_left(q.conj());
    let rhs = inner.scale_right(tri_inv);
    let scale = lhs.op_norm() + d.op_norm() * (p.norm() + q.norm()) * tri_inv.norm();
    Ok(Residual::new((&lhs - &rhs).op_norm(), scale))
}

/// `A S_p^{-1} = S_p^{-1} p − I`.
pub fn residual_as_identity(a: &QMatrix, p: Quaternion) -> Result<Residual> {
    let bp = resolvent_bundle(a, p)?;
    Ok(as_identity_from(a, &bp))
}

pub(crate) fn as_identity_from(a: &QMatrix, bp: &ResolventBundle) -> Residual {
    let as_ = a * &bp.s_left;
    let sp = bp.s_left.scale_right(bp.q);
    let r = &(&as_ - &sp) + &QMatrix::identity(a.dim());
    let scale = as_.op_norm() + bp.s_left.op_norm() * bp.q.norm() + 1.0;
    Residual::new(r.op_norm(), scale)
}

/// `Q_pQ_q = Q_qQ_p`.
pub fn residual_q_commute(a: &QMatrix, p: Quaternion, q: Quaternion) -> Result<Residual> {
    let bp = resolvent_bundle(a, p)?;
    let bq = resolvent_bundle(a, q)?;
    let pq = &bp.pseudo * &bq.pseudo;
    let qp = &bq.pseudo * &bp.pseudo;
    let scale = pq.op_norm() + qp.op_norm();
    Ok(Residual::new((&pq - &qp).op_norm(), scale))
}

/// `A Q_q = Q_q A`.
pub fn residual_aq_commute(a: &QMatrix, q: Quaternion) -> Result<Residual> {
    let b = resolvent_bundle(a, q)?;
    let aq = a * &b.pseudo;
    let qa = &b.pseudo * a;
    let scale = aq.op_norm() + qa.op_norm();
    Ok(Residual::new((&aq - &qa).op_norm(), scale))
}

/// For non-real `q`: `Q_q = (S_{q̄}^{-1} − S_q^{-1})(q − q̄)^{-1}`.
pub fn residual_q_from_s(a: &QMatrix, q: Quaternion) -> Result<Residual> {
    if q.is_real() {
        return Err(Error::DegenerateConfiguration(format!("{q} is real, so q − q̄ = 0")));
    }
    let bq = resolvent_bundle(a, q)?;
    let bc = resolvent_bundle(a, q.conj())?;
    let w = (q - q.conj()).inv()?;
    let rhs = (&bc.s_left - &bq.s_left).scale_right(w);
    let scale = bq.norm_pseudo + (bc.s_left.op_norm() + bq.s_left.op_norm()) * w.norm();
    Ok(Residual::new((&bq.pseudo - &rhs).op_norm(), scale))
}
