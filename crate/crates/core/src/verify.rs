//! Randomized identity suite.
//!
//! Each trial draws a matrix and resolvent points from its own seeded stream and
//! records the relative residual of every identity; the suite reports the maximum
//! per identity together with the trial that attained it.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmat::QMatrix;
use crate::quat::Quaternion;
use crate::random::{random_qmatrix, random_quaternion, trial_rng, TrialRng};
use crate::resolvent::{
    as_identity_from, mixed_eq_from, q_eq_from, residual_aq_commute, residual_q_commute,
    residual_q_from_s, resolvent_bundle, resolvent_eq_from, ResolventBundle,
};
use crate::series::series_init;
use crate::slice::{sderiv_operator, SResolventFn};
use crate::spectrum::{cor1_check, real_resolvent_point, sample_at_distance};

/// Identity names in report order.
pub const IDENTITIES: [&str; 13] = [
    "resolvent_equation",
    "q_equation_pq",
    "q_equation_qp",
    "mixed_equation",
    "as_identity",
    "q_commute",
    "aq_commute",
    "q_from_s",
    "q_series",
    "s_series",
    "cassini_bound",
    "sderiv_s_resolvent",
    "finite_expansion",
];

/// Truncation rule tolerance used for the series identities.
const SERIES_RTOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub identity: String,
    pub max_relative: f64,
    pub worst_trial: usize,
}

/// Point of `ρ_S(A)` with a nonzero imaginary part, drawn with components in `[-scale, scale]`.
pub fn random_resolvent_point(rng: &mut TrialRng, a: &QMatrix, scale: f64) -> Result<(Quaternion, ResolventBundle)> {
    for _ in 0..1000 {
        let q = random_quaternion(rng, scale);
        if q.im_norm() < 1e-3 {
            continue;
        }
        if let Ok(b) = resolvent_bundle(a, q) {
            return Ok((q, b));
        }
    }
    Err(Error::DegenerateConfiguration("no resolvent point found after 1000 draws".into()))
}

/// Relative residuals of one trial, in the order of [`IDENTITIES`].
pub fn trial_residuals(a: &QMatrix, rng: &mut TrialRng) -> Result<Vec<f64>> {
    let scale = 1.0 + a.op_norm();
    let (p, bp) = random_resolvent_point(rng, a, scale)?;
    let (q, bq) = loop {
        let (q, bq) = random_resolvent_point(rng, a, scale)?;
        if !q.same_sphere(p) {
            break (q, bq);
        }
    };
    let (qpq, qqp) = q_eq_from(a, &bp, &bq);
    let mut out = vec![
        resolvent_eq_from(&bp, &bq).relative(),
        qpq.relative(),
        qqp.relative(),
        mixed_eq_from(&bp, &bq)?.relative(),
        as_identity_from(a, &bp).relative(),
        residual_q_commute(a, p, q)?.relative(),
        residual_aq_commute(a, q)?.relative(),
        residual_q_from_s(a, q)?.relative(),
    ];

    let q0 = real_resolvent_point(a)?;
    let st = series_init(a, q0, crate::series::DEFAULT_NMAX)?;
    let qs = sample_at_distance(rng, q0, 0.5 * st.radius);
    let direct = resolvent_bundle(a, qs)?;
    let qser = st.eval_q_auto(qs, SERIES_RTOL)?;
    out.push((&qser.sum - &direct.pseudo).op_norm() / direct.norm_pseudo);
    let sser = st.eval_s_auto(qs, SERIES_RTOL)?;
    out.push((&sser.sum - &direct.s_left).op_norm() / direct.s_left.op_norm());

    let (u, bound) = cor1_check(a, q0)?;
    out.push(((bound - u) / bound).max(0.0));

    let d = sderiv_operator(&SResolventFn { a: a.clone() }, q)?;
    out.push((&d + &bq.pseudo).op_norm() / (d.op_norm() + bq.norm_pseudo));

    let frac = rng.random_range(0.1..0.9);
    let qr = sample_at_distance(rng, q0, frac * st.radius);
    let mut worst: f64 = 0.0;
    for n in 0..=6 {
        let rc = st.remainder_exact(qr, n)?;
        worst = worst.max(rc.identity / rc.scale);
    }
    out.push(worst);
    Ok(out)
}

/// Runs `trials` independent trials on `n × n` matrices; trial `t` uses stream `t` of `seed`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<IdentityResult>> {
    if cfg.trials == 0 || cfg.n == 0 {
        return Err(Error::InvalidInput("the suite needs n ≥ 1 and at least one trial".into()));
    }
    let rows: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let a = random_qmatrix(&mut rng, cfg.n);
            trial_residuals(&a, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(IDENTITIES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let (worst_trial, max_relative) = rows
                .iter()
                .map(|r| r[k])
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (t, v)| if v > best.1 { (t, v) } else { best });
            IdentityResult { identity: name.to_string(), max_relative, worst_trial }
        })
        .collect())
}
