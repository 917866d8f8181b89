//! S-spectrum, Cassini distances and the localization consequences of the
//! series expansion.
//!
//! The spectrum is read off the eigenvalues of `chi(A)`: each eigenvalue `λ` of a
//! quaternionic matrix contributes the pair `λ, λ̄` to `chi(A)`, and the S-spectrum
//! is the union of the spheres `Re λ + |Im λ|·S`. The defining criterion
//! (`Δ_q(A)` not invertible) is kept as an independent oracle.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmat::{QMatrix, SINGULAR_RTOL};
use crate::quat::{cassini_u, CassiniBall, Quaternion, SpherePoint};
use crate::random::random_unit_imaginary;
use crate::resolvent::{delta_op, resolvent_bundle};

/// One sphere `r + sS` of the S-spectrum with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSphere {
    pub r: f64,
    pub s: f64,
    pub mult: usize,
}

impl SpectralSphere {
    pub fn sphere(&self) -> SpherePoint {
        SpherePoint::new(self.r, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub spheres: Vec<SpectralSphere>,
}

impl SpectrumResult {
    pub fn total_multiplicity(&self) -> usize {
        self.spheres.iter().map(|s| s.mult).sum()
    }

    /// Whether `q` lies on a listed sphere within `tol` in `(Re, |Im|)`.
    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        let sp = q.sphere();
        self.spheres.iter().any(|s| s.sphere().matches(sp, tol))
    }
}

/// Spheres `(Re λ, |Im λ|)` over the eigenvalues of `chi(A)`, merged when both
/// coordinates agree to `1e-8·(1 + ‖A‖)`, sorted by `(r, s)`.
pub fn s_spectrum(a: &QMatrix) -> Result<SpectrumResult> {
    let eig = a.chi().eigenvalues()?;
    let tol = 1e-8 * (1.0 + a.op_norm());
    Ok(SpectrumResult { spheres: cluster_spheres(&eig, tol) })
}

fn cluster_spheres(eig: &[Complex64], tol: f64) -> Vec<SpectralSphere> {
    let mut pts: Vec<(f64, f64)> = eig.iter().map(|l| (l.re, l.im.abs())).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    // (sum r, sum s, count)
    let mut clusters: Vec<(f64, f64, usize)> = Vec::new();
    for (r, s) in pts {
        let hit = clusters.iter_mut().find(|(sr, ss, c)| {
            let n = *c as f64;
            (sr / n - r).abs() <= tol && (ss / n - s).abs() <= tol
        });
        match hit {
            Some(cl) => {
                cl.0 += r;
                cl.1 += s;
                cl.2 += 1;
            }
            None => clusters.push((r, s, 1)),
        }
    }
    let mut spheres: Vec<SpectralSphere> = clusters
        .into_iter()
        .map(|(sr, ss, c)| {
            let n = c as f64;
            // + 0.0 turns -0.0 into 0.0
            SpectralSphere { r: sr / n + 0.0, s: ss / n + 0.0, mult: c.div_ceil(2) }
        })
        .collect();
    spheres.sort_by(|a, b| a.r.total_cmp(&b.r).then(a.s.total_cmp(&b.s)));
    spheres
}

/// `q ∈ ρ_S(A)`: `σ_min(Δ_q(A)) > 1e-10·‖Δ_q(A)‖`.
pub fn in_resolvent(a: &QMatrix, q: Quaternion) -> bool {
    let (smin, smax) = delta_op(a, q).singular_range();
    smin > SINGULAR_RTOL * smax
}

/// `u(q0, σ_S(A)) = min over spheres of sqrt(|△_p(q0)|)`; `+∞` for an empty list.
pub fn cassini_dist(q0: Quaternion, spec: &SpectrumResult) -> f64 {
    spec.spheres
        .iter()
        .map(|s| cassini_u(q0, s.sphere().representative()))
        .fold(f64::INFINITY, f64::min)
}

/// `(u(q0, σ_S(A)), ‖Q_{q0}(A)‖^{-1/2})`; the first is never below the second.
pub fn cor1_check(a: &QMatrix, q0: Quaternion) -> Result<(f64, f64)> {
    let bundle = resolvent_bundle(a, q0)?;
    let spec = s_spectrum(a)?;
    Ok((cassini_dist(q0, &spec), bundle.norm_pseudo.powf(-0.5)))
}

/// Convergence radius `R = ‖Q_{q0}(A)‖^{-1/2}` as a Cassini ball about `q0`.
pub fn convergence_ball(a: &QMatrix, q0: Quaternion) -> Result<CassiniBall> {
    let bundle = resolvent_bundle(a, q0)?;
    CassiniBall::new(q0, bundle.norm_pseudo.powf(-0.5))
}

/// Real point `2(1 + ‖A‖)`; always in `ρ_S(A)` because `Δ_{q0}(A) = (A − q0)²` with `‖A‖ < q0`.
pub fn real_resolvent_point(a: &QMatrix) -> Result<Quaternion> {
    let q0 = Quaternion::real(2.0 * (1.0 + a.op_norm()));
    if !in_resolvent(a, q0) {
        return Err(Error::NotInResolventSet { q: q0, smallest_singular: delta_op(a, q0).smallest_singular() });
    }
    Ok(q0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupSample {
    pub m: u32,
    pub point: Quaternion,
    pub norm: f64,
}

/// Probes `‖Q_p(A)‖` along `p_m = target + 2^{-m}`, `m = 1..=steps`.
///
/// The path approaches the sphere of `target` along the real direction, so
/// `u(p_m, target) → 0`.
pub fn blowup_probe(a: &QMatrix, target: Quaternion, steps: u32) -> Result<Vec<BlowupSample>> {
    if steps == 0 {
        return Err(Error::InvalidInput("blow-up probe needs at least one step".into()));
    }
    if in_resolvent(a, target) {
        return Err(Error::NotInSpectrum(target));
    }
    (1..=steps)
        .map(|m| {
            let point = target + Quaternion::real((-(m as f64)).exp2());
            let norm = resolvent_bundle(a, point)?.norm_pseudo;
            Ok(BlowupSample { m, point, norm })
        })
        .collect()
}

/// Index from which the probed norms increase strictly to the end.
pub fn increasing_tail_start(samples: &[BlowupSample]) -> usize {
    let mut start = samples.len().saturating_sub(1);
    while start > 0 && samples[start - 1].norm < samples[start].norm {
        start -= 1;
    }
    start
}

/// Complex image `Re(q0) + |Im(q0)| i` of the ball center.
fn planar_center(ball: &CassiniBall) -> (f64, f64) {
    (ball.center.re(), ball.center.im_norm())
}

/// `|(z − z0)(z − z̄0)|` for `z = r + si`.
fn planar_cassini(z0: (f64, f64), r: f64, s: f64) -> f64 {
    let z = Complex64::new(r, s);
    let c = Complex64::new(z0.0, z0.1);
    ((z - c) * (z - c.conj())).norm()
}

/// Sample of `U(q0, frac·R)`: uniform over the planar Cassini region by rejection on
/// its bounding box, lifted to `H` along a uniformly random `J ∈ S`.
pub fn sample_cassini_ball<R: Rng + ?Sized>(rng: &mut R, ball: &CassiniBall, frac: f64) -> Quaternion {
    let z0 = planar_center(ball);
    let rad = frac * ball.radius;
    let r2 = rad * rad;
    loop {
        let r = rng.random_range(z0.0 - rad..=z0.0 + rad);
        let s = rng.random_range(-(z0.1 + rad)..=z0.1 + rad);
        if planar_cassini(z0, r, s) < r2 {
            let unit = random_unit_imaginary(rng);
            return Quaternion::on_slice(r, s, unit);
        }
    }
}

/// Point `q` with `u(q, q0) = dist`, in a random direction of a random slice.
pub fn sample_at_distance<R: Rng + ?Sized>(rng: &mut R, q0: Quaternion, dist: f64) -> Quaternion {
    let z0 = (q0.re(), q0.im_norm());
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let (c, s) = (theta.cos(), theta.sin());
    let target = dist * dist;
    let f = |t: f64| planar_cassini(z0, z0.0 + t * c, z0.1 + t * s);
    let (mut lo, mut hi) = (0.0, 2.0 * z0.1 + dist + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let unit = random_unit_imaginary(rng);
    Quaternion::on_slice(z0.0 + t * c, z0.1 + t * s, unit)
}

/// Boundary of the planar Cassini region `{|(z − z0)(z − z̄0)| < R²}` as closed
/// polylines of `(r, s)` points: one loop when `R > |Im q0|`, otherwise two.
pub fn cassini_boundary(ball: &CassiniBall, points_per_turn: usize) -> Vec<Vec<(f64, f64)>> {
    let (r0, s0) = planar_center(ball);
    let r2 = ball.radius * ball.radius;
    let m = points_per_turn.max(8);
    // (z − r0)² = R² e^{iθ} − s0², followed continuously in θ
    let trace = |turns: usize, sign: f64| {
        let mut prev: Option<Complex64> = None;
        let mut pts = Vec::with_capacity(turns * m + 1);
        for k in 0..turns * m {
            let theta = std::f64::consts::TAU * k as f64 / m as f64;
            let w = Complex64::from_polar(r2, theta) - s0 * s0;
            let mut root = w.sqrt() * sign;
            if let Some(p) = prev {
                if (root - p).norm() > (-root - p).norm() {
                    root = -root;
                }
            }
            prev = Some(root);
            pts.push((r0 + root.re, root.im));
        }
        pts.push(pts[0]);
        pts
    };
    if ball.radius > s0 {
        vec![trace(2, 1.0)]
    } else {
        vec![trace(1, 1.0), trace(1, -1.0)]
    }
}

/// Oracle comparison between the eigenvalue spheres and the `Δ`-singularity criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Largest `σ_min(Δ_p(A)) / (1 + ‖A‖)²` over representatives `p` of listed spheres.
    pub max_sigma_on_spheres: f64,
    pub multiplicity_ok: bool,
}

pub fn oracle_check(a: &QMatrix, spec: &SpectrumResult) -> OracleReport {
    let scale = (1.0 + a.op_norm()).powi(2);
    let max_sigma_on_spheres = spec
        .spheres
        .iter()
        .map(|s| delta_op(a, s.sphere().representative()).smallest_singular() / scale)
        .fold(0.0, f64::max);
    OracleReport { max_sigma_on_spheres, multiplicity_ok: spec.total_multiplicity() == a.dim() }
}
