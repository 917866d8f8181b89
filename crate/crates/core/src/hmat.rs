//! Quaternionic matrices acting as bounded right-linear operators on `H^n`.
//!
//! Products, sums and scalar actions are carried out in quaternion arithmetic.
//! Inversion, operator norms and singular values go through the complex adjoint
//! representation `chi`, pinned to the convention
//!
//! ```text
//! A = A1 + A2 j,   vec(α + βj) = (α, β̄),   chi(A) = [[A1, −A2], [conj(A2), conj(A1)]]
//! ```
//!
//! under which `chi(A)·vec(x) = vec(Ax)` holds exactly and `vec` is an isometry.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Relative singularity threshold: `σ_min ≤ SINGULAR_RTOL · σ_max` is singular.
pub const SINGULAR_RTOL: f64 = 1e-10;

/// Column vector in `H^n` with componentwise left and right scalar actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HVector(pub Vec<Quaternion>);

impl HVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Quaternion::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale_right(&self, q: Quaternion) -> Self {
        Self(self.0.iter().map(|&x| x * q).collect())
    }

    pub fn scale_left(&self, q: Quaternion) -> Self {
        Self(self.0.iter().map(|&x| q * x).collect())
    }

    /// `(α, β̄)` with `x_i = α_i + β_i j`.
    pub fn to_complex(&self) -> DVector<Complex64> {
        let n = self.len();
        DVector::from_fn(2 * n, |r, _| {
            if r < n {
                Complex64::new(self.0[r].w, self.0[r].x)
            } else {
                let q = self.0[r - n];
                Complex64::new(q.y, -q.z)
            }
        })
    }

    pub fn from_complex(v: &DVector<Complex64>) -> Result<Self> {
        if v.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!("complex vector of odd length {}", v.len())));
        }
        let n = v.len() / 2;
        Ok(Self(
            (0..n)
                .map(|i| {
                    let a = v[i];
                    let b = v[n + i].conj();
                    Quaternion::new(a.re, a.im, b.re, b.im)
                })
                .collect(),
        ))
    }
}

/// Dense `n × n` quaternionic matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Quaternion::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Quaternion::ONE)
    }

    /// `q·I`.
    pub fn scalar(n: usize, q: Quaternion) -> Self {
        Self::diag(&vec![q; n])
    }

    pub fn diag(d: &[Quaternion]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &q) in d.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                data.push(f(i, k));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<Quaternion>> {
        self.data.chunks(self.n.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    /// `(Ax)_i = Σ_k A_ik x_k`.
    pub fn matvec(&self, x: &HVector) -> Result<HVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        Ok(HVector(
            (0..self.n)
                .map(|i| {
                    (0..self.n).fold(Quaternion::ZERO, |acc, k| acc + self[(i, k)] * x.0[k])
                })
                .collect(),
        ))
    }

    /// Operator `A q : x ↦ A(qx)`, i.e. entries `A_ik·q`.
    pub fn scale_right(&self, q: Quaternion) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&a| a * q).collect() }
    }

    /// Operator `q A : x ↦ q(Ax)`, i.e. entries `q·A_ik`.
    pub fn scale_left(&self, q: Quaternion) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&a| q * a).collect() }
    }

    pub fn scale_real(&self, r: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&a| a * r).collect() }
    }

    /// Quaternionic conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, k| self[(k, i)].conj())
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Largest entrywise quaternion modulus; cheap scale indicator, not a norm of `A`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Complex adjoint representation `chi(A)`.
    pub fn chi(&self) -> ComplexRep {
        let n = self.n;
        let m = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            let (bi, i) = (r / n, r % n);
            let (bk, k) = (c / n, c % n);
            let q = self[(i, k)];
            let a1 = Complex64::new(q.w, q.x);
            let a2 = Complex64::new(q.y, q.z);
            match (bi, bk) {
                (0, 0) => a1,
                (0, _) => -a2,
                (_, 0) => a2.conj(),
                _ => a1.conj(),
            }
        });
        ComplexRep(m)
    }

    /// Singular values of `chi(A)`, descending. Each appears twice.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.n == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self.chi().0.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// `‖A‖ = sup{‖Ax‖ : ‖x‖ ≤ 1}`, the largest singular value of `chi(A)`.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value of `chi(A)`; zero iff `A` is not invertible.
    pub fn smallest_singular(&self) -> f64 {
        self.singular_values().last().copied().unwrap_or(0.0)
    }

    /// `(σ_min, σ_max)` from a single decomposition.
    pub fn singular_range(&self) -> (f64, f64) {
        let sv = self.singular_values();
        (sv.last().copied().unwrap_or(0.0), sv.first().copied().unwrap_or(0.0))
    }

    /// Two-sided inverse through `chi`.
    ///
    /// Refuses operators with `σ_min ≤ 1e-10·σ_max`.
    pub fn inverse(&self) -> Result<Self> {
        let (smin, smax) = self.singular_range();
        if !(smin > SINGULAR_RTOL * smax) {
            return Err(Error::SingularOperator { smallest_singular: smin });
        }
        let inv = self
            .chi()
            .0
            .try_inverse()
            .ok_or(Error::SingularOperator { smallest_singular: smin })?;
        ComplexRep(inv).to_qmatrix()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.n, other.n, "quaternionic matrix dimension mismatch");
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, k): (usize, usize)) -> &Quaternion {
        &self.data[i * self.n + k]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    #[inline]
    fn index_mut(&mut self, (i, k): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.n + k]
    }
}

impl<'a> Add<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        self.check_dim(o);
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        self.check_dim(o);
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a - b).collect() }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.scale_real(-1.0)
    }
}

impl<'a> Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        self.check_dim(o);
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                for k in 0..n {
                    out.data[i * n + k] += a * o.data[l * n + k];
                }
            }
        }
        out
    }
}

impl Add for QMatrix {
    type Output = QMatrix;
    fn add(self, o: QMatrix) -> QMatrix {
        &self + &o
    }
}

impl Sub for QMatrix {
    type Output = QMatrix;
    fn sub(self, o: QMatrix) -> QMatrix {
        &self - &o
    }
}

impl Mul for QMatrix {
    type Output = QMatrix;
    fn mul(self, o: QMatrix) -> QMatrix {
        &self * &o
    }
}

/// Wire form `{"n": int, "entries": [[[w,x,y,z], …], …]}`, row-major.
#[derive(Serialize, Deserialize)]
struct QMatrixJson {
    n: usize,
    entries: Vec<Vec<Quaternion>>,
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QMatrixJson { n: self.n, entries: self.rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = QMatrixJson::deserialize(d)?;
        if raw.n == 0 {
            return Err(D::Error::custom("matrix dimension n must be at least 1"));
        }
        if raw.entries.len() != raw.n {
            return Err(D::Error::custom(format!(
                "declared n = {} but found {} rows",
                raw.n,
                raw.entries.len()
            )));
        }
        let m = QMatrix::from_rows(raw.entries).map_err(D::Error::custom)?;
        if !m.is_finite() {
            return Err(D::Error::custom("matrix entries must be finite"));
        }
        Ok(m)
    }
}

/// `chi(A)`, a `2n × 2n` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRep(pub DMatrix<Complex64>);

impl ComplexRep {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Maps a chi-image back to its quaternionic matrix, averaging the two
    /// redundant copies of each block.
    pub fn to_qmatrix(&self) -> Result<QMatrix> {
        let m = &self.0;
        if m.nrows() != m.ncols() || m.nrows() % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "{}x{} is not the shape of a complex adjoint representation",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows() / 2;
        Ok(QMatrix::from_fn(n, |i, k| {
            let a1 = (m[(i, k)] + m[(n + i, n + k)].conj()) * 0.5;
            let a2 = (m[(n + i, k)].conj() - m[(i, n + k)]) * 0.5;
            Quaternion::new(a1.re, a1.im, a2.re, a2.im)
        }))
    }

    /// Eigenvalues from a complex Schur decomposition.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        if self.dim() == 0 {
            return Ok(Vec::new());
        }
        let schur = self.0.clone().schur();
        let ev = schur
            .eigenvalues()
            .ok_or_else(|| Error::InvalidInput("Schur decomposition did not converge".into()))?;
        Ok(ev.iter().copied().collect())
    }
}
