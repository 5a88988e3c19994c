//! Dense complex linear algebra for the small matrices used throughout the
//! crate (composite dimension at most [`MAX_DIM`]).
//!
//! Storage is row-major. All operations are pure and return new values.

use std::fmt;

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Largest side length any constructed matrix may have.
pub const MAX_DIM: usize = 64;

/// Largest tolerated `|a(i,j) - conj(a(j,i))|` for input to [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_TOL, 0)` are rounding noise and clamp to zero.
pub const PSD_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

/// Which factor of a bipartite system to keep in [`partial_trace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("matrix side must be positive".into()));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { Complex::new(values[i], 0.0) } else { ZERO })
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    pub fn outer(v: &[Complex]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex) {
        self.entries[i * self.dim + j] = value;
    }

    fn check_same_dim(&self, other: &Self, op: &str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{op} of {}x{} and {}x{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "product")?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "sum")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "difference")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex::new(factor, 0.0))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus, `‖A‖∞` over entries.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff needs equal dimensions");
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |a(i,j) - conj(a(j,i))|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    /// `A · v` for a column vector `v`.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.dim,
                self.dim,
                v.len()
            )));
        }
        Ok((0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum()).collect())
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, unitary: &Self) -> Result<Self> {
        unitary.matmul(self)?.matmul(&unitary.dagger())
    }

    /// Column `k` as a vector.
    pub fn column(&self, k: usize) -> Vec<Complex> {
        (0..self.dim).map(|i| self.get(i, k)).collect()
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product with the default [`MAX_DIM`] cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, MAX_DIM)
}

/// Kronecker product; entry `(i·m + k, j·m + l)` is `a(i,j)·b(k,l)` where
/// `m = b.dim()`.
pub fn kron_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max_dim: usize) -> Result<ComplexMatrix> {
    let m = b.dim;
    let dim = a.dim.saturating_mul(m);
    if dim > max_dim {
        return Err(Error::DimensionTooLarge { dim, max: max_dim });
    }
    Ok(ComplexMatrix::from_fn(dim, |r, c| a.get(r / m, c / m) * b.get(r % m, c % m)))
}

/// Kronecker product of column vectors.
pub fn kron_vec(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Reduces `rho` on `C^{d_a} ⊗ C^{d_b}` to the subsystem selected by `keep`.
pub fn partial_trace(rho: &ComplexMatrix, d_a: usize, d_b: usize, keep: Subsystem) -> Result<ComplexMatrix> {
    if d_a == 0 || d_b == 0 || d_a * d_b != rho.dim {
        return Err(Error::DimensionMismatch(format!(
            "cannot split a {}x{} matrix into {d_a} ⊗ {d_b}",
            rho.dim, rho.dim
        )));
    }
    Ok(match keep {
        Subsystem::A => {
            ComplexMatrix::from_fn(d_a, |i, j| (0..d_b).map(|k| rho.get(i * d_b + k, j * d_b + k)).sum())
        }
        Subsystem::B => {
            ComplexMatrix::from_fn(d_b, |k, l| (0..d_a).map(|i| rho.get(i * d_b + k, i * d_b + l)).sum())
        }
    })
}

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending. Column
/// `k` of `vectors` belongs to `values[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenResult {
    /// `max_k ‖A v_k − λ_k v_k‖∞`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            let av = a.apply(&v).expect("eigenvectors match matrix dimension");
            for (x, y) in av.iter().zip(&v) {
                worst = worst.max((x - y * lambda).norm());
            }
        }
        worst
    }

    /// `max |V†V − I|` entrywise.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.vectors.dagger().matmul(&self.vectors).expect("square eigenvector matrix");
        gram.max_abs_diff(&ComplexMatrix::identity(gram.dim()))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrised as `(A + A†)/2` after the Hermiticity check.
/// Sweeps stop once the off-diagonal Frobenius mass falls below `1e-14`
/// (relative to `max(1, ‖A‖_F)`).
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<EigenResult> {
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.dim;
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let stop = JACOBI_TOL * m.frobenius_norm().max(1.0);

    let off_mass = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_mass(&m) >= stop {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigensolverStalled(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    Ok(EigenResult { values, vectors })
}

/// One Jacobi rotation annihilating `m(p,q)`. `U = D·J` with
/// `D = diag(1, e^{-iφ})` removing the phase of `m(p,q)` and `J` the real
/// rotation of the resulting symmetric 2×2 block; `m ← U† m U`, `v ← v U`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let upp = Complex::new(c, 0.0);
    let upq = Complex::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    let n = m.dim;
    // m ← m U
    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, mkp * upp + mkq * uqp);
        m.set(k, q, mkp * upq + mkq * uqq);
    }
    // m ← U† m
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, upp.conj() * mpk + uqp.conj() * mqk);
        m.set(q, k, upq.conj() * mpk + uqq.conj() * mqk);
    }
    m.set(p, q, ZERO);
    m.set(q, p, ZERO);
    m.set(p, p, Complex::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex::new(m.get(q, q).re, 0.0));
    // v ← v U
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * upp + vkq * uqp);
        v.set(k, q, vkp * upq + vkq * uqq);
    }
}

/// Eigenvalues of a density matrix ready for entropy sums: descending, with
/// values in `[-PSD_TOL, 0)` clamped to zero.
pub fn entropy_spectrum(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    let eig = eig_hermitian(rho)?;
    eig.values
        .into_iter()
        .map(|x| {
            if x >= 0.0 {
                Ok(x)
            } else if x >= -PSD_TOL {
                Ok(0.0)
            } else {
                Err(Error::NotPositiveSemidefinite(x))
            }
        })
        .collect()
}

/// Unitary function of a Hermitian matrix, `V f(Λ) V†`.
pub fn hermitian_map(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(a)?;
    let mapped: Vec<f64> = eig.values.iter().map(|&x| f(x)).collect();
    let d = ComplexMatrix::diag(&mapped);
    eig.vectors.matmul(&d)?.matmul(&eig.vectors.dagger())
}
