//! Pure states, density operators and the two one-parameter families.
//!
//! Composite basis states are indexed row-major: `|ij⟩ ↔ i·d_b + j`. Photon
//! polarisation labels map as `H ↔ 0`, `V ↔ 1`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Complex, ComplexMatrix, Subsystem, ONE, PSD_TOL, ZERO};

const NORM_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;

/// Largest local dimension of an isotropic state (`d² ≤ 64`).
pub const MAX_LOCAL_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// Wraps `|ψ⟩⟨ψ|` as a bipartite density operator.
    pub fn density(&self, d_a: usize, d_b: usize) -> Result<DensityOperator> {
        DensityOperator::new(self.projector(), d_a, d_b)
    }
}

/// The four two-qubit Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] =
        [BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus];

    pub fn label(self) -> &'static str {
        match self {
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
        }
    }

    pub fn state(self) -> PureState {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        let amplitudes = match self {
            BellState::PsiPlus => [ZERO, h, h, ZERO],
            BellState::PsiMinus => [ZERO, h, -h, ZERO],
            BellState::PhiPlus => [h, ZERO, ZERO, h],
            BellState::PhiMinus => [h, ZERO, ZERO, -h],
        };
        PureState { amplitudes: amplitudes.to_vec() }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // accept the unicode minus as well as ASCII
        match s.trim().to_ascii_lowercase().replace('\u{2212}', "-").as_str() {
            "psi+" => Ok(BellState::PsiPlus),
            "psi-" => Ok(BellState::PsiMinus),
            "phi+" => Ok(BellState::PhiPlus),
            "phi-" => Ok(BellState::PhiMinus),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Bell state by label (`psi+`, `psi-`, `phi+`, `phi-`).
pub fn bell(which: &str) -> Result<PureState> {
    Ok(which.parse::<BellState>()?.state())
}

/// `(|000⟩ + |111⟩)/√2` with qubit order A, B, C.
pub fn ghz() -> PureState {
    let mut amplitudes = vec![ZERO; 8];
    amplitudes[0] = Complex::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[7] = Complex::new(FRAC_1_SQRT_2, 0.0);
    PureState { amplitudes }
}

/// The two-qubit basis `{|ψ−⟩, |ψ+⟩, |00⟩, |11⟩}` in that order.
pub fn mixed_basis() -> [PureState; 4] {
    [BellState::PsiMinus.state(), BellState::PsiPlus.state(), PureState::basis(4, 0), PureState::basis(4, 3)]
}

/// `|φ+⟩ = Σᵢ |ii⟩/√d`.
pub fn max_entangled(d: usize) -> PureState {
    let amp = Complex::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut amplitudes = vec![ZERO; d * d];
    for i in 0..d {
        amplitudes[i * d + i] = amp;
    }
    PureState { amplitudes }
}

/// A validated bipartite density matrix on `C^{d_a} ⊗ C^{d_b}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    d_a: usize,
    d_b: usize,
}

impl DensityOperator {
    /// Checks dimensions, Hermiticity (1e-10), unit trace (1e-10) and that the
    /// smallest eigenvalue is at least -1e-10. The stored matrix is the
    /// Hermitian part of the input.
    pub fn new(matrix: ComplexMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 || d_a * d_b != matrix.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not {d_a} ⊗ {d_b}",
                matrix.dim(),
                matrix.dim()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let matrix = matrix.hermitian_part();
        let eig = linalg::eig_hermitian(&matrix)?;
        let smallest = *eig.values.last().expect("non-empty spectrum");
        if smallest < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(smallest));
        }
        Ok(Self { matrix, d_a, d_b })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Reduced state of subsystem `keep`.
    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        linalg::partial_trace(&self.matrix, self.d_a, self.d_b, keep)
            .expect("dimensions validated at construction")
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(linalg::eig_hermitian(&self.matrix)?.values)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).expect("square").trace().re
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

fn check_parameter(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfDomain { name: "p", value: p });
    }
    Ok(())
}

/// `p·|ψ−⟩⟨ψ−| + (1−p)·I₄/4`.
pub fn werner(p: f64) -> Result<DensityOperator> {
    check_parameter(p)?;
    let singlet = BellState::PsiMinus.state().projector().scale_real(p);
    let noise = ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    DensityOperator::new(singlet.add(&noise)?, 2, 2)
}

/// `p·|φ+⟩⟨φ+| + (1−p)·I_{d²}/d²` for `2 ≤ d ≤ 8`.
pub fn isotropic(d: usize, p: f64) -> Result<DensityOperator> {
    if !(2..=MAX_LOCAL_DIM).contains(&d) {
        return Err(Error::ParameterOutOfDomain { name: "d", value: d as f64 });
    }
    check_parameter(p)?;
    let n = d * d;
    let pure = max_entangled(d).projector().scale_real(p);
    let noise = ComplexMatrix::identity(n).scale_real((1.0 - p) / n as f64);
    DensityOperator::new(pure.add(&noise)?, d, d)
}

/// A one-parameter state family on `p ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateFamily {
    Werner,
    Isotropic { d: usize },
}

impl StateFamily {
    pub fn isotropic(d: usize) -> Result<Self> {
        if !(2..=MAX_LOCAL_DIM).contains(&d) {
            return Err(Error::ParameterOutOfDomain { name: "d", value: d as f64 });
        }
        Ok(StateFamily::Isotropic { d })
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Werner => "werner",
            StateFamily::Isotropic { .. } => "isotropic",
        }
    }

    /// Local dimension of each party.
    pub fn local_dim(&self) -> usize {
        match *self {
            StateFamily::Werner => 2,
            StateFamily::Isotropic { d } => d,
        }
    }

    pub fn evaluate(&self, p: f64) -> Result<DensityOperator> {
        match *self {
            StateFamily::Werner => werner(p),
            StateFamily::Isotropic { d } => isotropic(d, p),
        }
    }

    /// Parses a family name; `d` is required for `isotropic` and must be 2 or
    /// absent for `werner`.
    pub fn from_name(name: &str, d: Option<usize>) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "werner" => match d {
                None | Some(2) => Ok(StateFamily::Werner),
                Some(other) => Err(Error::ParameterOutOfDomain { name: "d", value: other as f64 }),
            },
            "isotropic" | "iso" => StateFamily::isotropic(d.unwrap_or(3)),
            _ => Err(Error::UnknownLabel(name.to_string())),
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFamily::Werner => f.write_str("werner"),
            StateFamily::Isotropic { d } => write!(f, "isotropic-{d}"),
        }
    }
}
