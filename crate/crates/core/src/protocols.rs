//! Exact density-matrix simulation of superdense coding and of GHZ-controlled
//! dense coding.
//!
//! Nothing here samples: every probability is a trace of a projected density
//! matrix.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, Complex, ComplexMatrix, Subsystem, ONE, ZERO};
use crate::states::{self, BellState, DensityOperator, PureState};

/// Below this a branch is treated as never occurring.
const NEGLIGIBLE: f64 = 1e-15;

/// One of the four two-bit messages `00, 01, 10, 11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Message(u8);

impl Message {
    pub const ALL: [Message; 4] = [Message(0), Message(1), Message(2), Message(3)];

    pub fn new(value: u8) -> Result<Self> {
        if value >= 4 {
            return Err(Error::ParameterOutOfDomain { name: "message", value: value as f64 });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn bits(self) -> String {
        format!("{:02b}", self.0)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits())
    }
}

/// Cliff's measurement basis `{cosθ|0⟩ + sinθ|1⟩, sinθ|0⟩ − cosθ|1⟩}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlBasis {
    theta: f64,
}

impl ControlBasis {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::ParameterOutOfDomain { name: "theta", value: theta });
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The two basis vectors, outcome 0 first.
    pub fn vectors(&self) -> [[Complex; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        [[Complex::new(c, 0.0), Complex::new(s, 0.0)], [Complex::new(s, 0.0), Complex::new(-c, 0.0)]]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOutcome {
    /// Probability that message `m` is sent and correctly decoded, indexed
    /// by message value.
    pub per_message_success: [f64; 4],
    pub success_probability: f64,
    pub shared_state_after_control: Option<DensityOperator>,
}

impl ProtocolOutcome {
    fn from_per_message(per_message_success: [f64; 4], shared: Option<DensityOperator>) -> Self {
        let success_probability = per_message_success.iter().sum::<f64>() / 4.0;
        Self { per_message_success, success_probability, shared_state_after_control: shared }
    }
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| if i != j { ONE } else { ZERO })
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

/// Alice's encoding for each message: `I`, `X`, `Z`, `XZ`.
pub fn encoding(m: Message) -> ComplexMatrix {
    match m.0 {
        0 => ComplexMatrix::identity(2),
        1 => pauli_x(),
        2 => pauli_z(),
        _ => pauli_x().matmul(&pauli_z()).expect("2x2"),
    }
}

/// `op ⊗ I₂`: acts on Alice's qubit of a two-qubit system.
fn on_alice(op: &ComplexMatrix) -> ComplexMatrix {
    kron(op, &ComplexMatrix::identity(2)).expect("4x4 within cap")
}

/// Bell outcome → decoded message, for a channel that would ideally be
/// `reference`. Outcomes are indexed as in [`BellState::ALL`].
pub fn bell_decode_table(reference: BellState) -> [Message; 4] {
    let mut table = [Message(0); 4];
    let r = reference.state();
    for m in Message::ALL {
        let encoded = on_alice(&encoding(m)).apply(r.amplitudes()).expect("4-vector");
        let encoded = PureState::new(encoded).expect("unitary image is normalised");
        let k = BellState::ALL
            .iter()
            .position(|b| (b.state().inner(&encoded).norm_sqr() - 1.0).abs() < 1e-12)
            .expect("Pauli images of a Bell state are Bell states");
        table[k] = m;
    }
    table
}

/// Superdense coding over `channel` with the singlet as the ideal channel.
pub fn superdense_run(channel: &DensityOperator) -> Result<ProtocolOutcome> {
    superdense_run_with_reference(channel, BellState::PsiMinus)
}

/// Superdense coding: Alice applies the Pauli encoding of each message to her
/// qubit, Bob measures in the Bell basis and decodes with the fixed table for
/// `reference`.
pub fn superdense_run_with_reference(
    channel: &DensityOperator,
    reference: BellState,
) -> Result<ProtocolOutcome> {
    if channel.d_a() != 2 || channel.d_b() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "superdense coding needs a 2 ⊗ 2 channel, got {} ⊗ {}",
            channel.d_a(),
            channel.d_b()
        )));
    }
    let table = bell_decode_table(reference);
    let projectors: Vec<ComplexMatrix> = BellState::ALL.iter().map(|b| b.state().projector()).collect();
    let mut per_message = [0.0; 4];
    for m in Message::ALL {
        let encoded = channel.matrix().conjugate_by(&on_alice(&encoding(m)))?;
        per_message[m.index()] = projectors
            .iter()
            .zip(table)
            .filter(|(_, decoded)| *decoded == m)
            .map(|(proj, _)| proj.matmul(&encoded).map(|x| x.trace().re))
            .sum::<Result<f64>>()?;
    }
    Ok(ProtocolOutcome::from_per_message(per_message, None))
}

/// Outcome `|χ^k⟩` of the mixed basis decodes to message `k`.
pub fn mixed_basis_decode_table() -> [Message; 4] {
    Message::ALL
}

/// Channel state Alice prepares to send `m` in the mixed basis.
pub fn mixed_basis_encode(m: Message) -> DensityOperator {
    states::mixed_basis()[m.index()].density(2, 2).expect("basis vectors are normalised")
}

/// Probability of each decoded message when Bob measures `rho` in the
/// mixed basis.
pub fn mixed_basis_decode(rho: &DensityOperator) -> Result<[f64; 4]> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch("mixed basis decoding needs a two-qubit state".into()));
    }
    let mut out = [0.0; 4];
    for (chi, m) in states::mixed_basis().iter().zip(mixed_basis_decode_table()) {
        out[m.index()] += chi.projector().matmul(rho.matrix())?.trace().re;
    }
    Ok(out)
}

/// Every intermediate quantity of a controlled dense-coding run.
#[derive(Clone, Debug)]
pub struct ControlledTrace {
    pub basis: ControlBasis,
    /// Probability of each of Cliff's outcomes.
    pub cliff_probabilities: [f64; 2],
    /// `[cliff][ancilla]` joint branch probabilities; ancilla 0 is success.
    pub branch_probabilities: [[f64; 2]; 2],
    /// Bob's reduced state averaged over every branch.
    pub bob_marginal: ComplexMatrix,
    pub success_probability: f64,
    /// Normalised Alice–Bob state on the success branch.
    pub success_state: Option<DensityOperator>,
}

const N_QUBITS: usize = 4; // Alice, Bob, Cliff, ancilla
const ALICE: usize = 0;
const CLIFF: usize = 2;
const ANCILLA: usize = 3;

fn embed(op: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    (0..N_QUBITS).fold(ComplexMatrix::identity(1), |acc, q| {
        let factor = if q == qubit { op.clone() } else { ComplexMatrix::identity(2) };
        kron(&acc, &factor).expect("16x16 within cap")
    })
}

/// Collective unitary on (Alice, ancilla): `|i⟩|0⟩ ↦ fᵢ|i⟩|0⟩ + √(1−fᵢ²)|i⟩|1⟩`,
/// completed to a reflection on each `|i⟩` block.
fn filter_unitary(factors: [f64; 2]) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(1 << N_QUBITS);
    for (i, &f) in factors.iter().enumerate() {
        let s = (1.0 - f * f).max(0.0).sqrt();
        let block = ComplexMatrix::from_real(2, &[f, s, s, -f]).expect("2x2");
        let mut proj = ComplexMatrix::zeros(2);
        proj.set(i, i, ONE);
        let term = kron(
            &kron(&kron(&proj, &ComplexMatrix::identity(2)).expect("cap"), &ComplexMatrix::identity(2))
                .expect("cap"),
            &block,
        )
        .expect("16x16 within cap");
        u = u.add(&term).expect("same dimension");
    }
    u
}

/// Attenuation factors equalising Schmidt coefficients `(a₀, a₁)`.
fn filter_factors(a: [f64; 2]) -> [f64; 2] {
    let m = a[0].min(a[1]);
    a.map(|x| if x > 0.0 { m / x } else { 1.0 })
}

fn projector_1q(v: &[Complex; 2]) -> ComplexMatrix {
    ComplexMatrix::outer(v)
}

/// Runs the controlled protocol and records every branch.
///
/// 1. Alice, Bob and Cliff share `|GHZ⟩`; Alice also holds an ancilla `|0⟩`.
/// 2. Cliff measures in [`ControlBasis`] and announces his bit. On outcome 1
///    Alice applies `Z`, leaving `sinθ|00⟩ + cosθ|11⟩`; outcome 0 leaves
///    `cosθ|00⟩ + sinθ|11⟩`.
/// 3. Alice applies the local filter matching the announced coefficients and
///    measures the ancilla. Outcome 0 leaves `|Φ+⟩` and occurs with
///    probability `2·min(cos²θ, sin²θ)`.
pub fn controlled_dense_coding_trace(basis: ControlBasis) -> Result<ControlledTrace> {
    let initial = linalg::kron_vec(states::ghz().amplitudes(), &[ONE, ZERO]);
    let rho = ComplexMatrix::outer(&initial);
    let (sin, cos) = basis.theta.sin_cos();
    let coefficients = [[cos, sin], [sin, cos]];
    let vectors = basis.vectors();
    let z_alice = embed(&pauli_z(), ALICE);
    let ancilla_proj = [
        embed(&ComplexMatrix::diag(&[1.0, 0.0]), ANCILLA),
        embed(&ComplexMatrix::diag(&[0.0, 1.0]), ANCILLA),
    ];

    let mut cliff_probabilities = [0.0; 2];
    let mut branch_probabilities = [[0.0; 2]; 2];
    let mut after_all = ComplexMatrix::zeros(rho.dim());
    let mut success = ComplexMatrix::zeros(rho.dim());

    for c in 0..2 {
        let proj = embed(&projector_1q(&vectors[c]), CLIFF);
        let mut branch = proj.matmul(&rho)?.matmul(&proj)?;
        cliff_probabilities[c] = branch.trace().re;
        if c == 1 {
            branch = branch.conjugate_by(&z_alice)?;
        }
        branch = branch.conjugate_by(&filter_unitary(filter_factors(coefficients[c])))?;
        for (a, q) in ancilla_proj.iter().enumerate() {
            let leaf = q.matmul(&branch)?.matmul(q)?;
            branch_probabilities[c][a] = leaf.trace().re;
            after_all = after_all.add(&leaf)?;
            if a == 0 {
                success = success.add(&leaf)?;
            }
        }
    }

    // order is (A, B, C, anc): keep the leading 4-dimensional AB factor
    let ab_all = linalg::partial_trace(&after_all, 4, 4, Subsystem::A)?;
    let bob_marginal = linalg::partial_trace(&ab_all, 2, 2, Subsystem::B)?;
    let success_probability = branch_probabilities[0][0] + branch_probabilities[1][0];
    let success_state = if success_probability > NEGLIGIBLE {
        let ab = linalg::partial_trace(&success, 4, 4, Subsystem::A)?;
        Some(DensityOperator::new(ab.scale_real(1.0 / success_probability), 2, 2)?)
    } else {
        None
    };

    Ok(ControlledTrace {
        basis,
        cliff_probabilities,
        branch_probabilities,
        bob_marginal,
        success_probability,
        success_state,
    })
}

/// Controlled dense coding. `per_message_success[m]` is the probability that
/// the filter succeeds and `m` is then decoded correctly over the distilled
/// `|Φ+⟩` channel.
pub fn controlled_dense_coding_run(basis: ControlBasis) -> Result<ProtocolOutcome> {
    let trace = controlled_dense_coding_trace(basis)?;
    let per_message = match &trace.success_state {
        Some(state) => {
            let run = superdense_run_with_reference(state, BellState::PhiPlus)?;
            run.per_message_success.map(|x| x * trace.success_probability)
        }
        None => [0.0; 4],
    };
    Ok(ProtocolOutcome::from_per_message(per_message, trace.success_state))
}
