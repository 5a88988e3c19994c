//! Entropies, dense-coding capacity, steerability verdicts and concurrence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Complex, ComplexMatrix, Subsystem};
use crate::states::{DensityOperator, StateFamily};
use crate::thresholds;

/// Default half-width of the isolated unsteerable point of the Werner family.
pub const WERNER_UNSTEERABLE_EPS: f64 = 1e-9;

/// `1/√3`, the single interior parameter where the Werner family is
/// unsteerable.
pub const WERNER_UNSTEERABLE_POINT: f64 = 0.577_350_269_189_625_8;

/// Von Neumann entropy in bits, `−Σ λ log₂ λ` over the clamped spectrum.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spectrum = linalg::entropy_spectrum(rho)?;
    let s: f64 = spectrum.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum();
    // rounding can leave -0.0 or a few ulps below zero for pure states
    Ok(s.max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub p: Option<f64>,
    pub chi: f64,
    #[serde(rename = "S_B")]
    pub s_b: f64,
    #[serde(rename = "S_AB")]
    pub s_ab: f64,
    #[serde(rename = "log2_dA")]
    pub log2_d_a: f64,
    pub dense_codeable: bool,
}

impl CapacityReport {
    /// `S_B − S_AB`, positive exactly when the state is dense-codeable.
    pub fn advantage(&self) -> f64 {
        self.s_b - self.s_ab
    }
}

/// `χ = log₂ d_A + S(ρ_B) − S(ρ_AB)`, unclamped.
pub fn dense_coding_capacity(rho: &DensityOperator) -> Result<CapacityReport> {
    let s_ab = von_neumann_entropy(rho.matrix())?;
    let s_b = von_neumann_entropy(&rho.marginal(Subsystem::B))?;
    let log2_d_a = (rho.d_a() as f64).log2();
    Ok(CapacityReport {
        p: None,
        chi: log2_d_a + s_b - s_ab,
        s_b,
        s_ab,
        log2_d_a,
        dense_codeable: s_b > s_ab,
    })
}

/// Capacity report for a family member, tagged with its parameter.
pub fn family_capacity(family: &StateFamily, p: f64) -> Result<CapacityReport> {
    let rho = family.evaluate(p)?;
    let mut report = dense_coding_capacity(&rho)?;
    report.p = Some(p);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SteerRule {
    /// Steerable on `(0, 1]` except at `p = 1/√3`.
    #[serde(rename = "werner-figure1")]
    WernerFigure1,
    /// Steerable iff `p > (H_d − 1)/(d − 1)`.
    #[serde(rename = "isotropic-Hd")]
    IsotropicHd,
}

impl SteerRule {
    pub fn as_str(self) -> &'static str {
        match self {
            SteerRule::WernerFigure1 => "werner-figure1",
            SteerRule::IsotropicHd => "isotropic-Hd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteerVerdict {
    pub steerable: bool,
    pub rule: SteerRule,
    pub threshold: f64,
}

pub fn is_steerable(family: &StateFamily, p: f64) -> Result<SteerVerdict> {
    is_steerable_with(family, p, WERNER_UNSTEERABLE_EPS)
}

/// Steerability verdict with an explicit half-width `eps` for the Werner
/// unsteerable point. `p = 0` is unsteerable for every family.
pub fn is_steerable_with(family: &StateFamily, p: f64, eps: f64) -> Result<SteerVerdict> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfDomain { name: "p", value: p });
    }
    Ok(match *family {
        StateFamily::Werner => SteerVerdict {
            steerable: p > 0.0 && (p - WERNER_UNSTEERABLE_POINT).abs() > eps,
            rule: SteerRule::WernerFigure1,
            threshold: WERNER_UNSTEERABLE_POINT,
        },
        StateFamily::Isotropic { d } => {
            let threshold = thresholds::steerability_threshold(d)?;
            SteerVerdict { steerable: p > threshold, rule: SteerRule::IsotropicHd, threshold }
        }
    })
}

const SPECTRUM_FLOOR: f64 = 1e-14;

fn sigma_y_sigma_y() -> ComplexMatrix {
    // σy ⊗ σy = anti-diagonal (-1, 1, 1, -1)
    let mut m = ComplexMatrix::zeros(4);
    m.set(0, 3, Complex::new(-1.0, 0.0));
    m.set(1, 2, Complex::new(1.0, 0.0));
    m.set(2, 1, Complex::new(1.0, 0.0));
    m.set(3, 0, Complex::new(-1.0, 0.0));
    m
}

/// Wootters concurrence of a two-qubit state.
///
/// The spin-flip spectrum is taken from the Hermitian form
/// `√ρ ρ̃ √ρ`, whose eigenvalues are the squares of the `λᵢ`.
pub fn concurrence(rho: &DensityOperator) -> Result<f64> {
    if rho.d_a() != 2 || rho.d_b() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a two-qubit state, got {} ⊗ {}",
            rho.d_a(),
            rho.d_b()
        )));
    }
    let m = rho.matrix();
    let yy = sigma_y_sigma_y();
    let flipped = m.conj().conjugate_by(&yy)?;
    // zero eigenvalues come back as ~1e-17 noise; their square roots would
    // pollute the spin-flip spectrum at the 1e-9 level
    let root = linalg::hermitian_map(m, |x| if x > SPECTRUM_FLOOR { x.sqrt() } else { 0.0 })?;
    let product = root.matmul(&flipped)?.matmul(&root)?.hermitian_part();
    let eig = linalg::eig_hermitian(&product)?;
    let lambdas: Vec<f64> =
        eig.values.iter().map(|&x| if x > SPECTRUM_FLOOR { x.sqrt() } else { 0.0 }).collect();
    let c = lambdas[0] - lambdas[1..].iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{isotropic, werner, BellState};
    use approx::assert_abs_diff_eq;

    fn closed_form_entropy(values: &[f64]) -> f64 {
        values.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
    }

    #[test]
    fn entropy_pure_and_maximally_mixed() {
        let pure = BellState::PhiPlus.state().projector();
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-12);
        let mixed = ComplexMatrix::identity(9).scale_real(1.0 / 9.0);
        assert_abs_diff_eq!(von_neumann_entropy(&mixed).unwrap(), 9f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(9f64.log2(), 3.169925, epsilon = 1e-6);
    }

    #[test]
    fn entropy_werner_half() {
        let oracle = closed_form_entropy(&[0.625, 0.125, 0.125, 0.125]);
        assert_abs_diff_eq!(oracle, 1.548795, epsilon = 1e-6);
        let s = von_neumann_entropy(werner(0.5).unwrap().matrix()).unwrap();
        assert_abs_diff_eq!(s, 1.548795, epsilon = 1e-5);
        assert_abs_diff_eq!(s, oracle, epsilon = 1e-12);
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        let m = ComplexMatrix::diag(&[1.2, -0.2]);
        let err = von_neumann_entropy(&m).unwrap_err();
        assert!(err.to_string().contains("not positive semidefinite"));
    }

    #[test]
    fn capacity_of_singlet_and_noise() {
        let singlet = BellState::PsiMinus.state().density(2, 2).unwrap();
        let r = dense_coding_capacity(&singlet).unwrap();
        assert_abs_diff_eq!(r.chi, 2.0, epsilon = 1e-12);
        assert!(r.dense_codeable);

        let r = dense_coding_capacity(&werner(0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.chi, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.s_b, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.s_ab, 2.0, epsilon = 1e-12);
        assert!(!r.dense_codeable);
        assert_eq!(r.chi, r.log2_d_a + r.s_b - r.s_ab);
    }

    #[test]
    fn capacity_at_werner_boundary() {
        let r = family_capacity(&StateFamily::Werner, 0.7476).unwrap();
        assert_abs_diff_eq!(r.chi, 1.0, epsilon = 1e-3);
        assert_eq!(r.p, Some(0.7476));
    }

    #[test]
    fn capacity_json_keys() {
        let r = family_capacity(&StateFamily::Werner, 1.0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["p", "chi", "S_B", "S_AB", "log2_dA", "dense_codeable"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn steering_examples() {
        let iso3 = StateFamily::Isotropic { d: 3 };
        let v = is_steerable(&iso3, 0.5).unwrap();
        assert!(v.steerable);
        assert_eq!(v.rule, SteerRule::IsotropicHd);
        assert_abs_diff_eq!(v.threshold, 0.416667, epsilon = 1e-5);
        assert!(!is_steerable(&iso3, 0.4).unwrap().steerable);
        assert!(!is_steerable(&iso3, v.threshold).unwrap().steerable);

        assert!(is_steerable(&StateFamily::Werner, 1.0).unwrap().steerable);
        assert!(!is_steerable(&StateFamily::Werner, 1.0 / 3f64.sqrt()).unwrap().steerable);
        assert!(!is_steerable(&StateFamily::Werner, 0.0).unwrap().steerable);
        assert!(is_steerable(&StateFamily::Werner, 0.3).unwrap().steerable);
        assert!(is_steerable(&StateFamily::Werner, 0.5773).unwrap().steerable);
        assert!(!is_steerable_with(&StateFamily::Werner, 0.5773, 1e-3).unwrap().steerable);
        assert!(is_steerable(&StateFamily::Werner, 1.2).is_err());
    }

    #[test]
    fn unsteerable_point_constant() {
        assert_eq!(WERNER_UNSTEERABLE_POINT, 1.0 / 3f64.sqrt());
    }

    #[test]
    fn concurrence_bell_and_separable() {
        for b in BellState::ALL {
            let rho = b.state().density(2, 2).unwrap();
            assert_abs_diff_eq!(concurrence(&rho).unwrap(), 1.0, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(concurrence(&werner(0.0).unwrap()).unwrap(), 0.0, epsilon = 1e-9);
        let product = crate::states::PureState::basis(4, 1).density(2, 2).unwrap();
        assert_abs_diff_eq!(concurrence(&product).unwrap(), 0.0, epsilon = 1e-9);
        assert!(concurrence(&isotropic(3, 0.5).unwrap()).is_err());
    }

    #[test]
    fn concurrence_werner_formula() {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert_abs_diff_eq!(concurrence(&werner(p).unwrap()).unwrap(), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn concurrence_non_maximal_pure_state() {
        // cos a |00⟩ + sin a |11⟩ has C = sin 2a
        let a = 0.3f64;
        let psi = crate::states::PureState::new(vec![
            Complex::new(a.cos(), 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(a.sin(), 0.0),
        ])
        .unwrap();
        let c = concurrence(&psi.density(2, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(c, (2.0 * a).sin(), epsilon = 1e-9);
    }
}
