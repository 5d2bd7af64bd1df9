//! Exact pure-state values: the entanglement quantifier evaluated in the
//! Schmidt product basis, plus closed forms.

use crate::coherence::{shannon_entropy_bits, CoherenceMeasure};
use crate::error::{QcorrError, Result};
use crate::quantifiers::{BoundDiagnostics, BoundKind, BoundReport, BoundWitness};
use crate::schmidt::{schmidt_decompose, SchmidtForm};
use crate::state::Ket;

/// Closed form of the l1 value on a pure state: `sum_{i != j} sqrt(l_i l_j)`,
/// computed as `(sum_i sqrt(l_i))^2 - sum_i l_i`.
pub fn e_l1_pure_closed_form(schmidt: &SchmidtForm) -> f64 {
    let root_sum: f64 = schmidt.coefficients().iter().map(|&l| l.sqrt()).sum();
    let sum: f64 = schmidt.coefficients().iter().sum();
    (root_sum * root_sum - sum).max(0.0)
}

/// Closed form of the relative-entropy value on a pure state: the entropy of
/// the Schmidt spectrum, in bits.
pub fn e_relent_pure_closed_form(schmidt: &SchmidtForm) -> f64 {
    shannon_entropy_bits(schmidt.coefficients())
}

/// Exact pure-state entanglement value: the measure evaluated on `|psi><psi|`
/// in the completed Schmidt product basis.
pub fn e_pure(measure: &dyn CoherenceMeasure, psi: &Ket) -> Result<BoundReport> {
    let schmidt = schmidt_decompose(psi)?;
    let pair = schmidt.local_basis_pair()?;
    let rho = psi.to_density_default()?;
    let value = measure.evaluate_in_pair(&rho, &pair)?;
    Ok(BoundReport {
        value,
        kind: BoundKind::Exact,
        ancilla_dims: (1, 1),
        witness: BoundWitness::Schmidt(schmidt),
        diagnostics: BoundDiagnostics {
            restarts: 0,
            ancilla_dims_tried: Vec::new(),
            seed: 0,
            converged: true,
            candidates_evaluated: 1,
        },
    })
}

/// `e_pure` dispatch for density-matrix input: accepts only (near-)pure
/// states and extracts the principal ket.
pub fn e_pure_density(
    measure: &dyn CoherenceMeasure,
    rho: &crate::state::DensityMatrix,
) -> Result<BoundReport> {
    if !rho.is_pure() {
        return Err(QcorrError::InvalidArgument {
            context: format!(
                "input purity {:.6} is not pure; use e_upper_bound for mixed states",
                rho.purity()
            ),
        });
    }
    if rho.n_factors() != 2 {
        return Err(QcorrError::NotBipartite {
            factors: rho.n_factors(),
        });
    }
    e_pure(measure, &rho.principal_ket())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{L1, RELENT};
    use crate::linalg::{c64, CVector, C64};
    use crate::sample::{haar_ket, rng_from_seed};
    use crate::schmidt::ket_from_spectrum;
    use approx::assert_relative_eq;

    fn bell() -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(
            CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(s, 0.0)]),
            vec![2, 2],
        )
        .unwrap()
    }

    #[test]
    fn bell_values_are_one_in_both_measures() {
        let report = e_pure(&L1, &bell()).unwrap();
        assert_relative_eq!(report.value, 1.0, epsilon = 1e-12);
        assert!(matches!(report.kind, BoundKind::Exact));
        let report = e_pure(&RELENT, &bell()).unwrap();
        assert_relative_eq!(report.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_states_have_zero_value() {
        let psi = Ket::basis_state(vec![2, 2], 0).unwrap();
        for m in crate::coherence::all_measures() {
            assert!(e_pure(m, &psi).unwrap().value.abs() < 1e-12);
        }
    }

    #[test]
    fn closed_forms_on_known_spectra() {
        let schmidt = schmidt_decompose(&ket_from_spectrum(&[0.5, 0.5]).unwrap()).unwrap();
        assert_relative_eq!(e_l1_pure_closed_form(&schmidt), 1.0, epsilon = 1e-12);
        let schmidt = schmidt_decompose(&ket_from_spectrum(&[0.9, 0.1]).unwrap()).unwrap();
        assert_relative_eq!(e_l1_pure_closed_form(&schmidt), 0.6, epsilon = 1e-12);
        assert_relative_eq!(
            e_relent_pure_closed_form(&schmidt),
            0.46899559358928117,
            epsilon = 1e-12
        );
        let schmidt = schmidt_decompose(&ket_from_spectrum(&[1.0]).unwrap()).unwrap();
        assert_eq!(e_l1_pure_closed_form(&schmidt), 0.0);
    }

    #[test]
    fn evaluation_matches_closed_forms_on_random_kets() {
        let mut rng = rng_from_seed(31);
        for dims in [[2usize, 2], [2, 3], [3, 3]] {
            for _ in 0..40 {
                let psi = haar_ket(&dims, &mut rng);
                let schmidt = schmidt_decompose(&psi).unwrap();
                assert_relative_eq!(
                    e_pure(&L1, &psi).unwrap().value,
                    e_l1_pure_closed_form(&schmidt),
                    epsilon = 1e-9
                );
                assert_relative_eq!(
                    e_pure(&RELENT, &psi).unwrap().value,
                    e_relent_pure_closed_form(&schmidt),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn partially_degenerate_closed_form() {
        let schmidt = schmidt_decompose(&ket_from_spectrum(&[0.5, 0.25, 0.25]).unwrap()).unwrap();
        assert_relative_eq!(
            e_l1_pure_closed_form(&schmidt),
            1.9142135623730951,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mixed_density_input_is_rejected() {
        let rho = crate::state::DensityMatrix::maximally_mixed(
            vec![2, 2],
            vec!["A".into(), "B".into()],
        )
        .unwrap();
        let err = e_pure_density(&L1, &rho).unwrap_err();
        assert!(err.to_string().contains("e_upper_bound"));
    }
}
