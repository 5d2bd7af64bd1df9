//! Symmetric extensions on AA'BB' and Bob-side extensions on ABB'.
//!
//! A symmetric extension certifies an entanglement upper bound: it must
//! recover the base state when the ancillas are traced out and be invariant
//! under the full party swap after an Alice-side alignment unitary. Candidates
//! record both residuals so acceptance is auditable.

use crate::ensemble::Ensemble;
use crate::error::{QcorrError, Result};
use crate::linalg::{
    complete_orthonormal_basis, exp_i_hermitian, max_abs_diff, CMatrix, CVector, C64,
};
use crate::ops::{partial_trace, swap_symmetry_residual};
use crate::sample::rng_stream;
use crate::schmidt::schmidt_decompose;
use crate::state::{DensityMatrix, Ket};
use crate::tol;

fn extended_labels() -> Vec<String> {
    vec!["A".into(), "A'".into(), "B".into(), "B'".into()]
}

/// A candidate symmetric extension of a bipartite state.
#[derive(Debug, Clone)]
pub struct ExtensionCandidate {
    /// The extended state on factors (A, A', B, B').
    pub state: DensityMatrix,
    pub ancilla_dims: (usize, usize),
    /// Max entry of |Tr_{A'B'}(state) - rho|.
    pub marginal_residual: f64,
    /// Max entry of |SWAP(aligned) - aligned| where aligned conjugates the
    /// state by the recorded Alice-side unitary.
    pub symmetry_residual: f64,
    /// Alignment unitary on the AA' group; `None` means identity.
    pub alignment: Option<CMatrix>,
    /// The flag decomposition this candidate was built from, if any.
    pub ensemble: Option<Ensemble>,
}

impl ExtensionCandidate {
    pub fn is_accepted(&self) -> bool {
        self.marginal_residual <= tol::EXTENSION_RESIDUAL
            && self.symmetry_residual <= tol::EXTENSION_RESIDUAL
    }

    /// Recomputes the residuals from the stored state; used by replay tests.
    pub fn recompute_residuals(&self, rho: &DensityMatrix) -> Result<(f64, f64)> {
        let marginal = partial_trace(&self.state, &["A", "B"])?;
        let marginal_residual = marginal.max_abs_diff(rho);
        let symmetry_residual = swap_symmetry_residual(&aligned_state(
            &self.state,
            self.alignment.as_ref(),
        )?)?;
        Ok((marginal_residual, symmetry_residual))
    }
}

/// Conjugates the AA' group by `alignment` (identity when `None`).
pub(crate) fn aligned_state(
    state: &DensityMatrix,
    alignment: Option<&CMatrix>,
) -> Result<DensityMatrix> {
    match alignment {
        None => Ok(state.clone()),
        Some(u) => {
            let dim_b = state.party_dim(crate::state::Party::Bob);
            let eye_b = CMatrix::identity(dim_b, dim_b);
            crate::ops::apply_local_unitary(state, u, &eye_b)
        }
    }
}

fn bipartite_dims(rho: &DensityMatrix) -> Result<(usize, usize)> {
    if rho.n_factors() != 2 {
        return Err(QcorrError::NotBipartite {
            factors: rho.n_factors(),
        });
    }
    Ok((rho.dims()[0], rho.dims()[1]))
}

/// The base state itself viewed on (A, A', B, B') with one-dimensional
/// ancillas. Needs `d_A = d_B` for the party swap to exist.
pub fn trivial_extension(rho: &DensityMatrix) -> Result<ExtensionCandidate> {
    let (da, db) = bipartite_dims(rho)?;
    if da != db {
        return Err(QcorrError::SearchInfeasible {
            dim_a: da,
            dim_b: db,
            max_ancilla_dim: 1,
            tried: vec![(1, 1)],
        });
    }
    let state = DensityMatrix::new_unchecked(
        rho.data().clone(),
        vec![da, 1, db, 1],
        extended_labels(),
    );
    let symmetry_residual = swap_symmetry_residual(&state)?;
    Ok(ExtensionCandidate {
        state,
        ancilla_dims: (1, 1),
        marginal_residual: 0.0,
        symmetry_residual,
        alignment: None,
        ensemble: None,
    })
}

/// Deterministic unitary sending the Alice Schmidt vectors of `psi` onto its
/// Bob Schmidt vectors, making `(U (x) 1)|psi>` swap-symmetric.
fn member_alignment(psi: &Ket) -> Result<CMatrix> {
    let (da, db) = psi.bipartite_dims()?;
    debug_assert_eq!(da, db);
    let form = schmidt_decompose(psi)?;
    let basis_from = complete_orthonormal_basis(form.vectors_a(), da);
    let basis_to = complete_orthonormal_basis(form.vectors_b(), db);
    Ok(basis_to * basis_from.adjoint())
}

/// The flag construction: `sigma = sum_i p_i |psi_i><psi_i| (x) |ii><ii|`
/// with `n`-dimensional flag ancillas on both sides. Its ancilla marginal is
/// the base state exactly, and the controlled alignment
/// `U = sum_i U_i (x) |i><i|` (each `U_i` mapping member `i`'s Alice Schmidt
/// vectors to its Bob ones) makes it swap-invariant.
pub fn flagged_extension(rho: &DensityMatrix, ensemble: &Ensemble) -> Result<ExtensionCandidate> {
    let (da, db) = bipartite_dims(rho)?;
    if ensemble.dims() != rho.dims() {
        return Err(QcorrError::DimensionMismatch {
            context: format!(
                "ensemble dims {:?} vs state dims {:?}",
                ensemble.dims(),
                rho.dims()
            ),
        });
    }
    if da != db {
        return Err(QcorrError::SearchInfeasible {
            dim_a: da,
            dim_b: db,
            max_ancilla_dim: ensemble.len(),
            tried: vec![(ensemble.len(), ensemble.len())],
        });
    }
    let n = ensemble.len();
    let members = ensemble.pure_kets()?;
    let total = da * n * db * n;
    if n > tol::MAX_FACTOR_DIM || total > tol::MAX_TOTAL_DIM {
        return Err(QcorrError::SizeLimit {
            context: format!("flagged extension dimension {total} with {n} flags"),
        });
    }

    let index = |a: usize, alpha: usize, b: usize, beta: usize| -> usize {
        ((a * n + alpha) * db + b) * n + beta
    };
    let mut data = CMatrix::zeros(total, total);
    for (i, (w, psi)) in members.iter().enumerate() {
        let amps = psi.amplitudes();
        let weight = C64::from(*w);
        for a in 0..da {
            for b in 0..db {
                let left = amps[a * db + b];
                if left.norm() == 0.0 {
                    continue;
                }
                for ap in 0..da {
                    for bp in 0..db {
                        let right = amps[ap * db + bp].conj();
                        data[(index(a, i, b, i), index(ap, i, bp, i))] += weight * left * right;
                    }
                }
            }
        }
    }
    let state = DensityMatrix::new_unchecked(data, vec![da, n, db, n], extended_labels());

    // Controlled alignment on AA': block (U_i) at flag i.
    let mut alignment = CMatrix::zeros(da * n, da * n);
    for (i, (_, psi)) in members.iter().enumerate() {
        let u_i = member_alignment(psi)?;
        for a in 0..da {
            for ap in 0..da {
                alignment[(a * n + i, ap * n + i)] = u_i[(a, ap)];
            }
        }
    }

    let marginal = partial_trace(&state, &["A", "B"])?;
    let marginal_residual = marginal.max_abs_diff(rho);
    let symmetry_residual =
        swap_symmetry_residual(&aligned_state(&state, Some(&alignment))?)?;
    Ok(ExtensionCandidate {
        state,
        ancilla_dims: (n, n),
        marginal_residual,
        symmetry_residual,
        alignment: Some(alignment),
        ensemble: Some(ensemble.clone()),
    })
}

/// The separable-decomposition construction: flags over product pure members.
/// Validates that every member really is a product state and that the
/// ensemble reconstructs `rho`.
pub fn extension_from_separable_decomposition(
    rho: &DensityMatrix,
    ensemble: &Ensemble,
) -> Result<ExtensionCandidate> {
    let members = ensemble.pure_kets()?;
    for (k, (_, psi)) in members.iter().enumerate() {
        let form = schmidt_decompose(psi)?;
        if form.rank() > 1 {
            let second = form.coefficients()[1];
            if second > 1e-9 {
                return Err(QcorrError::NotProductState {
                    index: k,
                    second_coefficient: second,
                });
            }
        }
    }
    let residual = ensemble.reconstruction_residual(rho)?;
    if residual > tol::DECOMPOSITION_RESIDUAL {
        return Err(QcorrError::DecompositionMismatch {
            residual,
            tolerance: tol::DECOMPOSITION_RESIDUAL,
        });
    }
    flagged_extension(rho, ensemble)
}

/// Refines the alignment unitary of a candidate by simplex descent on the
/// swap residual, from Haar-random starts. Returns the improved candidate.
pub fn refine_alignment(
    candidate: &ExtensionCandidate,
    restarts: usize,
    seed: u64,
) -> Result<ExtensionCandidate> {
    use crate::correlated::{nelder_mead, NmOptions};

    let dim_aa = candidate.state.party_dim(crate::state::Party::Alice);
    let n_params = dim_aa * dim_aa;
    let base = candidate.alignment.clone();

    let unitary_at = |theta: &[f64]| -> CMatrix {
        let mut h = CMatrix::zeros(dim_aa, dim_aa);
        for k in 0..dim_aa {
            h[(k, k)] = C64::from(theta[k]);
        }
        let mut pos = dim_aa;
        for i in 0..dim_aa {
            for j in (i + 1)..dim_aa {
                let z = crate::linalg::c64(theta[pos], theta[pos + 1]);
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
                pos += 2;
            }
        }
        let w = exp_i_hermitian(&h);
        match &base {
            Some(u) => w * u,
            None => w,
        }
    };

    let mut objective = |theta: &[f64]| -> f64 {
        let u = unitary_at(theta);
        let aligned = aligned_state(&candidate.state, Some(&u)).expect("dims fixed");
        swap_symmetry_residual(&aligned).expect("dims fixed")
    };

    let mut best_theta = vec![0.0; n_params];
    let mut best = objective(&best_theta);
    let nm_opts = NmOptions {
        max_iters: 300,
        ftol: 1e-12,
        initial_step: 0.4,
    };
    for r in 0..restarts.max(1) {
        if best <= 1e-12 {
            break;
        }
        let theta0 = if r == 0 {
            vec![0.0; n_params]
        } else {
            use rand::Rng;
            use rand_distr::StandardNormal;
            let mut rng = rng_stream(seed, 0x616c69676e ^ r as u64);
            (0..n_params)
                .map(|_| {
                    let x: f64 = rng.sample(StandardNormal);
                    x * std::f64::consts::FRAC_PI_2
                })
                .collect()
        };
        let out = nelder_mead(&mut objective, &theta0, &nm_opts);
        if out.fx < best {
            best = out.fx;
            best_theta = out.x;
        }
    }

    let alignment = unitary_at(&best_theta);
    Ok(ExtensionCandidate {
        state: candidate.state.clone(),
        ancilla_dims: candidate.ancilla_dims,
        marginal_residual: candidate.marginal_residual,
        symmetry_residual: best,
        alignment: Some(alignment),
        ensemble: candidate.ensemble.clone(),
    })
}

/// A Bob-side-only extension candidate on (A, B, B').
#[derive(Debug, Clone)]
pub struct BobExtensionCandidate {
    /// The extended state on factors (A, B, B').
    pub state: DensityMatrix,
    pub ancilla_dim: usize,
    /// Max entry of |Tr_{B'}(state) - rho|.
    pub marginal_residual: f64,
    pub ensemble: Option<Ensemble>,
}

impl BobExtensionCandidate {
    pub fn is_accepted(&self) -> bool {
        self.marginal_residual <= tol::EXTENSION_RESIDUAL
    }
}

fn bob_labels() -> Vec<String> {
    vec!["A".into(), "B".into(), "B'".into()]
}

/// The base state with a one-dimensional Bob ancilla attached.
pub fn bob_trivial_extension(rho: &DensityMatrix) -> Result<BobExtensionCandidate> {
    let (da, db) = bipartite_dims(rho)?;
    let state =
        DensityMatrix::new_unchecked(rho.data().clone(), vec![da, db, 1], bob_labels());
    Ok(BobExtensionCandidate {
        state,
        ancilla_dim: 1,
        marginal_residual: 0.0,
        ensemble: None,
    })
}

/// Bob-side flags: `sigma = sum_i p_i |psi_i><psi_i| (x) |i>_{B'}<i|`.
/// No swap constraint applies, so any dims work.
pub fn bob_flagged_extension(
    rho: &DensityMatrix,
    ensemble: &Ensemble,
) -> Result<BobExtensionCandidate> {
    let (da, db) = bipartite_dims(rho)?;
    if ensemble.dims() != rho.dims() {
        return Err(QcorrError::DimensionMismatch {
            context: format!(
                "ensemble dims {:?} vs state dims {:?}",
                ensemble.dims(),
                rho.dims()
            ),
        });
    }
    let n = ensemble.len();
    let members = ensemble.pure_kets()?;
    let total = da * db * n;
    if n > tol::MAX_FACTOR_DIM || total > tol::MAX_TOTAL_DIM {
        return Err(QcorrError::SizeLimit {
            context: format!("flagged extension dimension {total} with {n} flags"),
        });
    }
    let mut data = CMatrix::zeros(total, total);
    for (i, (w, psi)) in members.iter().enumerate() {
        let amps = psi.amplitudes();
        let weight = C64::from(*w);
        for x in 0..da * db {
            let left = amps[x];
            if left.norm() == 0.0 {
                continue;
            }
            for y in 0..da * db {
                data[(x * n + i, y * n + i)] += weight * left * amps[y].conj();
            }
        }
    }
    let state = DensityMatrix::new_unchecked(data, vec![da, db, n], bob_labels());
    let marginal = partial_trace(&state, &["A", "B"])?;
    let marginal_residual = marginal.max_abs_diff(rho);
    Ok(BobExtensionCandidate {
        state,
        ancilla_dim: n,
        marginal_residual,
        ensemble: Some(ensemble.clone()),
    })
}

/// A classical-quantum decomposition: orthonormal Alice kets with conditional
/// Bob states.
#[derive(Debug, Clone)]
pub struct CqDecomposition {
    pub weights: Vec<f64>,
    pub alice_kets: Vec<CVector>,
    pub bob_states: Vec<DensityMatrix>,
}

impl CqDecomposition {
    /// Interprets an ensemble whose members factor as
    /// `|a_i><a_i| (x) rho_B^i` with pairwise-orthogonal `a_i`.
    pub fn from_ensemble(rho: &DensityMatrix, ensemble: &Ensemble) -> Result<Self> {
        bipartite_dims(rho)?;
        let residual = ensemble.reconstruction_residual(rho)?;
        if residual > tol::DECOMPOSITION_RESIDUAL {
            return Err(QcorrError::DecompositionMismatch {
                residual,
                tolerance: tol::DECOMPOSITION_RESIDUAL,
            });
        }
        let mut weights = Vec::new();
        let mut alice_kets: Vec<CVector> = Vec::new();
        let mut bob_states = Vec::new();
        for (k, (w, m)) in ensemble
            .weights()
            .iter()
            .zip(ensemble.members())
            .enumerate()
        {
            let member = DensityMatrix::new(
                m.density_data(),
                rho.dims().to_vec(),
                rho.labels().to_vec(),
            )?;
            let a_marginal = partial_trace(&member, &["A"])?;
            if !a_marginal.is_pure() {
                return Err(QcorrError::InvalidArgument {
                    context: format!(
                        "member {k} is not of classical-quantum form: Alice marginal purity {:.6}",
                        a_marginal.purity()
                    ),
                });
            }
            let a_ket = a_marginal.principal_ket().amplitudes().clone();
            let b_state = partial_trace(&member, &["B"])?;
            // Verify the member factorizes.
            let proj = &a_ket * a_ket.adjoint();
            let product = proj.kronecker(b_state.data());
            if max_abs_diff(&product, member.data()) > tol::EXTENSION_RESIDUAL {
                return Err(QcorrError::InvalidArgument {
                    context: format!("member {k} does not factor as |a><a| (x) rho_B"),
                });
            }
            for prev in alice_kets.iter() {
                if prev.dotc(&a_ket).norm() > tol::EXTENSION_RESIDUAL {
                    return Err(QcorrError::InvalidArgument {
                        context: "Alice kets of the decomposition are not orthogonal".into(),
                    });
                }
            }
            weights.push(*w);
            alice_kets.push(a_ket);
            bob_states.push(b_state);
        }
        Ok(Self {
            weights,
            alice_kets,
            bob_states,
        })
    }
}

/// The classical-quantum flag construction on Bob's side:
/// `sigma = sum_{ij} p_i q_ij |a_i><a_i| (x) |beta_j^i><beta_j^i| (x) |ij><ij|`,
/// which is diagonal in a product eigenbasis, so its constrained minimum
/// vanishes.
pub fn cq_extension(rho: &DensityMatrix, cq: &CqDecomposition) -> Result<BobExtensionCandidate> {
    let (da, db) = bipartite_dims(rho)?;
    let terms = cq.weights.len();
    let n = terms * db;
    let total = da * db * n;
    if n > tol::MAX_FACTOR_DIM || total > tol::MAX_TOTAL_DIM {
        return Err(QcorrError::SizeLimit {
            context: format!("cq extension dimension {total} with {n} flags"),
        });
    }
    let mut data = CMatrix::zeros(total, total);
    for (i, ((w, a_ket), b_state)) in cq
        .weights
        .iter()
        .zip(&cq.alice_kets)
        .zip(&cq.bob_states)
        .enumerate()
    {
        let (q, betas) = b_state.eigen();
        for j in 0..db {
            if q[j] <= 0.0 {
                continue;
            }
            let weight = C64::from(w * q[j]);
            let beta = betas.column(j);
            let flag = i * db + j;
            for a in 0..da {
                for b in 0..db {
                    let left = a_ket[a] * beta[b];
                    if left.norm() == 0.0 {
                        continue;
                    }
                    for ap in 0..da {
                        for bp in 0..db {
                            let right = (a_ket[ap] * beta[bp]).conj();
                            data[((a * db + b) * n + flag, (ap * db + bp) * n + flag)] +=
                                weight * left * right;
                        }
                    }
                }
            }
        }
    }
    let state = DensityMatrix::new_unchecked(data, vec![da, db, n], bob_labels());
    let marginal = partial_trace(&state, &["A", "B"])?;
    let marginal_residual = marginal.max_abs_diff(rho);
    Ok(BobExtensionCandidate {
        state,
        ancilla_dim: n,
        marginal_residual,
        ensemble: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::L1;
    use crate::correlated::{c_min, CminOptions};
    use crate::ensemble::EnsembleMember;
    use crate::linalg::c64;
    use crate::sample::{random_separable, rng_from_seed};

    fn bell_density() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(
            CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(s, 0.0)]),
            vec![2, 2],
        )
        .unwrap()
        .to_density_default()
        .unwrap()
    }

    #[test]
    fn trivial_extension_of_symmetric_state_is_accepted() {
        let candidate = trivial_extension(&bell_density()).unwrap();
        assert!(candidate.is_accepted());
        assert_eq!(candidate.ancilla_dims, (1, 1));
        assert_eq!(candidate.state.dims(), &[2, 1, 2, 1]);
    }

    #[test]
    fn singleton_product_decomposition_certifies_zero() {
        let rho = Ket::basis_state(vec![2, 2], 0)
            .unwrap()
            .to_density_default()
            .unwrap();
        let ens = Ensemble::new(
            vec![1.0],
            vec![EnsembleMember::Pure(Ket::basis_state(vec![2, 2], 0).unwrap())],
        )
        .unwrap();
        let candidate = extension_from_separable_decomposition(&rho, &ens).unwrap();
        assert!(candidate.is_accepted());
        let result = c_min(&L1, &candidate.state, &CminOptions::default()).unwrap();
        assert!(result.value.abs() <= 1e-10, "c_min = {}", result.value);
    }

    #[test]
    fn two_orthogonal_products_give_zero_cmin() {
        let members = vec![
            EnsembleMember::Pure(Ket::basis_state(vec![2, 2], 0).unwrap()),
            EnsembleMember::Pure(Ket::basis_state(vec![2, 2], 3).unwrap()),
        ];
        let ens = Ensemble::new(vec![0.3, 0.7], members).unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        let candidate = extension_from_separable_decomposition(&rho, &ens).unwrap();
        assert!(candidate.is_accepted());
        let result = c_min(&L1, &candidate.state, &CminOptions::default()).unwrap();
        assert!(result.value.abs() <= 1e-10, "c_min = {}", result.value);
    }

    #[test]
    fn random_separable_decompositions_are_accepted_with_zero_cmin() {
        let mut rng = rng_from_seed(51);
        for _ in 0..10 {
            let ens = random_separable(2, 2, 3, &mut rng).unwrap();
            let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
            let candidate = extension_from_separable_decomposition(&rho, &ens).unwrap();
            assert!(
                candidate.is_accepted(),
                "marginal {:.2e}, symmetry {:.2e}",
                candidate.marginal_residual,
                candidate.symmetry_residual
            );
            let result = c_min(&L1, &candidate.state, &CminOptions::default()).unwrap();
            assert!(result.value.abs() <= 1e-8, "c_min = {}", result.value);
        }
    }

    #[test]
    fn entangled_member_is_rejected_as_non_product() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Ket::new(
            CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(s, 0.0)]),
            vec![2, 2],
        )
        .unwrap();
        let ens = Ensemble::new(vec![1.0], vec![EnsembleMember::Pure(bell)]).unwrap();
        let rho = bell_density();
        let err = extension_from_separable_decomposition(&rho, &ens).unwrap_err();
        assert!(matches!(err, QcorrError::NotProductState { index: 0, .. }));
    }

    #[test]
    fn wrong_mixture_is_rejected() {
        let ens = Ensemble::new(
            vec![1.0],
            vec![EnsembleMember::Pure(Ket::basis_state(vec![2, 2], 0).unwrap())],
        )
        .unwrap();
        let rho = DensityMatrix::maximally_mixed(vec![2, 2], vec!["A".into(), "B".into()]).unwrap();
        let err = extension_from_separable_decomposition(&rho, &ens).unwrap_err();
        assert!(matches!(err, QcorrError::DecompositionMismatch { .. }));
    }

    #[test]
    fn flagged_extension_of_entangled_members_aligns() {
        // A rank-2 mixture of entangled pure states still admits the flag
        // construction with per-member Schmidt alignment.
        let mut rng = rng_from_seed(52);
        let psi1 = crate::sample::haar_ket(&[2, 2], &mut rng);
        let psi2 = crate::sample::haar_ket(&[2, 2], &mut rng);
        let ens = Ensemble::new(
            vec![0.4, 0.6],
            vec![EnsembleMember::Pure(psi1), EnsembleMember::Pure(psi2)],
        )
        .unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        let candidate = flagged_extension(&rho, &ens).unwrap();
        assert!(
            candidate.is_accepted(),
            "marginal {:.2e}, symmetry {:.2e}",
            candidate.marginal_residual,
            candidate.symmetry_residual
        );
        let (marg, sym) = candidate.recompute_residuals(&rho).unwrap();
        assert_eq!(marg, candidate.marginal_residual);
        assert_eq!(sym, candidate.symmetry_residual);
    }

    #[test]
    fn alignment_refinement_fixes_one_sided_rotation() {
        // Rotate Bell on Alice's side only: the raw swap residual is large,
        // but an Alice unitary restores symmetry.
        let mut rng = rng_from_seed(53);
        let u = crate::sample::haar_unitary(2, &mut rng);
        let eye = CMatrix::identity(2, 2);
        let rotated = crate::ops::apply_local_unitary(&bell_density(), &u, &eye).unwrap();
        let candidate = trivial_extension(&rotated).unwrap();
        assert!(candidate.symmetry_residual > 1e-3);
        let refined = refine_alignment(&candidate, 6, 7).unwrap();
        assert!(
            refined.symmetry_residual <= 1e-8,
            "residual {:.3e}",
            refined.symmetry_residual
        );
    }

    #[test]
    fn bob_flags_recover_marginal_for_any_dims() {
        let mut rng = rng_from_seed(54);
        let ens = random_separable(2, 3, 3, &mut rng).unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        let candidate = bob_flagged_extension(&rho, &ens).unwrap();
        assert!(candidate.is_accepted());
        assert_eq!(candidate.state.dims(), &[2, 3, 3]);
    }

    #[test]
    fn cq_extension_has_zero_cmin() {
        // 0.5 |0><0| (x) |+><+| + 0.5 |1><1| (x) |-><-|.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Ket::new(CVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)]), vec![2]).unwrap();
        let minus = Ket::new(CVector::from_vec(vec![c64(s, 0.0), c64(-s, 0.0)]), vec![2]).unwrap();
        let mut members = Vec::new();
        for (a_idx, b) in [(0usize, &plus), (1usize, &minus)] {
            let mut amps = CVector::zeros(4);
            for j in 0..2 {
                amps[a_idx * 2 + j] = b.amplitudes()[j];
            }
            members.push(EnsembleMember::Pure(Ket::new(amps, vec![2, 2]).unwrap()));
        }
        let ens = Ensemble::new(vec![0.5, 0.5], members).unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        let cq = CqDecomposition::from_ensemble(&rho, &ens).unwrap();
        let candidate = cq_extension(&rho, &cq).unwrap();
        assert!(candidate.is_accepted());
        assert_eq!(candidate.ancilla_dim, 4);
        let result = c_min(&L1, &candidate.state, &CminOptions::default()).unwrap();
        assert!(result.value.abs() <= 1e-8, "c_min = {}", result.value);
    }
}
