//! Operations on labeled multipartite states: tensor products, partial
//! traces, factor permutations, swaps, dephasing, and local unitaries.

use crate::error::{QcorrError, Result};
use crate::linalg::{unitarity_deviation, CMatrix, CVector, C64};
use crate::state::{DensityMatrix, Ket, Party};
use crate::tol;

/// Decodes flat index `index` into per-factor indices for `dims` (row-major:
/// the first factor varies slowest).
fn decode(index: usize, dims: &[usize], out: &mut [usize]) {
    let mut rem = index;
    for k in (0..dims.len()).rev() {
        out[k] = rem % dims[k];
        rem /= dims[k];
    }
}

fn encode(indices: &[usize], dims: &[usize]) -> usize {
    let mut flat = 0usize;
    for (k, &d) in dims.iter().enumerate() {
        flat = flat * d + indices[k];
    }
    flat
}

/// Tensor product. The concatenated labels must still form a valid layout
/// (unique, Alice factors before Bob factors).
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let total = a.dim().checked_mul(b.dim()).ok_or(QcorrError::SizeLimit {
        context: "tensor dimension overflows".into(),
    })?;
    if total > tol::MAX_TOTAL_DIM {
        return Err(QcorrError::SizeLimit {
            context: format!("tensor dimension {total} exceeds max {}", tol::MAX_TOTAL_DIM),
        });
    }
    let data = a.data().kronecker(b.data());
    let dims: Vec<usize> = a.dims().iter().chain(b.dims()).copied().collect();
    let labels: Vec<String> = a.labels().iter().chain(b.labels()).cloned().collect();
    crate::state::validate_layout(&dims, &labels, data.nrows())?;
    Ok(DensityMatrix::new_unchecked(data, dims, labels))
}

/// Traces out every factor not named in `keep`. The kept factors retain their
/// original order and labels.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    let n = rho.n_factors();
    let mut keep_idx: Vec<usize> = Vec::with_capacity(keep.len());
    for label in keep {
        let idx = rho
            .factor_index(label)
            .ok_or_else(|| QcorrError::InvalidLabels {
                context: format!("unknown factor label '{label}'"),
            })?;
        keep_idx.push(idx);
    }
    keep_idx.sort_unstable();
    keep_idx.dedup();
    if keep_idx.is_empty() {
        return Err(QcorrError::InvalidArgument {
            context: "partial trace must keep at least one factor".into(),
        });
    }
    let trace_idx: Vec<usize> = (0..n).filter(|k| !keep_idx.contains(k)).collect();
    if trace_idx.is_empty() {
        return Ok(rho.clone());
    }

    let dims = rho.dims();
    let kept_dims: Vec<usize> = keep_idx.iter().map(|&k| dims[k]).collect();
    let kept_labels: Vec<String> = keep_idx.iter().map(|&k| rho.labels()[k].clone()).collect();
    let out_dim: usize = kept_dims.iter().product();
    let mut out = CMatrix::zeros(out_dim, out_dim);

    let total = rho.dim();
    let mut row_idx = vec![0usize; n];
    let mut col_idx = vec![0usize; n];
    let mut kept_row = vec![0usize; keep_idx.len()];
    let mut kept_col = vec![0usize; keep_idx.len()];
    for r in 0..total {
        decode(r, dims, &mut row_idx);
        for c in 0..total {
            decode(c, dims, &mut col_idx);
            if trace_idx.iter().any(|&t| row_idx[t] != col_idx[t]) {
                continue;
            }
            for (slot, &k) in keep_idx.iter().enumerate() {
                kept_row[slot] = row_idx[k];
                kept_col[slot] = col_idx[k];
            }
            let i = encode(&kept_row, &kept_dims);
            let j = encode(&kept_col, &kept_dims);
            out[(i, j)] += rho.data()[(r, c)];
        }
    }
    Ok(DensityMatrix::new_unchecked(out, kept_dims, kept_labels))
}

/// Marginal on all factors owned by `party`.
pub fn party_marginal(rho: &DensityMatrix, party: Party) -> Result<DensityMatrix> {
    let labels = rho.party_labels(party);
    if labels.is_empty() {
        return Err(QcorrError::InvalidArgument {
            context: format!("state has no {party:?} factors"),
        });
    }
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    partial_trace(rho, &refs)
}

/// Reorders tensor factors: output factor `i` is input factor `perm[i]`.
/// Labels and dims move with their factors, so the result may need
/// `relabeled` to restore a valid Alice-before-Bob layout.
pub(crate) fn permute_factors_raw(
    data: &CMatrix,
    dims: &[usize],
    perm: &[usize],
) -> (CMatrix, Vec<usize>) {
    let n = dims.len();
    debug_assert_eq!(perm.len(), n);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let total = data.nrows();
    let mut out = CMatrix::zeros(total, total);
    let mut new_row = vec![0usize; n];
    let mut new_col = vec![0usize; n];
    let mut old_row = vec![0usize; n];
    let mut old_col = vec![0usize; n];
    for r in 0..total {
        decode(r, &new_dims, &mut new_row);
        for (i, &p) in perm.iter().enumerate() {
            old_row[p] = new_row[i];
        }
        let src_r = encode(&old_row, dims);
        for c in 0..total {
            decode(c, &new_dims, &mut new_col);
            for (i, &p) in perm.iter().enumerate() {
                old_col[p] = new_col[i];
            }
            let src_c = encode(&old_col, dims);
            out[(r, c)] = data[(src_r, src_c)];
        }
    }
    (out, new_dims)
}

/// Reorders tensor factors by `perm` (output position `i` takes input factor
/// `perm[i]`); labels travel with their factors and the permuted layout must
/// remain valid.
pub fn permute_factors(rho: &DensityMatrix, perm: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_factors();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(QcorrError::InvalidArgument {
            context: format!("perm {:?} is not a permutation of 0..{n}", perm),
        });
    }
    let (data, dims) = permute_factors_raw(rho.data(), rho.dims(), perm);
    let labels: Vec<String> = perm.iter().map(|&p| rho.labels()[p].clone()).collect();
    DensityMatrix::new_unchecked(data, dims, labels.clone()).relabeled(labels)
}

/// Swaps the contents of two equal-dimension factors; the label layout stays
/// put, so `|01><01|` on (A, B) becomes `|10><10|` on (A, B).
pub fn apply_swap(rho: &DensityMatrix, pair: (&str, &str)) -> Result<DensityMatrix> {
    let a = rho
        .factor_index(pair.0)
        .ok_or_else(|| QcorrError::InvalidLabels {
            context: format!("unknown factor label '{}'", pair.0),
        })?;
    let b = rho
        .factor_index(pair.1)
        .ok_or_else(|| QcorrError::InvalidLabels {
            context: format!("unknown factor label '{}'", pair.1),
        })?;
    if a == b {
        return Ok(rho.clone());
    }
    if rho.dims()[a] != rho.dims()[b] {
        return Err(QcorrError::DimensionMismatch {
            context: format!(
                "swap of '{}' (dim {}) with '{}' (dim {})",
                pair.0,
                rho.dims()[a],
                pair.1,
                rho.dims()[b]
            ),
        });
    }
    let mut perm: Vec<usize> = (0..rho.n_factors()).collect();
    perm.swap(a, b);
    let (data, dims) = permute_factors_raw(rho.data(), rho.dims(), &perm);
    Ok(DensityMatrix::new_unchecked(
        data,
        dims,
        rho.labels().to_vec(),
    ))
}

/// Full party swap: pairs Alice factor `i` with Bob factor `i` and swaps each
/// pair. For labels (A, A', B, B') this is the map exchanging AA' with BB'.
pub fn swap_parties(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let alice = rho.party_labels(Party::Alice);
    let bob = rho.party_labels(Party::Bob);
    if alice.len() != bob.len() {
        return Err(QcorrError::InvalidArgument {
            context: format!(
                "party swap needs matching factor counts, got {} Alice and {} Bob",
                alice.len(),
                bob.len()
            ),
        });
    }
    let mut out = rho.clone();
    for (a, b) in alice.iter().zip(bob.iter()) {
        out = apply_swap(&out, (a, b))?;
    }
    Ok(out)
}

/// Max entry of |rho - SWAP(rho)|; zero iff the state is party-swap invariant.
pub fn swap_symmetry_residual(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho.max_abs_diff(&swap_parties(rho)?))
}

fn check_basis(basis: &CMatrix, dim: usize, what: &str) -> Result<()> {
    if basis.nrows() != dim || basis.ncols() != dim {
        return Err(QcorrError::DimensionMismatch {
            context: format!(
                "{what} is {}x{}, state factor dimension is {dim}",
                basis.nrows(),
                basis.ncols()
            ),
        });
    }
    let dev = unitarity_deviation(basis);
    if dev > tol::ORTHONORMALITY {
        return Err(QcorrError::NotOrthonormal { max_dev: dev });
    }
    Ok(())
}

/// Full dephasing in an orthonormal basis: keeps the diagonal of
/// `B^dag rho B` and maps back.
pub fn dephase(rho: &DensityMatrix, basis: &CMatrix) -> Result<DensityMatrix> {
    check_basis(basis, rho.dim(), "dephasing basis")?;
    let rotated = basis.adjoint() * rho.data() * basis;
    let mut diag = CMatrix::zeros(rho.dim(), rho.dim());
    for k in 0..rho.dim() {
        diag[(k, k)] = C64::from(rotated[(k, k)].re);
    }
    let data = basis * diag * basis.adjoint();
    Ok(DensityMatrix::new_unchecked(
        data,
        rho.dims().to_vec(),
        rho.labels().to_vec(),
    ))
}

/// Dephases only Alice's side in an orthonormal basis of her full factor
/// group: applies the pinching sum_i (P_i (x) 1) rho (P_i (x) 1).
pub fn dephase_alice(rho: &DensityMatrix, basis_a: &CMatrix) -> Result<DensityMatrix> {
    let dim_a = rho.party_dim(Party::Alice);
    let dim_b = rho.party_dim(Party::Bob);
    if dim_b == 0 {
        return Err(QcorrError::InvalidArgument {
            context: "dephase_alice needs at least one Bob factor".into(),
        });
    }
    check_basis(basis_a, dim_a, "Alice basis")?;
    let eye_b = CMatrix::identity(dim_b, dim_b);
    let u = basis_a.kronecker(&eye_b);
    let rotated = u.adjoint() * rho.data() * &u;
    // Zero every block coupling different Alice indices.
    let mut pinched = CMatrix::zeros(rho.dim(), rho.dim());
    for i in 0..dim_a {
        for r in 0..dim_b {
            for c in 0..dim_b {
                let idx = (i * dim_b + r, i * dim_b + c);
                pinched[idx] = rotated[idx];
            }
        }
    }
    let data = &u * pinched * u.adjoint();
    Ok(DensityMatrix::new_unchecked(
        data,
        rho.dims().to_vec(),
        rho.labels().to_vec(),
    ))
}

/// Conjugates by `U_A (x) U_B`, each unitary acting on the full factor group
/// of its party.
pub fn apply_local_unitary(
    rho: &DensityMatrix,
    u_a: &CMatrix,
    u_b: &CMatrix,
) -> Result<DensityMatrix> {
    let dim_a = rho.party_dim(Party::Alice);
    let dim_b = rho.party_dim(Party::Bob);
    check_basis(u_a, dim_a, "Alice unitary")?;
    check_basis(u_b, dim_b, "Bob unitary")?;
    let u = u_a.kronecker(u_b);
    let data = &u * rho.data() * u.adjoint();
    Ok(DensityMatrix::new_unchecked(
        data,
        rho.dims().to_vec(),
        rho.labels().to_vec(),
    ))
}

/// Applies `U_A (x) U_B` to a two-factor ket.
pub fn apply_local_unitary_ket(psi: &Ket, u_a: &CMatrix, u_b: &CMatrix) -> Result<Ket> {
    let (dim_a, dim_b) = psi.bipartite_dims()?;
    check_basis(u_a, dim_a, "Alice unitary")?;
    check_basis(u_b, dim_b, "Bob unitary")?;
    let amplitudes: CVector = u_a.kronecker(u_b) * psi.amplitudes();
    Ok(Ket::new_unchecked(amplitudes, psi.dims().to_vec()))
}
