//! Unitary dilation of a Kraus map on system ⊗ ancilla.
//!
//! Basis ordering is system-major: `|s⟩⊗|e_a⟩` has index `s·M + a`, and the
//! ancilla reference state `|0⟩` is `|e_0⟩`. The two columns for `|s⟩⊗|0⟩` hold
//! the stacked Kraus columns; the other `2M − 2` columns are completed by
//! modified Gram–Schmidt over the standard basis in index order.

use crate::error::{LandscapeError, Result};
use crate::linalg::{max_abs, orthonormality_residual, CMatrix, Mat2, C64, ONE, ZERO};
use crate::qcore::kraus::{apply_kraus, KrausSet};
use crate::qcore::state::DensityMatrix;

pub const UNITARITY_TOL: f64 = 1e-10;

/// Candidates whose residual norm falls below this are skipped.
const PARALLEL_SKIP: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DilatedUnitary {
    ancilla_dim: usize,
    entries: CMatrix,
}

impl DilatedUnitary {
    pub fn from_entries(ancilla_dim: usize, entries: CMatrix) -> Result<Self> {
        let dim = 2 * ancilla_dim;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(LandscapeError::Dimension(format!(
                "dilation with ancilla dimension {ancilla_dim} needs {dim}×{dim}, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let residual = orthonormality_residual(&entries);
        if residual >= UNITARITY_TOL {
            return Err(LandscapeError::NotOrthonormal(residual));
        }
        Ok(Self { ancilla_dim, entries })
    }

    pub fn dim(&self) -> usize {
        2 * self.ancilla_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn unitarity_residual(&self) -> f64 {
        orthonormality_residual(&self.entries)
    }
}

pub fn dilate(k: &KrausSet) -> Result<DilatedUnitary> {
    k.check()?;
    let m = k.m();
    let dim = 2 * m;
    let mut u = CMatrix::zeros(dim, dim);
    for s in 0..2 {
        let col = s * m;
        for (a, op) in k.operators().iter().enumerate() {
            for r in 0..2 {
                u[(r * m + a, col)] = op[(r, s)];
            }
        }
    }

    let fixed = [0, m];
    let mut filled: Vec<usize> = fixed.to_vec();
    let mut free = (0..dim).filter(|j| !fixed.contains(j));
    for candidate in 0..dim {
        if filled.len() == dim {
            break;
        }
        let mut v = CMatrix::zeros(dim, 1);
        v[(candidate, 0)] = ONE;
        for _ in 0..2 {
            for &j in &filled {
                let proj = u.column(j).dotc(&v.column(0));
                let uj = u.column(j).clone_owned();
                v.column_mut(0).axpy(-proj, &uj, ONE);
            }
        }
        let nrm = v.column(0).norm();
        if nrm < PARALLEL_SKIP {
            continue;
        }
        let slot = free.next().expect("free columns remain while basis is incomplete");
        let col = v.column(0) / C64::from(nrm);
        u.set_column(slot, &col);
        filled.push(slot);
    }
    if filled.len() != dim {
        return Err(LandscapeError::RankCollapse(0.0));
    }
    DilatedUnitary::from_entries(m, u)
}

/// `Tr_anc{U(ρ⊗|0⟩⟨0|)U†}` as a raw 2×2 matrix.
pub fn reduced_output(u: &DilatedUnitary, rho: &DensityMatrix) -> Mat2 {
    let m = u.ancilla_dim;
    let dim = u.dim();
    let mut big = CMatrix::from_element(dim, dim, ZERO);
    for s in 0..2 {
        for t in 0..2 {
            big[(s * m, t * m)] = rho.entries()[(s, t)];
        }
    }
    let evolved = &u.entries * big * u.entries.adjoint();
    let mut out = Mat2::zeros();
    for r in 0..2 {
        for s in 0..2 {
            out[(r, s)] = (0..m).map(|a| evolved[(r * m + a, s * m + a)]).sum();
        }
    }
    out
}

/// `‖Tr_anc{U(ρ⊗|0⟩⟨0|)U†} − Φ(ρ)‖_max`.
pub fn verify_dilation(u: &DilatedUnitary, k: &KrausSet, rho: &DensityMatrix) -> Result<f64> {
    if u.ancilla_dim != k.m() {
        return Err(LandscapeError::Dimension(format!(
            "unitary has ancilla dimension {}, Kraus set has {} operators",
            u.ancilla_dim,
            k.m()
        )));
    }
    let direct = apply_kraus(k, rho)?;
    let via = reduced_output(u, rho);
    let diff = CMatrix::from_iterator(2, 2, (via - direct.entries()).iter().cloned());
    Ok(max_abs(&diff))
}
