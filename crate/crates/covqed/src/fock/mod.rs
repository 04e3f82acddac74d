//! Finite-dimensional representation layer: occupation-truncated boson
//! modes, a two-leg ghost doublet per momentum realizing the star algebra,
//! fermion modes with exact anticommutators, the metric η, and exponential
//! action.
//!
//! The star algebra [a_Q, a_Q*] = 0 with both operators nonzero cannot hold
//! for an operator and its representation adjoint; it is realized here by a
//! (q, r) doublet per momentum with a_Q = lower(q), a_Q* = raise(r), and the
//! swap metric η making the star coincide with the physical adjoint.

pub mod csr;
pub mod expm;
pub mod linop;
pub mod metric;
pub mod sector;

pub use csr::{Csr, SmallMat};
pub use expm::{expm_action, ExpmResult};
pub use linop::{
    coupled_term, dot, fermion_annihilation_csr, fermion_op, ladder, lift_fermion, norm2,
    BosonFactor, BosonMode, KronTerm, LadderKind, LinOp, Workspace,
};
pub use metric::{guard_band_check, metric, Metric};
pub use sector::{
    enumerate_basis, Basis, BosonSlot, BosonSlotKind, FermionMode, FermionSpecies, GhostDoublet,
    PhotonMode, SectorSpec, DEFAULT_DIM_CAP,
};

use num_complex::Complex64;

/// State vector with a cached physical norm.
#[derive(Debug, Clone)]
pub struct StateVec {
    pub data: Vec<Complex64>,
    pub phys_norm_sqr: Option<f64>,
}

impl StateVec {
    pub fn new(data: Vec<Complex64>) -> Self {
        StateVec {
            data,
            phys_norm_sqr: None,
        }
    }

    pub fn vacuum(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim];
        data[0] = Complex64::new(1.0, 0.0);
        StateVec {
            data,
            phys_norm_sqr: Some(1.0),
        }
    }

    pub fn phys_norm_sqr(&mut self, eta: &Metric) -> f64 {
        if let Some(v) = self.phys_norm_sqr {
            return v;
        }
        let v = eta.phys_norm_sqr(&self.data);
        self.phys_norm_sqr = Some(v);
        v
    }

    /// Normalize to physical norm 1 (requires positive physical norm).
    pub fn phys_normalize(&mut self, eta: &Metric) -> crate::error::Result<()> {
        let n = self.phys_norm_sqr(eta);
        if n <= 0.0 {
            return Err(crate::error::CovqedError::numerical(format!(
                "state has non-positive physical norm {n}; cannot normalize"
            )));
        }
        let s = 1.0 / n.sqrt();
        for v in self.data.iter_mut() {
            *v *= s;
        }
        self.phys_norm_sqr = Some(1.0);
        Ok(())
    }
}
