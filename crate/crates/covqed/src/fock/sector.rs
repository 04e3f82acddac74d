//! Sector specification and basis enumeration.
//!
//! The enumerated space is fermion ⊗ boson with
//!   index = fermion_bits · boson_dim + boson_index,
//! fermion occupation bits over a fixed global mode ordering (bit i = mode i)
//! and a mixed-radix boson index over slots ordered as: for each ghost
//! momentum (ascending position in the spec) the q-leg then the r-leg, then
//! photon modes. The q and r legs of a doublet share one cutoff, which makes
//! the metric swap an involution.

use crate::error::{CovqedError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FermionSpecies {
    Particle,
    Antiparticle,
}

/// One two-level fermion mode (momentum label by integer vector).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermionMode {
    pub n: [i32; 3],
    pub species: FermionSpecies,
}

/// One ghost doublet (q-leg + r-leg) at a lattice momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhostDoublet {
    /// Momentum index into LatticeSpec::momenta (must be active).
    pub k_idx: usize,
    /// Occupation cutoff shared by both legs.
    pub cutoff: usize,
}

/// One photon mode (momentum + polarization).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhotonMode {
    pub k_idx: usize,
    pub pol: usize,
    pub cutoff: usize,
}

#[derive(Debug, Clone)]
pub struct SectorSpec {
    pub fermions: Vec<FermionMode>,
    pub ghosts: Vec<GhostDoublet>,
    pub photons: Vec<PhotonMode>,
    pub dim_cap: usize,
}

pub const DEFAULT_DIM_CAP: usize = 1 << 20;

/// Which ghost leg a boson slot realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BosonSlotKind {
    GhostQ { ghost_idx: usize },
    GhostR { ghost_idx: usize },
    Photon { photon_idx: usize },
}

#[derive(Debug, Clone)]
pub struct BosonSlot {
    pub kind: BosonSlotKind,
    pub levels: usize, // cutoff + 1
    pub stride: usize,
}

/// Enumerated basis with index maps.
#[derive(Debug, Clone)]
pub struct Basis {
    pub sector: SectorSpec,
    pub n_fermion_modes: usize,
    pub fermion_dim: usize,
    pub boson_dim: usize,
    pub dim: usize,
    pub slots: Vec<BosonSlot>,
}

impl Basis {
    pub fn slot_of_ghost_q(&self, ghost_idx: usize) -> usize {
        self.slots
            .iter()
            .position(|s| s.kind == BosonSlotKind::GhostQ { ghost_idx })
            .expect("ghost q slot")
    }
    pub fn slot_of_ghost_r(&self, ghost_idx: usize) -> usize {
        self.slots
            .iter()
            .position(|s| s.kind == BosonSlotKind::GhostR { ghost_idx })
            .expect("ghost r slot")
    }
    pub fn slot_of_photon(&self, photon_idx: usize) -> usize {
        self.slots
            .iter()
            .position(|s| s.kind == BosonSlotKind::Photon { photon_idx })
            .expect("photon slot")
    }

    /// Occupation of boson slot `slot` within boson index `b`.
    pub fn boson_occ(&self, b: usize, slot: usize) -> usize {
        (b / self.slots[slot].stride) % self.slots[slot].levels
    }

    /// Decompose a full index into (fermion bits, boson index).
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.boson_dim, idx % self.boson_dim)
    }

    pub fn join(&self, f: usize, b: usize) -> usize {
        f * self.boson_dim + b
    }

    /// Full occupation listing of a basis state (for diagnostics).
    pub fn describe(&self, idx: usize) -> String {
        let (f, b) = self.split(idx);
        let mut parts = Vec::new();
        for i in 0..self.n_fermion_modes {
            if (f >> i) & 1 == 1 {
                parts.push(format!("f{}", i));
            }
        }
        for (s, slot) in self.slots.iter().enumerate() {
            let occ = self.boson_occ(b, s);
            if occ > 0 {
                parts.push(format!("{:?}:{}", slot.kind, occ));
            }
        }
        if parts.is_empty() {
            "vacuum".to_string()
        } else {
            parts.join(" ")
        }
    }
}

/// Enumerate the basis; fails with a sizing error naming the offending
/// sector when the dimension exceeds the cap.
pub fn enumerate_basis(sector: &SectorSpec) -> Result<Basis> {
    let n_f = sector.fermions.len();
    if n_f > 24 {
        return Err(CovqedError::sizing(format!(
            "fermion sector too large: {n_f} modes (2^{n_f} states)"
        )));
    }
    let fermion_dim: usize = 1usize << n_f;
    let mut slots = Vec::new();
    for (gi, g) in sector.ghosts.iter().enumerate() {
        slots.push(BosonSlot {
            kind: BosonSlotKind::GhostQ { ghost_idx: gi },
            levels: g.cutoff + 1,
            stride: 0,
        });
        slots.push(BosonSlot {
            kind: BosonSlotKind::GhostR { ghost_idx: gi },
            levels: g.cutoff + 1,
            stride: 0,
        });
    }
    for (pi, p) in sector.photons.iter().enumerate() {
        slots.push(BosonSlot {
            kind: BosonSlotKind::Photon { photon_idx: pi },
            levels: p.cutoff + 1,
            stride: 0,
        });
    }
    // last slot is least significant
    let mut stride = 1usize;
    for slot in slots.iter_mut().rev() {
        slot.stride = stride;
        stride = stride.checked_mul(slot.levels).ok_or_else(|| {
            CovqedError::sizing("boson dimension overflows usize".to_string())
        })?;
    }
    let boson_dim = stride;
    let dim = fermion_dim.checked_mul(boson_dim).ok_or_else(|| {
        CovqedError::sizing("total dimension overflows usize".to_string())
    })?;
    if dim > sector.dim_cap {
        let ghost_part: usize = sector.ghosts.iter().map(|g| (g.cutoff + 1).pow(2)).product();
        return Err(CovqedError::sizing(format!(
            "total dimension {dim} exceeds cap {} (fermion 2^{n_f} = {fermion_dim}, \
             ghost doublets contribute {ghost_part}, photons {})",
            sector.dim_cap,
            boson_dim / ghost_part.max(1)
        )));
    }
    Ok(Basis {
        sector: sector.clone(),
        n_fermion_modes: n_f,
        fermion_dim,
        boson_dim,
        dim,
        slots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_sector() -> SectorSpec {
        SectorSpec {
            fermions: vec![],
            ghosts: vec![],
            photons: vec![],
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    #[test]
    fn dimension_counting() {
        // 1 photon mode, cutoff 2, nothing else → dimension 3
        let mut s = empty_sector();
        s.photons.push(PhotonMode { k_idx: 0, pol: 0, cutoff: 2 });
        assert_eq!(enumerate_basis(&s).unwrap().dim, 3);

        // 1 ghost doublet cutoff 1 → dimension 4
        let mut s = empty_sector();
        s.ghosts.push(GhostDoublet { k_idx: 0, cutoff: 1 });
        assert_eq!(enumerate_basis(&s).unwrap().dim, 4);

        // 2 fermion modes only → dimension 4
        let mut s = empty_sector();
        s.fermions.push(FermionMode { n: [0, 0, 0], species: FermionSpecies::Particle });
        s.fermions.push(FermionMode { n: [1, 0, 0], species: FermionSpecies::Particle });
        assert_eq!(enumerate_basis(&s).unwrap().dim, 4);
    }

    #[test]
    fn cap_enforced() {
        let mut s = empty_sector();
        s.dim_cap = 100;
        s.ghosts.push(GhostDoublet { k_idx: 0, cutoff: 10 });
        let err = enumerate_basis(&s).unwrap_err();
        assert!(err.to_string().contains("exceeds cap"));
    }

    #[test]
    fn index_roundtrip() {
        let mut s = empty_sector();
        s.fermions.push(FermionMode { n: [0, 0, 0], species: FermionSpecies::Particle });
        s.ghosts.push(GhostDoublet { k_idx: 0, cutoff: 2 });
        s.ghosts.push(GhostDoublet { k_idx: 1, cutoff: 1 });
        let b = enumerate_basis(&s).unwrap();
        assert_eq!(b.dim, 2 * 9 * 4);
        for idx in 0..b.dim {
            let (f, bos) = b.split(idx);
            assert_eq!(b.join(f, bos), idx);
        }
        // occupations are consistent with strides
        let q0 = b.slot_of_ghost_q(0);
        let r1 = b.slot_of_ghost_r(1);
        let mut seen_q0 = std::collections::HashSet::new();
        for bos in 0..b.boson_dim {
            seen_q0.insert(b.boson_occ(bos, q0));
            assert!(b.boson_occ(bos, r1) < 2);
        }
        assert_eq!(seen_q0.len(), 3);
    }
}
