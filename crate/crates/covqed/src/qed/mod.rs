//! Numeric model: fields and Hamiltonian of the covariant gauge on the
//! lattice, the conformance suite tying the representation to the
//! Heisenberg relations, and physical reference states.

pub mod conformance;
pub mod fermions;
pub mod fields;
pub mod hamiltonian;
pub mod reference;

pub use conformance::{conformance_suite, ConformanceEntry, ConformanceReport};
pub use fields::FieldSet;
pub use hamiltonian::{build_terms, AssembleOptions, HamiltonianTerms};
pub use reference::{build_reference_state, PhysicalState, ReferenceRecipe};

use crate::error::{CovqedError, Result};
use crate::fock::{
    enumerate_basis, Basis, FermionMode, GhostDoublet, LinOp, Metric, PhotonMode, SectorSpec,
    Workspace, DEFAULT_DIM_CAP,
};
use crate::modes::{build_lattice, LatticeSpec};
use fermions::{complete_mode_list, FermionSector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance block; every threshold the suites use is pinned here.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub conformance: f64,
    pub omega_residual: f64,
    pub g_expectation: f64,
    pub continuity_oracle: f64,
    pub energy_rtol: f64,
    pub energy_atol: f64,
    pub slope_rtol: f64,
    pub norm_tol: f64,
    pub drift_tol: f64,
    pub expm_tol: f64,
    pub leakage_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            conformance: 1e-10,
            omega_residual: 1e-10,
            g_expectation: 1e-10,
            continuity_oracle: 1e-8,
            energy_rtol: 1e-6,
            energy_atol: 1e-9,
            slope_rtol: 1e-6,
            norm_tol: 1e-10,
            drift_tol: 1e-9,
            expm_tol: 1e-12,
            leakage_threshold: 1e-8,
        }
    }
}

/// How the fermion sector is populated.
#[derive(Debug, Clone, PartialEq)]
pub enum FermionModeSpec {
    /// Every lattice momentum, both species (both helicities in d = 3):
    /// the position-local sector with exactly commuting charge densities.
    Complete,
    Explicit(Vec<FermionMode>),
}

#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub box_length: f64,
    pub sites_per_axis: usize,
    pub dim: usize,
    pub mass: f64,
    pub coupling: f64,
    pub gamma: f64,
    pub normal_ordering: bool,
    pub fermion_modes: FermionModeSpec,
    pub ghost_cutoff: usize,
    /// Per-momentum cutoff overrides by momentum label (an override applies
    /// to the named momentum and its negative).
    pub ghost_overrides: Vec<([i32; 3], usize)>,
    pub photon_cutoff: usize,
    pub dim_cap: usize,
    pub tolerances: Tolerances,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mass < 0.0 {
            return Err(CovqedError::config("mass must be >= 0"));
        }
        if !self.normal_ordering {
            return Err(CovqedError::config(
                "only the normal-ordered Hamiltonian convention is implemented \
                 (vacuum energy 0); set normal_ordering = true",
            ));
        }
        Ok(())
    }
}

/// The assembled model.
pub struct Model {
    pub config: ModelConfig,
    pub lattice: LatticeSpec,
    pub basis: Basis,
    pub fields: FieldSet,
    pub terms: HamiltonianTerms,
    pub hamiltonian: LinOp,
}

pub fn build_model(config: &ModelConfig) -> Result<Model> {
    config.validate()?;
    let lattice = build_lattice(config.box_length, config.sites_per_axis, config.dim)?;
    let fermion_modes = match &config.fermion_modes {
        FermionModeSpec::Complete => complete_mode_list(&lattice),
        FermionModeSpec::Explicit(v) => v.clone(),
    };
    let mut ghosts = Vec::new();
    for &ki in &lattice.active {
        let n = lattice.momenta[ki].n;
        let neg_n = lattice.momenta[lattice.momenta[ki].neg].n;
        let cutoff = config
            .ghost_overrides
            .iter()
            .find(|(lab, _)| *lab == n || *lab == neg_n)
            .map(|(_, c)| *c)
            .unwrap_or(config.ghost_cutoff);
        ghosts.push(GhostDoublet { k_idx: ki, cutoff });
    }
    let mut photons = Vec::new();
    if lattice.dim == 3 {
        for &ki in &lattice.active {
            for pol in 0..2 {
                photons.push(PhotonMode {
                    k_idx: ki,
                    pol,
                    cutoff: config.photon_cutoff,
                });
            }
        }
    }
    let sector = SectorSpec {
        fermions: fermion_modes.clone(),
        ghosts,
        photons,
        dim_cap: if config.dim_cap == 0 {
            DEFAULT_DIM_CAP
        } else {
            config.dim_cap
        },
    };
    let basis = enumerate_basis(&sector)?;
    let fsector = FermionSector::new(&lattice, &fermion_modes, config.mass)?;
    let fields = FieldSet::build(&lattice, &basis, fsector, config.coupling)?;
    let terms = build_terms(&fields);
    let hamiltonian = terms.assemble(
        &fields,
        AssembleOptions {
            gamma: config.gamma,
            drop_g_div_a: false,
        },
    );
    Ok(Model {
        config: config.clone(),
        lattice,
        basis,
        fields,
        terms,
        hamiltonian,
    })
}

/// Physical-metric expectation ⟨v|η A v⟩ / ⟨v|η v⟩.
pub fn phys_expectation(
    eta: &Metric,
    op: &LinOp,
    v: &[Complex64],
    ws: &mut Workspace,
) -> Complex64 {
    let mut av = vec![Complex64::new(0.0, 0.0); v.len()];
    op.apply_into(v, &mut av, ws);
    let num = eta.phys_inner(v, &av);
    let den = eta.phys_inner(v, v);
    num / den
}
