//! Physical reference states with nonzero ⟨∇·j⟩.
//!
//! |v′⟩ = D · (|fermion wavepacket⟩ ⊗ |photon vacuum⟩ ⊗ |ghost vacuum⟩)
//! where the wavepacket superposes two unequal-momentum particle modes and
//! D = exp(−Σ_k q†(k) ĵ₀(k)/(2ω^{3/2})) is the ghost dressing. With the
//! complete fermion sector the charge densities commute, the dressing
//! enforces Ω(k)|v′⟩ = 0 exactly in exact arithmetic, and the physical norm
//! is exactly 1.

use super::fields::FieldSet;
use super::{phys_expectation, Model};
use crate::error::{CovqedError, Result};
use crate::fock::{
    expm_action, guard_band_check, norm2, BosonFactor, FermionSpecies, KronTerm, LinOp, SmallMat,
    StateVec, Workspace,
};
use crate::modes::{spectral_div, ScalarField, VectorField};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

const C0: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct ReferenceRecipe {
    /// Momentum labels of the two particle modes in the wavepacket.
    pub wavepacket: [[i32; 3]; 2],
    /// Relative amplitudes (normalized internally).
    pub amplitudes: [Complex64; 2],
}

impl Default for ReferenceRecipe {
    fn default() -> Self {
        ReferenceRecipe {
            wavepacket: [[0, 0, 0], [1, 0, 0]],
            amplitudes: [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateDiagnostics {
    pub omega_residual: f64,
    pub phys_norm: f64,
    pub energy: f64,
    pub g_expectation_max: f64,
    pub continuity_residual: f64,
    pub dressing_leakage: f64,
    pub divergence_max: f64,
    pub total_charge: f64,
}

pub struct PhysicalState {
    pub state: StateVec,
    pub divergence: ScalarField,
    pub diagnostics: StateDiagnostics,
}

/// The dressing generator S = Σ_{k∈act} ĵ₀(k) q†(k) / (2ω^{3/2}).
pub fn dressing_generator(fs: &FieldSet) -> LinOp {
    let mut terms = Vec::new();
    for &ki in &fs.lattice.active {
        let g = match fs.ghost_of_k.get(&ki) {
            Some(&g) => g,
            None => continue,
        };
        let j0 = match fs.j_hat_csr(fs.lattice.momenta[ki].n, 0) {
            Some(m) if m.nnz() > 0 => m.clone(),
            _ => continue,
        };
        let w = fs.omega_k(ki);
        let c = 0.5 / (w * w.sqrt());
        let slot = fs.basis.slot_of_ghost_q(g);
        let raise = SmallMat::raising(fs.basis.slots[slot].levels);
        terms.push(KronTerm {
            coeff: Complex64::new(c, 0.0),
            fermion: Some(Arc::new(j0)),
            bosons: vec![BosonFactor::from_small(&fs.basis, slot, &raise)],
        });
    }
    LinOp::from_terms(&fs.basis, terms)
}

/// Expectation fields ⟨j_µ(x)⟩ (physical metric) over all sites.
pub fn current_expectation_fields(
    model: &Model,
    v: &[Complex64],
    ws: &mut Workspace,
) -> (ScalarField, VectorField) {
    let fs = &model.fields;
    let n = model.lattice.n_sites();
    let mut j0 = ScalarField::zeros(&model.lattice);
    let mut ji: VectorField = (0..model.lattice.dim)
        .map(|_| ScalarField::zeros(&model.lattice))
        .collect();
    for x in 0..n {
        let v0 = phys_expectation(&fs.eta, &fs.j_at(x, 0), v, ws);
        j0.values[x] = v0;
        for ax in 0..model.lattice.dim {
            ji[ax].values[x] = phys_expectation(&fs.eta, &fs.j_at(x, 1 + ax), v, ws);
        }
    }
    // expectation fields of hermitian operators are real up to rounding
    let scrub = |f: &mut ScalarField| {
        let tol = 1e-10 * f.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if f.values.iter().all(|v| v.im.abs() <= tol) {
            for v in f.values.iter_mut() {
                *v = Complex64::new(v.re, 0.0);
            }
            f.is_real = true;
        }
    };
    scrub(&mut j0);
    for f in ji.iter_mut() {
        scrub(f);
    }
    (j0, ji)
}

pub fn build_reference_state(model: &Model, recipe: &ReferenceRecipe) -> Result<PhysicalState> {
    let fs = &model.fields;
    let basis = &model.basis;
    let tols = &model.config.tolerances;
    let mut ws = Workspace::new(basis.dim);

    if recipe.wavepacket[0] == recipe.wavepacket[1] {
        return Err(CovqedError::recipe(
            "wavepacket must superpose two unequal-momentum modes; equal momenta give a \
             stationary density and D(x) = 0, so the premise ⟨∇·j⟩ ≠ 0 is unmet",
        ));
    }

    // locate the particle modes
    let mut idx = [usize::MAX; 2];
    for (which, lab) in recipe.wavepacket.iter().enumerate() {
        idx[which] = fs
            .fermions
            .modes
            .iter()
            .position(|m| m.mode.n == *lab && m.mode.species == FermionSpecies::Particle)
            .ok_or_else(|| {
                CovqedError::recipe(format!("no particle mode with label {:?} in the sector", lab))
            })?;
    }

    // fermion wavepacket ⊗ vacuum
    let mut v0 = vec![C0; basis.dim];
    let nrm = (recipe.amplitudes[0].norm_sqr() + recipe.amplitudes[1].norm_sqr()).sqrt();
    for which in 0..2 {
        let fbits = 1usize << idx[which];
        v0[basis.join(fbits, 0)] = recipe.amplitudes[which] / nrm;
    }

    // dressing
    let s = dressing_generator(fs);
    let neg_s = s.scale(Complex64::new(-1.0, 0.0));
    let dressed = expm_action(&neg_s, &v0, tols.expm_tol)?;
    let mut state = StateVec::new(dressed.vector);

    // diagnostics
    let rep_norm = norm2(&state.data);
    let mut omega_residual: f64 = 0.0;
    for &ki in &model.lattice.active {
        let om = fs.omega_op(ki)?;
        let mut r = vec![C0; basis.dim];
        om.apply_into(&state.data, &mut r, &mut ws);
        omega_residual = omega_residual.max(norm2(&r) / rep_norm);
    }
    let phys_norm = state.phys_norm_sqr(&fs.eta).sqrt();
    state.phys_normalize(&fs.eta)?;

    let energy = phys_expectation(&fs.eta, &model.hamiltonian, &state.data, &mut ws).re;

    let mut g_expectation_max: f64 = 0.0;
    for x in 0..model.lattice.n_sites() {
        let g = phys_expectation(&fs.eta, &fs.g_at(x), &state.data, &mut ws);
        g_expectation_max = g_expectation_max.max(g.norm());
    }

    let (j0_field, ji_fields) = current_expectation_fields(model, &state.data, &mut ws);
    let divergence = spectral_div(&model.lattice, &ji_fields);
    let div_real = ScalarField {
        values: divergence
            .values
            .iter()
            .map(|v| Complex64::new(v.re, 0.0))
            .collect(),
        is_real: true,
    };
    let divergence_max = div_real.values.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let current_scale = ji_fields
        .iter()
        .flat_map(|f| f.values.iter())
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        * model.lattice.momenta.iter().map(|m| m.mag).fold(0.0, f64::max);
    if divergence_max <= 1e-12 * current_scale.max(1e-30) {
        return Err(CovqedError::recipe(
            "the divergence field D(x) = ⟨v′|∇·j(x)|v′⟩ vanishes identically; the premise \
             ⟨v′|∇·j(x)|v′⟩ ≠ 0 of the construction is unmet for this recipe",
        ));
    }

    // continuity oracle: D(x) = −i⟨[H, j₀(x)]⟩
    let mut continuity_residual: f64 = 0.0;
    for x in 0..model.lattice.n_sites() {
        let j0x = fs.j_at(x, 0);
        let mut hj = vec![C0; basis.dim];
        {
            let mut tmp = vec![C0; basis.dim];
            j0x.apply_into(&state.data, &mut tmp, &mut ws);
            model.hamiltonian.apply_into(&tmp, &mut hj, &mut ws);
            let mut tmp2 = vec![C0; basis.dim];
            model.hamiltonian.apply_into(&state.data, &mut tmp2, &mut ws);
            let mut jh = vec![C0; basis.dim];
            j0x.apply_into(&tmp2, &mut jh, &mut ws);
            for (a, b) in hj.iter_mut().zip(jh.iter()) {
                *a -= b;
            }
        }
        let val = {
            let num = fs.eta.phys_inner(&state.data, &hj);
            let den = fs.eta.phys_inner(&state.data, &state.data);
            num / den
        };
        let oracle = (Complex64::new(0.0, -1.0) * val).re;
        continuity_residual = continuity_residual.max((div_real.values[x].re - oracle).abs());
    }

    let dressing_leakage = guard_band_check(basis, &fs.eta, &state.data, 2);
    let total_charge = {
        let a_d = model.lattice.spacing.powi(model.lattice.dim as i32);
        j0_field.values.iter().map(|v| v.re).sum::<f64>() * a_d
    };

    Ok(PhysicalState {
        state,
        divergence: div_real,
        diagnostics: StateDiagnostics {
            omega_residual,
            phys_norm,
            energy,
            g_expectation_max,
            continuity_residual,
            dressing_leakage,
            divergence_max,
            total_charge,
        },
    })
}
