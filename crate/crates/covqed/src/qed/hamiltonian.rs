//! Hamiltonian assembly from the density terms, in momentum space:
//! a^d Σ_x F₁(x) F₂(x) = Σ_k F̂₁(k) F̂₂(neg k), with every quadratic
//! ladder product put into normal order term-wise (contraction constants
//! dropped, so the bare Fock vacuum has energy 0).
//!
//! H = a^d Σ_x [ ½Π·Π + ½|∇×A|² + G∇·A + A⁰∇·Π − ½(1−γ)G²
//!               + ψ†(−iα·∇ + βm)ψ + j₀A⁰ − j·A ]
//!
//! Each density term is kept as its own term list so tests can assemble
//! mutated Hamiltonians (e.g. without G∇·A).

use super::fermions::dirac_matrices;
use super::fields::{FieldCoeff, FieldSet, LegOp};
use crate::fock::{Basis, BosonFactor, KronTerm, LinOp, SmallMat};
use num_complex::Complex64;
use std::sync::Arc;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// The separately assembled pieces of H.
pub struct HamiltonianTerms {
    pub pi_sq: Vec<KronTerm>,
    pub b_sq: Vec<KronTerm>,
    pub g_div_a: Vec<KronTerm>,
    pub a0_div_pi: Vec<KronTerm>,
    /// −½ G² (scaled by (1−γ) at assembly).
    pub g_sq_half_neg: Vec<KronTerm>,
    pub fermion_kinetic: Vec<KronTerm>,
    pub j0_a0: Vec<KronTerm>,
    pub j_dot_a: Vec<KronTerm>,
}

#[derive(Debug, Clone, Copy)]
pub struct AssembleOptions {
    pub gamma: f64,
    /// Mutation hook: drop the G∇·A term (conformance must detect this).
    pub drop_g_div_a: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            gamma: 1.0,
            drop_g_div_a: false,
        }
    }
}

/// Normal-order a two-ladder product op1·op2 into KronTerm boson factors.
/// Same slot: compose the small matrices in normal order (raising first),
/// dropping the scalar contraction. Different slots: two factors.
fn ordered_boson_factors(
    basis: &Basis,
    op1: (LegOp, Complex64),
    op2: (LegOp, Complex64),
) -> Option<(Complex64, Vec<(usize, SmallMat)>)> {
    let (a, ca) = op1;
    let (b, cb) = op2;
    let coeff = ca * cb;
    if coeff == C0 {
        return None;
    }
    let slot_a = slot_of(basis, a);
    let slot_b = slot_of(basis, b);
    if slot_a == slot_b {
        // order: creation then annihilation; a·b with a annihilation and b
        // creation swaps (the commutator scalar is the dropped contraction)
        let (first, second) = if !a.is_raising() && b.is_raising() {
            (b, a)
        } else {
            (a, b)
        };
        let m = small_of(basis, first).matmul(&small_of(basis, second));
        Some((coeff, vec![(slot_a, m)]))
    } else {
        Some((
            coeff,
            vec![
                (slot_a, small_of(basis, a)),
                (slot_b, small_of(basis, b)),
            ],
        ))
    }
}

fn slot_of(basis: &Basis, op: LegOp) -> usize {
    match op {
        LegOp::QLow(g) | LegOp::QRaise(g) => basis.slot_of_ghost_q(g),
        LegOp::RLow(g) | LegOp::RRaise(g) => basis.slot_of_ghost_r(g),
        LegOp::PhLow(p) | LegOp::PhRaise(p) => basis.slot_of_photon(p),
    }
}

fn small_of(basis: &Basis, op: LegOp) -> SmallMat {
    let n = basis.slots[slot_of(basis, op)].levels;
    if op.is_raising() {
        SmallMat::raising(n)
    } else {
        SmallMat::lowering(n)
    }
}

/// Σ_k F̂₁(k)·F̂₂(neg k), normal-ordered, as Kron terms.
fn pair_quadratic(
    fs: &FieldSet,
    hat1: impl Fn(usize) -> FieldCoeff,
    hat2: impl Fn(usize) -> FieldCoeff,
) -> Vec<KronTerm> {
    let mut out = Vec::new();
    for &ki in &fs.lattice.active {
        let neg = fs.lattice.momenta[ki].neg;
        let f1 = hat1(ki);
        let f2 = hat2(neg);
        for &t1 in &f1.0 {
            for &t2 in &f2.0 {
                if let Some((coeff, factors)) = ordered_boson_factors(&fs.basis, t1, t2) {
                    out.push(KronTerm {
                        coeff,
                        fermion: None,
                        bosons: factors
                            .into_iter()
                            .map(|(slot, m)| BosonFactor::from_small(&fs.basis, slot, &m))
                            .collect(),
                    });
                }
            }
        }
    }
    out
}

pub fn build_terms(fs: &FieldSet) -> HamiltonianTerms {
    let lattice = &fs.lattice;
    let dim = lattice.dim;

    // ½ Π·Π = ½ E·E
    let mut pi_sq = Vec::new();
    for ax in 0..dim {
        let mut t = pair_quadratic(
            fs,
            |k| fs.e_hat(k, ax),
            |k| fs.e_hat(k, ax),
        );
        for term in t.iter_mut() {
            term.coeff *= 0.5;
        }
        pi_sq.extend(t);
    }

    // ½ |∇×A|²
    let mut b_sq = Vec::new();
    if dim == 3 {
        for ax in 0..3 {
            let mut t = pair_quadratic(fs, |k| fs.b_hat(k, ax), |k| fs.b_hat(k, ax));
            for term in t.iter_mut() {
                term.coeff *= 0.5;
            }
            b_sq.extend(t);
        }
    }

    // G ∇·A
    let div_a = |k: usize| {
        let mut acc = FieldCoeff::default();
        for ax in 0..dim {
            acc = acc.add(&fs.derivative_hat(k, ax, &fs.a_hat(k, ax)));
        }
        acc
    };
    let g_div_a = pair_quadratic(fs, |k| fs.g_hat(k), div_a);

    // A⁰ ∇·Π, Π = −E
    let div_pi = |k: usize| {
        let mut acc = FieldCoeff::default();
        for ax in 0..dim {
            acc = acc.add(&fs.derivative_hat(k, ax, &fs.e_hat(k, ax)));
        }
        acc.scaled(Complex64::new(-1.0, 0.0))
    };
    let a0_div_pi = pair_quadratic(fs, |k| fs.a0_hat(k), div_pi);

    // −½ G²
    let mut g_sq_half_neg = pair_quadratic(fs, |k| fs.g_hat(k), |k| fs.g_hat(k));
    for t in g_sq_half_neg.iter_mut() {
        t.coeff *= -0.5;
    }

    // ψ†(−iα·∇ + βm)ψ = Σ_p ψ̂†(p) h(p) ψ̂(p); in the (u, w) eigenbasis the
    // normal-ordered bilinear is Σ ω (b†b + d†d)
    let (alphas, beta) = dirac_matrices(dim);
    let sd = fs.fermions.spinor_dim;
    let mut coeffs: Vec<(usize, usize, Complex64)> = Vec::new();
    for a in 0..fs.fermions.n_modes {
        for b in 0..fs.fermions.n_modes {
            if fs.fermions.pair_transfer(lattice, a, b) != [0, 0, 0] {
                continue;
            }
            // h(p_b) sandwiched between the mode spinors
            let p = fs.fermions.modes[b].p;
            let mut h = vec![C0; sd * sd];
            for (ax, al) in alphas.iter().enumerate().take(dim) {
                for i in 0..sd * sd {
                    h[i] += al[i] * p[ax];
                }
            }
            for i in 0..sd {
                h[i * sd + i] += beta[i * sd + i] * fs.fermions.mass;
            }
            // modes at the same reduced momentum but different representative
            // labels cannot occur (labels are already reduced)
            if fs.fermions.modes[a].mode.n != fs.fermions.modes[b].mode.n {
                continue;
            }
            coeffs.push((a, b, fs.fermions.sandwich(&h, a, b)));
        }
    }
    let fermion_kinetic = if coeffs.is_empty() {
        Vec::new()
    } else {
        vec![KronTerm {
            coeff: Complex64::new(1.0, 0.0),
            fermion: Some(Arc::new(fs.fermions.normal_bilinear(&coeffs))),
            bosons: Vec::new(),
        }]
    };

    // j₀ A⁰: Σ_k ĵ₀(neg k) Â⁰(k)
    let mut j0_a0 = Vec::new();
    for &ki in &lattice.active {
        let neg = lattice.momenta[ki].neg;
        let j = match fs.j_hat_csr(lattice.momenta[neg].n, 0) {
            Some(m) if m.nnz() > 0 => m.clone(),
            _ => continue,
        };
        for &(op, c) in &fs.a0_hat(ki).0 {
            j0_a0.push(KronTerm {
                coeff: c,
                fermion: Some(Arc::new(j.clone())),
                bosons: vec![BosonFactor::from_small(
                    &fs.basis,
                    slot_of(&fs.basis, op),
                    &small_of(&fs.basis, op),
                )],
            });
        }
    }

    // −j·A: −Σ_ax Σ_k ĵ_ax(neg k) Â_ax(k)
    let mut j_dot_a = Vec::new();
    for ax in 0..dim {
        for &ki in &lattice.active {
            let neg = lattice.momenta[ki].neg;
            let j = match fs.j_hat_csr(lattice.momenta[neg].n, 1 + ax) {
                Some(m) if m.nnz() > 0 => m.clone(),
                _ => continue,
            };
            for &(op, c) in &fs.a_hat(ki, ax).0 {
                j_dot_a.push(KronTerm {
                    coeff: -c,
                    fermion: Some(Arc::new(j.clone())),
                    bosons: vec![BosonFactor::from_small(
                        &fs.basis,
                        slot_of(&fs.basis, op),
                        &small_of(&fs.basis, op),
                    )],
                });
            }
        }
    }

    HamiltonianTerms {
        pi_sq,
        b_sq,
        g_div_a,
        a0_div_pi,
        g_sq_half_neg,
        fermion_kinetic,
        j0_a0,
        j_dot_a,
    }
}

impl HamiltonianTerms {
    pub fn assemble(&self, fs: &FieldSet, opts: AssembleOptions) -> LinOp {
        let mut terms = Vec::new();
        terms.extend(self.pi_sq.iter().cloned());
        terms.extend(self.b_sq.iter().cloned());
        if !opts.drop_g_div_a {
            terms.extend(self.g_div_a.iter().cloned());
        }
        terms.extend(self.a0_div_pi.iter().cloned());
        let gfac = 1.0 - opts.gamma;
        if gfac != 0.0 {
            for t in &self.g_sq_half_neg {
                let mut t = t.clone();
                t.coeff *= gfac;
                terms.push(t);
            }
        }
        terms.extend(self.fermion_kinetic.iter().cloned());
        terms.extend(self.j0_a0.iter().cloned());
        terms.extend(self.j_dot_a.iter().cloned());
        let mut op = LinOp::from_terms(&fs.basis, terms);
        op.eta_self_adjoint = true;
        op
    }
}
