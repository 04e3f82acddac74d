//! Numeric lattice fields as operators on the enumerated basis.
//!
//! Conventions (1/√V per mode, ω_k := |m(k)| the active magnitude, sums over
//! quantized = active momenta only):
//!
//!   G(x)   = (i/√V) Σ_k √ω [ q(k) e^{ikx} − r†(k) e^{−ikx} ]
//!   E_i(x) = (i/√V) Σ_k { Σ_n ε_i^n(k) √(ω/2) [a_n(k) e^{ikx} − a_n†(k) e^{−ikx}]
//!                        + (m_i(k)/√ω) [ q(k) e^{ikx} − r†(k) e^{−ikx} ] }
//!   A⁰(x)  = (1/(2√V)) Σ_k (1/√ω) [ q†(k) e^{−ikx} + r(k) e^{ikx} ]
//!   A_i(x) = (1/√V) Σ_k { Σ_n ε_i^n(k) (1/√(2ω)) [a_n(k) e^{ikx} + a_n†(k) e^{−ikx}]
//!                        + λ_k m_i(k) [ q†(k) e^{−ikx} + r(k) e^{ikx} ] },  λ_k = 1/(2ω^{3/2})
//!   B = ∇×A (transverse part only; the ghost part of A is a gradient),
//!   Ω(k) = q(k) + ĵ₀(k)/(2ω^{3/2}).
//!
//! The q†/r normalizations are fixed by the equal-time pairing
//! [A⁰(y), G(x)] = −(i/V) Σ_k e^{ik(x−y)} and by the longitudinal current
//! delivery in the Heisenberg–Ampère relation; both are exercised by the
//! conformance suite.

use super::fermions::{dirac_matrices, FermionSector};
use crate::error::{CovqedError, Result};
use crate::fock::{
    ladder, lift_fermion, metric, Basis, BosonFactor, BosonMode, Csr, KronTerm, LadderKind,
    LinOp, Metric, SmallMat,
};
use crate::modes::{polarization_basis, LatticeSpec, PolarizationBasis};
use num_complex::Complex64;
use std::collections::HashMap;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A ghost/photon ladder operator tag used in field coefficient lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegOp {
    /// Lowering on the q-leg of ghost doublet `g`.
    QLow(usize),
    QRaise(usize),
    RLow(usize),
    RRaise(usize),
    /// Photon mode `p` lowering / raising.
    PhLow(usize),
    PhRaise(usize),
}

impl LegOp {
    pub fn is_raising(&self) -> bool {
        matches!(self, LegOp::QRaise(_) | LegOp::RRaise(_) | LegOp::PhRaise(_))
    }
    fn slot(&self, basis: &Basis) -> usize {
        match *self {
            LegOp::QLow(g) | LegOp::QRaise(g) => basis.slot_of_ghost_q(g),
            LegOp::RLow(g) | LegOp::RRaise(g) => basis.slot_of_ghost_r(g),
            LegOp::PhLow(p) | LegOp::PhRaise(p) => basis.slot_of_photon(p),
        }
    }
    fn small(&self, basis: &Basis) -> SmallMat {
        let n = basis.slots[self.slot(basis)].levels;
        match self.is_raising() {
            false => SmallMat::lowering(n),
            true => SmallMat::raising(n),
        }
    }
}

/// Linear combination of single ladder operators: a field's Fourier
/// coefficient at one momentum.
#[derive(Debug, Clone, Default)]
pub struct FieldCoeff(pub Vec<(LegOp, Complex64)>);

impl FieldCoeff {
    pub fn scaled(&self, s: Complex64) -> FieldCoeff {
        FieldCoeff(self.0.iter().map(|(o, c)| (*o, c * s)).collect())
    }
    pub fn add(&self, o: &FieldCoeff) -> FieldCoeff {
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        FieldCoeff(v)
    }
}

/// The assembled field set for one model configuration.
pub struct FieldSet {
    pub lattice: LatticeSpec,
    pub basis: Basis,
    pub eta: Metric,
    pub fermions: FermionSector,
    pub pol: PolarizationBasis,
    pub coupling: f64,
    /// ghost doublet index per momentum index.
    pub ghost_of_k: HashMap<usize, usize>,
    /// photon mode index per (momentum index, polarization).
    pub photon_of: HashMap<(usize, usize), usize>,
    /// ĵ_µ(q) fermion-sector CSRs keyed by transfer label (reduced), µ = 0..d.
    j_hat: HashMap<([i32; 3], usize), Csr>,
    /// transfer labels with any nonzero ĵ (support of the current).
    j_support: Vec<[i32; 3]>,
}

impl FieldSet {
    pub fn build(
        lattice: &LatticeSpec,
        basis: &Basis,
        fermions: FermionSector,
        coupling: f64,
    ) -> Result<FieldSet> {
        let eta = metric(basis)?;
        let mut ghost_of_k = HashMap::new();
        for (gi, g) in basis.sector.ghosts.iter().enumerate() {
            if lattice.momenta[g.k_idx].self_paired {
                return Err(CovqedError::config(format!(
                    "ghost doublet at self-paired momentum {:?} cannot be quantized",
                    lattice.momenta[g.k_idx].n
                )));
            }
            ghost_of_k.insert(g.k_idx, gi);
        }
        let mut photon_of = HashMap::new();
        for (pi, p) in basis.sector.photons.iter().enumerate() {
            photon_of.insert((p.k_idx, p.pol), pi);
        }
        let pol = polarization_basis(lattice);

        // currents: group fermion mode pairs by transfer label
        let (alphas, _beta) = dirac_matrices(lattice.dim);
        let sd = fermions.spinor_dim;
        let mut eye = vec![C0; sd * sd];
        for i in 0..sd {
            eye[i * sd + i] = Complex64::new(1.0, 0.0);
        }
        let gammas: Vec<Vec<Complex64>> = std::iter::once(eye)
            .chain(alphas.iter().take(lattice.dim).cloned())
            .collect();
        let mut pair_groups: HashMap<[i32; 3], Vec<(usize, usize)>> = HashMap::new();
        for a in 0..fermions.n_modes {
            for b in 0..fermions.n_modes {
                let q = fermions.pair_transfer(lattice, a, b);
                pair_groups.entry(q).or_default().push((a, b));
            }
        }
        let inv_sqrt_v = 1.0 / lattice.volume.sqrt();
        let mut j_hat = HashMap::new();
        let mut j_support = Vec::new();
        for (q, pairs) in pair_groups {
            let mut any = false;
            for (mu, gamma) in gammas.iter().enumerate() {
                let coeffs: Vec<(usize, usize, Complex64)> = pairs
                    .iter()
                    .map(|&(a, b)| {
                        (
                            a,
                            b,
                            fermions.sandwich(gamma, a, b) * coupling * inv_sqrt_v,
                        )
                    })
                    .collect();
                let m = fermions.normal_bilinear(&coeffs);
                if m.nnz() > 0 {
                    any = true;
                }
                j_hat.insert((q, mu), m);
            }
            if any {
                j_support.push(q);
            }
        }
        j_support.sort();

        Ok(FieldSet {
            lattice: lattice.clone(),
            basis: basis.clone(),
            eta,
            fermions,
            pol,
            coupling,
            ghost_of_k,
            photon_of,
            j_hat,
            j_support,
        })
    }

    pub fn omega_k(&self, k_idx: usize) -> f64 {
        self.lattice.momenta[k_idx].active_mag()
    }

    fn phase(&self, k_idx: usize, site: usize) -> Complex64 {
        let th = self.lattice.k_dot_x(k_idx, site);
        Complex64::new(th.cos(), th.sin())
    }

    /// Fourier coefficient Ĝ(k) (of e^{ikx}/√V) as ladder combination.
    /// Ĝ(k) = i√ω [ q(k) − r†(neg k) ].
    pub fn g_hat(&self, k_idx: usize) -> FieldCoeff {
        let mut out = Vec::new();
        if let Some(&g) = self.ghost_of_k.get(&k_idx) {
            let w = (self.omega_k(k_idx)).sqrt();
            out.push((LegOp::QLow(g), I * w));
        }
        let neg = self.lattice.momenta[k_idx].neg;
        if let Some(&gn) = self.ghost_of_k.get(&neg) {
            let w = (self.omega_k(neg)).sqrt();
            out.push((LegOp::RRaise(gn), -I * w));
        }
        FieldCoeff(out)
    }

    /// Ê_i(k) = i(m_i(k)/√ω) q(k) − i(m_i(neg k)/√ω) r†(neg k)
    ///        + transverse photon part.
    pub fn e_hat(&self, k_idx: usize, ax: usize) -> FieldCoeff {
        let mut out = Vec::new();
        let mom = &self.lattice.momenta[k_idx];
        if let Some(&g) = self.ghost_of_k.get(&k_idx) {
            let w = self.omega_k(k_idx).sqrt();
            out.push((LegOp::QLow(g), I * mom.m[ax] / w));
        }
        let neg_idx = mom.neg;
        let negm = &self.lattice.momenta[neg_idx];
        if let Some(&gn) = self.ghost_of_k.get(&neg_idx) {
            let w = self.omega_k(neg_idx).sqrt();
            out.push((LegOp::RRaise(gn), -I * negm.m[ax] / w));
        }
        // transverse photons
        for polz in 0..2 {
            if let (Some(&pi), Some(eps)) =
                (self.photon_of.get(&(k_idx, polz)), self.pol.eps[k_idx].as_ref())
            {
                let w = (self.omega_k(k_idx) / 2.0).sqrt();
                out.push((LegOp::PhLow(pi), I * w * eps[polz][ax]));
            }
            if let (Some(&pi), Some(eps)) =
                (self.photon_of.get(&(neg_idx, polz)), self.pol.eps[neg_idx].as_ref())
            {
                let w = (self.omega_k(neg_idx) / 2.0).sqrt();
                out.push((LegOp::PhRaise(pi), -I * w * eps[polz][ax]));
            }
        }
        FieldCoeff(out)
    }

    /// Â⁰(k) = (1/(2√ω)) [ q†(neg k) + r(k) ].
    pub fn a0_hat(&self, k_idx: usize) -> FieldCoeff {
        let mut out = Vec::new();
        let neg = self.lattice.momenta[k_idx].neg;
        if let Some(&gn) = self.ghost_of_k.get(&neg) {
            let w = self.omega_k(neg).sqrt();
            out.push((LegOp::QRaise(gn), Complex64::new(0.5 / w, 0.0)));
        }
        if let Some(&g) = self.ghost_of_k.get(&k_idx) {
            let w = self.omega_k(k_idx).sqrt();
            out.push((LegOp::RLow(g), Complex64::new(0.5 / w, 0.0)));
        }
        FieldCoeff(out)
    }

    /// Â_i(k) = λ m_i(k) r(k) + λ m_i(neg k) q†(neg k) + transverse part,
    /// λ = 1/(2ω^{3/2}).
    pub fn a_hat(&self, k_idx: usize, ax: usize) -> FieldCoeff {
        let mut out = Vec::new();
        let mom = &self.lattice.momenta[k_idx];
        if let Some(&g) = self.ghost_of_k.get(&k_idx) {
            let w = self.omega_k(k_idx);
            let lam = 0.5 / (w * w.sqrt());
            out.push((LegOp::RLow(g), Complex64::new(lam * mom.m[ax], 0.0)));
        }
        let neg_idx = mom.neg;
        let negm = &self.lattice.momenta[neg_idx];
        if let Some(&gn) = self.ghost_of_k.get(&neg_idx) {
            let w = self.omega_k(neg_idx);
            let lam = 0.5 / (w * w.sqrt());
            out.push((LegOp::QRaise(gn), Complex64::new(lam * negm.m[ax], 0.0)));
        }
        for polz in 0..2 {
            if let (Some(&pi), Some(eps)) =
                (self.photon_of.get(&(k_idx, polz)), self.pol.eps[k_idx].as_ref())
            {
                let w = self.omega_k(k_idx);
                out.push((
                    LegOp::PhLow(pi),
                    Complex64::new(eps[polz][ax] / (2.0 * w).sqrt(), 0.0),
                ));
            }
            if let (Some(&pi), Some(eps)) =
                (self.photon_of.get(&(neg_idx, polz)), self.pol.eps[neg_idx].as_ref())
            {
                let w = self.omega_k(neg_idx);
                out.push((
                    LegOp::PhRaise(pi),
                    Complex64::new(eps[polz][ax] / (2.0 * w).sqrt(), 0.0),
                ));
            }
        }
        FieldCoeff(out)
    }

    /// B̂_i(k) = (∇×Â)_i(k): each e^{ikx}-riding term multiplied by i m(k)×.
    pub fn b_hat(&self, k_idx: usize, ax: usize) -> FieldCoeff {
        if self.lattice.dim != 3 {
            return FieldCoeff::default();
        }
        let mut out = Vec::new();
        let j = (ax + 1) % 3;
        let l = (ax + 2) % 3;
        let mom = &self.lattice.momenta[k_idx];
        // curl of the transverse part only (ghost part of A is a gradient
        // whose term-wise curl cancels exactly)
        for polz in 0..2 {
            if let (Some(&pi), Some(eps)) =
                (self.photon_of.get(&(k_idx, polz)), self.pol.eps[k_idx].as_ref())
            {
                let w = self.omega_k(k_idx);
                let kxe = mom.m[j] * eps[polz][l] - mom.m[l] * eps[polz][j];
                out.push((LegOp::PhLow(pi), I * kxe / (2.0 * w).sqrt()));
            }
            let neg_idx = mom.neg;
            let negm = &self.lattice.momenta[neg_idx];
            if let (Some(&pi), Some(eps)) =
                (self.photon_of.get(&(neg_idx, polz)), self.pol.eps[neg_idx].as_ref())
            {
                let w = self.omega_k(neg_idx);
                let kxe = negm.m[j] * eps[polz][l] - negm.m[l] * eps[polz][j];
                // creation term rides e^{−ik″x}: derivative factor −i m(k″)
                out.push((LegOp::PhRaise(pi), -I * kxe / (2.0 * w).sqrt()));
            }
        }
        FieldCoeff(out)
    }

    /// Term-wise derivative along `ax`: every term in F̂(k) rides e^{ikx},
    /// so (∂_ax F)-hat(k) = i m_ax(k) F̂(k).
    pub fn derivative_hat(&self, k_idx: usize, ax: usize, f: &FieldCoeff) -> FieldCoeff {
        f.scaled(I * self.lattice.momenta[k_idx].m[ax])
    }

    /// Position-space operator from Fourier coefficients:
    /// F(x) = (1/√V) Σ_{k∈act} F̂(k) e^{ikx}.
    pub fn position_op(&self, site: usize, hat: impl Fn(usize) -> FieldCoeff) -> LinOp {
        let inv_sqrt_v = 1.0 / self.lattice.volume.sqrt();
        let mut terms = Vec::new();
        for &ki in &self.lattice.active {
            let ph = self.phase(ki, site) * inv_sqrt_v;
            for (op, c) in hat(ki).0 {
                terms.push(KronTerm {
                    coeff: c * ph,
                    fermion: None,
                    bosons: vec![BosonFactor::from_small(
                        &self.basis,
                        op.slot(&self.basis),
                        &op.small(&self.basis),
                    )],
                });
            }
        }
        LinOp::from_terms(&self.basis, terms)
    }

    pub fn g_at(&self, site: usize) -> LinOp {
        self.position_op(site, |k| self.g_hat(k))
    }
    pub fn e_at(&self, site: usize, ax: usize) -> LinOp {
        self.position_op(site, |k| self.e_hat(k, ax))
    }
    pub fn a0_at(&self, site: usize) -> LinOp {
        self.position_op(site, |k| self.a0_hat(k))
    }
    pub fn a_at(&self, site: usize, ax: usize) -> LinOp {
        self.position_op(site, |k| self.a_hat(k, ax))
    }
    pub fn b_at(&self, site: usize, ax: usize) -> LinOp {
        self.position_op(site, |k| self.b_hat(k, ax))
    }
    pub fn grad_g_at(&self, site: usize, ax: usize) -> LinOp {
        self.position_op(site, |k| self.derivative_hat(k, ax, &self.g_hat(k)))
    }
    pub fn div_e_at(&self, site: usize) -> LinOp {
        self.position_op(site, |k| {
            let mut acc = FieldCoeff::default();
            for ax in 0..self.lattice.dim {
                acc = acc.add(&self.derivative_hat(k, ax, &self.e_hat(k, ax)));
            }
            acc
        })
    }
    pub fn lap_g_at(&self, site: usize) -> LinOp {
        self.position_op(site, |k| {
            let msq: f64 = self.lattice.momenta[k].m.iter().map(|x| x * x).sum();
            self.g_hat(k).scaled(Complex64::new(-msq, 0.0))
        })
    }
    pub fn curl_b_at(&self, site: usize, ax: usize) -> LinOp {
        if self.lattice.dim != 3 {
            return LinOp::zero(&self.basis);
        }
        let j = (ax + 1) % 3;
        let l = (ax + 2) % 3;
        self.position_op(site, |k| {
            let bj = self.b_hat(k, j);
            let bl = self.b_hat(k, l);
            self.derivative_hat(k, j, &bl)
                .add(&self.derivative_hat(k, l, &bj).scaled(Complex64::new(-1.0, 0.0)))
        })
    }

    /// ĵ_µ(q) lifted to the full basis (zero when the transfer label is
    /// outside the current's support).
    pub fn j_hat_op(&self, q: [i32; 3], mu: usize) -> LinOp {
        match self.j_hat.get(&(q, mu)) {
            Some(m) if m.nnz() > 0 => lift_fermion(&self.basis, m.clone()),
            _ => LinOp::zero(&self.basis),
        }
    }

    pub fn j_hat_csr(&self, q: [i32; 3], mu: usize) -> Option<&Csr> {
        self.j_hat.get(&(q, mu))
    }

    /// Full position-space current j_µ(x) over the current's support.
    pub fn j_at(&self, site: usize, mu: usize) -> LinOp {
        let inv_sqrt_v = 1.0 / self.lattice.volume.sqrt();
        let mut terms = Vec::new();
        for q in &self.j_support {
            if let Some(m) = self.j_hat.get(&(*q, mu)) {
                if m.nnz() == 0 {
                    continue;
                }
                let x = self.lattice.site(site);
                let th: f64 = (0..self.lattice.dim)
                    .map(|ax| {
                        2.0 * std::f64::consts::PI / self.lattice.box_length
                            * q[ax] as f64
                            * x[ax]
                    })
                    .sum();
                terms.push(KronTerm {
                    coeff: Complex64::new(th.cos(), th.sin()) * inv_sqrt_v,
                    fermion: Some(std::sync::Arc::new(m.clone())),
                    bosons: Vec::new(),
                });
            }
        }
        LinOp::from_terms(&self.basis, terms)
    }

    /// Active-mode projection j̃_µ(x): zero mode and self-paired momenta
    /// removed — the form in which currents enter the operator identities.
    pub fn j_tilde_at(&self, site: usize, mu: usize) -> LinOp {
        let inv_sqrt_v = 1.0 / self.lattice.volume.sqrt();
        let mut terms = Vec::new();
        for &ki in &self.lattice.active {
            let q = self.lattice.momenta[ki].n;
            if let Some(m) = self.j_hat.get(&(q, mu)) {
                if m.nnz() == 0 {
                    continue;
                }
                terms.push(KronTerm {
                    coeff: self.phase(ki, site) * inv_sqrt_v,
                    fermion: Some(std::sync::Arc::new(m.clone())),
                    bosons: Vec::new(),
                });
            }
        }
        LinOp::from_terms(&self.basis, terms)
    }

    /// Spectral divergence of the active-projected current at a site:
    /// (∇·j̃)(x) = (1/√V) Σ_{k∈act} (Σ_i i m_i(k) ĵ_i(k)) e^{ikx}.
    pub fn position_div_j_tilde(&self, site: usize) -> LinOp {
        let inv_sqrt_v = 1.0 / self.lattice.volume.sqrt();
        let mut terms = Vec::new();
        for &ki in &self.lattice.active {
            let mom = &self.lattice.momenta[ki];
            let ph = self.phase(ki, site) * inv_sqrt_v;
            for ax in 0..self.lattice.dim {
                if mom.m[ax] == 0.0 {
                    continue;
                }
                if let Some(m) = self.j_hat.get(&(mom.n, 1 + ax)) {
                    if m.nnz() == 0 {
                        continue;
                    }
                    terms.push(KronTerm {
                        coeff: I * mom.m[ax] * ph,
                        fermion: Some(std::sync::Arc::new(m.clone())),
                        bosons: Vec::new(),
                    });
                }
            }
        }
        LinOp::from_terms(&self.basis, terms)
    }

    /// Constraint Ω(k) = q(k) + ĵ₀(k)/(2ω^{3/2}).
    pub fn omega_op(&self, k_idx: usize) -> Result<LinOp> {
        let g = *self.ghost_of_k.get(&k_idx).ok_or_else(|| {
            CovqedError::config("omega requested at a momentum with no ghost doublet")
        })?;
        let w = self.omega_k(k_idx);
        let c = 0.5 / (w * w.sqrt());
        let q_low = ladder(&self.basis, BosonMode::GhostQ(g), LadderKind::Lower);
        let j0 = self.j_hat_op(self.lattice.momenta[k_idx].n, 0);
        Ok(q_low.add(&j0.scale(Complex64::new(c, 0.0))))
    }

    /// C = a^d Σ_x E(x)·∇χ(x) = Σ_{k∈act} Σ_i Ê_i(k) · (i m_i(neg k)) χ̂(neg k).
    ///
    /// The transverse photon contribution cancels exactly through k·εⁿ = 0;
    /// the assembly verifies the cancellation and prunes it, leaving only
    /// ghost-sector ladder matrices. η-self-adjoint for real χ.
    pub fn c_op(&self, chi: &crate::modes::ScalarField) -> Result<LinOp> {
        if !chi.is_real {
            return Err(CovqedError::config("C requires a real gauge function χ"));
        }
        let chi_hat = crate::modes::fourier_coefficients(&self.lattice, chi);
        // accumulate per-LegOp coefficients
        let mut acc: Vec<(LegOp, Complex64)> = Vec::new();
        for &ki in &self.lattice.active {
            let neg = self.lattice.momenta[ki].neg;
            for ax in 0..self.lattice.dim {
                let w = I * self.lattice.momenta[neg].m[ax] * chi_hat[neg];
                if w == C0 {
                    continue;
                }
                for (op, c) in self.e_hat(ki, ax).0 {
                    acc.push((op, c * w));
                }
            }
        }
        // merge by operator
        let mut merged: Vec<(LegOp, Complex64)> = Vec::new();
        for (op, c) in acc {
            if let Some(e) = merged.iter_mut().find(|(o, _)| *o == op) {
                e.1 += c;
            } else {
                merged.push((op, c));
            }
        }
        let scale: f64 = merged.iter().map(|(_, c)| c.norm()).fold(1e-300, f64::max);
        let mut terms = Vec::new();
        for (op, c) in merged {
            let is_photon = matches!(op, LegOp::PhLow(_) | LegOp::PhRaise(_));
            if c.norm() <= 1e-12 * scale {
                continue; // exact transverse cancellation up to rounding
            }
            if is_photon {
                return Err(CovqedError::numerical(format!(
                    "transverse part of C failed to cancel: residual coefficient {c}"
                )));
            }
            terms.push(KronTerm {
                coeff: c,
                fermion: None,
                bosons: vec![BosonFactor::from_small(
                    &self.basis,
                    op.slot(&self.basis),
                    &op.small(&self.basis),
                )],
            });
        }
        let mut op = LinOp::from_terms(&self.basis, terms);
        op.eta_self_adjoint = true;
        op.gauge_sector_only = true;
        Ok(op)
    }

    /// ψ_α(x) as an operator (fermion sector only).
    pub fn psi_at(&self, site: usize, alpha: usize) -> LinOp {
        let inv_sqrt_v = 1.0 / self.lattice.volume.sqrt();
        let x = self.lattice.site(site);
        let mut acc = Csr::zeros(self.fermions.dim(), self.fermions.dim());
        for (mi, md) in self.fermions.modes.iter().enumerate() {
            let th: f64 = (0..self.lattice.dim).map(|ax| md.p[ax] * x[ax]).sum();
            let ph = Complex64::new(th.cos(), th.sin()) * inv_sqrt_v * md.spinor[alpha];
            if ph == C0 {
                continue;
            }
            let m = match md.mode.species {
                crate::fock::FermionSpecies::Particle => {
                    self.fermions.annihilation(mi).scale(ph)
                }
                crate::fock::FermionSpecies::Antiparticle => {
                    self.fermions.annihilation(mi).dagger().scale(ph)
                }
            };
            acc = acc.add(&m);
        }
        lift_fermion(&self.basis, acc)
    }
}
