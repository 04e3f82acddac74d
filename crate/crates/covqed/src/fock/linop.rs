//! Sparse operators on the enumerated basis.
//!
//! An operator is a sum of Kronecker-structured terms: an optional fermion
//! CSR block times small per-slot boson matrices. Terms apply in a fixed
//! order and each output element is produced by exactly one task, so the
//! parallel apply is deterministic.

use super::csr::{Csr, SmallMat};
use super::sector::Basis;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

const PAR_MIN_LEN: usize = 1 << 14;

/// One sparse boson factor bound to a slot.
#[derive(Debug, Clone)]
pub struct BosonFactor {
    pub slot: usize,
    pub levels: usize,
    pub stride: usize,
    /// (row, col, value) entries of the small matrix.
    pub entries: Arc<Vec<(u32, u32, Complex64)>>,
}

impl BosonFactor {
    pub fn from_small(basis: &Basis, slot: usize, m: &SmallMat) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.n {
            for j in 0..m.n {
                let v = m.get(i, j);
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((i as u32, j as u32, v));
                }
            }
        }
        BosonFactor {
            slot,
            levels: basis.slots[slot].levels,
            stride: basis.slots[slot].stride,
            entries: Arc::new(entries),
        }
    }

    fn to_small(&self) -> SmallMat {
        let mut m = SmallMat::zeros(self.levels);
        for &(i, j, v) in self.entries.iter() {
            m.set(i as usize, j as usize, v);
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct KronTerm {
    pub coeff: Complex64,
    pub fermion: Option<Arc<Csr>>,
    pub bosons: Vec<BosonFactor>,
}

/// Operator on the enumerated basis: Σ coeff · (F ⊗ Π M_slot).
#[derive(Debug, Clone)]
pub struct LinOp {
    pub dim: usize,
    pub fermion_dim: usize,
    pub boson_dim: usize,
    pub terms: Vec<KronTerm>,
    /// Declared η-self-adjointness; checked on demand in tests.
    pub eta_self_adjoint: bool,
    /// True when the operator touches only ghost/photon slots.
    pub gauge_sector_only: bool,
}

impl LinOp {
    pub fn zero(basis: &Basis) -> Self {
        LinOp {
            dim: basis.dim,
            fermion_dim: basis.fermion_dim,
            boson_dim: basis.boson_dim,
            terms: Vec::new(),
            eta_self_adjoint: true,
            gauge_sector_only: true,
        }
    }

    pub fn from_terms(basis: &Basis, terms: Vec<KronTerm>) -> Self {
        let gauge_only = terms.iter().all(|t| t.fermion.is_none());
        LinOp {
            dim: basis.dim,
            fermion_dim: basis.fermion_dim,
            boson_dim: basis.boson_dim,
            terms,
            eta_self_adjoint: false,
            gauge_sector_only: gauge_only,
        }
    }

    pub fn identity(basis: &Basis) -> Self {
        LinOp {
            dim: basis.dim,
            fermion_dim: basis.fermion_dim,
            boson_dim: basis.boson_dim,
            terms: vec![KronTerm {
                coeff: Complex64::new(1.0, 0.0),
                fermion: None,
                bosons: Vec::new(),
            }],
            eta_self_adjoint: true,
            gauge_sector_only: true,
        }
    }

    pub fn scale(&self, s: Complex64) -> LinOp {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.coeff *= s;
        }
        out.eta_self_adjoint = false;
        out
    }

    pub fn add(&self, o: &LinOp) -> LinOp {
        assert_eq!(self.dim, o.dim);
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        LinOp {
            dim: self.dim,
            fermion_dim: self.fermion_dim,
            boson_dim: self.boson_dim,
            terms,
            eta_self_adjoint: self.eta_self_adjoint && o.eta_self_adjoint,
            gauge_sector_only: self.gauge_sector_only && o.gauge_sector_only,
        }
    }

    pub fn sub(&self, o: &LinOp) -> LinOp {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// y = A x  (fresh allocation).
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut ws = Workspace::new(self.dim);
        self.apply_into(x, &mut y, &mut ws);
        y
    }

    /// y += A x using caller-provided scratch.
    pub fn apply_into(&self, x: &[Complex64], y: &mut [Complex64], ws: &mut Workspace) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for term in &self.terms {
            apply_term(self, term, x, y, ws);
        }
    }

    /// Representation adjoint (conjugate transpose), term-wise.
    pub fn dagger(&self) -> LinOp {
        let terms = self
            .terms
            .iter()
            .map(|t| KronTerm {
                coeff: t.coeff.conj(),
                fermion: t.fermion.as_ref().map(|f| Arc::new(f.dagger())),
                bosons: t
                    .bosons
                    .iter()
                    .map(|b| BosonFactor {
                        slot: b.slot,
                        levels: b.levels,
                        stride: b.stride,
                        entries: Arc::new(
                            b.entries
                                .iter()
                                .map(|&(i, j, v)| (j, i, v.conj()))
                                .collect(),
                        ),
                    })
                    .collect(),
            })
            .collect();
        LinOp {
            dim: self.dim,
            fermion_dim: self.fermion_dim,
            boson_dim: self.boson_dim,
            terms,
            eta_self_adjoint: false,
            gauge_sector_only: self.gauge_sector_only,
        }
    }

    /// Materialize as CSR (oracle path; dimensions ≤ a few thousand).
    pub fn to_csr(&self, basis: &Basis) -> Csr {
        let mut acc = Csr::zeros(self.dim, self.dim);
        for term in &self.terms {
            let f = term
                .fermion
                .as_ref()
                .map(|f| (**f).clone())
                .unwrap_or_else(|| Csr::identity(self.fermion_dim));
            // assemble boson part slot by slot over the mixed-radix space
            let mut b = Csr::identity(1);
            for (si, slot) in basis.slots.iter().enumerate() {
                let factor = term.bosons.iter().find(|bf| bf.slot == si);
                let small = match factor {
                    Some(bf) => bf.to_small().to_csr(),
                    None => Csr::identity(slot.levels),
                };
                b = b.kron(&small);
            }
            acc = acc.add(&f.kron(&b).scale(term.coeff));
        }
        acc
    }
}

/// Scratch buffers reused across applies.
pub struct Workspace {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl Workspace {
    pub fn new(dim: usize) -> Self {
        Workspace {
            a: vec![Complex64::new(0.0, 0.0); dim],
            b: vec![Complex64::new(0.0, 0.0); dim],
        }
    }
}

fn apply_boson_factor(bf: &BosonFactor, x: &[Complex64], y: &mut [Complex64]) {
    let n = bf.levels;
    let s = bf.stride;
    let block = n * s;
    debug_assert_eq!(x.len() % block, 0);
    let entries = bf.entries.as_slice();
    let apply_block = |(yb, xb): (&mut [Complex64], &[Complex64])| {
        for v in yb.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for &(i, j, w) in entries {
            let oi = i as usize * s;
            let oj = j as usize * s;
            for lo in 0..s {
                yb[oi + lo] += w * xb[oj + lo];
            }
        }
    };
    if x.len() >= PAR_MIN_LEN && x.len() / block > 4 {
        y.par_chunks_mut(block)
            .zip(x.par_chunks(block))
            .for_each(apply_block);
    } else {
        y.chunks_mut(block).zip(x.chunks(block)).for_each(apply_block);
    }
}

fn apply_term(op: &LinOp, term: &KronTerm, x: &[Complex64], y: &mut [Complex64], ws: &mut Workspace) {
    // boson stage: alternate between the two scratch buffers
    let n_factors = term.bosons.len();
    for (fi, bf) in term.bosons.iter().enumerate() {
        if fi == 0 {
            apply_boson_factor(bf, x, &mut ws.a);
        } else if fi % 2 == 1 {
            apply_boson_factor(bf, &ws.a, &mut ws.b);
        } else {
            let (a, b) = (&mut ws.a, &ws.b);
            apply_boson_factor(bf, b, a);
        }
    }
    let src: &[Complex64] = match n_factors {
        0 => x,
        nf if nf % 2 == 1 => &ws.a,
        _ => &ws.b,
    };
    let coeff = term.coeff;
    let bdim = op.boson_dim;
    match &term.fermion {
        None => {
            if y.len() >= PAR_MIN_LEN {
                y.par_iter_mut().zip(src.par_iter()).for_each(|(o, v)| {
                    *o += coeff * v;
                });
            } else {
                for (o, v) in y.iter_mut().zip(src.iter()) {
                    *o += coeff * v;
                }
            }
        }
        Some(f) => {
            let f = f.as_ref();
            let mix = |(r, yb): (usize, &mut [Complex64])| {
                for idx in f.indptr[r]..f.indptr[r + 1] {
                    let c = f.indices[idx];
                    let w = coeff * f.data[idx];
                    let xb = &src[c * bdim..(c + 1) * bdim];
                    for (o, v) in yb.iter_mut().zip(xb.iter()) {
                        *o += w * v;
                    }
                }
            };
            if y.len() >= PAR_MIN_LEN {
                y.par_chunks_mut(bdim).enumerate().for_each(|(r, yb)| mix((r, yb)));
            } else {
                y.chunks_mut(bdim).enumerate().for_each(|(r, yb)| mix((r, yb)));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Elementary operators
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Raise,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BosonMode {
    GhostQ(usize),
    GhostR(usize),
    Photon(usize),
}

/// Single-slot ladder operator with √(m+1) matrix elements, truncated.
pub fn ladder(basis: &Basis, mode: BosonMode, kind: LadderKind) -> LinOp {
    let slot = match mode {
        BosonMode::GhostQ(g) => basis.slot_of_ghost_q(g),
        BosonMode::GhostR(g) => basis.slot_of_ghost_r(g),
        BosonMode::Photon(p) => basis.slot_of_photon(p),
    };
    let n = basis.slots[slot].levels;
    let m = match kind {
        LadderKind::Lower => SmallMat::lowering(n),
        LadderKind::Raise => SmallMat::raising(n),
    };
    LinOp {
        dim: basis.dim,
        fermion_dim: basis.fermion_dim,
        boson_dim: basis.boson_dim,
        terms: vec![KronTerm {
            coeff: Complex64::new(1.0, 0.0),
            fermion: None,
            bosons: vec![BosonFactor::from_small(basis, slot, &m)],
        }],
        eta_self_adjoint: false,
        gauge_sector_only: true,
    }
}

/// Fermion annihilation matrix with the Jordan-Wigner sign string of the
/// fixed global mode ordering (signs accumulate over lower-indexed modes).
pub fn fermion_annihilation_csr(n_modes: usize, mode: usize) -> Csr {
    let dim = 1usize << n_modes;
    let mut trips = Vec::with_capacity(dim / 2);
    for f in 0..dim {
        if (f >> mode) & 1 == 1 {
            let target = f & !(1usize << mode);
            let sign = ((f & ((1 << mode) - 1)).count_ones() % 2) as i32;
            let v = if sign == 0 { 1.0 } else { -1.0 };
            trips.push((target, f, Complex64::new(v, 0.0)));
        }
    }
    Csr::from_triplets(dim, dim, trips)
}

/// Fermion mode operator lifted to the full basis.
pub fn fermion_op(basis: &Basis, mode: usize, kind: LadderKind) -> LinOp {
    let ann = fermion_annihilation_csr(basis.n_fermion_modes, mode);
    let f = match kind {
        LadderKind::Lower => ann,
        LadderKind::Raise => ann.dagger(),
    };
    LinOp {
        dim: basis.dim,
        fermion_dim: basis.fermion_dim,
        boson_dim: basis.boson_dim,
        terms: vec![KronTerm {
            coeff: Complex64::new(1.0, 0.0),
            fermion: Some(Arc::new(f)),
            bosons: Vec::new(),
        }],
        eta_self_adjoint: false,
        gauge_sector_only: false,
    }
}

/// Lift a fermion-sector CSR to the full basis.
pub fn lift_fermion(basis: &Basis, f: Csr) -> LinOp {
    assert_eq!(f.nrows, basis.fermion_dim);
    LinOp {
        dim: basis.dim,
        fermion_dim: basis.fermion_dim,
        boson_dim: basis.boson_dim,
        terms: vec![KronTerm {
            coeff: Complex64::new(1.0, 0.0),
            fermion: Some(Arc::new(f)),
            bosons: Vec::new(),
        }],
        eta_self_adjoint: false,
        gauge_sector_only: false,
    }
}

/// A term coupling a fermion CSR with boson small-matrices.
pub fn coupled_term(
    basis: &Basis,
    coeff: Complex64,
    fermion: Option<Csr>,
    bosons: Vec<(usize, SmallMat)>,
) -> KronTerm {
    KronTerm {
        coeff,
        fermion: fermion.map(Arc::new),
        bosons: bosons
            .into_iter()
            .map(|(slot, m)| BosonFactor::from_small(basis, slot, &m))
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::sector::{
        enumerate_basis, FermionMode, FermionSpecies, GhostDoublet, PhotonMode, SectorSpec,
        DEFAULT_DIM_CAP,
    };
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn small_basis() -> Basis {
        enumerate_basis(&SectorSpec {
            fermions: vec![
                FermionMode { n: [0, 0, 0], species: FermionSpecies::Particle },
                FermionMode { n: [1, 0, 0], species: FermionSpecies::Particle },
            ],
            ghosts: vec![GhostDoublet { k_idx: 0, cutoff: 2 }],
            photons: vec![PhotonMode { k_idx: 0, pol: 0, cutoff: 1 }],
            dim_cap: DEFAULT_DIM_CAP,
        })
        .unwrap()
    }

    fn rand_vec(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn apply_matches_csr_oracle() {
        let b = small_basis();
        let q = ladder(&b, BosonMode::GhostQ(0), LadderKind::Lower);
        let rd = ladder(&b, BosonMode::GhostR(0), LadderKind::Raise);
        let f1 = fermion_op(&b, 1, LadderKind::Raise);
        let op = q.add(&rd.scale(Complex64::new(0.0, 2.0))).add(&f1);
        let v = rand_vec(b.dim, 9);
        let fast = op.apply(&v);
        let slow = op.to_csr(&b).matvec(&v);
        for (a, c) in fast.iter().zip(slow.iter()) {
            assert!((a - c).norm() < 1e-12);
        }
    }

    #[test]
    fn ghost_legs_commute_exactly() {
        // [a_Q(k), a_Q*(k)] = 0 as matrices (different legs)
        let b = small_basis();
        let q = ladder(&b, BosonMode::GhostQ(0), LadderKind::Lower).to_csr(&b);
        let rs = ladder(&b, BosonMode::GhostR(0), LadderKind::Raise).to_csr(&b);
        let comm = q.matmul(&rs).add(&rs.matmul(&q).scale(Complex64::new(-1.0, 0.0)));
        assert_eq!(comm.nnz(), 0);
    }

    #[test]
    fn fermion_anticommutators() {
        let n = 3;
        let dim = 1 << n;
        let eye = Csr::identity(dim);
        for i in 0..n {
            for j in 0..n {
                let bi = fermion_annihilation_csr(n, i);
                let bj = fermion_annihilation_csr(n, j);
                let bjd = bj.dagger();
                // {b_i, b_j†} = δ_ij
                let anti = bi.matmul(&bjd).add(&bjd.matmul(&bi));
                let expect = if i == j {
                    eye.clone()
                } else {
                    Csr::zeros(dim, dim)
                };
                let diff = anti.add(&expect.scale(Complex64::new(-1.0, 0.0)));
                assert!(diff.max_abs() < 1e-14, "{{b_{i}, b_{j}†}} wrong");
                // {b_i, b_j} = 0
                let anti2 = bi.matmul(&bj).add(&bj.matmul(&bi));
                assert!(anti2.max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn jw_sign_string() {
        // b_1 acting on |11⟩ = b_0† b_1† |0⟩ gives -|10⟩ with our ordering
        let n = 2;
        let b1 = fermion_annihilation_csr(n, 1);
        let state_11 = 0b11;
        let mut v = vec![Complex64::new(0.0, 0.0); 4];
        // build b0† b1† |0⟩ to fix the reference sign
        let b0d = fermion_annihilation_csr(n, 0).dagger();
        let b1d = b1.dagger();
        let mut vac = vec![Complex64::new(0.0, 0.0); 4];
        vac[0] = Complex64::new(1.0, 0.0);
        let s = b0d.matvec(&b1d.matvec(&vac));
        v[state_11] = s[state_11];
        assert!(v[state_11].norm() > 0.0);
        let w = b1.matvec(&v);
        // removing mode 1 crosses mode 0: sign −1, and b0†b1†|0⟩ = −|11⟩-ish
        // consistency: b1 (b0† b1† |0⟩) = −b0†|0⟩
        let direct = b1.matvec(&s);
        let expect = b0d.matvec(&vac);
        for i in 0..4 {
            assert!((direct[i] + expect[i]).norm() < 1e-14);
        }
        let _ = w;
    }
}
