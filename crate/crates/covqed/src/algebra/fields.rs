//! Symbolic lattice fields over the exact coefficient ring.
//!
//! Supported lattices: d = 1 with N ∈ {2, 4}, d = 3 with N = 2. These are
//! exactly the shapes whose phase field ℚ(ζ_N) ⊆ ℚ(i) keeps zero-testing
//! sound and whose active momenta need no irrational polarization vectors
//! (d = 1 has no transverse directions; d = 3, N = 2 has no active modes).

use super::coeff::{Atom, Coefficient, Rational};
use super::poly::{OpPoly, OpSymbol};
use crate::error::{CovqedError, Result};
use crate::modes::LatticeSpec;
use num::Zero;

pub struct SymbolicFields {
    pub lattice: LatticeSpec,
    /// i-power per unit phase exponent: 4/N.
    ipow_unit: usize,
}

impl SymbolicFields {
    pub fn new(lattice: &LatticeSpec) -> Result<Self> {
        let n = lattice.sites_per_axis;
        let ok = matches!((lattice.dim, n), (1, 2) | (1, 4) | (3, 2));
        if !ok {
            return Err(CovqedError::config(format!(
                "exact symbolic verification supports d=1 with N in {{2,4}} and d=3 with N=2 \
                 (phase arithmetic is Gaussian-rational there); got d={} N={}",
                lattice.dim, n
            )));
        }
        Ok(SymbolicFields {
            lattice: lattice.clone(),
            ipow_unit: 4 / n,
        })
    }

    /// ζ_N^e as an exact Gaussian rational.
    fn zeta(&self, e: i64) -> Coefficient {
        let n = self.lattice.sites_per_axis as i64;
        let e = e.rem_euclid(n) as usize;
        Coefficient::one().mul_i_pow(e * self.ipow_unit)
    }

    /// 2π/L.
    fn mu(&self) -> Coefficient {
        Coefficient::from_int(2)
            .mul(&Coefficient::radical(Atom::Pi, 4))
            .mul(&Coefficient::radical(Atom::BoxL, -4))
    }

    /// √k for momentum index ki: (2π/L)^{1/2} (n·n)^{1/4}.
    fn sqrt_k(&self, ki: usize) -> Coefficient {
        let m = &self.lattice.momenta[ki];
        let nsq: i64 = (0..self.lattice.dim).map(|ax| (m.n[ax] as i64).pow(2)).sum();
        Coefficient::int_radical(2, 2)
            .mul(&Coefficient::radical(Atom::Pi, 2))
            .mul(&Coefficient::radical(Atom::BoxL, -2))
            .mul(&Coefficient::int_radical(nsq as u64, 1))
    }

    /// Active momentum component m_i(k) = μ·n_i, zeroed on Nyquist axes.
    fn m_comp(&self, ki: usize, ax: usize) -> Coefficient {
        let mom = &self.lattice.momenta[ki];
        let half = (self.lattice.sites_per_axis / 2) as i32;
        if mom.n[ax] == 0 || mom.n[ax].abs() == half {
            Coefficient::zero()
        } else {
            self.mu().mul(&Coefficient::from_int(mom.n[ax] as i64))
        }
    }

    /// 1/√V = L^{−d/2}.
    fn inv_sqrt_v(&self) -> Coefficient {
        Coefficient::radical(Atom::BoxL, -2 * self.lattice.dim as i32)
    }

    /// a^d = (L/N)^d.
    fn a_pow_d(&self) -> Coefficient {
        let d = self.lattice.dim as i32;
        let nd = (self.lattice.sites_per_axis as i64).pow(d as u32);
        Coefficient::radical(Atom::BoxL, 4 * d).mul(&Coefficient::from_ratio(1, nd))
    }

    /// G(x) = (i/√V) Σ_{k∈act} √k [a_Q(k) e^{ikx} − a_Q*(k) e^{−ikx}].
    pub fn g_at(&self, site: usize) -> OpPoly {
        let mut p = OpPoly::zero();
        let pref = Coefficient::i().mul(&self.inv_sqrt_v());
        for &ki in &self.lattice.active {
            let e = self.lattice.phase_exponent(ki, site) as i64;
            let sk = self.sqrt_k(ki);
            p = p.add(&OpPoly::monomial(
                pref.mul(&sk).mul(&self.zeta(e)),
                vec![OpSymbol::GhostAnn { k: ki }],
            ));
            p = p.add(&OpPoly::monomial(
                pref.mul(&sk).mul(&self.zeta(-e)).neg(),
                vec![OpSymbol::GhostStar { k: ki }],
            ));
        }
        p
    }

    /// Longitudinal/ghost part of E_i(x); the transverse photon part is
    /// empty on the supported lattices (no active transverse modes).
    pub fn e_at(&self, site: usize, ax: usize) -> OpPoly {
        let mut p = OpPoly::zero();
        let pref = Coefficient::i().mul(&self.inv_sqrt_v());
        for &ki in &self.lattice.active {
            let e = self.lattice.phase_exponent(ki, site) as i64;
            // m_i(k)/√k = m_comp · k^{-1/2}
            let mi = self.m_comp(ki, ax);
            if mi.is_zero() {
                continue;
            }
            let inv_sqrt_k = self.inv_sqrt_k(ki);
            let w = pref.mul(&mi).mul(&inv_sqrt_k);
            p = p.add(&OpPoly::monomial(
                w.mul(&self.zeta(e)),
                vec![OpSymbol::GhostAnn { k: ki }],
            ));
            p = p.add(&OpPoly::monomial(
                w.mul(&self.zeta(-e)).neg(),
                vec![OpSymbol::GhostStar { k: ki }],
            ));
        }
        p
    }

    fn inv_sqrt_k(&self, ki: usize) -> Coefficient {
        let m = &self.lattice.momenta[ki];
        let nsq: i64 = (0..self.lattice.dim).map(|ax| (m.n[ax] as i64).pow(2)).sum();
        Coefficient::int_radical(2, -2)
            .mul(&Coefficient::radical(Atom::Pi, -2))
            .mul(&Coefficient::radical(Atom::BoxL, 2))
            .mul(&Coefficient::int_radical(nsq as u64, -1))
    }

    /// ∂_i G(x), term-wise: the e^{ikx} side picks i·m_i(k), the e^{−ikx}
    /// side −i·m_i(k).
    pub fn grad_g_at(&self, site: usize, ax: usize) -> OpPoly {
        let mut p = OpPoly::zero();
        let pref = Coefficient::i().mul(&self.inv_sqrt_v());
        for &ki in &self.lattice.active {
            let e = self.lattice.phase_exponent(ki, site) as i64;
            let sk = self.sqrt_k(ki);
            let imi = Coefficient::i().mul(&self.m_comp(ki, ax));
            if imi.is_zero() {
                continue;
            }
            p = p.add(&OpPoly::monomial(
                pref.mul(&sk).mul(&imi).mul(&self.zeta(e)),
                vec![OpSymbol::GhostAnn { k: ki }],
            ));
            p = p.add(&OpPoly::monomial(
                pref.mul(&sk).mul(&imi).mul(&self.zeta(-e)), // (−1)·(−i m) = +i m
                vec![OpSymbol::GhostStar { k: ki }],
            ));
        }
        p
    }

    /// ∇²G(x) with the spectral multiplier −|m(k)|² (same on both sides).
    pub fn lap_g_at(&self, site: usize) -> OpPoly {
        let mut p = OpPoly::zero();
        let pref = Coefficient::i().mul(&self.inv_sqrt_v());
        for &ki in &self.lattice.active {
            let e = self.lattice.phase_exponent(ki, site) as i64;
            let sk = self.sqrt_k(ki);
            let mut msq = Coefficient::zero();
            for ax in 0..self.lattice.dim {
                let mc = self.m_comp(ki, ax);
                msq = msq.add(&mc.mul(&mc));
            }
            let w = pref.mul(&sk).mul(&msq).neg();
            p = p.add(&OpPoly::monomial(
                w.mul(&self.zeta(e)),
                vec![OpSymbol::GhostAnn { k: ki }],
            ));
            p = p.add(&OpPoly::monomial(
                w.mul(&self.zeta(-e)).neg(),
                vec![OpSymbol::GhostStar { k: ki }],
            ));
        }
        p
    }

    /// Current symbol j_µ(x).
    pub fn j_at(&self, mu: usize, site: usize) -> OpPoly {
        OpPoly::symbol(OpSymbol::Current { mu, site })
    }

    /// Spectral divergence of the current, expressed over site symbols:
    /// (∇·j)(x) = Σ_i Σ_y D^{(i)}_{xy} j_i(y) with the exact derivative
    /// matrix D^{(i)}_{xy} = (1/N^d) Σ_n i m_i(k_n) ζ^{n·(x−y)}.
    pub fn div_j_at(&self, site: usize) -> OpPoly {
        let mut p = OpPoly::zero();
        for ax in 0..self.lattice.dim {
            for y in 0..self.lattice.n_sites() {
                let w = self.deriv_matrix_entry(ax, site, y);
                if w.is_zero() {
                    continue;
                }
                p = p.add(&OpPoly::monomial(w, vec![OpSymbol::Current { mu: 1 + ax, site: y }]));
            }
        }
        p
    }

    /// Exact spectral-derivative matrix entry D^{(ax)}_{xy}.
    fn deriv_matrix_entry(&self, ax: usize, x: usize, y: usize) -> Coefficient {
        let nd = self.lattice.n_sites() as i64;
        let half = (self.lattice.sites_per_axis / 2) as i32;
        let sx = self.lattice.site_n(x);
        let sy = self.lattice.site_n(y);
        let mut acc = Coefficient::zero();
        // iterate the full BZ including 0 and Nyquist (multiplier kills both)
        for mom in self.lattice.momenta.iter() {
            if mom.n[ax] == 0 || mom.n[ax].abs() == half {
                continue;
            }
            let mut e: i64 = 0;
            for a2 in 0..self.lattice.dim {
                e += mom.n[a2] as i64 * (sx[a2] as i64 - sy[a2] as i64);
            }
            let im = Coefficient::i()
                .mul(&self.mu())
                .mul(&Coefficient::from_int(mom.n[ax] as i64));
            acc = acc.add(&im.mul(&self.zeta(e)));
        }
        acc.mul(&Coefficient::from_ratio(1, nd))
    }

    /// Exact gradient of a rational scalar field χ; [axis][site].
    pub fn grad_chi(&self, chi: &[Rational]) -> Vec<Vec<Coefficient>> {
        assert_eq!(chi.len(), self.lattice.n_sites());
        let nd = self.lattice.n_sites() as i64;
        let half = (self.lattice.sites_per_axis / 2) as i32;
        let mut out = vec![vec![Coefficient::zero(); chi.len()]; self.lattice.dim];
        for ax in 0..self.lattice.dim {
            for x in 0..chi.len() {
                let sx = self.lattice.site_n(x);
                let mut acc = Coefficient::zero();
                for mom in &self.lattice.momenta {
                    if mom.n[ax] == 0 || mom.n[ax].abs() == half {
                        continue;
                    }
                    // χ̂_n = Σ_y χ(y) ζ^{−n·y}
                    let mut chat = Coefficient::zero();
                    for (y, cv) in chi.iter().enumerate() {
                        let sy = self.lattice.site_n(y);
                        let mut e: i64 = 0;
                        for a2 in 0..self.lattice.dim {
                            e += mom.n[a2] as i64 * sy[a2] as i64;
                        }
                        if cv.is_zero() {
                            continue;
                        }
                        chat = chat.add(
                            &Coefficient::from_rational(cv.clone()).mul(&self.zeta(-e)),
                        );
                    }
                    let mut e: i64 = 0;
                    for a2 in 0..self.lattice.dim {
                        e += mom.n[a2] as i64 * sx[a2] as i64;
                    }
                    let im = Coefficient::i()
                        .mul(&self.mu())
                        .mul(&Coefficient::from_int(mom.n[ax] as i64));
                    acc = acc.add(&im.mul(&chat).mul(&self.zeta(e)));
                }
                out[ax][x] = acc.mul(&Coefficient::from_ratio(1, nd));
            }
        }
        out
    }

    /// Fourier component of the charge density at momentum index ki:
    /// ĵ₀(k) = (a^d/√V) Σ_y j₀(y) ζ^{−n·y}.
    pub fn j0_hat(&self, ki: usize) -> OpPoly {
        let w0 = self.a_pow_d().mul(&self.inv_sqrt_v());
        let mut p = OpPoly::zero();
        for y in 0..self.lattice.n_sites() {
            let e = self.lattice.phase_exponent(ki, y) as i64;
            p = p.add(&OpPoly::monomial(
                w0.mul(&self.zeta(-e)),
                vec![OpSymbol::Current { mu: 0, site: y }],
            ));
        }
        p
    }

    /// Constraint Ω(k) = a_Q(k) + ĵ₀(k)/(2 k^{3/2}).
    pub fn omega(&self, ki: usize) -> OpPoly {
        let inv = self.inv_k_three_halves(ki).mul(&Coefficient::from_ratio(1, 2));
        OpPoly::symbol(OpSymbol::GhostAnn { k: ki }).add(&self.j0_hat(ki).scale(&inv))
    }

    fn inv_k_three_halves(&self, ki: usize) -> Coefficient {
        let m = &self.lattice.momenta[ki];
        let nsq: i64 = (0..self.lattice.dim).map(|ax| (m.n[ax] as i64).pow(2)).sum();
        Coefficient::int_radical(2, -6)
            .mul(&Coefficient::radical(Atom::Pi, -6))
            .mul(&Coefficient::radical(Atom::BoxL, 6))
            .mul(&Coefficient::int_radical(nsq as u64, -3))
    }

    /// C = a^d Σ_x Σ_i E_i(x)·(∇χ)_i(x) for rational χ.
    pub fn c_poly(&self, chi: &[Rational]) -> OpPoly {
        let grad = self.grad_chi(chi);
        let ad = self.a_pow_d();
        let mut p = OpPoly::zero();
        for x in 0..self.lattice.n_sites() {
            for ax in 0..self.lattice.dim {
                let g = &grad[ax][x];
                if g.is_zero() {
                    continue;
                }
                p = p.add(&self.e_at(x, ax).scale(&ad.mul(g)));
            }
        }
        p
    }

    /// The [iC,H] axiom, Eq-(3.9)-anchored:
    /// [iC,H] := −a^d Σ_x (∇×B − j − ∇G)(x)·∇χ(x).
    /// On the supported lattices B ≡ 0, so this is
    /// a^d Σ_x Σ_i (j_i(x) + ∂_iG(x))·(∇χ)_i(x).
    pub fn ic_h_axiom(&self, chi: &[Rational]) -> OpPoly {
        let grad = self.grad_chi(chi);
        let ad = self.a_pow_d();
        let mut p = OpPoly::zero();
        for x in 0..self.lattice.n_sites() {
            for ax in 0..self.lattice.dim {
                let g = &grad[ax][x];
                if g.is_zero() {
                    continue;
                }
                let jg = self.j_at(1 + ax, x).add(&self.grad_g_at(x, ax));
                p = p.add(&jg.scale(&ad.mul(g)));
            }
        }
        p
    }

    /// The reduced form, right side of Eq (3.10):
    /// −a^d Σ_x χ(x)·[(∇·j)(x) + ∇²G(x)].
    pub fn ic_h_reduced(&self, chi: &[Rational]) -> OpPoly {
        let ad = self.a_pow_d();
        let mut p = OpPoly::zero();
        for x in 0..self.lattice.n_sites() {
            if chi[x].is_zero() {
                continue;
            }
            let w = ad
                .mul(&Coefficient::from_rational(chi[x].clone()))
                .neg();
            p = p.add(&self.div_j_at(x).add(&self.lap_g_at(x)).scale(&w));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::table::RewriteTable;
    use crate::modes::build_lattice;
    use num::FromPrimitive;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_unsupported_lattices() {
        let l = build_lattice(1.0, 6, 1).unwrap();
        assert!(SymbolicFields::new(&l).is_err());
        let l = build_lattice(1.0, 4, 3).unwrap();
        assert!(SymbolicFields::new(&l).is_err());
    }

    #[test]
    fn g_e_structure_and_star() {
        let l = build_lattice(3.0, 4, 1).unwrap();
        let f = SymbolicFields::new(&l).unwrap();
        for x in 0..l.n_sites() {
            let g = f.g_at(x);
            assert_eq!(g.n_terms(), 4); // 2 active momenta × 2 symbols
            let e = f.e_at(x, 0);
            // star consistency: E(x)* = E(x)
            assert_eq!(e.star(), e);
        }
    }

    #[test]
    fn c_is_ghost_only_and_star_fixed() {
        let l = build_lattice(2.0, 4, 1).unwrap();
        let f = SymbolicFields::new(&l).unwrap();
        let chi: Vec<Rational> = [1, -2, 3, 5].iter().map(|&n| rat(n, 7)).collect();
        let c = f.c_poly(&chi);
        assert!(!c.is_zero());
        assert!(c.ghost_only());
        assert_eq!(c.star(), c, "C* must equal C for real χ");
    }

    #[test]
    fn d3_n2_c_vanishes() {
        // all momenta self-paired: no quantized modes, C ≡ 0, trivially
        // photon-free
        let l = build_lattice(2.0, 2, 3).unwrap();
        let f = SymbolicFields::new(&l).unwrap();
        let chi: Vec<Rational> = (0..8).map(|n| Rational::from_i64(n).unwrap()).collect();
        let c = f.c_poly(&chi);
        assert!(c.is_zero());
        assert!(c.photon_free());
    }

    #[test]
    fn omega_commutes_with_c() {
        let l = build_lattice(5.0, 4, 1).unwrap();
        let f = SymbolicFields::new(&l).unwrap();
        let t = RewriteTable::standard();
        let chi: Vec<Rational> = [2, 0, -1, 4].iter().map(|&n| rat(n, 3)).collect();
        let c = f.c_poly(&chi);
        for &ki in &l.active {
            let om = f.omega(ki);
            assert!(om.commutator(&c, &t).is_zero());
        }
    }
}
