//! The conformance suite: guard-banded residual norms of the Heisenberg
//! relations and the equal-time commutator identities, evaluated on a
//! deterministic set of probe states.
//!
//! Residuals are worst-case over the probes of ‖(LHS − RHS)φ‖ with ‖φ‖ = 1
//! and φ supported at least two levels below every boson cutoff.

use super::hamiltonian::AssembleOptions;
use super::Model;
use crate::fock::{norm2, Basis, LinOp, Workspace};
use crate::modes::{make_chi, ChiKind};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ConformanceEntry {
    pub id: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformanceReport {
    pub entries: Vec<ConformanceEntry>,
    pub all_pass: bool,
    /// Probe guard band (levels below each cutoff kept occupied).
    pub guard_band: usize,
    pub n_probes: usize,
}

/// Deterministic guard-banded probe states.
pub fn guard_band_probes(basis: &Basis, n: usize, g: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<Complex64> = (0..basis.dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for (i, x) in v.iter_mut().enumerate() {
            let b = i % basis.boson_dim;
            for (si, slot) in basis.slots.iter().enumerate() {
                if basis.boson_occ(b, si) + g > slot.levels - 1 {
                    *x = Complex64::new(0.0, 0.0);
                    break;
                }
            }
        }
        let nn = norm2(&v);
        if nn > 0.0 {
            for x in v.iter_mut() {
                *x /= nn;
            }
        }
        out.push(v);
    }
    out
}

fn commutator_apply(
    a: &LinOp,
    b: &LinOp,
    phi: &[Complex64],
    ws: &mut Workspace,
) -> Vec<Complex64> {
    let dim = phi.len();
    let mut bphi = vec![Complex64::new(0.0, 0.0); dim];
    b.apply_into(phi, &mut bphi, ws);
    let mut abphi = vec![Complex64::new(0.0, 0.0); dim];
    a.apply_into(&bphi, &mut abphi, ws);
    let mut aphi = vec![Complex64::new(0.0, 0.0); dim];
    a.apply_into(phi, &mut aphi, ws);
    let mut baphi = vec![Complex64::new(0.0, 0.0); dim];
    b.apply_into(&aphi, &mut baphi, ws);
    abphi
        .into_iter()
        .zip(baphi)
        .map(|(x, y)| x - y)
        .collect()
}

fn max_residual(
    lhs_minus_rhs: impl Fn(&[Complex64], &mut Workspace) -> Vec<Complex64>,
    probes: &[Vec<Complex64>],
    ws: &mut Workspace,
) -> f64 {
    let mut worst: f64 = 0.0;
    for phi in probes {
        let r = lhs_minus_rhs(phi, ws);
        worst = worst.max(norm2(&r));
    }
    worst
}

/// Run the suite on a model. Sites and site pairs are covered exhaustively
/// up to 8 sites, then by a deterministic subsample.
pub fn conformance_suite(model: &Model, seed: u64) -> crate::error::Result<ConformanceReport> {
    let fs = &model.fields;
    let tol = model.config.tolerances.conformance;
    let guard = 2usize;
    let probes = guard_band_probes(&model.basis, 3, guard, seed);
    let mut ws = Workspace::new(model.basis.dim);
    let mut entries: Vec<ConformanceEntry> = Vec::new();
    let h = &model.hamiltonian;
    let im = Complex64::new(0.0, 1.0);

    let n_sites = model.lattice.n_sites();
    let sites: Vec<usize> = if n_sites <= 8 {
        (0..n_sites).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut v: Vec<usize> = (0..n_sites).collect();
        v.shuffle(&mut rng);
        v.truncate(8);
        v.sort();
        v
    };

    // Heisenberg–Ampère: i[H, E_i(x)] = (∇×B − j̃ − ∇G)_i(x)
    for &x in &sites {
        for ax in 0..model.lattice.dim {
            let e = fs.e_at(x, ax);
            let rhs = fs
                .curl_b_at(x, ax)
                .sub(&fs.j_tilde_at(x, 1 + ax))
                .sub(&fs.grad_g_at(x, ax));
            let r = max_residual(
                |phi, ws| {
                    let mut c = commutator_apply(h, &e, phi, ws);
                    for v in c.iter_mut() {
                        *v *= im; // i[H,E]
                    }
                    let mut rr = vec![Complex64::new(0.0, 0.0); phi.len()];
                    rhs.apply_into(phi, &mut rr, ws);
                    c.into_iter().zip(rr).map(|(a, b)| a - b).collect()
                },
                &probes,
                &mut ws,
            );
            entries.push(ConformanceEntry {
                id: format!("heisenberg-ampere[x{x},a{ax}]"),
                residual: r,
                tol,
                pass: r <= tol,
            });
        }
    }

    // Heisenberg–Gauss: i[H, G(x)] = −(∇·E − j̃₀)(x)
    for &x in &sites {
        let g = fs.g_at(x);
        let rhs = fs.div_e_at(x).sub(&fs.j_tilde_at(x, 0)).scale(Complex64::new(-1.0, 0.0));
        let r = max_residual(
            |phi, ws| {
                let mut c = commutator_apply(h, &g, phi, ws);
                for v in c.iter_mut() {
                    *v *= im;
                }
                let mut rr = vec![Complex64::new(0.0, 0.0); phi.len()];
                rhs.apply_into(phi, &mut rr, ws);
                c.into_iter().zip(rr).map(|(a, b)| a - b).collect()
            },
            &probes,
            &mut ws,
        );
        entries.push(ConformanceEntry {
            id: format!("heisenberg-gauss[x{}]", x),
            residual: r,
            tol,
            pass: r <= tol,
        });
    }

    // [G(x), E_i(y)] = 0 over sampled pairs
    for &x in sites.iter().take(4) {
        for &y in sites.iter().take(4) {
            for ax in 0..model.lattice.dim {
                let g = fs.g_at(x);
                let e = fs.e_at(y, ax);
                let r = max_residual(
                    |phi, ws| commutator_apply(&g, &e, phi, ws),
                    &probes,
                    &mut ws,
                );
                entries.push(ConformanceEntry {
                    id: format!("g-e-commutator[x{x},y{y},a{ax}]"),
                    residual: r,
                    tol,
                    pass: r <= tol,
                });
            }
        }
    }

    // [j̃_i(x), E_j(y)] = 0 (disjoint sectors; exact)
    {
        let x = sites[0];
        let y = *sites.last().unwrap();
        let mut worst: f64 = 0.0;
        for mu in 1..=model.lattice.dim {
            for ax in 0..model.lattice.dim {
                let j = fs.j_tilde_at(x, mu);
                let e = fs.e_at(y, ax);
                worst = worst.max(max_residual(
                    |phi, ws| commutator_apply(&j, &e, phi, ws),
                    &probes,
                    &mut ws,
                ));
            }
        }
        entries.push(ConformanceEntry {
            id: "j-e-commutator".to_string(),
            residual: worst,
            tol,
            pass: worst <= tol,
        });
    }

    // [Ω(k), C] = 0 for a sampled χ
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc41);
        let vals: Vec<f64> = (0..n_sites).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let chi = make_chi(
            &model.lattice,
            &ChiKind::SelfTuned {
                f: 1.0,
                field: crate::modes::ScalarField::from_real(vals),
            },
        )?;
        let c = fs.c_op(&chi)?;
        let mut worst: f64 = 0.0;
        for &ki in &model.lattice.active {
            let om = fs.omega_op(ki)?;
            worst = worst.max(max_residual(
                |phi, ws| commutator_apply(&om, &c, phi, ws),
                &probes,
                &mut ws,
            ));
        }
        entries.push(ConformanceEntry {
            id: "omega-c-commutator".to_string(),
            residual: worst,
            tol,
            pass: worst <= tol,
        });
    }

    // η-self-adjointness of H
    {
        let hstar = fs.eta.phys_adjoint(&model.basis, h);
        let r = max_residual(
            |phi, ws| {
                let mut a = vec![Complex64::new(0.0, 0.0); phi.len()];
                h.apply_into(phi, &mut a, ws);
                let mut b = vec![Complex64::new(0.0, 0.0); phi.len()];
                hstar.apply_into(phi, &mut b, ws);
                a.into_iter().zip(b).map(|(x, y)| x - y).collect()
            },
            &probes,
            &mut ws,
        );
        entries.push(ConformanceEntry {
            id: "h-eta-self-adjoint".to_string(),
            residual: r,
            tol,
            pass: r <= tol,
        });
    }

    // bare vacuum energy is zero (normal ordering)
    {
        let vac = crate::fock::StateVec::vacuum(model.basis.dim);
        let e0 = super::phys_expectation(&fs.eta, h, &vac.data, &mut ws);
        let r = e0.norm();
        entries.push(ConformanceEntry {
            id: "vacuum-energy".to_string(),
            residual: r,
            tol,
            pass: r <= tol,
        });
    }

    // γ-independence of the Heisenberg relations: rebuild at γ = 0 and
    // compare i[H,E] on the probes
    {
        let h0 = model.terms.assemble(
            fs,
            AssembleOptions {
                gamma: 0.0,
                drop_g_div_a: false,
            },
        );
        let x = sites[0];
        let e = fs.e_at(x, 0);
        let g = fs.g_at(x);
        let mut worst: f64 = 0.0;
        for op in [&e, &g] {
            worst = worst.max(max_residual(
                |phi, ws| {
                    let a = commutator_apply(h, op, phi, ws);
                    let b = commutator_apply(&h0, op, phi, ws);
                    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
                },
                &probes,
                &mut ws,
            ));
        }
        entries.push(ConformanceEntry {
            id: "gamma-independence".to_string(),
            residual: worst,
            tol,
            pass: worst <= tol,
        });
    }

    let all_pass = entries.iter().all(|e| e.pass);
    Ok(ConformanceReport {
        entries,
        all_pass,
        guard_band: guard,
        n_probes: probes.len(),
    })
}

/// Conformance of a deliberately mutated Hamiltonian (G∇·A dropped); used
/// by the mutation-sensitivity acceptance check.
pub fn mutated_ampere_residual(model: &Model, seed: u64) -> f64 {
    let fs = &model.fields;
    let h_mut = model.terms.assemble(
        fs,
        AssembleOptions {
            gamma: model.config.gamma,
            drop_g_div_a: true,
        },
    );
    let probes = guard_band_probes(&model.basis, 2, 2, seed);
    let mut ws = Workspace::new(model.basis.dim);
    let x = 0;
    let im = Complex64::new(0.0, 1.0);
    let e = fs.e_at(x, 0);
    let rhs = fs
        .curl_b_at(x, 0)
        .sub(&fs.j_tilde_at(x, 1))
        .sub(&fs.grad_g_at(x, 0));
    max_residual(
        |phi, ws| {
            let mut c = commutator_apply(&h_mut, &e, phi, ws);
            for v in c.iter_mut() {
                *v *= im;
            }
            let mut rr = vec![Complex64::new(0.0, 0.0); phi.len()];
            rhs.apply_into(phi, &mut rr, ws);
            c.into_iter().zip(rr).map(|(a, b)| a - b).collect()
        },
        &probes,
        &mut ws,
    )
}
