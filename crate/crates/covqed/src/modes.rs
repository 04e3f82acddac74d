//! Periodic lattice, momentum set, spectral derivatives, polarization bases
//! and test functions χ.
//!
//! Momenta are indexed by integer vectors n ∈ (−N/2, N/2]^d with n ≠ 0,
//! k = (2π/L)·n. For even N the point n_i = N/2 is its own negative modulo N
//! (Nyquist); a momentum whose every nonzero component is Nyquist is
//! *self-paired* and carries no derivative-active direction. The spectral
//! derivative multiplier m(k) zeroes Nyquist components, which makes
//! summation by parts, ∇·(∇×·) ≡ 0 and ∇·∇ = ∇² exact identities of the
//! discretization.

use crate::error::{CovqedError, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

pub const MAX_DIM: usize = 3;

/// One lattice momentum k = (2π/L)·n.
#[derive(Debug, Clone)]
pub struct Momentum {
    /// Integer label per axis, in (−N/2, N/2].
    pub n: [i32; MAX_DIM],
    /// k components (representative values).
    pub k: [f64; MAX_DIM],
    /// |k|.
    pub mag: f64,
    /// Derivative-active components: k_i, or 0 on Nyquist axes.
    pub m: [f64; MAX_DIM],
    /// Index of the momentum representing −k (mod reciprocal lattice).
    pub neg: usize,
    /// True when −k ≡ k (every nonzero component at Nyquist).
    pub self_paired: bool,
}

impl Momentum {
    /// |m(k)|, the active momentum magnitude used in mode coefficients.
    pub fn active_mag(&self) -> f64 {
        self.m.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Periodic box, momentum set and site enumeration.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    pub box_length: f64,
    pub sites_per_axis: usize,
    pub dim: usize,
    pub spacing: f64,
    pub volume: f64,
    /// All nonzero momenta, |K| = N^d − 1.
    pub momenta: Vec<Momentum>,
    /// Indices into `momenta` of the quantized (non-self-paired) modes.
    pub active: Vec<usize>,
    n_sites: usize,
}

impl LatticeSpec {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Site coordinate of flat index `j` (row-major over axes).
    pub fn site(&self, j: usize) -> [f64; MAX_DIM] {
        let n = self.sites_per_axis;
        let mut out = [0.0; MAX_DIM];
        let mut rem = j;
        for ax in (0..self.dim).rev() {
            out[ax] = self.spacing * (rem % n) as f64;
            rem /= n;
        }
        out
    }

    /// Integer site coordinates of flat index `j`.
    pub fn site_n(&self, j: usize) -> [usize; MAX_DIM] {
        let n = self.sites_per_axis;
        let mut out = [0usize; MAX_DIM];
        let mut rem = j;
        for ax in (0..self.dim).rev() {
            out[ax] = rem % n;
            rem /= n;
        }
        out
    }

    /// k·x for momentum index `ki` and site index `j`.
    pub fn k_dot_x(&self, ki: usize, j: usize) -> f64 {
        let m = &self.momenta[ki];
        let x = self.site(j);
        (0..self.dim).map(|ax| m.k[ax] * x[ax]).sum()
    }

    /// n·m mod N as an integer (exact phase exponent in units of 2π/N).
    pub fn phase_exponent(&self, ki: usize, j: usize) -> usize {
        let n = self.sites_per_axis as i64;
        let mom = &self.momenta[ki];
        let site = self.site_n(j);
        let mut e: i64 = 0;
        for ax in 0..self.dim {
            e += mom.n[ax] as i64 * site[ax] as i64;
        }
        e.rem_euclid(n) as usize
    }
}

/// Build the lattice. N must be even and ≥ 2; d ∈ {1, 3}.
pub fn build_lattice(box_length: f64, sites_per_axis: usize, dim: usize) -> Result<LatticeSpec> {
    if !(dim == 1 || dim == 3) {
        return Err(CovqedError::config(format!("dimension must be 1 or 3, got {dim}")));
    }
    if box_length <= 0.0 {
        return Err(CovqedError::config(format!(
            "box length must be positive, got {box_length}"
        )));
    }
    if sites_per_axis < 2 || sites_per_axis % 2 != 0 {
        return Err(CovqedError::config(format!(
            "sites per axis must be an even integer >= 2, got {sites_per_axis}"
        )));
    }
    let n = sites_per_axis as i32;
    let unit = 2.0 * PI / box_length;
    let range: Vec<i32> = (-(n / 2 - 1)..=n / 2).collect();
    let mut labels: Vec<[i32; MAX_DIM]> = Vec::new();
    match dim {
        1 => {
            for &a in &range {
                if a != 0 {
                    labels.push([a, 0, 0]);
                }
            }
        }
        _ => {
            for &a in &range {
                for &b in &range {
                    for &c in &range {
                        if (a, b, c) != (0, 0, 0) {
                            labels.push([a, b, c]);
                        }
                    }
                }
            }
        }
    }
    let neg_label = |v: &[i32; MAX_DIM]| -> [i32; MAX_DIM] {
        let mut o = [0; MAX_DIM];
        for ax in 0..dim {
            let mut w = -v[ax];
            // map back into (−N/2, N/2]
            if w <= -(n / 2) {
                w += n;
            }
            o[ax] = w;
        }
        o
    };
    let momenta: Vec<Momentum> = labels
        .iter()
        .map(|lab| {
            let mut k = [0.0; MAX_DIM];
            let mut m = [0.0; MAX_DIM];
            for ax in 0..dim {
                k[ax] = unit * lab[ax] as f64;
                m[ax] = if lab[ax] == n / 2 { 0.0 } else { k[ax] };
            }
            let nl = neg_label(lab);
            let neg = labels.iter().position(|x| *x == nl).expect("closed under negation");
            Momentum {
                n: *lab,
                k,
                mag: k.iter().map(|x| x * x).sum::<f64>().sqrt(),
                m,
                neg,
                self_paired: nl == *lab,
            }
        })
        .collect();
    let active = momenta
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.self_paired)
        .map(|(i, _)| i)
        .collect();
    Ok(LatticeSpec {
        box_length,
        sites_per_axis,
        dim,
        spacing: box_length / sites_per_axis as f64,
        volume: box_length.powi(dim as i32),
        momenta,
        active,
        n_sites: sites_per_axis.pow(dim as u32),
    })
}

/// Complex scalar field sampled on the lattice sites.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub values: Vec<Complex64>,
    pub is_real: bool,
}

impl ScalarField {
    pub fn zeros(lattice: &LatticeSpec) -> Self {
        ScalarField {
            values: vec![Complex64::new(0.0, 0.0); lattice.n_sites()],
            is_real: true,
        }
    }

    pub fn from_real(vals: Vec<f64>) -> Self {
        ScalarField {
            values: vals.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            is_real: true,
        }
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }
}

/// Vector field: one ScalarField per axis.
pub type VectorField = Vec<ScalarField>;

// ---------------------------------------------------------------------------
// FFT plumbing: unitary-with-weights convention
//   fhat(k) = (a^d/sqrt(V)) Σ_x f(x) e^{-ikx},  f(x) = (1/sqrt(V)) Σ_k fhat(k) e^{ikx}
// Parseval: a^d Σ_x |f|^2 = Σ_k |fhat|^2.
// ---------------------------------------------------------------------------

fn fft_axis(data: &mut [Complex64], n: usize, stride: usize, count: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..count {
        // gather a line: the layout is row-major; lines along an axis are
        // strided. `c` enumerates the other-axes combinations.
        let base = line_base(c, n, stride);
        for i in 0..n {
            buf[i] = data[base + i * stride];
        }
        fft.process(&mut buf);
        for i in 0..n {
            data[base + i * stride] = buf[i];
        }
    }
}

fn line_base(c: usize, n: usize, stride: usize) -> usize {
    // lines along an axis with given stride: indices split as
    // idx = hi*(n*stride) + lo with lo in [0, stride)
    let hi = c / stride;
    let lo = c % stride;
    hi * n * stride + lo
}

/// Forward transform to momentum components indexed like sites (FFT layout:
/// frequency index t per axis, t in [0, N)). Caller maps t ↔ n via n ≡ t mod N.
fn dft_forward(lattice: &LatticeSpec, f: &ScalarField) -> Vec<Complex64> {
    let n = lattice.sites_per_axis;
    let mut data = f.values.clone();
    let count = data.len() / n;
    let mut stride = 1;
    for _ax in 0..lattice.dim {
        fft_axis(&mut data, n, stride, count, false);
        stride *= n;
    }
    let scale = lattice.spacing.powi(lattice.dim as i32) / lattice.volume.sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
    data
}

fn dft_inverse(lattice: &LatticeSpec, fhat: &[Complex64]) -> Vec<Complex64> {
    let n = lattice.sites_per_axis;
    let mut data = fhat.to_vec();
    let count = data.len() / n;
    let mut stride = 1;
    for _ax in 0..lattice.dim {
        fft_axis(&mut data, n, stride, count, true);
        stride *= n;
    }
    // rustfft inverse is unnormalized: Σ_t X(t) e^{+2πi jt/N}; with the
    // forward scale a^d/√V this 1/√V makes the round trip exact.
    let scale = 1.0 / lattice.volume.sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
    data
}

/// Active derivative multiplier for FFT frequency index t on one axis.
fn axis_multiplier(lattice: &LatticeSpec, t: usize) -> f64 {
    let n = lattice.sites_per_axis;
    let half = n / 2;
    let nn: i64 = if t <= half { t as i64 } else { t as i64 - n as i64 };
    if nn.unsigned_abs() as usize == half {
        0.0 // Nyquist component: zeroed (self-paired)
    } else {
        2.0 * PI / lattice.box_length * nn as f64
    }
}

/// Fourier coefficients of f at the lattice momenta (momentum-set indexing).
pub fn fourier_coefficients(lattice: &LatticeSpec, f: &ScalarField) -> Vec<Complex64> {
    let data = dft_forward(lattice, f);
    let n = lattice.sites_per_axis as i64;
    lattice
        .momenta
        .iter()
        .map(|mom| {
            let mut idx = 0usize;
            for ax in 0..lattice.dim {
                let t = (mom.n[ax] as i64).rem_euclid(n) as usize;
                idx = idx * lattice.sites_per_axis + t;
            }
            data[idx]
        })
        .collect()
}

fn apply_multiplier<F>(lattice: &LatticeSpec, f: &ScalarField, mult: F) -> ScalarField
where
    F: Fn(&[f64; MAX_DIM]) -> Complex64,
{
    let n = lattice.sites_per_axis;
    let mut hat = dft_forward(lattice, f);
    for (idx, v) in hat.iter_mut().enumerate() {
        let mut m = [0.0; MAX_DIM];
        let mut rem = idx;
        for ax in (0..lattice.dim).rev() {
            m[ax] = axis_multiplier(lattice, rem % n);
            rem /= n;
        }
        *v *= mult(&m);
    }
    let vals = dft_inverse(lattice, &hat);
    let is_real_out = f.is_real;
    let mut out = ScalarField {
        values: vals,
        is_real: false,
    };
    if is_real_out {
        // real input and conjugate-symmetric multiplier produce real output;
        // scrub rounding dust so downstream reality checks stay exact
        let tol = 1e-13
            * out
                .values
                .iter()
                .map(|v| v.norm())
                .fold(0.0f64, f64::max)
                .max(1.0);
        if out.values.iter().all(|v| v.im.abs() <= tol) {
            for v in out.values.iter_mut() {
                *v = Complex64::new(v.re, 0.0);
            }
            out.is_real = true;
        }
    }
    out
}

/// Spectral gradient (one field per axis).
pub fn spectral_grad(lattice: &LatticeSpec, f: &ScalarField) -> VectorField {
    (0..lattice.dim)
        .map(|ax| apply_multiplier(lattice, f, |m| Complex64::new(0.0, m[ax])))
        .collect()
}

/// Spectral divergence of a vector field.
pub fn spectral_div(lattice: &LatticeSpec, v: &VectorField) -> ScalarField {
    assert_eq!(v.len(), lattice.dim);
    let mut acc = ScalarField::zeros(lattice);
    acc.is_real = v.iter().all(|f| f.is_real);
    for (ax, f) in v.iter().enumerate() {
        let d = apply_multiplier(lattice, f, |m| Complex64::new(0.0, m[ax]));
        for (o, x) in acc.values.iter_mut().zip(d.values.iter()) {
            *o += x;
        }
        acc.is_real &= d.is_real;
    }
    acc
}

/// Spectral curl (d = 3 only).
pub fn spectral_curl(lattice: &LatticeSpec, v: &VectorField) -> Result<VectorField> {
    if lattice.dim != 3 {
        return Err(CovqedError::config("curl requires a 3-dimensional lattice"));
    }
    let d = |i: usize, f: &ScalarField| apply_multiplier(lattice, f, |m| Complex64::new(0.0, m[i]));
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let l = (i + 2) % 3;
        let a = d(j, &v[l]);
        let b = d(l, &v[j]);
        let mut vals = Vec::with_capacity(a.values.len());
        for (x, y) in a.values.iter().zip(b.values.iter()) {
            vals.push(x - y);
        }
        out.push(ScalarField {
            values: vals,
            is_real: a.is_real && b.is_real,
        });
    }
    Ok(out)
}

/// Spectral Laplacian, −|m(k)|² multiplier (= div∘grad exactly).
pub fn spectral_laplacian(lattice: &LatticeSpec, f: &ScalarField) -> ScalarField {
    apply_multiplier(lattice, f, |m| {
        Complex64::new(-(m.iter().map(|x| x * x).sum::<f64>()), 0.0)
    })
}

/// a^d Σ_x f(x) g(x) (no conjugation).
pub fn lattice_sum_product(lattice: &LatticeSpec, f: &ScalarField, g: &ScalarField) -> Complex64 {
    let w = lattice.spacing.powi(lattice.dim as i32);
    f.values
        .iter()
        .zip(g.values.iter())
        .map(|(a, b)| a * b)
        .sum::<Complex64>()
        * w
}

// ---------------------------------------------------------------------------
// Polarization
// ---------------------------------------------------------------------------

/// Two orthonormal transverse vectors per active momentum (d = 3).
/// d = 1 has no transverse directions and yields an empty basis.
#[derive(Debug, Clone)]
pub struct PolarizationBasis {
    /// Keyed by momentum index; entries only for active momenta in d = 3.
    pub eps: Vec<Option<[[f64; 3]; 2]>>,
}

/// Deterministic construction: take the coordinate axis with the smallest
/// |k-component| (lowest index on ties), Gram-Schmidt it against k̂ to get
/// ε¹, and complete the right-handed triad with ε² = k̂ × ε¹.
pub fn polarization_basis(lattice: &LatticeSpec) -> PolarizationBasis {
    let mut eps = vec![None; lattice.momenta.len()];
    if lattice.dim != 3 {
        return PolarizationBasis { eps };
    }
    for (i, mom) in lattice.momenta.iter().enumerate() {
        if mom.self_paired {
            continue;
        }
        let k = mom.k;
        let mag = mom.mag;
        let khat = [k[0] / mag, k[1] / mag, k[2] / mag];
        let mut axis = 0usize;
        for ax in 1..3 {
            if k[ax].abs() < k[axis].abs() {
                axis = ax;
            }
        }
        let mut e1 = [0.0f64; 3];
        e1[axis] = 1.0;
        let proj: f64 = (0..3).map(|j| e1[j] * khat[j]).sum();
        for j in 0..3 {
            e1[j] -= proj * khat[j];
        }
        let n1: f64 = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
        for v in e1.iter_mut() {
            *v /= n1;
        }
        let e2 = [
            khat[1] * e1[2] - khat[2] * e1[1],
            khat[2] * e1[0] - khat[0] * e1[2],
            khat[0] * e1[1] - khat[1] * e1[0],
        ];
        eps[i] = Some([e1, e2]);
    }
    PolarizationBasis { eps }
}

// ---------------------------------------------------------------------------
// Test functions χ
// ---------------------------------------------------------------------------

/// Recipes for the gauge function χ(x).
#[derive(Debug, Clone)]
pub enum ChiKind {
    /// χ(x) = A·cos(k₀·x) for a lattice momentum label n₀.
    FourierMode { n: [i32; MAX_DIM], amplitude: f64 },
    /// Periodized Gaussian bump centered at `center` (site coordinates).
    GaussianBump {
        center: [f64; MAX_DIM],
        width: f64,
        amplitude: f64,
    },
    /// χ(x) = f · D(x) for a supplied real divergence-expectation field.
    SelfTuned { f: f64, field: ScalarField },
}

pub fn make_chi(lattice: &LatticeSpec, kind: &ChiKind) -> Result<ScalarField> {
    match kind {
        ChiKind::FourierMode { n, amplitude } => {
            let vals = (0..lattice.n_sites())
                .map(|j| {
                    let x = lattice.site(j);
                    let phase: f64 = (0..lattice.dim)
                        .map(|ax| 2.0 * PI / lattice.box_length * n[ax] as f64 * x[ax])
                        .sum();
                    amplitude * phase.cos()
                })
                .collect();
            Ok(ScalarField::from_real(vals))
        }
        ChiKind::GaussianBump {
            center,
            width,
            amplitude,
        } => {
            if *width <= 0.0 {
                return Err(CovqedError::config("gaussian bump width must be positive"));
            }
            let l = lattice.box_length;
            let vals = (0..lattice.n_sites())
                .map(|j| {
                    let x = lattice.site(j);
                    let mut r2 = 0.0;
                    for ax in 0..lattice.dim {
                        // nearest periodic image
                        let mut dx = (x[ax] - center[ax]).rem_euclid(l);
                        if dx > l / 2.0 {
                            dx -= l;
                        }
                        r2 += dx * dx;
                    }
                    amplitude * (-r2 / (2.0 * width * width)).exp()
                })
                .collect();
            Ok(ScalarField::from_real(vals))
        }
        ChiKind::SelfTuned { f, field } => {
            if !field.is_real {
                return Err(CovqedError::config(
                    "self_tuned χ requires a real divergence-expectation field",
                ));
            }
            if *f < 0.0 {
                return Err(CovqedError::config("self_tuned scale f must be >= 0"));
            }
            Ok(ScalarField {
                values: field.values.iter().map(|v| v * *f).collect(),
                is_real: true,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rand_field(lattice: &LatticeSpec, seed: u64) -> ScalarField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ScalarField::from_real((0..lattice.n_sites()).map(|_| rng.gen_range(-1.0..1.0)).collect())
    }

    #[test]
    fn momentum_counting() {
        // (L=2, N=2, d=1) → K = {π}, Nyquist only (k = 2πn/L)
        let l = build_lattice(2.0, 2, 1).unwrap();
        assert_eq!(l.momenta.len(), 1);
        assert!((l.momenta[0].k[0] - PI).abs() < 1e-15);
        assert!(l.momenta[0].self_paired);
        assert!(l.active.is_empty());

        // (L=2π, N=4, d=1) → exactly N−1 = 3 momenta
        let l = build_lattice(2.0 * PI, 4, 1).unwrap();
        assert!((l.momenta.iter().map(|m| m.k[0]).fold(f64::MAX, f64::min) + 1.0).abs() < 1e-14);
        assert_eq!(l.momenta.len(), 3);
        assert_eq!(l.active.len(), 2);

        // (L=2π, N=2, d=3) → |K| = 7
        let l = build_lattice(2.0 * PI, 2, 3).unwrap();
        assert_eq!(l.momenta.len(), 7);
        assert!(l.active.is_empty());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_lattice(1.0, 3, 1).is_err());
        assert!(build_lattice(-1.0, 4, 1).is_err());
        assert!(build_lattice(1.0, 4, 2).is_err());
    }

    #[test]
    fn neg_indices_close() {
        let l = build_lattice(5.0, 4, 3).unwrap();
        for (i, m) in l.momenta.iter().enumerate() {
            let neg = &l.momenta[m.neg];
            assert_eq!(neg.neg, i);
            for ax in 0..3 {
                // components agree mod N
                let n = l.sites_per_axis as i32;
                assert_eq!((m.n[ax] + neg.n[ax]).rem_euclid(n), 0);
            }
        }
    }

    #[test]
    fn grad_of_constant_is_zero() {
        let l = build_lattice(3.0, 4, 1).unwrap();
        let f = ScalarField::from_real(vec![2.5; l.n_sites()]);
        let g = spectral_grad(&l, &f);
        for v in &g[0].values {
            assert!(v.norm() < 1e-14);
        }
    }

    #[test]
    fn summation_by_parts_exact() {
        for (n, d) in [(4usize, 1usize), (8, 1), (4, 3)] {
            let l = build_lattice(2.7, n, d).unwrap();
            let f = rand_field(&l, 1);
            let g = rand_field(&l, 2);
            let scale: f64 = f
                .values
                .iter()
                .chain(g.values.iter())
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            for ax in 0..d {
                let df = &spectral_grad(&l, &f)[ax];
                let dg = &spectral_grad(&l, &g)[ax];
                let s = lattice_sum_product(&l, df, &g) + lattice_sum_product(&l, &f, dg);
                assert!(
                    s.norm() <= 1e-13 * scale * scale * l.volume,
                    "summation by parts violated: {s} (N={n}, d={d})"
                );
            }
        }
    }

    #[test]
    fn div_curl_is_zero() {
        let l = build_lattice(2.0, 4, 3).unwrap();
        let v: VectorField = (0..3).map(|ax| rand_field(&l, ax as u64 + 10)).collect();
        let c = spectral_curl(&l, &v).unwrap();
        let dc = spectral_div(&l, &c);
        let scale: f64 = v
            .iter()
            .flat_map(|f| f.values.iter())
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        for val in &dc.values {
            assert!(val.norm() <= 1e-13 * scale.max(1.0) * 100.0);
        }
    }

    #[test]
    fn parseval_identity() {
        for (n, d) in [(4usize, 1usize), (6, 1), (4, 3)] {
            let l = build_lattice(1.9, n, d).unwrap();
            let f = rand_field(&l, 77);
            let pos: f64 = f.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
                * l.spacing.powi(d as i32);
            let hat = dft_forward(&l, &f);
            let momsq: f64 = hat.iter().map(|v| v.norm_sqr()).sum();
            assert!(
                (pos - momsq).abs() <= 1e-12 * pos.max(1.0),
                "parseval violated: {pos} vs {momsq}"
            );
        }
    }

    #[test]
    fn lap_equals_div_grad() {
        let l = build_lattice(3.3, 4, 3).unwrap();
        let f = rand_field(&l, 5);
        let lap = spectral_laplacian(&l, &f);
        let dg = spectral_div(&l, &spectral_grad(&l, &f));
        let scale: f64 = lap.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for (a, b) in lap.values.iter().zip(dg.values.iter()) {
            assert!((a - b).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn polarization_matches_stated_rule() {
        // k = (0,0,π), pinned example: ε¹ = (1,0,0), ε² = (0,1,0)
        let l = build_lattice(2.0 * PI, 4, 3).unwrap();
        let idx = l
            .momenta
            .iter()
            .position(|m| m.n == [0, 0, 1])
            .unwrap();
        let basis = polarization_basis(&l);
        let [e1, e2] = basis.eps[idx].unwrap();
        assert!((e1[0] - 1.0).abs() < 1e-14 && e1[1].abs() < 1e-14 && e1[2].abs() < 1e-14);
        assert!((e2[1] - 1.0).abs() < 1e-14 && e2[0].abs() < 1e-14 && e2[2].abs() < 1e-14);
    }

    #[test]
    fn polarization_transverse_orthonormal() {
        let l = build_lattice(1.3, 4, 3).unwrap();
        let basis = polarization_basis(&l);
        for (i, m) in l.momenta.iter().enumerate() {
            let Some([e1, e2]) = basis.eps[i] else {
                assert!(m.self_paired);
                continue;
            };
            let dot = |a: &[f64; 3], b: &[f64; 3]| -> f64 { (0..3).map(|j| a[j] * b[j]).sum() };
            assert!(dot(&e1, &m.k).abs() < 1e-12 * m.mag);
            assert!(dot(&e2, &m.k).abs() < 1e-12 * m.mag);
            assert!((dot(&e1, &e1) - 1.0).abs() < 1e-12);
            assert!((dot(&e2, &e2) - 1.0).abs() < 1e-12);
            assert!(dot(&e1, &e2).abs() < 1e-12);
        }
    }

    #[test]
    fn polarization_empty_in_1d() {
        let l = build_lattice(2.0, 4, 1).unwrap();
        let basis = polarization_basis(&l);
        assert!(basis.eps.iter().all(|e| e.is_none()));
    }

    #[test]
    fn chi_recipes() {
        let l = build_lattice(2.0 * PI, 4, 1).unwrap();
        // self_tuned with f = 0 → identically zero
        let d = rand_field(&l, 3);
        let chi = make_chi(&l, &ChiKind::SelfTuned { f: 0.0, field: d.clone() }).unwrap();
        assert!(chi.values.iter().all(|v| v.norm() == 0.0));
        // self_tuned(f=2, g) → 2g pointwise
        let chi = make_chi(&l, &ChiKind::SelfTuned { f: 2.0, field: d.clone() }).unwrap();
        for (a, b) in chi.values.iter().zip(d.values.iter()) {
            assert_eq!(*a, b * 2.0);
        }
        // fourier_mode → A cos(k₀ x), exactly real
        let chi = make_chi(
            &l,
            &ChiKind::FourierMode { n: [1, 0, 0], amplitude: 0.7 },
        )
        .unwrap();
        assert!(chi.is_real);
        for j in 0..l.n_sites() {
            let x = l.site(j)[0];
            assert!((chi.values[j].re - 0.7 * (x).cos()).abs() < 1e-14);
        }
        // non-real input rejected
        let mut bad = d;
        bad.is_real = false;
        assert!(make_chi(&l, &ChiKind::SelfTuned { f: 1.0, field: bad }).is_err());
    }
}
