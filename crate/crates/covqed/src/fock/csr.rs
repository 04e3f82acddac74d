//! Minimal complex CSR matrix, enough for the representation layer: build
//! from triplets, matvec, adjoint, products, Kronecker products (small
//! dimensions only) and dense conversion for the oracle tests.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub nrows: usize,
    pub ncols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub data: Vec<Complex64>,
}

impl Csr {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Csr {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Csr {
            nrows: n,
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            data: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            if v != Complex64::new(0.0, 0.0) {
                rows[r].push((c, v));
            }
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in rows.iter_mut() {
            row.sort_by_key(|(c, _)| *c);
            // merge duplicates
            let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                if let Some(last) = merged.last_mut() {
                    if last.0 == c {
                        last.1 += v;
                        continue;
                    }
                }
                merged.push((c, v));
            }
            for (c, v) in merged {
                if v != Complex64::new(0.0, 0.0) {
                    indices.push(c);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Csr {
            nrows,
            ncols,
            indptr,
            indices,
            data,
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn matvec_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.ncols);
        debug_assert_eq!(out.len(), self.nrows);
        for r in 0..self.nrows {
            let mut acc = Complex64::new(0.0, 0.0);
            for idx in self.indptr[r]..self.indptr[r + 1] {
                acc += self.data[idx] * v[self.indices[idx]];
            }
            out[r] = acc;
        }
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.nrows];
        self.matvec_into(v, &mut out);
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Csr {
        let mut trips = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for idx in self.indptr[r]..self.indptr[r + 1] {
                trips.push((self.indices[idx], r, self.data[idx].conj()));
            }
        }
        Csr::from_triplets(self.ncols, self.nrows, trips)
    }

    pub fn scale(&self, s: Complex64) -> Csr {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, o: &Csr) -> Csr {
        assert_eq!((self.nrows, self.ncols), (o.nrows, o.ncols));
        let mut trips = Vec::with_capacity(self.nnz() + o.nnz());
        for m in [self, o] {
            for r in 0..m.nrows {
                for idx in m.indptr[r]..m.indptr[r + 1] {
                    trips.push((r, m.indices[idx], m.data[idx]));
                }
            }
        }
        Csr::from_triplets(self.nrows, self.ncols, trips)
    }

    pub fn matmul(&self, o: &Csr) -> Csr {
        assert_eq!(self.ncols, o.nrows);
        let mut trips = Vec::new();
        for r in 0..self.nrows {
            let mut row_acc: std::collections::BTreeMap<usize, Complex64> =
                std::collections::BTreeMap::new();
            for idx in self.indptr[r]..self.indptr[r + 1] {
                let k = self.indices[idx];
                let va = self.data[idx];
                for j in o.indptr[k]..o.indptr[k + 1] {
                    *row_acc
                        .entry(o.indices[j])
                        .or_insert_with(|| Complex64::new(0.0, 0.0)) += va * o.data[j];
                }
            }
            for (c, v) in row_acc {
                trips.push((r, c, v));
            }
        }
        Csr::from_triplets(self.nrows, o.ncols, trips)
    }

    pub fn kron(&self, o: &Csr) -> Csr {
        let mut trips = Vec::with_capacity(self.nnz() * o.nnz());
        for r1 in 0..self.nrows {
            for i1 in self.indptr[r1]..self.indptr[r1 + 1] {
                for r2 in 0..o.nrows {
                    for i2 in o.indptr[r2]..o.indptr[r2 + 1] {
                        trips.push((
                            r1 * o.nrows + r2,
                            self.indices[i1] * o.ncols + o.indices[i2],
                            self.data[i1] * o.data[i2],
                        ));
                    }
                }
            }
        }
        Csr::from_triplets(self.nrows * o.nrows, self.ncols * o.ncols, trips)
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.ncols]; self.nrows];
        for r in 0..self.nrows {
            for idx in self.indptr[r]..self.indptr[r + 1] {
                out[r][self.indices[idx]] = self.data[idx];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Small dense square matrix for single-mode boson factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallMat {
    pub n: usize,
    pub data: Vec<Complex64>, // row-major
}

impl SmallMat {
    pub fn zeros(n: usize) -> Self {
        SmallMat {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = SmallMat::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }
    /// Lowering operator: a|m⟩ = √m |m−1⟩ truncated at dimension n.
    pub fn lowering(n: usize) -> Self {
        let mut m = SmallMat::zeros(n);
        for occ in 1..n {
            m.data[(occ - 1) * n + occ] = Complex64::new((occ as f64).sqrt(), 0.0);
        }
        m
    }
    pub fn raising(n: usize) -> Self {
        SmallMat::lowering(n).dagger()
    }
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }
    pub fn dagger(&self) -> SmallMat {
        let mut out = SmallMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.data[j * self.n + i] = self.data[i * self.n + j].conj();
            }
        }
        out
    }
    pub fn matmul(&self, o: &SmallMat) -> SmallMat {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = SmallMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }
    pub fn scale(&self, s: Complex64) -> SmallMat {
        SmallMat {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }
    pub fn to_csr(&self) -> Csr {
        let mut trips = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.data[i * self.n + j];
                if v != Complex64::new(0.0, 0.0) {
                    trips.push((i, j, v));
                }
            }
        }
        Csr::from_triplets(self.n, self.n, trips)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_roundtrip_and_ops() {
        let a = Csr::from_triplets(
            2,
            2,
            [
                (0, 1, Complex64::new(1.0, 2.0)),
                (1, 0, Complex64::new(-1.0, 0.0)),
            ],
        );
        let d = a.dagger();
        assert_eq!(d.to_dense()[1][0], Complex64::new(1.0, -2.0));
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let w = a.matvec(&v);
        assert_eq!(w[0], Complex64::new(-2.0, 1.0));
    }

    #[test]
    fn lowering_matrix_elements() {
        // single mode cutoff 1: lower = [[0,1],[0,0]] in occupation basis
        let a = SmallMat::lowering(2);
        assert_eq!(a.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(a.get(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(a.get(1, 0), Complex64::new(0.0, 0.0));
        // cutoff c: [a, a†] = I except −c at the top state
        let c = 4;
        let a = SmallMat::lowering(c + 1);
        let ad = a.dagger();
        let x = a.matmul(&ad);
        let y = ad.matmul(&a);
        let comm_top = x.get(c, c) - y.get(c, c);
        assert!((comm_top - Complex64::new(-(c as f64), 0.0)).norm() < 1e-14);
        for i in 0..c {
            assert!((x.get(i, i) - y.get(i, i) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }
}
