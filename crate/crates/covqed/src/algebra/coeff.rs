//! Exact coefficients: Gaussian rationals times radical monomials.
//!
//! A coefficient is a finite sum  Σ_r  g_r · r  where r ranges over radical
//! monomials (products of π, the box length L and small primes raised to
//! quarter-integer powers) and g_r ∈ ℚ(i). Distinct radical monomials are
//! linearly independent over ℚ(i), so a coefficient is zero iff every g_r
//! vanishes — this is what makes residual-is-zero decisions exact.

use num::{BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Rational = BigRational;

/// Element of ℚ(i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }
    pub fn one() -> Self {
        GaussRat {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }
    pub fn i() -> Self {
        GaussRat {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }
    pub fn from_int(n: i64) -> Self {
        GaussRat {
            re: Rational::from_integer(n.into()),
            im: Rational::zero(),
        }
    }
    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat {
            re: Rational::new(num.into(), den.into()),
            im: Rational::zero(),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn add(&self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    pub fn mul(&self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    pub fn neg(&self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
    pub fn conj(&self) -> GaussRat {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    /// Multiply by i^e.
    pub fn mul_i_pow(&self, e: usize) -> GaussRat {
        match e % 4 {
            0 => self.clone(),
            1 => GaussRat {
                re: -self.im.clone(),
                im: self.re.clone(),
            },
            2 => self.neg(),
            _ => GaussRat {
                re: self.im.clone(),
                im: -self.re.clone(),
            },
        }
    }
    pub fn to_f64(&self) -> (f64, f64) {
        let f = |r: &Rational| {
            let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
            let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            n / d
        };
        (f(&self.re), f(&self.im))
    }
}

/// Base of a radical monomial factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// π
    Pi,
    /// Box length L
    BoxL,
    /// A prime integer
    Prime(u64),
}

/// Product of atoms with quarter-integer exponents; exponents stored ×4.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RadKey(pub Vec<(Atom, i32)>);

impl RadKey {
    pub fn unit() -> Self {
        RadKey(Vec::new())
    }

    fn normalized(mut v: Vec<(Atom, i32)>) -> Self {
        v.retain(|(_, e)| *e != 0);
        v.sort();
        RadKey(v)
    }

    pub fn mul(&self, o: &RadKey) -> RadKey {
        let mut map: BTreeMap<Atom, i32> = BTreeMap::new();
        for (a, e) in self.0.iter().chain(o.0.iter()) {
            *map.entry(*a).or_insert(0) += e;
        }
        RadKey::normalized(map.into_iter().collect())
    }

    pub fn inv(&self) -> RadKey {
        RadKey(self.0.iter().map(|(a, e)| (*a, -e)).collect())
    }

    /// Split into the part with integer exponents (returned as a GaussRat
    /// rational factor where possible) and the residual radical. Used to
    /// keep keys canonical: whole powers of primes are folded into the
    /// rational coefficient; π and L always stay symbolic.
    fn extract_rational(&self) -> (Rational, RadKey) {
        let mut rat = Rational::one();
        let mut rest = Vec::new();
        for (a, e4) in &self.0 {
            match a {
                Atom::Prime(p) => {
                    let whole = e4.div_euclid(4);
                    let frac = e4.rem_euclid(4);
                    if whole != 0 {
                        let pw = Rational::from_integer((*p as i64).into());
                        let mut f = Rational::one();
                        for _ in 0..whole.abs() {
                            f *= &pw;
                        }
                        if whole > 0 {
                            rat *= f;
                        } else {
                            rat /= f;
                        }
                    }
                    if frac != 0 {
                        rest.push((*a, frac));
                    }
                }
                _ => {
                    if *e4 != 0 {
                        rest.push((*a, *e4));
                    }
                }
            }
        }
        (rat, RadKey::normalized(rest))
    }

    pub fn to_f64(&self, box_length: f64) -> f64 {
        let mut v = 1.0;
        for (a, e4) in &self.0 {
            let base = match a {
                Atom::Pi => std::f64::consts::PI,
                Atom::BoxL => box_length,
                Atom::Prime(p) => *p as f64,
            };
            v *= base.powf(*e4 as f64 / 4.0);
        }
        v
    }
}

/// Factor `n` ≥ 1 into a RadKey with exponent `e4` (in quarter units) per prime.
fn factor_key(mut n: u64, e4: i32) -> Vec<(Atom, i32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut c = 0;
        while n % p == 0 {
            n /= p;
            c += 1;
        }
        if c > 0 {
            out.push((Atom::Prime(p), e4 * c));
        }
        p += 1;
    }
    if n > 1 {
        out.push((Atom::Prime(n), e4));
    }
    out
}

/// Exact coefficient: Σ over radical monomials of ℚ(i) numbers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coefficient {
    terms: BTreeMap<RadKey, GaussRat>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::from_gauss(GaussRat::one())
    }

    pub fn i() -> Self {
        Coefficient::from_gauss(GaussRat::i())
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !g.is_zero() {
            t.insert(RadKey::unit(), g);
        }
        Coefficient { terms: t }
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coefficient::from_gauss(GaussRat::from_ratio(num, den))
    }

    pub fn from_rational(r: Rational) -> Self {
        Coefficient::from_gauss(GaussRat {
            re: r,
            im: Rational::zero(),
        })
    }

    /// A single radical monomial: base^(num4/4).
    pub fn radical(atom: Atom, num4: i32) -> Self {
        let key = match atom {
            Atom::Prime(p) => RadKey::normalized(factor_key(p, num4)),
            _ => RadKey::normalized(vec![(atom, num4)]),
        };
        let (rat, key) = key.extract_rational();
        let mut t = BTreeMap::new();
        t.insert(
            key,
            GaussRat {
                re: rat,
                im: Rational::zero(),
            },
        );
        Coefficient { terms: t }
    }

    /// integer^(num4/4) for integer ≥ 1 (factored into primes).
    pub fn int_radical(n: u64, num4: i32) -> Self {
        assert!(n >= 1);
        let key = RadKey::normalized(factor_key(n, num4));
        let (rat, key) = key.extract_rational();
        let mut t = BTreeMap::new();
        t.insert(
            key,
            GaussRat {
                re: rat,
                im: Rational::zero(),
            },
        );
        Coefficient { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Coefficient) -> Coefficient {
        let mut out = self.terms.clone();
        for (k, g) in &o.terms {
            let e = out.entry(k.clone()).or_insert_with(GaussRat::zero);
            *e = e.add(g);
            if e.is_zero() {
                out.remove(k);
            }
        }
        Coefficient { terms: out }
    }

    pub fn neg(&self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(k, g)| (k.clone(), g.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Coefficient) -> Coefficient {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Coefficient) -> Coefficient {
        let mut out: BTreeMap<RadKey, GaussRat> = BTreeMap::new();
        for (k1, g1) in &self.terms {
            for (k2, g2) in &o.terms {
                let (rat, key) = k1.mul(k2).extract_rational();
                let g = g1.mul(g2).mul(&GaussRat {
                    re: rat,
                    im: Rational::zero(),
                });
                let e = out.entry(key).or_insert_with(GaussRat::zero);
                *e = e.add(&g);
            }
        }
        out.retain(|_, g| !g.is_zero());
        Coefficient { terms: out }
    }

    /// Complex conjugation (radicals are real and fixed).
    pub fn conj(&self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(k, g)| (k.clone(), g.conj())).collect(),
        }
    }

    /// Multiply by i^e (phase e·π/2); exact.
    pub fn mul_i_pow(&self, e: usize) -> Coefficient {
        Coefficient {
            terms: self
                .terms
                .iter()
                .map(|(k, g)| (k.clone(), g.mul_i_pow(e)))
                .collect(),
        }
    }

    pub fn to_complex(&self, box_length: f64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (k, g) in &self.terms {
            let (re, im) = g.to_f64();
            let r = k.to_f64(box_length);
            acc += num_complex::Complex64::new(re * r, im * r);
        }
        acc
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, g) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{}{}i)", g.re, if g.im.is_negative() { "" } else { "+" }, g.im)?;
            for (a, e4) in &k.0 {
                let name = match a {
                    Atom::Pi => "pi".to_string(),
                    Atom::BoxL => "L".to_string(),
                    Atom::Prime(p) => p.to_string(),
                };
                write!(f, "*{}^({}/4)", name, e4)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_products_canonicalize() {
        // sqrt(2)*sqrt(2) = 2
        let s2 = Coefficient::int_radical(2, 2);
        let four = s2.mul(&s2);
        assert_eq!(four, Coefficient::from_int(2));
        // 2^(1/4) * 2^(3/4) = 2
        let a = Coefficient::int_radical(2, 1);
        let b = Coefficient::int_radical(2, 3);
        assert_eq!(a.mul(&b), Coefficient::from_int(2));
        // sqrt(8) = 2 sqrt(2)
        let s8 = Coefficient::int_radical(8, 2);
        let two_s2 = Coefficient::from_int(2).mul(&Coefficient::int_radical(2, 2));
        assert_eq!(s8, two_s2);
    }

    #[test]
    fn i_powers() {
        let c = Coefficient::one();
        assert_eq!(c.mul_i_pow(2), Coefficient::from_int(-1));
        assert_eq!(c.mul_i_pow(4), c);
        assert_eq!(Coefficient::i().mul(&Coefficient::i()), Coefficient::from_int(-1));
    }

    #[test]
    fn exact_cancellation() {
        let a = Coefficient::int_radical(3, 2).mul(&Coefficient::from_ratio(5, 7));
        let b = a.neg();
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn numeric_embedding() {
        let c = Coefficient::radical(Atom::Pi, 2)
            .mul(&Coefficient::radical(Atom::BoxL, -2))
            .mul(&Coefficient::from_int(2))
            .mul(&Coefficient::int_radical(2, 2));
        // 2*sqrt(2)*sqrt(pi/L) at L = 2pi: 2*sqrt(2)*sqrt(1/2) = 2
        let v = c.to_complex(2.0 * std::f64::consts::PI);
        assert!((v.re - 2.0).abs() < 1e-12 && v.im.abs() < 1e-15);
    }
}
