//! Normal-ordered operator polynomials.
//!
//! A polynomial is a finite sum of (Coefficient, monomial) pairs where a
//! monomial is an ordered product of mode symbols. The canonical form puts
//! current symbols first (they commute with everything), then creation-kind
//! symbols, then annihilation-kind, each class sorted lexicographically by
//! (kind, mode labels). `normal_order` rewrites any product into this form
//! using the commutator table.

use super::coeff::Coefficient;
use super::table::RewriteTable;
use std::collections::BTreeMap;
use std::fmt;

/// Abstract mode operator. `k` indexes the lattice momentum set; `site`
/// indexes lattice sites for the opaque current symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpSymbol {
    /// j_µ(x): µ = 0 charge density, µ = 1..d current components.
    Current { mu: usize, site: usize },
    /// a_n†(k)
    PhotonCre { pol: usize, k: usize },
    /// a_Q*(k) — a distinct symbol, not the representation adjoint of a_Q(k).
    GhostStar { k: usize },
    /// a_n(k)
    PhotonAnn { pol: usize, k: usize },
    /// a_Q(k)
    GhostAnn { k: usize },
}

impl OpSymbol {
    fn sort_key(&self) -> (u8, u8, usize, usize) {
        match self {
            OpSymbol::Current { mu, site } => (0, 0, *mu, *site),
            OpSymbol::PhotonCre { pol, k } => (1, 0, *k, *pol),
            OpSymbol::GhostStar { k } => (1, 1, *k, 0),
            OpSymbol::PhotonAnn { pol, k } => (2, 0, *k, *pol),
            OpSymbol::GhostAnn { k } => (2, 1, *k, 0),
        }
    }

    /// Formal star: a_Q ↔ a_Q*, a_n ↔ a_n†, currents fixed.
    pub fn star(&self) -> OpSymbol {
        match *self {
            OpSymbol::Current { mu, site } => OpSymbol::Current { mu, site },
            OpSymbol::PhotonCre { pol, k } => OpSymbol::PhotonAnn { pol, k },
            OpSymbol::PhotonAnn { pol, k } => OpSymbol::PhotonCre { pol, k },
            OpSymbol::GhostStar { k } => OpSymbol::GhostAnn { k },
            OpSymbol::GhostAnn { k } => OpSymbol::GhostStar { k },
        }
    }

    pub fn is_photon(&self) -> bool {
        matches!(self, OpSymbol::PhotonAnn { .. } | OpSymbol::PhotonCre { .. })
    }

    pub fn is_ghost(&self) -> bool {
        matches!(self, OpSymbol::GhostAnn { .. } | OpSymbol::GhostStar { .. })
    }
}

impl PartialOrd for OpSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OpSymbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

pub type Monomial = Vec<OpSymbol>;

/// Sum of coefficient-weighted normal-ordered monomials. The zero
/// polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpPoly {
    terms: BTreeMap<Monomial, Coefficient>,
}

impl OpPoly {
    pub fn zero() -> Self {
        OpPoly::default()
    }

    pub fn scalar(c: Coefficient) -> Self {
        let mut p = OpPoly::zero();
        p.accumulate(Vec::new(), c);
        p
    }

    pub fn symbol(s: OpSymbol) -> Self {
        let mut p = OpPoly::zero();
        p.accumulate(vec![s], Coefficient::one());
        p
    }

    pub fn monomial(c: Coefficient, m: Monomial) -> Self {
        let mut p = OpPoly::zero();
        p.accumulate(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    fn accumulate(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, o: &OpPoly) -> OpPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> OpPoly {
        OpPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &OpPoly) -> OpPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coefficient) -> OpPoly {
        if c.is_zero() {
            return OpPoly::zero();
        }
        OpPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    /// Product, normal-ordered.
    pub fn mul(&self, o: &OpPoly, table: &RewriteTable) -> OpPoly {
        let mut out = OpPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = Vec::with_capacity(m1.len() + m2.len());
                m.extend_from_slice(m1);
                m.extend_from_slice(m2);
                let ordered = normal_order_monomial(m, c1.mul(c2), table);
                out = out.add(&ordered);
            }
        }
        out
    }

    /// Commutator [self, o], normal-ordered.
    pub fn commutator(&self, o: &OpPoly, table: &RewriteTable) -> OpPoly {
        self.mul(o, table).sub(&o.mul(self, table))
    }

    /// Formal star: reverse each monomial, star each symbol, conjugate each
    /// coefficient. (An anti-automorphism; the physical adjoint at the
    /// symbolic level.)
    pub fn star(&self) -> OpPoly {
        let mut out = OpPoly::zero();
        for (m, c) in &self.terms {
            let sm: Monomial = m.iter().rev().map(|s| s.star()).collect();
            out.accumulate(sm, c.conj());
        }
        out
    }

    /// True when no photon symbols occur.
    pub fn photon_free(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|s| !s.is_photon()))
    }

    /// True when only ghost symbols occur (no photons, no currents).
    pub fn ghost_only(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|s| s.is_ghost()))
    }

    pub fn render(&self, max_terms: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i >= max_terms {
                s.push_str(&format!(" ... (+{} more terms)", self.terms.len() - i));
                break;
            }
            if i > 0 {
                s.push_str("  +  ");
            }
            s.push_str(&format!("[{}]", c));
            for sym in m {
                s.push_str(&format!(" {:?}", sym));
            }
        }
        s
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(16))
    }
}

/// Normal-order a single monomial with coefficient, producing a polynomial.
/// Insertion-sort with commutator corrections: swapping an adjacent
/// out-of-order pair (A,B) yields BA + [A,B]; the scalar [A,B] contracts the
/// pair away, so the rewriting terminates.
pub fn normal_order_monomial(m: Monomial, c: Coefficient, table: &RewriteTable) -> OpPoly {
    let mut out = OpPoly::zero();
    let mut queue: Vec<(Monomial, Coefficient)> = vec![(m, c)];
    while let Some((mut m, c)) = queue.pop() {
        if c.is_zero() {
            continue;
        }
        let mut i = 1;
        while i < m.len() {
            if m[i] < m[i - 1] {
                let a = m[i - 1];
                let b = m[i];
                let comm = table.commutator(&a, &b);
                if !comm.is_zero() {
                    // AB = BA + [A,B]
                    let mut contracted = Vec::with_capacity(m.len() - 2);
                    contracted.extend_from_slice(&m[..i - 1]);
                    contracted.extend_from_slice(&m[i + 1..]);
                    queue.push((contracted, c.mul(&comm)));
                }
                m.swap(i - 1, i);
                if i > 1 {
                    i -= 1;
                }
            } else {
                i += 1;
            }
        }
        out.accumulate(m, c);
    }
    out
}

/// Normal-order a polynomial (idempotent on already-ordered input).
pub fn normal_order(p: &OpPoly, table: &RewriteTable) -> OpPoly {
    let mut out = OpPoly::zero();
    for (m, c) in p.terms() {
        out = out.add(&normal_order_monomial(m.clone(), c.clone(), table));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ph_ann(k: usize) -> OpSymbol {
        OpSymbol::PhotonAnn { pol: 0, k }
    }
    fn ph_cre(k: usize) -> OpSymbol {
        OpSymbol::PhotonCre { pol: 0, k }
    }

    #[test]
    fn boson_rule() {
        // a a† → a†a + 1
        let t = RewriteTable::standard();
        let p = normal_order_monomial(vec![ph_ann(0), ph_cre(0)], Coefficient::one(), &t);
        let expect = OpPoly::monomial(Coefficient::one(), vec![ph_cre(0), ph_ann(0)])
            .add(&OpPoly::scalar(Coefficient::one()));
        assert_eq!(p, expect);
    }

    #[test]
    fn a_adag_adag() {
        // a·a†·a† → a†·a†·a + 2a†
        let t = RewriteTable::standard();
        let p = normal_order_monomial(
            vec![ph_ann(0), ph_cre(0), ph_cre(0)],
            Coefficient::one(),
            &t,
        );
        let expect = OpPoly::monomial(Coefficient::one(), vec![ph_cre(0), ph_cre(0), ph_ann(0)])
            .add(&OpPoly::monomial(Coefficient::from_int(2), vec![ph_cre(0)]));
        assert_eq!(p, expect);
    }

    #[test]
    fn ghost_pair_commutes() {
        // a_Q(k)·a_Q*(k) → a_Q*(k)·a_Q(k), no scalar
        let t = RewriteTable::standard();
        let q = OpSymbol::GhostAnn { k: 2 };
        let qs = OpSymbol::GhostStar { k: 2 };
        let p = normal_order_monomial(vec![q, qs], Coefficient::one(), &t);
        assert_eq!(p, OpPoly::monomial(Coefficient::one(), vec![qs, q]));
    }

    #[test]
    fn self_commutator_vanishes() {
        let t = RewriteTable::standard();
        let p = OpPoly::monomial(
            Coefficient::from_ratio(3, 2),
            vec![ph_cre(1), ph_ann(0), OpSymbol::GhostAnn { k: 0 }],
        );
        assert!(p.commutator(&p, &t).is_zero());
    }

    #[test]
    fn normal_order_idempotent_linear() {
        let t = RewriteTable::standard();
        let p = OpPoly::monomial(Coefficient::one(), vec![ph_ann(0), ph_cre(0), ph_ann(1)]);
        let once = normal_order(&p, &t);
        let twice = normal_order(&once, &t);
        assert_eq!(once, twice);
    }

    #[test]
    fn star_is_antiautomorphism() {
        let t = RewriteTable::standard();
        let p = OpPoly::monomial(Coefficient::i(), vec![ph_cre(0), ph_ann(1)]);
        let q = OpPoly::monomial(Coefficient::from_ratio(1, 3), vec![OpSymbol::GhostAnn { k: 1 }]);
        let lhs = normal_order(&p.mul(&q, &t).star(), &t);
        let rhs = normal_order(&q.star().mul(&p.star(), &t), &t);
        assert_eq!(lhs, rhs);
    }
}
