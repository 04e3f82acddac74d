//! The commutator rewrite table.
//!
//! Contents: the canonical photon rule [a_n(k), a_m†(q)] = δ_nm δ_kq, the
//! ghost-sector rules [a_Q(k), a_Q*(q)] = [a_Q, a_Q] = [a_Q*, a_Q*] = 0, the
//! vanishing of every photon/ghost cross commutator, and the vanishing of
//! [gauge symbol, current]. Current symbols also commute among themselves
//! (their internal fermion structure is exercised only numerically).

use super::coeff::Coefficient;
use super::poly::OpSymbol;

#[derive(Debug, Clone, Default)]
pub struct RewriteTable {
    /// Test hook: inject [a_Q(k), a_Q*(k)] = 1 to falsify the derivation.
    ghost_anomaly: bool,
}

impl RewriteTable {
    pub fn standard() -> Self {
        RewriteTable { ghost_anomaly: false }
    }

    /// Corrupted table for mutation testing: [a_Q(k), a_Q*(q)] = δ_kq.
    pub fn with_ghost_anomaly() -> Self {
        RewriteTable { ghost_anomaly: true }
    }

    /// Scalar value of [a, b]; every commutator in this algebra is a scalar.
    pub fn commutator(&self, a: &OpSymbol, b: &OpSymbol) -> Coefficient {
        use OpSymbol::*;
        match (a, b) {
            (PhotonAnn { pol: n, k }, PhotonCre { pol: m, k: q }) => {
                if n == m && k == q {
                    Coefficient::one()
                } else {
                    Coefficient::zero()
                }
            }
            (PhotonCre { pol: n, k }, PhotonAnn { pol: m, k: q }) => {
                if n == m && k == q {
                    Coefficient::from_int(-1)
                } else {
                    Coefficient::zero()
                }
            }
            (GhostAnn { k }, GhostStar { k: q }) => {
                if self.ghost_anomaly && k == q {
                    Coefficient::one()
                } else {
                    Coefficient::zero()
                }
            }
            (GhostStar { k }, GhostAnn { k: q }) => {
                if self.ghost_anomaly && k == q {
                    Coefficient::from_int(-1)
                } else {
                    Coefficient::zero()
                }
            }
            // everything else commutes: ghost-ghost same kind, photon-ghost,
            // currents with all gauge symbols and with each other
            _ => Coefficient::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetry() {
        let t = RewriteTable::standard();
        let a = OpSymbol::PhotonAnn { pol: 0, k: 3 };
        let b = OpSymbol::PhotonCre { pol: 0, k: 3 };
        assert_eq!(t.commutator(&a, &b), t.commutator(&b, &a).neg());
    }

    #[test]
    fn ghost_rules() {
        let t = RewriteTable::standard();
        let q = OpSymbol::GhostAnn { k: 1 };
        let qs = OpSymbol::GhostStar { k: 1 };
        assert!(t.commutator(&q, &qs).is_zero());
        assert!(t.commutator(&q, &q).is_zero());
        let t = RewriteTable::with_ghost_anomaly();
        assert_eq!(t.commutator(&q, &qs), Coefficient::one());
    }

    #[test]
    fn currents_commute_with_gauge_symbols() {
        let t = RewriteTable::standard();
        let j = OpSymbol::Current { mu: 0, site: 2 };
        for g in [
            OpSymbol::GhostAnn { k: 0 },
            OpSymbol::GhostStar { k: 5 },
            OpSymbol::PhotonAnn { pol: 1, k: 2 },
            OpSymbol::PhotonCre { pol: 0, k: 0 },
        ] {
            assert!(t.commutator(&j, &g).is_zero());
            assert!(t.commutator(&g, &j).is_zero());
        }
    }
}
