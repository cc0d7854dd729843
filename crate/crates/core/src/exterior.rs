//! Signed monomial calculus for exterior algebras on edge generators:
//! wedge signs, removal signs, and Koszul signs for permuting graded tensor
//! factors.

use crate::graph::EdgeSubset;

/// Product of exterior generators in ascending edge order. Same payload as
/// [`EdgeSubset`], distinct role: squares vanish and order carries signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExteriorMonomial(pub EdgeSubset);

impl ExteriorMonomial {
    pub fn edges(&self) -> EdgeSubset {
        self.0
    }
}

impl From<EdgeSubset> for ExteriorMonomial {
    fn from(s: EdgeSubset) -> Self {
        ExteriorMonomial(s)
    }
}

/// A ±1-signed exterior monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedTerm {
    pub sign: i32,
    pub monomial: ExteriorMonomial,
}

/// Exterior product. `None` when the index sets intersect; otherwise the sign
/// is `(-1)^inversions` for concatenating `m1, m2` and sorting, and the
/// monomial is the union.
pub fn wedge(m1: ExteriorMonomial, m2: ExteriorMonomial) -> Option<SignedTerm> {
    let (a, b) = (m1.0, m2.0);
    if !a.intersection(b).is_empty() {
        return None;
    }
    // inversions are the pairs (x ∈ m1, y ∈ m2) with y < x
    let mut inversions = 0u32;
    for x in a.iter() {
        let below = if x == 0 {
            0
        } else {
            b.bits() & ((1u64 << x) - 1)
        };
        inversions += below.count_ones();
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some(SignedTerm {
        sign,
        monomial: ExteriorMonomial(a.union(b)),
    })
}

/// `(-1)^ν` where `ν` is the number of edges in `s` strictly preceding
/// `alpha` in the canonical order (zero-based). Panics when `alpha ∉ s`.
pub fn removal_sign(s: ExteriorMonomial, alpha: usize) -> i32 {
    assert!(s.0.contains(alpha), "edge {alpha} not in monomial");
    let below = if alpha == 0 {
        0
    } else {
        s.0.bits() & ((1u64 << alpha) - 1)
    };
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign for moving the graded factor at position `from` to position
/// `to` within a tensor word, shifting the factors in between. Identity when
/// the positions are equal or adjacent in the direction of the move.
pub fn koszul_move_sign(degrees: &[usize], from: usize, to: usize) -> i32 {
    assert!(
        from < degrees.len() && to < degrees.len(),
        "move index out of range"
    );
    let moved = degrees[from];
    let crossed: usize = if from < to {
        degrees[from + 1..=to].iter().sum()
    } else if to < from {
        degrees[to..from].iter().sum()
    } else {
        0
    };
    if (moved * crossed) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign of reordering graded factors: `order[k]` is the old position
/// of the factor placed at new position `k`.
pub fn koszul_permutation_sign(degrees: &[usize], order: &[usize]) -> i32 {
    debug_assert_eq!(degrees.len(), order.len());
    let mut sign = 1;
    for k in 0..order.len() {
        for l in k + 1..order.len() {
            if order[k] > order[l] && degrees[order[k]] % 2 == 1 && degrees[order[l]] % 2 == 1 {
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(indices: &[usize]) -> ExteriorMonomial {
        ExteriorMonomial(EdgeSubset::from_indices(indices.iter().copied()))
    }

    #[test]
    fn wedge_examples() {
        let t = wedge(mono(&[0]), mono(&[1])).unwrap();
        assert_eq!(t.sign, 1);
        assert_eq!(t.monomial, mono(&[0, 1]));

        let t = wedge(mono(&[1]), mono(&[0])).unwrap();
        assert_eq!(t.sign, -1);
        assert_eq!(t.monomial, mono(&[0, 1]));

        assert!(wedge(mono(&[0]), mono(&[0])).is_none());
    }

    #[test]
    fn removal_examples() {
        let s = mono(&[0, 1, 2]);
        assert_eq!(removal_sign(s, 0), 1);
        assert_eq!(removal_sign(s, 1), -1);
        assert_eq!(removal_sign(s, 2), 1);
    }

    #[test]
    #[should_panic]
    fn removal_requires_membership() {
        removal_sign(mono(&[0, 2]), 1);
    }

    #[test]
    fn removal_matches_wedge() {
        // wedge(e_α, s∖α).sign == removal_sign(s, α), exhaustively for |s| ≤ 6
        for bits in 1u64..(1 << 6) {
            let s = ExteriorMonomial(EdgeSubset::from_bits(bits));
            for alpha in s.0.iter() {
                let rest = ExteriorMonomial(s.0.without(alpha));
                let t = wedge(mono(&[alpha]), rest).unwrap();
                assert_eq!(t.monomial, s);
                assert_eq!(t.sign, removal_sign(s, alpha));
            }
        }
    }

    #[test]
    fn double_removal_anticommutes() {
        // removing α then β equals removing β then α up to sign -1
        for bits in 0u64..(1 << 6) {
            let s = ExteriorMonomial(EdgeSubset::from_bits(bits));
            if s.0.len() < 2 {
                continue;
            }
            for alpha in s.0.iter() {
                for beta in s.0.iter() {
                    if alpha == beta {
                        continue;
                    }
                    let ab = removal_sign(s, alpha)
                        * removal_sign(ExteriorMonomial(s.0.without(alpha)), beta);
                    let ba = removal_sign(s, beta)
                        * removal_sign(ExteriorMonomial(s.0.without(beta)), alpha);
                    assert_eq!(ab, -ba);
                }
            }
        }
    }

    #[test]
    fn wedge_graded_anticommutative() {
        for a_bits in 0u64..(1 << 5) {
            for b_bits in 0u64..(1 << 5) {
                let (a, b) = (
                    ExteriorMonomial(EdgeSubset::from_bits(a_bits)),
                    ExteriorMonomial(EdgeSubset::from_bits(b_bits)),
                );
                match (wedge(a, b), wedge(b, a)) {
                    (Some(ab), Some(ba)) => {
                        let expected = if (a.0.len() * b.0.len()) % 2 == 0 {
                            1
                        } else {
                            -1
                        };
                        assert_eq!(ab.sign, expected * ba.sign);
                    }
                    (None, None) => {}
                    _ => panic!("wedge vanishing must be symmetric"),
                }
            }
        }
    }

    #[test]
    fn wedge_associative() {
        let sets: Vec<ExteriorMonomial> = (0u64..(1 << 4))
            .map(|b| ExteriorMonomial(EdgeSubset::from_bits(b)))
            .collect();
        for &a in &sets {
            for &b in &sets {
                for &c in &sets {
                    let left = wedge(a, b)
                        .and_then(|t| wedge(t.monomial, c).map(|u| (t.sign * u.sign, u.monomial)));
                    let right = wedge(b, c)
                        .and_then(|t| wedge(a, t.monomial).map(|u| (t.sign * u.sign, u.monomial)));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn koszul_move_examples() {
        assert_eq!(koszul_move_sign(&[2, 4, 2], 2, 0), 1);
        assert_eq!(koszul_move_sign(&[1, 1, 0], 2, 1), 1);
        assert_eq!(koszul_move_sign(&[1, 1, 1], 2, 1), -1);
        // adjacent move over nothing
        assert_eq!(koszul_move_sign(&[1, 1, 1], 1, 1), 1);
    }

    #[test]
    fn koszul_permutation_matches_moves() {
        // one transposition of odd factors
        assert_eq!(koszul_permutation_sign(&[1, 1], &[1, 0]), -1);
        assert_eq!(koszul_permutation_sign(&[1, 0], &[1, 0]), 1);
        assert_eq!(koszul_permutation_sign(&[1, 1, 1], &[2, 0, 1]), 1);
    }
}
