//! HLT coset enumeration for `F_n / ⟨⟨relators⟩⟩` over the trivial subgroup.

use super::coset::{Cap, CosetTable};
use super::{Exactness, SchreierGraph, UNDEF};
use crate::error::{Error, Result};
use crate::words::{Rank, ReducedWord};

/// Enumerates the cosets of `{1}` in `F_n / ⟨⟨relators⟩⟩`.
///
/// Returns the exact Cayley graph of the quotient when the enumeration closes
/// with at most `max_cosets` live cosets, and [`Error::Overflow`] otherwise.
/// Relators must be cyclically reduced; an empty list enumerates the free
/// group itself and therefore always overflows.
pub fn todd_coxeter(rank: Rank, relators: &[ReducedWord], max_cosets: usize) -> Result<SchreierGraph> {
    let mut rels: Vec<Vec<usize>> = Vec::new();
    for r in relators {
        if r.rank() != rank {
            return Err(Error::RankMismatch {
                left: rank.get(),
                right: r.rank().get(),
            });
        }
        if !r.is_cyclically_reduced() {
            return Err(Error::InvalidInput(format!(
                "relator {r} is not cyclically reduced"
            )));
        }
        if !r.is_empty() {
            rels.push(r.letters().iter().map(|l| l.code()).collect());
        }
    }
    if max_cosets == 0 {
        return Err(Error::Overflow { cap: 0 });
    }
    let d = rank.degree();
    let mut ct = CosetTable::new(rank, Cap::Live(max_cosets));
    let mut c = 0;
    while c < ct.len() {
        if ct.is_live(c) {
            for r in &rels {
                if !ct.is_live(c) {
                    break;
                }
                ct.scan_and_fill(c, r)?;
            }
            if ct.is_live(c) {
                for x in 0..d {
                    if ct.get(c, x) == UNDEF {
                        ct.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    let g = ct.to_graph(Exactness::Exact);
    debug_assert!(g.validate().is_ok());
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_relators;

    fn rels(s: &str) -> Vec<ReducedWord> {
        parse_relators(Rank::new(2).unwrap(), s).unwrap()
    }

    fn r2() -> Rank {
        Rank::new(2).unwrap()
    }

    #[test]
    fn full_quotient_is_the_rose() {
        let g = todd_coxeter(r2(), &rels("a b"), 10).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!((0..4).all(|x| g.target_code(0, x) == Some(0)));
    }

    #[test]
    fn klein_four() {
        let g = todd_coxeter(r2(), &rels("aa bb abAB"), 100).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.is_exact());
        g.validate().unwrap();
    }

    #[test]
    fn infinite_quotient_overflows() {
        assert_eq!(
            todd_coxeter(r2(), &rels("ab"), 1000),
            Err(Error::Overflow { cap: 1000 })
        );
        assert!(matches!(todd_coxeter(r2(), &[], 50), Err(Error::Overflow { .. })));
    }

    #[test]
    fn rejects_non_cyclically_reduced() {
        assert!(matches!(
            todd_coxeter(r2(), &rels("abA"), 10),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn group_orders() {
        // S3 = <a, b | a^2, b^3, (ab)^2>
        let g = todd_coxeter(r2(), &rels("aa bbb abab"), 100).unwrap();
        assert_eq!(g.vertex_count(), 6);
        // Z/5 x Z/3
        let g = todd_coxeter(r2(), &rels("a^5 b^3 abAB"), 100).unwrap();
        assert_eq!(g.vertex_count(), 15);
        // A5 = <a, b | a^2, b^3, (ab)^5>
        let g = todd_coxeter(r2(), &rels("aa bbb (ab)^5"), 1000).unwrap();
        assert_eq!(g.vertex_count(), 60);
        // quaternion group Q8 = <a, b | a^4, a^2 B^2, abaB>
        let g = todd_coxeter(r2(), &rels("aaaa aaBB abaB"), 1000).unwrap();
        assert_eq!(g.vertex_count(), 8);
    }

    #[test]
    fn deterministic_output() {
        let a = todd_coxeter(r2(), &rels("aa bbb (ab)^5"), 1000).unwrap();
        let b = todd_coxeter(r2(), &rels("aa bbb (ab)^5"), 1000).unwrap();
        assert_eq!(a, b);
    }
}
