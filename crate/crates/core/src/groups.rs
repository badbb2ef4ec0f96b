//! Group expressions built from the trivial group by countable direct
//! products and wreath products with `Z`.

use std::collections::BTreeMap;
use std::fmt;

use crate::pattern::{IndexPattern, Multiplicity, PatternSlot};
use crate::surface::SurfaceTree;

/// A representation of a group in the class generated from `{1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupExpr {
    One,
    /// Direct product over the pattern's index set; unlisted support indices are `One`.
    Prod(IndexPattern<GroupExpr>),
    /// `inner wr Z`.
    Wr(Box<GroupExpr>),
}

impl PatternSlot for GroupExpr {
    fn is_empty_slot(&self) -> bool {
        matches!(self, GroupExpr::One)
    }
}

impl GroupExpr {
    /// `Z`, spelled `{1} wr Z`.
    pub fn z() -> Self {
        GroupExpr::wr(GroupExpr::One)
    }

    pub fn wr(inner: GroupExpr) -> Self {
        GroupExpr::Wr(Box::new(inner))
    }

    pub fn fin(factors: Vec<GroupExpr>) -> Self {
        GroupExpr::Prod(IndexPattern::Fin(factors))
    }

    /// Syntactic nesting depth.
    pub fn depth(&self) -> usize {
        match self {
            GroupExpr::One => 0,
            GroupExpr::Wr(inner) => 1 + inner.depth(),
            GroupExpr::Prod(p) => {
                1 + p
                    .slots()
                    .into_iter()
                    .map(GroupExpr::depth)
                    .max()
                    .unwrap_or(0)
            }
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::textio::print_group(self))
    }
}

/// Canonical commutative spelling of a group expression.
///
/// Ordering is structural (`One < Wr < ProdNF`), which fixes the order of
/// product factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupNormalForm {
    One,
    Wr(Box<GroupNormalForm>),
    /// Sorted, pairwise distinct, non-`One` factors; total multiplicity at
    /// least 2.
    ProdNF(Vec<(GroupNormalForm, Multiplicity)>),
}

impl GroupNormalForm {
    pub fn z() -> Self {
        GroupNormalForm::Wr(Box::new(GroupNormalForm::One))
    }

    /// Reads the normal form back as a group expression of the same group.
    ///
    /// Products become a single `Fin` pattern, or a `Nat` pattern whose cycle
    /// holds the `w`-factors.
    pub fn to_expr(&self) -> GroupExpr {
        match self {
            GroupNormalForm::One => GroupExpr::One,
            GroupNormalForm::Wr(inner) => GroupExpr::wr(inner.to_expr()),
            GroupNormalForm::ProdNF(factors) => {
                let mut finite = Vec::new();
                let mut cycle = Vec::new();
                for (f, m) in factors {
                    match m {
                        Multiplicity::Finite(n) => finite.extend((0..*n).map(|_| f.to_expr())),
                        Multiplicity::Omega => cycle.push(f.to_expr()),
                    }
                }
                if cycle.is_empty() {
                    GroupExpr::Prod(IndexPattern::Fin(finite))
                } else {
                    GroupExpr::Prod(IndexPattern::Nat {
                        prefix: finite,
                        cycle,
                    })
                }
            }
        }
    }
}

impl fmt::Display for GroupNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::textio::print_normal_form(self))
    }
}

/// Normalizes by isomorphism-sound rewrites only: drop `One` factors, flatten
/// nested products, collapse singleton products, count infinite patterns as
/// `w`, and absorb `A^w x A^n` into `A^w`.
///
/// Equal normal forms imply isomorphic groups; the converse is not claimed.
pub fn normalize(e: &GroupExpr) -> GroupNormalForm {
    match e {
        GroupExpr::One => GroupNormalForm::One,
        GroupExpr::Wr(inner) => GroupNormalForm::Wr(Box::new(normalize(inner))),
        GroupExpr::Prod(pattern) => {
            let mut counts: BTreeMap<GroupNormalForm, Multiplicity> = BTreeMap::new();
            for (slot, mult) in pattern.slots_with_multiplicity() {
                for (factor, inner) in factor_counts(normalize(slot)) {
                    let m = mult * inner;
                    counts
                        .entry(factor)
                        .and_modify(|acc| *acc = *acc + m)
                        .or_insert(m);
                }
            }
            let mut factors: Vec<_> = counts.into_iter().collect();
            match factors.as_slice() {
                [] => GroupNormalForm::One,
                [(_, Multiplicity::Finite(1))] => factors.pop().expect("one factor").0,
                _ => GroupNormalForm::ProdNF(factors),
            }
        }
    }
}

fn factor_counts(nf: GroupNormalForm) -> Vec<(GroupNormalForm, Multiplicity)> {
    match nf {
        GroupNormalForm::One => Vec::new(),
        GroupNormalForm::ProdNF(factors) => factors,
        other => vec![(other, Multiplicity::Finite(1))],
    }
}

/// Height of the representation as written: `h(1) = 0`, `h(G wr Z) = 1 + h(G)`,
/// `h(prod A_i) = 1 + max h(A_i)`.
pub fn height(e: &GroupExpr) -> usize {
    match e {
        GroupExpr::One => 0,
        GroupExpr::Wr(inner) => 1 + height(inner),
        GroupExpr::Prod(pattern) => 1 + pattern.slots().into_iter().map(height).max().unwrap_or(0),
    }
}

/// A class-F surface whose homeotopy group is the group of `e`.
///
/// `One` is a single strip with empty upper boundary; `Wr(P)` glues copies of
/// the realization of `P` along every `J_i`, `i` in `Z`; a product glues the
/// realized factors along a pattern of the same shape. `Z`-indexed products
/// are re-indexed over `N` (periodic) or `[n]` (finite support) so that the
/// root strip admits no nontrivial shift.
pub fn realize(e: &GroupExpr) -> SurfaceTree {
    match e {
        GroupExpr::One => SurfaceTree::leaf(),
        GroupExpr::Wr(inner) => SurfaceTree::int_cyc(vec![Some(realize(inner))]),
        GroupExpr::Prod(pattern) => {
            let r = |g: &GroupExpr| Some(realize(g));
            let children = match pattern {
                IndexPattern::IntCyc(cycle) => IndexPattern::Nat {
                    prefix: Vec::new(),
                    cycle: cycle.iter().map(r).collect(),
                },
                IndexPattern::IntSup(support) => {
                    let mut support = support.clone();
                    support.sort_by_key(|(k, _)| *k);
                    IndexPattern::Fin(support.iter().map(|(_, g)| r(g)).collect())
                }
                other => other.map(r),
            };
            SurfaceTree::new(children)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupValidationError {
    #[error("empty cycle in product pattern")]
    EmptyCycle,
    #[error("trivial factor listed in finite support at index {0}")]
    EmptySupportSlot(i64),
    #[error("duplicate support index {0}")]
    DuplicateSupportKey(i64),
}

/// Checks the pattern invariants of every product in `e`.
pub fn validate_group(e: &GroupExpr) -> Result<(), Vec<GroupValidationError>> {
    fn walk(e: &GroupExpr, out: &mut Vec<GroupValidationError>) {
        match e {
            GroupExpr::One => {}
            GroupExpr::Wr(inner) => walk(inner, out),
            GroupExpr::Prod(p) => {
                for d in p.defects() {
                    out.push(match d {
                        crate::pattern::PatternDefect::EmptyCycle => {
                            GroupValidationError::EmptyCycle
                        }
                        crate::pattern::PatternDefect::EmptySupportSlot(k) => {
                            GroupValidationError::EmptySupportSlot(k)
                        }
                        crate::pattern::PatternDefect::DuplicateSupportKey(k) => {
                            GroupValidationError::DuplicateSupportKey(k)
                        }
                    });
                }
                for s in p.slots() {
                    walk(s, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(e, &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_surface;
    use GroupExpr::One;

    fn z() -> GroupExpr {
        GroupExpr::z()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize(&GroupExpr::fin(vec![One, z()])),
            GroupNormalForm::z()
        );
        assert_eq!(
            normalize(&GroupExpr::wr(GroupExpr::fin(vec![One, One, One]))),
            GroupNormalForm::z()
        );
        let nat = GroupExpr::Prod(IndexPattern::Nat {
            prefix: vec![],
            cycle: vec![z()],
        });
        assert_eq!(
            normalize(&GroupExpr::fin(vec![nat, z()])),
            GroupNormalForm::ProdNF(vec![(GroupNormalForm::z(), Multiplicity::Omega)])
        );
    }

    #[test]
    fn normalize_counts_finite_multiplicities() {
        let zz = GroupExpr::wr(z());
        let e = GroupExpr::fin(vec![z(), GroupExpr::fin(vec![z(), zz.clone()]), One]);
        let zz_nf = GroupNormalForm::Wr(Box::new(GroupNormalForm::z()));
        assert_eq!(
            normalize(&e),
            GroupNormalForm::ProdNF(vec![
                (GroupNormalForm::z(), Multiplicity::Finite(2)),
                (zz_nf, Multiplicity::Finite(1))
            ])
        );
    }

    #[test]
    fn omega_of_a_finite_product_is_omega() {
        let pair = GroupExpr::fin(vec![z(), z()]);
        let e = GroupExpr::Prod(IndexPattern::IntCyc(vec![pair]));
        assert_eq!(
            normalize(&e),
            GroupNormalForm::ProdNF(vec![(GroupNormalForm::z(), Multiplicity::Omega)])
        );
        // infinite product of trivial groups
        let e = GroupExpr::Prod(IndexPattern::Neg {
            prefix: vec![One],
            cycle: vec![One],
        });
        assert_eq!(normalize(&e), GroupNormalForm::One);
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(&One), 0);
        assert_eq!(height(&GroupExpr::fin(vec![One, One])), 1);
        assert_eq!(height(&z()), 1);
        assert_eq!(height(&GroupExpr::wr(GroupExpr::fin(vec![One, One]))), 2);
        assert_eq!(height(&GroupExpr::fin(vec![z(), z()])), 2);
        let e = GroupExpr::fin(vec![GroupExpr::wr(GroupExpr::fin(vec![One, One])), z()]);
        assert_eq!(height(&e), 3);
    }

    #[test]
    fn realize_examples() {
        assert_eq!(realize(&One), parse_surface("(strip (fin))").unwrap());
        assert_eq!(
            realize(&z()),
            parse_surface("(strip (int (cyc (strip (fin)))))").unwrap()
        );
        let zr = "(strip (int (cyc (strip (fin)))))";
        assert_eq!(
            realize(&GroupExpr::fin(vec![z(), z()])),
            parse_surface(&format!("(strip (fin {zr} {zr}))")).unwrap()
        );
    }

    #[test]
    fn realize_reindexes_integer_products() {
        let e = GroupExpr::Prod(IndexPattern::IntSup(vec![
            (4, z()),
            (-2, GroupExpr::fin(vec![])),
        ]));
        let zr = "(strip (int (cyc (strip (fin)))))";
        assert_eq!(
            realize(&e),
            parse_surface(&format!("(strip (fin (strip (fin)) {zr}))")).unwrap()
        );
    }

    #[test]
    fn nf_back_to_expr() {
        let nf = GroupNormalForm::ProdNF(vec![
            (GroupNormalForm::z(), Multiplicity::Finite(2)),
            (
                GroupNormalForm::Wr(Box::new(GroupNormalForm::z())),
                Multiplicity::Omega,
            ),
        ]);
        let e = nf.to_expr();
        assert_eq!(normalize(&e), nf);
        assert_eq!(height(&e), 3);
    }

    #[test]
    fn validate_rejects_trivial_support_entries() {
        let e = GroupExpr::Prod(IndexPattern::IntSup(vec![(0, One)]));
        assert_eq!(
            validate_group(&e),
            Err(vec![GroupValidationError::EmptySupportSlot(0)])
        );
        assert!(validate_group(&z()).is_ok());
    }
}
