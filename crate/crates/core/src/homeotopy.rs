//! Homeotopy groups of class-F surfaces.
//!
//! A leaf-preserving homeomorphism fixes the root strip and shifts its upper
//! boundary intervals by some `eta(h)`. That shift is nonzero only for a
//! `Z`-indexed boundary. When the image of `eta` is trivial the group is the
//! product of the subtree groups; when it is `kZ` the group is the product of
//! `k` consecutive subtree groups, wreathed with `Z`.

use std::fmt;

use crate::groups::GroupExpr;
use crate::pattern::IndexPattern;
use crate::surface::{canonical_node, minimal_period, SurfaceTree};

/// Image of the shift homomorphism on the root strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EtaImage {
    Trivial,
    /// Image is `kZ`.
    Period(usize),
}

impl fmt::Display for EtaImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaImage::Trivial => f.write_str("trivial"),
            EtaImage::Period(k) => write!(f, "period {k}"),
        }
    }
}

/// Decides the image of `eta` for the root strip of `tree`.
///
/// Subtrees are canonicalized first, so "copy `i` is homeomorphic to copy
/// `i + k`" becomes syntactic equality. A nonempty finite support never admits
/// a nonzero shift.
pub fn eta_image(tree: &SurfaceTree) -> EtaImage {
    let node = canonical_node(tree);
    match node.children {
        IndexPattern::IntCyc(_) => EtaImage::Period(minimal_period(&node.children)),
        _ => EtaImage::Trivial,
    }
}

/// The homeotopy group of `tree` as an unnormalized expression.
///
/// For `Period(k)` the block is the first `k` slots of the cycle as written
/// (any `k` consecutive slots are a full set of representatives); a single
/// slot is used directly rather than as a one-factor product.
pub fn compute_group(tree: &SurfaceTree) -> GroupExpr {
    let slot_group = |s: &Option<SurfaceTree>| s.as_ref().map_or(GroupExpr::One, compute_group);
    match eta_image(tree) {
        EtaImage::Period(k) => {
            let block: Vec<GroupExpr> = match &tree.children {
                IndexPattern::IntCyc(cycle) => cycle.iter().take(k).map(slot_group).collect(),
                // an empty finite support canonicalizes to the all-empty cycle
                _ => vec![GroupExpr::One; k],
            };
            if k == 1 {
                GroupExpr::wr(block.into_iter().next().expect("k >= 1"))
            } else {
                GroupExpr::wr(GroupExpr::fin(block))
            }
        }
        EtaImage::Trivial => GroupExpr::Prod(tree.children.map(slot_group)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{normalize, GroupNormalForm};
    use crate::textio::parse_surface;

    fn t(s: &str) -> SurfaceTree {
        parse_surface(s).unwrap()
    }

    const A: &str = "(strip (fin))";

    #[test]
    fn eta_examples() {
        assert_eq!(
            eta_image(&t(&format!("(strip (fin {A} {A}))"))),
            EtaImage::Trivial
        );
        assert_eq!(
            eta_image(&t(&format!("(strip (int (cyc {A} _ {A} _)))"))),
            EtaImage::Period(2)
        );
        assert_eq!(eta_image(&t("(strip (int (cyc _)))")), EtaImage::Period(1));
        assert_eq!(
            eta_image(&t(&format!("(strip (int (sup (3 {A}))))"))),
            EtaImage::Trivial
        );
        assert_eq!(eta_image(&t("(strip (int (sup)))")), EtaImage::Period(1));
        assert_eq!(
            eta_image(&t(&format!("(strip (nat (pre) (cyc {A})))"))),
            EtaImage::Trivial
        );
        assert_eq!(
            eta_image(&t(&format!("(strip (neg (pre) (cyc {A})))"))),
            EtaImage::Trivial
        );
    }

    #[test]
    fn eta_sees_through_equivalent_subtrees() {
        // the two cycle slots are homeomorphic once the unary strip is merged
        let tree = t(&format!("(strip (int (cyc (strip (fin {A})) {A})))"));
        assert_eq!(eta_image(&tree), EtaImage::Period(1));
    }

    #[test]
    fn compute_examples() {
        assert_eq!(compute_group(&t(A)), GroupExpr::fin(vec![]));
        assert_eq!(normalize(&compute_group(&t(A))), GroupNormalForm::One);
        assert_eq!(compute_group(&t("(strip (int (cyc _)))")), GroupExpr::z());
        let g = compute_group(&t("(strip (int (cyc (strip (int (cyc _))) _)))"));
        assert_eq!(
            g,
            GroupExpr::wr(GroupExpr::fin(vec![GroupExpr::z(), GroupExpr::One]))
        );
        assert_eq!(
            normalize(&g),
            GroupNormalForm::Wr(Box::new(GroupNormalForm::z()))
        );
    }

    #[test]
    fn product_case_keeps_the_pattern() {
        let zs = "(strip (int (cyc _)))";
        let g = compute_group(&t(&format!("(strip (nat (pre _) (cyc {zs})))")));
        assert_eq!(
            g,
            GroupExpr::Prod(IndexPattern::Nat {
                prefix: vec![GroupExpr::One],
                cycle: vec![GroupExpr::z()]
            })
        );
    }
}
