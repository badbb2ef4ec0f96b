//! Striped surfaces of class F as finitely described rooted trees of strips.
//!
//! Each node is a model strip whose lower boundary is the single interval
//! `J_1 x {-1}` and whose upper boundary is the standard collection carried
//! by its [`IndexPattern`]. A nonempty slot `i` glues the root strip of the
//! child surface along `J_i x {1}`.

use std::fmt;

use thiserror::Error;

use crate::pattern::{
    least_rotation, minimal_rotation_period, primitive_cycle, shortest_eventually_periodic,
    IndexPattern, Multiplicity, PatternDefect, PatternSlot,
};

/// A boundary interval either left free or glued to a subtree.
pub type Slot = Option<SurfaceTree>;

impl PatternSlot for Slot {
    fn is_empty_slot(&self) -> bool {
        self.is_none()
    }
}

/// A class-F striped surface: a strip with its upper boundary pattern.
///
/// The derived order puts `Empty` before any subtree and compares patterns
/// by tag first; canonical rotations use it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurfaceTree {
    pub children: IndexPattern<Slot>,
}

/// A surface already in canonical form; see [`canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTree(SurfaceTree);

impl CanonicalTree {
    pub fn tree(&self) -> &SurfaceTree {
        &self.0
    }

    pub fn into_tree(self) -> SurfaceTree {
        self.0
    }
}

impl AsRef<SurfaceTree> for CanonicalTree {
    fn as_ref(&self) -> &SurfaceTree {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("empty cycle at {path}")]
    EmptyCycle { path: String },
    #[error("empty slot in finite support at {path}, index {index}")]
    EmptySupportSlot { path: String, index: i64 },
    #[error("duplicate support index {index} at {path}")]
    DuplicateSupportKey { path: String, index: i64 },
}

impl SurfaceTree {
    pub fn new(children: IndexPattern<Slot>) -> Self {
        SurfaceTree { children }
    }

    /// A strip with empty upper boundary.
    pub fn leaf() -> Self {
        SurfaceTree::new(IndexPattern::Fin(Vec::new()))
    }

    pub fn fin(slots: Vec<Slot>) -> Self {
        SurfaceTree::new(IndexPattern::Fin(slots))
    }

    pub fn int_cyc(cycle: Vec<Slot>) -> Self {
        SurfaceTree::new(IndexPattern::IntCyc(cycle))
    }

    /// Nonempty child subtrees, one per syntactic slot.
    pub fn subtrees(&self) -> impl Iterator<Item = &SurfaceTree> {
        self.children.slots().into_iter().flatten()
    }

    /// Syntactic depth: 0 for a strip with no glued children.
    pub fn depth(&self) -> usize {
        self.subtrees().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }

    /// Number of syntactic strip nodes.
    pub fn node_count(&self) -> usize {
        1 + self.subtrees().map(SurfaceTree::node_count).sum::<usize>()
    }

    /// Whether every pattern in the tree is a finite collection.
    pub fn is_fully_finite(&self) -> bool {
        matches!(self.children, IndexPattern::Fin(_))
            && self.subtrees().all(SurfaceTree::is_fully_finite)
    }
}

/// Checks the pattern invariants at every node.
///
/// The class-F conditions (connected, acyclic, finite-diameter strip graph,
/// `d_- S = J_1 x {-1}`) hold by construction of the data model.
pub fn validate(tree: &SurfaceTree) -> Result<(), Vec<ValidationError>> {
    let mut errors = Vec::new();
    validate_at(tree, "root", &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn validate_at(tree: &SurfaceTree, path: &str, errors: &mut Vec<ValidationError>) {
    for defect in tree.children.defects() {
        let path = path.to_string();
        errors.push(match defect {
            PatternDefect::EmptyCycle => ValidationError::EmptyCycle { path },
            PatternDefect::EmptySupportSlot(index) => {
                ValidationError::EmptySupportSlot { path, index }
            }
            PatternDefect::DuplicateSupportKey(index) => {
                ValidationError::DuplicateSupportKey { path, index }
            }
        });
    }
    for (i, slot) in tree.children.slots().into_iter().enumerate() {
        if let Some(child) = slot {
            validate_at(child, &format!("{path}/{i}"), errors);
        }
    }
}

/// Canonical spelling, up to orientation-preserving foliated homeomorphism.
///
/// Children are canonicalized first. A strip whose upper boundary is a single
/// glued interval is merged with its child (the glued leaf is not special).
/// Then `Nat`/`Neg` get a primitive cycle and shortest prefix, `IntCyc` gets
/// its least primitive rotation, and `IntSup` is shifted so its least index
/// is 0 (an empty support becomes `IntCyc [_]`).
pub fn canonicalize(tree: &SurfaceTree) -> CanonicalTree {
    let node = canonical_node(tree);
    match node.children {
        IndexPattern::Fin(ref slots) if slots.len() == 1 && slots[0].is_some() => {
            CanonicalTree(slots[0].clone().expect("checked nonempty"))
        }
        _ => CanonicalTree(node),
    }
}

/// Canonicalizes children and the pattern spelling of the root strip, without
/// merging the root with a unary child.
pub(crate) fn canonical_node(tree: &SurfaceTree) -> SurfaceTree {
    let slots = tree
        .children
        .map(|s| s.as_ref().map(|c| canonicalize(c).into_tree()));
    SurfaceTree::new(canonical_pattern(slots))
}

fn canonical_pattern(p: IndexPattern<Slot>) -> IndexPattern<Slot> {
    match p {
        IndexPattern::Fin(slots) => IndexPattern::Fin(slots),
        IndexPattern::Nat { prefix, cycle } => {
            let (prefix, cycle) = shortest_eventually_periodic(&prefix, &cycle);
            IndexPattern::Nat { prefix, cycle }
        }
        IndexPattern::Neg { prefix, cycle } => {
            let (prefix, cycle) = shortest_eventually_periodic(&prefix, &cycle);
            IndexPattern::Neg { prefix, cycle }
        }
        IndexPattern::IntCyc(cycle) => {
            IndexPattern::IntCyc(least_rotation(&primitive_cycle(&cycle)))
        }
        IndexPattern::IntSup(mut support) => {
            support.sort_by_key(|(k, _)| *k);
            match support.first() {
                None => IndexPattern::IntCyc(vec![None]),
                Some(&(min, _)) => {
                    IndexPattern::IntSup(support.into_iter().map(|(k, s)| (k - min, s)).collect())
                }
            }
        }
    }
}

/// True iff the two surfaces have identical canonical forms.
pub fn trees_equivalent(a: &SurfaceTree, b: &SurfaceTree) -> bool {
    canonicalize(a) == canonicalize(b)
}

/// Smallest `k` dividing the cycle length with `slot[j] == slot[(j + k) mod len]`.
///
/// Slots are expected to be canonical already. Returns 0 for a non-`IntCyc`
/// pattern.
pub fn minimal_period(pattern: &IndexPattern<Slot>) -> usize {
    match pattern {
        IndexPattern::IntCyc(cycle) => minimal_rotation_period(cycle),
        _ => 0,
    }
}

/// Diameter of the strip graph, in edges.
///
/// Slots repeated by a cycle stand for countably many strips, so a deepest
/// branch coming from a cycle slot counts twice.
pub fn graph_diameter(tree: &SurfaceTree) -> usize {
    height_and_diameter(tree).1
}

/// (longest downward path in edges, diameter) of the subtree.
fn height_and_diameter(tree: &SurfaceTree) -> (usize, usize) {
    let mut best = 0;
    let mut branches: Vec<usize> = Vec::new();
    for (slot, mult) in tree.children.slots_with_multiplicity() {
        let Some(child) = slot else { continue };
        let (h, d) = height_and_diameter(child);
        best = best.max(d);
        let copies = if mult.is_omega() { 2 } else { 1 };
        branches.extend(std::iter::repeat_n(h + 1, copies));
    }
    branches.sort_unstable_by(|a, b| b.cmp(a));
    let through_here = branches.iter().take(2).sum::<usize>();
    (
        branches.first().copied().unwrap_or(0),
        best.max(through_here),
    )
}

fn is_unary_glued(tree: &SurfaceTree) -> bool {
    matches!(&tree.children, IndexPattern::Fin(slots) if slots.len() == 1 && slots[0].is_some())
}

/// False iff some strip has exactly one upper boundary interval and a child
/// glued along it.
pub fn is_reduced(tree: &SurfaceTree) -> bool {
    !is_unary_glued(tree) && tree.subtrees().all(is_reduced)
}

/// Merges every strip of the form `Fin [child]` with its child.
pub fn reduce(tree: &SurfaceTree) -> SurfaceTree {
    reduce_counting(tree).0
}

/// [`reduce`] together with the number of syntactic splices performed.
pub fn reduce_counting(tree: &SurfaceTree) -> (SurfaceTree, usize) {
    let mut splices = 0;
    let mut node = tree;
    while is_unary_glued(node) {
        splices += 1;
        node = node.children.slots()[0].as_ref().expect("unary glued");
    }
    let children = node.children.map(|s| {
        s.as_ref().map(|c| {
            let (r, n) = reduce_counting(c);
            splices += n;
            r
        })
    });
    (SurfaceTree::new(children), splices)
}

/// Instantiation count of every syntactic child, for callers that expand patterns.
pub fn child_multiplicities(tree: &SurfaceTree) -> Vec<(&SurfaceTree, Multiplicity)> {
    tree.children
        .slots_with_multiplicity()
        .into_iter()
        .filter_map(|(s, m)| s.as_ref().map(|c| (c, m)))
        .collect()
}

impl fmt::Display for SurfaceTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::textio::print_surface(self))
    }
}
