//! Homeotopy groups of foliations on striped surfaces.
//!
//! Surfaces are rooted trees of strips ([`surface`]). Their groups of isotopy
//! classes of leaf-preserving homeomorphisms are computed as expressions
//! over `{1}`, countable products and wreath products with `Z`
//! ([`homeotopy`], [`groups`]), and any such expression can be realized back
//! as a surface. [`elements`] gives concrete arithmetic in those groups.

pub mod elements;
pub mod gen;
pub mod groups;
pub mod homeotopy;
pub mod pattern;
pub mod surface;
pub mod textio;
pub mod transport;

pub use elements::{ElementError, WreathElement};
pub use groups::{height, normalize, realize, GroupExpr, GroupNormalForm};
pub use homeotopy::{compute_group, eta_image, EtaImage};
pub use pattern::{IndexKind, IndexPattern, Multiplicity};
pub use surface::{
    canonicalize, graph_diameter, is_reduced, reduce, trees_equivalent, validate, CanonicalTree,
    Slot, SurfaceTree,
};
pub use textio::{Document, SchemaError, SyntaxError, TextError};
pub use transport::transport_compose;
