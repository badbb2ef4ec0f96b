//! Element arithmetic in groups described by [`GroupExpr`] shapes.
//!
//! `S wr Z` is `Map(Z, S) x| Z` restricted to finitely supported maps, with
//! `(f1, n) * (f2, m) = (j -> f1(j + m) * f2(j), n + m)`. Stored maps never
//! hold identity values, so equality is structural.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groups::GroupExpr;
use crate::pattern::IndexPattern;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WreathElement {
    /// The element of the trivial group.
    Unit,
    /// Finitely supported tuple over a product pattern.
    Prod(BTreeMap<i64, WreathElement>),
    /// `(support, shift)` in a wreath layer.
    Wr {
        support: BTreeMap<i64, WreathElement>,
        shift: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

fn mismatch(msg: impl Into<String>) -> ElementError {
    ElementError::ShapeMismatch(msg.into())
}

impl WreathElement {
    pub fn is_identity(&self) -> bool {
        match self {
            WreathElement::Unit => true,
            WreathElement::Prod(m) => m.is_empty(),
            WreathElement::Wr { support, shift } => support.is_empty() && *shift == 0,
        }
    }

    /// Whether any stored map (at any depth) holds an identity value.
    pub fn has_stored_identity(&self) -> bool {
        let maps = match self {
            WreathElement::Unit => return false,
            WreathElement::Prod(m) => m,
            WreathElement::Wr { support, .. } => support,
        };
        maps.values()
            .any(|v| v.is_identity() || v.has_stored_identity())
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::textio::print_element(self))
    }
}

/// Shape of the factor at `index` of a product; unlisted support indices are `One`.
fn factor_shape(pattern: &IndexPattern<GroupExpr>, index: i64) -> Result<&GroupExpr, ElementError> {
    if !pattern.contains_index(index) {
        return Err(mismatch(format!(
            "index {index} outside the {} index set",
            pattern.kind()
        )));
    }
    Ok(pattern.slot_at(index).unwrap_or(&GroupExpr::One))
}

/// Whether the group of `shape` has only the identity element.
pub fn is_trivial_shape(shape: &GroupExpr) -> bool {
    match shape {
        GroupExpr::One => true,
        GroupExpr::Wr(_) => false,
        GroupExpr::Prod(p) => p.slots().into_iter().all(is_trivial_shape),
    }
}

pub fn identity(shape: &GroupExpr) -> WreathElement {
    match shape {
        GroupExpr::One => WreathElement::Unit,
        GroupExpr::Prod(_) => WreathElement::Prod(BTreeMap::new()),
        GroupExpr::Wr(_) => WreathElement::Wr {
            support: BTreeMap::new(),
            shift: 0,
        },
    }
}

/// Checks that `a` is a normalized element of the group of `shape`.
pub fn check(shape: &GroupExpr, a: &WreathElement) -> Result<(), ElementError> {
    match (shape, a) {
        (GroupExpr::One, WreathElement::Unit) => Ok(()),
        (GroupExpr::Prod(p), WreathElement::Prod(m)) => m.iter().try_for_each(|(i, x)| {
            if x.is_identity() {
                return Err(mismatch(format!("identity stored at index {i}")));
            }
            check(factor_shape(p, *i)?, x)
        }),
        (GroupExpr::Wr(inner), WreathElement::Wr { support, .. }) => {
            support.iter().try_for_each(|(j, x)| {
                if x.is_identity() {
                    return Err(mismatch(format!("identity stored at {j}")));
                }
                check(inner, x)
            })
        }
        _ => Err(mismatch(format!("element {a} does not fit shape {shape}"))),
    }
}

/// Replaces a bare `Unit` by the identity of `shape`; used for the `e` literal.
pub fn conform(shape: &GroupExpr, a: WreathElement) -> Result<WreathElement, ElementError> {
    let a = match (shape, a) {
        (_, WreathElement::Unit) => identity(shape),
        (GroupExpr::Prod(p), WreathElement::Prod(m)) => {
            let mut out = BTreeMap::new();
            for (i, x) in m {
                let x = conform(factor_shape(p, i)?, x)?;
                if !x.is_identity() {
                    out.insert(i, x);
                }
            }
            WreathElement::Prod(out)
        }
        (GroupExpr::Wr(inner), WreathElement::Wr { support, shift }) => {
            let mut out = BTreeMap::new();
            for (j, x) in support {
                let x = conform(inner, x)?;
                if !x.is_identity() {
                    out.insert(j, x);
                }
            }
            WreathElement::Wr {
                support: out,
                shift,
            }
        }
        (_, a) => a,
    };
    check(shape, &a)?;
    Ok(a)
}

pub fn multiply(
    shape: &GroupExpr,
    a: &WreathElement,
    b: &WreathElement,
) -> Result<WreathElement, ElementError> {
    match (shape, a, b) {
        (GroupExpr::One, WreathElement::Unit, WreathElement::Unit) => Ok(WreathElement::Unit),
        (GroupExpr::Prod(p), WreathElement::Prod(ma), WreathElement::Prod(mb)) => {
            let mut out = BTreeMap::new();
            let keys: BTreeSet<i64> = ma.keys().chain(mb.keys()).copied().collect();
            for i in keys {
                let fs = factor_shape(p, i)?;
                let id = identity(fs);
                let x = multiply(fs, ma.get(&i).unwrap_or(&id), mb.get(&i).unwrap_or(&id))?;
                if !x.is_identity() {
                    out.insert(i, x);
                }
            }
            Ok(WreathElement::Prod(out))
        }
        (
            GroupExpr::Wr(inner),
            WreathElement::Wr {
                support: fa,
                shift: n,
            },
            WreathElement::Wr {
                support: fb,
                shift: m,
            },
        ) => {
            let id = identity(inner);
            let keys: BTreeSet<i64> = fa.keys().map(|j| j - m).chain(fb.keys().copied()).collect();
            let mut out = BTreeMap::new();
            for j in keys {
                let x = multiply(
                    inner,
                    fa.get(&(j + m)).unwrap_or(&id),
                    fb.get(&j).unwrap_or(&id),
                )?;
                if !x.is_identity() {
                    out.insert(j, x);
                }
            }
            Ok(WreathElement::Wr {
                support: out,
                shift: n + m,
            })
        }
        _ => Err(mismatch(format!(
            "cannot multiply {a} by {b} in shape {shape}"
        ))),
    }
}

/// `(f, m)^-1 = (j -> f(j - m)^-1, -m)`; componentwise for products.
pub fn inverse(shape: &GroupExpr, a: &WreathElement) -> Result<WreathElement, ElementError> {
    match (shape, a) {
        (GroupExpr::One, WreathElement::Unit) => Ok(WreathElement::Unit),
        (GroupExpr::Prod(p), WreathElement::Prod(m)) => {
            let mut out = BTreeMap::new();
            for (i, x) in m {
                let x = inverse(factor_shape(p, *i)?, x)?;
                if !x.is_identity() {
                    out.insert(*i, x);
                }
            }
            Ok(WreathElement::Prod(out))
        }
        (GroupExpr::Wr(inner), WreathElement::Wr { support, shift }) => {
            let mut out = BTreeMap::new();
            for (i, x) in support {
                let x = inverse(inner, x)?;
                if !x.is_identity() {
                    out.insert(i + shift, x);
                }
            }
            Ok(WreathElement::Wr {
                support: out,
                shift: -shift,
            })
        }
        _ => Err(mismatch(format!("element {a} does not fit shape {shape}"))),
    }
}

/// Integer power by repeated squaring.
pub fn power(shape: &GroupExpr, a: &WreathElement, n: i64) -> Result<WreathElement, ElementError> {
    let mut base = if n < 0 { inverse(shape, a)? } else { a.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = identity(shape);
    while e > 0 {
        if e & 1 == 1 {
            acc = multiply(shape, &acc, &base)?;
        }
        base = multiply(shape, &base, &base)?;
        e >>= 1;
    }
    Ok(acc)
}

/// The projection `S wr Z -> Z`.
pub fn project_pi(shape: &GroupExpr, a: &WreathElement) -> Result<i64, ElementError> {
    match (shape, a) {
        (GroupExpr::Wr(_), WreathElement::Wr { shift, .. }) => Ok(*shift),
        _ => Err(mismatch(format!(
            "projection needs a wreath shape and element, got {a} in {shape}"
        ))),
    }
}

/// The section `n -> (e, n)`.
pub fn section_s(shape: &GroupExpr, n: i64) -> Result<WreathElement, ElementError> {
    match shape {
        GroupExpr::Wr(_) => Ok(WreathElement::Wr {
            support: BTreeMap::new(),
            shift: n,
        }),
        _ => Err(mismatch(format!(
            "section needs a wreath shape, got {shape}"
        ))),
    }
}

/// The inclusion `Map(Z, S) -> S wr Z`, `f -> (f, 0)`.
pub fn include_i(
    shape: &GroupExpr,
    map: BTreeMap<i64, WreathElement>,
) -> Result<WreathElement, ElementError> {
    match shape {
        GroupExpr::Wr(inner) => {
            let mut support = BTreeMap::new();
            for (j, x) in map {
                check(inner, &x)?;
                if !x.is_identity() {
                    support.insert(j, x);
                }
            }
            Ok(WreathElement::Wr { support, shift: 0 })
        }
        _ => Err(mismatch(format!(
            "inclusion needs a wreath shape, got {shape}"
        ))),
    }
}

/// A pseudo-random element, deterministic in `(shape, budget, seed)`.
///
/// Supports have at most `budget` entries with indices and shifts in
/// `[-budget, budget]`; nested elements get a budget one smaller.
pub fn random_element(shape: &GroupExpr, budget: u32, seed: u64) -> WreathElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_with(shape, budget, &mut rng)
}

pub fn random_with<R: Rng + ?Sized>(shape: &GroupExpr, budget: u32, rng: &mut R) -> WreathElement {
    if budget == 0 {
        return identity(shape);
    }
    let b = budget as i64;
    match shape {
        GroupExpr::One => WreathElement::Unit,
        GroupExpr::Wr(inner) => {
            let shift = rng.gen_range(-b..=b);
            let mut support = BTreeMap::new();
            if !is_trivial_shape(inner) {
                for _ in 0..rng.gen_range(0..=budget) {
                    let x = random_with(inner, budget - 1, rng);
                    if !x.is_identity() {
                        support.insert(rng.gen_range(-b..=b), x);
                    }
                }
            }
            WreathElement::Wr { support, shift }
        }
        GroupExpr::Prod(p) => {
            let candidates: Vec<i64> = match p {
                IndexPattern::Fin(slots) => (1..=slots.len() as i64).collect(),
                IndexPattern::Nat { prefix, .. } => (1..=prefix.len() as i64 + b).collect(),
                IndexPattern::Neg { prefix, .. } => {
                    (1..=prefix.len() as i64 + b).map(|i| -i).collect()
                }
                IndexPattern::IntCyc(_) => (-b..=b).collect(),
                IndexPattern::IntSup(support) => support.iter().map(|(k, _)| *k).collect(),
            };
            let candidates: Vec<i64> = candidates
                .into_iter()
                .filter(|i| p.slot_at(*i).is_some_and(|s| !is_trivial_shape(s)))
                .collect();
            let mut out = BTreeMap::new();
            if !candidates.is_empty() {
                for _ in 0..rng.gen_range(0..=budget) {
                    let i = candidates[rng.gen_range(0..candidates.len())];
                    let x = random_with(p.slot_at(i).expect("filtered"), budget - 1, rng);
                    if !x.is_identity() {
                        out.insert(i, x);
                    }
                }
            }
            WreathElement::Prod(out)
        }
    }
}
