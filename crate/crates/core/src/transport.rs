//! Composition of wreath elements by following strips.
//!
//! An element of `(S_0 x ... x S_{k-1}) wr Z` is read as a homeomorphism of
//! the `Z`-family of subsurfaces `Sigma_i`: strip `i = r + jk` is carried to
//! strip `i + k * shift`, acting there by component `r` of the decoration of
//! block `j`. Composing two such maps strip by strip and regrouping into
//! blocks gives the product. This path shares no code with
//! [`crate::elements::multiply`] and serves as its oracle.

use std::collections::{BTreeMap, BTreeSet};

use crate::elements::{ElementError, WreathElement};
use crate::groups::GroupExpr;
use crate::pattern::IndexPattern;

type StripMap = BTreeMap<i64, WreathElement>;

fn bad(msg: &str) -> ElementError {
    ElementError::ShapeMismatch(msg.to_string())
}

/// Shapes of the `k` strips making up one block.
fn component_shapes(k: usize, block: &GroupExpr) -> Result<Vec<&GroupExpr>, ElementError> {
    if k == 1 {
        return Ok(vec![block]);
    }
    match block {
        GroupExpr::Prod(IndexPattern::Fin(slots)) if slots.len() == k => Ok(slots.iter().collect()),
        _ => Err(bad("block shape is not a k-fold finite product")),
    }
}

fn unit_of(shape: &GroupExpr) -> WreathElement {
    match shape {
        GroupExpr::One => WreathElement::Unit,
        GroupExpr::Prod(_) => WreathElement::Prod(BTreeMap::new()),
        GroupExpr::Wr(_) => WreathElement::Wr {
            support: BTreeMap::new(),
            shift: 0,
        },
    }
}

fn trivial(x: &WreathElement) -> bool {
    match x {
        WreathElement::Unit => true,
        WreathElement::Prod(m) => m.is_empty(),
        WreathElement::Wr { support, shift } => *shift == 0 && support.is_empty(),
    }
}

/// Splits block decorations into per-strip decorations.
fn to_strips(k: usize, support: &BTreeMap<i64, WreathElement>) -> Result<StripMap, ElementError> {
    let mut strips = StripMap::new();
    let k = k as i64;
    for (&j, dec) in support {
        if k == 1 {
            strips.insert(j, dec.clone());
            continue;
        }
        let WreathElement::Prod(parts) = dec else {
            return Err(bad("block decoration is not a product element"));
        };
        for (&idx, part) in parts {
            if !(1..=k).contains(&idx) {
                return Err(bad("block component index out of range"));
            }
            strips.insert(j * k + (idx - 1), part.clone());
        }
    }
    Ok(strips)
}

fn to_blocks(k: usize, strips: StripMap) -> BTreeMap<i64, WreathElement> {
    let k = k as i64;
    if k == 1 {
        return strips;
    }
    let mut blocks: BTreeMap<i64, BTreeMap<i64, WreathElement>> = BTreeMap::new();
    for (i, dec) in strips {
        blocks
            .entry(i.div_euclid(k))
            .or_default()
            .insert(i.rem_euclid(k) + 1, dec);
    }
    blocks
        .into_iter()
        .map(|(j, parts)| (j, WreathElement::Prod(parts)))
        .collect()
}

/// `a * b` in `block wr Z`, where `block` is the `k`-fold product from the
/// homeotopy recursion (or the single factor when `k = 1`).
///
/// Apply `b` first: strip `i` goes to `i + k * b.shift` decorated by `b` at `i`,
/// then `a` carries it on, decorating by `a` at `i + k * b.shift`.
pub fn transport_compose(
    k: usize,
    block: &GroupExpr,
    a: &WreathElement,
    b: &WreathElement,
) -> Result<WreathElement, ElementError> {
    if k == 0 {
        return Err(bad("block size must be positive"));
    }
    let (
        WreathElement::Wr {
            support: sa,
            shift: na,
        },
        WreathElement::Wr {
            support: sb,
            shift: nb,
        },
    ) = (a, b)
    else {
        return Err(bad("transport needs two wreath elements"));
    };
    let shapes = component_shapes(k, block)?;
    let strips_a = to_strips(k, sa)?;
    let strips_b = to_strips(k, sb)?;
    let kk = k as i64;
    let hop = kk * nb;

    let mut touched: BTreeSet<i64> = strips_b.keys().copied().collect();
    touched.extend(strips_a.keys().map(|i| i - hop));

    let mut result = StripMap::new();
    for i in touched {
        let shape = shapes[i.rem_euclid(kk) as usize];
        let unit = unit_of(shape);
        let first = strips_b.get(&i).unwrap_or(&unit);
        let second = strips_a.get(&(i + hop)).unwrap_or(&unit);
        let dec = follow(shape, second, first)?;
        if !trivial(&dec) {
            result.insert(i, dec);
        }
    }
    Ok(WreathElement::Wr {
        support: to_blocks(k, result),
        shift: na + nb,
    })
}

/// `second` after `first`, in the group of `shape`.
fn follow(
    shape: &GroupExpr,
    second: &WreathElement,
    first: &WreathElement,
) -> Result<WreathElement, ElementError> {
    match shape {
        GroupExpr::One => match (second, first) {
            (WreathElement::Unit, WreathElement::Unit) => Ok(WreathElement::Unit),
            _ => Err(bad("trivial group holds only the unit")),
        },
        GroupExpr::Wr(inner) => transport_compose(1, inner, second, first),
        GroupExpr::Prod(pattern) => {
            let (WreathElement::Prod(ms), WreathElement::Prod(mf)) = (second, first) else {
                return Err(bad("product shape needs product elements"));
            };
            let mut out = BTreeMap::new();
            for idx in ms.keys().chain(mf.keys()).copied().collect::<BTreeSet<_>>() {
                if !pattern.contains_index(idx) {
                    return Err(bad("product index outside the index set"));
                }
                let factor = pattern.slot_at(idx).unwrap_or(&GroupExpr::One);
                let unit = unit_of(factor);
                let dec = follow(
                    factor,
                    ms.get(&idx).unwrap_or(&unit),
                    mf.get(&idx).unwrap_or(&unit),
                )?;
                if !trivial(&dec) {
                    out.insert(idx, dec);
                }
            }
            Ok(WreathElement::Prod(out))
        }
    }
}
