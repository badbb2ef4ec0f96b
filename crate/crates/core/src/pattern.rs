//! Finitely described families of slots indexed by a standard collection.
//!
//! The index sets are `[n] = {1..n}`, `N = {1, 2, ...}`, `-N = {-1, -2, ...}`
//! and `Z`. Infinite families are restricted to eventually periodic (for `N`
//! and `-N`) and periodic or finitely supported (for `Z`) ones, so every
//! pattern has a finite spelling.

use std::fmt;

/// A slot value that may be "empty" (no subtree glued, or a trivial factor).
pub trait PatternSlot {
    fn is_empty_slot(&self) -> bool;
}

/// The standard collection a pattern is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Fin,
    Nat,
    Neg,
    Int,
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Fin => "fin",
            IndexKind::Nat => "nat",
            IndexKind::Neg => "neg",
            IndexKind::Int => "int",
        })
    }
}

/// Multiplicity with which a syntactic slot is instantiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    pub fn is_omega(self) -> bool {
        matches!(self, Multiplicity::Omega)
    }
}

/// Cardinal sum.
impl std::ops::Add for Multiplicity {
    type Output = Multiplicity;
    fn add(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Omega,
        }
    }
}

/// Cardinal product.
impl std::ops::Mul for Multiplicity {
    type Output = Multiplicity;
    fn mul(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a * b),
            (Multiplicity::Finite(0), _) | (_, Multiplicity::Finite(0)) => Multiplicity::Finite(0),
            _ => Multiplicity::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => f.write_str("w"),
        }
    }
}

/// A family of slots over one standard index collection.
///
/// Derived ordering follows variant order `Fin < Nat < Neg < IntCyc < IntSup`
/// and then compares components lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexPattern<T> {
    /// Slots at `1..=n`.
    Fin(Vec<T>),
    /// `prefix` at `1..=p`, then `cycle` repeated forever.
    Nat { prefix: Vec<T>, cycle: Vec<T> },
    /// `prefix` at `-1..=-p`, then `cycle` repeated towards `-inf`.
    Neg { prefix: Vec<T>, cycle: Vec<T> },
    /// Globally periodic over `Z`: slot `j` is `cycle[j mod len]`.
    IntCyc(Vec<T>),
    /// Finite support over `Z`; unlisted indices are empty.
    IntSup(Vec<(i64, T)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternDefect {
    EmptyCycle,
    EmptySupportSlot(i64),
    DuplicateSupportKey(i64),
}

impl<T> IndexPattern<T> {
    pub fn kind(&self) -> IndexKind {
        match self {
            IndexPattern::Fin(_) => IndexKind::Fin,
            IndexPattern::Nat { .. } => IndexKind::Nat,
            IndexPattern::Neg { .. } => IndexKind::Neg,
            IndexPattern::IntCyc(_) | IndexPattern::IntSup(_) => IndexKind::Int,
        }
    }

    /// Every syntactic slot with the number of indices it occupies.
    pub fn slots_with_multiplicity(&self) -> Vec<(&T, Multiplicity)> {
        let one = Multiplicity::Finite(1);
        match self {
            IndexPattern::Fin(slots) => slots.iter().map(|s| (s, one)).collect(),
            IndexPattern::Nat { prefix, cycle } | IndexPattern::Neg { prefix, cycle } => prefix
                .iter()
                .map(|s| (s, one))
                .chain(cycle.iter().map(|s| (s, Multiplicity::Omega)))
                .collect(),
            IndexPattern::IntCyc(cycle) => cycle.iter().map(|s| (s, Multiplicity::Omega)).collect(),
            IndexPattern::IntSup(support) => support.iter().map(|(_, s)| (s, one)).collect(),
        }
    }

    /// Every syntactic slot, in spelling order.
    pub fn slots(&self) -> Vec<&T> {
        self.slots_with_multiplicity()
            .into_iter()
            .map(|(s, _)| s)
            .collect()
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> IndexPattern<U> {
        match self {
            IndexPattern::Fin(slots) => IndexPattern::Fin(slots.iter().map(&mut f).collect()),
            IndexPattern::Nat { prefix, cycle } => IndexPattern::Nat {
                prefix: prefix.iter().map(&mut f).collect(),
                cycle: cycle.iter().map(&mut f).collect(),
            },
            IndexPattern::Neg { prefix, cycle } => IndexPattern::Neg {
                prefix: prefix.iter().map(&mut f).collect(),
                cycle: cycle.iter().map(&mut f).collect(),
            },
            IndexPattern::IntCyc(cycle) => IndexPattern::IntCyc(cycle.iter().map(&mut f).collect()),
            IndexPattern::IntSup(support) => {
                IndexPattern::IntSup(support.iter().map(|(k, s)| (*k, f(s))).collect())
            }
        }
    }

    /// Whether `index` belongs to this pattern's index set.
    pub fn contains_index(&self, index: i64) -> bool {
        match self {
            IndexPattern::Fin(slots) => index >= 1 && index <= slots.len() as i64,
            IndexPattern::Nat { .. } => index >= 1,
            IndexPattern::Neg { .. } => index <= -1,
            IndexPattern::IntCyc(_) | IndexPattern::IntSup(_) => true,
        }
    }

    /// The slot at `index`; `None` if the index is outside the index set or
    /// unlisted in a finite support.
    pub fn slot_at(&self, index: i64) -> Option<&T> {
        if !self.contains_index(index) {
            return None;
        }
        match self {
            IndexPattern::Fin(slots) => slots.get((index - 1) as usize),
            IndexPattern::Nat { prefix, cycle } => from_tail(prefix, cycle, (index - 1) as u64),
            IndexPattern::Neg { prefix, cycle } => from_tail(prefix, cycle, (-index - 1) as u64),
            IndexPattern::IntCyc(cycle) => {
                if cycle.is_empty() {
                    None
                } else {
                    cycle.get(index.rem_euclid(cycle.len() as i64) as usize)
                }
            }
            IndexPattern::IntSup(support) => {
                support.iter().find(|(k, _)| *k == index).map(|(_, s)| s)
            }
        }
    }
}

fn from_tail<'a, T>(prefix: &'a [T], cycle: &'a [T], pos: u64) -> Option<&'a T> {
    let pos = pos as usize;
    if pos < prefix.len() {
        prefix.get(pos)
    } else if cycle.is_empty() {
        None
    } else {
        cycle.get((pos - prefix.len()) % cycle.len())
    }
}

impl<T: PatternSlot> IndexPattern<T> {
    /// Structural defects of this pattern alone (children are not visited).
    pub fn defects(&self) -> Vec<PatternDefect> {
        let mut out = Vec::new();
        match self {
            IndexPattern::Fin(_) => {}
            IndexPattern::Nat { cycle, .. }
            | IndexPattern::Neg { cycle, .. }
            | IndexPattern::IntCyc(cycle) => {
                if cycle.is_empty() {
                    out.push(PatternDefect::EmptyCycle);
                }
            }
            IndexPattern::IntSup(support) => {
                let mut seen = std::collections::BTreeSet::new();
                for (k, s) in support {
                    if !seen.insert(*k) {
                        out.push(PatternDefect::DuplicateSupportKey(*k));
                    }
                    if s.is_empty_slot() {
                        out.push(PatternDefect::EmptySupportSlot(*k));
                    }
                }
            }
        }
        out
    }
}

/// Smallest `k` dividing `seq.len()` such that `seq` is `k`-periodic under rotation.
///
/// Returns 0 for an empty sequence.
pub fn minimal_rotation_period<T: PartialEq>(seq: &[T]) -> usize {
    let n = seq.len();
    (1..=n)
        .filter(|&k| n.is_multiple_of(k))
        .find(|&k| (0..n).all(|j| seq[j] == seq[(j + k) % n]))
        .unwrap_or(0)
}

/// The primitive root of a cyclic word: its first `minimal_rotation_period` letters.
pub fn primitive_cycle<T: PartialEq + Clone>(seq: &[T]) -> Vec<T> {
    seq[..minimal_rotation_period(seq)].to_vec()
}

/// Lexicographically least rotation.
pub fn least_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    (0..n)
        .map(|r| {
            seq[r..]
                .iter()
                .chain(&seq[..r])
                .cloned()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

/// Shortest (prefix, primitive cycle) spelling of an eventually periodic sequence.
pub fn shortest_eventually_periodic<T: PartialEq + Clone>(
    prefix: &[T],
    cycle: &[T],
) -> (Vec<T>, Vec<T>) {
    let mut prefix = prefix.to_vec();
    let mut cycle = primitive_cycle(cycle);
    while let (Some(p), Some(c)) = (prefix.last(), cycle.last()) {
        if p != c {
            break;
        }
        prefix.pop();
        cycle.rotate_right(1);
    }
    (prefix, cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_by_divisors() {
        assert_eq!(minimal_rotation_period(&['a', 'b', 'a', 'b']), 2);
        assert_eq!(minimal_rotation_period(&['a', 'a', 'a']), 1);
        assert_eq!(minimal_rotation_period(&['a', 'b', 'b']), 3);
        assert_eq!(minimal_rotation_period::<char>(&[]), 0);
    }

    #[test]
    fn least_rotation_small() {
        assert_eq!(least_rotation(&[2, 0, 1]), vec![0, 1, 2]);
        assert_eq!(least_rotation(&[1, 0, 1, 0]), vec![0, 1, 0, 1]);
    }

    #[test]
    fn prefix_absorbed_into_cycle() {
        assert_eq!(
            shortest_eventually_periodic(&['a'], &['a']),
            (vec![], vec!['a'])
        );
        assert_eq!(
            shortest_eventually_periodic(&['x', 'b'], &['a', 'b']),
            (vec!['x'], vec!['b', 'a'])
        );
        assert_eq!(
            shortest_eventually_periodic(&['b', 'a'], &['b', 'a', 'b', 'a']),
            (vec![], vec!['b', 'a'])
        );
    }

    #[test]
    fn slot_lookup() {
        let p = IndexPattern::Nat {
            prefix: vec!['p'],
            cycle: vec!['a', 'b'],
        };
        assert_eq!(p.slot_at(1), Some(&'p'));
        assert_eq!(p.slot_at(2), Some(&'a'));
        assert_eq!(p.slot_at(5), Some(&'b'));
        assert_eq!(p.slot_at(0), None);
        let z = IndexPattern::IntCyc(vec!['a', 'b', 'c']);
        assert_eq!(z.slot_at(-1), Some(&'c'));
        let n = IndexPattern::Neg {
            prefix: vec![],
            cycle: vec!['a', 'b'],
        };
        assert_eq!(n.slot_at(-2), Some(&'b'));
        assert_eq!(n.slot_at(1), None);
    }

    #[test]
    fn multiplicity_arithmetic() {
        use Multiplicity::*;
        assert_eq!(Finite(2) + Finite(3), Finite(5));
        assert_eq!(Finite(2) + Omega, Omega);
        assert_eq!(Finite(2) * Omega, Omega);
        assert_eq!(Finite(2) * Finite(3), Finite(6));
        assert!(Finite(7) < Omega);
    }
}
