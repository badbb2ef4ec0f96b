//! Seeded generators for surfaces, group expressions and element shapes.
//!
//! Used by the property suites, the `selftest` command and the benches.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::groups::GroupExpr;
use crate::pattern::IndexPattern;
use crate::surface::{Slot, SurfaceTree};

/// A random valid surface of syntactic depth at most `max_depth`.
///
/// Children are drawn from a small pool so equal subtrees (and hence
/// nontrivial periods) are common.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> SurfaceTree {
    let pool: Vec<SurfaceTree> = if max_depth == 0 {
        Vec::new()
    } else {
        (0..rng.gen_range(1..=3))
            .map(|_| random_tree(rng, max_depth - 1))
            .collect()
    };
    let slot = |rng: &mut R| -> Slot {
        if pool.is_empty() || rng.gen_bool(0.3) {
            None
        } else {
            pool.choose(rng).cloned()
        }
    };
    let slots = |rng: &mut R, lo: usize, hi: usize| -> Vec<Slot> {
        let n = rng.gen_range(lo..=hi);
        (0..n).map(|_| slot(rng)).collect()
    };
    let children = match rng.gen_range(0..7) {
        0 | 1 => IndexPattern::Fin(slots(rng, 0, 3)),
        2 => IndexPattern::Nat {
            prefix: slots(rng, 0, 2),
            cycle: slots(rng, 1, 2),
        },
        3 => IndexPattern::Neg {
            prefix: slots(rng, 0, 2),
            cycle: slots(rng, 1, 2),
        },
        4 => {
            // repeated base cycles make declared length differ from the period
            let base = slots(rng, 1, 3);
            let reps = rng.gen_range(1..=2);
            IndexPattern::IntCyc(
                base.iter()
                    .cloned()
                    .cycle()
                    .take(base.len() * reps)
                    .collect(),
            )
        }
        5 => {
            let mut keys: Vec<i64> = (-4..=4).collect();
            keys.shuffle(rng);
            let n = rng.gen_range(0..=2);
            let support = keys
                .into_iter()
                .take(n)
                .filter_map(|k| pool.choose(rng).map(|t| (k, Some(t.clone()))))
                .collect();
            IndexPattern::IntSup(support)
        }
        _ => match pool.choose(rng) {
            // a unary strip, merged away by reduction
            Some(t) => IndexPattern::Fin(vec![Some(t.clone())]),
            None => IndexPattern::IntCyc(vec![None]),
        },
    };
    SurfaceTree::new(children)
}

/// A random valid group expression of syntactic depth at most `max_depth`.
pub fn random_group<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> GroupExpr {
    if max_depth == 0 || rng.gen_bool(0.15) {
        return GroupExpr::One;
    }
    if rng.gen_bool(0.35) {
        return GroupExpr::wr(random_group(rng, max_depth - 1));
    }
    let pool: Vec<GroupExpr> = (0..rng.gen_range(1..=3))
        .map(|_| random_group(rng, max_depth - 1))
        .collect();
    let pick = |rng: &mut R, n: usize| -> Vec<GroupExpr> {
        (0..n)
            .map(|_| pool.choose(rng).cloned().expect("nonempty pool"))
            .collect()
    };
    let pattern = match rng.gen_range(0..6) {
        0 | 1 => {
            let n = rng.gen_range(0..=3);
            IndexPattern::Fin(pick(rng, n))
        }
        2 => {
            let (p, c) = (rng.gen_range(0..=2), rng.gen_range(1..=2));
            IndexPattern::Nat {
                prefix: pick(rng, p),
                cycle: pick(rng, c),
            }
        }
        3 => {
            let (p, c) = (rng.gen_range(0..=2), rng.gen_range(1..=2));
            IndexPattern::Neg {
                prefix: pick(rng, p),
                cycle: pick(rng, c),
            }
        }
        4 => {
            let c = rng.gen_range(1..=3);
            IndexPattern::IntCyc(pick(rng, c))
        }
        _ => {
            let mut keys: Vec<i64> = (-4..=4).collect();
            keys.shuffle(rng);
            let n = rng.gen_range(0..=2);
            let support = keys
                .into_iter()
                .take(n)
                .map(|k| (k, pool.choose(rng).cloned().expect("nonempty pool")))
                .filter(|(_, g)| *g != GroupExpr::One)
                .collect();
            IndexPattern::IntSup(support)
        }
    };
    GroupExpr::Prod(pattern)
}

/// Element shapes of depth at most 3 covering every pattern kind.
pub fn sample_shapes() -> Vec<GroupExpr> {
    let z = GroupExpr::z();
    let zz = GroupExpr::wr(z.clone());
    vec![
        z.clone(),
        zz.clone(),
        GroupExpr::wr(zz.clone()),
        GroupExpr::wr(GroupExpr::fin(vec![z.clone(), z.clone()])),
        GroupExpr::fin(vec![z.clone(), zz.clone(), GroupExpr::One]),
        GroupExpr::Prod(IndexPattern::IntCyc(vec![zz.clone(), GroupExpr::One])),
        GroupExpr::Prod(IndexPattern::Nat {
            prefix: vec![z.clone()],
            cycle: vec![zz.clone()],
        }),
        GroupExpr::Prod(IndexPattern::Neg {
            prefix: vec![],
            cycle: vec![z.clone(), GroupExpr::One],
        }),
        GroupExpr::wr(GroupExpr::Prod(IndexPattern::IntSup(vec![
            (-1, z.clone()),
            (2, zz),
        ]))),
    ]
}

/// Block shapes `P` for `P wr Z` with `k` blocks, as produced by the
/// homeotopy recursion.
pub fn block_shape<R: Rng + ?Sized>(rng: &mut R, k: usize) -> GroupExpr {
    let z = GroupExpr::z();
    let choices = [
        GroupExpr::One,
        z.clone(),
        GroupExpr::wr(z.clone()),
        GroupExpr::fin(vec![z.clone(), GroupExpr::wr(z)]),
    ];
    let factors: Vec<GroupExpr> = (0..k)
        .map(|_| choices.choose(rng).cloned().expect("nonempty"))
        .collect();
    if k == 1 {
        factors.into_iter().next().expect("k = 1")
    } else {
        GroupExpr::fin(factors)
    }
}

/// Every fully finite tree (all patterns `Fin`, no empty slots) with at most
/// `max_vertices` strips, as ordered rooted trees.
pub fn enumerate_finite_trees(max_vertices: usize) -> Vec<SurfaceTree> {
    let mut by_size: Vec<Vec<SurfaceTree>> = vec![Vec::new(); max_vertices + 1];
    let mut forests: Vec<Vec<Vec<SurfaceTree>>> = vec![Vec::new(); max_vertices + 1];
    forests[0].push(Vec::new());
    for n in 1..=max_vertices {
        by_size[n] = forests[n - 1]
            .iter()
            .map(|f| SurfaceTree::fin(f.iter().cloned().map(Some).collect()))
            .collect();
        // forests of total size n: first tree of size s, then a forest of n - s
        let mut fs = Vec::new();
        for s in 1..=n {
            for t in &by_size[s] {
                for rest in &forests[n - s] {
                    let mut f = vec![t.clone()];
                    f.extend(rest.iter().cloned());
                    fs.push(f);
                }
            }
        }
        forests[n] = fs;
    }
    by_size.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ordered_tree_counts_are_catalan() {
        let trees = enumerate_finite_trees(8);
        let mut counts = [0usize; 9];
        for t in &trees {
            counts[t.node_count()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn generators_are_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let t = random_tree(&mut rng, 3);
            assert!(crate::surface::validate(&t).is_ok());
            assert!(t.depth() <= 3);
            let g = random_group(&mut rng, 4);
            assert!(crate::groups::validate_group(&g).is_ok());
            assert!(g.depth() <= 4);
        }
    }
}
