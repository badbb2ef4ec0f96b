//! Test-only oracles, written independently of the library paths they check.

#![allow(dead_code)]

use std::collections::VecDeque;

use folia::{GroupExpr, IndexPattern, SurfaceTree};
use rand::Rng;

/// Expands a fully finite tree into an adjacency list (vertex 0 is the root).
pub fn adjacency(tree: &SurfaceTree) -> Vec<Vec<usize>> {
    fn walk(t: &SurfaceTree, adj: &mut Vec<Vec<usize>>) -> usize {
        let me = adj.len();
        adj.push(Vec::new());
        let IndexPattern::Fin(slots) = &t.children else {
            panic!("adjacency expansion needs a fully finite tree");
        };
        for child in slots.iter().flatten() {
            let c = walk(child, adj);
            adj[me].push(c);
            adj[c].push(me);
        }
        me
    }
    let mut adj = Vec::new();
    walk(tree, &mut adj);
    adj
}

/// Diameter by breadth-first search from every vertex.
pub fn bfs_diameter(tree: &SurfaceTree) -> usize {
    let adj = adjacency(tree);
    let mut best = 0;
    for start in 0..adj.len() {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        best = best.max(dist.into_iter().max().unwrap_or(0));
    }
    best
}

/// Height per the inductive definition, evaluated bottom-up with an explicit
/// post-order stack instead of recursion.
pub fn reference_height(e: &GroupExpr) -> usize {
    enum Frame<'a> {
        Enter(&'a GroupExpr),
        Exit(&'a GroupExpr, usize),
    }
    let mut stack = vec![Frame::Enter(e)];
    let mut values: Vec<usize> = Vec::new();
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(GroupExpr::One) => values.push(0),
            Frame::Enter(g @ GroupExpr::Wr(inner)) => {
                stack.push(Frame::Exit(g, 1));
                stack.push(Frame::Enter(inner));
            }
            Frame::Enter(g @ GroupExpr::Prod(p)) => {
                let factors: Vec<&GroupExpr> = match p {
                    IndexPattern::Fin(v) | IndexPattern::IntCyc(v) => v.iter().collect(),
                    IndexPattern::Nat { prefix, cycle } | IndexPattern::Neg { prefix, cycle } => {
                        prefix.iter().chain(cycle.iter()).collect()
                    }
                    IndexPattern::IntSup(s) => s.iter().map(|(_, g)| g).collect(),
                };
                stack.push(Frame::Exit(g, factors.len()));
                for f in factors {
                    stack.push(Frame::Enter(f));
                }
            }
            Frame::Exit(GroupExpr::Wr(_), _) => {
                let h = values.pop().expect("inner value");
                values.push(h + 1);
            }
            Frame::Exit(_, n) => {
                let start = values.len() - n;
                let m = values.drain(start..).max().unwrap_or(0);
                values.push(m + 1);
            }
        }
    }
    values.pop().expect("one value")
}

/// Smallest shift `k >= 1` with `seq[j] == seq[(j + k) mod n]` for all `j`,
/// trying every `k` rather than only divisors.
pub fn brute_force_period<T: PartialEq>(seq: &[T]) -> usize {
    let n = seq.len();
    (1..=n)
        .find(|&k| (0..n).all(|j| seq[j] == seq[(j + k) % n]))
        .unwrap_or(0)
}

/// Rewrites a surface into a different spelling of the same surface:
/// rotates and repeats integer cycles, shifts finite supports, unrolls a
/// cycle period into the prefix, and wraps subtrees in unary strips.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, t: &SurfaceTree) -> SurfaceTree {
    let slot = |s: &Option<SurfaceTree>, rng: &mut R| s.as_ref().map(|c| perturb(rng, c));
    let children = match &t.children {
        IndexPattern::Fin(slots) => IndexPattern::Fin(slots.iter().map(|s| slot(s, rng)).collect()),
        IndexPattern::Nat { prefix, cycle } | IndexPattern::Neg { prefix, cycle } => {
            let mut prefix: Vec<_> = prefix.iter().map(|s| slot(s, rng)).collect();
            let cycle: Vec<_> = cycle.iter().map(|s| slot(s, rng)).collect();
            // move the first cycle period into the prefix
            let unroll = rng.gen_range(0..=cycle.len());
            prefix.extend(cycle[..unroll].iter().cloned());
            let mut cycle = cycle;
            let n = cycle.len().max(1);
            cycle.rotate_left(unroll % n);
            let reps = rng.gen_range(1..=2);
            let cycle: Vec<_> = cycle
                .iter()
                .cloned()
                .cycle()
                .take(cycle.len() * reps)
                .collect();
            if matches!(t.children, IndexPattern::Nat { .. }) {
                IndexPattern::Nat { prefix, cycle }
            } else {
                IndexPattern::Neg { prefix, cycle }
            }
        }
        IndexPattern::IntCyc(cycle) => {
            let mut cycle: Vec<_> = cycle.iter().map(|s| slot(s, rng)).collect();
            let r = rng.gen_range(0..cycle.len().max(1));
            cycle.rotate_left(r);
            let reps = rng.gen_range(1..=3);
            IndexPattern::IntCyc(
                cycle
                    .iter()
                    .cloned()
                    .cycle()
                    .take(cycle.len() * reps)
                    .collect(),
            )
        }
        IndexPattern::IntSup(support) => {
            let shift = rng.gen_range(-5..=5);
            let mut support: Vec<_> = support
                .iter()
                .map(|(k, s)| (k + shift, slot(s, rng)))
                .collect();
            let r = rng.gen_range(0..support.len().max(1));
            support.rotate_left(r);
            IndexPattern::IntSup(support)
        }
    };
    let node = SurfaceTree::new(children);
    if rng.gen_bool(0.2) {
        SurfaceTree::fin(vec![Some(node)])
    } else {
        node
    }
}
