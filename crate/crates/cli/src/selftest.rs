//! Seeded property checks runnable from the command line.

use folia::elements::{identity, inverse, multiply, random_with};
use folia::gen::{block_shape, random_group, random_tree, sample_shapes};
use folia::textio::{parse_surface, print_surface};
use folia::{
    canonicalize, compute_group, height, normalize, realize, reduce, transport_compose, GroupExpr,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct CheckResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

type Check = fn(&mut ChaCha8Rng) -> bool;

fn canonicalize_idempotent(rng: &mut ChaCha8Rng) -> bool {
    let t = random_tree(rng, 3);
    let c = canonicalize(&t).into_tree();
    canonicalize(&c).into_tree() == c
}

fn realize_round_trip(rng: &mut ChaCha8Rng) -> bool {
    let e = loop {
        let e = random_group(rng, 5);
        if height(&e) <= 5 {
            break e;
        }
    };
    normalize(&compute_group(&realize(&e))) == normalize(&e)
}

fn group_invariant_under_canonicalize(rng: &mut ChaCha8Rng) -> bool {
    let t = random_tree(rng, 3);
    normalize(&compute_group(&t)) == normalize(&compute_group(canonicalize(&t).tree()))
}

fn group_invariant_under_reduce(rng: &mut ChaCha8Rng) -> bool {
    let t = random_tree(rng, 3);
    normalize(&compute_group(&t)) == normalize(&compute_group(&reduce(&t)))
}

fn wreath_axioms(rng: &mut ChaCha8Rng) -> bool {
    let shapes = sample_shapes();
    let s = &shapes[rng.gen_range(0..shapes.len())];
    let (a, b, c) = (
        random_with(s, 3, rng),
        random_with(s, 3, rng),
        random_with(s, 3, rng),
    );
    let ab_c = multiply(s, &multiply(s, &a, &b).unwrap(), &c).unwrap();
    let a_bc = multiply(s, &a, &multiply(s, &b, &c).unwrap()).unwrap();
    let inv = inverse(s, &a).unwrap();
    ab_c == a_bc
        && multiply(s, &a, &inv).unwrap() == identity(s)
        && multiply(s, &inv, &a).unwrap() == identity(s)
}

fn transport_matches_multiply(rng: &mut ChaCha8Rng) -> bool {
    let k = rng.gen_range(1..=3);
    let block = block_shape(rng, k);
    let shape = GroupExpr::wr(block.clone());
    let (a, b) = (random_with(&shape, 3, rng), random_with(&shape, 3, rng));
    transport_compose(k, &block, &a, &b).ok() == multiply(&shape, &a, &b).ok()
}

fn surface_text_round_trip(rng: &mut ChaCha8Rng) -> bool {
    let t = random_tree(rng, 3);
    parse_surface(&print_surface(&t)).ok() == Some(t)
}

const CHECKS: &[(&str, Check)] = &[
    ("canonicalize-idempotent", canonicalize_idempotent),
    ("realize-round-trip", realize_round_trip),
    (
        "group-invariant-canonicalize",
        group_invariant_under_canonicalize,
    ),
    ("group-invariant-reduce", group_invariant_under_reduce),
    ("wreath-axioms", wreath_axioms),
    ("transport-oracle", transport_matches_multiply),
    ("surface-text-round-trip", surface_text_round_trip),
];

/// Runs every check `iters` times; check `i` draws from its own stream of `seed`.
pub fn run_checks(seed: u64, iters: usize) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let passed = (0..iters).filter(|_| check(&mut rng)).count();
            CheckResult {
                name,
                passed,
                total: iters,
            }
        })
        .collect()
}
