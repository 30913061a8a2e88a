#![allow(dead_code)]

use pcentral::word::GroupWord;
use pcentral::Presentation;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random word in `d` generators of nesting depth at most `depth`.
pub fn random_word(rng: &mut impl Rng, d: usize, depth: usize) -> GroupWord {
    let leaf = |rng: &mut dyn rand::RngCore| {
        let g = GroupWord::gen(rng.gen_range(0..d));
        match rng.gen_range(0..4) {
            0 => g.inv(),
            1 => g.pow(rng.gen_range(-9..=9)),
            _ => g,
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => leaf(rng),
        1 => GroupWord::comm(
            random_word(rng, d, depth - 1),
            random_word(rng, d, depth - 1),
        ),
        2 => random_word(rng, d, depth - 1).pow(rng.gen_range(-4..=4)),
        _ => {
            let k = rng.gen_range(2..=3);
            GroupWord::product((0..k).map(|_| random_word(rng, d, depth - 1)).collect())
        }
    }
}

pub fn names(d: usize) -> Vec<String> {
    pcentral::word::default_names(d)
}

/// Random presentation with `d <= 3`, at most three relators, `N <= 5`.
pub fn random_presentation(rng: &mut impl Rng) -> Presentation {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let d = rng.gen_range(1..=3);
    let n = if d == 3 {
        rng.gen_range(3..=4)
    } else {
        rng.gen_range(3..=5)
    };
    let r = rng.gen_range(0..=3);
    let relators = (0..r).map(|_| random_word(rng, d, 2)).collect();
    Presentation::new(p, names(d), relators, n).expect("valid random presentation")
}

/// Like [`random_presentation`], but every relator lies in `S^(2)`.
pub fn random_minimal_presentation(rng: &mut impl Rng) -> Presentation {
    let base = random_presentation(rng);
    let ctx = base.ctx().unwrap();
    let d = base.d();
    let count = rng.gen_range(1..=3);
    let relators = (0..count)
        .map(|_| loop {
            let w = random_word(rng, d, 2);
            let g = pcentral::series::evaluate_word(ctx, &w).unwrap();
            if g.weight() >= pcentral::Weight::Finite(2) {
                break w;
            }
        })
        .collect();
    Presentation::new(base.p, base.generators, relators, base.truncation).unwrap()
}
