//! Random primitive substitutions for property tests.

use rand::Rng;

use crate::pipeline::{compute_cohomology, Options};
use crate::substitution::Substitution;

#[derive(Debug, Clone, Copy)]
pub struct CorpusShape {
    pub max_alphabet: usize,
    pub max_image_len: usize,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape {
            max_alphabet: 4,
            max_image_len: 4,
        }
    }
}

/// Draws uniformly shaped substitutions until a primitive one appears.
pub fn random_primitive<R: Rng + ?Sized>(rng: &mut R, shape: CorpusShape) -> Substitution {
    assert!(shape.max_alphabet >= 2 && shape.max_image_len >= 2);
    loop {
        let d = rng.random_range(2..=shape.max_alphabet);
        let images: Vec<Vec<usize>> = (0..d)
            .map(|_| {
                let len = rng.random_range(1..=shape.max_image_len);
                (0..len).map(|_| rng.random_range(0..d)).collect()
            })
            .collect();
        let symbols = (1..=d).map(|i| i.to_string()).collect();
        let s = Substitution::new(None, symbols, images).expect("well-formed by construction");
        if s.primitivity().primitive {
            return s;
        }
    }
}

/// Like [`random_primitive`], but also requires the full pipeline to accept it.
pub fn random_aperiodic<R: Rng + ?Sized>(rng: &mut R, shape: CorpusShape) -> Substitution {
    loop {
        let s = random_primitive(rng, shape);
        if compute_cohomology(&s, &Options::default()).is_ok() {
            return s;
        }
    }
}

/// `count` primitive substitutions named `random-<i>`.
pub fn primitive_corpus<R: Rng + ?Sized>(
    rng: &mut R,
    shape: CorpusShape,
    count: usize,
) -> Vec<Substitution> {
    (0..count)
        .map(|i| random_primitive(rng, shape).with_name(format!("random-{i}")))
        .collect()
}

pub fn aperiodic_corpus<R: Rng + ?Sized>(
    rng: &mut R,
    shape: CorpusShape,
    count: usize,
) -> Vec<Substitution> {
    (0..count)
        .map(|i| random_aperiodic(rng, shape).with_name(format!("random-{i}")))
        .collect()
}
