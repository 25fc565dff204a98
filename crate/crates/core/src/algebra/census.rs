use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Algebra, Classification, Element};

/// Counts of units, zero divisors and zeros among a sample of elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub samples: usize,
    pub units: usize,
    pub zero_divisors: usize,
    pub zeros: usize,
    /// Coordinates of up to eight zero divisors that were found.
    pub zero_divisor_examples: Vec<Vec<f64>>,
}

/// Classifies the structured elements `v_i`, `v_i + v_j`, `v_i - v_j`
/// (where zero divisors such as `1 - j` live) followed by `random` seeded
/// elements with coordinates uniform in `[-1, 1]`.
pub fn classify_census(alg: &Algebra, random: usize, seed: u64) -> Census {
    let n = alg.dim();
    let mut sample: Vec<Element> = (0..n).map(|i| Element::basis(alg, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (Element::basis(alg, i), Element::basis(alg, j));
            sample.push(&a + &b);
            sample.push(&a - &b);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let c = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        sample.push(Element::new(alg, c).expect("dimension matches"));
    }

    let mut census = Census {
        samples: sample.len(),
        units: 0,
        zero_divisors: 0,
        zeros: 0,
        zero_divisor_examples: Vec::new(),
    };
    for x in sample {
        match x.classify() {
            Classification::Unit => census.units += 1,
            Classification::Zero => census.zeros += 1,
            Classification::ZeroDivisor => {
                census.zero_divisors += 1;
                if census.zero_divisor_examples.len() < 8 {
                    census.zero_divisor_examples.push(x.into_coords());
                }
            }
        }
    }
    census
}
