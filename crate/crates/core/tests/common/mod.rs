#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplicial_nn::ingest::{parse_corpus, project_to_complex};
use simplicial_nn::{CitationComplex, CorpusFormat, Simplex, SimplicialComplex};

pub const TOY_CORPUS: &str = "I\tA;B;C\t100\nII\tA;B\t50\nIII\tA;D\t10\nIV\tC;D\t4\n";

/// A=0, B=1, C=2, D=3.
pub fn toy_complex() -> SimplicialComplex {
    SimplicialComplex::from_vertex_lists(vec![vec![0, 1, 2], vec![0, 1], vec![0, 3], vec![2, 3]])
        .unwrap()
}

pub fn toy_citations() -> CitationComplex {
    let (corpus, _) = parse_corpus(TOY_CORPUS.as_bytes(), CorpusFormat::Tsv).unwrap();
    project_to_complex(&corpus, &[0, 1, 2, 3]).unwrap()
}

pub fn total(k: &SimplicialComplex) -> usize {
    k.counts().iter().sum()
}

/// Seeded random complex with at most `max_simplices` simplices in total.
pub fn random_complex(seed: u64, max_simplices: usize) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = rng.random_range(4..=9u32);
    let mut k = SimplicialComplex::new();
    for _ in 0..rng.random_range(1..=12) {
        let size = rng.random_range(1..=4usize);
        let mut vs: Vec<u32> = (0..vertices).collect();
        for i in 0..size {
            let j = rng.random_range(i..vs.len());
            vs.swap(i, j);
        }
        vs.truncate(size);
        let mut next = k.clone();
        next.insert_closure(Simplex::new(vs).unwrap());
        if total(&next) > max_simplices {
            break;
        }
        k = next;
    }
    if k.is_empty() {
        k.insert_closure(Simplex::new([0u32, 1]).unwrap());
    }
    k
}

pub fn random_vector(seed: u64, n: usize, scale: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}

pub fn rel_error(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}
