//! Seeded synthetic coauthorship corpora.
//!
//! Authors belong to research groups. Each paper is written by a few members
//! of one group, occasionally joined by an outside collaborator, and collects
//! a heavy-tailed number of citations. The resulting complexes have the
//! overlapping-clique structure of real coauthorship data at desk scale.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{project_to_complex, CitationComplex, Corpus};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub papers: usize,
    pub min_authors: usize,
    pub max_authors: usize,
    pub groups: usize,
    pub group_size: usize,
    /// Probability that a paper includes one author from another group.
    pub outside_author: f64,
    /// Citations are `min_citations + round(exp(N(log_mean, log_sd)))`.
    pub min_citations: u64,
    pub log_mean: f64,
    pub log_sd: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            papers: 30,
            min_authors: 2,
            max_authors: 6,
            groups: 4,
            group_size: 8,
            outside_author: 0.3,
            min_citations: 5,
            log_mean: 3.0,
            log_sd: 1.0,
            seed: 0,
        }
    }
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller; one draw per call keeps the stream simple to reason about.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Generates the corpus described by `config`.
pub fn synthetic_corpus(config: &SyntheticConfig) -> Result<Corpus> {
    if config.min_authors == 0
        || config.min_authors > config.max_authors
        || config.max_authors > config.group_size
    {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= min_authors <= max_authors <= group_size, got {}/{}/{}",
            config.min_authors, config.max_authors, config.group_size
        )));
    }
    if config.groups == 0 || config.papers == 0 {
        return Err(Error::InvalidParameter(
            "need at least one group and one paper".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut corpus = Corpus::new();
    for p in 0..config.papers {
        let group = rng.random_range(0..config.groups);
        let k = rng.random_range(config.min_authors..=config.max_authors);
        let mut authors: Vec<usize> = sample(&mut rng, config.group_size, k)
            .into_iter()
            .map(|m| group * config.group_size + m)
            .collect();
        if config.groups > 1 && rng.random::<f64>() < config.outside_author {
            let other = (group + rng.random_range(1..config.groups)) % config.groups;
            let member = rng.random_range(0..config.group_size);
            authors[0] = other * config.group_size + member;
        }
        let z = standard_normal(&mut rng);
        let citations =
            config.min_citations + (config.log_mean + config.log_sd * z).exp().round() as u64;
        let names: Vec<String> = authors.iter().map(|a| format!("author{a}")).collect();
        corpus.push(&format!("paper{p}"), &names, citations);
    }
    Ok(corpus)
}

/// Projection of the full synthetic corpus.
pub fn synthetic_complex(config: &SyntheticConfig) -> Result<CitationComplex> {
    let corpus = synthetic_corpus(config)?;
    let all: Vec<usize> = (0..corpus.len()).collect();
    project_to_complex(&corpus, &all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_author_bounds_and_is_seeded() {
        let cfg = SyntheticConfig::default();
        let c = synthetic_corpus(&cfg).unwrap();
        assert_eq!(c.len(), 30);
        assert!(c
            .papers()
            .iter()
            .all(|p| (2..=6).contains(&p.authors.len()) && p.citations >= 5));
        assert_eq!(c.to_tsv(), synthetic_corpus(&cfg).unwrap().to_tsv());
        let other = synthetic_corpus(&SyntheticConfig { seed: 1, ..cfg }).unwrap();
        assert_ne!(c.to_tsv(), other.to_tsv());
    }

    #[test]
    fn rejects_bad_bounds() {
        let cfg = SyntheticConfig {
            max_authors: 9,
            ..SyntheticConfig::default()
        };
        assert!(synthetic_corpus(&cfg).is_err());
    }
}
