//! Paper–author corpora and their projection to coauthorship complexes.
//!
//! A paper with k authors becomes a (k-1)-simplex together with all of its
//! faces. The cochain value on a simplex is the total citation count of the
//! sampled papers whose author set contains it.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::complex::{Cochain, Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

/// One paper: id, deduplicated sorted authors, incoming citation count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperRecord {
    pub id: String,
    pub authors: Vec<VertexId>,
    pub citations: u64,
}

/// Papers plus an author table and an author → papers inverted index.
///
/// Author ids are corpus-wide and assigned in order of first appearance.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    author_keys: Vec<String>,
    author_lookup: HashMap<String, VertexId>,
    by_author: Vec<Vec<usize>>,
    paper_ids: HashMap<String, usize>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a paper. Returns `false` (and adds nothing) when the id is already
    /// present or no author key is non-empty.
    pub fn push<S: AsRef<str>>(&mut self, id: &str, authors: &[S], citations: u64) -> bool {
        if self.paper_ids.contains_key(id) {
            return false;
        }
        let mut ids: Vec<VertexId> = authors
            .iter()
            .map(|a| a.as_ref().trim())
            .filter(|a| !a.is_empty())
            .map(|a| self.intern(a))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.is_empty() {
            return false;
        }
        let idx = self.papers.len();
        for a in &ids {
            self.by_author[a.0 as usize].push(idx);
        }
        self.paper_ids.insert(id.to_string(), idx);
        self.papers.push(PaperRecord {
            id: id.to_string(),
            authors: ids,
            citations,
        });
        true
    }

    fn intern(&mut self, key: &str) -> VertexId {
        if let Some(&v) = self.author_lookup.get(key) {
            return v;
        }
        let v = VertexId(self.author_keys.len() as u32);
        self.author_keys.push(key.to_string());
        self.author_lookup.insert(key.to_string(), v);
        self.by_author.push(Vec::new());
        v
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn author_key(&self, v: VertexId) -> &str {
        &self.author_keys[v.0 as usize]
    }

    pub fn papers_of(&self, v: VertexId) -> &[usize] {
        &self.by_author[v.0 as usize]
    }

    /// Papers sharing at least one author with paper `i`, ascending, excluding `i`.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.papers[i]
            .authors
            .iter()
            .flat_map(|a| self.by_author[a.0 as usize].iter().copied())
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn keys_of(&self, p: &PaperRecord) -> Vec<&str> {
        p.authors.iter().map(|&a| self.author_key(a)).collect()
    }

    /// Tab-separated form: `id`, `;`-joined author keys, citation count.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for p in &self.papers {
            s.push_str(&p.id);
            s.push('\t');
            s.push_str(&self.keys_of(p).join(";"));
            s.push('\t');
            s.push_str(&p.citations.to_string());
            s.push('\n');
        }
        s
    }
}

/// Input layout of a corpus stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    /// Newline-delimited JSON records with `id`, `authors[].ids` and `inCitations`.
    S2orc,
    /// `paper_id <TAB> a1;a2;... <TAB> citations`.
    Tsv,
}

/// Line accounting from [`parse_corpus`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseSummary {
    pub lines: usize,
    pub parsed: usize,
    pub malformed: usize,
    pub without_authors: usize,
    pub duplicate_ids: usize,
}

#[derive(Deserialize)]
struct S2Record {
    id: String,
    #[serde(default)]
    authors: Vec<S2Author>,
    #[serde(default, rename = "inCitations")]
    in_citations: Vec<serde_json::Value>,
}

#[derive(Deserialize)]
struct S2Author {
    #[serde(default)]
    ids: Vec<serde_json::Value>,
}

fn author_key(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::String(s) if !s.trim().is_empty() => Some(s.trim().to_string()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

enum Line {
    Record(String, Vec<String>, u64),
    Malformed(String),
}

fn parse_line(line: &str, format: CorpusFormat) -> Line {
    match format {
        CorpusFormat::S2orc => match serde_json::from_str::<S2Record>(line) {
            Ok(r) => {
                // An author's first id identifies them; authors without ids are dropped.
                let authors = r
                    .authors
                    .iter()
                    .filter_map(|a| a.ids.first().and_then(author_key))
                    .collect();
                Line::Record(r.id, authors, r.in_citations.len() as u64)
            }
            Err(e) => Line::Malformed(e.to_string()),
        },
        CorpusFormat::Tsv => {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 || f[0].trim().is_empty() {
                return Line::Malformed("expected 3 tab-separated fields".into());
            }
            match f[2].trim().parse::<u64>() {
                Ok(c) => Line::Record(
                    f[0].trim().to_string(),
                    f[1].split(';')
                        .map(|a| a.trim().to_string())
                        .filter(|a| !a.is_empty())
                        .collect(),
                    c,
                ),
                Err(_) => Line::Malformed(format!("bad citation count `{}`", f[2])),
            }
        }
    }
}

/// Reads a corpus. Malformed lines and lines without usable authors are
/// skipped and counted; only read failures are errors.
pub fn parse_corpus<R: BufRead>(reader: R, format: CorpusFormat) -> Result<(Corpus, ParseSummary)> {
    let mut corpus = Corpus::new();
    let mut summary = ParseSummary::default();
    for (ln, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || (format == CorpusFormat::Tsv && line.starts_with('#')) {
            continue;
        }
        summary.lines += 1;
        match parse_line(&line, format) {
            Line::Malformed(msg) => {
                warn!("line {}: skipped malformed record: {msg}", ln + 1);
                summary.malformed += 1;
            }
            Line::Record(id, authors, citations) => {
                if authors.is_empty() {
                    warn!("line {}: paper {id} has no authors, skipped", ln + 1);
                    summary.without_authors += 1;
                    continue;
                }
                let distinct: BTreeSet<&String> = authors.iter().collect();
                if distinct.len() != authors.len() {
                    info!(
                        "line {}: paper {id} lists duplicate authors, deduplicated",
                        ln + 1
                    );
                }
                if corpus.push(&id, &authors, citations) {
                    summary.parsed += 1;
                } else {
                    warn!("line {}: duplicate paper id {id}, skipped", ln + 1);
                    summary.duplicate_ids += 1;
                }
            }
        }
    }
    Ok((corpus, summary))
}

/// Citation and team-size thresholds for [`filter_corpus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusFilter {
    pub min_citations: u64,
    pub max_authors: usize,
}

impl Default for CorpusFilter {
    fn default() -> Self {
        CorpusFilter {
            min_citations: 5,
            max_authors: 10,
        }
    }
}

/// Keeps papers with at least `min_citations` citations and at most `max_authors` authors.
pub fn filter_corpus(corpus: &Corpus, filter: CorpusFilter) -> Corpus {
    let mut out = Corpus::new();
    for p in &corpus.papers {
        if p.citations >= filter.min_citations && p.authors.len() <= filter.max_authors {
            out.push(&p.id, &corpus.keys_of(p), p.citations);
        }
    }
    out
}

/// Distinct papers visited by a random walk on the paper graph (papers are
/// adjacent when they share an author). The start is uniform; each step moves
/// to a uniform neighbor, or stays put when there is none. Returns corpus
/// indices in ascending order; at most `walk_length + 1` of them.
pub fn sample_papers(corpus: &Corpus, walk_length: usize, seed: u64) -> Result<Vec<usize>> {
    if corpus.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot sample from an empty corpus".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = rng.random_range(0..corpus.len());
    let mut visited = BTreeSet::from([current]);
    let mut stuck = false;
    for _ in 0..walk_length {
        let nb = corpus.neighbors(current);
        if nb.is_empty() {
            stuck = true;
            continue;
        }
        current = nb[rng.random_range(0..nb.len())];
        visited.insert(current);
    }
    if stuck {
        warn!(
            "random walk stayed on paper {} which shares no author with any other paper",
            corpus.papers[current].id
        );
    }
    if visited.len() < walk_length + 1 {
        info!(
            "walk of length {walk_length} visited {} distinct papers",
            visited.len()
        );
    }
    Ok(visited.into_iter().collect())
}

/// A coauthorship complex with one citation cochain per dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct CitationComplex {
    complex: SimplicialComplex,
    cochains: Vec<Cochain>,
    labels: Vec<String>,
}

impl CitationComplex {
    /// Assembles a citation complex; `cochains[p]` must be the p-cochain and
    /// `labels[v]` names vertex `v`.
    pub fn from_parts(
        complex: SimplicialComplex,
        cochains: Vec<Cochain>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let top = complex.counts().len();
        if cochains.len() != top {
            return Err(Error::ShapeMismatch {
                expected: format!("{top} cochains"),
                actual: format!("{}", cochains.len()),
            });
        }
        for (p, c) in cochains.iter().enumerate() {
            if c.dimension() != p || c.len() != complex.count(p) {
                return Err(Error::ShapeMismatch {
                    expected: format!("{}-cochain of length {}", p, complex.count(p)),
                    actual: format!("{}-cochain of length {}", c.dimension(), c.len()),
                });
            }
        }
        if labels.len() != complex.count(0) {
            return Err(Error::ShapeMismatch {
                expected: format!("{} vertex labels", complex.count(0)),
                actual: format!("{}", labels.len()),
            });
        }
        Ok(CitationComplex {
            complex,
            cochains,
            labels,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn cochain(&self, p: usize) -> Option<&Cochain> {
        self.cochains.get(p)
    }

    pub fn cochains(&self) -> &[Cochain] {
        &self.cochains
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Value of the cochain on `s`, if `s` is in the complex.
    pub fn value(&self, s: &Simplex) -> Option<f64> {
        let i = self.complex.position(s)?;
        Some(self.cochains[s.dimension()].values()[i])
    }

    /// Per-dimension simplex counts.
    pub fn stats(&self) -> Vec<usize> {
        self.complex.counts()
    }
}

/// Projects papers onto their authors. Author ids are remapped to `0..n` in
/// ascending order of their corpus ids.
pub fn project_to_complex(corpus: &Corpus, papers: &[usize]) -> Result<CitationComplex> {
    if papers.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot project an empty paper set".into(),
        ));
    }
    let used: BTreeSet<VertexId> = papers
        .iter()
        .flat_map(|&i| corpus.papers[i].authors.iter().copied())
        .collect();
    let remap: HashMap<VertexId, VertexId> = used
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, VertexId(k as u32)))
        .collect();
    let labels: Vec<String> = used
        .iter()
        .map(|&v| corpus.author_key(v).to_string())
        .collect();
    let members: Vec<(Vec<VertexId>, f64)> = papers
        .iter()
        .map(|&i| {
            let p = &corpus.papers[i];
            let mut v: Vec<VertexId> = p.authors.iter().map(|a| remap[a]).collect();
            v.sort_unstable();
            (v, p.citations as f64)
        })
        .collect();
    project_members(&members, labels)
}

/// Projection of explicit (sorted vertex list, weight) pairs.
pub(crate) fn project_members(
    members: &[(Vec<VertexId>, f64)],
    labels: Vec<String>,
) -> Result<CitationComplex> {
    let complex = SimplicialComplex::from_simplices(
        members
            .iter()
            .map(|(v, _)| Simplex::from_sorted(v.clone()))
            .collect::<Result<Vec<_>>>()?,
    );
    let mut values: Vec<Vec<f64>> = complex.counts().iter().map(|&n| vec![0.0; n]).collect();
    for (verts, weight) in members {
        let k = verts.len();
        if k > 24 {
            return Err(Error::InvalidParameter(format!(
                "a paper with {k} authors is too large to project"
            )));
        }
        for mask in 1u32..(1u32 << k) {
            let sub: Vec<VertexId> = (0..k)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| verts[b])
                .collect();
            let s = Simplex::from_sorted(sub)?;
            let pos = complex.position(&s).expect("closure contains every subset");
            values[s.dimension()][pos] += weight;
        }
    }
    let cochains = values
        .into_iter()
        .enumerate()
        .map(|(p, v)| Cochain::new(&complex, p, v))
        .collect::<Result<Vec<_>>>()?;
    CitationComplex::from_parts(complex, cochains, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "I\tA;B;C\t100\nII\tA;B\t50\nIII\tA;D\t10\nIV\tC;D\t4\n";

    fn toy_corpus() -> Corpus {
        parse_corpus(TOY.as_bytes(), CorpusFormat::Tsv).unwrap().0
    }

    #[test]
    fn s2orc_field_mapping() {
        let line = r#"{"id":"p1","title":"x","authors":[{"name":"A","ids":["11"]},{"name":"B","ids":["22"]}],"inCitations":["a","b","c","d","e","f","g"],"outCitations":["z"]}"#;
        let (c, s) = parse_corpus(line.as_bytes(), CorpusFormat::S2orc).unwrap();
        assert_eq!(s.parsed, 1);
        let p = &c.papers()[0];
        assert_eq!(p.id, "p1");
        assert_eq!(p.citations, 7);
        let keys: Vec<&str> = p.authors.iter().map(|&a| c.author_key(a)).collect();
        assert_eq!(keys, ["11", "22"]);
    }

    #[test]
    fn malformed_and_authorless_lines() {
        let text = "{\"id\":\"p1\",\"authors\":[],\"inCitations\":[]}\nnot json\n{\"id\":\"p2\",\"authors\":[{\"ids\":[]}]}\n";
        let (c, s) = parse_corpus(text.as_bytes(), CorpusFormat::S2orc).unwrap();
        assert!(c.is_empty());
        assert_eq!(s.malformed, 1);
        assert_eq!(s.without_authors, 2);
        let (c, _) = parse_corpus("".as_bytes(), CorpusFormat::S2orc).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn duplicate_authors_deduplicated() {
        let (c, _) = parse_corpus("p\tA;B;A\t3\n".as_bytes(), CorpusFormat::Tsv).unwrap();
        assert_eq!(c.papers()[0].authors.len(), 2);
    }

    #[test]
    fn duplicate_paper_ids_skipped() {
        let (c, s) = parse_corpus("p\tA\t3\np\tB\t4\n".as_bytes(), CorpusFormat::Tsv).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(s.duplicate_ids, 1);
    }

    #[test]
    fn filter_thresholds() {
        let mut c = Corpus::new();
        c.push("keep", &["a", "b"], 5);
        c.push("few", &["a"], 4);
        let many: Vec<String> = (0..11).map(|i| format!("x{i}")).collect();
        c.push("crowd", &many, 100);
        let ten: Vec<String> = (0..10).map(|i| format!("y{i}")).collect();
        c.push("ten", &ten, 5);
        let f = filter_corpus(&c, CorpusFilter::default());
        let ids: Vec<&str> = f.papers().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["keep", "ten"]);
        assert_eq!(
            filter_corpus(&f, CorpusFilter::default()).to_tsv(),
            f.to_tsv()
        );
    }

    #[test]
    fn walk_of_length_zero_is_the_start() {
        let c = toy_corpus();
        let s = sample_papers(&c, 0, 5).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn two_papers_sharing_an_author() {
        let mut c = Corpus::new();
        c.push("x", &["a", "b"], 5);
        c.push("y", &["b", "c"], 6);
        assert_eq!(sample_papers(&c, 80, 1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn isolated_paper_walk_stays() {
        let mut c = Corpus::new();
        c.push("x", &["a"], 5);
        assert_eq!(sample_papers(&c, 10, 1).unwrap(), vec![0]);
        assert!(sample_papers(&Corpus::new(), 10, 1).is_err());
    }

    #[test]
    fn walk_is_seeded() {
        let mut c = Corpus::new();
        for i in 0..50 {
            c.push(
                &format!("p{i}"),
                &[format!("a{}", i % 7), format!("a{}", (i * 3) % 11 + 7)],
                5,
            );
        }
        let a = sample_papers(&c, 20, 99).unwrap();
        assert_eq!(a, sample_papers(&c, 20, 99).unwrap());
        assert!(a.len() <= 21);
    }

    #[test]
    fn toy_projection() {
        let c = toy_corpus();
        let cc = project_to_complex(&c, &[0, 1, 2, 3]).unwrap();
        assert_eq!(cc.stats(), vec![4, 5, 1]);
        assert_eq!(cc.labels(), &["A", "B", "C", "D"]);
        assert_eq!(
            cc.cochain(0).unwrap().values(),
            &[160.0, 150.0, 104.0, 14.0]
        );
        assert_eq!(
            cc.cochain(1).unwrap().values(),
            &[150.0, 100.0, 10.0, 100.0, 4.0]
        );
        assert_eq!(cc.cochain(2).unwrap().values(), &[100.0]);
        assert!(project_to_complex(&c, &[]).is_err());
    }

    #[test]
    fn simplex_of_ten_authors_counts() {
        let mut c = Corpus::new();
        let authors: Vec<String> = (0..10).map(|i| format!("a{i}")).collect();
        c.push("big", &authors, 7);
        let cc = project_to_complex(&c, &[0]).unwrap();
        // binomial(10, p + 1)
        assert_eq!(cc.stats(), vec![10, 45, 120, 210, 252, 210, 120, 45, 10, 1]);
        assert!(cc
            .cochains()
            .iter()
            .all(|ch| ch.values().iter().all(|&v| v == 7.0)));
    }
}
