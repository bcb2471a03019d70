mod common;

use proptest::prelude::*;
use simplicial_nn::ingest::{
    filter_corpus, parse_corpus, project_to_complex, sample_papers, CorpusFilter,
};
use simplicial_nn::{CitationComplex, Corpus, CorpusFormat, Simplex, SimplicialComplex};

fn corpora() -> impl Strategy<Value = Corpus> {
    prop::collection::vec(
        (prop::collection::btree_set(0u32..12, 1..=5), 0u64..200),
        1..25,
    )
    .prop_map(|papers| {
        let mut c = Corpus::new();
        for (i, (authors, cites)) in papers.into_iter().enumerate() {
            let names: Vec<String> = authors.iter().map(|a| format!("a{a}")).collect();
            c.push(&format!("p{i}"), &names, cites);
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_simplex_comes_from_a_paper(corpus in corpora(), seed in any::<u64>()) {
        let sample = sample_papers(&corpus, 10, seed).unwrap();
        let cc = project_to_complex(&corpus, &sample).unwrap();
        let labels = cc.labels();
        let teams: Vec<Vec<&str>> = sample
            .iter()
            .map(|&i| corpus.papers()[i].authors.iter().map(|&a| corpus.author_key(a)).collect())
            .collect();
        for p in 0..cc.complex().counts().len() {
            for s in cc.complex().simplices(p) {
                let names: Vec<&str> = s.vertices().iter().map(|v| labels[v.0 as usize].as_str()).collect();
                prop_assert!(teams.iter().any(|t| names.iter().all(|n| t.contains(n))));
            }
        }
    }

    #[test]
    fn faces_carry_at_least_their_cofaces(corpus in corpora()) {
        let all: Vec<usize> = (0..corpus.len()).collect();
        let cc = project_to_complex(&corpus, &all).unwrap();
        for p in 1..cc.complex().counts().len() {
            for (i, tau) in cc.complex().simplices(p).iter().enumerate() {
                let v = cc.cochain(p).unwrap().values()[i];
                for f in tau.faces() {
                    prop_assert!(cc.value(&f).unwrap() >= v);
                }
            }
        }
    }

    #[test]
    fn filtering_is_idempotent(corpus in corpora(), min in 0u64..50, max in 1usize..6) {
        let f = CorpusFilter { min_citations: min, max_authors: max };
        let once = filter_corpus(&corpus, f);
        prop_assert_eq!(filter_corpus(&once, f).to_tsv(), once.to_tsv());
    }

    #[test]
    fn sampling_and_projection_are_deterministic(corpus in corpora(), seed in any::<u64>(), walk in 0usize..30) {
        let a = sample_papers(&corpus, walk, seed).unwrap();
        prop_assert!(a.len() <= walk + 1);
        prop_assert_eq!(&a, &sample_papers(&corpus, walk, seed).unwrap());
        let x = project_to_complex(&corpus, &a).unwrap();
        let y = project_to_complex(&corpus, &a).unwrap();
        prop_assert_eq!(x, y);
    }
}

#[test]
fn toy_projection() {
    let cc = common::toy_citations();
    assert_eq!(cc.stats(), vec![4, 5, 1]);
    assert_eq!(cc.labels(), ["A", "B", "C", "D"]);
    assert_eq!(cc.cochain(0).unwrap().values(), [160.0, 150.0, 104.0, 14.0]);
    assert_eq!(
        cc.cochain(1).unwrap().values(),
        [150.0, 100.0, 10.0, 100.0, 4.0]
    );
    assert_eq!(cc.cochain(2).unwrap().values(), [100.0]);
    assert_eq!(cc.value(&Simplex::new([0u32, 1, 2]).unwrap()), Some(100.0));
}

#[test]
fn s2orc_records() {
    let text = r#"{"id":"x","authors":[{"name":"A","ids":["1"]},{"name":"B","ids":["2"]}],"inCitations":["a","b","c","d","e"]}
{"id":"y","authors":[{"name":"B","ids":["2"]}],"inCitations":[]}
not json
{"id":"z","authors":[],"inCitations":["q"]}
"#;
    let (c, summary) = parse_corpus(text.as_bytes(), CorpusFormat::S2orc).unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(summary.malformed, 1);
    assert_eq!(summary.without_authors, 1);
    assert_eq!(c.papers()[0].citations, 5);
    let kept = filter_corpus(&c, CorpusFilter::default());
    assert_eq!(kept.len(), 1);
}

#[test]
fn empty_projection_has_no_counts() {
    assert!(project_to_complex(&Corpus::new(), &[]).is_err());
    let cc = CitationComplex::from_parts(SimplicialComplex::new(), vec![], vec![]).unwrap();
    assert!(cc.stats().is_empty());
}
