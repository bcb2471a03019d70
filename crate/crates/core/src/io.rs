//! Text formats for complexes and cochains.
//!
//! Complex: one maximal simplex per line, space-separated vertex ids, `#`
//! starts a comment line. Cochain: one line per simplex, the sorted vertex ids
//! joined by commas, a tab, then the value in shortest round-trip decimal.

use std::fmt::Write as _;

use crate::complex::{Cochain, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::ingest::CitationComplex;

pub fn write_complex(complex: &SimplicialComplex) -> String {
    let mut s = String::new();
    for m in complex.maximal_simplices() {
        let ids: Vec<String> = m.vertices().iter().map(|v| v.0.to_string()).collect();
        s.push_str(&ids.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_complex(text: &str) -> Result<SimplicialComplex> {
    let mut simplices = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ids = line
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse {
                line: ln + 1,
                message: format!("expected vertex ids, got `{line}`"),
            })?;
        simplices.push(Simplex::new(ids)?);
    }
    Ok(SimplicialComplex::from_simplices(simplices))
}

fn simplex_key(s: &Simplex) -> String {
    let ids: Vec<String> = s.vertices().iter().map(|v| v.0.to_string()).collect();
    ids.join(",")
}

pub fn write_cochain(complex: &SimplicialComplex, cochain: &Cochain) -> String {
    let mut s = String::new();
    for (simplex, v) in complex
        .simplices(cochain.dimension())
        .iter()
        .zip(cochain.values())
    {
        let _ = writeln!(s, "{}\t{v:?}", simplex_key(simplex));
    }
    s
}

/// Reads a p-cochain; every p-simplex must appear exactly once.
pub fn read_cochain(complex: &SimplicialComplex, dimension: usize, text: &str) -> Result<Cochain> {
    let n = complex.count(dimension);
    let mut values = vec![f64::NAN; n];
    let mut seen = vec![false; n];
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| Error::Parse {
            line: ln + 1,
            message: m,
        };
        let (key, value) = line
            .split_once('\t')
            .ok_or_else(|| err("expected `ids<TAB>value`".into()))?;
        let ids = key
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| err(format!("bad simplex `{key}`")))?;
        let s = Simplex::new(ids)?;
        if s.dimension() != dimension {
            return Err(err(format!("{s} is not a {dimension}-simplex")));
        }
        let i = complex
            .position(&s)
            .ok_or_else(|| err(format!("{s} is not in the complex")))?;
        if seen[i] {
            return Err(err(format!("{s} listed twice")));
        }
        seen[i] = true;
        values[i] = value
            .trim()
            .parse()
            .map_err(|_| err(format!("bad value `{value}`")))?;
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::Parse {
            line: 0,
            message: format!("no value for {}", complex.simplices(dimension)[i]),
        });
    }
    Cochain::new(complex, dimension, values)
}

/// Vertex labels: `id<TAB>label` per line.
pub fn write_labels(labels: &[String]) -> String {
    let mut s = String::new();
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(s, "{i}\t{l}");
    }
    s
}

pub fn read_labels(text: &str, expected: usize) -> Result<Vec<String>> {
    let mut labels = vec![None; expected];
    for (ln, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let err = |m: &str| Error::Parse {
            line: ln + 1,
            message: m.to_string(),
        };
        let (id, label) = line
            .split_once('\t')
            .ok_or_else(|| err("expected `id<TAB>label`"))?;
        let id: usize = id.trim().parse().map_err(|_| err("bad vertex id"))?;
        *labels
            .get_mut(id)
            .ok_or_else(|| err("vertex id out of range"))? = Some(label.to_string());
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            l.ok_or(Error::Parse {
                line: 0,
                message: format!("no label for vertex {i}"),
            })
        })
        .collect()
}

/// Serialized pieces of a citation complex: complex text, per-dimension cochain texts, labels text.
pub struct CitationComplexFiles {
    pub complex: String,
    pub cochains: Vec<String>,
    pub labels: String,
}

pub fn write_citation_complex(cc: &CitationComplex) -> CitationComplexFiles {
    CitationComplexFiles {
        complex: write_complex(cc.complex()),
        cochains: cc
            .cochains()
            .iter()
            .map(|c| write_cochain(cc.complex(), c))
            .collect(),
        labels: write_labels(cc.labels()),
    }
}

pub fn read_citation_complex(files: &CitationComplexFiles) -> Result<CitationComplex> {
    let complex = read_complex(&files.complex)?;
    let cochains = files
        .cochains
        .iter()
        .enumerate()
        .map(|(p, t)| read_cochain(&complex, p, t))
        .collect::<Result<Vec<_>>>()?;
    let labels = read_labels(&files.labels, complex.count(0))?;
    CitationComplex::from_parts(complex, cochains, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_text() {
        let k = read_complex("# four papers\n0 1 2\n0 1\n0 3\n2 3\n").unwrap();
        assert_eq!(k.counts(), vec![4, 5, 1]);
        assert_eq!(write_complex(&k), "0 3\n2 3\n0 1 2\n");
        assert!(read_complex("0 x\n").is_err());
    }

    #[test]
    fn cochain_text() {
        let k = read_complex("0 1 2\n0 3\n2 3\n").unwrap();
        let c = Cochain::new(&k, 1, vec![150.0, 100.0, 10.0, 100.0, 4.0]).unwrap();
        let text = write_cochain(&k, &c);
        assert!(text.starts_with("0,1\t150.0\n0,2\t100.0\n"));
        assert_eq!(read_cochain(&k, 1, &text).unwrap(), c);
        assert!(
            read_cochain(&k, 1, "0,1\t1.0\n").is_err(),
            "missing entries"
        );
        assert!(
            read_cochain(&k, 1, "1,3\t1.0\n").is_err(),
            "unknown simplex"
        );
    }
}
