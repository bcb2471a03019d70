//! Finite abstract simplicial complexes.
//!
//! Simplices are stored as strictly increasing vertex sequences. Inside each
//! dimension the simplices are kept in lexicographic order, and that order is
//! the row/column order of every operator built on top of the complex.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a vertex (0-simplex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A non-empty set of vertices, stored sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Canonicalizes the vertex list (sort + dedup). Fails on an empty list.
    pub fn new<I, V>(vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let mut v: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        if v.is_empty() {
            return Err(Error::EmptySimplex);
        }
        v.sort_unstable();
        v.dedup();
        Ok(Simplex(v))
    }

    /// Builds a simplex from a vertex list that must already be strictly increasing.
    pub fn from_sorted(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "simplex vertices must be strictly increasing: {:?}",
                vertices.iter().map(|v| v.0).collect::<Vec<_>>()
            )));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: u32) -> Self {
        Simplex(vec![VertexId(v)])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    /// The faces of codimension one, in order of the omitted vertex index
    /// `i = 0..=p`. A vertex has no faces: the empty set is never a simplex here.
    pub fn faces(&self) -> Vec<Simplex> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                Simplex(v)
            })
            .collect()
    }

    /// True if `self` is a proper subset of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() < other.0.len() && is_sorted_subset(&self.0, &other.0)
    }

    /// True if `self` is a subset of `other` (including equality).
    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }
}

fn is_sorted_subset(small: &[VertexId], big: &[VertexId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|v| it.any(|w| w == v))
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.0.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Shortest-chain distance between two simplices of equal dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Finite(usize),
    /// The simplices lie in different connected components.
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    /// `true` when the distance is strictly greater than `n` (unreachable counts as infinite).
    pub fn exceeds(self, n: usize) -> bool {
        match self {
            Distance::Finite(d) => d > n,
            Distance::Unreachable => true,
        }
    }
}

/// A finite simplicial complex, closed under taking subsets.
///
/// Immutable apart from [`SimplicialComplex::insert_closure`]; incidence tables
/// are rebuilt after each modification.
#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    levels: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    // faces[p][i]: positions in K_{p-1} of the faces of the i-th p-simplex,
    // ordered by omitted vertex index.
    faces: Vec<Vec<Vec<usize>>>,
    // cofaces[p][i]: positions in K_{p+1}, ascending.
    cofaces: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the downward closure of the given simplices.
    pub fn from_simplices<I>(simplices: I) -> Self
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for s in simplices {
            add_closure(&mut sets, s);
        }
        Self::from_levels(sets)
    }

    /// Convenience constructor from raw vertex lists.
    pub fn from_vertex_lists<I, S>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = u32>,
    {
        let simplices = lists
            .into_iter()
            .map(Simplex::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_simplices(simplices))
    }

    /// Inserts `simplex` together with all of its subsets. Idempotent.
    pub fn insert_closure(&mut self, simplex: Simplex) {
        if self.contains(&simplex) {
            return;
        }
        let mut sets: Vec<BTreeSet<Simplex>> = std::mem::take(&mut self.levels)
            .into_iter()
            .map(|l| l.into_iter().collect())
            .collect();
        add_closure(&mut sets, simplex);
        *self = Self::from_levels(sets);
    }

    fn from_levels(sets: Vec<BTreeSet<Simplex>>) -> Self {
        let levels: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut index = HashMap::with_capacity(levels.iter().map(Vec::len).sum());
        for level in &levels {
            for (i, s) in level.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::with_capacity(levels.len());
        let mut cofaces: Vec<Vec<Vec<usize>>> =
            levels.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for (p, level) in levels.iter().enumerate() {
            let mut fp = Vec::with_capacity(level.len());
            for (j, s) in level.iter().enumerate() {
                let pos: Vec<usize> = s.faces().iter().map(|f| index[f]).collect();
                if p > 0 {
                    for &i in &pos {
                        cofaces[p - 1][i].push(j);
                    }
                }
                fp.push(pos);
            }
            faces.push(fp);
        }
        SimplicialComplex {
            levels,
            index,
            faces,
            cofaces,
        }
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// |K_p|, zero for dimensions above the top.
    pub fn count(&self, p: usize) -> usize {
        self.levels.get(p).map_or(0, Vec::len)
    }

    /// Per-dimension simplex counts, `p = 0..=top`.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// The ordered p-simplices (empty slice above the top dimension).
    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.levels.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` within its dimension.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.simplices(0).iter().map(|s| s.0[0]).collect()
    }

    /// Positions in K_{p-1} of the faces of the i-th p-simplex, by omitted index.
    pub fn face_positions(&self, p: usize, i: usize) -> &[usize] {
        &self.faces[p][i]
    }

    /// Positions in K_{p+1} of the cofaces of the i-th p-simplex, ascending.
    pub fn coface_positions(&self, p: usize, i: usize) -> &[usize] {
        &self.cofaces[p][i]
    }

    /// All (p+1)-simplices having `s` as a face, in index order.
    pub fn cofaces(&self, s: &Simplex) -> Result<Vec<Simplex>> {
        let i = self
            .position(s)
            .ok_or_else(|| Error::UnknownSimplex(s.to_string()))?;
        let p = s.dimension();
        Ok(self.cofaces[p][i]
            .iter()
            .map(|&j| self.levels[p + 1][j].clone())
            .collect())
    }

    /// Simplices that are not a face of any other simplex, by dimension then lexicographically.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (p, level) in self.levels.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                if self.cofaces[p][i].is_empty() {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Checks that every face of every member is a member.
    pub fn is_closed(&self) -> bool {
        self.levels
            .iter()
            .flatten()
            .all(|s| s.faces().iter().all(|f| self.contains(f)))
    }

    /// p-simplices sharing a face or a coface with the i-th p-simplex, ascending, excluding itself.
    pub fn adjacent(&self, p: usize, i: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        if p > 0 {
            for &f in &self.faces[p][i] {
                out.extend(self.cofaces[p - 1][f].iter().copied());
            }
        }
        if p + 1 < self.levels.len() {
            for &t in &self.cofaces[p][i] {
                out.extend(self.faces[p + 1][t].iter().copied());
            }
        }
        out.remove(&i);
        out.into_iter().collect()
    }

    /// Breadth-first distances from the i-th p-simplex to every p-simplex.
    pub fn distances_from(&self, p: usize, i: usize) -> Vec<Distance> {
        let n = self.count(p);
        let mut dist = vec![Distance::Unreachable; n];
        let mut queue = VecDeque::new();
        dist[i] = Distance::Finite(0);
        queue.push_back((i, 0usize));
        while let Some((u, d)) = queue.pop_front() {
            for v in self.adjacent(p, u) {
                if dist[v] == Distance::Unreachable {
                    dist[v] = Distance::Finite(d + 1);
                    queue.push_back((v, d + 1));
                }
            }
        }
        dist
    }

    /// Length of the shortest chain of p-simplices from `sigma` to `tau` in which
    /// consecutive members share a face or a coface.
    pub fn simplicial_distance(&self, sigma: &Simplex, tau: &Simplex) -> Result<Distance> {
        if sigma.dimension() != tau.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "distance between a {}-simplex and a {}-simplex",
                sigma.dimension(),
                tau.dimension()
            )));
        }
        let i = self
            .position(sigma)
            .ok_or_else(|| Error::UnknownSimplex(sigma.to_string()))?;
        let j = self
            .position(tau)
            .ok_or_else(|| Error::UnknownSimplex(tau.to_string()))?;
        Ok(self.distances_from(sigma.dimension(), i)[j])
    }

    /// Returns the complex with vertex ids renamed by `f`, re-sorted canonically.
    pub fn relabel<F: Fn(VertexId) -> VertexId>(&self, f: F) -> Self {
        let simplices = self.maximal_simplices().into_iter().map(|s| {
            Simplex::new(s.0.iter().map(|&v| f(v))).expect("relabeling keeps simplices non-empty")
        });
        Self::from_simplices(simplices)
    }
}

fn add_closure(sets: &mut Vec<BTreeSet<Simplex>>, simplex: Simplex) {
    let mut stack = vec![simplex];
    while let Some(s) = stack.pop() {
        let p = s.dimension();
        if sets.len() <= p {
            sets.resize_with(p + 1, BTreeSet::new);
        }
        if sets[p].contains(&s) {
            continue;
        }
        stack.extend(s.faces());
        sets[p].insert(s);
    }
}

/// A real-valued function on the p-simplices of a complex, aligned to its ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    dimension: usize,
    values: Vec<f64>,
}

impl Cochain {
    pub fn new(complex: &SimplicialComplex, dimension: usize, values: Vec<f64>) -> Result<Self> {
        let n = complex.count(dimension);
        if values.len() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n} values for dimension {dimension}"),
                actual: format!("{}", values.len()),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cochain entry {k} is not finite"
            )));
        }
        Ok(Cochain { dimension, values })
    }

    pub fn zeros(complex: &SimplicialComplex, dimension: usize) -> Self {
        Cochain {
            dimension,
            values: vec![0.0; complex.count(dimension)],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // A=0, B=1, C=2, D=3
    fn toy_complex() -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(vec![
            vec![0, 1, 2],
            vec![0, 1],
            vec![0, 3],
            vec![2, 3],
        ])
        .unwrap()
    }

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn closure_of_one_triangle() {
        let mut k = SimplicialComplex::new();
        k.insert_closure(s(&[0, 1, 2]));
        assert_eq!(k.counts(), vec![3, 3, 1]);
    }

    #[test]
    fn toy_complex_levels() {
        let k = toy_complex();
        assert_eq!(k.counts(), vec![4, 5, 1]);
        let edges: Vec<_> = k.simplices(1).iter().map(|e| e.to_string()).collect();
        assert_eq!(edges, ["[0,1]", "[0,2]", "[0,3]", "[1,2]", "[2,3]"]);
        assert_eq!(k.simplices(2), &[s(&[0, 1, 2])]);
    }

    #[test]
    fn insert_is_idempotent() {
        let mut k = toy_complex();
        let before = k.clone();
        k.insert_closure(s(&[0, 1, 2]));
        k.insert_closure(s(&[2, 3]));
        assert_eq!(k, before);
        assert_eq!(k.position(&s(&[2, 3])), Some(4));
    }

    #[test]
    fn empty_simplex_rejected() {
        assert!(matches!(
            Simplex::new(Vec::<u32>::new()),
            Err(Error::EmptySimplex)
        ));
        assert!(Simplex::from_sorted(vec![VertexId(2), VertexId(1)]).is_err());
    }

    #[test]
    fn faces_in_omitted_index_order() {
        assert_eq!(
            s(&[0, 1, 2]).faces(),
            vec![s(&[1, 2]), s(&[0, 2]), s(&[0, 1])]
        );
        assert_eq!(s(&[0, 1]).faces(), vec![s(&[1]), s(&[0])]);
        assert!(s(&[0]).faces().is_empty());
    }

    #[test]
    fn cofaces_on_toy_complex() {
        let k = toy_complex();
        assert_eq!(k.cofaces(&s(&[0, 1])).unwrap(), vec![s(&[0, 1, 2])]);
        assert!(k.cofaces(&s(&[2, 3])).unwrap().is_empty());
        assert_eq!(
            k.cofaces(&s(&[0])).unwrap(),
            vec![s(&[0, 1]), s(&[0, 2]), s(&[0, 3])]
        );
        assert!(matches!(
            k.cofaces(&s(&[1, 3])),
            Err(Error::UnknownSimplex(_))
        ));
    }

    #[test]
    fn distances_on_toy_complex() {
        let k = toy_complex();
        let d = |a: &[u32], b: &[u32]| k.simplicial_distance(&s(a), &s(b)).unwrap();
        assert_eq!(d(&[0, 1], &[0, 1]), Distance::Finite(0));
        assert_eq!(d(&[0, 1], &[0, 2]), Distance::Finite(1));
        assert_eq!(d(&[0, 1], &[2, 3]), Distance::Finite(2));
        assert!(k.simplicial_distance(&s(&[0]), &s(&[0, 1])).is_err());
    }

    #[test]
    fn disconnected_is_unreachable() {
        let k = SimplicialComplex::from_vertex_lists(vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(
            k.simplicial_distance(&s(&[0, 1]), &s(&[2, 3])).unwrap(),
            Distance::Unreachable
        );
        assert!(Distance::Unreachable.exceeds(1_000_000));
    }

    #[test]
    fn maximal_simplices_of_toy_complex() {
        let k = toy_complex();
        assert_eq!(
            k.maximal_simplices(),
            vec![s(&[0, 3]), s(&[2, 3]), s(&[0, 1, 2])]
        );
    }

    #[test]
    fn cochain_length_checked() {
        let k = toy_complex();
        assert!(Cochain::new(&k, 1, vec![1.0; 4]).is_err());
        assert!(Cochain::new(&k, 1, vec![f64::NAN; 5]).is_err());
        assert_eq!(Cochain::new(&k, 1, vec![1.0; 5]).unwrap().len(), 5);
    }
}
