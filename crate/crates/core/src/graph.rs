//! Simple undirected graphs stored as adjacency bitsets.
//!
//! Vertex ids are 0-based everywhere inside the crate. DIMACS files, the JSON
//! fixture schema and everything printed by the CLI use 1-based ids; the
//! translation happens in the parsers and in [`Clique`]'s serializer.

use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simplex::SimplexVector;

/// Immutable simple undirected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adjacency: Vec<u64>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edge_count", &self.edge_count)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from 0-based edge pairs. Duplicates and reversed pairs
    /// collapse; self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut builder = GraphBuilder::new(n)?;
        for (i, j) in edges {
            builder.add_edge(i, j)?;
        }
        Ok(builder.build())
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::from_edges(n, edges)
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::from_edges(n, std::iter::empty())
    }

    /// The five-vertex graph with maximal cliques {1,2}, {1,3,4}, {2,5} and
    /// {3,4,5}, on which x({1,2}) is a first-order point of the plain
    /// Motzkin-Straus program but not a local maximizer.
    pub fn figure1() -> Self {
        let edges = [(1, 2), (1, 3), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)];
        Self::from_edges(5, edges.iter().map(|&(i, j)| (i - 1, j - 1)))
            .expect("static edge list is valid")
    }

    /// `hamming<bits>-<distance>`: words of `bits` bits, adjacent when their
    /// Hamming distance is at least `distance`.
    pub fn hamming(bits: u32, distance: u32) -> Result<Self> {
        if bits == 0 || bits > 20 {
            return Err(Error::InvalidParameter(format!(
                "hamming word length must be in 1..=20, got {bits}"
            )));
        }
        let n = 1usize << bits;
        let mut builder = GraphBuilder::new(n)?;
        for i in 0..n {
            for j in i + 1..n {
                if ((i ^ j) as u64).count_ones() >= distance {
                    builder.add_edge(i, j)?;
                }
            }
        }
        Ok(builder.build())
    }

    /// Erdős–Rényi G(n, p).
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("edge probability {p} not in [0,1]")));
        }
        let mut builder = GraphBuilder::new(n)?;
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    builder.add_edge(i, j)?;
                }
            }
        }
        Ok(builder.build())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of `u64` words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    /// Adjacency row of `i` as a bitset.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.adjacency[i * self.words..(i + 1) * self.words]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        bitset::contains(self.row(i), j)
    }

    pub fn degree(&self, i: usize) -> usize {
        bitset::count(self.row(i))
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        bitset::ones(self.row(i))
    }

    /// Edges as 0-based pairs `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.neighbors(i).filter(move |&j| j > i).map(move |j| (i, j)))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// First non-adjacent distinct pair in `vertices`, if any.
    pub fn first_non_adjacent_pair(&self, vertices: &[usize]) -> Result<Option<(usize, usize)>> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        for (a, &i) in vertices.iter().enumerate() {
            for &j in &vertices[a + 1..] {
                if i != j && !self.has_edge(i, j) {
                    return Ok(Some((i.min(j), i.max(j))));
                }
            }
        }
        Ok(None)
    }

    /// True iff every distinct pair in `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> Result<bool> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        Ok(self.first_non_adjacent_pair(vertices)?.is_none())
    }

    /// Bitset of vertices outside `vertices` adjacent to all of them.
    pub(crate) fn common_neighbors(&self, vertices: &[usize]) -> Vec<u64> {
        let mut common = vec![u64::MAX; self.words];
        bitset::trim(&mut common, self.n);
        for &v in vertices {
            bitset::and_assign(&mut common, self.row(v));
        }
        common
    }

    /// True iff no vertex outside the clique is adjacent to all of it.
    pub fn is_maximal_clique(&self, vertices: &[usize]) -> Result<bool> {
        if let Some((i, j)) = self.first_non_adjacent_pair(vertices)? {
            return Err(Error::NotAClique(i, j));
        }
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        Ok(bitset::is_empty(&self.common_neighbors(vertices)))
    }

    /// Uniform point on the face spanned by `clique`.
    pub fn characteristic_vector<T: Scalar>(&self, clique: &Clique) -> SimplexVector<T> {
        assert!(
            clique.vertices().iter().all(|&v| v < self.n),
            "clique belongs to a larger graph"
        );
        SimplexVector::uniform_on(self.n, clique.vertices())
    }

    /// Median and interquartile range of vertex degrees, over all vertices or
    /// over `subset`.
    pub fn degree_stats(&self, subset: Option<&[usize]>, method: QuartileMethod) -> Result<DegreeStats> {
        let degrees: Vec<f64> = match subset {
            Some(s) => {
                if s.is_empty() {
                    return Err(Error::EmptyVertexSet);
                }
                s.iter()
                    .map(|&v| self.check_vertex(v).map(|_| self.degree(v) as f64))
                    .collect::<Result<_>>()?
            }
            None => {
                if self.n == 0 {
                    return Err(Error::EmptyVertexSet);
                }
                (0..self.n).map(|v| self.degree(v) as f64).collect()
            }
        };
        Ok(DegreeStats::from_values(degrees, method))
    }

    /// Writes the graph in DIMACS clq format (1-based ids).
    pub fn write_dimacs<W: Write>(&self, mut w: W, comment: Option<&str>) -> std::io::Result<()> {
        if let Some(c) = comment {
            for line in c.lines() {
                writeln!(w, "c {line}")?;
            }
        }
        writeln!(w, "p edge {} {}", self.n, self.edge_count)?;
        for (i, j) in self.edges() {
            writeln!(w, "e {} {}", i + 1, j + 1)?;
        }
        Ok(())
    }

    pub fn to_dimacs_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf, None).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("DIMACS output is ASCII")
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            schema_version: GRAPH_JSON_SCHEMA_VERSION,
            n: self.n,
            adjacency: (0..self.n).map(|i| self.neighbors(i).map(|j| j + 1).collect()).collect(),
        }
    }

    pub fn from_json(doc: &GraphJson) -> Result<Self> {
        if doc.schema_version != GRAPH_JSON_SCHEMA_VERSION {
            return Err(Error::InvalidParameter(format!(
                "unsupported graph schema_version {}",
                doc.schema_version
            )));
        }
        if doc.adjacency.len() != doc.n {
            return Err(Error::DimensionMismatch { expected: doc.n, got: doc.adjacency.len() });
        }
        let mut builder = GraphBuilder::new(doc.n)?;
        for (i, list) in doc.adjacency.iter().enumerate() {
            for &j in list {
                if j == 0 || j > doc.n {
                    return Err(Error::VertexOutOfRange { vertex: j, n: doc.n });
                }
                builder.add_edge(i, j - 1)?;
            }
        }
        Ok(builder.build())
    }
}

pub const GRAPH_JSON_SCHEMA_VERSION: u32 = 1;

/// Adjacency-list fixture format.
///
/// ```json
/// {"schema_version": 1, "n": 3, "adjacency": [[2, 3], [1, 3], [1, 2]]}
/// ```
///
/// Ids are 1-based. An edge may be listed from either endpoint or both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub schema_version: u32,
    pub n: usize,
    pub adjacency: Vec<Vec<usize>>,
}

/// Mutable accumulator used while reading a graph.
pub struct GraphBuilder {
    n: usize,
    words: usize,
    adjacency: Vec<u64>,
    edge_count: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph must have at least one vertex".into()));
        }
        let words = bitset::words_for(n);
        Ok(Self { n, words, adjacency: vec![0; n * words], edge_count: 0 })
    }

    /// Adds the 0-based edge `{i, j}`; returns whether it was new.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        for v in [i, j] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if i == j {
            return Err(Error::InvalidParameter(format!("self-loop on vertex {}", i + 1)));
        }
        let w = self.words;
        if bitset::contains(&self.adjacency[i * w..(i + 1) * w], j) {
            return Ok(false);
        }
        bitset::insert(&mut self.adjacency[i * w..(i + 1) * w], j);
        bitset::insert(&mut self.adjacency[j * w..(j + 1) * w], i);
        self.edge_count += 1;
        Ok(true)
    }

    pub fn build(self) -> Graph {
        Graph { n: self.n, words: self.words, adjacency: self.adjacency, edge_count: self.edge_count }
    }
}

/// Reads an ASCII DIMACS clq graph.
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Graph> {
    let mut builder: Option<GraphBuilder> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        let err = |msg: String| Error::Parse { line: lineno, msg };
        match tag {
            "c" => {}
            "p" => {
                if builder.is_some() {
                    return Err(err("duplicate problem line".into()));
                }
                let format = tokens.next().ok_or_else(|| err("missing format in problem line".into()))?;
                if format != "edge" && format != "col" {
                    return Err(err(format!("unsupported problem format `{format}`")));
                }
                let n = parse_int(tokens.next(), lineno, "vertex count")?;
                // declared edge count is advisory; files in the wild often
                // count duplicate lines
                parse_int(tokens.next(), lineno, "edge count")?;
                if n == 0 {
                    return Err(err("vertex count must be positive".into()));
                }
                builder = Some(GraphBuilder::new(n)?);
            }
            "e" => {
                let b = builder.as_mut().ok_or_else(|| err("edge line before problem line".into()))?;
                let i = parse_int(tokens.next(), lineno, "edge endpoint")?;
                let j = parse_int(tokens.next(), lineno, "edge endpoint")?;
                for v in [i, j] {
                    if v == 0 || v > b.n {
                        return Err(err(format!("vertex id {v} outside [1, {}]", b.n)));
                    }
                }
                if i == j {
                    return Err(err(format!("self-loop on vertex {i}")));
                }
                b.add_edge(i - 1, j - 1)?;
            }
            "n" => {}
            other => return Err(err(format!("unknown line type `{other}`"))),
        }
    }
    builder.map(GraphBuilder::build).ok_or(Error::Parse { line: 0, msg: "missing problem line".into() })
}

pub fn parse_dimacs_str(text: &str) -> Result<Graph> {
    parse_dimacs(text.as_bytes())
}

fn parse_int(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse::<usize>()
        .map_err(|_| Error::Parse { line, msg: format!("{what} `{tok}` is not a non-negative integer") })
}

/// A clique of a specific graph, with sorted 0-based vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clique {
    vertices: Vec<usize>,
    maximal: bool,
}

impl Clique {
    /// Validates `vertices` against `g`; duplicates are removed.
    pub fn new(g: &Graph, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if !g.is_clique(&vertices)? {
            let (i, j) = g.first_non_adjacent_pair(&vertices)?.expect("non-clique has a bad pair");
            return Err(Error::NotAClique(i, j));
        }
        let maximal = g.is_maximal_clique(&vertices)?;
        Ok(Self { vertices, maximal })
    }

    /// Parses 1-based ids such as `"1,2,5"`.
    pub fn parse_one_based(g: &Graph, text: &str) -> Result<Self> {
        let ids = text
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("vertex id `{t}` is not an integer")))
                    .and_then(|v| {
                        if v == 0 || v > g.n() {
                            Err(Error::VertexOutOfRange { vertex: v, n: g.n() })
                        } else {
                            Ok(v - 1)
                        }
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, ids).map_err(|e| match e {
            Error::NotAClique(i, j) => {
                Error::InvalidParameter(format!("vertices {} and {} are not adjacent", i + 1, j + 1))
            }
            e => e,
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v + 1).collect()
    }

    /// Adds vertices in ascending id order while the set stays a clique.
    pub fn extend_greedy(&self, g: &Graph) -> Clique {
        let mut vertices = self.vertices.clone();
        let mut common = g.common_neighbors(&vertices);
        while let Some(v) = bitset::first(&common) {
            vertices.push(v);
            bitset::and_assign(&mut common, g.row(v));
        }
        vertices.sort_unstable();
        Clique { vertices, maximal: true }
    }
}

impl Serialize for Clique {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Clique", 3)?;
        st.serialize_field("vertices", &self.one_based())?;
        st.serialize_field("size", &self.size())?;
        st.serialize_field("maximal", &self.maximal)?;
        st.end()
    }
}

/// Quartile convention for [`DegreeStats`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuartileMethod {
    /// Order statistic at position `p (n + 1)`, linearly interpolated and
    /// clamped to the sample range (Minitab / `QUARTILE.EXC`).
    #[default]
    Exclusive,
    /// Order statistic at position `p (n - 1) + 1` (numpy default /
    /// `QUARTILE.INC`).
    Inclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub median: f64,
    pub iqr: f64,
}

impl DegreeStats {
    pub fn from_values(mut values: Vec<f64>, method: QuartileMethod) -> Self {
        values.sort_by(f64::total_cmp);
        let q1 = quantile(&values, 0.25, method);
        let q3 = quantile(&values, 0.75, method);
        DegreeStats { median: quantile(&values, 0.5, method), iqr: q3 - q1 }
    }
}

fn quantile(sorted: &[f64], p: f64, method: QuartileMethod) -> f64 {
    let n = sorted.len();
    // 1-based fractional position
    let pos = match method {
        QuartileMethod::Exclusive => p * (n as f64 + 1.0),
        QuartileMethod::Inclusive => p * (n as f64 - 1.0) + 1.0,
    };
    let pos = pos.clamp(1.0, n as f64);
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo >= n {
        sorted[n - 1]
    } else {
        sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        parse_dimacs_str("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap()
    }

    #[test]
    fn parses_triangle() {
        let g = k3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_clique(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn duplicate_and_reversed_edges_collapse() {
        let g = parse_dimacs_str("c hi\np edge 3 4\ne 1 2\ne 2 1\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            "e 1 2\n",
            "p edge 3 1\np edge 3 1\n",
            "p edge 3 1\ne 1 4\n",
            "p edge 3 1\ne 0 2\n",
            "p edge 3 1\ne 1 x\n",
            "p edge 3 1\ne 2 2\n",
            "p edge three 1\n",
            "c only comments\n",
        ];
        for text in cases {
            assert!(parse_dimacs_str(text).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn figure1_structure() {
        let g = Graph::figure1();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 2);
        assert!(g.is_clique(&[0, 1]).unwrap());
        assert!(g.is_clique(&[2, 3, 4]).unwrap());
        // vertices 1 and 5 are not adjacent
        assert!(!g.is_clique(&[0, 1, 4]).unwrap());
    }

    #[test]
    fn maximality() {
        let g = Graph::figure1();
        assert!(g.is_maximal_clique(&[0, 1]).unwrap());
        assert!(g.is_maximal_clique(&[2, 3, 4]).unwrap());
        assert!(!k3().is_maximal_clique(&[0, 1]).unwrap());
        assert!(matches!(g.is_maximal_clique(&[0, 4]), Err(Error::NotAClique(0, 4))));
    }

    #[test]
    fn clique_predicates_reject_bad_input() {
        let g = k3();
        assert!(matches!(g.is_clique(&[]), Err(Error::EmptyVertexSet)));
        assert!(matches!(g.is_clique(&[0, 3]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn characteristic_vectors() {
        let g = Graph::figure1();
        let c = Clique::new(&g, vec![0, 1]).unwrap();
        assert_eq!(g.characteristic_vector::<f64>(&c).as_slice(), &[0.5, 0.5, 0.0, 0.0, 0.0]);
        let c = Clique::new(&g, vec![4, 3, 2]).unwrap();
        let x = g.characteristic_vector::<f64>(&c);
        assert_eq!(x.as_slice(), &[0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let c = Clique::new(&g, vec![3]).unwrap();
        assert_eq!(g.characteristic_vector::<f64>(&c).as_slice(), &[0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn greedy_extension_is_ascending() {
        let g = k3();
        let c = Clique::new(&g, vec![0, 1]).unwrap();
        assert!(!c.is_maximal());
        let e = c.extend_greedy(&g);
        assert_eq!(e.vertices(), &[0, 1, 2]);
        assert!(g.is_maximal_clique(e.vertices()).unwrap());
    }

    #[test]
    fn degree_stats_of_regular_graphs() {
        let s = k3().degree_stats(None, QuartileMethod::Exclusive).unwrap();
        assert_eq!((s.median, s.iqr), (2.0, 0.0));
        let h = Graph::hamming(8, 4).unwrap();
        assert_eq!(h.n(), 256);
        assert_eq!(h.edge_count(), 20864);
        let s = h.degree_stats(None, QuartileMethod::Inclusive).unwrap();
        assert_eq!((s.median, s.iqr), (163.0, 0.0));
        assert!(k3().degree_stats(Some(&[]), QuartileMethod::Exclusive).is_err());
    }

    #[test]
    fn quartile_conventions() {
        let v: Vec<f64> = (1..=8).map(f64::from).collect();
        let exc = DegreeStats::from_values(v.clone(), QuartileMethod::Exclusive);
        assert_eq!((exc.median, exc.iqr), (4.5, 4.5));
        let inc = DegreeStats::from_values(v, QuartileMethod::Inclusive);
        assert_eq!((inc.median, inc.iqr), (4.5, 3.5));
        let one = DegreeStats::from_values(vec![7.0], QuartileMethod::Exclusive);
        assert_eq!((one.median, one.iqr), (7.0, 0.0));
    }

    #[test]
    fn json_fixture_round_trip() {
        let g = Graph::figure1();
        let doc = g.to_json();
        assert_eq!(doc.adjacency[0], vec![2, 3, 4]);
        let text = serde_json::to_string(&doc).unwrap();
        let back = Graph::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
        let bad = GraphJson { schema_version: 1, n: 2, adjacency: vec![vec![3], vec![]] };
        assert!(Graph::from_json(&bad).is_err());
    }
}
