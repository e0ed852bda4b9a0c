//! q-uniform hypergraphs, oriented hyperedges, balls and tangle-freeness.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// A q-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored as strictly increasing q-tuples in lexicographic order.
/// The oriented hyperedge `(v -> e)`, where `v` is the vertex in position
/// `pos` of edge `e`, has the dense id `e * q + pos`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    q: usize,
    /// Flattened edge list, `m * q` entries.
    edges: Vec<usize>,
    /// For each vertex, the oriented ids `(v -> e)` in increasing order.
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary-order edges. Each edge is sorted;
    /// repeated vertices, out-of-range ids and duplicate edges are errors.
    pub fn new(n: usize, q: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidHypergraph(format!("uniformity q = {q} < 2")));
        }
        if n == 0 {
            return Err(Error::InvalidHypergraph("vertex count is zero".into()));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for mut e in edges {
            if e.len() != q {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {e:?} has {} vertices, expected {q}",
                    e.len()
                )));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {e:?} repeats a vertex"
                )));
            }
            if let Some(&v) = e.last().filter(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "vertex {v} out of range for n = {n}"
                )));
            }
            canon.push(e);
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].clone()));
        }
        Ok(Self::from_canonical(n, q, canon.concat()))
    }

    /// Builds from an already canonical flat edge list. Caller guarantees
    /// sorted distinct tuples in lexicographic order without duplicates.
    pub(crate) fn from_canonical(n: usize, q: usize, edges: Vec<usize>) -> Self {
        debug_assert_eq!(edges.len() % q, 0);
        let mut incidence = vec![Vec::new(); n];
        for (id, &v) in edges.iter().enumerate() {
            incidence[v].push(id);
        }
        Hypergraph {
            n,
            q,
            edges,
            incidence,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.edges.len() / self.q
    }

    /// Number of oriented hyperedges, `q * m`.
    pub fn oriented_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e * self.q..(e + 1) * self.q]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks_exact(self.q)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        self.edges.len() as f64 / self.n as f64
    }

    /// Oriented ids `(v -> e)` for all edges `e` containing `v`.
    pub fn incident_oriented(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Edge indices containing `v`.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incidence[v].iter().map(move |&id| id / self.q)
    }

    /// Dense id of `(v -> e)`, or `None` if `v` is not in `e`.
    pub fn oriented_id(&self, v: usize, e: usize) -> Option<usize> {
        self.edge(e)
            .binary_search(&v)
            .ok()
            .map(|pos| e * self.q + pos)
    }

    /// Inverse of [`Self::oriented_id`]: `(vertex, edge)`.
    pub fn oriented_pair(&self, id: usize) -> (usize, usize) {
        (self.edges[id], id / self.q)
    }

    /// The tail vertex of oriented id `id`.
    pub fn oriented_vertex(&self, id: usize) -> usize {
        self.edges[id]
    }

    /// Pair-incidence adjacency: `A_ij` counts the edges containing both.
    pub fn adjacency_matrix(&self) -> CsrMatrix<i64> {
        let mut trip = Vec::with_capacity(self.m() * self.q * (self.q - 1));
        for e in self.edges() {
            for &a in e {
                for &b in e {
                    if a != b {
                        trip.push((a, b, 1i64));
                    }
                }
            }
        }
        CsrMatrix::from_triplets(self.n, self.n, &trip)
    }

    pub fn degree_matrix(&self) -> CsrMatrix<i64> {
        let d: Vec<i64> = self.incidence.iter().map(|l| l.len() as i64).collect();
        CsrMatrix::diagonal(&d)
    }

    /// Breadth-first ball of radius `t` around `root`. One hyperedge hop
    /// counts as distance 1; the ball holds every edge that contains a vertex
    /// at distance at most `t - 1`.
    pub fn ball(&self, root: usize, t: usize) -> Ball {
        assert!(root < self.n, "root {root} out of range");
        let mut dist = vec![usize::MAX; self.n];
        dist[root] = 0;
        let mut vertices = vec![root];
        let mut edge_seen = HashSet::new();
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= t {
                continue;
            }
            for e in self.incident_edges(u) {
                if !edge_seen.insert(e) {
                    continue;
                }
                edges.push(e);
                for &w in self.edge(e) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        vertices.push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
        let distances = vertices.iter().map(|&v| dist[v]).collect();
        edges.sort_unstable();
        Ball {
            root,
            radius: t,
            vertices,
            edges,
            distances,
        }
    }

    /// Cycle excess of the factor graph of `ball(v, radius)`.
    pub fn ball_excess(&self, v: usize, radius: usize) -> usize {
        self.ball(v, radius).excess(self.q)
    }

    /// `(true, None)` if every radius-`radius` ball contains at most one
    /// cycle, otherwise `(false, Some(witness))` for the smallest offending
    /// vertex.
    pub fn is_tangle_free(&self, radius: usize) -> (bool, Option<usize>) {
        match (0..self.n).find(|&v| self.ball_excess(v, radius) > 1) {
            Some(w) => (false, Some(w)),
            None => (true, None),
        }
    }

    /// Writes the text format: `n q m` then one sorted edge per line.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.n, self.q, self.m())?;
        let mut line = String::new();
        for e in self.edges() {
            line.clear();
            for (k, v) in e.iter().enumerate() {
                if k > 0 {
                    line.push(' ');
                }
                write!(line, "{v}").unwrap();
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let nums = trimmed
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("not a non-negative integer: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match header {
                None => {
                    let [n, q, m] = nums[..] else {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "header must be `n q m`".into(),
                        });
                    };
                    header = Some((n, q, m));
                }
                Some((_, q, _)) => {
                    if nums.len() != q {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("expected {q} vertex ids, found {}", nums.len()),
                        });
                    }
                    edges.push(nums);
                }
            }
        }
        let (n, q, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Hypergraph::new(n, q, edges)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(f);
        self.write_text(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_text(std::io::BufReader::new(f))
    }
}

/// A ball around a root vertex. `distances[k]` is the distance of
/// `vertices[k]`; vertices appear in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub root: usize,
    pub radius: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub distances: Vec<usize>,
}

impl Ball {
    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.vertices.iter().copied().collect()
    }

    /// Cycle excess `incidences - vertices - edges + 1` of the connected
    /// factor graph. Every vertex of a ball edge lies in the ball.
    pub fn excess(&self, q: usize) -> usize {
        let inc = self.edges.len() * q;
        (inc + 1) - (self.vertices.len() + self.edges.len())
    }
}
