use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Vertex labels used when a graph does not declare its own.
pub const DEFAULT_VERTICES: [&str; 4] = ["X", "Y", "Z", "S"];

/// Acyclic directed mixed graph over labeled vertices.
///
/// Bidirected edges are stored with the smaller index first. A directed and
/// a bidirected edge may join the same pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Admg {
    vertices: Vec<String>,
    directed: BTreeSet<(usize, usize)>,
    bidirected: BTreeSet<(usize, usize)>,
}

impl Admg {
    pub fn new(
        vertices: Vec<String>,
        directed: impl IntoIterator<Item = (usize, usize)>,
        bidirected: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidValue(format!("duplicate vertex {v:?}")));
            }
        }
        let check = |(a, b): (usize, usize)| -> Result<()> {
            if a >= n || b >= n {
                return Err(Error::InvalidValue(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidValue(format!("self-loop on {}", vertices[a])));
            }
            Ok(())
        };
        let directed: BTreeSet<_> = directed.into_iter().collect();
        for &e in &directed {
            check(e)?;
        }
        let mut bi = BTreeSet::new();
        for (a, b) in bidirected {
            check((a, b))?;
            bi.insert((a.min(b), a.max(b)));
        }
        let g = Self { vertices, directed, bidirected: bi };
        if !is_acyclic(n, g.directed.iter().copied()) {
            return Err(Error::CyclicGraph);
        }
        Ok(g)
    }

    /// Graph over `X, Y, Z, S` from labeled edge lists.
    pub fn from_labels(directed: &[(&str, &str)], bidirected: &[(&str, &str)]) -> Result<Self> {
        let vertices: Vec<String> = DEFAULT_VERTICES.iter().map(|s| s.to_string()).collect();
        Self::from_labeled(vertices, directed, bidirected)
    }

    pub fn from_labeled(
        vertices: Vec<String>,
        directed: &[(&str, &str)],
        bidirected: &[(&str, &str)],
    ) -> Result<Self> {
        let idx = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let d = directed
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let b = bidirected
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, d, b)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn directed(&self) -> &BTreeSet<(usize, usize)> {
        &self.directed
    }

    pub fn bidirected(&self) -> &BTreeSet<(usize, usize)> {
        &self.bidirected
    }

    pub fn num_edges(&self) -> usize {
        self.directed.len() + self.bidirected.len()
    }

    pub fn parents(&self, v: usize) -> Vec<usize> {
        self.directed.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.directed.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }

    /// Strict ancestors of `v` along directed edges.
    pub fn ancestors(&self, v: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for p in self.parents(u) {
                if out.insert(p) {
                    stack.push(p);
                }
            }
        }
        out
    }

    /// Whether no bidirected edge joins a vertex to one of its ancestors.
    pub fn is_ancestral(&self) -> bool {
        self.bidirected
            .iter()
            .all(|&(a, b)| !self.ancestors(a).contains(&b) && !self.ancestors(b).contains(&a))
    }

    pub fn has_coexisting_edges(&self) -> bool {
        self.bidirected
            .iter()
            .any(|&(a, b)| self.directed.contains(&(a, b)) || self.directed.contains(&(b, a)))
    }

    /// Canonical sort key: sorted directed then sorted bidirected edge lists.
    pub fn canonical_key(&self) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
        (
            self.directed.iter().copied().collect(),
            self.bidirected.iter().copied().collect(),
        )
    }
}

impl fmt::Display for Admg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(a, b) in &self.directed {
            writeln!(f, "{} -> {}", self.vertices[a], self.vertices[b])?;
        }
        for &(a, b) in &self.bidirected {
            writeln!(f, "{} <-> {}", self.vertices[a], self.vertices[b])?;
        }
        Ok(())
    }
}

/// Directed acyclic graph, possibly with synthesized latent vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    pub vertices: Vec<String>,
    pub latent: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Dag {
    /// Builds a DAG; acyclicity is not checked here (see [`topological_order`]).
    pub fn new(vertices: Vec<String>, latent: Vec<bool>, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let n = vertices.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(a, b) in &edges {
            parents[b].push(a);
            children[a].push(b);
        }
        Self { vertices, latent, edges, parents, children }
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }
}

/// Replaces every bidirected edge `a <-> b` by a fresh parentless latent
/// `U_k -> a, U_k -> b`. Observed vertices keep their indices; latents are
/// appended in canonical bidirected-edge order.
pub fn to_dag_with_latents(g: &Admg) -> Dag {
    let mut vertices = g.vertices.clone();
    let mut latent = vec![false; g.n()];
    let mut edges: Vec<(usize, usize)> = g.directed.iter().copied().collect();
    for (k, &(a, b)) in g.bidirected.iter().enumerate() {
        let u = vertices.len();
        vertices.push(format!("U{}", k + 1));
        latent.push(true);
        edges.push((u, a));
        edges.push((u, b));
    }
    Dag::new(vertices, latent, edges)
}

/// Kahn's algorithm, always emitting the smallest available index first.
pub fn topological_order(d: &Dag) -> Result<Vec<usize>> {
    let n = d.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| d.parents(v).len()).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in d.children(v) {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(Error::CyclicGraph)
    }
}

pub(crate) fn is_acyclic(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut children = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (a, b) in edges {
        children[a].push(b);
        indeg[b] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                stack.push(c);
            }
        }
    }
    seen == n
}
