use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::admg::{is_acyclic, to_dag_with_latents, Admg};
use super::separation::{pmar_pattern_on, PmarVertices};

/// Which mixed graphs the brute-force search ranges over.
///
/// The default is every acyclic directed-edge subset combined with every
/// bidirected-edge subset, coexisting edges included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationDomain {
    /// Allow bidirected edges at all (`false` enumerates DAGs only).
    pub bidirected: bool,
    /// Allow a directed and a bidirected edge between the same pair.
    pub coexisting_edges: bool,
    /// Require the vertex labeled `S` (when present) to have no children.
    pub require_s_sink: bool,
    /// Keep only ancestral graphs (no bidirected edge between a vertex and
    /// one of its ancestors).
    pub ancestral: bool,
}

impl Default for EnumerationDomain {
    fn default() -> Self {
        Self { bidirected: true, coexisting_edges: true, require_s_sink: false, ancestral: false }
    }
}

/// All graphs over `vertices` in `domain` accepted by `keep`, sorted by
/// canonical edge lists.
pub fn enumerate_admgs<F>(vertices: &[String], domain: EnumerationDomain, keep: F) -> Vec<Admg>
where
    F: Fn(&Admg) -> bool + Sync,
{
    let n = vertices.len();
    let ordered: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let unordered: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    assert!(ordered.len() < 32, "enumeration limited to small vertex sets");
    let s_index = vertices.iter().position(|v| v == "S");

    let bi_subsets: u64 = if domain.bidirected { 1 << unordered.len() } else { 1 };
    let mut graphs: Vec<Admg> = (0u64..1 << ordered.len())
        .into_par_iter()
        .flat_map_iter(|dmask| {
            let directed: Vec<(usize, usize)> = subset(&ordered, dmask);
            let ok = is_acyclic(n, directed.iter().copied())
                && !(domain.require_s_sink
                    && s_index.is_some_and(|s| directed.iter().any(|e| e.0 == s)));
            let directed = if ok { Some(directed) } else { None };
            let unordered = &unordered;
            let keep = &keep;
            (0..bi_subsets).filter_map(move |bmask| {
                let directed = directed.as_ref()?;
                let bidirected = subset(unordered, bmask);
                if !domain.coexisting_edges
                    && bidirected
                        .iter()
                        .any(|&(a, b)| directed.contains(&(a, b)) || directed.contains(&(b, a)))
                {
                    return None;
                }
                let g = Admg::new(vertices.to_vec(), directed.iter().copied(), bidirected).ok()?;
                if domain.ancestral && !g.is_ancestral() {
                    return None;
                }
                keep(&g).then_some(g)
            })
        })
        .collect();
    graphs.sort_by_cached_key(Admg::canonical_key);
    graphs.dedup();
    graphs
}

/// All ADMGs over `X, Y, Z, S` in `domain` satisfying the PMAR pattern.
pub fn enumerate_pmar_admgs(domain: EnumerationDomain) -> Vec<Admg> {
    let vertices: Vec<String> =
        super::admg::DEFAULT_VERTICES.iter().map(|s| s.to_string()).collect();
    enumerate_admgs(&vertices, domain, |g| {
        let v = PmarVertices::resolve(g).expect("default vertex set");
        pmar_pattern_on(&to_dag_with_latents(g), v)
    })
}

fn subset(items: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect()
}
