use super::admg::{to_dag_with_latents, Admg, Dag};
use crate::error::{Error, Result};

/// Reachability ("Bayes-ball") d-separation test on a DAG.
///
/// `a`, `b` and `c` must be pairwise disjoint.
pub(crate) fn d_separated(d: &Dag, a: &[usize], b: &[usize], c: &[usize]) -> bool {
    let n = d.n();
    let mut in_c = vec![false; n];
    for &v in c {
        in_c[v] = true;
    }
    let mut in_b = vec![false; n];
    for &v in b {
        in_b[v] = true;
    }
    // Ancestors of the conditioning set, including itself.
    let mut anc_c = in_c.clone();
    let mut stack: Vec<usize> = c.to_vec();
    while let Some(u) = stack.pop() {
        for &p in d.parents(u) {
            if !anc_c[p] {
                anc_c[p] = true;
                stack.push(p);
            }
        }
    }

    // visited[v][0]: reached from a child (moving up), [1]: from a parent.
    let mut visited = vec![[false; 2]; n];
    let mut queue: Vec<(usize, usize)> = a.iter().map(|&v| (v, 0)).collect();
    while let Some((v, dir)) = queue.pop() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        if !in_c[v] && in_b[v] {
            return false;
        }
        if dir == 0 {
            if !in_c[v] {
                queue.extend(d.parents(v).iter().map(|&p| (p, 0)));
                queue.extend(d.children(v).iter().map(|&ch| (ch, 1)));
            }
        } else {
            if !in_c[v] {
                queue.extend(d.children(v).iter().map(|&ch| (ch, 1)));
            }
            if anc_c[v] {
                queue.extend(d.parents(v).iter().map(|&p| (p, 0)));
            }
        }
    }
    true
}

fn check_sets(n: usize, a: &[usize], b: &[usize], c: &[usize]) -> Result<()> {
    let mut owner = vec![0u8; n];
    for (tag, set) in [(1u8, a), (2, b), (3, c)] {
        for &v in set {
            if v >= n {
                return Err(Error::InvalidValue(format!("vertex index {v} out of range")));
            }
            if owner[v] != 0 && owner[v] != tag {
                return Err(Error::OverlappingSets);
            }
            owner[v] = tag;
        }
    }
    Ok(())
}

/// m-separation of `a` and `b` given `c` in `g`, decided by d-separation in
/// the latent-augmented DAG.
pub fn m_separated(g: &Admg, a: &[usize], b: &[usize], c: &[usize]) -> Result<bool> {
    check_sets(g.n(), a, b, c)?;
    Ok(d_separated(&to_dag_with_latents(g), a, b, c))
}

/// Indices of the four named vertices of a PMAR graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PmarVertices {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub s: usize,
}

impl PmarVertices {
    pub fn resolve(g: &Admg) -> Result<Self> {
        if g.n() != 4 {
            return Err(Error::WrongVertexSet);
        }
        let get = |l: &str| g.index_of(l).ok_or(Error::WrongVertexSet);
        Ok(Self { x: get("X")?, y: get("Y")?, z: get("Z")?, s: get("S")? })
    }
}

/// `X` dependent on `Y`, `Y` dependent on `S` marginally and given `X`, and
/// `Y` independent of `S` given `{X, Z}`.
pub fn is_pmar_pattern(g: &Admg) -> Result<bool> {
    let v = PmarVertices::resolve(g)?;
    Ok(pmar_pattern_on(&to_dag_with_latents(g), v))
}

pub(crate) fn pmar_pattern_on(d: &Dag, v: PmarVertices) -> bool {
    !d_separated(d, &[v.x], &[v.y], &[])
        && !d_separated(d, &[v.y], &[v.s], &[])
        && !d_separated(d, &[v.y], &[v.s], &[v.x])
        && d_separated(d, &[v.y], &[v.s], &[v.x, v.z])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn chain_is_blocked() {
        let g = Admg::from_labeled(labels(&["X", "Z", "Y"]), &[("X", "Z"), ("Z", "Y")], &[])
            .unwrap();
        assert!(m_separated(&g, &[0], &[2], &[1]).unwrap());
        assert!(!m_separated(&g, &[0], &[2], &[]).unwrap());
    }

    #[test]
    fn collider_rule() {
        let g = Admg::from_labeled(labels(&["X", "Y", "S"]), &[("X", "S"), ("Y", "S")], &[])
            .unwrap();
        assert!(m_separated(&g, &[0], &[1], &[]).unwrap());
        assert!(!m_separated(&g, &[0], &[1], &[2]).unwrap());
    }

    #[test]
    fn collider_descendant_opens_path() {
        let g = Admg::from_labeled(
            labels(&["X", "Y", "S", "D"]),
            &[("X", "S"), ("Y", "S"), ("S", "D")],
            &[],
        )
        .unwrap();
        assert!(!m_separated(&g, &[0], &[1], &[3]).unwrap());
    }

    #[test]
    fn privileged_ignorable_graph() {
        let g = Admg::from_labels(&[("X", "Y"), ("X", "S"), ("Z", "Y"), ("Z", "S")], &[])
            .unwrap();
        let (x, y, z, s) = (0, 1, 2, 3);
        assert!(m_separated(&g, &[y], &[s], &[x, z]).unwrap());
        assert!(!m_separated(&g, &[y], &[s], &[x]).unwrap());
        assert!(is_pmar_pattern(&g).unwrap());
    }

    #[test]
    fn bidirected_edge_connects() {
        let g = Admg::from_labels(&[("X", "Y")], &[("Y", "S")]).unwrap();
        assert!(!m_separated(&g, &[1], &[3], &[0]).unwrap());
        assert!(!m_separated(&g, &[1], &[3], &[0, 2]).unwrap());
    }

    #[test]
    fn pattern_rejections() {
        let empty = Admg::from_labels(&[], &[]).unwrap();
        assert!(!is_pmar_pattern(&empty).unwrap());
        let direct = Admg::from_labels(
            &[("X", "Y"), ("X", "S"), ("Z", "Y"), ("Z", "S"), ("Y", "S")],
            &[],
        )
        .unwrap();
        assert!(!is_pmar_pattern(&direct).unwrap());
    }

    #[test]
    fn overlapping_sets_rejected() {
        let g = Admg::from_labels(&[("X", "Y")], &[]).unwrap();
        assert!(matches!(m_separated(&g, &[0], &[0], &[]), Err(Error::OverlappingSets)));
        assert!(matches!(m_separated(&g, &[0], &[1], &[1]), Err(Error::OverlappingSets)));
    }

    #[test]
    fn wrong_vertex_set() {
        let g = Admg::from_labeled(labels(&["A", "B"]), &[("A", "B")], &[]).unwrap();
        assert!(matches!(is_pmar_pattern(&g), Err(Error::WrongVertexSet)));
    }
}
