//! Shared oracles for the integration tests.

#![allow(dead_code)]

use pmar::graphs::Admg;
use rand::Rng;

/// Factorized joint `P(x, z) P(y | x, z) P(s | x, z, y)` over small
/// supports, kept alongside its factors so expectations can be computed
/// without going through the table code under test.
pub struct Joint {
    pub y_values: Vec<f64>,
    pub pxz: Vec<Vec<f64>>,
    pub py: Vec<Vec<Vec<f64>>>,
    pub ps: Vec<Vec<Vec<f64>>>,
}

impl Joint {
    pub fn table(&self) -> Vec<Vec<Vec<[f64; 2]>>> {
        let (nx, nz, ny) = (self.pxz.len(), self.pxz[0].len(), self.y_values.len());
        (0..nx)
            .map(|a| {
                (0..nz)
                    .map(|b| {
                        (0..ny)
                            .map(|c| {
                                let m = self.pxz[a][b] * self.py[a][b][c];
                                let s1 = self.ps[a][b][c];
                                [m * (1.0 - s1), m * s1]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// `E[f(X, Z, Y)]` over the full population.
    pub fn expect(&self, f: impl Fn(usize, usize, usize) -> f64) -> f64 {
        let mut t = 0.0;
        for (a, row) in self.pxz.iter().enumerate() {
            for (b, &p) in row.iter().enumerate() {
                for c in 0..self.y_values.len() {
                    t += p * self.py[a][b][c] * f(a, b, c);
                }
            }
        }
        t
    }

    /// `E[Y | X = a]`.
    pub fn regression(&self, a: usize) -> f64 {
        let px: f64 = self.pxz[a].iter().sum();
        let mut t = 0.0;
        for (b, &p) in self.pxz[a].iter().enumerate() {
            for (c, y) in self.y_values.iter().enumerate() {
                t += p * self.py[a][b][c] * y;
            }
        }
        t / px
    }
}

fn simplex<R: Rng>(rng: &mut R, k: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| floor + rng.random::<f64>()).collect();
    let t: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / t).collect()
}

/// Random joint with `Y ⊥ S | X, Z` and all cells positive.
pub fn pmar_joint<R: Rng>(rng: &mut R, nx: usize, nz: usize, ny: usize) -> Joint {
    let flat = simplex(rng, nx * nz, 0.05);
    let pxz = (0..nx).map(|a| flat[a * nz..(a + 1) * nz].to_vec()).collect();
    let py = (0..nx).map(|_| (0..nz).map(|_| simplex(rng, ny, 0.05)).collect()).collect();
    let ps = (0..nx)
        .map(|_| {
            (0..nz)
                .map(|_| {
                    let p = 0.05 + 0.9 * rng.random::<f64>();
                    vec![p; ny]
                })
                .collect()
        })
        .collect();
    let y_values = (0..ny).map(|_| rng.random_range(-2.0..2.0)).collect();
    Joint { y_values, pxz, py, ps }
}

/// Joint where `Z` drives both `Y` and `S`, so `Y ⊥ S | X, Z` holds but
/// `Y ⊥ S | X` fails.
pub fn confounded_joint<R: Rng>(rng: &mut R, nx: usize, nz: usize) -> Joint {
    let flat = simplex(rng, nx * nz, 0.5);
    let pxz = (0..nx).map(|a| flat[a * nz..(a + 1) * nz].to_vec()).collect();
    let step = |b: usize| b as f64 / (nz - 1) as f64;
    let py = (0..nx)
        .map(|_| {
            (0..nz)
                .map(|b| {
                    let p1 = (0.1 + 0.8 * step(b) + rng.random_range(-0.05..0.05)).clamp(0.02, 0.98);
                    vec![1.0 - p1, p1]
                })
                .collect()
        })
        .collect();
    let ps = (0..nx)
        .map(|_| {
            (0..nz)
                .map(|b| {
                    let p = (0.9 - 0.8 * step(b) + rng.random_range(-0.05..0.05)).clamp(0.02, 0.98);
                    vec![p; 2]
                })
                .collect()
        })
        .collect();
    Joint { y_values: vec![0.0, 1.0], pxz, py, ps }
}

/// m-connection by exhaustive enumeration of simple paths in the mixed
/// graph. A path is open given `c` when every collider has a descendant in
/// `c` (itself included) and no non-collider is in `c`.
pub fn m_connected_by_paths(g: &Admg, a: usize, b: usize, c: &[usize]) -> bool {
    let n = g.n();
    // (neighbor, arrowhead at current end, arrowhead at neighbor end)
    let mut adj: Vec<Vec<(usize, bool, bool)>> = vec![Vec::new(); n];
    for &(u, v) in g.directed() {
        adj[u].push((v, false, true));
        adj[v].push((u, true, false));
    }
    for &(u, v) in g.bidirected() {
        adj[u].push((v, true, true));
        adj[v].push((u, true, true));
    }
    let mut anc_c = vec![false; n];
    let mut stack: Vec<usize> = c.to_vec();
    while let Some(v) = stack.pop() {
        if !anc_c[v] {
            anc_c[v] = true;
            stack.extend(g.directed().iter().filter(|e| e.1 == v).map(|e| e.0));
        }
    }
    let in_c = |v: usize| c.contains(&v);

    fn walk(
        v: usize,
        head_into_v: bool,
        target: usize,
        visited: &mut Vec<bool>,
        adj: &[Vec<(usize, bool, bool)>],
        ok: &dyn Fn(usize, bool) -> bool,
    ) -> bool {
        for &(w, head_at_v, head_at_w) in &adj[v] {
            if visited[w] {
                continue;
            }
            let collider = head_into_v && head_at_v;
            if !ok(v, collider) {
                continue;
            }
            if w == target {
                return true;
            }
            visited[w] = true;
            let found = walk(w, head_at_w, target, visited, adj, ok);
            visited[w] = false;
            if found {
                return true;
            }
        }
        false
    }

    let ok = |v: usize, collider: bool| if collider { anc_c[v] } else { !in_c(v) };
    let mut visited = vec![false; n];
    visited[a] = true;
    for &(w, _, head_at_w) in &adj[a] {
        if w == b {
            return true;
        }
        visited[w] = true;
        if walk(w, head_at_w, b, &mut visited, &adj, &ok) {
            return true;
        }
        visited[w] = false;
    }
    false
}
