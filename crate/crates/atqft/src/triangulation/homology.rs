//! Integral homology of `X - Δ₀(X)` via vertex truncation.
//!
//! Each tetrahedron becomes a truncated tetrahedron: 12 corner vertices, 6
//! truncated edges plus 12 short edges on the vertex links, 4 hexagons and 4
//! link triangles. Face gluings identify hexagons and everything on them.
//! Gluings are order preserving, so identified cells carry the same local
//! orientation and no signs are needed in the quotient.

use super::{face_vertices, local_edge, PseudoManifold, EDGES, UnionFind};

/// Cellular boundary matrices `d_k: C_k → C_{k-1}` (rows index `C_{k-1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub d1: Vec<Vec<i64>>,
    pub d2: Vec<Vec<i64>>,
    pub d3: Vec<Vec<i64>>,
}

/// Local cells of a truncated tetrahedron.
struct Local {
    /// corner vertex `(u, v)`: the point of edge `uv` next to `u`
    verts: Vec<(usize, usize)>,
    /// oriented 1-cells as (start, end) indices into `verts`
    edges: Vec<(usize, usize)>,
    /// 2-cells as boundary chains over `edges`
    faces: Vec<Vec<(usize, i64)>>,
    /// boundary of the 3-cell over `faces`
    body: Vec<(usize, i64)>,
}

const N_TRUNC: usize = 6;

fn vert(u: usize, v: usize) -> usize {
    // 12 ordered pairs u != v
    4 * u + v - (v > u) as usize - u
}

fn corner_edge(u: usize, f: usize) -> usize {
    // f != u, 3 faces through each vertex
    N_TRUNC + 3 * u + f - (f > u) as usize
}

fn face_others(f: usize, u: usize) -> (usize, usize) {
    let fv = face_vertices(f);
    let o: Vec<usize> = fv.into_iter().filter(|&x| x != u).collect();
    (o[0], o[1])
}

impl Local {
    fn new() -> Self {
        let mut verts = vec![(0, 0); 12];
        for u in 0..4 {
            for v in (0..4).filter(|&v| v != u) {
                verts[vert(u, v)] = (u, v);
            }
        }
        let mut edges = vec![(0, 0); N_TRUNC + 12];
        for (le, &(u, v)) in EDGES.iter().enumerate() {
            edges[le] = (vert(u, v), vert(v, u));
        }
        for u in 0..4 {
            for f in (0..4).filter(|&f| f != u) {
                let (a, b) = face_others(f, u);
                edges[corner_edge(u, f)] = (vert(u, a), vert(u, b));
            }
        }
        let chain = |cycle: &[usize]| -> Vec<(usize, i64)> {
            let mut out = Vec::new();
            for i in 0..cycle.len() {
                let (p, q) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                let (k, s) = edges
                    .iter()
                    .enumerate()
                    .find_map(|(k, &(a, b))| {
                        if (a, b) == (p, q) {
                            Some((k, 1))
                        } else if (a, b) == (q, p) {
                            Some((k, -1))
                        } else {
                            None
                        }
                    })
                    .expect("adjacent corners share an edge");
                out.push((k, s));
            }
            out
        };
        let mut faces = Vec::new();
        for f in 0..4 {
            let [a, b, c] = face_vertices(f);
            faces.push(chain(&[
                vert(a, b),
                vert(b, a),
                vert(b, c),
                vert(c, b),
                vert(c, a),
                vert(a, c),
            ]));
        }
        for u in 0..4 {
            let o: Vec<usize> = (0..4).filter(|&x| x != u).collect();
            faces.push(chain(&[vert(u, o[0]), vert(u, o[1]), vert(u, o[2])]));
        }
        // Hexagons carry the simplicial signs; each triangle's sign is fixed
        // by cancelling its edges against the hexagons.
        let mut body: Vec<(usize, i64)> = (0..4)
            .map(|f| (f, if f % 2 == 0 { 1 } else { -1 }))
            .collect();
        let mut hex_bd = vec![0i64; edges.len()];
        for &(f, s) in &body {
            for &(k, c) in &faces[f] {
                hex_bd[k] += s * c;
            }
        }
        for u in 0..4 {
            let tri = &faces[4 + u];
            let (k, c) = tri[0];
            let s = -hex_bd[k] / c;
            debug_assert!(s == 1 || s == -1);
            debug_assert!(tri.iter().all(|&(k, c)| hex_bd[k] + s * c == 0));
            body.push((4 + u, s));
        }
        Self {
            verts,
            edges,
            faces,
            body,
        }
    }
}

/// Cellular chain complex of the truncated pseudo-manifold.
pub fn truncated_chain_complex(x: &PseudoManifold) -> ChainComplex {
    let loc = Local::new();
    let n = x.n_tets();
    let (nv, ne, nf) = (loc.verts.len(), loc.edges.len(), loc.faces.len());
    let mut u0 = UnionFind::new(nv * n);
    let mut u1 = UnionFind::new(ne * n);
    let mut u2 = UnionFind::new(nf * n);
    for &(a, b) in x.gluings() {
        let (fa, fb) = (face_vertices(a.face), face_vertices(b.face));
        u2.union(nf * a.tet + a.face, nf * b.tet + b.face);
        for p in 0..3 {
            u1.union(
                ne * a.tet + corner_edge(fa[p], a.face),
                ne * b.tet + corner_edge(fb[p], b.face),
            );
            for q in 0..3 {
                if p != q {
                    u0.union(nv * a.tet + vert(fa[p], fa[q]), nv * b.tet + vert(fb[p], fb[q]));
                }
                if p < q {
                    u1.union(
                        ne * a.tet + local_edge(fa[p], fa[q]),
                        ne * b.tet + local_edge(fb[p], fb[q]),
                    );
                }
            }
        }
    }
    let (l0, c0) = u0.labels();
    let (l1, c1) = u1.labels();
    let (l2, c2) = u2.labels();
    let mut d1 = vec![vec![0i64; c1]; c0];
    let mut d2 = vec![vec![0i64; c2]; c1];
    let mut d3 = vec![vec![0i64; n]; c2];
    // Each quotient cell gets its boundary once, from its first representative.
    let mut seen1 = vec![false; c1];
    let mut seen2 = vec![false; c2];
    for t in 0..n {
        for (k, &(s, e)) in loc.edges.iter().enumerate() {
            let g = l1[ne * t + k];
            if !seen1[g] {
                seen1[g] = true;
                d1[l0[nv * t + e]][g] += 1;
                d1[l0[nv * t + s]][g] -= 1;
            }
        }
        for (f, chain) in loc.faces.iter().enumerate() {
            let g = l2[nf * t + f];
            if !seen2[g] {
                seen2[g] = true;
                for &(k, c) in chain {
                    d2[l1[ne * t + k]][g] += c;
                }
            }
        }
        for &(f, s) in &loc.body {
            d3[l2[nf * t + f]][t] += s;
        }
    }
    ChainComplex { d1, d2, d3 }
}

/// Nonzero invariant factors of an integer matrix, positive and in
/// divisibility order.
pub fn smith_diagonal(m: &[Vec<i64>]) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for r in a.iter_mut().skip(t) {
                        r[j] -= q * r[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // bring the smallest remainder in row/column t to the pivot
            let col = min_entry(&a, t..rows, t..t + 1).unwrap();
            let row = min_entry(&a, t..t + 1, t..cols).unwrap();
            if a[col.0][t].abs() <= a[t][row.1].abs() {
                a.swap(t, col.0);
            } else {
                for r in a.iter_mut() {
                    r.swap(t, row.1);
                }
            }
        }
        diag.push(a[t][t].unsigned_abs() as i64);
        t += 1;
    }
    diag
}

fn min_entry(
    a: &[Vec<i128>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a[i][j].abs();
            if v != 0 && best.is_none_or(|b| v < b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

/// Ranks and torsion of `H_k` for `k = 0..=3`: `(betti, torsion factors)`.
pub(crate) fn homology(cc: &ChainComplex, n3: usize) -> [(usize, Vec<i64>); 4] {
    let n = [cc.d1.len(), cc.d2.len(), cc.d3.len(), n3];
    let s = [
        smith_diagonal(&cc.d1),
        smith_diagonal(&cc.d2),
        smith_diagonal(&cc.d3),
    ];
    let rank = |k: usize| if (1..=3).contains(&k) { s[k - 1].len() } else { 0 };
    std::array::from_fn(|k| {
        let betti = n[k] - rank(k) - rank(k + 1);
        let tors = if k < 3 {
            s[k].iter().copied().filter(|&d| d > 1).collect()
        } else {
            Vec::new()
        };
        (betti, tors)
    })
}

/// `H₂(X - Δ₀(X); Z) = 0`.
pub fn h2_vanishes(x: &PseudoManifold) -> bool {
    let cc = truncated_chain_complex(x);
    let h = homology(&cc, x.n_tets());
    h[2].0 == 0 && h[2].1.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let k = b.len();
        a.iter()
            .map(|r| {
                (0..b.first().map_or(0, |x| x.len()))
                    .map(|j| (0..k).map(|l| r[l] * b[l][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn is_zero(m: &[Vec<i64>]) -> bool {
        m.iter().all(|r| r.iter().all(|&v| v == 0))
    }

    #[test]
    fn boundary_squares_to_zero() {
        for x in [
            PseudoManifold::figure_eight(),
            PseudoManifold::five_two(),
            PseudoManifold::single_tetrahedron(),
            PseudoManifold::triangle_suspension(),
        ] {
            let cc = truncated_chain_complex(&x);
            assert!(is_zero(&mul(&cc.d1, &cc.d2)));
            assert!(is_zero(&mul(&cc.d2, &cc.d3)));
        }
    }

    #[test]
    fn knot_complements_look_like_circles() {
        for x in [PseudoManifold::figure_eight(), PseudoManifold::five_two()] {
            let h = homology(&truncated_chain_complex(&x), x.n_tets());
            assert_eq!(h[0], (1, vec![]));
            assert_eq!(h[1], (1, vec![]));
            assert_eq!(h[2], (0, vec![]));
            assert_eq!(h[3], (0, vec![]));
            assert!(h2_vanishes(&x));
        }
    }

    #[test]
    fn ball_is_acyclic() {
        let x = PseudoManifold::single_tetrahedron();
        let h = homology(&truncated_chain_complex(&x), 1);
        assert_eq!(h.map(|p| p.0), [1, 0, 0, 0]);
    }

    #[test]
    fn smith_small_cases() {
        assert_eq!(smith_diagonal(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_diagonal(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(smith_diagonal(&[vec![2], vec![3]]), vec![1]);
        assert_eq!(smith_diagonal(&[vec![6, 0], vec![0, 4]]), vec![2, 12]);
    }
}
