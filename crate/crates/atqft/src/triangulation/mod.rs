//! Oriented triangulated pseudo 3-manifolds.
//!
//! Tetrahedra carry an ordering of their vertices `0 < 1 < 2 < 3` and a sign.
//! Face `∂_i T` is the triangle opposite vertex `i`; a gluing `∂_i T ~ ∂_j T'`
//! identifies the faces by the unique order-preserving vertex map and must
//! reverse orientation, i.e. `(-1)^i sign(T) = -(-1)^j sign(T')`.
//!
//! Local edges are indexed `0..6` in the order of [`EDGES`]; opposite edges
//! share a dihedral angle, so angles live on the three classes of
//! [`EDGE_CLASS`]: `{01, 23}`, `{02, 13}`, `{03, 12}`.

mod format;
mod homology;
mod shape;

pub use format::TriangulationFile;
pub use homology::{h2_vanishes, smith_diagonal, truncated_chain_complex, ChainComplex};
pub use shape::{
    epsilon_pair, gauge_transform, is_balanced, is_fully_balanced, pachner_32,
    pachner_32_leveled, ratio_bullet, ratio_star, shape_polytope_point, weight, weights,
    Angle, AngleRef, LeveledShape, PachnerMove, PiMultiple, Shape,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Local edges `(u, v)` with `u < v`.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// Angle class of each local edge.
pub const EDGE_CLASS: [usize; 6] = [0, 1, 2, 2, 1, 0];

/// Index into [`EDGES`] of the edge joining local vertices `u != v`.
pub fn local_edge(u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    EDGES.iter().position(|&p| p == (u, v)).expect("u != v, both < 4")
}

/// Vertices of face `∂_i`, increasing.
pub fn face_vertices(i: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for v in 0..4 {
        if v != i {
            out[k] = v;
            k += 1;
        }
    }
    out
}

/// Face `i` of tetrahedron `tet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceRef {
    pub tet: usize,
    pub face: usize,
}

impl FaceRef {
    pub fn new(tet: usize, face: usize) -> Self {
        Self { tet, face }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
    /// Dense class labels in order of first appearance, and the class count.
    fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut map = vec![usize::MAX; n];
        let mut out = Vec::with_capacity(n);
        let mut count = 0;
        for i in 0..n {
            let r = self.find(i);
            if map[r] == usize::MAX {
                map[r] = count;
                count += 1;
            }
            out.push(map[r]);
        }
        (out, count)
    }
}

/// A glued collection of ordered, signed tetrahedra together with its
/// quotient cell structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoManifold {
    signs: Vec<i8>,
    gluings: Vec<(FaceRef, FaceRef)>,
    partner: Vec<[Option<FaceRef>; 4]>,
    vertex_of: Vec<[usize; 4]>,
    edge_of: Vec<[usize; 6]>,
    face_of: Vec<[usize; 4]>,
    counts: [usize; 4],
    edge_boundary: Vec<bool>,
}

impl PseudoManifold {
    /// Builds the quotient from explicit tetrahedron signs and face pairings.
    pub fn new(signs: Vec<i8>, gluings: &[(FaceRef, FaceRef)]) -> Result<Self> {
        let n = signs.len();
        if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
            return Err(Error::MalformedGluing(format!("sign {s} is not ±1")));
        }
        let mut partner = vec![[None; 4]; n];
        let mut norm = Vec::with_capacity(gluings.len());
        for &(a, b) in gluings {
            for f in [a, b] {
                if f.tet >= n || f.face >= 4 {
                    return Err(Error::MalformedGluing(format!(
                        "face {}.{} does not exist",
                        f.tet, f.face
                    )));
                }
            }
            if a == b {
                return Err(Error::MalformedGluing(format!(
                    "face {}.{} glued to itself",
                    a.tet, a.face
                )));
            }
            for f in [a, b] {
                if partner[f.tet][f.face].is_some() {
                    return Err(Error::MalformedGluing(format!(
                        "face {}.{} used twice",
                        f.tet, f.face
                    )));
                }
            }
            let sa = face_sign(signs[a.tet], a.face);
            let sb = face_sign(signs[b.tet], b.face);
            if sa != -sb {
                return Err(Error::MalformedGluing(format!(
                    "gluing {}.{} ~ {}.{} preserves orientation",
                    a.tet, a.face, b.tet, b.face
                )));
            }
            partner[a.tet][a.face] = Some(b);
            partner[b.tet][b.face] = Some(a);
            norm.push(if a < b { (a, b) } else { (b, a) });
        }
        norm.sort();

        let mut vuf = UnionFind::new(4 * n);
        let mut euf = UnionFind::new(6 * n);
        let mut fuf = UnionFind::new(4 * n);
        for &(a, b) in &norm {
            let (fa, fb) = (face_vertices(a.face), face_vertices(b.face));
            fuf.union(4 * a.tet + a.face, 4 * b.tet + b.face);
            for k in 0..3 {
                vuf.union(4 * a.tet + fa[k], 4 * b.tet + fb[k]);
                for l in k + 1..3 {
                    euf.union(
                        6 * a.tet + local_edge(fa[k], fa[l]),
                        6 * b.tet + local_edge(fb[k], fb[l]),
                    );
                }
            }
        }
        let (vl, nv) = vuf.labels();
        let (el, ne) = euf.labels();
        let (fl, nf) = fuf.labels();
        let vertex_of = (0..n).map(|t| std::array::from_fn(|i| vl[4 * t + i])).collect();
        let edge_of: Vec<[usize; 6]> =
            (0..n).map(|t| std::array::from_fn(|i| el[6 * t + i])).collect();
        let face_of = (0..n).map(|t| std::array::from_fn(|i| fl[4 * t + i])).collect();

        let mut edge_boundary = vec![false; ne];
        for t in 0..n {
            for f in 0..4 {
                if partner[t][f].is_none() {
                    let fv = face_vertices(f);
                    for k in 0..3 {
                        for l in k + 1..3 {
                            edge_boundary[edge_of[t][local_edge(fv[k], fv[l])]] = true;
                        }
                    }
                }
            }
        }
        Ok(Self {
            signs,
            gluings: norm,
            partner,
            vertex_of,
            edge_of,
            face_of,
            counts: [nv, ne, nf, n],
            edge_boundary,
        })
    }

    /// Builds from face pairings alone, choosing signs so every gluing
    /// reverses orientation. The first tetrahedron of each component is `+1`.
    pub fn oriented(n_tets: usize, gluings: &[(FaceRef, FaceRef)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n_tets];
        for &(a, b) in gluings {
            if a.tet >= n_tets || b.tet >= n_tets || a.face >= 4 || b.face >= 4 {
                return Err(Error::MalformedGluing(format!(
                    "gluing {}.{} ~ {}.{} is out of range",
                    a.tet, a.face, b.tet, b.face
                )));
            }
            // sign(b) = -(-1)^{i+j} sign(a)
            let rel: i8 = if (a.face + b.face) % 2 == 0 { -1 } else { 1 };
            adj[a.tet].push((b.tet, rel));
            adj[b.tet].push((a.tet, rel));
        }
        let mut signs = vec![0i8; n_tets];
        for root in 0..n_tets {
            if signs[root] != 0 {
                continue;
            }
            signs[root] = 1;
            let mut stack = vec![root];
            while let Some(t) = stack.pop() {
                for &(u, rel) in &adj[t] {
                    let want = signs[t] * rel;
                    if signs[u] == 0 {
                        signs[u] = want;
                        stack.push(u);
                    } else if signs[u] != want {
                        return Err(Error::MalformedGluing(
                            "gluings admit no consistent orientation".into(),
                        ));
                    }
                }
            }
        }
        Self::new(signs, gluings)
    }

    /// The figure-eight knot complement: `T₊` (index 0) and `T₋` (index 1)
    /// with `∂_{2i+j} T₊ ~ ∂_{2-2i+j} T₋`.
    pub fn figure_eight() -> Self {
        let mut g = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                g.push((FaceRef::new(0, 2 * i + j), FaceRef::new(1, 2 - 2 * i + j)));
            }
        }
        Self::new(vec![1, -1], &g).expect("figure-eight gluing is valid")
    }

    /// Three positive tetrahedra triangulating the `5₂` knot complement.
    pub fn five_two() -> Self {
        let f = FaceRef::new;
        let g = [
            (f(0, 3), f(1, 0)),
            (f(0, 0), f(2, 3)),
            (f(0, 1), f(2, 2)),
            (f(0, 2), f(1, 3)),
            (f(2, 1), f(1, 2)),
            (f(2, 0), f(1, 1)),
        ];
        Self::new(vec![1, 1, 1], &g).expect("5_2 gluing is valid")
    }

    /// One tetrahedron, nothing glued.
    pub fn single_tetrahedron() -> Self {
        Self::new(vec![1], &[]).expect("trivial")
    }

    /// Suspension of a triangle: three tetrahedra `[T, P_i, P_j, B]` around
    /// the central edge `T B`, which is local edge `03` in each.
    pub fn triangle_suspension() -> Self {
        // vertex order T < P1 < P2 < P3 < B
        // t0 = [T,P1,P2,B], t1 = [T,P2,P3,B], t2 = [T,P1,P3,B]
        let f = FaceRef::new;
        let g = [
            (f(0, 1), f(1, 2)), // [T,P2,B]
            (f(1, 1), f(2, 1)), // [T,P3,B]
            (f(0, 2), f(2, 2)), // [T,P1,B]
        ];
        Self::oriented(3, &g).expect("suspension gluing is valid")
    }

    pub fn n_tets(&self) -> usize {
        self.signs.len()
    }

    /// `(|Δ₀|, |Δ₁|, |Δ₂|, |Δ₃|)`.
    pub fn census(&self) -> [usize; 4] {
        self.counts
    }

    pub fn n_edges(&self) -> usize {
        self.counts[1]
    }

    pub fn sign(&self, t: usize) -> i8 {
        self.signs[t]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Face pairings, each with the smaller face first, sorted.
    pub fn gluings(&self) -> &[(FaceRef, FaceRef)] {
        &self.gluings
    }

    pub fn partner(&self, f: FaceRef) -> Option<FaceRef> {
        self.partner[f.tet][f.face]
    }

    /// `φ_{3,0}`: the vertex class of local vertex `v` of `t`.
    pub fn vertex_class(&self, t: usize, v: usize) -> usize {
        self.vertex_of[t][v]
    }

    /// `φ^{3,1}`: the edge class of local edge `le` of `t`.
    pub fn edge_class(&self, t: usize, le: usize) -> usize {
        self.edge_of[t][le]
    }

    /// `φ_{3,2}`: the face class of `∂_f t`.
    pub fn face_class(&self, t: usize, f: usize) -> usize {
        self.face_of[t][f]
    }

    /// Tetrahedral edges `(t, le)` lying over edge `e`.
    pub fn tet_edges_over(&self, e: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, row) in self.edge_of.iter().enumerate() {
            for (le, &x) in row.iter().enumerate() {
                if x == e {
                    out.push((t, le));
                }
            }
        }
        out
    }

    /// An edge is internal when no unglued face contains it.
    pub fn is_internal(&self, e: usize) -> bool {
        !self.edge_boundary[e]
    }

    /// Unglued faces split by sign `(-1)^i sign(T)` into `(∂₊X, ∂₋X)`.
    pub fn boundary_faces(&self) -> (Vec<FaceRef>, Vec<FaceRef>) {
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for t in 0..self.n_tets() {
            for f in 0..4 {
                if self.partner[t][f].is_none() {
                    let r = FaceRef::new(t, f);
                    if face_sign(self.signs[t], f) > 0 {
                        plus.push(r);
                    } else {
                        minus.push(r);
                    }
                }
            }
        }
        (plus, minus)
    }

    /// `self ⊔ other`, with `other`'s tetrahedra renumbered after ours.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let off = self.n_tets();
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        let mut g = self.gluings.clone();
        g.extend(other.gluings.iter().map(|&(a, b)| {
            (
                FaceRef::new(a.tet + off, a.face),
                FaceRef::new(b.tet + off, b.face),
            )
        }));
        Self::new(signs, &g).expect("union of valid pieces")
    }
}

/// `sign(∂_i T) = (-1)^i sign(T)`.
pub fn face_sign(sign: i8, i: usize) -> i8 {
    if i % 2 == 0 {
        sign
    } else {
        -sign
    }
}
