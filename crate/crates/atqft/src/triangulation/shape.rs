//! Shape structures, weights, the gauge action, shaped 3–2 moves and the
//! Ptolemy ratio maps.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Rational64;

use super::{face_sign, local_edge, FaceRef, PseudoManifold, EDGES, EDGE_CLASS};
use crate::{Error, Real, Result};

/// Weight tolerance for floating angles.
pub const BALANCE_TOL: Real = 1e-12;

/// Scalar type of a dihedral angle.
pub trait Angle:
    Copy + fmt::Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    /// `π num / den`.
    fn pi_frac(num: i64, den: i64) -> Self;
    fn close_to(self, other: Self) -> bool;
    fn radians(self) -> Real;
    fn is_positive(self) -> bool;
}

impl Angle for Real {
    fn zero() -> Self {
        0.0
    }
    fn pi_frac(num: i64, den: i64) -> Self {
        PI * num as Real / den as Real
    }
    fn close_to(self, other: Self) -> bool {
        (self - other).abs() < BALANCE_TOL
    }
    fn radians(self) -> Real {
        self
    }
    fn is_positive(self) -> bool {
        self > 0.0
    }
}

/// An exact rational multiple of `π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiMultiple(pub Rational64);

impl PiMultiple {
    pub fn new(num: i64, den: i64) -> Self {
        Self(Rational64::new(num, den))
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for PiMultiple {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(self.0 + o.0)
    }
}

impl Sub for PiMultiple {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(self.0 - o.0)
    }
}

impl Neg for PiMultiple {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Angle for PiMultiple {
    fn zero() -> Self {
        Self::new(0, 1)
    }
    fn pi_frac(num: i64, den: i64) -> Self {
        Self::new(num, den)
    }
    fn close_to(self, other: Self) -> bool {
        self == other
    }
    fn radians(self) -> Real {
        PI * (*self.0.numer() as Real / *self.0.denom() as Real)
    }
    fn is_positive(self) -> bool {
        self.0 > Rational64::new(0, 1)
    }
}

/// Dihedral angles per tetrahedron, indexed by class: `[α₀₁, α₀₂, α₀₃]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Shape<A> {
    pub angles: Vec<[A; 3]>,
}

impl<A: Angle> Shape<A> {
    pub fn new(angles: Vec<[A; 3]>) -> Self {
        Self { angles }
    }

    /// Every angle `π/3`.
    pub fn symmetric(n_tets: usize) -> Self {
        Self::new(vec![[A::pi_frac(1, 3); 3]; n_tets])
    }

    /// Angle at local edge `le` of `t`.
    pub fn at(&self, t: usize, le: usize) -> A {
        self.angles[t][EDGE_CLASS[le]]
    }

    /// Positive angles summing to `π` in every tetrahedron.
    pub fn is_shape_structure(&self) -> bool {
        self.angles.iter().all(|a| {
            a.iter().all(|x| x.is_positive()) && (a[0] + a[1] + a[2]).close_to(A::pi_frac(1, 1))
        })
    }

    pub fn to_radians(&self) -> Shape<Real> {
        Shape::new(
            self.angles
                .iter()
                .map(|a| [a[0].radians(), a[1].radians(), a[2].radians()])
                .collect(),
        )
    }
}

/// A shape on `Δ₃¹(X)` together with a level.
#[derive(Clone, Debug, PartialEq)]
pub struct LeveledShape {
    pub shape: Shape<Real>,
    pub level: Real,
}

fn check_len<A>(x: &PseudoManifold, shape: &Shape<A>) -> Result<()> {
    if shape.angles.len() != x.n_tets() {
        return Err(Error::PreconditionViolated(format!(
            "shape has {} tetrahedra, manifold has {}",
            shape.angles.len(),
            x.n_tets()
        )));
    }
    Ok(())
}

/// `ω(e)`: the sum of the angles of all tetrahedral edges over `e`.
pub fn weight<A: Angle>(x: &PseudoManifold, shape: &Shape<A>, e: usize) -> Result<A> {
    check_len(x, shape)?;
    if e >= x.n_edges() {
        return Err(Error::UnknownEdge(e));
    }
    Ok(x
        .tet_edges_over(e)
        .into_iter()
        .fold(A::zero(), |s, (t, le)| s + shape.at(t, le)))
}

/// All edge weights, indexed by edge class.
pub fn weights<A: Angle>(x: &PseudoManifold, shape: &Shape<A>) -> Result<Vec<A>> {
    check_len(x, shape)?;
    let mut w = vec![A::zero(); x.n_edges()];
    for (t, a) in shape.angles.iter().enumerate() {
        for le in 0..6 {
            let e = x.edge_class(t, le);
            w[e] = w[e] + a[EDGE_CLASS[le]];
        }
    }
    Ok(w)
}

/// Internal with weight `2π`.
pub fn is_balanced<A: Angle>(x: &PseudoManifold, shape: &Shape<A>, e: usize) -> bool {
    e < x.n_edges()
        && x.is_internal(e)
        && weight(x, shape, e).is_ok_and(|w| w.close_to(A::pi_frac(2, 1)))
}

/// Every edge balanced.
pub fn is_fully_balanced<A: Angle>(x: &PseudoManifold, shape: &Shape<A>) -> bool {
    (0..x.n_edges()).all(|e| is_balanced(x, shape, e))
}

/// A pair of opposite edges of tetrahedron `tet`: an element of `Δ₃^{1/p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleRef {
    pub tet: usize,
    pub class: usize,
}

/// `ε_{a,b}`: zero across tetrahedra, otherwise `±1` according to whether
/// `b` follows `a` in the cyclic order `01 → 02 → 03` of a positive
/// tetrahedron (reversed for a negative one).
pub fn epsilon_pair(x: &PseudoManifold, a: AngleRef, b: AngleRef) -> i8 {
    if a.tet != b.tet || a.class == b.class {
        return 0;
    }
    let follows = (b.class + 3 - a.class) % 3 == 1;
    let s = x.sign(a.tet);
    if follows {
        s
    } else {
        -s
    }
}

/// Applies a gauge function `g: Δ₁(X) → R`.
pub fn gauge_transform(x: &PseudoManifold, ls: &LeveledShape, g: &[Real]) -> Result<LeveledShape> {
    check_len(x, &ls.shape)?;
    if g.len() != x.n_edges() {
        return Err(Error::PreconditionViolated(format!(
            "gauge has {} entries, manifold has {} edges",
            g.len(),
            x.n_edges()
        )));
    }
    if let Some(e) = (0..x.n_edges()).find(|&e| !x.is_internal(e) && g[e] != 0.0) {
        return Err(Error::BoundaryGauge(e));
    }
    let mut angles = ls.shape.angles.clone();
    for (t, row) in angles.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            let a = AngleRef { tet: t, class: k };
            let mut s = 0.0;
            for le in 0..6 {
                let b = AngleRef {
                    tet: t,
                    class: EDGE_CLASS[le],
                };
                s += epsilon_pair(x, a, b) as Real * g[x.edge_class(t, le)];
            }
            *slot += PI * s;
        }
    }
    let mut level = ls.level;
    for (e, &ge) in g.iter().enumerate() {
        if ge != 0.0 {
            let s: Real = x
                .tet_edges_over(e)
                .into_iter()
                .map(|(t, le)| 1.0 / 3.0 - ls.shape.at(t, le) / PI)
                .sum();
            level += ge * s;
        }
    }
    Ok(LeveledShape {
        shape: Shape::new(angles),
        level,
    })
}

/// Result of a shaped 3–2 move.
#[derive(Clone, Debug)]
pub struct PachnerMove<A> {
    pub manifold: PseudoManifold,
    pub shape: Shape<A>,
    /// New index of each old edge; `None` for the removed edge.
    pub edge_map: Vec<Option<usize>>,
    /// `(1/12π) Σ_{a over e} Σ_b ε_{p(a),p(b)} α(b)`.
    pub level_shift: Real,
    /// Indices of the two new tetrahedra.
    pub new_tets: [usize; 2],
}

const TOP: usize = 0;
const BOT: usize = 1;

struct StarTet {
    t: usize,
    /// role of each local vertex: TOP, BOT or 2 + equator index
    role: [usize; 4],
    /// local index of each role present
    local: BTreeMap<usize, usize>,
}

/// Shaped 3–2 move along a balanced edge of degree three.
///
/// The three tetrahedra around `e` are replaced by `t₄` (the top apex and
/// the three equatorial vertices) and `t₅` (the bottom apex and the same
/// equator), appended after the surviving tetrahedra. The angle of `t₄` at
/// the edge to an equatorial vertex is the sum of the two top-side angles
/// meeting there, likewise for `t₅`.
pub fn pachner_32<A: Angle>(
    x: &PseudoManifold,
    shape: &Shape<A>,
    e: usize,
) -> Result<PachnerMove<A>> {
    check_len(x, shape)?;
    if e >= x.n_edges() {
        return Err(Error::UnknownEdge(e));
    }
    let over = x.tet_edges_over(e);
    let tets: BTreeSet<usize> = over.iter().map(|&(t, _)| t).collect();
    if over.len() != 3 || tets.len() != 3 {
        return Err(Error::BadStar(e));
    }
    if !is_balanced(x, shape, e) {
        return Err(Error::NotBalanced(e, weight(x, shape, e)?.radians()));
    }

    // Label the equator by the wedge faces (faces containing e).
    let mut wedge_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut wedge_count: BTreeMap<usize, usize> = BTreeMap::new();
    let mut star = Vec::new();
    for &(t, le) in &over {
        let (u, v) = EDGES[le];
        let others: Vec<usize> = (0..4).filter(|&y| y != u && y != v).collect();
        let mut role = [0; 4];
        role[u] = TOP;
        role[v] = BOT;
        for (i, &y) in others.iter().enumerate() {
            // y lies on the wedge face opposite the other equatorial vertex
            let wf = x.face_class(t, others[1 - i]);
            let n = wedge_ids.len();
            let id = *wedge_ids.entry(wf).or_insert(n);
            *wedge_count.entry(wf).or_insert(0) += 1;
            role[y] = 2 + id;
        }
        let local = role.iter().enumerate().map(|(l, &r)| (r, l)).collect();
        star.push(StarTet { t, role, local });
    }
    if wedge_ids.len() != 3 || wedge_count.values().any(|&c| c != 2) {
        return Err(Error::BadStar(e));
    }
    let star_of: BTreeMap<usize, usize> = star.iter().enumerate().map(|(i, s)| (s.t, i)).collect();

    // Directed edges between roles, read off the local vertex orders.
    let mut dir: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for s in &star {
        for &(p, q) in &EDGES {
            let (rp, rq) = (s.role[p], s.role[q]);
            if (rp, rq) == (TOP, BOT) {
                continue;
            }
            for (key, val) in [((rp, rq), true), ((rq, rp), false)] {
                if let Some(&old) = dir.get(&key) {
                    if old != val {
                        return Err(Error::MalformedGluing(
                            "edge orientations around the star disagree".into(),
                        ));
                    }
                }
                dir.insert(key, val);
            }
        }
    }
    let order = |apex: usize| -> Result<[usize; 4]> {
        let verts = [apex, 2, 3, 4];
        let mut ranked: Vec<(usize, usize)> = verts
            .iter()
            .map(|&a| (verts.iter().filter(|&&b| b != a && dir[&(a, b)]).count(), a))
            .collect();
        ranked.sort_by(|p, q| q.0.cmp(&p.0));
        if ranked.iter().map(|r| r.0).collect::<Vec<_>>() != [3, 2, 1, 0] {
            return Err(Error::MalformedGluing(
                "3-2 move would break the vertex ordering".into(),
            ));
        }
        Ok(std::array::from_fn(|i| ranked[i].1))
    };
    let roles4 = order(TOP)?;
    let roles5 = order(BOT)?;
    let pos = |roles: &[usize; 4], r: usize| roles.iter().position(|&x| x == r).unwrap();

    // Reindex: survivors keep their order, then t4, t5.
    let mut new_index = vec![usize::MAX; x.n_tets()];
    let mut next = 0;
    for (t, slot) in new_index.iter_mut().enumerate() {
        if !star_of.contains_key(&t) {
            *slot = next;
            next += 1;
        }
    }
    let (t4, t5) = (next, next + 1);

    // Star faces away from e, mapped onto faces of t4 / t5.
    let mut face_map: BTreeMap<FaceRef, FaceRef> = BTreeMap::new();
    let mut sign4 = None;
    let mut sign5 = None;
    for s in &star {
        let eq: Vec<usize> = s.role.iter().copied().filter(|&r| r >= 2).collect();
        let missing = (2..5).find(|r| !eq.contains(r)).unwrap();
        for (drop, roles, nt, sg) in [
            (BOT, &roles4, t4, &mut sign4),
            (TOP, &roles5, t5, &mut sign5),
        ] {
            let old = FaceRef::new(s.t, s.local[&drop]);
            let nf = pos(roles, missing);
            face_map.insert(old, FaceRef::new(nt, nf));
            let fs = face_sign(x.sign(s.t), old.face);
            let want = face_sign(fs, nf);
            match *sg {
                None => *sg = Some(want),
                Some(v) if v != want => {
                    return Err(Error::MalformedGluing(
                        "star tetrahedra are inconsistently oriented".into(),
                    ))
                }
                _ => {}
            }
        }
    }

    let mut gluings = Vec::new();
    for &(a, b) in x.gluings() {
        let is_star = |f: FaceRef| star_of.contains_key(&f.tet);
        let is_wedge = |f: FaceRef| is_star(f) && !face_map.contains_key(&f);
        if is_wedge(a) || is_wedge(b) {
            continue;
        }
        let m = |f: FaceRef| {
            face_map
                .get(&f)
                .copied()
                .unwrap_or(FaceRef::new(new_index[f.tet], f.face))
        };
        gluings.push((m(a), m(b)));
    }
    gluings.push((
        FaceRef::new(t4, pos(&roles4, TOP)),
        FaceRef::new(t5, pos(&roles5, BOT)),
    ));
    let mut signs = vec![0i8; next + 2];
    for t in 0..x.n_tets() {
        if new_index[t] != usize::MAX {
            signs[new_index[t]] = x.sign(t);
        }
    }
    signs[t4] = sign4.unwrap();
    signs[t5] = sign5.unwrap();
    let y = PseudoManifold::new(signs, &gluings)?;

    // Angles: sum the two star angles meeting at each apex-equator edge.
    let mut theta = [[A::zero(); 3]; 2];
    for s in &star {
        for l in 0..4 {
            let r = s.role[l];
            if r >= 2 {
                for (side, apex) in [(0, TOP), (1, BOT)] {
                    let le = local_edge(s.local[&apex], l);
                    theta[side][r - 2] = theta[side][r - 2] + shape.at(s.t, le);
                }
            }
        }
    }
    let mut angles = Vec::with_capacity(next + 2);
    for t in 0..x.n_tets() {
        if new_index[t] != usize::MAX {
            angles.push(shape.angles[t]);
        }
    }
    for (side, roles) in [(0, &roles4), (1, &roles5)] {
        let mut a = [A::zero(); 3];
        let apex = if side == 0 { TOP } else { BOT };
        let ap = pos(roles, apex);
        for r in 2..5 {
            a[EDGE_CLASS[local_edge(ap, pos(roles, r))]] = theta[side][r - 2];
        }
        angles.push(a);
    }

    // Old edges to new edges.
    let mut edge_map = vec![None; x.n_edges()];
    for t in 0..x.n_tets() {
        if new_index[t] != usize::MAX {
            for le in 0..6 {
                edge_map[x.edge_class(t, le)] = Some(y.edge_class(new_index[t], le));
            }
        }
    }
    for s in &star {
        for (le, &(p, q)) in EDGES.iter().enumerate() {
            let (rp, rq) = (s.role[p], s.role[q]);
            if (rp, rq) == (TOP, BOT) {
                continue;
            }
            let (nt, roles) = if rp == BOT || rq == BOT {
                (t5, &roles5)
            } else {
                (t4, &roles4)
            };
            edge_map[x.edge_class(s.t, le)] =
                Some(y.edge_class(nt, local_edge(pos(roles, rp), pos(roles, rq))));
        }
    }

    let mut level_shift = 0.0;
    for &(t, le) in &over {
        let a = AngleRef {
            tet: t,
            class: EDGE_CLASS[le],
        };
        for lb in 0..6 {
            let b = AngleRef {
                tet: t,
                class: EDGE_CLASS[lb],
            };
            level_shift += epsilon_pair(x, a, b) as Real * shape.at(t, lb).radians();
        }
    }
    level_shift /= 12.0 * PI;

    Ok(PachnerMove {
        manifold: y,
        shape: Shape::new(angles),
        edge_map,
        level_shift,
        new_tets: [t4, t5],
    })
}

/// 3–2 move on a leveled shape; the level picks up the move's shift.
pub fn pachner_32_leveled(
    x: &PseudoManifold,
    ls: &LeveledShape,
    e: usize,
) -> Result<(PseudoManifold, LeveledShape)> {
    let mv = pachner_32(x, &ls.shape, e)?;
    Ok((
        mv.manifold,
        LeveledShape {
            shape: mv.shape,
            level: ls.level + mv.level_shift,
        },
    ))
}

/// A point in the interior of the shape polytope, or `None` if it is empty.
///
/// Maximises the smallest angle subject to the per-tetrahedron sums (and, when
/// `balanced`, weight `2π` on every internal edge).
pub fn shape_polytope_point(x: &PseudoManifold, balanced: bool) -> Option<Shape<Real>> {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    let n = x.n_tets();
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let m = p.add_var(1.0, (0.0, PI));
    let vars: Vec<[minilp::Variable; 3]> = (0..n)
        .map(|_| std::array::from_fn(|_| p.add_var(0.0, (0.0, PI))))
        .collect();
    for v in &vars {
        p.add_constraint([(v[0], 1.0), (v[1], 1.0), (v[2], 1.0)], ComparisonOp::Eq, PI);
        for &vk in v {
            p.add_constraint([(vk, 1.0), (m, -1.0)], ComparisonOp::Ge, 0.0);
        }
    }
    if balanced {
        for e in (0..x.n_edges()).filter(|&e| x.is_internal(e)) {
            let mut coef = vec![[0.0; 3]; n];
            for (t, le) in x.tet_edges_over(e) {
                coef[t][EDGE_CLASS[le]] += 1.0;
            }
            let terms: Vec<(minilp::Variable, Real)> = coef
                .iter()
                .enumerate()
                .flat_map(|(t, c)| (0..3).filter(|&k| c[k] != 0.0).map(move |k| (t, k, c[k])))
                .map(|(t, k, c)| (vars[t][k], c))
                .collect();
            p.add_constraint(terms.as_slice(), ComparisonOp::Eq, 2.0 * PI);
        }
    }
    let sol = p.solve().ok()?;
    if sol[m] <= 1e-9 {
        return None;
    }
    Some(Shape::new(
        vars.iter().map(|v| [sol[v[0]], sol[v[1]], sol[v[2]]]).collect(),
    ))
}

fn positive(z: (Real, Real), name: &str) -> Result<()> {
    if z.0 > 0.0 && z.1 > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositive(format!("{name} = ({}, {})", z.0, z.1)))
    }
}

/// `x ∙ y = (x₁y₁, x₁y₂ + x₂)`.
pub fn ratio_bullet(x: (Real, Real), y: (Real, Real)) -> Result<(Real, Real)> {
    positive(x, "x")?;
    positive(y, "y")?;
    Ok((x.0 * y.0, x.0 * y.1 + x.1))
}

/// `x ∗ y = (y₁x₂, y₂) / (x₁y₂ + x₂)`.
pub fn ratio_star(x: (Real, Real), y: (Real, Real)) -> Result<(Real, Real)> {
    positive(x, "x")?;
    positive(y, "y")?;
    let d = x.0 * y.1 + x.1;
    Ok((y.0 * x.1 / d, y.1 / d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(n: i64, d: i64) -> PiMultiple {
        PiMultiple::new(n, d)
    }

    fn fig8_shape() -> Shape<Real> {
        Shape::new(vec![[0.7, 1.1, PI - 1.8], [0.9, 0.4, PI - 1.3]])
    }

    #[test]
    fn figure_eight_edge_weights() {
        let x = PseudoManifold::figure_eight();
        let s = fig8_shape();
        let [[ap, bp, cp], [am, bm, cm]] = [s.angles[0], s.angles[1]];
        let w = weights(&x, &s).unwrap();
        let e0 = 2.0 * ap + cp + 2.0 * bm + cm;
        let e1 = 2.0 * bp + cp + 2.0 * am + cm;
        let mut got = w.clone();
        got.sort_by(Real::total_cmp);
        let mut want = vec![e0, e1];
        want.sort_by(Real::total_cmp);
        assert!((got[0] - want[0]).abs() < 1e-14 && (got[1] - want[1]).abs() < 1e-14);
        assert!((w[0] + w[1] - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn figure_eight_balanced_when_w_is_one() {
        // ω(e₀) = 2π holds whenever T₊ and T₋ carry the same angles
        let x = PseudoManifold::figure_eight();
        let (a, b) = (pm(1, 4), pm(5, 12));
        let c = pm(1, 1) - a - b;
        let s = Shape::new(vec![[a, b, c], [a, b, c]]);
        assert!(is_fully_balanced(&x, &s));
        assert!(is_fully_balanced(&x, &Shape::<PiMultiple>::symmetric(2)));
        let mut bad = s.to_radians();
        bad.angles[0][0] += 0.01;
        bad.angles[0][1] -= 0.01;
        assert!(!is_fully_balanced(&x, &bad));
    }

    #[test]
    fn five_two_balance_equations() {
        let x = PseudoManifold::five_two();
        let (a1, c1) = (pm(1, 5), pm(2, 7));
        let b1 = pm(1, 1) - a1 - c1;
        let (a2, c2) = (pm(1, 3), pm(1, 6));
        let b2 = pm(1, 1) - a2 - c2;
        let a3 = PiMultiple((a1.0 + c2.0) / 2);
        let b3 = c1 + b2;
        let c3 = pm(1, 1) - a3 - b3;
        let s = Shape::new(vec![[a1, b1, c1], [a2, b2, c2], [a3, b3, c3]]);
        assert!(is_fully_balanced(&x, &s), "{:?}", weights(&x, &s));
        // and conversely a shape breaking the first equation is not balanced
        let t = Shape::new(vec![[a1, b1, c1], [a2, b2, c2], [a3 + pm(1, 30), b3, c3 - pm(1, 30)]]);
        assert!(!is_fully_balanced(&x, &t));
    }

    #[test]
    fn epsilon_is_skew_and_cyclic() {
        let x = PseudoManifold::figure_eight();
        let r = |tet, class| AngleRef { tet, class };
        assert_eq!(epsilon_pair(&x, r(0, 0), r(1, 1)), 0);
        assert_eq!(epsilon_pair(&x, r(0, 1), r(0, 1)), 0);
        assert_eq!(epsilon_pair(&x, r(0, 0), r(0, 1)), 1);
        assert_eq!(epsilon_pair(&x, r(0, 2), r(0, 0)), 1);
        assert_eq!(epsilon_pair(&x, r(1, 0), r(1, 1)), -1);
        for t in 0..2 {
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(
                        epsilon_pair(&x, r(t, a), r(t, b)),
                        -epsilon_pair(&x, r(t, b), r(t, a))
                    );
                }
            }
        }
    }

    #[test]
    fn gauge_preserves_weights() {
        for x in [PseudoManifold::figure_eight(), PseudoManifold::five_two()] {
            let ls = LeveledShape {
                shape: Shape::symmetric(x.n_tets()),
                level: 0.25,
            };
            let before = weights(&x, &ls.shape).unwrap();
            for t in [0.1, -0.3] {
                let mut g = vec![0.0; x.n_edges()];
                g[0] = t;
                let after = gauge_transform(&x, &ls, &g).unwrap();
                let w = weights(&x, &after.shape).unwrap();
                for (p, q) in before.iter().zip(&w) {
                    assert!((p - q).abs() < 1e-12);
                }
            }
            let zero = gauge_transform(&x, &ls, &vec![0.0; x.n_edges()]).unwrap();
            assert_eq!(zero, ls);
        }
    }

    #[test]
    fn gauge_level_shift() {
        let x = PseudoManifold::figure_eight();
        let ls = LeveledShape {
            shape: fig8_shape(),
            level: 0.0,
        };
        let out = gauge_transform(&x, &ls, &[1.0, 0.0]).unwrap();
        let direct: Real = x
            .tet_edges_over(0)
            .iter()
            .map(|&(t, le)| 1.0 / 3.0 - ls.shape.at(t, le) / PI)
            .sum();
        assert!((out.level - direct).abs() < 1e-15);
    }

    #[test]
    fn gauge_rejects_boundary_edges() {
        let x = PseudoManifold::single_tetrahedron();
        let ls = LeveledShape {
            shape: Shape::symmetric(1),
            level: 0.0,
        };
        let mut g = vec![0.0; 6];
        g[3] = 0.5;
        assert_eq!(gauge_transform(&x, &ls, &g), Err(Error::BoundaryGauge(3)));
    }

    fn suspension_shape<A: Angle>(star: [[A; 3]; 3]) -> Shape<A> {
        // stored as [α01, α02, α03]; the central edge is local 03
        Shape::new(star.iter().map(|&[al, be, ga]| [be, ga, al]).collect())
    }

    #[test]
    fn pachner_symmetric_star() {
        let x = PseudoManifold::triangle_suspension();
        let e = x.edge_class(0, 2);
        let s = suspension_shape([[pm(2, 3), pm(1, 6), pm(1, 6)]; 3]);
        let mv = pachner_32(&x, &s, e).unwrap();
        assert_eq!(mv.manifold.n_tets(), 2);
        assert_eq!(mv.shape.angles, vec![[pm(1, 3); 3]; 2]);
        assert!(mv.shape.is_shape_structure());
    }

    #[test]
    fn pachner_preserves_weights_exactly() {
        let x = PseudoManifold::triangle_suspension();
        let e = x.edge_class(0, 2);
        let (a1, a2) = (pm(7, 12), pm(2, 3));
        let a3 = pm(2, 1) - a1 - a2;
        let s = suspension_shape([
            [a1, pm(1, 5), pm(1, 1) - a1 - pm(1, 5)],
            [a2, pm(1, 7), pm(1, 1) - a2 - pm(1, 7)],
            [a3, pm(1, 6), pm(1, 1) - a3 - pm(1, 6)],
        ]);
        assert!(s.is_shape_structure());
        let mv = pachner_32(&x, &s, e).unwrap();
        assert!(mv.shape.is_shape_structure());
        let (w0, w1) = (weights(&x, &s).unwrap(), weights(&mv.manifold, &mv.shape).unwrap());
        assert_eq!(mv.edge_map[e], None);
        for (old, new) in mv.edge_map.iter().enumerate() {
            if let Some(n) = new {
                assert_eq!(w0[old], w1[*n]);
            }
        }
        assert_eq!(mv.manifold.census()[1], x.census()[1] - 1);
    }

    #[test]
    fn pachner_asymmetric_float() {
        let x = PseudoManifold::triangle_suspension();
        let e = x.edge_class(0, 2);
        let s = suspension_shape([
            [2.0, 0.6, PI - 2.6],
            [2.2, 0.4, PI - 2.6],
            [2.0 * PI - 4.2, 1.0, 4.2 - PI - 1.0],
        ]);
        assert!(s.is_shape_structure());
        let mv = pachner_32(&x, &s, e).unwrap();
        assert!(mv.shape.is_shape_structure(), "{:?}", mv.shape);
        let (w0, w1) = (weights(&x, &s).unwrap(), weights(&mv.manifold, &mv.shape).unwrap());
        for (old, new) in mv.edge_map.iter().enumerate() {
            if let Some(n) = new {
                assert!((w0[old] - w1[*n]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn pachner_errors() {
        let x = PseudoManifold::triangle_suspension();
        let e = x.edge_class(0, 2);
        let s = suspension_shape([[pm(1, 2), pm(1, 4), pm(1, 4)]; 3]);
        assert!(matches!(pachner_32(&x, &s, e), Err(Error::NotBalanced(..))));
        let f8 = PseudoManifold::figure_eight();
        assert_eq!(
            pachner_32(&f8, &Shape::<Real>::symmetric(2), 0).unwrap_err(),
            Error::BadStar(0)
        );
        assert_eq!(
            pachner_32(&x, &s, 99).unwrap_err(),
            Error::UnknownEdge(99)
        );
    }

    #[test]
    fn leveled_pachner_adds_shift() {
        let x = PseudoManifold::triangle_suspension();
        let e = x.edge_class(0, 2);
        let ls = LeveledShape {
            shape: suspension_shape([
                [2.0, 0.6, PI - 2.6],
                [2.2, 0.4, PI - 2.6],
                [2.0 * PI - 4.2, 1.0, 4.2 - PI - 1.0],
            ]),
            level: 1.5,
        };
        let mv = pachner_32(&x, &ls.shape, e).unwrap();
        let (_, out) = pachner_32_leveled(&x, &ls, e).unwrap();
        assert_eq!(out.level, 1.5 + mv.level_shift);
        // each star tetrahedron contributes 2 s (next - previous) with class
        // order 01 -> 02 -> 03 around the central class 03
        let mut want = 0.0;
        for t in 0..3 {
            let a = ls.shape.angles[t];
            want += 2.0 * x.sign(t) as Real * (a[0] - a[1]);
        }
        assert!((mv.level_shift - want / (12.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn polytope_points() {
        let x = PseudoManifold::figure_eight();
        let s = shape_polytope_point(&x, false).unwrap();
        assert!(s.is_shape_structure());
        let b = shape_polytope_point(&x, true).unwrap();
        assert!(b.is_shape_structure());
        let w = weights(&x, &b).unwrap();
        assert!(w.iter().all(|v| (v - 2.0 * PI).abs() < 1e-9));
        assert!(shape_polytope_point(&PseudoManifold::five_two(), true).is_some());
    }

    #[test]
    fn ptolemy_ratios() {
        assert_eq!(ratio_bullet((1.0, 1.0), (1.0, 1.0)).unwrap(), (1.0, 2.0));
        assert_eq!(ratio_star((1.0, 1.0), (1.0, 1.0)).unwrap(), (0.5, 0.5));
        assert_eq!(ratio_bullet((2.0, 3.0), (5.0, 7.0)).unwrap(), (10.0, 17.0));
        let (u, v) = ratio_star((2.0, 3.0), (5.0, 7.0)).unwrap();
        assert!((u - 15.0 / 17.0).abs() < 1e-15 && (v - 7.0 / 17.0).abs() < 1e-15);
        assert!(matches!(
            ratio_star((0.0, 1.0), (1.0, 1.0)),
            Err(Error::NonPositive(_))
        ));
    }
}
