use std::f64::consts::PI;
use std::sync::OnceLock;

use atqft::an_core::gauss_kernel;
use atqft::charged::{log_psi_charged, psi_charged, ChargeTriple};
use atqft::qdilog::{d_b, d_b_poch, phi_b};
use atqft::triangulation::{
    gauge_transform, pachner_32, shape_polytope_point, smith_diagonal, weights, LeveledShape,
    PiMultiple, PseudoManifold, Shape, TriangulationFile,
};
use atqft::{Cplx, ModularParam, Real};
use num_rational::Rational64;
use proptest::prelude::*;

fn params() -> &'static [ModularParam] {
    static P: OnceLock<Vec<ModularParam>> = OnceLock::new();
    P.get_or_init(|| {
        vec![
            ModularParam::real(0.7, 1).unwrap(),
            ModularParam::real(1.3, 3).unwrap(),
            ModularParam::unit(PI / 5.0, 1).unwrap(),
            ModularParam::unit(PI / 5.0, 3).unwrap(),
            ModularParam::unit(PI / 6.0, 5).unwrap(),
        ]
    })
}

fn rel(a: Cplx, b: Cplx) -> Real {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inversion(k in 0usize..5, x in -1.5f64..1.5, n in 0i64..5) {
        let p = &params()[k];
        let a = p.point(x, n);
        let lhs = d_b(a, p).unwrap() * d_b(-a, p).unwrap();
        prop_assert!((lhs - gauss_kernel(a) / p.zeta_inv).norm() < 1e-8);
    }

    #[test]
    fn unitarity(k in 0usize..5, x in -1.5f64..1.5, n in 0i64..5) {
        let p = &params()[k];
        let a = p.point(x, n);
        let partner = if p.is_real_b() { a.with_n(-n) } else { a };
        let v = d_b(a, p).unwrap().conj() * d_b(partner, p).unwrap();
        prop_assert!((v - 1.0).norm() < 1e-8);
    }

    #[test]
    fn level_one_is_faddeev(k in prop::sample::select(vec![0usize, 2]), re in -2.0f64..2.0, im in -0.2f64..0.2) {
        let p = &params()[k];
        let x = Cplx::new(re, im);
        prop_assert!((d_b(p.point(x, 0), p).unwrap() - phi_b(x, p).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn product_representation(k in 2usize..5, re in -1.0f64..1.0, t in -0.5f64..0.5, n in 0i64..5) {
        let p = &params()[k];
        let a = p.point(Cplx::new(re, t * p.cb_n().im), n);
        prop_assert!(rel(d_b_poch(a, p).unwrap(), d_b(a, p).unwrap()) < 1e-8);
    }

    #[test]
    fn charge_triples(a in 0.01f64..0.98, f in 0.01f64..0.98, nk in 0usize..3) {
        let n = [1u32, 3, 5][nk];
        let s = 1.0 / (n as Real).sqrt();
        let (a, c) = (a * s, (1.0 - a) * f * s);
        let ch = ChargeTriple::new(a, c, n).unwrap();
        prop_assert!((ch.a + ch.b + ch.c - s).abs() < 1e-15);
        prop_assert_eq!(ch.rotate().rotate().rotate(), ch);
        prop_assert!(ChargeTriple::new(a, s - a, n).is_err());
    }

    #[test]
    fn charged_log_is_consistent(k in 0usize..5, x in -1.0f64..1.0, n in 0i64..5) {
        let p = &params()[k];
        let s = 1.0 / p.sqrt_n();
        let ch = ChargeTriple::new(0.3 * s, 0.25 * s, p.n).unwrap();
        let a = p.point(x, n);
        let direct = psi_charged(a, ch, p).unwrap();
        prop_assert!(rel(log_psi_charged(a, ch, p).unwrap().exp(), direct) < 1e-13);
    }
}

// Triangulations.

fn knots() -> [PseudoManifold; 2] {
    [PseudoManifold::figure_eight(), PseudoManifold::five_two()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gauge_keeps_weights(k in 0usize..2, g in prop::collection::vec(-0.05f64..0.05, 3)) {
        let x = &knots()[k];
        let shape = shape_polytope_point(x, false).unwrap();
        let ls = LeveledShape { shape, level: 0.0 };
        let g: Vec<Real> = (0..x.n_edges()).map(|e| g[e % g.len()]).collect();
        let out = gauge_transform(x, &ls, &g).unwrap();
        let (w0, w1) = (weights(x, &ls.shape).unwrap(), weights(x, &out.shape).unwrap());
        for (a, b) in w0.iter().zip(&w1) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // angles move linearly in g
        let half: Vec<Real> = g.iter().map(|v| v / 2.0).collect();
        let h1 = gauge_transform(x, &ls, &half).unwrap();
        let h2 = gauge_transform(x, &h1, &half).unwrap();
        for (r, s) in out.shape.angles.iter().zip(&h2.shape.angles) {
            for j in 0..3 {
                prop_assert!((r[j] - s[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pachner_is_exact(
        p1 in 1i64..24, p2 in 1i64..24,
        f in prop::collection::vec(1i64..8, 3),
    ) {
        prop_assume!(p1 + p2 > 24);
        let one = PiMultiple::new(1, 1);
        let alpha = [PiMultiple::new(p1, 24), PiMultiple::new(p2, 24), PiMultiple::new(48 - p1 - p2, 24)];
        let rows: Vec<[PiMultiple; 3]> = alpha
            .iter()
            .zip(&f)
            .map(|(&al, &k)| {
                let rest = one - al;
                let be = PiMultiple(rest.0 * Rational64::new(k, 8));
                // stored as [α01, α02, α03]; the central edge is local 03
                [be, rest - be, al]
            })
            .collect();
        let s = Shape::new(rows);
        prop_assert!(s.is_shape_structure());
        let x = PseudoManifold::triangle_suspension();
        let e = x.edge_class(0, 2);
        let mv = pachner_32(&x, &s, e).unwrap();
        prop_assert!(mv.shape.is_shape_structure());
        let (w0, w1) = (weights(&x, &s).unwrap(), weights(&mv.manifold, &mv.shape).unwrap());
        for (old, new) in mv.edge_map.iter().enumerate() {
            if let Some(n) = new {
                prop_assert_eq!(w0[old], w1[*n]);
            }
        }
        // the file format carries the result unchanged
        let file = TriangulationFile { level_n: 1, manifold: mv.manifold, shape: Some(mv.shape) };
        let text = file.to_string();
        let back: TriangulationFile = text.parse().unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn smith_form_matches_rational_rank(
        rows in 1usize..6, cols in 1usize..6,
        entries in prop::collection::vec(-3i64..4, 36),
    ) {
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|i| (0..cols).map(|j| entries[i * 6 + j]).collect())
            .collect();
        let nonzero = smith_diagonal(&m);
        prop_assert_eq!(nonzero.len(), rational_rank(&m));
        prop_assert!(nonzero.iter().all(|&v| v > 0));
        for w in nonzero.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        if rows == cols {
            let det = bareiss_det(&m).abs();
            if nonzero.len() == rows {
                prop_assert_eq!(nonzero.iter().product::<i64>(), det);
            } else {
                prop_assert_eq!(det, 0);
            }
        }
    }
}

fn rational_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .map(|r| r.iter().map(|&v| Rational64::from_integer(v)).collect())
        .collect();
    let (rows, cols) = (a.len(), a[0].len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != Rational64::from_integer(0)) else {
            continue;
        };
        a.swap(rank, piv);
        for r in 0..rows {
            if r != rank && a[r][c] != Rational64::from_integer(0) {
                let f = a[r][c] / a[rank][c];
                for k in c..cols {
                    let t = a[rank][k] * f;
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn bareiss_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}
