use num_traits::{One, Zero};
use proptest::prelude::*;
use quantvar::projgeo::{
    cuspidal_cubic, evaluate, nodal_cubic, parse_point, parse_polynomial, zariski_tangent_dim, CubicParams,
    CubicType, ProjPoint,
};
use quantvar::scalar::rat;
use quantvar::{RatPoint, Rational};

/// Dense univariate polynomial, lowest degree first.
type Uni = Vec<Rational>;

fn trim(mut p: Uni) -> Uni {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rem(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = r.last().unwrap().clone() / b[db].clone();
        for (i, c) in b.iter().enumerate() {
            r[k + i] = r[k + i].clone() - q.clone() * c.clone();
        }
        r = trim(r);
    }
    r
}

fn gcd_degree(a: Uni, b: Uni) -> usize {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() - 1
}

/// The cubic `Y² = 4x³ - g2 x - g3` is singular iff its right-hand side has
/// a repeated root, i.e. shares a factor with its derivative.
fn oracle_singular(g2: &Rational, g3: &Rational) -> bool {
    let p = vec![-g3.clone(), -g2.clone(), Rational::zero(), rat(4, 1)];
    let dp = vec![-g2.clone(), Rational::zero(), rat(12, 1)];
    gcd_degree(p, dp) > 0
}

fn corpus() -> Vec<(Rational, Rational)> {
    let c = |a: i64, b: i64, c: i64, d: i64| (rat(a, b), rat(c, d));
    vec![
        c(0, 1, 0, 1),
        c(3, 1, 1, 1),
        c(3, 1, -1, 1),
        c(12, 1, 8, 1),
        c(27, 1, 27, 1),
        c(3, 4, 1, 8),
        c(4, 1, 0, 1),
        c(0, 1, 1, 1),
        c(1, 1, 1, 1),
        c(-1, 1, 0, 1),
        c(2, 1, 3, 1),
        c(1, 2, -1, 3),
        c(3, 1, 2, 1),
        c(48, 1, 64, 1),
        c(27, 4, 27, 8),
        c(5, 1, -7, 1),
        c(-3, 1, 1, 1),
        c(1, 3, 0, 1),
        c(75, 1, 250, 1),
        c(10, 1, 1, 1),
    ]
}

#[test]
fn cubic_corpus_matches_repeated_root_oracle() {
    let cases = corpus();
    assert_eq!(cases.len(), 20);
    let mut singular = 0;
    for (g2, g3) in cases {
        let params = CubicParams::new(g2.clone(), g3.clone());
        let oracle = oracle_singular(&g2, &g3);
        singular += usize::from(oracle);
        assert_eq!(params.classify() != CubicType::Smooth, oracle, "g2={g2} g3={g3}");
        assert_eq!(!params.discriminant().is_zero(), !oracle);
        assert_eq!(params.singular_point().is_some(), oracle);
        if oracle {
            let kind = if g2.is_zero() && g3.is_zero() { CubicType::Cuspidal } else { CubicType::Nodal };
            assert_eq!(params.classify(), kind);
        }
    }
    assert!(singular >= 6, "corpus should mix singular and smooth cases");
}

fn rational_points_on(v: &quantvar::RatVariety, params: &[(Rational, Rational)]) -> Vec<RatPoint> {
    params
        .iter()
        .map(|(x, y)| ProjPoint::new(vec![x.clone(), y.clone(), Rational::one()]).unwrap())
        .inspect(|p| assert!(v.contains(p, 0.0).unwrap(), "{p} not on curve"))
        .collect()
}

#[test]
fn nodal_and_cuspidal_singular_only_at_origin() {
    let origin = parse_point("(0 : 0 : 1)").unwrap();
    let nodal = nodal_cubic::<Rational>();
    let cusp = cuspidal_cubic::<Rational>();
    assert!(nodal.is_singular_point(&origin, 1).unwrap());
    assert!(cusp.is_singular_point(&origin, 1).unwrap());
    // rational parametrizations away from the singular point
    let ts: Vec<Rational> = [-3, -2, -1, 1, 2, 3, 5].iter().map(|&t| rat(t, 2)).collect();
    let nodal_pts: Vec<_> = ts
        .iter()
        .map(|t| {
            // Y² = 4X²(X + 1) with Y = tX: X = t²/4 - 1
            let x = t.clone() * t.clone() / rat(4, 1) - Rational::one();
            (x.clone(), t.clone() * x)
        })
        .filter(|(x, _)| !x.is_zero())
        .collect();
    for p in rational_points_on(&nodal, &nodal_pts) {
        assert!(!nodal.is_singular_point(&p, 1).unwrap(), "{p}");
    }
    let cusp_pts: Vec<_> = ts
        .iter()
        .map(|t| (t.clone() * t.clone(), rat(2, 1) * t.clone() * t.clone() * t.clone()))
        .collect();
    for p in rational_points_on(&cusp, &cusp_pts) {
        assert!(!cusp.is_singular_point(&p, 1).unwrap(), "{p}");
    }
    // the point at infinity (0 : 1 : 0) is smooth on both
    let inf = parse_point("(0 : 1 : 0)").unwrap();
    assert!(!nodal.is_singular_point(&inf, 1).unwrap());
    assert!(!cusp.is_singular_point(&inf, 1).unwrap());
}

fn signed(c: i64) -> String {
    if c < 0 {
        format!("- {}", -c)
    } else {
        format!("+ {c}")
    }
}

#[test]
fn affine_cubic_tangent_dimension() {
    let origin = [rat(0, 1), rat(0, 1)];
    for a in -3..=3_i64 {
        for b in -3..=3_i64 {
            // Y² = X (X - a)(X - b) passes through the origin
            let f = parse_polynomial(&format!("X1^2 - X0^3 {} X0^2 {} X0", signed(a + b), signed(-a * b)), Some(2))
                .unwrap();
            let dim = zariski_tangent_dim(&[f], &origin).unwrap();
            assert_eq!(dim == 1, a * b != 0, "a={a} b={b}");
            assert_eq!(dim, if a * b != 0 { 1 } else { 2 });
        }
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn singular_point_lies_on_curve_with_zero_gradient(g2 in small_rational(), g3 in small_rational()) {
        let params = CubicParams::new(g2.clone(), g3.clone());
        let f = params.homogeneous();
        match params.singular_point() {
            Some(p) => {
                prop_assert_eq!(evaluate(&f, &p).unwrap(), Rational::zero());
                for i in 0..3 {
                    prop_assert_eq!(evaluate(&f.derivative(i), &p).unwrap(), Rational::zero());
                }
                prop_assert!(oracle_singular(&g2, &g3));
            }
            None => prop_assert!(!oracle_singular(&g2, &g3)),
        }
    }

    #[test]
    fn verdicts_are_scale_invariant(
        g2 in small_rational(),
        g3 in small_rational(),
        x in small_rational(),
        lambda in small_rational().prop_filter("nonzero", |l| !l.is_zero()),
    ) {
        let v = CubicParams::new(g2, g3).variety();
        let p = ProjPoint::new(vec![x, rat(1, 1), rat(1, 1)]).unwrap();
        let q = p.scaled(&lambda).unwrap();
        let on = v.contains(&p, 0.0).unwrap();
        prop_assert_eq!(on, v.contains(&q, 0.0).unwrap());
        if on {
            prop_assert_eq!(v.rank_at(&p).unwrap(), v.rank_at(&q).unwrap());
        }
        let f = v.generators()[0].clone();
        let cube = lambda.clone() * lambda.clone() * lambda;
        prop_assert_eq!(evaluate(&f, &q).unwrap(), cube * evaluate(&f, &p).unwrap());
    }
}
