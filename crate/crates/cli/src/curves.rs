//! Real zero loci of affine plane curves sampled along grid lines.

use quantvar::projgeo::Polynomial;
use quantvar::Rational;

/// Affine polynomial in `(x, y)` with `f64` coefficients.
#[derive(Clone, Debug)]
pub struct PlaneCurve {
    terms: Vec<(u32, u32, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    /// `'v'` for a point found on a vertical grid line, `'h'` for horizontal.
    pub line: char,
}

impl PlaneCurve {
    /// Two variables are read as `(x, y)`; three as homogeneous
    /// `(X, Y, Z)` restricted to the chart `Z = 1`.
    pub fn from_polynomial(p: &Polynomial<Rational>) -> Result<Self, String> {
        let n = p.nvars();
        if !(1..=3).contains(&n) {
            return Err(format!("plane curve needs 2 or 3 variables, got {n}"));
        }
        let terms = p
            .terms()
            .map(|(m, c)| {
                let e = m.exponents();
                let to_f = |q: &Rational| {
                    use num_traits::ToPrimitive;
                    q.to_f64().unwrap_or(f64::NAN)
                };
                (e[0], e.get(1).copied().unwrap_or(0), to_f(c))
            })
            .collect();
        Ok(PlaneCurve { terms })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(a, b, c)| c * x.powi(a as i32) * y.powi(b as i32)).sum()
    }
}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zero crossings of `g` on `[a, b]` sampled at `n` equal steps: exact zeros
/// at samples and bisected sign changes between consecutive samples.
fn crossings(g: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<f64> {
    let at = |k: usize| a + (b - a) * k as f64 / n as f64;
    let mut out = Vec::new();
    let mut prev = g(at(0));
    if prev == 0.0 {
        out.push(at(0));
    }
    for k in 1..=n {
        let cur = g(at(k));
        if cur == 0.0 {
            out.push(at(k));
        } else if prev != 0.0 && (cur < 0.0) != (prev < 0.0) {
            out.push(bisect(&g, at(k - 1), at(k)));
        }
        prev = cur;
    }
    out
}

/// Zero locus on `resolution + 1` vertical and horizontal grid lines of the
/// window. An empty window (zero width or height) yields no points.
pub fn curve_points(curve: &PlaneCurve, w: Window, resolution: usize) -> Vec<CurvePoint> {
    if !(w.x_max > w.x_min && w.y_max > w.y_min) || resolution == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let n = resolution;
    for i in 0..=n {
        let x = w.x_min + (w.x_max - w.x_min) * i as f64 / n as f64;
        for y in crossings(|y| curve.eval(x, y), w.y_min, w.y_max, n) {
            out.push(CurvePoint { x, y, line: 'v' });
        }
    }
    for j in 0..=n {
        let y = w.y_min + (w.y_max - w.y_min) * j as f64 / n as f64;
        for x in crossings(|x| curve.eval(x, y), w.x_min, w.x_max, n) {
            out.push(CurvePoint { x, y, line: 'h' });
        }
    }
    out
}

/// Number of clusters of points under the "closer than `radius`" relation.
pub fn count_components(points: &[CurvePoint], radius: f64) -> usize {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i].x - points[j].x).hypot(points[i].y - points[j].y) < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantvar::projgeo::parse_polynomial;

    fn curve(s: &str) -> PlaneCurve {
        PlaneCurve::from_polynomial(&parse_polynomial(s, None).unwrap()).unwrap()
    }

    const SQUARE: Window = Window { x_min: -2.0, x_max: 2.0, y_min: -2.0, y_max: 2.0 };

    #[test]
    fn circle_points_lie_on_circle() {
        let c = curve("x0^2 + x1^2 - 1");
        let pts = curve_points(&c, SQUARE, 40);
        assert!(!pts.is_empty());
        for p in &pts {
            assert!((p.x.hypot(p.y) - 1.0).abs() < 1e-12);
        }
        assert_eq!(count_components(&pts, 0.25), 1);
    }

    #[test]
    fn empty_window() {
        let c = curve("x0^2 + x1^2 - 1");
        assert!(curve_points(&c, Window { x_min: 1.0, x_max: 1.0, y_min: 0.0, y_max: 1.0 }, 10).is_empty());
    }

    #[test]
    fn homogeneous_input_uses_affine_chart() {
        let c = curve("X1^2 X2 - 4 X0^3 + 4 X0 X2^2");
        assert_eq!(c.eval(1.0, 0.0), 0.0);
        assert_eq!(c.eval(2.0, 1.0), 1.0 - 32.0 + 8.0);
    }
}
