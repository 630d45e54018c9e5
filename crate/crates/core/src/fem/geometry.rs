//! Exact zeroth and first moments of patch regions intersected with mesh
//! elements, via Green's theorem on the boundary of the intersection.

use std::f64::consts::TAU;

pub type Point = [f64; 2];

/// `(integral 1, integral x, integral y)` over a planar set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub area: f64,
    pub mx: f64,
    pub my: f64,
}

impl Moments {
    fn add(&mut self, o: Moments) {
        self.area += o.area;
        self.mx += o.mx;
        self.my += o.my;
    }

    /// Integral of `a + b x + c y` over the set.
    pub fn integrate_linear(&self, a: f64, b: f64, c: f64) -> f64 {
        a * self.area + b * self.mx + c * self.my
    }
}

/// Boundary contribution of the directed segment `p -> q`.
fn segment(p: Point, q: Point) -> Moments {
    let [xp, yp] = p;
    let [xq, yq] = q;
    Moments {
        area: 0.5 * (xp * yq - xq * yp),
        mx: (yq - yp) / 6.0 * (xp * xp + xp * xq + xq * xq),
        my: -(xq - xp) / 6.0 * (yp * yp + yp * yq + yq * yq),
    }
}

/// Boundary contribution of the counter-clockwise arc of the circle
/// `(center, r)` from angle `t0` to `t0 + sweep`.
fn arc(center: Point, r: f64, t0: f64, sweep: f64) -> Moments {
    let [cx, cy] = center;
    let t1 = t0 + sweep;
    let (s0, c0) = t0.sin_cos();
    let (s1, c1) = t1.sin_cos();
    let cos2 = |t: f64| t / 2.0 + (2.0 * t).sin() / 4.0;
    let sin2 = |t: f64| t / 2.0 - (2.0 * t).sin() / 4.0;
    let cos3 = |s: f64| s - s * s * s / 3.0;
    let sin3 = |c: f64| -c + c * c * c / 3.0;
    let r2 = r * r;
    Moments {
        area: 0.5 * (r * cx * (s1 - s0) - r * cy * (c1 - c0) + r2 * sweep),
        mx: 0.5
            * (cx * cx * r * (s1 - s0)
                + 2.0 * cx * r2 * (cos2(t1) - cos2(t0))
                + r2 * r * (cos3(s1) - cos3(s0))),
        my: 0.5
            * (cy * cy * r * (c0 - c1)
                + 2.0 * cy * r2 * (sin2(t1) - sin2(t0))
                + r2 * r * (sin3(c1) - sin3(c0))),
    }
}

/// Moments of a simple polygon with counter-clockwise vertices.
pub fn polygon(vertices: &[Point]) -> Moments {
    let mut m = Moments::default();
    let n = vertices.len();
    if n < 3 {
        return m;
    }
    for k in 0..n {
        m.add(segment(vertices[k], vertices[(k + 1) % n]));
    }
    m
}

/// Keep the part of `poly` where `sign * (p[axis] - bound) <= 0`.
fn clip(poly: &[Point], axis: usize, bound: f64, sign: f64) -> Vec<Point> {
    let inside = |p: &Point| sign * (p[axis] - bound) <= 0.0;
    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        let (pin, qin) = (inside(&p), inside(&q));
        if pin {
            out.push(p);
        }
        if pin != qin {
            let t = (bound - p[axis]) / (q[axis] - p[axis]);
            let mut x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
            x[axis] = bound;
            out.push(x);
        }
    }
    out
}

/// Moments of an axis-aligned rectangle intersected with a triangle
/// (counter-clockwise vertices).
pub fn rect_triangle(tri: [Point; 3], x0: f64, x1: f64, y0: f64, y1: f64) -> Moments {
    let mut poly = tri.to_vec();
    for (axis, bound, sign) in [(0, x0, -1.0), (0, x1, 1.0), (1, y0, -1.0), (1, y1, 1.0)] {
        poly = clip(&poly, axis, bound, sign);
        if poly.len() < 3 {
            return Moments::default();
        }
    }
    polygon(&poly)
}

fn point_in_triangle(tri: &[Point; 3], p: Point) -> bool {
    (0..3).all(|k| {
        let a = tri[k];
        let b = tri[(k + 1) % 3];
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
    })
}

enum Crossing {
    Entry(Point),
    Exit(Point),
}

/// Moments of the disk `(center, r)` intersected with a triangle
/// (counter-clockwise vertices).
pub fn disk_triangle(tri: [Point; 3], center: Point, r: f64) -> Moments {
    let r2 = r * r;
    let dist2 = |p: Point| {
        let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
        dx * dx + dy * dy
    };
    let inside: [bool; 3] = [
        dist2(tri[0]) <= r2,
        dist2(tri[1]) <= r2,
        dist2(tri[2]) <= r2,
    ];

    let mut m = Moments::default();
    let mut crossings = Vec::new();
    let mut touched = false;
    for k in 0..3 {
        let p = tri[k];
        let q = tri[(k + 1) % 3];
        let d = [q[0] - p[0], q[1] - p[1]];
        let e = [p[0] - center[0], p[1] - center[1]];
        let a = d[0] * d[0] + d[1] * d[1];
        let b = 2.0 * (d[0] * e[0] + d[1] * e[1]);
        let c = e[0] * e[0] + e[1] * e[1] - r2;
        let disc = b * b - 4.0 * a * c;
        let (pin, qin) = (inside[k], inside[(k + 1) % 3]);
        let (lo, hi) = match (pin, qin) {
            (true, true) => (0.0, 1.0),
            (false, false) => {
                if disc <= 0.0 {
                    continue;
                }
                let sq = disc.sqrt();
                let t0 = (-b - sq) / (2.0 * a);
                let t1 = (-b + sq) / (2.0 * a);
                if t0 <= 0.0 || t1 >= 1.0 || t0 >= t1 {
                    continue;
                }
                (t0, t1)
            }
            (false, true) => {
                let sq = disc.max(0.0).sqrt();
                (((-b - sq) / (2.0 * a)).clamp(0.0, 1.0), 1.0)
            }
            (true, false) => {
                let sq = disc.max(0.0).sqrt();
                (0.0, ((-b + sq) / (2.0 * a)).clamp(0.0, 1.0))
            }
        };
        let at = |t: f64| [p[0] + t * d[0], p[1] + t * d[1]];
        let (s, f) = (at(lo), at(hi));
        touched = true;
        if !pin {
            crossings.push(Crossing::Entry(s));
        }
        m.add(segment(s, f));
        if !qin {
            crossings.push(Crossing::Exit(f));
        }
    }

    if !touched {
        if point_in_triangle(&tri, center) {
            let area = std::f64::consts::PI * r2;
            return Moments {
                area,
                mx: center[0] * area,
                my: center[1] * area,
            };
        }
        return Moments::default();
    }

    let angle = |p: Point| (p[1] - center[1]).atan2(p[0] - center[0]);
    let n = crossings.len();
    for k in 0..n {
        if let Crossing::Exit(from) = crossings[k] {
            if let Crossing::Entry(to) = crossings[(k + 1) % n] {
                let t0 = angle(from);
                let mut sweep = angle(to) - t0;
                if sweep < 0.0 {
                    sweep += TAU;
                }
                let gap = (from[0] - to[0]).hypot(from[1] - to[1]);
                if gap <= 1e-14 * r.max(1.0) {
                    sweep = 0.0;
                }
                m.add(arc(center, r, t0, sweep));
            }
        }
    }
    m
}

/// Integrals of the two hat functions of the interval `[xa, xb]` over its
/// intersection with `[a, b]`, as `(left hat, right hat)`.
pub fn interval_hats(xa: f64, xb: f64, a: f64, b: f64) -> (f64, f64) {
    let p = a.max(xa);
    let q = b.min(xb);
    if q <= p {
        return (0.0, 0.0);
    }
    let h = xb - xa;
    let right = ((q - xa) * (q - xa) - (p - xa) * (p - xa)) / (2.0 * h);
    ((q - p) - right, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const LOWER: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]];

    fn brute(tri: [Point; 3], pred: impl Fn(f64, f64) -> bool) -> Moments {
        let n = 2000;
        let d = 1.0 / n as f64;
        let xs = |k: usize| -1.0 + 3.0 * (k as f64 + 0.5) * d;
        let da = 9.0 * d * d;
        let mut m = Moments::default();
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (xs(a), xs(b));
                if point_in_triangle(&tri, [x, y]) && pred(x, y) {
                    m.area += da;
                    m.mx += x * da;
                    m.my += y * da;
                }
            }
        }
        m
    }

    fn close(a: Moments, b: Moments, tol: f64) -> bool {
        (a.area - b.area).abs() < tol && (a.mx - b.mx).abs() < tol && (a.my - b.my).abs() < tol
    }

    #[test]
    fn triangle_moments() {
        let m = polygon(&LOWER);
        assert!((m.area - 0.5).abs() < 1e-15);
        assert!((m.mx - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.my - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn rect_clip_matches_brute_force() {
        let exact = rect_triangle(LOWER, 0.3, 0.8, 0.1, 0.6);
        let b = brute(LOWER, |x, y| (0.3..=0.8).contains(&x) && (0.1..=0.6).contains(&y));
        assert!(close(exact, b, 5e-3), "{exact:?} vs {b:?}");
    }

    #[test]
    fn disk_cases_match_brute_force() {
        let cases: [(Point, f64); 6] = [
            ([0.7, 0.3], 0.1),  // strictly inside
            ([0.5, 0.0], 0.3),  // cuts one edge
            ([1.0, 0.0], 0.5),  // around a vertex
            ([0.6, 0.4], 2.0),  // contains the triangle
            ([-0.5, 0.8], 0.2), // disjoint
            ([0.5, 0.5], 0.45), // cuts all edges
        ];
        for (c, r) in cases {
            let exact = disk_triangle(LOWER, c, r);
            let b = brute(LOWER, |x, y| (x - c[0]).hypot(y - c[1]) <= r);
            assert!(close(exact, b, 5e-3), "{c:?} {r}: {exact:?} vs {b:?}");
        }
    }

    #[test]
    fn disk_tiled_by_triangles_sums_exactly() {
        // 8x8 Courant tiling of the unit square, disk off-lattice
        let n = 8;
        let h = 1.0 / n as f64;
        let (c, r) = ([0.43, 0.57], 0.31);
        let mut total = Moments::default();
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (i as f64 * h, j as f64 * h);
                let p00 = [x, y];
                let p10 = [x + h, y];
                let p11 = [x + h, y + h];
                let p01 = [x, y + h];
                total.add(disk_triangle([p00, p10, p11], c, r));
                total.add(disk_triangle([p00, p11, p01], c, r));
            }
        }
        let area = PI * r * r;
        assert!((total.area - area).abs() < 1e-14);
        assert!((total.mx - c[0] * area).abs() < 1e-14);
        assert!((total.my - c[1] * area).abs() < 1e-14);
    }

    #[test]
    fn interval_hat_split() {
        let (l, r) = interval_hats(0.0, 1.0, 0.0, 1.0);
        assert!((l - 0.5).abs() < 1e-15 && (r - 0.5).abs() < 1e-15);
        let (l, r) = interval_hats(0.0, 1.0, 0.5, 2.0);
        assert!((l - 0.125).abs() < 1e-15 && (r - 0.375).abs() < 1e-15);
        assert_eq!(interval_hats(0.0, 1.0, 1.0, 2.0), (0.0, 0.0));
    }
}
