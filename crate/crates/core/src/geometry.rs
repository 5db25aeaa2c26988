//! Planar geometry helpers shared by the mesh, the crack utilities and the
//! quadrature code. All disks are centred at the origin (the crack tip).

use nalgebra::Vector2;
use std::f64::consts::PI;

pub type Vec2 = Vector2<f64>;

#[inline]
pub fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Counter-clockwise rotation by `angle`.
#[inline]
pub fn rotate(v: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    vec2(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Wraps an angle into [0, 2π).
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(2.0 * PI - d)
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let l2 = d.norm_squared();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&d) / l2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Parameter interval of the part of segment `a + t(b-a)`, `t ∈ [0,1]`, lying in
/// the closed disk of radius `r` about the origin.
pub fn segment_disk_interval(a: Vec2, b: Vec2, r: f64) -> Option<(f64, f64)> {
    let d = b - a;
    let qa = d.norm_squared();
    if qa == 0.0 {
        return (a.norm() <= r).then_some((0.0, 1.0));
    }
    let qb = 2.0 * a.dot(&d);
    let qc = a.norm_squared() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = (-qb - sq) / (2.0 * qa);
    let t1 = (-qb + sq) / (2.0 * qa);
    let lo = t0.max(0.0);
    let hi = t1.min(1.0);
    (hi > lo).then_some((lo, hi))
}

/// Length of segment `[a,b]` inside the closed disk of radius `r`.
pub fn segment_length_in_disk(a: Vec2, b: Vec2, r: f64) -> f64 {
    segment_disk_interval(a, b, r).map_or(0.0, |(t0, t1)| (t1 - t0) * (b - a).norm())
}

pub fn triangle_signed_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * cross(b - a, c - a)
}

/// Signed area of disk(0, r) ∩ triangle(0, a, b).
fn origin_wedge_disk_area(a: Vec2, b: Vec2, r: f64) -> f64 {
    let d = b - a;
    let mut cuts = vec![0.0];
    let qa = d.norm_squared();
    if qa > 0.0 {
        let qb = 2.0 * a.dot(&d);
        let qc = a.norm_squared() - r * r;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let sq = disc.sqrt();
            for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                if t > 0.0 && t < 1.0 {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.push(1.0);
    let mut area = 0.0;
    for w in cuts.windows(2) {
        let p = a + d * w[0];
        let q = a + d * w[1];
        let m = a + d * (0.5 * (w[0] + w[1]));
        if m.norm_squared() <= r * r {
            area += 0.5 * cross(p, q);
        } else {
            area += 0.5 * r * r * cross(p, q).atan2(p.dot(&q));
        }
    }
    area
}

/// Exact area of triangle(a, b, c) ∩ disk(0, r); orientation independent.
pub fn triangle_disk_area(a: Vec2, b: Vec2, c: Vec2, r: f64) -> f64 {
    let s = origin_wedge_disk_area(a, b, r) + origin_wedge_disk_area(b, c, r) + origin_wedge_disk_area(c, a, r);
    s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn disk_clipping_of_segments() {
        assert_relative_eq!(segment_length_in_disk(vec2(0.0, 0.0), vec2(-10.0, 0.0), 1.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(segment_length_in_disk(vec2(-10.0, 0.0), vec2(10.0, 0.0), 1.0), 2.0, epsilon = 1e-14);
        assert_eq!(segment_length_in_disk(vec2(2.0, 0.0), vec2(3.0, 0.0), 1.0), 0.0);
        assert_relative_eq!(segment_length_in_disk(vec2(-2.0, 0.5), vec2(2.0, 0.5), 1.0), 2.0 * 0.75f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn triangle_disk_area_limits() {
        let (a, b, c) = (vec2(-3.0, -3.0), vec2(3.0, -3.0), vec2(0.0, 6.0));
        assert_relative_eq!(triangle_disk_area(a, b, c, 1.0), PI, epsilon = 1e-12);
        let (a, b, c) = (vec2(0.1, 0.1), vec2(0.2, 0.1), vec2(0.1, 0.3));
        assert_relative_eq!(triangle_disk_area(a, b, c, 1.0), 0.01, epsilon = 1e-14);
        assert_eq!(triangle_disk_area(vec2(2.0, 2.0), vec2(3.0, 2.0), vec2(2.0, 3.0), 1.0), 0.0);
        // quarter disk
        let q = triangle_disk_area(vec2(0.0, 0.0), vec2(5.0, 0.0), vec2(0.0, 5.0), 1.0);
        assert_relative_eq!(q, PI / 4.0, epsilon = 1e-12);
        // half-plane cut through the centre, reversed orientation
        let h = triangle_disk_area(vec2(-4.0, 0.0), vec2(0.0, 8.0), vec2(4.0, 0.0), 1.0);
        assert_relative_eq!(h, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn triangle_disk_area_matches_sampling() {
        let (a, b, c) = (vec2(0.3, -0.9), vec2(1.4, 0.2), vec2(-0.2, 0.8));
        let n = 1500;
        let (lo, hi) = (vec2(-0.2, -0.9), vec2(1.4, 0.8));
        let mut hits = 0usize;
        for i in 0..n {
            for j in 0..n {
                let p = vec2(
                    lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / n as f64,
                    lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / n as f64,
                );
                let inside = [(a, b), (b, c), (c, a)].iter().all(|&(u, v)| cross(v - u, p - u) >= 0.0);
                if inside && p.norm() <= 1.0 {
                    hits += 1;
                }
            }
        }
        let mc = hits as f64 * (hi.x - lo.x) * (hi.y - lo.y) / (n * n) as f64;
        assert_relative_eq!(triangle_disk_area(a, b, c, 1.0), mc, epsilon = 2e-3);
    }

    #[test]
    fn angles_wrap() {
        assert_relative_eq!(wrap_angle(-PI / 2.0), 1.5 * PI);
        assert_eq!(wrap_angle(2.0 * PI), 0.0);
        assert_relative_eq!(angle_distance(0.1, 2.0 * PI - 0.1), 0.2, epsilon = 1e-14);
    }
}
