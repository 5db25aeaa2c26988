//! Gauss–Legendre rules and triangle rules (including a collapsed rule for
//! integrands singular at one vertex).

use crate::geometry::Vec2;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_interval(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(&w).map(|(&xi, &wi)| (m + h * xi, h * wi)).collect()
}

/// Symmetric 3-point rule (degree 2) in barycentric coordinates; weights sum to 1.
pub const TRI3: [([f64; 3], f64); 3] = [
    ([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0], 1.0 / 3.0),
];

/// Collapsed (Duffy) tensor Gauss rule on triangle `(apex, b, c)`; the apex
/// singularity of order `r^{-1}` is integrated exactly in the radial direction.
/// Returns points and weights summing to the triangle area.
pub fn collapsed_triangle_rule(apex: Vec2, b: Vec2, c: Vec2, n: usize) -> Vec<(Vec2, f64)> {
    let area = 0.5 * crate::geometry::cross(b - apex, c - apex).abs();
    let g = gauss_legendre_interval(n, 0.0, 1.0);
    let mut out = Vec::with_capacity(n * n);
    for &(s, ws) in &g {
        for &(t, wt) in &g {
            // x = apex + s((1-t)(b-apex) + t(c-apex)), jacobian 2·area·s
            let p = apex + ((b - apex) * (1.0 - t) + (c - apex) * t) * s;
            out.push((p, 2.0 * area * s * ws * wt));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vec2;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 1 { 2.0 / deg as f64 } else { 0.0 };
            let approx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32 - 1)).sum();
            assert_relative_eq!(approx, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn collapsed_rule_handles_inverse_distance() {
        // ∫_T 1/|x| over the triangle (0,0),(1,0),(0,1) = √2·asinh(1)
        let rule = collapsed_triangle_rule(vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0), 20);
        let v: f64 = rule.iter().map(|(p, w)| w / p.norm()).sum();
        assert_relative_eq!(v, 2f64.sqrt() * 1f64.asinh(), epsilon = 1e-10);
        let area: f64 = rule.iter().map(|(_, w)| w).sum();
        assert_relative_eq!(area, 0.5, epsilon = 1e-14);
    }
}
