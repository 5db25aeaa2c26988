use crate::geometry::Vec2;

/// Graded zone around a free crack end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Zone {
    pub center: Vec2,
    pub radius: f64,
    pub h: f64,
    pub core: f64,
}

/// Target element size: dyadic grading toward the origin and toward each
/// zone center, uniform `h` in between, optional linear growth far out.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SizeField {
    pub h: f64,
    pub exponent: f64,
    pub grading_radius: f64,
    pub core: f64,
    pub growth_radius: Option<f64>,
    pub zones: Vec<Zone>,
}

impl SizeField {
    pub fn new(h: f64, grading: f64, grading_radius: f64, growth_radius: Option<f64>) -> Self {
        let exponent = (1.0 / grading).log2();
        let core = (grading_radius * (h / grading_radius).powi(2)).min(grading_radius);
        Self { h, exponent, grading_radius, core, growth_radius, zones: Vec::new() }
    }

    fn graded(h: f64, exponent: f64, rg: f64, core: f64, r: f64) -> f64 {
        if r >= rg {
            return h;
        }
        let rr = r.max(core);
        let s = h * (rr / rg).powf(exponent);
        if r < core {
            // a single fan reaches the centre
            s.max(core)
        } else {
            s
        }
    }

    /// Size as a function of the distance to the origin only.
    pub fn origin(&self, r: f64) -> f64 {
        let s = Self::graded(self.h, self.exponent, self.grading_radius, self.core, r);
        match self.growth_radius {
            Some(r0) if r > r0 => s.max(self.h * r / r0),
            _ => s,
        }
    }

    pub fn zone(&self, z: &Zone, d: f64) -> f64 {
        Self::graded(z.h, self.exponent, z.radius, z.core, d)
    }

    pub fn at(&self, x: Vec2) -> f64 {
        let mut s = self.origin(x.norm());
        for z in &self.zones {
            let d = (x - z.center).norm();
            if d < z.radius {
                s = s.min(self.zone(z, d));
            }
        }
        s
    }
}

/// Positions `t ∈ [0, len]` splitting a path so that each piece carries the
/// same share of `∫ dl / s`; `s` is sampled with sub-steps of a tenth of the
/// local size. Returns interior positions only.
pub(crate) fn equidistribute(len: f64, s: impl Fn(f64) -> f64) -> Vec<f64> {
    if len <= 0.0 {
        return Vec::new();
    }
    let mut ts = vec![0.0];
    let mut cum = vec![0.0];
    let mut t = 0.0;
    while t < len {
        let dt = (0.1 * s(t)).min(len - t).max(len * 1e-9);
        let mid = s(t + 0.5 * dt);
        t = (t + dt).min(len);
        ts.push(t);
        cum.push(cum.last().unwrap() + dt / mid);
    }
    let total = *cum.last().unwrap();
    let n = total.round().max(1.0) as usize;
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut j = 0;
    for k in 1..n {
        let target = total * k as f64 / n as f64;
        while cum[j + 1] < target {
            j += 1;
        }
        let f = (target - cum[j]) / (cum[j + 1] - cum[j]);
        out.push(ts[j] + f * (ts[j + 1] - ts[j]));
    }
    out
}
