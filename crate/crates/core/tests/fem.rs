use approx::assert_relative_eq;
use cracktip_core::fem::*;
use cracktip_core::model::{CrackSet, ElasticMaterial, RigidMotion, SymTensor2};
use cracktip_core::quadrature::gauss_legendre_interval;
use cracktip_core::singular::{SingularDisplacement, SingularModeSet};
use cracktip_core::{vec2, Error, Vec2};
use std::f64::consts::PI;
use std::sync::Arc;

fn slit(r: f64) -> CrackSet {
    CrackSet::segment(Vec2::zeros(), vec2(-r, 0.0)).unwrap()
}

fn disc(h: f64, order: ElementOrder, crack: &CrackSet) -> Arc<Discretization> {
    Discretization::new(build_disk_mesh(&MeshParams::new(1.0, h, 0.5).with_order(order), crack).unwrap())
}

fn singular(kappa: [f64; 2]) -> SingularDisplacement {
    SingularDisplacement::new(SingularModeSet::validated(ElasticMaterial::default()), kappa)
}

/// `½∫_{B_R} Ce:e` of the singular field by 64×256 polar Gauss points, with the
/// strain taken from central differences of the displacement.
fn polar_energy_oracle(sd: &SingularDisplacement, radius: f64) -> f64 {
    let mat = ElasticMaterial::default();
    let rs = gauss_legendre_interval(64, 0.0, radius);
    let ts = gauss_legendre_interval(256, -PI, PI);
    let mut total = 0.0;
    for &(r, wr) in &rs {
        for &(t, wt) in &ts {
            let x = vec2(r * t.cos(), r * t.sin());
            let h = 1e-6 * r;
            let dx = (sd.eval(x + vec2(h, 0.0)) - sd.eval(x - vec2(h, 0.0))) / (2.0 * h);
            let dy = (sd.eval(x + vec2(0.0, h)) - sd.eval(x - vec2(0.0, h))) / (2.0 * h);
            let e = SymTensor2::sym_of(dx.x, dy.x, dx.y, dy.y);
            total += wr * wt * r * 0.5 * mat.apply_hooke(e).ddot(&e);
        }
    }
    total
}

#[test]
fn zero_data_gives_zero_solution() {
    let d = disc(0.1, ElementOrder::P1, &slit(1.0));
    let u = solve_dirichlet(&d, &ElasticMaterial::default(), &BoundaryData::zero()).unwrap();
    assert_eq!(u.max_abs(), 0.0);
    assert_eq!(u.elastic_energy(&ElasticMaterial::default()), 0.0);
    let s = u.stress_recovery(&ElasticMaterial::default());
    assert!(s.values.iter().all(|t| *t == SymTensor2::ZERO));
}

#[test]
fn rigid_data_is_reproduced() {
    let mat = ElasticMaterial::new(2.0, 0.7).unwrap();
    let m = RigidMotion::new(0.3, -0.1, 0.05);
    for order in [ElementOrder::P1, ElementOrder::P2] {
        let d = disc(0.1, order, &CrackSet::empty());
        let u = solve_dirichlet(&d, &mat, &BoundaryData::rigid(m)).unwrap();
        for (i, v) in u.values.iter().enumerate() {
            assert!((v - m.eval(d.space.nodes[i])).norm() < 1e-12);
        }
        assert!(u.elastic_energy(&mat) < 1e-26);
    }
}

#[test]
fn affine_field_gives_constant_stress() {
    let mat = ElasticMaterial::new(1.0, 2.0).unwrap();
    let d = disc(0.1, ElementOrder::P1, &slit(1.0));
    let u = DisplacementField::interpolate(&d, |x, _| vec2(0.2 * x.x + 0.3 * x.y, 0.1 * x.x - 0.4 * x.y));
    let expected = mat.apply_hooke(SymTensor2::new(0.2, 0.2, -0.4));
    for s in u.stress_recovery(&mat).values {
        assert!((s - expected).norm() < 1e-13);
    }
}

#[test]
fn singular_energy_converges_to_quadrature_oracle() {
    let mat = ElasticMaterial::default();
    let sd = singular([1.0, 0.0]);
    let oracle = polar_energy_oracle(&sd, 1.0);
    let err = |h: f64| {
        let d = disc(h, ElementOrder::P1, &slit(1.0));
        let u = solve_dirichlet(&d, &mat, &BoundaryData::singular(sd)).unwrap();
        (u.elastic_energy(&mat) - oracle).abs() / oracle
    };
    let (e1, e2) = (err(0.04), err(0.02));
    assert!(e2 < 0.02, "relative error {e2}");
    assert!(e2 < 0.5 * e1, "{e1} -> {e2}");
}

#[test]
fn p2_is_more_accurate_than_p1() {
    let mat = ElasticMaterial::default();
    let sd = singular([1.0, 0.5]);
    let oracle = polar_energy_oracle(&sd, 1.0);
    let e = |order| {
        let d = disc(0.04, order, &slit(1.0));
        (solve_dirichlet(&d, &mat, &BoundaryData::singular(sd)).unwrap().elastic_energy(&mat) - oracle).abs()
    };
    assert!(e(ElementOrder::P2) < 0.5 * e(ElementOrder::P1));
}

#[test]
fn singular_stress_at_a_sample_point() {
    let mat = ElasticMaterial::default();
    let sd = singular([1.0, 0.5]);
    let d = disc(0.01, ElementOrder::P1, &slit(1.0));
    let s = solve_dirichlet(&d, &mat, &BoundaryData::singular(sd)).unwrap().stress_recovery(&mat);
    let (t, _) = d.locate(vec2(0.5, 0.2), Vec2::zeros()).unwrap();
    let exact = sd.stress(vec2(0.5, 0.2));
    assert!((s.values[t] - exact).norm() < 0.05 * exact.norm());
}

#[test]
fn more_crack_never_raises_energy() {
    let mat = ElasticMaterial::default();
    let base = slit(1.0);
    let inc = CrackSet::segment(Vec2::zeros(), vec2(0.15, 0.05)).unwrap();
    let g = triangulate(&MeshParams::new(1.0, 0.04, 0.5), &[&base, &inc]).unwrap();
    let bd = BoundaryData::singular(singular([1.0, 0.3]));
    let energy = |open_all: bool| {
        let d = Discretization::new(CrackMesh::open(&g, |l| open_all || l == 0).unwrap());
        solve_dirichlet(&d, &mat, &bd).unwrap().elastic_energy(&mat)
    };
    assert!(energy(true) < energy(false));
}

#[test]
fn p1_in_p2_energy_is_monotone() {
    // affine outer data: the P1 and P2 boundary interpolants coincide, so the
    // P1 trial space is contained in the P2 one
    let mat = ElasticMaterial::default();
    let bd = BoundaryData::new(|x, _| vec2(0.0, x.y));
    let e = |order| solve_dirichlet(&disc(0.1, order, &slit(1.0)), &mat, &bd).unwrap().elastic_energy(&mat);
    assert!(e(ElementOrder::P2) <= e(ElementOrder::P1) + 1e-14);
}

#[test]
fn mode_one_data_gives_symmetric_displacement() {
    let mat = ElasticMaterial::default();
    let sd = singular([1.0, 0.0]);
    let d = disc(0.05, ElementOrder::P1, &slit(1.0));
    let u = solve_dirichlet(&d, &mat, &BoundaryData::singular(sd)).unwrap();
    let scale = u.max_abs();
    for &(x, y) in &[(0.3, 0.2), (-0.5, 0.1), (0.1, 0.6), (-0.2, 0.05), (0.7, 0.3)] {
        let a = u.eval(vec2(x, y), Vec2::zeros()).unwrap();
        let b = u.eval(vec2(x, -y), Vec2::zeros()).unwrap();
        // u_x even, u_y odd in y
        assert!((a.x - b.x).abs() < 1e-10 * scale && (a.y + b.y).abs() < 1e-10 * scale, "{a} {b}");
    }
}

#[test]
fn singular_solve_matches_field_on_faces() {
    let mat = ElasticMaterial::default();
    let sd = singular([1.0, 0.5]);
    let d = disc(0.02, ElementOrder::P1, &slit(1.0));
    let u = solve_dirichlet(&d, &mat, &BoundaryData::singular(sd)).unwrap();
    for side in [vec2(0.0, 1.0), vec2(0.0, -1.0)] {
        let x = vec2(-0.5, 0.0);
        let exact = sd.eval_side(x, cracktip_core::singular::Side::from_direction(side));
        let got = u.eval(x, side).unwrap();
        assert!((got - exact).norm() < 0.02 * exact.norm(), "{got} vs {exact}");
    }
    assert!(matches!(u.eval(vec2(2.0, 0.0), Vec2::zeros()), Err(Error::PointOutsideDomain { .. })));
}

#[test]
fn energy_in_ball_of_constant_stress() {
    let d = disc(0.02, ElementOrder::P1, &CrackSet::empty());
    let s = StressField::from_fn(&d, |_| SymTensor2::IDENTITY);
    assert_relative_eq!(s.energy_in_ball(0.5), PI / 2.0, max_relative = 0.02);
    assert_eq!(StressField::zeros(&d).energy_in_ball(0.5), 0.0);
}

#[test]
fn ball_energy_of_singular_solve_scales_with_radius() {
    let mat = ElasticMaterial::default();
    let d = disc(0.01, ElementOrder::P1, &slit(1.0));
    let s = solve_dirichlet(&d, &mat, &BoundaryData::singular(singular([1.0, 0.0]))).unwrap().stress_recovery(&mat);
    let ratios: Vec<f64> = [0.4, 0.2, 0.1, 0.05].iter().map(|&r| s.energy_in_ball(r) / r).collect();
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo - 1.0 < 0.15, "{ratios:?}");
}

fn bump(x: Vec2) -> Vec2 {
    // supported in 0.3 < r < 0.7
    let r = x.norm();
    if r <= 0.3 || r >= 0.7 {
        return Vec2::zeros();
    }
    let t = (r - 0.3) / 0.4;
    let b = (t * (1.0 - t)).powi(3) * 64.0;
    vec2(b * (1.0 + x.x), b * x.y)
}

#[test]
fn flux_balance_residual_is_small_and_decreasing() {
    let mat = ElasticMaterial::default();
    let sd = singular([1.0, 0.5]);
    let res = |h: f64| {
        let d = disc(h, ElementOrder::P1, &slit(1.0));
        let s = solve_dirichlet(&d, &mat, &BoundaryData::singular(sd)).unwrap().stress_recovery(&mat);
        let v = DisplacementField::interpolate(&d, |x, _| bump(x));
        let f = flux_balance_check(&s, &v, 0.5).unwrap();
        f.residual / f.scale
    };
    let (r1, r2) = (res(0.04), res(0.02));
    assert!(r2 < 0.01, "{r2}");
    assert!(r2 < r1, "{r1} -> {r2}");
}

#[test]
fn flux_balance_trivial_cases() {
    let d = disc(0.1, ElementOrder::P1, &slit(1.0));
    let s = StressField::from_fn(&d, |_| SymTensor2::new(1.0, 0.2, -0.3));
    let zero = DisplacementField::zeros(&d);
    assert_eq!(flux_balance_check(&s, &zero, 0.5).unwrap().residual, 0.0);
    let v = DisplacementField::interpolate(&d, |x, _| bump(x));
    assert_eq!(flux_balance_check(&StressField::zeros(&d), &v, 0.5).unwrap().residual, 0.0);
    assert!(matches!(flux_balance_check(&s, &v, 1.5), Err(Error::RadiusOutsideMesh(_))));
}

#[test]
fn floating_components_are_pinned() {
    // a closed crack loop detaches the inner disk from the boundary
    let mat = ElasticMaterial::default();
    let arc = |sign: f64| -> Vec<Vec2> {
        (0..=12).map(|k| PI * k as f64 / 12.0).map(|t| vec2(0.3 * t.cos() - 0.3, sign * 0.3 * t.sin())).collect()
    };
    let crack = CrackSet::new(vec![arc(1.0), arc(-1.0)]).unwrap();
    let d = disc(0.05, ElementOrder::P1, &crack);
    assert_eq!(d.mesh.components().0, 2);
    let (u, stats) =
        solve_with_load(&d, &mat, &OuterCondition::Dirichlet(BoundaryData::rigid(RigidMotion::new(0.1, 0.0, 0.0))), None)
            .unwrap();
    assert_eq!(stats.pinned_components, 3);
    assert!(u.elastic_energy(&mat) < 1e-20);
}

#[test]
fn vtk_export_is_well_formed() {
    let d = disc(0.2, ElementOrder::P1, &slit(1.0));
    let u = DisplacementField::interpolate(&d, |x, _| x);
    let s = u.stress_recovery(&ElasticMaterial::default());
    let mut buf = Vec::new();
    write_vtk(&mut buf, &d.mesh, Some(&u), Some(&s), &[]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("# vtk DataFile Version 3.0"));
    assert!(text.contains(&format!("POINTS {} double", d.mesh.num_nodes())));
    assert!(text.contains(&format!("CELL_TYPES {}", d.mesh.triangles.len())));
    assert!(text.contains("TENSORS stress double"));
}
