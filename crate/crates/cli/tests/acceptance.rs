//! Acceptance criteria 1–10, one line each. Exits non-zero if any fails.

use cracktip_core::airy::{crack_trace_norms, decay_profile, reconstruct_airy, reconstruct_conjugate, reconstruct_gradient_potentials, verify_hessian, PotentialPair};
use cracktip_core::blowup::{fit_modes, DEFAULT_ANNULUS};
use cracktip_core::err::{compute_g, g_eps, limit_functional, r_independence_check, Candidate, IncrementFamily, LimitOptions};
use cracktip_core::fem::{build_disk_mesh, solve_dirichlet, BoundaryData, Discretization, DisplacementField, MeshParams, StressField};
use cracktip_core::model::{CrackSet, ElasticMaterial, SymTensor2};
use cracktip_core::pencil::{spectrum_in_interval, verify_paper_modes, SpectrumOptions};
use cracktip_core::quadrature::gauss_legendre_interval;
use cracktip_core::singular::{airy_coefficient_map, biharmonic_residual, lame_residual, AngleConvention, Side, SingularAiry, SingularDisplacement, SingularModeSet};
use cracktip_core::{vec2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

type Outcome = (bool, String);
/// Name, check, runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn mat() -> ElasticMaterial {
    ElasticMaterial::default()
}

fn modes() -> SingularModeSet {
    SingularModeSet::validated(mat())
}

fn slit() -> CrackSet {
    CrackSet::segment(Vec2::zeros(), vec2(-1.0, 0.0)).unwrap()
}

fn unit_increment() -> CrackSet {
    CrackSet::segment(Vec2::zeros(), vec2(1.0, 0.0)).unwrap()
}

fn singular_solve(h: f64, kappa: [f64; 2]) -> (Arc<Discretization>, DisplacementField) {
    let d = Discretization::new(build_disk_mesh(&MeshParams::new(1.0, h, 0.5), &slit()).unwrap());
    let u = solve_dirichlet(&d, &mat(), &BoundaryData::singular(SingularDisplacement::new(modes(), kappa))).unwrap();
    (d, u)
}

fn slope(h: &[f64], e: &[f64]) -> f64 {
    let n = h.len() - 1;
    (e[0] / e[n]).ln() / (h[0] / h[n]).ln()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn spectrum() -> Outcome {
    let roots = spectrum_in_interval(0.4, 3.6, AngleConvention::default(), SpectrumOptions::default()).unwrap();
    let expect = [0.5, 1.5, 2.0, 2.5, 3.0, 3.5];
    let located = roots.len() == expect.len() && roots.iter().zip(expect).all(|(r, e)| (r.lambda - e).abs() < 1e-8);
    let mult: Vec<usize> = roots.iter().map(|r| r.multiplicity).collect();
    // double everywhere except at 2, as the slit pencil predicts
    let mult_ok = roots.iter().all(|r| (r.multiplicity == 2) != ((r.lambda - 2.0).abs() < 1e-8));
    let err = roots.iter().zip(expect).map(|(r, e)| (r.lambda - e).abs()).fold(0.0, f64::max);
    (located && mult_ok, format!("{} roots, max error {err:.1e}, multiplicities {mult:?}", roots.len()))
}

fn pde_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pts: Vec<Vec2> = (0..20)
        .map(|_| {
            let r = rng.gen_range(0.5..2.0);
            let t = rng.gen_range(-PI + 0.6..PI - 0.6);
            vec2(r * t.cos(), r * t.sin())
        })
        .collect();
    let map = airy_coefficient_map(&modes());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut traction: f64 = 0.0;
    for kappa in [[1.0, 0.0], [0.0, 1.0]] {
        let sd = SingularDisplacement::new(modes(), kappa);
        let sa = SingularAiry::new(modes(), map.apply(kappa));
        for &x in &pts {
            let s1 = (lame_residual(&sd, x, 2e-2).norm() / lame_residual(&sd, x, 1e-2).norm()).log2();
            let s2 = (biharmonic_residual(&sa, x, 4e-2).abs() / biharmonic_residual(&sa, x, 2e-2).abs()).log2();
            lo = lo.min(s1.min(s2));
            hi = hi.max(s1.max(s2));
        }
        for r in [0.25, 1.0, 4.0] {
            for side in [Side::Upper, Side::Lower] {
                traction = traction.max(sd.crack_traction(r, side).norm() / sd.stress_scale(r));
            }
        }
    }
    let pass = lo >= 1.8 && hi <= 2.2 && traction < 1e-8;
    (pass, format!("slopes in [{lo:.3}, {hi:.3}], relative face traction {traction:.1e}"))
}

fn homogeneity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let kappa = [1.0, 0.5];
    let sd = SingularDisplacement::new(modes(), kappa);
    let sa = SingularAiry::new(modes(), airy_coefficient_map(&modes()).apply(kappa));
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s: f64 = rng.gen_range(0.1..10.0);
        let r: f64 = rng.gen_range(0.1..3.0);
        let t = rng.gen_range(-PI..PI);
        let x = vec2(r * t.cos(), r * t.sin());
        let (u, w) = (sd.eval(x) * s.sqrt(), sa.eval(x) * s.powf(1.5));
        let du = (sd.eval(x * s) - u).norm() / (r * s).sqrt();
        let dw = (sa.eval(x * s) - w).abs() / (r * s).powf(1.5);
        worst = worst.max(du).max(dw);
    }
    (worst < 1e-12, format!("max relative deviation {worst:.1e} over 100 samples"))
}

/// `½∫_{B_1} Ce:e` of the singular field by 64×256 polar Gauss points, with
/// the strain from central differences of the displacement.
fn polar_energy(sd: &SingularDisplacement) -> f64 {
    let mut total = 0.0;
    for &(r, wr) in &gauss_legendre_interval(64, 0.0, 1.0) {
        for &(t, wt) in &gauss_legendre_interval(256, -PI, PI) {
            let x = vec2(r * t.cos(), r * t.sin());
            let h = 1e-6 * r;
            let dx = (sd.eval(x + vec2(h, 0.0)) - sd.eval(x - vec2(h, 0.0))) / (2.0 * h);
            let dy = (sd.eval(x + vec2(0.0, h)) - sd.eval(x - vec2(0.0, h))) / (2.0 * h);
            let e = SymTensor2::sym_of(dx.x, dy.x, dx.y, dy.y);
            total += wr * wt * r * 0.5 * mat().apply_hooke(e).ddot(&e);
        }
    }
    total
}

fn manufactured() -> Outcome {
    let kappa = [1.0, 0.5];
    let sd = SingularDisplacement::new(modes(), kappa);
    let hs = [0.04, 0.02, 0.01];
    let mut misfits = Vec::new();
    let mut detail = String::new();
    let mut pass = true;
    for &h in &hs {
        let (_, u) = singular_solve(h, kappa);
        let stress = u.stress_recovery(&mat());
        let pp = PotentialPair::from_stress(&stress).unwrap();
        misfits.push(verify_hessian(&pp.w0, &stress, &[0.0, 0.1, 0.5, 1.0]).relative);
        if h == 0.01 {
            let oracle = polar_energy(&sd);
            let energy_err = rel(u.elastic_energy(&mat()), oracle);
            let kappa_err = [0.2, 0.1, 0.05]
                .iter()
                .map(|&eps| {
                    let f = fit_modes(&u, &modes(), eps, 0.0, DEFAULT_ANNULUS, 256).unwrap();
                    vec2(f.kappa1 - kappa[0], f.kappa2 - kappa[1]).norm() / vec2(kappa[0], kappa[1]).norm()
                })
                .fold(0.0, f64::max);
            let tn = crack_trace_norms(&pp.w0);
            let trace = (tn.value_norm / tn.bulk_value_norm).max(tn.gradient_norm / tn.bulk_gradient_norm);
            pass &= energy_err < 0.02 && kappa_err < 0.02 && trace < 0.05;
            detail = format!("energy {:.2}%, kappa {:.2}%, trace {:.2}% of bulk", 100.0 * energy_err, 100.0 * kappa_err, 100.0 * trace);
        }
    }
    let decreasing = misfits.windows(2).all(|w| w[1] < w[0]);
    let s = slope(&hs, &misfits);
    pass &= decreasing && s >= 0.8;
    (pass, format!("{detail}, hessian misfit {misfits:.3?} slope {s:.2}"))
}

fn energy_decay() -> Outcome {
    let radii = [0.05, 0.1, 0.2, 0.4];
    let (d, u) = singular_solve(0.01, [1.0, 0.5]);
    let ratio = |p: &[(f64, f64)]| {
        p.iter().map(|x| x.1).fold(0.0, f64::max) / p.iter().map(|x| x.1).fold(f64::INFINITY, f64::min)
    };
    let solved = ratio(&decay_profile(&u.stress_recovery(&mat()), &radii).unwrap());
    let sd = SingularDisplacement::new(modes(), [1.0, 0.5]);
    let analytic = StressField::from_fn(&d, |t| sd.stress(d.mesh.centroid(t)));
    let exact = ratio(&decay_profile(&analytic, &radii).unwrap());
    (solved < 2.0 && exact < 1.1, format!("max/min {solved:.3} (solve), {exact:.3} (analytic mode)"))
}

fn err_consistency() -> Outcome {
    let kappa = [1.0, 0.0];
    let bd = BoundaryData::singular(SingularDisplacement::new(modes(), kappa));
    let params = MeshParams::new(1.0, 0.02, 0.5);
    let seq: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&eps| {
            let inc = Candidate::Straight { angle: 0.0 }.increment(&slit(), eps).unwrap();
            compute_g(&slit(), &inc, &params, &mat(), &bd).unwrap() / eps
        })
        .collect();
    let steps: Vec<f64> = seq.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let negative = seq.iter().all(|g| *g < 0.0);
    let stabilizing = steps.windows(2).all(|s| s[1] < s[0]) && rel(seq[3], seq[2]) < 0.05;
    let opts = LimitOptions::default();
    let f = limit_functional(&unit_increment(), kappa, &opts, &mat()).unwrap().value;
    let agree = rel(seq[3], f);
    let family = IncrementFamily {
        angles: vec![-PI / 12.0, 0.0, PI / 12.0],
        refine: true,
        kinks: vec![(0.3, -0.3)],
        kink_split: 0.5,
        circle: true,
    };
    let bounded = [0.2, 0.1, 0.05].iter().all(|&eps| {
        let r = g_eps(&slit(), &family, eps, &params, &mat(), &bd).unwrap();
        r.g_eps <= r.circle_bound
    });
    let spread = r_independence_check(&unit_increment(), kappa, &[2.0, 3.0, 4.0], &opts, &mat()).unwrap().spread;
    let doubled = LimitOptions { outer_radius: 2.0 * opts.outer_radius, ..opts.clone() };
    let doubling = rel(limit_functional(&unit_increment(), kappa, &doubled, &mat()).unwrap().value, f);
    let pass = negative && stabilizing && agree < 0.05 && bounded && spread < 0.03 && doubling < 0.02;
    (
        pass,
        format!(
            "G/eps {seq:.3?}, F {f:.3}, |G/eps-F|/|F| {:.2}%, circle bound held {bounded}, R spread {:.3}%, R_out doubling {:.2}%",
            100.0 * agree,
            100.0 * spread,
            100.0 * doubling
        ),
    )
}

fn load_scaling() -> Outcome {
    let opts = LimitOptions::default();
    let inc = Candidate::Kink { first: 0.3, second: -0.3, split: 0.5 }.increment(&slit(), 1.0).unwrap();
    let kappa = [1.0, 0.5];
    let f: Vec<f64> = [1.0, 2.0, 3.0]
        .iter()
        .map(|&t| limit_functional(&inc, [t * kappa[0], t * kappa[1]], &opts, &mat()).unwrap().value)
        .collect();
    let worst = [1.0, 2.0, 3.0].iter().zip(&f).map(|(t, v)| rel(*v, t * t * f[0])).fold(0.0, f64::max);
    (worst < 0.01 && f[0] < 0.0, format!("F {f:.4?}, max deviation from t^2 scaling {worst:.1e}"))
}

fn dual_invariants() -> Outcome {
    let d = Discretization::new(build_disk_mesh(&MeshParams::new(1.0, 0.08, 0.5), &CrackSet::empty()).unwrap());
    let sig = SymTensor2::new(1.3, -0.4, 0.7);
    let s = StressField::from_fn(&d, |_| sig);
    let tip = d.mesh.vertices[d.mesh.tip_index];
    let v0 = reconstruct_conjugate(&s).unwrap();
    let conj = d.mesh.vertices.iter().zip(&v0).map(|(x, v)| {
        let y = x - tip;
        (v - vec2(-sig.xy * y.x + sig.xx * y.y, -sig.yy * y.x + sig.xy * y.y)).norm()
    });
    let conj = conj.fold(0.0, f64::max);
    let (p1, p2) = reconstruct_gradient_potentials(&s).unwrap();
    let (w, _) = reconstruct_airy(&p1, &p2).unwrap();
    let airy = d.mesh.vertices.iter().zip(&w.values).map(|(x, w)| {
        let y = x - tip;
        (w - 0.5 * (sig.yy * y.x * y.x - 2.0 * sig.xy * y.x * y.y + sig.xx * y.y * y.y)).abs()
    });
    let airy = airy.fold(0.0, f64::max);

    let (_, u) = singular_solve(0.04, [1.0, 0.5]);
    let st = u.stress_recovery(&mat());
    let (q1, q2) = reconstruct_gradient_potentials(&st).unwrap();
    let radii = [0.0, 0.1, 0.5, 1.0];
    let base = verify_hessian(&reconstruct_airy(&q1, &q2).unwrap().0, &st, &radii);
    let shifted = reconstruct_airy(&q1.add_affine(0.37, Vec2::zeros()), &q2.add_affine(-1.2, Vec2::zeros())).unwrap().0;
    let shifted = verify_hessian(&shifted, &st, &radii);
    let gauge = base
        .annuli
        .iter()
        .zip(&shifted.annuli)
        .map(|(a, b)| rel(b.2, a.2))
        .fold(rel(shifted.relative, base.relative), f64::max);
    let pass = conj < 1e-12 && airy < 1e-12 && gauge < 1e-12;
    (pass, format!("conjugate error {conj:.1e}, airy error {airy:.1e}, gauge change {gauge:.1e}"))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden")
}

fn mode_audit() -> Outcome {
    let report = verify_paper_modes().unwrap();
    let convs: Vec<_> = report.audits.iter().map(|a| a.convention).collect();
    let both = AngleConvention::ALL.iter().all(|c| convs.contains(c));
    let default = modes().convention();
    let traction = [[1.0, 0.0], [0.0, 1.0]]
        .iter()
        .flat_map(|&k| {
            let sd = SingularDisplacement::new(modes(), k);
            [Side::Upper, Side::Lower].map(|s| sd.crack_traction(1.0, s).norm() / sd.stress_scale(1.0))
        })
        .fold(0.0, f64::max);
    let text = std::fs::read_to_string(golden_dir().join("paper_mode_audit.txt")).unwrap_or_default();
    let json = std::fs::read_to_string(golden_dir().join("paper_mode_audit.json")).unwrap_or_default();
    let text_ok = report.to_text() == text;
    let json_ok = serde_json::to_string_pretty(&report).unwrap() + "\n" == json;
    let pass = both && default == AngleConvention::PlusMinusPi && traction < 1e-8 && text_ok && json_ok;
    (
        pass,
        format!(
            "default {}, face traction {traction:.1e}, golden text {}, golden json {}",
            default.name(),
            if text_ok { "identical" } else { "differs" },
            if json_ok { "identical" } else { "differs" }
        ),
    )
}

fn determinism() -> Outcome {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/mode_one.toml");
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<PathBuf> = [("a", "1"), ("b", "2")]
        .iter()
        .map(|(name, jobs)| {
            let out = dir.path().join(name);
            let o = Command::new(env!("CARGO_BIN_EXE_cracktip"))
                .args(["all", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", jobs])
                .output()
                .unwrap();
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            out
        })
        .collect();
    let mut names: Vec<String> = std::fs::read_dir(&runs[0])
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv") || n.ends_with(".json"))
        .collect();
    names.sort();
    let differ: Vec<&String> =
        names.iter().filter(|n| std::fs::read(runs[0].join(n)).ok() != std::fs::read(runs[1].join(n)).ok()).collect();
    (differ.is_empty() && names.len() > 10, format!("{} CSV/JSON files compared, differing: {differ:?}", names.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("spectrum reproduction", spectrum, 10),
        ("singular-field PDE residuals", pde_residuals, 30),
        ("homogeneity", homogeneity, 1),
        ("manufactured-solution recovery", manufactured, 180),
        ("energy decay", energy_decay, 60),
        ("ERR consistency", err_consistency, 300),
        ("quadratic load scaling", load_scaling, 120),
        ("dual-construction invariants", dual_invariants, 30),
        ("mode audit", mode_audit, 30),
        ("determinism", determinism, 300),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = f();
        let elapsed = t.elapsed();
        let ok = ok && elapsed < Duration::from_secs(*budget);
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {}: {} ({detail}; {:.1} s of {budget} s)",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
