//! Scenario steps and their artifacts.

use crate::config::{LimitSpec, ScenarioConfig};
use crate::output::{csv_row, Artifacts, Manifest};
use cracktip_core::airy::{arc_poincare_check, conjugate_misfit, crack_trace_norms, decay_profile, verify_hessian, PotentialPair, ScalarField};
use cracktip_core::blowup::{convergence_table, fit_airy_modes};
use cracktip_core::err::{g_eps, limit_functional, r_independence_check, LimitOptions};
use cracktip_core::fem::{build_disk_mesh, solve_dirichlet, write_vtk, Discretization, DisplacementField, StressField};
use cracktip_core::pencil::{spectrum_in_interval, verify_paper_modes};
use cracktip_core::singular::airy_coefficient_map;
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Step {
    Solve,
    Airy,
    Blowup,
    Err,
    Limit,
    Spectrum,
    All,
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Solve => "solve",
            Step::Airy => "airy",
            Step::Blowup => "blowup",
            Step::Err => "err",
            Step::Limit => "limit",
            Step::Spectrum => "spectrum",
            Step::All => "all",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("numerical failure in {step}: {source}")]
    Numerical { step: &'static str, source: cracktip_core::Error },
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl RunError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        RunError::Io { path: path.display().to_string(), source }
    }
}

type Result<T> = std::result::Result<T, RunError>;

fn num<T>(step: &'static str, r: cracktip_core::Result<T>) -> Result<T> {
    r.map_err(|source| RunError::Numerical { step, source })
}

/// Timing goes to stderr only so that artifacts stay byte-identical.
fn timed<T>(step: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    eprintln!("{}", json!({"severity": "info", "step": step, "seconds": t.elapsed().as_secs_f64()}));
    out
}

struct Solved {
    disc: Arc<Discretization>,
    u: DisplacementField,
    stress: StressField,
}

struct Runner<'a> {
    cfg: &'a ScenarioConfig,
    out: Artifacts,
    solved: Option<Solved>,
}

/// Runs `step` and writes its artifacts plus `manifest.json` under `out_dir`.
pub fn run(step: Step, cfg: &ScenarioConfig, out_dir: &Path) -> Result<Manifest> {
    let mut r = Runner { cfg, out: Artifacts::new(out_dir)?, solved: None };
    match step {
        Step::Solve => r.solve()?,
        Step::Airy => r.airy()?,
        Step::Blowup => r.blowup()?,
        Step::Err => r.err()?,
        Step::Limit => r.limit()?,
        Step::Spectrum => r.spectrum()?,
        Step::All => {
            r.solve()?;
            if cfg.airy.is_some() {
                r.airy()?;
            }
            if cfg.blowup.is_some() {
                r.blowup()?;
            }
            if cfg.err.is_some() {
                r.err()?;
            }
            if cfg.limit.is_some() {
                r.limit()?;
            }
            if cfg.spectrum.is_some() {
                r.spectrum()?;
            }
        }
    }
    r.out.finish(step.name(), cfg)
}

impl Runner<'_> {
    fn solved(&mut self) -> Result<&Solved> {
        if self.solved.is_none() {
            let cfg = self.cfg;
            let mat = num("solve", cfg.material())?;
            let (disc, u) = timed("solve", || -> Result<_> {
                let disc = Discretization::new(num("solve", build_disk_mesh(&cfg.mesh, &num("solve", cfg.crack())?))?);
                let u = num("solve", solve_dirichlet(&disc, &mat, &num("solve", cfg.boundary_data())?))?;
                Ok((disc, u))
            })?;
            let stress = u.stress_recovery(&mat);
            self.solved = Some(Solved { disc, u, stress });
        }
        Ok(self.solved.as_ref().unwrap())
    }

    fn solve(&mut self) -> Result<()> {
        let mat = num("solve", self.cfg.material())?;
        let s = self.solved()?;
        let mesh = &s.disc.mesh;
        let energy = s.u.elastic_energy(&mat);
        let summary = json!({
            "energy": energy,
            "nodes": mesh.num_nodes(),
            "triangles": mesh.triangles.len(),
            "order": s.disc.order(),
            "max_displacement": s.u.max_abs(),
        });
        let mut vtk = Vec::new();
        write_vtk(&mut vtk, mesh, Some(&s.u), Some(&s.stress), &[]).expect("in-memory write");
        self.out.json("solve.json", &summary)?;
        self.out.bytes("solve.vtk", &vtk)?;
        self.out.summary("solve.energy", json!(energy));
        Ok(())
    }

    fn airy(&mut self) -> Result<()> {
        let spec = self.cfg.airy.clone().unwrap_or_default();
        let s = self.solved()?;
        let pp = timed("airy", || num("airy", PotentialPair::from_stress(&s.stress)))?;
        let hess = verify_hessian(&pp.w0, &s.stress, &spec.hessian_radii);
        let trace = crack_trace_norms(&pp.w0);
        let decay = num("airy", decay_profile(&s.stress, &spec.decay_radii))?;
        let poincare = match spec.poincare_radius {
            Some(r) => {
                let v = ScalarField::new(&s.disc, pp.v0.iter().map(|v| v.y).collect());
                Some(num("airy", arc_poincare_check(&v, r))?)
            }
            None => None,
        };
        let summary = json!({
            "loop_residual": pp.loop_residual,
            "conjugate_misfit": conjugate_misfit(&s.stress, &pp.v0),
            "hessian": hess,
            "trace": trace,
            "arc_poincare": poincare,
        });
        let mut csv = String::from("rho,energy_over_rho\n");
        for (r, e) in &decay {
            csv.push_str(&csv_row(&[*r, *e]));
        }
        let v0x: Vec<f64> = pp.v0.iter().map(|v| v.x).collect();
        let v0y: Vec<f64> = pp.v0.iter().map(|v| v.y).collect();
        let mut vtk = Vec::new();
        write_vtk(&mut vtk, &s.disc.mesh, None, None, &[("w0", &pp.w0.values), ("v0_x", &v0x), ("v0_y", &v0y)])
            .expect("in-memory write");
        self.out.json("airy.json", &summary)?;
        self.out.text("decay.csv", &csv)?;
        self.out.bytes("airy.vtk", &vtk)?;
        self.out.summary("airy.hessian_misfit", json!(hess.relative));
        self.out.summary("airy.loop_residual", json!(pp.loop_residual));
        Ok(())
    }

    fn blowup(&mut self) -> Result<()> {
        let spec = self.cfg.blowup.clone().unwrap_or_default();
        let crack = num("blowup", self.cfg.crack())?;
        let modes = num("blowup", self.cfg.modes())?;
        let annulus = (spec.annulus[0], spec.annulus[1]);
        let s = self.solved()?;
        let table =
            timed("blowup", || num("blowup", convergence_table(&s.u, &crack, &modes, &spec.eps, annulus, spec.samples)))?;
        let mut csv = String::from("eps,rot,kappa1,kappa2,rigid_a,rigid_b,rigid_c,residual\n");
        for f in &table.fits {
            csv.push_str(&csv_row(&[f.eps, f.rot, f.kappa1, f.kappa2, f.rigid.a, f.rigid.b, f.rigid.c, f.residual]));
        }
        let mut summary = json!({ "fits": table.fits, "kappa_differences": table.kappa_differences });
        if spec.airy {
            let pp = num("blowup", PotentialPair::from_stress(&s.stress))?;
            let map = airy_coefficient_map(&modes);
            let mut airy_csv = String::from("eps,rot,c1,c2,alpha,beta1,beta2,residual,c1_from_kappa,c2_from_kappa\n");
            let mut fits = Vec::new();
            for f in &table.fits {
                let a = num("blowup", fit_airy_modes(&pp.w0, &modes, f.eps, f.rot, annulus, spec.samples))?;
                let mapped = map.apply(f.kappa());
                let [al, b1, b2] = a.calibration;
                airy_csv.push_str(&csv_row(&[a.eps, a.rot, a.c1, a.c2, al, b1, b2, a.residual, mapped[0], mapped[1]]));
                fits.push(a);
            }
            summary["airy_fits"] = json!(fits);
            self.out.text("blowup_airy.csv", &airy_csv)?;
        }
        if let Some(last) = table.fits.last() {
            self.out.summary("blowup.kappa", json!(last.kappa()));
        }
        self.out.text("blowup.csv", &csv)?;
        self.out.json("blowup.json", &summary)?;
        Ok(())
    }

    fn err(&mut self) -> Result<()> {
        let spec = self.cfg.err.clone().unwrap_or_default();
        let base = num("err", self.cfg.crack())?;
        let mat = num("err", self.cfg.material())?;
        let bd = num("err", self.cfg.boundary_data())?;
        let results = timed("err", || {
            spec.eps.iter().map(|&e| num("err", g_eps(&base, &spec.family, e, &self.cfg.mesh, &mat, &bd))).collect::<Result<Vec<_>>>()
        })?;
        let mut csv = String::from("eps,g_eps,minimizer,minimizer_param,circle_bound\n");
        let mut cands = String::from("eps,kind,param,g,g_over_eps\n");
        for r in &results {
            csv.push_str(&format!(
                "{:.16e},{:.16e},{},{:.16e},{:.16e}\n",
                r.eps,
                r.g_eps,
                r.minimizer.name(),
                r.minimizer.param(),
                r.circle_bound
            ));
            for c in &r.candidates {
                cands.push_str(&format!(
                    "{:.16e},{},{:.16e},{:.16e},{:.16e}\n",
                    r.eps,
                    c.candidate.name(),
                    c.candidate.param(),
                    c.g,
                    c.g_over_eps
                ));
            }
        }
        self.out.text("err.csv", &csv)?;
        self.out.text("err_candidates.csv", &cands)?;
        self.out.json("err.json", &results)?;
        self.out.summary("err.g_eps", json!(results.iter().map(|r| r.g_eps).collect::<Vec<_>>()));
        Ok(())
    }

    fn limit(&mut self) -> Result<()> {
        let spec: LimitSpec = self.cfg.limit.clone().unwrap_or_default();
        let mat = num("limit", self.cfg.material())?;
        let inc = num("limit", crate::config::chains_to_crack(&spec.increment))?;
        let kappa = self.cfg.limit_kappa(&spec).ok_or(RunError::Numerical {
            step: "limit",
            source: cracktip_core::Error::InvalidArgument("no load for the limit problem".into()),
        })?;
        let o = &spec.options;
        let f = timed("limit", || num("limit", limit_functional(&inc, kappa, o, &mat)))?;
        let mut csv = String::from("check,parameter,value\n");
        csv.push_str(&format!("base,{:.16e},{:.16e}\n", o.outer_radius, f.value));
        let mut summary = json!({ "kappa": kappa, "options": o, "value": f.value, "stats": f.stats });
        if spec.outer_doubling {
            let doubled = LimitOptions { outer_radius: 2.0 * o.outer_radius, ..o.clone() };
            let g = timed("limit.doubling", || num("limit", limit_functional(&inc, kappa, &doubled, &mat)))?;
            let change = rel(g.value, f.value);
            csv.push_str(&format!("outer_doubling,{:.16e},{:.16e}\n", doubled.outer_radius, g.value));
            summary["outer_doubling"] = json!({ "outer_radius": doubled.outer_radius, "value": g.value, "relative_change": change });
        }
        if !spec.radii.is_empty() {
            let ri = timed("limit.radii", || num("limit", r_independence_check(&inc, kappa, &spec.radii, o, &mat)))?;
            for (r, v) in &ri.values {
                csv.push_str(&format!("radius,{r:.16e},{v:.16e}\n"));
            }
            summary["r_independence"] = json!(ri);
        }
        if !spec.load_scales.is_empty() {
            let vals = timed("limit.scaling", || {
                spec.load_scales
                    .iter()
                    .map(|&t| num("limit", limit_functional(&inc, [t * kappa[0], t * kappa[1]], o, &mat)).map(|r| r.value))
                    .collect::<Result<Vec<_>>>()
            })?;
            for (t, v) in spec.load_scales.iter().zip(&vals) {
                csv.push_str(&format!("load_scale,{t:.16e},{v:.16e}\n"));
            }
            let worst = spec.load_scales.iter().zip(&vals).map(|(t, v)| rel(*v, t * t * f.value)).fold(0.0, f64::max);
            summary["load_scaling"] = json!({ "scales": spec.load_scales, "values": vals, "max_relative_deviation": worst });
        }
        self.out.text("limit.csv", &csv)?;
        self.out.json("limit.json", &summary)?;
        self.out.summary("limit.value", json!(f.value));
        Ok(())
    }

    fn spectrum(&mut self) -> Result<()> {
        let spec = self.cfg.spectrum.clone().unwrap_or_default();
        let [a, b] = spec.interval;
        let roots = timed("spectrum", || num("spectrum", spectrum_in_interval(a, b, spec.convention, spec.options())))?;
        let mut csv = String::from("lambda,multiplicity\n");
        for r in &roots {
            csv.push_str(&format!("{:.16e},{}\n", r.lambda, r.multiplicity));
        }
        self.out.text("spectrum.csv", &csv)?;
        self.out.json("spectrum_eigenfunctions.json", &json!({ "convention": spec.convention, "roots": roots }))?;
        if spec.audit {
            let report = num("spectrum", verify_paper_modes())?;
            self.out.text("paper_mode_audit.txt", &report.to_text())?;
            self.out.json("paper_mode_audit.json", &report)?;
        }
        self.out.summary("spectrum.roots", Value::from(roots.iter().map(|r| r.lambda).collect::<Vec<_>>()));
        Ok(())
    }
}

/// `|a − b| / |b|`, zero when both vanish.
fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}
