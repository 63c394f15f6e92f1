use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use super::config::{ConfigError, Experiment, ScenarioConfig};
use crate::master::{
    decoherence_relaxation_ratio, reduced_thermal_wavelength, CaldeiraLeggettModel,
    FreeDecoherenceModel, IntegrationPlan, Propagator, Scheme,
};
use crate::qcore::{
    build_gaussian_packet, cat_state, coherence_length, DensityMatrix, SpatialGrid, WaveFunction,
};
use crate::rates::{
    apply_spatial_decoherence, gravity_coherence_width, gravity_rate, load_table1_presets,
    qed_dominance_ratio, qed_pair_exponent, qed_vacuum_exponent, table1_from_presets,
    table1_generate, GravityScenario, QedScenario,
};
use crate::tolerance;
use crate::wigner::{
    oscillator_eigenstate, wigner_transform, write_wigner_binary, write_wigner_csv,
};
use crate::zeno::{
    classical_decay_survival, coupling_scan, energy_variance, evolve_chiral, evolve_pointer_model,
    left_population, left_state_density, repeated_measurement_survival, survival_probability,
    ChiralModel, DecaySystem, PointerModel,
};

/// Failure of a scenario run, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical error in {context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: crate::Error,
    },
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    /// 2 configuration, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

fn numeric(context: &str) -> impl FnOnce(crate::Error) -> CliError + '_ {
    move |source| CliError::Numeric {
        context: context.to_string(),
        source,
    }
}

/// Summary of one run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub experiment: Experiment,
    pub config_echo: String,
    pub wall_time: Duration,
    /// Invariant diagnostics as `(name, value)`.
    pub diagnostics: Vec<(String, String)>,
    /// Headline results.
    pub lines: Vec<String>,
    pub manifest: Vec<PathBuf>,
}

impl RunReport {
    pub fn diagnostic(&self, name: &str) -> Option<&str> {
        self.diagnostics
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.experiment)?;
        for line in self.config_echo.lines() {
            writeln!(f, "  | {line}")?;
        }
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        if !self.diagnostics.is_empty() {
            writeln!(f, "diagnostics:")?;
            for (k, v) in &self.diagnostics {
                writeln!(f, "  {k} = {v}")?;
            }
        }
        writeln!(f, "outputs:")?;
        for p in &self.manifest {
            writeln!(f, "  {}", p.display())?;
        }
        write!(f, "wall time: {:.3} s", self.wall_time.as_secs_f64())
    }
}

struct Run<'a> {
    cfg: &'a ScenarioConfig,
    dir: PathBuf,
    diagnostics: Vec<(String, String)>,
    lines: Vec<String>,
    manifest: Vec<PathBuf>,
}

impl<'a> Run<'a> {
    fn diag(&mut self, name: &str, value: impl fmt::Display) {
        self.diagnostics.push((name.to_string(), value.to_string()));
    }

    fn line(&mut self, text: String) {
        self.lines.push(text);
    }

    fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Writes `name` with the metadata block followed by `body`.
    fn csv(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
    ) -> Result<(), CliError> {
        let cfg = self.cfg;
        self.file(name, |w| {
            writeln!(w, "# decolab {}", env!("CARGO_PKG_VERSION"))?;
            writeln!(w, "# units = {}", units_of(cfg.experiment))?;
            for line in cfg.echo().lines() {
                writeln!(w, "# {line}")?;
            }
            body(w)
        })
    }

    fn file(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(Self::io_err(&path))?;
        let mut w = BufWriter::new(file);
        body(&mut w).map_err(Self::io_err(&path))?;
        w.flush().map_err(Self::io_err(&path))?;
        self.manifest.push(path);
        Ok(())
    }
}

fn units_of(e: Experiment) -> &'static str {
    match e {
        Experiment::Gravity | Experiment::Table1 => "cgs",
        _ => "natural",
    }
}

fn fmt_e(x: f64) -> String {
    format!("{x:.12e}")
}

/// Runs a validated scenario, writing outputs into `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunReport, CliError> {
    let start = Instant::now();
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut run = Run {
        cfg,
        dir: out_dir.to_path_buf(),
        diagnostics: Vec::new(),
        lines: Vec::new(),
        manifest: Vec::new(),
    };
    match cfg.experiment {
        Experiment::Localize => localize(&mut run)?,
        Experiment::EvolveFree => evolve_free(&mut run)?,
        Experiment::EvolveCl => evolve_cl(&mut run)?,
        Experiment::Wigner => wigner(&mut run)?,
        Experiment::ZenoAnalytic => zeno_analytic(&mut run)?,
        Experiment::ZenoPointer => zeno_pointer(&mut run)?,
        Experiment::Chiral => chiral(&mut run)?,
        Experiment::Qed => qed(&mut run)?,
        Experiment::Gravity => gravity(&mut run)?,
        Experiment::Table1 => table1(&mut run)?,
        Experiment::Sweep => sweep(&mut run)?,
    }
    Ok(RunReport {
        experiment: cfg.experiment,
        config_echo: cfg.echo(),
        wall_time: start.elapsed(),
        diagnostics: run.diagnostics,
        lines: run.lines,
        manifest: run.manifest,
    })
}

fn grid(cfg: &ScenarioConfig) -> Result<SpatialGrid, CliError> {
    SpatialGrid::new(cfg.usize("n_points")?, cfg.f64("x_min")?, cfg.f64("x_max")?)
        .map_err(numeric("grid"))
}

fn nearest(grid: &SpatialGrid, x: f64) -> usize {
    let i = ((x - grid.x_min()) / grid.spacing()).round();
    (i.max(0.0) as usize).min(grid.len() - 1)
}

fn write_density(
    run: &mut Run,
    name: &str,
    a: &DensityMatrix,
    b: &DensityMatrix,
) -> Result<(), CliError> {
    let g = *a.grid().expect("spatial");
    let (ea, eb) = (a.elements(), b.elements());
    run.csv(name, |w| {
        writeln!(w, "x,x_prime,abs_rho_initial,abs_rho_decohered")?;
        for i in 0..g.len() {
            for j in 0..g.len() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt_e(g.point(i)),
                    fmt_e(g.point(j)),
                    fmt_e(ea[(i, j)].norm()),
                    fmt_e(eb[(i, j)].norm())
                )?;
            }
        }
        Ok(())
    })
}

fn localize(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let g = grid(cfg)?;
    let (d, width) = (cfg.f64("separation")?, cfg.f64("width")?);
    let (lambda, t) = (cfg.f64("lambda")?, cfg.f64("t")?);
    let rho0 = DensityMatrix::pure(&cat_state(g, d, width).map_err(numeric("cat state"))?);
    let rho1 =
        apply_spatial_decoherence(&rho0, lambda, t).map_err(numeric("decoherence factor"))?;
    write_density(run, "density.csv", &rho0, &rho1)?;
    let (p0, p1) = (rho0.position_distribution(), rho1.position_distribution());
    run.csv("position.csv", |w| {
        writeln!(w, "x,p_initial,p_decohered")?;
        for i in 0..g.len() {
            writeln!(w, "{},{},{}", fmt_e(g.point(i)), fmt_e(p0[i]), fmt_e(p1[i]))?;
        }
        Ok(())
    })?;
    let (l, r) = (nearest(&g, -0.5 * d), nearest(&g, 0.5 * d));
    let sep = g.point(r) - g.point(l);
    let ratio = |rho: &DensityMatrix| rho.elements()[(l, r)].norm() / rho.elements()[(l, l)].norm();
    let (before, after) = (ratio(&rho0), ratio(&rho1));
    run.line(format!(
        "off-diagonal peak / diagonal peak: {before:.6} -> {after:.6}"
    ));
    run.line(format!(
        "damping factor {:.6e} (expected {:.6e})",
        after / before,
        (-lambda * t * sep * sep).exp()
    ));
    let diag = rho1.diagnostics();
    run.diag("trace_error", fmt_e(diag.trace_error));
    run.diag("hermiticity_residue", fmt_e(diag.hermiticity_residue));
    run.diag("boundary_leak", false);
    Ok(())
}

fn plan(cfg: &ScenarioConfig) -> Result<IntegrationPlan, CliError> {
    let scheme = Scheme::from_tag(cfg.get("scheme")?).unwrap_or_default();
    IntegrationPlan::covering(
        cfg.f64("t_final")?,
        cfg.f64("dt")?,
        cfg.usize("records")?,
        scheme,
    )
    .map_err(numeric("integration plan"))
}

fn packet(cfg: &ScenarioConfig, g: SpatialGrid) -> Result<WaveFunction, CliError> {
    build_gaussian_packet(
        g,
        cfg.f64("center")?,
        cfg.f64("sigma0")?,
        cfg.f64("momentum")?,
    )
    .map_err(numeric("initial packet"))
}

fn evolve_free(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let g = grid(cfg)?;
    let model = FreeDecoherenceModel::new(cfg.f64("mass")?, cfg.f64("lambda")?)
        .map_err(numeric("model"))?;
    let psi = packet(cfg, g)?;
    let plan = plan(cfg)?;
    let series = crate::master::coherence_length_series(model, &psi, &plan)
        .map_err(numeric("integration"))?;
    run.csv("series.csv", |w| {
        writeln!(w, "t,coherence_length,trace_error,purity")?;
        for s in &series.samples {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_e(s.t),
                fmt_e(s.coherence_length),
                fmt_e(s.trace_error),
                fmt_e(s.purity)
            )?;
        }
        Ok(())
    })?;
    if let Some(last) = series.last() {
        run.line(format!(
            "t = {:.6}: coherence length {:.6e}",
            last.t, last.coherence_length
        ));
    }
    if let Some(e) = &series.truncated {
        run.line(format!("run truncated: {e}"));
    }
    let purity_ok = series
        .samples
        .windows(2)
        .all(|w| w[1].purity <= w[0].purity * (1.0 + 1e-12));
    run.diag("samples", series.samples.len());
    run.diag(
        "max_trace_error",
        fmt_e(
            series
                .samples
                .iter()
                .map(|s| s.trace_error)
                .fold(0.0, f64::max),
        ),
    );
    run.diag(
        "max_hermiticity_residue",
        fmt_e(
            series
                .samples
                .iter()
                .map(|s| s.hermiticity_residue)
                .fold(0.0, f64::max),
        ),
    );
    run.diag("purity_non_increasing", purity_ok);
    run.diag("boundary_leak", series.truncated.is_some());
    Ok(())
}

fn evolve_cl(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    if cfg.get("mode")? == "ratio" {
        let (m, t, dx) = (
            cfg.f64("mass_g")?,
            cfg.f64("temperature_k")?,
            cfg.f64("dx_cm")?,
        );
        let ratio = decoherence_relaxation_ratio(m, t, dx).map_err(numeric("ratio"))?;
        let lth = reduced_thermal_wavelength(m, t).map_err(numeric("thermal wavelength"))?;
        run.csv("ratio.csv", |w| {
            writeln!(w, "mass_g,temperature_k,dx_cm,thermal_wavelength_cm,ratio")?;
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_e(m),
                fmt_e(t),
                fmt_e(dx),
                fmt_e(lth),
                fmt_e(ratio)
            )
        })?;
        run.line(format!("decoherence/relaxation ratio = {ratio:.4e}"));
        run.line(format!("thermal wavelength = {lth:.4e} cm"));
        return Ok(());
    }
    let g = grid(cfg)?;
    let model =
        CaldeiraLeggettModel::new(cfg.f64("mass")?, cfg.f64("gamma")?, cfg.f64("temperature")?)
            .map_err(numeric("model"))?;
    let psi = packet(cfg, g)?;
    let plan = plan(cfg)?;
    let prop = Propagator::caldeira_leggett(g, &model, plan.dt, plan.scheme)
        .map_err(numeric("propagator"))?;
    let mut rho = DensityMatrix::pure(&psi);
    let mut rows = Vec::new();
    let mut leak = None;
    let mut max_herm: f64 = 0.0;
    let mut max_trace: f64 = 0.0;
    let mut record = |t: f64, rho: &DensityMatrix| -> Result<[f64; 5], CliError> {
        let d = rho.diagnostics();
        max_herm = max_herm.max(d.hermiticity_residue);
        max_trace = max_trace.max(d.trace_error);
        Ok([
            t,
            coherence_length(rho).map_err(numeric("coherence length"))?,
            d.trace_error,
            rho.purity(),
            rho.mean_momentum().map_err(numeric("momentum"))?,
        ])
    };
    rows.push(record(0.0, &rho)?);
    for step in 1..=plan.n_steps {
        prop.step(&mut rho).map_err(numeric("integration"))?;
        if step % plan.record_every == 0 || step == plan.n_steps {
            let ratio = rho.boundary_ratio();
            if ratio >= tolerance::BOUNDARY_LEAK {
                leak = Some(ratio);
                break;
            }
            rows.push(record(step as f64 * plan.dt, &rho)?);
        }
    }
    run.csv("series.csv", |w| {
        writeln!(w, "t,coherence_length,trace_error,purity,mean_momentum")?;
        for r in &rows {
            writeln!(w, "{}", r.map(fmt_e).join(","))?;
        }
        Ok(())
    })?;
    let last = rows.last().expect("initial row");
    run.line(format!(
        "t = {:.6}: <p> = {:.6e}, coherence length {:.6e}",
        last[0], last[4], last[1]
    ));
    run.line(format!("lambda = m gamma k_B T = {:.6e}", model.lambda()));
    run.diag("samples", rows.len());
    run.diag("max_trace_error", fmt_e(max_trace));
    run.diag("max_hermiticity_residue", fmt_e(max_herm));
    run.diag("min_diagonal", fmt_e(rho.diagnostics().min_diagonal));
    run.diag("boundary_leak", leak.is_some());
    Ok(())
}

fn wigner(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let g = grid(cfg)?;
    let psi = match cfg.get("state")? {
        "gaussian" => build_gaussian_packet(g, 0.0, cfg.f64("width")?, 0.0),
        "cat" => cat_state(g, cfg.f64("separation")?, cfg.f64("width")?),
        _ => oscillator_eigenstate(g, cfg.usize("n")?, 1.0),
    }
    .map_err(numeric("state"))?;
    let rho0 = DensityMatrix::pure(&psi);
    let rho1 = apply_spatial_decoherence(&rho0, cfg.f64("lambda_t")?, 1.0)
        .map_err(numeric("decoherence factor"))?;
    let output = cfg.get("output")?;
    if output != "wigner" {
        write_density(run, "density.csv", &rho0, &rho1)?;
    }
    if output != "density" {
        for (tag, rho) in [("pure", &rho0), ("decohered", &rho1)] {
            let w = wigner_transform(rho).map_err(numeric("wigner transform"))?;
            run.csv(&format!("wigner_{tag}.csv"), |out| {
                write_wigner_csv(&w, out)
            })?;
            run.file(&format!("wigner_{tag}.bin"), |out| {
                write_wigner_binary(&w, out)
            })?;
            run.line(format!(
                "{tag}: min W = {:.6e}, var_x = {:.6}, var_p = {:.6}",
                w.min_value(),
                w.variance_x(),
                w.variance_p()
            ));
            run.diag(
                &format!("{tag}_normalisation_error"),
                fmt_e((w.normalisation() - 1.0).abs()),
            );
            run.diag(&format!("{tag}_imag_residue"), fmt_e(w.imag_residue()));
        }
    }
    run.diag("hermiticity_residue", fmt_e(rho1.hermiticity_residue()));
    run.diag("trace_error", fmt_e(rho1.diagnostics().trace_error));
    Ok(())
}

fn zeno_analytic(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let (v, t, n_max, gamma) = (
        cfg.f64("v")?,
        cfg.f64("t")?,
        cfg.usize("n_max")?,
        cfg.f64("gamma_decay")?,
    );
    let sys = DecaySystem::two_level(v);
    let mut rows = Vec::new();
    for n in 1..=n_max as u32 {
        let pn = repeated_measurement_survival(&sys, t, n).map_err(numeric("zeno"))?;
        let pc = classical_decay_survival(gamma, t, n).map_err(numeric("classical decay"))?;
        rows.push((n, pn, pc));
    }
    run.csv("zeno.csv", |w| {
        writeln!(w, "N,P_N,classical_P_N")?;
        for (n, pn, pc) in &rows {
            writeln!(w, "{n},{},{}", fmt_e(*pn), fmt_e(*pc))?;
        }
        Ok(())
    })?;
    let increasing = rows.windows(2).all(|w| w[1].1 > w[0].1);
    run.line(format!(
        "P(t) = {:.6e}, (dH)^2 = {:.6e}",
        survival_probability(&sys, t),
        energy_variance(&sys)
    ));
    run.line(format!(
        "P_N at N = {n_max}: {:.6e}",
        rows.last().map(|r| r.1).unwrap_or(f64::NAN)
    ));
    run.diag("strictly_increasing_in_n", increasing);
    run.diag(
        "classical_n_independent",
        rows.iter().all(|r| r.2 == rows[0].2),
    );
    Ok(())
}

fn zeno_pointer(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let g = grid(cfg)?;
    let model = PointerModel::new(
        cfg.f64("v")?,
        cfg.f64("e")?,
        cfg.f64("gamma")?,
        g,
        cfg.f64("pointer_width")?,
    )
    .map_err(numeric("pointer model"))?;
    if cfg.get("mode")? == "scan" {
        let (lo, hi, count) = (
            cfg.f64("gamma_min")?,
            cfg.f64("gamma_max")?,
            cfg.usize("gamma_count")?,
        );
        let gammas: Vec<f64> = (0..count)
            .map(|i| {
                if count == 1 {
                    lo
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect();
        let t = cfg.f64("t_fixed")?;
        let scan = coupling_scan(&model, t, &gammas).map_err(numeric("coupling scan"))?;
        run.csv("coupling_scan.csv", |w| {
            writeln!(w, "gamma,P2")?;
            for (g, p) in &scan {
                writeln!(w, "{},{}", fmt_e(*g), fmt_e(*p))?;
            }
            Ok(())
        })?;
        let peak = scan
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let tail_decreasing = scan[peak..].windows(2).all(|w| w[1].1 < w[0].1);
        run.line(format!(
            "P2(t = {t:.6}) at gamma = {:.3}: {:.6e}",
            scan[0].0, scan[0].1
        ));
        if let Some(last) = scan.last() {
            run.line(format!(
                "P2(t = {t:.6}) at gamma = {:.3}: {:.6e}",
                last.0, last.1
            ));
        }
        run.diag("tail_decreasing", tail_decreasing);
        run.diag("boundary_leak", false);
        return Ok(());
    }
    let plan = plan_no_scheme(cfg)?;
    let series = evolve_pointer_model(&model, &plan);
    run.csv("pointer_series.csv", |w| {
        writeln!(w, "t,P2")?;
        for s in &series.samples {
            writeln!(w, "{},{}", fmt_e(s.t), fmt_e(s.p2))?;
        }
        Ok(())
    })?;
    if let Some(t) = model.resolution_time() {
        run.line(format!("pointer resolves the two states at t = {t:.6e}"));
    }
    if let Some(last) = series.samples.last() {
        run.line(format!("P2(t = {:.6}) = {:.6e}", last.t, last.p2));
    }
    if let Some(e) = &series.truncated {
        run.line(format!("run truncated: {e}"));
    }
    run.diag(
        "max_norm_error",
        fmt_e(
            series
                .samples
                .iter()
                .map(|s| s.norm_error)
                .fold(0.0, f64::max),
        ),
    );
    run.diag("boundary_leak", series.truncated.is_some());
    Ok(())
}

fn plan_no_scheme(cfg: &ScenarioConfig) -> Result<IntegrationPlan, CliError> {
    IntegrationPlan::covering(
        cfg.f64("t_final")?,
        cfg.f64("dt")?,
        cfg.usize("records")?,
        Scheme::SplitStep,
    )
    .map_err(numeric("integration plan"))
}

fn chiral(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let model = ChiralModel::new(cfg.f64("delta")?, cfg.f64("lambda_env")?)
        .map_err(numeric("chiral model"))?;
    let records = cfg.usize("records")?;
    let t_end = cfg.f64("periods")? * model.period();
    let rho0 = left_state_density();
    let mut rows = Vec::with_capacity(records + 1);
    for i in 0..=records {
        let t = t_end * i as f64 / records as f64;
        let rho = evolve_chiral(&model, &rho0, t).map_err(numeric("chiral evolution"))?;
        rows.push((t, left_population(&rho)));
    }
    run.csv("chiral.csv", |w| {
        writeln!(w, "t,P_L")?;
        for (t, p) in &rows {
            writeln!(w, "{},{}", fmt_e(*t), fmt_e(*p))?;
        }
        Ok(())
    })?;
    let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    run.line(format!(
        "min P_L over {} periods: {min:.6}",
        cfg.f64("periods")?
    ));
    run.diag("min_left_population", fmt_e(min));
    Ok(())
}

fn qed(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let base = QedScenario::new(
        cfg.f64("charge")?,
        cfg.f64("mass")?,
        cfg.f64("field")?,
        cfg.f64("volume")?,
        0.0,
    )
    .map_err(numeric("qed scenario"))?;
    let (t0, t1, count) = (cfg.f64("t_min")?, cfg.f64("t_max")?, cfg.usize("count")?);
    let mut rows = Vec::new();
    for i in 0..count {
        let t = if count == 1 {
            t0
        } else {
            t0 * (t1 / t0).powf(i as f64 / (count - 1) as f64)
        };
        let s = base.at_time(t);
        let ratio = qed_dominance_ratio(&s).ok();
        rows.push((t, qed_vacuum_exponent(&s), qed_pair_exponent(&s), ratio));
    }
    run.csv("qed.csv", |w| {
        writeln!(w, "t,ln_D_V,ln_D_PC,D_V,D_PC,dominance_ratio")?;
        for (t, lv, lp, r) in &rows {
            let r = r.map(fmt_e).unwrap_or_else(|| "nan".into());
            writeln!(
                w,
                "{},{},{},{},{},{r}",
                fmt_e(*t),
                fmt_e(*lv),
                fmt_e(*lp),
                fmt_e(lv.exp()),
                fmt_e(lp.exp())
            )?;
        }
        Ok(())
    })?;
    run.line(format!(
        "critical field m^2/e = {:.6e}",
        base.critical_field()
    ));
    if let (Some(a), Some(b)) = (
        rows.first().and_then(|r| r.3),
        rows.last().and_then(|r| r.3),
    ) {
        run.line(format!(
            "dominance ratio {a:.6e} -> {b:.6e} (factor {:.3})",
            a / b
        ));
    } else {
        run.line("field at or below the critical field: dominance ratio undefined".into());
    }
    Ok(())
}

fn gravity(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let s = GravityScenario::new(
        cfg.f64("density")?,
        cfg.f64("particle_mass")?,
        cfg.f64("temperature")?,
        cfg.f64("box_size")?,
        cfg.f64("time")?,
    )
    .map_err(numeric("gravity scenario"))?;
    let rate = gravity_rate(&s);
    let width = gravity_coherence_width(&s, cfg.f64("g_ref")?);
    run.csv("gravity.csv", |w| {
        writeln!(w, "rate,dg_over_g")?;
        writeln!(w, "{},{}", fmt_e(rate), fmt_e(width))
    })?;
    run.line(format!("rate = {rate:.4e}"));
    run.line(format!("dg_over_g = {width:.4e}"));
    Ok(())
}

fn table1(run: &mut Run) -> Result<(), CliError> {
    let path = run.cfg.get("presets")?;
    let rows = if path.is_empty() {
        table1_generate()
    } else {
        table1_from_presets(&load_table1_presets(Path::new(path)).map_err(numeric("preset file"))?)
    };
    run.csv("table1.csv", |w| {
        writeln!(
            w,
            "environment,size_cm,regime,reference_value,computed,log10_deviation"
        )?;
        for r in &rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.environment,
                fmt_e(r.size_cm),
                r.regime,
                fmt_e(r.reference_value()),
                fmt_e(r.lambda),
                fmt_e(r.log10_deviation())
            )?;
        }
        Ok(())
    })?;
    for r in &rows {
        run.line(format!(
            "{:<28} a = {:.0e} cm  reference 1e{:<4} computed {:.3e}  deviation {:+.2} decades{}",
            r.environment,
            r.size_cm,
            r.reference_log10,
            r.lambda,
            r.log10_deviation(),
            if r.regime == crate::rates::Regime::LongWavelength {
                "  [long_wavelength_regime]"
            } else {
                ""
            }
        ));
    }
    let worst = rows
        .iter()
        .map(|r| r.log10_deviation().abs())
        .fold(0.0, f64::max);
    run.diag("cells", rows.len());
    run.diag("max_abs_log10_deviation", format!("{worst:.3}"));
    Ok(())
}

fn sweep(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg;
    let parameter = cfg.get("parameter")?.to_string();
    let values = cfg.sweep_values();
    let instances = values
        .iter()
        .map(|v| cfg.sweep_instance(v).map(|c| (v.clone(), c)))
        .collect::<Result<Vec<_>, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.usize("workers")?)
        .build()
        .map_err(|e| {
            CliError::Config(ConfigError::Validation {
                key: "workers".into(),
                reason: e.to_string(),
            })
        })?;
    let dir = run.dir.clone();
    let reports: Vec<Result<RunReport, CliError>> = pool.install(|| {
        instances
            .par_iter()
            .map(|(v, c)| run_scenario(c, &dir.join(format!("{parameter}_{v}"))))
            .collect()
    });
    for ((v, _), report) in instances.iter().zip(reports) {
        let report = report?;
        run.line(format!("-- {parameter} = {v}"));
        run.lines.extend(report.lines);
        for (k, val) in report.diagnostics {
            run.diag(&format!("{parameter}={v}:{k}"), val);
        }
        run.manifest.extend(report.manifest);
    }
    Ok(())
}
