//! Registered experiments: the maximal-regularity campaign, the elementary
//! estimate checks, the appendix suite, the localization consistency study
//! and a refinement study.

use ndarray::{Array2, Array4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::elementary::{
    heat_solver, solve_frac_backward, solve_frac_forward, solve_heat_dirichlet, ModeProblem,
};
use crate::halfspace::solve_halfspace;
use crate::harness::config::ExperimentConfig;
use crate::harness::ensemble::{generate_forcing, sample_rng, EnsembleSpec};
use crate::harness::report::Record;
use crate::kernel_lab::{check_by_name, InequalityReport};
use crate::norms::{lhs_norm_suite, NormEvaluator, NormKind, NormMode, NormSuite, LHS_NORMS};
use crate::spectral::stencil::{dt, dz, dzz};
use crate::spectral::{Component, FieldLayout, SpectralField};
use crate::strip::{consistency_check, solve_strip};
use crate::{Error, Result};

/// A sample that failed and was set aside.
#[derive(Debug, Clone, PartialEq)]
pub struct Quarantine {
    pub r: f64,
    pub level: usize,
    pub sample: usize,
    pub reason: String,
}

/// Ensemble max of a ratio at one `(R, level)`; NaN when no sample survived.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelMax {
    pub name: String,
    pub r: f64,
    pub level: usize,
    pub max_ratio: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub records: Vec<Record>,
    pub quarantined: Vec<Quarantine>,
    pub levels: Vec<LevelMax>,
    pub reports: Vec<InequalityReport>,
    pub summary: Vec<String>,
    pub pass: bool,
}

/// An experiment selectable by name.
pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput>;
}

struct Mre;
struct Props;
struct Kernels;
struct Lemmas;
struct Consistency;
struct Convergence;

/// Every registered experiment.
pub fn experiments() -> Vec<Box<dyn Experiment>> {
    vec![
        Box::new(Mre),
        Box::new(Props),
        Box::new(Kernels),
        Box::new(Lemmas),
        Box::new(Consistency),
        Box::new(Convergence),
    ]
}

pub fn experiment_by_name(name: &str) -> Result<Box<dyn Experiment>> {
    experiments()
        .into_iter()
        .find(|e| e.name() == name)
        .ok_or_else(|| Error::UnknownStrategy {
            kind: "experiment",
            name: name.to_string(),
        })
}

/// Size `STOKESBAND_THREADS` the global worker pool (unset or 0: automatic).
/// Returns the number of workers in use.
pub fn configure_threads() -> Result<usize> {
    let n = match std::env::var("STOKESBAND_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("STOKESBAND_THREADS = '{v}' is not a count")))?,
        Err(_) => 0,
    };
    // A second call finds the pool already built; that is fine.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(rayon::current_num_threads())
}

struct RowBase<'a> {
    cfg: &'a ExperimentConfig,
    experiment: &'a str,
    r: f64,
    layout: &'a FieldLayout,
    spec: &'a EnsembleSpec,
    level: usize,
}

impl RowBase<'_> {
    fn row(&self, sample: usize, name: &str, lhs: f64, rhs: f64, ratio: f64, kind: &str) -> Record {
        Record {
            experiment: self.experiment.to_string(),
            r: self.r,
            l: self.cfg.length,
            d: self.cfg.dim,
            n_modes: self.spec.n_modes,
            nz: self.layout.vgrid.panels(),
            nt: self.layout.tgrid.steps(),
            zmax: self.layout.vgrid.upper(),
            horizon: self.cfg.horizon,
            seed: self.spec.seed,
            sample,
            norm_name: name.to_string(),
            lhs,
            rhs,
            ratio,
            lower_or_upper: kind.to_string(),
            refine_level: self.level,
        }
    }
}

fn forcing(layout: &FieldLayout, spec: &EnsembleSpec, sample: usize) -> SpectralField {
    generate_forcing(layout, spec, &mut sample_rng(spec.seed, 0, sample as u64))
}

/// Whether every consecutive pair of levels differs by at most `factor`, per name and R.
fn refinement_stable(levels: &[LevelMax], factor: f64) -> bool {
    levels.iter().all(|a| {
        levels
            .iter()
            .filter(|b| b.name == a.name && b.r == a.r && b.level == a.level + 1)
            .all(|b| {
                if a.samples == 0 || b.samples == 0 {
                    return true;
                }
                let q = b.max_ratio / a.max_ratio;
                q.is_finite() && q <= factor && q >= 1.0 / factor
            })
    })
}

fn level_max(name: &str, r: f64, level: usize, ratios: &[f64]) -> LevelMax {
    LevelMax {
        name: name.to_string(),
        r,
        level,
        max_ratio: ratios.iter().copied().fold(f64::NAN, f64::max),
        samples: ratios.len(),
    }
}

/// Result of the maximal-regularity campaign.
#[derive(Debug, Clone, Default)]
pub struct MreOutcome {
    pub records: Vec<Record>,
    pub levels: Vec<LevelMax>,
    pub quarantined: Vec<Quarantine>,
    /// Every surviving sample has a finite ratio and none was quarantined.
    pub finite: bool,
    /// Ensemble max changes by at most `refine_tolerance` between levels.
    pub refinement_stable: bool,
    /// Ensemble max grows by at most `r_growth_tolerance` from each R to the next smaller one.
    pub no_blow_up: bool,
}

impl MreOutcome {
    pub fn pass(&self) -> bool {
        self.finite && self.refinement_stable && self.no_blow_up
    }
}

/// Strip solve and norm suite for one sample.
pub fn mre_sample(f: &SpectralField, eval: &NormEvaluator) -> Result<NormSuite> {
    let sol = solve_strip(f)?;
    lhs_norm_suite(&sol.state, f, eval)
}

/// For every level, R and sample: strip solve, five LHS norms (banded upper)
/// over the forcing norm (lower). Failed samples are quarantined.
pub fn run_mre_experiment(cfg: &ExperimentConfig) -> Result<MreOutcome> {
    cfg.validate()?;
    let mut out = MreOutcome {
        finite: true,
        ..Default::default()
    };
    for level in 0..=cfg.refine {
        for &r in &cfg.r_grid {
            let layout = cfg.strip_layout(r, level)?;
            let spec = cfg.ensemble_for(&layout);
            let eval = NormEvaluator::new(&layout, NormKind::Strip)?;
            let results: Vec<Result<NormSuite>> = (0..spec.samples)
                .into_par_iter()
                .map(|s| mre_sample(&forcing(&layout, &spec, s), &eval))
                .collect();
            let base = RowBase {
                cfg,
                experiment: "mre",
                r,
                layout: &layout,
                spec: &spec,
                level,
            };
            let mut ratios = Vec::new();
            for (s, res) in results.into_iter().enumerate() {
                let suite = match res {
                    Ok(suite) => suite,
                    Err(e) => {
                        out.quarantined.push(Quarantine {
                            r,
                            level,
                            sample: s,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                };
                let Some(ratio) = suite.ratio.filter(|q| q.is_finite()) else {
                    let reason = if suite.anomaly {
                        "zero forcing norm with nonzero response"
                    } else {
                        "non-finite ratio"
                    };
                    out.quarantined.push(Quarantine {
                        r,
                        level,
                        sample: s,
                        reason: reason.into(),
                    });
                    continue;
                };
                for e in &suite.lhs {
                    out.records.push(base.row(
                        s,
                        e.name,
                        e.upper,
                        suite.rhs,
                        e.upper / suite.rhs,
                        "upper",
                    ));
                    out.records.push(base.row(
                        s,
                        e.name,
                        e.lower,
                        suite.rhs,
                        e.lower / suite.rhs,
                        "lower",
                    ));
                }
                let total: f64 = suite.lhs.iter().map(|e| e.upper).sum();
                out.records
                    .push(base.row(s, "total", total, suite.rhs, ratio, "upper"));
                ratios.push(ratio);
            }
            out.levels.push(level_max("total", r, level, &ratios));
        }
    }
    out.finite = out.quarantined.is_empty();
    out.refinement_stable = refinement_stable(&out.levels, cfg.refine_tolerance);
    out.no_blow_up = (0..=cfg.refine).all(|level| {
        let mut row: Vec<&LevelMax> = out
            .levels
            .iter()
            .filter(|l| l.level == level && l.samples > 0)
            .collect();
        row.sort_by(|a, b| b.r.total_cmp(&a.r));
        row.windows(2)
            .all(|w| w[1].max_ratio <= cfg.r_growth_tolerance * w[0].max_ratio)
    });
    Ok(out)
}

fn stack_field(layout: &FieldLayout, parts: Vec<Vec<Array2<Complex64>>>) -> Result<SpectralField> {
    let n = parts.first().map_or(0, |p| p.len());
    let (nz, nt) = (layout.vgrid.len(), layout.tgrid.len());
    let mut values = Array4::zeros((n, parts.len(), nz, nt));
    for (m, comps) in parts.into_iter().enumerate() {
        for (c, p) in comps.into_iter().enumerate() {
            values.slice_mut(ndarray::s![c, m, .., ..]).assign(&p);
        }
    }
    SpectralField::from_values(layout, Component::Stack(n), values)
}

/// `∇u = (ik'u, ∂z u)` per mode.
fn gradient_parts(layout: &FieldLayout, m: usize, u: &Array2<Complex64>) -> Vec<Array2<Complex64>> {
    let k = layout.lattice.mode(m).k;
    let hd = layout.lattice.band().horizontal_dims();
    let i = Complex64::new(0.0, 1.0);
    let mut out: Vec<Array2<Complex64>> = (0..hd).map(|a| u.mapv(|v| v * i * k[a])).collect();
    out.push(dz(u.view(), layout.vgrid.spacing()));
    out
}

/// The elementary estimates checked by `props`.
pub const PROPOSITION_CHECKS: [&str; 4] = [
    "frac_backward",
    "frac_forward",
    "heat_dirichlet",
    "halfspace_stokes",
];

/// `(lhs, rhs)` of one elementary estimate on the half-line grid.
pub fn proposition_sample(
    check: &str,
    f: &SpectralField,
    eval: &NormEvaluator,
    heat: &str,
) -> Result<(f64, f64)> {
    let layout = f.layout().clone();
    let f0 = f.component_field(0);
    let modes = layout.lattice.len();
    let solver = heat_solver(heat)?;
    let upper = |g: &SpectralField| {
        eval.interpolation_norm(g, NormMode::BandedUpper)
            .map(|v| v.value)
    };
    let rhs = eval.interpolation_norm(&f0, NormMode::Lower)?.value;
    let solve = |m: usize| -> Result<Array2<Complex64>> {
        let p = ModeProblem::new(
            layout.lattice.mode(m).abs,
            &layout.vgrid,
            &layout.tgrid,
            f0.profile(0, m),
        );
        match check {
            "frac_backward" => solve_frac_backward(&p),
            "frac_forward" => solve_frac_forward(&p),
            _ => solve_heat_dirichlet(&p, solver.as_ref()),
        }
    };
    match check {
        "frac_backward" | "frac_forward" => {
            let parts = (0..modes)
                .map(|m| solve(m).map(|u| gradient_parts(&layout, m, &u)))
                .collect::<Result<_>>()?;
            Ok((upper(&stack_field(&layout, parts)?)?, rhs))
        }
        "heat_dirichlet" => {
            let (h, step) = (layout.vgrid.spacing(), layout.tgrid.dt());
            let mut heat_parts = Vec::with_capacity(modes);
            let mut hess_parts = Vec::with_capacity(modes);
            for m in 0..modes {
                let u = solve(m)?;
                heat_parts.push(vec![dt(u.view(), step) - &dzz(u.view(), h)]);
                let k = layout.lattice.mode(m).k;
                let i = Complex64::new(0.0, 1.0);
                let hd = layout.lattice.band().horizontal_dims();
                hess_parts.push(
                    gradient_parts(&layout, m, &u)
                        .into_iter()
                        .flat_map(|g| {
                            (0..hd)
                                .map(move |a| g.mapv(|v| v * i * k[a]))
                                .collect::<Vec<_>>()
                        })
                        .collect(),
                );
            }
            let lhs = upper(&stack_field(&layout, heat_parts)?)?
                + upper(&stack_field(&layout, hess_parts)?)?;
            Ok((lhs, rhs))
        }
        "halfspace_stokes" => {
            let rho = SpectralField::zeros(&layout, Component::Scalar);
            let (state, _) = solve_halfspace(f, &rho, solver.as_ref())?;
            let suite = lhs_norm_suite(&state, f, eval)?;
            Ok((suite.lhs.iter().map(|e| e.upper).sum(), suite.rhs))
        }
        other => Err(Error::UnknownStrategy {
            kind: "proposition check",
            name: other.to_string(),
        }),
    }
}

/// Elementary estimates with the half-line norm: ratio per sample, ensemble
/// max per level, and stability under refinement.
pub fn run_proposition_checks(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut out = ExperimentOutput::default();
    for level in 0..=cfg.refine {
        for &r in &cfg.r_grid {
            let layout = cfg.half_line_layout(r, level)?;
            let spec = cfg.ensemble_for(&layout);
            let eval = NormEvaluator::new(&layout, NormKind::Upper)?;
            let base = RowBase {
                cfg,
                experiment: "props",
                r,
                layout: &layout,
                spec: &spec,
                level,
            };
            for check in PROPOSITION_CHECKS {
                let results: Vec<Result<(f64, f64)>> = (0..spec.samples)
                    .into_par_iter()
                    .map(|s| {
                        proposition_sample(
                            check,
                            &forcing(&layout, &spec, s),
                            &eval,
                            &cfg.heat_solver,
                        )
                    })
                    .collect();
                let mut ratios = Vec::new();
                for (s, res) in results.into_iter().enumerate() {
                    match res {
                        Ok((0.0, 0.0)) => {}
                        Ok((lhs, rhs)) if rhs > 0.0 && lhs.is_finite() => {
                            out.records
                                .push(base.row(s, check, lhs, rhs, lhs / rhs, "upper"));
                            ratios.push(lhs / rhs);
                        }
                        Ok((lhs, rhs)) => out.quarantined.push(Quarantine {
                            r,
                            level,
                            sample: s,
                            reason: format!("{check}: lhs {lhs}, rhs {rhs}"),
                        }),
                        Err(e) => out.quarantined.push(Quarantine {
                            r,
                            level,
                            sample: s,
                            reason: format!("{check}: {e}"),
                        }),
                    }
                }
                out.levels.push(level_max(check, r, level, &ratios));
            }
        }
    }
    out.pass = out.quarantined.is_empty() && refinement_stable(&out.levels, cfg.refine_tolerance);
    out.summary = level_summary(&out.levels);
    Ok(out)
}

fn level_summary(levels: &[LevelMax]) -> Vec<String> {
    levels
        .iter()
        .map(|l| {
            format!(
                "{:<18} R={:<10.4} level={} max_ratio={:.6e} samples={}",
                l.name, l.r, l.level, l.max_ratio, l.samples
            )
        })
        .collect()
}

/// Run the named appendix checks.
pub fn run_kernel_suite(cfg: &ExperimentConfig, checks: &[&str]) -> Result<Vec<InequalityReport>> {
    let suite = cfg.suite_config();
    let mut out = Vec::new();
    for name in checks {
        out.extend(check_by_name(name)?.run(&suite)?);
    }
    Ok(out)
}

/// Checks run by the `kernels` experiment.
pub const KERNEL_CHECKS: [&str; 4] = ["heat-kernel", "min-integral", "kbar", "poisson"];
/// Checks run by the `lemmas` experiment.
pub const LEMMA_CHECKS: [&str; 3] = ["bandedness-a", "bandedness-b", "bandedness-c"];

fn suite_output(
    cfg: &ExperimentConfig,
    experiment: &str,
    checks: &[&str],
) -> Result<ExperimentOutput> {
    let reports = run_kernel_suite(cfg, checks)?;
    let suite = cfg.suite_config();
    let layout = cfg.strip_layout(suite.bandwidth, 0)?;
    let spec = EnsembleSpec {
        samples: suite.samples,
        seed: suite.seed,
        ..cfg.ensemble
    };
    let base = RowBase {
        cfg,
        experiment,
        r: suite.bandwidth,
        layout: &layout,
        spec: &spec,
        level: 0,
    };
    let mut out = ExperimentOutput {
        pass: reports.iter().all(|r| r.pass),
        ..Default::default()
    };
    for rep in &reports {
        for (i, (l, r)) in rep.lhs.iter().zip(&rep.rhs).enumerate() {
            out.records
                .push(base.row(i, &rep.name, *l, *r, l / r, "fitted"));
        }
        out.summary.push(format!(
            "{} {:<32} C={:.6e} spread={:.6} violations={} {}",
            if rep.pass { "PASS" } else { "FAIL" },
            rep.name,
            rep.constant,
            rep.spread,
            rep.violations,
            rep.note
        ));
    }
    out.reports = reports;
    Ok(out)
}

/// Localization consistency: mismatch per wall and sample.
pub fn run_consistency(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let heat = heat_solver(&cfg.heat_solver)?;
    let mut out = ExperimentOutput::default();
    for level in 0..=cfg.refine {
        for &r in &cfg.r_grid {
            let layout = cfg.strip_layout(r, level)?;
            let spec = cfg.ensemble_for(&layout);
            let results: Vec<_> = (0..spec.samples)
                .into_par_iter()
                .map(|s| {
                    consistency_check(
                        &forcing(&layout, &spec, s),
                        cfg.delta,
                        cfg.zmax,
                        heat.as_ref(),
                    )
                })
                .collect();
            let base = RowBase {
                cfg,
                experiment: "halfspace-consistency",
                r,
                layout: &layout,
                spec: &spec,
                level,
            };
            let mut worst = Vec::new();
            for (s, res) in results.into_iter().enumerate() {
                match res {
                    Ok(rep) => {
                        out.records.push(base.row(
                            s,
                            "upper_wall",
                            rep.upper,
                            1.0,
                            rep.upper,
                            "mismatch",
                        ));
                        out.records.push(base.row(
                            s,
                            "lower_wall",
                            rep.lower,
                            1.0,
                            rep.lower,
                            "mismatch",
                        ));
                        worst.push(rep.upper.max(rep.lower));
                    }
                    Err(e) => out.quarantined.push(Quarantine {
                        r,
                        level,
                        sample: s,
                        reason: e.to_string(),
                    }),
                }
            }
            out.levels.push(level_max("mismatch", r, level, &worst));
        }
    }
    out.pass = out.quarantined.is_empty()
        && out
            .levels
            .iter()
            .all(|l| l.samples == 0 || l.max_ratio.is_finite());
    out.summary = level_summary(&out.levels);
    Ok(out)
}

/// Refinement study of the strip norms: each norm against its value one
/// level coarser. Runs at least one refinement.
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let levels = cfg.refine.max(1);
    let mut out = ExperimentOutput::default();
    let mut names: Vec<&str> = LHS_NORMS.to_vec();
    names.push("forcing");
    let mut finest_ok = true;
    for &r in &cfg.r_grid {
        let mut prev: Vec<Option<Vec<f64>>> = Vec::new();
        for level in 0..=levels {
            let layout = cfg.strip_layout(r, level)?;
            let spec = cfg.ensemble_for(&layout);
            let eval = NormEvaluator::new(&layout, NormKind::Strip)?;
            let results: Vec<Result<NormSuite>> = (0..spec.samples)
                .into_par_iter()
                .map(|s| mre_sample(&forcing(&layout, &spec, s), &eval))
                .collect();
            let base = RowBase {
                cfg,
                experiment: "convergence",
                r,
                layout: &layout,
                spec: &spec,
                level,
            };
            let mut current = Vec::with_capacity(spec.samples);
            for (s, res) in results.into_iter().enumerate() {
                let values = match res {
                    Ok(suite) => {
                        let mut v: Vec<f64> = suite.lhs.iter().map(|e| e.upper).collect();
                        v.push(suite.rhs);
                        Some(v)
                    }
                    Err(e) => {
                        out.quarantined.push(Quarantine {
                            r,
                            level,
                            sample: s,
                            reason: e.to_string(),
                        });
                        None
                    }
                };
                if let Some(v) = &values {
                    let before = prev.get(s).cloned().flatten();
                    for (j, name) in names.iter().enumerate() {
                        let last = before.as_ref().map_or(v[j], |b| b[j]);
                        let q = if last == 0.0 && v[j] == 0.0 {
                            1.0
                        } else {
                            v[j] / last
                        };
                        if level == levels {
                            finest_ok &= q.is_finite()
                                && q <= cfg.cauchy_tolerance
                                && q >= 1.0 / cfg.cauchy_tolerance;
                        }
                        let kind = if j < LHS_NORMS.len() {
                            "upper"
                        } else {
                            "lower"
                        };
                        out.records.push(base.row(s, name, v[j], last, q, kind));
                    }
                }
                current.push(values);
            }
            prev = current;
        }
    }
    out.pass = out.quarantined.is_empty() && finest_ok;
    out.summary.push(format!(
        "finest-level norm changes within factor {}: {finest_ok}",
        cfg.cauchy_tolerance
    ));
    Ok(out)
}

impl Experiment for Mre {
    fn name(&self) -> &'static str {
        "mre"
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let m = run_mre_experiment(cfg)?;
        let mut summary = level_summary(&m.levels);
        summary.push(format!(
            "finite={} refinement_stable={} no_blow_up={} quarantined={}",
            m.finite,
            m.refinement_stable,
            m.no_blow_up,
            m.quarantined.len()
        ));
        let pass = m.pass();
        Ok(ExperimentOutput {
            records: m.records,
            quarantined: m.quarantined,
            levels: m.levels,
            reports: Vec::new(),
            summary,
            pass,
        })
    }
}

impl Experiment for Props {
    fn name(&self) -> &'static str {
        "props"
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        run_proposition_checks(cfg)
    }
}

impl Experiment for Kernels {
    fn name(&self) -> &'static str {
        "kernels"
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        suite_output(cfg, "kernels", &KERNEL_CHECKS)
    }
}

impl Experiment for Lemmas {
    fn name(&self) -> &'static str {
        "lemmas"
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        suite_output(cfg, "lemmas", &LEMMA_CHECKS)
    }
}

impl Experiment for Consistency {
    fn name(&self) -> &'static str {
        "halfspace-consistency"
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        run_consistency(cfg)
    }
}

impl Experiment for Convergence {
    fn name(&self) -> &'static str {
        "convergence"
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        run_convergence(cfg)
    }
}
