//! Grid evaluation of concurrence surfaces, CSV export, figure presets and
//! the analytic-versus-mode-oracle comparison harness.
//!
//! Output is deterministic: records are assembled in grid order (beta^2
//! outer, time inner) independent of how the evaluation was parallelized,
//! and floats are always written with 17 significant digits and LF line
//! endings.

use std::fmt::Write as FmtWrite;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::amplitude::{amplitude_c, ReservoirParams};
use crate::entanglement::{concurrence_closed_form, BellFamily, InitialBellState};
use crate::error::{Error, Result};
use crate::oracle::{
    equivalent_reservoir, integrate_modes, interp_c1_abs, kernel_match, suggested_dt,
    KernelMatchReport,
};

/// Caps on the oracle runs accepted by the comparison harness.
const MAX_ORACLE_MODES: usize = 200_000;
const MAX_ORACLE_CUTOFF: f64 = 20_000.0;
const MAX_ORACLE_T_END: f64 = 100.0;

/// Where a record's amplitude came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Analytic,
    Oracle,
}

impl Source {
    fn label(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::Oracle => "oracle",
        }
    }
}

fn family_label(f: BellFamily) -> &'static str {
    match f {
        BellFamily::PhiOdd => "phi",
        BellFamily::PsiEven => "psi",
    }
}

/// Mode-oracle settings for sweeps that also run the brute-force path.
#[derive(Debug, Clone, Copy)]
pub struct OracleSettings {
    pub n_modes: usize,
    pub cutoff_w: f64,
    /// Band-edge frequency in units of alpha^2; dynamics are invariant under
    /// it (the coupled equations... see the gauge test) but it fixes the
    /// absolute mode frequencies carried by the reservoir.
    pub omega_c: f64,
    /// Phase-resolution factor for the integrator step.
    pub oversample: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self { n_modes: 10_000, cutoff_w: 1000.0, omega_c: 200.0, oversample: 14.0 }
    }
}

/// One sweep: a family, a detuning, and the sampling grids.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: BellFamily,
    pub delta_over_alpha_sq: f64,
    pub beta_sq_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub oracle: Option<OracleSettings>,
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct ConcurrenceRecord {
    pub family: BellFamily,
    pub delta_over_alpha_sq: f64,
    pub beta_sq: f64,
    pub alpha_sq_t: f64,
    pub c_abs: f64,
    pub concurrence: f64,
    pub source: Source,
}

fn validate_grid(name: &str, grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParam(format!("{name} grid is empty")));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParam(format!(
                "{name} grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    for &v in grid {
        if !v.is_finite() || v < lo || v > hi {
            return Err(Error::InvalidParam(format!(
                "{name} grid value {v} outside [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

fn attach_coords<T>(r: Result<T>, beta_sq: f64, t: f64) -> Result<T> {
    r.map_err(|e| {
        Error::Domain(format!("at beta^2 = {beta_sq}, alpha^2 t = {t}: {e}"))
    })
}

/// Evaluate the concurrence over the full grid. Analytic records come first,
/// oracle records (if requested) follow; each block is ordered beta^2 outer,
/// time inner.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ConcurrenceRecord>> {
    validate_grid("beta^2", &spec.beta_sq_grid, 0.0, 1.0)?;
    validate_grid("t", &spec.t_grid, 0.0, f64::INFINITY)?;
    let params = ReservoirParams::dimensionless(spec.delta_over_alpha_sq)?;

    let c_abs_analytic: Vec<f64> = spec
        .t_grid
        .par_iter()
        .map(|&t| amplitude_c(t, &params).map(|c| c.norm()))
        .collect::<Result<_>>()?;

    let mut c_abs_by_source = vec![(Source::Analytic, c_abs_analytic)];

    if let Some(settings) = spec.oracle {
        let t_end = spec.t_grid.last().copied().unwrap_or(1.0).max(1.0);
        let samples = run_oracle_curve(&params, &settings, t_end)?;
        let c_abs_oracle: Vec<f64> =
            spec.t_grid.iter().map(|&t| interp_c1_abs(&samples, t)).collect();
        c_abs_by_source.push((Source::Oracle, c_abs_oracle));
    }

    let mut records =
        Vec::with_capacity(c_abs_by_source.len() * spec.beta_sq_grid.len() * spec.t_grid.len());
    for (source, c_abs) in &c_abs_by_source {
        for &beta_sq in &spec.beta_sq_grid {
            let initial =
                attach_coords(InitialBellState::new(spec.family, beta_sq.sqrt(), 0.0), beta_sq, 0.0)?;
            for (&t, &ca) in spec.t_grid.iter().zip(c_abs) {
                let c_sq = (ca * ca).min(1.0);
                let conc = attach_coords(concurrence_closed_form(&initial, c_sq), beta_sq, t)?;
                records.push(ConcurrenceRecord {
                    family: spec.family,
                    delta_over_alpha_sq: spec.delta_over_alpha_sq,
                    beta_sq,
                    alpha_sq_t: t,
                    c_abs: ca,
                    concurrence: conc,
                    source: *source,
                });
            }
        }
    }
    Ok(records)
}

fn run_oracle_curve(
    params: &ReservoirParams,
    settings: &OracleSettings,
    t_end: f64,
) -> Result<Vec<crate::oracle::AmplitudeState>> {
    if settings.n_modes > MAX_ORACLE_MODES {
        return Err(Error::ResourceCap(format!(
            "n_modes = {} exceeds the cap {MAX_ORACLE_MODES}; reduce --n-modes",
            settings.n_modes
        )));
    }
    if settings.cutoff_w > MAX_ORACLE_CUTOFF {
        return Err(Error::ResourceCap(format!(
            "cutoff_w = {} exceeds the cap {MAX_ORACLE_CUTOFF}; reduce --cutoff-w",
            settings.cutoff_w
        )));
    }
    if t_end > MAX_ORACLE_T_END {
        return Err(Error::ResourceCap(format!(
            "oracle t_end = {t_end} exceeds the cap {MAX_ORACLE_T_END}; shorten the t grid"
        )));
    }
    let res = equivalent_reservoir(params, settings.omega_c, settings.cutoff_w, settings.n_modes)?;
    let dt = suggested_dt(&res, settings.oversample);
    integrate_modes(&res, t_end, dt)
}

/// Fixed float format: 17 significant digits, always with an exponent, so
/// repeated runs are byte-identical.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serialize records as CSV with the canonical header and LF endings.
pub fn csv_string(records: &[ConcurrenceRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 96 + 64);
    out.push_str("family,delta_over_alpha2,beta2,alpha2_t,c_abs,concurrence,source\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            family_label(r.family),
            fmt_f64(r.delta_over_alpha_sq),
            fmt_f64(r.beta_sq),
            fmt_f64(r.alpha_sq_t),
            fmt_f64(r.c_abs),
            fmt_f64(r.concurrence),
            r.source.label()
        );
    }
    out
}

/// Uniform grid start..=stop with the given step.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() || !(stop >= start) {
        return Err(Error::InvalidParam(format!(
            "bad grid range {start}:{stop}:{step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// The preset figures: a family and detuning per surface (1-6), and the
/// two-panel fixed-beta comparison (7).
pub fn figure_combos(id: u8) -> Result<Vec<(BellFamily, f64)>> {
    match id {
        1 => Ok(vec![(BellFamily::PhiOdd, 1.0)]),
        2 => Ok(vec![(BellFamily::PhiOdd, -1.0)]),
        3 => Ok(vec![(BellFamily::PhiOdd, -4.0)]),
        4 => Ok(vec![(BellFamily::PsiEven, 1.0)]),
        5 => Ok(vec![(BellFamily::PsiEven, -1.0)]),
        6 => Ok(vec![(BellFamily::PsiEven, -4.0)]),
        7 => Ok(vec![
            (BellFamily::PhiOdd, -20.0),
            (BellFamily::PhiOdd, -5.0),
            (BellFamily::PhiOdd, 0.5),
            (BellFamily::PsiEven, -20.0),
            (BellFamily::PsiEven, -5.0),
            (BellFamily::PsiEven, 0.5),
        ]),
        _ => Err(Error::InvalidParam(format!("figure id must be 1..=7, got {id}"))),
    }
}

/// Grid overrides for [`run_figure`]; `None` fields use the presets
/// (beta^2 in [0,1] step 0.02, alpha^2 t in [0,15] step 0.05; figure 7 pins
/// beta^2 = 0.5).
#[derive(Debug, Clone, Default)]
pub struct FigureOverrides {
    pub beta_sq_grid: Option<Vec<f64>>,
    pub t_grid: Option<Vec<f64>>,
    pub oracle: Option<OracleSettings>,
}

/// Paths written by [`run_figure`].
#[derive(Debug, Clone)]
pub struct FigureFiles {
    pub csv: PathBuf,
    pub script: PathBuf,
}

/// Evaluate one preset figure and write `figure<id>.csv` plus a standalone
/// matplotlib script that renders it (surface for 1-6, two-panel lines
/// for 7).
pub fn run_figure(id: u8, overrides: &FigureOverrides, out_dir: &Path) -> Result<FigureFiles> {
    let combos = figure_combos(id)?;
    let beta_default = if id == 7 { vec![0.5] } else { grid(0.0, 1.0, 0.02)? };
    let beta_sq_grid = overrides.beta_sq_grid.clone().unwrap_or(beta_default);
    let t_grid = overrides.t_grid.clone().unwrap_or(grid(0.0, 15.0, 0.05)?);

    let mut records = Vec::new();
    for (family, delta) in combos {
        let spec = SweepSpec {
            family,
            delta_over_alpha_sq: delta,
            beta_sq_grid: beta_sq_grid.clone(),
            t_grid: t_grid.clone(),
            oracle: overrides.oracle,
        };
        records.extend(run_sweep(&spec)?);
    }

    fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("figure{id}.csv"));
    fs::write(&csv_path, csv_string(&records))?;
    let script_path = out_dir.join(format!("figure{id}_plot.py"));
    fs::write(&script_path, plot_script(id))?;
    Ok(FigureFiles { csv: csv_path, script: script_path })
}

fn plot_script(id: u8) -> String {
    let mut s = String::new();
    s.push_str("#!/usr/bin/env python3\n");
    let _ = writeln!(s, "# Render figure{id}.csv produced by the sweep tool.");
    s.push_str(
        "import csv\nimport sys\nfrom collections import defaultdict\n\
         import matplotlib\nmatplotlib.use(\"Agg\")\n\
         import matplotlib.pyplot as plt\nimport numpy as np\n\n",
    );
    let _ = writeln!(s, "path = sys.argv[1] if len(sys.argv) > 1 else \"figure{id}.csv\"");
    s.push_str(
        "rows = []\nwith open(path) as f:\n    for r in csv.DictReader(f):\n        \
         if r[\"source\"] != \"analytic\":\n            continue\n        \
         rows.append((r[\"family\"], float(r[\"delta_over_alpha2\"]), float(r[\"beta2\"]),\n\
         \x20                    float(r[\"alpha2_t\"]), float(r[\"concurrence\"])))\n\n",
    );
    if id == 7 {
        s.push_str(
            "fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=True)\n\
             styles = {-20.0: \"-\", -5.0: \":\", 0.5: \"--\"}\n\
             for ax, fam, title in ((axes[0], \"phi\", \"(a) (|ge>+|eg>)/sqrt2\"),\n\
             \x20                       (axes[1], \"psi\", \"(b) (|gg>+|ee>)/sqrt2\")):\n\
             \x20   curves = defaultdict(list)\n\
             \x20   for family, delta, b2, t, c in rows:\n\
             \x20       if family == fam:\n\
             \x20           curves[delta].append((t, c))\n\
             \x20   for delta in sorted(curves):\n\
             \x20       pts = sorted(curves[delta])\n\
             \x20       ax.plot([p[0] for p in pts], [p[1] for p in pts],\n\
             \x20               styles.get(delta, \"-\"), label=f\"delta={delta} a^2\")\n\
             \x20   ax.set_xlabel(\"alpha^2 t\")\n\
             \x20   ax.set_title(title)\n\
             \x20   ax.legend()\n\
             axes[0].set_ylabel(\"concurrence\")\n",
        );
    } else {
        s.push_str(
            "b2s = sorted({r[2] for r in rows})\nts = sorted({r[3] for r in rows})\n\
             z = np.zeros((len(b2s), len(ts)))\n\
             bi = {v: i for i, v in enumerate(b2s)}\nti = {v: i for i, v in enumerate(ts)}\n\
             for _, _, b2, t, c in rows:\n    z[bi[b2], ti[t]] = c\n\
             tt, bb = np.meshgrid(ts, b2s)\n\
             fig = plt.figure(figsize=(7, 5))\nax = fig.add_subplot(projection=\"3d\")\n\
             ax.plot_surface(tt, bb, z, cmap=\"viridis\", linewidth=0)\n\
             ax.set_xlabel(\"alpha^2 t\")\nax.set_ylabel(\"beta^2\")\n\
             ax.set_zlabel(\"concurrence\")\n",
        );
    }
    let _ = writeln!(s, "\nout = path.rsplit(\".\", 1)[0] + \".png\"");
    s.push_str("plt.tight_layout()\nplt.savefig(out, dpi=160)\nprint(f\"wrote {out}\")\n");
    s
}

/// Outcome of one analytic-versus-oracle run.
#[derive(Debug, Clone)]
pub struct OracleCompareSummary {
    pub kernel: KernelMatchReport,
    /// max_t | |c1(t)| - |c(t)| | on the comparison window.
    pub max_deviation: f64,
    pub mean_deviation: f64,
    /// Comparison window in dimensionless time.
    pub window: (f64, f64),
    pub csv: PathBuf,
    pub report: PathBuf,
}

/// Integrate the discretized reservoir, compare |c1(t)| against the analytic
/// |c(t)|, and write the side-by-side curve plus a kernel-match report.
///
/// The reservoir is the calibrated equivalent of `params` (coupling
/// alpha/(2 sqrt(pi)), level-shift counterterm), so the kernel report is
/// computed against those effective parameters.
pub fn run_oracle_compare(
    params: &ReservoirParams,
    settings: &OracleSettings,
    t_end: f64,
    out_dir: &Path,
) -> Result<OracleCompareSummary> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidParam(format!("t_end must be positive, got {t_end}")));
    }
    let samples = run_oracle_curve(params, settings, t_end)?;

    let res = equivalent_reservoir(params, settings.omega_c, settings.cutoff_w, settings.n_modes)?;
    let eff_coupling = crate::amplitude::kernel_coupling_for_amplitude(params);
    let eff_params =
        ReservoirParams::new(eff_coupling * eff_coupling, res.bare_detuning())?;
    let tau_grid: Vec<f64> = {
        let mut g = vec![];
        let mut tau = 0.05;
        while tau <= 5.0 {
            g.push(tau);
            tau *= 1.15;
        }
        g
    };
    let kernel = kernel_match(&res, &eff_params, &tau_grid)?;

    let window = (2.0_f64.min(t_end / 2.0), t_end);
    let mut max_dev = 0.0_f64;
    let mut acc = 0.0_f64;
    let mut n_in_window = 0usize;
    let mut csv = String::from("alpha2_t,c_abs_analytic,c_abs_oracle,abs_deviation\n");
    for s in &samples {
        let analytic = amplitude_c(s.t, params)?.norm();
        let numeric = s.c1.norm();
        let dev = (numeric - analytic).abs();
        if s.t >= window.0 {
            max_dev = max_dev.max(dev);
            acc += dev;
            n_in_window += 1;
        }
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(analytic),
            fmt_f64(numeric),
            fmt_f64(dev)
        );
    }

    fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join("oracle_compare.csv");
    fs::write(&csv_path, &csv)?;

    let mean_dev = acc / n_in_window.max(1) as f64;
    let mut rep = String::new();
    let _ = writeln!(rep, "oracle comparison report");
    let _ = writeln!(rep, "delta/alpha^2        = {}", params.delta_ratio());
    let _ = writeln!(rep, "n_modes              = {}", settings.n_modes);
    let _ = writeln!(rep, "cutoff_w             = {}", settings.cutoff_w);
    let _ = writeln!(rep, "omega_c              = {}", settings.omega_c);
    let _ = writeln!(rep, "t_end                = {t_end}");
    let _ = writeln!(rep, "bare detuning        = {}", res.bare_detuning());
    let _ = writeln!(rep, "kernel max rel err   = {:.6e} (worst tau {:.4})", kernel.max_rel_err, kernel.worst_tau);
    let _ = writeln!(rep, "kernel mean rel err  = {:.6e}", kernel.mean_rel_err);
    let _ = writeln!(rep, "window               = [{}, {}]", window.0, window.1);
    let _ = writeln!(rep, "max |c| deviation    = {max_dev:.6e}");
    let _ = writeln!(rep, "mean |c| deviation   = {mean_dev:.6e}");
    let report_path = out_dir.join("oracle_compare_report.txt");
    fs::write(&report_path, &rep)?;

    Ok(OracleCompareSummary {
        kernel,
        max_deviation: max_dev,
        mean_deviation: mean_dev,
        window,
        csv: csv_path,
        report: report_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_construction() {
        let g = grid(0.0, 1.0, 0.25).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(grid(1.0, 0.0, 0.1).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let base = SweepSpec {
            family: BellFamily::PhiOdd,
            delta_over_alpha_sq: 1.0,
            beta_sq_grid: vec![0.0, 0.5, 1.0],
            t_grid: vec![0.0, 1.0],
            oracle: None,
        };
        let mut s = base.clone();
        s.beta_sq_grid = vec![];
        assert!(run_sweep(&s).is_err());
        let mut s = base.clone();
        s.beta_sq_grid = vec![0.5, 0.5];
        assert!(run_sweep(&s).is_err());
        let mut s = base.clone();
        s.t_grid = vec![1.0, 0.5];
        assert!(run_sweep(&s).is_err());
        let mut s = base;
        s.beta_sq_grid = vec![0.2, 1.5];
        assert!(run_sweep(&s).is_err());
    }

    #[test]
    fn product_state_rows_are_zero() {
        let spec = SweepSpec {
            family: BellFamily::PsiEven,
            delta_over_alpha_sq: 1.0,
            beta_sq_grid: vec![0.0, 1.0],
            t_grid: grid(0.0, 5.0, 0.5).unwrap(),
            oracle: None,
        };
        let records = run_sweep(&spec).unwrap();
        assert!(records.iter().all(|r| r.concurrence == 0.0));
    }

    #[test]
    fn sweep_ordering_is_beta_outer_t_inner() {
        let spec = SweepSpec {
            family: BellFamily::PhiOdd,
            delta_over_alpha_sq: -1.0,
            beta_sq_grid: vec![0.2, 0.8],
            t_grid: vec![0.0, 1.0, 2.0],
            oracle: None,
        };
        let records = run_sweep(&spec).unwrap();
        let coords: Vec<(f64, f64)> = records.iter().map(|r| (r.beta_sq, r.alpha_sq_t)).collect();
        assert_eq!(
            coords,
            vec![(0.2, 0.0), (0.2, 1.0), (0.2, 2.0), (0.8, 0.0), (0.8, 1.0), (0.8, 2.0)]
        );
    }

    #[test]
    fn late_time_records_keep_plateau() {
        let spec = SweepSpec {
            family: BellFamily::PhiOdd,
            delta_over_alpha_sq: -1.0,
            beta_sq_grid: vec![0.3, 0.5],
            t_grid: grid(10.0, 15.0, 0.5).unwrap(),
            oracle: None,
        };
        let records = run_sweep(&spec).unwrap();
        for r in records {
            assert!(r.concurrence > 0.0, "plateau record unexpectedly zero: {r:?}");
            assert!(r.c_abs > 0.4);
        }
    }

    #[test]
    fn csv_is_deterministic_and_well_formed() {
        let spec = SweepSpec {
            family: BellFamily::PsiEven,
            delta_over_alpha_sq: 0.5,
            beta_sq_grid: vec![0.1, 0.6],
            t_grid: grid(0.0, 3.0, 0.25).unwrap(),
            oracle: None,
        };
        let a = csv_string(&run_sweep(&spec).unwrap());
        let b = csv_string(&run_sweep(&spec).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("family,delta_over_alpha2,beta2,alpha2_t,c_abs,concurrence,source\n"));
        assert!(!a.contains('\r'));
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines.len(), 1 + 2 * 13);
        assert!(lines[1].starts_with("psi,"));
        assert!(lines[1].ends_with(",analytic"));
    }

    #[test]
    fn records_match_fresh_module_calls() {
        use crate::entanglement::concurrence_closed_form;
        let spec = SweepSpec {
            family: BellFamily::PsiEven,
            delta_over_alpha_sq: -1.0,
            beta_sq_grid: vec![0.1, 0.35, 0.9],
            t_grid: grid(0.0, 6.0, 0.3).unwrap(),
            oracle: None,
        };
        let params = ReservoirParams::dimensionless(-1.0).unwrap();
        for r in run_sweep(&spec).unwrap() {
            assert!((0.0..=1.0).contains(&r.concurrence), "{r:?}");
            assert!((0.0..=1.0 + 1e-6).contains(&r.c_abs), "{r:?}");
            let fresh_c = amplitude_c(r.alpha_sq_t, &params).unwrap().norm();
            assert_eq!(r.c_abs, fresh_c, "cached amplitude drifted at {r:?}");
            let initial =
                InitialBellState::new(r.family, r.beta_sq.sqrt(), 0.0).unwrap();
            let fresh =
                concurrence_closed_form(&initial, (fresh_c * fresh_c).min(1.0)).unwrap();
            assert_eq!(r.concurrence, fresh, "concurrence drifted at {r:?}");
        }
    }

    #[test]
    fn figure7_odd_panel_sits_above_even_panel() {
        let dir = std::env::temp_dir().join("pbg_fig7_check");
        let files = run_figure(7, &FigureOverrides::default(), &dir).unwrap();
        let text = std::fs::read_to_string(&files.csv).unwrap();
        let mut late: std::collections::HashMap<(String, String), f64> = Default::default();
        for line in text.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let t: f64 = f[3].parse().unwrap();
            if t >= 15.0 {
                late.insert((f[0].to_string(), f[1].to_string()), f[5].parse().unwrap());
            }
        }
        for delta in ["-2.0000000000000000e1", "-5.0000000000000000e0"] {
            let phi = late[&("phi".to_string(), delta.to_string())];
            let psi = late[&("psi".to_string(), delta.to_string())];
            assert!(phi > psi, "delta={delta}: {phi} <= {psi}");
        }
        let _ = std::fs::remove_dir_all(dir);
    }

    #[test]
    fn figure_combos_cover_presets() {
        assert_eq!(figure_combos(1).unwrap(), vec![(BellFamily::PhiOdd, 1.0)]);
        assert_eq!(figure_combos(6).unwrap(), vec![(BellFamily::PsiEven, -4.0)]);
        assert_eq!(figure_combos(7).unwrap().len(), 6);
        assert!(figure_combos(0).is_err());
        assert!(figure_combos(8).is_err());
    }

    #[test]
    fn oracle_resource_caps() {
        let params = ReservoirParams::dimensionless(-1.0).unwrap();
        let settings = OracleSettings { n_modes: MAX_ORACLE_MODES + 1, ..Default::default() };
        let err = run_oracle_compare(&params, &settings, 5.0, Path::new("/tmp/unused"));
        assert!(matches!(err, Err(Error::ResourceCap(_))));
    }
}
