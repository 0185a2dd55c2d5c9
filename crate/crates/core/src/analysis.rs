//! Orbit classification (closure, PT-symmetry, spiralling) and parameter
//! scans for abrupt changes of orbit character.
//!
//! PT-symmetry is judged on the `(x, y)` projection: an orbit is symmetric
//! when it is invariant, as a point set, under reflection about the ordinate
//! `(x, y) → (−x, y)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::initcond::{self, EnergySign, Family, IcError};
use crate::integrator::{self, IntegrationError, IntegratorConfig, Trajectory};
use crate::model::{Params, State1D};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("trajectory does not span a return to its start")]
    InsufficientSpan,
    #[error("orbit diameter {0:e} is below 1e-10 (fixed point)")]
    DegenerateOrbit(f64),
    #[error("symmetry test needs at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("invalid scan: {0}")]
    InvalidScan(String),
}

/// Minimum sample count for [`classify_pt`].
pub const MIN_PT_SAMPLES: usize = 512;
const DEGENERATE_DIAMETER: f64 = 1e-10;
const GOLDEN_ITERATIONS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifyConfig {
    /// Relative closure tolerance.
    pub closure_tol: f64,
    /// PT residual threshold.
    pub pt_tol: f64,
    /// Minimum first-return drift, relative to the loop size, for the
    /// spiral flag.
    pub spiral_tol: f64,
    /// A local minimum of the return distance counts as a pseudo-return
    /// when it is below this fraction of the largest distance reached so far.
    pub return_fraction: f64,
    /// Uniform samples used for classification.
    pub samples: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            closure_tol: 1e-6,
            pt_tol: 0.02,
            spiral_tol: 0.02,
            return_fraction: 0.25,
            samples: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Closure {
    pub closed: bool,
    pub period: Option<f64>,
    /// Best return distance divided by `1 + orbit radius`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Flags {
    pub spiral: bool,
    pub escaped: bool,
    pub fixed_point: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub closed: bool,
    pub period: Option<f64>,
    pub pt_symmetric: bool,
    pub closure_residual: f64,
    pub symmetry_residual: f64,
    pub flags: Flags,
    /// Successive pseudo-return distances are growing by this much per
    /// loop, relative to the loop size; `None` without three pseudo-returns.
    pub spiral_drift: Option<f64>,
}

impl Classification {
    fn escaped() -> Self {
        Self {
            closed: false,
            period: None,
            pt_symmetric: false,
            closure_residual: f64::INFINITY,
            symmetry_residual: f64::INFINITY,
            flags: Flags {
                escaped: true,
                ..Flags::default()
            },
            spiral_drift: None,
        }
    }

    /// Explanation attached to a negative PT verdict, if any.
    pub fn note(&self) -> Option<&'static str> {
        if self.flags.escaped {
            Some("orbit escaped; never PT-symmetric by default")
        } else if self.flags.spiral {
            Some("orbit spirals between successive loops; strict PT-symmetry not maintained")
        } else if self.flags.fixed_point {
            Some("fixed point")
        } else {
            None
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERATIONS {
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    let mut best = if fc < fd { (c, fc) } else { (d, fd) };
    for t in [lo, hi] {
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

fn return_distances(traj: &Trajectory) -> Vec<f64> {
    let s0 = traj.first().to_vec();
    traj.states().map(|s| distance(s, &s0)).collect()
}

/// Refined minimum of `‖s(t) − s(0)‖` on `[lo, hi]` via the dense output.
fn refine_return(traj: &Trajectory, lo: f64, hi: f64) -> (f64, f64) {
    let s0 = traj.first().to_vec();
    let buf = std::cell::RefCell::new(vec![0.0; traj.dim()]);
    let dense = traj.dense();
    let (t, d2) = golden_min(
        |t| {
            let mut buf = buf.borrow_mut();
            dense.eval_into(t, &mut buf);
            buf.iter().zip(&s0).map(|(u, v)| (u - v) * (u - v)).sum()
        },
        lo.max(0.0),
        hi.min(traj.t_last()),
    );
    (t, d2.sqrt())
}

/// Local minima of the return distance after its first local maximum.
fn return_candidates(d: &[f64]) -> Option<Vec<usize>> {
    let n = d.len();
    let first_max = (1..n.saturating_sub(1)).find(|&k| d[k] >= d[k - 1] && d[k] > d[k + 1])?;
    let mins: Vec<usize> = (first_max + 1..n - 1)
        .filter(|&k| d[k] <= d[k - 1] && d[k] < d[k + 1])
        .collect();
    (!mins.is_empty()).then_some(mins)
}

/// Smallest return time `T` with `‖s(T) − s(0)‖ < tol·(1 + R)`, `R` the
/// largest state norm along the orbit.
pub fn detect_closure(traj: &Trajectory, tol: f64) -> Result<Closure, AnalysisError> {
    let d = return_distances(traj);
    let radius = traj.states().map(norm).fold(0.0, f64::max);
    let scale = 1.0 + radius;
    let candidates = return_candidates(&d).ok_or(AnalysisError::InsufficientSpan)?;
    let mut best = f64::INFINITY;
    for k in candidates {
        let (t, dist) = refine_return(traj, traj.times[k - 1], traj.times[k + 1]);
        let rel = dist / scale;
        if rel < tol {
            return Ok(Closure {
                closed: true,
                period: Some(t),
                residual: rel,
            });
        }
        best = best.min(rel);
    }
    Ok(Closure {
        closed: false,
        period: None,
        residual: best,
    })
}

fn bbox_diagonal(points: &[[f64; 2]]) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &[x, y] in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    (x1 - x0).hypot(y1 - y0)
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Distance from `point` to the continuous `(x, y)` curve of `traj`: the
/// nearest polyline segment seeds a dense-output refinement.
fn curve_distance(traj: &Trajectory, xy: &[[f64; 2]], point: [f64; 2]) -> f64 {
    let mut best = (f64::INFINITY, 0usize);
    for j in 0..xy.len() - 1 {
        let d = segment_distance(point, xy[j], xy[j + 1]);
        if d < best.0 {
            best = (d, j);
        }
    }
    let j = best.1;
    let lo = traj.times[j.saturating_sub(1)];
    let hi = traj.times[(j + 2).min(xy.len() - 1)];
    let (_, d2) = golden_min(
        |t| {
            let [x, y] = traj.xy_at(t);
            (x - point[0]).powi(2) + (y - point[1]).powi(2)
        },
        lo,
        hi,
    );
    d2.sqrt()
}

/// Symmetric point-set mismatch between the `(x, y)` orbit and its mirror
/// `(−x, y)`, divided by the orbit's bounding-box diagonal.
pub fn pt_residual(traj: &Trajectory) -> Result<f64, AnalysisError> {
    if traj.len() < MIN_PT_SAMPLES {
        return Err(AnalysisError::TooFewSamples {
            got: traj.len(),
            min: MIN_PT_SAMPLES,
        });
    }
    let xy = traj.xy();
    let diam = bbox_diagonal(&xy);
    if diam.is_nan() || diam < DEGENERATE_DIAMETER {
        return Err(AnalysisError::DegenerateOrbit(diam));
    }
    // Reflection is an isometry, so distance(P, mirror curve) equals
    // distance(mirror P, curve).
    let worst = xy
        .par_iter()
        .map(|&[x, y]| curve_distance(traj, &xy, [-x, y]))
        .reduce(|| 0.0, f64::max);
    Ok(worst / diam)
}

/// `(pt_symmetric, residual)` with `pt_symmetric ⇔ residual < tol`.
pub fn classify_pt(traj: &Trajectory, tol: f64) -> Result<(bool, f64), AnalysisError> {
    let r = pt_residual(traj)?;
    Ok((r < tol, r))
}

/// Normalized point-set distance between two orbit families in the
/// `(x, y)` plane (symmetric Hausdorff distance over the union bounding box).
pub fn point_set_residual(a: &[Trajectory], b: &[Trajectory]) -> f64 {
    let pts = |set: &[Trajectory]| -> Vec<[f64; 2]> { set.iter().flat_map(|t| t.xy()).collect() };
    let (pa, pb) = (pts(a), pts(b));
    let diam = bbox_diagonal(&pa.iter().chain(&pb).copied().collect::<Vec<_>>());
    let one_way = |from: &[Trajectory], to: &[Trajectory]| -> f64 {
        let curves: Vec<(&Trajectory, Vec<[f64; 2]>)> = to.iter().map(|t| (t, t.xy())).collect();
        from.iter()
            .flat_map(|t| t.xy())
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&p| {
                curves
                    .iter()
                    .map(|(t, xy)| curve_distance(t, xy, p))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a)) / diam
}

/// Quarter rotation of the configuration plane, `(x, y) → (−y, x)`.
/// Momenta are carried along unchanged; the result is projection-only.
pub fn rotate_quarter(traj: &Trajectory) -> Trajectory {
    let dim = traj.dim();
    if dim == 2 {
        return traj.map_linear(|s| vec![-s[1], s[0]]);
    }
    let n = dim / 4;
    traj.map_linear(move |s| {
        let mut out = s.to_vec();
        for i in 0..n {
            out[i] = -s[2 * n + i];
            out[2 * n + i] = s[i];
        }
        out
    })
}

/// Image of a state under the PT map `(x, p, y, q) → (−x, p, y, −q)`. Run
/// backwards in time, it traces the mirror of the orbit through `s`.
pub fn pt_image(s: State1D) -> State1D {
    State1D::new(-s.x, s.p, s.y, -s.q)
}

fn spiral_drift(traj: &Trajectory, d: &[f64], cfg: &ClassifyConfig) -> Option<f64> {
    let candidates = return_candidates(d)?;
    let mut running_max = 0.0_f64;
    let mut last = 0usize;
    let mut period = None;
    for k in candidates {
        running_max = d[last..=k].iter().copied().fold(running_max, f64::max);
        last = k;
        let (t, dist) = refine_return(traj, traj.times[k - 1], traj.times[k + 1]);
        if dist < cfg.return_fraction * running_max {
            period = Some(t);
            break;
        }
    }
    let period = period?;
    let t_last = traj.t_last();
    let mut returns = Vec::new();
    let mut m = 1;
    while m as f64 * period + 0.25 * period <= t_last && returns.len() < 3 {
        let centre = m as f64 * period;
        let (lo, hi) = (centre - 0.25 * period, centre + 0.25 * period);
        // seed from the best sample in the window
        let (mut k_best, mut d_best) = (0usize, f64::INFINITY);
        for (k, &t) in traj.times.iter().enumerate() {
            if t >= lo && t <= hi && d[k] < d_best {
                k_best = k;
                d_best = d[k];
            }
        }
        if !d_best.is_finite() {
            break;
        }
        let a = traj.times[k_best.saturating_sub(1)];
        let b = traj.times[(k_best + 1).min(traj.len() - 1)];
        returns.push(refine_return(traj, a, b).1);
        m += 1;
    }
    if returns.len() < 3 {
        return None;
    }
    let loop_pts: Vec<[f64; 2]> = traj
        .times
        .iter()
        .zip(traj.xy())
        .filter(|(t, _)| **t <= period)
        .map(|(_, p)| p)
        .collect();
    let loop_size = bbox_diagonal(&loop_pts);
    let monotone = returns.windows(2).all(|w| w[1] > w[0]);
    monotone.then(|| returns[0] / loop_size)
}

/// Full classification of an integrated orbit.
pub fn classify(traj: &Trajectory, cfg: &ClassifyConfig) -> Result<Classification, AnalysisError> {
    let uniform = traj.resample(cfg.samples.max(MIN_PT_SAMPLES));
    let closure = detect_closure(&uniform, cfg.closure_tol)?;
    let (pt, sym) = match classify_pt(&uniform, cfg.pt_tol) {
        Ok(v) => v,
        Err(AnalysisError::DegenerateOrbit(_)) => {
            return Ok(Classification {
                closed: false,
                period: None,
                pt_symmetric: false,
                closure_residual: closure.residual,
                symmetry_residual: 0.0,
                flags: Flags {
                    fixed_point: true,
                    ..Flags::default()
                },
                spiral_drift: None,
            })
        }
        Err(e) => return Err(e),
    };
    let drift = if closure.closed {
        None
    } else {
        spiral_drift(&uniform, &return_distances(&uniform), cfg)
    };
    let spiral = drift.is_some_and(|v| v >= cfg.spiral_tol);
    Ok(Classification {
        closed: closure.closed,
        period: closure.period,
        pt_symmetric: pt && !spiral,
        closure_residual: closure.residual,
        symmetry_residual: sym,
        flags: Flags {
            spiral,
            ..Flags::default()
        },
        spiral_drift: drift,
    })
}

/// Classifies the outcome of an integration, mapping blow-ups to an
/// escaped, open, non-symmetric orbit.
pub fn classify_outcome(
    outcome: &Result<Trajectory, IntegrationError>,
    cfg: &ClassifyConfig,
) -> Result<Classification, String> {
    match outcome {
        Ok(traj) => classify(traj, cfg).map_err(|e| e.to_string()),
        Err(IntegrationError::NonFinite { .. }) => Ok(Classification::escaped()),
        Err(e) => Err(e.to_string()),
    }
}

/// Which parameter a scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanParameter {
    B,
    C,
}

impl ScanParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::B => "b",
            Self::C => "c",
        }
    }
}

/// Everything a scan holds fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub family: Family,
    pub sign: EnergySign,
    pub a: f64,
    /// The value of whichever of `b` / `c` is not scanned.
    pub fixed: f64,
    pub integrator: IntegratorConfig,
    pub classify: ClassifyConfig,
    /// Bisection stops once a bracket is narrower than this.
    pub bracket_width: f64,
}

impl ScanConfig {
    pub fn new(family: Family, fixed: f64) -> Self {
        Self {
            family,
            sign: EnergySign::Positive,
            a: 1.0,
            fixed,
            integrator: IntegratorConfig::default(),
            classify: ClassifyConfig::default(),
            bracket_width: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSample {
    pub value: f64,
    pub outcome: Result<Classification, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransitionKind {
    PtSymmetry,
    Closure,
}

/// A bracket `[lo, hi]` across which a classification flag flips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub kind: TransitionKind,
    pub lo: f64,
    pub hi: f64,
    pub value_at_lo: bool,
    pub value_at_hi: bool,
}

impl Transition {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub parameter: ScanParameter,
    pub samples: Vec<ScanSample>,
    pub transitions: Vec<Transition>,
}

fn flag(c: &Classification, kind: TransitionKind) -> bool {
    match kind {
        TransitionKind::PtSymmetry => c.pt_symmetric,
        TransitionKind::Closure => c.closed,
    }
}

/// Builds the initial state for one scan point and integrates it.
pub fn run_point(
    parameter: ScanParameter,
    value: f64,
    cfg: &ScanConfig,
) -> Result<Result<Trajectory, IntegrationError>, IcError> {
    let (b, c) = match parameter {
        ScanParameter::B => (value, cfg.fixed),
        ScanParameter::C => (cfg.fixed, value),
    };
    let params = Params::new(cfg.a, b);
    let ic = match cfg.family {
        Family::A => initcond::ic_family_a(c, params, cfg.sign)?,
        Family::B => initcond::ic_family_b(c, params, cfg.sign)?,
        Family::Custom => {
            return Err(IcError::InvalidRequest("scans use family A or B".into()));
        }
    };
    Ok(integrator::integrate_1d(params, ic.state, &cfg.integrator))
}

pub fn classify_point(
    parameter: ScanParameter,
    value: f64,
    cfg: &ScanConfig,
) -> Result<Classification, String> {
    match run_point(parameter, value, cfg) {
        Ok(outcome) => classify_outcome(&outcome, &cfg.classify),
        Err(e) => Err(e.to_string()),
    }
}

fn bisect(
    parameter: ScanParameter,
    kind: TransitionKind,
    mut t: Transition,
    cfg: &ScanConfig,
) -> Transition {
    while t.width() >= cfg.bracket_width {
        let mid = 0.5 * (t.lo + t.hi);
        match classify_point(parameter, mid, cfg) {
            Ok(c) if flag(&c, kind) == t.value_at_lo => t.lo = mid,
            Ok(_) => t.hi = mid,
            Err(_) => break,
        }
    }
    t
}

/// Samples `n_samples` evenly spaced values in `[lo, hi]`, classifies each,
/// and bisects every flip of `pt_symmetric` or `closed` between neighbouring
/// successful samples. Samples are evaluated in parallel; the result does
/// not depend on completion order.
pub fn scan(
    parameter: ScanParameter,
    lo: f64,
    hi: f64,
    n_samples: usize,
    cfg: &ScanConfig,
) -> Result<ScanResult, AnalysisError> {
    if n_samples < 3 {
        return Err(AnalysisError::InvalidScan(format!(
            "need at least 3 samples, got {n_samples}"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(AnalysisError::InvalidScan(format!(
            "empty range [{lo}, {hi}]"
        )));
    }
    let values: Vec<f64> = (0..n_samples)
        .map(|k| lo + (hi - lo) * k as f64 / (n_samples - 1) as f64)
        .collect();
    let samples: Vec<ScanSample> = values
        .par_iter()
        .map(|&value| ScanSample {
            value,
            outcome: classify_point(parameter, value, cfg),
        })
        .collect();

    let mut brackets = Vec::new();
    for w in samples.windows(2) {
        if let (Ok(a), Ok(b)) = (&w[0].outcome, &w[1].outcome) {
            for kind in [TransitionKind::PtSymmetry, TransitionKind::Closure] {
                if flag(a, kind) != flag(b, kind) {
                    brackets.push(Transition {
                        kind,
                        lo: w[0].value,
                        hi: w[1].value,
                        value_at_lo: flag(a, kind),
                        value_at_hi: flag(b, kind),
                    });
                }
            }
        }
    }
    let transitions = brackets
        .into_par_iter()
        .map(|t| bisect(parameter, t.kind, t, cfg))
        .collect();
    Ok(ScanResult {
        parameter,
        samples,
        transitions,
    })
}

/// Scan over `b` at fixed `c` for classical exceptional-point candidates.
pub fn ep_scan(
    c: f64,
    b_lo: f64,
    b_hi: f64,
    n_samples: usize,
    cfg: &ScanConfig,
) -> Result<ScanResult, AnalysisError> {
    let mut cfg = *cfg;
    cfg.fixed = c;
    scan(ScanParameter::B, b_lo, b_hi, n_samples, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::integrate_1d;
    use std::f64::consts::PI;

    fn harmonic_orbit(c: f64, t_end: f64) -> Trajectory {
        let prm = Params::unit_stiffness(0.0);
        let ic = initcond::ic_family_a(c, prm, EnergySign::Positive).unwrap();
        integrate_1d(
            prm,
            ic.state,
            &IntegratorConfig::default().with_t_end(t_end),
        )
        .unwrap()
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (t, v) = golden_min(|t| (t - 0.3).powi(2) + 1.0, -1.0, 2.0);
        assert!((t - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn harmonic_orbit_closes() {
        let traj = harmonic_orbit(2.0, 20.0);
        let c = detect_closure(&traj, 1e-6).unwrap();
        assert!(c.closed);
        assert!((c.period.unwrap() - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn short_span_is_insufficient() {
        let traj = harmonic_orbit(2.0, 2.0);
        assert_eq!(
            detect_closure(&traj, 1e-6),
            Err(AnalysisError::InsufficientSpan)
        );
    }

    #[test]
    fn harmonic_orbit_is_pt_symmetric() {
        let traj = harmonic_orbit(2.0, 20.0).resample(1024);
        let (pt, r) = classify_pt(&traj, 0.02).unwrap();
        assert!(pt);
        assert!(r < 1e-6, "residual {r}");
    }

    #[test]
    fn pt_needs_enough_samples() {
        let traj = harmonic_orbit(2.0, 20.0).resample(100);
        assert_eq!(
            classify_pt(&traj, 0.02),
            Err(AnalysisError::TooFewSamples { got: 100, min: 512 })
        );
    }

    #[test]
    fn fixed_point_is_degenerate() {
        let prm = Params::unit_stiffness(0.0);
        let traj = integrate_1d(
            prm,
            State1D::default(),
            &IntegratorConfig::default().with_t_end(10.0),
        )
        .unwrap();
        assert!(matches!(
            classify_pt(&traj, 0.02),
            Err(AnalysisError::DegenerateOrbit(_))
        ));
    }

    #[test]
    fn shifted_ellipse_is_not_symmetric() {
        // Translating the harmonic orbit off the ordinate breaks the mirror.
        let traj = harmonic_orbit(2.0, 20.0).map_linear(|s| vec![s[0] + 1.0, s[1], s[2], s[3]]);
        let (pt, r) = classify_pt(&traj.resample(1024), 0.02).unwrap();
        assert!(!pt);
        assert!(r > 0.1);
    }

    #[test]
    fn quarter_rotation_composes_to_half_turn() {
        let traj = harmonic_orbit(1.5, 7.0);
        let twice = rotate_quarter(&rotate_quarter(&traj));
        assert!(twice.projection_only);
        for (a, b) in traj.xy().iter().zip(twice.xy()) {
            assert_eq!([-a[0], -a[1]], b);
        }
        let t = 3.3;
        let (a, b) = (traj.xy_at(t), twice.xy_at(t));
        assert!((a[0] + b[0]).abs() < 1e-15 && (a[1] + b[1]).abs() < 1e-15);
    }

    #[test]
    fn scan_preconditions() {
        let cfg = ScanConfig::new(Family::A, 2.0);
        assert!(matches!(
            ep_scan(2.0, -0.01, 0.01, 0, &cfg),
            Err(AnalysisError::InvalidScan(_))
        ));
        assert!(matches!(
            ep_scan(2.0, -0.01, 0.01, 2, &cfg),
            Err(AnalysisError::InvalidScan(_))
        ));
        assert!(matches!(
            ep_scan(2.0, 0.01, -0.01, 5, &cfg),
            Err(AnalysisError::InvalidScan(_))
        ));
    }

    #[test]
    fn escaped_outcome_is_open() {
        let err = IntegrationError::NonFinite {
            t_last: 1.0,
            partial: None,
        };
        let c = classify_outcome(&Err(err), &ClassifyConfig::default()).unwrap();
        assert!(!c.closed && !c.pt_symmetric && c.flags.escaped);
        assert!(c.note().is_some());
    }
}
