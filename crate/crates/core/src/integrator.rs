//! Adaptive Dormand–Prince 5(4) integration with dense output and a running
//! audit of the two conserved quantities.

use std::fmt::Debug;
use std::sync::Arc;

use crate::model::{self, Params, State1D, StateNd};

/// An autonomous vector field together with the two quantities it conserves.
pub trait System: Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn rhs(&self, s: &[f64], ds: &mut [f64]);
    /// The conserved energy `H`.
    fn hamiltonian(&self, s: &[f64]) -> f64;
    /// The conserved constraint `G` (zero for systems without one).
    fn constraint(&self, s: &[f64]) -> f64;
}

/// 1D complexified oscillator, state `(x, p, y, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ceo1d(pub Params);

impl System for Ceo1d {
    fn dim(&self) -> usize {
        4
    }
    fn rhs(&self, s: &[f64], ds: &mut [f64]) {
        ds.copy_from_slice(&model::eval_rhs(self.0, State1D::from_slice(s)));
    }
    fn hamiltonian(&self, s: &[f64]) -> f64 {
        model::eval_h(self.0, State1D::from_slice(s))
    }
    fn constraint(&self, s: &[f64]) -> f64 {
        model::eval_g(self.0, State1D::from_slice(s))
    }
}

/// n-dimensional complexified oscillator, flat block layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeoNd {
    pub params: Params,
    pub n: usize,
}

impl System for CeoNd {
    fn dim(&self) -> usize {
        4 * self.n
    }
    fn rhs(&self, s: &[f64], ds: &mut [f64]) {
        ds.copy_from_slice(&model::eval_rhs_nd(self.params, &StateNd::from_flat(s)));
    }
    fn hamiltonian(&self, s: &[f64]) -> f64 {
        model::eval_h_nd(self.params, &StateNd::from_flat(s))
    }
    fn constraint(&self, s: &[f64]) -> f64 {
        model::eval_g_nd(self.params, &StateNd::from_flat(s))
    }
}

/// Real exotic oscillator, state `(x, p)`; it has no constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEo(pub Params);

impl System for RealEo {
    fn dim(&self) -> usize {
        2
    }
    fn rhs(&self, s: &[f64], ds: &mut [f64]) {
        ds.copy_from_slice(&model::eval_real_eo_rhs(self.0, s[0], s[1]));
    }
    fn hamiltonian(&self, s: &[f64]) -> f64 {
        model::eval_real_eo(self.0, s[0], s[1])
    }
    fn constraint(&self, _s: &[f64]) -> f64 {
        0.0
    }
}

/// The same system with time running backwards: `s(τ)` solves it iff
/// `s(−τ)` solves the original.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reversed<S>(pub S);

impl<S: System> System for Reversed<S> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn rhs(&self, s: &[f64], ds: &mut [f64]) {
        self.0.rhs(s, ds);
        ds.iter_mut().for_each(|v| *v = -*v);
    }
    fn hamiltonian(&self, s: &[f64]) -> f64 {
        self.0.hamiltonian(s)
    }
    fn constraint(&self, s: &[f64]) -> f64 {
        self.0.constraint(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub t_end: f64,
    pub sample_interval: f64,
    /// Any state component beyond this magnitude is treated as a blow-up.
    pub escape_bound: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.1,
            t_end: 100.0,
            sample_interval: 0.01,
            escape_bound: 1e8,
            max_steps: 20_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_sample_interval(mut self, dt: f64) -> Self {
        self.sample_interval = dt;
        self
    }

    pub fn validate(&self) -> Result<(), IntegrationError> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_step > 0.0
            && self.t_end.is_finite()
            && self.sample_interval > 0.0
            && self.sample_interval <= self.t_end
            && self.escape_bound > 0.0
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(IntegrationError::InvalidConfig(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum IntegrationError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("initial state is not finite or has the wrong dimension")]
    InvalidState,
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow {
        t: f64,
        h: f64,
        partial: Option<Box<Trajectory>>,
    },
    #[error("state left the finite domain after t = {t_last}")]
    NonFinite {
        t_last: f64,
        partial: Option<Box<Trajectory>>,
    },
    #[error("step budget of {0} exhausted")]
    MaxStepsExceeded(usize),
}

impl IntegrationError {
    /// Samples recorded before the failure, when at least two exist.
    pub fn partial(&self) -> Option<&Trajectory> {
        match self {
            Self::StepUnderflow { partial, .. } | Self::NonFinite { partial, .. } => {
                partial.as_deref()
            }
            _ => None,
        }
    }
}

// Dormand–Prince 5(4) tableau with Hairer's dense-output coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// PI step control (Hairer's DOPRI5 defaults).
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// One accepted step's continuous extension.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    /// Five coefficient vectors of length `dim`, concatenated.
    coeffs: Vec<f64>,
}

impl DenseSegment {
    fn eval_into(&self, t: f64, dim: usize, out: &mut [f64]) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let c = &self.coeffs;
        for i in 0..dim {
            out[i] = c[i]
                + th * (c[dim + i]
                    + th1 * (c[2 * dim + i] + th * (c[3 * dim + i] + th1 * c[4 * dim + i])));
        }
    }

    fn map_linear(&self, dim: usize, f: &dyn Fn(&[f64]) -> Vec<f64>) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for k in 0..5 {
            coeffs.extend(f(&self.coeffs[k * dim..(k + 1) * dim]));
        }
        Self {
            t0: self.t0,
            h: self.h,
            coeffs,
        }
    }
}

/// Piecewise-polynomial interpolant over `[0, t_last]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseOutput {
    dim: usize,
    segments: Vec<DenseSegment>,
}

impl DenseOutput {
    pub fn t_last(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t0 + s.h)
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Evaluates the interpolant; `t` is clamped to the covered interval.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let segs = &self.segments;
        let idx = segs.partition_point(|s| s.t0 + s.h < t).min(segs.len() - 1);
        let seg = &segs[idx];
        let t = t.clamp(seg.t0, seg.t0 + seg.h);
        seg.eval_into(t, self.dim, out);
    }
}

/// Sampled solution with its invariant audit.
#[derive(Debug, Clone)]
pub struct Trajectory {
    dim: usize,
    pub times: Vec<f64>,
    states: Vec<f64>,
    pub h0: f64,
    pub g0: f64,
    pub max_h_drift: f64,
    pub max_g_drift: f64,
    /// Set when only the `(x, y)` projection is meaningful, e.g. after a
    /// rotation of the configuration plane.
    pub projection_only: bool,
    dense: Arc<DenseOutput>,
    system: Arc<dyn System>,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.states.chunks_exact(self.dim)
    }

    pub fn state_1d(&self, i: usize) -> State1D {
        State1D::from_slice(self.state(i))
    }

    pub fn first(&self) -> &[f64] {
        self.state(0)
    }

    pub fn last(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    pub fn t_last(&self) -> f64 {
        *self.times.last().expect("non-empty trajectory")
    }

    pub fn system(&self) -> &dyn System {
        self.system.as_ref()
    }

    pub fn dense(&self) -> &DenseOutput {
        &self.dense
    }

    /// Interpolated state at time `t`.
    pub fn at(&self, t: f64) -> Vec<f64> {
        self.dense.eval(t)
    }

    /// Index of `x_1` and `y_1` in the state vector. For the real
    /// two-component system the second coordinate is the momentum.
    pub fn projection_indices(&self) -> (usize, usize) {
        match self.dim {
            2 => (0, 1),
            d => (0, d / 2),
        }
    }

    /// The `(x, y)` projection of every sample.
    pub fn xy(&self) -> Vec<[f64; 2]> {
        let (ix, iy) = self.projection_indices();
        self.states().map(|s| [s[ix], s[iy]]).collect()
    }

    pub fn xy_at(&self, t: f64) -> [f64; 2] {
        let (ix, iy) = self.projection_indices();
        let s = self.at(t);
        [s[ix], s[iy]]
    }

    fn from_samples(
        system: Arc<dyn System>,
        dense: Arc<DenseOutput>,
        times: Vec<f64>,
        states: Vec<f64>,
        projection_only: bool,
    ) -> Self {
        let dim = system.dim();
        let mut traj = Self {
            dim,
            times,
            states,
            h0: 0.0,
            g0: 0.0,
            max_h_drift: 0.0,
            max_g_drift: 0.0,
            projection_only,
            dense,
            system,
        };
        traj.audit();
        traj
    }

    /// Recomputes `H0`, `G0` and both drift maxima from the stored samples.
    pub fn audit(&mut self) {
        let sys = self.system.clone();
        let h0 = sys.hamiltonian(self.state(0));
        let g0 = sys.constraint(self.state(0));
        let (mut dh, mut dg) = (0.0_f64, 0.0_f64);
        for s in self.states.chunks_exact(self.dim) {
            dh = dh.max((sys.hamiltonian(s) - h0).abs());
            dg = dg.max((sys.constraint(s) - g0).abs());
        }
        self.h0 = h0;
        self.g0 = g0;
        self.max_h_drift = dh;
        self.max_g_drift = dg;
    }

    /// Uniform resampling over `[0, t_last]` through the dense output.
    /// Endpoints are copied, not interpolated.
    pub fn resample(&self, n_points: usize) -> Trajectory {
        assert!(n_points >= 2, "resample needs at least two points");
        let t_last = self.t_last();
        let mut times = Vec::with_capacity(n_points);
        let mut states = Vec::with_capacity(n_points * self.dim);
        let mut buf = vec![0.0; self.dim];
        for k in 0..n_points {
            if k == 0 {
                times.push(0.0);
                states.extend_from_slice(self.first());
            } else if k == n_points - 1 {
                times.push(t_last);
                states.extend_from_slice(self.last());
            } else {
                let t = t_last * k as f64 / (n_points - 1) as f64;
                self.dense.eval_into(t, &mut buf);
                times.push(t);
                states.extend_from_slice(&buf);
            }
        }
        let mut out = Self::from_samples(
            self.system.clone(),
            self.dense.clone(),
            times,
            states,
            self.projection_only,
        );
        if self.projection_only {
            out.h0 = self.h0;
            out.g0 = self.g0;
            out.max_h_drift = self.max_h_drift;
            out.max_g_drift = self.max_g_drift;
        }
        out
    }

    /// Applies a linear map to every sample and to the dense output. The
    /// result is flagged projection-only and keeps the original audit.
    pub fn map_linear(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Trajectory {
        let states: Vec<f64> = self.states().flat_map(&f).collect();
        let dense = DenseOutput {
            dim: self.dim,
            segments: self
                .dense
                .segments
                .iter()
                .map(|s| s.map_linear(self.dim, &f))
                .collect(),
        };
        Self {
            dim: self.dim,
            times: self.times.clone(),
            states,
            h0: self.h0,
            g0: self.g0,
            max_h_drift: self.max_h_drift,
            max_g_drift: self.max_g_drift,
            projection_only: true,
            dense: Arc::new(dense),
            system: self.system.clone(),
        }
    }
}

fn error_norm(y0: &[f64], y1: &[f64], err: &[f64], cfg: &IntegratorConfig) -> f64 {
    let n = y0.len() as f64;
    let sum: f64 = y0
        .iter()
        .zip(y1)
        .zip(err)
        .map(|((a, b), e)| {
            let sc = cfg.abs_tol + cfg.rel_tol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

/// Starting step from Hairer's heuristic.
fn initial_step(sys: &dyn System, y0: &[f64], f0: &[f64], cfg: &IntegratorConfig) -> f64 {
    let n = y0.len();
    let sc: Vec<f64> = y0
        .iter()
        .map(|v| cfg.abs_tol + cfg.rel_tol * v.abs())
        .collect();
    let rms = |v: &[f64]| -> f64 {
        (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt()
    };
    let d0 = rms(y0);
    let d1 = rms(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(cfg.max_step);
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
    let mut f1 = vec![0.0; n];
    sys.rhs(&y1, &mut f1);
    let df: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&df) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(cfg.max_step)
}

/// Integrates `sys` from `s0` over `[0, cfg.t_end]`, sampling every
/// `sample_interval` (plus `t_end` itself).
pub fn integrate<S>(
    sys: &S,
    s0: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegrationError>
where
    S: System + Clone + 'static,
{
    integrate_shared(Arc::new(sys.clone()), s0, cfg)
}

pub fn integrate_1d(
    params: Params,
    s0: State1D,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegrationError> {
    integrate(&Ceo1d(params), &s0.to_array(), cfg)
}

pub fn integrate_shared(
    sys: Arc<dyn System>,
    s0: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegrationError> {
    cfg.validate()?;
    let dim = sys.dim();
    if s0.len() != dim || s0.iter().any(|v| !v.is_finite()) {
        return Err(IntegrationError::InvalidState);
    }

    let t_end = cfg.t_end;
    let n_grid = (t_end / cfg.sample_interval + 1e-9).floor() as usize;
    let on_grid = (n_grid as f64 * cfg.sample_interval - t_end).abs() <= 1e-9 * t_end;
    let total_samples = if on_grid { n_grid + 1 } else { n_grid + 2 };
    let sample_time = |k: usize| -> f64 {
        if k + 1 == total_samples {
            t_end
        } else {
            k as f64 * cfg.sample_interval
        }
    };

    let mut times = Vec::with_capacity(total_samples);
    let mut states = Vec::with_capacity(total_samples * dim);
    times.push(0.0);
    states.extend_from_slice(s0);
    let mut next_sample = 1usize;

    let mut segments = Vec::new();
    let mut y = s0.to_vec();
    let mut k1 = vec![0.0; dim];
    sys.rhs(&y, &mut k1);
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut k5 = vec![0.0; dim];
    let mut k6 = vec![0.0; dim];
    let mut k7 = vec![0.0; dim];
    let mut ytmp = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];
    let mut errv = vec![0.0; dim];

    let mut t = 0.0_f64;
    let mut h = initial_step(sys.as_ref(), &y, &k1, cfg);
    let mut err_old = 1e-4_f64;
    let mut rejected_last = false;
    let h_min = 1e-14 * t_end;

    let finish = |times: Vec<f64>,
                  states: Vec<f64>,
                  segments: Vec<DenseSegment>|
     -> Option<Box<Trajectory>> {
        (times.len() >= 2 && !segments.is_empty()).then(|| {
            Box::new(Trajectory::from_samples(
                sys.clone(),
                Arc::new(DenseOutput { dim, segments }),
                times,
                states,
                false,
            ))
        })
    };

    let mut steps = 0usize;
    while t < t_end {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(IntegrationError::MaxStepsExceeded(cfg.max_steps));
        }
        if t + h > t_end || (t_end - t - h) < 1e-12 * t_end {
            h = t_end - t;
        }
        if h < h_min && t_end - t > h_min {
            return Err(IntegrationError::StepUnderflow {
                t,
                h,
                partial: finish(times, states, segments),
            });
        }

        for i in 0..dim {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        sys.rhs(&ytmp, &mut k2);
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(&ytmp, &mut k3);
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(&ytmp, &mut k4);
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(&ytmp, &mut k5);
        for i in 0..dim {
            ytmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        sys.rhs(&ytmp, &mut k6);
        for i in 0..dim {
            ynew[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        sys.rhs(&ynew, &mut k7);
        for i in 0..dim {
            errv[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }

        let finite = ynew.iter().chain(&k7).all(|v| v.is_finite());
        let escaped = ynew.iter().any(|v| v.abs() > cfg.escape_bound);
        if finite && escaped {
            return Err(IntegrationError::NonFinite {
                t_last: t,
                partial: finish(times, states, segments),
            });
        }
        let err = if finite {
            error_norm(&y, &ynew, &errv, cfg)
        } else {
            f64::INFINITY
        };

        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 {
            // Accepted: build the continuous extension on [t, t + h].
            let mut coeffs = vec![0.0; 5 * dim];
            for i in 0..dim {
                let ydiff = ynew[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                coeffs[i] = y[i];
                coeffs[dim + i] = ydiff;
                coeffs[2 * dim + i] = bspl;
                coeffs[3 * dim + i] = ydiff - h * k7[i] - bspl;
                coeffs[4 * dim + i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let seg = DenseSegment { t0: t, h, coeffs };
            let t_new = if (t_end - (t + h)).abs() <= 1e-12 * t_end {
                t_end
            } else {
                t + h
            };
            let mut buf = vec![0.0; dim];
            while next_sample < total_samples && sample_time(next_sample) <= t_new {
                let ts = sample_time(next_sample);
                if ts == t_end && t_new == t_end {
                    buf.copy_from_slice(&ynew);
                } else {
                    seg.eval_into(ts, dim, &mut buf);
                }
                times.push(ts);
                states.extend_from_slice(&buf);
                next_sample += 1;
            }
            segments.push(seg);

            let mut fac = fac11 / err_old.powf(BETA);
            fac = (1.0 / FAC_MAX).max((1.0 / FAC_MIN).min(fac / SAFETY));
            let mut h_next = h / fac;
            err_old = err.max(1e-4);
            if rejected_last {
                h_next = h_next.min(h);
            }
            rejected_last = false;
            t = t_new;
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k7);
            h = h_next.min(cfg.max_step);
        } else {
            let shrink = if err.is_finite() {
                (1.0 / FAC_MIN).min(fac11 / SAFETY)
            } else {
                10.0
            };
            h /= shrink;
            rejected_last = true;
        }
    }

    Ok(*finish(times, states, segments).expect("integration produced samples"))
}
