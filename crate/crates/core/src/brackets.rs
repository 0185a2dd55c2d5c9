//! Numeric Poisson brackets on the canonical phase space
//! `{x_i, p_j} = δ_ij`, `{y_i, q_j} = δ_ij`, and a randomized check of the
//! constraint algebra.
//!
//! Gradients use the flat block layout `[x.., p.., y.., q..]` of
//! [`StateNd::to_flat`].

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::initcond::Component;
use crate::model::{self, Params, StateNd};

type Eval = Arc<dyn Fn(&StateNd) -> f64 + Send + Sync>;
type Grad = Arc<dyn Fn(&StateNd) -> Vec<f64> + Send + Sync>;

/// Base step of the Richardson-extrapolated central differences.
pub const FD_STEP: f64 = 1e-3;

/// Default tolerance of each algebra row.
pub const ALGEBRA_TOL: f64 = 1e-10;

/// A phase-space function with an optional hand-coded gradient.
#[derive(Clone)]
pub struct Observable {
    pub name: String,
    eval: Eval,
    grad: Option<Grad>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("name", &self.name)
            .field("analytic_gradient", &self.grad.is_some())
            .finish()
    }
}

/// Analytic gradient in `(x, p, y, q)` block order.
pub type BoxedGradient = Box<dyn Fn(&StateNd) -> Vec<f64> + Send + Sync>;

impl Observable {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&StateNd) -> f64 + Send + Sync + 'static,
        grad: Option<BoxedGradient>,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            grad: grad.map(Arc::from),
        }
    }

    pub fn hamiltonian(params: Params) -> Self {
        Self {
            name: "H".into(),
            eval: Arc::new(move |s| model::eval_h_nd(params, s)),
            grad: Some(Arc::new(move |s| model::grad_h_nd(params, s))),
        }
    }

    pub fn constraint(params: Params) -> Self {
        Self {
            name: "G".into(),
            eval: Arc::new(move |s| model::eval_g_nd(params, s)),
            grad: Some(Arc::new(move |s| model::grad_g_nd(params, s))),
        }
    }

    /// Component `i` (0-based) of the angular momentum; `n = 3` only.
    pub fn angular_momentum(i: usize) -> Self {
        assert!(i < 3);
        Self {
            name: format!("L{}", i + 1),
            eval: Arc::new(move |s| {
                model::angular_momentum(s).expect("angular momentum needs n = 3")[i]
            }),
            grad: Some(Arc::new(move |s| model::grad_angular_momentum(s, i))),
        }
    }

    /// The coordinate `c_i`.
    pub fn coordinate(c: Component, i: usize) -> Self {
        let name = match c {
            Component::X => "x",
            Component::P => "p",
            Component::Y => "y",
            Component::Q => "q",
        };
        Self {
            name: format!("{name}{}", i + 1),
            eval: Arc::new(move |s| {
                let v = match c {
                    Component::X => &s.x,
                    Component::P => &s.p,
                    Component::Y => &s.y,
                    Component::Q => &s.q,
                };
                v[i]
            }),
            grad: Some(Arc::new(move |s| {
                let mut g = vec![0.0; 4 * s.dim()];
                g[c.index() * s.dim() + i] = 1.0;
                g
            })),
        }
    }

    /// Pointwise product; analytic gradient by the product rule when both
    /// factors have one.
    pub fn product(f: &Observable, g: &Observable) -> Self {
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        let grad: Option<Grad> = match (&f.grad, &g.grad) {
            (Some(fg), Some(gg)) => {
                let (fe, ge, fg, gg) = (fe.clone(), ge.clone(), fg.clone(), gg.clone());
                Some(Arc::new(move |s| {
                    let (a, b) = (fe(s), ge(s));
                    fg(s)
                        .iter()
                        .zip(gg(s))
                        .map(|(da, db)| da * b + a * db)
                        .collect()
                }))
            }
            _ => None,
        };
        Self {
            name: format!("{}·{}", f.name, g.name),
            eval: Arc::new(move |s| fe(s) * ge(s)),
            grad,
        }
    }

    /// `H` with the sign of the `a`-term flipped. Negative control for the
    /// algebra check: it no longer commutes with `G`.
    pub fn faulty_hamiltonian(params: Params) -> Self {
        let flipped = Params::new(-params.a, params.b);
        Self {
            name: "H*".into(),
            eval: Arc::new(move |s| model::eval_h_nd(flipped, s)),
            grad: Some(Arc::new(move |s| model::grad_h_nd(flipped, s))),
        }
    }

    /// The same function with its analytic gradient dropped.
    pub fn without_gradient(&self) -> Self {
        Self {
            name: self.name.clone(),
            eval: self.eval.clone(),
            grad: None,
        }
    }

    pub fn has_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn eval(&self, s: &StateNd) -> f64 {
        (self.eval)(s)
    }

    /// Analytic gradient if present, else [`fd_gradient`].
    pub fn gradient(&self, s: &StateNd) -> Vec<f64> {
        match &self.grad {
            Some(g) => g(s),
            None => fd_gradient(self, s),
        }
    }
}

/// Central differences at steps `h` and `h/2`, Richardson-combined.
pub fn fd_gradient(f: &Observable, s: &StateNd) -> Vec<f64> {
    let base = s.to_flat();
    let central = |k: usize, h: f64| {
        let mut u = base.clone();
        u[k] = base[k] + h;
        let fp = f.eval(&StateNd::from_flat(&u));
        u[k] = base[k] - h;
        let fm = f.eval(&StateNd::from_flat(&u));
        (fp - fm) / (2.0 * h)
    };
    (0..base.len())
        .map(|k| {
            let d1 = central(k, FD_STEP);
            let d2 = central(k, 0.5 * FD_STEP);
            (4.0 * d2 - d1) / 3.0
        })
        .collect()
}

/// `{f, g}` from two flat gradients.
pub fn bracket_from_gradients(df: &[f64], dg: &[f64]) -> f64 {
    let n = df.len() / 4;
    let (x, p, y, q) = (0, n, 2 * n, 3 * n);
    (0..n)
        .map(|i| {
            df[x + i] * dg[p + i] - df[p + i] * dg[x + i] + df[y + i] * dg[q + i]
                - df[q + i] * dg[y + i]
        })
        .sum()
}

pub fn poisson_bracket(f: &Observable, g: &Observable, s: &StateNd) -> f64 {
    bracket_from_gradients(&f.gradient(s), &g.gradient(s))
}

/// A state uniform in `[−1, 1]^{4n}`.
pub fn random_state(rng: &mut impl Rng, dim: usize) -> StateNd {
    let flat: Vec<f64> = (0..4 * dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    StateNd::from_flat(&flat)
}

/// Reproducible draws for seed `seed`.
pub fn random_states(seed: u64, dim: usize, count: usize) -> Vec<StateNd> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_state(&mut rng, dim)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraRow {
    pub name: String,
    pub max_abs: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub params: Params,
    pub dim: usize,
    pub n_trials: usize,
    pub seed: u64,
    pub analytic: bool,
    pub rows: Vec<AlgebraRow>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn row(&self, name: &str) -> Option<&AlgebraRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# a={} b={} n={} trials={} seed={} gradients={}",
            self.params.a,
            self.params.b,
            self.dim,
            self.n_trials,
            self.seed,
            if self.analytic {
                "analytic"
            } else {
                "finite-difference"
            }
        )?;
        writeln!(
            f,
            "{:<16} {:>12} {:>10} status",
            "bracket", "max_abs", "tol"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<16} {:>12.3e} {:>10.1e} {}",
                r.name,
                r.max_abs,
                r.tol,
                if r.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AlgebraConfig {
    pub dim: usize,
    pub n_trials: usize,
    pub seed: u64,
    /// Use hand-coded gradients; otherwise finite differences throughout.
    pub analytic: bool,
    pub tol: f64,
}

impl AlgebraConfig {
    pub fn new(dim: usize, n_trials: usize, seed: u64) -> Self {
        Self {
            dim,
            n_trials,
            seed,
            analytic: true,
            tol: ALGEBRA_TOL,
        }
    }
}

/// Tabulates `max |{G,H}|`, and for `n = 3` also `max |{L_i,H}|` and
/// `max |{L_i,L_j} − ε_ijk L_k|`, over random states.
pub fn verify_algebra(params: Params, cfg: &AlgebraConfig) -> AlgebraReport {
    verify_algebra_with(params, &Observable::hamiltonian(params), cfg)
}

/// [`verify_algebra`] against a caller-supplied Hamiltonian.
pub fn verify_algebra_with(params: Params, h: &Observable, cfg: &AlgebraConfig) -> AlgebraReport {
    assert!(cfg.n_trials >= 1, "n_trials must be at least 1");
    let pick = |o: Observable| {
        if cfg.analytic {
            o
        } else {
            o.without_gradient()
        }
    };
    let h = pick(h.clone());
    let g = pick(Observable::constraint(params));

    // (name, f, g, subtracted observable)
    let mut checks: Vec<(String, Observable, Observable, Option<Observable>)> =
        vec![("{G,H}".into(), g, h.clone(), None)];
    if cfg.dim == 3 {
        let l: Vec<Observable> = (0..3)
            .map(|i| pick(Observable::angular_momentum(i)))
            .collect();
        for li in &l {
            checks.push((format!("{{{},H}}", li.name), li.clone(), h.clone(), None));
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            checks.push((
                format!("{{{},{}}}-{}", l[i].name, l[j].name, l[k].name),
                l[i].clone(),
                l[j].clone(),
                Some(l[k].clone()),
            ));
        }
    }

    let states = random_states(cfg.seed, cfg.dim, cfg.n_trials);
    let rows = checks
        .iter()
        .map(|(name, f, g, sub)| {
            let max_abs = states
                .par_iter()
                .map(|s| {
                    let v = poisson_bracket(f, g, s) - sub.as_ref().map_or(0.0, |o| o.eval(s));
                    v.abs()
                })
                .reduce(|| 0.0, f64::max);
            AlgebraRow {
                name: name.clone(),
                max_abs,
                tol: cfg.tol,
                pass: max_abs < cfg.tol,
            }
        })
        .collect();
    AlgebraReport {
        params,
        dim: cfg.dim,
        n_trials: cfg.n_trials,
        seed: cfg.seed,
        analytic: cfg.analytic,
        rows,
    }
}
