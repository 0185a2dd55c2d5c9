//! Initial states on (or near) the surface `H = E`, `G = 0`.
//!
//! Families A and B are the literal templates parameterized by a free
//! constant `c`; [`ic_solve`] is a damped Gauss–Newton solver that places a
//! state exactly on the constraint surface.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::model::{self, Params, State1D};

/// Radicands in `(−RADICAND_CLAMP, 0)` are treated as zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    Custom,
}

/// Sign of the energy; the magnitude is fixed at `|E| = ½`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub fn energy(self) -> f64 {
        match self {
            Self::Positive => 0.5,
            Self::Negative => -0.5,
        }
    }

    pub fn from_energy(e: f64) -> Option<Self> {
        if e == 0.5 {
            Some(Self::Positive)
        } else if e == -0.5 {
            Some(Self::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IcError {
    #[error("radicand {0:e} is negative: no real initial condition in this family")]
    RadicandNegative(f64),
    #[error("denominator vanishes for these (c, b)")]
    SingularDenominator,
    #[error(
        "no convergence after {iterations} iterations (H - E = {h_residual:e}, G = {g_residual:e})"
    )]
    NoConvergence {
        iterations: usize,
        h_residual: f64,
        g_residual: f64,
    },
    #[error("singular Jacobian at iteration {0}")]
    SingularJacobian(usize),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("outside the level-set domain at x = {0}")]
    OutOfDomain(f64),
}

/// A constructed state together with its constraint residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialCondition {
    pub state: State1D,
    pub energy: f64,
    /// `eval_h(state) − energy`.
    pub h_residual: f64,
    /// `eval_g(state)`.
    pub g_residual: f64,
}

impl InitialCondition {
    /// `state` as given, with its residuals against `H = energy`, `G = 0`.
    pub fn audit(params: Params, state: State1D, energy: f64) -> Self {
        Self {
            state,
            energy,
            h_residual: model::eval_h(params, state) - energy,
            g_residual: model::eval_g(params, state),
        }
    }
}

fn checked_sqrt(radicand: f64) -> Result<f64, IcError> {
    if !radicand.is_finite() {
        return Err(IcError::SingularDenominator);
    }
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand > -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(IcError::RadicandNegative(radicand))
    }
}

/// Family A: `x = c, p = 0, y = 0, q = √((a c² − 2E) / (1 − b c²))`.
///
/// At `a = 1` this is `√((c² − 1)/(1 − bc²))` for `E = ½` and
/// `√((c² + 1)/(1 − bc²))` for `E = −½`. Because `y = p = 0`, `G` vanishes
/// identically.
pub fn ic_family_a(c: f64, params: Params, sign: EnergySign) -> Result<InitialCondition, IcError> {
    let e = sign.energy();
    let den = 1.0 - params.b * c * c;
    if den == 0.0 {
        return Err(IcError::SingularDenominator);
    }
    let q = checked_sqrt((params.a * c * c - 2.0 * e) / den)?;
    Ok(InitialCondition::audit(
        params,
        State1D::new(c, 0.0, 0.0, q),
        e,
    ))
}

/// Family B, reproduced exactly as printed:
/// `x = 1, p = c, y = 1` with `q = √(c² + (1 + 4b)/(1 + 4b²))` for `E = ½`
/// and `q = √((b − 1)/(c(4b² − 1)))` for `E = −½`.
///
/// These states generally do not satisfy `H = E` or `G = 0`; the residuals
/// are reported, not asserted.
pub fn ic_family_b(c: f64, params: Params, sign: EnergySign) -> Result<InitialCondition, IcError> {
    let b = params.b;
    let radicand = match sign {
        EnergySign::Positive => c * c + (1.0 + 4.0 * b) / (1.0 + 4.0 * b * b),
        EnergySign::Negative => {
            let den = c * (4.0 * b * b - 1.0);
            if den == 0.0 {
                return Err(IcError::SingularDenominator);
            }
            (b - 1.0) / den
        }
    };
    let q = checked_sqrt(radicand)?;
    Ok(InitialCondition::audit(
        params,
        State1D::new(1.0, c, 1.0, q),
        sign.energy(),
    ))
}

/// One of the four phase-space components of the 1D state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    X,
    P,
    Y,
    Q,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::X, Component::P, Component::Y, Component::Q];

    pub fn index(self) -> usize {
        match self {
            Self::X => 0,
            Self::P => 1,
            Self::Y => 2,
            Self::Q => 3,
        }
    }
}

/// Request for a state on `H = E`, `G = 0`.
///
/// Components not listed in `free` keep their value from `guess`.
#[derive(Debug, Clone, PartialEq)]
pub struct IcRequest {
    pub params: Params,
    pub energy: f64,
    pub guess: State1D,
    pub free: Vec<Component>,
    pub tol: f64,
    pub max_iter: usize,
}

impl IcRequest {
    pub fn new(params: Params, energy: f64, guess: State1D, free: Vec<Component>) -> Self {
        Self {
            params,
            energy,
            guess,
            free,
            tol: 1e-12,
            max_iter: 100,
        }
    }

    /// Guess defaulted to family A for `c` (falls back to `q = 0` when the
    /// family has no real state).
    pub fn from_family_a(c: f64, params: Params, sign: EnergySign, free: Vec<Component>) -> Self {
        let guess = ic_family_a(c, params, sign)
            .map(|ic| ic.state)
            .unwrap_or(State1D::new(c, 0.0, 0.0, 0.0));
        Self::new(params, sign.energy(), guess, free)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolvedCondition {
    pub ic: InitialCondition,
    pub iterations: usize,
}

fn residuals(params: Params, s: State1D, energy: f64) -> [f64; 2] {
    [model::eval_h(params, s) - energy, model::eval_g(params, s)]
}

/// Damped Gauss–Newton on `(H − E, G)` over one or two free components.
///
/// The step is the minimum-norm least-squares solution, so rank-deficient
/// slices (e.g. `G ≡ 0`) still converge on the remaining equation.
pub fn ic_solve(req: &IcRequest) -> Result<SolvedCondition, IcError> {
    let k = req.free.len();
    if k == 0 || k > 2 {
        return Err(IcError::InvalidRequest(format!(
            "need 1 or 2 free components, got {k}"
        )));
    }
    if req.free.len() == 2 && req.free[0] == req.free[1] {
        return Err(IcError::InvalidRequest(
            "free components must differ".into(),
        ));
    }
    let params = req.params;
    let mut s = req.guess.to_array();
    let mut r = residuals(params, State1D::from_slice(&s), req.energy);
    let norm = |r: &[f64; 2]| r[0].hypot(r[1]);

    for iter in 0..=req.max_iter {
        if r[0].abs() < req.tol && r[1].abs() < req.tol {
            let state = State1D::from_slice(&s);
            return Ok(SolvedCondition {
                ic: InitialCondition::audit(params, state, req.energy),
                iterations: iter,
            });
        }
        if iter == req.max_iter {
            break;
        }
        let st = State1D::from_slice(&s);
        let gh = model::grad_h(params, st);
        let gg = model::grad_g(params, st);
        let jac = DMatrix::from_fn(2, k, |row, col| {
            let idx = req.free[col].index();
            if row == 0 {
                gh[idx]
            } else {
                gg[idx]
            }
        });
        if jac.iter().all(|v| v.abs() < 1e-300) {
            return Err(IcError::SingularJacobian(iter));
        }
        let eps = 1e-13 * jac.norm();
        let pinv = jac
            .pseudo_inverse(eps)
            .map_err(|_| IcError::SingularJacobian(iter))?;
        let step = -(pinv * DVector::from_column_slice(&r));

        let r_norm = norm(&r);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let mut trial = s;
            for (col, comp) in req.free.iter().enumerate() {
                trial[comp.index()] += lambda * step[col];
            }
            let rt = residuals(params, State1D::from_slice(&trial), req.energy);
            if norm(&rt) < r_norm || !r_norm.is_finite() {
                accepted = Some((trial, rt));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((trial, rt)) => {
                s = trial;
                r = rt;
            }
            None => break,
        }
    }
    Err(IcError::NoConvergence {
        iterations: req.max_iter,
        h_residual: r[0],
        g_residual: r[1],
    })
}

/// Momentum `p ≥ 0` on the real level set `H = E` at position `x`:
/// `p = √((2E − a x²)/(1 − b x²))`.
pub fn portrait_momentum(params: Params, x: f64, energy: f64) -> Result<f64, IcError> {
    let den = 1.0 - params.b * x * x;
    if den == 0.0 {
        return Err(IcError::OutOfDomain(x));
    }
    let radicand = (2.0 * energy - params.a * x * x) / den;
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand > -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(IcError::OutOfDomain(x))
    }
}

/// The closed real level curve `H = E` as a polyline, upper branch left to
/// right then lower branch back, for parameters where it is a single oval
/// around the origin (`b < 1` at `E = ½, a = 1`).
pub fn portrait_curve(params: Params, energy: f64, n: usize) -> Result<Vec<[f64; 2]>, IcError> {
    if n < 2 || energy <= 0.0 || params.a <= 0.0 {
        return Err(IcError::InvalidRequest(
            "level curve needs n >= 2, E > 0, a > 0".into(),
        ));
    }
    // Turning points sit where 2E = a x², provided 1 − b x² stays positive.
    let x_max = (2.0 * energy / params.a).sqrt();
    if params.b * x_max * x_max >= 1.0 {
        return Err(IcError::OutOfDomain(x_max));
    }
    let mut upper = Vec::with_capacity(n);
    for k in 0..n {
        // Chebyshev spacing resolves the steep ends.
        let x = -x_max * (std::f64::consts::PI * k as f64 / (n - 1) as f64).cos();
        upper.push([x, portrait_momentum(params, x, energy)?]);
    }
    let mut curve = upper.clone();
    curve.extend(upper.iter().rev().skip(1).map(|&[x, p]| [x, -p]));
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn family_a_fig_2_4() {
        let ic = ic_family_a(2.0, Params::unit_stiffness(-0.2499), EnergySign::Positive).unwrap();
        assert_relative_eq!(ic.state.q, (3.0_f64 / 1.9996).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(ic.state.q, 1.22486, epsilon = 1e-5);
        assert!(ic.h_residual.abs() < 1e-14);
        assert_eq!(ic.g_residual, 0.0);
    }

    #[test]
    fn family_a_turning_point_and_rejection() {
        let ic = ic_family_a(1.0, Params::unit_stiffness(0.3), EnergySign::Positive).unwrap();
        assert_eq!(ic.state.q, 0.0);
        assert_eq!(
            ic_family_a(0.5, Params::unit_stiffness(0.0), EnergySign::Positive),
            Err(IcError::RadicandNegative(-0.75))
        );
        assert!(matches!(
            ic_family_a(1.5, Params::unit_stiffness(0.8), EnergySign::Positive),
            Err(IcError::RadicandNegative(_))
        ));
        assert_eq!(
            ic_family_a(1.0, Params::unit_stiffness(1.0), EnergySign::Positive),
            Err(IcError::SingularDenominator)
        );
    }

    #[test]
    fn family_a_negative_energy() {
        let ic = ic_family_a(1.3, Params::unit_stiffness(-2.0), EnergySign::Negative).unwrap();
        assert_relative_eq!(
            ic.state.q,
            ((1.69_f64 + 1.0) / (1.0 + 2.0 * 1.69)).sqrt(),
            epsilon = 1e-15
        );
        assert!(ic.h_residual.abs() < 1e-14);
    }

    #[test]
    fn family_b_literal_values() {
        let ic = ic_family_b(0.06, Params::unit_stiffness(1.0), EnergySign::Positive).unwrap();
        assert_relative_eq!(ic.state.q, (0.0036_f64 + 1.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(ic.state.q, 1.00180, epsilon = 1e-5);
        // The printed template is off the energy shell.
        assert_relative_eq!(ic.h_residual + 0.5, -0.6202158, epsilon = 1e-6);
        assert_relative_eq!(ic.g_residual, 1.9398921, epsilon = 1e-6);

        let ic = ic_family_b(0.8, Params::unit_stiffness(-0.18), EnergySign::Positive).unwrap();
        assert_relative_eq!(
            ic.state.q,
            (0.64_f64 + 0.28 / 1.1296).sqrt(),
            epsilon = 1e-15
        );

        let ic = ic_family_b(0.8, Params::unit_stiffness(-0.25), EnergySign::Positive).unwrap();
        assert_relative_eq!(ic.state.q, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn family_b_negative_branch_guards() {
        assert_eq!(
            ic_family_b(0.0, Params::unit_stiffness(0.3), EnergySign::Negative),
            Err(IcError::SingularDenominator)
        );
        assert_eq!(
            ic_family_b(1.0, Params::unit_stiffness(0.5), EnergySign::Negative),
            Err(IcError::SingularDenominator)
        );
        // (b − 1)/(c(4b² − 1)) = (−0.7)/(0.5·(−0.64)) > 0
        let ic = ic_family_b(0.5, Params::unit_stiffness(0.3), EnergySign::Negative).unwrap();
        assert_relative_eq!(ic.state.q, (0.7_f64 / 0.32).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn solve_recovers_family_a() {
        let prm = Params::unit_stiffness(-0.2499);
        let exact = ic_family_a(2.0, prm, EnergySign::Positive).unwrap();
        let guess = State1D::new(2.0, 0.0, 0.0, 1.0);
        let req = IcRequest::new(prm, 0.5, guess, vec![Component::Q]);
        let sol = ic_solve(&req).unwrap();
        assert_relative_eq!(sol.ic.state.q, exact.state.q, epsilon = 1e-12);
        assert!(sol.iterations > 0);
    }

    #[test]
    fn solve_from_family_b_guess() {
        let prm = Params::unit_stiffness(1.0);
        let lit = ic_family_b(0.06, prm, EnergySign::Positive).unwrap();
        let req = IcRequest::new(prm, 0.5, lit.state, vec![Component::P, Component::Q]);
        let sol = ic_solve(&req).unwrap();
        assert!(sol.ic.h_residual.abs() < 1e-12);
        assert!(sol.ic.g_residual.abs() < 1e-12);
        assert_eq!((sol.ic.state.x, sol.ic.state.y), (1.0, 1.0));
        assert!((sol.ic.state.q - lit.state.q).abs() > 1e-3);
    }

    #[test]
    fn solve_harmonic_circle() {
        let prm = Params::unit_stiffness(0.0);
        let req = IcRequest::new(
            prm,
            0.5,
            State1D::new(1.0, 0.0, 0.0, 0.0),
            vec![Component::X, Component::P],
        );
        let sol = ic_solve(&req).unwrap();
        let s = sol.ic.state;
        assert!((s.x * s.x + s.p * s.p - 1.0).abs() < 1e-12);

        let req = IcRequest::new(
            prm,
            0.5,
            State1D::new(0.4, 0.3, 0.0, 0.0),
            vec![Component::X, Component::P],
        );
        let s = ic_solve(&req).unwrap().ic.state;
        assert!((s.x * s.x + s.p * s.p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_rejects_bad_requests() {
        let prm = Params::unit_stiffness(0.0);
        let g = State1D::new(1.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            ic_solve(&IcRequest::new(prm, 0.5, g, vec![])),
            Err(IcError::InvalidRequest(_))
        ));
        assert!(matches!(
            ic_solve(&IcRequest::new(
                prm,
                0.5,
                g,
                vec![Component::X, Component::X]
            )),
            Err(IcError::InvalidRequest(_))
        ));
        // At the origin with only q free, both gradients vanish in q.
        let origin = State1D::new(0.0, 0.0, 0.0, 0.0);
        assert_eq!(
            ic_solve(&IcRequest::new(prm, 0.5, origin, vec![Component::Q])),
            Err(IcError::SingularJacobian(0))
        );
    }

    #[test]
    fn solve_reports_no_convergence() {
        // H = ½(x² − q²) at b = 0, p = y = 0: with x = 0 fixed, H = ½ needs
        // q² = −1, which has no real root.
        let prm = Params::unit_stiffness(0.0);
        let req = IcRequest::new(
            prm,
            0.5,
            State1D::new(0.0, 0.0, 0.0, 0.7),
            vec![Component::Q],
        );
        assert!(matches!(ic_solve(&req), Err(IcError::NoConvergence { .. })));
    }

    #[test]
    fn portrait_momentum_values() {
        assert_eq!(
            portrait_momentum(Params::unit_stiffness(0.0), 0.0, 0.5).unwrap(),
            1.0
        );
        for x in [0.9, 0.999, 1.0 - 1e-6] {
            let p = portrait_momentum(Params::unit_stiffness(1.0), x, 0.5).unwrap();
            assert!((p - 1.0).abs() < 1e-9);
        }
        let p0 = portrait_momentum(Params::unit_stiffness(0.0), 0.02, 0.5).unwrap();
        let p = portrait_momentum(Params::unit_stiffness(-1500.0), 0.02, 0.5).unwrap();
        assert!(p < p0);
        assert_eq!(
            portrait_momentum(Params::unit_stiffness(1.0), 1.0, 0.5),
            Err(IcError::OutOfDomain(1.0))
        );
        assert_eq!(
            portrait_momentum(Params::unit_stiffness(0.0), 2.0, 0.5),
            Err(IcError::OutOfDomain(2.0))
        );
    }

    #[test]
    fn portrait_curve_is_closed_level_set() {
        let prm = Params::unit_stiffness(0.6);
        let curve = portrait_curve(prm, 0.5, 65).unwrap();
        assert_eq!(curve.len(), 129);
        assert_eq!(curve.first(), curve.last());
        for &[x, p] in &curve {
            assert!((model::eval_real_eo(prm, x, p) - 0.5).abs() < 1e-12);
        }
    }
}
