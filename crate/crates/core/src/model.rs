//! Hamiltonians, constraints and equations of motion of the complexified
//! exotic oscillator.
//!
//! The complex Hamiltonian is
//!
//! ```text
//! ℋ(z, π) = ½ (π² − b (z·π)² + a z²),    z = x + i y,  π = p − i q
//! ```
//!
//! and splits as `ℋ = H + i G`. `H` generates the flow on the real phase
//! space `(x, p, y, q)` with brackets `{x, p} = 1`, `{y, q} = 1`; `G` is the
//! first-class constraint. The canonical equations used throughout are
//!
//! ```text
//! ẋ = ∂H/∂p,  ṗ = −∂H/∂x,  ẏ = ∂H/∂q,  q̇ = −∂H/∂y
//! ```
//!
//! All evaluators are total: loci such as `1 − b x² = 0` are not special.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Physical parameters: harmonic stiffness `a` and exotic strength `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
}

impl Params {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// `a = 1`, the normalization used by every figure.
    pub const fn unit_stiffness(b: f64) -> Self {
        Self { a: 1.0, b }
    }
}

/// A point of the complexified 1D phase space.
///
/// `z = x + i y` and `π = p − i q`, so `q` is the *negative* imaginary part
/// of the momentum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State1D {
    pub x: f64,
    pub p: f64,
    pub y: f64,
    pub q: f64,
}

impl State1D {
    pub const fn new(x: f64, p: f64, y: f64, q: f64) -> Self {
        Self { x, p, y, q }
    }

    /// Component order `(x, p, y, q)`.
    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.p, self.y, self.q]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self::new(s[0], s[1], s[2], s[3])
    }

    pub fn z(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn pi(self) -> Complex64 {
        Complex64::new(self.p, -self.q)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// A point of the n-dimensional complexified phase space.
///
/// The flat layout used by the integrator and the bracket engine is the four
/// blocks `[x_1..x_n, p_1..p_n, y_1..y_n, q_1..q_n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateNd {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub y: Vec<f64>,
    pub q: Vec<f64>,
}

impl StateNd {
    /// Panics if the four vectors differ in length or are empty.
    pub fn new(x: Vec<f64>, p: Vec<f64>, y: Vec<f64>, q: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n > 0, "StateNd needs at least one dimension");
        assert!(
            p.len() == n && y.len() == n && q.len() == n,
            "StateNd blocks must share one length"
        );
        Self { x, p, y, q }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
        )
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn from_flat(flat: &[f64]) -> Self {
        assert!(flat.len().is_multiple_of(4) && !flat.is_empty());
        let n = flat.len() / 4;
        Self::new(
            flat[..n].to_vec(),
            flat[n..2 * n].to_vec(),
            flat[2 * n..3 * n].to_vec(),
            flat[3 * n..].to_vec(),
        )
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(4 * self.dim());
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.p);
        out.extend_from_slice(&self.y);
        out.extend_from_slice(&self.q);
        out
    }

    /// The single-dimension view; `None` unless `dim == 1`.
    pub fn as_1d(&self) -> Option<State1D> {
        (self.dim() == 1).then(|| State1D::new(self.x[0], self.p[0], self.y[0], self.q[0]))
    }

    pub fn from_1d(s: State1D) -> Self {
        Self::new(vec![s.x], vec![s.p], vec![s.y], vec![s.q])
    }
}

/// Real and imaginary part of the complex Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPair {
    /// `Re ℋ`, the physical energy on shell.
    pub h: f64,
    /// `Im ℋ`, the constraint value.
    pub g: f64,
}

impl EnergyPair {
    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.h, self.g)
    }
}

/// Evaluates `ℋ = ½ π² (1 − b z²) + ½ a z²` with complex arithmetic.
///
/// Independent of [`eval_h`] / [`eval_g`]; it is the oracle they are tested
/// against.
pub fn eval_complex_oracle(params: Params, s: State1D) -> EnergyPair {
    let z = s.z();
    let pi = s.pi();
    let a = Complex64::new(params.a, 0.0);
    let b = Complex64::new(params.b, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let hc = 0.5 * pi * pi * (one - b * z * z) + 0.5 * a * z * z;
    EnergyPair { h: hc.re, g: hc.im }
}

/// `H = ½[a(x² − y²) + (p² − q²)(1 − b(x² − y²)) − 4bxypq]`.
pub fn eval_h(params: Params, s: State1D) -> f64 {
    let State1D { x, p, y, q } = s;
    let Params { a, b } = params;
    let u = x * x - y * y;
    0.5 * (a * u + (p * p - q * q) * (1.0 - b * u) - 4.0 * b * x * y * p * q)
}

/// `G = xy(a − b(p² − q²)) − pq(1 − b(x² − y²))`.
pub fn eval_g(params: Params, s: State1D) -> f64 {
    let State1D { x, p, y, q } = s;
    let Params { a, b } = params;
    x * y * (a - b * (p * p - q * q)) - p * q * (1.0 - b * (x * x - y * y))
}

pub fn eval_energy_pair(params: Params, s: State1D) -> EnergyPair {
    EnergyPair {
        h: eval_h(params, s),
        g: eval_g(params, s),
    }
}

/// Right-hand side `(ẋ, ṗ, ẏ, q̇)` of the 1D equations of motion.
pub fn eval_rhs(params: Params, s: State1D) -> [f64; 4] {
    let State1D { x, p, y, q } = s;
    let Params { a, b } = params;
    let u = 1.0 - b * (x * x - y * y);
    let w = p * p - q * q;
    [
        p * u - 2.0 * b * x * y * q,
        b * x * w + 2.0 * b * y * p * q - a * x,
        -q * u - 2.0 * b * x * y * p,
        -b * y * w + 2.0 * b * x * p * q + a * y,
    ]
}

/// Gradient of `H` in the order `(∂x, ∂p, ∂y, ∂q)`.
pub fn grad_h(params: Params, s: State1D) -> [f64; 4] {
    let [xd, pd, yd, qd] = eval_rhs(params, s);
    [-pd, xd, -qd, yd]
}

/// Gradient of `G` in the order `(∂x, ∂p, ∂y, ∂q)`.
///
/// By the Cauchy–Riemann relations `G_x = −H_y`, `G_y = H_x`, `G_p = H_q`,
/// `G_q = −H_p`.
pub fn grad_g(params: Params, s: State1D) -> [f64; 4] {
    let [hx, hp, hy, hq] = grad_h(params, s);
    [-hy, hq, hx, -hp]
}

/// Energy of the real exotic oscillator, `½ p² (1 − b x²) + ½ a x²`.
pub fn eval_real_eo(params: Params, x: f64, p: f64) -> f64 {
    0.5 * p * p * (1.0 - params.b * x * x) + 0.5 * params.a * x * x
}

/// `(ẋ, ṗ) = (p(1 − bx²), bxp² − ax)`.
pub fn eval_real_eo_rhs(params: Params, x: f64, p: f64) -> [f64; 2] {
    [
        p * (1.0 - params.b * x * x),
        params.b * x * p * p - params.a * x,
    ]
}

/// Closed second-order form `ẍ = −2[bH − a(bx² − ½)]x` of the real flow.
pub fn real_eo_acceleration(params: Params, x: f64, energy: f64) -> f64 {
    let Params { a, b } = params;
    -2.0 * (b * energy - a * (b * x * x - 0.5)) * x
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// The two mixed inner products `U = (xp) + (yq)` and `V = (xq) − (yp)`.
///
/// `z·π = U − iV`, so `Re (z·π)² = U² − V²` and `Im (z·π)² = −2UV`.
fn mixed_products(s: &StateNd) -> (f64, f64) {
    let u = dot(&s.x, &s.p) + dot(&s.y, &s.q);
    let v = dot(&s.x, &s.q) - dot(&s.y, &s.p);
    (u, v)
}

/// n-dimensional `H`. For `dim == 1` this is exactly [`eval_h`].
pub fn eval_h_nd(params: Params, s: &StateNd) -> f64 {
    if let Some(s1) = s.as_1d() {
        return eval_h(params, s1);
    }
    let Params { a, b } = params;
    let (xp, yq) = (dot(&s.x, &s.p), dot(&s.y, &s.q));
    let (xq, yp) = (dot(&s.x, &s.q), dot(&s.y, &s.p));
    let kinetic = dot(&s.p, &s.p) - dot(&s.q, &s.q);
    let potential = a * (dot(&s.x, &s.x) - dot(&s.y, &s.y));
    let exotic = xp * xp + yq * yq - xq * xq - yp * yp + 2.0 * xp * yq + 2.0 * xq * yp;
    0.5 * (kinetic + potential - b * exotic)
}

/// n-dimensional `G`. For `dim == 1` this is exactly [`eval_g`].
pub fn eval_g_nd(params: Params, s: &StateNd) -> f64 {
    if let Some(s1) = s.as_1d() {
        return eval_g(params, s1);
    }
    let Params { a, b } = params;
    let (xp, yq) = (dot(&s.x, &s.p), dot(&s.y, &s.q));
    let (xq, yp) = (dot(&s.x, &s.q), dot(&s.y, &s.p));
    -dot(&s.p, &s.q) + a * dot(&s.x, &s.y) - b * (xp * yp - xp * xq + yp * yq - xq * yq)
}

/// Analytic gradient of the n-D `H`, flat block layout.
pub fn grad_h_nd(params: Params, s: &StateNd) -> Vec<f64> {
    let n = s.dim();
    if let Some(s1) = s.as_1d() {
        return grad_h(params, s1).to_vec();
    }
    let Params { a, b } = params;
    let (u, v) = mixed_products(s);
    let mut g = vec![0.0; 4 * n];
    for i in 0..n {
        let (x, p, y, q) = (s.x[i], s.p[i], s.y[i], s.q[i]);
        g[i] = a * x - b * (u * p - v * q);
        g[n + i] = p - b * (u * x + v * y);
        g[2 * n + i] = -a * y - b * (u * q + v * p);
        g[3 * n + i] = -q - b * (u * y - v * x);
    }
    g
}

/// Analytic gradient of the n-D `G`, flat block layout.
pub fn grad_g_nd(params: Params, s: &StateNd) -> Vec<f64> {
    let n = s.dim();
    let gh = grad_h_nd(params, s);
    let mut g = vec![0.0; 4 * n];
    for i in 0..n {
        g[i] = -gh[2 * n + i];
        g[n + i] = gh[3 * n + i];
        g[2 * n + i] = gh[i];
        g[3 * n + i] = -gh[n + i];
    }
    g
}

/// Canonical flow `(ẋ, ṗ, ẏ, q̇)` of the n-D `H`, flat block layout.
pub fn eval_rhs_nd(params: Params, s: &StateNd) -> Vec<f64> {
    if let Some(s1) = s.as_1d() {
        return eval_rhs(params, s1).to_vec();
    }
    let n = s.dim();
    let gh = grad_h_nd(params, s);
    let mut f = vec![0.0; 4 * n];
    for i in 0..n {
        f[i] = gh[n + i];
        f[n + i] = -gh[i];
        f[2 * n + i] = gh[3 * n + i];
        f[3 * n + i] = -gh[2 * n + i];
    }
    f
}

/// Closed second-order form of the n-D flow:
/// `ẍ_i = −[a + 2bH − 2ab x² + 2ab y²] x_i + 2b[G − 2a(xy)] y_i`.
pub fn nd_acceleration(params: Params, s: &StateNd) -> Vec<f64> {
    let Params { a, b } = params;
    let h = eval_h_nd(params, s);
    let g = eval_g_nd(params, s);
    let xx = dot(&s.x, &s.x);
    let yy = dot(&s.y, &s.y);
    let xy = dot(&s.x, &s.y);
    let cx = a + 2.0 * b * h - 2.0 * a * b * xx + 2.0 * a * b * yy;
    let cy = 2.0 * b * (g - 2.0 * a * xy);
    s.x.iter()
        .zip(&s.y)
        .map(|(x, y)| -cx * x + cy * y)
        .collect()
}

/// Complex Hamiltonian of the n-D model by complex vector arithmetic.
pub fn eval_complex_oracle_nd(params: Params, s: &StateNd) -> EnergyPair {
    let z: Vec<Complex64> =
        s.x.iter()
            .zip(&s.y)
            .map(|(&x, &y)| Complex64::new(x, y))
            .collect();
    let pi: Vec<Complex64> =
        s.p.iter()
            .zip(&s.q)
            .map(|(&p, &q)| Complex64::new(p, -q))
            .collect();
    let cdot = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        u.iter().zip(v).map(|(a, b)| a * b).sum()
    };
    let zpi = cdot(&z, &pi);
    let hc = 0.5 * (cdot(&pi, &pi) - params.b * zpi * zpi + params.a * cdot(&z, &z));
    EnergyPair { h: hc.re, g: hc.im }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("angular momentum needs dim = 3, got {0}")]
    NotThreeDimensional(usize),
}

fn cross(u: &[f64], v: &[f64]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Angular momentum of the complexified system, `Re(z × π) = x × p + y × q`.
///
/// On the real slice `y = q = 0` this is `L_i = ε_ijk x_j p_k`. Unlike the
/// bare `x × p` (see [`real_sector_angular_momentum`]) it Poisson-commutes
/// with `H` for every `b`, since it generates simultaneous rotations of both
/// canonical sectors.
pub fn angular_momentum(s: &StateNd) -> Result<[f64; 3], ModelError> {
    if s.dim() != 3 {
        return Err(ModelError::NotThreeDimensional(s.dim()));
    }
    let l = cross(&s.x, &s.p);
    let m = cross(&s.y, &s.q);
    Ok([l[0] + m[0], l[1] + m[1], l[2] + m[2]])
}

/// `Im(z × π) = y × p − x × q`.
pub fn angular_momentum_imag(s: &StateNd) -> Result<[f64; 3], ModelError> {
    if s.dim() != 3 {
        return Err(ModelError::NotThreeDimensional(s.dim()));
    }
    let l = cross(&s.y, &s.p);
    let m = cross(&s.x, &s.q);
    Ok([l[0] - m[0], l[1] - m[1], l[2] - m[2]])
}

/// Bare `x × p`. Conserved only at `b = 0`.
pub fn real_sector_angular_momentum(s: &StateNd) -> Result<[f64; 3], ModelError> {
    if s.dim() != 3 {
        return Err(ModelError::NotThreeDimensional(s.dim()));
    }
    Ok(cross(&s.x, &s.p))
}

/// Gradient of component `i` of [`angular_momentum`], flat layout (`n = 3`).
pub fn grad_angular_momentum(s: &StateNd, i: usize) -> Vec<f64> {
    assert_eq!(s.dim(), 3);
    assert!(i < 3);
    let n = 3;
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let mut g = vec![0.0; 12];
    // L_i = x_j p_k − x_k p_j + y_j q_k − y_k q_j
    g[j] = s.p[k];
    g[k] = -s.p[j];
    g[n + k] = s.x[j];
    g[n + j] = -s.x[k];
    g[2 * n + j] = s.q[k];
    g[2 * n + k] = -s.q[j];
    g[3 * n + k] = s.y[j];
    g[3 * n + j] = -s.y[k];
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_real_point() {
        let e = eval_complex_oracle(Params::new(1.0, 0.0), State1D::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(e.h, 0.5);
        assert_eq!(e.g, 0.0);
    }

    #[test]
    fn constraint_vanishes_on_real_position_momentumless_slice() {
        for b in [-3.0, 0.0, 0.8] {
            let s = State1D::new(0.7, 0.0, 0.0, 1.9);
            assert_eq!(eval_g(Params::new(1.0, b), s), 0.0);
            assert_eq!(eval_complex_oracle(Params::new(1.0, b), s).g.abs(), 0.0);
        }
        assert_eq!(
            eval_g(Params::new(1.0, 0.0), State1D::new(1.0, 1.0, 1.0, 1.0)),
            0.0
        );
    }

    #[test]
    fn h_reduces_to_harmonic() {
        let s = State1D::new(0.3, -1.2, 0.0, 0.0);
        assert_relative_eq!(
            eval_h(Params::new(1.0, 0.0), s),
            0.5 * (1.44 + 0.09),
            epsilon = 1e-15
        );
    }

    #[test]
    fn family_a_point_has_half_energy() {
        let b = -0.2499;
        let q = (3.0_f64 / (1.0 - b * 4.0)).sqrt();
        let h = eval_h(Params::new(1.0, b), State1D::new(2.0, 0.0, 0.0, q));
        assert_relative_eq!(h, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn rhs_hand_values() {
        assert_eq!(
            eval_rhs(Params::new(1.0, 0.0), State1D::new(1.0, 0.0, 0.0, 0.0)),
            [0.0, -1.0, 0.0, 0.0]
        );
        let r = eval_rhs(Params::new(1.0, 0.5), State1D::new(1.0, 1.0, 0.0, 0.0));
        assert_relative_eq!(r[0], 0.5);
        assert_relative_eq!(r[1], -0.5);
        assert_eq!(r[2], 0.0);
        assert_eq!(r[3], 0.0);
    }

    #[test]
    fn real_eo_values() {
        assert_eq!(eval_real_eo(Params::new(1.0, 1.0), 1.0, 1.0), 0.5);
        assert_eq!(eval_real_eo(Params::new(1.0, 0.0), 0.0, 1.0), 0.5);
        let prm = Params::new(1.0, -10.0);
        let x = 0.3;
        let p = ((2.0 * 0.5 - x * x) / (1.0 - prm.b * x * x)).sqrt();
        assert_relative_eq!(eval_real_eo(prm, x, p), 0.5, epsilon = 1e-15);
        assert_eq!(
            eval_real_eo_rhs(Params::new(1.0, 0.0), 0.4, -0.2),
            [-0.2, -0.4]
        );
        assert_eq!(
            eval_real_eo_rhs(Params::new(1.0, 1.0), 1.0, 1.0),
            [0.0, 0.0]
        );
    }

    #[test]
    fn nd_collapses_at_zero_b() {
        let s = StateNd::new(
            vec![0.1, -0.4, 0.3],
            vec![0.2, 0.5, -0.7],
            vec![-0.9, 0.6, 0.05],
            vec![0.3, -0.2, 0.8],
        );
        let prm = Params::new(1.3, 0.0);
        let pp = dot(&s.p, &s.p) - dot(&s.q, &s.q);
        let xx = dot(&s.x, &s.x) - dot(&s.y, &s.y);
        assert_relative_eq!(eval_h_nd(prm, &s), 0.5 * (pp + 1.3 * xx), epsilon = 1e-14);
        assert_relative_eq!(
            eval_g_nd(prm, &s),
            1.3 * dot(&s.x, &s.y) - dot(&s.p, &s.q),
            epsilon = 1e-14
        );
    }

    #[test]
    fn angular_momentum_basics() {
        let mut s = StateNd::zeros(3);
        s.x = vec![1.0, 0.0, 0.0];
        s.p = vec![0.0, 1.0, 0.0];
        assert_eq!(angular_momentum(&s).unwrap(), [0.0, 0.0, 1.0]);
        s.p = vec![2.0, 0.0, 0.0];
        assert_eq!(angular_momentum(&s).unwrap(), [0.0, 0.0, 0.0]);
        assert_eq!(
            angular_momentum(&StateNd::zeros(2)),
            Err(ModelError::NotThreeDimensional(2))
        );
    }

    #[test]
    fn angular_momentum_gradient_matches_differences() {
        let s = StateNd::from_flat(&[
            0.3, -0.1, 0.8, 0.5, 0.2, -0.6, -0.4, 0.9, 0.1, 0.7, -0.3, 0.25,
        ]);
        for i in 0..3 {
            let g = grad_angular_momentum(&s, i);
            let flat = s.to_flat();
            for k in 0..12 {
                let h = 1e-6;
                let mut up = flat.clone();
                let mut dn = flat.clone();
                up[k] += h;
                dn[k] -= h;
                let fd = (angular_momentum(&StateNd::from_flat(&up)).unwrap()[i]
                    - angular_momentum(&StateNd::from_flat(&dn)).unwrap()[i])
                    / (2.0 * h);
                assert!((fd - g[k]).abs() < 1e-8, "component {i} slot {k}");
            }
        }
    }
}
