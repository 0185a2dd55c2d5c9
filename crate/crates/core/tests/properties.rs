use ceo_core::analysis::pt_image;
use ceo_core::brackets::{self, Observable};
use ceo_core::initcond::{self, Component, IcRequest};
use ceo_core::model::{self, Params, State1D, StateNd};
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = Params> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Params::new(a, b))
}

fn state1() -> impl Strategy<Value = State1D> {
    prop::array::uniform4(-1.5..1.5f64).prop_map(|v| State1D::from_slice(&v))
}

fn state_nd(n: usize) -> impl Strategy<Value = StateNd> {
    prop::collection::vec(-1.0..1.0f64, 4 * n).prop_map(|v| StateNd::from_flat(&v))
}

fn oracle(prm: Params, s: State1D) -> Complex64 {
    let z = Complex64::new(s.x, s.y);
    let pi = Complex64::new(s.p, -s.q);
    0.5 * (pi * pi - prm.b * (z * pi) * (z * pi) + prm.a * z * z)
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn real_and_imaginary_parts_match_complex_arithmetic(prm in params(), s in state1()) {
        let want = oracle(prm, s);
        let e = model::eval_energy_pair(prm, s);
        prop_assert!((e.as_complex() - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn gradients_match_finite_differences(prm in params(), s in state_nd(3)) {
        for obs in [Observable::hamiltonian(prm), Observable::constraint(prm)] {
            let a = obs.gradient(&s);
            let f = brackets::fd_gradient(&obs, &s);
            let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (u, v) in a.iter().zip(&f) {
                prop_assert!((u - v).abs() < 1e-7 * scale);
            }
        }
    }

    #[test]
    fn h_and_g_are_constant_along_the_flow(prm in params(), s in state_nd(3)) {
        let f = model::eval_rhs_nd(prm, &s);
        let gh = model::grad_h_nd(prm, &s);
        let gg = model::grad_g_nd(prm, &s);
        let scale = 1.0 + dot(&f, &f);
        prop_assert!(dot(&gh, &f).abs() < 1e-12 * scale);
        prop_assert!(dot(&gg, &f).abs() < 1e-12 * scale);
    }

    #[test]
    fn one_dimensional_nd_path_is_bit_identical(prm in params(), s in state1()) {
        let nd = StateNd::from_1d(s);
        prop_assert_eq!(model::eval_h_nd(prm, &nd).to_bits(), model::eval_h(prm, s).to_bits());
        prop_assert_eq!(model::eval_g_nd(prm, &nd).to_bits(), model::eval_g(prm, s).to_bits());
        let f1 = model::eval_rhs(prm, s);
        let fnd = model::eval_rhs_nd(prm, &nd);
        for (u, v) in f1.iter().zip(&fnd) {
            prop_assert_eq!(u.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn pt_map_reverses_the_flow(prm in params(), s in state1()) {
        // f(PT s) = −PT f(s) with PT = diag(−1, 1, 1, −1)
        let f = model::eval_rhs(prm, s);
        let g = model::eval_rhs(prm, pt_image(s));
        let want = [f[0], -f[1], -f[2], f[3]];
        for (u, v) in g.iter().zip(want) {
            prop_assert!((u - v).abs() <= 1e-13 * (1.0 + v.abs()));
        }
        prop_assert!((model::eval_h(prm, pt_image(s)) - model::eval_h(prm, s)).abs() < 1e-13);
    }

    #[test]
    fn bracket_is_antisymmetric(prm in params(), s in state_nd(3), i in 0usize..3) {
        let h = Observable::hamiltonian(prm);
        let g = Observable::constraint(prm);
        let l = Observable::angular_momentum(i);
        for (f1, f2) in [(&h, &g), (&g, &l), (&l, &h)] {
            let sum = brackets::poisson_bracket(f1, f2, &s) + brackets::poisson_bracket(f2, f1, &s);
            prop_assert!(sum.abs() < 1e-12);
        }
    }

    #[test]
    fn bracket_obeys_leibniz(s in state_nd(2), i in 0usize..2, j in 0usize..2) {
        let f = Observable::coordinate(Component::X, i);
        let g = Observable::coordinate(Component::Q, j);
        let h = Observable::hamiltonian(Params::new(1.0, 0.7)).without_gradient();
        let fg = Observable::product(&f, &g).without_gradient();
        let lhs = brackets::poisson_bracket(&fg, &h, &s);
        let rhs = f.eval(&s) * brackets::poisson_bracket(&g, &h, &s) + brackets::poisson_bracket(&f, &h, &s) * g.eval(&s);
        prop_assert!((lhs - rhs).abs() < 1e-7);
    }

    #[test]
    fn solved_conditions_lie_on_the_surface(b in -0.5..0.5f64, x in 0.5..2.0f64, q in 0.2..2.0f64, p in -0.3..0.3f64) {
        let prm = Params::unit_stiffness(b);
        let req = IcRequest::new(prm, 0.5, State1D::new(x, p, 0.0, q), vec![Component::P, Component::Q]);
        if let Ok(sol) = initcond::ic_solve(&req) {
            let e = model::eval_energy_pair(prm, sol.ic.state);
            prop_assert!((e.h - 0.5).abs() < 1e-12 && e.g.abs() < 1e-12);
            prop_assert_eq!(sol.ic.state.x, x);
        }
    }
}
