use proptest::prelude::*;
use qes_core::bae::{enumerate_solutions, jacobian, residual};
use qes_core::spectrum::build_state;
use qes_core::{c64, GridSpec, Model, ModelSpec, Poly, RootSet, C64};

fn cplx() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| c64(re, im))
}

fn poly_deg2() -> impl Strategy<Value = Poly> {
    prop::collection::vec(cplx(), 3).prop_map(Poly::new)
}

fn separated(roots: &[C64], min: f64) -> bool {
    roots.iter().enumerate().all(|(i, a)| roots[i + 1..].iter().all(|b| (a - b).norm() > min))
}

/// `phi''/phi` for `phi = exp(-W_0) prod (z - z_k)`, written without using the
/// equations: `V_0 - (2P - Q'/2) sum 1/(z - z_k) + Q sum_{k != l} 1/((z - z_k)(z - z_l))`.
fn raw_v(spec: &ModelSpec, model: &Model, z: C64, roots: &[C64]) -> C64 {
    let (p, q) = (&spec.p, &spec.q);
    let single: C64 = roots.iter().map(|r| (z - r).inv()).sum();
    let mut pair = c64(0.0, 0.0);
    for (k, a) in roots.iter().enumerate() {
        for (l, b) in roots.iter().enumerate() {
            if k != l {
                pair += ((z - a) * (z - b)).inv();
            }
        }
    }
    model.potential().v0(z) - (p.eval(z) * 2.0 - q.derivative().eval(z) * 0.5) * single + q.eval(z) * pair
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobian_matches_finite_differences(p in poly_deg2(), q in poly_deg2(), roots in prop::collection::vec(cplx(), 1..5)) {
        prop_assume!(separated(&roots, 0.3) && !q.is_zero());
        let spec = ModelSpec::new(p, q, roots.len(), "random").unwrap();
        let j = jacobian(&spec, &roots).unwrap();
        let h = 1e-6;
        for col in 0..roots.len() {
            let mut plus = roots.clone();
            let mut minus = roots.clone();
            plus[col] += h;
            minus[col] -= h;
            let fp = residual(&spec, &plus).unwrap();
            let fm = residual(&spec, &minus).unwrap();
            for row in 0..roots.len() {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                let exact = j[(row, col)];
                prop_assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0),
                    "({row},{col}) fd {fd} exact {exact}");
            }
        }
    }

    #[test]
    fn residual_is_permutation_covariant(p in poly_deg2(), q in poly_deg2(), roots in prop::collection::vec(cplx(), 2..6), shift in 1usize..5) {
        prop_assume!(separated(&roots, 0.1) && !q.is_zero());
        let spec = ModelSpec::new(p, q, roots.len(), "random").unwrap();
        let n = roots.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted: Vec<C64> = perm.iter().map(|&i| roots[i]).collect();
        let f = residual(&spec, &roots).unwrap();
        let g = residual(&spec, &permuted).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            // Only the order of the pairwise sum changes.
            prop_assert!((g[k] - f[i]).norm() <= 1e-12 * f[i].norm().max(1.0));
        }
    }

    #[test]
    fn divmod_reconstructs(num in prop::collection::vec(cplx(), 1..8), den in prop::collection::vec(cplx(), 1..4)) {
        let (num, den) = (Poly::new(num), Poly::new(den));
        prop_assume!(!den.is_zero() && den.leading().norm() > 0.1);
        let (quot, rem) = num.divmod(&den).unwrap();
        prop_assert!(rem.degree() < den.degree().max(0) || rem.is_zero());
        let back = &(&quot * &den) + &rem;
        for k in 0..num.coeffs().len().max(back.coeffs().len()) {
            prop_assert!((back.coeff(k) - num.coeff(k)).norm() <= 1e-9 * num.max_coeff_abs().max(1.0));
        }
    }

    #[test]
    fn roots_reconstruct(roots in prop::collection::vec(cplx(), 1..9)) {
        prop_assume!(separated(&roots, 0.05));
        let p = Poly::from_roots(&roots);
        let found = p.roots().unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for r in &roots {
            let best = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-8, "missing root {r}");
        }
    }

    #[test]
    fn es_shape_is_level_independent(b in 0.2..3.0f64, a in 0.2..3.0f64, ell in 0.0..3.0f64, n in 1usize..8, x in 0.05..4.0f64) {
        for base in [ModelSpec::harmonic(b, 0), ModelSpec::radial(a, ell, 0)] {
            let m0 = Model::new(base.clone()).unwrap();
            let mn = Model::new(base.with_level(n)).unwrap();
            let (v0, vn) = (m0.potential_at(x), mn.potential_at(x));
            prop_assert!((vn - v0).norm() <= 1e-12 * v0.norm().max(1.0));
        }
    }
}

#[test]
fn pole_free_reconstruction_at_solutions() {
    let specs = [
        ModelSpec::sextic(1.0, 1.0, 3),
        ModelSpec::sextic(2.0, 3.0, 2),
        ModelSpec::harmonic(1.0, 4),
        ModelSpec::radial(1.0, 2.0, 3),
        ModelSpec::pt_quartic(1.0, 2.0, 1.0, 2),
    ];
    for spec in specs {
        let model = Model::new(spec.clone()).unwrap();
        let en = enumerate_solutions(&model, 64 * (spec.n + 1), 11);
        assert!(!en.solutions.is_empty(), "{}", spec.label);
        for sol in &en.solutions {
            let roots = sol.rootset.roots();
            for k in 0..20 {
                let z = c64(0.41 * k as f64 - 3.7, 0.6 + 0.05 * k as f64);
                let raw = raw_v(&spec, &model, z, roots);
                let canon = model.potential().v_n(z, roots);
                assert!((raw - canon).norm() <= 1e-8 * canon.norm().max(1.0), "{} at {z}: {raw} vs {canon}", spec.label);
            }
        }
    }
}

#[test]
fn normalization_converges_with_grid() {
    let cases = [ModelSpec::sextic(1.0, 1.0, 2), ModelSpec::harmonic(1.0, 3), ModelSpec::radial(1.0, 2.0, 2)];
    for spec in cases {
        let model = Model::new(spec.clone()).unwrap();
        let grid = GridSpec::for_model(&model);
        let en = enumerate_solutions(&model, 64 * (spec.n + 1), 3);
        for sol in &en.solutions {
            let a = build_state(&model, &sol.rootset, &grid).unwrap().norm;
            let b = build_state(&model, &sol.rootset, &grid.refine()).unwrap().norm;
            assert!((a - b).abs() <= 1e-7 * a, "{}: {a} vs {b}", spec.label);
        }
    }
    let m = Model::new(ModelSpec::harmonic(1.0, 0)).unwrap();
    let s = build_state(&m, &RootSet::empty(), &GridSpec::for_model(&m)).unwrap();
    assert!((s.norm / (-m.w0(0.0)).exp().norm() - core::f64::consts::PI.sqrt().sqrt()).abs() < 1e-10);
}
