use acalc_core::algebra::GeneratedAlgebra;
use acalc_core::transcendental::{cos, cosh, exp, pythagorean, sin, sinh, special_functions, DEFAULT_TOL};
use acalc_core::{preset, Algebra, Element};
use proptest::prelude::*;

const COMMUTATIVE: [&str; 7] = ["complex", "hyperbolic", "dual", "H_N:3", "C_N:3", "Gamma_N:3", "C_N:5"];

fn el(alg: &Algebra, raw: &[f64]) -> Element {
    Element::new(alg, raw[..alg.dim()].to_vec()).unwrap()
}

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, 5)
}

fn pythagorean_algebras() -> Vec<String> {
    let mut v = vec!["dual".to_string()];
    for n in 2..=5 {
        v.push(format!("H_N:{n}"));
        v.push(format!("C_N:{n}"));
        v.push(format!("Gamma_N:{n}"));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_is_a_homomorphism(k in 0..COMMUTATIVE.len(), a in coords(), b in coords()) {
        let alg = preset(COMMUTATIVE[k]).unwrap();
        let (z, w) = (el(&alg, &a), el(&alg, &b));
        let lhs = exp(&(&z + &w), DEFAULT_TOL);
        let rhs = &exp(&z, DEFAULT_TOL) * &exp(&w, DEFAULT_TOL);
        prop_assert!(lhs.distance(&rhs) <= 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn exp_splits_into_cosh_and_sinh(k in 0..COMMUTATIVE.len(), a in coords()) {
        let alg = preset(COMMUTATIVE[k]).unwrap();
        let z = el(&alg, &a);
        let e = exp(&z, DEFAULT_TOL);
        let parts = &cosh(&z, DEFAULT_TOL) + &sinh(&z, DEFAULT_TOL);
        prop_assert!(e.distance(&parts) <= 1e-12 * (1.0 + e.norm()));
    }

    #[test]
    fn derivative_relations(k in 0..COMMUTATIVE.len(), a in coords()) {
        let alg = preset(COMMUTATIVE[k]).unwrap();
        let z = el(&alg, &a);
        let h = 1e-5;
        let step = Element::one(&alg).scale(h);
        let fd = |f: fn(&Element, f64) -> Element| {
            (&f(&(&z + &step), DEFAULT_TOL) - &f(&(&z - &step), DEFAULT_TOL)).scale(0.5 / h)
        };
        let s = sinh(&z, DEFAULT_TOL);
        prop_assert!(fd(cosh).distance(&s) <= 1e-6 * (1.0 + s.norm()));
        let c = cos(&z, DEFAULT_TOL);
        prop_assert!(fd(sin).distance(&c) <= 1e-6 * (1.0 + c.norm()));
    }

    #[test]
    fn n_pythagorean_identity(k in 0..13usize, a in prop::collection::vec(-1.0f64..1.0, 5)) {
        let name = &pythagorean_algebras()[k];
        let g = GeneratedAlgebra::from_algebra(&preset(name).unwrap()).unwrap();
        let z = el(g.algebra(), &a);
        let p = pythagorean(&g, &z).unwrap();
        prop_assert!(p.residual < 1e-8, "{}: residual {}", name, p.residual);
    }

    #[test]
    fn columns_of_exp_differentiate_cyclically(n in 2usize..=5, family in 0..3usize, t in -2.0f64..2.0) {
        let name = format!("{}:{n}", ["H_N", "C_N", "Gamma_N"][family]);
        let g = GeneratedAlgebra::from_algebra(&preset(&name).unwrap()).unwrap();
        let e = g.generator();
        let rep = |t: f64| exp(&e.scale(t), DEFAULT_TOL).regular_rep();
        let h = 1e-5;
        let d = (rep(t + h) - rep(t - h)) / (2.0 * h);
        let m = rep(t);
        for p in 0..n {
            let expected = if p + 1 < n { m.column(p + 1).into_owned() } else { m.column(0) * g.power_value() };
            prop_assert!((d.column(p) - expected).norm() < 1e-6, "{} column {}", name, p);
        }
    }
}

#[test]
fn special_functions_reconstruct_exp() {
    let grid: Vec<f64> = (0..=200).map(|k| -2.0 + 0.02 * k as f64).collect();
    for name in ["complex", "hyperbolic", "dual", "H_N:3", "C_N:4", "Gamma_N:5", "H_N:6"] {
        let g = GeneratedAlgebra::from_algebra(&preset(name).unwrap()).unwrap();
        let table = special_functions(&g, &grid).unwrap();
        assert!(table.reconstruction_residual < 1e-10, "{name}: {}", table.reconstruction_residual);
    }
}
