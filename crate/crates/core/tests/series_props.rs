use acalc_core::series::{cauchy_product, sum, SumStatus, TermStream, DEFAULT_WINDOW};
use acalc_core::{preset, Algebra, Element};
use proptest::prelude::*;

const NAMES: [&str; 6] = ["complex", "hyperbolic", "dual", "H_N:3", "C_N:3", "direct_product:2"];

fn elem(alg: &Algebra, raw: &[f64]) -> Element {
    Element::new(alg, raw[..alg.dim()].to_vec()).unwrap()
}

/// `c q^n + d (n+1) (-r)^n`, absolutely convergent for `q, r < 1`.
fn stream(alg: &Algebra, c: &[f64], d: &[f64], q: f64, r: f64) -> TermStream {
    let (c, d) = (elem(alg, c), elem(alg, d));
    TermStream::new(alg, move |n| {
        &c.scale(q.powi(n as i32)) + &d.scale((n + 1) as f64 * (-r).powi(n as i32))
    })
}

fn close(a: &Element, b: &Element, rel: f64) -> bool {
    a.distance(b) <= rel * (1.0 + a.norm().max(b.norm()))
}

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 3)
}

fn rates() -> impl Strategy<Value = (f64, f64)> {
    (-0.8f64..0.8, 0.0f64..0.7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn summation_is_linear(k in 0..NAMES.len(), c in coords(), d in coords(), e in coords(), (q, r) in rates(), (q2, r2) in rates()) {
        let alg = preset(NAMES[k]).unwrap();
        let a = stream(&alg, &c, &d, q, r);
        let b = stream(&alg, &d, &e, q2, r2);
        let scale = elem(&alg, &e);
        let sa = sum(&a, 1e-14, DEFAULT_WINDOW).unwrap();
        let sb = sum(&b, 1e-14, DEFAULT_WINDOW).unwrap();
        prop_assert!(sa.converged() && sb.converged());

        let scaled = sum(&a.left_scaled(&scale).unwrap(), 1e-14, DEFAULT_WINDOW).unwrap();
        prop_assert!(scaled.converged());
        prop_assert!(close(&scaled.value, &(&scale * &sa.value), 1e-10));

        let both = sum(&a.plus(&b).unwrap(), 1e-14, DEFAULT_WINDOW).unwrap();
        prop_assert!(both.converged());
        prop_assert!(close(&both.value, &(&sa.value + &sb.value), 1e-10));
    }

    #[test]
    fn absolute_convergence_implies_convergence(k in 0..NAMES.len(), u in coords(), shrink in 0.05f64..0.9) {
        let alg = preset(NAMES[k]).unwrap();
        let mut z = elem(&alg, &u);
        prop_assume!(z.norm() > 0.0);
        z = z.scale(shrink / (alg.m_empirical() * z.norm()));
        let base = z.clone();
        let s = TermStream::new(&alg, move |n| base.pow(n));
        let absolute: f64 = (0..=2000).map(|n| z.pow(n).norm()).sum();
        prop_assert!(absolute.is_finite());
        prop_assert_eq!(sum(&s, 1e-12, DEFAULT_WINDOW).unwrap().status, SumStatus::Converged);
    }

    #[test]
    fn limit_of_products_is_product_of_limits(k in 0..NAMES.len(), s in coords(), t in coords(), ds in coords(), dt in coords(), q in 0.1f64..0.8) {
        let alg = preset(NAMES[k]).unwrap();
        let (s, t, ds, dt) = (elem(&alg, &s), elem(&alg, &t), elem(&alg, &ds), elem(&alg, &dt));
        let target = &s * &t;
        let m = alg.m_empirical();
        let mut prev = f64::INFINITY;
        for n in [0i32, 10, 40, 80, 200] {
            let sn = &s + &ds.scale(q.powi(n));
            let tn = &t + &dt.scale(q.powi(n));
            let err = (&sn * &tn).distance(&target);
            let bound = m * (sn.distance(&s) * tn.norm() + s.norm() * tn.distance(&t));
            prop_assert!(err <= bound * (1.0 + 1e-9) + 1e-13);
            prop_assert!(err <= prev + 1e-13);
            prev = err;
        }
        prop_assert!(prev <= 1e-10 * (1.0 + target.norm()));
    }

    #[test]
    fn cauchy_product_is_symmetric_and_multiplies_sums(k in 0..NAMES.len(), c in coords(), d in coords(), e in coords(), (q, r) in rates(), (q2, r2) in rates()) {
        let alg = preset(NAMES[k]).unwrap();
        let a = stream(&alg, &c, &d, q, r).with_max_terms(3000);
        let b = stream(&alg, &e, &c, q2, r2).with_max_terms(3000);
        let ab = sum(&cauchy_product(&a, &b).unwrap(), 1e-13, DEFAULT_WINDOW).unwrap();
        let ba = sum(&cauchy_product(&b, &a).unwrap(), 1e-13, DEFAULT_WINDOW).unwrap();
        prop_assert!(ab.converged() && ba.converged());
        prop_assert!(close(&ab.value, &ba.value, 1e-10));

        let product = &sum(&a, 1e-14, DEFAULT_WINDOW).unwrap().value * &sum(&b, 1e-14, DEFAULT_WINDOW).unwrap().value;
        prop_assert!(close(&ab.value, &product, 1e-9));
    }
}
