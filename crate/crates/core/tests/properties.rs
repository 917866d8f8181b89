use proptest::prelude::*;
use quatspec::random::{random_qmatrix, trial_rng};
use quatspec::resolvent::{residual_as_identity, residual_resolvent_eq};
use quatspec::{cassini_u, spherical_power, triangle, QMatrix, Quaternion};

fn quat(scale: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-scale..scale).prop_map(Quaternion::from_array)
}

fn unit_imag() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-2)
        .prop_map(|[x, y, z]| {
            let n = (x * x + y * y + z * z).sqrt();
            Quaternion::new(0.0, x / n, y / n, z / n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn product_is_associative_and_norm_multiplicative(a in quat(3.0), b in quat(3.0), c in quat(3.0)) {
        let lhs = (a * b) * c;
        let rhs = a * (b * c);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() <= 1e-12 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn pencil_depends_only_on_spheres(q in quat(2.0), r in -2.0f64..2.0, s in -2.0f64..2.0,
                                      j1 in unit_imag(), j2 in unit_imag()) {
        let p1 = Quaternion::on_slice(r, s, j1);
        let p2 = Quaternion::on_slice(r, s, j2);
        prop_assert!((triangle(q, p1).norm() - triangle(q, p2).norm()).abs() <= 1e-12 * (1.0 + triangle(q, p1).norm()));
        prop_assert!((cassini_u(p1, q) - cassini_u(q, p1)).abs() <= 1e-12 * (1.0 + cassini_u(p1, q)));
        prop_assert!(triangle(p2, p1).norm() <= 1e-14 * (1.0 + r * r + s * s));
        let flipped = Quaternion::new(p1.w, -p1.z, p1.x, -p1.y);
        prop_assert_eq!(cassini_u(p1, flipped), 0.0);
        prop_assert_eq!(cassini_u(p1, p1.conj()), 0.0);
    }

    #[test]
    fn even_spherical_powers_are_pencil_powers(q0 in quat(1.0), q in quat(1.0), k in 0u32..6) {
        let h = triangle(q0, q);
        let e = spherical_power(q0, 2 * k, q);
        prop_assert!((e - h.powi(k)).norm() <= 1e-12 * (1.0 + e.norm()));
        let o = spherical_power(q0, 2 * k + 1, q);
        prop_assert!((o - (q - q0) * h.powi(k)).norm() <= 1e-12 * (1.0 + o.norm()));
    }

    #[test]
    fn chi_is_multiplicative(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = trial_rng(seed, 0);
        let a = random_qmatrix(&mut rng, n);
        let b = random_qmatrix(&mut rng, n);
        let lhs = (&a * &b).chi().0;
        let rhs = a.chi().0 * b.chi().0;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + a.frobenius() * b.frobenius()));
    }

    #[test]
    fn resolvent_identities_hold(seed in any::<u64>(), n in 1usize..5, p in quat(3.0), q in quat(3.0)) {
        let a = random_qmatrix(&mut trial_rng(seed, 0), n);
        if let Ok(r) = residual_resolvent_eq(&a, p, q) {
            prop_assert!(r.relative() <= 1e-10, "{:?}", r);
        }
        if let Ok(r) = residual_as_identity(&a, p) {
            prop_assert!(r.relative() <= 1e-10, "{:?}", r);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let a = random_qmatrix(&mut trial_rng(seed, 1), n);
        let text = serde_json::to_string(&a).unwrap();
        let back: QMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(a, back);
    }
}
