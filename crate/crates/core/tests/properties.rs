use approx::assert_relative_eq;
use fblab::bessel::{compute_zeros, Order, ZeroTable};
use fblab::cli::parse_config_file;
use fblab::expansion::CoefficientVector;
use fblab::operators::heat::{heat_kernel, KernelConfig};
use fblab::operators::potential::potential_apply;
use fblab::operators::riesz::{riesz_apply, RieszVariant};
use fblab::systems::{Setting, SystemSpec};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn zeros_interlace(nu in -0.99f64..6.0) {
        let a = compute_zeros(Order::new(nu).unwrap(), 30).unwrap();
        let b = compute_zeros(Order::new(nu + 1.0).unwrap(), 30).unwrap();
        for n in 0..29 {
            prop_assert!(a.zeros()[n] < b.zeros()[n]);
            prop_assert!(b.zeros()[n] < a.zeros()[n + 1]);
        }
    }

    #[test]
    fn zero_table_json_round_trip(nu in -0.99f64..4.0, count in 1usize..40) {
        let t = compute_zeros(Order::new(nu).unwrap(), count).unwrap();
        let back = ZeroTable::from_json(&t.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.zeros(), t.zeros());
    }

    #[test]
    fn coefficient_json_round_trip(nu in -0.9f64..3.0, c in prop::collection::vec(-5.0f64..5.0, 1..20)) {
        let spec = SystemSpec::new(Setting::Natural, nu, 24).unwrap();
        let v = CoefficientVector::new(spec, c).unwrap();
        let back = CoefficientVector::from_json(&v.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.coeffs(), v.coeffs());
        assert_relative_eq!(back.partial_sum(0.37).unwrap(), v.partial_sum(0.37).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn heat_kernel_is_symmetric(nu in -0.9f64..2.0, t in 0.01f64..1.0, x in 0.01f64..0.99, y in 0.01f64..0.99) {
        let cfg = KernelConfig::default();
        let spec = SystemSpec::new(Setting::Lebesgue, nu, cfg.capacity_for(nu)).unwrap();
        let a = heat_kernel(&spec, &cfg, t, x, y).unwrap();
        let b = heat_kernel(&spec, &cfg, t, y, x).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-12, max_relative = 1e-12);
    }

    #[test]
    fn potential_then_fractional_power_is_identity(
        nu in -0.9f64..3.0,
        sigma in 0.1f64..2.0,
        c in prop::collection::vec(-1.0f64..1.0, 1..16),
    ) {
        let spec = SystemSpec::new(Setting::Essential, nu, 16).unwrap();
        let v = CoefficientVector::new(spec, c).unwrap();
        let back = potential_apply(&potential_apply(&v, sigma).unwrap(), -sigma).unwrap();
        for (a, b) in back.coeffs().iter().zip(v.coeffs()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-13, max_relative = 1e-10);
        }
    }

    #[test]
    fn riesz_is_l2_contractive(nu in -0.9f64..3.0, c in prop::collection::vec(-1.0f64..1.0, 2..16)) {
        let spec = SystemSpec::new(Setting::Essential, nu, 16).unwrap();
        let v = CoefficientVector::new(spec, c).unwrap();
        let image = riesz_apply(&v, RieszVariant::Standard).unwrap();
        prop_assert!(image.l2_squared().unwrap() <= v.l2_squared() * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn config_file_round_trip(nu in -0.9f64..5.0, grid in 2usize..500, seed in any::<u64>()) {
        let text = format!("# run\nnu = {nu}\ngrid={grid}\n\nseed = {seed}  # trailing\nt_min = 0.001\n");
        let map = parse_config_file(&text).unwrap();
        prop_assert_eq!(map["nu"].parse::<f64>().unwrap(), nu);
        prop_assert_eq!(map["grid"].parse::<usize>().unwrap(), grid);
        prop_assert_eq!(map["seed"].parse::<u64>().unwrap(), seed);
        prop_assert!(map.contains_key("t-min"));
    }
}
