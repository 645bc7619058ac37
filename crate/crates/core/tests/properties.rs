use antiwick::basis::TimeGrid;
use antiwick::chaos::{stochastic_exponential, ChaosVector};
use antiwick::products::{anti_wick_gamma, anti_wick_series};
use antiwick::sampling::{random_chaos, random_l2, stream_rng};
use proptest::prelude::*;

const M: usize = 4;
const N: usize = 10;

fn chaos(seed: u64, stream: u64, degree: usize) -> ChaosVector {
    random_chaos(&mut stream_rng(seed, stream), M, N, degree, 6).unwrap()
}

fn close(a: &ChaosVector, b: &ChaosVector) -> bool {
    a.residual(b).unwrap() <= 1e-12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_commute(seed in any::<u64>()) {
        let (x, y) = (chaos(seed, 0, 5), chaos(seed, 1, 5));
        prop_assert!(close(&x.pointwise_product(&y).unwrap(), &y.pointwise_product(&x).unwrap()));
        prop_assert!(close(&x.wick_product(&y).unwrap(), &y.wick_product(&x).unwrap()));
        prop_assert!(close(&anti_wick_series(&x, &y).unwrap(), &anti_wick_series(&y, &x).unwrap()));
    }

    #[test]
    fn wick_is_associative(seed in any::<u64>()) {
        let (x, y, z) = (chaos(seed, 0, 3), chaos(seed, 1, 3), chaos(seed, 2, 3));
        let l = x.wick_product(&y).unwrap().wick_product(&z).unwrap();
        let r = x.wick_product(&y.wick_product(&z).unwrap()).unwrap();
        prop_assert!(close(&l, &r));
    }

    #[test]
    fn pointwise_product_evaluates_pointwise(seed in any::<u64>(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let (x, y) = (chaos(seed, 0, 5), chaos(seed, 1, 5));
        let xi = [a, b, -a, 0.5 * b];
        let p = x.pointwise_product(&y).unwrap();
        let direct = x.eval(&xi).unwrap() * y.eval(&xi).unwrap();
        prop_assert!((p.eval(&xi).unwrap() - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn expectation_of_product_is_inner_product(seed in any::<u64>()) {
        let (x, y) = (chaos(seed, 0, 5), chaos(seed, 1, 5));
        let inner: f64 = x.iter().map(|(a, c)| a.factorial() * c * y.coeff(a)).sum();
        let e = x.pointwise_product(&y).unwrap().expectation();
        prop_assert!((e - inner).abs() <= 1e-10 * (1.0 + inner.abs()));
    }

    #[test]
    fn second_quantization_is_multiplicative(seed in any::<u64>(), a in 0.2..2.0f64, b in 0.2..2.0f64) {
        let x = chaos(seed, 0, N);
        let two_step = x.gamma_scale(a).unwrap().gamma_scale(b).unwrap();
        prop_assert!(close(&two_step, &x.gamma_scale(a * b).unwrap()));
    }

    #[test]
    fn second_quantization_scales_exponentials(seed in any::<u64>(), lambda in 0.2..2.0f64) {
        let grid = TimeGrid::uniform(1.0, M).unwrap();
        let f = random_l2(&mut stream_rng(seed, 3), grid, 0.8);
        let lhs = stochastic_exponential(&f, N).unwrap().gamma_scale(lambda).unwrap();
        let rhs = stochastic_exponential(&f.scale(lambda), N).unwrap();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn anti_wick_routes_agree(seed in any::<u64>()) {
        let (x, y) = (chaos(seed, 0, 5), chaos(seed, 1, 5));
        prop_assert!(anti_wick_series(&x, &y).unwrap().residual(&anti_wick_gamma(&x, &y).unwrap()).unwrap() <= 1e-9);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let x = chaos(seed, 0, N);
        let text = serde_json::to_string(&x).unwrap();
        let back: ChaosVector = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn inner_product_is_bilinear(seed in any::<u64>(), c in -3.0..3.0f64) {
        let grid = TimeGrid::uniform(1.0, M).unwrap();
        let mut rng = stream_rng(seed, 4);
        let (f, g, h) = (random_l2(&mut rng, grid, 1.0), random_l2(&mut rng, grid, 1.0), random_l2(&mut rng, grid, 1.0));
        let lhs = f.scale(c).add(&g).unwrap().inner_product(&h).unwrap();
        let rhs = c * f.inner_product(&h).unwrap() + g.inner_product(&h).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }
}
