use nlfem::bspline::{bspline_eval, SplineDegree};
use nlfem::gentensor::{integrand_fk, GeneratingTensor};
use nlfem::solver::GridSpec;
use nlfem::build_operator;
use proptest::prelude::*;

proptest! {
    #[test]
    fn cubic_is_symmetric_and_bounded(t in -3.0f64..7.0) {
        let v = bspline_eval(SplineDegree::CUBIC, t);
        prop_assert!((0.0..=2.0 / 3.0 + 1e-15).contains(&v));
        prop_assert!((v - bspline_eval(SplineDegree::CUBIC, 4.0 - t)).abs() < 1e-14);
    }

    #[test]
    fn integrand_is_even_in_sigma(k0 in 0usize..4, k1 in 0usize..4, s0 in -5.0f64..5.0, s1 in -5.0f64..5.0) {
        let a = integrand_fk(&[k0, k1], &[s0, s1]);
        let b = integrand_fk(&[k0, k1], &[-s0, -s1]);
        prop_assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn operator_is_linear(
        entries in prop::collection::vec(-1.0f64..1.0, 9),
        u in prop::collection::vec(-1.0f64..1.0, 30),
        v in prop::collection::vec(-1.0f64..1.0, 30),
        a in -3.0f64..3.0,
    ) {
        let g = GeneratingTensor::from_entries(2, 6, 3, 1.0, None, entries).unwrap();
        let op = build_operator(&g, &[6, 5]).unwrap();
        let comb: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + y).collect();
        let lhs = op.matvec(&comb).unwrap();
        let (au, av) = (op.matvec(&u).unwrap(), op.matvec(&v).unwrap());
        for i in 0..30 {
            prop_assert!((lhs[i] - (a * au[i] + av[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_indices_roundtrip(n0 in 1usize..9, l in 0usize..512) {
        let g = GridSpec::from_counts(&[0.0; 3], &[1.0; 3], vec![n0; 3], 0.1).unwrap();
        let l = l % g.total();
        prop_assert_eq!(g.linear(&g.index(l)), l);
    }
}
