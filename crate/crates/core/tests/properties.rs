use std::cmp::Ordering;

use kacv_core::ffield::{FiniteField, FqMatrix};
use kacv_core::hn::{hn_filtration, king_slope_equivalence_check, slope, total_order_cmp};
use kacv_core::moment::{moment_fiber_count, MomentEquation};
use kacv_core::poly::{integral_coefficients, lagrange_interpolate};
use kacv_core::quiver::{find_generic_weight, weight_dot, DimVector, Quiver, WeightVector};
use kacv_core::rep::{subrepresentations, EnumConfig, Representation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn quivers() -> Vec<Quiver> {
    vec![
        Quiver::new(2, &[(0, 1)]).unwrap(),
        Quiver::new(2, &[(0, 1), (0, 1)]).unwrap(),
        Quiver::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap(),
        Quiver::new(3, &[(0, 1), (2, 1)]).unwrap(),
    ]
}

/// Every `b` with `0 <= b <= a`, excluding `0` and `a`.
fn proper(a: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &n in a {
        out = out.into_iter().flat_map(|p| (0..=n).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out.retain(|b| b.iter().any(|&x| x > 0) && b.as_slice() != a);
    out
}

fn dims_strategy() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=3, 2..=4).prop_filter("nonzero and indivisible", |v| {
        let g = v.iter().fold(0, |g, &x| num_integer::gcd(g, x));
        g == 1
    })
}

/// A representation of the Kronecker quiver with dimensions at most `(2, 2)`.
fn kronecker_rep() -> impl Strategy<Value = (u32, Vec<u32>, Vec<u32>)> {
    (1u32..=2, 1u32..=2, prop::sample::select(vec![2u32, 3])).prop_flat_map(|(m, n, q)| {
        let cells = (m * n) as usize;
        (Just(q), Just(vec![m, n]), prop::collection::vec(0..q, 2 * cells))
    })
}

fn build<'a>(quiver: &'a Quiver, f: &'a FiniteField, dims: &[u32], data: &[u32]) -> Representation<'a> {
    let cells = (dims[0] * dims[1]) as usize;
    let maps = (0..2)
        .map(|k| FqMatrix::from_data(dims[1] as usize, dims[0] as usize, data[k * cells..(k + 1) * cells].to_vec()))
        .collect();
    Representation::new(quiver, f, DimVector::new(dims.to_vec()), maps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fibers_over_nonzero_trace_are_empty(
        which in 0usize..4,
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        raw_dims in prop::collection::vec(0u32..=2, 3),
        raw_target in prop::collection::vec(0u32..5, 3),
    ) {
        let quiver = &quivers()[which];
        let n = quiver.vertex_count();
        let dims = DimVector::new(raw_dims[..n].to_vec());
        prop_assume!(!dims.is_zero());
        let f = FiniteField::of_order(q).unwrap();
        let target: Vec<u32> = raw_target[..n].iter().map(|&t| t % q).collect();
        let eq = MomentEquation::from_residues(quiver, dims, target).unwrap();
        prop_assume!(!eq.is_trace_zero(&f));
        let count = moment_fiber_count(&eq, &f, &EnumConfig::default()).unwrap();
        prop_assert_eq!(count, num_bigint::BigUint::from(0u32));
    }

    #[test]
    fn generic_weight_is_generic(a in dims_strategy()) {
        let dims = DimVector::new(a.clone());
        let lambda = find_generic_weight(&dims).unwrap();
        let dot = |b: &[u32]| -> i64 { lambda.entries().iter().zip(b).map(|(&l, &x)| l * x as i64).sum() };
        prop_assert_eq!(dot(&a), 0);
        for b in proper(&a) {
            prop_assert_ne!(dot(&b), 0, "vanishes on {:?}", b);
        }
    }

    #[test]
    fn total_order_is_compatible(
        a in prop::collection::vec(0u32..=3, 2),
        b in prop::collection::vec(0u32..=3, 2),
        c in prop::collection::vec(0u32..=3, 2),
        theta in prop::collection::vec(-3i64..=3, 2),
    ) {
        let (a, b, c) = (DimVector::new(a), DimVector::new(b), DimVector::new(c));
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let theta = WeightVector::new(theta);
        let ab = total_order_cmp(&theta, &a, &b).unwrap();
        prop_assert_eq!(ab, total_order_cmp(&theta, &b, &a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        let (sa, sb) = (slope(&theta, &a).unwrap(), slope(&theta, &b).unwrap());
        if sa != sb {
            prop_assert_eq!(ab, sa.cmp(&sb));
        }
        let bc = total_order_cmp(&theta, &b, &c).unwrap();
        if ab == bc {
            prop_assert_eq!(total_order_cmp(&theta, &a, &c).unwrap(), ab);
        }
    }

    #[test]
    fn hn_filtration_properties(
        (q, dims, data) in kronecker_rep(),
        theta in prop::collection::vec(-3i64..=3, 2),
    ) {
        let quiver = Quiver::new(2, &[(0, 1), (0, 1)]).unwrap();
        let f = FiniteField::of_order(q).unwrap();
        let v = build(&quiver, &f, &dims, &data);
        let theta = WeightVector::new(theta);
        let cfg = EnumConfig::default();
        let filt = hn_filtration(&v, &theta, &cfg).unwrap();
        let steps: Vec<DimVector> = filt.steps.iter().map(|s| s.dims()).collect();
        prop_assert_eq!(steps.last().unwrap(), v.dims());
        let mut prev = DimVector::zero(2);
        for (i, (step, part)) in steps.iter().zip(&filt.hn_type.0).enumerate() {
            prop_assert_eq!(&step.checked_sub(&prev).unwrap(), part);
            prop_assert_eq!(filt.slopes[i], slope(&theta, part).unwrap());
            if i > 0 {
                prop_assert!(filt.steps[i].contains(&filt.steps[i - 1], &f));
                prop_assert!(filt.slopes[i] < filt.slopes[i - 1]);
            }
            prev = step.clone();
        }
        // the first step has maximal slope among all nonzero subrepresentations
        for w in subrepresentations(&v, &cfg).unwrap() {
            let wd = w.dims();
            if !wd.is_zero() {
                prop_assert!(slope(&theta, &wd).unwrap() <= filt.slopes[0]);
            }
        }
    }

    #[test]
    fn king_matches_slope_for_balanced_weights(
        (q, dims, data) in kronecker_rep(),
        t in -3i64..=3,
    ) {
        let quiver = Quiver::new(2, &[(0, 1), (0, 1)]).unwrap();
        let f = FiniteField::of_order(q).unwrap();
        let v = build(&quiver, &f, &dims, &data);
        // λ = t·(n, -m) pairs to zero with (m, n)
        let lambda = WeightVector::new(vec![t * dims[1] as i64, -t * dims[0] as i64]);
        prop_assert_eq!(weight_dot(&lambda, v.dims()).unwrap(), 0);
        prop_assert!(king_slope_equivalence_check(&v, &lambda, &EnumConfig::default()).unwrap());
    }

    #[test]
    fn interpolation_round_trip(
        coeffs in prop::collection::vec(-50i64..=50, 1..6),
        nodes in prop::collection::btree_set(-20i64..=20, 6..9),
    ) {
        let eval = |x: i64| -> BigInt {
            coeffs.iter().rev().fold(BigInt::from(0), |acc, &c| acc * x + c)
        };
        let points: Vec<(BigInt, BigInt)> = nodes.iter().map(|&x| (BigInt::from(x), eval(x))).collect();
        let got = integral_coefficients(&lagrange_interpolate(&points).unwrap()).unwrap();
        let mut expected: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        expected.resize(points.len(), BigInt::from(0));
        prop_assert_eq!(got, expected);
    }
}
