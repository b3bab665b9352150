use mopsym_core::*;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=9, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

fn poly_strategy(max_len: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(small_rational(), 0..max_len).prop_map(Poly::from_coeffs)
}

/// Banded matrix with random in-band entries.
fn banded(n: usize, lower: usize, upper: usize) -> impl Strategy<Value = QBanded> {
    prop::collection::vec(small_rational(), n * n).prop_map(move |vals| {
        let mut m = BandedMatrix::zeros(n, lower, upper);
        for i in 0..n {
            let (lo, hi) = m.row_span(i);
            for j in lo..hi {
                m.set(i, j, vals[i * n + j].clone());
            }
        }
        m
    })
}

fn dense(b: &QBanded) -> QMat {
    Mat::from_rows(b.to_dense())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn banded_product_matches_dense_and_stays_banded(
        (a, b) in (2usize..7, 0usize..3, 0usize..3, 0usize..3, 0usize..3)
            .prop_flat_map(|(n, la, ua, lb, ub)| (banded(n, la, ua), banded(n, lb, ub)))
    ) {
        let p = banded_mul(&a, &b).unwrap();
        prop_assert_eq!(dense(&p), &dense(&a) * &dense(&b));
        prop_assert!(p.lower_bandwidth() <= a.lower_bandwidth() + b.lower_bandwidth());
        prop_assert!(p.upper_bandwidth() <= a.upper_bandwidth() + b.upper_bandwidth());
    }

    #[test]
    fn banded_product_is_associative(
        (a, b, c) in (2usize..6).prop_flat_map(|n| (banded(n, 1, 1), banded(n, 2, 0), banded(n, 0, 2)))
    ) {
        let left = banded_mul(&banded_mul(&a, &b).unwrap(), &c).unwrap();
        let right = banded_mul(&a, &banded_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(dense(&left), dense(&right));
    }

    #[test]
    fn compose_power_composes_and_evaluates(p in poly_strategy(6), a in 1usize..4, b in 1usize..4, x in small_rational()) {
        prop_assert_eq!(compose_power(&compose_power(&p, a), b), compose_power(&p, a * b));
        let xa = (0..a).fold(int(1), |acc, _| acc * x.clone());
        prop_assert_eq!(compose_power(&p, a).eval(&x), p.eval(&xa));
    }

    #[test]
    fn polynomial_ring_laws(p in poly_strategy(5), q in poly_strategy(5), r in poly_strategy(5)) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&(&p - &q) + &q, p.clone());
        let mut acc = p.clone();
        acc.add_scaled(&rat(-3, 2), &q);
        prop_assert_eq!(acc, &p - &q.scale(&rat(3, 2)));
    }

    #[test]
    fn rational_text_round_trip(r in small_rational(), big in any::<i64>()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r.clone()));
        let scaled = r * int(big);
        prop_assert_eq!(parse_rational(&format_rational(&scaled)), Some(scaled));
    }

    #[test]
    fn symmetric_families_interleave_round_trip(
        (d, gamma) in (1usize..4).prop_flat_map(|d| (Just(d), prop::collection::vec(small_rational(), 4 * (d + 1))))
    ) {
        let sr = SymmetricRecurrence::new(d, gamma).unwrap();
        let s = generate_symmetric(&sr, 3 * (d + 1) - 1).unwrap();
        prop_assert!(is_d_symmetric(&s, d).is_symmetric());
        let families = deinterleave(&s, d).unwrap();
        prop_assert_eq!(families.len(), d + 1);
        prop_assert_eq!(interleave(&families, d).unwrap(), s);
    }

    #[test]
    fn split_factors_multiply_back_to_l(
        (d, rs, free) in (1usize..4).prop_flat_map(|d| {
            let n = 7;
            (
                Just(d),
                (prop::collection::vec(nonzero_rational(), n), prop::collection::vec(prop::collection::vec(nonzero_rational(), n), d))
                    .prop_map(move |(beta, gamma)| RecurrenceSystem { d, beta, gamma }),
                prop::collection::vec(nonzero_rational(), d * (d - 1) / 2),
            )
        })
    ) {
        let j = to_jacobi(&rs, 7).unwrap();
        let (l, u) = match lu_hessenberg(&j, d) {
            Ok(f) => f,
            Err(e) => {
                prop_assume!(!e.is_degeneracy());
                return Err(TestCaseError::fail(e.to_string()));
            }
        };
        prop_assert_eq!(dense(&banded_mul(&l, &u).unwrap()), dense(&j));
        let factors = match split_bidiagonals(&l, d, &free) {
            Ok(f) => f,
            Err(e) => {
                prop_assume!(!e.is_degeneracy());
                return Err(TestCaseError::fail(e.to_string()));
            }
        };
        prop_assert_eq!(factors.len(), d);
        let product = factors[1..].iter().fold(factors[0].clone(), |acc, f| banded_mul(&acc, f).unwrap());
        prop_assert_eq!(dense(&product), dense(&l));
        for f in &factors {
            prop_assert!(f.lower_bandwidth() <= 1 && f.upper_bandwidth() == 0);
            prop_assert!(f.diagonal(0).iter().all(|v| v == &int(1)));
        }
    }

    #[test]
    fn desymmetrize_then_symmetrize_is_identity(
        (d, gamma) in (1usize..4).prop_flat_map(|d| (Just(d), prop::collection::vec(nonzero_rational(), (d + 1) * (8 + d + 1) + 1)))
    ) {
        let m = 8;
        let sr = SymmetricRecurrence::new(d, gamma).unwrap();
        let set = desymmetrize(&sr, m).unwrap();
        let rs = from_jacobi(&set.jacobi[0], d).unwrap();
        let back = symmetrize_direct(&rs, m, &set.factorization.free_params).unwrap();
        prop_assert_eq!(&back.sr.gamma[..], &sr.gamma[..(d + 1) * m + 1]);
        prop_assert_eq!(back.s, interleave(&set.families, d).unwrap());
    }
}
