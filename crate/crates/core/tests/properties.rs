use num_bigint::BigInt;
use proptest::prelude::*;

use wordrep::oracle::{act, canonical_representative, canonicalize, CircledPartition, SymmetryOp};
use wordrep::series::{Caps, Degree};
use wordrep::{GridShape, Rational, TruncatedSeries};

const CAPS: Caps = Caps { x: 1, y: 2, z: 3 };

fn arb_series(zero_constant: bool) -> impl Strategy<Value = TruncatedSeries> {
    let len = CAPS.degrees().count();
    prop::collection::vec((-6i64..=6, 1i64..=4), len).prop_map(move |pairs| {
        let terms = CAPS.degrees().zip(pairs).map(|(d, (num, den))| {
            let q = if zero_constant && d.total() == 0 {
                Rational::from_integer(BigInt::from(0))
            } else {
                Rational::new(BigInt::from(num), BigInt::from(den))
            };
            (d, q)
        });
        TruncatedSeries::build(CAPS, terms).unwrap()
    })
}

fn arb_labels() -> impl Strategy<Value = (GridShape, Vec<u8>, u64)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(m, n)| {
        let cells = m * n;
        (
            Just(GridShape::new(m, n).unwrap()),
            prop::collection::vec(0u8..cells as u8, cells),
            any::<u64>(),
        )
    })
}

/// Turns arbitrary labels and a circle mask into a valid circled partition by
/// keeping at most the first masked cell of each block circled.
fn circled(shape: GridShape, raw: &[u8], mask: u64) -> CircledPartition {
    let labels = canonicalize(raw);
    let mut seen = vec![false; shape.cells()];
    let mut circles = Vec::new();
    for (cell, &b) in labels.iter().enumerate() {
        if mask >> cell & 1 == 1 && !seen[b as usize] {
            seen[b as usize] = true;
            circles.push(cell);
        }
    }
    CircledPartition::new(shape, labels, circles).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_of_negation_is_inverse(f in arb_series(true)) {
        let product = &f.exp().unwrap() * &(-&f).exp().unwrap();
        prop_assert_eq!(product, TruncatedSeries::one(CAPS));
    }

    #[test]
    fn exp_is_a_homomorphism(f in arb_series(true), g in arb_series(true)) {
        let lhs = (&f + &g).exp().unwrap();
        let rhs = &f.exp().unwrap() * &g.exp().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_of_exp(f in arb_series(true)) {
        let g = f.exp().unwrap();
        prop_assert_eq!(g.derivative_z(), &f.derivative_z() * &g);
    }

    #[test]
    fn multiplication_commutes_and_distributes(
        f in arb_series(false),
        g in arb_series(false),
        h in arb_series(false),
    ) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn nonzero_constant_term_is_refused(f in arb_series(false)) {
        let shifted = &f + &TruncatedSeries::one(CAPS);
        let c = shifted.coeff(Degree::new(0, 0, 0)).unwrap().clone();
        prop_assert_eq!(shifted.exp().is_err(), c != Rational::from_integer(BigInt::from(0)));
    }

    #[test]
    fn canonicalize_is_idempotent((_, raw, _) in arb_labels()) {
        let once = canonicalize(&raw);
        prop_assert_eq!(canonicalize(&once), once.clone());
        prop_assert!(once.first().is_none_or(|&b| b == 0));
    }

    #[test]
    fn action_is_a_group_action((shape, raw, mask) in arb_labels()) {
        let a = circled(shape, &raw, mask);
        prop_assert_eq!(act(SymmetryOp::Identity, &a), a.clone());
        for g in SymmetryOp::ALL {
            prop_assert_eq!(act(g, &act(g, &a)), a.clone());
            for h in SymmetryOp::ALL {
                prop_assert_eq!(act(g, &act(h, &a)), act(g.compose(h), &a));
            }
        }
        let circles = a.circled_cells().len();
        prop_assert_eq!(act(SymmetryOp::Rotate180, &a).circled_cells().len(), circles);
    }

    #[test]
    fn representative_is_constant_on_orbits((shape, raw, mask) in arb_labels()) {
        let a = circled(shape, &raw, mask);
        let rep = canonical_representative(&a);
        for g in SymmetryOp::ALL {
            prop_assert_eq!(canonical_representative(&act(g, &a)), rep.clone());
        }
        prop_assert!(rep <= a);
    }
}
