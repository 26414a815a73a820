use std::collections::BTreeSet;

use mfq::catalog::Catalog;
use mfq::classical::standard_generators;
use mfq::fuchsian::{find_epimorphisms, kernel_genus, measure, Signature};
use mfq::group::{coset_action, enumerate_group, order_spectrum, EnumeratedGroup, GenSet, SpectrumMode};
use mfq::replay::{self, ReplayOptions};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn group(spec: &str) -> EnumeratedGroup {
    enumerate_group(&standard_generators(&spec.parse().unwrap()).unwrap(), 1_000_000).unwrap()
}

const GROUPS: [&str; 8] = ["psl(2,7)", "a(5)", "s(5)", "sl(2,3)", "q8", "z(12)", "psl(2,11)", "a(6)"];

fn triangle() -> impl Strategy<Value = Signature> {
    (2u32..12, 2u32..12, 2u32..12).prop_map(|(a, b, c)| Signature::new(0, vec![a, b, c]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn measure_is_multiplicative_under_preimage(gi in 0usize..GROUPS.len(), sig in triangle(), pick in any::<u32>()) {
        let g = group(GROUPS[gi]);
        let epis = find_epimorphisms(&sig, &g, true, true).unwrap();
        for e in &epis {
            let reps = &g.classes().reps;
            let x = reps[pick as usize % reps.len()];
            let h = GenSet::new("h", vec![g.element(x)]).unwrap();
            let (d, ok) = e.check_measure_multiplicativity(&h).unwrap();
            prop_assert!(ok);
            let pre = e.preimage_signature(&h).unwrap();
            let scaled = measure(&sig) * BigRational::from_integer(BigInt::from(d));
            prop_assert_eq!(measure(&pre), scaled);
        }
    }

    #[test]
    fn riemann_hurwitz_integrality(sig in triangle(), n in 1u64..2000) {
        if let Ok(g) = kernel_genus(&sig, n) {
            let lhs = BigRational::from_integer(BigInt::from(2 * g as i64 - 2));
            prop_assert_eq!(lhs, measure(&sig) * BigRational::from_integer(BigInt::from(n)));
        }
    }

    #[test]
    fn lagrange(gi in 0usize..GROUPS.len(), pick in any::<u32>()) {
        let g = group(GROUPS[gi]);
        let n = g.order();
        prop_assert!(g.element_orders().iter().all(|&o| n.is_multiple_of(o as u64)));
        let x = pick % g.len() as u32;
        let h = GenSet::new("h", vec![g.element(x)]).unwrap();
        let action = coset_action(&g, &h).unwrap();
        prop_assert_eq!(action.degree as u64 * g.element_orders()[x as usize] as u64, n);
    }

    #[test]
    fn signature_display_round_trips(genus in 0u32..4, periods in proptest::collection::vec(2u32..20, 0..9)) {
        let mut periods = periods;
        periods.sort_unstable();
        let s = Signature::new(genus, periods).unwrap();
        prop_assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
    }
}

#[test]
fn sampled_spectrum_is_subset_of_exact_for_twenty_seeds() {
    for spec in ["a(7)", "psu(3,3)", "psl(2,49)", "psl(3,4)"] {
        let g = group(spec);
        let exact: BTreeSet<u64> = g.spectrum().into_iter().collect();
        for seed in 0..20 {
            let s = order_spectrum(&g, SpectrumMode::Sampled { budget: 300, seed }).unwrap();
            assert!(!s.exact);
            assert!(s.orders.iter().all(|o| exact.contains(o)), "{spec} seed {seed}");
        }
    }
}

#[test]
fn reports_are_byte_identical() {
    let catalog = Catalog::default_catalog();
    let opts = ReplayOptions::default();
    let a = replay::replay_g3(&catalog, opts).unwrap();
    let b = replay::replay_g3(&catalog, opts).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
    let f = replay::frontier_g3(&catalog, opts).unwrap();
    assert_eq!(f.to_json(), replay::frontier_g3(&catalog, opts).unwrap().to_json());
}
