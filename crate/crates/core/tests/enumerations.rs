use std::time::Instant;

use mfq::classical::{classical_order, standard_generators, FamilySpec};
use mfq::group::{
    center_and_projective, enumerate_group, find_subgroup_by_type, is_simple, GroupError, SubgroupSearch, TargetSpec,
    DEFAULT_ENUMERATION_CAP,
};

fn spec(s: &str) -> FamilySpec {
    s.parse().unwrap()
}

#[test]
fn sp6_2_full_enumeration_and_spectrum() {
    let t = Instant::now();
    let g = enumerate_group(&standard_generators(&spec("sp(6,2)")).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(g.order(), 1_451_520);
    assert_eq!(g.spectrum(), vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15]);
    let info = center_and_projective(&g).unwrap();
    assert_eq!(info.center.len(), 1);
    assert_eq!(info.projective_order, 1_451_520);
    eprintln!("Sp(6,2): {:?}", t.elapsed());
}

#[test]
fn psp8_2_refuses_cleanly() {
    let gens = standard_generators(&spec("psp(8,2)")).unwrap();
    assert_eq!(enumerate_group(&gens, DEFAULT_ENUMERATION_CAP).unwrap_err(), GroupError::CapExceeded { cap: DEFAULT_ENUMERATION_CAP });
}

#[test]
fn g3_candidates_enumerate_to_formula_orders() {
    for s in ["psl(2,7)", "a(7)", "psu(3,3)", "a(8)", "psl(3,4)", "psl(2,49)", "psu(3,5)", "a(9)"] {
        let t = Instant::now();
        let f = spec(s);
        let g = enumerate_group(&standard_generators(&f).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(num_bigint::BigUint::from(g.order()), classical_order(&f).unwrap(), "{s}");
        let spectrum = g.spectrum();
        let all_three = [8, 9, 12].iter().all(|o| spectrum.contains(o));
        assert!(!all_three, "{s}");
        eprintln!("{s}: {} {:?} {:?}", g.order(), spectrum, t.elapsed());
    }
}

#[test]
fn subgroup_witnesses() {
    let a7 = enumerate_group(&standard_generators(&spec("a(7)")).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(find_subgroup_by_type(&a7, TargetSpec::Psl27, u64::MAX).is_found());
    let l225 = enumerate_group(&standard_generators(&spec("psl(2,25)")).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(find_subgroup_by_type(&l225, TargetSpec::S5, u64::MAX).is_found());
    let l229 = enumerate_group(&standard_generators(&spec("psl(2,29)")).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(find_subgroup_by_type(&l229, TargetSpec::S5, u64::MAX).is_absent());
}

// SU(3,3) contains SU(2,3) = SL(2,3) on a nondegenerate plane, hence Q8.
#[test]
fn u3_3_contains_quaternion_subgroup() {
    let u33 = enumerate_group(&standard_generators(&spec("psu(3,3)")).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
    let SubgroupSearch::Found(w) = find_subgroup_by_type(&u33, TargetSpec::Q8, u64::MAX) else {
        panic!("expected a Q8 witness");
    };
    let (a, b) = (&w.generators[0], &w.generators[1]);
    assert_eq!(a.pow(2), b.pow(2));
    assert_eq!(b.mul(a).unwrap().mul(&b.inverse().unwrap()).unwrap(), a.inverse().unwrap());
    assert_eq!(w.subgroup_order, 8);
}

#[test]
fn simplicity_of_small_classical_groups() {
    let sl32 = enumerate_group(&standard_generators(&spec("sl(3,2)")).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(is_simple(&sl32));
    let sp42 = enumerate_group(&standard_generators(&spec("sp(4,2)")).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(sp42.order(), 720);
    assert!(!is_simple(&sp42));
}
