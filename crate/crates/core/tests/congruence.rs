use mfq::congruence::{crt_check, reduction_kernel_check, theorem1_minimal_chain, ModKind};

#[test]
fn crt_for_sl2_mod_12() {
    let r = crt_check(ModKind::Sl, 2, 12).unwrap();
    assert_eq!(r.order, "1152");
    assert_eq!(r.factors.iter().map(|f| (f.modulus, f.order.as_str())).collect::<Vec<_>>(), [(4, "48"), (3, "24")]);
    assert!(r.passed);
}

#[test]
fn crt_for_sl3_mod_6() {
    let r = crt_check(ModKind::Sl, 3, 6).unwrap();
    assert_eq!(r.order, (168u64 * 5616).to_string());
    assert!(r.passed);
}

#[test]
fn kernels_are_p_groups() {
    let r = reduction_kernel_check(ModKind::Sl, 2, 2, 3).unwrap();
    assert_eq!(r.kernel_order, "64");
    assert!(r.kernel_orders.iter().all(|o| o.is_power_of_two()));
    assert!(r.passed);
    let r = reduction_kernel_check(ModKind::Sp, 4, 2, 2).unwrap();
    assert_eq!(r.kernel_order, (1u64 << 10).to_string());
    assert!(r.power_identity_by_binomial && r.power_identity_by_exponentiation && r.passed);
}

#[test]
fn chains() {
    let c = theorem1_minimal_chain(ModKind::Sp, 4, 2).unwrap();
    assert!(!c.projective_simple);
    assert_eq!(c.projective_order, "720");
    assert!(c.exception.is_some() && c.passed);
    let c = theorem1_minimal_chain(ModKind::Sp, 4, 3).unwrap();
    assert!(c.projective_simple && c.passed);
    assert_eq!(c.projective_order, "25920");
    assert!(theorem1_minimal_chain(ModKind::Sl, 2, 1).is_err());
}
