use std::collections::BTreeSet;

use mfq::catalog::{enumerate_simple_orders, verify_record, Catalog, Marker, Tier, VerifyOptions, WitnessOutcome};
use mfq::group::enumerate_group;

const PSP82: u64 = 47_377_612_800;

#[test]
fn catalog_covers_every_simple_order_below_psp8_2() {
    let catalog = Catalog::default_catalog();
    let listed: BTreeSet<String> = enumerate_simple_orders(PSP82).unwrap().into_iter().map(|s| s.name).collect();
    let held: BTreeSet<String> = catalog.records().iter().map(|r| r.name.clone()).collect();
    assert_eq!(listed, held);
}

#[test]
fn mathieu_generators_give_recorded_orders() {
    let catalog = Catalog::default_catalog();
    for (name, order) in [("M11", 7920), ("M12", 95040), ("M22", 443520)] {
        let gens = catalog.get(name).unwrap().embedded_generators().unwrap().unwrap();
        assert_eq!(enumerate_group(&gens, 1_000_000).unwrap().order(), order, "{name}");
    }
}

#[test]
fn small_constructible_records_verify_exactly() {
    let catalog = Catalog::default_catalog();
    let opts = VerifyOptions { check_markers: false, ..VerifyOptions::default() };
    let small: Vec<_> = catalog
        .records()
        .iter()
        .filter(|r| r.order <= 200_000u32.into() && r.generator_set().is_some())
        .collect();
    assert!(small.len() >= 15, "{}", small.len());
    for rec in small {
        let report = verify_record(rec, opts);
        assert_eq!(report.tier, Tier::A, "{}", rec.name);
        assert!(report.ok(), "{}: {:?}", rec.name, report.findings);
        assert_eq!(report.exact_spectrum().unwrap(), rec.spectrum.as_slice(), "{}", rec.name);
    }
}

#[test]
fn psl27_markers_are_witnessed() {
    let catalog = Catalog::default_catalog();
    for name in ["L2(7)", "A7", "U3(3)", "L3(4)"] {
        let rec = catalog.get(name).unwrap();
        assert_eq!(rec.markers.contains_psl27, Marker::Yes);
        let report = verify_record(rec, VerifyOptions::default());
        let m = report.markers.iter().find(|m| m.marker == "markers.contains_psl27").unwrap();
        assert_eq!(m.outcome, WitnessOutcome::Witnessed, "{name}");
    }
    let a6 = catalog.get("A6").unwrap();
    assert_eq!(a6.markers.contains_psl27, Marker::No);
}

#[test]
fn aliases_resolve() {
    let catalog = Catalog::default_catalog();
    assert_eq!(catalog.get("L2(4)").unwrap().name, "A5");
    assert_eq!(catalog.get("s6(2)").unwrap().name, "S6(2)");
    assert!(catalog.get("L2(9)").is_some());
}
