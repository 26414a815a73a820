//! Finite simple groups below an order bound: the family-formula enumeration,
//! the shipped record file and tiered verification of records.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::classical::{classical_order, standard_generators, FamilySpec, SPORADIC};
use crate::group::{
    enumerate_group, find_subgroup_by_type, sampled_spectrum, GenSet, GroupElement, Permutation, SubgroupSearch,
    TargetSpec,
};
use crate::par;
use crate::ring::prime_power;

/// The shipped catalog.
pub const DEFAULT_CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// Largest bound accepted by [`enumerate_simple_orders`].
pub const MAX_ORDER_BOUND: u64 = 100_000_000_000;

/// Groups up to this order are enumerated in full by [`verify_record`].
pub const ENUMERATION_CAP: u64 = 5_000_000;

/// Coincident orders of non-isomorphic simple groups below [`MAX_ORDER_BOUND`]
/// other than the `S2n(q)` / `O2n+1(q)` pairs.
pub const NON_ISOMORPHIC_COINCIDENCES: [(&str, &str); 1] = [("A8", "L3(4)")];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {message}")]
    Io { path: String, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: unknown family: {message}")]
    UnknownFamily { path: String, message: String },
    #[error("{name}: recorded order {recorded} differs from the family order {expected}")]
    OrderMismatch { name: String, recorded: String, expected: String },
    #[error("{name}: spectrum entry {value} does not divide the order {order}")]
    SpectrumDivisibility { name: String, value: u64, order: String },
    #[error("duplicate record name or alias {0:?}")]
    Duplicate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Marker::Yes => "yes",
            Marker::No => "no",
            Marker::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    AtlasData,
    Computed,
    Formula,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::AtlasData => "atlas-data",
            Provenance::Computed => "computed",
            Provenance::Formula => "formula",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Markers {
    pub contains_psl27: Marker,
    pub contains_s5: Marker,
    pub contains_q8: Marker,
}

impl Markers {
    pub fn get(&self, target: TargetSpec) -> Marker {
        match target {
            TargetSpec::Psl27 => self.contains_psl27,
            TargetSpec::S5 => self.contains_s5,
            TargetSpec::Q8 => self.contains_q8,
            TargetSpec::Cyclic(_) => Marker::Unknown,
        }
    }
}

/// Field name used in provenance maps for a marker.
pub fn marker_field(target: TargetSpec) -> &'static str {
    match target {
        TargetSpec::Psl27 => "markers.contains_psl27",
        TargetSpec::S5 => "markers.contains_s5",
        TargetSpec::Q8 => "markers.contains_q8",
        TargetSpec::Cyclic(_) => "markers",
    }
}

const REQUIRED_PROVENANCE: [&str; 6] = [
    "order",
    "spectrum",
    "markers.contains_psl27",
    "markers.contains_s5",
    "markers.contains_q8",
    "min_transitive_degree",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    name: String,
    aliases: Vec<String>,
    family: String,
    params: Vec<u32>,
    order: String,
    spectrum: Vec<u64>,
    markers: Markers,
    min_transitive_degree: Option<u64>,
    generators: Option<Vec<String>>,
    provenance: BTreeMap<String, Provenance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGroupRecord {
    pub name: String,
    pub aliases: Vec<String>,
    pub family: FamilySpec,
    pub order: BigUint,
    pub spectrum: Vec<u64>,
    pub markers: Markers,
    pub min_transitive_degree: Option<u64>,
    /// Permutation generators in 1-based cycle notation.
    pub generators: Option<Vec<String>>,
    pub provenance: BTreeMap<String, Provenance>,
}

impl SimpleGroupRecord {
    pub fn has_order(&self, n: u64) -> bool {
        self.spectrum.binary_search(&n).is_ok()
    }

    pub fn provenance_of(&self, field: &str) -> Option<Provenance> {
        self.provenance.get(field).copied()
    }

    /// Whether the record is `PSL(2,q)` for some `q`.
    pub fn is_psl2(&self) -> bool {
        matches!(self.family, FamilySpec::PSL { n: 2, .. })
    }

    /// Whether the record is a projective symplectic group of dimension `dim`.
    pub fn is_psp(&self, dim: u32) -> bool {
        matches!(self.family, FamilySpec::PSp { dim: d, .. } if d == dim)
            || self.aliases.iter().any(|a| matches!(a.parse::<FamilySpec>(), Ok(FamilySpec::PSp { dim: d, .. }) if d == dim))
    }

    /// Parsed embedded generators.
    pub fn embedded_generators(&self) -> Option<Result<GenSet, String>> {
        let gens = self.generators.as_ref()?;
        Some(parse_generators(&self.name, gens))
    }

    /// A generating set: embedded generators first, then the family or any
    /// alias that [`standard_generators`] can build.
    pub fn generator_set(&self) -> Option<GenSet> {
        if let Some(Ok(g)) = self.embedded_generators() {
            return Some(g);
        }
        std::iter::once(self.family.clone())
            .chain(self.aliases.iter().filter_map(|a| a.parse::<FamilySpec>().ok()))
            .find_map(|spec| standard_generators(&spec).ok())
            .map(|g| g.with_label(self.name.clone()))
    }

    fn to_raw(&self) -> RawRecord {
        let (family, params) = self.family.family_params();
        RawRecord {
            name: self.name.clone(),
            aliases: self.aliases.clone(),
            family: family.to_string(),
            params,
            order: self.order.to_string(),
            spectrum: self.spectrum.clone(),
            markers: self.markers,
            min_transitive_degree: self.min_transitive_degree,
            generators: self.generators.clone(),
            provenance: self.provenance.clone(),
        }
    }
}

fn parse_generators(name: &str, gens: &[String]) -> Result<GenSet, String> {
    let degree = gens
        .iter()
        .flat_map(|g| g.split(|c: char| !c.is_ascii_digit()))
        .filter_map(|t| t.parse::<usize>().ok())
        .max()
        .ok_or_else(|| format!("{name}: empty generator list"))?;
    let perms = gens
        .iter()
        .map(|g| Permutation::parse_cycles(degree, g, 1).map(GroupElement::Perm).map_err(|e| format!("{name}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    GenSet::new(name, perms).map_err(|e| format!("{name}: {e}"))
}

/// A loaded, validated catalog.
#[derive(Debug, Clone)]
pub struct Catalog {
    records: Vec<SimpleGroupRecord>,
    index: HashMap<String, usize>,
    sha256: String,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let values: Vec<serde_json::Value> = serde_json::from_str(text)
            .map_err(|e| CatalogError::Schema { path: "$".into(), message: e.to_string() })?;
        let mut records = Vec::with_capacity(values.len());
        for (i, value) in values.into_iter().enumerate() {
            let name = value.get("name").and_then(|n| n.as_str()).map(str::to_string);
            let path = match &name {
                Some(n) => format!("$[{i}] ({n})"),
                None => format!("$[{i}]"),
            };
            let raw: RawRecord = serde_json::from_value(value)
                .map_err(|e| CatalogError::Schema { path: path.clone(), message: e.to_string() })?;
            records.push(validate(raw, &path)?);
        }
        let mut index = HashMap::new();
        for (i, r) in records.iter().enumerate() {
            for key in std::iter::once(&r.name).chain(&r.aliases) {
                if index.insert(key.to_lowercase(), i).is_some_and(|prev| prev != i) {
                    return Err(CatalogError::Duplicate(key.clone()));
                }
            }
        }
        let sha256 = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        Ok(Catalog { records, index, sha256 })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CatalogError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn default_catalog() -> Self {
        Self::from_json(DEFAULT_CATALOG_JSON).expect("shipped catalog is valid")
    }

    pub fn records(&self) -> &[SimpleGroupRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Lookup by name or alias, ignoring case.
    pub fn get(&self, name: &str) -> Option<&SimpleGroupRecord> {
        self.index.get(&name.to_lowercase()).map(|&i| &self.records[i])
    }

    /// Hex SHA-256 of the catalog text.
    pub fn sha256(&self) -> &str {
        &self.sha256
    }

    pub fn max_order(&self) -> BigUint {
        self.records.iter().map(|r| r.order.clone()).max().unwrap_or_default()
    }

    /// Records with `lo < order < hi`, in catalog order.
    pub fn between(&self, lo: &BigUint, hi: &BigUint) -> Vec<&SimpleGroupRecord> {
        self.records.iter().filter(|r| &r.order > lo && &r.order < hi).collect()
    }

    /// Serialize back to the file format.
    pub fn to_json(&self) -> String {
        let raws: Vec<RawRecord> = self.records.iter().map(SimpleGroupRecord::to_raw).collect();
        serde_json::to_string_pretty(&raws).expect("serializable")
    }
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    Catalog::load(path)
}

fn validate(raw: RawRecord, path: &str) -> Result<SimpleGroupRecord, CatalogError> {
    let schema = |message: String| CatalogError::Schema { path: path.to_string(), message };
    let family = FamilySpec::from_family_params(&raw.family, &raw.params, &raw.name)
        .map_err(|e| CatalogError::UnknownFamily { path: format!("{path}.family"), message: e.to_string() })?;
    let order: BigUint =
        raw.order.parse().map_err(|_| schema(format!("order {:?} is not a decimal integer", raw.order)))?;
    let expected = classical_order(&family)
        .map_err(|e| CatalogError::UnknownFamily { path: format!("{path}.family"), message: e.to_string() })?;
    if order != expected {
        return Err(CatalogError::OrderMismatch {
            name: raw.name,
            recorded: order.to_string(),
            expected: expected.to_string(),
        });
    }
    if raw.spectrum.first() != Some(&1) {
        return Err(schema("spectrum must start with 1".into()));
    }
    if raw.spectrum.windows(2).any(|w| w[0] >= w[1]) {
        return Err(schema("spectrum must be strictly increasing".into()));
    }
    if let Some(&bad) = raw.spectrum.iter().find(|&&o| !(&order % o).is_zero()) {
        return Err(CatalogError::SpectrumDivisibility { name: raw.name, value: bad, order: order.to_string() });
    }
    for field in REQUIRED_PROVENANCE {
        if !raw.provenance.contains_key(field) {
            return Err(schema(format!("provenance.{field} missing")));
        }
    }
    if raw.generators.is_some() && !raw.provenance.contains_key("generators") {
        return Err(schema("provenance.generators missing".into()));
    }
    if let Some(gens) = &raw.generators {
        parse_generators(&raw.name, gens).map_err(|e| schema(format!("generators: {e}")))?;
    }
    Ok(SimpleGroupRecord {
        name: raw.name,
        aliases: raw.aliases,
        family,
        order,
        spectrum: raw.spectrum,
        markers: raw.markers,
        min_transitive_degree: raw.min_transitive_degree,
        generators: raw.generators,
        provenance: raw.provenance,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleOrder {
    pub name: String,
    pub family: FamilySpec,
    #[serde(serialize_with = "decimal")]
    pub order: BigUint,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Isomorphic presentations skipped in favour of the canonical name.
fn duplicate_of(spec: &FamilySpec) -> Option<&'static str> {
    match *spec {
        FamilySpec::PSL { n: 2, q: 4 } | FamilySpec::PSL { n: 2, q: 5 } => Some("A5"),
        FamilySpec::PSL { n: 2, q: 9 } => Some("A6"),
        FamilySpec::PSL { n: 3, q: 2 } => Some("L2(7)"),
        FamilySpec::PSL { n: 4, q: 2 } => Some("A8"),
        FamilySpec::PSp { dim: 4, q: 3 } => Some("U4(2)"),
        _ => None,
    }
}

/// All nonabelian finite simple groups of order below `bound`, sorted by
/// order then name, with exceptional isomorphisms collapsed.
/// Bound on the centre divisor of any family below `MAX_ORDER_BOUND`.
const SCAN_SLACK: u32 = 16;

pub fn enumerate_simple_orders(bound: u64) -> Result<Vec<SimpleOrder>, CatalogError> {
    if bound > MAX_ORDER_BOUND {
        return Err(CatalogError::Unsupported(format!("bound {bound} exceeds {MAX_ORDER_BOUND}")));
    }
    let limit = BigUint::from(bound);
    let mut out: Vec<SimpleOrder> = Vec::new();
    // Orders are not monotone in q: the centre divisor gcd(n, q - 1) varies.
    // Keep scanning while the order is within that divisor of the bound.
    let scan_limit = &limit * SCAN_SLACK;
    let mut push = |spec: FamilySpec| -> bool {
        let order = classical_order(&spec).expect("valid family");
        let more = order < scan_limit;
        if order < limit && duplicate_of(&spec).is_none() {
            out.push(SimpleOrder { name: spec.atlas_name(), family: spec, order });
        }
        more
    };
    let prime_powers = |from: u32| (from..).filter(|&q| prime_power(q as u64).is_some());

    let mut n = 5;
    while push(FamilySpec::Alternating(n)) {
        n += 1;
    }
    // Each family's order grows with both parameters, so scan q upward until
    // the bound is hit and stop the outer loop when the smallest q fails.
    let scan = |push: &mut dyn FnMut(FamilySpec) -> bool, first: &dyn Fn(u32) -> u32, make: &dyn Fn(u32, u32) -> FamilySpec, start: u32| {
        let mut rank = start;
        loop {
            let mut any = false;
            for q in prime_powers(first(rank)) {
                if !push(make(rank, q)) {
                    break;
                }
                any = true;
            }
            if !any {
                break;
            }
            rank += 1;
        }
    };
    scan(&mut push, &|n| if n == 2 { 4 } else { 2 }, &|n, q| FamilySpec::PSL { n, q }, 2);
    scan(&mut push, &|n| if n == 3 { 3 } else { 2 }, &|n, q| FamilySpec::PSU { n, q }, 3);
    scan(&mut push, &|m| if m == 2 { 3 } else { 2 }, &|m, q| FamilySpec::PSp { dim: 2 * m, q }, 2);
    let mut m = 3;
    loop {
        let mut any = false;
        for q in prime_powers(3).filter(|q| q % 2 == 1) {
            if !push(FamilySpec::OmegaOdd { dim: 2 * m + 1, q }) {
                break;
            }
            any = true;
        }
        if !any {
            break;
        }
        m += 1;
    }
    scan(&mut push, &|_| 2, &|m, q| FamilySpec::OmegaPlus { dim: 2 * m, q }, 4);
    scan(&mut push, &|_| 2, &|m, q| FamilySpec::OmegaMinus { dim: 2 * m, q }, 4);
    type Exceptional = fn(u32) -> FamilySpec;
    let exceptional: [(Exceptional, u32); 7] = [
        (FamilySpec::G2, 3),
        (FamilySpec::F4, 2),
        (FamilySpec::E6, 2),
        (FamilySpec::E7, 2),
        (FamilySpec::E8, 2),
        (FamilySpec::TwistedE6, 2),
        (FamilySpec::TrialityD4, 2),
    ];
    for (make, first) in exceptional {
        for q in prime_powers(first) {
            if !push(make(q)) {
                break;
            }
        }
    }
    for k in 1.. {
        if !push(FamilySpec::Suzuki(2u32.pow(2 * k + 1))) {
            break;
        }
    }
    for k in 1.. {
        if !push(FamilySpec::Ree(3u32.pow(2 * k + 1))) {
            break;
        }
    }
    for k in 1.. {
        if !push(FamilySpec::ReeF4(2u32.pow(2 * k + 1))) {
            break;
        }
    }
    push(FamilySpec::Tits);
    for (name, _) in SPORADIC {
        push(FamilySpec::Sporadic(name.to_string()));
    }
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.name.cmp(&b.name)));
    check_coincidences(&out)?;
    Ok(out)
}

fn check_coincidences(list: &[SimpleOrder]) -> Result<(), CatalogError> {
    for w in list.windows(2) {
        if w[0].order != w[1].order {
            continue;
        }
        let listed = NON_ISOMORPHIC_COINCIDENCES
            .iter()
            .any(|&(a, b)| (a == w[0].name && b == w[1].name) || (a == w[1].name && b == w[0].name));
        let symplectic_orthogonal = matches!(
            (&w[0].family, &w[1].family),
            (FamilySpec::OmegaOdd { dim: d1, q: q1 }, FamilySpec::PSp { dim: d2, q: q2 })
                | (FamilySpec::PSp { dim: d2, q: q2 }, FamilySpec::OmegaOdd { dim: d1, q: q1 })
                if *d1 == d2 + 1 && q1 == q2
        );
        if !listed && !symplectic_orthogonal {
            return Err(CatalogError::Unsupported(format!(
                "unexpected order coincidence {} = {} ({})",
                w[0].name, w[1].name, w[0].order
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    A,
    B,
    C,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::A => "a",
            Tier::B => "b",
            Tier::C => "c",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectrumCheck {
    Exact { computed: Vec<u64>, matches: bool },
    Sampled { sampled: Vec<u64>, samples: usize, seed: u64, subset: bool },
    Trusted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessOutcome {
    Witnessed,
    Absent,
    Indeterminate,
    NotChecked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkerCheck {
    pub marker: String,
    pub recorded: Marker,
    pub outcome: WitnessOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub tier: Tier,
    pub order: String,
    pub order_confirmed: bool,
    pub computed_order: Option<String>,
    pub spectrum: SpectrumCheck,
    pub markers: Vec<MarkerCheck>,
    /// Catalog fields taken on trust.
    pub trusted: Vec<String>,
    /// Disagreements between the record and computation.
    pub findings: Vec<String>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.findings.is_empty()
    }

    /// Whether the spectrum was recomputed exactly.
    pub fn exact_spectrum(&self) -> Option<&[u64]> {
        match &self.spectrum {
            SpectrumCheck::Exact { computed, .. } => Some(computed),
            _ => None,
        }
    }
}

/// Options for [`verify_record`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Witness-search budget per marker.
    pub witness_budget: u64,
    /// Random elements drawn for tier (b).
    pub samples: usize,
    pub seed: u64,
    /// Markers to witness in tier (a); `yes` markers only.
    pub check_markers: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { witness_budget: 2_000_000, samples: 20_000, seed: 1, check_markers: true }
    }
}

const MARKERS: [TargetSpec; 3] = [TargetSpec::Psl27, TargetSpec::S5, TargetSpec::Q8];

/// Tiered check of a record against computation. Tier (a) enumerates the
/// group, tier (b) samples embedded generators, tier (c) only confirms the
/// order formula.
pub fn verify_record(rec: &SimpleGroupRecord, opts: VerifyOptions) -> VerificationReport {
    let mut findings = Vec::new();
    let mut trusted = Vec::new();
    let order_confirmed = classical_order(&rec.family).is_ok_and(|o| o == rec.order);
    if !order_confirmed {
        findings.push(format!("order {} disagrees with the family formula", rec.order));
    }
    let gens = rec.generator_set();
    let small = rec.order.to_u64().is_some_and(|o| o <= ENUMERATION_CAP);
    let mut markers: Vec<MarkerCheck> = MARKERS
        .iter()
        .map(|&t| MarkerCheck { marker: marker_field(t).into(), recorded: rec.markers.get(t), outcome: WitnessOutcome::NotChecked })
        .collect();

    let (tier, computed_order, spectrum) = match (&gens, small) {
        (Some(gens), true) => match enumerate_group(gens, ENUMERATION_CAP) {
            Ok(g) => {
                let computed = g.spectrum();
                let matches = computed == rec.spectrum;
                if BigUint::from(g.order()) != rec.order {
                    findings.push(format!("enumerated order {} differs from recorded {}", g.order(), rec.order));
                }
                if !matches {
                    findings.push(format!("computed spectrum {computed:?} differs from recorded {:?}", rec.spectrum));
                }
                if opts.check_markers {
                    for (check, &target) in markers.iter_mut().zip(MARKERS.iter()) {
                        if check.recorded != Marker::Yes {
                            continue;
                        }
                        check.outcome = match find_subgroup_by_type(&g, target, opts.witness_budget) {
                            SubgroupSearch::Found(_) => WitnessOutcome::Witnessed,
                            SubgroupSearch::Absent { .. } => {
                                findings.push(format!("{} recorded yes but no {target} subgroup exists", check.marker));
                                WitnessOutcome::Absent
                            }
                            SubgroupSearch::Indeterminate { .. } => WitnessOutcome::Indeterminate,
                        };
                    }
                }
                (Tier::A, Some(g.order().to_string()), SpectrumCheck::Exact { computed, matches })
            }
            Err(e) => {
                findings.push(format!("enumeration failed: {e}"));
                trusted.push("spectrum".to_string());
                (Tier::C, None, SpectrumCheck::Trusted)
            }
        },
        (Some(gens), false) => match sampled_spectrum(gens, opts.samples, opts.seed, 1 << 20) {
            Ok(s) => {
                let subset = s.orders.iter().all(|o| rec.has_order(*o));
                if !subset {
                    findings.push(format!("sampled orders {:?} not within recorded spectrum", s.orders));
                }
                trusted.push("spectrum".to_string());
                let sampled = SpectrumCheck::Sampled { sampled: s.orders, samples: opts.samples, seed: opts.seed, subset };
                (Tier::B, None, sampled)
            }
            Err(e) => {
                findings.push(format!("sampling failed: {e}"));
                trusted.push("spectrum".to_string());
                (Tier::C, None, SpectrumCheck::Trusted)
            }
        },
        (None, _) => {
            trusted.push("spectrum".to_string());
            (Tier::C, None, SpectrumCheck::Trusted)
        }
    };
    for check in &markers {
        if check.recorded != Marker::Unknown && check.outcome != WitnessOutcome::Witnessed {
            trusted.push(check.marker.clone());
        }
    }
    trusted.push("min_transitive_degree".to_string());
    VerificationReport {
        name: rec.name.clone(),
        tier,
        order: rec.order.to_string(),
        order_confirmed,
        computed_order,
        spectrum,
        markers,
        trusted,
        findings,
    }
}

/// [`verify_record`] over several records in parallel, in input order.
pub fn verify_records(recs: &[&SimpleGroupRecord], opts: VerifyOptions) -> Vec<VerificationReport> {
    par::map_slice(recs, |r| verify_record(r, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(bound: u64) -> Vec<String> {
        enumerate_simple_orders(bound).unwrap().into_iter().map(|s| s.name).collect()
    }

    #[test]
    fn small_bounds() {
        assert_eq!(names(400), vec!["A5", "L2(7)", "A6"]);
        let upto = names(10_000);
        assert_eq!(upto.iter().filter(|n| *n == "U3(3)").count(), 1);
        assert!(!upto.iter().any(|n| n == "L2(9)" || n == "L3(2)" || n == "L2(4)"));
        let g4 = enumerate_simple_orders(47_377_612_800).unwrap();
        assert!(g4.iter().any(|s| s.name == "A8") && g4.iter().any(|s| s.name == "L3(4)"));
        assert!(g4.iter().any(|s| s.name == "S6(3)") && g4.iter().any(|s| s.name == "O7(3)"));
        assert!(!g4.iter().any(|s| s.name == "L4(2)" || s.name == "S4(3)"));
        assert!(enumerate_simple_orders(MAX_ORDER_BOUND + 1).is_err());
    }

    #[test]
    fn default_catalog_loads() {
        let c = Catalog::default_catalog();
        assert!(c.len() > 700);
        assert_eq!(c.get("psl(2,4)").unwrap().name, "A5");
        assert_eq!(c.get("s4(3)").unwrap().name, "U4(2)");
        assert_eq!(c.sha256().len(), 64);
    }

    #[test]
    fn rejects_bad_records() {
        let c = Catalog::default_catalog();
        let mut v: Vec<serde_json::Value> = serde_json::from_str(DEFAULT_CATALOG_JSON).unwrap();
        let i = v.iter().position(|r| r["name"] == "M11").unwrap();
        v[i]["order"] = "7921".into();
        let err = Catalog::from_json(&serde_json::to_string(&v).unwrap()).unwrap_err();
        assert!(err.to_string().contains("M11"), "{err}");

        let mut v: Vec<serde_json::Value> = serde_json::from_str(DEFAULT_CATALOG_JSON).unwrap();
        v[i]["spectrum"] = serde_json::json!([1, 2, 3, 7]);
        assert!(matches!(
            Catalog::from_json(&serde_json::to_string(&v).unwrap()),
            Err(CatalogError::SpectrumDivisibility { .. })
        ));

        let mut v: Vec<serde_json::Value> = serde_json::from_str(DEFAULT_CATALOG_JSON).unwrap();
        let dup = v[i].clone();
        v.push(dup);
        assert!(matches!(Catalog::from_json(&serde_json::to_string(&v).unwrap()), Err(CatalogError::Duplicate(_))));

        let mut v: Vec<serde_json::Value> = serde_json::from_str(DEFAULT_CATALOG_JSON).unwrap();
        v[i]["family"] = "octonionic".into();
        let err = Catalog::from_json(&serde_json::to_string(&v).unwrap()).unwrap_err();
        assert!(matches!(err, CatalogError::UnknownFamily { .. }), "{err}");

        let mut v: Vec<serde_json::Value> = serde_json::from_str(DEFAULT_CATALOG_JSON).unwrap();
        v[i].as_object_mut().unwrap().remove("spectrum");
        let err = Catalog::from_json(&serde_json::to_string(&v).unwrap()).unwrap_err();
        assert!(err.to_string().contains("$[") && err.to_string().contains("spectrum"), "{err}");
        let _ = c;
    }

    #[test]
    fn round_trip() {
        let c = Catalog::default_catalog();
        let again = Catalog::from_json(&c.to_json()).unwrap();
        assert_eq!(again.records(), c.records());
    }

    #[test]
    fn tiers() {
        let c = Catalog::default_catalog();
        let opts = VerifyOptions { check_markers: false, ..Default::default() };
        let r = verify_record(c.get("A7").unwrap(), opts);
        assert_eq!(r.tier, Tier::A);
        assert!(r.ok(), "{r:?}");
        let r = verify_record(c.get("3D4(2)").unwrap(), opts);
        assert_eq!(r.tier, Tier::C);
        assert_eq!(r.order, "211341312");
        assert!(r.order_confirmed && r.trusted.contains(&"spectrum".to_string()));
    }
}
