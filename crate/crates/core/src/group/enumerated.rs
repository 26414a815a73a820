use std::hash::BuildHasher;
use std::sync::OnceLock;

use hashbrown::{DefaultHashBuilder, HashSet, HashTable};

use crate::par;

use super::element::KEY_SYMBOLS;
use super::{random::sampled_spectrum, GenSet, GroupElement, GroupError, Permutation, Shape};

/// Default element cap for [`enumerate_group`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 5_000_000;

const KEY_BUF: usize = KEY_SYMBOLS as usize;

/// Fixed-width byte keys in one arena, indexed by a hash table of offsets.
#[derive(Clone)]
struct KeySet {
    len: usize,
    arena: Vec<u8>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
}

impl KeySet {
    fn new(len: usize) -> Self {
        KeySet { len, arena: Vec::new(), table: HashTable::new(), hasher: DefaultHashBuilder::default() }
    }

    fn count(&self) -> usize {
        self.arena.len() / self.len
    }

    #[inline]
    fn key(&self, i: usize) -> &[u8] {
        &self.arena[i * self.len..(i + 1) * self.len]
    }

    #[inline]
    fn find(&self, key: &[u8]) -> Option<u32> {
        let h = self.hasher.hash_one(key);
        self.table.find(h, |&i| self.key(i as usize) == key).copied()
    }

    fn insert(&mut self, key: &[u8]) -> bool {
        let h = self.hasher.hash_one(key);
        let KeySet { len, arena, table, hasher } = self;
        let len = *len;
        let slot = |i: u32| &arena[i as usize * len..(i as usize + 1) * len];
        if table.find(h, |&i| slot(i) == key).is_some() {
            return false;
        }
        let idx = (arena.len() / len) as u32;
        table.insert_unique(h, idx, |&i| hasher.hash_one(&arena[i as usize * len..(i as usize + 1) * len]));
        arena.extend_from_slice(key);
        true
    }

    fn from_sorted_arena(len: usize, arena: Vec<u8>) -> Self {
        let mut set = KeySet { len, arena, table: HashTable::new(), hasher: DefaultHashBuilder::default() };
        let n = set.count();
        set.table.reserve(n, |_| 0);
        for i in 0..n {
            let h = set.hasher.hash_one(set.key(i));
            let KeySet { arena, table, hasher, .. } = &mut set;
            table.insert_unique(h, i as u32, |&j| hasher.hash_one(&arena[j as usize * len..(j as usize + 1) * len]));
        }
        set
    }
}

/// A fully enumerated finite group. Element indices follow the byte order of
/// canonical keys; the identity is wherever its key sorts.
pub struct EnumeratedGroup {
    gens: GenSet,
    shape: Shape,
    set: KeySet,
    identity: u32,
    generator_indices: Vec<u32>,
    orders: OnceLock<Vec<u32>>,
    inverses: OnceLock<Vec<u32>>,
    classes: OnceLock<ConjugacyClasses>,
}

impl std::fmt::Debug for EnumeratedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EnumeratedGroup")
            .field("label", &self.gens.label())
            .field("order", &self.len())
            .finish()
    }
}

/// Breadth-first closure of `gens` from the identity.
pub fn enumerate_group(gens: &GenSet, cap: u64) -> Result<EnumeratedGroup, GroupError> {
    if cap == 0 {
        return Err(GroupError::Input("enumeration cap must be at least 1".into()));
    }
    let shape = gens.shape().clone();
    shape.check_enumerable()?;
    let len = shape.key_len();
    let gen_keys: Vec<Vec<u8>> = gens.generators().iter().map(|g| shape.encode(g)).collect();

    let mut set = KeySet::new(len);
    set.insert(&shape.identity_key());
    let mut start = 0;
    const CHUNK: usize = 4096;
    loop {
        let end = set.count();
        if start == end {
            break;
        }
        let chunks = (end - start).div_ceil(CHUNK);
        let fresh: Vec<Vec<u8>> = par::map_range(chunks, |c| {
            let lo = start + c * CHUNK;
            let hi = (lo + CHUNK).min(end);
            let mut buf = [0u8; KEY_BUF];
            let mut out = Vec::new();
            for i in lo..hi {
                let x = set.key(i);
                for g in &gen_keys {
                    let prod = &mut buf[..len];
                    shape.mul_keys(x, g, prod);
                    if set.find(prod).is_none() {
                        out.extend_from_slice(prod);
                    }
                }
            }
            out
        });
        for block in &fresh {
            for key in block.chunks_exact(len) {
                if set.insert(key) && set.count() as u64 > cap {
                    return Err(GroupError::CapExceeded { cap });
                }
            }
        }
        start = end;
    }

    let n = set.count();
    let mut order: Vec<u32> = (0..n as u32).collect();
    par::sort_by(&mut order, |&a, &b| set.key(a as usize).cmp(set.key(b as usize)));
    let mut arena = Vec::with_capacity(n * len);
    for &i in &order {
        arena.extend_from_slice(set.key(i as usize));
    }
    drop(set);
    let set = KeySet::from_sorted_arena(len, arena);
    let identity = set.find(&shape.identity_key()).expect("identity present");
    let generator_indices = gen_keys.iter().map(|k| set.find(k).expect("generator present")).collect();
    Ok(EnumeratedGroup {
        gens: gens.clone(),
        shape,
        set,
        identity,
        generator_indices,
        orders: OnceLock::new(),
        inverses: OnceLock::new(),
        classes: OnceLock::new(),
    })
}

impl EnumeratedGroup {
    pub fn gens(&self) -> &GenSet {
        &self.gens
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.set.count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> u64 {
        self.len() as u64
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generator_indices(&self) -> &[u32] {
        &self.generator_indices
    }

    pub fn element(&self, i: u32) -> GroupElement {
        self.shape.decode(self.set.key(i as usize))
    }

    pub fn index_of(&self, x: &GroupElement) -> Option<u32> {
        if x.shape() != self.shape {
            return None;
        }
        let x = match x {
            GroupElement::Projective(m) => GroupElement::projective(m.clone()),
            other => other.clone(),
        };
        self.set.find(&self.shape.encode(&x))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let len = self.set.len;
        let mut buf = [0u8; KEY_BUF];
        self.shape.mul_keys(self.set.key(a as usize), self.set.key(b as usize), &mut buf[..len]);
        self.set.find(&buf[..len]).expect("group is closed")
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = self.identity;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of every element, indexed like the elements.
    pub fn element_orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            let len = self.set.len;
            let id = self.set.key(self.identity as usize).to_vec();
            par::map_range(self.len(), |i| {
                let x = self.set.key(i);
                let mut y = x.to_vec();
                let mut next = vec![0u8; len];
                let mut k = 1u32;
                while y != id {
                    self.shape.mul_keys(&y, x, &mut next);
                    std::mem::swap(&mut y, &mut next);
                    k += 1;
                }
                k
            })
        })
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses()[a as usize]
    }

    fn inverses(&self) -> &[u32] {
        self.inverses.get_or_init(|| {
            let orders = self.element_orders();
            par::map_range(self.len(), |i| self.pow(i as u32, orders[i] as u64 - 1))
        })
    }

    /// Exact set of element orders, ascending.
    pub fn spectrum(&self) -> Vec<u64> {
        let mut seen = vec![false; 1];
        for &o in self.element_orders() {
            let o = o as usize;
            if o >= seen.len() {
                seen.resize(o + 1, false);
            }
            seen[o] = true;
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(o, _)| o as u64).collect()
    }

    /// Subgroup generated by `gens`, as sorted indices. `None` once it grows
    /// past `limit`.
    pub fn closure(&self, gens: &[u32], limit: Option<usize>) -> Option<Vec<u32>> {
        let mut seen: HashSet<u32> = HashSet::new();
        seen.insert(self.identity);
        let mut queue = vec![self.identity];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    if limit.is_some_and(|l| seen.len() > l) {
                        return None;
                    }
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        Some(queue)
    }

    /// Commutator subgroup of the subgroup with element indices `h`.
    pub fn derived_subgroup(&self, h: &[u32]) -> Vec<u32> {
        let comms: Vec<Vec<u32>> = par::map_slice(h, |&x| {
            let xi = self.inverse(x);
            h.iter().map(|&y| self.mul(self.mul(xi, self.inverse(y)), self.mul(x, y))).collect()
        });
        let mut gens: Vec<u32> = comms.into_iter().flatten().collect();
        gens.sort_unstable();
        gens.dedup();
        let mut sub = vec![self.identity];
        let mut chosen = Vec::new();
        for g in gens {
            if sub.binary_search(&g).is_err() {
                chosen.push(g);
                sub = self.closure(&chosen, None).unwrap();
            }
        }
        sub
    }

    /// Conjugacy classes, computed on first use.
    pub fn classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.len();
            let gens: Vec<(u32, u32)> =
                self.generator_indices.iter().map(|&g| (g, self.inverse(g))).collect();
            let mut class_of = vec![u32::MAX; n];
            let mut reps = Vec::new();
            let mut sizes = Vec::new();
            let mut queue = Vec::new();
            for start in 0..n as u32 {
                if class_of[start as usize] != u32::MAX {
                    continue;
                }
                let c = reps.len() as u32;
                reps.push(start);
                class_of[start as usize] = c;
                queue.clear();
                queue.push(start);
                let mut head = 0;
                while head < queue.len() {
                    let x = queue[head];
                    head += 1;
                    for &(g, gi) in &gens {
                        let y = self.mul(self.mul(gi, x), g);
                        if class_of[y as usize] == u32::MAX {
                            class_of[y as usize] = c;
                            queue.push(y);
                        }
                    }
                }
                sizes.push(queue.len());
            }
            ConjugacyClasses { class_of, reps, sizes }
        })
    }

    /// Orbit of `x` under conjugation, sorted.
    pub fn class_members(&self, x: u32) -> Vec<u32> {
        let classes = self.classes();
        let c = classes.class_of[x as usize];
        (0..self.len() as u32).filter(|&y| classes.class_of[y as usize] == c).collect()
    }
}

/// Conjugacy classes by brute force: orbits of conjugation by the generators.
#[derive(Debug, Clone)]
pub struct ConjugacyClasses {
    pub class_of: Vec<u32>,
    /// Least element index in each class.
    pub reps: Vec<u32>,
    pub sizes: Vec<usize>,
}

/// An element-order spectrum and whether it is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub orders: Vec<u64>,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMode {
    Exact,
    Sampled { budget: usize, seed: u64 },
}

/// Exact spectrum over all elements, or a sampled lower bound.
pub fn order_spectrum(g: &EnumeratedGroup, mode: SpectrumMode) -> Result<Spectrum, GroupError> {
    match mode {
        SpectrumMode::Exact => Ok(Spectrum { orders: g.spectrum(), exact: true }),
        SpectrumMode::Sampled { budget, seed } => sampled_spectrum(g.gens(), budget, seed, g.order()),
    }
}

/// Action of a group on the left cosets `gH` of a subgroup.
#[derive(Debug, Clone)]
pub struct CosetAction {
    pub degree: usize,
    pub subgroup_order: usize,
    /// Coset index of every group element.
    coset_of: Vec<u32>,
    /// Least element of each coset; cosets are numbered in order of these.
    reps: Vec<u32>,
    /// Permutations induced by the group's generators.
    pub generator_images: Vec<Permutation>,
}

impl CosetAction {
    /// Permutation of the cosets induced by element `x`.
    pub fn permutation_of(&self, g: &EnumeratedGroup, x: u32) -> Permutation {
        let images = self.reps.iter().map(|&r| self.coset_of[g.mul(x, r) as usize]).collect();
        Permutation::from_images(images).expect("coset action is a permutation")
    }

    pub fn coset_of(&self, x: u32) -> u32 {
        self.coset_of[x as usize]
    }
}

pub fn coset_action(g: &EnumeratedGroup, h_gens: &GenSet) -> Result<CosetAction, GroupError> {
    let mut h_idx = Vec::new();
    for x in h_gens.generators() {
        let i = g
            .index_of(x)
            .ok_or_else(|| GroupError::Input(format!("subgroup generator {x} is not in {}", g.gens().label())))?;
        h_idx.push(i);
    }
    Ok(coset_action_indices(g, &h_idx))
}

pub(crate) fn coset_action_indices(g: &EnumeratedGroup, h_gens: &[u32]) -> CosetAction {
    let h = g.closure(h_gens, None).expect("no limit");
    let mut coset_of = vec![u32::MAX; g.len()];
    let mut reps = Vec::new();
    for x in 0..g.len() as u32 {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &y in &h {
            coset_of[g.mul(x, y) as usize] = c;
        }
    }
    let mut action = CosetAction {
        degree: reps.len(),
        subgroup_order: h.len(),
        coset_of,
        reps,
        generator_images: Vec::new(),
    };
    action.generator_images = g.generator_indices().iter().map(|&s| action.permutation_of(g, s)).collect();
    action
}

/// Centre of a matrix group and data about its projective image.
#[derive(Debug, Clone)]
pub struct CenterInfo {
    pub center: Vec<GroupElement>,
    pub projective_order: u64,
    /// Orders of elements modulo the scalars, ascending and deduplicated.
    pub projective_spectrum: Vec<u64>,
}

pub fn center_and_projective(g: &EnumeratedGroup) -> Result<CenterInfo, GroupError> {
    if !matches!(g.shape(), Shape::Matrix { .. }) {
        return Err(GroupError::Unsupported(format!(
            "centre via scalars needs a matrix group, got {}",
            g.shape()
        )));
    }
    let scalar: Vec<bool> = par::map_range(g.len(), |i| {
        g.element(i as u32).as_matrix().is_some_and(|m| m.scalar_value().is_some())
    });
    let center: Vec<GroupElement> =
        (0..g.len()).filter(|&i| scalar[i]).map(|i| g.element(i as u32)).collect();
    let proj_orders: Vec<u64> = par::map_range(g.len(), |i| {
        let mut y = i as u32;
        let mut k = 1;
        while !scalar[y as usize] {
            y = g.mul(y, i as u32);
            k += 1;
        }
        k
    });
    let mut spectrum = proj_orders;
    spectrum.sort_unstable();
    spectrum.dedup();
    Ok(CenterInfo { projective_order: g.order() / center.len() as u64, center, projective_spectrum: spectrum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Modulus, SquareMatrix};

    fn perm(degree: usize, cycles: &[&[u32]]) -> GroupElement {
        GroupElement::Perm(Permutation::from_cycles(degree, cycles).unwrap())
    }

    fn a5() -> GenSet {
        GenSet::new("A5", vec![perm(5, &[&[0, 1, 2]]), perm(5, &[&[0, 1, 2, 3, 4]])]).unwrap()
    }

    fn s5() -> GenSet {
        GenSet::new("S5", vec![perm(5, &[&[0, 1]]), perm(5, &[&[0, 1, 2, 3, 4]])]).unwrap()
    }

    #[test]
    fn cyclic_and_alternating_orders() {
        let z5 = GenSet::new("Z5", vec![perm(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(enumerate_group(&z5, 100).unwrap().order(), 5);
        let g = enumerate_group(&a5(), 1000).unwrap();
        assert_eq!(g.order(), 60);
        assert_eq!(g.spectrum(), vec![1, 2, 3, 5]);
        assert!(matches!(enumerate_group(&s5(), 100), Err(GroupError::CapExceeded { cap: 100 })));
    }

    #[test]
    fn sl2_f3_has_order_24_and_centre_two() {
        let m = Modulus::integers(3).unwrap();
        let gens = vec![
            GroupElement::Matrix(SquareMatrix::from_rows(m, &[&[1, 1], &[0, 1]]).unwrap()),
            GroupElement::Matrix(SquareMatrix::from_rows(m, &[&[1, 0], &[1, 1]]).unwrap()),
        ];
        let g = enumerate_group(&GenSet::new("SL(2,3)", gens).unwrap(), 1000).unwrap();
        assert_eq!(g.order(), 24);
        let info = center_and_projective(&g).unwrap();
        assert_eq!(info.center.len(), 2);
        assert_eq!(info.projective_order, 12);
        assert_eq!(info.projective_spectrum, vec![1, 2, 3]);
    }

    #[test]
    fn element_set_independent_of_generator_order() {
        let a = enumerate_group(&a5(), 1000).unwrap();
        let rev: Vec<GroupElement> = a5().generators().iter().rev().cloned().collect();
        let b = enumerate_group(&GenSet::new("A5'", rev).unwrap(), 1000).unwrap();
        assert_eq!(a.set.arena, b.set.arena);
    }

    #[test]
    fn inverses_and_closure() {
        let g = enumerate_group(&s5(), 1000).unwrap();
        for x in 0..g.len() as u32 {
            assert_eq!(g.mul(x, g.inverse(x)), g.identity());
        }
        let gi = g.generator_indices();
        assert_eq!(g.closure(gi, None).unwrap().len(), 120);
        assert!(g.closure(gi, Some(50)).is_none());
        assert_eq!(g.derived_subgroup(&g.closure(gi, None).unwrap()).len(), 60);
    }

    #[test]
    fn class_counts() {
        let g = enumerate_group(&a5(), 1000).unwrap();
        let mut sizes = g.classes().sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        let s = enumerate_group(&s5(), 1000).unwrap();
        assert_eq!(s.classes().reps.len(), 7);
    }

    #[test]
    fn coset_actions() {
        let c8 = perm(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]]);
        let z8 = enumerate_group(&GenSet::new("Z8", vec![c8.clone()]).unwrap(), 100).unwrap();
        let h = GenSet::new("Z2", vec![c8.pow(4)]).unwrap();
        let act = coset_action(&z8, &h).unwrap();
        assert_eq!(act.degree, 4);
        assert_eq!(act.generator_images[0].cycle_type(), vec![4]);

        let s = enumerate_group(&s5(), 1000).unwrap();
        let stab = GenSet::new("S4", vec![perm(5, &[&[0, 1]]), perm(5, &[&[0, 1, 2, 3]])]).unwrap();
        let act = coset_action(&s, &stab).unwrap();
        assert_eq!(act.degree, 5);
        assert_eq!(act.subgroup_order, 24);
        let images = act.generator_images.clone();
        let natural = enumerate_group(
            &GenSet::new("image", images.into_iter().map(GroupElement::Perm).collect()).unwrap(),
            1000,
        )
        .unwrap();
        assert_eq!(natural.order(), 120);

        let outside = GenSet::new("bad", vec![perm(6, &[&[0, 5]])]).unwrap();
        assert!(coset_action(&s, &outside).is_err());
    }

    #[test]
    fn sampled_spectrum_is_subset_of_exact() {
        let g = enumerate_group(&a5(), 1000).unwrap();
        let exact = order_spectrum(&g, SpectrumMode::Exact).unwrap();
        for seed in 0..5 {
            let s = order_spectrum(&g, SpectrumMode::Sampled { budget: 200, seed }).unwrap();
            assert!(!s.exact);
            assert!(s.orders.iter().all(|o| exact.orders.contains(o)));
        }
    }
}
