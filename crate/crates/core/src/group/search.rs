use serde::Serialize;

use crate::par;

use super::{EnumeratedGroup, GroupElement};

/// Subgroup types the witness search understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TargetSpec {
    /// `(a, b)` with orders `(2, 3)`, `|ab| = 7`, generating a group of order 168.
    Psl27,
    /// `(a, b)` with orders `(2, 4)`, `|ab| = 5`, generating a group of order 120.
    S5,
    /// `(a, b)` of order 4 with `a^2 = b^2` and `b a b^-1 = a^-1`.
    Q8,
    /// An element of order `n`.
    Cyclic(u32),
}

impl std::fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TargetSpec::Psl27 => write!(f, "PSL(2,7)"),
            TargetSpec::S5 => write!(f, "S5"),
            TargetSpec::Q8 => write!(f, "Q8"),
            TargetSpec::Cyclic(n) => write!(f, "Z{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupWitness {
    pub generators: Vec<GroupElement>,
    pub subgroup_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupSearch {
    Found(SubgroupWitness),
    /// Every candidate pair was examined.
    Absent { candidates: u64 },
    /// The budget ran out first.
    Indeterminate { examined: u64, candidates: u64 },
}

impl SubgroupSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, SubgroupSearch::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, SubgroupSearch::Absent { .. })
    }
}

/// Search for a subgroup of the given type. The first generator runs over
/// conjugacy-class representatives, the second over all elements; absence is
/// reported only when all candidate pairs fit in `budget`.
pub fn find_subgroup_by_type(g: &EnumeratedGroup, target: TargetSpec, budget: u64) -> SubgroupSearch {
    let orders = g.element_orders();
    if let TargetSpec::Cyclic(n) = target {
        return match orders.iter().position(|&o| o == n) {
            Some(i) => SubgroupSearch::Found(SubgroupWitness {
                generators: vec![g.element(i as u32)],
                subgroup_order: n as usize,
            }),
            None => SubgroupSearch::Absent { candidates: g.order() },
        };
    }
    let (oa, ob) = match target {
        TargetSpec::Psl27 => (2, 3),
        TargetSpec::S5 => (2, 4),
        TargetSpec::Q8 => (4, 4),
        TargetSpec::Cyclic(_) => unreachable!(),
    };
    let reps: Vec<u32> = g.classes().reps.iter().copied().filter(|&r| orders[r as usize] == oa).collect();
    let bs: Vec<u32> = (0..g.len() as u32).filter(|&b| orders[b as usize] == ob).collect();
    let candidates = reps.len() as u64 * bs.len() as u64;
    let examined = candidates.min(budget);

    let hit = par::find_map_first(examined as usize, |k| {
        let a = reps[k / bs.len()];
        let b = bs[k % bs.len()];
        check_pair(g, target, a, b).map(|size| (a, b, size))
    });
    match hit {
        Some((a, b, size)) => SubgroupSearch::Found(SubgroupWitness {
            generators: vec![g.element(a), g.element(b)],
            subgroup_order: size,
        }),
        None if examined == candidates => SubgroupSearch::Absent { candidates },
        None => SubgroupSearch::Indeterminate { examined, candidates },
    }
}

fn check_pair(g: &EnumeratedGroup, target: TargetSpec, a: u32, b: u32) -> Option<usize> {
    let orders = g.element_orders();
    let (size, ok) = match target {
        TargetSpec::Psl27 => (168, orders[g.mul(a, b) as usize] == 7),
        TargetSpec::S5 => (120, orders[g.mul(a, b) as usize] == 5),
        TargetSpec::Q8 => {
            let squares = g.mul(a, a) == g.mul(b, b);
            (8, squares && g.mul(g.mul(b, a), g.inverse(b)) == g.inverse(a))
        }
        TargetSpec::Cyclic(_) => unreachable!(),
    };
    if !ok {
        return None;
    }
    let sub = g.closure(&[a, b], Some(size))?;
    (sub.len() == size).then_some(size)
}

/// Whether the group has no proper nontrivial normal subgroup, by computing
/// the normal closure of each conjugacy-class representative.
pub fn is_simple(g: &EnumeratedGroup) -> bool {
    let n = g.len();
    if n == 1 {
        return false;
    }
    let classes = g.classes();
    for &r in &classes.reps {
        if r == g.identity() {
            continue;
        }
        if normal_closure_size(g, r) < n {
            return false;
        }
    }
    true
}

fn normal_closure_size(g: &EnumeratedGroup, x: u32) -> usize {
    let members = g.class_members(x);
    let mut gens = vec![x];
    let mut sub = g.closure(&gens, None).unwrap();
    for y in members {
        if sub.binary_search(&y).is_err() {
            gens.push(y);
            sub = g.closure(&gens, None).unwrap();
            if sub.len() == g.len() {
                break;
            }
        }
    }
    sub.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_group, GenSet, Permutation};

    fn perm(degree: usize, cycles: &[&[u32]]) -> GroupElement {
        GroupElement::Perm(Permutation::from_cycles(degree, cycles).unwrap())
    }

    #[test]
    fn simplicity() {
        let a5 = GenSet::new("A5", vec![perm(5, &[&[0, 1, 2]]), perm(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        let s5 = GenSet::new("S5", vec![perm(5, &[&[0, 1]]), perm(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        let z7 = GenSet::new("Z7", vec![perm(7, &[&[0, 1, 2, 3, 4, 5, 6]])]).unwrap();
        assert!(is_simple(&enumerate_group(&a5, 100).unwrap()));
        assert!(!is_simple(&enumerate_group(&s5, 200).unwrap()));
        assert!(is_simple(&enumerate_group(&z7, 10).unwrap()));
    }

    #[test]
    fn searches_in_s5() {
        let s5 = GenSet::new("S5", vec![perm(5, &[&[0, 1]]), perm(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        let g = enumerate_group(&s5, 200).unwrap();
        assert!(find_subgroup_by_type(&g, TargetSpec::S5, u64::MAX).is_found());
        assert!(find_subgroup_by_type(&g, TargetSpec::Psl27, u64::MAX).is_absent());
        assert!(find_subgroup_by_type(&g, TargetSpec::Q8, u64::MAX).is_absent());
        assert!(find_subgroup_by_type(&g, TargetSpec::Cyclic(6), u64::MAX).is_found());
        assert!(find_subgroup_by_type(&g, TargetSpec::Cyclic(7), u64::MAX).is_absent());
        assert!(matches!(
            find_subgroup_by_type(&g, TargetSpec::Psl27, 3),
            SubgroupSearch::Indeterminate { examined: 3, .. }
        ));
    }
}
