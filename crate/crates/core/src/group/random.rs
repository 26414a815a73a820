use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::par;

use super::{element_order, GenSet, GroupElement, GroupError, Spectrum};

const MIN_SLOTS: usize = 10;
const SCRAMBLE: usize = 64;

/// `n` pseudo-random elements of `<gens>` by product replacement with an
/// accumulator. The generator is ChaCha8 seeded from `seed`, so output is
/// reproducible for a fixed seed.
pub fn random_elements(gens: &GenSet, n: usize, seed: u64) -> Vec<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = gens.generators();
    let slots = MIN_SLOTS.max(base.len() + 1);
    let mut state: Vec<GroupElement> = (0..slots).map(|i| base[i % base.len()].clone()).collect();
    let mut acc = gens.shape().identity();
    let step = |rng: &mut ChaCha8Rng, state: &mut Vec<GroupElement>, acc: &mut GroupElement| {
        let i = rng.random_range(0..slots);
        let mut j = rng.random_range(0..slots - 1);
        if j >= i {
            j += 1;
        }
        state[i] = if rng.random_bool(0.5) {
            state[i].mul(&state[j]).expect("same shape")
        } else {
            state[j].mul(&state[i]).expect("same shape")
        };
        *acc = acc.mul(&state[i]).expect("same shape");
    };
    for _ in 0..SCRAMBLE {
        step(&mut rng, &mut state, &mut acc);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        step(&mut rng, &mut state, &mut acc);
        out.push(acc.clone());
    }
    out
}

/// Orders of `budget` random elements. The result is a subset of the true
/// spectrum and is flagged as sampled.
pub fn sampled_spectrum(gens: &GenSet, budget: usize, seed: u64, order_cap: u64) -> Result<Spectrum, GroupError> {
    let sample = random_elements(gens, budget, seed);
    let orders: Vec<Result<u64, GroupError>> = par::map_slice(&sample, |x| element_order(x, order_cap));
    let mut out = orders.into_iter().collect::<Result<Vec<u64>, _>>()?;
    out.push(1);
    out.sort_unstable();
    out.dedup();
    Ok(Spectrum { orders: out, exact: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_group, Permutation, Shape};

    fn a5() -> GenSet {
        let p = |c: &[&[u32]]| GroupElement::Perm(Permutation::from_cycles(5, c).unwrap());
        GenSet::new("A5", vec![p(&[&[0, 1, 2]]), p(&[&[0, 1, 2, 3, 4]])]).unwrap()
    }

    #[test]
    fn identity_generator_gives_identity() {
        let id = Shape::Permutation { degree: 4 }.identity();
        let g = GenSet::new("trivial", vec![id.clone()]).unwrap();
        assert_eq!(random_elements(&g, 1, 9), vec![id]);
    }

    #[test]
    fn samples_stay_in_group_and_repeat_per_seed() {
        let gens = a5();
        let g = enumerate_group(&gens, 100).unwrap();
        let xs = random_elements(&gens, 10_000, 3);
        assert!(xs.iter().all(|x| g.index_of(x).is_some()));
        assert!(xs.iter().all(|x| [1, 2, 3, 5].contains(&element_order(x, 100).unwrap())));
        assert_eq!(xs[..50], random_elements(&gens, 50, 3)[..]);
        let s = sampled_spectrum(&gens, 2000, 1, 100).unwrap();
        assert_eq!(s.orders, vec![1, 2, 3, 5]);
    }
}
