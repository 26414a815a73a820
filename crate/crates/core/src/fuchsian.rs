//! Fuchsian signatures, Riemann–Hurwitz genus, subgroup signatures from coset
//! actions, and exhaustive epimorphism search for triangle and one-period
//! genus-one signatures.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{coset_action, EnumeratedGroup, GenSet, GroupElement, GroupError};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuchsianError {
    #[error("cannot parse signature {0:?}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a surface kernel: {0}")]
    NotSurfaceKernel(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("invalid epimorphism: {0}")]
    InvalidEpimorphism(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `(genus; m_1, ..., m_k)` with every period at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub genus: u32,
    pub periods: Vec<u32>,
}

impl Signature {
    pub fn new(genus: u32, periods: Vec<u32>) -> Result<Self, FuchsianError> {
        if let Some(bad) = periods.iter().find(|&&m| m < 2) {
            return Err(FuchsianError::Parse(format!("period {bad} < 2")));
        }
        Ok(Signature { genus, periods })
    }

    pub fn triangle(a: u32, b: u32, c: u32) -> Result<Self, FuchsianError> {
        Signature::new(0, vec![a, b, c])
    }

    /// Periods sorted ascending.
    pub fn normalized(&self) -> Signature {
        let mut periods = self.periods.clone();
        periods.sort_unstable();
        Signature { genus: self.genus, periods }
    }

    pub fn is_hyperbolic(&self) -> bool {
        measure(self).is_positive()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.genus)?;
        if self.periods.is_empty() {
            return write!(f, "-)");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.periods.len() {
            let m = self.periods[i];
            let run = self.periods[i..].iter().take_while(|&&x| x == m).count();
            if run >= 4 {
                parts.push(format!("{m}^{run}"));
            } else {
                parts.extend(std::iter::repeat_n(m.to_string(), run));
            }
            i += run;
        }
        write!(f, "{})", parts.join(","))
    }
}

fn superscript_to_ascii(c: char) -> Option<char> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|s| s == c).map(|d| char::from(b'0' + d as u8))
}

impl FromStr for Signature {
    type Err = FuchsianError;

    /// Accepts `(g; m1,m2,...)`, `(g;-)`, `(a,b,c)` and exponents `2^4` or `2⁴`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || FuchsianError::Parse(text.to_string());
        let mut compact = String::new();
        let mut in_exponent = false;
        for c in text.chars().filter(|c| !c.is_whitespace()) {
            match superscript_to_ascii(c) {
                Some(d) => {
                    if !in_exponent {
                        compact.push('^');
                    }
                    compact.push(d);
                    in_exponent = true;
                }
                None => {
                    compact.push(c);
                    in_exponent = false;
                }
            }
        }
        let inner = compact.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
        let (genus, list) = match inner.split_once(';') {
            Some((g, rest)) => (g.parse::<u32>().map_err(|_| bad())?, rest),
            None => (0, inner),
        };
        let mut periods = Vec::new();
        if list != "-" && !list.is_empty() {
            for tok in list.split(',') {
                match tok.split_once('^') {
                    Some((m, e)) => {
                        let m: u32 = m.parse().map_err(|_| bad())?;
                        let e: usize = e.parse().map_err(|_| bad())?;
                        periods.extend(std::iter::repeat_n(m, e));
                    }
                    None => periods.push(tok.parse().map_err(|_| bad())?),
                }
            }
        }
        Signature::new(genus, periods)
    }
}

/// `mu = 2g - 2 + sum(1 - 1/m_i)`.
pub fn measure(sig: &Signature) -> BigRational {
    let mut mu = BigRational::from_integer(BigInt::from(2 * sig.genus as i64 - 2));
    for &m in &sig.periods {
        mu += BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m));
    }
    mu
}

/// Genus of the surface covering a signature with a group of order `n`.
pub fn kernel_genus(sig: &Signature, n: u64) -> Result<u64, FuchsianError> {
    let mu = measure(sig);
    if !mu.is_positive() {
        return Err(FuchsianError::NotSurfaceKernel(format!("{sig} is not hyperbolic")));
    }
    let euler = mu * BigRational::from_integer(BigInt::from(n));
    if !euler.is_integer() {
        return Err(FuchsianError::NotSurfaceKernel(format!("{n} * mu{sig} = {euler} is not an integer")));
    }
    let two_g_minus_2 = euler.to_integer();
    if (&two_g_minus_2 % 2u32) != BigInt::zero() {
        return Err(FuchsianError::NotSurfaceKernel(format!("{n} * mu{sig} = {two_g_minus_2} is odd")));
    }
    let g = (two_g_minus_2 / 2u32 + 1u32).to_u64().expect("fits");
    if g < 2 {
        return Err(FuchsianError::NotSurfaceKernel(format!("genus {g} < 2 for {sig} and order {n}")));
    }
    Ok(g)
}

/// The searchable signature shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SearchShape {
    Triangle([u32; 3]),
    GenusOne(u32),
}

fn search_shape(sig: &Signature) -> Result<SearchShape, FuchsianError> {
    match (sig.genus, sig.periods.as_slice()) {
        (0, [a, b, c]) => Ok(SearchShape::Triangle([*a, *b, *c])),
        (1, [m]) => Ok(SearchShape::GenusOne(*m)),
        _ => Err(FuchsianError::Unsupported(format!(
            "epimorphism search handles (0; a,b,c) and (1; m), got {sig}"
        ))),
    }
}

/// A surjection from a Fuchsian group onto an enumerated group, given by the
/// images of the canonical generators as element indices.
///
/// Triangle signatures store `[x1, x2, x3]` with `x1 x2 x3 = 1`. Signature
/// `(1; m)` stores `[a, b, x]` with `x = b a b^-1 a^-1`, so `[a, b] x = 1`.
#[derive(Debug, Clone)]
pub struct Epimorphism<'g> {
    pub signature: Signature,
    pub group: &'g EnumeratedGroup,
    pub images: Vec<u32>,
    pub surface_kernel: bool,
}

impl<'g> Epimorphism<'g> {
    /// Build from the free generator images (`x1, x2` or `a, b`), checking
    /// surjectivity.
    pub fn from_generators(
        signature: Signature,
        group: &'g EnumeratedGroup,
        free: [u32; 2],
    ) -> Result<Self, FuchsianError> {
        let shape = search_shape(&signature)?;
        let images = complete_images(group, shape, free);
        if group.closure(&free, None).expect("no limit").len() != group.len() {
            return Err(FuchsianError::InvalidEpimorphism(format!(
                "images do not generate {}",
                group.gens().label()
            )));
        }
        let orders = group.element_orders();
        let elliptic = elliptic_indices(shape, &images);
        let mut surface_kernel = true;
        for (x, &m) in elliptic.iter().zip(&signature.periods) {
            let o = orders[*x as usize];
            if m % o != 0 {
                return Err(FuchsianError::InvalidEpimorphism(format!(
                    "image of order {o} for period {m}"
                )));
            }
            surface_kernel &= o == m;
        }
        Ok(Epimorphism { signature, group, images, surface_kernel })
    }

    /// Images of the elliptic generators, one per period.
    pub fn elliptic_images(&self) -> Vec<u32> {
        let shape = search_shape(&self.signature).expect("checked at construction");
        elliptic_indices(shape, &self.images)
    }

    pub fn image_elements(&self) -> Vec<GroupElement> {
        self.images.iter().map(|&i| self.group.element(i)).collect()
    }

    /// Same images conjugated by element `c`: `x -> c x c^-1`.
    pub fn conjugated(&self, c: u32) -> Epimorphism<'g> {
        let ci = self.group.inverse(c);
        let images = self.images.iter().map(|&x| self.group.mul(self.group.mul(c, x), ci)).collect();
        Epimorphism { images, ..self.clone() }
    }

    /// Whether the stored images satisfy the long relation.
    pub fn satisfies_relation(&self) -> bool {
        let g = self.group;
        let i = &self.images;
        let id = g.identity();
        match search_shape(&self.signature) {
            Ok(SearchShape::Triangle(_)) => g.mul(g.mul(i[0], i[1]), i[2]) == id,
            Ok(SearchShape::GenusOne(_)) => {
                let comm = g.mul(g.mul(i[0], i[1]), g.mul(g.inverse(i[0]), g.inverse(i[1])));
                g.mul(comm, i[2]) == id
            }
            Err(_) => false,
        }
    }

    /// Signature of the preimage of `<h_gens>`: periods from the cycle types
    /// of the elliptic images on the cosets, genus from counting cycles
    /// (`2 - 2g' = d(2 - 2g) - sum(d - cycles)`).
    pub fn preimage_signature(&self, h_gens: &GenSet) -> Result<Signature, FuchsianError> {
        let action = coset_action(self.group, h_gens)?;
        let d = action.degree as i64;
        let mut periods = Vec::new();
        let mut deficit = 0i64;
        for (&x, &m) in self.elliptic_images().iter().zip(&self.signature.periods) {
            let perm = action.permutation_of(self.group, x);
            let cycles = perm.cycle_type();
            deficit += d - cycles.len() as i64;
            for c in cycles {
                let c = c as u32;
                if c < m {
                    if m % c != 0 {
                        return Err(FuchsianError::Internal(format!("cycle length {c} does not divide period {m}")));
                    }
                    periods.push(m / c);
                }
            }
        }
        periods.sort_unstable();
        let euler = d * (2 - 2 * self.signature.genus as i64) - deficit;
        if euler > 2 || (2 - euler) % 2 != 0 {
            return Err(FuchsianError::Internal(format!("Euler characteristic {euler} for preimage of index {d}")));
        }
        Ok(Signature { genus: ((2 - euler) / 2) as u32, periods })
    }

    /// Index of `<h_gens>` and whether `measure(preimage) = index * measure(signature)`.
    pub fn check_measure_multiplicativity(&self, h_gens: &GenSet) -> Result<(u64, bool), FuchsianError> {
        let action = coset_action(self.group, h_gens)?;
        let pre = self.preimage_signature(h_gens)?;
        let d = action.degree as u64;
        let scaled = measure(&self.signature) * BigRational::from_integer(BigInt::from(d));
        Ok((d, measure(&pre) == scaled))
    }
}

fn complete_images(g: &EnumeratedGroup, shape: SearchShape, free: [u32; 2]) -> Vec<u32> {
    let [a, b] = free;
    match shape {
        SearchShape::Triangle(_) => vec![a, b, g.inverse(g.mul(a, b))],
        SearchShape::GenusOne(_) => vec![a, b, g.mul(g.mul(b, a), g.mul(g.inverse(b), g.inverse(a)))],
    }
}

fn elliptic_indices(shape: SearchShape, images: &[u32]) -> Vec<u32> {
    match shape {
        SearchShape::Triangle(_) => images.to_vec(),
        SearchShape::GenusOne(_) => vec![images[2]],
    }
}

/// All epimorphisms of a triangle or `(1; m)` signature onto `g`.
///
/// With `surface_kernel` the elliptic images have exact orders; otherwise the
/// last elliptic order only has to divide its period. With `up_to_conjugacy`
/// one representative per inner-conjugacy class is returned: the first image
/// is a class representative and the second is least in its orbit under the
/// centraliser of the first. Results are sorted by image tuple.
pub fn find_epimorphisms<'g>(
    sig: &Signature,
    g: &'g EnumeratedGroup,
    surface_kernel: bool,
    up_to_conjugacy: bool,
) -> Result<Vec<Epimorphism<'g>>, FuchsianError> {
    let shape = search_shape(sig)?;
    let orders = g.element_orders();
    let n = g.len() as u32;
    let firsts: Vec<u32> = {
        let pool: Vec<u32> = if up_to_conjugacy { g.classes().reps.clone() } else { (0..n).collect() };
        match shape {
            SearchShape::Triangle([m1, ..]) => pool.into_iter().filter(|&x| orders[x as usize] == m1).collect(),
            SearchShape::GenusOne(_) => pool,
        }
    };
    let seconds: Vec<u32> = match shape {
        SearchShape::Triangle([_, m2, _]) => (0..n).filter(|&x| orders[x as usize] == m2).collect(),
        SearchShape::GenusOne(_) => (0..n).collect(),
    };
    let last_ok = |o: u32, m: u32| if surface_kernel { o == m } else { m.is_multiple_of(o) };

    let per_first: Vec<Vec<Vec<u32>>> = par::map_slice(&firsts, |&a| {
        let centraliser: Vec<(u32, u32)> = if up_to_conjugacy {
            (0..n).filter(|&c| g.mul(c, a) == g.mul(a, c)).map(|c| (c, g.inverse(c))).collect()
        } else {
            Vec::new()
        };
        let mut found = Vec::new();
        for &b in &seconds {
            let images = complete_images(g, shape, [a, b]);
            let ok = match shape {
                SearchShape::Triangle([_, _, m3]) => last_ok(orders[images[2] as usize], m3),
                SearchShape::GenusOne(m) => last_ok(orders[images[2] as usize], m),
            };
            if !ok {
                continue;
            }
            if up_to_conjugacy && centraliser.iter().any(|&(c, ci)| g.mul(g.mul(c, b), ci) < b) {
                continue;
            }
            if g.closure(&[a, b], None).expect("no limit").len() != g.len() {
                continue;
            }
            found.push(images);
        }
        found
    });
    let mut all: Vec<Vec<u32>> = per_first.into_iter().flatten().collect();
    all.sort();
    Ok(all
        .into_iter()
        .map(|images| {
            let surface = elliptic_indices(shape, &images)
                .iter()
                .zip(&sig.periods)
                .all(|(&x, &m)| orders[x as usize] == m);
            Epimorphism { signature: sig.clone(), group: g, images, surface_kernel: surface }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::standard_generators;
    use crate::group::{enumerate_group, GroupElement};

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    fn group(s: &str) -> EnumeratedGroup {
        enumerate_group(&standard_generators(&s.parse().unwrap()).unwrap(), 1_000_000).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(sig("(2,3,7)"), Signature { genus: 0, periods: vec![2, 3, 7] });
        assert_eq!(sig("(1; 2^4)"), Signature { genus: 1, periods: vec![2; 4] });
        assert_eq!(sig("(1;2⁴)"), sig("(1;2,2,2,2)"));
        assert_eq!(sig("(0;2¹⁰)").periods.len(), 10);
        assert_eq!(sig("(2;-)"), Signature { genus: 2, periods: vec![] });
        assert_eq!(sig("(1;2,2,2,2)").to_string(), "(1; 2^4)");
        assert_eq!(sig("(1;3,3)").to_string(), "(1; 3,3)");
        assert_eq!(sig("(0;7,7,7)").to_string(), "(0; 7,7,7)");
        assert_eq!(sig("(2;-)").to_string(), "(2; -)");
        assert!("(0;1,2)".parse::<Signature>().is_err());
        assert!("0;2,3".parse::<Signature>().is_err());
    }

    #[test]
    fn measures() {
        assert_eq!(measure(&sig("(2,3,7)")), rat(1, 42));
        assert_eq!(measure(&sig("(1;2,2,2,2)")), rat(2, 1));
        assert_eq!(measure(&sig("(2;-)")), rat(2, 1));
        assert!(!sig("(2,3,6)").is_hyperbolic());
        assert!(measure(&sig("(2,3,5)")).is_negative());
    }

    #[test]
    fn kernel_genera() {
        assert_eq!(kernel_genus(&sig("(2,3,7)"), 168).unwrap(), 3);
        assert_eq!(kernel_genus(&sig("(2,5,5)"), 60).unwrap(), 4);
        assert_eq!(kernel_genus(&sig("(2,7,14)"), 14).unwrap(), 3);
        assert_eq!(kernel_genus(&sig("(2,16,16)"), 16).unwrap(), 4);
        assert!(kernel_genus(&sig("(2,3,7)"), 100).is_err());
        assert!(kernel_genus(&sig("(2,3,6)"), 12).is_err());
    }

    fn cyclic_sub(g: &EnumeratedGroup, order: u32) -> GenSet {
        let i = g.element_orders().iter().position(|&o| o == order).unwrap();
        GenSet::new(format!("Z{order}"), vec![g.element(i as u32)]).unwrap()
    }

    #[test]
    fn klein_quartic_preimages() {
        let g = group("psl(2,7)");
        let epis = find_epimorphisms(&sig("(2,3,7)"), &g, true, true).unwrap();
        assert_eq!(epis.len(), 2);
        for e in &epis {
            assert!(e.satisfies_relation());
            assert_eq!(e.preimage_signature(&cyclic_sub(&g, 2)).unwrap(), sig("(1;2^4)"));
            assert_eq!(e.preimage_signature(&cyclic_sub(&g, 3)).unwrap(), sig("(1;3,3)"));
            assert_eq!(e.preimage_signature(&cyclic_sub(&g, 7)).unwrap(), sig("(0;7,7,7)"));
        }
        let all = find_epimorphisms(&sig("(2,3,7)"), &g, true, false).unwrap();
        assert_eq!(all.len(), 2 * 168);
    }

    #[test]
    fn cyclic_targets() {
        let z8 = group("z(8)");
        assert!(find_epimorphisms(&sig("(2,3,7)"), &z8, false, false).unwrap().is_empty());
        let epis = find_epimorphisms(&sig("(4,8,8)"), &z8, true, false).unwrap();
        assert!(!epis.is_empty());
        let c = z8.generator_indices()[0];
        let want = [z8.pow(c, 2), c, z8.pow(c, 5)];
        assert!(epis.iter().any(|e| e.images == want));
        let h = GenSet::new("Z2", vec![z8.element(z8.pow(c, 4))]).unwrap();
        for e in &epis {
            assert_eq!(e.preimage_signature(&h).unwrap(), sig("(1;2^4)"));
        }
    }

    #[test]
    fn quaternion_genus_one() {
        let q8 = group("q8");
        let epis = find_epimorphisms(&sig("(1;2)"), &q8, true, false).unwrap();
        assert!(!epis.is_empty());
        let i = q8.generator_indices()[0];
        let j = q8.generator_indices()[1];
        let e = Epimorphism::from_generators(sig("(1;2)"), &q8, [i, j]).unwrap();
        assert!(e.surface_kernel && e.satisfies_relation());
        assert_eq!(q8.element_orders()[e.images[2] as usize], 2);
        let minus_one = q8.element(q8.pow(i, 2));
        let centre = GenSet::new("Z2", vec![minus_one]).unwrap();
        assert_eq!(e.preimage_signature(&centre).unwrap(), sig("(1;2^4)"));
        let trivial = GenSet::new("1", vec![q8.element(q8.identity())]).unwrap();
        let genus = kernel_genus(&sig("(1;2)"), 8).unwrap() as u32;
        assert_eq!(genus, 3);
        assert_eq!(e.preimage_signature(&trivial).unwrap(), Signature { genus, periods: vec![] });
    }

    #[test]
    fn unsupported_shapes() {
        let g = group("z(4)");
        assert!(matches!(
            find_epimorphisms(&sig("(0;2,2,2,2)"), &g, true, true),
            Err(FuchsianError::Unsupported(_))
        ));
        let bad = GroupElement::Perm(crate::group::Permutation::identity(3));
        let h = GenSet::new("x", vec![bad]).unwrap();
        let e = find_epimorphisms(&sig("(4,4,2)"), &g, true, false).unwrap();
        assert!(e[0].preimage_signature(&h).is_err());
    }
}
