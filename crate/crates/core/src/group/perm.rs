use std::fmt;

use num_integer::Integer;

use super::GroupError;

/// A permutation of `0..degree` stored as its image array.
///
/// Products compose right to left: `(a * b)(i) = a(b(i))`, matching matrix
/// multiplication acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(GroupError::Input(format!("image array {images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from disjoint cycles on points `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, GroupError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x as usize >= degree || y as usize >= degree {
                    return Err(GroupError::Input(format!("point outside 0..{degree} in cycle {cycle:?}")));
                }
                if touched[x as usize] {
                    return Err(GroupError::Input(format!("point {x} repeated across cycles")));
                }
                touched[x as usize] = true;
                images[x as usize] = y;
            }
        }
        Permutation::from_images(images)
    }

    /// Parse cycle notation such as `"(1,2,3)(4,5)"`. Points are numbered from
    /// `base` (1 for the usual GAP/ATLAS convention); `"()"` is the identity.
    pub fn parse_cycles(degree: usize, text: &str, base: u32) -> Result<Self, GroupError> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| GroupError::Input(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| GroupError::Input(format!("unclosed cycle in {text:?}")))?;
            let body = open[..close].trim();
            if !body.is_empty() {
                let mut cycle = Vec::new();
                for tok in body.split([',', ' ']).filter(|t| !t.is_empty()) {
                    let v: u32 = tok
                        .parse()
                        .map_err(|_| GroupError::Input(format!("bad point {tok:?} in {text:?}")))?;
                    if v < base {
                        return Err(GroupError::Input(format!("point {v} below base {base}")));
                    }
                    cycle.push(v - base);
                }
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Permutation::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Cycles of length at least 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut x = self.images[start] as usize;
            while x != start {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// All cycle lengths including fixed points, ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let fixed = self.fixed_points();
        let mut lens: Vec<usize> = std::iter::repeat_n(1, fixed).collect();
        lens.extend(self.cycles().iter().map(|c| c.len()));
        lens.sort_unstable();
        lens
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_order() {
        let p = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.cycle_type(), vec![2, 3]);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert!(!p.is_even());
        assert!(Permutation::identity(4).is_identity());
        assert_eq!(Permutation::identity(4).order(), 1);
    }

    #[test]
    fn composition_is_right_to_left() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // a(b(1)) = a(2) = 2, a(b(2)) = a(1) = 0
        let ab = a.compose(&b);
        assert_eq!(ab.images(), &[1, 2, 0]);
        assert!(ab.compose(&ab.inverse()).is_identity());
    }

    #[test]
    fn parse_gap_notation() {
        let p = Permutation::parse_cycles(6, "(1,2,3)(4,6)", 1).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 5, 4, 3]);
        assert!(Permutation::parse_cycles(3, "()", 1).unwrap().is_identity());
        assert!(Permutation::parse_cycles(3, "(1,4)", 1).is_err());
        assert!(Permutation::parse_cycles(3, "(1,2)(2,3)", 1).is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }
}
