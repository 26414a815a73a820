use std::fmt;

use crate::ring::{mul_codes, Modulus, SquareMatrix};

use super::{GroupError, Permutation};

/// The kind of element a group is made of. All generators of one group share
/// a shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Permutation { degree: usize },
    Matrix { dim: usize, modulus: Modulus },
    /// Matrices up to scalar multiples.
    Projective { dim: usize, modulus: Modulus },
}

/// A permutation, a matrix, or a matrix modulo scalars.
///
/// Projective elements are stored normalised: the first entry that is a unit
/// is scaled to 1, so structural equality is equality in the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Perm(Permutation),
    Matrix(SquareMatrix),
    Projective(SquareMatrix),
}

impl GroupElement {
    pub fn projective(m: SquareMatrix) -> Self {
        GroupElement::Projective(normalize(&m))
    }

    pub fn shape(&self) -> Shape {
        match self {
            GroupElement::Perm(p) => Shape::Permutation { degree: p.degree() },
            GroupElement::Matrix(m) => Shape::Matrix { dim: m.dim(), modulus: m.modulus() },
            GroupElement::Projective(m) => Shape::Projective { dim: m.dim(), modulus: m.modulus() },
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        match (self, other) {
            (GroupElement::Perm(a), GroupElement::Perm(b)) if a.degree() == b.degree() => {
                Ok(GroupElement::Perm(a.compose(b)))
            }
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) => Ok(GroupElement::Matrix(a.mat_mul(b)?)),
            (GroupElement::Projective(a), GroupElement::Projective(b)) => {
                Ok(GroupElement::projective(a.mat_mul(b)?))
            }
            _ => Err(GroupError::ShapeMismatch(self.shape(), other.shape())),
        }
    }

    pub fn inverse(&self) -> Result<GroupElement, GroupError> {
        Ok(match self {
            GroupElement::Perm(p) => GroupElement::Perm(p.inverse()),
            GroupElement::Matrix(m) => GroupElement::Matrix(m.mat_inverse()?),
            GroupElement::Projective(m) => GroupElement::projective(m.mat_inverse()?),
        })
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Perm(p) => p.is_identity(),
            GroupElement::Matrix(m) | GroupElement::Projective(m) => m.is_identity(),
        }
    }

    pub fn pow(&self, mut e: u64) -> GroupElement {
        let mut base = self.clone();
        let mut acc = self.shape().identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            base = base.mul(&base).expect("same shape");
            e >>= 1;
        }
        acc
    }

    pub fn as_perm(&self) -> Option<&Permutation> {
        match self {
            GroupElement::Perm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&SquareMatrix> {
        match self {
            GroupElement::Matrix(m) | GroupElement::Projective(m) => Some(m),
            GroupElement::Perm(_) => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Perm(p) => write!(f, "{p}"),
            GroupElement::Matrix(m) => write!(f, "{m}"),
            GroupElement::Projective(m) => write!(f, "{m}~"),
        }
    }
}

/// Least `k >= 1` with `x^k = 1` (for projective elements: `x^k` scalar).
pub fn element_order(x: &GroupElement, cap: u64) -> Result<u64, GroupError> {
    if cap == 0 {
        return Err(GroupError::Input("order cap must be at least 1".into()));
    }
    if let GroupElement::Perm(p) = x {
        let o = p.order();
        return if o > cap { Err(GroupError::CapExceeded { cap }) } else { Ok(o) };
    }
    let mut y = x.clone();
    let mut k = 1;
    while !y.is_identity() {
        k += 1;
        if k > cap {
            return Err(GroupError::CapExceeded { cap });
        }
        y = y.mul(x)?;
    }
    Ok(k)
}

fn normalize(m: &SquareMatrix) -> SquareMatrix {
    let r = m.modulus();
    let u = m.entries().iter().copied().find(|&e| r.is_unit(e)).expect("invertible matrix has a unit entry");
    if u == 1 {
        m.clone()
    } else {
        m.scale(r.inv(u).unwrap())
    }
}

/// Largest symbol count that fits the byte-per-symbol keys used by enumeration.
pub(crate) const KEY_SYMBOLS: u32 = 256;

impl Shape {
    pub fn identity(&self) -> GroupElement {
        match self {
            Shape::Permutation { degree } => GroupElement::Perm(Permutation::identity(*degree)),
            Shape::Matrix { dim, modulus } => GroupElement::Matrix(SquareMatrix::identity(*dim, *modulus)),
            Shape::Projective { dim, modulus } => {
                GroupElement::Projective(SquareMatrix::identity(*dim, *modulus))
            }
        }
    }

    fn packed_f2(&self) -> bool {
        match self {
            Shape::Matrix { dim, modulus } | Shape::Projective { dim, modulus } => {
                modulus.size() == 2 && *dim <= 8
            }
            Shape::Permutation { .. } => false,
        }
    }

    /// Whether elements fit the compact keys used for enumeration.
    pub fn check_enumerable(&self) -> Result<(), GroupError> {
        let symbols = match self {
            Shape::Permutation { degree } => *degree as u32,
            Shape::Matrix { modulus, .. } | Shape::Projective { modulus, .. } => modulus.size(),
        };
        if symbols > KEY_SYMBOLS {
            return Err(GroupError::Unsupported(format!(
                "{self} has {symbols} symbols; enumeration supports at most {KEY_SYMBOLS}"
            )));
        }
        Ok(())
    }

    pub(crate) fn key_len(&self) -> usize {
        match self {
            Shape::Permutation { degree } => *degree,
            Shape::Matrix { dim, .. } | Shape::Projective { dim, .. } => {
                if self.packed_f2() {
                    *dim
                } else {
                    dim * dim
                }
            }
        }
    }

    pub(crate) fn encode(&self, x: &GroupElement) -> Vec<u8> {
        match x {
            GroupElement::Perm(p) => p.images().iter().map(|&v| v as u8).collect(),
            GroupElement::Matrix(m) | GroupElement::Projective(m) => {
                if self.packed_f2() {
                    let n = m.dim();
                    (0..n)
                        .map(|i| (0..n).fold(0u8, |row, j| row | ((m.get(i, j) as u8) << j)))
                        .collect()
                } else {
                    m.entries().iter().map(|&v| v as u8).collect()
                }
            }
        }
    }

    pub(crate) fn decode(&self, key: &[u8]) -> GroupElement {
        match self {
            Shape::Permutation { .. } => GroupElement::Perm(
                Permutation::from_images(key.iter().map(|&v| v as u32).collect()).expect("valid key"),
            ),
            Shape::Matrix { dim, modulus } | Shape::Projective { dim, modulus } => {
                let n = *dim;
                let entries: Vec<u32> = if self.packed_f2() {
                    (0..n * n).map(|k| ((key[k / n] >> (k % n)) & 1) as u32).collect()
                } else {
                    key.iter().map(|&v| v as u32).collect()
                };
                let m = SquareMatrix::from_codes(n, *modulus, entries).expect("valid key");
                if matches!(self, Shape::Matrix { .. }) {
                    GroupElement::Matrix(m)
                } else {
                    GroupElement::Projective(m)
                }
            }
        }
    }

    pub(crate) fn identity_key(&self) -> Vec<u8> {
        self.encode(&self.identity())
    }

    /// `out = a * b` on keys.
    #[inline]
    pub(crate) fn mul_keys(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        match self {
            Shape::Permutation { .. } => {
                for (o, &bi) in out.iter_mut().zip(b) {
                    *o = a[bi as usize];
                }
            }
            _ if self.packed_f2() => {
                for (o, &row) in out.iter_mut().zip(a) {
                    let mut acc = 0u8;
                    let mut bits = row;
                    while bits != 0 {
                        let k = bits.trailing_zeros() as usize;
                        acc ^= b[k];
                        bits &= bits - 1;
                    }
                    *o = acc;
                }
            }
            Shape::Matrix { dim, modulus } => mul_codes(*modulus, *dim, a, b, out),
            Shape::Projective { dim, modulus } => {
                mul_codes(*modulus, *dim, a, b, out);
                normalize_key(*modulus, out);
            }
        }
    }
}

fn normalize_key(m: Modulus, key: &mut [u8]) {
    let Some(u) = key.iter().map(|&e| e as u32).find(|&e| m.is_unit(e)) else {
        return;
    };
    if u != 1 {
        let s = m.inv(u).unwrap();
        for e in key.iter_mut() {
            *e = m.mul(*e as u32, s) as u8;
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Permutation { degree } => write!(f, "permutations of degree {degree}"),
            Shape::Matrix { dim, modulus } => write!(f, "{dim}x{dim} matrices over {modulus}"),
            Shape::Projective { dim, modulus } => write!(f, "{dim}x{dim} matrices mod scalars over {modulus}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_basic_elements() {
        let p = GroupElement::Perm(Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap());
        assert_eq!(element_order(&p, 100).unwrap(), 6);
        assert_eq!(element_order(&Shape::Permutation { degree: 3 }.identity(), 1).unwrap(), 1);
        let m5 = Modulus::integers(5).unwrap();
        let t = GroupElement::Matrix(SquareMatrix::from_rows(m5, &[&[1, 1], &[0, 1]]).unwrap());
        // repeated-multiplication oracle
        let mut y = t.clone();
        let mut k = 1;
        while !y.is_identity() {
            y = y.mul(&t).unwrap();
            k += 1;
        }
        assert_eq!(element_order(&t, 100).unwrap(), k);
        assert_eq!(k, 5);
        assert!(matches!(element_order(&t, 4), Err(GroupError::CapExceeded { cap: 4 })));
    }

    #[test]
    fn projective_order_counts_scalars_as_identity() {
        let m3 = Modulus::integers(3).unwrap();
        let minus = SquareMatrix::from_rows(m3, &[&[2, 0], &[0, 2]]).unwrap();
        assert!(GroupElement::projective(minus.clone()).is_identity());
        assert_eq!(element_order(&GroupElement::Matrix(minus), 10).unwrap(), 2);
        let i = SquareMatrix::from_rows(m3, &[&[0, 1], &[2, 0]]).unwrap();
        assert_eq!(element_order(&GroupElement::Matrix(i.clone()), 10).unwrap(), 4);
        assert_eq!(element_order(&GroupElement::projective(i), 10).unwrap(), 2);
    }

    #[test]
    fn key_round_trip_and_product() {
        let m2 = Modulus::integers(2).unwrap();
        let a = SquareMatrix::from_rows(m2, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).unwrap();
        let b = SquareMatrix::from_rows(m2, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).unwrap();
        let shape = Shape::Matrix { dim: 3, modulus: m2 };
        let (ka, kb) = (shape.encode(&GroupElement::Matrix(a.clone())), shape.encode(&GroupElement::Matrix(b.clone())));
        assert_eq!(ka.len(), 3);
        let mut out = vec![0; 3];
        shape.mul_keys(&ka, &kb, &mut out);
        assert_eq!(shape.decode(&out), GroupElement::Matrix(a.mat_mul(&b).unwrap()));

        let m7 = Modulus::integers(7).unwrap();
        let c = SquareMatrix::from_rows(m7, &[&[3, 1], &[2, 5]]).unwrap();
        let d = SquareMatrix::from_rows(m7, &[&[6, 0], &[4, 2]]).unwrap();
        let pshape = Shape::Projective { dim: 2, modulus: m7 };
        let (kc, kd) = (
            pshape.encode(&GroupElement::projective(c.clone())),
            pshape.encode(&GroupElement::projective(d.clone())),
        );
        let mut out = vec![0; 4];
        pshape.mul_keys(&kc, &kd, &mut out);
        assert_eq!(pshape.decode(&out), GroupElement::projective(c.mat_mul(&d).unwrap()));
    }
}
