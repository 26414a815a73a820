//! Exact arithmetic over `Z/m`, `GF(p^2)` and small dense square matrices
//! over those rings.
//!
//! Ring elements are carried as `u32` codes in `0..size`. For `Z/m` the code
//! is the canonical representative; for `GF(p^2) = F_p[x]/(x^2 + bx + c)` the
//! code of `a0 + a1*x` is `a0 + a1*p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(Modulus, Modulus),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("matrix is singular (determinant is not a unit)")]
    Singular,
    #[error("symplectic check needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModulusKind {
    Prime,
    PrimePower { p: u32, r: u32 },
    /// Any other `m >= 2`; handled componentwise only through CRT arguments.
    Composite,
    /// `GF(p^2)` presented as `F_p[x]/(x^2 + b x + c)`.
    Quadratic { p: u32, b: u32, c: u32 },
}

/// The ring an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    size: u32,
    kind: ModulusKind,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor `n` into `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, r))` when `q = p^r` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, r)] => Some((*p, *r)),
        _ => None,
    }
}

impl Modulus {
    /// The ring `Z/m`, classified as prime, prime power or composite.
    pub fn integers(m: u32) -> Result<Self, RingError> {
        if m < 2 {
            return Err(RingError::InvalidModulus(format!("Z/{m} needs m >= 2")));
        }
        let kind = match prime_power(m as u64) {
            Some((_, 1)) => ModulusKind::Prime,
            Some((p, r)) => ModulusKind::PrimePower { p: p as u32, r },
            None => ModulusKind::Composite,
        };
        Ok(Modulus { size: m, kind })
    }

    pub fn prime_field(p: u32) -> Result<Self, RingError> {
        if !is_prime(p as u64) {
            return Err(RingError::InvalidModulus(format!("{p} is not prime")));
        }
        Ok(Modulus { size: p, kind: ModulusKind::Prime })
    }

    /// `GF(p^2)` with the canonical defining polynomial: the smallest monic
    /// `x^2 + bx + c` without roots in `F_p`, ordered lexicographically by
    /// `(b, c)`.
    pub fn quadratic(p: u32) -> Result<Self, RingError> {
        if !is_prime(p as u64) {
            return Err(RingError::InvalidModulus(format!("{p} is not prime")));
        }
        for b in 0..p {
            for c in 0..p {
                if quadratic_is_irreducible(p, b, c) {
                    return Ok(Modulus { size: p * p, kind: ModulusKind::Quadratic { p, b, c } });
                }
            }
        }
        unreachable!("every prime field has an irreducible quadratic")
    }

    pub fn quadratic_with(p: u32, b: u32, c: u32) -> Result<Self, RingError> {
        if !is_prime(p as u64) {
            return Err(RingError::InvalidModulus(format!("{p} is not prime")));
        }
        if b >= p || c >= p || !quadratic_is_irreducible(p, b, c) {
            return Err(RingError::InvalidModulus(format!("x^2+{b}x+{c} is reducible over F_{p}")));
        }
        Ok(Modulus { size: p * p, kind: ModulusKind::Quadratic { p, b, c } })
    }

    /// The field with `q` elements, for `q = p` or `q = p^2`.
    pub fn field(q: u32) -> Result<Self, RingError> {
        match prime_power(q as u64) {
            Some((p, 1)) => Modulus::prime_field(p as u32),
            Some((p, 2)) => Modulus::quadratic(p as u32),
            _ => Err(RingError::InvalidModulus(format!(
                "GF({q}) is not supported (only p and p^2)"
            ))),
        }
    }

    /// Number of ring elements.
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn kind(&self) -> ModulusKind {
        self.kind
    }

    pub fn characteristic(&self) -> u32 {
        match self.kind {
            ModulusKind::Prime | ModulusKind::Composite => self.size,
            ModulusKind::PrimePower { .. } => self.size,
            ModulusKind::Quadratic { p, .. } => p,
        }
    }

    /// The prime `p` for prime, prime-power and quadratic kinds.
    pub fn prime(&self) -> Option<u32> {
        match self.kind {
            ModulusKind::Prime => Some(self.size),
            ModulusKind::PrimePower { p, .. } | ModulusKind::Quadratic { p, .. } => Some(p),
            ModulusKind::Composite => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, ModulusKind::Prime | ModulusKind::Quadratic { .. })
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    /// Reduce an integer into the ring (into the prime subfield for `GF(p^2)`).
    pub fn reduce(&self, v: i64) -> u32 {
        let m = self.characteristic() as i64;
        v.rem_euclid(m) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            ModulusKind::Quadratic { p, .. } => {
                let (a0, a1) = (a % p, a / p);
                let (b0, b1) = (b % p, b / p);
                (a0 + b0) % p + ((a1 + b1) % p) * p
            }
            _ => {
                let s = a + b;
                if s >= self.size {
                    s - self.size
                } else {
                    s
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.kind {
            ModulusKind::Quadratic { p, .. } => {
                let (a0, a1) = (a % p, a / p);
                (p - a0) % p + ((p - a1) % p) * p
            }
            _ => {
                if a == 0 {
                    0
                } else {
                    self.size - a
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            ModulusKind::Quadratic { p, b: pb, c: pc } => {
                let p64 = p as u64;
                let (a0, a1) = ((a % p) as u64, (a / p) as u64);
                let (b0, b1) = ((b % p) as u64, (b / p) as u64);
                let hi = a1 * b1 % p64;
                // x^2 = -pb*x - pc
                let c0 = (a0 * b0 + (p64 - pc as u64) * hi) % p64;
                let c1 = (a0 * b1 + a1 * b0 + (p64 - pb as u64) * hi) % p64;
                (c0 + c1 * p64) as u32
            }
            _ => ((a as u64 * b as u64) % self.size as u64) as u32,
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u32) -> bool {
        self.inv(a).is_some()
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: u32) -> Option<u32> {
        match self.kind {
            ModulusKind::Quadratic { .. } => {
                if a == 0 {
                    None
                } else {
                    Some(self.pow(a, self.size as u64 - 2))
                }
            }
            _ => {
                let (g, x, _) = ext_gcd(a as i64, self.size as i64);
                if g != 1 {
                    None
                } else {
                    Some(x.rem_euclid(self.size as i64) as u32)
                }
            }
        }
    }

    /// `a -> a^p`. The identity on prime kinds.
    pub fn frobenius(&self, a: u32) -> u32 {
        match self.kind {
            ModulusKind::Quadratic { p, .. } => self.pow(a, p as u64),
            _ => a,
        }
    }

    /// Elements of the prime subfield embedded as codes.
    pub fn in_prime_subfield(&self, a: u32) -> bool {
        match self.kind {
            ModulusKind::Quadratic { p, .. } => a < p,
            _ => true,
        }
    }

    /// A generator of the multiplicative group (fields only).
    pub fn primitive_element(&self) -> Option<u32> {
        if !self.is_field() {
            return None;
        }
        let order = self.size as u64 - 1;
        let primes: Vec<u64> = factorize(order).into_iter().map(|(p, _)| p).collect();
        (1..self.size).find(|&a| primes.iter().all(|&r| self.pow(a, order / r) != 1))
    }

    pub fn residue(&self, value: u32) -> Residue {
        Residue::new(value, *self)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModulusKind::Quadratic { p, b, c } => write!(f, "GF({p}^2)[x^2+{b}x+{c}]"),
            _ => write!(f, "Z/{}", self.size),
        }
    }
}

fn quadratic_is_irreducible(p: u32, b: u32, c: u32) -> bool {
    let p = p as u64;
    (0..p).all(|x| !(x * x + b as u64 * x + c as u64).is_multiple_of(p))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// A reduced ring element together with its ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u32, modulus: Modulus) -> Self {
        assert!(value < modulus.size(), "code {value} out of range for {modulus}");
        Residue { value, modulus }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn inverse(&self) -> Option<Residue> {
        self.modulus.inv(self.value).map(|v| Residue::new(v, self.modulus))
    }

    pub fn pow(&self, e: u64) -> Residue {
        Residue::new(self.modulus.pow(self.value, e), self.modulus)
    }

    pub fn is_unit(&self) -> bool {
        self.modulus.is_unit(self.value)
    }

    fn check(&self, other: &Residue) {
        assert_eq!(self.modulus, other.modulus, "residues from different rings");
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        Residue::new(self.modulus.add(self.value, rhs.value), self.modulus)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        Residue::new(self.modulus.sub(self.value, rhs.value), self.modulus)
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        Residue::new(self.modulus.mul(self.value, rhs.value), self.modulus)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue::new(self.modulus.neg(self.value), self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense `n x n` matrix over one ring, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    dim: usize,
    modulus: Modulus,
    entries: Vec<u32>,
}

impl SquareMatrix {
    pub fn from_codes(dim: usize, modulus: Modulus, entries: Vec<u32>) -> Result<Self, RingError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(RingError::BadDimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(RingError::EntryCount { expected: dim * dim, got: entries.len() });
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= modulus.size()) {
            return Err(RingError::InvalidModulus(format!("code {bad} out of range for {modulus}")));
        }
        Ok(SquareMatrix { dim, modulus, entries })
    }

    /// Build from integer rows, reducing each entry (into the prime subfield
    /// for quadratic extensions).
    pub fn from_rows(modulus: Modulus, rows: &[&[i64]]) -> Result<Self, RingError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(RingError::DimensionMismatch(dim, row.len()));
            }
            entries.extend(row.iter().map(|&v| modulus.reduce(v)));
        }
        SquareMatrix::from_codes(dim, modulus, entries)
    }

    pub fn identity(dim: usize, modulus: Modulus) -> Self {
        Self::scalar(dim, modulus, 1)
    }

    pub fn scalar(dim: usize, modulus: Modulus, value: u32) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = value;
        }
        SquareMatrix { dim, modulus, entries }
    }

    pub fn zero(dim: usize, modulus: Modulus) -> Self {
        SquareMatrix { dim, modulus, entries: vec![0; dim * dim] }
    }

    /// The standard alternating form `J = [[0, I_g], [-I_g, 0]]`.
    pub fn standard_symplectic_form(g: usize, modulus: Modulus) -> Self {
        let dim = 2 * g;
        let mut j = SquareMatrix::zero(dim, modulus);
        let minus_one = modulus.neg(1);
        for i in 0..g {
            j.set(i, g + i, 1);
            j.set(g + i, i, minus_one);
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Residue {
        Residue::new(self.get(i, j), self.modulus)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.modulus.size());
        self.entries[i * self.dim + j] = v;
    }

    fn compatible(&self, other: &SquareMatrix) -> Result<(), RingError> {
        if self.modulus != other.modulus {
            return Err(RingError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.dim != other.dim {
            return Err(RingError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &SquareMatrix) -> Result<SquareMatrix, RingError> {
        self.compatible(other)?;
        let mut out = vec![0; self.dim * self.dim];
        mul_codes(self.modulus, self.dim, &self.entries, &other.entries, &mut out);
        Ok(SquareMatrix { dim: self.dim, modulus: self.modulus, entries: out })
    }

    pub fn mat_add(&self, other: &SquareMatrix) -> Result<SquareMatrix, RingError> {
        self.compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.modulus.add(a, b))
            .collect();
        Ok(SquareMatrix { dim: self.dim, modulus: self.modulus, entries })
    }

    pub fn scale(&self, s: u32) -> SquareMatrix {
        let entries = self.entries.iter().map(|&a| self.modulus.mul(a, s)).collect();
        SquareMatrix { dim: self.dim, modulus: self.modulus, entries }
    }

    pub fn pow(&self, mut e: u64) -> SquareMatrix {
        let mut base = self.clone();
        let mut acc = SquareMatrix::identity(self.dim, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mat_mul(&base).expect("same ring");
            }
            base = base.mat_mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.dim;
        let mut out = SquareMatrix::zero(n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise Frobenius `a -> a^p` (conjugation on `GF(p^2)`).
    pub fn conjugate(&self) -> SquareMatrix {
        let entries = self.entries.iter().map(|&a| self.modulus.frobenius(a)).collect();
        SquareMatrix { dim: self.dim, modulus: self.modulus, entries }
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar_value(1)
    }

    fn is_scalar_value(&self, v: u32) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == if i == j { v } else { 0 }))
    }

    /// `Some(lambda)` when the matrix is `lambda * I`.
    pub fn scalar_value(&self) -> Option<u32> {
        let v = self.get(0, 0);
        self.is_scalar_value(v).then_some(v)
    }

    /// Exact determinant. Fields use Gaussian elimination; other rings use a
    /// division-free expansion over column subsets.
    pub fn determinant(&self) -> Residue {
        let v = if self.modulus.is_field() {
            det_field(self.modulus, self.dim, &self.entries)
        } else {
            det_division_free(self.modulus, self.dim, &self.entries)
        };
        Residue::new(v, self.modulus)
    }

    pub fn mat_inverse(&self) -> Result<SquareMatrix, RingError> {
        let det = self.determinant();
        let det_inv = det.inverse().ok_or(RingError::Singular)?;
        if self.modulus.is_field() {
            return Ok(inverse_field(self));
        }
        // adjugate / det
        let n = self.dim;
        if n == 1 {
            return Ok(SquareMatrix::scalar(1, self.modulus, det_inv.value()));
        }
        let m = self.modulus;
        let mut out = SquareMatrix::zero(n, m);
        let mut minor = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            for j in 0..n {
                minor.clear();
                for r in (0..n).filter(|&r| r != i) {
                    for c in (0..n).filter(|&c| c != j) {
                        minor.push(self.get(r, c));
                    }
                }
                let mut cof = det_division_free(m, n - 1, &minor);
                if (i + j) % 2 == 1 {
                    cof = m.neg(cof);
                }
                // adj(A)[j][i] = cofactor(i, j)
                out.set(j, i, m.mul(cof, det_inv.value()));
            }
        }
        Ok(out)
    }

    /// Whether `A^T J A = J` for the standard form `J` of rank `g`.
    pub fn symplectic_check(&self, g: usize) -> Result<bool, RingError> {
        if self.dim % 2 == 1 {
            return Err(RingError::OddDimension(self.dim));
        }
        if self.dim != 2 * g {
            return Err(RingError::DimensionMismatch(self.dim, 2 * g));
        }
        let j = SquareMatrix::standard_symplectic_form(g, self.modulus);
        let lhs = self.transpose().mat_mul(&j)?.mat_mul(self)?;
        Ok(lhs == j)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SquareMatrix) -> Result<SquareMatrix, RingError> {
        if self.modulus != other.modulus {
            return Err(RingError::ModulusMismatch(self.modulus, other.modulus));
        }
        let n = self.dim + other.dim;
        if n > MAX_DIM {
            return Err(RingError::BadDimension(n));
        }
        let mut out = SquareMatrix::zero(n, self.modulus);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                out.set(self.dim + i, self.dim + j, other.get(i, j));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `out = a * b` for row-major `n x n` code arrays. Generic over the code
/// width so that packed group-element keys can reuse it.
#[inline]
pub fn mul_codes<T>(m: Modulus, n: usize, a: &[T], b: &[T], out: &mut [T])
where
    T: Copy + Into<u32> + TryFrom<u32>,
    <T as TryFrom<u32>>::Error: fmt::Debug,
{
    match m.kind() {
        ModulusKind::Quadratic { .. } => {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u32;
                    for k in 0..n {
                        let x: u32 = a[i * n + k].into();
                        let y: u32 = b[k * n + j].into();
                        if x != 0 && y != 0 {
                            acc = m.add(acc, m.mul(x, y));
                        }
                    }
                    out[i * n + j] = T::try_from(acc).unwrap();
                }
            }
        }
        _ => {
            let size = m.size() as u64;
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u64;
                    for k in 0..n {
                        let x: u32 = a[i * n + k].into();
                        let y: u32 = b[k * n + j].into();
                        acc += x as u64 * y as u64;
                    }
                    out[i * n + j] = T::try_from((acc % size) as u32).unwrap();
                }
            }
        }
    }
}

fn det_field(m: Modulus, n: usize, entries: &[u32]) -> u32 {
    let mut a = entries.to_vec();
    let mut det = 1u32;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            det = m.neg(det);
        }
        let pv = a[col * n + col];
        det = m.mul(det, pv);
        let pinv = m.inv(pv).expect("nonzero in a field");
        for r in col + 1..n {
            let f = m.mul(a[r * n + col], pinv);
            if f == 0 {
                continue;
            }
            for k in col..n {
                let t = m.mul(f, a[col * n + k]);
                a[r * n + k] = m.sub(a[r * n + k], t);
            }
        }
    }
    det
}

/// Laplace expansion along rows, memoised over column subsets: `O(n 2^n)`
/// ring operations, no division.
pub fn det_division_free(m: Modulus, n: usize, entries: &[u32]) -> u32 {
    if n == 0 {
        return 1;
    }
    let full = 1usize << n;
    let mut f = vec![0u32; full];
    f[0] = 1;
    for s in 1..full {
        let row = s.count_ones() as usize - 1;
        let mut acc = 0u32;
        for j in 0..n {
            if s & (1 << j) == 0 {
                continue;
            }
            let prev = f[s & !(1 << j)];
            if prev == 0 {
                continue;
            }
            let term = m.mul(entries[row * n + j], prev);
            // sign: number of chosen columns greater than j
            let above = (s >> (j + 1)).count_ones();
            acc = if above % 2 == 0 { m.add(acc, term) } else { m.sub(acc, term) };
        }
        f[s] = acc;
    }
    f[full - 1]
}

fn inverse_field(a: &SquareMatrix) -> SquareMatrix {
    let n = a.dim;
    let m = a.modulus;
    let w = 2 * n;
    let mut aug = vec![0u32; n * w];
    for i in 0..n {
        for j in 0..n {
            aug[i * w + j] = a.get(i, j);
        }
        aug[i * w + n + i] = 1;
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| aug[r * w + col] != 0).expect("invertible");
        if piv != col {
            for k in 0..w {
                aug.swap(piv * w + k, col * w + k);
            }
        }
        let pinv = m.inv(aug[col * w + col]).expect("nonzero");
        for k in 0..w {
            aug[col * w + k] = m.mul(aug[col * w + k], pinv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = aug[r * w + col];
            if f == 0 {
                continue;
            }
            for k in 0..w {
                let t = m.mul(f, aug[col * w + k]);
                aug[r * w + k] = m.sub(aug[r * w + k], t);
            }
        }
    }
    let mut out = SquareMatrix::zero(n, m);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug[i * w + n + j]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(m: u32) -> Modulus {
        Modulus::integers(m).unwrap()
    }

    #[test]
    fn modulus_classification() {
        assert_eq!(z(7).kind(), ModulusKind::Prime);
        assert_eq!(z(9).kind(), ModulusKind::PrimePower { p: 3, r: 2 });
        assert_eq!(z(12).kind(), ModulusKind::Composite);
        assert!(Modulus::integers(1).is_err());
        assert!(Modulus::quadratic_with(5, 0, 1).is_err()); // x^2+1 = (x-2)(x+2) mod 5
        assert!(Modulus::field(8).is_err());
    }

    #[test]
    fn canonical_quadratic_polynomials() {
        // smallest (b, c) with x^2 + bx + c irreducible
        assert_eq!(Modulus::quadratic(2).unwrap().kind(), ModulusKind::Quadratic { p: 2, b: 1, c: 1 });
        assert_eq!(Modulus::quadratic(3).unwrap().kind(), ModulusKind::Quadratic { p: 3, b: 0, c: 1 });
        assert_eq!(Modulus::quadratic(5).unwrap().kind(), ModulusKind::Quadratic { p: 5, b: 0, c: 2 });
        assert_eq!(Modulus::quadratic(7).unwrap().kind(), ModulusKind::Quadratic { p: 7, b: 0, c: 1 });
    }

    #[test]
    fn identity_times_matrix() {
        let m = z(5);
        let a = SquareMatrix::from_rows(m, &[&[1, 2, 3], &[0, 4, 1], &[2, 2, 2]]).unwrap();
        let i3 = SquareMatrix::identity(3, m);
        assert_eq!(i3.mat_mul(&a).unwrap(), a);
    }

    #[test]
    fn shear_squares_to_identity_mod_two() {
        let s = SquareMatrix::from_rows(z(2), &[&[1, 1], &[0, 1]]).unwrap();
        assert!(s.mat_mul(&s).unwrap().is_identity());
    }

    #[test]
    fn one_plus_two_a_squared_over_z4() {
        // (I + 2A)^2 = I + 4A + 4A^2 = I mod 4 with A = I
        let m = z(4);
        let x = SquareMatrix::from_rows(m, &[&[3, 0], &[0, 3]]).unwrap();
        assert!(x.mat_mul(&x).unwrap().is_identity());
        // and for a non-scalar A
        let a = SquareMatrix::from_rows(m, &[&[1, 1], &[2, 3]]).unwrap();
        let x = SquareMatrix::identity(2, m).mat_add(&a.scale(2)).unwrap();
        assert!(x.mat_mul(&x).unwrap().is_identity());
    }

    #[test]
    fn mismatch_errors() {
        let a = SquareMatrix::identity(2, z(5));
        let b = SquareMatrix::identity(2, z(7));
        let c = SquareMatrix::identity(3, z(5));
        assert!(matches!(a.mat_mul(&b), Err(RingError::ModulusMismatch(..))));
        assert!(matches!(a.mat_mul(&c), Err(RingError::DimensionMismatch(2, 3))));
        assert!(SquareMatrix::from_codes(13, z(5), vec![0; 169]).is_err());
    }

    #[test]
    fn determinants() {
        for n in 1..=5 {
            assert_eq!(SquareMatrix::identity(n, z(6)).determinant().value(), 1);
        }
        let swap = SquareMatrix::from_rows(z(7), &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(swap.determinant().value(), 6);
    }

    #[test]
    fn crt_recombined_sl2_z6_has_det_one() {
        // [[1,1],[0,1]] mod 2 and [[2,0],[0,2]] mod 3 glue to [[5,3],[0,5]] mod 6
        let m2 = SquareMatrix::from_rows(z(2), &[&[1, 1], &[0, 1]]).unwrap();
        let m3 = SquareMatrix::from_rows(z(3), &[&[2, 0], &[0, 2]]).unwrap();
        assert_eq!(m2.determinant().value(), 1);
        assert_eq!(m3.determinant().value(), 1);
        let glued: Vec<i64> = (0..4)
            .map(|k| {
                let (a, b) = (m2.entries()[k] as i64, m3.entries()[k] as i64);
                (0..6).find(|x| x % 2 == a && x % 3 == b).unwrap()
            })
            .collect();
        let g = SquareMatrix::from_rows(z(6), &[&glued[0..2], &glued[2..4]]).unwrap();
        assert_eq!(g.determinant().value(), 1);
    }

    #[test]
    fn transvection_inverse() {
        for p in [2, 3, 5, 7, 11] {
            let m = z(p);
            let t = SquareMatrix::from_rows(m, &[&[1, 1], &[0, 1]]).unwrap();
            let expected = SquareMatrix::from_rows(m, &[&[1, p as i64 - 1], &[0, 1]]).unwrap();
            assert_eq!(t.mat_inverse().unwrap(), expected);
        }
        assert!(SquareMatrix::identity(3, z(9)).mat_inverse().unwrap().is_identity());
    }

    #[test]
    fn inverse_of_one_plus_3a_over_z9() {
        let m = z(9);
        let a = SquareMatrix::from_rows(m, &[&[1, 2], &[4, 1]]).unwrap();
        let i = SquareMatrix::identity(2, m);
        let x = i.mat_add(&a.scale(3)).unwrap();
        let expected = i.mat_add(&a.scale(m.neg(3))).unwrap();
        assert_eq!(x.mat_inverse().unwrap(), expected);
        assert!(x.mat_mul(&expected).unwrap().is_identity());
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = SquareMatrix::from_rows(z(4), &[&[2, 0], &[0, 1]]).unwrap();
        assert_eq!(a.mat_inverse(), Err(RingError::Singular));
    }

    #[test]
    fn symplectic_membership() {
        let m = z(3);
        for g in 1..=3 {
            assert!(SquareMatrix::identity(2 * g, m).symplectic_check(g).unwrap());
            let j = SquareMatrix::standard_symplectic_form(g, m);
            assert!(j.symplectic_check(g).unwrap());
        }
        // e1 -> e1 + e2 shears across the two hyperbolic pairs (e1,f1), (e2,f2)
        let mut shear = SquareMatrix::identity(4, m);
        shear.set(1, 0, 1);
        assert!(!shear.symplectic_check(2).unwrap());
        // the shear within one pair, [[1,1],[0,1]] on (e1, f1), is symplectic
        let mut within = SquareMatrix::identity(4, m);
        within.set(0, 2, 1);
        assert!(within.symplectic_check(2).unwrap());
        assert_eq!(SquareMatrix::identity(3, m).symplectic_check(1), Err(RingError::OddDimension(3)));
    }

    #[test]
    fn frobenius_is_order_two_fixing_prime_field() {
        for p in [2u32, 3, 5, 7] {
            let f = Modulus::quadratic(p).unwrap();
            let mut fixed = 0;
            let mut moved = false;
            for a in 0..f.size() {
                let fa = f.frobenius(a);
                assert_eq!(f.frobenius(fa), a);
                for b in 0..f.size() {
                    assert_eq!(f.frobenius(f.mul(a, b)), f.mul(fa, f.frobenius(b)));
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(fa, f.frobenius(b)));
                }
                if fa == a {
                    fixed += 1;
                    assert!(f.in_prime_subfield(a));
                } else {
                    moved = true;
                }
            }
            assert_eq!(fixed, p);
            assert!(moved);
        }
    }

    #[test]
    fn division_free_determinant_agrees_with_elimination() {
        let m = z(7);
        let a = SquareMatrix::from_rows(m, &[&[1, 2, 3, 4], &[0, 5, 6, 1], &[2, 2, 0, 3], &[6, 1, 1, 1]]).unwrap();
        assert_eq!(det_field(m, 4, a.entries()), det_division_free(m, 4, a.entries()));
    }

    fn any_modulus() -> impl Strategy<Value = Modulus> {
        prop_oneof![
            prop::sample::select(vec![2u32, 3, 5, 7, 11, 13]).prop_map(|p| Modulus::integers(p).unwrap()),
            prop::sample::select(vec![4u32, 8, 9, 25, 27]).prop_map(|q| Modulus::integers(q).unwrap()),
            prop::sample::select(vec![6u32, 10, 12]).prop_map(|q| Modulus::integers(q).unwrap()),
            prop::sample::select(vec![2u32, 3, 5, 7]).prop_map(|p| Modulus::quadratic(p).unwrap()),
        ]
    }

    fn matrix(m: Modulus, n: usize) -> impl Strategy<Value = SquareMatrix> {
        prop::collection::vec(0..m.size(), n * n)
            .prop_map(move |e| SquareMatrix::from_codes(n, m, e).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(m in any_modulus(), a in 0u32..10_000, b in 0u32..10_000, c in 0u32..10_000) {
            let (a, b, c) = (a % m.size(), b % m.size(), c % m.size());
            prop_assert_eq!(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)));
            prop_assert_eq!(m.add(m.add(a, b), c), m.add(a, m.add(b, c)));
            prop_assert_eq!(m.mul(a, m.add(b, c)), m.add(m.mul(a, b), m.mul(a, c)));
            prop_assert_eq!(m.mul(a, b), m.mul(b, a));
            prop_assert_eq!(m.add(a, m.neg(a)), 0);
            if let Some(inv) = m.inv(a) {
                prop_assert_eq!(m.mul(a, inv), 1);
            }
        }

        #[test]
        fn determinant_is_multiplicative(
            (a, b) in any_modulus().prop_flat_map(|m| (1usize..=4).prop_flat_map(move |n| (matrix(m, n), matrix(m, n))))
        ) {
            let ab = a.mat_mul(&b).unwrap();
            prop_assert_eq!(ab.determinant(), a.determinant() * b.determinant());
        }

        #[test]
        fn inverse_round_trip(a in any_modulus().prop_flat_map(|m| (1usize..=5).prop_flat_map(move |n| matrix(m, n)))) {
            match a.mat_inverse() {
                Ok(inv) => {
                    prop_assert!(a.mat_mul(&inv).unwrap().is_identity());
                    prop_assert!(inv.mat_mul(&a).unwrap().is_identity());
                }
                Err(e) => {
                    prop_assert_eq!(e, RingError::Singular);
                    prop_assert!(!a.determinant().is_unit());
                }
            }
        }
    }

    #[test]
    fn thousand_random_invertibles_per_modulus() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in [z(2), z(5), z(4), z(9), z(12), Modulus::quadratic(3).unwrap(), Modulus::quadratic(5).unwrap()] {
            let mut done = 0;
            while done < 1000 {
                let n = rng.random_range(1..=4);
                let e: Vec<u32> = (0..n * n).map(|_| rng.random_range(0..m.size())).collect();
                let a = SquareMatrix::from_codes(n, m, e).unwrap();
                if let Ok(inv) = a.mat_inverse() {
                    assert!(a.mat_mul(&inv).unwrap().is_identity(), "{a} over {m}");
                    done += 1;
                }
            }
        }
    }
}
