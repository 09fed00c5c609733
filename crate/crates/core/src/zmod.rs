//! Exact linear algebra over `Z/m`.
//!
//! Row spans of matrices over `Z/m` are subgroups of `(Z/m)^n`, and for composite `m`
//! ordinary echelon forms do not identify them uniquely. Everything here is therefore
//! routed through the Howell normal form, which is canonical: two matrices have the
//! same row span exactly when their Howell forms coincide.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus. Residues stay below `2^31`, so every product fits in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    if (2..=MAX_MODULUS).contains(&m) {
        Ok(())
    } else {
        Err(Error::InvalidModulus(m))
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a * b) % m
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid on non-negative integers: returns `(g, s, t)` with `s*a + t*b = g`.
fn xgcd(a: u64, b: u64) -> (u64, i64, i64) {
    let (mut r0, mut r1) = (a as i64, b as i64);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 as u64, s0, t0)
}

/// Multiplicative inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, s, _) = xgcd(a % n, n);
    (g == 1).then(|| reduce_i64(s, n))
}

/// A unit `u` of `Z/m` with `u*a ≡ gcd(a, m) (mod m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    let a1 = a / g;
    let m1 = m / g;
    let base = inv_mod(a1 % m1, m1).expect("a/g and m/g are coprime");
    // base + k*m1 stays a valid inverse mod m1; pick the first one that is a unit mod m.
    let mut u = if base == 0 { m1 % m } else { base };
    loop {
        if gcd(u, m) == 1 {
            return u;
        }
        u += m1;
        debug_assert!(u < m + m1 * 64, "no normalizing unit found");
    }
}

/// A vector over `Z/m` with every entry reduced into `[0, m)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZmVector {
    modulus: u64,
    entries: Vec<u64>,
}

impl ZmVector {
    /// Builds a vector, reducing every entry.
    pub fn new(modulus: u64, entries: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::from_reduced(modulus, entries.into_iter().map(|x| x % modulus).collect()))
    }

    pub fn from_i64(modulus: u64, entries: &[i64]) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::from_reduced(
            modulus,
            entries.iter().map(|&x| reduce_i64(x, modulus)).collect(),
        ))
    }

    pub(crate) fn from_reduced(modulus: u64, entries: Vec<u64>) -> Self {
        debug_assert!(entries.iter().all(|&x| x < modulus));
        Self { modulus, entries }
    }

    pub fn zero(modulus: u64, len: usize) -> Self {
        Self { modulus, entries: vec![0; len] }
    }

    /// The `i`-th standard basis vector of `(Z/m)^len`.
    pub fn unit_vector(modulus: u64, len: usize, i: usize) -> Self {
        let mut v = Self::zero(modulus, len);
        v.entries[i] = 1;
        v
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        let m = self.modulus;
        Self::from_reduced(
            m,
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| add_mod(a, b, m)).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        let m = self.modulus;
        Self::from_reduced(
            m,
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| sub_mod(a, b, m)).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        Self::from_reduced(m, self.entries.iter().map(|&a| neg_mod(a, m)).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        let c = c % m;
        Self::from_reduced(m, self.entries.iter().map(|&a| mul_mod(a, c, m)).collect())
    }

    fn check_compatible(&self, modulus: u64, len: usize) -> Result<()> {
        if self.modulus != modulus {
            return Err(Error::ModulusMismatch { expected: modulus, found: self.modulus });
        }
        if self.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: self.len() });
        }
        Ok(())
    }
}

impl fmt::Debug for ZmVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.entries, self.modulus)
    }
}

/// A dense row-major matrix over `Z/m`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZmMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZmMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        Self { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut a = Self::zeros(modulus, n, n);
        for i in 0..n {
            a.data[i * n + i] = 1 % modulus;
        }
        a
    }

    /// Builds a matrix from nested rows, reducing entries. All rows must have `cols` entries.
    pub fn from_rows(modulus: u64, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        check_modulus(modulus)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row.iter().map(|&x| reduce_i64(x, modulus)));
        }
        Ok(Self { modulus, rows: rows.len(), cols, data })
    }

    pub fn from_vectors(modulus: u64, cols: usize, rows: &[ZmVector]) -> Result<Self> {
        check_modulus(modulus)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for v in rows {
            v.check_compatible(modulus, cols)?;
            data.extend_from_slice(v.entries());
        }
        Ok(Self { modulus, rows: rows.len(), cols, data })
    }

    pub(crate) fn from_raw(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < modulus));
        Self { modulus, rows, cols, data }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> ZmVector {
        ZmVector::from_reduced(self.modulus, self.row(r).to_vec())
    }

    pub fn column_vector(&self, c: usize) -> ZmVector {
        ZmVector::from_reduced(self.modulus, (0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vector(&self, v: &ZmVector) -> Result<ZmVector> {
        v.check_compatible(self.modulus, self.cols)?;
        let m = self.modulus;
        let out = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v.entries())
                    .fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, m), m))
            })
            .collect();
        Ok(ZmVector::from_reduced(m, out))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { expected: self.modulus, found: other.modulus });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let m = self.modulus;
        let mut out = Self::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = add_mod(out.data[idx], mul_mod(a, other.get(l, j), m), m);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { expected: self.modulus, found: other.modulus });
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let m = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, m)).collect();
        Ok(Self::from_raw(m, self.rows, self.cols, data))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for ZmMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZmMatrix {}x{} mod {}", self.rows, self.cols, self.modulus)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// A subgroup of `(Z/m)^n` held as its Howell normal form.
///
/// Generators are in echelon form, each pivot divides `m`, entries above a pivot are
/// reduced below it, and zero rows are dropped. Equal subgroups have equal values.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupBasis {
    modulus: u64,
    dim: usize,
    generators: Vec<ZmVector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for SubgroupBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupBasis")
            .field("modulus", &self.modulus)
            .field("dim", &self.dim)
            .field("generators", &self.generators.iter().map(|g| g.entries()).collect::<Vec<_>>())
            .finish()
    }
}

impl SubgroupBasis {
    pub fn trivial(modulus: u64, dim: usize) -> Self {
        Self { modulus, dim, generators: Vec::new(), pivots: Vec::new() }
    }

    /// The subgroup generated by arbitrary vectors.
    pub fn span(modulus: u64, dim: usize, vectors: &[ZmVector]) -> Result<Self> {
        Ok(howell_form(&ZmMatrix::from_vectors(modulus, dim, vectors)?))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ZmVector] {
        &self.generators
    }

    /// Pivot column of each generator, in order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Additive order of each generator's pivot entry, `m / pivot`.
    pub fn pivot_orders(&self) -> Vec<u64> {
        self.generators
            .iter()
            .zip(&self.pivots)
            .map(|(g, &p)| self.modulus / g.entries()[p])
            .collect()
    }

    fn check_vector(&self, v: &ZmVector) -> Result<()> {
        v.check_compatible(self.modulus, self.dim)
    }

    fn check_peer(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { expected: self.modulus, found: other.modulus });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Reduces `v` against the generators. Returns the remainder; zero iff `v` is a member.
    fn reduce(&self, v: &ZmVector) -> Option<ZmVector> {
        let m = self.modulus;
        let mut w = v.entries().to_vec();
        for (g, &p) in self.generators.iter().zip(&self.pivots) {
            if w[..p].iter().any(|&x| x != 0) {
                return None;
            }
            let piv = g.entries()[p];
            if !w[p].is_multiple_of(piv) {
                return None;
            }
            let q = w[p] / piv;
            if q != 0 {
                for (wi, &gi) in w.iter_mut().zip(g.entries()) {
                    *wi = sub_mod(*wi, mul_mod(q, gi, m), m);
                }
            }
        }
        Some(ZmVector::from_reduced(m, w))
    }

    pub fn contains(&self, v: &ZmVector) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.reduce(v).is_some_and(|r| r.is_zero()))
    }

    /// True when `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &Self) -> Result<bool> {
        self.check_peer(other)?;
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_peer(other)?;
        Ok(self == other)
    }

    /// Number of elements, the product of the pivot orders.
    pub fn cardinality(&self) -> BigUint {
        self.pivot_orders().into_iter().fold(BigUint::from(1u32), |acc, o| acc * o)
    }

    /// `log_m |H|` when every pivot is a unit, i.e. the subgroup is free of that rank.
    pub fn free_rank(&self) -> Option<usize> {
        self.pivot_orders().iter().all(|&o| o == self.modulus).then_some(self.generators.len())
    }
}

/// Convenience wrappers matching the usual operation names.
pub fn subgroup_contains(b: &SubgroupBasis, v: &ZmVector) -> Result<bool> {
    b.contains(v)
}

pub fn subgroup_equal(a: &SubgroupBasis, b: &SubgroupBasis) -> Result<bool> {
    a.equals(b)
}

pub fn subgroup_cardinality(b: &SubgroupBasis) -> BigUint {
    b.cardinality()
}

/// Howell normal form of the row span of `a`.
///
/// Pivots are chosen column by column, left to right; within a column the rows are folded
/// into the current pivot row by unimodular 2x2 gcd transforms in increasing row order.
pub fn howell_form(a: &ZmMatrix) -> SubgroupBasis {
    let m = a.modulus;
    let n = a.cols;
    let mut rows: Vec<Vec<u64>> =
        (0..a.rows).map(|r| a.row(r).to_vec()).filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut pivots = Vec::new();
    let mut p = 0;
    for col in 0..n {
        if p >= rows.len() {
            break;
        }
        for i in p + 1..rows.len() {
            let b = rows[i][col];
            if b == 0 {
                continue;
            }
            let a0 = rows[p][col];
            let (g, s, t) = xgcd(a0, b);
            let s = reduce_i64(s, m);
            let t = reduce_i64(t, m);
            let u = reduce_i64(-((b / g) as i64), m);
            let v = (a0 / g) % m;
            let (top, rest) = rows.split_at_mut(i);
            let rp = &mut top[p];
            let ri = &mut rest[0];
            for c in col..n {
                let x = rp[c];
                let y = ri[c];
                rp[c] = add_mod(mul_mod(s, x, m), mul_mod(t, y, m), m);
                ri[c] = add_mod(mul_mod(u, x, m), mul_mod(v, y, m), m);
            }
        }
        let lead = rows[p][col];
        if lead == 0 {
            continue;
        }
        let unit = normalizing_unit(lead, m);
        if unit != 1 {
            for x in rows[p][col..].iter_mut() {
                *x = mul_mod(*x, unit, m);
            }
        }
        let piv = rows[p][col];
        debug_assert_eq!(m % piv, 0);
        for i in 0..p {
            let q = rows[i][col] / piv;
            if q != 0 {
                let (top, rest) = rows.split_at_mut(p);
                for (x, &y) in top[i][col..].iter_mut().zip(&rest[0][col..]) {
                    *x = sub_mod(*x, mul_mod(q, y, m), m);
                }
            }
        }
        // The annihilator multiple of the pivot row vanishes in this column; its tail must
        // stay in the span, so it rejoins the rows still to be processed.
        let ann = m / piv;
        if ann != m {
            let extra: Vec<u64> = rows[p].iter().map(|&x| mul_mod(x, ann, m)).collect();
            if extra.iter().any(|&x| x != 0) {
                rows.push(extra);
            }
        }
        pivots.push(col);
        p += 1;
    }
    rows.truncate(p);
    let generators = rows.into_iter().map(|r| ZmVector::from_reduced(m, r)).collect();
    SubgroupBasis { modulus: m, dim: n, generators, pivots }
}

/// The subgroup `{v : a·v = 0}` of `(Z/m)^cols`.
pub fn kernel(a: &ZmMatrix) -> SubgroupBasis {
    let m = a.modulus;
    let c = a.cols;
    // Kernel of `a` equals kernel of its Howell form; shrinking first keeps the
    // augmented system small when `a` has many redundant rows.
    let h = howell_form(a);
    let r = h.generators.len();
    // Rows of [H^T | I_c] span {(H v, v)}; those vanishing on the first r columns are the kernel.
    let mut aug = ZmMatrix::zeros(m, c, r + c);
    for (gi, g) in h.generators.iter().enumerate() {
        for (j, &x) in g.entries().iter().enumerate() {
            aug.data[j * (r + c) + gi] = x;
        }
    }
    for j in 0..c {
        aug.data[j * (r + c) + r + j] = 1;
    }
    let hf = howell_form(&aug);
    let tails: Vec<ZmVector> = hf
        .generators
        .iter()
        .zip(&hf.pivots)
        .filter(|(_, &p)| p >= r)
        .map(|(g, _)| ZmVector::from_reduced(m, g.entries()[r..].to_vec()))
        .collect();
    let k = ZmMatrix::from_vectors(m, c, &tails).expect("kernel tails are well formed");
    howell_form(&k)
}
