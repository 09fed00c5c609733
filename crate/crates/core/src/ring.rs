//! Finite rings presented by structure constants over `Z/m`.
//!
//! A [`StructureRing`] of rank `k` has additive group `(Z/m)^k` with basis `b_0..b_{k-1}`
//! and multiplication `b_i b_j = Σ_t c[i][j][t] b_t`. Because every additive endomorphism
//! of `(Z/m)^k` is `Z/m`-linear, additive maps on such a ring are plain `k×k` matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zmod::{self, add_mod, check_modulus, mul_mod, reduce_i64, ZmMatrix, ZmVector};

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct StructureRing {
    modulus: u64,
    rank: usize,
    labels: Vec<String>,
    /// `c[i][j][t]` stored at `(i*k + j)*k + t`.
    table: Vec<u64>,
    unit: Option<ZmVector>,
}

impl fmt::Debug for StructureRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructureRing")
            .field("modulus", &self.modulus)
            .field("rank", &self.rank)
            .field("labels", &self.labels)
            .field("unital", &self.unit.is_some())
            .finish()
    }
}

/// Validates and assembles a ring from nested structure constants `constants[i][j][t]`.
pub fn build_ring(
    modulus: u64,
    rank: usize,
    constants: &[Vec<Vec<i64>>],
    unit: Option<&[i64]>,
) -> Result<StructureRing> {
    check_modulus(modulus)?;
    if constants.len() != rank {
        return Err(Error::ConstantsShape(format!("expected {rank} outer entries, found {}", constants.len())));
    }
    let mut table = Vec::with_capacity(rank * rank * rank);
    for (i, row) in constants.iter().enumerate() {
        if row.len() != rank {
            return Err(Error::ConstantsShape(format!("c[{i}] has {} entries, expected {rank}", row.len())));
        }
        for (j, prod) in row.iter().enumerate() {
            if prod.len() != rank {
                return Err(Error::ConstantsShape(format!(
                    "c[{i}][{j}] has {} entries, expected {rank}",
                    prod.len()
                )));
            }
            table.extend(prod.iter().map(|&x| reduce_i64(x, modulus)));
        }
    }
    let unit = match unit {
        Some(u) if u.len() != rank => {
            return Err(Error::ConstantsShape(format!("unit has {} entries, expected {rank}", u.len())))
        }
        Some(u) => Some(ZmVector::from_i64(modulus, u)?),
        None => None,
    };
    let labels = (0..rank).map(|i| format!("b{i}")).collect();
    StructureRing::from_table(modulus, labels, table, unit)
}

impl StructureRing {
    /// Builds a ring from a flat table, checking associativity and the unit laws.
    pub fn from_table(
        modulus: u64,
        labels: Vec<String>,
        table: Vec<u64>,
        unit: Option<ZmVector>,
    ) -> Result<Self> {
        check_modulus(modulus)?;
        let rank = labels.len();
        if table.len() != rank * rank * rank {
            return Err(Error::ConstantsShape(format!(
                "flat table has {} entries, expected {}",
                table.len(),
                rank * rank * rank
            )));
        }
        if let Some(u) = &unit {
            if u.modulus() != modulus || u.len() != rank {
                return Err(Error::ConstantsShape("unit vector does not match the ring".into()));
            }
        }
        let table = table.into_iter().map(|x| x % modulus).collect();
        let ring = Self { modulus, rank, labels, table, unit };
        ring.check_associativity()?;
        ring.check_unit()?;
        Ok(ring)
    }

    /// Skips validation; callers guarantee the laws hold by construction.
    pub(crate) fn from_table_unchecked(
        modulus: u64,
        labels: Vec<String>,
        table: Vec<u64>,
        unit: Option<ZmVector>,
    ) -> Self {
        let rank = labels.len();
        debug_assert_eq!(table.len(), rank * rank * rank);
        let ring = Self { modulus, rank, labels, table, unit };
        debug_assert!(ring.check_associativity().is_ok());
        debug_assert!(ring.check_unit().is_ok());
        ring
    }

    /// The ring `Z/m` with basis `{1}`.
    pub fn zmod(modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::from_table_unchecked(modulus, vec!["1".into()], vec![1], Some(ZmVector::from_reduced(modulus, vec![1]))))
    }

    /// `Z/m[x]/(x²)` with basis `{1, x}`.
    pub fn dual_numbers(modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let table = vec![1, 0, 0, 1, 0, 1, 0, 0];
        Ok(Self::from_table_unchecked(
            modulus,
            vec!["1".into(), "x".into()],
            table,
            Some(ZmVector::from_reduced(modulus, vec![1, 0])),
        ))
    }

    /// Rank-`k` ring with all products zero.
    pub fn zero_multiplication(modulus: u64, rank: usize) -> Result<Self> {
        check_modulus(modulus)?;
        let labels = (0..rank).map(|i| format!("b{i}")).collect();
        Ok(Self::from_table_unchecked(modulus, labels, vec![0; rank * rank * rank], None))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn unit_vector(&self) -> Option<&ZmVector> {
        self.unit.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub(crate) fn require_unit(&self) -> Result<&ZmVector> {
        self.unit.as_ref().ok_or(Error::NotUnital)
    }

    /// `m^k`.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.modulus).pow(self.rank as u32)
    }

    /// Same modulus, rank, multiplication table and unit; labels are ignored.
    pub fn same_table(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.rank == other.rank && self.table == other.table && self.unit == other.unit
    }

    /// Coefficients of `b_i b_j`.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[u64] {
        let k = self.rank;
        &self.table[(i * k + j) * k..(i * k + j + 1) * k]
    }

    pub(crate) fn mul_raw(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let k = self.rank;
        let mut out = vec![0u64; k];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = mul_mod(xi, yj, m);
                for (o, &p) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if p != 0 {
                        *o = add_mod(*o, mul_mod(c, p, m), m);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vectors(&self, x: &ZmVector, y: &ZmVector) -> ZmVector {
        assert_eq!(x.len(), self.rank, "element rank mismatch");
        assert_eq!(y.len(), self.rank, "element rank mismatch");
        ZmVector::from_reduced(self.modulus, self.mul_raw(x.entries(), y.entries()))
    }

    pub fn elem(&self, coeffs: ZmVector) -> RingElement<'_> {
        assert_eq!(coeffs.modulus(), self.modulus, "element modulus mismatch");
        assert_eq!(coeffs.len(), self.rank, "element rank mismatch");
        RingElement { ring: self, coeffs }
    }

    pub fn elem_from(&self, coeffs: &[i64]) -> RingElement<'_> {
        self.elem(ZmVector::from_i64(self.modulus, coeffs).expect("modulus already validated"))
    }

    pub fn zero(&self) -> RingElement<'_> {
        self.elem(ZmVector::zero(self.modulus, self.rank))
    }

    pub fn basis(&self, i: usize) -> RingElement<'_> {
        self.elem(ZmVector::unit_vector(self.modulus, self.rank, i))
    }

    pub fn one(&self) -> Option<RingElement<'_>> {
        self.unit.clone().map(|u| self.elem(u))
    }

    /// Matrix of `y ↦ x·y`; column `u` holds the coefficients of `x·b_u`.
    pub fn left_mult_matrix(&self, x: &ZmVector) -> ZmMatrix {
        self.mult_matrix(|u| self.mul_raw(x.entries(), ZmVector::unit_vector(self.modulus, self.rank, u).entries()))
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mult_matrix(&self, x: &ZmVector) -> ZmMatrix {
        self.mult_matrix(|u| self.mul_raw(ZmVector::unit_vector(self.modulus, self.rank, u).entries(), x.entries()))
    }

    fn mult_matrix(&self, column: impl Fn(usize) -> Vec<u64>) -> ZmMatrix {
        let k = self.rank;
        let mut data = vec![0; k * k];
        for u in 0..k {
            for (t, x) in column(u).into_iter().enumerate() {
                data[t * k + u] = x;
            }
        }
        ZmMatrix::from_raw(self.modulus, k, k, data)
    }

    /// Checks `(b_i b_j) b_l = b_i (b_j b_l)` on every basis triple.
    pub fn check_associativity(&self) -> Result<()> {
        let k = self.rank;
        for i in 0..k {
            for j in 0..k {
                let ij = self.basis_product(i, j).to_vec();
                for l in 0..k {
                    let mut el = vec![0; k];
                    el[l] = 1;
                    let lhs = self.mul_raw(&ij, &el);
                    let mut ei = vec![0; k];
                    ei[i] = 1;
                    let rhs = self.mul_raw(&ei, self.basis_product(j, l));
                    if lhs != rhs {
                        return Err(Error::NotAssociative(i, j, l));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        let Some(u) = &self.unit else { return Ok(()) };
        for i in 0..self.rank {
            let b = ZmVector::unit_vector(self.modulus, self.rank, i);
            if self.mul_vectors(u, &b) != b || self.mul_vectors(&b, u) != b {
                return Err(Error::UnitLaw(i));
            }
        }
        Ok(())
    }

    pub fn is_idempotent(&self, e: &ZmVector) -> bool {
        self.mul_vectors(e, e) == *e
    }

    /// `ef = fe = 0`. Both products are checked.
    pub fn are_orthogonal(&self, e: &ZmVector, f: &ZmVector) -> bool {
        self.mul_vectors(e, f).is_zero() && self.mul_vectors(f, e).is_zero()
    }

    /// Checks that the family consists of pairwise orthogonal idempotents.
    pub fn check_orthogonal_family(&self, family: &[ZmVector]) -> Result<()> {
        for (i, e) in family.iter().enumerate() {
            if !self.is_idempotent(e) {
                return Err(Error::NotIdempotent);
            }
            for (j, f) in family.iter().enumerate().skip(i + 1) {
                if !self.are_orthogonal(e, f) {
                    return Err(Error::NotOrthogonal(i, j));
                }
            }
        }
        Ok(())
    }

    /// All `m^k` elements in lexicographic coefficient order. Intended for tiny rings.
    pub fn elements(&self) -> impl Iterator<Item = ZmVector> + '_ {
        let m = self.modulus;
        let k = self.rank;
        let total = (m as u128).pow(k as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![0u64; k];
            for slot in v.iter_mut().rev() {
                *slot = (idx % m as u128) as u64;
                idx /= m as u128;
            }
            ZmVector::from_reduced(m, v)
        })
    }

    /// Idempotent test on `e`, for use through the operation-style API.
    pub fn idempotent_check(&self, e: &RingElement<'_>) -> bool {
        self.is_idempotent(e.coeffs())
    }

    pub fn orthogonal_check(&self, e: &RingElement<'_>, f: &RingElement<'_>) -> bool {
        self.are_orthogonal(e.coeffs(), f.coeffs())
    }
}

/// An element of a [`StructureRing`], borrowed from its ring so the usual operators work.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement<'a> {
    ring: &'a StructureRing,
    coeffs: ZmVector,
}

impl fmt::Debug for RingElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl<'a> RingElement<'a> {
    pub fn ring(&self) -> &'a StructureRing {
        self.ring
    }

    pub fn coeffs(&self) -> &ZmVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> ZmVector {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn scale(&self, c: u64) -> Self {
        Self { ring: self.ring, coeffs: self.coeffs.scale(c) }
    }

    fn same_ring(&self, other: &Self) {
        assert!(std::ptr::eq(self.ring, other.ring) || self.ring == other.ring, "elements belong to different rings");
    }
}

impl<'a> Add<&RingElement<'a>> for &RingElement<'a> {
    type Output = RingElement<'a>;
    fn add(self, rhs: &RingElement<'a>) -> RingElement<'a> {
        self.same_ring(rhs);
        RingElement { ring: self.ring, coeffs: self.coeffs.add(&rhs.coeffs) }
    }
}

impl<'a> Sub<&RingElement<'a>> for &RingElement<'a> {
    type Output = RingElement<'a>;
    fn sub(self, rhs: &RingElement<'a>) -> RingElement<'a> {
        self.same_ring(rhs);
        RingElement { ring: self.ring, coeffs: self.coeffs.sub(&rhs.coeffs) }
    }
}

impl<'a> Mul<&RingElement<'a>> for &RingElement<'a> {
    type Output = RingElement<'a>;
    fn mul(self, rhs: &RingElement<'a>) -> RingElement<'a> {
        self.same_ring(rhs);
        RingElement { ring: self.ring, coeffs: self.ring.mul_vectors(&self.coeffs, &rhs.coeffs) }
    }
}

impl<'a> Neg for &RingElement<'a> {
    type Output = RingElement<'a>;
    fn neg(self) -> RingElement<'a> {
        RingElement { ring: self.ring, coeffs: self.coeffs.neg() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl<'a> $tr<RingElement<'a>> for RingElement<'a> {
            type Output = RingElement<'a>;
            fn $method(self, rhs: RingElement<'a>) -> RingElement<'a> { (&self).$method(&rhs) }
        }
        impl<'a> $tr<&RingElement<'a>> for RingElement<'a> {
            type Output = RingElement<'a>;
            fn $method(self, rhs: &RingElement<'a>) -> RingElement<'a> { (&self).$method(rhs) }
        }
        impl<'a> $tr<RingElement<'a>> for &RingElement<'a> {
            type Output = RingElement<'a>;
            fn $method(self, rhs: RingElement<'a>) -> RingElement<'a> { self.$method(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<'a> Neg for RingElement<'a> {
    type Output = RingElement<'a>;
    fn neg(self) -> RingElement<'a> {
        -&self
    }
}

/// `M_n(R)` together with its matrix-unit indexing.
///
/// Basis element `(i, j, t)` is `e_{ij}·b_t` and sits at index `(i*n + j)*k + t`.
#[derive(Clone, Debug)]
pub struct MatrixRing {
    ring: StructureRing,
    base: StructureRing,
    size: usize,
}

impl MatrixRing {
    pub fn ring(&self) -> &StructureRing {
        &self.ring
    }

    pub fn into_ring(self) -> StructureRing {
        self.ring
    }

    pub fn base(&self) -> &StructureRing {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, i: usize, j: usize, t: usize) -> usize {
        (i * self.size + j) * self.base.rank() + t
    }

    /// The matrix unit `e_{ij}`, i.e. `1_R` in position `(i, j)`.
    pub fn matrix_unit(&self, i: usize, j: usize) -> ZmVector {
        let k = self.base.rank();
        let one = self.base.unit_vector().expect("matrix rings are built over unital rings");
        let mut v = vec![0; self.ring.rank()];
        v[self.index(i, j, 0)..self.index(i, j, 0) + k].copy_from_slice(one.entries());
        ZmVector::from_reduced(self.ring.modulus(), v)
    }

    /// The diagonal matrix units `e_{11}, …, e_{nn}`.
    pub fn diagonal_units(&self) -> Vec<ZmVector> {
        (0..self.size).map(|i| self.matrix_unit(i, i)).collect()
    }

    /// Embeds `r ∈ R` at position `(i, j)`.
    pub fn place(&self, i: usize, j: usize, r: &ZmVector) -> ZmVector {
        let k = self.base.rank();
        let mut v = vec![0; self.ring.rank()];
        v[self.index(i, j, 0)..self.index(i, j, 0) + k].copy_from_slice(r.entries());
        ZmVector::from_reduced(self.ring.modulus(), v)
    }

    /// Entry `(i, j)` of a matrix, as an element of `R`.
    pub fn entry(&self, x: &ZmVector, i: usize, j: usize) -> ZmVector {
        let start = self.index(i, j, 0);
        ZmVector::from_reduced(self.ring.modulus(), x.entries()[start..start + self.base.rank()].to_vec())
    }
}

/// `n×n` matrices over a unital ring.
pub fn matrix_ring(base: &StructureRing, n: usize) -> Result<MatrixRing> {
    let one = base.require_unit()?;
    assert!(n >= 1, "matrix size must be at least 1");
    let m = base.modulus();
    let k = base.rank();
    let dim = n * n * k;
    let idx = |i: usize, j: usize, t: usize| (i * n + j) * k + t;
    let mut table = vec![0u64; dim * dim * dim];
    for i in 0..n {
        for j in 0..n {
            for q in 0..n {
                for t in 0..k {
                    for u in 0..k {
                        let a = idx(i, j, t);
                        let b = idx(j, q, u);
                        for (w, &c) in base.basis_product(t, u).iter().enumerate() {
                            table[(a * dim + b) * dim + idx(i, q, w)] = c;
                        }
                    }
                }
            }
        }
    }
    let mut unit = vec![0; dim];
    for i in 0..n {
        unit[idx(i, i, 0)..idx(i, i, 0) + k].copy_from_slice(one.entries());
    }
    let mut labels = Vec::with_capacity(dim);
    for i in 0..n {
        for j in 0..n {
            for t in 0..k {
                labels.push(format!("e{}{}·{}", i + 1, j + 1, base.labels()[t]));
            }
        }
    }
    let ring = StructureRing::from_table_unchecked(m, labels, table, Some(ZmVector::from_reduced(m, unit)));
    Ok(MatrixRing { ring, base: base.clone(), size: n })
}

/// `A × B` with componentwise operations; basis of `A` first.
pub fn direct_product(a: &StructureRing, b: &StructureRing) -> Result<StructureRing> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch { expected: a.modulus(), found: b.modulus() });
    }
    let (ka, kb) = (a.rank(), b.rank());
    let k = ka + kb;
    let mut table = vec![0u64; k * k * k];
    for i in 0..ka {
        for j in 0..ka {
            for (t, &c) in a.basis_product(i, j).iter().enumerate() {
                table[(i * k + j) * k + t] = c;
            }
        }
    }
    for i in 0..kb {
        for j in 0..kb {
            for (t, &c) in b.basis_product(i, j).iter().enumerate() {
                table[((ka + i) * k + ka + j) * k + ka + t] = c;
            }
        }
    }
    let unit = match (a.unit_vector(), b.unit_vector()) {
        (Some(ua), Some(ub)) => {
            let mut u = ua.entries().to_vec();
            u.extend_from_slice(ub.entries());
            Some(ZmVector::from_reduced(a.modulus(), u))
        }
        _ => None,
    };
    let labels = a
        .labels()
        .iter()
        .map(|l| format!("({l},0)"))
        .chain(b.labels().iter().map(|l| format!("(0,{l})")))
        .collect();
    Ok(StructureRing::from_table_unchecked(a.modulus(), labels, table, unit))
}

/// An `(A, B)`-bimodule `M ≅ (Z/m)^{k_M}` given by action constants.
///
/// `a_i·m_j` is stored at `(i*k_M + j)*k_M + t`, `m_j·b_i` at `(j*k_B + i)*k_M + t`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    left: StructureRing,
    right: StructureRing,
    rank: usize,
    left_action: Vec<u64>,
    right_action: Vec<u64>,
}

impl Bimodule {
    pub fn new(
        left: StructureRing,
        right: StructureRing,
        rank: usize,
        left_action: Vec<u64>,
        right_action: Vec<u64>,
    ) -> Result<Self> {
        let m = left.modulus();
        if right.modulus() != m {
            return Err(Error::ModulusMismatch { expected: m, found: right.modulus() });
        }
        if left_action.len() != left.rank() * rank * rank {
            return Err(Error::ConstantsShape("left action has the wrong size".into()));
        }
        if right_action.len() != right.rank() * rank * rank {
            return Err(Error::ConstantsShape("right action has the wrong size".into()));
        }
        let left_action = left_action.into_iter().map(|x| x % m).collect();
        let right_action = right_action.into_iter().map(|x| x % m).collect();
        let bm = Self { left, right, rank, left_action, right_action };
        bm.validate()?;
        Ok(bm)
    }

    /// `R` as an `(R, R)`-bimodule over itself.
    pub fn regular(ring: &StructureRing) -> Self {
        let k = ring.rank();
        let mut right_action = vec![0; k * k * k];
        for j in 0..k {
            for i in 0..k {
                for (t, &c) in ring.basis_product(j, i).iter().enumerate() {
                    right_action[(j * k + i) * k + t] = c;
                }
            }
        }
        Self {
            left: ring.clone(),
            right: ring.clone(),
            rank: k,
            left_action: ring.table().to_vec(),
            right_action,
        }
    }

    /// `n×p` matrices over `R` as an `(M_n(R), M_p(R))`-bimodule.
    pub fn matrix(base: &StructureRing, n: usize, p: usize) -> Result<Self> {
        let left = matrix_ring(base, n)?;
        let right = matrix_ring(base, p)?;
        let k = base.rank();
        let rank = n * p * k;
        let midx = |i: usize, j: usize, t: usize| (i * p + j) * k + t;
        let mut left_action = vec![0; left.ring().rank() * rank * rank];
        // e_{ij}·b_t acting on e_{jq}·b_u lands in e_{iq}·(b_t b_u).
        for i in 0..n {
            for j in 0..n {
                for q in 0..p {
                    for t in 0..k {
                        for u in 0..k {
                            let a = left.index(i, j, t);
                            let mm = midx(j, q, u);
                            for (w, &c) in base.basis_product(t, u).iter().enumerate() {
                                left_action[(a * rank + mm) * rank + midx(i, q, w)] = c;
                            }
                        }
                    }
                }
            }
        }
        let bk = right.ring().rank();
        let mut right_action = vec![0; bk * rank * rank];
        for i in 0..n {
            for j in 0..p {
                for q in 0..p {
                    for t in 0..k {
                        for u in 0..k {
                            let mm = midx(i, j, t);
                            let b = right.index(j, q, u);
                            for (w, &c) in base.basis_product(t, u).iter().enumerate() {
                                right_action[(mm * bk + b) * rank + midx(i, q, w)] = c;
                            }
                        }
                    }
                }
            }
        }
        Self::new(left.into_ring(), right.into_ring(), rank, left_action, right_action)
    }

    /// The zero bimodule of rank 0.
    pub fn zero(left: StructureRing, right: StructureRing) -> Result<Self> {
        Self::new(left, right, 0, Vec::new(), Vec::new())
    }

    pub fn left_ring(&self) -> &StructureRing {
        &self.left
    }

    pub fn right_ring(&self) -> &StructureRing {
        &self.right
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modulus(&self) -> u64 {
        self.left.modulus()
    }

    /// Coefficients of `a_i·m_j`.
    pub fn left_basis_action(&self, i: usize, j: usize) -> &[u64] {
        let k = self.rank;
        &self.left_action[(i * k + j) * k..(i * k + j + 1) * k]
    }

    /// Coefficients of `m_j·b_i`.
    pub fn right_basis_action(&self, j: usize, i: usize) -> &[u64] {
        let k = self.rank;
        let kb = self.right.rank();
        &self.right_action[(j * kb + i) * k..(j * kb + i + 1) * k]
    }

    pub fn act_left(&self, a: &[u64], x: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        let mut out = vec![0; self.rank];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &xj) in x.iter().enumerate() {
                let c = mul_mod(ai, xj, m);
                if c == 0 {
                    continue;
                }
                for (o, &p) in out.iter_mut().zip(self.left_basis_action(i, j)) {
                    *o = add_mod(*o, mul_mod(c, p, m), m);
                }
            }
        }
        out
    }

    pub fn act_right(&self, x: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        let mut out = vec![0; self.rank];
        for (j, &xj) in x.iter().enumerate() {
            for (i, &bi) in b.iter().enumerate() {
                let c = mul_mod(xj, bi, m);
                if c == 0 {
                    continue;
                }
                for (o, &p) in out.iter_mut().zip(self.right_basis_action(j, i)) {
                    *o = add_mod(*o, mul_mod(c, p, m), m);
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let ka = self.left.rank();
        let kb = self.right.rank();
        let km = self.rank;
        let e = |n: usize, i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        for j in 0..km {
            let mj = e(km, j);
            for i in 0..ka {
                for l in 0..ka {
                    let lhs = self.act_left(self.left.basis_product(i, l), &mj);
                    let rhs = self.act_left(&e(ka, i), &self.act_left(&e(ka, l), &mj));
                    if lhs != rhs {
                        return Err(Error::BimoduleAction(format!("(a{i} a{l}) m{j} ≠ a{i} (a{l} m{j})")));
                    }
                }
            }
            for i in 0..kb {
                for l in 0..kb {
                    let lhs = self.act_right(&mj, self.right.basis_product(i, l));
                    let rhs = self.act_right(&self.act_right(&mj, &e(kb, i)), &e(kb, l));
                    if lhs != rhs {
                        return Err(Error::BimoduleAction(format!("m{j} (b{i} b{l}) ≠ (m{j} b{i}) b{l}")));
                    }
                }
            }
            for i in 0..ka {
                for l in 0..kb {
                    let lhs = self.act_right(&self.act_left(&e(ka, i), &mj), &e(kb, l));
                    let rhs = self.act_left(&e(ka, i), &self.act_right(&mj, &e(kb, l)));
                    if lhs != rhs {
                        return Err(Error::BimoduleAction(format!("(a{i} m{j}) b{l} ≠ a{i} (m{j} b{l})")));
                    }
                }
            }
            if let Some(u) = self.left.unit_vector() {
                if self.act_left(u.entries(), &mj) != mj {
                    return Err(Error::BimoduleNotUnital(j));
                }
            }
            if let Some(u) = self.right.unit_vector() {
                if self.act_right(&mj, u.entries()) != mj {
                    return Err(Error::BimoduleNotUnital(j));
                }
            }
        }
        Ok(())
    }
}

/// `Tri(A, M, B)`: additive group `A ⊕ M ⊕ B` with
/// `(r, m, s)(r', m', s') = (rr', rm' + ms', ss')`.
pub fn triangular_ring(bimodule: &Bimodule) -> Result<StructureRing> {
    let a = bimodule.left_ring();
    let b = bimodule.right_ring();
    let ua = a.require_unit()?;
    let ub = b.require_unit()?;
    let (ka, km, kb) = (a.rank(), bimodule.rank(), b.rank());
    let k = ka + km + kb;
    let mut table = vec![0u64; k * k * k];
    let mut put = |x: usize, y: usize, offset: usize, coeffs: &[u64]| {
        for (t, &c) in coeffs.iter().enumerate() {
            table[(x * k + y) * k + offset + t] = c;
        }
    };
    for i in 0..ka {
        for j in 0..ka {
            put(i, j, 0, a.basis_product(i, j));
        }
        for j in 0..km {
            put(i, ka + j, ka, bimodule.left_basis_action(i, j));
        }
    }
    for j in 0..km {
        for i in 0..kb {
            put(ka + j, ka + km + i, ka, bimodule.right_basis_action(j, i));
        }
    }
    for i in 0..kb {
        for j in 0..kb {
            put(ka + km + i, ka + km + j, ka + km, b.basis_product(i, j));
        }
    }
    let mut unit = ua.entries().to_vec();
    unit.extend(std::iter::repeat_n(0, km));
    unit.extend_from_slice(ub.entries());
    let labels = a
        .labels()
        .iter()
        .map(|l| format!("A:{l}"))
        .chain((0..km).map(|j| format!("M:m{j}")))
        .chain(b.labels().iter().map(|l| format!("B:{l}")))
        .collect();
    let m = a.modulus();
    StructureRing::from_table(m, labels, table, Some(ZmVector::from_reduced(m, unit)))
}

/// The corner ring `eRe` with maps to and from `R`.
#[derive(Clone, Debug)]
pub struct CornerRing {
    ring: StructureRing,
    idempotent: ZmVector,
    /// `k × k'`; column `a` holds the `R`-coordinates of corner basis element `a`.
    embedding: ZmMatrix,
    /// `k' × k`; reads corner coordinates off the pivot columns.
    projection: ZmMatrix,
}

impl CornerRing {
    pub fn ring(&self) -> &StructureRing {
        &self.ring
    }

    pub fn idempotent(&self) -> &ZmVector {
        &self.idempotent
    }

    pub fn embedding(&self) -> &ZmMatrix {
        &self.embedding
    }

    pub fn projection(&self) -> &ZmMatrix {
        &self.projection
    }

    pub fn embed(&self, x: &ZmVector) -> ZmVector {
        self.embedding.mul_vector(x).expect("corner coordinates have corner rank")
    }

    /// Coordinates of an element of `eRe`. Only meaningful on `eRe`.
    pub fn project(&self, x: &ZmVector) -> ZmVector {
        self.projection.mul_vector(x).expect("ring coordinates have ring rank")
    }
}

/// `eRe` for an idempotent `e`, with basis taken from the Howell form of `{e b_i e}`.
///
/// The corner must be a free `Z/m`-module for it to be a [`StructureRing`]; this holds for
/// matrix units and class idempotents but can fail for e.g. `e = 3` in `Z/6`.
pub fn corner_ring(ring: &StructureRing, e: &ZmVector) -> Result<CornerRing> {
    if !ring.is_idempotent(e) {
        return Err(Error::NotIdempotent);
    }
    let m = ring.modulus();
    let k = ring.rank();
    let images: Vec<ZmVector> = (0..k)
        .map(|i| {
            let b = ZmVector::unit_vector(m, k, i);
            ring.mul_vectors(&ring.mul_vectors(e, &b), e)
        })
        .collect();
    let span = zmod::howell_form(&ZmMatrix::from_vectors(m, k, &images)?);
    if let Some(&order) = span.pivot_orders().iter().find(|&&o| o != m) {
        return Err(Error::CornerNotFree { modulus: m, order });
    }
    let basis = span.generators();
    let kc = basis.len();
    let mut embedding = ZmMatrix::zeros(m, k, kc);
    let mut projection = ZmMatrix::zeros(m, kc, k);
    for (a, (g, &p)) in basis.iter().zip(span.pivots()).enumerate() {
        for (t, &x) in g.entries().iter().enumerate() {
            embedding.set(t, a, x);
        }
        // Unit pivots with zeros above them make each pivot column a coordinate.
        projection.set(a, p, 1);
    }
    let corner = |x: &ZmVector| projection.mul_vector(x).expect("rank matches");
    let mut table = Vec::with_capacity(kc * kc * kc);
    for x in basis {
        for y in basis {
            table.extend_from_slice(corner(&ring.mul_vectors(x, y)).entries());
        }
    }
    let unit = corner(e);
    let labels = (0..kc).map(|a| format!("c{a}")).collect();
    let corner_ring = StructureRing::from_table(m, labels, table, Some(unit))?;
    Ok(CornerRing { ring: corner_ring, idempotent: e.clone(), embedding, projection })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_from_constants() {
        let r = build_ring(7, 1, &[vec![vec![1]]], Some(&[1])).unwrap();
        assert!(r.same_table(&StructureRing::zmod(7).unwrap()));
        assert_eq!(r.cardinality(), BigUint::from(7u32));
    }

    #[test]
    fn dual_numbers_from_constants() {
        let c = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]];
        let r = build_ring(2, 2, &c, Some(&[1, 0])).unwrap();
        let x = r.basis(1);
        assert!((&x * &x).is_zero());
        assert!(r.same_table(&StructureRing::dual_numbers(2).unwrap()));
    }

    #[test]
    fn misdeclared_unit_is_rejected_with_index() {
        // basis {1, x} with x·x = 1, but the unit declared as x.
        let c = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]];
        let err = build_ring(2, 2, &c, Some(&[0, 1])).unwrap_err();
        assert_eq!(err, Error::UnitLaw(0));
    }

    #[test]
    fn non_associative_table_reports_triple() {
        // b0·b0 = b1, b1·b0 = b0: (b0 b0) b0 = b0 but b0 (b0 b0) = b0 b1 = 0.
        let c = vec![vec![vec![0, 1], vec![0, 0]], vec![vec![1, 0], vec![0, 0]]];
        assert!(matches!(build_ring(2, 2, &c, None), Err(Error::NotAssociative(0, 0, 0))));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(build_ring(2, 2, &[vec![vec![1]]], None), Err(Error::ConstantsShape(_))));
        assert!(matches!(build_ring(1, 1, &[vec![vec![1]]], None), Err(Error::InvalidModulus(1))));
    }

    #[test]
    fn matrix_units_multiply() {
        let mr = matrix_ring(&StructureRing::zmod(2).unwrap(), 2).unwrap();
        let r = mr.ring();
        let e12 = r.elem(mr.matrix_unit(0, 1));
        let e21 = r.elem(mr.matrix_unit(1, 0));
        assert_eq!((&e12 * &e21).into_coeffs(), mr.matrix_unit(0, 0));
        let e11 = mr.matrix_unit(0, 0);
        let e22 = mr.matrix_unit(1, 1);
        assert!(r.is_idempotent(&e11) && r.is_idempotent(&e22));
        assert!(r.are_orthogonal(&e11, &e22));
        assert_eq!(e11.add(&e22), *r.unit_vector().unwrap());
        assert_eq!(matrix_ring(&StructureRing::zmod(4).unwrap(), 3).unwrap().ring().rank(), 9);
    }

    #[test]
    fn matrix_ring_requires_unit() {
        let z = StructureRing::zero_multiplication(2, 1).unwrap();
        assert_eq!(matrix_ring(&z, 2).unwrap_err(), Error::NotUnital);
    }

    #[test]
    fn matrix_ring_of_size_one_is_the_base() {
        for base in [StructureRing::zmod(6).unwrap(), StructureRing::dual_numbers(3).unwrap()] {
            assert!(matrix_ring(&base, 1).unwrap().ring().same_table(&base));
        }
    }

    #[test]
    fn triangular_over_z2_is_upper_triangular() {
        let z2 = StructureRing::zmod(2).unwrap();
        let tri = triangular_ring(&Bimodule::regular(&z2)).unwrap();
        assert_eq!(tri.rank(), 3);
        assert_eq!(tri.unit_vector().unwrap().entries(), &[1, 0, 1]);
        // (r, 0, s)(r', 0, s') = (rr', 0, ss')
        let x = tri.elem_from(&[1, 0, 1]);
        let y = tri.elem_from(&[1, 0, 0]);
        assert_eq!((&x * &y).coeffs().entries(), &[1, 0, 0]);
    }

    #[test]
    fn triangular_rejects_nonunital_sides() {
        let z = StructureRing::zero_multiplication(2, 1).unwrap();
        assert_eq!(triangular_ring(&Bimodule::regular(&z)).unwrap_err(), Error::NotUnital);
    }

    #[test]
    fn bimodule_action_must_associate() {
        let z2 = StructureRing::zmod(2).unwrap();
        // Left action of 1 sends m to 0: not unital.
        let err = Bimodule::new(z2.clone(), z2.clone(), 1, vec![0], vec![1]).unwrap_err();
        assert_eq!(err, Error::BimoduleNotUnital(0));
        let zz = direct_product(&z2, &z2).unwrap();
        // (1,0)·m = m and (0,1)·m = m is additive but (a a')m ≠ a(a' m) for a=(1,0), a'=(0,1).
        let err = Bimodule::new(zz, z2, 1, vec![1, 1], vec![1]).unwrap_err();
        assert!(matches!(err, Error::BimoduleAction(_)));
    }

    #[test]
    fn corner_examples() {
        let mr = matrix_ring(&StructureRing::zmod(2).unwrap(), 2).unwrap();
        let r = mr.ring();
        let full = corner_ring(r, r.unit_vector().unwrap()).unwrap();
        assert_eq!(full.ring().cardinality(), r.cardinality());
        let c11 = corner_ring(r, &mr.matrix_unit(0, 0)).unwrap();
        assert_eq!(c11.ring().cardinality(), BigUint::from(2u32));
        assert!(c11.ring().same_table(&StructureRing::zmod(2).unwrap()));
        let c0 = corner_ring(r, &ZmVector::zero(2, 4)).unwrap();
        assert_eq!(c0.ring().cardinality(), BigUint::from(1u32));
        assert_eq!(corner_ring(r, &mr.matrix_unit(0, 1)).unwrap_err(), Error::NotIdempotent);
    }

    #[test]
    fn non_free_corner_is_rejected() {
        let z6 = StructureRing::zmod(6).unwrap();
        let e = ZmVector::new(6, vec![3]).unwrap();
        assert!(z6.is_idempotent(&e));
        assert_eq!(corner_ring(&z6, &e).unwrap_err(), Error::CornerNotFree { modulus: 6, order: 2 });
    }

    #[test]
    fn idempotent_and_orthogonal_checks() {
        let mr = matrix_ring(&StructureRing::zmod(3).unwrap(), 2).unwrap();
        let r = mr.ring();
        assert!(r.idempotent_check(&r.one().unwrap()));
        let e11 = r.elem(mr.matrix_unit(0, 0));
        let e22 = r.elem(mr.matrix_unit(1, 1));
        assert!(r.orthogonal_check(&e11, &e22));
        assert!(!r.orthogonal_check(&e11, &e11));
    }

    #[test]
    fn direct_product_examples() {
        let z2 = StructureRing::zmod(2).unwrap();
        let p = direct_product(&z2, &z2).unwrap();
        assert_eq!(p.cardinality(), BigUint::from(4u32));
        assert_eq!(p.unit_vector().unwrap().entries(), &[1, 1]);
        assert!((p.basis(0) * p.basis(1)).is_zero());
        assert_eq!(p.elements().filter(|e| p.is_idempotent(e)).count(), 4);
        let z3 = StructureRing::zmod(3).unwrap();
        assert!(direct_product(&z2, &z3).is_err());
    }

    #[test]
    fn mult_matrices_agree_with_products() {
        let mr = matrix_ring(&StructureRing::zmod(3).unwrap(), 2).unwrap();
        let r = mr.ring();
        let x = r.elem_from(&[1, 2, 0, 1]);
        let y = r.elem_from(&[2, 1, 1, 0]);
        let l = r.left_mult_matrix(x.coeffs());
        let rm = r.right_mult_matrix(y.coeffs());
        assert_eq!(l.mul_vector(y.coeffs()).unwrap(), (&x * &y).into_coeffs());
        assert_eq!(rm.mul_vector(x.coeffs()).unwrap(), (&x * &y).into_coeffs());
    }
}
