//! Derivations and Jordan derivations as solution spaces of linear systems over `Z/m`.
//!
//! An additive map `d` on a rank-`k` ring is a `k×k` matrix `D` whose column `j` holds
//! `d(b_j)`. The unknowns are the entries of `D` in column-major order, so unknown
//! `j*k + u` is the coefficient of `b_u` in `d(b_j)`.
//!
//! # Jordan constraints
//!
//! With `Q1(r) = d(r²) − d(r)r − rd(r)` and `Q2(r, s) = d(rsr) − d(r)sr − rd(s)r − rsd(r)`,
//! `Q1` is quadratic in `r` and `Q2` is quadratic in `r` and additive in `s`. Writing
//! `r = Σ c_i b_i`,
//!
//! ```text
//! Q1(r)    = Σ c_i² Q1(b_i) + Σ_{i<j} c_i c_j Q1pol(b_i, b_j)
//! Q2(r, s) = Σ c_i² Q2(b_i, s) + Σ_{i<l} c_i c_l Q2pol(b_i, b_l; s)
//! ```
//!
//! where the polarizations are `Q1pol(r, s) = d(rs + sr) − d(r)s − rd(s) − d(s)r − sd(r)`
//! and `Q2pol(r, t; s) = d(rst + tsr) − d(r)st − rd(s)t − rsd(t) − d(t)sr − td(s)r − tsd(r)`.
//! Vanishing on basis elements and on distinct basis pairs is therefore sufficient, and
//! evaluating at `b_i` and `b_i + b_j` shows it is necessary. Polarization alone would not
//! do over even `m`, since the diagonal terms carry no factor of 2 there.
//!
//! Rows are generated in a fixed order: `Q1` by `i`; `Q1pol` by `(i, j)`, `i < j`;
//! `Q2` by `(i, j)`; `Q2pol` by `(i, l, j)`, `i < l`. Each vector equation contributes
//! `k` scalar rows, one per output coordinate.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{RingElement, StructureRing};
use crate::zmod::{self, add_mod, howell_form, mul_mod, neg_mod, SubgroupBasis, ZmMatrix, ZmVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DerivationKind {
    Derivation,
    JordanDerivation,
}

impl fmt::Display for DerivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Derivation => "derivation",
            Self::JordanDerivation => "jordan-derivation",
        })
    }
}

/// An additive endomorphism of `(Z/m)^k`; column `j` of the matrix is `d(b_j)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AdditiveMap {
    matrix: ZmMatrix,
}

impl fmt::Debug for AdditiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdditiveMap{:?}", self.matrix)
    }
}

impl AdditiveMap {
    pub fn new(ring: &StructureRing, matrix: ZmMatrix) -> Result<Self> {
        if matrix.modulus() != ring.modulus() {
            return Err(Error::ModulusMismatch { expected: ring.modulus(), found: matrix.modulus() });
        }
        if matrix.rows() != ring.rank() || matrix.cols() != ring.rank() {
            return Err(Error::DimensionMismatch { expected: ring.rank(), found: matrix.rows().max(matrix.cols()) });
        }
        Ok(Self { matrix })
    }

    pub fn zero(ring: &StructureRing) -> Self {
        Self { matrix: ZmMatrix::zeros(ring.modulus(), ring.rank(), ring.rank()) }
    }

    pub fn identity(ring: &StructureRing) -> Self {
        Self { matrix: ZmMatrix::identity(ring.modulus(), ring.rank()) }
    }

    /// Builds the map from its images of the basis elements.
    pub fn from_images(ring: &StructureRing, images: &[ZmVector]) -> Result<Self> {
        let k = ring.rank();
        if images.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: images.len() });
        }
        let mut matrix = ZmMatrix::zeros(ring.modulus(), k, k);
        for (j, img) in images.iter().enumerate() {
            if img.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: img.len() });
            }
            for (t, &x) in img.entries().iter().enumerate() {
                matrix.set(t, j, x);
            }
        }
        Ok(Self { matrix })
    }

    /// Decodes a column-major unknown vector of length `k²`.
    pub fn from_unknowns(ring: &StructureRing, v: &ZmVector) -> Result<Self> {
        let k = ring.rank();
        if v.len() != k * k {
            return Err(Error::DimensionMismatch { expected: k * k, found: v.len() });
        }
        let images: Vec<ZmVector> = v.entries().chunks(k.max(1)).take(k).map(|c| ZmVector::from_reduced(ring.modulus(), c.to_vec())).collect();
        Self::from_images(ring, &images)
    }

    /// Column-major unknown vector.
    pub fn to_unknowns(&self) -> ZmVector {
        let k = self.rank();
        let mut v = Vec::with_capacity(k * k);
        for j in 0..k {
            for t in 0..k {
                v.push(self.matrix.get(t, j));
            }
        }
        ZmVector::from_reduced(self.matrix.modulus(), v)
    }

    pub fn matrix(&self) -> &ZmMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn modulus(&self) -> u64 {
        self.matrix.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn image(&self, j: usize) -> ZmVector {
        self.matrix.column_vector(j)
    }

    pub fn apply(&self, x: &ZmVector) -> ZmVector {
        self.matrix.mul_vector(x).expect("element rank matches map rank")
    }

    pub fn apply_elem<'a>(&self, x: &RingElement<'a>) -> RingElement<'a> {
        x.ring().elem(self.apply(x.coeffs()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.add(&other.matrix).expect("maps on the same ring") }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let neg = ZmMatrix::from_raw(
            other.modulus(),
            other.rank(),
            other.rank(),
            (0..other.rank() * other.rank())
                .map(|i| neg_mod(other.matrix.get(i / other.rank(), i % other.rank()), other.modulus()))
                .collect(),
        );
        Self { matrix: self.matrix.add(&neg).expect("maps on the same ring") }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.mul(&other.matrix).expect("maps on the same ring") }
    }
}

/// `r ↦ ar − ra`.
pub fn inner_derivation(ring: &StructureRing, a: &ZmVector) -> AdditiveMap {
    let l = AdditiveMap { matrix: ring.left_mult_matrix(a) };
    let r = AdditiveMap { matrix: ring.right_mult_matrix(a) };
    l.sub(&r)
}

/// A basis-level identity that fails for a candidate map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: &'static str,
    pub indices: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at basis indices {:?}", self.identity, self.indices)
    }
}

/// Evaluates the basis-level constraint set directly in the ring.
pub fn check_map(ring: &StructureRing, d: &AdditiveMap, kind: DerivationKind) -> std::result::Result<(), Violation> {
    assert_eq!(d.rank(), ring.rank(), "map rank must match ring rank");
    let k = ring.rank();
    let b: Vec<RingElement<'_>> = (0..k).map(|i| ring.basis(i)).collect();
    let fail = |identity, indices| Err(Violation { identity, indices });
    match kind {
        DerivationKind::Derivation => {
            for i in 0..k {
                for j in 0..k {
                    let lhs = d.apply_elem(&(&b[i] * &b[j]));
                    let rhs = d.apply_elem(&b[i]) * &b[j] + &b[i] * d.apply_elem(&b[j]);
                    if lhs != rhs {
                        return fail("d(rs) = d(r)s + rd(s)", vec![i, j]);
                    }
                }
            }
        }
        DerivationKind::JordanDerivation => {
            for (i, r) in b.iter().enumerate() {
                if !jordan_square_defect(d, r).is_zero() {
                    return fail("d(r²) = d(r)r + rd(r)", vec![i]);
                }
            }
            for i in 0..k {
                for j in i + 1..k {
                    if !jordan_square_polar_defect(d, &b[i], &b[j]).is_zero() {
                        return fail("d(rs + sr) = d(r)s + rd(s) + d(s)r + sd(r)", vec![i, j]);
                    }
                }
            }
            for i in 0..k {
                for j in 0..k {
                    if !jordan_triple_defect(d, &b[i], &b[j]).is_zero() {
                        return fail("d(rsr) = d(r)sr + rd(s)r + rsd(r)", vec![i, j]);
                    }
                }
            }
            for i in 0..k {
                for l in i + 1..k {
                    for j in 0..k {
                        if !herstein_defect(d, &b[i], &b[j], &b[l]).is_zero() {
                            return fail("d(rst + tsr) = d(r)st + rd(s)t + rsd(t) + d(t)sr + td(s)r + tsd(r)", vec![i, l, j]);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `d(r²) − d(r)r − rd(r)`.
pub fn jordan_square_defect<'a>(d: &AdditiveMap, r: &RingElement<'a>) -> RingElement<'a> {
    let dr = d.apply_elem(r);
    d.apply_elem(&(r * r)) - &dr * r - r * &dr
}

/// `d(rs + sr) − d(r)s − rd(s) − d(s)r − sd(r)`.
pub fn jordan_square_polar_defect<'a>(d: &AdditiveMap, r: &RingElement<'a>, s: &RingElement<'a>) -> RingElement<'a> {
    let (dr, ds) = (d.apply_elem(r), d.apply_elem(s));
    d.apply_elem(&(r * s + s * r)) - &dr * s - r * &ds - &ds * r - s * &dr
}

/// `d(rsr) − d(r)sr − rd(s)r − rsd(r)`.
pub fn jordan_triple_defect<'a>(d: &AdditiveMap, r: &RingElement<'a>, s: &RingElement<'a>) -> RingElement<'a> {
    let (dr, ds) = (d.apply_elem(r), d.apply_elem(s));
    d.apply_elem(&(r * s * r)) - &dr * s * r - r * &ds * r - r * s * &dr
}

/// `d(rst + tsr) − d(r)st − rd(s)t − rsd(t) − d(t)sr − td(s)r − tsd(r)`.
pub fn herstein_defect<'a>(
    d: &AdditiveMap,
    r: &RingElement<'a>,
    s: &RingElement<'a>,
    t: &RingElement<'a>,
) -> RingElement<'a> {
    let (dr, ds, dt) = (d.apply_elem(r), d.apply_elem(s), d.apply_elem(t));
    d.apply_elem(&(r * s * t + t * s * r))
        - &dr * s * t
        - r * &ds * t
        - r * s * &dt
        - &dt * s * r
        - t * &ds * r
        - t * s * &dr
}

/// `d(rs) − d(r)s − rd(s)`.
pub fn derivation_defect<'a>(d: &AdditiveMap, r: &RingElement<'a>, s: &RingElement<'a>) -> RingElement<'a> {
    d.apply_elem(&(r * s)) - d.apply_elem(r) * s - r * d.apply_elem(s)
}

/// One summand `± P·d(x)·Q` of a linearized identity; `None` stands for the unit.
struct Term {
    negate: bool,
    left: Option<ZmVector>,
    x: ZmVector,
    right: Option<ZmVector>,
}

impl Term {
    fn plus(x: ZmVector) -> Self {
        Self { negate: false, left: None, x, right: None }
    }

    fn minus(left: Option<ZmVector>, x: ZmVector, right: Option<ZmVector>) -> Self {
        Self { negate: true, left, x, right }
    }
}

/// Writes the `k` scalar rows of `Σ ± P d(x) Q = 0` into `rows` (each of length `k²`).
fn emit(ring: &StructureRing, terms: &[Term], sink: &mut impl FnMut(&[u64])) {
    let m = ring.modulus();
    let k = ring.rank();
    let mut rows = vec![0u64; k * k * k];
    for term in terms {
        // T[t][u] = coefficient of b_t in P·b_u·Q.
        for u in 0..k {
            let mut img = ZmVector::unit_vector(m, k, u);
            if let Some(p) = &term.left {
                img = ring.mul_vectors(p, &img);
            }
            if let Some(q) = &term.right {
                img = ring.mul_vectors(&img, q);
            }
            for (t, &c) in img.entries().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let c = if term.negate { neg_mod(c, m) } else { c };
                let row = &mut rows[t * k * k..(t + 1) * k * k];
                for (j, &xj) in term.x.entries().iter().enumerate() {
                    if xj != 0 {
                        let slot = &mut row[j * k + u];
                        *slot = add_mod(*slot, mul_mod(c, xj, m), m);
                    }
                }
            }
        }
    }
    for t in 0..k {
        sink(&rows[t * k * k..(t + 1) * k * k]);
    }
}

/// Streams the scalar constraint rows for `kind`, in the documented order.
pub fn for_each_constraint_row(ring: &StructureRing, kind: DerivationKind, mut sink: impl FnMut(&[u64])) {
    let k = ring.rank();
    let b: Vec<ZmVector> = (0..k).map(|i| ZmVector::unit_vector(ring.modulus(), k, i)).collect();
    let mul = |x: &ZmVector, y: &ZmVector| ring.mul_vectors(x, y);
    match kind {
        DerivationKind::Derivation => {
            for i in 0..k {
                for j in 0..k {
                    let terms = [
                        Term::plus(mul(&b[i], &b[j])),
                        Term::minus(None, b[i].clone(), Some(b[j].clone())),
                        Term::minus(Some(b[i].clone()), b[j].clone(), None),
                    ];
                    emit(ring, &terms, &mut sink);
                }
            }
        }
        DerivationKind::JordanDerivation => {
            for r in &b {
                let terms = [
                    Term::plus(mul(r, r)),
                    Term::minus(None, r.clone(), Some(r.clone())),
                    Term::minus(Some(r.clone()), r.clone(), None),
                ];
                emit(ring, &terms, &mut sink);
            }
            for i in 0..k {
                for j in i + 1..k {
                    let (r, s) = (&b[i], &b[j]);
                    let terms = [
                        Term::plus(mul(r, s).add(&mul(s, r))),
                        Term::minus(None, r.clone(), Some(s.clone())),
                        Term::minus(Some(r.clone()), s.clone(), None),
                        Term::minus(None, s.clone(), Some(r.clone())),
                        Term::minus(Some(s.clone()), r.clone(), None),
                    ];
                    emit(ring, &terms, &mut sink);
                }
            }
            for i in 0..k {
                for j in 0..k {
                    let (r, s) = (&b[i], &b[j]);
                    let rs = mul(r, s);
                    let terms = [
                        Term::plus(mul(&rs, r)),
                        Term::minus(None, r.clone(), Some(mul(s, r))),
                        Term::minus(Some(r.clone()), s.clone(), Some(r.clone())),
                        Term::minus(Some(rs), r.clone(), None),
                    ];
                    emit(ring, &terms, &mut sink);
                }
            }
            for i in 0..k {
                for l in i + 1..k {
                    for j in 0..k {
                        let (r, t, s) = (&b[i], &b[l], &b[j]);
                        let (rs, st, sr, ts) = (mul(r, s), mul(s, t), mul(s, r), mul(t, s));
                        let terms = [
                            Term::plus(mul(&rs, t).add(&mul(&ts, r))),
                            Term::minus(None, r.clone(), Some(st)),
                            Term::minus(Some(r.clone()), s.clone(), Some(t.clone())),
                            Term::minus(Some(rs), t.clone(), None),
                            Term::minus(None, t.clone(), Some(sr)),
                            Term::minus(Some(t.clone()), s.clone(), Some(r.clone())),
                            Term::minus(Some(ts), r.clone(), None),
                        ];
                        emit(ring, &terms, &mut sink);
                    }
                }
            }
        }
    }
}

/// The full constraint matrix, `k²` columns, rows in the documented order.
pub fn constraint_matrix(ring: &StructureRing, kind: DerivationKind) -> ZmMatrix {
    let k2 = ring.rank() * ring.rank();
    let mut data = Vec::new();
    let mut rows = 0;
    for_each_constraint_row(ring, kind, |row| {
        data.extend_from_slice(row);
        rows += 1;
    });
    ZmMatrix::from_raw(ring.modulus(), rows, k2, data)
}

/// Row span of the constraints, reduced in chunks so memory stays near `O(k⁴)`.
fn reduced_constraints(ring: &StructureRing, kind: DerivationKind) -> SubgroupBasis {
    let m = ring.modulus();
    let k2 = ring.rank() * ring.rank();
    let chunk = (4 * k2).max(256);
    let mut basis = SubgroupBasis::trivial(m, k2);
    let mut pending: Vec<u64> = Vec::new();
    let mut pending_rows = 0;
    let flush = |basis: &mut SubgroupBasis, pending: &mut Vec<u64>, pending_rows: &mut usize| {
        for g in basis.generators() {
            pending.extend_from_slice(g.entries());
            *pending_rows += 1;
        }
        *basis = howell_form(&ZmMatrix::from_raw(m, *pending_rows, k2, std::mem::take(pending)));
        *pending_rows = 0;
    };
    for_each_constraint_row(ring, kind, |row| {
        if row.iter().all(|&x| x == 0) {
            return;
        }
        pending.extend_from_slice(row);
        pending_rows += 1;
        if pending_rows >= chunk {
            flush(&mut basis, &mut pending, &mut pending_rows);
        }
    });
    flush(&mut basis, &mut pending, &mut pending_rows);
    basis
}

/// The subgroup of derivations or Jordan derivations, as a Howell basis in `(Z/m)^{k²}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationSpace {
    kind: DerivationKind,
    ring_rank: usize,
    basis: SubgroupBasis,
}

impl DerivationSpace {
    pub fn kind(&self) -> DerivationKind {
        self.kind
    }

    pub fn basis(&self) -> &SubgroupBasis {
        &self.basis
    }

    pub fn ring_rank(&self) -> usize {
        self.ring_rank
    }

    pub fn cardinality(&self) -> BigUint {
        self.basis.cardinality()
    }

    /// Generators decoded as maps.
    pub fn generators(&self, ring: &StructureRing) -> Vec<AdditiveMap> {
        self.basis
            .generators()
            .iter()
            .map(|g| AdditiveMap::from_unknowns(ring, g).expect("generator has k² entries"))
            .collect()
    }

    pub fn contains(&self, d: &AdditiveMap) -> bool {
        self.basis.contains(&d.to_unknowns()).expect("map rank matches space")
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.is_subgroup_of(&other.basis).expect("spaces over the same ring")
    }
}

fn solve(ring: &StructureRing, kind: DerivationKind) -> DerivationSpace {
    let constraints = reduced_constraints(ring, kind);
    let k2 = ring.rank() * ring.rank();
    let rows = ZmMatrix::from_vectors(ring.modulus(), k2, constraints.generators()).expect("constraint rows have k² entries");
    DerivationSpace { kind, ring_rank: ring.rank(), basis: zmod::kernel(&rows) }
}

pub fn solve_derivations(ring: &StructureRing) -> DerivationSpace {
    solve(ring, DerivationKind::Derivation)
}

pub fn solve_jordan_derivations(ring: &StructureRing) -> DerivationSpace {
    solve(ring, DerivationKind::JordanDerivation)
}

pub fn solve_space(ring: &StructureRing, kind: DerivationKind) -> DerivationSpace {
    solve(ring, kind)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpaceVerdict {
    Equal,
    ProperInclusion { witness: AdditiveMap },
}

impl SpaceVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Self::Equal)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceComparison {
    pub derivations: DerivationSpace,
    pub jordan_derivations: DerivationSpace,
    pub verdict: SpaceVerdict,
}

/// Solves both spaces and decides whether every Jordan derivation is a derivation.
pub fn compare_spaces(ring: &StructureRing) -> SpaceComparison {
    let der = solve_derivations(ring);
    let jder = solve_jordan_derivations(ring);
    debug_assert!(der.is_subspace_of(&jder));
    let verdict = if der.basis == jder.basis {
        SpaceVerdict::Equal
    } else {
        let gens = jder.generators(ring);
        let single = gens.iter().find(|g| !der.contains(g)).cloned();
        let witness = single.or_else(|| {
            gens.iter()
                .enumerate()
                .flat_map(|(i, a)| gens[i + 1..].iter().map(move |b| a.add(b)))
                .find(|g| !der.contains(g))
        });
        SpaceVerdict::ProperInclusion { witness: witness.expect("unequal subgroups differ on a generator") }
    };
    SpaceComparison { derivations: der, jordan_derivations: jder, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::matrix_ring;

    fn z(m: u64) -> StructureRing {
        StructureRing::zmod(m).unwrap()
    }

    #[test]
    fn prime_field_has_no_derivations() {
        for p in [2, 3, 5, 7] {
            assert!(solve_derivations(&z(p)).basis().is_trivial());
            assert!(solve_jordan_derivations(&z(p)).basis().is_trivial());
        }
    }

    #[test]
    fn dual_numbers_derivations() {
        let r = StructureRing::dual_numbers(2).unwrap();
        let der = solve_derivations(&r);
        assert_eq!(der.cardinality(), BigUint::from(4u32));
        for g in der.generators(&r) {
            assert!(g.image(0).is_zero(), "d(1) = 0");
        }
    }

    #[test]
    fn zero_map_is_in_every_space() {
        for r in [z(4), StructureRing::dual_numbers(3).unwrap(), matrix_ring(&z(2), 2).unwrap().into_ring()] {
            let zero = AdditiveMap::zero(&r);
            assert!(solve_derivations(&r).contains(&zero));
            assert!(check_map(&r, &zero, DerivationKind::Derivation).is_ok());
            assert!(check_map(&r, &zero, DerivationKind::JordanDerivation).is_ok());
        }
    }

    #[test]
    fn derivations_are_jordan() {
        for r in [z(6), StructureRing::dual_numbers(4).unwrap(), matrix_ring(&z(2), 2).unwrap().into_ring()] {
            assert!(solve_derivations(&r).is_subspace_of(&solve_jordan_derivations(&r)));
        }
    }

    #[test]
    fn z4_doubling_of_unit_is_not_a_derivation() {
        let r = z(4);
        let d = AdditiveMap::from_images(&r, &[ZmVector::new(4, vec![2]).unwrap()]).unwrap();
        let v = check_map(&r, &d, DerivationKind::Derivation).unwrap_err();
        assert_eq!(v.indices, vec![0, 0]);
    }

    #[test]
    fn inner_derivations() {
        let mr = matrix_ring(&z(2), 2).unwrap();
        let r = mr.ring();
        let one = r.unit_vector().unwrap();
        assert!(inner_derivation(r, one).is_zero());
        let ad = inner_derivation(r, &mr.matrix_unit(0, 1));
        assert!(check_map(r, &ad, DerivationKind::Derivation).is_ok());
        let img = ad.apply(&mr.matrix_unit(1, 0));
        assert_eq!(img, mr.matrix_unit(0, 0).add(&mr.matrix_unit(1, 1)));
        let a = mr.matrix_unit(0, 1);
        let b = mr.matrix_unit(1, 1);
        assert_eq!(inner_derivation(r, &a.add(&b)), inner_derivation(r, &a).add(&inner_derivation(r, &b)));
    }

    #[test]
    fn z2_has_no_jordan_derivations() {
        let cmp = compare_spaces(&z(2));
        assert!(cmp.verdict.is_equal());
        assert_eq!(cmp.jordan_derivations.cardinality(), BigUint::from(1u32));
    }

    #[test]
    fn zero_multiplication_admits_every_map() {
        let r = StructureRing::zero_multiplication(2, 1).unwrap();
        let cmp = compare_spaces(&r);
        assert!(cmp.verdict.is_equal());
        assert_eq!(cmp.derivations.cardinality(), BigUint::from(2u32));
    }

    #[test]
    fn solver_generators_pass_direct_check() {
        let r = matrix_ring(&z(3), 2).unwrap().into_ring();
        let cmp = compare_spaces(&r);
        assert!(cmp.verdict.is_equal());
        for g in cmp.jordan_derivations.generators(&r) {
            check_map(&r, &g, DerivationKind::JordanDerivation).unwrap();
            check_map(&r, &g, DerivationKind::Derivation).unwrap();
        }
    }

    #[test]
    fn constraint_rows_follow_layout() {
        let r = StructureRing::dual_numbers(2).unwrap();
        // Q1: 2, Q1pol: 1, Q2: 4, Q2pol: 2 vector equations, 2 scalar rows each.
        assert_eq!(constraint_matrix(&r, DerivationKind::JordanDerivation).rows(), 18);
        assert_eq!(constraint_matrix(&r, DerivationKind::Derivation).rows(), 8);
    }

    #[test]
    fn unknown_round_trip() {
        let r = StructureRing::dual_numbers(3).unwrap();
        let v = ZmVector::new(3, vec![1, 2, 0, 1]).unwrap();
        let d = AdditiveMap::from_unknowns(&r, &v).unwrap();
        assert_eq!(d.image(0).entries(), &[1, 2]);
        assert_eq!(d.to_unknowns(), v);
    }
}
