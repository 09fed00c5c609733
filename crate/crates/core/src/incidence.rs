//! Finitary incidence rings `FI(P, R)` of finite preorders.
//!
//! For finite `P` the hom-block `Mor(x̄, ȳ) = RFM_{x̄×ȳ}(R)` flattens to one copy of `R`
//! per pair `p ⪯ q`, and convolution becomes
//! `(αβ)_{pq} = Σ_{p ⪯ z ⪯ q} α_{pz} β_{zq}`.
//! Basis element `(p, q, t)` is `b_t` placed at `(p, q)`; basis order is lexicographic in
//! `(class(p), class(q), p, q, t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::preorder::{Preorder, QuotientPoset};
use crate::ring::{RingElement, StructureRing};
use crate::zmod::ZmVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceRing {
    preorder: Preorder,
    quotient: QuotientPoset,
    coeff: StructureRing,
    ring: StructureRing,
    pairs: Vec<(usize, usize)>,
    /// `pair_index[p*n + q]`, `None` when `p ⋠ q`.
    pair_index: Vec<Option<usize>>,
}

/// An element of `FI(P, R)`: one coefficient of `R` per comparable pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceElement<'a> {
    fi: &'a IncidenceRing,
    coeffs: ZmVector,
}

impl<'a> IncidenceElement<'a> {
    pub fn coeffs(&self) -> &ZmVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> ZmVector {
        self.coeffs
    }

    /// `α_{pq}`; zero when `p ⋠ q`.
    pub fn entry(&self, p: usize, q: usize) -> ZmVector {
        self.fi.entry(&self.coeffs, p, q)
    }

    pub fn as_ring_element(&self) -> RingElement<'a> {
        self.fi.ring.elem(self.coeffs.clone())
    }
}

/// Assembles `FI(P, R)` for a unital `R`.
pub fn fi_ring(preorder: &Preorder, coeff: &StructureRing) -> Result<IncidenceRing> {
    let one = coeff.require_unit()?;
    let quotient = preorder.quotient();
    let n = preorder.len();
    let k = coeff.rank();
    let m = coeff.modulus();

    let mut pairs: Vec<(usize, usize)> = preorder.relation_pairs().collect();
    pairs.sort_by_key(|&(p, q)| (quotient.class_of(p), quotient.class_of(q), p, q));
    let mut pair_index = vec![None; n * n];
    for (i, &(p, q)) in pairs.iter().enumerate() {
        pair_index[p * n + q] = Some(i);
    }

    let dim = pairs.len() * k;
    let mut table = vec![0u64; dim * dim * dim];
    for (a, &(p, q)) in pairs.iter().enumerate() {
        for (b, &(q2, r)) in pairs.iter().enumerate() {
            if q != q2 {
                continue;
            }
            let c = pair_index[p * n + r].expect("p ⪯ q ⪯ r implies p ⪯ r");
            for t in 0..k {
                for u in 0..k {
                    let row = ((a * k + t) * dim + b * k + u) * dim + c * k;
                    table[row..row + k].copy_from_slice(coeff.basis_product(t, u));
                }
            }
        }
    }
    let mut unit = vec![0u64; dim];
    for p in 0..n {
        let i = pair_index[p * n + p].expect("reflexive");
        unit[i * k..(i + 1) * k].copy_from_slice(one.entries());
    }
    let mut labels = Vec::with_capacity(dim);
    for &(p, q) in &pairs {
        for t in 0..k {
            labels.push(format!("[{},{}]·{}", preorder.labels()[p], preorder.labels()[q], coeff.labels()[t]));
        }
    }
    let ring = StructureRing::from_table_unchecked(m, labels, table, Some(ZmVector::from_reduced(m, unit)));
    Ok(IncidenceRing { preorder: preorder.clone(), quotient, coeff: coeff.clone(), ring, pairs, pair_index })
}

impl IncidenceRing {
    pub fn ring(&self) -> &StructureRing {
        &self.ring
    }

    pub fn coefficient_ring(&self) -> &StructureRing {
        &self.coeff
    }

    pub fn preorder(&self) -> &Preorder {
        &self.preorder
    }

    pub fn quotient(&self) -> &QuotientPoset {
        &self.quotient
    }

    /// Comparable pairs in basis order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, p: usize, q: usize) -> Option<usize> {
        self.pair_index[p * self.preorder.len() + q]
    }

    /// Basis index of `(p, q, t)`.
    pub fn index(&self, p: usize, q: usize, t: usize) -> Option<usize> {
        self.pair_index(p, q).map(|i| i * self.coeff.rank() + t)
    }

    /// Decodes a basis index into `(p, q, t)`.
    pub fn basis_triple(&self, idx: usize) -> (usize, usize, usize) {
        let k = self.coeff.rank();
        let (p, q) = self.pairs[idx / k];
        (p, q, idx % k)
    }

    pub fn element(&self, coeffs: ZmVector) -> Result<IncidenceElement<'_>> {
        if coeffs.modulus() != self.ring.modulus() {
            return Err(Error::ModulusMismatch { expected: self.ring.modulus(), found: coeffs.modulus() });
        }
        if coeffs.len() != self.ring.rank() {
            return Err(Error::DimensionMismatch { expected: self.ring.rank(), found: coeffs.len() });
        }
        Ok(IncidenceElement { fi: self, coeffs })
    }

    pub fn entry(&self, alpha: &ZmVector, p: usize, q: usize) -> ZmVector {
        let k = self.coeff.rank();
        match self.pair_index(p, q) {
            Some(i) => ZmVector::from_reduced(self.ring.modulus(), alpha.entries()[i * k..(i + 1) * k].to_vec()),
            None => ZmVector::zero(self.ring.modulus(), k),
        }
    }

    /// `r[p, q]`: the element with single entry `r` at `(p, q)`.
    pub fn place(&self, p: usize, q: usize, r: &ZmVector) -> Result<ZmVector> {
        let k = self.coeff.rank();
        let i = self.pair_index(p, q).ok_or_else(|| {
            Error::UnknownLabel(format!("{} ⋠ {}", self.preorder.labels()[p], self.preorder.labels()[q]))
        })?;
        let mut v = vec![0; self.ring.rank()];
        v[i * k..(i + 1) * k].copy_from_slice(r.entries());
        Ok(ZmVector::from_reduced(self.ring.modulus(), v))
    }

    /// Convolution evaluated straight from the interval sums, independent of the
    /// assembled structure constants.
    pub fn convolve(&self, alpha: &IncidenceElement<'_>, beta: &IncidenceElement<'_>) -> Result<IncidenceElement<'_>> {
        if !std::ptr::eq(alpha.fi, self) || !std::ptr::eq(beta.fi, self) {
            return Err(Error::DimensionMismatch { expected: self.ring.rank(), found: usize::MAX });
        }
        let n = self.preorder.len();
        let k = self.coeff.rank();
        let mut out = vec![0u64; self.ring.rank()];
        for (i, &(p, q)) in self.pairs.iter().enumerate() {
            let mut acc = ZmVector::zero(self.ring.modulus(), k);
            for z in (0..n).filter(|&z| self.preorder.le(p, z) && self.preorder.le(z, q)) {
                acc = acc.add(&self.coeff.mul_vectors(&alpha.entry(p, z), &beta.entry(z, q)));
            }
            out[i * k..(i + 1) * k].copy_from_slice(acc.entries());
        }
        self.element(ZmVector::from_reduced(self.ring.modulus(), out))
    }

    /// `e_{x̄} = Σ_{p ∈ x̄} 1_R [p, p]`.
    pub fn class_idempotent(&self, class: usize) -> Result<ZmVector> {
        let members = self.quotient.class(class)?;
        let one = self.coeff.unit_vector().expect("FI is only built over unital rings");
        let k = self.coeff.rank();
        let mut v = vec![0; self.ring.rank()];
        for &p in members {
            let i = self.pair_index(p, p).expect("reflexive");
            v[i * k..(i + 1) * k].copy_from_slice(one.entries());
        }
        Ok(ZmVector::from_reduced(self.ring.modulus(), v))
    }

    pub fn class_idempotents(&self) -> Vec<ZmVector> {
        (0..self.quotient.num_classes()).map(|a| self.class_idempotent(a).expect("class in range")).collect()
    }

    /// The `(x̄, ȳ)` hom-block of `α` as an `|x̄|×|ȳ|` matrix over `R`; all zero when `x̄ ≰ ȳ`.
    pub fn extract_block(&self, alpha: &ZmVector, a: usize, b: usize) -> Result<Vec<Vec<ZmVector>>> {
        let xs = self.quotient.class(a)?;
        let ys = self.quotient.class(b)?;
        Ok(xs.iter().map(|&p| ys.iter().map(|&q| self.entry(alpha, p, q)).collect()).collect())
    }

    /// Keeps only the entries of `α` inside the `(x̄, ȳ)` block.
    pub fn restrict_to_block(&self, alpha: &ZmVector, a: usize, b: usize) -> Result<ZmVector> {
        let xs = self.quotient.class(a)?;
        let ys = self.quotient.class(b)?;
        let k = self.coeff.rank();
        let mut v = vec![0; self.ring.rank()];
        for &p in xs {
            for &q in ys {
                if let Some(i) = self.pair_index(p, q) {
                    v[i * k..(i + 1) * k].copy_from_slice(&alpha.entries()[i * k..(i + 1) * k]);
                }
            }
        }
        Ok(ZmVector::from_reduced(self.ring.modulus(), v))
    }

    /// Every series over a finite preorder is finitary; kept so callers can state the
    /// condition explicitly.
    pub fn is_finitary(&self, _alpha: &ZmVector) -> bool {
        true
    }
}

/// Outcome of checking `ersf = Σ_{g ∈ E(e,r,s,f)} ergsf` over all basis `r, s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub passed: bool,
    pub cases_checked: usize,
    /// Largest `|E(e, r, s, f)|` seen; bounded by `|E|`, so always finite here.
    pub max_support: usize,
    pub failures: Vec<FamilyWitness>,
}

/// Family indices `e`, `f` and basis indices `r`, `s` where the decomposition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyWitness {
    pub e: usize,
    pub f: usize,
    pub r: usize,
    pub s: usize,
}

/// Checks the orthogonal-family decomposition conditions for `E` in `R`.
pub fn verify_family_conditions(ring: &StructureRing, family: &[ZmVector]) -> Result<FamilyReport> {
    ring.check_orthogonal_family(family)?;
    let k = ring.rank();
    let mut failures = Vec::new();
    let mut max_support = 0;
    let mut cases = 0;
    for (ei, e) in family.iter().enumerate() {
        let e = ring.elem(e.clone());
        for (fi, f) in family.iter().enumerate() {
            let f = ring.elem(f.clone());
            for r in 0..k {
                let er = &e * ring.basis(r);
                for s in 0..k {
                    let sf = ring.basis(s) * &f;
                    let lhs = &er * &sf;
                    let mut rhs = ring.zero();
                    let mut support = 0;
                    for g in family {
                        let term = &er * ring.elem(g.clone()) * &sf;
                        if !term.is_zero() {
                            support += 1;
                            rhs = rhs + term;
                        }
                    }
                    max_support = max_support.max(support);
                    cases += 1;
                    if lhs != rhs {
                        failures.push(FamilyWitness { e: ei, f: fi, r, s });
                    }
                }
            }
        }
    }
    Ok(FamilyReport { passed: failures.is_empty(), cases_checked: cases, max_support, failures })
}
