//! Brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the solver. Rings are handled through their raw structure constants,
//! elements are enumerated as integers in mixed radix, and maps are classified by checking
//! the axioms on every element.

#![allow(dead_code)]

use std::collections::BTreeSet;

use fi_jordan::{StructureRing, ZmMatrix, ZmVector};

/// Largest `m^{k²}` the exhaustive classifier is used for.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;

/// All elements of a finite ring with multiplication and addition tables on indices.
pub struct ElementTables {
    pub m: u64,
    pub k: usize,
    pub n: usize,
    pub add: Vec<usize>,
    pub mul: Vec<usize>,
}

pub fn encode(v: &[u64], m: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * m as usize + x as usize)
}

pub fn decode(mut code: usize, m: u64, k: usize) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let x = (code % m as usize) as u64;
            code /= m as usize;
            x
        })
        .collect()
}

/// Product straight from the structure constants `table[(i*k + j)*k + t]`.
pub fn table_mul(table: &[u64], m: u64, k: usize, x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; k];
    for i in 0..k {
        for j in 0..k {
            let c = x[i] * y[j] % m;
            if c == 0 {
                continue;
            }
            for t in 0..k {
                out[t] = (out[t] + c * table[(i * k + j) * k + t]) % m;
            }
        }
    }
    out
}

impl ElementTables {
    pub fn new(ring: &StructureRing) -> Self {
        let m = ring.modulus();
        let k = ring.rank();
        let n = (m as usize).pow(k as u32);
        let elems: Vec<Vec<u64>> = (0..n).map(|c| decode(c, m, k)).collect();
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u64> = elems[a].iter().zip(&elems[b]).map(|(x, y)| (x + y) % m).collect();
                add[a * n + b] = encode(&s, m);
                mul[a * n + b] = encode(&table_mul(ring.table(), m, k, &elems[a], &elems[b]), m);
            }
        }
        Self { m, k, n, add, mul }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    /// Images of every element under the map whose column-major unknowns are `unknowns`.
    pub fn images(&self, unknowns: &[u64]) -> Vec<usize> {
        let (m, k) = (self.m, self.k);
        let cols: Vec<usize> = (0..k).map(|j| encode(&unknowns[j * k..(j + 1) * k], m)).collect();
        // Each element is x_0 b_0 + ..., so build images by repeated addition in mixed radix.
        let mut img = vec![0usize; self.n];
        for code in 1..self.n {
            // Lowest nonzero digit decremented gives a smaller code with a known image.
            let digits = decode(code, m, k);
            let j = digits.iter().position(|&x| x != 0).unwrap();
            let prev = code - (m as usize).pow(j as u32);
            img[code] = self.add(img[prev], cols[j]);
        }
        img
    }

    pub fn is_derivation(&self, d: &[usize]) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|s| d[self.mul(r, s)] == self.add(self.mul(d[r], s), self.mul(r, d[s])))
        })
    }

    pub fn is_jordan(&self, d: &[usize]) -> bool {
        for r in 0..self.n {
            if d[self.mul(r, r)] != self.add(self.mul(d[r], r), self.mul(r, d[r])) {
                return false;
            }
        }
        for r in 0..self.n {
            for s in 0..self.n {
                let sr = self.mul(s, r);
                let rs = self.mul(r, s);
                let lhs = d[self.mul(rs, r)];
                let rhs = self.add(self.add(self.mul(d[r], sr), self.mul(self.mul(r, d[s]), r)), self.mul(rs, d[r]));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Every additive map, classified by the element-level axioms.
pub struct Classification {
    pub derivations: Vec<Vec<u64>>,
    pub jordan: Vec<Vec<u64>>,
}

pub fn classify_all_maps(ring: &StructureRing) -> Classification {
    let m = ring.modulus();
    let k = ring.rank();
    let total = m.checked_pow((k * k) as u32).expect("map count fits in u64");
    assert!(total <= EXHAUSTIVE_LIMIT, "exhaustive classification limited to 2^20 maps");
    let tables = ElementTables::new(ring);
    let mut derivations = Vec::new();
    let mut jordan = Vec::new();
    for code in 0..total as usize {
        let unknowns = decode(code, m, k * k);
        let img = tables.images(&unknowns);
        if tables.is_jordan(&img) {
            if tables.is_derivation(&img) {
                derivations.push(unknowns.clone());
            }
            jordan.push(unknowns);
        }
    }
    Classification { derivations, jordan }
}

/// All `Σ c_i g_i`, by enumerating coefficient tuples.
pub fn enumerate_span(m: u64, dim: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::new();
    set.insert(vec![0; dim]);
    for g in gens {
        let current: Vec<Vec<u64>> = set.iter().cloned().collect();
        for v in current {
            let mut w = v.clone();
            for _ in 1..m {
                for (x, y) in w.iter_mut().zip(g) {
                    *x = (*x + y) % m;
                }
                set.insert(w.clone());
            }
        }
    }
    set
}

/// `{x : Ax = 0}` by testing every vector.
pub fn enumerate_kernel(a: &ZmMatrix) -> BTreeSet<Vec<u64>> {
    let m = a.modulus();
    let c = a.cols();
    let n = (m as usize).pow(c as u32);
    (0..n)
        .map(|code| decode(code, m, c))
        .filter(|x| {
            (0..a.rows()).all(|r| (0..c).map(|j| a.get(r, j) * x[j] % m).sum::<u64>() % m == 0)
        })
        .collect()
}

pub fn vectors(m: u64, set: &BTreeSet<Vec<u64>>) -> Vec<ZmVector> {
    set.iter().map(|v| ZmVector::new(m, v.clone()).unwrap()).collect()
}

/// Element-level axiom defects evaluated with [`table_mul`] only.
pub struct RawRing<'a> {
    pub table: &'a [u64],
    pub m: u64,
    pub k: usize,
}

impl<'a> RawRing<'a> {
    pub fn new(ring: &'a StructureRing) -> Self {
        Self { table: ring.table(), m: ring.modulus(), k: ring.rank() }
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        table_mul(self.table, self.m, self.k, x, y)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + b) % self.m).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + self.m - b) % self.m).collect()
    }

    /// `D x` with `D` column-major in `unknowns`.
    pub fn apply(&self, unknowns: &[u64], x: &[u64]) -> Vec<u64> {
        let k = self.k;
        let mut out = vec![0; k];
        for j in 0..k {
            for t in 0..k {
                out[t] = (out[t] + unknowns[j * k + t] * x[j]) % self.m;
            }
        }
        out
    }

    pub fn q1(&self, d: &[u64], r: &[u64]) -> bool {
        let dr = self.apply(d, r);
        self.apply(d, &self.mul(r, r)) == self.add(&self.mul(&dr, r), &self.mul(r, &dr))
    }

    pub fn q2(&self, d: &[u64], r: &[u64], s: &[u64]) -> bool {
        let (dr, ds) = (self.apply(d, r), self.apply(d, s));
        let rs = self.mul(r, s);
        let lhs = self.apply(d, &self.mul(&rs, r));
        let rhs = self.add(&self.add(&self.mul(&self.mul(&dr, s), r), &self.mul(&self.mul(r, &ds), r)), &self.mul(&rs, &dr));
        lhs == rhs
    }

    pub fn herstein(&self, d: &[u64], r: &[u64], s: &[u64], t: &[u64]) -> bool {
        let (dr, ds, dt) = (self.apply(d, r), self.apply(d, s), self.apply(d, t));
        let m3 = |a: &[u64], b: &[u64], c: &[u64]| self.mul(&self.mul(a, b), c);
        let lhs = self.apply(d, &self.add(&m3(r, s, t), &m3(t, s, r)));
        let terms = [m3(&dr, s, t), m3(r, &ds, t), m3(r, s, &dt), m3(&dt, s, r), m3(t, &ds, r), m3(t, s, &dr)];
        let rhs = terms.iter().fold(vec![0; self.k], |acc, x| self.add(&acc, x));
        lhs == rhs
    }

    pub fn is_derivation_at(&self, d: &[u64], r: &[u64], s: &[u64]) -> bool {
        self.apply(d, &self.mul(r, s)) == self.add(&self.mul(&self.apply(d, r), s), &self.mul(r, &self.apply(d, s)))
    }
}

pub fn result_line(index: usize, name: &str, ok: bool, detail: &str) {
    println!("criterion {index:>2} {} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
}
