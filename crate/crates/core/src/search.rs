//! Enumeration of small structure-constant rings, looking for Jordan derivations that are
//! not derivations.

use serde::Serialize;

use crate::derivation::{compare_spaces, AdditiveMap, SpaceVerdict};
use crate::error::{Error, Result};
use crate::ring::StructureRing;
use crate::zmod::{check_modulus, ZmVector};

/// Highest rank the search enumerates; rank 3 already means `m^27` tables.
pub const MAX_SEARCH_RANK: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    pub modulus: u64,
    pub rank: usize,
    pub table: Vec<u64>,
    pub unit: Option<ZmVector>,
    pub witness: AdditiveMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub moduli: Vec<u64>,
    pub max_rank: usize,
    pub tables_examined: u64,
    pub associative: u64,
    pub unital: u64,
    pub hits: Vec<SearchHit>,
    pub summary: String,
}

/// The unit of the table, if one exists, found by testing every element.
pub fn find_unit(ring: &StructureRing) -> Option<ZmVector> {
    let k = ring.rank();
    ring.elements().find(|e| {
        (0..k).all(|i| {
            let b = ZmVector::unit_vector(ring.modulus(), k, i);
            ring.mul_vectors(e, &b) == b && ring.mul_vectors(&b, e) == b
        })
    })
}

/// Every associative table of rank `k` over `Z/m`, in lexicographic order of the flat table.
pub fn associative_tables(modulus: u64, rank: usize) -> Result<impl Iterator<Item = StructureRing>> {
    check_modulus(modulus)?;
    if rank > MAX_SEARCH_RANK {
        return Err(Error::SizeBudget { required: rank, budget: MAX_SEARCH_RANK });
    }
    let len = rank * rank * rank;
    let total = modulus.pow(len as u32);
    let labels: Vec<String> = (0..rank).map(|i| format!("b{i}")).collect();
    Ok((0..total).filter_map(move |mut code| {
        let table: Vec<u64> = (0..len)
            .map(|_| {
                let x = code % modulus;
                code /= modulus;
                x
            })
            .collect();
        StructureRing::from_table(modulus, labels.clone(), table, None).ok()
    }))
}

/// Solves both spaces for every associative table of rank `1..=max_rank` over each modulus.
pub fn search(moduli: &[u64], max_rank: usize) -> Result<SearchReport> {
    if max_rank > MAX_SEARCH_RANK {
        return Err(Error::SizeBudget { required: max_rank, budget: MAX_SEARCH_RANK });
    }
    let mut moduli = moduli.to_vec();
    moduli.sort_unstable();
    moduli.dedup();
    let mut report = SearchReport {
        moduli: moduli.clone(),
        max_rank,
        tables_examined: 0,
        associative: 0,
        unital: 0,
        hits: Vec::new(),
        summary: String::new(),
    };
    for &m in &moduli {
        for k in 1..=max_rank {
            report.tables_examined += m.pow((k * k * k) as u32);
            for ring in associative_tables(m, k)? {
                report.associative += 1;
                let unit = find_unit(&ring);
                report.unital += u64::from(unit.is_some());
                if let SpaceVerdict::ProperInclusion { witness } = compare_spaces(&ring).verdict {
                    report.hits.push(SearchHit { modulus: m, rank: k, table: ring.table().to_vec(), unit, witness });
                }
            }
        }
    }
    report.summary = if report.hits.is_empty() {
        "none found in family".into()
    } else {
        format!("{} ring(s) with a Jordan derivation that is not a derivation", report.hits.len())
    };
    Ok(report)
}
