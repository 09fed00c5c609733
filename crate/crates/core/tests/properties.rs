mod common;

use common::{enumerate_kernel, enumerate_span, RawRing};
use fi_jordan::analysis::{construct_dprime, restrict_to_class};
use fi_jordan::{
    check_map, fi_ring, howell_form, inner_derivation, kernel, matrix_ring, solve_derivations,
    solve_jordan_derivations, AdditiveMap, DerivationKind, Preorder, StructureRing, ZmMatrix, ZmVector,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = ZmMatrix> {
    (prop::sample::select(vec![2u64, 3, 4, 6, 8, 9, 12]), 0..=max_rows, 1..=max_cols).prop_flat_map(|(m, r, c)| {
        prop::collection::vec(0..m, r * c).prop_map(move |data| {
            let rows: Vec<Vec<i64>> = data.chunks(c).map(|ch| ch.iter().map(|&x| x as i64).collect()).collect();
            ZmMatrix::from_rows(m, c, &rows).unwrap()
        })
    })
}

fn rows_of(a: &ZmMatrix) -> Vec<Vec<u64>> {
    (0..a.rows()).map(|r| a.row(r).to_vec()).collect()
}

fn preorder_strategy(max_n: usize) -> impl Strategy<Value = Preorder> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let pairs: Vec<(String, String)> = (0..n * n)
                .filter(|&i| bits[i])
                .map(|i| (labels[i / n].clone(), labels[i % n].clone()))
                .collect();
            Preorder::from_pairs(&labels, &pairs, true).unwrap()
        })
    })
}

fn coefficient_strategy() -> impl Strategy<Value = StructureRing> {
    prop_oneof![
        Just(StructureRing::zmod(2).unwrap()),
        Just(StructureRing::zmod(3).unwrap()),
        Just(StructureRing::zmod(4).unwrap()),
        Just(StructureRing::zmod(6).unwrap()),
    ]
}

fn element(m: u64, k: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..m, k)
}

/// A random element of the Jordan space: a combination of its generators.
fn combination(gens: &[AdditiveMap], coeffs: &[u64], ring: &StructureRing) -> AdditiveMap {
    gens.iter().zip(coeffs.iter().cycle()).fold(AdditiveMap::zero(ring), |acc, (g, &c)| {
        let scaled = AdditiveMap::from_unknowns(ring, &g.to_unknowns().scale(c)).unwrap();
        acc.add(&scaled)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn howell_form_is_idempotent_and_canonical(a in matrix_strategy(5, 4), shuffle in any::<u64>()) {
        let h = howell_form(&a);
        let again = howell_form(&ZmMatrix::from_vectors(a.modulus(), a.cols(), h.generators()).unwrap());
        prop_assert_eq!(&again, &h);
        // Reversing rows, rotating, and adding one row to another keep the span.
        let mut rows = rows_of(&a);
        rows.reverse();
        if !rows.is_empty() {
            let len = rows.len();
            rows.rotate_left((shuffle as usize) % len);
            if len > 1 {
                let src = rows[0].clone();
                for (x, y) in rows[len - 1].iter_mut().zip(&src) {
                    *x = (*x + y * (shuffle % a.modulus())) % a.modulus();
                }
            }
        }
        let as_i64: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        let b = ZmMatrix::from_rows(a.modulus(), a.cols(), &as_i64).unwrap();
        prop_assert_eq!(howell_form(&b), h);
    }

    #[test]
    fn howell_cardinality_matches_enumeration(a in matrix_strategy(4, 3)) {
        let span = enumerate_span(a.modulus(), a.cols(), &rows_of(&a));
        let h = howell_form(&a);
        prop_assert_eq!(h.cardinality(), BigUint::from(span.len()));
        for v in &span {
            prop_assert!(h.contains(&ZmVector::new(a.modulus(), v.clone()).unwrap()).unwrap());
        }
    }

    #[test]
    fn kernel_is_sound_and_complete(a in matrix_strategy(4, 3)) {
        let ker = kernel(&a);
        for g in ker.generators() {
            prop_assert!(a.mul_vector(g).unwrap().is_zero());
        }
        let oracle = enumerate_kernel(&a);
        prop_assert_eq!(ker.cardinality(), BigUint::from(oracle.len()));
        for v in &oracle {
            prop_assert!(ker.contains(&ZmVector::new(a.modulus(), v.clone()).unwrap()).unwrap());
        }
    }

    #[test]
    fn incidence_rings_are_associative_with_block_law(p in preorder_strategy(4), r in coefficient_strategy(), seed in any::<u64>()) {
        let fi = fi_ring(&p, &r).unwrap();
        prop_assert!(fi.ring().check_associativity().is_ok());
        let fam = fi.class_idempotents();
        let sum = fam.iter().fold(ZmVector::zero(r.modulus(), fi.ring().rank()), |acc, e| acc.add(e));
        prop_assert_eq!(&sum, fi.ring().unit_vector().unwrap());
        let alpha = ZmVector::new(r.modulus(), (0..fi.ring().rank()).map(|i| (seed >> (i % 60)) % r.modulus()).collect()).unwrap();
        let q = fi.quotient();
        let mut rebuilt = ZmVector::zero(r.modulus(), fi.ring().rank());
        for x in 0..q.num_classes() {
            for y in 0..q.num_classes() {
                let block = fi.ring().mul_vectors(&fi.ring().mul_vectors(&fam[x], &alpha), &fam[y]);
                prop_assert_eq!(&block, &fi.restrict_to_block(&alpha, x, y).unwrap());
                if !q.le(x, y) {
                    prop_assert!(block.is_zero());
                }
                rebuilt = rebuilt.add(&block);
            }
        }
        prop_assert_eq!(rebuilt, alpha);
        let report = fi_jordan::verify_family_conditions(fi.ring(), &fam).unwrap();
        prop_assert!(report.passed);
    }

    #[test]
    fn convolution_matches_table_product(p in preorder_strategy(4), r in coefficient_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let fi = fi_ring(&p, &r).unwrap();
        let m = r.modulus();
        let k = fi.ring().rank();
        let mk = |s: u64| ZmVector::new(m, (0..k).map(|i| s.rotate_left(i as u32 * 7) % m).collect()).unwrap();
        let (x, y) = (fi.element(mk(a)).unwrap(), fi.element(mk(b)).unwrap());
        let conv = fi.convolve(&x, &y).unwrap();
        prop_assert_eq!(conv.coeffs(), &fi.ring().mul_vectors(x.coeffs(), y.coeffs()));
    }

    #[test]
    fn relabelling_preserves_spaces(p in preorder_strategy(3), r in coefficient_strategy(), rot in 0usize..3) {
        let n = p.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let q = p.relabel(&perm);
        prop_assert_eq!(p.quotient().num_classes(), q.quotient().num_classes());
        prop_assert_eq!(p.isolated_elements().len(), q.isolated_elements().len());
        let (a, b) = (fi_ring(&p, &r).unwrap(), fi_ring(&q, &r).unwrap());
        prop_assert_eq!(solve_derivations(a.ring()).cardinality(), solve_derivations(b.ring()).cardinality());
        prop_assert_eq!(solve_jordan_derivations(a.ring()).cardinality(), solve_jordan_derivations(b.ring()).cardinality());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// The basis-level constraint set implies the axioms on arbitrary elements.
    #[test]
    fn jordan_space_satisfies_axioms_on_random_elements(
        p in preorder_strategy(3),
        r in coefficient_strategy(),
        coeffs in prop::collection::vec(0u64..12, 1..8),
        elems in prop::collection::vec(any::<u64>(), 3),
    ) {
        let fi = fi_ring(&p, &r).unwrap();
        let ring = fi.ring();
        let gens = solve_jordan_derivations(ring).generators(ring);
        let d = combination(&gens, &coeffs, ring).to_unknowns().into_entries();
        let raw = RawRing::new(ring);
        let (m, k) = (ring.modulus(), ring.rank());
        let mk = |s: u64| -> Vec<u64> { (0..k).map(|i| s.rotate_left(i as u32 * 11) % m).collect() };
        let (x, y, t) = (mk(elems[0]), mk(elems[1]), mk(elems[2]));
        prop_assert!(raw.q1(&d, &x));
        prop_assert!(raw.q2(&d, &x, &y));
        prop_assert!(raw.herstein(&d, &x, &y, &t));
    }

    #[test]
    fn derivations_form_a_subspace_of_jordan(p in preorder_strategy(3), r in coefficient_strategy()) {
        let fi = fi_ring(&p, &r).unwrap();
        let der = solve_derivations(fi.ring());
        let jder = solve_jordan_derivations(fi.ring());
        prop_assert!(der.is_subspace_of(&jder));
        for g in der.generators(fi.ring()) {
            prop_assert!(check_map(fi.ring(), &g, DerivationKind::Derivation).is_ok());
        }
        for g in jder.generators(fi.ring()) {
            prop_assert!(check_map(fi.ring(), &g, DerivationKind::JordanDerivation).is_ok());
        }
    }

    #[test]
    fn inner_derivations_are_derivations(n in 1usize..=3, m in prop::sample::select(vec![2u64, 3, 4, 6]), a in element(6, 9)) {
        let mr = matrix_ring(&StructureRing::zmod(m).unwrap(), n).unwrap();
        let a = ZmVector::new(m, a.iter().take(n * n).map(|&x| x % m).collect()).unwrap();
        let d = inner_derivation(mr.ring(), &a);
        prop_assert!(check_map(mr.ring(), &d, DerivationKind::Derivation).is_ok());
        prop_assert!(solve_derivations(mr.ring()).contains(&d));
    }

    /// `d′ = d`, hence `d′` is idempotent, and `d` is a derivation exactly when every `d_x` is.
    #[test]
    fn dprime_and_class_restrictions(p in preorder_strategy(3), r in coefficient_strategy(), coeffs in prop::collection::vec(0u64..12, 1..8)) {
        let fi = fi_ring(&p, &r).unwrap();
        let ring = fi.ring();
        let fam = fi.class_idempotents();
        let gens = solve_jordan_derivations(ring).generators(ring);
        let d = combination(&gens, &coeffs, ring);
        let dp = construct_dprime(ring, &fam, &d).unwrap();
        prop_assert_eq!(&dp, &d);
        prop_assert_eq!(construct_dprime(ring, &fam, &dp).unwrap(), dp);
        let whole = check_map(ring, &d, DerivationKind::Derivation).is_ok();
        let classes = (0..fi.quotient().num_classes()).all(|x| {
            let (mr, dx) = restrict_to_class(&fi, &d, x).unwrap();
            check_map(mr.ring(), &dx, DerivationKind::JordanDerivation).is_ok()
                && check_map(mr.ring(), &dx, DerivationKind::Derivation).is_ok()
        });
        prop_assert_eq!(whole, classes);
    }
}
