use std::collections::HashSet;

use flagbord_core::bundle::{
    flag_bundle_ring, mode_coherence, trivial_flag_ring, verify_rank, CharacteristicMap,
    Convention, Generator, Mode, RingPresentation,
};
use flagbord_core::coinv::CoinvariantAlgebra;
use flagbord_core::oracle::coinvariant_dimensions_by_kernel;
use flagbord_core::weyl::{
    act_on_polynomial, build_root_datum, enumerate_weyl, fundamental_invariants, parabolic_weyl,
    positive_root_count, simple_root_count, weyl_order, GroupType, IntMatrix,
};

fn small_types() -> Vec<(GroupType, usize)> {
    let mut out = Vec::new();
    for r in 1..=3 {
        out.push((GroupType::GL, r));
        out.push((GroupType::A, r));
        out.push((GroupType::B, r));
        out.push((GroupType::C, r));
    }
    out.push((GroupType::D, 2));
    out.push((GroupType::D, 3));
    out
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

#[test]
fn reflections_are_involutions_permuting_roots() {
    for kind in [GroupType::GL, GroupType::A, GroupType::B, GroupType::C, GroupType::D] {
        for rank in 1..=6 {
            let Ok(d) = build_root_datum(kind, rank) else {
                continue;
            };
            let roots: HashSet<Vec<i64>> = d.roots().iter().cloned().collect();
            for s in d.reflections() {
                assert!(s.mul(s).is_identity(), "{}", d.label());
                for r in d.roots() {
                    assert!(roots.contains(&s.apply(r)));
                }
            }
            assert_eq!(d.positive_roots().len(), positive_root_count(kind, rank), "{}", d.label());
            assert_eq!(d.roots().len(), 2 * d.positive_roots().len());
        }
    }
}

#[test]
fn group_orders_match_closed_forms() {
    for kind in [GroupType::GL, GroupType::A, GroupType::B, GroupType::C, GroupType::D] {
        for rank in 1..=5 {
            let Ok(d) = build_root_datum(kind, rank) else {
                continue;
            };
            let w = enumerate_weyl(&d);
            assert_eq!(w.order(), weyl_order(kind, rank), "{}", d.label());
            assert!(w.elements()[0].is_identity());
        }
    }
}

#[test]
fn parabolic_subgroups_are_subgroups() {
    for (kind, rank) in small_types() {
        let d = build_root_datum(kind, rank).unwrap();
        let w = enumerate_weyl(&d);
        for set in subsets(simple_root_count(kind, rank)) {
            let wp = parabolic_weyl(&d, &set).unwrap();
            let elems: HashSet<&IntMatrix> = wp.elements().iter().collect();
            for a in wp.elements() {
                for b in wp.elements() {
                    assert!(elems.contains(&a.mul(b)));
                }
                assert!(w.contains(a));
            }
            assert_eq!(w.order() % wp.order(), 0);
        }
    }
}

#[test]
fn invariants_fixed_by_every_element() {
    let mut cases = small_types();
    cases.push((GroupType::D, 4));
    cases.push((GroupType::GL, 4));
    for (kind, rank) in cases {
        let d = build_root_datum(kind, rank).unwrap();
        let w = enumerate_weyl(&d);
        let inv = fundamental_invariants(&d).unwrap();
        let vars: Vec<usize> = (0..rank).collect();
        for g in w.elements() {
            for s in inv.sigmas() {
                assert_eq!(&act_on_polynomial(g, s, &vars), s, "{}", d.label());
            }
        }
    }
}

#[test]
fn coinvariants_match_kernel_oracle() {
    let mut cases = small_types();
    cases.push((GroupType::D, 4));
    cases.push((GroupType::GL, 4));
    for (kind, rank) in cases {
        let a = CoinvariantAlgebra::for_type(kind, rank).unwrap();
        let oracle = coinvariant_dimensions_by_kernel(a.invariants(), 40).unwrap();
        assert_eq!(a.dimensions(), oracle, "{kind}{rank}");
        let p = a.poincare_polynomial().unwrap();
        assert!(p.is_palindromic());
        for d in 0..=a.top_degree() {
            a.pairing_matrix(d).unwrap();
        }
    }
}

#[test]
fn lambda_product_is_commutative_and_associative() {
    for (kind, rank) in small_types() {
        let a = CoinvariantAlgebra::for_type(kind, rank).unwrap();
        if a.dimension() > 48 {
            continue;
        }
        let all: Vec<_> = (0..=a.top_degree()).flat_map(|d| a.basis_classes(d)).collect();
        for x in &all {
            for y in &all {
                let xy = a.lambda_multiply(x, y).unwrap();
                assert_eq!(xy, a.lambda_multiply(y, x).unwrap());
                if all.len() <= 8 {
                    for z in &all {
                        assert_eq!(
                            a.lambda_multiply(&xy, z).unwrap(),
                            a.lambda_multiply(x, &a.lambda_multiply(y, z).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn lambda_associativity_b3_sampled() {
    let a = CoinvariantAlgebra::for_type(GroupType::B, 3).unwrap();
    let all: Vec<_> = (0..=a.top_degree()).flat_map(|d| a.basis_classes(d)).collect();
    for (i, x) in all.iter().enumerate().step_by(5) {
        for y in all.iter().skip(i % 3).step_by(4) {
            for z in all.iter().step_by(7) {
                let left = a.lambda_multiply(&a.lambda_multiply(x, y).unwrap(), z).unwrap();
                let right = a.lambda_multiply(x, &a.lambda_multiply(y, z).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn invariant_dimension_is_index() {
    for (kind, rank) in small_types() {
        let d = build_root_datum(kind, rank).unwrap();
        let a = CoinvariantAlgebra::for_type(kind, rank).unwrap();
        let w = enumerate_weyl(&d);
        for set in subsets(simple_root_count(kind, rank)) {
            let wp = parabolic_weyl(&d, &set).unwrap();
            let dims = a.invariant_dimensions(&wp).unwrap();
            assert_eq!(dims.iter().sum::<usize>(), w.order() / wp.order(), "{kind}{rank} {set:?}");
        }
    }
}

#[test]
fn zero_classes_equal_trivial_bundle() {
    let base = RingPresentation::base("P2", Mode::Chow, 6, vec![Generator::new("h", 1)], &["h^3"])
        .unwrap();
    for (kind, rank) in [(GroupType::GL, 2), (GroupType::B, 2), (GroupType::GL, 3)] {
        let d = build_root_datum(kind, rank).unwrap();
        for set in subsets(simple_root_count(kind, rank)) {
            let n = fundamental_invariants(&d).unwrap().len();
            let zero = vec!["0"; n];
            let cmap = CharacteristicMap::parse(&base, &zero).unwrap();
            let a = flag_bundle_ring(&base, &cmap, &d, &set, Convention::Standard).unwrap();
            let b = trivial_flag_ring(&base, &d, &set).unwrap();
            assert_eq!(a.ranks, b.ranks);
            assert!(verify_rank(&a, &d, &set).unwrap().ok());
        }
    }
}

#[test]
fn base_change_through_full_flag() {
    // E/P computed directly equals W_P-invariants of E/B, degreewise.
    let base = RingPresentation::base("P1", Mode::Chow, 6, vec![Generator::new("h", 1)], &["h^2"])
        .unwrap();
    let d = build_root_datum(GroupType::GL, 3).unwrap();
    let cmap = CharacteristicMap::parse(&base, &["h", "0", "0"]).unwrap();
    let full = flag_bundle_ring(&base, &cmap, &d, &[], Convention::Standard).unwrap();
    let partial = flag_bundle_ring(&base, &cmap, &d, &[2], Convention::Standard).unwrap();
    let wp = parabolic_weyl(&d, &[2]).unwrap();
    let vars = [0usize, 1, 2];
    for (deg, rank) in &partial.ranks {
        // Average every monomial over W_P, then reduce in the full flag ring.
        let mut count = 0;
        let monomials = flagbord_core::poly::monomials_of_degree(&full.table, *deg, Some(6)).unwrap();
        let mut ech = flagbord_core::poly::Echelon::new(monomials.len());
        for m in &monomials {
            let p = flagbord_core::poly::GradedPolynomial::monomial(
                &full.table,
                m.clone(),
                num_rational::BigRational::from_integer(1.into()),
            );
            let mut avg = flagbord_core::poly::GradedPolynomial::zero(&full.table);
            for g in wp.elements() {
                avg = &avg + &act_on_polynomial(g, &p, &vars);
            }
            let nf = full.normal_form(&avg).unwrap();
            let row: Vec<_> = nf
                .terms()
                .iter()
                .map(|(t, c)| (monomials.iter().position(|x| x == t).unwrap(), c.clone()))
                .collect();
            if !row.is_empty() && ech.insert(row) {
                count += 1;
            }
        }
        assert_eq!(count, *rank, "degree {deg}");
    }
}

#[test]
fn cobordism_specializes_to_chow() {
    let cob_base =
        RingPresentation::base("P1", Mode::Cobordism, 4, vec![Generator::new("h", 1)], &["h^2"])
            .unwrap();
    let chow_base =
        RingPresentation::base("P1", Mode::Chow, 4, vec![Generator::new("h", 1)], &["h^2"]).unwrap();
    let d = build_root_datum(GroupType::GL, 2).unwrap();
    let cob = flag_bundle_ring(
        &cob_base,
        &CharacteristicMap::parse(&cob_base, &["h", "0"]).unwrap(),
        &d,
        &[],
        Convention::Standard,
    )
    .unwrap();
    let chow = flag_bundle_ring(
        &chow_base,
        &CharacteristicMap::parse(&chow_base, &["h", "0"]).unwrap(),
        &d,
        &[],
        Convention::Standard,
    )
    .unwrap();
    let report = mode_coherence(&cob, &chow).unwrap();
    assert!(report.ok(), "{report:?}");
    assert!(verify_rank(&cob, &d, &[]).unwrap().ok());
}
