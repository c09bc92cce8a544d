use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use reebspace::algebra::{
    betti_numbers, boundary_squares_vanish, homology, smith_normal_form, Coefficients, IntegerMatrix,
};
use reebspace::branched::CollapseSettings;
use reebspace::complex::models;
use reebspace::complex::ops::barycentric_subdivision;
use reebspace::reeb::{reeb_graph, VertexField};
use reebspace::verify::{standard_flap_cases, verify_flap_bouquet, FlapPiece};
use reebspace::SimplicialComplex;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..8, 1usize..8).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-9i64..=9, n), m))
}

/// Downward closure of random facets on up to 7 vertices, each of dimension at most 3.
fn complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(1u8..128, 1..10).prop_map(|masks| {
        let facets: Vec<Vec<usize>> =
            masks.iter().map(|&m| (0..7).filter(|i| m & (1 << i) != 0).take(4).collect()).collect();
        SimplicialComplex::from_facets(&facets, &[]).expect("valid facets")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_is_a_unimodular_diagonalisation(rows in matrix()) {
        let a = IntegerMatrix::from_rows(&rows);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        prop_assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
        let d = snf.diagonal();
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides, "{} does not divide {}", w[0], w[1]);
        }
    }

    #[test]
    fn euler_characteristic_matches_betti_numbers(c in complex()) {
        let chi: i64 = betti_numbers(&c)
            .iter()
            .enumerate()
            .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        prop_assert_eq!(chi, c.euler_characteristic());
    }

    #[test]
    fn boundary_of_boundary_vanishes(c in complex()) {
        prop_assert!(boundary_squares_vanish(&c));
    }

    #[test]
    fn subdivision_preserves_homology(c in complex()) {
        let sd = barycentric_subdivision(&c);
        for coeff in [Coefficients::Integers, Coefficients::Mod2] {
            prop_assert_eq!(homology(&c, coeff, false), homology(&sd, coeff, false));
        }
    }

    #[test]
    fn reeb_components_match_the_complex(c in complex(), perm in Just((0..7).collect::<Vec<i64>>()).prop_shuffle()) {
        let field = VertexField::from_fn(c.clone(), |i| BigRational::from_integer(perm[i].into())).unwrap();
        let g = reeb_graph(&field);
        prop_assert_eq!(g.components(), betti_numbers(&c)[0]);
    }

    #[test]
    fn reeb_graph_ignores_monotone_relabelling(c in complex(), scale in 1i64..5, shift in -10i64..10) {
        let field = VertexField::from_fn(c, |i| BigRational::from_integer(((i * i) as i64).into())).unwrap();
        let moved = field
            .relabel(|v| v * BigRational::from_integer(scale.into()) + BigRational::from_integer(shift.into()))
            .unwrap();
        let (a, b) = (reeb_graph(&field).smooth_degree_2(), reeb_graph(&moved).smooth_degree_2());
        prop_assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn flap_bouquets_add_reduced_homology(keep in prop::collection::vec(any::<bool>(), 2)) {
        let shipped: Vec<(FlapPiece, _)> = standard_flap_cases()
            .unwrap()
            .into_iter()
            .flat_map(|case| {
                let bases = case.basepoints.clone();
                case.pieces.into_iter().zip(bases)
            })
            .collect();
        let chosen: Vec<_> = shipped.into_iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| p).collect();
        let last = models::simplex(2).unwrap();
        let pieces: Vec<FlapPiece> = chosen.iter().map(|(p, _)| p.clone()).collect();
        let mut basepoints: Vec<_> = chosen.iter().map(|(_, b)| b.clone()).collect();
        basepoints.push(last.vertices()[0].clone());
        let report = verify_flap_bouquet("random", &pieces, &last, &basepoints, CollapseSettings::default()).unwrap();
        prop_assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }
}
