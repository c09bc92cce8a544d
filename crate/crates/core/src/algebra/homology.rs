use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{int_from_json, int_to_json, IntegerMatrix};
use super::presentation::Presentation;
use super::snf::{invariant_factors, rank_mod2, SparseMatrix};
use crate::complex::{face_without, SimplicialComplex};

/// Coefficient ring for homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    #[serde(alias = "z")]
    Integers,
    #[serde(alias = "z2")]
    Mod2,
}

/// One homology group: `Z^rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_k` with `t₁ | t₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(degree: usize, rank: usize) -> Self {
        HomologyGroup { degree, rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "rank": self.rank,
            "torsion": self.torsion.iter().map(int_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let torsion = v.get("torsion")?.as_array()?.iter().map(int_from_json).collect::<Option<Vec<_>>>()?;
        Some(HomologyGroup {
            degree: v.get("degree")?.as_u64()? as usize,
            rank: v.get("rank")?.as_u64()? as usize,
            torsion,
        })
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Boundary operator `C_p → C_{p−1}` in sparse column form. Rows follow the
/// complex's (p−1)-simplex order, columns its p-simplex order; the face that
/// omits vertex `i` carries sign `(−1)^i`.
pub fn boundary_sparse(c: &SimplicialComplex, p: usize) -> SparseMatrix {
    let cols = c.count(p);
    let rows = if p == 0 { 0 } else { c.count(p - 1) };
    if p == 0 {
        return SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] };
    }
    let columns = c
        .simplices(p)
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|i| {
                    let face = face_without(s, i);
                    let r = c.index_of(&face).expect("complex is closed");
                    (r, if i % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect();
    SparseMatrix { rows, cols, columns }
}

/// Dense boundary matrix `∂_p`. Degrees without simplices give an empty
/// matrix of the matching shape.
pub fn boundary_matrix(c: &SimplicialComplex, p: usize) -> IntegerMatrix {
    boundary_sparse(c, p).to_dense()
}

/// Homology in degrees `0..=dim`. The empty complex has no groups.
pub fn homology(c: &SimplicialComplex, coefficients: Coefficients, reduced: bool) -> Vec<HomologyGroup> {
    let Some(dim) = c.dim() else { return Vec::new() };
    // rank of ∂_p and the torsion it contributes to H_{p−1}
    let mut ranks = vec![0usize; dim + 2];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); dim + 2];
    for p in 1..=dim {
        let m = boundary_sparse(c, p);
        match coefficients {
            Coefficients::Integers => {
                let factors = invariant_factors(&m);
                ranks[p] = factors.len();
                torsion[p - 1] = factors.into_iter().filter(|d| !d.is_one()).collect();
            }
            Coefficients::Mod2 => ranks[p] = rank_mod2(&m),
        }
    }
    if reduced {
        // augmentation C_0 → Z has rank one on a nonempty complex
        ranks[0] = 1;
    }
    (0..=dim)
        .map(|p| HomologyGroup {
            degree: p,
            rank: c.count(p) - ranks[p] - ranks[p + 1],
            torsion: std::mem::take(&mut torsion[p]),
        })
        .collect()
}

/// `H_p` with chain-level generators and a coordinate map on cycles.
pub fn homology_presentation(c: &SimplicialComplex, p: usize) -> Presentation {
    Presentation::new(&boundary_matrix(c, p), &boundary_matrix(c, p + 1))
}

/// Integral Betti numbers by degree.
pub fn betti_numbers(c: &SimplicialComplex) -> Vec<usize> {
    homology(c, Coefficients::Integers, false).iter().map(|g| g.rank).collect()
}

/// Whether every `∂_{p}∘∂_{p+1}` vanishes.
pub fn boundary_squares_vanish(c: &SimplicialComplex) -> bool {
    let Some(dim) = c.dim() else { return true };
    for p in 2..=dim {
        let outer = boundary_sparse(c, p - 1);
        let inner = boundary_sparse(c, p);
        for col in &inner.columns {
            let mut acc = vec![0i64; outer.rows];
            for &(mid, x) in col {
                for &(r, y) in &outer.columns[mid] {
                    acc[r] += x * y;
                }
            }
            if acc.iter().any(|v| !v.is_zero()) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{models, ops};

    fn ranks(c: &SimplicialComplex) -> Vec<usize> {
        betti_numbers(c)
    }

    #[test]
    fn oriented_edge_column() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1]], &[]).unwrap();
        let d = boundary_matrix(&c, 1);
        assert_eq!(d, IntegerMatrix::from_rows(&[vec![-1], vec![1]]));
    }

    #[test]
    fn out_of_range_degree_is_empty_with_shape() {
        let c = models::simplex(2).unwrap();
        assert_eq!(boundary_matrix(&c, 3).shape(), (1, 0));
        assert_eq!(boundary_matrix(&c, 0).shape(), (0, 3));
    }

    #[test]
    fn boundary_of_triangle() {
        let c = models::simplex(2).unwrap();
        let d1 = boundary_matrix(&c, 1);
        let d2 = boundary_matrix(&c, 2);
        assert!(d1.mul(&d2).is_zero());
        let circle = models::circle(3).unwrap();
        assert_eq!(invariant_factors(&boundary_sparse(&circle, 1)).len(), 2);
    }

    #[test]
    fn spheres() {
        for n in 1..=4 {
            let h = homology(&models::sphere(n).unwrap(), Coefficients::Integers, false);
            for g in &h {
                assert!(g.torsion.is_empty());
                let expect = usize::from(g.degree == 0 || g.degree == n);
                assert_eq!(g.rank, expect, "sphere({n}) degree {}", g.degree);
            }
        }
    }

    #[test]
    fn torus_and_doubles() {
        assert_eq!(ranks(&models::torus_grid(3, 3).unwrap()), vec![1, 2, 1]);
        let d = ops::double(&models::annulus(4).unwrap()).unwrap();
        assert_eq!(ranks(&d), vec![1, 2, 1]);
        let mod2: Vec<usize> = homology(&d, Coefficients::Mod2, false).iter().map(|g| g.rank).collect();
        assert_eq!(mod2, vec![1, 2, 1]);
    }

    #[test]
    fn projective_plane_has_torsion() {
        // six-vertex real projective plane
        let facets: Vec<Vec<i64>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 3, 5],
            vec![2, 4, 5],
        ];
        let c = SimplicialComplex::from_facets(&facets, &[]).unwrap();
        let h = homology(&c, Coefficients::Integers, false);
        assert_eq!(h[1].rank, 0);
        assert_eq!(h[1].torsion, vec![BigInt::from(2)]);
        assert!(h[2].is_trivial());
        let m: Vec<usize> = homology(&c, Coefficients::Mod2, false).iter().map(|g| g.rank).collect();
        assert_eq!(m, vec![1, 1, 1]);
        assert_eq!(h[1].to_string(), "Z/2");
    }

    #[test]
    fn reduced_degree_zero() {
        let c = SimplicialComplex::from_facets(&[vec![0], vec![1]], &[]).unwrap();
        assert_eq!(homology(&c, Coefficients::Integers, true)[0].rank, 1);
        assert_eq!(homology(&c, Coefficients::Integers, false)[0].rank, 2);
    }

    #[test]
    fn json_shape() {
        let g = HomologyGroup { degree: 1, rank: 2, torsion: vec![BigInt::from(2)] };
        let v = g.to_json();
        assert_eq!(v["rank"], 2);
        assert_eq!(HomologyGroup::from_json(&v).unwrap(), g);
    }
}
