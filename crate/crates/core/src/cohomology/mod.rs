//! Simplicial cochains, cohomology bases, Alexander–Whitney cup products and
//! restriction to subcomplexes.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::homology::boundary_sparse;
use crate::algebra::matrix::int_to_json;
use crate::algebra::presentation::{rational_rank, GroupShape, Presentation};
use crate::algebra::snf::{invariant_factors, SparseMatrix};
use crate::algebra::{boundary_matrix, IntegerMatrix};
use crate::complex::{Simplex, SimplicialComplex, SimplicialMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("cochains live on different complexes")]
    IncompatibleCochain,
    #[error("degree {0} exceeds the dimension of the complex")]
    DegreeTooHigh(usize),
    #[error("vertex assignment is not injective")]
    NotAnInclusion,
    #[error("map does not land in the complex carrying the class")]
    WrongTarget,
    #[error("cochain is not a cocycle")]
    NotACocycle,
}

/// Coboundary `δ_p: C^p → C^{p+1}`, the transpose of `∂_{p+1}`.
pub fn coboundary_matrix(c: &SimplicialComplex, p: usize) -> IntegerMatrix {
    boundary_matrix(c, p + 1).transpose()
}

/// `H^p` as `ker δ_p / im δ_{p−1}`.
pub fn cohomology_presentation(c: &SimplicialComplex, p: usize) -> Presentation {
    let incoming = if p == 0 { IntegerMatrix::zeros(c.count(0), 0) } else { coboundary_matrix(c, p - 1) };
    Presentation::new(&coboundary_matrix(c, p), &incoming)
}

/// A cocycle together with its coordinates in the cohomology basis of its
/// degree.
#[derive(Debug, Clone)]
pub struct CochainClass {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    cochain: Vec<BigInt>,
    coordinates: Vec<BigInt>,
}

impl CochainClass {
    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cochain(&self) -> &[BigInt] {
        &self.cochain
    }

    pub fn coordinates(&self) -> &[BigInt] {
        &self.coordinates
    }

    pub fn is_zero_class(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

/// Lazily computed cohomology of one complex, shared by every class on it.
pub struct CohomologyRing {
    complex: Arc<SimplicialComplex>,
    degrees: Vec<OnceLock<Presentation>>,
}

impl CohomologyRing {
    pub fn new(complex: Arc<SimplicialComplex>) -> Self {
        let top = complex.dim().map_or(0, |d| d + 1);
        CohomologyRing { degrees: (0..top).map(|_| OnceLock::new()).collect(), complex }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn dim(&self) -> Option<usize> {
        self.complex.dim()
    }

    fn presentation(&self, p: usize) -> Option<&Presentation> {
        self.degrees.get(p).map(|cell| cell.get_or_init(|| cohomology_presentation(&self.complex, p)))
    }

    /// Group shape of `H^p`; trivial past the top dimension.
    pub fn group(&self, p: usize) -> GroupShape {
        self.presentation(p).map(|pr| pr.shape().clone()).unwrap_or_default()
    }

    /// Cocycle representatives of the generators of `H^p`, torsion first.
    pub fn basis(&self, p: usize) -> Vec<CochainClass> {
        let Some(pr) = self.presentation(p) else { return Vec::new() };
        (0..pr.len())
            .map(|i| {
                let mut coordinates = vec![BigInt::zero(); pr.len()];
                coordinates[i] = BigInt::one();
                CochainClass {
                    complex: self.complex.clone(),
                    degree: p,
                    cochain: pr.generator(i).to_vec(),
                    coordinates,
                }
            })
            .collect()
    }

    /// Wraps a cocycle, computing its coordinates.
    pub fn class(&self, p: usize, cochain: Vec<BigInt>) -> Result<CochainClass, CohomologyError> {
        if cochain.len() != self.complex.count(p) {
            return Err(CohomologyError::DegreeTooHigh(p));
        }
        if !is_cocycle(&self.complex, p, &cochain) {
            return Err(CohomologyError::NotACocycle);
        }
        let coordinates = match self.presentation(p) {
            Some(pr) => pr.coordinates(&cochain),
            None => Vec::new(),
        };
        Ok(CochainClass { complex: self.complex.clone(), degree: p, cochain, coordinates })
    }

    /// The unit class in `H^0`.
    pub fn unit(&self) -> CochainClass {
        let ones = vec![BigInt::one(); self.complex.count(0)];
        self.class(0, ones).expect("constant cochain is a cocycle")
    }

    /// Cup product of two classes on this ring's complex.
    pub fn cup(&self, a: &CochainClass, b: &CochainClass) -> Result<CochainClass, CohomologyError> {
        let here = |x: &Arc<SimplicialComplex>| Arc::ptr_eq(x, &self.complex) || **x == *self.complex;
        if !here(&a.complex) || !here(&b.complex) {
            return Err(CohomologyError::IncompatibleCochain);
        }
        let cochain = cup_cochain(&self.complex, a.degree, &a.cochain, b.degree, &b.cochain);
        self.class(a.degree + b.degree, cochain)
    }

    /// Pulls a class on `inclusion.target()` back to this ring's complex,
    /// which must be `inclusion.source()`.
    pub fn restrict(&self, a: &CochainClass, inclusion: &SimplicialMap) -> Result<CochainClass, CohomologyError> {
        if *inclusion.source().as_ref() != *self.complex {
            return Err(CohomologyError::IncompatibleCochain);
        }
        let cochain = pull_back(a, inclusion)?;
        self.class(a.degree, cochain)
    }

    /// Matrix of restriction `H^p(target) → H^p(self)` in the two bases.
    pub fn restriction_matrix(
        &self,
        from: &CohomologyRing,
        inclusion: &SimplicialMap,
        p: usize,
    ) -> Result<IntegerMatrix, CohomologyError> {
        let cols = from
            .basis(p)
            .iter()
            .map(|g| self.restrict(g, inclusion).map(|r| r.coordinates))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntegerMatrix::from_columns(self.group(p).len(), &cols))
    }

    /// JSON table of basis labels per degree and the coordinates of every
    /// pairwise product of basis classes.
    pub fn ring_report(&self) -> Value {
        let Some(top) = self.dim() else { return json!({ "degrees": [], "products": [] }) };
        let bases: Vec<Vec<CochainClass>> = (0..=top).map(|p| self.basis(p)).collect();
        let degrees: Vec<Value> = (0..=top)
            .map(|p| {
                let g = self.group(p);
                json!({
                    "degree": p,
                    "rank": g.free,
                    "torsion": g.torsion.iter().map(int_to_json).collect::<Vec<_>>(),
                    "basis": (0..g.len()).map(|i| format!("e{p}_{i}")).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut products = Vec::new();
        for p in 0..=top {
            for q in 0..=top - p {
                for (i, a) in bases[p].iter().enumerate() {
                    for (j, b) in bases[q].iter().enumerate() {
                        let c = self.cup(a, b).expect("basis classes share the complex");
                        products.push(json!({
                            "left": format!("e{p}_{i}"),
                            "right": format!("e{q}_{j}"),
                            "coordinates": c.coordinates.iter().map(int_to_json).collect::<Vec<_>>(),
                        }));
                    }
                }
            }
        }
        json!({ "degrees": degrees, "products": products })
    }
}

/// Cohomology basis of `c` in degree `p` together with the group.
pub fn cohomology_basis(c: &Arc<SimplicialComplex>, p: usize) -> (Vec<CochainClass>, GroupShape) {
    let ring = CohomologyRing::new(c.clone());
    (ring.basis(p), ring.group(p))
}

/// Cup product of two classes on the same complex.
pub fn cup_product(a: &CochainClass, b: &CochainClass) -> Result<CochainClass, CohomologyError> {
    if !Arc::ptr_eq(&a.complex, &b.complex) && *a.complex != *b.complex {
        return Err(CohomologyError::IncompatibleCochain);
    }
    CohomologyRing::new(a.complex.clone()).cup(a, b)
}

/// Restriction of a class along an inclusion into its complex.
pub fn restrict_class(a: &CochainClass, inclusion: &SimplicialMap) -> Result<CochainClass, CohomologyError> {
    CohomologyRing::new(inclusion.source().clone()).restrict(a, inclusion)
}

/// Whether `δ(cochain) = 0`.
pub fn is_cocycle(c: &SimplicialComplex, p: usize, cochain: &[BigInt]) -> bool {
    let d = boundary_sparse(c, p + 1);
    d.columns.iter().all(|col| {
        let mut acc = BigInt::zero();
        for &(r, e) in col {
            acc += &cochain[r] * e;
        }
        acc.is_zero()
    })
}

/// `(a⌣b)(v₀…v_{p+q}) = a(v₀…v_p)·b(v_p…v_{p+q})` on sorted simplices.
pub fn cup_cochain(c: &SimplicialComplex, p: usize, a: &[BigInt], q: usize, b: &[BigInt]) -> Vec<BigInt> {
    c.simplices(p + q)
        .iter()
        .map(|s| {
            let front = c.index_of(&s[..=p]).expect("front face");
            let back = c.index_of(&s[p..]).expect("back face");
            if a[front].is_zero() || b[back].is_zero() {
                BigInt::zero()
            } else {
                &a[front] * &b[back]
            }
        })
        .collect()
}

fn pull_back(a: &CochainClass, inclusion: &SimplicialMap) -> Result<Vec<BigInt>, CohomologyError> {
    if !inclusion.is_injective() {
        return Err(CohomologyError::NotAnInclusion);
    }
    if !Arc::ptr_eq(inclusion.target(), &a.complex) && **inclusion.target() != *a.complex {
        return Err(CohomologyError::WrongTarget);
    }
    let source = inclusion.source();
    Ok(source
        .simplices(a.degree)
        .iter()
        .map(|s| {
            let (idx, sign) = inclusion.oriented_image(s).expect("injective image is a simplex");
            if sign > 0 {
                a.cochain[idx].clone()
            } else {
                -&a.cochain[idx]
            }
        })
        .collect())
}

/// Rank of `H^p(c, sub)` for a subcomplex given as a simplex set.
pub fn relative_betti(c: &SimplicialComplex, sub: &BTreeSet<Simplex>, p: usize) -> usize {
    let keep = |d: usize| -> Vec<usize> { (0..c.count(d)).filter(|&i| !sub.contains(&c.simplices(d)[i])).collect() };
    let restricted = |d: usize| -> SparseMatrix {
        let cols = keep(d);
        let rows = if d == 0 { Vec::new() } else { keep(d - 1) };
        let mut pos = vec![usize::MAX; if d == 0 { 0 } else { c.count(d - 1) }];
        for (i, &r) in rows.iter().enumerate() {
            pos[r] = i;
        }
        let full = boundary_sparse(c, d);
        let columns = cols
            .iter()
            .map(|&j| {
                full.columns[j].iter().filter(|(r, _)| pos[*r] != usize::MAX).map(|&(r, e)| (pos[r], e)).collect()
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols: cols.len(), columns }
    };
    let chains = keep(p).len();
    let out = if p == 0 { 0 } else { invariant_factors(&restricted(p)).len() };
    let inc = invariant_factors(&restricted(p + 1)).len();
    chains - out - inc
}

/// Rank of the image of a restriction matrix.
pub fn image_rank(m: &IntegerMatrix) -> usize {
    rational_rank(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::models;

    fn ring(c: SimplicialComplex) -> CohomologyRing {
        CohomologyRing::new(Arc::new(c))
    }

    #[test]
    fn circle_has_one_generator() {
        let r = ring(models::circle(3).unwrap());
        assert_eq!(r.basis(1).len(), 1);
        assert_eq!(r.group(1).free, 1);
    }

    #[test]
    fn sphere_degree_one_is_trivial() {
        let r = ring(models::sphere(2).unwrap());
        assert!(r.basis(1).is_empty());
        assert!(r.group(1).is_empty());
    }

    #[test]
    fn torus_ring() {
        let r = ring(models::torus_grid(3, 3).unwrap());
        let b = r.basis(1);
        assert_eq!(b.len(), 2);
        assert_eq!(r.group(2).free, 1);
        let ab = r.cup(&b[0], &b[1]).unwrap();
        let ba = r.cup(&b[1], &b[0]).unwrap();
        assert_eq!(ab.coordinates().len(), 1);
        assert!(ab.coordinates()[0] == BigInt::one() || ab.coordinates()[0] == -BigInt::one());
        assert_eq!(ba.coordinates()[0], -ab.coordinates()[0].clone());
        for g in &b {
            assert!(r.cup(g, g).unwrap().is_zero_class());
        }
    }

    #[test]
    fn unit_acts_trivially() {
        let r = ring(models::torus_grid(3, 3).unwrap());
        let one = r.unit();
        for g in r.basis(1) {
            assert_eq!(r.cup(&one, &g).unwrap().coordinates(), g.coordinates());
        }
    }

    #[test]
    fn incompatible_complexes() {
        let a = ring(models::circle(3).unwrap()).unit();
        let b = ring(models::circle(4).unwrap()).unit();
        assert_eq!(cup_product(&a, &b).unwrap_err(), CohomologyError::IncompatibleCochain);
    }

    #[test]
    fn restriction_to_empty_is_zero() {
        let w = Arc::new(models::circle(3).unwrap());
        let empty = Arc::new(SimplicialComplex::empty());
        let inc = w.inclusion_from(&empty).unwrap();
        let g = &CohomologyRing::new(w.clone()).basis(1)[0];
        let r = restrict_class(g, &inc).unwrap();
        assert!(r.cochain().is_empty() && r.is_zero_class());
    }

    #[test]
    fn relative_ranks() {
        let disc = models::simplex(2).unwrap();
        let boundary: BTreeSet<Simplex> = disc.iter().filter(|s| s.len() < 3).cloned().collect();
        assert_eq!(relative_betti(&disc, &boundary, 2), 1);
        assert_eq!(relative_betti(&disc, &boundary, 1), 0);
        assert_eq!(relative_betti(&disc, &boundary, 0), 0);
    }
}
