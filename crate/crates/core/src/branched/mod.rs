//! Branched manifolds of class A as complexes with annotated branch loci,
//! the flap, double and bouquet constructions, local-structure checking in
//! dimension two and an elementary-collapse engine.

mod collapse;
mod local;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::complex::ops::{barycentre_id, boundary_faces, pair_vertex, product_cells, relative_derived, wedge_many};
use crate::complex::{
    face_without, maximal_simplices, ComplexBuilder, ComplexError, ComplexFile, Simplex, SimplicialComplex, UnionFind,
    VertexId,
};

pub use collapse::{collapse_to, CollapseCertificate, CollapseGoal, CollapseOutcome, CollapseSettings, ReplayError};
pub use local::{check_local_structure_dim2, LinkType, LocalStructureReport, LocusCheck, VertexCheck};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BranchError {
    #[error("`{0}` is not a valid branch locus: {1}")]
    InvalidLocus(String, String),
    #[error("`{0}` is not a valid submanifold to double: {1}")]
    InvalidSubmanifold(String, String),
    #[error("basepoint {0} lies on a branch locus")]
    BasepointOnLocus(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusKind {
    Collar,
    Tripod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monodromy {
    Trivial,
    Swap,
}

/// A named subcomplex carrying branch data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchLocus {
    pub name: String,
    pub kind: LocusKind,
    pub monodromy: Monodromy,
}

impl BranchLocus {
    pub fn tripod(name: impl Into<String>) -> Self {
        BranchLocus { name: name.into(), kind: LocusKind::Tripod, monodromy: Monodromy::Trivial }
    }
}

/// A complex together with its branch loci and, for flap attachments, a
/// certificate collapsing it back onto the base.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchedModel {
    pub complex: SimplicialComplex,
    pub loci: Vec<BranchLocus>,
    pub certificate: Option<CollapseCertificate>,
}

impl BranchedModel {
    /// A model with no branching.
    pub fn plain(complex: SimplicialComplex) -> Self {
        BranchedModel { complex, loci: Vec::new(), certificate: None }
    }

    /// Vertex indices lying on some locus.
    pub fn locus_vertices(&self) -> BTreeSet<usize> {
        self.loci
            .iter()
            .filter_map(|l| self.complex.named(&l.name))
            .flat_map(|set| set.iter().filter(|s| s.len() == 1).map(|s| s[0]))
            .collect()
    }

    /// Simplices avoiding every locus vertex.
    pub fn regular_part(&self) -> SimplicialComplex {
        let bad = self.locus_vertices();
        let keep: Vec<&Simplex> = self.complex.iter().filter(|s| s.iter().all(|v| !bad.contains(v))).collect();
        self.complex.restrict(keep)
    }

    /// Attaches a further flap along `sigma`, keeping existing loci.
    pub fn attach_flap(self, sigma: &str) -> Result<BranchedModel, BranchError> {
        let mut next = attach_flap(&self.complex, sigma)?;
        let mut loci = self.loci;
        loci.append(&mut next.loci);
        next.loci = loci;
        Ok(next)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(ComplexFile::from_complex(&self.complex)).expect("serialisable");
        v["branch_loci"] = serde_json::to_value(&self.loci).expect("serialisable");
        if let Some(c) = &self.certificate {
            v["certificate"] = c.to_json();
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self, ComplexError> {
        let file: ComplexFile = serde_json::from_value(v.clone()).map_err(|e| ComplexError::Format(e.to_string()))?;
        let complex = file.to_complex()?;
        let loci: Vec<BranchLocus> = match v.get("branch_loci") {
            Some(l) => serde_json::from_value(l.clone()).map_err(|e| ComplexError::Format(e.to_string()))?,
            None => Vec::new(),
        };
        for l in &loci {
            complex.named_or_err(&l.name)?;
        }
        let certificate = match v.get("certificate") {
            Some(c) => Some(CollapseCertificate::from_json(c)?),
            None => None,
        };
        Ok(BranchedModel { complex, loci, certificate })
    }
}

fn invalid_locus(name: &str, msg: impl Into<String>) -> BranchError {
    BranchError::InvalidLocus(name.to_string(), msg.into())
}

/// Identifier of the far end of the flap over vertex `v`.
fn flap_vertex(sigma: &str, v: &VertexId) -> VertexId {
    VertexId::Name(format!("{sigma}+{v}"))
}

/// Checks that `sigma` is a closed, two-sided, codimension-one subcomplex
/// whose top faces are interior faces of `x`.
fn check_flap_locus(x: &SimplicialComplex, name: &str, sigma: &BTreeSet<Simplex>) -> Result<(), BranchError> {
    let d = x.dim().ok_or_else(|| invalid_locus(name, "ambient complex is empty"))?;
    if d == 0 {
        return Err(invalid_locus(name, "ambient complex has dimension 0"));
    }
    let sub = x.restrict(sigma);
    if sub.dim() != Some(d - 1) || !sub.is_pure() {
        return Err(invalid_locus(name, format!("not a pure subcomplex of dimension {}", d - 1)));
    }
    let rim = boundary_faces(&sub).map_err(|e| invalid_locus(name, e.to_string()))?;
    if !rim.is_empty() {
        return Err(invalid_locus(name, "locus has boundary"));
    }
    let tops = x.simplices(d);
    let sigma_vertices: BTreeSet<usize> = sub.vertices().iter().map(|id| x.vertex_index(id).unwrap()).collect();
    let star: Vec<usize> = (0..tops.len()).filter(|&i| tops[i].iter().any(|v| sigma_vertices.contains(v))).collect();
    let mut cofaces: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (k, &i) in star.iter().enumerate() {
        for j in 0..=d {
            cofaces.entry(face_without(&tops[i], j)).or_default().push(k);
        }
    }
    let mut sides = UnionFind::new(star.len());
    for (face, around) in &cofaces {
        if sigma.contains(face) || !face.iter().any(|v| sigma_vertices.contains(v)) {
            continue;
        }
        for w in around.windows(2) {
            sides.union(w[0], w[1]);
        }
    }
    for f in sigma.iter().filter(|s| s.len() == d) {
        let around = cofaces.get(f).map_or(&[][..], Vec::as_slice);
        if around.len() != 2 {
            return Err(invalid_locus(
                name,
                format!("face {} lies in {} top simplices", x.format_simplex(f), around.len()),
            ));
        }
        if sides.find(around[0]) == sides.find(around[1]) {
            return Err(invalid_locus(name, "no product neighbourhood: locus is one-sided"));
        }
    }
    Ok(())
}

/// `x ∪_σ (σ × [0,1])` glued along `σ × {0}`. The locus `σ` becomes a
/// tripod locus and the model carries a certificate collapsing the flap.
pub fn attach_flap(x: &SimplicialComplex, sigma: &str) -> Result<BranchedModel, BranchError> {
    let sigma_set = x.named_or_err(sigma)?.clone();
    check_flap_locus(x, sigma, &sigma_set)?;
    let sub = x.restrict(&sigma_set);
    let edge = crate::complex::models::interval(1)?;
    // (v,0) is v itself, (v,1) the new far vertex
    let mut relabel: HashMap<VertexId, VertexId> = HashMap::new();
    for v in sub.vertices() {
        relabel.insert(pair_vertex(v, &VertexId::Int(0)), v.clone());
        relabel.insert(pair_vertex(v, &VertexId::Int(1)), flap_vertex(sigma, v));
    }
    let mut b = ComplexBuilder::new();
    for v in x.vertices() {
        b.vertex(v.clone());
    }
    for v in sub.vertices() {
        let far = flap_vertex(sigma, v);
        if x.vertex_index(&far).is_some() {
            return Err(ComplexError::VertexCollision(far.to_string()).into());
        }
        b.vertex(far);
    }
    for f in x.facets() {
        b.add_simplex(x.simplex_ids(&f))?;
    }
    let sigma_tops = sub.facets();
    let cells: Vec<Vec<VertexId>> = product_cells(&sub, &sigma_tops, &edge, &edge.facets())
        .into_iter()
        .map(|cell| cell.iter().map(|id| relabel[id].clone()).collect())
        .collect();
    for cell in &cells {
        b.add_simplex(cell.iter().cloned())?;
    }
    for label in x.names() {
        b.declare_name(label);
        for s in maximal_simplices(x.named(label).unwrap().iter()) {
            b.add_named(label, x.simplex_ids(&s))?;
        }
    }
    let flap_label = format!("flap:{sigma}");
    b.declare_name(&flap_label);
    for cell in &cells {
        b.add_named(&flap_label, cell.iter().cloned())?;
    }
    let complex = b.build()?;
    let certificate = flap_certificate(&sub, sigma, x);
    Ok(BranchedModel { complex, loci: vec![BranchLocus::tripod(sigma)], certificate: Some(certificate) })
}

/// Prism collapse of `σ × [0,1]` onto `σ × {0}`: simplices of `σ` by
/// decreasing dimension, each prism `T_0, …, T_k` swept from the far end.
fn flap_certificate(sub: &SimplicialComplex, sigma: &str, base: &SimplicialComplex) -> CollapseCertificate {
    let mut steps = Vec::new();
    let top = sub.dim().unwrap_or(0);
    for d in (0..=top).rev() {
        for s in sub.simplices(d) {
            let ids = sub.simplex_ids(s);
            let cell = |i: usize| -> Vec<VertexId> {
                let mut c: Vec<VertexId> = ids[..=i].to_vec();
                c.extend(ids[i..].iter().map(|v| flap_vertex(sigma, v)));
                c
            };
            let far: Vec<VertexId> = ids.iter().map(|v| flap_vertex(sigma, v)).collect();
            steps.push((far, cell(0)));
            for i in 0..d {
                let mut shared: Vec<VertexId> = ids[..=i].to_vec();
                shared.extend(ids[i + 1..].iter().map(|v| flap_vertex(sigma, v)));
                steps.push((shared, cell(i + 1)));
            }
        }
    }
    CollapseCertificate::new(steps, CollapseGoal::Subcomplex(base.clone()), None)
}

/// Attaches a relatively subdivided second copy of each named submanifold
/// `y_j` along its boundary. Installs `X`, `Y_j`, `Yprime_j`, `DY_j`,
/// `seam_j`, `Y` and `DY` (with `j` counted from 1).
pub fn attach_double(x: &SimplicialComplex, ys: &[&str]) -> Result<BranchedModel, BranchError> {
    let d = x.dim().ok_or(ComplexError::NothingToDouble)?;
    let outer = boundary_faces(x).unwrap_or_default();
    let outer_vertices: BTreeSet<usize> = outer.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
    let bad = |name: &str, msg: &str| BranchError::InvalidSubmanifold(name.to_string(), msg.to_string());

    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut pieces = Vec::new();
    for (j, &name) in ys.iter().enumerate() {
        let set = x.named_or_err(name)?;
        let y = x.restrict(set);
        if y.dim() != Some(d) || !y.is_pure() {
            return Err(bad(name, "not a pure full-dimensional subcomplex"));
        }
        let seam = boundary_faces(&y).map_err(|e| bad(name, &e.to_string()))?;
        if seam.is_empty() {
            return Err(bad(name, "empty boundary"));
        }
        let seam_vertices: Vec<usize> =
            seam.iter().filter(|s| s.len() == 1).map(|s| x.vertex_index(&y.vertices()[s[0]]).unwrap()).collect();
        if seam_vertices.iter().any(|v| outer_vertices.contains(v)) {
            return Err(bad(name, "boundary meets the boundary of the ambient complex"));
        }
        let vertices: BTreeSet<usize> = y.vertices().iter().map(|id| x.vertex_index(id).unwrap()).collect();
        if !used.is_disjoint(&vertices) {
            return Err(bad(name, "overlaps another submanifold"));
        }
        used.extend(vertices);
        let prefix = format!("{}'", j + 1);
        for s in y.iter().filter(|s| !seam.contains(*s)) {
            let id = barycentre_id(&prefix, &y, s);
            if x.vertex_index(&id).is_some() {
                return Err(ComplexError::VertexCollision(id.to_string()).into());
            }
        }
        let second = relative_derived(&y, &seam, &prefix);
        pieces.push((y, seam, second));
    }

    let mut b = ComplexBuilder::new();
    for v in x.vertices() {
        b.vertex(v.clone());
    }
    for f in x.facets() {
        b.add_simplex(x.simplex_ids(&f))?;
    }
    for (_, _, second) in &pieces {
        for s in second {
            for v in s {
                if x.vertex_index(v).is_none() {
                    b.vertex(v.clone());
                }
            }
            b.add_simplex(s.iter().cloned())?;
        }
    }
    for label in x.names() {
        b.declare_name(label);
        for s in maximal_simplices(x.named(label).unwrap().iter()) {
            b.add_named(label, x.simplex_ids(&s))?;
        }
    }
    b.declare_name("X");
    for f in x.facets() {
        b.add_named("X", x.simplex_ids(&f))?;
    }
    for key in ["Y", "DY"] {
        b.declare_name(key);
    }
    let mut loci = Vec::new();
    for (j, (y, seam, second)) in pieces.iter().enumerate() {
        let k = j + 1;
        let names = [format!("Y_{k}"), format!("Yprime_{k}"), format!("DY_{k}"), format!("seam_{k}")];
        for n in &names {
            b.declare_name(n);
        }
        for f in y.facets() {
            let ids = y.simplex_ids(&f);
            for n in [&names[0], &names[2], &"Y".to_string(), &"DY".to_string()] {
                b.add_named(n, ids.iter().cloned())?;
            }
        }
        for s in second {
            for n in [&names[1], &names[2], &"DY".to_string()] {
                b.add_named(n, s.iter().cloned())?;
            }
        }
        for s in maximal_simplices(seam.iter()) {
            b.add_named(&names[3], y.simplex_ids(&s))?;
        }
        loci.push(BranchLocus::tripod(names[3].clone()));
    }
    let complex = b.build()?;
    Ok(BranchedModel { complex, loci, certificate: None })
}

/// One-point union of models. Loci of part `i` are renamed `"{i}:{name}"`
/// when more than one part is given.
pub fn bouquet(models: &[BranchedModel], basepoints: &[VertexId]) -> Result<BranchedModel, BranchError> {
    if models.len() != basepoints.len() {
        return Err(ComplexError::BadBasepoint("one basepoint per model required".into()).into());
    }
    for (m, p) in models.iter().zip(basepoints) {
        let v = m.complex.vertex_index(p).ok_or_else(|| ComplexError::BadBasepoint(p.to_string()))?;
        if m.locus_vertices().contains(&v) {
            return Err(BranchError::BasepointOnLocus(p.to_string()));
        }
    }
    if models.len() == 1 {
        return Ok(models[0].clone());
    }
    let parts: Vec<&SimplicialComplex> = models.iter().map(|m| &m.complex).collect();
    let complex = wedge_many(&parts, basepoints)?;
    let loci = models
        .iter()
        .enumerate()
        .flat_map(|(i, m)| m.loci.iter().map(move |l| BranchLocus { name: format!("{i}:{}", l.name), ..l.clone() }))
        .collect();
    Ok(BranchedModel { complex, loci, certificate: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::betti_numbers;
    use crate::complex::models;

    #[test]
    fn flap_on_sphere_equator() {
        let m = attach_flap(&models::sphere(2).unwrap(), "equator").unwrap();
        assert_eq!(m.complex.euler_characteristic(), 2);
        assert_eq!(betti_numbers(&m.complex), vec![1, 0, 1]);
        assert_eq!(m.loci, vec![BranchLocus::tripod("equator")]);
        let cert = m.certificate.as_ref().unwrap();
        cert.verify(&m.complex).unwrap();
    }

    #[test]
    fn flap_on_interior_circle() {
        let x = models::nested_disc(1).unwrap();
        let m = attach_flap(&x, "ring_0").unwrap();
        assert_eq!(m.complex.euler_characteristic(), 1);
        assert_eq!(betti_numbers(&m.complex), vec![1, 0, 0]);
    }

    #[test]
    fn whiskers_on_a_circle() {
        let x = models::circle(6).unwrap().with_name("pair", vec![vec![0], vec![3]]).unwrap();
        let m = attach_flap(&x, "pair").unwrap();
        assert_eq!(m.complex.f_vector(), vec![8, 8]);
        assert!(m.certificate.unwrap().verify(&m.complex).is_ok());
    }

    #[test]
    fn flap_rejects_boundary_circle() {
        let x = models::nested_disc(1).unwrap();
        assert!(matches!(attach_flap(&x, "boundary"), Err(BranchError::InvalidLocus(..))));
        let s = models::sphere(2).unwrap();
        assert!(matches!(attach_flap(&s, "upper"), Err(BranchError::InvalidLocus(..))));
    }

    #[test]
    fn double_attachments() {
        let i1 = attach_double(&models::nested_disc(1).unwrap(), &["disc_0"]).unwrap();
        assert_eq!(betti_numbers(&i1.complex), vec![1, 0, 1]);
        let i2 = attach_double(&models::annulus(4).unwrap(), &["core_annulus"]).unwrap();
        assert_eq!(betti_numbers(&i2.complex), vec![1, 2, 1]);
        let c = &i2.complex;
        let x = c.named("X").unwrap();
        let dy = c.named("DY_1").unwrap();
        assert_eq!(x.union(dy).count(), c.total_simplices());
        assert_eq!(x.intersection(dy).cloned().collect::<BTreeSet<_>>(), *c.named("Y_1").unwrap());
    }

    #[test]
    fn double_rejects_whole_complex() {
        let x = models::annulus(4).unwrap();
        let all: Vec<Simplex> = x.facets();
        let x = x.with_name("all", all).unwrap();
        assert!(matches!(attach_double(&x, &["all"]), Err(BranchError::InvalidSubmanifold(..))));
    }

    #[test]
    fn bouquet_rules() {
        let i1 = attach_double(&models::nested_disc(1).unwrap(), &["disc_0"]).unwrap();
        let single = bouquet(std::slice::from_ref(&i1), &[VertexId::Int(3)]).unwrap();
        assert_eq!(single, i1);
        let two = bouquet(&[i1.clone(), i1.clone()], &[VertexId::Int(3), VertexId::Int(3)]).unwrap();
        assert_eq!(betti_numbers(&two.complex), vec![1, 0, 2]);
        assert_eq!(two.loci.len(), 2);
        assert!(matches!(
            bouquet(&[i1.clone(), i1], &[VertexId::Int(0), VertexId::Int(3)]),
            Err(BranchError::BasepointOnLocus(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = attach_flap(&models::sphere(2).unwrap(), "equator").unwrap();
        let back = BranchedModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }
}
