//! Finite abstract simplicial complexes.
//!
//! A [`SimplicialComplex`] stores its vertices in a fixed total order and every
//! simplex as a strictly increasing tuple of vertex indices. Constructors in
//! [`ops`] and [`models`] always return downward-closed complexes; named
//! subcomplexes are how callers designate pieces such as a branch locus or the
//! submanifold that gets doubled.

mod io;
pub mod models;
pub mod ops;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use io::parse_rational;
pub use io::ComplexFile;
pub use models::standard_model;
pub use ops::{barycentric_subdivision, boundary_subcomplex, disjoint_union, double, link, product, wedge, Product};

/// A simplex as a strictly increasing list of vertex indices into
/// [`SimplicialComplex::vertices`].
pub type Simplex = Vec<usize>;

/// Opaque vertex identifier. Integers sort before names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Name(String),
}

impl VertexId {
    pub fn name(s: impl Into<String>) -> Self {
        VertexId::Name(s.into())
    }
}

impl From<i64> for VertexId {
    fn from(v: i64) -> Self {
        VertexId::Int(v)
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId::Int(v as i64)
    }
}

impl From<i32> for VertexId {
    fn from(v: i32) -> Self {
        VertexId::Int(v as i64)
    }
}

impl From<&str> for VertexId {
    fn from(v: &str) -> Self {
        VertexId::Name(v.to_string())
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(v) => write!(f, "{v}"),
            VertexId::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("malformed facet {0}: repeated vertex")]
    MalformedFacet(String),
    #[error("named subcomplex `{0}` is not a subcomplex of the ambient complex")]
    BadName(String),
    #[error("no named subcomplex `{0}`")]
    UnknownName(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("bad basepoint: {0}")]
    BadBasepoint(String),
    #[error("not a manifold candidate: {0}")]
    NotManifoldCandidate(String),
    #[error("nothing to double: the boundary is empty")]
    NothingToDouble,
    #[error("simplex {0} is not in the complex")]
    MissingSimplex(String),
    #[error("vertex identifier collision on `{0}`")]
    VertexCollision(String),
    #[error("not a simplicial map: image of {0} is not a simplex")]
    NotSimplicial(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("malformed complex file: {0}")]
    Format(String),
}

/// Finite abstract simplicial complex with named subcomplexes and optional
/// vertex-value assets.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertices: Vec<VertexId>,
    simplices: Vec<Vec<Simplex>>,
    lookup: Vec<HashMap<Simplex, usize>>,
    named: BTreeMap<String, BTreeSet<Simplex>>,
    fields: BTreeMap<String, Vec<BigRational>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.simplices == other.simplices
            && self.named == other.named
            && self.fields == other.fields
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// The empty complex.
    pub fn empty() -> Self {
        ComplexBuilder::new().build().expect("empty complex is valid")
    }

    /// Downward closure of `facets`. Named facet lists are closed the same way
    /// and must land inside the ambient complex.
    pub fn from_facets<V>(facets: &[Vec<V>], names: &[(&str, Vec<Vec<V>>)]) -> Result<Self, ComplexError>
    where
        V: Clone + Into<VertexId>,
    {
        let mut b = ComplexBuilder::new();
        for f in facets {
            b.add_simplex(f.iter().cloned().map(Into::into))?;
        }
        for (label, list) in names {
            b.declare_name(label);
            for f in list {
                b.add_named(label, f.iter().cloned().map(Into::into))?;
            }
        }
        b.build()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &VertexId) -> Option<usize> {
        self.vertices.binary_search(id).ok()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    /// All `d`-simplices in lexicographic order (empty slice past the top
    /// dimension).
    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    pub fn total_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Position of `s` among the simplices of its dimension.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        self.lookup.get(d)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// Iterator over every simplex, lowest dimension first.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    /// Maximal simplices in lexicographic order.
    pub fn facets(&self) -> Vec<Simplex> {
        maximal_simplices(self.iter())
    }

    pub fn is_pure(&self) -> bool {
        let Some(d) = self.dim() else { return true };
        self.facets().iter().all(|f| f.len() == d + 1)
    }

    pub fn simplex_ids(&self, s: &[usize]) -> Vec<VertexId> {
        s.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Sorted index tuple of the given identifiers, if every identifier is a
    /// vertex and the tuple is a simplex.
    pub fn simplex_from_ids(&self, ids: &[VertexId]) -> Option<Simplex> {
        let mut s: Simplex = ids.iter().map(|id| self.vertex_index(id)).collect::<Option<_>>()?;
        s.sort_unstable();
        s.dedup();
        if s.len() != ids.len() || !self.contains(&s) {
            return None;
        }
        Some(s)
    }

    pub fn format_simplex(&self, s: &[usize]) -> String {
        format_ids(&self.simplex_ids(s))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.named.keys().map(String::as_str)
    }

    pub fn named(&self, label: &str) -> Option<&BTreeSet<Simplex>> {
        self.named.get(label)
    }

    pub fn named_or_err(&self, label: &str) -> Result<&BTreeSet<Simplex>, ComplexError> {
        self.named(label).ok_or_else(|| ComplexError::UnknownName(label.to_string()))
    }

    /// The named subcomplex as a standalone complex over the same vertex
    /// identifiers.
    pub fn subcomplex(&self, label: &str) -> Result<SimplicialComplex, ComplexError> {
        Ok(self.restrict(self.named_or_err(label)?))
    }

    /// Standalone complex on a downward-closed set of simplices of `self`.
    pub fn restrict<'a>(&self, set: impl IntoIterator<Item = &'a Simplex>) -> SimplicialComplex {
        let mut b = ComplexBuilder::new();
        for s in set {
            b.add_simplex_unchecked(s.iter().map(|&v| self.vertices[v].clone()));
        }
        b.build().expect("restriction of a complex is a complex")
    }

    /// Inclusion of a standalone complex whose vertex identifiers are all
    /// vertices of `self`.
    pub fn inclusion_from(self: &Arc<Self>, sub: &Arc<SimplicialComplex>) -> Result<SimplicialMap, ComplexError> {
        let assignment = sub
            .vertices
            .iter()
            .map(|id| self.vertex_index(id).ok_or_else(|| ComplexError::MissingSimplex(format!("[{id}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        SimplicialMap::new(sub.clone(), self.clone(), assignment)
    }

    pub fn fields(&self) -> &BTreeMap<String, Vec<BigRational>> {
        &self.fields
    }

    pub fn field(&self, name: &str) -> Option<&[BigRational]> {
        self.fields.get(name).map(Vec::as_slice)
    }

    /// Attach a vertex-value asset, one value per vertex in vertex order.
    pub fn with_field(mut self, name: &str, values: Vec<BigRational>) -> Result<Self, ComplexError> {
        if values.len() != self.vertices.len() {
            return Err(ComplexError::InvalidField(format!(
                "`{name}` has {} values for {} vertices",
                values.len(),
                self.vertices.len()
            )));
        }
        self.fields.insert(name.to_string(), values);
        Ok(self)
    }

    /// Install an extra named subcomplex (closed under faces).
    pub fn with_name(
        mut self,
        label: &str,
        simplices: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self, ComplexError> {
        let mut set = BTreeSet::new();
        for s in simplices {
            close_into(&s, &mut set);
        }
        if !set.iter().all(|s| self.contains(s)) {
            return Err(ComplexError::BadName(label.to_string()));
        }
        self.named.insert(label.to_string(), set);
        Ok(self)
    }

    /// Number of vertices adjacent to `v` along edges.
    pub fn degree(&self, v: usize) -> usize {
        self.simplices(1).iter().filter(|e| e.contains(&v)).count()
    }

    /// Connected components as lists of vertex indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in self.simplices(1) {
            uf.union(e[0], e[1]);
        }
        uf.groups()
    }

    /// Checks the structural invariants (closure, ordering, names).
    pub fn check_invariants(&self) -> Result<(), String> {
        for w in self.vertices.windows(2) {
            if w[0] >= w[1] {
                return Err(format!("vertex order violated at {} / {}", w[0], w[1]));
            }
        }
        for (d, list) in self.simplices.iter().enumerate() {
            for s in list {
                if s.len() != d + 1 || s.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(format!("bad simplex tuple {s:?}"));
                }
                if d > 0 {
                    for i in 0..s.len() {
                        let face = face_without(s, i);
                        if !self.contains(&face) {
                            return Err(format!("face {face:?} of {s:?} missing"));
                        }
                    }
                }
            }
            let unique: HashSet<_> = list.iter().collect();
            if unique.len() != list.len() {
                return Err(format!("duplicate {d}-simplex"));
            }
        }
        for (label, set) in &self.named {
            for s in set {
                if !self.contains(s) {
                    return Err(format!("`{label}` contains foreign simplex {s:?}"));
                }
                if s.len() > 1 {
                    for i in 0..s.len() {
                        if !set.contains(&face_without(s, i)) {
                            return Err(format!("`{label}` is not downward closed"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn from_closed_sets(
        vertices: Vec<VertexId>,
        by_dim: Vec<Vec<Simplex>>,
        named: BTreeMap<String, BTreeSet<Simplex>>,
        fields: BTreeMap<String, Vec<BigRational>>,
    ) -> Self {
        let lookup = by_dim.iter().map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { vertices, simplices: by_dim, lookup, named, fields }
    }
}

pub(crate) fn format_ids(ids: &[VertexId]) -> String {
    let parts: Vec<String> = ids.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub(crate) fn face_without(s: &[usize], i: usize) -> Simplex {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

/// Inserts `s` and all of its nonempty faces into `set`.
pub(crate) fn close_into(s: &[usize], set: &mut BTreeSet<Simplex>) {
    if s.is_empty() || set.contains(s) {
        return;
    }
    set.insert(s.to_vec());
    if s.len() > 1 {
        for i in 0..s.len() {
            close_into(&face_without(s, i), set);
        }
    }
}

pub(crate) fn maximal_simplices<'a>(all: impl Iterator<Item = &'a Simplex>) -> Vec<Simplex> {
    let all: Vec<&Simplex> = all.collect();
    let mut faces: HashSet<Simplex> = HashSet::new();
    for s in &all {
        if s.len() > 1 {
            for i in 0..s.len() {
                faces.insert(face_without(s, i));
            }
        }
    }
    let mut out: Vec<Simplex> = all.into_iter().filter(|s| !faces.contains(*s)).cloned().collect();
    out.sort();
    out
}

/// Collects simplices by vertex identifier and produces a sorted, closed
/// complex.
#[derive(Debug, Default)]
pub(crate) struct ComplexBuilder {
    ids: IndexSet<VertexId>,
    simplices: Vec<Vec<usize>>,
    named: BTreeMap<String, Vec<Vec<usize>>>,
    fields: BTreeMap<String, Vec<BigRational>>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: VertexId) -> usize {
        self.ids.insert_full(id).0
    }

    fn indices(&mut self, ids: impl IntoIterator<Item = VertexId>) -> Result<Vec<usize>, ComplexError> {
        let raw: Vec<VertexId> = ids.into_iter().collect();
        let mut idx: Vec<usize> = raw.iter().cloned().map(|id| self.vertex(id)).collect();
        idx.sort_unstable();
        let n = idx.len();
        idx.dedup();
        if idx.len() != n {
            return Err(ComplexError::MalformedFacet(format_ids(&raw)));
        }
        Ok(idx)
    }

    pub fn add_simplex(&mut self, ids: impl IntoIterator<Item = VertexId>) -> Result<(), ComplexError> {
        let idx = self.indices(ids)?;
        if !idx.is_empty() {
            self.simplices.push(idx);
        }
        Ok(())
    }

    /// Like [`add_simplex`](Self::add_simplex) for inputs already known to be
    /// repetition-free.
    pub fn add_simplex_unchecked(&mut self, ids: impl IntoIterator<Item = VertexId>) {
        self.add_simplex(ids).expect("simplex without repeated vertices");
    }

    pub fn declare_name(&mut self, label: &str) {
        self.named.entry(label.to_string()).or_default();
    }

    pub fn add_named(&mut self, label: &str, ids: impl IntoIterator<Item = VertexId>) -> Result<(), ComplexError> {
        let idx = self.indices(ids)?;
        self.named.entry(label.to_string()).or_default().push(idx);
        Ok(())
    }

    pub fn set_field(&mut self, name: &str, values: Vec<BigRational>) {
        self.fields.insert(name.to_string(), values);
    }

    pub fn build(self) -> Result<SimplicialComplex, ComplexError> {
        let ComplexBuilder { ids, simplices, named, fields } = self;
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let mut new_index = vec![0usize; ids.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let vertices: Vec<VertexId> = order.iter().map(|&o| ids[o].clone()).collect();
        let remap = |s: &Vec<usize>| -> Simplex {
            let mut t: Simplex = s.iter().map(|&v| new_index[v]).collect();
            t.sort_unstable();
            t
        };

        let mut all = BTreeSet::new();
        for v in 0..vertices.len() {
            all.insert(vec![v]);
        }
        let mut tops: Vec<Simplex> = simplices.iter().map(remap).collect();
        tops.sort_by_key(|s| std::cmp::Reverse(s.len()));
        for s in &tops {
            close_into(s, &mut all);
        }
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Vec::new);
            }
            by_dim[d].push(s);
        }
        for list in &mut by_dim {
            list.sort();
        }

        let mut closed_named = BTreeMap::new();
        for (label, list) in named {
            let mut set = BTreeSet::new();
            for s in &list {
                close_into(&remap(s), &mut set);
            }
            closed_named.insert(label, set);
        }
        let mut fields_sorted = BTreeMap::new();
        for (name, values) in fields {
            if values.len() != vertices.len() {
                return Err(ComplexError::InvalidField(name));
            }
            let vals = order.iter().map(|&o| values[o].clone()).collect();
            fields_sorted.insert(name, vals);
        }
        let c = SimplicialComplex::from_closed_sets(vertices, by_dim, BTreeMap::new(), fields_sorted);
        for (label, set) in &closed_named {
            if !set.iter().all(|s| c.contains(s)) {
                return Err(ComplexError::BadName(label.clone()));
            }
        }
        Ok(SimplicialComplex { named: closed_named, ..c })
    }
}

/// Vertex assignment between two complexes that sends simplices to simplices.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    assignment: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<SimplicialComplex>,
        target: Arc<SimplicialComplex>,
        assignment: Vec<usize>,
    ) -> Result<Self, ComplexError> {
        if assignment.len() != source.num_vertices() || assignment.iter().any(|&v| v >= target.num_vertices()) {
            return Err(ComplexError::NotSimplicial("vertex assignment".into()));
        }
        let map = SimplicialMap { source, target, assignment };
        for s in map.source.iter() {
            if !map.target.contains(&map.image(s)) {
                return Err(ComplexError::NotSimplicial(map.source.format_simplex(s)));
            }
        }
        Ok(map)
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Image vertex set, sorted and deduplicated.
    pub fn image(&self, s: &[usize]) -> Simplex {
        let mut t: Simplex = s.iter().map(|&v| self.assignment[v]).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    pub fn is_injective(&self) -> bool {
        let set: HashSet<_> = self.assignment.iter().collect();
        set.len() == self.assignment.len()
    }

    /// Image of an oriented simplex: the target simplex index and the sign of
    /// the reordering, or `None` when the simplex is collapsed.
    pub fn oriented_image(&self, s: &[usize]) -> Option<(usize, i8)> {
        let img: Vec<usize> = s.iter().map(|&v| self.assignment[v]).collect();
        let mut sorted = img.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != img.len() {
            return None;
        }
        let sign = permutation_sign(&img);
        self.target.index_of(&sorted).map(|i| (i, sign))
    }
}

/// Sign of the permutation that sorts `v` (entries distinct).
pub(crate) fn permutation_sign(v: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Classes ordered by smallest member, members ascending.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_closure() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1, 2]], &[]).unwrap();
        assert_eq!(c.f_vector(), vec![3, 3, 1]);
        c.check_invariants().unwrap();
    }

    #[test]
    fn circle_from_edges() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]], &[]).unwrap();
        assert_eq!(c.f_vector(), vec![3, 3]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn tetrahedron_boundary_is_a_sphere() {
        let c =
            SimplicialComplex::from_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]], &[]).unwrap();
        assert_eq!(c.euler_characteristic(), 2);
        assert_eq!(c.facets().len(), 4);
    }

    #[test]
    fn repeated_vertex_is_malformed() {
        let err = SimplicialComplex::from_facets(&[vec![0, 1, 1]], &[]).unwrap_err();
        assert!(matches!(err, ComplexError::MalformedFacet(_)));
    }

    #[test]
    fn named_facet_outside_is_rejected() {
        let err = SimplicialComplex::from_facets(&[vec![0, 1], vec![1, 2]], &[("bad", vec![vec![0, 2]])]).unwrap_err();
        assert_eq!(err, ComplexError::BadName("bad".into()));
    }

    #[test]
    fn vertex_order_is_sorted_identifiers() {
        let c =
            SimplicialComplex::from_facets(&[vec![VertexId::name("b"), VertexId::Int(7), VertexId::name("a")]], &[])
                .unwrap();
        assert_eq!(c.vertices(), &[VertexId::Int(7), VertexId::name("a"), VertexId::name("b")]);
    }

    #[test]
    fn non_simplicial_assignment_is_rejected() {
        let path = Arc::new(SimplicialComplex::from_facets(&[vec![0, 1], vec![1, 2]], &[]).unwrap());
        let two = Arc::new(SimplicialComplex::from_facets(&[vec![0], vec![1]], &[]).unwrap());
        assert!(SimplicialMap::new(path, two, vec![0, 1, 0]).is_err());
    }
}
