//! Geometric constructors: unions, wedges, products, doubles, links and
//! subdivisions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{
    close_into, face_without, format_ids, maximal_simplices, ComplexBuilder, ComplexError, Simplex, SimplicialComplex,
    SimplicialMap, VertexId,
};

/// Prefixes an identifier with a component tag, `"{tag}:{id}"`.
pub fn tag_vertex(tag: &str, id: &VertexId) -> VertexId {
    VertexId::Name(format!("{tag}:{id}"))
}

fn add_relabelled(
    b: &mut ComplexBuilder,
    c: &SimplicialComplex,
    relabel: &dyn Fn(&VertexId) -> VertexId,
    name_prefix: Option<&str>,
) -> Result<(), ComplexError> {
    for v in c.vertices() {
        b.vertex(relabel(v));
    }
    for f in c.facets() {
        b.add_simplex(f.iter().map(|&v| relabel(&c.vertices()[v])))?;
    }
    for label in c.names() {
        let new_label = match name_prefix {
            Some(p) => format!("{p}:{label}"),
            None => label.to_string(),
        };
        b.declare_name(&new_label);
        for f in maximal_simplices(c.named(label).unwrap().iter()) {
            b.add_named(&new_label, f.iter().map(|&v| relabel(&c.vertices()[v])))?;
        }
    }
    Ok(())
}

fn tagged_inclusion(
    part: &SimplicialComplex,
    whole: &Arc<SimplicialComplex>,
    relabel: &dyn Fn(&VertexId) -> VertexId,
) -> SimplicialMap {
    let assignment =
        part.vertices().iter().map(|v| whole.vertex_index(&relabel(v)).expect("tagged vertex present")).collect();
    SimplicialMap::new(Arc::new(part.clone()), whole.clone(), assignment).expect("tagged inclusion is simplicial")
}

/// Disjoint union with vertices tagged `0:` and `1:`; named subcomplexes keep
/// their labels under the same tags.
pub fn disjoint_union(a: &SimplicialComplex, b: &SimplicialComplex) -> (SimplicialComplex, [SimplicialMap; 2]) {
    let ta = |v: &VertexId| tag_vertex("0", v);
    let tb = |v: &VertexId| tag_vertex("1", v);
    let mut builder = ComplexBuilder::new();
    add_relabelled(&mut builder, a, &ta, Some("0")).expect("relabelled complex");
    add_relabelled(&mut builder, b, &tb, Some("1")).expect("relabelled complex");
    let whole = Arc::new(builder.build().expect("disjoint union"));
    let maps = [tagged_inclusion(a, &whole, &ta), tagged_inclusion(b, &whole, &tb)];
    ((*whole).clone(), maps)
}

/// One-point union of several complexes. A single part is returned unchanged;
/// otherwise part `i` is tagged `"{i}:"` and every basepoint becomes the
/// tagged basepoint of part 0.
pub fn wedge_many(parts: &[&SimplicialComplex], basepoints: &[VertexId]) -> Result<SimplicialComplex, ComplexError> {
    if parts.len() != basepoints.len() {
        return Err(ComplexError::BadBasepoint("one basepoint per part required".into()));
    }
    for (c, p) in parts.iter().zip(basepoints) {
        if c.vertex_index(p).is_none() {
            return Err(ComplexError::BadBasepoint(p.to_string()));
        }
    }
    match parts.len() {
        0 => return Ok(SimplicialComplex::empty()),
        1 => return Ok(parts[0].clone()),
        _ => {}
    }
    let hub = tag_vertex("0", &basepoints[0]);
    let mut builder = ComplexBuilder::new();
    for (i, (c, p)) in parts.iter().zip(basepoints).enumerate() {
        let tag = i.to_string();
        let hub = hub.clone();
        let relabel = move |v: &VertexId| if v == p { hub.clone() } else { tag_vertex(&tag, v) };
        add_relabelled(&mut builder, c, &relabel, Some(&i.to_string()))?;
    }
    builder.build()
}

/// `a ∨ b` with `p ∈ a` and `q ∈ b` identified (the glued vertex is `0:p`).
pub fn wedge(
    a: &SimplicialComplex,
    p: &VertexId,
    b: &SimplicialComplex,
    q: &VertexId,
) -> Result<SimplicialComplex, ComplexError> {
    wedge_many(&[a, b], &[p.clone(), q.clone()])
}

/// Staircase triangulation of `|a| × |b|` together with its two coordinate
/// projections.
#[derive(Debug, Clone)]
pub struct Product {
    pub complex: SimplicialComplex,
    /// `projections[k][v]` is the vertex index of factor `k` under vertex `v`.
    pub projections: [Vec<usize>; 2],
}

impl Product {
    pub fn projection(&self, factor: usize, target: &SimplicialComplex) -> Result<SimplicialMap, ComplexError> {
        SimplicialMap::new(Arc::new(self.complex.clone()), Arc::new(target.clone()), self.projections[factor].clone())
    }
}

/// Identifier of the product vertex `(x, y)`.
pub fn pair_vertex(x: &VertexId, y: &VertexId) -> VertexId {
    VertexId::Name(format!("({x},{y})"))
}

/// Monotone lattice paths through `s × t`, each a list of index pairs.
fn staircase(s: &[usize], t: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn walk(
        s: &[usize],
        t: &[usize],
        i: usize,
        j: usize,
        path: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        path.push((s[i], t[j]));
        if i + 1 == s.len() && j + 1 == t.len() {
            out.push(path.clone());
        }
        if i + 1 < s.len() {
            walk(s, t, i + 1, j, path, out);
        }
        if j + 1 < t.len() {
            walk(s, t, i, j + 1, path, out);
        }
        path.pop();
    }
    let mut out = Vec::new();
    walk(s, t, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// Staircase simplices of `sa × sb` for two collections of simplices, in
/// product identifiers.
pub(crate) fn product_cells(
    a: &SimplicialComplex,
    sa: &[Simplex],
    b: &SimplicialComplex,
    sb: &[Simplex],
) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    for s in sa {
        for t in sb {
            for path in staircase(s, t) {
                out.push(path.iter().map(|&(x, y)| pair_vertex(&a.vertices()[x], &b.vertices()[y])).collect());
            }
        }
    }
    out
}

/// Ordered staircase triangulation of `|a| × |b|`. Named subcomplexes `N` of
/// `a` appear as `left:N = N × b`, those of `b` as `right:N = a × N`.
pub fn product(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<Product, ComplexError> {
    let mut builder = ComplexBuilder::new();
    let mut seen = BTreeMap::new();
    for (i, x) in a.vertices().iter().enumerate() {
        for (j, y) in b.vertices().iter().enumerate() {
            let id = pair_vertex(x, y);
            if seen.insert(id.clone(), (i, j)).is_some() {
                return Err(ComplexError::VertexCollision(id.to_string()));
            }
            builder.vertex(id);
        }
    }
    let fa = a.facets();
    let fb = b.facets();
    for cell in product_cells(a, &fa, b, &fb) {
        builder.add_simplex(cell)?;
    }
    for label in a.names() {
        let key = format!("left:{label}");
        builder.declare_name(&key);
        let sa = maximal_simplices(a.named(label).unwrap().iter());
        for cell in product_cells(a, &sa, b, &fb) {
            builder.add_named(&key, cell)?;
        }
    }
    for label in b.names() {
        let key = format!("right:{label}");
        builder.declare_name(&key);
        let sb = maximal_simplices(b.named(label).unwrap().iter());
        for cell in product_cells(a, &fa, b, &sb) {
            builder.add_named(&key, cell)?;
        }
    }
    let complex = builder.build()?;
    let mut proj_a = Vec::with_capacity(complex.num_vertices());
    let mut proj_b = Vec::with_capacity(complex.num_vertices());
    for v in complex.vertices() {
        let (i, j) = seen[v];
        proj_a.push(i);
        proj_b.push(j);
    }
    Ok(Product { complex, projections: [proj_a, proj_b] })
}

/// Codimension-one faces lying in exactly one top simplex, closed under
/// faces. Fails unless the complex is pure and every codimension-one face has
/// at most two cofaces.
pub fn boundary_faces(a: &SimplicialComplex) -> Result<BTreeSet<Simplex>, ComplexError> {
    let Some(d) = a.dim() else { return Ok(BTreeSet::new()) };
    if !a.is_pure() {
        return Err(ComplexError::NotManifoldCandidate("complex is not pure".into()));
    }
    if d == 0 {
        return Ok(BTreeSet::new());
    }
    let mut count = vec![0usize; a.count(d - 1)];
    for s in a.simplices(d) {
        for i in 0..s.len() {
            count[a.index_of(&face_without(s, i)).unwrap()] += 1;
        }
    }
    let mut set = BTreeSet::new();
    for (k, &n) in count.iter().enumerate() {
        match n {
            1 => close_into(&a.simplices(d - 1)[k], &mut set),
            2 => {}
            _ => {
                return Err(ComplexError::NotManifoldCandidate(format!(
                    "face {} lies in {n} top simplices",
                    a.format_simplex(&a.simplices(d - 1)[k])
                )))
            }
        }
    }
    Ok(set)
}

/// Closure of the codimension-one faces that lie in exactly one top simplex.
pub fn boundary_subcomplex(a: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
    Ok(a.restrict(&boundary_faces(a)?))
}

/// Identifier of the barycentre of `s`, prefixed.
pub(crate) fn barycentre_id(prefix: &str, c: &SimplicialComplex, s: &[usize]) -> VertexId {
    VertexId::Name(format!("{prefix}{}", format_ids(&c.simplex_ids(s))))
}

/// Derived subdivision of `y` relative to the closed subset `fixed`: every
/// simplex outside `fixed` is starred, the simplices of `fixed` keep their
/// vertices. Returned simplices are in identifiers; new vertices carry
/// `prefix`.
pub(crate) fn relative_derived(y: &SimplicialComplex, fixed: &BTreeSet<Simplex>, prefix: &str) -> Vec<Vec<VertexId>> {
    // maximal fixed faces of each simplex, memoised on demand
    let fixed_tops = |s: &Simplex| -> Vec<Simplex> {
        let mut faces = BTreeSet::new();
        let k = s.len();
        for mask in 1u32..(1 << k) {
            let f: Simplex = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
            if fixed.contains(&f) {
                faces.insert(f);
            }
        }
        maximal_simplices(faces.iter())
    };
    let free: Vec<&Simplex> = y.iter().filter(|s| !fixed.contains(*s)).collect();
    let mut out = Vec::new();
    for s in y.iter().filter(|s| fixed.contains(*s)) {
        out.push(y.simplex_ids(s));
    }
    // chains of free simplices descending from each maximal free simplex
    fn chains(top: &Simplex, fixed: &BTreeSet<Simplex>, chain: &mut Vec<Simplex>, out: &mut Vec<Vec<Simplex>>) {
        chain.push(top.clone());
        out.push(chain.clone());
        if top.len() > 1 {
            for i in 0..top.len() {
                let f = face_without(top, i);
                if !fixed.contains(&f) {
                    chains(&f, fixed, chain, out);
                }
            }
        }
        chain.pop();
    }
    let free_set: BTreeSet<&Simplex> = free.iter().copied().collect();
    let mut tops: Vec<&Simplex> = Vec::new();
    for s in &free {
        let has_free_coface =
            y.simplices(s.len()).iter().any(|t| free_set.contains(t) && s.iter().all(|v| t.contains(v)));
        if !has_free_coface {
            tops.push(s);
        }
    }
    for top in tops {
        let mut all = Vec::new();
        chains(top, fixed, &mut Vec::new(), &mut all);
        for chain in all {
            let bottom = chain.last().unwrap();
            let bary: Vec<VertexId> = chain.iter().map(|s| barycentre_id(prefix, y, s)).collect();
            let tops_fixed = fixed_tops(bottom);
            if tops_fixed.is_empty() {
                out.push(bary);
            } else {
                for tau in tops_fixed {
                    let mut cell = y.simplex_ids(&tau);
                    cell.extend(bary.iter().cloned());
                    out.push(cell);
                }
            }
        }
    }
    out
}

/// `y ∪ y′` glued by the identity along `∂y`, where `y′` is a copy of `y`
/// subdivided relative to its boundary. Names `first_copy`, `second_copy` and
/// `seam` are installed.
pub fn double(y: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
    let seam = boundary_faces(y)?;
    if seam.is_empty() {
        return Err(ComplexError::NothingToDouble);
    }
    let second = relative_derived(y, &seam, "'");
    let mut b = ComplexBuilder::new();
    for v in y.vertices() {
        b.vertex(v.clone());
    }
    for f in y.facets() {
        b.add_simplex(y.simplex_ids(&f))?;
    }
    for s in &second {
        b.add_simplex(s.iter().cloned())?;
    }
    b.declare_name("first_copy");
    for f in y.facets() {
        b.add_named("first_copy", y.simplex_ids(&f))?;
    }
    b.declare_name("second_copy");
    for s in &second {
        b.add_named("second_copy", s.iter().cloned())?;
    }
    b.declare_name("seam");
    for s in maximal_simplices(seam.iter()) {
        b.add_named("seam", y.simplex_ids(&s))?;
    }
    b.build()
}

/// Standard link `{ t : t ∩ s = ∅, t ∪ s ∈ a }` over the same identifiers.
pub fn link(a: &SimplicialComplex, s: &[VertexId]) -> Result<SimplicialComplex, ComplexError> {
    let simplex = a.simplex_from_ids(s).ok_or_else(|| ComplexError::MissingSimplex(format_ids(s)))?;
    Ok(link_of(a, &simplex))
}

pub(crate) fn link_of(a: &SimplicialComplex, s: &[usize]) -> SimplicialComplex {
    let mut b = ComplexBuilder::new();
    for f in a.facets() {
        if s.iter().all(|v| f.contains(v)) {
            let rest: Vec<VertexId> = f.iter().filter(|v| !s.contains(v)).map(|&v| a.vertices()[v].clone()).collect();
            if !rest.is_empty() {
                b.add_simplex_unchecked(rest);
            }
        }
    }
    b.build().expect("link is a complex")
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

fn flags(c: &SimplicialComplex, facets: &[Simplex]) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    for f in facets {
        for perm in permutations(f) {
            let mut cell = Vec::with_capacity(perm.len());
            let mut face: Vec<usize> = Vec::new();
            for v in perm {
                face.push(v);
                face.sort_unstable();
                cell.push(barycentre_id("", c, &face));
            }
            out.push(cell);
        }
    }
    out
}

/// First barycentric subdivision: vertices are the simplices of `a` (named
/// `"[ids]"`), simplices are chains under inclusion. Named subcomplexes are
/// subdivided along.
pub fn barycentric_subdivision(a: &SimplicialComplex) -> SimplicialComplex {
    let mut b = ComplexBuilder::new();
    for s in a.iter() {
        b.vertex(barycentre_id("", a, s));
    }
    for cell in flags(a, &a.facets()) {
        b.add_simplex_unchecked(cell);
    }
    for label in a.names() {
        b.declare_name(label);
        let tops = maximal_simplices(a.named(label).unwrap().iter());
        for cell in flags(a, &tops) {
            b.add_named(label, cell).expect("flag of a named simplex");
        }
    }
    b.build().expect("subdivision is a complex")
}
