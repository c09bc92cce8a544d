//! Reeb graphs of piecewise-linear functions.
//!
//! A vertex field extends linearly over simplices. Two points are identified
//! when they lie in one component of a level set. With injective vertex
//! values the quotient is a graph: its nodes are the components of the
//! level sets through vertices and its edges the components of the open
//! slabs between consecutive vertex values. Level-set connectivity is
//! decided on the 2-skeleton, where each triangle straddling a level joins
//! the two edges (or the vertex and the edge) that the level meets.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{parse_rational, ComplexError, SimplicialComplex, UnionFind, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReebError {
    #[error("field takes the value {value} at both {first} and {second}")]
    NonInjectiveField { value: String, first: VertexId, second: VertexId },
    #[error("field has {found} values for {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("complex has no field `{0}`")]
    MissingField(String),
    #[error("malformed field file: {0}")]
    Format(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Exact rational values on the vertices of a complex, pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexField {
    complex: SimplicialComplex,
    values: Vec<BigRational>,
}

impl VertexField {
    pub fn new(complex: SimplicialComplex, values: Vec<BigRational>) -> Result<Self, ReebError> {
        if values.len() != complex.num_vertices() {
            return Err(ReebError::WrongLength { expected: complex.num_vertices(), found: values.len() });
        }
        let mut seen: BTreeMap<&BigRational, usize> = BTreeMap::new();
        for (v, x) in values.iter().enumerate() {
            if let Some(&u) = seen.get(x) {
                return Err(ReebError::NonInjectiveField {
                    value: x.to_string(),
                    first: complex.vertices()[u].clone(),
                    second: complex.vertices()[v].clone(),
                });
            }
            seen.insert(x, v);
        }
        Ok(VertexField { complex, values })
    }

    /// Uses a field stored on the complex, e.g. `height`.
    pub fn named(complex: SimplicialComplex, name: &str) -> Result<Self, ReebError> {
        let values = complex.field(name).ok_or_else(|| ReebError::MissingField(name.into()))?.to_vec();
        Self::new(complex, values)
    }

    pub fn from_fn(complex: SimplicialComplex, f: impl Fn(usize) -> BigRational) -> Result<Self, ReebError> {
        let values = (0..complex.num_vertices()).map(f).collect();
        Self::new(complex, values)
    }

    /// Reads `values` (an array of `"p/q"` strings) for the given complex.
    pub fn from_json(complex: SimplicialComplex, v: &Value) -> Result<Self, ReebError> {
        let arr = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| ReebError::Format("missing `values` array".into()))?;
        let values = arr
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_rational(s).map_err(ReebError::from),
                Value::Number(n) => parse_rational(&n.to_string()).map_err(ReebError::from),
                _ => Err(ReebError::Format(format!("bad value {x}"))),
            })
            .collect::<Result<_, _>>()?;
        Self::new(complex, values)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Composes with a strictly increasing map.
    pub fn relabel(&self, f: impl Fn(&BigRational) -> BigRational) -> Result<Self, ReebError> {
        Self::new(self.complex.clone(), self.values.iter().map(f).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReebNode {
    pub value: BigRational,
    /// The vertex of the complex in this level-set component, if any.
    pub vertex: Option<VertexId>,
}

/// A finite multigraph; loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReebGraph {
    pub nodes: Vec<ReebNode>,
    pub edges: Vec<(usize, usize)>,
    pub smoothed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GraphInvariants {
    pub nodes: usize,
    pub edges: usize,
    /// Sorted ascending.
    pub degrees: Vec<usize>,
    pub beta0: usize,
    pub beta1: usize,
}

/// Computes the Reeb graph of `field`.
pub fn reeb_graph(field: &VertexField) -> ReebGraph {
    let c = &field.complex;
    let f = &field.values;
    let mut order: Vec<usize> = (0..c.num_vertices()).collect();
    order.sort_by(|&a, &b| f[a].cmp(&f[b]));
    let mut rank = vec![0; order.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    // edges oriented upward as (rank lo, rank hi)
    let edges: Vec<(usize, usize)> = c
        .simplices(1)
        .iter()
        .map(|e| {
            let (a, b) = (rank[e[0]], rank[e[1]]);
            (a.min(b), a.max(b))
        })
        .collect();
    // triangles as (lo, mid, hi) ranks with edge indices lo-mid, mid-hi, lo-hi
    let triangles: Vec<([usize; 3], [usize; 3])> = c
        .simplices(2)
        .iter()
        .map(|t| {
            let mut vs = [t[0], t[1], t[2]];
            vs.sort_by_key(|&v| rank[v]);
            let e = |a: usize, b: usize| {
                let mut s = [a, b];
                s.sort_unstable();
                c.index_of(&s).expect("triangle edge present")
            };
            ([rank[vs[0]], rank[vs[1]], rank[vs[2]]], [e(vs[0], vs[1]), e(vs[1], vs[2]), e(vs[0], vs[2])])
        })
        .collect();

    let mut nodes = Vec::new();
    let mut graph_edges = Vec::new();
    // for each level: element -> node id, where element is edge index or the vertex
    let mut level_nodes: Vec<(usize, HashMap<usize, usize>)> = Vec::with_capacity(order.len());
    for (r, &v) in order.iter().enumerate() {
        // element 0 is the vertex, crossing edge k is element k + 1
        let crossing: Vec<usize> = (0..edges.len()).filter(|&k| edges[k].0 < r && edges[k].1 > r).collect();
        let slot: HashMap<usize, usize> = crossing.iter().enumerate().map(|(i, &k)| (k, i + 1)).collect();
        let mut uf = UnionFind::new(crossing.len() + 1);
        for (ranks, es) in &triangles {
            if ranks[0] < r && ranks[2] > r {
                let long = slot[&es[2]];
                if ranks[1] == r {
                    uf.union(0, long);
                } else {
                    let short = if ranks[1] < r { es[1] } else { es[0] };
                    uf.union(slot[&short], long);
                }
            }
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut element_node = HashMap::new();
        for el in 0..=crossing.len() {
            let root = uf.find(el);
            let id = *ids.entry(root).or_insert_with(|| {
                nodes.push(ReebNode { value: f[v].clone(), vertex: None });
                nodes.len() - 1
            });
            if el == 0 {
                nodes[id].vertex = Some(c.vertices()[v].clone());
            }
            element_node.insert(el, id);
        }
        let by_edge: HashMap<usize, usize> =
            crossing.iter().enumerate().map(|(i, &k)| (k, element_node[&(i + 1)])).collect();
        level_nodes.push((element_node[&0], by_edge));
    }
    let node_at = |r: usize, k: usize| -> usize {
        let (vertex_node, by_edge) = &level_nodes[r];
        by_edge.get(&k).copied().unwrap_or(*vertex_node)
    };
    for r in 0..order.len().saturating_sub(1) {
        let spanning: Vec<usize> = (0..edges.len()).filter(|&k| edges[k].0 <= r && edges[k].1 > r).collect();
        let slot: HashMap<usize, usize> = spanning.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut uf = UnionFind::new(spanning.len());
        for (ranks, es) in &triangles {
            if ranks[0] <= r && ranks[2] > r {
                let short = if ranks[1] <= r { es[1] } else { es[0] };
                uf.union(slot[&short], slot[&es[2]]);
            }
        }
        for group in uf.groups() {
            let k = spanning[group[0]];
            graph_edges.push((node_at(r, k), node_at(r + 1, k)));
        }
    }
    ReebGraph { nodes, edges: graph_edges, smoothed: false }
}

impl ReebGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Removes every degree-2 node whose two edge ends belong to different
    /// edges, splicing those edges together.
    pub fn smooth_degree_2(&self) -> ReebGraph {
        let mut edges: Vec<Option<(usize, usize)>> = self.edges.iter().copied().map(Some).collect();
        let mut alive = vec![true; self.nodes.len()];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            incident[a].push(i);
            incident[b].push(i);
        }
        let mut changed = true;
        while changed {
            changed = false;
            for n in 0..self.nodes.len() {
                if !alive[n] {
                    continue;
                }
                incident[n].retain(|&e| edges[e].is_some());
                let inc = &incident[n];
                if inc.len() != 2 || inc[0] == inc[1] {
                    continue;
                }
                let (e1, e2) = (inc[0], inc[1]);
                let other = |e: usize| {
                    let (a, b) = edges[e].unwrap();
                    if a == n {
                        b
                    } else {
                        a
                    }
                };
                let (x, y) = (other(e1), other(e2));
                edges[e1] = Some((x, y));
                edges[e2] = None;
                for slot in incident[y].iter_mut() {
                    if *slot == e2 {
                        *slot = e1;
                    }
                }
                alive[n] = false;
                changed = true;
            }
        }
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if alive[i] {
                new_id[i] = nodes.len();
                nodes.push(node.clone());
            }
        }
        let edges = edges.into_iter().flatten().map(|(a, b)| (new_id[a], new_id[b])).collect();
        ReebGraph { nodes, edges, smoothed: true }
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        uf.groups().len()
    }

    pub fn invariants(&self) -> GraphInvariants {
        let mut degrees = self.degrees();
        degrees.sort_unstable();
        let beta0 = self.components();
        GraphInvariants {
            nodes: self.nodes.len(),
            edges: self.edges.len(),
            degrees,
            beta0,
            beta1: self.edges.len() + beta0 - self.nodes.len(),
        }
    }

    /// Multigraph isomorphism, ignoring values.
    pub fn is_isomorphic(&self, other: &ReebGraph) -> bool {
        let n = self.nodes.len();
        if n != other.nodes.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let adjacency = |g: &ReebGraph| {
            let mut m = vec![vec![0usize; n]; n];
            for &(a, b) in &g.edges {
                m[a][b] += 1;
                if a != b {
                    m[b][a] += 1;
                }
            }
            m
        };
        let (a, b) = (adjacency(self), adjacency(other));
        let (da, db) = (self.degrees(), other.degrees());
        let mut sorted_a = da.clone();
        let mut sorted_b = db.clone();
        sorted_a.sort_unstable();
        sorted_b.sort_unstable();
        if sorted_a != sorted_b {
            return false;
        }
        fn extend(
            i: usize,
            map: &mut Vec<usize>,
            used: &mut [bool],
            a: &[Vec<usize>],
            b: &[Vec<usize>],
            da: &[usize],
            db: &[usize],
        ) -> bool {
            if i == a.len() {
                return true;
            }
            for j in 0..b.len() {
                if used[j] || da[i] != db[j] || a[i][i] != b[j][j] {
                    continue;
                }
                if (0..i).any(|k| a[i][k] != b[j][map[k]]) {
                    continue;
                }
                used[j] = true;
                map.push(j);
                if extend(i + 1, map, used, a, b, da, db) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
            false
        }
        extend(0, &mut Vec::new(), &mut vec![false; n], &a, &b, &da, &db)
    }

    /// The graph of a 1-complex, with vertex indices as values.
    pub fn of_graph(c: &SimplicialComplex) -> ReebGraph {
        let nodes = c
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| ReebNode { value: BigRational::from_integer(i.into()), vertex: Some(v.clone()) })
            .collect();
        let edges = c.simplices(1).iter().map(|e| (e[0], e[1])).collect();
        ReebGraph { nodes, edges, smoothed: false }
    }

    pub fn to_json(&self) -> Value {
        let degrees = self.degrees();
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                json!({
                    "id": i,
                    "value": n.value.to_string(),
                    "vertex": n.vertex.as_ref().map(|v| serde_json::to_value(v).expect("vertex id serialises")),
                    "degree": degrees[i],
                })
            })
            .collect();
        let edges: Vec<Value> = self.edges.iter().map(|&(a, b)| json!([a, b])).collect();
        json!({
            "smoothed": self.smoothed,
            "nodes": nodes,
            "edges": edges,
            "invariants": self.invariants(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{models, ops};

    fn smoothed(c: SimplicialComplex) -> GraphInvariants {
        reeb_graph(&VertexField::named(c, "height").unwrap()).smooth_degree_2().invariants()
    }

    #[test]
    fn sphere_height() {
        for n in 1..=3 {
            let inv = smoothed(models::sphere(n).unwrap());
            if n == 1 {
                assert_eq!((inv.nodes, inv.edges), (1, 1));
            } else {
                assert_eq!((inv.nodes, inv.edges, inv.degrees), (2, 1, vec![1, 1]));
            }
        }
    }

    #[test]
    fn torus_height() {
        let inv = smoothed(models::torus_grid(8, 8).unwrap());
        assert_eq!(inv.degrees, vec![1, 1, 3, 3]);
        assert_eq!((inv.nodes, inv.edges, inv.beta0, inv.beta1), (4, 4, 1, 1));
    }

    #[test]
    fn monotone_interval() {
        let i = models::interval(5).unwrap();
        let field = VertexField::from_fn(i, |v| BigRational::from_integer((v as i64).into())).unwrap();
        let g = reeb_graph(&field).smooth_degree_2();
        assert_eq!((g.nodes.len(), g.edges.len()), (2, 1));
    }

    #[test]
    fn two_spheres() {
        let s = models::sphere(2).unwrap();
        let (u, _) = ops::disjoint_union(&s, &s);
        let field = VertexField::from_fn(u, |v| BigRational::from_integer((v as i64).into())).unwrap();
        let inv = reeb_graph(&field).smooth_degree_2().invariants();
        assert_eq!((inv.beta0, inv.beta1), (2, 0));
    }

    #[test]
    fn graphs_are_their_own_reeb_graphs() {
        let c = models::circle(5).unwrap();
        let eight = ops::wedge(&c, &0.into(), &c, &0.into()).unwrap();
        for g in [c, eight] {
            let field = VertexField::from_fn(g.clone(), |v| BigRational::new(((v * 7) % 11).into(), 3.into())).unwrap();
            let reeb = reeb_graph(&field).smooth_degree_2();
            assert!(reeb.is_isomorphic(&ReebGraph::of_graph(&g).smooth_degree_2()));
        }
    }

    #[test]
    fn duplicate_values_rejected() {
        let c = models::circle(3).unwrap();
        let err = VertexField::from_fn(c, |_| BigRational::from_integer(0.into())).unwrap_err();
        assert!(matches!(err, ReebError::NonInjectiveField { .. }));
    }

    #[test]
    fn field_file() {
        let c = models::interval(2).unwrap();
        let v = json!({"values": ["1/2", "-3", "7/4"]});
        let f = VertexField::from_json(c, &v).unwrap();
        assert_eq!(f.values()[0], BigRational::new(1.into(), 2.into()));
    }
}
