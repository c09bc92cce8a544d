use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::{BranchedModel, LocusKind, Monodromy};
use crate::complex::ops::link_of;
use crate::complex::{SimplicialComplex, UnionFind};

/// Topological type of a vertex link in a 2-complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkType {
    /// Interior point of a surface.
    Circle,
    /// Boundary or collar point.
    Arc,
    /// Three arcs between two points: a point of a tripod locus.
    Theta,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCheck {
    pub vertex: String,
    pub link: LinkType,
    pub locus: Option<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocusCheck {
    pub name: String,
    pub declared: Monodromy,
    /// `"trivial"`, `"swap"`, or a description of what went wrong.
    pub computed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalStructureReport {
    pub pass: bool,
    pub vertices: Vec<VertexCheck>,
    pub loci: Vec<LocusCheck>,
    pub failures: Vec<String>,
}

/// Adjacency lists of a 1-complex, or `None` if it has isolated vertices
/// or higher simplices.
fn graph_of(link: &SimplicialComplex) -> Option<Vec<Vec<usize>>> {
    if link.dim() != Some(1) || !link.is_pure() {
        return None;
    }
    let mut adj = vec![Vec::new(); link.num_vertices()];
    for e in link.simplices(1) {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    Some(adj)
}

fn connected(adj: &[Vec<usize>]) -> bool {
    let mut uf = UnionFind::new(adj.len());
    for (v, ns) in adj.iter().enumerate() {
        for &w in ns {
            uf.union(v, w);
        }
    }
    uf.groups().len() == 1
}

/// Paths from `start` along degree-2 vertices until a vertex of another
/// degree is met.
fn branches(adj: &[Vec<usize>], start: usize) -> Vec<Vec<usize>> {
    adj[start]
        .iter()
        .map(|&first| {
            let mut path = vec![start, first];
            let (mut prev, mut cur) = (start, first);
            while adj[cur].len() == 2 && cur != start {
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = next;
                path.push(cur);
            }
            path
        })
        .collect()
}

pub(crate) fn classify_link(link: &SimplicialComplex) -> LinkType {
    let Some(adj) = graph_of(link) else {
        return LinkType::Other("link is not a graph without isolated points".into());
    };
    if !connected(&adj) {
        return LinkType::Other("disconnected link".into());
    }
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, ns) in adj.iter().enumerate() {
        by_degree.entry(ns.len()).or_default().push(v);
    }
    let odd: Vec<(usize, usize)> = by_degree.iter().filter(|(&d, _)| d != 2).map(|(&d, vs)| (d, vs.len())).collect();
    match odd.as_slice() {
        [] => LinkType::Circle,
        [(1, 2)] => LinkType::Arc,
        [(3, 2)] => {
            let ends = &by_degree[&3];
            let all_join = branches(&adj, ends[0]).iter().all(|p| *p.last().unwrap() == ends[1]);
            if all_join {
                LinkType::Theta
            } else {
                LinkType::Other("two branch points not joined by three arcs".into())
            }
        }
        _ => {
            let degrees: Vec<String> = odd.iter().map(|(d, n)| format!("{n}×deg{d}")).collect();
            LinkType::Other(format!("degrees {}", degrees.join(", ")))
        }
    }
}

/// Cyclic vertex orders of the components of a closed 1-manifold.
fn circles(c: &SimplicialComplex, vertices: &BTreeSet<usize>, edges: &[[usize; 2]]) -> Option<Vec<Vec<usize>>> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in edges {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    if vertices.iter().any(|v| adj.get(v).map_or(0, Vec::len) != 2) {
        return None;
    }
    let _ = c;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in vertices {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let (mut prev, mut cur) = (start, adj[&start][0]);
        while cur != start {
            cycle.push(cur);
            seen.insert(cur);
            let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
            prev = cur;
            cur = next;
        }
        out.push(cycle);
    }
    Some(out)
}

/// Third vertices of the triangles on an edge.
fn sheets(c: &SimplicialComplex, a: usize, b: usize) -> Vec<usize> {
    c.simplices(2)
        .iter()
        .filter(|t| t.contains(&a) && t.contains(&b))
        .map(|t| *t.iter().find(|&&z| z != a && z != b).unwrap())
        .collect()
}

/// Permutation of the three sheets obtained by walking once around a
/// tripod-locus circle.
fn transport(c: &SimplicialComplex, cycle: &[usize]) -> Result<Vec<usize>, String> {
    let m = cycle.len();
    let edge = |i: usize| (cycle[i % m], cycle[(i + 1) % m]);
    let start = {
        let (a, b) = edge(0);
        sheets(c, a, b)
    };
    if start.len() != 3 {
        return Err(format!("edge has {} sheets", start.len()));
    }
    let mut current: Vec<usize> = start.clone();
    for i in 1..=m {
        let v = cycle[i % m];
        let prev = cycle[(i + m - 1) % m];
        let next = cycle[(i + 1) % m];
        let link = link_of(c, &[v]);
        let Some(adj) = graph_of(&link) else { return Err("bad link on locus".into()) };
        let local = |g: usize| c.vertex_index(&link.vertices()[g]).unwrap();
        let find = |id: usize| link.vertex_index(&c.vertices()[id]);
        let (Some(p), Some(n)) = (find(prev), find(next)) else {
            return Err("locus neighbours missing from link".into());
        };
        // arcs from the prev neighbour to the next one carry sheets across v
        let mut across: HashMap<usize, usize> = HashMap::new();
        for path in branches(&adj, p) {
            if *path.last().unwrap() != n {
                return Err("link arcs do not join the locus neighbours".into());
            }
            across.insert(local(path[1]), local(path[path.len() - 2]));
        }
        current = current
            .iter()
            .map(|s| across.get(s).copied().ok_or_else(|| "sheet lost in transport".to_string()))
            .collect::<Result<_, _>>()?;
    }
    let perm: Result<Vec<usize>, String> = current
        .iter()
        .map(|s| start.iter().position(|x| x == s).ok_or_else(|| "sheet lost in transport".to_string()))
        .collect();
    perm
}

fn describe(perm: &[usize]) -> &'static str {
    let fixed = perm.iter().enumerate().filter(|(i, &p)| *i == p).count();
    match fixed {
        3 => "trivial",
        1 => "swap",
        _ => "three-cycle",
    }
}

/// Classifies every vertex link and cross-checks the declared loci.
pub fn check_local_structure_dim2(m: &BranchedModel) -> LocalStructureReport {
    let c = &m.complex;
    let mut failures = Vec::new();
    if c.dim() != Some(2) {
        failures.push(format!("dimension is {:?}, expected 2", c.dim()));
        return LocalStructureReport { pass: false, vertices: Vec::new(), loci: Vec::new(), failures };
    }
    let mut on_locus: HashMap<usize, (String, LocusKind)> = HashMap::new();
    let mut loci = Vec::new();
    for l in &m.loci {
        let Some(set) = c.named(&l.name) else {
            failures.push(format!("locus `{}` is not a named subcomplex", l.name));
            continue;
        };
        let vertices: BTreeSet<usize> = set.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
        for &v in &vertices {
            if let Some((other, _)) = on_locus.insert(v, (l.name.clone(), l.kind)) {
                failures.push(format!("loci `{other}` and `{}` meet at {}", l.name, c.vertices()[v]));
            }
        }
        if l.kind == LocusKind::Collar {
            continue;
        }
        let edges: Vec<[usize; 2]> = set.iter().filter(|s| s.len() == 2).map(|s| [s[0], s[1]]).collect();
        let computed = match circles(c, &vertices, &edges) {
            None => "locus is not a disjoint union of circles".to_string(),
            Some(cycles) => {
                let mut kinds = BTreeSet::new();
                let mut err = None;
                for cycle in &cycles {
                    match transport(c, cycle) {
                        Ok(perm) => {
                            kinds.insert(describe(&perm));
                        }
                        Err(e) => err = Some(e),
                    }
                }
                match (err, kinds.len()) {
                    (Some(e), _) => e,
                    (None, 1) => kinds.into_iter().next().unwrap().to_string(),
                    _ => "components disagree".to_string(),
                }
            }
        };
        let expected = match l.monodromy {
            Monodromy::Trivial => "trivial",
            Monodromy::Swap => "swap",
        };
        let ok = computed == expected;
        if !ok {
            failures.push(format!("locus `{}`: declared {expected}, found {computed}", l.name));
        }
        loci.push(LocusCheck { name: l.name.clone(), declared: l.monodromy, computed, ok });
    }

    let mut vertices = Vec::new();
    for v in 0..c.num_vertices() {
        let link = classify_link(&link_of(c, &[v]));
        let locus = on_locus.get(&v);
        let ok = matches!(
            (&link, locus),
            (LinkType::Circle | LinkType::Arc, None)
                | (LinkType::Theta, Some((_, LocusKind::Tripod)))
                | (LinkType::Arc, Some((_, LocusKind::Collar)))
        );
        if !ok {
            let place = locus.map_or("off every locus".to_string(), |(n, _)| format!("on `{n}`"));
            failures.push(format!("vertex {} {place} has link {:?}", c.vertices()[v], link));
        }
        vertices.push(VertexCheck {
            vertex: c.vertices()[v].to_string(),
            link,
            locus: locus.map(|(n, _)| n.clone()),
            ok,
        });
    }
    LocalStructureReport { pass: failures.is_empty(), vertices, loci, failures }
}
