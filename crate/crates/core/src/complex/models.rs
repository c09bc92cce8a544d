//! Small documented triangulations used as building blocks.
//!
//! | name | parameters | named subcomplexes |
//! |------|------------|--------------------|
//! | `simplex` | `n ≥ 0` | `boundary` (n ≥ 1) |
//! | `sphere` | `n ≥ 1` | `equator`, `upper`, `lower`; field `height` |
//! | `disc` | `n ≥ 1` | `boundary` |
//! | `interval` | `k ≥ 1` | `start`, `end`, `boundary`, `level_i` |
//! | `circle` | `k ≥ 3` | none |
//! | `tripod` | none | `center`, `prong_1..3`, `ends` |
//! | `annulus` | `k ≥ 3` | `inner`, `outer`, `boundary`, `core`, `core_annulus` |
//! | `surface` | `genus ≥ 0`, `boundary ≥ 0` | `boundary`, `boundary_i`, `collar_i`, `handle_t`, `patch_0`, `patch_1` |
//! | `torus_grid` | `a, b ≥ 3` | `meridian`, `longitude`; field `height` |
//! | `solid_torus` | `k ≥ 3` | `core`, `core_boundary`, `boundary` |
//! | `nested_disc` | `r ≥ 1` | `ring_i`, `disc_i` (0 ≤ i ≤ r), `boundary` |

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ops::{boundary_faces, product};
use super::{ComplexBuilder, ComplexError, Simplex, SimplicialComplex, VertexId};

fn unsupported(msg: impl Into<String>) -> ComplexError {
    ComplexError::UnsupportedModel(msg.into())
}

fn param(params: &[i64], i: usize, name: &str) -> Result<usize, ComplexError> {
    let v = *params.get(i).ok_or_else(|| unsupported(format!("{name}: missing parameter")))?;
    usize::try_from(v).map_err(|_| unsupported(format!("{name}: negative parameter {v}")))
}

/// Builds a model by name; see the module table for names and ranges.
pub fn standard_model(name: &str, params: &[i64]) -> Result<SimplicialComplex, ComplexError> {
    match name {
        "simplex" => simplex(param(params, 0, name)?),
        "sphere" => sphere(param(params, 0, name)?),
        "disc" => disc(param(params, 0, name)?),
        "interval" => interval(param(params, 0, name)?),
        "circle" => circle(param(params, 0, name)?),
        "tripod" => Ok(tripod()),
        "annulus" => annulus(param(params, 0, name)?),
        "surface" => surface(param(params, 0, name)?, param(params, 1, name)?),
        "torus_grid" => torus_grid(param(params, 0, name)?, param(params, 1, name)?),
        "solid_torus" => solid_torus(param(params, 0, name)?),
        "nested_disc" => nested_disc(param(params, 0, name)?),
        other => Err(unsupported(format!("unknown model `{other}`"))),
    }
}

fn ints(v: impl IntoIterator<Item = usize>) -> Vec<VertexId> {
    v.into_iter().map(VertexId::from).collect()
}

/// Full simplex Δⁿ on vertices `0..=n`.
pub fn simplex(n: usize) -> Result<SimplicialComplex, ComplexError> {
    let mut b = ComplexBuilder::new();
    b.add_simplex(ints(0..=n))?;
    if n >= 1 {
        b.declare_name("boundary");
        for skip in 0..=n {
            b.add_named("boundary", ints((0..=n).filter(|&v| v != skip)))?;
        }
    }
    b.build()
}

/// The n-disc as Δⁿ.
pub fn disc(n: usize) -> Result<SimplicialComplex, ComplexError> {
    if n == 0 {
        return Err(unsupported("disc(n) needs n ≥ 1"));
    }
    simplex(n)
}

/// ∂Δⁿ⁺¹. `upper` is the facet `[0..n]`, `lower` the remaining facets and
/// `equator` their common boundary. The `height` of vertex `i` is `i`.
pub fn sphere(n: usize) -> Result<SimplicialComplex, ComplexError> {
    if n == 0 {
        return Err(unsupported("sphere(n) needs n ≥ 1"));
    }
    let mut b = ComplexBuilder::new();
    for skip in 0..=n + 1 {
        b.add_simplex(ints((0..=n + 1).filter(|&v| v != skip)))?;
    }
    b.declare_name("upper");
    b.add_named("upper", ints(0..=n))?;
    b.declare_name("lower");
    for skip in 0..=n {
        b.add_named("lower", ints((0..=n + 1).filter(|&v| v != skip)))?;
    }
    b.declare_name("equator");
    for skip in 0..=n {
        b.add_named("equator", ints((0..=n).filter(|&v| v != skip)))?;
    }
    b.set_field("height", (0..=n as i64 + 1).map(|i| BigRational::from_integer(i.into())).collect());
    b.build()
}

/// Path `0 - 1 - … - k`.
pub fn interval(k: usize) -> Result<SimplicialComplex, ComplexError> {
    if k == 0 {
        return Err(unsupported("interval(k) needs k ≥ 1"));
    }
    let mut b = ComplexBuilder::new();
    for i in 0..k {
        b.add_simplex(ints([i, i + 1]))?;
    }
    b.declare_name("start");
    b.add_named("start", ints([0]))?;
    b.declare_name("end");
    b.add_named("end", ints([k]))?;
    b.declare_name("boundary");
    b.add_named("boundary", ints([0]))?;
    b.add_named("boundary", ints([k]))?;
    for i in 0..=k {
        let label = format!("level_{i}");
        b.declare_name(&label);
        b.add_named(&label, ints([i]))?;
    }
    b.build()
}

/// Cycle on `k` vertices.
pub fn circle(k: usize) -> Result<SimplicialComplex, ComplexError> {
    if k < 3 {
        return Err(unsupported("circle(k) needs k ≥ 3"));
    }
    let mut b = ComplexBuilder::new();
    for i in 0..k {
        b.add_simplex(ints([i, (i + 1) % k]))?;
    }
    b.build()
}

/// Cone on three points: centre `0`, prongs `1, 2, 3`.
pub fn tripod() -> SimplicialComplex {
    let mut b = ComplexBuilder::new();
    for p in 1..=3 {
        b.add_simplex_unchecked(ints([0, p]));
    }
    b.declare_name("center");
    b.add_named("center", ints([0])).unwrap();
    b.declare_name("ends");
    for p in 1..=3 {
        let label = format!("prong_{p}");
        b.declare_name(&label);
        b.add_named(&label, ints([p])).unwrap();
        b.add_named("ends", ints([p])).unwrap();
    }
    b.build().unwrap()
}

fn rename(c: SimplicialComplex, pairs: &[(&str, &str)]) -> Result<SimplicialComplex, ComplexError> {
    let sets: Vec<(String, BTreeSet<Simplex>)> = pairs
        .iter()
        .map(|(from, to)| Ok((to.to_string(), c.named_or_err(from)?.clone())))
        .collect::<Result<_, ComplexError>>()?;
    let mut out = SimplicialComplex { named: Default::default(), ..c };
    for (label, set) in sets {
        out.named.insert(label, set);
    }
    Ok(out)
}

/// `circle(k) × interval(4)`: levels 0 and 4 are the boundary circles,
/// level 2 is `core`, levels 1..3 form `core_annulus`.
pub fn annulus(k: usize) -> Result<SimplicialComplex, ComplexError> {
    let base = circle(k)?;
    let mut fibre = interval(4)?;
    let band: Vec<Simplex> = vec![vec![1, 2], vec![2, 3]];
    fibre = fibre.with_name("band", band)?;
    let p = product(&base, &fibre)?.complex;
    rename(
        p,
        &[
            ("right:level_0", "inner"),
            ("right:level_4", "outer"),
            ("right:boundary", "boundary"),
            ("right:level_2", "core"),
            ("right:band", "core_annulus"),
        ],
    )
}

/// Disc made of concentric triangles: ring `i` has vertices `3i, 3i+1, 3i+2`,
/// the innermost triangle is filled and consecutive rings are joined by a
/// six-triangle annulus.
pub fn nested_disc(r: usize) -> Result<SimplicialComplex, ComplexError> {
    if r == 0 {
        return Err(unsupported("nested_disc(r) needs r ≥ 1"));
    }
    let v = |ring: usize, i: usize| 3 * ring + (i % 3);
    let band = |ring: usize| -> Vec<[usize; 3]> {
        (0..3)
            .flat_map(|i| {
                [[v(ring, i), v(ring, i + 1), v(ring + 1, i)], [v(ring, i + 1), v(ring + 1, i), v(ring + 1, i + 1)]]
            })
            .collect()
    };
    let mut b = ComplexBuilder::new();
    b.add_simplex(ints([0, 1, 2]))?;
    for ring in 0..r {
        for t in band(ring) {
            b.add_simplex(ints(t))?;
        }
    }
    for ring in 0..=r {
        let label = format!("ring_{ring}");
        b.declare_name(&label);
        for i in 0..3 {
            b.add_named(&label, ints([v(ring, i), v(ring, i + 1)]))?;
        }
        let label = format!("disc_{ring}");
        b.declare_name(&label);
        b.add_named(&label, ints([0, 1, 2]))?;
        for inner in 0..ring {
            for t in band(inner) {
                b.add_named(&label, ints(t))?;
            }
        }
    }
    b.declare_name("boundary");
    for i in 0..3 {
        b.add_named("boundary", ints([v(r, i), v(r, i + 1)]))?;
    }
    b.build()
}

/// `circle(k) × nested_disc(1)`: the inner filled triangle times the circle
/// is the `core` solid torus.
pub fn solid_torus(k: usize) -> Result<SimplicialComplex, ComplexError> {
    let p = product(&circle(k)?, &nested_disc(1)?)?.complex;
    rename(p, &[("right:disc_0", "core"), ("right:ring_0", "core_boundary"), ("right:boundary", "boundary")])
}

/// `a × b` grid on the torus, every square split along its increasing
/// diagonal. Vertex `(i, j)` has identifier `i·b + j`; `i` runs around the
/// tube and `j` around the central circle. The `height` field is the
/// standing-torus height `(2 + cos 2πi/a)·sin 2πj/b`, rounded to thousandths
/// and perturbed by `index/(1000·(ab+1))` so that values are distinct.
pub fn torus_grid(a: usize, b: usize) -> Result<SimplicialComplex, ComplexError> {
    if a < 3 || b < 3 {
        return Err(unsupported("torus_grid(a, b) needs a, b ≥ 3"));
    }
    let id = |i: usize, j: usize| (i % a) * b + (j % b);
    let mut bld = ComplexBuilder::new();
    for v in 0..a * b {
        bld.vertex(VertexId::from(v));
    }
    for i in 0..a {
        for j in 0..b {
            bld.add_simplex(ints([id(i, j), id(i + 1, j), id(i + 1, j + 1)]))?;
            bld.add_simplex(ints([id(i, j), id(i, j + 1), id(i + 1, j + 1)]))?;
        }
    }
    bld.declare_name("meridian");
    for j in 0..b {
        bld.add_named("meridian", ints([id(0, j), id(0, j + 1)]))?;
    }
    bld.declare_name("longitude");
    for i in 0..a {
        bld.add_named("longitude", ints([id(i, 0), id(i + 1, 0)]))?;
    }
    let n = a * b;
    let scale = BigInt::from(1000);
    let eps_den = BigInt::from(1000 * (n as i64 + 1));
    let mut heights = Vec::with_capacity(n);
    for v in 0..n {
        let (i, j) = (v / b, v % b);
        let theta = 2.0 * PI * i as f64 / a as f64;
        let phi = 2.0 * PI * j as f64 / b as f64;
        let h = (2.0 + theta.cos()) * phi.sin();
        let milli = BigRational::new(BigInt::from((h * 1000.0).round() as i64), scale.clone());
        let eps = BigRational::new(BigInt::from(v as i64), eps_den.clone());
        heights.push(milli + eps);
    }
    bld.set_field("height", heights);
    bld.build()
}

/// Planar grid surface with holes. Every hole and both patches sit in their
/// own 7×7 block of squares of a 7-square-high strip; a hole is the removed
/// centre square, its collar the ring of squares at distance two, a patch the
/// central 3×3 squares. Holes `2t, 2t+1` are glued by a reflection into
/// handle `t`; the remaining holes are `boundary_1..`, the outer rim is
/// `boundary_0` (capped off by a cone when `boundary = 0`).
pub fn surface(genus: usize, boundary: usize) -> Result<SimplicialComplex, ComplexError> {
    const BLOCK: usize = 7;
    let holes = 2 * genus + boundary.saturating_sub(1);
    let blocks = holes + 2;
    let width = BLOCK * blocks;
    let height = BLOCK;
    let vid = |x: usize, y: usize| x * (height + 1) + y;
    let centre = |k: usize| (BLOCK * k + 3, 3usize);
    let corners = |k: usize| {
        let (cx, cy) = centre(k);
        [vid(cx, cy), vid(cx + 1, cy), vid(cx + 1, cy + 1), vid(cx, cy + 1)]
    };
    // hole 2t+1 is glued onto hole 2t by a reflection of the square
    let mut glue = std::collections::HashMap::new();
    for t in 0..genus {
        let a = corners(2 * t);
        let b = corners(2 * t + 1);
        for (from, to) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
            glue.insert(b[from], a[to]);
        }
    }
    let label = |v: usize| VertexId::from(*glue.get(&v).unwrap_or(&v));
    let hole_at = |x: usize, y: usize| (0..holes).any(|k| centre(k) == (x, y));
    let square = |x: usize, y: usize| {
        [[vid(x, y), vid(x + 1, y), vid(x + 1, y + 1)], [vid(x, y), vid(x, y + 1), vid(x + 1, y + 1)]]
    };

    let mut b = ComplexBuilder::new();
    for x in 0..width {
        for y in 0..height {
            if hole_at(x, y) {
                continue;
            }
            for t in square(x, y) {
                b.add_simplex(t.iter().map(|&v| label(v)))?;
            }
        }
    }
    if boundary == 0 {
        let apex = VertexId::from(vid(width, height) + 1);
        let mut rim = Vec::new();
        for x in 0..width {
            rim.push([vid(x, 0), vid(x + 1, 0)]);
            rim.push([vid(x, height), vid(x + 1, height)]);
        }
        for y in 0..height {
            rim.push([vid(0, y), vid(0, y + 1)]);
            rim.push([vid(width, y), vid(width, y + 1)]);
        }
        for [u, w] in rim {
            b.add_simplex([label(u), label(w), apex.clone()])?;
        }
    } else {
        b.declare_name("boundary_0");
        for x in 0..width {
            b.add_named("boundary_0", [label(vid(x, 0)), label(vid(x + 1, 0))])?;
            b.add_named("boundary_0", [label(vid(x, height)), label(vid(x + 1, height))])?;
        }
        for y in 0..height {
            b.add_named("boundary_0", [label(vid(0, y)), label(vid(0, y + 1))])?;
            b.add_named("boundary_0", [label(vid(width, y)), label(vid(width, y + 1))])?;
        }
    }
    let cycle = |c: [usize; 4]| (0..4).map(move |i| [c[i], c[(i + 1) % 4]]);
    for t in 0..genus {
        let name = format!("handle_{t}");
        b.declare_name(&name);
        for [u, w] in cycle(corners(2 * t)) {
            b.add_named(&name, [label(u), label(w)])?;
        }
    }
    for k in 2 * genus..holes {
        let i = k - 2 * genus + 1;
        let name = format!("boundary_{i}");
        b.declare_name(&name);
        for [u, w] in cycle(corners(k)) {
            b.add_named(&name, [label(u), label(w)])?;
        }
        let name = format!("collar_{i}");
        b.declare_name(&name);
        let (cx, cy) = centre(k);
        for x in cx - 2..=cx + 2 {
            for y in cy - 2..=cy + 2 {
                if x.abs_diff(cx).max(y.abs_diff(cy)) == 2 {
                    for t in square(x, y) {
                        b.add_named(&name, t.iter().map(|&v| label(v)))?;
                    }
                }
            }
        }
    }
    for p in 0..2 {
        let name = format!("patch_{p}");
        b.declare_name(&name);
        let (cx, cy) = centre(holes + p);
        for x in cx - 1..=cx + 1 {
            for y in cy - 1..=cy + 1 {
                for t in square(x, y) {
                    b.add_named(&name, t.iter().map(|&v| label(v)))?;
                }
            }
        }
    }
    let c = b.build()?;
    let rim = boundary_faces(&c)?;
    let mut c = c;
    c.named.insert("boundary".into(), rim);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ops::boundary_subcomplex;

    #[test]
    fn tripod_shape() {
        let t = tripod();
        assert_eq!(t.f_vector(), vec![4, 3]);
        assert_eq!(t.degree(0), 3);
    }

    #[test]
    fn annulus_counts() {
        let a = annulus(4).unwrap();
        assert_eq!(a.euler_characteristic(), 0);
        assert_eq!(a.f_vector(), vec![20, 52, 32]);
        assert_eq!(a.subcomplex("core").unwrap().f_vector(), vec![4, 4]);
        assert_eq!(a.subcomplex("core_annulus").unwrap().euler_characteristic(), 0);
        a.check_invariants().unwrap();
    }

    #[test]
    fn nested_disc_names() {
        let d = nested_disc(2).unwrap();
        assert_eq!(d.euler_characteristic(), 1);
        assert_eq!(d.subcomplex("disc_1").unwrap().euler_characteristic(), 1);
        assert_eq!(d.subcomplex("ring_1").unwrap().f_vector(), vec![3, 3]);
        assert_eq!(boundary_subcomplex(&d).unwrap().f_vector(), vec![3, 3]);
    }

    #[test]
    fn surfaces_have_expected_euler_characteristic() {
        for (g, b) in [(0usize, 0usize), (0, 1), (0, 3), (1, 0), (1, 1), (2, 0)] {
            let s = surface(g, b).unwrap();
            s.check_invariants().unwrap();
            assert_eq!(s.euler_characteristic(), 2 - 2 * g as i64 - b as i64, "g={g} b={b}");
            let bd = boundary_subcomplex(&s).unwrap();
            assert_eq!(bd.components().len(), b);
        }
    }

    #[test]
    fn surface_collars_avoid_the_boundary() {
        let s = surface(0, 3).unwrap();
        let rim = s.named("boundary").unwrap();
        for k in 1..=2 {
            let collar = s.named(&format!("collar_{k}")).unwrap();
            assert!(collar.iter().all(|c| c.len() != 1 || !rim.contains(c)));
        }
    }

    #[test]
    fn torus_grid_height_is_injective() {
        let t = torus_grid(4, 4).unwrap();
        let h = t.field("height").unwrap();
        let set: BTreeSet<_> = h.iter().collect();
        assert_eq!(set.len(), h.len());
        assert_eq!(t.euler_characteristic(), 0);
    }

    #[test]
    fn unknown_or_out_of_range() {
        assert!(standard_model("klein", &[]).is_err());
        assert!(standard_model("circle", &[2]).is_err());
        assert!(standard_model("circle", &[-1]).is_err());
        assert_eq!(standard_model("sphere", &[2]).unwrap().euler_characteristic(), 2);
    }

    #[test]
    fn solid_torus_core() {
        let s = solid_torus(3).unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.subcomplex("core").unwrap().count(3), 9);
    }
}
