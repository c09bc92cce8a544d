//! Finitely generated abelian groups as subquotients of `Z^n`, with explicit
//! generators and coordinate maps, plus the lattice tests used to check
//! exactness of sequences of such groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntegerMatrix;
use super::snf::{Elimination, Track};

/// Shape `Z/d₁ ⊕ … ⊕ Z/d_t ⊕ Z^f` of a group in coordinates: torsion
/// coordinates first, then free ones.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupShape {
    pub torsion: Vec<BigInt>,
    pub free: usize,
}

impl GroupShape {
    pub fn len(&self) -> usize {
        self.torsion.len() + self.free
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Order of each coordinate, zero for free coordinates.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), self.free));
        v
    }

    /// Diagonal relation matrix whose columns span the zero class.
    pub fn relations(&self) -> IntegerMatrix {
        let n = self.len();
        let mut m = IntegerMatrix::zeros(n, self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Shape of `self ⊕ other` laid out block by block.
    pub fn direct_sum(&self, other: &GroupShape) -> GroupShape {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        GroupShape { torsion, free: self.free + other.free }
    }

    /// Reduces torsion coordinates into `0..d`.
    pub fn normalise(&self, coords: &mut [BigInt]) {
        for (x, d) in coords.iter_mut().zip(&self.torsion) {
            *x = x.mod_floor(d);
        }
    }
}

/// Block-diagonal relation matrix for a direct sum laid out block by block.
pub fn sum_relations(parts: &[&GroupShape]) -> IntegerMatrix {
    let n: usize = parts.iter().map(|p| p.len()).sum();
    let t: usize = parts.iter().map(|p| p.torsion.len()).sum();
    let mut m = IntegerMatrix::zeros(n, t);
    let (mut row, mut col) = (0, 0);
    for p in parts {
        for (i, d) in p.torsion.iter().enumerate() {
            m.set(row + i, col, d.clone());
            col += 1;
        }
        row += p.len();
    }
    m
}

/// The group `ker(out) / im(inc)` for composable integer matrices
/// `inc: Z^k → Z^n`, `out: Z^n → Z^m` with `out·inc = 0`.
#[derive(Debug, Clone)]
pub struct Presentation {
    ambient: usize,
    shape: GroupShape,
    generators: Vec<Vec<BigInt>>,
    projection: IntegerMatrix,
}

impl Presentation {
    pub fn new(out: &IntegerMatrix, inc: &IntegerMatrix) -> Self {
        let n = out.cols();
        assert_eq!(inc.rows(), n, "incoming map lands in a different lattice");

        let mut first = Elimination::new(out, Track { v: true, v_inv: true, ..Track::default() });
        first.run();
        let r = first.rank;
        let v = Elimination::take(first.v.take());
        let v_inv = Elimination::take(first.v_inv.take());
        let kernel_dim = n - r;
        let kernel_basis: Vec<usize> = (r..n).collect();
        let kernel = v.select_cols(&kernel_basis);
        let to_kernel = v_inv.select_rows(r..n);

        let m = to_kernel.mul(inc);
        let mut second = Elimination::new(&m, Track { u: true, u_inv: true, ..Track::default() });
        second.run();
        let diag = second.diagonal();
        let u = Elimination::take(second.u.take());
        let u_inv = Elimination::take(second.u_inv.take());

        let mut keep = Vec::new();
        let mut torsion = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if !d.is_one() {
                keep.push(i);
                torsion.push(d.clone());
            }
        }
        keep.extend(diag.len()..kernel_dim);
        let shape = GroupShape { torsion, free: kernel_dim - diag.len() };

        let mut projection = IntegerMatrix::zeros(keep.len(), n);
        for (k, &i) in keep.iter().enumerate() {
            for j in 0..kernel_dim {
                let a = u.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = to_kernel.get(j, c);
                    if !b.is_zero() {
                        let cur = projection.get(k, c) + a * b;
                        projection.set(k, c, cur);
                    }
                }
            }
        }
        let generators = keep.iter().map(|&i| kernel.mul_vec(&u_inv.column(i))).collect();
        Presentation { ambient: n, shape, generators, projection }
    }

    pub fn shape(&self) -> &GroupShape {
        &self.shape
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shape.is_empty()
    }

    /// Chain-level representative of coordinate `i`.
    pub fn generator(&self, i: usize) -> &[BigInt] {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Coordinates of the class of a cycle, torsion entries reduced.
    pub fn coordinates(&self, z: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(z.len(), self.ambient, "cycle has the wrong length");
        let mut c = self.projection.mul_vec(z);
        self.shape.normalise(&mut c);
        c
    }

    pub fn is_zero_class(&self, z: &[BigInt]) -> bool {
        self.coordinates(z).iter().all(Zero::is_zero)
    }
}

/// Whether `v` lies in the lattice spanned by the columns of `span`.
pub fn in_lattice(span: &IntegerMatrix, v: &[BigInt]) -> bool {
    LatticeTest::new(span).contains(v)
}

/// Membership oracle for a fixed lattice, reused across many queries.
pub struct LatticeTest {
    u: IntegerMatrix,
    diag: Vec<BigInt>,
}

impl LatticeTest {
    pub fn new(span: &IntegerMatrix) -> Self {
        let mut e = Elimination::new(span, Track { u: true, ..Track::default() });
        e.run();
        let diag = e.diagonal();
        let u = Elimination::take(e.u.take());
        LatticeTest { u, diag }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.is_empty() {
            return true;
        }
        let w = self.u.mul_vec(v);
        w.iter().enumerate().all(|(i, x)| match self.diag.get(i) {
            Some(d) => x.is_multiple_of(d),
            None => x.is_zero(),
        })
    }

    /// Whether every column of `m` lies in the lattice.
    pub fn contains_columns(&self, m: &IntegerMatrix) -> bool {
        (0..m.cols()).all(|c| self.contains(&m.column(c)))
    }
}

/// Lattice basis of `{x : a·x = 0}`.
pub fn integer_kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let mut e = Elimination::new(a, Track { v: true, ..Track::default() });
    e.run();
    let r = e.rank;
    let n = a.cols();
    if n == 0 {
        return IntegerMatrix::zeros(0, 0);
    }
    let v = Elimination::take(e.v.take());
    v.select_cols(&(r..n).collect::<Vec<_>>())
}

/// Preimage lattice `{x ∈ Z^n : f·x ∈ span(target_relations)}` for a map
/// `f: Z^n → Z^m`. Its image in the source group is the kernel of the
/// induced homomorphism.
pub fn kernel_lattice(f: &IntegerMatrix, target_relations: &IntegerMatrix) -> IntegerMatrix {
    let n = f.cols();
    let block = f.hcat(target_relations);
    let k = integer_kernel(&block);
    if n == 0 {
        return IntegerMatrix::zeros(0, 0);
    }
    let mut out = IntegerMatrix::zeros(n, k.cols());
    for c in 0..k.cols() {
        for r in 0..n {
            out.set(r, c, k.get(r, c).clone());
        }
    }
    out
}

/// Outcome of comparing `im(f)` with `ker(g)` at one position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exactness {
    pub image_in_kernel: bool,
    pub kernel_in_image: bool,
}

impl Exactness {
    pub fn holds(&self) -> bool {
        self.image_in_kernel && self.kernel_in_image
    }
}

/// Exactness of `A --f--> B --g--> C` at `B`, for maps given in coordinates.
pub fn exact_at(f: &IntegerMatrix, b: &IntegerMatrix, g: &IntegerMatrix, c: &IntegerMatrix) -> Exactness {
    let image = f.hcat(b);
    let kernel = kernel_lattice(g, c);
    let image_test = LatticeTest::new(&image);
    let kernel_test = LatticeTest::new(&kernel.hcat(b));
    Exactness {
        image_in_kernel: kernel_test.contains_columns(&image),
        kernel_in_image: image_test.contains_columns(&kernel),
    }
}

/// Whether `f` is injective between groups with relation matrices
/// `source` and `target`.
pub fn is_injective(f: &IntegerMatrix, source: &IntegerMatrix, target: &IntegerMatrix) -> bool {
    let kernel = kernel_lattice(f, target);
    LatticeTest::new(source).contains_columns(&kernel)
}

/// Whether `f` is surjective onto a group with relation matrix `target`.
pub fn is_surjective(f: &IntegerMatrix, target: &IntegerMatrix) -> bool {
    let m = f.rows();
    LatticeTest::new(&f.hcat(target)).contains_columns(&IntegerMatrix::identity(m))
}

/// Rank of the image of `f` after tensoring with the rationals.
pub fn rational_rank(f: &IntegerMatrix) -> usize {
    let mut e = Elimination::new(f, Track::default());
    e.run();
    e.rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn circle_homology_presentation() {
        // triangle boundary: ∂₁ of a 3-cycle, nothing incoming
        let d1 = IntegerMatrix::from_rows(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let p = Presentation::new(&d1, &IntegerMatrix::zeros(3, 0));
        assert_eq!(p.shape().free, 1);
        assert!(p.shape().torsion.is_empty());
        let g = p.generator(0).to_vec();
        assert!(d1.mul_vec(&g).iter().all(Zero::is_zero));
        assert_eq!(p.coordinates(&g), ints(&[1]));
        let twice: Vec<BigInt> = g.iter().map(|x| x * 2).collect();
        assert_eq!(p.coordinates(&twice), ints(&[2]));
    }

    #[test]
    fn torsion_quotient() {
        // Z / 2Z with an extra free summand
        let out = IntegerMatrix::zeros(0, 2);
        let inc = IntegerMatrix::from_rows(&[vec![2], vec![0]]);
        let p = Presentation::new(&out, &inc);
        assert_eq!(p.shape().torsion, ints(&[2]));
        assert_eq!(p.shape().free, 1);
        assert!(p.is_zero_class(&ints(&[4, 0])));
        assert!(!p.is_zero_class(&ints(&[1, 0])));
        for i in 0..p.len() {
            let mut e = vec![BigInt::zero(); p.len()];
            e[i] = BigInt::one();
            assert_eq!(p.coordinates(p.generator(i)), e);
        }
    }

    #[test]
    fn lattice_membership() {
        let span = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(in_lattice(&span, &ints(&[4, 9])));
        assert!(!in_lattice(&span, &ints(&[1, 3])));
    }

    #[test]
    fn short_exact_sequence() {
        // 0 → Z --2--> Z → Z/2 → 0
        let two = IntegerMatrix::from_rows(&[vec![2]]);
        let one = IntegerMatrix::from_rows(&[vec![1]]);
        let none = IntegerMatrix::zeros(1, 0);
        let rel2 = IntegerMatrix::from_rows(&[vec![2]]);
        assert!(exact_at(&two, &none, &one, &rel2).holds());
        assert!(is_injective(&two, &none, &none));
        assert!(is_surjective(&one, &rel2));
        assert!(!is_surjective(&two, &none));
        // Z --1--> Z --1--> Z is not exact
        assert!(!exact_at(&one, &none, &one, &none).holds());
    }
}
