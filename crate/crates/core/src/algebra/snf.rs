//! Smith normal form over the integers.
//!
//! [`smith_normal_form`] returns the full decomposition `U·A·V = S`. The
//! elimination core tracks only the transforms a caller asks for, and
//! [`invariant_factors`] runs a sparse unit-pivot pass first so that boundary
//! matrices of a few thousand simplices stay cheap.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal, `d₁ | d₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub s: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

/// Which transforms the elimination should maintain.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

/// Elimination state. `u·a₀·v = a` holds throughout for the tracked parts.
pub(crate) struct Elimination {
    pub a: Vec<Vec<BigInt>>,
    pub rows: usize,
    pub cols: usize,
    pub u: Option<Vec<Vec<BigInt>>>,
    pub u_inv: Option<Vec<Vec<BigInt>>>,
    pub v: Option<Vec<Vec<BigInt>>>,
    pub v_inv: Option<Vec<Vec<BigInt>>>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn add_row_multiple(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

fn add_col_multiple(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let add = q * &row[src];
            row[dst] += add;
        }
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

impl Elimination {
    pub fn new(a: &IntegerMatrix, track: Track) -> Self {
        let (rows, cols) = a.shape();
        Elimination {
            a: a.to_row_vecs(),
            rows,
            cols,
            u: track.u.then(|| identity(rows)),
            u_inv: track.u_inv.then(|| identity(rows)),
            v: track.v.then(|| identity(cols)),
            v_inv: track.v_inv.then(|| identity(cols)),
            rank: 0,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            swap_cols(ui, i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        swap_cols(&mut self.a, i, j);
        if let Some(v) = &mut self.v {
            swap_cols(v, i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap(i, j);
        }
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        add_row_multiple(&mut self.a, dst, src, q);
        if let Some(u) = &mut self.u {
            add_row_multiple(u, dst, src, q);
        }
        if let Some(ui) = &mut self.u_inv {
            add_col_multiple(ui, src, dst, &-q);
        }
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        add_col_multiple(&mut self.a, dst, src, q);
        if let Some(v) = &mut self.v {
            add_col_multiple(v, dst, src, q);
        }
        if let Some(vi) = &mut self.v_inv {
            add_row_multiple(vi, src, dst, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[i] = -std::mem::take(&mut row[i]);
            }
        }
    }

    /// Nonzero entry of least absolute value in the trailing block, stopping
    /// early at a unit.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if x.abs().is_one() {
                    return Some((i, j));
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Clears row `t` and column `t` outside the pivot, re-pivoting on
    /// remainders until the pivot divides everything in its cross.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let mut dirty = false;
            for i in t + 1..self.rows {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let q = -(&self.a[i][t] / &self.a[t][t]);
                self.add_row(i, t, &q);
                if !self.a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..self.cols {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let q = -(&self.a[t][j] / &self.a[t][t]);
                self.add_col(j, t, &q);
                if !self.a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                return;
            }
            // move the smallest leftover into the pivot position
            let mut best: Option<(bool, usize)> = None;
            let mut best_abs: Option<BigInt> = None;
            for i in t + 1..self.rows {
                let x = &self.a[i][t];
                if !x.is_zero() && best_abs.as_ref().is_none_or(|b| x.abs() < *b) {
                    best_abs = Some(x.abs());
                    best = Some((true, i));
                }
            }
            for j in t + 1..self.cols {
                let x = &self.a[t][j];
                if !x.is_zero() && best_abs.as_ref().is_none_or(|b| x.abs() < *b) {
                    best_abs = Some(x.abs());
                    best = Some((false, j));
                }
            }
            match best {
                Some((true, i)) => self.swap_rows(t, i),
                Some((false, j)) => self.swap_cols(t, j),
                None => return,
            }
        }
    }

    /// Reduces to diagonal form with nonnegative entries forming a
    /// divisibility chain.
    pub fn run(&mut self) {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((i, j)) = self.find_pivot(t) else { break };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            self.clear_cross(t);
            t += 1;
        }
        self.rank = t;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.a[j][j].is_multiple_of(&self.a[i][i]) {
                    continue;
                }
                self.add_row(i, j, &BigInt::one());
                self.clear_cross(i);
            }
        }
        for i in 0..self.rank {
            if self.a[i][i].is_negative() {
                self.negate_row(i);
            }
        }
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.a[i][i].clone()).collect()
    }

    pub fn take(m: Option<Vec<Vec<BigInt>>>) -> IntegerMatrix {
        let m = m.expect("transform was tracked");
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        IntegerMatrix::from_row_vecs(rows, cols, m)
    }
}

/// Full Smith normal form decomposition.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfDecomposition {
    let mut e = Elimination::new(a, Track { u: true, v: true, ..Track::default() });
    e.run();
    let s = IntegerMatrix::from_row_vecs(e.rows, e.cols, std::mem::take(&mut e.a));
    SnfDecomposition { u: Elimination::take(e.u.take()), s, v: Elimination::take(e.v.take()) }
}

/// Sparse matrix given by columns of `(row, value)` entries.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m.set(r, c, BigInt::from(v));
            }
        }
        m
    }
}

/// Nonzero invariant factors of a sparse integer matrix, in divisibility
/// order. Unit pivots are eliminated sparsely; whatever is left is handed to
/// the dense reduction.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (c, col) in m.columns.iter().enumerate() {
        for &(r, v) in col {
            if v != 0 {
                rows[r].insert(c, BigInt::from(v));
                col_rows[c].insert(r);
            }
        }
    }
    let mut units = 0usize;
    let mut row_alive = vec![true; m.rows];
    let mut col_alive = vec![true; m.cols];
    loop {
        let mut progress = false;
        for c in 0..m.cols {
            if !col_alive[c] {
                continue;
            }
            // unit entry in this column on the shortest row
            let pivot =
                col_rows[c].iter().filter(|&&r| rows[r][&c].abs().is_one()).min_by_key(|&&r| rows[r].len()).copied();
            let Some(p) = pivot else { continue };
            let prow = std::mem::take(&mut rows[p]);
            let pv = prow[&c].clone();
            let others: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != p).collect();
            for r in others {
                let factor = &rows[r][&c] * &pv; // pv = ±1, so this is value / pv
                for (&k, x) in &prow {
                    let entry = rows[r].entry(k).or_insert_with(BigInt::zero);
                    *entry -= &factor * x;
                    if entry.is_zero() {
                        rows[r].remove(&k);
                        col_rows[k].remove(&r);
                    } else {
                        col_rows[k].insert(r);
                    }
                }
            }
            for &k in prow.keys() {
                col_rows[k].remove(&p);
            }
            row_alive[p] = false;
            col_alive[c] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| row_alive[r] && !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| col_alive[c] && !col_rows[c].is_empty()).collect();
    let mut factors = vec![BigInt::one(); units];
    if !live_rows.is_empty() && !live_cols.is_empty() {
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut rest = IntegerMatrix::zeros(live_rows.len(), live_cols.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for (c, v) in &rows[r] {
                rest.set(i, col_pos[c], v.clone());
            }
        }
        let mut e = Elimination::new(&rest, Track::default());
        e.run();
        factors.extend(e.diagonal());
    }
    factors
}

/// Rank over the field with two elements.
pub fn rank_mod2(m: &SparseMatrix) -> usize {
    let mut pivots: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut rank = 0;
    for col in &m.columns {
        let mut v: BTreeSet<usize> = col.iter().filter(|(_, x)| x % 2 != 0).map(|&(r, _)| r).collect();
        while let Some(&lead) = v.iter().next_back() {
            match pivots.get(&lead) {
                Some(p) => {
                    v = v.symmetric_difference(p).copied().collect();
                }
                None => {
                    pivots.insert(lead, v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntegerMatrix) -> SnfDecomposition {
        let d = smith_normal_form(a);
        assert_eq!(d.u.mul(a).mul(&d.v), d.s, "U·A·V ≠ S");
        assert!(d.u.is_unimodular() && d.v.is_unimodular());
        let diag = d.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for r in 0..d.s.rows() {
            for c in 0..d.s.cols() {
                if r != c {
                    assert!(d.s.get(r, c).is_zero());
                }
            }
        }
        d
    }

    #[test]
    fn zero_matrix() {
        let d = check(&IntegerMatrix::zeros(2, 3));
        assert!(d.s.is_zero());
        assert_eq!(d.u, IntegerMatrix::identity(2));
        assert_eq!(d.v, IntegerMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        let d = check(&IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(d.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_three() {
        let d = check(&IntegerMatrix::identity(3));
        assert_eq!(d.diagonal(), vec![BigInt::one(); 3]);
    }

    #[test]
    fn divisibility_is_enforced() {
        let d = check(&IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(d.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let d = check(&IntegerMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]));
        assert_eq!(d.diagonal(), vec![BigInt::from(2), BigInt::from(2), BigInt::from(60)]);
    }

    #[test]
    fn sparse_factors_match_dense() {
        let dense = IntegerMatrix::from_rows(&[vec![2, 4, 0], vec![6, 8, 1], vec![0, 0, 3]]);
        let mut sparse = SparseMatrix { rows: 3, cols: 3, columns: vec![Vec::new(); 3] };
        for r in 0..3 {
            for c in 0..3 {
                let v = i64::try_from(dense.get(r, c)).unwrap();
                if v != 0 {
                    sparse.columns[c].push((r, v));
                }
            }
        }
        assert_eq!(invariant_factors(&sparse), smith_normal_form(&dense).diagonal());
    }

    #[test]
    fn mod2_rank_ignores_even_entries() {
        let m = SparseMatrix { rows: 2, cols: 2, columns: vec![vec![(0, 2)], vec![(0, 1), (1, 1)]] };
        assert_eq!(rank_mod2(&m), 1);
    }
}
