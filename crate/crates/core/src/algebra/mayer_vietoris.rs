//! Mayer–Vietoris sequence of a cover `W = A ∪ B` by named subcomplexes.
//!
//! With `C = A ∩ B` the sequence is
//! `H_p(C) --α--> H_p(A) ⊕ H_p(B) --β--> H_p(W) --δ--> H_{p−1}(C)`,
//! `α(c) = (c, c)`, `β(a, b) = a − b`. The connecting map splits a cycle
//! `z = a + b'` with `a` supported on `A` and `b'` on the simplices outside
//! `A`, and sends `[z]` to `[∂a]`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use super::homology::{boundary_sparse, homology_presentation};
use super::matrix::IntegerMatrix;
use super::presentation::{exact_at, is_injective, sum_relations, Presentation};
use crate::complex::{ComplexError, Simplex, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("named subcomplexes `{0}` and `{1}` do not cover the complex")]
    BadCover(String, String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Exactness at one term of the long exact sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequencePosition {
    pub degree: usize,
    /// `"intersection"`, `"sum"` or `"union"`.
    pub term: &'static str,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MayerVietorisReport {
    pub positions: Vec<SequencePosition>,
    /// Injectivity of `α` in degrees `0..=dim W`.
    pub injective: Vec<bool>,
}

impl MayerVietorisReport {
    pub fn is_exact(&self) -> bool {
        self.positions.iter().all(|p| p.exact)
    }

    pub fn is_injective(&self) -> bool {
        self.injective.iter().all(|&b| b)
    }
}

/// Index of each `p`-simplex of `from` among the `p`-simplices of `to`,
/// matched by vertex identifiers.
pub(crate) fn simplex_correspondence(from: &SimplicialComplex, to: &SimplicialComplex, p: usize) -> Vec<Option<usize>> {
    from.simplices(p).iter().map(|s| to.simplex_from_ids(&from.simplex_ids(s)).and_then(|t| to.index_of(&t))).collect()
}

fn push_chain(chain: &[BigInt], map: &[Option<usize>], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (x, target) in chain.iter().zip(map) {
        if !x.is_zero() {
            let t = target.expect("chain is supported on the target complex");
            out[t] += x;
        }
    }
    out
}

fn columns_to_matrix(rows: usize, cols: Vec<Vec<BigInt>>) -> IntegerMatrix {
    IntegerMatrix::from_columns(rows, &cols)
}

struct Term {
    complex: SimplicialComplex,
    groups: Vec<Presentation>,
}

impl Term {
    fn new(complex: SimplicialComplex, top: usize) -> Self {
        let groups = (0..=top + 1).map(|p| homology_presentation(&complex, p)).collect();
        Term { complex, groups }
    }
}

/// Induced map `H_p(from) → H_p(to)` in coordinates, optionally negated.
fn induced(from: &Term, to: &Term, p: usize, sign: i64) -> IntegerMatrix {
    let map = simplex_correspondence(&from.complex, &to.complex, p);
    let target = &to.groups[p];
    let cols = from.groups[p]
        .generators()
        .iter()
        .map(|g| {
            let pushed = push_chain(g, &map, to.complex.count(p));
            let mut c = target.coordinates(&pushed);
            if sign < 0 {
                for x in c.iter_mut() {
                    *x = -std::mem::take(x);
                }
                target.shape().normalise(&mut c);
            }
            c
        })
        .collect();
    columns_to_matrix(target.len(), cols)
}

fn stack(top: &IntegerMatrix, bottom: &IntegerMatrix) -> IntegerMatrix {
    top.vcat(bottom)
}

/// Checks the Mayer–Vietoris sequence of `w` for the cover by the named
/// subcomplexes `a_name` and `b_name`.
pub fn mayer_vietoris_check(
    w: &SimplicialComplex,
    a_name: &str,
    b_name: &str,
) -> Result<MayerVietorisReport, CoverError> {
    let a_set = w.named_or_err(a_name)?;
    let b_set = w.named_or_err(b_name)?;
    let covered: BTreeSet<&Simplex> = a_set.iter().chain(b_set.iter()).collect();
    if covered.len() != w.total_simplices() {
        return Err(CoverError::BadCover(a_name.into(), b_name.into()));
    }
    let Some(top) = w.dim() else {
        return Ok(MayerVietorisReport { positions: Vec::new(), injective: Vec::new() });
    };
    let c_set: Vec<&Simplex> = a_set.intersection(b_set).collect();

    let wt = Term::new(w.clone(), top);
    let at = Term::new(w.restrict(a_set), top);
    let bt = Term::new(w.restrict(b_set), top);
    let ct = Term::new(w.restrict(c_set.iter().copied()), top);

    let alpha: Vec<IntegerMatrix> =
        (0..=top + 1).map(|p| stack(&induced(&ct, &at, p, 1), &induced(&ct, &bt, p, 1))).collect();
    let beta: Vec<IntegerMatrix> =
        (0..=top + 1).map(|p| induced(&at, &wt, p, 1).hcat(&induced(&bt, &wt, p, -1))).collect();
    // δ_p : H_p(W) → H_{p−1}(C); δ_0 maps to the zero group
    let delta: Vec<IntegerMatrix> = (0..=top + 1)
        .map(|p| {
            if p == 0 {
                return IntegerMatrix::zeros(0, wt.groups[0].len());
            }
            let in_a: Vec<bool> = w.simplices(p).iter().map(|s| a_set.contains(s)).collect();
            let d = boundary_sparse(w, p);
            let back = simplex_correspondence(w, &ct.complex, p - 1);
            let target = &ct.groups[p - 1];
            let cols = wt.groups[p]
                .generators()
                .iter()
                .map(|z| {
                    let mut bd = vec![BigInt::zero(); w.count(p - 1)];
                    for (j, x) in z.iter().enumerate() {
                        if x.is_zero() || !in_a[j] {
                            continue;
                        }
                        for &(r, e) in &d.columns[j] {
                            bd[r] += x * e;
                        }
                    }
                    let bd = push_chain(&bd, &back, ct.complex.count(p - 1));
                    target.coordinates(&bd)
                })
                .collect();
            columns_to_matrix(target.len(), cols)
        })
        .collect();

    let rel = |t: &Term, p: usize| t.groups[p].shape().relations();
    let rel_sum = |p: usize| sum_relations(&[at.groups[p].shape(), bt.groups[p].shape()]);

    let mut positions = Vec::new();
    let mut injective = Vec::new();
    for p in 0..=top {
        positions.push(SequencePosition {
            degree: p,
            term: "intersection",
            exact: exact_at(&delta[p + 1], &rel(&ct, p), &alpha[p], &rel_sum(p)).holds(),
        });
        positions.push(SequencePosition {
            degree: p,
            term: "sum",
            exact: exact_at(&alpha[p], &rel_sum(p), &beta[p], &rel(&wt, p)).holds(),
        });
        let below = if p == 0 { IntegerMatrix::zeros(0, 0) } else { rel(&ct, p - 1) };
        positions.push(SequencePosition {
            degree: p,
            term: "union",
            exact: exact_at(&beta[p], &rel(&wt, p), &delta[p], &below).holds(),
        });
        injective.push(is_injective(&alpha[p], &rel(&ct, p), &rel_sum(p)));
    }
    Ok(MayerVietorisReport { positions, injective })
}
