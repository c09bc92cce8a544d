use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Report, VerifyError};
use crate::algebra::presentation::{kernel_lattice, rational_rank};
use crate::algebra::{homology, mayer_vietoris_check, Coefficients, IntegerMatrix};
use crate::branched::{attach_double, BranchedModel};
use crate::cohomology::{relative_betti, CohomologyRing};
use crate::complex::{models, Simplex, SimplicialComplex};

/// Handle counts of the base `X` (`l` zero-handles, `h[p-1]` handles of
/// index `p`) and of each submanifold `Y_j` (one zero-handle, `hj[j][p-1]`
/// handles of index `p`), for `1 ≤ p ≤ n − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleData {
    pub n: usize,
    pub l: usize,
    pub h: Vec<usize>,
    pub hj: Vec<Vec<usize>>,
}

/// Predicted ranks for the result of a double attachment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedRanks {
    /// `rank H_p(W)` for `0 ≤ p ≤ n`; all groups torsion-free.
    pub homology: Vec<usize>,
    /// Rank of the classes restricting to zero on every double, indexed by
    /// degree; zero outside `1..n`.
    pub kernel_on_doubles: Vec<usize>,
}

impl HandleData {
    fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::InconsistentHandleData(m));
        if self.n == 0 || self.l == 0 {
            return bad("n and l must be positive".into());
        }
        if self.h.len() != self.n - 1 {
            return bad(format!("expected {} base handle counts, got {}", self.n - 1, self.h.len()));
        }
        if self.hj.len() != self.l {
            return bad(format!("expected {} submanifolds, got {}", self.l, self.hj.len()));
        }
        for (j, row) in self.hj.iter().enumerate() {
            if row.len() != self.n - 1 {
                return bad(format!("submanifold {} has {} handle counts", j + 1, row.len()));
            }
        }
        for p in 0..self.n - 1 {
            let sum: usize = self.hj.iter().map(|r| r[p]).sum();
            if sum > self.h[p] {
                return bad(format!("index-{} handles of the submanifolds exceed those of X", p + 1));
            }
        }
        Ok(())
    }

    fn sub_total(&self, p: usize) -> usize {
        self.hj.iter().map(|r| r[p - 1]).sum()
    }
}

/// Closed-form ranks of `W = X ∪ ⋃ DY_j` from handle data.
pub fn double_attachment_expected(d: &HandleData) -> Result<ExpectedRanks, VerifyError> {
    d.validate()?;
    let n = d.n;
    let base = |p: usize| -> Result<usize, VerifyError> {
        let h = d.h[p - 1];
        if p == 1 {
            h.checked_sub(d.l - 1)
                .ok_or_else(|| VerifyError::InconsistentHandleData("fewer 1-handles than needed to connect X".into()))
        } else {
            Ok(h)
        }
    };
    let mut homology = vec![0; n + 1];
    homology[0] = 1;
    homology[n] = d.l;
    let mut kernel_on_doubles = vec![0; n + 1];
    for p in 1..n {
        homology[p] = base(p)? + d.sub_total(n - p);
        kernel_on_doubles[p] = base(p)?
            .checked_sub(d.sub_total(p))
            .ok_or_else(|| VerifyError::InconsistentHandleData(format!("negative kernel rank in degree {p}")))?;
    }
    Ok(ExpectedRanks { homology, kernel_on_doubles })
}

/// A base complex, named submanifolds and the attachment built from them.
#[derive(Debug, Clone)]
pub struct DoubleInstance {
    pub label: String,
    pub data: HandleData,
    pub submanifolds: Vec<String>,
    pub built: BranchedModel,
}

impl DoubleInstance {
    pub fn new(
        label: &str,
        data: HandleData,
        base: &SimplicialComplex,
        submanifolds: &[&str],
    ) -> Result<Self, VerifyError> {
        if submanifolds.len() != data.l || base.dim() != Some(data.n) {
            return Err(VerifyError::InconsistentHandleData(format!(
                "{label}: handle data does not match the base complex"
            )));
        }
        let built = attach_double(base, submanifolds)?;
        Ok(DoubleInstance {
            label: label.to_string(),
            data,
            submanifolds: submanifolds.iter().map(|s| s.to_string()).collect(),
            built,
        })
    }
}

/// The shipped instances: a disc in a disc, the core annulus of an
/// annulus, a collar in a pair of pants, two discs in a pair of pants and
/// a core solid torus in a solid torus.
pub fn standard_instances() -> Result<Vec<DoubleInstance>, VerifyError> {
    let data = |n, l, h: &[usize], hj: &[&[usize]]| HandleData {
        n,
        l,
        h: h.to_vec(),
        hj: hj.iter().map(|r| r.to_vec()).collect(),
    };
    let pants = models::surface(0, 3)?;
    Ok(vec![
        DoubleInstance::new("i1", data(2, 1, &[0], &[&[0]]), &models::nested_disc(1)?, &["disc_0"])?,
        DoubleInstance::new("i2", data(2, 1, &[1], &[&[1]]), &models::annulus(4)?, &["core_annulus"])?,
        DoubleInstance::new("i3", data(2, 1, &[2], &[&[1]]), &pants, &["collar_1"])?,
        DoubleInstance::new("l2", data(2, 2, &[3], &[&[0], &[0]]), &pants, &["patch_0", "patch_1"])?,
        DoubleInstance::new("n3", data(3, 1, &[1, 0], &[&[1, 0]]), &models::solid_torus(3)?, &["core"])?,
    ])
}

fn group_json(rank: usize, torsion: &[BigInt]) -> Value {
    json!({ "rank": rank, "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() })
}

fn cohomology_rank(c: &SimplicialComplex, p: usize) -> usize {
    CohomologyRing::new(Arc::new(c.clone())).group(p).free
}

/// Classes of `ring` with the given coordinates, as cochains.
fn combine(ring: &CohomologyRing, p: usize, lattice: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let basis = ring.basis(p);
    (0..lattice.cols())
        .map(|c| {
            let mut cochain = vec![BigInt::zero(); ring.complex().count(p)];
            for (i, g) in basis.iter().enumerate() {
                let x = lattice.get(i, c);
                if x.is_zero() {
                    continue;
                }
                for (acc, y) in cochain.iter_mut().zip(g.cochain()) {
                    *acc += x * y;
                }
            }
            cochain
        })
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Runs every check on one instance.
pub fn verify_double_attachment(inst: &DoubleInstance) -> Result<Report, VerifyError> {
    let expected = double_attachment_expected(&inst.data)?;
    let n = inst.data.n;
    let l = inst.data.l;
    let w = Arc::new(inst.built.complex.clone());
    let id = |s: &str| format!("double.{}.{s}", inst.label);
    let mut report = Report::new();

    let groups = homology(&w, Coefficients::Integers, false);
    for p in 0..=n {
        let computed = groups.get(p).map_or(json!(null), |g| group_json(g.rank, &g.torsion));
        report.check(
            id(&format!("homology.H{p}")),
            "double attachment homology",
            group_json(expected.homology[p], &[]),
            computed,
        );
    }

    let mv = mayer_vietoris_check(&w, "X", "DY")?;
    report.check(id("mayer-vietoris.exact"), "Mayer–Vietoris exactness", json!(true), json!(mv.is_exact()));
    for (p, inj) in mv.injective.iter().enumerate() {
        report.check(
            id(&format!("mayer-vietoris.injective.{p}")),
            "Mayer–Vietoris injectivity",
            json!(true),
            json!(inj),
        );
    }

    let ring = CohomologyRing::new(w.clone());
    for p in 0..=n {
        let g = ring.group(p);
        report.check(
            id(&format!("cohomology.H{p}")),
            "double attachment cohomology",
            group_json(expected.homology[p], &[]),
            group_json(g.free, &g.torsion),
        );
    }

    let x = Arc::new(w.subcomplex("X")?);
    let dy = Arc::new(w.subcomplex("DY")?);
    let ring_x = CohomologyRing::new(x.clone());
    let ring_dy = CohomologyRing::new(dy.clone());
    let to_x = w.inclusion_from(&x)?;
    let to_dy = w.inclusion_from(&dy)?;

    let y_rank = |p: usize| -> Result<usize, VerifyError> {
        let mut total = 0;
        for j in 1..=l {
            total += cohomology_rank(&w.subcomplex(&format!("Y_{j}"))?, p);
        }
        Ok(total)
    };
    let second_rel = |p: usize| -> Result<usize, VerifyError> {
        let mut total = 0;
        for j in 1..=l {
            let second = w.subcomplex(&format!("Yprime_{j}"))?;
            let seam: BTreeSet<Simplex> = w
                .named_or_err(&format!("seam_{j}"))?
                .iter()
                .filter_map(|s| second.simplex_from_ids(&w.simplex_ids(s)))
                .collect();
            total += relative_betti(&second, &seam, p);
        }
        Ok(total)
    };

    let mut kernel_dy = vec![IntegerMatrix::zeros(0, 0); n + 1];
    let mut kernel_x = vec![IntegerMatrix::zeros(0, 0); n + 1];
    for p in 1..=n {
        let r_x = ring_x.restriction_matrix(&ring, &to_x, p)?;
        let r_dy = ring_dy.restriction_matrix(&ring, &to_dy, p)?;
        let ys = y_rank(p)?;
        if p < n {
            report.check(
                id(&format!("restriction.X.{p}")),
                "restriction to the base",
                json!(expected.kernel_on_doubles[p] + ys),
                json!(rational_rank(&r_x)),
            );
        }
        report.check(
            id(&format!("restriction.DY.{p}")),
            "restriction to the doubles",
            json!(ys + second_rel(p)?),
            json!(rational_rank(&r_dy)),
        );
        kernel_dy[p] = kernel_lattice(&r_dy, &ring_dy.group(p).relations());
        kernel_x[p] = kernel_lattice(&r_x, &ring_x.group(p).relations());
        if p < n {
            report.check(
                id(&format!("kernel-on-doubles.{p}")),
                "classes vanishing on the doubles",
                json!(expected.kernel_on_doubles[p]),
                json!(rational_rank(&kernel_dy[p])),
            );
        }
    }

    for p in 1..n {
        for q in 1..=n - p {
            let left = combine(&ring, p, &kernel_dy[p]);
            let right = combine(&ring, q, &kernel_x[q]);
            let mut nonzero = Vec::new();
            for (i, a) in left.iter().enumerate() {
                for (j, b) in right.iter().enumerate() {
                    let a = ring.class(p, a.clone())?;
                    let b = ring.class(q, b.clone())?;
                    if !ring.cup(&a, &b)?.is_zero_class() {
                        nonzero.push(json!([i, j]));
                    }
                }
            }
            report.push(
                id(&format!("cup.{p}x{q}")),
                "cup products across the seam vanish",
                json!({ "pairs": left.len() * right.len(), "nonzero": [] }),
                json!({ "pairs": left.len() * right.len(), "nonzero": nonzero }),
                nonzero.is_empty(),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(n: usize, l: usize, h: &[usize], hj: &[&[usize]]) -> HandleData {
        HandleData { n, l, h: h.to_vec(), hj: hj.iter().map(|r| r.to_vec()).collect() }
    }

    #[test]
    fn formula_examples() {
        let e = double_attachment_expected(&data(2, 1, &[0], &[&[0]])).unwrap();
        assert_eq!(e.homology, vec![1, 0, 1]);
        let e = double_attachment_expected(&data(2, 1, &[1], &[&[1]])).unwrap();
        assert_eq!((e.homology, e.kernel_on_doubles[1]), (vec![1, 2, 1], 0));
        let e = double_attachment_expected(&data(2, 1, &[2], &[&[1]])).unwrap();
        assert_eq!((e.homology, e.kernel_on_doubles[1]), (vec![1, 3, 1], 1));
        let e = double_attachment_expected(&data(2, 2, &[3], &[&[0], &[0]])).unwrap();
        assert_eq!(e.homology, vec![1, 2, 2]);
        let e = double_attachment_expected(&data(3, 1, &[1, 0], &[&[1, 0]])).unwrap();
        assert_eq!(e.homology, vec![1, 1, 1, 1]);
    }

    #[test]
    fn inconsistent_data() {
        for d in [data(2, 1, &[0], &[&[1]]), data(2, 3, &[1], &[&[0], &[0], &[0]]), data(3, 1, &[1], &[&[0]])] {
            assert!(matches!(double_attachment_expected(&d), Err(VerifyError::InconsistentHandleData(_))));
        }
    }

    #[test]
    fn small_instances_pass() {
        let d1 = data(2, 1, &[0], &[&[0]]);
        let inst = DoubleInstance::new("i1", d1, &models::nested_disc(1).unwrap(), &["disc_0"]).unwrap();
        let r = verify_double_attachment(&inst).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let d2 = data(2, 1, &[1], &[&[1]]);
        let inst = DoubleInstance::new("i2", d2, &models::annulus(4).unwrap(), &["core_annulus"]).unwrap();
        let r = verify_double_attachment(&inst).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn wrong_data_fails() {
        let d = data(2, 1, &[1], &[&[0]]);
        let inst = DoubleInstance::new("bad", d, &models::annulus(4).unwrap(), &["core_annulus"]).unwrap();
        assert!(!verify_double_attachment(&inst).unwrap().passed());
    }
}
