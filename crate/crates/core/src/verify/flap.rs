use serde_json::{json, Value};

use super::{Report, VerifyError};
use crate::algebra::{homology, Coefficients, HomologyGroup};
use crate::branched::{
    attach_flap, bouquet, check_local_structure_dim2, collapse_to, BranchedModel, CollapseGoal, CollapseOutcome,
    CollapseSettings,
};
use crate::complex::{models, SimplicialComplex, VertexId};

/// A base complex and the named circle along which a flap is attached.
#[derive(Debug, Clone)]
pub struct FlapPiece {
    pub base: SimplicialComplex,
    pub sigma: String,
}

/// Flap pieces, a final complex and one basepoint per part.
#[derive(Debug, Clone)]
pub struct FlapCase {
    pub label: String,
    pub pieces: Vec<FlapPiece>,
    pub last: SimplicialComplex,
    pub basepoints: Vec<VertexId>,
}

impl FlapCase {
    pub fn verify(&self, settings: CollapseSettings) -> Result<Report, VerifyError> {
        verify_flap_bouquet(&self.label, &self.pieces, &self.last, &self.basepoints, settings)
    }
}

/// A flapped sphere with a triangle, an annulus alone, and a flapped torus
/// with a triangle.
pub fn standard_flap_cases() -> Result<Vec<FlapCase>, VerifyError> {
    let annulus = models::annulus(3)?;
    Ok(vec![
        FlapCase {
            label: "sphere".into(),
            pieces: vec![FlapPiece { base: models::sphere(2)?, sigma: "equator".into() }],
            last: models::simplex(2)?,
            basepoints: vec![3.into(), 0.into()],
        },
        FlapCase {
            label: "empty".into(),
            pieces: Vec::new(),
            basepoints: vec![annulus.vertices()[0].clone()],
            last: annulus,
        },
        FlapCase {
            label: "torus".into(),
            pieces: vec![FlapPiece { base: models::torus_grid(3, 3)?, sigma: "meridian".into() }],
            last: models::simplex(2)?,
            basepoints: vec![4.into(), 0.into()],
        },
    ])
}

fn reduced(c: &SimplicialComplex) -> Vec<HomologyGroup> {
    homology(c, Coefficients::Integers, true)
}

fn groups_json(groups: &[(usize, Vec<String>)]) -> Value {
    Value::Array(groups.iter().map(|(r, t)| json!({ "rank": r, "torsion": t })).collect())
}

fn summed(parts: &[&SimplicialComplex], top: usize) -> Vec<(usize, Vec<String>)> {
    let mut out = vec![(0usize, Vec::<num_bigint::BigInt>::new()); top + 1];
    for c in parts {
        for g in reduced(c) {
            out[g.degree].0 += g.rank;
            out[g.degree].1.extend(g.torsion.iter().cloned());
        }
    }
    out.into_iter()
        .map(|(r, mut t)| {
            t.sort();
            (r, t.iter().map(ToString::to_string).collect())
        })
        .collect()
}

fn outcome_json(o: &CollapseOutcome) -> Value {
    match o {
        CollapseOutcome::Certificate(c) => json!({ "certificate": c.len() }),
        CollapseOutcome::Inconclusive { restarts, best_remaining, reason } => {
            json!({ "inconclusive": reason, "restarts": restarts, "best_remaining": best_remaining })
        }
    }
}

/// Attaches a flap to every piece, joins the results and `last` at the
/// given basepoints, and checks collapses, homology and local structure.
pub fn verify_flap_bouquet(
    label: &str,
    pieces: &[FlapPiece],
    last: &SimplicialComplex,
    basepoints: &[VertexId],
    settings: CollapseSettings,
) -> Result<Report, VerifyError> {
    let id = |s: String| format!("flap.{label}.{s}");
    let mut report = Report::new();
    let mut models = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let flapped = attach_flap(&piece.base, &piece.sigma)?;
        let goal = CollapseGoal::Subcomplex(piece.base.clone());
        let outcome = collapse_to(&flapped.complex, goal, settings)?;
        let found = outcome.certificate().is_some_and(|c| c.verify(&flapped.complex).is_ok());
        report.push(
            id(format!("piece{i}.collapse")),
            "flapped piece collapses onto its base",
            json!("certificate"),
            outcome_json(&outcome),
            found,
        );
        if flapped.complex.dim() == Some(2) {
            let local = check_local_structure_dim2(&flapped);
            report.check(id(format!("piece{i}.local")), "class-A local structure", json!([]), json!(local.failures));
        }
        models.push(flapped);
    }
    if last.dim() == Some(2) {
        let local = check_local_structure_dim2(&BranchedModel::plain(last.clone()));
        report.check(id("last.local".into()), "class-A local structure", json!([]), json!(local.failures));
    }
    models.push(BranchedModel::plain(last.clone()));
    let w = bouquet(&models, basepoints)?;

    let mut parts: Vec<&SimplicialComplex> = pieces.iter().map(|p| &p.base).collect();
    parts.push(last);
    let top = w.complex.dim().unwrap_or(0);
    let expected = summed(&parts, top);
    let computed = summed(&[&w.complex], top);
    report.check(
        id("reduced-homology".into()),
        "bouquet homology is the sum of the pieces",
        groups_json(&expected),
        groups_json(&computed),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_cases_pass() {
        for case in standard_flap_cases().unwrap() {
            let r = case.verify(CollapseSettings::default()).unwrap();
            assert!(r.passed(), "{}: {:?}", case.label, r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn wrong_sigma_is_an_error() {
        let case = FlapCase {
            label: "x".into(),
            pieces: vec![FlapPiece { base: models::nested_disc(1).unwrap(), sigma: "boundary".into() }],
            last: models::simplex(2).unwrap(),
            basepoints: vec![3.into(), 0.into()],
        };
        assert!(case.verify(CollapseSettings::default()).is_err());
    }
}
