use serde_json::json;

use super::{Report, VerifyError};
use crate::algebra::{homology, Coefficients};
use crate::branched::{
    check_local_structure_dim2, collapse_to, BranchedModel, CollapseGoal, CollapseOutcome, CollapseSettings,
};
use crate::complex::models;

/// A 2-dimensional model proposed as a contractible branched surface.
#[derive(Debug, Clone)]
pub struct DiscCandidate {
    pub label: String,
    pub model: BranchedModel,
    /// Set only by generators that glue collapsible blocks along connected
    /// intersections.
    pub simply_connected: bool,
}

/// Discs carrying flaps along some of their concentric circles.
pub fn disc_candidates() -> Result<Vec<DiscCandidate>, VerifyError> {
    let layouts: [(usize, &[usize]); 6] =
        [(1, &[0]), (2, &[0, 1]), (2, &[1]), (3, &[0, 1, 2]), (3, &[0, 2]), (3, &[1])];
    layouts
        .iter()
        .map(|&(rings, flaps)| {
            let disc = models::nested_disc(rings)?;
            let mut model = BranchedModel::plain(disc);
            for &r in flaps {
                model = model.attach_flap(&format!("ring_{r}"))?;
            }
            let tag: Vec<String> = flaps.iter().map(ToString::to_string).collect();
            Ok(DiscCandidate { label: format!("nested{rings}-flaps{}", tag.join("")), model, simply_connected: true })
        })
        .collect()
}

/// Checks the hypotheses, then searches for a collapse to a point. A failed
/// search is reported as inconclusive, never as a refutation.
pub fn verify_disc_candidate(c: &DiscCandidate, settings: CollapseSettings) -> Result<Report, VerifyError> {
    let id = |s: &str| format!("disc.{}.{s}", c.label);
    let mut report = Report::new();
    let complex = &c.model.complex;
    let mut problems = Vec::new();
    if complex.dim() != Some(2) {
        problems.push(format!("dimension {:?}", complex.dim()));
    } else {
        problems.extend(check_local_structure_dim2(&c.model).failures);
    }
    let groups = homology(complex, Coefficients::Integers, false);
    let disc_like = groups.iter().all(|g| g.torsion.is_empty() && g.rank == usize::from(g.degree == 0));
    if !disc_like {
        let ranks: Vec<String> = groups.iter().map(ToString::to_string).collect();
        problems.push(format!("homology is {} rather than that of a disc", ranks.join(", ")));
    }
    if !c.simply_connected {
        problems.push("simple connectivity is not certified".into());
    }
    if !problems.is_empty() {
        report.push(
            id("collapse"),
            "collapse to a point",
            json!("certificate"),
            json!({ "not-a-candidate": problems }),
            false,
        );
        return Ok(report);
    }
    let outcome = collapse_to(complex, CollapseGoal::Point, settings)?;
    let (computed, pass) = match &outcome {
        CollapseOutcome::Certificate(cert) => (json!({ "certificate": cert.len() }), cert.verify(complex).is_ok()),
        CollapseOutcome::Inconclusive { restarts, best_remaining, reason } => {
            (json!({ "inconclusive": reason, "restarts": restarts, "best_remaining": best_remaining }), false)
        }
    };
    report.push(id("collapse"), "collapse to a point", json!("certificate"), computed, pass);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branched::attach_flap;

    fn unchecked(label: &str, model: BranchedModel) -> DiscCandidate {
        DiscCandidate { label: label.into(), model, simply_connected: false }
    }

    #[test]
    fn generated_candidates_collapse() {
        let all = disc_candidates().unwrap();
        assert!(all.len() >= 5);
        for c in &all {
            let r = verify_disc_candidate(c, CollapseSettings::default()).unwrap();
            assert!(r.passed(), "{}: {:?}", c.label, r.claims);
        }
    }

    #[test]
    fn torus_is_not_a_candidate() {
        let t = BranchedModel::plain(models::torus_grid(3, 3).unwrap());
        let mut c = unchecked("torus", t);
        c.simply_connected = true;
        let r = verify_disc_candidate(&c, CollapseSettings::default()).unwrap();
        assert!(!r.passed());
        assert!(r.claims[0].computed.get("not-a-candidate").is_some());
    }

    #[test]
    fn flap_on_disc_needs_no_flag_to_fail() {
        let m = attach_flap(&models::nested_disc(1).unwrap(), "ring_0").unwrap();
        assert!(!verify_disc_candidate(&unchecked("x", m), CollapseSettings::default()).unwrap().passed());
    }
}
