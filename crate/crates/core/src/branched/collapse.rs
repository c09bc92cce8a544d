use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{face_without, ComplexError, ComplexFile, Simplex, SimplicialComplex, VertexId};

/// Where a collapse should end.
#[derive(Debug, Clone, PartialEq)]
pub enum CollapseGoal {
    /// A single vertex, whichever it is.
    Point,
    /// Exactly this subcomplex, matched by vertex identifiers.
    Subcomplex(SimplicialComplex),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {0}: {1}")]
    BadStep(usize, String),
    #[error("replay ends at {0} simplices, not at the goal")]
    WrongEnd(usize),
}

/// Ordered elementary collapses `(free face, coface)` by vertex identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseCertificate {
    steps: Vec<(Vec<VertexId>, Vec<VertexId>)>,
    goal: CollapseGoal,
    seed: Option<u64>,
}

/// Search parameters for [`collapse_to`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollapseSettings {
    pub seed: u64,
    pub restarts: u32,
    pub budget: u64,
}

impl Default for CollapseSettings {
    fn default() -> Self {
        CollapseSettings { seed: 0, restarts: 32, budget: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CollapseOutcome {
    Certificate(CollapseCertificate),
    /// No run reached the goal. This does not show the goal is unreachable.
    Inconclusive {
        restarts: u32,
        best_remaining: usize,
        reason: String,
    },
}

impl CollapseOutcome {
    pub fn certificate(&self) -> Option<&CollapseCertificate> {
        match self {
            CollapseOutcome::Certificate(c) => Some(c),
            CollapseOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Flat indexing of all simplices with codimension-one incidences.
struct Incidence {
    simplices: Vec<Simplex>,
    dims: Vec<usize>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(c: &SimplicialComplex) -> Self {
        let top = c.dim().map_or(0, |d| d + 1);
        let mut offsets = vec![0; top + 1];
        for d in 0..top {
            offsets[d + 1] = offsets[d] + c.count(d);
        }
        let simplices: Vec<Simplex> = c.iter().cloned().collect();
        let dims: Vec<usize> = simplices.iter().map(|s| s.len() - 1).collect();
        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (k, s) in simplices.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            for i in 0..s.len() {
                let f = offsets[s.len() - 2] + c.index_of(&face_without(s, i)).expect("closed");
                faces[k].push(f);
                cofaces[f].push(k);
            }
        }
        Incidence { simplices, dims, faces, cofaces }
    }

    fn flat_index(&self, c: &SimplicialComplex, ids: &[VertexId]) -> Option<usize> {
        let s = c.simplex_from_ids(ids)?;
        let d = s.len() - 1;
        let offset: usize = (0..d).map(|e| c.count(e)).sum();
        Some(offset + c.index_of(&s)?)
    }
}

fn goal_set(c: &SimplicialComplex, goal: &CollapseGoal) -> Result<BTreeSet<Simplex>, ComplexError> {
    match goal {
        CollapseGoal::Point => Ok(BTreeSet::new()),
        CollapseGoal::Subcomplex(t) => t
            .iter()
            .map(|s| {
                c.simplex_from_ids(&t.simplex_ids(s)).ok_or_else(|| ComplexError::MissingSimplex(t.format_simplex(s)))
            })
            .collect(),
    }
}

fn reached(live: &[bool], count: usize, goal: &CollapseGoal, protected: &[bool]) -> bool {
    match goal {
        CollapseGoal::Point => count == 1,
        CollapseGoal::Subcomplex(_) => live.iter().zip(protected).all(|(l, p)| l == p),
    }
}

impl CollapseCertificate {
    pub fn new(steps: Vec<(Vec<VertexId>, Vec<VertexId>)>, goal: CollapseGoal, seed: Option<u64>) -> Self {
        CollapseCertificate { steps, goal, seed }
    }

    pub fn steps(&self) -> &[(Vec<VertexId>, Vec<VertexId>)] {
        &self.steps
    }

    pub fn goal(&self) -> &CollapseGoal {
        &self.goal
    }

    /// Seed of the search run that produced the certificate, if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step to `start` and returns what is left.
    pub fn replay(&self, start: &SimplicialComplex) -> Result<SimplicialComplex, ReplayError> {
        let inc = Incidence::new(start);
        let mut live = vec![true; inc.simplices.len()];
        for (n, (face, coface)) in self.steps.iter().enumerate() {
            let bad = |msg: &str| ReplayError::BadStep(n, msg.to_string());
            let f = inc.flat_index(start, face).ok_or_else(|| bad("face is not a simplex"))?;
            let t = inc.flat_index(start, coface).ok_or_else(|| bad("coface is not a simplex"))?;
            if !live[f] || !live[t] {
                return Err(bad("simplex already removed"));
            }
            if !inc.faces[t].contains(&f) {
                return Err(bad("not a codimension-one face"));
            }
            let live_cofaces: Vec<usize> = inc.cofaces[f].iter().copied().filter(|&k| live[k]).collect();
            if live_cofaces != [t] {
                return Err(bad("face is not free"));
            }
            live[f] = false;
            live[t] = false;
        }
        let left: Vec<&Simplex> = inc.simplices.iter().zip(&live).filter(|(_, &l)| l).map(|(s, _)| s).collect();
        Ok(start.restrict(left))
    }

    /// Replays and checks that the goal is reached exactly.
    pub fn verify(&self, start: &SimplicialComplex) -> Result<SimplicialComplex, ReplayError> {
        let end = self.replay(start)?;
        let ok = match &self.goal {
            CollapseGoal::Point => end.total_simplices() == 1,
            CollapseGoal::Subcomplex(t) => {
                let ids =
                    |c: &SimplicialComplex| -> BTreeSet<Vec<VertexId>> { c.iter().map(|s| c.simplex_ids(s)).collect() };
                ids(&end) == ids(t)
            }
        };
        if ok {
            Ok(end)
        } else {
            Err(ReplayError::WrongEnd(end.total_simplices()))
        }
    }

    pub fn to_json(&self) -> Value {
        let goal = match &self.goal {
            CollapseGoal::Point => json!("point"),
            CollapseGoal::Subcomplex(t) => serde_json::to_value(ComplexFile::from_complex(t)).expect("serialisable"),
        };
        json!({
            "steps": self.steps.iter().map(|(f, t)| json!([f, t])).collect::<Vec<_>>(),
            "target": goal,
            "seed": self.seed,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ComplexError> {
        let format = |e: serde_json::Error| ComplexError::Format(e.to_string());
        let steps: Vec<(Vec<VertexId>, Vec<VertexId>)> =
            serde_json::from_value(v.get("steps").cloned().unwrap_or(json!([]))).map_err(format)?;
        let goal = match v.get("target") {
            Some(Value::String(s)) if s == "point" => CollapseGoal::Point,
            Some(t) => {
                let file: ComplexFile = serde_json::from_value(t.clone()).map_err(format)?;
                CollapseGoal::Subcomplex(file.to_complex()?)
            }
            None => return Err(ComplexError::Format("certificate without target".into())),
        };
        let seed = v.get("seed").and_then(Value::as_u64);
        Ok(CollapseCertificate { steps, goal, seed })
    }
}

/// Greedy collapse search. Free faces are taken from the highest dimension
/// available, ties broken at random; restarts use seeds `seed, seed+1, …`.
pub fn collapse_to(
    c: &SimplicialComplex,
    goal: CollapseGoal,
    settings: CollapseSettings,
) -> Result<CollapseOutcome, ComplexError> {
    let inc = Incidence::new(c);
    let protected_set = goal_set(c, &goal)?;
    let protected: Vec<bool> = inc.simplices.iter().map(|s| protected_set.contains(s)).collect();
    let top = c.dim().unwrap_or(0);
    let mut best = usize::MAX;
    let mut reason = String::from("no free faces left");
    for k in 0..settings.restarts.max(1) {
        let seed = settings.seed.wrapping_add(u64::from(k));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut live = vec![true; inc.simplices.len()];
        let mut live_count = live.len();
        let mut cofaces_alive: Vec<usize> = inc.cofaces.iter().map(Vec::len).collect();
        let mut pool: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        for (f, &n) in cofaces_alive.iter().enumerate() {
            if n == 1 && !protected[f] {
                pool[inc.dims[f]].push(f);
            }
        }
        let mut steps = Vec::new();
        let mut spent = 0u64;
        'run: loop {
            if reached(&live, live_count, &goal, &protected) {
                let cert = CollapseCertificate::new(steps, goal, Some(seed));
                return Ok(CollapseOutcome::Certificate(cert));
            }
            if spent >= settings.budget {
                reason = format!("step budget {} exhausted", settings.budget);
                break;
            }
            for d in (0..top).rev() {
                while !pool[d].is_empty() {
                    let pick = rng.gen_range(0..pool[d].len());
                    let f = pool[d].swap_remove(pick);
                    if !live[f] || protected[f] || cofaces_alive[f] != 1 {
                        continue;
                    }
                    let t = *inc.cofaces[f].iter().find(|&&k| live[k]).expect("one live coface");
                    if protected[t] {
                        continue;
                    }
                    live[f] = false;
                    live[t] = false;
                    live_count -= 2;
                    spent += 1;
                    steps.push((c.simplex_ids(&inc.simplices[f]), c.simplex_ids(&inc.simplices[t])));
                    for &g in inc.faces[t].iter().chain(&inc.faces[f]) {
                        cofaces_alive[g] -= 1;
                        if live[g] && cofaces_alive[g] == 1 && !protected[g] {
                            pool[inc.dims[g]].push(g);
                        }
                    }
                    continue 'run;
                }
            }
            break;
        }
        best = best.min(live_count);
    }
    Ok(CollapseOutcome::Inconclusive { restarts: settings.restarts.max(1), best_remaining: best, reason })
}
