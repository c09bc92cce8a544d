//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reebspace::algebra::{
    betti_numbers, boundary_squares_vanish, homology, smith_normal_form, Coefficients, IntegerMatrix,
};
use reebspace::branched::{attach_flap, CollapseSettings};
use reebspace::complex::models;
use reebspace::complex::ops::{barycentric_subdivision, double};
use reebspace::reeb::{reeb_graph, VertexField};
use reebspace::verify::{
    disc_candidates, double_attachment_expected, standard_flap_cases, standard_instances, verify_disc_candidate,
    verify_double_attachment, Report,
};
use reebspace::SimplicialComplex;

const TIME_LIMIT: Duration = Duration::from_secs(60);

/// Every complex built by the criteria, for the global consistency pass.
#[derive(Default)]
struct Registry {
    complexes: Vec<(String, SimplicialComplex)>,
}

impl Registry {
    fn add(&mut self, label: impl Into<String>, c: &SimplicialComplex) {
        self.complexes.push((label.into(), c.clone()));
    }
}

type Outcome = Result<String, String>;
type Check = fn(&mut Registry) -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn snf_suite(_: &mut Registry) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100 {
        let (m, n) = (rng.gen_range(1..=20), rng.gen_range(1..=20));
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntegerMatrix::from_rows(&rows);
        let snf = smith_normal_form(&a);
        ensure(snf.u.mul(&a).mul(&snf.v) == snf.s, || format!("matrix {trial}: U·A·V ≠ S"))?;
        ensure(snf.u.determinant().abs().is_one(), || format!("matrix {trial}: |det U| ≠ 1"))?;
        ensure(snf.v.determinant().abs().is_one(), || format!("matrix {trial}: |det V| ≠ 1"))?;
        for r in 0..m {
            for c in 0..n {
                ensure(r == c || snf.s.get(r, c).is_zero(), || format!("matrix {trial}: S not diagonal"))?;
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            ensure(ok && !w[0].is_negative(), || format!("matrix {trial}: divisibility chain broken at {w:?}"))?;
        }
    }
    Ok("100 matrices".into())
}

fn ranks(c: &SimplicialComplex) -> Result<Vec<usize>, String> {
    let groups = homology(c, Coefficients::Integers, false);
    if let Some(g) = groups.iter().find(|g| !g.torsion.is_empty()) {
        return Err(format!("unexpected torsion {g}"));
    }
    Ok(groups.iter().map(|g| g.rank).collect())
}

fn homology_oracle(reg: &mut Registry) -> Outcome {
    for n in 1..=4 {
        let s = models::sphere(n).map_err(|e| e.to_string())?;
        let mut expected = vec![0; n + 1];
        expected[0] = 1;
        expected[n] = 1;
        ensure(ranks(&s)? == expected, || format!("sphere({n})"))?;
        reg.add(format!("sphere({n})"), &s);
    }
    let t = models::torus_grid(8, 8).map_err(|e| e.to_string())?;
    ensure(ranks(&t)? == [1, 2, 1], || "torus_grid".into())?;
    reg.add("torus_grid(8,8)", &t);
    let a = models::annulus(4).map_err(|e| e.to_string())?;
    let da = double(&a).map_err(|e| e.to_string())?;
    ensure(ranks(&da)? == [1, 2, 1], || "double(annulus)".into())?;
    reg.add("double(annulus)", &da);
    Ok("spheres 1..4, torus, doubled annulus".into())
}

fn double_reports(reg: &mut Registry) -> &'static Result<Vec<(String, Report)>, String> {
    static REPORTS: OnceLock<Result<Vec<(String, Report)>, String>> = OnceLock::new();
    if let Some(r) = REPORTS.get() {
        return r;
    }
    let computed = (|| {
        let instances = standard_instances().map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        for inst in &instances {
            reg.add(format!("{} W", inst.label), &inst.built.complex);
            let r = verify_double_attachment(inst).map_err(|e| format!("{}: {e}", inst.label))?;
            out.push((inst.label.clone(), r));
        }
        Ok(out)
    })();
    REPORTS.get_or_init(|| computed)
}

fn claims_matching(reg: &mut Registry, labels: &[&str], patterns: &[&str]) -> Outcome {
    let reports = double_reports(reg).as_ref().map_err(Clone::clone)?;
    let mut seen = 0;
    for (label, report) in reports {
        if !labels.is_empty() && !labels.contains(&label.as_str()) {
            continue;
        }
        for c in &report.claims {
            if patterns.iter().any(|p| c.claim_id.contains(p)) {
                seen += 1;
                ensure(c.pass, || format!("{}: expected {} got {}", c.claim_id, c.expected, c.computed))?;
            }
        }
    }
    ensure(seen > 0, || "no claims checked".into())?;
    Ok(format!("{seen} claims"))
}

fn double_homology(reg: &mut Registry) -> Outcome {
    let stated: [(&str, Vec<usize>); 5] = [
        ("i1", vec![1, 0, 1]),
        ("i2", vec![1, 2, 1]),
        ("i3", vec![1, 3, 1]),
        ("l2", vec![1, 2, 2]),
        ("n3", vec![1, 1, 1, 1]),
    ];
    let instances = standard_instances().map_err(|e| e.to_string())?;
    for (label, expected) in &stated {
        let inst = instances.iter().find(|i| i.label == *label).ok_or("missing instance")?;
        let formula = double_attachment_expected(&inst.data).map_err(|e| e.to_string())?;
        ensure(&formula.homology == expected, || format!("{label}: formula gives {:?}", formula.homology))?;
    }
    claims_matching(reg, &[], &[".homology.", ".cohomology."])
}

fn mayer_vietoris(reg: &mut Registry) -> Outcome {
    claims_matching(reg, &[], &[".mayer-vietoris."])
}

fn cup_vanishing(reg: &mut Registry) -> Outcome {
    claims_matching(reg, &["i3", "n3"], &[".cup."])
}

fn restriction_ranks(reg: &mut Registry) -> Outcome {
    claims_matching(reg, &[], &[".restriction.", ".kernel-on-doubles."])
}

fn flap_suite(reg: &mut Registry) -> Outcome {
    let mut checked = 0;
    for case in standard_flap_cases().map_err(|e| e.to_string())? {
        for piece in &case.pieces {
            reg.add(format!("{} base", case.label), &piece.base);
            let flapped = attach_flap(&piece.base, &piece.sigma).map_err(|e| e.to_string())?;
            reg.add(format!("{} flapped", case.label), &flapped.complex);
        }
        reg.add(format!("{} last", case.label), &case.last);
        let r = case.verify(CollapseSettings::default()).map_err(|e| e.to_string())?;
        if let Some(c) = r.failures().next() {
            return Err(format!("{}: expected {} got {}", c.claim_id, c.expected, c.computed));
        }
        checked += r.claims.len();
    }
    Ok(format!("{checked} claims"))
}

fn disc_suite(reg: &mut Registry) -> Outcome {
    let candidates = disc_candidates().map_err(|e| e.to_string())?;
    ensure(candidates.len() >= 5, || "fewer than five candidates".into())?;
    for c in &candidates {
        reg.add(c.label.clone(), &c.model.complex);
        let r = verify_disc_candidate(c, CollapseSettings::default()).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{}: {}", c.label, r.claims[0].computed))?;
    }
    Ok(format!("{} candidates collapse to a point", candidates.len()))
}

fn reeb_suite(reg: &mut Registry) -> Outcome {
    let t = models::torus_grid(8, 8).map_err(|e| e.to_string())?;
    reg.add("torus_grid(8,8) for height", &t);
    let g = reeb_graph(&VertexField::named(t, "height").map_err(|e| e.to_string())?).smooth_degree_2();
    let inv = g.invariants();
    ensure(
        inv.nodes == 4 && inv.edges == 4 && inv.degrees == [1, 1, 3, 3] && inv.beta0 == 1 && inv.beta1 == 1,
        || format!("torus: {inv:?}"),
    )?;
    let s = models::sphere(2).map_err(|e| e.to_string())?;
    reg.add("sphere(2) for height", &s);
    let g = reeb_graph(&VertexField::named(s, "height").map_err(|e| e.to_string())?).smooth_degree_2();
    let inv = g.invariants();
    ensure(inv.nodes == 2 && inv.edges == 1, || format!("sphere: {inv:?}"))?;
    Ok("torus {1,1,3,3}, sphere segment".into())
}

fn global_consistency(reg: &mut Registry) -> Outcome {
    for (label, c) in &reg.complexes {
        let betti = betti_numbers(c);
        let chi_betti: i64 =
            betti.iter().enumerate().map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        ensure(chi_betti == c.euler_characteristic(), || format!("{label}: χ mismatch"))?;
        ensure(boundary_squares_vanish(c), || format!("{label}: ∂∂ ≠ 0"))?;
        let before = homology(c, Coefficients::Integers, false);
        let after = homology(&barycentric_subdivision(c), Coefficients::Integers, false);
        ensure(before == after, || format!("{label}: homology changes under subdivision"))?;
    }
    Ok(format!("{} complexes", reg.complexes.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("Smith normal form on random matrices", snf_suite),
        ("homology oracle on standard models", homology_oracle),
        ("double attachments: formula equals oracle", double_homology),
        ("Mayer–Vietoris exactness and injectivity", mayer_vietoris),
        ("cup products across the seam vanish", cup_vanishing),
        ("restriction ranks", restriction_ranks),
        ("flap bouquets: collapses, homology sum, local structure", flap_suite),
        ("disc-like candidates collapse to a point", disc_suite),
        ("Reeb graphs of height functions", reeb_suite),
        ("global consistency of every built complex", global_consistency),
    ];
    let mut reg = Registry::default();
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check(&mut reg);
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > TIME_LIMIT => Err(format!("{detail}, but took longer than {TIME_LIMIT:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {title} ({detail}; {:.1}s)", i + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why} ({:.1}s)", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
