//! Acceptance suite: one PASS/FAIL line per criterion on stdout, nonzero
//! exit status if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use poisson3::bifurcation::{
    find_singular_points, observe, predict, verify, PointClass, Scenario, SearchSettings, VerifySettings,
};
use poisson3::classifier::{classify, CoarseClass};
use poisson3::jet::ratio;
use poisson3::normal_form::{a_casimir, reduce_to_fg, verify_fg};
use poisson3::poisson::generators::{self, GenRng, FG_SHAPES};
use poisson3::poisson::{jacobiator, lie_symmetry_residual, mod_weighted};
use num_traits::Zero;
use poisson3::{DiffKind, PoissonFamily, Series, Trunc, Var};

type Check = Result<String, String>;

const D: u32 = 6;

fn t() -> Trunc {
    Trunc::new(D, 2)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || format!("runtime {took:.1?} exceeds the {budget:?} budget"))
}

/// Random germ from the two exact constructions, avoiding the rotational
/// 1-jet where the `(f, g)` reduction does not apply.
fn random_family(rng: &mut GenRng, i: usize) -> PoissonFamily {
    loop {
        let p = if i % 5 == 4 {
            let (a, b) = generators::random_planar(rng, t());
            PoissonFamily::from_planar(&a, &b).expect("planar families are Poisson")
        } else {
            let (f, g) = generators::random_fg(rng, t(), FG_SHAPES[i % 4]);
            PoissonFamily::from_fg(&f, &g).expect("exact pair")
        };
        if !p.lie_1jet_origin().expect("singular").is_rotational_v() {
            return p;
        }
    }
}

/// 30 random families and their images under random changes.
fn corpus() -> Vec<(PoissonFamily, PoissonFamily)> {
    let mut rng = generators::rng(2024);
    (0..30)
        .map(|i| {
            let p = random_family(&mut rng, i);
            let q = p.pushforward(&generators::random_change(&mut rng, t())).expect("invertible change");
            (p, q)
        })
        .collect()
}

fn bracket_triplet(p: &PoissonFamily) -> [Series; 3] {
    [p.bxy().clone(), p.byz().clone(), p.bzx().clone()]
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut weights = 0usize;
    for (i, (p, q)) in corpus().iter().enumerate() {
        for (what, fam) in [("input", p), ("pushed", q)] {
            ensure(fam.trusted_residual().is_zero(), || format!("family {i}: {what} Jacobi residual nonzero"))?;
        }
        let nf = reduce_to_fg(q, D).map_err(|e| format!("family {i}: {e}"))?;
        let z = Series::var(t(), Var::Z);
        ensure(!nf.f.depends_on(Var::Z) && !nf.g.depends_on(Var::Z), || format!("family {i}: f or g depends on z"))?;
        let reduced = nf.family();
        ensure(reduced.bxy() == &z, || format!("family {i}: {{x,y}} is not z"))?;
        ensure(verify_fg(&nf).is_zero(), || format!("family {i}: df^dg residual nonzero"))?;
        // Reduced brackets are trusted to weight D-2 (space degree plus
        // eps-order), so the Jacobi residual is trusted below weight D-1.
        let weighted = |fam: &PoissonFamily| mod_weighted(&fam.jacobi_residual(), D - 1);
        ensure(weighted(&reduced).is_zero(), || format!("family {i}: reduced Jacobi residual nonzero"))?;
        // The reduced family is the pushforward along the logged changes on
        // the trusted weights.
        let moved = q.pushforward(&nf.total_change()).map_err(|e| format!("family {i}: {e}"))?;
        for (a, b) in bracket_triplet(&moved).iter().zip(bracket_triplet(&reduced).iter()) {
            let diff = mod_weighted(&(a - b), D - 1);
            ensure(diff.is_zero(), || format!("family {i}: change log does not reproduce the form: {diff}"))?;
        }
        ensure(weighted(&moved).is_zero(), || format!("family {i}: Jacobi residual after the log nonzero"))?;
        weights += nf.change_log.len();
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("30 families reduced, {weights} logged changes, all residuals zero"))
}

fn criterion_2() -> Check {
    for (i, (p, q)) in corpus().iter().enumerate() {
        for fam in [p, q] {
            let r = lie_symmetry_residual(&fam.curl(), fam).map_err(|e| e.to_string())?;
            ensure(r.is_zero(), || format!("family {i}: [curl P, P] = {:?} mod D-1", r.comps()))?;
        }
    }
    Ok("[curl P, P] = 0 mod D-1 on 60 families".into())
}

/// 30 germs across every class that the generators reach.
fn class_corpus() -> Vec<(String, PoissonFamily)> {
    let mut rng = generators::rng(99);
    let mut out = Vec::new();
    for i in 0..12 {
        out.push((format!("fg-{i}"), random_family(&mut rng, i % 4)));
    }
    for i in 0..6 {
        out.push((format!("planar-{i}"), random_family(&mut rng, 4)));
    }
    for i in 0..3 {
        out.push((format!("A-{i}"), generators::random_a_germ(&mut rng, t()).0));
    }
    let n = |l: i64, m: (i64, i64), plus| generators::n_model(t(), &ratio(l, 1), &ratio(m.0, m.1), plus);
    out.push(("A+ model".into(), generators::a_model(t(), true)));
    out.push(("A- model".into(), generators::a_model(t(), false)));
    out.push(("N+ (1,-7)".into(), n(1, (1, 1), true)));
    out.push(("N+ (1/9,1/9)".into(), n(1, (1, 9), true)));
    out.push(("N+ kappa1<0".into(), n(1, (-1, 1), true)));
    out.push(("N-".into(), n(1, (1, 1), false)));
    out.push(("saddle-node".into(), generators::saddle_node_model(t())));
    out.push(("so3".into(), PoissonFamily::linear_model(t(), true)));
    out.push(("sl2".into(), PoissonFamily::linear_model(t(), false)));
    out
}

fn class_key(p: &PoissonFamily) -> String {
    match classify(p, D) {
        Ok(c) => c.discrete_key(),
        Err(e) => format!("error: {e}"),
    }
}

fn criterion_3() -> Check {
    let mut rng = generators::rng(5);
    let mut seen = std::collections::BTreeSet::new();
    for (name, p) in class_corpus() {
        let base = class_key(&p);
        ensure(!base.starts_with("error"), || format!("{name}: {base}"))?;
        for k in 0..5 {
            let q = p.pushforward(&generators::random_change(&mut rng, t())).map_err(|e| e.to_string())?;
            let moved = class_key(&q);
            ensure(moved == base, || format!("{name}, change {k}: {base} became {moved}"))?;
        }
        seen.insert(base);
    }
    Ok(format!("30 germs x 5 changes, 0 mismatches; {} distinct classes", seen.len()))
}

fn criterion_4() -> Check {
    let mut rng = generators::rng(17);
    let (mut v, mut total) = (0, 0);
    for (name, p) in class_corpus() {
        let q = p.pushforward(&generators::random_change(&mut rng, t())).map_err(|e| e.to_string())?;
        for fam in [p, q] {
            let p0 = fam.at_eps0();
            let curl_at_0 = p0.curl().comps().iter().any(|s| !s.constant_term().is_zero());
            let rotational = p0.lie_1jet_origin().map_err(|e| e.to_string())?.is_rotational_v();
            let is_v = classify(&fam, D).map_err(|e| format!("{name}: {e}"))?.coarse() == CoarseClass::V;
            ensure(is_v == (curl_at_0 || rotational), || {
                format!("{name}: classified V = {is_v}, curl(0) != 0: {curl_at_0}, rotational 1-jet: {rotational}")
            })?;
            v += usize::from(is_v);
            total += 1;
        }
    }
    Ok(format!("{total} germs ({v} of type V), both directions hold"))
}

fn near(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let s = SearchSettings::default();
    let plus = generators::a_model(t(), true);
    let before = find_singular_points(&plus, -0.04, &s);
    ensure(before.is_empty(), || format!("eps = -0.04: {} points, expected none", before.len()))?;
    let after = find_singular_points(&plus, 0.04, &s);
    ensure(after.len() == 2, || format!("eps = +0.04: {} points, expected 2", after.len()))?;
    for (target, class) in [([0.0, 0.2, 0.0], PointClass::So3), ([0.0, -0.2, 0.0], PointClass::Sl2)] {
        let hit = after.iter().find(|r| near(r.point, target, 1e-6));
        let r = hit.ok_or_else(|| format!("no point within 1e-6 of {target:?}"))?;
        ensure(r.class == class, || format!("point {target:?} classified {:?}, expected {class:?}", r.class))?;
    }
    let minus = find_singular_points(&generators::a_model(t(), false), 0.04, &s);
    let classes: Vec<PointClass> = minus.iter().map(|r| r.class).collect();
    ensure(classes == [PointClass::Sl2, PointClass::Sl2], || format!("sign -: {classes:?}, expected two sl2"))?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("0 points before, so3 at +0.2 and sl2 at -0.2 after, sign - gives 2 sl2 ({:.1?})", start.elapsed()))
}

struct NCase {
    name: &'static str,
    lambda0: i64,
    mu1: (i64, i64),
    plus: bool,
    scenario: Scenario,
    curve: PointClass,
    /// Linearization at the origin for eps > 0: `c = −λ₀ ε sgn(μ₁)` on
    /// `{y,z} = c x`, so3 iff `c > 0` and `r` is definite.
    origin: PointClass,
}

fn check_n(c: &NCase) -> Result<String, String> {
    let p = generators::n_model(t(), &ratio(c.lambda0, 1), &ratio(c.mu1.0, c.mu1.1), c.plus);
    let pred = predict(&p, D).map_err(|e| e.to_string())?;
    ensure(pred.scenario == c.scenario, || format!("{}: scenario {:?}, expected {:?}", c.name, pred.scenario, c.scenario))?;
    let report = verify(&p, pred, &VerifySettings::default());
    let judged = report.observations.iter().filter(|o| o.matched.is_some()).count();
    for o in &report.observations {
        ensure(o.matched != Some(false), || format!("{} at eps = {:.3}: {:?}", c.name, o.eps, o.mismatches))?;
    }
    // Closed-form geometry at eps = 0.04: the model has mu0 = -eps sgn(mu1),
    // so C = 0 is r = eps/|mu1| in z = 0.
    let eps = 0.04;
    let r = eps * c.mu1.1 as f64 / (c.mu1.0 as f64).abs();
    let obs = observe(&p, eps, &report.prediction, &report.settings);
    let origin: Vec<_> = obs.points.iter().filter(|p| p.is_isolated()).collect();
    ensure(origin.len() == 1 && near(origin[0].point, [0.0; 3], 1e-8), || format!("{}: central point missing", c.name))?;
    ensure(origin[0].class == c.origin, || format!("{}: origin is {:?}", c.name, origin[0].class))?;
    let curve_pts: Vec<_> = obs.points.iter().filter(|p| p.dimension == 1).collect();
    ensure(!curve_pts.is_empty(), || format!("{}: no curve samples at eps = {eps}", c.name))?;
    for s in &curve_pts {
        let [x, y, z] = s.point;
        let q = if c.plus { x * x + y * y } else { x * x - y * y };
        ensure(z.abs() < 1e-6 && (q - r).abs() < 0.05 * r.abs(), || {
            format!("{}: sample {:?} off the curve r = {r}", c.name, s.point)
        })?;
        ensure(s.class == c.curve, || format!("{}: curve sample classified {:?}", c.name, s.class))?;
    }
    let expected_curves = if c.plus { 1 } else { 2 };
    ensure(obs.curves.len() == expected_curves, || format!("{}: {} curves", c.name, obs.curves.len()))?;
    let mut detail = format!("{}: {judged} eps values judged", c.name);
    if c.plus {
        let rel = (obs.curves[0].mean_radius - r.sqrt()).abs() / r.sqrt();
        ensure(rel < 0.05, || format!("{}: radius {} vs {}", c.name, obs.curves[0].mean_radius, r.sqrt()))?;
        detail.push_str(&format!(", radius {:.4} vs {:.4}", obs.curves[0].mean_radius, r.sqrt()));
    }
    Ok(detail)
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let cases = [
        NCase { name: "(1,-7)", lambda0: 1, mu1: (1, 1), plus: true, scenario: Scenario::NA, curve: PointClass::VFocus, origin: PointClass::Sl2 },
        NCase { name: "(1/9,1/9)", lambda0: 1, mu1: (1, 9), plus: true, scenario: Scenario::NA, curve: PointClass::VNode, origin: PointClass::Sl2 },
        NCase { name: "kappa1<0", lambda0: 1, mu1: (-1, 1), plus: true, scenario: Scenario::NB, curve: PointClass::VSaddle, origin: PointClass::So3 },
        NCase { name: "N-", lambda0: 1, mu1: (1, 1), plus: false, scenario: Scenario::NC, curve: PointClass::VFocus, origin: PointClass::Sl2 },
    ];
    let mut details = Vec::new();
    for c in &cases {
        details.push(check_n(c)?);
    }
    // eps < 0 on the first model: a single so3 point.
    let p = generators::n_model(t(), &ratio(1, 1), &ratio(1, 1), true);
    let before = find_singular_points(&p, -0.04, &SearchSettings::default());
    let classes: Vec<_> = before.iter().map(|r| r.class).collect();
    ensure(classes == [PointClass::So3], || format!("(1,-7) at eps = -0.04: {classes:?}"))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("{} ({:.1?})", details.join("; "), start.elapsed()))
}

fn criterion_7() -> Check {
    let p = generators::saddle_node_model(t());
    let pred = predict(&p, D).map_err(|e| e.to_string())?;
    ensure(pred.scenario == Scenario::SaddleNodeV, || format!("scenario {:?}", pred.scenario))?;
    let settings = VerifySettings::default();
    let empty = find_singular_points(&p, -0.04, &settings.search);
    ensure(empty.is_empty(), || format!("eps = -0.04: {} points", empty.len()))?;
    let obs = observe(&p, 0.04, &pred, &settings);
    ensure(obs.points.iter().all(|r| r.dimension == 1), || "isolated points on the curve side".into())?;
    let mut classes: Vec<_> = obs.curves.iter().map(|c| c.uniform_class()).collect();
    classes.sort();
    ensure(classes == [Some(PointClass::VNode), Some(PointClass::VSaddle)], || format!("curve classes {classes:?}"))?;
    for c in &obs.curves {
        let x = c.centroid[0];
        let want = if c.uniform_class() == Some(PointClass::VNode) { 0.2 } else { -0.2 };
        ensure((x - want).abs() < 1e-6, || format!("curve at x = {x}, expected {want}"))?;
    }
    let report = verify(&p, pred, &settings);
    ensure(report.verdict, || "grid verification mismatch".into())?;
    Ok(format!("eps < 0 empty; eps > 0 node curve at x = +0.2 and saddle curve at x = -0.2 ({} samples)", obs.points.len()))
}

fn criterion_8() -> Check {
    let mut rng = generators::rng(8);
    let mut ms = Vec::new();
    for i in 0..10 {
        let (p, _, m) = generators::random_a_germ(&mut rng, t());
        let q = p.pushforward(&generators::random_change(&mut rng, t())).map_err(|e| e.to_string())?;
        let cas = a_casimir(&q, D).map_err(|e| format!("germ {i}: {e}"))?;
        for (h, r) in ["x", "y", "z"].iter().zip(cas.residuals()) {
            ensure(r.is_zero(), || format!("germ {i}: P(dC, d{h}) = {r}"))?;
        }
        ms.push(m);
    }
    Ok(format!("10 germs, m = {ms:?}, all residuals zero"))
}

fn criterion_9() -> Check {
    for (i, (p, q)) in corpus().iter().enumerate() {
        for fam in [p, q] {
            let w = fam.to_pfaffian();
            let back = PoissonFamily::from_pfaffian(&w).map_err(|e| format!("structure {i}: {e}"))?;
            ensure(bracket_triplet(&back) == bracket_triplet(fam), || format!("structure {i}: round trip differs"))?;
            let dw = w.d().map_err(|e| e.to_string())?;
            let wdw = w.wedge(&dw).map_err(|e| e.to_string())?;
            ensure(wdw.kind() == DiffKind::ThreeForm, || "w^dw is not a 3-form".into())?;
            // Against the bracket-side Jacobiator, computed without forms.
            let jac = jacobiator(fam);
            ensure(wdw.comp(0) == &(-jac), || format!("structure {i}: w^dw differs from the Jacobiator"))?;
        }
    }
    Ok("60 structures: exact round trip, w^dw = -Jacobiator identically".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("normal-form soundness", criterion_1),
        ("curl symmetry", criterion_2),
        ("classification invariance", criterion_3),
        ("V criterion equivalence", criterion_4),
        ("A split model", criterion_5),
        ("N models", criterion_6),
        ("saddle-node V", criterion_7),
        ("Casimir residual", criterion_8),
        ("Pfaffian bridge", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS [{took:.1?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{took:.1?}] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
