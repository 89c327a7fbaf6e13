//! Acceptance suite: one PASS/FAIL line per criterion. All tolerances are
//! exact. Exits non-zero if a criterion outside the documented list fails.

use std::collections::BTreeSet;
use std::time::Instant;

use cellres::cmcheck::strand_oracle;
use cellres::complex::AcyclicityOracle;
use cellres::constructions::{
    all_labelled_trees, chord_complex, chord_families, elongated_pyramid, ep_family, figure_fixture,
    nonisomorphic_trees, polygon_complex, polygon_family, prop48_family, pyramid, pyramid_family,
    tree_maximal_labelling, tree_resolution_trees, wheel_polytope, OrientedTree,
};
use cellres::monomial::{labelling_of, morphism_map, polarization};
use cellres::search::{
    conjecture_harness, covering_property_check, enumerate_maximal_report, is_maximal, ConjectureKind,
    HarnessParams, HarnessRow, SearchError, SearchSpace,
};
use cellres::{
    build_free_complex, check_cm_labelling, check_family_criteria, enumerate_valid_families, f_symmetry, f_vector,
    family_of, lcm_lattice, morphism_exists, CellComplex, Field, Monomial, MonomialLabelling, VertexFamily, VertexSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An instance recorded for the cross-validation criterion.
struct Instance {
    name: String,
    complex: CellComplex,
    labelling: Option<MonomialLabelling>,
    family: Option<VertexFamily>,
    maximal: bool,
}

#[derive(Default)]
struct Registry {
    instances: Vec<Instance>,
}

impl Registry {
    fn labelling(&mut self, name: &str, x: &CellComplex, l: &MonomialLabelling) {
        self.instances.push(Instance {
            name: name.to_string(),
            complex: x.clone(),
            labelling: Some(l.clone()),
            family: None,
            maximal: false,
        });
    }

    fn family(&mut self, name: &str, x: &CellComplex, f: &VertexFamily, maximal: bool) {
        self.instances.push(Instance {
            name: name.to_string(),
            complex: x.clone(),
            labelling: labelling_of(f).ok(),
            family: Some(f.clone()),
            maximal,
        });
    }
}

type Outcome = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut Registry) -> Outcome>;

/// Criteria that fail for reasons analysed in the decisions ledger. They
/// still print FAIL; only failures outside this list fail the run.
const DOCUMENTED_FAILURES: &[(usize, &str)] =
    &[(5, "the 3.4 family extends by {0,1} to a valid 9-member family, so it is not maximal")];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn valid(x: &CellComplex, f: &VertexFamily) -> Result<bool, String> {
    Ok(check_family_criteria(x, f, Field::Gf2).map_err(|e| e.to_string())?.valid)
}

fn maximal(x: &CellComplex, f: &VertexFamily) -> Result<bool, String> {
    Ok(is_maximal(x, f, Field::Gf2).map_err(|e| e.to_string())?.maximal)
}

fn maximal_search(x: &CellComplex, limit: usize) -> Result<Vec<VertexFamily>, String> {
    let space = SearchSpace::connected(x).with_max_candidates(limit);
    let report = enumerate_maximal_report(x, &space).map_err(|e| e.to_string())?;
    ensure(report.divergences.is_empty(), || format!("refinement cross-check diverged on {:?}", report.divergences))?;
    Ok(report.families)
}

fn same_family_set(got: &[VertexFamily], want: &[VertexFamily]) -> bool {
    got.len() == want.len() && want.iter().all(|w| got.iter().any(|g| g.same_sets(w)))
}

fn criterion_1(reg: &mut Registry) -> Outcome {
    let mut count = 0;
    for n in 1..=8 {
        for t in nonisomorphic_trees(n) {
            let x = t.as_complex();
            let got = maximal_search(&x, 1000)?;
            let want = family_of(&tree_maximal_labelling(&t)).map_err(|e| e.to_string())?;
            ensure(got.len() == 1 && got[0].same_sets(&want), || {
                format!("tree {:?}: got {} families", t.edges(), got.len())
            })?;
            reg.family(&format!("tree {:?}", t.edges()), &x, &got[0], true);
            count += 1;
        }
    }
    ensure(count == 48, || format!("expected 48 trees, enumerated {count}"))?;
    Ok(format!("{count} trees on at most 8 vertices, each with exactly one maximal family"))
}

/// Trees whose labelled complex passes the full CM check.
fn trees_by_cm_check(l: &MonomialLabelling) -> Result<BTreeSet<BTreeSet<(usize, usize)>>, String> {
    let mut out = BTreeSet::new();
    for t in all_labelled_trees(l.n_vertices()) {
        let v = check_cm_labelling(&t.as_complex(), l, Field::Rational).map_err(|e| e.to_string())?;
        if v.is_cm {
            out.insert(t.edge_set());
        }
    }
    Ok(out)
}

fn tree_sets_agree(name: &str, l: &MonomialLabelling) -> Result<usize, String> {
    let by_check = trees_by_cm_check(l)?;
    let by_construction: BTreeSet<_> =
        tree_resolution_trees(l).map_err(|e| e.to_string())?.trees.iter().map(OrientedTree::edge_set).collect();
    ensure(by_check == by_construction, || {
        format!("{name}: {} trees pass the CM check, {} pass the construction", by_check.len(), by_construction.len())
    })?;
    Ok(by_check.len())
}

/// A random codimension-two ideal obtained by specializing the maximal
/// labelling of a random tree, kept only if some tree resolves it.
fn random_codim_two(rng: &mut ChaCha8Rng) -> Option<MonomialLabelling> {
    let n = rng.gen_range(3..=6);
    let trees = all_labelled_trees(n);
    let t = &trees[rng.gen_range(0..trees.len())];
    let big = tree_maximal_labelling(t);
    let r = 3;
    let images: Vec<Monomial> = (0..big.n_variables())
        .map(|_| {
            let mut m = Monomial::one(r);
            m.0[rng.gen_range(0..r)] += rng.gen_range(1..=2);
            m
        })
        .collect();
    let labels: Vec<Monomial> = big
        .labels()
        .iter()
        .map(|m| {
            let mut out = Monomial::one(r);
            for (p, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    out = out.mul(&images[p]);
                }
            }
            out
        })
        .collect();
    let used: Vec<usize> = (0..r).filter(|&p| labels.iter().any(|m| m.0[p] > 0)).collect();
    let labels = labels.into_iter().map(|m| Monomial(used.iter().map(|&p| m.0[p]).collect())).collect();
    let l = MonomialLabelling::new(used.len(), labels).ok()?;
    if cellres::codimension(&l).ok()? != 2 {
        return None;
    }
    let resolves = all_labelled_trees(n)
        .iter()
        .any(|t| check_cm_labelling(&t.as_complex(), &l, Field::Rational).is_ok_and(|v| v.is_cm));
    resolves.then_some(l)
}

fn criterion_2(reg: &mut Registry) -> Outcome {
    let mut checked = 0;
    for n in 1..=5u32 {
        let labels = (0..=n).map(|k| Monomial(vec![n - k, k])).collect();
        let l = MonomialLabelling::new(2, labels).map_err(|e| e.to_string())?;
        let trees = tree_sets_agree(&format!("powers of degree {n}"), &l)?;
        ensure(trees == 1, || format!("degree {n}: expected the unique path, got {trees} trees"))?;
        let path = OrientedTree::new(l.n_vertices(), (0..n as usize).map(|i| (i, i + 1)).collect()).unwrap();
        reg.labelling(&format!("powers of degree {n}"), &path.as_complex(), &l);
        checked += 1;
    }
    for n in 2..=5usize {
        let supports: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&p| p != i).collect()).collect();
        let refs: Vec<&[usize]> = supports.iter().map(Vec::as_slice).collect();
        let l = MonomialLabelling::from_supports(n, &refs).map_err(|e| e.to_string())?;
        let trees = tree_sets_agree(&format!("co-variables n={n}"), &l)?;
        let all = n.pow(n.saturating_sub(2) as u32);
        ensure(trees == all, || format!("co-variables n={n}: expected all {all} trees, got {trees}"))?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut random = 0;
    let mut attempts = 0;
    while random < 20 {
        attempts += 1;
        ensure(attempts < 5000, || "could not generate 20 random codimension-two ideals".into())?;
        if let Some(l) = random_codim_two(&mut rng) {
            tree_sets_agree(&format!("random ideal {:?}", l.labels()), &l)?;
            let canonical = tree_resolution_trees(&l).map_err(|e| e.to_string())?.canonical;
            reg.labelling(&format!("random ideal {random}"), &canonical.as_complex(), &l);
            random += 1;
            checked += 1;
        }
    }
    Ok(format!("{checked} ideals ({random} random): CM-check tree sets equal construction tree sets"))
}

fn criterion_3(reg: &mut Registry) -> Outcome {
    for n in [5, 7] {
        let x = polygon_complex(n).map_err(|e| e.to_string())?;
        let space = SearchSpace::connected(&x);
        let got = enumerate_valid_families(&x, &space).map_err(|e| e.to_string())?;
        let want = polygon_family(n).map_err(|e| e.to_string())?;
        ensure(got.len() == 1 && got[0].same_sets(&want), || format!("{n}-gon: got {got:?}"))?;
        reg.family(&format!("{n}-gon"), &x, &want, true);
    }
    for n in [4, 6] {
        let x = polygon_complex(n).map_err(|e| e.to_string())?;
        let got = enumerate_valid_families(&x, &SearchSpace::connected(&x)).map_err(|e| e.to_string())?;
        ensure(got.is_empty(), || format!("{n}-gon: expected no families, got {}", got.len()))?;
    }
    Ok("5- and 7-gon have exactly the string family; 4- and 6-gon have none".into())
}

fn criterion_4(reg: &mut Registry) -> Outcome {
    let mut notes = Vec::new();
    for (n, a) in [(5, 2), (6, 2), (6, 3), (7, 2), (7, 3)] {
        let x = chord_complex(n, a).map_err(|e| e.to_string())?;
        let limit = match enumerate_valid_families(&x, &SearchSpace::connected(&x)) {
            Err(SearchError::Guard { candidates, .. }) => {
                notes.push(format!("({n},{a}) needs {candidates} candidates"));
                candidates
            }
            _ => SearchSpace::connected(&x).max_candidates,
        };
        let got = maximal_search(&x, limit)?;
        let (f1, f2) = chord_families(n, a).map_err(|e| e.to_string())?;
        ensure(same_family_set(&got, &[f1.clone(), f2.clone()]), || format!("({n},{a}): got {got:?}"))?;
        ensure(f1.len() == n + 1 && f2.len() == n + 1, || format!("({n},{a}): sizes {} {}", f1.len(), f2.len()))?;
        reg.family(&format!("chord ({n},{a}) F1"), &x, &f1, true);
        reg.family(&format!("chord ({n},{a}) F2"), &x, &f2, true);
    }
    let guard = if notes.is_empty() { "default guard".to_string() } else { notes.join(", ") };
    Ok(format!("five chord complexes give exactly F1 and F2 of size n+1 ({guard})"))
}

fn criterion_5(reg: &mut Registry) -> Outcome {
    let fx: Vec<_> = ["3.1", "3.2", "3.3", "3.4"].iter().map(|id| figure_fixture(id).unwrap()).collect();
    let mut problems = Vec::new();
    for f in &fx {
        let v = check_cm_labelling(&f.complex, &f.labelling, Field::Rational).map_err(|e| e.to_string())?;
        if !v.is_cm {
            problems.push(format!("fixture {} is not CM: {:?}", f.id, v.witness));
        }
        reg.labelling(&format!("fixture {}", f.id), &f.complex, &f.labelling);
    }
    let x = &fx[0].complex;
    let f32 = family_of(&fx[1].labelling).map_err(|e| e.to_string())?;
    let f33 = family_of(&fx[2].labelling).map_err(|e| e.to_string())?;
    let f34 = family_of(&fx[3].labelling).map_err(|e| e.to_string())?;
    if maximal(x, &f32)? {
        problems.push("fixture 3.2 family is maximal".into());
    }
    if f34.len() != 8 {
        problems.push(format!("fixture 3.4 family has {} members", f34.len()));
    }
    let v34 = is_maximal(x, &f34, Field::Gf2).map_err(|e| e.to_string())?;
    if !v34.maximal {
        problems.push(format!("fixture 3.4 family is not maximal: {:?}", v34.witness));
    }
    reg.family("fixture 3.2 family", x, &f32, false);
    reg.family("fixture 3.3 family", x, &f33, false);
    reg.family("fixture 3.4 family", x, &f34, v34.maximal);
    let m = |a: &VertexFamily, b: &VertexFamily| morphism_exists(a, b).map_err(|e| e.to_string());
    if !(m(&f34, &f32)? && m(&f34, &f33)?) {
        problems.push("missing morphism out of fixture 3.4".into());
    }
    // 3.4 → 3.2 → 3.1 through the depolarizing substitution
    let to32 = morphism_map(&f34, &f32).map_err(|e| e.to_string())?.ok_or("no map to 3.2")?;
    let pol = polarization(&fx[0].labelling);
    if pol.labelling != fx[1].labelling {
        problems.push("fixture 3.2 is not the polarization of 3.1".into());
    }
    let through = to32.compose(&pol.depolarize).map_err(|e| e.to_string())?;
    let l34 = labelling_of(&f34).map_err(|e| e.to_string())?;
    let image = through.apply_all(l34.labels()).map_err(|e| e.to_string())?;
    if image != fx[0].labelling.labels() {
        problems.push(format!("composite sends 3.4 to {image:?}"));
    }
    if problems.is_empty() {
        Ok("fixtures 3.1-3.4 are CM; 3.2 not maximal; 3.4 maximal with 8 members; 3.4 maps onto 3.1".into())
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_6(reg: &mut Registry) -> Outcome {
    let pent = polygon_complex(5).map_err(|e| e.to_string())?;
    let chord = chord_complex(5, 2).map_err(|e| e.to_string())?;
    let (f1, f2) = chord_families(5, 2).map_err(|e| e.to_string())?;
    let hex = figure_fixture("3.2").unwrap();
    let f32 = family_of(&hex.labelling).map_err(|e| e.to_string())?;
    let cases = [
        ("pentagon", pent, polygon_family(5).map_err(|e| e.to_string())?, true),
        ("chord F1", chord.clone(), f1, true),
        ("chord F2", chord, f2, true),
        ("hexagon 3.2", hex.complex.clone(), f32, false),
    ];
    for (name, x, f, expect_max) in cases {
        let px = pyramid(&x).map_err(|e| e.to_string())?;
        let pf = pyramid_family(&f).map_err(|e| e.to_string())?;
        ensure(valid(&x, &f)? && valid(&px, &pf)?, || format!("{name}: pyramid family fails the criteria"))?;
        let (down, up) = (maximal(&x, &f)?, maximal(&px, &pf)?);
        ensure(down == expect_max && up == down, || format!("{name}: maximal below {down}, above {up}"))?;
        reg.family(&format!("pyramid over {name}"), &px, &pf, up);
    }
    Ok("pyramid families valid; maximality preserved and reflected on 4 families".into())
}

fn criterion_7(reg: &mut Registry) -> Outcome {
    let ep5 = elongated_pyramid(&polygon_complex(5).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let f5 = ep_family(&polygon_family(5).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(valid(&ep5, &f5)?, || "EP(pentagon) family fails the criteria".into())?;
    ensure(maximal(&ep5, &f5)?, || "EP(pentagon) family is not maximal".into())?;
    reg.family("EP(pentagon)", &ep5, &f5, true);

    let ep3 = elongated_pyramid(&polygon_complex(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let f3 = ep_family(&polygon_family(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(valid(&ep3, &f3)?, || "EP(triangle) family fails the criteria".into())?;
    ensure(f_vector(&ep3) == [7, 12, 7, 1], || format!("EP(triangle) f-vector {:?}", f_vector(&ep3)))?;
    let m3 = maximal(&ep3, &f3)?;
    reg.family("EP(triangle)", &ep3, &f3, m3);
    Ok(format!("EP(pentagon) valid and maximal; EP(triangle) valid (maximal: {m3}) with f = (7,12,7,1)"))
}

fn criterion_8(reg: &mut Registry) -> Outcome {
    let w = wheel_polytope(4).map_err(|e| e.to_string())?;
    let f = prop48_family();
    ensure(valid(&w, &f)? && maximal(&w, &f)?, || "wheel family not valid and maximal".into())?;
    ensure(f_vector(&w) == [9, 16, 9, 1] && f_symmetry(&w), || format!("wheel f-vector {:?}", f_vector(&w)))?;
    reg.family("wheel(4)", &w, &f, true);
    for id in ["4.4", "4.6", "4.7", "4.8"] {
        let fx = figure_fixture(id).unwrap();
        let v = check_cm_labelling(&fx.complex, &fx.labelling, Field::Rational).map_err(|e| e.to_string())?;
        ensure(v.is_cm && v.codimension == 4, || format!("fixture {id}: {v:?}"))?;
        let ranks = build_free_complex(&fx.complex, &fx.labelling).map_err(|e| e.to_string())?.ranks();
        ensure(ranks == [1, 9, 16, 9, 1], || format!("fixture {id}: ranks {ranks:?}"))?;
        reg.labelling(&format!("fixture {id}"), &fx.complex, &fx.labelling);
    }
    Ok("wheel family valid and maximal, f = (9,16,9,1); fixtures 4.4-4.8 CM with ranks (1,9,16,9,1)".into())
}

fn criterion_9(reg: &Registry) -> Outcome {
    let (mut points, mut subsets, mut covering) = (0, 0, 0);
    for inst in &reg.instances {
        let x = &inst.complex;
        let gf2 = AcyclicityOracle::new(x, Field::Gf2).map_err(|e| e.to_string())?;
        let q = AcyclicityOracle::new(x, Field::Rational).map_err(|e| e.to_string())?;
        for bits in 0u64..(1 << x.n_vertices()) {
            let w = VertexSet::from_bits(bits);
            ensure(gf2.is_acyclic(w) == q.is_acyclic(w), || format!("{}: fields disagree on {w}", inst.name))?;
            subsets += 1;
        }
        if let Some(l) = &inst.labelling {
            let fc = build_free_complex(x, l).map_err(|e| format!("{}: {e}", inst.name))?;
            ensure(fc.composition_defect().is_none(), || format!("{}: d∘d ≠ 0", inst.name))?;
            for b in lcm_lattice(l).points {
                let ok = strand_oracle(x, l, &b, Field::Rational).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{}: strand at {b} disagrees with homology", inst.name))?;
                points += 1;
            }
        }
        if let (Some(f), Some(l)) = (&inst.family, &inst.labelling) {
            let family_ok = valid(x, f)?;
            let cm = check_cm_labelling(x, l, Field::Rational).map_err(|e| e.to_string())?.is_cm;
            ensure(family_ok == cm, || format!("{}: family criteria {family_ok}, labelling CM {cm}", inst.name))?;
        }
        if let (Some(f), true) = (&inst.family, inst.maximal) {
            let r = covering_property_check(x, f, Field::Gf2).map_err(|e| e.to_string())?;
            ensure(r.ok, || format!("{}: covering property fails: {:?}", inst.name, r.witness))?;
            covering += 1;
        }
    }
    Ok(format!(
        "{} instances: {points} strands, {subsets} restrictions over two fields, {covering} covering checks",
        reg.instances.len()
    ))
}

fn criterion_10() -> Outcome {
    let params = HarnessParams::default();
    let mut flagged = Vec::new();
    for kind in [ConjectureKind::ChordCount, ConjectureKind::SelfDual] {
        let report = conjecture_harness(kind, &params).map_err(|e| e.to_string())?;
        println!("    table {}:", serde_json::to_value(kind).unwrap().as_str().unwrap());
        for row in &report.rows {
            let mark = if row.is_counterexample() { "COUNTEREXAMPLE" } else { "ok" };
            match row {
                HarnessRow::Chords { instance, expected, family_sizes, .. } => {
                    println!("      [{mark}] {instance}: expected {expected}, maximal family sizes {family_sizes:?}")
                }
                HarnessRow::Polytope { instance, f_vector, symmetric, admits_valid_family, evidence, .. } => println!(
                    "      [{mark}] {instance}: f = {f_vector:?}, symmetric {symmetric}, admits {admits_valid_family:?} ({evidence})"
                ),
                HarnessRow::Skipped { instance, reason } => println!("      [skipped] {instance}: {reason}"),
            }
        }
        flagged.extend(report.counterexamples.iter().map(|c| format!("{kind:?}: {c}")));
    }
    for c in &flagged {
        println!("    FLAG counterexample {c}");
    }
    Ok(format!("report only; tables emitted, {} counterexample(s) flagged", flagged.len()))
}

fn main() {
    let mut reg = Registry::default();
    let criteria: Vec<(usize, &str, Criterion)> = vec![
        (1, "tree uniqueness", Box::new(criterion_1)),
        (2, "tree construction completeness", Box::new(criterion_2)),
        (3, "polygons", Box::new(criterion_3)),
        (4, "chord classification", Box::new(criterion_4)),
        (5, "hexagon chain", Box::new(criterion_5)),
        (6, "pyramid", Box::new(criterion_6)),
        (7, "elongated pyramid", Box::new(criterion_7)),
        (8, "wheel polytope", Box::new(criterion_8)),
        (9, "cross-validation", Box::new(|r: &mut Registry| criterion_9(r))),
        (10, "conjecture evidence", Box::new(|_: &mut Registry| criterion_10())),
    ];
    let mut failures = 0;
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run(&mut reg);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {id:>2} {name}: PASS - {msg} [{secs:.1}s]"),
            Err(msg) => {
                failures += 1;
                let note = match DOCUMENTED_FAILURES.iter().find(|(k, _)| *k == id) {
                    Some((_, why)) => format!(" (documented: {why})"),
                    None => {
                        unexpected += 1;
                        String::new()
                    }
                };
                println!("criterion {id:>2} {name}: FAIL - {msg}{note} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed, {unexpected} unexpected", 10 - failures);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
