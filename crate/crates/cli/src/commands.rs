use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cellres::cmcheck::FamilyReport;
use cellres::complex::reduced_homology_on;
use cellres::constructions::{
    bipyramid, chord_complex, chord_families, dihedral_group, elongated_pyramid, ep_family, figure_fixture,
    polygon_complex, polygon_family, prop48_family, pyramid, pyramid_family, subdivided_polygon,
    tree_maximal_labelling, tree_resolution_trees, wheel_polytope, OrientedTree, CATALOGUE,
};
use cellres::monomial::{labelling_of, morphism_map, polarization};
use cellres::search::{
    conjecture_harness, enumerate_maximal_report, is_maximal, ConjectureKind, HarnessParams, SearchError,
};
use cellres::{
    build_free_complex, check_cm_labelling, check_family_criteria, enumerate_valid_families, morphism_exists,
    refinement_compare, validate_complex, CellComplex, Field, MonomialLabelling, SearchSpace, VertexFamily, VertexSet,
};
use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{CliError, Command, Common, Outcome};

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn search_err(e: SearchError) -> CliError {
    match e {
        SearchError::Guard { .. } => CliError::Guard(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

/// Reads and parses JSON inputs, remembering their hashes.
#[derive(Default)]
struct Inputs {
    seen: Vec<(String, PathBuf, String)>,
}

impl Inputs {
    fn load<T: DeserializeOwned>(&mut self, role: &str, path: &Path) -> Result<T, CliError> {
        let bytes =
            std::fs::read(path).map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        let hash = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.seen.push((role.to_string(), path.to_path_buf(), hash));
        let bad = |e: serde_json::Error| CliError::Io { path: path.to_path_buf(), message: e.to_string() };
        let mut value: Value = serde_json::from_slice(&bytes).map_err(bad)?;
        // accept the output of another cellres command as input
        if value.get("command").is_some() {
            if let Some(inner) = value.get_mut("result") {
                value = inner.take();
            }
        }
        serde_json::from_value(value).map_err(bad)
    }

    fn complex(&mut self, path: &Path) -> Result<CellComplex, CliError> {
        let x: CellComplex = self.load("complex", path)?;
        let problems = validate_complex(&x);
        if !problems.is_empty() {
            return Err(CliError::Input(format!("{}: invalid complex: {problems:?}", path.display())));
        }
        Ok(x)
    }

    fn finish(self, result: Value, negative: bool) -> Outcome {
        Outcome { result, negative, inputs: self.seen }
    }
}

fn check_family_size(x: &CellComplex, f: &VertexFamily) -> Result<(), CliError> {
    if f.n() != x.n_vertices() {
        return Err(CliError::Input(format!("family has {} vertices, complex has {}", f.n(), x.n_vertices())));
    }
    Ok(())
}

pub fn run(command: &Command, common: &Common) -> Result<Outcome, CliError> {
    match command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a, common.field),
        Command::Enumerate(a) => enumerate(a, common.field),
        Command::MaximalCheck(a) => maximal_check(a, common.field),
        Command::Homology(a) => homology(a, common.field),
        Command::Betti(a) => betti(a),
        Command::Morphism(a) => morphism(a),
        Command::Polarize(a) => polarize(a),
        Command::Conjecture(a) => conjecture(a, common.field),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Polygon,
    Chord,
    Subdivided,
    PolygonFamily,
    ChordFamilies,
    Pyramid,
    PyramidFamily,
    ElongatedPyramid,
    EpFamily,
    Wheel,
    WheelFamily,
    Bipyramid,
    Tree,
    TreeResolutions,
    Fixture,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// What to build.
    #[arg(value_enum, required_unless_present = "list")]
    pub kind: Option<ConstructKind>,
    /// List the fixture catalogue.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    /// Chords as `i-j` pairs separated by commas.
    #[arg(long)]
    pub chords: Option<String>,
    /// Tree edges as `s-t` pairs separated by commas.
    #[arg(long)]
    pub edges: Option<String>,
    /// Fixture id, e.g. 3.4.
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long)]
    pub complex: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<PathBuf>,
    #[arg(long)]
    pub labelling: Option<PathBuf>,
    /// Also write every catalogued fixture into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("missing --{flag}")))
}

fn need_path<'a>(v: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    v.as_deref().ok_or_else(|| CliError::Input(format!("missing --{flag}")))
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.trim().split_once('-').ok_or_else(|| CliError::Input(format!("bad pair `{p}`")))?;
            Ok((a.parse().map_err(input_err)?, b.parse().map_err(input_err)?))
        })
        .collect()
}

fn construct(a: &ConstructArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.clone(), message: e.to_string() })?;
        for (id, _) in CATALOGUE {
            let fx = figure_fixture(id).map_err(input_err)?;
            let path = dir.join(format!("figure-{id}.json"));
            let text = serde_json::to_string_pretty(&fx).expect("fixture serializes") + "\n";
            std::fs::write(&path, text).map_err(|e| CliError::Io { path, message: e.to_string() })?;
        }
    }
    if a.list {
        let list: Vec<Value> = CATALOGUE.iter().map(|(id, d)| json!({ "id": id, "description": d })).collect();
        return Ok(inputs.finish(json!({ "fixtures": list }), false));
    }
    let kind = a.kind.expect("clap requires a kind without --list");
    let result = match kind {
        ConstructKind::Polygon => to_value(&polygon_complex(need(a.n, "n")?).map_err(input_err)?),
        ConstructKind::Chord => to_value(&chord_complex(need(a.n, "n")?, need(a.a, "a")?).map_err(input_err)?),
        ConstructKind::Subdivided => {
            let chords = parse_pairs(a.chords.as_deref().unwrap_or(""))?;
            to_value(&subdivided_polygon(need(a.n, "n")?, &chords).map_err(input_err)?)
        }
        ConstructKind::PolygonFamily => to_value(&polygon_family(need(a.n, "n")?).map_err(input_err)?),
        ConstructKind::ChordFamilies => {
            let (f1, f2) = chord_families(need(a.n, "n")?, need(a.a, "a")?).map_err(input_err)?;
            json!({ "families": [to_value(&f1), to_value(&f2)] })
        }
        ConstructKind::Pyramid => {
            let x = inputs.complex(need_path(&a.complex, "complex")?)?;
            to_value(&pyramid(&x).map_err(input_err)?)
        }
        ConstructKind::PyramidFamily => {
            let f: VertexFamily = inputs.load("family", need_path(&a.family, "family")?)?;
            to_value(&pyramid_family(&f).map_err(input_err)?)
        }
        ConstructKind::ElongatedPyramid => {
            let x = inputs.complex(need_path(&a.complex, "complex")?)?;
            to_value(&elongated_pyramid(&x).map_err(input_err)?)
        }
        ConstructKind::EpFamily => {
            let f: VertexFamily = inputs.load("family", need_path(&a.family, "family")?)?;
            to_value(&ep_family(&f).map_err(input_err)?)
        }
        ConstructKind::Wheel => to_value(&wheel_polytope(need(a.n, "n")?).map_err(input_err)?),
        ConstructKind::WheelFamily => to_value(&prop48_family()),
        ConstructKind::Bipyramid => to_value(&bipyramid(need(a.n, "n")?).map_err(input_err)?),
        ConstructKind::Tree => {
            let edges = parse_pairs(a.edges.as_deref().unwrap_or(""))?;
            let n = edges.len() + 1;
            let t = OrientedTree::new(n, edges).map_err(input_err)?;
            json!({ "complex": to_value(&t.as_complex()), "labelling": to_value(&tree_maximal_labelling(&t)) })
        }
        ConstructKind::TreeResolutions => {
            let l: MonomialLabelling = inputs.load("labelling", need_path(&a.labelling, "labelling")?)?;
            to_value(&tree_resolution_trees(&l).map_err(input_err)?)
        }
        ConstructKind::Fixture => {
            let id = a.id.as_deref().ok_or_else(|| CliError::Input("missing --id".into()))?;
            to_value(&figure_fixture(id).map_err(input_err)?)
        }
    };
    Ok(inputs.finish(result, false))
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub labelling: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<PathBuf>,
}

fn verify(a: &VerifyArgs, field: Field) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let x = inputs.complex(&a.complex)?;
    let (family_report, labelling): (Option<FamilyReport>, Option<MonomialLabelling>) = match (&a.labelling, &a.family) {
        (Some(p), _) => (None, Some(inputs.load("labelling", p)?)),
        (None, Some(p)) => {
            let f: VertexFamily = inputs.load("family", p)?;
            check_family_size(&x, &f)?;
            let report = check_family_criteria(&x, &f, field).map_err(input_err)?;
            // an uncovering family has no labelling and is simply not CM
            (Some(report), labelling_of(&f).ok())
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let verdict = match &labelling {
        Some(l) => Some(check_cm_labelling(&x, l, field).map_err(input_err)?),
        None => None,
    };
    let is_cm = verdict.as_ref().is_some_and(|v| v.is_cm);
    let result = json!({
        "is_cm": is_cm,
        "verdict": verdict.as_ref().map(to_value),
        "family_report": family_report.as_ref().map(to_value),
    });
    Ok(inputs.finish(result, !is_cm))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Symmetry {
    None,
    /// The polygon symmetries that are automorphisms of the complex.
    Dihedral,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Keep only maximal families.
    #[arg(long)]
    pub maximal: bool,
    #[arg(long, value_enum, default_value = "none")]
    pub symmetry: Symmetry,
    /// Raise the candidate guard.
    #[arg(long)]
    pub max_candidates: Option<usize>,
}

fn enumerate(a: &EnumerateArgs, field: Field) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let x = inputs.complex(&a.complex)?;
    let mut space = SearchSpace::connected(&x).with_field(field);
    if let Some(limit) = a.max_candidates {
        space = space.with_max_candidates(limit);
    }
    if a.symmetry == Symmetry::Dihedral {
        let group: Vec<Vec<usize>> =
            dihedral_group(x.n_vertices()).into_iter().filter(|p| x.is_automorphism(p)).collect();
        space = space.with_symmetry(&x, group).map_err(search_err)?;
    }
    let result = if a.maximal {
        let report = enumerate_maximal_report(&x, &space).map_err(search_err)?;
        json!({
            "count": report.families.len(),
            "families": to_value(&report.families),
            "valid_families": report.valid,
            "reduced_families": report.reduced,
            "refinement_divergences": to_value(&report.divergences),
        })
    } else {
        let fams = enumerate_valid_families(&x, &space).map_err(search_err)?;
        json!({ "count": fams.len(), "families": to_value(&fams) })
    };
    Ok(inputs.finish(result, false))
}

#[derive(Args, Debug)]
pub struct MaximalArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub family: PathBuf,
}

fn maximal_check(a: &MaximalArgs, field: Field) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let x = inputs.complex(&a.complex)?;
    let f: VertexFamily = inputs.load("family", &a.family)?;
    check_family_size(&x, &f)?;
    match is_maximal(&x, &f, field) {
        Ok(v) => {
            let negative = !v.maximal;
            Ok(inputs.finish(to_value(&v), negative))
        }
        Err(SearchError::Precondition(msg)) => {
            Ok(inputs.finish(json!({ "maximal": false, "precondition_failed": msg }), true))
        }
        Err(e) => Err(search_err(e)),
    }
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Restrict to these vertices, separated by commas.
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<usize>>,
}

fn homology(a: &HomologyArgs, field: Field) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let x = inputs.complex(&a.complex)?;
    let w = match &a.subset {
        Some(vs) => {
            if let Some(&v) = vs.iter().find(|&&v| v >= x.n_vertices()) {
                return Err(CliError::Input(format!("vertex {v} out of range")));
            }
            vs.iter().copied().collect()
        }
        None => VertexSet::full(x.n_vertices()),
    };
    let report = reduced_homology_on(&x, w, field).map_err(input_err)?;
    Ok(inputs.finish(json!({ "subset": to_value(&w), "homology": to_value(&report) }), false))
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub labelling: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<PathBuf>,
}

fn betti(a: &BettiArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let x = inputs.complex(&a.complex)?;
    let l: MonomialLabelling = match (&a.labelling, &a.family) {
        (Some(p), _) => inputs.load("labelling", p)?,
        (None, Some(p)) => {
            let f: VertexFamily = inputs.load("family", p)?;
            check_family_size(&x, &f)?;
            labelling_of(&f).map_err(input_err)?
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let fc = build_free_complex(&x, &l).map_err(input_err)?;
    let mut graded: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for ((i, deg), count) in fc.graded_betti() {
        graded.entry(i.to_string()).or_default().insert(deg.to_string(), count);
    }
    Ok(inputs.finish(json!({ "ranks": fc.ranks(), "graded_betti": graded }), false))
}

#[derive(Args, Debug)]
pub struct MorphismArgs {
    /// Source family F.
    #[arg(long)]
    pub from: PathBuf,
    /// Target family G.
    #[arg(long)]
    pub to: PathBuf,
}

fn morphism(a: &MorphismArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let f: VertexFamily = inputs.load("from", &a.from)?;
    let g: VertexFamily = inputs.load("to", &a.to)?;
    let exists = morphism_exists(&f, &g).map_err(input_err)?;
    let map = morphism_map(&f, &g).map_err(input_err)?;
    let relation = refinement_compare(&f, &g).map_err(input_err)?;
    let result = json!({ "exists": exists, "substitution": map.as_ref().map(to_value), "refinement": to_value(&relation) });
    Ok(inputs.finish(result, !exists))
}

#[derive(Args, Debug)]
pub struct PolarizeArgs {
    #[arg(long)]
    pub labelling: PathBuf,
}

fn polarize(a: &PolarizeArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let l: MonomialLabelling = inputs.load("labelling", &a.labelling)?;
    Ok(inputs.finish(to_value(&polarization(&l)), false))
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    /// 3.10 (chord count) or 4.2 (self-duality).
    pub which: String,
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub max_chords: Option<usize>,
    #[arg(long)]
    pub max_wheel: Option<usize>,
    #[arg(long)]
    pub max_candidates: Option<usize>,
}

fn conjecture(a: &ConjectureArgs, field: Field) -> Result<Outcome, CliError> {
    let kind: ConjectureKind = a.which.parse().map_err(search_err)?;
    let d = HarnessParams::default();
    let params = HarnessParams {
        max_n: a.max_n.unwrap_or(d.max_n),
        max_chords: a.max_chords.unwrap_or(d.max_chords),
        max_wheel: a.max_wheel.unwrap_or(d.max_wheel),
        max_candidates: a.max_candidates.unwrap_or(d.max_candidates),
        field,
    };
    let report = conjecture_harness(kind, &params).map_err(search_err)?;
    Ok(Inputs::default().finish(to_value(&report), false))
}
