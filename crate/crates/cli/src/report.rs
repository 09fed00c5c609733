//! Command dispatch and JSON report assembly.

use std::fmt;

use fi_jordan::analysis::{fi_rank, identity_suite, identity_suite_incidence, restrict_corner, SuiteMode};
use fi_jordan::search::search;
use fi_jordan::{
    check_map, compare_spaces, construct_dprime, cross_check, fi_ring, solve_derivations,
    solve_jordan_derivations, theorem_verdict, verify_family_conditions, AdditiveMap, DerivationKind, IncidenceRing,
    Preorder, SpaceComparison, SpaceVerdict, StructureRing, SubgroupBasis, ZmVector,
};
use serde_json::{json, Value};

use crate::instance::{Instance, FORMAT_VERSION};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    SolveDer,
    SolveJder,
    Compare,
    FiBuild,
    Verdict,
    CrossCheck,
    Identities,
    DprimeCheck,
    Search,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Self::SolveDer,
        Self::SolveJder,
        Self::Compare,
        Self::FiBuild,
        Self::Verdict,
        Self::CrossCheck,
        Self::Identities,
        Self::DprimeCheck,
        Self::Search,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SolveDer => "solve-der",
            Self::SolveJder => "solve-jder",
            Self::Compare => "compare",
            Self::FiBuild => "fi-build",
            Self::Verdict => "verdict",
            Self::CrossCheck => "cross-check",
            Self::Identities => "identities",
            Self::DprimeCheck => "dprime-check",
            Self::Search => "search",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug)]
pub enum RunError {
    Input(String),
    Budget { required: usize, budget: usize },
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(msg) => f.write_str(msg),
            Self::Budget { required, budget } => {
                write!(f, "ring of rank {required} exceeds the size budget {budget}; rerun with --budget {required} or more")
            }
        }
    }
}

impl From<fi_jordan::Error> for RunError {
    fn from(e: fi_jordan::Error) -> Self {
        match e {
            fi_jordan::Error::SizeBudget { required, budget } => Self::Budget { required, budget },
            other => Self::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub trials: usize,
    pub budget: usize,
    pub moduli: Vec<u64>,
    pub max_rank: usize,
}

/// The ring a command works on: `FI(P, R)` when a preorder is given, `R` otherwise.
struct Target {
    ring: StructureRing,
    fi: Option<IncidenceRing>,
}

fn require_ring(inst: &Instance) -> Result<&StructureRing, RunError> {
    inst.ring.as_ref().ok_or_else(|| RunError::Input("instance has no [ring] section".into()))
}

fn require_preorder(inst: &Instance) -> Result<&Preorder, RunError> {
    inst.preorder.as_ref().ok_or_else(|| RunError::Input("instance has no [preorder] section".into()))
}

fn target(inst: &Instance, budget: usize) -> Result<Target, RunError> {
    let r = require_ring(inst)?;
    let required = match &inst.preorder {
        Some(p) => fi_rank(p, r),
        None => r.rank(),
    };
    if required > budget {
        return Err(RunError::Budget { required, budget });
    }
    match &inst.preorder {
        Some(p) => {
            let fi = fi_ring(p, r)?;
            Ok(Target { ring: fi.ring().clone(), fi: Some(fi) })
        }
        None => Ok(Target { ring: r.clone(), fi: None }),
    }
}

/// Idempotent family used by the identity and `d′` checks.
fn family(inst: &Instance, t: &Target) -> (&'static str, Vec<ZmVector>) {
    if let Some(fi) = &t.fi {
        return ("class idempotents", fi.class_idempotents());
    }
    if let Some(units) = &inst.matrix_units {
        return ("diagonal matrix units", units.clone());
    }
    match t.ring.unit_vector() {
        Some(one) => ("unit", vec![one.clone()]),
        None => ("empty", Vec::new()),
    }
}

fn vector_json(v: &ZmVector) -> Value {
    json!(v.entries())
}

fn basis_json(b: &SubgroupBasis) -> Value {
    json!({
        "modulus": b.modulus(),
        "dim": b.dim(),
        "cardinality": b.cardinality().to_string(),
        "pivots": b.pivots(),
        "pivot_orders": b.pivot_orders(),
        "generators": b.generators().iter().map(vector_json).collect::<Vec<_>>(),
    })
}

/// A map as the list of basis images `d(b_0), d(b_1), …`.
fn map_json(d: &AdditiveMap) -> Value {
    json!({ "images": (0..d.rank()).map(|j| vector_json(&d.image(j))).collect::<Vec<_>>() })
}

fn comparison_json(cmp: &SpaceComparison) -> Value {
    let (verdict, witness) = match &cmp.verdict {
        SpaceVerdict::Equal => ("Equal", Value::Null),
        SpaceVerdict::ProperInclusion { witness } => ("ProperInclusion", map_json(witness)),
    };
    json!({
        "verdict": verdict,
        "derivations": basis_json(cmp.derivations.basis()),
        "jordan_derivations": basis_json(cmp.jordan_derivations.basis()),
        "witness": witness,
    })
}

fn digest(inst: &Instance) -> Value {
    let ring = inst.ring.as_ref().map(|r| {
        json!({ "modulus": r.modulus(), "rank": r.rank(), "unital": r.is_unital(), "labels": r.labels() })
    });
    let preorder = inst.preorder.as_ref().map(|p| {
        let q = p.quotient();
        let name = |i: usize| p.labels()[i].clone();
        json!({
            "elements": p.labels(),
            "relation_pairs": p.relation_pairs().count(),
            "classes": q.classes().iter().map(|c| c.iter().map(|&i| name(i)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "isolated_elements": p.isolated_elements().into_iter().map(name).collect::<Vec<_>>(),
        })
    });
    let target_rank = match (&inst.preorder, &inst.ring) {
        (Some(p), Some(r)) => Some(fi_rank(p, r)),
        (None, Some(r)) => Some(r.rank()),
        _ => None,
    };
    json!({
        "target": if inst.preorder.is_some() { "FI(P,R)" } else { "R" },
        "target_rank": target_rank,
        "coefficient_ring": ring,
        "preorder": preorder,
    })
}

fn space_report(t: &Target, kind: DerivationKind) -> Value {
    let space = match kind {
        DerivationKind::Derivation => solve_derivations(&t.ring),
        DerivationKind::JordanDerivation => solve_jordan_derivations(&t.ring),
    };
    let sound = space.generators(&t.ring).iter().all(|g| check_map(&t.ring, g, kind).is_ok());
    json!({ "kind": kind.to_string(), "space": basis_json(space.basis()), "generators_pass_direct_check": sound })
}

fn fi_build(inst: &Instance, opts: &Options) -> Result<Value, RunError> {
    require_preorder(inst)?;
    let t = target(inst, opts.budget)?;
    let fi = t.fi.as_ref().expect("preorder present");
    let p = fi.preorder();
    let q = fi.quotient();
    let name = |i: usize| p.labels()[i].clone();
    let fam = fi.class_idempotents();
    let family = verify_family_conditions(fi.ring(), &fam)?;
    let order: Vec<(usize, usize)> =
        (0..q.num_classes()).flat_map(|a| (0..q.num_classes()).map(move |b| (a, b))).filter(|&(a, b)| q.lt(a, b)).collect();
    Ok(json!({
        "rank": fi.ring().rank(),
        "pairs": fi.pairs().iter().map(|&(a, b)| [name(a), name(b)]).collect::<Vec<_>>(),
        "basis_labels": fi.ring().labels(),
        "classes": q.classes().iter().map(|c| c.iter().map(|&i| name(i)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "class_order": order,
        "unit": fi.ring().unit_vector().map(vector_json),
        "associative": fi.ring().check_associativity().is_ok(),
        "class_idempotents": fam.iter().map(vector_json).collect::<Vec<_>>(),
        "family_conditions": family,
        "structure_constants": fi.ring().table(),
    }))
}

fn identities(inst: &Instance, opts: &Options) -> Result<Value, RunError> {
    let t = target(inst, opts.budget)?;
    let (family_name, fam) = family(inst, &t);
    let space = solve_jordan_derivations(&t.ring);
    let gens = space.generators(&t.ring);
    let modes = [SuiteMode::ExhaustiveBasis, SuiteMode::Randomized { seed: opts.seed, trials: opts.trials }];
    let mut all_passed = true;
    let mut per_generator = Vec::new();
    for (i, d) in gens.iter().enumerate() {
        let mut reports = Vec::new();
        for mode in modes {
            let rep = match &t.fi {
                Some(fi) => identity_suite_incidence(fi, d, mode)?,
                None => identity_suite(&t.ring, &fam, d, mode)?,
            };
            all_passed &= rep.passed;
            reports.push(rep);
        }
        per_generator.push(json!({ "generator": i, "map": map_json(d), "exhaustive_basis": reports[0], "randomized": reports[1] }));
    }
    Ok(json!({
        "family": family_name,
        "family_size": fam.len(),
        "jordan_derivations": basis_json(space.basis()),
        "generators": per_generator,
        "all_passed": all_passed,
    }))
}

fn dprime_check(inst: &Instance, opts: &Options) -> Result<Value, RunError> {
    let t = target(inst, opts.budget)?;
    let (family_name, fam) = family(inst, &t);
    let space = solve_jordan_derivations(&t.ring);
    let gens = space.generators(&t.ring);
    let mut rows = Vec::new();
    let mut all_equal = true;
    for (i, d) in gens.iter().enumerate() {
        let dp = construct_dprime(&t.ring, &fam, d)?;
        let corners = fam
            .iter()
            .map(|e| {
                restrict_corner(&t.ring, d, e)
                    .map(|cm| check_map(cm.corner.ring(), &cm.map, DerivationKind::Derivation).is_ok())
                    .map_err(RunError::from)
            })
            .collect::<Result<Vec<bool>, _>>()?;
        let equal = &dp == d;
        all_equal &= equal;
        rows.push(json!({
            "generator": i,
            "dprime_equals_d": equal,
            "dprime_is_derivation": check_map(&t.ring, &dp, DerivationKind::Derivation).is_ok(),
            "d_is_derivation": check_map(&t.ring, d, DerivationKind::Derivation).is_ok(),
            "corner_maps_are_derivations": corners,
        }));
    }
    Ok(json!({
        "family": family_name,
        "jordan_derivations": basis_json(space.basis()),
        "generators": rows,
        "all_dprime_equal_d": all_equal,
    }))
}

fn search_report(opts: &Options) -> Result<Value, RunError> {
    let rep = search(&opts.moduli, opts.max_rank)?;
    let hits: Vec<Value> = rep
        .hits
        .iter()
        .map(|h| {
            let labels = (0..h.rank).map(|i| format!("b{i}")).collect();
            let ring = StructureRing::from_table(h.modulus, labels, h.table.clone(), None)?;
            let cmp = compare_spaces(&ring);
            Ok(json!({
                "modulus": h.modulus,
                "rank": h.rank,
                "structure_constants": h.table,
                "unit": h.unit.as_ref().map(vector_json),
                "derivations": basis_json(cmp.derivations.basis()),
                "jordan_derivations": basis_json(cmp.jordan_derivations.basis()),
                "witness": map_json(&h.witness),
            }))
        })
        .collect::<Result<_, RunError>>()?;
    Ok(json!({
        "family": format!("all associative structure tables of rank <= {} over Z/m, m in {:?}", rep.max_rank, rep.moduli),
        "tables_examined": rep.tables_examined,
        "associative": rep.associative,
        "unital": rep.unital,
        "unital_hits": rep.hits.iter().filter(|h| h.unit.is_some()).count(),
        "hits": hits,
        "summary": rep.summary,
    }))
}

/// Runs one command and returns its `results` object.
pub fn run(command: Command, inst: &Instance, opts: &Options) -> Result<Value, RunError> {
    match command {
        Command::SolveDer => Ok(space_report(&target(inst, opts.budget)?, DerivationKind::Derivation)),
        Command::SolveJder => Ok(space_report(&target(inst, opts.budget)?, DerivationKind::JordanDerivation)),
        Command::Compare => Ok(comparison_json(&compare_spaces(&target(inst, opts.budget)?.ring))),
        Command::FiBuild => fi_build(inst, opts),
        Command::Verdict => {
            let v = theorem_verdict(require_preorder(inst)?, require_ring(inst)?)?;
            Ok(serde_json::to_value(v).expect("verdict serializes"))
        }
        Command::CrossCheck => {
            let rep = cross_check(require_preorder(inst)?, require_ring(inst)?, opts.budget)?;
            Ok(json!({
                "verdict": rep.verdict,
                "fi_rank": rep.fi_rank,
                "fi": comparison_json(&rep.fi),
                "coefficient": comparison_json(&rep.coefficient),
                "consistent": rep.consistent,
                "contradiction": rep.contradiction,
            }))
        }
        Command::Identities => identities(inst, opts),
        Command::DprimeCheck => dprime_check(inst, opts),
        Command::Search => search_report(opts),
    }
}

/// The full report document.
pub fn report(command: Command, inst: &Instance, opts: &Options, results: Value) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "command": command.name(),
        "options": {
            "seed": opts.seed,
            "trials": opts.trials,
            "budget": opts.budget,
        },
        "instance": digest(inst),
        "results": results,
    })
}
