//! Executes validated jobs and assembles reports.

use std::collections::BTreeMap;
use std::fmt;

use flagbord_core::bundle::{
    flag_bundle_ring, mode_coherence, principal_bundle_ring, principal_bundle_ring_by_characters,
    rank_report, CharacteristicMap, Mode, PrincipalBundleSpec, RingPresentation,
};
use flagbord_core::coinv::{CoinvariantAlgebra, Poincare};
use flagbord_core::fgl::FormalGroupLaw;
use flagbord_core::oracle::{
    coinvariant_dimensions_by_kernel, compare_lazard_routes, fgl_axiom_residuals,
};
use flagbord_core::poly::GradedPolynomial;
use flagbord_core::weyl::{build_root_datum, enumerate_weyl, parabolic_weyl, RootDatum};
use flagbord_core::Error;
use serde_json::{json, Value};

use crate::job::{Job, Task};

/// Failure while running a job, with the JSON path it relates to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunError {
    /// Bad input detected only while computing.
    Validation { path: String, message: String },
    /// An internal cross-check disagreed.
    Consistency { path: String, message: String },
    Internal { path: String, message: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation { .. } => 1,
            RunError::Consistency { .. } => 2,
            RunError::Internal { .. } => 3,
        }
    }

    fn at(path: &str, e: Error) -> RunError {
        let path = path.to_string();
        let message = e.to_string();
        match e {
            Error::Parameter(_) | Error::Parse { .. } => RunError::Validation { path, message },
            Error::Consistency(_) => RunError::Consistency { path, message },
            Error::Structural(_) => RunError::Internal { path, message },
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, path, message) = match self {
            RunError::Validation { path, message } => ("invalid job", path, message),
            RunError::Consistency { path, message } => ("consistency failure", path, message),
            RunError::Internal { path, message } => ("internal error", path, message),
        };
        write!(f, "{kind} at {path}: {message}")
    }
}

impl std::error::Error for RunError {}

/// One two-route comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub main: String,
    pub oracle: String,
    pub ok: bool,
}

impl Check {
    fn new(name: &str, main: impl fmt::Display, oracle: impl fmt::Display) -> Check {
        let (main, oracle) = (main.to_string(), oracle.to_string());
        Check {
            name: name.into(),
            ok: main == oracle,
            main,
            oracle,
        }
    }

    fn line(&self) -> String {
        let verdict = if self.ok { "OK" } else { "MISMATCH" };
        format!("{}: main {}, oracle {}, {verdict}", self.name, self.main, self.oracle)
    }

    fn to_value(&self) -> Value {
        json!({"name": self.name, "main": self.main, "oracle": self.oracle, "ok": self.ok})
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub value: Value,
    pub text: String,
    /// Oracle comparisons, if any were run.
    pub checks: Vec<Check>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.value).expect("report serializes")
    }
}

type RunResult<T> = Result<T, RunError>;

pub fn run_job(job: &Job) -> RunResult<Report> {
    match job.task {
        Task::Coinv => run_coinv(job),
        Task::Fgl => run_fgl(job),
        Task::Flag => run_flag(job),
        Task::Principal => run_principal(job),
        Task::Oracle => run_oracle(job),
    }
}

fn datum_of(job: &Job) -> RunResult<RootDatum> {
    let g = job.group.as_ref().ok_or_else(|| RunError::Validation {
        path: "/group".into(),
        message: "missing required field for this task".into(),
    })?;
    build_root_datum(g.group_type(), g.rank).map_err(|e| RunError::at("/group", e))
}

fn base_of(job: &Job) -> RunResult<RingPresentation> {
    let name = if job.base.generators.is_empty() && job.base.relations.is_empty() {
        "point"
    } else {
        "X"
    };
    let rels: Vec<&str> = job.base.relations.iter().map(String::as_str).collect();
    RingPresentation::base(name, job.mode, job.truncation_degree, job.base.generators(), &rels)
        .map_err(|e| RunError::at("/base", e))
}

fn cmap_of(job: &Job, base: &RingPresentation, count: usize) -> RunResult<CharacteristicMap> {
    match &job.base.char_classes {
        None => Ok(CharacteristicMap::trivial(base, count)),
        Some(map) => {
            let mut values = Vec::with_capacity(count);
            for i in 1..=count {
                let key = format!("sigma_{i}");
                let path = format!("/base/char_classes/{key}");
                let text = map.get(&key).ok_or_else(|| RunError::Validation {
                    path: path.clone(),
                    message: "missing".into(),
                })?;
                values.push(base.parse(text).map_err(|e| RunError::at(&path, e))?);
            }
            Ok(CharacteristicMap::new(values))
        }
    }
}

fn principal_spec(job: &Job) -> RunResult<PrincipalBundleSpec> {
    let base = base_of(job)?;
    let mut classes = Vec::new();
    for (name, text) in job.base.characters.iter().flatten() {
        let p = base
            .parse(text)
            .map_err(|e| RunError::at(&format!("/base/characters/{name}"), e))?;
        classes.push((name.clone(), p));
    }
    Ok(PrincipalBundleSpec::new(base, classes))
}

fn profile_string(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn header(job: &Job) -> String {
    let group = job
        .group
        .as_ref()
        .map(|g| format!(" {}{}", g.kind, g.rank))
        .unwrap_or_default();
    format!(
        "{}{} [{} mode, truncation {}]",
        job.task.as_str(),
        group,
        job.mode.as_str(),
        job.truncation_degree
    )
}

fn run_coinv(job: &Job) -> RunResult<Report> {
    let datum = datum_of(job)?;
    let algebra = CoinvariantAlgebra::for_type(datum.kind(), datum.rank())
        .map_err(|e| RunError::at("/group", e))?;
    let poincare = algebra.poincare_polynomial().map_err(|e| RunError::at("/group", e))?;
    let mut bases = Vec::new();
    let mut text = vec![header(job)];
    text.push(format!("|W| = {}, N = {}", algebra.dimension(), algebra.top_degree()));
    text.push(format!(
        "invariants: {}",
        algebra
            .invariants()
            .sigmas()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    ));
    text.push(format!("dims: {}", profile_string(&algebra.dimensions())));
    text.push(format!("poincare: {poincare}"));
    for d in 0..=algebra.top_degree() {
        let classes: Vec<String> = algebra.basis_classes(d).iter().map(|p| p.to_string()).collect();
        text.push(format!("basis[{d}]: {}", classes.join(", ")));
        bases.push(Value::from(classes));
    }
    let mut dets = Vec::new();
    for d in 0..=algebra.top_degree() {
        let p = algebra.pairing_matrix(d).map_err(|e| RunError::at("/group", e))?;
        dets.push(Value::from(p.determinant.to_string()));
        text.push(format!("pairing det[{d}]: {}", p.determinant));
    }
    let mut value = json!({
        "job": job.to_value(),
        "group": datum.label(),
        "weyl_order": enumerate_weyl(&datum).order(),
        "positive_roots": datum.positive_roots().len(),
        "invariants": algebra.invariants().sigmas().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "invariant_degrees": algebra.invariants().degrees(),
        "dimension": algebra.dimension(),
        "top_degree": algebra.top_degree(),
        "dims": algebra.dimensions(),
        "poincare": poincare.to_string(),
        "basis": bases,
        "pairing_determinants": dets,
    });
    if !job.parabolic.is_empty() {
        let wp = parabolic_weyl(&datum, &job.parabolic).map_err(|e| RunError::at("/parabolic", e))?;
        let dims = algebra.invariant_dimensions(&wp).map_err(|e| RunError::at("/parabolic", e))?;
        text.push(format!(
            "W_P-invariants: {} (total {})",
            profile_string(&dims),
            dims.iter().sum::<usize>()
        ));
        value["parabolic_invariant_dims"] = json!(dims);
    }
    Ok(Report {
        value,
        text: text.join("\n"),
        checks: Vec::new(),
    })
}

fn law_of(job: &Job) -> RunResult<FormalGroupLaw> {
    let d = job.truncation_degree;
    match job.mode {
        Mode::Chow => FormalGroupLaw::additive(d),
        Mode::Cobordism => FormalGroupLaw::universal(d),
    }
    .map_err(|e| RunError::at("/truncation_degree", e))
}

fn run_fgl(job: &Job) -> RunResult<Report> {
    let fgl = law_of(job)?;
    let mut coeffs = serde_json::Map::new();
    let mut text = vec![header(job), format!("F = {}", fgl.law())];
    for (&(i, j), a) in &fgl.coefficients() {
        coeffs.insert(format!("a_{i}_{j}"), Value::from(a.to_string()));
        if i <= j {
            text.push(format!("a_{i}_{j} = {a}"));
        }
    }
    let show = |p: Option<&GradedPolynomial>| p.map(|p| p.to_string());
    if let Some(log) = show(fgl.log()) {
        text.push(format!("log(t) = {log}"));
    }
    if let Some(exp) = show(fgl.exp()) {
        text.push(format!("exp(t) = {exp}"));
    }
    let value = json!({
        "job": job.to_value(),
        "law": fgl.law().to_string(),
        "coefficients": coeffs,
        "log": show(fgl.log()),
        "exp": show(fgl.exp()),
    });
    Ok(Report {
        value,
        text: text.join("\n"),
        checks: Vec::new(),
    })
}

fn presentation_value(pres: &RingPresentation) -> Value {
    let gens: Vec<Value> = pres
        .generators
        .iter()
        .map(|g| json!({"name": g.name, "degree": g.degree, "weight": g.weight}))
        .collect();
    let mut v = json!({
        "name": pres.name,
        "mode": pres.mode.as_str(),
        "coefficients": pres.coefficients.generator_names(),
        "generators": gens,
        "relations": pres.relations.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "truncation": pres.truncation,
        "ranks": pres.rank_profile(),
    });
    if pres.generators.iter().any(|g| g.weight != 0) {
        v["labelled_ranks"] = pres
            .labelled_ranks
            .iter()
            .map(|((d, w), r)| json!({"degree": d, "weight": w, "rank": r}))
            .collect();
    }
    if let Some(b) = &pres.free_basis {
        v["free_basis"] = json!({
            "over": b.over,
            "rank": b.elements.len(),
            "elements": b.elements.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "profile": b.profile,
        });
    }
    if let Some((base, lambda)) = &pres.tensor_decomposition {
        v["tensor_decomposition"] = json!({"base": base, "lambda": lambda});
    }
    if !pres.identities.is_empty() {
        v["identities"] = pres
            .identities
            .iter()
            .map(|i| json!({"identity": format!("{} = 0", i.expression), "holds": i.holds}))
            .collect();
    }
    v["convention"] = json!({"name": pres.convention.as_str(), "relations": pres.convention.describe()});
    v["notes"] = json!(pres.notes);
    v
}

fn presentation_text(pres: &RingPresentation) -> Vec<String> {
    let mut out = vec![pres.name.clone()];
    let gens: Vec<String> = pres
        .generators
        .iter()
        .map(|g| {
            if g.weight != 0 {
                format!("{} (deg {}, weight {})", g.name, g.degree, g.weight)
            } else {
                format!("{} (deg {})", g.name, g.degree)
            }
        })
        .collect();
    out.push(format!("generators: {}", if gens.is_empty() { "none".into() } else { gens.join(", ") }));
    if pres.mode == Mode::Cobordism {
        out.push(format!("coefficients: Q[{}]", pres.coefficients.generator_names().join(", ")));
    }
    out.push("relations:".into());
    for r in &pres.relations {
        out.push(format!("  {r}"));
    }
    out.push(format!(
        "ranks (degree 0..{}): {}",
        pres.truncation,
        profile_string(&pres.rank_profile())
    ));
    if let Some(b) = &pres.free_basis {
        let elems: Vec<String> = b.elements.iter().map(|p| p.to_string()).collect();
        out.push(format!("free over {} of rank {}: {}", b.over, b.elements.len(), elems.join(", ")));
    }
    for i in &pres.identities {
        let verdict = if i.holds { "holds" } else { "FAILS" };
        out.push(format!("identity: {} = 0 ({verdict})", i.expression));
    }
    out.push(format!("convention: {} ({})", pres.convention.as_str(), pres.convention.describe()));
    for n in &pres.notes {
        out.push(format!("note: {n}"));
    }
    out
}

fn build_flag(job: &Job) -> RunResult<(RootDatum, RingPresentation)> {
    let datum = datum_of(job)?;
    let base = base_of(job)?;
    let count = datum.rank();
    let cmap = cmap_of(job, &base, count)?;
    let pres = flag_bundle_ring(&base, &cmap, &datum, &job.parabolic, job.convention)
        .map_err(|e| RunError::at("/base/char_classes", e))?;
    Ok((datum, pres))
}

fn run_flag(job: &Job) -> RunResult<Report> {
    let (datum, pres) = build_flag(job)?;
    let report = rank_report(&pres, &datum, &job.parabolic).map_err(|e| RunError::at("/group", e))?;
    if !report.ok() {
        return Err(RunError::Consistency {
            path: "/group".into(),
            message: format!(
                "rank check failed: |W|/|W_P| = {}, averaging = {}, declared = {}, ranks {:?} vs {:?}",
                report.by_order, report.by_averaging, report.declared, report.profile, report.expected_profile
            ),
        });
    }
    if pres.identities.iter().any(|i| !i.holds) {
        return Err(RunError::Consistency {
            path: "/base/char_classes".into(),
            message: "the Chern-polynomial identity does not reduce to zero".into(),
        });
    }
    let mut text = vec![header(job)];
    text.extend(presentation_text(&pres));
    text.push(format!(
        "rank check: |W|/|W_P| {}, averaging {}, declared {}",
        report.by_order, report.by_averaging, report.declared
    ));
    let value = json!({
        "job": job.to_value(),
        "presentation": presentation_value(&pres),
        "rank_check": {
            "by_order": report.by_order,
            "by_averaging": report.by_averaging,
            "declared": report.declared,
            "expected_ranks": report.expected_profile,
        },
    });
    Ok(Report {
        value,
        text: text.join("\n"),
        checks: Vec::new(),
    })
}

fn run_principal(job: &Job) -> RunResult<Report> {
    let spec = principal_spec(job)?;
    let pres = principal_bundle_ring(&spec).map_err(|e| RunError::at("/base/characters", e))?;
    let mut text = vec![header(job)];
    text.extend(presentation_text(&pres));
    text.push(format!("total rank (degrees 0..{}): {}", pres.truncation, pres.total_rank()));
    let value = json!({
        "job": job.to_value(),
        "presentation": presentation_value(&pres),
        "total_rank": pres.total_rank(),
    });
    Ok(Report {
        value,
        text: text.join("\n"),
        checks: Vec::new(),
    })
}

fn run_oracle(job: &Job) -> RunResult<Report> {
    let checks = match job.effective_task() {
        Task::Coinv => oracle_coinv(job)?,
        Task::Fgl => oracle_fgl(job)?,
        Task::Flag => oracle_flag(job)?,
        Task::Principal => oracle_principal(job)?,
        Task::Oracle => unreachable!("effective task is never oracle"),
    };
    let mut text = vec![format!("{} of {}", header(job), job.effective_task().as_str())];
    text.extend(checks.iter().map(Check::line));
    let value = json!({
        "job": job.to_value(),
        "checks": checks.iter().map(Check::to_value).collect::<Vec<_>>(),
        "ok": checks.iter().all(|c| c.ok),
    });
    Ok(Report {
        value,
        text: text.join("\n"),
        checks,
    })
}

fn oracle_coinv(job: &Job) -> RunResult<Vec<Check>> {
    let datum = datum_of(job)?;
    let weyl = enumerate_weyl(&datum);
    let algebra = CoinvariantAlgebra::for_type(datum.kind(), datum.rank())
        .map_err(|e| RunError::at("/group", e))?;
    let kernel = coinvariant_dimensions_by_kernel(
        algebra.invariants(),
        datum.positive_roots().len() as i32 + 1,
    )
    .map_err(|e| RunError::at("/group", e))?;
    let mut checks = vec![
        Check::new("dim", algebra.dimension(), kernel.iter().sum::<usize>()),
        Check::new("order", algebra.dimension(), weyl.order()),
        Check::new("top_degree", algebra.top_degree(), datum.positive_roots().len()),
        Check::new("profile", profile_string(&algebra.dimensions()), profile_string(&kernel)),
        Check::new(
            "poincare",
            Poincare(algebra.dimensions()),
            Poincare::product_formula(algebra.invariants().degrees()),
        ),
    ];
    let singular = (0..=algebra.top_degree())
        .filter(|&d| algebra.pairing_matrix(d).is_err())
        .count();
    checks.push(Check::new("singular_pairings", singular, 0));
    if !job.parabolic.is_empty() {
        let wp = parabolic_weyl(&datum, &job.parabolic).map_err(|e| RunError::at("/parabolic", e))?;
        let dims = algebra.invariant_dimensions(&wp).map_err(|e| RunError::at("/parabolic", e))?;
        checks.push(Check::new("rank", dims.iter().sum::<usize>(), weyl.order() / wp.order()));
    }
    Ok(checks)
}

fn oracle_fgl(job: &Job) -> RunResult<Vec<Check>> {
    let fgl = law_of(job)?;
    let residuals = fgl_axiom_residuals(&fgl).map_err(|e| RunError::at("/truncation_degree", e))?;
    let mut checks = vec![
        Check::new("unit", format!("{} / {}", residuals.left_unit, residuals.right_unit), "0 / 0"),
        Check::new("commutativity", &residuals.commutativity, 0),
        Check::new("associativity", &residuals.associativity, 0),
    ];
    if job.mode == Mode::Cobordism {
        let (solved, bad) = compare_lazard_routes(job.truncation_degree)
            .map_err(|e| RunError::at("/truncation_degree", e))?;
        let n = fgl.coefficients().len();
        checks.push(Check::new("matching_coefficients", n, n - bad.len()));
        let free: Vec<usize> = solved.free_parameters.clone();
        checks.push(Check::new(
            "free_parameters",
            profile_string(&vec![1; free.len()]),
            profile_string(&free),
        ));
    }
    Ok(checks)
}

fn oracle_flag(job: &Job) -> RunResult<Vec<Check>> {
    let (datum, pres) = build_flag(job)?;
    let report = rank_report(&pres, &datum, &job.parabolic).map_err(|e| RunError::at("/group", e))?;
    let mut checks = vec![
        Check::new("rank", report.declared, report.by_order),
        Check::new("averaging", report.by_averaging, report.by_order),
        Check::new(
            "ranks",
            profile_string(&report.profile),
            profile_string(&report.expected_profile),
        ),
    ];
    if job.mode == Mode::Cobordism {
        let mut chow_job = job.clone();
        chow_job.mode = Mode::Chow;
        let (_, chow) = build_flag(&chow_job)?;
        let coh = mode_coherence(&pres, &chow).map_err(|e| RunError::at("/mode", e))?;
        checks.push(Check::new(
            "chow_specialization",
            profile_string(&coh.specialized),
            profile_string(&coh.chow),
        ));
        checks.push(Check::new(
            "lazard_tensor",
            profile_string(&coh.specialized_lazard),
            profile_string(&coh.tensored),
        ));
    }
    Ok(checks)
}

fn oracle_principal(job: &Job) -> RunResult<Vec<Check>> {
    let spec = principal_spec(job)?;
    let main = principal_bundle_ring(&spec).map_err(|e| RunError::at("/base/characters", e))?;
    let other =
        principal_bundle_ring_by_characters(&spec).map_err(|e| RunError::at("/base/characters", e))?;
    let ranks = |p: &RingPresentation| -> BTreeMap<i32, usize> { p.ranks.clone() };
    Ok(vec![
        Check::new(
            "ranks",
            profile_string(&main.rank_profile()),
            profile_string(&ranks(&other).values().copied().collect::<Vec<_>>()),
        ),
        Check::new("total_rank", main.total_rank(), other.total_rank()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::parse_job;

    fn run(text: &str) -> Report {
        run_job(&parse_job(text).unwrap()).unwrap()
    }

    #[test]
    fn coinv_gl3() {
        let r = run(r#"{"task": "coinv", "group": {"type": "GL", "rank": 3}}"#);
        assert_eq!(r.value["poincare"], "1 + 2t + 2t^2 + t^3");
        assert_eq!(r.value["dimension"], 6);
    }

    #[test]
    fn fgl_universal_order_two() {
        let r = run(r#"{"task": "fgl", "mode": "cobordism", "truncation_degree": 2}"#);
        assert_eq!(r.value["law"], "u + v - 2*b1*u*v");
    }

    #[test]
    fn flag_over_projective_line() {
        let r = run(
            r#"{"task": "flag", "group": {"type": "GL", "rank": 2},
                "base": {"generators": [{"name": "h", "degree": 1}], "relations": ["h^2"],
                         "char_classes": {"sigma_1": "h", "sigma_2": "0"}}}"#,
        );
        let p = &r.value["presentation"];
        assert_eq!(p["free_basis"]["rank"], 2);
        assert_eq!(p["identities"][0]["identity"], "x1^2 - x1*h = 0");
        assert_eq!(p["identities"][0]["holds"], true);
    }

    #[test]
    fn oracle_lines() {
        let r = run(r#"{"task": "oracle", "oracle_of": "coinv", "group": {"type": "GL", "rank": 3}}"#);
        assert!(r.text.contains("dim: main 6, oracle 6, OK"), "{}", r.text);
        let r = run(r#"{"task": "oracle", "oracle_of": "flag", "group": {"type": "GL", "rank": 3}, "parabolic": [2]}"#);
        assert!(r.text.contains("rank: main 3, oracle 3, OK"), "{}", r.text);
        let r = run(r#"{"task": "oracle", "oracle_of": "fgl", "mode": "cobordism", "truncation_degree": 3}"#);
        assert!(r.text.contains("associativity: main 0, oracle 0, OK"), "{}", r.text);
        assert!(r.ok());
    }

    #[test]
    fn principal_gm_over_p1() {
        let r = run(
            r#"{"task": "principal", "base": {"generators": [{"name": "h", "degree": 1}],
                "relations": ["h^2"], "characters": {"chi": "h"}}}"#,
        );
        assert_eq!(r.value["total_rank"], 1);
    }

    #[test]
    fn output_is_deterministic() {
        let text = r#"{"task": "flag", "mode": "cobordism", "truncation_degree": 3,
            "group": {"type": "GL", "rank": 2}, "format": "json"}"#;
        assert_eq!(run(text).to_json(), run(text).to_json());
    }
}
