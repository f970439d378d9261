//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

use std::time::{Duration, Instant};

use flagbord::{parse_job, run_job, Report};
use flagbord_core::bundle::{
    flag_bundle_ring, mode_coherence, principal_bundle_ring, principal_bundle_ring_by_characters,
    CharacteristicMap, Convention, Generator, Mode, PrincipalBundleSpec, RingPresentation,
};
use flagbord_core::coinv::{CoinvariantAlgebra, Poincare};
use flagbord_core::fgl::{CoefficientRing, FormalGroupLaw};
use flagbord_core::oracle::{compare_lazard_routes, fgl_axiom_residuals};
use flagbord_core::weyl::{
    build_root_datum, invariant_degrees, positive_root_count, simple_root_count, weyl_order,
    GroupType,
};
use serde_json::{json, Value};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn job(v: Value) -> Result<Report, String> {
    let job = parse_job(&v.to_string()).map_err(|e| format!("{v}: {e}"))?;
    run_job(&job).map_err(|e| format!("{v}: {e}"))
}

fn coinv_cases() -> Vec<(GroupType, usize)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((GroupType::GL, n));
    }
    for n in 1..=3 {
        out.push((GroupType::A, n));
    }
    for n in 1..=3 {
        out.push((GroupType::B, n));
        out.push((GroupType::C, n));
    }
    out.push((GroupType::D, 4));
    out
}

struct Algebras(Vec<(GroupType, usize, CoinvariantAlgebra, Duration)>);

fn build_algebras() -> Result<Algebras, String> {
    let mut out = Vec::new();
    for (kind, rank) in coinv_cases() {
        let start = Instant::now();
        let a = CoinvariantAlgebra::for_type(kind, rank).map_err(|e| format!("{kind}{rank}: {e}"))?;
        out.push((kind, rank, a, start.elapsed()));
    }
    Ok(Algebras(out))
}

fn criterion_1(algs: &Algebras) -> Outcome {
    let limit = Duration::from_secs(60);
    let mut slowest = Duration::ZERO;
    for (kind, rank, a, t) in &algs.0 {
        ensure(a.dimension() == weyl_order(*kind, *rank), || {
            format!("{kind}{rank}: dim {} vs |W| {}", a.dimension(), weyl_order(*kind, *rank))
        })?;
        ensure(*t < limit, || format!("{kind}{rank} took {t:?}"))?;
        slowest = slowest.max(*t);
    }
    for (kind, rank, expected) in [(GroupType::GL, 4, 24), (GroupType::B, 3, 48), (GroupType::D, 4, 192)] {
        let a = &algs.0.iter().find(|c| c.0 == kind && c.1 == rank).unwrap().2;
        ensure(a.dimension() == expected, || format!("{kind}{rank}: {} != {expected}", a.dimension()))?;
    }
    Ok(format!("{} groups, slowest {slowest:.2?}", algs.0.len()))
}

fn criterion_2(algs: &Algebras) -> Outcome {
    for (kind, rank, a, _) in &algs.0 {
        let n = positive_root_count(*kind, *rank);
        ensure(a.top_degree() == n, || format!("{kind}{rank}: N {} vs {n}", a.top_degree()))?;
        ensure(a.dimensions()[n] == 1, || format!("{kind}{rank}: dim Λ_N = {}", a.dimensions()[n]))?;
        ensure(a.dimensions().len() == n + 1, || format!("{kind}{rank}: classes above N"))?;
    }
    Ok(format!("{} groups", algs.0.len()))
}

fn criterion_3(algs: &Algebras) -> Outcome {
    let mut count = 0;
    for (kind, rank, a, _) in &algs.0 {
        for d in 0..=a.top_degree() {
            let p = a.pairing_matrix(d).map_err(|e| format!("{kind}{rank} degree {d}: {e}"))?;
            ensure(p.is_square(), || format!("{kind}{rank} degree {d}: not square"))?;
            ensure(p.determinant.to_string() != "0", || format!("{kind}{rank} degree {d}: singular"))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairing matrices nonsingular"))
}

fn criterion_4(algs: &Algebras) -> Outcome {
    for (kind, rank, a, _) in &algs.0 {
        let p = a.poincare_polynomial().map_err(|e| format!("{kind}{rank}: {e}"))?;
        let f = Poincare::product_formula(&invariant_degrees(*kind, *rank));
        ensure(p == f, || format!("{kind}{rank}: {p} vs {f}"))?;
        ensure(p.is_palindromic(), || format!("{kind}{rank}: {p} not palindromic"))?;
    }
    let gl3 = &algs.0.iter().find(|c| c.0 == GroupType::GL && c.1 == 3).unwrap().2;
    let p = gl3.poincare_polynomial().map_err(|e| e.to_string())?;
    ensure(p.coefficients() == [1, 2, 2, 1], || format!("GL3: {p}"))?;
    Ok(format!("GL3: {p}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for d in 1..=6 {
        let f = FormalGroupLaw::universal(d).map_err(|e| e.to_string())?;
        let r = fgl_axiom_residuals(&f).map_err(|e| e.to_string())?;
        ensure(r.all_zero(), || format!("D = {d}: {r:?}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("D = 1..6, residuals zero, {t:.2?}"))
}

fn criterion_6() -> Outcome {
    let (solved, bad) = compare_lazard_routes(4).map_err(|e| e.to_string())?;
    ensure(bad.is_empty(), || format!("disagreeing a_ij: {bad:?}"))?;
    ensure(solved.free_parameters.iter().all(|&k| k == 1), || {
        format!("constraint solution spaces {:?}", solved.free_parameters)
    })?;
    Ok(format!("{} coefficients agree", solved.coefficients.len()))
}

fn sweep_types() -> Vec<(GroupType, usize)> {
    let mut out = Vec::new();
    for kind in [GroupType::GL, GroupType::A, GroupType::B, GroupType::C, GroupType::D] {
        for rank in 1..=3 {
            if build_root_datum(kind, rank).is_ok() {
                out.push((kind, rank));
            }
        }
    }
    out
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut jobs = 0;
    for (kind, rank) in sweep_types() {
        let n = positive_root_count(kind, rank).max(1);
        for set in subsets(simple_root_count(kind, rank)) {
            let r = job(json!({
                "task": "flag",
                "group": {"type": kind.to_string(), "rank": rank},
                "parabolic": set,
                "truncation_degree": n,
            }))?;
            let c = &r.value["rank_check"];
            let expected = weyl_order(kind, rank) / parabolic_order(kind, rank, &set)?;
            ensure(c["by_order"] == expected && c["by_averaging"] == expected && c["declared"] == expected, || {
                format!("{kind}{rank} {set:?}: {c} vs {expected}")
            })?;
            jobs += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("sweep took {t:?}"))?;
    Ok(format!("{jobs} (type, parabolic) jobs, {t:.2?}"))
}

fn parabolic_order(kind: GroupType, rank: usize, set: &[usize]) -> Result<usize, String> {
    let d = build_root_datum(kind, rank).map_err(|e| e.to_string())?;
    flagbord_core::weyl::parabolic_weyl(&d, set)
        .map(|w| w.order())
        .map_err(|e| e.to_string())
}

fn p1(mode: Mode, truncation: u32) -> Result<RingPresentation, String> {
    RingPresentation::base("P1", mode, truncation, vec![Generator::new("h", 1)], &["h^2"])
        .map_err(|e| e.to_string())
}

fn gl2_over_p1(mode: Mode, truncation: u32) -> Result<RingPresentation, String> {
    let base = p1(mode, truncation)?;
    let d = build_root_datum(GroupType::GL, 2).map_err(|e| e.to_string())?;
    let cmap = CharacteristicMap::parse(&base, &["h", "0"]).map_err(|e| e.to_string())?;
    flag_bundle_ring(&base, &cmap, &d, &[], Convention::Standard).map_err(|e| e.to_string())
}

fn criterion_8() -> Outcome {
    let r = job(json!({"task": "flag", "group": {"type": "GL", "rank": 3}, "truncation_degree": 3}))?;
    let ranks = &r.value["presentation"]["ranks"];
    ensure(*ranks == json!([1, 2, 2, 1]), || format!("GL3 over a point: {ranks}"))?;

    let pres = gl2_over_p1(Mode::Chow, 6)?;
    let basis = pres.free_basis.as_ref().ok_or("no free basis")?;
    ensure(basis.elements.len() == 2, || format!("rank {}", basis.elements.len()))?;
    let xi = pres.parse("x1").map_err(|e| e.to_string())?;
    ensure(basis.elements.contains(&xi), || "x1 is not a basis element".into())?;
    let rel = pres.parse("x1^2 - h*x1").map_err(|e| e.to_string())?;
    let nf = pres.normal_form(&rel).map_err(|e| e.to_string())?;
    ensure(nf.is_zero(), || format!("xi^2 - h xi reduces to {nf}"))?;
    let nf_xi = pres.normal_form(&xi).map_err(|e| e.to_string())?;
    ensure(!nf_xi.is_zero(), || "xi reduces to zero".into())?;
    Ok("GL3 ranks (1,2,2,1); GL2 over P1 rank 2 with xi^2 - h xi = 0".into())
}

fn criterion_9() -> Outcome {
    let ring = CoefficientRing::lazard(4);
    let mut parts = Vec::new();
    for n in [2, 3] {
        let a = CoinvariantAlgebra::for_type(GroupType::GL, n).map_err(|e| e.to_string())?;
        let q = a.series_quotient(&ring, 4).map_err(|e| e.to_string())?;
        let direct: Vec<usize> = (0..=4).map(|d| q.ranks().get(&d).copied().unwrap_or(0)).collect();
        let tensor = a.lazard_tensor_ranks(&ring, 4);
        ensure(direct == tensor, || format!("GL{n}: {direct:?} vs {tensor:?}"))?;
        parts.push(format!("GL{n} {direct:?}"));
    }
    Ok(parts.join(", "))
}

fn criterion_10() -> Outcome {
    let base = p1(Mode::Chow, 6)?;
    let h = base.parse("h").map_err(|e| e.to_string())?;
    let spec = PrincipalBundleSpec::new(base.clone(), vec![("chi".into(), h)]);
    let main = principal_bundle_ring(&spec).map_err(|e| e.to_string())?;
    let oracle = principal_bundle_ring_by_characters(&spec).map_err(|e| e.to_string())?;
    ensure(main.total_rank() == 1, || format!("total rank {}", main.total_rank()))?;
    ensure(main.ranks == oracle.ranks, || format!("{:?} vs {:?}", main.ranks, oracle.ranks))?;

    let empty = PrincipalBundleSpec::new(base.clone(), Vec::new());
    let same = principal_bundle_ring(&empty).map_err(|e| e.to_string())?;
    let same_oracle = principal_bundle_ring_by_characters(&empty).map_err(|e| e.to_string())?;
    ensure(same.ranks == base.ranks && same_oracle.ranks == base.ranks, || {
        format!("empty set: {:?} / {:?} vs base {:?}", same.ranks, same_oracle.ranks, base.ranks)
    })?;
    Ok("G_m over P1 rank 1; empty set leaves P1 unchanged".into())
}

fn criterion_11() -> Outcome {
    const D: u32 = 4;
    let mut checked = 0;
    let mut flag_jobs: Vec<Value> = vec![
        json!({"group": {"type": "GL", "rank": 3}}),
        json!({"group": {"type": "GL", "rank": 2},
               "base": {"generators": [{"name": "h", "degree": 1}], "relations": ["h^2"],
                        "char_classes": {"sigma_1": "h", "sigma_2": "0"}}}),
    ];
    for (kind, rank) in sweep_types().into_iter().filter(|c| c.1 <= 2) {
        for set in subsets(simple_root_count(kind, rank)) {
            flag_jobs.push(json!({"group": {"type": kind.to_string(), "rank": rank}, "parabolic": set}));
        }
    }
    for mut j in flag_jobs {
        j["task"] = json!("oracle");
        j["oracle_of"] = json!("flag");
        j["mode"] = json!("cobordism");
        j["truncation_degree"] = json!(D);
        let r = job(j.clone())?;
        ensure(r.ok(), || format!("{j}:\n{}", r.text))?;
        ensure(r.checks.iter().any(|c| c.name == "chow_specialization"), || format!("{j}: not compared"))?;
        checked += 1;
    }

    let base = p1(Mode::Cobordism, D)?;
    let chow_base = p1(Mode::Chow, D)?;
    let h = base.parse("h").map_err(|e| e.to_string())?;
    let ch = chow_base.parse("h").map_err(|e| e.to_string())?;
    let cob = principal_bundle_ring(&PrincipalBundleSpec::new(base, vec![("chi".into(), h)]))
        .map_err(|e| e.to_string())?;
    let chow = principal_bundle_ring(&PrincipalBundleSpec::new(chow_base, vec![("chi".into(), ch)]))
        .map_err(|e| e.to_string())?;
    let c = mode_coherence(&cob, &chow).map_err(|e| e.to_string())?;
    ensure(c.ok(), || format!("principal: {c:?}"))?;
    checked += 1;

    let c = mode_coherence(&gl2_over_p1(Mode::Cobordism, D)?, &gl2_over_p1(Mode::Chow, D)?)
        .map_err(|e| e.to_string())?;
    ensure(c.ok(), || format!("GL2 over P1: {c:?}"))?;
    checked += 1;
    Ok(format!("{checked} cobordism jobs specialize to Chow"))
}

fn main() {
    let start = Instant::now();
    let algebras = build_algebras();
    let algebras = &algebras;
    let with_algs = |f: fn(&Algebras) -> Outcome| -> Box<dyn Fn() -> Outcome + '_> {
        Box::new(move || match algebras {
            Ok(a) => f(a),
            Err(e) => Err(e.clone()),
        })
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("coinvariant dimension equals |W|", with_algs(criterion_1)),
        ("top degree is the number of positive roots", with_algs(criterion_2)),
        ("perfect pairing", with_algs(criterion_3)),
        ("Poincare polynomial product formula", with_algs(criterion_4)),
        ("formal group law axioms", Box::new(criterion_5)),
        ("Lazard coefficients by two routes", Box::new(criterion_6)),
        ("rank multiplicativity sweep", Box::new(criterion_7)),
        ("Borel presentation sanity", Box::new(criterion_8)),
        ("power-series quotient ranks", Box::new(criterion_9)),
        ("principal bundle quotient", Box::new(criterion_10)),
        ("mode coherence", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed, {:.2?}",
        criteria.len() - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
