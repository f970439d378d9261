//! Presentations of cohomology rings of flag bundles and principal bundles.
//!
//! A base `X` is given by generators and homogeneous relations. A principal
//! `G`-bundle over it enters only through its characteristic map: the values
//! `cᵢ` of the fundamental invariants `σᵢ` in the base ring. The ring of the
//! full flag bundle `E/B` is then
//!
//! ```text
//! base[x₁..x_r] / (σᵢ(x) − cᵢ)
//! ```
//!
//! and `E/P` is its `W_P`-invariant part, free over the base with a basis
//! lifted from `Λ^{W_P}`. In cobordism mode the coefficients are the Lazard
//! generators `b₁..b_D` and everything is truncated at filtration weight `D`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::coinv::{coinvariant_algebra, CoinvariantAlgebra};
use crate::fgl::{Character, CoefficientRing, FormalGroupLaw};
use crate::poly::{parse_polynomial, GradedPolynomial, QuotientRing, Rational, VariableTable};
use crate::weyl::{
    act_on_polynomial, enumerate_weyl, fundamental_invariants, parabolic_weyl, GroupType,
    RootDatum, WeylGroup,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Chow,
    Cobordism,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Chow => "chow",
            Mode::Cobordism => "cobordism",
        }
    }

    pub fn coefficient_ring(&self, truncation: u32) -> CoefficientRing {
        match self {
            Mode::Chow => CoefficientRing::rational(),
            Mode::Cobordism => CoefficientRing::lazard(truncation),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the characteristic classes enter the relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `σᵢ(x) − cᵢ = 0`; for `GL₂` the generator obeys `ξ² − c₁ξ + c₂ = 0`.
    Standard,
    /// `σᵢ(−x) − cᵢ = 0`.
    Dual,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::Dual => "dual",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Convention::Standard => "sigma_i(x) - c_i = 0",
            Convention::Dual => "sigma_i(-x) - c_i = 0",
        }
    }
}

/// A ring generator: name, cohomological degree, auxiliary weight label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub weight: i32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator {
            name: name.into(),
            degree,
            weight: 0,
        }
    }

    pub fn with_weight(name: impl Into<String>, degree: i32, weight: i32) -> Self {
        Generator {
            name: name.into(),
            degree,
            weight,
        }
    }
}

/// Free-module structure over a named base.
#[derive(Debug, Clone)]
pub struct FreeBasis {
    pub over: String,
    /// Lifts of a basis of `Λ^{W_P}`, in `x₁..x_r`.
    pub elements: Vec<GradedPolynomial>,
    /// Number of basis elements in each degree.
    pub profile: Vec<usize>,
}

/// A polynomial asserted to vanish in the presented ring.
#[derive(Debug, Clone)]
pub struct Identity {
    pub expression: GradedPolynomial,
    pub holds: bool,
}

/// Parameters of a flag-bundle construction, kept for verification.
#[derive(Debug, Clone)]
pub struct FlagData {
    pub base: Box<RingPresentation>,
    pub datum: RootDatum,
    /// 1-based simple-root indices generating `W_P`.
    pub parabolic: Vec<usize>,
    /// `dim Λ_d^{W_P}`, all degrees.
    pub invariant_profile: Vec<usize>,
    /// `|W|`, `|W_P|`.
    pub orders: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct RingPresentation {
    pub name: String,
    pub mode: Mode,
    pub coefficients: CoefficientRing,
    pub table: Arc<VariableTable>,
    /// Generators other than the Lazard coefficients.
    pub generators: Vec<Generator>,
    pub relations: Vec<GradedPolynomial>,
    pub truncation: u32,
    /// `dim_ℚ` in each degree `0..=D`.
    pub ranks: BTreeMap<i32, usize>,
    /// `dim_ℚ` split by degree and weight label.
    pub labelled_ranks: BTreeMap<(i32, i32), usize>,
    pub free_basis: Option<FreeBasis>,
    /// `(base ranks, Λ^{W_P} profile)` when the bundle is trivial.
    pub tensor_decomposition: Option<(Vec<usize>, Vec<usize>)>,
    pub identities: Vec<Identity>,
    pub convention: Convention,
    pub notes: Vec<String>,
    pub flag: Option<FlagData>,
    quotient: QuotientRing,
    group: Option<WeylGroup>,
}

impl RingPresentation {
    /// A base ring `ℚ[gens]/(relations)` (tensored with the truncated Lazard
    /// ring in cobordism mode). Relations are parsed over the generators and,
    /// in cobordism mode, `b₁..b_D`.
    pub fn base(
        name: impl Into<String>,
        mode: Mode,
        truncation: u32,
        generators: Vec<Generator>,
        relations: &[&str],
    ) -> Result<Self> {
        let table = base_table(mode, truncation, &generators)?;
        let rels = relations
            .iter()
            .map(|s| parse_polynomial(s, &table))
            .collect::<Result<Vec<_>>>()?;
        Self::base_from_polynomials(name, mode, truncation, generators, rels)
    }

    /// As [`Self::base`], with relations already over [`base_table`].
    pub fn base_from_polynomials(
        name: impl Into<String>,
        mode: Mode,
        truncation: u32,
        generators: Vec<Generator>,
        relations: Vec<GradedPolynomial>,
    ) -> Result<Self> {
        let table = base_table(mode, truncation, &generators)?;
        let relations = relations
            .iter()
            .map(|r| r.embed(&table))
            .collect::<Result<Vec<_>>>()?;
        let quotient = QuotientRing::new(&table, &relations, truncation, 0..=truncation as i32)?;
        Ok(RingPresentation {
            name: name.into(),
            mode,
            coefficients: mode.coefficient_ring(truncation),
            ranks: quotient.ranks(),
            labelled_ranks: quotient.labelled_ranks(),
            table,
            generators,
            relations,
            truncation,
            free_basis: None,
            tensor_decomposition: None,
            identities: Vec::new(),
            convention: Convention::Standard,
            notes: Vec::new(),
            flag: None,
            quotient,
            group: None,
        })
    }

    /// The point: `ℚ`, or the truncated Lazard ring.
    pub fn point(mode: Mode, truncation: u32) -> Result<Self> {
        Self::base("point", mode, truncation, Vec::new(), &[])
    }

    pub fn rank_profile(&self) -> Vec<usize> {
        self.ranks.values().copied().collect()
    }

    /// Total rank when the ring vanishes above the truncation degree.
    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    /// Normal form modulo the relations (in the ambient ring for `E/P`).
    pub fn normal_form(&self, p: &GradedPolynomial) -> Result<GradedPolynomial> {
        self.quotient.normal_form(p)
    }

    pub fn parse(&self, text: &str) -> Result<GradedPolynomial> {
        parse_polynomial(text, &self.table)
    }

    fn lazard_indices(&self) -> Vec<usize> {
        self.coefficients.indices_in(&self.table)
    }
}

/// Table `(gens…, b₁..b_D)` of a base ring.
pub fn base_table(
    mode: Mode,
    truncation: u32,
    generators: &[Generator],
) -> Result<Arc<VariableTable>> {
    for g in generators {
        if g.degree <= 0 {
            return Err(Error::parameter(format!(
                "base generator `{}` has degree {}; degrees must be positive",
                g.name, g.degree
            )));
        }
    }
    mode.coefficient_ring(truncation)
        .table_with(generators.iter().map(|g| (g.name.clone(), g.degree, g.weight)))
}

/// Values of the fundamental invariants in the base ring.
#[derive(Debug, Clone)]
pub struct CharacteristicMap {
    pub values: Vec<GradedPolynomial>,
}

impl CharacteristicMap {
    pub fn new(values: Vec<GradedPolynomial>) -> Self {
        CharacteristicMap { values }
    }

    /// All classes zero: the trivial bundle.
    pub fn trivial(base: &RingPresentation, count: usize) -> Self {
        CharacteristicMap {
            values: vec![GradedPolynomial::zero(&base.table); count],
        }
    }

    /// Parses one expression per invariant over the base table.
    pub fn parse(base: &RingPresentation, exprs: &[&str]) -> Result<Self> {
        Ok(CharacteristicMap {
            values: exprs.iter().map(|e| base.parse(e)).collect::<Result<_>>()?,
        })
    }
}

fn torus_names(rank: usize) -> Vec<String> {
    (1..=rank).map(|i| format!("x{i}")).collect()
}

/// `dim_ℚ` of the `group`-invariants of each computed slice, with labels.
fn invariant_ranks(
    quotient: &QuotientRing,
    group: &WeylGroup,
    x_vars: &[usize],
) -> Result<(BTreeMap<i32, usize>, BTreeMap<(i32, i32), usize>)> {
    let table = quotient.table();
    let mut ranks = BTreeMap::new();
    let mut labelled = BTreeMap::new();
    for slice in quotient.slices() {
        let dim = slice.rank();
        let basis: Vec<GradedPolynomial> = slice
            .standard
            .iter()
            .map(|m| GradedPolynomial::monomial(table, m.clone(), Rational::from_integer(1.into())))
            .collect();
        let mut action = Vec::with_capacity(group.order());
        for g in group.elements() {
            let mut m = vec![vec![Rational::zero(); dim]; dim];
            for (j, b) in basis.iter().enumerate() {
                let image = act_on_polynomial(g, b, x_vars);
                for (i, c) in quotient.coordinates(&image, slice.degree)?.into_iter().enumerate() {
                    m[i][j] = c;
                }
            }
            action.push(m);
        }
        let rows = crate::coinv::w_invariants(dim, &action);
        ranks.insert(slice.degree, rows.len());
        for row in &rows {
            let pivot = row[0].0;
            *labelled
                .entry((slice.degree, slice.standard[pivot].label(table)))
                .or_insert(0) += 1;
        }
    }
    Ok((ranks, labelled))
}

/// Ranks of `ℚ[table]/(rels)` truncated at `bound`, optionally restricted to
/// the invariants of `group` acting on the torus variables.
fn presentation_ranks(
    table: &Arc<VariableTable>,
    relations: &[GradedPolynomial],
    bound: u32,
    group: Option<&WeylGroup>,
    x_vars: &[usize],
) -> Result<(QuotientRing, BTreeMap<i32, usize>, BTreeMap<(i32, i32), usize>)> {
    let quotient = QuotientRing::new(table, relations, bound, 0..=bound as i32)?;
    let (ranks, labelled) = match group {
        Some(g) if g.order() > 1 => invariant_ranks(&quotient, g, x_vars)?,
        _ => (quotient.ranks(), quotient.labelled_ranks()),
    };
    Ok((quotient, ranks, labelled))
}

/// `base ⊗_{C(G)} C(P)`: adjoins `x₁..x_r` to the base, imposes
/// `σᵢ − cᵢ`, and keeps the `W_P`-invariant part.
pub fn flag_bundle_ring(
    base: &RingPresentation,
    cmap: &CharacteristicMap,
    datum: &RootDatum,
    parabolic: &[usize],
    convention: Convention,
) -> Result<RingPresentation> {
    let weyl = enumerate_weyl(datum);
    let wp = parabolic_weyl(datum, parabolic)?;
    let invariants = fundamental_invariants(datum)?;
    if cmap.values.len() != invariants.len() {
        return Err(Error::parameter(format!(
            "{} characteristic classes given, {} expected for {}",
            cmap.values.len(),
            invariants.len(),
            datum.label()
        )));
    }
    for (i, (value, deg)) in cmap.values.iter().zip(invariants.degrees()).enumerate() {
        if value.is_zero() {
            continue;
        }
        match value.homogeneous_degree() {
            Some(d) if d == *deg as i32 => {}
            Some(d) => {
                return Err(Error::parameter(format!(
                    "class of sigma_{} has degree {d}, but sigma_{} has degree {deg}",
                    i + 1,
                    i + 1
                )))
            }
            None => {
                return Err(Error::parameter(format!(
                    "class of sigma_{} is not homogeneous",
                    i + 1
                )))
            }
        }
    }

    let lambda = coinvariant_algebra(datum, &weyl, &invariants)?;
    let rank = datum.rank();
    let names = torus_names(rank);
    for n in &names {
        if base.table.index_of(n).is_some() {
            return Err(Error::parameter(format!(
                "base generator name `{n}` is reserved for torus classes"
            )));
        }
    }
    let lead = names
        .iter()
        .map(|n| (n.clone(), 1, 0))
        .chain(base.generators.iter().map(|g| (g.name.clone(), g.degree, g.weight)));
    let table = base.coefficients.table_with(lead)?;
    let x_vars: Vec<usize> = (0..rank).collect();

    let mut relations: Vec<GradedPolynomial> = base
        .relations
        .iter()
        .map(|r| r.embed(&table))
        .collect::<Result<_>>()?;
    let sigmas = invariants.embedded(&table)?;
    let sign = match convention {
        Convention::Standard => 1,
        Convention::Dual => -1,
    };
    for (sigma, value) in sigmas.iter().zip(&cmap.values) {
        let d = sigma.homogeneous_degree().unwrap_or(0);
        let oriented = if sign < 0 && d % 2 == 1 { -sigma.clone() } else { sigma.clone() };
        relations.push(&oriented - &value.embed(&table)?);
    }

    let group = (!parabolic.is_empty()).then_some(&wp);
    let (quotient, ranks, labelled) =
        presentation_ranks(&table, &relations, base.truncation, group, &x_vars)?;

    let inv_classes = lambda.invariant_classes(&wp)?;
    let inv_profile = lambda.invariant_dimensions(&wp)?;
    let elements: Vec<GradedPolynomial> = inv_classes
        .iter()
        .map(|p| p.embed(&table))
        .collect::<Result<_>>()?;

    let mut identities = Vec::new();
    if datum.kind() == GroupType::GL && parabolic.is_empty() && rank as u32 <= base.truncation {
        // Π (x₁ − xⱼ) rewritten through the characteristic classes.
        let x1 = GradedPolynomial::var_index(&table, 0);
        let mut expr = GradedPolynomial::zero(&table);
        for k in 0..=rank {
            let c = if k == 0 {
                GradedPolynomial::one(&table)
            } else {
                cmap.values[k - 1].embed(&table)?
            };
            let s = match convention {
                Convention::Standard if k % 2 == 1 => -1,
                _ => 1,
            };
            let term = &c * &x1.pow((rank - k) as u32, None);
            expr = if s < 0 { &expr - &term } else { &expr + &term };
        }
        let holds = quotient.is_zero(&expr)?;
        identities.push(Identity {
            expression: expr,
            holds,
        });
    }

    let mut notes = vec![
        "ring structure is exact for smooth bases; over a singular base read the output as a module presentation".to_string(),
    ];
    if !parabolic.is_empty() {
        notes.push(format!(
            "ranks are W_P-invariant parts of the full flag ring; torus classes x1..x{rank} are kept as generators"
        ));
    }
    if base.mode == Mode::Cobordism && datum.kind() != GroupType::GL {
        notes.push("Weyl group acts linearly on the torus classes (logarithmic coordinates)".into());
    }

    let mut generators: Vec<Generator> = names.iter().map(|n| Generator::new(n.clone(), 1)).collect();
    generators.extend(base.generators.iter().cloned());
    let name = if parabolic.is_empty() {
        format!("E/B over {}", base.name)
    } else {
        format!("E/P over {}", base.name)
    };
    Ok(RingPresentation {
        name,
        mode: base.mode,
        coefficients: base.coefficients.clone(),
        table,
        generators,
        relations,
        truncation: base.truncation,
        ranks,
        labelled_ranks: labelled,
        free_basis: Some(FreeBasis {
            over: base.name.clone(),
            elements,
            profile: inv_profile.clone(),
        }),
        tensor_decomposition: None,
        identities,
        convention,
        notes,
        flag: Some(FlagData {
            base: Box::new(base.clone()),
            datum: datum.clone(),
            parabolic: parabolic.to_vec(),
            invariant_profile: inv_profile,
            orders: (weyl.order(), wp.order()),
        }),
        quotient,
        group: group.cloned(),
    })
}

/// Flag bundle of the trivial bundle: every characteristic class is zero.
pub fn trivial_flag_ring(
    base: &RingPresentation,
    datum: &RootDatum,
    parabolic: &[usize],
) -> Result<RingPresentation> {
    let count = fundamental_invariants(datum)?.len();
    let mut pres = flag_bundle_ring(
        base,
        &CharacteristicMap::trivial(base, count),
        datum,
        parabolic,
        Convention::Standard,
    )?;
    let inv = pres.flag.as_ref().expect("flag data").invariant_profile.clone();
    pres.tensor_decomposition = Some((base.rank_profile(), inv));
    Ok(pres)
}

/// A principal `G`-bundle: base plus first Chern classes of a generating set
/// of characters.
#[derive(Debug, Clone)]
pub struct PrincipalBundleSpec {
    pub base: RingPresentation,
    pub character_classes: Vec<(String, GradedPolynomial)>,
}

impl PrincipalBundleSpec {
    pub fn new(base: RingPresentation, character_classes: Vec<(String, GradedPolynomial)>) -> Self {
        PrincipalBundleSpec {
            base,
            character_classes,
        }
    }

    fn check(&self) -> Result<Vec<GradedPolynomial>> {
        let mut out = Vec::new();
        for (name, class) in &self.character_classes {
            let class = class.embed(&self.base.table)?;
            if !class.is_zero() && class.homogeneous_degree() != Some(1) {
                return Err(Error::parameter(format!(
                    "class of character `{name}` must have degree 1, got {}",
                    class
                        .homogeneous_degree()
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "mixed".into())
                )));
            }
            out.push(class);
        }
        Ok(out)
    }
}

/// `base / (c₁(L_χ) : χ)`, the ring of the total space of the bundle.
pub fn principal_bundle_ring(spec: &PrincipalBundleSpec) -> Result<RingPresentation> {
    let classes = spec.check()?;
    principal_quotient(spec, classes)
}

fn principal_quotient(
    spec: &PrincipalBundleSpec,
    classes: Vec<GradedPolynomial>,
) -> Result<RingPresentation> {
    let base = &spec.base;
    let mut relations = base.relations.clone();
    relations.extend(classes.into_iter().filter(|c| !c.is_zero()));
    let mut pres = RingPresentation::base_from_polynomials(
        format!("E over {}", base.name),
        base.mode,
        base.truncation,
        base.generators.clone(),
        relations,
    )?;
    pres.notes.push(
        "ring structure is exact for smooth bases; over a singular base read the output as a module presentation".into(),
    );
    Ok(pres)
}

/// Same quotient, generated instead by `c₁` of every character
/// `Σ nᵢχᵢ` with `|nᵢ| ≤ 2`, summed through the formal group law.
pub fn principal_bundle_ring_by_characters(spec: &PrincipalBundleSpec) -> Result<RingPresentation> {
    let classes = spec.check()?;
    let base = &spec.base;
    if classes.is_empty() {
        return principal_quotient(spec, Vec::new());
    }
    let fgl = match base.mode {
        Mode::Chow => FormalGroupLaw::additive(base.truncation)?,
        Mode::Cobordism => FormalGroupLaw::universal(base.truncation)?,
    };
    let k = classes.len();
    let mut all = Vec::new();
    let mut counter = vec![-2i64; k];
    loop {
        let chi = Character(counter.clone());
        if counter.iter().any(|n| *n != 0) {
            all.push(fgl.chern_of_character_in(&chi, &classes, base.truncation)?);
        }
        let mut i = 0;
        while i < k {
            counter[i] += 1;
            if counter[i] <= 2 {
                break;
            }
            counter[i] = -2;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    // c₁ of a character is homogeneous of degree 1 only up to truncation;
    // split into homogeneous pieces, each of which lies in the ideal.
    let mut rels = Vec::new();
    for p in all {
        for d in p.degrees() {
            let piece = homogeneous_part(&p, d);
            if !piece.is_zero() {
                rels.push(piece);
            }
        }
    }
    principal_quotient(spec, rels)
}

fn homogeneous_part(p: &GradedPolynomial, d: i32) -> GradedPolynomial {
    let table = p.table();
    let terms = p
        .terms()
        .iter()
        .filter(|(m, _)| m.degree(table) == d)
        .map(|(m, c)| (m.clone(), c.clone()));
    GradedPolynomial::from_terms(table, terms)
}

/// Outcome of [`verify_rank`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    /// `|W| / |W_P|`.
    pub by_order: usize,
    /// `dim Λ^{W_P}` by averaging.
    pub by_averaging: usize,
    pub declared: usize,
    /// Ranks of the presentation.
    pub profile: Vec<usize>,
    /// Ranks predicted by freeness over the base.
    pub expected_profile: Vec<usize>,
}

impl RankReport {
    pub fn ok(&self) -> bool {
        self.by_order == self.by_averaging
            && self.by_order == self.declared
            && self.profile == self.expected_profile
    }
}

/// Recomputes the free rank of a flag-bundle presentation by `|W|/|W_P|`
/// and by averaging over `Λ`, and checks the rank profile against the base.
pub fn verify_rank(
    pres: &RingPresentation,
    datum: &RootDatum,
    parabolic: &[usize],
) -> Result<RankReport> {
    let report = rank_report(pres, datum, parabolic)?;
    if !report.ok() {
        return Err(Error::consistency(format!(
            "rank mismatch: |W|/|W_P| = {}, averaging = {}, declared = {}, profile {:?} vs expected {:?}",
            report.by_order,
            report.by_averaging,
            report.declared,
            report.profile,
            report.expected_profile
        )));
    }
    Ok(report)
}

/// The numbers behind [`verify_rank`], without judging them.
pub fn rank_report(
    pres: &RingPresentation,
    datum: &RootDatum,
    parabolic: &[usize],
) -> Result<RankReport> {
    let flag = pres
        .flag
        .as_ref()
        .ok_or_else(|| Error::parameter("presentation is not a flag bundle"))?;
    let weyl = enumerate_weyl(datum);
    let wp = parabolic_weyl(datum, parabolic)?;
    let by_order = weyl.order() / wp.order();
    let lambda = CoinvariantAlgebra::for_type(datum.kind(), datum.rank())?;
    let inv = lambda.invariant_dimensions(&wp)?;
    let by_averaging: usize = inv.iter().sum();
    let declared = pres.free_basis.as_ref().map(|b| b.elements.len()).unwrap_or(0);

    // Degree d gets Σ_p dim Λ^{W_P}_p · (base truncated at D − p)_{d−p};
    // over the Lazard ring d − p may be negative. A base without positive
    // generators weighs its monomials by |degree|, but inside the bundle
    // they weigh nothing, so it is taken untruncated (|d − p| ≤ D anyway).
    let base = &flag.base;
    let base_filtered = base.table.has_positive();
    let dmax = pres.truncation as i32;
    let mut expected = vec![0usize; dmax as usize + 1];
    for (p, count) in inv.iter().enumerate() {
        let p = p as i32;
        if *count == 0 || p > dmax {
            continue;
        }
        let bound = if base_filtered { (dmax - p) as u32 } else { pres.truncation };
        let q = QuotientRing::new(&base.table, &base.relations, bound, -p..=dmax - p)?;
        for (e, r) in q.ranks() {
            expected[(p + e) as usize] += count * r;
        }
    }
    Ok(RankReport {
        by_order,
        by_averaging,
        declared,
        profile: pres.rank_profile(),
        expected_profile: expected,
    })
}

/// Outcome of [`mode_coherence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    /// Cobordism relations with `bᵢ ↦ 0`, over the Chow table.
    pub specialized: Vec<usize>,
    pub chow: Vec<usize>,
    /// Cobordism relations with `bᵢ ↦ 0`, keeping the Lazard coefficients.
    pub specialized_lazard: Vec<usize>,
    /// `Σₖ dim 𝕃_{−k} · chow_{d+k}`.
    pub tensored: Vec<usize>,
}

impl CoherenceReport {
    pub fn ok(&self) -> bool {
        self.specialized == self.chow && self.specialized_lazard == self.tensored
    }
}

/// Compares a cobordism-mode presentation, specialized at `bᵢ ↦ 0`, with
/// the Chow-mode presentation of the same job.
pub fn mode_coherence(cob: &RingPresentation, chow: &RingPresentation) -> Result<CoherenceReport> {
    if cob.mode != Mode::Cobordism || chow.mode != Mode::Chow {
        return Err(Error::parameter("expected a cobordism and a Chow presentation"));
    }
    if cob.truncation != chow.truncation {
        return Err(Error::parameter("truncation degrees differ"));
    }
    let b = cob.lazard_indices();
    let zeroed: Vec<GradedPolynomial> = cob.relations.iter().map(|r| r.specialize_zero(&b)).collect();
    let x_vars: Vec<usize> = match &cob.flag {
        Some(f) => (0..f.datum.rank()).collect(),
        None => Vec::new(),
    };
    let group = cob.group.as_ref();

    let chow_rels: Vec<GradedPolynomial> = zeroed
        .iter()
        .map(|r| r.embed(&chow.table))
        .collect::<Result<_>>()?;
    let (_, spec_chow, _) =
        presentation_ranks(&chow.table, &chow_rels, chow.truncation, group, &x_vars)?;
    let (_, spec_lazard, _) =
        presentation_ranks(&cob.table, &zeroed, cob.truncation, group, &x_vars)?;

    let chow_profile = chow.rank_profile();
    let dmax = chow.truncation;
    let tensored = (0..=dmax)
        .map(|d| {
            (0..=dmax - d)
                .map(|k| cob.coefficients.graded_dimension(k) * chow_profile[(d + k) as usize])
                .sum()
        })
        .collect();
    Ok(CoherenceReport {
        specialized: spec_chow.values().copied().collect(),
        chow: chow_profile,
        specialized_lazard: spec_lazard.values().copied().collect(),
        tensored,
    })
}
