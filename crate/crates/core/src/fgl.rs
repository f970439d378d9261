//! Formal group laws over the rational Lazard ring.
//!
//! Rationally the Lazard ring is free on the coefficients of the logarithm,
//! so it is presented as `ℚ[b₁, b₂, …]` with `deg bᵢ = −i` and
//! `log(t) = t + Σ bᵢ t^{i+1}`. The universal law is then
//! `F(u, v) = exp(log u + log v)`, and its coefficients `a_{ij}` are explicit
//! polynomials in the `bᵢ`.
//!
//! Sign convention: `c₁(L_{−χ})` is the formal inverse of `c₁(L_χ)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::poly::{monomials_of_degree, GradedPolynomial, Monomial, Rational, VariableTable};
use crate::{Error, Result};

/// How the coefficient ring of a formal group law is presented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    /// ℚ itself; the additive law (Chow mode).
    Rational,
    /// `ℚ[b₁..b_D]`, the Lazard ring truncated at degree `−D` (cobordism mode).
    LazardTruncated,
    /// ℚ, with the `bᵢ` specialised to user-supplied values.
    UserSpecialized,
}

/// Coefficient ring together with its generator table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientRing {
    kind: CoefficientKind,
    truncation: u32,
    generators: Vec<(String, i32)>,
}

impl CoefficientRing {
    pub fn rational() -> Self {
        CoefficientRing {
            kind: CoefficientKind::Rational,
            truncation: 0,
            generators: Vec::new(),
        }
    }

    /// `ℚ[b₁..b_D]` with `deg bᵢ = −i`.
    pub fn lazard(truncation: u32) -> Self {
        CoefficientRing {
            kind: CoefficientKind::LazardTruncated,
            truncation,
            generators: (1..=truncation as i32)
                .map(|i| (format!("b{i}"), -i))
                .collect(),
        }
    }

    fn specialized() -> Self {
        CoefficientRing {
            kind: CoefficientKind::UserSpecialized,
            truncation: 0,
            generators: Vec::new(),
        }
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn generators(&self) -> &[(String, i32)] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn is_lazard(&self) -> bool {
        self.kind == CoefficientKind::LazardTruncated
    }

    /// Table of the coefficient generators alone.
    pub fn coefficient_table(&self) -> Arc<VariableTable> {
        VariableTable::new(self.generators.iter().cloned())
            .expect("generator names are valid")
            .shared()
    }

    /// Table with `leading` variables followed by the coefficient generators.
    pub fn table_with<S: Into<String>>(
        &self,
        leading: impl IntoIterator<Item = (S, i32, i32)>,
    ) -> Result<Arc<VariableTable>> {
        let lead: Vec<(String, i32, i32)> =
            leading.into_iter().map(|(n, d, w)| (n.into(), d, w)).collect();
        let coeffs = self.generators.iter().map(|(n, d)| (n.clone(), *d, 0));
        Ok(VariableTable::with_weights(lead.into_iter().chain(coeffs))?.shared())
    }

    /// `dim_ℚ` of the degree `−k` part of the coefficient ring.
    pub fn graded_dimension(&self, k: u32) -> usize {
        if self.generators.is_empty() {
            return usize::from(k == 0);
        }
        let table = self.coefficient_table();
        monomials_of_degree(&table, -(k as i32), None)
            .map(|v| v.len())
            .unwrap_or(0)
    }

    /// Indices of the coefficient generators inside `table`.
    pub fn indices_in(&self, table: &VariableTable) -> Vec<usize> {
        self.generators
            .iter()
            .filter_map(|(n, _)| table.index_of(n))
            .collect()
    }
}

/// A character of the torus in the basis `χ₁..χ_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Character(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Character) -> Character {
        Character(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A one-dimensional commutative formal group law, truncated at
/// `u, v`-order `D`.
#[derive(Debug, Clone)]
pub struct FormalGroupLaw {
    ring: CoefficientRing,
    table: Arc<VariableTable>,
    series_table: Arc<VariableTable>,
    law: GradedPolynomial,
    log: Option<GradedPolynomial>,
    exp: Option<GradedPolynomial>,
    truncation: u32,
}

impl FormalGroupLaw {
    /// The universal law over `ℚ[b₁..b_D]`, built as `exp(log u + log v)`.
    pub fn universal(truncation: u32) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::parameter("truncation degree must be at least 1"));
        }
        let d = truncation;
        let ring = CoefficientRing::lazard(d);
        let table = ring.table_with([("u", 1, 0), ("v", 1, 0)])?;
        let series_table = ring.table_with([("t", 1, 0)])?;
        let t = GradedPolynomial::var(&series_table, "t")?;
        let mut log = t.clone();
        for i in 1..d {
            let b = GradedPolynomial::var(&series_table, &format!("b{i}"))?;
            log = &log + &(&b * &t.pow(i + 1, Some(d)));
        }
        // Each pass fixes exp one further order: e ← e − (log∘e − t).
        let mut exp = t.clone();
        for _ in 0..d {
            let composed = compose(&log, "t", &exp, &series_table, d)?;
            exp = &exp - &(&composed - &t);
        }
        let u = GradedPolynomial::var(&table, "u")?;
        let v = GradedPolynomial::var(&table, "v")?;
        let log_u = compose(&log, "t", &u, &table, d)?;
        let log_v = compose(&log, "t", &v, &table, d)?;
        let law = compose(&exp, "t", &(&log_u + &log_v), &table, d)?;
        Ok(FormalGroupLaw {
            ring,
            table,
            series_table,
            law,
            log: Some(log),
            exp: Some(exp),
            truncation: d,
        })
    }

    /// `F(u, v) = u + v` over ℚ.
    pub fn additive(truncation: u32) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::parameter("truncation degree must be at least 1"));
        }
        let ring = CoefficientRing::rational();
        let table = ring.table_with([("u", 1, 0), ("v", 1, 0)])?;
        let series_table = ring.table_with([("t", 1, 0)])?;
        let law = &GradedPolynomial::var(&table, "u")? + &GradedPolynomial::var(&table, "v")?;
        let t = GradedPolynomial::var(&series_table, "t")?;
        Ok(FormalGroupLaw {
            ring,
            table,
            series_table,
            law,
            log: Some(t.clone()),
            exp: Some(t),
            truncation,
        })
    }

    /// Builds a law from explicit coefficients `a_{ij}` (`i, j ≥ 1`,
    /// `i + j ≤ D`) over `ring`. No axioms are checked here.
    pub fn from_coefficients(
        ring: CoefficientRing,
        truncation: u32,
        coefficients: &BTreeMap<(u32, u32), GradedPolynomial>,
    ) -> Result<Self> {
        let table = ring.table_with([("u", 1, 0), ("v", 1, 0)])?;
        let series_table = ring.table_with([("t", 1, 0)])?;
        let u = GradedPolynomial::var(&table, "u")?;
        let v = GradedPolynomial::var(&table, "v")?;
        let mut law = &u + &v;
        for (&(i, j), a) in coefficients {
            if i == 0 || j == 0 || i + j > truncation {
                return Err(Error::parameter(format!(
                    "coefficient a_{i}{j} is outside the truncated range"
                )));
            }
            let a = a.embed(&table)?;
            law = &law + &(&a * &(&u.pow(i, None) * &v.pow(j, None)));
        }
        Ok(FormalGroupLaw {
            ring,
            table,
            series_table,
            law,
            log: None,
            exp: None,
            truncation,
        })
    }

    /// Specialises the coefficient generators `b₁, b₂, …` to the given
    /// rationals (missing values are zero).
    pub fn specialize(&self, values: &[Rational]) -> Result<Self> {
        let ring = CoefficientRing::specialized();
        let table = ring.table_with([("u", 1, 0), ("v", 1, 0)])?;
        let series_table = ring.table_with([("t", 1, 0)])?;
        let map_for = |target: &Arc<VariableTable>| -> BTreeMap<String, GradedPolynomial> {
            self.ring
                .generator_names()
                .into_iter()
                .enumerate()
                .map(|(i, n)| {
                    let c = values.get(i).cloned().unwrap_or_else(Rational::zero);
                    (n, GradedPolynomial::constant(target, c))
                })
                .collect()
        };
        let law = self
            .law
            .substitute(&map_for(&table), &table, Some(self.truncation))?;
        let log = match &self.log {
            Some(l) => Some(l.substitute(&map_for(&series_table), &series_table, Some(self.truncation))?),
            None => None,
        };
        let exp = match &self.exp {
            Some(e) => Some(e.substitute(&map_for(&series_table), &series_table, Some(self.truncation))?),
            None => None,
        };
        Ok(FormalGroupLaw {
            ring,
            table,
            series_table,
            law,
            log,
            exp,
            truncation: self.truncation,
        })
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// `F(u, v)` over the table `(u, v, b₁, …)`.
    pub fn law(&self) -> &GradedPolynomial {
        &self.law
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    /// The logarithm as a series in `t`, when known.
    pub fn log(&self) -> Option<&GradedPolynomial> {
        self.log.as_ref()
    }

    pub fn exp(&self) -> Option<&GradedPolynomial> {
        self.exp.as_ref()
    }

    pub fn series_table(&self) -> &Arc<VariableTable> {
        &self.series_table
    }

    /// The coefficient `a_{ij}` of `uⁱvʲ`, as a polynomial in the coefficient generators.
    pub fn coefficient(&self, i: u32, j: u32) -> GradedPolynomial {
        let target = self.ring.coefficient_table();
        let ui = self.table.index_of("u").expect("u");
        let vi = self.table.index_of("v").expect("v");
        let mut out = GradedPolynomial::zero(&target);
        for (m, c) in self.law.terms() {
            if m.exponent(ui) != i || m.exponent(vi) != j {
                continue;
            }
            let exps: Vec<u32> = (0..target.len())
                .map(|k| m.exponent(self.table.index_of(target.name(k)).expect("coefficient")))
                .collect();
            out = &out + &GradedPolynomial::monomial(&target, Monomial::from_exponents(exps), c.clone());
        }
        out
    }

    /// All nonzero coefficients `a_{ij}` with `i, j ≥ 1`.
    pub fn coefficients(&self) -> BTreeMap<(u32, u32), GradedPolynomial> {
        let mut out = BTreeMap::new();
        for n in 2..=self.truncation {
            for i in 1..n {
                let a = self.coefficient(i, n - i);
                if !a.is_zero() {
                    out.insert((i, n - i), a);
                }
            }
        }
        out
    }

    fn check_bound(&self, bound: u32) -> Result<()> {
        if bound > self.truncation {
            return Err(Error::parameter(format!(
                "requested order {bound} exceeds the law's truncation {}",
                self.truncation
            )));
        }
        Ok(())
    }

    /// `F(p, q)`, truncated at `bound`. Both arguments must have no term of
    /// filtration weight zero, and their table must contain the coefficient
    /// generators by name.
    pub fn fgl_sum(
        &self,
        p: &GradedPolynomial,
        q: &GradedPolynomial,
        bound: u32,
    ) -> Result<GradedPolynomial> {
        self.check_bound(bound)?;
        for (name, x) in [("first", p), ("second", q)] {
            if x.min_weight() == Some(0) {
                return Err(Error::parameter(format!(
                    "{name} argument of the formal sum has a nonzero constant term: {x}"
                )));
            }
        }
        if p.table() != q.table() {
            return Err(Error::structural("formal sum of elements over different tables"));
        }
        let target = p.table();
        let map = BTreeMap::from([("u".to_string(), p.clone()), ("v".to_string(), q.clone())]);
        self.law.substitute(&map, target, Some(bound))
    }

    /// Table `(name, b₁, …)` for univariate series.
    pub fn univariate_table(&self, name: &str) -> Result<Arc<VariableTable>> {
        self.ring.table_with([(name, 1, 0)])
    }

    /// Formal inverse `ι(x)` with `F(x, ι(x)) = 0`, as a series in `x`.
    pub fn inverse_series(&self, bound: u32) -> Result<GradedPolynomial> {
        self.check_bound(bound)?;
        let table = self.univariate_table("x")?;
        let x = GradedPolynomial::var(&table, "x")?;
        let mut inv = -&x;
        for _ in 0..bound {
            let sum = self.fgl_sum(&x, &inv, bound)?;
            inv = &inv - &sum;
        }
        Ok(inv)
    }

    /// The n-series `[n](x)`: the formal sum of `n` copies of `x`, with
    /// `[−n](x) = ι([n](x))`.
    pub fn n_series(&self, n: i64, bound: u32) -> Result<GradedPolynomial> {
        self.check_bound(bound)?;
        let table = self.univariate_table("x")?;
        let x = GradedPolynomial::var(&table, "x")?;
        let mut acc = GradedPolynomial::zero(&table);
        for _ in 0..n.unsigned_abs() {
            acc = self.fgl_sum(&acc, &x, bound)?;
        }
        if n < 0 {
            let inv = self.inverse_series(bound)?;
            acc = compose(&inv, "x", &acc, &table, bound)?;
        }
        Ok(acc)
    }

    /// Table `(x₁..x_r, b₁, …)` of the torus Chern roots.
    pub fn torus_table(&self, rank: usize) -> Result<Arc<VariableTable>> {
        self.ring
            .table_with((1..=rank).map(|i| (format!("x{i}"), 1, 0)))
    }

    /// `c₁(L_χ) = [n₁](x₁) +_F … +_F [n_r](x_r)` over [`Self::torus_table`].
    pub fn chern_of_character(&self, chi: &Character, rank: usize, bound: u32) -> Result<GradedPolynomial> {
        if chi.rank() != rank {
            return Err(Error::parameter(format!(
                "character has length {} but the torus has rank {rank}",
                chi.rank()
            )));
        }
        let table = self.torus_table(rank)?;
        let classes: Vec<GradedPolynomial> = (0..rank)
            .map(|i| GradedPolynomial::var_index(&table, i))
            .collect();
        self.chern_of_character_in(chi, &classes, bound)
    }

    /// As [`Self::chern_of_character`], with `c₁(χᵢ)` given by `classes[i]`.
    pub fn chern_of_character_in(
        &self,
        chi: &Character,
        classes: &[GradedPolynomial],
        bound: u32,
    ) -> Result<GradedPolynomial> {
        if chi.rank() != classes.len() {
            return Err(Error::parameter(format!(
                "character has length {} but {} classes were supplied",
                chi.rank(),
                classes.len()
            )));
        }
        let Some(first) = classes.first() else {
            return Err(Error::parameter("empty character basis"));
        };
        let target = Arc::clone(first.table());
        let mut acc = GradedPolynomial::zero(&target);
        for (n, class) in chi.0.iter().zip(classes) {
            if *n == 0 || class.is_zero() {
                continue;
            }
            let series = self.n_series(*n, bound)?;
            let term = compose(&series, "x", class, &target, bound)?;
            acc = self.fgl_sum(&acc, &term, bound)?;
        }
        Ok(acc)
    }
}

/// Substitutes `var ↦ value` in `series`, truncating at `bound`.
fn compose(
    series: &GradedPolynomial,
    var: &str,
    value: &GradedPolynomial,
    target: &Arc<VariableTable>,
    bound: u32,
) -> Result<GradedPolynomial> {
    let map = BTreeMap::from([(var.to_string(), value.clone())]);
    series.substitute(&map, target, Some(bound))
}

impl fmt::Display for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn universal_low_orders() {
        assert!(FormalGroupLaw::universal(0).is_err());
        assert_eq!(FormalGroupLaw::universal(1).unwrap().to_string(), "u + v");
        let f2 = FormalGroupLaw::universal(2).unwrap();
        assert_eq!(f2.to_string(), "u + v - 2*b1*u*v");
        assert_eq!(f2.coefficient(1, 1).to_string(), "-2*b1");
    }

    #[test]
    fn universal_order_three_coefficient() {
        // Hand expansion of exp(log u + log v) with log t = t + b1 t² + b2 t³:
        // a12 = −2 b1² + 3 (2 b1² − b2) = 4 b1² − 3 b2.
        let f = FormalGroupLaw::universal(3).unwrap();
        let coeffs = f.ring().coefficient_table();
        let expected = parse_polynomial("4*b1^2 - 3*b2", &coeffs).unwrap();
        assert_eq!(f.coefficient(1, 2), expected);
        assert_eq!(f.coefficient(2, 1), expected);
    }

    #[test]
    fn exp_inverts_log() {
        let f = FormalGroupLaw::universal(6).unwrap();
        let t = GradedPolynomial::var(f.series_table(), "t").unwrap();
        let log = f.log().unwrap();
        let exp = f.exp().unwrap();
        assert_eq!(compose(exp, "t", log, f.series_table(), 6).unwrap(), t);
        assert_eq!(compose(log, "t", exp, f.series_table(), 6).unwrap(), t);
    }

    #[test]
    fn additive_law() {
        let f = FormalGroupLaw::additive(5).unwrap();
        assert_eq!(f.to_string(), "u + v");
        assert_eq!(f.n_series(5, 5).unwrap().to_string(), "5*x");
        assert_eq!(f.n_series(-2, 5).unwrap().to_string(), "-2*x");
    }

    #[test]
    fn specialization_to_zero_is_additive() {
        for d in 1..=5 {
            let spec = FormalGroupLaw::universal(d).unwrap().specialize(&[]).unwrap();
            assert_eq!(spec.law(), FormalGroupLaw::additive(d).unwrap().law());
        }
    }

    #[test]
    fn n_series_values() {
        let f = FormalGroupLaw::universal(2).unwrap();
        assert_eq!(f.n_series(0, 2).unwrap().to_string(), "0");
        assert_eq!(f.n_series(1, 2).unwrap().to_string(), "x");
        assert_eq!(f.n_series(2, 2).unwrap().to_string(), "2*x - 2*b1*x^2");
    }

    #[test]
    fn inverse_cancels() {
        let f = FormalGroupLaw::universal(5).unwrap();
        let inv = f.inverse_series(5).unwrap();
        let x = GradedPolynomial::var(inv.table(), "x").unwrap();
        assert!(f.fgl_sum(&x, &inv, 5).unwrap().is_zero());
    }

    #[test]
    fn chern_of_characters() {
        let f = FormalGroupLaw::universal(2).unwrap();
        let c = f.chern_of_character(&Character(vec![1, 0]), 2, 2).unwrap();
        assert_eq!(c.to_string(), "x1");
        let c = f.chern_of_character(&Character(vec![1, 1]), 2, 2).unwrap();
        assert_eq!(c.to_string(), "x1 + x2 - 2*b1*x1*x2");
        assert!(matches!(
            f.chern_of_character(&Character(vec![1]), 2, 2),
            Err(Error::Parameter(_))
        ));
        let chow = FormalGroupLaw::additive(4).unwrap();
        let c = chow.chern_of_character(&Character(vec![2, -1]), 2, 4).unwrap();
        assert_eq!(c.to_string(), "2*x1 - x2");
    }

    #[test]
    fn fgl_sum_unit_and_constant_check() {
        let f = FormalGroupLaw::universal(4).unwrap();
        let table = f.torus_table(2).unwrap();
        let p = parse_polynomial("x1 + b1*x1^2", &table).unwrap();
        let zero = GradedPolynomial::zero(&table);
        assert_eq!(f.fgl_sum(&p, &zero, 4).unwrap(), p);
        let bad = parse_polynomial("1 + x1", &table).unwrap();
        assert!(matches!(f.fgl_sum(&bad, &p, 4), Err(Error::Parameter(_))));
        assert!(f.fgl_sum(&p, &p, 5).is_err());
    }

    #[test]
    fn lazard_dimensions_are_partition_counts() {
        let ring = CoefficientRing::lazard(6);
        let dims: Vec<usize> = (0..=6).map(|k| ring.graded_dimension(k)).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 5, 7, 11]);
        assert_eq!(CoefficientRing::rational().graded_dimension(0), 1);
        assert_eq!(CoefficientRing::rational().graded_dimension(2), 0);
    }
}
