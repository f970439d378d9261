use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational, VariableTable};
use crate::{Error, Result};

/// Exact polynomial over ℚ in the variables of a shared [`VariableTable`].
///
/// Zero coefficients are never stored; terms are kept in graded-lex order.
#[derive(Debug, Clone)]
pub struct GradedPolynomial {
    table: Arc<VariableTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for GradedPolynomial {}

pub(crate) fn same_table(a: &Arc<VariableTable>, b: &Arc<VariableTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GradedPolynomial {
    pub fn zero(table: &Arc<VariableTable>) -> Self {
        GradedPolynomial {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<VariableTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<VariableTable>, c: Rational) -> Self {
        Self::monomial(table, Monomial::one(table.len()), c)
    }

    pub fn integer(table: &Arc<VariableTable>, c: i64) -> Self {
        Self::constant(table, super::rat(c))
    }

    pub fn monomial(table: &Arc<VariableTable>, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.len(), table.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedPolynomial {
            table: Arc::clone(table),
            terms,
        }
    }

    pub fn var(table: &Arc<VariableTable>, name: &str) -> Result<Self> {
        let i = table
            .index_of(name)
            .ok_or_else(|| Error::structural(format!("unknown variable `{name}`")))?;
        Ok(Self::var_index(table, i))
    }

    pub fn var_index(table: &Arc<VariableTable>, i: usize) -> Self {
        Self::monomial(table, Monomial::var(table.len(), i), Rational::one())
    }

    pub fn from_terms(
        table: &Arc<VariableTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(table);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.table.len()))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &Self) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::structural(format!(
                "mismatched variable tables [{}] and [{}]",
                self.table.names().join(", "),
                other.table.names().join(", ")
            )))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Product truncated at filtration weight `bound` (no truncation for `None`).
    pub fn checked_mul(&self, other: &Self, bound: Option<u32>) -> Result<Self> {
        self.check_table(other)?;
        let table = &self.table;
        let mut out = Self::zero(table);
        // Weights are additive, so pre-filtering each factor is exact.
        let lhs: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.weight(table)))
            .filter(|(_, _, w)| bound.map_or(true, |b| *w <= b))
            .collect();
        let rhs: Vec<_> = other
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.weight(table)))
            .filter(|(_, _, w)| bound.map_or(true, |b| *w <= b))
            .collect();
        for (ma, ca, wa) in &lhs {
            for (mb, cb, wb) in &rhs {
                if let Some(b) = bound {
                    if wa + wb > b {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), (*ca) * (*cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        GradedPolynomial {
            table: Arc::clone(&self.table),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        GradedPolynomial::from_terms(
            &self.table,
            self.terms.iter().map(|(t, x)| (t.mul(m), x * c)),
        )
    }

    pub fn pow(&self, n: u32, bound: Option<u32>) -> Self {
        let mut result = Self::one(&self.table).truncate(bound);
        let mut base = self.truncate(bound);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.checked_mul(&base, bound).expect("same table");
            }
            n >>= 1;
            if n > 0 {
                base = base.checked_mul(&base, bound).expect("same table");
            }
        }
        result
    }

    /// Drops every term whose filtration weight exceeds `bound`.
    pub fn truncate(&self, bound: Option<u32>) -> Self {
        match bound {
            None => self.clone(),
            Some(b) => GradedPolynomial {
                table: Arc::clone(&self.table),
                terms: self
                    .terms
                    .iter()
                    .filter(|(m, _)| m.weight(&self.table) <= b)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect(),
            },
        }
    }

    /// Set of degrees occurring in the polynomial.
    pub fn degrees(&self) -> BTreeSet<i32> {
        self.terms.keys().map(|m| m.degree(&self.table)).collect()
    }

    /// The common degree of all terms, `None` if the polynomial is zero or
    /// not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let degrees = self.degrees();
        if degrees.len() == 1 {
            degrees.into_iter().next()
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.is_empty() || self.homogeneous_degree().is_some()
    }

    /// Largest filtration weight of any term (0 for the zero polynomial).
    pub fn max_weight(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.weight(&self.table))
            .max()
            .unwrap_or(0)
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weight(&self.table)).min()
    }

    /// Homogeneous component of filtration weight `w`.
    pub fn weight_component(&self, w: u32) -> Self {
        GradedPolynomial {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(&self.table) == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Variables (by index) that occur with positive exponent.
    pub fn support_variables(&self) -> BTreeSet<usize> {
        let mut vars = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    vars.insert(i);
                }
            }
        }
        vars
    }

    /// Re-expresses this polynomial over `target`, mapping variables by name.
    pub fn embed(&self, target: &Arc<VariableTable>) -> Result<Self> {
        if same_table(&self.table, target) {
            let mut p = self.clone();
            p.table = Arc::clone(target);
            return Ok(p);
        }
        let mut map = Vec::with_capacity(self.table.len());
        let used = self.support_variables();
        for i in 0..self.table.len() {
            let name = self.table.name(i);
            match target.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if !used.contains(&i) => map.push(None),
                None => {
                    return Err(Error::structural(format!(
                        "variable `{name}` does not exist in the target table"
                    )))
                }
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &x) in m.exponents().iter().enumerate() {
                if x > 0 {
                    e[map[i].expect("used variable mapped")] = x;
                }
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }

    /// Sets the listed variables to zero.
    pub fn specialize_zero(&self, vars: &[usize]) -> Self {
        GradedPolynomial {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&i| m.exponent(i) == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at a rational point (one value per variable).
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.table.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term *= &point[i];
                }
            }
            total += term;
        }
        total
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.table);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e > 0 {
                out.add_term(
                    m.div_var(i).expect("positive exponent"),
                    c * super::rat(e as i64),
                );
            }
        }
        out
    }

    /// Simultaneous substitution; see [`poly_substitute`].
    pub fn substitute(
        &self,
        map: &BTreeMap<String, GradedPolynomial>,
        target: &Arc<VariableTable>,
        bound: Option<u32>,
    ) -> Result<Self> {
        for (name, value) in map {
            if self.table.index_of(name).is_none() {
                return Err(Error::structural(format!(
                    "substitution names unknown variable `{name}`"
                )));
            }
            if !same_table(value.table(), target) {
                return Err(Error::structural(format!(
                    "substituted value for `{name}` is not over the target table"
                )));
            }
        }
        let used = self.support_variables();
        let mut images: Vec<Option<GradedPolynomial>> = Vec::with_capacity(self.table.len());
        for i in 0..self.table.len() {
            if !used.contains(&i) {
                images.push(None);
                continue;
            }
            let name = self.table.name(i);
            let image = match map.get(name) {
                Some(v) => v.clone(),
                None => GradedPolynomial::var(target, name).map_err(|_| {
                    Error::structural(format!(
                        "variable `{name}` is neither substituted nor present in the target table"
                    ))
                })?,
            };
            images.push(Some(image));
        }
        // Powers are cached per variable since exponents repeat across terms.
        let mut powers: Vec<Vec<GradedPolynomial>> = images
            .iter()
            .map(|_| vec![GradedPolynomial::one(target)])
            .collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = GradedPolynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let image = images[i].as_ref().expect("used variable has an image");
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache
                        .last()
                        .expect("nonempty")
                        .checked_mul(image, bound)?;
                    cache.push(next);
                }
                term = term.checked_mul(&cache[e as usize], bound)?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Terms sorted for display: ascending filtration weight, then
    /// descending graded-lex order.
    fn display_order(&self) -> Vec<(&Monomial, &Rational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            a.weight(&self.table)
                .cmp(&b.weight(&self.table))
                .then_with(|| b.cmp(a))
        });
        terms
    }
}

/// Product of `p` and `q`, discarding every term of filtration weight above `bound`.
pub fn poly_mul(p: &GradedPolynomial, q: &GradedPolynomial, bound: u32) -> Result<GradedPolynomial> {
    p.checked_mul(q, Some(bound))
}

/// Simultaneous substitution of variables of `p` by polynomials over `target`.
///
/// Variables absent from `map` are carried over by name. The result is
/// truncated at `bound`.
pub fn poly_substitute(
    p: &GradedPolynomial,
    map: &BTreeMap<String, GradedPolynomial>,
    target: &Arc<VariableTable>,
    bound: u32,
) -> Result<GradedPolynomial> {
    p.substitute(map, target, Some(bound))
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.display_order().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.render(&self.table))?;
            } else {
                write!(f, "{}*{}", abs, m.render(&self.table))?;
            }
        }
        Ok(())
    }
}

fn combine(a: &GradedPolynomial, b: &GradedPolynomial, sign: bool) -> GradedPolynomial {
    assert!(
        same_table(&a.table, &b.table),
        "polynomial arithmetic across different variable tables"
    );
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(m.clone(), if sign { c.clone() } else { -c.clone() });
    }
    out
}

impl Add for &GradedPolynomial {
    type Output = GradedPolynomial;

    /// Panics if the operands live over different tables; use
    /// [`GradedPolynomial::checked_add`] for a fallible version.
    fn add(self, rhs: Self) -> GradedPolynomial {
        combine(self, rhs, true)
    }
}

impl Sub for &GradedPolynomial {
    type Output = GradedPolynomial;

    fn sub(self, rhs: Self) -> GradedPolynomial {
        combine(self, rhs, false)
    }
}

impl Mul for &GradedPolynomial {
    type Output = GradedPolynomial;

    fn mul(self, rhs: Self) -> GradedPolynomial {
        self.checked_mul(rhs, None)
            .expect("polynomial arithmetic across different variable tables")
    }
}

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;

    fn neg(self) -> GradedPolynomial {
        GradedPolynomial {
            table: Arc::clone(&self.table),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;

    fn neg(self) -> GradedPolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn s2() -> Arc<VariableTable> {
        VariableTable::new([("x1", 1), ("x2", 1)]).unwrap().shared()
    }

    #[test]
    fn difference_of_squares() {
        let t = s2();
        let x1 = GradedPolynomial::var(&t, "x1").unwrap();
        let x2 = GradedPolynomial::var(&t, "x2").unwrap();
        let p = poly_mul(&(&x1 + &x2), &(&x1 - &x2), 10).unwrap();
        assert_eq!(p, &(&x1 * &x1) - &(&x2 * &x2));
        assert_eq!(p.to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn zero_absorbs() {
        let t = s2();
        let x1 = GradedPolynomial::var(&t, "x1").unwrap();
        let p = &x1 + &GradedPolynomial::integer(&t, 3);
        assert!(poly_mul(&p, &GradedPolynomial::zero(&t), 10)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn truncation_forces_zero() {
        let t = s2();
        let x1 = GradedPolynomial::var(&t, "x1").unwrap();
        let x2 = GradedPolynomial::var(&t, "x2").unwrap();
        let p = poly_mul(&(&x1 + &x2), &(&x1 * &x2), 2).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn mismatched_tables_are_structural_errors() {
        let a = s2();
        let b = VariableTable::new([("y", 1)]).unwrap().shared();
        let x1 = GradedPolynomial::var(&a, "x1").unwrap();
        let y = GradedPolynomial::var(&b, "y").unwrap();
        assert!(matches!(poly_mul(&x1, &y, 4), Err(Error::Structural(_))));
    }

    #[test]
    fn binomial_substitution() {
        let src = VariableTable::new([("x", 1)]).unwrap().shared();
        let dst = VariableTable::new([("u", 1), ("v", 1)]).unwrap().shared();
        let x = GradedPolynomial::var(&src, "x").unwrap();
        let p = &x * &x;
        let u = GradedPolynomial::var(&dst, "u").unwrap();
        let v = GradedPolynomial::var(&dst, "v").unwrap();
        let map = BTreeMap::from([("x".to_string(), &u + &v)]);
        let q = poly_substitute(&p, &map, &dst, 5).unwrap();
        let expected = &(&(&u * &u) + &(&u * &v).scale(&rat(2))) + &(&v * &v);
        assert_eq!(q, expected);
    }

    #[test]
    fn identity_substitution() {
        let t = s2();
        let x1 = GradedPolynomial::var(&t, "x1").unwrap();
        let x2 = GradedPolynomial::var(&t, "x2").unwrap();
        let p = &(&x1 * &x2) + &x2;
        let map = BTreeMap::from([("x1".to_string(), x1.clone())]);
        assert_eq!(poly_substitute(&p, &map, &t, 10).unwrap(), p);
    }

    #[test]
    fn iterated_substitution_matches_hand_expansion() {
        // x ↦ x + b1 x² twice: x + 2 b1 x² + 2 b1² x³ + ... up to weight 3.
        let t = VariableTable::new([("x", 1), ("b1", -1)]).unwrap().shared();
        let x = GradedPolynomial::var(&t, "x").unwrap();
        let b1 = GradedPolynomial::var(&t, "b1").unwrap();
        let step = &x + &(&b1 * &(&x * &x));
        let map = BTreeMap::from([("x".to_string(), step.clone())]);
        let once = poly_substitute(&x, &map, &t, 3).unwrap();
        let twice = poly_substitute(&once, &map, &t, 3).unwrap();
        // Oracle: compose step with itself by direct expansion,
        // (x + b1 x²) + b1 (x + b1 x²)² = x + 2 b1 x² + 2 b1² x³ + b1³ x⁴.
        let x2 = &x * &x;
        let x3 = &x2 * &x;
        let b1sq = &b1 * &b1;
        let expected = &(&x + &(&b1 * &x2).scale(&rat(2))) + &(&b1sq * &x3).scale(&rat(2));
        assert_eq!(twice, expected);
        assert_eq!(twice.to_string(), "x + 2*b1*x^2 + 2*b1^2*x^3");
    }

    #[test]
    fn unknown_substitution_variable() {
        let t = s2();
        let x1 = GradedPolynomial::var(&t, "x1").unwrap();
        let map = BTreeMap::from([("z".to_string(), x1.clone())]);
        assert!(matches!(
            poly_substitute(&x1, &map, &t, 3),
            Err(Error::Structural(_))
        ));
    }
}
