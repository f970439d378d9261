use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::linalg::{Echelon, SparseRow};
use super::{monomials_of_degree, GradedPolynomial, Monomial, Rational, VariableTable};
use crate::{Error, Result};

/// One graded piece of a truncated quotient ring.
#[derive(Debug, Clone)]
pub struct QuotientSlice {
    pub degree: i32,
    /// Standard (non-pivot) monomials: a ℚ-basis of the piece.
    pub standard: Vec<Monomial>,
    normal_forms: HashMap<Monomial, SparseRow>,
}

impl QuotientSlice {
    pub fn rank(&self) -> usize {
        self.standard.len()
    }

    /// Coordinates of a monomial of this degree over `standard`.
    pub fn normal_form_of(&self, m: &Monomial) -> Option<&SparseRow> {
        self.normal_forms.get(m)
    }
}

/// Degreewise presentation of `ℚ[vars]/(relations + F_{D+1})`, where
/// `F_{D+1}` is the span of monomials of filtration weight above `D`.
///
/// For positively graded tables and degrees `≤ D` the truncation is
/// invisible; over the Lazard ring it realises the finite-order quotient of
/// the completed ring.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    table: Arc<VariableTable>,
    relations: Vec<GradedPolynomial>,
    bound: u32,
    slices: BTreeMap<i32, QuotientSlice>,
}

impl QuotientRing {
    pub fn new(
        table: &Arc<VariableTable>,
        relations: &[GradedPolynomial],
        bound: u32,
        degrees: RangeInclusive<i32>,
    ) -> Result<Self> {
        let mut rels = Vec::new();
        for (k, r) in relations.iter().enumerate() {
            if !super::polynomial::same_table(r.table(), table) {
                return Err(Error::structural(format!(
                    "relation {k} is over a different table"
                )));
            }
            if r.is_zero() {
                continue;
            }
            if r.homogeneous_degree().is_none() {
                return Err(Error::structural(format!(
                    "relation {k} is not homogeneous: {r}"
                )));
            }
            rels.push(r.clone());
        }
        let mut slices = BTreeMap::new();
        for d in degrees {
            slices.insert(d, Self::slice(table, &rels, bound, d)?);
        }
        Ok(QuotientRing {
            table: Arc::clone(table),
            relations: rels,
            bound,
            slices,
        })
    }

    fn slice(
        table: &Arc<VariableTable>,
        relations: &[GradedPolynomial],
        bound: u32,
        d: i32,
    ) -> Result<QuotientSlice> {
        let basis = monomials_of_degree(table, d, Some(bound))?;
        let index: HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ech = Echelon::new(basis.len());
        let one = Rational::one();
        for r in relations {
            let e = r.homogeneous_degree().expect("checked homogeneous");
            for m in monomials_of_degree(table, d - e, Some(bound))? {
                let product = r.mul_monomial(&m, &one);
                let mut row: SparseRow = product
                    .terms()
                    .iter()
                    .filter_map(|(t, c)| index.get(t).map(|&i| (i, c.clone())))
                    .collect();
                row.sort_by_key(|x| x.0);
                if !row.is_empty() {
                    ech.insert(row);
                }
            }
        }
        let non_pivots = ech.non_pivots();
        let position: HashMap<usize, usize> = non_pivots
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, k))
            .collect();
        let standard: Vec<Monomial> = non_pivots.iter().map(|&c| basis[c].clone()).collect();
        let mut normal_forms = HashMap::with_capacity(basis.len());
        for (c, m) in basis.iter().enumerate() {
            let nf: SparseRow = match ech.pivot_row(c) {
                None => vec![(position[&c], one.clone())],
                Some(row) => row
                    .iter()
                    .filter(|(col, _)| *col != c)
                    .map(|(col, v)| (position[col], -v.clone()))
                    .collect(),
            };
            normal_forms.insert(m.clone(), nf);
        }
        Ok(QuotientSlice {
            degree: d,
            standard,
            normal_forms,
        })
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn relations(&self) -> &[GradedPolynomial] {
        &self.relations
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn slice_at(&self, d: i32) -> Option<&QuotientSlice> {
        self.slices.get(&d)
    }

    pub fn slices(&self) -> impl Iterator<Item = &QuotientSlice> {
        self.slices.values()
    }

    /// ℚ-dimension of each computed graded piece.
    pub fn ranks(&self) -> BTreeMap<i32, usize> {
        self.slices.iter().map(|(d, s)| (*d, s.rank())).collect()
    }

    /// ℚ-dimensions split by degree and auxiliary label.
    pub fn labelled_ranks(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for (d, s) in &self.slices {
            for m in &s.standard {
                *out.entry((*d, m.label(&self.table))).or_insert(0) += 1;
            }
        }
        out
    }

    /// Normal form as a polynomial in standard monomials. Terms above the
    /// truncation bound vanish; terms in degrees that were not computed are
    /// an error.
    pub fn normal_form(&self, p: &GradedPolynomial) -> Result<GradedPolynomial> {
        let p = p.embed(&self.table)?;
        let mut out = GradedPolynomial::zero(&self.table);
        for (m, c) in p.terms() {
            if m.weight(&self.table) > self.bound {
                continue;
            }
            let d = m.degree(&self.table);
            let slice = self.slices.get(&d).ok_or_else(|| {
                Error::parameter(format!("degree {d} lies outside the computed range"))
            })?;
            let nf = slice
                .normal_forms
                .get(m)
                .expect("every bounded monomial of a computed degree has a normal form");
            for (k, v) in nf {
                out.add_term(slice.standard[*k].clone(), v * c);
            }
        }
        Ok(out)
    }

    /// Coordinates of a homogeneous element over the standard basis of degree `d`.
    pub fn coordinates(&self, p: &GradedPolynomial, d: i32) -> Result<Vec<Rational>> {
        let slice = self
            .slices
            .get(&d)
            .ok_or_else(|| Error::parameter(format!("degree {d} lies outside the computed range")))?;
        let nf = self.normal_form(p)?;
        let mut coords = vec![Rational::zero(); slice.rank()];
        let position: HashMap<&Monomial, usize> = slice
            .standard
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        for (m, c) in nf.terms() {
            match position.get(m) {
                Some(&i) => coords[i] = c.clone(),
                None => {
                    return Err(Error::structural(format!(
                        "element has a component outside degree {d}"
                    )))
                }
            }
        }
        Ok(coords)
    }

    pub fn is_zero(&self, p: &GradedPolynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn projective_line_times_fiber() {
        // ℚ[h, x1, x2]/(h², x1 + x2, x1 x2): ranks (1, 2, 1).
        let t = VariableTable::new([("x1", 1), ("x2", 1), ("h", 1)])
            .unwrap()
            .shared();
        let rels: Vec<_> = ["h^2", "x1 + x2", "x1*x2"]
            .iter()
            .map(|s| parse_polynomial(s, &t).unwrap())
            .collect();
        let q = QuotientRing::new(&t, &rels, 6, 0..=6).unwrap();
        let ranks: Vec<usize> = q.ranks().values().copied().collect();
        assert_eq!(ranks, vec![1, 2, 1, 0, 0, 0, 0]);
        let x2 = parse_polynomial("x2", &t).unwrap();
        assert_eq!(q.normal_form(&x2).unwrap().to_string(), "-x1");
    }

    #[test]
    fn lazard_truncation() {
        // ℚ[x, b1, b2]/(x²) truncated at weight 2, degree 0: {1, b1·x}.
        let t = VariableTable::new([("x", 1), ("b1", -1), ("b2", -2)])
            .unwrap()
            .shared();
        let rels = vec![parse_polynomial("x^2", &t).unwrap()];
        let q = QuotientRing::new(&t, &rels, 2, 0..=2).unwrap();
        assert_eq!(q.ranks()[&0], 2);
        assert_eq!(q.ranks()[&1], 1);
        assert_eq!(q.ranks()[&2], 0);
    }

    #[test]
    fn rejects_inhomogeneous_relations() {
        let t = VariableTable::new([("h", 1)]).unwrap().shared();
        let rels = vec![parse_polynomial("h^2 + h", &t).unwrap()];
        assert!(QuotientRing::new(&t, &rels, 4, 0..=4).is_err());
    }
}
