//! Independent recomputations used to cross-check the main constructions.
//!
//! Nothing here shares an algorithm with the code it checks: coinvariant
//! dimensions come from full kernels of `I_d`, the universal law from the
//! associativity constraints solved degree by degree, and the law axioms
//! from explicit residual polynomials.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::fgl::{CoefficientRing, FormalGroupLaw};
use crate::poly::{
    degree_slice_reduce, monomials_of_degree, GradedPolynomial, Monomial, Rational, VariableTable,
};
use crate::weyl::InvariantSet;
use crate::{Error, Result};

/// `dim S_d − dim I_d` for `d = 0, 1, …`, where `I_d` is spanned by all
/// `σᵢ·μ` with `μ` a monomial of degree `d − deg σᵢ`. Stops after the first
/// zero (or at `max_degree`).
pub fn coinvariant_dimensions_by_kernel(
    invariants: &InvariantSet,
    max_degree: i32,
) -> Result<Vec<usize>> {
    let table = invariants.table();
    let one = Rational::one();
    let mut dims = Vec::new();
    for d in 0..=max_degree {
        let mut vectors = Vec::new();
        for sigma in invariants.sigmas() {
            let e = sigma.homogeneous_degree().expect("homogeneous invariant");
            if e > d {
                continue;
            }
            for m in monomials_of_degree(table, d - e, None)? {
                vectors.push(sigma.mul_monomial(&m, &one));
            }
        }
        let slice = degree_slice_reduce(table, &vectors, d)?;
        let dim = slice.basis.len() - slice.rank();
        dims.push(dim);
        if dim == 0 {
            dims.pop();
            break;
        }
    }
    Ok(dims)
}

/// Residuals of the law axioms, each of which must vanish identically
/// modulo order `D + 1`.
#[derive(Debug, Clone)]
pub struct AxiomResiduals {
    /// `F(u, 0) − u`.
    pub left_unit: GradedPolynomial,
    /// `F(0, v) − v`.
    pub right_unit: GradedPolynomial,
    /// `F(u, v) − F(v, u)`.
    pub commutativity: GradedPolynomial,
    /// `F(F(u, v), w) − F(u, F(v, w))`.
    pub associativity: GradedPolynomial,
}

impl AxiomResiduals {
    pub fn all_zero(&self) -> bool {
        self.left_unit.is_zero()
            && self.right_unit.is_zero()
            && self.commutativity.is_zero()
            && self.associativity.is_zero()
    }
}

fn three_variable_table(ring: &CoefficientRing) -> Result<Arc<VariableTable>> {
    ring.table_with([("u", 1, 0), ("v", 1, 0), ("w", 1, 0)])
}

/// `F(a, b)` for `a, b` over `target`.
fn apply_law(
    law: &GradedPolynomial,
    a: &GradedPolynomial,
    b: &GradedPolynomial,
    target: &Arc<VariableTable>,
    bound: u32,
) -> Result<GradedPolynomial> {
    let map = BTreeMap::from([("u".to_string(), a.clone()), ("v".to_string(), b.clone())]);
    law.substitute(&map, target, Some(bound))
}

pub fn fgl_axiom_residuals(fgl: &FormalGroupLaw) -> Result<AxiomResiduals> {
    let d = fgl.truncation();
    let t3 = three_variable_table(fgl.ring())?;
    let law = fgl.law().embed(&t3)?;
    let u = GradedPolynomial::var(&t3, "u")?;
    let v = GradedPolynomial::var(&t3, "v")?;
    let w = GradedPolynomial::var(&t3, "w")?;
    let zero = GradedPolynomial::zero(&t3);
    let left_unit = &apply_law(&law, &u, &zero, &t3, d)? - &u;
    let right_unit = &apply_law(&law, &zero, &v, &t3, d)? - &v;
    let commutativity = &law - &apply_law(&law, &v, &u, &t3, d)?;
    let uv = apply_law(&law, &u, &v, &t3, d)?;
    let vw = apply_law(&law, &v, &w, &t3, d)?;
    let associativity = &apply_law(&law, &uv, &w, &t3, d)? - &apply_law(&law, &u, &vw, &t3, d)?;
    Ok(AxiomResiduals {
        left_unit,
        right_unit,
        commutativity,
        associativity,
    })
}

/// One linear equation `Σ cₖ zₖ = rhs` with `rhs` in the coefficient ring.
#[derive(Debug, Clone)]
struct Equation {
    coeffs: Vec<Rational>,
    rhs: GradedPolynomial,
}

/// Gauss–Jordan elimination over ℚ with polynomial right-hand sides.
/// Returns the reduced pivot equations, or an error if inconsistent.
fn eliminate(mut eqs: Vec<Equation>, n: usize) -> Result<Vec<(usize, Equation)>> {
    let mut pivots: Vec<(usize, Equation)> = Vec::new();
    for col in 0..n {
        let Some(pos) = eqs.iter().position(|e| !e.coeffs[col].is_zero()) else {
            continue;
        };
        let mut p = eqs.swap_remove(pos);
        let inv = Rational::one() / p.coeffs[col].clone();
        for c in p.coeffs.iter_mut() {
            *c *= &inv;
        }
        p.rhs = p.rhs.scale(&inv);
        let eliminate_from = |e: &mut Equation| {
            let f = e.coeffs[col].clone();
            if f.is_zero() {
                return;
            }
            for (c, pc) in e.coeffs.iter_mut().zip(&p.coeffs) {
                *c -= &f * pc;
            }
            e.rhs = &e.rhs - &p.rhs.scale(&f);
        };
        eqs.iter_mut().for_each(eliminate_from);
        for (_, q) in pivots.iter_mut() {
            eliminate_from(q);
        }
        pivots.push((col, p));
    }
    if let Some(bad) = eqs.iter().find(|e| !e.rhs.is_zero()) {
        return Err(Error::consistency(format!(
            "constraint system is inconsistent: 0 = {}",
            bad.rhs
        )));
    }
    Ok(pivots)
}

/// Solution of the degree-by-degree constraint system for a law over
/// `ℚ[b₁..b_D]`.
#[derive(Debug, Clone)]
pub struct ConstrainedLaw {
    pub coefficients: BTreeMap<(u32, u32), GradedPolynomial>,
    /// Dimension of the solution space before fixing `a_{1,n−1}`, per order
    /// `n = 2..=D`.
    pub free_parameters: Vec<usize>,
}

/// Reconstructs the law coefficients `a_{ij}` (`i + j ≤ D`) from the axioms
/// alone. At each order `n` the unknowns `a_{ij}` with `i + j = n` satisfy
/// linear equations from commutativity and associativity; the solution space
/// is one-dimensional, and is pinned by prescribing `a_{1,n−1}`.
pub fn lazard_by_constraints(
    truncation: u32,
    prescribe: impl Fn(u32) -> GradedPolynomial,
) -> Result<ConstrainedLaw> {
    let ring = CoefficientRing::lazard(truncation);
    let coeff_table = ring.coefficient_table();
    let mut known: BTreeMap<(u32, u32), GradedPolynomial> = BTreeMap::new();
    let mut free_parameters = Vec::new();
    for n in 2..=truncation {
        let pairs: Vec<(u32, u32)> = (1..n).map(|i| (i, n - i)).collect();
        let names: Vec<String> = pairs.iter().map(|(i, j)| format!("z_{i}_{j}")).collect();
        // z-variables sit between the series variables and the b's.
        let table = ring.table_with(
            [("u", 1, 0), ("v", 1, 0), ("w", 1, 0)]
                .into_iter()
                .map(|(s, d, w)| (s.to_string(), d, w))
                .chain(names.iter().map(|s| (s.clone(), 1 - n as i32, 0))),
        )?;
        let u = GradedPolynomial::var(&table, "u")?;
        let v = GradedPolynomial::var(&table, "v")?;
        let w = GradedPolynomial::var(&table, "w")?;
        let mut law = &u + &v;
        for (&(i, j), a) in &known {
            law = &law + &(&a.embed(&table)? * &(&u.pow(i, None) * &v.pow(j, None)));
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let z = GradedPolynomial::var(&table, &names[k])?;
            law = &law + &(&z * &(&u.pow(i, None) * &v.pow(j, None)));
        }
        let uv = apply_law(&law, &u, &v, &table, n)?;
        let vw = apply_law(&law, &v, &w, &table, n)?;
        let residual = &apply_law(&law, &uv, &w, &table, n)? - &apply_law(&law, &u, &vw, &table, n)?;
        if residual.min_weight().is_some_and(|m| m < n) {
            return Err(Error::consistency(format!(
                "lower-order associativity fails at order {n}"
            )));
        }

        let z_index: Vec<usize> = names.iter().map(|s| table.index_of(s).expect("z")).collect();
        let series: Vec<usize> = (0..3).collect();
        let b_vars: Vec<usize> = ring.indices_in(&table);
        let mut by_series: BTreeMap<Vec<u32>, Equation> = BTreeMap::new();
        for (m, c) in residual.terms() {
            let key: Vec<u32> = series.iter().map(|&i| m.exponent(i)).collect();
            let eq = by_series.entry(key).or_insert_with(|| Equation {
                coeffs: vec![Rational::zero(); pairs.len()],
                rhs: GradedPolynomial::zero(&coeff_table),
            });
            let zs: Vec<usize> = (0..pairs.len()).filter(|&k| m.exponent(z_index[k]) > 0).collect();
            match zs.as_slice() {
                [] => {
                    let exps = b_vars.iter().map(|&i| m.exponent(i)).collect();
                    // Move known terms to the right-hand side.
                    eq.rhs.add_term(Monomial::from_exponents(exps), -c.clone());
                }
                [k] if m.exponent(z_index[*k]) == 1
                    && b_vars.iter().all(|&i| m.exponent(i) == 0) =>
                {
                    eq.coeffs[*k] += c;
                }
                _ => {
                    return Err(Error::consistency(format!(
                        "nonlinear constraint at order {n}"
                    )))
                }
            }
        }
        let mut eqs: Vec<Equation> = by_series.into_values().collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if i < j {
                let mut coeffs = vec![Rational::zero(); pairs.len()];
                coeffs[k] = Rational::one();
                let mirror = pairs.iter().position(|&p| p == (j, i)).expect("mirror");
                coeffs[mirror] = -Rational::one();
                eqs.push(Equation {
                    coeffs,
                    rhs: GradedPolynomial::zero(&coeff_table),
                });
            }
        }
        let solved = eliminate(eqs.clone(), pairs.len())?;
        free_parameters.push(pairs.len() - solved.len());

        let mut pin = vec![Rational::zero(); pairs.len()];
        pin[0] = Rational::one();
        eqs.push(Equation {
            coeffs: pin,
            rhs: prescribe(n).embed(&coeff_table)?,
        });
        let solved = eliminate(eqs, pairs.len())?;
        if solved.len() != pairs.len() {
            return Err(Error::consistency(format!(
                "order {n} is underdetermined after prescribing a_1{}",
                n - 1
            )));
        }
        for (col, eq) in solved {
            known.insert(pairs[col], eq.rhs);
        }
    }
    Ok(ConstrainedLaw {
        coefficients: known,
        free_parameters,
    })
}

/// Compares `a_{ij}` of the universal law with the constraint solution for
/// all `i + j ≤ D`. Returns the list of disagreeing indices.
pub fn compare_lazard_routes(truncation: u32) -> Result<(ConstrainedLaw, Vec<(u32, u32)>)> {
    let fgl = FormalGroupLaw::universal(truncation)?;
    let solved = lazard_by_constraints(truncation, |n| fgl.coefficient(1, n - 1))?;
    let coeff_table = fgl.ring().coefficient_table();
    let mut bad = Vec::new();
    for n in 2..=truncation {
        for i in 1..n {
            let main = fgl.coefficient(i, n - i).embed(&coeff_table)?;
            if solved.coefficients.get(&(i, n - i)) != Some(&main) {
                bad.push((i, n - i));
            }
        }
    }
    Ok((solved, bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{build_root_datum, fundamental_invariants, GroupType};

    #[test]
    fn kernel_dimensions() {
        let d = build_root_datum(GroupType::GL, 3).unwrap();
        let inv = fundamental_invariants(&d).unwrap();
        assert_eq!(coinvariant_dimensions_by_kernel(&inv, 10).unwrap(), vec![1, 2, 2, 1]);
        let b = build_root_datum(GroupType::B, 2).unwrap();
        let inv = fundamental_invariants(&b).unwrap();
        assert_eq!(coinvariant_dimensions_by_kernel(&inv, 10).unwrap(), vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn axioms_hold() {
        for d in 1..=4 {
            assert!(fgl_axiom_residuals(&FormalGroupLaw::universal(d).unwrap()).unwrap().all_zero());
        }
        assert!(fgl_axiom_residuals(&FormalGroupLaw::additive(3).unwrap()).unwrap().all_zero());
    }

    #[test]
    fn broken_law_detected() {
        // u + v + uv² is not commutative.
        let ring = CoefficientRing::rational();
        let t = ring.coefficient_table();
        let coeffs = BTreeMap::from([((1, 2), GradedPolynomial::one(&t))]);
        let f = FormalGroupLaw::from_coefficients(ring, 3, &coeffs).unwrap();
        let r = fgl_axiom_residuals(&f).unwrap();
        assert!(!r.commutativity.is_zero());
    }

    #[test]
    fn constraint_route_agrees() {
        let (solved, bad) = compare_lazard_routes(4).unwrap();
        assert!(bad.is_empty(), "{bad:?}");
        assert_eq!(solved.free_parameters, vec![1, 1, 1]);
    }
}
