//! The coinvariant algebra `Λ = S/I` of a Weyl group, where `S = ℚ[x₁..x_r]`
//! and `I` is generated by the fundamental invariants.
//!
//! Construction is degree by degree. Knowing the standard monomials and
//! normal forms in degree `d−1`, every degree-`d` class is a combination of
//! `xⱼ·b` with `b` standard, so the piece `Λ_d` is the span of those
//! candidates modulo two kinds of relations: the different ways of
//! rewriting one monomial (`xⱼ·NF(μ/xⱼ)` for each `xⱼ | μ`) and the
//! invariants of degree `d`. Standard monomials are the non-pivots under the
//! graded-lex pivot rule, the same set a full reduction of `I_d` yields.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::fgl::CoefficientRing;
use crate::poly::{
    determinant, invariant_subspace, monomials_of_degree, Echelon, GradedPolynomial, Monomial,
    QuotientRing, Rational, SparseRow, VariableTable,
};
use crate::weyl::{
    act_on_polynomial, build_root_datum, enumerate_weyl, fundamental_invariants, GroupType,
    InvariantSet, RootDatum, WeylGroup,
};
use crate::{Error, Result};

/// Univariate polynomial with nonnegative integer coefficients, `Σ cₖ tᵏ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poincare(pub Vec<usize>);

impl Poincare {
    /// `Πᵢ (1 + t + … + t^{dᵢ−1})`.
    pub fn product_formula(degrees: &[u32]) -> Self {
        let mut acc = vec![1usize];
        for &d in degrees {
            let mut next = vec![0usize; acc.len() + d as usize - 1];
            for (i, c) in acc.iter().enumerate() {
                for k in 0..d as usize {
                    next[i + k] += c;
                }
            }
            acc = next;
        }
        Poincare(acc)
    }

    pub fn coefficients(&self) -> &[usize] {
        &self.0
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn value_at_one(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Poincare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && k > 0 { String::new() } else { c.to_string() };
            parts.push(match k {
                0 => coeff,
                1 => format!("{coeff}t"),
                _ => format!("{coeff}t^{k}"),
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Pairing `Λ_d × Λ_{N−d} → Λ_N ≅ ℚ` in the chosen bases.
#[derive(Debug, Clone)]
pub struct PairingMatrix {
    pub degree: usize,
    pub matrix: Vec<Vec<Rational>>,
    pub determinant: Rational,
}

impl PairingMatrix {
    pub fn is_square(&self) -> bool {
        self.matrix.iter().all(|r| r.len() == self.matrix.len())
    }
}

#[derive(Debug, Clone)]
pub struct CoinvariantAlgebra {
    datum: RootDatum,
    weyl_order: usize,
    invariants: InvariantSet,
    table: Arc<VariableTable>,
    bases: Vec<Vec<Monomial>>,
    normal_forms: Vec<HashMap<Monomial, SparseRow>>,
}

/// Builds `Λ` for the given datum, Weyl group and invariants and checks
/// `dim Λ = |W|`, top degree `= #positive roots`, `dim Λ_N = 1` and the
/// product formula.
pub fn coinvariant_algebra(
    datum: &RootDatum,
    weyl: &WeylGroup,
    invariants: &InvariantSet,
) -> Result<CoinvariantAlgebra> {
    let table = Arc::clone(invariants.table());
    let r = table.len();
    let mut bases: Vec<Vec<Monomial>> = vec![vec![Monomial::one(r)]];
    let mut normal_forms: Vec<HashMap<Monomial, SparseRow>> =
        vec![HashMap::from([(Monomial::one(r), vec![(0, Rational::one())])])];
    // Enough room for any supported type; the loop stops at the first empty piece.
    let limit = weyl.order().max(1) as i32 + 1;
    for d in 1..=limit {
        let prev_basis = &bases[d as usize - 1];
        let prev_nf = &normal_forms[d as usize - 1];
        let mut candidates: Vec<Monomial> = prev_basis
            .iter()
            .flat_map(|b| (0..r).map(move |j| b.times_var(j)))
            .collect();
        candidates.sort();
        candidates.dedup();
        let index: HashMap<&Monomial, usize> =
            candidates.iter().enumerate().map(|(i, m)| (m, i)).collect();

        // x_j·NF(μ/x_j) as a row over the candidates.
        let rewrite = |mu: &Monomial, j: usize| -> SparseRow {
            let lower = mu.div_var(j).expect("x_j divides μ");
            let mut row: SparseRow = prev_nf[&lower]
                .iter()
                .map(|(k, c)| (index[&prev_basis[*k].times_var(j)], c.clone()))
                .collect();
            row.sort_by_key(|e| e.0);
            row
        };

        let monomials = monomials_of_degree(&table, d, None)?;
        let mut ech = Echelon::new(candidates.len());
        let mut first_rewrite: Vec<SparseRow> = Vec::with_capacity(monomials.len());
        for mu in &monomials {
            let divisors: Vec<usize> = (0..r).filter(|&j| mu.exponent(j) > 0).collect();
            let base = rewrite(mu, divisors[0]);
            for &j in &divisors[1..] {
                let diff = sub_rows(&rewrite(mu, j), &base);
                if !diff.is_empty() {
                    ech.insert(diff);
                }
            }
            first_rewrite.push(base);
        }
        let position: HashMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        for sigma in invariants.sigmas() {
            if sigma.homogeneous_degree() != Some(d) {
                continue;
            }
            let mut row: SparseRow = Vec::new();
            for (m, c) in sigma.terms() {
                let scaled: SparseRow = first_rewrite[position[m]]
                    .iter()
                    .map(|(k, v)| (*k, v * c))
                    .collect();
                row = add_rows(&row, &scaled);
            }
            if !row.is_empty() {
                ech.insert(row);
            }
        }

        let non_pivots = ech.non_pivots();
        if non_pivots.is_empty() {
            break;
        }
        let slot: HashMap<usize, usize> =
            non_pivots.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let basis: Vec<Monomial> = non_pivots.iter().map(|&c| candidates[c].clone()).collect();
        let mut nf = HashMap::with_capacity(monomials.len());
        for (mu, row) in monomials.iter().zip(&first_rewrite) {
            let reduced: SparseRow = ech
                .reduce(row)
                .into_iter()
                .map(|(c, v)| (slot[&c], v))
                .collect();
            nf.insert(mu.clone(), reduced);
        }
        bases.push(basis);
        normal_forms.push(nf);
    }

    let algebra = CoinvariantAlgebra {
        datum: datum.clone(),
        weyl_order: weyl.order(),
        invariants: invariants.clone(),
        table,
        bases,
        normal_forms,
    };
    algebra.check()?;
    Ok(algebra)
}

fn add_rows(a: &SparseRow, b: &SparseRow) -> SparseRow {
    let mut acc: BTreeMap<usize, Rational> = a.iter().cloned().collect();
    for (k, v) in b {
        let e = acc.entry(*k).or_insert_with(Rational::zero);
        *e += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn sub_rows(a: &SparseRow, b: &SparseRow) -> SparseRow {
    let neg: SparseRow = b.iter().map(|(k, v)| (*k, -v.clone())).collect();
    add_rows(a, &neg)
}

impl CoinvariantAlgebra {
    /// Builds the full-flag coinvariant algebra of `(kind, rank)`.
    pub fn for_type(kind: GroupType, rank: usize) -> Result<Self> {
        let datum = build_root_datum(kind, rank)?;
        let weyl = enumerate_weyl(&datum);
        let inv = fundamental_invariants(&datum)?;
        coinvariant_algebra(&datum, &weyl, &inv)
    }

    fn check(&self) -> Result<()> {
        let total = self.dimension();
        if total != self.weyl_order {
            return Err(Error::consistency(format!(
                "dim Λ = {total} but |W| = {}",
                self.weyl_order
            )));
        }
        let n = self.datum.positive_roots().len();
        if self.top_degree() != n {
            return Err(Error::consistency(format!(
                "top degree {} differs from the number of positive roots {n}",
                self.top_degree()
            )));
        }
        if self.bases[n].len() != 1 {
            return Err(Error::consistency(format!(
                "top piece has dimension {}",
                self.bases[n].len()
            )));
        }
        self.poincare_polynomial()?;
        Ok(())
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn invariants(&self) -> &InvariantSet {
        &self.invariants
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    /// `N`: the largest degree with `Λ_N ≠ 0`.
    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn dimension(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Standard monomials of degree `d` (empty above `N`).
    pub fn basis(&self, d: usize) -> &[Monomial] {
        self.bases.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Basis classes of degree `d` as polynomials (their lifts to `S`).
    pub fn basis_classes(&self, d: usize) -> Vec<GradedPolynomial> {
        self.basis(d)
            .iter()
            .map(|m| GradedPolynomial::monomial(&self.table, m.clone(), Rational::one()))
            .collect()
    }

    /// The top class `ρ_N`, lifted to a monomial `p_N`.
    pub fn top_class(&self) -> GradedPolynomial {
        self.basis_classes(self.top_degree()).remove(0)
    }

    /// Verified product formula over the invariant degrees.
    pub fn poincare_polynomial(&self) -> Result<Poincare> {
        let p = Poincare(self.dimensions());
        let expected = Poincare::product_formula(self.invariants.degrees());
        if p != expected {
            return Err(Error::consistency(format!(
                "Poincaré polynomial {p} differs from the product formula {expected}"
            )));
        }
        Ok(p)
    }

    /// Normal form of a polynomial in `x₁..x_r` as a combination of standard
    /// monomials.
    pub fn normal_form(&self, p: &GradedPolynomial) -> Result<GradedPolynomial> {
        let p = p.embed(&self.table)?;
        let mut out = GradedPolynomial::zero(&self.table);
        for (m, c) in p.terms() {
            let d = m.total() as usize;
            let Some(nf) = self.normal_forms.get(d) else {
                continue;
            };
            for (k, v) in &nf[m] {
                out.add_term(self.bases[d][*k].clone(), v * c);
            }
        }
        Ok(out)
    }

    /// Coordinates of a homogeneous class of degree `d` over `basis(d)`.
    pub fn coordinates(&self, p: &GradedPolynomial, d: usize) -> Result<Vec<Rational>> {
        let nf = self.normal_form(p)?;
        let basis = self.basis(d);
        let mut coords = vec![Rational::zero(); basis.len()];
        for (m, c) in nf.terms() {
            let k = basis.iter().position(|b| b == m).ok_or_else(|| {
                Error::structural(format!("class has a component outside degree {d}"))
            })?;
            coords[k] = c.clone();
        }
        Ok(coords)
    }

    /// Product in `Λ`: multiply lifts and reduce.
    pub fn lambda_multiply(
        &self,
        a: &GradedPolynomial,
        b: &GradedPolynomial,
    ) -> Result<GradedPolynomial> {
        let a = a.embed(&self.table)?;
        let b = b.embed(&self.table)?;
        self.normal_form(&(&a * &b))
    }

    /// Pairing matrix in degree `d`, entry `(i, j)` the coefficient of `ρ_N`
    /// in `bᵈᵢ · b^{N−d}ⱼ`. Fails if singular.
    pub fn pairing_matrix(&self, d: usize) -> Result<PairingMatrix> {
        let n = self.top_degree();
        if d > n {
            return Err(Error::parameter(format!("degree {d} exceeds the top degree {n}")));
        }
        let rho = self.top_class();
        let rho_m = rho.terms().keys().next().expect("monomial").clone();
        let left = self.basis_classes(d);
        let right = self.basis_classes(n - d);
        let mut matrix = Vec::with_capacity(left.len());
        for a in &left {
            let mut row = Vec::with_capacity(right.len());
            for b in &right {
                row.push(self.lambda_multiply(a, b)?.coefficient(&rho_m));
            }
            matrix.push(row);
        }
        if left.len() != right.len() {
            return Err(Error::consistency(format!(
                "pairing in degree {d} is {}×{}",
                left.len(),
                right.len()
            )));
        }
        let det = determinant(&matrix);
        if det.is_zero() {
            return Err(Error::consistency(format!("pairing in degree {d} is singular")));
        }
        Ok(PairingMatrix {
            degree: d,
            matrix,
            determinant: det,
        })
    }

    /// Matrices of `group` acting on `Λ_d` (column `j` is the image of
    /// basis class `j`).
    pub fn action_matrices(&self, group: &WeylGroup, d: usize) -> Result<Vec<Vec<Vec<Rational>>>> {
        let vars: Vec<usize> = (0..self.table.len()).collect();
        let basis = self.basis_classes(d);
        let dim = basis.len();
        let mut out = Vec::with_capacity(group.order());
        for g in group.elements() {
            let mut m = vec![vec![Rational::zero(); dim]; dim];
            for (j, b) in basis.iter().enumerate() {
                let image = act_on_polynomial(g, b, &vars);
                for (i, c) in self.coordinates(&image, d)?.into_iter().enumerate() {
                    m[i][j] = c;
                }
            }
            out.push(m);
        }
        Ok(out)
    }

    /// Basis (reduced coordinate rows) of `Λ_d^{group}`.
    pub fn invariant_rows(&self, group: &WeylGroup, d: usize) -> Result<Vec<SparseRow>> {
        let dim = self.basis(d).len();
        Ok(w_invariants(dim, &self.action_matrices(group, d)?))
    }

    /// `Λ^{group}` as classes, all degrees.
    pub fn invariant_classes(&self, group: &WeylGroup) -> Result<Vec<GradedPolynomial>> {
        let mut out = Vec::new();
        for d in 0..=self.top_degree() {
            let basis = self.basis(d);
            for row in self.invariant_rows(group, d)? {
                let mut p = GradedPolynomial::zero(&self.table);
                for (k, c) in row {
                    p.add_term(basis[k].clone(), c);
                }
                out.push(p);
            }
        }
        Ok(out)
    }

    /// `dim Λ_d^{group}` for `d = 0..=N`.
    pub fn invariant_dimensions(&self, group: &WeylGroup) -> Result<Vec<usize>> {
        (0..=self.top_degree())
            .map(|d| self.invariant_rows(group, d).map(|r| r.len()))
            .collect()
    }

    /// Ranks of `𝕃 ⊗ Λ` in degrees `0..=D` under the weight-`D` truncation:
    /// `Σₖ dim 𝕃_{−k} · dim Λ_{d+k}` over `k ≤ D − d`.
    pub fn lazard_tensor_ranks(&self, ring: &CoefficientRing, truncation: u32) -> Vec<usize> {
        let dims = self.dimensions();
        (0..=truncation)
            .map(|d| {
                (0..=truncation - d)
                    .map(|k| {
                        ring.graded_dimension(k) * dims.get((d + k) as usize).copied().unwrap_or(0)
                    })
                    .sum()
            })
            .collect()
    }

    /// `C(T)/I·C(T)` truncated at weight `D`, computed directly as a quotient
    /// of `ℚ[x, b₁..b_D]`.
    pub fn series_quotient(&self, ring: &CoefficientRing, truncation: u32) -> Result<QuotientRing> {
        let table = ring.table_with((1..=self.table.len()).map(|i| (format!("x{i}"), 1, 0)))?;
        let rels = self.invariants.embedded(&table)?;
        QuotientRing::new(&table, &rels, truncation, 0..=truncation as i32)
    }
}

/// Image of the averaging operator of an explicit action, as RREF rows.
pub fn w_invariants(dim: usize, action: &[Vec<Vec<Rational>>]) -> Vec<SparseRow> {
    invariant_subspace(dim, action)
}
