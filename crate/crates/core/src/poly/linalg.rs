//! Exact sparse row reduction and degreewise slices.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{GradedPolynomial, Monomial, Rational, VariableTable};
use crate::{Error, Result};

/// Sparse vector: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Rational)>;

/// `a - c·b` on sparse rows.
fn sub_scaled(a: &SparseRow, c: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|k| &row[k].1)
}

/// Incrementally maintained reduced row-echelon form.
///
/// Columns are ordered by index; each pivot is the smallest column of its
/// row, so ties always resolve to the earliest column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Pivot columns in ascending order.
    pub fn pivots(&self) -> Vec<usize> {
        self.pivot_row.keys().copied().collect()
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.is_pivot(*c)).collect()
    }

    /// The reduced row whose pivot is `col`.
    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.pivot_row.get(&col).map(|&r| &self.rows[r])
    }

    /// Rows ordered by pivot column.
    pub fn rows(&self) -> Vec<SparseRow> {
        self.pivot_row
            .values()
            .map(|&r| self.rows[r].clone())
            .collect()
    }

    /// Reduces `row` modulo the current span; the result has zeros in every
    /// pivot column.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let hits: Vec<(usize, Rational)> = row
            .iter()
            .filter(|(c, _)| self.is_pivot(*c))
            .cloned()
            .collect();
        let mut out = row.clone();
        for (col, _) in hits {
            if let Some(c) = lookup(&out, col).cloned() {
                out = sub_scaled(&out, &c, &self.rows[self.pivot_row[&col]]);
            }
        }
        out
    }

    /// Adds `row` to the span. Returns `true` if it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.iter().all(|(c, v)| *c < self.ncols && !v.is_zero()));
        let mut r = self.reduce(&row);
        let Some((pivot, lead)) = r.first().cloned() else {
            return false;
        };
        if !lead.is_one() {
            let inv = Rational::one() / lead;
            for e in r.iter_mut() {
                e.1 *= &inv;
            }
        }
        for other in self.rows.iter_mut() {
            if let Some(c) = lookup(other, pivot).cloned() {
                *other = sub_scaled(other, &c, &r);
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }
}

/// Row-reduced span of homogeneous polynomials inside one graded piece.
#[derive(Debug, Clone)]
pub struct DegreeSlice {
    pub degree: i32,
    /// Monomial basis of the graded piece, ascending graded-lex order.
    pub basis: Vec<Monomial>,
    /// Reduced row-echelon rows, ordered by pivot.
    pub rows: Vec<SparseRow>,
    /// Pivot columns (indices into `basis`).
    pub pivots: Vec<usize>,
}

impl DegreeSlice {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis monomials that are not pivots: a basis of the quotient.
    pub fn complement(&self) -> Vec<Monomial> {
        let pivots: std::collections::BTreeSet<_> = self.pivots.iter().copied().collect();
        (0..self.basis.len())
            .filter(|c| !pivots.contains(c))
            .map(|c| self.basis[c].clone())
            .collect()
    }

    /// Dense matrix of the reduced rows.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.basis.len()];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }
}

/// Reduces homogeneous `vectors` of degree `d` in the full monomial basis of
/// that degree. The table must not contain negative-degree variables (the
/// graded piece would be infinite); see [`degree_slice_reduce_bounded`].
pub fn degree_slice_reduce(
    table: &Arc<VariableTable>,
    vectors: &[GradedPolynomial],
    d: i32,
) -> Result<DegreeSlice> {
    if table.has_negative() {
        return Err(Error::structural(
            "graded pieces over negative-degree variables need a truncation bound",
        ));
    }
    degree_slice_reduce_bounded(table, vectors, d, None)
}

/// As [`degree_slice_reduce`], restricted to monomials of filtration weight
/// at most `bound`; input terms above the bound are discarded.
pub fn degree_slice_reduce_bounded(
    table: &Arc<VariableTable>,
    vectors: &[GradedPolynomial],
    d: i32,
    bound: Option<u32>,
) -> Result<DegreeSlice> {
    for (k, v) in vectors.iter().enumerate() {
        if !super::polynomial::same_table(v.table(), table) {
            return Err(Error::structural(format!(
                "vector {k} is over a different table"
            )));
        }
        if !v.is_zero() && v.homogeneous_degree() != Some(d) {
            return Err(Error::structural(format!(
                "vector {k} is not homogeneous of degree {d}: {v}"
            )));
        }
    }
    let basis = monomials_of_degree(table, d, bound)?;
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon::new(basis.len());
    for v in vectors {
        let mut row: SparseRow = v
            .truncate(bound)
            .terms()
            .iter()
            .map(|(m, c)| (index[m], c.clone()))
            .collect();
        row.sort_by_key(|e| e.0);
        if !row.is_empty() {
            ech.insert(row);
        }
    }
    Ok(DegreeSlice {
        degree: d,
        pivots: ech.pivots(),
        rows: ech.rows(),
        basis,
    })
}

/// All monomials of degree `d` and filtration weight at most `bound`, in
/// ascending graded-lex order.
///
/// Fails if the set would be infinite (negative- and positive-degree
/// variables mixed without a bound).
pub fn monomials_of_degree(
    table: &VariableTable,
    d: i32,
    bound: Option<u32>,
) -> Result<Vec<Monomial>> {
    let n = table.len();
    let pos: Vec<usize> = (0..n).filter(|&i| table.degree(i) > 0).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| table.degree(i) < 0).collect();
    let mut out = Vec::new();
    if neg.is_empty() || pos.is_empty() {
        let vars = if neg.is_empty() { &pos } else { &neg };
        let target = if neg.is_empty() { d } else { -d };
        if target < 0 {
            return Ok(out);
        }
        if let Some(b) = bound {
            if target as u32 > b {
                return Ok(out);
            }
        }
        let mut e = vec![0u32; n];
        enumerate(table, vars, 0, target as u32, &mut e, &mut out);
    } else {
        let Some(b) = bound else {
            return Err(Error::structural(
                "graded pieces over mixed-sign variables need a truncation bound",
            ));
        };
        for w in 0..=b {
            let neg_deg = w as i32 - d;
            if neg_deg < 0 {
                continue;
            }
            let mut pos_part = Vec::new();
            let mut e = vec![0u32; n];
            enumerate(table, &pos, 0, w, &mut e, &mut pos_part);
            let mut neg_part = Vec::new();
            let mut e = vec![0u32; n];
            enumerate(table, &neg, 0, neg_deg as u32, &mut e, &mut neg_part);
            for p in &pos_part {
                for q in &neg_part {
                    out.push(p.mul(q));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Exponent vectors over `vars[k..]` with Σ e·|deg| = `remaining`.
fn enumerate(
    table: &VariableTable,
    vars: &[usize],
    k: usize,
    remaining: u32,
    e: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if k == vars.len() {
        if remaining == 0 {
            out.push(Monomial::from_exponents(e.clone()));
        }
        return;
    }
    let v = vars[k];
    let step = table.degree(v).unsigned_abs();
    let mut used = 0;
    loop {
        e[v] = used / step;
        enumerate(table, vars, k + 1, remaining - used, e, out);
        if used + step > remaining {
            break;
        }
        used += step;
    }
    e[v] = 0;
}

/// Exact determinant by Gaussian elimination.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Image of the averaging operator `(1/|G|) Σ_g M_g`, returned as reduced
/// rows (coordinate vectors). `M_g[i][j]` is the `i`-th coordinate of the
/// image of basis vector `j`.
pub fn invariant_subspace(dim: usize, action: &[Vec<Vec<Rational>>]) -> Vec<SparseRow> {
    if action.is_empty() || dim == 0 {
        return Vec::new();
    }
    let inv = Rational::new(1.into(), (action.len() as i64).into());
    let mut ech = Echelon::new(dim);
    for j in 0..dim {
        let mut col: SparseRow = Vec::new();
        for i in 0..dim {
            let mut s = Rational::zero();
            for g in action {
                s += &g[i][j];
            }
            if !s.is_zero() {
                col.push((i, s * &inv));
            }
        }
        if !col.is_empty() {
            ech.insert(col);
        }
    }
    ech.rows()
}
