use std::cmp::Ordering;

use super::VariableTable;

/// Exponent vector over a [`VariableTable`].
///
/// Ordered graded-lexicographically: first by total exponent, then
/// lexicographically in the table's variable order (`x₂ < x₁`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree(&self, table: &VariableTable) -> i32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i32 * table.degree(i))
            .sum()
    }

    /// Filtration weight used by truncation.
    pub fn weight(&self, table: &VariableTable) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e * table.filtration_unit(i))
            .sum()
    }

    pub fn label(&self, table: &VariableTable) -> i32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i32 * table.weight_label(i))
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// `self / x_i`, if `x_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(Monomial(e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub(crate) fn render(&self, table: &VariableTable) -> String {
        // Coefficient (negative-degree) variables are written first.
        let mut order: Vec<usize> = (0..self.0.len()).collect();
        order.sort_by_key(|&i| table.degree(i) > 0);
        let parts: Vec<String> = order
            .into_iter()
            .map(|i| (i, self.0[i]))
            .filter(|&(_, e)| e > 0)
            .map(|(i, e)| {
                if e == 1 {
                    table.name(i).to_string()
                } else {
                    format!("{}^{}", table.name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
