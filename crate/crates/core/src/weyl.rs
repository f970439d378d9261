//! Root data of classical type, Weyl groups and their fundamental invariants.
//!
//! Coordinates: characters are written in the basis `χ₁..χ_r` of the
//! character lattice, and a Weyl group element is an integer matrix acting
//! on coordinate columns. Simple roots use Bourbaki numbering.
//!
//! | type  | lattice basis                         | simple roots                        |
//! |-------|---------------------------------------|-------------------------------------|
//! | GL_n  | `ε₁..ε_n`                              | `εᵢ − εᵢ₊₁`                          |
//! | A_n   | `ε₁..ε_n`, with `ε_{n+1} = −Σ εᵢ`      | `εᵢ − εᵢ₊₁`                          |
//! | B_n   | `ε₁..ε_n`                              | `εᵢ − εᵢ₊₁`, `ε_n`                    |
//! | C_n   | `ε₁..ε_n`                              | `εᵢ − εᵢ₊₁`, `2ε_n`                   |
//! | D_n   | `ε₁..ε_n`                              | `εᵢ − εᵢ₊₁`, `ε_{n−1} + ε_n`          |

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{
    determinant, rat, Echelon, GradedPolynomial, Rational, SparseRow, VariableTable,
};
use crate::{Error, Result};

/// Largest supported rank (keeps explicit enumeration of W feasible).
pub const MAX_RANK: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupType {
    GL,
    A,
    B,
    C,
    D,
    G2,
}

impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "GL" => Ok(GroupType::GL),
            "A" => Ok(GroupType::A),
            "B" => Ok(GroupType::B),
            "C" => Ok(GroupType::C),
            "D" => Ok(GroupType::D),
            "G2" => Ok(GroupType::G2),
            _ => Err(Error::parameter(format!("unknown group type `{s}`"))),
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupType::GL => "GL",
            GroupType::A => "A",
            GroupType::B => "B",
            GroupType::C => "C",
            GroupType::D => "D",
            GroupType::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// Checks that `(kind, rank)` is buildable.
pub fn check_supported(kind: GroupType, rank: usize) -> Result<()> {
    let min = if kind == GroupType::D { 2 } else { 1 };
    if kind == GroupType::G2 {
        return Err(Error::parameter(
            "type G2 is not supported; use GL, A, B, C or D",
        ));
    }
    if rank < min || rank > MAX_RANK {
        return Err(Error::parameter(format!(
            "rank {rank} is out of range for type {kind} (supported: {min}..={MAX_RANK})"
        )));
    }
    Ok(())
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Closed-form order of the Weyl group.
pub fn weyl_order(kind: GroupType, rank: usize) -> usize {
    match kind {
        GroupType::GL => factorial(rank),
        GroupType::A => factorial(rank + 1),
        GroupType::B | GroupType::C => (1 << rank) * factorial(rank),
        GroupType::D => (1 << (rank - 1)) * factorial(rank),
        GroupType::G2 => 12,
    }
}

/// Closed-form number of positive roots.
pub fn positive_root_count(kind: GroupType, rank: usize) -> usize {
    match kind {
        GroupType::GL => rank * (rank - 1) / 2,
        GroupType::A => rank * (rank + 1) / 2,
        GroupType::B | GroupType::C => rank * rank,
        GroupType::D => rank * (rank - 1),
        GroupType::G2 => 6,
    }
}

/// Degrees of the fundamental invariants, ascending.
pub fn invariant_degrees(kind: GroupType, rank: usize) -> Vec<u32> {
    let n = rank as u32;
    let mut d: Vec<u32> = match kind {
        GroupType::GL => (1..=n).collect(),
        GroupType::A => (2..=n + 1).collect(),
        GroupType::B | GroupType::C => (1..=n).map(|k| 2 * k).collect(),
        GroupType::D => (1..n).map(|k| 2 * k).chain([n]).collect(),
        GroupType::G2 => vec![2, 6],
    };
    d.sort();
    d
}

/// Number of simple roots.
pub fn simple_root_count(kind: GroupType, rank: usize) -> usize {
    match kind {
        GroupType::GL => rank - 1,
        _ => rank,
    }
}

/// Square integer matrix acting on character coordinates (row-major).
/// Orders lexicographically by entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix");
        IntMatrix {
            n,
            data: rows.concat(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        IntMatrix { n, data: out }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|c| c.to_vec()).collect()
    }
}

/// Root datum of a split reductive group of classical type.
#[derive(Debug, Clone)]
pub struct RootDatum {
    kind: GroupType,
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    reflections: Vec<IntMatrix>,
    roots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
}

impl RootDatum {
    pub fn kind(&self) -> GroupType {
        self.kind
    }

    /// Rank of the character lattice (number of torus variables).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn reflections(&self) -> &[IntMatrix] {
        &self.reflections
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }
}

/// Builds the root datum of `(kind, rank)` in standard coordinates.
pub fn build_root_datum(kind: GroupType, rank: usize) -> Result<RootDatum> {
    check_supported(kind, rank)?;
    let n = rank;
    let unit = |i: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    let swap = |i: usize| {
        let mut m = IntMatrix::identity(n);
        m.set(i, i, 0);
        m.set(i + 1, i + 1, 0);
        m.set(i, i + 1, 1);
        m.set(i + 1, i, 1);
        m
    };
    let chain_count = match kind {
        GroupType::GL | GroupType::B | GroupType::C | GroupType::D => n - 1,
        GroupType::A => n - 1,
        GroupType::G2 => unreachable!("rejected by check_supported"),
    };
    let mut simple_roots: Vec<Vec<i64>> = (0..chain_count)
        .map(|i| {
            let mut v = unit(i);
            v[i + 1] = -1;
            v
        })
        .collect();
    let mut reflections: Vec<IntMatrix> = (0..chain_count).map(swap).collect();
    match kind {
        GroupType::GL => {}
        GroupType::A => {
            // α_n = ε_n − ε_{n+1} = ε_n + Σ εⱼ; s_n sends ε_n to ε_{n+1} = −Σ εⱼ.
            let mut alpha = vec![1; n];
            alpha[n - 1] = 2;
            simple_roots.push(alpha);
            let mut m = IntMatrix::identity(n);
            for i in 0..n {
                m.set(i, n - 1, -1);
            }
            reflections.push(m);
        }
        GroupType::B | GroupType::C => {
            let scale = if kind == GroupType::B { 1 } else { 2 };
            let mut alpha = vec![0; n];
            alpha[n - 1] = scale;
            simple_roots.push(alpha);
            let mut m = IntMatrix::identity(n);
            m.set(n - 1, n - 1, -1);
            reflections.push(m);
        }
        GroupType::D => {
            let mut alpha = vec![0; n];
            alpha[n - 2] = 1;
            alpha[n - 1] = 1;
            simple_roots.push(alpha);
            let mut m = IntMatrix::identity(n);
            m.set(n - 2, n - 2, 0);
            m.set(n - 1, n - 1, 0);
            m.set(n - 2, n - 1, -1);
            m.set(n - 1, n - 2, -1);
            reflections.push(m);
        }
        GroupType::G2 => unreachable!(),
    }

    // Root system: orbit of the simple roots.
    let mut seen: HashSet<Vec<i64>> = simple_roots.iter().cloned().collect();
    let mut frontier: Vec<Vec<i64>> = simple_roots.clone();
    while let Some(r) = frontier.pop() {
        for s in &reflections {
            let image = s.apply(&r);
            if seen.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort();

    let functional = positivity_functional(&simple_roots, n)?;
    let eval = |r: &Vec<i64>| -> Rational {
        r.iter()
            .zip(&functional)
            .map(|(a, f)| rat(*a) * f)
            .fold(Rational::zero(), |acc, x| acc + x)
    };
    let mut positive_roots: Vec<Vec<i64>> = Vec::new();
    for r in &roots {
        let v = eval(r);
        if v.is_zero() {
            return Err(Error::consistency(format!("root {r:?} is neither positive nor negative")));
        }
        if v > Rational::zero() {
            positive_roots.push(r.clone());
        }
    }

    Ok(RootDatum {
        kind,
        rank,
        simple_roots,
        reflections,
        roots,
        positive_roots,
    })
}

/// A linear functional taking the value 1 on every simple root.
fn positivity_functional(simple_roots: &[Vec<i64>], n: usize) -> Result<Vec<Rational>> {
    let mut ech = Echelon::new(n + 1);
    for alpha in simple_roots {
        let mut row: SparseRow = alpha
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0)
            .map(|(i, a)| (i, rat(*a)))
            .collect();
        row.push((n, rat(1)));
        ech.insert(row);
    }
    if ech.is_pivot(n) {
        return Err(Error::consistency("simple roots are linearly dependent"));
    }
    let mut f = vec![Rational::zero(); n];
    for p in ech.pivots() {
        let row = ech.pivot_row(p).expect("pivot");
        if let Some((_, v)) = row.iter().find(|(c, _)| *c == n) {
            f[p] = v.clone();
        }
    }
    Ok(f)
}

/// Explicitly enumerated (sub)group of the Weyl group.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    generator_indices: Vec<usize>,
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
}

impl WeylGroup {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements ordered by word length, then lexicographically.
    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    /// 0-based indices of the simple reflections generating this group.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.elements.contains(m)
    }
}

fn closure(rank: usize, generator_indices: Vec<usize>, generators: Vec<IntMatrix>) -> WeylGroup {
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let id = IntMatrix::identity(rank);
    seen.insert(id.clone());
    let mut elements = vec![id.clone()];
    let mut layer = vec![id];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for g in &layer {
            for s in &generators {
                let h = g.mul(s);
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        next.sort();
        elements.extend(next.iter().cloned());
        layer = next;
    }
    WeylGroup {
        rank,
        generator_indices,
        generators,
        elements,
    }
}

/// The full Weyl group, by breadth-first closure over the simple reflections.
pub fn enumerate_weyl(datum: &RootDatum) -> WeylGroup {
    closure(
        datum.rank,
        (0..datum.reflections.len()).collect(),
        datum.reflections.clone(),
    )
}

/// The parabolic subgroup `W_P` generated by the simple reflections with
/// the given 1-based indices.
pub fn parabolic_weyl(datum: &RootDatum, subset: &[usize]) -> Result<WeylGroup> {
    let count = datum.reflections.len();
    let mut indices: Vec<usize> = Vec::new();
    for &i in subset {
        if i == 0 || i > count {
            return Err(Error::parameter(format!(
                "simple root index {i} is out of range 1..={count} for {}",
                datum.label()
            )));
        }
        if !indices.contains(&(i - 1)) {
            indices.push(i - 1);
        }
    }
    indices.sort();
    let gens = indices.iter().map(|&i| datum.reflections[i].clone()).collect();
    Ok(closure(datum.rank, indices, gens))
}

/// Table `x₁..x_r` of first Chern classes of the basis characters.
pub fn torus_table(rank: usize) -> Arc<VariableTable> {
    VariableTable::new((1..=rank).map(|i| (format!("x{i}"), 1)))
        .expect("valid names")
        .shared()
}

/// Linear action of `w` on polynomials: `xᵢ ↦ Σⱼ w[j][i] xⱼ`, where
/// `torus_vars[i]` is the index of `xᵢ` in the polynomial's table.
pub fn act_on_polynomial(
    w: &IntMatrix,
    p: &GradedPolynomial,
    torus_vars: &[usize],
) -> GradedPolynomial {
    let table = p.table();
    let mut map = BTreeMap::new();
    for (i, &vi) in torus_vars.iter().enumerate() {
        let mut image = GradedPolynomial::zero(table);
        for (j, &vj) in torus_vars.iter().enumerate() {
            let c = w.get(j, i);
            if c != 0 {
                image = &image + &GradedPolynomial::var_index(table, vj).scale(&rat(c));
            }
        }
        map.insert(table.name(vi).to_string(), image);
    }
    p.substitute(&map, table, None)
        .expect("substitution within one table")
}

/// Fundamental invariants `σ₁..σ_r` of a Weyl group, degrees ascending.
#[derive(Debug, Clone)]
pub struct InvariantSet {
    table: Arc<VariableTable>,
    sigmas: Vec<GradedPolynomial>,
    degrees: Vec<u32>,
}

impl InvariantSet {
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn sigmas(&self) -> &[GradedPolynomial] {
        &self.sigmas
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// The invariants re-expressed over another table containing `x₁..x_r`.
    pub fn embedded(&self, target: &Arc<VariableTable>) -> Result<Vec<GradedPolynomial>> {
        self.sigmas.iter().map(|s| s.embed(target)).collect()
    }
}

fn elementary_symmetric(vals: &[GradedPolynomial], table: &Arc<VariableTable>) -> Vec<GradedPolynomial> {
    let mut e = vec![GradedPolynomial::one(table)];
    for y in vals {
        e.push(GradedPolynomial::zero(table));
        for k in (1..e.len()).rev() {
            let add = &e[k - 1] * y;
            e[k] = &e[k] + &add;
        }
    }
    e
}

/// Closed-form fundamental invariants, verified against the simple
/// reflections and for algebraic independence.
pub fn fundamental_invariants(datum: &RootDatum) -> Result<InvariantSet> {
    let n = datum.rank;
    let table = torus_table(n);
    let xs: Vec<GradedPolynomial> = (0..n).map(|i| GradedPolynomial::var_index(&table, i)).collect();
    let mut sigmas: Vec<GradedPolynomial> = match datum.kind {
        GroupType::GL => elementary_symmetric(&xs, &table)[1..].to_vec(),
        GroupType::A => {
            let mut ys = xs.clone();
            let sum = xs.iter().fold(GradedPolynomial::zero(&table), |a, x| &a + x);
            ys.push(-sum);
            elementary_symmetric(&ys, &table)[2..].to_vec()
        }
        GroupType::B | GroupType::C => {
            let sq: Vec<_> = xs.iter().map(|x| x * x).collect();
            elementary_symmetric(&sq, &table)[1..].to_vec()
        }
        GroupType::D => {
            let sq: Vec<_> = xs.iter().map(|x| x * x).collect();
            let mut s = elementary_symmetric(&sq, &table)[1..n].to_vec();
            s.push(xs.iter().fold(GradedPolynomial::one(&table), |a, x| &a * x));
            s
        }
        GroupType::G2 => unreachable!("rejected by build_root_datum"),
    };
    sigmas.sort_by_key(|s| s.homogeneous_degree().unwrap_or(0));
    let degrees: Vec<u32> = sigmas
        .iter()
        .map(|s| s.homogeneous_degree().expect("homogeneous") as u32)
        .collect();
    if degrees != invariant_degrees(datum.kind, n) {
        return Err(Error::consistency(format!(
            "invariant degrees {degrees:?} differ from the expected {:?}",
            invariant_degrees(datum.kind, n)
        )));
    }
    let vars: Vec<usize> = (0..n).collect();
    for (i, s) in sigmas.iter().enumerate() {
        for (k, w) in datum.reflections.iter().enumerate() {
            if act_on_polynomial(w, s, &vars) != *s {
                return Err(Error::consistency(format!(
                    "σ{} is not fixed by simple reflection s{}",
                    i + 1,
                    k + 1
                )));
            }
        }
    }
    let set = InvariantSet {
        table,
        sigmas,
        degrees,
    };
    if !algebraically_independent(&set) {
        return Err(Error::consistency("fundamental invariants are not algebraically independent"));
    }
    Ok(set)
}

/// Jacobian criterion at seeded random rational points.
pub fn algebraically_independent(set: &InvariantSet) -> bool {
    let n = set.table.len();
    if set.sigmas.len() != n {
        return false;
    }
    let jacobian: Vec<Vec<GradedPolynomial>> = set
        .sigmas
        .iter()
        .map(|s| (0..n).map(|j| s.derivative(j)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1a9);
    for _ in 0..8 {
        let point: Vec<Rational> = (0..n)
            .map(|_| Rational::new(rng.gen_range(-97i64..=97).into(), rng.gen_range(1i64..=13).into()))
            .collect();
        let m: Vec<Vec<Rational>> = jacobian
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&point)).collect())
            .collect();
        if !determinant(&m).is_zero() {
            return true;
        }
    }
    false
}
