//! Dense binary vectors and square matrices over the Boolean semiring
//! (∨ as addition, ∧ as multiplication), plus the spectral predicates the
//! convergence tests are built on.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::{IntervalSet, Universe};

/// Largest matrix dimension accepted by [`BoolMatrix::try_zeros`].
pub const MAX_DIM: usize = 4096;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length bit vector. Also used for binary system states.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolVector {
    len: usize,
    words: Vec<u64>,
}

/// A point of 𝔹ⁿ.
pub type BinaryState = BoolVector;

impl BoolVector {
    pub fn zeros(len: usize) -> Self {
        BoolVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BoolVector::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Canonical basis vector `e_j`.
    pub fn unit(len: usize, j: usize) -> Self {
        let mut v = BoolVector::zeros(len);
        v.set(j, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = BoolVector::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// State number `index` of 𝔹ⁿ with component 0 as the most significant
    /// bit, so that enumeration order is lexicographic.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64, "index encoding limited to 64 components");
        BoolVector::from_bits((0..len).map(|i| (index >> (len - 1 - i)) & 1 == 1))
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64, "index encoding limited to 64 components");
        self.iter().fold(0, |acc, b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    /// Copy with component `j` negated (the neighbour x̃ʲ).
    pub fn flipped(&self, j: usize) -> Self {
        let mut v = self.clone();
        v.flip(j);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        BoolVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn not(&self) -> Self {
        let mut v = BoolVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn slice(&self, start: usize, len: usize) -> Self {
        BoolVector::from_bits((start..start + len).map(|i| self.get(i)))
    }
}

impl PartialOrd for BoolVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic over components, shorter vectors first.
impl Ord for BoolVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Display for BoolVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BoolVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolVector({self})")
    }
}

impl FromStr for BoolVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidLiteral(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(BoolVector::from_bits)
    }
}

impl Serialize for BoolVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Square binary matrix, rows stored as bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: Vec<BoolVector>,
}

impl BoolMatrix {
    /// Panics beyond [`MAX_DIM`]; see [`BoolMatrix::try_zeros`].
    pub fn zeros(n: usize) -> Self {
        Self::try_zeros(n).expect("matrix dimension cap")
    }

    pub fn try_zeros(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::CapExceeded {
                what: "binary matrix",
                requested: n,
                limit: MAX_DIM,
            });
        }
        Ok(BoolMatrix {
            rows: vec![BoolVector::zeros(n); n],
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BoolMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows<R, I>(rows: R) -> Result<Self>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = bool>,
    {
        let rows: Vec<BoolVector> = rows.into_iter().map(BoolVector::from_bits).collect();
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.len(),
            });
        }
        let mut m = BoolMatrix::try_zeros(n)?;
        m.rows = rows;
        Ok(m)
    }

    /// Builds from 0/1 row strings such as `["110", "001", "000"]`.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.parse::<BoolVector>())
            .collect::<Result<Vec<_>>>()?;
        BoolMatrix::from_rows(parsed.iter().map(|r| r.iter().collect::<Vec<_>>()))
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BoolVector {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> BoolVector {
        BoolVector::from_bits(self.rows.iter().map(|r| r.get(j)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BoolVector::is_zero)
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BoolVector::count_ones).sum()
    }

    /// Elementwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.rows.iter().zip(&other.rows).all(|(a, b)| a.le(b))
    }

    pub fn or(&self, other: &Self) -> Self {
        BoolMatrix {
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.or(b)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let mut t = BoolMatrix::zeros(n);
        for i in 0..n {
            for j in self.rows[i].ones_indices() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `(AB)_ij = ∨_k a_ik ∧ b_kj`
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let n = self.dim();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.ones_indices()
                    .fold(BoolVector::zeros(n), |acc, k| acc.or(&other.rows[k]))
            })
            .collect();
        Ok(BoolMatrix { rows })
    }

    /// `(Av)_i = ∨_k a_ik ∧ v_k`
    pub fn apply(&self, v: &BoolVector) -> Result<BoolVector> {
        if self.dim() != v.len() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        Ok(BoolVector::from_bits(
            self.rows.iter().map(|row| !row.and(v).is_zero()),
        ))
    }

    pub fn power(&self, exp: usize) -> Self {
        let mut result = BoolMatrix::identity(self.dim());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base).expect("square");
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base).expect("square");
            }
        }
        result
    }

    /// `Aⁿ = 0` for `n` the dimension.
    pub fn is_nilpotent(&self) -> bool {
        self.power(self.dim()).is_zero()
    }

    /// Smallest `q ≥ 1` with `A^q = 0`, if any. The zero matrix has index 1.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let n = self.dim();
        if n == 0 {
            return Some(1);
        }
        let mut p = self.clone();
        for q in 1..=n {
            if p.is_zero() {
                return Some(q);
            }
            p = p.product(self).expect("square");
        }
        None
    }

    /// Permutation `P` with `PᵀAP` strictly lower triangular, found by
    /// repeatedly removing a row with no remaining dependencies (lowest
    /// original index first). `None` exactly when the dependency digraph
    /// (edge `j → i` for `a_ij = 1`) has a cycle.
    pub fn find_strict_triangular_permutation(&self) -> Option<Permutation> {
        let n = self.dim();
        let mut placed = BoolVector::zeros(n);
        let mut order = Vec::with_capacity(n);
        let mut pending: Vec<usize> = self
            .rows
            .iter()
            .map(BoolVector::count_ones)
            .collect();
        let cols: Vec<BoolVector> = (0..n).map(|j| self.column(j)).collect();
        while order.len() < n {
            let next = (0..n).find(|&i| !placed.get(i) && pending[i] == 0)?;
            placed.set(next, true);
            order.push(next);
            for i in cols[next].ones_indices() {
                pending[i] -= 1;
            }
        }
        Some(Permutation { order })
    }

    /// A dependency cycle `i₀ → i₁ → … → i₀` (each `i_{k+1}` depends on
    /// `i_k`) when the matrix is not nilpotent.
    pub fn dependency_cycle(&self) -> Option<Vec<usize>> {
        let n = self.dim();
        // strip vertices that can be ordered; every remaining row has a
        // dependency inside the remainder
        let mut alive = vec![true; n];
        loop {
            let removable = (0..n).find(|&i| {
                alive[i] && self.rows[i].ones_indices().all(|j| !alive[j])
            });
            match removable {
                Some(i) => alive[i] = false,
                None => break,
            }
        }
        let start = (0..n).find(|&i| alive[i])?;
        let mut seen = vec![None; n];
        let mut path = Vec::new();
        let mut cur = start;
        loop {
            if let Some(pos) = seen[cur] {
                let mut cycle: Vec<usize> = path[pos..].to_vec();
                cycle.reverse();
                return Some(cycle);
            }
            seen[cur] = Some(path.len());
            path.push(cur);
            cur = self.rows[cur]
                .ones_indices()
                .find(|&j| alive[j])
                .expect("remaining rows depend on the remainder");
        }
    }

    pub fn is_strictly_lower_triangular(&self) -> bool {
        (0..self.dim()).all(|i| self.rows[i].ones_indices().all(|j| j < i))
    }

    /// `PᵀAP`, i.e. entry `(k, l)` is `a[order[k]][order[l]]`.
    pub fn conjugate(&self, p: &Permutation) -> Result<Self> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: p.len(),
            });
        }
        let n = self.dim();
        let mut m = BoolMatrix::zeros(n);
        for k in 0..n {
            for l in 0..n {
                m.set(k, l, self.get(p.order[k], p.order[l]));
            }
        }
        Ok(m)
    }

    /// Every column has at most one nonzero entry.
    pub fn column_at_most_one(&self) -> bool {
        let n = self.dim();
        let mut seen = BoolVector::zeros(n);
        for row in &self.rows {
            if !row.and(&seen).is_zero() {
                return false;
            }
            seen = seen.or(row);
        }
        true
    }

    /// `self ⊗ I_k`: each entry becomes a `k × k` identity or zero block.
    pub fn kron_identity(&self, k: usize) -> Result<Self> {
        let n = self.dim();
        let mut m = BoolMatrix::try_zeros(n * k)?;
        for i in 0..n {
            for j in self.rows[i].ones_indices() {
                for h in 0..k {
                    m.set(i * k + h, j * k + h, true);
                }
            }
        }
        Ok(m)
    }

    pub fn to_nested(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(u8::from).collect())
            .collect()
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<&str> = row.iter().map(|b| if b { "1" } else { "0" }).collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{}", self.dim(), self.dim())?;
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for BoolMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_nested().serialize(serializer)
    }
}

/// Bijection on `0..n`. `order[k]` is the original index placed at
/// position `k`; the associated permutation matrix has `P[order[k]][k] = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
        }
    }

    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidLiteral(format!("{order:?} is not a permutation")));
            }
        }
        Ok(Permutation { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn matrix(&self) -> BoolMatrix {
        let n = self.len();
        let mut p = BoolMatrix::zeros(n);
        for (k, &i) in self.order.iter().enumerate() {
            p.set(i, k, true);
        }
        p
    }

    /// `Pᵀv`: component `k` of the result is `v[order[k]]`.
    pub fn apply_transpose(&self, v: &BoolVector) -> BoolVector {
        BoolVector::from_bits(self.order.iter().map(|&i| v.get(i)))
    }
}

/// Square matrix of sets, e.g. a linear set-valued map or `B(F)` over
/// `{∅, 𝕏}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMatrix {
    entries: Vec<Vec<IntervalSet>>,
}

impl SetMatrix {
    pub fn new(entries: Vec<Vec<IntervalSet>>) -> Result<Self> {
        let n = entries.len();
        if let Some(bad) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.len(),
            });
        }
        Ok(SetMatrix { entries })
    }

    /// Lifts a binary matrix to `{∅, 𝕏}` entries.
    pub fn from_shadow(m: &BoolMatrix, universe: &Universe) -> Self {
        let n = m.dim();
        SetMatrix {
            entries: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if m.get(i, j) {
                                universe.carrier().clone()
                            } else {
                                IntervalSet::empty()
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &IntervalSet {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<IntervalSet>] {
        &self.entries
    }

    /// `(MX)_i = ∪_j m_ij ∩ X_j`
    pub fn apply(&self, x: &[IntervalSet]) -> Result<Vec<IntervalSet>> {
        if x.len() != self.dim() {
            return Err(Error::ArityMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(IntervalSet::empty(), |acc, (a, xj)| acc.union(&a.intersect(xj)))
            })
            .collect())
    }

    /// 0/1 matrix with 1 for 𝕏 and 0 for ∅; other entries are an error.
    pub fn shadow(&self, universe: &Universe) -> Result<BoolMatrix> {
        let n = self.dim();
        let mut m = BoolMatrix::try_zeros(n)?;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if universe.is_universe(a) {
                    m.set(i, j, true);
                } else if !a.is_empty() {
                    return Err(Error::NotUniverseOrEmpty { row: i, col: j });
                }
            }
        }
        Ok(m)
    }

    /// λ = ∅ is an eigenvalue iff some column's union falls short of 𝕏.
    pub fn has_empty_eigenvalue(&self, universe: &Universe) -> bool {
        let n = self.dim();
        (0..n).any(|j| {
            let col = (0..n).fold(IntervalSet::empty(), |acc, i| acc.union(&self.entries[i][j]));
            !universe.is_universe(&col)
        })
    }

    /// λ = 𝕏 is an eigenvalue of a `{∅, 𝕏}` matrix iff no permutation
    /// brings its shadow to strictly triangular form.
    pub fn has_universe_eigenvalue(&self, universe: &Universe) -> Result<bool> {
        Ok(self
            .shadow(universe)?
            .find_strict_triangular_permutation()
            .is_none())
    }
}
