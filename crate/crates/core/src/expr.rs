//! Set-valued Boolean maps: expression trees over state variables and named
//! constant sets, their evaluation, dependency structure, constant
//! augmentation and normal-form coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

use crate::algebra::{Bits, BooleanAlgebra};
use crate::error::{Error, Result};
use crate::interval::{IntervalSet, Universe};
use crate::matrix::{BoolMatrix, SetMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetExpr {
    Var(usize),
    Const(String),
    Universe,
    Empty,
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersect(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>),
    Difference(Box<SetExpr>, Box<SetExpr>),
    SymDiff(Box<SetExpr>, Box<SetExpr>),
}

/// Shorthand for `SetExpr::Var(i)` (zero-based).
pub fn var(i: usize) -> SetExpr {
    SetExpr::Var(i)
}

/// Shorthand for `SetExpr::Const(name)`.
pub fn constant(name: &str) -> SetExpr {
    SetExpr::Const(name.to_string())
}

impl BitOr for SetExpr {
    type Output = SetExpr;
    fn bitor(self, rhs: SetExpr) -> SetExpr {
        SetExpr::Union(Box::new(self), Box::new(rhs))
    }
}

impl BitAnd for SetExpr {
    type Output = SetExpr;
    fn bitand(self, rhs: SetExpr) -> SetExpr {
        SetExpr::Intersect(Box::new(self), Box::new(rhs))
    }
}

impl Not for SetExpr {
    type Output = SetExpr;
    fn not(self) -> SetExpr {
        SetExpr::Complement(Box::new(self))
    }
}

impl Sub for SetExpr {
    type Output = SetExpr;
    fn sub(self, rhs: SetExpr) -> SetExpr {
        SetExpr::Difference(Box::new(self), Box::new(rhs))
    }
}

impl BitXor for SetExpr {
    type Output = SetExpr;
    fn bitxor(self, rhs: SetExpr) -> SetExpr {
        SetExpr::SymDiff(Box::new(self), Box::new(rhs))
    }
}

impl SetExpr {
    /// Rewrites `\` and `Δ` into union, intersection and complement.
    pub fn desugar(&self) -> SetExpr {
        use SetExpr::*;
        match self {
            Var(_) | Const(_) | Universe | Empty => self.clone(),
            Union(a, b) => a.desugar() | b.desugar(),
            Intersect(a, b) => a.desugar() & b.desugar(),
            Complement(a) => !a.desugar(),
            Difference(a, b) => a.desugar() & !b.desugar(),
            SymDiff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                (!a.clone() & b.clone()) | (a & !b)
            }
        }
    }

    pub fn is_core(&self) -> bool {
        use SetExpr::*;
        match self {
            Var(_) | Const(_) | Universe | Empty => true,
            Union(a, b) | Intersect(a, b) => a.is_core() && b.is_core(),
            Complement(a) => a.is_core(),
            Difference(..) | SymDiff(..) => false,
        }
    }

    fn children(&self) -> Vec<&SetExpr> {
        use SetExpr::*;
        match self {
            Var(_) | Const(_) | Universe | Empty => vec![],
            Complement(a) => vec![a],
            Union(a, b) | Intersect(a, b) | Difference(a, b) | SymDiff(a, b) => vec![a, b],
        }
    }

    /// Indices of the variables occurring in the expression.
    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let SetExpr::Var(i) = e {
                out.insert(*i);
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let SetExpr::Const(name) = e {
                out.insert(name.clone());
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&SetExpr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Replaces every `Var(j)` by `replacement[j]`.
    pub fn substitute(&self, replacement: &[SetExpr]) -> SetExpr {
        self.map_leaves(&mut |leaf| match leaf {
            SetExpr::Var(j) => replacement[*j].clone(),
            other => other.clone(),
        })
    }

    fn map_leaves(&self, f: &mut impl FnMut(&SetExpr) -> SetExpr) -> SetExpr {
        use SetExpr::*;
        match self {
            Var(_) | Const(_) | Universe | Empty => f(self),
            Union(a, b) => a.map_leaves(f) | b.map_leaves(f),
            Intersect(a, b) => a.map_leaves(f) & b.map_leaves(f),
            Complement(a) => !a.map_leaves(f),
            Difference(a, b) => a.map_leaves(f) - b.map_leaves(f),
            SymDiff(a, b) => a.map_leaves(f) ^ b.map_leaves(f),
        }
    }

    /// Evaluates in any Boolean algebra, given values for the variables and
    /// a lookup for named constants.
    pub fn eval_in<A: BooleanAlgebra>(
        &self,
        alg: &A,
        vars: &[A::Elem],
        constant: &dyn Fn(&str) -> Option<A::Elem>,
    ) -> Result<A::Elem> {
        use SetExpr::*;
        Ok(match self {
            Var(i) => vars.get(*i).cloned().ok_or(Error::VariableOutOfRange {
                index: *i,
                arity: vars.len(),
            })?,
            Const(name) => constant(name).ok_or_else(|| Error::UnboundConstant(name.clone()))?,
            Universe => alg.one(),
            Empty => alg.zero(),
            Union(a, b) => alg.join(
                &a.eval_in(alg, vars, constant)?,
                &b.eval_in(alg, vars, constant)?,
            ),
            Intersect(a, b) => alg.meet(
                &a.eval_in(alg, vars, constant)?,
                &b.eval_in(alg, vars, constant)?,
            ),
            Complement(a) => alg.complement(&a.eval_in(alg, vars, constant)?),
            Difference(a, b) => alg.difference(
                &a.eval_in(alg, vars, constant)?,
                &b.eval_in(alg, vars, constant)?,
            ),
            SymDiff(a, b) => alg.sym_diff(
                &a.eval_in(alg, vars, constant)?,
                &b.eval_in(alg, vars, constant)?,
            ),
        })
    }

    /// Evaluates over bits with no constants.
    pub fn eval_bits(&self, x: &[bool]) -> Result<bool> {
        self.eval_in(&Bits, x, &|_| None)
    }

    /// Writes the expression with `names` for variables, using the DSL
    /// operator syntax and only the parentheses precedence requires.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        ExprDisplay { expr: self, names }
    }

    fn precedence(&self) -> u8 {
        use SetExpr::*;
        match self {
            Union(..) => 1,
            Difference(..) | SymDiff(..) => 2,
            Intersect(..) => 3,
            Complement(_) => 4,
            Var(_) | Const(_) | Universe | Empty => 5,
        }
    }
}

struct ExprDisplay<'a> {
    expr: &'a SetExpr,
    names: &'a [String],
}

impl ExprDisplay<'_> {
    fn write(&self, e: &SetExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SetExpr::*;
        let child = |c: &SetExpr, parens: bool, f: &mut fmt::Formatter<'_>| {
            if parens {
                f.write_str("(")?;
                self.write(c, f)?;
                f.write_str(")")
            } else {
                self.write(c, f)
            }
        };
        match e {
            Var(i) => match self.names.get(*i) {
                Some(name) => f.write_str(name),
                None => write!(f, "X{}", i + 1),
            },
            Const(name) => f.write_str(name),
            Universe => f.write_str("X"),
            Empty => f.write_str("empty"),
            Complement(a) => {
                f.write_str("~")?;
                child(a, a.precedence() < e.precedence(), f)
            }
            Union(a, b) | Intersect(a, b) | Difference(a, b) | SymDiff(a, b) => {
                let op = match e {
                    Union(..) => " | ",
                    Intersect(..) => " & ",
                    Difference(..) => " \\ ",
                    _ => " ^ ",
                };
                // left-associative: a right operand at the same level needs parens
                child(a, a.precedence() < e.precedence(), f)?;
                f.write_str(op)?;
                child(b, b.precedence() <= e.precedence(), f)
            }
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.expr, f)
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(&[]).fmt(f)
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

/// A set-valued Boolean map `X(t+1) = F(X(t))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sbm {
    universe: Universe,
    names: Vec<String>,
    components: Vec<SetExpr>,
    constants: BTreeMap<String, IntervalSet>,
}

impl Sbm {
    pub fn new(
        universe: Universe,
        components: Vec<SetExpr>,
        constants: BTreeMap<String, IntervalSet>,
    ) -> Result<Self> {
        let names = default_names(components.len());
        Sbm::with_names(universe, names, components, constants)
    }

    pub fn with_names(
        universe: Universe,
        names: Vec<String>,
        components: Vec<SetExpr>,
        constants: BTreeMap<String, IntervalSet>,
    ) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            });
        }
        if names.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: names.len(),
            });
        }
        for value in constants.values() {
            universe.check(value)?;
        }
        for c in &components {
            if let Some(&i) = c.vars().iter().find(|&&i| i >= n) {
                return Err(Error::VariableOutOfRange { index: i, arity: n });
            }
            if let Some(name) = c.constants().into_iter().find(|k| !constants.contains_key(k)) {
                return Err(Error::UnboundConstant(name));
            }
        }
        Ok(Sbm {
            universe,
            names,
            components,
            constants,
        })
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn components(&self) -> &[SetExpr] {
        &self.components
    }

    pub fn constants(&self) -> &BTreeMap<String, IntervalSet> {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<&IntervalSet> {
        self.constants.get(name)
    }

    /// Constants used by at least one component, sorted by name.
    pub fn referenced_constants(&self) -> Vec<String> {
        let used: BTreeSet<String> = self.components.iter().flat_map(|c| c.constants()).collect();
        used.into_iter().collect()
    }

    fn check_state(&self, x: &[IntervalSet]) -> Result<()> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: x.len(),
            });
        }
        x.iter().try_for_each(|s| self.universe.check(s))
    }

    /// One synchronous step `F(X)`.
    pub fn eval(&self, x: &[IntervalSet]) -> Result<Vec<IntervalSet>> {
        self.check_state(x)?;
        let lookup = |name: &str| self.constants.get(name).cloned();
        self.components
            .iter()
            .map(|c| c.eval_in(&self.universe, x, &lookup))
            .collect()
    }

    /// `F^steps(X)`
    pub fn iterate(&self, x: &[IntervalSet], steps: usize) -> Result<Vec<IntervalSet>> {
        let mut state = x.to_vec();
        for _ in 0..steps {
            state = self.eval(&state)?;
        }
        Ok(state)
    }

    /// Syntactic incidence: entry `(i, j)` is set iff `X_j` occurs in
    /// component `i`. Constants contribute no columns.
    pub fn incidence(&self) -> BoolMatrix {
        let n = self.arity();
        let mut b = BoolMatrix::zeros(n);
        for (i, c) in self.components.iter().enumerate() {
            for j in c.desugar().vars() {
                b.set(i, j, true);
            }
        }
        b
    }

    pub fn desugared(&self) -> Sbm {
        Sbm {
            components: self.components.iter().map(SetExpr::desugar).collect(),
            ..self.clone()
        }
    }

    /// Turns every referenced constant into an extra state variable whose
    /// update rule re-assigns the constant. The original components refer
    /// to the new variables instead, so the constants only appear in the
    /// appended rows, which have no state dependencies.
    pub fn augment_constants(&self) -> Sbm {
        let used = self.referenced_constants();
        if used.is_empty() {
            return self.clone();
        }
        let n = self.arity();
        let index: BTreeMap<&str, usize> = used
            .iter()
            .enumerate()
            .map(|(k, name)| (name.as_str(), n + k))
            .collect();
        let mut components: Vec<SetExpr> = self
            .components
            .iter()
            .map(|c| {
                c.map_leaves(&mut |leaf| match leaf {
                    SetExpr::Const(name) => SetExpr::Var(index[name.as_str()]),
                    other => other.clone(),
                })
            })
            .collect();
        components.extend(used.iter().map(|name| SetExpr::Const(name.clone())));
        let mut names = self.names.clone();
        names.extend(used.iter().cloned());
        Sbm {
            universe: self.universe.clone(),
            names,
            components,
            constants: self.constants.clone(),
        }
    }

    /// Extends a state of this map with the values of its referenced
    /// constants, matching the variable layout of [`Sbm::augment_constants`].
    pub fn augment_state(&self, x: &[IntervalSet]) -> Vec<IntervalSet> {
        let mut out = x.to_vec();
        out.extend(
            self.referenced_constants()
                .iter()
                .map(|name| self.constants[name].clone()),
        );
        out
    }

    /// `F ∘ G` by syntactic substitution of `G`'s components.
    pub fn compose(&self, inner: &Sbm) -> Result<Sbm> {
        if inner.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: inner.arity(),
            });
        }
        let mut constants = inner.constants.clone();
        for (name, value) in &self.constants {
            match constants.get(name) {
                Some(existing) if existing != value => {
                    return Err(Error::Internal(format!(
                        "constant `{name}` bound differently in composed maps"
                    )))
                }
                _ => {
                    constants.insert(name.clone(), value.clone());
                }
            }
        }
        Sbm::with_names(
            self.universe.clone(),
            self.names.clone(),
            self.components
                .iter()
                .map(|c| c.substitute(&inner.components))
                .collect(),
            constants,
        )
    }

    /// Normal-form coefficients of component `i`. Every constant it uses
    /// must be ∅ or the universe.
    pub fn nf_coefficients(&self, i: usize, cap: usize) -> Result<NfCoefficients> {
        let component = self.components.get(i).ok_or(Error::VariableOutOfRange {
            index: i,
            arity: self.arity(),
        })?;
        let mut bits = BTreeMap::new();
        for name in component.constants() {
            let value = &self.constants[&name];
            if value.is_empty() {
                bits.insert(name, false);
            } else if self.universe.is_universe(value) {
                bits.insert(name, true);
            } else {
                return Err(Error::NotCellRepresentable(format!(
                    "constant `{name}` = {value} (normal form needs ∅ or the universe; augment first)"
                )));
            }
        }
        nf_coefficients(component, self.arity(), &|name| bits.get(name).copied(), cap)
    }

    pub fn display_component(&self, i: usize) -> String {
        self.components[i].display_with(&self.names).to_string()
    }
}

impl fmt::Display for Sbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.arity() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}+ = {}", self.names[i], self.display_component(i))?;
        }
        Ok(())
    }
}

/// `B(F∘G) ≤ B(F)·B(G)` elementwise.
pub fn check_composition_bound(outer: &Sbm, inner: &Sbm) -> Result<bool> {
    let composed = outer.compose(inner)?.incidence();
    let bound = outer.incidence().product(&inner.incidence())?;
    Ok(composed.le(&bound))
}

/// Coefficients `A_J ∈ {∅, 𝕏}` of the normal form
/// `F(X) = Δ_J (A_J ∩ ∩_{j∈J} X_j)`, indexed by subsets `J` of the
/// variables (bit `j` of the mask set iff `j ∈ J`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfCoefficients {
    arity: usize,
    coeffs: Vec<bool>,
}

/// Computes normal-form coefficients by evaluating `expr` on every
/// indicator input `y_J` and applying the subset XOR (Möbius) transform.
pub fn nf_coefficients(
    expr: &SetExpr,
    arity: usize,
    constant: &dyn Fn(&str) -> Option<bool>,
    cap: usize,
) -> Result<NfCoefficients> {
    if arity > cap || arity >= usize::BITS as usize {
        return Err(Error::CapExceeded {
            what: "normal-form enumeration (variables)",
            requested: arity,
            limit: cap,
        });
    }
    let size = 1usize << arity;
    let mut coeffs = Vec::with_capacity(size);
    let mut y = vec![false; arity];
    for mask in 0..size {
        for (j, bit) in y.iter_mut().enumerate() {
            *bit = mask >> j & 1 == 1;
        }
        coeffs.push(expr.eval_in(&Bits, &y, constant)?);
    }
    for j in 0..arity {
        for mask in 0..size {
            if mask >> j & 1 == 1 {
                coeffs[mask] ^= coeffs[mask ^ (1 << j)];
            }
        }
    }
    Ok(NfCoefficients { arity, coeffs })
}

impl NfCoefficients {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `A_J` for `J` given as zero-based variable indices; `true` means 𝕏.
    pub fn get(&self, subset: &[usize]) -> bool {
        let mask = subset.iter().fold(0usize, |m, &j| m | 1 << j);
        self.coeffs[mask]
    }

    pub fn by_mask(&self, mask: usize) -> bool {
        self.coeffs[mask]
    }

    /// All `(J, A_J)` pairs ordered by `|J|`, then lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, bool)> + '_ {
        let mut subsets: Vec<Vec<usize>> = (0..self.coeffs.len())
            .map(|mask| (0..self.arity).filter(|j| mask >> j & 1 == 1).collect())
            .collect();
        subsets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        subsets.into_iter().map(|s| {
            let value = self.get(&s);
            (s, value)
        })
    }

    /// Rebuilds the expression `Δ_{J: A_J = 𝕏} ∩_{j∈J} X_j`.
    pub fn to_expr(&self) -> SetExpr {
        self.iter()
            .filter(|(_, a)| *a)
            .map(|(subset, _)| {
                subset
                    .into_iter()
                    .map(SetExpr::Var)
                    .reduce(|acc, v| acc & v)
                    .unwrap_or(SetExpr::Universe)
            })
            .reduce(|acc, term| acc ^ term)
            .unwrap_or(SetExpr::Empty)
    }
}

impl fmt::Display for NfCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (subset, a)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            let idx: Vec<String> = subset.iter().map(|j| (j + 1).to_string()).collect();
            write!(f, "A{{{}}} = {}", idx.join(","), if a { "X" } else { "empty" })?;
        }
        Ok(())
    }
}

/// Linear set-valued map `X⁺ = AX`, i.e. `X_i⁺ = ∪_j (a_ij ∩ X_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSbm {
    universe: Universe,
    matrix: SetMatrix,
}

impl LinearSbm {
    pub fn new(universe: Universe, matrix: SetMatrix) -> Result<Self> {
        for row in matrix.rows() {
            for a in row {
                universe.check(a)?;
            }
        }
        Ok(LinearSbm { universe, matrix })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn matrix(&self) -> &SetMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, x: &[IntervalSet]) -> Result<Vec<IntervalSet>> {
        self.matrix.apply(x)
    }

    /// Constant name used for entry `(i, j)` (zero-based) in [`LinearSbm::to_sbm`].
    pub fn entry_name(i: usize, j: usize) -> String {
        format!("a{}_{}", i + 1, j + 1)
    }

    /// The equivalent expression-based map, with one named constant per entry.
    pub fn to_sbm(&self) -> Sbm {
        let n = self.dim();
        let mut constants = BTreeMap::new();
        let components = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let name = LinearSbm::entry_name(i, j);
                        constants.insert(name.clone(), self.matrix.get(i, j).clone());
                        SetExpr::Const(name) & SetExpr::Var(j)
                    })
                    .reduce(|acc, t| acc | t)
                    .expect("n >= 1")
            })
            .collect();
        Sbm::new(self.universe.clone(), components, constants).expect("entries are in the universe")
    }

    /// Recognizes maps whose components are unions of terms `c ∩ X_j`,
    /// `X_j ∩ c` or bare `X_j`, where `c` is variable-free.
    pub fn from_sbm(sbm: &Sbm) -> Result<Self> {
        let n = sbm.arity();
        let lookup = |name: &str| sbm.constant(name).cloned();
        let coefficient = |e: &SetExpr| -> Result<Option<IntervalSet>> {
            if !e.vars().is_empty() {
                return Ok(None);
            }
            e.eval_in(sbm.universe(), &[], &lookup).map(Some)
        };
        let mut rows = vec![vec![IntervalSet::empty(); n]; n];
        for (i, component) in sbm.components().iter().enumerate() {
            let mut terms = Vec::new();
            flatten_union(component, &mut terms);
            for term in terms {
                let (j, coeff) = match term {
                    SetExpr::Var(j) => (*j, sbm.universe().carrier().clone()),
                    SetExpr::Empty => continue,
                    SetExpr::Intersect(a, b) => match (a.as_ref(), b.as_ref()) {
                        (SetExpr::Var(j), c) | (c, SetExpr::Var(j)) => match coefficient(c)? {
                            Some(value) => (*j, value),
                            None => return Err(not_linear(sbm, i)),
                        },
                        _ => return Err(not_linear(sbm, i)),
                    },
                    _ => return Err(not_linear(sbm, i)),
                };
                rows[i][j] = rows[i][j].union(&coeff);
            }
        }
        LinearSbm::new(sbm.universe().clone(), SetMatrix::new(rows)?)
    }

    /// `B(A)`: 1 where the entry is nonempty.
    pub fn incidence(&self) -> BoolMatrix {
        let n = self.dim();
        let mut b = BoolMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                b.set(i, j, !self.matrix.get(i, j).is_empty());
            }
        }
        b
    }
}

fn flatten_union<'a>(e: &'a SetExpr, out: &mut Vec<&'a SetExpr>) {
    match e {
        SetExpr::Union(a, b) => {
            flatten_union(a, out);
            flatten_union(b, out);
        }
        other => out.push(other),
    }
}

fn not_linear(sbm: &Sbm, i: usize) -> Error {
    Error::NotLinear(format!(
        "rule for {} is `{}`; expected a union of `constant & variable` terms",
        sbm.names()[i],
        sbm.display_component(i)
    ))
}
