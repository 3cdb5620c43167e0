//! Discrete-time binary systems `x(t+1) = f(x(t))` on 𝔹ⁿ: orbits,
//! equilibria, discrete derivatives, local and global convergence tests.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::Bits;
use crate::error::{Error, Result};
use crate::expr::SetExpr;
use crate::matrix::{BinaryState, BoolMatrix, BoolVector};

/// Default cap on `n` for exhaustive enumeration of 𝔹ⁿ.
pub const ENUMERATION_CAP: usize = 20;

pub trait BinaryMap {
    fn arity(&self) -> usize;

    fn apply(&self, x: &BinaryState) -> BinaryState;

    /// Dependency matrix `B(f)`: entry `(i, j)` is set when `f_i` may depend
    /// on `x_j`.
    fn incidence(&self) -> BoolMatrix;
}

/// A binary map given by one expression per component, read in the
/// two-element algebra. Named constants are bound to fixed bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprMap {
    components: Vec<SetExpr>,
    constants: BTreeMap<String, bool>,
}

impl ExprMap {
    pub fn new(components: Vec<SetExpr>) -> Result<Self> {
        ExprMap::with_constants(components, BTreeMap::new())
    }

    pub fn with_constants(components: Vec<SetExpr>, constants: BTreeMap<String, bool>) -> Result<Self> {
        let n = components.len();
        for c in &components {
            if let Some(&i) = c.vars().iter().find(|&&i| i >= n) {
                return Err(Error::VariableOutOfRange { index: i, arity: n });
            }
            if let Some(name) = c.constants().into_iter().find(|k| !constants.contains_key(k)) {
                return Err(Error::UnboundConstant(name));
            }
        }
        Ok(ExprMap {
            components,
            constants,
        })
    }

    pub fn components(&self) -> &[SetExpr] {
        &self.components
    }
}

impl BinaryMap for ExprMap {
    fn arity(&self) -> usize {
        self.components.len()
    }

    fn apply(&self, x: &BinaryState) -> BinaryState {
        assert_eq!(x.len(), self.arity(), "state length");
        let bits: Vec<bool> = x.iter().collect();
        let lookup = |name: &str| self.constants.get(name).copied();
        BoolVector::from_bits(self.components.iter().map(|c| {
            c.eval_in(&Bits, &bits, &lookup)
                .expect("variables and constants checked at construction")
        }))
    }

    fn incidence(&self) -> BoolMatrix {
        let n = self.arity();
        let mut b = BoolMatrix::zeros(n);
        for (i, c) in self.components.iter().enumerate() {
            for j in c.desugar().vars() {
                b.set(i, j, true);
            }
        }
        b
    }
}

/// A binary map stored as its full truth table. Its incidence is the exact
/// (semantic) dependency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    arity: usize,
    outputs: Vec<u32>,
}

impl TruthTable {
    /// Tabulates `f` over all of 𝔹ⁿ.
    pub fn tabulate(f: &dyn BinaryMap, cap: usize) -> Result<Self> {
        let n = f.arity();
        check_cap(n, cap)?;
        let outputs = (0..1u64 << n)
            .map(|idx| f.apply(&BoolVector::from_index(idx, n)).to_index() as u32)
            .collect();
        Ok(TruthTable { arity: n, outputs })
    }

    /// Builds a table from output state numbers, where entry `k` is the image
    /// of `BoolVector::from_index(k, n)`.
    pub fn from_outputs(arity: usize, outputs: Vec<u32>) -> Result<Self> {
        check_cap(arity, ENUMERATION_CAP)?;
        if outputs.len() != 1 << arity {
            return Err(Error::DimensionMismatch {
                left: 1 << arity,
                right: outputs.len(),
            });
        }
        if let Some(&bad) = outputs.iter().find(|&&o| (o as u64) >> arity != 0) {
            return Err(Error::Internal(format!("output {bad} has more than {arity} bits")));
        }
        Ok(TruthTable { arity, outputs })
    }

    pub fn outputs(&self) -> &[u32] {
        &self.outputs
    }
}

impl BinaryMap for TruthTable {
    fn arity(&self) -> usize {
        self.arity
    }

    fn apply(&self, x: &BinaryState) -> BinaryState {
        assert_eq!(x.len(), self.arity, "state length");
        BoolVector::from_index(self.outputs[x.to_index() as usize] as u64, self.arity)
    }

    fn incidence(&self) -> BoolMatrix {
        semantic_incidence(self, ENUMERATION_CAP).expect("arity checked at construction")
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap.min(32) {
        return Err(Error::CapExceeded {
            what: "enumeration of binary states (arity)",
            requested: n,
            limit: cap.min(32),
        });
    }
    Ok(())
}

fn all_states(n: usize) -> impl Iterator<Item = BinaryState> {
    (0..1u64 << n).map(move |idx| BoolVector::from_index(idx, n))
}

pub fn step(f: &dyn BinaryMap, x: &BinaryState) -> BinaryState {
    f.apply(x)
}

/// `f^k(x)`
pub fn iterate(f: &dyn BinaryMap, x: &BinaryState, k: usize) -> BinaryState {
    (0..k).fold(x.clone(), |s, _| f.apply(&s))
}

/// Where an orbit ends up: `transient` steps to reach the cycle, which has
/// length `period` and consists of `cycle` in visiting order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub transient: usize,
    pub period: usize,
    pub cycle: Vec<BinaryState>,
}

/// Follows `x0` until a state repeats. Fails if that takes more than
/// `max_steps` applications of `f`.
pub fn orbit(f: &dyn BinaryMap, x0: &BinaryState, max_steps: usize) -> Result<OrbitSummary> {
    let mut seen: HashMap<BinaryState, usize> = HashMap::new();
    let mut path = vec![x0.clone()];
    seen.insert(x0.clone(), 0);
    for t in 1..=max_steps {
        let next = f.apply(&path[t - 1]);
        if let Some(&first) = seen.get(&next) {
            return Ok(OrbitSummary {
                transient: first,
                period: t - first,
                cycle: path.split_off(first),
            });
        }
        seen.insert(next.clone(), t);
        path.push(next);
    }
    Err(Error::OrbitNotClosed(max_steps))
}

/// All fixed points, in lexicographic order.
pub fn equilibria(f: &dyn BinaryMap, cap: usize) -> Result<Vec<BinaryState>> {
    let n = f.arity();
    check_cap(n, cap)?;
    Ok(all_states(n).filter(|x| &f.apply(x) == x).collect())
}

/// Componentwise exclusive or.
pub fn binary_distance(x: &BinaryState, y: &BinaryState) -> Result<BinaryState> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.xor(y))
}

/// `f′(x)_ij = f_i(x) ⊕ f_i(x̃ʲ)`
pub fn discrete_derivative(f: &dyn BinaryMap, x: &BinaryState) -> BoolMatrix {
    let n = f.arity();
    let fx = f.apply(x);
    let mut d = BoolMatrix::zeros(n);
    for j in 0..n {
        let change = fx.xor(&f.apply(&x.flipped(j)));
        for i in change.ones_indices() {
            d.set(i, j, true);
        }
    }
    d
}

/// Exact dependency matrix: `(i, j)` is set iff flipping `x_j` changes
/// `f_i` somewhere in 𝔹ⁿ.
pub fn semantic_incidence(f: &dyn BinaryMap, cap: usize) -> Result<BoolMatrix> {
    let n = f.arity();
    check_cap(n, cap)?;
    let mut acc = BoolMatrix::zeros(n);
    for x in all_states(n) {
        acc = acc.or(&discrete_derivative(f, &x));
    }
    Ok(acc)
}

fn require_equilibrium(f: &dyn BinaryMap, x: &BinaryState) -> Result<()> {
    if x.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: x.len(),
        });
    }
    if &f.apply(x) != x {
        return Err(Error::NotAnEquilibrium);
    }
    Ok(())
}

/// Attractiveness of an equilibrium within its von Neumann neighbourhood,
/// decided from the discrete derivative: it must be nilpotent and have at
/// most one nonzero entry per column.
pub fn is_vnn_attractive(f: &dyn BinaryMap, x: &BinaryState) -> Result<bool> {
    require_equilibrium(f, x)?;
    let d = discrete_derivative(f, x);
    Ok(d.is_nilpotent() && d.column_at_most_one())
}

/// The same property checked by simulation: every neighbour `x̃ʲ` must stay
/// inside the neighbourhood and reach `x` within `n` steps.
pub fn is_vnn_attractive_direct(f: &dyn BinaryMap, x: &BinaryState) -> Result<bool> {
    require_equilibrium(f, x)?;
    let n = f.arity();
    let in_vnn = |y: &BinaryState| y.xor(x).count_ones() <= 1;
    for j in 0..n {
        let mut y = x.flipped(j);
        for _ in 0..n {
            y = f.apply(&y);
            if !in_vnn(&y) {
                return Ok(false);
            }
        }
        if &y != x {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryContractivity {
    pub contractive: bool,
    /// Smallest `q` with `B(f)^q = 0`; `f^q` is then constant.
    pub q: Option<usize>,
    pub fixed_point: Option<BinaryState>,
}

/// Global contractivity from the incidence matrix: contractive iff `B(f)` is
/// nilpotent. The fixed point is found by iterating from the zero state.
pub fn is_contractive_binary(f: &dyn BinaryMap) -> BinaryContractivity {
    match f.incidence().nilpotency_index() {
        Some(q) => BinaryContractivity {
            contractive: true,
            q: Some(q),
            fixed_point: Some(iterate(f, &BoolVector::zeros(f.arity()), q)),
        },
        None => BinaryContractivity {
            contractive: false,
            q: None,
            fixed_point: None,
        },
    }
}
