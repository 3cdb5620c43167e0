//! Convergence analysis of set-valued maps: global contractivity and the
//! unique fixed point, equilibria, local attractiveness and consensus of
//! linear maps.

use serde::Serialize;

use crate::binary::{self, BinaryMap};
use crate::encoding::{translate_map, Partition};
use crate::error::{Error, Result};
use crate::expr::{LinearSbm, Sbm};
use crate::interval::{IntervalSet, Universe};
use crate::matrix::{BoolMatrix, BoolVector, Permutation, SetMatrix};

/// `𝒟(X, Y)`: componentwise symmetric difference.
pub fn set_distance(x: &[IntervalSet], y: &[IntervalSet]) -> Result<Vec<IntervalSet>> {
    if x.len() != y.len() {
        return Err(Error::ArityMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(x.iter().zip(y).map(|(a, b)| a.sym_diff(b)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractivityVerdict {
    pub contractive: bool,
    /// Permutation bringing `B(F)` to strictly lower triangular form.
    pub witness: Option<Permutation>,
    /// Smallest `q` with `B(F)^q = 0`; `F^q` is then constant.
    pub q: Option<usize>,
    /// Variables on a dependency cycle, when there is one.
    pub cycle_evidence: Option<Vec<usize>>,
}

/// Global contractivity decided on the 0/1 shadow of `B(F)`.
pub fn is_contractive_sbm(sbm: &Sbm) -> ContractivityVerdict {
    contractivity_of(&sbm.incidence())
}

pub(crate) fn contractivity_of(b: &BoolMatrix) -> ContractivityVerdict {
    match b.find_strict_triangular_permutation() {
        Some(p) => ContractivityVerdict {
            contractive: true,
            witness: Some(p),
            q: b.nilpotency_index(),
            cycle_evidence: None,
        },
        None => ContractivityVerdict {
            contractive: false,
            witness: None,
            q: None,
            cycle_evidence: b.dependency_cycle(),
        },
    }
}

/// The second, independent route: augment the constants, encode over
/// `partition` and test nilpotency of the `nκ × nκ` incidence of the
/// encoded binary map.
pub fn is_contractive_encoded(sbm: &Sbm, partition: &Partition) -> Result<bool> {
    let augmented = sbm.augment_constants();
    let dim = augmented.arity() * partition.kappa();
    BoolMatrix::try_zeros(dim)?;
    let f = translate_map(&augmented, partition)?;
    Ok(f.incidence().is_nilpotent())
}

/// The unique fixed point of a contractive map, reached from `start` in `q`
/// steps. A second run from the all-empty state must land on the same point.
pub fn global_fixed_point(sbm: &Sbm, start: &[IntervalSet]) -> Result<Vec<IntervalSet>> {
    let verdict = is_contractive_sbm(sbm);
    let q = match verdict.q {
        Some(q) if verdict.contractive => q,
        _ => return Err(Error::NotContractive),
    };
    let xi = sbm.iterate(start, q)?;
    let other = sbm.iterate(&vec![IntervalSet::empty(); sbm.arity()], q)?;
    if xi != other {
        return Err(Error::Internal("contractive map reached two different points".into()));
    }
    if sbm.eval(&xi)? != xi {
        return Err(Error::Internal("limit of a contractive map is not a fixed point".into()));
    }
    Ok(xi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriaSummary {
    pub kappa: usize,
    /// Fixed points of the n-bit map on each cell.
    pub per_cell: Vec<Vec<BoolVector>>,
    /// Product of the per-cell counts; `None` if it overflows.
    pub total: Option<u128>,
    /// All set-valued equilibria, when there are at most `listing_cap`.
    pub listing: Option<Vec<Vec<IntervalSet>>>,
}

/// Equilibria of `F` among states that are unions of cells of `partition`.
/// Every cell carries an independent copy of the same n-bit map, so the
/// equilibria are all combinations of per-cell fixed points.
pub fn equilibria_sbm(
    sbm: &Sbm,
    partition: &Partition,
    enum_cap: usize,
    listing_cap: usize,
) -> Result<EquilibriaSummary> {
    let f = translate_map(sbm, partition)?;
    let kappa = partition.kappa();
    let per_cell = (0..kappa)
        .map(|h| binary::equilibria(&f.per_cell_map(h), enum_cap))
        .collect::<Result<Vec<_>>>()?;
    let total = per_cell
        .iter()
        .try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128));
    let listing = match total {
        Some(t) if t <= listing_cap as u128 => Some(list_equilibria(sbm.arity(), partition, &per_cell)?),
        _ => None,
    };
    Ok(EquilibriaSummary {
        kappa,
        per_cell,
        total,
        listing,
    })
}

fn list_equilibria(n: usize, partition: &Partition, per_cell: &[Vec<BoolVector>]) -> Result<Vec<Vec<IntervalSet>>> {
    let kappa = partition.kappa();
    let mut out = Vec::new();
    let mut choice = vec![0usize; kappa];
    if per_cell.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    loop {
        let mut bits = BoolVector::zeros(n * kappa);
        for (h, &c) in choice.iter().enumerate() {
            for i in per_cell[h][c].ones_indices() {
                bits.set(i * kappa + h, true);
            }
        }
        out.push(partition.decode_state(&bits)?);
        // advance the mixed-radix counter, last cell fastest
        let mut h = kappa;
        loop {
            if h == 0 {
                return Ok(out);
            }
            h -= 1;
            choice[h] += 1;
            if choice[h] < per_cell[h].len() {
                break;
            }
            choice[h] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalVerdict {
    /// Derivative test on the encoded map at the encoded equilibrium.
    pub theorem: bool,
    /// Direct simulation of the set-level neighbourhood, in which each
    /// neighbour complements one whole component.
    pub direct: bool,
}

/// Attractiveness of an equilibrium within its neighbourhood.
pub fn is_locally_attractive_sbm(sbm: &Sbm, xbar: &[IntervalSet], partition: &Partition) -> Result<LocalVerdict> {
    if sbm.eval(xbar)? != xbar {
        return Err(Error::NotAnEquilibrium);
    }
    let encoded = partition.encode_state(xbar)?;
    let f = translate_map(sbm, partition)?;
    // f′ is block diagonal over cells, so the test splits cell by cell
    let mut theorem = true;
    for h in 0..partition.kappa() {
        let cell_map = f.per_cell_map(h);
        if !binary::is_vnn_attractive(&cell_map, &partition.cell_bits(&encoded, h))? {
            theorem = false;
            break;
        }
    }
    Ok(LocalVerdict {
        theorem,
        direct: set_neighbourhood_attractive(sbm, xbar)?,
    })
}

/// Neighbours `X̃ʲ`: `X̄` with component `j` complemented.
pub fn set_neighbours(universe: &Universe, x: &[IntervalSet]) -> Vec<Vec<IntervalSet>> {
    (0..x.len())
        .map(|j| {
            let mut y = x.to_vec();
            y[j] = universe.complement(&x[j]);
            y
        })
        .collect()
}

fn set_neighbourhood_attractive(sbm: &Sbm, xbar: &[IntervalSet]) -> Result<bool> {
    let n = sbm.arity();
    let mut vnn = set_neighbours(sbm.universe(), xbar);
    vnn.push(xbar.to_vec());
    for y in &vnn {
        if !vnn.contains(&sbm.eval(y)?) {
            return Ok(false);
        }
        if sbm.iterate(y, n)? != xbar {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsensusVerdict {
    pub exists: bool,
    /// `∩_i ∪_j a_ij`; every subset `Φ` of it gives a fixed point `(Φ, …, Φ)`.
    pub region: IntervalSet,
}

pub fn consensus_region(linear: &LinearSbm) -> ConsensusVerdict {
    let a = linear.matrix();
    let region = a
        .rows()
        .iter()
        .map(|row| row.iter().fold(IntervalSet::empty(), |acc, e| acc.union(e)))
        .fold(linear.universe().carrier().clone(), |acc, u| acc.intersect(&u));
    ConsensusVerdict {
        exists: !region.is_empty(),
        region,
    }
}

/// `𝒟(F(X), F(Y)) ⊆ M 𝒟(X, Y)` componentwise, with `M` read as a `{∅, 𝕏}`
/// matrix.
pub fn distance_bound_holds(sbm: &Sbm, m: &BoolMatrix, x: &[IntervalSet], y: &[IntervalSet]) -> Result<bool> {
    if m.dim() != sbm.arity() {
        return Err(Error::DimensionMismatch {
            left: sbm.arity(),
            right: m.dim(),
        });
    }
    let lhs = set_distance(&sbm.eval(x)?, &sbm.eval(y)?)?;
    let rhs = SetMatrix::from_shadow(m, sbm.universe()).apply(&set_distance(x, y)?)?;
    Ok(lhs.iter().zip(&rhs).all(|(l, r)| l.is_subset(r)))
}

/// The inequality with `M = B(F)`, which always holds.
pub fn verify_prop3(sbm: &Sbm, x: &[IntervalSet], y: &[IntervalSet]) -> Result<bool> {
    distance_bound_holds(sbm, &sbm.incidence(), x, y)
}
