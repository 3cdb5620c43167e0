//! Exact binary encoding of set-valued maps.
//!
//! The distinguished sets of a system (initial states and constants) cut the
//! universe into finitely many cells. Every set reachable by the dynamics is
//! a union of cells, so it is represented exactly by one bit per cell, and
//! the set-valued map becomes κ independent copies of an n-bit map.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::BitVectors;
use crate::binary::{BinaryMap, ExprMap};
use crate::error::{Error, Result};
use crate::expr::{Sbm, SetExpr};
use crate::interval::{IntervalSet, Universe};
use crate::matrix::{BoolMatrix, BoolVector};

/// Default cap on the number of generators (so at most 2¹⁶ cells).
pub const PARTITION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    /// Bit `i` is set when the cell lies inside generator `i`.
    pub signature: BoolVector,
    pub region: IntervalSet,
}

/// The nonempty atoms `∩_i (G_i or 𝒞G_i)` of the algebra generated by a list
/// of sets, ordered by signature from all-inside down to all-outside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    #[serde(skip)]
    universe: Universe,
    generators: Vec<IntervalSet>,
    cells: Vec<Cell>,
}

pub fn build_partition(generators: &[IntervalSet], universe: &Universe, cap: usize) -> Result<Partition> {
    if generators.len() > cap {
        return Err(Error::CapExceeded {
            what: "partition generators",
            requested: generators.len(),
            limit: cap,
        });
    }
    for g in generators {
        universe.check(g)?;
    }
    let mut cells = vec![(Vec::new(), universe.carrier().clone())];
    for g in generators {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for (sig, region) in cells {
            let inside = region.intersect(g);
            let outside = region.difference(g);
            if !inside.is_empty() {
                let mut s: Vec<bool> = sig.clone();
                s.push(true);
                next.push((s, inside));
            }
            if !outside.is_empty() {
                let mut s = sig;
                s.push(false);
                next.push((s, outside));
            }
        }
        cells = next;
    }
    let mut cells: Vec<Cell> = cells
        .into_iter()
        .map(|(sig, region)| Cell {
            signature: BoolVector::from_bits(sig),
            region,
        })
        .collect();
    cells.sort_by(|a, b| b.signature.cmp(&a.signature));
    Ok(Partition {
        universe: universe.clone(),
        generators: generators.to_vec(),
        cells,
    })
}

impl Partition {
    /// Partition generated by an initial state together with every constant
    /// the map refers to (in name order).
    pub fn for_system(sbm: &Sbm, initial: &[IntervalSet], cap: usize) -> Result<Partition> {
        let mut generators = initial.to_vec();
        generators.extend(
            sbm.referenced_constants()
                .iter()
                .map(|name| sbm.constants()[name].clone()),
        );
        build_partition(&generators, sbm.universe(), cap)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn generators(&self) -> &[IntervalSet] {
        &self.generators
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of cells κ.
    pub fn kappa(&self) -> usize {
        self.cells.len()
    }

    /// `𝓛(S)`: bit `h` set iff `S` meets cell `h`. Fails unless `S` is a
    /// union of cells.
    pub fn encode(&self, set: &IntervalSet) -> Result<BoolVector> {
        self.universe.check(set)?;
        let mut bits = BoolVector::zeros(self.kappa());
        for (h, cell) in self.cells.iter().enumerate() {
            let common = set.intersect(&cell.region);
            if common.is_empty() {
                continue;
            }
            if common != cell.region {
                return Err(Error::NotCellRepresentable(set.to_string()));
            }
            bits.set(h, true);
        }
        Ok(bits)
    }

    /// `𝓛⁻¹(x)`: union of the flagged cells.
    pub fn decode(&self, bits: &BoolVector) -> Result<IntervalSet> {
        if bits.len() != self.kappa() {
            return Err(Error::DimensionMismatch {
                left: self.kappa(),
                right: bits.len(),
            });
        }
        Ok(bits
            .ones_indices()
            .fold(IntervalSet::empty(), |acc, h| acc.union(&self.cells[h].region)))
    }

    pub fn is_representable(&self, set: &IntervalSet) -> bool {
        self.encode(set).is_ok()
    }

    /// Encodes a state of `n` sets into `n·κ` bits, bit `i·κ + h` being
    /// bit `h` of variable `i`.
    pub fn encode_state(&self, state: &[IntervalSet]) -> Result<BoolVector> {
        let mut out = Vec::with_capacity(state.len() * self.kappa());
        for set in state {
            out.extend(self.encode(set)?.iter());
        }
        Ok(BoolVector::from_bits(out))
    }

    pub fn decode_state(&self, bits: &BoolVector) -> Result<Vec<IntervalSet>> {
        let k = self.kappa();
        if !bits.len().is_multiple_of(k) {
            return Err(Error::DimensionMismatch {
                left: k,
                right: bits.len(),
            });
        }
        (0..bits.len() / k)
            .map(|i| self.decode(&bits.slice(i * k, k)))
            .collect()
    }

    /// The bits of cell `h` across all variables of an encoded state.
    pub fn cell_bits(&self, encoded: &BoolVector, h: usize) -> BoolVector {
        let k = self.kappa();
        BoolVector::from_bits((0..encoded.len() / k).map(|i| encoded.get(i * k + h)))
    }
}

/// `f = 𝓛(F)`: the map evaluated with every set replaced by its κ-bit code
/// and every set operation by its bitwise counterpart.
#[derive(Debug, Clone)]
pub struct EncodedMap {
    sbm: Sbm,
    partition: Partition,
    constant_bits: BTreeMap<String, BoolVector>,
}

/// Builds the encoded map. Every constant the map uses must be a union of
/// cells of `partition`.
pub fn translate_map(sbm: &Sbm, partition: &Partition) -> Result<EncodedMap> {
    if sbm.universe() != partition.universe() {
        return Err(Error::Internal("partition built over a different universe".into()));
    }
    let constant_bits = sbm
        .referenced_constants()
        .into_iter()
        .map(|name| {
            let bits = partition.encode(&sbm.constants()[&name])?;
            Ok((name, bits))
        })
        .collect::<Result<_>>()?;
    Ok(EncodedMap {
        sbm: sbm.clone(),
        partition: partition.clone(),
        constant_bits,
    })
}

impl EncodedMap {
    pub fn sbm(&self) -> &Sbm {
        &self.sbm
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn kappa(&self) -> usize {
        self.partition.kappa()
    }

    /// Variables of the underlying set-valued map.
    pub fn set_arity(&self) -> usize {
        self.sbm.arity()
    }

    /// The n-bit map acting on cell `h`, with each constant replaced by its
    /// bit in that cell.
    pub fn per_cell_map(&self, h: usize) -> ExprMap {
        let constants = self
            .constant_bits
            .iter()
            .map(|(name, bits)| (name.clone(), bits.get(h)))
            .collect();
        ExprMap::with_constants(self.sbm.components().to_vec(), constants)
            .expect("components validated by the set-valued map")
    }

    /// The same map written out bit by bit: component `i·κ + h` is the
    /// expression of `F_i` with `X_j` replaced by bit `j·κ + h` and each
    /// constant by its cell-`h` bit.
    pub fn bit_level_map(&self) -> ExprMap {
        let k = self.kappa();
        let mut components = Vec::with_capacity(self.set_arity() * k);
        for c in self.sbm.components() {
            for h in 0..k {
                let vars: Vec<SetExpr> = (0..self.set_arity()).map(|j| SetExpr::Var(j * k + h)).collect();
                let bit_expr = replace_constants(&c.substitute(&vars), &|name| self.constant_bits[name].get(h));
                components.push(bit_expr);
            }
        }
        ExprMap::new(components).expect("indices are in range")
    }

    /// Decodes, steps the set-valued map, and reports whether encoding the
    /// result agrees with `apply`. Used as a consistency probe.
    pub fn commutes_at(&self, state: &[IntervalSet]) -> Result<bool> {
        let encoded = self.partition.encode_state(state)?;
        let via_bits = self.partition.decode_state(&self.apply(&encoded))?;
        Ok(via_bits == self.sbm.eval(state)?)
    }
}

fn replace_constants(e: &SetExpr, bit: &dyn Fn(&str) -> bool) -> SetExpr {
    use SetExpr::*;
    match e {
        Const(name) => {
            if bit(name) {
                Universe
            } else {
                Empty
            }
        }
        Var(_) | Universe | Empty => e.clone(),
        Union(a, b) => replace_constants(a, bit) | replace_constants(b, bit),
        Intersect(a, b) => replace_constants(a, bit) & replace_constants(b, bit),
        Complement(a) => !replace_constants(a, bit),
        Difference(a, b) => replace_constants(a, bit) - replace_constants(b, bit),
        SymDiff(a, b) => replace_constants(a, bit) ^ replace_constants(b, bit),
    }
}

impl BinaryMap for EncodedMap {
    fn arity(&self) -> usize {
        self.set_arity() * self.kappa()
    }

    fn apply(&self, x: &BoolVector) -> BoolVector {
        let k = self.kappa();
        assert_eq!(x.len(), self.arity(), "encoded state length");
        let alg = BitVectors { len: k };
        let vars: Vec<BoolVector> = (0..self.set_arity()).map(|i| x.slice(i * k, k)).collect();
        let lookup = |name: &str| self.constant_bits.get(name).cloned();
        let mut out = Vec::with_capacity(self.arity());
        for c in self.sbm.components() {
            let v = c
                .eval_in(&alg, &vars, &lookup)
                .expect("constants encoded at construction");
            out.extend(v.iter());
        }
        BoolVector::from_bits(out)
    }

    /// Syntactic incidence of the bit-level expressions.
    fn incidence(&self) -> BoolMatrix {
        self.bit_level_map().incidence()
    }
}

/// Checks that `B(𝓛(F))` is `B(F)` with every 1 blown up to a κ×κ identity
/// block and every 0 to a zero block.
pub fn block_incidence_check(sbm: &Sbm, partition: &Partition) -> Result<bool> {
    let expected = sbm.incidence().kron_identity(partition.kappa())?;
    let f = translate_map(sbm, partition)?;
    Ok(f.incidence() == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{constant, var};

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    fn bits(s: &str) -> BoolVector {
        s.parse().unwrap()
    }

    fn three_sets() -> Vec<IntervalSet> {
        vec![set("[2,5]"), set("[4,7]"), set("[8,11]")]
    }

    fn three_var_map() -> Sbm {
        Sbm::new(
            Universe::non_negative(),
            vec![
                var(0) | (var(1) & var(2)),
                var(0) | !var(1),
                !var(0) & !var(1) & !var(2),
            ],
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn five_cell_partition() {
        let p = build_partition(&three_sets(), &Universe::non_negative(), 16).unwrap();
        let regions: Vec<String> = p.cells().iter().map(|c| c.region.to_string()).collect();
        assert_eq!(
            regions,
            ["[4,5]", "[2,4)", "(5,7]", "[8,11]", "[0,2) | (7,8) | (11,inf)"]
        );
        let sigs: Vec<String> = p.cells().iter().map(|c| c.signature.to_string()).collect();
        assert_eq!(sigs, ["110", "100", "010", "001", "000"]);
        let codes: Vec<String> = three_sets()
            .iter()
            .map(|s| p.encode(s).unwrap().to_string())
            .collect();
        assert_eq!(codes, ["11000", "10100", "00010"]);
    }

    #[test]
    fn decode_examples() {
        let p = build_partition(&three_sets(), &Universe::non_negative(), 16).unwrap();
        assert_eq!(p.decode(&bits("11011")).unwrap(), set("[0,5] | (7,inf)"));
        assert_eq!(
            p.decode(&bits("00001")).unwrap(),
            set("[0,2) | (7,8) | (11,inf)")
        );
        assert!(p.decode(&bits("00000")).unwrap().is_empty());
        assert!(p.decode(&bits("000")).is_err());
        assert!(p.encode(&IntervalSet::empty()).unwrap().is_zero());
        assert_eq!(p.encode(&set("[0,inf)")).unwrap(), bits("11111"));
        assert!(matches!(
            p.encode(&set("[3,4]")),
            Err(Error::NotCellRepresentable(_))
        ));
    }

    #[test]
    fn degenerate_partitions() {
        let u = Universe::new(set("[0,10]")).unwrap();
        let p = build_partition(&[set("[0,10]")], &u, 16).unwrap();
        assert_eq!(p.kappa(), 1);
        assert_eq!(p.cells()[0].region, set("[0,10]"));
        let p = build_partition(&[set("[0,4)"), set("[4,10]")], &u, 16).unwrap();
        assert_eq!(p.kappa(), 2);
        let none = build_partition(&[], &u, 16).unwrap();
        assert_eq!(none.kappa(), 1);
        assert!(build_partition(&[set("[0,11]")], &u, 16).is_err());
        assert!(build_partition(&vec![set("[0,1]"); 3], &u, 2).unwrap_err().is_cap());
    }

    #[test]
    fn encoded_step_matches_set_step() {
        let f = three_var_map();
        let p = Partition::for_system(&f, &three_sets(), 16).unwrap();
        let g = translate_map(&f, &p).unwrap();
        let x0 = p.encode_state(&three_sets()).unwrap();
        let x1 = g.apply(&x0);
        assert_eq!(x1.to_string(), "110001101100001");
        assert_eq!(
            p.decode_state(&x1).unwrap(),
            vec![
                set("[2,5]"),
                set("[0,5] | (7,inf)"),
                set("[0,2) | (7,8) | (11,inf)")
            ]
        );
        assert!(g.commutes_at(&three_sets()).unwrap());
        // the bit-level expressions compute the same thing
        assert_eq!(g.bit_level_map().apply(&x0), x1);
    }

    #[test]
    fn identity_translates_to_identity() {
        let u = Universe::non_negative();
        let id = Sbm::new(u.clone(), vec![var(0), var(1)], BTreeMap::new()).unwrap();
        let p = build_partition(&[set("[1,2]"), set("[2,3]")], &u, 16).unwrap();
        let g = translate_map(&id, &p).unwrap();
        let x = p.encode_state(&[set("[1,2]"), set("[2,3]")]).unwrap();
        assert_eq!(g.apply(&x), x);
        assert_eq!(g.incidence(), BoolMatrix::identity(2 * p.kappa()));
        assert!(block_incidence_check(&id, &p).unwrap());
    }

    #[test]
    fn block_structure() {
        let f = three_var_map();
        let p = Partition::for_system(&f, &three_sets(), 16).unwrap();
        assert!(block_incidence_check(&f, &p).unwrap());
    }

    #[test]
    fn constants_become_cell_bits() {
        let u = Universe::new(set("[0,10]")).unwrap();
        let consts = BTreeMap::from([("A".to_string(), set("[0,5]"))]);
        let f = Sbm::new(u, vec![var(0) & constant("A")], consts).unwrap();
        let p = Partition::for_system(&f, &[set("[3,8]")], 16).unwrap();
        assert_eq!(p.kappa(), 4);
        let g = translate_map(&f, &p).unwrap();
        assert!(g.commutes_at(&[set("[3,8]")]).unwrap());
        // the constant bit turns the dependency off in cells outside A
        let on: Vec<bool> = (0..p.kappa())
            .map(|h| g.per_cell_map(h).apply(&bits("1")).get(0))
            .collect();
        let a_bits = p.encode(&set("[0,5]")).unwrap();
        assert_eq!(on, a_bits.iter().collect::<Vec<_>>());

        let missing = build_partition(&[set("[3,8]")], f.universe(), 16).unwrap();
        assert!(translate_map(&f, &missing).is_err());
    }
}
