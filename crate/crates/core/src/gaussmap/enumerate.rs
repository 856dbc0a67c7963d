use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::characteristic::Characteristic;
use crate::configuration::PointConfiguration;
use crate::lattice::{Lattice, ModularEchelon};
use crate::matrix::{IntegerMatrix, RationalEchelon};

pub const DEFAULT_WITNESS_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EnumerationMode {
    /// Visit every spanning subset.
    #[default]
    Full,
    /// Stop a chunk once the sums found so far generate the whole lattice.
    InvariantsOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub mode: EnumerationMode,
    pub witness_limit: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { mode: EnumerationMode::Full, witness_limit: DEFAULT_WITNESS_LIMIT }
    }
}

impl EnumerationOptions {
    pub fn with_mode(mode: EnumerationMode) -> Self {
        EnumerationOptions { mode, ..Self::default() }
    }
}

/// A spanning index tuple `i_0 < ... < i_n`, its affine determinant reduced
/// into `k` (exact integer for `p = 0`, residue in `[0, p)` otherwise) and the
/// sum of its points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub mu: BigInt,
    pub sum: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningSumData {
    /// The distinct sums, sorted.
    pub sums: Vec<Vec<BigInt>>,
    pub witness_count: u64,
    /// The lexicographically first `witness_limit` witnesses.
    pub witnesses: Vec<Witness>,
    pub witnesses_truncated: bool,
    /// Set when an early exit may have skipped sums.
    pub partial: bool,
}

impl SpanningSumData {
    pub fn empty() -> Self {
        SpanningSumData { sums: Vec::new(), witness_count: 0, witnesses: Vec::new(), witnesses_truncated: false, partial: false }
    }

    /// Combine with the data of a later chunk.
    pub fn merge(self, later: SpanningSumData, witness_limit: usize) -> SpanningSumData {
        let sums: BTreeSet<Vec<BigInt>> = self.sums.into_iter().chain(later.sums).collect();
        let mut witnesses = self.witnesses;
        witnesses.extend(later.witnesses);
        let witness_count = self.witness_count + later.witness_count;
        let truncated = self.witnesses_truncated || later.witnesses_truncated || witnesses.len() > witness_limit;
        witnesses.truncate(witness_limit);
        SpanningSumData {
            sums: sums.into_iter().collect(),
            witness_count,
            witnesses,
            witnesses_truncated: truncated,
            partial: self.partial || later.partial,
        }
    }
}

/// Affine determinant `det [1 u_{i_0}; ...; 1 u_{i_n}]`.
pub fn affine_determinant(points: &[&[BigInt]]) -> BigInt {
    let n = points.len();
    let rows = points
        .iter()
        .map(|p| {
            let mut row = Vec::with_capacity(n);
            row.push(BigInt::from(1));
            row.extend(p.iter().cloned());
            row
        })
        .collect();
    IntegerMatrix::from_rows(n, rows).determinant()
}

pub(crate) fn reduce_into_field(x: BigInt, p: Characteristic) -> BigInt {
    if p.is_zero() {
        x
    } else {
        x.mod_floor(&BigInt::from(p.value()))
    }
}

#[derive(Clone)]
enum Echelon {
    Rational(RationalEchelon),
    Modular(ModularEchelon),
}

impl Echelon {
    fn new(width: usize, p: Characteristic) -> Self {
        if p.is_zero() {
            Echelon::Rational(RationalEchelon::new(width))
        } else {
            Echelon::Modular(ModularEchelon::new(width, p.value()))
        }
    }

    fn insert(&mut self, v: Vec<BigInt>) -> bool {
        match self {
            Echelon::Rational(e) => e.insert(v),
            Echelon::Modular(e) => e.insert_integers(&v),
        }
    }
}

struct ChunkState<'a> {
    points: &'a [Vec<BigInt>],
    n: usize,
    p: Characteristic,
    options: EnumerationOptions,
    sums: BTreeSet<Vec<BigInt>>,
    witness_count: u64,
    witnesses: Vec<Witness>,
    truncated: bool,
    /// `⟨B - B⟩` of the chunk so far, only tracked for early exit.
    base: Option<Vec<BigInt>>,
    lattice: Lattice,
    done: bool,
}

impl ChunkState<'_> {
    fn record(&mut self, tuple: &[usize]) {
        let mut sum = alloc::vec![BigInt::zero(); self.n];
        for &i in tuple {
            for (s, x) in sum.iter_mut().zip(&self.points[i]) {
                *s += x;
            }
        }
        self.witness_count += 1;
        if self.witnesses.len() < self.options.witness_limit {
            let rows: Vec<&[BigInt]> = tuple.iter().map(|&i| self.points[i].as_slice()).collect();
            let mu = reduce_into_field(affine_determinant(&rows), self.p);
            debug_assert!(!mu.is_zero());
            self.witnesses.push(Witness { indices: tuple.to_vec(), mu, sum: sum.clone() });
        } else {
            self.truncated = true;
        }
        if self.options.mode == EnumerationMode::InvariantsOnly && !self.sums.contains(&sum) {
            match &self.base {
                None => self.base = Some(sum.clone()),
                Some(base) => {
                    let diff: Vec<BigInt> = sum.iter().zip(base).map(|(a, b)| a - b).collect();
                    if !self.lattice.contains(&diff) {
                        let gens = self.lattice.basis().stack(&IntegerMatrix::from_rows(self.n, alloc::vec![diff]));
                        self.lattice = Lattice::generated_by(&gens);
                        self.done = self.lattice.is_full();
                    }
                }
            }
        }
        if self.n == 0 && self.options.mode == EnumerationMode::InvariantsOnly {
            self.done = true;
        }
        self.sums.insert(sum);
    }

    fn search(&mut self, tuple: &mut Vec<usize>, echelon: &Echelon) {
        if self.done {
            return;
        }
        if tuple.len() == self.n + 1 {
            self.record(tuple);
            return;
        }
        let need = self.n + 1 - tuple.len();
        let start = tuple.last().map_or(0, |&i| i + 1);
        let origin = &self.points[tuple[0]];
        for j in start..=self.points.len().saturating_sub(need) {
            let diff: Vec<BigInt> = self.points[j].iter().zip(origin).map(|(a, b)| a - b).collect();
            let mut next = echelon.clone();
            if !next.insert(diff) {
                continue;
            }
            tuple.push(j);
            self.search(tuple, &next);
            tuple.pop();
            if self.done {
                return;
            }
        }
    }
}

/// Spanning subsets whose smallest index is `first`.
///
/// `config` should be normalized. Chunks for `first = 0, 1, ...` merged in
/// order give the same result as [`enumerate_b`].
pub fn enumerate_chunk(config: &PointConfiguration, first: usize, options: EnumerationOptions) -> SpanningSumData {
    let n = config.ambient_rank();
    let points = config.points();
    if first + n >= points.len() {
        return SpanningSumData::empty();
    }
    let mut state = ChunkState {
        points,
        n,
        p: config.characteristic(),
        options,
        sums: BTreeSet::new(),
        witness_count: 0,
        witnesses: Vec::new(),
        truncated: false,
        base: None,
        lattice: Lattice::zero(n),
        done: false,
    };
    let mut tuple = alloc::vec![first];
    state.search(&mut tuple, &Echelon::new(n, config.characteristic()));
    SpanningSumData {
        sums: state.sums.into_iter().collect(),
        witness_count: state.witness_count,
        witnesses: state.witnesses,
        witnesses_truncated: state.truncated,
        partial: state.done,
    }
}

/// Number of chunks for [`enumerate_chunk`].
pub fn chunk_count(config: &PointConfiguration) -> usize {
    config.len().saturating_sub(config.ambient_rank())
}

/// The set `B` of sums of `n + 1` points affinely spanning `k^n`.
pub fn enumerate_b(config: &PointConfiguration, options: EnumerationOptions) -> SpanningSumData {
    (0..chunk_count(config))
        .map(|i| enumerate_chunk(config, i, options))
        .fold(SpanningSumData::empty(), |acc, d| acc.merge(d, options.witness_limit))
}
