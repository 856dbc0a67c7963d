//! Seeded random corpora and the sweeps run over them.
//!
//! Every configuration and lattice gets its own ChaCha stream derived from the
//! sweep seed and its position, so results do not depend on scheduling.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use toric_gauss::configuration::{self, PointConfiguration};
use toric_gauss::criteria;
use toric_gauss::gaussmap::{EnumerationOptions, GaussStructure};
use toric_gauss::lattice::{index_and_p_split, saturate};
use toric_gauss::oracle::{self, GaloisField, OracleOutcome, Rationals, FIBER_COUNT_BUDGET, MAX_FIELD_ORDER};
use toric_gauss::{Characteristic, IntegerMatrix, Lattice, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusShape {
    pub max_dim: usize,
    pub max_points: usize,
    /// Coordinates are drawn from `[-bound, bound]`.
    pub bound: i64,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape { max_dim: 3, max_points: 7, bound: 2 }
    }
}

/// Stream ids keep the corpus, oracle samples and lattices independent.
const CORPUS_STREAM: u64 = 1;
const SAMPLE_STREAM: u64 = 2;
const LATTICE_STREAM: u64 = 3;

fn stream(seed: u64, kind: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((kind << 48) ^ index);
    rng
}

/// A full-dimensional set of distinct points.
pub fn random_points<R: Rng>(rng: &mut R, shape: CorpusShape) -> Vec<Vec<BigInt>> {
    let side = (2 * shape.bound + 1) as usize;
    loop {
        let n = rng.gen_range(1..=shape.max_dim);
        let capacity = side.pow(n as u32);
        let size = rng.gen_range(n + 1..=shape.max_points.min(capacity));
        let mut grid: Vec<usize> = (0..capacity).collect();
        grid.shuffle(rng);
        let points: Vec<Vec<BigInt>> = grid[..size]
            .iter()
            .map(|&cell| {
                (0..n).map(|i| BigInt::from((cell / side.pow(i as u32) % side) as i64 - shape.bound)).collect()
            })
            .collect();
        if configuration::affine_rank_over_z(&points) == n {
            return points;
        }
    }
}

/// `count` configurations in characteristic `p`. The point sets depend only
/// on `seed`, so every characteristic sees the same corpus.
pub fn corpus(seed: u64, count: usize, p: Characteristic, shape: CorpusShape) -> Vec<PointConfiguration> {
    (0..count)
        .map(|i| {
            let points = random_points(&mut stream(seed, CORPUS_STREAM, i as u64), shape);
            let n = points[0].len();
            PointConfiguration::new(n, points, p).expect("corpus points are distinct and well formed")
        })
        .collect()
}

/// The largest `q = p^e` not exceeding `bound`, or `None` for `p = 0`.
pub fn largest_field(p: u64, bound: u64) -> Option<(u64, u32)> {
    if p < 2 || p > bound {
        return None;
    }
    let (mut q, mut e) = (p, 1);
    while q * p <= bound {
        q *= p;
        e += 1;
    }
    Some((q, e))
}

pub const ORACLE_FIELD_BOUND: u64 = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerSweep {
    pub characteristic: u64,
    /// 0 for the rationals.
    pub field_order: u64,
    pub configurations: usize,
    pub outcome: OracleOutcome,
}

/// Compare minors of `Γ` with the monomial formula over every configuration.
pub fn plucker_sweep(configs: &[PointConfiguration], samples: usize, seed: u64) -> Result<PluckerSweep> {
    let p = configs.first().map_or(0, |c| c.characteristic().value());
    let field = largest_field(p, ORACLE_FIELD_BOUND).map(|(_, e)| GaloisField::new(p, e)).transpose()?;
    let run = |i: usize, c: &PointConfiguration| -> OracleOutcome {
        let normalized = configuration::normalize(c).normalized;
        let mut rng = stream(seed, SAMPLE_STREAM, (p << 32) ^ i as u64);
        match &field {
            Some(f) => oracle::check_configuration(f, &normalized, samples, &mut rng),
            None => oracle::check_configuration(&Rationals, &normalized, samples, &mut rng),
        }
    };
    let outcomes: Vec<OracleOutcome> = configs.par_iter().enumerate().map(|(i, c)| run(i, c)).collect();
    let mut outcome = OracleOutcome::default();
    for o in &outcomes {
        outcome.absorb(o);
    }
    Ok(PluckerSweep {
        characteristic: p,
        field_order: field.as_ref().map_or(0, |f| f.order() as u64),
        configurations: configs.len(),
        outcome,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCountCase {
    pub lattice: Lattice,
    pub characteristic: u64,
    pub field_order: u64,
    pub sep_deg: BigInt,
    pub counted: u64,
    pub expected: u64,
}

impl FiberCountCase {
    pub fn holds(&self) -> bool {
        self.counted == self.expected
    }
}

pub const MAX_SEP_DEG: u64 = 6;

/// Largest field order whose torus in rank `n` fits the brute-force budget.
fn order_limit(n: usize) -> u64 {
    let mut q = 2u64;
    while q < MAX_FIELD_ORDER as u64 && (q as u128).pow(n as u32) <= FIBER_COUNT_BUDGET as u128 {
        q += 1;
    }
    q
}

/// A random lattice of rank at most 2 in `Z^n`, `n <= 3`, with separable
/// index at most [`MAX_SEP_DEG`] and a small enough splitting field.
pub fn random_lattice_case<R: Rng>(rng: &mut R, p: u64) -> Result<FiberCountCase> {
    let ch = Characteristic::new(p)?;
    loop {
        let n = rng.gen_range(1..=3usize);
        let r = rng.gen_range(0..=n.min(2));
        let rows: Vec<Vec<BigInt>> =
            (0..r).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect()).collect();
        let lat = Lattice::generated_by(&IntegerMatrix::from_rows(n, rows));
        let split = index_and_p_split(&lat, &saturate(&lat), ch)?;
        if split.separable.to_u64().is_none_or(|b| b > MAX_SEP_DEG) {
            continue;
        }
        let Some(e) = oracle::splitting_degree(p, &split.separable, order_limit(n)) else {
            continue;
        };
        let q = p.pow(e);
        let counted = oracle::fiber_count_oracle(&lat, p, e)?;
        let expected = oracle::expected_fiber_count(&split.separable, q, n, lat.rank())
            .expect("small parameters cannot overflow");
        return Ok(FiberCountCase { lattice: lat, characteristic: p, field_order: q, sep_deg: split.separable, counted, expected });
    }
}

/// `count` lattices, cycling through `primes`.
pub fn fiber_count_sweep(seed: u64, count: usize, primes: &[u64]) -> Result<Vec<FiberCountCase>> {
    (0..count)
        .into_par_iter()
        .map(|i| random_lattice_case(&mut stream(seed, LATTICE_STREAM, i as u64), primes[i % primes.len()]))
        .collect()
}

/// Structural claims every analysis must satisfy. Returns one message per
/// violation.
pub fn property_violations(s: &GaussStructure) -> Result<Vec<String>> {
    let inv = &s.invariants;
    let n = s.ambient_rank();
    let p = s.characteristic().value();
    let fibers = s.fiber_config.len();
    let mut out = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            out.push(what);
        }
    };
    check(inv.defect == n - s.lattice.rank(), format!("defect {} != {} - rank <B-B> {}", inv.defect, n, s.lattice.rank()));
    check(inv.rank + fibers <= n + 1, format!("rank {} exceeds n - (#pi(A) - 1) = {} - {}", inv.rank, n, fibers - 1));
    if p > 0 {
        let coprime = (&inv.component_count % BigInt::from(p)) != BigInt::from(0);
        check(coprime, format!("component count {} shares a factor with p = {}", inv.component_count, p));
    }
    if inv.separable {
        check(fibers == inv.defect + 1, format!("separable but #pi(A) = {} != defect + 1 = {}", fibers, inv.defect + 1));
    }
    if p == 2 {
        check(inv.rank != 1, "rank 1 in characteristic 2".into());
        if s.input().len() == n + 2 {
            check(inv.rank % 2 == 0, format!("hypersurface of odd rank {} in characteristic 2", inv.rank));
        }
    }
    if p == 0 {
        check(inv.separable, "inseparable in characteristic 0".into());
        if inv.separable {
            let d = criteria::cayley_decompose(s)?;
            let j = criteria::join_report(&d);
            check(j.codimension == 0, format!("join codimension {} in characteristic 0", j.codimension));
        }
    }
    Ok(out)
}

/// Analyze and check one configuration.
pub fn check_properties(config: &PointConfiguration) -> Result<Vec<String>> {
    let s = crate::parallel::analyze_with_threads(config, EnumerationOptions::default(), Some(1))?;
    property_violations(&s)
}
