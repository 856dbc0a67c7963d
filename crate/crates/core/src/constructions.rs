//! Configurations whose Gauss maps have prescribed fibers, images, ranks and
//! component counts, plus two families with birational Gauss maps.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::characteristic::Characteristic;
use crate::configuration::{self, PointConfiguration};
use crate::error::{Error, Result};
use crate::gaussmap::{self, EnumerationOptions, GaussStructure};
use crate::lattice::{self, Lattice};
use crate::matrix::IntegerMatrix;

/// Which recipe produced a configuration, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    FiberAndImage { fiber: PointConfiguration, image: PointConfiguration, components: BigInt },
    FiberAndRank { fiber: PointConfiguration, rank: usize, components: BigInt, n: usize, big_n: usize },
    BirationalHypersurface { exponents: Vec<BigInt> },
    BirationalCodim2 { n: usize },
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::FiberAndImage { .. } => "fiber-image",
            Provenance::FiberAndRank { .. } => "fiber-rank",
            Provenance::BirationalHypersurface { .. } => "hypersurface",
            Provenance::BirationalCodim2 { .. } => "codim2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub configuration: PointConfiguration,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub claim: &'static str,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub structure: GaussStructure,
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn check<T: PartialEq + core::fmt::Display>(claim: &'static str, expected: T, actual: T) -> Check {
    Check { claim, holds: expected == actual, expected: format!("{}", expected), actual: format!("{}", actual) }
}

fn isomorphic(claim: &'static str, found: Option<&PointConfiguration>, wanted: &PointConfiguration) -> Check {
    let holds = found.is_some_and(|f| configuration::affine_isomorphism(f, wanted).is_some());
    Check {
        claim,
        expected: format!("{} points", wanted.len()),
        actual: found.map_or_else(|| String::from("unavailable"), |f| format!("{} points", f.len())),
        holds,
    }
}

impl Construction {
    /// Analyze the configuration and compare with what the recipe promises.
    pub fn verify(&self) -> Result<Verification> {
        let structure = gaussmap::analyze(&self.configuration, EnumerationOptions::default())?;
        let inv = &structure.invariants;
        let size = self.configuration.len();
        let checks = match &self.provenance {
            Provenance::FiberAndImage { fiber, image, components } => vec![
                isomorphic("fiber configuration", Some(&structure.fiber_config), fiber),
                isomorphic("image configuration", structure.image_config.as_ref(), image),
                check("component count", components.clone(), inv.component_count.clone()),
                check("rank", 0, inv.rank),
                check("size", self.configuration.ambient_rank() + image.len(), size),
            ],
            Provenance::FiberAndRank { fiber, rank, components, big_n, .. } => vec![
                isomorphic("fiber configuration", Some(&structure.fiber_config), fiber),
                check("rank", *rank, inv.rank),
                check("component count", components.clone(), inv.component_count.clone()),
                check("size", big_n + 1, size),
            ],
            Provenance::BirationalHypersurface { .. } | Provenance::BirationalCodim2 { .. } => {
                vec![check("birational", true, inv.birational)]
            }
        };
        Ok(Verification { structure, checks })
    }
}

fn positive_characteristic(p: Characteristic) -> Result<BigInt> {
    if p.is_zero() {
        return Err(Error::RequiresPositiveCharacteristic);
    }
    Ok(BigInt::from(p.value()))
}

fn coprime_components(c: &BigInt, pb: &BigInt) -> Result<()> {
    if !c.is_positive() {
        return Err(Error::Hypothesis(format!("component count c = {} must be positive", c)));
    }
    if !c.gcd(pb).is_one() {
        return Err(Error::Hypothesis(format!("gcd(c, p) = gcd({}, {}) must be 1", c, pb)));
    }
    Ok(())
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

fn scaled(v: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    v.iter().map(|x| x * s).collect()
}

/// `π: Z^n -> Z^{n'}` sending `e_i` to the `i`-th nonzero point of the
/// normalized fiber and the remaining basis vectors to 0, with its kernel.
fn fiber_projection(fiber: &PointConfiguration, n: usize) -> (IntegerMatrix, Lattice) {
    let n_prime = fiber.ambient_rank();
    let mut pi = IntegerMatrix::zeros(n, n_prime);
    for (i, u) in fiber.points().iter().enumerate().skip(1) {
        pi.row_mut(i - 1).clone_from_slice(u);
    }
    let kernel = Lattice::generated_by(&lattice::right_kernel(&pi.transpose()));
    (pi, kernel)
}

/// `A = {e_1, ..., e_n} ∪ p·A''`, where `A''` sits in `ker π` with cokernel
/// of order `c`. The Gauss map has general fiber components `X_{A'}`, `c` of
/// them, image `X_{A''}` and rank 0.
pub fn with_fiber_and_image(
    fiber: &PointConfiguration,
    image: &PointConfiguration,
    c: &BigInt,
    p: Characteristic,
) -> Result<Construction> {
    let pb = positive_characteristic(p)?;
    coprime_components(c, &pb)?;
    let a1 = configuration::normalize(&fiber.with_characteristic(p)).normalized;
    let a2 = configuration::normalize(&image.with_characteristic(p)).normalized;
    let n = a1.ambient_rank() + a2.ambient_rank();
    if a2.ambient_rank() < 1 {
        return Err(Error::Hypothesis("rk(M'') >= 1 fails: image configuration is a single point".into()));
    }
    if n < a1.len() - 1 {
        return Err(Error::Hypothesis(format!("n = rk(M') + rk(M'') = {} must be at least #A' - 1 = {}", n, a1.len() - 1)));
    }
    let (_, kernel) = fiber_projection(&a1, n);
    let embedding = lattice::embed_with_cokernel(&kernel, c)?;
    let mut points: Vec<Vec<BigInt>> = (0..n).map(|i| unit(n, i)).collect();
    points.extend(a2.points().iter().map(|f| scaled(&embedding.apply_row(f), &pb)));
    Ok(Construction {
        configuration: PointConfiguration::new(n, points, p)?,
        provenance: Provenance::FiberAndImage { fiber: a1, image: a2, components: c.clone() },
    })
}

/// The smallest admissible `N` for [`with_fiber_rank_components`].
pub fn minimal_size(n: usize, fiber_rank: usize, r: usize, p: Characteristic) -> usize {
    let base = 2 * n + 1 - fiber_rank - r;
    if p.value() == 2 && r % 2 == 1 {
        base + 1
    } else {
        base
    }
}

/// A configuration of `N + 1` points in `Z^n` whose Gauss map has general
/// fiber components `X_{A'}`, `c` of them, and rank `r`.
pub fn with_fiber_rank_components(
    fiber: &PointConfiguration,
    r: usize,
    c: &BigInt,
    p: Characteristic,
    n: usize,
    big_n: usize,
) -> Result<Construction> {
    let pb = positive_characteristic(p)?;
    coprime_components(c, &pb)?;
    if r == 0 {
        return Err(Error::Hypothesis("r must be positive".into()));
    }
    if p.value() == 2 && r == 1 {
        return Err(Error::Hypothesis("(p, r) = (2, 1) is excluded".into()));
    }
    let a1 = configuration::normalize(&fiber.with_characteristic(p)).normalized;
    let n_prime = a1.ambient_rank();
    let big_n_prime = a1.len() - 1;
    if n < big_n_prime + r {
        return Err(Error::Hypothesis(format!("n = {} must be at least #A' - 1 + r = {}", n, big_n_prime + r)));
    }
    if n < n_prime + r + 1 {
        return Err(Error::Hypothesis(format!("n = {} must be at least rk(M') + r + 1 = {}", n, n_prime + r + 1)));
    }
    let lower = minimal_size(n, n_prime, r, p);
    if big_n < lower {
        return Err(Error::Hypothesis(format!("N = {} must be at least {}", big_n, lower)));
    }

    let (_, kernel) = fiber_projection(&a1, n);
    let block: Vec<usize> = (big_n_prime..big_n_prime + r).collect();
    let partial = IntegerMatrix::from_rows(n, block.iter().map(|&i| unit(n, i)).collect());
    let f = lattice::complete_to_kernel_basis(&kernel, &partial)?;
    debug_assert_eq!(f.rows(), n - n_prime - r);

    let mut points: Vec<Vec<BigInt>> = (0..n).map(|i| unit(n, i)).collect();
    points.push(vec![BigInt::zero(); n]);
    for (j, fj) in f.row_iter().enumerate() {
        let s = if j == 0 { c * &pb } else { pb.clone() };
        points.push(scaled(fj, &s));
    }

    let block_sum = |from: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        for &i in &block[from..] {
            v[i] = BigInt::one();
        }
        v
    };
    let pv = p.value();
    let r_mod = (r as u64) % pv;
    if r_mod != 1 {
        points.push(block_sum(0));
    } else if pv != 2 {
        points.push(block_sum(0).iter().map(|x| -x).collect());
    } else {
        let mut first = vec![BigInt::zero(); n];
        first[block[0]] = BigInt::one();
        first[block[1]] = BigInt::one();
        points.push(first);
        points.push(block_sum(1));
    }

    let g = unit(n, block[0]);
    let mut t = 2i64;
    while points.len() < big_n + 1 {
        let candidate = scaled(&g, &BigInt::from(t));
        if !points.contains(&candidate) {
            points.push(candidate);
        }
        t += 1;
    }
    if points.len() != big_n + 1 {
        return Err(Error::Invariant(format!("built {} points, expected {}", points.len(), big_n + 1)));
    }

    Ok(Construction {
        configuration: PointConfiguration::new(n, points, p)?,
        provenance: Provenance::FiberAndRank { fiber: a1, rank: r, components: c.clone(), n, big_n },
    })
}

/// `A = {0, e_1, ..., e_n, Σ a_i e_i}`, a toric hypersurface whose Gauss map
/// is birational when no `a_i` vanishes in `k` and `Σ a_i ≠ 1` in `k`.
pub fn birational_hypersurface(a: &[BigInt], p: Characteristic) -> Result<Construction> {
    let n = a.len();
    if n == 0 {
        return Err(Error::Hypothesis("n must be positive".into()));
    }
    let in_k = |x: &BigInt| if p.is_zero() { x.clone() } else { x.mod_floor(&BigInt::from(p.value())) };
    if let Some(i) = a.iter().position(|x| in_k(x).is_zero()) {
        return Err(Error::Hypothesis(format!("a_{} = {} vanishes in characteristic {}", i + 1, a[i], p)));
    }
    let total: BigInt = a.iter().sum();
    if in_k(&(&total - 1)).is_zero() {
        return Err(Error::Hypothesis(format!("a_1 + ... + a_n = {} is 1 in characteristic {}", total, p)));
    }
    let mut points = vec![vec![BigInt::zero(); n]];
    points.extend((0..n).map(|i| unit(n, i)));
    points.push(a.to_vec());
    Ok(Construction {
        configuration: PointConfiguration::new(n, points, p)?,
        provenance: Provenance::BirationalHypersurface { exponents: a.to_vec() },
    })
}

/// `A = {0, e_1, ..., e_n, e_1 + e_2, e_2 + ... + e_n}`, birational Gauss map
/// in every characteristic. For `n = 2` the last two points coincide with
/// `e_2` and the set is the unit square.
pub fn birational_codim2(n: usize, p: Characteristic) -> Result<Construction> {
    if n < 2 {
        return Err(Error::Hypothesis(format!("n = {} must be at least 2", n)));
    }
    let mut points = vec![vec![BigInt::zero(); n]];
    points.extend((0..n).map(|i| unit(n, i)));
    let mut e12 = vec![BigInt::zero(); n];
    e12[0] = BigInt::one();
    e12[1] = BigInt::one();
    points.push(e12);
    let tail: Vec<BigInt> = (0..n).map(|i| if i == 0 { BigInt::zero() } else { BigInt::one() }).collect();
    points.push(tail);
    Ok(Construction {
        configuration: PointConfiguration::dedup_from(n, points, p),
        provenance: Provenance::BirationalCodim2 { n },
    })
}
