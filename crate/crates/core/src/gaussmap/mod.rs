//! The Gauss map of a toric variety `X_A`, computed from `A` alone.
//!
//! The image is `X_B`, where `B` collects the sums of `n + 1` points of `A`
//! spanning `k^n` affinely. The map factors through the inclusion
//! `⟨B - B⟩ ⊂ Z^n`, and the fibers are translates of `X_{π(A)}` for the
//! quotient `π` by the saturation of `⟨B - B⟩`.

mod enumerate;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

pub use enumerate::{
    affine_determinant, chunk_count, enumerate_b, enumerate_chunk, EnumerationMode, EnumerationOptions, SpanningSumData,
    Witness, DEFAULT_WITNESS_LIMIT,
};

use crate::characteristic::Characteristic;
use crate::configuration::{self, AffineNormalization, DedupPolicy, PointConfiguration};
use crate::error::{Error, Result};
use crate::lattice::{self, Lattice, QuotientProjection};
use crate::matrix::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussInvariants {
    /// Dimension of a general fiber.
    pub defect: usize,
    pub rank: usize,
    /// `[sat ⟨B - B⟩ : ⟨B - B⟩]`
    pub deg_g2: BigInt,
    pub sep_deg: BigInt,
    pub insep_deg: BigInt,
    pub insep_exponent: u32,
    pub component_count: BigInt,
    pub separable: bool,
    pub birational: bool,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussStructure {
    pub original: PointConfiguration,
    pub normalization: AffineNormalization,
    pub mode: EnumerationMode,
    pub spanning_sums: SpanningSumData,
    /// `⟨B - B⟩`
    pub lattice: Lattice,
    pub saturation: Lattice,
    pub projection: QuotientProjection,
    pub fiber_config: PointConfiguration,
    pub image_config: Option<PointConfiguration>,
    pub invariants: GaussInvariants,
}

impl GaussStructure {
    /// The normalized input.
    pub fn input(&self) -> &PointConfiguration {
        &self.normalization.normalized
    }

    pub fn characteristic(&self) -> Characteristic {
        self.original.characteristic()
    }

    pub fn ambient_rank(&self) -> usize {
        self.input().ambient_rank()
    }
}

/// Validate raw points (strictly) and analyze them.
pub fn analyze_points(points: Vec<Vec<BigInt>>, p: u64, mode: EnumerationMode) -> Result<GaussStructure> {
    let config = configuration::validate(points, p, DedupPolicy::Strict)?.configuration;
    analyze(&config, EnumerationOptions::with_mode(mode))
}

pub fn analyze(config: &PointConfiguration, options: EnumerationOptions) -> Result<GaussStructure> {
    let normalization = configuration::normalize(config);
    let data = enumerate_b(&normalization.normalized, options);
    assemble(config, normalization, options.mode, data)
}

/// Build the structure from enumeration data computed elsewhere (for example
/// by a parallel driver over [`enumerate_chunk`]).
pub fn assemble(
    original: &PointConfiguration,
    normalization: AffineNormalization,
    mode: EnumerationMode,
    data: SpanningSumData,
) -> Result<GaussStructure> {
    let input = &normalization.normalized;
    let n = input.ambient_rank();
    let p = input.characteristic();

    let differences = match data.sums.split_first() {
        Some((base, rest)) => IntegerMatrix::from_rows(
            n,
            rest.iter().map(|s| s.iter().zip(base).map(|(a, b)| a - b).collect()).collect(),
        ),
        None => IntegerMatrix::zeros(0, n),
    };
    let lattice = Lattice::generated_by(&differences);
    let saturation = lattice::saturate(&lattice);
    let split = lattice::index_and_p_split(&lattice, &saturation, p)?;
    let rank = lattice::rank_over(&differences, p);
    let defect = n - lattice.rank();
    let separable = rank == lattice.rank();
    let invariants = GaussInvariants {
        defect,
        rank,
        birational: split.index.is_one() && defect == 0 && separable,
        component_count: split.separable.clone(),
        deg_g2: split.index,
        sep_deg: split.separable,
        insep_deg: split.inseparable,
        insep_exponent: split.exponent,
        separable,
        degenerate: defect > 0,
    };

    let projection = lattice::quotient_projection(&saturation)?;
    let fiber_config = PointConfiguration::dedup_from(
        projection.target_rank(),
        input.points().iter().map(|u| projection.apply(u)).collect(),
        p,
    );
    let image_config = if data.partial || data.sums.is_empty() {
        None
    } else {
        let b = PointConfiguration::new(n, data.sums.clone(), p)?;
        Some(configuration::normalize(&b).normalized)
    };

    Ok(GaussStructure {
        original: original.clone(),
        normalization,
        mode,
        spanning_sums: data,
        lattice,
        saturation,
        projection,
        fiber_config,
        image_config,
        invariants,
    })
}

/// `π(A)`, whose toric variety is every component of a general fiber.
pub fn fiber_configuration(structure: &GaussStructure) -> PointConfiguration {
    structure.fiber_config.clone()
}

/// `B`, normalized; its toric variety is the closure of the image.
pub fn image_configuration(structure: &GaussStructure) -> Result<PointConfiguration> {
    structure.image_config.clone().ok_or(Error::PartialEnumeration)
}

/// Every spanning tuple with its coefficient in `k` and its sum: the
/// exponent and coefficient table of the Plücker coordinates of the tangent
/// space. `config` should be normalized.
pub fn plucker_support(config: &PointConfiguration) -> Vec<Witness> {
    let options = EnumerationOptions { mode: EnumerationMode::Full, witness_limit: usize::MAX };
    enumerate_b(config, options).witnesses
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::point;
    use alloc::vec;

    fn config(n: usize, pts: &[&[i64]], p: u64) -> PointConfiguration {
        PointConfiguration::from_i64(n, pts, Characteristic::new(p).unwrap()).unwrap()
    }

    fn intro(p: u64) -> PointConfiguration {
        config(2, &[&[0, 0], &[0, 1], &[1, -1], &[-1, -1]], p)
    }

    fn full(c: &PointConfiguration) -> GaussStructure {
        analyze(c, EnumerationOptions::default()).unwrap()
    }

    fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        v.sort();
        v
    }

    #[test]
    fn spanning_sums_of_intro_example() {
        for p in [0, 3, 5, 7] {
            let b = enumerate_b(&intro(p), EnumerationOptions::default());
            assert_eq!(b.sums, sorted(vec![point(&[0, -1]), point(&[0, -2]), point(&[-1, 0]), point(&[1, 0])]));
            assert_eq!(b.witness_count, 4);
        }
        let b = enumerate_b(&intro(2), EnumerationOptions::default());
        assert_eq!(b.sums, vec![point(&[-1, 0]), point(&[1, 0])]);
        assert_eq!(b.witness_count, 2);
    }

    #[test]
    fn simplex_has_one_sum() {
        for p in [0, 2, 3] {
            let c = config(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], p);
            let b = enumerate_b(&c, EnumerationOptions::default());
            assert_eq!(b.sums, vec![point(&[1, 1, 1])]);
            assert_eq!(b.witnesses.len(), 1);
            assert_eq!(b.witnesses[0].indices, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn intro_example_in_characteristic_two() {
        let s = full(&intro(2));
        assert_eq!(s.lattice.basis(), &IntegerMatrix::from_i64_rows(2, &[&[2, 0]]));
        assert_eq!(s.saturation.basis(), &IntegerMatrix::from_i64_rows(2, &[&[1, 0]]));
        let inv = &s.invariants;
        assert_eq!((inv.defect, inv.rank), (1, 0));
        assert_eq!(inv.deg_g2, BigInt::from(2));
        assert_eq!(inv.insep_deg, BigInt::from(2));
        assert_eq!(inv.sep_deg, BigInt::from(1));
        assert!(!inv.separable && inv.degenerate && !inv.birational);
        // fiber {0, 1, -1} up to the sign of the quotient coordinate
        let fiber: Vec<Vec<BigInt>> = s.fiber_config.points().to_vec();
        assert!(fiber == vec![point(&[0]), point(&[1]), point(&[-1])] || fiber == vec![point(&[0]), point(&[-1]), point(&[1])]);
        assert_eq!(image_configuration(&s).unwrap().len(), 2);
    }

    #[test]
    fn intro_example_is_birational_otherwise() {
        for p in [0, 3, 5] {
            let inv = full(&intro(p)).invariants;
            assert!(inv.birational, "p = {}", p);
            assert_eq!(inv.rank, 2);
        }
    }

    #[test]
    fn purely_inseparable_families() {
        for (c, m, p) in [(3i64, 1u32, 2u64), (1, 2, 3), (5, 1, 3)] {
            let d = c * (p as i64).pow(m);
            let s = full(&config(1, &[&[0], &[1], &[d], &[d + 1]], p));
            let inv = &s.invariants;
            assert_eq!(inv.deg_g2, BigInt::from(d));
            assert_eq!(inv.insep_deg, BigInt::from((p as i64).pow(m)));
            assert_eq!(inv.sep_deg, BigInt::from(c));
            assert_eq!((inv.defect, inv.rank), (0, 0));
            assert_eq!(s.lattice.basis(), &IntegerMatrix::from_i64_rows(1, &[&[d]]));
        }
    }

    #[test]
    fn line_fiber_of_cayley_example() {
        let c = config(2, &[&[0, 0], &[1, 0], &[-1, 0], &[0, 1], &[3, 1]], 3);
        let s = full(&c);
        assert_eq!(s.invariants.defect, 1);
        assert!(s.invariants.separable);
        assert_eq!(s.fiber_config.len(), 2);
        assert_eq!(s.fiber_config.points()[0], point(&[0]));
    }

    #[test]
    fn nondegenerate_fiber_is_a_point() {
        let s = full(&intro(3));
        assert_eq!(s.fiber_config.ambient_rank(), 0);
        assert_eq!(s.fiber_config.len(), 1);
    }

    #[test]
    fn simplex_image_is_a_point() {
        let s = full(&config(2, &[&[0, 0], &[1, 0], &[0, 1]], 5));
        assert_eq!(image_configuration(&s).unwrap().len(), 1);
        assert_eq!(s.invariants.defect, 2);
        assert!(s.invariants.separable && !s.invariants.birational);
    }

    #[test]
    fn fast_mode_agrees_and_flags_partial_image() {
        let c = config(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[2, 1], &[1, 2]], 0);
        let a = full(&c);
        let b = analyze(&c, EnumerationOptions::with_mode(EnumerationMode::InvariantsOnly)).unwrap();
        assert_eq!(a.invariants, b.invariants);
        assert!(b.spanning_sums.partial);
        assert_eq!(image_configuration(&b), Err(Error::PartialEnumeration));
    }

    #[test]
    fn plucker_support_excludes_even_determinants_in_characteristic_two() {
        let all = plucker_support(&intro(0));
        assert_eq!(all.len(), 4);
        let c2 = intro(2);
        let two = plucker_support(&c2);
        assert_eq!(two.len(), 2);
        for w in &two {
            let rows: Vec<&[BigInt]> = w.indices.iter().map(|&i| c2.points()[i].as_slice()).collect();
            let mu = affine_determinant(&rows);
            assert!(!(mu.clone() % 2i32 == BigInt::from(0)));
            assert_eq!(w.mu, ((mu % 2i32) + 2i32) % 2i32);
        }
    }

    #[test]
    fn chunks_merge_to_whole() {
        let c = config(2, &[&[0, 0], &[2, 1], &[1, 2], &[-1, 1], &[1, -1], &[0, 2]], 3);
        let opts = EnumerationOptions { witness_limit: 7, ..Default::default() };
        let whole = enumerate_b(&c, opts);
        assert!(whole.witnesses_truncated);
        assert_eq!(whole.witnesses.len(), 7);
        let unlimited = enumerate_b(&c, EnumerationOptions::default());
        assert_eq!(unlimited.witnesses[..7], whole.witnesses[..]);
        assert_eq!(unlimited.sums, whole.sums);
    }

    #[test]
    fn single_point() {
        let s = full(&config(2, &[&[4, 4]], 2));
        assert_eq!(s.ambient_rank(), 0);
        assert_eq!(s.invariants.defect, 0);
        assert!(s.invariants.birational);
    }
}
