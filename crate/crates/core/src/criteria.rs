//! Developability of covering families, Cayley decompositions and joins.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::characteristic::Characteristic;
use crate::configuration::{self, AffineMap, PointConfiguration};
use crate::error::{Error, Result};
use crate::gaussmap::{self, EnumerationOptions, GaussStructure};
use crate::lattice::Lattice;
use crate::matrix::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DevelopabilityReport {
    pub projection: IntegerMatrix,
    pub class_images: Vec<Vec<BigInt>>,
    pub class_dimensions: Vec<usize>,
    /// `Σ dim Aff_k(A_j)`
    pub lhs: usize,
    /// `n - (#π̃(A) - 1)`
    pub rhs: i64,
    pub developable: bool,
    /// Whether `⟨B - B⟩ ⊆ ker π̃`, when a structure was supplied.
    pub cross_check: Option<bool>,
}

/// Whether the family of translates of the subtori `ker π̃` is contracted by
/// the Gauss map, decided from the classes of `A` under `π̃`.
pub fn developable(
    config: &PointConfiguration,
    projection: &IntegerMatrix,
    structure: Option<&GaussStructure>,
) -> Result<DevelopabilityReport> {
    if !config.spans_ambient_lattice() {
        return Err(Error::NotSpanning);
    }
    let partition = configuration::partition_by(config, projection)?;
    let p = config.characteristic();
    let class_dimensions: Vec<usize> = partition.classes.iter().map(|c| configuration::affine_dim_over_k(c, p)).collect();
    let lhs = class_dimensions.iter().sum();
    let rhs = config.ambient_rank() as i64 - (partition.class_count() as i64 - 1);
    let cross_check = match structure {
        Some(s) => {
            if s.ambient_rank() != config.ambient_rank() {
                return Err(Error::DimensionMismatch { index: 0, expected: config.ambient_rank(), found: s.ambient_rank() });
            }
            Some(lattice_in_kernel(&s.lattice, projection))
        }
        None => None,
    };
    Ok(DevelopabilityReport {
        projection: projection.clone(),
        class_images: partition.class_images,
        class_dimensions,
        lhs,
        rhs,
        developable: lhs as i64 == rhs,
        cross_check,
    })
}

fn lattice_in_kernel(lattice: &Lattice, projection: &IntegerMatrix) -> bool {
    lattice.basis().mul(projection).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyDecomposition {
    pub l: usize,
    /// `A^0, ..., A^l` in coordinates of the Hermite basis of `ker π`.
    pub parts: Vec<PointConfiguration>,
    /// Indices into the normalized input, per part.
    pub class_indices: Vec<Vec<usize>>,
    /// Carries the normalized input onto `cayley_sum(parts)`.
    pub identification: AffineMap,
    pub splitting_used: IntegerMatrix,
}

impl CayleyDecomposition {
    pub fn cayley_sum(&self) -> Result<PointConfiguration> {
        configuration::cayley_sum(&self.parts)
    }
}

/// Split `A` along the fibers of `π` as a Cayley sum. Needs a separable
/// Gauss map.
pub fn cayley_decompose(structure: &GaussStructure) -> Result<CayleyDecomposition> {
    if !structure.invariants.separable {
        return Err(Error::NotSeparable);
    }
    let input = structure.input();
    let n = input.ambient_rank();
    let p = input.characteristic();
    let l = structure.invariants.defect;
    let pi = &structure.projection;
    let partition = configuration::partition_by(input, &pi.matrix)?;
    if partition.class_count() != l + 1 {
        return Err(Error::Invariant(format!(
            "separable Gauss map with defect {} but {} fiber points",
            l,
            partition.class_count()
        )));
    }
    // The first class contains the origin of the normalized input, so its
    // image is 0 and the other images form a basis of Z^l.
    debug_assert!(partition.class_images[0].iter().all(Zero::is_zero));
    let w_inverse = integer_inverse(&partition.class_images[1..])
        .ok_or_else(|| Error::Invariant("fiber points are not an affine basis".into()))?;

    let kernel = &pi.kernel;
    let kernel_coords = |v: &[BigInt]| -> Result<Vec<BigInt>> {
        kernel.coordinates(v).ok_or_else(|| Error::Invariant("point not in ker π after splitting".into()))
    };
    let mut linear_rows = Vec::with_capacity(n);
    for i in 0..n {
        let e: Vec<BigInt> = (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
        let image = pi.apply(&e);
        let back = pi.lift(&image);
        let fiber_part: Vec<BigInt> = e.iter().zip(&back).map(|(a, b)| a - b).collect();
        let mut row = kernel_coords(&fiber_part)?;
        row.extend(w_inverse.apply_row(&image));
        linear_rows.push(row);
    }
    let identification = AffineMap { linear: IntegerMatrix::from_rows(n, linear_rows), translation: alloc::vec![BigInt::zero(); n] };

    let mut parts = Vec::with_capacity(l + 1);
    for (image, class) in partition.class_images.iter().zip(&partition.classes) {
        let shift = pi.lift(image);
        let pts = class
            .iter()
            .map(|u| kernel_coords(&u.iter().zip(&shift).map(|(a, b)| a - b).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        parts.push(PointConfiguration::new(n - l, pts, p)?);
    }

    let dims: usize = parts.iter().map(PointConfiguration::affine_dim_over_k).sum();
    if dims != n - l {
        return Err(Error::Invariant(format!("part dimensions sum to {}, expected {}", dims, n - l)));
    }
    Ok(CayleyDecomposition {
        l,
        parts,
        class_indices: partition.class_indices,
        identification,
        splitting_used: pi.splitting.clone(),
    })
}

/// Inverse of a unimodular integer matrix given by rows.
fn integer_inverse(rows: &[Vec<BigInt>]) -> Option<IntegerMatrix> {
    let m = rows.len();
    let inverse = configuration::rational_inverse(rows)?;
    let mut out = IntegerMatrix::zeros(m, m);
    for (i, row) in inverse.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_integer() {
                return None;
            }
            out[(i, j)] = x.to_integer();
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinReport {
    /// `l + Σ rank Aff(A^j)`
    pub join_dim: usize,
    /// Codimension of `X_A` in the join of the `X_{A^j}`.
    pub codimension: usize,
    /// `rank Aff(A^j) - dim Aff_k(A^j)` per part.
    pub per_part_gaps: Vec<usize>,
    pub is_join: bool,
}

pub fn join_report(decomposition: &CayleyDecomposition) -> JoinReport {
    let ranks: Vec<usize> = decomposition.parts.iter().map(PointConfiguration::affine_rank_over_z).collect();
    let per_part_gaps: Vec<usize> =
        decomposition.parts.iter().zip(&ranks).map(|(part, r)| r - part.affine_dim_over_k()).collect();
    let join_dim = decomposition.l + ranks.iter().sum::<usize>();
    let codimension = per_part_gaps.iter().sum();
    debug_assert_eq!(join_dim, decomposition.l + decomposition.parts.first().map_or(0, |p| p.ambient_rank()) + codimension);
    JoinReport { join_dim, codimension, per_part_gaps, is_join: codimension == 0 }
}

/// In characteristic zero `X_A` is the join of the torus-invariant
/// subvarieties `X_{A^j}`.
pub fn join_decomposition_char0(config: &PointConfiguration) -> Result<(GaussStructure, CayleyDecomposition, JoinReport)> {
    if config.characteristic() != Characteristic::ZERO {
        return Err(Error::RequiresCharacteristicZero(config.characteristic().value()));
    }
    let structure = gaussmap::analyze(config, EnumerationOptions::default())?;
    let decomposition = cayley_decompose(&structure)?;
    let report = join_report(&decomposition);
    if !report.is_join {
        return Err(Error::Invariant(format!("join codimension {} in characteristic 0", report.codimension)));
    }
    Ok((structure, decomposition, report))
}
