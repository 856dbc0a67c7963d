//! Point configurations `A ⊂ Z^n` over a field of given characteristic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::characteristic::Characteristic;
use crate::error::{Error, Result};
use crate::lattice::{self, Lattice};
use crate::matrix::IntegerMatrix;

/// What to do with repeated points on ingestion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DedupPolicy {
    #[default]
    Strict,
    Lenient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationWarning {
    DuplicateDropped { index: usize, duplicate_of: usize },
}

/// A finite ordered list of distinct points of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointConfiguration {
    ambient_rank: usize,
    points: Vec<Vec<BigInt>>,
    characteristic: Characteristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validated {
    pub configuration: PointConfiguration,
    pub warnings: Vec<ValidationWarning>,
}

/// Check raw input and build a configuration.
pub fn validate(points: Vec<Vec<BigInt>>, p: u64, policy: DedupPolicy) -> Result<Validated> {
    let characteristic = Characteristic::new(p)?;
    let ambient_rank = points.first().ok_or(Error::EmptyConfiguration)?.len();
    let mut seen: BTreeMap<&[BigInt], usize> = BTreeMap::new();
    let mut keep = Vec::with_capacity(points.len());
    let mut warnings = Vec::new();
    for (i, pt) in points.iter().enumerate() {
        if pt.len() != ambient_rank {
            return Err(Error::DimensionMismatch { index: i, expected: ambient_rank, found: pt.len() });
        }
        match seen.get(pt.as_slice()) {
            Some(&first) => match policy {
                DedupPolicy::Strict => return Err(Error::DuplicatePoint { first, duplicate: i }),
                DedupPolicy::Lenient => warnings.push(ValidationWarning::DuplicateDropped { index: i, duplicate_of: first }),
            },
            None => {
                seen.insert(pt.as_slice(), i);
                keep.push(i);
            }
        }
    }
    drop(seen);
    let mut points = points;
    let kept: Vec<Vec<BigInt>> = keep.into_iter().map(|i| core::mem::take(&mut points[i])).collect();
    Ok(Validated { configuration: PointConfiguration { ambient_rank, points: kept, characteristic }, warnings })
}

impl PointConfiguration {
    /// Strict construction from points of a common ambient rank.
    pub fn new(ambient_rank: usize, points: Vec<Vec<BigInt>>, characteristic: Characteristic) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let mut seen: BTreeMap<&[BigInt], usize> = BTreeMap::new();
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != ambient_rank {
                return Err(Error::DimensionMismatch { index: i, expected: ambient_rank, found: pt.len() });
            }
            if let Some(&first) = seen.get(pt.as_slice()) {
                return Err(Error::DuplicatePoint { first, duplicate: i });
            }
            seen.insert(pt.as_slice(), i);
        }
        drop(seen);
        Ok(PointConfiguration { ambient_rank, points, characteristic })
    }

    pub fn from_i64(ambient_rank: usize, points: &[&[i64]], characteristic: Characteristic) -> Result<Self> {
        Self::new(ambient_rank, points.iter().map(|p| crate::matrix::point(p)).collect(), characteristic)
    }

    /// Keep the first occurrence of every point.
    pub(crate) fn dedup_from(ambient_rank: usize, points: Vec<Vec<BigInt>>, characteristic: Characteristic) -> Self {
        let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(points.len());
        for pt in points {
            if !out.contains(&pt) {
                out.push(pt);
            }
        }
        PointConfiguration { ambient_rank, points: out, characteristic }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn points(&self) -> &[Vec<BigInt>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn characteristic(&self) -> Characteristic {
        self.characteristic
    }

    pub fn with_characteristic(&self, characteristic: Characteristic) -> Self {
        PointConfiguration { characteristic, ..self.clone() }
    }

    /// Differences `u_i - u_0` as the rows of a matrix.
    pub fn difference_matrix(&self) -> IntegerMatrix {
        difference_matrix(self.ambient_rank, &self.points)
    }

    /// `⟨A - A⟩`
    pub fn difference_lattice(&self) -> Lattice {
        Lattice::generated_by(&self.difference_matrix())
    }

    /// Whether `Aff(A) = Z^n`.
    pub fn spans_ambient_lattice(&self) -> bool {
        self.difference_lattice().is_full()
    }

    pub fn affine_dim_over_k(&self) -> usize {
        affine_dim_over_k(&self.points, self.characteristic)
    }

    pub fn affine_rank_over_z(&self) -> usize {
        affine_rank_over_z(&self.points)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.points.iter().any(|p| p.as_slice() == v)
    }

    /// Same points regardless of order.
    pub fn same_point_set(&self, other: &PointConfiguration) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.len() == other.len()
            && self.points.iter().all(|p| other.contains(p))
    }
}

fn difference_matrix(width: usize, points: &[Vec<BigInt>]) -> IntegerMatrix {
    let Some(base) = points.first() else {
        return IntegerMatrix::zeros(0, width);
    };
    let rows = points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    IntegerMatrix::from_rows(width, rows)
}

/// `dim Aff_k(points)`: rank over `k` of the differences to the first point.
pub fn affine_dim_over_k(points: &[Vec<BigInt>], p: Characteristic) -> usize {
    let width = points.first().map_or(0, Vec::len);
    lattice::rank_over(&difference_matrix(width, points), p)
}

/// `rank Aff(points)` = `rank ⟨A - A⟩`.
pub fn affine_rank_over_z(points: &[Vec<BigInt>]) -> usize {
    let width = points.first().map_or(0, Vec::len);
    difference_matrix(width, points).rational_rank()
}

/// An affine isomorphism `Aff(A) ≅ Z^m` and the image of `A` under it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineNormalization {
    pub normalized: PointConfiguration,
    pub origin_index: usize,
    pub origin: Vec<BigInt>,
    /// Rows form the Hermite basis of `⟨A - A⟩`; a normalized point `y`
    /// corresponds to `origin + y * change_of_basis`.
    pub change_of_basis: IntegerMatrix,
}

impl AffineNormalization {
    pub fn dimension(&self) -> usize {
        self.change_of_basis.rows()
    }

    /// Normalized coordinates of an original point, if it lies in `Aff(A)`.
    pub fn to_normalized(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let shifted: Vec<BigInt> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        Lattice::generated_by(&self.change_of_basis).coordinates(&shifted)
    }

    pub fn to_original(&self, y: &[BigInt]) -> Vec<BigInt> {
        let lin = self.change_of_basis.apply_row(y);
        lin.iter().zip(&self.origin).map(|(a, b)| a + b).collect()
    }
}

/// Translate the first point to 0 and rewrite the configuration in the
/// Hermite basis of `⟨A - A⟩`.
pub fn normalize(config: &PointConfiguration) -> AffineNormalization {
    let lattice = config.difference_lattice();
    let origin = config.points[0].clone();
    let m = lattice.rank();
    let points = config
        .points
        .iter()
        .map(|p| {
            let shifted: Vec<BigInt> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            lattice.coordinates(&shifted).expect("difference lies in the difference lattice")
        })
        .collect();
    AffineNormalization {
        normalized: PointConfiguration { ambient_rank: m, points, characteristic: config.characteristic },
        origin_index: 0,
        origin,
        change_of_basis: lattice.basis().clone(),
    }
}

/// Grouping of a configuration by the fibers of a linear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPartition {
    /// `n x l`, acting on row vectors.
    pub projection: IntegerMatrix,
    pub class_images: Vec<Vec<BigInt>>,
    /// Indices into the configuration, one list per class image.
    pub class_indices: Vec<Vec<usize>>,
    pub classes: Vec<Vec<Vec<BigInt>>>,
}

impl FiberPartition {
    pub fn class_count(&self) -> usize {
        self.class_images.len()
    }
}

/// Whether `projection: Z^n -> Z^l` is onto.
pub fn is_surjective(projection: &IntegerMatrix) -> bool {
    let sd = lattice::smith(projection);
    sd.rank() == projection.cols() && sd.divisors.iter().all(One::is_one)
}

pub fn partition_by(config: &PointConfiguration, projection: &IntegerMatrix) -> Result<FiberPartition> {
    if projection.rows() != config.ambient_rank {
        return Err(Error::DimensionMismatch { index: 0, expected: config.ambient_rank, found: projection.rows() });
    }
    if !is_surjective(projection) {
        return Err(Error::NotSurjective(projection.cols()));
    }
    let mut class_images: Vec<Vec<BigInt>> = Vec::new();
    let mut class_indices: Vec<Vec<usize>> = Vec::new();
    for (i, p) in config.points.iter().enumerate() {
        let img = projection.apply_row(p);
        match class_images.iter().position(|c| *c == img) {
            Some(j) => class_indices[j].push(i),
            None => {
                class_images.push(img);
                class_indices.push(vec![i]);
            }
        }
    }
    let classes = class_indices.iter().map(|ix| ix.iter().map(|&i| config.points[i].clone()).collect()).collect();
    Ok(FiberPartition { projection: projection.clone(), class_images, class_indices, classes })
}

/// `A^0 * ... * A^l ⊂ Z^{n-l} x Z^l`, points ordered part by part.
pub fn cayley_sum(parts: &[PointConfiguration]) -> Result<PointConfiguration> {
    let first = parts.first().ok_or(Error::EmptyConfiguration)?;
    let base_rank = first.ambient_rank;
    let l = parts.len() - 1;
    let mut points = Vec::new();
    for (j, part) in parts.iter().enumerate() {
        if part.ambient_rank != base_rank {
            return Err(Error::DimensionMismatch { index: j, expected: base_rank, found: part.ambient_rank });
        }
        if part.characteristic != first.characteristic {
            return Err(Error::Hypothesis(format!("part {} has characteristic {}, expected {}", j, part.characteristic, first.characteristic)));
        }
        for p in &part.points {
            let mut v = p.clone();
            v.extend((1..=l).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            points.push(v);
        }
    }
    Ok(PointConfiguration { ambient_rank: base_rank + l, points, characteristic: first.characteristic })
}

/// An affine map `x ↦ x * linear + translation` between normalized
/// configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: IntegerMatrix,
    pub translation: Vec<BigInt>,
}

impl AffineMap {
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.linear.apply_row(x).iter().zip(&self.translation).map(|(a, b)| a + b).collect()
    }
}

/// Search for an affine lattice isomorphism `Aff(A) -> Aff(B)` carrying `A`
/// onto `B`. Returns the witness on the normalized configurations.
///
/// Exhaustive over assignments of an affine frame of `A`, so only meant for
/// small configurations.
pub fn affine_isomorphism(a: &PointConfiguration, b: &PointConfiguration) -> Option<AffineMap> {
    let na = normalize(a).normalized;
    let nb = normalize(b).normalized;
    let m = na.ambient_rank;
    if m != nb.ambient_rank || na.len() != nb.len() {
        return None;
    }
    // affinely independent frame of A, greedily in order (contains point 0)
    let mut frame = vec![0usize];
    let mut echelon = crate::matrix::RationalEchelon::new(m);
    for (i, p) in na.points.iter().enumerate().skip(1) {
        if frame.len() == m + 1 {
            break;
        }
        if echelon.insert(p.clone()) {
            frame.push(i);
        }
    }
    debug_assert_eq!(frame.len(), m + 1);
    let frame_rows: Vec<Vec<BigInt>> = frame[1..].iter().map(|&i| na.points[i].clone()).collect();
    let inverse = rational_inverse(&frame_rows)?;
    let target: BTreeMap<&[BigInt], ()> = nb.points.iter().map(|p| (p.as_slice(), ())).collect();

    let mut assignment = Vec::with_capacity(m + 1);
    let mut used = vec![false; nb.len()];
    search_frame(&na, &nb, &frame, &inverse, &target, &mut assignment, &mut used)
}

fn search_frame(
    na: &PointConfiguration,
    nb: &PointConfiguration,
    frame: &[usize],
    inverse: &[Vec<BigRational>],
    target: &BTreeMap<&[BigInt], ()>,
    assignment: &mut Vec<usize>,
    used: &mut [bool],
) -> Option<AffineMap> {
    if assignment.len() == frame.len() {
        return check_assignment(na, nb, inverse, target, assignment);
    }
    for j in 0..nb.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        assignment.push(j);
        let found = search_frame(na, nb, frame, inverse, target, assignment, used);
        assignment.pop();
        used[j] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

fn check_assignment(
    na: &PointConfiguration,
    nb: &PointConfiguration,
    inverse: &[Vec<BigRational>],
    target: &BTreeMap<&[BigInt], ()>,
    assignment: &[usize],
) -> Option<AffineMap> {
    let m = na.ambient_rank;
    let b0 = &nb.points[assignment[0]];
    // frame point 0 of A is the origin, so linear = inverse * (targets - b0)
    let diffs: Vec<Vec<BigInt>> =
        assignment[1..].iter().map(|&j| nb.points[j].iter().zip(b0).map(|(x, y)| x - y).collect()).collect();
    let mut linear = IntegerMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = BigRational::zero();
            for (k, d) in diffs.iter().enumerate() {
                acc += &inverse[i][k] * BigRational::from_integer(d[j].clone());
            }
            if !acc.is_integer() {
                return None;
            }
            linear[(i, j)] = acc.to_integer();
        }
    }
    if !linear.determinant().abs().is_one() {
        return None;
    }
    let map = AffineMap { linear, translation: b0.clone() };
    na.points.iter().all(|p| target.contains_key(map.apply(p).as_slice())).then_some(map)
}

/// Inverse of a square integer matrix over `Q`, by Gauss-Jordan.
pub(crate) fn rational_inverse(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<BigRational>>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, pivot);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
