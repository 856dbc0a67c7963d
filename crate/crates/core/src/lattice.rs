//! Sublattices of `Z^n`: Hermite bases, Smith decompositions, saturation,
//! indices, quotient maps and basis completions.
//!
//! Every lattice is stored by its Hermite normal form: an echelon basis with
//! strictly increasing pivot columns, positive pivots, and entries above each
//! pivot reduced into `[0, pivot)`. The form is unique, so equality of
//! lattices is equality of the stored matrices.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::characteristic::Characteristic;
use crate::error::{Error, Result};
use crate::matrix::{abs_min_position, IntegerMatrix};

/// A subgroup of `Z^n` in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_rank: usize,
    basis: IntegerMatrix,
}

impl Lattice {
    pub fn zero(ambient_rank: usize) -> Self {
        Lattice { ambient_rank, basis: IntegerMatrix::zeros(0, ambient_rank) }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Lattice { ambient_rank, basis: IntegerMatrix::identity(ambient_rank) }
    }

    /// The lattice generated by the rows of `generators`.
    pub fn generated_by(generators: &IntegerMatrix) -> Self {
        hermite_basis(generators)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.basis == IntegerMatrix::identity(self.ambient_rank)
    }

    fn pivots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rank()).map(move |i| {
            let c = self.basis.row(i).iter().position(|x| !x.is_zero()).expect("zero row in Hermite basis");
            (i, c)
        })
    }

    /// Coefficients of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank, "vector has the wrong ambient rank");
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (i, c) in self.pivots() {
            let (q, r) = rest[c].div_rem(&self.basis[(i, c)]);
            if !r.is_zero() {
                return None;
            }
            for (x, b) in rest.iter_mut().zip(self.basis.row(i)) {
                *x -= &q * b;
            }
            coeffs.push(q);
        }
        if rest.iter().all(Zero::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.ambient_rank == self.ambient_rank && other.basis.row_iter().all(|r| self.contains(r))
    }

    /// Reduce `v` modulo the lattice into the canonical fundamental domain
    /// of the Hermite basis.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (i, c) in self.pivots() {
            let q = out[c].div_floor(&self.basis[(i, c)]);
            if !q.is_zero() {
                for (x, b) in out.iter_mut().zip(self.basis.row(i)) {
                    *x -= &q * b;
                }
            }
        }
        out
    }

    pub fn is_saturated(&self) -> bool {
        saturate(self) == *self
    }

    /// Express every basis row of `sub` in the basis of `self`.
    pub fn coordinate_matrix(&self, sub: &IntegerMatrix) -> Option<IntegerMatrix> {
        let rows: Option<Vec<_>> = sub.row_iter().map(|r| self.coordinates(r)).collect();
        rows.map(|rows| IntegerMatrix::from_rows(self.rank(), rows))
    }
}

/// Hermite form of a generator matrix together with the unimodular row
/// transform producing it: `transform * generators = form`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub form: IntegerMatrix,
    pub transform: IntegerMatrix,
    pub rank: usize,
}

pub fn hermite_with_transform(generators: &IntegerMatrix) -> HermiteForm {
    let (m, n) = (generators.rows(), generators.cols());
    let mut a = generators.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        for r in row + 1..m {
            if a[(r, col)].is_zero() {
                continue;
            }
            eliminate_rows(&mut a, &mut u, row, r, col);
        }
        if a[(row, col)].is_zero() {
            continue;
        }
        if a[(row, col)].is_negative() {
            a.negate_row(row);
            u.negate_row(row);
        }
        for r in 0..row {
            let q = a[(r, col)].div_floor(&a[(row, col)]);
            a.sub_row_multiple(r, row, &q);
            u.sub_row_multiple(r, row, &q);
        }
        row += 1;
    }
    HermiteForm { form: a, transform: u, rank: row }
}

/// Combine rows `top` and `other` so that `other` gets a zero in `col`.
fn eliminate_rows(a: &mut IntegerMatrix, u: &mut IntegerMatrix, top: usize, other: usize, col: usize) {
    let x = a[(top, col)].clone();
    let y = a[(other, col)].clone();
    if !x.is_zero() && y.is_multiple_of(&x) {
        let q = &y / &x;
        a.sub_row_multiple(other, top, &q);
        u.sub_row_multiple(other, top, &q);
        return;
    }
    let e = x.extended_gcd(&y);
    let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
    let neg_yg = -yg;
    a.combine_rows(top, other, &e.x, &e.y, &neg_yg, &xg);
    u.combine_rows(top, other, &e.x, &e.y, &neg_yg, &xg);
}

fn eliminate_cols(a: &mut IntegerMatrix, v: &mut IntegerMatrix, left: usize, other: usize, row: usize) {
    let x = a[(row, left)].clone();
    let y = a[(row, other)].clone();
    if !x.is_zero() && y.is_multiple_of(&x) {
        let q = &y / &x;
        let neg_q = -q;
        let one = BigInt::one();
        let zero = BigInt::zero();
        a.combine_cols(left, other, &one, &zero, &neg_q, &one);
        v.combine_cols(left, other, &one, &zero, &neg_q, &one);
        return;
    }
    let e = x.extended_gcd(&y);
    let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
    let neg_yg = -yg;
    a.combine_cols(left, other, &e.x, &e.y, &neg_yg, &xg);
    v.combine_cols(left, other, &e.x, &e.y, &neg_yg, &xg);
}

/// Canonical basis of the subgroup generated by the rows of `generators`.
pub fn hermite_basis(generators: &IntegerMatrix) -> Lattice {
    let h = hermite_with_transform(generators);
    let basis = h.form.select_rows(&(0..h.rank).collect::<Vec<_>>());
    Lattice { ambient_rank: generators.cols(), basis }
}

/// `left * original * right` is diagonal with `divisors` on its leading
/// diagonal, each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntegerMatrix,
    pub divisors: Vec<BigInt>,
    pub right: IntegerMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// The diagonal matrix `left * original * right` should equal.
    pub fn diagonal(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, x) in self.divisors.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

pub fn smith(generators: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (generators.rows(), generators.cols());
    let mut a = generators.clone();
    let mut left = IntegerMatrix::identity(m);
    let mut right = IntegerMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let width = n - t;
        let pos = abs_min_position(
            (t..m).flat_map(|i| (t..n).map(move |j| (i, j))).enumerate().map(|(k, (i, j))| (k, &a[(i, j)])),
        );
        let Some(k) = pos else { break };
        let (pi, pj) = (t + k / width, t + k % width);
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if !a[(i, t)].is_zero() {
                    eliminate_rows(&mut a, &mut left, t, i, t);
                    changed = true;
                }
            }
            for j in t + 1..n {
                if !a[(t, j)].is_zero() {
                    eliminate_cols(&mut a, &mut right, t, j, t);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    a.sub_row_multiple(t, i, &minus_one);
                    left.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    let divisors = (0..m.min(n)).map(|i| a[(i, i)].clone()).take_while(|x| !x.is_zero()).collect();
    SmithDecomposition { left, divisors, right }
}

/// Basis (Hermite form, as rows) of `{ y in Z^n : m * y^T = 0 }`.
pub fn right_kernel(m: &IntegerMatrix) -> IntegerMatrix {
    let h = hermite_with_transform(&m.transpose());
    let rows: Vec<usize> = (h.rank..m.cols()).collect();
    hermite_basis(&h.transform.select_rows(&rows)).basis
}

/// `L_R ∩ Z^n`, computed as the double annihilator.
pub fn saturate(lattice: &Lattice) -> Lattice {
    let annihilator = right_kernel(&lattice.basis);
    Lattice { ambient_rank: lattice.ambient_rank, basis: right_kernel(&annihilator) }
}

/// Index `a = [S : L]` split as `a = p^s * b` with `p ∤ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSplit {
    pub index: BigInt,
    pub separable: BigInt,
    pub inseparable: BigInt,
    pub exponent: u32,
}

pub fn index_and_p_split(sub: &Lattice, sup: &Lattice, p: Characteristic) -> Result<IndexSplit> {
    if sub.ambient_rank != sup.ambient_rank || sub.rank() != sup.rank() {
        return Err(Error::NotFiniteIndex(format!("ranks {} and {} differ", sub.rank(), sup.rank())));
    }
    let coords = sup
        .coordinate_matrix(&sub.basis)
        .ok_or_else(|| Error::NotFiniteIndex("sublattice is not contained in the superlattice".into()))?;
    let index = smith(&coords).divisors.iter().fold(BigInt::one(), |acc, d| acc * d);
    Ok(split_by_prime(index, p))
}

pub fn split_by_prime(index: BigInt, p: Characteristic) -> IndexSplit {
    let mut separable = index.clone();
    let mut inseparable = BigInt::one();
    let mut exponent = 0;
    if !p.is_zero() {
        let pb = BigInt::from(p.value());
        while !separable.is_zero() && separable.is_multiple_of(&pb) {
            separable /= &pb;
            inseparable *= &pb;
            exponent += 1;
        }
    }
    IndexSplit { index, separable, inseparable, exponent }
}

/// Rank of the rows of `generators` over `F_p`, or over `Q` when `p = 0`.
pub fn rank_over_field(generators: &IntegerMatrix, p: u64) -> Result<usize> {
    Ok(rank_over(generators, Characteristic::new(p)?))
}

pub fn rank_over(generators: &IntegerMatrix, p: Characteristic) -> usize {
    if p.is_zero() {
        return generators.rational_rank();
    }
    let mut echelon = ModularEchelon::new(generators.cols(), p.value());
    generators.row_iter().filter(|r| echelon.insert_integers(r)).count()
}

/// Incremental echelon basis over `F_p`.
#[derive(Clone, Debug)]
pub(crate) struct ModularEchelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
    width: usize,
}

impl ModularEchelon {
    pub(crate) fn new(width: usize, p: u64) -> Self {
        ModularEchelon { p, rows: Vec::new(), width }
    }

    pub(crate) fn insert_integers(&mut self, v: &[BigInt]) -> bool {
        let pb = BigInt::from(self.p);
        let v = v.iter().map(|x| x.mod_floor(&pb).to_u64().expect("residue fits u64")).collect();
        self.insert(v)
    }

    /// `v` must already be reduced into `[0, p)`.
    pub(crate) fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let p = self.p as u128;
        for (pivot, row) in &self.rows {
            let f = v[*pivot] as u128;
            if f == 0 {
                continue;
            }
            // rows are normalized to pivot 1
            for (x, &r) in v.iter_mut().zip(row) {
                *x = ((*x as u128 + p - (f * r as u128) % p) % p) as u64;
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(pivot) => {
                let inv = crate::characteristic::pow_mod(v[pivot], self.p - 2, self.p) as u128;
                for x in v.iter_mut() {
                    *x = ((*x as u128 * inv) % p) as u64;
                }
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

/// Surjection `Z^n -> Z^m` with a prescribed saturated kernel, plus a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientProjection {
    /// `n x m`; a point `x` maps to `x * matrix`.
    pub matrix: IntegerMatrix,
    pub kernel: Lattice,
    /// `m x n`; `splitting * matrix` is the identity on `Z^m`.
    pub splitting: IntegerMatrix,
}

impl QuotientProjection {
    pub fn target_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.apply_row(x)
    }

    pub fn lift(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.splitting.apply_row(y)
    }
}

/// The quotient map by a saturated lattice.
///
/// The matrix columns are the Hermite basis of the annihilator of `kernel`,
/// and the splitting rows are reduced modulo `kernel`, so the result depends
/// only on the lattice.
pub fn quotient_projection(kernel: &Lattice) -> Result<QuotientProjection> {
    if !kernel.is_saturated() {
        return Err(Error::QuotientHasTorsion);
    }
    let annihilator = right_kernel(&kernel.basis);
    let m = annihilator.rows();
    let sd = smith(&annihilator);
    debug_assert!(sd.divisors.iter().all(One::is_one) && sd.rank() == m);
    let first_cols: Vec<usize> = (0..m).collect();
    let section = sd.left.transpose().mul(&sd.right.select_columns(&first_cols).transpose());
    let splitting = IntegerMatrix::from_rows(kernel.ambient_rank, section.row_iter().map(|r| kernel.reduce(r)).collect());
    Ok(QuotientProjection { matrix: annihilator.transpose(), kernel: kernel.clone(), splitting })
}

/// An injection `Z^{rank K} -> K` with cyclic cokernel of order `c`: the first
/// Hermite basis vector of `K` is scaled by `c`, the rest are kept. Rows of
/// the result are the images of the standard basis.
pub fn embed_with_cokernel(k: &Lattice, c: &BigInt) -> Result<IntegerMatrix> {
    if k.rank() == 0 {
        return Err(Error::RankZeroLattice);
    }
    if !c.is_positive() {
        return Err(Error::Hypothesis(format!("cokernel order must be positive, got {}", c)));
    }
    let mut out = k.basis.clone();
    for x in out.row_mut(0) {
        *x = &*x * c;
    }
    Ok(out)
}

/// Rows completing `partial` to a basis of `k`.
pub fn complete_to_kernel_basis(k: &Lattice, partial: &IntegerMatrix) -> Result<IntegerMatrix> {
    if partial.rows() == 0 {
        return Ok(k.basis.clone());
    }
    let coords = k
        .coordinate_matrix(partial)
        .ok_or_else(|| Error::NotExtendable("a vector does not lie in the lattice".into()))?;
    let sd = smith(&coords);
    if sd.rank() != partial.rows() || !sd.divisors.iter().all(One::is_one) {
        return Err(Error::NotExtendable("vectors are dependent or span a non-primitive sublattice".into()));
    }
    let span = hermite_basis(&coords);
    let q = quotient_projection(&span)?;
    Ok(q.splitting.mul(&k.basis))
}
