//! Brute-force checks of the combinatorial description, by evaluating the
//! tangent-space matrix at torus points over `Q` and small finite fields.

mod field;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

pub use field::{is_irreducible, Field, GaloisField, Rationals, MAX_FIELD_ORDER};

use crate::configuration::PointConfiguration;
use crate::error::{Error, Result};
use crate::gaussmap;
use crate::lattice::Lattice;

/// `Γ(x)` and its maximal minors.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentMatrixSample<E> {
    /// `(n + 1) x (N + 1)`; column `j` is `z^{u_j} (1, u_j)`.
    pub gamma: Vec<Vec<E>>,
    /// All `(n + 1)`-subsets of columns in lexicographic order.
    pub minors: Vec<(Vec<usize>, E)>,
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn index_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            if m - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}

fn monomial<F: Field>(field: &F, point: &[F::Elem], exponent: &[BigInt]) -> F::Elem {
    point.iter().zip(exponent).fold(field.one(), |acc, (z, e)| field.mul(&acc, &field.pow(z, e)))
}

/// Determinant over the field by Gaussian elimination.
fn field_determinant<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = field.one();
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| !field.is_zero(&m[r][c])) else {
            return field.zero();
        };
        if pivot != c {
            m.swap(pivot, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[c][c]);
        let inv = field.inv(&m[c][c]).expect("pivot is nonzero");
        for r in c + 1..n {
            if field.is_zero(&m[r][c]) {
                continue;
            }
            let f = field.mul(&m[r][c], &inv);
            for k in c..n {
                let t = field.mul(&f, &m[c][k]);
                m[r][k] = field.sub(&m[r][k], &t);
            }
        }
    }
    det
}

pub fn gamma_matrix<F: Field>(field: &F, config: &PointConfiguration, point: &[F::Elem]) -> TangentMatrixSample<F::Elem> {
    let n = config.ambient_rank();
    let points = config.points();
    let mut gamma = vec![Vec::with_capacity(points.len()); n + 1];
    for u in points {
        let z = monomial(field, point, u);
        gamma[0].push(z.clone());
        for (i, ui) in u.iter().enumerate() {
            gamma[i + 1].push(field.mul(&z, &field.from_integer(ui)));
        }
    }
    let minors = index_tuples(points.len(), n + 1)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<F::Elem>> = gamma.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
            let d = field_determinant(field, sub);
            (cols, d)
        })
        .collect();
    TangentMatrixSample { gamma, minors }
}

/// Cofactor expansion, kept separate from the elimination code elsewhere.
fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::from(1),
        1 => m[0][0].clone(),
        n => {
            let mut total = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = &m[0][j] * integer_determinant(&minor);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

/// `μ_I · z^{Σ_{i∈I} u_i}` for every `(n + 1)`-subset `I`, in the same order
/// as [`gamma_matrix`].
pub fn plucker_from_monomials<F: Field>(field: &F, config: &PointConfiguration, point: &[F::Elem]) -> Vec<(Vec<usize>, F::Elem)> {
    let n = config.ambient_rank();
    let points = config.points();
    index_tuples(points.len(), n + 1)
        .into_iter()
        .map(|cols| {
            let bordered: Vec<Vec<BigInt>> = cols
                .iter()
                .map(|&j| core::iter::once(BigInt::from(1)).chain(points[j].iter().cloned()).collect())
                .collect();
            let mu = field.from_integer(&integer_determinant(&bordered));
            let mut sum = vec![BigInt::zero(); n];
            for &j in &cols {
                for (s, x) in sum.iter_mut().zip(&points[j]) {
                    *s += x;
                }
            }
            let value = field.mul(&mu, &monomial(field, point, &sum));
            (cols, value)
        })
        .collect()
}

fn normalized_projective<F: Field>(field: &F, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let lead = v.iter().find(|x| !field.is_zero(x))?;
    let inv = field.inv(lead).expect("nonzero");
    Some(v.iter().map(|x| field.mul(x, &inv)).collect())
}

/// Equality in projective space, after scaling each vector by the inverse of
/// its first nonzero entry. Two zero vectors count as equal.
pub fn projectively_equal<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    a.len() == b.len() && normalized_projective(field, a) == normalized_projective(field, b)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleOutcome {
    pub samples: usize,
    /// Minors and monomial formula differ projectively.
    pub disagreements: usize,
    /// Nonvanishing minors differ from the combinatorial support.
    pub support_mismatches: usize,
}

impl OracleOutcome {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.support_mismatches == 0
    }

    pub fn absorb(&mut self, other: &OracleOutcome) {
        self.samples += other.samples;
        self.disagreements += other.disagreements;
        self.support_mismatches += other.support_mismatches;
    }
}

/// Compare minors with the monomial formula at `samples` random torus
/// points, and the nonvanishing minors with the support from the enumerator.
/// `config` should be normalized; `field` must have the characteristic of
/// `config`.
pub fn check_configuration<F: Field, R: Rng + ?Sized>(
    field: &F,
    config: &PointConfiguration,
    samples: usize,
    rng: &mut R,
) -> OracleOutcome {
    debug_assert_eq!(field.characteristic(), config.characteristic().value());
    let support: Vec<Vec<usize>> = gaussmap::plucker_support(config).into_iter().map(|w| w.indices).collect();
    let mut outcome = OracleOutcome::default();
    for _ in 0..samples {
        let point: Vec<F::Elem> = (0..config.ambient_rank()).map(|_| field.random_unit(rng)).collect();
        let sample = gamma_matrix(field, config, &point);
        let formula = plucker_from_monomials(field, config, &point);
        let minors: Vec<F::Elem> = sample.minors.iter().map(|(_, m)| m.clone()).collect();
        let values: Vec<F::Elem> = formula.iter().map(|(_, m)| m.clone()).collect();
        outcome.samples += 1;
        if !projectively_equal(field, &minors, &values) {
            outcome.disagreements += 1;
        }
        let nonzero: Vec<Vec<usize>> =
            sample.minors.into_iter().filter(|(_, m)| !field.is_zero(m)).map(|(i, _)| i).collect();
        if nonzero != support {
            outcome.support_mismatches += 1;
        }
    }
    outcome
}

/// Largest torus `(q - 1)^n` [`fiber_count_oracle`] will scan.
pub const FIBER_COUNT_BUDGET: u64 = 1_000_000;

/// Number of `z ∈ (F_q^×)^n` with `z^g = 1` for every basis row `g` of `lattice`.
pub fn fiber_count_oracle(lattice: &Lattice, p: u64, e: u32) -> Result<u64> {
    let field = GaloisField::new(p, e)?;
    let n = lattice.ambient_rank();
    let units = (field.order() - 1) as u64;
    let size = units.checked_pow(n as u32).filter(|&s| s <= FIBER_COUNT_BUDGET).ok_or_else(|| {
        Error::BudgetExceeded(alloc::format!("(q - 1)^n = {}^{} exceeds {}", units, n, FIBER_COUNT_BUDGET))
    })?;
    // powers[g][i][z] = z^{g_i}
    let powers: Vec<Vec<Vec<u32>>> = lattice
        .basis()
        .row_iter()
        .map(|g| g.iter().map(|gi| field.units().map(|z| field.pow(&z, gi)).collect()).collect())
        .collect();
    let mut count = 0;
    let mut digits = vec![0usize; n];
    for _ in 0..size {
        let fixed = powers.iter().all(|row| {
            let mut acc = 1u32;
            for (table, &d) in row.iter().zip(&digits) {
                acc = field.mul(&acc, &table[d]);
            }
            acc == 1
        });
        if fixed {
            count += 1;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if (*d as u64) < units {
                break;
            }
            *d = 0;
        }
    }
    Ok(count)
}

/// The count predicted from the separable degree: `b · (q - 1)^{n - rank L}`.
pub fn expected_fiber_count(sep_deg: &BigInt, q: u64, ambient_rank: usize, lattice_rank: usize) -> Option<u64> {
    let b = sep_deg.to_u64()?;
    (q - 1).checked_pow((ambient_rank - lattice_rank) as u32)?.checked_mul(b)
}

/// Smallest `e` with `b | p^e - 1`, if `F_{p^e}` is within `max_order`.
pub fn splitting_degree(p: u64, b: &BigInt, max_order: u64) -> Option<u32> {
    let b = b.to_u64()?;
    let mut q = p;
    let mut e = 1;
    while q <= max_order {
        if (q - 1) % b == 0 {
            return Some(e);
        }
        q = q.checked_mul(p)?;
        e += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::Characteristic;
    use crate::lattice::{self, index_and_p_split};
    use crate::matrix::IntegerMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn config(n: usize, pts: &[&[i64]], p: u64) -> PointConfiguration {
        PointConfiguration::from_i64(n, pts, Characteristic::new(p).unwrap()).unwrap()
    }

    #[test]
    fn tuples_are_lexicographic() {
        assert_eq!(index_tuples(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(index_tuples(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(index_tuples(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn simplex_at_the_unit_point() {
        let c = config(2, &[&[0, 0], &[1, 0], &[0, 1]], 0);
        let q = Rationals;
        let one = q.one();
        let s = gamma_matrix(&q, &c, &[one.clone(), one]);
        assert_eq!(s.minors.len(), 1);
        assert_eq!(s.minors[0].1, q.one());
    }

    #[test]
    fn intro_example_over_f4() {
        let c = config(2, &[&[0, 0], &[0, 1], &[1, -1], &[-1, -1]], 2);
        let f = GaloisField::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let out = check_configuration(&f, &c, 5, &mut rng);
        assert!(out.passed(), "{:?}", out);
        let point = [2u32, 3u32];
        let nonzero = gamma_matrix(&f, &c, &point).minors.iter().filter(|(_, m)| *m != 0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn rational_agreement() {
        let c = config(2, &[&[0, 0], &[1, 2], &[2, -1], &[-1, 1], &[1, 1]], 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(check_configuration(&Rationals, &c, 5, &mut rng).passed());
    }

    #[test]
    fn fiber_counts() {
        let l = Lattice::generated_by(&IntegerMatrix::from_i64_rows(2, &[&[2, 0]]));
        assert_eq!(fiber_count_oracle(&l, 2, 2).unwrap(), 3);
        let six = Lattice::generated_by(&IntegerMatrix::from_i64_rows(1, &[&[6]]));
        assert_eq!(fiber_count_oracle(&six, 2, 2).unwrap(), 3);
        let sat = lattice::saturate(&six);
        let split = index_and_p_split(&six, &sat, Characteristic::new(2).unwrap()).unwrap();
        assert_eq!(expected_fiber_count(&split.separable, 4, 1, 1), Some(3));
        for (p, e) in [(2, 3), (3, 2), (5, 1)] {
            assert_eq!(fiber_count_oracle(&Lattice::full(3), p, e).unwrap(), 1);
        }
        let big = Lattice::zero(5);
        assert!(matches!(fiber_count_oracle(&big, 5, 2), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn splitting_degrees() {
        assert_eq!(splitting_degree(2, &BigInt::from(3), 64), Some(2));
        assert_eq!(splitting_degree(2, &BigInt::from(5), 64), Some(4));
        assert_eq!(splitting_degree(3, &BigInt::from(1), 64), Some(1));
        assert_eq!(splitting_degree(2, &BigInt::from(11), 64), None);
    }
}
