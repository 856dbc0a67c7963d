use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use toric_gauss::configuration::{self, PointConfiguration};
use toric_gauss::criteria;
use toric_gauss::gaussmap::{self, enumerate_chunk, EnumerationMode, EnumerationOptions, SpanningSumData};
use toric_gauss::lattice::{self, Lattice};
use toric_gauss::{Characteristic, IntegerMatrix};

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn matrix(cols: usize, rows: &[Vec<i64>]) -> IntegerMatrix {
    IntegerMatrix::from_rows(cols, to_big(rows))
}

fn generators(max_rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), 0..=max_rows).prop_map(move |rows| matrix(cols, &rows))
}

fn char_strategy() -> impl Strategy<Value = u64> {
    prop_oneof![Just(0u64), Just(2), Just(3), Just(5)]
}

/// Up to 7 distinct points of `[-2, 2]^n`, `n <= 3`.
fn configuration_strategy() -> impl Strategy<Value = PointConfiguration> {
    (1usize..=3, char_strategy()).prop_flat_map(|(n, p)| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, n), 1..=7).prop_map(move |pts| {
            let mut seen = BTreeSet::new();
            let pts: Vec<Vec<i64>> = pts.into_iter().filter(|v| seen.insert(v.clone())).collect();
            PointConfiguration::new(n, to_big(&pts), Characteristic::new(p).unwrap()).unwrap()
        })
    })
}

/// Row reduction over `F_p` written independently of the library.
fn brute_rank_mod_p(m: &IntegerMatrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&BigInt::from(p)).to_i64().unwrap()).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(r) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, r);
        let inv = (1..p).find(|x| x * a[rank][c] % p == 1).unwrap();
        for r2 in 0..a.len() {
            if r2 != rank && a[r2][c] != 0 {
                let f = a[r2][c] * inv % p;
                for k in 0..m.cols() {
                    a[r2][k] = (a[r2][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn box_points(n: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (-bound..=bound).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    to_big(&out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hermite_is_canonical(g in generators(4, 3, 6)) {
        let l = lattice::hermite_basis(&g);
        prop_assert_eq!(&lattice::hermite_basis(l.basis()), &l);
        prop_assert_eq!(l.rank(), g.rational_rank());
        for row in g.row_iter() {
            prop_assert!(l.contains(row));
        }
    }

    #[test]
    fn saturation_is_idempotent(g in generators(3, 3, 4)) {
        let l = Lattice::generated_by(&g);
        let s = lattice::saturate(&l);
        prop_assert_eq!(&lattice::saturate(&s), &s);
        prop_assert_eq!(s.rank(), l.rank());
        prop_assert!(s.contains_lattice(&l));
        prop_assert!(s.is_saturated());
    }

    #[test]
    fn smith_identity_and_chain(g in generators(4, 4, 9)) {
        let sd = lattice::smith(&g);
        prop_assert_eq!(sd.left.mul(&g).mul(&sd.right), sd.diagonal());
        prop_assert!(sd.left.determinant().abs().is_one());
        prop_assert!(sd.right.determinant().abs().is_one());
        for w in sd.divisors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn index_matches_coset_count(g in generators(3, 3, 4), p in char_strategy()) {
        let l = Lattice::generated_by(&g);
        let s = lattice::saturate(&l);
        let split = lattice::index_and_p_split(&l, &s, Characteristic::new(p).unwrap()).unwrap();
        prop_assert_eq!(&split.separable * &split.inseparable, split.index.clone());
        if p > 0 {
            prop_assert!(!split.separable.is_multiple_of(&BigInt::from(p)));
        }
        let a = split.index.to_u64().unwrap();
        let r = s.rank() as u32;
        prop_assume!(a.pow(r) <= 20_000);
        // a * S ⊆ L, so coefficients in [0, a) reach every coset
        let mut reps = BTreeSet::new();
        let mut coeffs = vec![0u64; s.rank()];
        loop {
            let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
            reps.insert(l.reduce(&s.basis().apply_row(&c)));
            let Some(i) = coeffs.iter().position(|&x| x + 1 < a) else { break };
            for x in coeffs.iter_mut().take(i) { *x = 0; }
            coeffs[i] += 1;
        }
        prop_assert_eq!(reps.len() as u64, a);
    }

    #[test]
    fn rank_over_fields(g in generators(4, 4, 9)) {
        let q = lattice::rank_over_field(&g, 0).unwrap();
        for p in [2i64, 3, 5, 7] {
            let r = lattice::rank_over_field(&g, p as u64).unwrap();
            prop_assert_eq!(r, brute_rank_mod_p(&g, p));
            prop_assert!(r <= q);
        }
    }

    #[test]
    fn quotient_kernel_is_exact(g in generators(2, 3, 3)) {
        let s = lattice::saturate(&Lattice::generated_by(&g));
        let q = lattice::quotient_projection(&s).unwrap();
        prop_assert_eq!(q.target_rank(), 3 - s.rank());
        prop_assert!(s.basis().mul(&q.matrix).is_zero());
        prop_assert_eq!(q.splitting.mul(&q.matrix), IntegerMatrix::identity(q.target_rank()));
        for v in box_points(3, 2) {
            prop_assert_eq!(q.apply(&v).iter().all(Zero::is_zero), s.contains(&v));
        }
    }

    #[test]
    fn affine_dimensions_are_ordered(c in configuration_strategy()) {
        let d = c.affine_dim_over_k();
        let r = c.affine_rank_over_z();
        prop_assert!(d <= r && r < c.len());
        if c.characteristic().is_zero() {
            prop_assert_eq!(d, r);
        }
    }

    #[test]
    fn normalization_round_trips(c in configuration_strategy()) {
        let n = configuration::normalize(&c);
        prop_assert!(n.normalized.spans_ambient_lattice());
        prop_assert_eq!(&configuration::normalize(&n.normalized).normalized, &n.normalized);
        for (orig, norm) in c.points().iter().zip(n.normalized.points()) {
            prop_assert_eq!(&n.to_original(norm), orig);
        }
    }

    #[test]
    fn partition_reassembles(c in configuration_strategy(), k in 0usize..=3) {
        let n = c.ambient_rank();
        let cols: Vec<usize> = (0..k.min(n)).collect();
        let proj = IntegerMatrix::identity(n).select_columns(&cols);
        let part = configuration::partition_by(&c, &proj).unwrap();
        let mut all: Vec<usize> = part.class_indices.concat();
        all.sort();
        prop_assert_eq!(all, (0..c.len()).collect::<Vec<_>>());
        for (img, class) in part.class_images.iter().zip(&part.classes) {
            for u in class {
                prop_assert_eq!(&proj.apply_row(u), img);
            }
        }
    }

    #[test]
    fn gauss_invariants(c in configuration_strategy()) {
        let s = gaussmap::analyze(&c, EnumerationOptions::default()).unwrap();
        let inv = &s.invariants;
        let n = s.ambient_rank();
        let p = c.characteristic().value();
        prop_assert_eq!(inv.defect, n - s.lattice.rank());
        prop_assert!(inv.rank + s.fiber_config.len() - 1 <= n);
        prop_assert_eq!(&inv.component_count, &inv.sep_deg);
        prop_assert_eq!(&inv.sep_deg * &inv.insep_deg, inv.deg_g2.clone());
        if p > 0 {
            prop_assert!(inv.component_count.gcd(&BigInt::from(p)).is_one());
        }
        if inv.separable {
            prop_assert_eq!(s.fiber_config.len(), inv.defect + 1);
        }
        if p == 2 {
            prop_assert_ne!(inv.rank, 1);
            if s.input().len() == n + 2 {
                prop_assert_eq!(inv.rank % 2, 0);
            }
        }
        if p == 0 {
            prop_assert!(inv.separable);
        }
        prop_assert_eq!(inv.degenerate, inv.defect > 0);
        prop_assert_eq!(inv.birational, inv.deg_g2.is_one() && inv.defect == 0 && inv.separable);
    }

    #[test]
    fn fast_mode_agrees(c in configuration_strategy()) {
        let full = gaussmap::analyze(&c, EnumerationOptions::default()).unwrap();
        let fast = gaussmap::analyze(&c, EnumerationOptions::with_mode(EnumerationMode::InvariantsOnly)).unwrap();
        prop_assert_eq!(full.invariants, fast.invariants);
        prop_assert_eq!(full.lattice, fast.lattice);
        prop_assert_eq!(full.fiber_config, fast.fiber_config);
    }

    #[test]
    fn chunk_grouping_is_irrelevant(c in configuration_strategy(), split in 0usize..8) {
        let norm = configuration::normalize(&c).normalized;
        let opts = EnumerationOptions { witness_limit: 5, ..Default::default() };
        let chunks: Vec<SpanningSumData> = (0..gaussmap::chunk_count(&norm)).map(|i| enumerate_chunk(&norm, i, opts)).collect();
        let split = split.min(chunks.len());
        let left = chunks[..split].iter().cloned().fold(SpanningSumData::empty(), |a, d| a.merge(d, 5));
        let right = chunks[split..].iter().cloned().fold(SpanningSumData::empty(), |a, d| a.merge(d, 5));
        prop_assert_eq!(left.merge(right, 5), gaussmap::enumerate_b(&norm, opts));
    }

    #[test]
    fn witnesses_have_nonzero_determinant(c in configuration_strategy()) {
        let norm = configuration::normalize(&c).normalized;
        let p = c.characteristic().value();
        for w in gaussmap::plucker_support(&norm) {
            let rows: Vec<&[BigInt]> = w.indices.iter().map(|&i| norm.points()[i].as_slice()).collect();
            let mu = gaussmap::affine_determinant(&rows);
            let reduced = if p == 0 { mu.clone() } else { mu.mod_floor(&BigInt::from(p)) };
            prop_assert!(!reduced.is_zero());
            prop_assert_eq!(&w.mu, &reduced);
        }
    }

    #[test]
    fn canonical_projection_is_developable(c in configuration_strategy()) {
        let s = gaussmap::analyze(&c, EnumerationOptions::default()).unwrap();
        let r = criteria::developable(s.input(), &s.projection.matrix, Some(&s)).unwrap();
        prop_assert!(r.developable);
        prop_assert_eq!(r.cross_check, Some(true));
    }

    #[test]
    fn developable_verdict_matches_lattice_test(c in configuration_strategy(), cols in prop::collection::vec(0usize..3, 0..=3)) {
        let s = gaussmap::analyze(&c, EnumerationOptions::default()).unwrap();
        let n = s.ambient_rank();
        let mut cols: Vec<usize> = cols.into_iter().filter(|&j| j < n).collect();
        cols.sort();
        cols.dedup();
        let proj = IntegerMatrix::identity(n).select_columns(&cols);
        let r = criteria::developable(s.input(), &proj, Some(&s)).unwrap();
        prop_assert_eq!(r.cross_check, Some(r.developable));
    }

    #[test]
    fn separable_inputs_decompose(c in configuration_strategy()) {
        let s = gaussmap::analyze(&c, EnumerationOptions::default()).unwrap();
        prop_assume!(s.invariants.separable);
        let d = criteria::cayley_decompose(&s).unwrap();
        prop_assert_eq!(d.parts.len(), s.invariants.defect + 1);
        let mapped: Vec<Vec<BigInt>> = s.input().points().iter().map(|u| d.identification.apply(u)).collect();
        let mapped = PointConfiguration::new(s.ambient_rank(), mapped, c.characteristic()).unwrap();
        prop_assert!(mapped.same_point_set(&d.cayley_sum().unwrap()));
        let j = criteria::join_report(&d);
        prop_assert_eq!(j.codimension, j.per_part_gaps.iter().sum::<usize>());
        if c.characteristic().is_zero() {
            prop_assert!(j.is_join);
        }
    }

    #[test]
    fn cayley_sums_round_trip(
        m in 1usize..=2,
        l in 1usize..=2,
        p in char_strategy(),
        raw in prop::collection::vec(prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 1..=3), 3),
    ) {
        let ch = Characteristic::new(p).unwrap();
        let parts: Vec<PointConfiguration> = raw[..=l]
            .iter()
            .map(|pts| {
                let mut seen = BTreeSet::new();
                let pts: Vec<Vec<i64>> = pts.iter().map(|v| v[..m].to_vec()).filter(|v| seen.insert(v.clone())).collect();
                PointConfiguration::new(m, to_big(&pts), ch).unwrap()
            })
            .collect();
        let sum = configuration::cayley_sum(&parts).unwrap();
        let dims: Vec<usize> = parts.iter().map(|q| q.affine_dim_over_k()).collect();
        prop_assume!(sum.spans_ambient_lattice() && dims.iter().sum::<usize>() == m);
        let s = gaussmap::analyze(&sum, EnumerationOptions::default()).unwrap();
        prop_assert!(s.invariants.defect >= l);
        if s.invariants.defect == l && s.invariants.separable {
            let d = criteria::cayley_decompose(&s).unwrap();
            prop_assert_eq!(d.parts.len(), l + 1);
            let got: Vec<usize> = d.parts.iter().map(|q| q.affine_dim_over_k()).collect();
            prop_assert_eq!(got, dims);
        }
    }
}

#[test]
fn random_four_by_four_ranks_are_exercised() {
    // a fixed instance with different ranks over Q, F_2 and F_3
    let m = matrix(4, &[vec![2, 0, 0, 0], vec![0, 3, 0, 0], vec![0, 0, 6, 0], vec![1, 1, 1, 1]]);
    assert_eq!(lattice::rank_over_field(&m, 0).unwrap(), 4);
    assert_eq!(lattice::rank_over_field(&m, 2).unwrap(), 2);
    assert_eq!(lattice::rank_over_field(&m, 3).unwrap(), 2);
    assert_eq!(brute_rank_mod_p(&m, 2), 2);
}
