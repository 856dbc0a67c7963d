use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::characteristic::is_prime;
use crate::error::{Error, Result};

/// The scalar operations the oracle needs.
pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_integer(&self, x: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// `a^e` for a unit `a` and any integer `e`.
    fn pow(&self, a: &Self::Elem, e: &BigInt) -> Self::Elem {
        let base = if e.is_negative() { self.inv(a).expect("negative power of zero") } else { a.clone() };
        let mut e = e.abs();
        let mut base = base;
        let mut acc = self.one();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e /= &two;
        }
        acc
    }
}

/// `Q` with exact arithmetic.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_integer(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let mut num = rng.gen_range(1i64..=7);
        if rng.gen_bool(0.5) {
            num = -num;
        }
        BigRational::new(BigInt::from(num), BigInt::from(rng.gen_range(1i64..=7)))
    }
}

/// `F_q` for `q = p^e`, as `F_p[t]/(f)` for a fixed monic irreducible `f`.
/// An element is the integer whose base-`p` digits are its coefficients,
/// constant term first.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    degree: u32,
    order: u32,
    /// Coefficients of `f` below the leading 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Monic irreducible polynomials, low coefficients first without the leading
/// term.
fn known_modulus(p: u32, e: u32) -> Option<&'static [u32]> {
    Some(match (p, e) {
        (2, 2) => &[1, 1],
        (2, 3) => &[1, 1, 0],
        (2, 4) => &[1, 1, 0, 0],
        (3, 2) => &[2, 2],
        (3, 3) => &[1, 2, 0],
        (3, 4) => &[2, 0, 0, 2],
        (5, 2) => &[2, 4],
        (5, 3) => &[3, 3, 0],
        (5, 4) => &[2, 4, 4, 0],
        (7, 2) => &[3, 6],
        (7, 3) => &[4, 0, 6],
        (7, 4) => &[3, 4, 5, 0],
        _ => return None,
    })
}

/// Largest field order accepted.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

impl GaloisField {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        if e == 0 {
            return Err(Error::Hypothesis("field degree must be positive".into()));
        }
        let order = p.checked_pow(e).filter(|&q| q <= MAX_FIELD_ORDER as u64).ok_or_else(|| {
            Error::BudgetExceeded(alloc::format!("field of order {}^{} is too large", p, e))
        })? as u32;
        let p = p as u32;
        let modulus = if e == 1 {
            vec![0]
        } else {
            match known_modulus(p, e) {
                Some(m) => m.to_vec(),
                None => first_irreducible(p, e),
            }
        };
        let mut field = GaloisField { p, degree: e, order, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree as usize);
        let mut a = a;
        for _ in 0..self.degree {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    /// Multiplication by polynomial arithmetic, used to build the tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.digits(a), self.digits(b));
        let e = self.degree as usize;
        let p = self.p;
        let mut prod = vec![0u32; 2 * e];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // t^e = -(modulus)
            for (i, m) in self.modulus.iter().enumerate() {
                prod[k - e + i] = (prod[k - e + i] + c * (p - m % p)) % p;
            }
        }
        self.from_digits(&prod[..e])
    }

    fn build_tables(&mut self) {
        let q = self.order;
        let units = q - 1;
        for g in 1..q {
            let mut exp = Vec::with_capacity(units as usize);
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = self.slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() == units as usize {
                let mut log = vec![0u32; q as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    pub fn units(&self) -> impl Iterator<Item = u32> {
        1..self.order
    }
}

/// The first monic irreducible polynomial of degree `e` over `F_p` in
/// lexicographic order of the lower coefficients.
fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    (0..count)
        .map(|k| {
            let mut k = k;
            (0..e)
                .map(|_| {
                    let d = (k % p as u64) as u32;
                    k /= p as u64;
                    d
                })
                .collect::<Vec<u32>>()
        })
        .find(|m| is_irreducible(p, m))
        .expect("irreducible polynomials exist in every degree")
}

/// Whether the monic polynomial `t^e + Σ m_i t^i` is irreducible over `F_p`,
/// by trial division with all monic polynomials of degree at most `e / 2`.
pub fn is_irreducible(p: u32, lower: &[u32]) -> bool {
    let e = lower.len();
    let mut f = lower.to_vec();
    f.push(1);
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = k;
            for _ in 0..d {
                g.push((k % p as u64) as u32);
                k /= p as u64;
            }
            g.push(1);
            if poly_rem(p, &f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(p: u32, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * gi) % p;
        }
        r.pop();
    }
    r
}

impl Field for GaloisField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_integer(&self, x: &BigInt) -> u32 {
        x.mod_floor(&BigInt::from(self.p)).to_u32().expect("residue fits")
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let (a, b) = (self.digits(*a), self.digits(*b));
        let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&sum)
    }
    fn neg(&self, a: &u32) -> u32 {
        let d: Vec<u32> = self.digits(*a).iter().map(|x| (self.p - x) % self.p).collect();
        self.from_digits(&d)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let units = self.order - 1;
        let k = (self.log[*a as usize] + self.log[*b as usize]) % units;
        self.exp[k as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let units = self.order - 1;
        Some(self.exp[((units - self.log[*a as usize]) % units) as usize])
    }
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.order)
    }
    fn pow(&self, a: &u32, e: &BigInt) -> u32 {
        let units = (self.order - 1) as u64;
        let log = self.log[*a as usize] as u64;
        let e = e.mod_floor(&BigInt::from(units)).to_u64().expect("fits");
        self.exp[((log * e) % units) as usize]
    }
}
