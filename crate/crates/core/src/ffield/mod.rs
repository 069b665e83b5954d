//! Small finite fields `F_q`, `q = p^k` with `k <= 4`.
//!
//! Elements are canonical integers `0..q`: the element `c_0 + c_1 x + ...`
//! of `F_p[x]/(m)` is stored as `c_0 + c_1 p + c_2 p^2 + ...`, so equality
//! and hashing are structural. Prime fields use direct modular arithmetic;
//! extension fields use exp/log tables over a primitive element.

mod matrix;

pub use matrix::{solve_affine, AffineSolution, FqMatrix};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quiver::DimVector;

pub type Elem = u32;

const MAX_TABLE_ORDER: u64 = 1 << 22;

#[derive(Debug, Clone)]
enum Arith {
    Prime,
    Tables { exp: Vec<Elem>, log: Vec<u32> },
}

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    arith: Arith,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q` as `p^k` when it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl FiniteField {
    /// Whether [`FiniteField::new`] accepts `(p, k)`.
    pub fn is_supported(p: u32, k: u32) -> bool {
        is_prime(p) && (1..=4).contains(&k) && (k == 1 || (p as u64).pow(k) <= MAX_TABLE_ORDER)
    }

    /// `F_{p^k}` with the lexicographically smallest irreducible monic
    /// modulus of degree `k` (polynomials compared by their encoding
    /// `c_0 + c_1 p + ...`, so higher coefficients are most significant).
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(1..=4).contains(&k) {
            return Err(Error::DegreeOutOfRange(k));
        }
        let q64 = (p as u64).pow(k);
        if k == 1 {
            return Ok(FiniteField { p, k, q: p, modulus: vec![0, 1], arith: Arith::Prime });
        }
        if q64 > MAX_TABLE_ORDER {
            return Err(Error::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = smallest_irreducible(p, k as usize);
        let (exp, log) = build_tables(p, q, &modulus)?;
        Ok(FiniteField { p, k, q, modulus, arith: Arith::Tables { exp, log } })
    }

    /// Field of order `q`, if `q` is an admissible prime power.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.arith {
            Arith::Prime => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            Arith::Tables { .. } => {
                if self.p == 2 {
                    return a ^ b;
                }
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                while a > 0 || b > 0 {
                    out += ((a % self.p + b % self.p) % self.p) * place;
                    a /= self.p;
                    b /= self.p;
                    place *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match self.arith {
            Arith::Prime => {
                if a == 0 {
                    0
                } else {
                    self.p - a
                }
            }
            Arith::Tables { .. } => {
                if self.p == 2 {
                    return a;
                }
                let (mut a, mut out, mut place) = (a, 0, 1);
                while a > 0 {
                    out += ((self.p - a % self.p) % self.p) * place;
                    a /= self.p;
                    place *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.arith {
            Arith::Prime => ((a as u64 * b as u64) % self.p as u64) as Elem,
            Arith::Tables { exp, log } => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let n = self.q - 1;
                let s = log[a as usize] + log[b as usize];
                exp[(if s >= n { s - n } else { s }) as usize]
            }
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        match &self.arith {
            Arith::Prime => Some(pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as Elem),
            Arith::Tables { exp, log } => {
                let n = self.q - 1;
                let l = log[a as usize];
                Some(exp[((n - l) % n) as usize])
            }
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

// Dense polynomials over F_p, constant term first.

fn poly_trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm] as u64, p as u64 - 2, p as u64) as u32;
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(&prod, m, p)
}

fn decode(mut e: u32, p: u32, k: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(k);
    for _ in 0..k {
        v.push(e % p);
        e /= p;
    }
    poly_trim(v)
}

fn encode(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        // monic divisors of degree d
        for low in 0..p.pow(d as u32) {
            let mut f = decode(low, p, d);
            f.resize(d, 0);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    for low in 0..p.pow(k as u32) {
        let mut m = decode(low, p, k);
        m.resize(k, 0);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_tables(p: u32, q: u32, modulus: &[u32]) -> Result<(Vec<Elem>, Vec<u32>)> {
    let k = modulus.len() - 1;
    let n = (q - 1) as usize;
    for g in 2..q {
        let gp = decode(g, p, k);
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![1u32];
        let mut primitive = true;
        for i in 0..n {
            let e = encode(&cur, p);
            if log[e as usize] != u32::MAX {
                primitive = false;
                break;
            }
            log[e as usize] = i as u32;
            exp.push(e);
            cur = poly_mulmod(&cur, &gp, modulus, p);
        }
        if primitive {
            log[0] = 0;
            return Ok((exp, log));
        }
    }
    Err(Error::Internal(format!("no primitive element in F_{q}")))
}

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(n: u32, q: u32) -> BigUint {
    let qn = BigUint::from(q).pow(n);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - BigUint::from(q).pow(i)))
}

/// Number of `m x n` matrices of rank `r` over `F_q`.
pub fn rank_count(m: u32, n: u32, r: u32, q: u32) -> BigUint {
    if r > m.min(n) {
        return BigUint::zero();
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        num *= (qb.pow(m) - qb.pow(i)) * (qb.pow(n) - qb.pow(i));
        den *= qb.pow(r) - qb.pow(i);
    }
    num / den
}

/// `|G(α)(F_q)| = prod_i |GL_{α_i}(F_q)| / (q - 1)`.
pub fn g_alpha_order(a: &DimVector, field: &FiniteField) -> Result<BigUint> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    let q = field.order();
    let gl = a.entries().iter().fold(BigUint::one(), |acc, &n| acc * gl_order(n, q));
    let unit = BigUint::from(q - 1);
    if !(&gl % &unit).is_zero() {
        return Err(Error::InexactDivision { context: "G(alpha) order", numerator: gl, denominator: unit });
    }
    Ok(gl / unit)
}
