//! Root multiplicities of the Kac-Moody algebra with symmetric Cartan
//! matrix `2(i, j)`, by the Peterson recursion, and graded dimensions of
//! the enveloping algebra of its positive part.
//!
//! With `c_β` the coefficients of `log Π_β (1 - e^β)^{-r_β}`,
//!
//! ```text
//! (D(β, β) - 2 ht β) c_β = Σ_{β' + β'' = β} D(β', β'') c_β' c_β''
//! r_β = c_β - Σ_{n ≥ 2, n | β} r_{β/n} / n
//! ```
//!
//! where `D` is the Cartan matrix and the sum runs over ordered pairs of
//! nonzero vectors.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quiver::{cartan_matrix, DimVector, FormMatrix, Quiver};

/// Largest number of cells a table box may have.
pub const MAX_TABLE_CELLS: u64 = 1 << 18;

/// Dense indexing of the box `0 ≤ β ≤ bound`, first coordinate most
/// significant, matching [`DimVector::box_iter`].
#[derive(Debug, Clone, PartialEq, Eq)]
struct BoxIndex {
    bound: DimVector,
    strides: Vec<usize>,
    cells: usize,
}

impl BoxIndex {
    fn new(bound: &DimVector) -> Result<Self> {
        let cells = bound.entries().iter().try_fold(1u64, |acc, &b| acc.checked_mul(b as u64 + 1));
        match cells {
            Some(c) if c <= MAX_TABLE_CELLS => {}
            _ => {
                let required = bound.entries().iter().fold(BigUint::one(), |acc, &b| acc * (b + 1));
                return Err(Error::BudgetExceeded { what: "table cells", required, budget: MAX_TABLE_CELLS });
            }
        }
        let mut strides = vec![0; bound.len()];
        let mut s = 1;
        for i in (0..bound.len()).rev() {
            strides[i] = s;
            s *= bound[i] as usize + 1;
        }
        Ok(BoxIndex { bound: bound.clone(), strides, cells: s })
    }

    fn contains(&self, b: &DimVector) -> bool {
        b.len() == self.bound.len() && b.le(&self.bound)
    }

    fn index(&self, b: &DimVector) -> Result<usize> {
        if !self.contains(b) {
            return Err(Error::OutOfBox(b.0.clone()));
        }
        Ok(b.entries().iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum())
    }
}

/// `r_β` and `c_β` for every `0 < β ≤ bound`.
#[derive(Debug, Clone)]
pub struct MultTable {
    quiver: Quiver,
    index: BoxIndex,
    c: Vec<BigRational>,
    r: Vec<BigUint>,
}

impl MultTable {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn bound(&self) -> &DimVector {
        &self.index.bound
    }

    pub fn covers(&self, b: &DimVector) -> bool {
        self.index.contains(b)
    }

    /// `r_β`; zero for `β = 0`.
    pub fn r(&self, b: &DimVector) -> Result<&BigUint> {
        Ok(&self.r[self.index.index(b)?])
    }

    pub fn c(&self, b: &DimVector) -> Result<&BigRational> {
        Ok(&self.c[self.index.index(b)?])
    }

    /// Positive roots in the box with their multiplicities, in box order.
    pub fn roots(&self) -> impl Iterator<Item = (DimVector, &BigUint)> + '_ {
        self.index.bound.box_iter().filter_map(move |b| {
            let r = &self.r[self.index.index(&b).expect("in box")];
            (!r.is_zero()).then_some((b, r))
        })
    }
}

fn recursion_error(b: &DimVector, reason: impl Into<String>) -> Error {
    Error::Recursion { beta: b.0.clone(), reason: reason.into() }
}

/// Runs the recursion over the box `0 < β ≤ bound` in height order.
pub fn root_multiplicities(quiver: &Quiver, bound: &DimVector) -> Result<MultTable> {
    quiver.check_dims(bound)?;
    let index = BoxIndex::new(bound)?;
    let form = cartan_matrix(quiver);
    let mut order: Vec<DimVector> = bound.box_iter().filter(|b| !b.is_zero()).collect();
    order.sort_by_key(|b| b.height());

    let mut c = vec![BigRational::zero(); index.cells];
    let mut r = vec![BigUint::zero(); index.cells];
    for b in &order {
        let bi = index.index(b)?;
        let cb = if b.height() == 1 {
            BigRational::one()
        } else if !quiver.support_connected(b) {
            BigRational::zero()
        } else {
            peterson_step(&form, &index, &c, &r, b)?
        };
        let mut rb = cb.clone();
        for n in 2..=b.gcd() {
            if let Some(sub) = b.div_exact(n) {
                let rs = BigInt::from(r[index.index(&sub)?].clone());
                rb -= BigRational::new(rs, BigInt::from(n));
            }
        }
        if !rb.is_integer() || rb.is_negative() {
            return Err(recursion_error(b, format!("multiplicity {rb} is not a nonnegative integer")));
        }
        r[bi] = rb.to_integer().to_biguint().expect("checked nonnegative");
        c[bi] = cb;
    }
    Ok(MultTable { quiver: quiver.clone(), index, c, r })
}

/// `c_β` for a non-simple `β` with connected support.
fn peterson_step(
    form: &FormMatrix,
    index: &BoxIndex,
    c: &[BigRational],
    r: &[BigUint],
    b: &DimVector,
) -> Result<BigRational> {
    let mut rhs = BigRational::zero();
    for part in b.proper_subvectors() {
        let cp = &c[index.index(&part)?];
        if cp.is_zero() {
            continue;
        }
        let rest = b.checked_sub(&part).expect("part lies below b");
        let cr = &c[index.index(&rest)?];
        if cr.is_zero() {
            continue;
        }
        let pair = form.pair(&part, &rest);
        if pair != 0 {
            rhs += cp * cr * BigInt::from(pair);
        }
    }
    let lead = form.pair(b, b) - 2 * b.height() as i64;
    if lead != 0 {
        return Ok(rhs / BigInt::from(lead));
    }
    // (β, β) = 2 ht β > 2 rules out β being a root, so c_β only collects
    // the contributions of roots β/n.
    if !rhs.is_zero() {
        return Err(recursion_error(b, format!("zero leading coefficient with right-hand side {rhs}")));
    }
    let mut cb = BigRational::zero();
    for n in 2..=b.gcd() {
        if let Some(sub) = b.div_exact(n) {
            cb += BigRational::new(BigInt::from(r[index.index(&sub)?].clone()), BigInt::from(n));
        }
    }
    Ok(cb)
}

/// `r_β > 0`.
pub fn is_root(table: &MultTable, b: &DimVector) -> Result<bool> {
    if b.is_zero() {
        table.index.index(b)?;
        return Ok(false);
    }
    Ok(!table.r(b)?.is_zero())
}

/// A formal power series in `x^γ`, truncated to the box `γ ≤ bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    index: BoxIndex,
    coeffs: Vec<BigUint>,
}

impl GradedSeries {
    pub fn bound(&self) -> &DimVector {
        &self.index.bound
    }

    pub fn get(&self, g: &DimVector) -> Result<&BigUint> {
        Ok(&self.coeffs[self.index.index(g)?])
    }

    pub fn iter(&self) -> impl Iterator<Item = (DimVector, &BigUint)> + '_ {
        self.index.bound.box_iter().zip(&self.coeffs)
    }
}

/// `n_γ = dim U(n^+)_γ` for `γ ≤ bound`, as the truncated product over
/// roots `β` of `(1 - x^β)^{-r_β}`.
pub fn pbw_dimensions(table: &MultTable, bound: &DimVector) -> Result<GradedSeries> {
    if !table.covers(bound) {
        return Err(Error::OutOfBox(bound.0.clone()));
    }
    let index = BoxIndex::new(bound)?;
    let cells: Vec<DimVector> = bound.box_iter().collect();
    let mut coeffs = vec![BigUint::zero(); index.cells];
    coeffs[0] = BigUint::one();
    for (root, mult) in table.roots().filter(|(b, _)| b.le(bound)) {
        let mut next = coeffs.clone();
        for g in &cells {
            let gi = index.index(g)?;
            let mut u = 1u32;
            while let Some(rest) = g.checked_sub(&root.scale(u)) {
                let prev = &coeffs[index.index(&rest)?];
                if !prev.is_zero() {
                    let k = binomial(mult + BigUint::from(u) - BigUint::one(), BigUint::from(u));
                    next[gi] += prev * k;
                }
                u += 1;
            }
        }
        coeffs = next;
    }
    Ok(GradedSeries { index, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn k2() -> Quiver {
        Quiver::new(2, &[(0, 1), (0, 1)]).unwrap()
    }

    fn r(t: &MultTable, v: &[u32]) -> u32 {
        u32::try_from(t.r(&d(v)).unwrap().clone()).unwrap()
    }

    fn ratio(n: i64, m: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(m))
    }

    #[test]
    fn affine_a1() {
        let t = root_multiplicities(&k2(), &d(&[4, 4])).unwrap();
        // real roots (n+1, n) and (n, n+1), imaginary (n, n)
        for a in 0..=4u32 {
            for b in 0..=4u32 {
                if a + b == 0 {
                    continue;
                }
                let want = u32::from(a.abs_diff(b) <= 1);
                assert_eq!(r(&t, &[a, b]), want, "({a},{b})");
            }
        }
        assert_eq!(*t.c(&d(&[2, 2])).unwrap(), ratio(3, 2));
        assert!(is_root(&t, &d(&[1, 1])).unwrap());
        assert!(is_root(&t, &d(&[1, 0])).unwrap());
        assert!(is_root(&t, &d(&[2, 1])).unwrap());
        assert!(!is_root(&t, &d(&[3, 1])).unwrap());
        assert!(matches!(is_root(&t, &d(&[5, 1])), Err(Error::OutOfBox(_))));
    }

    #[test]
    fn single_vertex() {
        let q = Quiver::new(1, &[]).unwrap();
        let t = root_multiplicities(&q, &d(&[3])).unwrap();
        assert_eq!(*t.c(&d(&[2])).unwrap(), ratio(1, 2));
        assert_eq!(r(&t, &[1]), 1);
        assert_eq!(r(&t, &[2]), 0);
        assert_eq!(r(&t, &[3]), 0);
    }

    #[test]
    fn finite_type_roots() {
        // A3 has the six positive roots e_i + ... + e_j
        let a3 = Quiver::new(3, &[(0, 1), (1, 2)]).unwrap();
        let t = root_multiplicities(&a3, &d(&[2, 2, 2])).unwrap();
        let roots: Vec<DimVector> = t.roots().map(|(b, _)| b).collect();
        assert_eq!(roots.len(), 6);
        assert!(t.roots().all(|(_, m)| m.is_one()));
        assert_eq!(r(&t, &[1, 0, 1]), 0);
        assert_eq!(r(&t, &[2, 1, 0]), 0);
    }

    #[test]
    fn affine_d4() {
        let d4 = Quiver::new(5, &[(1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        let t = root_multiplicities(&d4, &d(&[2, 1, 1, 1, 1])).unwrap();
        // δ has multiplicity rank - 1 = 4
        assert_eq!(r(&t, &[2, 1, 1, 1, 1]), 4);
        assert_eq!(r(&t, &[1, 1, 1, 1, 0]), 1);
        assert_eq!(r(&t, &[2, 1, 1, 1, 0]), 1);
        assert_eq!(r(&t, &[2, 1, 0, 0, 0]), 0);
        // affine type: below δ, roots are exactly the vectors with Tits form 1
        let form = cartan_matrix(&d4);
        for b in d(&[2, 1, 1, 1, 1]).proper_subvectors() {
            assert_eq!(r(&t, &b.0), u32::from(form.pair(&b, &b) == 2), "{b}");
        }
    }

    #[test]
    fn kronecker_three() {
        let k3 = Quiver::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let t = root_multiplicities(&k3, &d(&[2, 2])).unwrap();
        assert_eq!(r(&t, &[1, 1]), 1);
        assert_eq!(r(&t, &[1, 2]), 1);
        assert_eq!(r(&t, &[2, 2]), 1);
    }

    #[test]
    fn pbw_examples() {
        let t = root_multiplicities(&k2(), &d(&[2, 2])).unwrap();
        let n = pbw_dimensions(&t, &d(&[2, 2])).unwrap();
        assert_eq!(*n.get(&d(&[0, 0])).unwrap(), BigUint::one());
        assert_eq!(*n.get(&d(&[1, 1])).unwrap(), BigUint::from(2u32));
        let a2 = Quiver::new(2, &[(0, 1)]).unwrap();
        let t = root_multiplicities(&a2, &d(&[1, 1])).unwrap();
        let n = pbw_dimensions(&t, &d(&[1, 1])).unwrap();
        assert_eq!(*n.get(&d(&[1, 1])).unwrap(), BigUint::from(2u32));
        assert!(matches!(pbw_dimensions(&t, &d(&[2, 1])), Err(Error::OutOfBox(_))));
    }

    #[test]
    fn oversize_box_rejected() {
        assert!(matches!(root_multiplicities(&k2(), &d(&[1000, 1000])), Err(Error::BudgetExceeded { .. })));
    }
}
