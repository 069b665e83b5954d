//! Quivers, dimension vectors, weights and the forms attached to them.
//!
//! The symmetric form `(i, j)` is half-integral, so it is stored doubled:
//! `D[i][j] = 2(i, j)`. The Euler form is integral and `(a, a)` coincides
//! with `euler_form(a, a)`.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
}

/// A finite loop-free quiver. Arrow order is fixed at construction and
/// defines the coordinate order of every representation space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
    labels: Vec<String>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        let labels = (1..=vertex_count).map(|i| format!("v{i}")).collect();
        Self::with_labels(labels, arrows)
    }

    pub fn with_labels(labels: Vec<String>, arrows: &[(usize, usize)]) -> Result<Self> {
        let vertex_count = labels.len();
        if vertex_count == 0 {
            return Err(Error::EmptyQuiver);
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (idx, &(tail, head)) in arrows.iter().enumerate() {
            for v in [tail, head] {
                if v >= vertex_count {
                    return Err(Error::UnknownVertex { arrow: idx, vertex: v, vertex_count });
                }
            }
            if tail == head {
                return Err(Error::LoopArrow { arrow: idx, vertex: tail });
            }
            out.push(Arrow { tail, head });
        }
        Ok(Quiver { vertex_count, arrows: out, labels })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The double quiver: the original arrows in order, followed by one
    /// reversed arrow per original arrow, in the same order.
    pub fn double(&self) -> Quiver {
        let mut arrows = self.arrows.clone();
        arrows.extend(self.arrows.iter().map(|a| Arrow { tail: a.head, head: a.tail }));
        Quiver { vertex_count: self.vertex_count, arrows, labels: self.labels.clone() }
    }

    /// Number of arrows touching `v`, in either direction.
    pub fn degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.tail == v || a.head == v).count()
    }

    pub fn check_dims(&self, a: &DimVector) -> Result<()> {
        check_len(self.vertex_count, a.len())
    }

    pub fn check_weight(&self, w: &WeightVector) -> Result<()> {
        check_len(self.vertex_count, w.len())
    }

    /// Whether the support of `a` is connected in the underlying graph.
    pub fn support_connected(&self, a: &DimVector) -> bool {
        let support: Vec<usize> = (0..a.len()).filter(|&i| a[i] > 0).collect();
        let Some(&start) = support.first() else {
            return false;
        };
        let mut seen = vec![false; self.vertex_count];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for arrow in &self.arrows {
                let next = if arrow.tail == v {
                    arrow.head
                } else if arrow.head == v {
                    arrow.tail
                } else {
                    continue;
                };
                if a[next] > 0 && !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        support.iter().all(|&v| seen[v])
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::SizeMismatch { expected, got })
    }
}

/// Nonnegative integer vector indexed by vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn height(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(DimVector)
    }

    pub fn scale(&self, n: u32) -> DimVector {
        DimVector(self.0.iter().map(|a| a * n).collect())
    }

    /// `self / n` when every entry is divisible by `n`.
    pub fn div_exact(&self, n: u32) -> Option<DimVector> {
        if n == 0 || self.0.iter().any(|a| a % n != 0) {
            return None;
        }
        Some(DimVector(self.0.iter().map(|a| a / n).collect()))
    }

    pub fn gcd(&self) -> u32 {
        self.0.iter().fold(0u32, |g, &x| g.gcd(&x))
    }

    /// All `b` with `0 <= b <= self`, lexicographic with the first entry
    /// most significant.
    pub fn box_iter(&self) -> BoxIter {
        BoxIter { bound: self.0.clone(), next: Some(vec![0; self.0.len()]) }
    }

    /// All `b` with `0 < b < self` componentwise, i.e. nonzero and not `self`.
    pub fn proper_subvectors(&self) -> impl Iterator<Item = DimVector> + '_ {
        self.box_iter().filter(move |b| !b.is_zero() && b != self)
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, self.0.iter())
    }
}

pub struct BoxIter {
    bound: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for BoxIter {
    type Item = DimVector;

    fn next(&mut self) -> Option<DimVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.bound[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(DimVector(current))
    }
}

/// Signed integer vector indexed by vertices (weights `λ`, `Θ`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn new(entries: Vec<i64>) -> Self {
        WeightVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn negated(&self) -> WeightVector {
        WeightVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, self.0.iter())
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = T>) -> fmt::Result {
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// The doubled symmetric Gram matrix `D[i][j] = 2(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMatrix(Vec<Vec<i64>>);

impl FormMatrix {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    /// `a^T D b`, i.e. twice the symmetric form.
    pub fn pair(&self, a: &DimVector, b: &DimVector) -> i64 {
        let mut s = 0i64;
        for (i, row) in self.0.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let inner: i64 = row.iter().zip(&b.0).map(|(d, &bj)| d * bj as i64).sum();
            s += a[i] as i64 * inner;
        }
        s
    }
}

pub fn euler_form(q: &Quiver, a: &DimVector, b: &DimVector) -> Result<i64> {
    q.check_dims(a)?;
    q.check_dims(b)?;
    let diag: i64 = a.0.iter().zip(&b.0).map(|(&x, &y)| x as i64 * y as i64).sum();
    let off: i64 = q.arrows.iter().map(|ar| a[ar.tail] as i64 * b[ar.head] as i64).sum();
    Ok(diag - off)
}

/// `euler(a, b) + euler(b, a)`, which equals `a^T D b`.
pub fn sym_doubled(q: &Quiver, a: &DimVector, b: &DimVector) -> Result<i64> {
    Ok(euler_form(q, a, b)? + euler_form(q, b, a)?)
}

pub fn cartan_matrix(q: &Quiver) -> FormMatrix {
    let n = q.vertex_count;
    let mut d = vec![vec![0i64; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 2;
    }
    for a in &q.arrows {
        d[a.tail][a.head] -= 1;
        d[a.head][a.tail] -= 1;
    }
    FormMatrix(d)
}

pub fn weight_dot(w: &WeightVector, a: &DimVector) -> Result<i64> {
    check_len(w.len(), a.len())?;
    Ok(w.0.iter().zip(&a.0).map(|(&x, &y)| x * y as i64).sum())
}

pub fn is_indivisible(a: &DimVector) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(a.gcd() == 1)
}

/// `λ·α = 0` and `λ·β ≠ 0` for every `0 < β < α`.
pub fn is_generic(w: &WeightVector, a: &DimVector) -> Result<bool> {
    if weight_dot(w, a)? != 0 {
        return Ok(false);
    }
    Ok(a.proper_subvectors().all(|b| weight_dot(w, &b).is_ok_and(|v| v != 0)))
}

/// Smallest generic weight for `a`: candidates are visited by increasing
/// max-norm, and within one norm lexicographically with coordinates ranked
/// `0, 1, -1, 2, -2, ...`.
pub fn find_generic_weight(a: &DimVector) -> Result<WeightVector> {
    if !is_indivisible(a)? {
        return Err(Error::Divisible(a.0.clone()));
    }
    let n = a.len();
    let proper: Vec<DimVector> = a.proper_subvectors().collect();
    let cap = 2 * a.height() as i64 + 2;
    for norm in 0..=cap {
        let ranked: Vec<i64> = std::iter::once(0).chain((1..=norm).flat_map(|m| [m, -m])).collect();
        let mut idx = vec![0usize; n];
        loop {
            let cand: Vec<i64> = idx.iter().map(|&i| ranked[i]).collect();
            if cand.iter().map(|x| x.abs()).max().unwrap_or(0) == norm {
                let dot: i64 = cand.iter().zip(&a.0).map(|(&x, &y)| x * y as i64).sum();
                if dot == 0
                    && proper.iter().all(|b| cand.iter().zip(&b.0).map(|(&x, &y)| x * y as i64).sum::<i64>() != 0)
                {
                    return Ok(WeightVector(cand));
                }
            }
            // odometer, last coordinate fastest
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < ranked.len() {
                    break;
                }
                idx[i] = 0;
            }
            if idx.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    Err(Error::Internal(format!("no generic weight found for {a} up to norm {cap}")))
}

/// `d = 1 - (α, α)`, half the dimension of the quiver variety.
pub fn kac_degree(q: &Quiver, a: &DimVector) -> Result<i64> {
    Ok(1 - euler_form(q, a, a)?)
}
