//! Representations of quivers over `F_q`: subrepresentations, intertwiners,
//! endomorphism algebras and (absolute) indecomposability, plus the direct
//! count of absolutely indecomposable isomorphism classes.

mod sweep;

pub use sweep::{enumerate_reps, EnumConfig, RepSweep, DEFAULT_BUDGET};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ffield::{g_alpha_order, Elem, FiniteField, FqMatrix};
use crate::quiver::{DimVector, Quiver};

/// One matrix per arrow, shaped `dims[head] x dims[tail]`.
#[derive(Debug, Clone)]
pub struct Representation<'a> {
    quiver: &'a Quiver,
    field: &'a FiniteField,
    dims: DimVector,
    maps: Vec<FqMatrix>,
}

impl<'a> Representation<'a> {
    pub fn new(quiver: &'a Quiver, field: &'a FiniteField, dims: DimVector, maps: Vec<FqMatrix>) -> Result<Self> {
        quiver.check_dims(&dims)?;
        if maps.len() != quiver.arrows().len() {
            return Err(Error::SizeMismatch { expected: quiver.arrows().len(), got: maps.len() });
        }
        for (i, (a, m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if m.rows() != dims[a.head] as usize || m.cols() != dims[a.tail] as usize {
                return Err(Error::Internal(format!(
                    "arrow {i} needs a {}x{} matrix, got {}x{}",
                    dims[a.head],
                    dims[a.tail],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.data().iter().any(|&x| x >= field.order()) {
                return Err(Error::Internal(format!("arrow {i} has entries outside F_{}", field.order())));
            }
        }
        Ok(Representation { quiver, field, dims, maps })
    }

    pub fn zero(quiver: &'a Quiver, field: &'a FiniteField, dims: DimVector) -> Result<Self> {
        quiver.check_dims(&dims)?;
        let maps =
            quiver.arrows().iter().map(|a| FqMatrix::zeros(dims[a.head] as usize, dims[a.tail] as usize)).collect();
        Ok(Representation { quiver, field, dims, maps })
    }

    pub fn quiver(&self) -> &'a Quiver {
        self.quiver
    }

    pub fn field(&self) -> &'a FiniteField {
        self.field
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn maps(&self) -> &[FqMatrix] {
        &self.maps
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v] as usize
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Representation<'a>) -> Representation<'a> {
        let dims = self.dims.add(&other.dims);
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let (x, y) = (&self.maps[i], &other.maps[i]);
                let mut m = FqMatrix::zeros(dims[a.head] as usize, dims[a.tail] as usize);
                for r in 0..x.rows() {
                    for c in 0..x.cols() {
                        m.set(r, c, x.get(r, c));
                    }
                }
                for r in 0..y.rows() {
                    for c in 0..y.cols() {
                        m.set(x.rows() + r, x.cols() + c, y.get(r, c));
                    }
                }
                m
            })
            .collect();
        Representation { quiver: self.quiver, field: self.field, dims, maps }
    }

    /// Apply the map of `arrow` to a column vector at its tail.
    pub fn apply(&self, arrow: usize, v: &[Elem]) -> Vec<Elem> {
        self.maps[arrow].mul_vec(v, self.field)
    }

    /// The subrepresentation `sub` as a representation in its own
    /// (echelon) bases.
    pub fn restrict(&self, sub: &SubRep) -> Result<Representation<'a>> {
        let dims = sub.dims();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            let (src, dst) = (&sub.spaces[a.tail], &sub.spaces[a.head]);
            let mut m = FqMatrix::zeros(dst.dim(), src.dim());
            for c in 0..src.dim() {
                let image = self.apply(i, src.basis().row(c));
                if !dst.contains(&image, self.field) {
                    return Err(Error::NotInvariant { arrow: i });
                }
                for (r, x) in dst.coordinates(&image).into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            maps.push(m);
        }
        Ok(Representation { quiver: self.quiver, field: self.field, dims, maps })
    }
}

/// A subspace of `F_q^n` held as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: FqMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: FqMatrix::zeros(0, n), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: FqMatrix::identity(n), pivots: (0..n).collect() }
    }

    pub fn span(n: usize, vectors: &[Vec<Elem>], f: &FiniteField) -> Self {
        if vectors.is_empty() {
            return Self::zero(n);
        }
        let mut m = FqMatrix::from_rows(vectors);
        let pivots = m.rref(f);
        let k = pivots.len();
        let basis = FqMatrix::from_data(k, n, m.data()[..k * n].to_vec());
        Subspace { ambient: n, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its echelon combination; zero exactly when `v` lies in
    /// the subspace, and otherwise supported off the pivot columns.
    pub fn reduce(&self, v: &[Elem], f: &FiniteField) -> Vec<Elem> {
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            let c = r[p];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &b) in r.iter_mut().zip(self.basis.row(row)) {
                *x = f.add(*x, f.mul(nc, b));
            }
        }
        r
    }

    pub fn contains(&self, v: &[Elem], f: &FiniteField) -> bool {
        self.reduce(v, f).iter().all(|&x| x == 0)
    }

    /// Coordinates of a member in the echelon basis.
    pub fn coordinates(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    /// Columns that are not pivots; the unit vectors there complete the
    /// echelon basis to a basis of `F_q^n`.
    pub fn complement_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn is_subspace_of(&self, other: &Subspace, f: &FiniteField) -> bool {
        (0..self.dim()).all(|r| other.contains(self.basis.row(r), f))
    }
}

/// Every subspace of `F_q^n`, each exactly once, by dimension then by
/// pivot set then by free entries.
pub fn all_subspaces(n: usize, f: &FiniteField) -> Vec<Subspace> {
    let q = f.order() as u64;
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pivots = &pivots;
                    ((pivots[r] + 1)..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let count = q.pow(free.len() as u32);
            for mut idx in 0..count {
                let mut basis = FqMatrix::zeros(k, n);
                for (r, &p) in pivots.iter().enumerate() {
                    basis.set(r, p, 1);
                }
                for &(r, c) in &free {
                    basis.set(r, c, (idx % q) as Elem);
                    idx /= q;
                }
                out.push(Subspace { ambient: n, basis, pivots: pivots.clone() });
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A tuple of subspaces `W_i ⊆ V_i`, invariant under the arrows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubRep {
    pub spaces: Vec<Subspace>,
}

impl SubRep {
    pub fn dims(&self) -> DimVector {
        DimVector::new(self.spaces.iter().map(|s| s.dim() as u32).collect())
    }

    pub fn zero(dims: &DimVector) -> Self {
        SubRep { spaces: dims.entries().iter().map(|&n| Subspace::zero(n as usize)).collect() }
    }

    pub fn full(dims: &DimVector) -> Self {
        SubRep { spaces: dims.entries().iter().map(|&n| Subspace::full(n as usize)).collect() }
    }

    pub fn contains(&self, other: &SubRep, f: &FiniteField) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| b.is_subspace_of(a, f))
    }
}

fn maps_into(v: &Representation, arrow: usize, src: &Subspace, dst: &Subspace) -> bool {
    (0..src.dim()).all(|r| dst.contains(&v.apply(arrow, src.basis().row(r)), v.field))
}

/// All subrepresentations of `v`, including `0` and `v`. The search visits
/// at most the product of the per-vertex subspace counts, which must fit in
/// the budget.
pub fn subrepresentations(v: &Representation, cfg: &EnumConfig) -> Result<Vec<SubRep>> {
    let n = v.quiver.vertex_count();
    let lists: Vec<Vec<Subspace>> = (0..n).map(|i| all_subspaces(v.dim_at(i), v.field)).collect();
    let cost = lists.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.len()));
    cfg.check("subspace tuples", &cost)?;

    // arrows checked once both endpoints are placed, at the later endpoint
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in v.quiver.arrows().iter().enumerate() {
        checks[a.tail.max(a.head)].push(i);
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        v: &Representation,
        lists: &[Vec<Subspace>],
        checks: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<SubRep>,
    ) {
        let vertex = chosen.len();
        if vertex == lists.len() {
            out.push(SubRep { spaces: chosen.iter().enumerate().map(|(i, &j)| lists[i][j].clone()).collect() });
            return;
        }
        for j in 0..lists[vertex].len() {
            chosen.push(j);
            let ok = checks[vertex].iter().all(|&ai| {
                let a = v.quiver.arrows()[ai];
                maps_into(v, ai, &lists[a.tail][chosen[a.tail]], &lists[a.head][chosen[a.head]])
            });
            if ok {
                rec(v, lists, checks, chosen, out);
            }
            chosen.pop();
        }
    }
    rec(v, &lists, &checks, &mut chosen, &mut out);
    Ok(out)
}

fn check_compatible(v: &Representation, w: &Representation) -> Result<()> {
    if v.quiver != w.quiver || v.field != w.field {
        return Err(Error::Internal("representations over different quivers or fields".into()));
    }
    Ok(())
}

/// Basis of `Hom(V, W)`: tuples `φ_i : V_i -> W_i` with
/// `φ_head x_a = y_a φ_tail` for every arrow.
pub fn hom_space(v: &Representation, w: &Representation) -> Result<Vec<Vec<FqMatrix>>> {
    check_compatible(v, w)?;
    let f = v.field;
    let n = v.quiver.vertex_count();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for i in 0..n {
        offsets.push(offsets[i] + w.dim_at(i) * v.dim_at(i));
    }
    let unknowns = offsets[n];
    let rows: usize = v.quiver.arrows().iter().map(|a| w.dim_at(a.head) * v.dim_at(a.tail)).sum();
    let mut system = FqMatrix::zeros(rows, unknowns);
    let mut row = 0;
    for (ai, a) in v.quiver.arrows().iter().enumerate() {
        let (x, y) = (&v.maps[ai], &w.maps[ai]);
        let (wh, vh, wt, vt) = (w.dim_at(a.head), v.dim_at(a.head), w.dim_at(a.tail), v.dim_at(a.tail));
        for r in 0..wh {
            for c in 0..vt {
                // Σ_k φ_h[r,k] x[k,c] − Σ_k y[r,k] φ_t[k,c]
                for k in 0..vh {
                    let col = offsets[a.head] + r * vh + k;
                    let val = f.add(system.get(row, col), x.get(k, c));
                    system.set(row, col, val);
                }
                for k in 0..wt {
                    let col = offsets[a.tail] + k * vt + c;
                    let val = f.sub(system.get(row, col), y.get(r, k));
                    system.set(row, col, val);
                }
                row += 1;
            }
        }
    }
    let kernel = system.nullspace(f);
    Ok(kernel
        .into_iter()
        .map(|vec| {
            (0..n)
                .map(|i| FqMatrix::from_data(w.dim_at(i), v.dim_at(i), vec[offsets[i]..offsets[i + 1]].to_vec()))
                .collect()
        })
        .collect())
}

pub fn hom_dimension(v: &Representation, w: &Representation) -> Result<usize> {
    Ok(hom_space(v, w)?.len())
}

/// `End(V)` with an explicit basis of intertwiner tuples.
#[derive(Debug, Clone)]
pub struct EndAlgebra {
    dims: DimVector,
    basis: Vec<Vec<FqMatrix>>,
}

/// Result of the locality analysis of a finite algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Locality {
    /// Non-units are closed under addition.
    pub local: bool,
    /// Dimension of the span of the non-units; for a local algebra this is
    /// the radical.
    pub nonunit_span_dim: usize,
    pub dim: usize,
}

impl Locality {
    pub fn absolutely_local(&self) -> bool {
        self.local && self.nonunit_span_dim + 1 == self.dim
    }
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FqMatrix>] {
        &self.basis
    }

    pub fn element(&self, coeffs: &[Elem], f: &FiniteField) -> Vec<FqMatrix> {
        let mut out: Vec<FqMatrix> =
            self.dims.entries().iter().map(|&n| FqMatrix::zeros(n as usize, n as usize)).collect();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(b) {
                *o = o.add(&m.scale(*c, f), f);
            }
        }
        out
    }

    /// An intertwiner is a unit of `End(V)` iff each component is
    /// invertible: the inverse tuple again intertwines.
    pub fn is_unit(element: &[FqMatrix], f: &FiniteField) -> bool {
        element.iter().all(|m| m.is_invertible(f))
    }

    /// Enumerates all `q^e` elements, collects the non-units and decides
    /// whether they form a subspace (equivalently, the algebra is local).
    pub fn locality(&self, f: &FiniteField, cfg: &EnumConfig) -> Result<Locality> {
        let e = self.dim();
        if e == 1 {
            return Ok(Locality { local: true, nonunit_span_dim: 0, dim: 1 });
        }
        let q = f.order() as u64;
        let size = BigUint::from(q).pow(e as u32);
        cfg.check("endomorphism algebra elements", &size)?;
        let size = q.pow(e as u32);
        let mut nonunits: u64 = 0;
        let mut span = Subspace::zero(e);
        let mut coeffs = vec![0 as Elem; e];
        for idx in 0..size {
            let mut x = idx;
            for c in coeffs.iter_mut() {
                *c = (x % q) as Elem;
                x /= q;
            }
            if !Self::is_unit(&self.element(&coeffs, f), f) {
                nonunits += 1;
                if !span.contains(&coeffs, f) {
                    let mut rows: Vec<Vec<Elem>> = (0..span.dim()).map(|r| span.basis().row(r).to_vec()).collect();
                    rows.push(coeffs.clone());
                    span = Subspace::span(e, &rows, f);
                }
            }
        }
        let k = span.dim();
        Ok(Locality { local: nonunits == q.pow(k as u32), nonunit_span_dim: k, dim: e })
    }
}

impl EndAlgebra {
    fn identity(&self) -> Vec<FqMatrix> {
        self.dims.entries().iter().map(|&n| FqMatrix::identity(n as usize)).collect()
    }

    /// Whether `End(V) = F_q · 1 ⊕ N` with `N` a nilpotent ideal, i.e. the
    /// algebra is local with residue field `F_q`. Runs in time polynomial
    /// in `e` and `q`, unlike [`EndAlgebra::locality`].
    pub fn is_split_local(&self, f: &FiniteField) -> bool {
        let len: usize = self.dims.entries().iter().map(|&n| (n * n) as usize).sum();
        let one = self.identity();
        let mut gens = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let shifted = f.elements().map(|c| sub_scaled(b, &one, c, f)).find(|x| is_nilpotent(x, f));
            match shifted {
                Some(x) => gens.push(flatten(&x)),
                None => return false,
            }
        }
        let n = Subspace::span(len, &gens, f);
        if n.dim() + 1 != self.dim() {
            return false;
        }
        let n_basis: Vec<Vec<FqMatrix>> = (0..n.dim()).map(|r| self.unflatten(n.basis().row(r))).collect();
        // N is an ideal and N^k = 0 for some k
        let mut power = n.clone();
        while power.dim() > 0 {
            let mut products = Vec::new();
            for r in 0..power.dim() {
                let x = self.unflatten(power.basis().row(r));
                for y in &n_basis {
                    products.push(flatten(&compose(&x, y, f)));
                }
            }
            let next = Subspace::span(len, &products, f);
            if next.dim() == power.dim() || !next.is_subspace_of(&n, f) {
                return false;
            }
            power = next;
        }
        true
    }

    fn unflatten(&self, v: &[Elem]) -> Vec<FqMatrix> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut at = 0;
        for &d in self.dims.entries() {
            let d = d as usize;
            out.push(FqMatrix::from_data(d, d, v[at..at + d * d].to_vec()));
            at += d * d;
        }
        out
    }
}

fn flatten(t: &[FqMatrix]) -> Vec<Elem> {
    t.iter().flat_map(|m| m.data().iter().copied()).collect()
}

fn compose(x: &[FqMatrix], y: &[FqMatrix], f: &FiniteField) -> Vec<FqMatrix> {
    x.iter().zip(y).map(|(a, b)| a.mul(b, f)).collect()
}

/// `x - c · y`.
fn sub_scaled(x: &[FqMatrix], y: &[FqMatrix], c: Elem, f: &FiniteField) -> Vec<FqMatrix> {
    x.iter().zip(y).map(|(a, b)| a.add(&b.scale(f.neg(c), f), f)).collect()
}

fn is_nilpotent(x: &[FqMatrix], f: &FiniteField) -> bool {
    x.iter().all(|m| {
        let mut p = m.clone();
        for _ in 1..m.rows() {
            p = p.mul(m, f);
        }
        p.is_zero()
    })
}

pub fn end_algebra(v: &Representation) -> Result<EndAlgebra> {
    Ok(EndAlgebra { dims: v.dims.clone(), basis: hom_space(v, v)? })
}

fn nonzero(v: &Representation) -> Result<()> {
    if v.dims.is_zero() {
        Err(Error::ZeroVector)
    } else {
        Ok(())
    }
}

pub fn is_indecomposable(v: &Representation, cfg: &EnumConfig) -> Result<bool> {
    nonzero(v)?;
    Ok(end_algebra(v)?.locality(v.field, cfg)?.local)
}

pub fn is_absolutely_indecomposable(v: &Representation) -> Result<bool> {
    nonzero(v)?;
    Ok(end_algebra(v)?.is_split_local(v.field))
}

/// Number of isomorphism classes of absolutely indecomposable
/// representations of dimension `dims` over `F_q`, by the orbit-counting
/// identity `Σ_x q^{dim End(x) - 1} / |G(α)(F_q)|` over absolutely
/// indecomposable `x`.
pub fn count_abs_indec_classes(
    quiver: &Quiver,
    dims: &DimVector,
    field: &FiniteField,
    cfg: &EnumConfig,
) -> Result<BigUint> {
    if dims.is_zero() {
        return Err(Error::ZeroVector);
    }
    let q = BigUint::from(field.order());
    let pow: Vec<BigUint> =
        (0..=dims.entries().iter().map(|&n| (n * n) as usize).sum::<usize>()).map(|k| q.pow(k as u32)).collect();
    let sweep = RepSweep::new(quiver, field, dims, cfg.reduce)?;
    let total = sweep.weighted_sum(cfg, |x| {
        let end = end_algebra(x)?;
        Ok(if end.is_split_local(field) { pow[end.dim() - 1].clone() } else { BigUint::zero() })
    })?;
    let group = g_alpha_order(dims, field)?;
    let (quot, rem) = total.div_rem(&group);
    if !rem.is_zero() {
        return Err(Error::InexactDivision { context: "orbit count", numerator: total, denominator: group });
    }
    Ok(quot)
}
