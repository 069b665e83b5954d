//! Slope stability for a weight `Θ`, Harder-Narasimhan filtrations of
//! explicit representations, and the counts `m_α` obtained from the PBW
//! dimensions `n_γ` and from root multiplicities.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ffield::{FiniteField, FqMatrix};
use crate::kacmoody::{pbw_dimensions, root_multiplicities, GradedSeries, MultTable};
use crate::moment::{king_semistable, king_stable};
use crate::quiver::{is_generic, weight_dot, DimVector, Quiver, WeightVector};
use crate::rep::{enumerate_reps, hom_dimension, subrepresentations, EnumConfig, Representation, SubRep, Subspace};

/// `(Θ · a) / ht(a)`, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeValue(pub Ratio<i64>);

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn slope(theta: &WeightVector, a: &DimVector) -> Result<SlopeValue> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(SlopeValue(Ratio::new(weight_dot(theta, a)?, a.height() as i64)))
}

/// Slope-major order, higher slope greater, ties broken lexicographically.
pub fn total_order_cmp(theta: &WeightVector, a: &DimVector, b: &DimVector) -> Result<Ordering> {
    Ok(slope(theta, a)?.cmp(&slope(theta, b)?).then_with(|| a.cmp(b)))
}

fn proper_nonzero(w: &SubRep, dims: &DimVector) -> bool {
    let wd = w.dims();
    !wd.is_zero() && wd != *dims
}

fn slope_test(v: &Representation, theta: &WeightVector, cfg: &EnumConfig, strict: bool) -> Result<bool> {
    let dims = v.dims();
    let sv = slope(theta, dims)?;
    for w in subrepresentations(v, cfg)? {
        if !proper_nonzero(&w, dims) {
            continue;
        }
        let sw = slope(theta, &w.dims())?;
        if sw > sv || (strict && sw == sv) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `s(W) ≤ s(V)` for every proper nonzero subrepresentation `W`.
pub fn slope_semistable(v: &Representation, theta: &WeightVector, cfg: &EnumConfig) -> Result<bool> {
    slope_test(v, theta, cfg, false)
}

/// `s(W) < s(V)` for every proper nonzero subrepresentation `W`.
pub fn slope_stable(v: &Representation, theta: &WeightVector, cfg: &EnumConfig) -> Result<bool> {
    slope_test(v, theta, cfg, true)
}

/// `V / W` in the basis of unit vectors at the non-pivot columns of each
/// `W_i`, together with those columns.
#[derive(Debug, Clone)]
pub struct Quotient<'a> {
    pub rep: Representation<'a>,
    pub columns: Vec<Vec<usize>>,
}

impl Quotient<'_> {
    /// Lifts a vector of `(V / W)_i` to `V_i` along the chosen section.
    pub fn lift(&self, vertex: usize, v: &[u32], ambient: usize) -> Vec<u32> {
        let mut out = vec![0; ambient];
        for (&c, &x) in self.columns[vertex].iter().zip(v) {
            out[c] = x;
        }
        out
    }
}

pub fn quotient_rep<'a>(v: &Representation<'a>, w: &SubRep) -> Result<Quotient<'a>> {
    let f = v.field();
    if w.spaces.len() != v.dims().len() {
        return Err(Error::SizeMismatch { expected: v.dims().len(), got: w.spaces.len() });
    }
    for (i, s) in w.spaces.iter().enumerate() {
        if s.ambient() != v.dim_at(i) {
            return Err(Error::Internal(format!("subspace at vertex {i} lives in the wrong ambient space")));
        }
    }
    let columns: Vec<Vec<usize>> = w.spaces.iter().map(Subspace::complement_columns).collect();
    let mut maps = Vec::with_capacity(v.maps().len());
    for (ai, a) in v.quiver().arrows().iter().enumerate() {
        let (src, dst) = (&w.spaces[a.tail], &w.spaces[a.head]);
        for r in 0..src.dim() {
            if !dst.contains(&v.apply(ai, src.basis().row(r)), f) {
                return Err(Error::NotInvariant { arrow: ai });
            }
        }
        let mut m = FqMatrix::zeros(columns[a.head].len(), columns[a.tail].len());
        for (j, &c) in columns[a.tail].iter().enumerate() {
            let mut e = vec![0; v.dim_at(a.tail)];
            e[c] = 1;
            let image = dst.reduce(&v.apply(ai, &e), f);
            for (i, &rc) in columns[a.head].iter().enumerate() {
                m.set(i, j, image[rc]);
            }
        }
        maps.push(m);
    }
    let dims = DimVector::new(columns.iter().map(|c| c.len() as u32).collect());
    let rep = Representation::new(v.quiver(), f, dims, maps)?;
    Ok(Quotient { rep, columns })
}

/// Dimension vectors of the successive quotients of an HN filtration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HNType(pub Vec<DimVector>);

impl fmt::Display for HNType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "({d})")?;
        }
        Ok(())
    }
}

/// `0 = V_0 ⊂ V_1 ⊂ ... ⊂ V_k = V`; `steps` holds `V_1, ..., V_k`.
#[derive(Debug, Clone)]
pub struct HnFiltration {
    pub steps: Vec<SubRep>,
    pub hn_type: HNType,
    pub slopes: Vec<SlopeValue>,
}

/// The subrepresentation of maximal slope and, among those, of maximal
/// dimension. Errors if it is not unique.
fn destabilizing(v: &Representation, theta: &WeightVector, cfg: &EnumConfig) -> Result<SubRep> {
    let mut best: Option<((SlopeValue, u64), Vec<SubRep>)> = None;
    for w in subrepresentations(v, cfg)? {
        let wd = w.dims();
        if wd.is_zero() {
            continue;
        }
        let key = (slope(theta, &wd)?, wd.height());
        match &mut best {
            Some((k, list)) if *k == key => list.push(w),
            Some((k, _)) if *k > key => {}
            _ => best = Some((key, vec![w])),
        }
    }
    let (_, mut list) = best.ok_or(Error::ZeroVector)?;
    if list.len() != 1 {
        return Err(Error::Internal(format!("{} subrepresentations of maximal slope and dimension", list.len())));
    }
    Ok(list.pop().expect("one element"))
}

pub fn hn_filtration(v: &Representation, theta: &WeightVector, cfg: &EnumConfig) -> Result<HnFiltration> {
    let f = v.field();
    let dims = v.dims().clone();
    if dims.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut current = SubRep::zero(&dims);
    let mut steps = Vec::new();
    let mut types = Vec::new();
    let mut slopes: Vec<SlopeValue> = Vec::new();
    while current.dims() != dims {
        let quotient = quotient_rep(v, &current)?;
        let top = destabilizing(&quotient.rep, theta, cfg)?;
        let piece = quotient.rep.restrict(&top)?;
        let s = slope(theta, piece.dims())?;
        if slopes.last().is_some_and(|&prev| prev <= s) {
            return Err(Error::Internal(format!("HN slopes not decreasing at {s}")));
        }
        if !slope_semistable(&piece, theta, cfg)? {
            return Err(Error::Internal(format!("HN quotient {} is not semistable", piece.dims())));
        }
        let spaces = (0..dims.len())
            .map(|i| {
                let n = dims[i] as usize;
                let mut gens: Vec<Vec<u32>> =
                    (0..current.spaces[i].dim()).map(|r| current.spaces[i].basis().row(r).to_vec()).collect();
                for r in 0..top.spaces[i].dim() {
                    gens.push(quotient.lift(i, top.spaces[i].basis().row(r), n));
                }
                Subspace::span(n, &gens, f)
            })
            .collect();
        current = SubRep { spaces };
        types.push(piece.dims().clone());
        slopes.push(s);
        steps.push(current.clone());
    }
    Ok(HnFiltration { steps, hn_type: HNType(types), slopes })
}

/// Solves `n_γ = Σ Π m_{γ_i}` over tuples with strictly decreasing slopes
/// summing to `γ`, for every `0 < γ ≤ a`, and returns `m_a`.
pub fn m_recursive(a: &DimVector, theta: &WeightVector, n: &GradedSeries) -> Result<BigUint> {
    Ok(m_table(a, theta, n)?.remove(a).expect("a is in its own box"))
}

/// `m_γ` for every `0 < γ ≤ a`.
pub fn m_table(a: &DimVector, theta: &WeightVector, n: &GradedSeries) -> Result<BTreeMap<DimVector, BigUint>> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !a.le(n.bound()) || a.len() != n.bound().len() {
        return Err(Error::OutOfBox(a.0.clone()));
    }
    let mut order: Vec<DimVector> = a.box_iter().filter(|g| !g.is_zero()).collect();
    order.sort_by_key(|g| g.height());
    let mut solver = MSolver { theta, m: HashMap::new(), tails: HashMap::new() };
    for g in &order {
        let mut rest = BigInt::from(n.get(g)?.clone());
        for first in g.proper_subvectors() {
            let sf = slope(theta, &first)?;
            let tail = g.checked_sub(&first).expect("below g");
            rest -= solver.m[&first].clone() * solver.tail_sum(&tail, sf)?;
        }
        if rest.is_negative() {
            return Err(Error::Internal(format!("m at {g} is negative ({rest})")));
        }
        solver.m.insert(g.clone(), rest);
    }
    Ok(solver.m.into_iter().map(|(g, v)| (g, v.to_biguint().expect("checked nonnegative"))).collect())
}

struct MSolver<'t> {
    theta: &'t WeightVector,
    m: HashMap<DimVector, BigInt>,
    tails: HashMap<(DimVector, SlopeValue), BigInt>,
}

impl MSolver<'_> {
    /// `Σ Π m_{γ_i}` over tuples of `d` with strictly decreasing slopes all
    /// below `bound`; 1 for `d = 0`.
    fn tail_sum(&mut self, d: &DimVector, bound: SlopeValue) -> Result<BigInt> {
        if d.is_zero() {
            return Ok(BigInt::one());
        }
        if let Some(v) = self.tails.get(&(d.clone(), bound)) {
            return Ok(v.clone());
        }
        let mut total = BigInt::zero();
        for first in d.box_iter().filter(|g| !g.is_zero()) {
            let sf = slope(self.theta, &first)?;
            if sf >= bound {
                continue;
            }
            let mf = self.m[&first].clone();
            if mf.is_zero() {
                continue;
            }
            let tail = d.checked_sub(&first).expect("below d");
            total += mf * self.tail_sum(&tail, sf)?;
        }
        self.tails.insert((d.clone(), bound), total.clone());
        Ok(total)
    }
}

/// `Σ u_i β_i = α` with every `β_i` a root of slope `s(α)`, listed in
/// decreasing total order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeDecomposition(pub Vec<(u32, DimVector)>);

pub fn slope_decompositions(a: &DimVector, theta: &WeightVector, table: &MultTable) -> Result<Vec<SlopeDecomposition>> {
    let sa = slope(theta, a)?;
    if !table.covers(a) {
        return Err(Error::OutOfBox(a.0.clone()));
    }
    let mut roots = Vec::new();
    for (b, _) in table.roots().filter(|(b, _)| b.le(a)) {
        if slope(theta, &b)? == sa {
            roots.push(b);
        }
    }
    // within one slope the total order is lexicographic
    roots.sort();
    roots.reverse();
    let mut out = Vec::new();
    fn rec(
        roots: &[DimVector],
        remaining: &DimVector,
        cur: &mut Vec<(u32, DimVector)>,
        out: &mut Vec<SlopeDecomposition>,
    ) {
        if remaining.is_zero() {
            out.push(SlopeDecomposition(cur.clone()));
            return;
        }
        let Some((b, rest)) = roots.split_first() else {
            return;
        };
        let mut u = 1;
        while let Some(next) = remaining.checked_sub(&b.scale(u)) {
            cur.push((u, b.clone()));
            rec(rest, &next, cur, out);
            cur.pop();
            u += 1;
        }
        rec(rest, remaining, cur, out);
    }
    rec(&roots, a, &mut Vec::new(), &mut out);
    Ok(out)
}

/// `Σ Π C(r_{β_i} + u_i - 1, u_i)` over [`slope_decompositions`].
pub fn m_closed(a: &DimVector, theta: &WeightVector, table: &MultTable) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for dec in slope_decompositions(a, theta, table)? {
        let mut term = BigUint::one();
        for (u, b) in &dec.0 {
            let r = table.r(b)?;
            term *= binomial(r + BigUint::from(*u) - BigUint::one(), BigUint::from(*u));
        }
        total += term;
    }
    Ok(total)
}

/// `m_recursive`, `m_closed` and `r_α` for `Θ = -λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MComparison {
    pub m_recursive: BigUint,
    pub m_closed: BigUint,
    pub r: BigUint,
}

impl MComparison {
    pub fn holds(&self) -> bool {
        self.m_recursive == self.m_closed && self.m_closed == self.r
    }
}

pub fn verify_m_equals_r(quiver: &Quiver, a: &DimVector, lambda: &WeightVector) -> Result<MComparison> {
    quiver.check_dims(a)?;
    if !is_generic(lambda, a)? {
        return Err(Error::NotGeneric { weight: lambda.0.clone(), alpha: a.0.clone() });
    }
    let theta = lambda.negated();
    let table = root_multiplicities(quiver, a)?;
    let n = pbw_dimensions(&table, a)?;
    Ok(MComparison {
        m_recursive: m_recursive(a, &theta, &n)?,
        m_closed: m_closed(a, &theta, &table)?,
        r: table.r(a)?.clone(),
    })
}

/// King (semi)stability for `λ` agrees with slope (semi)stability for
/// `Θ = -λ`.
pub fn king_slope_equivalence_check(v: &Representation, lambda: &WeightVector, cfg: &EnumConfig) -> Result<bool> {
    let theta = lambda.negated();
    Ok(king_semistable(v, lambda, cfg)? == slope_semistable(v, &theta, cfg)?
        && king_stable(v, lambda, cfg)? == slope_stable(v, &theta, cfg)?)
}

/// Outcome of checking every representation of one dimension vector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HnSweep {
    pub reps: u64,
    pub types: BTreeMap<HNType, u64>,
    /// Representations whose King and slope stability disagree; only
    /// counted when a weight `λ` with `λ · α = 0` is supplied.
    pub king_mismatches: u64,
}

/// Runs [`hn_filtration`] (with its uniqueness, slope and semistability
/// checks) on every representation of `a` over `field`, and compares King
/// stability for `lambda` with slope stability for `-lambda`.
pub fn hn_sweep(
    quiver: &Quiver,
    a: &DimVector,
    theta: &WeightVector,
    king: Option<&WeightVector>,
    field: &FiniteField,
    cfg: &EnumConfig,
) -> Result<HnSweep> {
    let mut out = HnSweep::default();
    for v in enumerate_reps(quiver, field, a, cfg)? {
        let filt = hn_filtration(&v, theta, cfg)?;
        let total = filt.hn_type.0.iter().fold(DimVector::zero(a.len()), |acc, d| acc.add(d));
        if total != *a {
            return Err(Error::Internal(format!("HN type {} does not sum to {a}", filt.hn_type)));
        }
        *out.types.entry(filt.hn_type).or_default() += 1;
        if let Some(lambda) = king {
            if !king_slope_equivalence_check(&v, lambda, cfg)? {
                out.king_mismatches += 1;
            }
        }
        out.reps += 1;
    }
    Ok(out)
}

/// Pairs `(V, W)` of semistable representations with `s(V) > s(W)`, and
/// how many of them have a nonzero homomorphism `V -> W`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HomVanishing {
    pub pairs: u64,
    pub violations: u64,
}

/// Checks `Hom(V, W) = 0` over all semistable `V`, `W` with dimension
/// vectors in the box `0 < γ ≤ bound` and `s(V) > s(W)`.
pub fn hom_vanishing_sweep(
    quiver: &Quiver,
    bound: &DimVector,
    theta: &WeightVector,
    field: &FiniteField,
    cfg: &EnumConfig,
) -> Result<HomVanishing> {
    let mut semistable: Vec<(SlopeValue, Representation)> = Vec::new();
    for g in bound.box_iter().filter(|g| !g.is_zero()) {
        let s = slope(theta, &g)?;
        for v in enumerate_reps(quiver, field, &g, cfg)? {
            if slope_semistable(&v, theta, cfg)? {
                semistable.push((s, v));
            }
        }
    }
    let mut out = HomVanishing::default();
    for (sv, v) in &semistable {
        for (sw, w) in &semistable {
            if sv > sw {
                out.pairs += 1;
                if hom_dimension(v, w)? != 0 {
                    out.violations += 1;
                }
            }
        }
    }
    Ok(out)
}
