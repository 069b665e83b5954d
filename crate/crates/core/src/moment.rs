//! Point counts on fibers of the moment map for the doubled quiver, King
//! stability, and the Kac polynomial obtained by interpolating
//! `q^{-d} |X(F_q)|` over admissible prime powers.
//!
//! Convention: for a point `(x, y)` of the doubled quiver, with `y_a` the
//! map on the reversed arrow `a*`, the moment map at vertex `i` is
//!
//! ```text
//! μ_i(x, y) = Σ_{h(a)=i} x_a y_a - Σ_{t(a)=i} y_a x_a
//! ```
//!
//! and the fiber over `λ` is `{μ_i = λ_i · 1 for all i}`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ffield::{g_alpha_order, is_prime, solve_affine, Elem, FiniteField, FqMatrix};
use crate::poly::{integral_coefficients, lagrange_interpolate, KacPolynomial};
use crate::quiver::{
    find_generic_weight, is_generic, is_indivisible, kac_degree, weight_dot, DimVector, Quiver, WeightVector,
};
use crate::rep::{subrepresentations, EnumConfig, RepSweep, Representation};

/// Extra windows tried when the overdetermination check fails.
pub const MAX_RETRIES: usize = 3;

/// `μ(x, y) = Λ` with `Λ_i = λ_i · 1`, for fixed `Q` and `α`. The residues
/// `λ_i` live in the field; `Σ λ_i α_i = 0` is needed for a nonempty fiber
/// but not enforced.
#[derive(Debug, Clone)]
pub struct MomentEquation<'a> {
    quiver: &'a Quiver,
    dims: DimVector,
    target: Vec<Elem>,
}

impl<'a> MomentEquation<'a> {
    /// Reduces an integral weight into `field`.
    pub fn new(quiver: &'a Quiver, dims: DimVector, lambda: &WeightVector, field: &FiniteField) -> Result<Self> {
        quiver.check_weight(lambda)?;
        let target = lambda.entries().iter().map(|&l| field.from_int(l)).collect();
        Self::from_residues(quiver, dims, target)
    }

    pub fn from_residues(quiver: &'a Quiver, dims: DimVector, target: Vec<Elem>) -> Result<Self> {
        quiver.check_dims(&dims)?;
        if target.len() != quiver.vertex_count() {
            return Err(Error::SizeMismatch { expected: quiver.vertex_count(), got: target.len() });
        }
        Ok(MomentEquation { quiver, dims, target })
    }

    pub fn quiver(&self) -> &'a Quiver {
        self.quiver
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn target(&self) -> &[Elem] {
        &self.target
    }

    /// `Σ λ_i α_i` computed in the field.
    pub fn trace(&self, field: &FiniteField) -> Elem {
        self.target
            .iter()
            .zip(self.dims.entries())
            .fold(0, |acc, (&l, &a)| field.add(acc, field.mul(l, field.from_int(a as i64))))
    }

    pub fn is_trace_zero(&self, field: &FiniteField) -> bool {
        self.trace(field) == 0
    }
}

/// Column offsets of each reversed arrow's block among the unknowns.
fn y_layout(quiver: &Quiver, dims: &DimVector) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(quiver.arrows().len());
    let mut n = 0;
    for a in quiver.arrows() {
        offsets.push(n);
        n += (dims[a.tail] * dims[a.head]) as usize;
    }
    (offsets, n)
}

/// The linear map `y ↦ μ(x, y)` as a matrix, rows indexed by
/// `(vertex, row, col)` and columns by the entries of each `y_a`.
fn moment_matrix(x: &Representation) -> FqMatrix {
    let quiver = x.quiver();
    let f = x.field();
    let dims = x.dims();
    let (y_off, unknowns) = y_layout(quiver, dims);
    let mut v_off = Vec::with_capacity(quiver.vertex_count());
    let mut eqs = 0;
    for &d in dims.entries() {
        v_off.push(eqs);
        eqs += (d * d) as usize;
    }
    let mut m = FqMatrix::zeros(eqs, unknowns);
    for (ai, (a, xa)) in quiver.arrows().iter().zip(x.maps()).enumerate() {
        let (nt, nh) = (dims[a.tail] as usize, dims[a.head] as usize);
        let yo = y_off[ai];
        // head: (x y)[r, c] = Σ_k x[r, k] y[k, c]
        for r in 0..nh {
            for c in 0..nh {
                let row = v_off[a.head] + r * nh + c;
                for k in 0..nt {
                    let col = yo + k * nh + c;
                    m.set(row, col, f.add(m.get(row, col), xa.get(r, k)));
                }
            }
        }
        // tail: -(y x)[r, c] = -Σ_k y[r, k] x[k, c]
        for r in 0..nt {
            for c in 0..nt {
                let row = v_off[a.tail] + r * nt + c;
                for k in 0..nh {
                    let col = yo + r * nh + k;
                    m.set(row, col, f.sub(m.get(row, col), xa.get(k, c)));
                }
            }
        }
    }
    m
}

fn moment_rhs(dims: &DimVector, target: &[Elem]) -> Vec<Elem> {
    let mut b = Vec::new();
    for (&d, &l) in dims.entries().iter().zip(target) {
        let d = d as usize;
        for r in 0..d {
            for c in 0..d {
                b.push(if r == c { l } else { 0 });
            }
        }
    }
    b
}

/// `|μ^{-1}(Λ)(F_q)|`: for each `x ∈ Rep(Q, α)(F_q)` the equation is affine
/// in `y`, contributing `q^nullity` when consistent.
pub fn moment_fiber_count(eq: &MomentEquation, field: &FiniteField, cfg: &EnumConfig) -> Result<BigUint> {
    let sweep = RepSweep::new(eq.quiver, field, &eq.dims, cfg.reduce)?;
    let b = moment_rhs(&eq.dims, &eq.target);
    let (_, unknowns) = y_layout(eq.quiver, &eq.dims);
    let q = BigUint::from(field.order());
    let powers: Vec<BigUint> = (0..=unknowns as u32).map(|e| q.pow(e)).collect();
    sweep.weighted_sum(cfg, |x| {
        let sol = solve_affine(&moment_matrix(x), &b, field, false);
        Ok(if sol.consistent { powers[sol.nullity].clone() } else { BigUint::zero() })
    })
}

/// Checks that reducing `λ` mod `p` keeps it nonzero on every proper
/// subvector of `α`.
pub fn check_admissible(lambda: &WeightVector, a: &DimVector, p: u32) -> Result<()> {
    for b in a.proper_subvectors() {
        let v = weight_dot(lambda, &b)?;
        if v.rem_euclid(p as i64) == 0 {
            return Err(Error::BadPrime { p, value: v });
        }
    }
    Ok(())
}

pub fn is_admissible(lambda: &WeightVector, a: &DimVector, p: u32) -> Result<bool> {
    match check_admissible(lambda, a, p) {
        Ok(()) => Ok(true),
        Err(Error::BadPrime { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Prime powers `p^k` with `p ≤ max_prime` prime, `k ≤ 4` and `p`
/// admissible, in increasing order.
pub fn admissible_prime_powers(lambda: &WeightVector, a: &DimVector, max_prime: u32) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for p in (2..=max_prime).filter(|&p| is_prime(p)) {
        if !is_admissible(lambda, a, p)? {
            continue;
        }
        let mut q = 1u64;
        for k in 1..=4 {
            q *= p as u64;
            if FiniteField::is_supported(p, k) {
                out.push(q as u32);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn check_generic(lambda: &WeightVector, a: &DimVector) -> Result<()> {
    if !is_generic(lambda, a)? {
        return Err(Error::NotGeneric { weight: lambda.0.clone(), alpha: a.0.clone() });
    }
    Ok(())
}

fn exact_div(num: BigUint, den: BigUint, context: &'static str) -> Result<BigUint> {
    let (quo, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::InexactDivision { context, numerator: num, denominator: den });
    }
    Ok(quo)
}

/// `|X(F_q)| = |μ^{-1}(λ)(F_q)| / |G(α)(F_q)|` for generic `λ`.
pub fn x_point_count(
    quiver: &Quiver,
    a: &DimVector,
    lambda: &WeightVector,
    field: &FiniteField,
    cfg: &EnumConfig,
) -> Result<BigUint> {
    quiver.check_dims(a)?;
    check_generic(lambda, a)?;
    check_admissible(lambda, a, field.characteristic())?;
    let eq = MomentEquation::new(quiver, a.clone(), lambda, field)?;
    let fiber = moment_fiber_count(&eq, field, cfg)?;
    exact_div(fiber, g_alpha_order(a, field)?, "moment fiber over G(alpha)")
}

/// `q^{-d} |X(F_q)|`, the value of the Kac polynomial at `q`.
pub fn kac_value(
    quiver: &Quiver,
    a: &DimVector,
    lambda: &WeightVector,
    field: &FiniteField,
    cfg: &EnumConfig,
) -> Result<BigUint> {
    let x = x_point_count(quiver, a, lambda, field, cfg)?;
    let d = kac_degree(quiver, a)?;
    let q = BigUint::from(field.order());
    if d >= 0 {
        exact_div(x, q.pow(d as u32), "point count over q^d")
    } else {
        Ok(x * q.pow(d.unsigned_abs() as u32))
    }
}

/// A Kac polynomial together with the data used to obtain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KacInterpolation {
    pub polynomial: KacPolynomial,
    pub weight: WeightVector,
    /// `(q, a_α(q))` for every evaluated sample; the last one is the
    /// overdetermination check.
    pub samples: Vec<(u32, BigInt)>,
}

/// Interpolates the Kac polynomial of an indivisible `α` using the smallest
/// generic weight.
pub fn kac_polynomial(quiver: &Quiver, a: &DimVector, cfg: &EnumConfig, max_prime: u32) -> Result<KacInterpolation> {
    if !is_indivisible(a)? {
        return Err(Error::Divisible(a.0.clone()));
    }
    let lambda = find_generic_weight(a)?;
    kac_polynomial_with_weight(quiver, a, &lambda, cfg, max_prime)
}

/// Evaluates `kac_value` at the `d + 2` smallest admissible prime powers,
/// fits a polynomial of degree `≤ d` through the first `d + 1` over the
/// rationals and checks integrality and the last sample. On a mismatch the
/// window moves up by one prime power, at most [`MAX_RETRIES`] times.
pub fn kac_polynomial_with_weight(
    quiver: &Quiver,
    a: &DimVector,
    lambda: &WeightVector,
    cfg: &EnumConfig,
    max_prime: u32,
) -> Result<KacInterpolation> {
    quiver.check_dims(a)?;
    if !is_indivisible(a)? {
        return Err(Error::Divisible(a.0.clone()));
    }
    check_generic(lambda, a)?;
    let d = kac_degree(quiver, a)?;
    let fit = d.max(0) as usize + 1;
    let needed = fit + 1;
    let candidates = admissible_prime_powers(lambda, a, max_prime)?;
    if candidates.len() < needed {
        return Err(Error::NoAdmissiblePrimes { max_prime, found: candidates.len(), needed });
    }

    let mut values: Vec<Option<BigInt>> = vec![None; candidates.len()];
    let mut last_failure = String::new();
    for shift in 0..=MAX_RETRIES {
        if shift + needed > candidates.len() {
            break;
        }
        let window = shift..shift + needed;
        for i in window.clone() {
            if values[i].is_none() {
                let field = FiniteField::of_order(candidates[i])?;
                values[i] = Some(BigInt::from(kac_value(quiver, a, lambda, &field, cfg)?));
            }
        }
        let samples: Vec<(u32, BigInt)> =
            window.map(|i| (candidates[i], values[i].clone().expect("evaluated above"))).collect();
        let points: Vec<(BigInt, BigInt)> = samples[..fit].iter().map(|(q, v)| (BigInt::from(*q), v.clone())).collect();
        let Some(coeffs) = integral_coefficients(&lagrange_interpolate(&points)?) else {
            last_failure = format!("non-integral fit through q = {:?}", &candidates[shift..shift + fit]);
            continue;
        };
        let poly = KacPolynomial::new(coeffs, d);
        let (check_q, check_v) = samples.last().expect("window is nonempty");
        let predicted = poly.eval(&BigInt::from(*check_q));
        if predicted != *check_v {
            last_failure = format!("fit predicts {predicted} at q = {check_q}, counted {check_v}");
            continue;
        }
        return Ok(KacInterpolation { polynomial: poly, weight: lambda.clone(), samples });
    }
    Err(Error::Interpolation(last_failure))
}

fn king_values(v: &Representation, lambda: &WeightVector, cfg: &EnumConfig) -> Result<Vec<(i64, bool)>> {
    let dims = v.dims();
    if dims.is_zero() {
        return Err(Error::ZeroVector);
    }
    let total = weight_dot(lambda, dims)?;
    if total != 0 {
        return Err(Error::Unbalanced { value: total });
    }
    subrepresentations(v, cfg)?
        .into_iter()
        .map(|w| {
            let wd = w.dims();
            let trivial = wd.is_zero() || wd == *dims;
            Ok((weight_dot(lambda, &wd)?, trivial))
        })
        .collect()
}

/// `λ · dim W ≥ 0` for every subrepresentation `W` of `v`.
pub fn king_semistable(v: &Representation, lambda: &WeightVector, cfg: &EnumConfig) -> Result<bool> {
    Ok(king_values(v, lambda, cfg)?.iter().all(|&(x, _)| x >= 0))
}

/// `λ · dim W > 0` for every proper nonzero subrepresentation `W` of `v`.
pub fn king_stable(v: &Representation, lambda: &WeightVector, cfg: &EnumConfig) -> Result<bool> {
    Ok(king_values(v, lambda, cfg)?.iter().all(|&(x, trivial)| trivial || x > 0))
}

/// Splits the unknown vector into one matrix per reversed arrow.
fn y_maps(quiver: &Quiver, dims: &DimVector, y: &[Elem]) -> Vec<FqMatrix> {
    let (offsets, _) = y_layout(quiver, dims);
    quiver
        .arrows()
        .iter()
        .zip(offsets)
        .map(|(a, o)| {
            let (r, c) = (dims[a.tail] as usize, dims[a.head] as usize);
            FqMatrix::from_data(r, c, y[o..o + r * c].to_vec())
        })
        .collect()
}

/// `|X_s(F_q)|`: `λ`-stable points of `μ^{-1}(0)(F_q)` divided by
/// `|G(α)(F_q)|`. The doubled space must fit in the budget.
pub fn xs_point_count(
    quiver: &Quiver,
    a: &DimVector,
    lambda: &WeightVector,
    field: &FiniteField,
    cfg: &EnumConfig,
) -> Result<BigUint> {
    quiver.check_dims(a)?;
    check_generic(lambda, a)?;
    let (_, unknowns) = y_layout(quiver, a);
    let q = field.order();
    cfg.check("doubled representations", &BigUint::from(q).pow(2 * unknowns as u32))?;
    let double = quiver.double();
    let sweep = RepSweep::new(quiver, field, a, cfg.reduce)?;
    let zero_rhs = moment_rhs(a, &vec![0; quiver.vertex_count()]);
    let stable = sweep.weighted_sum(cfg, |x| {
        let sol = solve_affine(&moment_matrix(x), &zero_rhs, field, true);
        let combos = (q as u64).pow(sol.nullity as u32);
        let mut count = 0u64;
        for mut idx in 0..combos {
            let mut y = vec![0; unknowns];
            for k in &sol.kernel {
                let c = (idx % q as u64) as Elem;
                idx /= q as u64;
                if c == 0 {
                    continue;
                }
                for (yj, &kj) in y.iter_mut().zip(k) {
                    *yj = field.add(*yj, field.mul(c, kj));
                }
            }
            let mut maps = x.maps().to_vec();
            maps.extend(y_maps(quiver, a, &y));
            let point = Representation::new(&double, field, a.clone(), maps)?;
            if king_stable(&point, lambda, cfg)? {
                count += 1;
            }
        }
        Ok(BigUint::from(count))
    })?;
    exact_div(stable, g_alpha_order(a, field)?, "stable points over G(alpha)")
}

/// `|X(F_q)|` and `|X_s(F_q)|`, which agree for generic `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaIndependence {
    pub x_count: BigUint,
    pub xs_count: BigUint,
}

impl LambdaIndependence {
    pub fn holds(&self) -> bool {
        self.x_count == self.xs_count
    }
}

pub fn verify_lambda_independence(
    quiver: &Quiver,
    a: &DimVector,
    lambda: &WeightVector,
    field: &FiniteField,
    cfg: &EnumConfig,
) -> Result<LambdaIndependence> {
    Ok(LambdaIndependence {
        x_count: x_point_count(quiver, a, lambda, field, cfg)?,
        xs_count: xs_point_count(quiver, a, lambda, field, cfg)?,
    })
}

/// A point of `μ^{-1}(λ)` over `x`, if the fiber above `x` is nonempty.
pub fn fiber_point<'a>(
    double: &'a Quiver,
    x: &Representation,
    eq: &MomentEquation,
    field: &'a FiniteField,
) -> Result<Option<Representation<'a>>> {
    let b = moment_rhs(&eq.dims, &eq.target);
    let sol = solve_affine(&moment_matrix(x), &b, field, false);
    let Some(y) = sol.particular else {
        return Ok(None);
    };
    let mut maps = x.maps().to_vec();
    maps.extend(y_maps(eq.quiver, &eq.dims, &y));
    Representation::new(double, field, eq.dims.clone(), maps).map(Some)
}
