//! Exhaustive sweeps over `Rep(Q, α)(F_q)`, optionally collapsed along
//! partial group orbits, with deterministic partitioned summation.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::Representation;
use crate::error::{Error, Result};
use crate::ffield::{rank_count, FiniteField, FqMatrix};
use crate::quiver::{DimVector, Quiver};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Enumeration limits and parallelism shared by every exhaustive count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Largest number of items any single enumeration may visit.
    pub budget: u64,
    /// Worker threads used for partitioned sums; results do not depend on it.
    pub workers: usize,
    /// Collapse sums of `G(α)`-invariant functions along partial orbits.
    pub reduce: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { budget: DEFAULT_BUDGET, workers: 1, reduce: true }
    }
}

impl EnumConfig {
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn plain(mut self) -> Self {
        self.reduce = false;
        self
    }

    pub fn check(&self, what: &'static str, required: &BigUint) -> Result<()> {
        if *required > BigUint::from(self.budget) {
            Err(Error::BudgetExceeded { what, required: required.clone(), budget: self.budget })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone)]
enum ArrowChoices {
    /// Every `rows x cols` matrix, weight one.
    Full { rows: usize, cols: usize },
    /// Orbit representatives with their orbit sizes.
    Listed(Vec<(FqMatrix, BigUint)>),
}

impl ArrowChoices {
    fn len(&self, q: u32) -> BigUint {
        match self {
            ArrowChoices::Full { rows, cols } => BigUint::from(q).pow((rows * cols) as u32),
            ArrowChoices::Listed(v) => BigUint::from(v.len()),
        }
    }
}

/// A weighted listing of representations of one dimension vector.
///
/// The plain sweep visits every point of `Rep(Q, α)(F_q)` exactly once with
/// weight one. The orbit-reduced sweep replaces the largest arrow by its
/// rank normal forms (using `GL` at both of its endpoints) and every arrow
/// hanging off a pendant vertex by column- or row-space representatives
/// (using `GL` at that vertex), each weighted by its orbit size. Weighted
/// sums agree for any function invariant under `G(α)`.
#[derive(Debug, Clone)]
pub struct RepSweep<'a> {
    quiver: &'a Quiver,
    field: &'a FiniteField,
    dims: DimVector,
    choices: Vec<ArrowChoices>,
    total: BigUint,
}

impl<'a> RepSweep<'a> {
    pub fn plain(quiver: &'a Quiver, field: &'a FiniteField, dims: &DimVector) -> Result<Self> {
        quiver.check_dims(dims)?;
        let choices = quiver
            .arrows()
            .iter()
            .map(|a| ArrowChoices::Full { rows: dims[a.head] as usize, cols: dims[a.tail] as usize })
            .collect();
        Ok(Self::from_choices(quiver, field, dims, choices))
    }

    pub fn orbit_reduced(quiver: &'a Quiver, field: &'a FiniteField, dims: &DimVector) -> Result<Self> {
        quiver.check_dims(dims)?;
        let q = field.order();
        let arrows = quiver.arrows();
        let shape = |i: usize| (dims[arrows[i].head] as usize, dims[arrows[i].tail] as usize);
        let mut choices: Vec<ArrowChoices> =
            (0..arrows.len()).map(|i| ArrowChoices::Full { rows: shape(i).0, cols: shape(i).1 }).collect();
        let Some(pivot) = (0..arrows.len())
            .filter(|&i| shape(i).0 * shape(i).1 > 0)
            .max_by_key(|&i| (shape(i).0 * shape(i).1, std::cmp::Reverse(i)))
        else {
            return Ok(Self::from_choices(quiver, field, dims, choices));
        };
        let (m, n) = shape(pivot);
        choices[pivot] = ArrowChoices::Listed(
            (0..=m.min(n))
                .map(|r| {
                    let mut x = FqMatrix::zeros(m, n);
                    for i in 0..r {
                        x.set(i, i, 1);
                    }
                    (x, rank_count(m as u32, n as u32, r as u32, q))
                })
                .collect(),
        );
        let mut used = vec![false; quiver.vertex_count()];
        used[arrows[pivot].head] = true;
        used[arrows[pivot].tail] = true;
        for (i, arrow) in arrows.iter().enumerate() {
            if i == pivot {
                continue;
            }
            let (rows, cols) = shape(i);
            if rows * cols == 0 {
                continue;
            }
            let pendant = |v: usize| !used[v] && quiver.degree(v) == 1;
            if pendant(arrow.tail) {
                // x ↦ x g^{-1}: orbits are column spaces in F^rows
                let v_dim = cols as u32;
                let list = super::all_subspaces(rows, field)
                    .into_iter()
                    .filter(|w| w.dim() <= cols)
                    .map(|w| {
                        let mut x = FqMatrix::zeros(rows, cols);
                        for (c, b) in (0..w.dim()).map(|c| (c, w.basis().row(c))) {
                            for (r, &e) in b.iter().enumerate() {
                                x.set(r, c, e);
                            }
                        }
                        (x, surjection_count(v_dim, w.dim() as u32, q))
                    })
                    .collect();
                choices[i] = ArrowChoices::Listed(list);
                used[arrow.tail] = true;
            } else if pendant(arrow.head) {
                // x ↦ g x: orbits are row spaces in F^cols
                let v_dim = rows as u32;
                let list = super::all_subspaces(cols, field)
                    .into_iter()
                    .filter(|w| w.dim() <= rows)
                    .map(|w| {
                        let mut x = FqMatrix::zeros(rows, cols);
                        for r in 0..w.dim() {
                            for (c, &e) in w.basis().row(r).iter().enumerate() {
                                x.set(r, c, e);
                            }
                        }
                        (x, surjection_count(v_dim, w.dim() as u32, q))
                    })
                    .collect();
                choices[i] = ArrowChoices::Listed(list);
                used[arrow.head] = true;
            }
        }
        Ok(Self::from_choices(quiver, field, dims, choices))
    }

    pub fn new(quiver: &'a Quiver, field: &'a FiniteField, dims: &DimVector, reduce: bool) -> Result<Self> {
        if reduce {
            Self::orbit_reduced(quiver, field, dims)
        } else {
            Self::plain(quiver, field, dims)
        }
    }

    fn from_choices(quiver: &'a Quiver, field: &'a FiniteField, dims: &DimVector, choices: Vec<ArrowChoices>) -> Self {
        let q = field.order();
        let total = choices.iter().fold(BigUint::one(), |acc, c| acc * c.len(q));
        RepSweep { quiver, field, dims: dims.clone(), choices, total }
    }

    /// Number of items visited.
    pub fn len(&self) -> &BigUint {
        &self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total.is_zero()
    }

    /// Sum of all weights, i.e. `|Rep(Q, α)(F_q)|`.
    pub fn total_weight(&self) -> BigUint {
        let q = self.field.order();
        self.choices
            .iter()
            .map(|c| match c {
                ArrowChoices::Full { .. } => c.len(q),
                ArrowChoices::Listed(v) => v.iter().map(|(_, w)| w.clone()).sum(),
            })
            .product()
    }

    fn checked_len(&self, budget: &EnumConfig, what: &'static str) -> Result<u64> {
        budget.check(what, &self.total)?;
        Ok(self.total.to_u64().expect("bounded by budget"))
    }

    /// Item `index` with its weight.
    pub fn get(&self, mut index: u64) -> (Representation<'a>, BigUint) {
        let q = self.field.order() as u64;
        let mut maps = vec![FqMatrix::zeros(0, 0); self.choices.len()];
        let mut weight = BigUint::one();
        for (i, choice) in self.choices.iter().enumerate().rev() {
            match choice {
                ArrowChoices::Full { rows, cols } => {
                    let n = rows * cols;
                    let mut data = vec![0; n];
                    for slot in data.iter_mut().rev() {
                        *slot = (index % q) as u32;
                        index /= q;
                    }
                    maps[i] = FqMatrix::from_data(*rows, *cols, data);
                }
                ArrowChoices::Listed(list) => {
                    let len = list.len() as u64;
                    let (x, w) = &list[(index % len) as usize];
                    index /= len;
                    maps[i] = x.clone();
                    if !w.is_one() {
                        weight *= w;
                    }
                }
            }
        }
        let rep = Representation { quiver: self.quiver, field: self.field, dims: self.dims.clone(), maps };
        (rep, weight)
    }

    /// Iterates all items in index order after checking the budget.
    pub fn iter(&self, cfg: &EnumConfig) -> Result<impl Iterator<Item = (Representation<'a>, BigUint)> + '_> {
        let n = self.checked_len(cfg, "representations")?;
        Ok((0..n).map(move |i| self.get(i)))
    }

    /// `Σ weight · f(rep)`, partitioned into contiguous index ranges across
    /// `cfg.workers` threads. The result is independent of the partition;
    /// the first error in index-range order is returned.
    pub fn weighted_sum<F>(&self, cfg: &EnumConfig, f: F) -> Result<BigUint>
    where
        F: Fn(&Representation<'a>) -> Result<BigUint> + Sync,
    {
        let n = self.checked_len(cfg, "representations")?;
        let workers = (cfg.workers.max(1) as u64).min(n.max(1));
        let chunk = n.div_ceil(workers);
        let run = |lo: u64, hi: u64| -> Result<BigUint> {
            let mut acc = BigUint::zero();
            for i in lo..hi {
                let (rep, w) = self.get(i);
                let v = f(&rep)?;
                if v.is_zero() {
                    continue;
                }
                if w.is_one() {
                    acc += v;
                } else {
                    acc += v * w;
                }
            }
            Ok(acc)
        };
        if workers <= 1 {
            return run(0, n);
        }
        let partials: Vec<Result<BigUint>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (lo, hi) = ((w * chunk).min(n), ((w + 1) * chunk).min(n));
                    let run = &run;
                    s.spawn(move || run(lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        partials.into_iter().try_fold(BigUint::zero(), |acc, p| Ok(acc + p?))
    }
}

/// Surjective linear maps `F_q^n -> F_q^r`.
fn surjection_count(n: u32, r: u32, q: u32) -> BigUint {
    let qb = BigUint::from(q);
    (0..r).fold(BigUint::one(), |acc, i| acc * (qb.pow(n) - qb.pow(i)))
}

/// Every representation of dimension `dims` exactly once, in a fixed order.
pub fn enumerate_reps<'a>(
    quiver: &'a Quiver,
    field: &'a FiniteField,
    dims: &DimVector,
    cfg: &EnumConfig,
) -> Result<impl Iterator<Item = Representation<'a>>> {
    let sweep = RepSweep::plain(quiver, field, dims)?;
    let n = sweep.checked_len(cfg, "representations")?;
    Ok((0..n).map(move |i| sweep.get(i).0))
}
