use super::{Elem, FiniteField};

/// Dense row-major matrix over a [`FiniteField`]. The field is passed to
/// each operation rather than stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has wrong length");
        FqMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| {
            assert_eq!(r.len(), cols, "ragged rows");
            r.iter().copied()
        });
        FqMatrix { rows: rows.len(), cols, data: data.collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix, f: &FiniteField) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem], f: &FiniteField) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    pub fn add(&self, other: &FqMatrix, f: &FiniteField) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Elem, f: &FiniteField) -> FqMatrix {
        let data = self.data.iter().map(|&a| f.mul(c, a)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Reduces to reduced row echelon form in place and returns the pivot
    /// columns.
    pub fn rref(&mut self, f: &FiniteField) -> Vec<usize> {
        self.rref_limited(f, self.cols)
    }

    /// Row reduction that only pivots in the first `pivot_cols` columns.
    fn rref_limited(&mut self, f: &FiniteField, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            if inv != 1 {
                for c in col..self.cols {
                    let v = f.mul(inv, self.get(row, c));
                    self.set(row, c, v);
                }
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for c in col..self.cols {
                    let v = f.add(self.get(r, c), f.mul(nf, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.clone().rref(f).len()
    }

    pub fn is_invertible(&self, f: &FiniteField) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    /// Basis of `{v : self v = 0}`, one vector per free column, in order of
    /// the free columns.
    pub fn nullspace(&self, f: &FiniteField) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        free_basis(&m, &pivots, self.cols, f)
    }
}

fn free_basis(reduced: &FqMatrix, pivots: &[usize], n: usize, f: &FiniteField) -> Vec<Vec<Elem>> {
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(reduced.get(r, free));
            }
            v
        })
        .collect()
}

/// Outcome of Gaussian elimination on `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub consistent: bool,
    /// A solution with all free variables zero, when consistent.
    pub particular: Option<Vec<Elem>>,
    /// Dimension of the kernel of `A`; a consistent system has
    /// `q^nullity` solutions.
    pub nullity: usize,
    /// Kernel basis, populated only when requested.
    pub kernel: Vec<Vec<Elem>>,
}

/// Solves `A x = b`. When `want_kernel` is set the kernel basis is returned
/// as well.
pub fn solve_affine(a: &FqMatrix, b: &[Elem], f: &FiniteField, want_kernel: bool) -> AffineSolution {
    assert_eq!(a.rows, b.len(), "right-hand side has wrong length");
    let n = a.cols;
    let mut aug = FqMatrix::zeros(a.rows, n + 1);
    for (r, &br) in b.iter().enumerate() {
        aug.data[r * (n + 1)..r * (n + 1) + n].copy_from_slice(a.row(r));
        aug.set(r, n, br);
    }
    let pivots = aug.rref_limited(f, n);
    let rank = pivots.len();
    let consistent = (rank..a.rows).all(|r| aug.get(r, n) == 0);
    let particular = consistent.then(|| {
        let mut x = vec![0; n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, n);
        }
        x
    });
    let kernel = if want_kernel { free_basis(&aug, &pivots, n, f) } else { Vec::new() };
    AffineSolution { consistent, particular, nullity: n - rank, kernel }
}
