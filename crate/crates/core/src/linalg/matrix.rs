use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::{inv_mod, mul_mod, residue, FieldSpec, Scalar};
use super::LinalgError;

/// Dense row-major matrix with exact entries. A map `V -> W` is stored as a `dim W x dim V`
/// matrix acting on column vectors. Zero rows or zero columns are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` disambiguates the zero-row case.
    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self, LinalgError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged { row: i, expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&v| Scalar::from_integer(BigInt::from(v))).collect(),
        }
    }

    /// A `1 x 1` matrix holding `v`.
    pub fn scalar(v: i64) -> Self {
        Matrix::from_i64(1, 1, &[v])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows of exact rational strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(super::field::format_rational).collect()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.data[i * block.cols + j].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut b = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.data[i * cols + j] = self.data[(r0 + i) * self.cols + c0 + j].clone();
            }
        }
        b
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
}

/// Minimal arithmetic needed by row reduction, so one elimination routine serves both fields.
trait Ops {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct QOps;

impl Ops for QOps {
    type E = Scalar;
    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn one(&self) -> Scalar {
        Scalar::one()
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a - b
    }
    fn inv(&self, a: &Scalar) -> Scalar {
        a.recip()
    }
}

struct POps(u64);

impl Ops for POps {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<O: Ops>(ops: &O, m: &mut [Vec<O::E>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !ops.is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        let inv = ops.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = ops.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !ops.is_zero(&row[c]) {
                let f = row[c].clone();
                for (x, pv) in row.iter_mut().zip(&pivot_row) {
                    *x = ops.sub(x, &ops.mul(&f, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref<O: Ops>(ops: &O, m: &[Vec<O::E>], cols: usize, pivots: &[usize]) -> Vec<Vec<O::E>> {
    // Free variables are the non-pivot columns; one basis vector per free column.
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ops.zero(); cols];
        v[free] = ops.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = ops.sub(&ops.zero(), &m[r][free]);
        }
        basis.push(v);
    }
    basis
}

fn to_residues(m: &Matrix) -> Vec<Vec<u64>> {
    (0..m.rows).map(|i| m.row(i).iter().map(residue).collect()).collect()
}

fn from_residue(v: u64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Rank over Q by fraction-free integer elimination: rows are scaled to primitive integer
/// vectors and each elimination step cross-multiplies, then divides out the row content.
pub fn rank_fraction_free(m: &Matrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..m.cols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            let pc = pivot[c].clone();
            let mut content = BigInt::zero();
            for (x, pv) in row.iter_mut().zip(pivot.iter()) {
                *x = &pc * &*x - &f * pv;
                content = content.gcd(x);
            }
            if !content.is_zero() && !content.is_one() {
                for x in row.iter_mut() {
                    *x = &*x / &content;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl FieldSpec {
    fn check_entries(&self, m: &Matrix) -> bool {
        match self {
            FieldSpec::Rationals => true,
            FieldSpec::Prime(p) => m.data.iter().all(|x| {
                x.is_integer() && *x >= Scalar::zero() && x.numer() < &BigInt::from(*p)
            }),
        }
    }

    /// Normalizes every entry into this field's canonical form.
    pub fn normalize_matrix(&self, m: &Matrix) -> Result<Matrix, LinalgError> {
        let data = m.data.iter().map(|x| self.normalize(x)).collect::<Result<_, _>>()?;
        Ok(Matrix { rows: m.rows, cols: m.cols, data })
    }

    /// `a * b`, i.e. the composite "first `b`, then `a`".
    pub fn mul(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
        if a.cols != b.rows {
            return Err(LinalgError::ShapeMismatch { op: "compose", left: a.shape(), right: b.shape() });
        }
        debug_assert!(self.check_entries(a) && self.check_entries(b));
        let mut out = Matrix::zeros(a.rows, b.cols);
        match *self {
            FieldSpec::Rationals => {
                for i in 0..a.rows {
                    for k in 0..a.cols {
                        let aik = &a.data[i * a.cols + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..b.cols {
                            let bkj = &b.data[k * b.cols + j];
                            if !bkj.is_zero() {
                                out.data[i * b.cols + j] += aik * bkj;
                            }
                        }
                    }
                }
            }
            FieldSpec::Prime(p) => {
                let (ar, br) = (to_residues(a), to_residues(b));
                for i in 0..a.rows {
                    for j in 0..b.cols {
                        let mut acc: u128 = 0;
                        for k in 0..a.cols {
                            acc += ar[i][k] as u128 * br[k][j] as u128;
                        }
                        out.data[i * b.cols + j] = from_residue((acc % p as u128) as u64);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Composite `a ∘ b` (apply `b` first).
    pub fn compose(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
        self.mul(a, b)
    }

    pub fn add(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
        if a.shape() != b.shape() {
            return Err(LinalgError::ShapeMismatch { op: "add", left: a.shape(), right: b.shape() });
        }
        let data = a.data.iter().zip(&b.data).map(|(x, y)| self.add_scalar(x, y)).collect();
        Ok(Matrix { rows: a.rows, cols: a.cols, data })
    }

    pub fn sub(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(a, &self.negate(b))
    }

    pub fn negate(&self, a: &Matrix) -> Matrix {
        Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().map(|x| self.neg_scalar(x)).collect() }
    }

    /// Multiplies by a sign `±1`.
    pub fn signed(&self, a: &Matrix, sign: i8) -> Matrix {
        if sign >= 0 {
            a.clone()
        } else {
            self.negate(a)
        }
    }

    pub fn scale(&self, a: &Matrix, c: &Scalar) -> Matrix {
        Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().map(|x| self.mul_scalar(x, c)).collect() }
    }

    /// Kronecker (tensor) product.
    pub fn kron(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(a.rows * b.rows, a.cols * b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                let aij = a.get(i, j);
                if aij.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        out.set(i * b.rows + k, j * b.cols + l, self.mul_scalar(aij, b.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self, m: &Matrix) -> usize {
        match *self {
            FieldSpec::Rationals => rank_fraction_free(m),
            FieldSpec::Prime(p) => {
                let mut rows = to_residues(m);
                rref(&POps(p), &mut rows, m.cols).len()
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, m: &Matrix) -> (Matrix, Vec<usize>) {
        match *self {
            FieldSpec::Rationals => {
                let mut rows = m.row_vecs();
                let piv = rref(&QOps, &mut rows, m.cols);
                (Matrix::from_rows(rows, m.cols).expect("shape preserved"), piv)
            }
            FieldSpec::Prime(p) => {
                let mut rows = to_residues(m);
                let piv = rref(&POps(p), &mut rows, m.cols);
                let rows = rows.into_iter().map(|r| r.into_iter().map(from_residue).collect()).collect();
                (Matrix::from_rows(rows, m.cols).expect("shape preserved"), piv)
            }
        }
    }

    /// Columns spanning the kernel: a `cols x (cols - rank)` matrix.
    pub fn kernel_basis(&self, m: &Matrix) -> Matrix {
        let basis: Vec<Vec<Scalar>> = match *self {
            FieldSpec::Rationals => {
                let mut rows = m.row_vecs();
                let piv = rref(&QOps, &mut rows, m.cols);
                kernel_from_rref(&QOps, &rows, m.cols, &piv)
            }
            FieldSpec::Prime(p) => {
                let ops = POps(p);
                let mut rows = to_residues(m);
                let piv = rref(&ops, &mut rows, m.cols);
                kernel_from_rref(&ops, &rows, m.cols, &piv)
                    .into_iter()
                    .map(|v| v.into_iter().map(from_residue).collect())
                    .collect()
            }
        };
        let k = basis.len();
        let mut out = Matrix::zeros(m.cols, k);
        for (j, v) in basis.into_iter().enumerate() {
            for (i, x) in v.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    /// Square and of full rank. The `0 x 0` matrix is invertible.
    pub fn is_invertible(&self, m: &Matrix) -> bool {
        m.is_square() && self.rank(m) == m.rows
    }

    pub fn inverse(&self, m: &Matrix) -> Option<Matrix> {
        if !m.is_square() {
            return None;
        }
        self.solve(m, &Matrix::identity(m.rows))
    }

    /// Solves `a * x = b` exactly; `None` when the system is inconsistent. When the solution
    /// is not unique, free variables are set to zero.
    pub fn solve(&self, a: &Matrix, b: &Matrix) -> Option<Matrix> {
        assert_eq!(a.rows, b.rows, "solve: row counts differ");
        let n = a.cols;
        let mut aug = Matrix::zeros(a.rows, n + b.cols);
        aug.put_block(0, 0, a);
        aug.put_block(0, n, b);
        let (red, piv) = self.rref(&aug);
        if piv.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = Matrix::zeros(n, b.cols);
        for (r, &pc) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, red.get(r, n + j).clone());
            }
        }
        Some(x)
    }

    /// Rows spanning the annihilator of the column space: a quotient map `W -> W / im(m)`.
    pub fn cokernel_projection(&self, m: &Matrix) -> Matrix {
        self.kernel_basis(&m.transpose()).transpose()
    }

    /// Columns of `m` at the pivot positions: a basis of the image.
    pub fn image_basis(&self, m: &Matrix) -> Matrix {
        let (_, piv) = self.rref(m);
        let mut out = Matrix::zeros(m.rows, piv.len());
        for (j, &c) in piv.iter().enumerate() {
            for i in 0..m.rows {
                out.set(i, j, m.get(i, c).clone());
            }
        }
        out
    }

    pub fn determinant(&self, m: &Matrix) -> Option<Scalar> {
        if !m.is_square() {
            return None;
        }
        let n = m.rows;
        let mut rows = m.row_vecs();
        let mut det = self.from_i64(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
                return Some(self.from_i64(0));
            };
            if p != c {
                rows.swap(p, c);
                det = self.neg_scalar(&det);
            }
            let pivot = rows[c][c].clone();
            det = self.mul_scalar(&det, &pivot);
            let inv = match *self {
                FieldSpec::Rationals => pivot.recip(),
                FieldSpec::Prime(p) => from_residue(inv_mod(residue(&pivot), p)),
            };
            let prow = rows[c].clone();
            for row in rows.iter_mut().skip(c + 1) {
                if row[c].is_zero() {
                    continue;
                }
                let f = self.mul_scalar(&row[c], &inv);
                for (x, pv) in row.iter_mut().zip(&prow) {
                    *x = self.add_scalar(x, &self.neg_scalar(&self.mul_scalar(&f, pv)));
                }
            }
        }
        Some(det)
    }
}
