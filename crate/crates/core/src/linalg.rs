//! Dense exact linear algebra over [`Field`].
//!
//! Row-vector convention throughout: linear maps act on the right
//! (u -> uF), so the image of a map is the row space of its matrix and
//! the kernel is the left kernel {x : xA = 0}.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "entry count mismatch");
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            field,
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(field, rows, cols, data)
    }

    /// Build from signed integer entries, reducing mod p into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            for &v in row {
                data.push(field.from_int(v));
            }
        }
        Matrix::new(field.clone(), r, c, data)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                format!("GF({})", self.field.q()),
                format!("GF({})", other.field.q()),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim("matrix add shapes differ"));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(Matrix::new(self.field.clone(), self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim("matrix sub shapes differ"));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(Matrix::new(self.field.clone(), self.rows, self.cols, data))
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.neg(a)).collect();
        Matrix::new(self.field.clone(), self.rows, self.cols, data)
    }

    pub fn scalar_mul(&self, c: Scalar) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix::new(self.field.clone(), self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let orow = &other.data[l * other.cols..(l + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    if b != 0 {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        Ok(Matrix::new(f.clone(), self.rows, other.cols, out))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Matrix::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut pivot = None;
            for i in r..m.rows {
                if m.get(i, c) != 0 {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j);
                    let b = m.get(p, j);
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
            for j in 0..m.cols {
                m.set(r, j, f.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis (rref rows) of {x : xA = 0}.
    pub fn left_kernel(&self) -> Matrix {
        // x A = 0  <=>  A^T x^T = 0; run elimination on A^T tracking row ops
        let at = self.transpose();
        let (rref, pivots) = at.rref();
        let _ = rref;
        // standard nullspace construction on A^T: free variables of A^T x = 0
        let n = self.rows; // number of unknowns
        let (m, piv) = at.rref();
        let free: Vec<usize> = (0..n).filter(|j| !piv.contains(j)).collect();
        let f = self.field.clone();
        let mut basis = Matrix::zero(f.clone(), free.len(), n);
        for (bi, &fv) in free.iter().enumerate() {
            basis.set(bi, fv, 1);
            for (ri, &pc) in piv.iter().enumerate() {
                // x_pc = -sum over free of m[ri][fv] * x_fv
                let v = f.neg(m.get(ri, fv));
                basis.set(bi, pc, v);
            }
        }
        let _ = pivots;
        let (canon, _) = basis.rref();
        canon.drop_zero_rows()
    }

    pub fn right_kernel(&self) -> Matrix {
        self.transpose().left_kernel()
    }

    fn drop_zero_rows(&self) -> Matrix {
        let mut rows = Vec::new();
        for i in 0..self.rows {
            if self.row(i).iter().any(|&x| x != 0) {
                rows.push(i);
            }
        }
        let mut out = Matrix::zero(self.field.clone(), rows.len(), self.cols);
        for (ni, &oi) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ni, j, self.get(oi, j));
            }
        }
        out
    }

    /// One solution of x A = b together with the left kernel, or None if
    /// the system is inconsistent.
    pub fn solve_left(&self, b: &[Scalar]) -> Result<Option<(Vec<Scalar>, Matrix)>> {
        if b.len() != self.cols {
            return Err(Error::dim("rhs length != cols"));
        }
        // x A = b <=> A^T x^T = b^T: eliminate on [A^T | b^T]
        let f = self.field.clone();
        let n = self.rows;
        let meq = self.cols;
        let mut aug = Matrix::zero(f.clone(), meq, n + 1);
        for i in 0..meq {
            for j in 0..n {
                aug.set(i, j, self.get(j, i));
            }
            aug.set(i, n, b[i]);
        }
        let (r, piv) = aug.rref();
        // inconsistent iff some pivot is in the rhs column
        if piv.contains(&n) {
            return Ok(None);
        }
        let mut x = vec![0u64; n];
        for (ri, &pc) in piv.iter().enumerate() {
            x[pc] = r.get(ri, n);
        }
        Ok(Some((x, self.left_kernel())))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let f = self.field.clone();
        let mut aug = Matrix::zero(f.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        let mut out = Matrix::zero(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zero(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut out = Matrix::zero(self.field.clone(), self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.get(i, j));
            }
        }
        out
    }

    /// Kronecker product; basis (i,j) flattened as i*other.rows-block order,
    /// matching row-vector tensor actions.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = self.field.clone();
        let mut out = Matrix::zero(f.clone(), self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        let v = f.mul(a, other.get(r, c));
                        out.set(i * other.rows + r, j * other.cols + c, v);
                    }
                }
            }
        }
        out
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let mut pivot = None;
            for i in c..n {
                if m.get(i, c) != 0 {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(p) = pivot else { return Ok(0) };
            if p != c {
                det = f.neg(det);
                for j in 0..n {
                    let a = m.get(c, j);
                    let b = m.get(p, j);
                    m.set(c, j, b);
                    m.set(p, j, a);
                }
            }
            let pv = m.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot nonzero");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial det(xI - A) via Hessenberg reduction.
    pub fn charpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = self.field.clone();
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(&f));
        }
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg with pivoting
        for j in 0..n.saturating_sub(2) {
            let mut pivot = None;
            for i in j + 1..n {
                if h.get(i, j) != 0 {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            if p != j + 1 {
                for c in 0..n {
                    let a = h.get(j + 1, c);
                    let b = h.get(p, c);
                    h.set(j + 1, c, b);
                    h.set(p, c, a);
                }
                for r in 0..n {
                    let a = h.get(r, j + 1);
                    let b = h.get(r, p);
                    h.set(r, j + 1, b);
                    h.set(r, p, a);
                }
            }
            let inv = f.inv(h.get(j + 1, j)).unwrap();
            for i in j + 2..n {
                let factor = f.mul(h.get(i, j), inv);
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(i, c), f.mul(factor, h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, j + 1), f.mul(factor, h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // charpoly recurrence on the Hessenberg form
        let mut ps: Vec<Poly> = vec![Poly::one(&f)];
        for i in 1..=n {
            // p_i = (x - h[i-1][i-1]) p_{i-1}
            //       - sum_{j=1}^{i-1} h[j-1][i-1] (prod_{m=j}^{i-2} h[m+1][m]) p_{j-1}
            let x_minus = Poly::from_coeffs(&f, vec![f.neg(h.get(i - 1, i - 1)), 1]);
            let mut p = ps[i - 1].mul(&x_minus, &f);
            let mut prod = f.one();
            for j in (1..i).rev() {
                // prod = product of subdiagonal entries h[l][l-1], l = j..i-1
                prod = f.mul(prod, h.get(j, j - 1));
                let coeff = f.mul(h.get(j - 1, i - 1), prod);
                if coeff != 0 {
                    p = p.sub(&ps[j - 1].scale(coeff, &f), &f);
                }
            }
            ps.push(p);
        }
        Ok(ps.pop().unwrap())
    }
}

/// A subspace of K^n in canonical reduced-echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Matrix,
}

impl Subspace {
    pub fn from_spanning(rows: &Matrix) -> Subspace {
        let (r, _) = rows.rref();
        Subspace {
            ambient: rows.cols,
            basis: r.drop_zero_rows(),
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(field, 0, ambient),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let f = &self.basis.field;
        let mut v = v.to_vec();
        for i in 0..self.basis.rows {
            let pivot = (0..self.ambient).find(|&j| self.basis.get(i, j) != 0);
            if let Some(p) = pivot {
                let c = v[p];
                if c != 0 {
                    for j in 0..self.ambient {
                        v[j] = f.sub(v[j], f.mul(c, self.basis.get(i, j)));
                    }
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.basis.rows).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_spanning(&self.basis.vstack(&other.basis))
    }

    /// Deterministic complement of `inner` within `self` (inner must be
    /// contained in self): extend a basis of inner greedily by rows of
    /// self's basis.
    pub fn complement_within(&self, inner: &Subspace) -> Subspace {
        assert_eq!(self.ambient, inner.ambient);
        let f = self.basis.field.clone();
        let mut acc = inner.basis.clone();
        let mut rank = acc.rank();
        let mut picked = Matrix::zero(f, 0, self.ambient);
        for i in 0..self.basis.rows {
            if rank == self.dim() {
                break;
            }
            let row = Matrix::new(
                self.basis.field.clone(),
                1,
                self.ambient,
                self.basis.row(i).to_vec(),
            );
            let trial = acc.vstack(&row);
            let trial_rank = trial.rank();
            if trial_rank > rank {
                acc = trial;
                rank = trial_rank;
                picked = picked.vstack(&row);
            }
        }
        Subspace::from_spanning(&picked)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // Zassenhaus: echelonize [U | U; W | 0], intersection read off the
        // rows with zero left half.
        let f = self.basis.field.clone();
        let n = self.ambient;
        let top = self.basis.hstack(&self.basis);
        let bottom = other
            .basis
            .hstack(&Matrix::zero(f.clone(), other.basis.rows, n));
        let stacked = top.vstack(&bottom);
        let (r, _) = stacked.rref();
        let mut rows = Vec::new();
        for i in 0..r.rows {
            let left_zero = (0..n).all(|j| r.get(i, j) == 0);
            let right_nonzero = (n..2 * n).any(|j| r.get(i, j) != 0);
            if left_zero && right_nonzero {
                rows.push((0..n).map(|j| r.get(i, n + j)).collect::<Vec<_>>());
            }
        }
        let mut m = Matrix::zero(f, rows.len(), n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Subspace::from_spanning(&m)
    }
}

/// Fitting decomposition of a square operator: the least n with
/// ker z^n + im z^n splitting the space, plus canonical bases of both parts.
pub fn fitting_split(z: &Matrix) -> Result<(u32, Subspace, Subspace)> {
    if !z.is_square() {
        return Err(Error::NotSquare {
            rows: z.rows,
            cols: z.cols,
        });
    }
    let n = z.rows;
    let mut power = Matrix::identity(z.field.clone(), n);
    let mut prev_rank = n;
    let mut exp = 0u32;
    loop {
        let next = power.mul(z)?;
        let next_rank = next.rank();
        if next_rank == prev_rank {
            break;
        }
        power = next;
        prev_rank = next_rank;
        exp += 1;
        if exp as usize > n {
            break;
        }
    }
    let ker = Subspace::from_spanning(&power.left_kernel());
    let im = Subspace::from_spanning(&power);
    Ok((exp, ker, im))
}
