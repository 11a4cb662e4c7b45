//! Matrix algebras, algebra closure, nilpotency witnesses, and unit
//! groups. Unit groups are exact by exhaustive enumeration at desk scale
//! (tier i); larger algebras fall back to a sampling estimate that is
//! flagged as Monte Carlo (tier ii).

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default element budget for exhaustive unit enumeration: q^dim <= 2^20.
pub const UNIT_ENUM_BUDGET: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    pub ambient_dim: usize,
    pub field: Field,
    /// Echelonized basis in flattened (row-major) coordinates.
    pub basis: Vec<Matrix>,
    pub unital: bool,
}

impl MatrixAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> u128 {
        (self.field.q() as u128).pow(self.dim() as u32)
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        let mut rows = flatten_all(&self.basis);
        rows.push(flatten(m));
        let stacked = rows_to_matrix(&self.field, rows, self.ambient_dim * self.ambient_dim);
        stacked.rank() == self.dim()
    }

    /// Materialize the element with the given coefficient vector.
    pub fn element(&self, coeffs: &[Scalar]) -> Matrix {
        let f = &self.field;
        let mut m = Matrix::zero(f.clone(), self.ambient_dim, self.ambient_dim);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for i in 0..self.ambient_dim {
                for j in 0..self.ambient_dim {
                    let v = f.add(m.get(i, j), f.mul(*c, b.get(i, j)));
                    m.set(i, j, v);
                }
            }
        }
        m
    }
}

pub fn flatten(m: &Matrix) -> Vec<Scalar> {
    m.entries().to_vec()
}

fn flatten_all(mats: &[Matrix]) -> Vec<Vec<Scalar>> {
    mats.iter().map(flatten).collect()
}

fn rows_to_matrix(field: &Field, rows: Vec<Vec<Scalar>>, width: usize) -> Matrix {
    let mut m = Matrix::zero(field.clone(), rows.len(), width);
    for (i, r) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// Echelonized basis of the span of the given matrices.
pub fn span_basis(field: &Field, n: usize, mats: &[Matrix]) -> Vec<Matrix> {
    if mats.is_empty() {
        return vec![];
    }
    let stacked = rows_to_matrix(field, flatten_all(mats), n * n);
    let (r, _) = stacked.rref();
    let mut out = Vec::new();
    for i in 0..r.rows {
        if r.row(i).iter().any(|&x| x != 0) {
            out.push(Matrix::new(field.clone(), n, n, r.row(i).to_vec()));
        }
    }
    out
}

/// Smallest multiplicatively closed subspace containing X; records whether
/// the identity lies in the span.
pub fn algebra_closure(x: &[Matrix]) -> Result<MatrixAlgebra> {
    let first = x.first().ok_or_else(|| Error::dim("empty generator set"))?;
    if !first.is_square() {
        return Err(Error::NotSquare {
            rows: first.rows,
            cols: first.cols,
        });
    }
    let n = first.rows;
    let field = first.field.clone();
    for m in x {
        if m.rows != n || m.cols != n {
            return Err(Error::dim("generators of unequal size"));
        }
    }
    let mut basis = span_basis(&field, n, x);
    loop {
        let mut new_mats = Vec::new();
        let dim = basis.len();
        for a in &basis {
            for b in &basis {
                new_mats.push(a.mul(b)?);
            }
        }
        let mut all = basis.clone();
        all.extend(new_mats);
        let next = span_basis(&field, n, &all);
        if next.len() == dim {
            basis = next;
            break;
        }
        basis = next;
    }
    let unital = if basis.is_empty() {
        false
    } else {
        let stacked = rows_to_matrix(&field, flatten_all(&basis), n * n);
        let id = Matrix::identity(field.clone(), n);
        let with_id = stacked.vstack(&rows_to_matrix(&field, vec![flatten(&id)], n * n));
        with_id.rank() == basis.len()
    };
    Ok(MatrixAlgebra {
        ambient_dim: n,
        field,
        basis,
        unital,
    })
}

#[derive(Debug, Clone)]
pub enum Nilpotency {
    Nilpotent,
    /// Indices into the generator list whose product is not nilpotent,
    /// together with the evaluated product.
    Witness(Vec<usize>, Matrix),
}

fn is_nilpotent(m: &Matrix) -> bool {
    let n = m.rows as u32;
    m.pow(n.max(1)).map(|p| p.is_zero()).unwrap_or(false)
}

/// Decide whether the algebra generated by X is nil; if not, produce a
/// word over X with non-nilpotent value. The nil decision is made by the
/// descending chain of power spaces; the witness search is breadth-first
/// over word values with a seeded random fallback, and every witness is
/// verified before it is returned.
pub fn nilpotency_witness(x: &[Matrix]) -> Result<Nilpotency> {
    let alg = algebra_closure(x)?;
    if alg.basis.is_empty() {
        return Ok(Nilpotency::Nilpotent);
    }
    let n = alg.ambient_dim;
    let field = alg.field.clone();
    // power spaces: S_1 = A, S_{i+1} = span(S_i * A)
    let mut power = alg.basis.clone();
    for _ in 0..n {
        if power.is_empty() {
            return Ok(Nilpotency::Nilpotent);
        }
        let mut prods = Vec::new();
        for s in &power {
            for b in &alg.basis {
                prods.push(s.mul(b)?);
            }
        }
        power = span_basis(&field, n, &prods);
    }
    if power.is_empty() {
        return Ok(Nilpotency::Nilpotent);
    }
    // not nil: find a witness word, BFS by length with value dedup
    let budget = 1usize << 16;
    let mut seen = std::collections::HashSet::new();
    let mut queue: std::collections::VecDeque<(Vec<usize>, Matrix)> = x
        .iter()
        .enumerate()
        .map(|(i, m)| (vec![i], m.clone()))
        .collect();
    while let Some((word, value)) = queue.pop_front() {
        if !is_nilpotent(&value) {
            return Ok(Nilpotency::Witness(word, value));
        }
        if seen.len() < budget && word.len() <= alg.dim() + 1 {
            for (i, g) in x.iter().enumerate() {
                let next = value.mul(g)?;
                if seen.insert(flatten(&next)) {
                    let mut w = word.clone();
                    w.push(i);
                    queue.push_back((w, next));
                }
            }
        }
    }
    // random fallback; a witness exists, keep sampling verified products
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a19);
    loop {
        let len = rng.gen_range(1..=alg.dim() + 1);
        let mut word = Vec::with_capacity(len);
        let mut value = Matrix::identity(field.clone(), n);
        for _ in 0..len {
            let i = rng.gen_range(0..x.len());
            word.push(i);
            value = value.mul(&x[i])?;
        }
        if !is_nilpotent(&value) {
            return Ok(Nilpotency::Witness(word, value));
        }
    }
}

#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub generators: Vec<Matrix>,
    pub order: u128,
    /// True when the order is a stabilized sampling estimate rather than
    /// an exhaustive count.
    pub monte_carlo: bool,
}

/// Mixed-radix odometer over coefficient vectors that maintains the
/// flattened span element incrementally. Stepping a digit adds the
/// corresponding basis row once; q consecutive additions cancel, so
/// carries need no subtraction.
pub struct CoeffOdometer {
    field: Field,
    basis: Vec<Vec<Scalar>>,
    digits: Vec<u64>,
    pub acc: Vec<Scalar>,
    exhausted: bool,
}

impl CoeffOdometer {
    pub fn new(field: Field, basis: Vec<Vec<Scalar>>) -> CoeffOdometer {
        let width = basis.first().map_or(0, |b| b.len());
        CoeffOdometer {
            field,
            digits: vec![0; basis.len()],
            acc: vec![0; width],
            basis,
            exhausted: false,
        }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Advance to the next coefficient vector; false when wrapped around.
    pub fn step(&mut self) -> bool {
        if self.basis.is_empty() {
            self.exhausted = true;
            return false;
        }
        let q = self.field.q();
        for j in 0..self.digits.len() {
            for (a, b) in self.acc.iter_mut().zip(&self.basis[j]) {
                *a = self.field.add(*a, *b);
            }
            self.digits[j] += 1;
            if self.digits[j] == q {
                self.digits[j] = 0;
            } else {
                return true;
            }
        }
        self.exhausted = true;
        false
    }
}

/// Exact unit group by exhaustive enumeration when q^dim fits the budget;
/// otherwise a Monte-Carlo estimate (flagged) built from 1 + radical and
/// stabilized random sampling.
pub fn unit_group(a: &MatrixAlgebra, budget: u128) -> Result<UnitGroup> {
    if !a.unital {
        return Err(Error::NotUnital);
    }
    let size = a.size();
    if size <= budget {
        let n = a.ambient_dim;
        let mut units = Vec::new();
        let mut odo = CoeffOdometer::new(a.field.clone(), a.basis.iter().map(flatten).collect());
        loop {
            let m = Matrix::new(a.field.clone(), n, n, odo.acc.clone());
            if m.is_invertible() {
                units.push(m);
            }
            if !odo.step() {
                break;
            }
        }
        let order = units.len() as u128;
        return Ok(UnitGroup {
            generators: units,
            order,
            monte_carlo: false,
        });
    }
    monte_carlo_units(a)
}

pub fn unit_count(a: &MatrixAlgebra, budget: u128) -> Result<u128> {
    if !a.unital {
        return Err(Error::NotUnital);
    }
    let size = a.size();
    if size > budget {
        return Err(Error::budget("unit enumeration", size, budget));
    }
    let n = a.ambient_dim;
    let mut count: u128 = 0;
    let mut odo = CoeffOdometer::new(a.field.clone(), a.basis.iter().map(flatten).collect());
    loop {
        let m = Matrix::new(a.field.clone(), n, n, odo.acc.clone());
        if m.is_invertible() {
            count += 1;
        }
        if !odo.step() {
            break;
        }
    }
    Ok(count)
}

fn monte_carlo_units(a: &MatrixAlgebra) -> Result<UnitGroup> {
    let n = a.ambient_dim;
    let f = a.field.clone();
    // radical candidate: kernel of the trace form Tr(ab), verified nil
    let dim = a.dim();
    let mut gram = Matrix::zero(f.clone(), dim, dim);
    for (i, bi) in a.basis.iter().enumerate() {
        for (j, bj) in a.basis.iter().enumerate() {
            let prod = bi.mul(bj)?;
            let mut tr = 0;
            for d in 0..n {
                tr = f.add(tr, prod.get(d, d));
            }
            gram.set(i, j, tr);
        }
    }
    let ker = gram.left_kernel();
    let mut radical: Vec<Matrix> = (0..ker.rows).map(|i| a.element(ker.row(i))).collect();
    let nil_ok = if radical.is_empty() {
        true
    } else {
        matches!(nilpotency_witness(&radical)?, Nilpotency::Nilpotent)
    };
    if !nil_ok {
        radical.clear();
    }
    let id = Matrix::identity(f.clone(), n);
    let mut gens: Vec<Matrix> = radical
        .iter()
        .map(|j| id.add(j).expect("same shape"))
        .collect();
    // stabilized random sampling for units outside 1 + J
    let mut rng = ChaCha8Rng::seed_from_u64(0x756e_6974);
    let mut seen: std::collections::HashSet<Vec<Scalar>> = std::collections::HashSet::new();
    for g in &gens {
        seen.insert(flatten(g));
    }
    seen.insert(flatten(&id));
    let mut stall = 0usize;
    let cap = 1usize << 16;
    while stall < 32 && seen.len() < cap {
        let coeffs: Vec<Scalar> = (0..dim).map(|_| rng.gen_range(0..f.q())).collect();
        let m = a.element(&coeffs);
        if m.is_invertible() && seen.insert(flatten(&m)) {
            gens.push(m.clone());
            stall = 0;
            // grow by a short random walk of products
            for _ in 0..8 {
                let pick = rng.gen_range(0..gens.len());
                let prod = m.mul(&gens[pick])?;
                if prod.is_invertible() {
                    seen.insert(flatten(&prod));
                }
            }
        } else {
            stall += 1;
        }
    }
    Ok(UnitGroup {
        order: seen.len() as u128,
        generators: gens,
        monte_carlo: true,
    })
}
