//! Operator rings of a bimap: the left/middle/right adjoint spaces, the
//! centroid, cross-bimap adjoint-morphism spaces, and the counting bounds
//! used for layer selection.
//!
//! Conventions (row vectors, maps on the right):
//!   L(U) = {(P, Q) : P S_k = sum_l Q[l][k] S_l}
//!   M(U) = {(F, G) : F S_k = S_k G^T}, product (F,G)(F',G') = (FF', G'G)
//!   R(U) = {(G, H) : S_k G^T = sum_l H[l][k] S_l}
//!   C(U) = {(F, G, H) : F S_k = S_k G^T = sum_l H[l][k] S_l}
//!   Adj(U,V) = {(x, y) : x S^V_k = S^U_k y^T}   (shared codomain index)

use crate::bimap::Bimap;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::units::{self, MatrixAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingKind {
    L,
    M,
    R,
    Adj,
}

#[derive(Debug, Clone)]
pub struct OperatorPairSpace {
    pub kind: RingKind,
    pub field: Field,
    pub left_shape: (usize, usize),
    pub right_shape: (usize, usize),
    /// Echelonized in the flattened (left | right) coordinate space.
    pub basis: Vec<(Matrix, Matrix)>,
}

impl OperatorPairSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, coeffs: &[u64]) -> (Matrix, Matrix) {
        let f = &self.field;
        let mut l = Matrix::zero(f.clone(), self.left_shape.0, self.left_shape.1);
        let mut r = Matrix::zero(f.clone(), self.right_shape.0, self.right_shape.1);
        for (c, (bl, br)) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            l = l.add(&bl.scalar_mul(*c)).unwrap();
            r = r.add(&br.scalar_mul(*c)).unwrap();
        }
        (l, r)
    }

    pub fn contains(&self, pair: &(Matrix, Matrix)) -> bool {
        let width = self.left_shape.0 * self.left_shape.1 + self.right_shape.0 * self.right_shape.1;
        let mut rows: Vec<Vec<u64>> = self.basis.iter().map(flatten_pair).collect();
        rows.push(flatten_pair(pair));
        let mut m = Matrix::zero(self.field.clone(), rows.len(), width);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m.rank() == self.dim()
    }
}

fn flatten_pair((l, r): &(Matrix, Matrix)) -> Vec<u64> {
    let mut v = l.entries().to_vec();
    v.extend_from_slice(r.entries());
    v
}

/// Multiplication in a pair space of ring kind: reversed in the second
/// component for M/Adj-type pairs, componentwise for L and R.
pub fn pair_mul(
    kind: RingKind,
    a: &(Matrix, Matrix),
    b: &(Matrix, Matrix),
) -> Result<(Matrix, Matrix)> {
    match kind {
        RingKind::M | RingKind::Adj => Ok((a.0.mul(&b.0)?, b.1.mul(&a.1)?)),
        RingKind::L | RingKind::R => Ok((a.0.mul(&b.0)?, a.1.mul(&b.1)?)),
    }
}

/// Solve the defining bilinear identity of the requested kind as one
/// linear system; the returned basis is canonical.
pub fn adjoint_space(kind: RingKind, u: &Bimap, v: Option<&Bimap>) -> Result<OperatorPairSpace> {
    match kind {
        RingKind::Adj => {
            let v = v.ok_or_else(|| Error::dim("Adj requires a target bimap"))?;
            adj_space(u, v)
        }
        _ => {
            if v.is_some() {
                return Err(Error::dim("kinds L/M/R take a single bimap"));
            }
            match kind {
                RingKind::M => adj_space_m(u),
                RingKind::L => l_space(u),
                RingKind::R => r_space(u),
                RingKind::Adj => unreachable!(),
            }
        }
    }
}

fn solve_pair_system(
    field: &Field,
    kind: RingKind,
    left_shape: (usize, usize),
    right_shape: (usize, usize),
    eq_count: usize,
    fill: impl Fn(&mut Matrix),
) -> OperatorPairSpace {
    let nl = left_shape.0 * left_shape.1;
    let nr = right_shape.0 * right_shape.1;
    // rows = unknowns, cols = equations; kernel rows are solutions
    let mut coeffs = Matrix::zero(field.clone(), nl + nr, eq_count);
    fill(&mut coeffs);
    let ker = coeffs.left_kernel();
    let mut basis = Vec::with_capacity(ker.rows);
    for i in 0..ker.rows {
        let row = ker.row(i);
        let l = Matrix::new(
            field.clone(),
            left_shape.0,
            left_shape.1,
            row[..nl].to_vec(),
        );
        let r = Matrix::new(
            field.clone(),
            right_shape.0,
            right_shape.1,
            row[nl..].to_vec(),
        );
        basis.push((l, r));
    }
    OperatorPairSpace {
        kind,
        field: field.clone(),
        left_shape,
        right_shape,
        basis,
    }
}

/// M(U): pairs (F: a x a, G: b x b) with F S_k = S_k G^T.
fn adj_space_m(u: &Bimap) -> Result<OperatorPairSpace> {
    let (a, b, c) = u.dims;
    let f = &u.field;
    let nl = a * a;
    Ok(solve_pair_system(
        f,
        RingKind::M,
        (a, a),
        (b, b),
        a * b * c,
        |m| {
            for k in 0..c {
                let s = &u.slices[k];
                for i in 0..a {
                    for j in 0..b {
                        let eq = (k * a + i) * b + j;
                        for mm in 0..a {
                            // F[i][mm] * S_k[mm][j]
                            m.set(i * a + mm, eq, f.add(m.get(i * a + mm, eq), s.get(mm, j)));
                        }
                        for mm in 0..b {
                            // -G[j][mm] * S_k[i][mm]
                            let idx = nl + j * b + mm;
                            m.set(idx, eq, f.sub(m.get(idx, eq), s.get(i, mm)));
                        }
                    }
                }
            }
        },
    ))
}

/// Adj(U,V): pairs (x: aU x aV, y: bV x bU) with x S^V_k = S^U_k y^T.
fn adj_space(u: &Bimap, v: &Bimap) -> Result<OperatorPairSpace> {
    if u.dims.2 != v.dims.2 {
        return Err(Error::dim("Adj: codomain dimensions differ"));
    }
    if u.field != v.field {
        return Err(Error::FieldMismatch(
            format!("GF({})", u.field.q()),
            format!("GF({})", v.field.q()),
        ));
    }
    let (au, bu, c) = u.dims;
    let (av, bv, _) = v.dims;
    let f = &u.field;
    let nl = au * av;
    Ok(solve_pair_system(
        f,
        RingKind::Adj,
        (au, av),
        (bv, bu),
        au * bv * c,
        |m| {
            for k in 0..c {
                let sv = &v.slices[k];
                let su = &u.slices[k];
                for i in 0..au {
                    for j in 0..bv {
                        let eq = (k * au + i) * bv + j;
                        for mm in 0..av {
                            // x[i][mm] * S^V_k[mm][j]
                            let idx = i * av + mm;
                            m.set(idx, eq, f.add(m.get(idx, eq), sv.get(mm, j)));
                        }
                        for mm in 0..bu {
                            // -y[j][mm] * S^U_k[i][mm]
                            let idx = nl + j * bu + mm;
                            m.set(idx, eq, f.sub(m.get(idx, eq), su.get(i, mm)));
                        }
                    }
                }
            }
        },
    ))
}

/// L(U): pairs (P: a x a, Q: c x c) with P S_k = sum_l Q[l][k] S_l.
fn l_space(u: &Bimap) -> Result<OperatorPairSpace> {
    let (a, b, c) = u.dims;
    let f = &u.field;
    let nl = a * a;
    Ok(solve_pair_system(
        f,
        RingKind::L,
        (a, a),
        (c, c),
        a * b * c,
        |m| {
            for k in 0..c {
                let s = &u.slices[k];
                for i in 0..a {
                    for j in 0..b {
                        let eq = (k * a + i) * b + j;
                        for mm in 0..a {
                            let idx = i * a + mm;
                            m.set(idx, eq, f.add(m.get(idx, eq), s.get(mm, j)));
                        }
                        for l in 0..c {
                            let idx = nl + l * c + k;
                            m.set(idx, eq, f.sub(m.get(idx, eq), u.slices[l].get(i, j)));
                        }
                    }
                }
            }
        },
    ))
}

/// R(U): pairs (G: b x b, H: c x c) with S_k G^T = sum_l H[l][k] S_l.
fn r_space(u: &Bimap) -> Result<OperatorPairSpace> {
    let (a, b, c) = u.dims;
    let f = &u.field;
    let nl = b * b;
    Ok(solve_pair_system(
        f,
        RingKind::R,
        (b, b),
        (c, c),
        a * b * c,
        |m| {
            for k in 0..c {
                let s = &u.slices[k];
                for i in 0..a {
                    for j in 0..b {
                        let eq = (k * a + i) * b + j;
                        for mm in 0..b {
                            // G[j][mm] * S_k[i][mm]
                            let idx = j * b + mm;
                            m.set(idx, eq, f.add(m.get(idx, eq), s.get(i, mm)));
                        }
                        for l in 0..c {
                            let idx = nl + l * c + k;
                            m.set(idx, eq, f.sub(m.get(idx, eq), u.slices[l].get(i, j)));
                        }
                    }
                }
            }
        },
    ))
}

#[derive(Debug, Clone)]
pub struct CentroidSpace {
    pub field: Field,
    pub dims: (usize, usize, usize),
    pub basis: Vec<(Matrix, Matrix, Matrix)>,
}

impl CentroidSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// C(U): triples (F, G, H) with F S_k = S_k G^T and S_k G^T = sum H[l][k] S_l.
pub fn centroid(u: &Bimap) -> Result<CentroidSpace> {
    let (a, b, c) = u.dims;
    let f = &u.field;
    let na = a * a;
    let nb = b * b;
    let unknowns = na + nb + c * c;
    let eqs = 2 * a * b * c;
    let mut m = Matrix::zero(f.clone(), unknowns, eqs);
    for k in 0..c {
        let s = &u.slices[k];
        for i in 0..a {
            for j in 0..b {
                // set 1: F S_k - S_k G^T = 0
                let eq1 = (k * a + i) * b + j;
                for mm in 0..a {
                    let idx = i * a + mm;
                    m.set(idx, eq1, f.add(m.get(idx, eq1), s.get(mm, j)));
                }
                for mm in 0..b {
                    let idx = na + j * b + mm;
                    m.set(idx, eq1, f.sub(m.get(idx, eq1), s.get(i, mm)));
                }
                // set 2: S_k G^T - sum_l H[l][k] S_l = 0
                let eq2 = a * b * c + eq1;
                for mm in 0..b {
                    let idx = na + j * b + mm;
                    m.set(idx, eq2, f.add(m.get(idx, eq2), s.get(i, mm)));
                }
                for l in 0..c {
                    let idx = na + nb + l * c + k;
                    m.set(idx, eq2, f.sub(m.get(idx, eq2), u.slices[l].get(i, j)));
                }
            }
        }
    }
    let ker = m.left_kernel();
    let mut basis = Vec::with_capacity(ker.rows);
    for i in 0..ker.rows {
        let row = ker.row(i);
        basis.push((
            Matrix::new(f.clone(), a, a, row[..na].to_vec()),
            Matrix::new(f.clone(), b, b, row[na..na + nb].to_vec()),
            Matrix::new(f.clone(), c, c, row[na + nb..].to_vec()),
        ));
    }
    Ok(CentroidSpace {
        field: f.clone(),
        dims: u.dims,
        basis,
    })
}

/// (dim L, dim M, dim R, dim T, dim C); dim T = dim L + dim M + dim R.
pub fn tri_ring_dims(u: &Bimap) -> Result<(usize, usize, usize, usize, usize)> {
    let l = adjoint_space(RingKind::L, u, None)?.dim();
    let m = adjoint_space(RingKind::M, u, None)?.dim();
    let r = adjoint_space(RingKind::R, u, None)?.dim();
    let c = centroid(u)?.dim();
    Ok((l, m, r, l + m + r, c))
}

/// The exchange involution (F,G) -> (G,F) on M(U) for bimaps with
/// (anti)symmetric slices; each image is verified to lie in M(U).
pub fn involution_on_adjoints(u: &Bimap) -> Result<Vec<(Matrix, Matrix)>> {
    if u.dims.0 != u.dims.1 {
        return Err(Error::NotHermitianSlices);
    }
    if !u.is_alternating() && !u.is_symmetric() {
        return Err(Error::NotHermitianSlices);
    }
    let m = adjoint_space(RingKind::M, u, None)?;
    let mut images = Vec::with_capacity(m.dim());
    for (f, g) in &m.basis {
        let swapped = (g.clone(), f.clone());
        if !m.contains(&swapped) {
            return Err(Error::NotHermitianSlices);
        }
        images.push(swapped);
    }
    Ok(images)
}

/// Block-diagonal embedding of a pair space as a matrix algebra; the
/// second component is transposed for M/Adj-type pairs so that block
/// multiplication matches the pair product.
pub fn pair_space_algebra(space: &OperatorPairSpace) -> MatrixAlgebra {
    let (l0, _) = space.left_shape;
    let (r0, _) = space.right_shape;
    let n = l0 + r0;
    let f = space.field.clone();
    let mats: Vec<Matrix> = space
        .basis
        .iter()
        .map(|(l, r)| {
            let mut m = Matrix::zero(f.clone(), n, n);
            for i in 0..l0 {
                for j in 0..l0 {
                    m.set(i, j, l.get(i, j));
                }
            }
            let rr = match space.kind {
                RingKind::M | RingKind::Adj => r.transpose(),
                _ => r.clone(),
            };
            for i in 0..r0 {
                for j in 0..r0 {
                    m.set(l0 + i, l0 + j, rr.get(i, j));
                }
            }
            m
        })
        .collect();
    let basis = units::span_basis(&f, n, &mats);
    let unital = {
        let id = Matrix::identity(f.clone(), n);
        let mut all = basis.clone();
        all.push(id);
        units::span_basis(&f, n, &all).len() == basis.len()
    };
    MatrixAlgebra {
        ambient_dim: n,
        field: f,
        basis,
        unital,
    }
}

fn centroid_algebra(c: &CentroidSpace) -> MatrixAlgebra {
    let (a, b, cc) = c.dims;
    let n = a + b + cc;
    let f = c.field.clone();
    let mats: Vec<Matrix> = c
        .basis
        .iter()
        .map(|(fm, gm, hm)| {
            let mut m = Matrix::zero(f.clone(), n, n);
            for i in 0..a {
                for j in 0..a {
                    m.set(i, j, fm.get(i, j));
                }
            }
            let gt = gm.transpose();
            for i in 0..b {
                for j in 0..b {
                    m.set(a + i, a + j, gt.get(i, j));
                }
            }
            for i in 0..cc {
                for j in 0..cc {
                    m.set(a + b + i, a + b + j, hm.get(i, j));
                }
            }
            m
        })
        .collect();
    let basis = units::span_basis(&f, n, &mats);
    let unital = {
        let id = Matrix::identity(f.clone(), n);
        let mut all = basis.clone();
        all.push(id);
        units::span_basis(&f, n, &all).len() == basis.len()
    };
    MatrixAlgebra {
        ambient_dim: n,
        field: f,
        basis,
        unital,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionBounds {
    /// log_q of the basic upper bound |M(U)^x| * q^(dim U0)^2.
    pub upper_log_q: f64,
    pub m_unit_count: u128,
    /// Exact lower bound |T^x| / |C^x| as a reduced fraction.
    pub lower_num: u128,
    pub lower_den: u128,
}

pub fn selection_bounds(u: &Bimap, unit_budget: u128) -> Result<SelectionBounds> {
    let q = u.field.q() as f64;
    let c = u.dims.2;
    let m = adjoint_space(RingKind::M, u, None)?;
    let l = adjoint_space(RingKind::L, u, None)?;
    let r = adjoint_space(RingKind::R, u, None)?;
    let cen = centroid(u)?;
    let m_units = units::unit_count(&pair_space_algebra(&m), unit_budget)?;
    let l_units = units::unit_count(&pair_space_algebra(&l), unit_budget)?;
    let r_units = units::unit_count(&pair_space_algebra(&r), unit_budget)?;
    let c_units = units::unit_count(&centroid_algebra(&cen), unit_budget)?;
    let t_units = l_units
        .checked_mul(m_units)
        .and_then(|x| x.checked_mul(r_units))
        .ok_or_else(|| Error::budget("unit order product", u128::MAX, u128::MAX))?;
    let g = gcd_u128(t_units, c_units);
    Ok(SelectionBounds {
        upper_log_q: (m_units as f64).ln() / q.ln() + (c * c) as f64,
        m_unit_count: m_units,
        lower_num: t_units / g,
        lower_den: c_units / g,
    })
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_u128(b, a % b)
    }
}

#[derive(Debug, Clone)]
pub struct PairUnits {
    pub elements: Vec<(Matrix, Matrix)>,
    pub order: u128,
    pub monte_carlo: bool,
}

/// Units of a multiplicatively closed pair space: pairs with both
/// components invertible. Exhaustive when q^dim fits the budget, else a
/// flagged Monte-Carlo estimate through the block-diagonal embedding.
pub fn pair_space_units(space: &OperatorPairSpace, budget: u128) -> Result<PairUnits> {
    let q = space.field.q() as u128;
    let size = q.pow(space.dim() as u32);
    if size <= budget {
        let flat: Vec<Vec<u64>> = space.basis.iter().map(flatten_pair).collect();
        let nl = space.left_shape.0 * space.left_shape.1;
        let mut odo = crate::units::CoeffOdometer::new(space.field.clone(), flat);
        let mut elements = Vec::new();
        loop {
            let l = Matrix::new(
                space.field.clone(),
                space.left_shape.0,
                space.left_shape.1,
                odo.acc[..nl].to_vec(),
            );
            if l.is_invertible() {
                let r = Matrix::new(
                    space.field.clone(),
                    space.right_shape.0,
                    space.right_shape.1,
                    odo.acc[nl..].to_vec(),
                );
                if r.is_invertible() {
                    elements.push((l, r));
                }
            }
            if !odo.step() {
                break;
            }
        }
        let order = elements.len() as u128;
        return Ok(PairUnits {
            elements,
            order,
            monte_carlo: false,
        });
    }
    // Monte-Carlo tier through the embedded matrix algebra
    let alg = pair_space_algebra(space);
    let ug = crate::units::unit_group(&alg, budget)?;
    let l0 = space.left_shape.0;
    let r0 = space.right_shape.0;
    let elements = ug
        .generators
        .iter()
        .map(|m| {
            let mut l = Matrix::zero(space.field.clone(), l0, l0);
            for i in 0..l0 {
                for j in 0..l0 {
                    l.set(i, j, m.get(i, j));
                }
            }
            let mut rblock = Matrix::zero(space.field.clone(), r0, r0);
            for i in 0..r0 {
                for j in 0..r0 {
                    rblock.set(i, j, m.get(l0 + i, l0 + j));
                }
            }
            let r = match space.kind {
                RingKind::M | RingKind::Adj => rblock.transpose(),
                _ => rblock,
            };
            (l, r)
        })
        .collect();
    Ok(PairUnits {
        elements,
        order: ug.order,
        monte_carlo: true,
    })
}
