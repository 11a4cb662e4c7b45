//! Bimaps U2 x U1 >-> U0 stored as systems of Gram slices, homotopisms,
//! and the three coordinate shuffles.
//!
//! A bimap with dims (a, b, c) keeps c slices of shape a x b; the k-th
//! output coordinate of u o v is u . S_k . v^T. Dual spaces are taken in
//! dual bases, so the dagger of a map is the transpose of its matrix.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimap {
    pub field: Field,
    /// (dim U2, dim U1, dim U0)
    pub dims: (usize, usize, usize),
    pub slices: Vec<Matrix>,
}

impl Bimap {
    pub fn new(field: Field, dims: (usize, usize, usize), slices: Vec<Matrix>) -> Result<Bimap> {
        if slices.len() != dims.2 {
            return Err(Error::InconsistentDims(format!(
                "{} slices for codomain dimension {}",
                slices.len(),
                dims.2
            )));
        }
        for s in &slices {
            if s.rows != dims.0 || s.cols != dims.1 {
                return Err(Error::InconsistentDims(format!(
                    "slice shape {}x{}, expected {}x{}",
                    s.rows, s.cols, dims.0, dims.1
                )));
            }
            if s.field != field {
                return Err(Error::FieldMismatch(
                    format!("GF({})", field.q()),
                    format!("GF({})", s.field.q()),
                ));
            }
        }
        Ok(Bimap {
            field,
            dims,
            slices,
        })
    }

    pub fn zero(field: Field, dims: (usize, usize, usize)) -> Bimap {
        let slices = (0..dims.2)
            .map(|_| Matrix::zero(field.clone(), dims.0, dims.1))
            .collect();
        Bimap {
            field,
            dims,
            slices,
        }
    }

    pub fn from_int_slices(field: &Field, slices: &[Vec<Vec<i64>>]) -> Result<Bimap> {
        let mats: Vec<Matrix> = slices.iter().map(|s| Matrix::from_ints(field, s)).collect();
        let a = mats.first().map_or(0, |m| m.rows);
        let b = mats.first().map_or(0, |m| m.cols);
        Bimap::new(field.clone(), (a, b, mats.len()), mats)
    }

    pub fn evaluate(&self, u2: &[Scalar], u1: &[Scalar]) -> Result<Vec<Scalar>> {
        let (a, b, c) = self.dims;
        if u2.len() != a || u1.len() != b {
            return Err(Error::dim("evaluate: vector lengths"));
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(c);
        for s in &self.slices {
            let mut acc = 0;
            for i in 0..a {
                if u2[i] == 0 {
                    continue;
                }
                let mut rowacc = 0;
                for j in 0..b {
                    if u1[j] != 0 {
                        rowacc = f.add(rowacc, f.mul(s.get(i, j), u1[j]));
                    }
                }
                acc = f.add(acc, f.mul(u2[i], rowacc));
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Gram matrix of the composition with the codomain functional x,
    /// i.e. sum_k x_k S_k.
    pub fn gram_at(&self, x: &[Scalar]) -> Matrix {
        let (a, b, _) = self.dims;
        let f = &self.field;
        let mut m = Matrix::zero(f.clone(), a, b);
        for (k, s) in self.slices.iter().enumerate() {
            if x[k] == 0 {
                continue;
            }
            for i in 0..a {
                for j in 0..b {
                    let v = f.add(m.get(i, j), f.mul(x[k], s.get(i, j)));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Compose with a codomain map f0: c x c'; slice k of the result is
    /// sum_l f0[l][k] S_l.
    pub fn twist_codomain(&self, f0: &Matrix) -> Result<Bimap> {
        let (a, b, c) = self.dims;
        if f0.rows != c {
            return Err(Error::dim("twist: codomain map rows"));
        }
        let f = &self.field;
        let mut slices = Vec::with_capacity(f0.cols);
        for k in 0..f0.cols {
            let mut m = Matrix::zero(f.clone(), a, b);
            for (l, s) in self.slices.iter().enumerate() {
                let coef = f0.get(l, k);
                if coef == 0 {
                    continue;
                }
                for i in 0..a {
                    for j in 0..b {
                        let v = f.add(m.get(i, j), f.mul(coef, s.get(i, j)));
                        m.set(i, j, v);
                    }
                }
            }
            slices.push(m);
        }
        Bimap::new(f.clone(), (a, b, f0.cols), slices)
    }

    /// Restriction to subspaces of U2 and U1, in the bases of the subspaces.
    pub fn restrict(&self, sub2: &Subspace, sub1: &Subspace) -> Result<Bimap> {
        let (a, b, c) = self.dims;
        if sub2.ambient != a || sub1.ambient != b {
            return Err(Error::dim("restrict: ambient dims"));
        }
        let b1t = sub1.basis.transpose();
        let mut slices = Vec::with_capacity(c);
        for s in &self.slices {
            slices.push(sub2.basis.mul(s)?.mul(&b1t)?);
        }
        Bimap::new(self.field.clone(), (sub2.dim(), sub1.dim(), c), slices)
    }

    /// Direct-sum-of-codomains intersection construction: all inputs share
    /// the same domain pair, slices are concatenated.
    pub fn intersect(parts: &[Bimap]) -> Result<Bimap> {
        let first = parts
            .first()
            .ok_or_else(|| Error::dim("intersect of empty list"))?;
        let (a, b, _) = first.dims;
        let mut slices = Vec::new();
        for p in parts {
            if p.dims.0 != a || p.dims.1 != b {
                return Err(Error::dim("intersect: domain dims differ"));
            }
            if p.field != first.field {
                return Err(Error::FieldMismatch(
                    format!("GF({})", first.field.q()),
                    format!("GF({})", p.field.q()),
                ));
            }
            slices.extend(p.slices.iter().cloned());
        }
        let c = slices.len();
        Bimap::new(first.field.clone(), (a, b, c), slices)
    }

    /// Split into c single-slice bimaps.
    pub fn split_slices(&self) -> Vec<Bimap> {
        self.slices
            .iter()
            .map(|s| {
                Bimap::new(
                    self.field.clone(),
                    (self.dims.0, self.dims.1, 1),
                    vec![s.clone()],
                )
                .unwrap()
            })
            .collect()
    }

    pub fn is_alternating(&self) -> bool {
        let (a, b, _) = self.dims;
        if a != b {
            return false;
        }
        let f = &self.field;
        self.slices.iter().all(|s| {
            (0..a).all(|i| s.get(i, i) == 0)
                && (0..a).all(|i| (0..a).all(|j| s.get(i, j) == f.neg(s.get(j, i))))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let (a, b, _) = self.dims;
        if a != b {
            return false;
        }
        self.slices
            .iter()
            .all(|s| (0..a).all(|i| (0..a).all(|j| s.get(i, j) == s.get(j, i))))
    }

    pub fn shuffle(&self, sigma: &Perm3) -> Bimap {
        let mut out = self.clone();
        for t in sigma.word() {
            out = out.shuffle_transposition(t);
        }
        out
    }

    fn shuffle_transposition(&self, t: Transposition) -> Bimap {
        let (a, b, c) = self.dims;
        let f = self.field.clone();
        match t {
            // swap U2 and U1: transpose every slice
            Transposition::Swap21 => {
                let slices = self.slices.iter().map(|s| s.transpose()).collect();
                Bimap::new(f, (b, a, c), slices).unwrap()
            }
            // swap U1 and U0 via duals: S'_j[m][k] = S_k[m][j]
            Transposition::Swap10 => {
                let mut slices = Vec::with_capacity(b);
                for j in 0..b {
                    let mut m = Matrix::zero(f.clone(), a, c);
                    for k in 0..c {
                        for i in 0..a {
                            m.set(i, k, self.slices[k].get(i, j));
                        }
                    }
                    slices.push(m);
                }
                Bimap::new(f, (a, c, b), slices).unwrap()
            }
            // swap U2 and U0 via duals: S'_m[k][j] = S_k[m][j]
            Transposition::Swap20 => {
                let mut slices = Vec::with_capacity(a);
                for i in 0..a {
                    let mut m = Matrix::zero(f.clone(), c, b);
                    for k in 0..c {
                        for j in 0..b {
                            m.set(k, j, self.slices[k].get(i, j));
                        }
                    }
                    slices.push(m);
                }
                Bimap::new(f, (c, b, a), slices).unwrap()
            }
        }
    }
}

/// Transpositions of the coordinate indices {2,1,0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transposition {
    Swap21,
    Swap10,
    Swap20,
}

/// A permutation of the bimap coordinates {2,1,0}, fixed by where each
/// of the three indices is sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Perm3 {
    /// images[i] = sigma(index), listed for indices [2, 1, 0]
    images: [u8; 3],
}

impl Perm3 {
    pub fn identity() -> Perm3 {
        Perm3 { images: [2, 1, 0] }
    }

    pub fn transposition(i: u8, j: u8) -> Perm3 {
        let mut images = [2u8, 1, 0];
        for im in images.iter_mut() {
            if *im == i {
                *im = j;
            } else if *im == j {
                *im = i;
            }
        }
        Perm3 { images }
    }

    pub fn apply(&self, idx: u8) -> u8 {
        self.images[(2 - idx) as usize]
    }

    /// this-then-other composition.
    pub fn then(&self, other: &Perm3) -> Perm3 {
        let mut images = [0u8; 3];
        for (pos, idx) in [2u8, 1, 0].into_iter().enumerate() {
            images[pos] = other.apply(self.apply(idx));
        }
        Perm3 { images }
    }

    pub fn inverse(&self) -> Perm3 {
        let mut images = [0u8; 3];
        for idx in [2u8, 1, 0] {
            let target = self.apply(idx);
            images[(2 - target) as usize] = idx;
        }
        Perm3 { images }
    }

    pub fn all() -> Vec<Perm3> {
        let mut out = Vec::new();
        for a in [2u8, 1, 0] {
            for b in [2u8, 1, 0] {
                if b == a {
                    continue;
                }
                let c = 3 - a - b;
                out.push(Perm3 { images: [a, b, c] });
            }
        }
        out
    }

    /// Canonical decomposition into transpositions, applied left to right.
    pub fn word(&self) -> Vec<Transposition> {
        match self.images {
            [2, 1, 0] => vec![],
            [1, 2, 0] => vec![Transposition::Swap21],
            [2, 0, 1] => vec![Transposition::Swap10],
            [0, 1, 2] => vec![Transposition::Swap20],
            // 2->1, 1->0, 0->2
            [1, 0, 2] => vec![Transposition::Swap10, Transposition::Swap21],
            // 2->0, 0->1, 1->2
            [0, 2, 1] => vec![Transposition::Swap21, Transposition::Swap10],
            _ => unreachable!(),
        }
    }
}

/// A triple of linear maps (f2, f1, f0) between bimaps, acting on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homotopism {
    pub f2: Matrix,
    pub f1: Matrix,
    pub f0: Matrix,
}

impl Homotopism {
    pub fn identity(u: &Bimap) -> Homotopism {
        let f = u.field.clone();
        Homotopism {
            f2: Matrix::identity(f.clone(), u.dims.0),
            f1: Matrix::identity(f.clone(), u.dims.1),
            f0: Matrix::identity(f, u.dims.2),
        }
    }

    pub fn compose(&self, then: &Homotopism) -> Result<Homotopism> {
        Ok(Homotopism {
            f2: self.f2.mul(&then.f2)?,
            f1: self.f1.mul(&then.f1)?,
            f0: self.f0.mul(&then.f0)?,
        })
    }

    pub fn inverse(&self) -> Result<Homotopism> {
        Ok(Homotopism {
            f2: self.f2.inverse()?,
            f1: self.f1.inverse()?,
            f0: self.f0.inverse()?,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.f2.is_invertible() && self.f1.is_invertible() && self.f0.is_invertible()
    }

    /// The hat-map: carry an isotopism across a shuffle of the coordinates.
    pub fn shuffle(&self, sigma: &Perm3) -> Result<Homotopism> {
        let mut out = self.clone();
        for t in sigma.word() {
            out = match t {
                Transposition::Swap21 => Homotopism {
                    f2: out.f1,
                    f1: out.f2,
                    f0: out.f0,
                },
                Transposition::Swap10 => Homotopism {
                    f2: out.f2,
                    f1: out.f0.transpose().inverse()?,
                    f0: out.f1.transpose().inverse()?,
                },
                Transposition::Swap20 => Homotopism {
                    f2: out.f0.transpose().inverse()?,
                    f1: out.f1,
                    f0: out.f2.transpose().inverse()?,
                },
            };
        }
        Ok(out)
    }
}

/// Check (u o v) f0 = u f2 o v f1 on all basis pairs; by bilinearity this
/// decides the identity everywhere. In Gram form:
/// f2 . S^V_k . f1^T = sum_l f0[l][k] S^U_l for every k.
pub fn is_homotopism(u: &Bimap, v: &Bimap, h: &Homotopism) -> Result<bool> {
    let (a, b, c) = u.dims;
    let (a2, b2, c2) = v.dims;
    if h.f2.rows != a || h.f2.cols != a2 || h.f1.rows != b || h.f1.cols != b2 {
        return Err(Error::dim("homotopism: domain maps"));
    }
    if h.f0.rows != c || h.f0.cols != c2 {
        return Err(Error::dim("homotopism: codomain map"));
    }
    let f = &u.field;
    let f1t = h.f1.transpose();
    for k in 0..c2 {
        let lhs = h.f2.mul(&v.slices[k])?.mul(&f1t)?;
        let mut rhs = Matrix::zero(f.clone(), a, b);
        for l in 0..c {
            let coef = h.f0.get(l, k);
            if coef == 0 {
                continue;
            }
            for i in 0..a {
                for j in 0..b {
                    let val = f.add(rhs.get(i, j), f.mul(coef, u.slices[l].get(i, j)));
                    rhs.set(i, j, val);
                }
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the two lists of subspaces are direct-sum decompositions of U2
/// and U1 and all cross pairs multiply to zero.
pub fn orthogonal_check(u: &Bimap, parts2: &[Subspace], parts1: &[Subspace]) -> Result<bool> {
    let (a, b, _) = u.dims;
    check_direct_sum(&u.field, parts2, a)?;
    check_direct_sum(&u.field, parts1, b)?;
    for (j, p2) in parts2.iter().enumerate() {
        for (k, p1) in parts1.iter().enumerate() {
            if j == k {
                continue;
            }
            for i2 in 0..p2.basis.rows {
                for i1 in 0..p1.basis.rows {
                    let v = u.evaluate(p2.basis.row(i2), p1.basis.row(i1))?;
                    if v.iter().any(|&x| x != 0) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn check_direct_sum(field: &Field, parts: &[Subspace], ambient: usize) -> Result<()> {
    let mut total = 0usize;
    let mut stacked = Matrix::zero(field.clone(), 0, ambient);
    for p in parts {
        if p.ambient != ambient {
            return Err(Error::NotDirectSum);
        }
        total += p.dim();
        stacked = stacked.vstack(&p.basis);
    }
    if total != ambient || stacked.rank() != ambient {
        return Err(Error::NotDirectSum);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    /// The alternating bimap D of the worked example over GF(3).
    pub fn bimap_d() -> Bimap {
        let f = gf(3);
        Bimap::from_int_slices(
            &f,
            &[
                vec![
                    vec![0, 1, 0, 0],
                    vec![-1, 0, 0, 0],
                    vec![0, 0, 0, 1],
                    vec![0, 0, -1, 0],
                ],
                vec![
                    vec![0, 0, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, -1, 0, 0],
                    vec![0, 0, 0, 0],
                ],
                vec![
                    vec![0, 0, 0, 0],
                    vec![0, 0, 0, 1],
                    vec![0, 0, 0, 0],
                    vec![0, -1, 0, 0],
                ],
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let z = Bimap::zero(gf(3), (2, 2, 2));
        assert_eq!(z.evaluate(&[1, 2], &[2, 1]).unwrap(), vec![0, 0]);

        let d = bimap_d();
        assert_eq!(
            d.evaluate(&[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap(),
            vec![1, 0, 0]
        );
        assert_eq!(
            d.evaluate(&[0, 1, 0, 0], &[0, 0, 0, 1]).unwrap(),
            vec![0, 0, 1]
        );
    }

    #[test]
    fn evaluate_is_bilinear() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let d = bimap_d();
        let f = d.field.clone();
        for _ in 0..30 {
            let u: Vec<u64> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            let u2: Vec<u64> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            let v: Vec<u64> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            let sum: Vec<u64> = u.iter().zip(&u2).map(|(&a, &b)| f.add(a, b)).collect();
            let lhs = d.evaluate(&sum, &v).unwrap();
            let r1 = d.evaluate(&u, &v).unwrap();
            let r2 = d.evaluate(&u2, &v).unwrap();
            let rhs: Vec<u64> = r1.iter().zip(&r2).map(|(&a, &b)| f.add(a, b)).collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn shuffle_identity_and_transpose() {
        let d = bimap_d();
        assert_eq!(d.shuffle(&Perm3::identity()), d);
        // alternating: transpose shuffle negates each slice
        let t = d.shuffle(&Perm3::transposition(2, 1));
        for (s, st) in d.slices.iter().zip(&t.slices) {
            assert_eq!(&s.neg(), st);
        }
    }

    #[test]
    fn shuffle_10_defining_identity() {
        // sigma = (1,0) on the (2,3,1) bimap with single slice [[1,0,0],[0,1,0]]
        let f = gf(3);
        let u = Bimap::from_int_slices(&f, &[vec![vec![1, 0, 0], vec![0, 1, 0]]]).unwrap();
        let s = u.shuffle(&Perm3::transposition(1, 0));
        assert_eq!(s.dims, (2, 1, 3));
        // defining identity: (u2 o^s nu1)(u_1) = (u2 o u_1) nu1 for all basis picks
        for i in 0..2 {
            let e2: Vec<u64> = (0..2).map(|x| u64::from(x == i)).collect();
            for nu in 0..1 {
                let e_nu: Vec<u64> = (0..1).map(|x| u64::from(x == nu)).collect();
                let out = s.evaluate(&e2, &e_nu).unwrap(); // element of U1-dual
                for j in 0..3 {
                    let e1: Vec<u64> = (0..3).map(|x| u64::from(x == j)).collect();
                    let direct = u.evaluate(&e2, &e1).unwrap();
                    // (u2 o u1) . nu  vs out[j]
                    assert_eq!(direct[nu], out[j]);
                }
            }
        }
    }

    #[test]
    fn shuffle_functorial_on_random_bimaps() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let f = gf(3);
        for _ in 0..10 {
            let slices: Vec<Vec<Vec<i64>>> = (0..2)
                .map(|_| {
                    (0..2)
                        .map(|_| (0..2).map(|_| rng.gen_range(0..3)).collect())
                        .collect()
                })
                .collect();
            let u = Bimap::from_int_slices(&f, &slices).unwrap();
            for s1 in Perm3::all() {
                for s2 in Perm3::all() {
                    let seq = u.shuffle(&s1).shuffle(&s2);
                    let combined = u.shuffle(&s1.then(&s2));
                    assert_eq!(seq, combined, "{:?} then {:?}", s1, s2);
                }
            }
        }
    }

    #[test]
    fn homotopism_heisenberg_examples() {
        let f = gf(3);
        let h = Bimap::from_int_slices(&f, &[vec![vec![0, 1], vec![-1, 0]]]).unwrap();
        let id = Homotopism::identity(&h);
        assert!(is_homotopism(&h, &h, &id).unwrap());

        let two_i = Matrix::identity(f.clone(), 2).scalar_mul(2);
        let bad = Homotopism {
            f2: Matrix::identity(f.clone(), 2),
            f1: Matrix::identity(f.clone(), 2),
            f0: Matrix::identity(f.clone(), 1).scalar_mul(2),
        };
        assert!(!is_homotopism(&h, &h, &bad).unwrap());

        let good = Homotopism {
            f2: two_i,
            f1: Matrix::identity(f.clone(), 2),
            f0: Matrix::identity(f.clone(), 1).scalar_mul(2),
        };
        assert!(is_homotopism(&h, &h, &good).unwrap());
    }

    #[test]
    fn shuffle_isotopism_examples() {
        let f = gf(3);
        let h = Bimap::from_int_slices(&f, &[vec![vec![0, 1], vec![-1, 0]]]).unwrap();
        let id = Homotopism::identity(&h);
        for sigma in Perm3::all() {
            let hs = id.shuffle(&sigma).unwrap();
            let us = h.shuffle(&sigma);
            assert!(is_homotopism(&us, &us, &hs).unwrap());
        }
        // swap21 exchanges f2 and f1
        let g = Homotopism {
            f2: Matrix::from_ints(&f, &[vec![1, 1], vec![0, 1]]),
            f1: Matrix::from_ints(&f, &[vec![1, 0], vec![2, 1]]),
            f0: Matrix::identity(f.clone(), 1),
        };
        let gs = g.shuffle(&Perm3::transposition(2, 1)).unwrap();
        assert_eq!(gs.f2, g.f1);
        assert_eq!(gs.f1, g.f2);
        assert_eq!(gs.f0, g.f0);
    }

    #[test]
    fn shuffle_isotopism_10_roundtrip_random() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let f = gf(3);
        let sigma = Perm3::transposition(1, 0);
        for _ in 0..20 {
            let slices: Vec<Vec<Vec<i64>>> = (0..2)
                .map(|_| {
                    (0..2)
                        .map(|_| (0..2).map(|_| rng.gen_range(0..3)).collect())
                        .collect()
                })
                .collect();
            let u = Bimap::from_int_slices(&f, &slices).unwrap();
            // pick a random autotopism-ish triple; use identity (always valid)
            let iso = Homotopism::identity(&u);
            let hat = iso.shuffle(&sigma).unwrap();
            let us = u.shuffle(&sigma);
            assert!(is_homotopism(&us, &us, &hat).unwrap());
            let back = hat.shuffle(&sigma).unwrap();
            assert_eq!(back, iso);
        }
    }

    #[test]
    fn intersect_examples() {
        let d = bimap_d();
        let single = Bimap::intersect(std::slice::from_ref(&d)).unwrap();
        assert_eq!(single, d);
        let parts = d.split_slices();
        let rejoined = Bimap::intersect(&parts).unwrap();
        assert_eq!(rejoined, d);

        let h = Bimap::from_int_slices(&gf(2), &[vec![vec![0, 1], vec![1, 0]]]).unwrap();
        let doubled = Bimap::intersect(&[h.clone(), h.clone()]).unwrap();
        assert_eq!(doubled.dims.2, 2);
        assert_eq!(doubled.slices[0], doubled.slices[1]);
    }

    #[test]
    fn orthogonal_check_examples() {
        let f = gf(3);
        let u = Bimap::from_int_slices(&f, &[vec![vec![1, 0, 0], vec![0, 1, 0]]]).unwrap();
        // trivial partition
        let all2 = Subspace::full(f.clone(), 2);
        let all1 = Subspace::full(f.clone(), 3);
        assert!(orthogonal_check(&u, &[all2], &[all1]).unwrap());
        // coordinate split as in the worked example
        let p2: Vec<Subspace> = (0..2)
            .map(|i| {
                Subspace::from_spanning(&Matrix::from_fn(f.clone(), 1, 2, |_, j| u64::from(j == i)))
            })
            .collect();
        let p1: Vec<Subspace> = (0..3)
            .map(|i| {
                Subspace::from_spanning(&Matrix::from_fn(f.clone(), 1, 3, |_, j| u64::from(j == i)))
            })
            .collect();
        assert!(orthogonal_check(&u, &p2, &p1).unwrap());

        // Heisenberg split into coordinate lines is not orthogonal
        let f2 = gf(2);
        let h = Bimap::from_int_slices(&f2, &[vec![vec![0, 1], vec![1, 0]]]).unwrap();
        let q2: Vec<Subspace> = (0..2)
            .map(|i| {
                Subspace::from_spanning(&Matrix::from_fn(f2.clone(), 1, 2, |_, j| {
                    u64::from(j == i)
                }))
            })
            .collect();
        assert!(!orthogonal_check(&h, &q2, &q2.clone()).unwrap());
    }

    #[test]
    fn alternating_detection() {
        assert!(bimap_d().is_alternating());
        let f = gf(2);
        let h = Bimap::from_int_slices(&f, &[vec![vec![0, 1], vec![1, 0]]]).unwrap();
        assert!(h.is_alternating()); // zero diagonal in char 2
        assert!(h.is_symmetric());
    }
}
