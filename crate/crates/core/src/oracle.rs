//! Brute-force reference implementations. No cleverness: plain
//! enumeration filtered by the defining identities, with hard budgets.

use crate::bimap::{is_homotopism, Bimap, Homotopism};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::labels::enumerate_gl;
use crate::linalg::Matrix;

pub const ORACLE_BUDGET: u128 = 100_000_000;

fn gl_order(q: u128, n: usize) -> u128 {
    let qn = q.pow(n as u32);
    let mut acc: u128 = 1;
    let mut qi: u128 = 1;
    for _ in 0..n {
        acc *= qn - qi;
        qi *= q;
    }
    acc
}

/// Exact set of isotopisms U -> V by triple enumeration.
pub fn brute_isotopisms(u: &Bimap, v: &Bimap, budget: u128) -> Result<Vec<Homotopism>> {
    if u.dims != v.dims || u.field != v.field {
        return Ok(vec![]);
    }
    let (a, b, c) = u.dims;
    let q = u.field.q() as u128;
    let work = gl_order(q, a) * gl_order(q, b) * gl_order(q, c);
    if work > budget {
        return Err(Error::budget("brute isotopism enumeration", work, budget));
    }
    let gl_a = enumerate_gl(&u.field, a, budget)?;
    let gl_b = enumerate_gl(&u.field, b, budget)?;
    let gl_c = enumerate_gl(&u.field, c, budget)?;
    let mut out = Vec::new();
    for f2 in &gl_a {
        for f1 in &gl_b {
            for f0 in &gl_c {
                let h = Homotopism {
                    f2: f2.clone(),
                    f1: f1.clone(),
                    f0: f0.clone(),
                };
                if is_homotopism(u, v, &h)? {
                    out.push(h);
                }
            }
        }
    }
    Ok(out)
}

/// Exact set of h-isometries f (with f S^V f^T matching the h-twist of U).
pub fn brute_isometries(u: &Bimap, v: &Bimap, h: &Matrix, budget: u128) -> Result<Vec<Matrix>> {
    if u.dims != v.dims || u.field != v.field {
        return Ok(vec![]);
    }
    let (a, _, _) = u.dims;
    let q = u.field.q() as u128;
    let work = gl_order(q, a);
    if work > budget {
        return Err(Error::budget("brute isometry enumeration", work, budget));
    }
    let mut out = Vec::new();
    for f in enumerate_gl(&u.field, a, budget)? {
        let hom = Homotopism {
            f2: f.clone(),
            f1: f.clone(),
            f0: h.clone(),
        };
        if is_homotopism(u, v, &hom)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Exact set of pseudo-isometries (f, f0): f x o f y = (x o y) f0.
pub fn brute_pseudo_isometries(
    u: &Bimap,
    v: &Bimap,
    budget: u128,
) -> Result<Vec<(Matrix, Matrix)>> {
    if u.dims != v.dims || u.field != v.field {
        return Ok(vec![]);
    }
    let (a, _, c) = u.dims;
    let q = u.field.q() as u128;
    let work = gl_order(q, a) * gl_order(q, c);
    if work > budget {
        return Err(Error::budget(
            "brute pseudo-isometry enumeration",
            work,
            budget,
        ));
    }
    let gl_a = enumerate_gl(&u.field, a, budget)?;
    let gl_c = enumerate_gl(&u.field, c, budget)?;
    let mut out = Vec::new();
    for f in &gl_a {
        for f0 in &gl_c {
            let hom = Homotopism {
                f2: f.clone(),
                f1: f.clone(),
                f0: f0.clone(),
            };
            if is_homotopism(u, v, &hom)? {
                out.push((f.clone(), f0.clone()));
            }
        }
    }
    Ok(out)
}

/// Exhaustive enumeration of all bimaps of the given dims over the field
/// (every slice system), in deterministic order.
pub fn all_bimaps(field: &Field, dims: (usize, usize, usize)) -> Vec<Bimap> {
    let (a, b, c) = dims;
    let entries = a * b * c;
    let q = field.q();
    let total = q.pow(entries as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut cc = code;
        let mut slices = Vec::with_capacity(c);
        for _ in 0..c {
            let mut m = Matrix::zero(field.clone(), a, b);
            for i in 0..a {
                for j in 0..b {
                    m.set(i, j, cc % q);
                    cc /= q;
                }
            }
            slices.push(m);
        }
        out.push(Bimap::new(field.clone(), dims, slices).unwrap());
    }
    out
}

/// Exhaustive graded isomorphisms for algebras generated in the single
/// degree [1]: enumerate f1 over GL(dim A_1), extend along the grading,
/// and collect the successes.
pub fn brute_graded_isomorphisms(
    a: &crate::graded::GradedAlgebra,
    b: &crate::graded::GradedAlgebra,
    budget: u128,
) -> Result<Vec<crate::graded::GradedMap>> {
    use crate::graded::{extend_homotopism, is_graded_homomorphism};
    let one: crate::graded::Degree = vec![1; a.monoid.rank()];
    if a.gen_degrees.len() != 1 || !a.gen_degrees.contains(&one) {
        return Err(Error::BadParameters(
            "graded oracle requires generation in degree 1".into(),
        ));
    }
    if a.components != b.components || a.field != b.field || a.monoid != b.monoid {
        return Ok(vec![]);
    }
    let d1 = a.dim_at(&one);
    let q = a.field.q() as u128;
    let work = gl_order(q, d1);
    if work > budget {
        return Err(Error::budget("brute graded enumeration", work, budget));
    }
    let mut out = Vec::new();
    for f1 in enumerate_gl(&a.field, d1, budget)? {
        let mut ft = std::collections::BTreeMap::new();
        ft.insert(one.clone(), f1);
        match extend_homotopism(a, b, &ft) {
            Ok(g) => {
                if g.is_invertible() && is_graded_homomorphism(a, b, &g)? {
                    out.push(g);
                }
            }
            Err(Error::NoExtension(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
