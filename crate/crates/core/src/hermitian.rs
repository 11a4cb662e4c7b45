//! Isometry and pseudo-isometry machinery for bimaps with (anti)symmetric
//! slice systems.
//!
//! An h-isometry U -> V is an invertible f with (f, f, h) a homotopism.
//! Writing U' for U twisted by h, such f correspond to pairs
//! (f, f^{-1}) in Adj(U', V). Given one invertible pair p0 = (x0, y0)
//! from the principal-isotopism machinery, Adj(U', V) = M(U') p0, so the
//! h-isometries are exactly {F x0 : (F, G) in M(U'), F (x0 y0) G = 1}.
//! That condition is decided exactly by enumerating M(U') under a budget,
//! after a fast path that searches for a square root of w = x0 y0 inside
//! the commutative algebra K[w] (valid because (w, w) lies in M(U') for
//! slice systems of a common symmetry sign).

use crate::bimap::{is_homotopism, Bimap, Homotopism};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::labels::{enumerate_gl, label_transporter_set, LabeledGeometry, GL_FILTER_BUDGET};
use crate::linalg::Matrix;
use crate::rings::{adjoint_space, RingKind};
use crate::units::CoeffOdometer;
use rand::Rng;

/// Default budget for exhaustive enumeration of the adjoint ring in the
/// unitary searches: q^dim <= 2^26.
pub const UNITARY_ENUM_BUDGET: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianBimap {
    pub base: Bimap,
    /// +1 symmetric, -1 alternating.
    pub sign: i8,
}

impl HermitianBimap {
    pub fn new(base: Bimap, sign: i8) -> Result<HermitianBimap> {
        let ok = match sign {
            1 => base.is_symmetric(),
            -1 => base.is_alternating(),
            _ => false,
        };
        if !ok {
            return Err(Error::NotHermitianSlices);
        }
        Ok(HermitianBimap { base, sign })
    }

    /// Classify a square slice system, preferring the alternating sign.
    pub fn detect(base: Bimap) -> Result<HermitianBimap> {
        if base.is_alternating() {
            Ok(HermitianBimap { base, sign: -1 })
        } else if base.is_symmetric() {
            Ok(HermitianBimap { base, sign: 1 })
        } else {
            Err(Error::NotHermitianSlices)
        }
    }

    pub fn dim(&self) -> usize {
        self.base.dims.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryMethod {
    /// Unitary elements of the adjoint ring, enumerated exhaustively.
    AdjointUnitary,
    /// Direct filter of GL(a, q) by the isometry identity.
    ExhaustiveGl,
}

#[derive(Debug, Clone)]
pub struct IsometryGroup {
    pub generators: Vec<Matrix>,
    pub order: u128,
    pub method: IsometryMethod,
}

/// Flat product c = a*b of n x n matrices stored as row-major slices.
#[inline]
fn flat_mul(f: &Field, a: &[Scalar], b: &[Scalar], c: &mut [Scalar], n: usize) {
    for x in c.iter_mut() {
        *x = 0;
    }
    for i in 0..n {
        for l in 0..n {
            let av = a[i * n + l];
            if av == 0 {
                continue;
            }
            let brow = &b[l * n..(l + 1) * n];
            let crow = &mut c[i * n..(i + 1) * n];
            for (cv, &bv) in crow.iter_mut().zip(brow) {
                if bv != 0 {
                    *cv = f.add(*cv, f.mul(av, bv));
                }
            }
        }
    }
}

#[inline]
fn flat_is_identity(c: &[Scalar], n: usize) -> bool {
    for i in 0..n {
        for j in 0..n {
            let want = u64::from(i == j);
            if c[i * n + j] != want {
                return false;
            }
        }
    }
    true
}

/// Enumerate the pair space of M(U') and report every F with F w G = 1.
/// With w = I this lists the unitary group {F : (F, F^{-1}) in M}.
fn unitary_enumeration(
    m_space: &crate::rings::OperatorPairSpace,
    w: &Matrix,
    budget: u128,
    collect_all: bool,
) -> Result<(u128, Vec<Matrix>)> {
    let field = m_space.field.clone();
    let n = m_space.left_shape.0;
    debug_assert_eq!(m_space.right_shape.0, n);
    let size = (field.q() as u128).pow(m_space.dim() as u32);
    if size > budget {
        return Err(Error::budget("unitary enumeration", size, budget));
    }
    let flat_basis: Vec<Vec<Scalar>> = m_space
        .basis
        .iter()
        .map(|(l, r)| {
            let mut v = l.entries().to_vec();
            v.extend_from_slice(r.entries());
            v
        })
        .collect();
    let nn = n * n;
    let wflat = w.entries().to_vec();
    let mut odo = CoeffOdometer::new(field.clone(), flat_basis);
    let mut tmp1 = vec![0u64; nn];
    let mut tmp2 = vec![0u64; nn];
    let mut count: u128 = 0;
    let mut found = Vec::new();
    loop {
        let fpart = &odo.acc[..nn];
        let gpart = &odo.acc[nn..];
        // F w G == I
        flat_mul(&field, fpart, &wflat, &mut tmp1, n);
        flat_mul(&field, &tmp1, gpart, &mut tmp2, n);
        if flat_is_identity(&tmp2, n) {
            count += 1;
            if collect_all || found.is_empty() {
                found.push(Matrix::new(field.clone(), n, n, fpart.to_vec()));
            }
            if !collect_all {
                return Ok((count, found));
            }
        }
        if !odo.step() {
            break;
        }
    }
    Ok((count, found))
}

/// Generators (all elements) and exact order of Isom(U).
pub fn isometry_group(
    u: &HermitianBimap,
    method: IsometryMethod,
    budget: u128,
) -> Result<IsometryGroup> {
    let a = u.dim();
    let field = u.base.field.clone();
    match method {
        IsometryMethod::AdjointUnitary => {
            let m = adjoint_space(RingKind::M, &u.base, None)?;
            let id = Matrix::identity(field, a);
            let (order, generators) = unitary_enumeration(&m, &id, budget, true)?;
            Ok(IsometryGroup {
                generators,
                order,
                method,
            })
        }
        IsometryMethod::ExhaustiveGl => {
            let id0 = Matrix::identity(field.clone(), u.base.dims.2);
            let mut generators = Vec::new();
            for f in enumerate_gl(&field, a, budget)? {
                let h = Homotopism {
                    f2: f.clone(),
                    f1: f.clone(),
                    f0: id0.clone(),
                };
                if is_homotopism(&u.base, &u.base, &h)? {
                    generators.push(f);
                }
            }
            let order = generators.len() as u128;
            Ok(IsometryGroup {
                generators,
                order,
                method,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IsometryOptions {
    pub unitary_budget: u128,
    pub gl_budget: u128,
    pub random_tries: usize,
    /// Random pair samples for the square-root fast path.
    pub sqrt_samples: usize,
    pub seed: u64,
    /// Allow the GL(a, q) fallback when the adjoint enumeration is over
    /// budget.
    pub allow_gl_fallback: bool,
}

impl Default for IsometryOptions {
    fn default() -> Self {
        IsometryOptions {
            unitary_budget: UNITARY_ENUM_BUDGET,
            gl_budget: GL_FILTER_BUDGET,
            random_tries: 16,
            sqrt_samples: 48,
            seed: 0,
            allow_gl_fallback: true,
        }
    }
}

/// One h-isometry f: U -> V (so (f, f, h) is a homotopism), or None.
pub fn isometry_coset(
    u: &HermitianBimap,
    v: &HermitianBimap,
    h: &Matrix,
    opts: IsometryOptions,
) -> Result<Option<Matrix>> {
    if u.base.dims != v.base.dims || u.sign != v.sign {
        return Ok(None);
    }
    let field = u.base.field.clone();
    let a = u.dim();
    let verify = |f: &Matrix| -> Result<bool> {
        let hom = Homotopism {
            f2: f.clone(),
            f1: f.clone(),
            f0: h.clone(),
        };
        is_homotopism(&u.base, &v.base, &hom)
    };
    let twisted = u.base.twist_codomain(h)?;
    // step 1: an invertible adjoint pair, i.e. a principal isotopism
    let lift = crate::isotopism::principal_isotopism(
        &twisted,
        &v.base,
        &Matrix::identity(field.clone(), u.base.dims.2),
        crate::isotopism::LiftOptions {
            random_tries: opts.random_tries,
            seed: opts.seed,
        },
    )?;
    let Some(iso) = lift else { return Ok(None) };
    let x0 = iso.f2.clone();
    let y0 = iso.f1.inverse()?;
    let w = x0.mul(&y0)?;
    if w == Matrix::identity(field.clone(), a) {
        debug_assert!(verify(&x0)?);
        return Ok(Some(x0));
    }
    // decisive route: enumerate M(U') and test F w G = 1, with early exit
    let m = adjoint_space(RingKind::M, &twisted, None)?;
    match unitary_enumeration(&m, &w, opts.unitary_budget, false) {
        Ok((count, found)) => {
            if count == 0 {
                return Ok(None);
            }
            let f = found[0].mul(&x0)?;
            if verify(&f)? {
                return Ok(Some(f));
            }
            return Err(Error::NotHermitianSlices);
        }
        Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    // adjoint ring too large to enumerate: sample invertible pairs and
    // look for square roots of w' in the commutative algebra K[w']
    let adj = adjoint_space(RingKind::Adj, &twisted, Some(&v.base))?;
    let mut rng = crate::gen::rng_from_seed(crate::gen::split_seed(opts.seed, 0x5154));
    for attempt in 0..opts.sqrt_samples {
        let (xc, yc) = if attempt == 0 {
            (x0.clone(), y0.clone())
        } else {
            let coeffs: Vec<u64> = (0..adj.dim())
                .map(|_| rng.gen_range(0..field.q()))
                .collect();
            let (x, y) = adj.element(&coeffs);
            if !x.is_invertible() || !y.is_invertible() {
                continue;
            }
            (x.clone(), y.inverse()?)
        };
        let wc = xc.mul(&yc)?;
        if let Some(vroot) = sqrt_in_commutant(&wc)? {
            let f = vroot.inverse()?.mul(&xc)?;
            if verify(&f)? {
                return Ok(Some(f));
            }
        }
    }
    if opts.allow_gl_fallback {
        // last resort: filter GL(a, q); exact but only viable for tiny a
        for f in enumerate_gl(&field, a, opts.gl_budget)? {
            if verify(&f)? {
                return Ok(Some(f));
            }
        }
        return Ok(None);
    }
    Err(Error::budget(
        "isometry coset adjoint enumeration",
        (field.q() as u128).pow(m.dim() as u32),
        opts.unitary_budget,
    ))
}

/// A square root of w inside the commutative algebra K[w], if one exists
/// there: first by the odd-order shortcut, then by exhausting K[w] when
/// it is small.
fn sqrt_in_commutant(w: &Matrix) -> Result<Option<Matrix>> {
    let field = w.field.clone();
    let n = w.rows;
    let id = Matrix::identity(field.clone(), n);
    // multiplicative order of w, capped
    let cap = 4096u64;
    let mut pw = w.clone();
    let mut ord = 1u64;
    while pw != id && ord < cap {
        pw = pw.mul(w)?;
        ord += 1;
    }
    if pw == id && ord % 2 == 1 {
        let half = w.pow(ord.div_ceil(2) as u32)?;
        return Ok(Some(half));
    }
    // basis of K[w] by powers
    let mut basis: Vec<Matrix> = vec![id.clone()];
    let mut stacked = crate::units::span_basis(&field, n, &basis);
    let mut cur = w.clone();
    loop {
        let mut with = stacked.clone();
        with.push(cur.clone());
        let next = crate::units::span_basis(&field, n, &with);
        if next.len() == stacked.len() {
            break;
        }
        stacked = next;
        basis.push(cur.clone());
        cur = cur.mul(w)?;
    }
    let t = stacked.len();
    let size = (field.q() as u128).pow(t as u32);
    if size > (1 << 20) {
        return Ok(None);
    }
    let flat: Vec<Vec<Scalar>> = stacked.iter().map(|m| m.entries().to_vec()).collect();
    let mut odo = CoeffOdometer::new(field.clone(), flat);
    let nn = n * n;
    let mut tmp = vec![0u64; nn];
    loop {
        flat_mul(&field, &odo.acc, &odo.acc, &mut tmp, n);
        if tmp == *w.entries() {
            let v = Matrix::new(field.clone(), n, n, odo.acc.clone());
            if v.is_invertible() {
                return Ok(Some(v));
            }
        }
        if !odo.step() {
            break;
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct PseudoIsometryCoset {
    /// (f, f0) with (f, f, f0) a homotopism U -> V.
    pub representative: Option<(Matrix, Matrix)>,
    /// Candidate codomain maps that lifted, with their lifts.
    pub lifted: Vec<(Matrix, Matrix)>,
    pub lift_count: u128,
    /// Number of candidate codomain maps scanned (|Omega| under the
    /// labels strategy with U = V).
    pub candidate_count: u128,
    /// The same counts modulo scalars: the order of the induced groups
    /// on the projective geometry of the codomain.
    pub candidate_projective_count: u128,
    pub lift_projective_count: u128,
    pub isometry_group_order: Option<u128>,
    /// |PsiIsom(U)|-sized coset when both factors are exact.
    pub order: Option<u128>,
}

#[derive(Debug, Clone)]
pub struct PseudoOptions {
    pub strategy: crate::isotopism::GStrategy,
    pub gl_budget: u128,
    pub isometry: IsometryOptions,
    /// Compute |Isom(U)| for the order report (may cost an enumeration).
    pub with_isometry_group: bool,
}

impl Default for PseudoOptions {
    fn default() -> Self {
        PseudoOptions {
            strategy: crate::isotopism::GStrategy::Labels,
            gl_budget: GL_FILTER_BUDGET,
            isometry: IsometryOptions::default(),
            with_isometry_group: true,
        }
    }
}

/// Scan candidate codomain maps h (all of GL(c, q) or only the label
/// transporter set) and lift each through `isometry_coset`.
pub fn pseudo_isometry_coset(
    u: &HermitianBimap,
    v: &HermitianBimap,
    opts: &PseudoOptions,
) -> Result<PseudoIsometryCoset> {
    if u.base.dims != v.base.dims || u.sign != v.sign || u.base.field != v.base.field {
        return Ok(PseudoIsometryCoset {
            representative: None,
            lifted: vec![],
            lift_count: 0,
            candidate_count: 0,
            candidate_projective_count: 0,
            lift_projective_count: 0,
            isometry_group_order: None,
            order: Some(0),
        });
    }
    let field = u.base.field.clone();
    let c = u.base.dims.2;
    let candidates: Vec<Matrix> = match opts.strategy {
        crate::isotopism::GStrategy::Full => enumerate_gl(&field, c, opts.gl_budget)?,
        crate::isotopism::GStrategy::Labels => {
            let gu = LabeledGeometry::of(&u.base);
            let gv = LabeledGeometry::of(&v.base);
            label_transporter_set(&field, &gu, &gv, opts.gl_budget)?
        }
        crate::isotopism::GStrategy::TrivialPlus => vec![Matrix::identity(field.clone(), c)],
    };
    let mut lifted = Vec::new();
    for (hi, h) in candidates.iter().enumerate() {
        let mut iopts = opts.isometry;
        iopts.seed = crate::gen::split_seed(opts.isometry.seed, hi as u64);
        if let Some(f) = isometry_coset(u, v, h, iopts)? {
            lifted.push((h.clone(), f));
        }
    }
    let isometry_group_order = if opts.with_isometry_group {
        match isometry_group(
            u,
            IsometryMethod::AdjointUnitary,
            opts.isometry.unitary_budget,
        ) {
            Ok(g) => Some(g.order),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let lift_count = lifted.len() as u128;
    let exact_candidates = opts.strategy != crate::isotopism::GStrategy::TrivialPlus;
    let order = match (isometry_group_order, exact_candidates) {
        (Some(i), true) => Some(i * lift_count),
        _ => None,
    };
    let representative = lifted.first().map(|(h, f)| (f.clone(), h.clone()));
    let lifted_h: Vec<Matrix> = lifted.iter().map(|(h, _)| h.clone()).collect();
    Ok(PseudoIsometryCoset {
        representative,
        lift_count,
        candidate_count: candidates.len() as u128,
        candidate_projective_count: crate::labels::projective_class_count(&field, &candidates),
        lift_projective_count: crate::labels::projective_class_count(&field, &lifted_h),
        lifted,
        isometry_group_order,
        order,
    })
}
