//! Principal autotopism groups, partial and full principal isotopisms,
//! and the isotopism coset search.
//!
//! Principal autotopisms fixing coordinate i are computed by shuffling i
//! into the codomain slot and taking units of the adjoint ring. A
//! principal isotopism with prescribed codomain map f0 is an invertible
//! pair in Adj(U^{f0}, V); it is found by a short random sample of that
//! space followed by the deterministic Fitting-split loop that assembles
//! a maximal partial isotopism one orthogonal factor at a time. The coset
//! search enumerates candidate codomain maps (all of GL, or only the
//! label-preserving ones) and lifts each through the principal machinery.

use crate::bimap::{is_homotopism, Bimap, Homotopism, Perm3};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::labels::{enumerate_gl, label_transporter_set, LabeledGeometry, GL_FILTER_BUDGET};
use crate::linalg::{fitting_split, Matrix, Subspace};
use crate::rings::{adjoint_space, pair_mul, pair_space_units, OperatorPairSpace, RingKind};
use crate::units::{nilpotency_witness, Nilpotency, UNIT_ENUM_BUDGET};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct PrincipalAutotopismGroup {
    pub fixed_index: u8,
    /// Autotopisms of U with the identity in slot `fixed_index`.
    pub generators: Vec<Homotopism>,
    pub order: u128,
    pub monte_carlo: bool,
}

fn shuffle_to_codomain(i: u8) -> Result<Perm3> {
    match i {
        0 => Ok(Perm3::identity()),
        1 => Ok(Perm3::transposition(1, 0)),
        2 => Ok(Perm3::transposition(2, 0)),
        _ => Err(Error::BadParameters(
            "coordinate index must be 0, 1 or 2".into(),
        )),
    }
}

/// Generators (all elements at desk scale) of Aut(U)^(i), via units of
/// the adjoint ring of the shuffled bimap.
pub fn principal_autotopism_group(
    u: &Bimap,
    i: u8,
    unit_budget: u128,
) -> Result<PrincipalAutotopismGroup> {
    let sigma = shuffle_to_codomain(i)?;
    let us = u.shuffle(&sigma);
    let m = adjoint_space(RingKind::M, &us, None)?;
    let units = pair_space_units(&m, unit_budget)?;
    let sigma_inv = sigma.inverse();
    let idc = Matrix::identity(us.field.clone(), us.dims.2);
    let mut generators = Vec::with_capacity(units.elements.len());
    for (f, g) in &units.elements {
        let h = Homotopism {
            f2: f.clone(),
            f1: g.inverse()?,
            f0: idc.clone(),
        };
        generators.push(h.shuffle(&sigma_inv)?);
    }
    Ok(PrincipalAutotopismGroup {
        fixed_index: i,
        generators,
        order: units.order,
        monte_carlo: units.monte_carlo,
    })
}

/// A maximal partial f0-isotopism: maps defined on orthogonal factors
/// U2+ and U1+, with the untreated complements recorded.
#[derive(Debug, Clone)]
pub struct PartialIsotopism {
    pub f0: Matrix,
    pub u2_plus: Subspace,
    pub u1_plus: Subspace,
    pub u2_minus: Subspace,
    pub u1_minus: Subspace,
    /// Raw basis rows of the treated U2 factors (ambient coordinates),
    /// row-aligned with `f2_images`.
    pub dom2_rows: Matrix,
    /// Images (ambient V2 coordinates) of the rows of `dom2_rows`.
    pub f2_images: Matrix,
    pub dom1_rows: Matrix,
    pub f1_images: Matrix,
}

impl PartialIsotopism {
    pub fn is_full(&self) -> bool {
        self.u2_minus.dim() == 0 && self.u1_minus.dim() == 0
    }
}

struct LoopState {
    w2: Subspace,
    w1: Subspace,
    z2: Subspace,
    z1: Subspace,
    dom2: Matrix,
    img2: Matrix,
    dom1: Matrix,
    img1: Matrix,
}

/// Deterministic construction of a maximal partial f0-isotopism by the
/// Fitting-split loop. Adjoint spaces are recomputed on the restricted
/// orthogonal factors each round.
pub fn partial_principal_isotopism(u: &Bimap, v: &Bimap, f0: &Matrix) -> Result<PartialIsotopism> {
    if u.dims.2 != v.dims.2 || f0.rows != u.dims.2 || f0.cols != v.dims.2 {
        return Err(Error::dim("partial isotopism: codomain map shape"));
    }
    if !f0.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let field = u.field.clone();
    let twisted = u.twist_codomain(f0)?;
    let (au, bu, _) = u.dims;
    let (av, bv, _) = v.dims;
    let mut st = LoopState {
        w2: Subspace::full(field.clone(), au),
        w1: Subspace::full(field.clone(), bu),
        z2: Subspace::full(field.clone(), av),
        z1: Subspace::full(field.clone(), bv),
        dom2: Matrix::zero(field.clone(), 0, au),
        img2: Matrix::zero(field.clone(), 0, av),
        dom1: Matrix::zero(field.clone(), 0, bu),
        img1: Matrix::zero(field.clone(), 0, bv),
    };
    loop {
        if st.w2.dim() == 0 && st.w1.dim() == 0 {
            break;
        }
        let asub = twisted.restrict(&st.w2, &st.w1)?;
        let bsub = v.restrict(&st.z2, &st.z1)?;
        let xs = adjoint_space(RingKind::Adj, &asub, Some(&bsub))?;
        let ys = adjoint_space(RingKind::Adj, &bsub, Some(&asub))?;
        if xs.dim() == 0 || ys.dim() == 0 {
            break;
        }
        // generators x_i y_j of the (possibly non-unital) algebra A <= M(asub)
        let mut gen_pairs = Vec::new();
        let mut gen_x = Vec::new();
        for (xi, x) in xs.basis.iter().enumerate() {
            for y in &ys.basis {
                gen_pairs.push(pair_mul(RingKind::Adj, x, y)?);
                gen_x.push(xi);
            }
        }
        let embedded: Vec<Matrix> = gen_pairs
            .iter()
            .map(|(l, r)| block_diag(l, &r.transpose()))
            .collect();
        let word = match nilpotency_witness(&embedded)? {
            Nilpotency::Nilpotent => break,
            Nilpotency::Witness(w, _) => w,
        };
        // z = x (y w...): recover the leading x and the trailing product r
        let x = &xs.basis[gen_x[word[0]]];
        let y_first = {
            let j = word[0] - gen_x[word[0]] * ys.basis.len();
            &ys.basis[j]
        };
        let mut rest = y_first.clone();
        for &wi in &word[1..] {
            rest = pair_mul(RingKind::Adj, &rest, &gen_pairs[wi])?;
        }
        let z = pair_mul(RingKind::Adj, x, &rest)?;
        debug_assert_eq!(
            {
                let mut acc = gen_pairs[word[0]].clone();
                for &wi in &word[1..] {
                    acc = pair_mul(RingKind::M, &acc, &gen_pairs[wi])?;
                }
                acc
            },
            z
        );
        extend_by_witness(&mut st, v, &z, x, &rest)?;
    }
    Ok(PartialIsotopism {
        f0: f0.clone(),
        u2_plus: Subspace::from_spanning(&st.dom2),
        u1_plus: Subspace::from_spanning(&st.dom1),
        u2_minus: st.w2,
        u1_minus: st.w1,
        dom2_rows: st.dom2,
        f2_images: st.img2,
        dom1_rows: st.dom1,
        f1_images: st.img1,
    })
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.rows + b.rows;
    let mut m = Matrix::zero(a.field.clone(), n, n);
    for i in 0..a.rows {
        for j in 0..a.cols {
            m.set(i, j, a.get(i, j));
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            m.set(a.rows + i, a.rows + j, b.get(i, j));
        }
    }
    m
}

/// One extension step: Fitting-split the witness z = x . rest on both
/// sides, extend f2 by x on the image part and f1 by the compensated
/// trailing map, and shrink the four minus-spaces.
fn extend_by_witness(
    st: &mut LoopState,
    v: &Bimap,
    z: &(Matrix, Matrix),
    x: &(Matrix, Matrix),
    rest: &(Matrix, Matrix),
) -> Result<()> {
    let field = v.field.clone();
    let (n0, _, _) = fitting_split(&z.0)?;
    let (n1, _, _) = fitting_split(&z.1)?;
    let n = n0.max(n1).max(1);
    let z0n = z.0.pow(n)?;
    let z1n = z.1.pow(n)?;
    let im0 = Subspace::from_spanning(&z0n);
    let ker0 = Subspace::from_spanning(&z0n.left_kernel());
    let im1 = Subspace::from_spanning(&z1n);
    let ker1 = Subspace::from_spanning(&z1n.left_kernel());

    // U2 side: f2 = restriction of x.0 to im(z0^n)
    if im0.dim() > 0 {
        let dom_coords = im0.basis.clone();
        let img_coords = dom_coords.mul(&x.0)?;
        let dom_amb = dom_coords.mul(&st.w2.basis)?;
        let img_amb = img_coords.mul(&st.z2.basis)?;
        st.dom2 = st.dom2.vstack(&dom_amb);
        st.img2 = st.img2.vstack(&img_amb);
    }
    // U1 side: f1 = (z1^n|im)^{-1} z1^{n-1} rest.1 on im(z1^n)
    if im1.dim() > 0 {
        let mz = im1.basis.mul(&z1n)?;
        let z1nm1 = z.1.pow(n - 1)?;
        let mut img_rows = Matrix::zero(field.clone(), 0, st.z1.dim());
        for i in 0..im1.basis.rows {
            let b = im1.basis.row(i);
            let (coeffs, _) = mz
                .solve_left(b)?
                .ok_or_else(|| Error::dim("fitting image solve failed"))?;
            let w = Matrix::new(field.clone(), 1, im1.basis.cols, {
                let mut acc = vec![0u64; im1.basis.cols];
                for (ci, &cv) in coeffs.iter().enumerate() {
                    for (j, a) in acc.iter_mut().enumerate() {
                        *a = field.add(*a, field.mul(cv, im1.basis.get(ci, j)));
                    }
                }
                acc
            });
            let img = w.mul(&z1nm1)?.mul(&rest.1)?;
            img_rows = img_rows.vstack(&img);
        }
        let dom_amb = im1.basis.mul(&st.w1.basis)?;
        let img_amb = img_rows.mul(&st.z1.basis)?;
        st.dom1 = st.dom1.vstack(&dom_amb);
        st.img1 = st.img1.vstack(&img_amb);
    }

    // shrink U-side minus spaces to the kernels
    let new_w2 = Subspace::from_spanning(&ker0.basis.mul(&st.w2.basis)?);
    let new_w1 = Subspace::from_spanning(&ker1.basis.mul(&st.w1.basis)?);
    // shrink V-side minus spaces: annihilate the new images, and carve
    // out the span of the used image directions (the pairing conditions
    // are vacuous along radical directions, so the annihilator alone may
    // keep directions already consumed by earlier factors)
    let ann2 = annihilator_left(v, &st.z2, &st.img1)?;
    let used2 = Subspace::from_spanning(&st.img2);
    let new_z2 = ann2.complement_within(&used2.intersect(&ann2));
    let ann1 = annihilator_right(v, &st.z1, &st.img2)?;
    let used1 = Subspace::from_spanning(&st.img1);
    let new_z1 = ann1.complement_within(&used1.intersect(&ann1));
    st.w2 = new_w2;
    st.w1 = new_w1;
    st.z2 = new_z2;
    st.z1 = new_z1;
    Ok(())
}

/// {z in old : z o_V w = 0 for every row w of `right_rows`}.
fn annihilator_left(v: &Bimap, old: &Subspace, right_rows: &Matrix) -> Result<Subspace> {
    let field = v.field.clone();
    let d = old.dim();
    let conds = right_rows.rows * v.dims.2;
    let mut coef = Matrix::zero(field.clone(), d, conds);
    for (k, s) in v.slices.iter().enumerate() {
        // old.basis (d x aV) * S_k (aV x bV) * right_rows^T
        let m = old.basis.mul(s)?.mul(&right_rows.transpose())?;
        for i in 0..d {
            for r in 0..right_rows.rows {
                coef.set(i, k * right_rows.rows + r, m.get(i, r));
            }
        }
    }
    let ker = coef.left_kernel();
    Ok(Subspace::from_spanning(&ker.mul(&old.basis)?))
}

/// {z in old : w o_V z = 0 for every row w of `left_rows`}.
fn annihilator_right(v: &Bimap, old: &Subspace, left_rows: &Matrix) -> Result<Subspace> {
    let field = v.field.clone();
    let d = old.dim();
    let conds = left_rows.rows * v.dims.2;
    let mut coef = Matrix::zero(field.clone(), d, conds);
    for (k, s) in v.slices.iter().enumerate() {
        // left_rows (r x aV) * S_k * old.basis^T  -> transpose to index by z
        let m = left_rows.mul(s)?.mul(&old.basis.transpose())?;
        for i in 0..d {
            for r in 0..left_rows.rows {
                coef.set(i, k * left_rows.rows + r, m.get(r, i));
            }
        }
    }
    let ker = coef.left_kernel();
    Ok(Subspace::from_spanning(&ker.mul(&old.basis)?))
}

#[derive(Debug, Clone, Copy)]
pub struct LiftOptions {
    /// Number of seeded random elements of Adj(U^{f0}, V) to try before
    /// the deterministic loop.
    pub random_tries: usize,
    pub seed: u64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            random_tries: 16,
            seed: 0,
        }
    }
}

/// A full isotopism U -> V with prescribed f0, or None.
pub fn principal_isotopism(
    u: &Bimap,
    v: &Bimap,
    f0: &Matrix,
    opts: LiftOptions,
) -> Result<Option<Homotopism>> {
    if u.dims != v.dims {
        return Ok(None);
    }
    // quick random search for an invertible adjoint pair
    if opts.random_tries > 0 {
        let twisted = u.twist_codomain(f0)?;
        let adj = adjoint_space(RingKind::Adj, &twisted, Some(v))?;
        if adj.dim() > 0 {
            let mut rng = crate::gen::rng_from_seed(opts.seed);
            for _ in 0..opts.random_tries {
                let coeffs: Vec<u64> = (0..adj.dim())
                    .map(|_| rng.gen_range(0..u.field.q()))
                    .collect();
                let (x, y) = adj.element(&coeffs);
                if x.is_invertible() && y.is_invertible() {
                    let h = Homotopism {
                        f2: x,
                        f1: y.inverse()?,
                        f0: f0.clone(),
                    };
                    if is_homotopism(u, v, &h)? {
                        return Ok(Some(h));
                    }
                }
            }
        } else {
            return Ok(None);
        }
    }
    let partial = partial_principal_isotopism(u, v, f0)?;
    if !partial.is_full() {
        return Ok(None);
    }
    if partial.dom2_rows.rows != u.dims.0 || partial.dom1_rows.rows != u.dims.1 {
        return Ok(None);
    }
    if !partial.dom2_rows.is_invertible() || !partial.dom1_rows.is_invertible() {
        return Ok(None);
    }
    // domain_rows * F = image_rows
    let f2 = partial.dom2_rows.inverse()?.mul(&partial.f2_images)?;
    let f1 = partial.dom1_rows.inverse()?.mul(&partial.f1_images)?;
    if !f2.is_invertible() || !f1.is_invertible() {
        return Ok(None);
    }
    let h = Homotopism {
        f2,
        f1,
        f0: f0.clone(),
    };
    if is_homotopism(u, v, &h)? {
        Ok(Some(h))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GStrategy {
    Full,
    Labels,
    TrivialPlus,
}

#[derive(Debug, Clone)]
pub struct CosetOptions {
    pub strategy: GStrategy,
    pub gl_budget: u128,
    pub unit_budget: u128,
    pub lift: LiftOptions,
}

impl Default for CosetOptions {
    fn default() -> Self {
        CosetOptions {
            strategy: GStrategy::Labels,
            gl_budget: GL_FILTER_BUDGET,
            unit_budget: UNIT_ENUM_BUDGET,
            lift: LiftOptions::default(),
        }
    }
}

/// The coset of isotopisms U -> V, encoded as one representative plus
/// stabilizer data: the principal autotopisms of U (identity on the
/// shuffled codomain) and the lifted codomain maps.
#[derive(Debug, Clone)]
pub struct IsotopismCoset {
    pub representative: Option<Homotopism>,
    /// Autotopisms of U with identity codomain component (unshuffled).
    pub aut0_generators: Vec<Homotopism>,
    /// Candidate codomain maps that lifted, with one lift each (maps U -> V).
    pub lifted: Vec<(Matrix, Homotopism)>,
    pub lift_count: u128,
    pub m_unit_order: u128,
    /// |Iso(U, V)| when computed exactly.
    pub order: Option<u128>,
    pub sigma: Perm3,
    pub monte_carlo: bool,
}

impl IsotopismCoset {
    pub fn is_empty(&self) -> bool {
        self.representative.is_none()
    }

    fn empty(sigma: Perm3) -> IsotopismCoset {
        IsotopismCoset {
            representative: None,
            aut0_generators: vec![],
            lifted: vec![],
            lift_count: 0,
            m_unit_order: 0,
            order: Some(0),
            sigma,
            monte_carlo: false,
        }
    }
}

/// Choose the shuffle placing the smallest coordinate at the codomain.
/// Ties prefer no shuffle, then the (1,0) swap.
pub fn minimizing_shuffle(dims: (usize, usize, usize)) -> Perm3 {
    let (a, b, c) = dims;
    let mut best = (c, 0u8);
    if b < best.0 {
        best = (b, 1);
    }
    if a < best.0 {
        best = (a, 2);
    }
    shuffle_to_codomain(best.1).unwrap()
}

pub fn isotopism_coset(u: &Bimap, v: &Bimap, opts: &CosetOptions) -> Result<IsotopismCoset> {
    let sigma = minimizing_shuffle(u.dims);
    if u.dims != v.dims || u.field != v.field {
        return Ok(IsotopismCoset::empty(sigma));
    }
    let us = u.shuffle(&sigma);
    let vs = v.shuffle(&sigma);
    let c = us.dims.2;
    let field: Field = us.field.clone();

    let m_space: OperatorPairSpace = adjoint_space(RingKind::M, &us, None)?;
    let units = pair_space_units(&m_space, opts.unit_budget)?;
    let sigma_inv = sigma.inverse();
    let idc = Matrix::identity(field.clone(), c);
    let mut aut0 = Vec::with_capacity(units.elements.len());
    for (fm, gm) in &units.elements {
        let h = Homotopism {
            f2: fm.clone(),
            f1: gm.inverse()?,
            f0: idc.clone(),
        };
        aut0.push(h.shuffle(&sigma_inv)?);
    }

    let candidates: Vec<Matrix> = match opts.strategy {
        GStrategy::Full => enumerate_gl(&field, c, opts.gl_budget)?,
        GStrategy::Labels => {
            let gu = LabeledGeometry::of(&us);
            let gv = LabeledGeometry::of(&vs);
            label_transporter_set(&field, &gu, &gv, opts.gl_budget)?
        }
        GStrategy::TrivialPlus => vec![idc.clone()],
    };

    let mut lifted = Vec::new();
    let mut representative = None;
    for (gi, g) in candidates.iter().enumerate() {
        let lift_opts = LiftOptions {
            random_tries: opts.lift.random_tries,
            seed: crate::gen::split_seed(opts.lift.seed, gi as u64),
        };
        if let Some(h) = principal_isotopism(&us, &vs, g, lift_opts)? {
            let back = h.shuffle(&sigma_inv)?;
            debug_assert!(is_homotopism(u, v, &back)?);
            if representative.is_none() {
                representative = Some(back.clone());
            }
            lifted.push((g.clone(), back));
        }
    }

    let exact = opts.strategy != GStrategy::TrivialPlus && !units.monte_carlo;
    let lift_count = lifted.len() as u128;
    let order = if exact {
        Some(units.order * lift_count)
    } else {
        None
    };
    Ok(IsotopismCoset {
        representative,
        aut0_generators: aut0,
        lifted,
        lift_count,
        m_unit_order: units.order,
        order,
        sigma,
        monte_carlo: units.monte_carlo,
    })
}
