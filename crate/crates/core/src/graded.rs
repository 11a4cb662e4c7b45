//! Graded algebras over truncated commutative monoids: loading and
//! validation, regrading, homotopism extension along the grading, graded
//! isomorphism cosets through the bimap isotopism machinery, and layer
//! selection.

use crate::bimap::Bimap;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::isotopism::{isotopism_coset, CosetOptions};
use crate::linalg::Matrix;
use crate::rings::{adjoint_space, pair_space_units, RingKind};
use std::collections::{BTreeMap, BTreeSet};

/// A degree in the grading monoid.
pub type Degree = Vec<u32>;

/// Product of truncated cyclic monoids N_l, one truncation per rank.
/// Addition saturates componentwise at the truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidDescriptor {
    pub truncations: Vec<u32>,
}

impl MonoidDescriptor {
    pub fn rank(&self) -> usize {
        self.truncations.len()
    }

    pub fn add(&self, a: &Degree, b: &Degree) -> Degree {
        a.iter()
            .zip(b)
            .zip(&self.truncations)
            .map(|((&x, &y), &l)| (x + y).min(l))
            .collect()
    }

    pub fn zero(&self) -> Degree {
        vec![0; self.rank()]
    }

    /// Divisibility preorder: a < b iff some c gives a + c = b. With
    /// saturation this is componentwise <=, except that a saturated
    /// coordinate of b absorbs anything.
    pub fn leq(&self, a: &Degree, b: &Degree) -> bool {
        a.iter()
            .zip(b)
            .zip(&self.truncations)
            .all(|((&x, &y), &l)| x <= y || y == l)
    }

    pub fn valid_degree(&self, d: &Degree) -> bool {
        d.len() == self.rank() && d.iter().zip(&self.truncations).all(|(&x, &l)| x <= l)
    }
}

/// Structure-constant tensor of one product A_s x A_t -> A_{s+t}:
/// data[(i * d1 + j) * d0 + k].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor3 {
    pub d2: usize,
    pub d1: usize,
    pub d0: usize,
    pub data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zero(d2: usize, d1: usize, d0: usize) -> Tensor3 {
        Tensor3 {
            d2,
            d1,
            d0,
            data: vec![0; d2 * d1 * d0],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.data[(i * self.d1 + j) * self.d0 + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        self.data[(i * self.d1 + j) * self.d0 + k] = v;
    }

    pub fn row(&self, i: usize, j: usize) -> &[Scalar] {
        let base = (i * self.d1 + j) * self.d0;
        &self.data[base..base + self.d0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    pub field: Field,
    pub monoid: MonoidDescriptor,
    /// Nonzero homogeneous components only.
    pub components: BTreeMap<Degree, usize>,
    /// Product tensors for support pairs; absent pairs are zero maps.
    pub products: BTreeMap<(Degree, Degree), Tensor3>,
    pub gen_degrees: BTreeSet<Degree>,
}

impl GradedAlgebra {
    pub fn dim_at(&self, d: &Degree) -> usize {
        self.components.get(d).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().sum()
    }

    pub fn support(&self) -> Vec<Degree> {
        self.components.keys().cloned().collect()
    }

    pub fn tensor(&self, s: &Degree, t: &Degree) -> Tensor3 {
        match self.products.get(&(s.clone(), t.clone())) {
            Some(t3) => t3.clone(),
            None => Tensor3::zero(
                self.dim_at(s),
                self.dim_at(t),
                self.dim_at(&self.monoid.add(s, t)),
            ),
        }
    }

    /// Validated construction: tensor shapes must match the component
    /// dimensions and the algebra must be generated in `gen_degrees`.
    pub fn new(
        field: Field,
        monoid: MonoidDescriptor,
        components: BTreeMap<Degree, usize>,
        products: BTreeMap<(Degree, Degree), Tensor3>,
        gen_degrees: BTreeSet<Degree>,
    ) -> Result<GradedAlgebra> {
        let components: BTreeMap<Degree, usize> =
            components.into_iter().filter(|(_, d)| *d > 0).collect();
        for d in components.keys() {
            if !monoid.valid_degree(d) {
                return Err(Error::InconsistentDims(format!(
                    "degree {d:?} outside the monoid"
                )));
            }
        }
        for t in &gen_degrees {
            if !monoid.valid_degree(t) {
                return Err(Error::InconsistentDims(format!(
                    "generation degree {t:?} outside the monoid"
                )));
            }
        }
        let alg = GradedAlgebra {
            field,
            monoid,
            components,
            products,
            gen_degrees,
        };
        for ((s, t), tensor) in &alg.products {
            let target = alg.monoid.add(s, t);
            if tensor.d2 != alg.dim_at(s)
                || tensor.d1 != alg.dim_at(t)
                || tensor.d0 != alg.dim_at(&target)
            {
                return Err(Error::InconsistentDims(format!(
                    "tensor at ({s:?},{t:?}) has shape {}x{}x{}, components say {}x{}x{}",
                    tensor.d2,
                    tensor.d1,
                    tensor.d0,
                    alg.dim_at(s),
                    alg.dim_at(t),
                    alg.dim_at(&target)
                )));
            }
        }
        alg.check_generated()?;
        Ok(alg)
    }

    /// Ordered pairs (s1, s2) of support degrees with s1 + s2 = s and
    /// neither s1 nor s2 in {0, s}.
    pub fn decompositions(&self, s: &Degree) -> Vec<(Degree, Degree)> {
        let zero = self.monoid.zero();
        let mut out = Vec::new();
        for s1 in self.components.keys() {
            for s2 in self.components.keys() {
                if s1 == &zero || s2 == &zero || s1 == s || s2 == s {
                    continue;
                }
                if &self.monoid.add(s1, s2) == s {
                    out.push((s1.clone(), s2.clone()));
                }
            }
        }
        out
    }

    fn check_generated(&self) -> Result<()> {
        let zero = self.monoid.zero();
        for (s, &dim) in &self.components {
            if self.gen_degrees.contains(s) || s == &zero {
                continue;
            }
            // stack the images of all products landing in A_s
            let mut rows = Matrix::zero(self.field.clone(), 0, dim);
            for (s1, s2) in self.decompositions(s) {
                let t = self.tensor(&s1, &s2);
                for i in 0..t.d2 {
                    for j in 0..t.d1 {
                        let row = Matrix::new(self.field.clone(), 1, dim, t.row(i, j).to_vec());
                        rows = rows.vstack(&row);
                    }
                }
            }
            if rows.rank() != dim {
                return Err(Error::NotGenerated(s.to_vec()));
            }
        }
        Ok(())
    }

    /// The restricted bimap A_T x A_S -> A_{S+T}, with the ordered degree
    /// lists of each side.
    pub fn restricted_bimap(
        &self,
        t_degs: &[Degree],
        s_degs: &[Degree],
    ) -> Result<(Bimap, Vec<Degree>)> {
        let mut target_set: BTreeSet<Degree> = BTreeSet::new();
        for t in t_degs {
            for s in s_degs {
                let u = self.monoid.add(t, s);
                if self.dim_at(&u) > 0 {
                    target_set.insert(u);
                }
            }
        }
        let targets: Vec<Degree> = target_set.into_iter().collect();
        let dim2: usize = t_degs.iter().map(|d| self.dim_at(d)).sum();
        let dim1: usize = s_degs.iter().map(|d| self.dim_at(d)).sum();
        let dim0: usize = targets.iter().map(|d| self.dim_at(d)).sum();
        let mut slices = vec![Matrix::zero(self.field.clone(), dim2, dim1); dim0];
        let mut off0 = BTreeMap::new();
        {
            let mut acc = 0usize;
            for u in &targets {
                off0.insert(u.clone(), acc);
                acc += self.dim_at(u);
            }
        }
        let mut off2 = 0usize;
        for t in t_degs {
            let mut off1 = 0usize;
            for s in s_degs {
                let u = self.monoid.add(t, s);
                if let Some(&base0) = off0.get(&u) {
                    let tn = self.tensor(t, s);
                    for i in 0..tn.d2 {
                        for j in 0..tn.d1 {
                            for k in 0..tn.d0 {
                                let v = tn.get(i, j, k);
                                if v != 0 {
                                    slices[base0 + k].set(off2 + i, off1 + j, v);
                                }
                            }
                        }
                    }
                }
                off1 += self.dim_at(s);
            }
            off2 += self.dim_at(t);
        }
        let b = Bimap::new(self.field.clone(), (dim2, dim1, dim0), slices)?;
        Ok((b, targets))
    }
}

/// A per-degree family of linear maps A_s -> B_s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub maps: BTreeMap<Degree, Matrix>,
}

impl GradedMap {
    pub fn is_invertible(&self) -> bool {
        self.maps.values().all(|m| m.is_invertible())
    }
}

/// Check the homotopism identity of `f` on every stored product pair of
/// A or B.
pub fn is_graded_homomorphism(a: &GradedAlgebra, b: &GradedAlgebra, f: &GradedMap) -> Result<bool> {
    let field = &a.field;
    let mut pairs: BTreeSet<(Degree, Degree)> = a.products.keys().cloned().collect();
    pairs.extend(b.products.keys().cloned());
    for (s, t) in pairs {
        let u = a.monoid.add(&s, &t);
        let ta = a.tensor(&s, &t);
        let tb = b.tensor(&s, &t);
        let (Some(fs), Some(ft), fu) = (f.maps.get(&s), f.maps.get(&t), f.maps.get(&u)) else {
            if a.dim_at(&s) == 0 || a.dim_at(&t) == 0 {
                continue;
            }
            return Ok(false);
        };
        let fu = match fu {
            Some(m) => m.clone(),
            None => {
                if a.dim_at(&u) == 0 && b.dim_at(&u) == 0 {
                    Matrix::zero(field.clone(), 0, 0)
                } else {
                    return Ok(false);
                }
            }
        };
        for i in 0..ta.d2 {
            for j in 0..ta.d1 {
                // (e_i o e_j) f_u
                let lhs_row = Matrix::new(field.clone(), 1, ta.d0, ta.row(i, j).to_vec());
                let lhs = lhs_row.mul(&fu)?;
                // (e_i f_s) o (e_j f_t)
                let mut rhs = Matrix::zero(field.clone(), 1, tb.d0);
                for i2 in 0..tb.d2 {
                    let ci = fs.get(i, i2);
                    if ci == 0 {
                        continue;
                    }
                    for j2 in 0..tb.d1 {
                        let cj = ft.get(j, j2);
                        if cj == 0 {
                            continue;
                        }
                        let coef = field.mul(ci, cj);
                        for k in 0..tb.d0 {
                            let v = field.add(rhs.get(0, k), field.mul(coef, tb.get(i2, j2, k)));
                            rhs.set(0, k, v);
                        }
                    }
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Extend maps given on the generation degrees to a graded homomorphism
/// by the Noetherian sweep, or report the first failing degree.
pub fn extend_homotopism(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    f_t: &BTreeMap<Degree, Matrix>,
) -> Result<GradedMap> {
    let field = a.field.clone();
    let monoid = &a.monoid;
    let zero = monoid.zero();
    // the Require clause: on pairs inside T the given maps already form
    // homotopisms
    for t in a.gen_degrees.iter() {
        for r in a.gen_degrees.iter() {
            let u = monoid.add(t, r);
            if !a.gen_degrees.contains(&u) {
                continue;
            }
            let mut partial = GradedMap {
                maps: f_t.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            };
            partial
                .maps
                .entry(u.clone())
                .or_insert_with(|| Matrix::zero(field.clone(), a.dim_at(&u), b.dim_at(&u)));
            // check just this pair
            let ta = a.tensor(t, r);
            let tb = b.tensor(t, r);
            let fs = &f_t[t];
            let fr = &f_t[r];
            let fu = &partial.maps[&u];
            for i in 0..ta.d2 {
                for j in 0..ta.d1 {
                    let lhs =
                        Matrix::new(field.clone(), 1, ta.d0, ta.row(i, j).to_vec()).mul(fu)?;
                    let mut rhs = Matrix::zero(field.clone(), 1, tb.d0);
                    for i2 in 0..tb.d2 {
                        for j2 in 0..tb.d1 {
                            let coef = field.mul(fs.get(i, i2), fr.get(j, j2));
                            if coef == 0 {
                                continue;
                            }
                            for k in 0..tb.d0 {
                                let v =
                                    field.add(rhs.get(0, k), field.mul(coef, tb.get(i2, j2, k)));
                                rhs.set(0, k, v);
                            }
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::NoExtension(u.clone()));
                    }
                }
            }
        }
    }

    let mut maps: BTreeMap<Degree, Matrix> = f_t.clone();
    let mut all_support: BTreeSet<Degree> = a.components.keys().cloned().collect();
    all_support.extend(b.components.keys().cloned());
    all_support.remove(&zero);
    let mut remaining: Vec<Degree> = all_support
        .iter()
        .filter(|d| !maps.contains_key(*d))
        .cloned()
        .collect();
    while !remaining.is_empty() {
        // minimal unprocessed degree whose proper predecessors are done
        let pick = remaining
            .iter()
            .position(|s| {
                all_support
                    .iter()
                    .filter(|r| *r != s && monoid.leq(r, s))
                    .all(|r| maps.contains_key(r))
            })
            .ok_or_else(|| Error::NotGenerated(remaining[0].clone()))?;
        let s = remaining.remove(pick);
        let f_s = induce_at(a, b, &maps, &s)?;
        maps.insert(s, f_s);
    }
    Ok(GradedMap { maps })
}

/// Build pi_{s,A}, pi_{s,B} and the tensor-square map, test the kernel
/// inclusion, and induce f_s.
fn induce_at(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    maps: &BTreeMap<Degree, Matrix>,
    s: &Degree,
) -> Result<Matrix> {
    let field = a.field.clone();
    let da = a.dim_at(s);
    let db = b.dim_at(s);
    // block pairs in lex order, shared by A and B
    let mut pair_set: BTreeSet<(Degree, Degree)> = a.decompositions(s).into_iter().collect();
    pair_set.extend(b.decompositions(s));
    let pairs: Vec<(Degree, Degree)> = pair_set.into_iter().collect();
    let rows_a: usize = pairs.iter().map(|(x, y)| a.dim_at(x) * a.dim_at(y)).sum();
    let rows_b: usize = pairs.iter().map(|(x, y)| b.dim_at(x) * b.dim_at(y)).sum();
    let mut pi_a = Matrix::zero(field.clone(), rows_a, da);
    let mut pi_b = Matrix::zero(field.clone(), rows_b, db);
    let mut f_tensor = Matrix::zero(field.clone(), rows_a, rows_b);
    let mut base_a = 0usize;
    let mut base_b = 0usize;
    for (s1, s2) in &pairs {
        let ta = a.tensor(s1, s2);
        for i in 0..ta.d2 {
            for j in 0..ta.d1 {
                for k in 0..ta.d0 {
                    pi_a.set(base_a + i * ta.d1 + j, k, ta.get(i, j, k));
                }
            }
        }
        let tb = b.tensor(s1, s2);
        for i in 0..tb.d2 {
            for j in 0..tb.d1 {
                for k in 0..tb.d0 {
                    pi_b.set(base_b + i * tb.d1 + j, k, tb.get(i, j, k));
                }
            }
        }
        // Kron block f_{s1} (x) f_{s2}
        let (Some(f1), Some(f2)) = (maps.get(s1), maps.get(s2)) else {
            return Err(Error::NoExtension(s.clone()));
        };
        let kron = f1.kron(f2);
        for i in 0..kron.rows {
            for j in 0..kron.cols {
                let v = kron.get(i, j);
                if v != 0 {
                    f_tensor.set(base_a + i, base_b + j, v);
                }
            }
        }
        base_a += a.dim_at(s1) * a.dim_at(s2);
        base_b += b.dim_at(s1) * b.dim_at(s2);
    }
    // kernel inclusion test: (ker pi_A) f_tensor <= ker pi_B
    let ker_a = pi_a.left_kernel();
    let moved = ker_a.mul(&f_tensor)?;
    let moved_pi = moved.mul(&pi_b)?;
    if !moved_pi.is_zero() {
        return Err(Error::NoExtension(s.clone()));
    }
    // induce f_s on generators: pick preimages of the A_s basis
    let mut f_s = Matrix::zero(field.clone(), da, db);
    for m in 0..da {
        let mut e = vec![0u64; da];
        e[m] = 1;
        let (pre, _) = pi_a
            .solve_left(&e)?
            .ok_or_else(|| Error::NotGenerated(s.clone()))?;
        let pre_m = Matrix::new(field.clone(), 1, rows_a, pre);
        let row = pre_m.mul(&f_tensor)?.mul(&pi_b)?;
        for j in 0..db {
            f_s.set(m, j, row.get(0, j));
        }
    }
    Ok(f_s)
}

/// Regrading onto a product of truncated monoids: find the smallest
/// truncation level at which every generator ray stabilizes, then
/// saturate all degrees at that level. Degrees that collide must carry
/// identical data.
pub fn regrade(a: &GradedAlgebra) -> Result<GradedAlgebra> {
    let d = a.monoid.rank();
    let max_coord = a
        .components
        .keys()
        .flat_map(|k| k.iter().copied())
        .max()
        .unwrap_or(0);
    'levels: for level in 1..=(max_coord + 1) {
        let monoid = MonoidDescriptor {
            truncations: vec![level; d],
        };
        let clamp = |deg: &Degree| -> Degree { deg.iter().map(|&x| x.min(level)).collect() };
        // components must agree on collisions
        let mut comps: BTreeMap<Degree, usize> = BTreeMap::new();
        for (deg, &dim) in &a.components {
            let nd = clamp(deg);
            if let Some(&prev) = comps.get(&nd) {
                if prev != dim {
                    continue 'levels;
                }
            } else {
                comps.insert(nd, dim);
            }
        }
        // every saturation class must consist entirely of degrees with
        // identical data; a class mixing nonzero and zero components (the
        // latter are simply absent from the support) is a failed
        // stabilization at this level
        let support: Vec<Degree> = a.components.keys().cloned().collect();
        let mut classes: BTreeMap<Degree, Vec<Degree>> = BTreeMap::new();
        for x in &support {
            classes.entry(clamp(x)).or_default().push(x.clone());
        }
        for (nd, members) in &classes {
            let saturated: Vec<usize> = (0..d)
                .filter(|&i| nd[i] == level && a.monoid.truncations[i] >= level)
                .collect();
            if saturated.is_empty() {
                continue;
            }
            let mut class_size: u128 = 1;
            for &i in &saturated {
                class_size *= (a.monoid.truncations[i] - level + 1) as u128;
            }
            if class_size != members.len() as u128 {
                continue 'levels;
            }
            for (xi, x) in members.iter().enumerate() {
                for y in members.iter().skip(xi + 1) {
                    for t in &support {
                        if a.tensor(t, x) != a.tensor(t, y) || a.tensor(x, t) != a.tensor(y, t) {
                            continue 'levels;
                        }
                    }
                    if a.tensor(x, x) != a.tensor(y, y) || a.tensor(x, y) != a.tensor(y, x) {
                        continue 'levels;
                    }
                }
            }
        }
        let mut prods: BTreeMap<(Degree, Degree), Tensor3> = BTreeMap::new();
        for ((s, t), tensor) in &a.products {
            let key = (clamp(s), clamp(t));
            // the clamped product target must also match
            let old_target = a.monoid.add(s, t);
            let new_target = monoid.add(&key.0, &key.1);
            if clamp(&old_target) != new_target {
                continue 'levels;
            }
            if let Some(prev) = prods.get(&key) {
                if prev != tensor {
                    continue 'levels;
                }
            } else {
                prods.insert(key, tensor.clone());
            }
        }
        let gen: BTreeSet<Degree> = a.gen_degrees.iter().map(clamp).collect();
        if let Ok(out) = GradedAlgebra::new(a.field.clone(), monoid, comps, prods, gen) {
            return Ok(out);
        }
    }
    Err(Error::NotStabilizing)
}

#[derive(Debug, Clone)]
pub struct LayerChoice {
    pub degrees: Vec<Degree>,
    pub score: f64,
    pub all_scores: Vec<(Degree, f64)>,
}

/// Score each singleton layer S = {s} by the basic bound
/// log_q |M(U)^x| + (dim A_{S+T})^2 and return the argmin (ties to the
/// smallest degree).
pub fn select_layer(a: &GradedAlgebra, unit_budget: u128) -> Result<LayerChoice> {
    let t_degs: Vec<Degree> = a.gen_degrees.iter().cloned().collect();
    let q = a.field.q() as f64;
    let mut scores = Vec::new();
    for s in a.components.keys() {
        if s.iter().all(|&x| x == 0) {
            continue;
        }
        let (bimap, targets) = a.restricted_bimap(&t_degs, std::slice::from_ref(s))?;
        if targets.is_empty() {
            continue;
        }
        let m = adjoint_space(RingKind::M, &bimap, None)?;
        let log_units = match pair_space_units(&m, unit_budget) {
            Ok(u) if !u.monte_carlo => (u.order as f64).ln() / q.ln(),
            _ => m.dim() as f64, // upper estimate |M| = q^dim
        };
        let score = log_units + (bimap.dims.2 * bimap.dims.2) as f64;
        scores.push((s.clone(), score));
    }
    let best = scores
        .iter()
        .min_by(|(da, sa), (db, sb)| sa.partial_cmp(sb).unwrap().then(da.cmp(db)))
        .cloned();
    match best {
        Some((deg, score)) => Ok(LayerChoice {
            degrees: vec![deg],
            score,
            all_scores: scores,
        }),
        None => {
            // no layer with a nonzero target: fall back to the smallest
            // support degree
            let deg = a
                .components
                .keys()
                .find(|d| d.iter().any(|&x| x > 0))
                .cloned()
                .ok_or_else(|| Error::InconsistentDims("empty algebra".into()))?;
            Ok(LayerChoice {
                degrees: vec![deg],
                score: f64::INFINITY,
                all_scores: vec![],
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct GradedIsoCoset {
    pub representative: Option<GradedMap>,
    /// All graded isomorphisms A -> B found (for A = B, the graded
    /// automorphism group).
    pub elements: Vec<GradedMap>,
    pub order: u128,
    pub layer: Vec<Degree>,
    /// Isotopism candidates examined before extension filtering.
    pub candidates_examined: u128,
}

#[derive(Debug, Clone)]
pub struct GradedIsoOptions {
    pub coset: CosetOptions,
    /// Explicit layer choice; None = select_layer.
    pub layers: Option<Vec<Degree>>,
    /// Cap on the number of isotopism-coset elements walked in the
    /// extension phase.
    pub enum_budget: u128,
    pub unit_budget: u128,
}

impl Default for GradedIsoOptions {
    fn default() -> Self {
        GradedIsoOptions {
            coset: CosetOptions::default(),
            layers: None,
            enum_budget: 1_000_000,
            unit_budget: crate::units::UNIT_ENUM_BUDGET,
        }
    }
}

/// Graded isomorphism coset: restrict to the bimap A_T x A_S -> A_{S+T},
/// compute the isotopism coset, and extend each candidate through the
/// grading, deduplicating by the generation-degree maps.
pub fn graded_isomorphism_coset(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    opts: &GradedIsoOptions,
) -> Result<GradedIsoCoset> {
    let layer = match &opts.layers {
        Some(l) => l.clone(),
        None => select_layer(a, opts.unit_budget)?.degrees,
    };
    let empty = |layer: Vec<Degree>| GradedIsoCoset {
        representative: None,
        elements: vec![],
        order: 0,
        layer,
        candidates_examined: 0,
    };
    if a.field != b.field
        || a.monoid != b.monoid
        || a.gen_degrees != b.gen_degrees
        || a.components != b.components
    {
        return Ok(empty(layer));
    }
    let t_degs: Vec<Degree> = a.gen_degrees.iter().cloned().collect();
    let (ua, _) = a.restricted_bimap(&t_degs, &layer)?;
    let (ub, _) = b.restricted_bimap(&t_degs, &layer)?;
    let coset = isotopism_coset(&ua, &ub, &opts.coset)?;
    if coset.is_empty() {
        return Ok(empty(layer));
    }
    let total = coset.m_unit_order.saturating_mul(coset.lift_count);
    if total > opts.enum_budget {
        return Err(Error::budget(
            "graded coset enumeration",
            total,
            opts.enum_budget,
        ));
    }
    // T-side block offsets inside U2
    let mut offsets = Vec::new();
    let mut acc = 0usize;
    for t in &t_degs {
        offsets.push((t.clone(), acc, a.dim_at(t)));
        acc += a.dim_at(t);
    }
    let dim_t = acc;
    let mut seen: BTreeSet<Vec<Scalar>> = BTreeSet::new();
    let mut elements = Vec::new();
    let mut examined = 0u128;
    for (_, lift) in &coset.lifted {
        for aut in &coset.aut0_generators {
            examined += 1;
            let element = aut.compose(lift)?;
            let f2 = &element.f2;
            if f2.rows != dim_t {
                return Err(Error::dim("graded coset: T-side shape"));
            }
            if seen.contains(f2.entries()) {
                continue;
            }
            seen.insert(f2.entries().to_vec());
            // must be block-diagonal along the T-degrees
            let mut blocks: BTreeMap<Degree, Matrix> = BTreeMap::new();
            let mut ok = true;
            'blocks: for (t, base, dim) in &offsets {
                let mut m = Matrix::zero(a.field.clone(), *dim, *dim);
                for i in 0..dim_t {
                    for j in 0..dim_t {
                        let v = f2.get(i, j);
                        let inside = i >= *base && i < base + dim && j >= *base && j < base + dim;
                        if inside {
                            m.set(i - base, j - base, v);
                        } else if v != 0
                            && (i >= *base && i < base + dim) != (j >= *base && j < base + dim)
                        {
                            // entry linking different T-blocks
                            ok = false;
                            break 'blocks;
                        }
                    }
                }
                blocks.insert(t.clone(), m);
            }
            if !ok {
                continue;
            }
            match extend_homotopism(a, b, &blocks) {
                Ok(g) => {
                    if g.is_invertible() {
                        debug_assert!(is_graded_homomorphism(a, b, &g)?);
                        elements.push(g);
                    }
                }
                Err(Error::NoExtension(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let order = elements.len() as u128;
    Ok(GradedIsoCoset {
        representative: elements.first().cloned(),
        elements,
        order,
        layer,
        candidates_examined: examined,
    })
}
