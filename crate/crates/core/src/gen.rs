//! Deterministic, seedable generators for the example families: classical
//! and twisted Heisenberg bimaps, random alternating systems, dense
//! nilpotent Lie algebras, and the two worked 4x4x3 systems D and E.

use crate::bimap::Bimap;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{Degree, GradedAlgebra, GradedMap, MonoidDescriptor, Tensor3};
use crate::linalg::{Matrix, Subspace};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Counter-mode split of a master seed into independent per-trial seeds.
pub fn split_seed(master: u64, counter: u64) -> u64 {
    // splitmix64 step
    let mut z = master.wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The alternating (4,4,3) bimap D of the worked projective-label example,
/// over GF(3).
pub fn bimap_d() -> Bimap {
    let f = Field::prime(3).unwrap();
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

/// The companion bimap E: same first two slices as D, third slice moved to
/// the (1,4) position.
pub fn bimap_e() -> Bimap {
    let f = Field::prime(3).unwrap();
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
                vec![0, 0, 0, 1],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
                vec![-1, 0, 0, 0],
            ],
        ],
    )
    .unwrap()
}

/// Nondegenerate alternating (2n, 2n, 1) bimap with Gram [[0, I], [-I, 0]].
pub fn heisenberg(n: usize, field: &Field) -> Result<Bimap> {
    if n < 1 {
        return Err(Error::BadParameters("heisenberg needs n >= 1".into()));
    }
    let d = 2 * n;
    let mut gram = Matrix::zero(field.clone(), d, d);
    for i in 0..n {
        gram.set(i, n + i, field.one());
        gram.set(n + i, i, field.neg(field.one()));
    }
    Bimap::new(field.clone(), (d, d, 1), vec![gram])
}

/// Uniformly random bimap with the given dims, seed-deterministic.
pub fn random_bimap(field: &Field, dims: (usize, usize, usize), seed: u64) -> Bimap {
    let mut rng = rng_from_seed(seed);
    let slices = (0..dims.2)
        .map(|_| {
            Matrix::from_fn(field.clone(), dims.0, dims.1, |_, _| {
                rng.gen_range(0..field.q())
            })
        })
        .collect();
    Bimap::new(field.clone(), dims, slices).unwrap()
}

/// e independent uniformly random alternating d x d slices over GF(p).
pub fn random_alternating_bimap(d: usize, p: u64, e: usize, seed: u64) -> Result<Bimap> {
    let field = Field::prime(p)?;
    let mut rng = rng_from_seed(seed);
    let mut slices = Vec::with_capacity(e);
    for _ in 0..e {
        let mut m = Matrix::zero(field.clone(), d, d);
        for i in 0..d {
            for j in i + 1..d {
                let v = rng.gen_range(0..p);
                m.set(i, j, v);
                m.set(j, i, field.neg(v));
            }
        }
        slices.push(m);
    }
    Bimap::new(field, (d, d, e), slices)
}

/// Random invertible matrix, by rejection.
pub fn random_invertible(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m = Matrix::from_fn(field.clone(), n, n, |_, _| rng.gen_range(0..field.q()));
        if m.is_invertible() {
            return m;
        }
    }
}

/// Output of the twisted Heisenberg construction: the expanded bimap over
/// GF(p) together with the constant i used in the twisted Albert product.
#[derive(Debug, Clone)]
pub struct TwistedHeisenberg {
    pub bimap: Bimap,
    /// Coefficients of the chosen constant i in the power basis of GF(p^k).
    pub albert_constant: Vec<u64>,
    pub ext_field: Field,
    pub sigma_exp: u32,
}

/// The GF(p)-bilinear bimap GF(p)^{2k} x GF(p)^{2k} >-> GF(p)^k built from
/// the twisted Albert product x.y = xy + i x^sigma y^{sigma^2} on GF(p^k):
/// ((a,b),(a',b')) -> a.b' - a'.b, expanded over the ground field.
pub fn twisted_heisenberg(p: u64, k: u32, sigma_exp: u32, seed: u64) -> Result<TwistedHeisenberg> {
    if k <= 1 || k.is_multiple_of(2) {
        return Err(Error::BadParameters(
            "twisted Heisenberg needs odd k > 1".into(),
        ));
    }
    if sigma_exp == 0 || sigma_exp >= k {
        return Err(Error::BadParameters(
            "sigma exponent must lie in [1, k)".into(),
        ));
    }
    let ext = Field::extension(p, k, None)?;
    let albert_i = choose_albert_constant(&ext, sigma_exp, seed)?;
    let kk = k as usize;
    // basis of A over GF(p): power basis codes p^0, p^1, ...
    let basis: Vec<Scalar> = (0..kk).map(|i| ext.pow(p, i as u64)).collect();
    let albert = |x: Scalar, y: Scalar| -> Scalar {
        let s1 = frob_power(&ext, x, sigma_exp);
        let s2 = frob_power(&ext, y, 2 * sigma_exp);
        ext.add(ext.mul(x, y), ext.mul(albert_i, ext.mul(s1, s2)))
    };
    // bullet((a,b),(a',b')) = a . b' - a' . b, an element of A;
    // slice l entry (i, j) = coefficient l of bullet(basis_i, basis_j)
    let base = Field::prime(p)?;
    let dim = 2 * kk;
    let mut slices = vec![Matrix::zero(base.clone(), dim, dim); kk];
    for i in 0..dim {
        for j in 0..dim {
            let (ai, bi) = if i < kk {
                (basis[i], 0)
            } else {
                (0, basis[i - kk])
            };
            let (aj, bj) = if j < kk {
                (basis[j], 0)
            } else {
                (0, basis[j - kk])
            };
            let val = ext.sub(albert(ai, bj), albert(aj, bi));
            let coeffs = ext.coeffs(val);
            for (l, &cl) in coeffs.iter().enumerate() {
                slices[l].set(i, j, cl);
            }
        }
    }
    let bimap = Bimap::new(base, (dim, dim, kk), slices)?;
    debug_assert!(bimap.is_alternating());
    Ok(TwistedHeisenberg {
        bimap,
        albert_constant: ext.coeffs(albert_i),
        ext_field: ext,
        sigma_exp,
    })
}

fn frob_power(f: &Field, x: Scalar, e: u32) -> Scalar {
    let mut out = x;
    for _ in 0..e {
        out = f.frobenius(out);
    }
    out
}

/// Smallest element of GF(p^k) (in code order) that makes the twisted
/// Albert product zero-divisor-free on a seeded sample of 1000 pairs.
fn choose_albert_constant(ext: &Field, sigma_exp: u32, seed: u64) -> Result<Scalar> {
    'candidates: for cand in ext.elements().skip(1) {
        let mut rng = rng_from_seed(split_seed(seed, cand));
        for _ in 0..1000 {
            let x = rng.gen_range(1..ext.q());
            let y = rng.gen_range(1..ext.q());
            let s1 = frob_power(ext, x, sigma_exp);
            let s2 = frob_power(ext, y, 2 * sigma_exp);
            let prod = ext.add(ext.mul(x, y), ext.mul(cand, ext.mul(s1, s2)));
            if prod == 0 {
                continue 'candidates;
            }
        }
        return Ok(cand);
    }
    Err(Error::BadParameters(
        "no suitable Albert constant found".into(),
    ))
}

/// Replace the codomain by e random GF(p)-linear combinations of the
/// slices forming a surjective projection (resampled until full rank).
pub fn project_random(u: &Bimap, e: usize, seed: u64) -> Result<Bimap> {
    let c = u.dims.2;
    if e == 0 || e > c {
        return Err(Error::BadParameters(format!(
            "projection rank {e} out of range 1..={c}"
        )));
    }
    let f = &u.field;
    let mut rng = rng_from_seed(seed);
    loop {
        let proj = Matrix::from_fn(f.clone(), c, e, |_, _| rng.gen_range(0..f.q()));
        if proj.rank() == e {
            return u.twist_codomain(&proj);
        }
    }
}

/// Basis index bookkeeping for one homogeneous layer of the dense Lie
/// algebra: entries (block, row, col) of the s-th superdiagonal.
fn dense_layer_basis(dims: &[usize], s: usize) -> Vec<(usize, usize, usize)> {
    let l = dims.len();
    let mut out = Vec::new();
    for i in 0..l.saturating_sub(s) {
        for r in 0..dims[i] {
            for c in 0..dims[i + s] {
                out.push((i, r, c));
            }
        }
    }
    out
}

/// The dense nilpotent Lie algebra of block strictly-upper-triangular
/// matrices for the given flag gaps, as an N_l-graded algebra generated
/// in degree 1. With `thin_seed` set, the degree-1 layer is replaced by a
/// random hyperplane and the generated subalgebra is emitted; the second
/// return value reports whether the derived-subalgebra dimensions still
/// match the dense ones.
pub fn dense_lie(dims: &[usize], q: u64, thin_seed: Option<u64>) -> Result<(GradedAlgebra, bool)> {
    if dims.len() < 2 {
        return Err(Error::BadPartition(
            "dense Lie algebra needs at least 2 blocks".into(),
        ));
    }
    if dims.contains(&0) {
        return Err(Error::BadPartition("zero block in partition".into()));
    }
    let field = Field::prime(q)?;
    let l = dims.len();
    let max_s = l - 1;
    let monoid = MonoidDescriptor {
        truncations: vec![max_s as u32 + 1],
    };
    let layer_bases: Vec<Vec<(usize, usize, usize)>> =
        (1..=max_s).map(|s| dense_layer_basis(dims, s)).collect();
    let mut components = BTreeMap::new();
    for (si, basis) in layer_bases.iter().enumerate() {
        if !basis.is_empty() {
            components.insert(vec![si as u32 + 1], basis.len());
        }
    }
    let index_of = |s: usize, key: (usize, usize, usize)| -> usize {
        layer_bases[s - 1].iter().position(|&k| k == key).unwrap()
    };
    let mut products = BTreeMap::new();
    for s in 1..=max_s {
        for t in 1..=max_s {
            if s + t > max_s {
                continue;
            }
            let da = layer_bases[s - 1].len();
            let db = layer_bases[t - 1].len();
            let dc = layer_bases[s + t - 1].len();
            if da == 0 || db == 0 || dc == 0 {
                continue;
            }
            let mut tensor = Tensor3::zero(da, db, dc);
            for (xi, &(i, r, c)) in layer_bases[s - 1].iter().enumerate() {
                for (yi, &(j, r2, c2)) in layer_bases[t - 1].iter().enumerate() {
                    // bracket of matrix units: xy - yx
                    if i + s == j && c == r2 {
                        let k = index_of(s + t, (i, r, c2));
                        let v = field.add(tensor.get(xi, yi, k), 1);
                        tensor.set(xi, yi, k, v);
                    }
                    if j + t == i && c2 == r {
                        let k = index_of(s + t, (j, r2, c));
                        let v = field.sub(tensor.get(xi, yi, k), 1);
                        tensor.set(xi, yi, k, v);
                    }
                }
            }
            products.insert((vec![s as u32], vec![t as u32]), tensor);
        }
    }
    let dense = GradedAlgebra::new(
        field.clone(),
        monoid,
        components,
        products,
        [vec![1u32]].into_iter().collect(),
    )?;
    match thin_seed {
        None => Ok((dense, true)),
        Some(seed) => thin_degree_one(&dense, seed),
    }
}

/// Replace the degree-1 layer by a random hyperplane and rebuild the
/// generated subalgebra on the computed layer bases.
fn thin_degree_one(a: &GradedAlgebra, seed: u64) -> Result<(GradedAlgebra, bool)> {
    let field = a.field.clone();
    let one = vec![1u32];
    let d1 = a.dim_at(&one);
    if d1 <= 1 {
        return Ok((a.clone(), true));
    }
    let mut rng = rng_from_seed(seed);
    let w = loop {
        let m = Matrix::from_fn(field.clone(), d1 - 1, d1, |_, _| {
            rng.gen_range(0..field.q())
        });
        if m.rank() == d1 - 1 {
            break Subspace::from_spanning(&m);
        }
    };
    // layer bases of the generated subalgebra: B_{s+1} = [B_1, B_s]
    let max_s = *a.components.keys().map(|d| &d[0]).max().unwrap_or(&1) as usize;
    let mut bases: Vec<Subspace> = vec![w.clone()];
    for s in 1..max_s {
        let prev = &bases[s - 1];
        let deg_s = vec![s as u32];
        let target_dim = a.dim_at(&a.monoid.add(&one, &deg_s));
        let tensor = a.tensor(&one, &deg_s);
        let mut rows = Matrix::zero(field.clone(), 0, target_dim);
        for wi in 0..w.dim() {
            for pj in 0..prev.dim() {
                // [w_i, p_j] in ambient layer coordinates
                let mut out = vec![0u64; target_dim];
                for i in 0..tensor.d2 {
                    let ci = w.basis.get(wi, i);
                    if ci == 0 {
                        continue;
                    }
                    for j in 0..tensor.d1 {
                        let cj = prev.basis.get(pj, j);
                        if cj == 0 {
                            continue;
                        }
                        let coef = field.mul(ci, cj);
                        for (k, o) in out.iter_mut().enumerate() {
                            *o = field.add(*o, field.mul(coef, tensor.get(i, j, k)));
                        }
                    }
                }
                rows = rows.vstack(&Matrix::new(field.clone(), 1, target_dim, out));
            }
        }
        bases.push(Subspace::from_spanning(&rows));
    }
    let mut components = BTreeMap::new();
    for (s, b) in bases.iter().enumerate() {
        if b.dim() > 0 {
            components.insert(vec![s as u32 + 1], b.dim());
        }
    }
    let mut products = BTreeMap::new();
    for s in 1..=max_s {
        for t in 1..=max_s {
            if s + t > max_s {
                continue;
            }
            let (bs, bt, bu) = (&bases[s - 1], &bases[t - 1], &bases[s + t - 1]);
            if bs.dim() == 0 || bt.dim() == 0 || bu.dim() == 0 {
                continue;
            }
            let big = a.tensor(&vec![s as u32], &vec![t as u32]);
            let mut tensor = Tensor3::zero(bs.dim(), bt.dim(), bu.dim());
            for i in 0..bs.dim() {
                for j in 0..bt.dim() {
                    let mut out = vec![0u64; big.d0];
                    for i2 in 0..big.d2 {
                        let ci = bs.basis.get(i, i2);
                        if ci == 0 {
                            continue;
                        }
                        for j2 in 0..big.d1 {
                            let cj = bt.basis.get(j, j2);
                            if cj == 0 {
                                continue;
                            }
                            let coef = field.mul(ci, cj);
                            for (k, o) in out.iter_mut().enumerate() {
                                *o = field.add(*o, field.mul(coef, big.get(i2, j2, k)));
                            }
                        }
                    }
                    // express in the layer basis of the subalgebra
                    let (sol, _) = bu
                        .basis
                        .solve_left(&out)?
                        .ok_or_else(|| Error::BadPartition("thinned layers not closed".into()))?;
                    for (k, &v) in sol.iter().enumerate() {
                        tensor.set(i, j, k, v);
                    }
                }
            }
            products.insert((vec![s as u32], vec![t as u32]), tensor);
        }
    }
    let density_ok = (2..=max_s).all(|s| bases[s - 1].dim() == a.dim_at(&vec![s as u32]));
    let alg = GradedAlgebra::new(
        field,
        a.monoid.clone(),
        components,
        products,
        [vec![1u32]].into_iter().collect(),
    )?;
    Ok((alg, density_ok))
}

/// The Heisenberg Lie algebra as an N_2-graded algebra: layer dims (2, 1)
/// with [e1, e2] = z.
pub fn heisenberg_graded(p: u64) -> GradedAlgebra {
    let f = Field::prime(p).unwrap();
    let monoid = MonoidDescriptor {
        truncations: vec![2],
    };
    let mut comps = BTreeMap::new();
    comps.insert(vec![1], 2usize);
    comps.insert(vec![2], 1usize);
    let mut t = Tensor3::zero(2, 2, 1);
    t.set(0, 1, 0, 1);
    t.set(1, 0, 0, f.neg(1));
    let mut prods = BTreeMap::new();
    prods.insert((vec![1], vec![1]), t);
    GradedAlgebra::new(f, monoid, comps, prods, [vec![1u32]].into_iter().collect()).unwrap()
}

/// The 3-generator class-2 pair where the identity on degree 1 does not
/// extend: A has [e1,e2]=z1, [e1,e3]=z2, [e2,e3]=0 and B has
/// [e1,e2]=z1, [e1,e3]=0, [e2,e3]=z2.
pub fn no_extension_pair(p: u64) -> (GradedAlgebra, GradedAlgebra) {
    let f = Field::prime(p).unwrap();
    let monoid = MonoidDescriptor {
        truncations: vec![2],
    };
    let mut comps = BTreeMap::new();
    comps.insert(vec![1], 3usize);
    comps.insert(vec![2], 2usize);
    let build = |pairs: &[((usize, usize), usize)]| {
        let mut t = Tensor3::zero(3, 3, 2);
        for &((i, j), k) in pairs {
            t.set(i, j, k, 1);
            t.set(j, i, k, f.neg(1));
        }
        let mut prods = BTreeMap::new();
        prods.insert((vec![1], vec![1]), t);
        GradedAlgebra::new(
            f.clone(),
            monoid.clone(),
            comps.clone(),
            prods,
            [vec![1u32]].into_iter().collect(),
        )
        .unwrap()
    };
    let a = build(&[((0, 1), 0), ((0, 2), 1)]);
    let b = build(&[((0, 1), 0), ((1, 2), 1)]);
    (a, b)
}

/// Seeded random N-graded class-2 algebra with the given layer dims,
/// resampled until it is generated in degree 1.
pub fn random_graded_class2(p: u64, d1: usize, d2: usize, seed: u64) -> Result<GradedAlgebra> {
    let field = Field::prime(p)?;
    let monoid = MonoidDescriptor {
        truncations: vec![2],
    };
    let mut components = BTreeMap::new();
    components.insert(vec![1], d1);
    components.insert(vec![2], d2);
    let gen: BTreeSet<Degree> = [vec![1u32]].into_iter().collect();
    for attempt in 0..1000 {
        let mut rng = rng_from_seed(split_seed(seed, attempt));
        let mut t = Tensor3::zero(d1, d1, d2);
        for i in 0..d1 {
            for j in 0..d1 {
                for k in 0..d2 {
                    t.set(i, j, k, rng.gen_range(0..p));
                }
            }
        }
        let mut prods = BTreeMap::new();
        prods.insert((vec![1], vec![1]), t);
        match GradedAlgebra::new(
            field.clone(),
            monoid.clone(),
            components.clone(),
            prods,
            gen.clone(),
        ) {
            Ok(a) => return Ok(a),
            Err(Error::NotGenerated(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BadParameters(
        "could not sample a generated class-2 algebra".into(),
    ))
}

/// Conjugate every homogeneous component by a random invertible matrix;
/// returns the transported algebra together with the witness isomorphism.
pub fn scramble_graded(a: &GradedAlgebra, seed: u64) -> Result<(GradedAlgebra, GradedMap)> {
    let field = a.field.clone();
    let mut rng = rng_from_seed(seed);
    let mut maps: BTreeMap<Degree, Matrix> = BTreeMap::new();
    for (deg, &dim) in &a.components {
        maps.insert(deg.clone(), random_invertible(&field, dim, &mut rng));
    }
    let mut products = BTreeMap::new();
    for ((s, t), tensor) in &a.products {
        let u = a.monoid.add(s, t);
        let gs = &maps[s];
        let gt = &maps[t];
        let gu = maps
            .get(&u)
            .cloned()
            .unwrap_or_else(|| Matrix::identity(field.clone(), a.dim_at(&u)));
        // M_B = (gs^-1 kron gt^-1) . M_A . gu
        let mut m_a = Matrix::zero(field.clone(), tensor.d2 * tensor.d1, tensor.d0);
        for i in 0..tensor.d2 {
            for j in 0..tensor.d1 {
                for k in 0..tensor.d0 {
                    m_a.set(i * tensor.d1 + j, k, tensor.get(i, j, k));
                }
            }
        }
        let kron_inv = gs.inverse()?.kron(&gt.inverse()?);
        let m_b = kron_inv.mul(&m_a)?.mul(&gu)?;
        let mut nt = Tensor3::zero(tensor.d2, tensor.d1, tensor.d0);
        for i in 0..tensor.d2 {
            for j in 0..tensor.d1 {
                for k in 0..tensor.d0 {
                    nt.set(i, j, k, m_b.get(i * tensor.d1 + j, k));
                }
            }
        }
        products.insert((s.clone(), t.clone()), nt);
    }
    let b = GradedAlgebra::new(
        field,
        a.monoid.clone(),
        a.components.clone(),
        products,
        a.gen_degrees.clone(),
    )?;
    Ok((b, GradedMap { maps }))
}
