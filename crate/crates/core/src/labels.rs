//! Projective labeling heuristics: rank labels on the points of the dual
//! projective space of the codomain, pencil labels on lines, the subgroup
//! of GL(U0) preserving them, idealizers, and fingerprints.

use crate::bimap::Bimap;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::poly::{factor_degrees, Poly};
use std::collections::BTreeMap;

/// Default budget on |GL(c, q)| enumerations, as a cap on q^(c^2).
pub const GL_FILTER_BUDGET: u128 = 100_000_000;

/// A point of projective space, normalized so the first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint {
    pub coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn normalize(field: &Field, coords: &[Scalar]) -> Option<ProjectivePoint> {
        let lead = coords.iter().position(|&x| x != 0)?;
        let inv = field.inv(coords[lead]).ok()?;
        Some(ProjectivePoint {
            coords: coords.iter().map(|&x| field.mul(x, inv)).collect(),
        })
    }
}

/// All points of PG(c-1, q) in deterministic order.
pub fn projective_points(field: &Field, c: usize) -> Vec<ProjectivePoint> {
    let q = field.q();
    let mut out = Vec::new();
    for lead in 0..c {
        let free = c - lead - 1;
        let total = q.pow(free as u32);
        for code in 0..total {
            let mut coords = vec![0; c];
            coords[lead] = 1;
            let mut cc = code;
            for t in 0..free {
                coords[lead + 1 + t] = cc % q;
                cc /= q;
            }
            out.push(ProjectivePoint { coords });
        }
    }
    out
}

/// Canonical key of a line: flattened rref basis of the 2-dim subspace.
pub type LineKey = Vec<Scalar>;

/// All 2-dimensional subspaces of K^c, as canonical rref bases.
pub fn projective_lines(field: &Field, c: usize) -> Vec<Subspace> {
    let points = projective_points(field, c);
    let mut seen: BTreeMap<LineKey, Subspace> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        for qpt in points.iter().skip(i + 1) {
            let mut m = Matrix::zero(field.clone(), 2, c);
            for (j, &v) in p.coords.iter().enumerate() {
                m.set(0, j, v);
            }
            for (j, &v) in qpt.coords.iter().enumerate() {
                m.set(1, j, v);
            }
            let s = Subspace::from_spanning(&m);
            if s.dim() == 2 {
                seen.entry(s.basis.entries().to_vec()).or_insert(s);
            }
        }
    }
    seen.into_values().collect()
}

/// The q+1 points on a line given by a 2-row basis.
pub fn points_on_line(field: &Field, line: &Subspace) -> Vec<ProjectivePoint> {
    let q = field.q();
    let c = line.ambient;
    let b0 = line.basis.row(0).to_vec();
    let b1 = line.basis.row(1).to_vec();
    let mut out = Vec::new();
    // b1 and b0 + t*b1
    out.push(ProjectivePoint::normalize(field, &b1).unwrap());
    for t in 0..q {
        let v: Vec<Scalar> = (0..c)
            .map(|j| field.add(b0[j], field.mul(t, b1[j])))
            .collect();
        out.push(ProjectivePoint::normalize(field, &v).unwrap());
    }
    out
}

/// Rank labels for every point of the dual projective space of U0.
pub fn vertex_labels(u: &Bimap) -> BTreeMap<ProjectivePoint, usize> {
    let mut out = BTreeMap::new();
    for p in projective_points(&u.field, u.dims.2) {
        let rank = u.gram_at(&p.coords).rank();
        out.insert(p, rank);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineLabel {
    /// Sorted ranks of the q+1 points on the line.
    pub rank_multiset: Vec<usize>,
    /// Sorted degree multiset of the irreducible factors of the pencil
    /// determinant, when the domain sides are square and the pencil has
    /// an invertible member over the base field; None otherwise.
    pub det_pattern: Option<Vec<usize>>,
    /// The determinant binary form of the pencil, canonicalized as the
    /// lexicographically smallest coefficient vector over all GL(2, q)
    /// reparameterizations and scalar multiples. Same availability as
    /// `det_pattern`.
    pub det_orbit: Option<Vec<Scalar>>,
}

/// Labels for every line (2-subspace) of the dual space of U0.
pub fn line_labels(
    u: &Bimap,
    point_labels: &BTreeMap<ProjectivePoint, usize>,
) -> BTreeMap<LineKey, LineLabel> {
    let f = &u.field;
    let mut out = BTreeMap::new();
    for line in projective_lines(f, u.dims.2) {
        let pts = points_on_line(f, &line);
        let mut ranks: Vec<usize> = pts.iter().map(|p| point_labels[p]).collect();
        ranks.sort_unstable();
        let det_form = pencil_det_form(u, &pts);
        let det_pattern = det_form.as_ref().map(|(chi, _)| factor_degrees(chi, f));
        let det_orbit = det_form
            .as_ref()
            .map(|(_, coeffs)| canonical_binary_form(coeffs, f));
        out.insert(
            line.basis.entries().to_vec(),
            LineLabel {
                rank_multiset: ranks,
                det_pattern,
                det_orbit,
            },
        );
    }
    out
}

/// The pencil determinant along a line with an invertible member:
/// returns (chi, coeffs) where chi(t) = det(tI + M_P^{-1} M_Q) carries
/// the factor degrees and coeffs are the binary-form coefficients of
/// det(x M_P + y M_Q) = det(M_P) * homogenization of chi (coefficient i
/// belongs to x^i y^(a-i)). Requires a = b; None for non-square or fully
/// singular pencils.
fn pencil_det_form(u: &Bimap, line_points: &[ProjectivePoint]) -> Option<(Poly, Vec<Scalar>)> {
    let (a, b, _) = u.dims;
    if a != b {
        return None;
    }
    let f = &u.field;
    let invertible_at = line_points
        .iter()
        .position(|p| u.gram_at(&p.coords).is_invertible())?;
    let mp = u.gram_at(&line_points[invertible_at].coords);
    // any other point on the line is independent of P
    let other = if invertible_at == 0 { 1 } else { 0 };
    let mq = u.gram_at(&line_points[other].coords);
    let det_p = mp.det().ok()?;
    let n = mp.inverse().ok()?.mul(&mq).ok()?.neg();
    // chi(t) = det(tI - (-Mp^-1 Mq)) = det(tI + Mp^-1 Mq)
    let chi = n.charpoly().ok()?;
    let mut coeffs = vec![0u64; a + 1];
    for (i, &c) in chi.coeffs.iter().enumerate() {
        coeffs[i] = f.mul(det_p, c);
    }
    Some((chi, coeffs))
}

/// Lexicographically smallest coefficient vector of the binary form over
/// all GL(2, q) substitutions, with the leading nonzero coefficient
/// normalized to 1. A basis-invariant pencil label.
fn canonical_binary_form(coeffs: &[Scalar], f: &Field) -> Vec<Scalar> {
    let deg = coeffs.len() - 1;
    let q = f.q();
    let normalize = |v: &[Scalar]| -> Vec<Scalar> {
        match v.iter().find(|&&c| c != 0) {
            Some(&lead) => {
                let inv = f.inv(lead).unwrap();
                v.iter().map(|&c| f.mul(c, inv)).collect()
            }
            None => v.to_vec(),
        }
    };
    let mut best = normalize(coeffs);
    // substitute (x, y) -> (a x + b y, c x + d y)
    for aa in 0..q {
        for bb in 0..q {
            for cc in 0..q {
                for dd in 0..q {
                    if f.sub(f.mul(aa, dd), f.mul(bb, cc)) == 0 {
                        continue;
                    }
                    // powers of (a x + b y) and (c x + d y)
                    let mut pow1: Vec<Vec<Scalar>> = vec![vec![1]];
                    let mut pow2: Vec<Vec<Scalar>> = vec![vec![1]];
                    for i in 1..=deg {
                        pow1.push(binary_linear_mul(&pow1[i - 1], aa, bb, f));
                        pow2.push(binary_linear_mul(&pow2[i - 1], cc, dd, f));
                    }
                    let mut out = vec![0u64; deg + 1];
                    for (i, &ci) in coeffs.iter().enumerate() {
                        if ci == 0 {
                            continue;
                        }
                        // c_i (ax+by)^i (cx+dy)^(deg-i)
                        let term = binary_mul(&pow1[i], &pow2[deg - i], f);
                        for (k, &t) in term.iter().enumerate() {
                            out[k] = f.add(out[k], f.mul(ci, t));
                        }
                    }
                    let cand = normalize(&out);
                    if cand < best {
                        best = cand;
                    }
                }
            }
        }
    }
    best
}

/// Multiply a binary form (coefficients of x^i y^(n-i)) by (a x + b y).
fn binary_linear_mul(form: &[Scalar], a: Scalar, b: Scalar, f: &Field) -> Vec<Scalar> {
    let n = form.len();
    let mut out = vec![0u64; n + 1];
    for (i, &c) in form.iter().enumerate() {
        if c == 0 {
            continue;
        }
        // c x^i y^(n-1-i) * (a x + b y)
        out[i + 1] = f.add(out[i + 1], f.mul(c, a));
        out[i] = f.add(out[i], f.mul(c, b));
    }
    out
}

fn binary_mul(u: &[Scalar], v: &[Scalar], f: &Field) -> Vec<Scalar> {
    let mut out = vec![0u64; u.len() + v.len() - 1];
    for (i, &a) in u.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in v.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(a, b));
        }
    }
    out
}

/// Count of distinct line labels.
pub fn line_label_classes(labels: &BTreeMap<LineKey, LineLabel>) -> usize {
    let mut set: Vec<&LineLabel> = labels.values().collect();
    set.sort();
    set.dedup();
    set.len()
}

/// Histogram of point labels: (rank, count), sorted by rank.
pub fn point_label_histogram(labels: &BTreeMap<ProjectivePoint, usize>) -> Vec<(usize, usize)> {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in labels.values() {
        *hist.entry(r).or_insert(0) += 1;
    }
    hist.into_iter().collect()
}

pub fn line_label_histogram(labels: &BTreeMap<LineKey, LineLabel>) -> Vec<(LineLabel, usize)> {
    let mut hist: BTreeMap<LineLabel, usize> = BTreeMap::new();
    for l in labels.values() {
        *hist.entry(l.clone()).or_insert(0) += 1;
    }
    hist.into_iter().collect()
}

/// The full labeled geometry of a bimap's codomain.
#[derive(Debug, Clone)]
pub struct LabeledGeometry {
    pub c: usize,
    pub q: u64,
    pub point_labels: BTreeMap<ProjectivePoint, usize>,
    pub line_labels: BTreeMap<LineKey, LineLabel>,
}

impl LabeledGeometry {
    pub fn of(u: &Bimap) -> LabeledGeometry {
        let point_labels = vertex_labels(u);
        let line_labels = line_labels(u, &point_labels);
        LabeledGeometry {
            c: u.dims.2,
            q: u.field.q(),
            point_labels,
            line_labels,
        }
    }

    pub fn histograms_match(&self, other: &LabeledGeometry) -> bool {
        self.c == other.c
            && self.q == other.q
            && point_label_histogram(&self.point_labels)
                == point_label_histogram(&other.point_labels)
            && line_label_histogram(&self.line_labels) == line_label_histogram(&other.line_labels)
    }
}

/// The dual transport of g in GL(U0): a candidate codomain map g sends the
/// dual point pi to pi (g^{-1})^T; g is kept when this carries every
/// point and line label of `from` to the matching label of `to`.
fn transports_labels(
    field: &Field,
    g: &Matrix,
    from: &LabeledGeometry,
    to: &LabeledGeometry,
) -> bool {
    let Ok(ginv) = g.inverse() else { return false };
    let tr = ginv.transpose();
    for (p, &rank) in &from.point_labels {
        let row = Matrix::new(field.clone(), 1, from.c, p.coords.clone());
        let img = row.mul(&tr).expect("shape");
        let ip = ProjectivePoint::normalize(field, img.row(0)).expect("nonzero image");
        if to.point_labels.get(&ip) != Some(&rank) {
            return false;
        }
    }
    for (key, label) in &from.line_labels {
        let basis = Matrix::new(field.clone(), 2, from.c, key.clone());
        let img = basis.mul(&tr).expect("shape");
        let sub = Subspace::from_spanning(&img);
        if to.line_labels.get(sub.basis.entries()) != Some(label) {
            return false;
        }
    }
    true
}

/// Enumerate GL(c, q) in lexicographic order of matrix entries and keep
/// the elements transporting the labels of `from` to those of `to`.
/// With from == to this is the label-preserving group Omega.
pub fn label_transporter_set(
    field: &Field,
    from: &LabeledGeometry,
    to: &LabeledGeometry,
    budget: u128,
) -> Result<Vec<Matrix>> {
    let c = from.c;
    if to.c != c {
        return Ok(vec![]);
    }
    let total = (field.q() as u128).pow((c * c) as u32);
    if total > budget {
        return Err(Error::budget("GL filter", total, budget));
    }
    if !from.histograms_match(to) {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    let mut digits = vec![0u64; c * c];
    loop {
        let g = Matrix::new(field.clone(), c, c, digits.clone());
        if g.is_invertible() && transports_labels(field, &g, from, to) {
            out.push(g);
        }
        // lexicographic odometer, most significant digit first
        let mut k = c * c;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < field.q() {
                break;
            }
            digits[k] = 0;
        }
    }
}

pub fn label_preserving_group(u: &Bimap, budget: u128) -> Result<(Vec<Matrix>, u128)> {
    let geo = LabeledGeometry::of(u);
    let set = label_transporter_set(&u.field, &geo, &geo, budget)?;
    let order = set.len() as u128;
    Ok((set, order))
}

/// Number of classes of the given invertible matrices modulo scalars,
/// i.e. the order of the induced group on the projective geometry.
pub fn projective_class_count(field: &Field, mats: &[Matrix]) -> u128 {
    let mut canon: std::collections::BTreeSet<Vec<Scalar>> = std::collections::BTreeSet::new();
    for m in mats {
        // scale so the first nonzero entry is 1
        let lead = m.entries().iter().find(|&&x| x != 0).copied();
        let rep = match lead {
            Some(l) => m.scalar_mul(field.inv(l).expect("nonzero")),
            None => m.clone(),
        };
        canon.insert(rep.entries().to_vec());
    }
    canon.len() as u128
}

/// All invertible c x c matrices in lexicographic entry order.
pub fn enumerate_gl(field: &Field, c: usize, budget: u128) -> Result<Vec<Matrix>> {
    let total = (field.q() as u128).pow((c * c) as u32);
    if total > budget {
        return Err(Error::GTooLarge {
            size: total,
            budget,
        });
    }
    let mut out = Vec::new();
    let mut digits = vec![0u64; c * c];
    loop {
        let g = Matrix::new(field.clone(), c, c, digits.clone());
        if g.is_invertible() {
            out.push(g);
        }
        let mut k = c * c;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < field.q() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Left and right idealizers of S <= U0: the subspaces of U2 and U1 whose
/// products against the whole other side land in S. Each is one left
/// kernel: u is in lambda(S) iff u . gram_at(nu) = 0 for every functional
/// nu vanishing on S.
pub fn idealizers(u: &Bimap, s: &Subspace) -> Result<(Subspace, Subspace)> {
    let (a, b, c) = u.dims;
    if s.ambient != c {
        return Err(Error::dim("idealizers: subspace ambient"));
    }
    let f = &u.field;
    let vanishing = s.basis.right_kernel();
    if vanishing.rows == 0 {
        return Ok((Subspace::full(f.clone(), a), Subspace::full(f.clone(), b)));
    }
    let mut lam_cols = Matrix::zero(f.clone(), a, 0);
    let mut rho_cols = Matrix::zero(f.clone(), b, 0);
    for i in 0..vanishing.rows {
        let gram = u.gram_at(vanishing.row(i));
        lam_cols = lam_cols.hstack(&gram);
        rho_cols = rho_cols.hstack(&gram.transpose());
    }
    Ok((
        Subspace::from_spanning(&lam_cols.left_kernel()),
        Subspace::from_spanning(&rho_cols.left_kernel()),
    ))
}

/// Canonical fingerprint: histogram of idealizer dimension pairs over the
/// points of PG(U0), and of pairwise left-idealizer intersection dims when
/// rank_bound >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub point_hist: Vec<((usize, usize), usize)>,
    pub pair_hist: Vec<(usize, usize)>,
}

pub fn fingerprint(u: &Bimap, rank_bound: usize, budget: u128) -> Result<Fingerprint> {
    let f = &u.field;
    let c = u.dims.2;
    let points = projective_points(f, c);
    let n_points = points.len() as u128;
    if n_points > budget || (rank_bound >= 2 && n_points * n_points > budget) {
        return Err(Error::budget("fingerprint", n_points * n_points, budget));
    }
    let mut lams = Vec::with_capacity(points.len());
    let mut point_hist: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for p in &points {
        let m = Matrix::new(f.clone(), 1, c, p.coords.clone());
        let s = Subspace::from_spanning(&m);
        let (lam, rho) = idealizers(u, &s)?;
        *point_hist.entry((lam.dim(), rho.dim())).or_insert(0) += 1;
        lams.push(lam);
    }
    let mut pair_hist: BTreeMap<usize, usize> = BTreeMap::new();
    if rank_bound >= 2 {
        for i in 0..lams.len() {
            for j in i + 1..lams.len() {
                let d = lams[i].intersect(&lams[j]).dim();
                *pair_hist.entry(d).or_insert(0) += 1;
            }
        }
    }
    Ok(Fingerprint {
        point_hist: point_hist.into_iter().collect(),
        pair_hist: pair_hist.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{bimap_d, bimap_e};

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn projective_counts() {
        let f = gf(3);
        assert_eq!(projective_points(&f, 3).len(), 13);
        assert_eq!(projective_lines(&f, 3).len(), 13);
        let f5 = gf(5);
        assert_eq!(projective_points(&f5, 3).len(), 31);
        assert_eq!(projective_points(&f5, 4).len(), 156);
        assert_eq!(projective_lines(&f5, 4).len(), 806);
    }

    #[test]
    fn vertex_labels_d() {
        let d = bimap_d();
        let labels = vertex_labels(&d);
        let hist = point_label_histogram(&labels);
        assert_eq!(hist, vec![(2, 4), (4, 9)]);
        // the rank-2 points all lie on the line x1 = 0
        for (p, &r) in &labels {
            if r == 2 {
                assert_eq!(p.coords[0], 0, "rank-2 point off the x1=0 line: {:?}", p);
            }
        }
    }

    #[test]
    fn vertex_labels_e() {
        let e = bimap_e();
        let labels = vertex_labels(&e);
        let f = gf(3);
        let mut rank2: Vec<Vec<u64>> = labels
            .iter()
            .filter(|(_, &r)| r == 2)
            .map(|(p, _)| p.coords.clone())
            .collect();
        rank2.sort();
        let mut expected = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 2], vec![1, 2, 1]];
        expected.sort();
        assert_eq!(rank2, expected);
        // no common line: check every line misses at least one of them
        for line in projective_lines(&f, 3) {
            let on: usize = rank2.iter().filter(|p| line.contains(p)).count();
            assert!(on < 3, "three rank-2 points of E collinear");
        }
    }

    #[test]
    fn vertex_labels_zero() {
        let z = Bimap::zero(gf(3), (2, 2, 2));
        let labels = vertex_labels(&z);
        assert!(labels.values().all(|&r| r == 0));
    }

    #[test]
    fn line_label_classes_d_and_e() {
        let d = bimap_d();
        let pl = vertex_labels(&d);
        let ll = line_labels(&d, &pl);
        assert_eq!(line_label_classes(&ll), 2);
        // the special label belongs to the line at infinity (x1 = 0),
        // whose rref basis is {(0,1,0),(0,0,1)}
        let inf_key: Vec<u64> = vec![0, 1, 0, 0, 0, 1];
        let inf_label = &ll[&inf_key];
        assert_eq!(inf_label.rank_multiset, vec![2, 2, 2, 2]);
        let special_count = ll.values().filter(|l| *l == inf_label).count();
        assert_eq!(special_count, 1);

        let e = bimap_e();
        let pl = vertex_labels(&e);
        let ll = line_labels(&e, &pl);
        assert_eq!(line_label_classes(&ll), 3);

        let z = Bimap::zero(gf(3), (2, 2, 2));
        let pl = vertex_labels(&z);
        let ll = line_labels(&z, &pl);
        assert_eq!(line_label_classes(&ll), 1);
    }

    #[test]
    fn det_pattern_invariant_under_reparameterization() {
        use rand::Rng;
        let d = bimap_d();
        let f = gf(3);
        let mut rng = crate::gen::rng_from_seed(31);
        for line in projective_lines(&f, 3) {
            let pts = points_on_line(&f, &line);
            let label_of = |pts: &[ProjectivePoint]| {
                pencil_det_form(&d, pts).map(|(chi, coeffs)| {
                    (factor_degrees(&chi, &f), canonical_binary_form(&coeffs, &f))
                })
            };
            let base = label_of(&pts);
            // re-parameterize: replace the basis by two random independent
            // combinations and recompute from the new point list
            for _ in 0..3 {
                let mut m;
                loop {
                    let coeffs: Vec<u64> = (0..4).map(|_| rng.gen_range(0..3)).collect();
                    m = Matrix::zero(f.clone(), 2, 3);
                    for j in 0..3 {
                        let v1 = f.add(
                            f.mul(coeffs[0], line.basis.get(0, j)),
                            f.mul(coeffs[1], line.basis.get(1, j)),
                        );
                        let v2 = f.add(
                            f.mul(coeffs[2], line.basis.get(0, j)),
                            f.mul(coeffs[3], line.basis.get(1, j)),
                        );
                        m.set(0, j, v1);
                        m.set(1, j, v2);
                    }
                    if m.rank() == 2 {
                        break;
                    }
                }
                let sub = Subspace::from_spanning(&m);
                let pts2 = points_on_line(&f, &sub);
                assert_eq!(label_of(&pts2), base);
            }
        }
    }

    #[test]
    fn omega_zero_bimap_is_full_gl() {
        let z = Bimap::zero(gf(2), (1, 1, 2));
        let (omega, order) = label_preserving_group(&z, GL_FILTER_BUDGET).unwrap();
        assert_eq!(order, 6); // |GL(2,2)|
        assert_eq!(omega.len(), 6);
    }

    #[test]
    fn omega_d_stabilizes_special_line() {
        // every label-preserving g maps the rank-2 line of D to itself
        let d = bimap_d();
        let (omega, order) = label_preserving_group(&d, GL_FILTER_BUDGET).unwrap();
        assert!(order > 0);
        let f = gf(3);
        let inf = Subspace::from_spanning(&Matrix::from_ints(&f, &[vec![0, 1, 0], vec![0, 0, 1]]));
        for g in &omega {
            let tr = g.inverse().unwrap().transpose();
            let img = Subspace::from_spanning(&inf.basis.mul(&tr).unwrap());
            assert_eq!(img, inf);
        }
    }

    #[test]
    fn idealizer_examples() {
        let d = bimap_d();
        let f = gf(3);
        // S = U0: both idealizers full
        let full = Subspace::full(f.clone(), 3);
        let (lam, rho) = idealizers(&d, &full).unwrap();
        assert_eq!(lam.dim(), 4);
        assert_eq!(rho.dim(), 4);

        // S = span{(0,0,1)}: slices 1-2 have zero joint left kernel
        let s = Subspace::from_spanning(&Matrix::from_ints(&f, &[vec![0, 0, 1]]));
        let (lam, _) = idealizers(&d, &s).unwrap();
        assert_eq!(lam.dim(), 0);

        // S = 0 on a bimap with nondegenerate first slice
        let zero_sub = Subspace::zero(f.clone(), 3);
        let (lam, _) = idealizers(&d, &zero_sub).unwrap();
        assert_eq!(lam.dim(), 0);
    }

    #[test]
    fn idealizer_brute_force_cross_check() {
        // enumerate all of GF(3)^4 and check membership definition
        let d = bimap_d();
        let f = gf(3);
        let s = Subspace::from_spanning(&Matrix::from_ints(&f, &[vec![0, 0, 1]]));
        let (lam, rho) = idealizers(&d, &s).unwrap();
        for code in 0..81u64 {
            let v: Vec<u64> = (0..4).map(|i| (code / 3u64.pow(i)) % 3).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let mut in_lam = true;
            let mut in_rho = true;
            for j in 0..4 {
                let e: Vec<u64> = (0..4).map(|x| u64::from(x == j)).collect();
                let out = d.evaluate(&v, &e).unwrap();
                if !s.contains(&out) {
                    in_lam = false;
                }
                let out = d.evaluate(&e, &v).unwrap();
                if !s.contains(&out) {
                    in_rho = false;
                }
            }
            assert_eq!(in_lam, lam.contains(&v));
            assert_eq!(in_rho, rho.contains(&v));
        }
    }

    #[test]
    fn idealizer_lemma_random_pairs() {
        use rand::Rng;
        let d = bimap_d();
        let e = bimap_e();
        let f = gf(3);
        let mut rng = crate::gen::rng_from_seed(77);
        for u in [&d, &e] {
            for _ in 0..25 {
                let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                    let rows = rng.gen_range(0..3usize);
                    let m = Matrix::from_fn(f.clone(), rows, 3, |_, _| rng.gen_range(0..3));
                    Subspace::from_spanning(&m)
                };
                let s = mk(&mut rng);
                let t = mk(&mut rng);
                let (ls, _) = idealizers(u, &s).unwrap();
                let (lt, _) = idealizers(u, &t).unwrap();
                let (l_cap, _) = idealizers(u, &s.intersect(&t)).unwrap();
                let (l_sum, _) = idealizers(u, &s.sum(&t)).unwrap();
                // lambda(S cap T) = lambda(S) cap lambda(T)
                assert_eq!(l_cap, ls.intersect(&lt));
                // lambda(S) + lambda(T) <= lambda(S + T)
                assert!(l_sum.contains_subspace(&ls.sum(&lt)));
                // monotonicity
                if t.contains_subspace(&s) {
                    assert!(lt.contains_subspace(&ls));
                }
            }
        }
    }

    #[test]
    fn fingerprint_examples() {
        let f = gf(2);
        let z = Bimap::zero(f.clone(), (2, 2, 2));
        let fp = fingerprint(&z, 2, 1 << 20).unwrap();
        assert_eq!(fp.point_hist, vec![((2, 2), 3)]);

        let h = Bimap::from_int_slices(&f, &[vec![vec![0, 1], vec![1, 0]]]).unwrap();
        let fp = fingerprint(&h, 1, 1 << 20).unwrap();
        // unique point P = U0: lambda(P) = U2
        assert_eq!(fp.point_hist, vec![((2, 2), 1)]);
    }

    #[test]
    fn fingerprint_stable_under_basis_change() {
        let d = bimap_d();
        let f = gf(3);
        let fp1 = fingerprint(&d, 2, 1 << 20).unwrap();
        // random basis change of U2 and U1 (an isotopism with f0 = I)
        let mut rng = crate::gen::rng_from_seed(123);
        for _ in 0..3 {
            let g2 = crate::gen::random_invertible(&f, 4, &mut rng);
            let g1 = crate::gen::random_invertible(&f, 4, &mut rng);
            // slices of the transported bimap W with W = g2^-1-image:
            // choose slices so that (g2, g1, I) : W -> D is an isotopism,
            // i.e. S^W_k = g2 S^D_k g1^T
            let slices: Vec<Matrix> = d
                .slices
                .iter()
                .map(|s| g2.mul(s).unwrap().mul(&g1.transpose()).unwrap())
                .collect();
            let w = Bimap::new(f.clone(), (4, 4, 3), slices).unwrap();
            let fp2 = fingerprint(&w, 2, 1 << 20).unwrap();
            assert_eq!(fp1, fp2);
        }
        // D and E fingerprints recorded as data
        let e = bimap_e();
        let _fp_e = fingerprint(&e, 2, 1 << 20).unwrap();
    }
}
