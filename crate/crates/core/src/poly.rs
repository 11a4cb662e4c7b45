//! Univariate polynomials over a finite field, plus the factorization
//! degree data used for pencil labels.

use crate::field::{Field, Scalar};

/// Dense coefficient vector, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one(f: &Field) -> Poly {
        Poly {
            coeffs: vec![f.one()],
        }
    }

    pub fn x(_f: &Field) -> Poly {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn from_coeffs(_f: &Field, coeffs: Vec<Scalar>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self, f: &Field) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == f.one()
    }

    pub fn leading(&self) -> Scalar {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = f.add(a, b);
        }
        Poly::from_coeffs(f, out)
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = f.sub(a, b);
        }
        Poly::from_coeffs(f, out)
    }

    pub fn scale(&self, c: Scalar, f: &Field) -> Poly {
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, out)
    }

    /// (quotient, remainder) dividing by a polynomial with invertible lead.
    pub fn divmod(&self, d: &Poly, f: &Field) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dl = d.degree().unwrap();
        let inv_lead = f.inv(d.leading()).expect("leading coefficient invertible");
        let mut r = self.coeffs.clone();
        if r.len() <= dl {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0; r.len() - dl];
        while r.len() > dl {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dl;
            if lead != 0 {
                let c = f.mul(lead, inv_lead);
                q[shift] = c;
                for i in 0..=dl {
                    let t = f.mul(c, d.coeffs[i]);
                    r[shift + i] = f.sub(r[shift + i], t);
                }
            }
            r.pop();
        }
        (Poly::from_coeffs(f, q), Poly::from_coeffs(f, r))
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Poly {
        self.divmod(d, f).1
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.leading()).unwrap(), f)
    }

    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let mut acc = 0;
            for _ in 0..(i as u64 % f.p()) {
                acc = f.add(acc, c);
            }
            out.push(acc);
        }
        Poly::from_coeffs(f, out)
    }

    pub fn eval(&self, x: Scalar, f: &Field) -> Scalar {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// self^e mod m
    pub fn pow_mod(&self, mut e: u64, m: &Poly, f: &Field) -> Poly {
        let mut base = self.rem(m, f);
        let mut acc = Poly::one(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f);
            }
            base = base.mul(&base, f).rem(m, f);
            e >>= 1;
        }
        acc
    }
}

/// Degrees (with multiplicity) of the irreducible factors of a nonzero
/// polynomial over GF(q), sorted ascending. Uses squarefree decomposition
/// followed by distinct-degree factorization; no splitting is required
/// because only degrees are reported.
pub fn factor_degrees(poly: &Poly, f: &Field) -> Vec<usize> {
    assert!(!poly.is_zero(), "cannot factor the zero polynomial");
    let mut degrees = Vec::new();
    for (g, mult) in squarefree_decomposition(&poly.monic(f), f) {
        for (d, count) in distinct_degree_counts(&g, f) {
            for _ in 0..count * mult {
                degrees.push(d);
            }
        }
    }
    degrees.sort_unstable();
    degrees
}

/// Squarefree decomposition over GF(q): returns pairs (g_i, m_i) with
/// the input equal to prod g_i^{m_i}, each g_i squarefree, m_i distinct.
fn squarefree_decomposition(poly: &Poly, f: &Field) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    sqfree_rec(poly, 1, f, &mut out);
    out
}

fn sqfree_rec(poly: &Poly, outer_mult: usize, f: &Field, out: &mut Vec<(Poly, usize)>) {
    if poly.degree() == Some(0) || poly.is_zero() {
        return;
    }
    let deriv = poly.derivative(f);
    if deriv.is_zero() {
        // poly = g(x^p); take p-th roots of coefficients
        let p = f.p() as usize;
        let mut g = Vec::new();
        for (i, &c) in poly.coeffs.iter().enumerate() {
            if i % p == 0 {
                // p-th root in GF(q): c^(q/p)
                g.push(f.pow(c, f.q() / f.p()));
            } else {
                debug_assert_eq!(c, 0);
            }
        }
        let g = Poly::from_coeffs(f, g);
        sqfree_rec(&g, outer_mult * p, f, out);
        return;
    }
    let mut c = poly.gcd(&deriv, f);
    let mut w = poly.divmod(&c, f).0;
    let mut i = 1usize;
    while !w.is_one(f) {
        let y = w.gcd(&c, f);
        let z = w.divmod(&y, f).0;
        if z.degree().is_some_and(|d| d > 0) {
            out.push((z, i * outer_mult));
        }
        i += 1;
        c = c.divmod(&y, f).0;
        w = y;
    }
    if c.degree().is_some_and(|d| d > 0) {
        sqfree_rec(&c, outer_mult, f, out);
    }
}

/// For squarefree g, count irreducible factors by degree:
/// returns (degree, count) pairs.
fn distinct_degree_counts(g: &Poly, f: &Field) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut g = g.monic(f);
    let mut h = Poly::x(f).rem(&g, f);
    let mut d = 0usize;
    while g.degree().is_some_and(|dg| dg > 0) {
        d += 1;
        if g.degree() == Some(d) {
            out.push((d, 1));
            break;
        }
        if 2 * d > g.degree().unwrap() {
            // remaining part is irreducible
            out.push((g.degree().unwrap(), 1));
            break;
        }
        h = h.pow_mod(f.q(), &g, f);
        let diff = h.sub(&Poly::x(f).rem(&g, f), f);
        let gd = g.gcd(&diff, f);
        if let Some(dd) = gd.degree() {
            if dd > 0 {
                out.push((d, dd / d));
                g = g.divmod(&gd, f).0;
                h = h.rem(&g, f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn divmod_roundtrip() {
        let f = gf(5);
        let a = Poly::from_coeffs(&f, vec![1, 2, 3, 4]);
        let b = Poly::from_coeffs(&f, vec![2, 1]);
        let (q, r) = a.divmod(&b, &f);
        let back = q.mul(&b, &f).add(&r, &f);
        assert_eq!(back, a);
    }

    #[test]
    fn factor_degrees_examples() {
        let f = gf(3);
        // (x+1)^2 (x^2+1): x^2+1 irreducible over GF(3)
        let lin = Poly::from_coeffs(&f, vec![1, 1]);
        let quad = Poly::from_coeffs(&f, vec![1, 0, 1]);
        let prod = lin.mul(&lin, &f).mul(&quad, &f);
        assert_eq!(factor_degrees(&prod, &f), vec![1, 1, 2]);

        // x^4: four linear factors
        let x4 = Poly::from_coeffs(&f, vec![0, 0, 0, 0, 1]);
        assert_eq!(factor_degrees(&x4, &f), vec![1, 1, 1, 1]);

        // (x^2+1)^2 over GF(3): degrees {2,2}
        let q2 = quad.mul(&quad, &f);
        assert_eq!(factor_degrees(&q2, &f), vec![2, 2]);
    }

    #[test]
    fn factor_degrees_char2_pth_power() {
        let f = gf(2);
        // (x^2 + x + 1)^2 has zero derivative over GF(2)
        let quad = Poly::from_coeffs(&f, vec![1, 1, 1]);
        let sq = quad.mul(&quad, &f);
        assert_eq!(factor_degrees(&sq, &f), vec![2, 2]);
    }

    #[test]
    fn factor_degrees_exhaustive_small() {
        // cross-check against brute-force factor counting over GF(2) for
        // all monic polynomials of degree <= 5
        let f = gf(2);
        let irreducibles: Vec<Poly> = (1usize..=5)
            .flat_map(|d| {
                (0..(1u64 << d)).map(move |code| {
                    let mut cs: Vec<u64> = (0..d).map(|i| (code >> i) & 1).collect();
                    cs.push(1);
                    Poly { coeffs: cs }
                })
            })
            .filter(|p| brute_irreducible(p, &f))
            .collect();
        for code in 1u64..(1 << 5) {
            let mut cs: Vec<u64> = (0..5).map(|i| (code >> i) & 1).collect();
            cs.push(1);
            let p = Poly { coeffs: cs };
            let mut expected = Vec::new();
            let mut rem = p.clone();
            'outer: while rem.degree().is_some_and(|d| d > 0) {
                for irr in &irreducibles {
                    if irr.degree().unwrap() > rem.degree().unwrap() {
                        continue;
                    }
                    let (q, r) = rem.divmod(irr, &f);
                    if r.is_zero() {
                        expected.push(irr.degree().unwrap());
                        rem = q;
                        continue 'outer;
                    }
                }
                panic!("no factor found");
            }
            expected.sort_unstable();
            assert_eq!(factor_degrees(&p, &f), expected, "poly {:?}", p);
        }
    }

    fn brute_irreducible(p: &Poly, f: &Field) -> bool {
        let d = p.degree().unwrap();
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        for dd in 1..=d / 2 {
            for code in 0..f.q().pow(dd as u32) {
                let mut cs = Vec::new();
                let mut c = code;
                for _ in 0..dd {
                    cs.push(c % f.q());
                    c /= f.q();
                }
                cs.push(1);
                let g = Poly::from_coeffs(f, cs);
                if p.rem(&g, f).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}
