//! Exact arithmetic for prime fields GF(p) and extension fields GF(p^k).
//!
//! Elements are stored as packed codes: the coefficient vector
//! (c_0, ..., c_{k-1}) in the power basis is encoded as sum c_i p^i.
//! For prime fields the code is just the residue.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A field element, packed base-p. Interpret via the owning [`Field`].
pub type Scalar = u64;

/// Descriptor of GF(p^k). For k = 1 the minimal polynomial is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub deg: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub min_poly: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    k: u32,
    q: u64,
    /// Monic minimal polynomial, k+1 coefficients, lowest degree first.
    min_poly: Vec<u64>,
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        Ok(Field {
            p,
            k: 1,
            q: p,
            min_poly: vec![],
        })
    }

    /// GF(p^k) with the default (lexicographically smallest) irreducible
    /// minimal polynomial, or a caller-supplied one.
    pub fn extension(p: u64, k: u32, min_poly: Option<Vec<u64>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::BadParameters("degree must be >= 1".into()));
        }
        let q = checked_pow(p, k)
            .ok_or_else(|| Error::BadParameters(format!("{p}^{k} exceeds 64 bits")))?;
        if k == 1 {
            return Field::prime(p);
        }
        let mp = match min_poly {
            Some(mp) => {
                validate_min_poly(p, k, &mp)?;
                mp
            }
            None => default_irreducible(p, k),
        };
        Ok(Field {
            p,
            k,
            q,
            min_poly: mp,
        })
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        if d.deg <= 1 {
            Field::prime(d.characteristic)
        } else {
            let mp = if d.min_poly.is_empty() {
                None
            } else {
                Some(d.min_poly.clone())
            };
            Field::extension(d.characteristic, d.deg, mp)
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            characteristic: self.p,
            deg: self.k,
            min_poly: self.min_poly.clone(),
        }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn min_poly(&self) -> &[u64] {
        &self.min_poly
    }

    #[inline]
    pub fn zero(&self) -> Scalar {
        0
    }

    #[inline]
    pub fn one(&self) -> Scalar {
        1
    }

    /// All q elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        0..self.q
    }

    pub fn coeffs(&self, x: Scalar) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut x = x;
        for _ in 0..self.k {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Scalar> {
        if coeffs.len() != self.k as usize {
            return Err(Error::BadParameters(format!(
                "scalar needs {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        let mut x = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::BadParameters(format!(
                    "coefficient {c} out of range [0,{})",
                    self.p
                )));
            }
            x = x * self.p + c;
        }
        Ok(x)
    }

    /// Embed an integer (reduced mod p) as a prime-subfield element.
    #[inline]
    pub fn from_int(&self, n: i64) -> Scalar {
        let p = self.p as i64;
        (((n % p) + p) % p) as u64
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            self.map2(a, b, |x, y| {
                let s = x + y;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            })
        }
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.k == 1 {
            if a >= b {
                a - b
            } else {
                a + self.p - b
            }
        } else {
            self.map2(a, b, |x, y| if x >= y { x - y } else { x + self.p - y })
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        self.sub(0, a)
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.k == 1 {
            mul_mod(a, b, self.p)
        } else {
            let k = self.k as usize;
            let av = self.coeffs(a);
            let bv = self.coeffs(b);
            let mut prod = vec![0u64; 2 * k - 1];
            for (i, &ai) in av.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in bv.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + ai * bj) % self.p;
                }
            }
            // reduce modulo the monic minimal polynomial
            for d in (k..prod.len()).rev() {
                let c = prod[d];
                if c == 0 {
                    continue;
                }
                prod[d] = 0;
                for (j, &m) in self.min_poly.iter().enumerate().take(k) {
                    let idx = d - k + j;
                    let t = mul_mod(c, m, self.p);
                    prod[idx] = (prod[idx] + self.p - t) % self.p;
                }
            }
            let mut x = 0u64;
            for &c in prod[..k].iter().rev() {
                x = x * self.p + c;
            }
            x
        }
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        // x^(q-2); q <= 2^63 so at most 63 squarings
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius endomorphism x -> x^p.
    pub fn frobenius(&self, a: Scalar) -> Scalar {
        self.pow(a, self.p)
    }

    fn map2(&self, a: Scalar, b: Scalar, f: impl Fn(u64, u64) -> u64) -> Scalar {
        let mut x = 0u64;
        let mut pw = 1u64;
        let mut a = a;
        let mut b = b;
        for _ in 0..self.k {
            x += f(a % self.p, b % self.p) * pw;
            a /= self.p;
            b /= self.p;
            pw *= self.p;
        }
        x
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == sp {
            return true;
        }
        if n.is_multiple_of(sp) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

fn validate_min_poly(p: u64, k: u32, mp: &[u64]) -> Result<()> {
    if mp.len() != k as usize + 1 {
        return Err(Error::BadParameters(format!(
            "minimal polynomial must have {} coefficients",
            k + 1
        )));
    }
    if mp[k as usize] != 1 {
        return Err(Error::BadParameters(
            "minimal polynomial must be monic".into(),
        ));
    }
    if mp.iter().any(|&c| c >= p) {
        return Err(Error::BadParameters(
            "minimal polynomial coefficients out of range".into(),
        ));
    }
    if !poly_irreducible_prime(p, mp) {
        return Err(Error::BadParameters(
            "minimal polynomial is reducible".into(),
        ));
    }
    Ok(())
}

/// Smallest (by packed code of its non-leading coefficients) monic
/// irreducible polynomial of degree k over GF(p).
pub fn default_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let total = checked_pow(p, k as u32).expect("q fits u64");
    for code in 0..total {
        let mut poly = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            poly.push(c % p);
            c /= p;
        }
        poly.push(1);
        if poly_irreducible_prime(p, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

/// Irreducibility over GF(p) by trial division against all monic
/// polynomials of degree 1..=deg/2. Intended for small p^k only.
fn poly_irreducible_prime(p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = checked_pow(p, d as u32).expect("small");
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if poly_divides_prime(p, &g, f) {
                return false;
            }
        }
    }
    true
}

fn poly_divides_prime(p: u64, g: &[u64], f: &[u64]) -> bool {
    // remainder of f by monic g, all mod p
    let mut r: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for i in 0..=dg {
                let t = mul_mod(lead, g[i], p);
                let idx = shift + i;
                r[idx] = (r[idx] + p - t) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf3_inverse_of_two() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.inv(2).unwrap(), 2); // 2*2 = 4 = 1 mod 3
    }

    #[test]
    fn gf2_add_wraps() {
        let f = Field::prime(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn gf9_t_squared() {
        // GF(9) = GF(3)[t]/(t^2+1): t*t = -1 = 2.
        let f = Field::extension(3, 2, Some(vec![1, 0, 1])).unwrap();
        let t = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(t, t), 2);
        // exhaustive multiplication-table oracle: check distributivity and
        // that the table agrees with coefficientwise polynomial reduction
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn inv_zero_errors() {
        let f = Field::prime(5).unwrap();
        assert!(matches!(f.inv(0), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn mul_inv_is_one_small_fields() {
        for f in [
            Field::prime(2).unwrap(),
            Field::prime(3).unwrap(),
            Field::prime(5).unwrap(),
            Field::extension(2, 3, None).unwrap(),
            Field::extension(3, 2, None).unwrap(),
        ] {
            for x in f.elements().skip(1) {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn frobenius_additive_multiplicative_q_le_81() {
        for f in [
            Field::extension(2, 4, None).unwrap(),
            Field::extension(3, 4, None).unwrap(),
            Field::extension(2, 6, None).unwrap(),
        ] {
            if f.q() > 81 {
                continue;
            }
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(
                        f.frobenius(f.add(a, b)),
                        f.add(f.frobenius(a), f.frobenius(b))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(a, b)),
                        f.mul(f.frobenius(a), f.frobenius(b))
                    );
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_order() {
        for f in [
            Field::extension(3, 4, None).unwrap(),
            Field::extension(2, 6, None).unwrap(),
            Field::extension(5, 2, None).unwrap(),
        ] {
            if f.q() > 81 {
                continue;
            }
            for x in f.elements().skip(1) {
                assert_eq!(f.pow(x, f.q() - 1), f.one());
            }
        }
    }

    #[test]
    fn default_irreducibles_are_irreducible() {
        for p in [2u64, 3, 5] {
            for k in 2..=6u32 {
                let mp = default_irreducible(p, k);
                assert_eq!(mp.len() as u32, k + 1);
                assert!(poly_irreducible_prime(p, &mp), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn reducible_min_poly_rejected() {
        // x^2 + 2x + 1 = (x+1)^2 over GF(3)
        assert!(Field::extension(3, 2, Some(vec![1, 2, 1])).is_err());
    }

    #[test]
    fn descriptor_roundtrip() {
        let f = Field::extension(3, 5, None).unwrap();
        let d = f.descriptor();
        let g = Field::from_descriptor(&d).unwrap();
        assert_eq!(f, g);
    }
}
