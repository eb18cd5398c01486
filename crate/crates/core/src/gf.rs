//! Table-driven arithmetic in GF(p^e) for orders up to 16.
//!
//! A [`Field`] is built once from its order and is immutable afterwards;
//! every operation is a table lookup, so fields can be shared freely
//! across threads. Extension-field elements are indexed by packing their
//! polynomial coefficients in base p: the element `c0 + c1·x + …` has
//! index `c0 + c1·p + …`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u8 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u8),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u8),
    #[error("scalars belong to different fields: GF({0}) vs GF({1})")]
    MixedFields(u8, u8),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u8),
    #[error("scalar index {idx} out of range for GF({q})")]
    ScalarOutOfRange { idx: u8, q: u8 },
}

/// An element of a specific GF(q), tagged with the field order so that
/// accidental mixing of fields is caught at run time.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    q: u8,
    idx: u8,
}

impl Scalar {
    pub fn index(self) -> u8 {
        self.idx
    }

    pub fn order(self) -> u8 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.idx == 0
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈GF({})", self.idx, self.q)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.idx)
    }
}

/// A small finite field GF(p^e), q = p^e ≤ 16.
///
/// The modulus is the lexicographically smallest monic irreducible
/// polynomial of degree e over GF(p), coefficients compared from the
/// constant term upwards, so construction is deterministic across runs.
pub struct Field {
    p: u8,
    e: u8,
    q: u8,
    /// Modulus coefficients, constant term first, length e+1, monic.
    modulus: Vec<u8>,
    /// log[a] = k with generator^k = a, for a != 0.
    log: Vec<u8>,
    /// antilog[k] = generator^k for k in 0..q-1; antilog[q-1] wraps to 1.
    antilog: Vec<u8>,
    add_tab: Vec<u8>,
    neg_tab: Vec<u8>,
    inv_tab: Vec<u8>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // Construction is canonical, so the order determines the field.
        self.q == other.q
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn is_prime(p: u8) -> bool {
    p >= 2 && (2..p).all(|d| !p.is_multiple_of(d))
}

/// Splits q into (p, e) with p prime, or reports failure.
fn factor_prime_power(q: u8) -> Option<(u8, u8)> {
    for p in 2..=q {
        if !is_prime(p) {
            continue;
        }
        if !q.is_multiple_of(p) {
            continue;
        }
        let mut m = q;
        let mut e = 0u8;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        return if m == 1 { Some((p, e)) } else { None };
    }
    None
}

/// Polynomial remainder over GF(p); coefficients constant-term first.
fn poly_rem(mut a: Vec<u8>, b: &[u8], p: u8) -> Vec<u8> {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1, "divisor must be monic");
    while a.len() > db {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if lead != 0 {
            for i in 0..=db {
                let t = (lead as u16 * b[i] as u16) % p as u16;
                a[shift + i] = ((a[shift + i] as u16 + p as u16 - t) % p as u16) as u8;
            }
        }
        a.pop();
    }
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_is_zero(a: &[u8]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn poly_is_irreducible(f: &[u8], p: u8) -> bool {
    let deg = f.len() - 1;
    if deg == 0 || f[deg] != 1 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let mut counter = vec![0u8; d];
        loop {
            let mut g: Vec<u8> = counter.clone();
            g.push(1);
            if poly_is_zero(&poly_rem(f.to_vec(), &g, p)) {
                return false;
            }
            // advance base-p counter
            let mut i = 0;
            while i < d {
                counter[i] += 1;
                if counter[i] < p {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree e over GF(p), comparing
/// coefficient lists low-degree-first.
fn smallest_irreducible(p: u8, e: u8) -> Vec<u8> {
    let e = e as usize;
    if e == 1 {
        return vec![0, 1]; // x; unused for prime fields
    }
    let total = (p as u32).pow(e as u32);
    // Index digits are taken with c0 most significant so that counting
    // order equals lexicographic order on (c0, c1, ..., c_{e-1}).
    for idx in 0..total {
        let mut coeffs = vec![0u8; e + 1];
        coeffs[e] = 1;
        let mut rem = idx;
        for i in (0..e).rev() {
            coeffs[e - 1 - i] = (rem / (p as u32).pow(i as u32)) as u8 % p;
            rem %= (p as u32).pow(i as u32);
        }
        if poly_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of degree {e} over GF({p}) exists");
}

impl Field {
    /// Builds GF(q). Fails if q is not a prime power or exceeds [`MAX_ORDER`].
    pub fn new(q: u8) -> Result<Field, GfError> {
        if q > MAX_ORDER {
            return Err(GfError::OrderTooLarge(q));
        }
        let (p, e) = factor_prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        let modulus = smallest_irreducible(p, e);

        let qs = q as usize;
        let to_digits = |idx: u8| -> Vec<u8> {
            let mut d = vec![0u8; e as usize];
            let mut r = idx;
            for slot in d.iter_mut() {
                *slot = r % p;
                r /= p;
            }
            d
        };
        let from_digits = |d: &[u8]| -> u8 {
            let mut idx = 0u8;
            for &c in d.iter().rev() {
                idx = idx * p + c;
            }
            idx
        };

        let add_raw = |a: u8, b: u8| -> u8 {
            let da = to_digits(a);
            let db = to_digits(b);
            let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            from_digits(&sum)
        };
        let mul_raw = |a: u8, b: u8| -> u8 {
            let da = to_digits(a);
            let db = to_digits(b);
            let mut prod = vec![0u8; 2 * e as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u16 + x as u16 * y as u16) % p as u16) as u8;
                }
            }
            let rem = poly_rem(prod, &modulus, p);
            let mut digits = vec![0u8; e as usize];
            digits[..rem.len()].copy_from_slice(&rem);
            from_digits(&digits)
        };

        // Find a multiplicative generator and fill the log/antilog tables.
        let mut log = vec![0u8; qs];
        let mut antilog = vec![0u8; qs];
        let order = q - 1;
        'cand: for g in 1..q {
            let mut x = 1u8;
            let mut seen = vec![false; qs];
            for k in 0..order {
                if seen[x as usize] {
                    continue 'cand;
                }
                seen[x as usize] = true;
                antilog[k as usize] = x;
                log[x as usize] = k;
                x = mul_raw(x, g);
            }
            if x == 1 {
                antilog[order as usize] = 1;
                let mut add_tab = vec![0u8; qs * qs];
                let mut neg_tab = vec![0u8; qs];
                let mut inv_tab = vec![0u8; qs];
                for a in 0..q {
                    for b in 0..q {
                        add_tab[a as usize * qs + b as usize] = add_raw(a, b);
                    }
                }
                for a in 0..q {
                    neg_tab[a as usize] = (0..q).find(|&b| add_raw(a, b) == 0).unwrap();
                    if a != 0 {
                        inv_tab[a as usize] = (1..q).find(|&b| mul_raw(a, b) == 1).unwrap();
                    }
                }
                return Ok(Field {
                    p,
                    e,
                    q,
                    modulus,
                    log,
                    antilog,
                    add_tab,
                    neg_tab,
                    inv_tab,
                });
            }
        }
        unreachable!("GF({q})* is cyclic, so a generator exists");
    }

    /// Convenience wrapper returning a shareable handle.
    pub fn shared(q: u8) -> Result<Arc<Field>, GfError> {
        Field::new(q).map(Arc::new)
    }

    pub fn order(&self) -> u8 {
        self.q
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.e
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn scalar(&self, idx: u8) -> Result<Scalar, GfError> {
        if idx < self.q {
            Ok(Scalar { q: self.q, idx })
        } else {
            Err(GfError::ScalarOutOfRange { idx, q: self.q })
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar { q: self.q, idx: 0 }
    }

    pub fn one(&self) -> Scalar {
        Scalar { q: self.q, idx: 1 }
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.q).map(|idx| Scalar { q: self.q, idx })
    }

    fn check(&self, s: Scalar) -> Result<u8, GfError> {
        if s.q == self.q {
            Ok(s.idx)
        } else {
            Err(GfError::MixedFields(self.q, s.q))
        }
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Result<Scalar, GfError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(Scalar {
            q: self.q,
            idx: self.add_idx(a, b),
        })
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Result<Scalar, GfError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(Scalar {
            q: self.q,
            idx: self.sub_idx(a, b),
        })
    }

    pub fn neg(&self, a: Scalar) -> Result<Scalar, GfError> {
        let a = self.check(a)?;
        Ok(Scalar {
            q: self.q,
            idx: self.neg_idx(a),
        })
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Result<Scalar, GfError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(Scalar {
            q: self.q,
            idx: self.mul_idx(a, b),
        })
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar, GfError> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(GfError::DivisionByZero(self.q));
        }
        Ok(Scalar {
            q: self.q,
            idx: self.inv_idx(a),
        })
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar, GfError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        if b == 0 {
            return Err(GfError::DivisionByZero(self.q));
        }
        Ok(Scalar {
            q: self.q,
            idx: self.div_idx(a, b),
        })
    }

    /// Discrete log of a nonzero scalar with respect to the stored generator.
    pub fn log(&self, a: Scalar) -> Result<u8, GfError> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(GfError::DivisionByZero(self.q));
        }
        Ok(self.log[a as usize])
    }

    pub fn antilog(&self, k: u8) -> Scalar {
        Scalar {
            q: self.q,
            idx: self.antilog[k as usize % (self.q as usize - 1).max(1)],
        }
    }

    // Raw index arithmetic for the linear-algebra layer. Callers must
    // guarantee indices are < q.

    #[inline]
    pub(crate) fn add_idx(&self, a: u8, b: u8) -> u8 {
        self.add_tab[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn sub_idx(&self, a: u8, b: u8) -> u8 {
        self.add_idx(a, self.neg_tab[b as usize])
    }

    #[inline]
    pub(crate) fn neg_idx(&self, a: u8) -> u8 {
        self.neg_tab[a as usize]
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.antilog[k % (self.q as usize - 1)]
    }

    #[inline]
    pub(crate) fn inv_idx(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv_tab[a as usize]
    }

    #[inline]
    pub(crate) fn div_idx(&self, a: u8, b: u8) -> u8 {
        self.mul_idx(a, self.inv_idx(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDERS: [u8; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

    #[test]
    fn create_prime_field() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.characteristic(), 2);
        assert_eq!(f.degree(), 1);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn create_gf4_modulus() {
        // x^2 + x + 1 is the unique irreducible monic quadratic over GF(2).
        let f = Field::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn create_gf9_modulus() {
        // x^2 + 1 has no root mod 3.
        let f = Field::new(9).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn reject_non_prime_power() {
        assert_eq!(Field::new(6).unwrap_err(), GfError::NotPrimePower(6));
        assert_eq!(Field::new(12).unwrap_err(), GfError::NotPrimePower(12));
        assert_eq!(Field::new(17).unwrap_err(), GfError::OrderTooLarge(17));
    }

    #[test]
    fn add_examples() {
        let f3 = Field::new(3).unwrap();
        let two = f3.scalar(2).unwrap();
        assert_eq!(f3.add(two, two).unwrap().index(), 1);

        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.add(f2.one(), f2.one()).unwrap(), f2.zero());

        // In GF(4) the element x has index 2; characteristic two kills x + x.
        let f4 = Field::new(4).unwrap();
        let x = f4.scalar(2).unwrap();
        assert_eq!(f4.add(x, x).unwrap(), f4.zero());
    }

    #[test]
    fn mul_examples() {
        let f3 = Field::new(3).unwrap();
        let two = f3.scalar(2).unwrap();
        assert_eq!(f3.mul(two, two).unwrap().index(), 1);

        // x * x = x + 1 in GF(4) with modulus x^2 + x + 1.
        let f4 = Field::new(4).unwrap();
        let x = f4.scalar(2).unwrap();
        assert_eq!(f4.mul(x, x).unwrap().index(), 3);

        for &q in &ORDERS {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.mul(a, f.one()).unwrap(), a);
            }
        }
    }

    #[test]
    fn inv_examples() {
        let f3 = Field::new(3).unwrap();
        let two = f3.scalar(2).unwrap();
        assert_eq!(f3.inv(two).unwrap(), two);

        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.inv(f2.one()).unwrap(), f2.one());

        for &q in &ORDERS {
            let f = Field::new(q).unwrap();
            assert_eq!(f.inv(f.zero()).unwrap_err(), GfError::DivisionByZero(q));
        }
    }

    #[test]
    fn mixed_fields_rejected() {
        let f2 = Field::new(2).unwrap();
        let f3 = Field::new(3).unwrap();
        let err = f2.add(f2.one(), f3.one()).unwrap_err();
        assert_eq!(err, GfError::MixedFields(2, 3));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for &q in &ORDERS {
            let f = Field::new(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add_idx(a, b), f.add_idx(b, a));
                    assert_eq!(f.mul_idx(a, b), f.mul_idx(b, a));
                    for c in 0..q {
                        assert_eq!(f.add_idx(f.add_idx(a, b), c), f.add_idx(a, f.add_idx(b, c)));
                        assert_eq!(f.mul_idx(f.mul_idx(a, b), c), f.mul_idx(a, f.mul_idx(b, c)));
                        assert_eq!(
                            f.mul_idx(a, f.add_idx(b, c)),
                            f.add_idx(f.mul_idx(a, b), f.mul_idx(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mul_inv_is_one() {
        for &q in &ORDERS {
            let f = Field::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul_idx(a, f.inv_idx(a)), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for &q in &ORDERS {
            let f = Field::new(q).unwrap();
            let p = f.characteristic();
            let pow_p = |a: u8| -> u8 {
                let mut r = 1u8;
                for _ in 0..p {
                    r = f.mul_idx(r, a);
                }
                r
            };
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(pow_p(f.add_idx(a, b)), f.add_idx(pow_p(a), pow_p(b)));
                }
            }
        }
    }

    #[test]
    fn log_antilog_roundtrip() {
        for &q in &ORDERS {
            let f = Field::new(q).unwrap();
            for a in 1..q {
                let s = f.scalar(a).unwrap();
                assert_eq!(f.antilog(f.log(s).unwrap()), s);
            }
        }
    }
}
