//! Table-driven arithmetic in the fields of order 2, 3, 4, 5, 7, 8 and 9.
//!
//! Elements are `0..q`. For a prime power `q = p^k` an element is the
//! polynomial whose base-`p` digits (least significant first) are its
//! coefficients, reduced modulo a fixed irreducible polynomial:
//!
//! | q | modulus       |
//! |---|---------------|
//! | 4 | x^2 + x + 1   |
//! | 8 | x^3 + x + 1   |
//! | 9 | x^2 + 1       |
//!
//! So in GF(4), `2` is a root `w` of the modulus and `3 = w + 1`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const SUPPORTED_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Clone, Debug)]
pub struct Field {
    q: usize,
    p: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// `(p, k, low coefficients of the monic modulus)`.
fn parameters(q: usize) -> Option<(usize, usize, &'static [usize])> {
    Some(match q {
        2 => (2, 1, &[]),
        3 => (3, 1, &[]),
        5 => (5, 1, &[]),
        7 => (7, 1, &[]),
        4 => (2, 2, &[1, 1]),
        8 => (2, 3, &[1, 1, 0]),
        9 => (3, 2, &[1, 0]),
        _ => return None,
    })
}

fn digits(mut a: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl Field {
    pub fn new(q: usize) -> Result<Self> {
        let (p, k, modulus) = parameters(q).ok_or(Error::UnsupportedField(q))?;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum, p) as u8;

                let mut prod = vec![0usize; 2 * k];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // x^k = -(modulus low terms)
                for deg in (k..2 * k).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, m) in modulus.iter().enumerate() {
                        let t = deg - k + i;
                        prod[t] = (prod[t] + (p - m) * c) % p;
                    }
                }
                mul[a * q + b] = undigits(&prod[..k], p) as u8;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap_or(0) as u8
                }
            })
            .collect();
        let field = Field {
            q,
            p,
            add,
            mul,
            neg,
            inv,
        };
        field.check_axioms().map_err(|e| {
            Error::ConstructionFailed(format!("field tables for GF({q}) are inconsistent: {e}"))
        })?;
        Ok(field)
    }

    /// Shared instance for a supported order.
    pub fn get(q: usize) -> Result<&'static Field> {
        static FIELDS: [OnceLock<Field>; 10] = [const { OnceLock::new() }; 10];
        parameters(q).ok_or(Error::UnsupportedField(q))?;
        Ok(FIELDS[q].get_or_init(|| Field::new(q).expect("supported field")))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// Maps an integer (possibly negative) into the prime subfield.
    pub fn from_int(&self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    /// Verifies the field axioms over the full tables.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let q = self.q as u8;
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(format!("identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(format!("no additive inverse for {a}"));
            }
            if a != 0 && self.mul(a, self.inv[a as usize]) != 1 {
                return Err(format!("no multiplicative inverse for {a}"));
            }
            let mut s = 0u8;
            for _ in 0..self.p {
                s = self.add(s, a);
            }
            if s != 0 {
                return Err(format!("{a} added {} times is not zero", self.p));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at {a}, {b}"));
                }
                if a != 0 && b != 0 && self.mul(a, b) == 0 {
                    return Err(format!("zero divisors {a}, {b}"));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return Err(format!("associativity fails at {a}, {b}, {c}"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at {a}, {b}, {c}"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_supported_order_builds() {
        for q in SUPPORTED_ORDERS {
            let f = Field::get(q).unwrap();
            assert_eq!(f.order(), q);
            f.check_axioms().unwrap();
        }
        assert!(matches!(Field::new(6), Err(Error::UnsupportedField(6))));
        assert!(Field::get(11).is_err());
    }

    #[test]
    fn characteristics() {
        assert_eq!(Field::get(4).unwrap().characteristic(), 2);
        assert_eq!(Field::get(8).unwrap().characteristic(), 2);
        assert_eq!(Field::get(9).unwrap().characteristic(), 3);
        let f4 = Field::get(4).unwrap();
        for a in 0..4 {
            assert_eq!(f4.add(a, a), 0);
        }
    }

    #[test]
    fn gf4_generator() {
        let f = Field::get(4).unwrap();
        // w^2 = w + 1
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 1), 3);
        assert_eq!(f.mul(2, 3), 1);
    }
}
