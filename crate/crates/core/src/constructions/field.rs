//! Finite fields `GF(p^d)` as polynomials over `F_p` modulo a fixed monic
//! irreducible polynomial.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{d-1} p^{d-1}`
//! built from its coefficient list (low degree first).

use serde::Serialize;

use super::ConstructionError;
use crate::arith::prime_power;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteField {
    p: u32,
    degree: u32,
    /// Monic reduction polynomial, coefficients low degree first (length `degree + 1`).
    reduction: Vec<u32>,
    order: u32,
}

impl FiniteField {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn reduction(&self) -> &[u32] {
        &self.reduction
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.degree as usize];
        for c in out.iter_mut() {
            *c = a % self.p;
            a /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|&c| (self.p - c) % self.p).collect();
        self.pack(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let d = self.degree as usize;
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * d];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        // reduce using x^d = -(r_0 + ... + r_{d-1} x^{d-1})
        for top in (d..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (k, &r) in self.reduction[..d].iter().enumerate() {
                let idx = top - d + k;
                prod[idx] = (prod[idx] + c * (p - r as u64)) % p;
            }
        }
        let low: Vec<u32> = prod[..d].iter().map(|&c| c as u32).collect();
        self.pack(&low)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.order as u64 - 2))
    }
}

/// Remainder of `num` modulo the monic `den` over `F_p` (low degree first).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    let p = p as u64;
    while rem.len() > dd {
        let lead = rem.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let shift = rem.len() - dd;
        for (k, &c) in den[..dd].iter().enumerate() {
            rem[shift + k] = (rem[shift + k] + lead * (p - c as u64)) % p;
        }
    }
    rem.into_iter().map(|c| c as u32).collect()
}

/// Monic polynomials of degree `deg` in the fixed enumeration order:
/// coefficient lists `(c_0, ..., c_{deg-1}, 1)` compared low degree first.
fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg);
    (0..count).map(move |mut idx| {
        let mut coeffs = vec![0u32; deg as usize + 1];
        // c_0 is the most significant digit of idx
        for c in coeffs[..deg as usize].iter_mut().rev() {
            *c = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        coeffs[deg as usize] = 1;
        coeffs
    })
}

/// Irreducibility by trial division by every monic polynomial of degree
/// at most `deg / 2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|div| poly_rem(poly, &div, p).iter().any(|&c| c != 0)))
}

/// `GF(q)` with the first monic irreducible polynomial of degree `d`,
/// comparing coefficient lists low degree first.
pub fn gf(q: u64) -> Result<FiniteField, ConstructionError> {
    let (p, degree) = prime_power(q).ok_or(ConstructionError::NotPrimePower(q))?;
    if q > MAX_ORDER {
        return Err(ConstructionError::TooLarge(format!(
            "field order {q} exceeds {MAX_ORDER}"
        )));
    }
    let p = p as u32;
    let reduction = monic_polys(p, degree)
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial exists in every degree");
    Ok(FiniteField {
        p,
        degree,
        reduction,
        order: q as u32,
    })
}
