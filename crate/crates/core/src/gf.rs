//! Exact arithmetic in GF(q) for odd prime powers q = p^m.
//!
//! Elements are coefficient vectors of length m over GF(p), reduced modulo a
//! fixed monic irreducible polynomial. For m = 1 this degenerates to integers
//! mod p. Quadratic residue tests use the Euler criterion; square roots come
//! from an exhaustive square table, which is fine at the scales this crate
//! targets (q ≤ 2^16).

use crate::error::{Error, Result};

/// Description of GF(p^m): characteristic, degree, and the reduction modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    m: usize,
    /// Monic degree-m polynomial over GF(p), coefficients low-to-high
    /// (length m + 1). For m = 1 this is the polynomial t, i.e. [0, 1].
    modulus: Vec<u64>,
    q: u64,
}

/// An element of GF(p^m): exactly m coefficients, each in [0, p).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---- dense polynomial helpers over GF(p), coefficients low-to-high ----

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial b.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*b.last().unwrap(), 1, "divisor must be monic");
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p * p - (lead * bi) % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    poly_trim(&mut r);
    r
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Irreducibility over GF(p) by trial division against all monic polynomials
/// of degree 1..=deg/2.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // enumerate monic degree-d divisors by their lower d coefficients
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut c = code;
            for coeff in g.iter_mut().take(d) {
                *coeff = c % p;
                c /= p;
            }
            g[d] = 1;
            if poly_is_zero(&poly_rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds a validated GF(p^m). If `modulus` is absent, picks the
    /// lexicographically smallest monic irreducible of degree m (comparing
    /// coefficient lists low-to-high), so repeated runs agree.
    pub fn new(p: u64, m: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::BadCharacteristic(p));
        }
        if m == 0 {
            return Err(Error::BadDegree(m));
        }
        let q = p
            .checked_pow(m as u32)
            .ok_or_else(|| Error::InvalidParameter(format!("p^m overflows u64: {p}^{m}")))?;
        let modulus = match modulus {
            Some(f) => {
                if f.len() != m + 1 || *f.last().unwrap() != 1 || f.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus {
                        expected: m,
                        got: f.len().saturating_sub(1),
                    });
                }
                if !poly_is_irreducible(&f, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                f
            }
            None => Self::smallest_irreducible(p, m),
        };
        Ok(FieldSpec { p, m, modulus, q })
    }

    fn smallest_irreducible(p: u64, m: usize) -> Vec<u64> {
        if m == 1 {
            return vec![0, 1];
        }
        // lex order on (c_0, ..., c_{m-1}): c_0 is the most significant digit
        let total = p.pow(m as u32);
        for code in 0..total {
            let mut f = vec![0u64; m + 1];
            let mut c = code;
            for i in (0..m).rev() {
                f[i] = c % p;
                c /= p;
            }
            f[m] = 1;
            if poly_is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("an irreducible of every degree exists over GF(p)")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// Element from explicit coefficients (low-to-high), reduced mod p.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.m {
            return Err(Error::WrongCoefficientCount {
                expected: self.m,
                got: coeffs.len(),
            });
        }
        Ok(FieldElement {
            coeffs: coeffs.iter().map(|&c| c % self.p).collect(),
        })
    }

    /// Element from a (possibly negative) integer representative; for m > 1
    /// this embeds GF(p) as the constant polynomials.
    pub fn from_int(&self, v: i64) -> FieldElement {
        let p = self.p as i64;
        let r = ((v % p) + p) % p;
        let mut coeffs = vec![0; self.m];
        coeffs[0] = r as u64;
        FieldElement { coeffs }
    }

    /// Element with coefficient vector equal to the base-p digits of `idx`
    /// (coeffs[i] is digit i). This gives a stable enumeration 0..q.
    pub fn from_index(&self, idx: u64) -> FieldElement {
        debug_assert!(idx < self.q);
        let mut coeffs = vec![0; self.m];
        let mut c = idx;
        for coeff in coeffs.iter_mut() {
            *coeff = c % self.p;
            c /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        let mut idx = 0u64;
        for &c in a.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.coeffs.len() != self.m {
            return Err(Error::WrongCoefficientCount {
                expected: self.m,
                got: a.coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if self.m == 1 {
            return FieldElement {
                coeffs: vec![(a.coeffs[0] * b.coeffs[0]) % self.p],
            };
        }
        let prod = poly_mul(&a.coeffs, &b.coeffs, self.p);
        let mut rem = poly_rem(&prod, &self.modulus, self.p);
        rem.resize(self.m, 0);
        FieldElement { coeffs: rem }
    }

    /// Multiplicative inverse via a^(q-2); errors on zero.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Repeated-squaring exponentiation; 0^0 = 1.
    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Euler criterion: a^((q-1)/2) ∈ {0, 1}. Zero counts as a square.
    pub fn is_square(&self, a: &FieldElement) -> bool {
        if self.is_zero(a) {
            return true;
        }
        self.pow(a, (self.q - 1) / 2) == self.one()
    }

    /// Both square roots of `a` when they exist, ordered with the canonical
    /// (lexicographically smallest coefficient list) root first. For a = 0
    /// both entries are 0.
    pub fn sqrt_both(&self, a: &FieldElement) -> Option<(FieldElement, FieldElement)> {
        if self.is_zero(a) {
            return Some((self.zero(), self.zero()));
        }
        let mut roots: Vec<FieldElement> = self
            .elements()
            .filter(|b| &self.mul(b, b) == a)
            .collect();
        if roots.is_empty() {
            return None;
        }
        roots.sort();
        let hi = roots.last().unwrap().clone();
        Some((roots[0].clone(), hi))
    }

    /// Canonical square root (lexicographically smallest), or None.
    pub fn sqrt(&self, a: &FieldElement) -> Option<FieldElement> {
        self.sqrt_both(a).map(|(lo, _)| lo)
    }

    /// Render an element the way the file formats expect: a bare integer for
    /// m = 1, the coefficient list otherwise.
    pub fn render(&self, a: &FieldElement) -> String {
        if self.m == 1 {
            format!("{}", a.coeffs[0])
        } else {
            format!("{:?}", a.coeffs)
        }
    }
}
