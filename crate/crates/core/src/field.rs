//! Arithmetic in the prime field F_p for odd p below 2^31.
//!
//! Residues are stored as canonical `u32` values in `[0, p)`. Geometry code
//! works directly on residues through the methods of [`Prime`]; the
//! [`FieldElement`] wrapper carries its modulus and is the convenient
//! user-facing value type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Largest admissible modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus {0} exceeds 2^31")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// An odd prime `3 <= p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }

    /// `p mod 4`, which decides whether -1 is a square.
    pub fn residue_mod4(self) -> u32 {
        self.0 % 4
    }

    /// Canonical residue of an arbitrary signed integer.
    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.0 as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.0 - b)
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let p = self.0 as u64;
        let mut b = base as u64 % p;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u32
    }

    pub fn inv(self, a: u32) -> Result<u32, FieldError> {
        if a % self.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    /// Euler's criterion.
    pub fn legendre(self, a: u32) -> i8 {
        let a = a % self.0;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.0 as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(self, a: u32) -> bool {
        self.legendre(a) >= 0
    }

    /// Both square roots `(r, p - r)` with `r <= p - r`, `(0, 0)` for zero,
    /// `None` for non-residues. Tonelli–Shanks.
    pub fn sqrt(self, a: u32) -> Option<(u32, u32)> {
        let a = a % self.0;
        if a == 0 {
            return Some((0, 0));
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.0 as u64;
        let r = if p % 4 == 3 {
            self.pow(a, (p + 1) / 4)
        } else {
            let mut q = p - 1;
            let mut s = 0u32;
            while q % 2 == 0 {
                q /= 2;
                s += 1;
            }
            let mut z = 2u32;
            while self.legendre(z) != -1 {
                z += 1;
            }
            let mut m = s;
            let mut c = self.pow(z, q);
            let mut t = self.pow(a, q);
            let mut r = self.pow(a, (q + 1) / 2);
            while t != 1 {
                let mut i = 0;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = self.mul(t2, t2);
                    i += 1;
                }
                let b = self.pow(c, 1u64 << (m - i - 1));
                m = i;
                c = self.mul(b, b);
                t = self.mul(t, c);
                r = self.mul(r, b);
            }
            r
        };
        debug_assert_eq!(self.mul(r, r), a);
        let other = self.neg(r);
        Some((r.min(other), r.max(other)))
    }

    /// A square root of -1, when `p ≡ 1 (mod 4)`.
    pub fn sqrt_minus_one(self) -> Option<u32> {
        self.sqrt(self.0 - 1).map(|(r, _)| r)
    }

    pub fn elem(self, a: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(a),
            p: self,
        }
    }

    /// Iterator over all residues `0..p`.
    pub fn residues(self) -> std::ops::Range<u32> {
        0..self.0
    }

    /// Signed representative in `(-p/2, p/2]`, handy for display.
    pub fn signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.0 as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A residue class modulo an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    p: Prime,
}

impl FieldElement {
    pub fn new(value: i64, p: Prime) -> Self {
        p.elem(value)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn legendre(self) -> i8 {
        self.p.legendre(self.value)
    }

    pub fn sqrt(self) -> Option<(FieldElement, FieldElement)> {
        self.p.sqrt(self.value).map(|(a, b)| {
            (
                FieldElement { value: a, p: self.p },
                FieldElement { value: b, p: self.p },
            )
        })
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            value: self.p.inv(self.value)?,
            p: self.p,
        })
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement {
            value: self.p.pow(self.value, exp),
            p: self.p,
        }
    }

    fn same_field(self, other: FieldElement) {
        assert_eq!(self.p, other.p, "mixed moduli in field arithmetic");
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.same_field(rhs);
        FieldElement {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.same_field(rhs);
        FieldElement {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.same_field(rhs);
        FieldElement {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}
