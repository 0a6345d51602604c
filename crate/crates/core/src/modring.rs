//! Arithmetic in the prime field Z_d for odd primes d.
//!
//! Every state label and every exponent of the root of unity ω is a residue
//! mod d. Halving and quartering are multiplication by the inverses of 2
//! and 4, which exist because d is odd.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic trial division. Dimensions here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Inverse of `a` modulo a prime `modulus`, returned in `[0, modulus)`.
pub fn mod_inverse(a: i64, modulus: u64) -> Result<u64> {
    if !is_prime(modulus) {
        return Err(Error::NotPrime(modulus));
    }
    let m = modulus as i64;
    let a = a.rem_euclid(m);
    if a == 0 {
        return Err(Error::ZeroInverse);
    }
    let (g, x, _) = ext_gcd(a, m);
    debug_assert_eq!(g, 1);
    let inv = x.rem_euclid(m);
    debug_assert_eq!((a * inv) % m, 1);
    Ok(inv as u64)
}

/// An odd prime dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(d: u64) -> Result<Self> {
        if !is_prime(d) {
            Err(Error::NotPrime(d))
        } else if d == 2 {
            Err(Error::EvenPrime)
        } else {
            Ok(Self(d))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// The dimension as an index bound.
    pub fn dim(self) -> usize {
        self.0 as usize
    }

    pub fn residue(self, x: i64) -> ModInt {
        ModInt::new(x, self)
    }

    /// All residues `0, 1, ..., d-1` in order.
    pub fn residues(self) -> impl Iterator<Item = ModInt> + Clone {
        (0..self.0).map(move |v| ModInt { value: v, modulus: self })
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let d = u64::deserialize(de)?;
        Prime::new(d).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A residue class mod an odd prime, always stored reduced into `[0, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModInt {
    value: u64,
    modulus: Prime,
}

impl ModInt {
    /// Reduces any integer, negative ones included, into `[0, d)`.
    pub fn new(x: i64, modulus: Prime) -> Self {
        let m = modulus.get() as i64;
        Self { value: x.rem_euclid(m) as u64, modulus }
    }

    pub fn zero(modulus: Prime) -> Self {
        Self { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        Self { value: 1, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn index(self) -> usize {
        self.value as usize
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let m = self.modulus.get();
        let mut base = self.value;
        let mut acc = 1 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Self { value: acc, modulus: self.modulus }
    }

    pub fn inverse(self) -> Result<Self> {
        let inv = mod_inverse(self.value as i64, self.modulus.get())?;
        Ok(Self { value: inv, modulus: self.modulus })
    }

    /// The unique `h` with `2h = self`.
    pub fn half(self) -> Self {
        self * self.modulus.residue(2).inverse().expect("2 is invertible mod an odd prime")
    }

    /// The unique `k` with `4k = self`.
    pub fn quarter(self) -> Self {
        self.half().half()
    }

    fn check(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli in modular arithmetic"
        );
    }
}

impl Serialize for ModInt {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_u64(self.value)
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for ModInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        Self { value: (self.value + rhs.value) % self.modulus.get(), modulus: self.modulus }
    }
}

impl Sub for ModInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        let m = self.modulus.get();
        Self { value: (self.value + m - rhs.value) % m, modulus: self.modulus }
    }
}

impl Mul for ModInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        Self { value: self.value * rhs.value % self.modulus.get(), modulus: self.modulus }
    }
}

impl Neg for ModInt {
    type Output = Self;
    fn neg(self) -> Self {
        let m = self.modulus.get();
        Self { value: (m - self.value) % m, modulus: self.modulus }
    }
}

impl Add<i64> for ModInt {
    type Output = Self;
    fn add(self, rhs: i64) -> Self {
        self + self.modulus.residue(rhs)
    }
}

impl Mul<i64> for ModInt {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        self * self.modulus.residue(rhs)
    }
}

impl AddAssign for ModInt {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for ModInt {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for ModInt {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
