//! Arithmetic in Z/m for a prime power m.

use crate::error::{invalid, Result};

/// The coefficient ring Z/m, m = p^k.
///
/// Elements are stored as `u8` residues in `0..m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zm {
    modulus: u8,
    prime: u8,
    exponent: u8,
}

impl Zm {
    pub const F2: Zm = Zm {
        modulus: 2,
        prime: 2,
        exponent: 1,
    };

    pub fn new(m: u32) -> Result<Zm> {
        if !(2..=128).contains(&m) {
            return Err(invalid!("modulus {m} outside 2..=128"));
        }
        let p = (2..=m).find(|d| m % d == 0).unwrap();
        let mut rest = m;
        let mut k = 0u8;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(invalid!("modulus {m} is not a prime power"));
        }
        Ok(Zm {
            modulus: m as u8,
            prime: p as u8,
            exponent: k,
        })
    }

    #[inline]
    pub fn modulus(self) -> u8 {
        self.modulus
    }

    #[inline]
    pub fn prime(self) -> u8 {
        self.prime
    }

    #[inline]
    pub fn exponent(self) -> u8 {
        self.exponent
    }

    #[inline]
    pub fn is_field(self) -> bool {
        self.exponent == 1
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.modulus as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.modulus as u16 - b as u16) % self.modulus as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.modulus as u16) as u8
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.modulus as i64) as u8
    }

    /// p-adic valuation; `exponent()` for zero.
    pub fn valuation(self, a: u8) -> u8 {
        if a == 0 {
            return self.exponent;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.prime == 0 {
            a /= self.prime;
            v += 1;
        }
        v
    }

    pub fn pow_prime(self, e: u8) -> u8 {
        (0..e).fold(1u16, |acc, _| acc * self.prime as u16) as u8
    }

    pub fn inverse(self, a: u8) -> Option<u8> {
        if a % self.prime == 0 {
            return None;
        }
        (1..self.modulus).find(|&b| self.mul(a, b) == 1)
    }

    /// `a = unit * p^v`; returns the inverse of `unit` (any unit when the
    /// representative is not unique).
    pub fn unit_part_inverse(self, a: u8) -> u8 {
        let v = self.valuation(a);
        let pv = self.pow_prime(v);
        let u = a / pv;
        self.inverse(u % self.modulus).expect("unit part is a unit")
    }

    /// Number of ring elements, as a p-exponent (`log_p m`).
    #[inline]
    pub fn log_order(self) -> u32 {
        self.exponent as u32
    }

    pub fn add_assign_slice(self, acc: &mut [u8], v: &[u8]) {
        for (a, b) in acc.iter_mut().zip(v) {
            *a = self.add(*a, *b);
        }
    }

    pub fn sub_assign_slice(self, acc: &mut [u8], v: &[u8]) {
        for (a, b) in acc.iter_mut().zip(v) {
            *a = self.sub(*a, *b);
        }
    }

    /// `acc += c * v`
    pub fn axpy(self, acc: &mut [u8], c: u8, v: &[u8]) {
        if c == 0 {
            return;
        }
        let m = self.modulus as u16;
        for (a, b) in acc.iter_mut().zip(v) {
            *a = ((*a as u16 + c as u16 * *b as u16) % m) as u8;
        }
    }

    pub fn scale(self, v: &mut [u8], c: u8) {
        for a in v.iter_mut() {
            *a = self.mul(*a, c);
        }
    }
}
