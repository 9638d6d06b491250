//! Integer polynomials, discriminants, and Frobenius cycle types from
//! distinct-degree factorization mod p.

use alloc::collections::BTreeSet;
use alloc::fmt;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// Primes must stay below this bound so products fit comfortably in `u128`
/// and trial division stays cheap.
pub const MAX_PRIME: u64 = 1 << 31;

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<IntPoly> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(invalid!("the zero polynomial is not allowed"));
        }
        Ok(IntPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<IntPoly> {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Comma-separated ascending coefficients, e.g. `"6,1,0,0,0,0,1"`.
    pub fn parse(text: &str) -> Result<IntPoly> {
        let coeffs = text
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<BigInt>()
                    .map_err(|_| Error::Parse(alloc::format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        IntPoly::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect()
    }

    /// Coefficients reduced into `0..p`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("reduced below p"))
            .collect();
        trim(&mut out);
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `Res(f, g)` as the determinant of the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// `disc f = (-1)^{n(n-1)/2} Res(f, f') / a_n`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let n = f.degree();
    if n < 2 {
        return Err(invalid!("discriminant needs degree at least 2, got {n}"));
    }
    let mut df = f.derivative();
    while df.last().is_some_and(|c| c.is_zero()) {
        df.pop();
    }
    let res = resultant(&f.coeffs, &df);
    let (q, r) = res.div_rem(f.leading());
    if !r.is_zero() {
        return Err(Error::Inconsistent("resultant not divisible by the leading coefficient".into()));
    }
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `<= bound` by a sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Polynomials over F_p, ascending, trimmed; the zero polynomial is empty.
struct Fp {
    p: u64,
}

impl Fp {
    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + self.p - y) % self.p;
        }
        trim(&mut out);
        out
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        trim(&mut out);
        out
    }

    fn divrem(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], self.p);
        let mut q = vec![0u64; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = mul_mod(r[i], lead_inv, self.p);
            if c == 0 {
                continue;
            }
            q[i - db] = c;
            for (j, &y) in b.iter().enumerate() {
                let k = i - db + j;
                r[k] = (r[k] + self.p - mul_mod(c, y, self.p)) % self.p;
            }
        }
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.divrem(a, b).1
    }

    fn monic(&self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let inv = inv_mod(l, self.p);
                a.iter().map(|&x| mul_mod(x, inv, self.p)).collect()
            }
        }
    }

    fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    fn derivative(&self, a: &[u64]) -> Vec<u64> {
        let mut out: Vec<u64> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        trim(&mut out);
        out
    }

    /// `h^p mod f` by binary exponentiation.
    fn frobenius(&self, h: &[u64], f: &[u64]) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut base = self.rem(h, f);
        let mut e = self.p;
        while e > 0 {
            if e & 1 == 1 {
                result = self.rem(&self.mul(&result, &base), f);
            }
            base = self.rem(&self.mul(&base, &base), f);
            e >>= 1;
        }
        result
    }

    /// Degrees of the irreducible factors of a squarefree monic `f`.
    fn ddf(&self, f: &[u64]) -> Vec<usize> {
        let mut g = f.to_vec();
        let mut degrees = Vec::new();
        let x = vec![0u64, 1];
        let mut h = self.rem(&x, &g);
        let mut d = 1usize;
        while g.len() > 1 && 2 * d < g.len() {
            h = self.frobenius(&h, &g);
            let gd = self.gcd(&g, &self.sub(&h, &x));
            let k = gd.len() - 1;
            if k > 0 {
                degrees.extend(core::iter::repeat(d).take(k / d));
                g = self.divrem(&g, &gd).0;
                h = self.rem(&h, &g);
            }
            d += 1;
        }
        if g.len() > 1 {
            degrees.push(g.len() - 1);
        }
        degrees.sort_unstable();
        degrees
    }
}

/// Multiset of factor degrees, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<CycleType> {
        if parts.contains(&0) {
            return Err(invalid!("cycle type parts must be positive"));
        }
        parts.sort_unstable();
        Ok(CycleType(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().filter(|&&k| k == 1).count()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frobenius {
    Unramified(CycleType),
    /// `f mod p` has a repeated factor.
    Ramified,
}

fn check_prime(f: &IntPoly, p: u64) -> Result<Vec<u64>> {
    if p >= MAX_PRIME {
        return Err(Error::TooLarge {
            what: "prime",
            actual: p as usize,
            cap: MAX_PRIME as usize,
        });
    }
    if !is_prime(p) {
        return Err(invalid!("{p} is not prime"));
    }
    let fp = f.reduce_mod(p);
    if fp.len() != f.coeffs.len() {
        return Err(invalid!("{p} divides the leading coefficient"));
    }
    Ok(fp)
}

/// Factor degrees of `f mod p`, or `Ramified` when `gcd(f, f') != 1`.
pub fn ddf_cycle_type(f: &IntPoly, p: u64) -> Result<Frobenius> {
    let fp = check_prime(f, p)?;
    let ring = Fp { p };
    let g = ring.gcd(&fp, &ring.derivative(&fp));
    if g.len() != 1 {
        return Ok(Frobenius::Ramified);
    }
    CycleType::new(ring.ddf(&ring.monic(&fp))).map(Frobenius::Unramified)
}

/// Factor degrees of `f / gcd(f, f') mod p`. This is the radical of `f mod p`
/// unless some factor occurs with multiplicity divisible by `p`.
pub fn squarefree_factor_degrees(f: &IntPoly, p: u64) -> Result<CycleType> {
    let fp = check_prime(f, p)?;
    let ring = Fp { p };
    let g = ring.gcd(&fp, &ring.derivative(&fp));
    let part = ring.monic(&ring.divrem(&fp, &g).0);
    CycleType::new(ring.ddf(&part))
}

/// Number of distinct roots of `f` in F_p by evaluation; intended for small `p`.
pub fn count_roots(f: &IntPoly, p: u64) -> usize {
    let fp = f.reduce_mod(p);
    (0..p)
        .filter(|&x| fp.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p) == 0)
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// The Galois group is the full symmetric group.
    Full,
    Unknown,
}

/// `S_n` when the observed types contain `{n}`, `{1, n-1}` and
/// `{1, ..., 1, 2}`: the first makes the group transitive, and a transitive
/// group with an `(n-1)`-cycle and a transposition is `S_n`.
pub fn certify_symmetric(observed: &BTreeSet<CycleType>, n: usize) -> Certification {
    if n < 2 {
        return Certification::Unknown;
    }
    let full = CycleType(vec![n]);
    let long = CycleType::new(vec![1, n - 1]).expect("positive parts");
    let mut t = vec![1; n - 2];
    t.push(2);
    let transposition = CycleType(t);
    let has = |c: &CycleType| observed.contains(c);
    if n == 2 {
        return if has(&full) { Certification::Full } else { Certification::Unknown };
    }
    if has(&full) && has(&long) && has(&transposition) {
        Certification::Full
    } else {
        Certification::Unknown
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub bound: u64,
    pub cycle_types: Vec<(u64, CycleType)>,
    pub ramified: Vec<u64>,
    /// Primes dividing the leading coefficient.
    pub skipped: Vec<u64>,
    pub observed: BTreeSet<CycleType>,
    pub certification: Certification,
}

impl ScanReport {
    /// First prime at which `t` was seen.
    pub fn witness(&self, t: &CycleType) -> Option<u64> {
        self.cycle_types.iter().find(|(_, c)| c == t).map(|(p, _)| *p)
    }
}

/// One prime of a scan; `None` when `p` divides the leading coefficient.
pub fn scan_prime(f: &IntPoly, p: u64) -> Result<Option<Frobenius>> {
    if (f.leading() % BigInt::from(p)).is_zero() {
        return Ok(None);
    }
    ddf_cycle_type(f, p).map(Some)
}

/// Collects per-prime results, in ascending order of `p`.
pub fn assemble_scan(f: &IntPoly, bound: u64, results: Vec<(u64, Result<Option<Frobenius>>)>) -> Result<ScanReport> {
    let mut report = ScanReport {
        bound,
        cycle_types: Vec::new(),
        ramified: Vec::new(),
        skipped: Vec::new(),
        observed: BTreeSet::new(),
        certification: Certification::Unknown,
    };
    for (p, r) in results {
        match r? {
            None => report.skipped.push(p),
            Some(Frobenius::Ramified) => report.ramified.push(p),
            Some(Frobenius::Unramified(c)) => {
                report.observed.insert(c.clone());
                report.cycle_types.push((p, c));
            }
        }
    }
    report.certification = certify_symmetric(&report.observed, f.degree());
    Ok(report)
}

/// Sequential scan over primes `<= bound`.
pub fn frobenius_scan(f: &IntPoly, bound: u64) -> Result<ScanReport> {
    if bound >= MAX_PRIME {
        return Err(Error::TooLarge {
            what: "prime bound",
            actual: bound as usize,
            cap: MAX_PRIME as usize,
        });
    }
    let results = primes_up_to(bound).into_iter().map(|p| (p, scan_prime(f, p))).collect();
    assemble_scan(f, bound, results)
}

/// Short human-readable description of a certification.
pub fn describe(c: Certification, n: usize) -> String {
    match c {
        Certification::Full => alloc::format!("CERTIFIED_FULL (S{n})"),
        Certification::Unknown => "UNKNOWN".into(),
    }
}
