//! Exact arithmetic over GF(p^e) and Gaussian elimination.
//!
//! Elements are polynomials over GF(p) reduced modulo a monic irreducible
//! polynomial of degree `e`. The modulus is chosen deterministically (the
//! first irreducible polynomial in the canonical enumeration), so a field
//! is fully determined by its order and constructions over it are
//! reproducible.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("element does not belong to this field")]
    MixedField,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("expected a {expected}x{expected} system, got row of length {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("element index {index} out of range for field of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
}

/// Outcome of exact Gaussian elimination on a square system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaussianOutcome {
    Solution(Vec<FieldElement>),
    Singular,
}

/// An element of GF(p^e): a coefficient vector of length `e` over GF(p),
/// little-endian (index `i` holds the coefficient of `x^i`).
///
/// Elements carry their field's `(p, e)` fingerprint; since the modulus is
/// deterministic per order, this identifies the owning field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    p: u64,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// A finite field GF(q) = GF(p^e) with its reduction modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus of degree e, little-endian, length e + 1.
    modulus: Vec<u64>,
}

impl FieldSpec {
    /// Builds GF(q) for a prime power q, scanning for the canonically
    /// first irreducible monic modulus of degree e.
    pub fn new(q: u64) -> Result<FieldSpec, GaloisError> {
        let (p, e) = prime_power_parts(q).ok_or(GaloisError::NotAPrimePower(q))?;
        let modulus = smallest_irreducible(p, e);
        Ok(FieldSpec { p, e, q, modulus })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            p: self.p,
            coeffs: vec![0; self.e as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element(1).expect("order is at least 2")
    }

    /// The `index`-th element of the canonical enumeration: coefficients
    /// are the base-p digits of `index`, so indices 0 and 1 are the
    /// additive and multiplicative identities.
    pub fn element(&self, index: u64) -> Result<FieldElement, GaloisError> {
        if index >= self.q {
            return Err(GaloisError::IndexOutOfRange {
                index,
                order: self.q,
            });
        }
        let mut coeffs = vec![0; self.e as usize];
        let mut rest = index;
        for c in coeffs.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        Ok(FieldElement { p: self.p, coeffs })
    }

    pub fn index_of(&self, a: &FieldElement) -> Result<u64, GaloisError> {
        self.check(a)?;
        let mut index = 0u64;
        for &c in a.coeffs.iter().rev() {
            index = index * self.p + c;
        }
        Ok(index)
    }

    /// All field elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.element(i).expect("index in range"))
    }

    fn check(&self, a: &FieldElement) -> Result<(), GaloisError> {
        if a.p != self.p || a.coeffs.len() != self.e as usize {
            return Err(GaloisError::MixedField);
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        Ok(FieldElement { p: self.p, coeffs })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        Ok(FieldElement { p: self.p, coeffs })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GaloisError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        let product = poly_mul(&a.coeffs, &b.coeffs, self.p);
        let reduced = poly_rem(&product, &self.modulus, self.p);
        let mut coeffs = reduced;
        coeffs.resize(self.e as usize, 0);
        Ok(FieldElement { p: self.p, coeffs })
    }

    /// Inverse by Fermat: a^(q-2) for nonzero a.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GaloisError::ZeroInverse);
        }
        self.pow(a, self.q - 2)
    }

    pub fn pow(&self, a: &FieldElement, mut exp: u64) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Solves the square system `matrix * x = rhs` exactly. Elimination
    /// proceeds column by column with the first nonzero entry as pivot; a
    /// column without a pivot means the matrix is singular.
    #[allow(clippy::needless_range_loop)] // index loops mirror the matrix math
    pub fn gaussian_solve(
        &self,
        matrix: &[Vec<FieldElement>],
        rhs: &[FieldElement],
    ) -> Result<GaussianOutcome, GaloisError> {
        let r = matrix.len();
        if rhs.len() != r {
            return Err(GaloisError::DimensionMismatch {
                expected: r,
                found: rhs.len(),
            });
        }
        for row in matrix {
            if row.len() != r {
                return Err(GaloisError::DimensionMismatch {
                    expected: r,
                    found: row.len(),
                });
            }
            for entry in row {
                self.check(entry)?;
            }
        }
        for entry in rhs {
            self.check(entry)?;
        }

        let mut m: Vec<Vec<FieldElement>> = matrix.to_vec();
        let mut b: Vec<FieldElement> = rhs.to_vec();
        for col in 0..r {
            let pivot_row = match (col..r).find(|&row| !m[row][col].is_zero()) {
                Some(row) => row,
                None => return Ok(GaussianOutcome::Singular),
            };
            m.swap(col, pivot_row);
            b.swap(col, pivot_row);
            let inv = self.inv(&m[col][col].clone())?;
            for j in col..r {
                m[col][j] = self.mul(&m[col][j], &inv)?;
            }
            b[col] = self.mul(&b[col], &inv)?;
            for row in (col + 1)..r {
                if m[row][col].is_zero() {
                    continue;
                }
                let factor = m[row][col].clone();
                for j in col..r {
                    let scaled = self.mul(&factor, &m[col][j])?;
                    m[row][j] = self.sub(&m[row][j], &scaled)?;
                }
                let scaled = self.mul(&factor, &b[col])?;
                b[row] = self.sub(&b[row], &scaled)?;
            }
        }
        // Back substitution on the unit upper-triangular system.
        let mut x = vec![self.zero(); r];
        for col in (0..r).rev() {
            let mut acc = b[col].clone();
            for j in (col + 1)..r {
                let scaled = self.mul(&m[col][j], &x[j])?;
                acc = self.sub(&acc, &scaled)?;
            }
            x[col] = acc;
        }
        Ok(GaussianOutcome::Solution(x))
    }
}

/// Smallest prime power q with q^b >= k * 2^k; for b = 1 this is the first
/// prime power in the interval [k*2^k, 2*k*2^k), which always contains a
/// prime by Bertrand's postulate.
pub fn choose_q(k: u32, b: u32) -> u64 {
    assert!(k >= 1 && b >= 1);
    let target: u128 = (k as u128) << k;
    assert!(target <= u64::MAX as u128, "k too large for desk scale");
    let mut m = integer_root(target as u64, b);
    if pow_checked(m, b)
        .map(|v| v < target as u64)
        .unwrap_or(false)
    {
        m += 1;
    }
    let mut q = m.max(2);
    loop {
        if prime_power_parts(q).is_some() {
            debug_assert!(q < 2 * m.max(2), "Bertrand interval exhausted");
            return q;
        }
        q += 1;
    }
}

fn pow_checked(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Floor of the b-th root of n.
fn integer_root(n: u64, b: u32) -> u64 {
    if b == 1 || n <= 1 {
        return if b == 1 { n } else { n.min(1) };
    }
    let mut lo: u64 = 1;
    let mut hi: u64 = 1u64 << (64 / b + 1).min(63);
    while pow_checked(hi, b).map(|v| v <= n).unwrap_or(false) {
        hi <<= 1;
    }
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        match pow_checked(mid, b) {
            Some(v) if v <= n => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

/// Decomposes q = p^e with p prime, if possible.
pub fn prime_power_parts(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut e = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest == 1 {
        Some((p, e))
    } else {
        None
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// First irreducible monic polynomial of degree e over GF(p), scanning the
/// canonical enumeration of lower-coefficient vectors.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let count = pow_checked(p, e).expect("p^e fits in u64 for valid field orders");
    for index in 0..count {
        let mut coeffs = vec![0u64; e as usize + 1];
        let mut rest = index;
        for c in coeffs.iter_mut().take(e as usize) {
            *c = rest % p;
            rest /= p;
        }
        coeffs[e as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Trial division by every monic polynomial of degree 1..=e/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let e = poly.len() - 1;
    if e == 1 {
        return true;
    }
    for d in 1..=(e / 2) {
        let count = pow_checked(p, d as u32).expect("divisor space fits in u64");
        for index in 0..count {
            let mut divisor = vec![0u64; d + 1];
            let mut rest = index;
            for c in divisor.iter_mut().take(d) {
                *c = rest % p;
                rest /= p;
            }
            divisor[d] = 1;
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Product of two polynomials over GF(p), little-endian coefficients.
fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let prod = (x as u128 * y as u128) % p as u128;
            out[i + j] = ((out[i + j] as u128 + prod) % p as u128) as u64;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    let deg_m = m.len() - 1;
    let mut rem: Vec<u64> = a.to_vec();
    while rem.len() > deg_m {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - deg_m;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                let sub = (lead as u128 * c as u128) % p as u128;
                let cur = rem[idx] as u128;
                rem[idx] = ((cur + p as u128 * p as u128 - sub) % p as u128) as u64;
            }
        }
        rem.pop();
    }
    rem
}
