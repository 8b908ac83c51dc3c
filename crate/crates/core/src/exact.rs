//! Arbitrary-precision helpers for the bound calculators.
//!
//! Everything here rounds outward: intervals always contain the real value
//! they stand for, so floors and ceilings read off an interval are exact
//! whenever the interval pins them down. Callers that need a tighter
//! answer retry at higher precision.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Default size limit, in bits, for computed big integers.
pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

/// Work cap for fractional powers of two: the square-root chain behind
/// [`pow2_interval`] runs one big square root per fractional exponent
/// bit, and a determined floor needs about as many fractional bits as the
/// result has integral ones, so cost grows superquadratically in the
/// exponent. Exponents above this cap are reported as capped rather than
/// computed.
pub const FRACTIONAL_POW2_WORK_CAP: u64 = 4096;

/// A big-integer result that may exceed the caller's bit budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capped<T> {
    Value(T),
    /// The result does not fit: `bits_needed` is a lower estimate of its
    /// size in bits (saturating).
    Overflow {
        bits_needed: u64,
    },
}

impl<T> Capped<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Capped::Value(v) => Some(v),
            Capped::Overflow { .. } => None,
        }
    }

    pub fn into_value(self) -> Option<T> {
        match self {
            Capped::Value(v) => Some(v),
            Capped::Overflow { .. } => None,
        }
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self, Capped::Overflow { .. })
    }
}

/// Binomial coefficient C(n, k) as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Floor of the n-th root.
pub fn nth_root_floor(x: &BigUint, n: u32) -> BigUint {
    x.nth_root(n)
}

/// Ceiling of the n-th root.
pub fn nth_root_ceil(x: &BigUint, n: u32) -> BigUint {
    let r = x.nth_root(n);
    if &r.pow(n) == x {
        r
    } else {
        r + 1u32
    }
}

/// Rational bracket (lo, hi) around Euler's number with
/// `hi - lo < 10^(-decimal_digits)`, from the partial sums of 1/n!.
pub fn e_bracket(decimal_digits: u32) -> (BigRational, BigRational) {
    let bound = BigUint::from(10u32).pow(decimal_digits) * 2u32;
    let mut factorial = BigUint::one();
    let mut n = 0u64;
    let mut sum = BigRational::zero();
    loop {
        sum += BigRational::new(1.into(), factorial.clone().into());
        n += 1;
        factorial *= n;
        if factorial > bound {
            break;
        }
    }
    // Terms 1/0! .. 1/(n-1)! are summed; the tail is below 2/n!.
    let tail = BigRational::new(2.into(), factorial.into());
    (sum.clone(), sum + tail)
}

/// A nonnegative dyadic interval `[lo, hi] / 2^frac_bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpInterval {
    lo: BigUint,
    hi: BigUint,
    frac_bits: u32,
}

impl FpInterval {
    pub fn from_int(n: BigUint, frac_bits: u32) -> FpInterval {
        let lo = n << frac_bits;
        FpInterval {
            hi: lo.clone(),
            lo,
            frac_bits,
        }
    }

    /// Tightest dyadic bracket around `num / den`.
    pub fn from_ratio(num: &BigUint, den: &BigUint, frac_bits: u32) -> FpInterval {
        assert!(!den.is_zero());
        let scaled = num << frac_bits;
        let lo = &scaled / den;
        let hi = if (&lo * den) == scaled {
            lo.clone()
        } else {
            &lo + 1u32
        };
        FpInterval { lo, hi, frac_bits }
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn lo(&self) -> &BigUint {
        &self.lo
    }

    pub fn hi(&self) -> &BigUint {
        &self.hi
    }

    /// Integer part of the upper endpoint; bounds the magnitude.
    pub fn int_hi(&self) -> BigUint {
        &self.hi >> self.frac_bits
    }

    pub fn mul(&self, other: &FpInterval) -> FpInterval {
        assert_eq!(self.frac_bits, other.frac_bits);
        let f = self.frac_bits;
        let lo = (&self.lo * &other.lo) >> f;
        let hi = ceil_shr(&self.hi * &other.hi, f);
        FpInterval {
            lo,
            hi,
            frac_bits: f,
        }
    }

    pub fn sqrt(&self) -> FpInterval {
        let f = self.frac_bits;
        let lo = (&self.lo << f).sqrt();
        let hi_shifted = &self.hi << f;
        let root = hi_shifted.sqrt();
        let hi = if &root * &root == hi_shifted {
            root
        } else {
            root + 1u32
        };
        FpInterval {
            lo,
            hi,
            frac_bits: f,
        }
    }

    pub fn rescale(&self, frac_bits: u32) -> FpInterval {
        if frac_bits >= self.frac_bits {
            let shift = frac_bits - self.frac_bits;
            FpInterval {
                lo: &self.lo << shift,
                hi: &self.hi << shift,
                frac_bits,
            }
        } else {
            let shift = self.frac_bits - frac_bits;
            FpInterval {
                lo: &self.lo >> shift,
                hi: ceil_shr(self.hi.clone(), shift),
                frac_bits,
            }
        }
    }

    /// Floor of the represented real, if the interval determines it.
    pub fn floor(&self) -> Option<BigUint> {
        let lo = &self.lo >> self.frac_bits;
        let hi = &self.hi >> self.frac_bits;
        (lo == hi).then_some(lo)
    }

    /// Ceiling of the represented real, if the interval determines it.
    pub fn ceil(&self) -> Option<BigUint> {
        let lo = ceil_shr(self.lo.clone(), self.frac_bits);
        let hi = ceil_shr(self.hi.clone(), self.frac_bits);
        (lo == hi).then_some(lo)
    }
}

fn ceil_shr(x: BigUint, shift: u32) -> BigUint {
    if shift == 0 {
        return x;
    }
    let mask = (BigUint::one() << shift) - 1u32;
    if (&x & mask).is_zero() {
        x >> shift
    } else {
        (x >> shift) + 1u32
    }
}

/// `2^x` for a nonnegative interval exponent.
///
/// The fractional power runs a square-root chain `2^(1/2), 2^(1/4), ...`
/// with outward rounding, so the result interval always contains the real
/// value. Working precision is the exponent's integer part plus a guard,
/// which is what a determined floor or ceiling requires; the chain has one
/// square root per fractional exponent bit, so cost grows with the
/// exponent's magnitude and precision.
pub fn pow2_interval(exp: &FpInterval) -> FpInterval {
    let f = exp.frac_bits;
    let mask = (BigUint::one() << f) - 1u32;
    let a_lo = exp.lo() >> f;
    let a_hi = exp.hi() >> f;
    let frac_lo = exp.lo() & &mask;
    let frac_hi = exp.hi() & &mask;
    let a_hi_u64: u64 = u64::try_from(&a_hi).expect("exponent beyond any practical bit budget");
    let work_bits: u32 = (a_hi_u64 + 64 + f as u64)
        .try_into()
        .expect("working precision fits u32");

    let one = BigUint::one() << work_bits;
    let mut factor_lo = &one * 2u32; // 2^(1/2^0)
    let mut factor_hi = factor_lo.clone();
    let mut prod_lo = one.clone();
    let mut prod_hi = one;
    for i in 1..=f {
        factor_lo = (factor_lo << work_bits).sqrt();
        let shifted = factor_hi << work_bits;
        let root = shifted.sqrt();
        factor_hi = if &root * &root == shifted {
            root
        } else {
            root + 1u32
        };
        let bit = f - i;
        if frac_lo.bit(bit as u64) {
            prod_lo = (prod_lo * &factor_lo) >> work_bits;
        }
        if frac_hi.bit(bit as u64) {
            prod_hi = ceil_shr(prod_hi * &factor_hi, work_bits);
        }
    }
    let a_lo_u64: u64 = u64::try_from(&a_lo).expect("within the upper integer part");
    FpInterval {
        lo: prod_lo << a_lo_u64 as u32,
        hi: prod_hi << a_hi_u64 as u32,
        frac_bits: work_bits,
    }
}

/// Interval around `log2(num / den)` for `num / den >= 1`, with
/// `frac_bits` of fractional precision requested. Bits are extracted by
/// mantissa squaring over an outward-rounded interval; if the interval
/// ever straddles a bit decision the remaining bits are left unknown and
/// the returned interval widens accordingly.
pub fn log2_interval(num: &BigUint, den: &BigUint, frac_bits: u32) -> FpInterval {
    assert!(num >= den && !den.is_zero());
    // Integer part: largest k with den * 2^k <= num.
    let mut int_part = 0u32;
    while (den << (int_part + 1)) <= *num {
        int_part += 1;
    }
    let work = frac_bits + 64;
    let scaled_den = den << int_part;
    let mantissa = FpInterval::from_ratio(num, &scaled_den, work);
    let mut m_lo = mantissa.lo;
    let mut m_hi = mantissa.hi;
    let two = BigUint::one() << (work + 1);

    let mut bits = BigUint::zero();
    let mut extracted = 0u32;
    while extracted < frac_bits {
        m_lo = (&m_lo * &m_lo) >> work;
        m_hi = ceil_shr(&m_hi * &m_hi, work);
        bits <<= 1;
        if m_lo >= two {
            bits += 1u32;
            m_lo >>= 1;
            m_hi = ceil_shr(m_hi, 1);
        } else if m_hi >= two {
            // The interval straddles the decision boundary; stop here.
            break;
        }
        extracted += 1;
    }
    let remaining = frac_bits - extracted;
    let lo = ((BigUint::from(int_part) << extracted) + &bits) << remaining;
    // A mantissa that collapsed to exactly one means the logarithm is the
    // extracted dyadic itself.
    let exact = remaining == 0 && m_lo == m_hi && m_lo == BigUint::one() << work;
    let hi = if exact {
        lo.clone()
    } else {
        ((BigUint::from(int_part) << extracted) + bits + 1u32) << remaining
    };
    FpInterval { lo, hi, frac_bits }
}

/// `ceil(2^(num/den))` as an exact big integer, or a cap marker when the
/// result (or the intermediate `2^num`) would exceed the bit budget.
pub fn ceil_pow2_ratio(num: &BigUint, den: &BigUint, bit_budget: u64) -> Capped<BigUint> {
    assert!(!den.is_zero());
    let bits_needed = saturating_u64(&(num / den)).saturating_add(1);
    if bits_needed > bit_budget || saturating_u64(num) > bit_budget.saturating_mul(64) {
        return Capped::Overflow { bits_needed };
    }
    let den_u32: u32 = u32::try_from(den).expect("root degree fits u32 at desk scale");
    let p = u64::try_from(num).expect("guarded by the work cap");
    if den_u32 == 1 {
        return Capped::Value(BigUint::one() << p as usize);
    }
    let power = BigUint::one() << p as usize;
    Capped::Value(nth_root_ceil(&power, den_u32))
}

pub(crate) fn saturating_u64(x: &BigUint) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(11, 0), BigUint::one());
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(52, 26), "495918532948104".parse().unwrap());
    }

    #[test]
    fn e_bracket_contains_euler() {
        let (lo, hi) = e_bracket(64);
        // e truncated to 70 decimal digits: the true value lies within
        // 10^-70 above this reference.
        let e_floor = BigRational::new(
            "27182818284590452353602874713526624977572470936999595749669676277240766"
                .parse()
                .unwrap(),
            BigUint::from(10u32).pow(70).into(),
        );
        let ulp = BigRational::new(1.into(), BigUint::from(10u32).pow(70).into());
        assert!(lo < &e_floor + &ulp);
        assert!(hi > e_floor);
        let width = &hi - &lo;
        let tol = BigRational::new(1.into(), BigUint::from(10u32).pow(64).into());
        assert!(width < tol);
    }

    #[test]
    fn interval_ratio_and_floor_ceil() {
        let third = FpInterval::from_ratio(&BigUint::from(1u32), &BigUint::from(3u32), 16);
        assert!(third.lo() < third.hi());
        assert_eq!(third.floor(), Some(BigUint::zero()));
        assert_eq!(third.ceil(), Some(BigUint::one()));

        let six = FpInterval::from_int(BigUint::from(6u32), 16);
        assert_eq!(six.floor(), Some(BigUint::from(6u32)));
        assert_eq!(six.ceil(), Some(BigUint::from(6u32)));
    }

    #[test]
    fn interval_sqrt_brackets_truth() {
        // sqrt(2) = 1.41421356... so at 32 fractional bits the floor of
        // 2^32 * sqrt(2) is 6074000999.
        let two = FpInterval::from_int(BigUint::from(2u32), 32);
        let root = two.sqrt();
        let reference = BigUint::from(6074000999u64);
        assert!(root.lo() <= &reference && &reference <= root.hi());
        // Squaring the interval must contain 2 again.
        let squared = root.mul(&root);
        let two_scaled = BigUint::from(2u32) << 32;
        assert!(squared.lo() <= &two_scaled && &two_scaled <= squared.hi());
    }

    #[test]
    fn pow2_exact_on_integers() {
        for n in 0u32..12 {
            let exp = FpInterval::from_int(BigUint::from(n), 24);
            let v = pow2_interval(&exp);
            assert_eq!(v.floor(), Some(BigUint::one() << n));
            assert_eq!(v.ceil(), Some(BigUint::one() << n));
        }
    }

    #[test]
    fn pow2_of_half_integer() {
        // 2^1.5 = 2.8284...: floor 2, ceil 3.
        let exp = FpInterval::from_ratio(&BigUint::from(3u32), &BigUint::from(2u32), 32);
        let v = pow2_interval(&exp);
        assert_eq!(v.floor(), Some(BigUint::from(2u32)));
        assert_eq!(v.ceil(), Some(BigUint::from(3u32)));
    }

    #[test]
    fn pow2_of_sqrt2() {
        // 2^sqrt(2) = 2.66514...
        let exp = FpInterval::from_int(BigUint::from(2u32), 48).sqrt();
        let v = pow2_interval(&exp);
        assert_eq!(v.floor(), Some(BigUint::from(2u32)));
        assert_eq!(v.ceil(), Some(BigUint::from(3u32)));
    }

    #[test]
    fn log2_exact_powers() {
        let v = log2_interval(&BigUint::from(8u32), &BigUint::from(1u32), 20);
        assert_eq!(v.floor(), Some(BigUint::from(3u32)));
        assert_eq!(v.ceil(), Some(BigUint::from(3u32)));
    }

    #[test]
    fn log2_of_three_halves() {
        // log2(3/2) = 0.5849625007211562..., whose floor at 40 fractional
        // bits is 643173071355.
        let v = log2_interval(&BigUint::from(3u32), &BigUint::from(2u32), 40);
        let want = BigUint::from(643173071355u64);
        assert!(v.lo() <= &want && &want < v.hi());
        assert_eq!(v.hi() - v.lo(), BigUint::one());
        // Dual route: 2^(log2(3/2)) must bracket 3/2.
        let back = pow2_interval(&v);
        let three_halves_lo = (BigUint::from(3u32) << back.frac_bits()) / 2u32;
        assert!(back.lo() <= &three_halves_lo && &three_halves_lo <= back.hi());
    }

    #[test]
    fn ceil_pow2_ratio_cases() {
        // 2^(7/2) = 11.31... -> 12.
        let v = ceil_pow2_ratio(&BigUint::from(7u32), &BigUint::from(2u32), 1000);
        assert_eq!(v, Capped::Value(BigUint::from(12u32)));
        // Integral exponent.
        let v = ceil_pow2_ratio(&BigUint::from(10u32), &BigUint::from(1u32), 1000);
        assert_eq!(v, Capped::Value(BigUint::from(1024u32)));
        // Budget overflow.
        let v = ceil_pow2_ratio(&BigUint::from(5000u32), &BigUint::from(1u32), 100);
        assert!(v.is_overflow());
    }

    #[test]
    fn nth_roots() {
        assert_eq!(
            nth_root_floor(&BigUint::from(26u32), 3),
            BigUint::from(2u32)
        );
        assert_eq!(nth_root_ceil(&BigUint::from(26u32), 3), BigUint::from(3u32));
        assert_eq!(nth_root_ceil(&BigUint::from(27u32), 3), BigUint::from(3u32));
    }
}
