//! Correctly rounded sums of `f64` values.
//!
//! Every finite `f64` is an integer multiple of `2^-1074`, so a signed sum
//! `Σ ±x_k` can be carried out exactly in fixed point and rounded once at the
//! end. The result does not depend on summation order, which lets the
//! Gray-code enumeration update `<ε, u>` one sign flip at a time and still
//! agree to the last bit with a from-scratch evaluation.
//!
//! When the spread of exponents is small enough (the usual case) the fixed
//! point accumulator is an `i128`; otherwise it falls back to [`BigInt`].

use num_bigint::{BigInt, Sign};
use std::ops::{AddAssign, SubAssign};

/// Fixed-point integer able to hold an exact sum.
pub trait FixedInt:
    Clone + Send + Sync + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
{
    fn zero() -> Self;
    /// `±mantissa · 2^shift`.
    fn from_parts(mantissa: u64, shift: u32, negative: bool) -> Self;
    /// Rounds `self · 2^scale` to the nearest `f64`, ties to even.
    fn to_f64_scaled(&self, scale: i32) -> f64;
}

impl FixedInt for i128 {
    fn zero() -> Self {
        0
    }

    fn from_parts(mantissa: u64, shift: u32, negative: bool) -> Self {
        let v = (mantissa as i128) << shift;
        if negative {
            -v
        } else {
            v
        }
    }

    fn to_f64_scaled(&self, scale: i32) -> f64 {
        if *self == 0 {
            return 0.0;
        }
        let mag = self.unsigned_abs();
        let len = 128 - mag.leading_zeros() as i32;
        let (top, sticky) = if len > 64 {
            let drop = (len - 64) as u32;
            ((mag >> drop) as u64, mag & ((1u128 << drop) - 1) != 0)
        } else {
            ((mag << (64 - len)) as u64, false)
        };
        round_normalized(*self < 0, top, sticky, len - 1 + scale)
    }
}

impl FixedInt for BigInt {
    fn zero() -> Self {
        BigInt::default()
    }

    fn from_parts(mantissa: u64, shift: u32, negative: bool) -> Self {
        let v = BigInt::from(mantissa) << shift;
        if negative {
            -v
        } else {
            v
        }
    }

    fn to_f64_scaled(&self, scale: i32) -> f64 {
        if self.sign() == Sign::NoSign {
            return 0.0;
        }
        let mag = self.magnitude();
        let len = mag.bits() as i64;
        let (top, sticky) = if len > 64 {
            let drop = (len - 64) as u64;
            let top = (mag >> drop).iter_u64_digits().next().unwrap_or(0);
            let sticky = mag.trailing_zeros().map_or(false, |tz| tz < drop);
            (top, sticky)
        } else {
            let low = mag.iter_u64_digits().next().unwrap_or(0);
            (low << (64 - len), false)
        };
        round_normalized(self.sign() == Sign::Minus, top, sticky, (len - 1) as i32 + scale)
    }
}

/// Rounds `±0.top · 2^(lead + 1)` where `top` has its high bit set and
/// `sticky` records any nonzero bits below `top`. `lead` is the exponent of
/// the leading bit.
fn round_normalized(negative: bool, top: u64, sticky: bool, lead: i32) -> f64 {
    debug_assert!(top >> 63 == 1);
    // Precision available at this exponent (subnormals lose bits).
    let precision = if lead >= -1022 { 53 } else { 53 - (-1022 - lead) };
    debug_assert!(precision >= 1, "sum below the smallest subnormal");
    let drop = (64 - precision) as u32;
    let mut kept = top >> drop;
    let rem = top & ((1u64 << drop) - 1);
    let half = 1u64 << (drop - 1);
    if rem > half || (rem == half && (sticky || kept & 1 == 1)) {
        kept += 1;
    }
    let mag = kept as f64 * pow2(lead - (precision - 1));
    if negative {
        -mag
    } else {
        mag
    }
}

fn pow2(k: i32) -> f64 {
    if k > 1023 {
        pow2(k - 1023) * pow2(1023)
    } else if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (k + 1074))
    }
}

/// `|x| = mantissa · 2^exponent` with an integer mantissa.
fn decompose(x: f64) -> (u64, i32) {
    let bits = x.abs().to_bits();
    let field = (bits >> 52) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if field == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), field - 1075)
    }
}

/// Fixed-point images of a fixed list of values, ready for signed sums.
#[derive(Debug, Clone)]
pub struct Terms<T> {
    value: Vec<T>,
    doubled: Vec<T>,
    scale: i32,
}

impl<T: FixedInt> Terms<T> {
    fn build(values: &[f64], scale: i32) -> Self {
        let mut value = Vec::with_capacity(values.len());
        let mut doubled = Vec::with_capacity(values.len());
        for &x in values {
            let (m, e) = decompose(x);
            let shift = if m == 0 { 0 } else { (e - scale) as u32 };
            value.push(T::from_parts(m, shift, x < 0.0));
            doubled.push(T::from_parts(m, shift + 1, x < 0.0));
        }
        Terms {
            value,
            doubled,
            scale,
        }
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    /// Exact `Σ σ_k x_k` where `σ_k = -1` iff `negative(k)`.
    pub fn signed_sum(&self, negative: impl Fn(usize) -> bool) -> T {
        let mut acc = T::zero();
        for (k, t) in self.value.iter().enumerate() {
            if negative(k) {
                acc -= t;
            } else {
                acc += t;
            }
        }
        acc
    }

    /// Flips the sign of term `k` inside an accumulated sum.
    #[inline]
    pub fn flip(&self, acc: &mut T, k: usize, now_negative: bool) {
        if now_negative {
            *acc -= &self.doubled[k];
        } else {
            *acc += &self.doubled[k];
        }
    }

    #[inline]
    pub fn round(&self, acc: &T) -> f64 {
        acc.to_f64_scaled(self.scale)
    }
}

/// Fixed-point terms, with the accumulator width picked from the data.
#[derive(Debug, Clone)]
pub enum ExactTerms {
    Narrow(Terms<i128>),
    Wide(Terms<BigInt>),
}

impl ExactTerms {
    pub fn new(values: &[f64]) -> Self {
        assert!(values.iter().all(|x| x.is_finite()), "exact sums need finite inputs");
        let mut scale = i32::MAX;
        let mut top = i32::MIN;
        for &x in values {
            let (m, e) = decompose(x);
            if m != 0 {
                scale = scale.min(e);
                top = top.max(e + 64 - m.leading_zeros() as i32);
            }
        }
        if scale == i32::MAX {
            return ExactTerms::Narrow(Terms::build(values, 0));
        }
        // Bits of the largest doubled term, plus carries, plus sign.
        let carries = 64 - (values.len() as u64).leading_zeros() as i32;
        let needed = (top - scale) + 1 + carries + 1;
        if needed <= 127 {
            ExactTerms::Narrow(Terms::build(values, scale))
        } else {
            ExactTerms::Wide(Terms::build(values, scale))
        }
    }

    /// Correctly rounded `Σ σ_k x_k` where `σ_k = -1` iff `negative(k)`.
    pub fn signed_sum(&self, negative: impl Fn(usize) -> bool) -> f64 {
        match self {
            ExactTerms::Narrow(t) => t.round(&t.signed_sum(negative)),
            ExactTerms::Wide(t) => t.round(&t.signed_sum(negative)),
        }
    }
}

/// Correctly rounded sum of `values`, independent of their order.
pub fn exact_sum(values: &[f64]) -> f64 {
    ExactTerms::new(values).signed_sum(|_| false)
}
