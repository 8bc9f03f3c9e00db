//! Scalar traits shared by the counting engines and the analytic checkers.
//!
//! Counting is generic over [`Count`], an exact nonnegative integer type.
//! Fixed-width integers are accepted for small tables and report overflow
//! instead of wrapping; [`BigUint`] never overflows. The analytic checkers are
//! generic over [`Real`] (`f32` or `f64`).

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_traits::{Float, FloatConst, FromPrimitive, One, ToPrimitive, Zero};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts a literal. Every `f64` literal used by this crate is
    /// representable (possibly rounded) in both implementors.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact nonnegative integer used for partition counts.
pub trait Count: Clone + Debug + Display + Ord + Zero + One + Send + Sync + 'static {
    /// `self += other`; returns `false` on overflow (leaving `self` unspecified).
    fn add_assign_checked(&mut self, other: &Self) -> bool;

    /// `self * k`, or `None` on overflow.
    fn mul_small(&self, k: usize) -> Option<Self>;

    /// `self / k` when `k` divides `self` exactly, otherwise `None`.
    fn exact_quotient(&self, k: usize) -> Option<Self>;

    /// Natural logarithm; `None` for zero.
    fn ln(&self) -> Option<f64>;

    /// Lossless conversion into an arbitrary-precision integer.
    fn to_biguint(&self) -> BigUint;
}

macro_rules! impl_count_prim {
    ($t:ty) => {
        impl Count for $t {
            fn add_assign_checked(&mut self, other: &Self) -> bool {
                match self.checked_add(*other) {
                    Some(v) => {
                        *self = v;
                        true
                    }
                    None => false,
                }
            }

            fn mul_small(&self, k: usize) -> Option<Self> {
                <$t>::try_from(k).ok().and_then(|k| self.checked_mul(k))
            }

            fn exact_quotient(&self, k: usize) -> Option<Self> {
                let k = <$t>::try_from(k).ok()?;
                if k == 0 || *self % k != 0 {
                    None
                } else {
                    Some(*self / k)
                }
            }

            fn ln(&self) -> Option<f64> {
                if *self == 0 {
                    None
                } else {
                    crate::bounds::log_of_count(&BigUint::from(*self)).ok()
                }
            }

            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }
        }
    };
}

impl_count_prim!(u32);
impl_count_prim!(u64);
impl_count_prim!(u128);

impl Count for BigUint {
    fn add_assign_checked(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }

    fn mul_small(&self, k: usize) -> Option<Self> {
        Some(self * BigUint::from(k))
    }

    fn exact_quotient(&self, k: usize) -> Option<Self> {
        if k == 0 {
            return None;
        }
        let k = BigUint::from(k);
        let (q, r) = (self / &k, self % &k);
        r.is_zero().then_some(q)
    }

    fn ln(&self) -> Option<f64> {
        crate::bounds::log_of_count(self).ok()
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}
