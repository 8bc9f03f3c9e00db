//! Upper bounds on restricted partition counts, checked against exact counts.
//!
//! With `c = π·sqrt(2|R|/(3m))`:
//!
//! * `log p(n) ≤ π·sqrt(2n/3)` for unrestricted partitions;
//! * `log p_{A⁺}(n) ≤ c·sqrt(n)`;
//! * `p_{R⁺}(n) ≤ (n+1)^{|R|}`, compared as integers;
//! * `log p_A(n) ≤ (|R|+1)·log(n+1) + c·sqrt(n)`, obtained by convolving the
//!   two previous bounds.
//!
//! Float comparisons allow an absolute error of [`EPS_LOG`]; the integer bound
//! is compared exactly.

use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::counting::table_for;
use crate::num::Real;
use crate::partset::{PartSetVariant, ResidueSpec};

/// Absolute tolerance for `log count` versus a real-valued bound.
pub const EPS_LOG: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("logarithm of zero count")]
    ZeroCount,
    #[error("bound constant needs a nonempty residue set")]
    EmptyResidues,
    #[error("ratio undefined at n=0")]
    ZeroIndex,
}

/// Natural log of an arbitrary-size count.
///
/// The top 64 bits form the mantissa and the rest an exact binary exponent:
/// `ln c = ln(mant) + shift·ln 2`.
pub fn log_of_count(c: &BigUint) -> Result<f64, BoundsError> {
    if c.is_zero() {
        return Err(BoundsError::ZeroCount);
    }
    let bits = c.bits();
    if bits <= 64 {
        let v = *c.to_u64_digits().first().unwrap_or(&0);
        return Ok((v as f64).ln());
    }
    let shift = bits - 64;
    let top = (c >> shift).to_u64_digits()[0];
    Ok((top as f64).ln() + shift as f64 * std::f64::consts::LN_2)
}

/// The constant `c = π·sqrt(2|R|/(3m))` of a residue spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams<T> {
    pub c: T,
    pub m: usize,
    pub rsize: usize,
}

impl<T: Real> BoundParams<T> {
    pub fn new(spec: &ResidueSpec) -> Result<Self, BoundsError> {
        if spec.rsize() == 0 {
            return Err(BoundsError::EmptyResidues);
        }
        let ratio = T::lit(2.0) * T::from_usize_lossy(spec.rsize())
            / (T::lit(3.0) * T::from_usize_lossy(spec.m()));
        Ok(Self {
            c: T::PI() * ratio.sqrt(),
            m: spec.m(),
            rsize: spec.rsize(),
        })
    }
}

/// `π·sqrt(2n/3)`
pub fn erdos_rhs<T: Real>(n: usize) -> T {
    T::PI() * (T::lit(2.0) * T::from_usize_lossy(n) / T::lit(3.0)).sqrt()
}

/// `c·sqrt(n)`
pub fn theorem1_rhs<T: Real>(n: usize, params: &BoundParams<T>) -> T {
    params.c * T::from_usize_lossy(n).sqrt()
}

/// `(|R|+1)·log(n+1) + c·sqrt(n)`
pub fn chain_rhs<T: Real>(n: usize, params: &BoundParams<T>) -> T {
    T::from_usize_lossy(params.rsize + 1) * T::from_usize_lossy(n + 1).ln()
        + theorem1_rhs(n, params)
}

/// One `log count ≤ bound` comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub m: usize,
    pub residues: Vec<usize>,
    pub variant: PartSetVariant,
    pub n: usize,
    pub count: BigUint,
    /// Absent when the count is zero.
    pub log_count: Option<T>,
    pub bound: T,
    /// `bound − log_count`; absent when the count is zero.
    pub slack: Option<T>,
    pub holds: bool,
}

fn make_report<T: Real>(
    spec: &ResidueSpec,
    variant: &PartSetVariant,
    n: usize,
    count: BigUint,
    bound: T,
) -> BoundReport<T> {
    let log_count = log_of_count(&count).ok().map(T::lit);
    let slack = log_count.map(|l| bound - l);
    // Zero counts hold vacuously.
    let holds = slack.map_or(true, |s| s >= -T::lit(EPS_LOG));
    BoundReport {
        m: spec.m(),
        residues: spec.residues().to_vec(),
        variant: variant.clone(),
        n,
        count,
        log_count,
        bound,
        slack,
        holds,
    }
}

fn sweep<T: Real>(
    spec: &ResidueSpec,
    variant: PartSetVariant,
    n_max: usize,
    bound: impl Fn(usize) -> T,
) -> Vec<BoundReport<T>> {
    let table = table_for(spec, &variant, n_max);
    table
        .into_values()
        .into_iter()
        .enumerate()
        .map(|(n, count)| make_report(spec, &variant, n, count, bound(n)))
        .collect()
}

/// `log p_{A⁺}(n) ≤ c·sqrt(n)` for `0 ≤ n ≤ n_max`.
pub fn check_theorem1<T: Real>(
    spec: &ResidueSpec,
    n_max: usize,
) -> Result<Vec<BoundReport<T>>, BoundsError> {
    let params = BoundParams::<T>::new(spec)?;
    Ok(sweep(spec, PartSetVariant::APlus, n_max, |n| {
        theorem1_rhs(n, &params)
    }))
}

/// `log p(n) ≤ π·sqrt(2n/3)` for `0 ≤ n ≤ n_max`.
pub fn check_erdos<T: Real>(n_max: usize) -> Vec<BoundReport<T>> {
    let spec = ResidueSpec::new(1, &[0]).expect("m=1, R={0} is valid");
    sweep(&spec, PartSetVariant::AllNaturals, n_max, erdos_rhs)
}

/// `log p_A(n) ≤ (|R|+1)·log(n+1) + c·sqrt(n)` for `0 ≤ n ≤ n_max`.
pub fn check_nathanson_chain<T: Real>(
    spec: &ResidueSpec,
    n_max: usize,
) -> Result<Vec<BoundReport<T>>, BoundsError> {
    let params = BoundParams::<T>::new(spec)?;
    Ok(sweep(spec, PartSetVariant::FullA, n_max, |n| {
        chain_rhs(n, &params)
    }))
}

/// Exact integer comparison `p_{R⁺}(n) ≤ (n+1)^{|R|}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBoundReport {
    pub m: usize,
    pub residues: Vec<usize>,
    pub n: usize,
    pub count: BigUint,
    pub bound: BigUint,
    pub holds: bool,
}

pub fn check_rplus_poly_bound(spec: &ResidueSpec, n_max: usize) -> Vec<PolyBoundReport> {
    let exponent = u32::try_from(spec.rsize()).expect("residue count fits in u32");
    table_for(spec, &PartSetVariant::RPlus, n_max)
        .into_values()
        .into_iter()
        .enumerate()
        .map(|(n, count)| {
            let bound: BigUint = BigUint::from(n + 1).pow(exponent);
            PolyBoundReport {
                m: spec.m(),
                residues: spec.residues().to_vec(),
                n,
                holds: count <= bound,
                count,
                bound,
            }
        })
        .collect()
}

/// `log p_A(n) / (c·sqrt(n))`, a diagnostic with no pass/fail attached.
pub fn asymptotic_ratio<T: Real>(spec: &ResidueSpec, n: usize) -> Result<T, BoundsError> {
    asymptotic_ratios(spec, n)?
        .pop()
        .and_then(|(_, r)| r)
        .ok_or(if n == 0 {
            BoundsError::ZeroIndex
        } else {
            BoundsError::ZeroCount
        })
}

/// Ratios for every `0 ≤ n ≤ n_max`; `None` where undefined (`n = 0` or a
/// zero count).
pub fn asymptotic_ratios<T: Real>(
    spec: &ResidueSpec,
    n_max: usize,
) -> Result<Vec<(usize, Option<T>)>, BoundsError> {
    let params = BoundParams::<T>::new(spec)?;
    let table = table_for(spec, &PartSetVariant::FullA, n_max);
    Ok(table
        .values()
        .iter()
        .enumerate()
        .map(|(n, count)| {
            let ratio = (n > 0)
                .then(|| log_of_count(count).ok())
                .flatten()
                .map(|l| T::lit(l) / theorem1_rhs(n, &params));
            (n, ratio)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(m: usize, r: &[usize]) -> ResidueSpec {
        ResidueSpec::new(m, r).unwrap()
    }

    #[test]
    fn log_of_count_examples() {
        assert_eq!(log_of_count(&BigUint::from(1u32)).unwrap(), 0.0);
        // ln 190569292 to 40 digits: 19.06552642392737882698…
        assert_abs_diff_eq!(
            log_of_count(&BigUint::from(190_569_292u64)).unwrap(),
            19.065_526_423_927_38,
            epsilon = 1e-12
        );
        let two_1000 = BigUint::from(1u32) << 1000usize;
        let l = log_of_count(&two_1000).unwrap();
        assert!((l - 1000.0 * std::f64::consts::LN_2).abs() / l < 1e-12);
        assert_eq!(log_of_count(&BigUint::zero()), Err(BoundsError::ZeroCount));
    }

    #[test]
    fn log_of_count_relative_error_on_large_values() {
        // 3^k has ln = k·ln 3 exactly.
        for k in [41u32, 100, 1000, 5000] {
            let v = BigUint::from(3u32).pow(k);
            let want = f64::from(k) * 3f64.ln();
            assert!((log_of_count(&v).unwrap() - want).abs() / want < 1e-12, "k={k}");
        }
    }

    #[test]
    fn rhs_values() {
        assert_eq!(erdos_rhs::<f64>(0), 0.0);
        assert_abs_diff_eq!(erdos_rhs::<f64>(100), 25.650_996_603_237_28, epsilon = 1e-12);
        assert_abs_diff_eq!(erdos_rhs::<f64>(6), 2.0 * std::f64::consts::PI, epsilon = 1e-12);
        let p = BoundParams::<f64>::new(&spec(2, &[1])).unwrap();
        assert_abs_diff_eq!(theorem1_rhs(300, &p), 10.0 * std::f64::consts::PI, epsilon = 1e-12);
        assert_eq!(theorem1_rhs(0, &p), 0.0);
        let unit = BoundParams::<f64>::new(&spec(1, &[0])).unwrap();
        assert_abs_diff_eq!(unit.c, 2.565_099_660_323_728, epsilon = 1e-12);
        for n in [0, 1, 7, 100, 2000] {
            assert_abs_diff_eq!(theorem1_rhs(n, &unit), erdos_rhs::<f64>(n), epsilon = 1e-12);
        }
        assert_eq!(
            BoundParams::<f64>::new(&spec(3, &[])),
            Err(BoundsError::EmptyResidues)
        );
    }

    #[test]
    fn theorem1_examples() {
        let reps = check_theorem1::<f64>(&spec(1, &[0]), 100).unwrap();
        let r = &reps[100];
        assert_eq!(r.count, BigUint::from(190_569_292u64));
        assert_abs_diff_eq!(r.slack.unwrap(), 25.650_996_603_237_28 - 19.065_526_423_927_38, epsilon = 1e-9);
        assert!(reps.iter().all(|r| r.holds));
        assert_eq!((reps[0].log_count, reps[0].slack), (Some(0.0), Some(0.0)));

        let reps = check_theorem1::<f64>(&spec(2, &[1]), 5).unwrap();
        assert_eq!(reps[5].count, BigUint::from(1u32));
        assert_abs_diff_eq!(reps[5].bound, 4.055_778_675_973_612, epsilon = 1e-9);
        // n = 1, 2 have no partition into parts from {3, 5, …}.
        assert_eq!(reps[1].log_count, None);
        assert!(reps[1].holds);
    }

    #[test]
    fn erdos_and_theorem1_coincide_for_unit_modulus() {
        let a = check_erdos::<f64>(50);
        let b = check_theorem1::<f64>(&spec(1, &[0]), 50).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.count, y.count);
            assert_abs_diff_eq!(x.bound, y.bound, epsilon = 1e-12);
        }
    }

    #[test]
    fn poly_bound_examples() {
        let r = check_rplus_poly_bound(&spec(2, &[1]), 6);
        assert_eq!((r[6].count.clone(), r[6].bound.clone()), (1u32.into(), 7u32.into()));
        let r = check_rplus_poly_bound(&spec(5, &[2, 3]), 6);
        assert_eq!((r[6].count.clone(), r[6].bound.clone()), (2u32.into(), 49u32.into()));
        let r = check_rplus_poly_bound(&spec(4, &[0]), 5);
        assert!(r[1..].iter().all(|x| x.count.is_zero() && x.holds));
        assert!(r.iter().all(|x| x.holds));
    }

    #[test]
    fn chain_examples() {
        let r = check_nathanson_chain::<f64>(&spec(2, &[1]), 5).unwrap();
        assert_eq!(r[5].count, BigUint::from(3u32));
        assert_abs_diff_eq!(r[5].log_count.unwrap(), 1.098_612_288_668_11, epsilon = 1e-12);
        assert_abs_diff_eq!(r[5].bound, 7.639_297_614_429_72, epsilon = 1e-9);
        let r = check_nathanson_chain::<f64>(&spec(1, &[0]), 1).unwrap();
        assert!(r[1].holds && r[1].slack.unwrap() > 0.0);
        let r = check_nathanson_chain::<f64>(&spec(4, &[1, 3]), 10).unwrap();
        assert!(r[10].slack.unwrap() > 0.0);
    }

    #[test]
    fn ratio_examples() {
        let nat = spec(1, &[0]);
        assert_abs_diff_eq!(
            asymptotic_ratio::<f64>(&nat, 100).unwrap(),
            0.743_266_498_328_615,
            epsilon = 1e-9
        );
        assert_eq!(asymptotic_ratio::<f64>(&nat, 0), Err(BoundsError::ZeroIndex));
        assert_eq!(
            asymptotic_ratio::<f64>(&spec(4, &[2]), 3),
            Err(BoundsError::ZeroCount)
        );
    }

    #[test]
    fn single_precision_scalar() {
        let reps = check_theorem1::<f32>(&spec(3, &[0, 2]), 60).unwrap();
        assert!(reps.iter().all(|r| r.holds));
        let p = BoundParams::<f32>::new(&spec(1, &[0])).unwrap();
        assert!((p.c - 2.565_1).abs() < 1e-4);
    }
}
