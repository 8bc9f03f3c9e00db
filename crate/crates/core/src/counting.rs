//! Exact partition counts `p_S(n)` for a finite list of allowed parts.
//!
//! Three independent engines are provided:
//!
//! * [`count_dp`]: coin-change accumulation, outer loop over parts and inner
//!   ascending loop over totals, `O(|S|·n)` additions;
//! * [`count_recurrence`]: the weighted recurrence
//!   `n·p_S(n) = Σ_{s∈S∩[n]} s · Σ_{1≤k≤n/s} p_S(n−sk)`, solved bottom-up with
//!   exact division by `n`;
//! * [`count_bruteforce`]: enumeration of every nonincreasing sequence of parts,
//!   capped at a small ceiling and used as the oracle for the other two.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::num::Count;
use crate::partset::{parts_up_to, PartSetVariant, ResidueSpec};

/// Largest `n` accepted by [`count_bruteforce`] by default.
pub const DEFAULT_ORACLE_CEILING: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("parts must be strictly increasing positive integers")]
    InvalidParts,
    #[error("count overflowed the integer type at n={0}")]
    Overflow(usize),
    #[error("integrity failure: recurrence sum at n={n} is not divisible by n")]
    Integrity { n: usize },
    #[error("n={n} exceeds the brute-force ceiling {ceiling}")]
    AboveOracleCeiling { n: usize, ceiling: usize },
    #[error("part {0} is not in the part list")]
    PartNotInSet(usize),
    #[error("multiplicity lower bound must be at least 1")]
    ZeroMultiplicity,
}

/// Memoized `p_S(0..=n)` together with the part list that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable<C> {
    parts: Vec<usize>,
    values: Vec<C>,
}

impl<C: Count> CountTable<C> {
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn values(&self) -> &[C] {
        &self.values
    }

    /// Largest index covered by the table.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// `p_S(j)`; zero for indices past the table.
    pub fn get(&self, j: usize) -> C {
        self.values.get(j).cloned().unwrap_or_else(C::zero)
    }

    pub fn into_values(self) -> Vec<C> {
        self.values
    }
}

impl<C> std::ops::Index<usize> for CountTable<C> {
    type Output = C;

    fn index(&self, j: usize) -> &C {
        &self.values[j]
    }
}

/// Which part and which multiplicity a footnote-style count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityQuery {
    pub s: usize,
    pub t: usize,
}

fn validate_parts(parts: &[usize]) -> Result<(), CountError> {
    let increasing = parts.windows(2).all(|w| w[0] < w[1]);
    if !increasing || parts.first() == Some(&0) {
        return Err(CountError::InvalidParts);
    }
    Ok(())
}

/// `p_S(j)` for `0 ≤ j ≤ n` by coin-change accumulation.
pub fn count_dp<C: Count>(parts: &[usize], n: usize) -> Result<CountTable<C>, CountError> {
    validate_parts(parts)?;
    let mut values = vec![C::zero(); n + 1];
    values[0] = C::one();
    for &s in parts.iter().take_while(|&&s| s <= n) {
        for j in s..=n {
            let (lo, hi) = values.split_at_mut(j);
            if !hi[0].add_assign_checked(&lo[j - s]) {
                return Err(CountError::Overflow(j));
            }
        }
    }
    Ok(CountTable {
        parts: parts.to_vec(),
        values,
    })
}

/// Right side of the weighted recurrence at `n`, read from `values[..n]`:
/// `Σ_{s∈S∩[n]} s · Σ_{1≤k≤n/s} values[n − sk]`.
pub fn eq4_rhs<C: Count>(parts: &[usize], values: &[C], n: usize) -> Result<C, CountError> {
    let mut total = C::zero();
    for &s in parts.iter().take_while(|&&s| s <= n) {
        let mut inner = C::zero();
        let mut j = n;
        while j >= s {
            j -= s;
            if !inner.add_assign_checked(&values[j]) {
                return Err(CountError::Overflow(n));
            }
        }
        let weighted = inner.mul_small(s).ok_or(CountError::Overflow(n))?;
        if !total.add_assign_checked(&weighted) {
            return Err(CountError::Overflow(n));
        }
    }
    Ok(total)
}

/// `p_S(j)` for `0 ≤ j ≤ n` from the weighted recurrence.
///
/// The right side must be divisible by `j` at every level; a remainder means
/// the engine is broken and is reported as [`CountError::Integrity`].
pub fn count_recurrence<C: Count>(parts: &[usize], n: usize) -> Result<CountTable<C>, CountError> {
    validate_parts(parts)?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(C::one());
    for j in 1..=n {
        let rhs = eq4_rhs(parts, &values, j)?;
        let v = rhs.exact_quotient(j).ok_or(CountError::Integrity { n: j })?;
        values.push(v);
    }
    Ok(CountTable {
        parts: parts.to_vec(),
        values,
    })
}

/// Exhaustive enumeration with the default ceiling.
pub fn count_bruteforce(parts: &[usize], n: usize) -> Result<BigUint, CountError> {
    count_bruteforce_with_ceiling(parts, n, DEFAULT_ORACLE_CEILING)
}

/// Counts partitions of `n` by walking every nonincreasing sequence of parts.
pub fn count_bruteforce_with_ceiling(
    parts: &[usize],
    n: usize,
    ceiling: usize,
) -> Result<BigUint, CountError> {
    validate_parts(parts)?;
    if n > ceiling {
        return Err(CountError::AboveOracleCeiling { n, ceiling });
    }

    // `avail` holds the parts still allowed (all ≤ the previous summand).
    fn walk(avail: &[usize], remaining: usize) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for (i, &s) in avail.iter().enumerate().rev() {
            if s <= remaining {
                total += walk(&avail[..=i], remaining - s);
            }
        }
        total
    }

    Ok(BigUint::from(walk(parts, n)))
}

fn check_query(parts: &[usize], q: MultiplicityQuery) -> Result<(), CountError> {
    validate_parts(parts)?;
    if parts.binary_search(&q.s).is_err() {
        return Err(CountError::PartNotInSet(q.s));
    }
    Ok(())
}

/// `p_S(n, s, t)`: partitions of `n` in which `s` appears exactly `t` times.
///
/// Equal to the partitions of `n − st` that avoid `s` altogether.
pub fn count_exact_multiplicity(
    parts: &[usize],
    n: usize,
    q: MultiplicityQuery,
) -> Result<BigUint, CountError> {
    check_query(parts, q)?;
    let Some(rest) = q.s.checked_mul(q.t).and_then(|st| n.checked_sub(st)) else {
        return Ok(BigUint::zero());
    };
    let without: Vec<usize> = parts.iter().copied().filter(|&p| p != q.s).collect();
    Ok(count_dp::<BigUint>(&without, rest)?.into_values().pop().unwrap())
}

/// `p'_S(n, s, t)`: partitions of `n` in which `s` appears at least `t ≥ 1`
/// times, i.e. `p_S(n − st)`.
pub fn count_min_multiplicity(
    parts: &[usize],
    n: usize,
    q: MultiplicityQuery,
) -> Result<BigUint, CountError> {
    check_query(parts, q)?;
    if q.t == 0 {
        return Err(CountError::ZeroMultiplicity);
    }
    let Some(rest) = q.s.checked_mul(q.t).and_then(|st| n.checked_sub(st)) else {
        return Ok(BigUint::zero());
    };
    Ok(count_dp::<BigUint>(parts, rest)?.into_values().pop().unwrap())
}

/// The double-counting chain behind the weighted recurrence, evaluated for a
/// single `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityChainReport {
    pub n: usize,
    /// `n · p_S(n)`
    pub n_times_count: BigUint,
    /// `Σ_{s,t} s·t·p_S(n,s,t)`
    pub weighted_exact: BigUint,
    /// `Σ_s s · Σ_{t≥1} p'_S(n,s,t)`
    pub weighted_at_least: BigUint,
    /// `Σ_s s · Σ_{1≤k≤n/s} p_S(n−sk)`
    pub shifted: BigUint,
    /// Per part: `Σ_t t·p_S(n,s,t) == Σ_t p'_S(n,s,t)` and
    /// `p'_S(n,s,t) == p_S(n−st)` for every `t`.
    pub per_part_ok: bool,
}

impl MultiplicityChainReport {
    pub fn holds(&self) -> bool {
        self.per_part_ok
            && self.n_times_count == self.weighted_exact
            && self.weighted_exact == self.weighted_at_least
            && self.weighted_at_least == self.shifted
    }
}

/// Evaluates every link of the chain
/// `n·p_S(n) = Σ s·t·p_S(n,s,t) = Σ s·Σ_t p'_S(n,s,t) = Σ s·Σ_k p_S(n−sk)`
/// from independently computed tables.
pub fn multiplicity_chain(parts: &[usize], n: usize) -> Result<MultiplicityChainReport, CountError> {
    let full = count_dp::<BigUint>(parts, n)?;
    let mut weighted_exact = BigUint::zero();
    let mut weighted_at_least = BigUint::zero();
    let mut shifted = BigUint::zero();
    let mut per_part_ok = true;

    for &s in parts.iter().take_while(|&&s| s <= n) {
        let without: Vec<usize> = parts.iter().copied().filter(|&p| p != s).collect();
        let avoid = count_dp::<BigUint>(&without, n)?;
        let mut by_exact = BigUint::zero();
        let mut by_at_least = BigUint::zero();
        for t in 1..=n / s {
            let rest = n - s * t;
            // At least t copies of s: peel them off and count what remains.
            let at_least = full[rest].clone();
            let at_least_direct: BigUint = (t..=n / s).map(|u| avoid[n - s * u].clone()).sum();
            per_part_ok &= at_least == at_least_direct;
            by_exact += &avoid[rest] * BigUint::from(t);
            by_at_least += at_least;
        }
        per_part_ok &= by_exact == by_at_least;
        let shift: BigUint = (1..=n / s).map(|k| full[n - s * k].clone()).sum();
        weighted_exact += &by_exact * BigUint::from(s);
        weighted_at_least += &by_at_least * BigUint::from(s);
        shifted += shift * BigUint::from(s);
    }

    Ok(MultiplicityChainReport {
        n,
        n_times_count: &full[n] * BigUint::from(n),
        weighted_exact,
        weighted_at_least,
        shifted,
        per_part_ok,
    })
}

/// DP table for a variant of a residue spec.
pub fn table_for(
    spec: &ResidueSpec,
    variant: &PartSetVariant,
    n: usize,
) -> CountTable<BigUint> {
    count_dp(&parts_up_to(spec, variant, n), n).expect("generated parts are valid and BigUint never overflows")
}

/// `p_A(n)` against `Σ_{0≤n'≤n} p_{R⁺}(n')·p_{A⁺}(n−n')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionReport {
    pub n: usize,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

/// Convolution reports for every `0 ≤ n ≤ n_max`, sharing one set of tables.
pub fn convolution_reports(spec: &ResidueSpec, n_max: usize) -> Vec<ConvolutionReport> {
    let full = table_for(spec, &PartSetVariant::FullA, n_max);
    let plus = table_for(spec, &PartSetVariant::APlus, n_max);
    let small = table_for(spec, &PartSetVariant::RPlus, n_max);
    (0..=n_max)
        .map(|n| {
            let rhs: BigUint = (0..=n).map(|k| &small[k] * &plus[n - k]).sum();
            let lhs = full[n].clone();
            ConvolutionReport {
                n,
                holds: lhs == rhs,
                lhs,
                rhs,
            }
        })
        .collect()
}

pub fn convolution_check(spec: &ResidueSpec, n: usize) -> ConvolutionReport {
    convolution_reports(spec, n).pop().unwrap()
}
