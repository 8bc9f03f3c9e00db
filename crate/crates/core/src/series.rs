//! Pointwise checks of the analytic facts behind the `A⁺` bound.
//!
//! * the closed form `Σ_{a∈A⁺} a·t^a = Σ_{r∈R} ((r+m)t^{r+m} − r·t^{2m+r}) / (1−t^m)²`;
//! * the per-residue bound of that closed form at `t = e^{−x}` by `1/(m x²)`,
//!   and its sum `|R|/(m x²)`;
//! * `e^{x/2} − e^{−x/2} > x` and its consequence `e^{−x}/(1−e^{−x})² < 1/x²`;
//! * `sqrt(n − ak) ≤ sqrt(n) − ak/(2·sqrt(n))`;
//! * the monotone factor `(r+m)e^{−rx} − r·e^{−(m+r)x} ≤ m`;
//! * the failure of the analogous bound for the odd integers,
//!   `(e^{−x} + e^{−3x})/(1−e^{−2x})² ≤ 1/(2x²)`.
//!
//! Every `1 − e^{−y}` is evaluated as `−expm1(−y)` so that both sides keep
//! their digits as `x → 0`, where they grow like `1/x²`.

use thiserror::Error;

use crate::num::Real;
use crate::partset::{parts_up_to, PartSetVariant, ResidueSpec};

/// Absolute tolerance for one-sided checks at moderate `x`.
pub const EPS: f64 = 1e-9;
/// Below this `x` the tolerance becomes `EPS · rhs`.
pub const RELATIVE_BELOW_X: f64 = 1e-2;
/// Relative tolerance for the truncated-series identity.
pub const IDENTITY_REL_TOL: f64 = 1e-9;
/// Doubling stops once the partial sum changes by less than this, relatively.
pub const TAIL_REL_CHANGE: f64 = 1e-12;
pub const TAIL_START: usize = 64;
pub const TAIL_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("t={0} is outside the open interval (0, 1)")]
    TOutOfRange(f64),
    #[error("x={0} must be positive")]
    XNotPositive(f64),
    #[error("x={0} must be nonnegative")]
    XNegative(f64),
    #[error("residue {r} out of range for modulus {m}")]
    ResidueOutOfRange { r: usize, m: usize },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("a·k={ak} exceeds n={n}")]
    SqrtDomain { n: usize, ak: usize },
    #[error("n, a and k must be positive")]
    SqrtZero,
    #[error("check needs a nonempty residue set")]
    EmptyResidues,
}

/// Evaluation point of a check: either `t ∈ (0,1)` or `x > 0`, with `t = e^{−x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesPoint<T> {
    T(T),
    X(T),
}

impl<T: Real> SeriesPoint<T> {
    pub fn t(&self) -> T {
        match *self {
            Self::T(t) => t,
            Self::X(x) => (-x).exp(),
        }
    }

    pub fn x(&self) -> T {
        match *self {
            Self::T(t) => -t.ln(),
            Self::X(x) => x,
        }
    }
}

/// Which fact a [`SeriesCheckReport`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesCheck {
    /// Identity: `margin = |lhs − rhs|`, holds when relatively within
    /// [`IDENTITY_REL_TOL`] and the truncation converged.
    Eq1,
    Eq2,
    Eq3,
    /// `lhs = x`, `rhs = e^{x/2} − e^{−x/2}`, strict.
    Sinh,
    /// `lhs = e^{−x}/(1−e^{−x})²`, `rhs = 1/x²`, strict.
    SinhConsequence,
    /// `lhs = sqrt(n−ak)`, `rhs = sqrt(n) − ak/(2 sqrt n)`.
    Sqrt,
    /// `lhs = (r+m)e^{−rx} − r e^{−(m+r)x}`, `rhs = m`; `detail` is the
    /// derivative, which must be nonpositive.
    Derivative,
    /// The odd-integer inequality; a failure is the expected outcome.
    Remark,
}

impl SeriesCheck {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eq1 => "eq1",
            Self::Eq2 => "eq2",
            Self::Eq3 => "eq3",
            Self::Sinh => "sinh",
            Self::SinhConsequence => "sinh-consequence",
            Self::Sqrt => "sqrt",
            Self::Derivative => "derivative",
            Self::Remark => "remark",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCheckReport<T> {
    pub check: SeriesCheck,
    /// Modulus, when the check has one.
    pub m: Option<usize>,
    /// Residues involved (a single `r` for per-residue checks).
    pub residues: Vec<usize>,
    pub point: SeriesPoint<T>,
    pub lhs: T,
    pub rhs: T,
    /// `rhs − lhs` for inequalities, `|lhs − rhs|` for identities.
    pub margin: T,
    /// Check-specific extra value (derivative, truncation cutoff).
    pub detail: Option<T>,
    pub holds: bool,
}

/// One-sided tolerance: [`EPS`] absolute, or `EPS·rhs` when `x` is small.
pub fn tolerance<T: Real>(x: T, rhs: T) -> T {
    if x < T::lit(RELATIVE_BELOW_X) {
        T::lit(EPS) * rhs.abs()
    } else {
        T::lit(EPS)
    }
}

fn check_t<T: Real>(t: T) -> Result<(), SeriesError> {
    if t > T::zero() && t < T::one() {
        Ok(())
    } else {
        Err(SeriesError::TOutOfRange(t.to_f64().unwrap_or(f64::NAN)))
    }
}

fn check_x<T: Real>(x: T) -> Result<(), SeriesError> {
    if x > T::zero() {
        Ok(())
    } else {
        Err(SeriesError::XNotPositive(x.to_f64().unwrap_or(f64::NAN)))
    }
}

fn check_residue(r: usize, m: usize) -> Result<(), SeriesError> {
    if m == 0 {
        Err(SeriesError::ZeroModulus)
    } else if r >= m {
        Err(SeriesError::ResidueOutOfRange { r, m })
    } else {
        Ok(())
    }
}

fn term<T: Real>(a: usize, t: T) -> T {
    T::from_usize_lossy(a) * t.powi(i32::try_from(a).expect("cutoff fits in i32"))
}

/// `Σ_{a∈A⁺, a≤cutoff} a·t^a`, accumulated in increasing `a`.
pub fn lhs_series_truncated<T: Real>(
    spec: &ResidueSpec,
    t: T,
    cutoff: usize,
) -> Result<T, SeriesError> {
    check_t(t)?;
    Ok(parts_up_to(spec, &PartSetVariant::APlus, cutoff)
        .into_iter()
        .fold(T::zero(), |acc, a| acc + term(a, t)))
}

/// A truncated sum together with where the doubling rule stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum<T> {
    pub value: T,
    pub cutoff: usize,
    pub converged: bool,
}

/// Doubles the cutoff from [`TAIL_START`] until the partial sum changes by
/// less than [`TAIL_REL_CHANGE`] relatively, or [`TAIL_CAP`] is reached.
///
/// Doubling also continues while the cutoff is below `2m`, so that the first
/// members of `A⁺` are always included before convergence is judged.
pub fn lhs_series_converged<T: Real>(
    spec: &ResidueSpec,
    t: T,
) -> Result<TruncatedSum<T>, SeriesError> {
    check_t(t)?;
    let mut cutoff = TAIL_START;
    let mut sum = lhs_series_truncated(spec, t, cutoff)?;
    loop {
        if cutoff >= TAIL_CAP {
            return Ok(TruncatedSum {
                value: sum,
                cutoff,
                converged: false,
            });
        }
        let next = cutoff * 2;
        let added = parts_up_to(spec, &PartSetVariant::APlus, next)
            .into_iter()
            .skip_while(|&a| a <= cutoff)
            .fold(T::zero(), |acc, a| acc + term(a, t));
        let prev = sum;
        sum = sum + added;
        cutoff = next;
        let settled = (sum - prev).abs() <= T::lit(TAIL_REL_CHANGE) * sum.abs();
        if settled && cutoff >= 2 * spec.m() {
            return Ok(TruncatedSum {
                value: sum,
                cutoff,
                converged: true,
            });
        }
    }
}

// (1 − t^m)² with t = e^{-x}, via expm1.
fn one_minus_pow_sq<T: Real>(m: usize, x: T) -> T {
    let d = -(-(T::from_usize_lossy(m) * x)).exp_m1();
    d * d
}

/// `((r+m)e^{−(r+m)x} − r·e^{−(2m+r)x}) / (1 − e^{−mx})²` for one residue.
fn residue_term_at_x<T: Real>(r: usize, m: usize, x: T) -> T {
    let rf = T::from_usize_lossy(r);
    let mf = T::from_usize_lossy(m);
    let num = (rf + mf) * (-(rf + mf) * x).exp() - rf * (-(mf + mf + rf) * x).exp();
    num / one_minus_pow_sq(m, x)
}

/// `Σ_{r∈R} ((r+m)t^{r+m} − r·t^{2m+r}) / (1−t^m)²`
pub fn rhs_closed_form<T: Real>(spec: &ResidueSpec, t: T) -> Result<T, SeriesError> {
    check_t(t)?;
    let x = -t.ln();
    Ok(spec
        .residues()
        .iter()
        .fold(T::zero(), |acc, &r| acc + residue_term_at_x(r, spec.m(), x)))
}

/// Truncated series against the closed form at `t`.
pub fn check_eq1<T: Real>(spec: &ResidueSpec, t: T) -> Result<SeriesCheckReport<T>, SeriesError> {
    if spec.rsize() == 0 {
        return Err(SeriesError::EmptyResidues);
    }
    let sum = lhs_series_converged(spec, t)?;
    let rhs = rhs_closed_form(spec, t)?;
    let margin = (sum.value - rhs).abs();
    Ok(SeriesCheckReport {
        check: SeriesCheck::Eq1,
        m: Some(spec.m()),
        residues: spec.residues().to_vec(),
        point: SeriesPoint::T(t),
        lhs: sum.value,
        rhs,
        margin,
        detail: Some(T::from_usize_lossy(sum.cutoff)),
        holds: sum.converged && margin <= T::lit(IDENTITY_REL_TOL) * rhs.abs(),
    })
}

/// Per-residue bound: closed-form term at `t = e^{−x}` against `1/(m x²)`.
pub fn check_eq2_pointwise<T: Real>(
    r: usize,
    m: usize,
    x: T,
) -> Result<SeriesCheckReport<T>, SeriesError> {
    check_residue(r, m)?;
    check_x(x)?;
    let lhs = residue_term_at_x(r, m, x);
    let rhs = (T::from_usize_lossy(m) * x * x).recip();
    Ok(SeriesCheckReport {
        check: SeriesCheck::Eq2,
        m: Some(m),
        residues: vec![r],
        point: SeriesPoint::X(x),
        lhs,
        rhs,
        margin: rhs - lhs,
        detail: None,
        holds: lhs <= rhs + tolerance(x, rhs),
    })
}

/// `Σ_{a∈A⁺} a·e^{−ax}` (through the closed form) against `|R|/(m x²)`.
pub fn check_eq3<T: Real>(spec: &ResidueSpec, x: T) -> Result<SeriesCheckReport<T>, SeriesError> {
    check_x(x)?;
    if spec.rsize() == 0 {
        return Err(SeriesError::EmptyResidues);
    }
    let t = (-x).exp();
    // Large x underflows t to zero; the closed form is then zero as well.
    let lhs = if t > T::zero() {
        rhs_closed_form(spec, t)?
    } else {
        T::zero()
    };
    let rhs = T::from_usize_lossy(spec.rsize()) / (T::from_usize_lossy(spec.m()) * x * x);
    Ok(SeriesCheckReport {
        check: SeriesCheck::Eq3,
        m: Some(spec.m()),
        residues: spec.residues().to_vec(),
        point: SeriesPoint::X(x),
        lhs,
        rhs,
        margin: rhs - lhs,
        detail: None,
        holds: lhs <= rhs + tolerance(x, rhs),
    })
}

/// `e^{x/2} − e^{−x/2} − x`.
///
/// For `x < 1` this is summed as `x³ Σ_{k≥1} x^{2k−2} / ((2k+1)!·4^k)`, which
/// keeps full relative precision where the direct difference cancels.
pub fn sinh_excess<T: Real>(x: T) -> T {
    if x >= T::one() {
        return (x / T::lit(2.0)).exp() - (-x / T::lit(2.0)).exp() - x;
    }
    let x2 = x * x;
    let mut term = T::lit(1.0 / 24.0);
    let mut sum = T::zero();
    let mut k = 1usize;
    while term > T::epsilon() * sum * T::lit(1e-2) || sum == T::zero() {
        sum = sum + term;
        let a = T::from_usize_lossy(2 * k + 2);
        let b = T::from_usize_lossy(2 * k + 3);
        term = term * x2 / (a * b * T::lit(4.0));
        k += 1;
        if term == T::zero() {
            break;
        }
    }
    x * x2 * sum
}

/// `e^{−x}/(1−e^{−x})² < 1/x²`, strict.
pub fn check_sinh_consequence<T: Real>(x: T) -> Result<SeriesCheckReport<T>, SeriesError> {
    check_x(x)?;
    let lhs = (-x).exp() / one_minus_pow_sq(1, x);
    let rhs = (x * x).recip();
    Ok(SeriesCheckReport {
        check: SeriesCheck::SinhConsequence,
        m: None,
        residues: Vec::new(),
        point: SeriesPoint::X(x),
        lhs,
        rhs,
        margin: rhs - lhs,
        detail: None,
        holds: lhs < rhs,
    })
}

/// `e^{x/2} − e^{−x/2} > x`, strict. `holds` also requires the consequence
/// reported by [`check_sinh_consequence`].
pub fn check_sinh_inequality<T: Real>(x: T) -> Result<SeriesCheckReport<T>, SeriesError> {
    let consequence = check_sinh_consequence(x)?;
    let margin = sinh_excess(x);
    Ok(SeriesCheckReport {
        check: SeriesCheck::Sinh,
        m: None,
        residues: Vec::new(),
        point: SeriesPoint::X(x),
        lhs: x,
        rhs: x + margin,
        margin,
        detail: None,
        holds: margin > T::zero() && consequence.holds,
    })
}

/// `sqrt(n − ak)` against `sqrt(n) − ak/(2·sqrt(n))`.
pub fn sqrt_inequality_report<T: Real>(
    n: usize,
    a: usize,
    k: usize,
) -> Result<SeriesCheckReport<T>, SeriesError> {
    if n == 0 || a == 0 || k == 0 {
        return Err(SeriesError::SqrtZero);
    }
    let ak = a.checked_mul(k).unwrap_or(usize::MAX);
    if ak > n {
        return Err(SeriesError::SqrtDomain { n, ak });
    }
    let nf = T::from_usize_lossy(n);
    let akf = T::from_usize_lossy(ak);
    let lhs = (nf - akf).sqrt();
    let rhs = nf.sqrt() - akf / (T::lit(2.0) * nf.sqrt());
    Ok(SeriesCheckReport {
        check: SeriesCheck::Sqrt,
        m: None,
        residues: Vec::new(),
        point: SeriesPoint::X(nf),
        lhs,
        rhs,
        margin: rhs - lhs,
        detail: Some(akf),
        holds: lhs <= rhs + T::lit(EPS),
    })
}

pub fn check_sqrt_inequality(n: usize, a: usize, k: usize) -> Result<bool, SeriesError> {
    sqrt_inequality_report::<f64>(n, a, k).map(|r| r.holds)
}

/// `(r+m)e^{−rx} − r·e^{−(m+r)x} ≤ m` with derivative
/// `r(r+m)(e^{−(m+r)x} − e^{−rx}) ≤ 0`, on a grid of `x ≥ 0`.
/// At `x = 0` the expression must equal `m`.
pub fn check_derivative_nonpositive<T: Real>(
    r: usize,
    m: usize,
    x_grid: &[T],
) -> Result<Vec<SeriesCheckReport<T>>, SeriesError> {
    check_residue(r, m)?;
    let rf = T::from_usize_lossy(r);
    let mf = T::from_usize_lossy(m);
    let eps = T::lit(EPS);
    x_grid
        .iter()
        .map(|&x| {
            if x < T::zero() {
                return Err(SeriesError::XNegative(x.to_f64().unwrap_or(f64::NAN)));
            }
            let slow = (-rf * x).exp();
            let fast = (-(mf + rf) * x).exp();
            let expr = (rf + mf) * slow - rf * fast;
            let derivative = rf * (rf + mf) * (fast - slow);
            let at_zero_ok = x > T::zero() || (expr - mf).abs() <= eps;
            Ok(SeriesCheckReport {
                check: SeriesCheck::Derivative,
                m: Some(m),
                residues: vec![r],
                point: SeriesPoint::X(x),
                lhs: expr,
                rhs: mf,
                margin: mf - expr,
                detail: Some(derivative),
                holds: derivative <= eps && expr <= mf + eps && at_zero_ok,
            })
        })
        .collect()
}

/// `(e^{−x} + e^{−3x})/(1−e^{−2x})²` against `1/(2x²)` at one point.
/// `holds` states whether the inequality is true there.
pub fn remark_report<T: Real>(x: T) -> Result<SeriesCheckReport<T>, SeriesError> {
    check_x(x)?;
    let lhs = ((-x).exp() + (-(T::lit(3.0) * x)).exp()) / one_minus_pow_sq(2, x);
    let rhs = (T::lit(2.0) * x * x).recip();
    Ok(SeriesCheckReport {
        check: SeriesCheck::Remark,
        m: Some(2),
        residues: vec![1],
        point: SeriesPoint::X(x),
        lhs,
        rhs,
        margin: rhs - lhs,
        detail: None,
        holds: lhs <= rhs,
    })
}

/// A grid point where the odd-integer inequality is false.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counterexample<T> {
    pub x: T,
    pub lhs: T,
    pub rhs: T,
    /// `lhs − rhs > 0`
    pub excess: T,
}

/// Every grid point where `(e^{−x} + e^{−3x})/(1−e^{−2x})² > 1/(2x²)`.
pub fn find_counterexample_odd_remark<T: Real>(
    x_grid: &[T],
) -> Result<Vec<Counterexample<T>>, SeriesError> {
    let mut out = Vec::new();
    for &x in x_grid {
        let rep = remark_report(x)?;
        if rep.lhs > rep.rhs {
            out.push(Counterexample {
                x,
                lhs: rep.lhs,
                rhs: rep.rhs,
                excess: rep.lhs - rep.rhs,
            });
        }
    }
    Ok(out)
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            let steps = T::from_usize_lossy(count - 1);
            let ten = T::lit(10.0);
            (0..count)
                .map(|i| match i {
                    0 => lo,
                    _ if i == count - 1 => hi,
                    _ => ten.powf(a + (b - a) * T::from_usize_lossy(i) / steps),
                })
                .collect()
        }
    }
}

/// 200 log-spaced points in `[10⁻³, 10²]`.
pub fn default_x_grid<T: Real>() -> Vec<T> {
    log_grid(T::lit(1e-3), T::lit(1e2), 200)
}

/// The default `x` grid with `x = 1` merged in, in increasing order.
pub fn remark_grid<T: Real>() -> Vec<T> {
    let mut g = default_x_grid::<T>();
    if !g.contains(&T::one()) {
        let pos = g.partition_point(|&x| x < T::one());
        g.insert(pos, T::one());
    }
    g
}

/// `{0.05, 0.10, …, 0.95}`
pub fn default_t_grid<T: Real>() -> Vec<T> {
    (1..=19).map(|i| T::lit(f64::from(i) * 0.05)).collect()
}
