//! Residue-class part sets.
//!
//! For a modulus `m` and residues `R ⊆ {0, …, m-1}`:
//!
//! * `A` is every positive integer whose residue mod `m` lies in `R`;
//! * `A⁺ = A \ R`, i.e. every `a ≥ m` with `a mod m ∈ R`;
//! * `R⁺ = R \ {0}`, the residues themselves used as small parts;
//! * `A_r⁺ = {r+m, r+2m, …}` is the single-residue slice of `A⁺`.
//!
//! Members are generated arithmetically as `r + k·m`, so enumerating the parts
//! up to `n` costs time proportional to the output plus `n/m` block steps.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartSetError {
    #[error("modulus must be at least 1, got {0}")]
    ZeroModulus(usize),
    #[error("residue {residue} out of range for modulus {m} (expected 0..={max})", max = .m - 1)]
    ResidueOutOfRange { residue: usize, m: usize },
    #[error("duplicate residue {0}")]
    DuplicateResidue(usize),
    #[error("explicit part sets contain positive integers only, got 0")]
    ZeroPart,
    #[error("duplicate part {0} in explicit part set")]
    DuplicatePart(usize),
}

/// The pair `(m, R)` defining a family of part sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSpec {
    m: usize,
    residues: Vec<usize>,
}

impl ResidueSpec {
    /// Validates `(m, R)` and sorts `R`. Empty `R` is accepted.
    pub fn new(m: usize, residues: &[usize]) -> Result<Self, PartSetError> {
        if m == 0 {
            return Err(PartSetError::ZeroModulus(m));
        }
        let mut sorted = residues.to_vec();
        sorted.sort_unstable();
        for (i, &r) in sorted.iter().enumerate() {
            if r >= m {
                return Err(PartSetError::ResidueOutOfRange { residue: r, m });
            }
            if i > 0 && sorted[i - 1] == r {
                return Err(PartSetError::DuplicateResidue(r));
            }
        }
        Ok(Self {
            m,
            residues: sorted,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Residues in strictly increasing order.
    pub fn residues(&self) -> &[usize] {
        &self.residues
    }

    /// `|R|`
    pub fn rsize(&self) -> usize {
        self.residues.len()
    }

    /// Every subset of `{0, …, m-1}` as a spec, in bitmask order.
    /// The empty subset is included only when `include_empty` is set.
    pub fn all_subsets(m: usize, include_empty: bool) -> Result<Vec<Self>, PartSetError> {
        if m == 0 {
            return Err(PartSetError::ZeroModulus(m));
        }
        assert!(m < usize::BITS as usize, "modulus too large to enumerate subsets");
        let start = usize::from(!include_empty);
        Ok((start..(1usize << m))
            .map(|mask| {
                let residues: Vec<usize> = (0..m).filter(|r| mask >> r & 1 == 1).collect();
                Self { m, residues }
            })
            .collect())
    }

    /// Comma-separated residue list, e.g. `1,3`.
    pub fn residues_label(&self) -> String {
        self.residues
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for ResidueSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} R={{{}}}", self.m, self.residues_label())
    }
}

/// Finite set of distinct positive integers, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExplicitSet(Vec<usize>);

impl ExplicitSet {
    pub fn new(parts: &[usize]) -> Result<Self, PartSetError> {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable();
        for (i, &p) in sorted.iter().enumerate() {
            if p == 0 {
                return Err(PartSetError::ZeroPart);
            }
            if i > 0 && sorted[i - 1] == p {
                return Err(PartSetError::DuplicatePart(p));
            }
        }
        Ok(Self(sorted))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }
}

/// Which set of allowed parts to derive from a [`ResidueSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PartSetVariant {
    /// `A`: all positive `a` with `a mod m ∈ R`.
    FullA,
    /// `A⁺`: all `a ≥ m` with `a mod m ∈ R`.
    APlus,
    /// `R⁺ = R \ {0}`.
    RPlus,
    /// `A_r⁺ = {r+m, r+2m, …}`; empty when `r ≥ m`.
    ArPlus(usize),
    /// A finite list independent of the spec.
    Explicit(ExplicitSet),
    /// Every positive integer.
    AllNaturals,
}

impl PartSetVariant {
    /// Short kebab-case name used in reports.
    pub fn label(&self) -> String {
        match self {
            Self::FullA => "full-a".into(),
            Self::APlus => "a-plus".into(),
            Self::RPlus => "r-plus".into(),
            Self::ArPlus(r) => format!("ar-plus-{r}"),
            Self::Explicit(_) => "explicit".into(),
            Self::AllNaturals => "all-naturals".into(),
        }
    }
}

impl fmt::Display for PartSetVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Strictly increasing list of members of the selected set that are `≤ n`.
pub fn parts_up_to(spec: &ResidueSpec, variant: &PartSetVariant, n: usize) -> Vec<usize> {
    let m = spec.m;
    match variant {
        PartSetVariant::FullA => blocks(spec.residues(), m, 0, n),
        PartSetVariant::APlus => blocks(spec.residues(), m, m, n),
        PartSetVariant::RPlus => spec
            .residues
            .iter()
            .copied()
            .filter(|&r| r >= 1 && r <= n)
            .collect(),
        PartSetVariant::ArPlus(r) if *r < m => blocks(&[*r], m, m, n),
        PartSetVariant::ArPlus(_) => Vec::new(),
        PartSetVariant::Explicit(set) => set.0.iter().copied().take_while(|&p| p <= n).collect(),
        PartSetVariant::AllNaturals => (1..=n).collect(),
    }
}

// Members `base + r` for `base = first, first+m, …`, skipping 0.
fn blocks(residues: &[usize], m: usize, first: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut base = first;
    while base <= n {
        for &r in residues {
            let a = base + r;
            if a > n {
                break;
            }
            if a >= 1 {
                out.push(a);
            }
        }
        base = match base.checked_add(m) {
            Some(b) => b,
            None => break,
        };
    }
    out
}

/// Membership test for a single positive integer.
pub fn contains(spec: &ResidueSpec, variant: &PartSetVariant, a: usize) -> bool {
    if a == 0 {
        return false;
    }
    let m = spec.m;
    let in_r = |r: usize| spec.residues.binary_search(&r).is_ok();
    match variant {
        PartSetVariant::FullA => in_r(a % m),
        PartSetVariant::APlus => a >= m && in_r(a % m),
        PartSetVariant::RPlus => a < m && in_r(a),
        PartSetVariant::ArPlus(r) => *r < m && a >= m && a % m == *r,
        PartSetVariant::Explicit(set) => set.0.binary_search(&a).is_ok(),
        PartSetVariant::AllNaturals => true,
    }
}
