//! Upper bounds for the 2-Selmer rank in the two families, lower bounds from rational
//! points, and statistics against computed ranks.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

pub mod lower;
pub mod oracle;
pub mod report;
pub mod sophie;
pub mod stats;
pub mod washington;

pub use lower::{lower_bound_from_points, lower_bound_in_field, LowerBound};
pub use oracle::{bundled_class_groups, ClassGroupRecord, ClassGroupStore, RankRecord, RankStatus, RankStore};
pub use report::{BoundReport, Hypothesis, RhoInfty};
pub use sophie::{sophie_upper_bound, two_inert_in_real_cyclotomic, DEFAULT_SCAN_BOUND};
pub use stats::{parse_intervals, sharpness_stats, SharpnessStats};
pub use washington::{washington_bound, washington_local_certificate, washington_rho_certificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evidence {
    IrreducibleModP,
    EisensteinAfterShift,
    InertByOrder,
    TotallyRamifiedCyclotomic,
}

impl Evidence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Evidence::IrreducibleModP => "irreducible-mod-p",
            Evidence::EisensteinAfterShift => "eisenstein-after-shift",
            Evidence::InertByOrder => "inert-by-order",
            Evidence::TotallyRamifiedCyclotomic => "totally-ramified-cyclotomic",
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence that `f` stays irreducible over `Q_v` for each bad prime `v`,
/// which forces the local group `G_v` to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTrivialityCertificate {
    /// `(v, evidence, whether the check passed)`, ascending in `v`.
    pub entries: Vec<(u64, Evidence, bool)>,
    pub conclusion: bool,
}

impl GTrivialityCertificate {
    pub fn new(mut entries: Vec<(u64, Evidence, bool)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let conclusion = entries.iter().all(|e| e.2);
        GTrivialityCertificate { entries, conclusion }
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn summary(&self) -> String {
        self.entries
            .iter()
            .map(|(v, e, ok)| format!("{v}: {e}{}", if *ok { "" } else { " FAILED" }))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Eisenstein criterion at `v` for ascending integer coefficients.
pub fn is_eisenstein(coeffs: &[BigInt], v: u64) -> bool {
    let v = BigInt::from(v);
    let Some((lead, rest)) = coeffs.split_last() else {
        return false;
    };
    if rest.is_empty() || lead.is_multiple_of(&v) {
        return false;
    }
    rest.iter().all(|c| c.is_multiple_of(&v)) && !(coeffs[0].is_zero() || coeffs[0].is_multiple_of(&(&v * &v)))
}
