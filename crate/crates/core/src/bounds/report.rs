//! Bound reports: one machine-readable line per curve plus a readable block.

use std::fmt::Write as _;

use super::GTrivialityCertificate;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoInfty {
    /// Certified zero.
    Zero,
    /// Known nonzero; the combined bound `rho_infty + j_infty <= p - 1` is used.
    AtMostPMinusOne,
    /// Not determined; the same combined bound is used.
    Unknown,
}

impl RhoInfty {
    pub fn token(&self) -> &'static str {
        match self {
            RhoInfty::Zero => "0",
            RhoInfty::AtMostPMinusOne => "pm1",
            RhoInfty::Unknown => "unk",
        }
    }

    fn from_token(s: &str) -> Option<Self> {
        Some(match s {
            "0" => RhoInfty::Zero,
            "pm1" => RhoInfty::AtMostPMinusOne,
            "unk" => RhoInfty::Unknown,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Hypothesis {
    GTrivial,
    RhoInftyCertified,
    OrderOfTwoEven,
    TwoInert,
    QBelowScanBound,
    DavisTausskyAssumed,
    NarrowDataMissing,
    LowerPartial,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 8] = [
        Hypothesis::GTrivial,
        Hypothesis::RhoInftyCertified,
        Hypothesis::OrderOfTwoEven,
        Hypothesis::TwoInert,
        Hypothesis::QBelowScanBound,
        Hypothesis::DavisTausskyAssumed,
        Hypothesis::NarrowDataMissing,
        Hypothesis::LowerPartial,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            Hypothesis::GTrivial => "g-trivial",
            Hypothesis::RhoInftyCertified => "rho-inf-certified",
            Hypothesis::OrderOfTwoEven => "order-of-2-even",
            Hypothesis::TwoInert => "2-inert",
            Hypothesis::QBelowScanBound => "q-below-scan-bound",
            Hypothesis::DavisTausskyAssumed => "davis-taussky-assumed",
            Hypothesis::NarrowDataMissing => "narrow-data-missing",
            Hypothesis::LowerPartial => "lower-partial",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|h| h.token() == s)
    }

    fn describe(&self) -> &'static str {
        match self {
            Hypothesis::GTrivial => "f irreducible over Q_v at every bad prime",
            Hypothesis::RhoInftyCertified => "totally positive units are squares",
            Hypothesis::OrderOfTwoEven => "order of 2 mod p even, so Cl+ and Cl have equal 2-rank",
            Hypothesis::TwoInert => "2 inert in Q(zeta_p)^+",
            Hypothesis::QBelowScanBound => "signature matrix of the cyclotomic unit has full rank",
            Hypothesis::DavisTausskyAssumed => "Davis-Taussky conjecture assumed (conditional)",
            Hypothesis::NarrowDataMissing => "narrow class group unknown, bounded by cl2 + g",
            Hypothesis::LowerPartial => "lower bound from a truncated class set",
        }
    }
}

/// The class-group term of a bound and where its value came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupTerm {
    pub value: u64,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// `wash:<m>` or `sophie:<q>`.
    pub curve: String,
    pub genus: u64,
    pub rho_infty: RhoInfty,
    /// Bound for `j_infty`, or for `j_infty + rho_infty` when `rho_infty` is not zero.
    pub j_infty_bound: u64,
    pub cl2: ClassGroupTerm,
    pub g_kernel_dim: u64,
    pub upper_bound: u64,
    pub lower_bound: Option<u64>,
    pub hypotheses: Vec<Hypothesis>,
    pub certificate: Option<GTrivialityCertificate>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn is_conditional(&self) -> bool {
        self.hypotheses.contains(&Hypothesis::DavisTausskyAssumed)
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "curve={} g={} rho_inf={} cl2={} upper={}",
            self.curve,
            self.genus,
            self.rho_infty.token(),
            self.cl2.value,
            self.upper_bound
        );
        if let Some(l) = self.lower_bound {
            let _ = write!(s, " lower={l}");
        }
        let hyps: Vec<&str> = self.hypotheses.iter().map(|h| h.token()).collect();
        let _ = write!(s, " hyps={}", if hyps.is_empty() { "none".to_string() } else { hyps.join(",") });
        s
    }

    pub fn verbose_block(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "curve {}", self.curve);
        let _ = writeln!(s, "  genus            {}", self.genus);
        let rho = match self.rho_infty {
            RhoInfty::Zero => "0".to_string(),
            RhoInfty::AtMostPMinusOne => "nonzero (j_infty + rho_infty <= p - 1)".to_string(),
            RhoInfty::Unknown => "unknown (j_infty + rho_infty <= p - 1)".to_string(),
        };
        let _ = writeln!(s, "  rho_infty        {rho}");
        let _ = writeln!(s, "  j_infty bound    {}", self.j_infty_bound);
        let _ = writeln!(s, "  class group term {} ({})", self.cl2.value, self.cl2.provenance);
        let _ = writeln!(s, "  G kernel dim     {}", self.g_kernel_dim);
        if let Some(c) = &self.certificate {
            let _ = writeln!(s, "  bad primes       {}", c.summary());
        }
        let _ = writeln!(s, "  upper bound      {}", self.upper_bound);
        if let Some(l) = self.lower_bound {
            let _ = writeln!(s, "  lower bound      {l}");
        }
        for h in &self.hypotheses {
            let _ = writeln!(s, "  hypothesis       {}: {}", h.token(), h.describe());
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note             {n}");
        }
        s
    }
}

/// The fields recoverable from a report line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundLine {
    pub curve: String,
    pub genus: u64,
    pub rho_infty: RhoInfty,
    pub cl2: u64,
    pub upper_bound: u64,
    pub lower_bound: Option<u64>,
    pub hypotheses: Vec<Hypothesis>,
}

impl BoundLine {
    pub fn parse(line: &str, line_no: usize) -> Result<Self> {
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let mut fields = std::collections::BTreeMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| err(format!("malformed field {tok:?}")))?;
            if !["curve", "g", "rho_inf", "cl2", "upper", "lower", "hyps"].contains(&k) {
                return Err(err(format!("unknown field {k:?}")));
            }
            if fields.insert(k, v).is_some() {
                return Err(err(format!("repeated field {k:?}")));
            }
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing {k}=")));
        let num = |k: &str| -> Result<u64> {
            let v = get(k)?;
            v.parse().map_err(|_| err(format!("{k}: bad integer {v:?}")))
        };
        let hyps = match get("hyps")? {
            "none" => Vec::new(),
            h => h
                .split(',')
                .map(|t| Hypothesis::from_token(t).ok_or_else(|| err(format!("unknown hypothesis {t:?}"))))
                .collect::<Result<_>>()?,
        };
        let rho = get("rho_inf")?;
        Ok(BoundLine {
            curve: get("curve")?.to_string(),
            genus: num("g")?,
            rho_infty: RhoInfty::from_token(rho).ok_or_else(|| err(format!("rho_inf: bad value {rho:?}")))?,
            cl2: num("cl2")?,
            upper_bound: num("upper")?,
            lower_bound: if fields.contains_key("lower") { Some(num("lower")?) } else { None },
            hypotheses: hyps,
        })
    }

    /// `m` for a `wash:<m>` curve.
    pub fn washington_m(&self) -> Option<i64> {
        self.curve.strip_prefix("wash:")?.parse().ok()
    }
}

/// Parses a file of report lines, skipping blank lines and `#` comments.
pub fn parse_bound_lines(text: &str) -> Result<Vec<BoundLine>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| BoundLine::parse(l, i + 1))
        .collect()
}
