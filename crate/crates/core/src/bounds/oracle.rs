//! Ingested external data: class-group 2-ranks and computed curve ranks.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;

use crate::arith::poly::RationalPoly;
use crate::error::{Error, Result};

pub const CLGROUP_HEADER: &str = "clgroup v1";
pub const RANKS_HEADER: &str = "ranks v1";

/// Canonical key of a field: integer coefficients of its monic defining polynomial, ascending.
pub type FieldKey = Vec<BigInt>;

pub fn field_key(f: &RationalPoly) -> Result<FieldKey> {
    f.to_integer_coeffs()
        .ok_or_else(|| Error::InvalidArgument(format!("{f} has non-integral coefficients")))
}

pub fn format_key(key: &[BigInt]) -> String {
    key.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupRecord {
    pub key: FieldKey,
    pub cl2_rank: u32,
    pub narrow_cl2_rank: Option<u32>,
    pub source: String,
}

impl ClassGroupRecord {
    pub fn line(&self) -> String {
        let mut s = format!("poly={} cl2={}", format_key(&self.key), self.cl2_rank);
        if let Some(n) = self.narrow_cl2_rank {
            s += &format!(" narrow_cl2={n}");
        }
        s + &format!(" source={}", self.source)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassGroupStore {
    records: BTreeMap<FieldKey, ClassGroupRecord>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_uint(line: usize, field: &str, v: &str) -> Result<u32> {
    v.parse()
        .map_err(|_| parse_err(line, format!("{field}: expected a non-negative integer, got {v:?}")))
}

/// Iterates `(line number, content)` over data lines after the header check.
fn data_lines<'a>(text: &'a str, header: &str) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        None => return Ok(None.into_iter().flatten()),
        Some((_, h)) if h == header => {}
        Some((n, h)) => return Err(parse_err(n, format!("expected header {header:?}, got {h:?}"))),
    }
    Ok(Some(lines).into_iter().flatten())
}

impl ClassGroupStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut store = Self::new();
        for (n, line) in data_lines(text, CLGROUP_HEADER)? {
            let (head, source) = match line.find("source=") {
                Some(i) => (&line[..i], line[i + "source=".len()..].trim().to_string()),
                None => return Err(parse_err(n, "missing source=")),
            };
            let (mut poly, mut cl2, mut narrow) = (None, None, None);
            for tok in head.split_whitespace() {
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| parse_err(n, format!("malformed field {tok:?}")))?;
                match k {
                    "poly" => {
                        let coeffs = v
                            .split(',')
                            .map(|c| c.trim().parse::<BigInt>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| parse_err(n, format!("poly: bad coefficient list {v:?}")))?;
                        poly = Some(coeffs);
                    }
                    "cl2" => cl2 = Some(parse_uint(n, k, v)?),
                    "narrow_cl2" => narrow = Some(parse_uint(n, k, v)?),
                    _ => return Err(parse_err(n, format!("unknown field {k:?}"))),
                }
            }
            let key = poly.ok_or_else(|| parse_err(n, "missing poly="))?;
            if key.len() < 2 || key.last() != Some(&BigInt::from(1)) {
                return Err(parse_err(n, "poly must be monic of degree at least 1"));
            }
            let record = ClassGroupRecord {
                key,
                cl2_rank: cl2.ok_or_else(|| parse_err(n, "missing cl2="))?,
                narrow_cl2_rank: narrow,
                source,
            };
            store.insert(record).map_err(|e| parse_err(n, e.to_string()))?;
        }
        Ok(store)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Adds a record; an identical duplicate is accepted, a conflicting one is not.
    pub fn insert(&mut self, r: ClassGroupRecord) -> Result<()> {
        if let Some(n) = r.narrow_cl2_rank {
            if n < r.cl2_rank {
                return Err(Error::InvalidArgument(format!(
                    "narrow_cl2 = {n} is smaller than cl2 = {}",
                    r.cl2_rank
                )));
            }
        }
        if let Some(old) = self.records.get(&r.key) {
            if old.cl2_rank != r.cl2_rank || old.narrow_cl2_rank != r.narrow_cl2_rank {
                return Err(Error::InvalidArgument(format!(
                    "conflicting records for poly={}",
                    format_key(&r.key)
                )));
            }
            return Ok(());
        }
        self.records.insert(r.key.clone(), r);
        Ok(())
    }

    pub fn get(&self, key: &[BigInt]) -> Option<&ClassGroupRecord> {
        self.records.get(key)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &ClassGroupRecord> {
        self.records.values()
    }

    pub fn merge(&mut self, other: &ClassGroupStore) -> Result<()> {
        for r in other.records() {
            self.insert(r.clone())?;
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("{CLGROUP_HEADER}\n");
        for r in self.records() {
            s += &r.line();
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankStatus {
    Exact,
    Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankRecord {
    pub m: i64,
    pub status: RankStatus,
    pub lo: u32,
    pub hi: u32,
}

impl RankRecord {
    pub fn exact_rank(&self) -> Option<u32> {
        (self.status == RankStatus::Exact).then_some(self.lo)
    }

    pub fn line(&self) -> String {
        let st = match self.status {
            RankStatus::Exact => "exact",
            RankStatus::Bounds => "bounds",
        };
        format!("m={} status={st} lo={} hi={}", self.m, self.lo, self.hi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankStore {
    records: BTreeMap<i64, RankRecord>,
}

impl RankStore {
    pub fn parse(text: &str) -> Result<Self> {
        let mut store = RankStore::default();
        for (n, line) in data_lines(text, RANKS_HEADER)? {
            let (mut m, mut status, mut lo, mut hi) = (None, None, None, None);
            for tok in line.split_whitespace() {
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| parse_err(n, format!("malformed field {tok:?}")))?;
                match k {
                    "m" => m = Some(v.parse::<i64>().map_err(|_| parse_err(n, format!("m: bad integer {v:?}")))?),
                    "status" => {
                        status = Some(match v {
                            "exact" => RankStatus::Exact,
                            "bounds" => RankStatus::Bounds,
                            _ => return Err(parse_err(n, format!("status: expected exact or bounds, got {v:?}"))),
                        })
                    }
                    "lo" => lo = Some(parse_uint(n, k, v)?),
                    "hi" => hi = Some(parse_uint(n, k, v)?),
                    _ => return Err(parse_err(n, format!("unknown field {k:?}"))),
                }
            }
            let r = RankRecord {
                m: m.ok_or_else(|| parse_err(n, "missing m="))?,
                status: status.ok_or_else(|| parse_err(n, "missing status="))?,
                lo: lo.ok_or_else(|| parse_err(n, "missing lo="))?,
                hi: hi.ok_or_else(|| parse_err(n, "missing hi="))?,
            };
            if r.lo > r.hi {
                return Err(parse_err(n, "lo exceeds hi"));
            }
            if r.status == RankStatus::Exact && r.lo != r.hi {
                return Err(parse_err(n, "exact record needs lo = hi"));
            }
            if let Some(old) = store.records.get(&r.m) {
                if *old != r {
                    return Err(parse_err(n, format!("conflicting records for m={}", r.m)));
                }
            }
            store.records.insert(r.m, r);
        }
        Ok(store)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, m: i64) -> Option<&RankRecord> {
        self.records.get(&m)
    }

    pub fn records(&self) -> impl Iterator<Item = &RankRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("{RANKS_HEADER}\n");
        for r in self.records() {
            s += &r.line();
            s.push('\n');
        }
        s
    }
}

/// Class groups bundled with the crate: the fixtures for three Washington fields
/// and `Q(zeta_q)^+` for small Sophie Germain `q`.
pub fn bundled_class_groups() -> ClassGroupStore {
    let mut store = ClassGroupStore::parse(include_str!("../../data/washington_fixtures.clg")).expect("bundled data");
    store
        .merge(&ClassGroupStore::parse(include_str!("../../data/cyclotomic_plus.clg")).expect("bundled data"))
        .expect("bundled data is consistent");
    store
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records() {
        let text = "clgroup v1\n# comment\n\npoly=1,-146,143,1 cl2=4 source=Z/2+Z/2+Z/4+Z/4 (Magma)\npoly=1,-2,-1,1 cl2=0 narrow_cl2=0 source=h=1\n";
        let s = ClassGroupStore::parse(text).unwrap();
        assert_eq!(s.len(), 2);
        let key: Vec<BigInt> = [1, -146, 143, 1].iter().map(|&c| BigInt::from(c)).collect();
        let r = s.get(&key).unwrap();
        assert_eq!(r.cl2_rank, 4);
        assert_eq!(r.source, "Z/2+Z/2+Z/4+Z/4 (Magma)");
        assert_eq!(ClassGroupStore::parse(&s.serialize()).unwrap(), s);
    }

    #[test]
    fn empty_file_is_empty_store() {
        assert!(ClassGroupStore::parse("").unwrap().is_empty());
        assert!(ClassGroupStore::parse("clgroup v1\n").unwrap().is_empty());
        assert!(RankStore::parse("ranks v1\n").unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            "clgroup v2\n",
            "clgroup v1\npoly=1,1 cl2=0\n",
            "clgroup v1\npoly=1,1 cl2=0 colour=red source=x\n",
            "clgroup v1\npoly=1,1 cl2=2 narrow_cl2=1 source=x\n",
            "clgroup v1\npoly=1,1 cl2=2 source=x\npoly=1,1 cl2=3 source=y\n",
            "clgroup v1\npoly=1,2 cl2=0 source=x\n",
            "clgroup v1\ncl2=0 source=x\n",
        ];
        for b in bad {
            assert!(matches!(ClassGroupStore::parse(b), Err(Error::Parse { .. })), "{b}");
        }
        let e = ClassGroupStore::parse("clgroup v1\n\npoly=1,1 cl2=x source=s\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        // identical duplicates are fine
        assert_eq!(
            ClassGroupStore::parse("clgroup v1\npoly=1,1 cl2=2 source=x\npoly=1,1 cl2=2 source=y\n")
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn rank_records() {
        let s = RankStore::parse("ranks v1\nm=1 status=exact lo=1 hi=1\nm=5 status=bounds lo=1 hi=3\n").unwrap();
        assert_eq!(s.get(1).unwrap().exact_rank(), Some(1));
        assert_eq!(s.get(5).unwrap().exact_rank(), None);
        assert_eq!(RankStore::parse(&s.serialize()).unwrap(), s);
        for b in [
            "ranks v1\nm=1 status=exact lo=1 hi=3\n",
            "ranks v1\nm=1 status=maybe lo=1 hi=1\n",
            "ranks v1\nm=1 status=bounds lo=3 hi=1\n",
            "ranks v1\nm=1 status=exact lo=1 hi=1 extra=2\n",
            "ranks v1\nm=1 status=exact lo=1 hi=1\nm=1 status=exact lo=3 hi=3\n",
        ] {
            assert!(RankStore::parse(b).is_err(), "{b}");
        }
    }

    #[test]
    fn bundled_data_loads() {
        let s = bundled_class_groups();
        assert!(s.len() >= 10);
    }
}
