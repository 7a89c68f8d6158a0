//! How often the class-group bound equals the computed rank.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::oracle::RankStore;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpRow {
    pub interval: (i64, i64),
    /// Curves in the interval with an exact rank equal to the bound.
    pub sharp: usize,
    /// Curves in the interval with a bound.
    pub total: usize,
}

impl SharpRow {
    pub fn ratio(&self) -> Option<f64> {
        (self.total > 0).then(|| self.sharp as f64 / self.total as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessStats {
    pub sharp: Vec<SharpRow>,
    /// `#(T(r) ∩ B(b))` over curves with exact rank `r` and bound `b`.
    pub cross: BTreeMap<(u32, u32), usize>,
    /// Smallest `m` realising each `(rank, bound)` pair.
    pub first: BTreeMap<(u32, u32), i64>,
}

impl SharpnessStats {
    pub fn ranks(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.cross.keys().map(|k| k.0).collect();
        v.dedup();
        v
    }

    pub fn bounds(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.cross.keys().map(|k| k.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn cell(&self, r: u32, b: u32) -> usize {
        self.cross.get(&(r, b)).copied().unwrap_or(0)
    }

    /// `(#(T(b) ∩ B(b)), #B(b))` with `B(b)` restricted to curves of known rank.
    pub fn diagonal(&self, b: u32) -> (usize, usize) {
        let col: usize = self.cross.iter().filter(|(k, _)| k.1 == b).map(|(_, v)| v).sum();
        (self.cell(b, b), col)
    }

    pub fn render(&self) -> String {
        let mut s = String::from("sharp\n");
        for row in &self.sharp {
            let iv = format!("[{},{}]", row.interval.0, row.interval.1);
            let ratio = row.ratio().map_or("-".to_string(), |r| format!("{r:.5}"));
            let _ = writeln!(s, "{iv:<18}{ratio:>9}{:>9}/{}", row.sharp, row.total);
        }
        let bounds = self.bounds();
        s += "\nrank x bound\n";
        let _ = write!(s, "{:<6}", "r\\b");
        for b in &bounds {
            let _ = write!(s, "{b:>8}");
        }
        s.push('\n');
        for r in self.ranks() {
            let _ = write!(s, "{r:<6}");
            for &b in &bounds {
                let _ = write!(s, "{:>8}", self.cell(r, b));
            }
            s.push('\n');
        }
        s += "\nrank equals bound\n";
        for &b in &bounds {
            let (hit, all) = self.diagonal(b);
            let ratio = if all > 0 { format!("{:.5}", hit as f64 / all as f64) } else { "-".into() };
            let _ = writeln!(s, "b={b:<4}{ratio:>9}{hit:>9}/{all}");
        }
        s += "\nfirst occurrence\n";
        for ((r, b), m) in &self.first {
            let _ = writeln!(s, "{:<10}{m:>8}", format!("({r},{b})"));
        }
        s
    }
}

/// Parses `a..b` items separated by commas; `a..b:w` splits `[a, b]` into blocks of width `w`.
pub fn parse_intervals(spec: &str) -> Result<Vec<(i64, i64)>> {
    let bad = |msg: String| Error::InvalidArgument(format!("interval spec: {msg}"));
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (range, width) = match item.split_once(':') {
            Some((r, w)) => (r, Some(w.parse::<i64>().map_err(|_| bad(format!("bad width in {item:?}")))?)),
            None => (item, None),
        };
        let (a, b) = range.split_once("..").ok_or_else(|| bad(format!("expected a..b, got {item:?}")))?;
        let a: i64 = a.trim().parse().map_err(|_| bad(format!("bad bound in {item:?}")))?;
        let b: i64 = b.trim().parse().map_err(|_| bad(format!("bad bound in {item:?}")))?;
        if a > b {
            return Err(bad(format!("empty interval {item:?}")));
        }
        match width {
            None => out.push((a, b)),
            Some(w) if w > 0 => {
                let mut lo = a;
                while lo <= b {
                    let hi = lo.saturating_add(w - 1).min(b);
                    out.push((lo, hi));
                    lo = hi + 1;
                }
            }
            Some(_) => return Err(bad(format!("width must be positive in {item:?}"))),
        }
    }
    if out.is_empty() {
        return Err(bad("no intervals".into()));
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[1].0 <= w[0].1) {
        return Err(bad("intervals overlap".into()));
    }
    Ok(out)
}

/// Sharp(I) per interval, the rank/bound cross table and first occurrences.
///
/// `bounds` maps `m` to its upper bound; only records with exact status count as sharp.
pub fn sharpness_stats(ranks: &RankStore, bounds: &BTreeMap<i64, u64>, intervals: &[(i64, i64)]) -> Result<SharpnessStats> {
    let mut sorted = intervals.to_vec();
    sorted.sort_unstable();
    if sorted.iter().any(|(a, b)| a > b) || sorted.windows(2).any(|w| w[1].0 <= w[0].1) {
        return Err(Error::InvalidArgument("intervals must be nonempty and disjoint".into()));
    }
    let mut cross = BTreeMap::new();
    let mut first: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for (&m, &b) in bounds {
        let Some(r) = ranks.get(m) else { continue };
        if u64::from(r.lo) > b {
            return Err(Error::InvalidArgument(format!("m={m}: rank at least {} exceeds bound {b}", r.lo)));
        }
        if let Some(rank) = r.exact_rank() {
            let key = (rank, b as u32);
            *cross.entry(key).or_insert(0) += 1;
            first.entry(key).or_insert(m);
        }
    }
    let sharp = intervals
        .iter()
        .map(|&(lo, hi)| {
            let mut row = SharpRow { interval: (lo, hi), sharp: 0, total: 0 };
            for (&m, &b) in bounds.range(lo..=hi) {
                row.total += 1;
                if ranks.get(m).and_then(|r| r.exact_rank()) == Some(b as u32) {
                    row.sharp += 1;
                }
            }
            row
        })
        .collect();
    Ok(SharpnessStats { sharp, cross, first })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> (RankStore, BTreeMap<i64, u64>) {
        let ranks = RankStore::parse(
            "ranks v1\nm=1 status=exact lo=1 hi=1\nm=2 status=exact lo=1 hi=1\nm=4 status=bounds lo=1 hi=3\nm=5 status=exact lo=1 hi=1\nm=11 status=exact lo=3 hi=3\n",
        )
        .unwrap();
        let bounds = [(1, 1), (2, 3), (4, 3), (5, 1), (11, 3)].into_iter().collect();
        (ranks, bounds)
    }

    #[test]
    fn counts() {
        let (ranks, bounds) = data();
        let s = sharpness_stats(&ranks, &bounds, &[(1, 5), (6, 20)]).unwrap();
        assert_eq!(s.sharp[0], SharpRow { interval: (1, 5), sharp: 2, total: 4 });
        assert_eq!(s.sharp[1], SharpRow { interval: (6, 20), sharp: 1, total: 1 });
        assert_eq!(s.cell(1, 1), 2);
        assert_eq!(s.cell(1, 3), 1);
        assert_eq!(s.cell(3, 3), 1);
        assert_eq!(s.diagonal(3), (1, 2));
        assert_eq!(s.first[&(1, 3)], 2);
        assert_eq!(s.first[&(3, 3)], 11);
        let text = s.render();
        assert!(text.contains("[1,5]               0.50000        2/4"), "{text}");
    }

    #[test]
    fn rejects_inconsistent_input() {
        let (ranks, mut bounds) = data();
        assert!(sharpness_stats(&ranks, &bounds, &[(1, 5), (5, 9)]).is_err());
        assert!(sharpness_stats(&ranks, &bounds, &[(5, 1)]).is_err());
        bounds.insert(11, 1);
        assert!(sharpness_stats(&ranks, &bounds, &[(1, 20)]).is_err());
    }

    #[test]
    fn interval_specs() {
        assert_eq!(parse_intervals("1..1000,1001..2000").unwrap(), vec![(1, 1000), (1001, 2000)]);
        assert_eq!(parse_intervals("1..2500:1000").unwrap(), vec![(1, 1000), (1001, 2000), (2001, 2500)]);
        for bad in ["", "1..5,5..9", "5..1", "1-5", "1..5:0", "a..b"] {
            assert!(parse_intervals(bad).is_err(), "{bad}");
        }
    }
}
