//! Hereditarily finite sets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// A hereditarily finite set: a finite set of hereditarily finite sets.
///
/// Ordering is the derived lexicographic order on the sorted element lists; it
/// is only used to keep elements canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HFSet(BTreeSet<HFSet>);

impl HFSet {
    pub fn empty() -> Self {
        HFSet(BTreeSet::new())
    }

    pub fn singleton(x: HFSet) -> Self {
        HFSet(BTreeSet::from([x]))
    }

    pub fn pair(x: HFSet, y: HFSet) -> Self {
        HFSet(BTreeSet::from([x, y]))
    }

    /// The von Neumann ordinal `n = {0, ..., n-1}`.
    pub fn ordinal(n: usize) -> Self {
        let mut current = BTreeSet::new();
        for _ in 0..n {
            let next = HFSet(current.clone());
            current.insert(next);
        }
        HFSet(current)
    }

    /// The Zermelo numeral: `0 = ∅`, `n+1 = {n}`.
    pub fn zermelo(n: usize) -> Self {
        (0..n).fold(HFSet::empty(), |acc, _| HFSet::singleton(acc))
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &HFSet> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.contains(x)
    }

    /// 0 for the empty set, otherwise one more than the largest element rank.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|x| x.rank() + 1).max().unwrap_or(0)
    }

    /// All hereditarily finite sets of rank below `rank` (the stage `V_rank`).
    ///
    /// `V_5` already has 65536 members; `rank` must be at most 4.
    pub fn universe(rank: usize) -> Vec<HFSet> {
        assert!(rank <= 4, "V_{rank} is too large to list");
        let mut stage = vec![];
        for _ in 0..rank {
            stage = subsets_up_to(&stage, stage.len());
        }
        stage
    }

    /// Subsets of `V_rank` with at most `max_len` elements.
    pub fn small_sets(rank: usize, max_len: usize) -> Vec<HFSet> {
        if rank == 0 {
            return vec![];
        }
        subsets_up_to(&HFSet::universe(rank - 1), max_len)
    }
}

/// All subsets of `base` with at most `max_len` elements, by size then
/// lexicographic position.
fn subsets_up_to(base: &[HFSet], max_len: usize) -> Vec<HFSet> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    for k in 0..=max_len.min(base.len()) {
        combinations(base, k, 0, &mut chosen, &mut out);
    }
    out
}

fn combinations(
    base: &[HFSet],
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<HFSet>,
) {
    if chosen.len() == k {
        out.push(HFSet(chosen.iter().map(|&i| base[i].clone()).collect()));
        return;
    }
    for i in start..base.len() {
        chosen.push(i);
        combinations(base, k, i + 1, chosen, out);
        chosen.pop();
    }
}

impl FromIterator<HFSet> for HFSet {
    fn from_iter<I: IntoIterator<Item = HFSet>>(iter: I) -> Self {
        HFSet(iter.into_iter().collect())
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad set literal at byte {pos}")]
pub struct HFParseError {
    pub pos: usize,
}

impl FromStr for HFSet {
    type Err = HFParseError;

    /// Parses nested braces, e.g. `{{}, {{}}}`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes: Vec<(usize, u8)> = s
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        let mut pos = 0;
        let set = parse_set(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(HFParseError { pos: bytes[pos].0 });
        }
        Ok(set)
    }
}

fn parse_set(bytes: &[(usize, u8)], pos: &mut usize) -> Result<HFSet, HFParseError> {
    let at = |p: usize| bytes.get(p).map(|x| x.0).unwrap_or(usize::MAX);
    if bytes.get(*pos).map(|x| x.1) != Some(b'{') {
        return Err(HFParseError { pos: at(*pos) });
    }
    *pos += 1;
    let mut elems = BTreeSet::new();
    if bytes.get(*pos).map(|x| x.1) == Some(b'}') {
        *pos += 1;
        return Ok(HFSet(elems));
    }
    loop {
        elems.insert(parse_set(bytes, pos)?);
        match bytes.get(*pos).map(|x| x.1) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HFSet(elems));
            }
            _ => return Err(HFParseError { pos: at(*pos) }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_have_tower_sizes() {
        let sizes: Vec<usize> = (0..4).map(|r| HFSet::universe(r).len()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 4]);
        assert_eq!(HFSet::universe(4).len(), 16);
    }

    #[test]
    fn small_sets_counts() {
        // subsets of V_4 (16 sets) with at most 3 elements: 1 + 16 + 120 + 560
        assert_eq!(HFSet::small_sets(5, 3).len(), 697);
        assert!(HFSet::small_sets(5, 3)
            .iter()
            .all(|x| x.len() <= 3 && x.rank() < 5));
    }

    #[test]
    fn ordinals_and_numerals() {
        assert_eq!(HFSet::ordinal(0), HFSet::empty());
        assert_eq!(HFSet::ordinal(2).to_string(), "{{}, {{}}}");
        assert_eq!(HFSet::zermelo(2).to_string(), "{{{}}}");
        assert_eq!(HFSet::ordinal(3).rank(), 3);
    }

    #[test]
    fn parse_roundtrip() {
        for x in HFSet::universe(4) {
            assert_eq!(x.to_string().parse::<HFSet>().unwrap(), x);
        }
        assert_eq!("{ {}, {} }".parse::<HFSet>().unwrap().len(), 1);
        assert!("{{}".parse::<HFSet>().is_err());
        assert!("{}x".parse::<HFSet>().is_err());
    }
}
