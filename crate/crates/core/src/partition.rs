//! Partitions and the dictionaries between flag weights and partitions.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::Side;
use crate::rational::{int, Rational};

/// Weakly decreasing sequence of nonnegative integers. Trailing zeros may be
/// stored; comparison and hashing ignore them.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u64>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_parts() == other.canonical_parts()
    }
}

impl Eq for Partition {}

impl Hash for Partition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_parts().hash(state);
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_parts().cmp(other.canonical_parts())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.canonical_parts().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if let Some(k) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} increases at position {}",
                k + 1
            )));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Parses `"3,2,1"`; the empty string is the empty partition.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidPartition(format!("cannot parse {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }

    pub fn canonical_parts(&self) -> &[u64] {
        let len = self.len();
        &self.parts[..len]
    }

    pub fn canonical(&self) -> Partition {
        Partition { parts: self.canonical_parts().to_vec() }
    }

    /// Stored parts, including any padding zeros.
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// `λ_k` with 1-based `k`, zero past the end.
    pub fn part(&self, k: usize) -> u64 {
        if k == 0 {
            return 0;
        }
        self.parts.get(k - 1).copied().unwrap_or(0)
    }

    pub fn first(&self) -> u64 {
        self.part(1)
    }

    /// Young diagram containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && (1..=self.len()).all(|k| self.part(k) <= other.part(k))
    }

    /// Entrywise sum, e.g. `ν + (f^{nd})`.
    pub fn add(&self, other: &Partition) -> Partition {
        let len = self.len().max(other.len());
        Partition { parts: (1..=len).map(|k| self.part(k) + other.part(k)).collect() }
    }

    pub fn scale(&self, r: u64) -> Partition {
        Partition { parts: self.canonical_parts().iter().map(|&p| p * r).collect() }
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.first() as usize;
        Partition {
            parts: (1..=first)
                .map(|c| self.canonical_parts().iter().filter(|&&p| p as usize >= c).count() as u64)
                .collect(),
        }
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.canonical_parts().iter().map(|&p| p as i64).collect()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.parts.iter().map(|&p| int(p as i64)).collect()
    }
}

/// `(b^a)`: `a` parts equal to `b`.
pub fn rectangle(a: usize, b: u64) -> Partition {
    Partition { parts: vec![b; a] }.canonical()
}

pub fn pad(p: &Partition, length: usize) -> Result<Partition> {
    if length < p.len() {
        return Err(Error::PaddingTooShort { length: p.len(), requested: length });
    }
    let mut parts = p.canonical_parts().to_vec();
    parts.resize(length, 0);
    Ok(Partition { parts })
}

/// Every partition of `size` with at most `max_len` parts, each at most
/// `max_part`, in reverse lexicographic order.
pub fn partitions_bounded(size: u64, max_part: u64, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(size, max_part, max_len, &mut current, &mut out);
    out
}

fn fill(remaining: u64, cap: u64, slots: usize, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    if slots == 0 || cap.saturating_mul(slots as u64) < remaining {
        return;
    }
    for p in (1..=cap.min(remaining)).rev() {
        current.push(p);
        fill(remaining - p, p, slots - 1, current, out);
        current.pop();
    }
}

/// Weakly decreasing finite list of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalSequence {
    pub parts: Vec<Rational>,
}

impl RationalSequence {
    pub fn new(parts: Vec<Rational>) -> Result<Self> {
        let seq = RationalSequence { parts };
        if !seq.is_weakly_decreasing() {
            return Err(Error::InvalidPartition(format!(
                "[{}] is not weakly decreasing",
                seq.parts.iter().map(crate::rational::format).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(seq)
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.parts.iter().all(|p| *p >= Rational::zero())
    }

    pub fn total(&self) -> Rational {
        self.parts.iter().sum()
    }

    /// The integer partition, if every entry is a nonnegative integer.
    pub fn to_partition(&self) -> Option<Partition> {
        let parts = self
            .parts
            .iter()
            .map(|p| crate::rational::to_i64(p).and_then(|v| u64::try_from(v).ok()))
            .collect::<Option<Vec<_>>>()?;
        Partition::new(parts).ok()
    }
}

/// Values along a flag, read left to right, for a sequence `p_1 ≥ … ≥ p_r`:
/// `(p1−p2, …, p_{r−1}−p_r, p_r)` on a source flag and
/// `(−p_r, p_r−p_{r−1}, …, p2−p1)` on a sink flag.
pub fn weight_pattern(parts: &[Rational], side: Side) -> Vec<Rational> {
    let r = parts.len();
    let mut source: Vec<Rational> = (0..r)
        .map(|k| {
            let next = parts.get(k + 1).cloned().unwrap_or_else(Rational::zero);
            &parts[k] - next
        })
        .collect();
    match side {
        Side::Source => source,
        Side::Sink => {
            source.reverse();
            source.iter().map(|v| -v).collect()
        }
    }
}

/// [`weight_pattern`] for a partition padded to `flag_len` parts.
pub fn weight_pattern_from_partition(p: &Partition, side: Side, flag_len: usize) -> Result<Vec<Rational>> {
    Ok(weight_pattern(&pad(p, flag_len)?.to_rationals(), side))
}

/// Inverse of [`weight_pattern`]: suffix sums on a source flag, negated sums
/// of the leading entries on a sink flag. No sign check is made.
pub fn partition_from_weight(values: &[Rational], side: Side) -> RationalSequence {
    let mut ordered: Vec<Rational> = values.to_vec();
    if side == Side::Sink {
        ordered.reverse();
        for v in ordered.iter_mut() {
            *v = -v.clone();
        }
    }
    let mut parts = vec![Rational::zero(); ordered.len()];
    let mut acc = Rational::zero();
    for k in (0..ordered.len()).rev() {
        acc += &ordered[k];
        parts[k] = acc.clone();
    }
    RationalSequence { parts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rectangles() {
        assert_eq!(rectangle(3, 2).parts(), [2, 2, 2]);
        assert_eq!(rectangle(2, 0).parts(), [] as [u64; 0]);
        assert_eq!(rectangle(1, 5).parts(), [5]);
    }

    #[test]
    fn padding() {
        assert_eq!(pad(&p(&[2, 1]), 4).unwrap().parts(), [2, 1, 0, 0]);
        assert_eq!(pad(&p(&[]), 2).unwrap().parts(), [0, 0]);
        assert_eq!(pad(&p(&[3]), 1).unwrap().parts(), [3]);
        assert_eq!(
            pad(&p(&[2, 1]), 1),
            Err(Error::PaddingTooShort { length: 2, requested: 1 })
        );
        assert_eq!(pad(&p(&[2, 1]), 4).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn rejects_increasing() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::parse("3, 2,1").is_ok());
        assert!(Partition::parse("").unwrap().is_empty());
    }

    #[test]
    fn patterns() {
        assert_eq!(weight_pattern_from_partition(&p(&[1]), Side::Source, 2).unwrap(), ints(&[1, 0]));
        assert_eq!(weight_pattern_from_partition(&p(&[2, 1]), Side::Sink, 2).unwrap(), ints(&[-1, -1]));
        assert_eq!(weight_pattern_from_partition(&p(&[3, 3, 1]), Side::Source, 3).unwrap(), ints(&[0, 2, 1]));
        assert_eq!(partition_from_weight(&ints(&[1, 0]), Side::Source).parts, ints(&[1, 0]));
        assert_eq!(partition_from_weight(&ints(&[-1, -1]), Side::Sink).parts, ints(&[2, 1]));
        assert_eq!(partition_from_weight(&ints(&[0, 2, 1]), Side::Source).parts, ints(&[3, 3, 1]));
    }

    #[test]
    fn bounded_partitions() {
        let all: Vec<Vec<u64>> = partitions_bounded(4, 4, 4).iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(all, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions_bounded(4, 2, 2).len(), 1);
        assert_eq!(partitions_bounded(0, 0, 0), vec![Partition::empty()]);
    }

    #[test]
    fn conjugation() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[]).conjugate(), p(&[]));
    }

    fn decreasing() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-4i64..5, 0..6).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
    }

    proptest! {
        #[test]
        fn round_trip(parts in decreasing(), sink in any::<bool>()) {
            let side = if sink { Side::Sink } else { Side::Source };
            let values = ints(&parts);
            prop_assert_eq!(partition_from_weight(&weight_pattern(&values, side), side).parts, values);
        }

        #[test]
        fn sign_of_pattern(raw in prop::collection::vec(-3i64..4, 1..6)) {
            let values = ints(&raw);
            let valid = raw.windows(2).all(|w| w[0] >= w[1]) && raw.iter().all(|&x| x >= 0);
            let source_ok = weight_pattern(&values, Side::Source).iter().all(|v| *v >= int(0));
            let sink_ok = weight_pattern(&values, Side::Sink).iter().all(|v| *v <= int(0));
            prop_assert_eq!(source_ok, valid);
            prop_assert_eq!(sink_ok, valid);
        }
    }
}
