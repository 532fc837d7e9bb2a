//! Littlewood–Richardson coefficients: a cell-by-cell tableau count, a
//! horizontal-strip product expansion, an integral hive count, and the
//! Zelevinsky reduction of multiple coefficients to a single one.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{pad, Partition};

/// `c^ν_{λ,μ}` as the number of LR tableaux of shape `ν/λ` and content `μ`.
///
/// Cells are filled row by row, right to left, which is the reading order, so
/// the lattice condition is checked as each entry is placed.
pub fn lr_tableaux(nu: &Partition, lambda: &Partition, mu: &Partition) -> u64 {
    if nu.size() != lambda.size() + mu.size() || !lambda.is_contained_in(nu) {
        return 0;
    }
    let rows = nu.len();
    let nu_parts: Vec<usize> = (1..=rows).map(|k| nu.part(k) as usize).collect();
    let lambda_parts: Vec<usize> = (1..=rows).map(|k| lambda.part(k) as usize).collect();
    let content: Vec<u64> = mu.canonical_parts().to_vec();
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (lambda_parts[r]..nu_parts[r]).rev().map(move |c| (r, c)))
        .collect();
    let mut filling: Vec<Vec<usize>> = nu_parts.iter().map(|&len| vec![0; len]).collect();
    let mut counts = vec![0u64; content.len() + 1];
    let mut search = TableauSearch { cells: &cells, lambda: &lambda_parts, content: &content };
    search.count(0, &mut filling, &mut counts)
}

struct TableauSearch<'a> {
    cells: &'a [(usize, usize)],
    lambda: &'a [usize],
    content: &'a [u64],
}

impl TableauSearch<'_> {
    fn count(&mut self, k: usize, filling: &mut [Vec<usize>], counts: &mut [u64]) -> u64 {
        let Some(&(r, c)) = self.cells.get(k) else {
            return 1;
        };
        let mut hi = self.content.len();
        if c + 1 < filling[r].len() {
            hi = hi.min(filling[r][c + 1]);
        }
        hi = hi.min(r + 1);
        let lo = if r > 0 && c >= self.lambda[r - 1] { filling[r - 1][c] + 1 } else { 1 };
        let mut total = 0;
        for x in lo..=hi {
            if counts[x] >= self.content[x - 1] {
                continue;
            }
            if x > 1 && counts[x] + 1 > counts[x - 1] {
                continue;
            }
            counts[x] += 1;
            filling[r][c] = x;
            total += self.count(k + 1, filling, counts);
            counts[x] -= 1;
        }
        filling[r][c] = 0;
        total
    }
}

/// Limits on the shapes kept in a product expansion.
#[derive(Debug, Clone, Default)]
pub struct ShapeBound {
    pub max_len: Option<usize>,
    pub within: Option<Vec<u64>>,
}

impl ShapeBound {
    pub fn within(p: &Partition) -> Self {
        ShapeBound { max_len: Some(p.len()), within: Some(p.canonical_parts().to_vec()) }
    }

    pub fn max_len(len: usize) -> Self {
        ShapeBound { max_len: Some(len), within: None }
    }

    fn row_cap(&self, r: usize) -> Option<u64> {
        if self.max_len.is_some_and(|m| r >= m) {
            return Some(0);
        }
        self.within.as_ref().map(|w| w.get(r).copied().unwrap_or(0))
    }
}

/// `s_a · s_b = Σ c^κ_{a,b} s_κ`, keeping only shapes allowed by `bound`.
///
/// Content `b` is added one horizontal strip per letter; the lattice
/// condition only couples consecutive letters, through cumulative row counts.
pub fn lr_product(a: &Partition, b: &Partition, bound: &ShapeBound) -> BTreeMap<Partition, u64> {
    let start: Vec<u64> = a.canonical_parts().to_vec();
    if (0..start.len()).any(|r| bound.row_cap(r).is_some_and(|cap| start[r] > cap)) {
        return BTreeMap::new();
    }
    // State: current shape and the per-row counts of the previous letter.
    let mut states: HashMap<(Vec<u64>, Vec<u64>), u64> = HashMap::new();
    states.insert((start, Vec::new()), 1);
    for (letter, &strip) in b.canonical_parts().iter().enumerate() {
        let mut next: HashMap<(Vec<u64>, Vec<u64>), u64> = HashMap::new();
        for ((shape, previous), weight) in states {
            let mut added = Vec::new();
            add_strip(&shape, &previous, letter == 0, strip, bound, 0, 0, 0, &mut added, &mut |new_shape, counts| {
                *next.entry((new_shape, counts)).or_insert(0) += weight;
            });
        }
        states = next;
    }
    let mut out = BTreeMap::new();
    for ((shape, _), weight) in states {
        *out.entry(Partition::new(shape).expect("strips keep shapes decreasing")).or_insert(0) += weight;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn add_strip(
    shape: &[u64],
    previous: &[u64],
    first_letter: bool,
    remaining: u64,
    bound: &ShapeBound,
    row: usize,
    placed: u64,
    previous_before: u64,
    added: &mut Vec<u64>,
    emit: &mut dyn FnMut(Vec<u64>, Vec<u64>),
) {
    if remaining == 0 {
        let mut new_shape = shape.to_vec();
        new_shape.resize(shape.len().max(added.len()), 0);
        for (r, &k) in added.iter().enumerate() {
            new_shape[r] += k;
        }
        while new_shape.last() == Some(&0) {
            new_shape.pop();
        }
        let mut counts = added.clone();
        while counts.last() == Some(&0) {
            counts.pop();
        }
        emit(new_shape, counts);
        return;
    }
    if row > shape.len() {
        return;
    }
    let current = shape.get(row).copied().unwrap_or(0);
    let mut room = if row == 0 { remaining } else { shape[row - 1] - current };
    if let Some(cap) = bound.row_cap(row) {
        room = room.min(cap.saturating_sub(current));
    }
    if !first_letter {
        // Letters in rows 0..=row may not outnumber the previous letter in rows 0..row.
        room = room.min(previous_before.saturating_sub(placed));
    }
    room = room.min(remaining);
    let previous_here = previous.get(row).copied().unwrap_or(0);
    for k in (0..=room).rev() {
        added.push(k);
        add_strip(
            shape,
            previous,
            first_letter,
            remaining - k,
            bound,
            row + 1,
            placed + k,
            previous_before + previous_here,
            added,
            emit,
        );
        added.pop();
    }
}

/// Expansion of `s_{λ(1)} ⋯ s_{λ(r)}` as a fold of [`lr_product`], largest factor first.
pub fn multi_lr_expansion(lambdas: &[Partition], bound: &ShapeBound) -> BTreeMap<Partition, u64> {
    let mut order: Vec<&Partition> = lambdas.iter().collect();
    order.sort_by_key(|p| std::cmp::Reverse(p.size()));
    let mut acc: BTreeMap<Partition, u64> = BTreeMap::new();
    acc.insert(Partition::empty(), 1);
    for lambda in order {
        let mut next = BTreeMap::new();
        for (shape, weight) in &acc {
            for (kappa, c) in lr_product(shape, lambda, bound) {
                *next.entry(kappa).or_insert(0) += weight * c;
            }
        }
        acc = next;
    }
    acc
}

/// `c^ν_{λ(1),…,λ(r)}`; intermediate shapes are kept inside `ν`.
pub fn multi_lr(nu: &Partition, lambdas: &[Partition]) -> u64 {
    let total: u64 = lambdas.iter().map(Partition::size).sum();
    if total != nu.size() {
        return 0;
    }
    multi_lr_expansion(lambdas, &ShapeBound::within(nu))
        .get(nu)
        .copied()
        .unwrap_or(0)
}

/// `c^ν_{λ(1),…,λ(r)}` by folding [`lr_tableaux`] over intermediate shapes.
pub fn multi_lr_by_tableaux(nu: &Partition, lambdas: &[Partition]) -> u64 {
    match lambdas {
        [] => u64::from(nu.is_empty()),
        [only] => u64::from(only == nu),
        [rest @ .., last] => {
            let inner_size = nu.size().saturating_sub(last.size());
            if nu.size() < last.size() {
                return 0;
            }
            crate::partition::partitions_bounded(inner_size, nu.first(), nu.len())
                .into_iter()
                .filter(|kappa| kappa.is_contained_in(nu))
                .map(|kappa| {
                    let c = lr_tableaux(nu, &kappa, last);
                    if c == 0 {
                        0
                    } else {
                        c * multi_lr_by_tableaux(&kappa, rest)
                    }
                })
                .sum()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZelevinskyPair {
    pub lambda_tilde: Partition,
    pub mu_tilde: Partition,
    /// Block length `N`.
    pub block: usize,
    /// Number of blocks `r`.
    pub r: usize,
}

/// Block `j` of `μ̃` repeats `Σ_{k>j} λ_1(k)`; block `j` of `λ̃` is `λ(j) + μ̃`.
pub fn zelevinsky_reduce(lambdas: &[Partition], length: usize) -> Result<ZelevinskyPair> {
    let r = lambdas.len();
    let mut mu = Vec::with_capacity(r * length);
    let mut lambda = Vec::with_capacity(r * length);
    for (j, part) in lambdas.iter().enumerate() {
        let padded = pad(part, length)?;
        let shift: u64 = lambdas[j + 1..].iter().map(Partition::first).sum();
        for &p in padded.parts() {
            mu.push(shift);
            lambda.push(p + shift);
        }
    }
    Ok(ZelevinskyPair {
        lambda_tilde: Partition::new(lambda).expect("staircase blocks decrease"),
        mu_tilde: Partition::new(mu).expect("staircase blocks decrease"),
        block: length,
        r,
    })
}

/// Number of integral `N`-hives with border `λ` on the left, `μ` on the right
/// and `ν` along the bottom.
///
/// Hives are enumerated as height functions `H(i,j)` (level `i`, position
/// `0 ≤ j ≤ N−i`), one level at a time. Going from level `i` to `i+1` the
/// horizontal labels interlace, `g_{i,j+1} ≤ g_{i+1,j} ≤ g_{i,j}`, and the
/// left-leaning labels obey `e_{i,j} ≤ e_{i−1,j+1}`.
pub fn lr_hive_count(nu: &Partition, lambda: &Partition, mu: &Partition, size: usize) -> Result<u64> {
    let longest = nu.len().max(lambda.len()).max(mu.len());
    if size < longest || size == 0 {
        return Err(Error::Precondition(format!(
            "hive size {size} is smaller than the longest partition ({longest})"
        )));
    }
    if nu.size() != lambda.size() + mu.size() {
        return Ok(0);
    }
    let border = HiveBorder::new(nu, lambda, mu, size);
    let mut levels: Vec<Vec<i64>> = vec![border.bottom.clone()];
    Ok(border.count_from(&mut levels))
}

struct HiveBorder {
    size: usize,
    bottom: Vec<i64>,
    left: Vec<i64>,
    right: Vec<i64>,
}

impl HiveBorder {
    fn new(nu: &Partition, lambda: &Partition, mu: &Partition, size: usize) -> Self {
        let mut bottom = vec![0i64; size + 1];
        for k in 1..=size {
            bottom[k] = bottom[k - 1] + nu.part(k) as i64;
        }
        let mut left = vec![0i64; size + 1];
        for i in 1..=size {
            left[i] = left[i - 1] + lambda.part(i) as i64;
        }
        // right[k] = H(k, N−k) = |ν| − (μ_N + … + μ_{N−k+1})
        let mut right = vec![bottom[size]; size + 1];
        for k in 1..=size {
            right[k] = right[k - 1] - mu.part(size + 1 - k) as i64;
        }
        HiveBorder { size, bottom, left, right }
    }

    fn count_from(&self, levels: &mut Vec<Vec<i64>>) -> u64 {
        let i = levels.len() - 1;
        if i == self.size {
            return 1;
        }
        let next_len = self.size - i;
        let (start, end) = (self.left[i + 1], self.right[i + 1]);
        if next_len == 1 && start != end {
            return 0;
        }
        let mut row = vec![0i64; next_len];
        row[0] = start;
        row[next_len - 1] = end;
        if !self.admissible(levels, &row, 0, start) {
            return 0;
        }
        let mut total = 0;
        self.fill(levels, &mut row, 1, &mut total);
        total
    }

    fn fill(&self, levels: &mut Vec<Vec<i64>>, row: &mut Vec<i64>, j: usize, total: &mut u64) {
        let i = levels.len() - 1;
        let len = row.len();
        let cur = &levels[i];
        if j + 1 >= len {
            // The last position is fixed by the border.
            if len >= 2 && !self.admissible(levels, row, len - 1, row[len - 1]) {
                return;
            }
            levels.push(row.clone());
            *total += self.count_from(levels);
            levels.pop();
            return;
        }
        let g = |k: usize| cur[k + 1] - cur[k];
        let prev = row[j - 1];
        let mut lo = prev + g(j);
        let mut hi = prev + g(j - 1);
        // Reach the fixed end: remaining steps k = j..len−2 use g(k+1) ≤ step ≤ g(k).
        let rest_lo: i64 = (j..len - 1).map(|k| g(k + 1)).sum();
        let rest_hi: i64 = (j..len - 1).map(g).sum();
        lo = lo.max(row[len - 1] - rest_hi);
        hi = hi.min(row[len - 1] - rest_lo);
        // e_{i,j} ≥ 0 and f_{i,j} ≥ 0
        lo = lo.max(cur[j]);
        hi = hi.min(cur[j + 1]);
        if i >= 1 {
            let above = &levels[i - 1];
            hi = hi.min(cur[j] + (cur[j + 1] - above[j + 1]));
        }
        for h in lo..=hi {
            row[j] = h;
            self.fill(levels, row, j + 1, total);
        }
    }

    /// Checks a border-fixed height on level `i+1` at position `j`.
    fn admissible(&self, levels: &[Vec<i64>], row: &[i64], j: usize, h: i64) -> bool {
        let i = levels.len() - 1;
        let cur = &levels[i];
        if h < cur[j] || h > cur[j + 1] {
            return false;
        }
        if j >= 1 {
            let step = h - row[j - 1];
            if step < cur[j + 1] - cur[j] || step > cur[j] - cur[j - 1] {
                return false;
            }
        }
        if i >= 1 {
            let above = &levels[i - 1];
            if h - cur[j] > cur[j + 1] - above[j + 1] {
                return false;
            }
        }
        true
    }
}

/// Edge labels of one hive, indexed as `e[i][j]`, `f[i][j]`, `g[i][j]` for the
/// upward triangle `(i,j)`, `i + j ≤ N − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hive {
    pub size: usize,
    pub e: Vec<Vec<i64>>,
    pub f: Vec<Vec<i64>>,
    pub g: Vec<Vec<i64>>,
}

impl Hive {
    /// Labels read off a height function `heights[i][j]`, `0 ≤ j ≤ N − i`.
    pub fn from_heights(heights: &[Vec<i64>]) -> Self {
        let size = heights.len() - 1;
        let mut e = Vec::with_capacity(size);
        let mut f = Vec::with_capacity(size);
        let mut g = Vec::with_capacity(size);
        for i in 0..size {
            let width = size - i;
            e.push((0..width).map(|j| heights[i + 1][j] - heights[i][j]).collect());
            f.push((0..width).map(|j| heights[i][j + 1] - heights[i + 1][j]).collect());
            g.push((0..width).map(|j| heights[i][j + 1] - heights[i][j]).collect());
        }
        Hive { size, e, f, g }
    }

    /// Triangle equalities and rhombus inequalities, both forms of each rhombus.
    pub fn is_valid(&self) -> bool {
        let n = self.size;
        let (e, f, g) = (&self.e, &self.f, &self.g);
        for i in 0..n {
            for j in 0..n - i {
                if e[i][j] + f[i][j] != g[i][j] {
                    return false;
                }
                if i + j + 2 <= n && f[i][j] + e[i][j + 1] != g[i + 1][j] {
                    return false;
                }
                if i + j + 2 <= n && (e[i + 1][j] > e[i][j + 1] || f[i][j] > f[i + 1][j]) {
                    return false;
                }
                if j >= 1 && (g[i][j] > g[i + 1][j - 1] || f[i][j] > f[i][j - 1]) {
                    return false;
                }
                if i + j + 2 <= n && (e[i][j + 1] > e[i][j] || g[i + 1][j] > g[i][j]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_integral_hive(&self) -> bool {
        self.e.iter().chain(&self.f).chain(&self.g).flatten().all(|&v| v >= 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn tableaux_examples() {
        assert_eq!(lr_tableaux(&p(&[]), &p(&[]), &p(&[])), 1);
        assert_eq!(lr_tableaux(&p(&[2]), &p(&[1]), &p(&[1])), 1);
        assert_eq!(lr_tableaux(&p(&[3, 2, 1]), &p(&[2, 1]), &p(&[2, 1])), 2);
        assert_eq!(lr_tableaux(&p(&[2, 2]), &p(&[2, 1]), &p(&[2, 1])), 0);
        assert_eq!(lr_tableaux(&p(&[2, 1]), &p(&[3]), &p(&[])), 0);
        for (kappa, c) in lr_product(&p(&[2, 1]), &p(&[2, 1, 1]), &ShapeBound::default()) {
            assert_eq!(lr_tableaux(&kappa, &p(&[2, 1]), &p(&[2, 1, 1])), c);
        }
    }

    #[test]
    fn hive_examples() {
        assert_eq!(lr_hive_count(&p(&[5]), &p(&[2]), &p(&[3]), 1).unwrap(), 1);
        assert_eq!(lr_hive_count(&p(&[3, 2, 1]), &p(&[2, 1]), &p(&[2, 1]), 3).unwrap(), 2);
        assert_eq!(lr_hive_count(&p(&[2, 2]), &p(&[2, 1]), &p(&[2, 1]), 2).unwrap(), 0);
        assert_eq!(lr_hive_count(&p(&[2, 1]), &p(&[1]), &p(&[1, 1]), 1), Err(Error::Precondition(
            "hive size 1 is smaller than the longest partition (2)".into()
        )));
    }

    #[test]
    fn multi_examples() {
        assert_eq!(multi_lr(&p(&[2, 1]), &[p(&[2, 1])]), 1);
        assert_eq!(multi_lr(&p(&[2, 1]), &[p(&[3])]), 0);
        assert_eq!(multi_lr(&p(&[2, 1]), &[p(&[1]), p(&[1]), p(&[1])]), 2);
        assert_eq!(multi_lr(&p(&[2, 2]), &[p(&[1, 1]), p(&[1, 1])]), 1);
        assert_eq!(multi_lr_by_tableaux(&p(&[2, 1]), &[p(&[1]), p(&[1]), p(&[1])]), 2);
    }

    #[test]
    fn zelevinsky_examples() {
        let z = zelevinsky_reduce(&[p(&[2, 1]), p(&[1])], 2).unwrap();
        assert_eq!(z.mu_tilde.parts(), [1, 1, 0, 0]);
        assert_eq!(z.lambda_tilde.parts(), [3, 2, 1, 0]);
        let z = zelevinsky_reduce(&[p(&[1]), p(&[1])], 1).unwrap();
        assert_eq!(z.mu_tilde.parts(), [1, 0]);
        assert_eq!(z.lambda_tilde.parts(), [2, 1]);
        let z = zelevinsky_reduce(&[p(&[3, 1])], 4).unwrap();
        assert!(z.mu_tilde.is_empty());
        assert_eq!(z.lambda_tilde.parts(), [3, 1, 0, 0]);
        assert!(zelevinsky_reduce(&[p(&[1, 1, 1])], 2).is_err());
    }

    #[test]
    fn product_matches_tableaux() {
        let a = p(&[2, 1]);
        let b = p(&[2, 1]);
        let product = lr_product(&a, &b, &ShapeBound::default());
        for (kappa, c) in &product {
            assert_eq!(*c, lr_tableaux(kappa, &a, &b), "shape {kappa}");
        }
        // s42 + s411 + s33 + 2 s321 + s3111 + s222 + s2211
        assert_eq!(product.len(), 7);
        assert_eq!(product.values().sum::<u64>(), 8);
        let capped = lr_product(&a, &b, &ShapeBound::max_len(2));
        assert_eq!(capped.keys().cloned().collect::<Vec<_>>(), [p(&[3, 3]), p(&[4, 2])]);
    }

    #[test]
    fn hive_from_heights_is_valid() {
        // The unique hive for ν=(2), λ=(1), μ=(1), N=2.
        let heights = vec![vec![0, 2, 2], vec![1, 2], vec![1]];
        let hive = Hive::from_heights(&heights);
        assert!(hive.is_valid());
        assert!(hive.is_integral_hive());
    }
}
