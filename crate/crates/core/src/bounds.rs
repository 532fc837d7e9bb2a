//! Interval propagation over integer linear rows, with an exact lattice-point
//! counter and a first-point search built on it.
//!
//! Rows are `Σ a_k x_k ≤ b` or `= b` with integer data. In [`Mode::Real`] only
//! unit coefficients produce bounds, so every derived bound also holds for real
//! solutions and a conflict certifies that the rational system is empty.

use crate::error::{Error, Result};

/// Stand-in for an infinite bound.
pub const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntRow {
    pub coeffs: Vec<(usize, i64)>,
    pub rhs: i64,
    pub kind: RowKind,
}

impl IntRow {
    pub fn le(coeffs: Vec<(usize, i64)>, rhs: i64) -> Self {
        IntRow { coeffs, rhs, kind: RowKind::Le }
    }

    pub fn eq(coeffs: Vec<(usize, i64)>, rhs: i64) -> Self {
        IntRow { coeffs, rhs, kind: RowKind::Eq }
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let lhs: i128 = self.coeffs.iter().map(|&(v, a)| a as i128 * x[v] as i128).sum();
        match self.kind {
            RowKind::Le => lhs <= self.rhs as i128,
            RowKind::Eq => lhs == self.rhs as i128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSystem {
    pub num_vars: usize,
    pub rows: Vec<IntRow>,
    /// Initial lower bounds, `0` for nonnegative variables or `-INF`.
    pub lower: Vec<i64>,
}

impl IntSystem {
    pub fn nonnegative(num_vars: usize, rows: Vec<IntRow>) -> Self {
        IntSystem { num_vars, rows, lower: vec![0; num_vars] }
    }

    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.lower).all(|(v, lo)| v >= lo)
            && self.rows.iter().all(|r| r.holds(x))
    }

    fn var_rows(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_vars];
        for (r, row) in self.rows.iter().enumerate() {
            for &(v, _) in &row.coeffs {
                out[v].push(r);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Integer,
    Real,
}

/// Raised when some variable's interval becomes empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conflict {
    pub row: Option<usize>,
}

pub struct Propagator<'a> {
    system: &'a IntSystem,
    var_rows: Vec<Vec<usize>>,
    mode: Mode,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    trail: Vec<(usize, i64, i64)>,
    queue: Vec<usize>,
    queued: Vec<bool>,
    pub steps: u64,
    budget: u64,
}

impl<'a> Propagator<'a> {
    pub fn new(system: &'a IntSystem, mode: Mode, budget: u64) -> Self {
        let rows = system.rows.len();
        Propagator {
            system,
            var_rows: system.var_rows(),
            mode,
            lo: system.lower.clone(),
            hi: vec![INF; system.num_vars],
            trail: Vec::new(),
            queue: (0..rows).rev().collect(),
            queued: vec![true; rows],
            steps: 0,
            budget,
        }
    }

    /// Allows `extra` more row evaluations from now on.
    pub fn extend_budget(&mut self, extra: u64) {
        self.budget = self.steps.saturating_add(extra);
    }

    pub fn is_fixed(&self, v: usize) -> bool {
        self.lo[v] == self.hi[v]
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, lo, hi) = self.trail.pop().unwrap();
            self.lo[v] = lo;
            self.hi[v] = hi;
        }
        for &r in &self.queue {
            self.queued[r] = false;
        }
        self.queue.clear();
    }

    /// Tightens `v` to `[lo, hi] ∩ current` and queues its rows.
    pub fn restrict(&mut self, v: usize, lo: i64, hi: i64) -> std::result::Result<(), Conflict> {
        let new_lo = lo.max(self.lo[v]);
        let new_hi = hi.min(self.hi[v]);
        if new_lo == self.lo[v] && new_hi == self.hi[v] {
            return Ok(());
        }
        self.trail.push((v, self.lo[v], self.hi[v]));
        self.lo[v] = new_lo;
        self.hi[v] = new_hi;
        if new_lo > new_hi {
            return Err(Conflict { row: None });
        }
        for &r in &self.var_rows[v] {
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
        Ok(())
    }

    /// Runs to a fixpoint. A conflict leaves the queue empty.
    pub fn propagate(&mut self) -> Result<std::result::Result<(), Conflict>> {
        while let Some(r) = self.queue.pop() {
            self.queued[r] = false;
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget });
            }
            let outcome = self.propagate_row(r).map_err(|_| Conflict { row: Some(r) });
            if outcome.is_err() {
                for &q in &self.queue {
                    self.queued[q] = false;
                }
                self.queue.clear();
                return Ok(outcome);
            }
        }
        Ok(Ok(()))
    }

    fn propagate_row(&mut self, r: usize) -> std::result::Result<(), Conflict> {
        let row = &self.system.rows[r];
        self.propagate_side(r, 1, row.rhs)?;
        if row.kind == RowKind::Eq {
            self.propagate_side(r, -1, -row.rhs)?;
        }
        Ok(())
    }

    /// Bounds from `sign · Σ a_k x_k ≤ rhs`.
    fn propagate_side(&mut self, r: usize, sign: i64, rhs: i64) -> std::result::Result<(), Conflict> {
        let system = self.system;
        let coeffs = &system.rows[r].coeffs;
        let mut finite: i128 = 0;
        let mut infinite = 0usize;
        let mut infinite_var = usize::MAX;
        for &(v, a) in coeffs {
            let a = (a * sign) as i128;
            let bound = if a > 0 { self.lo[v] } else { self.hi[v] };
            if bound >= INF || bound <= -INF {
                infinite += 1;
                infinite_var = v;
            } else {
                finite += a * bound as i128;
            }
        }
        if infinite >= 2 {
            return Ok(());
        }
        let rhs = rhs as i128;
        if infinite == 0 && finite > rhs {
            return Err(Conflict { row: Some(r) });
        }
        for &(v, a) in coeffs {
            if infinite == 1 && v != infinite_var {
                continue;
            }
            let a = (a * sign) as i128;
            if self.mode == Mode::Real && a.abs() != 1 {
                continue;
            }
            let own = if infinite == 1 {
                0
            } else {
                a * (if a > 0 { self.lo[v] } else { self.hi[v] }) as i128
            };
            let resid = rhs - (finite - own);
            if a == 1 {
                let bound = clamp(resid);
                if bound < self.hi[v] {
                    self.restrict(v, -INF, bound)?;
                }
            } else if a == -1 {
                let bound = clamp(-resid);
                if bound > self.lo[v] {
                    self.restrict(v, bound, INF)?;
                }
            } else if a > 0 {
                let bound = clamp(div_floor(resid, a));
                if bound < self.hi[v] {
                    self.restrict(v, -INF, bound)?;
                }
            } else {
                let bound = clamp(div_ceil(resid, a));
                if bound > self.lo[v] {
                    self.restrict(v, bound, INF)?;
                }
            }
        }
        Ok(())
    }

    /// Variables connected to `seeds` through rows, among unfixed variables.
    fn components(&self, seeds: &[usize], stamp: &mut [u32], epoch: u32) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for &s in seeds {
            if self.is_fixed(s) || stamp[s] == epoch {
                continue;
            }
            stamp[s] = epoch;
            let mut comp = vec![s];
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                k += 1;
                for &r in &self.var_rows[v] {
                    for &(w, _) in &self.system.rows[r].coeffs {
                        if stamp[w] != epoch && !self.is_fixed(w) {
                            stamp[w] = epoch;
                            comp.push(w);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

fn clamp(v: i128) -> i64 {
    v.clamp(-(INF as i128), INF as i128) as i64
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Runs `f` on a thread with a large stack: branching recurses once per decision.
fn with_deep_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(1 << 30)
            .spawn_scoped(scope, f)
            .expect("spawn search thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

/// Domains at most this wide are enumerated value by value; wider ones are bisected.
const ENUMERATE_WIDTH: i64 = 3;

/// Exact number of integer points, splitting into independent blocks of
/// variables whenever the remaining rows allow it. Each propagated row counts
/// as one step against `budget`.
pub fn count_points(system: &IntSystem, budget: u64) -> Result<u128> {
    count_points_branching_first(system, budget, &[])
}

/// [`count_points`], branching on the variables in `first` before any other.
/// A good choice is a set of variables whose values split the system into
/// independent blocks.
pub fn count_points_branching_first(system: &IntSystem, budget: u64, first: &[usize]) -> Result<u128> {
    let mut root = Propagator::new(system, Mode::Integer, budget);
    if root.propagate()?.is_err() {
        return Ok(0);
    }
    let (reduced, kept) = reduce(system, &root.lo, &root.hi);
    let mut p = Propagator::new(&reduced, Mode::Integer, budget.saturating_sub(root.steps));
    for (k, &v) in kept.iter().enumerate() {
        if p.restrict(k, root.lo[v], root.hi[v]).is_err() {
            return Ok(0);
        }
    }
    match p.propagate() {
        Err(Error::BudgetExceeded { .. }) => return Err(Error::BudgetExceeded { budget }),
        Err(e) => return Err(e),
        Ok(Err(_)) => return Ok(0),
        Ok(Ok(())) => {}
    }
    let mut rank = vec![1u8; kept.len()];
    for &v in first {
        if let Ok(k) = kept.binary_search(&v) {
            rank[k] = 0;
        }
    }
    let vars: Vec<usize> = (0..kept.len()).collect();
    let mut counter = Counter { stamp: vec![0; kept.len()], epoch: 0, rank };
    with_deep_stack(|| counter.count_components(&mut p, &vars)).map_err(|e| match e {
        Error::BudgetExceeded { .. } => Error::BudgetExceeded { budget },
        e => e,
    })
}

/// The system on the variables not fixed by `lo`/`hi`, with fixed values moved
/// to the right-hand sides and repeated rows dropped. Also returns the
/// original index of each remaining variable.
fn reduce(system: &IntSystem, lo: &[i64], hi: &[i64]) -> (IntSystem, Vec<usize>) {
    let kept: Vec<usize> = (0..system.num_vars).filter(|&v| lo[v] != hi[v]).collect();
    let mut index = vec![usize::MAX; system.num_vars];
    for (k, &v) in kept.iter().enumerate() {
        index[v] = k;
    }
    let mut seen = std::collections::HashSet::new();
    let mut rows = Vec::new();
    for row in &system.rows {
        let mut rhs = row.rhs as i128;
        let mut coeffs = Vec::new();
        for &(v, a) in &row.coeffs {
            if index[v] == usize::MAX {
                rhs -= a as i128 * lo[v] as i128;
            } else {
                coeffs.push((index[v], a));
            }
        }
        if coeffs.is_empty() {
            continue;
        }
        coeffs.sort_unstable();
        let reduced = IntRow { coeffs, rhs: clamp(rhs), kind: row.kind };
        if seen.insert(reduced.clone()) {
            rows.push(reduced);
        }
    }
    let lower = kept.iter().map(|&v| lo[v]).collect();
    (IntSystem { num_vars: kept.len(), rows, lower }, kept)
}

struct Counter {
    stamp: Vec<u32>,
    epoch: u32,
    rank: Vec<u8>,
}

impl Counter {
    fn count_components(&mut self, p: &mut Propagator, vars: &[usize]) -> Result<u128> {
        self.epoch += 1;
        let comps = p.components(vars, &mut self.stamp, self.epoch);
        let mut total: u128 = 1;
        for comp in comps {
            let c = self.count_branch(p, &comp)?;
            if c == 0 {
                return Ok(0);
            }
            total = total
                .checked_mul(c)
                .ok_or_else(|| Error::Overflow("lattice point count".into()))?;
        }
        Ok(total)
    }

    fn count_branch(&mut self, p: &mut Propagator, comp: &[usize]) -> Result<u128> {
        let v = pick_variable(p, comp, &self.rank)?;
        let mut total: u128 = 0;
        for (lo, hi) in branches(p.lo[v], p.hi[v]) {
            let mark = p.mark();
            if p.restrict(v, lo, hi).is_ok() && p.propagate()?.is_ok() {
                total += self.count_components(p, comp)?;
            }
            p.undo(mark);
        }
        Ok(total)
    }
}

fn pick_variable(p: &Propagator, comp: &[usize], rank: &[u8]) -> Result<usize> {
    let v = comp
        .iter()
        .copied()
        .filter(|&v| !p.is_fixed(v))
        .min_by_key(|&v| (rank[v], p.hi[v] - p.lo[v], v))
        .expect("components hold unfixed variables");
    if p.hi[v] >= INF || p.lo[v] <= -INF {
        return Err(Error::Precondition(format!("variable {v} is unbounded")));
    }
    Ok(v)
}

fn branches(lo: i64, hi: i64) -> Vec<(i64, i64)> {
    if hi - lo <= ENUMERATE_WIDTH {
        (lo..=hi).map(|x| (x, x)).collect()
    } else {
        let mid = lo + (hi - lo) / 2;
        vec![(lo, mid), (mid + 1, hi)]
    }
}

/// Outcome of a search for one integer point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search {
    Found(Vec<i64>),
    /// The search space was exhausted without a point.
    Empty,
    /// The step budget ran out first.
    GaveUp,
}

/// Depth-first search for a single integer point, trying the middle of each
/// domain first. Gives up when some domain is unbounded.
pub fn find_point(system: &IntSystem, budget: u64) -> Result<Search> {
    let mut p = Propagator::new(system, Mode::Integer, budget);
    match p.propagate() {
        Err(Error::BudgetExceeded { .. }) => return Ok(Search::GaveUp),
        Err(e) => return Err(e),
        Ok(Err(_)) => return Ok(Search::Empty),
        Ok(Ok(())) => {}
    }
    search_from(&mut p)
}

/// [`find_point`] from a propagator already at a conflict-free fixpoint.
pub fn search_from(p: &mut Propagator) -> Result<Search> {
    if (0..p.system.num_vars).any(|v| p.hi[v] >= INF || p.lo[v] <= -INF) {
        return Ok(Search::GaveUp);
    }
    let vars: Vec<usize> = (0..p.system.num_vars).collect();
    match with_deep_stack(|| search(p, &vars)) {
        Ok(true) => Ok(Search::Found(p.lo.clone())),
        Ok(false) => Ok(Search::Empty),
        Err(Error::BudgetExceeded { .. }) => Ok(Search::GaveUp),
        Err(e) => Err(e),
    }
}

fn search(p: &mut Propagator, vars: &[usize]) -> Result<bool> {
    let Some(v) = vars
        .iter()
        .copied()
        .filter(|&v| !p.is_fixed(v))
        .min_by_key(|&v| (p.hi[v] - p.lo[v], v))
    else {
        return Ok(true);
    };
    if p.hi[v] >= INF || p.lo[v] <= -INF {
        return Err(Error::Precondition(format!("variable {v} is unbounded")));
    }
    for (lo, hi) in search_branches(p.lo[v], p.hi[v]) {
        let mark = p.mark();
        if p.restrict(v, lo, hi).is_ok() && p.propagate()?.is_ok() && search(p, vars)? {
            return Ok(true);
        }
        p.undo(mark);
    }
    Ok(false)
}

/// The midpoint first, then the two sides of it.
fn search_branches(lo: i64, hi: i64) -> Vec<(i64, i64)> {
    if hi - lo <= ENUMERATE_WIDTH {
        return (lo..=hi).map(|x| (x, x)).collect();
    }
    let mid = lo + (hi - lo) / 2;
    vec![(mid, mid), (lo, mid - 1), (mid + 1, hi)]
}

/// Lower and upper bound of every variable.
pub type Bounds = (Vec<i64>, Vec<i64>);

/// Root-level bounds in real mode: `Err(conflict)` certifies emptiness of the
/// rational system.
pub fn presolve(system: &IntSystem, budget: u64) -> Result<std::result::Result<Bounds, Conflict>> {
    let mut p = Propagator::new(system, Mode::Real, budget);
    Ok(p.propagate()?.map(|()| (p.lo.clone(), p.hi.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force count over a box.
    fn brute(system: &IntSystem, hi: i64) -> u128 {
        let n = system.num_vars;
        let mut x = vec![0i64; n];
        let mut total = 0;
        loop {
            if system.satisfied_by(&x) {
                total += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return total;
                }
                x[k] += 1;
                if x[k] <= hi {
                    break;
                }
                x[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn simplex_points() {
        // x + y + z ≤ 4
        let s = IntSystem::nonnegative(3, vec![IntRow::le(vec![(0, 1), (1, 1), (2, 1)], 4)]);
        assert_eq!(count_points(&s, 1_000_000).unwrap(), 35);
        assert_eq!(brute(&s, 4), 35);
    }

    #[test]
    fn independent_blocks_multiply() {
        let s = IntSystem::nonnegative(
            4,
            vec![IntRow::le(vec![(0, 1), (1, 1)], 2), IntRow::le(vec![(2, 1), (3, 1)], 3)],
        );
        assert_eq!(count_points(&s, 1_000_000).unwrap(), 6 * 10);
    }

    #[test]
    fn empty_and_budget() {
        let s = IntSystem::nonnegative(1, vec![IntRow::le(vec![(0, 1)], 1), IntRow::le(vec![(0, -1)], -2)]);
        assert_eq!(count_points(&s, 100).unwrap(), 0);
        assert!(presolve(&s, 100).unwrap().is_err());
        assert_eq!(find_point(&s, 100).unwrap(), Search::Empty);
        let big = IntSystem::nonnegative(6, vec![IntRow::le((0..6).map(|v| (v, 1)).collect(), 40)]);
        assert_eq!(count_points(&big, 50), Err(Error::BudgetExceeded { budget: 50 }));
    }

    #[test]
    fn equalities_and_general_coefficients() {
        // 2x + 3y = 12, x,y ≥ 0 → (0,4), (3,2), (6,0)
        let s = IntSystem::nonnegative(2, vec![IntRow::eq(vec![(0, 2), (1, 3)], 12)]);
        assert_eq!(count_points(&s, 10_000).unwrap(), 3);
        match find_point(&s, 10_000).unwrap() {
            Search::Found(x) => assert!(s.satisfied_by(&x)),
            other => panic!("{other:?}"),
        }
        // 2x = 1 has real solutions; real-mode presolve must not refute it.
        let half = IntSystem::nonnegative(1, vec![IntRow::eq(vec![(0, 2)], 1)]);
        assert!(presolve(&half, 100).unwrap().is_ok());
        assert_eq!(count_points(&half, 100).unwrap(), 0);
    }

    #[test]
    fn unbounded_is_reported() {
        let s = IntSystem::nonnegative(2, vec![IntRow::le(vec![(0, 1), (1, -1)], 0)]);
        assert!(matches!(count_points(&s, 1000), Err(Error::Precondition(_))));
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_brute_force(
            rows in prop::collection::vec(
                (prop::collection::vec(-1i64..=1, 3), -2i64..5, any::<bool>()),
                1..5,
            )
        ) {
            let mut all = vec![IntRow::le(vec![(0, 1), (1, 1), (2, 1)], 4)];
            for (coeffs, rhs, eq) in rows {
                let coeffs: Vec<(usize, i64)> =
                    coeffs.into_iter().enumerate().filter(|&(_, a)| a != 0).collect();
                all.push(IntRow { coeffs, rhs, kind: if eq { RowKind::Eq } else { RowKind::Le } });
            }
            let s = IntSystem::nonnegative(3, all);
            prop_assert_eq!(count_points(&s, 1_000_000).unwrap(), brute(&s, 4));
        }
    }
}
