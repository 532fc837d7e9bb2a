//! Two `N`-hives glued along their right borders, as a linear program with
//! coefficients in `{−1, 0, 1}`.
//!
//! Hive labels follow [`crate::lr::Hive`]: `x` for `e`, `y` for `f` and `t`
//! for `g`; primed names belong to the second hive. The first hive has `γ(1)`
//! on its left border and `γ(2)` along the bottom, the second `γ(3)` and
//! `γ(4)`. Both share the right border `μ`, which is forced to have at most
//! `nd` nonzero parts.

use serde::{Deserialize, Serialize};

use crate::bounds::{count_points_branching_first, IntRow, IntSystem, RowKind};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpOptions, LpOutcome};
use crate::lr::zelevinsky_reduce;
use crate::partition::{rectangle, Partition};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KInput {
    pub lambdas: Vec<Partition>,
    pub nus: Vec<Partition>,
    pub f: u64,
    pub d: u64,
    pub n: u64,
}

impl KInput {
    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() || self.nus.is_empty() {
            return Err(Error::Precondition("need at least one λ and one ν".into()));
        }
        if self.d == 0 || self.n == 0 {
            return Err(Error::Precondition("d and n must be positive".into()));
        }
        let left: u64 = self.lambdas.iter().map(Partition::size).sum();
        let right: u64 = self.nus.iter().map(Partition::size).sum();
        if left != right {
            return Err(Error::Precondition(format!("Σ|λ(i)| = {left} differs from Σ|ν(j)| = {right}")));
        }
        Ok(())
    }

    /// `(λ(1), …, λ(m), (f^d), …, (f^d))` with `n` rectangles.
    pub fn left_factors(&self) -> Vec<Partition> {
        let mut out = self.lambdas.clone();
        out.extend(std::iter::repeat_n(rectangle(self.d as usize, self.f), self.n as usize));
        out
    }

    /// `(ν(1), …, ν(ℓ), (f^{nd}))`.
    pub fn right_factors(&self) -> Vec<Partition> {
        let mut out = self.nus.clone();
        out.push(rectangle((self.n * self.d) as usize, self.f));
        out
    }

    pub fn scaled(&self, r: u64) -> KInput {
        KInput {
            lambdas: self.lambdas.iter().map(|p| p.scale(r)).collect(),
            nus: self.nus.iter().map(|p| p.scale(r)).collect(),
            f: self.f * r,
            d: self.d,
            n: self.n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Padding {
    /// `L = Σℓ(λ(i)) + Σℓ(ν(j)) + nd`.
    #[default]
    Full,
    /// `L = max(nd, max ℓ(λ(i)), max ℓ(ν(j)))`.
    Tight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Edge {
    X,
    Y,
    T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedHiveProgram {
    pub input: KInput,
    /// Common padded length of all partitions.
    pub length: usize,
    /// Hive size `N = (m + n + ℓ + 1)·L`.
    pub size: usize,
    pub gamma: [Partition; 4],
    /// All rows over nonnegative variables.
    pub system: IntSystem,
    /// Right-border variables `y[j, N−1−j]` forced to zero, `j < N − nd`.
    pub zero_section: Vec<usize>,
}

impl GluedHiveProgram {
    pub fn triangles(&self) -> usize {
        self.size * (self.size + 1) / 2
    }

    pub fn num_vars(&self) -> usize {
        6 * self.triangles()
    }

    /// Variable of label `edge` on triangle `(i, j)` of hive `hive ∈ {0, 1}`.
    pub fn var(&self, hive: usize, edge: Edge, i: usize, j: usize) -> usize {
        var_index(self.size, hive, edge, i, j)
    }

    pub fn var_names(&self) -> Vec<String> {
        let n = self.size;
        let mut names = vec![String::new(); self.num_vars()];
        for hive in 0..2 {
            let prime = if hive == 0 { "" } else { "'" };
            for i in 0..n {
                for j in 0..n - i {
                    for (edge, label) in [(Edge::X, "x"), (Edge::Y, "y"), (Edge::T, "t")] {
                        names[self.var(hive, edge, i, j)] = format!("{label}{prime}[{i},{j}]");
                    }
                }
            }
        }
        names
    }

    pub fn system(&self) -> &IntSystem {
        &self.system
    }

    pub fn linear_program(&self) -> LinearProgram {
        LinearProgram::from_int_system(&self.system)
    }

    /// Dense dump `{"A", "b", "eq_rows", "var_names"}`; refused above `max_entries` matrix entries.
    pub fn dump(&self, max_entries: usize) -> Result<LpDump> {
        let entries = self.system.rows.len().saturating_mul(self.num_vars());
        if entries > max_entries {
            return Err(Error::BudgetExceeded { budget: max_entries as u64 });
        }
        let mut a = Vec::with_capacity(self.system.rows.len());
        let mut b = Vec::with_capacity(self.system.rows.len());
        let mut eq_rows = Vec::new();
        for (r, row) in self.system.rows.iter().enumerate() {
            let mut dense = vec![0i64; self.num_vars()];
            for &(v, c) in &row.coeffs {
                dense[v] += c;
            }
            a.push(dense);
            b.push(row.rhs);
            if row.kind == RowKind::Eq {
                eq_rows.push(r);
            }
        }
        Ok(LpDump { a, b, eq_rows, var_names: self.var_names() })
    }
}

fn var_index(size: usize, hive: usize, edge: Edge, i: usize, j: usize) -> usize {
    debug_assert!(i + j < size);
    let triangle = i * size - i * (i.saturating_sub(1)) / 2 + j;
    let triangles = size * (size + 1) / 2;
    let slot = match edge {
        Edge::X => 0,
        Edge::Y => 1,
        Edge::T => 2,
    };
    hive * 3 * triangles + 3 * triangle + slot
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpDump {
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub eq_rows: Vec<usize>,
    pub var_names: Vec<String>,
}

impl LpDump {
    pub fn to_int_system(&self) -> Result<IntSystem> {
        if self.b.len() != self.a.len() {
            return Err(Error::ShapeMismatch(format!("{} rows but {} right-hand sides", self.a.len(), self.b.len())));
        }
        let width = self.a.first().map_or(self.var_names.len(), Vec::len);
        let mut rows = Vec::with_capacity(self.a.len());
        for (r, dense) in self.a.iter().enumerate() {
            if dense.len() != width {
                return Err(Error::ShapeMismatch(format!("row {r} has {} entries, expected {width}", dense.len())));
            }
            let coeffs = dense.iter().enumerate().filter(|(_, &c)| c != 0).map(|(v, &c)| (v, c)).collect();
            rows.push(IntRow { coeffs, rhs: self.b[r], kind: RowKind::Le });
        }
        for &r in &self.eq_rows {
            let row = rows
                .get_mut(r)
                .ok_or_else(|| Error::ShapeMismatch(format!("eq_rows names missing row {r}")))?;
            row.kind = RowKind::Eq;
        }
        Ok(IntSystem::nonnegative(width, rows))
    }
}

pub fn padded_length(inp: &KInput, padding: Padding) -> usize {
    let nd = (inp.n * inp.d) as usize;
    match padding {
        Padding::Full => {
            inp.lambdas.iter().map(Partition::len).sum::<usize>()
                + inp.nus.iter().map(Partition::len).sum::<usize>()
                + nd
        }
        Padding::Tight => inp
            .lambdas
            .iter()
            .chain(&inp.nus)
            .map(Partition::len)
            .max()
            .unwrap_or(0)
            .max(nd),
    }
}

pub fn build_glued_program(inp: &KInput) -> Result<GluedHiveProgram> {
    build_glued_program_with(inp, Padding::Full)
}

pub fn build_glued_program_with(inp: &KInput, padding: Padding) -> Result<GluedHiveProgram> {
    inp.validate()?;
    let length = padded_length(inp, padding).max(1);
    let left = zelevinsky_reduce(&inp.left_factors(), length)?;
    let right = zelevinsky_reduce(&inp.right_factors(), length)?;
    let m = inp.lambdas.len();
    let ell = inp.nus.len();
    let size = (m + inp.n as usize + ell + 1) * length;
    let nd = (inp.n * inp.d) as usize;
    let gamma = [left.mu_tilde, left.lambda_tilde, right.mu_tilde, right.lambda_tilde];

    let v = |hive, edge, i, j| var_index(size, hive, edge, i, j);
    let mut rows = Vec::new();
    // Border pins.
    for (hive, (side, bottom)) in [(&gamma[0], &gamma[1]), (&gamma[2], &gamma[3])].into_iter().enumerate() {
        for i in 0..size {
            rows.push(IntRow::eq(vec![(v(hive, Edge::X, i, 0), 1)], side.part(i + 1) as i64));
        }
        for k in 0..size {
            rows.push(IntRow::eq(vec![(v(hive, Edge::T, 0, k), 1)], bottom.part(k + 1) as i64));
        }
    }
    // Shared right border and its total.
    for j in 0..size {
        let k = size - 1 - j;
        rows.push(IntRow::eq(vec![(v(0, Edge::Y, j, k), 1), (v(1, Edge::Y, j, k), -1)], 0));
    }
    let total = gamma[1].size() as i64 - gamma[0].size() as i64;
    rows.push(IntRow::eq((0..size).map(|j| (v(0, Edge::Y, j, size - 1 - j), 1)).collect(), total));
    // Both hives.
    for hive in 0..2 {
        push_hive_rows(&mut rows, size, |edge, i, j| v(hive, edge, i, j));
    }
    let zero_section: Vec<usize> = (0..size.saturating_sub(nd)).map(|j| v(0, Edge::Y, j, size - 1 - j)).collect();
    for &z in &zero_section {
        rows.push(IntRow::eq(vec![(z, 1)], 0));
    }
    let system = IntSystem::nonnegative(6 * size * (size + 1) / 2, rows);
    Ok(GluedHiveProgram { input: inp.clone(), length, size, gamma, system, zero_section })
}

/// Triangle equalities and both forms of every rhombus inequality.
fn push_hive_rows(rows: &mut Vec<IntRow>, n: usize, v: impl Fn(Edge, usize, usize) -> usize) {
    use Edge::{T, X, Y};
    let le = |a: usize, b: usize| IntRow::le(vec![(a, 1), (b, -1)], 0);
    for i in 0..n {
        for j in 0..n - i {
            rows.push(IntRow::eq(vec![(v(X, i, j), 1), (v(Y, i, j), 1), (v(T, i, j), -1)], 0));
            let inner = i + j + 2 <= n;
            if inner {
                rows.push(IntRow::eq(vec![(v(Y, i, j), 1), (v(X, i, j + 1), 1), (v(T, i + 1, j), -1)], 0));
                rows.push(le(v(X, i + 1, j), v(X, i, j + 1)));
                rows.push(le(v(Y, i, j), v(Y, i + 1, j)));
                rows.push(le(v(X, i, j + 1), v(X, i, j)));
                rows.push(le(v(T, i + 1, j), v(T, i, j)));
            }
            if j >= 1 {
                rows.push(le(v(T, i, j), v(T, i + 1, j - 1)));
                rows.push(le(v(Y, i, j), v(Y, i, j - 1)));
            }
        }
    }
}

/// Exact number of lattice points; each propagated row counts as one step.
///
/// The shared border is branched on first; once it is fixed the two hives
/// are counted independently.
pub fn count_lattice_points(prog: &GluedHiveProgram, budget: u64) -> Result<u128> {
    let border: Vec<usize> = (0..prog.size).map(|j| prog.var(0, Edge::Y, j, prog.size - 1 - j)).collect();
    count_points_branching_first(prog.system(), budget, &border)
}

/// Rational feasibility, delegated to the exact solver.
pub fn is_feasible(prog: &GluedHiveProgram) -> Result<bool> {
    Ok(feasibility(prog, &LpOptions::default())?.feasible)
}

pub fn feasibility(prog: &GluedHiveProgram, options: &LpOptions) -> Result<LpOutcome> {
    lp::feasible_int(prog.system(), options)
}
