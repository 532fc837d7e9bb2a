//! Exact rational feasibility for `A·x ≤ b` with equality rows and `x ≥ 0`
//! (or free) variables.
//!
//! Programs with integer data and unit coefficients go through three stages:
//! interval propagation (a conflict certifies emptiness), a bounded search for
//! an integer point (a point certifies feasibility), and finally phase-I
//! simplex over `BigRational` with Bland's rule on the variables propagation
//! left unfixed. Any witness is re-checked against the original rows.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{find_point, presolve, search_from, IntRow, IntSystem, Mode, Propagator, RowKind, Search, INF};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
    pub kind: RowKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub rows: Vec<LpRow>,
    /// `true` for variables without the `x ≥ 0` bound.
    pub free: Vec<bool>,
}

impl LinearProgram {
    pub fn new(num_vars: usize, rows: Vec<LpRow>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if let Some(&(v, _)) = row.coeffs.iter().find(|(v, _)| *v >= num_vars) {
                return Err(Error::ShapeMismatch(format!("row {r} uses variable {v} of {num_vars}")));
            }
        }
        Ok(LinearProgram { num_vars, rows, free: vec![false; num_vars] })
    }

    pub fn from_int_system(system: &IntSystem) -> Self {
        let rows = system
            .rows
            .iter()
            .map(|r| LpRow {
                coeffs: r.coeffs.iter().map(|&(v, a)| (v, int(a))).collect(),
                rhs: int(r.rhs),
                kind: r.kind,
            })
            .collect();
        LinearProgram { num_vars: system.num_vars, rows, free: system.lower.iter().map(|&l| l <= -INF).collect() }
    }

    /// Integer system when every coefficient and right-hand side is an integer.
    pub fn to_int_system(&self) -> Option<IntSystem> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let coeffs = row
                .coeffs
                .iter()
                .map(|(v, a)| crate::rational::to_i64(a).map(|a| (*v, a)))
                .collect::<Option<Vec<_>>>()?;
            let rhs = crate::rational::to_i64(&row.rhs)?;
            if rhs.abs() >= INF / 1024 {
                return None;
            }
            rows.push(IntRow { coeffs, rhs, kind: row.kind });
        }
        let lower = self.free.iter().map(|&f| if f { -INF } else { 0 }).collect();
        Some(IntSystem { num_vars: self.num_vars, rows, lower })
    }

    /// Exact check of every row and sign bound.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if x.iter().zip(&self.free).any(|(v, &free)| !free && v.is_negative()) {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs: Rational = row.coeffs.iter().map(|(v, a)| a * &x[*v]).sum();
            match row.kind {
                RowKind::Le => lhs <= row.rhs,
                RowKind::Eq => lhs == row.rhs,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpOptions {
    pub presolve: bool,
    pub probe: bool,
    /// Step budget for the simplex.
    pub budget: u64,
    /// Step budget for bound propagation; bounds of unbounded variables can
    /// creep without end, so running out falls back to the simplex.
    pub presolve_budget: u64,
    /// Step budget for the integer probe.
    pub probe_budget: u64,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { presolve: true, probe: true, budget: 100_000_000, presolve_budget: 20_000_000, probe_budget: 2_000_000 }
    }
}

impl LpOptions {
    /// Plain phase-I simplex on the whole program.
    pub fn simplex_only() -> Self {
        LpOptions { presolve: false, probe: false, ..LpOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Propagated bounds became contradictory.
    BoundConflict,
    /// An integer point satisfies every row.
    IntegerPoint,
    /// Phase-I optimum, zero exactly when feasible.
    PhaseOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub feasible: bool,
    #[serde(with = "crate::rational::serde_text::option_vec")]
    pub witness: Option<Vec<Rational>>,
    #[serde(with = "crate::rational::serde_text::option")]
    pub phase_one_objective: Option<Rational>,
    pub certificate: Certificate,
}

pub fn feasible(lp: &LinearProgram) -> Result<LpOutcome> {
    feasible_with(lp, &LpOptions::default())
}

pub fn feasible_with(lp: &LinearProgram, options: &LpOptions) -> Result<LpOutcome> {
    let unit = lp
        .rows
        .iter()
        .all(|r| r.coeffs.iter().all(|(_, a)| a.is_integer() && a.abs() <= Rational::one()));
    match lp.to_int_system() {
        Some(system) if unit => feasible_int(&system, options),
        _ => {
            let outcome = phase_one(lp, &vec![None; lp.num_vars], options.budget)?;
            check_witness(lp, outcome)
        }
    }
}

pub fn feasible_int(system: &IntSystem, options: &LpOptions) -> Result<LpOutcome> {
    let unit = system.rows.iter().all(|r| r.coeffs.iter().all(|&(_, a)| a.abs() == 1));
    let mut fixed: Vec<Option<Rational>> = vec![None; system.num_vars];
    let conflict = LpOutcome {
        feasible: false,
        witness: None,
        phase_one_objective: None,
        certificate: Certificate::BoundConflict,
    };
    // With unit coefficients integer propagation derives the same bounds as
    // real propagation, so one pass serves both the presolve and the probe.
    let mut root = None;
    let presolve_budget = options.presolve_budget.min(options.budget);
    if options.presolve && unit {
        let mut p = Propagator::new(system, Mode::Integer, presolve_budget);
        match p.propagate() {
            Ok(Err(_)) => return Ok(conflict),
            Ok(Ok(())) => {
                for (v, slot) in fixed.iter_mut().enumerate() {
                    if p.is_fixed(v) {
                        *slot = Some(int(p.lo[v]));
                    }
                }
                root = Some(p);
            }
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    } else if options.presolve {
        match presolve(system, presolve_budget) {
            Ok(Err(_)) => return Ok(conflict),
            Ok(Ok((lo, hi))) => {
                for v in 0..system.num_vars {
                    if lo[v] == hi[v] {
                        fixed[v] = Some(int(lo[v]));
                    }
                }
            }
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if options.probe {
        let found = match root.as_mut() {
            Some(p) => {
                p.extend_budget(options.probe_budget);
                search_from(p)?
            }
            None if options.presolve && unit => Search::GaveUp,
            None => find_point(system, options.probe_budget)?,
        };
        if let Search::Found(x) = found {
            if system.satisfied_by(&x) {
                return Ok(LpOutcome {
                    feasible: true,
                    witness: Some(x.into_iter().map(int).collect()),
                    phase_one_objective: None,
                    certificate: Certificate::IntegerPoint,
                });
            }
        }
    }
    let lp = LinearProgram::from_int_system(system);
    check_witness(&lp, phase_one(&lp, &fixed, options.budget)?)
}

fn check_witness(lp: &LinearProgram, outcome: LpOutcome) -> Result<LpOutcome> {
    if let Some(x) = &outcome.witness {
        if !lp.satisfied_by(x) {
            return Err(Error::Precondition("simplex witness failed the exact re-check".into()));
        }
    }
    Ok(outcome)
}

/// Phase-I simplex with the variables in `fixed` substituted out.
/// Tableau cells written count as steps against `budget`.
fn phase_one(lp: &LinearProgram, fixed: &[Option<Rational>], budget: u64) -> Result<LpOutcome> {
    // Column layout: free variables split into a positive and a negative part.
    let mut columns: Vec<(usize, bool)> = Vec::new();
    let mut pos_col = vec![usize::MAX; lp.num_vars];
    let mut neg_col = vec![usize::MAX; lp.num_vars];
    for v in 0..lp.num_vars {
        if fixed[v].is_some() {
            continue;
        }
        pos_col[v] = columns.len();
        columns.push((v, false));
        if lp.free[v] {
            neg_col[v] = columns.len();
            columns.push((v, true));
        }
    }
    let structural = columns.len();

    // Rows that still involve an unfixed variable; the rest must hold as stated.
    struct Reduced {
        coeffs: Vec<(usize, Rational)>,
        rhs: Rational,
        slack: bool,
    }
    let mut reduced = Vec::new();
    let mut violated = Rational::zero();
    for row in &lp.rows {
        let mut rhs = row.rhs.clone();
        let mut coeffs = Vec::new();
        for (v, a) in &row.coeffs {
            match &fixed[*v] {
                Some(value) => rhs -= a * value,
                None => {
                    coeffs.push((pos_col[*v], a.clone()));
                    if lp.free[*v] {
                        coeffs.push((neg_col[*v], -a.clone()));
                    }
                }
            }
        }
        if coeffs.is_empty() {
            let bad = match row.kind {
                RowKind::Le => rhs.is_negative(),
                RowKind::Eq => !rhs.is_zero(),
            };
            if bad {
                violated += rhs.abs();
            }
            continue;
        }
        reduced.push(Reduced { coeffs, rhs, slack: row.kind == RowKind::Le });
    }
    if !violated.is_zero() {
        return Ok(LpOutcome {
            feasible: false,
            witness: None,
            phase_one_objective: Some(violated),
            certificate: Certificate::PhaseOne,
        });
    }

    let r_count = reduced.len();
    let slack_count = reduced.iter().filter(|r| r.slack).count();
    let slack_base = structural;
    let art_base = structural + slack_count;
    let width = art_base + r_count + 1;
    let rhs_col = width - 1;
    let mut steps = ((r_count + 1) as u64).saturating_mul(width as u64);
    if steps > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(r_count + 1);
    let mut basis = Vec::with_capacity(r_count);
    let mut next_slack = slack_base;
    for (k, row) in reduced.iter().enumerate() {
        let mut line = vec![Rational::zero(); width];
        for (c, a) in &row.coeffs {
            line[*c] += a;
        }
        line[rhs_col] = row.rhs.clone();
        if row.slack {
            line[next_slack] = Rational::one();
            next_slack += 1;
        }
        if line[rhs_col].is_negative() {
            for x in line.iter_mut() {
                *x = -x.clone();
            }
        }
        line[art_base + k] = Rational::one();
        basis.push(art_base + k);
        tableau.push(line);
    }
    // Objective row holds reduced costs of `min Σ artificials`; its last entry is `−w`.
    let mut objective = vec![Rational::zero(); width];
    for line in &tableau {
        for c in 0..art_base {
            objective[c] -= &line[c];
        }
        objective[rhs_col] -= &line[rhs_col];
    }
    tableau.push(objective);

    loop {
        let obj = &tableau[r_count];
        let Some(enter) = (0..rhs_col).find(|&c| obj[c].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..r_count {
            let a = &tableau[r][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &tableau[r][rhs_col] / a;
            let better = match &leave {
                None => true,
                Some((best_r, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*best_r]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            // Phase I is bounded below by zero; a negative reduced cost always has a ratio row.
            unreachable!("phase-I objective is bounded");
        };
        steps = steps.saturating_add(pivot(&mut tableau, pivot_row, enter));
        if steps > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        basis[pivot_row] = enter;
    }

    let objective_value = -tableau[r_count][rhs_col].clone();
    if !objective_value.is_zero() {
        return Ok(LpOutcome {
            feasible: false,
            witness: None,
            phase_one_objective: Some(objective_value),
            certificate: Certificate::PhaseOne,
        });
    }
    let mut column_value = vec![Rational::zero(); width];
    for (r, &b) in basis.iter().enumerate() {
        column_value[b] = tableau[r][rhs_col].clone();
    }
    let mut witness: Vec<Rational> = fixed.iter().map(|f| f.clone().unwrap_or_else(Rational::zero)).collect();
    for (c, &(v, negative)) in columns.iter().enumerate() {
        if negative {
            witness[v] -= &column_value[c];
        } else {
            witness[v] += &column_value[c];
        }
    }
    Ok(LpOutcome {
        feasible: true,
        witness: Some(witness),
        phase_one_objective: Some(objective_value),
        certificate: Certificate::PhaseOne,
    })
}

/// Returns the number of cells updated.
fn pivot(tableau: &mut [Vec<Rational>], row: usize, col: usize) -> u64 {
    let inv = Rational::one() / &tableau[row][col];
    for x in tableau[row].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let pivot_line = tableau[row].clone();
    let nonzero: Vec<usize> = (0..pivot_line.len()).filter(|&c| !pivot_line[c].is_zero()).collect();
    let mut cells = pivot_line.len() as u64;
    for (r, line) in tableau.iter_mut().enumerate() {
        if r == row || line[col].is_zero() {
            continue;
        }
        let factor = line[col].clone();
        for &c in &nonzero {
            let delta = &factor * &pivot_line[c];
            line[c] -= delta;
        }
        cells += nonzero.len() as u64;
    }
    cells
}

/// Reads the `{"A", "b", "eq_rows", "var_names"}` dump (integer or `"p/q"` entries).
pub fn from_dump_json(text: &str) -> Result<LinearProgram> {
    #[derive(Deserialize)]
    struct Dump {
        #[serde(rename = "A")]
        a: Vec<Vec<crate::rational::serde_text::Text>>,
        b: Vec<crate::rational::serde_text::Text>,
        #[serde(default)]
        eq_rows: Vec<usize>,
        #[serde(default)]
        var_names: Vec<String>,
    }
    let dump: Dump = serde_json::from_str(text).map_err(|e| Error::Precondition(format!("LP dump: {e}")))?;
    if dump.a.len() != dump.b.len() {
        return Err(Error::ShapeMismatch(format!("{} rows but {} right-hand sides", dump.a.len(), dump.b.len())));
    }
    let width = dump.a.first().map_or(dump.var_names.len(), Vec::len);
    let mut rows = Vec::with_capacity(dump.a.len());
    for (r, (line, rhs)) in dump.a.into_iter().zip(dump.b).enumerate() {
        if line.len() != width {
            return Err(Error::ShapeMismatch(format!("row {r} has {} entries, expected {width}", line.len())));
        }
        let coeffs = line.into_iter().enumerate().filter(|(_, a)| !a.0.is_zero()).map(|(v, a)| (v, a.0)).collect();
        rows.push(LpRow { coeffs, rhs: rhs.0, kind: RowKind::Le });
    }
    for r in dump.eq_rows {
        rows.get_mut(r)
            .ok_or_else(|| Error::ShapeMismatch(format!("eq_rows names missing row {r}")))?
            .kind = RowKind::Eq;
    }
    LinearProgram::new(width, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn row(coeffs: &[(usize, i64)], rhs: Rational, kind: RowKind) -> LpRow {
        LpRow { coeffs: coeffs.iter().map(|&(v, a)| (v, int(a))).collect(), rhs, kind }
    }

    #[test]
    fn one_variable() {
        let lp = LinearProgram::new(
            1,
            vec![row(&[(0, 1)], int(1), RowKind::Le), row(&[(0, -1)], int(0), RowKind::Le)],
        )
        .unwrap();
        for options in [LpOptions::default(), LpOptions::simplex_only()] {
            let out = feasible_with(&lp, &options).unwrap();
            assert!(out.feasible);
            assert_eq!(out.witness, Some(vec![int(0)]));
        }
        let lp = LinearProgram::new(
            1,
            vec![row(&[(0, 1)], int(1), RowKind::Le), row(&[(0, -1)], int(-2), RowKind::Le)],
        )
        .unwrap();
        let out = feasible_with(&lp, &LpOptions::simplex_only()).unwrap();
        assert!(!out.feasible);
        assert_eq!(out.phase_one_objective, Some(int(1)));
        assert_eq!(feasible(&lp).unwrap().certificate, Certificate::BoundConflict);
    }

    #[test]
    fn fractional_only() {
        // 2x = 1 with x ≥ 0: no integer point, but feasible.
        let lp = LinearProgram::new(1, vec![row(&[(0, 2)], int(1), RowKind::Eq)]).unwrap();
        let out = feasible(&lp).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![ratio(1, 2)]));
        // x + y = 1, x − y = 0 under unit coefficients: probe finds nothing integral.
        let lp = LinearProgram::new(
            2,
            vec![row(&[(0, 1), (1, 1)], int(1), RowKind::Eq), row(&[(0, 1), (1, -1)], int(0), RowKind::Eq)],
        )
        .unwrap();
        let out = feasible(&lp).unwrap();
        assert!(out.feasible);
        assert_eq!(out.certificate, Certificate::PhaseOne);
        assert_eq!(out.witness, Some(vec![ratio(1, 2), ratio(1, 2)]));
    }

    #[test]
    fn free_variables() {
        let mut lp = LinearProgram::new(1, vec![row(&[(0, 1)], int(-3), RowKind::Eq)]).unwrap();
        assert!(!feasible(&lp).unwrap().feasible);
        lp.free[0] = true;
        let out = feasible(&lp).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![int(-3)]));
    }

    #[test]
    fn dump_parsing() {
        let lp = from_dump_json(r#"{"A":[[1,1],[1,-1]],"b":[2,"1/2"],"eq_rows":[0],"var_names":["a","b"]}"#).unwrap();
        let out = feasible(&lp).unwrap();
        assert!(out.feasible);
        assert!(lp.satisfied_by(out.witness.as_ref().unwrap()));
        assert!(from_dump_json(r#"{"A":[[1]],"b":[]}"#).is_err());
    }

    #[test]
    fn deterministic() {
        let lp = LinearProgram::new(
            3,
            vec![
                row(&[(0, 1), (1, 1), (2, 1)], int(3), RowKind::Eq),
                row(&[(0, 1), (1, -1)], ratio(1, 3), RowKind::Le),
                row(&[(2, -1)], int(-1), RowKind::Le),
            ],
        )
        .unwrap();
        let a = feasible_with(&lp, &LpOptions::simplex_only()).unwrap();
        let b = feasible_with(&lp, &LpOptions::simplex_only()).unwrap();
        assert_eq!(a, b);
        assert!(a.feasible);
    }
}
