//! Dimensions of weight spaces of semi-invariants for the flag extension of an
//! n-complete bipartite quiver, and effective-weight membership.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glued::{build_glued_program, feasibility, KInput};
use crate::lp::{Certificate, LpOptions};
use crate::lr::{lr_product, multi_lr, multi_lr_by_tableaux, multi_lr_expansion, ShapeBound};
use crate::partition::{partition_from_weight, partitions_bounded, rectangle, Partition};
use crate::quiver::{solve_alpha, FlagExtension, Side, Weight};
use crate::rational::{int, Rational};

/// An integral weight on `Q_β` with everything read off from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedWeight {
    pub sigma: Vec<i64>,
    /// Suffix sums along each source flag, `λ(x_1..x_m)`.
    pub lambdas: Vec<Vec<i64>>,
    /// Negated suffix sums along each sink flag, `ν(y_1..y_ℓ)`.
    pub nus: Vec<Vec<i64>>,
    /// `σ̃ = ⟨α, ·⟩`.
    pub alpha: Vec<i64>,
    /// `Σ_i λ_1(x_i)`.
    pub f: i64,
    /// `σ̃ · β̃`.
    pub pairing: i64,
    /// Flag vertices where the sign condition fails.
    pub sign_violations: Vec<String>,
}

impl ExtendedWeight {
    pub fn new(ext: &FlagExtension, sigma: &Weight) -> Result<Self> {
        sigma.check_domain(&ext.quiver)?;
        let sigma = sigma.to_integers(&ext.quiver)?;
        let m = ext.base.m;
        let ell = ext.base.ell;
        let read = |base: usize, side: Side| -> Vec<i64> {
            let values: Vec<Rational> = ext.flag_left_to_right(base).iter().map(|&v| int(sigma[v])).collect();
            partition_from_weight(&values, side)
                .parts
                .iter()
                .map(|p| crate::rational::to_i64(p).expect("sums of integers"))
                .collect()
        };
        let lambdas: Vec<Vec<i64>> = (0..m).map(|i| read(i, Side::Source)).collect();
        let nus: Vec<Vec<i64>> = (0..ell).map(|j| read(m + j, Side::Sink)).collect();

        let mut sign_violations = Vec::new();
        for base in 0..m + ell {
            for &v in ext.flag(base) {
                let bad = match ext.side(base) {
                    Side::Source => sigma[v] < 0,
                    Side::Sink => sigma[v] > 0,
                };
                if bad {
                    sign_violations.push(ext.quiver.name(v).to_string());
                }
            }
        }
        let alpha = solve_alpha(&ext.quiver, &sigma)?;
        let f: i64 = lambdas.iter().map(|l| l[0]).sum();
        let f_alpha: i64 = (0..m).map(|i| alpha[ext.source_vertex(i)]).sum();
        if f != f_alpha {
            return Err(Error::Precondition(format!(
                "Σ λ_1(x_i) = {f} but Σ α(x_i) = {f_alpha}"
            )));
        }
        let pairing = sigma
            .iter()
            .zip(&ext.beta_tilde.values)
            .map(|(&s, &b)| s * b as i64)
            .sum();
        Ok(ExtendedWeight { sigma, lambdas, nus, alpha, f, pairing, sign_violations })
    }

    pub fn alpha_is_dimension_vector(&self) -> bool {
        self.alpha.iter().all(|&a| a >= 0)
    }

    /// Checks `σ̃ · β̃ = 0` and the sign conditions.
    pub fn check(&self) -> Result<()> {
        if self.pairing != 0 {
            return Err(Error::Precondition(format!("σ̃·β̃ = {} is not zero", self.pairing)));
        }
        if !self.sign_violations.is_empty() {
            return Err(Error::Precondition(format!(
                "sign condition fails at {}",
                self.sign_violations.join(", ")
            )));
        }
        Ok(())
    }

    /// The input of the glued polytope; needs [`ExtendedWeight::check`] to pass.
    pub fn k_input(&self, ext: &FlagExtension) -> Result<KInput> {
        self.check()?;
        let to_partition = |v: &Vec<i64>| Partition::new(v.iter().map(|&x| x as u64).collect());
        Ok(KInput {
            lambdas: self.lambdas.iter().map(to_partition).collect::<Result<_>>()?,
            nus: self.nus.iter().map(to_partition).collect::<Result<_>>()?,
            f: self.f as u64,
            d: ext.base.d(),
            n: ext.base.n as u64,
        })
    }
}

/// `σ̃ = ⟨α, ·⟩` on `Q_β`.
pub fn weight_to_alpha(ext: &FlagExtension, sigma: &Weight) -> Result<Vec<i64>> {
    sigma.check_domain(&ext.quiver)?;
    solve_alpha(&ext.quiver, &sigma.to_integers(&ext.quiver)?)
}

/// `Σ_{μ, ℓ(μ) ≤ nd} c^μ_{λ(1..m),(f^d)^n} · c^μ_{ν(1..ℓ),(f^{nd})}` from the two
/// product expansions. The right one is cut at `nd` rows and the left one is
/// kept inside the union of the shapes found on the right.
pub fn k_formula(inp: &KInput) -> u64 {
    let nd = (inp.n * inp.d) as usize;
    let right = multi_lr_expansion(&inp.right_factors(), &ShapeBound::max_len(nd));
    let mut union = vec![0u64; nd];
    for mu in right.keys() {
        for (u, &part) in union.iter_mut().zip(mu.canonical_parts()) {
            *u = (*u).max(part);
        }
    }
    let union = Partition::new(union).expect("componentwise maximum of partitions");
    let left = multi_lr_expansion(&inp.left_factors(), &ShapeBound::within(&union));
    left.iter()
        .filter_map(|(mu, a)| right.get(mu).map(|b| a * b))
        .sum()
}

/// The same sum with `μ` listed explicitly (`|μ| = Σ|λ(i)| + nfd`,
/// `μ_1 ≤ Σλ_1(i) + nf`) and every coefficient from tableaux.
pub fn k_formula_by_enumeration(inp: &KInput) -> u64 {
    let nd = (inp.n * inp.d) as usize;
    let size: u64 = inp.lambdas.iter().map(Partition::size).sum::<u64>() + inp.n * inp.f * inp.d;
    let cap: u64 = inp.lambdas.iter().map(Partition::first).sum::<u64>() + inp.n * inp.f;
    let left = inp.left_factors();
    let right = inp.right_factors();
    partitions_bounded(size, cap, nd)
        .into_iter()
        .filter(|mu| inp.nus.iter().all(|nu| nu.is_contained_in(mu)))
        .map(|mu| {
            let b = multi_lr_by_tableaux(&mu, &right);
            if b == 0 {
                0
            } else {
                b * multi_lr_by_tableaux(&mu, &left)
            }
        })
        .sum()
}

/// `dim SI(Q_β, β̃)_σ̃`: zero when `α` has a negative entry, the `Σ_μ` formula otherwise.
pub fn semiinv_dim(ext: &FlagExtension, sigma: &Weight) -> Result<u64> {
    let w = ExtendedWeight::new(ext, sigma)?;
    w.check()?;
    if !w.alpha_is_dimension_vector() {
        return Ok(0);
    }
    Ok(k_formula(&w.k_input(ext)?))
}

/// One multiple coefficient `c^{ν(1)+(f^{nd})}_{λ(1..m),(f^d)^n}` when there is one sink.
///
/// When `ℓ(ν(1)) > nd` the sink's Schur functor on `C^{nd}` vanishes and so
/// does every term of the `Σ_μ` sum; the single coefficient need not, so that
/// case returns zero.
pub fn semiinv_dim_single_sink(ext: &FlagExtension, sigma: &Weight) -> Result<u64> {
    if ext.base.ell != 1 {
        return Err(Error::Precondition(format!("single-sink formula needs ℓ = 1, got ℓ = {}", ext.base.ell)));
    }
    let w = ExtendedWeight::new(ext, sigma)?;
    let inp = w.k_input(ext)?;
    let nd = (inp.n * inp.d) as usize;
    if inp.nus[0].len() > nd {
        return Ok(0);
    }
    let target = inp.nus[0].add(&rectangle(nd, inp.f));
    Ok(multi_lr(&target, &inp.left_factors()))
}

/// Both sides of the n-Kronecker identity:
/// `Σ_{μ(1..n)} c^λ_{μ(1..n)} c^ν_{μ(1..n)}` and `c^{ν+(λ_1^{nd})}_{λ,(λ_1^d)^n}`.
pub fn kronecker_identity_check(d: usize, n: usize, lambda: &Partition, nu: &Partition) -> Result<(u64, u64)> {
    if d == 0 || n == 0 {
        return Err(Error::Precondition("d and n must be positive".into()));
    }
    if lambda.len() > d || nu.len() > d {
        return Err(Error::Precondition(format!("λ = {lambda} and ν = {nu} need at most {d} parts")));
    }
    if (n as u64) * lambda.first() < nu.first() {
        return Err(Error::Precondition(format!("n·λ_1 = {} is below ν_1 = {}", n as u64 * lambda.first(), nu.first())));
    }
    let mut memo = HashMap::new();
    let lhs = tuple_pairing(n, lambda, nu, &mut memo);
    let target = nu.add(&rectangle(n * d, lambda.first()));
    let mut factors = vec![lambda.clone()];
    factors.extend(std::iter::repeat_n(rectangle(d, lambda.first()), n));
    Ok((lhs, multi_lr(&target, &factors)))
}

/// `Σ_{μ(1..k)} c^a_{μ(1..k)} c^b_{μ(1..k)}`, peeling off `μ(k)`.
fn tuple_pairing(k: usize, a: &Partition, b: &Partition, memo: &mut HashMap<(usize, Partition, Partition), u64>) -> u64 {
    if a.size() != b.size() {
        return 0;
    }
    if k == 1 {
        return u64::from(a == b);
    }
    let key = (k, a.clone(), b.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    let cap_len = a.len().min(b.len());
    let cap_part = a.first().min(b.first());
    for s in 0..=a.size() {
        for mu in partitions_bounded(s, cap_part, cap_len) {
            if !mu.is_contained_in(a) || !mu.is_contained_in(b) {
                continue;
            }
            // c^a_{a', μ} over every a' with |a'| = |a| − |μ|.
            let rest = a.size() - s;
            let candidates_a = co_factors(a, &mu, rest);
            if candidates_a.is_empty() {
                continue;
            }
            let candidates_b = co_factors(b, &mu, rest);
            for (a2, ca) in &candidates_a {
                for (b2, cb) in &candidates_b {
                    let inner = tuple_pairing(k - 1, a2, b2, memo);
                    total += ca * cb * inner;
                }
            }
        }
    }
    memo.insert(key, total);
    total
}

/// Every `κ` of size `size` with `c^a_{κ,μ} > 0`, paired with that coefficient.
fn co_factors(a: &Partition, mu: &Partition, size: u64) -> Vec<(Partition, u64)> {
    partitions_bounded(size, a.first(), a.len())
        .into_iter()
        .filter(|kappa| kappa.is_contained_in(a))
        .filter_map(|kappa| {
            let c = lr_product(&kappa, mu, &ShapeBound::within(a)).get(a).copied().unwrap_or(0);
            (c > 0).then_some((kappa, c))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub diagnostic: Option<String>,
    pub certificate: Option<Certificate>,
}

/// Whether `σ` lies in the effective cone of `(Q_β, β̃)`, by feasibility of
/// the glued polytope of a positive integral multiple of `σ`.
pub fn effective_weight_membership(ext: &FlagExtension, sigma: &Weight) -> Result<Membership> {
    effective_weight_membership_with(ext, sigma, &LpOptions::default())
}

pub fn effective_weight_membership_with(ext: &FlagExtension, sigma: &Weight, options: &LpOptions) -> Result<Membership> {
    sigma.check_domain(&ext.quiver)?;
    let denominator = sigma
        .values
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let scaled = sigma.scaled(&Rational::from_integer(denominator));
    let pairing = scaled.pair(&ext.beta_tilde);
    let reject = |msg: String| Membership { member: false, diagnostic: Some(msg), certificate: None };
    if !pairing.is_zero() {
        return Ok(reject(format!("σ·β̃ = {} is not zero", crate::rational::format(&pairing))));
    }
    let w = ExtendedWeight::new(ext, &scaled)?;
    if !w.sign_violations.is_empty() {
        return Ok(reject(format!("sign condition fails at {}", w.sign_violations.join(", "))));
    }
    let prog = build_glued_program(&w.k_input(ext)?)?;
    let outcome = feasibility(&prog, options)?;
    Ok(Membership { member: outcome.feasible, diagnostic: None, certificate: Some(outcome.certificate) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{build_flag_extension, BipartiteSpec};

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn zero_weight() {
        let ext = build_flag_extension(&BipartiteSpec::new(2, 1, 1, vec![2, 1, 2]).unwrap());
        let zero = Weight::zero(ext.vertex_count());
        assert_eq!(semiinv_dim(&ext, &zero).unwrap(), 1);
        assert_eq!(semiinv_dim_single_sink(&ext, &zero).unwrap(), 1);
        assert_eq!(weight_to_alpha(&ext, &zero).unwrap(), vec![0; ext.vertex_count()]);
        assert!(effective_weight_membership(&ext, &zero).unwrap().member);
    }

    #[test]
    fn two_sources_one_sink() {
        // λ(1) = λ(2) = (1), ν = (2): f = 2, d = 2.
        let ext = build_flag_extension(&BipartiteSpec::new(2, 1, 1, vec![1, 1, 1]).unwrap());
        let sigma = Weight::from_integers(&[1, 1, -2]);
        let inp = ExtendedWeight::new(&ext, &sigma).unwrap().k_input(&ext).unwrap();
        assert_eq!(inp.f, 2);
        assert_eq!(inp.d, 2);
        let expected = k_formula_by_enumeration(&inp);
        assert_eq!(semiinv_dim(&ext, &sigma).unwrap(), expected);
        assert_eq!(semiinv_dim_single_sink(&ext, &sigma).unwrap(), expected);
    }

    #[test]
    fn unbalanced_is_an_error() {
        let ext = build_flag_extension(&BipartiteSpec::new(1, 1, 1, vec![1, 1]).unwrap());
        assert!(semiinv_dim(&ext, &Weight::from_integers(&[1, 0])).is_err());
        let m = effective_weight_membership(&ext, &Weight::from_integers(&[1, 0])).unwrap();
        assert!(!m.member);
        assert!(m.diagnostic.unwrap().contains("not zero"));
    }

    #[test]
    fn sign_violation_is_not_effective() {
        let ext = build_flag_extension(&BipartiteSpec::new(1, 1, 1, vec![2, 1]).unwrap());
        // x1.f1 = −1, x1 = 1, y1 = −1: balanced but negative on a source flag.
        let sigma = Weight::from_integers(&[-1, 1, -1]);
        assert_eq!(ExtendedWeight::new(&ext, &sigma).unwrap().pairing, 0);
        let m = effective_weight_membership(&ext, &sigma).unwrap();
        assert!(!m.member);
        assert!(m.diagnostic.unwrap().contains("x1.f1"));
    }

    #[test]
    fn single_sink_example() {
        // m = n = 1, β = (1,1), λ = (2), ν = (2): c^{(4)}_{(2),(2)} = 1.
        let ext = build_flag_extension(&BipartiteSpec::new(1, 1, 1, vec![1, 1]).unwrap());
        let sigma = Weight::from_integers(&[2, -2]);
        assert_eq!(semiinv_dim_single_sink(&ext, &sigma).unwrap(), 1);
        assert_eq!(semiinv_dim(&ext, &sigma).unwrap(), 1);
        let two_sinks = build_flag_extension(&BipartiteSpec::new(1, 2, 1, vec![1, 1, 1]).unwrap());
        assert!(semiinv_dim_single_sink(&two_sinks, &Weight::zero(3)).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_identity_check(1, 1, &p(&[3]), &p(&[3])).unwrap(), (1, 1));
        assert_eq!(kronecker_identity_check(1, 1, &p(&[3]), &p(&[2])).unwrap(), (0, 0));
        let (lhs, rhs) = kronecker_identity_check(2, 2, &p(&[1, 1]), &p(&[1, 1])).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(kronecker_identity_check(2, 1, &p(&[2, 1]), &p(&[2, 1])).unwrap(), (1, 1));
        assert!(kronecker_identity_check(1, 1, &p(&[1]), &p(&[2])).is_err());
    }

    #[test]
    fn formula_matches_enumeration_on_small_weights() {
        // One source and one sink, both with two-step flags: x1.f1, x1, y1, y1.f1.
        let ext = build_flag_extension(&BipartiteSpec::new(1, 1, 1, vec![2, 2]).unwrap());
        let mut checked = 0;
        let mut negative = 0;
        for a in 0..=3i64 {
            for b in 0..=3i64 {
                for c in -3..=0i64 {
                    for e in -3..=0i64 {
                        let sigma = Weight::from_integers(&[a, b, c, e]);
                        let w = ExtendedWeight::new(&ext, &sigma).unwrap();
                        if w.check().is_err() {
                            continue;
                        }
                        let dim = semiinv_dim(&ext, &sigma).unwrap();
                        assert_eq!(dim, k_formula_by_enumeration(&w.k_input(&ext).unwrap()), "{:?}", w.sigma);
                        if !w.alpha_is_dimension_vector() {
                            assert_eq!(dim, 0);
                            negative += 1;
                        }
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 2, "{checked} {negative}");
        assert!(negative > 0);
    }
}
