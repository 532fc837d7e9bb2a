//! Membership in the moment cone `Δ(Q, β)` of an n-complete bipartite quiver,
//! the Klyachko cone as a special case, and a sampler for the moment map.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glued::{build_glued_program, feasibility, KInput};
use crate::lp::{Certificate, LpOptions};
use crate::partition::{partition_from_weight, weight_pattern, Partition, RationalSequence};
use crate::quiver::{build_flag_extension, BipartiteSpec, FlagExtension, Weight};
use crate::rational::{self, int, Rational};
use crate::semiinv::ExtendedWeight;

/// A candidate point `(λ(x_1), …, λ(x_m), −λ(y_1), …, −λ(y_ℓ))` of the cone.
/// Sink spectra are stored without the sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TupleJson", into = "TupleJson")]
pub struct SpectrumTuple {
    pub source_spectra: Vec<Vec<Rational>>,
    pub sink_spectra: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct TupleJson {
    #[serde(with = "rational::serde_text::nested")]
    sources: Vec<Vec<Rational>>,
    #[serde(with = "rational::serde_text::nested")]
    sinks: Vec<Vec<Rational>>,
}

impl TryFrom<TupleJson> for SpectrumTuple {
    type Error = Error;
    fn try_from(j: TupleJson) -> Result<Self> {
        SpectrumTuple::new(j.sources, j.sinks)
    }
}

impl From<SpectrumTuple> for TupleJson {
    fn from(t: SpectrumTuple) -> Self {
        TupleJson { sources: t.source_spectra, sinks: t.sink_spectra }
    }
}

impl SpectrumTuple {
    /// Rejects sequences that are not weakly decreasing.
    pub fn new(source_spectra: Vec<Vec<Rational>>, sink_spectra: Vec<Vec<Rational>>) -> Result<Self> {
        for (k, seq) in source_spectra.iter().chain(&sink_spectra).enumerate() {
            if seq.windows(2).any(|w| w[0] < w[1]) {
                let shown: Vec<String> = seq.iter().map(rational::format).collect();
                return Err(Error::InvalidSpec(format!(
                    "spectrum {} ({}) is not weakly decreasing",
                    k + 1,
                    shown.join(",")
                )));
            }
        }
        Ok(SpectrumTuple { source_spectra, sink_spectra })
    }

    pub fn from_integers(sources: &[&[i64]], sinks: &[&[i64]]) -> Result<Self> {
        let conv = |s: &[&[i64]]| s.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect();
        SpectrumTuple::new(conv(sources), conv(sinks))
    }

    pub fn zero(spec: &BipartiteSpec) -> Self {
        SpectrumTuple {
            source_spectra: (0..spec.m).map(|i| vec![Rational::zero(); spec.source_beta(i)]).collect(),
            sink_spectra: (0..spec.ell).map(|j| vec![Rational::zero(); spec.sink_beta(j)]).collect(),
        }
    }

    fn all(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.source_spectra.iter().chain(&self.sink_spectra)
    }

    pub fn check_shape(&self, spec: &BipartiteSpec) -> Result<()> {
        if self.source_spectra.len() != spec.m || self.sink_spectra.len() != spec.ell {
            return Err(Error::ShapeMismatch(format!(
                "tuple has {} source and {} sink spectra, quiver has {} sources and {} sinks",
                self.source_spectra.len(),
                self.sink_spectra.len(),
                spec.m,
                spec.ell
            )));
        }
        let expected = (0..spec.m).map(|i| spec.source_beta(i)).chain((0..spec.ell).map(|j| spec.sink_beta(j)));
        for (k, (seq, want)) in self.all().zip(expected).enumerate() {
            if seq.len() != want {
                return Err(Error::ShapeMismatch(format!(
                    "spectrum {} has length {}, β gives {}",
                    k + 1,
                    seq.len(),
                    want
                )));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, r: &Rational) -> SpectrumTuple {
        let scale = |s: &Vec<Vec<Rational>>| s.iter().map(|v| v.iter().map(|x| x * r).collect()).collect();
        SpectrumTuple { source_spectra: scale(&self.source_spectra), sink_spectra: scale(&self.sink_spectra) }
    }

    pub fn source_trace(&self) -> Rational {
        self.source_spectra.iter().flatten().sum()
    }

    pub fn sink_trace(&self) -> Rational {
        self.sink_spectra.iter().flatten().sum()
    }

    fn has_negative_entry(&self) -> bool {
        self.all().flatten().any(|x| x < &Rational::zero())
    }

    fn denominator(&self) -> num_bigint::BigInt {
        rational::common_denominator(self.all().flatten())
    }
}

/// `σ̃_λ`: each flag carries the weight pattern of its spectrum.
pub fn tuple_to_weight(ext: &FlagExtension, t: &SpectrumTuple) -> Result<Weight> {
    t.check_shape(&ext.base)?;
    let mut values = vec![Rational::zero(); ext.vertex_count()];
    for (base, seq) in t.all().enumerate() {
        let pattern = weight_pattern(seq, ext.side(base));
        for (v, x) in ext.flag_left_to_right(base).into_iter().zip(pattern) {
            values[v] = x;
        }
    }
    Ok(Weight::new(values))
}

/// The spectra read back from a weight, flag by flag; inverse of [`tuple_to_weight`].
pub fn weight_to_partitions(ext: &FlagExtension, sigma: &Weight) -> Result<(Vec<RationalSequence>, Vec<RationalSequence>)> {
    sigma.check_domain(&ext.quiver)?;
    let read = |base: usize| {
        let values: Vec<Rational> = ext.flag_left_to_right(base).iter().map(|&v| sigma.values[v].clone()).collect();
        partition_from_weight(&values, ext.side(base))
    };
    let sources = (0..ext.base.m).map(read).collect();
    let sinks = (ext.base.m..ext.base.m + ext.base.ell).map(read).collect();
    Ok((sources, sinks))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentVerdict {
    pub member: bool,
    /// Why the tuple was rejected before any program was built.
    pub diagnostic: Option<String>,
    /// `σ̃` of the tuple with denominators cleared.
    pub sigma: Option<Vec<i64>>,
    pub f: Option<u64>,
    pub certificate: Option<Certificate>,
    #[serde(with = "rational::serde_text::option_vec")]
    pub witness: Option<Vec<Rational>>,
}

impl MomentVerdict {
    fn rejected(msg: String) -> Self {
        MomentVerdict { member: false, diagnostic: Some(msg), sigma: None, f: None, certificate: None, witness: None }
    }
}

pub fn moment_cone_membership(spec: &BipartiteSpec, t: &SpectrumTuple) -> Result<bool> {
    Ok(moment_cone_verdict(spec, t, &LpOptions::default())?.member)
}

/// Decides `t ∈ Δ(Q, β)` through feasibility of the glued program of `σ̃_t`.
pub fn moment_cone_verdict(spec: &BipartiteSpec, t: &SpectrumTuple, options: &LpOptions) -> Result<MomentVerdict> {
    t.check_shape(spec)?;
    if t.has_negative_entry() {
        return Ok(MomentVerdict::rejected("a spectrum has a negative entry".into()));
    }
    if t.source_trace() != t.sink_trace() {
        return Ok(MomentVerdict::rejected(format!(
            "source trace {} differs from sink trace {}",
            rational::format(&t.source_trace()),
            rational::format(&t.sink_trace())
        )));
    }
    let cleared = t.scaled(&Rational::from_integer(t.denominator()));
    let ext = build_flag_extension(spec);
    let sigma = tuple_to_weight(&ext, &cleared)?;
    let w = ExtendedWeight::new(&ext, &sigma)?;
    let inp = w.k_input(&ext)?;
    let outcome = feasibility(&build_glued_program(&inp)?, options)?;
    Ok(MomentVerdict {
        member: outcome.feasible,
        diagnostic: None,
        sigma: Some(w.sigma),
        f: Some(inp.f),
        certificate: Some(outcome.certificate),
        witness: outcome.witness,
    })
}

/// `(λ, μ, ν)` with `H_1 + H_2 = H_3` for Hermitian `n × n` matrices. Shorter
/// sequences are padded with zeros.
///
/// Shifting by the smallest eigenvalues, `λ̃(1) = λ − λ_n`, `λ̃(2) = μ − μ_n` and
/// `λ̃(3) = ν − λ_n − μ_n`, turns the triple into a point of `Δ(•→•←•, (n,n,n))`.
pub fn klyachko_membership(n: usize, lambda: &[Rational], mu: &[Rational], nu: &[Rational]) -> Result<bool> {
    let (spec, tuple) = klyachko_tuple(n, lambda, mu, nu)?;
    moment_cone_membership(&spec, &tuple)
}

/// The quiver and shifted tuple used by [`klyachko_membership`].
pub fn klyachko_tuple(n: usize, lambda: &[Rational], mu: &[Rational], nu: &[Rational]) -> Result<(BipartiteSpec, SpectrumTuple)> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let pad = |s: &[Rational], name: &str| -> Result<Vec<Rational>> {
        if s.len() > n {
            return Err(Error::ShapeMismatch(format!("{name} has {} entries, more than n = {n}", s.len())));
        }
        let mut v = s.to_vec();
        v.resize(n, Rational::zero());
        Ok(v)
    };
    let (lambda, mu, nu) = (pad(lambda, "λ")?, pad(mu, "μ")?, pad(nu, "ν")?);
    let shift = |s: &[Rational], by: &Rational| s.iter().map(|x| x - by).collect::<Vec<_>>();
    let (a, b) = (lambda[n - 1].clone(), mu[n - 1].clone());
    let tuple = SpectrumTuple::new(vec![shift(&lambda, &a), shift(&mu, &b)], vec![shift(&nu, &(&a + &b))])?;
    let spec = BipartiteSpec::new(2, 1, 1, vec![n as u64, n as u64, n as u64])?;
    Ok((spec, tuple))
}

/// A random representation and the spectra of its moment map.
#[derive(Debug, Clone, Serialize)]
pub struct MomentMapSample {
    pub spec: BipartiteSpec,
    /// One matrix per arrow `x_i → y_j`, of size `β(y_j) × β(x_i)`, in the
    /// order of the base quiver's arrows.
    #[serde(skip)]
    pub matrices: Vec<DMatrix<Complex64>>,
    /// Descending eigenvalues of `Σ_{ta = x} W_a^* W_a`.
    pub source_spectra: Vec<Vec<f64>>,
    /// Descending eigenvalues of `Σ_{ha = y} W_a W_a^*`.
    pub sink_spectra: Vec<Vec<f64>>,
}

/// Draws every matrix entry with independent standard normal real and
/// imaginary parts from a generator seeded with `seed`.
pub fn sample_moment_map(spec: &BipartiteSpec, seed: u64) -> MomentMapSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = spec.quiver();
    let matrices = q
        .arrows()
        .iter()
        .map(|&(t, h)| {
            let (rows, cols) = (beta_of(spec, h), beta_of(spec, t));
            DMatrix::from_fn(rows, cols, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
        })
        .collect();
    moment_map_spectra(spec, matrices)
}

/// Spectra of the moment map at the given matrices.
pub fn moment_map_spectra(spec: &BipartiteSpec, matrices: Vec<DMatrix<Complex64>>) -> MomentMapSample {
    let q = spec.quiver();
    let mut blocks: Vec<DMatrix<Complex64>> =
        (0..q.vertex_count()).map(|v| DMatrix::zeros(beta_of(spec, v), beta_of(spec, v))).collect();
    for (&(t, h), w) in q.arrows().iter().zip(&matrices) {
        blocks[t] += w.adjoint() * w;
        blocks[h] += w * w.adjoint();
    }
    let spectra: Vec<Vec<f64>> = blocks
        .into_iter()
        .map(|b| {
            let mut eig: Vec<f64> = b.symmetric_eigenvalues().iter().copied().collect();
            eig.sort_by(|x, y| y.total_cmp(x));
            eig
        })
        .collect();
    MomentMapSample {
        spec: spec.clone(),
        matrices,
        source_spectra: spectra[..spec.m].to_vec(),
        sink_spectra: spectra[spec.m..].to_vec(),
    }
}

fn beta_of(spec: &BipartiteSpec, v: usize) -> usize {
    if v < spec.m {
        spec.source_beta(v)
    } else {
        spec.sink_beta(v - spec.m)
    }
}

/// Continued-fraction rounding of every eigenvalue; values within `tolerance`
/// of zero become zero.
pub fn rationalize_sample(sample: &MomentMapSample, tolerance: f64) -> Result<SpectrumTuple> {
    let conv = |s: &Vec<Vec<f64>>| -> Vec<Vec<Rational>> {
        s.iter()
            .map(|v| {
                v.iter()
                    .map(|&x| if x.abs() <= tolerance { Rational::zero() } else { rational::rationalize(x, tolerance) })
                    .collect()
            })
            .collect()
    };
    SpectrumTuple::new(conv(&sample.source_spectra), conv(&sample.sink_spectra))
}

/// Outcome of the slackened membership test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxedCheck {
    pub feasible: bool,
    /// Slack allowed on every right-hand side, `relative · trace`.
    #[serde(with = "rational::serde_text")]
    pub epsilon: Rational,
    /// Largest change of a right-hand side when the tuple is moved onto the grid.
    #[serde(with = "rational::serde_text")]
    pub shift: Rational,
    /// Grid spacing `1/D`.
    pub grid: u64,
    pub certificate: Option<Certificate>,
}

/// Whether the glued program of `t` stays feasible once every right-hand side
/// is slackened by `ε = relative · trace`.
///
/// The tuple is moved to the grid `(1/D)ℤ` with `D·trace ≈ 10^6`, the trace
/// imbalance is absorbed into the largest entry, and the exact integral
/// program of the grid tuple is solved. A feasible point `x` of that program
/// gives `x/D` with `Ax ≤ b(t) + shift`, so the answer is a certified yes
/// whenever `shift ≤ ε`. Otherwise the check reports infeasible.
pub fn relaxed_membership(spec: &BipartiteSpec, t: &SpectrumTuple, relative: f64) -> Result<RelaxedCheck> {
    t.check_shape(spec)?;
    let trace = t.source_trace().max(t.sink_trace());
    let epsilon = &trace * rational::rationalize(relative, relative * 1e-6);
    if trace.is_zero() {
        return Ok(RelaxedCheck { feasible: !t.has_negative_entry(), epsilon, shift: Rational::zero(), grid: 1, certificate: None });
    }
    let grid = (1e6 / trace.to_f64().unwrap_or(1.0)).ceil().max(1.0) as u64;
    let d = int(grid as i64);
    let round = |s: &Vec<Vec<Rational>>| -> Vec<Vec<i64>> {
        s.iter()
            .map(|v| v.iter().map(|x| rational::to_i64(&(x * &d).round()).unwrap_or(0).max(0)).collect())
            .collect()
    };
    let mut sources = round(&t.source_spectra);
    let mut sinks = round(&t.sink_spectra);
    let imbalance: i64 = sources.iter().flatten().sum::<i64>() - sinks.iter().flatten().sum::<i64>();
    if imbalance > 0 {
        sinks[0][0] += imbalance;
    } else {
        sources[0][0] -= imbalance;
    }
    let as_parts = |s: &[Vec<i64>]| s.iter().map(|v| Partition::new(v.iter().map(|&x| x as u64).collect())).collect::<Result<Vec<_>>>();
    let inp = KInput {
        lambdas: as_parts(&sources)?,
        nus: as_parts(&sinks)?,
        f: sources.iter().map(|v| v[0] as u64).sum(),
        d: spec.d(),
        n: spec.n as u64,
    };
    let prog = build_glued_program(&inp)?;

    let to_rat = |s: &[Vec<i64>]| -> Vec<Vec<Rational>> { s.iter().map(|v| v.iter().map(|&x| int(x) / &d).collect()).collect() };
    let exact = rhs_values(&t.source_spectra, &t.sink_spectra, &inp, prog.length);
    let on_grid = rhs_values(&to_rat(&sources), &to_rat(&sinks), &inp, prog.length);
    let shift = exact
        .iter()
        .zip(&on_grid)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    if shift > epsilon {
        return Ok(RelaxedCheck { feasible: false, epsilon, shift, grid, certificate: None });
    }
    let outcome = feasibility(&prog, &LpOptions::default())?;
    Ok(RelaxedCheck { feasible: outcome.feasible, epsilon, shift, grid, certificate: Some(outcome.certificate) })
}

/// The nonzero right-hand sides of the glued program as functions of real
/// spectra: the four padded border sequences and the shared border total.
fn rhs_values(sources: &[Vec<Rational>], sinks: &[Vec<Rational>], inp: &KInput, length: usize) -> Vec<Rational> {
    let f: Rational = sources.iter().map(|v| v[0].clone()).sum();
    let rect = |rows: u64| vec![f.clone(); rows as usize];
    let mut left: Vec<Vec<Rational>> = sources.to_vec();
    left.extend(std::iter::repeat_n(rect(inp.d), inp.n as usize));
    let mut right: Vec<Vec<Rational>> = sinks.to_vec();
    right.push(rect(inp.n * inp.d));
    let mut out = Vec::new();
    for factors in [left, right] {
        let (small, big) = staircase(&factors, length);
        let total = big.iter().sum::<Rational>() - small.iter().sum::<Rational>();
        out.extend(small);
        out.extend(big);
        out.push(total);
    }
    out
}

/// Real-valued version of the block staircase pair built from the factors.
fn staircase(factors: &[Vec<Rational>], length: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut small = Vec::new();
    let mut big = Vec::new();
    for (j, part) in factors.iter().enumerate() {
        let shift: Rational = factors[j + 1..].iter().map(|p| p.first().cloned().unwrap_or_else(Rational::zero)).sum();
        for k in 0..length {
            let p = part.get(k).cloned().unwrap_or_else(Rational::zero);
            small.push(shift.clone());
            big.push(p + &shift);
        }
    }
    (small, big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lr::lr_tableaux;
    use crate::quiver::build_flag_extension;

    fn cherry(n: u64) -> BipartiteSpec {
        BipartiteSpec::new(2, 1, 1, vec![n, n, n]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn weight_of_the_diagonal_example() {
        let ext = build_flag_extension(&cherry(2));
        let t = SpectrumTuple::from_integers(&[&[1, 0], &[1, 0]], &[&[1, 1]]).unwrap();
        let named = tuple_to_weight(&ext, &t).unwrap().to_named(&ext.quiver);
        let get = |name: &str| rational::to_i64(&named[name]).unwrap();
        assert_eq!((get("x1.f1"), get("x1")), (1, 0));
        assert_eq!((get("x2.f1"), get("x2")), (1, 0));
        assert_eq!((get("y1"), get("y1.f1")), (-1, 0));
        let zero = SpectrumTuple::zero(&ext.base);
        assert!(tuple_to_weight(&ext, &zero).unwrap().values.iter().all(Zero::is_zero));
    }

    #[test]
    fn weight_round_trip() {
        let spec = BipartiteSpec::new(2, 2, 1, vec![3, 1, 2, 2]).unwrap();
        let ext = build_flag_extension(&spec);
        let t = SpectrumTuple::new(
            vec![ints(&[5, 2, 2]), vec![rational::ratio(7, 2)]],
            vec![ints(&[4, 1]), vec![rational::ratio(5, 3), rational::ratio(1, 3)]],
        )
        .unwrap();
        let sigma = tuple_to_weight(&ext, &t).unwrap();
        let (sources, sinks) = weight_to_partitions(&ext, &sigma).unwrap();
        let back: Vec<Vec<Rational>> = sources.into_iter().map(|s| s.parts).collect();
        assert_eq!(back, t.source_spectra);
        let back: Vec<Vec<Rational>> = sinks.into_iter().map(|s| s.parts).collect();
        assert_eq!(back, t.sink_spectra);
    }

    #[test]
    fn membership_examples() {
        let spec = cherry(2);
        let yes = SpectrumTuple::from_integers(&[&[1, 0], &[1, 0]], &[&[1, 1]]).unwrap();
        assert!(moment_cone_membership(&spec, &yes).unwrap());
        let yes = SpectrumTuple::from_integers(&[&[1, 0], &[1, 0]], &[&[2, 0]]).unwrap();
        assert!(moment_cone_membership(&spec, &yes).unwrap());
        let negative = SpectrumTuple::from_integers(&[&[1, 0], &[1, 0]], &[&[3, -1]]).unwrap();
        let v = moment_cone_verdict(&spec, &negative, &LpOptions::default()).unwrap();
        assert!(!v.member);
        assert!(v.diagnostic.unwrap().contains("negative"));
        let short = SpectrumTuple::from_integers(&[&[1], &[1, 0]], &[&[2, 0]]).unwrap();
        assert!(matches!(moment_cone_membership(&spec, &short), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn non_monotone_is_rejected() {
        assert!(SpectrumTuple::from_integers(&[&[0, 1]], &[&[1, 0]]).is_err());
        let bad = serde_json::from_str::<SpectrumTuple>(r#"{"sources":[["0","1"]],"sinks":[["1","0"]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn membership_is_scale_invariant() {
        let spec = cherry(2);
        let t = SpectrumTuple::from_integers(&[&[2, 1], &[1, 0]], &[&[3, 1]]).unwrap();
        let base = moment_cone_membership(&spec, &t).unwrap();
        assert!(base);
        for r in [rational::ratio(1, 2), int(2), int(3)] {
            assert_eq!(moment_cone_membership(&spec, &t.scaled(&r)).unwrap(), base);
        }
        let outside = SpectrumTuple::from_integers(&[&[1, 0], &[1, 0]], &[&[1, 1]]).unwrap().scaled(&rational::ratio(1, 3));
        assert!(moment_cone_membership(&spec, &outside).unwrap());
    }

    #[test]
    fn klyachko_examples() {
        assert!(klyachko_membership(2, &ints(&[1, 0]), &ints(&[1, 0]), &ints(&[1, 1])).unwrap());
        assert!(!klyachko_membership(2, &ints(&[1, 0]), &ints(&[1, 0]), &ints(&[2, 1])).unwrap());
        assert!(klyachko_membership(3, &ints(&[2, 1]), &ints(&[2, 1]), &ints(&[3, 2, 1])).unwrap());
        // Negative eigenvalues are fine before the shift.
        assert!(klyachko_membership(2, &ints(&[0, -1]), &ints(&[1, 0]), &ints(&[1, -1])).unwrap());
        assert!(klyachko_membership(1, &ints(&[1, 0]), &ints(&[1]), &ints(&[2])).is_err());
    }

    #[test]
    fn klyachko_matches_lr_on_a_few_triples() {
        let p = |v: &[u64]| Partition::new(v.to_vec()).unwrap();
        for (l, m, n) in [(p(&[1]), p(&[1]), p(&[1, 1])), (p(&[2, 1]), p(&[1]), p(&[2, 2])), (p(&[2]), p(&[2]), p(&[2, 1, 1]))] {
            let expected = lr_tableaux(&n, &l, &m) > 0;
            let got = klyachko_membership(3, &l.to_rationals(), &m.to_rationals(), &n.to_rationals()).unwrap();
            assert_eq!(got, expected, "{l} {m} {n}");
        }
    }

    #[test]
    fn sampler_basics() {
        let spec = BipartiteSpec::new(2, 1, 2, vec![2, 1, 3]).unwrap();
        let zero = moment_map_spectra(
            &spec,
            spec.quiver().arrows().iter().map(|&(t, h)| DMatrix::zeros(beta_of(&spec, h), beta_of(&spec, t))).collect(),
        );
        assert!(zero.source_spectra.iter().chain(&zero.sink_spectra).flatten().all(|&x| x == 0.0));
        for seed in 0..5 {
            let s = sample_moment_map(&spec, seed);
            let all: Vec<f64> = s.source_spectra.iter().chain(&s.sink_spectra).flatten().copied().collect();
            assert!(all.iter().all(|&x| x >= -1e-9));
            let src: f64 = s.source_spectra.iter().flatten().sum();
            let snk: f64 = s.sink_spectra.iter().flatten().sum();
            assert!((src - snk).abs() <= 1e-9 * src.max(1.0));
            for v in s.source_spectra.iter().chain(&s.sink_spectra) {
                assert!(v.windows(2).all(|w| w[0] >= w[1]));
            }
        }
        let a = sample_moment_map(&spec, 7);
        let b = sample_moment_map(&spec, 7);
        assert_eq!(a.source_spectra, b.source_spectra);
    }

    #[test]
    fn relaxed_check_accepts_a_sample() {
        let spec = BipartiteSpec::new(1, 1, 1, vec![2, 2]).unwrap();
        let s = sample_moment_map(&spec, 1);
        let t = rationalize_sample(&s, 1e-6).unwrap();
        let check = relaxed_membership(&spec, &t, 1e-4).unwrap();
        assert!(check.shift <= check.epsilon);
        assert!(check.feasible);
    }
}
