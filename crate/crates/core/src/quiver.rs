//! Quivers, dimension vectors, weights, the flag extension `Q_β` and the
//! auxiliary quiver `T` with its exceptional sequence.
//!
//! Vertex ids are dense indices. On `Q_β` they follow the order: source flags
//! (by source, `f1` first), sources, sinks, sink flags (by sink, read away from
//! the sink). `T` inserts the extra sources `x{m+1}..x{m+n}`, `x0` and `y0`
//! between the sources and the sinks.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuiverJson", into = "QuiverJson")]
pub struct Quiver {
    names: Vec<String>,
    arrows: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
}

impl TryFrom<QuiverJson> for Quiver {
    type Error = Error;

    fn try_from(json: QuiverJson) -> Result<Self> {
        let lookup: HashMap<&str, usize> = json
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut arrows = Vec::with_capacity(json.arrows.len());
        for (t, h) in &json.arrows {
            let find = |v: &String| {
                lookup
                    .get(v.as_str())
                    .copied()
                    .ok_or_else(|| Error::InvalidQuiver(format!("arrow endpoint {v} is not a vertex")))
            };
            arrows.push((find(t)?, find(h)?));
        }
        Quiver::new(json.vertices, arrows)
    }
}

impl From<Quiver> for QuiverJson {
    fn from(q: Quiver) -> Self {
        let arrows = q
            .arrows
            .iter()
            .map(|&(t, h)| (q.names[t].clone(), q.names[h].clone()))
            .collect();
        QuiverJson { vertices: q.names, arrows }
    }
}

impl Quiver {
    /// Checks endpoints, acyclicity and connectedness.
    pub fn new(names: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidQuiver("no vertices".into()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex {name}")));
            }
        }
        for &(t, h) in &arrows {
            if t >= names.len() || h >= names.len() {
                return Err(Error::InvalidQuiver(format!("arrow ({t},{h}) leaves the vertex set")));
            }
        }
        let q = Quiver { names, arrows, index };
        if q.topological_order().is_none() {
            return Err(Error::InvalidQuiver("quiver has an oriented cycle".into()));
        }
        if !q.is_connected() {
            return Err(Error::InvalidQuiver("quiver is not connected".into()));
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Number of arrows from `t` to `h`.
    pub fn arrow_count(&self, t: usize, h: usize) -> usize {
        self.arrows.iter().filter(|&&a| a == (t, h)).count()
    }

    /// Kahn's algorithm; `None` when there is an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.names.len();
        let mut indegree = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(t, h) in &self.arrows {
            indegree[h] += 1;
            out[t].push(h);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &h in &out[v] {
                indegree[h] -= 1;
                if indegree[h] == 0 {
                    queue.push_back(h);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    fn is_connected(&self) -> bool {
        let n = self.names.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(t, h) in &self.arrows {
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Indicator vector `e_v`.
    pub fn simple_root(&self, v: usize) -> DimensionVector {
        let mut values = vec![0; self.names.len()];
        values[v] = 1;
        DimensionVector { values }
    }
}

/// Per-vertex values usable on either side of the Euler form.
pub trait VertexValues {
    fn len(&self) -> usize;
    fn value(&self, v: usize) -> Rational;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector {
    pub values: Vec<u64>,
}

impl DimensionVector {
    pub fn new(values: Vec<u64>) -> Self {
        DimensionVector { values }
    }

    pub fn zero(len: usize) -> Self {
        DimensionVector { values: vec![0; len] }
    }

    pub fn is_sincere(&self) -> bool {
        self.values.iter().all(|&v| v > 0)
    }

    pub fn check_domain(&self, q: &Quiver) -> Result<()> {
        check_len(q, self.values.len())
    }
}

impl VertexValues for DimensionVector {
    fn len(&self) -> usize {
        self.values.len()
    }
    fn value(&self, v: usize) -> Rational {
        Rational::from_integer(self.values[v].into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    pub values: Vec<Rational>,
}

impl Weight {
    pub fn new(values: Vec<Rational>) -> Self {
        Weight { values }
    }

    pub fn zero(len: usize) -> Self {
        Weight { values: vec![Rational::zero(); len] }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Weight { values: values.iter().map(|&v| int(v)).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// Integer entries, or the name of the first vertex that is not integral.
    pub fn to_integers(&self, q: &Quiver) -> Result<Vec<i64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(v, x)| {
                crate::rational::to_i64(x).ok_or_else(|| Error::NonIntegral(q.name(v).to_string()))
            })
            .collect()
    }

    pub fn scaled(&self, r: &Rational) -> Weight {
        Weight { values: self.values.iter().map(|v| v * r).collect() }
    }

    /// `σ·β`, the pairing with a dimension vector.
    pub fn pair(&self, beta: &DimensionVector) -> Rational {
        self.values
            .iter()
            .zip(&beta.values)
            .map(|(s, &b)| s * Rational::from_integer(b.into()))
            .sum()
    }

    pub fn check_domain(&self, q: &Quiver) -> Result<()> {
        check_len(q, self.values.len())
    }

    /// Builds a weight from `vertex name → value`; vertices left out are zero.
    pub fn from_named(q: &Quiver, named: &BTreeMap<String, Rational>) -> Result<Weight> {
        let mut values = vec![Rational::zero(); q.vertex_count()];
        for (name, value) in named {
            let v = q
                .vertex(name)
                .ok_or_else(|| {
                    Error::Precondition(format!("weight names unknown vertex {name}; vertices are {}", q.names.join(", ")))
                })?;
            values[v] = value.clone();
        }
        Ok(Weight { values })
    }

    pub fn to_named(&self, q: &Quiver) -> BTreeMap<String, Rational> {
        q.names().iter().cloned().zip(self.values.iter().cloned()).collect()
    }
}

impl VertexValues for Weight {
    fn len(&self) -> usize {
        self.values.len()
    }
    fn value(&self, v: usize) -> Rational {
        self.values[v].clone()
    }
}

impl VertexValues for [i64] {
    fn len(&self) -> usize {
        <[i64]>::len(self)
    }
    fn value(&self, v: usize) -> Rational {
        int(self[v])
    }
}

impl VertexValues for Vec<i64> {
    fn len(&self) -> usize {
        Vec::len(self)
    }
    fn value(&self, v: usize) -> Rational {
        int(self[v])
    }
}

fn check_len(q: &Quiver, got: usize) -> Result<()> {
    if got != q.vertex_count() {
        return Err(Error::DomainMismatch { expected: q.vertex_count(), got });
    }
    Ok(())
}

/// `⟨a,b⟩ = Σ_x a(x)b(x) − Σ_arrows a(ta)b(ha)`.
pub fn euler_form<A, B>(q: &Quiver, a: &A, b: &B) -> Result<Rational>
where
    A: VertexValues + ?Sized,
    B: VertexValues + ?Sized,
{
    check_len(q, a.len())?;
    check_len(q, b.len())?;
    let mut total = Rational::zero();
    for v in 0..q.vertex_count() {
        total += a.value(v) * b.value(v);
    }
    for &(t, h) in q.arrows() {
        total -= a.value(t) * b.value(h);
    }
    Ok(total)
}

/// Integer Euler form without domain checks, for internal hot paths.
pub(crate) fn euler_form_i64(q: &Quiver, a: &[i64], b: &[i64]) -> i64 {
    let diag: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let off: i64 = q.arrows().iter().map(|&(t, h)| a[t] * b[h]).sum();
    diag - off
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct BipartiteSpec {
    pub m: usize,
    pub ell: usize,
    pub n: usize,
    /// `β(x1..xm)` followed by `β(y1..yℓ)`.
    pub beta: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    m: usize,
    ell: usize,
    n: usize,
    beta: BTreeMap<String, u64>,
}

impl TryFrom<SpecJson> for BipartiteSpec {
    type Error = Error;

    fn try_from(json: SpecJson) -> Result<Self> {
        let names = base_names(json.m, json.ell);
        let mut beta = Vec::with_capacity(names.len());
        for name in &names {
            let value = json
                .beta
                .get(name)
                .ok_or_else(|| Error::InvalidSpec(format!("beta is missing vertex {name}")))?;
            beta.push(*value);
        }
        if let Some(extra) = json.beta.keys().find(|k| !names.contains(k)) {
            return Err(Error::InvalidSpec(format!("beta names unknown vertex {extra}")));
        }
        BipartiteSpec::new(json.m, json.ell, json.n, beta)
    }
}

impl From<BipartiteSpec> for SpecJson {
    fn from(spec: BipartiteSpec) -> Self {
        let beta = base_names(spec.m, spec.ell).into_iter().zip(spec.beta).collect();
        SpecJson { m: spec.m, ell: spec.ell, n: spec.n, beta }
    }
}

fn base_names(m: usize, ell: usize) -> Vec<String> {
    (1..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=ell).map(|j| format!("y{j}")))
        .collect()
}

impl BipartiteSpec {
    pub fn new(m: usize, ell: usize, n: usize, beta: Vec<u64>) -> Result<Self> {
        if m == 0 || ell == 0 || n == 0 {
            return Err(Error::InvalidSpec(format!("m={m}, ell={ell}, n={n} must all be positive")));
        }
        if beta.len() != m + ell {
            return Err(Error::InvalidSpec(format!(
                "beta has {} entries, expected {}",
                beta.len(),
                m + ell
            )));
        }
        if let Some(v) = beta.iter().position(|&b| b == 0) {
            return Err(Error::InvalidSpec(format!(
                "beta is not sincere at {}",
                base_names(m, ell)[v]
            )));
        }
        Ok(BipartiteSpec { m, ell, n, beta })
    }

    pub fn source_beta(&self, i: usize) -> usize {
        self.beta[i] as usize
    }

    pub fn sink_beta(&self, j: usize) -> usize {
        self.beta[self.m + j] as usize
    }

    /// `d = Σ_i β(x_i)`.
    pub fn d(&self) -> u64 {
        self.beta[..self.m].iter().sum()
    }

    /// The n-complete bipartite quiver itself, vertices `x1..xm, y1..yℓ`.
    pub fn quiver(&self) -> Quiver {
        let mut arrows = Vec::new();
        for i in 0..self.m {
            for j in 0..self.ell {
                for _ in 0..self.n {
                    arrows.push((i, self.m + j));
                }
            }
        }
        Quiver::new(base_names(self.m, self.ell), arrows).expect("complete bipartite quiver is valid")
    }
}

/// Source or sink side of a flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Sink,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagExtension {
    pub base: BipartiteSpec,
    pub quiver: Quiver,
    pub beta_tilde: DimensionVector,
    /// `flags[v][r-1]` is the vertex where `β̃ = r` on the flag of base vertex `v`
    /// (base vertices ordered `x1..xm, y1..yℓ`); the last entry is `v` itself.
    flags: Vec<Vec<usize>>,
}

impl FlagExtension {
    /// Vertex of the flag at base vertex `base` on which `β̃` equals `position`.
    pub fn flag_vertex_index(&self, base: usize, position: usize) -> Option<usize> {
        self.flags.get(base)?.get(position.checked_sub(1)?).copied()
    }

    /// Flag vertices of a base vertex ordered by `β̃ = 1, 2, …, β(x)`.
    pub fn flag(&self, base: usize) -> &[usize] {
        &self.flags[base]
    }

    /// Flag of base vertex `base` read left to right in the picture: towards the
    /// source along source flags, away from the sink along sink flags.
    pub fn flag_left_to_right(&self, base: usize) -> Vec<usize> {
        let mut out = self.flags[base].clone();
        if base >= self.base.m {
            out.reverse();
        }
        out
    }

    pub fn side(&self, base: usize) -> Side {
        if base < self.base.m {
            Side::Source
        } else {
            Side::Sink
        }
    }

    pub fn source_vertex(&self, i: usize) -> usize {
        *self.flags[i].last().expect("flags are nonempty")
    }

    pub fn sink_vertex(&self, j: usize) -> usize {
        *self.flags[self.base.m + j].last().expect("flags are nonempty")
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }
}

pub fn build_flag_extension(spec: &BipartiteSpec) -> FlagExtension {
    let m = spec.m;
    let ell = spec.ell;
    let mut names = Vec::new();
    let mut beta_tilde = Vec::new();
    let mut flags: Vec<Vec<usize>> = vec![Vec::new(); m + ell];

    for (i, flag) in flags.iter_mut().enumerate().take(m) {
        for r in 1..spec.source_beta(i) {
            flag.push(names.len());
            names.push(format!("x{}.f{r}", i + 1));
            beta_tilde.push(r as u64);
        }
    }
    for (i, flag) in flags.iter_mut().enumerate().take(m) {
        flag.push(names.len());
        names.push(format!("x{}", i + 1));
        beta_tilde.push(spec.beta[i]);
    }
    let sink_vertices: Vec<usize> = (0..ell)
        .map(|j| {
            names.push(format!("y{}", j + 1));
            beta_tilde.push(spec.beta[m + j]);
            names.len() - 1
        })
        .collect();
    for j in 0..ell {
        let b = spec.sink_beta(j);
        let mut flag = vec![0; b];
        flag[b - 1] = sink_vertices[j];
        for r in (1..b).rev() {
            flag[r - 1] = names.len();
            names.push(format!("y{}.f{r}", j + 1));
            beta_tilde.push(r as u64);
        }
        flags[m + j] = flag;
    }

    let mut arrows = Vec::new();
    for flag in &flags[..m] {
        arrows.extend(flag.windows(2).map(|w| (w[0], w[1])));
    }
    for flag in &flags[..m] {
        for &sink in &sink_vertices {
            arrows.extend(std::iter::repeat_n((*flag.last().unwrap(), sink), spec.n));
        }
    }
    for flag in &flags[m..] {
        arrows.extend(flag.windows(2).rev().map(|w| (w[1], w[0])));
    }

    let quiver = Quiver::new(names, arrows).expect("flag extension is a valid quiver");
    FlagExtension { base: spec.clone(), quiver, beta_tilde: DimensionVector::new(beta_tilde), flags }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeeQuiver {
    pub quiver: Quiver,
    pub spec: BipartiteSpec,
    pub d: u64,
    /// Vertex of `T` for each vertex of `Q_β` (flags, sources and sinks).
    pub from_flag_extension: Vec<usize>,
    pub x0: usize,
    pub y0: usize,
    /// `x{m+1}..x{m+n}`.
    pub extra_sources: Vec<usize>,
    /// `x1..xm` inside `T`.
    pub sources: Vec<usize>,
}

pub fn build_tee(spec: &BipartiteSpec) -> TeeQuiver {
    let ext = build_flag_extension(spec);
    build_tee_from(&ext)
}

pub fn build_tee_from(ext: &FlagExtension) -> TeeQuiver {
    let spec = &ext.base;
    let q = &ext.quiver;
    let (m, n) = (spec.m, spec.n);
    // Everything before the first sink of Q_β keeps its position.
    let first_sink = ext.sink_vertex(0);
    let mut names: Vec<String> = q.names()[..first_sink].to_vec();
    let extra_sources: Vec<usize> = (1..=n)
        .map(|k| {
            names.push(format!("x{}", m + k));
            names.len() - 1
        })
        .collect();
    let x0 = names.len();
    names.push("x0".into());
    let y0 = names.len();
    names.push("y0".into());
    let shift = names.len() - first_sink;
    names.extend(q.names()[first_sink..].iter().cloned());
    let from_flag_extension: Vec<usize> = (0..q.vertex_count())
        .map(|v| if v < first_sink { v } else { v + shift })
        .collect();

    let sources: Vec<usize> = (0..m).map(|i| from_flag_extension[ext.source_vertex(i)]).collect();
    let mut arrows = Vec::new();
    for &(t, h) in q.arrows() {
        // The bipartite arrows are replaced by the path through x0 and y0.
        if t < first_sink && h >= first_sink {
            continue;
        }
        arrows.push((from_flag_extension[t], from_flag_extension[h]));
    }
    for &x in sources.iter().chain(&extra_sources) {
        arrows.push((x, x0));
    }
    arrows.push((x0, y0));
    for j in 0..spec.ell {
        arrows.push((y0, from_flag_extension[ext.sink_vertex(j)]));
    }
    arrows.sort_unstable();

    let quiver = Quiver::new(names, arrows).expect("T is a valid quiver");
    TeeQuiver { quiver, spec: spec.clone(), d: spec.d(), from_flag_extension, x0, y0, extra_sources, sources }
}

impl TeeQuiver {
    /// `β̂ = I(β̃)`.
    pub fn beta_hat(&self, ext: &FlagExtension) -> DimensionVector {
        let gamma: Vec<i64> = ext.beta_tilde.values.iter().map(|&v| v as i64).collect();
        let hat = embed_integers(self, ext, &gamma);
        DimensionVector::new(hat.into_iter().map(|v| v as u64).collect())
    }
}

/// `I(γ)`: `γ` on flag vertices, `(n+1)C` at `x0`, `nC` at `y0`, `C` at each
/// extra source, where `C = Σ_i γ(x_i)`.
pub fn embed_vector(t: &TeeQuiver, ext: &FlagExtension, gamma: &[Rational]) -> Result<Vec<Rational>> {
    check_len(&ext.quiver, gamma.len())?;
    let c: Rational = (0..t.spec.m).map(|i| gamma[ext.source_vertex(i)].clone()).sum();
    let n = t.spec.n as i64;
    let mut out = vec![Rational::zero(); t.quiver.vertex_count()];
    for (v, g) in gamma.iter().enumerate() {
        out[t.from_flag_extension[v]] = g.clone();
    }
    for &x in &t.extra_sources {
        out[x] = c.clone();
    }
    out[t.x0] = &c * int(n + 1);
    out[t.y0] = &c * int(n);
    Ok(out)
}

pub(crate) fn embed_integers(t: &TeeQuiver, ext: &FlagExtension, gamma: &[i64]) -> Vec<i64> {
    let c: i64 = (0..t.spec.m).map(|i| gamma[ext.source_vertex(i)]).sum();
    let n = t.spec.n as i64;
    let mut out = vec![0; t.quiver.vertex_count()];
    for (v, &g) in gamma.iter().enumerate() {
        out[t.from_flag_extension[v]] = g;
    }
    for &x in &t.extra_sources {
        out[x] = c;
    }
    out[t.x0] = (n + 1) * c;
    out[t.y0] = n * c;
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSequenceData {
    pub roots: Vec<DimensionVector>,
}

impl ExceptionalSequenceData {
    /// Simple roots of the source flag vertices other than `x_i`, then
    /// `δ_1..δ_m`, then simple roots of the sinks and of the sink flags.
    /// The order matches the vertex order of `Q_β`, so `Q(ε)` comes out with
    /// the same labels.
    pub fn for_tee(t: &TeeQuiver, ext: &FlagExtension) -> Self {
        let m = t.spec.m;
        let n = t.spec.n as u64;
        let sources: Vec<usize> = (0..m).map(|i| ext.source_vertex(i)).collect();
        let roots = (0..ext.vertex_count())
            .map(|v| match sources.iter().position(|&s| s == v) {
                Some(i) => {
                    let mut delta = vec![0u64; t.quiver.vertex_count()];
                    delta[t.x0] = n + 1;
                    delta[t.y0] = n;
                    delta[t.sources[i]] = 1;
                    for &x in &t.extra_sources {
                        delta[x] = 1;
                    }
                    DimensionVector::new(delta)
                }
                None => t.quiver.simple_root(t.from_flag_extension[v]),
            })
            .collect();
        ExceptionalSequenceData { roots }
    }
}

/// `Q(ε)`: vertex `k` per root, `−⟨ε_i, ε_j⟩` arrows `i → j`. Vertices are
/// named by `labels` when given, else `1..N`.
pub fn quiver_from_exceptional_sequence(
    q: &Quiver,
    eps: &ExceptionalSequenceData,
    labels: Option<&[String]>,
) -> Result<Quiver> {
    let count = eps.roots.len();
    for root in &eps.roots {
        root.check_domain(q)?;
    }
    let as_int: Vec<Vec<i64>> = eps
        .roots
        .iter()
        .map(|r| r.values.iter().map(|&v| v as i64).collect())
        .collect();
    let mut arrows = Vec::new();
    for i in 0..count {
        for j in 0..count {
            let value = euler_form_i64(q, &as_int[i], &as_int[j]);
            let bad = (i == j && value != 1) || (i != j && value > 0);
            if bad {
                return Err(Error::NotExceptional { i: i + 1, j: j + 1, value: value.to_string() });
            }
            if i != j {
                for _ in 0..(-value) {
                    arrows.push((i, j));
                }
            }
        }
    }
    let names = match labels {
        Some(l) if l.len() == count => l.to_vec(),
        Some(l) => {
            return Err(Error::ShapeMismatch(format!("{} labels for {count} roots", l.len())));
        }
        None => (1..=count).map(|k| k.to_string()).collect(),
    };
    Quiver::new(names, arrows)
}

/// Structural equality: same vertex names and the same multiset of arrows.
pub fn same_quiver(a: &Quiver, b: &Quiver) -> bool {
    if a.names() != b.names() {
        return false;
    }
    let mut x = a.arrows().to_vec();
    let mut y = b.arrows().to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

/// Solves `⟨α, e_x⟩ = σ(x)` vertex by vertex in reverse topological order.
pub fn solve_alpha(q: &Quiver, sigma: &[i64]) -> Result<Vec<i64>> {
    check_len(q, sigma.len())?;
    let order = q.topological_order().expect("quivers are acyclic");
    let mut alpha = vec![0i64; q.vertex_count()];
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); q.vertex_count()];
    for &(t, h) in q.arrows() {
        incoming[h].push(t);
    }
    // ⟨α, e_x⟩ = α(x) − Σ_{a: h(a)=x} α(t(a)); tails precede heads.
    for &x in &order {
        let mut value = sigma[x] as i128;
        for &t in &incoming[x] {
            value += alpha[t] as i128;
        }
        alpha[x] = value
            .to_i64()
            .ok_or_else(|| Error::Overflow(format!("alpha at {}", q.name(x))))?;
    }
    Ok(alpha)
}

pub fn is_nonnegative(values: &[Rational]) -> bool {
    values.iter().all(|v| !v.is_negative())
}
