//! Measurable graphings on the rational unit circle.
//!
//! A graphing is a finite list of measure-preserving involutions of
//! `[0, 1)`: reflections `x -> (c - x) mod 1` and interval swaps that
//! exchange pairs of disjoint intervals by translation. The leafgraph joins
//! `x` to each image `i_j(x) != x`. All arithmetic is exact, so vertex
//! identity in an explored ball is decidable equality of rationals.
//!
//! Sampling draws `x = u / 2^64` with `u` a uniform 64-bit integer taken from
//! a per-sample ChaCha stream, so estimates depend only on
//! `(graphing, radius, samples, seed)` and not on the number of workers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ball::{self, Code, CodeKind, RootedBall};
use crate::error::{Error, Result};
use crate::graph::{Config, FiniteGraph};
use crate::law::{BirootedProfile, RadiusProfile};
use crate::Rational;

/// A point of the unit circle `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Rational);

impl Point {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() || value >= Rational::one() {
            return Err(Error::InvalidArgument(format!(
                "point {value} is outside [0, 1)"
            )));
        }
        Ok(Self(value))
    }

    /// Reduce any rational modulo 1.
    pub fn wrap(value: Rational) -> Self {
        let floor = value.floor();
        Self(value - floor)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `numerator / 2^64`.
    pub fn from_u64_fraction(numerator: u64) -> Self {
        Self(Rational::new(BigInt::from(numerator), BigInt::one() << 64))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// `[a, a + len) <-> [b, b + len)` by translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapPair {
    pub a: Rational,
    pub b: Rational,
    pub len: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvolutionSpec {
    /// `x -> (c - x) mod 1`.
    Reflection { c: Rational },
    /// Interval swaps; identity outside the listed intervals.
    Swap { pairs: Vec<SwapPair> },
}

impl InvolutionSpec {
    pub fn reflection(c: Rational) -> Self {
        Self::Reflection { c }
    }

    pub fn swap(pairs: Vec<SwapPair>) -> Self {
        Self::Swap { pairs }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let Self::Swap { pairs } = self else {
            return Ok(());
        };
        let zero = Rational::zero();
        let one = Rational::one();
        let mut intervals: Vec<(&Rational, Rational)> = Vec::with_capacity(2 * pairs.len());
        for p in pairs {
            if !p.len.is_positive() {
                return Err(format!("interval length {} is not positive", p.len));
            }
            for start in [&p.a, &p.b] {
                let end = start + &p.len;
                if *start < zero || end > one {
                    return Err(format!("interval [{start}, {end}) leaves [0, 1)"));
                }
                intervals.push((start, end));
            }
        }
        intervals.sort();
        for w in intervals.windows(2) {
            if *w[1].0 < w[0].1 {
                return Err(format!(
                    "intervals [{}, {}) and [{}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                ));
            }
        }
        Ok(())
    }
}

/// Image of `x` under the involution.
pub fn apply_involution(i: &InvolutionSpec, x: &Point) -> Point {
    match i {
        InvolutionSpec::Reflection { c } => Point::wrap(c - &x.0),
        InvolutionSpec::Swap { pairs } => {
            for p in pairs {
                let (a_end, b_end) = (&p.a + &p.len, &p.b + &p.len);
                if x.0 >= p.a && x.0 < a_end {
                    return Point(&x.0 - &p.a + &p.b);
                }
                if x.0 >= p.b && x.0 < b_end {
                    return Point(&x.0 - &p.b + &p.a);
                }
            }
            x.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphingSpec {
    pub label: String,
    pub involutions: Vec<InvolutionSpec>,
}

impl GraphingSpec {
    pub fn new(label: impl Into<String>, involutions: Vec<InvolutionSpec>) -> Self {
        Self {
            label: label.into(),
            involutions,
        }
    }
}

/// Structural validity: at least one and at most `delta` involutions, and
/// every swap list made of disjoint intervals inside `[0, 1)`. Reflections
/// and translations preserve Lebesgue measure, and disjoint swaps square to
/// the identity, so nothing else needs checking.
pub fn validate_graphing(s: &GraphingSpec, config: &Config) -> Result<()> {
    let k = s.involutions.len();
    if k == 0 {
        return Err(Error::InvalidGraphing("no involutions".into()));
    }
    if k > config.delta() {
        return Err(Error::InvalidGraphing(format!(
            "{k} involutions exceed the degree bound {}",
            config.delta()
        )));
    }
    for (j, inv) in s.involutions.iter().enumerate() {
        inv.validate()
            .map_err(|reason| Error::InvalidGraphing(format!("involution {}: {reason}", j + 1)))?;
    }
    Ok(())
}

/// Ball of radius `r` around `x` in the leafgraph, with its points; vertex 0
/// is `x`.
fn explore(
    s: &GraphingSpec,
    x: &Point,
    r: usize,
    config: &Config,
) -> Result<(FiniteGraph, Vec<Point>)> {
    let budget = config.ball_budget(r);
    let mut points = vec![x.clone()];
    let mut depth = vec![0usize];
    let mut index: HashMap<Point, usize> = HashMap::from([(x.clone(), 0)]);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut head = 0;
    while head < points.len() {
        let u = head;
        head += 1;
        for inv in &s.involutions {
            let y = apply_involution(inv, &points[u]);
            if y == points[u] {
                continue;
            }
            let v = match index.get(&y) {
                Some(&v) => v,
                None if depth[u] < r => {
                    if points.len() >= budget {
                        return Err(Error::BudgetExceeded {
                            point: x.to_string(),
                            budget,
                        });
                    }
                    let v = points.len();
                    index.insert(y.clone(), v);
                    points.push(y);
                    depth.push(depth[u] + 1);
                    v
                }
                None => continue,
            };
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let graph = FiniteGraph::new(points.len(), edges)?;
    Ok((graph, points))
}

/// The rooted radius-`r` ball around `x` in the leafgraph.
pub fn leaf_ball(s: &GraphingSpec, x: &Point, r: usize, config: &Config) -> Result<RootedBall> {
    validate_graphing(s, config)?;
    let (graph, _) = explore(s, x, r, config)?;
    RootedBall::new(graph, 0, r)
}

/// The sampled point for sample `index` under `seed`.
pub fn sample_point(seed: u64, index: u64) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    Point::from_u64_fraction(rng.next_u64())
}

/// Per-code sums of per-sample counts and of their squares.
type Tally = BTreeMap<Code, (u64, u64)>;

#[derive(Default)]
struct Partial {
    tally: Tally,
    error: Option<(u64, Error)>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (code, (s, sq)) in other.tally {
            let slot = self.tally.entry(code).or_insert((0, 0));
            slot.0 += s;
            slot.1 += sq;
        }
        self.error = match (self.error, other.error) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Run `per_sample` for samples `0..n` on `jobs` workers (0 = all cores).
/// Counts are summed, so the result does not depend on scheduling; when
/// samples fail, the error of the smallest failing index is reported.
fn tally_samples<F>(n: u64, jobs: usize, per_sample: F) -> Result<[Tally; 2]>
where
    F: Fn(u64) -> Result<[Vec<Code>; 2]> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let record = |codes: &[Code], partial: &mut Partial| {
        let mut local: BTreeMap<&Code, u64> = BTreeMap::new();
        for c in codes {
            *local.entry(c).or_insert(0) += 1;
        }
        for (code, k) in local {
            let slot = partial.tally.entry(code.clone()).or_insert((0, 0));
            slot.0 += k;
            slot.1 += k * k;
        }
    };
    let (first, second) = pool.install(|| {
        (0..n)
            .into_par_iter()
            .fold(
                || (Partial::default(), Partial::default()),
                |(mut a, mut b), i| {
                    if a.error.is_none() {
                        match per_sample(i) {
                            Ok([x, y]) => {
                                record(&x, &mut a);
                                record(&y, &mut b);
                            }
                            Err(e) => a.error = Some((i, e)),
                        }
                    }
                    (a, b)
                },
            )
            .reduce(
                || (Partial::default(), Partial::default()),
                |(a1, b1), (a2, b2)| (a1.merge(a2), b1.merge(b2)),
            )
    });
    if let Some((_, e)) = first.error {
        return Err(e);
    }
    Ok([first.tally, second.tally])
}

fn summarize(tally: &Tally, n: u64) -> (BTreeMap<Code, f64>, BTreeMap<Code, f64>) {
    let nf = n as f64;
    let mut masses = BTreeMap::new();
    let mut stderr = BTreeMap::new();
    for (code, &(sum, sq)) in tally {
        let mean = sum as f64 / nf;
        let var = (sq as f64 / nf - mean * mean).max(0.0);
        masses.insert(code.clone(), mean);
        stderr.insert(code.clone(), (var / nf).sqrt());
    }
    (masses, stderr)
}

/// Monte Carlo estimate of the radius-`r` profile of a graphing law.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub profile: RadiusProfile<f64>,
    /// Standard error of each mass.
    pub stderr: BTreeMap<Code, f64>,
    /// Number of samples that produced each code.
    pub counts: BTreeMap<Code, u64>,
    pub sample_count: u64,
    pub seed: u64,
}

fn check_samples(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be positive".into(),
        ));
    }
    Ok(())
}

/// Estimate `mu({x : [B(x, r), x] = alpha})` for every class `alpha`.
pub fn estimate_profile(
    s: &GraphingSpec,
    r: usize,
    n: u64,
    seed: u64,
    jobs: usize,
    config: &Config,
) -> Result<Estimate> {
    validate_graphing(s, config)?;
    check_samples(n)?;
    let [tally, _] = tally_samples(n, jobs, |i| {
        let x = sample_point(seed, i);
        let (graph, _) = explore(s, &x, r, config)?;
        Ok([vec![ball::ball_code(&graph, 0, r)?], Vec::new()])
    })?;
    let (masses, stderr) = summarize(&tally, n);
    Ok(Estimate {
        profile: RadiusProfile::new(CodeKind::Rooted, r, masses)?,
        stderr,
        counts: tally.iter().map(|(c, &(k, _))| (c.clone(), k)).collect(),
        sample_count: n,
        seed,
    })
}

/// Sampled forward and backward edge profiles at radius `r - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeEstimate {
    pub forward: BirootedProfile<f64>,
    pub backward: BirootedProfile<f64>,
    pub forward_stderr: BTreeMap<Code, f64>,
    pub backward_stderr: BTreeMap<Code, f64>,
    /// Incidences recorded per sample, on average.
    pub mean_degree: f64,
    pub sample_count: u64,
    pub seed: u64,
}

impl EdgeEstimate {
    /// Largest per-code standard error on either side.
    pub fn max_stderr(&self) -> f64 {
        self.forward_stderr
            .values()
            .chain(self.backward_stderr.values())
            .fold(0.0, |m, &s| m.max(s))
    }
}

/// For each sample `x` and neighbour `y`: the forward code is the radius-
/// `(r - 1)` birooted ball `(x, y)` cut from the radius-`r` ball around `x`;
/// the backward code is `(y, x)` from a fresh radius-`(r - 1)` exploration
/// around `y`. Each incidence weighs `1 / n`.
pub fn estimate_edge_profiles(
    s: &GraphingSpec,
    r: usize,
    n: u64,
    seed: u64,
    jobs: usize,
    config: &Config,
) -> Result<EdgeEstimate> {
    if r < 2 {
        return Err(Error::RadiusTooSmall { min: 2, got: r });
    }
    validate_graphing(s, config)?;
    check_samples(n)?;
    let [forward, backward] = tally_samples(n, jobs, |i| {
        let x = sample_point(seed, i);
        let (graph, points) = explore(s, &x, r, config)?;
        let mut fwd = Vec::with_capacity(graph.degree(0));
        let mut bwd = Vec::with_capacity(graph.degree(0));
        for &y in graph.neighbors(0) {
            fwd.push(ball::birooted_code(&graph, 0, y, r - 1)?);
            let (around_y, y_points) = explore(s, &points[y], r - 1, config)?;
            let back = y_points
                .iter()
                .position(|p| *p == x)
                .expect("x is a neighbour of y");
            bwd.push(ball::birooted_code(&around_y, 0, back, r - 1)?);
        }
        Ok([fwd, bwd])
    })?;
    let incidences: u64 = forward.values().map(|&(k, _)| k).sum();
    let (fwd_masses, forward_stderr) = summarize(&forward, n);
    let (bwd_masses, backward_stderr) = summarize(&backward, n);
    Ok(EdgeEstimate {
        forward: RadiusProfile::new(CodeKind::Birooted, r - 1, fwd_masses)?,
        backward: RadiusProfile::new(CodeKind::Birooted, r - 1, bwd_masses)?,
        forward_stderr,
        backward_stderr,
        mean_degree: incidences as f64 / n as f64,
        sample_count: n,
        seed,
    })
}

/// A finite graph as a graphing of the uniform measure on its vertices:
/// vertex `x` owns `[x/n, (x+1)/n)`, and each colour class of a greedy
/// proper edge colouring becomes one swap involution. Greedy colouring may
/// use up to `2 * delta - 1` colours, so the derived graphing can need a larger
/// degree bound than the graph itself; see [`required_delta`].
pub fn graph_as_graphing(g: &FiniteGraph) -> Result<GraphingSpec> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.vertex_count();
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for (u, v) in g.edges() {
        let color = (0..)
            .find(|c| !used[u].contains(c) && !used[v].contains(c))
            .expect("unbounded search");
        used[u].push(color);
        used[v].push(color);
        if color == classes.len() {
            classes.push(Vec::new());
        }
        classes[color].push((u, v));
    }
    let width = Rational::new(BigInt::one(), BigInt::from(n));
    let at = |v: usize| Rational::new(BigInt::from(v), BigInt::from(n));
    let mut involutions: Vec<InvolutionSpec> = classes
        .into_iter()
        .map(|class| {
            InvolutionSpec::swap(
                class
                    .into_iter()
                    .map(|(u, v)| SwapPair {
                        a: at(u),
                        b: at(v),
                        len: width.clone(),
                    })
                    .collect(),
            )
        })
        .collect();
    if involutions.is_empty() {
        involutions.push(InvolutionSpec::swap(Vec::new()));
    }
    Ok(GraphingSpec::new(
        format!("graph with {n} vertices and {} edges", g.edge_count()),
        involutions,
    ))
}

/// Degree bound needed to accept `s`: the base bound, raised to the number
/// of involutions if that is larger.
pub fn required_delta(s: &GraphingSpec, base: &Config) -> Result<Config> {
    Config::new(base.delta().max(s.involutions.len()))
        .map(|c| c.with_max_ball_vertices(base.max_ball_vertices()))
}

/// Midpoint of the interval owned by vertex `x` in [`graph_as_graphing`].
pub fn vertex_midpoint(n: usize, x: usize) -> Point {
    Point(Rational::new(BigInt::from(2 * x + 1), BigInt::from(2 * n)))
}
