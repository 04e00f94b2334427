//! Laws of finite graphs, neighborhood-statistics profiles, truncation to a
//! finite resolution, and total variation between profiles.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::ball::{self, Code, CodeKind};
use crate::error::{Error, Result};
use crate::graph::{Config, FiniteGraph};
use crate::oracle;
use crate::Rational;

/// Numeric type a profile may carry: exact rationals or `f64` estimates.
pub trait Mass: Clone + PartialOrd + Signed + Debug {}

impl<T: Clone + PartialOrd + Signed + Debug> Mass for T {}

fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(num.into(), den.into())
}

/// A finitely supported probability measure on rooted graphs.
///
/// Atoms are keyed by the code of the whole rooted component, encoded at
/// radius equal to its vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicMeasure {
    atoms: BTreeMap<Code, Rational>,
}

/// Re-key a stabilized rooted code at radius equal to its vertex count.
pub(crate) fn normalize_atom(code: &Code) -> Result<Code> {
    let ball = code.to_ball().into_rooted()?;
    if !ball.is_stabilized() {
        return Err(Error::InvalidMeasure(format!(
            "atom {code} is a radius-{} ball, not a whole component",
            ball.radius()
        )));
    }
    ball::ball_code(ball.graph(), 0, ball.graph().vertex_count())
}

impl AtomicMeasure {
    /// Validates positivity and exact normalization; atoms are re-keyed to
    /// their stabilized codes and merged.
    pub fn new<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Code, Rational)>,
    {
        let mut merged: BTreeMap<Code, Rational> = BTreeMap::new();
        for (code, weight) in atoms {
            if !weight.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "atom {code} has non-positive weight {weight}"
                )));
            }
            *merged
                .entry(normalize_atom(&code)?)
                .or_insert_with(Rational::zero) += weight;
        }
        let total: Rational = merged.values().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { atoms: merged })
    }

    pub fn dirac(code: &Code) -> Result<Self> {
        Self::new([(code.clone(), Rational::one())])
    }

    /// Unchecked constructor for atoms already known to be normalized.
    pub(crate) fn from_normalized(atoms: BTreeMap<Code, Rational>) -> Self {
        Self { atoms }
    }

    pub fn atoms(&self) -> &BTreeMap<Code, Rational> {
        &self.atoms
    }

    pub fn mass(&self, code: &Code) -> Rational {
        self.atoms.get(code).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Masses of radius-`r` ball classes: the measure seen at resolution `r`.
///
/// Used for rooted balls (`p_G(alpha, r)`) as well as birooted balls, where
/// the total mass is an expected degree rather than 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusProfile<M = Rational> {
    kind: CodeKind,
    radius: usize,
    masses: BTreeMap<Code, M>,
}

pub type BirootedProfile<M = Rational> = RadiusProfile<M>;

impl<M: Mass> RadiusProfile<M> {
    /// Every key must have the declared kind and radius; zero masses are
    /// dropped.
    pub fn new(kind: CodeKind, radius: usize, masses: BTreeMap<Code, M>) -> Result<Self> {
        for code in masses.keys() {
            if code.kind() != kind || code.radius() != radius {
                return Err(Error::InvalidProfile(format!(
                    "key {code} is a radius-{} {} code, expected radius-{radius} {kind}",
                    code.radius(),
                    code.kind()
                )));
            }
        }
        let masses = masses.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(Self {
            kind,
            radius,
            masses,
        })
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn masses(&self) -> &BTreeMap<Code, M> {
        &self.masses
    }

    pub fn mass(&self, code: &Code) -> M {
        self.masses.get(code).cloned().unwrap_or_else(M::zero)
    }

    pub fn total(&self) -> M {
        self.masses
            .values()
            .fold(M::zero(), |acc, m| acc + m.clone())
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }
}

/// Profiles for radii `0..=R`, indexed by radius.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProfileFamily {
    profiles: Vec<RadiusProfile>,
}

impl ProfileFamily {
    pub fn new(profiles: Vec<RadiusProfile>) -> Result<Self> {
        for (r, p) in profiles.iter().enumerate() {
            if p.radius() != r || p.kind() != CodeKind::Rooted {
                return Err(Error::InvalidProfile(format!(
                    "entry {r} holds a radius-{} {} profile",
                    p.radius(),
                    p.kind()
                )));
            }
        }
        Ok(Self { profiles })
    }

    pub fn of_graph(g: &FiniteGraph, max_radius: usize, config: &Config) -> Result<Self> {
        let profiles = (0..=max_radius)
            .map(|r| profile_of_graph(g, r, config))
            .collect::<Result<_>>()?;
        Ok(Self { profiles })
    }

    pub fn of_measure(m: &AtomicMeasure, max_radius: usize) -> Result<Self> {
        let profiles = (0..=max_radius)
            .map(|r| truncate_measure(m, r))
            .collect::<Result<_>>()?;
        Ok(Self { profiles })
    }

    pub fn profiles(&self) -> &[RadiusProfile] {
        &self.profiles
    }

    pub fn max_radius(&self) -> Option<usize> {
        self.profiles.len().checked_sub(1)
    }
}

fn tally(codes: impl IntoIterator<Item = Code>, n: usize) -> BTreeMap<Code, Rational> {
    let mut counts: BTreeMap<Code, usize> = BTreeMap::new();
    for code in codes {
        *counts.entry(code).or_insert(0) += 1;
    }
    counts.into_iter().map(|(c, k)| (c, ratio(k, n))).collect()
}

/// The law of a finite graph: the rooted component seen from a uniformly
/// random vertex. Vertices share an atom exactly when they share an
/// automorphism orbit, so atom masses are `|Aut(G) o| / |V(G)|`.
pub fn law_of_graph(g: &FiniteGraph, config: &Config) -> Result<AtomicMeasure> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    config.check_graph(g)?;
    let codes = (0..g.vertex_count())
        .map(|v| ball::component_code(g, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(AtomicMeasure::from_normalized(tally(
        codes,
        g.vertex_count(),
    )))
}

/// Orbit masses from an exhaustive automorphism search; reference for
/// [`law_of_graph`] on graphs with at most 8 vertices.
pub fn orbit_masses_bruteforce(g: &FiniteGraph, config: &Config) -> Result<AtomicMeasure> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > 8 {
        return Err(Error::TooManyVertices(n));
    }
    config.check_graph(g)?;
    let reps = oracle::orbit_representatives(g);
    let mut orbit_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &reps {
        *orbit_size.entry(r).or_insert(0) += 1;
    }
    let mut atoms = BTreeMap::new();
    for (rep, size) in orbit_size {
        let code = ball::component_code(g, rep)?;
        if atoms.insert(code, ratio(size, n)).is_some() {
            return Err(Error::OracleInconsistency(format!(
                "orbit of vertex {rep} shares a code with another orbit"
            )));
        }
    }
    Ok(AtomicMeasure::from_normalized(atoms))
}

/// `p_G(alpha, r)` for every radius-`r` class `alpha`.
pub fn profile_of_graph(g: &FiniteGraph, r: usize, config: &Config) -> Result<RadiusProfile> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    config.check_graph(g)?;
    let codes = (0..g.vertex_count())
        .map(|v| ball::ball_code(g, v, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadiusProfile {
        kind: CodeKind::Rooted,
        radius: r,
        masses: tally(codes, g.vertex_count()),
    })
}

/// Evaluate `m` on the sets `T_r(alpha)`: each atom contributes its weight to
/// the code of its own radius-`r` ball.
pub fn truncate_measure(m: &AtomicMeasure, r: usize) -> Result<RadiusProfile> {
    let mut masses: BTreeMap<Code, Rational> = BTreeMap::new();
    for (atom, w) in m.atoms() {
        let key = ball::truncate_rooted(atom, r)?;
        *masses.entry(key).or_insert_with(Rational::zero) += w;
    }
    Ok(RadiusProfile {
        kind: CodeKind::Rooted,
        radius: r,
        masses,
    })
}

/// Half the `l1` distance between two profiles of equal radius and kind.
pub fn tv_distance(p: &RadiusProfile, q: &RadiusProfile) -> Result<Rational> {
    if p.radius() != q.radius() {
        return Err(Error::RadiusMismatch(p.radius(), q.radius()));
    }
    if p.kind() != q.kind() {
        return Err(Error::InvalidProfile(
            "cannot compare rooted with birooted profiles".into(),
        ));
    }
    let mut sum = Rational::zero();
    for code in p
        .masses()
        .keys()
        .chain(q.masses().keys().filter(|c| !p.masses().contains_key(*c)))
    {
        sum += (p.mass(code) - q.mass(code)).abs();
    }
    Ok(sum / Rational::from_integer(2.into()))
}

/// Outcome of [`check_refinement`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refinement {
    Consistent,
    /// Aggregating the radius-`radius` profile down to `coarser` disagrees
    /// with the stored radius-`coarser` profile at `code`.
    Violated {
        radius: usize,
        coarser: usize,
        code: Code,
    },
}

/// Verify that truncating each profile to every smaller radius reproduces
/// the stored profile there. Pairs are visited by increasing `radius`, then
/// decreasing `coarser`.
pub fn check_refinement(f: &ProfileFamily) -> Result<Refinement> {
    let profiles = f.profiles();
    for r in 1..profiles.len() {
        for s in (0..r).rev() {
            let mut aggregated: BTreeMap<Code, Rational> = BTreeMap::new();
            for (code, w) in profiles[r].masses() {
                *aggregated
                    .entry(ball::truncate_rooted(code, s)?)
                    .or_insert_with(Rational::zero) += w;
            }
            let stored = profiles[s].masses();
            let mismatch = aggregated
                .keys()
                .chain(stored.keys())
                .filter(|c| aggregated.get(*c) != stored.get(*c))
                .min();
            if let Some(code) = mismatch {
                return Ok(Refinement::Violated {
                    radius: r,
                    coarser: s,
                    code: code.clone(),
                });
            }
        }
    }
    Ok(Refinement::Consistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn cfg() -> Config {
        Config::default()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn law_of_cycle_is_dirac() {
        let law = law_of_graph(&gen::cycle(5), &cfg()).unwrap();
        assert_eq!(law.len(), 1);
        assert_eq!(
            law.mass(&ball::component_code(&gen::cycle(5), 0).unwrap()),
            q(1, 1)
        );
    }

    #[test]
    fn law_of_path() {
        let p3 = gen::path(3);
        let law = law_of_graph(&p3, &cfg()).unwrap();
        assert_eq!(law.len(), 2);
        assert_eq!(law.mass(&ball::component_code(&p3, 0).unwrap()), q(2, 3));
        assert_eq!(law.mass(&ball::component_code(&p3, 1).unwrap()), q(1, 3));
        assert_eq!(law, orbit_masses_bruteforce(&p3, &cfg()).unwrap());
    }

    #[test]
    fn law_of_two_edges() {
        let g = gen::path(2).disjoint_union(&gen::path(2));
        let law = law_of_graph(&g, &cfg()).unwrap();
        assert_eq!(law.len(), 1);
        assert_eq!(
            law.mass(&ball::component_code(&gen::path(2), 0).unwrap()),
            q(1, 1)
        );
        assert_eq!(
            law_of_graph(&FiniteGraph::empty(0), &cfg()),
            Err(Error::EmptyGraph)
        );
    }

    #[test]
    fn bruteforce_oracle() {
        let star = gen::star(3);
        let m = orbit_masses_bruteforce(&star, &cfg()).unwrap();
        assert_eq!(m.mass(&ball::component_code(&star, 0).unwrap()), q(1, 4));
        assert_eq!(m.mass(&ball::component_code(&star, 1).unwrap()), q(3, 4));
        let c4 = orbit_masses_bruteforce(&gen::cycle(4), &cfg()).unwrap();
        assert_eq!(c4.len(), 1);
        assert_eq!(
            orbit_masses_bruteforce(&gen::path(9), &cfg()),
            Err(Error::TooManyVertices(9))
        );
    }

    #[test]
    fn profiles() {
        let p3 = gen::path(3);
        let p = profile_of_graph(&p3, 1, &cfg()).unwrap();
        assert_eq!(
            p.mass(&ball::ball_code(&gen::path(2), 0, 1).unwrap()),
            q(2, 3)
        );
        assert_eq!(p.mass(&ball::ball_code(&p3, 1, 1).unwrap()), q(1, 3));
        let c4 = profile_of_graph(&gen::cycle(4), 1, &cfg()).unwrap();
        assert_eq!(c4.masses().len(), 1);
        assert_eq!(c4.mass(&ball::ball_code(&p3, 1, 1).unwrap()), q(1, 1));
        let single = ball::ball_code(&FiniteGraph::empty(1), 0, 0).unwrap();
        let zero = profile_of_graph(&gen::cycle(7), 0, &cfg()).unwrap();
        assert_eq!(zero.mass(&single), q(1, 1));
    }

    #[test]
    fn truncation_matches_profile() {
        let p3 = gen::path(3);
        let law = law_of_graph(&p3, &cfg()).unwrap();
        assert_eq!(
            truncate_measure(&law, 1).unwrap(),
            profile_of_graph(&p3, 1, &cfg()).unwrap()
        );
        let single = ball::ball_code(&FiniteGraph::empty(1), 0, 0).unwrap();
        assert_eq!(truncate_measure(&law, 0).unwrap().mass(&single), q(1, 1));
        let c10 = AtomicMeasure::dirac(&ball::component_code(&gen::cycle(10), 0).unwrap()).unwrap();
        let t = truncate_measure(&c10, 2).unwrap();
        assert_eq!(
            t.mass(&ball::ball_code(&gen::path(5), 2, 2).unwrap()),
            q(1, 1)
        );
    }

    #[test]
    fn tv_examples() {
        let c4 = profile_of_graph(&gen::cycle(4), 1, &cfg()).unwrap();
        let p3 = profile_of_graph(&gen::path(3), 1, &cfg()).unwrap();
        assert_eq!(tv_distance(&c4, &c4).unwrap(), q(0, 1));
        assert_eq!(tv_distance(&c4, &p3).unwrap(), q(2, 3));
        let c3 = profile_of_graph(&gen::cycle(3), 1, &cfg()).unwrap();
        assert_eq!(tv_distance(&c3, &c4).unwrap(), q(1, 1));
        let other = profile_of_graph(&gen::cycle(4), 2, &cfg()).unwrap();
        assert_eq!(tv_distance(&c4, &other), Err(Error::RadiusMismatch(1, 2)));
    }

    #[test]
    fn measure_validation() {
        let p3 = gen::path(3);
        let end = ball::component_code(&p3, 0).unwrap();
        let mid = ball::component_code(&p3, 1).unwrap();
        assert!(matches!(
            AtomicMeasure::new([(end.clone(), q(1, 2)), (mid.clone(), q(2, 5))]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            AtomicMeasure::new([(end.clone(), q(3, 2)), (mid.clone(), q(-1, 2))]),
            Err(Error::InvalidMeasure(_))
        ));
        // A radius-1 ball of P5 is not a component.
        let partial = ball::ball_code(&gen::path(5), 2, 1).unwrap();
        assert!(matches!(
            AtomicMeasure::dirac(&partial),
            Err(Error::InvalidMeasure(_))
        ));
        // Stabilized codes at other radii are re-keyed.
        let end_r7 = ball::ball_code(&p3, 0, 7).unwrap();
        assert_eq!(
            AtomicMeasure::dirac(&end_r7).unwrap(),
            AtomicMeasure::dirac(&end).unwrap()
        );
    }

    #[test]
    fn refinement_checks() {
        let g = gen::path(6).disjoint_union(&gen::cycle(5));
        let family = ProfileFamily::of_graph(&g, 4, &cfg()).unwrap();
        assert_eq!(check_refinement(&family).unwrap(), Refinement::Consistent);
        assert_eq!(
            check_refinement(&ProfileFamily::default()).unwrap(),
            Refinement::Consistent
        );

        // Move mass at radius 2 between two codes with different radius-1
        // truncations (an end vertex and an interior vertex of the path).
        let mut profiles = family.profiles().to_vec();
        let end = ball::ball_code(&g, 0, 2).unwrap();
        let interior = ball::ball_code(&g, 2, 2).unwrap();
        let mut masses = profiles[2].masses().clone();
        *masses.get_mut(&end).unwrap() -= q(1, 11);
        *masses.get_mut(&interior).unwrap() += q(1, 11);
        profiles[2] = RadiusProfile::new(CodeKind::Rooted, 2, masses).unwrap();
        let broken = ProfileFamily::new(profiles).unwrap();
        match check_refinement(&broken).unwrap() {
            Refinement::Violated {
                radius, coarser, ..
            } => assert_eq!((radius, coarser), (2, 1)),
            Refinement::Consistent => panic!("violation not detected"),
        }
    }
}
