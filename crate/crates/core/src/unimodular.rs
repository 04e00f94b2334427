//! Edge measures, transport counts, the root-swap pushforward, and
//! unimodularity checks via involution invariance.
//!
//! A measure on rooted graphs is unimodular exactly when its edge measure is
//! invariant under swapping the two roots. For atomic measures this is
//! decided exactly by comparing the edge measure with its pushforward atom
//! by atom. For profiles at a finite radius `r` only the radius-`(r - 1)`
//! shadow can be compared, which is necessary but not sufficient.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ball::{self, Code, CodeKind};
use crate::error::{Error, Result};
use crate::law::{AtomicMeasure, BirootedProfile, Mass, RadiusProfile};
use crate::Rational;

/// Finitely supported measure on birooted graphs, keyed by stabilized
/// birooted codes. Its total mass is the expected root degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BirootedAtomicMeasure {
    atoms: BTreeMap<Code, Rational>,
}

impl BirootedAtomicMeasure {
    pub fn atoms(&self) -> &BTreeMap<Code, Rational> {
        &self.atoms
    }

    pub fn mass(&self, code: &Code) -> Rational {
        self.atoms.get(code).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.atoms.values().cloned().sum()
    }

    /// Aggregate atoms by their radius-`r` birooted ball, `r >= 1`.
    pub fn truncate(&self, r: usize) -> Result<BirootedProfile> {
        let mut masses: BTreeMap<Code, Rational> = BTreeMap::new();
        for (atom, w) in &self.atoms {
            *masses
                .entry(ball::truncate_birooted(atom, r)?)
                .or_insert_with(Rational::zero) += w;
        }
        RadiusProfile::new(CodeKind::Birooted, r, masses)
    }

    /// Mass of the set of birooted graphs whose radius-`class.radius()` ball
    /// is `class`.
    pub fn mass_on_class(&self, class: &Code) -> Result<Rational> {
        if class.kind() != CodeKind::Birooted {
            return Err(Error::WrongCodeKind {
                expected: "birooted",
            });
        }
        Ok(self.truncate(class.radius())?.mass(class))
    }
}

/// Split each atom's weight over the neighbours of its root.
pub fn edge_measure(m: &AtomicMeasure) -> BirootedAtomicMeasure {
    let mut atoms: BTreeMap<Code, Rational> = BTreeMap::new();
    for (atom, w) in m.atoms() {
        let graph = atom.to_ball().graph().clone();
        let radius = graph.vertex_count();
        for &x in graph.neighbors(0) {
            let key = ball::birooted_code(&graph, 0, x, radius).expect("neighbor of root");
            *atoms.entry(key).or_insert_with(Rational::zero) += w;
        }
    }
    BirootedAtomicMeasure { atoms }
}

/// `f_A[G, o]`: how many neighbours `x` of the root have `[G, o, x]` in the
/// class `A` (a birooted ball code at some radius).
pub fn transport_count(rooted: &Code, birooted_class: &Code) -> Result<usize> {
    if rooted.kind() != CodeKind::Rooted {
        return Err(Error::WrongCodeKind { expected: "rooted" });
    }
    if birooted_class.kind() != CodeKind::Birooted {
        return Err(Error::WrongCodeKind {
            expected: "birooted",
        });
    }
    let ball = rooted.to_ball().into_rooted()?;
    let r = birooted_class.radius();
    if r > ball.radius() && !ball.is_stabilized() {
        return Err(Error::RadiusUnreachable {
            requested: r,
            available: ball.radius(),
        });
    }
    let graph = ball.graph();
    let mut count = 0;
    for &x in graph.neighbors(0) {
        if ball::birooted_code(graph, 0, x, r)? == *birooted_class {
            count += 1;
        }
    }
    Ok(count)
}

/// Push forward under `[G, x, y] -> [G, y, x]`.
pub fn iota_pushforward(v: &BirootedAtomicMeasure) -> BirootedAtomicMeasure {
    let mut atoms: BTreeMap<Code, Rational> = BTreeMap::new();
    for (atom, w) in &v.atoms {
        let graph = atom.to_ball().graph().clone();
        let radius = graph.vertex_count();
        let key = ball::birooted_code(&graph, 1, 0, radius).expect("roots adjacent");
        *atoms.entry(key).or_insert_with(Rational::zero) += w;
    }
    BirootedAtomicMeasure { atoms }
}

/// Result of an involution-invariance check.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport<M = Rational> {
    pub passed: bool,
    /// Largest absolute mass difference over all codes.
    pub discrepancy: M,
    /// A code attaining the discrepancy; `None` when the discrepancy is zero.
    pub witness: Option<Code>,
    pub tolerance: M,
}

/// Sup over codes of `|forward - backward|`. Ties prefer codes where the
/// forward side carries the excess, then the smallest code.
fn sup_discrepancy<M: Mass>(
    forward: &BTreeMap<Code, M>,
    backward: &BTreeMap<Code, M>,
) -> (M, Option<Code>) {
    let mut best: Option<(M, bool, &Code)> = None;
    let keys = forward
        .keys()
        .chain(backward.keys().filter(|c| !forward.contains_key(*c)));
    for code in keys {
        let f = forward.get(code).cloned().unwrap_or_else(M::zero);
        let b = backward.get(code).cloned().unwrap_or_else(M::zero);
        let diff = f - b;
        let excess = diff.is_positive();
        let size = diff.abs();
        let better = match &best {
            None => true,
            Some((s, e, c)) => {
                size > *s || (size == *s && ((excess && !*e) || (excess == *e && code < *c)))
            }
        };
        if better {
            best = Some((size, excess, code));
        }
    }
    match best {
        Some((size, _, code)) if !size.is_zero() => (size, Some(code.clone())),
        _ => (M::zero(), None),
    }
}

/// Exact unimodularity certificate for an atomic measure.
pub fn check_unimodular_exact(m: &AtomicMeasure) -> DiscrepancyReport {
    let forward = edge_measure(m);
    let backward = iota_pushforward(&forward);
    let (discrepancy, witness) = sup_discrepancy(&forward.atoms, &backward.atoms);
    DiscrepancyReport {
        passed: discrepancy.is_zero(),
        discrepancy,
        witness,
        tolerance: Rational::zero(),
    }
}

/// Compare forward and backward edge profiles at a common radius. Passing is
/// necessary, not sufficient, for unimodularity.
pub fn check_unimodular_profile<M: Mass>(
    forward: &BirootedProfile<M>,
    backward: &BirootedProfile<M>,
    tolerance: M,
) -> Result<DiscrepancyReport<M>> {
    if forward.radius() != backward.radius() {
        return Err(Error::RadiusMismatch(forward.radius(), backward.radius()));
    }
    if forward.kind() != CodeKind::Birooted || backward.kind() != CodeKind::Birooted {
        return Err(Error::WrongCodeKind {
            expected: "birooted",
        });
    }
    let (discrepancy, witness) = sup_discrepancy(forward.masses(), backward.masses());
    Ok(DiscrepancyReport {
        passed: discrepancy <= tolerance,
        discrepancy,
        witness,
        tolerance,
    })
}

/// Forward and backward radius-`(r - 1)` edge profiles of a radius-`r`
/// rooted profile: for each class and each neighbour `x` of the root, the
/// ball around the root with roots `(o, x)` and the ball around `x` with
/// roots `(x, o)`, both weighted by the class mass.
pub fn edge_profiles<M: Mass>(
    p: &RadiusProfile<M>,
) -> Result<(BirootedProfile<M>, BirootedProfile<M>)> {
    if p.kind() != CodeKind::Rooted {
        return Err(Error::WrongCodeKind { expected: "rooted" });
    }
    let r = p.radius();
    if r < 2 {
        return Err(Error::RadiusTooSmall { min: 2, got: r });
    }
    let mut forward: BTreeMap<Code, M> = BTreeMap::new();
    let mut backward: BTreeMap<Code, M> = BTreeMap::new();
    for (code, w) in p.masses() {
        let ball = code.to_ball().into_rooted()?;
        let graph = ball.graph();
        for &x in graph.neighbors(0) {
            let f = ball::birooted_code(graph, 0, x, r - 1)?;
            let b = ball::birooted_code(graph, x, 0, r - 1)?;
            let slot = forward.entry(f).or_insert_with(M::zero);
            *slot = slot.clone() + w.clone();
            let slot = backward.entry(b).or_insert_with(M::zero);
            *slot = slot.clone() + w.clone();
        }
    }
    Ok((
        RadiusProfile::new(CodeKind::Birooted, r - 1, forward)?,
        RadiusProfile::new(CodeKind::Birooted, r - 1, backward)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::Config;
    use crate::law::law_of_graph;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn edge_measure_of_path() {
        let p3 = gen::path(3);
        let law = law_of_graph(&p3, &Config::default()).unwrap();
        let forward = edge_measure(&law);
        let end_mid = ball::birooted_code(&p3, 0, 1, 3).unwrap();
        let mid_end = ball::birooted_code(&p3, 1, 0, 3).unwrap();
        assert_eq!(forward.atoms().len(), 2);
        assert_eq!(forward.mass(&end_mid), q(2, 3));
        assert_eq!(forward.mass(&mid_end), q(2, 3));
        assert_eq!(forward.total(), q(4, 3));
    }

    #[test]
    fn edge_measure_of_diracs() {
        let k2 = gen::path(2);
        let dirac = AtomicMeasure::dirac(&ball::component_code(&k2, 0).unwrap()).unwrap();
        let forward = edge_measure(&dirac);
        assert_eq!(forward.atoms().len(), 1);
        assert_eq!(
            forward.mass(&ball::birooted_code(&k2, 0, 1, 2).unwrap()),
            q(1, 1)
        );
        let p3 = gen::path(3);
        let end = AtomicMeasure::dirac(&ball::component_code(&p3, 0).unwrap()).unwrap();
        assert_eq!(
            edge_measure(&end).mass(&ball::birooted_code(&p3, 0, 1, 3).unwrap()),
            q(1, 1)
        );
    }

    #[test]
    fn transport_counts() {
        let p3 = gen::path(3);
        let mid = ball::component_code(&p3, 1).unwrap();
        let mid_end = ball::birooted_code(&p3, 1, 0, 2).unwrap();
        assert_eq!(transport_count(&mid, &mid_end).unwrap(), 2);
        let end_mid = ball::birooted_code(&p3, 0, 1, 2).unwrap();
        assert_eq!(transport_count(&mid, &end_mid).unwrap(), 0);
        let c5 = gen::cycle(5);
        let rooted = ball::ball_code(&c5, 0, 2).unwrap();
        let class = ball::birooted_code(&c5, 0, 1, 1).unwrap();
        assert_eq!(transport_count(&rooted, &class).unwrap(), 2);
        let deep = ball::birooted_code(&c5, 0, 1, 3).unwrap();
        assert!(matches!(
            transport_count(&rooted, &deep),
            Err(Error::RadiusUnreachable { .. })
        ));
        assert!(transport_count(&class, &class).is_err());
    }

    #[test]
    fn pushforward_swaps_roots() {
        let p3 = gen::path(3);
        let end = AtomicMeasure::dirac(&ball::component_code(&p3, 0).unwrap()).unwrap();
        let forward = edge_measure(&end);
        let backward = iota_pushforward(&forward);
        assert_eq!(
            backward.mass(&ball::birooted_code(&p3, 1, 0, 3).unwrap()),
            q(1, 1)
        );
        assert_eq!(backward.total(), forward.total());
        let k2 = gen::path(2);
        let edge =
            edge_measure(&AtomicMeasure::dirac(&ball::component_code(&k2, 0).unwrap()).unwrap());
        assert_eq!(iota_pushforward(&edge), edge);
    }

    #[test]
    fn exact_checks() {
        let p3 = gen::path(3);
        let report = check_unimodular_exact(&law_of_graph(&p3, &Config::default()).unwrap());
        assert!(report.passed);
        assert_eq!(report.discrepancy, q(0, 1));

        let end = AtomicMeasure::dirac(&ball::component_code(&p3, 0).unwrap()).unwrap();
        let report = check_unimodular_exact(&end);
        assert!(!report.passed);
        assert_eq!(report.discrepancy, q(1, 1));
        assert_eq!(
            report.witness,
            Some(ball::birooted_code(&p3, 0, 1, 3).unwrap())
        );

        let isolated =
            AtomicMeasure::dirac(&ball::component_code(&crate::FiniteGraph::empty(1), 0).unwrap())
                .unwrap();
        let report = check_unimodular_exact(&isolated);
        assert!(report.passed);
        assert_eq!(report.witness, None);
    }

    #[test]
    fn profile_checks() {
        let p3 = gen::path(3);
        let end = AtomicMeasure::dirac(&ball::component_code(&p3, 0).unwrap()).unwrap();
        let profile = crate::law::truncate_measure(&end, 2).unwrap();
        let (forward, backward) = edge_profiles(&profile).unwrap();
        let same = check_unimodular_profile(&forward, &forward, q(0, 1)).unwrap();
        assert!(same.passed);
        assert_eq!(same.discrepancy, q(0, 1));
        let report = check_unimodular_profile(&forward, &backward, q(0, 1)).unwrap();
        assert!(!report.passed);
        assert_eq!(report.discrepancy, q(1, 1));
        let wider = edge_profiles(&crate::law::truncate_measure(&end, 3).unwrap())
            .unwrap()
            .0;
        assert_eq!(
            check_unimodular_profile(&forward, &wider, q(0, 1)),
            Err(Error::RadiusMismatch(1, 2))
        );
        assert!(matches!(
            edge_profiles(&crate::law::truncate_measure(&end, 1).unwrap()),
            Err(Error::RadiusTooSmall { .. })
        ));
    }

    #[test]
    fn float_profiles_use_tolerance() {
        let p3 = gen::path(3);
        let fwd_code = ball::birooted_code(&p3, 1, 0, 1).unwrap();
        let f = RadiusProfile::new(
            CodeKind::Birooted,
            1,
            BTreeMap::from([(fwd_code.clone(), 1.0f64)]),
        )
        .unwrap();
        let b = RadiusProfile::new(
            CodeKind::Birooted,
            1,
            BTreeMap::from([(fwd_code, 0.995f64)]),
        )
        .unwrap();
        assert!(check_unimodular_profile(&f, &b, 0.01).unwrap().passed);
        assert!(!check_unimodular_profile(&f, &b, 0.001).unwrap().passed);
    }
}
