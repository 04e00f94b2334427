//! Weak-convergence diagnostics for sequences of exact profiles.
//!
//! Convergence is only ever asserted one finite radius at a time; a report
//! records the radius it examined.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Config, FiniteGraph};
use crate::law::{profile_of_graph, tv_distance, RadiusProfile};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceReport {
    pub radius: usize,
    /// `consecutive[i]` is the distance between terms `i` and `i + 1`.
    pub consecutive: Vec<Rational>,
    /// Smallest index from which every later term equals it.
    pub cauchy_from: Option<usize>,
    /// Distance of each term to a candidate limit, when one was given.
    pub limit_tv: Option<Vec<Rational>>,
}

/// Exact radius-`r` profiles of each graph, in order.
pub fn profile_sequence(
    graphs: &[FiniteGraph],
    r: usize,
    config: &Config,
) -> Result<Vec<RadiusProfile>> {
    if graphs.is_empty() {
        return Err(Error::EmptySequence);
    }
    graphs
        .iter()
        .map(|g| profile_of_graph(g, r, config))
        .collect()
}

fn common_radius(profiles: &[RadiusProfile]) -> Result<usize> {
    let first = profiles.first().ok_or(Error::EmptySequence)?.radius();
    if let Some(p) = profiles.iter().find(|p| p.radius() != first) {
        return Err(Error::RadiusMismatch(first, p.radius()));
    }
    Ok(first)
}

/// Distances between consecutive terms and the start of the zero tail.
pub fn cauchy_report(profiles: &[RadiusProfile]) -> Result<SequenceReport> {
    let radius = common_radius(profiles)?;
    let consecutive = profiles
        .windows(2)
        .map(|w| tv_distance(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    let tail = consecutive.iter().rev().take_while(|d| d.is_zero()).count();
    let cauchy_from = (tail == consecutive.len() || tail > 0).then(|| consecutive.len() - tail);
    Ok(SequenceReport {
        radius,
        consecutive,
        cauchy_from,
        limit_tv: None,
    })
}

/// [`cauchy_report`] plus the distance of every term to `limit`.
pub fn compare_to_limit(
    profiles: &[RadiusProfile],
    limit: &RadiusProfile,
) -> Result<SequenceReport> {
    let mut report = cauchy_report(profiles)?;
    if limit.radius() != report.radius {
        return Err(Error::RadiusMismatch(report.radius, limit.radius()));
    }
    report.limit_tv = Some(
        profiles
            .iter()
            .map(|p| tv_distance(p, limit))
            .collect::<Result<_>>()?,
    );
    Ok(report)
}
