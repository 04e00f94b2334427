//! Line-oriented text formats.
//!
//! Graph files list one edge `u v` per line, isolated vertices as `node v`,
//! and `#` comments. Measures are `atom <hex-code> <num>/<den>` lines,
//! profiles `r <r> <hex-code> <num>/<den>` lines. Graphings are
//! `involution reflect <p>/<q>` or `involution swap` followed by indented
//! `pair <a> <b> <len>` lines. Output is always sorted by code bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::ball::{Code, CodeKind};
use crate::convergence::SequenceReport;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::graphing::{EdgeEstimate, Estimate, GraphingSpec, InvolutionSpec, SwapPair};
use crate::law::{AtomicMeasure, RadiusProfile};
use crate::unimodular::DiscrepancyReport;
use crate::Rational;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Content of a line with any trailing `#` comment removed.
fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// `n/d` with the denominator always present.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(token: &str) -> std::result::Result<Rational, String> {
    if token.ends_with("/0") || token.contains("/-") {
        return Err(format!("bad rational {token:?}"));
    }
    Rational::from_str(token).map_err(|_| format!("bad rational {token:?}"))
}

/// Six significant digits.
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// A parsed graph file. File vertex ids are mapped to `0..n` in increasing
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: FiniteGraph,
    pub ids: Vec<u64>,
}

impl GraphFile {
    pub fn vertex(&self, id: u64) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut ids: BTreeSet<u64> = BTreeSet::new();
    let mut edges: Vec<(usize, u64, u64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        let id = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| parse_err(line, format!("bad vertex id {t:?}")))
        };
        match tokens.as_slice() {
            [] => {}
            ["node", v] => {
                ids.insert(id(v)?);
            }
            [u, v] => {
                let (u, v) = (id(u)?, id(v)?);
                if u == v {
                    return Err(parse_err(line, format!("self-loop at {u}")));
                }
                ids.insert(u);
                ids.insert(v);
                edges.push((line, u, v));
            }
            _ => return Err(parse_err(line, "expected `u v` or `node v`")),
        }
    }
    let ids: Vec<u64> = ids.into_iter().collect();
    let index = |v: u64| ids.binary_search(&v).expect("id collected");
    let mut seen = BTreeSet::new();
    for &(line, u, v) in &edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(line, format!("duplicate edge {u} {v}")));
        }
    }
    let graph = FiniteGraph::new(
        ids.len(),
        edges.iter().map(|&(_, u, v)| (index(u), index(v))),
    )?;
    Ok(GraphFile { graph, ids })
}

pub fn format_graph(g: &FiniteGraph) -> String {
    let mut out = String::new();
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            let _ = writeln!(out, "node {v}");
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn format_measure(m: &AtomicMeasure) -> String {
    let mut out = String::new();
    for (code, w) in m.atoms() {
        let _ = writeln!(out, "atom {code} {}", format_rational(w));
    }
    out
}

fn parse_code(line: usize, token: &str) -> Result<Code> {
    Code::from_hex(token).map_err(|e| parse_err(line, e.to_string()))
}

fn parse_weight(line: usize, token: &str) -> Result<Rational> {
    parse_rational(token).map_err(|m| parse_err(line, m))
}

/// Parses and validates a measure file (positive weights summing to 1).
pub fn parse_measure(text: &str) -> Result<AtomicMeasure> {
    let mut atoms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        match strip_comment(raw)
            .split_whitespace()
            .collect::<Vec<_>>()
            .as_slice()
        {
            [] => {}
            ["atom", code, w] => atoms.push((parse_code(line, code)?, parse_weight(line, w)?)),
            _ => return Err(parse_err(line, "expected `atom <hex-code> <num>/<den>`")),
        }
    }
    if atoms.is_empty() {
        return Err(Error::InvalidMeasure("no atoms".into()));
    }
    AtomicMeasure::new(atoms)
}

pub fn format_profile(p: &RadiusProfile) -> String {
    let mut out = String::new();
    for (code, w) in p.masses() {
        let _ = writeln!(out, "r {} {code} {}", p.radius(), format_rational(w));
    }
    out
}

/// Parses profile lines, grouping by radius. Every group must use a single
/// code kind.
pub fn parse_profiles(text: &str) -> Result<Vec<RadiusProfile>> {
    let mut groups: BTreeMap<usize, (CodeKind, BTreeMap<Code, Rational>)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        match strip_comment(raw)
            .split_whitespace()
            .collect::<Vec<_>>()
            .as_slice()
        {
            [] => {}
            ["r", r, code, w] => {
                let r: usize = r
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad radius {r:?}")))?;
                let code = parse_code(line, code)?;
                let w = parse_weight(line, w)?;
                let kind = code.kind();
                let (group_kind, masses) =
                    groups.entry(r).or_insert_with(|| (kind, BTreeMap::new()));
                if *group_kind != kind {
                    return Err(parse_err(line, "mixed rooted and birooted codes"));
                }
                if masses.insert(code, w).is_some() {
                    return Err(parse_err(line, "duplicate code"));
                }
            }
            _ => return Err(parse_err(line, "expected `r <r> <hex-code> <num>/<den>`")),
        }
    }
    groups
        .into_iter()
        .map(|(r, (kind, masses))| RadiusProfile::new(kind, r, masses))
        .collect()
}

pub fn parse_graphing(text: &str) -> Result<GraphingSpec> {
    let mut label = String::new();
    let mut involutions: Vec<InvolutionSpec> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        let indented = content.starts_with([' ', '\t']);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let q = |t: &str| parse_rational(t).map_err(|m| parse_err(line, m));
        match tokens.as_slice() {
            [] => {}
            ["label", ..] => label = tokens[1..].join(" "),
            ["involution", "reflect", c] if !indented => {
                involutions.push(InvolutionSpec::reflection(q(c)?))
            }
            ["involution", "swap"] if !indented => {
                involutions.push(InvolutionSpec::swap(Vec::new()))
            }
            ["pair", a, b, len] if indented => match involutions.last_mut() {
                Some(InvolutionSpec::Swap { pairs }) => pairs.push(SwapPair {
                    a: q(a)?,
                    b: q(b)?,
                    len: q(len)?,
                }),
                _ => return Err(parse_err(line, "`pair` outside an `involution swap` block")),
            },
            _ => {
                return Err(parse_err(
                    line,
                    format!("unrecognised line {:?}", content.trim()),
                ))
            }
        }
    }
    Ok(GraphingSpec::new(label, involutions))
}

pub fn format_graphing(s: &GraphingSpec) -> String {
    let mut out = String::new();
    if !s.label.is_empty() {
        let _ = writeln!(out, "label {}", s.label);
    }
    for inv in &s.involutions {
        match inv {
            InvolutionSpec::Reflection { c } => {
                let _ = writeln!(out, "involution reflect {}", format_rational(c));
            }
            InvolutionSpec::Swap { pairs } => {
                let _ = writeln!(out, "involution swap");
                for p in pairs {
                    let _ = writeln!(
                        out,
                        "  pair {} {} {}",
                        format_rational(&p.a),
                        format_rational(&p.b),
                        format_rational(&p.len)
                    );
                }
            }
        }
    }
    out
}

fn format_verdict<M>(report: &DiscrepancyReport<M>, discrepancy: String, out: &mut String) {
    let _ = writeln!(
        out,
        "verdict {}",
        if report.passed { "pass" } else { "fail" }
    );
    let _ = writeln!(out, "discrepancy {discrepancy}");
    match &report.witness {
        Some(code) => {
            let _ = writeln!(out, "witness {code}");
        }
        None => {
            let _ = writeln!(out, "witness none");
        }
    }
}

pub fn format_exact_report(report: &DiscrepancyReport<Rational>) -> String {
    let mut out = String::new();
    format_verdict(report, format_rational(&report.discrepancy), &mut out);
    out
}

pub fn format_estimate_report(report: &DiscrepancyReport<f64>, edges: &EdgeEstimate) -> String {
    let mut out = String::new();
    format_verdict(report, format_decimal(report.discrepancy), &mut out);
    let _ = writeln!(out, "tolerance {}", format_decimal(report.tolerance));
    let _ = writeln!(out, "radius {}", edges.forward.radius());
    let _ = writeln!(out, "samples {}", edges.sample_count);
    let _ = writeln!(out, "seed {}", edges.seed);
    let _ = writeln!(out, "mean_degree {}", format_decimal(edges.mean_degree));
    let _ = writeln!(out, "max_stderr {}", format_decimal(edges.max_stderr()));
    let _ = writeln!(out, "scope necessary-not-sufficient");
    out
}

pub fn format_estimate(e: &Estimate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "samples {}", e.sample_count);
    let _ = writeln!(out, "seed {}", e.seed);
    for (code, m) in e.profile.masses() {
        let _ = writeln!(
            out,
            "r {} {code} {} {}",
            e.profile.radius(),
            format_decimal(*m),
            format_decimal(e.stderr[code])
        );
    }
    out
}

pub fn format_sequence_report(report: &SequenceReport) -> String {
    let mut out = String::new();
    let r = report.radius;
    for (i, d) in report.consecutive.iter().enumerate() {
        let _ = writeln!(out, "r {r} n {} tv {}", i + 1, format_rational(d));
    }
    match report.cauchy_from {
        Some(i) => {
            let _ = writeln!(out, "cauchy_from {i}");
        }
        None => {
            let _ = writeln!(out, "cauchy_from none");
        }
    }
    if let Some(limit) = &report.limit_tv {
        for (i, d) in limit.iter().enumerate() {
            let _ = writeln!(out, "limit r {r} n {i} tv {}", format_rational(d));
        }
    }
    let _ = writeln!(out, "max_radius {r}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::Config;
    use crate::law::{law_of_graph, profile_of_graph};

    #[test]
    fn graph_files() {
        let text = "# triangle plus a loner\n0 1\n1 2 # inline\n2 0\nnode 7\n";
        let file = parse_graph(text).unwrap();
        assert_eq!(file.graph.vertex_count(), 4);
        assert_eq!(file.graph.edge_count(), 3);
        assert_eq!(file.vertex(7), Some(3));
        assert_eq!(
            parse_graph(&format_graph(&file.graph)).unwrap().graph,
            file.graph
        );
        assert!(matches!(
            parse_graph("0 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("0 1\n1 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("0 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_graph("a b\n"), Err(Error::Parse { .. })));
        assert!(parse_graph("").unwrap().graph.is_empty());
    }

    #[test]
    fn measures_round_trip() {
        let law = law_of_graph(&gen::path(3), &Config::default()).unwrap();
        let text = format_measure(&law);
        assert_eq!(text.lines().count(), 2);
        assert!(text.contains(" 2/3\n") && text.contains(" 1/3\n"));
        assert_eq!(parse_measure(&text).unwrap(), law);
        let bad = text.replace("2/3", "1/2");
        assert!(matches!(parse_measure(&bad), Err(Error::InvalidMeasure(_))));
        assert!(parse_measure("").is_err());
        assert!(parse_measure("atom 00 1/1").is_err());
    }

    #[test]
    fn profiles_round_trip() {
        let g = gen::path(4);
        let p1 = profile_of_graph(&g, 1, &Config::default()).unwrap();
        let p2 = profile_of_graph(&g, 2, &Config::default()).unwrap();
        let text = format_profile(&p1) + &format_profile(&p2);
        assert_eq!(parse_profiles(&text).unwrap(), vec![p1, p2]);
    }

    #[test]
    fn graphing_files() {
        let text = "# two reflections\nlabel beta 1/5\ninvolution reflect 0\ninvolution reflect 2/5\ninvolution swap\n  pair 0/1 1/3 1/3\n";
        let spec = parse_graphing(text).unwrap();
        assert_eq!(spec.label, "beta 1/5");
        assert_eq!(spec.involutions.len(), 3);
        assert_eq!(parse_graphing(&format_graphing(&spec)).unwrap(), spec);
        assert!(parse_graphing("pair 0 1/2 1/2\n").is_err());
        assert!(parse_graphing("involution reflect 1/0\n").is_err());
        assert!(parse_graphing("involution reflect 0\n  pair 0 1/2 1/2\n").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(format_decimal(1.0), "1.00000");
        assert_eq!(format_decimal(2.0 / 3.0), "0.666667");
        assert_eq!(format_decimal(0.0), "0");
        assert_eq!(format_decimal(0.00123456789), "0.00123457");
        assert_eq!(format_rational(&Rational::from_integer(1.into())), "1/1");
    }
}
