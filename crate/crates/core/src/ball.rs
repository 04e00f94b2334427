//! Rooted and birooted balls, their canonical codes, the rooted-graph
//! ultrametric, and the root flip at finite radius.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::canon;
use crate::error::{Error, Result};
use crate::graph::{Config, FiniteGraph};
use crate::Rational;

/// A connected graph with a root, every vertex within `radius` of the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    graph: FiniteGraph,
    root: usize,
    radius: usize,
}

/// A ball around `root1` with a second, adjacent root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirootedBall {
    graph: FiniteGraph,
    root1: usize,
    root2: usize,
    radius: usize,
}

fn check_within_radius(graph: &FiniteGraph, root: usize, radius: usize) -> Result<()> {
    graph.check_vertex(root)?;
    let dist = graph.distances_from(root, None);
    for (v, d) in dist.iter().enumerate() {
        match d {
            None => {
                return Err(Error::InvalidBall(format!(
                    "vertex {v} is not connected to the root"
                )))
            }
            Some(d) if *d > radius => {
                return Err(Error::InvalidBall(format!(
                    "vertex {v} is at distance {d} > radius {radius}"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

impl RootedBall {
    pub fn new(graph: FiniteGraph, root: usize, radius: usize) -> Result<Self> {
        check_within_radius(&graph, root, radius)?;
        Ok(Self {
            graph,
            root,
            radius,
        })
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// True when the ball is certainly an entire component: no vertex sits
    /// at the boundary distance, so nothing can lie beyond it.
    pub fn is_stabilized(&self) -> bool {
        self.graph
            .distances_from(self.root, None)
            .iter()
            .all(|d| d.is_some_and(|d| d < self.radius))
    }
}

impl BirootedBall {
    pub fn new(graph: FiniteGraph, root1: usize, root2: usize, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::RadiusTooSmall { min: 1, got: 0 });
        }
        check_within_radius(&graph, root1, radius)?;
        graph.check_vertex(root2)?;
        if !graph.has_edge(root1, root2) {
            return Err(Error::NotAdjacent(root1, root2));
        }
        Ok(Self {
            graph,
            root1,
            root2,
            radius,
        })
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn roots(&self) -> (usize, usize) {
        (self.root1, self.root2)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

/// Either kind of ball, as produced by [`decode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ball {
    Rooted(RootedBall),
    Birooted(BirootedBall),
}

impl Ball {
    pub fn graph(&self) -> &FiniteGraph {
        match self {
            Ball::Rooted(b) => &b.graph,
            Ball::Birooted(b) => &b.graph,
        }
    }

    pub fn radius(&self) -> usize {
        match self {
            Ball::Rooted(b) => b.radius,
            Ball::Birooted(b) => b.radius,
        }
    }

    pub fn kind(&self) -> CodeKind {
        match self {
            Ball::Rooted(_) => CodeKind::Rooted,
            Ball::Birooted(_) => CodeKind::Birooted,
        }
    }

    pub fn into_rooted(self) -> Result<RootedBall> {
        match self {
            Ball::Rooted(b) => Ok(b),
            Ball::Birooted(_) => Err(Error::WrongCodeKind { expected: "rooted" }),
        }
    }

    pub fn into_birooted(self) -> Result<BirootedBall> {
        match self {
            Ball::Birooted(b) => Ok(b),
            Ball::Rooted(_) => Err(Error::WrongCodeKind {
                expected: "birooted",
            }),
        }
    }
}

impl From<RootedBall> for Ball {
    fn from(b: RootedBall) -> Self {
        Ball::Rooted(b)
    }
}

impl From<BirootedBall> for Ball {
    fn from(b: BirootedBall) -> Self {
        Ball::Birooted(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeKind {
    Rooted,
    Birooted,
}

impl CodeKind {
    fn tag(self) -> u8 {
        match self {
            CodeKind::Rooted => 0,
            CodeKind::Birooted => 1,
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Rooted => "rooted",
            CodeKind::Birooted => "birooted",
        })
    }
}

/// Canonical byte serialization of an isomorphism class of a rooted or
/// birooted ball.
///
/// Layout: version byte, kind byte (0 rooted, 1 birooted), radius and vertex
/// count as big-endian `u32`, then the lower triangle of the adjacency
/// matrix in canonical vertex order, packed MSB first and zero padded. The
/// root is vertex 0 and the second root, if any, is vertex 1.
///
/// A `Code` value is always well formed and canonical; codes are ordered by
/// their bytes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Code(Vec<u8>);

const HEADER_LEN: usize = 10;

impl Code {
    pub const VERSION: u8 = 1;

    /// Validates arbitrary bytes, including canonicity.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        decode(&bytes)?;
        Ok(Code(bytes))
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let bytes = hex::decode(text).map_err(|e| Error::MalformedCode(format!("bad hex: {e}")))?;
        Self::from_bytes(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn kind(&self) -> CodeKind {
        if self.0[1] == 0 {
            CodeKind::Rooted
        } else {
            CodeKind::Birooted
        }
    }

    pub fn radius(&self) -> usize {
        u32::from_be_bytes(self.0[2..6].try_into().expect("header")) as usize
    }

    pub fn vertex_count(&self) -> usize {
        u32::from_be_bytes(self.0[6..10].try_into().expect("header")) as usize
    }

    /// The canonical representative. Infallible because every `Code` is
    /// valid by construction.
    pub fn to_ball(&self) -> Ball {
        let (kind, radius, graph) = parse_structure(&self.0).expect("Code is always well formed");
        match kind {
            CodeKind::Rooted => Ball::Rooted(RootedBall {
                graph,
                root: 0,
                radius,
            }),
            CodeKind::Birooted => Ball::Birooted(BirootedBall {
                graph,
                root1: 0,
                root2: 1,
                radius,
            }),
        }
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code({})", self.to_hex())
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn encode_raw(kind: CodeKind, radius: usize, graph: &FiniteGraph, roots: &[usize]) -> Code {
    let form = canon::canonical_form(graph, roots);
    let n = graph.vertex_count();
    let mut bytes = Vec::with_capacity(HEADER_LEN + form.body.len());
    bytes.push(Code::VERSION);
    bytes.push(kind.tag());
    bytes.extend_from_slice(
        &u32::try_from(radius)
            .expect("radius fits u32")
            .to_be_bytes(),
    );
    bytes.extend_from_slice(
        &u32::try_from(n)
            .expect("vertex count fits u32")
            .to_be_bytes(),
    );
    bytes.extend_from_slice(&form.body);
    Code(bytes)
}

impl RootedBall {
    pub(crate) fn encode(&self) -> Code {
        encode_raw(CodeKind::Rooted, self.radius, &self.graph, &[self.root])
    }
}

impl BirootedBall {
    pub(crate) fn encode(&self) -> Code {
        encode_raw(
            CodeKind::Birooted,
            self.radius,
            &self.graph,
            &[self.root1, self.root2],
        )
    }
}

impl Ball {
    pub(crate) fn encode(&self) -> Code {
        match self {
            Ball::Rooted(b) => b.encode(),
            Ball::Birooted(b) => b.encode(),
        }
    }
}

/// Canonical code of a ball, rejecting balls whose degree exceeds the bound.
pub fn canonical_code(ball: &Ball, config: &Config) -> Result<Code> {
    config.check_graph(ball.graph())?;
    Ok(ball.encode())
}

fn parse_structure(bytes: &[u8]) -> Result<(CodeKind, usize, FiniteGraph)> {
    let bad = |m: &str| Error::MalformedCode(m.to_string());
    if bytes.len() < HEADER_LEN {
        return Err(bad("truncated header"));
    }
    if bytes[0] != Code::VERSION {
        return Err(Error::MalformedCode(format!(
            "unsupported version {}",
            bytes[0]
        )));
    }
    let kind = match bytes[1] {
        0 => CodeKind::Rooted,
        1 => CodeKind::Birooted,
        k => return Err(Error::MalformedCode(format!("unknown kind {k}"))),
    };
    let radius = u32::from_be_bytes(bytes[2..6].try_into().expect("slice")) as usize;
    let n = u32::from_be_bytes(bytes[6..10].try_into().expect("slice")) as u64;
    let expected = (n * n.saturating_sub(1) / 2).div_ceil(8);
    let body = &bytes[HEADER_LEN..];
    if body.len() as u64 != expected {
        return Err(Error::MalformedCode(format!(
            "body has {} bytes, expected {expected}",
            body.len()
        )));
    }
    let n = n as usize;
    if n == 0 {
        return Err(bad("zero vertices"));
    }
    let bits = n * (n - 1) / 2;
    if !bits.is_multiple_of(8) && body[body.len() - 1] & (0xff >> (bits % 8)) != 0 {
        return Err(bad("nonzero padding"));
    }
    let mut edges = Vec::new();
    for i in 1..n {
        let row = i * (i - 1) / 2;
        for j in 0..i {
            let bit = row + j;
            if body[bit / 8] & (0x80 >> (bit % 8)) != 0 {
                edges.push((j, i));
            }
        }
    }
    let graph = FiniteGraph::new(n, edges)?;
    Ok((kind, radius, graph))
}

/// Decode and fully validate a byte string: structure, ball invariants, and
/// canonicity.
pub fn decode(bytes: &[u8]) -> Result<Ball> {
    let (kind, radius, graph) = parse_structure(bytes)?;
    let invalid = |e: Error| Error::MalformedCode(e.to_string());
    let ball: Ball = match kind {
        CodeKind::Rooted => RootedBall::new(graph, 0, radius).map_err(invalid)?.into(),
        CodeKind::Birooted => {
            if graph.vertex_count() < 2 {
                return Err(Error::MalformedCode(
                    "birooted code needs two vertices".into(),
                ));
            }
            BirootedBall::new(graph, 0, 1, radius)
                .map_err(invalid)?
                .into()
        }
    };
    if ball.encode().as_bytes() != bytes {
        return Err(Error::MalformedCode("not in canonical form".into()));
    }
    Ok(ball)
}

/// `B_G(o, r)`: the subgraph induced by vertices within distance `r` of `o`,
/// rooted at `o`.
pub fn extract_ball(g: &FiniteGraph, o: usize, r: usize) -> Result<RootedBall> {
    g.check_vertex(o)?;
    let vertices = g.bfs_order(o, r);
    Ok(RootedBall {
        graph: g.induced(&vertices),
        root: 0,
        radius: r,
    })
}

/// The radius-`r` ball around `o1` with ordered roots `(o1, o2)`.
pub fn extract_birooted_ball(
    g: &FiniteGraph,
    o1: usize,
    o2: usize,
    r: usize,
) -> Result<BirootedBall> {
    g.check_vertex(o1)?;
    g.check_vertex(o2)?;
    if !g.has_edge(o1, o2) {
        return Err(Error::NotAdjacent(o1, o2));
    }
    if r == 0 {
        return Err(Error::RadiusTooSmall { min: 1, got: 0 });
    }
    let vertices = g.bfs_order(o1, r);
    let root2 = vertices
        .iter()
        .position(|&v| v == o2)
        .expect("neighbor lies in the ball");
    Ok(BirootedBall {
        graph: g.induced(&vertices),
        root1: 0,
        root2,
        radius: r,
    })
}

/// Canonical code of `B_G(o, r)`.
pub fn ball_code(g: &FiniteGraph, o: usize, r: usize) -> Result<Code> {
    Ok(extract_ball(g, o, r)?.encode())
}

/// Canonical code of the birooted ball `(B_G(o1, r), o1, o2)`.
pub fn birooted_code(g: &FiniteGraph, o1: usize, o2: usize, r: usize) -> Result<Code> {
    Ok(extract_birooted_ball(g, o1, o2, r)?.encode())
}

/// Code of the whole component of `o`, encoded at radius equal to the
/// component size so that it is recognisably stabilized.
pub fn component_code(g: &FiniteGraph, o: usize) -> Result<Code> {
    g.check_vertex(o)?;
    let size = g.component_size(o);
    ball_code(g, o, size)
}

/// Truncate a rooted code to a smaller radius. A stabilized code may be
/// truncated to any radius.
pub fn truncate_rooted(code: &Code, r: usize) -> Result<Code> {
    let ball = code.to_ball().into_rooted()?;
    if r > ball.radius && !ball.is_stabilized() {
        return Err(Error::RadiusUnreachable {
            requested: r,
            available: ball.radius,
        });
    }
    ball_code(&ball.graph, 0, r)
}

/// Truncate a birooted code to radius `r >= 1`.
pub fn truncate_birooted(code: &Code, r: usize) -> Result<Code> {
    let ball = code.to_ball().into_birooted()?;
    if r > ball.radius {
        let as_rooted = RootedBall {
            graph: ball.graph.clone(),
            root: 0,
            radius: ball.radius,
        };
        if !as_rooted.is_stabilized() {
            return Err(Error::RadiusUnreachable {
                requested: r,
                available: ball.radius,
            });
        }
    }
    birooted_code(&ball.graph, 0, 1, r)
}

/// The root flip `[G, o1, o2] -> [G, o2, o1]` at finite resolution: a
/// radius-`r` birooted class determines the radius-`(r - 1)` ball around the
/// second root, because that ball lies inside the first.
pub fn flip_birooted(code: &Code) -> Result<Code> {
    if code.kind() != CodeKind::Birooted {
        return Err(Error::WrongCodeKind {
            expected: "birooted",
        });
    }
    let r = code.radius();
    if r < 2 {
        return Err(Error::RadiusTooSmall { min: 2, got: r });
    }
    let ball = code.to_ball().into_birooted()?;
    birooted_code(&ball.graph, 1, 0, r - 1)
}

/// Largest radius at which the two rooted balls agree, or `None` when the
/// rooted components are isomorphic.
pub fn agreement_radius(
    a: (&FiniteGraph, usize),
    b: (&FiniteGraph, usize),
    config: &Config,
) -> Result<Option<usize>> {
    let (g, o) = a;
    let (h, p) = b;
    g.check_vertex(o)?;
    h.check_vertex(p)?;
    config.check_graph(g)?;
    config.check_graph(h)?;
    // Balls of radius >= component size are whole components.
    let bound = g.component_size(o).max(h.component_size(p));
    for s in 1..=bound {
        if ball_code(g, o, s)? != ball_code(h, p, s)? {
            return Ok(Some(s - 1));
        }
    }
    Ok(None)
}

/// The ultrametric on rooted graphs: `0` for isomorphic rooted components,
/// otherwise `2^-r` where `r` is the largest radius of agreement.
pub fn ultrametric_distance(
    a: (&FiniteGraph, usize),
    b: (&FiniteGraph, usize),
    config: &Config,
) -> Result<Rational> {
    Ok(match agreement_radius(a, b, config)? {
        None => Rational::zero(),
        Some(r) => Rational::new(BigInt::one(), BigInt::one() << r),
    })
}
