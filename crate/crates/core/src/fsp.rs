//! The one-shot simultaneous Flip-Schelling process.
//!
//! Every agent compares its type with its neighbors' types in the *input*
//! assignment. It keeps its type when more than half of its neighbors agree,
//! switches when fewer than half agree, and flips a fair coin on an exact
//! tie. Agents without neighbors keep their type.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{param, Error, Result};
use crate::graphs::{neighborhood_partition, Graph};
use crate::rng::RngStream;

/// Largest vertex count accepted by the exhaustive oracles (2ⁿ assignments).
pub const MAX_EXACT_VERTICES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentType {
    Plus,
    Minus,
}

impl AgentType {
    pub fn flipped(self) -> Self {
        match self {
            AgentType::Plus => AgentType::Minus,
            AgentType::Minus => AgentType::Plus,
        }
    }

    fn sign(self) -> i64 {
        match self {
            AgentType::Plus => 1,
            AgentType::Minus => -1,
        }
    }
}

/// One type per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeAssignment(pub Vec<AgentType>);

impl TypeAssignment {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> AgentType {
        self.0[v]
    }

    /// Bit `v` of `mask` set means `Plus`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        TypeAssignment(
            (0..n)
                .map(|v| {
                    if mask >> v & 1 == 1 {
                        AgentType::Plus
                    } else {
                        AgentType::Minus
                    }
                })
                .collect(),
        )
    }

    pub fn inverted(&self) -> Self {
        TypeAssignment(self.0.iter().map(|t| t.flipped()).collect())
    }

    pub fn plus_count(&self) -> usize {
        self.0.iter().filter(|&&t| t == AgentType::Plus).count()
    }
}

/// Uniform random types; consumes exactly `n` fair coins in vertex order.
pub fn initial_types(n: usize, stream: &mut RngStream) -> TypeAssignment {
    TypeAssignment(
        (0..n)
            .map(|_| {
                if stream.next_fair_coin() {
                    AgentType::Plus
                } else {
                    AgentType::Minus
                }
            })
            .collect(),
    )
}

/// What a single agent does in one step, before tie coins are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Keep,
    Switch,
    Tie,
}

/// Decision of `v` against assignment `t`.
pub fn decision(g: &Graph, t: &TypeAssignment, v: usize) -> Decision {
    let deg = g.degree(v);
    if deg == 0 {
        return Decision::Keep;
    }
    let own = t.get(v);
    let same = g.neighbors(v).iter().filter(|&&w| t.get(w) == own).count();
    match (2 * same).cmp(&deg) {
        std::cmp::Ordering::Greater => Decision::Keep,
        std::cmp::Ordering::Less => Decision::Switch,
        std::cmp::Ordering::Equal => Decision::Tie,
    }
}

fn check_len(g: &Graph, t: &TypeAssignment) -> Result<()> {
    if g.n() != t.len() {
        return Err(param(format!(
            "assignment has {} entries, graph has {} vertices",
            t.len(),
            g.n()
        )));
    }
    Ok(())
}

/// Applies one simultaneous step. Tie coins are drawn only for tied vertices,
/// in ascending vertex order.
pub fn fsp_step(g: &Graph, t: &TypeAssignment, stream: &mut RngStream) -> Result<TypeAssignment> {
    check_len(g, t)?;
    let out = (0..g.n())
        .map(|v| {
            let own = t.get(v);
            match decision(g, t, v) {
                Decision::Keep => own,
                Decision::Switch => own.flipped(),
                Decision::Tie if stream.next_fair_coin() => own.flipped(),
                Decision::Tie => own,
            }
        })
        .collect();
    Ok(TypeAssignment(out))
}

/// Number of edges whose endpoints share a type.
pub fn monochrome_count(g: &Graph, t: &TypeAssignment) -> usize {
    g.edges().filter(|&(u, v)| t.get(u) == t.get(v)).count()
}

/// Fraction of monochrome edges. Undefined for edgeless graphs.
pub fn monochrome_fraction(g: &Graph, t: &TypeAssignment) -> Result<f64> {
    check_len(g, t)?;
    if g.edge_count() == 0 {
        return Err(Error::Domain("monochrome fraction of a graph with no edges".into()));
    }
    Ok(monochrome_count(g, t) as f64 / g.edge_count() as f64)
}

/// Majority margins `|#plus − #minus|` around an edge `{u, v}`.
///
/// `u_exclusive` is taken over `N(u) \ N(v)`, which contains `v` itself;
/// likewise `v_exclusive` contains `u`. With this reading, `common`
/// strictly exceeding both exclusive margins forces `u` and `v` to adopt the
/// common majority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecisivenessTriple {
    pub common: usize,
    pub u_exclusive: usize,
    pub v_exclusive: usize,
}

impl DecisivenessTriple {
    /// The common neighborhood is strictly more decisive than both exclusive ones.
    pub fn is_decisive(&self) -> bool {
        self.common > self.u_exclusive && self.common > self.v_exclusive
    }
}

fn margin(t: &TypeAssignment, vs: impl IntoIterator<Item = usize>) -> usize {
    vs.into_iter().map(|w| t.get(w).sign()).sum::<i64>().unsigned_abs() as usize
}

pub fn edge_decisiveness(
    g: &Graph,
    t: &TypeAssignment,
    u: usize,
    v: usize,
) -> Result<DecisivenessTriple> {
    check_len(g, t)?;
    if !g.has_edge(u, v) {
        return Err(param(format!("({u},{v}) is not an edge")));
    }
    let part = neighborhood_partition(g, u, v)?;
    Ok(DecisivenessTriple {
        common: margin(t, part.common.iter().copied()),
        u_exclusive: margin(t, part.u_exclusive.iter().copied().chain([v])),
        v_exclusive: margin(t, part.v_exclusive.iter().copied().chain([u])),
    })
}

fn check_exact(g: &Graph, u: usize, v: usize) -> Result<()> {
    if g.n() > MAX_EXACT_VERTICES {
        return Err(Error::Capacity {
            what: "vertices",
            got: g.n(),
            limit: MAX_EXACT_VERTICES,
        });
    }
    if !g.has_edge(u, v) {
        return Err(param(format!("({u},{v}) is not an edge")));
    }
    Ok(())
}

fn neighbor_mask(g: &Graph, v: usize) -> u32 {
    g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)
}

/// Step outcome for one vertex under a bitmask assignment: `Some(plus)` when
/// determined, `None` on a tie.
fn masked_outcome(nb: u32, deg: u32, v: usize, types: u32) -> Option<bool> {
    let plus = types >> v & 1 == 1;
    if deg == 0 {
        return Some(plus);
    }
    let plus_nb = (nb & types).count_ones();
    let same = if plus { plus_nb } else { deg - plus_nb };
    match (2 * same).cmp(&deg) {
        std::cmp::Ordering::Greater => Some(plus),
        std::cmp::Ordering::Less => Some(!plus),
        std::cmp::Ordering::Equal => None,
    }
}

/// Exact probability that `{u, v}` is monochrome after one step, over
/// uniform initial types and tie coins. Enumerates all 2ⁿ assignments; a
/// tie at either endpoint contributes exactly 1/2.
pub fn exact_monochrome_probability(g: &Graph, u: usize, v: usize) -> Result<BigRational> {
    check_exact(g, u, v)?;
    let n = g.n();
    let (nu, nv) = (neighbor_mask(g, u), neighbor_mask(g, v));
    let (du, dv) = (g.degree(u) as u32, g.degree(v) as u32);
    // numerator in units of 1 / 2^(n+1)
    let mut halves: u64 = 0;
    for types in 0..1u32 << n {
        match (masked_outcome(nu, du, u, types), masked_outcome(nv, dv, v, types)) {
            (Some(a), Some(b)) => halves += if a == b { 2 } else { 0 },
            _ => halves += 1,
        }
    }
    Ok(BigRational::new(BigInt::from(halves), BigInt::from(1u64) << (n + 1)))
}

/// Exact probability that the common neighborhood of `{u, v}` is strictly
/// more decisive than both exclusive neighborhoods (see [`DecisivenessTriple`]).
pub fn exact_decisiveness_probability(g: &Graph, u: usize, v: usize) -> Result<BigRational> {
    check_exact(g, u, v)?;
    let n = g.n();
    let part = neighborhood_partition(g, u, v)?;
    let mask = |vs: &[usize]| vs.iter().fold(0u32, |m, &w| m | 1 << w);
    let common = mask(&part.common);
    let eu = mask(&part.u_exclusive) | 1 << v;
    let ev = mask(&part.v_exclusive) | 1 << u;
    let margin = |set: u32, types: u32| {
        let plus = (set & types).count_ones() as i64;
        (2 * plus - set.count_ones() as i64).unsigned_abs()
    };
    let hits = (0..1u32 << n)
        .filter(|&types| {
            let c = margin(common, types);
            c > margin(eu, types) && c > margin(ev, types)
        })
        .count();
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(1u64) << n))
}
