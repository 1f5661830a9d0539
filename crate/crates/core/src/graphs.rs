//! Random geometric graphs on the unit torus and Erdős–Rényi graphs, both
//! calibrated by expected average degree, stored in compressed adjacency form.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{param, Error, Result};
use crate::rng::RngStream;

/// A point on the unit torus `[0,1)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

fn wrap_unit(v: f64) -> f64 {
    let w = v.rem_euclid(1.0);
    // rem_euclid of a tiny negative value rounds up to exactly 1.0
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

impl TorusPoint {
    /// Builds a point, reducing both coordinates modulo 1.
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint {
            x: wrap_unit(x),
            y: wrap_unit(y),
        }
    }
}

#[inline]
fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Euclidean distance on the unit torus: each axis uses the shorter way round.
#[inline]
pub fn torus_distance(a: TorusPoint, b: TorusPoint) -> f64 {
    circular_gap(a.x, b.x).hypot(circular_gap(a.y, b.y))
}

fn check_degree_inputs(n: usize, avg_degree: f64) -> Result<()> {
    if n < 2 {
        return Err(param(format!("need at least 2 vertices, got {n}")));
    }
    if !(avg_degree > 0.0 && avg_degree.is_finite()) {
        return Err(param(format!("average degree must be positive, got {avg_degree}")));
    }
    Ok(())
}

/// Connection radius giving expected average degree `avg_degree`:
/// `r = sqrt(avg_degree / ((n-1)π))`. Radii above 1/2 are rejected because
/// the disk would overlap itself around the torus.
pub fn radius_for_degree(n: usize, avg_degree: f64) -> Result<f64> {
    check_degree_inputs(n, avg_degree)?;
    let r = (avg_degree / ((n - 1) as f64 * PI)).sqrt();
    if r > 0.5 {
        return Err(param(format!(
            "radius {r} for n={n}, avg_degree={avg_degree} exceeds 1/2"
        )));
    }
    Ok(r)
}

/// Edge probability giving expected average degree `avg_degree`: `p = avg_degree/(n-1)`.
pub fn er_probability_for_degree(n: usize, avg_degree: f64) -> Result<f64> {
    check_degree_inputs(n, avg_degree)?;
    let p = avg_degree / (n - 1) as f64;
    if p > 1.0 {
        return Err(param(format!(
            "edge probability {p} for n={n}, avg_degree={avg_degree} exceeds 1"
        )));
    }
    Ok(p)
}

/// Undirected simple graph. Neighbor lists are sorted and stored back to back;
/// `offsets[v]..offsets[v+1]` indexes the neighbors of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds a graph from undirected edges. Self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(param(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(param(format!("self-loop at {u}")));
            }
        }
        let g = Self::from_edges_unchecked(n, edges);
        for v in 0..n {
            if g.neighbors(v).windows(2).any(|w| w[0] == w[1]) {
                return Err(param(format!("duplicate edge at vertex {v}")));
            }
        }
        Ok(g)
    }

    /// Counting-sort construction. Callers guarantee valid, distinct edges.
    pub(crate) fn from_edges_unchecked(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0usize; offsets[n]];
        for &(u, v) in edges {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, neighbors }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn average_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.neighbors.len() as f64 / self.n() as f64
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Checks sortedness, symmetry, and absence of loops and duplicates.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for u in 0..n {
            let nb = self.neighbors(u);
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain(format!("neighbors of {u} not strictly sorted")));
            }
            for &v in nb {
                if v >= n || v == u {
                    return Err(Error::Domain(format!("bad neighbor {v} of {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::Domain(format!("edge ({u},{v}) not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Text edge list: one `u v` line per edge, `u < v`, lexicographically sorted.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(self.edge_count() * 12);
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").expect("writing to String");
        }
        s
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        let io = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        f.write_all(self.to_edge_list().as_bytes()).map_err(io)?;
        f.flush().map_err(io)
    }
}

/// A random geometric graph together with its vertex positions and radius.
#[derive(Debug, Clone)]
pub struct GeometricGraph {
    pub graph: Graph,
    pub points: Vec<TorusPoint>,
    pub radius: f64,
}

impl GeometricGraph {
    /// Normalized length `dist(u,v)/r` of a pair.
    pub fn tau(&self, u: usize, v: usize) -> f64 {
        torus_distance(self.points[u], self.points[v]) / self.radius
    }
}

/// Places `n` points uniformly on the torus, consuming exactly `2n` uniform
/// draws (x then y, vertex by vertex).
pub fn sample_points(n: usize, stream: &mut RngStream) -> Vec<TorusPoint> {
    (0..n)
        .map(|_| {
            let x = stream.next_unit_uniform();
            let y = stream.next_unit_uniform();
            TorusPoint { x, y }
        })
        .collect()
}

/// Samples a torus random geometric graph with expected average degree `avg_degree`.
pub fn generate_rgg(n: usize, avg_degree: f64, stream: &mut RngStream) -> Result<GeometricGraph> {
    let radius = radius_for_degree(n, avg_degree)?;
    let points = sample_points(n, stream);
    let graph = rgg_from_points(&points, radius);
    Ok(GeometricGraph {
        graph,
        points,
        radius,
    })
}

/// Connects every pair at torus distance `<= radius` using a wrapped cell
/// grid whose cell side is at least `radius`.
pub fn rgg_from_points(points: &[TorusPoint], radius: f64) -> Graph {
    let n = points.len();
    if n < 2 {
        return Graph::empty(n);
    }
    // cells per side; capped so tiny radii do not allocate huge grids
    let cap = ((n as f64).sqrt().ceil() as usize).max(1);
    let m = if radius > 0.0 {
        ((1.0 / radius).floor() as usize).clamp(1, cap)
    } else {
        cap
    };
    let cell_of = |p: &TorusPoint| {
        let cx = ((p.x * m as f64) as usize).min(m - 1);
        let cy = ((p.y * m as f64) as usize).min(m - 1);
        cy * m + cx
    };

    let cells = m * m;
    let mut start = vec![0usize; cells + 1];
    let point_cell: Vec<usize> = points.iter().map(cell_of).collect();
    for &c in &point_cell {
        start[c + 1] += 1;
    }
    for c in 0..cells {
        start[c + 1] += start[c];
    }
    let mut fill = start.clone();
    let mut members = vec![0usize; n];
    for (i, &c) in point_cell.iter().enumerate() {
        members[fill[c]] = i;
        fill[c] += 1;
    }

    let mut edges = Vec::new();
    let mut around = Vec::with_capacity(9);
    for cy in 0..m {
        for cx in 0..m {
            around.clear();
            for dy in [m - 1, 0, 1] {
                for dx in [m - 1, 0, 1] {
                    around.push(((cy + dy) % m) * m + (cx + dx) % m);
                }
            }
            // with fewer than three cells per side the 3x3 stencil repeats cells
            around.sort_unstable();
            around.dedup();
            let here = cy * m + cx;
            for &i in &members[start[here]..start[here + 1]] {
                for &c in &around {
                    for &j in &members[start[c]..start[c + 1]] {
                        if j > i && torus_distance(points[i], points[j]) <= radius {
                            edges.push((i, j));
                        }
                    }
                }
            }
        }
    }
    Graph::from_edges_unchecked(n, &edges)
}

/// All-pairs construction. Reference for [`rgg_from_points`].
pub fn rgg_naive(points: &[TorusPoint], radius: f64) -> Graph {
    let n = points.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if torus_distance(points[i], points[j]) <= radius {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges_unchecked(n, &edges)
}

/// Samples G(n, p) with `p = avg_degree/(n-1)`, skipping over absent pairs
/// with geometric jumps (one uniform draw per present edge, plus one).
pub fn generate_er(n: usize, avg_degree: f64, stream: &mut RngStream) -> Result<Graph> {
    let p = er_probability_for_degree(n, avg_degree)?;
    Ok(er_with_probability(n, p, stream))
}

/// G(n, p) for an explicit `p` in `[0, 1]`.
pub fn er_with_probability(n: usize, p: f64, stream: &mut RngStream) -> Graph {
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((w, v));
            }
        }
        return Graph::from_edges_unchecked(n, &edges);
    }
    if p <= 0.0 || n < 2 {
        return Graph::empty(n);
    }
    // pairs (w, v) with w < v, enumerated row by row
    let log_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let u = stream.next_unit_uniform();
        let skip = ((1.0 - u).ln() / log_q).floor();
        // saturating cast; a skip beyond all pairs simply ends the loop
        w = w.saturating_add(1).saturating_add(skip as i64);
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Graph::from_edges_unchecked(n, &edges)
}

/// Split of the vertices around a pair `(u, v)`. None of the lists contains
/// `u` or `v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NeighborhoodPartition {
    pub common: Vec<usize>,
    pub u_exclusive: Vec<usize>,
    pub v_exclusive: Vec<usize>,
    /// Vertices adjacent to neither, excluding `u` and `v`.
    pub outside: usize,
}

impl NeighborhoodPartition {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.common.len(), self.u_exclusive.len(), self.v_exclusive.len())
    }
}

/// Partitions the neighbors of `u` and `v` by a linear merge of the two
/// sorted lists.
pub fn neighborhood_partition(g: &Graph, u: usize, v: usize) -> Result<NeighborhoodPartition> {
    let n = g.n();
    if u >= n || v >= n {
        return Err(param(format!("vertex pair ({u},{v}) out of range for n={n}")));
    }
    if u == v {
        return Err(param(format!("pair ({u},{v}) must be two distinct vertices")));
    }
    let (a, b) = (g.neighbors(u), g.neighbors(v));
    let mut part = NeighborhoodPartition::default();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let x = a.get(i).copied().unwrap_or(usize::MAX);
        let y = b.get(j).copied().unwrap_or(usize::MAX);
        if x == y {
            part.common.push(x);
            i += 1;
            j += 1;
        } else if x < y {
            if x != v {
                part.u_exclusive.push(x);
            }
            i += 1;
        } else {
            if y != u {
                part.v_exclusive.push(y);
            }
            j += 1;
        }
    }
    let (c, eu, ev) = part.counts();
    part.outside = n - 2 - c - eu - ev;
    Ok(part)
}
