//! Seeded random instances: partial grids and Delaunay triangulations of
//! random points.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::instance::Instance;
use crate::planar::{Arc, Capacity, PlanarGraph, TerminalSets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Grid,
    Triangulation,
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Kind, String> {
        match s {
            "grid" => Ok(Kind::Grid),
            "tri" | "triangulation" => Ok(Kind::Triangulation),
            _ => Err(format!("unknown instance kind {s:?} (expected grid or tri)")),
        }
    }
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Grid => "grid",
            Kind::Triangulation => "tri",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub kind: Kind,
    pub n: usize,
    pub seed: u64,
    pub cap_max: Capacity,
    pub source_fraction: f64,
    pub sink_fraction: f64,
}

impl GenParams {
    pub fn new(kind: Kind, n: usize, seed: u64) -> GenParams {
        GenParams { kind, n, seed, cap_max: 1_000_000, source_fraction: 0.05, sink_fraction: 0.05 }
    }
}

/// Builds the instance described by `params`. The same parameters always
/// give the same instance.
///
/// # Panics
/// If `n < 2` or `cap_max < 1`.
pub fn generate(params: &GenParams) -> Instance {
    assert!(params.n >= 2, "instances need at least two nodes");
    assert!(params.cap_max >= 1, "cap_max must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (edges, neighbors) = match params.kind {
        Kind::Grid => grid_edges(params.n),
        Kind::Triangulation => delaunay_edges(params.n, &mut rng),
    };
    let arcs = edges
        .iter()
        .map(|&(u, v)| {
            let c = rng.random_range(1..=params.cap_max);
            if rng.random::<bool>() {
                Arc::new(u, v, c)
            } else {
                Arc::new(v, u, c)
            }
        })
        .collect();
    let graph = PlanarGraph::from_neighbor_lists(params.n, arcs, &neighbors).expect("generated embedding is valid");
    let terminals = sample_terminals(params, &mut rng);
    Instance { graph, terminals }
}

/// `w = ceil(sqrt(n))` columns filled row by row; the last row may be short.
fn grid_edges(n: usize) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let w = (1..=n).find(|w| w * w >= n).unwrap();
    let mut edges = Vec::new();
    let mut neighbors = Vec::with_capacity(n);
    for v in 0..n {
        let (r, c) = (v / w, v % w);
        let right = (c + 1 < w && v + 1 < n).then_some(v + 1);
        let down = (v + w < n).then_some(v + w);
        let up = (r > 0).then(|| v - w);
        let left = (c > 0).then(|| v - 1);
        if let Some(x) = right {
            edges.push((v, x));
        }
        if let Some(x) = down {
            edges.push((v, x));
        }
        neighbors.push([up, right, down, left].into_iter().flatten().collect());
    }
    (edges, neighbors)
}

fn delaunay_edges(n: usize, rng: &mut ChaCha8Rng) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let mut tri: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    let mut points = Vec::with_capacity(n);
    while tri.num_vertices() < n {
        let p = Point2::new(rng.random::<f64>(), rng.random::<f64>());
        let before = tri.num_vertices();
        tri.insert(p).expect("finite point");
        // a repeated point leaves the vertex count unchanged
        if tri.num_vertices() > before {
            points.push(p);
        }
    }
    let mut edges: Vec<(usize, usize)> = tri
        .undirected_edges()
        .map(|e| {
            let [a, b] = e.vertices();
            let (a, b) = (a.fix().index(), b.fix().index());
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let mut neighbors = vec![Vec::new(); n];
    for &(a, b) in &edges {
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    for (v, list) in neighbors.iter_mut().enumerate() {
        let angle = |w: &usize| (points[*w].y - points[v].y).atan2(points[*w].x - points[v].x);
        // decreasing angle is clockwise
        list.sort_by(|a, b| angle(b).total_cmp(&angle(a)));
    }
    (edges, neighbors)
}

fn sample_terminals(params: &GenParams, rng: &mut ChaCha8Rng) -> TerminalSets {
    let n = params.n;
    let count = |frac: f64| ((frac * n as f64).round() as usize).max(1);
    let s = count(params.source_fraction).min(n - 1);
    let t = count(params.sink_fraction).min(n - s);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    TerminalSets::new(n, order[..s].to_vec(), order[s..s + t].to_vec()).expect("disjoint by construction")
}
