//! Seeded generators of random rational PL data.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::MetricGraph;
use crate::pl::PLFunction;
use crate::rational::{qi, Q};

/// Denominator of every generated rational.
pub const GRID: i64 = 256;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the multiples of `1/GRID` in `[lo, hi]`.
pub fn rational(rng: &mut impl Rng, lo: &Q, hi: &Q) -> Q {
    let a = (lo * qi(GRID)).ceil().to_integer();
    let b = (hi * qi(GRID)).floor().to_integer();
    let a: i64 = a.try_into().expect("small bound");
    let b: i64 = b.try_into().expect("small bound");
    Q::new(rng.gen_range(a..=b).into(), GRID.into())
}

/// Random PL function with values in `[lo, hi]` and up to `breakpoints`
/// interior breakpoints per edge.
pub fn pl(rng: &mut impl Rng, graph: &Arc<MetricGraph>, breakpoints: usize, lo: &Q, hi: &Q) -> PLFunction {
    let vertex: Vec<Q> = (0..graph.vertex_count()).map(|_| rational(rng, lo, hi)).collect();
    let interior = graph
        .edges()
        .iter()
        .map(|e| {
            let mut ts: Vec<Q> = (0..breakpoints)
                .map(|_| {
                    let j: i64 = rng.gen_range(1..GRID);
                    Q::new(j.into(), GRID.into()) * &e.len
                })
                .collect();
            ts.sort();
            ts.dedup();
            ts.into_iter().map(|t| (t, rational(rng, lo, hi))).collect()
        })
        .collect();
    PLFunction::from_vertex_values(graph, vertex, interior).expect("random breakpoints are valid")
}

/// Random PL function with sup-norm exactly 1 (retrying on zero).
pub fn normalized_pl(rng: &mut impl Rng, graph: &Arc<MetricGraph>, breakpoints: usize) -> PLFunction {
    loop {
        if let Some(f) = pl(rng, graph, breakpoints, &qi(-1), &qi(1)).normalized() {
            return f;
        }
    }
}
