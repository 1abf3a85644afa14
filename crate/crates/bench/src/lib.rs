//! Shared fixtures for the benchmarks.

use macc_core::topology::canonical_topology;
use macc_core::{Design, Placement, SchemeParams, Topology};
use macc_core::{engine, MatchingAssignment};

/// Everything delivery needs for one parameter point, built once outside
/// the timed loop.
pub struct Fixture {
    pub design: Design,
    pub topology: Topology,
    pub params: SchemeParams,
    pub placement: Placement,
    pub matchings: MatchingAssignment,
    pub demands: Vec<usize>,
}

impl Fixture {
    pub fn new(m: usize, b: usize, z: usize, t: usize) -> Self {
        let design = Design::construct(m, b, 1).expect("design");
        let topology = canonical_topology(m, b, z).expect("topology");
        let params = SchemeParams::new(m, b, z, t, m * b).expect("params");
        let placement =
            engine::place(&design, &topology, &params, engine::BlockChoice::Deterministic)
                .expect("placement");
        let matchings = topology.extract_matchings().expect("matching");
        let demands = (1..=m * b).collect();
        Fixture {
            design,
            topology,
            params,
            placement,
            matchings,
            demands,
        }
    }
}
