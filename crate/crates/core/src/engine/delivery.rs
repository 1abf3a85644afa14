use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::placement::Placement;
use crate::design::TupleIter;
use crate::error::{MaccError, Result};
use crate::topology::{CacheRef, MatchingAssignment, UserRef};

/// Bipartite graph between caches and blocks: `c(i, j)` is joined to
/// `B(i, l)` whenever the user matched to `c(i, j)` cannot see `B(i, l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandGraph {
    b: usize,
    // [global cache - 1] -> ascending block positions, i.e. f_(i, j') of the
    // matched user k(i, j')
    neighbors: Vec<Vec<usize>>,
}

impl DemandGraph {
    pub fn build(placement: &Placement, matchings: &MatchingAssignment) -> Result<Self> {
        let p = placement.params();
        if matchings.m() != p.m || matchings.b() != p.b {
            return Err(MaccError::ShapeMismatch(
                "matchings and placement disagree on (m, b)".into(),
            ));
        }
        let neighbors = (1..=p.m)
            .flat_map(|i| (1..=p.b).map(move |j| CacheRef::new(i, j)))
            .map(|cache| {
                let user = matchings.user_of(cache);
                (1..=p.b)
                    .filter(|&l| !placement.block_known(user, l))
                    .collect()
            })
            .collect();
        Ok(DemandGraph { b: p.b, neighbors })
    }

    /// Missing blocks of the user matched to `cache`, ascending.
    pub fn neighbors(&self, cache: CacheRef) -> &[usize] {
        &self.neighbors[cache.global_id(self.b) - 1]
    }

    pub fn degree(&self, cache: CacheRef) -> usize {
        self.neighbors(cache).len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum()
    }

    /// The common left degree, if every cache has the same one.
    pub fn uniform_degree(&self) -> Option<usize> {
        let first = self.neighbors.first()?.len();
        self.neighbors
            .iter()
            .all(|n| n.len() == first)
            .then_some(first)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    /// Global id of the user this summand is meant for.
    pub user: usize,
    pub file: usize,
    pub subfile: u32,
}

/// One coded broadcast `Y^n_{j_1 .. j_m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TransmissionJson", into = "TransmissionJson")]
pub struct Transmission {
    pub n: usize,
    pub coords: Vec<usize>,
    /// One entry per group, in group order.
    pub summands: Vec<Summand>,
    pub payload: Option<Vec<u8>>,
}

#[derive(Serialize, Deserialize)]
struct TransmissionJson {
    n: usize,
    coords: Vec<usize>,
    summands: Vec<Summand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    payload_hex: Option<String>,
}

impl From<Transmission> for TransmissionJson {
    fn from(t: Transmission) -> Self {
        TransmissionJson {
            n: t.n,
            coords: t.coords,
            summands: t.summands,
            payload_hex: t.payload.map(hex::encode),
        }
    }
}

impl TryFrom<TransmissionJson> for Transmission {
    type Error = String;

    fn try_from(raw: TransmissionJson) -> std::result::Result<Self, String> {
        let payload = raw
            .payload_hex
            .map(hex::decode)
            .transpose()
            .map_err(|e| e.to_string())?;
        Ok(Transmission {
            n: raw.n,
            coords: raw.coords,
            summands: raw.summands,
            payload,
        })
    }
}

fn check_demands(demands: &[usize], users: usize, n_files: usize) -> Result<()> {
    if demands.len() != users {
        return Err(MaccError::arg(format!(
            "expected {users} demands, got {}",
            demands.len()
        )));
    }
    if let Some(pos) = demands.iter().position(|&d| d == 0 || d > n_files) {
        return Err(MaccError::arg(format!(
            "user {} demands file {} outside 1..={n_files}",
            pos + 1,
            demands[pos]
        )));
    }
    Ok(())
}

/// Emits every transmission in `(n, j_1, .., j_m)` lexicographic order.
///
/// For group `i`, cache `c(i, j_i)` is served to its matched user
/// `k(i, j_i')`; the summand is the subfile at the point obtained by
/// replacing coordinate `i` with `j_i* = f_(i, j_i')(n)`.
pub fn delivery(
    placement: &Placement,
    matchings: &MatchingAssignment,
    demands: &[usize],
) -> Result<Vec<Transmission>> {
    if placement.mu() != 1 {
        return Err(MaccError::UnsupportedDesign(format!(
            "delivery needs mu = 1, design has mu = {}",
            placement.mu()
        )));
    }
    let p = placement.params();
    check_demands(demands, p.num_users(), p.n_files)?;
    let graph = DemandGraph::build(placement, matchings)?;
    let rounds = p.rate_per_coordinate();
    if let Some(c) = (1..=p.m * p.b)
        .map(|id| CacheRef::from_global(id, p.b))
        .find(|&c| graph.degree(c) != rounds)
    {
        return Err(MaccError::Internal(format!(
            "{c} has demand degree {} instead of {rounds}",
            graph.degree(c)
        )));
    }

    let mut out = Vec::with_capacity(rounds * p.subpacketization);
    let mut shifted = vec![0usize; p.m];
    for n in 1..=rounds {
        for coords in TupleIter::new(p.m, p.b) {
            let mut summands = Vec::with_capacity(p.m);
            for i in 1..=p.m {
                let cache = CacheRef::new(i, coords[i - 1]);
                let user = matchings.user_of(cache);
                shifted.copy_from_slice(&coords);
                shifted[i - 1] = graph.neighbors(cache)[n - 1];
                let subfile = placement
                    .index
                    .point(&shifted)
                    .ok_or_else(|| MaccError::Internal("point table missing".into()))?;
                let uid = user.global_id(p.b);
                summands.push(Summand {
                    user: uid,
                    file: demands[uid - 1],
                    subfile,
                });
            }
            out.push(Transmission {
                n,
                coords,
                summands,
                payload: None,
            });
        }
    }
    Ok(out)
}

/// What `user` learns from one transmission: the single summand it lacks,
/// if there is exactly one.
pub(crate) fn lone_unknown<'a>(
    placement: &Placement,
    user: UserRef,
    tx: &'a Transmission,
) -> Option<&'a Summand> {
    let mut unknown = tx
        .summands
        .iter()
        .filter(|s| !placement.knows(user, s.subfile));
    let first = unknown.next()?;
    unknown.next().is_none().then_some(first)
}

/// Symbolic decoding for one user. A transmission yields a subfile when the
/// user holds every summand but one and that one belongs to the file it
/// asked for. Returns the recovered subfile indices.
pub fn decode(
    user: UserRef,
    placement: &Placement,
    transmissions: &[Transmission],
    demands: &[usize],
) -> Result<BTreeSet<u32>> {
    let p = placement.params();
    check_demands(demands, p.num_users(), p.n_files)?;
    if user.group == 0 || user.group > p.m || user.index == 0 || user.index > p.b {
        return Err(MaccError::arg(format!("no such user {user}")));
    }
    let want = demands[user.global_id(p.b) - 1];
    Ok(transmissions
        .iter()
        .filter_map(|tx| lone_unknown(placement, user, tx))
        .filter(|s| s.file == want)
        .map(|s| s.subfile)
        .collect())
}
