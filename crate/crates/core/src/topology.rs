//! User-to-cache association graphs.
//!
//! `K = m * b` users and caches are split into `m` groups of `b`. User
//! `k(i, j)` and cache `c(i, j)` are labelled by group `i` and position `j`,
//! both 1-based. Within a group the caches are cut into `z` contiguous
//! cells: cells `1..z-1` hold `floor(b / z)` caches and cell `z` takes the
//! rest.
//!
//! A topology is admissible when
//! * **C1** no user reaches outside its own group,
//! * **C2** every user reaches exactly one cache in each cell of its group,
//! * **C3** every group graph has a perfect matching.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MaccError, Result};

/// Default resampling budget for [`random_topology`], per group.
pub const DEFAULT_RETRY_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UserRef {
    pub group: usize,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheRef {
    pub group: usize,
    pub index: usize,
}

impl UserRef {
    pub fn new(group: usize, index: usize) -> Self {
        UserRef { group, index }
    }

    /// Row-major 1-based id: `(group - 1) * b + index`.
    pub fn global_id(self, b: usize) -> usize {
        (self.group - 1) * b + self.index
    }

    pub fn from_global(id: usize, b: usize) -> Self {
        UserRef {
            group: (id - 1) / b + 1,
            index: (id - 1) % b + 1,
        }
    }
}

impl CacheRef {
    pub fn new(group: usize, index: usize) -> Self {
        CacheRef { group, index }
    }

    pub fn global_id(self, b: usize) -> usize {
        (self.group - 1) * b + self.index
    }

    pub fn from_global(id: usize, b: usize) -> Self {
        CacheRef {
            group: (id - 1) / b + 1,
            index: (id - 1) % b + 1,
        }
    }
}

impl fmt::Display for UserRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k({},{})", self.group, self.index)
    }
}

impl fmt::Display for CacheRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c({},{})", self.group, self.index)
    }
}

fn check_bz(b: usize, z: usize) -> Result<()> {
    if b == 0 || z == 0 || z > b {
        return Err(MaccError::arg(format!("need 1 <= z <= b (got b={b}, z={z})")));
    }
    Ok(())
}

/// Cell holding cache (or block) `j` of a group: `min(ceil(j / floor(b/z)), z)`.
pub fn cache_cell(j: usize, b: usize, z: usize) -> Result<usize> {
    check_bz(b, z)?;
    if j == 0 || j > b {
        return Err(MaccError::arg(format!("index {j} outside 1..={b}")));
    }
    let width = b / z;
    Ok(j.div_ceil(width).min(z))
}

/// Sizes of the `z` cells: `floor(b/z)` each, except the last which is
/// `b - (z - 1) * floor(b/z)`.
pub fn cell_sizes(b: usize, z: usize) -> Result<Vec<usize>> {
    check_bz(b, z)?;
    let width = b / z;
    let mut sizes = vec![width; z];
    sizes[z - 1] = b - (z - 1) * width;
    Ok(sizes)
}

/// Positions (1-based) making up cell `l`.
pub fn cell_range(l: usize, b: usize, z: usize) -> Result<RangeInclusive<usize>> {
    check_bz(b, z)?;
    if l == 0 || l > z {
        return Err(MaccError::arg(format!("cell {l} outside 1..={z}")));
    }
    let width = b / z;
    let start = (l - 1) * width + 1;
    let end = if l == z { b } else { l * width };
    Ok(start..=end)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopologyJson", into = "TopologyJson")]
pub struct Topology {
    m: usize,
    b: usize,
    z: usize,
    // access[global_user - 1], sorted and deduplicated.
    access: Vec<Vec<CacheRef>>,
}

#[derive(Serialize, Deserialize)]
struct TopologyJson {
    m: usize,
    b: usize,
    z: usize,
    access: Vec<Vec<usize>>,
}

impl TryFrom<TopologyJson> for Topology {
    type Error = MaccError;

    fn try_from(raw: TopologyJson) -> Result<Self> {
        let b = raw.b;
        let access = raw
            .access
            .into_iter()
            .map(|ids| {
                ids.into_iter()
                    .map(|id| {
                        if id == 0 || b == 0 {
                            Err(MaccError::arg(format!("bad cache id {id}")))
                        } else {
                            Ok(CacheRef::from_global(id, b))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Topology::new(raw.m, raw.b, raw.z, access)
    }
}

impl From<Topology> for TopologyJson {
    fn from(t: Topology) -> Self {
        let b = t.b;
        TopologyJson {
            m: t.m,
            b: t.b,
            z: t.z,
            access: t
                .access
                .iter()
                .map(|caches| caches.iter().map(|c| c.global_id(b)).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub holds: bool,
    pub violations: Vec<String>,
}

impl ConditionResult {
    fn from_violations(violations: Vec<String>) -> Self {
        ConditionResult {
            holds: violations.is_empty(),
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub c1: ConditionResult,
    pub c2: ConditionResult,
    pub c3: ConditionResult,
    /// Users that touch at most one cache per cell but skip some cell.
    /// They satisfy the relaxed "at most one" reading of C2 only.
    pub c2_at_most_warnings: Vec<String>,
    /// Maximum matching size found in each group.
    pub matching_sizes: Vec<usize>,
    pub pass: bool,
}

impl Topology {
    /// Builds a topology from per-user access lists in row-major user order.
    /// Cache references must be in range; the C1-C3 conditions are left to
    /// [`Topology::validate`].
    pub fn new(m: usize, b: usize, z: usize, access: Vec<Vec<CacheRef>>) -> Result<Self> {
        if m == 0 {
            return Err(MaccError::arg("m must be positive"));
        }
        check_bz(b, z)?;
        if access.len() != m * b {
            return Err(MaccError::arg(format!(
                "expected {} access lists, got {}",
                m * b,
                access.len()
            )));
        }
        let mut access = access;
        for (u, caches) in access.iter_mut().enumerate() {
            caches.sort_unstable();
            caches.dedup();
            if let Some(c) = caches
                .iter()
                .find(|c| c.group == 0 || c.group > m || c.index == 0 || c.index > b)
            {
                return Err(MaccError::arg(format!(
                    "user {} references cache {c} outside the universe",
                    UserRef::from_global(u + 1, b)
                )));
            }
        }
        Ok(Topology { m, b, z, access })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn num_users(&self) -> usize {
        self.m * self.b
    }

    pub fn users(&self) -> impl Iterator<Item = UserRef> + '_ {
        (1..=self.m).flat_map(move |i| (1..=self.b).map(move |j| UserRef::new(i, j)))
    }

    /// `C_{k(i,j)}`: the caches a user reads.
    pub fn access(&self, user: UserRef) -> &[CacheRef] {
        &self.access[user.global_id(self.b) - 1]
    }

    /// Positions of the own-group caches a user reads.
    fn own_group(&self, user: UserRef) -> impl Iterator<Item = usize> + '_ {
        self.access(user)
            .iter()
            .filter(move |c| c.group == user.group)
            .map(|c| c.index)
    }

    fn group_adjacency(&self, group: usize) -> Vec<Vec<usize>> {
        (1..=self.b)
            .map(|j| self.own_group(UserRef::new(group, j)).collect())
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        let mut warnings = Vec::new();
        for user in self.users() {
            for cache in self.access(user) {
                if cache.group != user.group {
                    c1.push(format!("{user} reaches {cache} in another group"));
                }
            }
            let mut per_cell = vec![0usize; self.z];
            for j in self.own_group(user) {
                per_cell[cache_cell(j, self.b, self.z).expect("index checked in new") - 1] += 1;
            }
            let crowded: Vec<usize> = (0..self.z).filter(|&l| per_cell[l] > 1).collect();
            let empty: Vec<usize> = (0..self.z).filter(|&l| per_cell[l] == 0).collect();
            if !crowded.is_empty() {
                c2.push(format!(
                    "{user} reaches several caches in cell(s) {:?}",
                    crowded.iter().map(|l| l + 1).collect::<Vec<_>>()
                ));
            } else if !empty.is_empty() {
                let msg = format!(
                    "{user} reaches no cache in cell(s) {:?}",
                    empty.iter().map(|l| l + 1).collect::<Vec<_>>()
                );
                warnings.push(msg.clone());
                c2.push(msg);
            }
        }

        let mut c3 = Vec::new();
        let mut matching_sizes = Vec::with_capacity(self.m);
        for group in 1..=self.m {
            let matched = max_matching(&self.group_adjacency(group), self.b);
            let size = matched.iter().filter(|m| m.is_some()).count();
            if size < self.b {
                c3.push(format!(
                    "group {group} has a maximum matching of size {size} < {}",
                    self.b
                ));
            }
            matching_sizes.push(size);
        }

        let c1 = ConditionResult::from_violations(c1);
        let c2 = ConditionResult::from_violations(c2);
        let c3 = ConditionResult::from_violations(c3);
        let pass = c1.holds && c2.holds && c3.holds;
        ValidationReport {
            c1,
            c2,
            c3,
            c2_at_most_warnings: warnings,
            matching_sizes,
            pass,
        }
    }

    /// One perfect matching per group, found with augmenting paths. Users are
    /// processed in ascending order and caches tried in ascending order, so
    /// the result is deterministic.
    pub fn extract_matchings(&self) -> Result<MatchingAssignment> {
        let mut user_to_cache = Vec::with_capacity(self.m);
        for group in 1..=self.m {
            let matched = max_matching(&self.group_adjacency(group), self.b);
            let maps = matched
                .into_iter()
                .enumerate()
                .map(|(u, c)| {
                    c.ok_or_else(|| {
                        MaccError::ConditionViolated(format!(
                            "C3: no perfect matching in group {group} (user {} unmatched)",
                            UserRef::new(group, u + 1)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            user_to_cache.push(maps);
        }
        MatchingAssignment::new(self, user_to_cache)
    }
}

/// Kuhn's augmenting-path maximum matching. `adj[u]` lists the 1-based
/// right vertices of left vertex `u` (0-based); the result maps each left
/// vertex to its matched right vertex.
fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v - 1] {
                continue;
            }
            seen[v - 1] = true;
            if owner[v - 1].map_or(true, |w| augment(w, adj, seen, owner)) {
                owner[v - 1] = Some(u);
                return true;
            }
        }
        false
    }

    let mut owner: Vec<Option<usize>> = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut owner);
    }
    let mut matched = vec![None; adj.len()];
    for (v, u) in owner.iter().enumerate() {
        if let Some(u) = u {
            matched[*u] = Some(v + 1);
        }
    }
    matched
}

/// Per-group bijections `f_{M_i}` from users to caches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingAssignment {
    m: usize,
    b: usize,
    // [group - 1][user - 1] = cache position
    user_to_cache: Vec<Vec<usize>>,
    // [group - 1][cache - 1] = user position
    cache_to_user: Vec<Vec<usize>>,
}

impl MatchingAssignment {
    /// Checks that every group map is a bijection onto `1..=b` that only
    /// uses edges of `topology`.
    pub fn new(topology: &Topology, user_to_cache: Vec<Vec<usize>>) -> Result<Self> {
        let (m, b) = (topology.m, topology.b);
        if user_to_cache.len() != m || user_to_cache.iter().any(|g| g.len() != b) {
            return Err(MaccError::arg(format!("matching must be {m} maps of {b} users")));
        }
        let mut cache_to_user = vec![vec![0usize; b]; m];
        for (g, map) in user_to_cache.iter().enumerate() {
            for (u, &c) in map.iter().enumerate() {
                let user = UserRef::new(g + 1, u + 1);
                if c == 0 || c > b {
                    return Err(MaccError::arg(format!("{user} mapped to cache index {c}")));
                }
                let cache = CacheRef::new(g + 1, c);
                if !topology.access(user).contains(&cache) {
                    return Err(MaccError::ConditionViolated(format!(
                        "{user} is matched to {cache} but does not access it"
                    )));
                }
                if cache_to_user[g][c - 1] != 0 {
                    return Err(MaccError::ConditionViolated(format!(
                        "{cache} is matched to two users"
                    )));
                }
                cache_to_user[g][c - 1] = u + 1;
            }
        }
        Ok(MatchingAssignment {
            m,
            b,
            user_to_cache,
            cache_to_user,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// `f_{M_i}(k(i, j))`.
    pub fn cache_of(&self, user: UserRef) -> CacheRef {
        CacheRef::new(user.group, self.user_to_cache[user.group - 1][user.index - 1])
    }

    /// `f_{M_i}^{-1}(c(i, j))`.
    pub fn user_of(&self, cache: CacheRef) -> UserRef {
        UserRef::new(cache.group, self.cache_to_user[cache.group - 1][cache.index - 1])
    }

    pub fn group_map(&self, group: usize) -> &[usize] {
        &self.user_to_cache[group - 1]
    }
}

/// Deterministic member of the admissible class: in each cell of size `s`
/// user `k(i, j)` reads the cache at offset `(j - 1) mod s`.
pub fn canonical_topology(m: usize, b: usize, z: usize) -> Result<Topology> {
    if m == 0 {
        return Err(MaccError::arg("m must be positive"));
    }
    let sizes = cell_sizes(b, z)?;
    let mut access = Vec::with_capacity(m * b);
    for group in 1..=m {
        for j in 1..=b {
            let mut caches = Vec::with_capacity(z);
            let mut start = 1;
            for &s in &sizes {
                caches.push(CacheRef::new(group, start + (j - 1) % s));
                start += s;
            }
            access.push(caches);
        }
    }
    Topology::new(m, b, z, access)
}

pub fn random_topology(m: usize, b: usize, z: usize, seed: u64) -> Result<Topology> {
    random_topology_with_budget(m, b, z, seed, DEFAULT_RETRY_BUDGET)
}

/// Each user picks one cache per cell uniformly at random. A group is
/// resampled until it admits a perfect matching, at most `retries` times.
pub fn random_topology_with_budget(
    m: usize,
    b: usize,
    z: usize,
    seed: u64,
    retries: usize,
) -> Result<Topology> {
    if m == 0 {
        return Err(MaccError::arg("m must be positive"));
    }
    let ranges = (1..=z)
        .map(|l| cell_range(l, b, z))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut access = Vec::with_capacity(m * b);
    for group in 1..=m {
        let mut attempt = 0;
        let adjacency = loop {
            if attempt == retries {
                return Err(MaccError::Generation(format!(
                    "group {group}: no perfect matching after {retries} samples"
                )));
            }
            attempt += 1;
            let adj: Vec<Vec<usize>> = (0..b)
                .map(|_| ranges.iter().map(|r| rng.gen_range(r.clone())).collect())
                .collect();
            if max_matching(&adj, b).iter().all(Option::is_some) {
                break adj;
            }
        };
        access.extend(
            adjacency
                .into_iter()
                .map(|caches| caches.into_iter().map(|c| CacheRef::new(group, c)).collect()),
        );
    }
    Topology::new(m, b, z, access)
}

/// Number of graphs satisfying C1 and C2:
/// `(floor(b/z)^(z-1) * (b - (z-1) floor(b/z)))^(b m)`.
pub fn count_topologies(m: usize, b: usize, z: usize) -> Result<BigUint> {
    let sizes = cell_sizes(b, z)?;
    let per_user = sizes
        .iter()
        .fold(BigUint::one(), |acc, &s| acc * BigUint::from(s));
    Ok(num_traits::pow(per_user, b * m))
}
