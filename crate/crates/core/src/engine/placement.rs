use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::params::SchemeParams;
use crate::design::{tuple_rank, Design};
use crate::error::{MaccError, Result};
use crate::topology::{cache_cell, cell_range, CacheRef, Topology, UserRef};

/// How the extra blocks of `B_c(i, j)` (beyond `B(i, j)` itself) are picked
/// from the cache's cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BlockChoice {
    /// Lowest-indexed blocks of the cell.
    #[default]
    Deterministic,
    /// Uniform choice driven by the given seed.
    Seeded(u64),
}

/// Point lookups in both directions.
#[derive(Debug, Clone)]
pub(crate) struct PointIndex {
    b: usize,
    // coords[p - 1][i - 1] = block of class i holding point p
    coords: Vec<Vec<u32>>,
    // tuple rank -> point, present only when mu = 1
    table: Option<Vec<u32>>,
}

impl PointIndex {
    fn new(design: &Design) -> Result<Self> {
        let coords = design.point_coordinates()?;
        let quick = design.quick_mu();
        if quick != Some(design.mu()) {
            return Err(MaccError::UnsupportedDesign(format!(
                "cross intersections are not constant at mu={}",
                design.mu()
            )));
        }
        let table = (design.mu() == 1).then(|| {
            let mut table = vec![0u32; coords.len()];
            for (p, c) in coords.iter().enumerate() {
                table[tuple_rank(c.iter().map(|&x| x as usize), design.b())] = p as u32 + 1;
            }
            table
        });
        Ok(PointIndex {
            b: design.b(),
            coords,
            table,
        })
    }

    pub(crate) fn block_of(&self, point: u32, class: usize) -> usize {
        self.coords[point as usize - 1][class - 1] as usize
    }

    pub(crate) fn point(&self, coords: &[usize]) -> Option<u32> {
        self.table
            .as_ref()
            .map(|t| t[tuple_rank(coords.iter().copied(), self.b)])
    }
}

#[derive(Debug, Clone)]
pub struct Placement {
    params: SchemeParams,
    mu: usize,
    // [global cache - 1] -> sorted block positions within the cache's class
    cache_blocks: Vec<Vec<usize>>,
    // [global user - 1] -> sorted block positions within the user's class
    user_blocks: Vec<Vec<usize>>,
    // [global user - 1][block - 1]
    known: Vec<Vec<bool>>,
    pub(crate) index: PointIndex,
}

/// Fills every cache with `B_c(i, j)`: the block `B(i, j)` plus further
/// blocks of the same cell, `t'` in total for cells `1..z-1` and `t_z` for
/// cell `z`.
pub fn place(
    design: &Design,
    topology: &Topology,
    params: &SchemeParams,
    choice: BlockChoice,
) -> Result<Placement> {
    let (m, b, z) = (params.m, params.b, params.z);
    if design.m() != m || design.b() != b {
        return Err(MaccError::ShapeMismatch(format!(
            "design has m={}, b={} but parameters ask for m={m}, b={b}",
            design.m(),
            design.b()
        )));
    }
    if topology.m() != m || topology.b() != b || topology.z() != z {
        return Err(MaccError::ShapeMismatch(format!(
            "topology has (m, b, z)=({}, {}, {}) but parameters ask for ({m}, {b}, {z})",
            topology.m(),
            topology.b(),
            topology.z()
        )));
    }
    let report = topology.validate();
    if !report.pass {
        let first = [&report.c1, &report.c2, &report.c3]
            .into_iter()
            .flat_map(|c| c.violations.first())
            .next()
            .cloned()
            .unwrap_or_default();
        return Err(MaccError::ConditionViolated(first));
    }
    let index = PointIndex::new(design)?;

    let mut rng = match choice {
        BlockChoice::Deterministic => None,
        BlockChoice::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut cache_blocks = Vec::with_capacity(m * b);
    for _group in 1..=m {
        for j in 1..=b {
            let cell = cache_cell(j, b, z)?;
            let range = cell_range(cell, b, z)?;
            let cap = params.cap(cell);
            let size = range.end() - range.start() + 1;
            if cap == 0 || cap > size {
                return Err(MaccError::Internal(format!(
                    "cache position {j} needs {cap} blocks from a cell of {size}"
                )));
            }
            let others: Vec<usize> = range.filter(|&l| l != j).collect();
            let mut blocks: Vec<usize> = match rng.as_mut() {
                None => others.into_iter().take(cap - 1).collect(),
                Some(rng) => others.choose_multiple(rng, cap - 1).copied().collect(),
            };
            blocks.push(j);
            blocks.sort_unstable();
            cache_blocks.push(blocks);
        }
    }

    let mut user_blocks = Vec::with_capacity(m * b);
    let mut known = Vec::with_capacity(m * b);
    for user in topology.users() {
        let mut mask = vec![false; b];
        for cache in topology.access(user) {
            for &l in &cache_blocks[cache.global_id(b) - 1] {
                mask[l - 1] = true;
            }
        }
        user_blocks.push((1..=b).filter(|&l| mask[l - 1]).collect());
        known.push(mask);
    }

    Ok(Placement {
        params: *params,
        mu: design.mu(),
        cache_blocks,
        user_blocks,
        known,
        index,
    })
}

impl Placement {
    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// `B_c(i, j)` as block positions within class `P_i`.
    pub fn cache_blocks(&self, cache: CacheRef) -> &[usize] {
        &self.cache_blocks[cache.global_id(self.params.b) - 1]
    }

    /// `B_k(i, j)`: the union of `B_c` over the caches the user reads.
    pub fn user_blocks(&self, user: UserRef) -> &[usize] {
        &self.user_blocks[user.global_id(self.params.b) - 1]
    }

    /// Whether the user's caches hold subfile `point` (of every file).
    pub fn knows(&self, user: UserRef, point: u32) -> bool {
        let block = self.index.block_of(point, user.group);
        self.known[user.global_id(self.params.b) - 1][block - 1]
    }

    /// Subfile indices of any single file available to the user from cache.
    pub fn cached_subfiles(&self, user: UserRef) -> Vec<u32> {
        let total = self.params.subpacketization * self.mu;
        (1..=total as u32).filter(|&p| self.knows(user, p)).collect()
    }

    /// Subfiles (over all `N` files) stored in one cache.
    pub fn stored_subfiles(&self, cache: CacheRef) -> usize {
        let per_block = self.mu * self.params.subpacketization / self.params.b;
        self.cache_blocks(cache).len() * per_block * self.params.n_files
    }

    pub(crate) fn block_known(&self, user: UserRef, block: usize) -> bool {
        self.known[user.global_id(self.params.b) - 1][block - 1]
    }
}
