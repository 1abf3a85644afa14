use num_rational::Ratio;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::delivery::{delivery, lone_unknown, Transmission};
use super::params::{achievable_rate, SchemeParams};
use super::placement::{place, BlockChoice, Placement};
use super::ratio_json;
use crate::design::Design;
use crate::error::Result;
use crate::topology::{MatchingAssignment, Topology, UserRef};

pub const DEFAULT_PAYLOAD_SIZE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PayloadMode {
    /// Symbolic run only.
    #[default]
    None,
    /// Fill subfiles with seeded pseudo-random bytes and XOR them for real.
    Seeded { seed: u64, size: usize },
}

/// Content of subfile `subfile` of file `file`. Every subfile owns its own
/// slice of a ChaCha8 keystream, so any one can be produced on its own.
pub fn subfile_bytes(seed: u64, file: usize, subfile: u32, size: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(file as u64);
    rng.set_word_pos(u128::from(subfile - 1) * size.div_ceil(4) as u128);
    let mut out = vec![0u8; size];
    rng.fill_bytes(&mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserOutcome {
    pub user: usize,
    pub demand: usize,
    /// Subfiles of the demanded file already in the user's caches.
    pub cached: usize,
    /// Subfiles recovered from the broadcast and not cached.
    pub recovered: usize,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ByteCheck {
    pub seed: u64,
    pub size: usize,
    /// Subfiles recovered by XOR-ing out cached bytes.
    pub decoded: u64,
    /// Recovered subfiles whose bytes differ from the source.
    pub mismatches: u64,
    /// Byte-level and symbolic decoding recover the same subfiles for every
    /// user.
    pub agrees_with_symbolic: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub m: usize,
    pub b: usize,
    pub z: usize,
    pub t: usize,
    pub n_files: usize,
    pub t_prime: usize,
    pub t_z: usize,
    pub subpacketization: u64,
    pub transmissions: u64,
    #[serde(with = "ratio_json")]
    pub rate: Ratio<u64>,
    #[serde(with = "ratio_json")]
    pub expected_rate: Ratio<u64>,
    pub rate_matches: bool,
    pub users: Vec<UserOutcome>,
    pub all_complete: bool,
    /// For each transmission, how many of its addressees can decode their
    /// summand from it.
    pub beneficiaries: Vec<u32>,
    /// `Some(g)` when every transmission helps exactly `g` users.
    pub coding_gain: Option<u32>,
    pub byte_check: Option<ByteCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub report: SimulationReport,
    pub transmissions: Vec<Transmission>,
}

/// Deterministic placement and the topology's own matchings.
pub fn simulate(
    design: &Design,
    topology: &Topology,
    params: &SchemeParams,
    demands: &[usize],
    payload: PayloadMode,
) -> Result<Simulation> {
    simulate_with(
        design,
        topology,
        params,
        demands,
        payload,
        BlockChoice::Deterministic,
        None,
    )
}

pub fn simulate_with(
    design: &Design,
    topology: &Topology,
    params: &SchemeParams,
    demands: &[usize],
    payload: PayloadMode,
    choice: BlockChoice,
    matchings: Option<&MatchingAssignment>,
) -> Result<Simulation> {
    let placement = place(design, topology, params, choice)?;
    let extracted;
    let matchings = match matchings {
        Some(f) => f,
        None => {
            extracted = topology.extract_matchings()?;
            &extracted
        }
    };
    let mut transmissions = delivery(&placement, matchings, demands)?;
    if let PayloadMode::Seeded { seed, size } = payload {
        for tx in &mut transmissions {
            let mut acc = vec![0u8; size];
            for s in &tx.summands {
                xor_into(&mut acc, &subfile_bytes(seed, s.file, s.subfile, size));
            }
            tx.payload = Some(acc);
        }
    }

    let f = params.subpacketization;
    let mut users = Vec::with_capacity(params.num_users());
    let mut symbolic = Vec::with_capacity(params.num_users());
    for user in topology.users() {
        let want = demands[user.global_id(params.b) - 1];
        let mut got = vec![false; f + 1];
        for tx in &transmissions {
            if let Some(s) = lone_unknown(&placement, user, tx) {
                if s.file == want {
                    got[s.subfile as usize] = true;
                }
            }
        }
        let cached = (1..=f as u32).filter(|&p| placement.knows(user, p)).count();
        let recovered = (1..=f).filter(|&p| got[p]).count();
        let complete = (1..=f as u32).all(|p| got[p as usize] || placement.knows(user, p));
        users.push(UserOutcome {
            user: user.global_id(params.b),
            demand: want,
            cached,
            recovered,
            complete,
        });
        symbolic.push(got);
    }

    let beneficiaries: Vec<u32> = transmissions
        .iter()
        .map(|tx| {
            tx.summands
                .iter()
                .filter(|s| {
                    let user = UserRef::from_global(s.user, params.b);
                    lone_unknown(&placement, user, tx).is_some_and(|hit| std::ptr::eq(hit, *s))
                        && demands[s.user - 1] == s.file
                })
                .count() as u32
        })
        .collect();
    let coding_gain = match beneficiaries.split_first() {
        Some((&first, rest)) if rest.iter().all(|&x| x == first) => Some(first),
        _ => None,
    };

    let byte_check = match payload {
        PayloadMode::None => None,
        PayloadMode::Seeded { seed, size } => Some(byte_decode(
            design,
            topology,
            &placement,
            demands,
            &transmissions,
            &symbolic,
            seed,
            size,
        )),
    };

    let count = transmissions.len() as u64;
    let rate = Ratio::new(count, f as u64);
    let expected_rate = achievable_rate(params.b, params.m, params.z, params.t)?;
    let rate_matches = rate == expected_rate;
    let all_complete = users.iter().all(|u| u.complete);
    let gain_ok = transmissions.is_empty() || coding_gain == Some(params.m as u32);
    let pass = rate_matches
        && all_complete
        && gain_ok
        && byte_check.as_ref().map_or(true, |c| c.pass);

    Ok(Simulation {
        report: SimulationReport {
            m: params.m,
            b: params.b,
            z: params.z,
            t: params.t,
            n_files: params.n_files,
            t_prime: params.t_prime,
            t_z: params.t_z,
            subpacketization: f as u64,
            transmissions: count,
            rate,
            expected_rate,
            rate_matches,
            users,
            all_complete,
            beneficiaries,
            coding_gain,
            byte_check,
            pass,
        },
        transmissions,
    })
}

fn xor_into(acc: &mut [u8], other: &[u8]) {
    for (a, o) in acc.iter_mut().zip(other) {
        *a ^= o;
    }
}

/// Decodes payloads from cache contents rebuilt straight from the topology
/// and the design's block lists, then compares with the symbolic result.
#[allow(clippy::too_many_arguments)]
fn byte_decode(
    design: &Design,
    topology: &Topology,
    placement: &Placement,
    demands: &[usize],
    transmissions: &[Transmission],
    symbolic: &[Vec<bool>],
    seed: u64,
    size: usize,
) -> ByteCheck {
    let b = design.b();
    let points = design.num_points();
    let mut decoded = 0u64;
    let mut mismatches = 0u64;
    let mut agrees = true;
    for (u, user) in topology.users().enumerate() {
        let mut has = vec![false; points + 1];
        for cache in topology.access(user) {
            for &l in placement.cache_blocks(*cache) {
                for &p in design.block(cache.group, l) {
                    has[p as usize] = true;
                }
            }
        }
        let want = demands[user.global_id(b) - 1];
        let mut got = vec![false; points + 1];
        for tx in transmissions {
            let Some(payload) = tx.payload.as_ref() else {
                continue;
            };
            let mut missing = tx.summands.iter().filter(|s| !has[s.subfile as usize]);
            let (Some(target), None) = (missing.next(), missing.next()) else {
                continue;
            };
            if target.file != want {
                continue;
            }
            let mut bytes = payload.clone();
            for s in tx.summands.iter().filter(|s| has[s.subfile as usize]) {
                xor_into(&mut bytes, &subfile_bytes(seed, s.file, s.subfile, size));
            }
            decoded += 1;
            if bytes == subfile_bytes(seed, want, target.subfile, size) {
                got[target.subfile as usize] = true;
            } else {
                mismatches += 1;
            }
        }
        agrees &= got == symbolic[u];
    }
    ByteCheck {
        seed,
        size,
        decoded,
        mismatches,
        agrees_with_symbolic: agrees,
        pass: mismatches == 0 && agrees,
    }
}
