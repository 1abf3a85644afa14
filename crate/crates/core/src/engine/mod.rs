//! Placement, XOR delivery and decoding.
//!
//! Files are split into `F = b^m` subfiles indexed by the points of an MCRD
//! with `mu = 1`. Cache `c(i, j)` stores, for every file, the subfiles whose
//! points lie in the blocks `B_c(i, j)` drawn from class `P_i`. During
//! delivery each transmission XORs one subfile per group and helps exactly
//! one user per group.

mod delivery;
mod params;
mod placement;
mod simulate;

pub use delivery::{decode, delivery, DemandGraph, Summand, Transmission};
pub use params::{achievable_rate, compute_tt, SchemeParams};
pub use placement::{place, BlockChoice, Placement};
pub use simulate::{
    simulate, simulate_with, subfile_bytes, ByteCheck, PayloadMode, Simulation, SimulationReport,
    UserOutcome, DEFAULT_PAYLOAD_SIZE,
};

pub(crate) mod ratio_json {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Frac {
        num: u64,
        den: u64,
    }

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        Frac {
            num: *r.numer(),
            den: *r.denom(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let f = Frac::deserialize(d)?;
        if f.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Ratio::new(f.num, f.den))
    }
}
