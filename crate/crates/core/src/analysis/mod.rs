//! Rate and subpacketization comparisons.
//!
//! Every rate and memory value is an exact [`BigRational`]. Curves are
//! either the lower convex envelope of a point cloud (our scheme, where
//! memory sharing between corner points is available) or the polyline
//! through a rival's achievable points.

mod curve;
mod lemmas;
mod rates;
mod table;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use curve::{envelope, Curve};
pub use lemmas::{lemma_predicates, sr1_lemma, LemmaCheck, LemmaReport};
pub use rates::{
    log10_big, our_corner_points, our_subpacketization, rival_curve, rival_rate,
    rival_subpacketization, Subpacketization,
};
pub use table::{comparison_table, default_grid, format_decimal, parse_fraction, ComparisonRow, ComparisonTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    Ours,
    Spe,
    Rk,
    Nt,
    Sicps,
    Sr1,
    Sr2,
    Mr,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::Ours,
        SchemeId::Spe,
        SchemeId::Rk,
        SchemeId::Nt,
        SchemeId::Sicps,
        SchemeId::Sr1,
        SchemeId::Sr2,
        SchemeId::Mr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Ours => "ours",
            SchemeId::Spe => "spe",
            SchemeId::Rk => "rk",
            SchemeId::Nt => "nt",
            SchemeId::Sicps => "sicps",
            SchemeId::Sr1 => "sr1",
            SchemeId::Sr2 => "sr2",
            SchemeId::Mr => "mr",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a point came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub scheme: SchemeId,
    /// `(m, b)` for our scheme.
    pub m: Option<usize>,
    pub b: Option<usize>,
    /// `t` for our scheme, `t'` or `t''` for rivals.
    pub t: Option<usize>,
}

impl Provenance {
    pub fn trivial(scheme: SchemeId) -> Self {
        Provenance {
            scheme,
            m: None,
            b: None,
            t: None,
        }
    }
}

/// An achievable `(M/N, R)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatePoint {
    pub memory: BigRational,
    pub rate: BigRational,
    pub provenance: Provenance,
}

impl RatePoint {
    pub fn new(memory: BigRational, rate: BigRational, provenance: Provenance) -> Self {
        RatePoint {
            memory,
            rate,
            provenance,
        }
    }
}

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `"p/q"`, or `"p"` for integers.
pub fn fraction_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
