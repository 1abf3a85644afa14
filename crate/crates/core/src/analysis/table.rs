use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::curve::Curve;
use super::rates::{
    log10_big, our_corner_points, our_subpacketization, rival_curve, rival_subpacketization,
    Subpacketization,
};
use super::{fraction_string, int, SchemeId};
use crate::error::{MaccError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub memory: BigRational,
    pub scheme: SchemeId,
    /// `None` where the scheme has no closed-form rate at this memory.
    pub rate: Option<BigRational>,
    pub subpacketization: Option<Subpacketization>,
}

impl ComparisonRow {
    pub fn log10_subpacketization(&self) -> Option<f64> {
        match &self.subpacketization {
            Some(Subpacketization::Exact(n)) => Some(log10_big(n)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub k: usize,
    pub z: usize,
    pub rows: Vec<ComparisonRow>,
}

/// `{ j / K : 0 <= j <= ceil(K/z) }`.
pub fn default_grid(k: usize, z: usize) -> Result<Vec<BigRational>> {
    if k == 0 || z == 0 || z > k {
        return Err(MaccError::arg(format!("need 1 <= z <= K (got K={k}, z={z})")));
    }
    Ok((0..=k.div_ceil(z))
        .map(|j| BigRational::new(BigInt::from(j), BigInt::from(k)))
        .collect())
}

/// Parses `"p/q"`, `"0.16"` or `"3"` into an exact rational.
pub fn parse_fraction(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || MaccError::arg(format!("cannot parse {text:?} as a fraction"));
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !digits(whole) || !digits(frac) || (whole.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let n: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, den))
}

/// Decimal with `places` digits after the point, rounded half away from
/// zero.
pub fn format_decimal(r: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let num: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let scaled = num.div_floor(&(r.denom() * 2));
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let sign = if r.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
}

fn rival_param(memory: &BigRational, k: usize) -> Option<usize> {
    let scaled = memory * int(k as i64);
    scaled
        .is_integer()
        .then(|| scaled.to_integer())
        .and_then(|n| usize::try_from(n).ok())
}

/// Smallest `b^m` among our corner points sitting on the envelope at this
/// memory.
fn our_subpacketization_at(
    memory: &BigRational,
    envelope: &Curve,
    corners: &[super::RatePoint],
) -> Option<BigUint> {
    let rate = envelope.eval(memory);
    corners
        .iter()
        .filter(|p| &p.memory == memory && p.rate == rate)
        .filter_map(|p| Some(our_subpacketization(p.provenance.m?, p.provenance.b?)))
        .min()
}

/// One row per grid point and scheme, schemes in [`SchemeId::ALL`] order.
pub fn comparison_table(k: usize, z: usize, grid: &[BigRational]) -> Result<ComparisonTable> {
    let corners = our_corner_points(k, z)?;
    let curves: Vec<(SchemeId, Option<Curve>)> = SchemeId::ALL
        .iter()
        .map(|&s| Ok((s, rival_curve(s, k, z).ok())))
        .collect::<Result<_>>()?;
    let ours = curves[0].1.clone().expect("our curve always exists");

    let mut rows = Vec::with_capacity(grid.len() * curves.len());
    for memory in grid {
        if memory.is_negative() || memory > &int(1) {
            return Err(MaccError::arg(format!(
                "M/N = {} outside [0, 1]",
                fraction_string(memory)
            )));
        }
        for (scheme, curve) in &curves {
            let rate = match curve {
                Some(c) => Some(c.eval(memory)),
                None if memory.is_zero() => Some(int(k as i64)),
                None => None,
            };
            let subpacketization = match scheme {
                SchemeId::Ours => our_subpacketization_at(memory, &ours, &corners).map(Subpacketization::Exact),
                _ => rival_param(memory, k)
                    .filter(|&t| t > 0)
                    .and_then(|t| rival_subpacketization(*scheme, k, z, t).ok()),
            };
            rows.push(ComparisonRow {
                memory: memory.clone(),
                scheme: *scheme,
                rate,
                subpacketization,
            });
        }
    }
    Ok(ComparisonTable { k, z, rows })
}

impl ComparisonTable {
    pub const CSV_HEADER: &'static str = "mn_num,mn_den,scheme,rate,log10_subpacketization";

    pub fn rows_for(&self, scheme: SchemeId) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(move |r| r.scheme == scheme)
    }

    pub fn rate_at(&self, scheme: SchemeId, memory: &BigRational) -> Option<&BigRational> {
        self.rows_for(scheme)
            .find(|r| &r.memory == memory)
            .and_then(|r| r.rate.as_ref())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let rate = r.rate.as_ref().map(|x| format_decimal(x, 6)).unwrap_or_default();
            let log = r
                .log10_subpacketization()
                .map(|x| format!("{x:.6}"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.memory.numer(),
                r.memory.denom(),
                r.scheme,
                rate,
                log
            );
        }
        out
    }

    /// Exact mirror of the CSV: rationals as `"p/q"` strings, big integers
    /// as decimal strings.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let sub = match &r.subpacketization {
                    None => Value::Null,
                    Some(Subpacketization::Exact(n)) => json!(n.to_string()),
                    Some(Subpacketization::Interval { lo, hi }) => {
                        json!({ "lo": lo.to_string(), "hi": hi.to_string() })
                    }
                };
                json!({
                    "mn": fraction_string(&r.memory),
                    "scheme": r.scheme.name(),
                    "rate": r.rate.as_ref().map(fraction_string),
                    "subpacketization": sub,
                    "log10_subpacketization": r.log10_subpacketization(),
                })
            })
            .collect();
        json!({ "K": self.k, "z": self.z, "rows": rows })
    }
}
