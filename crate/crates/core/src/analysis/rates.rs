use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::curve::{envelope, Curve};
use super::{int, ratio, Provenance, RatePoint, SchemeId};
use crate::engine::achievable_rate;
use crate::error::{MaccError, Result};

fn check_kz(k: usize, z: usize) -> Result<()> {
    if k == 0 || z == 0 || z > k {
        return Err(MaccError::arg(format!("need 1 <= z <= K (got K={k}, z={z})")));
    }
    Ok(())
}

fn not_applicable(scheme: SchemeId, why: impl std::fmt::Display) -> MaccError {
    MaccError::NotApplicable(format!("{scheme}: {why}"))
}

/// Every corner point of our scheme for `K` users: `(0, K)` and, for each
/// factorisation `K = m b` with `b >= z`, the points `(t / b, R(t))` for `t`
/// up to the first value with zero rate.
pub fn our_corner_points(k: usize, z: usize) -> Result<Vec<RatePoint>> {
    check_kz(k, z)?;
    let mut out = vec![RatePoint::new(
        int(0),
        int(k as i64),
        Provenance::trivial(SchemeId::Ours),
    )];
    for b in (z..=k).filter(|b| k % b == 0) {
        let m = k / b;
        let last = b - (z - 1) * (b / z);
        for t in 1..=last {
            let r = achievable_rate(b, m, z, t)?;
            out.push(RatePoint::new(
                ratio(t as i64, b as i64),
                int(*r.numer() as i64),
                Provenance {
                    scheme: SchemeId::Ours,
                    m: Some(m),
                    b: Some(b),
                    t: Some(t),
                },
            ));
        }
    }
    Ok(out)
}

pub fn our_subpacketization(m: usize, b: usize) -> BigUint {
    num_traits::pow(BigUint::from(b), m)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

fn sr1_rate(k: i64, z: i64, t: i64) -> BigRational {
    let kt = k - t * z;
    if kt <= 0 {
        return BigRational::zero();
    }
    let tz = t * z;
    let term = |r: i64| ratio(2, 1 + ceil_div(tz, r));
    if kt % 2 == 0 {
        ((kt + 2) / 2..=kt).map(term).sum()
    } else {
        let head = ratio(1, 1 + ceil_div(2 * tz, kt + 1));
        head + ((kt + 3) / 2..=kt).map(term).sum::<BigRational>()
    }
}

fn check_t_prime(scheme: SchemeId, k: usize, z: usize, t: usize) -> Result<()> {
    if t == 0 || t > k / z {
        return Err(not_applicable(
            scheme,
            format!("t' = {t} outside 1..={}", k / z),
        ));
    }
    Ok(())
}

fn check_sr1(k: usize, t: usize) -> Result<()> {
    if t == 0 || t > k {
        return Err(not_applicable(SchemeId::Sr1, format!("t'' = {t} outside 1..={k}")));
    }
    if t.gcd(&k) != 1 {
        return Err(not_applicable(
            SchemeId::Sr1,
            format!("gcd(t'', K) = gcd({t}, {k}) != 1"),
        ));
    }
    Ok(())
}

fn check_sr2(k: usize, z: usize, t: usize) -> Result<()> {
    if t == 0 || t * z > k {
        return Err(not_applicable(
            SchemeId::Sr2,
            format!("t'' = {t} needs 1 <= t'' and t'' z <= K"),
        ));
    }
    if k % t != 0 {
        return Err(not_applicable(SchemeId::Sr2, format!("t'' = {t} does not divide K = {k}")));
    }
    let d = k - t * z + t;
    if k % d != 0 {
        return Err(not_applicable(
            SchemeId::Sr2,
            format!("K - t'' z + t'' = {d} does not divide K = {k}"),
        ));
    }
    Ok(())
}

/// Rate of a rival scheme at its integer memory parameter.
///
/// `t` is `t'` (memory `t'/K`) for RK and NT, `t''` for SR1 and SR2, and
/// must be `1` for MR whose only point is `M/N = 1/K`.
pub fn rival_rate(scheme: SchemeId, k: usize, z: usize, t: usize) -> Result<BigRational> {
    check_kz(k, z)?;
    let (ki, zi, ti) = (k as i64, z as i64, t as i64);
    match scheme {
        SchemeId::Ours => Err(MaccError::arg("use achievable_rate for our scheme")),
        SchemeId::Spe | SchemeId::Sicps => {
            Err(not_applicable(scheme, "rate formula is not closed-form"))
        }
        SchemeId::Rk => {
            check_t_prime(scheme, k, z, t)?;
            Ok(ratio((ki - ti * zi).pow(2), ki))
        }
        SchemeId::Nt => {
            check_t_prime(scheme, k, z, t)?;
            Ok(ratio(ki - ti * zi, ti + 1))
        }
        SchemeId::Sr1 => {
            check_sr1(k, t)?;
            Ok(sr1_rate(ki, zi, ti))
        }
        SchemeId::Sr2 => {
            check_sr2(k, z, t)?;
            let kt = ki - ti * zi;
            Ok(ratio(kt * (kt + ti), 2 * ki))
        }
        SchemeId::Mr => {
            if t != 1 {
                return Err(not_applicable(scheme, "defined only at M/N = 1/K (t = 1)"));
            }
            let d = ki - zi + 1;
            let denom = 2 + zi / d + (zi - 1) / d;
            Ok(ratio(ceil_div(ki * (ki - zi), denom), ki))
        }
    }
}

/// Subpacketization of a rival scheme; SR1 is only known up to an interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subpacketization {
    Exact(BigUint),
    Interval { lo: BigUint, hi: BigUint },
}

fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// `t` follows [`rival_rate`]; SPE takes `t = 2` (its point is `M/N = 2/K`).
pub fn rival_subpacketization(
    scheme: SchemeId,
    k: usize,
    z: usize,
    t: usize,
) -> Result<Subpacketization> {
    check_kz(k, z)?;
    let kb = BigUint::from(k);
    let exact = |n: BigUint| Ok(Subpacketization::Exact(n));
    match scheme {
        SchemeId::Ours => Err(MaccError::arg("use our_subpacketization for our scheme")),
        SchemeId::Spe => {
            if t != 2 {
                return Err(not_applicable(scheme, "defined only at M/N = 2/K (t = 2)"));
            }
            if k + 2 <= 2 * z {
                return Err(not_applicable(scheme, "K - 2z + 2 must be positive"));
            }
            let n = k * (k - 2 * z + 2);
            if n % 4 != 0 {
                return Err(not_applicable(scheme, format!("K(K-2z+2)/4 = {n}/4 is not an integer")));
            }
            exact(BigUint::from(n / 4))
        }
        SchemeId::Rk | SchemeId::Sicps => {
            check_t_prime(scheme, k, z, t)?;
            let n = kb * binomial(k - t * z + t - 1, t - 1);
            let (q, r) = n.div_rem(&BigUint::from(t));
            if !r.is_zero() {
                return Err(not_applicable(scheme, format!("(K/t') C(..) is not an integer at t' = {t}")));
            }
            exact(q)
        }
        SchemeId::Nt => {
            check_t_prime(scheme, k, z, t)?;
            exact(kb * binomial(k - t * z + t, t))
        }
        SchemeId::Sr1 => {
            check_sr1(k, t)?;
            Ok(Subpacketization::Interval {
                lo: kb.clone(),
                hi: &kb * &kb,
            })
        }
        SchemeId::Sr2 => {
            check_sr2(k, z, t)?;
            exact(kb)
        }
        SchemeId::Mr => {
            if t != 1 {
                return Err(not_applicable(scheme, "defined only at M/N = 1/K (t = 1)"));
            }
            exact(kb)
        }
    }
}

pub fn log10_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map_or(f64::NAN, f64::log10);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::NAN);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

/// Achievable curve of a scheme for `K` users.
///
/// Ours is the lower convex envelope of its corner points. A rival is the
/// polyline from `(0, K)` through its applicable points to the trivial zero
/// point `(ceil(K/z)/K, 0)`.
pub fn rival_curve(scheme: SchemeId, k: usize, z: usize) -> Result<Curve> {
    check_kz(k, z)?;
    if scheme == SchemeId::Ours {
        return envelope(&our_corner_points(k, z)?);
    }
    if matches!(scheme, SchemeId::Spe | SchemeId::Sicps) {
        return Err(not_applicable(scheme, "rate formula is not closed-form"));
    }
    let zero_at = k.div_ceil(z);
    let mut points = vec![RatePoint::new(int(0), int(k as i64), Provenance::trivial(scheme))];
    let params: Vec<usize> = match scheme {
        SchemeId::Mr => vec![1],
        _ => (1..zero_at).collect(),
    };
    for t in params.into_iter().filter(|&t| t < zero_at) {
        if let Ok(rate) = rival_rate(scheme, k, z, t) {
            points.push(RatePoint::new(
                ratio(t as i64, k as i64),
                rate,
                Provenance {
                    scheme,
                    m: None,
                    b: None,
                    t: Some(t),
                },
            ));
        }
    }
    points.push(RatePoint::new(
        BigRational::new(BigInt::from(zero_at), BigInt::from(k)),
        int(0),
        Provenance::trivial(scheme),
    ));
    Curve::polyline(&points)
}
