use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::rates::{our_subpacketization, rival_curve, rival_rate, rival_subpacketization, Subpacketization};
use super::{fraction_string, int, ratio, SchemeId};
use crate::engine::achievable_rate;
use crate::error::{MaccError, Result};

/// Outcome of one comparison lemma at one parameter point.
///
/// `confirmed` is filled whenever the hypothesis holds: it records whether
/// the direct evaluation of both schemes agrees with the lemma's claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub lemma: String,
    pub applicable: bool,
    pub satisfied: bool,
    pub ours: Option<String>,
    pub rival: Option<String>,
    pub confirmed: Option<bool>,
    pub note: String,
}

impl LemmaCheck {
    fn skip(lemma: &str, note: impl Into<String>) -> Self {
        LemmaCheck {
            lemma: lemma.into(),
            applicable: false,
            satisfied: false,
            ours: None,
            rival: None,
            confirmed: None,
            note: note.into(),
        }
    }

    /// Did the lemma either not fire or fire and hold up?
    pub fn consistent(&self) -> bool {
        self.confirmed != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub rk: LemmaCheck,
    pub sicps: LemmaCheck,
    pub sr2: LemmaCheck,
    pub mr: LemmaCheck,
}

impl LemmaReport {
    pub fn all(&self) -> [&LemmaCheck; 4] {
        [&self.rk, &self.sicps, &self.sr2, &self.mr]
    }
}

fn base(k: usize, z: usize, m: usize, b: usize, t: usize) -> Result<()> {
    if m == 0 || b == 0 || t == 0 || z == 0 {
        return Err(MaccError::arg("K, z, m, b, t must be positive"));
    }
    if m * b != k {
        return Err(MaccError::arg(format!("m b = {} != K = {k}", m * b)));
    }
    if z > b {
        return Err(MaccError::arg(format!("z = {z} exceeds b = {b}")));
    }
    Ok(())
}

fn ours_rate(b: usize, m: usize, z: usize, t: usize) -> Result<BigRational> {
    Ok(int(*achievable_rate(b, m, z, t)?.numer() as i64))
}

/// Evaluates the RK, SICPS/NT subpacketization, SR2 and MR lemmas at
/// `M/N = t / b` for the factorisation `K = m b`.
pub fn lemma_predicates(k: usize, z: usize, m: usize, b: usize, t: usize) -> Result<LemmaReport> {
    base(k, z, m, b, t)?;
    Ok(LemmaReport {
        rk: rk_lemma(k, z, m, b, t)?,
        sicps: sicps_lemma(k, z, m, b, t)?,
        sr2: sr2_lemma(k, z, m, b, t)?,
        mr: mr_lemma(k, z, m, b, t)?,
    })
}

fn rk_lemma(k: usize, z: usize, m: usize, b: usize, t: usize) -> Result<LemmaCheck> {
    let name = "rk-rate";
    let tp = m * t;
    if t > b / z || tp > k / z {
        return Ok(LemmaCheck::skip(name, "needs t <= floor(b/z) and m t <= floor(K/z)"));
    }
    let mem = ratio(t as i64, b as i64);
    let bound = [
        ratio((b / z) as i64, b as i64),
        ratio((k / z) as i64, k as i64),
        ratio(k as i64 - b as i64, (k * z) as i64),
    ]
    .into_iter()
    .min()
    .expect("three bounds");
    let satisfied = mem < bound;
    let ours = ours_rate(b, m, z, t)?;
    let rival = rival_rate(SchemeId::Rk, k, z, tp)?;
    Ok(LemmaCheck {
        lemma: name.into(),
        applicable: true,
        satisfied,
        confirmed: satisfied.then_some(ours < rival),
        ours: Some(fraction_string(&ours)),
        rival: Some(fraction_string(&rival)),
        note: format!("M/N = {} vs bound {}", fraction_string(&mem), fraction_string(&bound)),
    })
}

fn sicps_lemma(k: usize, z: usize, m: usize, b: usize, t: usize) -> Result<LemmaCheck> {
    let name = "sicps-subpacketization";
    if t != 1 || b <= z || m > k / z {
        return Ok(LemmaCheck::skip(name, "needs t = 1, b > z and m <= floor(K/z)"));
    }
    // b >= sqrt(K(z-1)) + 1  <=>  (b-1)^2 >= K(z-1) for b >= 1
    let satisfied = (b - 1) * (b - 1) >= k * (z - 1);
    let ours = our_subpacketization(m, b);
    let exact = |s| match rival_subpacketization(s, k, z, m) {
        Ok(Subpacketization::Exact(n)) => Ok(n),
        Ok(_) => Err(MaccError::Internal("interval subpacketization".into())),
        Err(e) => Err(e),
    };
    let (rk, nt) = match (exact(SchemeId::Sicps), exact(SchemeId::Nt)) {
        (Ok(rk), Ok(nt)) => (rk, nt),
        (Err(e), _) | (_, Err(e)) => return Ok(LemmaCheck::skip(name, e.to_string())),
    };
    Ok(LemmaCheck {
        lemma: name.into(),
        applicable: true,
        satisfied,
        confirmed: satisfied.then_some(ours <= rk && ours <= nt),
        ours: Some(ours.to_string()),
        rival: Some(rk.to_string()),
        note: format!("NT subpacketization {nt}"),
    })
}

fn sr2_lemma(k: usize, z: usize, m: usize, b: usize, t: usize) -> Result<LemmaCheck> {
    let name = "sr2-rate";
    if t > b / z || b % t != 0 || b % (b - t * z + t) != 0 {
        return Ok(LemmaCheck::skip(
            name,
            "needs t <= floor(b/z), t | b and (b - t z + t) | b",
        ));
    }
    // t / b <= (m - 2) / (m (z - 1))
    let satisfied = (t * m * (z - 1)) as i64 <= b as i64 * (m as i64 - 2);
    let ours = ours_rate(b, m, z, t)?;
    let rival = rival_rate(SchemeId::Sr2, k, z, m * t)?;
    Ok(LemmaCheck {
        lemma: name.into(),
        applicable: true,
        satisfied,
        confirmed: satisfied.then_some(ours <= rival),
        ours: Some(fraction_string(&ours)),
        rival: Some(fraction_string(&rival)),
        note: format!("t'' = {}", m * t),
    })
}

fn mr_lemma(k: usize, z: usize, m: usize, b: usize, t: usize) -> Result<LemmaCheck> {
    let name = "mr-rate";
    if t != 1 || m < 3 {
        return Ok(LemmaCheck::skip(name, "needs M/N = 1/b and m >= 3"));
    }
    let mem = ratio(1, b as i64);
    let ours = ours_rate(b, m, z, 1)?;
    let rival = rival_curve(SchemeId::Mr, k, z)?.eval(&mem);
    Ok(LemmaCheck {
        lemma: name.into(),
        applicable: true,
        satisfied: true,
        confirmed: Some(ours <= rival),
        ours: Some(fraction_string(&ours)),
        rival: Some(fraction_string(&rival)),
        note: "rival is the MR curve at M/N = 1/b".into(),
    })
}

/// Lemma comparing with the SR1 rate at `t'' = m1 + lambda (m2 - m1)`.
///
/// `ours` is the value on the chord between our corner points
/// `(1/b1, b1 - z)` and `(1/b2, b2 - z)`, which is what the lemma bounds;
/// the full envelope can only be lower.
pub fn sr1_lemma(k: usize, z: usize, m1: usize, m2: usize, lambda: &BigRational) -> Result<LemmaCheck> {
    let name = "sr1-rate";
    if k == 0 || z == 0 || m1 == 0 || m2 == 0 {
        return Err(MaccError::arg("K, z, m1, m2 must be positive"));
    }
    let zero = int(0);
    let one = int(1);
    if k % m1 != 0 || k % m2 != 0 || m1 >= m2 {
        return Ok(LemmaCheck::skip(name, "needs m1 | K, m2 | K and m1 < m2"));
    }
    let (b1, b2) = (k / m1, k / m2);
    if b1 < z || b2 < z {
        return Ok(LemmaCheck::skip(name, "needs b1, b2 >= z"));
    }
    if lambda < &zero || lambda > &one {
        return Ok(LemmaCheck::skip(name, "needs 0 <= lambda <= 1"));
    }
    let t2 = int(m1 as i64) + lambda * int(m2 as i64 - m1 as i64);
    if !t2.is_integer() {
        return Ok(LemmaCheck::skip(name, format!("t'' = {} is not an integer", fraction_string(&t2))));
    }
    let t2: usize = t2
        .to_integer()
        .try_into()
        .map_err(|_| MaccError::arg("t'' out of range"))?;
    if t2 * z + 1 == k {
        return Ok(LemmaCheck::skip(name, "needs t'' != (K - 1)/z"));
    }
    if t2.gcd(&k) != 1 {
        return Ok(LemmaCheck::skip(name, format!("gcd({t2}, {k}) != 1")));
    }
    let kt = k as i64 - (t2 * z) as i64;
    let lower = ratio(kt * (kt + 2), k as i64 + 2);
    let lhs = int(b1 as i64) + lambda * int(b2 as i64 - b1 as i64);
    let satisfied = lhs <= &lower + int(z as i64);
    let chord = &lhs - int(z as i64);
    let sr1 = rival_rate(SchemeId::Sr1, k, z, t2)?;
    let mem = BigRational::new(BigInt::from(t2), BigInt::from(k));
    let env = rival_curve(SchemeId::Ours, k, z)?.eval(&mem);
    Ok(LemmaCheck {
        lemma: name.into(),
        applicable: true,
        satisfied,
        confirmed: satisfied.then_some(chord <= sr1 && env <= chord),
        ours: Some(fraction_string(&chord)),
        rival: Some(fraction_string(&sr1)),
        note: format!(
            "t'' = {t2}; envelope {}; SR1 lower bound {}",
            fraction_string(&env),
            fraction_string(&lower)
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sr2_example() {
        let r = lemma_predicates(120, 5, 5, 24, 3).unwrap();
        assert!(r.sr2.applicable && r.sr2.satisfied);
        assert_eq!(r.sr2.ours.as_deref(), Some("9"));
        assert_eq!(r.sr2.rival.as_deref(), Some("45/4"));
        assert_eq!(r.sr2.confirmed, Some(true));
    }

    #[test]
    fn mr_needs_three_groups() {
        let r = lemma_predicates(100, 5, 2, 50, 1).unwrap();
        assert!(!r.mr.applicable);
        let r = lemma_predicates(100, 5, 4, 25, 1).unwrap();
        assert_eq!(r.mr.confirmed, Some(true));
    }

    #[test]
    fn rk_example() {
        let r = lemma_predicates(100, 5, 2, 50, 1).unwrap();
        assert!(r.rk.satisfied);
        assert_eq!(r.rk.ours.as_deref(), Some("45"));
        assert_eq!(r.rk.rival.as_deref(), Some("81"));
        assert_eq!(r.rk.confirmed, Some(true));
    }

    #[test]
    fn sr1_example() {
        let c = sr1_lemma(100, 5, 4, 10, &ratio(1, 2)).unwrap();
        assert!(c.applicable && c.satisfied);
        assert_eq!(c.ours.as_deref(), Some("25/2"));
        assert_eq!(c.rival.as_deref(), Some("32"));
        assert_eq!(c.confirmed, Some(true));
    }

    #[test]
    fn bad_shape() {
        assert!(lemma_predicates(100, 5, 3, 33, 1).is_err());
    }
}
