use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{MaccError, Result};

/// Per-cell block caps `(t', t_z)` for memory parameter `t`.
///
/// * `t <= floor(b/z)`: both equal `t`;
/// * `floor(b/z) < t < b - (z-1) floor(b/z)`: `t' = floor(b/z)`, `t_z = t`;
/// * otherwise both cells are saturated.
pub fn compute_tt(t: usize, b: usize, z: usize) -> Result<(usize, usize)> {
    if t == 0 {
        return Err(MaccError::arg("t must be positive"));
    }
    if b == 0 || z == 0 || z > b {
        return Err(MaccError::arg(format!("need 1 <= z <= b (got b={b}, z={z})")));
    }
    let width = b / z;
    let last = b - (z - 1) * width;
    Ok(if t <= width {
        (t, t)
    } else if t < last {
        (width, t)
    } else {
        (width, last)
    })
}

/// Delivery load `b - t'(z-1) - t_z` in files.
pub fn achievable_rate(b: usize, m: usize, z: usize, t: usize) -> Result<Ratio<u64>> {
    if m == 0 {
        return Err(MaccError::arg("m must be positive"));
    }
    let (tp, tz) = compute_tt(t, b, z)?;
    Ok(Ratio::from_integer((b - tp * (z - 1) - tz) as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub m: usize,
    pub b: usize,
    pub z: usize,
    /// Memory parameter: `M = t N / b`.
    pub t: usize,
    pub n_files: usize,
    pub t_prime: usize,
    pub t_z: usize,
    /// `F = b^m`.
    pub subpacketization: usize,
}

impl SchemeParams {
    pub fn new(m: usize, b: usize, z: usize, t: usize, n_files: usize) -> Result<Self> {
        if m == 0 || n_files == 0 {
            return Err(MaccError::arg("m and N must be positive"));
        }
        let (t_prime, t_z) = compute_tt(t, b, z)?;
        if t > b {
            return Err(MaccError::arg(format!("M/N = {t}/{b} exceeds 1")));
        }
        let subpacketization = u32::try_from(m)
            .ok()
            .and_then(|e| b.checked_pow(e))
            .ok_or_else(|| MaccError::arg(format!("b^m overflows for b={b}, m={m}")))?;
        Ok(SchemeParams {
            m,
            b,
            z,
            t,
            n_files,
            t_prime,
            t_z,
            subpacketization,
        })
    }

    pub fn num_users(&self) -> usize {
        self.m * self.b
    }

    /// Transmissions per subfile index: `b - t'(z-1) - t_z`.
    pub fn rate_per_coordinate(&self) -> usize {
        self.b - self.t_prime * (self.z - 1) - self.t_z
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::from_integer(self.rate_per_coordinate() as u64)
    }

    /// Normalised memory `M / N = t / b`.
    pub fn memory_fraction(&self) -> Ratio<u64> {
        Ratio::new(self.t as u64, self.b as u64)
    }

    /// Number of blocks `B_c(i, j)` must hold for a cache in cell `cell`.
    pub fn cap(&self, cell: usize) -> usize {
        if cell == self.z {
            self.t_z
        } else {
            self.t_prime
        }
    }
}
