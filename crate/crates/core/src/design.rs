//! Maximal cross resolvable designs.
//!
//! A design here is a point set `{1, .., mu * b^m}` together with `m`
//! parallel classes of `b` blocks each. It is an MCRD when every choice of
//! one block per class intersects in exactly `mu` points.
//!
//! [`Design::construct`] lists every length-`m` vector over the residues
//! mod `b` as the columns of an `m x b^m` matrix (each vector repeated `mu`
//! times, lexicographic order, row 1 most significant) and takes
//! `B(i, l + 1)` to be the set of column indices whose row-`i` entry is `l`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{MaccError, Result};

/// Largest point set [`Design::construct`] will materialise by default.
pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DesignJson", into = "DesignJson")]
pub struct Design {
    m: usize,
    b: usize,
    mu: usize,
    num_points: usize,
    // classes[i][j] holds the sorted points of B(i + 1, j + 1).
    classes: Vec<Vec<Vec<u32>>>,
}

#[derive(Serialize, Deserialize)]
struct DesignJson {
    m: usize,
    b: usize,
    mu: usize,
    blocks: Vec<Vec<Vec<u32>>>,
}

impl TryFrom<DesignJson> for Design {
    type Error = MaccError;

    fn try_from(raw: DesignJson) -> Result<Self> {
        Design::from_classes(raw.m, raw.b, raw.mu, raw.blocks)
    }
}

impl From<Design> for DesignJson {
    fn from(d: Design) -> Self {
        DesignJson {
            m: d.m,
            b: d.b,
            mu: d.mu,
            blocks: d.classes,
        }
    }
}

/// Outcome of [`Design::verify`]. Failures are recorded here, never raised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Per class: do its blocks partition the point set?
    pub classes_partition: Vec<bool>,
    /// Common block size, if all blocks have the same size.
    pub uniform_block_size: Option<usize>,
    /// Every intersection size seen while scanning all `b^m` block tuples.
    pub observed_intersections: BTreeSet<usize>,
    /// The cross intersection number, if it was constant over all tuples.
    pub measured_mu: Option<usize>,
    pub pass: bool,
}

fn checked_points(m: usize, b: usize, mu: usize) -> Option<u128> {
    let mut n = mu as u128;
    for _ in 0..m {
        n = n.checked_mul(b as u128)?;
    }
    Some(n)
}

impl Design {
    /// Builds the residue-matrix MCRD with `m` classes, `b` blocks per class
    /// and cross intersection number `mu`.
    pub fn construct(m: usize, b: usize, mu: usize) -> Result<Self> {
        Self::construct_with_budget(m, b, mu, DEFAULT_POINT_BUDGET)
    }

    pub fn construct_with_budget(m: usize, b: usize, mu: usize, budget: u64) -> Result<Self> {
        if m == 0 || b == 0 || mu == 0 {
            return Err(MaccError::arg(format!(
                "m, b and mu must be positive (got m={m}, b={b}, mu={mu})"
            )));
        }
        let needed = checked_points(m, b, mu).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(MaccError::ResourceLimit { needed, budget });
        }
        let num_points = needed as usize;
        let columns = num_points / mu;

        let mut classes = vec![vec![Vec::with_capacity(num_points / b); b]; m];
        // Column c (0-based, before repetition) is the base-b expansion of c
        // with row 1 as the most significant digit.
        for col in 0..columns {
            let mut rest = col;
            let mut digits = vec![0usize; m];
            for row in (0..m).rev() {
                digits[row] = rest % b;
                rest /= b;
            }
            for rep in 0..mu {
                let point = (col * mu + rep + 1) as u32;
                for (row, &digit) in digits.iter().enumerate() {
                    classes[row][digit].push(point);
                }
            }
        }
        Ok(Design {
            m,
            b,
            mu,
            num_points,
            classes,
        })
    }

    /// Wraps an explicit block listing. Only structural well-formedness is
    /// checked (shape, point range); use [`Design::verify`] for the rest.
    pub fn from_classes(m: usize, b: usize, mu: usize, classes: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        if m == 0 || b == 0 || mu == 0 {
            return Err(MaccError::arg("m, b and mu must be positive"));
        }
        let num_points = checked_points(m, b, mu)
            .filter(|&n| n <= u32::MAX as u128)
            .ok_or_else(|| MaccError::arg("point set too large"))? as usize;
        if classes.len() != m {
            return Err(MaccError::arg(format!(
                "expected {m} parallel classes, found {}",
                classes.len()
            )));
        }
        let mut classes = classes;
        for (i, class) in classes.iter_mut().enumerate() {
            if class.len() != b {
                return Err(MaccError::arg(format!(
                    "class {} has {} blocks, expected {b}",
                    i + 1,
                    class.len()
                )));
            }
            for block in class.iter_mut() {
                block.sort_unstable();
                block.dedup();
                if let Some(&p) = block.iter().find(|&&p| p == 0 || p as usize > num_points) {
                    return Err(MaccError::arg(format!(
                        "point {p} outside 1..={num_points}"
                    )));
                }
            }
        }
        Ok(Design {
            m,
            b,
            mu,
            num_points,
            classes,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    /// Blocks of parallel class `i` (1-based).
    pub fn class(&self, i: usize) -> &[Vec<u32>] {
        &self.classes[i - 1]
    }

    /// Block `B(i, j)` (1-based).
    pub fn block(&self, i: usize, j: usize) -> &[u32] {
        &self.classes[i - 1][j - 1]
    }

    pub fn classes(&self) -> &[Vec<Vec<u32>>] {
        &self.classes
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        if coords.len() != self.m {
            return Err(MaccError::arg(format!(
                "expected {} coordinates, got {}",
                self.m,
                coords.len()
            )));
        }
        if let Some(&c) = coords.iter().find(|&&c| c == 0 || c > self.b) {
            return Err(MaccError::arg(format!(
                "block index {c} outside 1..={}",
                self.b
            )));
        }
        Ok(())
    }

    fn intersect(&self, coords: &[usize]) -> Vec<u32> {
        let mut acc: Vec<u32> = self.block(1, coords[0]).to_vec();
        for (i, &j) in coords.iter().enumerate().skip(1) {
            let other = self.block(i + 1, j);
            acc.retain(|p| other.binary_search(p).is_ok());
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// Sorted intersection `B(1, l_1) ∩ .. ∩ B(m, l_m)`.
    pub fn point_at(&self, coords: &[usize]) -> Result<Vec<u32>> {
        self.check_coords(coords)?;
        Ok(self.intersect(coords))
    }

    /// True iff the union of `point_at` over every tuple with coordinate `i`
    /// pinned to `j` is exactly `B(i, j)`.
    pub fn block_cover_check(&self, i: usize, j: usize) -> bool {
        if i == 0 || i > self.m || j == 0 || j > self.b {
            return false;
        }
        let mut union = BTreeSet::new();
        for mut coords in TupleIter::new(self.m, self.b) {
            coords[i - 1] = j;
            union.extend(self.intersect(&coords));
        }
        union.into_iter().eq(self.block(i, j).iter().copied())
    }

    /// Exhaustive verification: every class is checked for being a
    /// partition, and all `b^m` block tuples are intersected.
    pub fn verify(&self) -> VerificationReport {
        let classes_partition = self
            .classes
            .iter()
            .map(|class| {
                let mut seen = vec![false; self.num_points + 1];
                let mut count = 0usize;
                for block in class {
                    for &p in block {
                        if seen[p as usize] {
                            return false;
                        }
                        seen[p as usize] = true;
                        count += 1;
                    }
                }
                count == self.num_points
            })
            .collect::<Vec<_>>();

        let first = self.classes[0][0].len();
        let uniform_block_size = self
            .classes
            .iter()
            .flatten()
            .all(|blk| blk.len() == first)
            .then_some(first);

        let observed_intersections: BTreeSet<usize> = TupleIter::new(self.m, self.b)
            .map(|coords| self.intersect(&coords).len())
            .collect();
        let measured_mu = match observed_intersections.len() {
            1 => observed_intersections.iter().next().copied(),
            _ => None,
        };
        let pass = classes_partition.iter().all(|&ok| ok)
            && uniform_block_size.is_some()
            && measured_mu.is_some_and(|mu| mu > 0);
        VerificationReport {
            classes_partition,
            uniform_block_size,
            observed_intersections,
            measured_mu,
            pass,
        }
    }

    /// Coordinate lookup: for every point, the block holding it in each class.
    ///
    /// Fails unless each class partitions the point set.
    pub fn point_coordinates(&self) -> Result<Vec<Vec<u32>>> {
        let mut coords = vec![vec![0u32; self.m]; self.num_points];
        for (i, class) in self.classes.iter().enumerate() {
            for (j, block) in class.iter().enumerate() {
                for &p in block {
                    let slot = &mut coords[p as usize - 1][i];
                    if *slot != 0 {
                        return Err(MaccError::UnsupportedDesign(format!(
                            "point {p} lies in two blocks of class {}",
                            i + 1
                        )));
                    }
                    *slot = (j + 1) as u32;
                }
            }
        }
        if let Some(p) = coords.iter().position(|c| c.contains(&0)) {
            return Err(MaccError::UnsupportedDesign(format!(
                "point {} is not covered by every class",
                p + 1
            )));
        }
        Ok(coords)
    }

    /// Cross intersection number computed from point coordinates instead of
    /// explicit intersections: each point lands in exactly one tuple, so the
    /// tuple tallies are the intersection sizes. `None` if a class is not a
    /// partition or the tallies differ.
    pub fn quick_mu(&self) -> Option<usize> {
        let coords = self.point_coordinates().ok()?;
        let cells = checked_points(self.m, self.b, 1)?;
        let mut tally = vec![0usize; usize::try_from(cells).ok()?];
        for c in &coords {
            tally[tuple_rank(c.iter().map(|&x| x as usize), self.b)] += 1;
        }
        let first = tally[0];
        tally.iter().all(|&n| n == first).then_some(first).filter(|&n| n > 0)
    }
}

/// 0-based lexicographic rank of a 1-based tuple over `{1..=b}`.
pub(crate) fn tuple_rank(coords: impl IntoIterator<Item = usize>, b: usize) -> usize {
    coords.into_iter().fold(0, |acc, c| acc * b + (c - 1))
}

/// Iterates `{1..=b}^m` in lexicographic order (first coordinate most
/// significant).
#[derive(Debug, Clone)]
pub struct TupleIter {
    b: usize,
    next: Option<Vec<usize>>,
}

impl TupleIter {
    pub fn new(m: usize, b: usize) -> Self {
        let next = (m > 0 && b > 0).then(|| vec![1; m]);
        TupleIter { b, next }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for pos in (0..succ.len()).rev() {
            if succ[pos] < self.b {
                succ[pos] += 1;
                self.next = Some(succ);
                return Some(current);
            }
            succ[pos] = 1;
        }
        Some(current)
    }
}
