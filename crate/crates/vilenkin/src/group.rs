//! Finite truncations of bounded Vilenkin groups.
//!
//! A bounded sequence m = (m_0, m_1, …) of radices, each ≥ 2, generates the
//! group G_m = Π_k Z_{m_k}. Everything downstream works on the depth-N
//! truncation: a point is a digit vector (x_0, …, x_{N−1}) with x_k < m_k,
//! the group operation is coordinatewise addition mod m_k, and normalized
//! counting measure on the M_N points stands in for Haar measure.
//!
//! The scale table M_0 = 1, M_{k+1} = m_k·M_k doubles as a mixed-radix
//! number system: `rank` ↔ `digits` is the bijection n = Σ_k n_k·M_k between
//! 0..M_N and digit vectors, and it is used to enumerate points and
//! characters alike. Two consequences worth keeping in mind because the rest
//! of the crate leans on them:
//!
//! * the interval I_n(x) = { y : y_k = x_k for k < n } is exactly the set of
//!   ranks congruent to rank(x) mod M_n, and
//! * the complement of I_N(0) splits into the disjoint shells
//!   I_s(0) \ I_{s+1}(0), s = 0, …, N−1 (points whose first nonzero digit
//!   sits at position s).

use std::fmt;

use thiserror::Error;

/// Ceiling on M_N. Keeps every rank, scale product, and rank sum safely
/// inside u64 arithmetic; configurations above it are rejected up front.
pub const MAX_SCALE: u64 = 1 << 62;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("radix m_{index} = {radix} is below 2")]
    RadixTooSmall { index: usize, radix: u32 },
    #[error("a group needs at least one radix")]
    Empty,
    #[error("M_N exceeds the 64-bit-safe limit 2^62")]
    ScaleOverflow,
    #[error("index {n} is outside 0..{points}")]
    IndexOutOfRange { n: u64, points: u64 },
    #[error("digit {digit} at coordinate {index} is outside 0..{radix}")]
    DigitOutOfRange { index: usize, digit: u32, radix: u32 },
    #[error("point has {got} digits, the group has depth {expected}")]
    DepthMismatch { got: usize, expected: usize },
    #[error("interval rank {rank} exceeds the truncation depth {depth}")]
    RankTooDeep { rank: usize, depth: usize },
}

/// The scale table M_0 = 1, M_{k+1} = m_k·M_k for a radix sequence.
///
/// Returns N+1 entries for N radices. Rejects radices below 2 and tables
/// that would cross [`MAX_SCALE`].
pub fn scale_table(m: &[u32]) -> Result<Vec<u64>, GroupError> {
    if m.is_empty() {
        return Err(GroupError::Empty);
    }
    let mut scales = Vec::with_capacity(m.len() + 1);
    scales.push(1u64);
    for (index, &radix) in m.iter().enumerate() {
        if radix < 2 {
            return Err(GroupError::RadixTooSmall { index, radix });
        }
        let next = scales[index]
            .checked_mul(u64::from(radix))
            .filter(|&s| s <= MAX_SCALE)
            .ok_or(GroupError::ScaleOverflow)?;
        scales.push(next);
    }
    Ok(scales)
}

/// A depth-N truncation of a bounded Vilenkin group: the radices m_k, the
/// scale table M_0..M_N, and λ = max m_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    m: Vec<u32>,
    scales: Vec<u64>,
    lambda: u32,
}

impl GroupSpec {
    pub fn new(m: Vec<u32>) -> Result<Self, GroupError> {
        let scales = scale_table(&m)?;
        let lambda = *m.iter().max().expect("radices are nonempty");
        Ok(GroupSpec { m, scales, lambda })
    }

    /// Builds a spec by cycling a base radix pattern out to `depth`
    /// coordinates, e.g. base (2,3) at depth 4 gives m = (2,3,2,3).
    pub fn cycled(base: &[u32], depth: usize) -> Result<Self, GroupError> {
        if base.is_empty() || depth == 0 {
            return Err(GroupError::Empty);
        }
        Self::new((0..depth).map(|k| base[k % base.len()]).collect())
    }

    /// Truncation depth N.
    pub fn depth(&self) -> usize {
        self.m.len()
    }

    /// m_k.
    pub fn radix(&self, k: usize) -> u32 {
        self.m[k]
    }

    pub fn radices(&self) -> &[u32] {
        &self.m
    }

    /// M_k for 0 ≤ k ≤ N.
    pub fn scale(&self, k: usize) -> u64 {
        self.scales[k]
    }

    /// The full table M_0..M_N.
    pub fn scales(&self) -> &[u64] {
        &self.scales
    }

    /// M_N, the number of points in the truncation.
    pub fn points(&self) -> u64 {
        *self.scales.last().expect("table is nonempty")
    }

    /// λ = max_k m_k.
    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    /// Mixed-radix expansion n = Σ_k n_k·M_k of an index below M_N.
    pub fn digits(&self, n: u64) -> Result<Point, GroupError> {
        if n >= self.points() {
            return Err(GroupError::IndexOutOfRange {
                n,
                points: self.points(),
            });
        }
        let mut rest = n;
        let digits = self
            .m
            .iter()
            .map(|&mk| {
                let d = (rest % u64::from(mk)) as u32;
                rest /= u64::from(mk);
                d
            })
            .collect();
        Ok(Point { digits })
    }

    /// The order |n| = max{ k : n_k ≠ 0 }, with |0| defined as 0.
    pub fn order(&self, n: u64) -> Result<usize, GroupError> {
        let point = self.digits(n)?;
        Ok(point
            .digits
            .iter()
            .rposition(|&d| d != 0)
            .unwrap_or(0))
    }

    /// rank(x) = Σ_k x_k·M_k, the inverse of [`GroupSpec::digits`].
    pub fn rank(&self, x: &Point) -> u64 {
        self.check_point(x);
        x.digits
            .iter()
            .zip(&self.scales)
            .map(|(&d, &mk)| u64::from(d) * mk)
            .sum()
    }

    /// Coordinatewise sum x ⊕ y (mod m_k in coordinate k).
    ///
    /// Panics if either point does not belong to this group.
    pub fn add(&self, x: &Point, y: &Point) -> Point {
        self.check_point(x);
        self.check_point(y);
        let digits = self
            .m
            .iter()
            .zip(x.digits.iter().zip(&y.digits))
            .map(|(&mk, (&a, &b))| (a + b) % mk)
            .collect();
        Point { digits }
    }

    /// Coordinatewise difference x ⊖ y.
    ///
    /// Panics if either point does not belong to this group.
    pub fn sub(&self, x: &Point, y: &Point) -> Point {
        self.check_point(x);
        self.check_point(y);
        let digits = self
            .m
            .iter()
            .zip(x.digits.iter().zip(&y.digits))
            .map(|(&mk, (&a, &b))| (a + mk - b) % mk)
            .collect();
        Point { digits }
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        x.digits.len() == self.depth()
            && x.digits.iter().zip(&self.m).all(|(&d, &mk)| d < mk)
    }

    fn check_point(&self, x: &Point) {
        assert!(
            self.contains_point(x),
            "point {:?} does not belong to a depth-{} group with radices {:?}",
            x.digits,
            self.depth(),
            self.m
        );
    }

    /// Index s of the shell I_s(0) \ I_{s+1}(0) containing x — the position
    /// of the first nonzero digit. `None` means x = 0, i.e. x ∈ I_N(0).
    pub fn shell_index(&self, x: &Point) -> Option<usize> {
        self.check_point(x);
        x.digits.iter().position(|&d| d != 0)
    }

    /// Position of the first digit where x and `base` disagree; `None` when
    /// the points coincide. Relative to `base` this is the shell index: x
    /// lies in I_s(base) \ I_{s+1}(base) exactly when the result is Some(s).
    pub fn first_disagreement(&self, x: &Point, base: &Point) -> Option<usize> {
        self.check_point(x);
        self.check_point(base);
        x.digits
            .iter()
            .zip(&base.digits)
            .position(|(a, b)| a != b)
    }

    /// The shells I_s(0) \ I_{s+1}(0), s = 0..N−1, which partition the
    /// complement of I_N(0) = {0}.
    pub fn shell_partition(&self) -> Vec<Shell> {
        (0..self.depth()).map(|index| Shell { index }).collect()
    }

    pub fn interval(&self, rank: usize, base: Point) -> Result<Interval, GroupError> {
        if rank > self.depth() {
            return Err(GroupError::RankTooDeep {
                rank,
                depth: self.depth(),
            });
        }
        if !self.contains_point(&base) {
            return Err(GroupError::DepthMismatch {
                got: base.digits.len(),
                expected: self.depth(),
            });
        }
        Ok(Interval { rank, base })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(m = {:?}, M_N = {})", self.m, self.points())
    }
}

/// A point of the truncated group, stored as its digit vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    digits: Vec<u32>,
}

impl Point {
    /// Validates digit count and ranges against the group's radices.
    pub fn new(digits: Vec<u32>, spec: &GroupSpec) -> Result<Self, GroupError> {
        if digits.len() != spec.depth() {
            return Err(GroupError::DepthMismatch {
                got: digits.len(),
                expected: spec.depth(),
            });
        }
        for (index, (&digit, &radix)) in digits.iter().zip(spec.radices()).enumerate() {
            if digit >= radix {
                return Err(GroupError::DigitOutOfRange {
                    index,
                    digit,
                    radix,
                });
            }
        }
        Ok(Point { digits })
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        Point {
            digits: vec![0; spec.depth()],
        }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, k: usize) -> u32 {
        self.digits[k]
    }
}

/// The interval I_n(x): all points agreeing with `base` on the first `rank`
/// digits. Rank 0 is the whole group; rank N is the single point `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    rank: usize,
    base: Point,
}

impl Interval {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    /// μ(I_n) = 1/M_n.
    pub fn measure(&self, spec: &GroupSpec) -> f64 {
        1.0 / spec.scale(self.rank) as f64
    }

    pub fn contains(&self, y: &Point) -> bool {
        y.digits[..self.rank] == self.base.digits[..self.rank]
    }

    /// Σ_{k<rank} base_k·M_k — the common residue of member ranks mod M_rank.
    pub fn prefix_rank(&self, spec: &GroupSpec) -> u64 {
        self.base.digits[..self.rank]
            .iter()
            .zip(spec.scales())
            .map(|(&d, &mk)| u64::from(d) * mk)
            .sum()
    }

    /// M_N / M_rank.
    pub fn point_count(&self, spec: &GroupSpec) -> u64 {
        spec.points() / spec.scale(self.rank)
    }

    /// The ranks of the member points: prefix + t·M_rank for t < M_N/M_rank.
    pub fn member_ranks<'a>(&self, spec: &'a GroupSpec) -> impl Iterator<Item = u64> + 'a {
        let step = spec.scale(self.rank);
        let prefix = self.prefix_rank(spec);
        (0..self.point_count(spec)).map(move |t| prefix + t * step)
    }
}

/// The shell I_s(0) \ I_{s+1}(0): points whose first nonzero digit sits at
/// position `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shell {
    index: usize,
}

impl Shell {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn contains(&self, spec: &GroupSpec, y: &Point) -> bool {
        spec.shell_index(y) == Some(self.index)
    }

    /// μ(I_s) − μ(I_{s+1}) = 1/M_s − 1/M_{s+1}.
    pub fn measure(&self, spec: &GroupSpec) -> f64 {
        1.0 / spec.scale(self.index) as f64 - 1.0 / spec.scale(self.index + 1) as f64
    }
}
