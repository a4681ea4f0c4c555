//! Exact arithmetic for quadratic surds `(p + q sqrt(d)) / r`.
//!
//! Floors are computed from a floating-point estimate and then certified by
//! exact integer sign tests (compare `p + q sqrt(d)` against `m r` by squaring
//! once), so a stream of mechanical-word letters never depends on rounding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Component bounds keeping every intermediate below the i128 overflow line
/// for stream indices up to `2^24`.
const MAX_PQ: i64 = 100_000;
const MAX_R: i64 = 20_000;
const MAX_D: i64 = 20_000;

/// Largest stream index the affine floor is certified for.
pub(crate) const MAX_STREAM_INDEX: u64 = 1 << 24;

/// `(p + q sqrt(d)) / r` with integer components, `r > 0`, `d >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd {
    p: i64,
    q: i64,
    r: i64,
    d: i64,
}

impl Surd {
    pub fn new(p: i64, q: i64, r: i64, d: i64) -> Result<Self, Error> {
        if r == 0 {
            return Err(Error::Parameter("denominator must be nonzero".into()));
        }
        if d < 0 {
            return Err(Error::Parameter("radicand must be non-negative".into()));
        }
        let (p, q, r) = if r < 0 { (-p, -q, -r) } else { (p, q, r) };
        if p.abs() > MAX_PQ || q.abs() > MAX_PQ || r > MAX_R || d > MAX_D {
            return Err(Error::Parameter(format!(
                "surd components exceed supported bounds (|p|,|q| <= {MAX_PQ}, r <= {MAX_R}, d <= {MAX_D})"
            )));
        }
        Ok(Surd { p, q, r, d })
    }

    pub fn rational(p: i64, r: i64) -> Result<Self, Error> {
        Surd::new(p, 0, r, 0)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0 || self.d == 0 || is_square(self.d)
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + self.q as f64 * (self.d as f64).sqrt()) / self.r as f64
    }

    /// Exact comparison with the integer `m`.
    pub fn cmp_int(&self, m: i64) -> Ordering {
        cmp_surd_num(
            self.p as i128,
            self.q as i128,
            self.d as i128,
            m as i128 * self.r as i128,
        )
    }

    /// Exact floor.
    pub fn floor(&self) -> i64 {
        floor_surd(
            self.p as i128,
            self.q as i128,
            self.r as i128,
            self.d as i128,
        ) as i64
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.p, self.q, self.r, self.d)
    }
}

impl FromStr for Surd {
    type Err = Error;

    /// Parses the `p,q,r,D` component form.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parameter(format!(
                "expected four comma-separated integers p,q,r,D; got {s:?}"
            )));
        }
        let mut nums = [0i64; 4];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::Parameter(format!("not an integer: {part:?}")))?;
        }
        Surd::new(nums[0], nums[1], nums[2], nums[3])
    }
}

pub(crate) fn is_square(d: i64) -> bool {
    if d < 0 {
        return false;
    }
    let root = (d as f64).sqrt().round() as i64;
    (root - 1..=root + 1).any(|r| r >= 0 && r * r == d)
}

/// Sign of `(p + q sqrt(d)) - t` for integers, exactly.
pub(crate) fn cmp_surd_num(p: i128, q: i128, d: i128, t: i128) -> Ordering {
    let diff = p - t;
    if q == 0 || d == 0 {
        return diff.cmp(&0);
    }
    match (q > 0, diff >= 0, diff <= 0) {
        (true, true, _) => Ordering::Greater,
        (false, _, true) => Ordering::Less,
        (true, _, _) => (q * q * d).cmp(&(diff * diff)),
        (false, _, _) => (diff * diff).cmp(&(q * q * d)),
    }
}

/// Exact floor of `(p + q sqrt(d)) / r`, `r > 0`.
pub(crate) fn floor_surd(p: i128, q: i128, r: i128, d: i128) -> i128 {
    debug_assert!(r > 0 && d >= 0);
    let estimate = (p as f64 + q as f64 * (d as f64).sqrt()) / r as f64;
    let mut m = estimate.floor() as i128;
    while cmp_surd_num(p, q, d, (m + 1) * r) != Ordering::Less {
        m += 1;
    }
    while cmp_surd_num(p, q, d, m * r) == Ordering::Less {
        m -= 1;
    }
    m
}
