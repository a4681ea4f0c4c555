//! A positional numeration system with place values
//! `W(j) = ((k+1)^j - (-1)^j) / (k+2)`.
//!
//! A digit word is valid when its digits lie in `[0, k]`, the leading digit is
//! nonzero, and the trailing run of digit `k` has even length. Every positive
//! integer has exactly one valid expansion, and the parity of its trailing
//! zeros reads off letters of the `{1, 2}` fixed point without materializing
//! the word — which is what makes kernel subsequences at huge indices cheap.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::folding::FoldingFamily;
use crate::words::Letter;
use crate::{Error, Verdict};

/// Cached place values for one parameter `k`. Extend-on-demand, append-only.
pub struct WSequence {
    k: u32,
    values: Vec<BigInt>,
}

impl WSequence {
    pub fn new(k: u32) -> Result<Self, Error> {
        if k < 1 {
            return Err(Error::Parameter("numeration parameter k must be >= 1".into()));
        }
        Ok(WSequence {
            k,
            values: vec![BigInt::zero(), BigInt::one()],
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn ensure(&mut self, n: usize) {
        while self.values.len() <= n {
            // W(n+1) = (k+1) W(n) + (-1)^n
            let n_prev = self.values.len() - 1;
            let sign = if n_prev.is_multiple_of(2) { 1 } else { -1 };
            let next = (self.k + 1) * self.values.last().unwrap() + sign;
            self.values.push(next);
        }
    }

    pub fn value(&mut self, n: usize) -> BigInt {
        self.ensure(n);
        self.values[n].clone()
    }

    fn get(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    /// Direct evaluation `((k+1)^n - (-1)^n) / (k+2)`, with the divisibility
    /// asserted. Independent of the recurrence route.
    pub fn closed_form(k: u32, n: u32) -> BigInt {
        let base = BigInt::from(k + 1);
        let sign = if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        let numerator = base.pow(n) - sign;
        let (q, r) = numerator.div_rem(&BigInt::from(k + 2));
        assert!(r.is_zero(), "place values are integers by construction");
        q
    }

    /// Largest index `t >= 1` with `W(t) <= n`; requires `n >= 1`.
    fn largest_index_leq(&mut self, n: &BigInt) -> usize {
        while self.values.last().unwrap() <= n || self.values.len() < 3 {
            self.ensure(self.values.len());
        }
        // values[1..] is non-decreasing (W(1) = 1, W(2) = k, then strictly
        // increasing), so a partition point gives the last index below n.
        let tail = &self.values[1..];
        tail.partition_point(|v| v <= n)
    }
}

/// A digit word, most-significant digit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WExpansion {
    digits: Vec<u32>,
}

impl WExpansion {
    pub fn new(digits: Vec<u32>) -> Self {
        WExpansion { digits }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn trailing_zeros(&self) -> usize {
        self.digits.iter().rev().take_while(|&&d| d == 0).count()
    }

    /// Comma-separated digits, most-significant first.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        parts.join(",")
    }
}

/// Encoder/decoder holding a shared place-value cache. Use one codec per
/// thread for bulk work.
pub struct WCodec {
    w: WSequence,
    /// Place values while they still fit in a machine word; powers the
    /// allocation-free letter fast path.
    small: Vec<u64>,
}

impl WCodec {
    pub fn new(k: u32) -> Result<Self, Error> {
        Ok(WCodec {
            w: WSequence::new(k)?,
            small: vec![0, 1],
        })
    }

    pub fn k(&self) -> u32 {
        self.w.k
    }

    /// The unique valid expansion of `n >= 1`.
    ///
    /// Digit extraction peels the top place value: with `t` maximal such that
    /// `W(t) <= n`, either `n` is an exact place value (digit word `1 0^{t-1}`),
    /// or `alpha = ceil(n / W(t)) - 1` copies are removed and the remainder
    /// recursed on. The remainder can equal `W(t)` itself; the exact multiple
    /// `(alpha + 1) W(t)` is then a single digit when `alpha + 1 <= k`, and
    /// otherwise `(k+1) W(t)` which expands as `t` (even) digits `k`.
    pub fn encode(&mut self, n: &BigInt) -> Result<WExpansion, Error> {
        if n < &BigInt::one() {
            return Err(Error::Parameter("only positive integers have expansions".into()));
        }
        let k = self.w.k;
        let top = self.w.largest_index_leq(n);
        let mut digits_lsb = vec![0u32; top];
        let mut n = n.clone();
        loop {
            let t = self.w.largest_index_leq(&n);
            let wt = self.w.get(t).clone();
            if n == wt {
                digits_lsb[t - 1] = 1;
                break;
            }
            let alpha = (&n - 1u32) / &wt;
            let m = &n - &alpha * &wt;
            let alpha = alpha.to_u32().expect("digit fits in u32");
            debug_assert!(1 <= alpha && alpha <= k);
            if m == wt {
                if alpha < k {
                    digits_lsb[t - 1] = alpha + 1;
                } else {
                    // n = (k+1) W(t) with t even: t digits k, an even run
                    debug_assert_eq!(t % 2, 0);
                    for digit in digits_lsb.iter_mut().take(t) {
                        *digit = k;
                    }
                }
                break;
            }
            digits_lsb[t - 1] = alpha;
            n = m;
        }
        digits_lsb.reverse();
        Ok(WExpansion::new(digits_lsb))
    }

    /// Value of a digit word (most-significant first). Validity is not
    /// required — only the digit range is.
    pub fn decode(&mut self, digits: &[u32]) -> Result<BigInt, Error> {
        let k = self.w.k;
        if let Some(&digit) = digits.iter().find(|&&d| d > k) {
            return Err(Error::DigitTooLarge { digit, max: k });
        }
        self.w.ensure(digits.len());
        let mut total = BigInt::zero();
        for (i, &digit) in digits.iter().enumerate() {
            let place = digits.len() - i;
            if digit != 0 {
                total += digit * self.w.get(place);
            }
        }
        Ok(total)
    }

    /// Letter `n` (0-based) of the `{1, 2}` fixed point, evaluated through
    /// the numeration system: 2 exactly when the valid expansion of `n + 1`
    /// ends with an odd number of zeros.
    pub fn letter(&mut self, n: &BigInt) -> Result<Letter, Error> {
        if n.is_negative() {
            return Err(Error::Parameter("letter index must be >= 0".into()));
        }
        let expansion = self.encode(&(n + 1u32))?;
        Ok(if expansion.trailing_zeros() % 2 == 1 { 2 } else { 1 })
    }

    pub fn letter_u64(&mut self, n: u64) -> Letter {
        match self.trailing_zero_parity(n + 1) {
            Some(odd) => {
                if odd {
                    2
                } else {
                    1
                }
            }
            None => self
                .letter(&BigInt::from(n))
                .expect("non-negative index always has a letter"),
        }
    }

    /// Parity of the trailing zeros of the valid expansion of `n >= 1`,
    /// without materializing digits: the recursion writes digits at strictly
    /// decreasing positions, so the last step fixes the lowest nonzero digit
    /// (position `t` gives `t - 1` trailing zeros; the all-`k` tail gives
    /// none). `None` when `n` outruns the machine-word table.
    fn trailing_zero_parity(&mut self, mut n: u64) -> Option<bool> {
        let k = self.w.k as u64;
        if n == 0 || n > u64::MAX / (k + 2) {
            return None;
        }
        while *self.small.last().unwrap() <= n || self.small.len() < 3 {
            let prev = self.small.len() - 1;
            let last = *self.small.last().unwrap();
            let next = if prev.is_multiple_of(2) {
                (k + 1) * last + 1
            } else {
                (k + 1) * last - 1
            };
            self.small.push(next);
        }
        loop {
            let t = self.small[1..].partition_point(|&v| v <= n);
            let wt = self.small[t];
            if n == wt {
                return Some((t - 1) % 2 == 1);
            }
            let alpha = (n - 1) / wt;
            let m = n - alpha * wt;
            if m == wt {
                return if alpha < k {
                    Some((t - 1) % 2 == 1)
                } else {
                    Some(false) // all-k word: no trailing zeros
                };
            }
            n = m;
        }
    }
}

/// Place value `W(n)` for parameter `k`.
pub fn w_value(k: u32, n: usize) -> Result<BigInt, Error> {
    Ok(WSequence::new(k)?.value(n))
}

/// Valid expansion of `n`.
pub fn encode(k: u32, n: &BigInt) -> Result<WExpansion, Error> {
    WCodec::new(k)?.encode(n)
}

/// Value of a digit word; digits need not form a valid expansion.
pub fn decode(k: u32, digits: &[u32]) -> Result<BigInt, Error> {
    WCodec::new(k)?.decode(digits)
}

/// Valid means: nonzero leading digit, digits in `[0, k]`, and an even-length
/// trailing run of digit `k`.
pub fn is_valid(k: u32, digits: &[u32]) -> bool {
    if digits.is_empty() || digits[0] == 0 || digits.iter().any(|&d| d > k) {
        return false;
    }
    let trailing_k = digits.iter().rev().take_while(|&&d| d == k).count();
    trailing_k % 2 == 0
}

/// Number of valid digit words of length exactly `r`, counted directly by
/// splitting on the length of the trailing run of digit `k`. Must equal
/// `W(r+1) - W(r)`.
pub fn count_valid(k: u32, r: u32) -> Result<BigInt, Error> {
    if r < 1 {
        return Err(Error::Parameter("length must be >= 1".into()));
    }
    if k < 1 {
        return Err(Error::Parameter("numeration parameter k must be >= 1".into()));
    }
    let base = BigInt::from(k + 1);
    let mut total = BigInt::zero();
    let mut run = 0u32;
    while run <= r {
        if run == r {
            total += 1u32; // the all-k word
        } else if run == r - 1 {
            total += k - 1; // one free leading digit, != 0 and != k
        } else {
            // digit above the run is anything but k; leading digit nonzero
            total += BigInt::from(k) * BigInt::from(k) * base.pow(r - run - 2);
        }
        run += 2;
    }
    Ok(total)
}

/// `t_via_numeration`: letter `n` of the `{1, 2}` fixed point through the
/// numeration system.
pub fn t_via_numeration(k: u32, n: &BigInt) -> Result<Letter, Error> {
    WCodec::new(k)?.letter(n)
}

/// Value of the digit pattern `(1 0^{2l-1})^n`, computed both by decoding the
/// pattern and from the geometric closed form; the two routes must agree.
pub fn b_value(k: u32, l: u32, n: u32) -> Result<BigInt, Error> {
    if l < 1 || n < 1 {
        return Err(Error::Parameter("block exponent and count must be >= 1".into()));
    }
    let mut codec = WCodec::new(k)?;
    let decoded = codec.decode(&b_pattern(l, n))?;

    // ((k+1)^{2l(n+1)} - (k+1)^{2l} - n ((k+1)^{2l} - 1)) / ((k+2)((k+1)^{2l} - 1))
    let base = BigInt::from(k + 1);
    let block = base.pow(2 * l);
    let d = &block - 1u32;
    let numerator = base.pow(2 * l * (n + 1)) - &block - BigInt::from(n) * &d;
    let (closed, rem) = numerator.div_rem(&(BigInt::from(k + 2) * &d));
    assert!(rem.is_zero(), "closed form divides exactly");
    assert_eq!(decoded, closed, "pattern decoding and closed form agree");
    Ok(decoded)
}

fn b_pattern(l: u32, n: u32) -> Vec<u32> {
    let mut digits = Vec::with_capacity((2 * l * n) as usize);
    for _ in 0..n {
        digits.push(1);
        digits.extend(std::iter::repeat_n(0, 2 * l as usize - 1));
    }
    digits
}

/// The shifted difference `b(l, n) - b(l, r) - (k+1) W(2l)`; well-formed for
/// `n >= r + 2`.
pub fn c_value(k: u32, l: u32, r: u32, n: u32) -> Result<BigInt, Error> {
    if n < r + 2 {
        return Err(Error::Parameter(
            "the derived expansion needs n >= r + 2".into(),
        ));
    }
    let mut w = WSequence::new(k)?;
    Ok(b_value(k, l, n)? - b_value(k, l, r)? - (k + 1) * w.value(2 * l as usize))
}

/// Expected valid expansion of `c(l, r, n)`:
/// `(1 0^{2l-1})^{n-r-1} 0 k^{2lr-1} 0^{2l}`.
fn c_pattern(k: u32, l: u32, r: u32, n: u32) -> Vec<u32> {
    let mut digits = b_pattern(l, n - r - 1);
    digits.push(0);
    digits.extend(std::iter::repeat_n(k, (2 * l * r) as usize - 1));
    digits.extend(std::iter::repeat_n(0, 2 * l as usize));
    digits
}

/// Exercises the construction family `b` and `c` for one `(k, l, r)` cell:
/// the recurrence and divisibility of `b`, the letter at `b - 1` being 2, and
/// for `n >= r + 2` the letter at `c - 1` being 1 with the predicted valid
/// expansion ending in a positive even number of zeros.
pub fn check_construction(k: u32, l: u32, r: u32, n_max: u32) -> Result<Verdict, Error> {
    let mut w = WSequence::new(k)?;
    let mut codec = WCodec::new(k)?;
    let block = BigInt::from(k + 1).pow(2 * l);
    let w2l = w.value(2 * l as usize);
    for n in 1..=n_max {
        let b = b_value(k, l, n)?;
        if n >= 2 {
            let recurrence = &block * b_value(k, l, n - 1)? + BigInt::from(n) * &w2l;
            if b != recurrence {
                return Ok(Verdict::fail(n as u64, "clause (i): recurrence mismatch"));
            }
        }
        if !(&b % &w2l).is_zero() {
            return Ok(Verdict::fail(n as u64, "clause (ii): divisibility fails"));
        }
        if codec.letter(&(&b - 1u32))? != 2 {
            return Ok(Verdict::fail(
                n as u64,
                "clause (iii): letter before b is not 2",
            ));
        }
    }
    for n in (r + 2)..=n_max {
        let c = c_value(k, l, r, n)?;
        if codec.letter(&(&c - 1u32))? != 1 {
            return Ok(Verdict::fail(
                n as u64,
                "clause (iv): letter before c is not 1",
            ));
        }
        let expansion = codec.encode(&c)?;
        let expected = c_pattern(k, l, r, n);
        if expansion.digits() != expected {
            return Ok(Verdict::fail(
                n as u64,
                "clause (iv): expansion differs from the derived pattern",
            ));
        }
        let zeros = expansion.trailing_zeros();
        if zeros == 0 || zeros % 2 != 0 {
            return Ok(Verdict::fail(
                n as u64,
                format!("clause (iv): trailing zero run {zeros} not even positive"),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// Verifies the place-value identities for `2 <= n <= n_max`, each side
/// evaluated independently in exact arithmetic. Word lengths are checked by
/// direct expansion while the predicted length stays under a million letters
/// and by the length recurrence everywhere.
pub fn check_w_identities(k: u32, n_max: u32) -> Result<Verdict, Error> {
    if n_max < 2 {
        return Err(Error::Parameter("n_max must be >= 2".into()));
    }
    let mut w = WSequence::new(k)?;
    w.ensure(n_max as usize + 2);
    let base = BigInt::from(k + 1);
    let fail = |n: u32, clause: &str| -> Verdict {
        Verdict::fail(n as u64, format!("identity ({clause}) fails at n = {n}"))
    };

    for n in 0..=n_max {
        let nu = n as usize;
        // recurrence values against the closed form
        if w.value(nu) != WSequence::closed_form(k, n) {
            return Ok(fail(n, "closed form"));
        }
        // (i)
        let sign: BigInt = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        if w.value(nu + 1) != (k + 1) * w.value(nu) + &sign {
            return Ok(fail(n, "i"));
        }
        // (ii)
        if w.value(nu + 2) != k * w.value(nu + 1) + (k + 1) * w.value(nu) {
            return Ok(fail(n, "ii"));
        }
        // (iii)
        if w.value(nu + 1) + w.value(nu) != base.pow(n) {
            return Ok(fail(n, "iii"));
        }
        // (iv)
        if n >= 1 {
            let sum: BigInt = (1..=nu).map(|j| w.value(j)).sum();
            let rhs = if n % 2 == 1 {
                w.value(nu + 1)
            } else {
                w.value(nu + 1) - 1u32
            };
            if BigInt::from(k) * sum != rhs {
                return Ok(fail(n, "iv"));
            }
        }
        // (v)
        let alternating: BigInt = (1..=n)
            .map(|j| {
                let term = base.pow(n - j);
                if j % 2 == 1 {
                    term
                } else {
                    -term
                }
            })
            .sum();
        if w.value(nu) != alternating {
            return Ok(fail(n, "v"));
        }
        // (vi)
        if n >= 1 {
            let half: BigInt = (1..=(n - 1) / 2).map(|j| base.pow(n - 2 * j - 1)).sum();
            let mut rhs = base.pow(n - 1) - BigInt::from(k) * half;
            if n % 2 == 0 {
                rhs -= 1u32;
            }
            if w.value(nu) != rhs {
                return Ok(fail(n, "vi"));
            }
        }
    }

    // (vii): |tau^n(1)| = W(n+1)
    let fam = FoldingFamily::new(k)?;
    let mut lengths = (BigInt::one(), BigInt::one()); // |tau^n(1)|, |tau^n(2)|
    let mut word = Some(fam.tau().iterate(1, 0)?);
    const DIRECT_LIMIT: u64 = 1_000_000;
    for n in 0..=n_max {
        if lengths.0 != w.value(n as usize + 1) {
            return Ok(fail(n, "vii"));
        }
        if let Some(current) = &word {
            if current.len() as u64 != lengths.0.to_u64().unwrap_or(u64::MAX) {
                return Ok(fail(n, "vii: direct expansion"));
            }
        }
        let grow_direct = n < 12
            && word.is_some()
            && lengths.1.to_u64().is_some_and(|m| m < DIRECT_LIMIT);
        word = if grow_direct {
            Some(fam.tau().apply(word.as_ref().unwrap())?)
        } else {
            None
        };
        lengths = (
            (k - 1) * &lengths.0 + &lengths.1,
            2 * k * &lengths.0 + &lengths.1,
        );
    }
    Ok(Verdict::Pass)
}

/// One kernel cell in base `k + 1`: exponent `a` and residue `b < (k+1)^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub a: u32,
    pub b: u64,
}

/// First `len` letters of the arithmetic-progression subsequence
/// `(t((k+1)^a n + b))`, each letter evaluated through the numeration system.
pub fn kernel_subsequence(k: u32, spec: KernelSpec, len: usize) -> Result<Vec<Letter>, Error> {
    let modulus = (k as u128 + 1).checked_pow(spec.a).ok_or_else(|| {
        Error::Parameter("kernel modulus overflows".into())
    })?;
    if (spec.b as u128) >= modulus {
        return Err(Error::Parameter(format!(
            "kernel residue {} must be below modulus {modulus}",
            spec.b
        )));
    }
    let mut codec = WCodec::new(k)?;
    let offset = spec.b as u128;
    let mut letters = Vec::with_capacity(len);
    for i in 0..len {
        let index = modulus * i as u128 + offset;
        match u64::try_from(index) {
            Ok(index) => letters.push(codec.letter_u64(index)),
            Err(_) => letters.push(codec.letter(&BigInt::from(index))?),
        }
    }
    Ok(letters)
}

fn kernel_cells(k: u32, max_a: u32) -> Vec<KernelSpec> {
    let mut cells = Vec::new();
    for a in 0..=max_a {
        let modulus = (k as u64 + 1).pow(a);
        for b in 0..modulus {
            cells.push(KernelSpec { a, b });
        }
    }
    cells
}

/// Distinct length-`len` prefixes among all kernel subsequences with exponent
/// at most `max_a[i]`, reported for every `i <= max_a`. Counts are monotone in
/// both the exponent bound and the prefix length.
pub fn kernel_evidence_profile(k: u32, max_a: u32, len: usize) -> Result<Vec<usize>, Error> {
    let cells = kernel_cells(k, max_a);
    let sequences = kernel_map(k, &cells, len)?;
    let mut seen: HashSet<&[Letter]> = HashSet::new();
    let mut profile = Vec::with_capacity(max_a as usize + 1);
    let mut next = 0;
    for a in 0..=max_a {
        while next < cells.len() && cells[next].a <= a {
            seen.insert(&sequences[next]);
            next += 1;
        }
        profile.push(seen.len());
    }
    Ok(profile)
}

/// Distinct length-`len` prefixes among kernel subsequences with `a <= max_a`.
pub fn kernel_evidence(k: u32, max_a: u32, len: usize) -> Result<usize, Error> {
    Ok(*kernel_evidence_profile(k, max_a, len)?
        .last()
        .expect("profile holds one entry per exponent"))
}

/// Sequential twin of `kernel_evidence`, kept callable for benchmarking the
/// parallel grid against a plain loop.
pub fn kernel_evidence_seq(k: u32, max_a: u32, len: usize) -> Result<usize, Error> {
    let cells = kernel_cells(k, max_a);
    let mut sequences = Vec::with_capacity(cells.len());
    for &cell in &cells {
        sequences.push(kernel_subsequence(k, cell, len)?);
    }
    let seen: HashSet<&[Letter]> = sequences.iter().map(|s| s.as_slice()).collect();
    Ok(seen.len())
}

#[cfg(feature = "parallel")]
fn kernel_map(k: u32, cells: &[KernelSpec], len: usize) -> Result<Vec<Vec<Letter>>, Error> {
    cells
        .par_iter()
        .map(|&cell| kernel_subsequence(k, cell, len))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn kernel_map(k: u32, cells: &[KernelSpec], len: usize) -> Result<Vec<Vec<Letter>>, Error> {
    cells
        .iter()
        .map(|&cell| kernel_subsequence(k, cell, len))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w_prefix(k: u32, len: usize) -> Vec<i64> {
        let mut w = WSequence::new(k).unwrap();
        (0..len).map(|n| w.value(n).to_i64().unwrap()).collect()
    }

    #[test]
    fn place_value_prefixes() {
        assert_eq!(w_prefix(1, 8), vec![0, 1, 1, 3, 5, 11, 21, 43]);
        assert_eq!(w_prefix(2, 6), vec![0, 1, 2, 7, 20, 61]);
        assert_eq!(w_value(3, 0).unwrap(), BigInt::zero());
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for k in 1..=5 {
            let mut w = WSequence::new(k).unwrap();
            for n in 0..=40 {
                assert_eq!(w.value(n), WSequence::closed_form(k, n as u32));
            }
        }
    }

    #[test]
    fn identities_hold_for_small_k() {
        for k in 1..=4 {
            assert!(check_w_identities(k, 30).unwrap().is_pass(), "k = {k}");
        }
    }

    #[test]
    fn tau_square_length_matches() {
        let fam = FoldingFamily::new(1).unwrap();
        let word = fam.tau().iterate(1, 2).unwrap();
        assert_eq!(word.render(), "211");
        assert_eq!(BigInt::from(word.len()), w_value(1, 3).unwrap());
    }

    #[test]
    fn encode_examples_from_small_values() {
        assert_eq!(encode(1, &BigInt::from(1)).unwrap().digits(), &[1, 0]);
        assert_eq!(encode(1, &BigInt::from(2)).unwrap().digits(), &[1, 1]);
        assert_eq!(encode(2, &BigInt::from(2)).unwrap().digits(), &[1, 0]);
        assert_eq!(encode(2, &BigInt::from(3)).unwrap().digits(), &[1, 1]);
        assert_eq!(encode(3, &BigInt::from(2)).unwrap().digits(), &[2]);
        assert_eq!(encode(4, &BigInt::from(2)).unwrap().digits(), &[2]);
    }

    #[test]
    fn encode_rejects_non_positive() {
        assert!(encode(1, &BigInt::zero()).is_err());
        assert!(encode(2, &BigInt::from(-3)).is_err());
    }

    #[test]
    fn decode_accepts_non_valid_words() {
        // leading zeros and odd trailing k-runs still have a value
        assert_eq!(decode(1, &[0, 1, 0]).unwrap(), BigInt::from(1));
        assert_eq!(
            decode(1, &[1, 0, 1, 0]).unwrap(),
            BigInt::from(5 + 1) // W(4) + W(2)
        );
        assert_eq!(decode(2, &[1]).unwrap(), BigInt::one());
    }

    #[test]
    fn decode_rejects_digit_overflow() {
        assert_eq!(
            decode(2, &[3]).unwrap_err(),
            Error::DigitTooLarge { digit: 3, max: 2 }
        );
    }

    #[test]
    fn validity_examples() {
        assert!(!is_valid(1, &[1]));
        assert!(is_valid(1, &[1, 1]));
        assert!(is_valid(2, &[1, 2, 2]));
        assert!(!is_valid(2, &[1, 2]));
        assert!(!is_valid(3, &[0, 1]));
        assert!(is_valid(3, &[1, 0]));
    }

    #[test]
    fn count_valid_small_cases() {
        let mut w = WSequence::new(1).unwrap();
        assert_eq!(count_valid(1, 2).unwrap(), w.value(3) - w.value(2));
        let mut w = WSequence::new(2).unwrap();
        assert_eq!(count_valid(2, 1).unwrap(), BigInt::one());
        assert_eq!(count_valid(2, 1).unwrap(), w.value(2) - w.value(1));
    }

    #[test]
    fn count_valid_matches_place_value_gap() {
        for k in 1..=4 {
            let mut w = WSequence::new(k).unwrap();
            for r in 1..=20usize {
                assert_eq!(
                    count_valid(k, r as u32).unwrap(),
                    w.value(r + 1) - w.value(r),
                    "count mismatch at k={k}, r={r}"
                );
            }
        }
    }

    #[test]
    fn exhaustive_enumeration_agrees_for_tiny_lengths() {
        // every digit word of length r: count the valid ones and their values
        for k in 1..=3u32 {
            let mut codec = WCodec::new(k).unwrap();
            for r in 1..=6u32 {
                let mut values = std::collections::BTreeSet::new();
                let mut count = 0u64;
                let total = (k as u64 + 1).pow(r);
                for idx in 0..total {
                    let mut digits = vec![0u32; r as usize];
                    let mut rest = idx;
                    for d in digits.iter_mut().rev() {
                        *d = (rest % (k as u64 + 1)) as u32;
                        rest /= k as u64 + 1;
                    }
                    if is_valid(k, &digits) {
                        count += 1;
                        assert!(
                            values.insert(codec.decode(&digits).unwrap()),
                            "two valid words share a value"
                        );
                    }
                }
                assert_eq!(BigInt::from(count), count_valid(k, r).unwrap());
                let lo = codec.w.value(r as usize);
                let hi = codec.w.value(r as usize + 1);
                for v in values {
                    assert!(lo <= v && v < hi, "value outside its length interval");
                }
            }
        }
    }

    #[test]
    fn round_trip_and_validity_hold() {
        for k in 1..=5 {
            let mut codec = WCodec::new(k).unwrap();
            for n in 1..=3_000u32 {
                let n = BigInt::from(n);
                let e = codec.encode(&n).unwrap();
                assert!(is_valid(k, e.digits()), "invalid expansion for {n} at k={k}");
                assert_eq!(codec.decode(e.digits()).unwrap(), n);
            }
        }
    }

    #[test]
    fn letters_match_the_morphism_stream() {
        for k in 1..=5 {
            let fam = FoldingFamily::new(k).unwrap();
            let mut stream = fam.tau_stream();
            let expect = stream.prefix_letters(2_000).to_vec();
            let mut codec = WCodec::new(k).unwrap();
            for (n, &letter) in expect.iter().enumerate() {
                assert_eq!(
                    codec.letter_u64(n as u64),
                    letter,
                    "letter {n} disagrees at k={k}"
                );
            }
        }
    }

    #[test]
    fn letter_fast_path_matches_digit_route() {
        // the machine-word parity shortcut against the full expansion
        for k in 1..=4 {
            let mut codec = WCodec::new(k).unwrap();
            let mut boundary_points: Vec<u64> = (1..=2_000).collect();
            let mut w = WSequence::new(k).unwrap();
            for t in 1..=30 {
                if let Some(v) = w.value(t).to_u64() {
                    for delta in 0..3u64 {
                        boundary_points.push(v.saturating_sub(delta));
                        boundary_points.push(v + delta);
                    }
                }
            }
            for n in boundary_points {
                let fast = codec.letter_u64(n);
                let slow = codec.letter(&BigInt::from(n)).unwrap();
                assert_eq!(fast, slow, "fast path diverges at n={n}, k={k}");
            }
        }
    }

    #[test]
    fn letter_boundary_cases() {
        // t_k(k) = 1 for all k; t_k(1) = 2 exactly when k = 2
        for k in 1..=6 {
            let mut codec = WCodec::new(k).unwrap();
            assert_eq!(codec.letter_u64(k as u64), 1);
            assert_eq!(codec.letter_u64(1) == 2, k == 2);
        }
    }

    #[test]
    fn b_values_and_divisibility() {
        assert_eq!(b_value(1, 1, 1).unwrap(), BigInt::one());
        for k in 1..=4 {
            let mut w = WSequence::new(k).unwrap();
            for l in 1..=4u32 {
                let w2l = w.value(2 * l as usize);
                for n in 1..=8 {
                    let b = b_value(k, l, n).unwrap();
                    assert!((&b % &w2l).is_zero(), "divisibility fails k={k} l={l} n={n}");
                }
            }
        }
    }

    #[test]
    fn b_value_matches_place_value_sum() {
        for k in 1..=3 {
            let mut w = WSequence::new(k).unwrap();
            for l in 1..=3u32 {
                for n in 1..=5u32 {
                    let sum: BigInt = (1..=n).map(|j| w.value((2 * j * l) as usize)).sum();
                    assert_eq!(b_value(k, l, n).unwrap(), sum);
                }
            }
        }
    }

    #[test]
    fn c_value_needs_room() {
        assert!(c_value(2, 1, 3, 4).is_err());
        assert!(c_value(2, 1, 1, 3).is_ok());
    }

    #[test]
    fn construction_cells_pass() {
        assert!(check_construction(1, 1, 1, 3).unwrap().is_pass());
        assert!(check_construction(2, 1, 2, 5).unwrap().is_pass());
        assert!(check_construction(3, 2, 1, 4).unwrap().is_pass());
    }

    #[test]
    fn kernel_identity_cell_is_the_sequence() {
        let seq = kernel_subsequence(1, KernelSpec { a: 0, b: 0 }, 8).unwrap();
        assert_eq!(seq, vec![2, 1, 1, 2, 2, 2, 1, 1]);
    }

    #[test]
    fn kernel_even_cell_for_k1() {
        let seq = kernel_subsequence(1, KernelSpec { a: 1, b: 0 }, 4).unwrap();
        assert_eq!(seq, vec![2, 1, 2, 1]);
    }

    #[test]
    fn kernel_rejects_large_residue() {
        assert!(kernel_subsequence(1, KernelSpec { a: 1, b: 2 }, 4).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(128))]

        #[test]
        fn encode_inverts_decode_on_valid_words(
            k in 1u32..=4,
            raw in proptest::collection::vec(0u32..5, 1..40),
        ) {
            // fix up an arbitrary digit word into a valid one, then uniqueness
            // says encoding its value must reproduce it exactly
            let mut digits: Vec<u32> = raw.into_iter().map(|d| d.min(k)).collect();
            if digits[0] == 0 {
                digits[0] = 1;
            }
            let run = digits.iter().rev().take_while(|&&d| d == k).count();
            if run % 2 == 1 {
                if digits.len() == 1 {
                    digits.push(0);
                } else {
                    let last = digits.len() - 1;
                    digits[last] = 0;
                }
            }
            proptest::prop_assert!(is_valid(k, &digits));
            let mut codec = WCodec::new(k).unwrap();
            let value = codec.decode(&digits).unwrap();
            let again = codec.encode(&value).unwrap();
            proptest::prop_assert_eq!(again.digits(), &digits[..]);
        }

        #[test]
        fn round_trip_on_large_values(k in 1u32..=5, n in 1u64..=u64::MAX / 16) {
            let mut codec = WCodec::new(k).unwrap();
            let n = BigInt::from(n);
            let expansion = codec.encode(&n).unwrap();
            proptest::prop_assert!(is_valid(k, expansion.digits()));
            proptest::prop_assert_eq!(codec.decode(expansion.digits()).unwrap(), n);
        }
    }

    #[test]
    fn kernel_evidence_is_monotone() {
        let profile = kernel_evidence_profile(1, 3, 512).unwrap();
        assert_eq!(profile[0], 1);
        for pair in profile.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
        let shorter = kernel_evidence(1, 3, 256).unwrap();
        assert!(shorter <= *profile.last().unwrap());
        assert_eq!(
            kernel_evidence_seq(1, 3, 512).unwrap(),
            *profile.last().unwrap()
        );
    }
}
