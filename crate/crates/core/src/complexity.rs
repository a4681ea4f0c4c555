//! Subword-complexity profiles.
//!
//! Distinct-factor counts for every length up to `n_max` come from one suffix
//! array of the prefix plus its adjacent-suffix common-prefix lengths: the
//! number of distinct factors of length `n` is the number of suffixes long
//! enough to carry one, minus the adjacent pairs agreeing on at least `n`
//! letters. Exact for every length at once, no hashing involved.
//!
//! Profiles of infinite words use a doubling heuristic: the prefix is doubled
//! until the whole count vector survives two consecutive doublings, and each
//! count carries a per-length stabilized flag. Stabilization is evidence, not
//! proof, and results say which prefix they were computed from.

use crate::folding::FoldingFamily;
use crate::words::{Letter, MorphicStream};
use crate::Error;

#[cfg(feature = "parallel")]
use rayon::slice::ParallelSliceMut;

/// Distinct-factor counts `f_1 .. f_n_max` of a finite word, exact.
pub fn factor_counts(word: &[Letter], n_max: usize) -> Vec<u64> {
    counts_from_suffixes(word, n_max, cfg!(feature = "parallel"))
}

/// Sequential twin of `factor_counts`, kept callable for benchmarks.
pub fn factor_counts_seq(word: &[Letter], n_max: usize) -> Vec<u64> {
    counts_from_suffixes(word, n_max, false)
}

fn counts_from_suffixes(word: &[Letter], n_max: usize, parallel: bool) -> Vec<u64> {
    let len = word.len();
    let bounded = n_max.min(len);
    if bounded == 0 {
        return vec![0; n_max];
    }
    let sa = suffix_array(word, parallel);
    let lcp = lcp_kasai(word, &sa);

    // histogram of common-prefix lengths, clamped at the largest length asked
    let mut at_least = vec![0u64; bounded + 2];
    for &l in &lcp {
        at_least[(l as usize).min(bounded)] += 1;
    }
    for i in (0..=bounded).rev() {
        at_least[i] += at_least[i + 1];
    }

    let mut f = Vec::with_capacity(n_max);
    f.extend((1..=bounded).map(|n| (len - n + 1) as u64 - at_least[n]));
    f.resize(n_max, 0);
    f
}

/// Suffix array by rank doubling. Ranks start from the letters themselves.
fn suffix_array(word: &[Letter], parallel: bool) -> Vec<u32> {
    let n = word.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = word.to_vec();
    let mut next_rank = vec![0u32; n];
    let mut step = 1usize;
    loop {
        let key = |i: u32| -> (u32, u32) {
            let second = rank
                .get(i as usize + step)
                .map_or(0, |&r| r + 1);
            (rank[i as usize], second)
        };
        sort_by_key(&mut sa, key, parallel);
        next_rank[sa[0] as usize] = 0;
        for i in 1..n {
            let bump = (key(sa[i]) != key(sa[i - 1])) as u32;
            next_rank[sa[i] as usize] = next_rank[sa[i - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut next_rank);
        if rank[sa[n - 1] as usize] as usize == n - 1 || step >= n {
            break;
        }
        step *= 2;
    }
    sa
}

#[cfg(feature = "parallel")]
fn sort_by_key<F>(sa: &mut [u32], key: F, parallel: bool)
where
    F: Fn(u32) -> (u32, u32) + Sync,
{
    if parallel && sa.len() >= 1 << 14 {
        sa.par_sort_unstable_by_key(|&i| key(i));
    } else {
        sa.sort_unstable_by_key(|&i| key(i));
    }
}

#[cfg(not(feature = "parallel"))]
fn sort_by_key<F>(sa: &mut [u32], key: F, _parallel: bool)
where
    F: Fn(u32) -> (u32, u32) + Sync,
{
    sa.sort_unstable_by_key(|&i| key(i));
}

/// Common-prefix lengths of adjacent sorted suffixes (first entry 0).
fn lcp_kasai(word: &[Letter], sa: &[u32]) -> Vec<u32> {
    let n = word.len();
    let mut rank_of = vec![0u32; n];
    for (pos, &suffix) in sa.iter().enumerate() {
        rank_of[suffix as usize] = pos as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank_of[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && word[i + h] == word[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Complexity values of an infinite word on a finite prefix, with per-length
/// stabilization flags and the prefix length that produced them.
#[derive(Debug, Clone)]
pub struct ComplexityProfile {
    pub f: Vec<u64>,
    pub stabilized: Vec<bool>,
    pub prefix_len: usize,
}

impl ComplexityProfile {
    pub fn n_max(&self) -> usize {
        self.f.len()
    }

    pub fn all_stabilized(&self) -> bool {
        self.stabilized.iter().all(|&s| s)
    }

    /// Differences `f_{n+1} - f_n` for `n = 1 ..`. One entry shorter than `f`.
    pub fn differences(&self) -> Vec<u64> {
        self.f.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Longest range of differences with both endpoints stabilized.
    pub fn stabilized_difference_len(&self) -> usize {
        let stable_prefix = self.stabilized.iter().take_while(|&&s| s).count();
        stable_prefix.saturating_sub(1)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ComplexityOptions {
    pub initial_prefix: usize,
    pub max_prefix: usize,
}

impl Default for ComplexityOptions {
    fn default() -> Self {
        ComplexityOptions {
            initial_prefix: 1 << 12,
            max_prefix: 1 << 24,
        }
    }
}

/// Counts factors of each length `1..=n_max` on growing prefixes of `stream`,
/// doubling until every count is unchanged across two consecutive doublings
/// or the prefix cap is reached. Each `f_n` is flagged stabilized when its
/// own value survived the last two doublings.
pub fn subword_complexity(
    stream: &mut MorphicStream,
    n_max: usize,
    opts: ComplexityOptions,
) -> ComplexityProfile {
    let mut prefix_len = opts.initial_prefix.max(n_max).max(2);
    let mut f = factor_counts(stream.prefix_letters(prefix_len), n_max);
    let mut unchanged = vec![0u32; n_max];
    loop {
        if unchanged.iter().all(|&c| c >= 2) || prefix_len >= opts.max_prefix {
            let stabilized = unchanged.iter().map(|&c| c >= 2).collect();
            return ComplexityProfile {
                f,
                stabilized,
                prefix_len,
            };
        }
        prefix_len = (prefix_len * 2).min(opts.max_prefix);
        let next = factor_counts(stream.prefix_letters(prefix_len), n_max);
        for i in 0..n_max {
            if next[i] == f[i] {
                unchanged[i] += 1;
            } else {
                unchanged[i] = 0;
            }
        }
        f = next;
    }
}

/// Run-length encoding of the difference word as alternating runs of 1's and
/// 2's, starting with the (possibly empty) leading 1-run. Only complete runs
/// are reported; the unfinished final run is dropped. Any difference outside
/// `{1, 2}` within the stabilized range is a pattern violation.
pub fn run_lengths(profile: &ComplexityProfile) -> Result<Vec<u64>, Error> {
    let d = profile.differences();
    let usable = profile.stabilized_difference_len().min(d.len());
    runs_of(&d[..usable])
}

fn runs_of(d: &[u64]) -> Result<Vec<u64>, Error> {
    let mut runs = Vec::new();
    let mut current = 1u64;
    let mut len = 0u64;
    for (i, &value) in d.iter().enumerate() {
        if value != 1 && value != 2 {
            return Err(Error::PatternViolation {
                index: i as u64 + 1,
                value,
            });
        }
        if value == current {
            len += 1;
        } else {
            runs.push(len);
            current = value;
            len = 1;
        }
    }
    Ok(runs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjectureOutcome {
    Pass,
    Fail { index: u64, detail: String },
    /// The prefix cap was reached before enough stabilized runs existed.
    Unstable,
}

/// Everything a conjecture check produced: the stabilized complexity values,
/// their differences, the extracted run lengths, and the verdict on the
/// recurrences.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub k: u32,
    pub f: Vec<u64>,
    pub d: Vec<u64>,
    pub a: Vec<u64>,
    pub prefix_len: usize,
    pub stabilized: bool,
    pub outcome: ConjectureOutcome,
}

/// Computes enough stabilized complexity values of the `{1, 2}` fixed point
/// to extract `m` complete runs, then checks the run-length recurrences:
/// `a_1 = k - 1`, `a_2 = k`, `a_{2n} = a_{2n-1} + a_{2n-2}` and
/// `a_{2n+1} = k a_{2n} + k (-1)^n`.
pub fn check_conjecture(k: u32, m: usize) -> Result<ConjectureReport, Error> {
    check_conjecture_with(k, m, ComplexityOptions::default())
}

pub fn check_conjecture_with(
    k: u32,
    m: usize,
    opts: ComplexityOptions,
) -> Result<ConjectureReport, Error> {
    if m < 2 {
        return Err(Error::Parameter("need at least two runs".into()));
    }
    let fam = FoldingFamily::new(k)?;
    let mut n_max = 64usize.max(8 * m);
    loop {
        let mut stream = fam.tau_stream();
        let profile = subword_complexity(&mut stream, n_max, opts);
        let d = profile.differences();
        let usable = profile.stabilized_difference_len().min(d.len());
        let runs = match runs_of(&d[..usable]) {
            Ok(runs) => runs,
            Err(Error::PatternViolation { index, value }) => {
                return Ok(ConjectureReport {
                    k,
                    f: profile.f,
                    d,
                    a: Vec::new(),
                    prefix_len: profile.prefix_len,
                    stabilized: false,
                    outcome: ConjectureOutcome::Fail {
                        index,
                        detail: format!("difference {value} outside {{1, 2}}"),
                    },
                });
            }
            Err(e) => return Err(e),
        };
        if runs.len() < m {
            if profile.prefix_len >= opts.max_prefix && !profile.all_stabilized() {
                return Ok(ConjectureReport {
                    k,
                    f: profile.f,
                    d,
                    a: runs,
                    prefix_len: profile.prefix_len,
                    stabilized: false,
                    outcome: ConjectureOutcome::Unstable,
                });
            }
            n_max *= 2;
            continue;
        }
        let a = runs[..m].to_vec();
        let outcome = verify_runs(k, &a);
        let needed: u64 = a.iter().sum::<u64>() + 1;
        return Ok(ConjectureReport {
            k,
            f: profile.f[..(needed as usize + 1).min(profile.f.len())].to_vec(),
            d: d[..(needed as usize).min(d.len())].to_vec(),
            a,
            prefix_len: profile.prefix_len,
            stabilized: true,
            outcome,
        });
    }
}

fn verify_runs(k: u32, a: &[u64]) -> ConjectureOutcome {
    let fail = |i: usize, expected: u64, got: u64| ConjectureOutcome::Fail {
        index: i as u64,
        detail: format!("a_{i} = {got}, recurrence expects {expected}"),
    };
    if a[0] != (k - 1) as u64 {
        return fail(1, (k - 1) as u64, a[0]);
    }
    if a.len() >= 2 && a[1] != k as u64 {
        return fail(2, k as u64, a[1]);
    }
    for i in 3..=a.len() {
        let expected = if i % 2 == 0 {
            a[i - 2] + a[i - 3]
        } else {
            let n = (i - 1) / 2;
            let signed = k as i64 * a[i - 2] as i64 + k as i64 * if n % 2 == 0 { 1 } else { -1 };
            signed as u64
        };
        if a[i - 1] != expected {
            return fail(i, expected, a[i - 1]);
        }
    }
    ConjectureOutcome::Pass
}
