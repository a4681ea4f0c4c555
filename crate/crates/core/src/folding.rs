//! The period-k-folding morphism family and the exact checks tying its
//! fixed point, the associated `{1, 2}` word, and the generated sum-free set
//! together.
//!
//! Every check compares two independently generated prefixes letter for
//! letter and reports the first mismatching index.

use crate::sumfree::{gap_counters, BitSet, SumFreeTrace, SYM_ONE, SYM_STAR, SYM_ZERO};
use crate::words::{fixed_point, gamma_letters, morphic_image_prefix, Letter, Morphism, MorphicStream};
use crate::{Error, Verdict};

/// The morphisms and codings attached to one folding parameter `k >= 1`.
///
/// `sigma` acts on `{0, 1}`, `tau` and `sigma_hat` on `{1, 2}`. The codings
/// `rho1` (`1 -> k+2`, `2 -> 2k+4`) and `rho2` (`1 -> k`, `2 -> 2k+1`)
/// translate `{1, 2}` words into gap alphabets. `rho3`, `rho4`, `rho8` exist
/// only at `k = 1`.
pub struct FoldingFamily {
    k: u32,
    sigma: Morphism,
    tau: Morphism,
    rho0: Morphism,
    rho1: Morphism,
    rho2: Morphism,
    sigma_hat: Morphism,
    rho3: Option<Morphism>,
    rho4: Option<Morphism>,
    rho8: Option<Morphism>,
}

impl FoldingFamily {
    pub fn new(k: u32) -> Result<Self, Error> {
        if k < 1 {
            return Err(Error::Parameter("folding parameter k must be >= 1".into()));
        }
        let ku = k as usize;
        let kl = k as Letter;

        // sigma_k: 0 -> 0^k 1, 1 -> 0^{k+1}
        let mut sigma_zero = vec![0; ku];
        sigma_zero.push(1);
        let sigma_one = vec![0; ku + 1];
        let sigma = Morphism::from_images(&[(0, &sigma_zero[..]), (1, &sigma_one[..])])?;

        // tau_k: 1 -> 1^{k-1} 2, 2 -> 1^{k-1} 2 1^{k+1}
        let mut tau_one = vec![1; ku - 1];
        tau_one.push(2);
        let mut tau_two = tau_one.clone();
        tau_two.extend(std::iter::repeat_n(1, ku + 1));
        let tau = Morphism::from_images(&[(1, &tau_one[..]), (2, &tau_two[..])])?;

        // rho0: 0 -> 1^{k-1} 2, 1 -> 1^{k+1}
        let rho0_one = vec![1; ku + 1];
        let rho0 = Morphism::from_images(&[(0, &tau_one[..]), (1, &rho0_one[..])])?;

        let rho1 = Morphism::coding(&[(1, kl + 2), (2, 2 * kl + 4)])?;
        let rho2 = Morphism::coding(&[(1, kl), (2, 2 * kl + 1)])?;

        // sigma_hat_k: 1 -> 1 (1^{k-1} 2)^k 1^k, 2 -> 1 (1^{k-1} 2)^{2k+1} 1^k
        let block = &tau_one;
        let mut hat_one = vec![1];
        for _ in 0..ku {
            hat_one.extend_from_slice(block);
        }
        hat_one.extend(std::iter::repeat_n(1, ku));
        let mut hat_two = vec![1];
        for _ in 0..2 * ku + 1 {
            hat_two.extend_from_slice(block);
        }
        hat_two.extend(std::iter::repeat_n(1, ku));
        let sigma_hat = Morphism::from_images(&[(1, &hat_one[..]), (2, &hat_two[..])])?;

        let (rho3, rho4, rho8) = if k == 1 {
            (
                Some(Morphism::from_images(&[(0, &[3, 1, 1][..]), (1, &[3, 3][..])])?),
                Some(Morphism::from_images(&[(0, &[4, 1, 1][..]), (1, &[4, 2][..])])?),
                Some(Morphism::from_images(&[(0, &[8, 3, 3][..]), (1, &[8, 6][..])])?),
            )
        } else {
            (None, None, None)
        };

        Ok(FoldingFamily {
            k,
            sigma,
            tau,
            rho0,
            rho1,
            rho2,
            sigma_hat,
            rho3,
            rho4,
            rho8,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn sigma(&self) -> &Morphism {
        &self.sigma
    }

    pub fn tau(&self) -> &Morphism {
        &self.tau
    }

    pub fn rho0(&self) -> &Morphism {
        &self.rho0
    }

    pub fn rho1(&self) -> &Morphism {
        &self.rho1
    }

    pub fn rho2(&self) -> &Morphism {
        &self.rho2
    }

    pub fn rho3(&self) -> Option<&Morphism> {
        self.rho3.as_ref()
    }

    pub fn rho4(&self) -> Option<&Morphism> {
        self.rho4.as_ref()
    }

    pub fn rho8(&self) -> Option<&Morphism> {
        self.rho8.as_ref()
    }

    pub fn sigma_hat(&self) -> &Morphism {
        &self.sigma_hat
    }

    /// The folding word itself: fixed point of `sigma` at 0. 0-based.
    pub fn pkf(&self) -> MorphicStream {
        fixed_point(&self.sigma, 0).expect("sigma_k is prolongable at 0")
    }

    /// Fixed point of `tau` at 1 (via the fallback letter when k = 1). 0-based.
    pub fn tau_stream(&self) -> MorphicStream {
        fixed_point(&self.tau, 1).expect("tau_k has an iterative fixed point from 1")
    }

    /// Fixed point of `sigma_hat` at 1. 0-based.
    pub fn sigma_hat_stream(&self) -> MorphicStream {
        fixed_point(&self.sigma_hat, 1).expect("sigma_hat_k is prolongable at 1")
    }

    /// Trace of the construction run on the folding word, extended until the
    /// set prefix holds at least `terms` elements.
    pub fn trace_with_terms(&self, terms: usize) -> SumFreeTrace {
        let mut trace = SumFreeTrace::new(self.pkf());
        trace.extend_to_terms(terms);
        trace
    }
}

/// The folding word as a stream (0-based).
pub fn pkf_stream(k: u32) -> Result<MorphicStream, Error> {
    Ok(FoldingFamily::new(k)?.pkf())
}

fn compare_letters(lhs: &[Letter], rhs: &[Letter], base: u64, what: &str) -> Verdict {
    debug_assert_eq!(lhs.len(), rhs.len());
    for (i, (&a, &b)) in lhs.iter().zip(rhs).enumerate() {
        if a != b {
            return Verdict::fail(
                base + i as u64,
                format!("{what}: left has {a}, right has {b}"),
            );
        }
    }
    Verdict::Pass
}

/// Checks the defining recurrence of the folding word: writing an index as
/// `(k+1)n + j` with `0 <= j <= k`, the letter is 0 for `j < k` and the
/// complement of letter `n` for `j = k`; all indices below `limit`.
pub fn check_gpd(k: u32, limit: u64) -> Result<Verdict, Error> {
    if limit < 1 {
        return Err(Error::Parameter("limit must be >= 1".into()));
    }
    let fam = FoldingFamily::new(k)?;
    let mut stream = fam.pkf();
    let p = stream.prefix_letters(limit as usize);
    let step = (k + 1) as u64;
    for idx in 0..limit {
        let (n, j) = (idx / step, idx % step);
        let expected = if j < k as u64 {
            0
        } else {
            1 - p[n as usize]
        };
        if p[idx as usize] != expected {
            return Ok(Verdict::fail(
                idx,
                format!("recurrence expects {expected}, stream has {}", p[idx as usize]),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// Checks that the `{1, 2}` fixed point is the image of the folding word
/// under the non-uniform projection `0 -> 1^{k-1} 2`, `1 -> 1^{k+1}`; for
/// `k = 1` the variant projection `0 -> 211`, `1 -> 22` is checked as well.
pub fn check_projection(k: u32, n: u64) -> Result<Verdict, Error> {
    if n < 1 {
        return Err(Error::Parameter("prefix length must be >= 1".into()));
    }
    let fam = FoldingFamily::new(k)?;
    let lhs = fam.tau_stream().prefix_letters(n as usize).to_vec();
    let rhs = morphic_image_prefix(fam.rho0(), &mut fam.pkf(), n as usize)?;
    let direct = compare_letters(&lhs, &rhs, 0, "tau fixed point vs projected folding word");
    if !direct.is_pass() {
        return Ok(direct);
    }
    if k == 1 {
        let variant = fam.tau().compose(fam.rho0())?;
        let rhs = morphic_image_prefix(&variant, &mut fam.pkf(), n as usize)?;
        return Ok(compare_letters(
            &lhs,
            &rhs,
            0,
            "tau fixed point vs tau-composed projection",
        ));
    }
    Ok(Verdict::Pass)
}

/// Gap-map identity: `Gamma([sigma^n(0)]^j sigma(0)) = [rho2(tau^{n-1}(1))]^j`
/// for all `1 <= n <= n_max`, `1 <= j <= j_max`, letter-exact.
///
/// Note the inner iterate's argument is the letter 1: the variant with
/// argument k sometimes quoted for this identity does not hold letter for
/// letter, while the form above follows from the recursion on `n`.
pub fn check_gamma_identity(k: u32, n_max: u32, j_max: u32) -> Result<Verdict, Error> {
    let fam = FoldingFamily::new(k)?;
    let sigma_zero = fam.sigma().image(0)?.clone();
    let mut sigma_iter = fam.sigma().iterate(0, 1)?;
    let mut tau_iter = fam.tau().iterate(1, 0)?;
    for n in 1..=n_max {
        for j in 1..=j_max as usize {
            let word = sigma_iter.repeat(j).concat(&sigma_zero);
            let lhs = gamma_letters(word.letters())?;
            let rhs = fam.rho2().apply(&tau_iter)?.repeat(j);
            if lhs != rhs.letters() {
                let index = lhs
                    .iter()
                    .zip(rhs.letters())
                    .position(|(a, b)| a != b)
                    .unwrap_or(lhs.len().min(rhs.len())) as u64;
                return Ok(Verdict::fail(
                    index,
                    format!("gap-map identity fails at n={n}, j={j}"),
                ));
            }
        }
        sigma_iter = fam.sigma().apply(&sigma_iter)?;
        tau_iter = fam.tau().apply(&tau_iter)?;
    }
    Ok(Verdict::Pass)
}

/// Zero-gap counters equal the `rho2` coding of the `{1, 2}` fixed point,
/// on `n` terms (1-based).
pub fn check_mu_law(k: u32, n: u64) -> Result<Verdict, Error> {
    if n < 1 {
        return Err(Error::Parameter("need at least one gap term".into()));
    }
    let fam = FoldingFamily::new(k)?;
    let trace = fam.trace_with_terms(n as usize + 1);
    let counters = gap_counters(&trace)?;
    let tau_prefix = fam.tau_stream().prefix(n as usize);
    let coded = fam.rho2().apply(&tau_prefix)?;
    for i in 0..n as usize {
        let expected = coded.letters()[i] as u64;
        if counters.mu[i] != expected {
            return Ok(Verdict::fail(
                i as u64 + 1,
                format!("mu has {}, coding gives {expected}", counters.mu[i]),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// Star-gap counters: for `k >= 2` they reproduce the `{1, 2}` fixed point
/// itself; for `k = 1`, after overriding the first value with 4, they are the
/// `0 -> 411, 1 -> 42` image of the folding word.
pub fn check_alpha_law(k: u32, n: u64) -> Result<Verdict, Error> {
    if n < 1 {
        return Err(Error::Parameter("need at least one gap term".into()));
    }
    let fam = FoldingFamily::new(k)?;
    let trace = fam.trace_with_terms(n as usize + 1);
    let counters = gap_counters(&trace)?;
    if k >= 2 {
        let mut tau_stream = fam.tau_stream();
        let tau_prefix = tau_stream.prefix_letters(n as usize);
        for (i, (&alpha, &letter)) in counters.alpha.iter().zip(tau_prefix).enumerate() {
            if alpha != letter as u64 {
                return Ok(Verdict::fail(
                    i as u64 + 1,
                    format!("alpha has {alpha}, tau letter is {letter}"),
                ));
            }
        }
    } else {
        let rho4 = fam.rho4().expect("rho4 exists at k = 1");
        let rhs = morphic_image_prefix(rho4, &mut fam.pkf(), n as usize)?;
        let mut alpha_prime = counters.alpha.clone();
        alpha_prime[0] = 4;
        for i in 0..n as usize {
            if alpha_prime[i] != rhs[i] as u64 {
                return Ok(Verdict::fail(
                    i as u64 + 1,
                    format!("alpha' has {}, image has {}", alpha_prime[i], rhs[i]),
                ));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Star positions in the annotation of the folding trace. For `k >= 2` stars
/// sit exactly at positions congruent to `k` modulo `k + 2` — except position
/// `k` itself, which precedes the smallest realizable sum `2k + 2`. For
/// `k = 1` the pattern has period 14 from position 14 on: stars at offsets
/// `{0, 1, 3, 6, 9, 12}`, a forced zero at offset 4, and members at offsets
/// 7 and 13.
pub fn check_star_positions(k: u32, frontier: u64) -> Result<Verdict, Error> {
    let fam = FoldingFamily::new(k)?;
    let mut trace = SumFreeTrace::new(fam.pkf());
    trace.extend_to_frontier(frontier);
    let v = trace.v();
    if k >= 2 {
        let modulus = (k + 2) as u64;
        for n in 1..=frontier {
            let is_star = v[n as usize - 1] == SYM_STAR;
            let should_star = n % modulus == k as u64 && n > k as u64;
            if is_star != should_star {
                return Ok(Verdict::fail(
                    n,
                    format!("star expected: {should_star}, annotation has star: {is_star}"),
                ));
            }
        }
        return Ok(Verdict::Pass);
    }
    const STAR_OFFSETS: [u64; 6] = [0, 1, 3, 6, 9, 12];
    for pos in 14..=frontier {
        let (n, j) = (pos / 14, pos % 14);
        if n < 1 {
            continue;
        }
        let letter = v[pos as usize - 1];
        let should_star = STAR_OFFSETS.contains(&j);
        if (letter == SYM_STAR) != should_star {
            return Ok(Verdict::fail(
                pos,
                format!("period-14 star pattern violated at offset {j}"),
            ));
        }
        let expected = match j {
            4 => Some(SYM_ZERO),
            7 | 13 => Some(SYM_ONE),
            _ => None,
        };
        if let Some(expected) = expected {
            if letter != expected {
                return Ok(Verdict::fail(
                    pos,
                    format!("offset {j} must hold letter {expected}, found {letter}"),
                ));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Difference sequence of the k = 1 sum-free set: with the first difference
/// overridden to 8, it is the `0 -> 833, 1 -> 86` image of the folding word.
pub fn check_theorem_a(n: u64) -> Result<Verdict, Error> {
    if n < 2 {
        return Err(Error::Parameter("need at least two difference terms".into()));
    }
    let fam = FoldingFamily::new(1)?;
    let trace = fam.trace_with_terms(n as usize + 1);
    let mut d = trace.differences();
    d[0] = 8;
    let rho8 = fam.rho8().expect("rho8 exists at k = 1");
    let rhs = morphic_image_prefix(rho8, &mut fam.pkf(), n as usize)?;
    for i in 0..n as usize {
        if d[i] != rhs[i] as u64 {
            return Ok(Verdict::fail(
                i as u64 + 1,
                format!("difference {} vs image letter {}", d[i], rhs[i]),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// Difference sequence of the sum-free set for `k >= 2`: it is the coding
/// `1 -> k+2, 2 -> 2k+4` of the `{1, 2}` fixed point; the first two members
/// are `k + 1` and `2k + 3`.
pub fn check_theorem_b(k: u32, n: u64) -> Result<Verdict, Error> {
    if n < 1 {
        return Err(Error::Parameter("need at least one difference term".into()));
    }
    if k < 2 {
        return Err(Error::Parameter(
            "difference coding requires k >= 2; k = 1 has its own check".into(),
        ));
    }
    let fam = FoldingFamily::new(k)?;
    let trace = fam.trace_with_terms(n as usize + 1);
    let s = trace.members();
    if s[0] != (k + 1) as u64 {
        return Ok(Verdict::fail(1, format!("first member is {}, expected {}", s[0], k + 1)));
    }
    if s[1] != (2 * k + 3) as u64 {
        return Ok(Verdict::fail(2, format!("second member is {}, expected {}", s[1], 2 * k + 3)));
    }
    let d = trace.differences();
    let tau_prefix = fam.tau_stream().prefix(n as usize);
    let coded = fam.rho1().apply(&tau_prefix)?;
    for (i, (&diff, &letter)) in d.iter().zip(coded.letters()).enumerate() {
        if diff != letter as u64 {
            return Ok(Verdict::fail(
                i as u64 + 1,
                format!("difference {diff} vs coded letter {letter}"),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// The fixed point of `sigma_hat` reproduces the `{1, 2}` fixed point with a
/// single extra leading 1.
pub fn check_complement(k: u32, n: u64) -> Result<Verdict, Error> {
    if n < 1 {
        return Err(Error::Parameter("need at least one letter".into()));
    }
    let fam = FoldingFamily::new(k)?;
    let lhs = fam.sigma_hat_stream().prefix_letters(n as usize).to_vec();
    if lhs[0] != 1 {
        return Ok(Verdict::fail(0, "fixed point must start with 1".to_string()));
    }
    let rhs = fam.tau_stream().prefix_letters(n as usize - 1).to_vec();
    Ok(compare_letters(
        &lhs[1..],
        &rhs,
        1,
        "sigma_hat fixed point vs shifted tau fixed point",
    ))
}

/// Partial sums of the `sigma_hat` fixed point form a set containing `n`
/// exactly when it misses `(k+1) n`, checked for `1 <= n <= limit`.
pub fn check_membership(k: u32, limit: u64) -> Result<Verdict, Error> {
    let fam = FoldingFamily::new(k)?;
    let mut stream = fam.sigma_hat_stream();
    let bound = (k as u64 + 1) * limit;
    let mut set = BitSet::default();
    let mut total = 0u64;
    let mut i = 0;
    while total <= bound {
        total += stream.letter(i) as u64;
        set.insert(total);
        i += 1;
    }
    for n in 1..=limit {
        let in_set = set.contains(n);
        let scaled_in_set = set.contains((k as u64 + 1) * n);
        if in_set == scaled_in_set {
            return Ok(Verdict::fail(
                n,
                format!("membership of {n} is {in_set}, of {} is {scaled_in_set}", (k as u64 + 1) * n),
            ));
        }
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pkf_examples() {
        let mut p1 = pkf_stream(1).unwrap();
        assert_eq!(p1.prefix_letters(8), &[0, 1, 0, 0, 0, 1, 0, 1]);
        let mut p2 = pkf_stream(2).unwrap();
        assert_eq!(p2.prefix_letters(9), &[0, 0, 1, 0, 0, 1, 0, 0, 0]);
        for k in 1..=5 {
            let mut p = pkf_stream(k).unwrap();
            assert_eq!(p.letter(0), 0, "stream for k={k} must start with 0");
            assert_eq!(p.letter(k as usize), 1, "first 1 sits at position k");
        }
    }

    #[test]
    fn pkf_rejects_zero() {
        assert!(pkf_stream(0).is_err());
    }

    #[test]
    fn gpd_recurrence_holds() {
        assert!(check_gpd(1, 10_000).unwrap().is_pass());
        assert!(check_gpd(2, 10_000).unwrap().is_pass());
        assert!(check_gpd(5, 5_000).unwrap().is_pass());
    }

    #[test]
    fn projection_identity_holds() {
        assert!(check_projection(2, 10_000).unwrap().is_pass());
        assert!(check_projection(1, 10_000).unwrap().is_pass());
        assert!(check_projection(4, 5_000).unwrap().is_pass());
    }

    #[test]
    fn gamma_identity_small_grid() {
        for k in 1..=4 {
            assert!(
                check_gamma_identity(k, 5, 3).unwrap().is_pass(),
                "gap-map identity failed for k={k}"
            );
        }
    }

    #[test]
    fn mu_matches_coded_tau() {
        assert!(check_mu_law(1, 1_000).unwrap().is_pass());
        assert!(check_mu_law(2, 1_000).unwrap().is_pass());
        // mu_1 reads off the first letter of the {1,2} fixed point: k when
        // that letter is 1 (k >= 2), and 2k + 1 = 3 when it is 2 (k = 1).
        for k in 1..=5 {
            let fam = FoldingFamily::new(k).unwrap();
            let trace = fam.trace_with_terms(2);
            let g = gap_counters(&trace).unwrap();
            let expected = if k >= 2 { k as u64 } else { 3 };
            assert_eq!(g.mu[0], expected);
        }
    }

    #[test]
    fn mu_prefixes_match_reported_values() {
        let fam = FoldingFamily::new(1).unwrap();
        let g = gap_counters(&fam.trace_with_terms(6)).unwrap();
        assert_eq!(&g.mu[..5], &[3, 1, 1, 3, 3]);
        assert_eq!(&g.alpha[..5], &[1, 1, 1, 4, 2]);

        let fam = FoldingFamily::new(2).unwrap();
        let g = gap_counters(&fam.trace_with_terms(8)).unwrap();
        assert_eq!(&g.mu[..7], &[2, 5, 2, 5, 2, 2, 2]);
        assert_eq!(&g.alpha[..7], &[1, 2, 1, 2, 1, 1, 1]);
    }

    #[test]
    fn rho3_is_the_composed_projection() {
        // rho3 = rho2 . tau . rho0 at k = 1 (0 -> 311, 1 -> 33)
        let fam = FoldingFamily::new(1).unwrap();
        let composed = fam.rho2().compose(&fam.tau().compose(fam.rho0()).unwrap()).unwrap();
        let rho3 = fam.rho3().unwrap();
        for letter in [0, 1] {
            assert_eq!(
                composed.image(letter).unwrap().letters(),
                rho3.image(letter).unwrap().letters()
            );
        }
        assert!(FoldingFamily::new(2).unwrap().rho3().is_none());
    }

    #[test]
    fn annotation_prefix_for_k2() {
        let fam = FoldingFamily::new(2).unwrap();
        let mut trace = SumFreeTrace::new(fam.pkf());
        trace.extend_to_frontier(15);
        assert_eq!(trace.v_string(), "00100*100*000*1");
    }

    #[test]
    fn alpha_characterizations_hold() {
        assert!(check_alpha_law(2, 1_000).unwrap().is_pass());
        assert!(check_alpha_law(3, 500).unwrap().is_pass());
        assert!(check_alpha_law(1, 1_000).unwrap().is_pass());
    }

    #[test]
    fn alpha_prime_prefix_for_k1() {
        let fam = FoldingFamily::new(1).unwrap();
        let rho4 = fam.rho4().unwrap();
        let rhs = morphic_image_prefix(rho4, &mut fam.pkf(), 5).unwrap();
        assert_eq!(rhs, &[4, 1, 1, 4, 2]);
    }

    #[test]
    fn star_positions_hold() {
        assert!(check_star_positions(1, 10_000).unwrap().is_pass());
        assert!(check_star_positions(2, 10_000).unwrap().is_pass());
        assert!(check_star_positions(3, 5_000).unwrap().is_pass());
    }

    #[test]
    fn theorem_a_difference_word() {
        assert!(check_theorem_a(2_000).unwrap().is_pass());
        let fam = FoldingFamily::new(1).unwrap();
        let trace = fam.trace_with_terms(9);
        let mut d = trace.differences();
        // the raw first difference is 5; the statement overrides it to 8
        assert_eq!(d[0], 5);
        d[0] = 8;
        assert_eq!(&d[..8], &[8, 3, 3, 8, 6, 8, 3, 3]);
        assert!(d.iter().all(|&x| x == 8 || x == 3 || x == 6));
    }

    #[test]
    fn theorem_b_difference_coding() {
        assert!(check_theorem_b(2, 2_000).unwrap().is_pass());
        assert!(check_theorem_b(3, 1_000).unwrap().is_pass());
        assert!(check_theorem_b(1, 100).is_err());
        let fam = FoldingFamily::new(2).unwrap();
        let d = fam.trace_with_terms(8).differences();
        assert_eq!(&d[..7], &[4, 8, 4, 8, 4, 4, 4]);
    }

    #[test]
    fn pairwise_sums_of_members_are_congruent_to_k() {
        // Every realized sum of the constructed set prefix is congruent to k
        // modulo k + 2 (k >= 2).
        for k in 2..=4u32 {
            let fam = FoldingFamily::new(k).unwrap();
            let trace = fam.trace_with_terms(60);
            let s = trace.members();
            for (i, &x) in s.iter().enumerate() {
                for &y in &s[i..] {
                    assert_eq!(
                        (x + y) % (k as u64 + 2),
                        k as u64,
                        "sum {x}+{y} escapes the residue class for k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn complement_fixed_point() {
        let fam = FoldingFamily::new(1).unwrap();
        assert_eq!(fam.sigma_hat().image(1).unwrap().render(), "121");
        assert_eq!(fam.sigma_hat().image(2).unwrap().render(), "12221");
        let mut s = fam.sigma_hat_stream();
        assert_eq!(s.prefix_letters(6), &[1, 2, 1, 1, 2, 2]);
        assert!(check_complement(1, 5_000).unwrap().is_pass());
        assert!(check_complement(3, 5_000).unwrap().is_pass());
    }

    #[test]
    fn membership_property() {
        let fam = FoldingFamily::new(1).unwrap();
        let mut stream = fam.sigma_hat_stream();
        let mut c = Vec::new();
        let mut total = 0u64;
        for i in 0..6 {
            total += stream.letter(i) as u64;
            c.push(total);
        }
        assert_eq!(c, &[1, 3, 4, 5, 7, 9]);
        assert!(check_membership(1, 2_000).unwrap().is_pass());
        assert!(check_membership(2, 2_000).unwrap().is_pass());
    }
}
