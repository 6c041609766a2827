//! Closed-form analytics: capture probability, AoI lower bound, the
//! stationary network-AoI distribution and the optimal activation
//! probability.
//!
//! Under any policy, a given device's age drops only in slots where some
//! relay captures its update and the update reaches the access point. With
//! error-free forwarding of every capture (the genie-aided oracle), the
//! per-device delivery process is Bernoulli with rate p * Q, where Q is
//! the probability that an update transmitted this slot is captured by at
//! least one relay. The device age is then geometric, giving average and
//! peak AoI of 1 / (p * Q); no causal policy beats either, so this is the
//! bound simulated policies are compared against. The network-wide mean
//! age (sum of N iid geometrics, scaled by N) is negative binomial on the
//! lattice {s / N}, which yields the analytic CCDF curves.
//!
//! Numerics: probabilities are built from multiplicative recurrences, and
//! anything factorial-shaped runs in the log domain once it leaves the
//! exactly-representable range.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("bound is not unimodal on the activation grid near p = {0}")]
    NotUnimodal(f64),
    #[error("delivery rate p * Q = {0} admits no stationary distribution")]
    NoStationaryDistribution(f64),
}

/// ln Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
/// Absolute error below 1e-13 over the range used here.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Reflection keeps the approximation in its sweet spot.
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Binomial pmf C(n, k) p^k (1-p)^(n-k) by multiplicative recurrence from
/// the k = 0 end (mirrored for p > 1/2 so the base never underflows).
pub fn binomial_pmf(k: u32, n: u32, p: f64) -> f64 {
    assert!(k <= n, "binomial_pmf: k = {k} > n = {n}");
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    if p > 0.5 {
        return binomial_pmf(n - k, n, 1.0 - p);
    }
    let mut v = (1.0 - p).powi(n as i32);
    let ratio = p / (1.0 - p);
    for j in 0..k {
        v *= (n - j) as f64 / (j + 1) as f64 * ratio;
    }
    v
}

/// Probability that `n` of the other N-1 devices are active.
pub fn prob_n_active(n: u32, n_eds: u32, activation_prob: f64) -> f64 {
    binomial_pmf(n, n_eds - 1, activation_prob)
}

/// Probability that `u` of `n` active interferers picked our channel.
pub fn prob_u_same_channel(u: u32, n: u32, n_channels: u32) -> f64 {
    binomial_pmf(u, n, 1.0 / n_channels as f64)
}

/// Probability one relay captures our update against `u` co-channel
/// interferers: our link survives and all `u` interfering links fade.
pub fn single_relay_capture(u: u32, erasure_p1: f64) -> f64 {
    (1.0 - erasure_p1) * erasure_p1.powi(u as i32)
}

/// Network parameters the closed forms depend on. The bound assumes a
/// homogeneous phase-1 erasure; heterogeneous runs are compared against
/// the bound at their mean erasure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    pub n_eds: u32,
    pub activation_prob: f64,
    pub n_channels: u32,
    pub n_relays: u32,
    pub erasure_p1: f64,
}

/// Probability Q that an update transmitted this slot is captured by at
/// least one of the K relays, averaged over the other devices' traffic.
pub fn success_prob(inp: &BoundInputs) -> f64 {
    let n_others = inp.n_eds - 1;
    let k = inp.n_relays as i32;
    // 1 - (1 - qt_u)^K for each possible interferer count.
    let capture_any: Vec<f64> = (0..=n_others)
        .map(|u| 1.0 - (1.0 - single_relay_capture(u, inp.erasure_p1)).powi(k))
        .collect();
    let mut q = 0.0;
    for n in 0..=n_others {
        let pn = prob_n_active(n, inp.n_eds, inp.activation_prob);
        if pn == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for u in 0..=n {
            inner += prob_u_same_channel(u, n, inp.n_channels) * capture_any[u as usize];
        }
        q += pn * inner;
    }
    q
}

/// The AoI lower bound: per-device deliveries at rate p * Q make the age
/// geometric, so average and peak AoI coincide at 1 / (p * Q).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundResult {
    /// Q, the any-relay capture probability.
    pub success_prob: f64,
    /// p * Q, the per-device delivery rate.
    pub delivery_rate: f64,
    pub aaoi: f64,
    pub paoi: f64,
}

impl BoundResult {
    /// The odds form p·Q / (1 − p·Q) the convolution closed forms factor
    /// through.
    pub fn p_ratio(&self) -> f64 {
        if self.delivery_rate >= 1.0 {
            f64::INFINITY
        } else {
            self.delivery_rate / (1.0 - self.delivery_rate)
        }
    }
}

pub fn aoi_bound(inp: &BoundInputs) -> BoundResult {
    let q = success_prob(inp);
    let rate = inp.activation_prob * q;
    let age = if rate > 0.0 { 1.0 / rate } else { f64::INFINITY };
    BoundResult {
        success_prob: q,
        delivery_rate: rate,
        aaoi: age,
        paoi: age,
    }
}

/// Stationary pmf of a single device's age under Bernoulli deliveries at
/// `delivery_rate`: geometric on {1, 2, ...}.
pub fn stationary_pmf(age: u64, delivery_rate: f64) -> f64 {
    if age == 0 {
        return 0.0;
    }
    if delivery_rate >= 1.0 {
        return if age == 1 { 1.0 } else { 0.0 };
    }
    delivery_rate * (1.0 - delivery_rate).powi((age - 1) as i32)
}

/// pmf of the sum of `n` iid geometric ages at `delta`: the closed-form
/// n-fold convolution
///   C(delta-1, n-1) * rate^n * (1-rate)^(delta-n),   delta >= n,
/// i.e. a negative binomial. Direct products while everything is exactly
/// representable, log domain beyond.
pub fn convolved_pmf_closed(n: u32, delta: u64, delivery_rate: f64) -> f64 {
    assert!(n >= 1);
    let rate = delivery_rate;
    if delta < n as u64 {
        return 0.0;
    }
    if rate >= 1.0 {
        return if delta == n as u64 { 1.0 } else { 0.0 };
    }
    if rate <= 0.0 {
        return 0.0;
    }
    if n <= 30 && delta <= 10_000 {
        let mut binom = 1.0;
        for j in 1..n as u64 {
            binom *= (delta - n as u64 + j) as f64 / j as f64;
        }
        binom * rate.powi(n as i32) * (1.0 - rate).powi((delta - n as u64) as i32)
    } else {
        let ln = (n as f64) * rate.ln()
            + ((delta - n as u64) as f64) * (-rate).ln_1p()
            + ln_gamma(delta as f64)
            - ln_gamma(n as f64)
            - ln_gamma((delta - n as u64 + 1) as f64);
        ln.exp()
    }
}

/// Lattice mass below which the network-AoI tail is truncated.
pub const TAIL_TRUNCATION: f64 = 1e-12;

/// Stationary distribution of the network AoI (the per-slot mean of the N
/// device ages). The underlying sum S of N iid geometrics lives on
/// {N, N+1, ...}; the network AoI is S / N. Built once per parameter
/// point by the pmf ratio recurrence and truncated at `TAIL_TRUNCATION`
/// residual mass.
#[derive(Clone, Debug)]
pub struct NetworkAoiDist {
    n_eds: u32,
    delivery_rate: f64,
    /// pmf[i] = Pr{S = N + i}. Kept alongside `cum` because differencing
    /// the cumulative loses the tail (absolute rounding near 1 swamps
    /// masses below ~1e-10).
    pmf: Vec<f64>,
    /// cum[i] = Pr{S <= N + i}.
    cum: Vec<f64>,
    mass_defect: f64,
}

impl NetworkAoiDist {
    pub fn build(n_eds: u32, delivery_rate: f64) -> Result<Self, AnalyticsError> {
        assert!(n_eds >= 1);
        let rate = delivery_rate;
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(AnalyticsError::NoStationaryDistribution(rate));
        }
        let n = n_eds as f64;
        if rate >= 1.0 {
            return Ok(NetworkAoiDist {
                n_eds,
                delivery_rate: rate,
                pmf: vec![1.0],
                cum: vec![1.0],
                mass_defect: 0.0,
            });
        }
        // Mean and std of S bound the grid we might need.
        let mean = n / rate;
        let sd = (n * (1.0 - rate)).sqrt() / rate;
        let cap = (mean + 80.0 * sd) as usize + 64;
        let mut pmf = Vec::with_capacity(cap.min(1 << 22));
        let mut cum = Vec::with_capacity(cap.min(1 << 22));
        let ln_decay = (-rate).ln_1p();
        let mut lp = n * rate.ln();
        let mut total = 0.0;
        let mut comp = 0.0; // Kahan compensation for the cumulative sum
        let mut s = n_eds as u64;
        loop {
            let p = lp.exp();
            pmf.push(p);
            let y = p - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
            cum.push(total);
            if 1.0 - total <= TAIL_TRUNCATION || cum.len() >= cap {
                break;
            }
            lp += ln_decay + (s as f64).ln() - ((s + 1 - n_eds as u64) as f64).ln();
            s += 1;
        }
        Ok(NetworkAoiDist {
            n_eds,
            delivery_rate: rate,
            mass_defect: (1.0 - total).max(0.0),
            pmf,
            cum,
        })
    }

    /// Pr{S = s} for the underlying integer sum.
    pub fn pmf_at(&self, s: u64) -> f64 {
        if s < self.n_eds as u64 {
            return 0.0;
        }
        let i = (s - self.n_eds as u64) as usize;
        self.pmf.get(i).copied().unwrap_or(0.0)
    }

    /// Pr{network AoI > delta} = Pr{S > delta * N}.
    pub fn ccdf(&self, delta: f64) -> f64 {
        let x = delta * self.n_eds as f64;
        if x < self.n_eds as f64 {
            return 1.0;
        }
        let s_le = x.floor() as u64;
        let i = (s_le - self.n_eds as u64) as usize;
        if i >= self.cum.len() {
            return self.mass_defect;
        }
        (1.0 - self.cum[i]).max(0.0)
    }

    /// Probability mass beyond the truncated grid.
    pub fn mass_defect(&self) -> f64 {
        self.mass_defect
    }

    pub fn support_len(&self) -> usize {
        self.cum.len()
    }

    pub fn n_eds(&self) -> u32 {
        self.n_eds
    }

    /// The rate the distribution was built for.
    pub fn delivery_rate(&self) -> f64 {
        self.delivery_rate
    }
}

/// Pr{network AoI > delta} under the bound dynamics; convenience wrapper
/// over [`NetworkAoiDist`].
pub fn network_aoi_ccdf(delta: f64, n_eds: u32, delivery_rate: f64) -> Result<f64, AnalyticsError> {
    Ok(NetworkAoiDist::build(n_eds, delivery_rate)?.ccdf(delta))
}

const ACTIVATION_GRID_STEP: f64 = 1e-3;

/// Activation probability minimizing the AoI bound, found by a grid scan
/// (step 1e-3) that also checks the bound is unimodal in p, then refined
/// by golden-section search between the neighbors of the grid minimizer.
pub fn optimize_activation(
    n_eds: u32,
    n_channels: u32,
    n_relays: u32,
    erasure_p1: f64,
) -> Result<f64, AnalyticsError> {
    let eval = |p: f64| -> f64 {
        aoi_bound(&BoundInputs {
            n_eds,
            activation_prob: p,
            n_channels,
            n_relays,
            erasure_p1,
        })
        .aaoi
    };
    let steps = (1.0 / ACTIVATION_GRID_STEP).round() as usize;
    let grid: Vec<f64> = (1..=steps).map(|i| i as f64 * ACTIVATION_GRID_STEP).collect();
    let vals: Vec<f64> = grid.iter().map(|&p| eval(p)).collect();
    let m = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    // The bound must fall up to the minimizer and rise after it; tolerate
    // only float noise.
    for i in 1..vals.len() {
        let (lo, hi) = (vals[i - 1], vals[i]);
        let slack = 1e-9 * lo.max(hi);
        if i <= m && hi > lo + slack {
            return Err(AnalyticsError::NotUnimodal(grid[i]));
        }
        if i > m && hi + slack < lo {
            return Err(AnalyticsError::NotUnimodal(grid[i]));
        }
    }
    let mut a = if m == 0 { grid[0] } else { grid[m - 1] };
    let mut b = if m + 1 == grid.len() { grid[m] } else { grid[m + 1] };
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d);
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use num::{BigInt, FromPrimitive, One, ToPrimitive, Zero};

    fn defaults() -> BoundInputs {
        BoundInputs {
            n_eds: 30,
            activation_prob: 0.1,
            n_channels: 2,
            n_relays: 5,
            erasure_p1: 0.1,
        }
    }

    #[test]
    fn ln_gamma_hits_known_values() {
        // Gamma(n) = (n-1)!
        let mut fact = 1f64;
        for n in 2..15u32 {
            fact *= (n - 1) as f64;
            assert!(
                (ln_gamma(n as f64) - fact.ln()).abs() < 1e-12,
                "ln_gamma({n})"
            );
        }
        // Gamma(1/2) = sqrt(pi)
        let want = 0.5 * std::f64::consts::PI.ln();
        assert!((ln_gamma(0.5) - want).abs() < 1e-12);
    }

    fn binomial_pmf_exact(k: u32, n: u32, p: BigRational) -> BigRational {
        let mut c = BigRational::one();
        for j in 0..k {
            c *= BigRational::new(BigInt::from(n - j), BigInt::from(j + 1));
        }
        let one = BigRational::one();
        c * num::pow::pow(p.clone(), k as usize) * num::pow::pow(one - p, (n - k) as usize)
    }

    #[test]
    fn binomial_pmf_matches_exact_rational() {
        for &(n, p) in &[(1u32, 0.3f64), (7, 0.1), (29, 0.5), (200, 0.03), (60, 0.97)] {
            let pr = BigRational::from_f64(p).unwrap();
            for k in 0..=n {
                let want = binomial_pmf_exact(k, n, pr.clone()).to_f64().unwrap();
                let got = binomial_pmf(k, n, p);
                // The log-space path carries ~1e-13 relative error in deep
                // tails (|ln pmf| is large), so the bar sits above that.
                assert!(
                    (got - want).abs() <= 1e-12 * want.max(1e-300) + 1e-300,
                    "k={k} n={n} p={p}: got {got} want {want}"
                );
            }
        }
    }

    #[test]
    fn binomial_pmf_sums_to_one_and_handles_edges() {
        let total: f64 = (0..=300).map(|k| binomial_pmf(k, 300, 0.0917)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(binomial_pmf(0, 10, 0.0), 1.0);
        assert_eq!(binomial_pmf(3, 10, 0.0), 0.0);
        assert_eq!(binomial_pmf(10, 10, 1.0), 1.0);
        assert_eq!(binomial_pmf(9, 10, 1.0), 0.0);
    }

    /// success_prob recomputed with exact rational arithmetic.
    fn success_prob_exact(inp: &BoundInputs) -> f64 {
        let p = BigRational::from_f64(inp.activation_prob).unwrap();
        let eps = BigRational::from_f64(inp.erasure_p1).unwrap();
        let inv_f = BigRational::new(BigInt::one(), BigInt::from(inp.n_channels));
        let one = BigRational::one();
        let mut q = BigRational::zero();
        for n in 0..inp.n_eds {
            let pn = binomial_pmf_exact(n, inp.n_eds - 1, p.clone());
            let mut inner = BigRational::zero();
            for u in 0..=n {
                let pu = binomial_pmf_exact(u, n, inv_f.clone());
                let qt = (one.clone() - eps.clone()) * num::pow::pow(eps.clone(), u as usize);
                let miss = num::pow::pow(one.clone() - qt, inp.n_relays as usize);
                inner += pu * (one.clone() - miss);
            }
            q += pn * inner;
        }
        q.to_f64().unwrap()
    }

    #[test]
    fn success_prob_matches_exact_rational_arithmetic() {
        for inp in [
            defaults(),
            BoundInputs {
                n_eds: 5,
                activation_prob: 0.3,
                n_channels: 1,
                n_relays: 2,
                erasure_p1: 0.2,
            },
            BoundInputs {
                n_eds: 12,
                activation_prob: 0.05,
                n_channels: 3,
                n_relays: 1,
                erasure_p1: 0.0,
            },
        ] {
            let want = success_prob_exact(&inp);
            let got = success_prob(&inp);
            assert!(
                (got - want).abs() < 1e-13,
                "{inp:?}: got {got} want {want}"
            );
        }
    }

    #[test]
    fn success_prob_edge_cases() {
        // Nobody else transmits and links are perfect: one relay suffices.
        let inp = BoundInputs {
            n_eds: 1,
            activation_prob: 0.7,
            n_channels: 1,
            n_relays: 1,
            erasure_p1: 0.0,
        };
        assert!((success_prob(&inp) - 1.0).abs() < 1e-15);
        // Fully erased uplinks never capture.
        let inp = BoundInputs {
            erasure_p1: 1.0,
            ..defaults()
        };
        assert_eq!(success_prob(&inp), 0.0);
        // K relays on an otherwise clean single-device network: 1 - eps^K.
        let inp = BoundInputs {
            n_eds: 1,
            activation_prob: 0.2,
            n_channels: 2,
            n_relays: 3,
            erasure_p1: 0.3,
        };
        let got = success_prob(&inp);
        assert!((got - (1.0 - 0.3f64.powi(3))).abs() < 1e-15, "got {got}");
    }

    #[test]
    fn bound_ages_are_reciprocal_delivery_rate() {
        let b = aoi_bound(&defaults());
        assert!((b.aaoi - 1.0 / b.delivery_rate).abs() < 1e-12);
        assert_eq!(b.aaoi, b.paoi);
        assert!((b.delivery_rate - 0.1 * b.success_prob).abs() < 1e-15);

        let dead = aoi_bound(&BoundInputs {
            activation_prob: 0.0,
            ..defaults()
        });
        assert!(dead.aaoi.is_infinite());
    }

    #[test]
    fn stationary_pmf_is_geometric() {
        let rate = 0.3;
        let mut total = 0.0;
        for a in 1..200 {
            total += stationary_pmf(a, rate);
        }
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(stationary_pmf(0, rate), 0.0);
        assert!((stationary_pmf(1, rate) - rate).abs() < 1e-15);
        let mean: f64 = (1..2000u64).map(|a| a as f64 * stationary_pmf(a, rate)).sum();
        assert!((mean - 1.0 / rate).abs() < 1e-9);
    }

    /// Brute-force n-fold convolution of the geometric pmf.
    fn convolved_pmf_brute(n: u32, delta_max: u64, rate: f64) -> Vec<f64> {
        let single: Vec<f64> = (0..=delta_max).map(|a| stationary_pmf(a, rate)).collect();
        let mut acc = single.clone();
        for _ in 1..n {
            let mut next = vec![0.0; delta_max as usize + 1];
            for (i, &a) in acc.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (j, &b) in single.iter().enumerate() {
                    if i + j <= delta_max as usize {
                        next[i + j] += a * b;
                    }
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn convolved_pmf_matches_brute_force() {
        for &rate in &[0.01, 0.1, 0.5] {
            for n in 1..=5u32 {
                let brute = convolved_pmf_brute(n, 50, rate);
                for delta in 0..=50u64 {
                    let got = convolved_pmf_closed(n, delta, rate);
                    let want = brute[delta as usize];
                    let tol = 1e-12 * want.abs().max(1e-300);
                    assert!(
                        (got - want).abs() <= tol,
                        "n={n} delta={delta} rate={rate}: got {got} want {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn convolved_pmf_log_path_agrees_with_direct() {
        // Straddle the direct/log switchover with parameters valid in both.
        let rate = 0.37f64;
        for &(n, delta) in &[(30u32, 9_990u64), (30, 10_050), (31, 200), (40, 4000)] {
            let direct = {
                let mut binom = 1.0f64;
                for j in 1..n as u64 {
                    binom *= (delta - n as u64 + j) as f64 / j as f64;
                }
                binom * rate.powi(n as i32) * (1.0 - rate).powi((delta - n as u64) as i32)
            };
            let got = convolved_pmf_closed(n, delta, rate);
            assert!(
                (got - direct).abs() <= 1e-7 * direct.max(1e-280) + 1e-280,
                "n={n} delta={delta}: got {got} direct {direct}"
            );
        }
    }

    #[test]
    fn network_dist_reduces_to_geometric_for_one_device() {
        let d = NetworkAoiDist::build(1, 0.25).unwrap();
        for s in 1..60u64 {
            let want = stationary_pmf(s, 0.25);
            assert!((d.pmf_at(s) - want).abs() < 1e-12, "s = {s}");
        }
        // ccdf at integer delta: Pr{age > a} = (1-rate)^a.
        for a in 0..40u64 {
            let want = 0.75f64.powi(a as i32);
            assert!((d.ccdf(a as f64) - want).abs() < 1e-10, "a = {a}");
        }
    }

    #[test]
    fn network_dist_mass_and_mean_check_out() {
        let b = aoi_bound(&defaults());
        let d = NetworkAoiDist::build(30, b.delivery_rate).unwrap();
        assert!(d.mass_defect() <= TAIL_TRUNCATION * 1.01);
        // Mean of S is N / rate; fold the pmf.
        let mut mean = 0.0;
        for s in 30..(30 + d.support_len() as u64) {
            mean += s as f64 * d.pmf_at(s);
        }
        let want = 30.0 / b.delivery_rate;
        assert!(
            (mean - want).abs() < 1e-6 * want,
            "mean {mean} want {want}"
        );
        // CCDF is 1 below the support and monotone nonincreasing on it.
        assert_eq!(d.ccdf(0.5), 1.0);
        let mut prev = 1.0;
        for i in 0..200 {
            let delta = (30 + i) as f64 / 30.0;
            let c = d.ccdf(delta);
            assert!(c <= prev + 1e-15);
            prev = c;
        }
    }

    #[test]
    fn network_dist_matches_closed_form_pmf() {
        // Two routes to the same pmf: the ratio recurrence drifts by a few
        // ulps per step and the closed form runs through log-gamma, whose
        // absolute error scales with |ln pmf|. Both stay under ~1e-12
        // relative across this range; a structural error would miss by
        // orders of magnitude.
        let d = NetworkAoiDist::build(7, 0.22).unwrap();
        let end = 7 + d.support_len() as u64;
        assert!(end > 100, "support should cover the bulk, got {end}");
        for s in 7..end {
            let want = convolved_pmf_closed(7, s, 0.22);
            let got = d.pmf_at(s);
            assert!(
                (got - want).abs() <= 1e-10 * want.max(1e-300),
                "s={s}: {got} vs {want}"
            );
        }
        // Past the truncated grid the mass is gone by construction and the
        // residual is accounted for in bulk.
        assert_eq!(d.pmf_at(end), 0.0);
        assert!(d.mass_defect() <= TAIL_TRUNCATION * 1.01);
    }

    #[test]
    fn optimizer_finds_the_default_minimum() {
        // Independent oracle: a fine scan of the objective itself. The
        // objective is extremely flat here (a 2.5e-2 wide basin within
        // 0.01% of the optimum), so the optimizer must resolve the
        // argmin well below the basin width.
        let at = |p: f64| {
            aoi_bound(&BoundInputs {
                activation_prob: p,
                ..defaults()
            })
            .aaoi
        };
        let scan = (3_000..20_000)
            .map(|i| i as f64 * 1e-5)
            .min_by(|a, b| at(*a).total_cmp(&at(*b)))
            .unwrap();
        let p_star = optimize_activation(30, 2, 5, 0.1).unwrap();
        assert!(
            (p_star - scan).abs() <= 1e-5,
            "p* = {p_star}, fine scan found {scan}"
        );
        assert!((p_star - 0.09302).abs() <= 1e-4, "p* = {p_star}");
        assert!(at(p_star) <= at(p_star - 5e-3));
        assert!(at(p_star) <= at(p_star + 5e-3));
    }

    #[test]
    fn optimizer_handles_monotone_bound() {
        // Single device, single relay, no erasure: bound 1/p, minimized at
        // the upper end of the grid.
        let p_star = optimize_activation(1, 1, 1, 0.0).unwrap();
        assert!(p_star > 0.999, "p* = {p_star}");
    }
}
