//! AWGN channel, Monte-Carlo harness and code construction.
//!
//! Every random draw of trial `t` comes from a ChaCha stream keyed by
//! `(seed, t)`, so results do not depend on how trials are spread over
//! worker threads, and any single trial can be replayed on its own.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::codec::{encode_in_place, CodeConfig, CodeConfigSpec, LikelihoodVector, ScDecoder};
use crate::distance::db_to_linear;
use crate::error::{Error, Result};
use crate::signal_sets::SignalSet;

/// Default genie trials per construction run.
pub const DEFAULT_CONSTRUCTION_TRIALS: usize = 100_000;

/// Default design SNR for code construction, in dB.
pub const DEFAULT_DESIGN_SNR_DB: f64 = 2.0;

/// Complex AWGN with `N0 = sigma2 = es / 10^(snr_db / 10)` per two dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub es: f64,
    pub snr_db: f64,
    pub sigma2: f64,
}

impl NoiseModel {
    pub fn new(es: f64, snr_db: f64) -> Result<Self> {
        if !(es > 0.0) || !es.is_finite() {
            return Err(Error::InvalidEnergy(es));
        }
        if !snr_db.is_finite() {
            return Err(Error::Noise(format!("SNR must be finite, got {snr_db}")));
        }
        let sigma2 = es / db_to_linear(snr_db);
        if !(sigma2 > 0.0) {
            return Err(Error::Noise(format!("noise power underflows at {snr_db} dB")));
        }
        Ok(NoiseModel { es, snr_db, sigma2 })
    }

    /// Linear `Es / N0`.
    pub fn snr(&self) -> f64 {
        self.es / self.sigma2
    }
}

/// The random stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Maps symbols to constellation points.
pub fn modulate(x: &[usize], set: &SignalSet) -> Result<Vec<Complex64>> {
    x.iter().map(|&s| set.point(s)).collect()
}

/// Adds circular complex Gaussian noise of variance `sigma2 / 2` per real
/// dimension.
pub fn add_noise<R: Rng + ?Sized>(s: &[Complex64], nm: &NoiseModel, rng: &mut R) -> Vec<Complex64> {
    let std = (nm.sigma2 / 2.0).sqrt();
    s.iter()
        .map(|&p| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            p + Complex64::new(re * std, im * std)
        })
        .collect()
}

fn likelihoods_into(y: &[Complex64], set: &SignalSet, sigma2: f64, out: &mut [f64]) {
    let q = set.q();
    let points = set.points();
    for (yi, row) in y.iter().zip(out.chunks_mut(q)) {
        let mut best = f64::NEG_INFINITY;
        for (r, p) in row.iter_mut().zip(points) {
            *r = -(yi - p).norm_sqr() / sigma2;
            best = best.max(*r);
        }
        let mut sum = 0.0;
        for r in row.iter_mut() {
            *r = (*r - best).exp();
            sum += *r;
        }
        let inv = 1.0 / sum;
        row.iter_mut().for_each(|r| *r *= inv);
    }
}

/// Per-position posteriors proportional to `exp(-|y - s_x|^2 / sigma2)`.
pub fn channel_likelihoods(y: &[Complex64], set: &SignalSet, nm: &NoiseModel) -> Vec<LikelihoodVector> {
    let q = set.q();
    let mut flat = vec![0.0; y.len() * q];
    likelihoods_into(y, set, nm.sigma2, &mut flat);
    flat.chunks(q)
        .map(|c| LikelihoodVector::new(c.to_vec()).expect("max entry is 1"))
        .collect()
}

/// Two-sided 95% interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
    pub half_width: f64,
}

impl Interval {
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.low <= other.high && other.low <= self.high
    }
}

/// Quantile of the Beta(a, b) distribution by bisection on the regularized
/// incomplete beta function. The statrs `inverse_cdf` stalls for very
/// lopsided shapes such as `a = 8, b = 1e7`.
fn beta_quantile(a: f64, b: f64, prob: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < prob {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Normal-approximation interval, replaced by the exact Clopper-Pearson one
/// when fewer than 10 events were seen.
pub fn binomial_ci95(events: u64, trials: u64) -> Interval {
    if trials == 0 {
        return Interval {
            low: 0.0,
            high: 1.0,
            half_width: 0.5,
        };
    }
    let n = trials as f64;
    let x = events as f64;
    let p = x / n;
    let (low, high) = if events < 10 {
        let alpha = 0.05;
        let low = if events == 0 {
            0.0
        } else {
            beta_quantile(x, n - x + 1.0, alpha / 2.0)
        };
        let high = if events == trials {
            1.0
        } else {
            beta_quantile(x + 1.0, n - x, 1.0 - alpha / 2.0)
        };
        (low, high)
    } else {
        let h = 1.959_963_984_540_054 * (p * (1.0 - p) / n).sqrt();
        ((p - h).max(0.0), (p + h).min(1.0))
    };
    Interval {
        low,
        high,
        half_width: (p - low).max(high - p),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: CodeConfigSpec,
    pub signal_set: String,
    pub noise: NoiseModel,
    pub trials: u64,
    pub frame_errors: u64,
    pub symbol_errors: u64,
    /// Frames whose decoder hit an all-zero posterior; counted as frame
    /// errors with every information symbol wrong.
    pub degenerate_frames: u64,
    pub fer: f64,
    pub ser: f64,
    pub fer_ci95: Interval,
    pub ser_ci95: Interval,
    pub seed: u64,
    pub wall_time_seconds: f64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    frames: u64,
    symbols: u64,
    degenerate: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            frames: self.frames + o.frames,
            symbols: self.symbols + o.symbols,
            degenerate: self.degenerate + o.degenerate,
        }
    }
}

struct Workspace<'c> {
    decoder: ScDecoder<'c>,
    u: Vec<usize>,
    x: Vec<usize>,
    y: Vec<Complex64>,
    lik: Vec<f64>,
}

impl<'c> Workspace<'c> {
    fn new(cfg: &'c CodeConfig) -> Self {
        let n = cfg.block_len();
        Workspace {
            decoder: ScDecoder::new(cfg),
            u: vec![0; n],
            x: vec![0; n],
            y: vec![Complex64::default(); n],
            lik: vec![0.0; n * cfg.q()],
        }
    }

    /// Draws the inputs for one trial and fills the channel likelihoods.
    /// Frozen indices stay 0 unless `all_random`.
    fn transmit(&mut self, cfg: &CodeConfig, set: &SignalSet, nm: &NoiseModel, rng: &mut ChaCha8Rng, all_random: bool) {
        let q = cfg.q();
        for (i, u) in self.u.iter_mut().enumerate() {
            *u = if all_random || !cfg.is_frozen(i) {
                rng.random_range(0..q)
            } else {
                0
            };
        }
        self.x.copy_from_slice(&self.u);
        encode_in_place(&mut self.x, cfg.schedule());
        let std = (nm.sigma2 / 2.0).sqrt();
        let points = set.points();
        for (y, &x) in self.y.iter_mut().zip(&self.x) {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *y = points[x] + Complex64::new(re * std, im * std);
        }
        likelihoods_into(&self.y, set, nm.sigma2, &mut self.lik);
    }
}

fn check_run(cfg: &CodeConfig, set: &SignalSet, trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if cfg.q() != set.q() {
        return Err(Error::AlphabetMismatch(cfg.q(), set.q()));
    }
    Ok(())
}

/// Frame and symbol error rates of SC decoding over `trials` random frames.
pub fn run_fer(cfg: &CodeConfig, set: &SignalSet, nm: &NoiseModel, trials: usize, seed: u64) -> Result<SimulationReport> {
    check_run(cfg, set, trials)?;
    let started = Instant::now();
    let info = cfg.info_indices();
    let k = info.len() as u64;
    let tally = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || Workspace::new(cfg),
            |ws, t| {
                let mut rng = trial_rng(seed, t);
                ws.transmit(cfg, set, nm, &mut rng, false);
                match ws.decoder.decode_flat(&ws.lik) {
                    Ok(u_hat) => {
                        let wrong = info.iter().filter(|&&i| u_hat[i] != ws.u[i]).count() as u64;
                        Tally {
                            frames: (wrong > 0) as u64,
                            symbols: wrong,
                            degenerate: 0,
                        }
                    }
                    Err(_) => Tally {
                        frames: 1,
                        symbols: k,
                        degenerate: 1,
                    },
                }
            },
        )
        .reduce(Tally::default, |a, b| a + b);

    let n = trials as u64;
    let symbol_trials = n * k;
    Ok(SimulationReport {
        config: cfg.to_spec(),
        signal_set: set.label().to_string(),
        noise: *nm,
        trials: n,
        frame_errors: tally.frames,
        symbol_errors: tally.symbols,
        degenerate_frames: tally.degenerate,
        fer: tally.frames as f64 / n as f64,
        ser: if k == 0 { 0.0 } else { tally.symbols as f64 / symbol_trials as f64 },
        fer_ci95: binomial_ci95(tally.frames, n),
        ser_ci95: binomial_ci95(tally.symbols, symbol_trials),
        seed,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Genie-aided per-index symbol error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityProfile {
    pub error_rates: Vec<f64>,
    pub error_counts: Vec<u64>,
    /// Trials that contributed to the estimates.
    pub trials: u64,
    /// Trials dropped because the decoder hit an all-zero posterior.
    pub degenerate_trials: u64,
    pub snr_db: f64,
}

impl ReliabilityProfile {
    /// Builds a profile directly from error rates.
    pub fn from_rates(error_rates: Vec<f64>, trials: u64, snr_db: f64) -> Self {
        let error_counts = error_rates
            .iter()
            .map(|r| (r * trials as f64).round() as u64)
            .collect();
        ReliabilityProfile {
            error_rates,
            error_counts,
            trials,
            degenerate_trials: 0,
            snr_db,
        }
    }

    pub fn len(&self) -> usize {
        self.error_rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.error_rates.is_empty()
    }

    /// Error rates in increasing order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.error_rates.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Indices whose estimate lies strictly inside `(low, high)`.
    pub fn unpolarized_count(&self, low: f64, high: f64) -> usize {
        self.error_rates.iter().filter(|&&r| r > low && r < high).count()
    }
}

/// Runs the genie-aided decoder on uniformly random inputs (frozen indices
/// included) and records the per-index error frequency.
pub fn estimate_reliabilities(cfg: &CodeConfig, set: &SignalSet, nm: &NoiseModel, trials: usize, seed: u64) -> Result<ReliabilityProfile> {
    check_run(cfg, set, trials)?;
    let n = cfg.block_len();
    let (counts, used, degenerate) = (0..trials as u64)
        .into_par_iter()
        .fold(
            || (Workspace::new(cfg), vec![0u64; n], 0u64, 0u64),
            |(mut ws, mut counts, mut used, mut degenerate), t| {
                let mut rng = trial_rng(seed, t);
                ws.transmit(cfg, set, nm, &mut rng, true);
                let u = std::mem::take(&mut ws.u);
                match ws.decoder.genie_flat(&ws.lik, &u) {
                    Ok(flags) => {
                        for (c, &f) in counts.iter_mut().zip(flags) {
                            *c += f as u64;
                        }
                        used += 1;
                    }
                    Err(_) => degenerate += 1,
                }
                ws.u = u;
                (ws, counts, used, degenerate)
            },
        )
        .map(|(_, counts, used, degenerate)| (counts, used, degenerate))
        .reduce(
            || (vec![0u64; n], 0, 0),
            |(mut a, ua, da), (b, ub, db)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                (a, ua + ub, da + db)
            },
        );
    let denom = used.max(1) as f64;
    Ok(ReliabilityProfile {
        error_rates: counts.iter().map(|&c| c as f64 / denom).collect(),
        error_counts: counts,
        trials: used,
        degenerate_trials: degenerate,
        snr_db: nm.snr_db,
    })
}

/// Freezes the `N - K` indices with the highest error estimates (ties freeze
/// the larger index first). Returns the frozen indices in increasing order.
pub fn select_frozen_set(profile: &ReliabilityProfile, k: usize) -> Result<Vec<usize>> {
    let n = profile.len();
    if k > n {
        return Err(Error::InfoSize { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        profile.error_rates[b]
            .total_cmp(&profile.error_rates[a])
            .then(b.cmp(&a))
    });
    let mut frozen = order[..n - k].to_vec();
    frozen.sort_unstable();
    Ok(frozen)
}

/// Information symbols for a spectral efficiency of one bit per channel use:
/// `floor(N / log2 q)`.
pub fn info_size_for_unit_rate(block_len: usize, q: usize) -> usize {
    let k = (block_len as f64 / (q as f64).log2() + 1e-9).floor() as usize;
    k.min(block_len)
}

/// Estimates reliabilities at the design SNR and freezes the least reliable
/// indices, keeping `k` information symbols.
pub fn construct(cfg: &CodeConfig, set: &SignalSet, design: &NoiseModel, trials: usize, seed: u64, k: usize) -> Result<(ReliabilityProfile, CodeConfig)> {
    let profile = estimate_reliabilities(cfg, set, design, trials, seed)?;
    let frozen = select_frozen_set(&profile, k)?;
    let code = cfg.with_frozen(&frozen)?;
    Ok((profile, code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Kernel;
    use approx::assert_abs_diff_eq;

    fn psk(q: usize) -> SignalSet {
        SignalSet::psk(q, 1.0).unwrap()
    }

    fn code(name: &str, q: usize, block_len: usize) -> CodeConfig {
        CodeConfig::uniform(&Kernel::builtin(name, Some(q)).unwrap(), block_len).unwrap()
    }

    #[test]
    fn noise_model() {
        let nm = NoiseModel::new(1.0, 10.0).unwrap();
        assert_abs_diff_eq!(nm.sigma2, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(nm.snr(), 10.0, epsilon = 1e-12);
        assert!(NoiseModel::new(0.0, 3.0).is_err());
        assert!(NoiseModel::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn modulate_examples() {
        let out = modulate(&[0, 2], &psk(4)).unwrap();
        assert_abs_diff_eq!(out[0].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1].re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1].im, 0.0, epsilon = 1e-12);
        assert!(modulate(&[], &psk(4)).unwrap().is_empty());
        let r = modulate(&[1], &SignalSet::rotated4(1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r[0].re, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[0].im, 2.0 * 2f64.sqrt() / 3.0, epsilon = 1e-12);
        assert!(modulate(&[4], &psk(4)).is_err());
    }

    #[test]
    fn noise_limits_and_determinism() {
        let s = modulate(&[0, 1, 2, 3], &psk(4)).unwrap();
        let quiet = NoiseModel::new(1.0, 300.0).unwrap();
        let out = add_noise(&s, &quiet, &mut trial_rng(1, 0));
        for (a, b) in out.iter().zip(&s) {
            assert!((a - b).norm() < 1e-12);
        }
        let nm = NoiseModel::new(1.0, 0.0).unwrap();
        let a = add_noise(&s, &nm, &mut trial_rng(5, 3));
        let b = add_noise(&s, &nm, &mut trial_rng(5, 3));
        let c = add_noise(&s, &nm, &mut trial_rng(5, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_variance() {
        let nm = NoiseModel::new(1.0, 3.0).unwrap();
        let zeros = vec![Complex64::default(); 1_000_000];
        let y = add_noise(&zeros, &nm, &mut trial_rng(11, 0));
        let n = y.len() as f64;
        let var_re = y.iter().map(|v| v.re * v.re).sum::<f64>() / n;
        let var_im = y.iter().map(|v| v.im * v.im).sum::<f64>() / n;
        let want = nm.sigma2 / 2.0;
        assert!((var_re - want).abs() / want < 0.01, "{var_re} vs {want}");
        assert!((var_im - want).abs() / want < 0.01, "{var_im} vs {want}");
    }

    #[test]
    fn likelihood_shapes() {
        let set = psk(4);
        let nm = NoiseModel::new(1.0, 60.0).unwrap();
        let l = channel_likelihoods(&[set.points()[2]], &set, &nm);
        assert!(l[0].as_slice()[2] > 1.0 - 1e-12);

        let nm = NoiseModel::new(1.0, 3.0).unwrap();
        let mid = (set.points()[0] + set.points()[1]) / 2.0;
        let l = channel_likelihoods(&[mid], &set, &nm);
        assert_abs_diff_eq!(l[0].as_slice()[0], l[0].as_slice()[1], epsilon = 1e-15);

        // BPSK: P(0)/P(1) = exp(4 Re(y) sqrt(es) / sigma2)
        let es = 2.0;
        let set = SignalSet::psk(2, es).unwrap();
        let nm = NoiseModel::new(es, 1.0).unwrap();
        for y in [Complex64::new(0.3, -0.2), Complex64::new(-0.7, 0.5), Complex64::new(0.05, 1.0)] {
            let l = channel_likelihoods(&[y], &set, &nm);
            let ratio = l[0].as_slice()[0] / l[0].as_slice()[1];
            let want = (4.0 * y.re * es.sqrt() / nm.sigma2).exp();
            assert!((ratio - want).abs() / want < 1e-12);
        }
    }

    #[test]
    fn ci_behaviour() {
        let ci = binomial_ci95(0, 1000);
        assert_eq!(ci.low, 0.0);
        assert!((ci.high - 0.003682).abs() < 1e-5, "{}", ci.high);
        let ci = binomial_ci95(500, 1000);
        assert_abs_diff_eq!(ci.half_width, 1.959963984540054 * (0.25f64 / 1000.0).sqrt(), epsilon = 1e-12);
        let a = binomial_ci95(100, 10_000);
        let b = binomial_ci95(300, 10_000);
        assert!(!a.overlaps(&b));
        assert!(a.overlaps(&binomial_ci95(110, 10_000)));
    }

    #[test]
    fn exact_interval_for_rare_events_in_huge_samples() {
        // For n -> infinity the exact interval tends to the Poisson one:
        // chi2 quantiles (0.025, 16 dof) / 2 and (0.975, 18 dof) / 2.
        let n = 100_000_000u64;
        let ci = binomial_ci95(8, n);
        assert!((ci.low * n as f64 - 3.4538).abs() < 2e-3, "{}", ci.low * n as f64);
        assert!((ci.high * n as f64 - 15.7632).abs() < 2e-3, "{}", ci.high * n as f64);
        let ci = binomial_ci95(1, 10);
        assert!((ci.low - 0.0025285).abs() < 1e-6 && (ci.high - 0.4450161).abs() < 1e-6, "{ci:?}");
    }

    #[test]
    fn fer_high_snr_is_clean() {
        let c = code("L5a", 5, 16).with_frozen(&[0, 1, 2, 4, 8]).unwrap();
        let nm = NoiseModel::new(1.0, 60.0).unwrap();
        let r = run_fer(&c, &psk(5), &nm, 1000, 3).unwrap();
        assert_eq!(r.frame_errors, 0);
        assert_eq!(r.fer, 0.0);
    }

    #[test]
    fn fer_is_deterministic_and_worker_invariant() {
        let c = code("standard", 5, 32).with_frozen(&[0, 1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 16]).unwrap();
        let nm = NoiseModel::new(1.0, 2.0).unwrap();
        let set = psk(5);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_fer(&c, &set, &nm, 3000, 9).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert!(a.frame_errors > 0);
        assert_eq!((a.frame_errors, a.symbol_errors), (b.frame_errors, b.symbol_errors));
        let again = run(1);
        assert_eq!(a.frame_errors, again.frame_errors);
    }

    #[test]
    fn reliabilities_basics() {
        let c = code("standard", 5, 2);
        let quiet = NoiseModel::new(1.0, 60.0).unwrap();
        let p = estimate_reliabilities(&c, &psk(5), &quiet, 500, 1).unwrap();
        assert!(p.error_rates.iter().all(|&r| r == 0.0));

        let nm = NoiseModel::new(1.0, 6.0).unwrap();
        let p = estimate_reliabilities(&c, &psk(5), &nm, 20_000, 1).unwrap();
        assert!(p.error_rates[1] < p.error_rates[0]);

        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_reliabilities(&code("L8", 8, 16), &psk(8), &nm, 2000, 4).unwrap())
        };
        assert_eq!(run(1).error_counts, run(3).error_counts);
        assert!(estimate_reliabilities(&c, &psk(5), &nm, 0, 1).is_err());
        assert!(estimate_reliabilities(&c, &psk(4), &nm, 10, 1).is_err());
    }

    #[test]
    fn frozen_selection() {
        let p = ReliabilityProfile::from_rates(vec![0.4, 0.01], 100, 2.0);
        assert_eq!(select_frozen_set(&p, 1).unwrap(), vec![0]);
        assert_eq!(select_frozen_set(&p, 2).unwrap(), Vec::<usize>::new());
        assert_eq!(select_frozen_set(&p, 0).unwrap(), vec![0, 1]);
        assert!(select_frozen_set(&p, 3).is_err());
        let tie = ReliabilityProfile::from_rates(vec![0.2, 0.2, 0.0, 0.2], 100, 2.0);
        assert_eq!(select_frozen_set(&tie, 2).unwrap(), vec![1, 3]);
    }

    #[test]
    fn unit_rate_sizes() {
        assert_eq!(info_size_for_unit_rate(64, 5), 27);
        assert_eq!(info_size_for_unit_rate(256, 5), 110);
        assert_eq!(info_size_for_unit_rate(256, 8), 85);
        assert_eq!(info_size_for_unit_rate(256, 4), 128);
        assert_eq!(info_size_for_unit_rate(16, 2), 16);
    }
}
