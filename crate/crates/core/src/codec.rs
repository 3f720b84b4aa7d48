//! Length-`2^n` non-binary polar encoder and q-ary successive cancellation
//! decoder.
//!
//! Encoding applies `n` butterfly stages. At stage `t` (stage 1 next to the
//! inputs), each block of `2^t` positions pairs position `p` of its first
//! half with `p + 2^(t-1)`; the first output is `f_t(first, second)`, the
//! second passes through. With `q = 2` and XOR at every stage this is the
//! classical transform `x = u F^{(x)n}` in natural index order.
//!
//! The decoder runs the matching recursion in the probability domain. For a
//! butterfly with inputs `(a, b)` and outputs `(f(a, b), b)`:
//!
//! ```text
//! P(a) ~ sum_b P1(f(a, b)) P2(b)       (first branch, b marginalized)
//! P(b) ~ P1(f(a_hat, b)) P2(b)         (second branch, a_hat decided)
//! ```
//!
//! Every vector is renormalized to sum 1 after it is formed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{Kernel, KernelSchedule};

/// A posterior or likelihood over the q symbols, normalized to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodVector(Vec<f64>);

impl LikelihoodVector {
    /// Normalizes `values`; rejects negative or non-finite entries and an
    /// all-zero vector.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidLikelihood(0));
        }
        let sum: f64 = values.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            return Err(Error::InvalidLikelihood(0));
        }
        Ok(LikelihoodVector(values.into_iter().map(|v| v / sum).collect()))
    }

    /// Probability one on `symbol`.
    pub fn indicator(q: usize, symbol: usize) -> Self {
        let mut v = vec![0.0; q];
        v[symbol] = 1.0;
        LikelihoodVector(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Most likely symbol, ties to the smallest index.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }
}

#[inline]
fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Block length, per-stage kernels and frozen positions of a code.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeConfig {
    schedule: KernelSchedule,
    block_len: usize,
    frozen: Vec<bool>,
}

/// JSON form of a [`CodeConfig`], with kernels referenced by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeConfigSpec {
    pub q: usize,
    #[serde(rename = "N")]
    pub block_len: usize,
    pub stages: Vec<String>,
    #[serde(default)]
    pub frozen: Vec<usize>,
}

impl CodeConfig {
    /// `frozen` lists the indices pinned to symbol 0.
    pub fn new(schedule: KernelSchedule, block_len: usize, frozen: &[usize]) -> Result<Self> {
        if block_len < 2 || !block_len.is_power_of_two() {
            return Err(Error::BlockLength(block_len));
        }
        let n = block_len.trailing_zeros() as usize;
        if schedule.len() != n {
            return Err(Error::ScheduleLength {
                got: schedule.len(),
                want: n,
            });
        }
        let mut mask = vec![false; block_len];
        for &i in frozen {
            if i >= block_len || mask[i] {
                return Err(Error::FrozenIndex { index: i, n: block_len });
            }
            mask[i] = true;
        }
        Ok(CodeConfig {
            schedule,
            block_len,
            frozen: mask,
        })
    }

    /// All stages use `kernel`, nothing frozen.
    pub fn uniform(kernel: &Kernel, block_len: usize) -> Result<Self> {
        if block_len < 2 || !block_len.is_power_of_two() {
            return Err(Error::BlockLength(block_len));
        }
        let n = block_len.trailing_zeros() as usize;
        Self::new(KernelSchedule::uniform(kernel, n)?, block_len, &[])
    }

    pub fn from_spec(spec: &CodeConfigSpec) -> Result<Self> {
        let kernels = spec
            .stages
            .iter()
            .map(|name| Kernel::builtin(name, Some(spec.q)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(KernelSchedule::new(kernels)?, spec.block_len, &spec.frozen)
    }

    pub fn to_spec(&self) -> CodeConfigSpec {
        CodeConfigSpec {
            q: self.q(),
            block_len: self.block_len,
            stages: self.schedule.labels(),
            frozen: self.frozen_indices(),
        }
    }

    pub fn with_frozen(&self, frozen: &[usize]) -> Result<Self> {
        Self::new(self.schedule.clone(), self.block_len, frozen)
    }

    pub fn q(&self) -> usize {
        self.schedule.q()
    }

    /// Block length `N`.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// `n = log2 N`.
    pub fn stages(&self) -> usize {
        self.schedule.len()
    }

    pub fn schedule(&self) -> &KernelSchedule {
        &self.schedule
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.block_len).filter(|&i| self.frozen[i]).collect()
    }

    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.block_len).filter(|&i| !self.frozen[i]).collect()
    }

    /// Number of information symbols `K`.
    pub fn info_len(&self) -> usize {
        self.frozen.iter().filter(|f| !**f).count()
    }

    fn check_symbols(&self, u: &[usize]) -> Result<()> {
        if u.len() != self.block_len {
            return Err(Error::LengthMismatch {
                got: u.len(),
                want: self.block_len,
            });
        }
        let q = self.q();
        match u.iter().find(|&&s| s >= q) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, q }),
            None => Ok(()),
        }
    }
}

/// Encodes `u` into the channel sequence `x`.
pub fn polar_encode(u: &[usize], cfg: &CodeConfig) -> Result<Vec<usize>> {
    cfg.check_symbols(u)?;
    let mut x = u.to_vec();
    encode_in_place(&mut x, cfg.schedule());
    Ok(x)
}

pub(crate) fn encode_in_place(x: &mut [usize], schedule: &KernelSchedule) {
    let len = x.len();
    for t in 1..=schedule.len() {
        let kernel = schedule.stage(t);
        let half = 1 << (t - 1);
        for start in (0..len).step_by(2 * half) {
            for p in start..start + half {
                x[p] = kernel.apply(x[p], x[p + half]);
            }
        }
    }
}

/// Inverts [`polar_encode`] by undoing the butterflies from the channel side.
pub fn polar_invert(x: &[usize], cfg: &CodeConfig) -> Result<Vec<usize>> {
    cfg.check_symbols(x)?;
    let mut u = x.to_vec();
    let len = u.len();
    for t in (1..=cfg.stages()).rev() {
        let kernel = cfg.schedule().stage(t);
        let half = 1 << (t - 1);
        for start in (0..len).step_by(2 * half) {
            for p in start..start + half {
                u[p] = kernel.solve_u1(u[p], u[p + half]);
            }
        }
    }
    Ok(u)
}

/// Decisions and the normalized posterior seen at each index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScOutput {
    pub u_hat: Vec<usize>,
    pub posteriors: Vec<LikelihoodVector>,
}

enum Mode<'a> {
    Decide,
    Genie(&'a [usize]),
}

/// Reusable successive cancellation decoder for one [`CodeConfig`].
///
/// Buffers are allocated once; a decoder is cheap to reuse across trials but
/// is not shared between threads.
pub struct ScDecoder<'c> {
    cfg: &'c CodeConfig,
    q: usize,
    // tables[t - 1] is the flat table of the stage-t kernel
    tables: Vec<Vec<usize>>,
    // probs[t] holds 2^t vectors of length q
    probs: Vec<Vec<f64>>,
    // syms[t] holds 2^t re-encoded symbols
    syms: Vec<Vec<usize>>,
    decisions: Vec<usize>,
    flags: Vec<bool>,
    posteriors: Option<Vec<f64>>,
}

impl<'c> ScDecoder<'c> {
    pub fn new(cfg: &'c CodeConfig) -> Self {
        let n = cfg.stages();
        let q = cfg.q();
        ScDecoder {
            cfg,
            q,
            tables: cfg.schedule().stages().iter().map(|k| k.table().to_vec()).collect(),
            probs: (0..=n).map(|t| vec![0.0; (1 << t) * q]).collect(),
            syms: (0..=n).map(|t| vec![0; 1 << t]).collect(),
            decisions: vec![0; cfg.block_len()],
            flags: vec![false; cfg.block_len()],
            posteriors: None,
        }
    }

    pub fn config(&self) -> &CodeConfig {
        self.cfg
    }

    fn load(&mut self, channel: &[f64]) -> Result<()> {
        let n = self.cfg.stages();
        let want = self.cfg.block_len() * self.q;
        if channel.len() != want {
            return Err(Error::LengthMismatch {
                got: channel.len(),
                want,
            });
        }
        self.probs[n].copy_from_slice(channel);
        Ok(())
    }

    /// Decodes from a flat `N * q` array of channel likelihoods (row `i` is
    /// the vector for position `i`). Each row must be nonnegative with a
    /// positive sum; rows need not be normalized.
    pub fn decode_flat(&mut self, channel: &[f64]) -> Result<&[usize]> {
        self.load(channel)?;
        self.posteriors = None;
        self.run(Mode::Decide)?;
        Ok(&self.decisions)
    }

    /// Like [`decode_flat`](Self::decode_flat), also returning the posterior
    /// at every index.
    pub fn decode_with_posteriors(&mut self, channel: &[f64]) -> Result<ScOutput> {
        self.load(channel)?;
        self.posteriors = Some(vec![0.0; channel.len()]);
        self.run(Mode::Decide)?;
        let post = self.posteriors.take().expect("allocated above");
        Ok(ScOutput {
            u_hat: self.decisions.clone(),
            posteriors: post
                .chunks(self.q)
                .map(|c| LikelihoodVector(c.to_vec()))
                .collect(),
        })
    }

    /// Genie-aided pass: every index is decided as if unfrozen, then the
    /// recursion continues with the true symbol. Returns per-index error
    /// flags.
    pub fn genie_flat(&mut self, channel: &[f64], truth: &[usize]) -> Result<&[bool]> {
        self.cfg.check_symbols(truth)?;
        self.load(channel)?;
        self.posteriors = None;
        self.run(Mode::Genie(truth))?;
        Ok(&self.flags)
    }

    fn run(&mut self, mode: Mode<'_>) -> Result<()> {
        let n = self.cfg.stages();
        self.node(n, 0, &mode)
    }

    fn node(&mut self, t: usize, offset: usize, mode: &Mode<'_>) -> Result<()> {
        let q = self.q;
        if t == 0 {
            let post = &self.probs[0][..q];
            debug_assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            let guess = argmax(post);
            if let Some(all) = self.posteriors.as_mut() {
                all[offset * q..(offset + 1) * q].copy_from_slice(post);
            }
            let symbol = match mode {
                Mode::Decide => {
                    let s = if self.cfg.is_frozen(offset) { 0 } else { guess };
                    self.decisions[offset] = s;
                    s
                }
                Mode::Genie(truth) => {
                    let s = truth[offset];
                    self.flags[offset] = guess != s;
                    s
                }
            };
            self.syms[0][0] = symbol;
            return Ok(());
        }

        let half = 1 << (t - 1);
        // first branch: marginalize the second input
        {
            let (lower, upper) = self.probs.split_at_mut(t);
            let parent = &upper[0];
            let child = &mut lower[t - 1];
            let table = &self.tables[t - 1];
            for p in 0..half {
                let first = &parent[p * q..(p + 1) * q];
                let second = &parent[(p + half) * q..(p + half + 1) * q];
                let out = &mut child[p * q..(p + 1) * q];
                for (a, o) in out.iter_mut().enumerate() {
                    let row = &table[a * q..(a + 1) * q];
                    *o = row.iter().zip(second).map(|(&x, &s)| first[x] * s).sum();
                }
                normalize(out).map_err(|_| Error::Degenerate {
                    level: t - 1,
                    offset,
                    position: p,
                })?;
            }
        }
        self.node(t - 1, offset, mode)?;
        {
            let (lower, upper) = self.syms.split_at_mut(t);
            upper[0][..half].copy_from_slice(&lower[t - 1][..half]);
        }
        // second branch: condition on the re-encoded first-half symbols
        {
            let (lower, upper) = self.probs.split_at_mut(t);
            let parent = &upper[0];
            let child = &mut lower[t - 1];
            let table = &self.tables[t - 1];
            let decided = &self.syms[t];
            for p in 0..half {
                let first = &parent[p * q..(p + 1) * q];
                let second = &parent[(p + half) * q..(p + half + 1) * q];
                let row = &table[decided[p] * q..(decided[p] + 1) * q];
                let out = &mut child[p * q..(p + 1) * q];
                for ((o, &x), &s) in out.iter_mut().zip(row).zip(second) {
                    *o = first[x] * s;
                }
                normalize(out).map_err(|_| Error::Degenerate {
                    level: t - 1,
                    offset: offset + half,
                    position: p,
                })?;
            }
        }
        self.node(t - 1, offset + half, mode)?;
        let (lower, upper) = self.syms.split_at_mut(t);
        let here = &mut upper[0];
        let table = &self.tables[t - 1];
        for p in 0..half {
            let b = lower[t - 1][p];
            here[p + half] = b;
            here[p] = table[here[p] * q + b];
        }
        Ok(())
    }
}

#[inline]
fn normalize(v: &mut [f64]) -> std::result::Result<(), ()> {
    let sum: f64 = v.iter().sum();
    if !(sum > 0.0) || !sum.is_finite() {
        return Err(());
    }
    let inv = 1.0 / sum;
    v.iter_mut().for_each(|x| *x *= inv);
    Ok(())
}

fn flatten(likelihoods: &[LikelihoodVector], cfg: &CodeConfig) -> Result<Vec<f64>> {
    if likelihoods.len() != cfg.block_len() {
        return Err(Error::LengthMismatch {
            got: likelihoods.len(),
            want: cfg.block_len(),
        });
    }
    let mut flat = Vec::with_capacity(cfg.block_len() * cfg.q());
    for (i, v) in likelihoods.iter().enumerate() {
        if v.len() != cfg.q() {
            return Err(Error::InvalidLikelihood(i));
        }
        flat.extend_from_slice(v.as_slice());
    }
    Ok(flat)
}

/// Successive cancellation decoding. Frozen indices output 0; information
/// indices the argmax of their posterior.
pub fn polar_decode_sc(likelihoods: &[LikelihoodVector], cfg: &CodeConfig) -> Result<ScOutput> {
    let flat = flatten(likelihoods, cfg)?;
    ScDecoder::new(cfg).decode_with_posteriors(&flat)
}

/// Genie-aided decoding; `flags[i]` is true when the decision at index `i`
/// differs from `truth[i]`.
pub fn polar_decode_genie(likelihoods: &[LikelihoodVector], cfg: &CodeConfig, truth: &[usize]) -> Result<Vec<bool>> {
    let flat = flatten(likelihoods, cfg)?;
    Ok(ScDecoder::new(cfg).genie_flat(&flat, truth)?.to_vec())
}
