//! Distance spectra of the one-step synthetic channels and the bounds built
//! on them.
//!
//! For a kernel `f` and a signal set, a hypothesis `(u1, u2)` is sent as the
//! pair of points `(s_{f(u1,u2)}, s_{u2})`. Competitor distances are
//!
//! ```text
//! d^2 = |s_{f(u1,u2)} - s_{f(u1',u2')}|^2 + |s_{u2} - s_{u2'}|^2
//! ```
//!
//! The good channel (decoding `u2` with `u1` known) ranges over `u1' = u1`,
//! `u2' != u2`; the bad channel (decoding `u1`) over `u1' != u1` and all `u2'`.
//! Spectra are counted from the reference `(0, 0)` and checked against every
//! other reference for uniformity.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::signal_sets::{SignalSet, DISTANCE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Good,
    Bad,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub d: f64,
    pub n: usize,
}

/// Distances with multiplicities, sorted by increasing distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSpectrum {
    pub kind: ChannelKind,
    pub entries: Vec<SpectrumEntry>,
    /// False when some reference hypothesis sees a different spectrum than
    /// `(0, 0)`.
    #[serde(skip, default = "default_uniform")]
    pub uniform: bool,
}

fn default_uniform() -> bool {
    true
}

impl DistanceSpectrum {
    /// Bins raw distances; values within `tol` of the current bin's first
    /// member are merged.
    pub fn from_distances(kind: ChannelKind, mut distances: Vec<f64>, tol: f64) -> Self {
        distances.sort_by(f64::total_cmp);
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        for d in distances {
            match entries.last_mut() {
                Some(last) if (d - last.d).abs() <= tol => last.n += 1,
                _ => entries.push(SpectrumEntry { d, n: 1 }),
            }
        }
        DistanceSpectrum {
            kind,
            entries,
            uniform: true,
        }
    }

    pub fn d_min(&self) -> f64 {
        self.entries.first().map_or(f64::INFINITY, |e| e.d)
    }

    /// Multiplicity at the minimum distance.
    pub fn kissing_number(&self) -> usize {
        self.entries.first().map_or(0, |e| e.n)
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.n).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.n).sum()
    }

    /// `sum N(d) d^2`, the conserved total for good spectra over PSK.
    pub fn total_d(&self) -> f64 {
        self.entries.iter().map(|e| e.n as f64 * e.d * e.d).sum()
    }

    fn same_as(&self, other: &Self, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.n == b.n && (a.d - b.d).abs() <= tol)
    }
}

fn check_q(kernel: &Kernel, set: &SignalSet) -> Result<()> {
    if kernel.q() != set.q() {
        return Err(Error::AlphabetMismatch(kernel.q(), set.q()));
    }
    Ok(())
}

fn spectrum_at(kernel: &Kernel, set: &SignalSet, kind: ChannelKind, u1: usize, u2: usize) -> DistanceSpectrum {
    let q = kernel.q();
    let x1 = kernel.apply(u1, u2);
    let mut distances = Vec::with_capacity(q * q);
    for v1 in 0..q {
        let wanted = match kind {
            ChannelKind::Good => v1 == u1,
            ChannelKind::Bad => v1 != u1,
        };
        if !wanted {
            continue;
        }
        for v2 in 0..q {
            if kind == ChannelKind::Good && v2 == u2 {
                continue;
            }
            let d2 = set.dist2(x1, kernel.apply(v1, v2)) + set.dist2(u2, v2);
            distances.push(d2.sqrt());
        }
    }
    DistanceSpectrum::from_distances(kind, distances, DISTANCE_TOL * set.es().sqrt())
}

fn channel_spectrum(kernel: &Kernel, set: &SignalSet, kind: ChannelKind) -> Result<DistanceSpectrum> {
    check_q(kernel, set)?;
    let q = kernel.q();
    let tol = DISTANCE_TOL * set.es().sqrt();
    let mut spectrum = spectrum_at(kernel, set, kind, 0, 0);
    spectrum.uniform = (0..q)
        .flat_map(|u1| (0..q).map(move |u2| (u1, u2)))
        .skip(1)
        .all(|(u1, u2)| spectrum_at(kernel, set, kind, u1, u2).same_as(&spectrum, tol));
    Ok(spectrum)
}

/// Orders spectra by `(d_min, -N(d_min), d_2, -N(d_2), ...)`; `Greater`
/// means `a` is the better one.
pub(crate) fn rank_spectra(a: &DistanceSpectrum, b: &DistanceSpectrum, tol: f64) -> Ordering {
    for (x, y) in a.entries.iter().zip(&b.entries) {
        if (x.d - y.d).abs() > tol {
            return x.d.total_cmp(&y.d);
        }
        match y.n.cmp(&x.n) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// The lowest-ranked good spectrum over all reference pairs `(u1, u2)`.
/// Equals [`good_channel_spectrum`] when the kernel is uniform.
pub fn worst_case_good_spectrum(kernel: &Kernel, set: &SignalSet) -> Result<DistanceSpectrum> {
    check_q(kernel, set)?;
    let q = kernel.q();
    let tol = DISTANCE_TOL * set.es().sqrt();
    let reference = spectrum_at(kernel, set, ChannelKind::Good, 0, 0);
    let mut worst = reference.clone();
    let mut uniform = true;
    for u1 in 0..q {
        for u2 in 0..q {
            let s = spectrum_at(kernel, set, ChannelKind::Good, u1, u2);
            uniform &= s.same_as(&reference, tol);
            if rank_spectra(&s, &worst, tol) == Ordering::Less {
                worst = s;
            }
        }
    }
    worst.uniform = uniform;
    Ok(worst)
}

/// Spectrum seen by `u2` when `u1` is known.
pub fn good_channel_spectrum(kernel: &Kernel, set: &SignalSet) -> Result<DistanceSpectrum> {
    channel_spectrum(kernel, set, ChannelKind::Good)
}

/// Spectrum seen by `u1` over all competitors `(u1' != u1, u2')`.
pub fn bad_channel_spectrum(kernel: &Kernel, set: &SignalSet) -> Result<DistanceSpectrum> {
    channel_spectrum(kernel, set, ChannelKind::Bad)
}

/// A good spectrum is equidistant when all `q - 1` competitors sit at `d_min`.
pub fn is_equidistant(spectrum: &DistanceSpectrum, q: usize) -> Result<bool> {
    if spectrum.kind != ChannelKind::Good {
        return Err(Error::NotGoodSpectrum);
    }
    Ok(spectrum.kissing_number() == q - 1)
}

/// Upper bound on the good-channel minimum distance of any kernel:
/// `sqrt(2/(q-1) * sum_k |s_k - s_0|^2)`.
pub fn equidistant_dmin_bound(set: &SignalSet) -> f64 {
    (2.0 / (set.q() - 1) as f64 * set.sum_dist2_from_origin()).sqrt()
}

/// Outcome of the distance conservation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationReport {
    pub holds: bool,
    pub group_matched: bool,
    /// `2 * sum_k |s_k - s_0|^2`.
    pub expected: f64,
    pub observed_min: f64,
    pub observed_max: f64,
    pub warning: Option<String>,
}

/// Checks that for every reference `(u1, u2)` the good-channel squared
/// distances sum to `2 * sum_k |s_k - s_0|^2`.
pub fn conservation_check(kernel: &Kernel, set: &SignalSet) -> Result<ConservationReport> {
    check_q(kernel, set)?;
    let q = kernel.q();
    let expected = 2.0 * set.sum_dist2_from_origin();
    let mut observed_min = f64::INFINITY;
    let mut observed_max = f64::NEG_INFINITY;
    for u1 in 0..q {
        for u2 in 0..q {
            let x1 = kernel.apply(u1, u2);
            let total: f64 = (0..q)
                .filter(|&v2| v2 != u2)
                .map(|v2| set.dist2(x1, kernel.apply(u1, v2)) + set.dist2(u2, v2))
                .sum();
            observed_min = observed_min.min(total);
            observed_max = observed_max.max(total);
        }
    }
    let tol = 1e-9 * set.es();
    let holds = (observed_min - expected).abs() <= tol && (observed_max - expected).abs() <= tol;
    let group_matched = set.is_group_matched();
    let warning = (!group_matched).then(|| {
        format!(
            "signal set `{}` is not group-matched; conservation is only guaranteed for group-matched sets",
            set.label()
        )
    });
    Ok(ConservationReport {
        holds,
        group_matched,
        expected,
        observed_min,
        observed_max,
        warning,
    })
}

/// Gaussian tail probability `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Union bound on symbol error probability,
/// `sum_d N(d) Q(d / sqrt(es) * sqrt(snr / 2))` with `snr = Es/N0` linear.
pub fn union_bound(spectrum: &DistanceSpectrum, snr: f64, es: f64) -> f64 {
    let scale = (snr / 2.0).sqrt() / es.sqrt();
    spectrum
        .entries
        .iter()
        .map(|e| e.n as f64 * q_function(e.d * scale))
        .sum()
}

/// `Q(a) + Q(b) - 2 Q(sqrt((a^2 + b^2) / 2))`, positive whenever `a != b`.
pub fn jensen_gap(a: f64, b: f64) -> f64 {
    q_function(a) + q_function(b) - 2.0 * q_function(((a * a + b * b) / 2.0).sqrt())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub snr_db: f64,
    /// Bound of the L8 kernel over 8-PSK.
    pub almost_equidistant: f64,
    /// `7 Q(d * sqrt(snr/2))` at the equidistant distance for 8-PSK.
    pub equidistant: f64,
}

/// Union bound of the almost-equidistant L8 kernel next to the hypothetical
/// equidistant bound for 8-PSK, per SNR point in dB.
pub fn bound_comparison_almost_equidistant(snr_grid_db: &[f64]) -> Vec<BoundRow> {
    let set = SignalSet::psk(8, 1.0).expect("8-PSK");
    let l8 = Kernel::builtin("L8", None).expect("builtin");
    let spectrum = good_channel_spectrum(&l8, &set).expect("same q");
    let d_eq = equidistant_dmin_bound(&set);
    snr_grid_db
        .iter()
        .map(|&snr_db| {
            let snr = db_to_linear(snr_db);
            BoundRow {
                snr_db,
                almost_equidistant: union_bound(&spectrum, snr, 1.0),
                equidistant: 7.0 * q_function(d_eq * (snr / 2.0).sqrt()),
            }
        })
        .collect()
}
