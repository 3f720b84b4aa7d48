//! Exhaustive search over permutation kernels `u1 + pi(u2) mod q`.
//!
//! Candidates are ranked by their good-channel spectrum, compared
//! lexicographically on `(d_min, -N(d_min), d_2, -N(d_2), ...)`: a larger
//! minimum distance wins, ties go to the smaller kissing number, then to the
//! next distance, and so on. Each candidate is represented by the worst of
//! its per-reference spectra.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::{equidistant_dmin_bound, is_equidistant, rank_spectra, worst_case_good_spectrum, ChannelKind, DistanceSpectrum};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::signal_sets::{SignalSet, DISTANCE_TOL};

/// Largest alphabet searched exhaustively (8! = 40320 candidates).
pub const MAX_SEARCH_Q: usize = 8;

pub const OBJECTIVE: &str = "lexicographic (d_min, -N(d_min), d_2, -N(d_2), ...)";

/// Orders two good-channel spectra; `Greater` means `a` is the better one.
pub fn compare_spectra(a: &DistanceSpectrum, b: &DistanceSpectrum) -> Result<Ordering> {
    if a.kind != ChannelKind::Good || b.kind != ChannelKind::Good {
        return Err(Error::NotGoodSpectrum);
    }
    let (ta, tb) = (a.total_multiplicity(), b.total_multiplicity());
    if ta != tb {
        return Err(Error::AlphabetMismatch(ta + 1, tb + 1));
    }
    Ok(rank_spectra(a, b, DISTANCE_TOL))
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub q: usize,
    pub signal_set: String,
    pub objective: String,
    /// All maximizing permutations, sorted lexicographically.
    pub best_permutations: Vec<Vec<usize>>,
    pub best_spectrum: DistanceSpectrum,
    pub equidistant_found: bool,
    pub search_space_size: usize,
    pub dmin_bound: f64,
}

/// Rearranges `v` into the next lexicographic permutation; false when `v`
/// was the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("pivot exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

fn candidates(q: usize, fix_zero: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pi: Vec<usize> = (0..q).collect();
    loop {
        if !fix_zero || pi[0] == 0 {
            out.push(pi.clone());
        } else {
            break;
        }
        if !next_permutation(&mut pi) {
            break;
        }
    }
    out
}

/// Searches all permutation kernels over `set`. A kernel is scored by its
/// worst good spectrum over all reference pairs, since the spectrum of a
/// permutation kernel can depend on the reference. For group-matched sets the
/// search fixes `pi(0) = 0` (adding a constant to `pi` only rotates the
/// outputs) unless `full_space` is set.
pub fn search_permutations(set: &SignalSet, full_space: bool) -> Result<SearchReport> {
    let q = set.q();
    if q > MAX_SEARCH_Q {
        return Err(Error::SearchTooLarge { q, max: MAX_SEARCH_Q });
    }
    let fix_zero = !full_space && set.is_group_matched();
    let space = candidates(q, fix_zero);
    let tol = DISTANCE_TOL * set.es().sqrt();

    let scored: Vec<(Vec<usize>, DistanceSpectrum)> = space
        .par_iter()
        .map(|pi| {
            let kernel = Kernel::from_permutation(q, pi)?;
            Ok((pi.clone(), worst_case_good_spectrum(&kernel, set)?))
        })
        .collect::<Result<_>>()?;

    let best = scored
        .iter()
        .map(|(_, s)| s)
        .max_by(|a, b| rank_spectra(a, b, tol))
        .expect("search space is non-empty")
        .clone();
    let mut best_permutations: Vec<Vec<usize>> = scored
        .into_iter()
        .filter(|(_, s)| rank_spectra(s, &best, tol) == Ordering::Equal)
        .map(|(pi, _)| pi)
        .collect();
    best_permutations.sort();

    Ok(SearchReport {
        q,
        signal_set: set.label().to_string(),
        objective: OBJECTIVE.to_string(),
        equidistant_found: is_equidistant(&best, q)?,
        best_spectrum: best,
        best_permutations,
        search_space_size: space.len(),
        dmin_bound: equidistant_dmin_bound(set),
    })
}
