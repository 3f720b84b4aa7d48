//! Two-dimensional signal sets.
//!
//! A [`SignalSet`] is an ordered list of `q` complex points. Symbol `k` of the
//! q-ary alphabet is transmitted as point `k` (natural mapping). Distances are
//! reported in absolute units; with the default `es = 1` they read directly in
//! units of `sqrt(Es)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for distance comparisons at unit energy.
pub const DISTANCE_TOL: f64 = 1e-9;

/// A q-point constellation in the complex plane.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalSetRepr", into = "SignalSetRepr")]
pub struct SignalSet {
    label: String,
    es: f64,
    points: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SignalSetRepr {
    q: usize,
    es: f64,
    points: Vec<[f64; 2]>,
}

impl TryFrom<SignalSetRepr> for SignalSet {
    type Error = Error;

    fn try_from(repr: SignalSetRepr) -> Result<Self> {
        if repr.points.len() != repr.q {
            return Err(Error::PointCountMismatch {
                points: repr.points.len(),
                q: repr.q,
            });
        }
        let points = repr
            .points
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        SignalSet::from_points("custom", points, repr.es)
    }
}

impl From<SignalSet> for SignalSetRepr {
    fn from(set: SignalSet) -> Self {
        SignalSetRepr {
            q: set.q(),
            es: set.es,
            points: set.points.iter().map(|p| [p.re, p.im]).collect(),
        }
    }
}

impl fmt::Debug for SignalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SignalSet")
            .field("label", &self.label)
            .field("es", &self.es)
            .field("points", &self.points)
            .finish()
    }
}

fn check_energy(es: f64) -> Result<()> {
    if es > 0.0 && es.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEnergy(es))
    }
}

impl SignalSet {
    /// q-ary PSK: point `k` is `sqrt(es) * exp(j 2 pi k / q)`.
    pub fn psk(q: usize, es: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        check_energy(es)?;
        let r = es.sqrt();
        let points = (0..q)
            .map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / q as f64))
            .collect();
        Ok(SignalSet {
            label: format!("psk{q}"),
            es,
            points,
        })
    }

    /// The 4-point set obtained from 4-PSK by rotating `s1` and `s3` so that
    /// `|s0 - s1| = 2/sqrt(3) * sqrt(es)`. Together with the M4 kernel this
    /// gives an equidistant good channel.
    pub fn rotated4(es: f64) -> Result<Self> {
        check_energy(es)?;
        let r = es.sqrt();
        let c = 1.0 / 3.0;
        let s = 2.0 * 2f64.sqrt() / 3.0;
        let points = vec![
            Complex64::new(r, 0.0),
            Complex64::new(r * c, r * s),
            Complex64::new(-r, 0.0),
            Complex64::new(-r * c, -r * s),
        ];
        Self::from_points("rotated4", points, es)
    }

    /// Builds a set from arbitrary points. `es` is the nominal symbol energy
    /// used to express distances and SNR; it is not checked against the
    /// point norms.
    pub fn from_points(label: impl Into<String>, points: Vec<Complex64>, es: f64) -> Result<Self> {
        let q = points.len();
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        check_energy(es)?;
        let tol = DISTANCE_TOL * es.sqrt();
        for i in 0..q {
            for j in (i + 1)..q {
                if (points[i] - points[j]).norm() <= tol {
                    return Err(Error::DuplicatePoints(i, j));
                }
            }
        }
        Ok(SignalSet {
            label: label.into(),
            es,
            points,
        })
    }

    /// Resolves a set by name: `psk` (needs `q`), `pskN`, or `rotated4`.
    pub fn by_name(name: &str, q: Option<usize>, es: f64) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "rotated4" => Self::rotated4(es),
            "psk" => match q {
                Some(q) => Self::psk(q, es),
                None => Err(Error::UnknownSignalSet(name.to_string())),
            },
            _ => match lower.strip_prefix("psk").and_then(|n| n.parse::<usize>().ok()) {
                Some(n) => {
                    if let Some(q) = q {
                        if q != n {
                            return Err(Error::AlphabetMismatch(q, n));
                        }
                    }
                    Self::psk(n, es)
                }
                None => Err(Error::UnknownSignalSet(name.to_string())),
            },
        }
    }

    pub fn q(&self) -> usize {
        self.points.len()
    }

    pub fn es(&self) -> f64 {
        self.es
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, k: usize) -> Result<Complex64> {
        self.points.get(k).copied().ok_or(Error::SymbolOutOfRange {
            symbol: k,
            q: self.q(),
        })
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn pair_distance(&self, i: usize, j: usize) -> Result<f64> {
        let q = self.q();
        for s in [i, j] {
            if s >= q {
                return Err(Error::SymbolOutOfRange { symbol: s, q });
            }
        }
        Ok(self.dist2(i, j).sqrt())
    }

    /// Squared distance; panics on out-of-range symbols.
    #[inline]
    pub(crate) fn dist2(&self, i: usize, j: usize) -> f64 {
        (self.points[i] - self.points[j]).norm_sqr()
    }

    /// Sum of squared distances from `s0` to every other point.
    pub fn sum_dist2_from_origin(&self) -> f64 {
        (1..self.q()).map(|k| self.dist2(k, 0)).sum()
    }

    /// True when `|s_{(l+k) mod q} - s_l| = |s_k - s_0|` for all `l`, `k`,
    /// i.e. the set is geometrically uniform under the cyclic group.
    pub fn is_group_matched(&self) -> bool {
        let q = self.q();
        let tol = DISTANCE_TOL * self.es.sqrt();
        (0..q).all(|k| {
            let reference = self.dist2(k, 0).sqrt();
            (0..q).all(|l| (self.dist2((l + k) % q, l).sqrt() - reference).abs() <= tol)
        })
    }
}
