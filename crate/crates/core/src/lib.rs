//! Non-binary polar codes over two-dimensional signal sets.
//!
//! The crate covers the whole chain from kernel design to simulation:
//!
//! - [`signal_sets`]: q-PSK and the rotated 4-point constellation.
//! - [`kernels`]: q x q polarizing kernels, named designs and anomaly checks.
//! - [`distance`]: good/bad synthetic channel distance spectra, the
//!   equidistant bound and union bounds.
//! - [`search`]: exhaustive search for distance-optimal permutation kernels.
//! - [`codec`]: encoder with per-stage kernels and the q-ary SC decoder.
//! - [`sim`]: AWGN Monte-Carlo harness and code construction.

pub mod codec;
pub mod distance;
pub mod error;
pub mod kernels;
pub mod search;
pub mod signal_sets;
pub mod sim;

pub use codec::{polar_decode_genie, polar_decode_sc, polar_encode, polar_invert, CodeConfig, CodeConfigSpec, LikelihoodVector, ScDecoder, ScOutput};
pub use distance::{
    bad_channel_spectrum, bound_comparison_almost_equidistant, conservation_check, db_to_linear, equidistant_dmin_bound,
    good_channel_spectrum, is_equidistant, jensen_gap, q_function, union_bound, worst_case_good_spectrum, ChannelKind, DistanceSpectrum,
    SpectrumEntry,
};
pub use error::{Error, Result};
pub use kernels::{sasoglu_permutation, Kernel, KernelSchedule};
pub use search::{compare_spectra, search_permutations, SearchReport};
pub use signal_sets::SignalSet;
pub use sim::{
    binomial_ci95, channel_likelihoods, estimate_reliabilities, info_size_for_unit_rate, modulate, run_fer, select_frozen_set,
    trial_rng, Interval, NoiseModel, ReliabilityProfile, SimulationReport,
};
