//! Hermite windows, the Bargmann transform onto Fock space, Fock-space
//! functions and norms, and the closed-form short-time Fourier transform
//! against Hermite windows.

mod bargmann;
mod fock;
mod hermite;
mod signal;
mod stft;

pub use bargmann::bargmann;
pub use fock::{
    fock_inner, fock_norms, fock_shift, monomial_norm, FockFunction, FockNorms, GrowthCertificate,
    SigmaProduct, FOCK_STEP,
};
pub use hermite::{hermite_all, hermite_eval, HermiteWindow, HERMITE_MAX_ORDER};
pub use signal::{SampledSignal, DEFAULT_DT, DEFAULT_LEN, DEFAULT_T_MIN, SUPPORT_THRESHOLD};
pub use stft::{hermite_gram_entry, stft_hermite, stft_hermite_contour, stft_time_domain, tf_shift};
