use serde::{Deserialize, Serialize};

/// Which clock a state or record is parametrized by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClockKind {
    /// Conventional time `t`.
    ConventionalT,
    /// The relabeled parameter `tau`, with `t = T(tau)`.
    ParameterTau,
}

/// A phase-space point stamped with its clock reading.
///
/// For [`ClockKind::ConventionalT`] the momentum is `p = m dx/dt`; for
/// [`ClockKind::ParameterTau`] it is `pi = m xi' / T'`, which coincides with
/// `p` at the relabeled instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub q: f64,
    pub pm: f64,
    pub clock: f64,
    pub clock_kind: ClockKind,
}
