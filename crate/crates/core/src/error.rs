use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(&'static str),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error(
        "edge swaps stalled: {accepted}/{requested} accepted after {proposed} proposals \
         ({self_loops} self-loop, {duplicates} duplicate, {disconnecting} disconnecting rejections)"
    )]
    SwapLimit {
        requested: usize,
        accepted: usize,
        proposed: usize,
        self_loops: usize,
        duplicates: usize,
        disconnecting: usize,
    },

    #[error("power iteration did not converge after {iterations} iterations (last L1 change {last_change:e})")]
    NotConverged { iterations: usize, last_change: f64 },

    #[error("linear system is singular at pivot {0}")]
    Singular(usize),

    #[error("stationary solve produced a non-positive probability at state {0}")]
    NonPositive(usize),

    #[error("variance below degeneracy threshold")]
    Degenerate,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
