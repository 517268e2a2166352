use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Model or grid parameters violate an invariant.
    InvalidParams(&'static str),
    /// Frequency outside the closed band `[-2ξ, 2ξ]`.
    OutOfBand { omega: f64 },
    /// Frequency at a band edge where the spectral density diverges.
    BandEdge { omega: f64 },
    /// Laplace variable sits on the branch cut `{iy : |y| <= 2ξ}`.
    OnBranchCut { re: f64, im: f64 },
    /// Argument outside the domain of an operation.
    Domain { what: &'static str, value: f64 },
    /// A root finder failed to converge inside its bracket.
    NoConvergence { what: &'static str, lo: f64, hi: f64 },
    /// Branch-cut quadrature missed its tolerance at time `t`.
    Quadrature { t: f64, panel: (f64, f64), estimate: f64 },
    WrongKind { expected: &'static str },
    NonUniformGrid,
    TooFewSamples { got: usize, need: usize },
    Mismatch(&'static str),
    /// The lattice wavefront reached the chain ends.
    BoundaryReached { time: f64, occupation: f64 },
    /// Lattice norm drifted beyond tolerance.
    NormDrift { time: f64, drift: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::OutOfBand { omega } => write!(f, "frequency {omega} lies outside the band"),
            Error::BandEdge { omega } => {
                write!(f, "spectral density diverges at band edge (omega = {omega})")
            }
            Error::OnBranchCut { re, im } => {
                write!(f, "s = {re}{im:+}i lies on the branch cut; use a branch limit")
            }
            Error::Domain { what, value } => write!(f, "{what}: {value} outside domain"),
            Error::NoConvergence { what, lo, hi } => {
                write!(f, "{what} did not converge in bracket [{lo}, {hi}]")
            }
            Error::Quadrature { t, panel, estimate } => write!(
                f,
                "quadrature tolerance missed at t = {t}: worst panel [{}, {}] error {estimate:e}",
                panel.0, panel.1
            ),
            Error::WrongKind { expected } => write!(f, "bound state of kind {expected} required"),
            Error::NonUniformGrid => f.write_str("time grid is not uniform"),
            Error::TooFewSamples { got, need } => {
                write!(f, "{got} samples in window, at least {need} required")
            }
            Error::Mismatch(what) => write!(f, "mismatched inputs: {what}"),
            Error::BoundaryReached { time, occupation } => write!(
                f,
                "edge-site occupation {occupation:e} at t = {time}; enlarge the lattice"
            ),
            Error::NormDrift { time, drift } => {
                write!(f, "norm drift {drift:e} at t = {time}")
            }
        }
    }
}

impl core::error::Error for Error {}
