//! Classical sequence similarities used as baselines for the sliced kernels.

mod assignment;
mod cosine;
mod dtw;
mod transport;
mod wasserstein;

pub use assignment::min_cost_assignment;
pub use cosine::cosine_meanpool;
pub use dtw::{dtw, soft_dtw, CostMatrix};
pub use transport::min_cost_transport;
pub use wasserstein::exact_wasserstein;
