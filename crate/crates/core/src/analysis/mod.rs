//! Convergence machinery: zooms, `F_n`, `Lⁿ` vectors, slope vectors, affine
//! models, distances and the smoothing sequences.

mod model;
mod slopes;
mod stats;
mod zoom;

pub use model::{affine_model, level_distance, partition_vectors, AffineModel, LevelDistance};
pub use slopes::{
    central_ladder, decompose_l, l_vector, level_bases, m_n_coefficient, propagate, pseudo_orbit_residual,
    return_times_f64, slope_vector, Decomposition, LVector, LevelBases, SlopeVector, L_TOL, SLOPE_TOL, STABLE_DEPTH,
};
pub use stats::{l2_proxy, l2_smoothing_sequences, log_slope, L2Proxy, SmoothingSequences, Trend};
pub use zoom::{
    c1_distance, c1_grid_check, l1_second_derivative_distance, moebius_f, moebius_jet, zoom, GridCheck, Provenance,
    ZoomedMap, DEFAULT_GRID, ENDPOINT_TOL, GRID_SIZES, L1_TOL,
};
