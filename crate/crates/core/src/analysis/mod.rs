//! Reference subtraction, masking, profiles, contours and accuracy metrics.

mod contour;
mod metrics;
mod sequence;
mod unwrap;

pub use contour::{contour_grid, contour_segments, export_segments_csv, Segment};
pub use metrics::{fit_exponential_decay, line_profile, rmse, roughness, DecayFit, Profile};
pub use sequence::{process_sequence, Extractor, FrameDifference, Method, SequenceResult};
pub use unwrap::unwrap_rows;
