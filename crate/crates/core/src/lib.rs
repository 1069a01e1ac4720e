//! Hides an encrypted payload in the least-significant bits of a lossless
//! RGB cover image, searching pixel-placement parameters with a hybrid
//! firefly / differential-evolution optimizer that maximizes a composite
//! SSIM/PSNR fidelity score. Extraction is exact and keyed: the winning
//! placement parameters travel in a fixed-position header.

pub mod bench;
pub mod buffer;
pub mod codec;
pub mod error;
pub mod metrics;
pub mod optimizer;
pub mod stego;

pub use buffer::ImageBuffer;
pub use error::{CodecError, MetricsError, OptimError, StegoError};
pub use metrics::QualityReport;
pub use optimizer::{HfaConfig, OptimizationTrace, Orientation, SolutionVector};
pub use stego::{capacity, embed, extract, EmbedOutcome, EmbedRequest};
