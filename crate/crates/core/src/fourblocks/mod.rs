//! Four-dimensional specialization: Hodge star, `Λ^±` bases, the curvature
//! operator blocks, frame rotations and the Weyl spectral analysis.

pub mod blocks;
pub mod hodge;
pub mod rotation;
pub mod spectral;

pub use blocks::{classify, curvature_blocks, curvature_operator, BlockData, Classification};
pub use hodge::{hodge_star, lambda_bases, TwoForm, TwoFormBasis};
pub use rotation::{
    lift_n_rotation, lift_p_rotation, lift_plus_rotation, mu_homomorphism, rotate_blocks,
    FrameRotation,
};
pub use spectral::{
    algebraic_spectrum, spectral_report, sym3_eigenvalues, weyl_minus_tensor, SpectralReport,
    NORM_CONVENTION,
};
