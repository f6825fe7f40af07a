//! Exact rational rotations of the sphere and realizations of finite
//! families as separated point sets.

mod geometry;
mod realize;

pub use geometry::{
    fixed_axis, kernel_vector, standard_free_rotations, word_to_matrix, Mat3, Vec3,
};
pub use realize::{
    realize, sphere_generators, verify_realization, SphereRealization, FALLBACK_BASE_POINTS,
};
