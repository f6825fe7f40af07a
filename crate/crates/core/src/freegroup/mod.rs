//! Reduced words in the free group `F_m` and the coset spaces `F_m/⟨w⟩`.

mod coset;
mod word;

pub use coset::CosetSpace;
pub use word::{ball, ball_size, commute, Word};
