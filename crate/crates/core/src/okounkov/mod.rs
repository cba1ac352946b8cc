//! Monomial orders, graded monomial series and their Okounkov bodies.

mod body;
mod chebyshev;
mod order;
mod series;

pub use body::{infinitesimal_map, okounkov_body, seshadri_from_body, volume_identity_check, LevelVolume, OkounkovBody, VolumeCheck};
pub use chebyshev::{chebyshev_transform, ChebyshevTransform, ChebyshevValue};
pub use order::{MonomialOrder, OrderKind};
pub use series::GradedMonomialSeries;
