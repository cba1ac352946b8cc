pub mod convexfn;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod growth;
pub mod linalg;
pub mod okounkov;
pub mod polytope;
pub mod rational;

pub use error::{Error, Result};
pub use polytope::{HalfSpace, Polytope};
pub use rational::{Rat, RatVec};
