//! Weakly-monotone motion planning for unit-disc robots whose start and
//! final positions each own a revolving area.
//!
//! The pipeline is [`freespace`] (obstacle-only shortest paths), then
//! [`plan`] (core-avoiding deformation, retraction of resting robots and
//! assembly over the time interval `[0, n]`). [`verify`] re-checks the
//! result independently, [`order`] picks an execution order and
//! [`hardness`] builds the 3SAT gadget instances.

pub mod error;
pub mod freespace;
pub mod geom;
pub mod hardness;
pub mod instance;
pub mod order;
pub mod plan;
pub mod render;
pub mod scenario;
pub mod verify;

pub use error::{Error, Result};
pub use geom::Point;
pub use instance::Instance;
