//! Exact computations with finite 0-Auslander extriangulated categories:
//! two-term silting, silting reduction, Bongartz completion, picture
//! categories and picture groups.

pub mod corpus;
pub mod error;
pub mod exact;
pub mod group;
pub mod model;
pub mod par;
pub mod picture;
pub mod reduction;

pub use error::{Error, Result};
