#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod weyl;
pub mod repr;
pub mod special;
pub mod asympt;
pub mod dhspline;
pub mod lp;
pub mod optimize;
pub mod golden;
pub mod mucover;
pub mod mittag;
pub mod bounds;

pub use error::{Error, Result};
pub use rootsys::{CartanType, RootSystem};
