//! Regular quaternion and dihedral subgroups of holomorphs of finite abelian
//! groups, the braces they induce, and the associated Hopf-Galois counts.

pub mod abelian;
pub mod arith;
pub mod brace;
pub mod config;
pub mod counts;
pub mod endo;
pub mod enumerate;
pub mod error;
pub mod finite;
pub mod holomorph;
pub mod presentations;
pub mod reduce;
pub mod structured;
pub mod table;

pub use abelian::{Element, GroupSpec};
pub use config::Config;
pub use error::{Error, Result};
pub use presentations::TargetKind;
