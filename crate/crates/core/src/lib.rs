//! Characteristics, structural properties and sharp bounds for
//! time-series constraints described by regular expressions over the
//! signature alphabet `{<, =, >}`, together with an exhaustive oracle that
//! certifies the bounds on small instances.

pub mod bounds;
pub mod catalogue;
pub mod characteristics;
pub mod cli;
pub mod oracle;
pub mod properties;
pub mod semantics;
pub mod sigre;
