pub mod error;
pub mod rational;
pub mod quiver;
pub mod partition;
pub mod lr;
pub mod bounds;
pub mod lp;
pub mod glued;
pub mod semiinv;
pub mod moment;
