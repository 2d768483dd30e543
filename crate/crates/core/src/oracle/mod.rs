//! Independent frequency-domain evaluation of the dynamical force by
//! oscillatory quadrature over user-supplied Green-tensor traces.

mod force;
pub mod quadrature;
pub mod traces;

pub use force::{force_by_quadrature, ForceComponents};
pub use quadrature::{Estimate, OscillatoryResult, QuadConfig};
pub use traces::{perfect_chiral_plate, perfect_chiral_plate_trace, GreenTraceFn, PlanarTrace, TraceFunction};
