//! Singularity classes of Poisson germs with nonzero 1-jet.

mod class;
mod eigen;
mod quadform;

pub use class::{classify, classify_1jet, kappas, CoarseClass, KappaInvariants, SingularityClass};
pub use eigen::{v_subtype, EigenPair, Resonance, VKind, VNormalForm, VSubtype};
pub use quadform::{quad_coeffs, quadform_class, QuadClass};
