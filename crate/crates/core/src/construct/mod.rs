//! The two constructions behind the main theorem: curves with prescribed
//! intersection numbers sweeping out an invariant subvariety, and
//! projective small modifications that make chosen rays adjacent to a cone.

mod flips;
mod projective;
mod smallmod;
mod witness;

pub use flips::{flip_wall, nearest_small_modification};
pub use projective::{projectivity_certificate, NonProjectivityCertificate, Projectivity, ProjectivityCertificate};
pub use smallmod::{
    check_small_modification_hypotheses, construct_small_modification, ConstructionLog, FlipLog, PolytopeLog,
    SmallModification, SmallModificationCheck,
};
pub use witness::{check_curve_conditions, construct_curve_witness, CurveViolation, CurveWitness, WitnessBody};
