//! Braid monodromy of the discriminantal line arrangement 𝒜_{m,n}.
//!
//! The arrangement consists of the lines `s = 0`, `t = 0` and the `mn` lines
//! `s = T_{j,ℓ}(t) = −ω_m^j (1 + ω_n^ℓ t)`.  Projecting to the `t` coordinate
//! turns the arrangement into a family of `mn + 1` moving punctures in the
//! `s`-plane (the roots plus the fixed origin).  This crate
//!
//! * evaluates the punctures and the coincidence locus where they collide
//!   ([`geometry`]),
//! * builds loops in the `t`-plane around every coincidence point ([`paths`]),
//! * tracks the punctures along those loops and reads off braid words from
//!   exact crossing events ([`tracking`]),
//! * compares braids through the faithful Artin action on a free group
//!   ([`braid`]),
//! * realizes closed-form rotation operators as explicit motions
//!   ([`rotation`]),
//! * assembles Zariski–van Kampen presentations and runs the local-monodromy
//!   experiment for general `n` ([`van_kampen`]),
//! * and checks the parametrization and nodality of the discriminant curve
//!   ([`curve`]).

pub mod braid;
pub mod curve;
pub mod error;
pub mod geometry;
pub mod paths;
pub mod rotation;
pub mod tracking;
pub mod van_kampen;

pub use braid::{
    artin_action, automorphism_of, braids_equal, BraidWord, FreeAutomorphism, FreeWord,
};
pub use error::{Error, Result};
pub use geometry::{
    coincidence_locus, fiber, min_gap, partition_at, puncture_position, CoincidencePoint, Fiber,
    Params, PunctureLabel,
};
pub use paths::{figure1_loop, validate_path, LoopSite, PathReport, TPath};
pub use rotation::{
    conjugated_generator, realize_rotation, rotation_braid, theorem_generator, RotationSpec,
};
pub use tracking::{choose_projection, extract_braid, frame_projection, track, Trajectories};
pub use van_kampen::{
    abelianization, build_presentation, simplify, verify_conjecture, Presentation,
};

pub use num_complex::Complex64;
