//! Finite permutation groups, coset combinatorics, and transitive G-sets as
//! an amalgamation category with a set-level oracle.

mod group;
mod gset;
mod setlevel;
mod stabilizer;
mod transitive;

pub use group::{FiniteGroup, GroupSpec, Subgroup, SubgroupClass, GROUP_CAP, SUBGROUP_CAP};
pub use gset::{coequalizer, fiber_product, image, kernel_pair, GMap, GSet};
pub use setlevel::{
    double_coset_check, effectivity_report, fiber_functor_check, relation_from_points,
    right_coset_relation, set_level_agreement, CosetRelationCheck, FiberFunctorReport, GMorphism,
    GObject, GroupEffectivity,
};
pub use stabilizer::StabilizerClass;
pub use transitive::{CosetMap, TransitiveCategory};
