//! Generators for the reduction constructions: graph-isomorphism doubling,
//! vertex and edge gadgets, weight widgets and the hitting-set reduction.
//!
//! Generated vertices are named `<orig>__in`, `<orig>__<i>`,
//! `<orig>__<i>t` / `<orig>__<i>b`, `<orig>__out`; widget vertices are
//! `w<id>__a<i>` / `w<id>__b<i>` / `w<id>__c<i>`.

mod edge;
mod gi;
mod hitting_set;
mod structure;
mod vertex;

pub use edge::edge_gadget_pair;
pub use gi::{find_isomorphism, gi_to_digraphs, UndirectedGraph};
pub use hitting_set::{
    activation_schedule, hitting_set_reduction, HittingSetReduction, ReductionMetadata, ReductionOptions,
    WidgetRecord, WidgetRole,
};
pub use structure::{attach_weight_widget, has_structure_property, StructurePartition, WeightWidget};
pub use vertex::vertex_gadget_pair;

use crate::error::{Error, Result};

pub(crate) fn check_gadget_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Gadget(format!(
            "gadgets need k >= 2 (got {k}); k = 1 is the plain 1-block problem"
        )));
    }
    Ok(())
}
