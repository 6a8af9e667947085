//! Filters on finite index sets and product constructions.

mod filter;
mod product;

pub use filter::{limsup, ultrafilters_extending, Filter, FilterError, FilterSpec};
pub use product::{
    direct_product, fo_reduced_product, pre_reduced_product, reduced_product, ultraproduct,
    IndexedFamily, ProductError, ProductIndex, DEFAULT_MAX_PRODUCT_SIZE,
};
