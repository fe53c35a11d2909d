//! Finitely presented abelian groups and integer linear algebra.

mod group;
mod matrix;
mod smith;

pub use group::{
    check_shape, cokernel, exact_at, free_complement, image, inverse, is_exact_at, is_injective, is_iso,
    is_surjective, is_well_defined, kernel, lift_through, maps_equal, preimage_rows, FgGroup, GroupMap,
    Invariants, Simplified,
};
pub use matrix::{vector_from_json, vector_to_json, IntMatrix};
pub use smith::{hermite_rows, left_kernel, reduce_mod_hermite, smith_normal_form, solve_right, Smith, Solution};
