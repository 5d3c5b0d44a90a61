//! Exact computational group theory for unique-product questions.
//!
//! The crate provides
//!
//! * a word grammar and a generic [`GroupContext`] interface ([`word`], [`group`]),
//! * normal forms for the generalized Hantzsche-Wendt groups
//!   `G_n = <x_1..x_n | x_i^-1 x_j^2 x_i x_j^2>` ([`chw`]),
//! * the free product of order-two cyclic groups and its index-2 free subgroup
//!   ([`free_product`]),
//! * affine arithmetic for Hantzsche-Wendt Bieberbach groups and the surjection
//!   `G_{n-1} -> Gamma` ([`affine`]),
//! * truncated p-adic matrices, congruence subgroups and unique roots ([`padic`]),
//! * unique-product counting and witness search over any context
//!   ([`unique_product`]).

pub mod affine;
pub mod chw;
pub mod error;
pub mod free_product;
pub mod group;
pub mod padic;
pub mod unique_product;
pub mod word;

pub use affine::{AffineIsometry, HwData, HwReport, SurjectionCertificate};
pub use chw::{DihedralElement, Gn, GnElement};
pub use error::{Error, Result};
pub use free_product::{C2FreeProduct, FpWord, FreeWord};
pub use group::{commutator, power, GroupContext, Integers};
pub use padic::{PadicMatrix, PadicScalar};
pub use unique_product::{
    ball, check_square, format_witness_file, load_subset, parse_witness_file, product_report,
    product_report_parallel, search_witness, two_up_report, verify_witness, FiniteSubset,
    GroupSpec, SearchOutcome, SearchParams, Strategy, TwoUpReport, UpReport, WitnessFile,
    CHW2_WITNESS,
};
pub use word::GeneratorWord;
