//! Generalized Z_p toric codes on twisted tori.
//!
//! A code is fixed by two Laurent polynomials `f, g` over Z_p and a twisted
//! torus `(alpha, beta, gamma)`. The crate computes the logical dimension
//! both from a Gröbner basis of the boundary ideal and from explicit
//! parity-check ranks, estimates the distance, searches the weight-6
//! family, and fits the resulting figures of merit.

pub mod analysis;
pub mod csscode;
pub mod distance;
pub mod error;
pub mod field;
pub mod groebner;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod records;
pub mod search;
pub mod tables;

pub use error::{Error, Result};
pub use field::{field_inv, FieldElement, PrimeModulus};
pub use laurent::{
    antipode, canonical_unit_form, make_generalized_pair, normalize_to_polynomial, parse_poly,
    poly_mul, Exponent, LaurentPoly,
};
pub use groebner::{
    buchberger, check_topological_order, k_max, k_twisted, normal_form, power_mod, quotient_dimension,
    Dimension, GroebnerBasis, MPoly, Monomial, MonomialOrder,
};
pub use lattice::{canonicalize_gamma, EdgeType, SiteIndex, TorusSpec};
pub use csscode::{build_checks, k_linalg, CodeInstance, ParityChecks};
pub use linalg::{in_rowspace, nullspace_gfp, rank_gfp, weight, MatrixGFp, Rref};
pub use distance::{
    estimate_distance, estimate_distance_with, exact_distance, DistanceEstimate, EstimateOptions, ExactDistance,
    LogicalTest, Side,
};
pub use analysis::{global_fit, linear_fit, per_p_slopes, stabilizer_range, svg_plot, FitResult, SlopeReport};
pub use records::{read_csv, read_json, write_csv, write_json, CodeRecord};
pub use search::{
    enumerate_polys, enumerate_tori, pareto_front, run_search, run_search_with, sort_records, Budget, Candidate,
    CoefficientPolicy, PolyEnumeration, SearchControl, SearchOutcome, SearchSpace, SearchStats,
};
pub use tables::{bundled_tables, published_records, verify_d, verify_k, DCheck, DVerdict, InstanceFile, KCheck, Published};
