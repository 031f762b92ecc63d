//! Exact weight arithmetic for irreducible homogeneous bundles on complex
//! flag manifolds.
//!
//! The library works entirely in fundamental-weight coordinates over a fixed
//! Cartan type. On top of the root-system layer it provides:
//!
//! * parabolic markings (crossed Dynkin nodes) and the bundle-label calculus:
//!   duals, canonical bundles, composition series ([`bundles`]);
//! * Bott-Borel-Weil direct images along fibrations of flag manifolds
//!   ([`bbw`]);
//! * relative differential forms, pullback composition factors and tensor
//!   decompositions for a double fibration ([`relgeom`]);
//! * assembly and classification of the E1 page of the associated spectral
//!   sequence, with a two-sided duality check ([`specseq`]);
//! * BGG complexes along the contractible leg and the BGG-based page
//!   ([`bgg`]).
//!
//! All values are immutable after construction and every operation is a pure
//! function; results are exact (integer arithmetic throughout).
//!
//! ```
//! use flagcalc::{assemble_e1, check_duality, classify, FibrationSpec, Weight};
//!
//! let fib = FibrationSpec::twistor_pp();
//! let tangent = Weight::new(vec![1, 0, 1]);
//! let page = assemble_e1(&fib, &tangent)?;
//! assert_eq!(page.cell_labels(1, 0).len(), 3);
//! assert_eq!(classify(&page).class.to_string(), "strict-degree-zero");
//! assert!(check_duality(&fib, &tangent)?.pass);
//! # Ok::<(), flagcalc::Error>(())
//! ```

pub mod bbw;
pub mod bgg;
pub mod bundles;
mod error;
pub mod relgeom;
pub mod roots;
pub mod specseq;

pub use bbw::{direct_image, full_cohomology, DirectImage};
pub use bgg::{assemble_e1_bgg, bgg_complex, check_bgg_duality, coset_reps, BggComplex};
pub use bundles::{
    fiber_dimension, relative_canonical, tensor_decompose, GradedFactor, GradedFactorList,
    ParabolicMarking,
};
pub use error::{Error, Result};
pub use relgeom::{CycleStabilizer, FibrationSpec};
pub use roots::{CartanData, Weight, WeylWord};
pub use specseq::{
    assemble_e1, check_duality, classify, detect_cancellations, hermitian_criterion,
    Classification, ConcentrationClass, ConcentrationPrediction, DualityCell, DualityReport,
    E1Entry, E1Page, PageKind,
};
