//! Bott-Borel-Weil direct images of irreducible homogeneous bundles along a
//! fibration `G/P_total -> G/P_base` with nested markings.
//!
//! The rho-shifted reflection algorithm: shift the label by rho, then reflect
//! at uncrossed-in-base nodes until the shifted weight is dominant there. A
//! zero coordinate at any such node means the weight is singular and every
//! direct image vanishes; otherwise exactly one degree survives, the number
//! of reflections performed.

use crate::bundles::ParabolicMarking;
use crate::error::{Error, Result};
use crate::roots::Weight;
use std::fmt;

/// Outcome of a direct-image computation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DirectImage {
    Vanishes,
    Image { degree: usize, label: Weight },
}

impl DirectImage {
    pub fn is_vanishing(&self) -> bool {
        matches!(self, DirectImage::Vanishes)
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            DirectImage::Vanishes => None,
            DirectImage::Image { degree, .. } => Some(*degree),
        }
    }

    pub fn label(&self) -> Option<&Weight> {
        match self {
            DirectImage::Vanishes => None,
            DirectImage::Image { label, .. } => Some(label),
        }
    }
}

impl fmt::Display for DirectImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirectImage::Vanishes => write!(f, "0"),
            DirectImage::Image { degree, label } => write!(f, "q={degree}: {label}"),
        }
    }
}

/// Direct image of the bundle `label` on `total` along the fibration onto
/// `base`.
///
/// Ties between several negative nodes are broken towards the lowest node
/// index; any order reaches the same chamber, fixing one keeps runs
/// reproducible.
pub fn direct_image(
    total: &ParabolicMarking,
    base: &ParabolicMarking,
    label: &Weight,
) -> Result<DirectImage> {
    if total.cartan() != base.cartan() {
        return Err(Error::CartanMismatch);
    }
    if !total.contains(base) {
        return Err(Error::InclusionViolated);
    }
    total.validate_label(label)?;
    let cartan = total.cartan();
    let mut shifted = label.add(&cartan.rho());
    let mut degree = 0usize;
    let budget = base.levi_cartan().num_positive_roots();
    loop {
        if base
            .uncrossed_nodes()
            .iter()
            .any(|&i| shifted.coord(i) == 0)
        {
            return Ok(DirectImage::Vanishes);
        }
        match base
            .uncrossed_nodes()
            .iter()
            .find(|&&i| shifted.coord(i) < 0)
        {
            Some(&i) => {
                shifted = cartan.reflect(i, &shifted)?;
                degree += 1;
                assert!(degree <= budget, "reflection loop exceeded the Levi length");
            }
            None => {
                let out = shifted.sub(&cartan.rho());
                debug_assert!(base.is_valid_label(&out));
                return Ok(DirectImage::Image { degree, label: out });
            }
        }
    }
}

/// Global cohomology on one flag manifold: the direct image with the base
/// being the whole group (no crossed nodes).
pub fn full_cohomology(marking: &ParabolicMarking, label: &Weight) -> Result<DirectImage> {
    let base = ParabolicMarking::new(marking.cartan().clone(), &[])?;
    direct_image(marking, &base, label)
}
