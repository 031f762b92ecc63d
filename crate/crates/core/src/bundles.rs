//! Parabolic markings, irreducible-homogeneous-bundle labels, duals,
//! canonical bundles and graded composition-factor lists.
//!
//! A marking is a set of crossed Dynkin nodes; the uncrossed nodes span the
//! Levi. A bundle label is an integer weight that is dominant over the
//! uncrossed nodes; it names one irreducible homogeneous bundle. Labels are
//! treated as opaque diagram annotations whose transformation rules are fixed
//! by the character oracle below: the label is read as the extremal weight of
//! the Levi representation that is dominant for the Levi, and the longest
//! Levi Weyl element converts between the lowest-weight bookkeeping and this
//! normal form.

use crate::error::{Error, Result};
use crate::roots::{CartanData, Weight};
use std::collections::BTreeMap;
use std::fmt;

/// A flag manifold: Cartan data plus the set of crossed nodes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParabolicMarking {
    cartan: CartanData,
    crossed: Vec<bool>,
    levi: CartanData,
    levi_nodes: Vec<usize>,
}

impl ParabolicMarking {
    pub fn new(cartan: CartanData, crossed_nodes: &[usize]) -> Result<Self> {
        let rank = cartan.rank();
        let mut crossed = vec![false; rank];
        for &i in crossed_nodes {
            if i >= rank {
                return Err(Error::NodeOutOfRange { index: i, rank });
            }
            crossed[i] = true;
        }
        Self::from_flags(cartan, crossed)
    }

    /// Parse a mask like `"x.."` (one character per node, `x` crossed).
    pub fn from_mask(cartan: CartanData, mask: &str) -> Result<Self> {
        let flags: Vec<bool> = mask
            .chars()
            .map(|c| match c {
                'x' | 'X' => Ok(true),
                '.' => Ok(false),
                other => Err(Error::InvalidCartan(format!(
                    "invalid mask character {other:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        if flags.len() != cartan.rank() {
            return Err(Error::RankMismatch {
                got: flags.len(),
                expected: cartan.rank(),
            });
        }
        Self::from_flags(cartan, flags)
    }

    fn from_flags(cartan: CartanData, crossed: Vec<bool>) -> Result<Self> {
        let levi_nodes: Vec<usize> = (0..cartan.rank()).filter(|&i| !crossed[i]).collect();
        let sub: Vec<Vec<i64>> = levi_nodes
            .iter()
            .map(|&i| levi_nodes.iter().map(|&j| cartan.matrix()[i][j]).collect())
            .collect();
        let levi = CartanData::from_matrix(sub)?;
        Ok(ParabolicMarking {
            cartan,
            crossed,
            levi,
            levi_nodes,
        })
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn is_crossed(&self, i: usize) -> bool {
        self.crossed[i]
    }

    pub fn crossed_nodes(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.crossed[i]).collect()
    }

    pub fn uncrossed_nodes(&self) -> &[usize] {
        &self.levi_nodes
    }

    /// Sub-Cartan data of the Levi semisimple part (uncrossed nodes).
    pub fn levi_cartan(&self) -> &CartanData {
        &self.levi
    }

    pub fn mask(&self) -> String {
        self.crossed
            .iter()
            .map(|&c| if c { 'x' } else { '.' })
            .collect()
    }

    /// Whether every crossed node of `other` is crossed here.
    pub fn contains(&self, other: &ParabolicMarking) -> bool {
        self.cartan == other.cartan
            && (0..self.rank()).all(|i| !other.crossed[i] || self.crossed[i])
    }

    /// Levi dominance: non-negative coordinates over all uncrossed nodes.
    pub fn is_valid_label(&self, label: &Weight) -> bool {
        label.rank() == self.rank() && self.levi_nodes.iter().all(|&i| label.coord(i) >= 0)
    }

    pub fn validate_label(&self, label: &Weight) -> Result<()> {
        if self.is_valid_label(label) {
            Ok(())
        } else {
            Err(Error::InvalidLabel {
                label: label.to_string(),
                marking: self.mask(),
            })
        }
    }

    /// Positive roots supported on at least one crossed node.
    pub fn nilradical_roots(&self) -> Vec<Weight> {
        self.cartan
            .positive_roots()
            .iter()
            .zip(self.cartan.positive_root_coords())
            .filter(|(_, coeffs)| (0..self.rank()).any(|i| self.crossed[i] && coeffs[i] != 0))
            .map(|(alpha, _)| alpha.clone())
            .collect()
    }

    /// Label of the top exterior power of the cotangent space: minus the sum
    /// of the nilradical roots.
    pub fn canonical_bundle(&self) -> Weight {
        let mut total = Weight::zero(self.rank());
        for alpha in self.nilradical_roots() {
            total = total.add(&alpha);
        }
        total.neg()
    }

    /// Complex dimension of the flag manifold.
    pub fn dimension(&self) -> usize {
        self.nilradical_roots().len()
    }

    /// Full torus-weight multiset of the Levi irreducible named by `label`,
    /// in fundamental-weight coordinates of the ambient algebra.
    pub fn levi_weights(&self, label: &Weight) -> Result<BTreeMap<Weight, u64>> {
        self.validate_label(label)?;
        let hw_sub = self.restrict(label);
        let sub_mults = self.levi.weight_multiplicities(&hw_sub)?;
        let mut out = BTreeMap::new();
        for (w_sub, m) in sub_mults {
            let steps = self
                .levi
                .expand_in_simple_roots(&hw_sub.sub(&w_sub))
                .expect("weight differences lie in the Levi root lattice");
            let mut full = label.clone();
            for (k, &node) in self.levi_nodes.iter().enumerate() {
                if steps[k] != 0 {
                    full = full.sub(
                        &self
                            .cartan
                            .simple_root(node)
                            .expect("node validated")
                            .scaled(steps[k]),
                    );
                }
            }
            out.insert(full, m);
        }
        Ok(out)
    }

    /// Rank of the bundle named by `label`.
    pub fn levi_dimension(&self, label: &Weight) -> Result<u128> {
        self.validate_label(label)?;
        self.levi.weyl_dimension(&self.restrict(label))
    }

    fn restrict(&self, label: &Weight) -> Weight {
        Weight::new(self.levi_nodes.iter().map(|&i| label.coord(i)).collect())
    }

    /// Label of the dual bundle: negate every weight of the Levi
    /// representation and re-extract the label.
    ///
    /// The extracted label is the negative of the lowest weight, and the
    /// lowest weight is the longest-Levi-Weyl-element image of the label;
    /// the descent below computes exactly that. The full character-negation
    /// route is kept as an independent test oracle.
    pub fn dual_label(&self, label: &Weight) -> Result<Weight> {
        self.validate_label(label)?;
        let mut v = label.clone();
        let budget = self.levi.num_positive_roots();
        let mut steps = 0usize;
        while let Some(&i) = self.levi_nodes.iter().find(|&&i| v.coord(i) > 0) {
            v = self.cartan.reflect(i, &v)?;
            steps += 1;
            assert!(steps <= budget, "descent exceeded the Levi length");
        }
        Ok(v.neg())
    }

    /// Express a virtual character (torus-weight multiset) as a sum of Levi
    /// irreducibles by greedy extraction of maximal weights.
    pub fn decompose_character(
        &self,
        mut character: BTreeMap<Weight, i64>,
    ) -> Result<Vec<(Weight, u64)>> {
        let rho = self.cartan.rho();
        let mut out: Vec<(Weight, u64)> = Vec::new();
        loop {
            character.retain(|_, m| *m != 0);
            let Some((hw, &mult)) = character.iter().max_by(|(wa, _), (wb, _)| {
                (self.cartan.inner(wa, &rho), *wa).cmp(&(self.cartan.inner(wb, &rho), *wb))
            }) else {
                break;
            };
            let hw = hw.clone();
            if mult < 0 || !self.is_valid_label(&hw) {
                // A genuine character never reaches this point.
                return Err(Error::InvalidLabel {
                    label: hw.to_string(),
                    marking: self.mask(),
                });
            }
            for (w, m) in self.levi_weights(&hw)? {
                *character.entry(w).or_default() -= mult * m as i64;
            }
            out.push((hw, mult as u64));
        }
        out.sort();
        Ok(out)
    }
}

impl fmt::Display for ParabolicMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.cartan.name(), self.mask())
    }
}

/// One composition factor with its filtration degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GradedFactor {
    pub weight: Weight,
    pub degree: usize,
}

/// Multiset of bundle labels with filtration degrees, all sharing one
/// marking. Models composition series: degree-0 factors are the leading
/// terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedFactorList {
    marking: ParabolicMarking,
    factors: Vec<GradedFactor>,
}

impl GradedFactorList {
    pub fn new(marking: ParabolicMarking, mut factors: Vec<GradedFactor>) -> Self {
        factors.sort_by(|a, b| (a.degree, &a.weight).cmp(&(b.degree, &b.weight)));
        GradedFactorList { marking, factors }
    }

    pub fn marking(&self) -> &ParabolicMarking {
        &self.marking
    }

    pub fn factors(&self) -> &[GradedFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn weights(&self) -> Vec<&Weight> {
        self.factors.iter().map(|f| &f.weight).collect()
    }

    /// Sum of the ranks of all factors.
    pub fn total_dimension(&self) -> Result<u128> {
        let mut total = 0u128;
        for f in &self.factors {
            total += self.marking.levi_dimension(&f.weight)?;
        }
        Ok(total)
    }

    /// Combined torus character of all factors, with multiplicities.
    pub fn character(&self) -> Result<BTreeMap<Weight, i64>> {
        let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
        for f in &self.factors {
            for (w, m) in self.marking.levi_weights(&f.weight)? {
                *out.entry(w).or_default() += m as i64;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GradedFactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("{}@{}", x.weight, x.degree))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn check_inclusion(total: &ParabolicMarking, base: &ParabolicMarking) -> Result<()> {
    if total.cartan() != base.cartan() {
        return Err(Error::CartanMismatch);
    }
    if total.contains(base) {
        Ok(())
    } else {
        Err(Error::InclusionViolated)
    }
}

/// Label of the canonical bundle along the fibers of `G/P_total -> G/P_base`:
/// minus the sum of the roots in the relative nilradical.
pub fn relative_canonical(total: &ParabolicMarking, base: &ParabolicMarking) -> Result<Weight> {
    check_inclusion(total, base)?;
    let base_roots: std::collections::BTreeSet<Weight> =
        base.nilradical_roots().into_iter().collect();
    let mut sum = Weight::zero(total.rank());
    for alpha in total.nilradical_roots() {
        if !base_roots.contains(&alpha) {
            sum = sum.add(&alpha);
        }
    }
    Ok(sum.neg())
}

/// Complex fiber dimension of `G/P_total -> G/P_base`.
pub fn fiber_dimension(total: &ParabolicMarking, base: &ParabolicMarking) -> Result<usize> {
    check_inclusion(total, base)?;
    let base_roots: std::collections::BTreeSet<Weight> =
        base.nilradical_roots().into_iter().collect();
    Ok(total
        .nilradical_roots()
        .into_iter()
        .filter(|alpha| !base_roots.contains(alpha))
        .count())
}

/// Decomposition of the tensor product of two irreducible bundles on one
/// marking. Tensor products of Levi irreducibles are semisimple, so every
/// factor sits in degree zero.
pub fn tensor_decompose(
    marking: &ParabolicMarking,
    a: &Weight,
    b: &Weight,
) -> Result<GradedFactorList> {
    marking.validate_label(a)?;
    marking.validate_label(b)?;
    // A line-bundle factor (trivial on the Levi) only shifts the label.
    let is_line = |w: &Weight| marking.uncrossed_nodes().iter().all(|&i| w.coord(i) == 0);
    if is_line(a) || is_line(b) {
        return Ok(GradedFactorList::new(
            marking.clone(),
            vec![GradedFactor {
                weight: a.add(b),
                degree: 0,
            }],
        ));
    }
    let wa = marking.levi_weights(a)?;
    let wb = marking.levi_weights(b)?;
    let mut product: BTreeMap<Weight, i64> = BTreeMap::new();
    for (x, mx) in &wa {
        for (y, my) in &wb {
            *product.entry(x.add(y)).or_default() += (mx * my) as i64;
        }
    }
    let factors = marking
        .decompose_character(product)?
        .into_iter()
        .flat_map(|(w, m)| {
            std::iter::repeat_n(w, m as usize).map(|weight| GradedFactor { weight, degree: 0 })
        })
        .collect();
    Ok(GradedFactorList::new(marking.clone(), factors))
}
