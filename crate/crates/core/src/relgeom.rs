//! Double-fibration data: relative differential forms along the contractible
//! leg, pullback composition factors, and Weyl-conjugation transport of
//! labels.
//!
//! A fibration is specified by the marking of the domain side `Q`, the
//! marking carrying the cycle-space labels `M`, an optional transport word
//! (applied when the domain-side basepoint is not the standard parabolic),
//! and the type of the cycle stabilizer. The correspondence space `X` and the
//! relative weight data are derived from the root sets of the two
//! subalgebras.

use crate::bundles::{fiber_dimension, GradedFactor, GradedFactorList, ParabolicMarking};
use crate::error::{Error, Result};

pub use crate::bundles::tensor_decompose;
use crate::roots::{CartanData, Weight, WeylWord};
use std::collections::{BTreeMap, BTreeSet};

/// Group-theoretic type of the subgroup whose quotient carries the cycles.
///
/// `Parabolic` is the Hermitian-holomorphic situation (the cycle space is
/// dual to a flag manifold `G/P`); `Levi` covers correspondences whose
/// cycles are stabilized by the Levi subgroup of the marking itself.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CycleStabilizer {
    Parabolic,
    Levi,
}

/// A double fibration between flag manifolds, reduced to weight data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FibrationSpec {
    name: String,
    q_marking: ParabolicMarking,
    m_marking: ParabolicMarking,
    transport: Option<WeylWord>,
    stabilizer: CycleStabilizer,
    hermitian_holomorphic: bool,
    x_marking: ParabolicMarking,
    // Relative cotangent weight set with filtration depths.
    rel_weights: Vec<(Weight, usize)>,
    d: usize,
    s: usize,
}

impl FibrationSpec {
    pub fn new(
        name: &str,
        q_marking: ParabolicMarking,
        m_marking: ParabolicMarking,
        transport: Option<WeylWord>,
        stabilizer: CycleStabilizer,
        hermitian_holomorphic: bool,
    ) -> Result<FibrationSpec> {
        if q_marking.cartan() != m_marking.cartan() {
            return Err(Error::CartanMismatch);
        }
        let cartan = q_marking.cartan().clone();
        let q_roots = transported_roots(&cartan, &parabolic_roots(&q_marking), &transport)?;
        let j_roots = match stabilizer {
            CycleStabilizer::Parabolic => parabolic_roots(&m_marking),
            CycleStabilizer::Levi => levi_roots(&m_marking),
        };
        let common: BTreeSet<Weight> = q_roots.intersection(&j_roots).cloned().collect();
        // Empty here means point fibers on the contractible leg; permitted so
        // that fully degenerate correspondences still classify, though a
        // genuine double fibration has d >= 1.
        let rel: Vec<Weight> = q_roots.difference(&common).cloned().collect();
        // Reductive directions of the intersection determine the Levi of the
        // correspondence space.
        let x_uncrossed: BTreeSet<usize> = (0..cartan.rank())
            .filter(|&i| {
                let alpha = cartan.simple_root(i).expect("node in range");
                common.contains(&alpha) && common.contains(&alpha.neg())
            })
            .collect();
        let x_crossed: Vec<usize> = (0..cartan.rank())
            .filter(|i| !x_uncrossed.contains(i))
            .collect();
        let x_marking = ParabolicMarking::new(cartan.clone(), &x_crossed)?;
        if !x_marking.contains(&m_marking) {
            return Err(Error::DegenerateFibration(
                "cycle-space marking not dominated by the correspondence marking".into(),
            ));
        }
        // Raising directions: the unipotent part of the intersection.
        let raising: Vec<Weight> = common
            .iter()
            .filter(|beta| !common.contains(&beta.neg()))
            .cloned()
            .collect();
        let rel_set: BTreeSet<Weight> = rel.iter().cloned().collect();
        let mut depths: BTreeMap<Weight, usize> = BTreeMap::new();
        for t in &rel {
            depth_of(t, &rel_set, &raising, &mut depths, rel.len());
        }
        let rel_weights: Vec<(Weight, usize)> =
            rel.iter().map(|t| (t.clone(), depths[t])).collect();
        let d = rel_weights.len();
        let s = fiber_dimension(&x_marking, &m_marking)?;
        if s == 0 {
            return Err(Error::DegenerateFibration(
                "compact leg has zero-dimensional fibers".into(),
            ));
        }
        Ok(FibrationSpec {
            name: name.to_string(),
            q_marking,
            m_marking,
            transport,
            stabilizer,
            hermitian_holomorphic,
            x_marking,
            rel_weights,
            d,
            s,
        })
    }

    /// The projective-space correspondence: domain marking `x..`, cycle
    /// space `.x.`, standard basepoints, Hermitian-holomorphic.
    pub fn twistor_pp() -> FibrationSpec {
        let cartan = CartanData::series('A', 3).expect("A3 is finite type");
        FibrationSpec::new(
            "twistor-pp",
            ParabolicMarking::from_mask(cartan.clone(), "x..").expect("valid mask"),
            ParabolicMarking::from_mask(cartan, ".x.").expect("valid mask"),
            None,
            CycleStabilizer::Parabolic,
            true,
        )
        .expect("bundled fibration is well formed")
    }

    /// The indefinite-Grassmannian correspondence: both markings `.x.`, with
    /// a middle-reflection transport for the non-standard basepoint and the
    /// Levi subgroup stabilizing the cycles.
    pub fn grassmann_pm() -> FibrationSpec {
        let cartan = CartanData::series('A', 3).expect("A3 is finite type");
        FibrationSpec::new(
            "grassmann-pm",
            ParabolicMarking::from_mask(cartan.clone(), ".x.").expect("valid mask"),
            ParabolicMarking::from_mask(cartan, ".x.").expect("valid mask"),
            Some(WeylWord(vec![1])),
            CycleStabilizer::Levi,
            false,
        )
        .expect("bundled fibration is well formed")
    }

    pub fn by_name(name: &str) -> Option<FibrationSpec> {
        match name {
            "twistor-pp" => Some(FibrationSpec::twistor_pp()),
            "grassmann-pm" => Some(FibrationSpec::grassmann_pm()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cartan(&self) -> &CartanData {
        self.q_marking.cartan()
    }

    pub fn q_marking(&self) -> &ParabolicMarking {
        &self.q_marking
    }

    pub fn m_marking(&self) -> &ParabolicMarking {
        &self.m_marking
    }

    pub fn x_marking(&self) -> &ParabolicMarking {
        &self.x_marking
    }

    pub fn transport(&self) -> Option<&WeylWord> {
        self.transport.as_ref()
    }

    pub fn stabilizer(&self) -> CycleStabilizer {
        self.stabilizer
    }

    pub fn hermitian_holomorphic(&self) -> bool {
        self.hermitian_holomorphic
    }

    /// Fiber dimension of the contractible leg.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Fiber dimension of the compact leg.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Canonical bundle of the domain side, as a label on `Q`.
    pub fn kappa_d(&self) -> Weight {
        self.q_marking.canonical_bundle()
    }

    /// Canonical label along the contractible-leg fibers: the top relative
    /// form.
    pub fn kappa_mu(&self) -> Weight {
        let mut sum = Weight::zero(self.cartan().rank());
        for (t, _) in &self.rel_weights {
            sum = sum.add(t);
        }
        sum
    }

    /// Canonical label of the cycle space.
    pub fn cycle_canonical(&self) -> Weight {
        match self.stabilizer {
            CycleStabilizer::Parabolic => self.m_marking.canonical_bundle(),
            // Tangent weights of a reductive quotient come in opposite
            // pairs, so the canonical label is trivial.
            CycleStabilizer::Levi => Weight::zero(self.cartan().rank()),
        }
    }

    /// Label of the domain-side bundle twisted for the duality statement:
    /// `kappa_D (x) E*`.
    pub fn serre_twist(&self, label: &Weight) -> Result<Weight> {
        Ok(self.kappa_d().add(&self.q_marking.dual_label(label)?))
    }

    /// Composition factors of the bundle of relative `p`-forms on the
    /// correspondence marking.
    pub fn relative_cotangent(&self, p: usize) -> Result<GradedFactorList> {
        if p > self.d {
            return Err(Error::FormDegreeOutOfRange { p, max: self.d });
        }
        let rank = self.cartan().rank();
        // p-fold sums over the relative weight set, each carrying the sum of
        // the depths of its members.
        let mut subset_degrees: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        let mut character: BTreeMap<Weight, i64> = BTreeMap::new();
        for combo in combinations(self.rel_weights.len(), p) {
            let mut sum = Weight::zero(rank);
            let mut deg = 0usize;
            for &ix in &combo {
                sum = sum.add(&self.rel_weights[ix].0);
                deg += self.rel_weights[ix].1;
            }
            subset_degrees.entry(sum.clone()).or_default().push(deg);
            *character.entry(sum).or_default() += 1;
        }
        for degs in subset_degrees.values_mut() {
            degs.sort_unstable();
        }
        let extracted = self.x_marking.decompose_character(character)?;
        let mut factors = Vec::new();
        for (hw, mult) in extracted {
            let bucket = subset_degrees
                .get_mut(&hw)
                .expect("highest weight arises from some subset");
            for _ in 0..mult {
                let degree = if bucket.is_empty() {
                    0
                } else {
                    bucket.remove(0)
                };
                factors.push(GradedFactor {
                    weight: hw.clone(),
                    degree,
                });
            }
        }
        let min = factors.iter().map(|f| f.degree).min().unwrap_or(0);
        for f in &mut factors {
            f.degree -= min;
        }
        Ok(GradedFactorList::new(self.x_marking.clone(), factors))
    }

    /// Composition factors of the pullback of an irreducible bundle from the
    /// domain side to the correspondence space.
    ///
    /// The branching is computed in standard coordinates (character
    /// restriction plus highest-weight extraction, graded by the crossed-node
    /// coweight pairing against the leading term); the transport word is then
    /// applied to the labels, leaving degrees unchanged.
    pub fn pullback_factors(&self, label: &Weight) -> Result<GradedFactorList> {
        self.q_marking.validate_label(label)?;
        let character: BTreeMap<Weight, i64> = self
            .q_marking
            .levi_weights(label)?
            .into_iter()
            .map(|(w, m)| (w, m as i64))
            .collect();
        let extracted = self.x_marking.decompose_character(character)?;
        let cartan = self.cartan();
        let crossed = self.x_marking.crossed_nodes();
        let mut factors = Vec::new();
        for (hw, mult) in extracted {
            let diff = label.sub(&hw);
            let coeffs = cartan
                .expand_in_simple_roots(&diff)
                .expect("branching drops by Levi roots");
            let degree: i64 = crossed.iter().map(|&i| coeffs[i]).sum();
            debug_assert!(degree >= 0);
            let out = match &self.transport {
                Some(word) => cartan.apply_word(word, &hw)?,
                None => hw,
            };
            debug_assert!(self.x_marking.is_valid_label(&out));
            for _ in 0..mult {
                factors.push(GradedFactor {
                    weight: out.clone(),
                    degree: degree as usize,
                });
            }
        }
        Ok(GradedFactorList::new(self.x_marking.clone(), factors))
    }

    /// Relative `p`-forms coupled to the pullback of `label`: the flattened
    /// graded factor list of the tensor product, degrees added.
    pub fn coupled_forms(&self, label: &Weight, p: usize) -> Result<GradedFactorList> {
        let omega = self.relative_cotangent(p)?;
        let pulled = self.pullback_factors(label)?;
        let mut factors = Vec::new();
        for of in omega.factors() {
            for pf in pulled.factors() {
                let product = tensor_decompose(&self.x_marking, &of.weight, &pf.weight)?;
                for tf in product.factors() {
                    factors.push(GradedFactor {
                        weight: tf.weight.clone(),
                        degree: of.degree + pf.degree,
                    });
                }
            }
        }
        Ok(GradedFactorList::new(self.x_marking.clone(), factors))
    }
}

fn parabolic_roots(marking: &ParabolicMarking) -> BTreeSet<Weight> {
    let mut out: BTreeSet<Weight> = marking.cartan().positive_roots().iter().cloned().collect();
    for alpha in levi_positive_roots(marking) {
        out.insert(alpha.neg());
    }
    out
}

fn levi_roots(marking: &ParabolicMarking) -> BTreeSet<Weight> {
    let mut out = BTreeSet::new();
    for alpha in levi_positive_roots(marking) {
        out.insert(alpha.neg());
        out.insert(alpha);
    }
    out
}

fn levi_positive_roots(marking: &ParabolicMarking) -> Vec<Weight> {
    let cartan = marking.cartan();
    cartan
        .positive_roots()
        .iter()
        .zip(cartan.positive_root_coords())
        .filter(|(_, coeffs)| (0..cartan.rank()).all(|i| coeffs[i] == 0 || !marking.is_crossed(i)))
        .map(|(alpha, _)| alpha.clone())
        .collect()
}

fn transported_roots(
    cartan: &CartanData,
    roots: &BTreeSet<Weight>,
    transport: &Option<WeylWord>,
) -> Result<BTreeSet<Weight>> {
    match transport {
        None => Ok(roots.clone()),
        Some(word) => roots.iter().map(|r| cartan.apply_word(word, r)).collect(),
    }
}

fn depth_of(
    t: &Weight,
    rel: &BTreeSet<Weight>,
    raising: &[Weight],
    memo: &mut BTreeMap<Weight, usize>,
    budget: usize,
) -> usize {
    if let Some(&d) = memo.get(t) {
        return d;
    }
    assert!(budget > 0, "raising chains must terminate");
    let mut best = 0;
    for beta in raising {
        let up = t.add(beta);
        if rel.contains(&up) {
            best = best.max(1 + depth_of(&up, rel, raising, memo, budget - 1));
        }
    }
    memo.insert(t.clone(), best);
    best
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(coords: &[i64]) -> Weight {
        Weight::new(coords.to_vec())
    }

    fn sorted_weights(list: &GradedFactorList) -> Vec<(Weight, usize)> {
        list.factors()
            .iter()
            .map(|f| (f.weight.clone(), f.degree))
            .collect()
    }

    #[test]
    fn bundled_fibration_shapes() {
        let tw = FibrationSpec::twistor_pp();
        assert_eq!(tw.d(), 2);
        assert_eq!(tw.s(), 1);
        assert_eq!(tw.x_marking().mask(), "xx.");
        assert!(tw.hermitian_holomorphic());

        let gr = FibrationSpec::grassmann_pm();
        assert_eq!(gr.d(), 6);
        assert_eq!(gr.s(), 2);
        assert_eq!(gr.x_marking().mask(), "xxx");
        assert!(!gr.hermitian_holomorphic());
    }

    #[test]
    fn twistor_relative_forms() {
        let tw = FibrationSpec::twistor_pp();
        let p0 = tw.relative_cotangent(0).unwrap();
        assert_eq!(sorted_weights(&p0), vec![(w(&[0, 0, 0]), 0)]);
        let p1 = tw.relative_cotangent(1).unwrap();
        assert_eq!(sorted_weights(&p1), vec![(w(&[1, -2, 1]), 0)]);
        let p2 = tw.relative_cotangent(2).unwrap();
        assert_eq!(sorted_weights(&p2), vec![(w(&[2, -3, 0]), 0)]);
        assert!(tw.relative_cotangent(3).is_err());
        assert_eq!(tw.kappa_mu(), w(&[2, -3, 0]));
    }

    #[test]
    fn grassmann_relative_one_forms() {
        let gr = FibrationSpec::grassmann_pm();
        let p1 = gr.relative_cotangent(1).unwrap();
        let got = sorted_weights(&p1);
        let expected = vec![
            (w(&[1, -2, 1]), 0),
            (w(&[1, 0, 1]), 0),
            (w(&[-1, -1, 1]), 1),
            (w(&[-1, 1, 1]), 1),
            (w(&[1, -1, -1]), 1),
            (w(&[1, 1, -1]), 1),
        ];
        assert_eq!(got.len(), 6);
        for e in &expected {
            assert!(got.contains(e), "missing {:?}", e);
        }
    }

    #[test]
    fn grassmann_relative_two_forms() {
        let gr = FibrationSpec::grassmann_pm();
        let p2 = gr.relative_cotangent(2).unwrap();
        let got = sorted_weights(&p2);
        assert_eq!(got.len(), 15);
        // The delicate tail of the display: two boxed line bundles and the
        // trivial label with multiplicity two.
        assert!(got.contains(&(w(&[-2, 0, 2]), 2)));
        assert!(got.contains(&(w(&[2, 0, -2]), 2)));
        assert_eq!(got.iter().filter(|(x, _)| *x == w(&[0, 0, 0])).count(), 2);
        assert!(got.contains(&(w(&[0, -3, 2]), 1)));
        assert!(got.contains(&(w(&[2, -3, 0]), 1)));
        assert!(got.contains(&(w(&[0, 1, 2]), 1)));
        assert!(got.contains(&(w(&[2, 1, 0]), 1)));
        assert!(got.contains(&(w(&[2, -2, 2]), 0)));
    }

    #[test]
    fn rank_bookkeeping_binomials() {
        for fib in [FibrationSpec::twistor_pp(), FibrationSpec::grassmann_pm()] {
            let d = fib.d();
            for p in 0..=d {
                let list = fib.relative_cotangent(p).unwrap();
                let total = list.total_dimension().unwrap();
                assert_eq!(total, binomial(d, p), "{} p={p}", fib.name());
            }
        }
    }

    fn binomial(n: usize, k: usize) -> u128 {
        let mut out: u128 = 1;
        for i in 0..k {
            out = out * (n - i) as u128 / (i + 1) as u128;
        }
        out
    }

    #[test]
    fn hodge_identity_factor_by_factor() {
        for fib in [FibrationSpec::twistor_pp(), FibrationSpec::grassmann_pm()] {
            let d = fib.d();
            let kappa_mu = fib.kappa_mu();
            let x = fib.x_marking();
            for p in 0..=d {
                let lhs = fib.relative_cotangent(p).unwrap();
                let rhs = fib.relative_cotangent(d - p).unwrap();
                let mut expected: Vec<Weight> = rhs
                    .factors()
                    .iter()
                    .map(|f| kappa_mu.add(&x.dual_label(&f.weight).unwrap()))
                    .collect();
                expected.sort();
                let mut got: Vec<Weight> = lhs.factors().iter().map(|f| f.weight.clone()).collect();
                got.sort();
                assert_eq!(got, expected, "{} p={p}", fib.name());
            }
        }
    }

    #[test]
    fn twistor_pullback_instances() {
        let tw = FibrationSpec::twistor_pp();
        // Line bundles stay irreducible.
        for k in [-5i64, 0, 3] {
            let f = tw.pullback_factors(&w(&[k, 0, 0])).unwrap();
            assert_eq!(sorted_weights(&f), vec![(w(&[k, 0, 0]), 0)]);
        }
        // Tangent bundle: two factors.
        let f = tw.pullback_factors(&w(&[1, 0, 1])).unwrap();
        assert_eq!(
            sorted_weights(&f),
            vec![(w(&[1, 0, 1]), 0), (w(&[2, -1, 0]), 1)]
        );
        // Full composition pattern for (0,1,1).
        let f = tw.pullback_factors(&w(&[0, 1, 1])).unwrap();
        assert_eq!(
            sorted_weights(&f),
            vec![
                (w(&[0, 1, 1]), 0),
                (w(&[1, -1, 2]), 1),
                (w(&[1, 0, 0]), 1),
                (w(&[2, -2, 1]), 2),
            ]
        );
    }

    #[test]
    fn grassmann_pullback_transport() {
        let gr = FibrationSpec::grassmann_pm();
        let f = gr.pullback_factors(&w(&[2, 1, 0])).unwrap();
        assert_eq!(
            sorted_weights(&f),
            vec![
                (w(&[3, -1, 1]), 0),
                (w(&[2, -2, 2]), 1),
                (w(&[1, -3, 3]), 2),
            ]
        );
        // General display: leading term and the two ends.
        let f = gr.pullback_factors(&w(&[2, 1, 1])).unwrap();
        let got = sorted_weights(&f);
        assert_eq!(got.len(), 6);
        assert!(got.contains(&(w(&[3, -1, 2]), 0)));
        assert!(got.contains(&(w(&[2, -2, 3]), 1)));
        assert!(got.contains(&(w(&[4, -2, 1]), 1)));
        assert!(got.contains(&(w(&[2, -4, 3]), 3)));
    }

    #[test]
    fn transport_is_relabelling() {
        // For (a,b,0) the transported chain is the untransported branching
        // string relabelled by the middle reflection, element by element:
        // the i-th factor becomes (a+b-i, -b-i, b+i).
        let gr = FibrationSpec::grassmann_pm();
        let cartan = gr.cartan().clone();
        for (a, b) in [(1i64, 0i64), (2, 1), (3, -2), (0, 4)] {
            let label = w(&[a, b, 0]);
            let twisted = gr.pullback_factors(&label).unwrap();
            let mut expected: Vec<(Weight, usize)> = (0..=a)
                .map(|i| (w(&[a + b - i, -b - i, b + i]), i as usize))
                .collect();
            expected.sort_by(|x, y| (x.1, &x.0).cmp(&(y.1, &y.0)));
            assert_eq!(sorted_weights(&twisted), expected, "at {label}");
            // And each element is the reflection of the plain branching step
            // (a-2i, b+i, 0).
            for i in 0..=a {
                let plain = w(&[a - 2 * i, b + i, 0]);
                assert_eq!(
                    cartan.apply_word(&WeylWord(vec![1]), &plain).unwrap(),
                    w(&[a + b - i, -b - i, b + i])
                );
            }
        }
    }

    #[test]
    fn branching_conserves_dimension_and_character() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for fib in [FibrationSpec::twistor_pp(), FibrationSpec::grassmann_pm()] {
            for _ in 0..20 {
                let label = Weight::new(
                    (0..3)
                        .map(|i| {
                            if fib.q_marking().is_crossed(i) {
                                rng.gen_range(-4..=4)
                            } else {
                                rng.gen_range(0..=4)
                            }
                        })
                        .collect(),
                );
                let factors = fib.pullback_factors(&label).unwrap();
                assert_eq!(
                    factors.total_dimension().unwrap(),
                    fib.q_marking().levi_dimension(&label).unwrap(),
                    "{} {label}",
                    fib.name()
                );
                if fib.transport().is_none() {
                    // Untransported branching preserves the character exactly.
                    let original = fib.q_marking().levi_weights(&label).unwrap();
                    let branched = factors.character().unwrap();
                    assert_eq!(
                        branched,
                        original
                            .into_iter()
                            .map(|(k, v)| (k, v as i64))
                            .collect::<BTreeMap<_, _>>(),
                        "{} {label}",
                        fib.name()
                    );
                }
            }
        }
    }

    #[test]
    fn coupled_forms_instances() {
        let tw = FibrationSpec::twistor_pp();
        // Line-bundle coefficients twist the relative forms.
        for k in [-5i64, -1, 2] {
            let c = tw.coupled_forms(&w(&[k, 0, 0]), 1).unwrap();
            assert_eq!(sorted_weights(&c), vec![(w(&[k + 1, -2, 1]), 0)]);
            let c = tw.coupled_forms(&w(&[k, 0, 0]), 2).unwrap();
            assert_eq!(sorted_weights(&c), vec![(w(&[k + 2, -3, 0]), 0)]);
        }
        // Coupled one-forms with tangent-bundle coefficients.
        let c = tw.coupled_forms(&w(&[1, 0, 1]), 1).unwrap();
        assert_eq!(
            sorted_weights(&c),
            vec![
                (w(&[2, -2, 2]), 0),
                (w(&[2, -1, 0]), 0),
                (w(&[3, -3, 1]), 1),
            ]
        );
        let c = tw.coupled_forms(&w(&[1, 0, 1]), 2).unwrap();
        assert_eq!(
            sorted_weights(&c),
            vec![(w(&[3, -3, 1]), 0), (w(&[4, -4, 0]), 1)]
        );
        // Degree zero with a line bundle is the pullback itself.
        let c = tw.coupled_forms(&w(&[7, 0, 0]), 0).unwrap();
        assert_eq!(sorted_weights(&c), vec![(w(&[7, 0, 0]), 0)]);
    }
}
