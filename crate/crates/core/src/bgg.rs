//! BGG complexes along the contractible leg of a double fibration, the
//! BGG-based first page, and its duality check.
//!
//! The complex replaces the coupled relative de Rham complex by one
//! irreducible bundle per minimal-length coset representative, with terms
//! given by the affine (dot) action on the leading label.

use crate::bbw::{direct_image, DirectImage};
use crate::error::{Error, Result};
use crate::relgeom::FibrationSpec;
use crate::roots::{Weight, WeylWord};
use crate::specseq::{compare_dual_pages, DualityReport, E1Page, PageKind};
use std::collections::BTreeMap;
use std::collections::VecDeque;

/// A BGG complex: coset representatives with their lengths, and the term
/// labels grouped by length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BggComplex {
    pub reps: Vec<WeylWord>,
    /// `terms[r]` is the multiset of labels in homological position `r`.
    pub terms: Vec<Vec<Weight>>,
}

impl BggComplex {
    pub fn max_length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }
}

/// Minimal-length representatives of the right cosets of the
/// correspondence-Levi Weyl group inside the domain-Levi Weyl group, ordered
/// by length then lexicographically by word.
pub fn coset_reps(fib: &FibrationSpec) -> Vec<WeylWord> {
    let cartan = fib.cartan();
    let rho = cartan.rho();
    let generators: Vec<usize> = fib.q_marking().uncrossed_nodes().to_vec();
    let subgroup: Vec<usize> = fib.x_marking().uncrossed_nodes().to_vec();
    // Enumerate the domain-Levi Weyl group by right multiplication;
    // breadth-first from the identity with ascending generator order yields
    // the (length, lex)-minimal word for each element.
    let mut elements: BTreeMap<Weight, WeylWord> = BTreeMap::new();
    let mut queue: VecDeque<WeylWord> = VecDeque::new();
    elements.insert(rho.clone(), WeylWord::identity());
    queue.push_back(WeylWord::identity());
    while let Some(word) = queue.pop_front() {
        for &g in &generators {
            let mut next_word = word.clone();
            next_word.0.push(g);
            let image = cartan
                .apply_word(&next_word, &rho)
                .expect("generators in range");
            if let std::collections::btree_map::Entry::Vacant(slot) = elements.entry(image) {
                slot.insert(next_word.clone());
                queue.push_back(next_word);
            }
        }
    }
    // Keep the words that are minimal in their coset: the inverse must map
    // every subgroup simple root to a positive root.
    let mut reps: Vec<WeylWord> = elements
        .values()
        .filter(|word| {
            subgroup.iter().all(|&j| {
                let alpha = cartan.simple_root(j).expect("node in range");
                let image = cartan
                    .apply_word(&word.inverse(), &alpha)
                    .expect("word in range");
                cartan.inner(&image, &rho) > 0
            })
        })
        .cloned()
        .collect();
    reps.sort_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
    let subgroup_order = group_order(fib, &subgroup);
    debug_assert_eq!(reps.len(), elements.len() / subgroup_order);
    reps
}

fn group_order(fib: &FibrationSpec, generators: &[usize]) -> usize {
    let cartan = fib.cartan();
    let rho = cartan.rho();
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = VecDeque::from([rho]);
    while let Some(v) = queue.pop_front() {
        if !seen.insert(v.clone()) {
            continue;
        }
        for &g in generators {
            queue.push_back(cartan.reflect(g, &v).expect("generator in range"));
        }
    }
    seen.len()
}

/// The BGG complex along the contractible leg for the bundle `label` on the
/// domain marking: terms are the dot-action images of the leading
/// correspondence-space label under the coset representatives, grouped by
/// length.
pub fn bgg_complex(fib: &FibrationSpec, label: &Weight) -> Result<BggComplex> {
    fib.q_marking().validate_label(label)?;
    let cartan = fib.cartan();
    let leading = match fib.transport() {
        Some(word) => cartan.apply_word(word, label)?,
        None => label.clone(),
    };
    let reps = coset_reps(fib);
    let max_len = reps.iter().map(WeylWord::len).max().unwrap_or(0);
    let mut terms: Vec<Vec<Weight>> = vec![Vec::new(); max_len + 1];
    for rep in &reps {
        let term = cartan.affine_act(rep, &leading)?;
        debug_assert!(fib.x_marking().is_valid_label(&term));
        terms[rep.len()].push(term);
    }
    for group in &mut terms {
        group.sort();
    }
    Ok(BggComplex { reps, terms })
}

/// Direct images of the BGG terms along the compact leg: the BGG-based first
/// page. Only available in the Hermitian-holomorphic configuration.
pub fn assemble_e1_bgg(fib: &FibrationSpec, label: &Weight) -> Result<E1Page> {
    if !fib.hermitian_holomorphic() {
        return Err(Error::NotHermitianHolomorphic);
    }
    let complex = bgg_complex(fib, label)?;
    let mut page = E1Page::new(
        PageKind::Bgg,
        fib.m_marking().clone(),
        complex.max_length(),
        fib.s(),
    );
    for (r, group) in complex.terms.iter().enumerate() {
        for term in group {
            match direct_image(fib.x_marking(), fib.m_marking(), term)? {
                DirectImage::Vanishes => {}
                DirectImage::Image { degree, label } => page.push(r, degree, label, r),
            }
        }
    }
    page.sort_cells();
    Ok(page)
}

/// Verify the improved duality cell by cell on BGG pages: the page of
/// `kappa_D (x) E*` against the cycle-canonical twist of the dual of the
/// reflected page of `E`.
pub fn check_bgg_duality(fib: &FibrationSpec, label: &Weight) -> Result<DualityReport> {
    let left = assemble_e1_bgg(fib, &fib.serre_twist(label)?)?;
    let right = assemble_e1_bgg(fib, label)?;
    compare_dual_pages(fib, &left, &right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specseq::{assemble_e1, classify, ConcentrationClass};

    fn w(coords: &[i64]) -> Weight {
        Weight::new(coords.to_vec())
    }

    #[test]
    fn twistor_coset_reps() {
        let tw = FibrationSpec::twistor_pp();
        let reps = coset_reps(&tw);
        assert_eq!(reps.len(), 3);
        let lengths: Vec<usize> = reps.iter().map(WeylWord::len).collect();
        assert_eq!(lengths, vec![0, 1, 2]);
        assert_eq!(reps[1], WeylWord(vec![1]));
        assert_eq!(reps[2], WeylWord(vec![1, 2]));
    }

    #[test]
    fn grassmann_coset_reps() {
        let gr = FibrationSpec::grassmann_pm();
        let reps = coset_reps(&gr);
        assert_eq!(reps.len(), 4);
        let lengths: Vec<usize> = reps.iter().map(WeylWord::len).collect();
        assert_eq!(lengths, vec![0, 1, 1, 2]);
    }

    #[test]
    fn degenerate_cosets_single_identity() {
        // When the correspondence marking equals the domain marking the
        // contractible leg has point fibers and the only representative is
        // the identity.
        let cartan = crate::roots::CartanData::series('A', 3).unwrap();
        let fib = FibrationSpec::new(
            "point-fibers",
            crate::bundles::ParabolicMarking::from_mask(cartan.clone(), "xx.").unwrap(),
            crate::bundles::ParabolicMarking::from_mask(cartan, "x..").unwrap(),
            None,
            crate::relgeom::CycleStabilizer::Parabolic,
            true,
        )
        .unwrap();
        assert_eq!(fib.x_marking().mask(), "xx.");
        assert_eq!(fib.d(), 0);
        let reps = coset_reps(&fib);
        assert_eq!(reps, vec![WeylWord::identity()]);
    }

    #[test]
    fn twistor_bgg_terms() {
        let tw = FibrationSpec::twistor_pp();
        // General pattern for (a,b,c).
        for (a, b, c) in [(2i64, 1i64, 3i64), (-6, 0, 1), (0, 0, 0)] {
            let complex = bgg_complex(&tw, &w(&[a, b, c])).unwrap();
            assert_eq!(complex.terms.len(), 3);
            assert_eq!(complex.terms[0], vec![w(&[a, b, c])]);
            assert_eq!(complex.terms[1], vec![w(&[a + b + 1, -b - 2, b + c + 1])]);
            assert_eq!(complex.terms[2], vec![w(&[a + b + c + 2, -b - c - 3, b])]);
        }
        // Named instances.
        let complex = bgg_complex(&tw, &w(&[1, 0, 1])).unwrap();
        assert_eq!(complex.terms[1], vec![w(&[2, -2, 2])]);
        assert_eq!(complex.terms[2], vec![w(&[4, -4, 0])]);
        let complex = bgg_complex(&tw, &w(&[0, 0, 0])).unwrap();
        assert_eq!(complex.terms[1], vec![w(&[1, -2, 1])]);
        assert_eq!(complex.terms[2], vec![w(&[2, -3, 0])]);
    }

    #[test]
    fn bgg_terms_distinct_and_valid_for_regular_labels() {
        let tw = FibrationSpec::twistor_pp();
        for a in -4..=4 {
            for b in 0..=2 {
                for c in 0..=2 {
                    let complex = bgg_complex(&tw, &w(&[a, b, c])).unwrap();
                    let mut all: Vec<&Weight> = complex.terms.iter().flatten().collect();
                    let n = all.len();
                    all.sort();
                    all.dedup();
                    assert_eq!(all.len(), n, "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn tangent_bundle_bgg_page() {
        let tw = FibrationSpec::twistor_pp();
        let page = assemble_e1_bgg(&tw, &w(&[1, 0, 1])).unwrap();
        assert_eq!(page.cell_labels(0, 0), vec![w(&[1, 0, 1])]);
        assert_eq!(page.cell_labels(1, 0), vec![w(&[2, -2, 2])]);
        assert_eq!(page.cell_labels(2, 0), vec![w(&[4, -4, 0])]);
        for p in 0..=2 {
            assert!(page.is_cell_empty(p, 1));
        }
    }

    #[test]
    fn bgg_page_equals_de_rham_page_for_line_bundles() {
        let tw = FibrationSpec::twistor_pp();
        for k in -8..=8 {
            let bgg = assemble_e1_bgg(&tw, &w(&[k, 0, 0])).unwrap();
            let de_rham = assemble_e1(&tw, &w(&[k, 0, 0])).unwrap();
            for p in 0..=2 {
                for q in 0..=1 {
                    assert_eq!(
                        bgg.cell_labels(p, q),
                        de_rham.cell_labels(p, q),
                        "k={k} ({p},{q})"
                    );
                }
            }
        }
    }

    #[test]
    fn negative_range_bgg_rows() {
        let tw = FibrationSpec::twistor_pp();
        let page = assemble_e1_bgg(&tw, &w(&[-6, 0, 1])).unwrap();
        assert_eq!(page.cell_labels(0, 1), vec![w(&[4, -5, 1])]);
        assert_eq!(page.cell_labels(1, 1), vec![w(&[3, -6, 2])]);
    }

    #[test]
    fn bgg_requires_hermitian_holomorphic() {
        let gr = FibrationSpec::grassmann_pm();
        assert!(matches!(
            assemble_e1_bgg(&gr, &w(&[0, 0, 0])),
            Err(Error::NotHermitianHolomorphic)
        ));
    }

    #[test]
    fn bgg_duality_line_bundles_and_tangent() {
        let tw = FibrationSpec::twistor_pp();
        for k in -8..=8 {
            let report = check_bgg_duality(&tw, &w(&[k, 0, 0])).unwrap();
            assert!(report.pass, "k={k}");
        }
        // Tangent bundle: the dual side runs through the serre twist
        // kappa (x) dual = (-6,1,0).
        assert_eq!(tw.serre_twist(&w(&[1, 0, 1])).unwrap(), w(&[-6, 1, 0]));
        let report = check_bgg_duality(&tw, &w(&[1, 0, 1])).unwrap();
        assert!(report.pass);
        // Trivial bundle: the top corner of the twisted page pairs with the
        // bottom corner of the trivial one.
        let report = check_bgg_duality(&tw, &w(&[0, 0, 0])).unwrap();
        assert!(report.pass);
        let corner = report.cells.iter().find(|c| (c.p, c.q) == (2, 1)).unwrap();
        assert_eq!(corner.left, vec![w(&[0, -4, 0])]);
        let bottom = report.cells.iter().find(|c| (c.p, c.q) == (0, 0)).unwrap();
        assert!(bottom.left.is_empty() && bottom.right.is_empty());
    }

    #[test]
    fn euler_characteristic_of_bgg_equals_de_rham() {
        use rand::{Rng, SeedableRng};
        use std::collections::BTreeMap;
        let tw = FibrationSpec::twistor_pp();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let label = w(&[
                rng.gen_range(-5..=5),
                rng.gen_range(0..=4),
                rng.gen_range(0..=4),
            ]);
            let x = tw.x_marking();
            let mut alternating: BTreeMap<Weight, i64> = BTreeMap::new();
            let complex = bgg_complex(&tw, &label).unwrap();
            for (r, group) in complex.terms.iter().enumerate() {
                let sign = if r % 2 == 0 { 1 } else { -1 };
                for term in group {
                    for (weight, m) in x.levi_weights(term).unwrap() {
                        *alternating.entry(weight).or_default() += sign * m as i64;
                    }
                }
            }
            for p in 0..=tw.d() {
                let sign = if p % 2 == 0 { -1 } else { 1 };
                let coupled = tw.coupled_forms(&label, p).unwrap();
                for factor in coupled.factors() {
                    for (weight, m) in x.levi_weights(&factor.weight).unwrap() {
                        *alternating.entry(weight).or_default() += sign * m as i64;
                    }
                }
            }
            assert!(
                alternating.values().all(|&v| v == 0),
                "Euler characteristics differ at {label}"
            );
        }
    }

    #[test]
    fn bgg_strict_zero_sweep_and_class_agreement() {
        let tw = FibrationSpec::twistor_pp();
        for a in 0..=6 {
            for b in 0..=3 {
                for c in 0..=3 {
                    let page = assemble_e1_bgg(&tw, &w(&[a, b, c])).unwrap();
                    assert_eq!(
                        classify(&page).class,
                        ConcentrationClass::StrictDegreeZero,
                        "({a},{b},{c})"
                    );
                }
            }
        }
        // Same classification as the de Rham page. Exact agreement holds in
        // the two theorem regimes; in between, the cancellation can empty a
        // whole column (for instance at (-6,0,3)), so only the concentration
        // family is compared there.
        for a in -14..=6i64 {
            for b in 0..=3i64 {
                for c in 0..=3i64 {
                    let label = w(&[a, b, c]);
                    let bgg = classify(&assemble_e1_bgg(&tw, &label).unwrap()).class;
                    let de_rham = classify(&assemble_e1(&tw, &label).unwrap()).class;
                    if a >= 0 || a <= -4 - b - c {
                        assert_eq!(bgg, de_rham, "({a},{b},{c})");
                    } else {
                        assert_eq!(
                            bgg.is_degree_zero(),
                            de_rham.is_degree_zero(),
                            "({a},{b},{c})"
                        );
                        assert_eq!(
                            bgg.is_top_degree(),
                            de_rham.is_top_degree(),
                            "({a},{b},{c})"
                        );
                    }
                }
            }
        }
    }
}
