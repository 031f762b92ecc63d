//! Structural cross-checks that tie independent code paths together:
//! pushforward transitivity across nested markings, and the duality
//! isomorphism on correspondences of other Cartan types.

use flagcalc::{
    assemble_e1, check_duality, direct_image, full_cohomology, CartanData, CycleStabilizer,
    DirectImage, FibrationSpec, ParabolicMarking, Weight,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn markings(cartan: &CartanData) -> Vec<ParabolicMarking> {
    let rank = cartan.rank();
    (0..(1u32 << rank))
        .map(|bits| {
            ParabolicMarking::new(
                cartan.clone(),
                &(0..rank).filter(|&i| bits & (1 << i) != 0).collect::<Vec<_>>(),
            )
            .unwrap()
        })
        .collect()
}

/// Global cohomology factors through any intermediate direct image with
/// degrees adding: pushing to a base and then to a point agrees with going
/// to the point directly.
#[test]
fn pushforward_transitivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for cartan in [
        CartanData::series('A', 2).unwrap(),
        CartanData::series('A', 3).unwrap(),
        CartanData::series('B', 2).unwrap(),
    ] {
        let all = markings(&cartan);
        for total in &all {
            for base in &all {
                if !total.contains(base) || total == base {
                    continue;
                }
                for _ in 0..40 {
                    let label = Weight::new(
                        (0..cartan.rank())
                            .map(|i| {
                                if total.is_crossed(i) {
                                    rng.gen_range(-5..=5)
                                } else {
                                    rng.gen_range(0..=4)
                                }
                            })
                            .collect(),
                    );
                    let direct = full_cohomology(total, &label).unwrap();
                    let composed = match direct_image(total, base, &label).unwrap() {
                        DirectImage::Vanishes => DirectImage::Vanishes,
                        DirectImage::Image { degree, label } => {
                            match full_cohomology(base, &label).unwrap() {
                                DirectImage::Vanishes => DirectImage::Vanishes,
                                DirectImage::Image {
                                    degree: rest,
                                    label,
                                } => DirectImage::Image {
                                    degree: degree + rest,
                                    label,
                                },
                            }
                        }
                    };
                    assert_eq!(
                        direct,
                        composed,
                        "{} over {} at {label}",
                        total.mask(),
                        base.mask()
                    );
                }
            }
        }
    }
}

/// The duality isomorphism is not specific to one Cartan type: it holds on
/// parabolic correspondences of types A2, A4 and B2 as well.
#[test]
fn duality_on_other_cartan_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let cases = [
        ("A2", "x.", ".x"),
        ("A4", "x...", ".x.."),
        ("A4", "xx..", "..x."),
        ("B2", "x.", ".x"),
        ("B2", ".x", "x."),
    ];
    for (name, q_mask, m_mask) in cases {
        let cartan = CartanData::parse(name).unwrap();
        let q = ParabolicMarking::from_mask(cartan.clone(), q_mask).unwrap();
        let m = ParabolicMarking::from_mask(cartan.clone(), m_mask).unwrap();
        let fib = FibrationSpec::new(
            "general",
            q,
            m,
            None,
            CycleStabilizer::Parabolic,
            true,
        )
        .unwrap();
        assert!(fib.d() >= 1 && fib.s() >= 1, "{name} {q_mask}/{m_mask}");
        for _ in 0..15 {
            let label = Weight::new(
                (0..cartan.rank())
                    .map(|i| {
                        if fib.q_marking().is_crossed(i) {
                            rng.gen_range(-4..=4)
                        } else {
                            rng.gen_range(0..=3)
                        }
                    })
                    .collect(),
            );
            let page = assemble_e1(&fib, &label).unwrap();
            assert!(page.d() == fib.d() && page.s() == fib.s());
            let report = check_duality(&fib, &label).unwrap();
            assert!(
                report.pass,
                "{name} {q_mask}/{m_mask} duality fails at {label}"
            );
        }
    }
}
