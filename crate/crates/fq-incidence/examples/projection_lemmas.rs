//! Exact rational spectral projectors and the projection-norm lemmas: the
//! squared norm of an indicator vector's projection onto the top eigenspace
//! is |S|^2/order exactly, and its middle-eigenspace component obeys a
//! closed-form bound. No floats: every norm is a BigRational.
//!
//! Run with: cargo run --example projection_lemmas

use fq_incidence::gf::FieldCtx;
use fq_incidence::grid::Guards;
use fq_incidence::incidence::{gram_points, gram_varieties, Side};
use fq_incidence::sampling::{sample_size, sample_subset, trial_rng};
use fq_incidence::spectral::{projection_norm_check, projectors, SpectrumSpec};
use fq_incidence::variety::VarietyFamily;

fn main() {
    println!("=== Projection-norm lemmas with exact rational projectors ===\n");
    let guards = Guards::default();

    let ctx = FieldCtx::new(3, 1, None).unwrap();
    let fam = VarietyFamily::flat_family(ctx, 1, 2).unwrap();
    let a = gram_points(&fam, guards.t_bits as u128, guards.gram_order as u128).unwrap();
    let b = gram_varieties(&fam, guards.t_bits as u128, guards.gram_order as u128).unwrap();

    for (g, side) in [(a, Side::Points), (b, Side::Varieties)] {
        let spec = SpectrumSpec::new(&fam, side);
        let projs = projectors(&g, &spec).unwrap();
        println!(
            "{side:?} side, order {}: projector traces = {:?} (the multiplicities)",
            spec.order,
            projs
                .projs
                .iter()
                .map(|p| p.trace().to_string())
                .collect::<Vec<_>>()
        );

        // a few random indicator sets
        for trial in 0..4u64 {
            let mut rng = trial_rng(2024, trial);
            let sz = sample_size(&mut rng, spec.order);
            let s = sample_subset(&mut rng, spec.order, sz);
            let rep = projection_norm_check(&projs, &fam, &s);
            println!(
                "  |S| = {:>2}: norms (top, middle, kernel) = ({}, {}, {}) \
                 top-equality {} middle-bounded {}",
                rep.size,
                rep.norms[0],
                rep.norms[1],
                rep.norms[2],
                rep.top_equality,
                rep.middle_within_bound
            );
            assert!(rep.top_equality && rep.middle_within_bound);
        }

        // the full set projects entirely onto the top eigenspace
        let full: Vec<u64> = (0..spec.order).collect();
        let rep = projection_norm_check(&projs, &fam, &full);
        println!(
            "  full set: middle component is exactly {} (trivial character direction)\n",
            rep.norms[1]
        );
    }
}
