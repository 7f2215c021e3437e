//! Pinned distance sets: the lifted incidence chain identity
//! I(P~, V) = |P|^2, and the two conclusions of the distance corollary
//! checked with exact rational epsilon thresholds.
//!
//! Run with: cargo run --example pinned_distances

use fq_incidence::gf::FieldCtx;
use fq_incidence::pinned::{
    min_admissible_size, pinned_distance_set, pinned_incidence_chain, verify_pinned_corollary,
    PinnedConfig,
};
use fq_incidence::sampling::{sample_subset, trial_rng};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    println!("=== Pinned distances over F_q^2 ===\n");

    let ctx = FieldCtx::new(7, 1, None).unwrap();

    // A small pinned distance set by hand.
    let pts = vec![0u64, 8, 16, 24]; // the diagonal x = y in F_7^2
    let delta = pinned_distance_set(&ctx, 2, &pts, 0).unwrap();
    println!("diagonal points, pin at origin: Delta = {delta:?}");

    // The incidence chain: lift P to P~ and map pins to paraboloids.
    let mut rng = trial_rng(99, 0);
    let p = sample_subset(&mut rng, 49, 20);
    let chain = pinned_incidence_chain(ctx.clone(), 2, &p).unwrap();
    println!(
        "\nchain at |P| = 20: |P~| = {}, I(P~, V) = {} = |P|^2 ({}), d=1 bound verdict {:?}",
        chain.size_p_tilde, chain.incidences, chain.identity_holds, chain.bound_row.verdict
    );

    // The corollary at eps = 1/2: admissible sizes and both conclusions.
    let eps = BigRational::new(BigInt::from(1), BigInt::from(2));
    let min = min_admissible_size(7, 2, &eps).unwrap();
    println!("\neps = 1/2 at q = 7: smallest admissible |P| is {min}");
    for trial in 0..5u64 {
        let mut rng = trial_rng(100, trial);
        let pts = sample_subset(&mut rng, 49, min as usize);
        let cfg = PinnedConfig::new(ctx.clone(), 2, eps.clone(), pts).unwrap();
        let rep = verify_pinned_corollary(&cfg).unwrap();
        println!(
            "  draw {trial}: sum |Delta| = {:>3}, average_ok {}, |Q| = {:>2}, count_ok {}",
            rep.sum_pinned, rep.average_ok, rep.count_q, rep.count_ok
        );
    }

    // eps = 1/4 at q = 7 is vacuous: the threshold exceeds q^n.
    let eps4 = BigRational::new(BigInt::from(1), BigInt::from(4));
    println!(
        "\neps = 1/4 at q = 7: min admissible size = {:?} (threshold exceeds q^n = 49)",
        min_admissible_size(7, 2, &eps4)
    );
}
