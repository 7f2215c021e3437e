//! Enumerate every n-flat of F_q^{n+d} in canonical RREF form, identify the
//! graph-flat subfamily F0, and check the all-flats incidence bound on
//! random draws. Also shows the one-line flat dump format.
//!
//! Run with: cargo run --example flat_census

use fq_incidence::bounds::gaussian_binomial;
use fq_incidence::flats::{check_flats_theorem, flat_family_census, Flat};
use fq_incidence::gf::FieldCtx;
use fq_incidence::sampling::{sample_size, sample_subset, trial_rng};

fn main() {
    println!("=== Flat census and the all-flats bound ===\n");

    // Count check: |F1| = q^d [n+d choose n]_q, |F0| = q^{d(n+1)}.
    for (q, n, d) in [(2u64, 1usize, 1usize), (3, 1, 1), (2, 2, 1), (3, 1, 2)] {
        let ctx = FieldCtx::new(q, 1, None).unwrap();
        let census = flat_family_census(ctx, n, d, 1 << 20).unwrap();
        let gauss = gaussian_binomial((n + d) as i64, n as i64, q).unwrap();
        println!(
            "(q,n,d)=({q},{n},{d}): |F1| = {} = q^d [n+d choose n]_q = {}^{d} * {gauss}, \
             |F0| = {} = q^(d(n+1))",
            census.all.len(),
            q,
            census.family_count
        );
    }

    // The 6 lines of F_2^2 in dump format; the two vertical ones are not
    // graphs of affine maps and fall outside F0.
    println!("\nall lines of F_2^2 (\"*\" marks membership in F0):");
    let ctx = FieldCtx::new(2, 1, None).unwrap();
    let census = flat_family_census(ctx.clone(), 1, 1, 1 << 20).unwrap();
    for (flat, in_fam) in census.all.iter().zip(&census.in_family) {
        println!("  {} {}", if *in_fam { "*" } else { " " }, flat.dump_line());
    }

    // Random (P, F) draws against the all-flats bound.
    println!("\n300 random (P, F) draws at (3,1,1) against the d=1 all-flats bound:");
    let ctx = FieldCtx::new(3, 1, None).unwrap();
    let census = flat_family_census(ctx.clone(), 1, 1, 1 << 20).unwrap();
    let total_points = ctx.space_size(2) as u64;
    let mut holds = 0usize;
    for trial in 0..300u64 {
        let mut rng = trial_rng(11, trial);
        let sp = sample_size(&mut rng, total_points);
        let p = sample_subset(&mut rng, total_points, sp);
        let sf = sample_size(&mut rng, census.all.len() as u64);
        let fsel = sample_subset(&mut rng, census.all.len() as u64, sf);
        let flats: Vec<&Flat> = fsel.iter().map(|&i| &census.all[i as usize]).collect();
        let rep = check_flats_theorem(&ctx, 1, 1, &p, &flats);
        holds += rep.all_falsifiable_hold as usize;
    }
    println!("  all falsifiable rows hold: {holds}/300");
}
