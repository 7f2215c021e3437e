//! The affine group acts transitively on n-flats and preserves incidences:
//! random affine maps leave I(P, F) unchanged, and for any two flats of
//! equal dimension an explicit map between them can be constructed by
//! basis completion.
//!
//! Run with: cargo run --example agl_invariance

use fq_incidence::flats::{
    count_point_flat_incidences, enumerate_all_flats, map_between, AffineMap, Flat,
};
use fq_incidence::gf::FieldCtx;
use fq_incidence::sampling::{sample_size, sample_subset, trial_rng};
use rand::Rng;

fn main() {
    println!("=== Affine invariance of point-flat incidences ===\n");

    let ctx = FieldCtx::new(3, 1, None).unwrap();
    let flats = enumerate_all_flats(&ctx, 1, 2, 1 << 20).unwrap();
    let ambient = 3usize;
    let total = ctx.space_size(ambient) as u64;
    println!("{} lines in F_3^3", flats.len());

    let mut invariant = 0usize;
    for trial in 0..500u64 {
        let mut rng = trial_rng(3, trial);
        let g = AffineMap::random(&ctx, ambient, &mut rng);
        let sp = sample_size(&mut rng, total);
        let p = sample_subset(&mut rng, total, sp);
        let sf = sample_size(&mut rng, flats.len() as u64);
        let fsel = sample_subset(&mut rng, flats.len() as u64, sf);
        let chosen: Vec<&Flat> = fsel.iter().map(|&i| &flats[i as usize]).collect();

        let before = count_point_flat_incidences(&ctx, &p, &chosen);
        let p_img: Vec<u64> = p
            .iter()
            .map(|&pi| {
                let c = ctx.vector_from_index(ambient, pi);
                ctx.vector_index(&g.apply_point(&ctx, &c))
            })
            .collect();
        let f_img: Vec<Flat> = chosen.iter().map(|f| g.apply_flat(&ctx, f)).collect();
        let f_refs: Vec<&Flat> = f_img.iter().collect();
        invariant += (count_point_flat_incidences(&ctx, &p_img, &f_refs) == before) as usize;
    }
    println!("I(P_g, F_g) = I(P, F) on 500 random (g, P, F): {invariant}/500");

    // transitivity witnesses
    println!("\ntransitivity: explicit maps between random flat pairs");
    let mut rng = trial_rng(4, 0);
    for _ in 0..3 {
        let a = &flats[rng.gen_range(0..flats.len())];
        let b = &flats[rng.gen_range(0..flats.len())];
        let g = map_between(&ctx, a, b);
        let image = g.apply_flat(&ctx, a);
        println!(
            "  {}  ->  {}  (exact: {})",
            a.dump_line(),
            b.dump_line(),
            &image == b
        );
    }
}
