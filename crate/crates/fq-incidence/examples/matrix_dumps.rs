//! The portable text dump formats: incidence matrices as 0/1 digit rows,
//! Gram matrices as decimal integer rows, flats as one-line records.
//!
//! Run with: cargo run --example matrix_dumps

use fq_incidence::flats::enumerate_all_flats;
use fq_incidence::gf::FieldCtx;
use fq_incidence::incidence::{build_t, gram_points};
use fq_incidence::variety::VarietyFamily;

fn main() {
    let ctx = FieldCtx::new(2, 1, None).unwrap();
    let fam = VarietyFamily::flat_family(ctx.clone(), 1, 1).unwrap();

    println!("T for the 4 lines x 4 points of F_2^2 (\"rows cols\", then 0/1 digits):\n");
    let t = build_t(&fam, 1 << 26).unwrap();
    print!("{}", t.dump());

    println!("\nA = T'T (decimal integers, one row per line):\n");
    let a = gram_points(&fam, 1 << 26, 2048).unwrap();
    print!("{}", a.entries.dump());

    println!("\nall 1-flats of F_2^2, one record per line:\n");
    for flat in enumerate_all_flats(&ctx, 1, 1, 1 << 20).unwrap() {
        println!("{}", flat.dump_line());
    }
}
