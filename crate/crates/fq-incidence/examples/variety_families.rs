//! Constructing variety families: the general (h, b) form, its flat and
//! paraboloid specializations, membership testing, and the pairwise
//! distinctness of all q^{d(n+1)} varieties.
//!
//! Run with: cargo run --example variety_families

use fq_incidence::gf::FieldCtx;
use fq_incidence::incidence::build_t;
use fq_incidence::variety::{ExponentVector, Poly, VarietyFamily};

fn main() {
    println!("=== Variety families ===\n");
    let ctx = FieldCtx::new(5, 1, None).unwrap();

    // A twisted family over F_5: h = x1^2, exponent 3 (gcd(3,4) = 1).
    let fam = VarietyFamily::new(
        ctx.clone(),
        1,
        1,
        vec![Poly::parse("1*x1^2", 1, &ctx).unwrap()],
        vec![ExponentVector(vec![3])],
    )
    .unwrap();
    println!(
        "family over F_5 with h = {}, b = {:?}: {} varieties on {} points",
        fam.h()[0],
        fam.b()[0].0,
        fam.num_varieties(),
        fam.num_points()
    );

    // Every variety is the graph of x -> h(x) + a_1 x^3 + a_2.
    let id = fam.id_from_index(7); // a = (2, 1)
    println!("\nvariety #7 has a = {:?}; its {} points:", id.a[0], 5);
    for pt in fam.variety_points(&id) {
        print!("  ({},{})", pt.coords[0], pt.coords[1]);
        assert!(fam.variety_contains(&id, &pt));
    }
    println!();

    // Distinctness: different parameter tuples give different point sets.
    println!(
        "\nall 25 varieties pairwise distinct: {}",
        fam.distinctness_check(1 << 20).unwrap()
    );

    // Exponents not coprime to q - 1 are rejected at construction.
    let err = VarietyFamily::new(
        ctx.clone(),
        1,
        1,
        vec![Poly::zero(1)],
        vec![ExponentVector(vec![2])],
    )
    .unwrap_err();
    println!("b = (2) over F_5 is rejected: {err}");

    // The incidence matrix of the family is biregular by construction.
    let t = build_t(&fam, 1 << 26).unwrap();
    println!(
        "\nT is {}x{} with row sums {} and column sums {}",
        t.rows(),
        t.cols(),
        t.row_sum(0),
        t.col_sum(0)
    );

    // The paraboloid specialization: vertex (p, 0) determines the variety.
    let parab = VarietyFamily::paraboloid_family(ctx.clone(), 2).unwrap();
    let vid = parab.paraboloid_id(&[3, 1]).unwrap();
    println!(
        "\nparaboloid with vertex ((3,1), 0) has parameters a = {:?}",
        vid.a[0]
    );
}
