//! Finite field construction, trace tables, power-map permutations, and
//! exact character arithmetic in Z[zeta_p].
//!
//! Run with: cargo run --example field_arithmetic

use fq_incidence::chr::{char_inner_product, Character, CycInt};
use fq_incidence::gf::FieldCtx;
use num_bigint::BigInt;

fn main() {
    println!("=== Fields, traces, power maps, characters ===\n");

    // A prime field needs nothing but p.
    let f5 = FieldCtx::new(5, 1, None).unwrap();
    println!("F_5: inv(2) = {:?}", f5.inv(&f5.elem(2)).unwrap());

    // Extension fields take a monic irreducible modulus; omitted, the
    // smallest one (by canonical index) is searched for you.
    let f9 = FieldCtx::new(3, 2, None).unwrap();
    println!(
        "F_9 default modulus (little-endian coefficients): {:?}  -> spec string {:?}",
        f9.modulus(),
        f9.spec_string()
    );

    // The trace maps onto the prime subfield and is F_p-linear.
    println!("\nTrace table of F_9:");
    for idx in 0..9 {
        print!("  Tr({idx}) = {}", f9.trace_idx(idx));
    }
    println!();

    // x -> x^b permutes F_q exactly when gcd(b, q-1) = 1.
    let f7 = FieldCtx::new(7, 1, None).unwrap();
    let cube: Vec<u32> = (0..7).map(|x| f7.pow_idx(x, 5)).collect();
    println!("\nx^5 on F_7 (gcd(5,6)=1, a bijection): {cube:?}");
    let square: Vec<u32> = (0..7).map(|x| f7.pow_idx(x, 2)).collect();
    println!("x^2 on F_7 (gcd(2,6)=2, collides):     {square:?}");

    // Characters evaluate to exact roots of unity, never floats.
    println!("\nAdditive characters of F_3^2 over Z[zeta_3]:");
    let f3 = FieldCtx::new(3, 1, None).unwrap();
    let chi = Character::new(f3.clone(), vec![1, 2]);
    for ai in 0..9u64 {
        let a = f3.vector_from_index(2, ai);
        let t = chi.trace_exponent(&a).unwrap();
        print!("  chi(({},{})) = zeta^{t}", a[0], a[1]);
    }
    println!();

    // Orthogonality: <chi_v, chi_w> = q^k [v = w].
    let fv: Vec<CycInt> = (0..9u64)
        .map(|u| chi.eval(&f3.vector_from_index(2, u)).unwrap())
        .collect();
    let self_ip = char_inner_product(&fv, &chi).unwrap();
    println!("\n<chi, chi> = {:?} (must be q^k = 9)", self_ip.coeffs()[0]);
    assert_eq!(self_ip, CycInt::from_int(3, BigInt::from(9)));

    let other = Character::new(f3.clone(), vec![0, 1]);
    let cross_ip = char_inner_product(&fv, &other).unwrap();
    println!("<chi_v, chi_w> for v != w is zero: {}", cross_ip.is_zero());
}
