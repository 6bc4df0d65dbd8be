//! Normal forms, products and adjoints in the asymptotic free algebra.

use freecorr::parse::parse_word;
use freecorr::word::normalize;
use freecorr::{Letter, Polynomial};
use num_rational::BigRational;

fn main() -> freecorr::Result<()> {
    // Adjacent letters on the same copy merge into one monomial letter.
    let w = parse_word("A_1 B_1 C_2 D_2 A*_2")?;
    println!("normal form: {w}");
    println!("adjoint:     {}", w.adjoint());
    println!("copies:      {:?}", w.copies());

    let merged = normalize([Letter::named("A", 3), Letter::named("A", 3), Letter::named("B", 1)]);
    println!("A_3 A_3 B_1 -> {merged}");

    // (A_1 + B_2)^2 as a polynomial with rational coefficients.
    let x = Polynomial::<BigRational>::letter(Letter::named("A", 1)).add(&Polynomial::letter(Letter::named("B", 2)));
    println!("(A_1 + B_2)^2 = {}", x.multiply(&x));
    Ok(())
}
