//! Tensor, free and koopman laws on the same word, symbolically and with a
//! numeric marginal table.

use freecorr::parse::parse_word;
use freecorr::{Expr, Law, MarginalState, SymbolicState};
use num_rational::BigRational;

fn main() -> freecorr::Result<()> {
    let word = parse_word("A_1 B_2 C_1 D_2")?;
    for law in Law::ALL {
        let e: Expr = law.moment(&word, &SymbolicState)?;
        println!("{law:<8} <{word}> = {e}");
    }

    let q = |n: i64| BigRational::from_integer(n.into());
    let state = MarginalState::new()
        .with("A", q(0))
        .with("B", q(0))
        .with("A*", q(0))
        .with("B*", q(0))
        .with("A A*", q(5))
        .with("B B*", q(3));
    let alternating = parse_word("A_1 B_2 A*_1 B*_2")?;
    for law in Law::ALL {
        let v: BigRational = law.moment(&alternating, &state)?;
        println!("{law:<8} <{alternating}> = {v}");
    }
    Ok(())
}
