//! Exact rational arithmetic and Pochhammer symbols.

use kdf_reductions::{factorial, pochhammer, rat, Rational};

fn main() -> kdf_reductions::Result<()> {
    let a = rat(1, 3)?;
    let b: Rational = "-5/6".parse()?;
    println!("{a} + {b} = {}", &a + &b);
    println!("{a} * {b} = {}", &a * &b);
    println!("(1/2)_4 = {}", pochhammer(&rat(1, 2)?, 4));
    println!("(-3)_5 = {}", pochhammer(&Rational::from_integer(-3), 5));
    println!("20! = {}", factorial(20));
    println!("{b} as f64 = {}", b.to_f64()?);
    Ok(())
}
