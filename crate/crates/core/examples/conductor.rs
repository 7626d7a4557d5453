//! Local reduction data and the conductor of y² = x³ + Tx + 1 over F_5.

use ffec::curve::{validate, CurveModel};
use ffec::reduction::{conductor, conductor_rows, CONDUCTOR_CSV_HEADER};

fn main() -> ffec::Result<()> {
    let e = CurveModel::parse(5, "0,1", "1")?;
    let inv = validate(&e)?;
    println!("discriminant = {}  (ascending coefficients)", inv.discriminant);
    println!("j = {}", inv.j);
    let cond = conductor(&e)?;
    println!("deg N = {}, b_E = {}", cond.deg_n, cond.b_e());
    println!("{CONDUCTOR_CSV_HEADER}");
    for row in conductor_rows("ex1", &cond) {
        println!("{row}");
    }
    Ok(())
}
