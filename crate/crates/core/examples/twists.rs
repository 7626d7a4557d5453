//! Quadratic twists d·y² = f(x): height equality with the short model and the h_y lower bound.

use ffec::curve::{CurveModel, Point};
use ffec::field_poly::Poly;
use ffec::heights::{twist_height_report, HeightOptions};

fn main() -> ffec::Result<()> {
    let e = CurveModel::parse(5, "0,1", "1")?;
    // T·y² = x³ + Tx + 1 passes through (4, 2)
    let d = Poly::t(5);
    let r = twist_height_report(&e, &d, &[Point::parse(5, "4;2")?], HeightOptions::default())?;
    for row in &r.rows {
        println!(
            "{}: ĥ twisted = {:.4}, ĥ short = {:.4}, h_y = {:?}, h_y >= 3/8 deg d: {:?}",
            row.point, row.h_twist.value, row.h_short.value, row.h_y_prime, row.y_height_ok
        );
    }
    println!("c_f = {:?}, all identities hold: {}", r.c_f, r.all_ok());
    Ok(())
}
