//! Integral and S-integral points, the main-theorem ratio, and the constant-curve check.

use ffec::curve::CurveModel;
use ffec::integral_points::{
    discriminant_places, enumerate_integral, enumerate_s_integral, main_theorem_ratio, siegel_ok, EnumerationSpec,
};
use ffec::reduction::conductor;

fn main() -> ffec::Result<()> {
    let e = CurveModel::parse(5, "0,1", "1")?;
    let inv = enumerate_integral(&e, 2)?;
    println!("y² = x³ + Tx + 1, deg x <= 2: {} integral points", inv.count_affine);
    for p in &inv.points {
        println!("  {p}");
    }
    let deg_n = conductor(&e)?.deg_n;
    let r = main_theorem_ratio(&inv, deg_n, 5)?;
    println!("c_required = {:.6} (log q-normalized {:.6})", r.c_required, r.c_required_log_q);

    let spec = EnumerationSpec { max_deg_x: 2, s_places: discriminant_places(&e)?, max_den_exp: 2 };
    let s = enumerate_s_integral(&e, &spec)?;
    println!("S = divisors of Δ: {} S-integral points", s.count_affine);

    let c = CurveModel::parse(5, "0", "1")?;
    let inv = enumerate_integral(&c, 3)?;
    println!("constant curve y² = x³ + 1: {} points, Siegel envelope ok: {}", inv.count_affine, siegel_ok(&inv, 5));
    Ok(())
}
