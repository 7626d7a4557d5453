//! β(t), α(x), the Kabatiansky–Levenshtein rate and the integral-point exponent.

use std::f64::consts::FRAC_PI_3;

use ffec::packing::{alpha, ball_count_bound, beta_table, integral_point_exponent, kl_bound};

fn main() -> ffec::Result<()> {
    println!("KL rate at 60°: {:.5} bits/dim", kl_bound(FRAC_PI_3)?);
    println!("integral-point exponent: {:.5}", integral_point_exponent());
    println!("{:>5} {:>8} {:>8} {:>8}", "t", "f(t)", "β(t)", "α(t)");
    for [t, f, b, a] in beta_table(0.0, 1.0, 0.1)? {
        println!("{t:>5.2} {f:>8.5} {b:>8.5} {a:>8.5}");
    }
    let (v, t) = alpha(0.3)?;
    println!("α(0.3) = {v:.5} at t = {t:.4}");
    println!("balls of radius √c1 covering the shell, rank 3, c2/c1 = 4: {}", ball_count_bound(1.0, 4.0, 3)?);
    Ok(())
}
