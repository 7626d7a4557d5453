//! The ε-ball covering of a shell in the positive orthant, verified by seeded sampling.

use ffec::packing::{covering_centers, covering_verify};

fn main() -> ffec::Result<()> {
    println!("{:>2} {:>4} {:>7} {:>3} {:>8} {:>8} {:>9} {:>8}", "n", "ε", "c2/c1", "M", "centers", "failures", "max ratio", "fit C");
    for n in 1..=3 {
        for eps in [0.1, 0.2] {
            for c2 in [std::f64::consts::E, 10.0] {
                let cover = covering_centers(1.0, c2, eps, n)?;
                let r = covering_verify(&cover, 10_000, 1);
                println!(
                    "{n:>2} {eps:>4} {c2:>7.3} {:>3} {:>8} {:>8} {:>9.4} {:>8.4}",
                    cover.m_max, r.centers, r.failures, r.max_ratio, r.fitted_c
                );
            }
        }
    }
    Ok(())
}
