//! Canonical heights, the Gram matrix of integral points, and their separation angles.

use ffec::curve::CurveModel;
use ffec::heights::{HeightEngine, HeightOptions};
use ffec::integral_points::{classify_inventory, enumerate_integral, separation_stats};

fn main() -> ffec::Result<()> {
    let e = CurveModel::parse(5, "2,0,1", "3,0,3,0,4")?;
    let engine = HeightEngine::new(&e, HeightOptions::default())?;
    let mut inv = enumerate_integral(&e, 1)?;
    let gram = classify_inventory(&engine, &mut inv)?;
    println!("{} points, {} torsion, independent lower bound {}", inv.count_affine, inv.torsion_count, inv.independent_count);
    for (p, h) in gram.points.iter().zip(&gram.heights) {
        println!("  ĥ({p}) = {:.4} after {} doublings", h.value, h.iterations);
    }
    println!("regulator of the listed points: {:.4e}", gram.regulator);
    let s = separation_stats(&engine, &inv)?;
    println!("min angle {:.2}°, min ĥ(P-Q)/max ĥ = {:.4} over {} pairs", s.min_angle_deg, s.min_ratio, s.pairs);
    Ok(())
}
