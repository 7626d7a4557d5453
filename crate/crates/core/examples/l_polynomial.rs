//! L-polynomial of a curve via the Euler product, with the truncation and Hasse checks.

use ffec::curve::CurveModel;
use ffec::lfunction::{analytic_rank, l_expansion, CountBudget};
use ffec::reduction::global_minimal_model;

fn main() -> ffec::Result<()> {
    let q = 5;
    for (a, b) in [("0,1", "1"), ("2,0,1", "3,0,3,0,4")] {
        let e = global_minimal_model(&CurveModel::parse(q, a, b)?)?;
        let exp = l_expansion(&e, 2, CountBudget::default())?;
        let coeffs: Vec<String> = exp.l.coeffs.iter().map(ToString::to_string).collect();
        println!("a = [{a}], b = [{b}]");
        println!("  L(u) coefficients: [{}]", coeffs.join(", "));
        println!("  tail beyond b_E = {}: {:?}", exp.l.b_e, exp.tail);
        println!("  places counted: {}, hasse ok: {}", exp.records.len(), exp.hasse_ok());
        println!("  analytic rank: {}", analytic_rank(&exp.l, q));
    }
    Ok(())
}
