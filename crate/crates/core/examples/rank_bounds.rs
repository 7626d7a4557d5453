//! Analytic rank against the trivial bound deg N - 4 and the Brumer-type main term.

use ffec::curve::CurveModel;
use ffec::lfunction::{analytic_rank, l_polynomial, rank_bounds};
use ffec::reduction::{conductor, global_minimal_model};
use ffec::report::random_corpus;

fn main() -> ffec::Result<()> {
    let q = 5;
    println!("{:>10} {:>5} {:>8} {:>8} {:>12}", "id", "degN", "rank_an", "trivial", "brumer_main");
    for c in random_corpus(q, 6, 1, 17)?.curves {
        let e = global_minimal_model(&CurveModel::parse(q, &c.a, &c.b)?)?;
        let deg_n = conductor(&e)?.deg_n;
        let rank = analytic_rank(&l_polynomial(&e, 2)?, q);
        let brumer = rank_bounds(deg_n, q).map(|b| format!("{:.4}", b.brumer_main_term)).unwrap_or_else(|_| "n/a".into());
        println!("{:>10} {:>5} {:>8} {:>8} {:>12}", c.id, deg_n, rank, deg_n as i64 - 4, brumer);
    }
    Ok(())
}
