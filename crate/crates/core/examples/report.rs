//! The bound-chain report for the bundled sample corpus, as CSV.

use ffec::report::{report_csv, run_report, CurveCorpus, ReportOptions};

fn main() -> ffec::Result<()> {
    let corpus = CurveCorpus::from_json(include_str!("../data/sample_corpus.json"))?;
    let rows = run_report(&corpus, &ReportOptions { max_deg: 2, ..Default::default() })?;
    print!("{}", report_csv(&rows));
    Ok(())
}
