//! Corpus ingestion, the per-curve bound chain, and reproducible CSV/JSON reports.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::curve::{validate, CurveModel};
use crate::error::{Error, Result};
use crate::field_poly::{FieldConfig, Poly};
use crate::heights::{HeightEngine, HeightOptions};
use crate::integral_points::{classify_inventory, enumerate_integral, main_theorem_ratio, siegel_ok};
use crate::lfunction::{analytic_rank, l_expansion, rank_bounds, CountBudget};
use crate::reduction::{conductor, csv_field, global_minimal_model};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusCurve {
    pub id: String,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCorpus {
    pub q: u64,
    pub curves: Vec<CorpusCurve>,
}

impl CurveCorpus {
    /// Parses and validates; JSON errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let corpus: Self = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        corpus.check()?;
        Ok(corpus)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serializes")
    }

    pub fn check(&self) -> Result<()> {
        FieldConfig::new(self.q)?;
        let mut ids = HashSet::new();
        for (i, c) in self.curves.iter().enumerate() {
            if !ids.insert(c.id.as_str()) {
                return Err(Error::Parse(format!("curve #{i}: duplicate id {:?}", c.id)));
            }
            let m = CurveModel::parse(self.q, &c.a, &c.b).map_err(|e| Error::Parse(format!("curve #{i} ({}): {e}", c.id)))?;
            validate(&m).map_err(|e| Error::Parse(format!("curve #{i} ({}): {e}", c.id)))?;
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&CorpusCurve> {
        self.curves
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::Parameter(format!("no curve with id {id:?}")))
    }

    pub fn model(&self, id: &str) -> Result<CurveModel> {
        let c = self.get(id)?;
        CurveModel::parse(self.q, &c.a, &c.b)
    }
}

/// Seeded random curves with `deg a, deg b ≤ max_coeff_deg`, rejecting singular and isotrivial ones.
pub fn random_corpus(q: u64, count: usize, max_coeff_deg: usize, seed: u64) -> Result<CurveCorpus> {
    FieldConfig::new(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut curves = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while curves.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(Error::InternalInconsistency("random corpus: too many rejections".into()));
        }
        let mut draw = || Poly::new(q, (0..=max_coeff_deg).map(|_| rng.gen_range(0..q)).collect());
        let (a, b) = (draw(), draw());
        let Ok(m) = CurveModel::new(FieldConfig::new(q)?, a.clone(), b.clone()) else { continue };
        match validate(&m) {
            Ok(inv) if !inv.is_isotrivial => {}
            _ => continue,
        }
        curves.push(CorpusCurve { id: format!("r{q}_{seed}_{}", curves.len()), a: a.to_string(), b: b.to_string() });
    }
    Ok(CurveCorpus { q, curves })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub max_deg: usize,
    pub seed: u64,
    pub tol: f64,
    pub workers: usize,
    pub budget_sec: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { max_deg: 2, seed: 0, tol: 1e-3, workers: 1, budget_sec: 60.0 }
    }
}

impl ReportOptions {
    /// Field-operation allowance for point counting, about `5·10⁷` per second of budget.
    pub fn count_budget(&self) -> CountBudget {
        CountBudget { max_ops: (self.budget_sec.max(0.0) * 5e7) as u128 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// Isotrivial or constant: L-polynomial columns are `n/a`.
    Isotrivial,
    Timeout,
    /// A stage failed; see `note`.
    Partial,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::Isotrivial => "isotrivial",
            Self::Timeout => "timeout",
            Self::Partial => "partial",
        }
    }
}

fn ser_g6<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(fmt_g6(*x).parse().unwrap_or(*x)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundChainRow {
    pub id: String,
    pub deg_n: Option<u64>,
    pub b_e: Option<i64>,
    pub rank_an: Option<u32>,
    pub indep: Option<usize>,
    pub points_maxdeg: usize,
    pub n_points: Option<usize>,
    #[serde(serialize_with = "ser_g6")]
    pub c_required: Option<f64>,
    #[serde(serialize_with = "ser_g6")]
    pub brumer_main: Option<f64>,
    pub trivial_bound: Option<i64>,
    pub hasse_ok: Option<bool>,
    pub trunc_ok: Option<bool>,
    pub siegel_ok: Option<bool>,
    pub status: RowStatus,
    pub note: String,
}

impl BoundChainRow {
    fn empty(id: &str, max_deg: usize) -> Self {
        Self {
            id: id.to_string(),
            deg_n: None,
            b_e: None,
            rank_an: None,
            indep: None,
            points_maxdeg: max_deg,
            n_points: None,
            c_required: None,
            brumer_main: None,
            trivial_bound: None,
            hasse_ok: None,
            trunc_ok: None,
            siegel_ok: None,
            status: RowStatus::Ok,
            note: String::new(),
        }
    }

    /// Every self-check that ran came back true and the row is complete.
    pub fn all_checks_green(&self) -> bool {
        self.status == RowStatus::Ok && self.hasse_ok == Some(true) && self.trunc_ok == Some(true)
    }

    pub fn to_csv(&self) -> String {
        fn o<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "n/a".to_string(), ToString::to_string)
        }
        let g = |v: &Option<f64>| v.map_or_else(|| "n/a".to_string(), fmt_g6);
        [
            csv_field(&self.id),
            o(&self.deg_n),
            o(&self.b_e),
            o(&self.rank_an),
            o(&self.indep),
            self.points_maxdeg.to_string(),
            o(&self.n_points),
            g(&self.c_required),
            g(&self.brumer_main),
            o(&self.trivial_bound),
            o(&self.hasse_ok),
            o(&self.trunc_ok),
            o(&self.siegel_ok),
            self.status.as_str().to_string(),
        ]
        .join(",")
    }
}

pub const REPORT_CSV_HEADER: &str =
    "id,degN,bE,rank_an,indep,points_maxdeg,n_points,c_required,brumer_main,trivial_bound,hasse_ok,trunc_ok,siegel_ok,status";

/// `%g` with 6 significant digits.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..6).contains(&exp) {
        format!("{}e{}{:02}", trim(mant), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim(&format!("{:.*}", (5 - exp).max(0) as usize, x))
    }
}

struct Clock {
    start: Instant,
    limit: Duration,
}

impl Clock {
    fn expired(&self) -> bool {
        self.start.elapsed() > self.limit
    }
}

/// One curve through conductor → L-polynomial → rank → enumeration → heights.
pub fn bound_chain_row(q: u64, curve: &CorpusCurve, opts: &ReportOptions) -> BoundChainRow {
    let clock = Clock { start: Instant::now(), limit: Duration::from_secs_f64(opts.budget_sec.max(0.0)) };
    let mut row = BoundChainRow::empty(&curve.id, opts.max_deg);
    if let Err(e) = fill_row(q, curve, opts, &clock, &mut row) {
        row.status = if matches!(e, Error::Budget(_)) { RowStatus::Timeout } else { RowStatus::Partial };
        row.note = e.to_string();
    } else if clock.expired() && row.status == RowStatus::Ok {
        // finished, but not within the budget
        row.note = format!("completed after {:.1}s", clock.start.elapsed().as_secs_f64());
    }
    row
}

fn fill_row(q: u64, curve: &CorpusCurve, opts: &ReportOptions, clock: &Clock, row: &mut BoundChainRow) -> Result<()> {
    let timeout = |stage: &str| Error::Budget(format!("wall-clock budget exhausted before {stage}"));
    let model = CurveModel::parse(q, &curve.a, &curve.b)?;
    let inv = validate(&model)?;
    let minimal = global_minimal_model(&model)?;
    let cond = conductor(&minimal)?;
    row.deg_n = Some(cond.deg_n);
    if inv.is_isotrivial {
        row.status = RowStatus::Isotrivial;
    } else {
        row.b_e = Some(cond.b_e());
        row.trivial_bound = Some(cond.deg_n as i64 - 4);
        row.brumer_main = rank_bounds(cond.deg_n, q).ok().map(|r| r.brumer_main_term);
        let exp = l_expansion(&minimal, 2, opts.count_budget())?;
        row.hasse_ok = Some(exp.hasse_ok());
        row.trunc_ok = Some(exp.truncation_ok());
        row.rank_an = Some(analytic_rank(&exp.l, q));
    }
    if clock.expired() {
        return Err(timeout("enumeration"));
    }
    let mut points = enumerate_integral(&minimal, opts.max_deg)?;
    row.n_points = Some(points.count_affine);
    if inv.is_constant {
        row.siegel_ok = Some(siegel_ok(&points, q) && points.points.iter().all(|p| p.x().is_some_and(|x| x.is_constant())));
    }
    if cond.deg_n >= 3 {
        row.c_required = Some(main_theorem_ratio(&points, cond.deg_n, q)?.c_required);
    }
    if clock.expired() {
        return Err(timeout("heights"));
    }
    let engine = HeightEngine::new(&minimal, HeightOptions { tol: opts.tol, ..HeightOptions::default() })?;
    classify_inventory(&engine, &mut points)?;
    row.indep = Some(points.independent_count);
    Ok(())
}

/// Rows in corpus order; curves run in parallel on `opts.workers` threads.
pub fn run_report(corpus: &CurveCorpus, opts: &ReportOptions) -> Result<Vec<BoundChainRow>> {
    corpus.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::InternalInconsistency(e.to_string()))?;
    Ok(pool.install(|| corpus.curves.par_iter().map(|c| bound_chain_row(corpus.q, c, opts)).collect()))
}

pub fn report_csv(rows: &[BoundChainRow]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct ReportJson<'a> {
    q: u64,
    max_deg: usize,
    seed: u64,
    #[serde(serialize_with = "ser_g6")]
    tol: Option<f64>,
    rows: &'a [BoundChainRow],
}

pub fn report_json(q: u64, opts: &ReportOptions, rows: &[BoundChainRow]) -> String {
    let doc = ReportJson { q, max_deg: opts.max_deg, seed: opts.seed, tol: Some(opts.tol), rows };
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_formatting() {
        assert_eq!(fmt_g6(0.0), "0");
        assert_eq!(fmt_g6(0.2231435513), "0.223144");
        assert_eq!(fmt_g6(16.0798), "16.0798");
        assert_eq!(fmt_g6(1234567.0), "1.23457e+06");
        assert_eq!(fmt_g6(0.0001), "0.0001");
        assert_eq!(fmt_g6(0.00001234), "1.234e-05");
        assert_eq!(fmt_g6(999999.7), "1e+06");
        assert_eq!(fmt_g6(-2.5), "-2.5");
        assert_eq!(fmt_g6(100.0), "100");
    }

    #[test]
    fn corpus_parse_and_diagnostics() {
        let c = CurveCorpus::from_json(r#"{"q": 5, "curves": [{"id": "ex1", "a": "0,1", "b": "1"}]}"#).unwrap();
        assert_eq!(c.model("ex1").unwrap(), CurveModel::parse(5, "0,1", "1").unwrap());
        let err = CurveCorpus::from_json("{\"q\": 5,\n \"curves\": [ {\"id\": 1} ]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let dup = r#"{"q":5,"curves":[{"id":"x","a":"1","b":"1"},{"id":"x","a":"1","b":"2"}]}"#;
        assert!(CurveCorpus::from_json(dup).unwrap_err().to_string().contains("duplicate"));
        let sing = r#"{"q":5,"curves":[{"id":"s","a":"0","b":"0"}]}"#;
        assert!(CurveCorpus::from_json(sing).is_err());
        assert!(CurveCorpus::from_json(r#"{"q":4,"curves":[]}"#).is_err());
    }

    #[test]
    fn worked_curve_row() {
        let corpus = CurveCorpus { q: 5, curves: vec![CorpusCurve { id: "ex1".into(), a: "0,1".into(), b: "1".into() }] };
        let rows = run_report(&corpus, &ReportOptions::default()).unwrap();
        let r = &rows[0];
        assert_eq!((r.deg_n, r.b_e, r.rank_an), (Some(5), Some(1), Some(1)));
        assert_eq!(r.status, RowStatus::Ok);
        assert!(r.all_checks_green());
        assert!(r.indep.unwrap() <= 1);
        assert!(r.to_csv().starts_with("ex1,5,1,1,"));
    }

    #[test]
    fn constant_and_empty() {
        let corpus = CurveCorpus { q: 5, curves: vec![CorpusCurve { id: "c".into(), a: "0".into(), b: "1".into() }] };
        let rows = run_report(&corpus, &ReportOptions { max_deg: 3, ..Default::default() }).unwrap();
        assert_eq!(rows[0].status, RowStatus::Isotrivial);
        assert_eq!(rows[0].rank_an, None);
        assert_eq!(rows[0].siegel_ok, Some(true));
        assert!(rows[0].to_csv().contains(",n/a,"));
        let empty = CurveCorpus { q: 5, curves: vec![] };
        let rows = run_report(&empty, &ReportOptions::default()).unwrap();
        assert!(rows.is_empty());
        assert_eq!(report_csv(&rows), format!("{REPORT_CSV_HEADER}\n"));
    }

    #[test]
    fn random_corpora() {
        assert!(random_corpus(7, 0, 3, 1).unwrap().curves.is_empty());
        assert_eq!(random_corpus(7, 5, 3, 42).unwrap(), random_corpus(7, 5, 3, 42).unwrap());
        let c = random_corpus(7, 20, 3, 9).unwrap();
        assert_eq!(c.curves.len(), 20);
        for cc in &c.curves {
            let inv = validate(&CurveModel::parse(7, &cc.a, &cc.b).unwrap()).unwrap();
            assert!(!inv.is_isotrivial);
        }
        c.check().unwrap();
    }

    #[test]
    fn budget_overrun_is_a_timeout_row() {
        let corpus = random_corpus(5, 1, 4, 3).unwrap();
        let rows = run_report(&corpus, &ReportOptions { budget_sec: 0.0, ..Default::default() }).unwrap();
        assert_eq!(rows[0].status, RowStatus::Timeout);
        assert!(rows[0].deg_n.is_some());
    }
}
