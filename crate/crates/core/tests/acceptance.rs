//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::{E, FRAC_PI_3};
use std::time::Instant;

use ffec::curve::{validate, CurveModel, Point};
use ffec::field_poly::{factorize, Place, Poly, RationalFn};
use ffec::heights::{local_height_good, twist_height_report, HeightEngine, HeightOptions, TorsionStatus};
use ffec::integral_points::{enumerate_integral, siegel_ok};
use ffec::lfunction::{analytic_rank, av_records, count_points, l_expansion, l_polynomial, AvSource, CountBudget};
use ffec::packing::{beta, covering_centers, covering_verify, integral_point_exponent, kl_bound};
use ffec::reduction::{conductor, global_minimal_model, local_data, ReductionType};
use ffec::report::{random_corpus, report_csv, report_json, run_report, CurveCorpus, ReportOptions};

const SAMPLE: &str = include_str!("../data/sample_corpus.json");

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(cond: bool, msg: impl Into<String>, failures: &mut Vec<String>) {
    if !cond {
        failures.push(msg.into());
    }
}

fn finish(failures: Vec<String>, detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { ok: true, detail }
    } else {
        Outcome { ok: false, detail: format!("{detail}; failed: {}", failures.join("; ")) }
    }
}

fn pt(q: u64, s: &str) -> Point {
    Point::parse(q, s).unwrap()
}

/// Report corpus: the sample curves plus seeded random curves over F_5.
fn report_corpus() -> CurveCorpus {
    let mut c = CurveCorpus::from_json(SAMPLE).unwrap();
    c.curves.extend(random_corpus(5, 6, 2, 2024).unwrap().curves);
    c
}

fn report_opts() -> ReportOptions {
    ReportOptions { max_deg: 2, seed: 2024, tol: 1e-3, workers: 1, budget_sec: 60.0 }
}

fn c1_packing_constants() -> Outcome {
    let mut f = Vec::new();
    let b0 = beta(0.0).unwrap();
    let c = integral_point_exponent();
    let kl = kl_bound(FRAC_PI_3).unwrap();
    let b1 = beta(1.0).unwrap();
    check((b0 - 0.2782).abs() <= 5e-4, format!("beta(0) = {b0}"), &mut f);
    check((c - 0.20070).abs() <= 5e-5, format!("c = {c}"), &mut f);
    check((kl - 0.40141).abs() <= 1e-4, format!("kl(pi/3) = {kl}"), &mut f);
    check(b1 == 0.0, format!("beta(1) = {b1}"), &mut f);
    finish(f, format!("beta(0)={b0:.6} c={c:.6} kl(pi/3)={kl:.6} beta(1)={b1}"))
}

/// Affine points of `y² = x³ + ax + b` over `F_p`, counted by brute force, plus `O`.
fn naive_count(a: u64, b: u64, p: u64) -> u64 {
    1 + (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).filter(|&(x, y)| (y * y) % p == (x * x * x + a * x + b) % p).count() as u64
}

fn c2_worked_curve() -> Outcome {
    let mut f = Vec::new();
    let e = CurveModel::parse(5, "0,1", "1").unwrap();
    let cond = conductor(&e).unwrap();
    check(cond.deg_n == 5, format!("deg N = {}", cond.deg_n), &mut f);
    let t2 = Place::finite(Poly::from_i64(5, &[2, 1])).unwrap();
    check(
        cond.local(&t2).map(|l| l.rtype) == Some(ReductionType::MultiplicativeSplit),
        "T+2 not multiplicative split",
        &mut f,
    );
    // split node at T = 3: the singular cubic y² = x³ + 3x + 1 has q points in total
    check(naive_count(3, 1, 5) == 5, "node count at T+2", &mut f);
    let l = l_polynomial(&e, 2).unwrap();
    check(l.coeffs == vec![1.into(), (-5).into()], format!("L = {:?}", l.coeffs), &mut f);
    check(analytic_rank(&l, 5) == 1, "rank_an != 1", &mut f);
    let inv = enumerate_integral(&e, 0).unwrap();
    check(inv.contains(&pt(5, "0;1")) && inv.contains(&pt(5, "0;4")), "missing (0,±1)", &mut f);
    // every counted a_v against exhaustive residue-field counts
    let (records, _) = av_records(&e, 3, CountBudget::default()).unwrap();
    let mut compared = 0;
    for r in records.iter().filter(|r| r.source == AvSource::Counted) {
        let n = count_points(&e, &r.place).unwrap() as i64;
        check(r.a_v == r.q_v as i64 + 1 - n, format!("a_v mismatch at {}", r.place), &mut f);
        compared += 1;
    }
    finish(f, format!("deg N=5, T+2 split, L=1-5u, rank 1, {compared} a_v confirmed by exhaustive counts"))
}

/// The first `count` random non-isotrivial curves with `1 ≤ b_E ≤ max_b`.
fn small_conductor_curves(q: u64, count: usize, max_b: i64, seed: u64) -> Vec<(CurveModel, i64)> {
    let mut out = Vec::new();
    for c in random_corpus(q, 400, 2, seed).unwrap().curves {
        let m = global_minimal_model(&CurveModel::parse(q, &c.a, &c.b).unwrap()).unwrap();
        let b = conductor(&m).unwrap().b_e();
        if (1..=max_b).contains(&b) {
            out.push((m, b));
            if out.len() == count {
                break;
            }
        }
    }
    out
}

fn c3_truncation() -> Outcome {
    let mut f = Vec::new();
    let mut seen = Vec::new();
    for (q, max_b) in [(5u64, 4i64), (7, 3)] {
        let curves = small_conductor_curves(q, 5, max_b, 11);
        check(curves.len() == 5, format!("only {} curves over F_{q}", curves.len()), &mut f);
        for (m, b) in curves {
            let e = l_expansion(&m, 2, CountBudget::default()).unwrap();
            check(e.truncation_ok(), format!("tail {:?} for a={} b={} over F_{q}", e.tail, m.a, m.b), &mut f);
            seen.push(format!("F_{q}:{b}"));
        }
    }
    finish(f, format!("coefficients u^(b_E+1), u^(b_E+2) vanish; b_E by curve [{}]", seen.join(" ")))
}

fn c4_hasse() -> Outcome {
    let mut f = Vec::new();
    let corpus = random_corpus(5, 20, 3, 7).unwrap();
    let mut counted = 0;
    for c in &corpus.curves {
        let m = global_minimal_model(&CurveModel::parse(5, &c.a, &c.b).unwrap()).unwrap();
        let (records, _) = av_records(&m, 5, CountBudget::default()).unwrap();
        for r in records.iter().filter(|r| r.source == AvSource::Counted) {
            counted += 1;
            check(r.hasse_ok(), format!("a_v = {} at {} on {}", r.a_v, r.place, c.id), &mut f);
        }
    }
    finish(f, format!("{counted} counted places of degree <= 5 over 20 curves satisfy a_v^2 <= 4 q_v"))
}

fn c5_rank_chain(rows: &[ffec::report::BoundChainRow]) -> Outcome {
    let mut f = Vec::new();
    let mut green = 0;
    for r in rows.iter().filter(|r| r.all_checks_green()) {
        green += 1;
        let (i, ra, n) = (r.indep.unwrap() as i64, r.rank_an.unwrap() as i64, r.deg_n.unwrap() as i64);
        check(i <= ra && ra <= n - 4, format!("{}: indep {i}, rank_an {ra}, deg N {n}", r.id), &mut f);
    }
    check(green >= 3, format!("only {green} green rows"), &mut f);
    finish(f, format!("indep <= rank_an <= deg N - 4 on {green} green rows"))
}

fn c6_height_laws(corpus: &CurveCorpus) -> Outcome {
    let mut f = Vec::new();
    let opts = HeightOptions::default();
    let tol = opts.tol;
    let (mut doubled, mut pairs, mut ultra) = (0, 0, 0);
    for c in &corpus.curves {
        let m = global_minimal_model(&corpus.model(&c.id).unwrap()).unwrap();
        if validate(&m).unwrap().is_constant {
            continue;
        }
        let engine = HeightEngine::new(&m, opts).unwrap();
        let inv = enumerate_integral(&m, 2).unwrap();
        let mut pts = Vec::new();
        for p in &inv.points {
            if engine.torsion_status(p, 100).unwrap() == TorsionStatus::NonTorsion && !pts.contains(&m.neg(p)) {
                pts.push(p.clone());
            }
        }
        let h = |p: &Point| if p.is_infinity() { 0.0 } else { engine.canonical(p).unwrap().value };
        for p in &pts {
            let d = (h(&m.double(p).unwrap()) - 4.0 * h(p)).abs();
            check(d <= 4.0 * tol, format!("{}: |h(2P) - 4h(P)| = {d} at {p}", c.id), &mut f);
            doubled += 1;
        }
        let mut places: Vec<Place> = vec![Place::Infinite];
        for (i, p) in pts.iter().enumerate() {
            for qq in &pts[i + 1..] {
                let (s, d) = (m.add(p, qq).unwrap(), m.add(p, &m.neg(qq)).unwrap());
                let gap = (h(&s) + h(&d) - 2.0 * h(p) - 2.0 * h(qq)).abs();
                check(gap <= 10.0 * tol, format!("{}: parallelogram gap {gap}", c.id), &mut f);
                pairs += 1;
                if let Some(x) = d.x() {
                    if !x.den().is_constant() {
                        places.extend(factorize(x.den(), 0).unwrap().factors.into_iter().map(|(pi, _)| Place::Finite(pi)));
                    }
                }
            }
        }
        places.sort();
        places.dedup();
        for v in places.iter().filter(|v| local_data(&m, v).unwrap().n_v == 0) {
            for (i, p) in pts.iter().enumerate() {
                for qq in &pts[i + 1..] {
                    let d = m.add(p, &m.neg(qq)).unwrap();
                    let l = local_height_good(&m, &d, v).unwrap();
                    let lo = local_height_good(&m, p, v).unwrap().min(local_height_good(&m, qq, v).unwrap());
                    check(l >= lo, format!("{}: lambda_v(P-Q) = {l} < {lo} at {v}", c.id), &mut f);
                    ultra += 1;
                }
            }
        }
    }
    check(doubled > 0 && pairs > 0 && ultra > 0, "no points sampled", &mut f);
    finish(f, format!("{doubled} doublings, {pairs} parallelogram pairs, {ultra} ultrametric checks"))
}

/// Twists `d` (square-free, `1 ≤ deg d ≤ 4`) reached by writing `f(x) = d·g²` for `deg x ≤ 2`,
/// together with the points `(x, g)` of `d·y² = f(x)` found that way.
fn twist_family(m: &CurveModel) -> Vec<(Poly, Vec<Point>)> {
    let q = m.q();
    let mut family: Vec<(Poly, Vec<Point>)> = Vec::new();
    for idx in 0..q.pow(3) {
        let x = Poly::from_index(q, idx, 3);
        let fx = m.f_poly(&x);
        if fx.is_zero() {
            continue;
        }
        let fac = factorize(&fx, 0).unwrap();
        let (mut d, mut g) = (Poly::constant(q, fac.unit), Poly::one(q));
        for (pi, e) in &fac.factors {
            if e % 2 == 1 {
                d = &d * pi;
            }
            g = &g * &pi.pow(u64::from(e / 2));
        }
        if !(1..=4).contains(&d.deg().unwrap_or(0)) {
            continue;
        }
        let p = Point::affine(RationalFn::from_poly(x), RationalFn::from_poly(g));
        match family.iter_mut().find(|(dd, _)| *dd == d) {
            Some((_, pts)) => pts.push(p),
            None => family.push((d, vec![p])),
        }
    }
    family
}

fn c7_twists() -> Outcome {
    let mut f = Vec::new();
    let opts = HeightOptions::default();
    let (mut twists, mut rows, mut with_points) = (0, 0, 0);
    let mut degrees = [0usize; 5];
    for (a, b) in [("0,1", "1"), ("2,0,1", "3,0,3,0,4")] {
        let m = CurveModel::parse(5, a, b).unwrap();
        for (d, pts) in twist_family(&m) {
            let r = twist_height_report(&m, &d, &pts, opts).unwrap();
            twists += 1;
            degrees[d.deg().unwrap()] += 1;
            rows += r.rows.len();
            for row in &r.rows {
                check(row.same_height, format!("d={d}: |h_twist - h_short| > 2 tol at {}", row.point), &mut f);
                check(row.y_height_ok != Some(false), format!("d={d}: h_y < 3/8 deg d at {}", row.point), &mut f);
            }
            if r.rows.iter().any(|row| !row.h_twist.torsion) {
                with_points += 1;
                check(r.c_f.is_some_and(f64::is_finite), format!("d={d}: c_f not finite"), &mut f);
            }
        }
    }
    check(degrees[1..].iter().all(|&n| n > 0), format!("twist degrees covered {degrees:?}"), &mut f);
    finish(f, format!("{twists} twists (by deg d: {:?}), {rows} points, {with_points} with finite c_f", &degrees[1..]))
}

fn c8_covering() -> Outcome {
    let mut f = Vec::new();
    let mut cs = Vec::new();
    for n in 1..=3 {
        for eps in [0.1, 0.2] {
            for ratio in [E, 10.0] {
                let cover = covering_centers(1.0, ratio, eps, n).unwrap();
                let r = covering_verify(&cover, 10_000, 8);
                check(r.failures == 0, format!("n={n} eps={eps} c2/c1={ratio:.3}: {} failures", r.failures), &mut f);
                cs.push(r.fitted_c);
            }
        }
    }
    let (lo, hi) = cs.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    check(hi / lo <= 2.0, format!("fitted C spans {lo:.3}..{hi:.3} (x{:.2} > 2)", hi / lo), &mut f);
    finish(f, format!("0 failures needed on 12 grid points; fitted C in [{lo:.3}, {hi:.3}]"))
}

fn c9_siegel() -> Outcome {
    let mut f = Vec::new();
    let e = CurveModel::parse(5, "0", "1").unwrap();
    let inv = enumerate_integral(&e, 3).unwrap();
    check(inv.count_affine == 5, format!("{} affine points", inv.count_affine), &mut f);
    check(
        inv.points.iter().all(|p| p.x().unwrap().is_constant() && p.y().unwrap().is_constant()),
        "non-constant point",
        &mut f,
    );
    check(naive_count(0, 1, 5) == inv.count_affine as u64 + 1, "exhaustive F_5 count disagrees", &mut f);
    check(siegel_ok(&inv, 5), "count + 1 > q + 1 + 2 sqrt q", &mut f);
    finish(f, format!("{} constant affine points, {} <= 5 + 1 + 2 sqrt 5", inv.count_affine, inv.count_affine + 1))
}

fn c10_determinism(corpus: &CurveCorpus, first: &[ffec::report::BoundChainRow]) -> Outcome {
    let mut f = Vec::new();
    let opts = report_opts();
    let second = run_report(corpus, &opts).unwrap();
    check(report_csv(first) == report_csv(&second), "CSV differs", &mut f);
    check(report_json(corpus.q, &opts, first) == report_json(corpus.q, &opts, &second), "JSON differs", &mut f);
    check(random_corpus(7, 5, 3, 99).unwrap() == random_corpus(7, 5, 3, 99).unwrap(), "random corpus differs", &mut f);
    finish(f, format!("{} rows byte-identical across runs", first.len()))
}

fn c11_main_theorem(rows: &[ffec::report::BoundChainRow]) -> Outcome {
    let mut f = Vec::new();
    let mut populated = 0;
    for r in rows.iter().filter(|r| r.rank_an.is_some() || r.trunc_ok.is_some()) {
        if r.deg_n.unwrap() >= 3 {
            check(r.c_required.is_some(), format!("{}: c_required missing", r.id), &mut f);
            populated += 1;
        }
    }
    check(populated > 0, "no non-isotrivial rows", &mut f);
    finish(f, format!("c_required present on {populated} non-isotrivial rows"))
}

fn main() {
    let corpus = report_corpus();
    let t = Instant::now();
    let rows = run_report(&corpus, &report_opts()).unwrap();
    let report_secs = t.elapsed().as_secs_f64();
    let mut criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("packing constants", Box::new(c1_packing_constants)),
        ("worked curve y^2 = x^3 + Tx + 1", Box::new(c2_worked_curve)),
        ("L-series truncation", Box::new(c3_truncation)),
        ("Hasse bound", Box::new(c4_hasse)),
        ("rank chain", Box::new(|| c5_rank_chain(&rows))),
        ("height laws", Box::new(|| c6_height_laws(&corpus))),
        ("twist identities", Box::new(c7_twists)),
        ("covering lemma", Box::new(c8_covering)),
        ("constant-curve Siegel check", Box::new(c9_siegel)),
        ("determinism", Box::new(|| c10_determinism(&corpus, &rows))),
        ("main-theorem report", Box::new(|| c11_main_theorem(&rows))),
    ];
    println!("report corpus: {} curves in {report_secs:.1}s", rows.len());
    let mut failed = 0;
    for (i, (name, run)) in criteria.drain(..).enumerate() {
        let t = Instant::now();
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!o.ok);
        println!("{verdict} criterion {:>2} {name} ({:.1}s): {}", i + 1, t.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
