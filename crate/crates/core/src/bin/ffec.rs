use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use ffec::curve::{CurveModel, Point};
use ffec::heights::{gram_with_engine, naive_height_x, HeightEngine, HeightOptions, TorsionStatus};
use ffec::integral_points::{
    discriminant_places, enumerate_s_integral, enumeration_cost, EnumerationSpec, POINTS_CSV_HEADER,
};
use ffec::lfunction::{analytic_rank, l_expansion, rank_bounds};
use ffec::packing::{beta_table, covering_centers, covering_verify, integral_point_exponent, kl_bound};
use ffec::reduction::{conductor, conductor_rows, csv_field, global_minimal_model, CONDUCTOR_CSV_HEADER};
use ffec::report::{fmt_g6, random_corpus, report_csv, report_json, run_report, CurveCorpus, ReportOptions};
use ffec::{Error, Result};

#[derive(Parser)]
#[command(name = "ffec", version, about = "Elliptic curves over F_q(T): conductors, L-polynomials, heights, integral points")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Corpus JSON: {"q": 5, "curves": [{"id": "ex1", "a": "0,1", "b": "1"}]}
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    id: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, default_value_t = 60.0)]
    budget_sec: f64,
    /// Output file (stdout if absent); `report` also writes `<out>.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Local reduction data per bad place.
    Conductor,
    /// L-polynomial coefficients with the truncation check.
    Lpoly {
        #[arg(long, default_value_t = 2)]
        extra: usize,
    },
    /// Analytic rank and the trivial/Brumer bounds.
    Rank,
    /// Integral (or S-integral) points up to a degree bound.
    Points {
        #[arg(long, default_value_t = 2)]
        max_deg: usize,
        /// `auto` = divisors of the discriminant.
        #[arg(long)]
        s_places: Option<String>,
        #[arg(long, default_value_t = 0)]
        max_den_exp: u32,
        /// Allow more than 5^6 candidates.
        #[arg(long)]
        force: bool,
    },
    /// Canonical heights and the Gram matrix of the given points (`x;y`, repeatable).
    Heights {
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// β/α table, the KL rate, and the covering-lemma verifier.
    Packing {
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = std::f64::consts::E)]
        c2: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// The bound-chain report for a corpus (or a random one).
    Report {
        #[arg(long, default_value_t = 2)]
        max_deg: usize,
        /// Generate `count` random curves of coefficient degree `deg` over F_q instead of reading --input.
        #[arg(long, num_args = 3, value_names = ["Q", "COUNT", "DEG"])]
        random: Option<Vec<u64>>,
    },
}

fn corpus(g: &Global) -> Result<CurveCorpus> {
    let path = g.input.as_ref().ok_or_else(|| Error::Parameter("--input is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    CurveCorpus::from_json(&text)
}

fn selected(g: &Global) -> Result<(String, CurveModel)> {
    let c = corpus(g)?;
    let id = match &g.id {
        Some(id) => id.clone(),
        None if c.curves.len() == 1 => c.curves[0].id.clone(),
        None => return Err(Error::Parameter("--id is required for multi-curve corpora".into())),
    };
    let m = c.model(&id)?;
    Ok((id, m))
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let hopts = HeightOptions { tol: g.tol, ..HeightOptions::default() };
    let ropts = ReportOptions { seed: g.seed, tol: g.tol, workers: g.workers, budget_sec: g.budget_sec, ..Default::default() };
    let mut out = String::new();
    match cli.cmd {
        Cmd::Conductor => {
            let (id, m) = selected(g)?;
            out.push_str(CONDUCTOR_CSV_HEADER);
            out.push('\n');
            for row in conductor_rows(&id, &conductor(&global_minimal_model(&m)?)?) {
                out.push_str(&row);
                out.push('\n');
            }
        }
        Cmd::Lpoly { extra } => {
            let (id, m) = selected(g)?;
            let e = l_expansion(&global_minimal_model(&m)?, extra, ropts.count_budget())?;
            let coeffs: Vec<String> = e.l.coeffs.iter().map(ToString::to_string).collect();
            let tail: Vec<String> = e.tail.iter().map(ToString::to_string).collect();
            out.push_str(&format!("id: {id}\nb_E: {}\nL: [{}]\ntail: [{}]\n", e.l.b_e, coeffs.join(", "), tail.join(", ")));
            out.push_str(&format!("truncation_ok: {}\nhasse_ok: {}\n", e.truncation_ok(), e.hasse_ok()));
        }
        Cmd::Rank => {
            let (id, m) = selected(g)?;
            let q = m.q();
            let e = l_expansion(&global_minimal_model(&m)?, 2, ropts.count_budget())?;
            let deg_n = e.conductor.deg_n;
            out.push_str(&format!("id: {id}\ndegN: {deg_n}\nrank_an: {}\ntrivial_bound: {}\n", analytic_rank(&e.l, q), deg_n as i64 - 4));
            if let Ok(b) = rank_bounds(deg_n, q) {
                out.push_str(&format!("brumer_main: {}\nbrumer_error_scale: {}\n", fmt_g6(b.brumer_main_term), fmt_g6(b.brumer_error_scale)));
            }
        }
        Cmd::Points { max_deg, s_places, max_den_exp, force } => {
            let (id, m) = selected(g)?;
            let m = global_minimal_model(&m)?;
            if !force && enumeration_cost(m.q(), max_deg).is_none_or(|c| c > 15_625) {
                return Err(Error::Budget(format!("q^{} candidates; pass --force to run anyway", max_deg + 1)));
            }
            let places = match s_places.as_deref() {
                None => Vec::new(),
                Some("auto") => discriminant_places(&m)?,
                Some(other) => return Err(Error::Parameter(format!("--s-places {other:?}: only `auto` is supported"))),
            };
            let spec = EnumerationSpec { max_deg_x: max_deg, s_places: places, max_den_exp };
            let inv = enumerate_s_integral(&m, &spec)?;
            let engine = HeightEngine::new(&m, hopts)?;
            out.push_str(POINTS_CSV_HEADER);
            out.push('\n');
            for p in &inv.points {
                let h = engine.canonical(p)?;
                let torsion = engine.torsion_status(p, 100)? == TorsionStatus::Torsion;
                let (x, y) = (p.x().expect("affine"), p.y().expect("affine"));
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_field(&id),
                    csv_field(&x.to_string()),
                    csv_field(&y.to_string()),
                    naive_height_x(p),
                    fmt_g6(h.value),
                    torsion
                ));
            }
        }
        Cmd::Heights { points } => {
            let (_, m) = selected(g)?;
            let pts: Vec<Point> = points.iter().map(|s| Point::parse(m.q(), s)).collect::<Result<_>>()?;
            let gram = gram_with_engine(&HeightEngine::new(&m, hopts)?, &pts)?;
            out.push_str("point,h_x,h_canonical,iterations,torsion\n");
            for (p, h) in pts.iter().zip(&gram.heights) {
                out.push_str(&format!("{},{},{},{},{}\n", csv_field(&p.to_string()), naive_height_x(p), fmt_g6(h.value), h.iterations, h.torsion));
            }
            out.push_str(&format!("regulator,{}\nindependent,{}\n", fmt_g6(gram.regulator), gram.rank_lower_bound()));
        }
        Cmd::Packing { step, n, eps, c1, c2, samples } => {
            out.push_str(&format!(
                "kl_bound(pi/3),{}\nintegral_point_exponent,{}\n",
                fmt_g6(kl_bound(std::f64::consts::FRAC_PI_3)?),
                fmt_g6(integral_point_exponent())
            ));
            match n {
                Some(n) => {
                    let cover = covering_centers(c1, c2, eps, n)?;
                    let r = covering_verify(&cover, samples, g.seed);
                    out.push_str("n,eps,c1,c2,M,centers,samples,failures,max_ratio,fitted_C\n");
                    out.push_str(&format!(
                        "{n},{},{},{},{},{},{},{},{},{}\n",
                        fmt_g6(eps),
                        fmt_g6(c1),
                        fmt_g6(c2),
                        cover.m_max,
                        r.centers,
                        r.samples,
                        r.failures,
                        fmt_g6(r.max_ratio),
                        fmt_g6(r.fitted_c)
                    ));
                }
                None => {
                    out.push_str("t,f,beta,alpha_at_x_eq_t\n");
                    for row in beta_table(0.0, 1.0, step)? {
                        let cells: Vec<String> = row.iter().map(|&v| fmt_g6(v)).collect();
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                }
            }
        }
        Cmd::Report { max_deg, random } => {
            let c = match random {
                Some(v) => random_corpus(v[0], v[1] as usize, v[2] as usize, g.seed)?,
                None => corpus(g)?,
            };
            let opts = ReportOptions { max_deg, ..ropts };
            let rows = run_report(&c, &opts)?;
            let csv = report_csv(&rows);
            if let Some(p) = &g.out {
                let json_path = p.with_extension("json");
                fs::write(&json_path, report_json(c.q, &opts, &rows)).map_err(|e| Error::Io(format!("{}: {e}", json_path.display())))?;
            }
            out = csv;
        }
    }
    emit(g, &out)
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
