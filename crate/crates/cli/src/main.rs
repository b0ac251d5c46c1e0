mod report;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use freechi::analytic::{mp_table, semicircle_table};
use freechi::free_moments::{poly_cumulants, poly_power_moments, FreeFamily, PolySpec, Scalar, WORD_LENGTH_CAP};
use freechi::infdiv::{fid_check, fid_witness_moments};
use freechi::laws::LawSpec;
use freechi::partitions::{
    enumerate_nc_filtered, joins_to_one, kreweras_extended, kreweras_left, kreweras_right, nc_join, BlockSet, NcKind,
};
use freechi::quadratic_forms::{
    cn_table, quad_cumulant_even_family, quad_cumulant_iid, sample_variance_cumulant, RationalMatrix,
};
use freechi::rational::{format_rational, powi, to_f64};
use freechi::series::moments_from_cumulants;
use freechi::{CumulantSeq, Rational};
use num_traits::{Signed, Zero};
use serde_json::json;

use report::*;

/// Expanded-word budget for brute-force evaluation of `Pʳ`.
const BRUTE_TERM_CAP: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "freechi", version, about = "Exact free-cumulant calculus")]
struct Cli {
    /// Write JSON to PATH (`--json=PATH`; bare `--json` or `-`: stdout).
    #[arg(long, global = true, value_name = "PATH", num_args = 0..=1, require_equals = true, default_missing_value = "-")]
    json: Option<String>,
    /// Write CSV to PATH (`--csv=PATH`; bare `--csv` or `-`: stdout).
    #[arg(long, global = true, value_name = "PATH", num_args = 0..=1, require_equals = true, default_missing_value = "-")]
    csv: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Noncrossing partitions.
    #[command(subcommand)]
    Nc(NcCmd),
    /// Named laws and their cumulant/moment sequences.
    #[command(subcommand)]
    Law(LawCmd),
    /// Cumulants of the sample variance `Q_n = Σ(Xᵢ − X̄)²`.
    #[command(subcommand)]
    Qn(QnCmd),
    /// Cumulants of quadratic forms `Σ a_ij XᵢXⱼ`.
    #[command(subcommand)]
    Quadform(QuadformCmd),
    /// Free infinite divisibility checks.
    #[command(subcommand)]
    Fid(FidCmd),
    /// Densities on a grid.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Brute-force joint moments of free variables.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum NcCmd {
    /// Enumerate NC(n), optionally only pairings or even partitions.
    List {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all", value_parser = ["all", "pair", "even"])]
        kind: String,
        /// Require this block, e.g. `1,4`.
        #[arg(long)]
        require: Option<String>,
        /// Forbid blocks, `;`-separated, e.g. `1;2,3`.
        #[arg(long)]
        forbid: Option<String>,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Kreweras complement.
    Kreweras {
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long)]
        partition: String,
    },
    /// Join in the noncrossing lattice.
    Join {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Right,
    Left,
    Extended,
}

#[derive(Args)]
struct LawOrder {
    /// LawSpec JSON file, or inline JSON.
    #[arg(long)]
    law: String,
    #[arg(long)]
    order: usize,
}

#[derive(Subcommand)]
enum LawCmd {
    Cumulants(LawOrder),
    Moments(LawOrder),
}

#[derive(Subcommand)]
enum QnCmd {
    /// `K_1..K_R` of `Q_n`.
    Cumulants {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "closed")]
        method: QnMethod,
    },
    /// Compare `K_r(Q_n)` with the `χ²(n−1)` value `(n−1)·k₂ʳ`, by the
    /// closed formula and, within caps, by brute force.
    VerifyTheorem {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QnMethod {
    Closed,
    Rcyclic,
    Brute,
}

#[derive(Subcommand)]
enum QuadformCmd {
    /// `K_1..K_R` of `Σ a_ij XᵢXⱼ` for i.i.d. `Xᵢ`.
    Cumulants {
        /// Matrix as CSV or JSON array of rows (file or inline JSON).
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        law: String,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "iid")]
        method: QuadMethod,
    },
    /// Coefficients `c_n(π̂)` over the interval above the special pairing.
    CnCoeffs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QuadMethod {
    Iid,
    Family,
    Brute,
}

#[derive(Subcommand)]
enum FidCmd {
    /// Hankel necessary condition on the shifted cumulants.
    Check(LawOrder),
    /// Matrix-model witness for `Σ a_ij XᵢXⱼ` and the Hankel check of its
    /// cumulants.
    Witness {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        law: String,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Semicircle or free Poisson density on an arcsine grid.
    Emit {
        #[arg(long)]
        law: String,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// `τ(X_{w₁}⋯X_{w_L})`, or `τ(Pʳ)` for a PolySpec.
    Moment {
        /// One law per variable; a single law is used for every variable.
        #[arg(long, required = true)]
        law: Vec<String>,
        /// Word such as `1,2,1,2`.
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        word: Option<String>,
        /// PolySpec JSON file or inline JSON.
        #[arg(long)]
        poly: Option<String>,
        /// Powers `r = 1..order` of the polynomial.
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let sinks = Sinks {
        json: cli.json.clone(),
        csv: cli.csv.clone(),
    };
    match run(cli.command).and_then(|r| sinks.emit(&r).map(|_| r.verdict)) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    match std::env::var("FREECHI_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            let t: usize = v
                .trim()
                .parse()
                .with_context(|| format!("FREECHI_THREADS={v:?} is not a count"))?;
            freechi::exec::configure_threads(Some(t));
        }
        _ => {}
    }
    Ok(())
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Nc(c) => nc(c),
        Command::Law(c) => law(c),
        Command::Qn(c) => qn(c),
        Command::Quadform(c) => quadform(c),
        Command::Fid(c) => fid(c),
        Command::Density(DensityCmd::Emit { law, points }) => density(&law, points),
        Command::Oracle(OracleCmd::Moment { law, word, poly, order }) => oracle(&law, word, poly, order),
    }
}

fn parse_block(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad element {t:?}")))
        .collect()
}

fn nc(cmd: NcCmd) -> Result<Report> {
    match cmd {
        NcCmd::List {
            n,
            kind,
            require,
            forbid,
            count,
        } => {
            let k: NcKind = kind.parse()?;
            let required = require.as_deref().map(parse_block).transpose()?;
            let forbidden = match forbid.as_deref() {
                Some(f) => BlockSet::new(n, f.split(';').map(parse_block).collect::<Result<_>>()?)?,
                None => BlockSet::empty(n),
            };
            let parts = enumerate_nc_filtered(n, k, &forbidden, required.as_deref())?;
            let lines: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
            let text = if count {
                parts.len().to_string()
            } else {
                lines.join("\n")
            };
            let csv = std::iter::once("partition".to_string())
                .chain(lines.iter().map(|l| format!("\"{l}\"")))
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            Ok(Report::new(
                text,
                json!({ "n": n, "kind": kind, "count": parts.len(), "partitions": parts }),
            )
            .with_csv(csv))
        }
        NcCmd::Kreweras { side, partition } => {
            let p = parse_partition(&partition)?;
            let (q, name) = match side {
                Side::Right => (kreweras_right(&p)?, "right"),
                Side::Left => (kreweras_left(&p)?, "left"),
                Side::Extended => (kreweras_extended(&p)?, "extended"),
            };
            Ok(Report::new(
                q.to_string(),
                json!({ "side": name, "partition": p, "complement": q }),
            ))
        }
        NcCmd::Join { a, b } => {
            let (p, q) = (parse_partition(&a)?, parse_partition(&b)?);
            let j = nc_join(&p, &q)?;
            let one = joins_to_one(&p, &q)?;
            Ok(Report::new(
                format!("{j}\njoins-to-one: {one}"),
                json!({ "join": j, "joins_to_one": one }),
            ))
        }
    }
}

fn law(cmd: LawCmd) -> Result<Report> {
    match cmd {
        LawCmd::Cumulants(LawOrder { law, order }) => {
            let k = load_law(&law, order)?;
            Ok(Report::new(spaced(k.as_slice()), serde_json::to_value(&k)?).with_csv(indexed_csv("k", k.as_slice())))
        }
        LawCmd::Moments(LawOrder { law, order }) => {
            let m = moments_from_cumulants(&load_law(&law, order)?);
            Ok(Report::new(spaced(m.as_slice()), seq_json("m", m.as_slice())).with_csv(indexed_csv("m", m.as_slice())))
        }
    }
}

fn check_brute(n_terms: usize, degree: usize, r: usize) -> Result<()> {
    if degree * r > WORD_LENGTH_CAP {
        bail!(
            "brute force needs words of length {}, cap is {WORD_LENGTH_CAP}",
            degree * r
        );
    }
    let expanded = (n_terms as f64).powi(r as i32);
    if expanded > BRUTE_TERM_CAP as f64 {
        bail!("brute force expands to {expanded:.0} words, cap is {BRUTE_TERM_CAP}");
    }
    Ok(())
}

fn brute_quadratic(a: &RationalMatrix, kc: &CumulantSeq, order: usize) -> Result<CumulantSeq> {
    let p = PolySpec::quadratic_form(a)?;
    check_brute(p.terms().len(), 2, order)?;
    Ok(poly_cumulants(&p, &FreeFamily::iid(kc.clone(), a.n()), order)?)
}

fn qn(cmd: QnCmd) -> Result<Report> {
    match cmd {
        QnCmd::Cumulants { law, n, order, method } => {
            let kc = load_law(&law, 2 * order)?;
            let (name, values): (&str, Vec<Rational>) = match method {
                QnMethod::Closed => (
                    "closed",
                    (1..=order)
                        .map(|r| sample_variance_cumulant(&kc, n, r))
                        .collect::<Result<_, _>>()?,
                ),
                QnMethod::Rcyclic => {
                    // centering hides the odd cumulants from Q_n, so the
                    // R-cyclic route (even laws only) runs on the even part
                    let a = RationalMatrix::sample_variance(n);
                    let even = even_part(&kc)?;
                    (
                        "rcyclic",
                        (1..=order)
                            .map(|r| quad_cumulant_iid(&a, &even, r))
                            .collect::<Result<_, _>>()?,
                    )
                }
                QnMethod::Brute => {
                    if n < 2 {
                        bail!("sample variance needs n >= 2");
                    }
                    (
                        "brute",
                        brute_quadratic(&RationalMatrix::sample_variance(n), &kc, order)?.into_vec(),
                    )
                }
            };
            Ok(Report::new(
                spaced(&values),
                json!({ "method": name, "n": n, "order": order, "k": rats(&values) }),
            )
            .with_csv(indexed_csv("k", &values)))
        }
        QnCmd::VerifyTheorem { law, n, order } => verify_theorem(&law, n, order),
    }
}

fn even_part(kc: &CumulantSeq) -> Result<CumulantSeq> {
    let v = kc
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, q)| if i % 2 == 0 { Rational::zero() } else { q.clone() });
    Ok(CumulantSeq::new(v.collect())?)
}

fn verify_theorem(law: &str, n: usize, order: usize) -> Result<Report> {
    if order == 0 {
        bail!("order must be >= 1");
    }
    let kc = load_law(law, 2 * order)?;
    let k2 = kc.k(2)?.clone();
    let scale = Rational::from_integer((n as i64 - 1).into());
    let closed: Vec<Rational> = (1..=order)
        .map(|r| sample_variance_cumulant(&kc, n, r))
        .collect::<Result<_, _>>()?;
    // largest order the brute-force oracle can reach within caps
    let q_terms = n * n;
    let brute_order = (1..=order)
        .take_while(|&r| check_brute(q_terms, 2, r).is_ok())
        .last()
        .unwrap_or(0);
    let brute = if brute_order > 0 {
        Some(brute_quadratic(&RationalMatrix::sample_variance(n), &kc, brute_order)?)
    } else {
        None
    };
    let odd_law = k2.is_positive() && (2..=order).all(|j| kc.as_slice()[2 * j - 1].is_zero());

    let mut text = format!("r  K_r(Q_n) closed  brute  chi2({})  verdict\n", n - 1);
    let mut rows = Vec::new();
    let mut all_chi2 = true;
    let mut agree = true;
    for r in 1..=order {
        let target = &scale * powi(&k2, r as i64);
        let c = &closed[r - 1];
        let b = brute
            .as_ref()
            .filter(|_| r <= brute_order)
            .map(|s| s.as_slice()[r - 1].clone());
        let matches = *c == target;
        let consistent = b.as_ref().is_none_or(|b| b == c);
        all_chi2 &= matches;
        agree &= consistent;
        let verdict = match (matches, consistent) {
            (_, false) => "methods-disagree",
            (true, true) => "chi-square",
            (false, true) => "differs",
        };
        let bt = b.as_ref().map(format_rational).unwrap_or_else(|| "-".into());
        text.push_str(&format!(
            "{r}  {}  {bt}  {}  {verdict}\n",
            format_rational(c),
            format_rational(&target)
        ));
        rows.push(json!({
            "r": r,
            "closed": format_rational(c),
            "brute": b.as_ref().map(format_rational),
            "chi_square": format_rational(&target),
            "verdict": verdict,
        }));
    }
    // the characterization: chi-square to order R iff K₄ = … = K_{2R} = 0
    let theorem_consistent = all_chi2 == odd_law;
    text.push_str(&format!(
        "law odd to order {}: {odd_law}; Q_n chi-square to order {order}: {all_chi2}; characterization consistent: {theorem_consistent}\n",
        2 * order
    ));
    let holds = all_chi2 && agree && theorem_consistent;
    Ok(Report::new(
        text,
        json!({
            "n": n,
            "order": order,
            "brute_order": brute_order,
            "law_odd": odd_law,
            "chi_square": all_chi2,
            "methods_agree": agree,
            "characterization_consistent": theorem_consistent,
            "orders": rows,
        }),
    )
    .with_verdict(holds))
}

fn quadform(cmd: QuadformCmd) -> Result<Report> {
    match cmd {
        QuadformCmd::Cumulants {
            matrix,
            law,
            order,
            method,
        } => {
            let a = load_matrix(&matrix)?;
            let kc = load_law(&law, 2 * order)?;
            let (name, values): (&str, Vec<Rational>) = match method {
                QuadMethod::Iid => (
                    "iid",
                    (1..=order)
                        .map(|r| quad_cumulant_iid(&a, &kc, r))
                        .collect::<Result<_, _>>()?,
                ),
                QuadMethod::Family => {
                    let laws = vec![kc.clone(); a.n()];
                    (
                        "family",
                        (1..=order)
                            .map(|r| quad_cumulant_even_family(&a, &laws, r))
                            .collect::<Result<_, _>>()?,
                    )
                }
                QuadMethod::Brute => ("brute", brute_quadratic(&a, &kc, order)?.into_vec()),
            };
            Ok(Report::new(
                spaced(&values),
                json!({ "method": name, "n": a.n(), "order": order, "k": rats(&values) }),
            )
            .with_csv(indexed_csv("k", &values)))
        }
        QuadformCmd::CnCoeffs { n, order } => {
            let table = cn_table(n, order)?;
            let mut text = String::new();
            let mut csv = String::from("partition,coefficient\n");
            let mut rows = Vec::new();
            for (p, c) in &table {
                let c = format_rational(c);
                text.push_str(&format!("{p}\t{c}\n"));
                csv.push_str(&format!("\"{p}\",{c}\n"));
                rows.push(json!({ "partition": p, "coefficient": c }));
            }
            Ok(Report::new(text, json!({ "n": n, "order": order, "coefficients": rows })).with_csv(csv))
        }
    }
}

fn fid(cmd: FidCmd) -> Result<Report> {
    match cmd {
        FidCmd::Check(LawOrder { law, order }) => {
            let kc = load_law(&law, order)?;
            let v = fid_check(&kc)?;
            let mut text = v.label();
            if let (Some(k), Some(val)) = (v.violating_minor, v.minor_text()) {
                text.push_str(&format!("\nviolating minor k={k} ({}x{}): {val}", k + 1, k + 1));
            }
            let holds = v.fid_consistent;
            Ok(Report::new(text, serde_json::to_value(&v)?).with_verdict(holds))
        }
        FidCmd::Witness { matrix, law, order } => {
            let a = load_matrix(&matrix)?;
            let kc = load_law(&law, 2 * order)?;
            let witness = fid_witness_moments(&a, &kc, order)?;
            let direct: Vec<Rational> = (1..=order)
                .map(|r| quad_cumulant_iid(&a, &kc, r))
                .collect::<Result<_, _>>()?;
            let identity = witness == direct;
            let v = fid_check(&CumulantSeq::new(direct.clone())?)?;
            let mut text = String::from("r  witness  K_r(T)\n");
            for r in 0..order {
                text.push_str(&format!(
                    "{}  {}  {}\n",
                    r + 1,
                    format_rational(&witness[r]),
                    format_rational(&direct[r])
                ));
            }
            text.push_str(&format!("witness identity: {identity}\nhankel: {}\n", v.label()));
            Ok(Report::new(
                text,
                json!({
                    "order": order,
                    "witness": rats(&witness),
                    "cumulants": rats(&direct),
                    "identity": identity,
                    "hankel": v,
                }),
            )
            .with_verdict(identity && v.fid_consistent))
        }
    }
}

fn density(law: &str, points: usize) -> Result<Report> {
    let table = match load_law_spec(law)? {
        LawSpec::Semicircle { sigma2 } => {
            if sigma2.is_zero() {
                bail!("semicircle with sigma2 = 0 is a point mass, no density");
            }
            semicircle_table(to_f64(&sigma2).sqrt(), points)
        }
        LawSpec::FreePoisson { lambda, alpha } => {
            if !lambda.is_positive() || !alpha.is_positive() {
                bail!("free Poisson density needs lambda > 0 and alpha > 0");
            }
            mp_table(to_f64(&lambda), to_f64(&alpha), points)
        }
        other => bail!("no closed-form density for law type {}", other.kind()),
    };
    let csv = table.to_csv();
    let atom = table.atom.map(|(loc, mass)| json!({ "loc": loc, "mass": mass }));
    Ok(Report::new(csv.clone(), json!({ "x": table.grid, "f": table.values, "atom": atom })).with_csv(csv))
}

fn scalar_text(z: &Scalar) -> String {
    if z.im.is_zero() {
        format_rational(&z.re)
    } else {
        let sign = if z.im.is_negative() { "-" } else { "+" };
        format!("{}{sign}{}i", format_rational(&z.re), format_rational(&z.im.abs()))
    }
}

fn oracle(laws: &[String], word: Option<String>, poly: Option<String>, order: usize) -> Result<Report> {
    let (n_vars, length) = match (&word, &poly) {
        (Some(w), _) => {
            let w = parse_block(w)?;
            (w.iter().copied().max().unwrap_or(0), w.len())
        }
        (None, Some(p)) => {
            let p: PolySpec = serde_json::from_str(&load_text(p)?).context("bad polynomial")?;
            (p.n_vars(), p.degree() * order)
        }
        (None, None) => bail!("give --word or --poly"),
    };
    let order_needed = length.max(1);
    let family = if laws.len() == 1 {
        FreeFamily::iid(load_law(&laws[0], order_needed)?, n_vars.max(1))
    } else {
        FreeFamily::new(laws.iter().map(|l| load_law(l, order_needed)).collect::<Result<_>>()?)?
    };
    match (word, poly) {
        (Some(w), _) => {
            let m = family.joint_moment(&parse_block(&w)?)?;
            Ok(Report::new(
                format_rational(&m),
                json!({ "word": parse_block(&w)?, "moment": format_rational(&m) }),
            ))
        }
        (None, Some(p)) => {
            let p: PolySpec = serde_json::from_str(&load_text(&p)?)?;
            let ms = poly_power_moments(&p, &family, order)?;
            let text = ms.iter().map(scalar_text).collect::<Vec<_>>().join(" ");
            let js: Vec<_> = ms
                .iter()
                .map(|z| json!({ "re": format_rational(&z.re), "im": format_rational(&z.im) }))
                .collect();
            Ok(Report::new(text, json!({ "order": order, "moments": js })))
        }
        (None, None) => unreachable!(),
    }
}

fn load_text(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("cannot read {arg}"))
    }
}
