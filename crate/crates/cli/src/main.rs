use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use slopes_core::forms::{
    containment_check, delta_qexp, eisenstein_character, eisenstein_check, eisenstein_classical,
    eisenstein_constant, expansion_rows, f_qexp, fund_lemma_check, member_lemma_check, rows_to_csv,
    rows_to_json, theta_qexp, uv_property_check, y_qexp, CharacterWeight, CoordKind, Coordinate,
    ExpansionRow,
};
use slopes_core::padic::CycRing;
use slopes_core::report::CheckReport;
use slopes_core::residue::residue_check;
use slopes_core::series::IntSeries;
use slopes_core::spectral::{
    residue_link_check, slopes, strip_lemma_property, u_matrix_gf, u_matrix_qspace, UMatrix,
};

#[derive(Parser)]
#[command(
    name = "slopes",
    version,
    about = "3-adic slopes of U near the boundary of weight space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the expansion of a named form.
    Expand {
        #[arg(value_enum)]
        form: Form,
        /// Number of coefficients to print.
        #[arg(long, default_value_t = 10)]
        terms: usize,
        /// Weight of the classical Eisenstein series.
        #[arg(long)]
        weight: Option<u32>,
        /// Expand in q or in y.
        #[arg(long, value_enum, default_value_t = Coord::Q)]
        coordinate: Coord,
        #[command(flatten)]
        config: Config,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Number of q-terms compared in the identity checks.
        #[arg(long, default_value_t = 100)]
        terms: usize,
        /// Restrict the member-lemma suite to one weight k.
        #[arg(long)]
        weight: Option<u32>,
        /// Random trials for the property checks.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[command(flatten)]
        config: Config,
    },
    /// Print the β×β matrix of U.
    Matrix {
        #[arg(long, value_enum, default_value_t = Method::Gf)]
        method: Method,
        #[command(flatten)]
        config: Config,
    },
    /// Compute the characteristic series, Newton polygon and slopes.
    Slopes {
        #[command(flatten)]
        config: Config,
    },
}

#[derive(Args, Clone, Debug)]
struct Config {
    /// Conductor 3^(m+1) of the weight character.
    #[arg(long, default_value_t = 9)]
    conductor: u64,
    /// a with κ(2) = ζ^a (default 2 for conductor 9, 1 otherwise).
    #[arg(long, allow_negative_numbers = true)]
    generator_exponent: Option<i64>,
    #[arg(long, default_value_t = 120)]
    q_prec: usize,
    /// y-precision (defaults to β).
    #[arg(long)]
    y_prec: Option<usize>,
    #[arg(long, default_value_t = 8)]
    alpha_max: usize,
    #[arg(long, default_value_t = 27)]
    beta: usize,
    /// 3-adic working precision N (default 48 for conductor 9, 64 otherwise).
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Form {
    Theta,
    Delta,
    F,
    Y,
    #[value(name = "E_classical")]
    EClassical,
    #[value(name = "E_kappa")]
    EKappa,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Coord {
    Q,
    Y,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    FundLemma,
    MemberLemma,
    Eisenstein,
    Residue,
    StripLemma,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Gf,
    Qspace,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Failure modes, mapped onto exit codes 1 and 2.
enum Failure {
    Check(String),
    Config(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl Config {
    fn validate(&self) -> Result<(), Failure> {
        let y_prec = self.y_prec();
        if self.beta == 0 || !self.beta.is_multiple_of(3) {
            return Err(Failure::Config(format!(
                "--beta {} must be a positive multiple of 3",
                self.beta
            )));
        }
        if self.beta < 3 * self.alpha_max + 3 {
            return Err(Failure::Config(format!(
                "--beta {} must be at least 3·alpha_max + 3 = {}",
                self.beta,
                3 * self.alpha_max + 3
            )));
        }
        if self.q_prec < y_prec {
            return Err(Failure::Config(format!(
                "--q-prec {} must be at least --y-prec {y_prec}",
                self.q_prec
            )));
        }
        Ok(())
    }

    fn y_prec(&self) -> usize {
        self.y_prec.unwrap_or(self.beta)
    }

    fn kappa(&self) -> Result<CharacterWeight, Failure> {
        let a = self
            .generator_exponent
            .unwrap_or(if self.conductor == 9 { 2 } else { 1 });
        let n = self
            .precision
            .unwrap_or(if self.conductor == 9 { 48 } else { 64 });
        Ok(CharacterWeight::new(self.conductor, a, n)?)
    }

    fn emit(&self, body: &str) -> Result<(), Failure> {
        match &self.output {
            Some(path) => fs::write(path, body)
                .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{body}");
                if !body.ends_with('\n') {
                    println!();
                }
                Ok(())
            }
        }
    }
}

fn render_rows(rows: &[ExpansionRow], format: Format) -> String {
    match format {
        Format::Json => rows_to_json(rows),
        Format::Csv => rows_to_csv(rows),
        Format::Text => rows
            .iter()
            .map(|r| r.coefficient.as_str())
            .collect::<Vec<_>>()
            .join(", "),
    }
}

/// `E_k = 1 + c·Σ σ'_{k-1}(n) qⁿ` with exact rational coefficients.
fn classical_rows(k: u32, terms: usize) -> Vec<ExpansionRow> {
    let c = eisenstein_constant(k);
    (0..terms)
        .map(|n| {
            let coefficient = if n == 0 {
                "1".to_string()
            } else {
                let sigma: BigInt = (1..=n)
                    .filter(|d| n % d == 0 && d % 3 != 0)
                    .map(|d| BigInt::from(d).pow(k - 1))
                    .sum();
                (&c * BigRational::from_integer(sigma)).to_string()
            };
            ExpansionRow {
                exponent: n,
                coefficient,
                precision: None,
            }
        })
        .collect()
}

fn expand(form: Form, terms: usize, weight: Option<u32>, coord: Coord, config: &Config) -> Outcome {
    if terms == 0 {
        return Err(Failure::Config("--terms must be positive".into()));
    }
    let int_rows = |s: IntSeries| -> Result<Vec<ExpansionRow>, Failure> {
        Ok(match coord {
            Coord::Q => expansion_rows(&s),
            Coord::Y => expansion_rows(&Coordinate::new(CoordKind::Y, terms)?.from_q(&s)?),
        })
    };
    let rows = match form {
        Form::Theta => int_rows(theta_qexp(terms).series)?,
        Form::Delta => int_rows(delta_qexp(terms).series)?,
        Form::F => int_rows(f_qexp(terms).series)?,
        Form::Y => int_rows(y_qexp(terms)?.series)?,
        Form::EClassical if coord == Coord::Q => {
            let k = weight.ok_or_else(|| Failure::Config("E_classical needs --weight".into()))?;
            // validates k and checks 3-integrality of the constant
            let ring = CycRing::new(1, config.precision.unwrap_or(48))?;
            eisenstein_classical(k, 1, &ring)?;
            classical_rows(k, terms)
        }
        Form::EClassical | Form::EKappa => {
            let s = if form == Form::EKappa {
                eisenstein_character(&config.kappa()?, terms)?.series
            } else {
                let k =
                    weight.ok_or_else(|| Failure::Config("E_classical needs --weight".into()))?;
                let ring = CycRing::new(1, config.precision.unwrap_or(48))?;
                eisenstein_classical(k, terms, &ring)?.series
            };
            match coord {
                Coord::Q => expansion_rows(&s),
                Coord::Y => expansion_rows(&Coordinate::new(CoordKind::Y, terms)?.from_q(&s)?),
            }
        }
    };
    config.emit(&render_rows(&rows, config.format))
}

fn run_suite(
    suite: Suite,
    terms: usize,
    weight: Option<u32>,
    trials: usize,
    seed: u64,
    config: &Config,
) -> Result<Vec<CheckReport>, Failure> {
    let mut reports = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::FundLemma {
        reports.push(fund_lemma_check(terms)?);
        reports.push(uv_property_check(trials, seed));
    }
    if all || suite == Suite::MemberLemma {
        let ks = weight.map_or_else(|| vec![1, 2, 3, 5], |k| vec![k]);
        for k in ks {
            reports.push(member_lemma_check(k, terms.min(30))?);
        }
        reports.push(containment_check(trials, 12, seed)?);
    }
    if all || suite == Suite::Eisenstein {
        reports.push(eisenstein_check(terms.min(60))?);
    }
    if all || suite == Suite::Residue {
        reports.push(residue_check(terms.max(100), config.alpha_max.max(24))?);
    }
    if all || suite == Suite::StripLemma {
        let ring = CycRing::new(1, 40)?;
        reports.push(strip_lemma_property(2, &ring.pi(), trials, seed)?);
        let kappa = config.kappa()?;
        let beta = config.beta;
        let g = slopes_core::forms::g_kappa(&kappa, beta)?;
        let n = u_matrix_gf(&kappa, beta, &g)?;
        reports.push(n.check_invariants());
        reports.push(residue_link_check(&n, beta / 3)?);
        let cmp = beta.min(12);
        let lit = u_matrix_qspace(&kappa, cmp - cmp % 3)?;
        let diff = n.first_difference(&lit, cmp - cmp % 3);
        let mut r = CheckReport::new("u-matrix routes");
        r.push(
            "generating function vs q-space",
            "n_{i,j} from g_κ·h^t equals U(V(E_κ)y^j)/V(E_κ) rescaled",
            diff.is_none(),
            diff.map_or(format!("i, j < {cmp}"), |(i, j)| {
                format!("differs at ({i}, {j})")
            }),
        );
        reports.push(r);
    }
    Ok(reports)
}

fn verify(
    suite: Suite,
    terms: usize,
    weight: Option<u32>,
    trials: usize,
    seed: u64,
    config: &Config,
) -> Outcome {
    let reports = run_suite(suite, terms, weight, trials, seed, config)?;
    let body = match config.format {
        Format::Json => serde_json::to_string_pretty(&reports)?,
        Format::Csv => {
            let mut out = String::from("suite,check,passed,detail\n");
            for r in &reports {
                for c in &r.checks {
                    out.push_str(&format!(
                        "\"{}\",\"{}\",{},\"{}\"\n",
                        r.suite,
                        c.name,
                        c.passed,
                        c.detail.replace('"', "'")
                    ));
                }
            }
            out
        }
        Format::Text => reports
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(""),
    };
    config.emit(&body)?;
    match reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| (r, c)))
    {
        None => Ok(()),
        Some((r, c)) => Err(Failure::Check(format!(
            "{}: {} failed ({}): {}",
            r.suite, c.name, c.identity, c.detail
        ))),
    }
}

fn render_matrix(n: &UMatrix, method: Method, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => {
            let entries: Vec<Vec<_>> = n
                .rows()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| json!({"coefficient": c.to_string(), "precision": c.precision()}))
                        .collect()
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "kappa": {
                    "conductor": n.kappa().conductor(),
                    "generator_exponent": n.kappa().generator_exponent(),
                },
                "beta": n.beta(),
                "method": format!("{method:?}").to_lowercase(),
                "entries": entries,
            }))?
        }
        Format::Csv => {
            let mut out = String::from("i,j,coefficient,precision\n");
            for (i, row) in n.rows().iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    out.push_str(&format!("{i},{j},\"{c}\",{}\n", c.precision()));
                }
            }
            out
        }
        Format::Text => n
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" | ")
            })
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn matrix(method: Method, config: &Config) -> Outcome {
    let kappa = config.kappa()?;
    let n = match method {
        Method::Gf => {
            let g = slopes_core::forms::g_kappa(&kappa, config.beta)?;
            u_matrix_gf(&kappa, config.beta, &g)?
        }
        Method::Qspace => u_matrix_qspace(&kappa, config.beta)?,
    };
    config.emit(&render_matrix(&n, method, config.format)?)
}

fn run_slopes(config: &Config) -> Outcome {
    let kappa = config.kappa()?;
    let report = slopes(&kappa, config.alpha_max, config.beta)?;
    let body = match config.format {
        Format::Json => report.to_json(),
        Format::Csv => {
            let mut out = String::from("alpha,valuation_num,valuation_den\n");
            for p in &report.b_valuations {
                out.push_str(&format!("{},{},{}\n", p.alpha, p.num, p.den));
            }
            out
        }
        Format::Text => {
            let slopes: Vec<String> = report
                .slopes
                .iter()
                .map(|s| {
                    let v = if s.den == 1 {
                        s.num.to_string()
                    } else {
                        format!("{}/{}", s.num, s.den)
                    };
                    if s.mult == 1 {
                        v
                    } else {
                        format!("{v} (×{})", s.mult)
                    }
                })
                .collect();
            format!(
                "v = {}/{}\nslopes: {}\nstable: {}\nprogression 0, v, 2v, …: {}\nprecision remaining: {}\n",
                report.v.num,
                report.v.den,
                slopes.join(", "),
                report.stable,
                report.progression,
                report.precision_remaining
            )
        }
    };
    config.emit(&body)?;
    if !report.stable {
        return Err(Failure::Check(
            "characteristic series not stable between β and β + 3".into(),
        ));
    }
    if !report.progression {
        return Err(Failure::Check(match report.common_difference {
            Some(d) => format!(
                "slopes are not 0, v, 2v, … with v = {}/{}; observed common difference {}/{}",
                report.v.num, report.v.den, d.num, d.den
            ),
            None => "slopes do not form an arithmetic progression".into(),
        }));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Expand {
            form,
            terms,
            weight,
            coordinate,
            config,
        } => config
            .validate()
            .and_then(|_| expand(*form, *terms, *weight, *coordinate, config)),
        Command::Verify {
            suite,
            terms,
            weight,
            trials,
            seed,
            config,
        } => config
            .validate()
            .and_then(|_| verify(*suite, *terms, *weight, *trials, *seed, config)),
        Command::Matrix { method, config } => {
            config.validate().and_then(|_| matrix(*method, config))
        }
        Command::Slopes { config } => config.validate().and_then(|_| run_slopes(config)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
