//! `bbp`: list, instantiate, evaluate, rewrite, combine and verify BBP-type
//! formulas, and extract their digits.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or validation error,
//! 3 persistent digit-boundary hazard, 4 verification failure.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use bbp_core::bigfixed::format_digits;
use bbp_core::digit_extract::{extract_digits_retrying, MAX_GUARD};
use bbp_core::transforms::{align, rewrite_instance};
use bbp_core::verify::{run_family, run_generator_grid};
use bbp_core::{
    combine, eval_p, family, instantiate, list_families, rewrite_power, run_suite, Error, FormulaInstance, PFormula,
    Rational, VerifyReport,
};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;

#[derive(Parser)]
#[command(name = "bbp", version, about = "BBP-type formula families: generate, evaluate, transform, extract digits, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the 22 formula families.
    Families {
        #[arg(long)]
        json: bool,
    },
    /// Ground a family at an integer parameter.
    Instantiate {
        /// Family id (e.g. atan.pi4.minus) or label (e.g. A5).
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a formula to F fractional bits.
    Eval {
        /// P-notation, e.g. "P(1,16,8,(8,8,4,0,-2,-2,-1,0))".
        #[arg(long, allow_hyphen_values = true)]
        formula: String,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..))]
        bits: u32,
        /// Also print fractional digits in this base (>= 2).
        #[arg(long, requires = "count")]
        digits_base: Option<String>,
        #[arg(long, requires = "digits_base")]
        count: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite to base b^r and length m r.
    Rewrite {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "instance", conflicts_with = "instance")]
        formula: Option<String>,
        /// An instance JSON file (or - for stdin); the scale moves into the prefactor.
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        r: u32,
        #[arg(long)]
        json: bool,
    },
    /// Linear combination c1 a + c2 b of two instances with equal (s, b, m).
    Combine {
        /// Instance JSON file, or - for stdin.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        c1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        c2: String,
        /// Rewrite both instances to a common base first.
        #[arg(long)]
        align: bool,
        #[arg(long)]
        json: bool,
    },
    /// Digits of the formula's value at an arbitrary position.
    Digits {
        #[arg(long, allow_hyphen_values = true)]
        formula: String,
        /// First fractional position (0 = first digit after the point).
        #[arg(long)]
        pos: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        /// Guard digits; doubled on a boundary hazard up to 48.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(4..=MAX_GUARD as i64))]
        guard: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run the verification suite (or one family's sweep).
    Verify {
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 25)]
        n_max: u64,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..))]
        bits: u32,
        /// Include the generator grid when checking a single family.
        #[arg(long)]
        grid: bool,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Core(Error),
    Input(String),
    Verification(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Core(Error::BoundaryHazard { guard })) => {
            eprintln!("error: digits stay within the boundary hazard margin at guard = {guard}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(n)) => {
            eprintln!("verification failed: {n} check(s)");
            ExitCode::from(4)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Families { json } => families(json),
        Command::Instantiate { family, n, json } => {
            let i = instantiate(&family, n)?;
            Ok(if json { line(i.to_json()) } else { instance_text(&i) })
        }
        Command::Eval { formula, bits, digits_base, count, json } => eval(&formula, bits, digits_base, count, json),
        Command::Rewrite { formula, instance, r, json } => rewrite(formula, instance, r, json),
        Command::Combine { a, b, c1, c2, align: al, json } => {
            let (mut x, mut y) = (read_instance(&a)?, read_instance(&b)?);
            if al {
                (x, y) = align(&x, &y)?;
            }
            let c = combine(&x, &y, &rational(&c1)?, &rational(&c2)?)?;
            Ok(if json { line(c.to_json()) } else { instance_text(&c) })
        }
        Command::Digits { formula, pos, count, guard, json } => {
            let f = formula_arg(&formula)?;
            let count = usize::try_from(count).map_err(|_| Failure::Input("count too large".into()))?;
            let run = extract_digits_retrying(&f, pos, count, guard)?;
            if json {
                return Ok(line(serde_json::to_string(&run).expect("digit run serializes")));
            }
            let mut out = line(run.digits.clone());
            if let Some(orig) = &run.normalized_from {
                out += &format!(
                    "note: base {} digits of the r = 2 rewrite of {orig}, whose value is {} times the original\n",
                    run.base, orig.b
                );
            }
            Ok(out)
        }
        Command::Verify { family: fam, n_max, bits, grid, json } => verify(fam, n_max, bits, grid, json),
    }
}

fn line(s: String) -> String {
    s + "\n"
}

fn families(json: bool) -> Outcome {
    if json {
        return Ok(line(serde_json::to_string(list_families()).expect("registry serializes")));
    }
    let mut out = String::new();
    for d in list_families() {
        out += &format!(
            "{:<4} {:<15} {:<6} n>={}  {} = {} * {}\n",
            d.label, d.id, d.kind, d.n_min, d.closed_template, d.prefactor_template, d.formula_template
        );
    }
    Ok(out)
}

fn instance_text(i: &FormulaInstance) -> String {
    let label = family(&i.family_id).map(|d| format!(" ({})", d.label)).unwrap_or_default();
    format!(
        "family: {}{label}\nn: {}\nformula: {}\nprefactor: {}\nclosed form: {}\n",
        i.family_id, i.n, i.formula, i.prefactor, i.closed_form
    )
}

fn formula_arg(text: &str) -> Result<PFormula, Failure> {
    Ok(text.parse::<PFormula>()?)
}

fn rational(text: &str) -> Result<Rational, Failure> {
    text.parse::<Rational>().map_err(Failure::Core)
}

fn read_source(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
    } else {
        s = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn read_instance(path: &str) -> Result<FormulaInstance, Failure> {
    Ok(FormulaInstance::from_json(read_source(path)?.trim())?)
}

fn eval(formula: &str, bits: u32, digits_base: Option<String>, count: Option<usize>, json: bool) -> Outcome {
    let f = formula_arg(formula)?;
    let rep = eval_p(&f, bits)?;
    let value = rep.value.with_frac_bits(bits);
    let digits = match (digits_base, count) {
        (Some(b), Some(c)) => {
            let base = b
                .parse::<BigUint>()
                .ok()
                .filter(|v| *v >= BigUint::from(2u32))
                .ok_or_else(|| Failure::Input(format!("invalid digit base `{b}`")))?;
            // each digit consumes at least floor(log2 base) bits of the value
            if (base.bits() - 1) * c as u64 > bits as u64 {
                return Err(Failure::Input(format!("{c} base-{b} digits need more than {bits} bits; raise --bits")));
            }
            Some(format_digits(&rep.value.frac_digits(&base, c), &base))
        }
        _ => None,
    };
    if json {
        let mut obj = serde_json::json!({
            "formula": f.to_string(),
            "F": bits,
            "value": value.to_string(),
            "error_bound_log2": -(bits as i64),
            "terms": rep.terms_used,
        });
        if let Some(d) = &digits {
            obj["digits"] = serde_json::Value::String(d.clone());
        }
        return Ok(line(obj.to_string()));
    }
    let mut out = format!("value: {value}\nerror bound: 2^-{bits}\nterms: {}\n", rep.terms_used);
    if let Some(d) = digits {
        out += &format!("fraction digits: {d}\n");
    }
    Ok(out)
}

fn rewrite(formula: Option<String>, instance: Option<String>, r: u32, json: bool) -> Outcome {
    if let Some(path) = instance {
        let i = rewrite_instance(&read_instance(&path)?, r)?;
        return Ok(if json { line(i.to_json()) } else { instance_text(&i) });
    }
    let f = formula_arg(formula.as_deref().expect("clap requires formula or instance"))?;
    let rw = rewrite_power(&f, r)?;
    if json {
        return Ok(line(serde_json::to_string(&rw).expect("rewrite serializes")));
    }
    Ok(format!("formula: {}\nscale: {}\n", rw.formula, rw.scale))
}

fn verify(fam: Option<String>, n_max: u64, bits: u32, grid: bool, json: bool) -> Outcome {
    let reports: Vec<VerifyReport> = match fam {
        None => run_suite(bits, n_max),
        Some(id) => {
            let mut r = run_family(&id, bits, n_max)?;
            if grid {
                r.extend(run_generator_grid(bits));
            }
            r
        }
    };
    let mut out = String::new();
    for r in &reports {
        if json {
            out += &line(r.to_json());
        } else {
            let n = r.n.map(|n| format!(" n={n}")).unwrap_or_default();
            let resid = match (&r.error, r.residual_log2()) {
                (Some(e), _) => format!("error: {e}"),
                (None, Some(l)) => format!("residual 2^{l:.1}"),
                (None, None) => "residual 0".into(),
            };
            out += &format!("{} {}{n} {resid}\n", if r.pass { "PASS" } else { "FAIL" }, r.subject);
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if !json {
        out += &format!("{} checks, {} passed, {failed} failed (F = {bits})\n", reports.len(), reports.len() - failed);
    }
    print!("{out}");
    if failed > 0 {
        return Err(Failure::Verification(failed));
    }
    Ok(String::new())
}
