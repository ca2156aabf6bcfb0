//! entireforge: build, check and evaluate certified entire-function prefixes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::json;

use entireforge::algebraic::enumerate::AlphaStream;
use entireforge::config::{set_limits, Limits, MAX_REFINE_ENV};
use entireforge::engine::{self, evaluate, verify_run, ConstructionState, StepCertificate};
use entireforge::exact::Rational;
use entireforge::par::set_threads;
use entireforge::persist::{cert_file_name, cert_from_json, cert_to_json, state_from_json, state_to_json, Manifest};

#[derive(Parser)]
#[command(name = "entireforge", version, about = "Certified inductive construction of entire functions with rational coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run steps 1..N and write state, certificates and manifest
    Construct {
        /// Number of steps N (builds f_2 .. f_{N+1})
        #[arg(long)]
        steps: usize,
        /// Branch seed k >= 1 selecting the k-th admissible coefficient
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Refinement ceiling (doubling rounds)
        #[arg(long, env = MAX_REFINE_ENV)]
        max_refine: Option<u32>,
        /// Worker threads; 1 runs sequentially, 0 uses every core
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Re-check a run from its manifest
    Verify {
        manifest: PathBuf,
        #[arg(long, env = MAX_REFINE_ENV)]
        max_refine: Option<u32>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Enclose f_N(z) at a rational complex point
    Eval {
        /// state.json of a run
        #[arg(long)]
        state: PathBuf,
        /// Point such as "1/2", "-3/4 i" or "1/2+1/3 i"
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Largest side length of the result box, as "p/q" or "2^-k"
        #[arg(long, default_value = "2^-64")]
        width: String,
    },
    /// List the first alphas of the constrained enumeration
    Enumerate {
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "usage", message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: 3, kind: "io", message: format!("{}: {e}", path.display()) }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure { code: 1, kind: "verification", message: message.into() }
    }
}

impl From<entireforge::Error> for Failure {
    fn from(e: entireforge::Error) -> Self {
        let code = match e.code() {
            "parse" => 3,
            "invalid_argument" => 2,
            _ => 1,
        };
        Failure { code, kind: e.code(), message: e.to_string() }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return report(Failure::usage(first.trim_start_matches("error: ")));
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    eprintln!("{}", json!({ "error": f.kind, "message": f.message, "exit": f.code }));
    ExitCode::from(f.code)
}

fn configure(max_refine: Option<u32>, threads: usize) {
    if let Some(m) = max_refine {
        set_limits(Limits::with_max_refine(m));
    }
    set_threads(threads);
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Construct { steps, seed, out, max_refine, threads } => {
            configure(max_refine, threads);
            construct(steps, seed, &out)
        }
        Command::Verify { manifest, max_refine, threads } => {
            configure(max_refine, threads);
            verify(&manifest)
        }
        Command::Eval { state, at, width } => eval(&state, &at, &width),
        Command::Enumerate { count } => enumerate(count),
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

fn save(dir: &Path, state: &ConstructionState, certs: &[StepCertificate]) -> Result<Manifest, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let manifest = Manifest::new(state, timestamp());
    write(&dir.join(&manifest.state), &state_to_json(state))?;
    for (name, cert) in manifest.certificates.iter().zip(certs) {
        write(&dir.join(name), &cert_to_json(cert))?;
    }
    write(&dir.join("manifest.json"), &manifest.to_json())?;
    Ok(manifest)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn construct(steps: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    if steps == 0 {
        return Err(Failure::usage("--steps must be at least 1"));
    }
    if seed == 0 {
        return Err(Failure::usage("--seed must be at least 1"));
    }
    match engine::run(steps, seed) {
        Ok((state, certs)) => {
            let manifest = save(out, &state, &certs)?;
            println!("{:>4}  {:>10}  {:>7}  {:>7}  a_(n+1)", "step", "radius", "deg P", "deg f");
            for (k, c) in certs.iter().enumerate() {
                let deg_f = state.f_dense(k + 2).deg();
                println!("{:>4}  {:>10}  {:>7}  {:>7}  {}", c.n, c.radius.to_string(), c.p.degree, deg_f, c.coefficient);
            }
            println!("prefix: {}", strings(&manifest.prefix).join(", "));
            println!("wrote {}", out.join("manifest.json").display());
            Ok(())
        }
        Err(failure) => {
            // Keep whatever was certified before the failing step.
            if !failure.state.alphas.is_empty() && !failure.state.steps.is_empty() {
                save(out, &failure.state, &failure.certificates)?;
            }
            Err(failure.error.into())
        }
    }
}

fn load(manifest_path: &Path) -> Result<(Manifest, ConstructionState, Vec<StepCertificate>), Failure> {
    let manifest = Manifest::from_json(&read(manifest_path)?)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let state = state_from_json(&read(&dir.join(&manifest.state))?)?;
    let certs = manifest
        .certificates
        .iter()
        .map(|name| Ok(cert_from_json(&read(&dir.join(name))?)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok((manifest, state, certs))
}

fn verify(manifest_path: &Path) -> Result<(), Failure> {
    let (manifest, state, certs) = load(manifest_path)?;
    let mut lines = vec![];
    let mut ok = true;
    let mut line = |pass: bool, step: usize, name: &str, detail: &str| {
        ok &= pass;
        let tag = if pass { "PASS" } else { "FAIL" };
        let at = if step == 0 { "run".to_string() } else { format!("step {step}") };
        lines.push(format!("{tag} [{at}] {name}: {detail}"));
    };
    let consistent = manifest.steps == state.steps.len()
        && manifest.seed == state.seed
        && manifest.prefix == state.prefix()
        && manifest.certificates.iter().enumerate().all(|(k, n)| *n == cert_file_name(k + 1));
    line(consistent, 0, "manifest", &format!("{} steps, seed {}", manifest.steps, manifest.seed));
    let report = verify_run(&state, &certs);
    for c in &report.checks {
        line(c.pass, c.step, c.name, &c.detail);
    }
    for l in &lines {
        println!("{l}");
    }
    if ok {
        println!("verify: PASS ({} checks)", lines.len());
        Ok(())
    } else {
        let failed = lines.iter().filter(|l| l.starts_with("FAIL")).count();
        println!("verify: FAIL ({failed} of {} checks)", lines.len());
        Err(Failure::verification(format!("{failed} checks failed")))
    }
}

/// Parse `"a/b"`, `"c/d i"`, `"a/b+c/d i"` or `"a/b-c/d i"`.
fn parse_complex(s: &str) -> Result<(Rational, Rational), Failure> {
    let bad = || Failure::usage(format!("cannot parse point `{s}`"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let q = |x: &str| x.parse::<Rational>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok((q(&t)?, Rational::zero()));
    };
    let split = body.rfind(['+', '-']).filter(|&k| k > 0);
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        x => q(x.strip_prefix('+').unwrap_or(x))?,
    };
    Ok((q(re)?, im))
}

/// Parse `"p/q"` or `"2^-k"`.
fn parse_width(s: &str) -> Result<Rational, Failure> {
    let bad = || Failure::usage(format!("cannot parse width `{s}`"));
    let w = match s.trim().strip_prefix("2^") {
        Some(e) => Rational::pow2(e.parse::<i64>().map_err(|_| bad())?),
        None => s.trim().parse::<Rational>().map_err(|_| bad())?,
    };
    if !w.is_positive() {
        return Err(bad());
    }
    Ok(w)
}

fn eval(state_path: &Path, at: &str, width: &str) -> Result<(), Failure> {
    let (re, im) = parse_complex(at)?;
    let width = parse_width(width)?;
    let state = state_from_json(&read(state_path)?)?;
    let e = evaluate(&state, &re, &im, &width)?;
    let [a, b, c, d] = e.value.bounds();
    println!("f_{}({}) in [{a}, {b}] + [{c}, {d}] i", state.n(), point(&re, &im));
    match e.tail.total() {
        Some(t) => println!("|f - f_{}| <= {t} on |w| <= |z|", state.n()),
        None => println!("|f - f_{}|: no certified tail bound at this modulus", state.n()),
    }
    Ok(())
}

fn point(re: &Rational, im: &Rational) -> String {
    match (re.is_zero(), im.is_zero()) {
        (_, true) => re.to_string(),
        (true, false) => format!("{im} i"),
        _ if im.is_negative() => format!("{re}-{} i", im.abs()),
        _ => format!("{re}+{im} i"),
    }
}

/// `a_d x^d + ... + a_0` from low-to-high integer coefficients.
fn poly_text(c: &[num_bigint::BigInt]) -> String {
    let mut out = String::new();
    for (k, a) in c.iter().enumerate().rev() {
        if a.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        let neg = a.sign() == num_bigint::Sign::Minus;
        let m = a.magnitude().to_string();
        let sign = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        let coeff = if m == "1" && k > 0 { String::new() } else { m };
        let var = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        out.push_str(&format!("{sign}{coeff}{var}"));
    }
    out
}

fn enumerate(count: usize) -> Result<(), Failure> {
    if count == 0 {
        return Ok(());
    }
    let mut stream = AlphaStream::new();
    stream.extend_to(count.div_ceil(3))?;
    let width = Rational::pow2(-24);
    println!("{:>5}  {:<6}  {:<9}  {:<24}  box", "alpha", "kind", "modulus", "polynomial");
    for (k, a) in stream.emitted().iter().take(count).enumerate() {
        let (kind, bound) = if k == 0 {
            ("zero", String::new())
        } else {
            let step = (k - 1) / 3 + 1;
            (if (k - 1) % 3 == 2 { "real" } else { "pair" }, format!("< {step}"))
        };
        let bx = a.value.refine(&width).round_outward(24);
        let [re_lo, re_hi, im_lo, im_hi] = bx.bounds();
        let bx = if a.real {
            format!("[{re_lo}, {re_hi}]")
        } else {
            format!("[{re_lo}, {re_hi}] + [{im_lo}, {im_hi}] i")
        };
        println!("{:>5}  {kind:<6}  {bound:<9}  {:<24}  {bx}", k + 1, poly_text(&a.poly));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn complex_points() {
        let p = |s| parse_complex(s).ok().unwrap();
        assert_eq!(p("1/2"), (q("1/2"), q("0")));
        assert_eq!(p("1/2+1/3 i"), (q("1/2"), q("1/3")));
        assert_eq!(p("-1/2-1/3i"), (q("-1/2"), q("-1/3")));
        assert_eq!(p("-3/4 i"), (q("0"), q("-3/4")));
        assert_eq!(p("i"), (q("0"), q("1")));
        assert_eq!(p("2 - i"), (q("2"), q("-1")));
        assert!(parse_complex("1/2+x").is_err());
    }

    #[test]
    fn polynomial_text() {
        let p = |v: &[i64]| poly_text(&v.iter().map(|&x| x.into()).collect::<Vec<_>>());
        assert_eq!(p(&[0, 1]), "x");
        assert_eq!(p(&[1, -2, 2]), "2x^2 - 2x + 1");
        assert_eq!(p(&[-1, 0, -1]), "-x^2 - 1");
    }

    #[test]
    fn widths() {
        assert_eq!(parse_width("2^-3").ok().unwrap(), q("1/8"));
        assert_eq!(parse_width("1/1000").ok().unwrap(), q("1/1000"));
        assert!(parse_width("0").is_err());
        assert!(parse_width("-1").is_err());
    }
}
