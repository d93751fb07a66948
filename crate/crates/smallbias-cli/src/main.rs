//! Command-line front end: construct small-bias sets, verify bias, report
//! derived parameters and randomness budgets, and brute-force character-sum
//! bounds.
//!
//! Exit status: 0 = success / property holds; 1 = verification or bound
//! check failed; 2 = invalid input or internal error.

use clap::{Parser, Subcommand, ValueEnum};
use smallbias::bias::{
    exact_max_bias, naive_random_set, sampled_max_bias, BiasReport, EXACT_MODE_MAX_N,
};
use smallbias::code::{
    construct_code_nisan, construct_code_uniform, derive_params, failure_bound, prg_regime_ok,
};
use smallbias::entropy::EntropySource;
use smallbias::legendre::{
    aghp_set, derive_shift_params, is_squarefree, next_prime, shifted_legendre_set, union_bound,
    weil_sum, PrimeField,
};
use smallbias::nisan::{ceil_log2, seed_length};
use smallbias::setfile::{read_set_file, write_set_file};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "smallbias",
    version,
    about = "Construct and verify small-bias subsets of F_2^n with exact randomness accounting"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// i.i.d. uniform elements (the randomness-cost baseline)
    Naive,
    /// Random linear code with uniform multipliers
    CodeUniform,
    /// Random linear code with generator-expanded multipliers
    CodeNisan,
    /// Quadratic-character window with random shifts
    LegendreShift,
    /// Deterministic quadratic-character construction (zero random bits)
    Aghp,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::CodeUniform => "code-uniform",
            Method::CodeNisan => "code-nisan",
            Method::LegendreShift => "legendre-shift",
            Method::Aghp => "aghp",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Enumerate all 2^n - 1 parities (requires n <= 28)
    Exact,
    /// Check a random sample of parities (lower bound on the max bias)
    Sampled,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a set and write it to a file
    Construct {
        #[arg(long, value_enum)]
        method: Method,
        /// Dimension of the ambient space F_2^n
        #[arg(long)]
        n: usize,
        /// Target bias epsilon in (0,1)
        #[arg(long)]
        eps: f64,
        /// Failure probability delta in (0,1] (legendre-shift only)
        #[arg(long)]
        delta: Option<f64>,
        /// Hex seed for the entropy source (even digit count; may be empty)
        #[arg(long, default_value = "")]
        seed: String,
        /// Expansion constant A > 2 ln 2 for the code methods
        #[arg(long = "A", default_value_t = 2.0)]
        a_const: f64,
        /// Generator block size b >= n for code-nisan (default: n)
        #[arg(long)]
        b: Option<usize>,
        /// Element count for the naive method (default: ceil(4n/eps^2))
        #[arg(long)]
        size: Option<usize>,
        /// Output path for the set file
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the bias of a set file against a threshold
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Bias threshold for the exit status
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Number of random parities in sampled mode
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Hex seed for sampled-mode parity selection
        #[arg(long, default_value = "")]
        seed: String,
    },
    /// Report derived parameters and predicted randomness without constructing
    Params {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "A", default_value_t = 2.0)]
        a_const: f64,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Brute-force an averaged character sum and check it against (d-1)/sqrt(q)
    Weil {
        /// Prime modulus (q <= 10^7)
        #[arg(long)]
        q: u64,
        /// Polynomial coefficients c0,c1,... (c_i multiplies x^i)
        #[arg(long)]
        coeffs: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> smallbias::Result<ExitCode> {
    match cmd {
        Cmd::Construct {
            method,
            n,
            eps,
            delta,
            seed,
            a_const,
            b,
            size,
            out,
        } => cmd_construct(method, n, eps, delta, &seed, a_const, b, size, &out),
        Cmd::Verify {
            input,
            eps,
            mode,
            samples,
            seed,
        } => cmd_verify(&input, eps, mode, samples, &seed),
        Cmd::Params {
            method,
            n,
            eps,
            delta,
            a_const,
            b,
            size,
        } => cmd_params(method, n, eps, delta, a_const, b, size),
        Cmd::Weil { q, coeffs } => cmd_weil(q, &coeffs),
    }
}

fn invalid(msg: impl Into<String>) -> smallbias::Error {
    smallbias::Error::InvalidParameter(msg.into())
}

fn require_eps(eps: f64) -> smallbias::Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("--eps must lie in (0,1), got {eps}")))
    }
}

/// Default element count for the naive baseline.
fn naive_default_size(n: usize, eps: f64) -> usize {
    (4.0 * n as f64 / (eps * eps)).ceil() as usize
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    method: Method,
    n: usize,
    eps: f64,
    delta: Option<f64>,
    seed: &str,
    a_const: f64,
    b: Option<usize>,
    size: Option<usize>,
    out: &Path,
) -> smallbias::Result<ExitCode> {
    require_eps(eps)?;
    let mut src = EntropySource::from_seed_hex(seed)?;
    let set = match method {
        Method::Naive => {
            let size = size.unwrap_or_else(|| naive_default_size(n, eps));
            naive_random_set(n, size, eps, &mut src)?
        }
        Method::CodeUniform => construct_code_uniform(n, eps, a_const, &mut src)?,
        Method::CodeNisan => {
            let b = b.unwrap_or(n);
            let params = derive_params(n, eps, a_const)?;
            if !prg_regime_ok(n, params.t) {
                eprintln!(
                    "note: block count t = {} exceeds the analyzed regime t <= 2^(n/20) at n = {n}; \
                     the construction still runs, the seed-length guarantee being asymptotic",
                    params.t
                );
            }
            construct_code_nisan(n, eps, a_const, b, &mut src)?
        }
        Method::LegendreShift => {
            let delta = delta
                .ok_or_else(|| invalid("--delta is required for --method legendre-shift"))?;
            let params = derive_shift_params(n, eps, delta, &mut src)?;
            shifted_legendre_set(&params)?
        }
        Method::Aghp => aghp_set(n, eps)?,
    };
    write_set_file(out, &set)?;
    println!("method = {}", set.method);
    println!("|S| = {}", set.size());
    println!("random_bits = {}", set.random_bits);
    println!("wrote {}", out.display());
    if n > EXACT_MODE_MAX_N {
        eprintln!(
            "note: n = {n} exceeds the exact-verification cutoff {EXACT_MODE_MAX_N}; \
             verify must use --mode sampled"
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    input: &Path,
    eps: f64,
    mode: Mode,
    samples: u64,
    seed: &str,
) -> smallbias::Result<ExitCode> {
    require_eps(eps)?;
    let set = read_set_file(input)?;
    println!(
        "file = {}, n = {}, method = {}, |S| = {}, random_bits = {}",
        input.display(),
        set.n(),
        set.method,
        set.size(),
        set.random_bits
    );
    let report: BiasReport = match mode {
        Mode::Exact => exact_max_bias(&set)?,
        Mode::Sampled => {
            let mut src = EntropySource::from_seed_hex(seed)?;
            sampled_max_bias(&set, samples, &mut src)?
        }
    };
    match mode {
        Mode::Exact => {
            println!("mode = exact");
            println!("max bias = {:.10}", report.max_bias);
            if let Some(w) = &report.witness {
                println!("witness T = {w}");
            }
            if let Some(table) = &report.per_weight_max {
                println!("per-weight max |bias|:");
                for (i, v) in table.iter().enumerate() {
                    println!("  weight {:>2}: {:.10}", i + 1, v);
                }
            }
        }
        Mode::Sampled => {
            println!("mode = sampled, samples = {samples}");
            println!("max bias (lower bound) = {:.10}", report.max_bias);
            if let Some(w) = &report.witness {
                println!("witness T = {w}");
            }
        }
    }
    if report.max_bias <= eps {
        println!("RESULT: PASS (max bias <= {eps})");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("RESULT: FAIL (max bias > {eps})");
        Ok(ExitCode::from(1))
    }
}

/// Predicted random-bit cost rows for every method at shared parameters.
fn bits_comparison(
    n: usize,
    eps: f64,
    delta: Option<f64>,
    a_const: f64,
    b: Option<usize>,
    size: Option<usize>,
) -> Vec<(&'static str, Option<u64>, &'static str)> {
    let mut rows = Vec::new();
    let naive_bits = (n * size.unwrap_or_else(|| naive_default_size(n, eps))) as u64;
    rows.push(("naive", Some(naive_bits), "O(n^2/eps^2)"));
    let code = derive_params(n, eps, a_const).ok();
    rows.push((
        "code-uniform",
        code.as_ref().map(|p| p.m as u64),
        "O(n/eps^2)",
    ));
    rows.push((
        "code-nisan",
        code.as_ref().map(|p| seed_length(b.unwrap_or(n), p.t)),
        "O(n log 1/eps)",
    ));
    let shift_bits = delta.and_then(|d| {
        let ell = (6.0 * n as f64 / (d * eps * eps)).ceil();
        let q_target = (4.0 * (std::f64::consts::E * ell).powi(2)).ceil() as u64;
        next_prime(q_target.max(3)).ok().map(|f| {
            let klog = 64 - (f.order() - 1).leading_zeros() as u64;
            n as u64 * klog
        })
    });
    rows.push(("legendre-shift", shift_bits, "O(n log(n/eps))"));
    rows.push(("aghp", Some(0), "deterministic"));
    rows
}

fn cmd_params(
    method: Method,
    n: usize,
    eps: f64,
    delta: Option<f64>,
    a_const: f64,
    b: Option<usize>,
    size: Option<usize>,
) -> smallbias::Result<ExitCode> {
    require_eps(eps)?;
    println!("method = {}", method.name());
    println!("n = {n}, eps = {eps}");
    match method {
        Method::Naive => {
            let size = size.unwrap_or_else(|| naive_default_size(n, eps));
            println!("size |S| = {size} (default ceil(4n/eps^2))");
            println!("predicted random_bits = {}", n * size);
        }
        Method::CodeUniform => {
            let p = derive_params(n, eps, a_const)?;
            println!(
                "derived: A = {}, m = {}, t = {}, threshold = {}",
                p.a_const, p.m, p.t, p.threshold
            );
            println!("|S| = {}", n + p.m);
            println!("predicted random_bits = {}", p.m);
            println!(
                "failure probability bound = {:.10}",
                failure_bound(n, p.m, eps)
            );
        }
        Method::CodeNisan => {
            let p = derive_params(n, eps, a_const)?;
            let b = b.unwrap_or(n);
            if b < n {
                return Err(invalid(format!("--b = {b} must be at least n = {n}")));
            }
            let k = ceil_log2(p.t);
            println!(
                "derived: A = {}, m = {}, t = {}, threshold = {}, b = {}, k = {}",
                p.a_const, p.m, p.t, p.threshold, b, k
            );
            println!("|S| = {}", n + p.m);
            println!(
                "predicted random_bits = {} (seed b(2k+1); uniform multipliers would need {})",
                seed_length(b, p.t),
                p.m
            );
            if !prg_regime_ok(n, p.t) {
                eprintln!(
                    "note: block count t = {} exceeds the analyzed regime t <= 2^(n/20) at n = {n}",
                    p.t
                );
            }
        }
        Method::LegendreShift => {
            let delta = delta
                .ok_or_else(|| invalid("--delta is required for --method legendre-shift"))?;
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(invalid(format!("--delta must lie in (0,1], got {delta}")));
            }
            let ell = (6.0 * n as f64 / (delta * eps * eps)).ceil() as usize;
            let q_target = (4.0 * (std::f64::consts::E * ell as f64).powi(2)).ceil() as u64;
            let field = next_prime(q_target.max(3))?;
            let q = field.order();
            let klog = 64 - (q - 1).leading_zeros();
            println!("derived: delta = {delta}, ell = {ell}, q = {q} (ceil(log2 q) = {klog})");
            println!("|S| = {ell}");
            println!(
                "predicted random_bits = {} (n draws of ceil(log2 q) bits, pre-rejection)",
                n as u64 * klog as u64
            );
            match union_bound(n, ell, eps, delta) {
                Ok(ub) => println!(
                    "union-bound series = {:.10} (ratio {:.6}, closed form {:.10})",
                    ub.series, ub.ratio, ub.closed_form
                ),
                Err(e) => println!("union-bound series diverges: {e}"),
            }
        }
        Method::Aghp => {
            let target = ((n * n) as f64 / (eps * eps)).ceil() as u64;
            let q = next_prime(target.max(3))?.order();
            println!("derived: q = {q}");
            println!("|S| = {q}");
            println!("predicted random_bits = 0");
            let qf = q as f64;
            println!(
                "bias bound n/sqrt(q) + n/q = {:.10}",
                n as f64 / qf.sqrt() + n as f64 / qf
            );
        }
    }
    println!();
    println!("predicted random bits by method at these parameters:");
    for (name, bits, asymptotic) in bits_comparison(n, eps, delta, a_const, b, size) {
        match bits {
            Some(v) => println!("  {name:<15} {v:>12}   {asymptotic}"),
            None => println!("  {name:<15} {:>12}   {asymptotic}", "(needs --delta)"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_weil(q: u64, coeffs: &str) -> smallbias::Result<ExitCode> {
    let field = PrimeField::new(q)?;
    let coeffs: Vec<u64> = coeffs
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| invalid(format!("bad coefficient {c:?}")))
        })
        .collect::<smallbias::Result<_>>()?;
    // Degree after reduction mod q, matching what the sum actually uses.
    let degree = coeffs
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &c)| c % q != 0)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let sum = weil_sum(&coeffs, &field)?;
    let bound = (degree as f64 - 1.0) / (q as f64).sqrt();
    let squarefree = is_squarefree(&coeffs, &field);
    println!("q = {q}, degree = {degree}");
    println!("|avg character sum| = {sum:.10}");
    println!("bound (d-1)/sqrt(q) = {bound:.10}");
    println!("squarefree: {}", if squarefree { "yes" } else { "no" });
    if sum <= bound {
        println!("bound check: PASS");
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "bound check: FAIL{}",
            if squarefree {
                ""
            } else {
                " (polynomial is not squarefree; the bound need not apply)"
            }
        );
        Ok(ExitCode::from(1))
    }
}
