//! `loopcoh` — loop-extension cohomology from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use clap::{Parser, Subcommand, ValueEnum};
use loopcoh::cochain::enumerate_normalized;
use loopcoh::cohomology::{cohomology, CohomologyReport, Method, DEFAULT_BRUTE_LIMIT};
use loopcoh::differential::{derive_differential, verify_delta_squared, Sweep};
use loopcoh::dsl;
use loopcoh::extension::{build_extension, classify, extract_factor_set};
use loopcoh::law::{self, LawKind};
use loopcoh::module::CyclicModule;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "loopcoh", version, about = "Cohomology of finite loop extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Linear,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Brute => Method::Brute,
            MethodArg::Linear => Method::Linear,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an identity and print its canonical IR as JSON.
    Parse {
        /// The identity, e.g. "(y*(x*(y*z))) = ((y*(x*y))*z)"
        text: String,
    },
    /// Print the derived differential of a one-nested law.
    Diff {
        /// Built-in law name or identity string
        #[arg(long)]
        law: String,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
    },
    /// Compute cocycles, coboundaries and H² for a law over Z/n acted on Z/m.
    Cohomology {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        /// Action generator, a unit of Z/m with t^n = 1
        #[arg(long, default_value = "1")]
        t: u64,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
    },
    /// Build one extension loop per cohomology class.
    Classify {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value = "1")]
        t: u64,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
    },
    /// Run the built-in verification suite at fixed sizes.
    Verify {
        /// Also sweep generated laws over a module grid checking δ²=0.
        #[arg(long)]
        grid: bool,
    },
}

fn brute_limit() -> u128 {
    std::env::var("LOOPCOH_BRUTE_LIMIT")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BRUTE_LIMIT)
}

fn usage_err(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn resolve_law(text: &str) -> Result<LawKind, ExitCode> {
    law::resolve(text).map_err(|e| usage_err(&e))
}

fn make_module(n: u64, m: u64, t: u64) -> Result<CyclicModule, ExitCode> {
    CyclicModule::new(n, m, t).map_err(|e| usage_err(&e.to_string()))
}

fn run_cohomology(
    law_text: &str,
    n: u64,
    m: u64,
    t: u64,
    method: MethodArg,
) -> Result<CohomologyReport, ExitCode> {
    let kind = resolve_law(law_text)?;
    let module = make_module(n, m, t)?;
    cohomology(&kind, &module, method.into(), brute_limit()).map_err(|e| usage_err(&e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Parse { text } => match dsl::parse(&text).map_err(|e| e.to_string()).and_then(
            |ast| dsl::lower(&ast).map_err(|e| e.to_string()),
        ) {
            Ok(lowering) => {
                if lowering.many_variables {
                    eprintln!(
                        "warning: law has more than three variables; \
                         classification statements are only established for v <= 3"
                    );
                }
                println!("{}", lowering.ir.to_canonical_json());
                ExitCode::from(EXIT_OK)
            }
            Err(e) => {
                let mut msg = e;
                if msg.contains("different words") {
                    msg.push_str(
                        "; laws that permute variables between sides are built in \
                         (try --law commutativity)",
                    );
                }
                usage_err(&msg)
            }
        },
        Command::Diff { law: law_text, output } => {
            let kind = match resolve_law(&law_text) {
                Ok(k) => k,
                Err(code) => return code,
            };
            let LawKind::OneNested(ir) = kind else {
                return usage_err("law has no defining identity in the one-nested grammar");
            };
            let spec = derive_differential(&ir);
            match output {
                OutputArg::Json => println!("{}", spec.to_json()),
                _ => println!("{}", spec.describe()),
            }
            ExitCode::from(EXIT_OK)
        }
        Command::Cohomology { law: law_text, n, m, t, method, output } => {
            let report = match run_cohomology(&law_text, n, m, t, method) {
                Ok(r) => r,
                Err(code) => return code,
            };
            match output {
                OutputArg::Json => println!("{}", report.to_json()),
                OutputArg::Csv => {
                    println!("{}", CohomologyReport::csv_header());
                    println!("{}", report.to_csv_row());
                }
                OutputArg::Text => {
                    println!("law:                     {}", report.law);
                    println!("module:                  n={} m={} t={}", report.n, report.m, report.t);
                    println!("cocycles:                {}", report.cocycles);
                    println!("coboundaries:            {}", report.coboundaries);
                    println!("coboundaries in kernel:  {}", report.coboundaries_in_kernel);
                    println!("h2:                      {}", report.h2);
                    println!("method:                  {}", report.method_used);
                }
            }
            ExitCode::from(EXIT_OK)
        }
        Command::Classify { law: law_text, n, m, t, method, output } => {
            let kind = match resolve_law(&law_text) {
                Ok(k) => k,
                Err(code) => return code,
            };
            let module = match make_module(n, m, t) {
                Ok(md) => md,
                Err(code) => return code,
            };
            let exts = match classify(&kind, &module, Method::from(method), brute_limit()) {
                Ok(e) => e,
                Err(e) => return usage_err(&e.to_string()),
            };
            match output {
                OutputArg::Json => {
                    let blocks: Vec<String> = exts
                        .iter()
                        .map(|e| e.to_provenance_json(&kind.name()))
                        .collect();
                    println!("[{}]", blocks.join(","));
                }
                _ => {
                    for (i, e) in exts.iter().enumerate() {
                        println!("# class {i}");
                        print!("{}", e.table.to_text());
                    }
                }
            }
            ExitCode::from(EXIT_OK)
        }
        Command::Verify { grid } => run_verify(grid),
    }
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, ok: bool) {
        println!("{}: {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

fn run_verify(grid: bool) -> ExitCode {
    let limit = brute_limit();
    let mut suite = Suite { failures: 0 };
    let md32 = CyclicModule::trivial(3, 2);
    let bol = LawKind::OneNested(law::bol_ir());

    let report = cohomology(&bol, &md32, Method::Auto, limit).expect("small sizes");
    suite.check(
        "Bol n=3 m=2: 4 cocycles, 4 coboundaries, h2=1",
        report.cocycles == 4 && report.coboundaries == 4 && report.h2 == 1,
    );
    let exts = classify(&bol, &md32, Method::Auto, limit).expect("small sizes");
    suite.check(
        "Bol n=3 m=2: one extension class, representative associative=true",
        exts.len() == 1 && exts[0].table.is_associative(),
    );

    let all_f = enumerate_normalized(&md32, 2, limit).expect("16 cochains");
    let bol_ir = law::bol_ir();
    let spec = derive_differential(&bol_ir);
    let iff_ok = all_f.iter().all(|f| {
        let is_cocycle = spec.apply(f).expect("arity 2").is_zero();
        let holds = build_extension(f)
            .expect("normalized f")
            .table
            .law_holds(&bol_ir)
            .holds();
        is_cocycle == holds
    });
    suite.check("Bol n=3 m=2: extension satisfies the law iff f is a cocycle", iff_ok);

    let round_ok = all_f.iter().all(|f| {
        let ext = build_extension(f).expect("normalized f");
        extract_factor_set(&ext.table, &md32, None).expect("projection") == *f
    });
    suite.check("n=3 m=2: extract(build(f)) = f for all 16 factor sets", round_ok);

    let comm = cohomology(&LawKind::Commutativity, &md32, Method::Auto, limit).expect("small");
    suite.check(
        "commutativity n=3 m=2: 8 cocycles, 4 coboundaries, h2=2",
        comm.cocycles == 8 && comm.coboundaries == 4 && comm.h2 == 2,
    );

    let inv = cohomology(&LawKind::InverseProperty, &md32, Method::Auto, limit).expect("small");
    suite.check("inverse property n=3 m=2: 8 residual-zero factor sets", inv.cocycles == 8);

    let corpus_ok = loopcoh::corpus::standard_corpus().iter().all(|l| {
        (0..l.order()).all(|x| {
            (0..l.order()).all(|y| {
                (0..l.order()).all(|a| {
                    (0..l.order()).all(|b| l.verify_commutation_formula(x, y, a, b))
                })
            })
        })
    });
    suite.check("commutation formula holds on the bundled corpus", corpus_ok);

    if grid {
        let mut checked = 0usize;
        let mut ok = true;
        let mut laws = vec![law::bol_ir(), law::bol_unrepeated_ir()];
        laws.extend(law::generated_laws(4, 3));
        for ir in &laws {
            let spec = derive_differential(ir);
            for n in 2..=4u64 {
                for m in 2..=4u64 {
                    for t in CyclicModule::valid_actions(n, m) {
                        let md = CyclicModule::new(n, m, t).expect("valid action");
                        if !verify_delta_squared(&spec, &md, Sweep::Exhaustive) {
                            ok = false;
                        }
                        checked += 1;
                    }
                }
            }
        }
        suite.check(&format!("grid: δ²=0 on {checked} (law, module) pairs"), ok);
    }

    if suite.failures == 0 {
        ExitCode::from(EXIT_OK)
    } else {
        eprintln!("{} check(s) failed", suite.failures);
        ExitCode::from(EXIT_VERIFY)
    }
}
