//! Command-line front end: loads `.alg` files, dispatches the spectrum,
//! term-search, free-algebra, congruence, identity-check, product and
//! verify computations, and emits reports on stdout (diagnostics go to
//! stderr).
//!
//! Exit codes: 0 success/pass, 1 property failed (with counterexample),
//! 2 input error, 3 cap or budget exceeded.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cdspec::conditions::spectrum::{AlphaKind, RelBudget};
use cdspec::conditions::{
    check_identity_generic, day_function, find_terms, jonsson_level, relational_level,
    tschantz_function, DistVariant, InclusionScheme, TermScheme,
};
use cdspec::verify::{
    reports_to_json, summary_table, verify_all, verify_corollary_ell, verify_corollary_th3d,
    verify_lemma_gt_and_jgt, verify_prop_kk, verify_prop_nip, verify_theorem_4gt, Status,
    TheoremReport, VerifyConfig,
};
use cdspec::{
    all_congruences, direct_product, nonindexed_product, parse_algebra, serialize_algebra,
    Error, FiniteAlgebra, FreeAlgebra, FreeCap, Provenance,
};

#[derive(Parser)]
#[command(name = "cdspec", version, about = "Congruence distributivity spectra of finitely generated varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumKind {
    J,
    Jconv,
    Jr,
    Jrconv,
    Day,
    Tschantz,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeKind {
    Jonsson,
    Directed,
    Gumm,
    Pj,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Direct,
    Nonindexed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alpha {
    Congruence,
    Tolerance,
}

#[derive(Args)]
struct CapArgs {
    /// Cap on free-algebra elements
    #[arg(long, default_value_t = FreeCap::default().max_elements)]
    max_elements: usize,
    /// Cap on tuple width (assignment positions)
    #[arg(long, default_value_t = FreeCap::default().max_width)]
    max_width: usize,
    /// Cap on closure operation applications
    #[arg(long, default_value_t = FreeCap::default().max_applications)]
    max_applications: u64,
}

impl CapArgs {
    fn cap(&self) -> FreeCap {
        FreeCap {
            max_elements: self.max_elements,
            max_width: self.max_width,
            max_applications: self.max_applications,
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Relation enumeration: closures of at most this many pairs
    #[arg(long, default_value_t = RelBudget::default().max_pairs)]
    budget: usize,
    /// Exhaustive relation enumeration for universes up to this size
    #[arg(long, default_value_t = RelBudget::default().exhaustive_max_n)]
    exhaustive_max_n: usize,
    /// Congruence enumeration cap
    #[arg(long, default_value_t = RelBudget::default().con_cap)]
    con_cap: usize,
}

impl BudgetArgs {
    fn budget(&self) -> RelBudget {
        RelBudget {
            max_pairs: self.budget,
            exhaustive_max_n: self.exhaustive_max_n,
            con_cap: self.con_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a spectrum value: J, Jconv, Jr, Jrconv, Day (D), Tschantz (T)
    Spectrum {
        #[arg(long, value_enum)]
        variant: SpectrumKind,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = Alpha::Congruence)]
        alpha_kind: Alpha,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        budgets: BudgetArgs,
        files: Vec<String>,
    },
    /// Search a minimal term chain: jonsson, directed, gumm, pj
    Terms {
        #[arg(long, value_enum)]
        scheme: SchemeKind,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        caps: CapArgs,
        files: Vec<String>,
    },
    /// Build the free algebra on n generators and report its size
    FreeAlgebra {
        #[arg(long)]
        n: usize,
        /// Dump per-element provenance (index, op, children)
        #[arg(long)]
        provenance: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        caps: CapArgs,
        files: Vec<String>,
    },
    /// List all congruences of one algebra
    Congruences {
        #[arg(long, default_value_t = 64)]
        con_cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        file: String,
    },
    /// Decide a congruence inclusion written in the identity syntax
    Check {
        #[arg(long)]
        identity: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        caps: CapArgs,
        files: Vec<String>,
    },
    /// Direct or non-indexed product of two algebras (prints .alg)
    Product {
        #[arg(long, value_enum)]
        kind: ProductKind,
        file_a: String,
        file_b: String,
    },
    /// Run the theorem battery (id or `all`) over the given algebras
    Verify {
        theorem: String,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        budgets: BudgetArgs,
        files: Vec<String>,
    },
}

fn load(files: &[String]) -> Result<Vec<FiniteAlgebra>, Error> {
    if files.is_empty() {
        return Err(Error::Eval("at least one algebra file is required".into()));
    }
    files
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(f)
                .map_err(|e| Error::Eval(format!("cannot read `{f}`: {e}")))?;
            parse_algebra(&text)
        })
        .collect()
}

fn exit_for(e: &Error) -> ExitCode {
    if e.is_cap() {
        ExitCode::from(3)
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Spectrum { variant, m, k_max, alpha_kind, format, caps, budgets, files } => {
            let algebras = load(&files)?;
            let cap = caps.cap();
            let budget = budgets.budget();
            let result = match variant {
                SpectrumKind::J => jonsson_level(&algebras, m, k_max, DistVariant::Standard, &cap)?,
                SpectrumKind::Jconv => {
                    jonsson_level(&algebras, m, k_max, DistVariant::Converse, &cap)?
                }
                SpectrumKind::Day => day_function(&algebras, if m < 2 { 3 } else { m }, k_max, &cap)?,
                SpectrumKind::Tschantz => tschantz_function(&algebras, m.max(2), k_max, &cap)?,
                SpectrumKind::Jr | SpectrumKind::Jrconv => {
                    if algebras.len() != 1 {
                        return Err(Error::Eval(
                            "relational variants take exactly one algebra".into(),
                        ));
                    }
                    let kind = match alpha_kind {
                        Alpha::Congruence => AlphaKind::Congruence,
                        Alpha::Tolerance => AlphaKind::Tolerance,
                    };
                    relational_level(
                        &algebras[0],
                        m,
                        k_max,
                        matches!(variant, SpectrumKind::Jrconv),
                        kind,
                        &budget,
                    )?
                }
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string(&result).unwrap()),
                Format::Text => println!(
                    "{:?}({m}) = {} on {}",
                    result.variant,
                    result.value,
                    result.algebras.join(", ")
                ),
            }
            Ok(if result.value.is_exceeded() { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::Terms { scheme, max_len, format, caps, files } => {
            let algebras = load(&files)?;
            let scheme = match scheme {
                SchemeKind::Jonsson => TermScheme::Jonsson,
                SchemeKind::Directed => TermScheme::DirectedJonsson,
                SchemeKind::Gumm => TermScheme::Gumm,
                SchemeKind::Pj => TermScheme::PJ,
            };
            let chain = find_terms(&algebras, scheme, max_len, &caps.cap())?;
            match format {
                Format::Json => println!("{}", serde_json::to_string(&chain).unwrap()),
                Format::Text => match &chain.rendered {
                    Some(ts) => println!("{}", ts.join("\n")),
                    None => println!("no chain within {max_len} terms"),
                },
            }
            Ok(if chain.rendered.is_some() { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
        Command::FreeAlgebra { n, provenance, format, caps, files } => {
            let algebras = load(&files)?;
            let free = FreeAlgebra::build(&algebras, n, &caps.cap())?;
            match format {
                Format::Json => {
                    let mut doc = json!({
                        "generators": n,
                        "bases": algebras.iter().map(|a| a.name()).collect::<Vec<_>>(),
                        "elements": free.len(),
                    });
                    if provenance {
                        doc["provenance"] = provenance_json(&free);
                    }
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    println!("F({n}) has {} elements", free.len());
                    if provenance {
                        for (i, p) in free.provenance().iter().enumerate() {
                            match p {
                                Provenance::Seed(g) => println!("{i}: generator {g}"),
                                Provenance::Derived { op, args } => println!(
                                    "{i}: {} {:?}",
                                    algebras[0].signature().symbol(*op),
                                    args
                                ),
                            }
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Congruences { con_cap, format, file } => {
            let algebras = load(std::slice::from_ref(&file))?;
            let cons = all_congruences(&algebras[0], con_cap)?;
            match format {
                Format::Json => {
                    let doc = json!({
                        "algebra": algebras[0].name(),
                        "count": cons.len(),
                        "congruences": cons.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => {
                    for c in &cons {
                        println!("{c}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { identity, format, caps, files } => {
            let algebras = load(&files)?;
            let scheme = InclusionScheme::parse(&identity)?;
            let check = check_identity_generic(&algebras, &scheme, &caps.cap())?;
            match format {
                Format::Json => {
                    let doc = json!({
                        "identity": scheme.to_string(),
                        "algebras": algebras.iter().map(|a| a.name()).collect::<Vec<_>>(),
                        "holds": check.holds,
                        "free_generators": check.generators,
                        "free_elements": check.free_elements,
                        "chain": check.chain,
                    });
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
                Format::Text => println!(
                    "{} {} in HSP({})",
                    scheme,
                    if check.holds { "holds" } else { "fails" },
                    algebras.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
                ),
            }
            Ok(if check.holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Product { kind, file_a, file_b } => {
            let a = load(std::slice::from_ref(&file_a))?;
            let b = load(std::slice::from_ref(&file_b))?;
            let p = match kind {
                ProductKind::Direct => direct_product(&a[0], &b[0])?,
                ProductKind::Nonindexed => nonindexed_product(&a[0], &b[0])?,
            };
            print!("{}", serialize_algebra(&p));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { theorem, k_max, caps, budgets, files } => {
            let algebras = load(&files)?;
            let config = VerifyConfig { cap: caps.cap(), budget: budgets.budget(), k_max };
            let reports = run_verify(&theorem, &algebras, &config)?;
            println!("{}", reports_to_json(&reports));
            eprint!("{}", summary_table(&reports));
            let worst = reports.iter().map(|r| r.status).fold(Status::Pass, |acc, s| {
                match (acc, s) {
                    (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
                    (Status::BudgetExceeded, _) | (_, Status::BudgetExceeded) => {
                        Status::BudgetExceeded
                    }
                    _ => Status::Pass,
                }
            });
            Ok(match worst {
                Status::Fail => ExitCode::from(1),
                Status::BudgetExceeded => ExitCode::from(3),
                _ => ExitCode::SUCCESS,
            })
        }
    }
}

fn provenance_json(free: &FreeAlgebra) -> serde_json::Value {
    let sig = free.bases()[0].signature().clone();
    json!(free
        .provenance()
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            Provenance::Seed(g) => json!({"element": i, "generator": g}),
            Provenance::Derived { op, args } => {
                json!({"element": i, "op": sig.symbol(*op), "children": args})
            }
        })
        .collect::<Vec<_>>())
}

fn run_verify(
    theorem: &str,
    algebras: &[FiniteAlgebra],
    config: &VerifyConfig,
) -> Result<Vec<TheoremReport>, Error> {
    let cap = &config.cap;
    let budget = &config.budget;
    match theorem {
        "all" => verify_all(algebras, config),
        "corollary-ell" => {
            let mut out = Vec::new();
            for a in algebras {
                for (m, ell) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    out.push(verify_corollary_ell(
                        std::slice::from_ref(a),
                        m,
                        ell,
                        config.k_max,
                        cap,
                    )?);
                }
            }
            Ok(out)
        }
        "theorem-4gt" => algebras
            .iter()
            .map(|a| verify_theorem_4gt(std::slice::from_ref(a), 4, budget, cap))
            .collect(),
        "corollary-th3d" => algebras
            .iter()
            .map(|a| verify_corollary_th3d(std::slice::from_ref(a), 3, budget, cap))
            .collect(),
        "lemma-gt-theorem-jgt" => algebras
            .iter()
            .map(|a| verify_lemma_gt_and_jgt(std::slice::from_ref(a), config.k_max, budget, cap))
            .collect(),
        "proposition-kk" => {
            let mut out = Vec::new();
            for a in algebras {
                let directed = find_terms(
                    std::slice::from_ref(a),
                    TermScheme::DirectedJonsson,
                    config.k_max + 2,
                    cap,
                )?;
                if let Some(chain) = &directed.chain {
                    for ell in [1usize, 2] {
                        for kind in [AlphaKind::Congruence, AlphaKind::Tolerance] {
                            out.push(verify_prop_kk(a, chain, ell, kind, budget)?);
                        }
                    }
                }
            }
            Ok(out)
        }
        "proposition-nip" => {
            let mut out = Vec::new();
            for i in 0..algebras.len() {
                for j in i + 1..algebras.len() {
                    if algebras[i].signature().is_disjoint(algebras[j].signature()) {
                        out.push(verify_prop_nip(
                            &algebras[i],
                            &algebras[j],
                            &[1],
                            config.k_max,
                            cap,
                        )?);
                    }
                }
            }
            Ok(out)
        }
        other => Err(cdspec::verify::unknown_theorem(other)),
    }
}
