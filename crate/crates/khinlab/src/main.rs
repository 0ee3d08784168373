use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use khinlab::io::{self, Json, RunManifest};
use khinlab::{
    breakpoint, equivalence_report_with, haagerup_constant, l2_of_tensor,
    mixed_littlewood_constant, multiple_khintchine_constant, verify_mixed_littlewood_with,
    witness_sweep_with, CoefficientTensor, EnumConfig, Error, Exponent, InequalityReport,
    MixedTheorem, MultilinearForm, Result, WitnessKind, WitnessReport,
};

#[derive(Parser)]
#[command(
    name = "khinlab",
    version,
    about = "Sharp Khintchine and mixed Littlewood constants, verified by exact sign enumeration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory to write result files and a run manifest into.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Stdout format; csv applies to the witness sweep only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for randomly generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for enumerations (0 = auto); falls back to the
    /// KHINLAB_THREADS environment variable.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Sign-bit ceiling for the enumeration engines.
    #[arg(long, global = true, default_value_t = khinlab::DEFAULT_BIT_BUDGET,
          value_parser = clap::value_parser!(u32).range(1..=62))]
    bit_budget: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Block,
    Uniform,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichArg {
    C,
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Inequality,
    Equivalence,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the sharp constant family at an exponent.
    Constants {
        /// Exponent p: a positive real or "inf".
        #[arg(long)]
        p: String,
        /// Degree M of the mixed Littlewood constant C_(M),p (needs p >= 2);
        /// when given it is also the order m used for K_{m,r}.
        #[arg(long = "M", value_name = "M")]
        degree: Option<u32>,
        /// Moment exponent r; adds the multiple Khintchine constant K_{m,r}.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Exact Rademacher moment of a coefficient tensor file.
    Moment {
        /// Tensor file: {"shape":[N1,...,Nm],"entries":[...]} row-major.
        #[arg(long)]
        tensor: PathBuf,
        /// Moment exponent r > 0.
        #[arg(long)]
        r: f64,
    },
    /// Lower-bound sweep over witness sizes.
    Witness {
        /// Tensor order m.
        #[arg(long)]
        m: u32,
        /// Moment exponent, 0 < r < 2.
        #[arg(long)]
        r: f64,
        /// Comma-separated sizes, e.g. --N 2,4,8.
        #[arg(long = "N", value_name = "N,...", value_delimiter = ',', num_args = 0..)]
        sizes: Vec<usize>,
        /// Witness family.
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Check a mixed Littlewood inequality, or an equivalence construction.
    Verify {
        /// Coefficient tensor file: the form for mode inequality, the
        /// witness array y for mode equivalence.
        #[arg(long, conflicts_with = "random")]
        form: Option<PathBuf>,
        /// Generate a random coefficient tensor of shape N^M instead.
        #[arg(long, value_name = "M,N")]
        random: Option<String>,
        /// Exponent p: "inf" or a real (>= 2 for inequality, in [1,2] for
        /// equivalence).
        #[arg(long)]
        p: String,
        /// Which nesting to check: c (outer-first) or d (inner-first).
        #[arg(long, value_enum, default_value_t = WhichArg::C)]
        which: WhichArg,
        /// inequality: upper bound on the mixed sum. equivalence: moment
        /// against form norm for the induced construction.
        #[arg(long, value_enum, default_value_t = ModeArg::Inequality)]
        mode: ModeArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn resolve_threads(cli: &Cli) -> Result<usize> {
    if let Some(t) = cli.threads {
        return Ok(t);
    }
    match std::env::var("KHINLAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("KHINLAB_THREADS must be an integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn exponent_json(p: Exponent) -> Json {
    match p {
        Exponent::Infinity => Json::Str("inf".into()),
        Exponent::Finite(v) => Json::Float(v),
    }
}

struct Emitted {
    /// (file name, content) pairs for --out.
    files: Vec<(String, String)>,
    stdout: String,
    exit: u8,
    parameters: Vec<(String, String)>,
}

fn run(cli: &Cli) -> Result<u8> {
    let started = Instant::now();
    let cfg = EnumConfig {
        bit_budget: cli.bit_budget,
        threads: resolve_threads(cli)?,
    };
    if cli.format == Format::Csv && !matches!(cli.command, Command::Witness { .. }) {
        return Err(Error::Domain(
            "csv format applies to the witness command only".into(),
        ));
    }
    let emitted = match &cli.command {
        Command::Constants { p, degree, r } => cmd_constants(p, *degree, *r)?,
        Command::Moment { tensor, r } => cmd_moment(tensor, *r, &cfg)?,
        Command::Witness { m, r, sizes, kind } => {
            cmd_witness(*m, *r, sizes, *kind, &cfg, cli.format)?
        }
        Command::Verify {
            form,
            random,
            p,
            which,
            mode,
        } => cmd_verify(form.as_deref(), random.as_deref(), p, *which, *mode, cli.seed, &cfg)?,
    };
    print!("{}", emitted.stdout);
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
        let mut outputs: Vec<String> = emitted.files.iter().map(|(n, _)| n.clone()).collect();
        outputs.push("manifest.json".into());
        for (name, content) in &emitted.files {
            std::fs::write(dir.join(name), content)?;
        }
        let manifest = RunManifest {
            command: command_name(&cli.command).into(),
            parameters: emitted.parameters.clone(),
            bit_budget: cli.bit_budget,
            outputs,
            wall_time_ms: started.elapsed().as_millis() as u64,
        };
        std::fs::write(dir.join("manifest.json"), manifest.to_json().render() + "\n")?;
    }
    Ok(emitted.exit)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Constants { .. } => "constants",
        Command::Moment { .. } => "moment",
        Command::Witness { .. } => "witness",
        Command::Verify { .. } => "verify",
    }
}

fn cmd_constants(p_text: &str, degree: Option<u32>, r: Option<f64>) -> Result<Emitted> {
    let p = Exponent::parse(p_text)?;
    let bp = breakpoint();
    let a = haagerup_constant(p)?;
    let mut doc = vec![
        ("command".to_string(), Json::Str("constants".into())),
        ("p".to_string(), exponent_json(p)),
        ("p0".to_string(), Json::Float(bp.p0)),
        ("p0_residual".to_string(), Json::Float(bp.residual)),
        (
            "A".to_string(),
            Json::Object(vec![
                ("value".into(), Json::Float(a.value)),
                ("branch".into(), Json::Str(a.branch.as_str().into())),
            ]),
        ),
    ];
    let mut parameters = vec![("p".to_string(), p_text.to_string())];
    if let Some(r) = r {
        let m = degree.unwrap_or(1);
        let k = multiple_khintchine_constant(m, r)?;
        doc.push((
            "K".to_string(),
            Json::Object(vec![
                ("m".into(), Json::UInt(m as u64)),
                ("r".into(), Json::Float(r)),
                ("value".into(), Json::Float(k)),
            ]),
        ));
        parameters.push(("r".to_string(), format!("{r}")));
    }
    if let Some(m_linear) = degree {
        let c = mixed_littlewood_constant(m_linear, p)?;
        doc.push((
            "C".to_string(),
            Json::Object(vec![
                ("M".into(), Json::UInt(m_linear as u64)),
                ("value".into(), Json::Float(c)),
            ]),
        ));
        parameters.push(("M".to_string(), format!("{m_linear}")));
    }
    let text = Json::Object(doc).render() + "\n";
    Ok(Emitted {
        files: vec![("constants.json".into(), text.clone())],
        stdout: text,
        exit: 0,
        parameters,
    })
}

fn cmd_moment(path: &Path, r: f64, cfg: &EnumConfig) -> Result<Emitted> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let tensor = io::parse_tensor(&text)?;
    let result = khinlab::exact_moment_with(&tensor, r, cfg)?;
    let doc = Json::Object(vec![
        ("command".into(), Json::Str("moment".into())),
        ("input".into(), Json::Str(path.display().to_string())),
        ("input_sha256".into(), Json::Str(io::sha256_hex(&bytes))),
        (
            "shape".into(),
            Json::Array(tensor.shape().iter().map(|&n| Json::UInt(n as u64)).collect()),
        ),
        ("r".into(), Json::Float(result.r)),
        ("value".into(), Json::Float(result.value)),
        ("l2".into(), Json::Float(l2_of_tensor(&tensor))),
        (
            "configurations_enumerated".into(),
            Json::UInt(result.configurations_enumerated),
        ),
        ("method".into(), Json::Str(result.method.as_str().into())),
    ]);
    let text = doc.render() + "\n";
    Ok(Emitted {
        files: vec![("moment.json".into(), text.clone())],
        stdout: text,
        exit: 0,
        parameters: vec![
            ("tensor".into(), path.display().to_string()),
            ("r".into(), format!("{r}")),
        ],
    })
}

fn witness_report_json(rep: &WitnessReport) -> Json {
    Json::Object(vec![
        ("N".into(), Json::UInt(rep.n as u64)),
        ("l2".into(), Json::Float(rep.l2)),
        ("moment".into(), Json::Float(rep.moment)),
        ("ratio".into(), Json::Float(rep.ratio)),
        ("bound".into(), Json::Float(rep.theoretical_bound)),
    ])
}

fn cmd_witness(
    m: u32,
    r: f64,
    sizes: &[usize],
    kind: KindArg,
    cfg: &EnumConfig,
    format: Format,
) -> Result<Emitted> {
    let family = match kind {
        KindArg::Block => WitnessKind::BlockOnes,
        KindArg::Uniform => WitnessKind::Uniform,
    };
    let reports = witness_sweep_with(m, r, sizes, family, cfg)?;
    let doc = Json::Object(vec![
        ("command".into(), Json::Str("witness".into())),
        ("m".into(), Json::UInt(m as u64)),
        ("r".into(), Json::Float(r)),
        ("kind".into(), Json::Str(family.as_str().into())),
        (
            "reports".into(),
            Json::Array(reports.iter().map(witness_report_json).collect()),
        ),
    ]);
    let json_text = doc.render() + "\n";
    let csv_text = io::witness_csv(&reports)?;
    let stdout = match format {
        Format::Json => json_text.clone(),
        Format::Csv => csv_text.clone(),
    };
    Ok(Emitted {
        files: vec![
            ("witness.json".into(), json_text),
            ("witness.csv".into(), csv_text),
        ],
        stdout,
        exit: 0,
        parameters: vec![
            ("m".into(), format!("{m}")),
            ("r".into(), format!("{r}")),
            (
                "N".into(),
                sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
            ),
            (
                "kind".into(),
                match kind {
                    KindArg::Block => "block".into(),
                    KindArg::Uniform => "uniform".into(),
                },
            ),
        ],
    })
}

fn random_tensor(spec: &str, seed: u64) -> Result<CoefficientTensor> {
    let (m_text, n_text) = spec
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("--random expects M,N, got {spec:?}")))?;
    let m: u32 = m_text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("--random order must be an integer, got {m_text:?}")))?;
    let n: usize = n_text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("--random size must be an integer, got {n_text:?}")))?;
    if m == 0 || n == 0 {
        return Err(Error::Domain("--random needs M >= 1 and N >= 1".into()));
    }
    let len = (n as u64).checked_pow(m).filter(|&l| l <= 1 << 26).ok_or_else(|| {
        Error::Domain(format!("random tensor of shape {n}^{m} is too large"))
    })? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<f64> = (0..len)
        .map(|_| {
            let u = rng.next_u64() >> 11;
            2.0 * (u as f64) / (1u64 << 53) as f64 - 1.0
        })
        .collect();
    CoefficientTensor::new(vec![n; m as usize], entries)
}

fn inequality_json(
    rep: &InequalityReport,
    mode: &str,
    p: Exponent,
    shape: &[usize],
    extra: Vec<(String, Json)>,
) -> Json {
    let mut doc = vec![
        ("command".to_string(), Json::Str("verify".into())),
        ("mode".to_string(), Json::Str(mode.into())),
        ("p".to_string(), exponent_json(p)),
        (
            "shape".to_string(),
            Json::Array(shape.iter().map(|&n| Json::UInt(n as u64)).collect()),
        ),
    ];
    doc.extend(extra);
    doc.extend([
        ("lhs".to_string(), Json::Float(rep.lhs)),
        ("norm".to_string(), Json::Float(rep.norm)),
        (
            "ratio".to_string(),
            rep.ratio.map_or(Json::Null, Json::Float),
        ),
        ("constant".to_string(), Json::Float(rep.constant)),
        ("theorem".to_string(), Json::Str(rep.theorem.as_str().into())),
        ("holds".to_string(), Json::Bool(rep.holds)),
    ]);
    Json::Object(doc)
}

fn cmd_verify(
    form_path: Option<&Path>,
    random: Option<&str>,
    p_text: &str,
    which: WhichArg,
    mode: ModeArg,
    seed: u64,
    cfg: &EnumConfig,
) -> Result<Emitted> {
    let p = Exponent::parse(p_text)?;
    let mut extra: Vec<(String, Json)> = Vec::new();
    let mut files: Vec<(String, String)> = Vec::new();
    let mut parameters = vec![("p".to_string(), p_text.to_string())];
    let tensor = match (form_path, random) {
        (Some(path), None) => {
            let bytes = std::fs::read(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            extra.push(("input".into(), Json::Str(path.display().to_string())));
            extra.push(("input_sha256".into(), Json::Str(io::sha256_hex(&bytes))));
            parameters.push(("form".into(), path.display().to_string()));
            io::parse_tensor(&text)?
        }
        (None, Some(spec)) => {
            let t = random_tensor(spec, seed)?;
            extra.push(("seed".into(), Json::UInt(seed)));
            parameters.push(("random".into(), spec.to_string()));
            parameters.push(("seed".into(), format!("{seed}")));
            files.push(("form.json".into(), io::tensor_to_json(&t).render() + "\n"));
            t
        }
        _ => {
            return Err(Error::Parse(
                "verify needs exactly one of --form FILE or --random M,N".into(),
            ))
        }
    };
    let (rep, mode_name, shape) = match mode {
        ModeArg::Inequality => {
            let theorem = match which {
                WhichArg::C => MixedTheorem::MixedC,
                WhichArg::D => MixedTheorem::MixedD,
            };
            parameters.push((
                "which".into(),
                match which {
                    WhichArg::C => "c".into(),
                    WhichArg::D => "d".into(),
                },
            ));
            let form = MultilinearForm::new(tensor, p)?;
            let rep = verify_mixed_littlewood_with(&form, theorem, cfg)?;
            let shape = form.shape().to_vec();
            (rep, "inequality", shape)
        }
        ModeArg::Equivalence => {
            let p_val = match p {
                Exponent::Finite(v) => v,
                Exponent::Infinity => {
                    return Err(Error::Domain(
                        "equivalence mode needs a finite p in [1, 2]".into(),
                    ))
                }
            };
            let shape = tensor.shape().to_vec();
            let rep = equivalence_report_with(&tensor, p_val, cfg)?;
            (rep, "equivalence", shape)
        }
    };
    parameters.push((
        "mode".into(),
        match mode {
            ModeArg::Inequality => "inequality".into(),
            ModeArg::Equivalence => "equivalence".into(),
        },
    ));
    let doc = inequality_json(&rep, mode_name, p, &shape, extra);
    let text = doc.render() + "\n";
    files.insert(0, ("verify.json".into(), text.clone()));
    Ok(Emitted {
        files,
        stdout: text,
        exit: if rep.holds { 0 } else { 1 },
        parameters,
    })
}
