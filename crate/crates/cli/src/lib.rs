//! `precover`: batch command-line front end.
//!
//! Every command reads JSON, writes one pretty-printed JSON document and
//! returns an exit code: 0 on success (certificates PROVEN or SAMPLED),
//! 1 when a certificate is FAILED or a hypothesis is violated (a witness is
//! emitted), and 2 for usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use precover_core::certify::{
    certify_precover, certify_preenvelope, certify_self_orthogonality, certify_special, certify_special_preenvelope,
    certify_tilde, Certificate, ClaimKind, Level, Sampling,
};
use precover_core::classes::ModuleClass;
use precover_core::complex::{reverse_dual, ChainComplex, ChainMap};
use precover_core::constructions::{
    cover_on_orthogonal, decompose_into_disks, epic_precover, example_scenarios, ext1_ch, monic_preenvelope,
    special_precover_any, special_preenvelope_any, PrecoverResult, PreenvelopeResult,
};
use precover_core::hom::{ext1, hom_group, matlis_dual};
use precover_core::json::{ChainMapJson, ComplexJson};
use precover_core::module::ModuleJson;
use precover_core::{Error, FPModule, RingSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "precover", version, about = "Certified precovers and preenvelopes of chain complexes over Z/n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Modulus n of the ring Z/n; inputs with a different ring are rejected.
    #[arg(long, global = true)]
    ring: Option<u64>,
    /// Input file (a complex, or a claim for `certify`).
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Module class: free, projective, injective or all.
    #[arg(long, global = true, default_value = "free")]
    class: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random test objects per sampled check.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Chain map E → C with E exact, used as the exact precover of the input.
    #[arg(long = "supplied-exact-precover", global = true)]
    supplied_exact_precover: Option<PathBuf>,
    /// First operand of `hom`, `ext` and `ext-ch`.
    #[arg(long, global = true)]
    m: Option<PathBuf>,
    /// Second operand of `hom`, `ext` and `ext-ch`.
    #[arg(long, global = true)]
    n: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Epic precover assembled from degreewise precovers.
    Precover,
    /// Special precover (exact input, projective class, or supplied exact precover).
    SpecialPrecover,
    /// Monic preenvelope by duality.
    Preenvelope,
    /// Special preenvelope by duality.
    SpecialPreenvelope,
    /// Cover of an exact complex right-orthogonal to the class.
    Cover,
    /// Split an exact complex with cycles in the class into disks.
    Decompose,
    /// Re-verify a claim file.
    Certify,
    /// Hom(M, N) for two modules.
    Hom,
    /// Ext¹(M, N) for two modules.
    Ext,
    /// Ext¹ between two complexes.
    ExtCh,
    /// Matlis dual of a module or reverse dual of a complex.
    Dual,
    /// The bundled cover fixtures over Z/4.
    Examples,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Precover => "precover",
            Command::SpecialPrecover => "special-precover",
            Command::Preenvelope => "preenvelope",
            Command::SpecialPreenvelope => "special-preenvelope",
            Command::Cover => "cover",
            Command::Decompose => "decompose",
            Command::Certify => "certify",
            Command::Hom => "hom",
            Command::Ext => "ext",
            Command::ExtCh => "ext-ch",
            Command::Dual => "dual",
            Command::Examples => "examples",
        }
    }
}

/// A failure with its exit code and a machine-readable body.
#[derive(Debug)]
struct Failure {
    code: i32,
    body: Value,
}

impl Failure {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            body: json!({ "error": { "kind": kind, "message": message.into() } }),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, detail) = match &e {
            Error::NotExact { degree, homology_order } => {
                (EXIT_FAILED, json!({ "kind": "not_exact", "degree": degree, "homology_order": homology_order }))
            }
            Error::CycleNotInClass { degree, class } => {
                (EXIT_FAILED, json!({ "kind": "cycle_not_in_class", "degree": degree, "class": class }))
            }
            Error::ProviderNotEpic { class, degree } => {
                (EXIT_FAILED, json!({ "kind": "provider_not_epic", "degree": degree, "class": class }))
            }
            Error::LiftingObstruction { degree, ext_divisors } => (
                EXIT_FAILED,
                json!({ "kind": "lifting_obstruction", "degree": degree, "ext_divisors": ext_divisors }),
            ),
            Error::NotLocal(n) => (EXIT_FAILED, json!({ "kind": "not_local", "ring": n })),
            Error::DualityUnstable(class) => (EXIT_FAILED, json!({ "kind": "duality_unstable", "class": class })),
            Error::NotShortExact(why) => (EXIT_FAILED, json!({ "kind": "not_short_exact", "reason": why })),
            Error::NoRoute => (EXIT_USAGE, json!({ "kind": "no_route" })),
            Error::UnknownClass(name) => (EXIT_USAGE, json!({ "kind": "unknown_class", "class": name })),
            Error::RingMismatch(a, b) => (EXIT_USAGE, json!({ "kind": "ring_mismatch", "rings": [a, b] })),
            _ => (EXIT_USAGE, json!({ "kind": "invalid_input" })),
        };
        let mut detail = detail;
        detail["message"] = Value::String(message);
        Failure {
            code,
            body: json!({ "error": detail }),
        }
    }
}

type Outcome = Result<(Value, i32), Failure>;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage("io", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(path, &e))
}

fn malformed(path: &Path, e: &serde_json::Error) -> Failure {
    Failure {
        code: EXIT_USAGE,
        body: json!({ "error": {
            "kind": "malformed_json",
            "file": path.display().to_string(),
            "line": e.line(),
            "column": e.column(),
            "message": e.to_string(),
        } }),
    }
}

struct Ctx {
    ring: Option<u64>,
    class: String,
    sampling: Sampling,
}

impl Ctx {
    fn check_ring(&self, found: u64) -> Result<(), Failure> {
        match self.ring {
            Some(r) if r != found => Err(Error::RingMismatch(r, found).into()),
            _ => Ok(()),
        }
    }

    fn ring_of(&self, found: u64) -> Result<RingSpec, Failure> {
        self.check_ring(found)?;
        Ok(RingSpec::new(found)?)
    }

    fn class(&self, ring: &RingSpec) -> Result<ModuleClass, Failure> {
        Ok(ModuleClass::builtin(&self.class, ring)?)
    }

    fn complex(&self, path: &Path) -> Result<ChainComplex, Failure> {
        let j: ComplexJson = read_json(path)?;
        self.check_ring(j.ring)?;
        Ok(ChainComplex::from_json(&j)?)
    }

    fn module(&self, path: &Path) -> Result<FPModule, Failure> {
        let j: ModuleJson = read_json(path)?;
        self.check_ring(j.ring)?;
        Ok(FPModule::from_json(&j)?)
    }

    fn chain_map(&self, path: &Path) -> Result<ChainMap, Failure> {
        let j: ChainMapJson = read_json(path)?;
        self.check_ring(j.source.ring)?;
        Ok(ChainMap::from_json(&j)?)
    }
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str, cmd: Command) -> Result<&'a Path, Failure> {
    p.as_deref()
        .ok_or_else(|| Failure::usage("missing_argument", format!("`{}` requires --{flag}", cmd.name())))
}

fn exit_for(cert: &Certificate) -> i32 {
    if cert.level == Level::Failed {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

fn claim(kind: ClaimKind, class: &ModuleClass, map: &ChainMap) -> Value {
    json!({ "kind": kind, "class": class.name().to_lowercase(), "map": map.to_json() })
}

fn precover_doc(cmd: Command, kind: ClaimKind, class: &ModuleClass, r: &PrecoverResult) -> Value {
    json!({
        "command": cmd.name(),
        "claim": claim(kind, class, &r.map),
        "kernel": r.kernel.to_json(),
        "certificate": r.certificate,
    })
}

fn preenvelope_doc(cmd: Command, kind: ClaimKind, class: &ModuleClass, r: &PreenvelopeResult) -> Value {
    json!({
        "command": cmd.name(),
        "claim": claim(kind, class, &r.map),
        "cokernel": r.cokernel.to_json(),
        "certificate": r.certificate,
    })
}

/// A certification request, either on its own or as the `claim` member of
/// an emitted result.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimJson {
    kind: ClaimKind,
    class: String,
    #[serde(default)]
    map: Option<ChainMapJson>,
    #[serde(default)]
    complex: Option<ComplexJson>,
    #[serde(default)]
    ring: Option<u64>,
    #[serde(default)]
    self_orthogonal: Option<bool>,
}

fn certify_claim(ctx: &Ctx, path: &Path) -> Outcome {
    let doc: Value = read_json(path)?;
    let inner = match doc.get("claim") {
        Some(c) => c.clone(),
        None => doc,
    };
    let c: ClaimJson = serde_json::from_value(inner).map_err(|e| Failure::usage("invalid_claim", e.to_string()))?;
    let missing = |what: &str| Failure::usage("invalid_claim", format!("claim of kind {:?} needs `{what}`", c.kind));
    let map = c.map.as_ref().map(|m| ctx.check_ring(m.source.ring).and_then(|_| Ok(ChainMap::from_json(m)?)));
    let map = map.transpose()?;
    let ring_n = c
        .map
        .as_ref()
        .map(|m| m.source.ring)
        .or(c.complex.as_ref().map(|x| x.ring))
        .or(c.ring)
        .or(ctx.ring)
        .ok_or_else(|| missing("ring"))?;
    let ring = ctx.ring_of(ring_n)?;
    let mut class = ModuleClass::builtin(&c.class, &ring)?;
    if let Some(claim) = c.self_orthogonal {
        class = class.with_self_orthogonal_claim(claim);
    }
    let s = &ctx.sampling;
    let cert = match c.kind {
        ClaimKind::Precover => certify_precover(map.as_ref().ok_or_else(|| missing("map"))?, &class, s)?,
        ClaimKind::SpecialPrecover => certify_special(map.as_ref().ok_or_else(|| missing("map"))?, &class, s)?,
        ClaimKind::Preenvelope => certify_preenvelope(map.as_ref().ok_or_else(|| missing("map"))?, &class, s)?,
        ClaimKind::SpecialPreenvelope => {
            certify_special_preenvelope(map.as_ref().ok_or_else(|| missing("map"))?, &class, s)?
        }
        ClaimKind::TildeMembership | ClaimKind::Exactness => {
            let x = c.complex.as_ref().ok_or_else(|| missing("complex"))?;
            let x = ChainComplex::from_json(x)?;
            let class = if c.kind == ClaimKind::Exactness {
                ModuleClass::builtin("all", &ring)?
            } else {
                class.clone()
            };
            let mut cert = certify_tilde(&x, &class);
            cert.kind = c.kind;
            cert
        }
        ClaimKind::SelfOrthogonality => certify_self_orthogonality(&class, s)?,
    };
    let replayed = match &cert.witness {
        Some(w) if cert.is_failed() => Some(w.recheck(map.as_ref(), &class)?),
        _ => None,
    };
    let code = exit_for(&cert);
    Ok((
        json!({ "command": "certify", "certificate": cert, "witness_replayed": replayed }),
        code,
    ))
}

fn execute(cli: &Cli) -> Outcome {
    let ctx = Ctx {
        ring: cli.ring,
        class: cli.class.clone(),
        sampling: Sampling::new(cli.seed, cli.samples),
    };
    let cmd = cli.command;
    let s = &ctx.sampling;
    match cmd {
        Command::Precover | Command::Cover => {
            let c = ctx.complex(required(&cli.input, "in", cmd)?)?;
            let class = ctx.class(c.ring())?;
            let r = if matches!(cmd, Command::Precover) {
                epic_precover(&c, &class, s)?
            } else {
                cover_on_orthogonal(&c, &class, s)?
            };
            Ok((precover_doc(cmd, ClaimKind::Precover, &class, &r), exit_for(&r.certificate)))
        }
        Command::SpecialPrecover => {
            let c = ctx.complex(required(&cli.input, "in", cmd)?)?;
            let class = ctx.class(c.ring())?;
            let supplied = cli.supplied_exact_precover.as_deref().map(|p| ctx.chain_map(p)).transpose()?;
            let out = special_precover_any(&c, &class, supplied.as_ref(), s)?;
            let mut doc = precover_doc(cmd, ClaimKind::SpecialPrecover, &class, &out.result);
            doc["route"] = json!(out.route);
            if let Some((g_to_w, w_to_k)) = &out.layers {
                doc["layers"] = json!({ "inner_kernel": g_to_w.to_json(), "to_supplied_kernel": w_to_k.to_json() });
            }
            Ok((doc, exit_for(&out.result.certificate)))
        }
        Command::Preenvelope | Command::SpecialPreenvelope => {
            let c = ctx.complex(required(&cli.input, "in", cmd)?)?;
            let class = ctx.class(c.ring())?;
            let (kind, r) = if matches!(cmd, Command::Preenvelope) {
                (ClaimKind::Preenvelope, monic_preenvelope(&c, &class, s)?)
            } else {
                let supplied = cli.supplied_exact_precover.as_deref().map(|p| ctx.chain_map(p)).transpose()?;
                (ClaimKind::SpecialPreenvelope, special_preenvelope_any(&c, &class, supplied.as_ref(), s)?)
            };
            Ok((preenvelope_doc(cmd, kind, &class, &r), exit_for(&r.certificate)))
        }
        Command::Decompose => {
            let c = ctx.complex(required(&cli.input, "in", cmd)?)?;
            let class = ctx.class(c.ring())?;
            let d = decompose_into_disks(&c, &class)?;
            let pieces: Vec<Value> = d
                .pieces
                .iter()
                .map(|(n, m)| json!({ "degree": n, "module": m.to_json() }))
                .collect();
            Ok((
                json!({
                    "command": cmd.name(),
                    "class": class.name().to_lowercase(),
                    "pieces": pieces,
                    "iso": d.iso.to_json(),
                    "inverse": d.inverse.to_json(),
                }),
                EXIT_OK,
            ))
        }
        Command::Certify => certify_claim(&ctx, required(&cli.input, "in", cmd)?),
        Command::Hom | Command::Ext => {
            let m = ctx.module(required(&cli.m, "m", cmd)?)?;
            let n = ctx.module(required(&cli.n, "n", cmd)?)?;
            if m.ring() != n.ring() {
                return Err(Error::RingMismatch(m.ring().modulus(), n.ring().modulus()).into());
            }
            let doc = if matches!(cmd, Command::Hom) {
                let h = hom_group(&m, &n)?;
                let gens: Vec<Value> = h.generators().iter().map(|g| json!(g.to_json())).collect();
                json!({
                    "command": cmd.name(),
                    "order": h.module().order(),
                    "divisors": h.module().elementary_divisors(),
                    "generators": gens,
                })
            } else {
                let e = ext1(&m, &n)?;
                json!({ "command": cmd.name(), "order": e.order(), "divisors": e.elementary_divisors() })
            };
            Ok((doc, EXIT_OK))
        }
        Command::ExtCh => {
            let x = ctx.complex(required(&cli.m, "m", cmd)?)?;
            let y = ctx.complex(required(&cli.n, "n", cmd)?)?;
            let e = ext1_ch(&x, &y)?;
            Ok((
                json!({ "command": cmd.name(), "order": e.order(), "divisors": e.elementary_divisors() }),
                EXIT_OK,
            ))
        }
        Command::Dual => {
            let path = required(&cli.input, "in", cmd)?;
            let v: Value = read_json(path)?;
            let doc = if v.get("terms").is_some() {
                let c = ctx.complex(path)?;
                let d = reverse_dual(&c)?;
                json!({ "command": cmd.name(), "complex": d.complex.to_json() })
            } else {
                let m = ctx.module(path)?;
                let d = matlis_dual(&m)?;
                json!({ "command": cmd.name(), "module": d.module().to_json() })
            };
            Ok((doc, EXIT_OK))
        }
        Command::Examples => {
            let mut code = EXIT_OK;
            let items: Vec<Value> = example_scenarios(s)?
                .iter()
                .map(|sc| {
                    if sc.certificate.is_failed() {
                        code = EXIT_FAILED;
                    }
                    json!({
                        "name": sc.name,
                        "map": sc.map.to_json(),
                        "superfluous_kernel": sc.superfluous_kernel,
                        "certificate": sc.certificate,
                    })
                })
                .collect();
            Ok((json!({ "command": cmd.name(), "scenarios": items }), code))
        }
    }
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage("io", format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (doc, code) = match execute(&cli) {
        Ok(r) => r,
        Err(f) => (f.body, f.code),
    };
    if code == EXIT_USAGE {
        let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        eprintln!("{text}");
        return code;
    }
    match emit(&doc, cli.out.as_deref()) {
        Ok(()) => code,
        Err(f) => {
            eprintln!("{}", f.body);
            f.code
        }
    }
}
