use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use frobkit::bogomolov::{b0_with, B0Strategy};
use frobkit::cohomology::{h2_qz, DEFAULT_COHOMOLOGY_CAP};
use frobkit::constructors::{
    abelian, affine_binary_icosahedral, alternating, binary_icosahedral, cyclic, dihedral, g_plus, gz_type,
    metacyclic, nonsolvable_type_i, nonsolvable_type_ii, quaternion_generalized, sl2, symmetric, Family,
    PresentationParams,
};
use frobkit::frobenius::{find_frobenius_structures, verify_structure_theorems, TheoremChecks};
use frobkit::group::PredicateFlags;
use frobkit::groupfile::GroupFile;
use frobkit::gz_classify::{gz_report, is_gz_group, is_z_group};
use frobkit::rationality::{builtin_field, certify, explain, FieldSpec};
use frobkit::verify::verify_paper;
use frobkit::{Error, Group};

#[derive(Parser)]
#[command(name = "frobkit", version, about = "Frobenius groups, multipliers and retract-rationality certificates")]
struct Cli {
    /// JSON output
    #[arg(long, global = true)]
    json: bool,
    /// Largest group order for cohomology and B0
    #[arg(long, global = true, default_value_t = DEFAULT_COHOMOLOGY_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and print it as a group file
    Construct {
        /// cyclic, abelian, dihedral, symmetric, alternating, quaternion, metacyclic,
        /// sl2, binary-icosahedral, g-plus, affine-sl2f5, or type
        family: String,
        args: Vec<String>,
        /// Finite-field modulus for matrix constructions
        #[arg(long)]
        q: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Order, exponent and structural predicates
    Analyze { file: PathBuf },
    /// Frobenius kernels and complements
    Frobenius { file: PathBuf },
    /// Z/GZ recognition and family
    Classify { file: PathBuf },
    /// Schur multiplier invariants
    Schur { file: PathBuf },
    /// Bogomolov multiplier
    B0 {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Retract-rationality verdict over a field
    Certify {
        file: PathBuf,
        /// Q, C, Qzeta:m or charp:q
        #[arg(long)]
        field: FieldSpec,
    },
    /// Run the built-in verification suite
    VerifyPaper {
        #[arg(long, default_value_t = 11)]
        q: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Full,
    Sylow,
    Criteria,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

type Outcome = Result<bool, Failure>;

fn out(s: &str) {
    // a closed pipe is not an error for us
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        out(&(serde_json::to_string_pretty(value).expect("serializable output") + "\n"));
    } else {
        out(&text());
    }
}

fn load(path: &std::path::Path) -> Result<(GroupFile, Group), Failure> {
    let f = GroupFile::read(path)?;
    let g = f.to_group()?;
    Ok((f, g))
}

fn num<T: std::str::FromStr>(args: &[String], i: usize, what: &str) -> Result<T, Failure> {
    let s = args
        .get(i)
        .ok_or_else(|| Failure::Usage(format!("missing argument <{what}>")))?;
    s.parse()
        .map_err(|_| Failure::Usage(format!("invalid value '{s}' for <{what}>")))
}

fn build(family: &str, args: &[String], q: Option<u32>) -> Result<Group, Failure> {
    if let Some(a) = args.iter().find(|a| a.as_str() == "0") {
        return Err(Failure::Usage(format!("invalid value '{a}': parameters must be positive")));
    }
    let n = |i, w| num::<u64>(args, i, w);
    Ok(match family {
        "cyclic" => cyclic(num(args, 0, "n")?),
        "abelian" => {
            let orders = (0..args.len()).map(|i| num::<usize>(args, i, "order")).collect::<Result<Vec<_>, _>>()?;
            abelian(&orders)
        }
        "dihedral" => dihedral(num(args, 0, "n")?)?,
        "symmetric" => symmetric(num(args, 0, "n")?)?,
        "alternating" => alternating(num(args, 0, "n")?)?,
        "quaternion" => quaternion_generalized(n(0, "order")?)?,
        "metacyclic" => metacyclic(n(0, "m")?, n(1, "n")?, n(2, "r")?)?,
        "sl2" => sl2(n(0, "p")?)?,
        "binary-icosahedral" => binary_icosahedral(q.unwrap_or(11))?.group().clone(),
        "g-plus" => g_plus(q.unwrap_or(25))?.group().clone(),
        "affine-sl2f5" => affine_binary_icosahedral(q.unwrap_or(11))?,
        "type" => {
            let fam: Family = args
                .first()
                .ok_or_else(|| Failure::Usage("missing argument <family>".into()))?
                .parse()
                .map_err(Failure::Usage)?;
            let mut params = PresentationParams::new(fam);
            for kv in &args[1..] {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("expected key=value, got '{kv}'")))?;
                if !["m", "n", "r", "l", "k", "t", "p"].contains(&k) {
                    return Err(Failure::Usage(format!("unknown parameter '{k}'")));
                }
                let v: u64 = v.parse().map_err(|_| Failure::Usage(format!("invalid value in '{kv}'")))?;
                params = params.with(k, v);
            }
            match fam {
                Family::NsI => nonsolvable_type_i(&params)?.group,
                Family::NsII => nonsolvable_type_ii(&params)?.group,
                _ => gz_type(&params)?.group,
            }
        }
        other => return Err(Failure::Usage(format!("unknown family '{other}'"))),
    })
}

#[derive(Serialize)]
struct Analysis {
    name: String,
    order: usize,
    exponent: u64,
    degree: usize,
    order_statistics: Vec<(u64, usize)>,
    predicates: PredicateFlags,
    p_group: Option<u64>,
    z_group: bool,
    gz_group: bool,
}

#[derive(Serialize)]
struct StructureOut {
    kernel_order: usize,
    complement_order: usize,
    kernel_generators: Vec<usize>,
    complement_generators: Vec<usize>,
    checks: TheoremChecks,
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Construct { family, args, q, output } => {
            let g = build(&family, &args, q)?;
            let name = std::iter::once(family.clone()).chain(args.iter().cloned()).collect::<Vec<_>>().join(" ");
            let meta = json!({ "family": family, "args": args, "q": q, "order": g.order() });
            let f = GroupFile::from_group(name, &g, Some(meta));
            match output {
                Some(p) => {
                    f.write(&p)?;
                    eprintln!("wrote group of order {} to {}", g.order(), p.display());
                }
                None => out(&(f.to_json() + "\n")),
            }
        }
        Command::Analyze { file } => {
            let (f, g) = load(&file)?;
            let a = Analysis {
                name: f.name,
                order: g.order(),
                exponent: g.exponent(),
                degree: g.degree(),
                order_statistics: g.order_statistics(),
                predicates: g.structural_predicates().flags(),
                p_group: g.is_p_group(),
                z_group: is_z_group(&g)?,
                gz_group: is_gz_group(&g)?,
            };
            emit(json, &a, || {
                let p = &a.predicates;
                format!(
                    "{}\norder {}\nexponent {}\nabelian {} cyclic {} nilpotent {} solvable {} perfect {}\nZ-group {} GZ-group {}\n",
                    a.name, a.order, a.exponent, p.is_abelian, p.is_cyclic, p.is_nilpotent, p.is_solvable,
                    p.is_perfect, a.z_group, a.gz_group
                )
            });
        }
        Command::Frobenius { file } => {
            let (_, g) = load(&file)?;
            let mut out = Vec::new();
            for s in find_frobenius_structures(&g)? {
                out.push(StructureOut {
                    kernel_order: s.kernel.order(),
                    complement_order: s.complement.order(),
                    kernel_generators: s.kernel.generators().to_vec(),
                    complement_generators: s.complement.generators().to_vec(),
                    checks: verify_structure_theorems(&g, &s)?,
                });
            }
            emit(json, &out, || {
                if out.is_empty() {
                    return "not a Frobenius group\n".into();
                }
                out.iter()
                    .map(|s| format!("kernel of order {}, complement of order {}\n", s.kernel_order, s.complement_order))
                    .collect()
            });
        }
        Command::Classify { file } => {
            let (_, g) = load(&file)?;
            let r = gz_report(&g)?;
            emit(json, &r, || {
                let family = r.solvable_type.or(r.nonsolvable_type).map_or("-".into(), |f| f.to_string());
                format!("Z-group {}\nGZ-group {}\nfamily {}\n", r.is_z_group, r.is_gz_group, family)
            });
        }
        Command::Schur { file } => {
            let (_, g) = load(&file)?;
            let m = h2_qz(&g, cli.cap)?;
            let out = json!({ "invariants": m.invariants, "order": m.order().to_string() });
            emit(json, &out, || format!("M(G) = {}\n", m.invariants));
        }
        Command::B0 { file, method } => {
            let (_, g) = load(&file)?;
            let strategy = match method {
                Method::Auto => B0Strategy::Auto,
                Method::Full => B0Strategy::Full,
                Method::Sylow => B0Strategy::Sylow,
                Method::Criteria => B0Strategy::Criteria,
            };
            let r = b0_with(&g, strategy, cli.cap)?;
            emit(json, &r, || match &r {
                Some(r) => format!("B0(G) = {} ({:?}: {})\n", r.invariants, r.method, r.details),
                None => "B0(G) unknown: no method applies\n".into(),
            });
        }
        Command::Certify { file, field } => {
            let (_, g) = load(&file)?;
            let k = builtin_field(&field)?;
            let v = certify(&g, &k)?;
            emit(json, &v, || explain(&v));
        }
        Command::VerifyPaper { q } => {
            let reports = verify_paper(q)?;
            let ok = reports.iter().all(|r| r.all_passed());
            emit(json, &reports, || {
                let mut s = String::new();
                for r in &reports {
                    s += &format!("{}\n", r.subject);
                    for c in &r.checks {
                        s += &format!("  [{}] {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name);
                    }
                }
                s
            });
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
