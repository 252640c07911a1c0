mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use input::{InputError, Loaded};
use wb_core::corpus::{self, CorpusConfig};
use wb_core::interp::{apply, compose, flags, iso_conditions, validate_on_model};
use wb_core::lab::{
    check_definite, check_retract, check_spc, check_spc_strict, mk_defpf_family, x_strong_models, Verdict,
};
use wb_core::model::{
    automorphisms, bf_system, ef_game, eta_relation, eval_with, find_isomorphism, internal_model, quotient,
    strong_model_check, Assignment, FiniteStructure, Player,
};
use wb_core::scheme::{
    build_hf, build_mu, build_nu, build_pc, build_sat, build_spc, build_tarski, instances_up_to, mk_instance,
    DefinitenessKind, Scheme, Theory,
};
use wb_core::syntax::{print, Formula, Var};
use wb_core::Caps;

#[derive(Parser)]
#[command(name = "wb", version, about = "Schemes, translations and finite second-order structures")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; output order does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cap on classes per family.
    #[arg(long, global = true)]
    max_classes: Option<usize>,
    /// Largest arity accepted for class families and definable families.
    #[arg(long, global = true, default_value_t = 3)]
    max_arity: usize,
    /// Largest depth accepted by instance and comprehension generators.
    #[arg(long, global = true, default_value_t = 6)]
    max_depth: usize,
    /// Cap on enumerated tuples.
    #[arg(long, global = true)]
    max_tuples: Option<usize>,
    /// Cap on orbits in invariance checks.
    #[arg(long, global = true)]
    max_orbits: Option<usize>,
    /// Cap on members of a full class family.
    #[arg(long, global = true)]
    max_full: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Ind,
    Com,
    Sat,
    Tarski,
    As,
    Hf,
    Mu,
    Nu,
    Pc,
    Spc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Phi {
    Iso,
    Eeq,
    Iec,
    Height,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it canonically.
    Parse {
        formula: String,
        /// Signature as inline JSON or a file; inferred from the text when absent.
        #[arg(long)]
        sig: Option<String>,
        #[arg(long)]
        allow_p: bool,
    },
    /// Print a scheme, theory, translation or structure file canonically.
    Print { file: String },
    /// The universal closure of a scheme with `--phi` substituted for P.
    Instance {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value = "x")]
        pivot: String,
    },
    /// Every instance with a defining formula of at most `--depth` nodes.
    Instances {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        depth: usize,
        /// Parameter-free instances only.
        #[arg(long)]
        pf: bool,
    },
    /// A stock scheme or theory.
    Build {
        kind: BuildKind,
        #[arg(long)]
        depth: Option<usize>,
        /// Scheme for mu, nu, pc and spc (default ind).
        #[arg(long, default_value = "ind")]
        scheme: String,
        /// Object signature for sat and tarski (default that of pa-minus).
        #[arg(long)]
        sig: Option<String>,
        /// Theory for hf (default empty).
        #[arg(long, default_value = "empty")]
        theory: String,
        /// Fresh predicate for mu and nu.
        #[arg(long, default_value = "Q")]
        q: String,
    },
    /// Translate a formula over the source signature.
    Translate {
        #[arg(long)]
        translation: String,
        #[arg(long)]
        formula: String,
    },
    /// The translation applying `--inner` first and `--outer` second.
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
    },
    /// Dimension, relativization, identity and directness flags of a translation.
    Flags {
        #[arg(long)]
        translation: String,
    },
    /// The five conditions making `--iota` an isomorphism between two translations.
    IsoConditions {
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        #[arg(long)]
        iota: String,
    },
    /// Well-formedness of a translation on a model; exit 1 when invalid.
    ValidateTranslation {
        #[arg(long)]
        translation: String,
        #[arg(long)]
        model: String,
    },
    /// Truth of a formula; exit 1 when false.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        formula: String,
        /// `var=element`, repeatable.
        #[arg(long)]
        assign: Vec<String>,
        /// Read `=` as this formula in `x`, `y`.
        #[arg(long)]
        eta: Option<String>,
    },
    /// Automorphisms of a model.
    Aut {
        #[arg(long)]
        model: String,
    },
    /// Class family of the parameter-free definable relations.
    Defpf {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// The quotient of a model by the equivalence `--eta`.
    Quotient {
        #[arg(long)]
        model: String,
        #[arg(long)]
        eta: String,
    },
    /// The model a translation defines inside another.
    Internal {
        #[arg(long)]
        model: String,
        #[arg(long)]
        translation: String,
        /// Collapse the interpreted equality.
        #[arg(long)]
        quotient: bool,
    },
    /// An isomorphism; exit 1 when none exists.
    Iso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// The Ehrenfeucht-Fraisse game; exit 1 when Spoiler wins.
    Ef {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        rounds: usize,
    },
    /// The greatest back-and-forth system; exit 1 when empty.
    Bf {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Strong-model check; exit 1 with a failing class.
    Strong {
        #[arg(long)]
        model: String,
        #[arg(long)]
        scheme: String,
        /// Binary symbol read as equality.
        #[arg(long)]
        eq: Option<String>,
    },
    /// Scheme truth and closure under parameter-free definability of a class family; exit 1 when not.
    SpcCheck {
        #[arg(long)]
        ground: String,
        #[arg(long)]
        classes: String,
        #[arg(long)]
        scheme: String,
        /// Also require every subset to be a class.
        #[arg(long)]
        strict: bool,
    },
    /// Every strong model of a scheme inside a second-order structure.
    StrongModels {
        #[arg(long)]
        ground: String,
        #[arg(long)]
        classes: String,
        #[arg(long)]
        scheme: String,
    },
    /// Definiteness of a scheme over a second-order structure; exit 1 with a counterexample.
    Definite {
        #[arg(long)]
        ground: String,
        #[arg(long)]
        classes: String,
        #[arg(long)]
        scheme: String,
        #[arg(long, value_enum)]
        phi: Phi,
        /// Sentence for eeq, and for iec over eeq.
        #[arg(long)]
        alpha: Option<String>,
        /// Formula in one variable carving the height order.
        #[arg(long)]
        ord: Option<String>,
    },
    /// Whether `--witness` shows `--s` undoing `--t`; exit 1 with a counterexample.
    Retract {
        #[arg(long)]
        ground: String,
        #[arg(long)]
        classes: String,
        /// Translation out of the ground signature.
        #[arg(long)]
        t: String,
        /// Translation back into it.
        #[arg(long)]
        s: String,
        /// Formula in `x`, `v1_1`..`v1_N` defining the witness.
        #[arg(long)]
        witness: String,
    },
    /// Seeded property suites; exit 1 on any failure.
    Corpus {
        #[arg(long)]
        config: Option<String>,
        /// Run only these suites.
        #[arg(long)]
        suite: Vec<String>,
    },
}

/// A report and whether the verdict holds.
struct Report {
    text: String,
    json: Value,
    holds: bool,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Loaded<Report> {
        Ok(Report {
            text: text.into(),
            json,
            holds: true,
        })
    }

    fn verdict(holds: bool, text: impl Into<String>, json: Value) -> Loaded<Report> {
        Ok(Report {
            text: text.into(),
            json,
            holds,
        })
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json prints")
}

fn lines(fs: &[Formula]) -> String {
    fs.iter().map(print).collect::<Vec<_>>().join("\n")
}

fn names(m: &FiniteStructure, elems: &[usize]) -> Vec<String> {
    elems.iter().map(|&e| m.name(e).to_owned()).collect()
}

fn structure_value(m: &FiniteStructure) -> Value {
    serde_json::from_str(&m.to_json()).expect("structure json")
}

fn check_bound(what: &str, value: usize, cap: usize) -> Loaded<()> {
    if value > cap {
        return Err(InputError(format!("{what} {value} exceeds --max-{what} {cap}")));
    }
    Ok(())
}

fn caps(g: &Global) -> Caps {
    let d = Caps::default();
    Caps {
        max_classes: g.max_classes.unwrap_or(d.max_classes),
        max_tuples: g.max_tuples.unwrap_or(d.max_tuples),
        max_orbits: g.max_orbits.unwrap_or(d.max_orbits),
        max_full: g.max_full.unwrap_or(d.max_full),
        ..d
    }
}

fn verdict_report(v: &Verdict, ground: &FiniteStructure) -> Loaded<Report> {
    let json = v.to_value(ground);
    let head = match (v.holds, v.vacuous) {
        (true, true) => "holds (vacuously: no strong models)",
        (true, false) => "holds",
        (false, _) => "fails",
    };
    let text = if v.holds && v.witness.is_none() { head.to_owned() } else { format!("{head}\n{}", pretty(&json)) };
    Report::verdict(v.holds, text, json)
}

fn definiteness_kind(phi: Phi, alpha: Option<&str>, ord: Option<&str>, tau: &Scheme) -> Loaded<DefinitenessKind> {
    fn need<'a>(flag: Option<&'a str>, name: &str) -> Loaded<&'a str> {
        let wanted = if name == "height" { "ord" } else { "alpha" };
        flag.ok_or_else(|| InputError(format!("--phi {name} needs --{wanted}")))
    }
    Ok(match phi {
        Phi::Iso => DefinitenessKind::Iso,
        Phi::Eeq => DefinitenessKind::Eeq(input::formula(need(alpha, "eeq")?, tau.sig(), false)?),
        Phi::Iec => {
            let inner = match alpha {
                Some(a) => DefinitenessKind::Eeq(input::formula(a, tau.sig(), false)?),
                None => DefinitenessKind::Iso,
            };
            DefinitenessKind::InEveryCardinality(Box::new(inner))
        }
        Phi::Height => DefinitenessKind::Height(input::formula(need(ord, "height")?, tau.sig(), false)?),
    })
}

fn build(kind: BuildKind, depth: Option<usize>, scheme: &str, sig: Option<&str>, theory: &str, q: &str, g: &Global) -> Loaded<Report> {
    let of_scheme = |s: Scheme| Report::ok(s.text(), serde_json::from_str(&s.to_json()).expect("scheme json"));
    let of_theory = |t: Theory| Report::ok(t.text().trim_end().to_owned(), serde_json::from_str(&t.to_json()).expect("theory json"));
    let object_sig = || match sig {
        Some(s) => input::signature(s),
        None => Ok(wb_core::scheme::build_pa_minus().sig().clone()),
    };
    match kind {
        BuildKind::Ind => of_scheme(wb_core::scheme::build_ind()),
        BuildKind::Com => of_scheme(wb_core::scheme::build_com()),
        BuildKind::Sat => of_scheme(build_sat(&object_sig()?)?),
        BuildKind::Tarski => of_scheme(build_tarski(&object_sig()?)?),
        BuildKind::As => of_theory(wb_core::scheme::build_as()),
        BuildKind::Hf => of_scheme(build_hf(&input::theory(theory)?)?),
        BuildKind::Mu => of_scheme(build_mu(&input::scheme(scheme)?, q)?),
        BuildKind::Nu => of_scheme(build_nu(&input::scheme(scheme)?, q)?),
        BuildKind::Pc | BuildKind::Spc => {
            let depth = depth.ok_or_else(|| InputError("build pc and spc need --depth".into()))?;
            check_bound("depth", depth, g.max_depth)?;
            let s = input::scheme(scheme)?;
            let t = if matches!(kind, BuildKind::Pc) { build_pc(&s, depth)? } else { build_spc(&s, depth)? };
            of_theory(t)
        }
    }
}

fn assignment(m: &FiniteStructure, pairs: &[String]) -> Loaded<Assignment> {
    let mut a = Assignment::new();
    for p in pairs {
        let (v, e) = p
            .split_once('=')
            .ok_or_else(|| InputError(format!("--assign {p}: expected var=element")))?;
        let idx = m
            .index_of(e.trim())
            .ok_or_else(|| InputError(format!("--assign {p}: no element named `{}`", e.trim())))?;
        a.insert(Var::from(v.trim()), idx);
    }
    Ok(a)
}

fn execute(cli: &Cli) -> Loaded<Report> {
    let g = &cli.global;
    let caps = caps(g);
    match &cli.command {
        Command::Parse { formula, sig, allow_p } => {
            let (f, sig) = match sig {
                Some(s) => {
                    let sig = input::signature(s)?;
                    (input::formula(formula, &sig, *allow_p)?, sig)
                }
                None => input::formula_untyped(formula)?,
            };
            let free: Vec<String> = f.free_vars().iter().map(|v| v.to_string()).collect();
            Report::ok(
                print(&f),
                json!({
                    "formula": print(&f),
                    "signature": serde_json::from_str::<Value>(&sig.to_json()).expect("signature json"),
                    "free_vars": free,
                    "quantifier_rank": f.quantifier_rank(),
                }),
            )
        }
        Command::Print { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| InputError(format!("{file}: {e}")))?;
            if let Ok(s) = Scheme::from_json(&text) {
                return Report::ok(s.text(), serde_json::from_str(&s.to_json()).expect("scheme json"));
            }
            if let Ok(t) = Theory::from_json(&text) {
                return Report::ok(t.text().trim_end().to_owned(), serde_json::from_str(&t.to_json()).expect("theory json"));
            }
            if let Ok(t) = wb_core::interp::Translation::from_json(&text) {
                let v: Value = serde_json::from_str(&t.to_json()).expect("translation json");
                return Report::ok(pretty(&v), v);
            }
            let m = input::structure(file)?;
            let v = structure_value(&m);
            Report::ok(pretty(&v), v)
        }
        Command::Instance { scheme, phi, pivot } => {
            let s = input::scheme(scheme)?;
            let f = mk_instance(&s, &input::formula(phi, s.sig(), false)?, &Var::from(pivot.as_str()))?;
            Report::ok(print(&f), json!({ "instance": print(&f) }))
        }
        Command::Instances { scheme, depth, pf } => {
            check_bound("depth", *depth, g.max_depth)?;
            let fs = instances_up_to(&input::scheme(scheme)?, *depth, *pf)?;
            Report::ok(lines(&fs), json!({ "instances": fs.iter().map(print).collect::<Vec<_>>() }))
        }
        Command::Build { kind, depth, scheme, sig, theory, q } => {
            build(*kind, *depth, scheme, sig.as_deref(), theory, q, g)
        }
        Command::Translate { translation, formula } => {
            let t = input::translation(translation)?;
            let f = apply(&t, &input::formula(formula, t.source(), false)?)?;
            Report::ok(print(&f), json!({ "formula": print(&f) }))
        }
        Command::Compose { outer, inner } => {
            let tu = compose(&input::translation(outer)?, &input::translation(inner)?)?;
            let v: Value = serde_json::from_str(&tu.to_json()).expect("translation json");
            Report::ok(pretty(&v), v)
        }
        Command::Flags { translation } => {
            let f = flags(&input::translation(translation)?);
            let v = serde_json::to_value(f).expect("flags json");
            Report::ok(pretty(&v), v)
        }
        Command::IsoConditions { t1, t2, iota } => {
            let (t1, t2) = (input::translation(t1)?, input::translation(t2)?);
            let iota = input::formula(iota, t1.target(), false)?;
            let cs = iso_conditions(&t1, &t2, &iota)?;
            Report::ok(lines(&cs), json!({ "conditions": cs.iter().map(print).collect::<Vec<_>>() }))
        }
        Command::ValidateTranslation { translation, model } => {
            let r = validate_on_model(&input::translation(translation)?, &input::structure(model)?)?;
            let v = serde_json::to_value(&r).expect("report json");
            let text = if r.is_clean() { "valid".to_owned() } else { format!("invalid\n{}", pretty(&v)) };
            Report::verdict(r.is_clean(), text, v)
        }
        Command::Eval { model, formula, assign, eta } => {
            let m = input::structure(model)?;
            let f = input::formula(formula, m.signature(), false)?;
            let a = assignment(&m, assign)?;
            let eq = match eta {
                Some(e) => Some(eta_relation(&m, &input::formula(e, m.signature(), false)?)?),
                None => None,
            };
            let truth = eval_with(&m, &f, &a, eq.as_ref(), None)?;
            Report::verdict(truth, truth.to_string(), json!({ "value": truth }))
        }
        Command::Aut { model } => {
            let m = input::structure(model)?;
            let perms: Vec<Vec<String>> = automorphisms(&m).iter().map(|p| names(&m, p)).collect();
            let text = perms.iter().map(|p| p.join(" ")).collect::<Vec<_>>().join("\n");
            Report::ok(
                format!("{} automorphism(s) of {}\n{text}", perms.len(), m.universe().join(" ")),
                json!({ "universe": m.universe(), "automorphisms": perms }),
            )
        }
        Command::Defpf { model, arity } => {
            check_bound("arity", *arity, g.max_arity)?;
            let m = input::structure(model)?;
            let fam = mk_defpf_family(&m, *arity, &caps)?;
            let v: Value = serde_json::from_str(&fam.to_json(&m)).expect("family json");
            Report::ok(pretty(&v), v)
        }
        Command::Quotient { model, eta } => {
            let m = input::structure(model)?;
            let q = quotient(&m, &input::formula(eta, m.signature(), false)?)?;
            let v = structure_value(&q);
            Report::ok(pretty(&v), v)
        }
        Command::Internal { model, translation, quotient } => {
            let im = internal_model(&input::structure(model)?, &input::translation(translation)?, *quotient)?;
            let mut v = structure_value(&im.structure);
            if let Some(eq) = &im.eq {
                let rows: Vec<Vec<String>> = eq.tuples().iter().map(|t| names(&im.structure, t)).collect();
                v["eq"] = json!(rows);
            }
            Report::ok(pretty(&v), v)
        }
        Command::Iso { left, right } => {
            let (a, b) = (input::structure(left)?, input::structure(right)?);
            match find_isomorphism(&a, &b) {
                Some(f) => {
                    let map: serde_json::Map<String, Value> =
                        f.iter().enumerate().map(|(i, &j)| (a.name(i).to_owned(), b.name(j).into())).collect();
                    let v = json!({ "isomorphic": true, "map": map });
                    Report::ok(pretty(&v), v)
                }
                None => Report::verdict(false, "not isomorphic", json!({ "isomorphic": false })),
            }
        }
        Command::Ef { left, right, rounds } => {
            let out = ef_game(&input::structure(left)?, &input::structure(right)?, *rounds)?;
            let v = serde_json::to_value(&out).expect("outcome json");
            Report::verdict(out.winner == Player::Duplicator, pretty(&v), v)
        }
        Command::Bf { left, right } => {
            let (a, b) = (input::structure(left)?, input::structure(right)?);
            match bf_system(&a, &b, &caps)? {
                Some(sys) => {
                    let maps: Vec<Vec<[&str; 2]>> = sys
                        .maps
                        .iter()
                        .map(|p| p.iter().map(|&(x, y)| [a.name(x), b.name(y)]).collect())
                        .collect();
                    let v = json!({ "maps": maps });
                    Report::ok(format!("back-and-forth system of {} partial maps\n{}", maps.len(), pretty(&v)), v)
                }
                None => Report::verdict(false, "no back-and-forth system", json!({ "maps": null })),
            }
        }
        Command::Strong { model, scheme, eq } => {
            let m = input::structure(model)?;
            match strong_model_check(&m, eq.as_deref(), &input::scheme(scheme)?, &caps)? {
                None => Report::ok("strong model", json!({ "strong": true })),
                Some(y) => {
                    let v = json!({ "strong": false, "counterexample": names(&m, &y) });
                    Report::verdict(false, pretty(&v), v)
                }
            }
        }
        Command::SpcCheck { ground, classes, scheme, strict } => {
            let so = input::so_structure(ground, classes, &caps)?;
            let s = input::scheme(scheme)?;
            let r = if *strict { check_spc_strict(&so, &s, &caps)? } else { check_spc(&so, &s, &caps)? };
            let v = serde_json::to_value(&r).expect("report json");
            Report::verdict(r.is_ok(), pretty(&v), v)
        }
        Command::StrongModels { ground, classes, scheme } => {
            let so = input::so_structure(ground, classes, &caps)?;
            check_bound("arity", so.classes.max_arity(), g.max_arity)?;
            let models = x_strong_models(&so, &input::scheme(scheme)?, &caps)?;
            let v = json!({ "count": models.len(), "models": models.iter().map(|t| t.to_value(&so.ground)).collect::<Vec<_>>() });
            Report::ok(pretty(&v), v)
        }
        Command::Definite { ground, classes, scheme, phi, alpha, ord } => {
            let so = input::so_structure(ground, classes, &caps)?;
            check_bound("arity", so.classes.max_arity(), g.max_arity)?;
            let tau = input::scheme(scheme)?;
            let kind = definiteness_kind(*phi, alpha.as_deref(), ord.as_deref(), &tau)?;
            verdict_report(&check_definite(&so, &tau, &kind, &caps)?, &so.ground)
        }
        Command::Retract { ground, classes, t, s, witness } => {
            let so = input::so_structure(ground, classes, &caps)?;
            let (t, s) = (input::translation(t)?, input::translation(s)?);
            let f = input::formula(witness, so.ground.signature(), false)?;
            verdict_report(&check_retract(&so, &t, &s, &f)?, &so.ground)
        }
        Command::Corpus { config, suite } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
                    CorpusConfig::from_json(&text).map_err(|e| InputError(format!("{path}: {e}")))?
                }
                None => CorpusConfig {
                    caps,
                    ..CorpusConfig::default()
                },
            };
            if let Ok(seed) = std::env::var("WB_SEED") {
                cfg.seed = seed
                    .parse()
                    .map_err(|_| InputError(format!("WB_SEED={seed}: not an unsigned integer")))?;
            }
            if !suite.is_empty() {
                cfg.suites = suite.clone();
            }
            let summary = corpus::run(&cfg)?;
            let v = serde_json::from_str(&summary.to_json()).expect("summary json");
            Report::verdict(summary.all_pass(), summary.to_text().trim_end().to_owned(), v)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs {n}: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(r) => {
            let body = match cli.global.format {
                Format::Text => r.text,
                Format::Json => pretty(&r.json),
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if r.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
