use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hlf_core::adeles::{cohomology_p1, local_factor_dim2, weak_approx, SurfaceFlag};
use hlf_core::chains::{embed, hl};
use hlf_core::coeffbase::FqElem;
use hlf_core::milnor::{k2q_decompose, tame_symbol, verify_relations, Homomorphism, Symbol, SymbolSum};
use hlf_core::structure::{additive_expand, classify, multiplicative_expand, unit_decompose, CanonicalForm};
use hlf_core::tower::{Element, Precision, TowerDesc};

use crate::input::{self, FIELD_GEN};
use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "hlf", version, about = "Exact arithmetic in higher-dimensional local fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PrecArgs {
    /// Laurent levels are known modulo t^N.
    #[arg(long = "prec-t", default_value_t = 8)]
    pub prec_t: i64,
    /// Absolute p-adic precision of coefficients.
    #[arg(long = "prec-p", default_value_t = 6)]
    pub prec_p: i64,
    /// Tracked exponent window lo:hi of curly levels.
    #[arg(long, default_value = "-8:8", allow_hyphen_values = true)]
    pub window: String,
}

#[derive(Args, Debug, Clone)]
pub struct TowerArgs {
    /// Tower descriptor, e.g. `L(C(Qp 5))`.
    #[arg(long)]
    pub tower: String,
    #[command(flatten)]
    pub prec: PrecArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ElementArgs {
    #[command(flatten)]
    pub tower: TowerArgs,
    /// Element expression over the tower's variables, `p` and `g`.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
}

#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    /// `Zt p`, `Z p` or `Fq q x,y`.
    #[arg(long)]
    pub ring: String,
    /// Comma separated regular sequence, e.g. `p,t`.
    #[arg(long)]
    pub flag: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression.
    Eval(ElementArgs),
    /// Valuation of the outermost level.
    Val(ElementArgs),
    /// Image in the first residue field.
    Residue(ElementArgs),
    /// Additive expansion in the canonical local parameters.
    Expand(ElementArgs),
    /// Multiplicative expansion in the canonical local parameters.
    Mexpand(ElementArgs),
    /// Unit times a monomial in the local parameters.
    Decompose(ElementArgs),
    /// Canonical shape of a tower.
    Classify {
        #[arg(long)]
        tower: String,
    },
    /// Tame symbol of two elements.
    Tame {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Sign and tame components of the symbol {x, y} of rationals.
    K2q {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Field attached to a regular chain.
    Hl(ChainArgs),
    /// Image of a ring element in the field of a regular chain.
    Embed {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        prec: PrecArgs,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Adelic computations.
    #[command(subcommand)]
    Adele(AdeleCommand),
    /// Relation checks for a symbol homomorphism, seeded by HLF_SEED.
    Verify {
        #[arg(long, value_enum)]
        hom: HomKind,
        /// Required for `tame` and `border`.
        #[arg(long)]
        tower: Option<String>,
        #[command(flatten)]
        prec: PrecArgs,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum AdeleCommand {
    /// Cohomology of O(D) on the projective line.
    H {
        #[arg(long)]
        q: u64,
        /// E.g. `3*inf, -1*(u^2+u+1)`.
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// A global function close to the given targets.
    Approx {
        #[arg(long)]
        q: u64,
        /// `point:function`, repeatable, e.g. `(u+1):u^2`.
        #[arg(long = "target", required = true, allow_hyphen_values = true)]
        targets: Vec<String>,
        /// Required valuation of each difference.
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
    },
    /// Local field of a flag on the affine plane.
    #[command(name = "dim2-factor")]
    Dim2Factor {
        #[arg(long)]
        q: u64,
        /// `s=a` or `u=b`.
        #[arg(long)]
        curve: String,
        /// Monic irreducible in the free coordinate.
        #[arg(long)]
        point: String,
        /// Optional function of s and u to embed.
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        #[command(flatten)]
        prec: PrecArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum HomKind {
    K2q,
    Sign,
    Tame,
    Border,
}

fn caps(tower: &TowerDesc, prec: &PrecArgs) -> Result<Precision, CliError> {
    let caps = Precision::uniform(tower, prec.prec_t, input::window(&prec.window)?, prec.prec_p);
    caps.validate(tower).map_err(CliError::input)?;
    Ok(caps)
}

fn tower_and_caps(args: &TowerArgs) -> Result<(TowerDesc, Precision), CliError> {
    let tower = input::tower(&args.tower)?;
    let caps = caps(&tower, &args.prec)?;
    Ok((tower, caps))
}

fn element(args: &ElementArgs) -> Result<Element, CliError> {
    let (tower, caps) = tower_and_caps(&args.tower)?;
    input::element(&args.expr, &tower, &caps)
}

fn digit(x: &FqElem) -> String {
    x.to_expr(FIELD_GEN)
}

fn describe(tower: &TowerDesc) -> Value {
    json!({ "tower": tower.to_string(), "pretty": tower.pretty() })
}

fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn form(f: &CanonicalForm) -> Value {
    match f {
        CanonicalForm::EqualCharFq { q, n } => json!({ "kind": "equal-char-fq", "q": q, "n": n }),
        CanonicalForm::EqualCharZero { local_field, levels } => {
            json!({ "kind": "equal-char-zero", "local_field": local_field.to_string(), "levels": levels })
        }
        CanonicalForm::MixedChar { q, r, n } => json!({ "kind": "mixed-char", "q": q, "r": r, "n": n }),
    }
}

/// Executes one command. `seed` is the raw value of `HLF_SEED`.
pub fn run(cmd: &Command, seed: Option<&str>) -> Result<Value, CliError> {
    match cmd {
        Command::Eval(a) => {
            let e = element(a)?;
            Ok(with(describe(e.tower()), json!({ "element": e.to_expr() })))
        }
        Command::Val(a) => Ok(json!({ "valuation": element(a)?.valuation()? })),
        Command::Residue(a) => {
            let r = element(a)?.residue()?;
            Ok(with(describe(r.tower()), json!({ "element": r.to_expr() })))
        }
        Command::Expand(a) => {
            let e = additive_expand(&element(a)?)?;
            let digits: Vec<Value> =
                e.digits.iter().map(|(i, d)| json!({ "exponents": i, "digit": digit(d) })).collect();
            Ok(with(describe(&e.tower), json!({ "digits": digits })))
        }
        Command::Mexpand(a) => {
            let m = multiplicative_expand(&element(a)?)?;
            let factors: Vec<Value> =
                m.factors.iter().map(|(i, d)| json!({ "exponents": i, "digit": digit(d) })).collect();
            Ok(with(
                describe(&m.tower),
                json!({ "exponents": m.exponents, "leading": digit(&m.leading), "factors": factors }),
            ))
        }
        Command::Decompose(a) => {
            let (exps, unit) = unit_decompose(&element(a)?)?;
            Ok(with(describe(unit.tower()), json!({ "exponents": exps, "unit": unit.to_expr() })))
        }
        Command::Classify { tower } => {
            let t = input::tower(tower)?;
            Ok(with(describe(&t), json!({ "form": form(&classify(&t)?) })))
        }
        Command::Tame { tower, x, y } => {
            let (t, c) = tower_and_caps(tower)?;
            let s = tame_symbol(&input::element(x, &t, &c)?, &input::element(y, &t, &c)?)?;
            Ok(with(describe(s.tower()), json!({ "element": s.to_expr() })))
        }
        Command::K2q { x, y } => {
            let s = Symbol::new(vec![input::rational(x)?, input::rational(y)?]).map_err(CliError::input)?;
            let image = k2q_decompose(&SymbolSum::single(s))?;
            let components: Map<String, Value> =
                image.components.iter().map(|(p, c)| (p.to_string(), json!(c.index()))).collect();
            Ok(json!({ "sign": image.sign, "components": components }))
        }
        Command::Hl(c) => Ok(describe(&hl(&input::chain(&c.ring, &c.flag)?)?)),
        Command::Embed { chain, prec, expr } => {
            let c = input::chain(&chain.ring, &chain.flag)?;
            let tower = hl(&c)?;
            let caps = caps(&tower, prec)?;
            let f = input::ring_element(expr, c.ring())?;
            let e = embed(&c, &f, &caps)?;
            Ok(with(describe(&tower), json!({ "element": e.to_expr() })))
        }
        Command::Adele(a) => adele(a),
        Command::Verify { hom, tower, prec, trials } => {
            let seed = match seed {
                None => 0,
                Some(s) => s.trim().parse().map_err(|_| CliError::usage(format!("HLF_SEED={s:?} is not an integer")))?,
            };
            let h = match hom {
                HomKind::K2q => Homomorphism::K2Q,
                HomKind::Sign => Homomorphism::Sign,
                HomKind::Tame | HomKind::Border => {
                    let src = tower.as_deref().ok_or_else(|| CliError::usage("this homomorphism needs --tower"))?;
                    let t = input::tower(src)?;
                    let c = caps(&t, prec)?;
                    if matches!(hom, HomKind::Tame) {
                        Homomorphism::Tame(t, c)
                    } else {
                        Homomorphism::Border(t, c)
                    }
                }
            };
            let r = verify_relations(&h, *trials, seed)?;
            Ok(json!({
                "seed": seed,
                "trials": r.trials,
                "skipped": r.skipped,
                "multilinear_failures": r.multilinear_failures,
                "steinberg_failures": r.steinberg_failures,
                "minus_failures": r.minus_failures,
                "antisymmetry_failures": r.antisymmetry_failures,
                "pass": r.all_pass(),
            }))
        }
    }
}

fn adele(cmd: &AdeleCommand) -> Result<Value, CliError> {
    match cmd {
        AdeleCommand::H { q, divisor } => {
            let field = input::field(*q)?;
            let r = cohomology_p1(&input::divisor(divisor, &field)?)?;
            Ok(json!({ "h0": r.h0, "h1": r.h1, "stable": r.stable }))
        }
        AdeleCommand::Approx { q, targets, c } => {
            let field = input::field(*q)?;
            let mut parsed = Vec::with_capacity(targets.len());
            for t in targets {
                let (pt, f) = t
                    .rsplit_once(':')
                    .ok_or_else(|| CliError::usage(format!("bad target {t:?}; expected point:function")))?;
                parsed.push((input::point(pt, &field)?, input::ratfn(f, &field, "u")?));
            }
            let f = weak_approx(&field, &parsed, *c)?;
            Ok(json!({ "element": f.to_expr("u") }))
        }
        AdeleCommand::Dim2Factor { q, curve, point, expr, prec } => {
            let field = input::field(*q)?;
            let curve = input::curve(curve, &field)?;
            let free = match curve {
                hlf_core::adeles::Curve::S(_) => "u",
                hlf_core::adeles::Curve::U(_) => "s",
            };
            let flag = SurfaceFlag::new(curve, input::poly(point, &field, free)?).map_err(CliError::input)?;
            let factor = local_factor_dim2(&flag)?;
            let mut out = with(describe(&factor.tower), json!({ "residue_field": factor.residue_field().q() }));
            if let Some(src) = expr {
                let caps = caps(&factor.tower, prec)?;
                let ring = hlf_core::adeles::surface_ring(&field);
                let f = input::ring_element(src, &ring)?;
                out = with(out, json!({ "element": factor.embed(&f, &caps)?.to_expr() }));
            }
            Ok(out)
        }
    }
}
