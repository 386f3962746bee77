use lielat_core::format::{load_lattice, parse_matrix_spec, parse_vector_json};
use lielat_core::padic::format_rational;
use lielat_core::stability::{WitnessSearch, DEFAULT_BUDGET};
use lielat_core::{
    automorphism_check, bch_mul, classify_mod_pk, enum_subalgebras, exhaustive_stability_check, group_index_check,
    index_ratio, iso_index_check, search_unstable_witness, serre_verdict, smith_p, stability_certificate, BchConfig,
    Error, GroupElement, LieLattice, QMatrix, Result, Status, Sublattice,
};
use serde_json::{json, Map, Value};

use crate::{Command, Target};

/// Enumeration and oracle work is cheap per unit, so it gets a larger default
/// than the witness search.
const DEFAULT_ENUM_BUDGET: u64 = 1_000_000;

pub struct Outcome {
    pub body: Map<String, Value>,
    pub inconclusive: bool,
}

fn done(body: Value) -> Result<Outcome> {
    undecided(body, false)
}

fn undecided(body: Value, inconclusive: bool) -> Result<Outcome> {
    let Value::Object(body) = body else {
        return Err(Error::Internal("report is not a JSON object".into()));
    };
    Ok(Outcome { body, inconclusive })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serialises")
}

fn load(t: &Target) -> Result<LieLattice> {
    load_lattice(&t.lattice, t.p)
}

fn matrix(l: &LieLattice, spec: &str) -> Result<QMatrix> {
    parse_matrix_spec(spec, l.dim(), l.p())
}

fn sub<'a>(l: &'a LieLattice, spec: &str) -> Result<Sublattice<'a>> {
    Sublattice::new(l, matrix(l, spec)?)
}

fn vector(l: &LieLattice, s: &str) -> Result<Vec<lielat_core::Rational>> {
    let v = parse_vector_json(s)?;
    if v.len() != l.dim() {
        return Err(Error::InvalidInput(format!(
            "vector has {} coordinates, expected {}",
            v.len(),
            l.dim()
        )));
    }
    Ok(v)
}

fn summary(l: &LieLattice) -> Value {
    json!({ "name": l.name(), "p": l.p().get(), "dim": l.dim() })
}

pub fn run(cmd: &Command, budget: Option<u64>) -> Result<Outcome> {
    let search_budget = budget.unwrap_or(DEFAULT_BUDGET);
    let enum_budget = budget.unwrap_or(DEFAULT_ENUM_BUDGET);
    match cmd {
        Command::Validate(t) => {
            let l = load(t)?;
            done(json!({ "valid": true, "lattice": summary(&l) }))
        }
        Command::Killing(t) => done(to_value(&load(t)?.killing_matrix()?)),
        Command::Semisimple(t) => {
            let c = load(t)?.is_semisimple()?;
            done(json!({
                "semisimple": c.semisimple,
                "det_killing": format_rational(&c.det_killing),
                "vp_det_killing": c.vp_det_killing,
            }))
        }
        Command::Powerful(t) => done(json!({ "powerful": load(t)?.is_powerful() })),
        Command::Series(t) => done(to_value(&load(t)?.series_profile())),
        Command::Derivations(t) => done(to_value(&load(t)?.derivations())),
        Command::Simplicity(t) => done(to_value(&load(t)?.simplicity_report()?)),
        Command::Index { target, sub: spec } => {
            let l = load(target)?;
            let m = sub(&l, spec)?;
            done(json!({
                "index_exponent": m.index(),
                "hnf": m.hnf(),
                "elementary_divisors": smith_p(m.basis(), l.p())?.exponents,
                "subalgebra": m.is_subalgebra(),
            }))
        }
        Command::Gram { target, sub: spec } => {
            let l = load(target)?;
            let m = sub(&l, spec)?;
            let gram = m.gram()?;
            let smith = if gram.rank() < gram.rows() {
                Value::Null
            } else {
                to_value(&smith_p(&gram, l.p())?)
            };
            done(json!({ "gram": gram, "elementary_divisors": smith }))
        }
        Command::IsoCheck {
            target,
            sub: m,
            onto,
            map,
        } => {
            let l = load(target)?;
            let (m, n, phi) = (sub(&l, m)?, sub(&l, onto)?, matrix(&l, map)?);
            let report = iso_index_check(&l, &m, &n, &phi)?;
            let ratio = index_ratio(&l, &m, &n, &phi)?;
            done(json!({
                "index_m": report.index_m,
                "index_n": report.index_n,
                "equal": report.equal,
                "semisimple": report.semisimple,
                "gram_identity": report.gram_identity,
                "ratio_valuation": ratio.ratio_valuation,
                "ratio": format_rational(&ratio.ratio(l.p())),
            }))
        }
        Command::Serre { target, map } => {
            let l = load(target)?;
            let auto = automorphism_check(&l, &matrix(&l, map)?)?;
            let verdict = serre_verdict(&l, &auto)?;
            let mut body = to_value(&verdict);
            body["matrix"] = to_value(&auto.matrix);
            done(body)
        }
        Command::Stable { target, candidates } => {
            let l = load(target)?;
            let extra = candidates.iter().map(|c| matrix(&l, c)).collect::<Result<Vec<_>>>()?;
            let v = stability_certificate(&l, &extra, search_budget);
            undecided(to_value(&v), v.status == Status::Unknown)
        }
        Command::WitnessSearch { target, candidates } => {
            let l = load(target)?;
            let extra = candidates.iter().map(|c| matrix(&l, c)).collect::<Result<Vec<_>>>()?;
            let w: WitnessSearch = search_unstable_witness(&l, &extra, search_budget);
            let inconclusive = w.witness.is_none() && w.budget_exhausted;
            undecided(to_value(&w), inconclusive)
        }
        Command::Enum {
            target,
            k,
            summary: short,
        } => {
            let l = load(target)?;
            let report = enum_subalgebras(&l, *k, enum_budget)?;
            let mut body = to_value(&report);
            body["total"] = json!(report.total());
            if *short {
                body.as_object_mut().expect("object").remove("sublattices");
            }
            done(body)
        }
        Command::Classify { target, subs, e } => {
            let l = load(target)?;
            let items = subs.iter().map(|s| sub(&l, s)).collect::<Result<Vec<_>>>()?;
            done(to_value(&classify_mod_pk(&l, &items, *e)?))
        }
        Command::OracleCheck { target, k, e } => {
            let l = load(target)?;
            done(to_value(&exhaustive_stability_check(&l, *k, *e, enum_budget)?))
        }
        Command::Bch { target, x, y, e } => {
            let l = load(target)?;
            let p = l.p();
            let g = GroupElement::new(vector(&l, x)?, *e, p)?;
            let h = GroupElement::new(vector(&l, y)?, *e, p)?;
            let product = bch_mul(&l, &g, &h)?.reduced(p);
            done(json!({
                "config": BchConfig::for_lattice(&l)?,
                "product": product,
            }))
        }
        Command::GroupIndex { target, sub: spec, e } => {
            let l = load(target)?;
            let m = sub(&l, spec)?;
            done(to_value(&group_index_check(&l, &m, *e, enum_budget)?))
        }
        Command::Report(t) => report(&load(t)?, search_budget),
    }
}

fn report(l: &LieLattice, budget: u64) -> Result<Outcome> {
    let der = l.derivations();
    let stability = stability_certificate(l, &[], budget);
    let group = match BchConfig::for_lattice(l) {
        Ok(c) => to_value(&c),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let body = json!({
        "lattice": summary(l),
        "series": l.series_profile(),
        "killing": l.killing_matrix()?,
        "semisimple": l.is_semisimple()?.semisimple,
        "powerful": l.is_powerful(),
        "simplicity": l.simplicity_report()?,
        "derivations": {
            "dim": der.dim,
            "nilpotent": der.nilpotent,
            "nilpotent_operators": der.nilpotent_operators,
            "chain_length": der.chain_length,
        },
        "stability": stability,
        "group_law": group,
    });
    undecided(body, stability.status == Status::Unknown)
}

/// `{"error": {...}}` with a stable `kind` and whatever structured detail
/// the error carries.
pub fn error_body(e: &Error) -> Map<String, Value> {
    let mut err = Map::new();
    err.insert("kind".into(), json!(e.kind()));
    err.insert("message".into(), json!(e.to_string()));
    match e {
        Error::NotALieAlgebra { triple, jacobiator } => {
            err.insert("triple".into(), json!([triple.0, triple.1, triple.2]));
            err.insert(
                "jacobiator".into(),
                json!(jacobiator.iter().map(format_rational).collect::<Vec<_>>()),
            );
        }
        Error::NotALattice { i, j, k } => {
            err.insert("triple".into(), json!([i, j, k]));
        }
        Error::NotPIntegral { row, col } => {
            err.insert("entry".into(), json!([row, col]));
        }
        Error::Budget { partial } => {
            err.insert("partial".into(), json!(partial));
        }
        _ => {}
    }
    let mut body = Map::new();
    body.insert("error".into(), Value::Object(err));
    body
}
