//! Evaluates a checked script against the core engine.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use regulus::asymptotics::{
    cel_sequences, kodiyalam_check, limit_minus, linear_tail, power_invariants, reduction_degree,
    rees_package, regpowgeo_crosscheck, PowerOptions, Status, DEFAULT_P_MAX, DEFAULT_T_MAX,
};
use regulus::budget::with_budget;
use regulus::cohomology::{
    a_invariants, cd_irrelevant, fiber_report, flatness_defect, max_fiber_dimension, module_report, origin,
    support_containment, top_base_change, tor_base, AValue,
};
use regulus::parse::parse_polynomial;
use regulus::resolution::{BaseMode, Resolution};
use regulus::{Coeff, Error, FreeModule, Polynomial, RingRef, Submodule, Vector};
use serde_json::{json, Map, Value};

use crate::report::{Outcome, Report, ResultEntry};
use crate::script::{check, Command, FieldSpec, Item, OptValue, Script, ScriptError, StmtKind};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 10;

/// Run-wide settings; command options take precedence over these.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub seed: Option<u64>,
    pub tmax: Option<usize>,
    pub pmax: Option<usize>,
    pub samples: Option<usize>,
    pub field: Option<FieldSpec>,
    pub parallel: bool,
    /// Wall-clock limit per command, and per cell inside power tables.
    pub budget: Option<Duration>,
}

impl Settings {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

/// A command failure, classified for the exit code.
#[derive(Debug)]
enum Failure {
    /// A computed check did not hold; the payload is still reported.
    Check(Value, String),
    Engine(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type CmdResult = Result<Value, Failure>;

struct Binding {
    module: Submodule,
}

/// Runs every command of `script` in order; with `settings.parallel` the
/// commands run concurrently and are reported in script order.
pub fn run(script: &Script, settings: &Settings) -> Result<Report, ScriptError> {
    let checked = check(script, settings.field.as_ref())?;
    let mut env: HashMap<String, Binding> = HashMap::new();
    let mut commands = Vec::new();
    for s in &script.stmts {
        match &s.kind {
            StmtKind::Ring(_) => {}
            StmtKind::Bind(b) => {
                let ring = &checked.rings[&b.ring];
                let module = build_binding(ring, &b.items).map_err(|e| ScriptError {
                    line: s.pos.line,
                    column: s.pos.column,
                    message: e.to_string(),
                })?;
                env.insert(b.name.clone(), Binding { module });
            }
            StmtKind::Command(c) => commands.push(c.clone()),
        }
    }
    let exec = |c: &Command| execute(c, &env, settings);
    let results: Vec<ResultEntry> =
        if settings.parallel { commands.par_iter().map(exec).collect() } else { commands.iter().map(exec).collect() };
    let mut holes = Vec::new();
    for r in &results {
        holes.extend(r.holes.iter().map(|h| format!("{}: {h}", r.statement)));
    }
    Ok(Report { engine: engine(), seed: settings.seed(), results, holes })
}

pub fn engine() -> String {
    format!("regulus {}", env!("CARGO_PKG_VERSION"))
}

fn build_binding(ring: &RingRef, items: &[Item]) -> regulus::Result<Submodule> {
    let parse_all = |ps: &[crate::script::PolyText]| -> regulus::Result<Vec<Polynomial>> {
        ps.iter().map(|p| parse_polynomial(ring, &p.text)).collect()
    };
    if items.iter().all(|i| matches!(i, Item::Poly(_))) {
        let polys: Vec<Polynomial> = items
            .iter()
            .map(|i| match i {
                Item::Poly(p) => parse_polynomial(ring, &p.text),
                Item::Vector(_) => unreachable!(),
            })
            .collect::<regulus::Result<_>>()?;
        return Submodule::ideal(ring, &polys);
    }
    let rows: Vec<Vec<Polynomial>> = items
        .iter()
        .map(|i| match i {
            Item::Poly(p) => parse_all(std::slice::from_ref(p)),
            Item::Vector(v) => parse_all(v),
        })
        .collect::<regulus::Result<_>>()?;
    let twists = infer_twists(&rows)?;
    let free = FreeModule::new(ring, twists);
    let gens = rows.iter().map(|r| Vector::from_polys(&free, r)).collect::<regulus::Result<Vec<_>>>()?;
    Submodule::new(&free, gens)
}

/// Twists making every generator homogeneous: each nonzero entry `g_c` of a
/// generator `g` forces `deg g_c + twist_c = deg g`. Components are
/// propagated from a zero twist on their first coordinate.
fn infer_twists(rows: &[Vec<Polynomial>]) -> regulus::Result<Vec<i64>> {
    let rank = rows.first().map_or(0, |r| r.len());
    let mut twist: Vec<Option<i64>> = vec![None; rank];
    let mut gen_deg: Vec<Option<i64>> = vec![None; rows.len()];
    let inhom = || Error::Inhomogeneous("module generators admit no consistent grading".into());
    let mut degs = Vec::with_capacity(rows.len());
    for r in rows {
        let d: Vec<Option<i64>> = r
            .iter()
            .map(|p| if p.is_zero() { Ok(None) } else { p.degree().map(Some).ok_or_else(inhom) })
            .collect::<regulus::Result<_>>()?;
        degs.push(d);
    }
    for seed in 0..rank {
        if twist[seed].is_some() {
            continue;
        }
        twist[seed] = Some(0);
        let mut changed = true;
        while changed {
            changed = false;
            for (g, d) in degs.iter().enumerate() {
                for (c, dc) in d.iter().enumerate() {
                    let Some(dc) = dc else { continue };
                    match (twist[c], gen_deg[g]) {
                        (Some(t), None) => {
                            gen_deg[g] = Some(dc + t);
                            changed = true;
                        }
                        (None, Some(e)) => {
                            twist[c] = Some(e - dc);
                            changed = true;
                        }
                        (Some(t), Some(e)) if dc + t != e => return Err(inhom()),
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(twist.into_iter().map(|t| t.unwrap_or(0)).collect())
}

fn execute(c: &Command, env: &HashMap<String, Binding>, settings: &Settings) -> ResultEntry {
    let start = Instant::now();
    let mut holes = Vec::new();
    let result = with_budget_failure(settings.budget, || dispatch(c, env, settings, &mut holes));
    let timing_ms = start.elapsed().as_millis() as u64;
    let statement = c.to_string();
    let (outcome, payload, error) = match result {
        Ok(p) if holes.is_empty() => (Outcome::Ok, p, None),
        Ok(p) => (Outcome::Hole, p, None),
        Err(Failure::Check(p, m)) => (Outcome::Failed, p, Some(m)),
        Err(Failure::Engine(Error::Budget)) => {
            holes.push("command".into());
            (Outcome::Hole, Value::Null, Some(Error::Budget.to_string()))
        }
        Err(Failure::Engine(e @ Error::Verification(_))) => (Outcome::Failed, Value::Null, Some(e.to_string())),
        Err(Failure::Engine(e)) => (Outcome::Error, Value::Null, Some(e.to_string())),
        Err(Failure::Usage(m)) => (Outcome::Error, Value::Null, Some(m)),
    };
    ResultEntry { statement, outcome, payload, error, timing_ms, holes }
}

fn with_budget_failure(limit: Option<Duration>, f: impl FnOnce() -> CmdResult) -> CmdResult {
    let mut slot = None;
    let r = with_budget(limit, || {
        slot = Some(f());
        Ok(())
    });
    match (r, slot) {
        (_, Some(v)) => v,
        (Err(e), None) => Err(e.into()),
        (Ok(()), None) => unreachable!(),
    }
}

struct Opts<'a> {
    cmd: &'a Command,
}

impl<'a> Opts<'a> {
    fn get(&self, key: &str) -> Option<&'a OptValue> {
        self.cmd.options.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn int(&self, key: &str) -> Result<Option<i64>, Failure> {
        match self.get(key) {
            None => Ok(None),
            Some(OptValue::Int(v)) => Ok(Some(*v)),
            Some(other) => Err(Failure::Usage(format!("option {key} expects an integer, got {other}"))),
        }
    }

    fn count(&self, key: &str, fallback: Option<usize>, default: usize) -> Result<usize, Failure> {
        match self.int(key)? {
            Some(v) if v < 0 => Err(Failure::Usage(format!("option {key} must be non-negative"))),
            Some(v) => Ok(v as usize),
            None => Ok(fallback.unwrap_or(default)),
        }
    }

    fn point(&self, key: &str, ring: &RingRef) -> Result<Option<Vec<Coeff>>, Failure> {
        match self.get(key) {
            None => Ok(None),
            Some(OptValue::Tuple(v)) => v
                .iter()
                .map(|s| {
                    let p = parse_polynomial(ring, s)?;
                    if !p.is_constant() {
                        return Err(Failure::Usage(format!("{s} is not a constant")));
                    }
                    Ok(p.constant_term())
                })
                .collect::<Result<Vec<_>, Failure>>()
                .map(Some),
            Some(OptValue::Int(v)) => Ok(Some(vec![ring.field().from_i64(*v)])),
            Some(other) => Err(Failure::Usage(format!("option {key} expects a point, got {other}"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, Failure> {
        Ok(self.int(key)?.unwrap_or(0) != 0)
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<(), Failure> {
        for (k, _) in &self.cmd.options {
            if !allowed.contains(&k.as_str()) {
                return Err(Failure::Usage(format!("{} does not take option {k}", self.cmd.name)));
            }
        }
        Ok(())
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn av(a: AValue) -> Value {
    to_value(&a)
}

fn base_mode(ring: &RingRef) -> BaseMode {
    if ring.is_local_base() {
        BaseMode::Local
    } else {
        BaseMode::Field
    }
}

fn require_field_base(m: &Submodule, what: &str) -> Result<(), Failure> {
    if m.ring().has_base() {
        return Err(Failure::Usage(format!("{what} needs a ring without base variables; use fiber or tor on families")));
    }
    Ok(())
}

fn dispatch(c: &Command, env: &HashMap<String, Binding>, s: &Settings, holes: &mut Vec<String>) -> CmdResult {
    let m = &env[&c.target].module;
    let ring = m.ring().clone();
    let o = Opts { cmd: c };
    let other = |key: &str| -> Result<Option<&Submodule>, Failure> {
        match o.get(key) {
            None => Ok(None),
            Some(OptValue::Ident(id)) => Ok(Some(&env[id].module)),
            Some(v) => Err(Failure::Usage(format!("option {key} expects an identifier, got {v}"))),
        }
    };
    let as_ideal = || -> Result<&Submodule, Failure> {
        if !m.is_ideal() {
            return Err(Failure::Usage(format!("{} needs an ideal", c.name)));
        }
        Ok(m)
    };
    match c.name.as_str() {
        "gb" => {
            o.reject_unknown(&[])?;
            let gb = m.gb()?;
            let basis: Vec<String> = m.reduced()?.gens().iter().map(display_vector).collect();
            Ok(json!({ "basis": basis, "verified": gb.verify()? }))
        }
        "resolve" => {
            o.reject_unknown(&[])?;
            let res = Resolution::of_quotient(m, base_mode(&ring))?;
            let betti = res.betti();
            let euler = if ring.has_base() {
                Value::Null
            } else {
                json!(res.euler_series()? == m.quotient_series()?)
            };
            let payload = json!({
                "betti": betti.to_map(),
                "table": betti.to_string(),
                "reg": betti.regularity(),
                "pd": betti.pd(),
                "minimal": res.is_minimal(),
                "euler": euler,
            });
            if !res.is_complex()? || euler == json!(false) {
                return Err(Failure::Check(payload, "resolution failed its consistency checks".into()));
            }
            Ok(payload)
        }
        "reg" => {
            o.reject_unknown(&[])?;
            if ring.has_base() {
                let res = Resolution::of_quotient(m, base_mode(&ring))?;
                let mode = if ring.is_local_base() { "local" } else { "graded" };
                return Ok(json!({ "reg": res.betti().regularity(), "base": mode }));
            }
            let r = module_report(Vec::new(), m)?;
            Ok(json!({ "reg": av(r.reg), "a": to_value(&r.a), "dim": r.dim, "hilbert_poly": r.hilbert_poly }))
        }
        "ainv" => {
            o.reject_unknown(&[])?;
            require_field_base(m, "ainv")?;
            let a = a_invariants(m)?;
            Ok(json!({ "a": to_value(&a), "reg": av(a.regularity()), "a_star": av(a.a_star()), "cd": a.cd() }))
        }
        "hilbert" => {
            o.reject_unknown(&[])?;
            require_field_base(m, "hilbert")?;
            let hs = m.quotient_series()?;
            let numerator: Map<String, Value> =
                hs.numerator().iter().map(|(k, v)| (k.to_string(), json!(*v as i64))).collect();
            let mut payload = json!({ "numerator": numerator, "dim": hs.dimension() });
            if ring.is_standard_graded() {
                let hp = hs.hilbert_polynomial()?;
                let coeffs: Vec<String> = hp.monomial_coefficients().iter().map(|c| c.to_string()).collect();
                payload["hilbert_poly"] = json!(coeffs);
            }
            Ok(payload)
        }
        "fiber" => {
            o.reject_unknown(&["at"])?;
            let point = o.point("at", &ring)?.unwrap_or_else(|| origin(&ring));
            Ok(to_value(&fiber_report(m, &point)?))
        }
        "tor" => {
            o.reject_unknown(&["q"])?;
            let q = o.int("q")?.unwrap_or(1);
            let tor = tor_base(m, q)?;
            let cd = cd_irrelevant(&tor)?;
            let mut payload = json!({ "q": q, "cd": cd, "rank": tor.ambient().rank() });
            if tor.ambient().rank() > 0 {
                let a = a_invariants(&tor)?;
                payload["a"] = to_value(&a);
                payload["reg"] = av(a.regularity());
            }
            Ok(payload)
        }
        "cd" => {
            o.reject_unknown(&[])?;
            require_field_base(m, "cd")?;
            Ok(json!({ "cd": cd_irrelevant(m)? }))
        }
        "maxfiber" => {
            o.reject_unknown(&["trials", "at"])?;
            let trials = o.count("trials", s.samples, DEFAULT_SAMPLES)?;
            let user: Vec<Vec<Coeff>> = o.point("at", &ring)?.into_iter().collect();
            Ok(to_value(&max_fiber_dimension(m, trials, s.seed(), &user)?))
        }
        "flatness" => {
            o.reject_unknown(&["p1", "p2", "threshold"])?;
            let p1 = o.point("p1", &ring)?.unwrap_or_else(|| origin(&ring));
            let Some(p2) = o.point("p2", &ring)? else {
                return Err(Failure::Usage("flatness needs p2=(..)".into()));
            };
            let threshold = o.int("threshold")?.unwrap_or(1);
            let f = flatness_defect(m, &p1, &p2, threshold)?;
            let coeffs = |h: &regulus::hilbert::HilbertPolynomial| -> Vec<String> {
                h.monomial_coefficients().iter().map(|c| c.to_string()).collect()
            };
            Ok(json!({
                "first": coeffs(&f.first),
                "second": coeffs(&f.second),
                "difference": coeffs(&f.difference),
                "degree": f.degree,
                "within": f.within,
            }))
        }
        "basechange" => {
            o.reject_unknown(&[])?;
            let tb = top_base_change(m)?;
            let mut payload = to_value(&tb);
            payload["agrees"] = json!(tb.agrees());
            if !tb.agrees() {
                return Err(Failure::Check(payload, "top cohomology does not commute with base change".into()));
            }
            Ok(payload)
        }
        "supptor" => {
            o.reject_unknown(&["q", "maxexp"])?;
            let q = o.int("q")?.unwrap_or(1);
            let max_exp = o.count("maxexp", None, 10)? as u32;
            let exps = support_containment(m, q, max_exp)?;
            let payload = json!({ "q": q, "exponents": exps });
            if exps.iter().any(|e| e.is_none()) {
                return Err(Failure::Check(payload, "support containment not witnessed".into()));
            }
            Ok(payload)
        }
        "reduction" => {
            o.reject_unknown(&["pmax", "M"])?;
            let p_max = o.count("pmax", s.pmax, DEFAULT_P_MAX)?;
            Ok(to_value(&reduction_degree(as_ideal()?, other("M")?, p_max)?))
        }
        "powers" => {
            o.reject_unknown(&["tmax", "saturated", "d"])?;
            let t_max = o.count("tmax", s.tmax, DEFAULT_T_MAX)?;
            let opts = PowerOptions { saturated: o.flag("saturated")?, cell_budget: s.budget };
            let table = power_invariants(as_ideal()?, t_max, opts)?;
            holes.extend(table.holes.iter().cloned());
            let reg: Vec<AValue> = table.reg_sequence().into_iter().map_while(|x| x).collect();
            let tail = if reg.len() >= 4 { Some(to_value(&linear_tail(&reg)?)) } else { None };
            let mut payload = json!({ "table": to_value(&table), "reg": reg, "tail": tail });
            if let Some(d) = o.int("d")? {
                payload["limit"] = limit_minus(&table.reg_sequence(), d).to_json();
            }
            Ok(payload)
        }
        "kodiyalam" => {
            o.reject_unknown(&["tmax", "M"])?;
            let t_max = o.count("tmax", s.tmax, DEFAULT_T_MAX)?;
            let rows = kodiyalam_check(as_ideal()?, other("M")?, t_max)?;
            let ok = rows.iter().all(|r| r.3);
            let rows: Vec<Value> =
                rows.iter().map(|(t, end, bound, ok)| json!({ "t": t, "end": end, "bound": bound, "ok": ok })).collect();
            let payload = json!({ "rows": rows, "holds": ok });
            if !ok {
                return Err(Failure::Check(payload, "Kodiyalam bound violated".into()));
            }
            Ok(payload)
        }
        "rees" => {
            o.reject_unknown(&["samples", "at"])?;
            let samples = o.count("samples", s.samples, DEFAULT_SAMPLES)?;
            let user: Vec<Vec<Coeff>> = o.point("at", &ring)?.into_iter().collect();
            Ok(to_value(&rees_package(as_ideal()?, samples, s.seed(), &user)?))
        }
        "crosscheck" => {
            o.reject_unknown(&["tmax", "samples", "at"])?;
            let t_max = o.count("tmax", s.tmax, DEFAULT_T_MAX)?;
            let samples = o.count("samples", s.samples, DEFAULT_SAMPLES)?;
            let user: Vec<Vec<Coeff>> = o.point("at", &ring)?.into_iter().collect();
            let cc = regpowgeo_crosscheck(as_ideal()?, t_max, samples, s.seed(), &user, s.budget)?;
            holes.extend(cc.table.holes.iter().cloned());
            let payload = to_value(&cc);
            let failed: Vec<&str> =
                cc.clauses.iter().filter(|v| v.status == Status::Failed).map(|v| v.clause.as_str()).collect();
            if !failed.is_empty() {
                return Err(Failure::Check(payload, format!("clauses failed: {}", failed.join(","))));
            }
            if !cc.trichotomy.agrees {
                return Err(Failure::Check(payload, "trichotomy disagrees with the sampled fibers".into()));
            }
            Ok(payload)
        }
        "cel" => {
            o.reject_unknown(&["pmax", "J"])?;
            let p_max = o.count("pmax", s.pmax, DEFAULT_P_MAX)?;
            let r = cel_sequences(as_ideal()?, other("J")?, p_max)?;
            let payload = to_value(&r);
            if r.subadditivity.iter().any(|x| !x.2) {
                return Err(Failure::Check(payload, "subadditivity violated".into()));
            }
            Ok(payload)
        }
        _ => Err(Failure::Usage(format!("unknown command {}", c.name))),
    }
}

fn display_vector(v: &Vector) -> String {
    if v.module().rank() == 1 {
        v.component(0).to_string()
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use regulus::{Field, Ring};

    #[test]
    fn twists_follow_entries() {
        let r = Ring::standard(Field::Prime(101), &["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(&r, s).unwrap();
        let rows = vec![vec![p("x"), p("y^2")], vec![p("0"), p("x*y")]];
        assert_eq!(infer_twists(&rows).unwrap(), vec![0, -1]);
        let bad = vec![vec![p("x"), p("y")], vec![p("x"), p("y^2")]];
        assert!(infer_twists(&bad).is_err());
    }
}
