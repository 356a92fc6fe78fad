use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use balgame::balance::{self, REFERENCE_DIMS};
use balgame::coloring::{color_msets_with, parse_design, verify_coloring, write_design, ColoringReport};
use balgame::game::{
    self, GameRegion, GreedyChooser, RandomPusher, RankPusher, SafeSetChooser, SubsetChooser, Window,
};
use balgame::io::{parse_family, parse_point_set, write_sign_table};
use balgame::threshold::{critical_M, cross_validate};
use balgame::witness::{extreme_points, translate_witness, WitnessCertificate};
use balgame::{canonical_family, Error, LatticeVector, Sign, VectorFamily};
use serde_json::{json, Value};

use crate::args::*;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    /// A check ran and did not hold; the payload is the JSON detail.
    Verification(String, Value),
    Core(Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e {
                Error::InvalidDimension(_)
                | Error::Range(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidFamily(_)
                | Error::InvalidWindow(_)
                | Error::RegionExcludesOrigin
                | Error::Precondition(_)
                | Error::Parse { .. }
                | Error::Input(_) => 2,
                _ => 1,
            },
            Failure::Verification(..) | Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Verification(m, _) => write!(f, "verification failed: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

pub type CmdResult = Result<(), Failure>;

pub struct Ctx<'a> {
    pub json: bool,
    pub budget: u128,
    pub out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit_json(&mut self, v: &Value) -> CmdResult {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("json value"))?;
        Ok(())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

pub fn parse_point(s: &str) -> Result<LatticeVector, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad coordinate {t:?} in {s:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(LatticeVector::new)
}

pub fn parse_window(spec: &str) -> Result<Window, Failure> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in spec.split(',') {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("window part {part:?} is not lo:hi")))?;
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad bound {t:?}")));
        lo.push(parse(a)?);
        hi.push(parse(b)?);
    }
    Ok(Window::new(lo, hi)?)
}

// --- threshold -------------------------------------------------------------

pub fn threshold(ctx: &mut Ctx, a: &ThresholdArgs) -> CmdResult {
    let ns: Vec<u32> = if a.n.is_empty() { (2..=12).collect() } else { a.n.clone() };
    let mut docs = Vec::new();
    let mut bad = Vec::new();
    for &n in &ns {
        let r = critical_M(n)?;
        let cv = if a.verify { Some(cross_validate(n, a.margin, ctx.budget, a.allow_large)?) } else { None };
        if let Some(cv) = &cv {
            if !cv.agrees {
                bad.push(n);
            }
        }
        if ctx.json {
            docs.push(json!({ "threshold": to_value(&r), "cross_validation": cv.as_ref().map(to_value) }));
        } else {
            writeln!(
                ctx.out,
                "n = {n}  class = {}  M_crit = {}  r = {}  raw bound = {}",
                r.class,
                r.m_crit,
                r.r,
                if r.raw_bound.is_integer() {
                    r.raw_bound.to_integer().to_string()
                } else {
                    format!("{}/{}", r.raw_bound.numer(), r.raw_bound.denom())
                }
            )?;
            if let Some(cv) = &cv {
                for row in &cv.rows {
                    let who = if row.trivial {
                        "pusher (origin outside K_M)"
                    } else if row.chooser_wins {
                        "chooser"
                    } else {
                        "pusher"
                    };
                    let mark = if row.chooser_wins == row.expected_chooser { "ok" } else { "MISMATCH" };
                    writeln!(ctx.out, "  M = {:>4}: {who} [{mark}]", row.m)?;
                }
            }
        }
    }
    if ctx.json {
        ctx.emit_json(&Value::Array(docs))?;
    }
    if !bad.is_empty() {
        return Err(Failure::Verification(format!("solver disagrees with M_crit for n = {bad:?}"), json!({ "n": bad })));
    }
    Ok(())
}

// --- signs -----------------------------------------------------------------

fn verify_fixtures(ctx: &mut Ctx, only: Option<usize>) -> Result<Vec<Value>, Failure> {
    let mut out = Vec::new();
    for n in REFERENCE_DIMS.iter().copied().filter(|&n| only.is_none_or(|m| m == n)) {
        let t = balance::reference_table(n)?;
        let c = balance::verify_fixture(n, &t)?;
        if !ctx.json {
            writeln!(
                ctx.out,
                "# reference table n = {n}: {} rows, sum {} (expected {}), antisymmetric {}, orbit cover {} -> {}",
                c.rows,
                c.sum,
                c.expected,
                c.antisymmetric,
                c.covers_self_negating,
                if c.ok() { "ok" } else { "FAILED" }
            )?;
        }
        out.push(to_value(&c));
    }
    Ok(out)
}

fn table_rows(f: &VectorFamily, signs: &[Sign]) -> Vec<(Sign, LatticeVector)> {
    signs.iter().copied().zip(f.members().iter().cloned()).collect()
}

pub fn signs(ctx: &mut Ctx, a: &SignsArgs) -> CmdResult {
    let mut failures: Vec<String> = Vec::new();
    let mut doc = json!({});
    if let Some(n) = a.odd {
        let o = balance::odd_signs(n)?;
        let text = format!("# n = {n}\n# sum = {}\n{}", o.sum, write_sign_table(&table_rows(&o.family, o.signs.signs())));
        doc = json!({ "kind": "odd", "n": n, "sum": o.sum, "signs": o.signs.signs() });
        if a.verify {
            let sum = o.signs.signed_sum(&o.family);
            let ok = sum == o.sum && o.signs.subset_identity_holds(&o.family);
            doc["verified"] = json!(ok);
            if !ok {
                failures.push(format!("signed sum {sum} != {}", o.sum));
            }
        }
        emit_table(ctx, a, &text)?;
    } else if let Some(n) = a.middle {
        let b = balance::balance_middle(n)?;
        let text = format!(
            "# n = {n}\n# defect = {}\n{}",
            b.defect,
            write_sign_table(&table_rows(&b.family, b.signs.signs()))
        );
        doc = json!({ "kind": "middle", "n": n, "defect": b.defect, "method": to_value(&b.method), "signs": b.signs.signs() });
        emit_table(ctx, a, &text)?;
        if a.verify {
            let sum = b.signs.signed_sum(&b.family);
            let ok = sum == b.defect;
            if !ctx.json {
                writeln!(ctx.out, "# recomputed sum {sum}: {}", if ok { "ok" } else { "FAILED" })?;
            }
            doc["verified"] = json!(ok);
            if !ok {
                failures.push(format!("signed sum {sum} != defect {}", b.defect));
            }
            if REFERENCE_DIMS.contains(&n) {
                let checks = verify_fixtures(ctx, Some(n))?;
                fixture_failures(&checks, &mut failures);
                doc["reference"] = Value::Array(checks);
            }
        }
    }
    if a.verify_fixtures {
        let checks = verify_fixtures(ctx, None)?;
        fixture_failures(&checks, &mut failures);
        doc["fixtures"] = Value::Array(checks);
    }
    if ctx.json {
        ctx.emit_json(&doc)?;
    }
    if !failures.is_empty() {
        return Err(Failure::Verification(failures.join("; "), doc));
    }
    Ok(())
}

fn fixture_failures(checks: &[Value], failures: &mut Vec<String>) {
    for c in checks {
        let ok = ["sum_ok", "antisymmetric", "covers_self_negating"].iter().all(|k| c[k] == json!(true));
        if !ok {
            failures.push(format!("reference table n = {} failed", c["n"]));
        }
    }
}

fn emit_table(ctx: &mut Ctx, a: &SignsArgs, text: &str) -> CmdResult {
    match &a.out {
        Some(p) => write_file(p, text),
        None if !ctx.json => {
            ctx.out.write_all(text.as_bytes())?;
            Ok(())
        }
        None => Ok(()),
    }
}

// --- translate ---------------------------------------------------------------

pub fn translate(ctx: &mut Ctx, a: &TranslateArgs) -> CmdResult {
    let c = balance::chooser_translate(a.n as usize)?;
    if ctx.json {
        return ctx.emit_json(&to_value(&c));
    }
    writeln!(ctx.out, "n = {}  M_crit = {}", c.n, c.m)?;
    writeln!(ctx.out, "t = {}", c.translate)?;
    writeln!(ctx.out, "|S0| = {} of {}", c.subset.len(), c.family.len())?;
    if let Some(w) = &c.w_shift {
        writeln!(ctx.out, "w' = {w}")?;
    }
    writeln!(ctx.out, "max of each coordinate over t + P(V): {:?}", c.coordinate_max)?;
    writeln!(ctx.out, "t + P(V) inside K_{}: {}", c.m, c.fits())?;
    Ok(())
}

// --- coloring ----------------------------------------------------------------

fn print_coloring(ctx: &mut Ctx, r: &ColoringReport) -> CmdResult {
    if ctx.json {
        return ctx.emit_json(&to_value(r));
    }
    writeln!(ctx.out, "m = {}  sets = {}", r.m, r.sets)?;
    writeln!(ctx.out, "complementary sets differ: {}", r.complement_violation_count == 0)?;
    writeln!(ctx.out, "R(i) - B(i) = {:?}", r.difference)?;
    writeln!(ctx.out, "defect class: {} (expected {})", r.class, r.expected_class)?;
    if !r.plus_three.is_empty() {
        writeln!(ctx.out, "elements at +3: {:?}", r.plus_three)?;
    }
    writeln!(ctx.out, "R(i) - B(i) constant mod 4: {}", r.mod4_constant)?;
    writeln!(ctx.out, "{}", if r.passed() { "verified" } else { "FAILED" })?;
    Ok(())
}

pub fn coloring(ctx: &mut Ctx, a: &ColoringArgs) -> CmdResult {
    let c = match (&a.check, a.m) {
        (Some(p), _) => parse_design(&read(p)?)?,
        (None, Some(m)) => color_msets_with(m, a.allow_large)?,
        (None, None) => return Err(Failure::Usage("give --m or --check".into())),
    };
    if let Some(p) = &a.out {
        write_file(p, &write_design(&c))?;
    }
    let r = verify_coloring(&c);
    print_coloring(ctx, &r)?;
    if !r.passed() {
        return Err(Failure::Verification("coloring checks failed".into(), to_value(&r)));
    }
    Ok(())
}

// --- witness -----------------------------------------------------------------

pub fn witness(ctx: &mut Ctx, a: &WitnessArgs) -> CmdResult {
    if let Some(p) = &a.check {
        return check_certificates(ctx, &read(p)?);
    }
    let (Some(fp), Some(sp)) = (&a.family, &a.set) else {
        return Err(Failure::Usage("give --family and --set, or --check".into()));
    };
    let f = parse_family(&read(fp)?, &fp.display().to_string())?;
    let t = parse_point_set(&read(sp)?, Some(f.dim()))?;
    let xs = match &a.x {
        Some(x) => vec![parse_point(x)?],
        None => extreme_points(&t)?,
    };
    let mut certs = Vec::new();
    for x in &xs {
        let c = translate_witness(&t, &f, x)?;
        if !ctx.json {
            writeln!(ctx.out, "x = {}  a = ({})  p = {}  t = {}  verified", c.x, c.a.join(","), c.p, c.t)?;
        }
        certs.push(c);
    }
    let doc = to_value(&certs);
    if let Some(p) = &a.out {
        write_file(p, &serde_json::to_string_pretty(&doc).expect("json"))?;
    }
    if ctx.json {
        ctx.emit_json(&json!({ "points": t.len(), "vertices": xs.len(), "certificates": doc }))?;
    } else {
        writeln!(ctx.out, "{} of {} points are vertices; all witnesses verified", xs.len(), t.len())?;
    }
    Ok(())
}

fn check_certificates(ctx: &mut Ctx, text: &str) -> CmdResult {
    let certs: Vec<WitnessCertificate> = serde_json::from_str(text)
        .or_else(|_| WitnessCertificate::from_json(text).map(|c| vec![c]).map_err(|e| e.to_string()))
        .map_err(|e| Failure::Usage(format!("certificate file: {e}")))?;
    let mut all = Vec::new();
    let mut failed = 0;
    for c in &certs {
        let fails = c.replay()?;
        if !fails.is_empty() {
            failed += 1;
        }
        if !ctx.json {
            let status = if fails.is_empty() { "ok".to_string() } else { fails.join("; ") };
            writeln!(ctx.out, "x = {}: {status}", c.x)?;
        }
        all.push(json!({ "x": c.x, "failures": fails }));
    }
    let doc = json!({ "certificates": certs.len(), "failed": failed, "results": all });
    if ctx.json {
        ctx.emit_json(&doc)?;
    }
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} certificate(s) did not replay"), doc));
    }
    Ok(())
}

// --- maximal -----------------------------------------------------------------

pub fn maximal(ctx: &mut Ctx, a: &MaximalArgs) -> CmdResult {
    let f = parse_family(&read(&a.family)?, &a.family.display().to_string())?;
    let w = parse_window(&a.window)?;
    let cert = game::maximal_vclosed_subset(&w, &f, ctx.budget)?;
    if let Some(p) = &a.dump {
        write_file(p, &cert.dump_safe_set())?;
    }
    let report = cert.report(a.sample);
    let valid = cert.validate();
    if ctx.json {
        let mut v = to_value(&report);
        v["validated"] = json!(valid.is_ok());
        ctx.emit_json(&v)?;
    } else {
        writeln!(ctx.out, "window volume {}  safe points {}  deletion rounds {}", w.volume(), cert.safe_size(), cert.rounds())?;
        writeln!(ctx.out, "origin: {}", report.verdict)?;
        if let Some(r) = report.origin_rank {
            writeln!(ctx.out, "origin removed in round {r}")?;
        }
        for s in &report.strategy_sample {
            match s.response {
                Some(sign) => writeln!(ctx.out, "  offered {}: choose {sign}", s.vector)?,
                None => writeln!(ctx.out, "  at {} offer {} (rank {})", s.point, s.vector, s.rank.unwrap_or(0))?,
            }
        }
        writeln!(ctx.out, "table check: {}", if valid.is_ok() { "ok" } else { "FAILED" })?;
    }
    valid.map_err(|e| Failure::Verification(e, json!({})))
}

// --- simulate ----------------------------------------------------------------

pub fn simulate(ctx: &mut Ctx, a: &SimulateArgs) -> CmdResult {
    let n = a.n as usize;
    let m_crit = critical_M(a.n)?.m_crit as i64;
    let m = a.m.unwrap_or(m_crit);
    let region = GameRegion::uniform(n, m);
    let family = canonical_family(n)?;
    let translate = if a.chooser == ChooserKind::Translate { Some(balance::chooser_translate(n)?) } else { None };
    let needs_table = a.pusher == PusherKind::Rank || a.chooser == ChooserKind::Safe;
    let solved = if needs_table && region.contains(&LatticeVector::zeros(n)) {
        Some(game::verdict(&region, &family, None, ctx.budget)?)
    } else {
        None
    };
    if a.pusher == PusherKind::Rank {
        if let Some(v) = solved.as_ref().filter(|v| v.chooser_wins()) {
            let msg = "origin is safe: the rank pusher has no winning offer";
            if ctx.json {
                ctx.emit_json(&json!({ "n": n, "M": m, "verdict": v.label(), "note": msg }))?;
            } else {
                writeln!(ctx.out, "{msg}")?;
            }
            return Ok(());
        }
    }

    let mut chooser: Box<dyn game::ChooserStrategy + '_> = match a.chooser {
        ChooserKind::Translate => {
            let c = translate.as_ref().expect("built above");
            Box::new(SubsetChooser::new(&c.family, c.translate.clone(), &c.subset)?)
        }
        ChooserKind::Safe => match &solved {
            Some(v) => Box::new(SafeSetChooser::new(v.certificate())),
            None => return Err(Failure::Usage("the origin is outside K_M".into())),
        },
        ChooserKind::Greedy => Box::new(GreedyChooser::new(&family, &region)),
    };
    let mut pusher: Box<dyn game::PusherStrategy + '_> = match a.pusher {
        PusherKind::Random => Box::new(RandomPusher::new(family.len(), a.seed)),
        PusherKind::Rank => match &solved {
            Some(v) => Box::new(RankPusher::new(v.certificate(), &region)),
            None => return Err(Failure::Usage("the origin is outside K_M".into())),
        },
    };
    let tr = game::simulate(&region, &family, chooser.as_mut(), pusher.as_mut(), a.rounds)?;
    if let Some(p) = &a.transcript {
        write_file(p, &serde_json::to_string(&tr).expect("json"))?;
    }
    let played = tr.rounds.len();
    let peak = tr.rounds.iter().flat_map(|r| r.position.coords().iter().copied()).max().unwrap_or(0);
    let escaped = matches!(tr.outcome, game::Outcome::Escaped { .. });
    let doc = json!({
        "n": n, "M": m, "M_crit": m_crit, "seed": a.seed,
        "outcome": to_value(&tr.outcome), "rounds_played": played,
        "final_position": tr.final_position(), "max_coordinate": peak,
        "replay_ok": tr.replay_ok(),
    });
    if ctx.json {
        ctx.emit_json(&doc)?;
    } else {
        match tr.outcome {
            game::Outcome::Escaped { round } => writeln!(ctx.out, "escaped K_{m} at round {round}")?,
            game::Outcome::Survived { rounds } => writeln!(ctx.out, "survived {rounds} rounds inside K_{m}")?,
        }
        writeln!(ctx.out, "final position {}  largest coordinate seen {peak}", tr.final_position())?;
    }
    if escaped && a.chooser == ChooserKind::Translate && m >= m_crit {
        return Err(Failure::Verification("translate strategy left K_M at or above M_crit".into(), doc));
    }
    Ok(())
}
