use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use hvalued::hset::{lambda_iso, morphisms_equal, parse_hsets, HSet, HSetMorphism};
use hvalued::lattice::{load_algebra, ElementId, HeytingAlgebra};
use hvalued::names::{parse_name, NameId, NameStore};
use hvalued::transfer::{
    check_atomic_preservation, check_functoriality, check_positive_bounded_preservation,
    first_proposal_images, is_generalized_related, positive_family, Check, LiftReport, Lifter,
};
use hvalued::valuation::laws::{check_valuation_laws, standard_family, SweepConfig};
use hvalued::valuation::{parse_formula, Assignment, EvalContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::session::{read, Config, Session};

/// What a command produced: a human-readable text, a JSON result and the
/// number of violations found.
pub struct Outcome {
    command: &'static str,
    text: String,
    result: Value,
    violations: u64,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    config: &'a Config,
    algebras: std::collections::BTreeMap<String, String>,
    violations: u64,
    passed: bool,
    result: &'a Value,
}

/// Prints the text, writes the JSON report if asked, and returns whether the
/// command found no violations.
pub fn finish(
    session: &Session,
    config: &Config,
    out: Outcome,
    json_path: Option<&Path>,
) -> Result<bool> {
    print!("{}", out.text);
    if let Some(path) = json_path {
        let report = Report {
            command: out.command,
            config,
            algebras: session.fingerprints(),
            violations: out.violations,
            passed: out.violations == 0,
            result: &out.result,
        };
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(out.violations == 0)
}

fn verdict(violations: u64) -> &'static str {
    if violations == 0 {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn algebra_check(session: &Session, file: &str) -> Result<Outcome> {
    let (text, result, violations) = match session.algebra(file) {
        Ok(h) => (
            format!(
                "valid, elements: {}, boolean: {}\nfingerprint: {}\n",
                h.len(),
                if h.is_boolean() { "yes" } else { "no" },
                h.fingerprint()
            ),
            json!({
                "valid": true,
                "elements": h.labels(),
                "boolean": h.is_boolean(),
                "fingerprint": h.fingerprint(),
            }),
            0,
        ),
        Err(e) => {
            // only algebra errors count as an invalid algebra; unreadable
            // files are usage errors
            let source = read(Path::new(file))?;
            let err = load_algebra(&source).err().ok_or(e)?;
            (
                format!("invalid: {err}\n"),
                json!({ "valid": false, "error": err.to_string() }),
                1,
            )
        }
    };
    Ok(Outcome {
        command: "algebra check",
        text,
        result,
        violations,
    })
}

fn table(
    h: &HeytingAlgebra,
    op: impl Fn(ElementId, ElementId) -> ElementId,
) -> (String, Vec<Vec<String>>) {
    let width = h.labels().iter().map(String::len).max().unwrap_or(1);
    let mut text = format!("{:>width$} |", "");
    for b in h.elements() {
        let _ = write!(text, " {:>width$}", h.label(b));
    }
    text.push('\n');
    let mut rows = Vec::new();
    for a in h.elements() {
        let _ = write!(text, "{:>width$} |", h.label(a));
        let mut row = Vec::new();
        for b in h.elements() {
            let c = h.label(op(a, b));
            let _ = write!(text, " {c:>width$}");
            row.push(c.to_string());
        }
        text.push('\n');
        rows.push(row);
    }
    (text, rows)
}

pub fn algebra_show(session: &Session, file: &str) -> Result<Outcome> {
    let h = session.algebra(file)?;
    let mut text = h.to_text();
    let mut result = json!({ "elements": h.labels(), "fingerprint": h.fingerprint() });
    for (name, key, op) in [
        (
            "meet",
            "meet",
            &(|a, b| h.meet(a, b)) as &dyn Fn(ElementId, ElementId) -> ElementId,
        ),
        ("join", "join", &|a, b| h.join(a, b)),
        (
            "implication a -> b (row a, column b)",
            "implies",
            &|a, b| h.implies(a, b),
        ),
    ] {
        let (t, rows) = table(&h, op);
        let _ = write!(text, "\n{name}\n{t}");
        result[key] = json!(rows);
    }
    Ok(Outcome {
        command: "algebra show",
        text,
        result,
        violations: 0,
    })
}

/// Scripts hold `algebra <ref>`, `let x = <literal>` and `eval "<formula>"`
/// lines; `#` starts a comment.
pub fn eval(session: &Session, script: &Path, default_algebra: &str) -> Result<Outcome> {
    let source = read(script)?;
    let mut algebra: Option<Arc<HeytingAlgebra>> = None;
    let mut store = NameStore::new();
    let mut env: HashMap<String, NameId> = HashMap::new();
    let mut text = String::new();
    let mut results = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let at = || format!("{}:{}", script.display(), i + 1);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("algebra ") {
            if algebra.is_some() {
                bail!("{}: algebra given twice", at());
            }
            let reference = rest.trim();
            let h = session
                .sibling(script, reference)
                .map(Ok)
                .unwrap_or_else(|| session.algebra(reference))?;
            algebra = Some(h);
            continue;
        }
        let h = match &algebra {
            Some(h) => h.clone(),
            None => {
                let h = session.algebra(default_algebra)?;
                algebra = Some(h.clone());
                h
            }
        };
        if let Some(rest) = line.strip_prefix("let ") {
            let (name, literal) = rest
                .split_once('=')
                .ok_or_else(|| anyhow!("{}: expected `=`", at()))?;
            let id = parse_name(&mut store, &h, literal.trim(), &env).with_context(at)?;
            env.insert(name.trim().to_string(), id);
        } else if let Some(rest) = line.strip_prefix("eval ") {
            let formula = rest.trim().trim_matches('"');
            let phi = parse_formula(formula, &env).with_context(at)?;
            let value = EvalContext::new(&h, &store)
                .eval(&phi, &Assignment::new())
                .with_context(at)?;
            let label = h.label(value);
            let _ = writeln!(text, "{formula} = {label}");
            results.push(json!({ "formula": formula, "value": label }));
        } else {
            bail!("{}: expected `algebra`, `let` or `eval`", at());
        }
    }
    Ok(Outcome {
        command: "eval",
        text,
        result: json!(results),
        violations: 0,
    })
}

pub fn lift(session: &Session, morphism: &str, names: &Path) -> Result<Outcome> {
    let f = session.morphism(morphism)?;
    let (a, b) = (f.source().clone(), f.target().clone());
    let mut store = NameStore::new();
    let bindings = hvalued::names::parse_bindings(&mut store, &a, &read(names)?)
        .with_context(|| format!("reading {}", names.display()))?;
    let mut lifter = Lifter::new(&f);
    let mut text = String::new();
    let mut results = Vec::new();
    let mut violations = 0;
    for (name, x) in bindings {
        let wl = lifter.lift(&mut store, x)?;
        let ok =
            wl.recheck(&f, &store) && is_generalized_related(&mut lifter, &mut store, x, wl.image)?;
        if !ok {
            violations += 1;
        }
        let _ = writeln!(text, "{name} = {}", store.render(&a, x));
        let _ = writeln!(text, "  image: {}", store.render(&b, wl.image));
        let mut witness = Vec::new();
        for w in &wl.witness {
            let (u, v) = (
                store.render(&a, w.source_key),
                store.render(&b, w.image_key),
            );
            let note = if w.canonical { "" } else { "  (padded)" };
            let _ = writeln!(text, "  {u} -> {v}{note}");
            witness.push(json!({ "key": u, "image_key": v, "canonical": w.canonical }));
        }
        results.push(json!({
            "name": name,
            "source": store.render(&a, x),
            "image": store.render(&b, wl.image),
            "witness": witness,
            "verified": ok,
        }));
    }
    Ok(Outcome {
        command: "lift",
        text,
        result: json!({ "morphism": f.name(), "lifts": results }),
        violations,
    })
}

fn sweep(store: &mut NameStore, h: &HeytingAlgebra, config: &Config) -> Result<Vec<NameId>> {
    Ok(store.enumerate_names(h, config.rank, config.max_domain, config.budget as u128)?)
}

/// All index pairs, or a seeded sample of `budget` of them.
fn pair_tuples(n: usize, config: &Config) -> (bool, Vec<Vec<usize>>) {
    if (n as u64).saturating_mul(n as u64) <= config.budget {
        return (
            false,
            (0..n)
                .flat_map(|i| (0..n).map(move |j| vec![i, j]))
                .collect(),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sample = (0..config.budget)
        .map(|_| vec![rng.gen_range(0..n), rng.gen_range(0..n)])
        .collect();
    (true, sample)
}

/// Per-check counts and the first few violations of a lift report.
fn summarize(report: &LiftReport, label: impl Fn(Check) -> String) -> Vec<Value> {
    let mut groups: Vec<(String, u64, u64, Vec<Value>)> = Vec::new();
    for r in &report.records {
        let key = label(r.check);
        let idx = match groups.iter().position(|g| g.0 == key) {
            Some(i) => i,
            None => {
                groups.push((key, 0, 0, Vec::new()));
                groups.len() - 1
            }
        };
        let g = &mut groups[idx];
        g.1 += 1;
        if !r.holds {
            g.2 += 1;
            if g.3.len() < 10 {
                let args: Vec<&str> = r.args.iter().map(|&i| report.names[i].as_str()).collect();
                g.3.push(json!({ "args": args, "mapped": r.mapped, "value": r.target_value }));
            }
        }
    }
    groups
        .into_iter()
        .map(|(check, checked, violations, examples)| {
            json!({ "check": check, "checked": checked, "violations": violations, "examples": examples })
        })
        .collect()
}

fn render_groups(text: &mut String, groups: &[Value]) {
    for g in groups {
        let _ = writeln!(
            text,
            "  {:<48} checked {:>8}  violations {:>4}  {}",
            g["check"].as_str().unwrap_or(""),
            g["checked"],
            g["violations"],
            verdict(g["violations"].as_u64().unwrap_or(0))
        );
    }
}

pub fn preservation(session: &Session, config: &Config, morphism: &str) -> Result<Outcome> {
    let f = session.morphism(morphism)?;
    let mut store = NameStore::new();
    let names = sweep(&mut store, f.source(), config)?;
    let atomic = check_atomic_preservation(&f, &mut store, &names)?;
    let mut groups = summarize(&atomic, |c| match c {
        Check::Member => "f([[y in x]]) <= [[y' in x']]".into(),
        Check::Equal => "f([[x = z]]) <= [[x' = z']]".into(),
        other => format!("{other:?}"),
    });
    let (sampled, tuples) = pair_tuples(names.len(), config);
    for phi in positive_family() {
        let report = check_positive_bounded_preservation(&f, &phi, &mut store, &names, &tuples)?;
        groups.extend(summarize(&report, |_| phi.to_string()));
    }
    let violations: u64 = groups
        .iter()
        .map(|g| g["violations"].as_u64().unwrap_or(0))
        .sum();
    let mut text = format!(
        "preservation along {} ({} names, {})\n",
        f.name(),
        names.len(),
        if f.is_strict() {
            "equality required"
        } else {
            "inequality required"
        }
    );
    render_groups(&mut text, &groups);
    let _ = writeln!(text, "{}", verdict(violations));
    Ok(Outcome {
        command: "check preservation",
        text,
        result: json!({
            "morphism": f.name(),
            "strict": f.is_strict(),
            "names": names.len(),
            "formula_pairs_sampled": sampled,
            "checks": groups,
        }),
        violations,
    })
}

pub fn functoriality(
    session: &Session,
    config: &Config,
    first: &str,
    then: &str,
) -> Result<Outcome> {
    let f = session.morphism(first)?;
    let g = session.morphism(then)?;
    let mut store = NameStore::new();
    let names = sweep(&mut store, f.source(), config)?;
    let report = check_functoriality(&f, &g, &mut store, &names)?;
    let groups = summarize(&report, |c| match c {
        Check::IdentityLift => "[[lift(id, x) = x]] = 1".into(),
        Check::Composite => "[[lift(g, lift(f, x)) = lift(g . f, x)]] = 1".into(),
        other => format!("{other:?}"),
    });
    let mut text = format!(
        "functoriality of {} then {} ({} names)\n",
        f.name(),
        g.name(),
        names.len()
    );
    render_groups(&mut text, &groups);
    let _ = writeln!(text, "{}", verdict(report.violations));
    Ok(Outcome {
        command: "check functoriality",
        text,
        result: json!({ "first": f.name(), "then": g.name(), "names": names.len(), "checks": groups }),
        violations: report.violations,
    })
}

pub fn properties(session: &Session, config: &Config, algebra: &str) -> Result<Outcome> {
    let h = session.algebra(algebra)?;
    let mut store = NameStore::new();
    let names = sweep(&mut store, &h, config)?;
    let params = &names[1.min(names.len())..3.min(names.len())];
    let family = standard_family(params);
    let sweep_config = SweepConfig {
        budget: config.budget,
        seed: config.seed,
    };
    let laws = check_valuation_laws(&h, &store, &names, &family, &sweep_config);
    let passed = laws.iter().filter(|l| l.passed()).count();
    let violations: u64 = laws.iter().map(|l| l.violation_count).sum();
    let mut text = format!("valuation laws over {} names\n", names.len());
    for l in &laws {
        let _ = writeln!(
            text,
            "  {:>2}  {:<72} checked {:>9}{}  violations {:>4}  {}",
            l.number,
            l.statement,
            l.checked,
            if l.sampled { " (sampled)" } else { "" },
            l.violation_count,
            verdict(l.violation_count)
        );
    }
    let _ = writeln!(text, "{passed}/{} laws pass", laws.len());
    Ok(Outcome {
        command: "check properties",
        text,
        result: json!({ "names": names.len(), "laws": laws }),
        violations,
    })
}

pub fn counterexample(session: &Session) -> Result<Outcome> {
    let c = session.catalog();
    let f = session.morphism("f")?;
    let mut store = NameStore::new();
    let literal = "{({({}, 0)}, 0), ({({}, a)}, 1)}";
    let x = parse_name(&mut store, &c.four, literal, &HashMap::new())?;
    let candidates = store.enumerate_names(&c.two, 2, 3, 10_000)?;
    let strict = first_proposal_images(&f, &store, x, &candidates)?;
    let mut lifter = Lifter::new(&f);
    let wl = lifter.lift(&mut store, x)?;
    let commutes = wl.recheck(&f, &store);
    let related = is_generalized_related(&mut lifter, &mut store, x, wl.image)?;
    let padded: Vec<String> = wl
        .witness
        .iter()
        .filter(|w| !w.canonical)
        .map(|w| store.render(&c.two, w.image_key))
        .collect();
    let failures = [strict.is_empty(), commutes, related, !padded.is_empty()]
        .iter()
        .filter(|ok| !**ok)
        .count() as u64;
    let mut text = format!("x = {literal} along {}\n", f.name());
    let _ = writeln!(
        text,
        "strict: {} images over {} candidates of rank <= 2",
        strict.len(),
        candidates.len()
    );
    let _ = writeln!(
        text,
        "generalized: lift succeeds: {}",
        store.render(&c.two, wl.image)
    );
    for p in &padded {
        let _ = writeln!(text, "  padded key: {p}");
    }
    let _ = writeln!(text, "{}", verdict(failures));
    Ok(Outcome {
        command: "check counterexample",
        text,
        result: json!({
            "name": literal,
            "candidates": candidates.len(),
            "strict_images": strict.iter().map(|&y| store.render(&c.two, y)).collect::<Vec<_>>(),
            "image": store.render(&c.two, wl.image),
            "witness_commutes": commutes,
            "generalized_related": related,
            "padded_keys": padded,
        }),
        violations: failures,
    })
}

fn small_hsets(h: &Arc<HeytingAlgebra>, n: usize) -> Vec<Arc<HSet>> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let k = h.len();
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    (0..k.pow(cells.len() as u32))
        .filter_map(|mut code| {
            let mut delta = vec![h.bottom(); n * n];
            for &(i, j) in &cells {
                let e = h.element_at(code % k);
                code /= k;
                delta[i * n + j] = e;
                delta[j * n + i] = e;
            }
            HSet::new(h.clone(), points.clone(), delta)
                .ok()
                .map(Arc::new)
        })
        .collect()
}

fn hom(x: &Arc<HSet>, y: &Arc<HSet>) -> Vec<HSetMorphism> {
    let h = x.algebra();
    let (cells, k) = (x.len() * y.len(), h.len());
    (0..k.pow(cells as u32))
        .filter_map(|mut code| {
            let phi: Vec<ElementId> = (0..cells)
                .map(|_| {
                    let e = h.element_at(code % k);
                    code /= k;
                    e
                })
                .collect();
            HSetMorphism::new(x.clone(), y.clone(), phi).ok()
        })
        .collect()
}

fn is_identity(m: &HSetMorphism) -> bool {
    m.source() == m.target() && morphisms_equal(m, &HSetMorphism::identity(m.source().clone()))
}

#[derive(Default, Serialize)]
struct Tally {
    checked: u64,
    violations: u64,
    examples: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < 10 {
                self.examples.push(detail());
            }
        }
    }
}

/// Identity and associativity laws among `morphisms`, composing every
/// composable pair and, within the budget, triple.
fn laws_among(
    morphisms: &[&HSetMorphism],
    config: &Config,
    ids: &mut Tally,
    assoc: &mut Tally,
) -> Result<()> {
    for m in morphisms {
        let left = HSetMorphism::identity(m.source().clone()).then(m)?;
        let right = m.then(&HSetMorphism::identity(m.target().clone()))?;
        ids.record(
            morphisms_equal(&left, m) && morphisms_equal(&right, m),
            || "identity law".into(),
        );
    }
    let n = morphisms.len();
    let total = (n as u64).saturating_pow(3);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let visit = total.min(config.budget);
    for k in 0..visit {
        let (a, b, c) = if total <= config.budget {
            let k = k as usize;
            (k / (n * n), (k / n) % n, k % n)
        } else {
            (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            )
        };
        let (p, q, r) = (morphisms[a], morphisms[b], morphisms[c]);
        if p.target() != q.source() || q.target() != r.source() {
            continue;
        }
        let lhs = p.then(q)?.then(r)?;
        let rhs = p.then(&q.then(r)?)?;
        assoc.record(lhs.is_valid() && morphisms_equal(&lhs, &rhs), || {
            "associativity".into()
        });
    }
    Ok(())
}

pub fn hset_laws(
    session: &Session,
    config: &Config,
    algebra: &str,
    file: Option<&Path>,
) -> Result<Outcome> {
    let h = session.algebra(algebra)?;
    let mut ids = Tally::default();
    let mut assoc = Tally::default();
    let corpus: Vec<Arc<HSet>> = (0..=2).flat_map(|n| small_hsets(&h, n)).collect();
    let homs: Vec<HSetMorphism> = corpus
        .iter()
        .flat_map(|x| corpus.iter().flat_map(move |y| hom(x, y)))
        .collect();
    // associativity over the corpus: seeded triples of composable morphisms
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let by_source = |x: &Arc<HSet>| homs.iter().filter(|m| m.source() == x).collect::<Vec<_>>();
    for m in &homs {
        let left = HSetMorphism::identity(m.source().clone()).then(m)?;
        let right = m.then(&HSetMorphism::identity(m.target().clone()))?;
        ids.record(
            morphisms_equal(&left, m) && morphisms_equal(&right, m),
            || "identity law".into(),
        );
    }
    for _ in 0..config.budget.min(2000) {
        let p = &homs[rng.gen_range(0..homs.len())];
        let qs = by_source(p.target());
        let q = qs[rng.gen_range(0..qs.len())];
        let rs = by_source(q.target());
        let r = rs[rng.gen_range(0..rs.len())];
        let lhs = p.then(q)?.then(r)?;
        let rhs = p.then(&q.then(r)?)?;
        assoc.record(morphisms_equal(&lhs, &rhs), || {
            "associativity on the corpus".into()
        });
    }

    let mut lambda = Tally::default();
    let mut store = NameStore::new();
    for u in sweep(&mut store, &h, config)? {
        let u1 = store.pad_equivalent(&h, u, 1)?;
        let there = lambda_iso(&store, &h, u, u1)?;
        let back = lambda_iso(&store, &h, u1, u)?;
        let ok = is_identity(&there.then(&back)?) && is_identity(&back.then(&there)?);
        lambda.record(ok, || store.render(&h, u));
    }

    let mut file_result = Value::Null;
    if let Some(path) = file {
        let doc = parse_hsets(&read(path)?, |n| session.sibling(path, n))
            .with_context(|| format!("reading {}", path.display()))?;
        let mut fids = Tally::default();
        let mut fassoc = Tally::default();
        let mut ms: Vec<&HSetMorphism> = doc.morphisms.iter().map(|(_, m)| m).collect();
        let identities: Vec<HSetMorphism> = doc
            .hsets
            .iter()
            .map(|(_, x)| HSetMorphism::identity(x.clone()))
            .collect();
        ms.extend(identities.iter());
        laws_among(&ms, config, &mut fids, &mut fassoc)?;
        file_result = json!({
            "hsets": doc.hsets.iter().map(|(n, x)| json!({ "name": n, "points": x.len() })).collect::<Vec<_>>(),
            "morphisms": doc.morphisms.iter().map(|(n, _)| n).collect::<Vec<_>>(),
            "identity": fids,
            "associativity": fassoc,
        });
        ids.checked += fids.checked;
        ids.violations += fids.violations;
        assoc.checked += fassoc.checked;
        assoc.violations += fassoc.violations;
    }

    let violations = ids.violations + assoc.violations + lambda.violations;
    let mut text = format!(
        "H-set laws over {} ({} H-sets of at most 2 points, {} morphisms)\n",
        algebra,
        corpus.len(),
        homs.len()
    );
    for (name, t) in [
        ("identity laws", &ids),
        ("associativity", &assoc),
        ("lambda roundtrips", &lambda),
    ] {
        let _ = writeln!(
            text,
            "  {name:<20} checked {:>7}  violations {:>4}  {}",
            t.checked,
            t.violations,
            verdict(t.violations)
        );
    }
    let _ = writeln!(text, "{}", verdict(violations));
    Ok(Outcome {
        command: "check hset-laws",
        text,
        result: json!({
            "corpus_hsets": corpus.len(),
            "corpus_morphisms": homs.len(),
            "identity": ids,
            "associativity": assoc,
            "lambda_roundtrips": lambda,
            "file": file_result,
        }),
        violations,
    })
}
