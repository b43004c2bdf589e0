use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::Instant;

use boolkl::boolean::{
    boolean_expression, canonicalize, canonicalize_pair, build_diagram, diagram_of,
    enumerate_boolean, tree_expression, BooleanExpression, Shape,
};
use boolkl::closed_form::{f_poly, kl_closed_affine, mu_closed, CatalanTriangle};
use boolkl::coxeter::parse_graph;
use boolkl::oracle::Oracle;
use boolkl::perm::{self, Family, SignedWindow, Variant};
use boolkl::poincare::{
    diagram_of_element, essential_components, expression_for, poincare_closed, poincare_def,
};
use boolkl::verify::{closed_for, for_each_case, SweepOptions};
use boolkl::{Coxeter, CoxeterGraph, Error, GeneratorSet, GraphMode, Poly, Word};
use serde_json::json;

use crate::output::Line;
use crate::{
    EnumerateArgs, FamilyArg, GraphArgs, KlArgs, Method, PermArgs, PoincareArgs, Scope,
    VariantArg, VerifyArgs,
};

pub struct Context {
    pub budget: Option<usize>,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchBudgetExceeded(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Default)]
pub struct Outcome {
    pub lines: Vec<Line>,
    pub mismatch: bool,
}

type Run = Result<Outcome, Failure>;

impl Context {
    fn coxeter(&self, g: CoxeterGraph) -> Coxeter {
        match self.budget {
            Some(b) => Coxeter::with_budget(g, b),
            None => Coxeter::new(g),
        }
    }
}

fn read_graph(path: &Path) -> Result<CoxeterGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

/// Generator list, shifted up by one when the input counts from 0.
fn parse_word(text: &str, zero_based: bool) -> Result<Word, Failure> {
    if !zero_based {
        return Ok(Word::parse(text)?);
    }
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok(Word::empty());
    }
    let gens = t
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.trim_start_matches('s')
                .parse::<usize>()
                .map(|g| g + 1)
                .map_err(|_| Failure::input(format!("bad generator `{p}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Word::from_gens(&gens))
}

fn parse_set(text: &str, zero_based: bool) -> Result<GeneratorSet, Failure> {
    Ok(parse_word(text, zero_based)?.support())
}

fn poly_line(method: &str, p: &Poly) -> Line {
    Line::new(p.to_string())
        .field("method", method)
        .field("poly", p.to_string())
        .field("coeffs", p.coeffs().to_vec())
}

fn verdict(lines: &mut Vec<Line>, closed: &Poly, oracle: &Poly) -> bool {
    let ok = closed == oracle;
    let text = if ok { "MATCH" } else { "MISMATCH" };
    lines.push(Line::new(text).field("verdict", text));
    !ok
}

fn diagram_lines(text: &str) -> impl Iterator<Item = Line> + '_ {
    text.lines().map(|l| Line::new(l).field("diagram", l))
}

pub fn kl(ctx: &Context, a: &KlArgs) -> Run {
    let GraphArgs { graph, zero_based } = &a.graph;
    let cox = ctx.coxeter(read_graph(graph)?);
    let v = parse_word(&a.v, *zero_based)?;
    let u = parse_word(&a.u, *zero_based)?;
    let j = parse_set(&a.j, *zero_based)?;
    for w in [&v, &u] {
        w.check_in(cox.graph())?;
    }
    j.iter()
        .try_for_each(|s| Word::from_gens(&[s]).check_in(cox.graph()))?;
    let t = expression_for(&cox, &v)?;
    for w in [&v, &u] {
        if !cox.in_quotient(j, w)? {
            return Err(Error::NotInQuotient.into());
        }
    }
    let mut out = Outcome::default();
    let below = cox.bruhat_leq(&u, &v)?;
    if a.show_diagram && below {
        let d = diagram_of(&cox, &t, &v, &u, j)?;
        out.lines.extend(diagram_lines(&d.render()));
    }
    let closed = || -> Result<Poly, Failure> {
        if !below {
            return Ok(Poly::zero());
        }
        let pair = canonicalize_pair(&cox, &t, &v, &u, j)?;
        Ok(closed_for(&build_diagram(&t, &pair))?)
    };
    let oracle = || -> Result<Poly, Failure> {
        if !below {
            return Ok(Poly::zero());
        }
        Ok(Oracle::new(&cox, &v)?.kl_parabolic(j, &u, &v)?)
    };
    match a.method {
        Method::Closed => out.lines.push(poly_line("closed", &closed()?)),
        Method::Oracle => out.lines.push(poly_line("oracle", &oracle()?)),
        Method::Both => {
            let (c, o) = (closed()?, oracle()?);
            out.lines.push(poly_line("closed", &c));
            out.lines.push(poly_line("oracle", &o));
            out.mismatch = verdict(&mut out.lines, &c, &o);
        }
    }
    Ok(out)
}

pub fn enumerate(ctx: &Context, a: &EnumerateArgs) -> Run {
    let cox = ctx.coxeter(read_graph(&a.graph.graph)?);
    let j = match &a.j {
        Some(text) => Some(parse_set(text, a.graph.zero_based)?),
        None => None,
    };
    let t = boolean_expression(cox.graph())?;
    let mut words = enumerate_boolean(&cox, &t, j)?
        .iter()
        .map(|u| canonicalize(&cox, &t, u))
        .collect::<Result<Vec<_>, _>>()?;
    words.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let lines = words
        .iter()
        .map(|w| {
            Line::new(format!("{} {}", w.len(), w))
                .field("length", w.len())
                .field("word", w.to_string())
        })
        .collect();
    Ok(Outcome {
        lines,
        mismatch: false,
    })
}

pub fn catalan(h: usize) -> Run {
    let tri = CatalanTriangle::new(h);
    let f = f_poly(h);
    let row = tri.row(h);
    let shown: Vec<String> = row.iter().map(u64::to_string).collect();
    let line = Line::new(format!("f_{h} = {f}; row: {}", shown.join(" ")))
        .field("h", h)
        .field("f", f.to_string())
        .field("row", row.to_vec());
    Ok(Outcome {
        lines: vec![line],
        mismatch: false,
    })
}

pub fn poincare(ctx: &Context, a: &PoincareArgs) -> Run {
    let cox = ctx.coxeter(read_graph(&a.graph.graph)?);
    let v = parse_word(&a.v, a.graph.zero_based)?;
    v.check_in(cox.graph())?;
    let mut out = Outcome::default();
    if a.show_diagram {
        let t = expression_for(&cox, &v)?;
        let d = diagram_of_element(&cox, &t, &v)?;
        out.lines.extend(diagram_lines(&d.render()));
        for c in essential_components(&d).components {
            let cells: Vec<String> = c.vertices.iter().map(|s| format!("s{s}")).collect();
            out.lines.push(
                Line::new(format!(
                    "component root=s{} cells={} reflection={}",
                    c.root,
                    cells.join(","),
                    c.reflection
                ))
                .field("component_root", c.root)
                .field("cells", c.vertices.clone())
                .field("reflection", c.reflection.to_string()),
            );
        }
    }
    match a.method {
        Method::Closed => out.lines.push(poly_line("closed", &poincare_closed(&cox, &v)?)),
        Method::Oracle => out.lines.push(poly_line("oracle", &poincare_def(&cox, &v)?)),
        Method::Both => {
            let (c, o) = (poincare_closed(&cox, &v)?, poincare_def(&cox, &v)?);
            out.lines.push(poly_line("closed", &c));
            out.lines.push(poly_line("oracle", &o));
            out.mismatch = verdict(&mut out.lines, &c, &o);
        }
    }
    Ok(out)
}

fn family_of(f: FamilyArg) -> Family {
    match f {
        FamilyArg::A => Family::A,
        FamilyArg::B => Family::B,
        FamilyArg::D => Family::D,
    }
}

fn stats_line(name: &str, w: &SignedWindow) -> Result<Line, Failure> {
    let s = perm::stats(w)?;
    let show = |set: &BTreeSet<usize>| {
        let parts: Vec<String> = set.iter().map(usize::to_string).collect();
        format!("{{{}}}", parts.join(","))
    };
    Ok(Line::new(format!(
        "{name}={w} exc={} exc_inv={} fix={} nfix={}",
        show(&s.exc),
        show(&s.exc_inv),
        show(&s.fix),
        show(&s.nfix)
    ))
    .field("element", name)
    .field("window", w.values().to_vec())
    .field("exc", s.exc.iter().copied().collect::<Vec<_>>())
    .field("exc_inv", s.exc_inv.iter().copied().collect::<Vec<_>>())
    .field("fix", s.fix.iter().copied().collect::<Vec<_>>())
    .field("nfix", s.nfix.iter().copied().collect::<Vec<_>>()))
}

fn perm_formula(
    cox: &Coxeter,
    j: GeneratorSet,
    pi: &SignedWindow,
    rho: &SignedWindow,
    variant: Variant,
) -> boolkl::Result<Poly> {
    match pi.family() {
        Family::A => perm::kl_a(cox, j, pi, rho),
        Family::B => perm::kl_b(cox, pi, rho, variant),
        Family::D => perm::kl_d(cox, pi, rho),
    }
}

pub fn perm(ctx: &Context, a: &PermArgs) -> Run {
    let family = family_of(a.family);
    let variant = match a.variant {
        VariantArg::T1 => Variant::T1,
        VariantArg::T2 => Variant::T2,
    };
    if variant == Variant::T2 && family != Family::B {
        return Err(Failure::input("--variant t2 applies to type B only"));
    }
    let rho = SignedWindow::parse(family, &a.v)?;
    let n = rho.rank();
    let pi = match &a.u {
        Some(text) => SignedWindow::parse(family, text)?,
        None => SignedWindow::identity(family, n),
    };
    if pi.rank() != n {
        return Err(Failure::input("windows have different lengths"));
    }
    let j = parse_set(&a.j, false)?;
    if family != Family::A && !j.is_empty() {
        return Err(Failure::input("--J is supported for type A only"));
    }
    let root = family.root(n, variant);
    let cox = ctx.coxeter(family.graph(n).with_root(root)?);
    j.iter()
        .try_for_each(|s| Word::from_gens(&[s]).check_in(cox.graph()))?;
    for w in [&rho, &pi] {
        if !perm::is_boolean(w, variant) {
            return Err(Error::WrongVariant.into());
        }
    }
    let (v, u) = (rho.to_word(), pi.to_word());
    for w in [&v, &u] {
        if !cox.in_quotient(j, w)? {
            return Err(Error::NotInQuotient.into());
        }
    }
    let t = tree_expression(cox.graph(), root)?;
    let mut out = Outcome::default();
    out.lines.push(stats_line("v", &rho)?);
    out.lines.push(stats_line("u", &pi)?);
    let below = cox.bruhat_leq(&u, &v)?;
    if a.show_diagram && below {
        let d = diagram_of(&cox, &t, &v, &u, j)?;
        out.lines.extend(diagram_lines(&d.render()));
    }
    let closed = || -> Result<Poly, Failure> {
        if !below {
            return Ok(Poly::zero());
        }
        Ok(perm_formula(&cox, j, &pi, &rho, variant)?)
    };
    let oracle = || -> Result<Poly, Failure> {
        if !below {
            return Ok(Poly::zero());
        }
        Ok(Oracle::new(&cox, &v)?.kl_parabolic(j, &u, &v)?)
    };
    match a.method {
        Method::Closed => out.lines.push(poly_line("closed", &closed()?)),
        Method::Oracle => out.lines.push(poly_line("oracle", &oracle()?)),
        Method::Both => {
            let (c, o) = (closed()?, oracle()?);
            out.lines.push(poly_line("closed", &c));
            out.lines.push(poly_line("oracle", &o));
            out.mismatch = verdict(&mut out.lines, &c, &o);
        }
    }
    Ok(out)
}

/// The family whose standard numbering the graph uses, with the reflection
/// its root selects.
fn detect_family(g: &CoxeterGraph) -> Result<(Family, Variant), Failure> {
    let n = g.rank();
    let edges = |g: &CoxeterGraph| -> BTreeSet<(usize, usize, String)> {
        g.edges()
            .iter()
            .map(|&(i, j, m)| (i.min(j), i.max(j), format!("{m:?}")))
            .collect()
    };
    let mine = edges(g);
    let mut candidates = vec![Family::A];
    if n >= 2 {
        candidates.push(Family::B);
    }
    if n >= 4 {
        candidates.push(Family::D);
    }
    let family = candidates
        .into_iter()
        .find(|f| edges(&f.graph(n)) == mine)
        .ok_or_else(|| {
            Failure::input("scope perm needs A_n, B_n or D_n in the standard numbering")
        })?;
    let root = g.root();
    if root == Some(family.root(n, Variant::T1)) {
        Ok((family, Variant::T1))
    } else if family == Family::B && root == Some(family.root(n, Variant::T2)) {
        Ok((family, Variant::T2))
    } else {
        Err(Failure::input("root does not give a window-notation reflection"))
    }
}

fn mode_name(m: GraphMode) -> &'static str {
    match m {
        GraphMode::Tree => "tree",
        GraphMode::Cycle => "cycle",
        GraphMode::General => "general",
    }
}

fn scope_name(s: Scope) -> &'static str {
    match s {
        Scope::Kl => "kl",
        Scope::Mu => "mu",
        Scope::Poincare => "poincare",
        Scope::Perm => "perm",
    }
}

/// One disagreement. Sorting the text keeps the report stable.
struct Disagreement {
    center: usize,
    u: Word,
    v: Word,
    j: GeneratorSet,
    closed: String,
    oracle: String,
}

impl Disagreement {
    fn line(&self) -> Line {
        Line::new(format!(
            "mismatch center=s{} v={} u={} J={} closed={} oracle={}",
            self.center, self.v, self.u, self.j, self.closed, self.oracle
        ))
        .field("mismatch", true)
        .field("center", self.center)
        .field("v", self.v.to_string())
        .field("u", self.u.to_string())
        .field("J", self.j.iter().collect::<Vec<_>>())
        .field("closed", self.closed.clone())
        .field("oracle", self.oracle.clone())
    }
}

fn shown<T: ToString>(r: boolkl::Result<T>) -> Result<String, Failure> {
    match r {
        Ok(x) => Ok(x.to_string()),
        Err(e @ Error::SearchBudgetExceeded(_)) => Err(e.into()),
        Err(e) => Ok(format!("error({e})")),
    }
}

fn mu_of_oracle(p: &Poly, gap: usize) -> i64 {
    if gap % 2 == 0 {
        0
    } else {
        p.coeff((gap - 1) / 2)
    }
}

fn mu_closed_any(d: &boolkl::boolean::Diagram) -> boolkl::Result<i64> {
    match d.shape {
        Shape::Tree => mu_closed(d),
        Shape::Cycle => {
            let gap = boolkl::closed_form::length_gap(d);
            Ok(mu_of_oracle(&kl_closed_affine(d)?, gap))
        }
    }
}

pub fn verify(ctx: &Context, a: &VerifyArgs) -> Run {
    let start = Instant::now();
    let g = read_graph(&a.graph)?;
    let cox = ctx.coxeter(g.clone());
    let limit = a.max_pairs;
    let mut seen = 0usize;
    let mut found: Vec<Disagreement> = Vec::new();
    let mut fail: Option<Failure> = None;
    let mut record = |center: usize, u: &Word, v: &Word, j, closed: String, oracle: String| {
        if closed != oracle {
            found.push(Disagreement {
                center,
                u: u.clone(),
                v: v.clone(),
                j,
                closed,
                oracle,
            });
        }
    };
    match a.scope {
        Scope::Kl | Scope::Mu | Scope::Perm => {
            let perm_ctx = if a.scope == Scope::Perm {
                Some(detect_family(&g)?)
            } else {
                None
            };
            let opts = SweepOptions {
                all_roots: a.all_roots && perm_ctx.is_none(),
                max_pairs: Some(limit + 1),
                j_sets: match perm_ctx {
                    Some((f, _)) if f != Family::A => Some(vec![GeneratorSet::empty()]),
                    _ => None,
                },
            };
            let n = g.rank();
            for_each_case(&cox, &opts, |c| {
                seen += 1;
                if seen > limit || fail.is_some() {
                    return Ok(());
                }
                let center = c.t.center();
                let result = match (a.scope, perm_ctx) {
                    (Scope::Kl, _) => shown(closed_for(c.diagram))
                        .map(|closed| (closed, c.oracle.to_string())),
                    (Scope::Mu, _) => shown(mu_closed_any(c.diagram))
                        .map(|closed| (closed, mu_of_oracle(c.oracle, c.gap).to_string())),
                    (_, Some((f, variant))) => {
                        let pi = SignedWindow::from_word(f, n, c.u)?;
                        let rho = SignedWindow::from_word(f, n, c.v)?;
                        shown(perm_formula(&cox, c.j, &pi, &rho, variant))
                            .map(|closed| (closed, c.oracle.to_string()))
                    }
                    _ => unreachable!(),
                };
                match result {
                    Ok((closed, oracle)) => record(center, c.u, c.v, c.j, closed, oracle),
                    Err(f) => fail = Some(f),
                }
                Ok(())
            })?;
        }
        Scope::Poincare => {
            let ts: Vec<BooleanExpression> = if a.all_roots {
                boolkl::boolean::all_boolean_expressions(&g)?
            } else {
                vec![boolean_expression(&g)?]
            };
            'outer: for t in &ts {
                let oracle = Oracle::for_boolean(&cox, t)?;
                for v in oracle.poset().elements() {
                    seen += 1;
                    if seen > limit {
                        break 'outer;
                    }
                    let closed = shown(poincare_closed(&cox, v))?;
                    let def = poincare_def(&cox, v)?.to_string();
                    record(t.center(), &Word::empty(), v, GeneratorSet::empty(), closed, def);
                }
            }
        }
    }
    if let Some(f) = fail {
        return Err(f);
    }
    let truncated = seen > limit;
    let pairs = seen.min(limit);
    found.sort_by(|x, y| {
        (x.center, &x.v, &x.u, x.j.0).cmp(&(y.center, &y.v, &y.u, y.j.0))
    });
    let root = g.root().map(|r| format!("s{r}")).unwrap_or_else(|| "-".into());
    let mut lines = vec![
        Line::kv("graph", a.graph.display().to_string()),
        Line::kv("rank", g.rank()),
        Line::kv("mode", mode_name(g.mode())),
        Line::kv("root", root),
        Line::kv("all_roots", a.all_roots),
        Line::kv("scope", scope_name(a.scope)),
        Line::kv("pairs", pairs),
        Line::kv("truncated", truncated),
        Line::kv("mismatches", found.len()),
    ];
    lines.extend(found.iter().map(Disagreement::line));
    let status = if found.is_empty() { "PASS" } else { "FAIL" };
    lines.push(
        Line::new(format!(
            "summary: {status} {pairs} checked, {} mismatches",
            found.len()
        ))
        .field("summary", json!({"status": status, "pairs": pairs, "mismatches": found.len()})),
    );
    eprintln!("wall_time={:.3}s", start.elapsed().as_secs_f64());
    Ok(Outcome {
        lines,
        mismatch: !found.is_empty(),
    })
}
