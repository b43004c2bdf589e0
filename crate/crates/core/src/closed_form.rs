//! Catalan-triangle polynomials and the diagram formulas for boolean
//! Kazhdan–Lusztig polynomials.

use std::collections::BTreeMap;
use std::fmt;

use std::cell::RefCell;
use std::rc::Rc;

use crate::boolean::{
    build_diagram, canonicalize_pair, cycle_expression, BooleanExpression, Column, Diagram, Entry,
    Shape,
};
use crate::coxeter::{Coxeter, CoxeterGraph, GeneratorSet, Label, Word};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Pascal-like triangle with nothing to the left of the first column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalanTriangle {
    rows: Vec<Vec<u64>>,
}

impl CatalanTriangle {
    /// Rows `0..=max_h`.
    pub fn new(max_h: usize) -> Self {
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for h in 1..=max_h {
            let prev = &rows[h - 1];
            let at = |i: usize| prev.get(i).copied().unwrap_or(0);
            let row = (0..=h / 2)
                .map(|i| {
                    if h % 2 == 1 {
                        at(i) + at(i + 1)
                    } else {
                        i.checked_sub(1).map_or(0, at) + at(i)
                    }
                })
                .collect();
            rows.push(row);
        }
        CatalanTriangle { rows }
    }

    pub fn get(&self, h: usize, i: usize) -> u64 {
        self.rows
            .get(h)
            .and_then(|r| r.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn row(&self, h: usize) -> &[u64] {
        &self.rows[h]
    }

    pub fn max_row(&self) -> usize {
        self.rows.len() - 1
    }
}

/// `f_h(q)` by the recurrence `f_{h+1} = f_h (1+q) - μ(f_h) q^{h/2+1}`.
pub fn f_poly(h: usize) -> Poly {
    let mut f = Poly::one();
    for k in 0..h {
        let next = &f * &Poly::one_plus_q();
        f = if k % 2 == 0 {
            &next - &Poly::monomial(f.coeff(k / 2), k / 2 + 1)
        } else {
            next
        };
    }
    f
}

/// `f_h(q)` read directly off the triangle.
pub fn f_from_triangle(tri: &CatalanTriangle, h: usize) -> Poly {
    let top = h / 2;
    Poly::from_coeffs(
        (0..=top)
            .map(|k| tri.get(h, top - k) as i64)
            .collect(),
    )
}

/// Coefficient of `q^{h/2}` in `f_h` (zero for odd `h`).
pub fn mu_f(h: usize) -> i64 {
    if h % 2 == 1 {
        0
    } else {
        f_poly(h).coeff(h / 2)
    }
}

pub fn catalan(k: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// Named summands of the pattern counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Summand {
    A1,
    A2,
    A3,
    A4,
    A5,
    B1,
    B2,
    C1,
    C2,
    C3,
    C4,
    C5,
    CPrime1,
    CPrime2,
    CDouble,
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One matched summand: the column `Y` it is anchored at and its `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Match {
    pub summand: Summand,
    pub at: usize,
    pub h: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternCounts {
    pub a: BTreeMap<usize, u64>,
    pub b: BTreeMap<usize, u64>,
    pub c: u64,
    pub cp: u64,
    pub cpp: u64,
    pub a_aff: u64,
    pub b_aff: u64,
    pub cppp: u64,
    pub matches: Vec<Match>,
}

impl PatternCounts {
    pub fn a(&self, h: usize) -> u64 {
        self.a.get(&h).copied().unwrap_or(0)
    }

    pub fn b(&self, h: usize) -> u64 {
        self.b.get(&h).copied().unwrap_or(0)
    }

    /// `c + c' + c''` for trees, `c + c' + c'''` for cycles.
    pub fn cbar(&self) -> u64 {
        self.c + self.cp + self.cpp + self.cppp
    }

    fn push(&mut self, summand: Summand, at: usize, h: usize) {
        use Summand::*;
        match summand {
            A1 | A2 | A3 | A4 | A5 => *self.a.entry(h).or_default() += 1,
            B1 | B2 => *self.b.entry(h).or_default() += 1,
            C1 | C2 | C3 | C4 | C5 => self.c += 1,
            CPrime1 | CPrime2 => self.cp += 1,
            CDouble => self.cpp += 1,
        }
        self.matches.push(Match { summand, at, h });
    }
}

fn in_p1(c: Column) -> bool {
    use Entry::*;
    matches!(
        (c.top, c.bottom),
        (OneL, Zero) | (OneR, Zero) | (OneR, OneR) | (Two, OneR)
    )
}

fn in_p2(c: Column) -> bool {
    use Entry::*;
    matches!(
        (c.top, c.bottom),
        (OneCapR, Zero) | (OneCapR, OneR) | (Two, Zero)
    )
}

fn is_two_not_two(c: Column) -> bool {
    c.top == Entry::Two && c.bottom != Entry::Two
}

/// Columns that act like a deleted `(1_l,1_l)` and remove the mark of their parent.
fn is_unmarking(c: Column) -> bool {
    matches!(
        (c.top, c.bottom),
        (Entry::OneL, Entry::OneL) | (Entry::Two, Entry::Two)
    )
}

/// Children of `y` whose column is not `(0,0)`.
fn live_children(d: &Diagram, y: usize) -> Vec<usize> {
    d.children(y).filter(|&c| !d.column(c).top.is_zero()).collect()
}

/// Pattern matches anchored at column `y` of a tree-shaped diagram.
fn match_at(d: &Diagram, y: usize, kids: &[usize], out: &mut PatternCounts) {
    use Entry::*;
    use Summand::*;
    let col = d.column(y);
    if col.top.is_zero() {
        return;
    }
    let kid = |c: usize| d.column(c);
    let k = kids.iter().filter(|&&c| is_two_not_two(kid(c))).count();
    let unmarked = kids.iter().any(|&c| is_unmarking(kid(c)));
    let top_one = col.top.is_one();
    // A bare (2,0) under a (nonzero, 0) parent is already part of the parent's fan.
    let absorbed = col.top == Two
        && k == 0
        && d.parent[y].is_some_and(|p| {
            let pc = d.column(p);
            !pc.top.is_zero() && pc.bottom == Zero
        });
    if col.bottom == Zero {
        if !col.in_j {
            if top_one && k >= 1 {
                out.push(A1, y, k - 1);
            } else if col.top == Two && !absorbed {
                out.push(A2, y, k);
            }
            return;
        }
        if unmarked {
            if top_one && k >= 1 {
                out.push(A3, y, k - 1);
            } else if col.top == Two && !absorbed {
                out.push(A4, y, k);
            }
            return;
        }
        match (col.top, k) {
            (OneCapR, k) if k >= 1 => out.push(A5, y, k - 1),
            (OneCapR, _) => {}
            (OneL | OneR, k) if k >= 1 => {
                out.push(B1, y, k - 1);
                if k == 1 {
                    out.push(if col.top == OneR { C3 } else { C5 }, y, 0);
                }
            }
            (OneL, _) => {
                if d.children(y).any(|c| kid(c).bottom == Zero) {
                    out.push(C2, y, 0);
                }
            }
            (OneR, _) => out.push(C4, y, 0),
            (Two, 0) => {
                out.push(B2, y, 0);
                out.push(C1, y, 0);
            }
            (Two, k) => out.push(B2, y, k),
            (Zero, _) => unreachable!(),
        }
        return;
    }
    if !col.in_j {
        return;
    }
    // Nonzero bottom: the vanishing patterns c' and c''.
    let harmless = |c: usize| in_p1(kid(c)) || in_p2(kid(c));
    if col.top == Two && col.bottom == OneR && kids.iter().all(|&c| harmless(c)) {
        out.push(CPrime1, y, 0);
    }
    if col.top == OneL && col.bottom == OneL {
        let special: Vec<usize> = kids
            .iter()
            .copied()
            .filter(|&c| is_two_not_two(kid(c)) && d.parent_label[c] == Label::Finite(3))
            .collect();
        let fires = special
            .iter()
            .any(|&s| kids.iter().all(|&c| c == s || harmless(c)));
        if fires {
            out.push(CPrime2, y, 0);
        }
    }
    let parent_bottom_zero = d.parent[y].is_none_or(|p| d.column(p).bottom == Zero);
    if col.bottom == OneL || (col.bottom == OneR && parent_bottom_zero) {
        let fires = kids.iter().any(|&s| {
            kid(s).top == Two
                && kid(s).bottom == OneL
                && d.parent_label[s] == Label::Finite(3)
                && kids.iter().all(|&c| c == s || harmless(c))
        });
        if fires {
            out.push(CDouble, y, 0);
        }
    }
}

/// Pattern counts of a tree diagram.
pub fn count_patterns(d: &Diagram) -> Result<PatternCounts> {
    if d.shape != Shape::Tree {
        return Err(Error::NotTreeDiagram);
    }
    let mut out = PatternCounts::default();
    for y in d.order.iter().copied().chain(std::iter::once(d.center)) {
        let kids = live_children(d, y);
        match_at(d, y, &kids, &mut out);
    }
    Ok(out)
}

/// Evaluates the product formula on precomputed counts.
pub fn evaluate_counts(counts: &PatternCounts) -> Poly {
    if counts.cbar() > 0 {
        return Poly::zero();
    }
    let mut p = Poly::one();
    for (&h, &n) in &counts.a {
        if h >= 1 {
            p = &p * &f_poly(h + 1).pow(n as u32);
        }
    }
    for (&h, &n) in &counts.b {
        if h >= 1 {
            p = &p * &(&f_poly(h + 1) - &Poly::one()).pow(n as u32);
        }
    }
    p
}

/// Closed form of `P^J_{u,v}` from a tree diagram.
pub fn kl_closed(d: &Diagram) -> Result<Poly> {
    let counts = count_patterns(d)?;
    if counts.b(0) > 0 && counts.cbar() == 0 {
        return Err(Error::FormulaHypothesis(
            "b_0 is nonzero while the vanishing counts are zero".into(),
        ));
    }
    Ok(evaluate_counts(&counts))
}

/// `l(v) - l(u)` read off the diagram.
pub fn length_gap(d: &Diagram) -> usize {
    (1..=d.rank())
        .map(|s| {
            let (t, b) = d.counts(s);
            t - b
        })
        .sum()
}

fn same_entry(c: Column) -> bool {
    let norm = |e: Entry| if e == Entry::OneCapR { Entry::OneR } else { e };
    norm(c.top) == norm(c.bottom)
}

/// `μ(u, v)`: the coefficient of `q^{(gap-1)/2}` in the closed product.
pub fn mu_closed(d: &Diagram) -> Result<i64> {
    if d.shape != Shape::Tree {
        return Err(Error::NotTreeDiagram);
    }
    let gap = length_gap(d);
    if gap % 2 == 0 {
        return Ok(0);
    }
    Ok(kl_closed(d)?.coeff((gap - 1) / 2))
}

/// The Catalan value when exactly one fan shape carries all unequal columns.
///
/// `None` means no such shape. Diagrams with several unequal fans can still
/// have `μ = 1` (e.g. `(1+q)^2` at gap 5), which this test does not see.
pub fn mu_shape(d: &Diagram) -> Result<Option<i64>> {
    if d.shape != Shape::Tree {
        return Err(Error::NotTreeDiagram);
    }
    let gap = length_gap(d);
    if gap % 2 == 0 || count_patterns(d)?.cbar() > 0 {
        return Ok(None);
    }
    if gap == 1 {
        return Ok(Some(1));
    }
    let odd: Vec<usize> = (1..=d.rank()).filter(|&s| !same_entry(d.column(s))).collect();
    let is_two_one_l = |s: usize| {
        let c = d.column(s);
        c.top == Entry::Two && c.bottom == Entry::OneL
    };
    let is_two_zero = |s: usize| {
        let c = d.column(s);
        c.top == Entry::Two && c.bottom == Entry::Zero
    };
    // The anchor is the only unequal column whose parent is not unequal, or
    // the root-most end of a (2,0) run.
    for &y in &odd {
        let c = d.column(y);
        if c.bottom != Entry::Zero {
            continue;
        }
        let fan: Vec<usize> = d.children(y).filter(|&k| is_two_one_l(k)).collect();
        if c.top.is_one() {
            let rest_ok = odd.iter().all(|&s| s == y || fan.contains(&s));
            if rest_ok && !fan.is_empty() {
                return Ok(Some(catalan(fan.len() / 2) as i64));
            }
        }
        if c.top == Entry::Two {
            // Walk the (2,0) run down to its leftmost column.
            let mut run = vec![y];
            let mut cur = y;
            loop {
                let next: Vec<usize> = d.children(cur).filter(|&k| is_two_zero(k)).collect();
                if next.len() != 1 {
                    break;
                }
                cur = next[0];
                run.push(cur);
            }
            let fan: Vec<usize> = d.children(cur).filter(|&k| is_two_one_l(k)).collect();
            let rest_ok = odd.iter().all(|&s| run.contains(&s) || fan.contains(&s));
            if rest_ok {
                return Ok(Some(catalan((fan.len() + 1) / 2) as i64));
            }
        }
    }
    Ok(None)
}

/// Recomputes the `1_r`/`1_R` distinction after a change of parents.
fn retag(d: &mut Diagram) {
    for s in 1..=d.rank() {
        if matches!(d.columns[s].top, Entry::OneR | Entry::OneCapR) {
            let upper = d.parent[s].is_some_and(|p| !d.columns[p].bottom.is_zero());
            d.columns[s].top = if upper { Entry::OneCapR } else { Entry::OneR };
        }
    }
}

/// The cycle diagram seen as a tree, when the support of `v` misses the
/// center, the first column, or the second column.
fn delegate_to_tree(d: &Diagram) -> Option<Diagram> {
    let first = d.first();
    let second = d.order.get(1).copied();
    let last = *d.order.last()?;
    let mut t = d.clone();
    t.shape = Shape::Tree;
    if d.column(d.center).top.is_zero() {
        t.order.pop();
        t.center = last;
        t.parent[last] = None;
        let root = &mut t.columns[last];
        for e in [&mut root.top, &mut root.bottom] {
            if e.is_one() {
                *e = Entry::OneL;
            }
        }
        return Some(t);
    }
    if d.column(first).top.is_zero() {
        t.order.remove(0);
        return Some(t);
    }
    if second.is_none_or(|s| d.column(s).top.is_zero()) {
        // The first column hangs off the center; it is the leftmost letter
        // of `t`, so children-before-parents order still holds.
        t.parent[first] = Some(d.center);
        t.parent_label[first] = Label::Finite(3);
        retag(&mut t);
        return Some(t);
    }
    None
}

thread_local! {
    static GROUP: RefCell<Option<Rc<Coxeter>>> = const { RefCell::new(None) };
}

/// The cycle group a diagram lives in, reused across calls on one thread.
fn cycle_group(d: &Diagram) -> Result<Rc<Coxeter>> {
    let mut edges: Vec<(usize, usize, Label)> = d
        .order
        .iter()
        .map(|&c| (c, d.parent[c].expect("every non-center column has a parent"), d.parent_label[c]))
        .collect();
    edges.push((d.first(), d.center, d.closing_label));
    let graph = CoxeterGraph::new(d.rank(), &edges)?;
    GROUP.with(|slot| {
        let mut slot = slot.borrow_mut();
        if let Some(cox) = slot.as_ref().filter(|c| *c.graph() == graph) {
            return Ok(cox.clone());
        }
        let cox = Rc::new(Coxeter::new(graph));
        *slot = Some(cox.clone());
        Ok(cox)
    })
}

/// Reads `(ū, v̄)` back off a cycle diagram.
fn diagram_words(d: &Diagram) -> (Word, Word) {
    let take = |row: fn(Column) -> Entry| {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &s in &d.order {
            match row(d.column(s)) {
                Entry::Zero => {}
                Entry::OneL => left.push(s),
                Entry::OneR | Entry::OneCapR => right.push(s),
                Entry::Two => {
                    left.push(s);
                    right.push(s);
                }
            }
        }
        if !row(d.column(d.center)).is_zero() {
            left.push(d.center);
        }
        left.extend(right.iter().rev());
        Word::from_gens(&left)
    };
    (take(|c| c.bottom), take(|c| c.top))
}

/// `P^J_{u,v}` on a cycle by removing the first generator `f` of the
/// expression. `f` sits at both ends of `t`, so it is a left descent when
/// `v̄` uses the left copy and a right descent when it uses the right one.
fn peel(cox: &Coxeter, t: &BooleanExpression, u: &Word, v: &Word, j: GeneratorSet) -> Result<Poly> {
    let pair = match canonicalize_pair(cox, t, v, u, j) {
        Ok(p) => p,
        Err(Error::NotBelow) => return Ok(Poly::zero()),
        Err(e) => return Err(e),
    };
    let d = build_diagram(t, &pair);
    if let Some(tree) = delegate_to_tree(&d) {
        return kl_closed(&tree);
    }
    let f = d.first();
    let col = d.column(f);
    match col.top {
        Entry::OneL => match col.bottom {
            Entry::OneL => {
                let mut jc = j;
                for s in cox.graph().neighbors(f) {
                    jc.remove(s);
                }
                peel(cox, t, &cox.gen_mul(f, u)?, &cox.gen_mul(f, v)?, jc)
            }
            Entry::Zero => {
                let fv = cox.gen_mul(f, v)?;
                if cox.in_quotient(j, &fv)? {
                    peel(cox, t, u, &fv, j)
                } else {
                    Ok(Poly::zero())
                }
            }
            _ => Err(Error::FormulaHypothesis("ū uses a copy of f absent from v̄".into())),
        },
        _ => {
            let uf = cox.mul_gen(u, f)?;
            if uf.len() < u.len() {
                return peel(cox, t, &uf, v, j);
            }
            if !cox.in_quotient(j, &uf)? {
                return Ok(Poly::zero());
            }
            let vf = cox.mul_gen(v, f)?;
            let upper = peel(cox, t, &uf, &vf, j)?.shift(1);
            Ok(&upper + &peel(cox, t, u, &vf, j)?)
        }
    }
}

/// Closed form of `P^J_{u,v}` from a cycle diagram.
///
/// Diagrams whose support misses the center or one of the two columns next
/// to it are trees. Otherwise the first column is peeled off with the
/// descent identities until a tree remains.
pub fn kl_closed_affine(d: &Diagram) -> Result<Poly> {
    if d.shape != Shape::Cycle {
        return Err(Error::NotCycleDiagram);
    }
    if let Some(t) = delegate_to_tree(d) {
        return kl_closed(&t);
    }
    let cox = cycle_group(d)?;
    let t = cycle_expression(cox.graph(), d.center)?;
    let (u, v) = diagram_words(d);
    let j = (1..=d.rank()).filter(|&s| d.column(s).in_j).collect();
    peel(&cox, &t, &u, &v, j)
}

/// Counts of a cycle diagram: `P = q^{b} (1+q)^{a}`, or `c > 0` when it vanishes.
pub fn count_patterns_affine(d: &Diagram) -> Result<PatternCounts> {
    let p = kl_closed_affine(d)?;
    let mut out = PatternCounts::default();
    if p.is_zero() {
        out.cppp = 1;
        return Ok(out);
    }
    let b = p.coeffs().iter().position(|&c| c != 0).unwrap_or(0);
    let a = p.degree().unwrap_or(0) - b;
    if Poly::one_plus_q().pow(a as u32).shift(b) != p {
        return Err(Error::FormulaHypothesis(format!("{p} is not q^b(1+q)^a")));
    }
    out.a_aff = a as u64;
    out.b_aff = b as u64;
    Ok(out)
}
