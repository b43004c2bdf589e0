//! Boolean expressions, canonical subwords and two-row diagrams.
//!
//! A boolean expression of a rooted tree is `L · r · reverse(L)` where `L`
//! lists every non-root vertex after all of its descendants. For the cycle
//! `Ã_n` the expression is centered on a chosen generator `c` and `L` walks
//! the cycle from `c + 1` around to `c - 1`.

use std::fmt;

use crate::coxeter::{Coxeter, CoxeterGraph, GeneratorSet, GraphMode, Label, Word};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Tree,
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanExpression {
    shape: Shape,
    center: usize,
    word: Word,
    /// Left half of the word, in order.
    order: Vec<usize>,
    /// Neighbor toward the center (the "column on the right"), by generator.
    parent: Vec<Option<usize>>,
    /// Label of the edge to the parent, by generator.
    parent_label: Vec<Label>,
    closing_label: Label,
    rank: usize,
}

/// The boolean expression of a rooted tree, or of a cycle centered on its
/// root (or on its last generator when no root is set).
pub fn boolean_expression(g: &CoxeterGraph) -> Result<BooleanExpression> {
    match g.mode() {
        GraphMode::Tree => tree_expression(g, g.root().ok_or(Error::NoRoot)?),
        GraphMode::Cycle => cycle_expression(g, g.root().unwrap_or(g.rank())),
        GraphMode::General => Err(Error::NotTreeOrCycle),
    }
}

/// One boolean expression per choice of root (tree) or center (cycle).
pub fn all_boolean_expressions(g: &CoxeterGraph) -> Result<Vec<BooleanExpression>> {
    (1..=g.rank())
        .map(|c| match g.mode() {
            GraphMode::Tree => tree_expression(g, c),
            GraphMode::Cycle => cycle_expression(g, c),
            GraphMode::General => Err(Error::NotTreeOrCycle),
        })
        .collect()
}

pub fn tree_expression(g: &CoxeterGraph, root: usize) -> Result<BooleanExpression> {
    g.require_mode(GraphMode::Tree)?;
    let n = g.rank();
    if root == 0 || root > n {
        return Err(Error::GeneratorOutOfRange(root, n));
    }
    let mut parent = vec![None; n + 1];
    let mut parent_label = vec![Label::Finite(2); n + 1];
    let mut order = Vec::with_capacity(n);
    // Post-order DFS, smallest index first.
    fn visit(
        g: &CoxeterGraph,
        v: usize,
        from: Option<usize>,
        parent: &mut [Option<usize>],
        parent_label: &mut [Label],
        order: &mut Vec<usize>,
    ) {
        for w in g.neighbors(v) {
            if Some(w) == from {
                continue;
            }
            parent[w] = Some(v);
            parent_label[w] = g.label(w, v);
            visit(g, w, Some(v), parent, parent_label, order);
            order.push(w);
        }
    }
    visit(g, root, None, &mut parent, &mut parent_label, &mut order);
    let mut letters: Vec<usize> = order.clone();
    letters.push(root);
    letters.extend(order.iter().rev());
    Ok(BooleanExpression {
        shape: Shape::Tree,
        center: root,
        word: Word::from_gens(&letters),
        order,
        parent,
        parent_label,
        closing_label: Label::Finite(2),
        rank: n,
    })
}

pub fn cycle_expression(g: &CoxeterGraph, center: usize) -> Result<BooleanExpression> {
    g.require_mode(GraphMode::Cycle)?;
    let n = g.rank();
    if center == 0 || center > n {
        return Err(Error::GeneratorOutOfRange(center, n));
    }
    // Generators are arranged 1 - 2 - ... - n - 1 around the cycle.
    let next = |i: usize| i % n + 1;
    if g.commute(center, next(center)) {
        return Err(Error::NotTreeOrCycle);
    }
    let mut order = Vec::with_capacity(n - 1);
    let mut v = next(center);
    while v != center {
        order.push(v);
        v = next(v);
    }
    let mut parent = vec![None; n + 1];
    let mut parent_label = vec![Label::Finite(2); n + 1];
    for (k, &v) in order.iter().enumerate() {
        let p = order.get(k + 1).copied().unwrap_or(center);
        parent[v] = Some(p);
        parent_label[v] = g.label(v, p);
    }
    let closing_label = g.label(order[0], center);
    let mut letters = order.clone();
    letters.push(center);
    letters.extend(order.iter().rev());
    Ok(BooleanExpression {
        shape: Shape::Cycle,
        center,
        word: Word::from_gens(&letters),
        order,
        parent,
        parent_label,
        closing_label,
        rank: n,
    })
}

impl BooleanExpression {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Root of the tree, or center of the cycle.
    pub fn center(&self) -> usize {
        self.center
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Position of the center letter in the word.
    pub fn center_position(&self) -> usize {
        self.order.len()
    }

    pub fn left_order(&self) -> &[usize] {
        &self.order
    }

    pub fn parent(&self, s: usize) -> Option<usize> {
        self.parent[s]
    }

    pub fn parent_label(&self, s: usize) -> Label {
        self.parent_label[s]
    }

    pub fn children(&self, s: usize) -> Vec<usize> {
        self.order
            .iter()
            .copied()
            .filter(|&c| self.parent[c] == Some(s))
            .collect()
    }

    /// Generators of the support, in column (DFS) order ending with the center.
    pub fn column_order(&self) -> Vec<usize> {
        let mut v = self.order.clone();
        v.push(self.center);
        v
    }
}

/// All elements `u <= t` (optionally restricted to `W^J`), as canonical words,
/// sorted by length and then lexicographically.
pub fn enumerate_boolean(
    cox: &Coxeter,
    t: &BooleanExpression,
    j: Option<GeneratorSet>,
) -> Result<Vec<Word>> {
    let below = cox.lower_interval(t.word())?;
    let mut out = Vec::with_capacity(below.len());
    for u in below.iter() {
        if let Some(j) = j {
            if !cox.in_quotient(j, u)? {
                continue;
            }
        }
        out.push(u.clone());
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Leftmost subword of `host` (given as letters) that is a reduced word of
/// `target`. Returns positions into `host`.
fn leftmost_subword(cox: &Coxeter, host: &[u8], target: &Word) -> Result<Option<Vec<usize>>> {
    let target = cox.normal_form(target)?;
    let need = target.len();
    let inv_target = target.reversed();
    let mut picked = Vec::with_capacity(need);
    // Depth-first, trying "include" before "skip", so the first solution
    // takes every letter as early as possible.
    fn dfs(
        cox: &Coxeter,
        host: &[u8],
        pos: usize,
        prefix: &Word,
        target: &Word,
        inv_target: &Word,
        need: usize,
        picked: &mut Vec<usize>,
    ) -> Result<bool> {
        if picked.len() == need {
            return Ok(prefix == target);
        }
        if host.len() - pos < need - picked.len() {
            return Ok(false);
        }
        let s = host[pos] as usize;
        let ext = cox.mul_gen(prefix, s)?;
        if ext.len() == prefix.len() + 1 {
            // `ext` must be a prefix of some reduced word of the target.
            let rest = cox.mul(&ext.reversed(), target)?;
            if rest.len() + ext.len() == target.len() {
                picked.push(pos);
                if dfs(cox, host, pos + 1, &ext, target, inv_target, need, picked)? {
                    return Ok(true);
                }
                picked.pop();
            }
        }
        dfs(cox, host, pos + 1, prefix, target, inv_target, need, picked)
    }
    let found = dfs(
        cox,
        host,
        0,
        &Word::empty(),
        &target,
        &inv_target,
        need,
        &mut picked,
    )?;
    Ok(found.then_some(picked))
}

/// Canonical reduced subword `v̄` of `t` for `v`.
pub fn canonicalize(cox: &Coxeter, t: &BooleanExpression, v: &Word) -> Result<Word> {
    let pos = leftmost_subword(cox, t.word().letters(), v)?.ok_or(Error::NotBelow)?;
    Ok(Word(pos.iter().map(|&p| t.word().0[p]).collect()))
}

/// The canonical pair `(ū, v̄)` with positions recorded in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPair {
    pub vbar: Word,
    pub ubar: Word,
    /// Positions of the letters of `v̄` in `t`.
    pub v_positions: Vec<usize>,
    /// Positions of the letters of `ū` in `t`.
    pub u_positions: Vec<usize>,
    pub j: GeneratorSet,
}

pub fn canonicalize_pair(
    cox: &Coxeter,
    t: &BooleanExpression,
    v: &Word,
    u: &Word,
    j: GeneratorSet,
) -> Result<CanonicalPair> {
    let v_positions = leftmost_subword(cox, t.word().letters(), v)?.ok_or(Error::NotBelow)?;
    let vbar = Word(v_positions.iter().map(|&p| t.word().0[p]).collect());
    let within = leftmost_subword(cox, vbar.letters(), u)?.ok_or(Error::NotBelow)?;
    let u_positions: Vec<usize> = within.iter().map(|&k| v_positions[k]).collect();
    let ubar = Word(within.iter().map(|&k| vbar.0[k]).collect());
    Ok(CanonicalPair {
        vbar,
        ubar,
        v_positions,
        u_positions,
        j,
    })
}

/// Cell entry of a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    /// One occurrence, left of the center.
    OneL,
    /// One occurrence, right of the center.
    OneR,
    /// `1_r` in the top row over a column whose parent has a nonzero bottom.
    OneCapR,
    Two,
}

impl Entry {
    pub fn is_zero(self) -> bool {
        self == Entry::Zero
    }

    pub fn is_one(self) -> bool {
        matches!(self, Entry::OneL | Entry::OneR | Entry::OneCapR)
    }

    pub fn count(self) -> usize {
        match self {
            Entry::Zero => 0,
            Entry::Two => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entry::Zero => "0",
            Entry::OneL => "1l",
            Entry::OneR => "1r",
            Entry::OneCapR => "1R",
            Entry::Two => "2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Column {
    pub top: Entry,
    pub bottom: Entry,
    /// `∘` when the generator is in `J`.
    pub in_j: bool,
}

/// Two-row diagram of a canonical pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub shape: Shape,
    pub center: usize,
    /// Column order: left half of `t`, then the center.
    pub order: Vec<usize>,
    /// Columns by generator (index 0 unused).
    pub columns: Vec<Column>,
    pub parent: Vec<Option<usize>>,
    pub parent_label: Vec<Label>,
    /// Label of the edge from the first column back to the center (cycles only).
    pub closing_label: Label,
}

impl Diagram {
    pub fn column(&self, s: usize) -> Column {
        self.columns[s]
    }

    pub fn rank(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn children(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.order
            .iter()
            .copied()
            .filter(move |&c| self.parent[c] == Some(s))
    }

    /// Generator of the first (leftmost) column of a cyclic diagram.
    pub fn first(&self) -> usize {
        self.order[0]
    }

    /// Occurrence counts `(v̄(s), ū(s))`.
    pub fn counts(&self, s: usize) -> (usize, usize) {
        let c = self.columns[s];
        (c.top.count(), c.bottom.count())
    }

    /// Text rendering, one column per line in column order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for &s in &self.order {
            out.push_str(&self.render_column(s));
            out.push('\n');
        }
        out.push_str(&self.render_column(self.center));
        out.push('\n');
        out
    }

    fn render_column(&self, s: usize) -> String {
        let c = self.columns[s];
        let mark = if c.in_j { 'o' } else { 'x' };
        let parent = match self.parent[s] {
            Some(p) => format!("s{p}"),
            None => "-".to_string(),
        };
        format!(
            "s{s} [{mark}] top={} bottom={} parent={parent}",
            c.top, c.bottom
        )
    }
}

fn side_entry(count: usize, left: bool) -> Entry {
    match (count, left) {
        (0, _) => Entry::Zero,
        (1, true) => Entry::OneL,
        (1, false) => Entry::OneR,
        _ => Entry::Two,
    }
}

pub fn build_diagram(t: &BooleanExpression, pair: &CanonicalPair) -> Diagram {
    let n = t.rank();
    let cpos = t.center_position();
    let tally = |positions: &[usize]| {
        let mut count = vec![0usize; n + 1];
        let mut left = vec![false; n + 1];
        for &p in positions {
            let s = t.word().0[p] as usize;
            count[s] += 1;
            if p <= cpos {
                left[s] = true;
            }
        }
        (count, left)
    };
    let (vc, vl) = tally(&pair.v_positions);
    let (uc, ul) = tally(&pair.u_positions);
    let mut columns = vec![
        Column {
            top: Entry::Zero,
            bottom: Entry::Zero,
            in_j: false
        };
        n + 1
    ];
    for s in 1..=n {
        columns[s] = Column {
            top: side_entry(vc[s], vl[s]),
            bottom: side_entry(uc[s], ul[s]),
            in_j: pair.j.contains(s),
        };
    }
    for s in 1..=n {
        if columns[s].top == Entry::OneR {
            if let Some(p) = t.parent(s) {
                if !columns[p].bottom.is_zero() {
                    columns[s].top = Entry::OneCapR;
                }
            }
        }
    }
    Diagram {
        shape: t.shape(),
        center: t.center(),
        order: t.left_order().to_vec(),
        columns,
        parent: t.parent.clone(),
        parent_label: t.parent_label.clone(),
        closing_label: t.closing_label,
    }
}

/// Convenience: canonical pair and diagram in one step.
pub fn diagram_of(
    cox: &Coxeter,
    t: &BooleanExpression,
    v: &Word,
    u: &Word,
    j: GeneratorSet,
) -> Result<Diagram> {
    let pair = canonicalize_pair(cox, t, v, u, j)?;
    Ok(build_diagram(t, &pair))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::coxeter::parse_graph;

    pub(crate) fn dtilde11() -> CoxeterGraph {
        parse_graph(
            "n 11\nedge 1 3 3\nedge 2 3 3\nedge 3 4 3\nedge 4 5 3\nedge 5 6 3\n\
             edge 6 7 3\nedge 7 8 3\nedge 8 9 3\nedge 9 10 3\nedge 9 11 3\nroot 6\n",
        )
        .unwrap()
    }

    fn w(g: &[usize]) -> Word {
        Word::from_gens(g)
    }

    #[test]
    fn path_expression() {
        let t = boolean_expression(&CoxeterGraph::type_a(3)).unwrap();
        assert_eq!(t.word(), &w(&[1, 2, 3, 2, 1]));
        let single = CoxeterGraph::new(1, &[]).unwrap().with_root(1).unwrap();
        assert_eq!(boolean_expression(&single).unwrap().word(), &w(&[1]));
        let unrooted = CoxeterGraph::new(2, &[(1, 2, Label::Finite(3))]).unwrap();
        assert!(matches!(boolean_expression(&unrooted), Err(Error::NoRoot)));
    }

    #[test]
    fn dtilde_expression_layout() {
        let g = dtilde11();
        let t = boolean_expression(&g).unwrap();
        let expected = w(&[1, 2, 3, 4, 5, 10, 11, 9, 8, 7, 6, 7, 8, 9, 11, 10, 5, 4, 3, 2, 1]);
        let cox = Coxeter::new(g);
        assert!(cox.words_equal(t.word(), &expected).unwrap());
        assert_eq!(cox.length(t.word()).unwrap(), 21);
    }

    #[test]
    fn any_children_first_order_gives_the_same_reflection() {
        let g = dtilde11();
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        let other = w(&[2, 1, 3, 11, 10, 9, 4, 8, 5, 7, 6, 7, 5, 8, 4, 9, 10, 11, 3, 1, 2]);
        assert!(cox.words_equal(t.word(), &other).unwrap());
    }

    #[test]
    fn cycle_expression_centered() {
        let g = CoxeterGraph::affine_a(4);
        let t = cycle_expression(&g, 5).unwrap();
        assert_eq!(t.word(), &w(&[1, 2, 3, 4, 5, 4, 3, 2, 1]));
        let cox = Coxeter::new(g);
        assert_eq!(cox.length(t.word()).unwrap(), 9);
    }

    #[test]
    fn enumerate_small() {
        let g = CoxeterGraph::type_a(2);
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        assert_eq!(enumerate_boolean(&cox, &t, None).unwrap().len(), 6);
        let j = GeneratorSet::from_iter([1]);
        let q = enumerate_boolean(&cox, &t, Some(j)).unwrap();
        assert_eq!(q, vec![Word::empty(), w(&[2]), w(&[2, 1])]);
        let one = CoxeterGraph::new(1, &[]).unwrap().with_root(1).unwrap();
        let c1 = Coxeter::new(one.clone());
        let t1 = boolean_expression(&one).unwrap();
        assert_eq!(enumerate_boolean(&c1, &t1, None).unwrap(), vec![Word::empty(), w(&[1])]);
    }

    #[test]
    fn dtilde_canonical_pair() {
        let g = dtilde11();
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        let v = w(&[4, 5, 10, 11, 6, 7, 8, 9, 5, 4, 2, 1]);
        let u = w(&[8, 6, 1]);
        assert_eq!(
            canonicalize(&cox, &t, &v).unwrap(),
            w(&[1, 2, 4, 5, 10, 11, 6, 7, 8, 9, 5, 4])
        );
        let j = GeneratorSet::from_iter([5, 7]);
        let pair = canonicalize_pair(&cox, &t, &v, &u, j).unwrap();
        assert_eq!(pair.ubar, w(&[1, 6, 8]));
        let d = build_diagram(&t, &pair);
        let col = |s: usize| {
            let c = d.column(s);
            (c.top, c.bottom, c.in_j)
        };
        use Entry::*;
        assert_eq!(col(1), (OneL, OneL, false));
        assert_eq!(col(2), (OneL, Zero, false));
        assert_eq!(col(3), (Zero, Zero, false));
        assert_eq!(col(4), (Two, Zero, false));
        assert_eq!(col(5), (Two, Zero, true));
        assert_eq!(col(6), (OneL, OneL, false));
        assert_eq!(col(7), (OneCapR, Zero, true));
        assert_eq!(col(8), (OneR, OneR, false));
        assert_eq!(col(9), (OneCapR, Zero, false));
        assert_eq!(col(10), (OneL, Zero, false));
        assert_eq!(col(11), (OneL, Zero, false));
    }

    #[test]
    fn trivial_diagrams() {
        let g = CoxeterGraph::type_a(3);
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        let d = diagram_of(&cox, &t, t.word(), &Word::empty(), GeneratorSet::empty()).unwrap();
        for s in 1..=3 {
            let c = d.column(s);
            assert_eq!(c.bottom, Entry::Zero);
            assert_eq!(c.top, if s == 3 { Entry::OneL } else { Entry::Two });
        }
        let v = w(&[1, 2, 3, 2]);
        let d = diagram_of(&cox, &t, &v, &v, GeneratorSet::empty()).unwrap();
        for s in 1..=3 {
            let c = d.column(s);
            assert_eq!(c.top, c.bottom);
        }
        let e = canonicalize(&cox, &t, &Word::empty()).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn not_below_is_rejected() {
        let g = CoxeterGraph::type_a(3);
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        let r = canonicalize_pair(&cox, &t, &w(&[1, 2]), &w(&[2, 1]), GeneratorSet::empty());
        assert!(matches!(r, Err(Error::NotBelow)));
    }

    #[test]
    fn render_is_stable() {
        let g = CoxeterGraph::type_a(2);
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        let d = diagram_of(&cox, &t, &w(&[1, 2, 1]), &w(&[1]), GeneratorSet::empty()).unwrap();
        assert_eq!(
            d.render(),
            "s1 [x] top=2 bottom=1l parent=s2\ns2 [x] top=1l bottom=0 parent=-\n"
        );
    }
}
