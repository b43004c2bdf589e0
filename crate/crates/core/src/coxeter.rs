//! Coxeter systems given by their graphs, and the word problem on them.
//!
//! Elements are identified by their lexicographically least reduced word.
//! Reduction and equality are decided by Tits' theorem: two reduced words of
//! the same element are connected by braid moves, and a word is reduced iff
//! no braid-equivalent word contains a factor `ss`. The search works on
//! commutation classes (heaps), so only the nontrivial braid moves (`m >= 3`)
//! are explored explicitly.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};

/// Generator index, 1-based.
pub type Gen = u8;

/// Largest supported rank; generator sets are `u64` bitmasks indexed by generator.
pub const MAX_RANK: usize = 63;

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphMode {
    Tree,
    Cycle,
    General,
}

/// A Coxeter graph on generators `1..=n`.
///
/// Missing edges mean the generators commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterGraph {
    n: usize,
    labels: Vec<Label>,
    edges: Vec<(usize, usize, Label)>,
    root: Option<usize>,
    mode: GraphMode,
}

impl CoxeterGraph {
    /// Builds and validates a connected graph. The mode is detected from the
    /// edge set.
    pub fn new(n: usize, edges: &[(usize, usize, Label)]) -> Result<Self> {
        if n == 0 || n > MAX_RANK {
            return Err(Error::GeneratorOutOfRange(n, MAX_RANK));
        }
        let mut labels = vec![Label::Finite(2); n * n];
        for i in 0..n {
            labels[i * n + i] = Label::Finite(1);
        }
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for &(i, j, m) in edges {
            for g in [i, j] {
                if g == 0 || g > n {
                    return Err(Error::GeneratorOutOfRange(g, n));
                }
            }
            if i == j {
                return Err(Error::MalformedLine {
                    line: 0,
                    reason: format!("self-loop at s{i}"),
                });
            }
            if let Label::Finite(v) = m {
                if v < 3 {
                    return Err(Error::LabelBelow3(i, j, v));
                }
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            labels[(i - 1) * n + (j - 1)] = m;
            labels[(j - 1) * n + (i - 1)] = m;
            normalized.push((key.0, key.1, m));
        }
        let mut g = CoxeterGraph {
            n,
            labels,
            edges: normalized,
            root: None,
            mode: GraphMode::General,
        };
        if !g.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        g.mode = if g.edges.len() == n - 1 {
            GraphMode::Tree
        } else if g.edges.len() == n && (1..=n).all(|v| g.degree(v) == 2) {
            GraphMode::Cycle
        } else {
            GraphMode::General
        };
        Ok(g)
    }

    pub fn with_root(mut self, root: usize) -> Result<Self> {
        if root == 0 || root > self.n {
            return Err(Error::GeneratorOutOfRange(root, self.n));
        }
        self.root = Some(root);
        Ok(self)
    }

    /// Fails with `NotTreeOrCycle` unless the detected mode is `mode`.
    pub fn require_mode(&self, mode: GraphMode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(Error::NotTreeOrCycle)
        }
    }

    /// Path `1 - 2 - ... - n` with all labels 3 (type `A_n`), rooted at `n`.
    pub fn type_a(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1, Label::Finite(3))).collect();
        CoxeterGraph::new(n, &edges).unwrap().with_root(n).unwrap()
    }

    /// Type `B_n` with the short generator `s_0` stored as generator 1:
    /// `1 =4= 2 - 3 - ... - n`. Rooted at `n`, which gives the reflection `t_1`.
    pub fn type_b(n: usize) -> Self {
        let mut edges = vec![(1, 2, Label::Finite(4))];
        edges.extend((2..n).map(|i| (i, i + 1, Label::Finite(3))));
        CoxeterGraph::new(n, &edges).unwrap().with_root(n).unwrap()
    }

    /// Type `D_n` with `s_0, s_1` stored as generators 1 and 2, both attached
    /// to generator 3 (`s_2`). Rooted at `n`.
    pub fn type_d(n: usize) -> Self {
        assert!(n >= 3);
        let mut edges = vec![(1, 3, Label::Finite(3)), (2, 3, Label::Finite(3))];
        edges.extend((3..n).map(|i| (i, i + 1, Label::Finite(3))));
        CoxeterGraph::new(n, &edges).unwrap().with_root(n).unwrap()
    }

    /// Affine `Ã_n`: a cycle on `n + 1` generators, `s_k` stored as `k + 1`.
    pub fn affine_a(n: usize) -> Self {
        assert!(n >= 2);
        let m = n + 1;
        let edges: Vec<_> = (1..=m)
            .map(|i| (i, i % m + 1, Label::Finite(3)))
            .collect();
        CoxeterGraph::new(m, &edges).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn edges(&self) -> &[(usize, usize, Label)] {
        &self.edges
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[(i - 1) * self.n + (j - 1)]
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        i != j && self.label(i, j) == Label::Finite(2)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&w| w != v && !self.commute(v, w))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn all_generators(&self) -> GeneratorSet {
        GeneratorSet::from_iter(1..=self.n)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// n 3
/// edge 1 2 3
/// edge 2 3 inf
/// root 3
/// mode tree
/// ```
pub fn parse_graph(text: &str) -> Result<CoxeterGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    let mut root = None;
    let mut mode = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::MalformedLine {
            line: line_no,
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("not a number: {s}")));
        match parts[0] {
            "n" => {
                if n.is_some() || parts.len() != 2 {
                    return Err(bad("expected a single `n <count>`"));
                }
                n = Some(num(parts[1])?);
            }
            _ if n.is_none() => return Err(bad("`n <count>` must come first")),
            "edge" => {
                if parts.len() != 4 {
                    return Err(bad("expected `edge <i> <j> <m>`"));
                }
                let m = if parts[3] == "inf" {
                    Label::Infinite
                } else {
                    Label::Finite(num(parts[3])? as u32)
                };
                edges.push((num(parts[1])?, num(parts[2])?, m));
            }
            "root" => {
                if parts.len() != 2 {
                    return Err(bad("expected `root <i>`"));
                }
                root = Some(num(parts[1])?);
            }
            "mode" => match parts.get(1..) {
                Some(["tree"]) => mode = Some(GraphMode::Tree),
                Some(["cycle"]) => mode = Some(GraphMode::Cycle),
                _ => return Err(bad("expected `mode tree|cycle`")),
            },
            other => return Err(bad(&format!("unknown directive `{other}`"))),
        }
    }
    let n = n.ok_or(Error::MalformedLine {
        line: 0,
        reason: "missing `n <count>`".into(),
    })?;
    let mut g = CoxeterGraph::new(n, &edges)?;
    if let Some(r) = root {
        g = g.with_root(r)?;
    }
    if let Some(m) = mode {
        g.require_mode(m)?;
    }
    Ok(g)
}

/// Renders a graph back into the text format accepted by [`parse_graph`].
pub fn format_graph(g: &CoxeterGraph) -> String {
    let mut out = format!("n {}\n", g.n);
    for &(i, j, m) in &g.edges {
        out.push_str(&format!("edge {i} {j} {m}\n"));
    }
    if let Some(r) = g.root {
        out.push_str(&format!("root {r}\n"));
    }
    out
}

/// A word in the generators.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_gens(gens: &[usize]) -> Self {
        Word(gens.iter().map(|&g| g as Gen).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Occurrences of `s`.
    pub fn count(&self, s: usize) -> usize {
        self.0.iter().filter(|&&g| g as usize == s).count()
    }

    pub fn support(&self) -> GeneratorSet {
        GeneratorSet::from_iter(self.0.iter().map(|&g| g as usize))
    }

    /// Parses space or comma separated generator indices; `e` or an empty
    /// string is the identity.
    pub fn parse(text: &str) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "ε" {
            return Ok(Word::empty());
        }
        t.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty())
            .map(|p| {
                let p = p.trim_start_matches('s');
                p.parse::<usize>()
                    .ok()
                    .filter(|&g| g >= 1 && g <= MAX_RANK)
                    .map(|g| g as Gen)
                    .ok_or_else(|| Error::MalformedLine {
                        line: 0,
                        reason: format!("bad generator `{p}`"),
                    })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn check_in(&self, g: &CoxeterGraph) -> Result<()> {
        match self.0.iter().find(|&&s| s as usize > g.rank() || s == 0) {
            Some(&s) => Err(Error::GeneratorOutOfRange(s as usize, g.rank())),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// A set of generators as a bitmask (bit `i` is generator `i`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSet(pub u64);

impl GeneratorSet {
    pub fn empty() -> Self {
        GeneratorSet(0)
    }

    pub fn contains(&self, s: usize) -> bool {
        s < 64 && self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1 << s;
    }

    pub fn remove(&mut self, s: usize) {
        self.0 &= !(1 << s);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn intersects(&self, other: GeneratorSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(&self, other: GeneratorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |&i| bits >> i & 1 == 1)
    }

    /// Every subset of `self`, in increasing bitmask order.
    pub fn subsets(&self) -> Vec<GeneratorSet> {
        let full = self.0;
        let mut out = Vec::new();
        let mut sub = 0u64;
        loop {
            out.push(GeneratorSet(sub));
            if sub == full {
                break;
            }
            sub = (sub.wrapping_sub(full)) & full;
        }
        out
    }

    /// Parses a comma separated list such as `2,4`; empty input is the empty set.
    pub fn parse(text: &str) -> Result<GeneratorSet> {
        Ok(Word::parse(text)?.support())
    }
}

impl FromIterator<usize> for GeneratorSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = GeneratorSet::empty();
        for g in iter {
            s.insert(g);
        }
        s
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The heap of a word: `above[i]` holds the positions `j > i` with `i < j`
/// in the heap order (transitive closure of "earlier and not commuting").
struct Heap {
    above: Vec<u64>,
}

impl Heap {
    fn new(word: &[Gen], commute: &[bool], n: usize) -> Heap {
        let len = word.len();
        debug_assert!(len <= 64);
        let mut above = vec![0u64; len];
        for i in (0..len).rev() {
            let a = word[i] as usize;
            let mut set = 0u64;
            for j in i + 1..len {
                if set >> j & 1 == 1 {
                    continue;
                }
                if !commute[a * (n + 1) + word[j] as usize] {
                    set |= 1 << j | above[j];
                }
            }
            above[i] = set;
        }
        Heap { above }
    }

    fn lt(&self, i: usize, j: usize) -> bool {
        self.above[i] >> j & 1 == 1
    }

    /// Some `k` with `i < k < j` in the heap order.
    fn between(&self, i: usize, j: usize) -> bool {
        let mut cand = self.above[i];
        while cand != 0 {
            let k = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if self.lt(k, j) {
                return true;
            }
        }
        false
    }
}

/// Descents of a reduced element, each with a reduced word that ends (or
/// starts) with that descent removed.
struct ElementInfo {
    rdes: u64,
    ldes: u64,
    right_witness: HashMap<Gen, Vec<Gen>>,
    left_witness: HashMap<Gen, Vec<Gen>>,
}

impl ElementInfo {
    fn collect<'a>(classes: impl Iterator<Item = &'a Vec<Gen>>, cox: &Coxeter) -> ElementInfo {
        let mut info = ElementInfo {
            rdes: 0,
            ldes: 0,
            right_witness: HashMap::new(),
            left_witness: HashMap::new(),
        };
        let drop = |x: &[Gen], i: usize| -> Vec<Gen> {
            x.iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &g)| g)
                .collect()
        };
        for x in classes {
            let heap = cox.heap(x);
            let mut has_pred = 0u64;
            for a in &heap.above {
                has_pred |= a;
            }
            for (i, &g) in x.iter().enumerate() {
                if heap.above[i] == 0 && info.rdes >> g & 1 == 0 {
                    info.rdes |= 1 << g;
                    info.right_witness.insert(g, drop(x, i));
                }
                if has_pred >> i & 1 == 0 && info.ldes >> g & 1 == 0 {
                    info.ldes |= 1 << g;
                    info.left_witness.insert(g, drop(x, i));
                }
            }
        }
        info
    }
}

/// Solves the word problem of a Coxeter group given by its graph.
///
/// Results are memoized per instance; the cache is not shared across threads.
pub struct Coxeter {
    graph: CoxeterGraph,
    commute: Vec<bool>,
    braid: Vec<(Gen, Gen, usize)>,
    budget: usize,
    cache: RefCell<HashMap<Vec<Gen>, Rc<Word>>>,
    info: RefCell<HashMap<Word, Rc<ElementInfo>>>,
    intervals: RefCell<HashMap<Word, Rc<HashSet<Word>>>>,
}

impl Coxeter {
    pub fn new(graph: CoxeterGraph) -> Self {
        Coxeter::with_budget(graph, DEFAULT_BUDGET)
    }

    pub fn with_budget(graph: CoxeterGraph, budget: usize) -> Self {
        let n = graph.rank();
        let mut commute = vec![true; (n + 1) * (n + 1)];
        let mut braid = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                let c = graph.commute(a, b);
                commute[a * (n + 1) + b] = c;
                if a < b {
                    if let Label::Finite(m) = graph.label(a, b) {
                        if m >= 3 {
                            braid.push((a as Gen, b as Gen, m as usize));
                        }
                    }
                }
            }
        }
        Coxeter {
            graph,
            commute,
            braid,
            budget,
            cache: RefCell::new(HashMap::new()),
            info: RefCell::new(HashMap::new()),
            intervals: RefCell::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &CoxeterGraph {
        &self.graph
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn heap(&self, w: &[Gen]) -> Heap {
        Heap::new(w, &self.commute, self.graph.rank())
    }

    /// Lexicographically least word in the commutation class of `w`.
    fn trace_normal(&self, w: &[Gen]) -> Vec<Gen> {
        let heap = self.heap(w);
        let len = w.len();
        let mut preds = vec![0usize; len];
        for i in 0..len {
            let mut a = heap.above[i];
            while a != 0 {
                let j = a.trailing_zeros() as usize;
                a &= a - 1;
                preds[j] += 1;
            }
        }
        let mut used = vec![false; len];
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let pick = (0..len)
                .filter(|&i| !used[i] && preds[i] == 0)
                .min_by_key(|&i| w[i])
                .expect("heap has a minimal element");
            used[pick] = true;
            out.push(w[pick]);
            let mut a = heap.above[pick];
            while a != 0 {
                let j = a.trailing_zeros() as usize;
                a &= a - 1;
                preds[j] -= 1;
            }
        }
        out
    }

    fn find_cancellation(&self, w: &[Gen], heap: &Heap) -> Option<(usize, usize)> {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] == w[j] {
                    // The first later occurrence is the only candidate.
                    if !heap.between(i, j) {
                        return Some((i, j));
                    }
                    break;
                }
            }
        }
        None
    }

    fn braid_neighbors(&self, w: &[Gen], heap: &Heap) -> Vec<Vec<Gen>> {
        let mut out = Vec::new();
        for &(a, b, m) in &self.braid {
            let pos: Vec<usize> = (0..w.len()).filter(|&p| w[p] == a || w[p] == b).collect();
            if pos.len() < m {
                continue;
            }
            for start in 0..=pos.len() - m {
                let window = &pos[start..start + m];
                if window.windows(2).any(|p| w[p[0]] == w[p[1]]) {
                    continue;
                }
                let (first, last) = (window[0], window[m - 1]);
                let blocked = (first + 1..last)
                    .filter(|k| !window.contains(k))
                    .any(|k| heap.lt(first, k) && heap.lt(k, last));
                if blocked {
                    continue;
                }
                let mut before = Vec::with_capacity(w.len());
                let mut after = Vec::new();
                for (k, &g) in w.iter().enumerate() {
                    if window.contains(&k) {
                        continue;
                    }
                    if k > first && heap.lt(first, k) {
                        after.push(g);
                    } else {
                        before.push(g);
                    }
                }
                let other = if w[first] == a { b } else { a };
                for t in 0..m {
                    before.push(if t % 2 == 0 { other } else { w[first] });
                }
                before.extend(after);
                out.push(before);
            }
        }
        out
    }

    fn cached(&self, key: &[Gen]) -> Option<Rc<Word>> {
        self.cache.borrow().get(key).cloned()
    }

    /// The canonical (lexicographically least reduced) word of the element
    /// represented by `w`.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        w.check_in(&self.graph)?;
        if let Some(hit) = self.cached(&w.0) {
            return Ok((*hit).clone());
        }
        let mut current = self.trace_normal(&w.0);
        if let Some(hit) = self.cached(&current) {
            self.cache.borrow_mut().insert(w.0.clone(), hit.clone());
            return Ok((*hit).clone());
        }
        'outer: loop {
            let mut visited: HashSet<Vec<Gen>> = HashSet::new();
            let mut queue = VecDeque::new();
            visited.insert(current.clone());
            queue.push_back(current.clone());
            let mut best = current.clone();
            while let Some(x) = queue.pop_front() {
                let heap = self.heap(&x);
                if let Some((i, j)) = self.find_cancellation(&x, &heap) {
                    let shorter: Vec<Gen> = x
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, &g)| g)
                        .collect();
                    current = self.trace_normal(&shorter);
                    if let Some(hit) = self.cached(&current) {
                        self.cache.borrow_mut().insert(w.0.clone(), hit.clone());
                        return Ok((*hit).clone());
                    }
                    continue 'outer;
                }
                for y in self.braid_neighbors(&x, &heap) {
                    let y = self.trace_normal(&y);
                    if !visited.contains(&y) {
                        if visited.len() >= self.budget {
                            return Err(Error::SearchBudgetExceeded(self.budget));
                        }
                        if y < best {
                            best = y.clone();
                        }
                        visited.insert(y.clone());
                        queue.push_back(y);
                    }
                }
            }
            let canon = Rc::new(Word(best));
            let info = ElementInfo::collect(visited.iter(), self);
            self.info
                .borrow_mut()
                .insert((*canon).clone(), Rc::new(info));
            let mut cache = self.cache.borrow_mut();
            for v in visited {
                cache.insert(v, canon.clone());
            }
            cache.insert(w.0.clone(), canon.clone());
            return Ok((*canon).clone());
        }
    }

    /// A reduced word for `w`; the canonical one.
    pub fn reduce(&self, w: &Word) -> Result<Word> {
        self.normal_form(w)
    }

    pub fn words_equal(&self, a: &Word, b: &Word) -> Result<bool> {
        Ok(self.normal_form(a)? == self.normal_form(b)?)
    }

    pub fn length(&self, w: &Word) -> Result<usize> {
        Ok(self.normal_form(w)?.len())
    }

    fn element_info(&self, w: &Word) -> Result<(Word, Rc<ElementInfo>)> {
        let nf = self.normal_form(w)?;
        let info = self.info.borrow().get(&nf).cloned();
        Ok((nf, info.expect("every cached normal form has its descents recorded")))
    }

    /// Canonical word of `w * s`.
    pub fn mul_gen(&self, w: &Word, s: usize) -> Result<Word> {
        Word::from_gens(&[s]).check_in(&self.graph)?;
        let (nf, info) = self.element_info(w)?;
        if info.rdes >> s & 1 == 1 {
            return self.normal_form(&Word(info.right_witness[&(s as Gen)].clone()));
        }
        let mut x = nf.0;
        x.push(s as Gen);
        self.normal_form(&Word(x))
    }

    /// Canonical word of `s * w`.
    pub fn gen_mul(&self, s: usize, w: &Word) -> Result<Word> {
        Word::from_gens(&[s]).check_in(&self.graph)?;
        let (nf, info) = self.element_info(w)?;
        if info.ldes >> s & 1 == 1 {
            return self.normal_form(&Word(info.left_witness[&(s as Gen)].clone()));
        }
        let mut x = Vec::with_capacity(nf.len() + 1);
        x.push(s as Gen);
        x.extend_from_slice(&nf.0);
        self.normal_form(&Word(x))
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Result<Word> {
        let mut x = a.0.clone();
        x.extend_from_slice(&b.0);
        self.normal_form(&Word(x))
    }

    pub fn inverse(&self, w: &Word) -> Result<Word> {
        self.normal_form(&w.reversed())
    }

    /// Descent set of `w` on the given side.
    pub fn descents(&self, w: &Word, side: Side) -> Result<GeneratorSet> {
        let (_, info) = self.element_info(w)?;
        Ok(GeneratorSet(match side {
            Side::Right => info.rdes,
            Side::Left => info.ldes,
        }))
    }

    /// `u` is a minimal left coset representative: no left descent in `J`.
    pub fn in_quotient(&self, j: GeneratorSet, u: &Word) -> Result<bool> {
        let (_, info) = self.element_info(u)?;
        Ok(info.ldes & j.0 == 0)
    }

    /// All elements below `v`, as canonical words: the set of products of
    /// subwords of a reduced word of `v`.
    pub fn lower_interval(&self, v: &Word) -> Result<Rc<HashSet<Word>>> {
        let v = self.normal_form(v)?;
        if let Some(hit) = self.intervals.borrow().get(&v) {
            return Ok(hit.clone());
        }
        let mut set: HashSet<Word> = HashSet::new();
        set.insert(Word::empty());
        for &s in &v.0 {
            let extra: Vec<Word> = set
                .iter()
                .map(|x| self.mul_gen(x, s as usize))
                .collect::<Result<_>>()?;
            set.extend(extra);
        }
        let rc = Rc::new(set);
        self.intervals.borrow_mut().insert(v, rc.clone());
        Ok(rc)
    }

    /// Bruhat order via the subword property.
    pub fn bruhat_leq(&self, u: &Word, v: &Word) -> Result<bool> {
        let u = self.normal_form(u)?;
        let v = self.normal_form(v)?;
        if u.len() > v.len() {
            return Ok(false);
        }
        if u.len() == v.len() {
            return Ok(u == v);
        }
        Ok(self.lower_interval(&v)?.contains(&u))
    }

    /// Elements of the standard parabolic subgroup generated by `j`, by
    /// closure under right multiplication. Fails past `cap` elements.
    pub fn parabolic_subgroup(&self, j: GeneratorSet, cap: usize) -> Result<Vec<Word>> {
        let mut seen = HashSet::new();
        let mut order = vec![Word::empty()];
        seen.insert(Word::empty());
        let mut i = 0;
        while i < order.len() {
            let x = order[i].clone();
            i += 1;
            for s in j.iter() {
                let y = self.mul_gen(&x, s)?;
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::ParabolicSubgroupTooLarge(cap));
                    }
                    order.push(y);
                }
            }
        }
        Ok(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(g: &[usize]) -> Word {
        Word::from_gens(g)
    }

    fn a2() -> Coxeter {
        Coxeter::new(CoxeterGraph::type_a(2))
    }

    #[test]
    fn parse_path_graph() {
        let g = parse_graph("n 3\nedge 1 2 3\nedge 2 3 3\nroot 3\n").unwrap();
        assert_eq!(g.rank(), 3);
        assert_eq!(g.root(), Some(3));
        assert_eq!(g.mode(), GraphMode::Tree);
        assert_eq!(g.label(1, 2), Label::Finite(3));
        assert!(g.commute(1, 3));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_graph("n 2\nedge 1 2 2\n"),
            Err(Error::LabelBelow3(1, 2, 2))
        ));
        assert!(matches!(
            parse_graph("n 2\nedge 1 2 3\nedge 2 1 4\n"),
            Err(Error::DuplicateEdge(1, 2))
        ));
        assert!(matches!(
            parse_graph("n 3\nedge 1 2 3\n"),
            Err(Error::DisconnectedGraph)
        ));
        assert!(matches!(
            parse_graph("edge 1 2 3\n"),
            Err(Error::MalformedLine { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("n 2\nedge 1 2 x\n"),
            Err(Error::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn triangle_modes() {
        let text = "n 3\nedge 1 2 3\nedge 2 3 3\nedge 3 1 3\n";
        assert_eq!(parse_graph(text).unwrap().mode(), GraphMode::Cycle);
        let tree = format!("{text}mode tree\n");
        assert!(matches!(parse_graph(&tree), Err(Error::NotTreeOrCycle)));
        let cyc = format!("{text}mode cycle\n");
        assert!(parse_graph(&cyc).is_ok());
    }

    #[test]
    fn infinite_label_round_trip() {
        let g = parse_graph("n 2\nedge 1 2 inf\n# comment\n").unwrap();
        assert_eq!(g.label(1, 2), Label::Infinite);
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
        let cox = Coxeter::new(g);
        assert_eq!(cox.length(&w(&[1, 2, 1, 2, 1, 2])).unwrap(), 6);
        assert!(!cox.words_equal(&w(&[1, 2, 1]), &w(&[2, 1, 2])).unwrap());
    }

    #[test]
    fn braid_relations() {
        let cox = a2();
        assert!(cox.words_equal(&w(&[1, 2, 1]), &w(&[2, 1, 2])).unwrap());
        assert!(!cox.words_equal(&w(&[1]), &w(&[2])).unwrap());
        let b2 = Coxeter::new(
            CoxeterGraph::new(2, &[(1, 2, Label::Finite(4))]).unwrap(),
        );
        assert!(b2.words_equal(&w(&[1, 2, 1, 2]), &w(&[2, 1, 2, 1])).unwrap());
        assert!(!b2.words_equal(&w(&[1, 2, 1]), &w(&[2, 1, 2])).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let cox = a2();
        assert_eq!(cox.reduce(&w(&[1, 1])).unwrap(), Word::empty());
        assert_eq!(cox.reduce(&w(&[1, 2, 1])).unwrap().len(), 3);
        // s1s2s1s2 = s2s1s2s2 = s2s1 in A_2
        let r = cox.reduce(&w(&[1, 2, 1, 2])).unwrap();
        assert_eq!(r, w(&[2, 1]));
    }

    #[test]
    fn descents_in_a2() {
        let cox = a2();
        assert!(cox.descents(&Word::empty(), Side::Right).unwrap().is_empty());
        assert_eq!(
            cox.descents(&w(&[1, 2]), Side::Right).unwrap(),
            GeneratorSet::from_iter([2])
        );
        assert_eq!(
            cox.descents(&w(&[1, 2, 1]), Side::Right).unwrap(),
            GeneratorSet::from_iter([1, 2])
        );
    }

    #[test]
    fn quotient_membership() {
        let cox = a2();
        let j1 = GeneratorSet::from_iter([1]);
        assert!(cox.in_quotient(GeneratorSet::empty(), &w(&[1, 2, 1])).unwrap());
        assert!(!cox.in_quotient(j1, &w(&[1])).unwrap());
        assert!(cox.in_quotient(j1, &w(&[2, 1])).unwrap());
    }

    #[test]
    fn bruhat_examples() {
        let cox = a2();
        assert!(cox.bruhat_leq(&Word::empty(), &w(&[2, 1])).unwrap());
        assert!(cox.bruhat_leq(&w(&[1]), &w(&[2, 1])).unwrap());
        assert!(!cox.bruhat_leq(&w(&[1, 2]), &w(&[2, 1])).unwrap());
        assert_eq!(cox.lower_interval(&w(&[1, 2, 1])).unwrap().len(), 6);
    }

    #[test]
    fn parabolic_subgroup_orders() {
        let b3 = Coxeter::new(CoxeterGraph::type_b(3));
        let j = GeneratorSet::from_iter([1, 2]);
        assert_eq!(b3.parabolic_subgroup(j, 100).unwrap().len(), 8);
        let a3 = Coxeter::new(CoxeterGraph::type_a(3));
        assert_eq!(a3.parabolic_subgroup(a3.graph().all_generators(), 100).unwrap().len(), 24);
        let inf = Coxeter::new(parse_graph("n 2\nedge 1 2 inf\n").unwrap());
        assert!(matches!(
            inf.parabolic_subgroup(GeneratorSet::from_iter([1, 2]), 50),
            Err(Error::ParabolicSubgroupTooLarge(50))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let cox = Coxeter::with_budget(CoxeterGraph::type_a(4), 1);
        let r = cox.reduce(&w(&[1, 2, 3, 4, 3, 2, 1]));
        assert!(matches!(r, Err(Error::SearchBudgetExceeded(1))));
    }

    #[test]
    fn generator_set_subsets() {
        let s = GeneratorSet::from_iter([2, 4]);
        assert_eq!(s.subsets().len(), 4);
        assert_eq!(GeneratorSet::parse("2,4").unwrap(), s);
        assert_eq!(s.to_string(), "{2,4}");
    }
}
