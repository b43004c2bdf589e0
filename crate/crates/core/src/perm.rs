//! Window notation for `A_n`, `B_n` and `D_n` and the permutation forms of
//! the boolean formulas.
//!
//! Core generator numbering: in `A_n` generator `i` is `(i, i+1)`. In `B_n`
//! generator 1 is `s_0 = (1,-1)` and generator `i+1` is `s_i`. In `D_n`
//! generator 1 is `s_0 = (1,-2)(2,-1)`, generator 2 is `s_1 = (1,2)` and
//! generator `i+1` is `s_i`.

use std::collections::BTreeSet;
use std::fmt;

use crate::boolean::Entry;
use crate::coxeter::{Coxeter, CoxeterGraph, GeneratorSet, Word};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    D,
}

/// The two maximal boolean reflections of `B_n`:
/// `t_1 = s_0 s_1 ... s_{n-1} ... s_0` and `t_2 = s_{n-1} ... s_0 ... s_{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    T1,
    T2,
}

impl Family {
    /// The Coxeter graph, rooted so that its boolean expression is the
    /// maximal boolean reflection (`t_1` for `B_n`).
    pub fn graph(self, n: usize) -> CoxeterGraph {
        match self {
            Family::A => CoxeterGraph::type_a(n),
            Family::B => CoxeterGraph::type_b(n),
            Family::D => CoxeterGraph::type_d(n),
        }
    }

    /// Root of the expression of `t_1` (or the unique maximal reflection) and `t_2`.
    pub fn root(self, n: usize, variant: Variant) -> usize {
        match (self, variant) {
            (Family::B, Variant::T2) => 1,
            _ => n,
        }
    }

    /// Index of core generator `g` in the family's own naming.
    pub fn family_index(self, g: usize) -> usize {
        match self {
            Family::A => g,
            Family::B | Family::D => g - 1,
        }
    }

    /// Core generator of the family's own index.
    pub fn core_index(self, i: usize) -> usize {
        match self {
            Family::A => i,
            Family::B | Family::D => i + 1,
        }
    }
}

/// A (signed) permutation in window notation `[π(1), ..., π(m)]`.
///
/// For `A_n` the window has `n + 1` entries; for `B_n` and `D_n` it has `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedWindow {
    family: Family,
    n: usize,
    values: Vec<i64>,
}

impl SignedWindow {
    pub fn new(family: Family, n: usize, values: Vec<i64>) -> Result<Self> {
        let len = match family {
            Family::A => n + 1,
            Family::B | Family::D => n,
        };
        let bad = |why: String| Err(Error::InvalidWindow(why));
        if values.len() != len {
            return bad(format!("expected {len} entries, got {}", values.len()));
        }
        let mut seen = vec![false; len + 1];
        for &x in &values {
            let a = x.unsigned_abs() as usize;
            if x == 0 || a > len || seen[a] {
                return bad(format!("{x} repeats or is out of range"));
            }
            if family == Family::A && x < 0 {
                return bad("negative entry in type A".into());
            }
            seen[a] = true;
        }
        if family == Family::D && values.iter().filter(|&&x| x < 0).count() % 2 == 1 {
            return bad("odd number of negative entries in type D".into());
        }
        Ok(SignedWindow { family, n, values })
    }

    pub fn identity(family: Family, n: usize) -> Self {
        let len = if family == Family::A { n + 1 } else { n };
        SignedWindow {
            family,
            n,
            values: (1..=len as i64).collect(),
        }
    }

    /// Parses comma-separated signed integers; the rank is read off the length.
    pub fn parse(family: Family, text: &str) -> Result<Self> {
        let values = text
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidWindow(format!("bad entry {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = match family {
            Family::A => values.len().saturating_sub(1),
            Family::B | Family::D => values.len(),
        };
        SignedWindow::new(family, n, values)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    fn size(&self) -> usize {
        self.values.len()
    }

    /// `π(i)` for `1 <= |i| <= size`, with `π(-i) = -π(i)`.
    pub fn at(&self, i: i64) -> i64 {
        let v = self.values[i.unsigned_abs() as usize - 1];
        if i < 0 {
            -v
        } else {
            v
        }
    }

    pub fn inverse(&self) -> Self {
        let mut values = vec![0; self.size()];
        for (k, &x) in self.values.iter().enumerate() {
            let i = k as i64 + 1;
            values[x.unsigned_abs() as usize - 1] = if x < 0 { -i } else { i };
        }
        SignedWindow { values, ..*self }
    }

    /// `π · s` for core generator `g`.
    pub fn mul_gen(&self, g: usize) -> Self {
        let mut w = self.clone();
        let v = &mut w.values;
        match (self.family, g) {
            (Family::B, 1) => v[0] = -v[0],
            (Family::D, 1) => {
                let (a, b) = (v[0], v[1]);
                v[0] = -b;
                v[1] = -a;
            }
            (Family::A, i) => v.swap(i - 1, i),
            (_, i) => v.swap(i - 2, i - 1),
        }
        w
    }

    /// Whether core generator `g` is a right descent.
    pub fn has_descent(&self, g: usize) -> bool {
        let v = &self.values;
        match (self.family, g) {
            (Family::B, 1) => v[0] < 0,
            (Family::D, 1) => v[0] + v[1] < 0,
            (Family::A, i) => v[i - 1] > v[i],
            (_, i) => v[i - 2] > v[i - 1],
        }
    }

    pub fn from_word(family: Family, n: usize, w: &Word) -> Result<Self> {
        w.check_in(&family.graph(n))?;
        Ok(w.letters()
            .iter()
            .fold(SignedWindow::identity(family, n), |p, &g| p.mul_gen(g as usize)))
    }

    /// A reduced word, found by stripping right descents.
    pub fn to_word(&self) -> Word {
        let mut p = self.clone();
        let mut letters = Vec::new();
        while let Some(g) = (1..=self.n).find(|&g| p.has_descent(g)) {
            letters.push(g);
            p = p.mul_gen(g);
        }
        letters.reverse();
        Word::from_gens(&letters)
    }

    /// Number of entries `i <= k` with `|π(i)| <= k`.
    fn prefix_overlap(&self, k: usize) -> usize {
        self.values[..k]
            .iter()
            .filter(|x| x.unsigned_abs() as usize <= k)
            .count()
    }

    /// `π([a, b]) = [a, b]` on absolute values and with positive signs.
    fn stabilizes(&self, a: usize, b: usize) -> bool {
        (a..=b).all(|i| {
            let x = self.values[i - 1];
            x > 0 && (a..=b).contains(&(x as usize))
        }) || a > b
    }
}

impl fmt::Display for SignedWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Boolean recognition from the window. `variant` matters for `B_n` only.
pub fn is_boolean(pi: &SignedWindow, variant: Variant) -> bool {
    let n = pi.rank();
    let overlap_ok = (1..=n).all(|i| pi.prefix_overlap(i) + 1 >= i);
    if !overlap_ok {
        return false;
    }
    let v = pi.values();
    let negatives: Vec<usize> = (0..v.len()).filter(|&k| v[k] < 0).collect();
    match (pi.family(), variant) {
        (Family::A, _) => true,
        (Family::B, Variant::T1) => negatives.iter().all(|&k| k == 0 || v[k] == -1),
        (Family::B, Variant::T2) => {
            let m = (0..v.len()).take_while(|&k| v[k].unsigned_abs() as usize == k + 1).count();
            // The negative entry sits in the first m + 1 places or holds the
            // smallest non-fixed value.
            let smallest = (1..=v.len() as i64).find(|&i| v[i as usize - 1] != i);
            negatives.len() <= 1
                && negatives.iter().all(|&k| k <= m || Some(-v[k]) == smallest)
        }
        (Family::D, _) => {
            let ok = negatives.iter().all(|&k| k <= 1 || v[k] == -1 || v[k] == -2);
            let small = |x: i64| x.abs() <= 2;
            ok && (small(v[0]) || small(v[1]) || (v[0] < 0) == (v[1] < 0))
        }
    }
}

/// Index sets of a boolean window, in the family's own indexing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PermStats {
    pub exc: BTreeSet<usize>,
    pub exc_inv: BTreeSet<usize>,
    pub fix: BTreeSet<usize>,
    pub nfix: BTreeSet<usize>,
}

/// `{i : i+1 is a top excedance}`, i.e. some `j < i+1` has `π(j) = i+1`.
fn excedances(pi: &SignedWindow) -> BTreeSet<usize> {
    pi.values()
        .iter()
        .enumerate()
        .filter(|&(k, &x)| x > k as i64 + 1)
        .map(|(_, &x)| x as usize - 1)
        .collect()
}

pub fn stats(pi: &SignedWindow) -> Result<PermStats> {
    let boolean = is_boolean(pi, Variant::T1) || is_boolean(pi, Variant::T2);
    if !boolean {
        return Err(Error::NotBooleanWindow);
    }
    let n = pi.rank();
    let exc = excedances(pi);
    let exc_inv = excedances(&pi.inverse());
    let (fix, nfix) = match pi.family() {
        Family::A => {
            let fix: BTreeSet<usize> = (1..=n).filter(|&i| pi.stabilizes(1, i)).collect();
            let nfix = (1..=n)
                .filter(|i| !fix.contains(i) && pi.at(*i as i64 + 1) == *i as i64 + 1)
                .collect();
            (fix, nfix)
        }
        Family::B | Family::D => {
            let fix: BTreeSet<usize> = (0..n).filter(|&i| pi.stabilizes(i + 1, n)).collect();
            let mut nfix: BTreeSet<usize> = (1..n)
                .filter(|i| !fix.contains(i) && pi.at(*i as i64) == *i as i64)
                .collect();
            if pi.values().iter().filter(|&&x| x < 0).count() == 2 {
                nfix.insert(0);
            }
            (fix, nfix)
        }
    };
    Ok(PermStats {
        exc,
        exc_inv,
        fix,
        nfix,
    })
}

fn require_family(pi: &SignedWindow, rho: &SignedWindow, family: Family) -> Result<()> {
    if pi.family() != family || rho.family() != family || pi.rank() != rho.rank() {
        return Err(Error::InvalidWindow(format!(
            "expected two type {family:?} windows of the same rank"
        )));
    }
    Ok(())
}

/// `π <= ρ`, decided by the word problem.
fn check_leq(cox: &Coxeter, pi: &SignedWindow, rho: &SignedWindow) -> Result<()> {
    if cox.bruhat_leq(&pi.to_word(), &rho.to_word())? {
        Ok(())
    } else {
        Err(Error::NotComparable)
    }
}

/// `A_{π,ρ} = {i : i, i+1 ∈ NFix(ρ), i+1 ∈ Fix(π)}`.
pub fn set_a(pi: &PermStats, rho: &PermStats) -> BTreeSet<usize> {
    rho.nfix
        .iter()
        .copied()
        .filter(|i| rho.nfix.contains(&(i + 1)) && pi.fix.contains(&(i + 1)))
        .collect()
}

/// First index `y ∈ J` at which a parabolic `A_n` polynomial vanishes, if any.
///
/// Column `y` of the diagram has the single child `y - 1` and parent `y + 1`.
/// Entries come from [`entries`]; a right entry counts as `1_R` when the
/// parent's bottom is nonzero.
pub fn vanishing_a(j: GeneratorSet, pi: &SignedWindow, rho: &SignedWindow) -> Result<Option<usize>> {
    use Entry::*;
    let n = pi.rank();
    let (bottom, top) = (entries(pi, Variant::T1)?, entries(rho, Variant::T1)?);
    let col = |i: usize| if (1..=n).contains(&i) { (top[i], bottom[i]) } else { (Zero, Zero) };
    let two_not_two = |(t, b): (Entry, Entry)| t == Two && b != Two;
    let harmless = |c: (Entry, Entry)| {
        matches!(
            c,
            (Zero, Zero) | (OneL, Zero) | (OneR, Zero) | (OneR, OneR) | (Two, Zero) | (Two, OneR)
        )
    };
    Ok((1..=n).filter(|&y| j.contains(y)).find(|&y| {
        let (yt, yb) = col(y);
        let x = col(y - 1);
        let parent_bottom = col(y + 1).1;
        let upper = parent_bottom != Zero;
        if yb == Zero {
            if matches!(x, (OneL, OneL) | (Two, Two)) {
                return false;
            }
            return match yt {
                Zero => false,
                OneR if upper => false,
                OneR => true,
                OneL => two_not_two(x) || (y >= 2 && x.1 == Zero),
                Two => !two_not_two(x),
                _ => false,
            };
        }
        let cprime1 = yt == Two && yb == OneR && harmless(x);
        let cprime2 = (yt, yb) == (OneL, OneL) && two_not_two(x);
        let cdouble = x == (Two, OneL) && (yb == OneL || (yb == OneR && !upper));
        cprime1 || cprime2 || cdouble
    }))
}

/// Parabolic `P^J_{π,ρ}` in `A_n` from permutation statistics.
pub fn kl_a(cox: &Coxeter, j: GeneratorSet, pi: &SignedWindow, rho: &SignedWindow) -> Result<Poly> {
    require_family(pi, rho, Family::A)?;
    let (sp, sr) = (stats(pi)?, stats(rho)?);
    for w in [pi, rho] {
        if !cox.in_quotient(j, &w.to_word())? {
            return Err(Error::NotInQuotient);
        }
    }
    check_leq(cox, pi, rho)?;
    if vanishing_a(j, pi, rho)?.is_some() {
        return Ok(Poly::zero());
    }
    let a = set_a(&sp, &sr);
    let marked = a.iter().filter(|&&i| j.contains(i + 1)).count();
    Ok(&Poly::monomial(1, marked) * &Poly::one_plus_q().pow((a.len() - marked) as u32))
}

/// Ordinary `P_{π,ρ} = (1+q)^{#A}` in `A_n`.
pub fn kl_a_ordinary(cox: &Coxeter, pi: &SignedWindow, rho: &SignedWindow) -> Result<Poly> {
    require_family(pi, rho, Family::A)?;
    let (sp, sr) = (stats(pi)?, stats(rho)?);
    check_leq(cox, pi, rho)?;
    Ok(Poly::one_plus_q().pow(set_a(&sp, &sr).len() as u32))
}

fn indices_of(e: &[Entry], want: Entry) -> BTreeSet<usize> {
    (1..e.len()).filter(|&g| e[g] == want).map(|g| g - 1).collect()
}

/// `B_{π,ρ}` (for `t_1`) or `B'_{π,ρ}` (for `t_2`): indices `i` with
/// `s_i, s_{i+1}` doubled in `ρ` and the one nearer the root absent from `π`.
pub fn set_b(pi: &SignedWindow, rho: &SignedWindow, variant: Variant) -> Result<BTreeSet<usize>> {
    let nfix = indices_of(&entries(rho, variant)?, Entry::Two);
    let fix = indices_of(&entries(pi, variant)?, Entry::Zero);
    Ok(nfix
        .iter()
        .copied()
        .filter(|&i| {
            let parent = match variant {
                Variant::T1 => i + 1,
                Variant::T2 => i,
            };
            nfix.contains(&(i + 1)) && fix.contains(&parent)
        })
        .collect())
}

/// Ordinary `P_{π,ρ} = (1+q)^{#B}` in `B_n` below `t_1` or `t_2`.
pub fn kl_b(cox: &Coxeter, pi: &SignedWindow, rho: &SignedWindow, variant: Variant) -> Result<Poly> {
    require_family(pi, rho, Family::B)?;
    if !is_boolean(rho, variant) || !is_boolean(pi, variant) {
        return Err(Error::WrongVariant);
    }
    check_leq(cox, pi, rho)?;
    Ok(Poly::one_plus_q().pow(set_b(pi, rho, variant)?.len() as u32))
}

/// Diagram columns of `(π, ρ)` in `D_n`, as `(top, bottom)` by core generator.
fn columns_d(pi: &SignedWindow, rho: &SignedWindow) -> Result<Vec<(Entry, Entry)>> {
    let (top, bottom) = (entries(rho, Variant::T1)?, entries(pi, Variant::T1)?);
    Ok(top.into_iter().zip(bottom).collect())
}

fn doubled_not_two(c: (Entry, Entry)) -> bool {
    c.0 == Entry::Two && c.1 != Entry::Two
}

/// Chain clause: `s_{i+1} = (2,0)` above `s_i = (2,not 2)` for `i >= 2`.
pub fn d_chain(pi: &SignedWindow, rho: &SignedWindow) -> Result<usize> {
    let c = columns_d(pi, rho)?;
    Ok((3..pi.rank())
        .filter(|&g| c[g + 1] == (Entry::Two, Entry::Zero) && doubled_not_two(c[g]))
        .count())
}

/// Branch clauses at `s_2`, whose children are `s_0` and `s_1`:
/// `(1_*,0)` over two doubled children, `(2,0)` over exactly one, and
/// `(2,0)` over both. The last gives the `(1+2q)` factor.
pub fn d_branch(pi: &SignedWindow, rho: &SignedWindow) -> Result<(bool, bool, bool)> {
    let c = columns_d(pi, rho)?;
    let y = c[3];
    let k = [c[1], c[2]].into_iter().filter(|&x| doubled_not_two(x)).count();
    let open = y.1 == Entry::Zero;
    Ok((
        open && y.0.is_one() && k == 2,
        open && y.0 == Entry::Two && k == 1,
        open && y.0 == Entry::Two && k == 2,
    ))
}

/// Exponents `(D, D')` of `(1+q)^D (1+2q)^{D'}`.
pub fn exponents_d(pi: &SignedWindow, rho: &SignedWindow) -> Result<(usize, usize)> {
    let (one_two, two_one, two_two) = d_branch(pi, rho)?;
    let d = d_chain(pi, rho)? + usize::from(one_two || two_one);
    Ok((d, usize::from(two_two)))
}

/// Ordinary `P_{π,ρ}` in `D_n`.
pub fn kl_d(cox: &Coxeter, pi: &SignedWindow, rho: &SignedWindow) -> Result<Poly> {
    require_family(pi, rho, Family::D)?;
    if !is_boolean(rho, Variant::T1) || !is_boolean(pi, Variant::T1) {
        return Err(Error::NotBooleanWindow);
    }
    check_leq(cox, pi, rho)?;
    let (d, dprime) = exponents_d(pi, rho)?;
    let one_two_q = Poly::from_coeffs(vec![1, 2]);
    Ok(&Poly::one_plus_q().pow(d as u32) * &one_two_q.pow(dprime as u32))
}

/// Top row of the diagram of `π` under the maximal reflection of `variant`,
/// read off the window. Indexed by core generator; index 0 is unused.
pub fn entries(pi: &SignedWindow, variant: Variant) -> Result<Vec<Entry>> {
    if !is_boolean(pi, variant) {
        return Err(Error::NotBooleanWindow);
    }
    let n = pi.rank();
    let inv = pi.inverse();
    // `x` is a top excedance when `π(j) = x` for some signed `j < x`.
    let top_exc = |w: &SignedWindow, x: i64| {
        (-(w.size() as i64)..x).any(|j| j != 0 && w.at(j) == x)
    };
    let bottom_exc = |w: &SignedWindow, i: i64| i <= w.size() as i64 && w.at(i) > i;
    let from_sides = |left: bool, right: bool, two: bool| match (left, right, two) {
        (_, _, true) => Entry::Two,
        (true, _, _) => Entry::OneL,
        (false, true, _) => Entry::OneR,
        _ => Entry::Zero,
    };
    // Generator `s_i`, `i >= 1`, on the path. `shift` selects the `t_1` reading.
    let path_entry = |i: usize, shift: bool| {
        let k = i as i64;
        let fixed_pos = if shift { k + 1 } else { k };
        if pi.stabilizes(i + 1, pi.size()) {
            return Entry::Zero;
        }
        if pi.at(fixed_pos) == fixed_pos {
            return Entry::Two;
        }
        if shift {
            from_sides(top_exc(pi, k + 1), true, false)
        } else {
            from_sides(bottom_exc(&inv, k), true, false)
        }
    };
    let negatives: Vec<usize> = (0..pi.size()).filter(|&k| pi.values()[k] < 0).collect();
    let mut out = vec![Entry::Zero; n + 1];
    match (pi.family(), variant) {
        (Family::A, _) => {
            let s = stats(pi)?;
            for i in 1..=n {
                out[i] = if s.fix.contains(&i) {
                    Entry::Zero
                } else if s.nfix.contains(&i) {
                    Entry::Two
                } else if s.exc.contains(&i) {
                    Entry::OneL
                } else {
                    Entry::OneR
                };
            }
        }
        (Family::B, Variant::T1) => {
            out[1] = match negatives.as_slice() {
                [] => Entry::Zero,
                [k] if pi.values()[*k] == -1 => Entry::OneL,
                [_] => Entry::OneR,
                _ => Entry::Two,
            };
            for i in 1..n {
                out[i + 1] = path_entry(i, true);
            }
        }
        (Family::B, Variant::T2) => {
            out[1] = if negatives.is_empty() { Entry::Zero } else { Entry::OneL };
            for i in 1..n {
                out[i + 1] = path_entry(i, false);
            }
        }
        (Family::D, _) => {
            let (a, b) = (pi.at(1), pi.at(2));
            let (ia, ib) = (inv.at(1), inv.at(2));
            let s1_right = a >= 3 || b <= -3;
            let s1_left = ia >= 3 || ib <= -3 || (a, b) == (2, 1) || (a, b) == (-1, -2);
            let s0_right = a <= -3 || b <= -3;
            let s0_left = ia <= -3 || ib <= -3 || (a, b) == (-2, -1) || (a, b) == (-1, -2);
            out[1] = from_sides(s0_left, s0_right, s0_left && s0_right);
            out[2] = from_sides(s1_left, s1_right, s1_left && s1_right);
            for i in 2..n {
                out[i + 1] = path_entry(i, true);
            }
        }
    }
    Ok(out)
}
