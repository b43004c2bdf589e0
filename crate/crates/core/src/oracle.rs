//! Parabolic Kazhdan–Lusztig polynomials of type `q` by Deodhar's recursion.
//!
//! Everything is computed inside the lower Bruhat interval of a fixed top
//! element, which is closed under every step of the recursion.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::boolean::{canonicalize, BooleanExpression};
use crate::coxeter::{Coxeter, GeneratorSet, Side, Word};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Lower interval `[e, top]` with multiplication tables and order bitsets.
#[derive(Clone, Debug)]
pub struct BooleanPoset {
    rank: usize,
    elems: Vec<Word>,
    index: HashMap<Word, u32>,
    len: Vec<u32>,
    /// `rmul[i * (rank + 1) + s]`, `u32::MAX` when the product leaves the interval.
    rmul: Vec<u32>,
    lmul: Vec<u32>,
    rdes: Vec<u64>,
    ldes: Vec<u64>,
    below: Vec<Vec<u64>>,
}

const NONE: u32 = u32::MAX;

impl BooleanPoset {
    pub fn new(cox: &Coxeter, top: &Word) -> Result<Self> {
        let rank = cox.graph().rank();
        let mut elems: Vec<Word> = cox.lower_interval(top)?.iter().cloned().collect();
        elems.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Word, u32> = elems
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        let stride = rank + 1;
        let n = elems.len();
        let mut rmul = vec![NONE; n * stride];
        let mut lmul = vec![NONE; n * stride];
        let mut rdes = vec![0u64; n];
        let mut ldes = vec![0u64; n];
        let len: Vec<u32> = elems.iter().map(|w| w.len() as u32).collect();
        // Every covering by a generator inside the interval is seen from its
        // upper end, so only descents need multiplying out.
        for (i, w) in elems.iter().enumerate() {
            rdes[i] = cox.descents(w, Side::Right)?.0;
            ldes[i] = cox.descents(w, Side::Left)?.0;
            for s in GeneratorSet(rdes[i]).iter() {
                let k = index[&cox.mul_gen(w, s)?] as usize;
                rmul[i * stride + s] = k as u32;
                rmul[k * stride + s] = i as u32;
            }
            for s in GeneratorSet(ldes[i]).iter() {
                let k = index[&cox.gen_mul(s, w)?] as usize;
                lmul[i * stride + s] = k as u32;
                lmul[k * stride + s] = i as u32;
            }
        }
        let words = n.div_ceil(64);
        let mut below: Vec<Vec<u64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut bits = vec![0u64; words];
            if i > 0 {
                // [e, w] = [e, ws] ∪ [e, ws]·s for any right descent s.
                let s = rdes[i].trailing_zeros() as usize;
                let j = rmul[i * stride + s] as usize;
                bits.copy_from_slice(&below[j]);
                for x in iter_bits(&below[j]) {
                    let y = rmul[x * stride + s] as usize;
                    bits[y / 64] |= 1 << (y % 64);
                }
            }
            bits[i / 64] |= 1 << (i % 64);
            below.push(bits);
        }
        Ok(BooleanPoset {
            rank,
            elems,
            index,
            len,
            rmul,
            lmul,
            rdes,
            ldes,
            below,
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Elements sorted by length, then lexicographically.
    pub fn elements(&self) -> &[Word] {
        &self.elems
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.elems[i]
    }

    pub fn index_of(&self, cox: &Coxeter, w: &Word) -> Result<Option<usize>> {
        let w = cox.normal_form(w)?;
        Ok(self.index.get(&w).map(|&i| i as usize))
    }

    pub fn length(&self, i: usize) -> usize {
        self.len[i] as usize
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.below[v][u / 64] >> (u % 64) & 1 == 1
    }

    /// Elements below `v`, in increasing index order.
    pub fn below(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.below[v])
    }

    pub fn right_mul(&self, i: usize, s: usize) -> Option<usize> {
        let k = self.rmul[i * (self.rank + 1) + s];
        (k != NONE).then_some(k as usize)
    }

    pub fn left_mul(&self, i: usize, s: usize) -> Option<usize> {
        let k = self.lmul[i * (self.rank + 1) + s];
        (k != NONE).then_some(k as usize)
    }

    pub fn right_descents(&self, i: usize) -> GeneratorSet {
        GeneratorSet(self.rdes[i])
    }

    pub fn left_descents(&self, i: usize) -> GeneratorSet {
        GeneratorSet(self.ldes[i])
    }

    pub fn in_quotient(&self, j: GeneratorSet, i: usize) -> bool {
        self.ldes[i] & j.0 == 0
    }

    /// Elements of `W^J` in the interval.
    pub fn quotient(&self, j: GeneratorSet) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.in_quotient(j, i)).collect()
    }
}

fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * 64 + b)
        })
    })
}

/// Memoized KL table over a lower interval.
pub struct Oracle<'a> {
    cox: &'a Coxeter,
    poset: BooleanPoset,
    memo: RefCell<HashMap<(u32, u32, u64), Poly>>,
}

impl<'a> Oracle<'a> {
    /// Oracle over `[e, top]`.
    pub fn new(cox: &'a Coxeter, top: &Word) -> Result<Self> {
        Ok(Oracle {
            cox,
            poset: BooleanPoset::new(cox, top)?,
            memo: RefCell::new(HashMap::new()),
        })
    }

    /// Oracle over all elements below a boolean reflection.
    pub fn for_boolean(cox: &'a Coxeter, t: &BooleanExpression) -> Result<Self> {
        Oracle::new(cox, t.word())
    }

    pub fn poset(&self) -> &BooleanPoset {
        &self.poset
    }

    pub fn coxeter(&self) -> &Coxeter {
        self.cox
    }

    pub fn memo_len(&self) -> usize {
        self.memo.borrow().len()
    }

    fn index(&self, w: &Word) -> Result<usize> {
        self.poset.index_of(self.cox, w)?.ok_or(Error::NotBelow)
    }

    fn check_quotient(&self, j: GeneratorSet, i: usize) -> Result<()> {
        if self.poset.in_quotient(j, i) {
            Ok(())
        } else {
            Err(Error::NotInQuotient)
        }
    }

    /// `P^{J,q}_{u,v}`.
    pub fn kl_parabolic(&self, j: GeneratorSet, u: &Word, v: &Word) -> Result<Poly> {
        let (u, v) = (self.index(u)?, self.index(v)?);
        self.check_quotient(j, u)?;
        self.check_quotient(j, v)?;
        self.kl_idx(j, u, v)
    }

    /// `P_{u,v}`.
    pub fn kl_ordinary(&self, u: &Word, v: &Word) -> Result<Poly> {
        self.kl_parabolic(GeneratorSet::empty(), u, v)
    }

    /// `μ(u, v)` read off the parabolic polynomial.
    pub fn mu(&self, j: GeneratorSet, u: &Word, v: &Word) -> Result<i64> {
        let (u, v) = (self.index(u)?, self.index(v)?);
        self.check_quotient(j, u)?;
        self.check_quotient(j, v)?;
        self.mu_idx(j, u, v)
    }

    pub fn mu_idx(&self, j: GeneratorSet, u: usize, v: usize) -> Result<i64> {
        let (lu, lv) = (self.poset.length(u), self.poset.length(v));
        if lv <= lu || (lv - lu) % 2 == 0 {
            return Ok(0);
        }
        Ok(self.kl_idx(j, u, v)?.coeff((lv - lu - 1) / 2))
    }

    /// `P^{J,q}` on poset indices, with the smallest right descent of `v`.
    pub fn kl_idx(&self, j: GeneratorSet, u: usize, v: usize) -> Result<Poly> {
        if !self.poset.leq(u, v) {
            return Ok(Poly::zero());
        }
        if u == v {
            return Ok(Poly::one());
        }
        let key = (u as u32, v as u32, j.0);
        if let Some(p) = self.memo.borrow().get(&key) {
            return Ok(p.clone());
        }
        let s = self.poset.rdes[v].trailing_zeros() as usize;
        let p = self.step(j, u, v, s)?;
        self.memo.borrow_mut().insert(key, p.clone());
        Ok(p)
    }

    /// One recursion step through a chosen right descent `s` of `v`.
    pub fn kl_via(&self, j: GeneratorSet, u: &Word, v: &Word, s: usize) -> Result<Poly> {
        let (u, v) = (self.index(u)?, self.index(v)?);
        self.check_quotient(j, u)?;
        self.check_quotient(j, v)?;
        if !self.poset.right_descents(v).contains(s) {
            return Err(Error::FormulaHypothesis(format!(
                "s{s} is not a right descent"
            )));
        }
        if !self.poset.leq(u, v) {
            return Ok(Poly::zero());
        }
        if u == v {
            return Ok(Poly::one());
        }
        self.step(j, u, v, s)
    }

    fn step(&self, j: GeneratorSet, u: usize, v: usize, s: usize) -> Result<Poly> {
        let ps = &self.poset;
        let vs = ps.right_mul(v, s).expect("vs lies below v");
        let us = ps.right_mul(u, s);
        let tilde = match us {
            Some(x) if ps.length(x) < ps.length(u) => {
                &self.kl_idx(j, x, vs)? + &self.kl_idx(j, u, vs)?.shift(1)
            }
            _ => {
                let us_in_quotient = match us {
                    Some(x) => ps.in_quotient(j, x),
                    None => {
                        let w = self.cox.mul_gen(ps.word(u), s)?;
                        self.cox.in_quotient(j, &w)?
                    }
                };
                if !us_in_quotient {
                    Poly::zero()
                } else {
                    let upper = match us {
                        Some(x) => self.kl_idx(j, x, vs)?,
                        None => Poly::zero(),
                    };
                    &upper.shift(1) + &self.kl_idx(j, u, vs)?
                }
            }
        };
        let lv = ps.length(v);
        let mut correction = Poly::zero();
        for w in ps.below(vs) {
            if w == vs
                || !ps.leq(u, w)
                || !ps.in_quotient(j, w)
                || !ps.right_descents(w).contains(s)
                || (lv - ps.length(w)) % 2 == 1
            {
                continue;
            }
            let mu = self.mu_idx(j, w, vs)?;
            if mu != 0 {
                let term = self.kl_idx(j, u, w)?.shift((lv - ps.length(w)) / 2);
                correction = &correction + &term.scale(mu);
            }
        }
        Ok(&tilde - &correction)
    }

    /// `∑_{w ∈ W_J} (-1)^{l(w)} P_{wu,v}`.
    pub fn parabolic_from_ordinary(
        &self,
        j: GeneratorSet,
        u: &Word,
        v: &Word,
        cap: usize,
    ) -> Result<Poly> {
        let (ui, vi) = (self.index(u)?, self.index(v)?);
        self.check_quotient(j, ui)?;
        self.check_quotient(j, vi)?;
        let wj = self.cox.parabolic_subgroup(j, cap)?;
        self.alternating_sum(&wj, ui, vi)
    }

    /// The alternating sum over a precomputed `W_J`.
    pub fn alternating_sum(&self, wj: &[Word], u: usize, v: usize) -> Result<Poly> {
        let mut acc = Poly::zero();
        for w in wj {
            let wu = self.cox.mul(w, self.poset.word(u))?;
            if let Some(x) = self.poset.index_of(self.cox, &wu)? {
                let p = self.kl_idx(GeneratorSet::empty(), x, v)?;
                acc = if w.len() % 2 == 0 { &acc + &p } else { &acc - &p };
            }
        }
        Ok(acc)
    }
}

pub const DEFAULT_PARABOLIC_CAP: usize = 100_000;

/// `P^{J,q}_{u,v}` for `u <= v <= t`.
pub fn kl_parabolic(
    cox: &Coxeter,
    t: &BooleanExpression,
    j: GeneratorSet,
    u: &Word,
    v: &Word,
) -> Result<Poly> {
    canonicalize(cox, t, v)?;
    let oracle = Oracle::new(cox, v)?;
    let ui = oracle.poset().index_of(cox, u)?;
    match ui {
        Some(_) => oracle.kl_parabolic(j, u, v),
        None => {
            if !cox.in_quotient(j, u)? || !cox.in_quotient(j, v)? {
                return Err(Error::NotInQuotient);
            }
            Ok(Poly::zero())
        }
    }
}

pub fn kl_ordinary(cox: &Coxeter, t: &BooleanExpression, u: &Word, v: &Word) -> Result<Poly> {
    kl_parabolic(cox, t, GeneratorSet::empty(), u, v)
}

pub fn mu(cox: &Coxeter, t: &BooleanExpression, j: GeneratorSet, u: &Word, v: &Word) -> Result<i64> {
    let p = kl_parabolic(cox, t, j, u, v)?;
    let (lu, lv) = (cox.length(u)?, cox.length(v)?);
    if lv <= lu || (lv - lu) % 2 == 0 {
        return Ok(0);
    }
    Ok(p.coeff((lv - lu - 1) / 2))
}

pub fn parabolic_from_ordinary(
    cox: &Coxeter,
    t: &BooleanExpression,
    j: GeneratorSet,
    u: &Word,
    v: &Word,
) -> Result<Poly> {
    canonicalize(cox, t, v)?;
    if !cox.in_quotient(j, u)? || !cox.in_quotient(j, v)? {
        return Err(Error::NotInQuotient);
    }
    let oracle = Oracle::new(cox, v)?;
    let wj = cox.parabolic_subgroup(j, DEFAULT_PARABOLIC_CAP)?;
    match oracle.poset().index_of(cox, u)? {
        Some(ui) => oracle.alternating_sum(&wj, ui, oracle.poset().len() - 1),
        None => Ok(Poly::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{boolean_expression, tests::dtilde11};
    use crate::coxeter::CoxeterGraph;

    fn w(g: &[usize]) -> Word {
        Word::from_gens(g)
    }

    #[test]
    fn poset_of_a2() {
        let g = CoxeterGraph::type_a(2);
        let cox = Coxeter::new(g);
        let p = BooleanPoset::new(&cox, &w(&[1, 2, 1])).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.leq(0, 5));
        let s1 = p.index_of(&cox, &w(&[1])).unwrap().unwrap();
        let s2 = p.index_of(&cox, &w(&[2])).unwrap().unwrap();
        assert!(!p.leq(s1, s2));
        assert_eq!(p.below(5).count(), 6);
    }

    #[test]
    fn all_of_s3_is_trivial() {
        let g = CoxeterGraph::type_a(2);
        let cox = Coxeter::new(g.clone());
        let o = Oracle::new(&cox, &w(&[1, 2, 1])).unwrap();
        let ps = o.poset();
        for v in 0..ps.len() {
            for u in ps.below(v) {
                assert!(o.kl_idx(GeneratorSet::empty(), u, v).unwrap().is_one());
            }
        }
        let s1 = w(&[1]);
        let s2 = w(&[2]);
        assert!(o.kl_ordinary(&s1, &s2).unwrap().is_zero());
    }

    #[test]
    fn a3_singular_pair() {
        // P_{s2, s2 s1 s3 s2} = 1 + q.
        let g = CoxeterGraph::type_a(3);
        let cox = Coxeter::new(g);
        let v = w(&[2, 1, 3, 2]);
        let o = Oracle::new(&cox, &v).unwrap();
        assert_eq!(o.kl_ordinary(&w(&[2]), &v).unwrap(), Poly::one_plus_q());
        assert_eq!(o.kl_ordinary(&Word::empty(), &v).unwrap(), Poly::one_plus_q());
        assert_eq!(o.mu(GeneratorSet::empty(), &w(&[2]), &v).unwrap(), 1);
    }

    #[test]
    fn parabolic_needs_quotient() {
        let g = CoxeterGraph::type_a(2);
        let cox = Coxeter::new(g);
        let o = Oracle::new(&cox, &w(&[1, 2, 1])).unwrap();
        let j = GeneratorSet::from_iter([1]);
        assert!(matches!(
            o.kl_parabolic(j, &w(&[1]), &w(&[2, 1])),
            Err(Error::NotInQuotient)
        ));
    }

    #[test]
    fn dtilde_pair_is_q() {
        let g = dtilde11();
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        let v = w(&[4, 5, 10, 11, 6, 7, 8, 9, 5, 4, 2, 1]);
        let u = w(&[8, 6, 1]);
        let j = GeneratorSet::from_iter([5, 7]);
        assert_eq!(kl_parabolic(&cox, &t, j, &u, &v).unwrap(), Poly::monomial(1, 1));
    }

    #[test]
    fn descent_choice_does_not_matter_in_b3() {
        let g = CoxeterGraph::type_b(3);
        let cox = Coxeter::new(g.clone());
        let t = boolean_expression(&g).unwrap();
        let o = Oracle::for_boolean(&cox, &t).unwrap();
        let ps = o.poset();
        for j in g.all_generators().subsets() {
            for v in ps.quotient(j) {
                for u in ps.quotient(j) {
                    let base = o.kl_idx(j, u, v).unwrap();
                    for s in ps.right_descents(v).iter() {
                        let via = o.kl_via(j, ps.word(u), ps.word(v), s).unwrap();
                        assert_eq!(via, base);
                    }
                }
            }
        }
    }
}
