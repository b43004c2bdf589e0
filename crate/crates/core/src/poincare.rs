//! Intersection-homology Poincaré polynomials `F_v` of boolean elements.

use crate::boolean::{
    all_boolean_expressions, boolean_expression, canonicalize, diagram_of, BooleanExpression,
    Diagram, Entry,
};
use crate::closed_form::f_poly;
use crate::coxeter::{Coxeter, GeneratorSet, Word};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::poly::Poly;

/// `Σ_{u ≤ v} q^{l(u)} P_{u,v}`, computed with the recursion.
pub fn poincare_def(cox: &Coxeter, v: &Word) -> Result<Poly> {
    let (def, _) = split_sums(cox, v, None)?;
    Ok(def)
}

/// `(F, F restricted to u containing s)`.
fn split_sums(cox: &Coxeter, v: &Word, s: Option<usize>) -> Result<(Poly, Poly)> {
    let oracle = Oracle::new(cox, v)?;
    let ps = oracle.poset();
    let top = ps.index_of(cox, v)?.ok_or(Error::NotBelow)?;
    let mut all = Poly::zero();
    let mut with_s = Poly::zero();
    for u in ps.below(top) {
        let term = oracle
            .kl_idx(GeneratorSet::empty(), u, top)?
            .shift(ps.length(u));
        if s.is_some_and(|s| ps.word(u).support().contains(s)) {
            with_s = &with_s + &term;
        }
        all = &all + &term;
    }
    Ok((all, with_s))
}

/// The boolean reflection `v` sits under: the graph's own, else any other root.
pub fn expression_for(cox: &Coxeter, v: &Word) -> Result<BooleanExpression> {
    let below = |t: &BooleanExpression| match canonicalize(cox, t, v) {
        Ok(_) => Ok(true),
        Err(Error::NotBelow) => Ok(false),
        Err(e) => Err(e),
    };
    if let Ok(t) = boolean_expression(cox.graph()) {
        if below(&t)? {
            return Ok(t);
        }
    }
    for t in all_boolean_expressions(cox.graph())? {
        if below(&t)? {
            return Ok(t);
        }
    }
    Err(Error::NotBelow)
}

/// Diagram of `(ε, v̄)`; only the top row matters.
pub fn diagram_of_element(cox: &Coxeter, t: &BooleanExpression, v: &Word) -> Result<Diagram> {
    diagram_of(cox, t, v, &Word::empty(), GeneratorSet::empty())
}

/// One essential component: a subtree whose cells are all 2 except the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Generators in column order, root last.
    pub vertices: Vec<usize>,
    pub root: usize,
    /// The boolean reflection with this diagram.
    pub reflection: Word,
}

impl Component {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EssentialDecomposition {
    pub components: Vec<Component>,
    /// Component index of each generator (index 0 unused).
    pub component_of: Vec<Option<usize>>,
}

impl EssentialDecomposition {
    /// Components with at least two cells.
    pub fn nontrivial(&self) -> usize {
        self.components.iter().filter(|c| c.len() >= 2).count()
    }
}

fn top(d: &Diagram, s: usize) -> Entry {
    d.column(s).top
}

/// Drop the 0 cells, keep only edges hanging off a 2, and split.
pub fn essential_components(d: &Diagram) -> EssentialDecomposition {
    let mut cols = d.order.clone();
    cols.push(d.center);
    // Each nonzero cell climbs through kept edges to its component root.
    let root_of = |mut s: usize| {
        while top(d, s) == Entry::Two {
            match d.parent[s] {
                Some(p) if !top(d, p).is_zero() => s = p,
                _ => break,
            }
        }
        s
    };
    let mut components: Vec<Component> = Vec::new();
    let mut component_of = vec![None; d.rank() + 1];
    for &r in &cols {
        if top(d, r).is_zero() || root_of(r) != r {
            continue;
        }
        let vertices: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&s| !top(d, s).is_zero() && root_of(s) == r)
            .collect();
        for &s in &vertices {
            component_of[s] = Some(components.len());
        }
        let left: Vec<usize> = vertices.iter().copied().filter(|&s| s != r).collect();
        let mut word = left.clone();
        word.push(r);
        word.extend(left.iter().rev());
        components.push(Component {
            vertices,
            root: r,
            reflection: Word::from_gens(&word),
        });
    }
    EssentialDecomposition {
        components,
        component_of,
    }
}

/// `F_v` for `v` boolean in a type-A path, counting `(2, 1_*)` patterns.
pub fn poincare_a(cox: &Coxeter, v: &Word) -> Result<Poly> {
    let g = cox.graph();
    if g.edges().len() + 1 != g.rank() || (1..=g.rank()).any(|s| g.degree(s) > 2) {
        return Err(Error::UnsupportedGraphShape);
    }
    let t = expression_for(cox, v)?;
    let d = diagram_of_element(cox, &t, v)?;
    let a = (1..=d.rank())
        .filter(|&s| top(&d, s) == Entry::Two)
        .filter(|&s| d.parent[s].is_some_and(|p| top(&d, p).is_one()))
        .count();
    let l = cox.length(v)?;
    Ok(&Poly::one_plus_q().pow((l - 2 * a) as u32) * &Poly::from_coeffs(vec![1, 1, 1]).pow(a as u32))
}

/// `(F_{v,s≠}, F_{v,s0})` for a leftmost nonzero cell `s` of the diagram of `v`.
pub fn poincare_split(cox: &Coxeter, v: &Word, s: usize) -> Result<(Poly, Poly)> {
    let t = expression_for(cox, v)?;
    let d = diagram_of_element(cox, &t, v)?;
    if s == 0 || s > d.rank() {
        return Err(Error::GeneratorOutOfRange(s, d.rank()));
    }
    let leftmost = !top(&d, s).is_zero() && d.children(s).all(|c| top(&d, c).is_zero());
    if !leftmost {
        return Err(Error::NotLeftmost(s));
    }
    let (all, with_s) = split_sums(cox, v, Some(s))?;
    Ok((with_s.clone(), &all - &with_s))
}

/// Closed form for trees with at most one vertex of degree 3 or more.
///
/// Every component other than the one through the branch vertex `w` is a
/// chain and contributes `1+q+q^2`. The component through `w` contributes
/// `q(1+q)^{h+1} + f_{h+1}`, where `h` is one less than the number of
/// neighbors of `w` inside it, capped at 2.
pub fn poincare_closed(cox: &Coxeter, v: &Word) -> Result<Poly> {
    let g = cox.graph();
    g.require_mode(crate::coxeter::GraphMode::Tree)?;
    let branch: Vec<usize> = (1..=g.rank()).filter(|&s| g.degree(s) >= 3).collect();
    if branch.len() > 1 {
        return Err(Error::UnsupportedGraphShape);
    }
    let t = expression_for(cox, v)?;
    let d = diagram_of_element(cox, &t, v)?;
    let e = essential_components(&d);
    let l = cox.length(v)?;
    let k = e.nontrivial();
    let one_plus_q = Poly::one_plus_q();
    if k == 0 {
        return Ok(one_plus_q.pow(l as u32));
    }
    let w = branch
        .first()
        .copied()
        .or_else(|| (1..=g.rank()).find(|&s| g.degree(s) == 2))
        .unwrap_or(1);
    let inside = match e.component_of[w] {
        Some(c) => g
            .neighbors(w)
            .filter(|&s| e.component_of[s] == Some(c))
            .count(),
        None => 0,
    };
    let h = inside.saturating_sub(1).min(2);
    let exp = l
        .checked_sub(2 * k + h)
        .ok_or_else(|| Error::FormulaHypothesis(format!("negative exponent for l={l}, k={k}, h={h}")))?;
    let branch_factor = &one_plus_q.pow(h as u32 + 1).shift(1) + &f_poly(h + 1);
    let chains = Poly::from_coeffs(vec![1, 1, 1]).pow(k as u32 - 1);
    Ok(&(&chains * &branch_factor) * &one_plus_q.pow(exp as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{parse_graph, CoxeterGraph};

    fn w(g: &[usize]) -> Word {
        Word::from_gens(g)
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    #[test]
    fn small_definitional_values() {
        let a2 = Coxeter::new(CoxeterGraph::type_a(2));
        assert_eq!(poincare_def(&a2, &w(&[1])).unwrap(), p(&[1, 1]));
        assert_eq!(poincare_def(&a2, &w(&[1, 2, 1])).unwrap(), p(&[1, 2, 2, 1]));
        assert_eq!(poincare_def(&a2, &Word::empty()).unwrap(), Poly::one());
    }

    #[test]
    fn components_of_small_elements() {
        let a2 = Coxeter::new(CoxeterGraph::type_a(2));
        let t = expression_for(&a2, &w(&[1, 2, 1])).unwrap();
        let d = diagram_of_element(&a2, &t, &w(&[1, 2, 1])).unwrap();
        let e = essential_components(&d);
        assert_eq!(e.components.len(), 1);
        assert_eq!(e.components[0].vertices, vec![1, 2]);
        assert_eq!(e.components[0].root, 2);
        let d = diagram_of_element(&a2, &t, &Word::empty()).unwrap();
        assert!(essential_components(&d).components.is_empty());
    }

    #[test]
    fn type_a_formula() {
        let a2 = Coxeter::new(CoxeterGraph::type_a(2));
        assert_eq!(poincare_a(&a2, &w(&[1, 2, 1])).unwrap(), p(&[1, 2, 2, 1]));
        assert_eq!(poincare_a(&a2, &w(&[1])).unwrap(), p(&[1, 1]));
        let d4 = Coxeter::new(CoxeterGraph::type_d(4));
        assert_eq!(poincare_a(&d4, &w(&[1])), Err(Error::UnsupportedGraphShape));
    }

    #[test]
    fn closed_form_small() {
        let a2 = Coxeter::new(CoxeterGraph::type_a(2));
        assert_eq!(poincare_closed(&a2, &w(&[1, 2, 1])).unwrap(), p(&[1, 2, 2, 1]));
        assert_eq!(poincare_closed(&a2, &Word::empty()).unwrap(), Poly::one());
        let d4 = Coxeter::new(CoxeterGraph::type_d(4));
        let top = w(&[1, 2, 4, 3, 4, 2, 1]);
        let branch = &p(&[1, 3, 3, 3, 1]) * &Poly::one_plus_q().pow(3);
        assert_eq!(poincare_def(&d4, &top).unwrap(), branch);
        assert_eq!(poincare_closed(&d4, &top).unwrap(), branch);
        let two_branches = parse_graph(
            "n 6\nedge 1 3 3\nedge 2 3 3\nedge 3 4 3\nedge 4 5 3\nedge 4 6 3\nroot 6\n",
        )
        .unwrap();
        let cox = Coxeter::new(two_branches);
        assert_eq!(poincare_closed(&cox, &w(&[1])), Err(Error::UnsupportedGraphShape));
    }

    #[test]
    fn split_on_a_short_path() {
        let a2 = Coxeter::new(CoxeterGraph::type_a(2));
        let (ne, zero) = poincare_split(&a2, &w(&[1, 2, 1]), 1).unwrap();
        assert_eq!(ne, p(&[0, 1, 2, 1]));
        assert_eq!(zero, p(&[1, 1]));
        assert_eq!(poincare_split(&a2, &w(&[1, 2, 1]), 2), Err(Error::NotLeftmost(2)));
    }
}
