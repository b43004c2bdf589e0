//! Exhaustive comparison of the closed formulas against the recursion.

use crate::boolean::{
    all_boolean_expressions, build_diagram, canonicalize_pair, BooleanExpression, CanonicalPair,
    Diagram, Shape,
};
use crate::closed_form::{kl_closed, kl_closed_affine};
use crate::coxeter::{Coxeter, GeneratorSet, Word};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::poly::Poly;

/// One `(u, v, J)` instance under a fixed boolean reflection.
pub struct Case<'a> {
    pub t: &'a BooleanExpression,
    pub u: &'a Word,
    pub v: &'a Word,
    pub j: GeneratorSet,
    pub gap: usize,
    pub oracle: &'a Poly,
    pub diagram: &'a Diagram,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Use every root (tree) or center (cycle), not just the graph's own.
    pub all_roots: bool,
    /// Stop after this many `(u, v, J)` instances.
    pub max_pairs: Option<usize>,
    /// Restrict to these parabolic subsets; default is every subset.
    pub j_sets: Option<Vec<GeneratorSet>>,
}

/// Visits every boolean pair `u <= v <= t` and every `J` with `u, v ∈ W^J`.
/// Returns the number of instances visited.
pub fn for_each_case(
    cox: &Coxeter,
    opts: &SweepOptions,
    mut visit: impl FnMut(&Case) -> Result<()>,
) -> Result<usize> {
    let g = cox.graph();
    let ts = if opts.all_roots {
        all_boolean_expressions(g)?
    } else {
        vec![crate::boolean::boolean_expression(g)?]
    };
    let j_sets = match &opts.j_sets {
        Some(js) => js.clone(),
        None => g.all_generators().subsets(),
    };
    let mut seen = 0usize;
    for t in &ts {
        let oracle = Oracle::for_boolean(cox, t)?;
        let ps = oracle.poset();
        for v in 0..ps.len() {
            for u in ps.below(v) {
                let base: CanonicalPair =
                    canonicalize_pair(cox, t, ps.word(v), ps.word(u), GeneratorSet::empty())?;
                for &j in &j_sets {
                    if !ps.in_quotient(j, u) || !ps.in_quotient(j, v) {
                        continue;
                    }
                    let mut pair = base.clone();
                    pair.j = j;
                    let diagram = build_diagram(t, &pair);
                    let p = oracle.kl_idx(j, u, v)?;
                    visit(&Case {
                        t,
                        u: ps.word(u),
                        v: ps.word(v),
                        j,
                        gap: ps.length(v) - ps.length(u),
                        oracle: &p,
                        diagram: &diagram,
                    })?;
                    seen += 1;
                    if opts.max_pairs.is_some_and(|m| seen >= m) {
                        return Ok(seen);
                    }
                }
            }
        }
    }
    Ok(seen)
}

/// A disagreement between the closed formula and the recursion.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub center: usize,
    pub u: Word,
    pub v: Word,
    pub j: GeneratorSet,
    pub oracle: Poly,
    pub closed: std::result::Result<Poly, String>,
    pub diagram: Diagram,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub cases: usize,
    pub mismatches: usize,
    /// The first few mismatches, for diagnostics.
    pub examples: Vec<Mismatch>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }
}

/// The closed formula matching the diagram's shape.
pub fn closed_for(d: &Diagram) -> Result<Poly> {
    match d.shape {
        Shape::Tree => kl_closed(d),
        Shape::Cycle => kl_closed_affine(d),
    }
}

/// Compares the closed formula with the recursion on every case.
pub fn sweep(cox: &Coxeter, opts: &SweepOptions, keep: usize) -> Result<SweepReport> {
    let mut report = SweepReport::default();
    report.cases = for_each_case(cox, opts, |c| {
        let closed = closed_for(c.diagram).map_err(|e| e.to_string());
        if closed.as_ref().ok() != Some(c.oracle) {
            report.mismatches += 1;
            if report.examples.len() < keep {
                report.examples.push(Mismatch {
                    center: c.t.center(),
                    u: c.u.clone(),
                    v: c.v.clone(),
                    j: c.j,
                    oracle: c.oracle.clone(),
                    closed,
                    diagram: c.diagram.clone(),
                });
            }
        }
        Ok(())
    })?;
    Ok(report)
}
