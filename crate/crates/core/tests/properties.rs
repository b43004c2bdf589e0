//! Randomized invariants over boolean pairs of small groups.

use boolkl::boolean::{boolean_expression, build_diagram, canonicalize_pair, BooleanExpression};
use boolkl::closed_form::{kl_closed, mu_closed};
use boolkl::oracle::{Oracle, DEFAULT_PARABOLIC_CAP};
use boolkl::perm::{Family, SignedWindow};
use boolkl::{Coxeter, CoxeterGraph, GeneratorSet, Word};
use proptest::prelude::*;

struct Group {
    cox: &'static Coxeter,
    t: BooleanExpression,
    oracle: Oracle<'static>,
}

fn group(g: CoxeterGraph) -> Group {
    let cox: &'static Coxeter = Box::leak(Box::new(Coxeter::new(g)));
    let t = boolean_expression(cox.graph()).unwrap();
    let oracle = Oracle::for_boolean(cox, &t).unwrap();
    Group { cox, t, oracle }
}

thread_local! {
    static GROUPS: Vec<Group> = vec![
        group(CoxeterGraph::type_a(4)),
        group(CoxeterGraph::type_b(3)),
        group(CoxeterGraph::type_d(4)),
    ];
}

/// (group index, u index, v index, J bits), not yet filtered for admissibility.
fn raw_case() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (0usize..3, any::<usize>(), any::<usize>(), 0u64..16)
}

/// Picks `v`, trims `J` so that `v ∈ W^J`, then picks `u ≤ v` in `W^J`.
fn with_case<R>(
    case: (usize, usize, usize, u64),
    f: impl FnOnce(&Group, usize, usize, GeneratorSet) -> R,
) -> R {
    let (gi, ui, vi, bits) = case;
    GROUPS.with(|gs| {
        let g = &gs[gi];
        let ps = g.oracle.poset();
        let v = vi % ps.len();
        let j = GeneratorSet(bits << 1 & g.cox.graph().all_generators().0 & !ps.left_descents(v).0);
        let below: Vec<usize> = ps.below(v).filter(|&u| ps.in_quotient(j, u)).collect();
        f(g, below[ui % below.len()], v, j)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn closed_form_agrees_and_is_bounded(case in raw_case()) {
        with_case(case, |g, u, v, j| {
            let ps = g.oracle.poset();
            let p = g.oracle.kl_idx(j, u, v).unwrap();
            let pair = canonicalize_pair(g.cox, &g.t, ps.word(v), ps.word(u), j).unwrap();
            let d = build_diagram(&g.t, &pair);
            assert_eq!(kl_closed(&d).unwrap(), p);
            assert!(p.is_nonnegative());
            let gap = ps.length(v) - ps.length(u);
            if gap > 0 {
                assert!(p.degree().map_or(true, |deg| 2 * deg < gap));
            } else {
                assert!(p.is_one());
            }
            if gap % 2 == 1 {
                assert_eq!(mu_closed(&d).unwrap(), p.coeff((gap - 1) / 2));
            }
        });
    }

    #[test]
    fn alternating_sum_agrees(case in raw_case()) {
        with_case(case, |g, u, v, j| {
            let wj = g.cox.parabolic_subgroup(j, DEFAULT_PARABOLIC_CAP).unwrap();
            assert_eq!(g.oracle.alternating_sum(&wj, u, v).unwrap(), g.oracle.kl_idx(j, u, v).unwrap());
        });
    }

    #[test]
    fn shrinking_j_only_grows(case in raw_case(), drop in 0u64..16) {
        with_case(case, |g, u, v, j| {
            let smaller = GeneratorSet(j.0 & !(drop << 1));
            let big = g.oracle.kl_idx(j, u, v).unwrap();
            let small = g.oracle.kl_idx(smaller, u, v).unwrap();
            assert!(big.coeff_le(&small), "{big} vs {small}");
        });
    }

    #[test]
    fn descent_choice_is_irrelevant(case in raw_case()) {
        with_case(case, |g, u, v, j| {
            let ps = g.oracle.poset();
            let base = g.oracle.kl_idx(j, u, v).unwrap();
            for s in ps.right_descents(v).iter() {
                assert_eq!(g.oracle.kl_via(j, ps.word(u), ps.word(v), s).unwrap(), base);
            }
        });
    }

    #[test]
    fn inverse_symmetry(case in raw_case()) {
        with_case(case, |g, u, v, _| {
            let ps = g.oracle.poset();
            let inv = |i: usize| {
                let w = g.cox.inverse(ps.word(i)).unwrap();
                ps.index_of(g.cox, &w).unwrap().expect("inverse stays boolean")
            };
            let e = GeneratorSet::empty();
            assert_eq!(g.oracle.kl_idx(e, u, v).unwrap(), g.oracle.kl_idx(e, inv(u), inv(v)).unwrap());
        });
    }

    #[test]
    fn windows_round_trip(gens in proptest::collection::vec(1usize..=4, 0..12), fam in 0usize..3) {
        let family = [Family::A, Family::B, Family::D][fam];
        let word = Word::from_gens(&gens);
        let w = SignedWindow::from_word(family, 4, &word).unwrap();
        let back = w.to_word();
        assert_eq!(SignedWindow::from_word(family, 4, &back).unwrap(), w);
        let cox = Coxeter::new(family.graph(4));
        assert!(cox.words_equal(&back, &word).unwrap());
    }
}
