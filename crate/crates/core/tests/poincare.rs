use boolkl::boolean::{canonicalize, tree_expression};
use boolkl::coxeter::parse_graph;
use boolkl::oracle::BooleanPoset;
use boolkl::poincare::*;
use boolkl::{Coxeter, CoxeterGraph, Poly, Word};

fn one_plus_q(e: usize) -> Poly {
    Poly::one_plus_q().pow(e as u32)
}

/// Every boolean element under the graph's own reflection.
fn elements(cox: &Coxeter) -> Vec<Word> {
    let t = boolkl::boolean::boolean_expression(cox.graph()).unwrap();
    BooleanPoset::new(cox, t.word()).unwrap().elements().to_vec()
}

fn d5_shaped() -> Coxeter {
    Coxeter::new(CoxeterGraph::type_d(5))
}

fn six_vertex_tree() -> Coxeter {
    Coxeter::new(
        parse_graph("n 6\nedge 1 2 3\nedge 2 3 3\nedge 3 4 3\nedge 3 5 3\nedge 5 6 3\nroot 6\n")
            .unwrap(),
    )
}

#[test]
fn type_a_formula_matches_sum() {
    let cox = Coxeter::new(CoxeterGraph::type_a(4));
    for v in elements(&cox) {
        assert_eq!(poincare_a(&cox, &v).unwrap(), poincare_def(&cox, &v).unwrap(), "{v}");
    }
}

#[test]
fn closed_form_matches_sum() {
    for cox in [d5_shaped(), six_vertex_tree(), Coxeter::new(CoxeterGraph::type_b(4))] {
        for v in elements(&cox) {
            let def = poincare_def(&cox, &v).unwrap();
            assert_eq!(poincare_closed(&cox, &v).unwrap(), def, "{v}");
            assert!(def.is_palindromic() && def.is_nonnegative(), "{v}");
        }
    }
}

#[test]
fn multiplicative_over_components() {
    for g in [CoxeterGraph::type_a(4), CoxeterGraph::type_b(3), CoxeterGraph::type_d(4)] {
        let cox = Coxeter::new(g);
        let t = boolkl::boolean::boolean_expression(cox.graph()).unwrap();
        for v in elements(&cox) {
            let d = diagram_of_element(&cox, &t, &v).unwrap();
            let product: Poly = essential_components(&d)
                .components
                .iter()
                .map(|c| poincare_def(&cox, &c.reflection).unwrap())
                .product();
            assert_eq!(product, poincare_def(&cox, &v).unwrap(), "{v}");
        }
    }
}

#[test]
fn leaf_under_a_root_cell_peels_off() {
    let mut used = 0;
    for cox in [d5_shaped(), Coxeter::new(CoxeterGraph::type_a(4))] {
        let t = boolkl::boolean::boolean_expression(cox.graph()).unwrap();
        for v in elements(&cox) {
            let d = diagram_of_element(&cox, &t, &v).unwrap();
            let e = essential_components(&d);
            let vbar = canonicalize(&cox, &t, &v).unwrap();
            for s in 1..=d.rank() {
                let top = d.column(s).top;
                let leaf = d.children(s).all(|c| d.column(c).top.is_zero());
                let under_root = d.parent[s].is_some_and(|p| d.column(p).top.is_one());
                // A lone 2 over its root cell is the s1 s2 s1 case, not a peel.
                let big = e.component_of[s].is_some_and(|c| e.components[c].len() >= 3);
                if top == boolkl::boolean::Entry::Two && leaf && under_root && big {
                    let rest = Word(vbar.0.iter().copied().filter(|&x| x as usize != s).collect());
                    let expected = &one_plus_q(2) * &poincare_def(&cox, &rest).unwrap();
                    assert_eq!(poincare_def(&cox, &v).unwrap(), expected, "{v} s{s}");
                    used += 1;
                }
            }
        }
    }
    assert!(used > 0);
}

#[test]
fn split_values_on_paths_and_forks() {
    for i in 2..=4 {
        // Path of i cells, root at the end.
        let cox = Coxeter::new(CoxeterGraph::type_a(i));
        let t = tree_expression(cox.graph(), i).unwrap();
        let (ne, zero) = poincare_split(&cox, t.word(), 1).unwrap();
        assert_eq!(ne, one_plus_q(2 * i - 2).shift(1), "path i={i}");
        assert_eq!(zero, one_plus_q(2 * i - 3), "path i={i}");
        assert_eq!(&ne + &zero, poincare_def(&cox, t.word()).unwrap());

        // i+1 cells: the extra 2 hangs off the root cell.
        let cox = Coxeter::new(CoxeterGraph::type_a(i + 1));
        let t = tree_expression(cox.graph(), i).unwrap();
        let (ne, zero) = poincare_split(&cox, t.word(), 1).unwrap();
        assert_eq!(ne, one_plus_q(2 * i).shift(1), "fork i={i}");
        assert_eq!(zero, one_plus_q(2 * i - 1), "fork i={i}");
    }
}

#[test]
fn nine_vertex_tree_with_three_components() {
    // Root 9 with children 4 (absent) and 8; 4 - 3 - 2 and 8 - 7 - 6 - {1, 5}.
    let cox = Coxeter::new(
        parse_graph(
            "n 9\nedge 1 6 3\nedge 5 6 3\nedge 6 7 3\nedge 7 8 3\nedge 8 9 3\n\
             edge 2 3 3\nedge 3 4 3\nedge 4 9 3\nroot 9\n",
        )
        .unwrap(),
    );
    let t = tree_expression(cox.graph(), 9).unwrap();
    let twos = [1, 2, 5, 7, 8];
    let left: Vec<usize> = t
        .left_order()
        .iter()
        .copied()
        .filter(|s| twos.contains(s) || *s == 3)
        .collect();
    let right: Vec<usize> = t
        .left_order()
        .iter()
        .rev()
        .copied()
        .filter(|s| twos.contains(s) || *s == 6)
        .collect();
    let mut word = left;
    word.push(9);
    word.extend(right);
    let v = Word::from_gens(&word);
    let d = diagram_of_element(&cox, &t, &v).unwrap();
    let tops: Vec<String> = (1..=9).map(|s| d.column(s).top.to_string()).collect();
    assert_eq!(tops, ["2", "2", "1l", "0", "2", "1r", "2", "2", "1l"]);
    let e = essential_components(&d);
    let mut sizes: Vec<usize> = e.components.iter().map(|c| c.len()).collect();
    sizes.sort();
    assert_eq!(sizes, [2, 3, 3]);
    let product: Poly = e
        .components
        .iter()
        .map(|c| poincare_def(&cox, &c.reflection).unwrap())
        .product();
    assert_eq!(product, poincare_def(&cox, &v).unwrap());
}
