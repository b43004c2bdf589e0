use boolkl::coxeter::*;
use boolkl::verify::*;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(String::as_str).unwrap_or("a4");
    let keep: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5);
    let g = match which {
        "a3" => CoxeterGraph::type_a(3),
        "a4" => CoxeterGraph::type_a(4),
        "b3" => CoxeterGraph::type_b(3),
        "b4" => CoxeterGraph::type_b(4),
        "d4" => CoxeterGraph::type_d(4),
        "d5" => CoxeterGraph::type_d(5),
        "t6" => parse_graph("n 6\nedge 1 2 3\nedge 2 3 3\nedge 3 4 3\nedge 3 5 3\nedge 5 6 3\nroot 6\n").unwrap(),
        "at2" => CoxeterGraph::affine_a(2),
        "at3" => CoxeterGraph::affine_a(3),
        "at4" => CoxeterGraph::affine_a(4),
        other => parse_graph(&std::fs::read_to_string(other).unwrap()).unwrap(),
    };
    let cox = Coxeter::new(g);
    let t0 = Instant::now();
    let opts = SweepOptions { all_roots: true, ..Default::default() };
    let r = sweep(&cox, &opts, keep).unwrap();
    println!("{which}: cases {} mismatches {} in {:?}", r.cases, r.mismatches, t0.elapsed());
    for m in &r.examples {
        println!("--- center s{} v={} u={} J={} oracle={} closed={:?}", m.center, m.v, m.u, m.j, m.oracle, m.closed);
        print!("{}", m.diagram.render());
    }
}
