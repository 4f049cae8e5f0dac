use eftol::graph::Graph;
use eftol::menger::{is_strongly_menger, is_strongly_menger_by_cut_enumeration};
use eftol::sim::enumerate_level;
use eftol::topology;

#[test]
fn verify_q4_triple_fault_counterexample() {
    let q4 = topology::hypercube(4).unwrap();
    // Remove 3 of the 4 edges at vertex 0: (0,1), (0,2), (0,4); keep (0,8).
    let edges: Vec<(usize, usize)> = q4
        .edges()
        .iter()
        .copied()
        .filter(|&e| e != (0, 1) && e != (0, 2) && e != (0, 4))
        .collect();
    let faulty = Graph::build(16, &edges).unwrap();
    assert!(faulty.is_connected());
    let flow = is_strongly_menger(&faulty);
    let enu = is_strongly_menger_by_cut_enumeration(&faulty, 3).unwrap();
    eprintln!("flow verdict: {:?}", flow.holds);
    eprintln!("enum verdict: {:?}", enu.holds);
    eprintln!("flow witness: {:?}", flow.witness);
    eprintln!("mincut(8,15) = {:?}", faulty.min_edge_cut(8, 15));
    eprintln!("deg(8) = {}, deg(15) = {}", faulty.degree(8), faulty.degree(15));
    assert_eq!(flow.holds, enu.holds);
}

#[test]
fn verify_exact_menger_counts_f3_f4() {
    let q4 = topology::hypercube(4).unwrap();
    let l3 = enumerate_level(&q4, 3, 10_000).unwrap();
    eprintln!("f=3: trials={} conn={} sm={}", l3.trials, l3.survived_connected, l3.survived_menger);
    let l4 = enumerate_level(&q4, 4, 100_000).unwrap();
    eprintln!("f=4: trials={} conn={} sm={}", l4.trials, l4.survived_connected, l4.survived_menger);
}
