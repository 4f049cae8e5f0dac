//! Strong Menger edge-connectivity decisions.
//!
//! A connected graph is strongly Menger edge-connected when every vertex
//! pair `(u, v)` is joined by `min(deg(u), deg(v))` edge-disjoint paths; by
//! the max-flow min-cut theorem that is equivalent to every pair's minimum
//! edge cut reaching `min(deg(u), deg(v))`. Two independent deciders live
//! here: a max-flow method and a small-cut enumeration oracle. Disconnected
//! graphs are never strongly Menger edge-connected.

use crate::combinat::{binomial_at_most, for_each_combination};
use crate::graph::{Graph, UnitFlow};
use crate::{EdgeSet, Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Proof that a graph is not strongly Menger edge-connected: a vertex pair,
/// an edge cut separating it, and the path demand the pair was entitled to.
/// The cut is strictly smaller than `min_degree` and removing it leaves the
/// pair disconnected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MengerWitness {
    pub pair: (usize, usize),
    pub cut: Vec<(usize, usize)>,
    pub min_degree: usize,
}

/// Outcome of a strong-Menger check. `witness` is populated for most
/// negative verdicts; it stays `None` only when the graph is disconnected
/// solely through vertices of degree 0, where no pair beats the empty cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MengerVerdict {
    pub holds: bool,
    pub witness: Option<MengerWitness>,
}

impl MengerVerdict {
    fn holds() -> Self {
        MengerVerdict {
            holds: true,
            witness: None,
        }
    }

    fn refuted(witness: Option<MengerWitness>) -> Self {
        MengerVerdict {
            holds: false,
            witness,
        }
    }
}

/// Decides strong Menger edge-connectivity with unit-capacity max flow.
///
/// Only pairs anchored at a fixed maximum-degree vertex `w` need checking:
/// if any pair `(u, v)` is separated by a cut smaller than its degree
/// demand, the side of that cut not containing `w` holds one of `u, v`,
/// whose degree still exceeds the cut size, so `(w, that vertex)` violates
/// the condition too. Remaining vertices are scanned in descending degree
/// order so the most demanding pairs fail first.
pub fn is_strongly_menger(g: &Graph) -> MengerVerdict {
    let n = g.n();
    if n <= 1 {
        return MengerVerdict::holds();
    }
    if !g.is_connected() {
        return MengerVerdict::refuted(disconnected_witness(g));
    }
    let w = (0..n).max_by_key(|&v| g.degree(v)).expect("n >= 2");
    let mut order: Vec<usize> = (0..n).filter(|&v| v != w).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let mut flow = UnitFlow::new(g);
    for x in order {
        let demand = g.degree(w).min(g.degree(x));
        flow.reset();
        let got = flow.max_flow_capped(w, x, demand);
        if got < demand {
            let side = flow.last_search_side();
            let cut: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .copied()
                .filter(|&(a, b)| side[a] != side[b])
                .collect();
            debug_assert_eq!(cut.len(), got, "residual cut must match the max flow");
            return MengerVerdict::refuted(Some(MengerWitness {
                pair: (w.min(x), w.max(x)),
                cut,
                min_degree: demand,
            }));
        }
    }
    MengerVerdict::holds()
}

/// For a disconnected graph, finds a cross-component pair whose degree
/// demand beats the empty cut, when one exists.
fn disconnected_witness(g: &Graph) -> Option<MengerWitness> {
    let (comp, count) = g.components();
    debug_assert!(count > 1);
    // Track the highest-degree vertex of each component.
    let mut best_of = vec![usize::MAX; count];
    for v in 0..g.n() {
        let c = comp[v];
        if best_of[c] == usize::MAX || g.degree(v) > g.degree(best_of[c]) {
            best_of[c] = v;
        }
    }
    let mut tops: Vec<usize> = best_of.into_iter().collect();
    tops.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)));
    let (s, t) = (tops[0], tops[1]);
    let demand = g.degree(s).min(g.degree(t));
    (demand > 0).then(|| MengerWitness {
        pair: (s.min(t), s.max(t)),
        cut: Vec::new(),
        min_degree: demand,
    })
}

/// Largest cut size the enumeration oracle must inspect for soundness: one
/// less than the second-largest degree, since a violating cut is strictly
/// smaller than some pair's `min(deg(u), deg(v))`.
pub fn enumeration_sound_bound(g: &Graph) -> usize {
    let mut degs: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    match degs.get(1) {
        Some(&d) => d.saturating_sub(1),
        None => 0,
    }
}

/// Independent strong-Menger decider: enumerates every edge subset of size
/// at most `max_cut` and looks for a removal that separates a pair whose
/// degree demand (in `g`) exceeds the subset size.
///
/// `max_cut` below [`enumeration_sound_bound`] is rejected, because a
/// violating cut could then escape the enumeration.
pub fn is_strongly_menger_by_cut_enumeration(g: &Graph, max_cut: usize) -> Result<MengerVerdict> {
    let sound = enumeration_sound_bound(g);
    if max_cut < sound {
        return Err(Error::validation(format!(
            "max_cut {max_cut} is below the sound bound {sound} for this graph"
        )));
    }
    let n = g.n();
    if n <= 1 {
        return Ok(MengerVerdict::holds());
    }
    if !g.is_connected() {
        return Ok(MengerVerdict::refuted(disconnected_witness(g)));
    }
    let m = g.m();
    let mut verdict = MengerVerdict::holds();
    for size in 1..=max_cut.min(m) {
        let completed = for_each_combination(m, size, |subset| {
            let faulty = g.remove_edge_indices(subset);
            let (comp, count) = faulty.components();
            if count < 2 {
                return true;
            }
            // Highest degree (taken in g) per component of the mutilated
            // graph; the best violating pair joins the two top components.
            let mut best = vec![usize::MAX; count];
            for v in 0..n {
                let c = comp[v];
                if best[c] == usize::MAX || g.degree(v) > g.degree(best[c]) {
                    best[c] = v;
                }
            }
            best.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)));
            let (s, t) = (best[0], best[1]);
            let demand = g.degree(s).min(g.degree(t));
            if demand > size {
                verdict = MengerVerdict::refuted(Some(MengerWitness {
                    pair: (s.min(t), s.max(t)),
                    cut: subset.iter().map(|&i| g.edges()[i]).collect(),
                    min_degree: demand,
                }));
                return false;
            }
            true
        });
        if !completed {
            break;
        }
    }
    Ok(verdict)
}

/// Default enumeration budget for [`is_f_strongly_menger`]'s exhaustive
/// mode: at most this many fault sets are inspected.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 2_000_000;

/// How [`is_f_strongly_menger`] explores the fault space.
#[derive(Clone, Copy, Debug)]
pub enum FaultMode {
    /// Check every fault set of size `0..=f`. Refused outright when the
    /// total count exceeds `budget`; never silently downgraded to sampling.
    Exhaustive { budget: u64 },
    /// Check `trials` random fault sets of size exactly `f`, drawn with the
    /// given seed. A positive answer is probabilistic.
    Sampled { trials: u64, seed: u64 },
}

/// Outcome of an f-strong-Menger check. `inspected` counts the fault sets
/// examined before the verdict.
#[derive(Clone, Debug)]
pub struct FStrongMengerOutcome {
    pub holds: bool,
    pub counterexample: Option<EdgeSet>,
    pub inspected: u64,
}

/// Decides whether `g` stays strongly Menger edge-connected after removing
/// any edge set of size at most `f`.
pub fn is_f_strongly_menger(g: &Graph, f: usize, mode: FaultMode) -> Result<FStrongMengerOutcome> {
    let m = g.m();
    if f > m {
        return Err(Error::validation(format!(
            "fault bound {f} exceeds the edge count {m}"
        )));
    }
    let mut inspected = 0u64;
    let mut counterexample: Option<EdgeSet> = None;
    match mode {
        FaultMode::Exhaustive { budget } => {
            let mut total: u64 = 0;
            for j in 0..=f {
                let c = binomial_at_most(m as u64, j as u64, budget).ok_or_else(|| {
                    budget_error(f, budget)
                })?;
                total = total.checked_add(c).ok_or_else(|| budget_error(f, budget))?;
                if total > budget {
                    return Err(budget_error(f, budget));
                }
            }
            'outer: for j in 0..=f {
                let completed = for_each_combination(m, j, |subset| {
                    inspected += 1;
                    let faulty = g.remove_edge_indices(subset);
                    if !is_strongly_menger(&faulty).holds {
                        counterexample = Some(EdgeSet::from_indices(g, subset));
                        return false;
                    }
                    true
                });
                if !completed {
                    break 'outer;
                }
            }
        }
        FaultMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut indices: Vec<usize> = (0..m).collect();
            for _ in 0..trials {
                inspected += 1;
                // Partial Fisher-Yates: the first f slots become the sample.
                for j in 0..f {
                    let k = rng.random_range(j..m);
                    indices.swap(j, k);
                }
                let faulty = g.remove_edge_indices(&indices[..f]);
                if !is_strongly_menger(&faulty).holds {
                    counterexample = Some(EdgeSet::from_indices(g, &indices[..f]));
                    break;
                }
            }
        }
    }
    Ok(FStrongMengerOutcome {
        holds: counterexample.is_none(),
        counterexample,
        inspected,
    })
}

fn budget_error(f: usize, budget: u64) -> Error {
    Error::BudgetExceeded(format!(
        "exhaustive check of all fault sets of size <= {f} exceeds the budget of {budget}; \
         rerun with a larger budget or sampled mode"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology;

    fn path(n: usize) -> Graph {
        Graph::build(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let mut e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        e.push((n - 1, 0));
        Graph::build(n, &e).unwrap()
    }

    fn check_witness(g: &Graph, w: &MengerWitness) {
        assert!(w.cut.len() < w.min_degree, "cut not below the demand");
        assert_eq!(
            w.min_degree,
            g.degree(w.pair.0).min(g.degree(w.pair.1)),
            "recorded demand mismatch"
        );
        let faults = EdgeSet::new(g, &w.cut).expect("cut edges belong to g");
        let cut_removed = g.remove_edges(&faults).unwrap();
        assert_eq!(
            cut_removed.min_edge_cut(w.pair.0, w.pair.1).unwrap(),
            0,
            "witness cut does not disconnect the pair"
        );
    }

    #[test]
    fn q4_is_strongly_menger() {
        assert!(is_strongly_menger(&topology::hypercube(4).unwrap()).holds);
    }

    #[test]
    fn p4_fails_with_checkable_witness() {
        let g = path(4);
        let verdict = is_strongly_menger(&g);
        assert!(!verdict.holds);
        let w = verdict.witness.expect("witness for a connected failure");
        assert_eq!(w.pair, (1, 2), "the two interior vertices");
        assert_eq!(w.min_degree, 2);
        assert_eq!(w.cut.len(), 1);
        check_witness(&g, &w);
    }

    #[test]
    fn p3_holds() {
        assert!(is_strongly_menger(&path(3)).holds);
    }

    #[test]
    fn disconnected_graphs_are_not_strongly_menger() {
        let g = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        let verdict = is_strongly_menger(&g);
        assert!(!verdict.holds);
        let w = verdict.witness.expect("positive-degree cross pair exists");
        assert!(w.cut.is_empty());
        check_witness(&g, &w);

        // Isolated vertex: every cross pair has demand 0, witness stays None.
        let g = Graph::build(3, &[(0, 1)]).unwrap();
        let verdict = is_strongly_menger(&g);
        assert!(!verdict.holds);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn regular_graphs_with_full_edge_connectivity_are_strongly_menger() {
        let mut graphs = vec![
            topology::hypercube(4).unwrap(),
            topology::mobius_cube(0, 4).unwrap(),
            topology::mobius_cube(1, 4).unwrap(),
            topology::ary_cube(4, 2).unwrap(),
        ];
        for i in 2..=7 {
            graphs.push(topology::circulant(16, &[1, i]).unwrap());
        }
        for g in &graphs {
            let d = g.regular_degree().expect("family graphs are regular");
            assert_eq!(g.edge_connectivity(), d);
            assert!(is_strongly_menger(g).holds);
        }
    }

    #[test]
    fn enumeration_matches_flow_on_mutilated_graphs() {
        let base = topology::hypercube(4).unwrap();
        let mut state = 0xA076_1D64_78BD_642Fu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let f = (next() % 7) as usize;
            let mut picks: Vec<usize> = (0..base.m()).collect();
            for j in 0..f {
                let k = j + (next() as usize) % (base.m() - j);
                picks.swap(j, k);
            }
            let faulty = base.remove_edge_indices(&picks[..f]);
            let flow = is_strongly_menger(&faulty);
            let enumerated = is_strongly_menger_by_cut_enumeration(&faulty, 3).unwrap();
            assert_eq!(flow.holds, enumerated.holds);
            if let Some(w) = &flow.witness {
                check_witness(&faulty, w);
            }
            if let Some(w) = &enumerated.witness {
                check_witness(&faulty, w);
            }
        }
    }

    #[test]
    fn cycle_minus_edge_fails_enumeration_at_cut_one() {
        let mut g = cycle(8);
        let f = EdgeSet::new(&g, &[(0, 7)]).unwrap();
        g = g.remove_edges(&f).unwrap();
        let verdict = is_strongly_menger_by_cut_enumeration(&g, 1).unwrap();
        assert!(!verdict.holds);
        check_witness(&g, &verdict.witness.unwrap());
    }

    #[test]
    fn k2_holds_at_cut_zero() {
        let k2 = Graph::build(2, &[(0, 1)]).unwrap();
        assert_eq!(enumeration_sound_bound(&k2), 0);
        assert!(is_strongly_menger_by_cut_enumeration(&k2, 0).unwrap().holds);
    }

    #[test]
    fn enumeration_rejects_unsound_max_cut() {
        let q4 = topology::hypercube(4).unwrap();
        assert_eq!(enumeration_sound_bound(&q4), 3);
        let err = is_strongly_menger_by_cut_enumeration(&q4, 2).unwrap_err();
        assert!(err.to_string().contains("sound bound"), "{err}");
    }

    #[test]
    fn f_strong_menger_examples() {
        let q4 = topology::hypercube(4).unwrap();
        let outcome = is_f_strongly_menger(
            &q4,
            2,
            FaultMode::Exhaustive {
                budget: DEFAULT_EXHAUSTIVE_BUDGET,
            },
        )
        .unwrap();
        assert!(outcome.holds);
        assert_eq!(outcome.inspected, 1 + 32 + 496);

        let m4 = topology::mobius_cube(0, 4).unwrap();
        assert!(is_f_strongly_menger(
            &m4,
            2,
            FaultMode::Exhaustive {
                budget: DEFAULT_EXHAUSTIVE_BUDGET
            }
        )
        .unwrap()
        .holds);

        let c8 = cycle(8);
        let outcome = is_f_strongly_menger(
            &c8,
            1,
            FaultMode::Exhaustive {
                budget: DEFAULT_EXHAUSTIVE_BUDGET,
            },
        )
        .unwrap();
        assert!(!outcome.holds);
        let cx = outcome.counterexample.expect("single-edge counterexample");
        assert_eq!(cx.len(), 1, "any one edge of the cycle suffices");
    }

    #[test]
    fn f_strong_menger_budget_refusal() {
        let q4 = topology::hypercube(4).unwrap();
        let err = is_f_strongly_menger(&q4, 2, FaultMode::Exhaustive { budget: 10 }).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)), "{err}");
    }

    #[test]
    fn f_strong_menger_sampled_finds_counterexamples() {
        let c8 = cycle(8);
        let outcome =
            is_f_strongly_menger(&c8, 1, FaultMode::Sampled { trials: 50, seed: 1 }).unwrap();
        assert!(!outcome.holds);
        assert_eq!(outcome.inspected, 1, "first trial already fails");

        let q4 = topology::hypercube(4).unwrap();
        let outcome =
            is_f_strongly_menger(&q4, 3, FaultMode::Sampled { trials: 100, seed: 1 }).unwrap();
        assert!(outcome.holds);
        assert_eq!(outcome.inspected, 100);
    }

    #[test]
    fn f_strong_menger_rejects_f_above_edge_count() {
        let k2 = Graph::build(2, &[(0, 1)]).unwrap();
        assert!(is_f_strongly_menger(&k2, 2, FaultMode::Sampled { trials: 1, seed: 0 }).is_err());
    }
}
