//! Property tests. Every expected value is recomputed here from the group
//! table or the raw graph, never taken from the crate's own helpers.

use cayley_cops::cover::{cover_placement, greedy_translate_cover, weak_meyniel_report};
use cayley_cops::game::{replay, run, GameRules, UniformRandom};
use cayley_cops::instance::InstanceSpec;
use cayley_cops::oracle::{self, CopNumber, OracleConfig};
use cayley_cops::strategy::{check_hypotheses, LabelledCops};
use cayley_cops::{AlgebraicGraph, Automorphism, Elem, Family, GenSet, Graph, Group, GroupSpec};
use proptest::prelude::*;
use std::collections::{BTreeSet, VecDeque};
use std::path::Path;
use std::sync::Arc;

const GROUPS: &[&str] = &[
    "cyclic(2)",
    "cyclic(4)",
    "cyclic(5)",
    "cyclic(6)",
    "cyclic(8)",
    "dihedral(3)",
    "dihedral(4)",
    "dihedral(5)",
    "quaternion8",
    "alternating(4)",
    "product(cyclic(2), cyclic(2))",
    "product(cyclic(2), cyclic(4))",
    "product(cyclic(3), cyclic(3))",
];

fn group(i: usize) -> Arc<Group> {
    let spec: GroupSpec = GROUPS[i % GROUPS.len()].parse().unwrap();
    Arc::new(spec.build().unwrap())
}

fn subset(g: &Group, mask: u64) -> Vec<Elem> {
    let n = g.order();
    let s: Vec<Elem> = (1..n).filter(|&x| mask >> (x % 64) & 1 == 1).collect();
    if s.is_empty() {
        vec![1.min(n - 1)]
    } else {
        s
    }
}

fn symmetrize(g: &Group, s: &[Elem]) -> Vec<Elem> {
    let mut out: BTreeSet<Elem> = s.iter().copied().collect();
    out.extend(s.iter().map(|&x| g.inv(x)));
    out.into_iter().collect()
}

fn normal_closure_set(g: &Group, s: &[Elem]) -> Vec<Elem> {
    let mut out = BTreeSet::new();
    for &x in s {
        for u in 0..g.order() {
            let c = g.mul(g.mul(g.inv(u), x), u);
            out.insert(c);
            out.insert(g.inv(c));
        }
    }
    out.into_iter().collect()
}

/// Shortest word length from `e` under right multiplication.
fn bfs_lengths(g: &Group, s: &[Elem]) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    dist[0] = Some(0);
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &t in s {
            let y = g.mul(x, t);
            if dist[y].is_none() {
                dist[y] = Some(dist[x].unwrap() + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

fn subgroup(g: &Group, s: &[Elem]) -> BTreeSet<Elem> {
    bfs_lengths(g, s)
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some())
        .map(|(x, _)| x)
        .collect()
}

fn target(g: &Group, family: Family, sigma: Option<&Automorphism>, x: Elem, t: Elem) -> Elem {
    match family {
        Family::Cayley => g.mul(x, t),
        Family::CayleySum => g.mul(g.inv(x), t),
        Family::TwistedCayley => sigma.unwrap().apply(g.mul(x, t)),
        Family::TwistedCayleySum => sigma.unwrap().apply(g.mul(g.inv(x), t)),
    }
}

fn family(i: usize) -> Family {
    Family::ALL[i % 4]
}

fn sigma_for(g: &Arc<Group>, family: Family, pick: usize) -> Option<Automorphism> {
    if !family.is_twisted() {
        return None;
    }
    let all = Automorphism::enumerate(g, Some(2));
    Some(all[pick % all.len()].clone())
}

/// Random connected graph: a random tree plus extra edges.
fn connected_graph(n: usize, parents: &[usize], extra: &[(usize, usize)]) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (parents[v - 1] % v, v)).collect();
    edges.extend(
        extra
            .iter()
            .map(|&(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b),
    );
    Graph::from_edges(n, &edges, true)
}

/// Cop-win under cops-first rules iff the graph dismantles by repeatedly
/// removing a vertex whose closed neighbourhood sits inside another's.
fn dismantlable(g: &Graph) -> bool {
    let n = g.len();
    let mut alive = vec![true; n];
    let closed = |v: usize, alive: &[bool]| -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| alive[u])
            .collect();
        s.insert(v);
        s
    };
    let mut left = n;
    while left > 1 {
        let corner = (0..n).filter(|&v| alive[v]).find(|&v| {
            let nv = closed(v, &alive);
            nv.iter()
                .any(|&w| w != v && nv.is_subset(&closed(w, &alive)))
        });
        match corner {
            Some(v) => {
                alive[v] = false;
                left -= 1;
            }
            None => return false,
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_tables_are_groups(i in 0..GROUPS.len(), j in 0..GROUPS.len()) {
        let spec: GroupSpec = format!("product({}, {})", GROUPS[i], GROUPS[j % 5]).parse().unwrap();
        let g = spec.build().unwrap();
        let n = g.order();
        for a in 0..n {
            let row: BTreeSet<Elem> = (0..n).map(|b| g.mul(a, b)).collect();
            let col: BTreeSet<Elem> = (0..n).map(|b| g.mul(b, a)).collect();
            prop_assert_eq!(row.len(), n);
            prop_assert_eq!(col.len(), n);
            prop_assert_eq!(g.mul(a, 0), a);
            prop_assert_eq!(g.mul(0, a), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        if n <= 32 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn tail_is_min_word_length_over_the_power_coset(gi in 0..GROUPS.len(), mask in any::<u64>(), si in 0usize..64) {
        let g = group(gi);
        let s = symmetrize(&g, &subset(&g, mask));
        let reach = subgroup(&g, &s);
        prop_assume!(reach.len() == g.order());
        let genset = GenSet::new(g.clone(), s.iter().copied()).unwrap();
        let lengths = bfs_lengths(&g, &s);
        let label = s[si % s.len()];
        for x in 0..g.order() {
            let ord = g.element_order(label);
            let want = (0..ord)
                .map(|i| lengths[g.mul(x, g.pow(label, -(i as i64)))].unwrap())
                .min()
                .unwrap();
            let tp = genset.tail_and_power(x, label).unwrap();
            prop_assert_eq!(tp.tail, want);
            prop_assert_eq!(tp.witness.len(), tp.tail);
            let w = g.product(tp.witness.iter().copied());
            prop_assert_eq!(g.mul(w, g.pow(label, tp.exponent as i64)), x);
            prop_assert!(tp.witness.iter().all(|t| s.contains(t)));
        }
    }

    #[test]
    fn conjugation_permutes_a_normal_set(gi in 0..GROUPS.len(), mask in any::<u64>()) {
        let g = group(gi);
        let s = normal_closure_set(&g, &subset(&g, mask));
        let genset = GenSet::new(g.clone(), s.iter().copied()).unwrap();
        prop_assert!(genset.is_conjugation_closed());
        for u in 0..g.order() {
            let image: BTreeSet<Elem> = s.iter().map(|&x| g.mul(g.mul(g.inv(u), x), u)).collect();
            prop_assert_eq!(image.into_iter().collect::<Vec<_>>(), s.clone());
        }
    }

    #[test]
    fn adjacency_matches_the_defining_map(gi in 0..GROUPS.len(), mask in any::<u64>(), fi in 0usize..4, pick in 0usize..64) {
        let g = group(gi);
        let f = family(fi);
        let s = subset(&g, mask);
        let sigma = sigma_for(&g, f, pick);
        let genset = GenSet::new(g.clone(), s.iter().copied()).unwrap();
        let graph = AlgebraicGraph::build(f, genset, sigma.clone()).unwrap();
        let mut symmetric = true;
        for x in 0..g.order() {
            let targets: Vec<Elem> = s.iter().map(|&t| target(&g, f, sigma.as_ref(), x, t)).collect();
            let distinct: BTreeSet<Elem> = targets.iter().copied().collect();
            let got: BTreeSet<Elem> = graph.graph().neighbors(x).iter().copied().collect();
            prop_assert_eq!(&got, &distinct);
            prop_assert!(got.len() <= s.len());
            prop_assert_eq!(got.len() == s.len(), distinct.len() == targets.len());
            for &y in &distinct {
                if !s.iter().any(|&t| target(&g, f, sigma.as_ref(), y, t) == x) {
                    symmetric = false;
                }
            }
        }
        prop_assert_eq!(graph.is_undirected(), symmetric);
        let check = graph.check_undirected_criterion();
        prop_assert_eq!(check.observed, symmetric);
        if check_hypotheses(&graph).holds() {
            prop_assert!(check.agree);
        }
        if symmetric && matches!(f, Family::Cayley | Family::CayleySum) && graph.is_connected().unwrap() {
            prop_assert_eq!(subgroup(&g, &s).len(), g.order());
        }
    }

    #[test]
    fn strategy_games_replay_and_keep_labels_bijective(gi in 0..GROUPS.len(), mask in any::<u64>(), fi in 1usize..4, pick in 0usize..64, seed in any::<u64>()) {
        let g = group(gi);
        let f = family(fi);
        let s = match f {
            Family::TwistedCayley => symmetrize(&g, &subset(&g, mask)),
            _ => normal_closure_set(&g, &subset(&g, mask)),
        };
        let sigma = sigma_for(&g, f, pick);
        let genset = GenSet::new(g.clone(), s.iter().copied()).unwrap();
        let graph = Arc::new(AlgebraicGraph::build(f, genset, sigma).unwrap());
        let Ok(strategy) = LabelledCops::new(graph.clone()) else { return Ok(()) };
        let rules = GameRules::forced_move().with_max_rounds(60);
        let mut robber = UniformRandom::new(seed);
        let trace = run(graph.as_ref(), s.len(), rules, &mut robber, &mut strategy.clone()).unwrap();
        let adj = graph.graph();

        let end = replay(graph.as_ref(), &trace).unwrap();
        prop_assert_eq!(end.captured, trace.capture_round().is_some());
        if let Some(last) = trace.rounds.last() {
            if let Some(cops) = &last.cops {
                let final_cops: Vec<usize> = cops.iter().map(|&(_, to)| to).collect();
                prop_assert_eq!(end.cop_positions, final_cops);
            }
        }
        let lines = cayley_cops::game::GameTrace::from_lines(&trace.to_lines()).unwrap();
        prop_assert_eq!(&lines, &trace);
        prop_assert_eq!(&cayley_cops::game::GameTrace::from_json(&trace.to_json()).unwrap(), &trace);

        let label_set: BTreeSet<Elem> = s.iter().copied().collect();
        for (i, round) in trace.rounds.iter().enumerate() {
            prop_assert_eq!(round.captured, i + 1 == trace.rounds.len() && trace.capture_round().is_some());
            let r = round.robber.as_ref().unwrap();
            prop_assert!(!r.pass);
            prop_assert!(adj.has_edge(r.from, r.to));
            if let Some(cops) = &round.cops {
                for &(a, b) in cops {
                    prop_assert!(a == b || adj.has_edge(a, b));
                }
            }
            if !round.annotations.is_empty() {
                let labels: Vec<Elem> = round.annotations.iter().map(|a| a.next_label).collect();
                let set: BTreeSet<Elem> = labels.iter().copied().collect();
                prop_assert_eq!(set.len(), labels.len());
                prop_assert_eq!(&set, &label_set);
                for a in &round.annotations {
                    prop_assert!(a.next_tail <= a.tail);
                }
            }
        }
    }

    #[test]
    fn cop_win_matches_dismantlability(n in 1usize..9, parents in prop::collection::vec(any::<usize>(), 8), extra in prop::collection::vec((0usize..9, 0usize..9), 0..10)) {
        let graph = connected_graph(n, &parents, &extra);
        let one = oracle::k_cops_win(&graph, 1, GameRules::classical(), &OracleConfig::default()).unwrap();
        prop_assert_eq!(one, dismantlable(&graph));
    }

    #[test]
    fn winning_is_monotone_in_k(n in 1usize..8, parents in prop::collection::vec(any::<usize>(), 8), extra in prop::collection::vec((0usize..8, 0usize..8), 0..12), std_rules in any::<bool>()) {
        let graph = connected_graph(n, &parents, &extra);
        let rules = if std_rules { GameRules::standard() } else { GameRules::classical() };
        let wins: Vec<bool> = (1..=3.min(n))
            .map(|k| oracle::k_cops_win(&graph, k, rules, &OracleConfig::default()).unwrap())
            .collect();
        for w in wins.windows(2) {
            prop_assert!(!w[0] || w[1]);
        }
        // Cops on every vertex capture at once.
        prop_assert!(wins.last().copied().unwrap() || n > 3);
    }

    #[test]
    fn covers_cover_and_placements_dominate(gi in 0..GROUPS.len(), mask in any::<u64>(), fi in 0usize..4, pick in 0usize..64) {
        let g = group(gi);
        let f = family(fi);
        let s = match f {
            Family::Cayley | Family::CayleySum => normal_closure_set(&g, &subset(&g, mask)),
            _ => symmetrize(&g, &subset(&g, mask)),
        };
        let sigma = sigma_for(&g, f, pick);
        let genset = GenSet::new(g.clone(), s.iter().copied()).unwrap();
        let graph = AlgebraicGraph::build(f, genset.clone(), sigma).unwrap();
        prop_assume!(graph.is_undirected());
        let cover = greedy_translate_cover(&genset);
        let gr = g.as_ref();
        let union: BTreeSet<Elem> = cover.translates.iter().flat_map(|&t| s.iter().map(move |&x| gr.mul(t, x))).collect();
        prop_assert_eq!(union.len(), g.order());
        prop_assert!(cover.covers);
        let placement = cover_placement(&graph, &cover.translates);
        let adj = graph.graph();
        let dominated = (0..g.order()).all(|v| placement.vertices.iter().any(|&c| c == v || adj.has_edge(c, v)));
        prop_assert_eq!(placement.dominates, dominated);
        prop_assert!(dominated);
    }

    #[test]
    fn certified_count_is_an_upper_bound(gi in 0..GROUPS.len(), mask in any::<u64>(), fi in 0usize..4, pick in 0usize..64) {
        let g = group(gi);
        prop_assume!(g.order() <= 10);
        let f = family(fi);
        let s = normal_closure_set(&g, &subset(&g, mask));
        let sigma = sigma_for(&g, f, pick);
        let genset = GenSet::new(g.clone(), s.iter().copied()).unwrap();
        let graph = AlgebraicGraph::build(f, genset, sigma).unwrap();
        prop_assume!(graph.is_undirected() && graph.is_connected().unwrap());
        let value = oracle::cop_number(graph.graph(), GameRules::standard(), &OracleConfig::default(), Some(3)).unwrap().value;
        let report = weak_meyniel_report(&graph, Some(value));
        if let (Some(c), CopNumber::Exact(o)) = (report.certified, value) {
            prop_assert!(c >= o);
        }
        prop_assert_ne!(report.oracle_consistent, Some(false));
    }

    #[test]
    fn instance_files_round_trip(gi in 0..GROUPS.len(), mask in any::<u64>(), fi in 0usize..4, pick in 0usize..64, max_rounds in 1usize..500) {
        let g = group(gi);
        let f = family(fi);
        let s = subset(&g, mask);
        let mut text = format!(
            "family = {}\ngroup = {}\nS = {}\nrules.max_rounds = {max_rounds}\n",
            f,
            GROUPS[gi % GROUPS.len()],
            s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        );
        if let Some(sigma) = sigma_for(&g, f, pick) {
            text.push_str(&format!("sigma = {}\n", sigma.to_images_text()));
        }
        let spec = InstanceSpec::parse(&text).unwrap();
        let again = InstanceSpec::parse(&spec.to_text()).unwrap();
        prop_assert_eq!(&again, &spec);
        prop_assert_eq!(again.hash(), spec.hash());
        let inst = spec.build(Path::new(".")).unwrap();
        prop_assert_eq!(inst.graph.genset().members(), &s[..]);
    }
}
