//! The small-group corpus and the generating-set enumerations the suite
//! sweeps over.

use crate::group::{Elem, Group, GroupError, GroupSpec};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Built-in groups of order ≤ 24, one spec per line of the default corpus.
pub const DEFAULT_GROUPS: &[&str] = &[
    "cyclic(1)",
    "cyclic(2)",
    "cyclic(3)",
    "cyclic(4)",
    "cyclic(5)",
    "cyclic(6)",
    "cyclic(7)",
    "cyclic(8)",
    "cyclic(9)",
    "cyclic(10)",
    "cyclic(11)",
    "cyclic(12)",
    "cyclic(13)",
    "cyclic(14)",
    "cyclic(15)",
    "cyclic(16)",
    "cyclic(17)",
    "cyclic(18)",
    "cyclic(19)",
    "cyclic(20)",
    "cyclic(21)",
    "cyclic(22)",
    "cyclic(23)",
    "cyclic(24)",
    "dihedral(3)",
    "dihedral(4)",
    "dihedral(5)",
    "dihedral(6)",
    "dihedral(7)",
    "dihedral(8)",
    "dihedral(9)",
    "dihedral(10)",
    "dihedral(11)",
    "dihedral(12)",
    "quaternion8",
    "alternating(4)",
    "symmetric(4)",
    "product(cyclic(2), cyclic(2))",
    "product(cyclic(2), cyclic(4))",
    "product(cyclic(2), cyclic(2), cyclic(2))",
    "product(cyclic(3), cyclic(3))",
    "product(cyclic(2), cyclic(6))",
    "product(cyclic(4), cyclic(4))",
    "product(cyclic(2), cyclic(8))",
    "product(cyclic(2), cyclic(2), cyclic(4))",
    "product(cyclic(2), cyclic(2), cyclic(2), cyclic(2))",
    "product(quaternion8, cyclic(2))",
    "product(dihedral(4), cyclic(2))",
    "product(dihedral(3), cyclic(3))",
    "product(cyclic(3), cyclic(6))",
    "product(cyclic(2), cyclic(10))",
    "product(dihedral(5), cyclic(2))",
    "product(cyclic(2), cyclic(12))",
    "product(cyclic(2), cyclic(2), cyclic(6))",
    "product(dihedral(3), cyclic(4))",
    "product(quaternion8, cyclic(3))",
    "product(alternating(4), cyclic(2))",
    "product(dihedral(4), cyclic(3))",
];

#[derive(Debug, Clone)]
pub struct CorpusGroup {
    pub spec: GroupSpec,
    pub group: Arc<Group>,
}

pub fn build_groups(specs: &[String]) -> Result<Vec<CorpusGroup>, GroupError> {
    specs
        .iter()
        .map(|s| {
            let spec: GroupSpec = s.parse()?;
            let group = Arc::new(spec.build()?);
            Ok(CorpusGroup { spec, group })
        })
        .collect()
}

pub fn default_group_specs() -> Vec<String> {
    DEFAULT_GROUPS.iter().map(|s| s.to_string()).collect()
}

/// Partitions `G \ {e}` into orbits of `g ↦ g⁻¹`, and, when `conjugation`
/// is set, of conjugation as well. Orbits are sorted and listed by their
/// least element.
pub fn orbits(group: &Group, conjugation: bool) -> Vec<Vec<Elem>> {
    let n = group.order();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut out = Vec::new();
    for g in 1..n {
        if seen[g] {
            continue;
        }
        let mut orbit = if conjugation {
            let mut o = group.conjugacy_class(g);
            o.extend(group.conjugacy_class(group.inv(g)));
            o
        } else {
            vec![g, group.inv(g)]
        };
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            seen[x] = true;
        }
        out.push(orbit);
    }
    out
}

/// Every union of orbits with total size in `1..=max_size`, each sorted,
/// in lexicographic order of the chosen orbit indices.
pub fn orbit_unions(orbits: &[Vec<Elem>], max_size: usize) -> Vec<Vec<Elem>> {
    fn go(
        orbits: &[Vec<Elem>],
        start: usize,
        room: usize,
        current: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        for i in start..orbits.len() {
            let o = &orbits[i];
            if o.len() > room {
                continue;
            }
            let len = current.len();
            current.extend_from_slice(o);
            let mut set = current.clone();
            set.sort_unstable();
            out.push(set);
            go(orbits, i + 1, room - o.len(), current, out);
            current.truncate(len);
        }
    }
    let mut out = Vec::new();
    go(orbits, 0, max_size, &mut Vec::new(), &mut out);
    out
}

/// Symmetric subsets of `G \ {e}` of size at most `max_size`.
pub fn symmetric_subsets(group: &Group, max_size: usize) -> Vec<Vec<Elem>> {
    orbit_unions(&orbits(group, false), max_size)
}

/// Symmetric, conjugation-closed subsets of `G \ {e}` of size at most
/// `max_size`.
pub fn normal_symmetric_subsets(group: &Group, max_size: usize) -> Vec<Vec<Elem>> {
    orbit_unions(&orbits(group, true), max_size)
}

/// Keeps `items` if there are at most `cap`, otherwise a seeded sample of
/// `cap` of them in their original order.
pub fn sample<T: Clone>(items: Vec<T>, cap: usize, seed: u64) -> (Vec<T>, bool) {
    if items.len() <= cap {
        return (items, false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks: Vec<usize> = (0..items.len()).collect();
    picks.shuffle(&mut rng);
    picks.truncate(cap);
    picks.sort_unstable();
    (picks.into_iter().map(|i| items[i].clone()).collect(), true)
}

/// Seeded random subsets of `G \ {e}` (not necessarily symmetric) with
/// sizes in `1..=max_size`, deduplicated and sorted.
pub fn random_subsets(group: &Group, max_size: usize, count: usize, seed: u64) -> Vec<Vec<Elem>> {
    use rand::Rng;
    let n = group.order();
    if n < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<Elem>> = (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n - 1));
            let mut pool: Vec<Elem> = (1..n).collect();
            pool.shuffle(&mut rng);
            pool.truncate(size);
            pool.sort_unstable();
            pool
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
