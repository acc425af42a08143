use super::{Elem, Group, GroupError};
use std::collections::VecDeque;
use std::sync::Arc;

/// A nonempty subset `S` of a group, kept sorted by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSet {
    group: Arc<Group>,
    members: Vec<Elem>,
    mask: Vec<bool>,
}

/// Minimal decomposition `g = w · s^i` with `w` a word over `S`.
///
/// `tail` is the length of `w`, `exponent` the `i` used with the chosen
/// witness, and `power` the least `i ≥ 0` with `g = s^i` (only when the tail
/// is zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailPower {
    pub tail: usize,
    pub power: Option<usize>,
    pub witness: Vec<Elem>,
    pub exponent: usize,
}

impl GenSet {
    pub fn new(
        group: Arc<Group>,
        members: impl IntoIterator<Item = Elem>,
    ) -> Result<Self, GroupError> {
        let mut members: Vec<Elem> = members.into_iter().collect();
        for &m in &members {
            group.check_element(m)?;
        }
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(GroupError::Parse("S must be nonempty".into()));
        }
        let mut mask = vec![false; group.order()];
        for &m in &members {
            mask[m] = true;
        }
        Ok(GenSet {
            group,
            members,
            mask,
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, g: Elem) -> bool {
        self.mask[g]
    }

    /// `s^{-1} ∈ S` for every `s ∈ S`.
    pub fn is_symmetric(&self) -> bool {
        self.members
            .iter()
            .all(|&s| self.contains(self.group.inv(s)))
    }

    /// `g s g^{-1} ∈ S` for every `g ∈ G`, `s ∈ S`.
    pub fn is_conjugation_closed(&self) -> bool {
        let g = &self.group;
        g.elements().all(|h| {
            self.members
                .iter()
                .all(|&s| self.contains(g.conjugate(h, s)))
        })
    }

    /// Elements reached from the identity by right multiplication with `S`.
    fn reach(&self) -> Vec<Option<u32>> {
        let g = &self.group;
        let mut dist = vec![None; g.order()];
        dist[g.identity()] = Some(0);
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &s in &self.members {
                let y = g.mul(x, s);
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn generates(&self) -> bool {
        self.reach().iter().all(Option::is_some)
    }

    /// Minimal number of `S`-factors for each element (identity ↦ 0).
    pub fn word_lengths(&self) -> Result<Vec<usize>, GroupError> {
        let dist = self.reach();
        let missing: Vec<Elem> = (0..dist.len()).filter(|&x| dist[x].is_none()).collect();
        if !missing.is_empty() {
            return Err(GroupError::NotGenerating(missing));
        }
        Ok(dist.into_iter().map(|d| d.unwrap() as usize).collect())
    }

    /// Decomposes `g = w · s^i` with `|w|` minimal over all integers `i`.
    ///
    /// Distances are computed by one backward BFS from the coset `g⟨s⟩`; the
    /// witness is the lexicographically smallest minimal word, built greedily
    /// from the identity.
    pub fn tail_and_power(&self, g: Elem, s: Elem) -> Result<TailPower, GroupError> {
        let grp = &self.group;
        grp.check_element(g)?;
        if !self.contains(s) {
            return Err(GroupError::Parse(format!("label {s} is not in S")));
        }
        let n = grp.order();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for c in grp.cyclic_subgroup(s) {
            let t = grp.mul(g, grp.inv(c));
            if dist[t] == usize::MAX {
                dist[t] = 0;
                queue.push_back(t);
            }
        }
        let inverses: Vec<Elem> = self.members.iter().map(|&h| grp.inv(h)).collect();
        while let Some(x) = queue.pop_front() {
            for &hinv in &inverses {
                let p = grp.mul(x, hinv);
                if dist[p] == usize::MAX {
                    dist[p] = dist[x] + 1;
                    queue.push_back(p);
                }
            }
        }
        let tail = dist[grp.identity()];
        if tail == usize::MAX {
            return Err(GroupError::NotGenerating(
                (0..n).filter(|&x| dist[x] == usize::MAX).collect(),
            ));
        }
        let mut witness = Vec::with_capacity(tail);
        let mut cur = grp.identity();
        while dist[cur] > 0 {
            let next = self
                .members
                .iter()
                .copied()
                .find(|&h| dist[grp.mul(cur, h)] + 1 == dist[cur])
                .expect("BFS layer has a descending edge");
            witness.push(next);
            cur = grp.mul(cur, next);
        }
        // cur = w; find the least i ≥ 0 with w s^i = g.
        let rest = grp.mul(grp.inv(cur), g);
        let exponent = grp
            .cyclic_subgroup(s)
            .iter()
            .position(|&c| c == rest)
            .expect("w lies in g<s>");
        Ok(TailPower {
            tail,
            power: (tail == 0).then_some(exponent),
            witness,
            exponent,
        })
    }
}

/// Precomputed [`TailPower`] for every `(label, displacement)` pair.
#[derive(Debug, Clone)]
pub struct TailTable {
    order: usize,
    slot: Vec<usize>,
    entries: Vec<TailPower>,
    in_cyclic: Vec<bool>,
}

impl TailTable {
    pub fn new(genset: &GenSet) -> Result<Self, GroupError> {
        let grp = genset.group();
        let n = grp.order();
        let mut slot = vec![usize::MAX; n];
        let mut entries = Vec::with_capacity(genset.len() * n);
        let mut in_cyclic = vec![false; genset.len() * n];
        for (k, &s) in genset.members().iter().enumerate() {
            slot[s] = k;
            for d in 0..n {
                entries.push(genset.tail_and_power(d, s)?);
            }
            for c in grp.cyclic_subgroup(s) {
                in_cyclic[k * n + c] = true;
            }
        }
        Ok(TailTable {
            order: n,
            slot,
            entries,
            in_cyclic,
        })
    }

    #[inline]
    pub fn get(&self, label: Elem, displacement: Elem) -> &TailPower {
        &self.entries[self.slot[label] * self.order + displacement]
    }

    /// Whether `x` is a (possibly negative) power of `label`.
    #[inline]
    pub fn is_power_of(&self, x: Elem, label: Elem) -> bool {
        self.in_cyclic[self.slot[label] * self.order + x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families::{cyclic, quaternion8};
    use crate::group::GroupSpec;

    fn set(g: &Arc<Group>, m: &[Elem]) -> GenSet {
        GenSet::new(g.clone(), m.iter().copied()).unwrap()
    }

    #[test]
    fn symmetry_examples() {
        let z5 = Arc::new(cyclic(5).unwrap());
        assert!(set(&z5, &[1, 4]).is_symmetric());
        assert!(!set(&z5, &[1]).is_symmetric());
        let s3 = Arc::new(GroupSpec::Symmetric(3).build().unwrap());
        let transpositions: Vec<Elem> = s3
            .elements()
            .filter(|&x| s3.element_order(x) == 2)
            .collect();
        assert_eq!(transpositions.len(), 3);
        assert!(set(&s3, &transpositions).is_symmetric());
    }

    #[test]
    fn conjugation_closure_examples() {
        let z6 = Arc::new(cyclic(6).unwrap());
        assert!(set(&z6, &[1, 2]).is_conjugation_closed());
        let s3 = Arc::new(GroupSpec::Symmetric(3).build().unwrap());
        let transpositions: Vec<Elem> = s3
            .elements()
            .filter(|&x| s3.element_order(x) == 2)
            .collect();
        assert!(!set(&s3, &transpositions[..1]).is_conjugation_closed());
        assert!(set(&s3, &transpositions).is_conjugation_closed());
    }

    #[test]
    fn generation_examples() {
        let z6 = Arc::new(cyclic(6).unwrap());
        assert!(set(&z6, &[2, 3]).generates());
        assert!(!set(&z6, &[2, 4]).generates());
        let z5 = Arc::new(cyclic(5).unwrap());
        assert!(set(&z5, &[1, 4]).generates());
    }

    #[test]
    fn word_lengths_z6() {
        let z6 = Arc::new(cyclic(6).unwrap());
        let wl = set(&z6, &[2, 3]).word_lengths().unwrap();
        // BFS layers: {0}, {2,3}, {4,5}, {1}: 1 = 2+2+3 needs three factors.
        assert_eq!(wl, vec![0, 3, 1, 1, 2, 2]);
        match set(&z6, &[2, 4]).word_lengths() {
            Err(GroupError::NotGenerating(missing)) => assert_eq!(missing, vec![1, 3, 5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tail_power_trivial_cases() {
        let z6 = Arc::new(cyclic(6).unwrap());
        let s = set(&z6, &[2, 3]);
        let tp = s.tail_and_power(0, 2).unwrap();
        assert_eq!((tp.tail, tp.power), (0, Some(0)));
        let tp = s.tail_and_power(2, 2).unwrap();
        assert_eq!((tp.tail, tp.power), (0, Some(1)));
        let tp = s.tail_and_power(3, 2).unwrap();
        assert_eq!(tp.tail, 1);
        assert_eq!(tp.power, None);
        assert_eq!(tp.witness, vec![3]);
        assert!(s.tail_and_power(3, 1).is_err());
    }

    #[test]
    fn witness_reconstructs_element_q8() {
        let q = Arc::new(quaternion8());
        let s = set(&q, &[2, 3, 4, 5]);
        for g in q.elements() {
            for &label in s.members() {
                let tp = s.tail_and_power(g, label).unwrap();
                let w = q.product(tp.witness.iter().copied());
                assert_eq!(q.mul(w, q.pow(label, tp.exponent as i64)), g);
                assert_eq!(tp.witness.len(), tp.tail);
            }
        }
    }
}
