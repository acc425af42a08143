use super::perm::Permutation;
use super::{Elem, Group, GroupError};
use std::collections::VecDeque;
use std::sync::Arc;

/// A verified automorphism of a group together with its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    group: Arc<Group>,
    map: Vec<Elem>,
    inverse: Vec<Elem>,
    order: usize,
}

impl Automorphism {
    pub fn new(group: Arc<Group>, map: Vec<Elem>) -> Result<Self, GroupError> {
        let n = group.order();
        if map.len() != n {
            return Err(GroupError::NotAutomorphism(format!(
                "map has {} entries for a group of order {n}",
                map.len()
            )));
        }
        let mut inverse = vec![usize::MAX; n];
        for (x, &y) in map.iter().enumerate() {
            if y >= n || inverse[y] != usize::MAX {
                return Err(GroupError::NotAutomorphism(format!(
                    "not a bijection at {x}"
                )));
            }
            inverse[y] = x;
        }
        for a in 0..n {
            for b in 0..n {
                if map[group.mul(a, b)] != group.mul(map[a], map[b]) {
                    return Err(GroupError::NotAutomorphism(format!(
                        "σ({a}·{b}) ≠ σ({a})·σ({b})"
                    )));
                }
            }
        }
        let order = permutation_order(&map);
        Ok(Automorphism {
            group,
            map,
            inverse,
            order,
        })
    }

    pub fn identity(group: Arc<Group>) -> Self {
        let map: Vec<Elem> = group.elements().collect();
        Automorphism {
            inverse: map.clone(),
            map,
            group,
            order: 1,
        }
    }

    /// `g ↦ g^{-1}`, an automorphism exactly when the group is abelian.
    pub fn inversion(group: Arc<Group>) -> Result<Self, GroupError> {
        let map = group.elements().map(|g| group.inv(g)).collect();
        Automorphism::new(group, map)
    }

    /// Parses either one-line images (`0 4 3 2 1`) or cycle notation over
    /// 1-based element positions (`(2 5)(3 4)` swaps elements 1,4 and 2,3).
    pub fn parse(group: Arc<Group>, text: &str) -> Result<Self, GroupError> {
        let text = text.trim();
        let map = if text.starts_with('(') {
            Permutation::parse_cycles(text, group.order())?
                .images()
                .to_vec()
        } else {
            text.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| GroupError::Parse(format!("bad image {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Automorphism::new(group, map)
    }

    pub fn to_images_text(&self) -> String {
        let parts: Vec<String> = self.map.iter().map(ToString::to_string).collect();
        parts.join(" ")
    }

    #[inline]
    pub fn apply(&self, g: Elem) -> Elem {
        self.map[g]
    }

    #[inline]
    pub fn apply_inverse(&self, g: Elem) -> Elem {
        self.inverse[g]
    }

    pub fn images(&self) -> &[Elem] {
        &self.map
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    /// Every automorphism of `group`, optionally only those whose order
    /// divides `max_order`'s range `1..=max_order`. Sorted by image list.
    ///
    /// Images of a small generating set are chosen by backtracking with
    /// matching element orders; each candidate is extended along a BFS tree
    /// and accepted only if the extension is a bijective homomorphism.
    pub fn enumerate(group: &Arc<Group>, max_order: Option<usize>) -> Vec<Automorphism> {
        let gens = small_generating_set(group);
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        search(group, &gens, &mut images, &mut out);
        let mut autos: Vec<Automorphism> = out
            .into_iter()
            .filter_map(|map| Automorphism::new(group.clone(), map).ok())
            .filter(|a| max_order.is_none_or(|m| a.order <= m))
            .collect();
        autos.sort_by(|a, b| a.map.cmp(&b.map));
        autos.dedup_by(|a, b| a.map == b.map);
        autos
    }
}

fn permutation_order(map: &[Elem]) -> usize {
    let mut seen = vec![false; map.len()];
    let mut order = 1usize;
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            p = map[p];
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Greedy generating set: repeatedly adds the highest-order element outside
/// the subgroup generated so far.
fn small_generating_set(group: &Group) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut inside = closure(group, &gens);
    while inside.iter().any(|&b| !b) {
        let next = group
            .elements()
            .filter(|&g| !inside[g])
            .max_by_key(|&g| (group.element_order(g), std::cmp::Reverse(g)))
            .unwrap();
        gens.push(next);
        inside = closure(group, &gens);
    }
    gens
}

fn closure(group: &Group, gens: &[Elem]) -> Vec<bool> {
    let mut inside = vec![false; group.order()];
    inside[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = group.mul(x, g);
            if !inside[y] {
                inside[y] = true;
                queue.push_back(y);
            }
        }
    }
    inside
}

fn search(group: &Group, gens: &[Elem], images: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
    if images.len() == gens.len() {
        if let Some(map) = extend(group, gens, images) {
            out.push(map);
        }
        return;
    }
    let target_order = group.element_order(gens[images.len()]);
    for candidate in group.elements() {
        if group.element_order(candidate) == target_order {
            images.push(candidate);
            search(group, gens, images, out);
            images.pop();
        }
    }
}

fn extend(group: &Group, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    let n = group.order();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = group.mul(x, g);
            let fy = group.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    let mut hit = vec![false; n];
    for &v in &map {
        if hit[v] {
            return None;
        }
        hit[v] = true;
    }
    Some(map)
}
