//! Built-in group families and their canonical element orders.
//!
//! | spec | order | enumeration |
//! |------|-------|-------------|
//! | `cyclic(n)` | n | residues `0..n` |
//! | `dihedral(n)` | 2n | `r^i s^j` at index `i + n*j`, with `s r = r^{-1} s` |
//! | `symmetric(k)` / `alternating(k)` | k!, k!/2 | one-line images in lexicographic order |
//! | `quaternion8` | 8 | `1, -1, i, -i, j, -j, k, -k` |
//! | `product(A, B, ..)` | ∏ | lexicographic tuples, last factor fastest |
//! | `perms(p; q; ..)` | closure | BFS from identity by right multiplication, generators in order |
//! | `table(path)`, `perms-file(path)` | file | as stored |
//!
//! Permutation products act left to right (`ab` applies `a` first).

use super::perm::{parse_generators, Permutation};
use super::{Group, GroupError, DEFAULT_ORDER_CAP};
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    Product(Vec<GroupSpec>),
    Perms(Vec<Permutation>),
    PermsFile(PathBuf),
    Table(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::Symmetric(k) => write!(f, "symmetric({k})"),
            GroupSpec::Alternating(k) => write!(f, "alternating({k})"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::Product(parts) => {
                let inner: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "product({})", inner.join(", "))
            }
            GroupSpec::Perms(gens) => {
                let inner: Vec<String> = gens.iter().map(ToString::to_string).collect();
                write!(f, "perms({})", inner.join("; "))
            }
            GroupSpec::PermsFile(p) => write!(f, "perms-file({})", p.display()),
            GroupSpec::Table(p) => write!(f, "table({})", p.display()),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "quaternion8" || s == "q8" {
            return Ok(GroupSpec::Quaternion8);
        }
        let open = s
            .find('(')
            .ok_or_else(|| GroupError::Parse(format!("unknown group spec {s:?}")))?;
        let body = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| GroupError::Parse(format!("unbalanced parentheses in {s:?}")))?;
        let head = s[..open].trim();
        let int = || {
            body.trim()
                .parse::<usize>()
                .map_err(|_| GroupError::Parse(format!("expected integer argument in {s:?}")))
        };
        match head {
            "cyclic" => Ok(GroupSpec::Cyclic(int()?)),
            "dihedral" => Ok(GroupSpec::Dihedral(int()?)),
            "symmetric" => Ok(GroupSpec::Symmetric(int()?)),
            "alternating" => Ok(GroupSpec::Alternating(int()?)),
            "product" => split_top_level(body, ',')
                .into_iter()
                .map(str::parse)
                .collect::<Result<Vec<_>, _>>()
                .map(GroupSpec::Product),
            "perms" => body
                .split(';')
                .map(|p| Permutation::parse_cycles(p, 0))
                .collect::<Result<Vec<_>, _>>()
                .map(GroupSpec::Perms),
            "perms-file" => Ok(GroupSpec::PermsFile(PathBuf::from(body.trim()))),
            "table" => Ok(GroupSpec::Table(PathBuf::from(body.trim()))),
            other => Err(GroupError::Parse(format!("unknown group family {other:?}"))),
        }
    }
}

fn split_top_level(body: &str, sep: char) -> Vec<&str> {
    let mut depth = 0usize;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                out.push(body[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(body[start..].trim());
    out
}

impl GroupSpec {
    /// Builds with the default order cap; file paths resolve against the
    /// working directory.
    pub fn build(&self) -> Result<Group, GroupError> {
        self.build_with(Path::new("."), DEFAULT_ORDER_CAP)
    }

    pub fn build_with(&self, base_dir: &Path, cap: usize) -> Result<Group, GroupError> {
        let group = match self {
            GroupSpec::Cyclic(n) => {
                check_cap(*n, cap)?;
                cyclic(*n)?
            }
            GroupSpec::Dihedral(n) => {
                check_cap(2 * n, cap)?;
                dihedral(*n)?
            }
            GroupSpec::Symmetric(k) => {
                check_cap(factorial(*k), cap)?;
                permutation_family(*k, false)?
            }
            GroupSpec::Alternating(k) => {
                check_cap(factorial(*k) / 2, cap)?;
                permutation_family(*k, true)?
            }
            GroupSpec::Quaternion8 => quaternion8(),
            GroupSpec::Product(parts) => {
                let groups = parts
                    .iter()
                    .map(|p| p.build_with(base_dir, cap))
                    .collect::<Result<Vec<_>, _>>()?;
                check_cap(groups.iter().map(Group::order).product(), cap)?;
                direct_product(&groups)?
            }
            GroupSpec::Perms(gens) => from_permutations(gens, cap)?,
            GroupSpec::PermsFile(path) => {
                let text = read(base_dir, path)?;
                from_permutations(&parse_generators(&text)?, cap)?
            }
            GroupSpec::Table(path) => {
                let group = Group::from_table_text(&read(base_dir, path)?)?;
                check_cap(group.order(), cap)?;
                group
            }
        };
        Ok(Group {
            description: self.to_string(),
            ..group
        })
    }
}

fn read(base_dir: &Path, path: &Path) -> Result<String, GroupError> {
    let full = base_dir.join(path);
    std::fs::read_to_string(&full)
        .map_err(|e| GroupError::Parse(format!("cannot read {}: {e}", full.display())))
}

fn check_cap(order: usize, cap: usize) -> Result<(), GroupError> {
    if order > cap {
        Err(GroupError::TooLarge { order, cap })
    } else {
        Ok(())
    }
}

fn factorial(k: usize) -> usize {
    (1..=k)
        .try_fold(1usize, |acc, i| acc.checked_mul(i))
        .unwrap_or(usize::MAX)
}

pub fn cyclic(n: usize) -> Result<Group, GroupError> {
    let table = (0..n * n)
        .map(|i| (i / n.max(1) + i % n.max(1)) % n.max(1))
        .collect();
    Group::from_table(n, table, None, format!("cyclic({n})"))
}

pub fn dihedral(n: usize) -> Result<Group, GroupError> {
    if n == 0 {
        return Err(GroupError::Empty);
    }
    let order = 2 * n;
    let split = |g: usize| (g % n, g / n);
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            let (ra, sa) = split(a);
            let (rb, sb) = split(b);
            let rot = if sa == 0 { ra + rb } else { ra + n - rb };
            table.push(rot % n + n * ((sa + sb) % 2));
        }
    }
    let names = (0..order)
        .map(|g| {
            let (r, s) = split(g);
            let rot = match r {
                0 => String::new(),
                1 => "r".to_string(),
                r => format!("r^{r}"),
            };
            match (rot.is_empty(), s) {
                (true, 0) => "e".to_string(),
                (false, 0) => rot,
                (true, _) => "s".to_string(),
                (false, _) => format!("{rot}s"),
            }
        })
        .collect();
    Group::from_table(order, table, Some(names), format!("dihedral({n})"))
}

fn permutation_family(k: usize, even_only: bool) -> Result<Group, GroupError> {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        let perm = Permutation::from_images(current.clone())?;
        let parity = perm.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2;
        if !even_only || parity == 0 {
            perms.push(perm);
        }
        if !next_permutation(&mut current) {
            break;
        }
    }
    table_from_perms(perms, format!("perm-family({k})"))
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn table_from_perms(perms: Vec<Permutation>, description: String) -> Result<Group, GroupError> {
    let index: HashMap<&Permutation, usize> =
        perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = perms.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &perms {
        for b in &perms {
            let prod = a.then(b);
            let idx = *index
                .get(&prod)
                .ok_or_else(|| GroupError::Parse("permutation set not closed".into()))?;
            table.push(idx);
        }
    }
    let names = perms.iter().map(ToString::to_string).collect();
    Group::from_table(n, table, Some(names), description)
}

/// Closure of the generators under right multiplication, discovered by BFS.
pub fn from_permutations(gens: &[Permutation], cap: usize) -> Result<Group, GroupError> {
    let degree = gens.iter().map(Permutation::degree).max().unwrap_or(0);
    let gens: Vec<Permutation> = gens.iter().map(|g| g.clone().with_degree(degree)).collect();
    let identity = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, usize> = HashMap::new();
    let mut order = vec![identity.clone()];
    seen.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next = order[i].then(g);
            if !seen.contains_key(&next) {
                if order.len() >= cap {
                    return Err(GroupError::TooLarge {
                        order: order.len() + 1,
                        cap,
                    });
                }
                seen.insert(next.clone(), order.len());
                queue.push_back(order.len());
                order.push(next);
            }
        }
    }
    table_from_perms(order, "perms".into())
}

pub fn quaternion8() -> Group {
    // index = 2*unit + sign, unit ∈ {1, i, j, k}, sign 1 means negative.
    // unit products: (unit_a, unit_b) -> (sign, unit)
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut table = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            let (sign, unit) = UNIT[a / 2][b / 2];
            table.push(2 * unit + (sign + a % 2 + b % 2) % 2);
        }
    }
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Group::from_table(8, table, Some(names), "quaternion8").expect("Q8 table is a group")
}

pub fn direct_product(groups: &[Group]) -> Result<Group, GroupError> {
    let order: usize = groups.iter().map(Group::order).product();
    let decompose = |mut g: usize| {
        let mut coords = vec![0; groups.len()];
        for (i, h) in groups.iter().enumerate().rev() {
            coords[i] = g % h.order();
            g /= h.order();
        }
        coords
    };
    let compose = |coords: &[usize]| {
        coords
            .iter()
            .zip(groups)
            .fold(0, |acc, (&c, h)| acc * h.order() + c)
    };
    let coords: Vec<Vec<usize>> = (0..order).map(decompose).collect();
    let mut table = Vec::with_capacity(order * order);
    for a in &coords {
        for b in &coords {
            let prod: Vec<usize> = groups
                .iter()
                .enumerate()
                .map(|(i, h)| h.mul(a[i], b[i]))
                .collect();
            table.push(compose(&prod));
        }
    }
    let names = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().zip(groups).map(|(&x, h)| h.name(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Group::from_table(order, table, Some(names), "product")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> Group {
        s.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    #[test]
    fn cyclic_two() {
        let g = build("cyclic(2)");
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn cyclic_five_orders() {
        let g = build("cyclic(5)");
        assert_eq!(g.order(), 5);
        assert!(g.elements().skip(1).all(|x| g.element_order(x) == 5));
    }

    #[test]
    fn symmetric_three_is_non_abelian() {
        let g = build("symmetric(3)");
        assert_eq!(g.order(), 6);
        // exhaustive commutativity scan
        let witness = g
            .elements()
            .flat_map(|a| g.elements().map(move |b| (a, b)))
            .find(|&(a, b)| g.mul(a, b) != g.mul(b, a));
        assert!(witness.is_some());
        assert_eq!(g.name(0), "()");
    }

    #[test]
    fn dihedral_relations() {
        let g = build("dihedral(5)");
        assert_eq!(g.order(), 10);
        let (r, s) = (1, 5);
        assert_eq!(g.element_order(r), 5);
        assert_eq!(g.element_order(s), 2);
        assert_eq!(g.mul(s, r), g.mul(g.inv(r), s));
        assert_eq!(g.name(6), "rs");
    }

    #[test]
    fn quaternion_relations() {
        let g = quaternion8();
        let (minus_one, i, j, k) = (1, 2, 4, 6);
        assert_eq!(g.mul(i, i), minus_one);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), g.mul(minus_one, k));
        assert!(!g.is_abelian());
        assert_eq!((1..8).filter(|&x| g.element_order(x) == 2).count(), 1);
    }

    #[test]
    fn product_and_alternating() {
        assert_eq!(build("product(cyclic(2), cyclic(3))").order(), 6);
        assert!(build("product(cyclic(2), cyclic(3))").is_abelian());
        let a4 = build("alternating(4)");
        assert_eq!(a4.order(), 12);
        let a4p = build("perms((1 2 3); (1 2)(3 4))");
        assert_eq!(a4p.order(), 12);
    }

    #[test]
    fn spec_display_round_trip() {
        for s in [
            "cyclic(7)",
            "dihedral(4)",
            "quaternion8",
            "product(cyclic(2), dihedral(3))",
            "perms((1 2 3); (1 2))",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn order_cap_enforced() {
        let err = "symmetric(8)"
            .parse::<GroupSpec>()
            .unwrap()
            .build()
            .unwrap_err();
        assert!(matches!(err, GroupError::TooLarge { .. }));
        let gens = vec![
            Permutation::parse_cycles("(1 2 3 4 5 6 7)", 7).unwrap(),
            Permutation::parse_cycles("(1 2)", 7).unwrap(),
        ];
        assert!(matches!(
            from_permutations(&gens, 100),
            Err(GroupError::TooLarge { cap: 100, .. })
        ));
    }

    #[test]
    fn parse_errors() {
        assert!("cyclic(x)".parse::<GroupSpec>().is_err());
        assert!("klein".parse::<GroupSpec>().is_err());
        assert!("cyclic(3".parse::<GroupSpec>().is_err());
    }
}
