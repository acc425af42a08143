//! Permutations in one-line form with cycle-notation I/O.
//!
//! Cycle notation uses points `1..=degree`, e.g. `(1 2 3)(4 5)`; the identity
//! is written `()`. Products act left to right: `a * b` applies `a` first.

use super::GroupError;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// From 0-based images; fails unless `images` is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(GroupError::Parse(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images.get(point).copied().unwrap_or(point)
    }

    /// Left-to-right product: apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        let degree = self.degree().max(other.degree());
        Permutation {
            images: (0..degree).map(|p| other.apply(self.apply(p))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (p, &q) in self.images.iter().enumerate() {
            images[q] = p;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &q)| p == q)
    }

    pub fn with_degree(mut self, degree: usize) -> Permutation {
        while self.images.len() < degree {
            self.images.push(self.images.len());
        }
        self
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation with 1-based points. `degree` pads the result;
    /// points beyond it extend the degree.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, GroupError> {
        let text = text.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| GroupError::Parse(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| GroupError::Parse(format!("unclosed cycle in {text:?}")))?;
            let body = &open[..close];
            let points: Result<Vec<usize>, _> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect();
            let points =
                points.map_err(|_| GroupError::Parse(format!("bad point in cycle ({body})")))?;
            if points.contains(&0) {
                return Err(GroupError::Parse("cycle points are 1-based".into()));
            }
            cycles.push(points.into_iter().map(|p| p - 1).collect());
            rest = open[close + 1..].trim_start();
        }
        let max_point = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(0);
        let mut images: Vec<usize> = (0..degree.max(max_point)).collect();
        let mut touched = vec![false; images.len()];
        for cycle in &cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if touched[p] {
                    return Err(GroupError::Parse(format!(
                        "point {} repeated in {text:?}",
                        p + 1
                    )));
                }
                touched[p] = true;
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let pts: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses the permutation-generator format: one permutation per line in
/// cycle notation; blank lines and `#` comments are ignored.
pub fn parse_generators(text: &str) -> Result<Vec<Permutation>, GroupError> {
    let perms: Vec<Permutation> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Permutation::parse_cycles(l, 0))
        .collect::<Result<_, _>>()?;
    let degree = perms.iter().map(Permutation::degree).max().unwrap_or(0);
    Ok(perms.into_iter().map(|p| p.with_degree(degree)).collect())
}

pub fn format_generators(perms: &[Permutation]) -> String {
    perms.iter().map(|p| format!("{p}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip() {
        let p = Permutation::parse_cycles("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(
            Permutation::parse_cycles("()", 3).unwrap().to_string(),
            "()"
        );
    }

    #[test]
    fn left_to_right_product() {
        let a = Permutation::parse_cycles("(1 2)", 3).unwrap();
        let b = Permutation::parse_cycles("(2 3)", 3).unwrap();
        // 1 -a-> 2 -b-> 3, 3 -> 3 -> 2, 2 -> 1 -> 1
        assert_eq!(a.then(&b).to_string(), "(1 3 2)");
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_bad_cycles() {
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
        assert!(Permutation::parse_cycles("(0 1)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn generator_file_round_trip() {
        let text = "# A4\n(1 2 3)\n(1 2)(3 4)\n";
        let gens = parse_generators(text).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].degree(), 4);
        let again = parse_generators(&format_generators(&gens)).unwrap();
        assert_eq!(again, gens);
    }
}
