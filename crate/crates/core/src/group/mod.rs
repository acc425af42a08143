//! Finite groups stored as full multiplication tables over element indices.
//!
//! Every group has the identity at index 0. Elements are plain `usize`
//! indices into the tables; the family constructors in [`families`] fix a
//! documented enumeration order so that every derived artifact (graphs,
//! witness words, traces) is reproducible byte for byte.

mod automorphism;
pub mod families;
mod genset;
pub mod perm;

pub use automorphism::Automorphism;
pub use families::GroupSpec;
pub use genset::{GenSet, TailPower, TailTable};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

/// Index of a group element.
pub type Elem = usize;

/// Groups up to this order get a full O(n³) associativity scan.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
/// Triples sampled for associativity above [`FULL_ASSOCIATIVITY_LIMIT`].
pub const ASSOCIATIVITY_SAMPLES: usize = 100_000;
/// Default cap on the order of groups built from permutation generators.
pub const DEFAULT_ORDER_CAP: usize = 5040;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("empty group table")]
    Empty,
    #[error("table has {found} entries, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("table entry {value} out of range for order {order}")]
    OutOfRange { value: usize, order: usize },
    #[error("element 0 is not a two-sided identity (fails at element {0})")]
    Identity(Elem),
    #[error("row {0} is not a permutation of the elements")]
    RowNotLatin(Elem),
    #[error("column {0} is not a permutation of the elements")]
    ColumnNotLatin(Elem),
    #[error("associativity fails for ({a}, {b}, {c}): (ab)c = {left}, a(bc) = {right}")]
    NotAssociative {
        a: Elem,
        b: Elem,
        c: Elem,
        left: Elem,
        right: Elem,
    },
    #[error("group order {order} exceeds cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("element {0} does not exist in a group of order {1}")]
    NoSuchElement(Elem, usize),
    #[error("S does not generate G; unreachable elements: {0:?}")]
    NotGenerating(Vec<Elem>),
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A validated finite group.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    names: Vec<String>,
    description: String,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("description", &self.description)
            .field("order", &self.order)
            .finish()
    }
}

impl Group {
    /// Builds a group from a row-major multiplication table, checking every
    /// group axiom. Associativity is scanned in full up to
    /// [`FULL_ASSOCIATIVITY_LIMIT`] and sampled with a fixed seed above it.
    pub fn from_table(
        order: usize,
        table: Vec<usize>,
        names: Option<Vec<String>>,
        description: impl Into<String>,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if table.len() != order * order {
            return Err(GroupError::Shape {
                expected: order * order,
                found: table.len(),
            });
        }
        if let Some(&value) = table.iter().find(|&&v| v >= order) {
            return Err(GroupError::OutOfRange { value, order });
        }
        let at = |a: usize, b: usize| table[a * order + b];
        for g in 0..order {
            if at(0, g) != g || at(g, 0) != g {
                return Err(GroupError::Identity(g));
            }
        }
        let mut seen = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                let v = at(a, b);
                if seen[v] == a {
                    return Err(GroupError::RowNotLatin(a));
                }
                seen[v] = a;
            }
        }
        seen.fill(usize::MAX);
        for b in 0..order {
            for a in 0..order {
                let v = at(a, b);
                if seen[v] == b {
                    return Err(GroupError::ColumnNotLatin(b));
                }
                seen[v] = b;
            }
        }
        let check = |a: usize, b: usize, c: usize| {
            let left = at(at(a, b), c);
            let right = at(a, at(b, c));
            if left == right {
                Ok(())
            } else {
                Err(GroupError::NotAssociative {
                    a,
                    b,
                    c,
                    left,
                    right,
                })
            }
        };
        if order <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                check(
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                )?;
            }
        }
        // Latin rows guarantee a unique right inverse; in a group it is two-sided.
        let inverse: Vec<u32> = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(a, b) == 0)
                    .expect("latin row hits 0") as u32
            })
            .collect();
        let names = names.unwrap_or_else(|| (0..order).map(|g| g.to_string()).collect());
        if names.len() != order {
            return Err(GroupError::Shape {
                expected: order,
                found: names.len(),
            });
        }
        Ok(Group {
            order,
            table: table.into_iter().map(|v| v as u32).collect(),
            inverse,
            names,
            description: description.into(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a] as Elem
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(0, |acc, g| self.mul(acc, g))
    }

    /// `g^k` for any integer `k`.
    pub fn pow(&self, g: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(g) } else { g };
        let mut e = k.unsigned_abs() % self.element_order(g) as u64;
        let mut acc = 0;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// `g s g^{-1}`.
    #[inline]
    pub fn conjugate(&self, g: Elem, s: Elem) -> Elem {
        self.mul(self.mul(g, s), self.inv(g))
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// The cyclic subgroup generated by `g`, as `g^0, g^1, …`.
    pub fn cyclic_subgroup(&self, g: Elem) -> Vec<Elem> {
        let mut out = vec![0];
        let mut x = g;
        while x != 0 {
            out.push(x);
            x = self.mul(x, g);
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy class of `g`, sorted.
    pub fn conjugacy_class(&self, g: Elem) -> Vec<Elem> {
        let mut class: Vec<Elem> = self.elements().map(|h| self.conjugate(h, g)).collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    pub fn name(&self, g: Elem) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn check_element(&self, g: Elem) -> Result<Elem, GroupError> {
        if g < self.order {
            Ok(g)
        } else {
            Err(GroupError::NoSuchElement(g, self.order))
        }
    }

    /// Re-verifies associativity by full triple scan regardless of order.
    pub fn is_associative_exhaustive(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Cayley-table text: `n` on the first line, then `n` rows of `n` indices.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|b| self.mul(a, b).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the Cayley-table text format written by [`Group::to_table_text`].
    pub fn from_table_text(text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| GroupError::Parse("missing order line".into()))?;
        let order: usize = header
            .parse()
            .map_err(|_| GroupError::Parse(format!("bad order line {header:?}")))?;
        let mut table = Vec::with_capacity(order * order);
        for (row, line) in lines.enumerate() {
            let values: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            let values =
                values.map_err(|_| GroupError::Parse(format!("row {row}: non-integer entry")))?;
            if values.len() != order {
                return Err(GroupError::Parse(format!(
                    "row {row} has {} entries, expected {order}",
                    values.len()
                )));
            }
            table.extend(values);
        }
        Group::from_table(order, table, None, format!("table({order})"))
    }
}
