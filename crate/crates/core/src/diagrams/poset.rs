use std::fmt;

use crate::error::{Error, Result};

/// A finite poset with named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl IndexPoset {
    /// Builds the reflexive-transitive closure of `relations` (pairs `p ≤ q`)
    /// and rejects cycles.
    pub fn new(names: &[&str], relations: &[(&str, &str)]) -> Result<Self> {
        let n = names.len();
        let mut poset = IndexPoset {
            names: names.iter().map(|s| s.to_string()).collect(),
            leq: vec![vec![false; n]; n],
        };
        for (i, row) in poset.leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (p, q) in relations {
            let (i, j) = (poset.index(p)?, poset.index(q)?);
            poset.leq[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if poset.leq[i][k] {
                    for j in 0..n {
                        if poset.leq[k][j] {
                            poset.leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if poset.leq[i][j] && poset.leq[j][i] {
                    return Err(Error::validation(format!(
                        "`{}` and `{}` lie below each other",
                        poset.names[i], poset.names[j]
                    )));
                }
            }
        }
        Ok(poset)
    }

    /// Subsets of `{1,2,3}` under inclusion, written `∅, 1, 2, 3, 12, 13, 23, 123`.
    pub fn cube3() -> Self {
        let names = ["∅", "1", "2", "3", "12", "13", "23", "123"];
        let mut rel = Vec::new();
        for p in names {
            for q in names {
                let subset = p == "∅" || p.chars().all(|c| q.contains(c));
                if p != q && subset {
                    rel.push((p, q));
                }
            }
        }
        IndexPoset::new(&names, &rel).expect("inclusion is an order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::validation(format!("`{name}` is not in the poset")))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    /// `i ⋖ j`: `i < j` with nothing strictly between.
    pub fn covers(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) && !(0..self.len()).any(|k| self.lt(i, k) && self.lt(k, j))
    }

    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.covers(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Upper bounds of a set of elements.
    pub fn upper_bounds(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&u| set.iter().all(|&s| self.leq(s, u)))
            .collect()
    }

    /// Minimal elements of a set.
    pub fn minimal(&self, set: &[usize]) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&m| !set.iter().any(|&o| self.lt(o, m)))
            .collect()
    }
}

impl fmt::Display for IndexPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .cover_pairs()
            .iter()
            .map(|&(i, j)| format!("{}<{}", self.names[i], self.names[j]))
            .collect();
        write!(f, "{{{}}}", covers.join(", "))
    }
}
