//! Finite distributive lattices as downsets of a poset of join-irreducibles,
//! with minimal differences, complete normality and Cevian operations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Downsets of `names` ordered by inclusion. Masks are over the
/// join-irreducibles; elements are indexed in order of size, so index order
/// is a linear extension and index 0 is the bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDistLattice {
    names: Vec<String>,
    /// `down[j]`: the join-irreducibles below or equal to `j`.
    down: Vec<u64>,
    elems: Vec<u64>,
    index: HashMap<u64, usize>,
}

const MAX_ELEMENTS: usize = 1 << 16;

impl FinDistLattice {
    /// `relations` are pairs `p < q` of join-irreducibles; the order is their
    /// transitive closure.
    pub fn from_poset(names: &[&str], relations: &[(&str, &str)]) -> Result<Self> {
        let n = names.len();
        if n > 63 {
            return Err(Error::validation("at most 63 join-irreducibles are supported"));
        }
        let pos = |s: &str| {
            names
                .iter()
                .position(|m| *m == s)
                .ok_or_else(|| Error::validation(format!("`{s}` is not a listed element")))
        };
        let mut down: Vec<u64> = (0..n).map(|j| 1u64 << j).collect();
        for (p, q) in relations {
            let (i, j) = (pos(p)?, pos(q)?);
            down[j] |= 1 << i;
        }
        for _ in 0..n {
            let snapshot = down.clone();
            for j in 0..n {
                for (i, d) in snapshot.iter().enumerate() {
                    if down[j] >> i & 1 == 1 {
                        down[j] |= d;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && down[j] >> i & 1 == 1 && down[i] >> j & 1 == 1 {
                    return Err(Error::validation(format!(
                        "`{}` and `{}` lie below each other",
                        names[i], names[j]
                    )));
                }
            }
        }
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        Self::from_down_sets(names, down)
    }

    fn from_down_sets(names: Vec<String>, down: Vec<u64>) -> Result<Self> {
        let n = names.len();
        // process in a linear extension so predecessors are decided first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| down[j].count_ones());
        let mut elems = Vec::new();
        fn walk(k: usize, mask: u64, order: &[usize], down: &[u64], out: &mut Vec<u64>) -> Result<()> {
            if out.len() > MAX_ELEMENTS {
                return Err(Error::validation(format!("more than {MAX_ELEMENTS} elements")));
            }
            if k == order.len() {
                out.push(mask);
                return Ok(());
            }
            let j = order[k];
            walk(k + 1, mask, order, down, out)?;
            let below = down[j] & !(1u64 << j);
            if mask & below == below {
                walk(k + 1, mask | 1 << j, order, down, out)?;
            }
            Ok(())
        }
        walk(0, 0, &order, &down, &mut elems)?;
        elems.sort_by_key(|m| (m.count_ones(), *m));
        let index = elems.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        Ok(FinDistLattice {
            names,
            down,
            elems,
            index,
        })
    }

    /// The chain `0 < 1 < … < n`.
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|k| format!("c{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let rel: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
        Self::from_poset(&refs, &rel).expect("a chain is an order")
    }

    /// The Boolean lattice with `n` atoms.
    pub fn boolean(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|k| format!("e{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::from_poset(&refs, &[]).expect("an antichain is an order")
    }

    /// A square `p < x, y < x∨y` with a new bottom under `p`.
    pub fn square_with_new_zero() -> Self {
        Self::from_poset(&["p", "x", "y"], &[("p", "x"), ("p", "y")]).expect("valid order")
    }

    /// Reads a cover list:
    /// ```text
    /// elements = p x y
    /// covers = p < x, p < y
    /// ```
    pub fn parse(src: &str) -> Result<Self> {
        let mut elements: Option<Vec<String>> = None;
        let mut covers: Vec<(String, String)> = Vec::new();
        for (lineno, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno + 1, format!("expected `key = value`, got `{line}`")))?;
            match key.trim() {
                "kind" if value.trim() == "lattice" => {}
                "elements" => {
                    elements = Some(
                        value
                            .split(|c: char| c.is_whitespace() || c == ',')
                            .filter(|s| !s.is_empty())
                            .map(str::to_string)
                            .collect(),
                    )
                }
                "covers" => {
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (p, q) = item
                            .split_once('<')
                            .ok_or_else(|| Error::parse(lineno + 1, format!("expected `p < q`, got `{item}`")))?;
                        covers.push((p.trim().to_string(), q.trim().to_string()));
                    }
                }
                other => return Err(Error::parse(lineno + 1, format!("unknown key `{other}`"))),
            }
        }
        let elements = elements.ok_or_else(|| Error::parse(0, "missing `elements`"))?;
        let names: Vec<&str> = elements.iter().map(String::as_str).collect();
        let rel: Vec<(&str, &str)> = covers.iter().map(|(p, q)| (p.as_str(), q.as_str())).collect();
        Self::from_poset(&names, &rel)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn ji_names(&self) -> &[String] {
        &self.names
    }

    /// `i ≤ j` among join-irreducibles.
    pub fn ji_leq(&self, i: usize, j: usize) -> bool {
        self.down[j] >> i & 1 == 1
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn mask(&self, x: usize) -> u64 {
        self.elems[x]
    }

    pub fn from_mask(&self, m: u64) -> Option<usize> {
        self.index.get(&m).copied()
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.index[&(self.elems[x] | self.elems[y])]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.index[&(self.elems[x] & self.elems[y])]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.elems[x] & !self.elems[y] == 0
    }

    /// The principal downset of join-irreducible `j`.
    pub fn ji_element(&self, j: usize) -> usize {
        self.index[&self.down[j]]
    }

    fn close_down(&self, m: u64) -> u64 {
        let mut out = 0;
        for j in 0..self.names.len() {
            if m >> j & 1 == 1 {
                out |= self.down[j];
            }
        }
        out
    }

    /// The least `x` with `a ≤ b ∨ x`: the downset generated by `a ∖ b`.
    pub fn min_diff(&self, a: usize, b: usize) -> usize {
        self.index[&self.close_down(self.elems[a] & !self.elems[b])]
    }

    /// A pair whose minimal differences meet above zero, if any.
    pub fn normality_counterexample(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                if self.meet(self.min_diff(a, b), self.min_diff(b, a)) != 0 {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn completely_normal(&self) -> bool {
        self.normality_counterexample().is_none()
    }

    /// Join-irreducible elements found from the order alone: nonzero elements
    /// with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&x| {
                let below: Vec<usize> = (0..self.len()).filter(|&y| y != x && self.leq(y, x)).collect();
                let covers = below
                    .iter()
                    .filter(|&&y| !below.iter().any(|&z| z != y && self.leq(y, z)))
                    .count();
                covers == 1
            })
            .collect()
    }

    /// Element written as the join of its maximal join-irreducibles.
    pub fn element_name(&self, x: usize) -> String {
        let m = self.elems[x];
        if m == 0 {
            return "0".into();
        }
        let tops: Vec<&str> = (0..self.names.len())
            .filter(|&j| m >> j & 1 == 1)
            .filter(|&j| !(0..self.names.len()).any(|k| k != j && m >> k & 1 == 1 && self.ji_leq(j, k)))
            .map(|j| self.names[j].as_str())
            .collect();
        tops.join(" \\/ ")
    }

    pub fn element_by_name(&self, text: &str) -> Result<usize> {
        let text = text.trim();
        if text == "0" {
            return Ok(0);
        }
        let mut m = 0;
        for part in text.split("\\/").map(str::trim) {
            let j = self
                .names
                .iter()
                .position(|n| n == part)
                .ok_or_else(|| Error::validation(format!("`{part}` is not a join-irreducible")))?;
            m |= self.down[j];
        }
        Ok(self.index[&m])
    }

    /// Equal exactly for isomorphic lattices: the canonical form of the
    /// join-irreducible poset.
    pub fn iso_key(&self) -> Vec<u64> {
        let below: Vec<u64> = self.down.iter().enumerate().map(|(k, m)| m & !(1 << k)).collect();
        canonical(&below)
    }

    /// Builds a lattice from an arbitrary finite order, returning it with the
    /// map from input positions to element indices. The order must be a
    /// distributive lattice.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<(Self, Vec<usize>)> {
        if n == 0 {
            return Err(Error::validation("a lattice has at least one element"));
        }
        let leq = &leq;
        for x in 0..n {
            if !leq(x, x) {
                return Err(Error::validation("order is not reflexive"));
            }
            for y in 0..n {
                if x != y && leq(x, y) && leq(y, x) {
                    return Err(Error::validation("order is not antisymmetric"));
                }
                for z in 0..n {
                    if leq(x, y) && leq(y, z) && !leq(x, z) {
                        return Err(Error::validation("order is not transitive"));
                    }
                }
            }
        }
        let least = |set: &[usize]| set.iter().copied().find(|&u| set.iter().all(|&v| leq(u, v)));
        let greatest = |set: &[usize]| set.iter().copied().find(|&u| set.iter().all(|&v| leq(v, u)));
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let ub: Vec<usize> = (0..n).filter(|&u| leq(x, u) && leq(y, u)).collect();
                let lb: Vec<usize> = (0..n).filter(|&u| leq(u, x) && leq(u, y)).collect();
                join[x][y] = least(&ub).ok_or_else(|| Error::validation("some pair has no join"))?;
                meet[x][y] = greatest(&lb).ok_or_else(|| Error::validation("some pair has no meet"))?;
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]] {
                        return Err(Error::validation("the lattice is not distributive"));
                    }
                }
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let bottom = least(&all).expect("a lattice has a bottom");
        let ji: Vec<usize> = (0..n)
            .filter(|&x| x != bottom)
            .filter(|&x| {
                let below: Vec<usize> = (0..n).filter(|&y| y != x && leq(y, x)).collect();
                below
                    .iter()
                    .filter(|&&y| !below.iter().any(|&z| z != y && leq(y, z)))
                    .count()
                    == 1
            })
            .collect();
        let names: Vec<String> = ji.iter().map(|x| format!("j{x}")).collect();
        let rel: Vec<(String, String)> = ji
            .iter()
            .enumerate()
            .flat_map(|(a, &x)| {
                ji.iter()
                    .enumerate()
                    .filter(move |&(_, &y)| x != y && leq(x, y))
                    .map(move |(b, _)| (a, b))
            })
            .map(|(a, b)| (names[a].clone(), names[b].clone()))
            .collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let rel_refs: Vec<(&str, &str)> = rel.iter().map(|(p, q)| (p.as_str(), q.as_str())).collect();
        let lat = Self::from_poset(&name_refs, &rel_refs)?;
        let mut map = Vec::with_capacity(n);
        for x in 0..n {
            let m = ji
                .iter()
                .enumerate()
                .filter(|&(_, &j)| leq(j, x))
                .fold(0u64, |m, (a, _)| m | 1 << a);
            map.push(lat.from_mask(m).ok_or_else(|| Error::validation("not a distributive lattice"))?);
        }
        if lat.len() != n {
            return Err(Error::validation("not a distributive lattice"));
        }
        Ok((lat, map))
    }
}

impl fmt::Display for FinDistLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.names.len();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.ji_leq(i, j) && !(0..n).any(|k| k != i && k != j && self.ji_leq(i, k) && self.ji_leq(k, j)) {
                    covers.push(format!("{} < {}", self.names[i], self.names[j]));
                }
            }
        }
        write!(
            f,
            "{} join-irreducibles [{}], covers [{}], {} elements",
            n,
            self.names.join(" "),
            covers.join(", "),
            self.len()
        )
    }
}

/// A total binary operation on the elements of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CevianTable {
    n: usize,
    op: Vec<usize>,
}

impl CevianTable {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let op = (0..n * n).map(|k| f(k / n, k % n)).collect();
        CevianTable { n, op }
    }

    pub fn min_diff(d: &FinDistLattice) -> Self {
        Self::from_fn(d.len(), |x, y| d.min_diff(x, y))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.op[x * self.n + y]
    }

    /// `x ∖′ y = x ∧ (x ∖ y)`
    pub fn normalized(&self, d: &FinDistLattice) -> Self {
        Self::from_fn(self.n, |x, y| d.meet(x, self.get(x, y)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `x ≰ y ∨ (x∖y)`
    Cev1(usize, usize),
    /// `(x∖y) ∧ (y∖x) ≠ 0`
    Cev2(usize, usize),
    /// `x∖z ≰ (x∖y) ∨ (y∖z)`, reported as `(x, y, z)`
    Cev3(usize, usize, usize),
}

impl AxiomViolation {
    pub fn describe(&self, d: &FinDistLattice) -> String {
        let e = |x: &usize| d.element_name(*x);
        match self {
            AxiomViolation::Cev1(x, y) => format!("Cev1 fails at x = {}, y = {}", e(x), e(y)),
            AxiomViolation::Cev2(x, y) => format!("Cev2 fails at x = {}, y = {}", e(x), e(y)),
            AxiomViolation::Cev3(x, y, z) => {
                format!("Cev3 fails at x = {}, y = {}, z = {}", e(x), e(y), e(z))
            }
        }
    }
}

/// First violation of Cev1, Cev2, Cev3 in that order. Whenever Cev2 and Cev3
/// hold, `(x∖y) ∧ (y∖z) ≤ x∖z` must hold too; a failure of that consequence
/// is an internal inconsistency.
pub fn cevian_axiom_check(d: &FinDistLattice, t: &CevianTable) -> Result<Option<AxiomViolation>> {
    let n = d.len();
    if t.size() != n || t.op.iter().any(|&v| v >= n) {
        return Err(Error::validation(format!("table must be total on {n} elements")));
    }
    let mut cev1 = None;
    let mut cev2 = None;
    let mut cev3 = None;
    for x in 0..n {
        for y in 0..n {
            if cev1.is_none() && !d.leq(x, d.join(y, t.get(x, y))) {
                cev1 = Some(AxiomViolation::Cev1(x, y));
            }
            if cev2.is_none() && d.meet(t.get(x, y), t.get(y, x)) != 0 {
                cev2 = Some(AxiomViolation::Cev2(x, y));
            }
            if cev3.is_none() {
                for z in 0..n {
                    if !d.leq(t.get(x, z), d.join(t.get(x, y), t.get(y, z))) {
                        cev3 = Some(AxiomViolation::Cev3(x, y, z));
                        break;
                    }
                }
            }
        }
    }
    if cev2.is_none() && cev3.is_none() {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !d.leq(d.meet(t.get(x, y), t.get(y, z)), t.get(x, z)) {
                        return Err(Error::inconsistency(format!(
                            "Cev2 and Cev3 hold but (x\\y) /\\ (y\\z) <= x\\z fails at {}, {}, {}",
                            d.element_name(x),
                            d.element_name(y),
                            d.element_name(z)
                        )));
                    }
                }
            }
        }
    }
    Ok(cev1.or(cev2).or(cev3))
}

/// Backtracking search for a Cevian table. Domains start from Cev1, are made
/// arc consistent under Cev2, and Cev3 is checked as soon as a triple is
/// fully assigned. Values are tried minimal difference first, so a normal
/// lattice gets the minimal-difference table without backtracking.
pub fn cevian_search(d: &FinDistLattice) -> Option<CevianTable> {
    let n = d.len();
    let var = |x: usize, y: usize| x * n + y;
    let mut dom: Vec<Vec<usize>> = (0..n * n)
        .map(|k| {
            let (x, y) = (k / n, k % n);
            let md = d.min_diff(x, y);
            let mut vals: Vec<usize> = (0..n).filter(|&z| d.leq(x, d.join(y, z))).collect();
            vals.sort_by_key(|&z| (z != md, z));
            vals
        })
        .collect();

    // arc consistency for the binary constraint between (x,y) and (y,x)
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            for y in 0..n {
                let other = dom[var(y, x)].clone();
                let before = dom[var(x, y)].len();
                dom[var(x, y)].retain(|&u| other.iter().any(|&v| d.meet(u, v) == 0));
                if dom[var(x, y)].is_empty() {
                    return None;
                }
                changed |= dom[var(x, y)].len() != before;
            }
        }
    }

    let mut order: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    order.sort_by_key(|&(x, y)| (x.max(y), x.min(y), x < y));
    let mut val: Vec<Option<usize>> = vec![None; n * n];

    fn consistent(d: &FinDistLattice, n: usize, val: &[Option<usize>], p: usize, q: usize) -> bool {
        let g = |x: usize, y: usize| val[x * n + y];
        let pq = g(p, q).expect("just assigned");
        if let Some(qp) = g(q, p) {
            if d.meet(pq, qp) != 0 {
                return false;
            }
        }
        for r in 0..n {
            // p∖q ≤ (p∖r) ∨ (r∖q)
            if let (Some(a), Some(b)) = (g(p, r), g(r, q)) {
                if !d.leq(pq, d.join(a, b)) {
                    return false;
                }
            }
            // p∖r ≤ (p∖q) ∨ (q∖r)
            if let (Some(a), Some(b)) = (g(p, r), g(q, r)) {
                if !d.leq(a, d.join(pq, b)) {
                    return false;
                }
            }
            // r∖q ≤ (r∖p) ∨ (p∖q)
            if let (Some(a), Some(b)) = (g(r, q), g(r, p)) {
                if !d.leq(a, d.join(b, pq)) {
                    return false;
                }
            }
        }
        true
    }

    fn go(
        k: usize,
        d: &FinDistLattice,
        n: usize,
        order: &[(usize, usize)],
        dom: &[Vec<usize>],
        val: &mut Vec<Option<usize>>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let (x, y) = order[k];
        for &z in &dom[x * n + y] {
            val[x * n + y] = Some(z);
            if consistent(d, n, val, x, y) && go(k + 1, d, n, order, dom, val) {
                return true;
            }
        }
        val[x * n + y] = None;
        false
    }

    if go(0, d, n, &order, &dom, &mut val) {
        Some(CevianTable {
            n,
            op: val.into_iter().map(|v| v.expect("complete assignment")).collect(),
        })
    } else {
        None
    }
}

/// Searches for a Cevian table and cross-checks the outcome against complete
/// normality; a found table is re-verified on every pair and triple.
pub fn cevian_solve(d: &FinDistLattice) -> Result<Option<CevianTable>> {
    let found = cevian_search(d);
    if found.is_some() != d.completely_normal() {
        return Err(Error::inconsistency(format!(
            "search {} a Cevian table but the lattice is {}completely normal: {d}",
            if found.is_some() { "found" } else { "found no" },
            if d.completely_normal() { "" } else { "not " }
        )));
    }
    if let Some(t) = &found {
        if let Some(v) = cevian_axiom_check(d, t)? {
            return Err(Error::inconsistency(format!("search returned a bad table: {}", v.describe(d))));
        }
    }
    Ok(found)
}

/// `D × E`, with the map from index pairs to product elements.
pub fn product(d: &FinDistLattice, e: &FinDistLattice) -> Result<(FinDistLattice, Vec<Vec<usize>>)> {
    let (nd, ne) = (d.names.len(), e.names.len());
    if nd + ne > 63 {
        return Err(Error::validation("product has too many join-irreducibles"));
    }
    let mut names: Vec<String> = d.names.iter().map(|s| format!("{s}_l")).collect();
    names.extend(e.names.iter().map(|s| format!("{s}_r")));
    let mut down = d.down.clone();
    down.extend(e.down.iter().map(|m| m << nd));
    let p = FinDistLattice::from_down_sets(names, down)?;
    let pair = (0..d.len())
        .map(|x| (0..e.len()).map(|y| p.index[&(d.elems[x] | e.elems[y] << nd)]).collect())
        .collect();
    Ok((p, pair))
}

pub fn product_table(
    d: &FinDistLattice,
    td: &CevianTable,
    e: &FinDistLattice,
    te: &CevianTable,
    p: &FinDistLattice,
    pair: &[Vec<usize>],
) -> CevianTable {
    let mut back = vec![(0, 0); p.len()];
    for x in 0..d.len() {
        for y in 0..e.len() {
            back[pair[x][y]] = (x, y);
        }
    }
    CevianTable::from_fn(p.len(), |u, v| {
        let ((x1, y1), (x2, y2)) = (back[u], back[v]);
        pair[td.get(x1, x2)][te.get(y1, y2)]
    })
}

/// The quotient by a partition of the elements, which must be a lattice
/// congruence. Returns the quotient and the projection.
pub fn quotient(d: &FinDistLattice, classes: &[Vec<usize>]) -> Result<(FinDistLattice, Vec<usize>)> {
    let n = d.len();
    let mut cls = vec![usize::MAX; n];
    for (k, c) in classes.iter().enumerate() {
        for &x in c {
            if x >= n || cls[x] != usize::MAX {
                return Err(Error::validation("classes must partition the elements"));
            }
            cls[x] = k;
        }
    }
    if cls.contains(&usize::MAX) {
        return Err(Error::validation("classes must cover every element"));
    }
    for x in 0..n {
        for y in 0..n {
            if cls[x] != cls[y] {
                continue;
            }
            for z in 0..n {
                if cls[d.join(x, z)] != cls[d.join(y, z)] || cls[d.meet(x, z)] != cls[d.meet(y, z)] {
                    return Err(Error::validation(format!(
                        "not a congruence: {} and {} are identified but their combinations with {} are not",
                        d.element_name(x),
                        d.element_name(y),
                        d.element_name(z)
                    )));
                }
            }
        }
    }
    let rep: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let (q, map) = FinDistLattice::from_order(classes.len(), |a, b| cls[d.meet(rep[a], rep[b])] == a)?;
    let proj = (0..n).map(|x| map[cls[x]]).collect();
    Ok((q, proj))
}

/// `x ∖ y = proj(s(x) ∖ s(y))` for a section `s` of the projection.
pub fn quotient_table(d: &FinDistLattice, t: &CevianTable, q: &FinDistLattice, proj: &[usize]) -> Result<CevianTable> {
    let mut section = vec![usize::MAX; q.len()];
    for x in 0..d.len() {
        if section[proj[x]] == usize::MAX {
            section[proj[x]] = x;
        }
    }
    if section.contains(&usize::MAX) {
        return Err(Error::validation("projection is not surjective"));
    }
    Ok(CevianTable::from_fn(q.len(), |u, v| proj[t.get(section[u], section[v])]))
}

/// The ideal `↓a`, with the inclusion of its elements into `D`.
pub fn ideal(d: &FinDistLattice, a: usize) -> Result<(FinDistLattice, Vec<usize>)> {
    let m = d.elems[a];
    let keep: Vec<usize> = (0..d.names.len()).filter(|&j| m >> j & 1 == 1).collect();
    let names: Vec<String> = keep.iter().map(|&j| d.names[j].clone()).collect();
    let squeeze = |mask: u64| {
        keep.iter()
            .enumerate()
            .filter(|&(_, &j)| mask >> j & 1 == 1)
            .fold(0u64, |acc, (k, _)| acc | 1 << k)
    };
    let down = keep.iter().map(|&j| squeeze(d.down[j])).collect();
    let i = FinDistLattice::from_down_sets(names, down)?;
    let mut incl = vec![0; i.len()];
    for x in 0..d.len() {
        if d.leq(x, a) {
            incl[i.index[&squeeze(d.elems[x])]] = x;
        }
    }
    Ok((i, incl))
}

/// Restriction of the normalized table `x ∧ (x ∖ y)` to an ideal.
pub fn ideal_table(d: &FinDistLattice, t: &CevianTable, i: &FinDistLattice, incl: &[usize]) -> Result<CevianTable> {
    let norm = t.normalized(d);
    let back: HashMap<usize, usize> = incl.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let mut op = Vec::with_capacity(i.len() * i.len());
    for u in 0..i.len() {
        for v in 0..i.len() {
            let w = norm.get(incl[u], incl[v]);
            op.push(*back.get(&w).ok_or_else(|| Error::inconsistency("normalized table leaves the ideal"))?);
        }
    }
    Ok(CevianTable { n: i.len(), op })
}

/// Why a map fails to be a closed 0-lattice homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedHomFailure {
    NotZero,
    NotJoin(usize, usize),
    NotMeet(usize, usize),
    /// `f(a) ≤ f(a′) ∨ b` but no `x` with `a ≤ a′ ∨ x` has `f(x) ≤ b`.
    NotClosed { a: usize, a2: usize, b: usize },
}

/// Direct sweep over `a, a′, b`, cross-checked against the shortcut
/// `f(min_diff(a, a′)) ≤ min_diff(f(a), f(a′))`.
pub fn is_closed_hom(d: &FinDistLattice, e: &FinDistLattice, f: &[usize]) -> Result<Option<ClosedHomFailure>> {
    if f.len() != d.len() || f.iter().any(|&y| y >= e.len()) {
        return Err(Error::validation("map must send every element to an element"));
    }
    if f[0] != 0 {
        return Err(Error::validation("not a homomorphism: zero is not preserved"));
    }
    for x in 0..d.len() {
        for y in 0..d.len() {
            if f[d.join(x, y)] != e.join(f[x], f[y]) {
                return Err(Error::validation(format!(
                    "not a homomorphism: joins differ at {}, {}",
                    d.element_name(x),
                    d.element_name(y)
                )));
            }
            if f[d.meet(x, y)] != e.meet(f[x], f[y]) {
                return Err(Error::validation(format!(
                    "not a homomorphism: meets differ at {}, {}",
                    d.element_name(x),
                    d.element_name(y)
                )));
            }
        }
    }
    let mut sweep = None;
    'outer: for a in 0..d.len() {
        for a2 in 0..d.len() {
            let diffs: Vec<usize> = (0..d.len()).filter(|&x| d.leq(a, d.join(a2, x))).collect();
            for b in 0..e.len() {
                if e.leq(f[a], e.join(f[a2], b)) && !diffs.iter().any(|&x| e.leq(f[x], b)) {
                    sweep = Some(ClosedHomFailure::NotClosed { a, a2, b });
                    break 'outer;
                }
            }
        }
    }
    let shortcut = (0..d.len()).all(|a| {
        (0..d.len()).all(|a2| e.leq(f[d.min_diff(a, a2)], e.min_diff(f[a], f[a2])))
    });
    if shortcut != sweep.is_none() {
        return Err(Error::inconsistency("closedness sweep and minimal-difference test disagree"));
    }
    Ok(sweep)
}

/// Posets on `n` points up to isomorphism, as strict-below masks in a
/// canonical labelling.
pub fn posets_up_to_iso(n: usize) -> Vec<Vec<u64>> {
    let mut level: BTreeSet<Vec<u64>> = BTreeSet::new();
    level.insert(Vec::new());
    for size in 1..=n {
        let mut next = BTreeSet::new();
        for p in &level {
            // a new maximal element sits above some downset of `p`
            let lat = FinDistLattice::from_down_sets(
                (0..size - 1).map(|k| k.to_string()).collect(),
                p.iter().enumerate().map(|(k, m)| m | 1 << k).collect(),
            )
            .expect("small poset");
            for &m in &lat.elems {
                let mut q = p.clone();
                q.push(m);
                next.insert(canonical(&q));
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

fn canonical(below: &[u64]) -> Vec<u64> {
    let n = below.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    loop {
        // perm[old] = new
        let mut relabeled = vec![0u64; n];
        for old in 0..n {
            let mut m = 0;
            for k in 0..n {
                if below[old] >> k & 1 == 1 {
                    m |= 1 << perm[k];
                }
            }
            relabeled[perm[old]] = m;
        }
        if best.as_ref().map_or(true, |b| relabeled < *b) {
            best = Some(relabeled);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The lattice of downsets of a poset given by strict-below masks.
pub fn lattice_of(below: &[u64]) -> FinDistLattice {
    FinDistLattice::from_down_sets(
        (1..=below.len()).map(|k| format!("j{k}")).collect(),
        below.iter().enumerate().map(|(k, m)| m | 1 << k).collect(),
    )
    .expect("small poset")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> FinDistLattice {
        FinDistLattice::boolean(2)
    }

    #[test]
    fn small_examples() {
        let c3 = FinDistLattice::chain(2);
        assert_eq!(c3.len(), 3);
        assert!(c3.completely_normal());
        assert_eq!(c3.min_diff(2, 1), 2);
        assert_eq!(c3.min_diff(2, 2), 0);

        let sq = square();
        let (x, y) = (sq.element_by_name("e1").unwrap(), sq.element_by_name("e2").unwrap());
        assert_eq!(sq.min_diff(x, y), x);

        let v = FinDistLattice::square_with_new_zero();
        assert_eq!(v.len(), 5);
        let (a, b) = v.normality_counterexample().unwrap();
        let names = [v.element_name(a), v.element_name(b)];
        assert!(names.contains(&"x".to_string()) && names.contains(&"y".to_string()));
        assert!(cevian_solve(&v).unwrap().is_none());

        assert!(FinDistLattice::boolean(3).completely_normal());
    }

    #[test]
    fn two_chain_table_is_forced() {
        let c = FinDistLattice::chain(1);
        let t = cevian_solve(&c).unwrap().unwrap();
        assert_eq!((t.get(0, 0), t.get(0, 1), t.get(1, 0), t.get(1, 1)), (0, 0, 1, 0));
    }

    #[test]
    fn bad_table_on_square() {
        let sq = square();
        let t = CevianTable::from_fn(sq.len(), |x, _| x);
        let (x, y) = (sq.element_by_name("e1").unwrap(), sq.element_by_name("e2").unwrap());
        // incomparable atoms meet in zero, so the violation sits on a pair with a nonzero meet
        assert_eq!(sq.meet(x, y), 0);
        match cevian_axiom_check(&sq, &t).unwrap() {
            Some(AxiomViolation::Cev2(p, q)) => assert_ne!(sq.meet(p, q), 0),
            other => panic!("{other:?}"),
        }
        let one = FinDistLattice::chain(0);
        assert_eq!(cevian_axiom_check(&one, &CevianTable::from_fn(1, |_, _| 0)).unwrap(), None);
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn closure_constructions() {
        let c2 = FinDistLattice::chain(1);
        let t2 = CevianTable::min_diff(&c2);
        let (p, pair) = product(&c2, &c2).unwrap();
        assert_eq!(p.len(), 4);
        let tp = product_table(&c2, &t2, &c2, &t2, &p, &pair);
        assert_eq!(cevian_axiom_check(&p, &tp).unwrap(), None);

        let c3 = FinDistLattice::chain(2);
        let (i, incl) = ideal(&c3, 1).unwrap();
        assert_eq!(i.len(), 2);
        let ti = ideal_table(&c3, &CevianTable::min_diff(&c3), &i, &incl).unwrap();
        assert_eq!(cevian_axiom_check(&i, &ti).unwrap(), None);

        let sq = square();
        let x = sq.element_by_name("e1").unwrap();
        let classes = vec![vec![0, sq.element_by_name("e2").unwrap()], vec![x, sq.top()]];
        let (q, proj) = quotient(&sq, &classes).unwrap();
        assert_eq!(q.len(), 2);
        let tq = quotient_table(&sq, &CevianTable::min_diff(&sq), &q, &proj).unwrap();
        assert_eq!(cevian_axiom_check(&q, &tq).unwrap(), None);

        let bad = vec![vec![0, x], vec![sq.element_by_name("e2").unwrap()], vec![sq.top()]];
        assert!(quotient(&sq, &bad).is_err());
    }

    #[test]
    fn closed_homomorphisms() {
        let sq = square();
        let id: Vec<usize> = (0..sq.len()).collect();
        assert_eq!(is_closed_hom(&sq, &sq, &id).unwrap(), None);
        let c2 = FinDistLattice::chain(1);
        let incl = vec![0, sq.top()];
        assert!(is_closed_hom(&c2, &sq, &incl).unwrap().is_none());
        let zero = vec![0; sq.len()];
        assert_eq!(is_closed_hom(&sq, &c2, &zero).unwrap(), None);
        assert!(is_closed_hom(&c2, &sq, &[1, 1]).is_err());
    }

    #[test]
    fn birkhoff_round_trip() {
        for below in posets_up_to_iso(4) {
            let d = lattice_of(&below);
            let (e, map) = FinDistLattice::from_order(d.len(), |x, y| d.leq(x, y)).unwrap();
            assert_eq!(e.len(), d.len());
            for x in 0..d.len() {
                for y in 0..d.len() {
                    assert_eq!(d.leq(x, y), e.leq(map[x], map[y]));
                }
            }
            assert_eq!(d.join_irreducibles().len(), below.len());
        }
    }
}
