//! Strict open polyhedral cones of `(Q⁺)ⁿ`, relative to a closed ambient cone.
//!
//! A [`Region`] is a finite union of [`Cell`]s. Each cell is a conjunction of
//! homogeneous constraints `f·x ⋈ 0` and carries at least one strict
//! constraint, so no region ever contains the origin. Regions have no
//! canonical form; equality is mutual containment.
//!
//! Every decision reduces to [`cell_witness`], an exact LP on the section
//! `Σxᵢ = 1` that maximizes a common slack `δ ≤ 1` over the strict
//! constraints.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{LpOutcome, StandardLp};
use crate::ratcore::{parse_rat, ExtRat, Interval, Rat, RatioSet};

/// Homogeneous linear functional `c₁x₁ + … + cₙxₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinForm(pub Vec<Rat>);

impl LinForm {
    pub fn zero(dim: usize) -> Self {
        LinForm(vec![Rat::zero(); dim])
    }

    pub fn coord(dim: usize, i: usize) -> Self {
        let mut v = vec![Rat::zero(); dim];
        v[i] = Rat::one();
        LinForm(v)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinForm(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.0
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .fold(Rat::zero(), |acc, (c, x)| acc + c * x)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> LinForm {
        LinForm(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &LinForm) -> LinForm {
        LinForm(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LinForm) -> LinForm {
        LinForm(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, q: &Rat) -> LinForm {
        LinForm(self.0.iter().map(|c| c * q).collect())
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if mag.is_one() {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "{}*x{}", mag, i + 1)?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Gt,
    Ge,
    Eq,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }
}

/// `form ⋈ 0`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub form: LinForm,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(form: LinForm, rel: Rel) -> Self {
        Constraint { form, rel }
    }

    pub fn gt(form: LinForm) -> Self {
        Constraint::new(form, Rel::Gt)
    }

    pub fn ge(form: LinForm) -> Self {
        Constraint::new(form, Rel::Ge)
    }

    pub fn eq(form: LinForm) -> Self {
        Constraint::new(form, Rel::Eq)
    }

    pub fn holds(&self, point: &[Rat]) -> bool {
        let v = self.form.eval(point);
        match self.rel {
            Rel::Gt => v.is_positive(),
            Rel::Ge => !v.is_negative(),
            Rel::Eq => v.is_zero(),
        }
    }

    /// Pairwise disjoint constraints whose union is the negation.
    pub fn negation(&self) -> Vec<Constraint> {
        match self.rel {
            Rel::Gt => vec![Constraint::ge(self.form.neg())],
            Rel::Ge => vec![Constraint::gt(self.form.neg())],
            Rel::Eq => vec![
                Constraint::gt(self.form.clone()),
                Constraint::gt(self.form.neg()),
            ],
        }
    }

    /// Parses `lhs op rhs` with linear expressions over `x1..xn`.
    pub fn parse(src: &str, dim: usize) -> Result<Constraint> {
        let (pos, op, rel) = [(">=", Rel::Ge), (">", Rel::Gt), ("=", Rel::Eq)]
            .iter()
            .find_map(|(op, rel)| src.find(op).map(|p| (p, *op, *rel)))
            .ok_or_else(|| Error::parse(0, format!("no relation in `{src}`")))?;
        let lhs = parse_linear(&src[..pos], dim)?;
        let rhs = parse_linear(&src[pos + op.len()..], dim)?;
        Ok(Constraint::new(lhs.sub(&rhs), rel))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.form, self.rel.symbol())
    }
}

/// Parses `c1*x1 + ... - cn*xn` (coefficients optional, `0` allowed).
pub fn parse_linear(src: &str, dim: usize) -> Result<LinForm> {
    let mut form = LinForm::zero(dim);
    let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::parse(0, "empty linear expression"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = cleaned.as_bytes();
    for k in 1..bytes.len() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'*' && bytes[k - 1] != b'/' {
            terms.push(&cleaned[start..k]);
            start = k;
        }
    }
    terms.push(&cleaned[start..]);
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-Rat::one(), &term[1..]),
            Some(b'+') => (Rat::one(), &term[1..]),
            _ => (Rat::one(), term),
        };
        let (coef, var) = match body.rsplit_once('*') {
            Some((c, v)) => (parse_rat(c)?, Some(v)),
            None if body.starts_with('x') => (Rat::one(), Some(body)),
            None => (parse_rat(body)?, None),
        };
        match var {
            Some(v) => {
                let idx: usize = v
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&i: &usize| i >= 1 && i <= dim)
                    .ok_or_else(|| {
                        Error::parse(0, format!("`{v}` is not a coordinate among x1..x{dim}"))
                    })?;
                form.0[idx - 1] += sign * coef;
            }
            None if coef.is_zero() => {}
            None => {
                return Err(Error::parse(
                    0,
                    format!("constant term `{body}` in a homogeneous form"),
                ))
            }
        }
    }
    Ok(form)
}

/// A closed cone `K ⊆ (Q⁺)ⁿ` given by weak constraints; `xᵢ ≥ 0` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmbientCone {
    pub name: String,
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl AmbientCone {
    pub fn new(name: impl Into<String>, dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            if c.rel == Rel::Gt {
                return Err(Error::validation(format!(
                    "ambient cone constraints must be weak, got `{c}`"
                )));
            }
            if c.form.dim() != dim {
                return Err(Error::validation(format!(
                    "constraint `{c}` has dimension {} but the cone has {dim}",
                    c.form.dim()
                )));
            }
        }
        Ok(AmbientCone {
            name: name.into(),
            dim,
            constraints,
        })
    }

    /// `(Q⁺)ⁿ` itself.
    pub fn trivial(dim: usize) -> Self {
        AmbientCone {
            name: format!("Q+^{dim}"),
            dim,
            constraints: Vec::new(),
        }
    }

    /// Membership, origin included.
    pub fn contains(&self, point: &[Rat]) -> bool {
        point.len() == self.dim
            && point.iter().all(|x| !x.is_negative())
            && self.constraints.iter().all(|c| c.holds(point))
    }

    /// The first defining relation that fails at `point`.
    pub fn violated(&self, point: &[Rat]) -> Option<String> {
        if let Some(i) = point.iter().position(|x| x.is_negative()) {
            return Some(format!("x{} >= 0", i + 1));
        }
        self.constraints
            .iter()
            .find(|c| !c.holds(point))
            .map(ToString::to_string)
    }
}

/// A conjunction of constraints, interpreted inside an ambient cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cell {
    pub constraints: Vec<Constraint>,
}

impl Cell {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        Cell { constraints }
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.rel == Rel::Gt)
    }

    pub fn with(&self, extra: &[Constraint]) -> Cell {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra.iter().cloned());
        Cell { constraints }
    }

    pub fn holds(&self, point: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds(point))
    }

    /// Negation as pairwise disjoint cells ("first violated constraint").
    pub fn negation(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for (k, c) in self.constraints.iter().enumerate() {
            for neg in c.negation() {
                let mut cs = self.constraints[..k].to_vec();
                cs.push(neg);
                out.push(Cell::new(cs));
            }
        }
        out
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, c) in self.constraints.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

fn check_dims(ambient: &AmbientCone, cell: &Cell) -> Result<()> {
    for c in &cell.constraints {
        if c.form.dim() != ambient.dim {
            return Err(Error::validation(format!(
                "constraint `{c}` has dimension {} but the ambient cone {} has {}",
                c.form.dim(),
                ambient.name,
                ambient.dim
            )));
        }
    }
    Ok(())
}

/// A rational point of `ambient ∩ cell` on the section `Σxᵢ = 1`, if any.
///
/// For cells without a strict constraint this decides whether the cell holds
/// a point other than the origin.
pub fn cell_witness(ambient: &AmbientCone, cell: &Cell) -> Result<Option<Vec<Rat>>> {
    check_dims(ambient, cell)?;
    let n = ambient.dim;
    let mut weak: Vec<&Constraint> = Vec::new();
    let mut strict: Vec<&Constraint> = Vec::new();
    for c in ambient.constraints.iter().chain(&cell.constraints) {
        if c.form.is_zero() {
            if c.rel == Rel::Gt {
                return Ok(None);
            }
            continue;
        }
        match c.rel {
            Rel::Gt => strict.push(c),
            _ => weak.push(c),
        }
    }
    let num_ge = weak.iter().filter(|c| c.rel == Rel::Ge).count();
    // x (n), delta, slacks: one per Ge, one per strict, one for delta <= 1
    let delta = n;
    let num_vars = n + 1 + num_ge + strict.len() + 1;
    let mut lp = StandardLp::new(num_vars);
    let mut slack = n + 1;
    let zero_row = || vec![Rat::zero(); num_vars];

    let mut row = zero_row();
    for v in row.iter_mut().take(n) {
        *v = Rat::one();
    }
    lp.add_row(row, Rat::one());
    for c in &weak {
        let mut row = zero_row();
        row[..n].clone_from_slice(&c.form.0);
        if c.rel == Rel::Ge {
            row[slack] = -Rat::one();
            slack += 1;
        }
        lp.add_row(row, Rat::zero());
    }
    for c in &strict {
        let mut row = zero_row();
        row[..n].clone_from_slice(&c.form.0);
        row[delta] = -Rat::one();
        row[slack] = -Rat::one();
        slack += 1;
        lp.add_row(row, Rat::zero());
    }
    let mut row = zero_row();
    row[delta] = Rat::one();
    row[slack] = Rat::one();
    lp.add_row(row, Rat::one());
    lp.objective[delta] = Rat::one();

    match lp.solve() {
        LpOutcome::Optimal { value, x } if value.is_positive() => Ok(Some(x[..n].to_vec())),
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("delta is bounded by one"),
    }
}

pub fn cell_is_empty(ambient: &AmbientCone, cell: &Cell) -> Result<bool> {
    Ok(cell_witness(ambient, cell)?.is_none())
}

/// A finite union of strict cells inside an ambient cone.
#[derive(Debug, Clone)]
pub struct Region {
    ambient: Arc<AmbientCone>,
    cells: Vec<Cell>,
}

impl Region {
    pub fn zero(ambient: Arc<AmbientCone>) -> Self {
        Region {
            ambient,
            cells: Vec::new(),
        }
    }

    /// `⋃ᵢ {xᵢ > 0}` inside the ambient cone.
    pub fn unit(ambient: Arc<AmbientCone>) -> Self {
        let n = ambient.dim;
        let cells = (0..n)
            .map(|i| Cell::new(vec![Constraint::gt(LinForm::coord(n, i))]))
            .collect();
        Region { ambient, cells }
    }

    /// `⟦f > 0⟧`
    pub fn half_space(ambient: Arc<AmbientCone>, form: LinForm) -> Result<Self> {
        Region::from_cells(ambient, vec![Cell::new(vec![Constraint::gt(form)])])
    }

    pub fn from_cells(ambient: Arc<AmbientCone>, cells: Vec<Cell>) -> Result<Self> {
        for cell in &cells {
            check_dims(&ambient, cell)?;
            if !cell.has_strict() {
                return Err(Error::validation(format!(
                    "cell {cell} has no strict constraint and would contain the origin"
                )));
            }
        }
        Ok(Region { ambient, cells })
    }

    pub fn ambient(&self) -> &Arc<AmbientCone> {
        &self.ambient
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        self.ambient.contains(point) && self.cells.iter().any(|c| c.holds(point))
    }

    fn same_ambient(&self, other: &Region) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "ambient mismatch: {} vs {}",
                self.ambient.name, other.ambient.name
            )))
        }
    }

    /// Drops cells with empty solution sets.
    pub fn pruned(&self) -> Result<Region> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            if !cell_is_empty(&self.ambient, c)? {
                cells.push(c.clone());
            }
        }
        Ok(Region {
            ambient: self.ambient.clone(),
            cells,
        })
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.witness()?.is_none())
    }

    pub fn witness(&self) -> Result<Option<Vec<Rat>>> {
        for c in &self.cells {
            if let Some(w) = cell_witness(&self.ambient, c)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    pub fn meet(&self, other: &Region) -> Result<Region> {
        self.same_ambient(other)?;
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let c = a.with(&b.constraints);
                if !cell_is_empty(&self.ambient, &c)? {
                    cells.push(c);
                }
            }
        }
        Ok(Region {
            ambient: self.ambient.clone(),
            cells,
        })
    }

    pub fn join(&self, other: &Region) -> Result<Region> {
        self.same_ambient(other)?;
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Region {
            ambient: self.ambient.clone(),
            cells,
        }
        .pruned()
    }

    /// `self ∖ other` as a union of pairwise disjoint pieces per cell of `self`.
    pub fn difference(&self, other: &Region) -> Result<Region> {
        self.same_ambient(other)?;
        let mut cells = Vec::new();
        for a in &self.cells {
            self.subtract_cell(a.clone(), &other.cells, &mut |c| {
                cells.push(c);
                false
            })?;
        }
        Ok(Region {
            ambient: self.ambient.clone(),
            cells,
        })
    }

    /// Depth-first removal of `holes` from `piece`; `sink` sees every nonempty
    /// leaf and returns `true` to stop the search.
    fn subtract_cell(
        &self,
        piece: Cell,
        holes: &[Cell],
        sink: &mut dyn FnMut(Cell) -> bool,
    ) -> Result<bool> {
        if cell_is_empty(&self.ambient, &piece)? {
            return Ok(false);
        }
        let Some((hole, rest)) = holes.split_first() else {
            return Ok(sink(piece));
        };
        if hole.constraints.is_empty() {
            return Ok(false);
        }
        for part in hole.negation() {
            if self.subtract_cell(piece.with(&part.constraints), rest, sink)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn complement_in_unit(&self) -> Result<Region> {
        Region::unit(self.ambient.clone()).difference(self)
    }

    /// `None` when `self ⊆ other`, otherwise a rational point of `self ∖ other`.
    pub fn subset_witness(&self, other: &Region) -> Result<Option<Vec<Rat>>> {
        self.same_ambient(other)?;
        let mut found = None;
        for a in &self.cells {
            let stopped = self.subtract_cell(a.clone(), &other.cells, &mut |leaf| {
                found = Some(leaf);
                true
            })?;
            if stopped {
                break;
            }
        }
        match found {
            None => Ok(None),
            Some(leaf) => Ok(Some(
                cell_witness(&self.ambient, &leaf)?.expect("leaf was checked nonempty"),
            )),
        }
    }

    pub fn is_subset(&self, other: &Region) -> Result<bool> {
        Ok(self.subset_witness(other)?.is_none())
    }

    pub fn equals(&self, other: &Region) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    /// Substitutes coordinates: the form `f` over this region becomes
    /// `f ∘ map` over a target of dimension `target.dim`, where coordinate `i`
    /// of the source is replaced by `map[i]` (a linear form on the target).
    pub fn pull_back(&self, target: Arc<AmbientCone>, map: &[LinForm]) -> Result<Region> {
        if map.len() != self.dim() {
            return Err(Error::validation("substitution arity mismatch"));
        }
        let cells = self
            .cells
            .iter()
            .map(|cell| {
                Cell::new(
                    cell.constraints
                        .iter()
                        .map(|c| {
                            let mut form = LinForm::zero(target.dim);
                            for (coef, img) in c.form.0.iter().zip(map) {
                                if !coef.is_zero() {
                                    form = form.add(&img.scale(coef));
                                }
                            }
                            Constraint::new(form, c.rel)
                        })
                        .collect(),
                )
            })
            .collect();
        Region::from_cells(target, cells)?.pruned()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return f.write_str("empty");
        }
        for (k, c) in self.cells.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses `[c, c, ...] | [c, ...]` or `empty`.
pub fn parse_region(src: &str, ambient: Arc<AmbientCone>) -> Result<Region> {
    let s = src.trim();
    if s == "empty" || s.is_empty() {
        return Ok(Region::zero(ambient));
    }
    let mut cells = Vec::new();
    for part in s.split('|') {
        let body = part
            .trim()
            .strip_prefix('[')
            .and_then(|p| p.strip_suffix(']'))
            .ok_or_else(|| Error::parse(0, format!("cell `{}` must be bracketed", part.trim())))?;
        let constraints = body
            .split(',')
            .filter(|c| !c.trim().is_empty())
            .map(|c| Constraint::parse(c, ambient.dim))
            .collect::<Result<Vec<_>>>()?;
        cells.push(Cell::new(constraints));
    }
    Region::from_cells(ambient, cells)
}

/// Formats a point as `(a, b, c)`.
pub fn fmt_point(point: &[Rat]) -> String {
    let parts: Vec<String> = point.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// The cylinder `{x : (xᵢ,xⱼ) ≠ (0,0), xᵢ⁻¹xⱼ ∈ U}` over coordinates `i`, `j`
/// (1-based) of the trivial cone `(Q⁺)ⁿ`.
pub fn ratioset_to_region(u: &RatioSet, i: usize, j: usize, n: usize) -> Result<Region> {
    ratioset_to_region_in(u, i, j, Arc::new(AmbientCone::trivial(n)))
}

/// As [`ratioset_to_region`], inside an arbitrary ambient cone.
pub fn ratioset_to_region_in(
    u: &RatioSet,
    i: usize,
    j: usize,
    ambient: Arc<AmbientCone>,
) -> Result<Region> {
    let n = ambient.dim;
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::validation(format!(
            "cylinder coordinates ({i},{j}) must be distinct and within 1..={n}"
        )));
    }
    let (xi, xj) = (i - 1, j - 1);
    let pair = |ci: Rat, cj: Rat| {
        let mut v = vec![Rat::zero(); n];
        v[xi] = ci;
        v[xj] = cj;
        LinForm(v)
    };
    let mut cells = Vec::new();
    for iv in u.intervals() {
        let mut cs = Vec::new();
        match &iv.lo {
            ExtRat::Fin(l) if l.is_zero() => {
                if !iv.lo_closed {
                    cs.push(Constraint::gt(pair(Rat::zero(), Rat::one())));
                }
            }
            ExtRat::Fin(l) => {
                let f = pair(-l.clone(), Rat::one());
                cs.push(if iv.lo_closed { Constraint::ge(f) } else { Constraint::gt(f) });
            }
            ExtRat::Inf => cs.push(Constraint::ge(pair(-Rat::one(), Rat::zero()))),
        }
        match &iv.hi {
            ExtRat::Inf => {
                if !iv.hi_closed {
                    cs.push(Constraint::gt(pair(Rat::one(), Rat::zero())));
                }
            }
            ExtRat::Fin(h) => {
                let f = pair(h.clone(), -Rat::one());
                cs.push(if iv.hi_closed { Constraint::ge(f) } else { Constraint::gt(f) });
            }
        }
        if !cs.iter().any(|c| c.rel == Rel::Gt) {
            cs.push(Constraint::gt(pair(Rat::one(), Rat::one())));
        }
        cells.push(Cell::new(cs));
    }
    Region::from_cells(ambient, cells)?.pruned()
}

/// Inverse of the cylinder construction in dimension two: the set of ratios
/// `x⁻¹y` of the nonzero points `(x, y)` of `region`.
pub fn region_to_ratioset(region: &Region) -> Result<RatioSet> {
    if region.dim() != 2 {
        return Err(Error::validation(format!(
            "ratio sets describe regions of dimension 2, got {}",
            region.dim()
        )));
    }
    let mut pieces = Vec::new();
    for cell in region.cells() {
        let all: Vec<&Constraint> = region
            .ambient()
            .constraints
            .iter()
            .chain(&cell.constraints)
            .collect();
        let mut finite = Some(Interval::new(ExtRat::zero(), true, ExtRat::Inf, false));
        for c in &all {
            let Some(cur) = finite.take() else { break };
            finite = restrict_ratio(&cur, &c.form.0[0], &c.form.0[1], c.rel);
        }
        if let Some(iv) = finite {
            pieces.push(iv);
        }
        let at_inf = all.iter().all(|c| c.holds(&[Rat::zero(), Rat::one()]));
        if at_inf {
            pieces.push(Interval::point(ExtRat::Inf));
        }
    }
    RatioSet::normalize(&pieces)
}

/// Intersects `cur ⊆ [0,∞)` with `{t : c1 + c2·t ⋈ 0}`.
fn restrict_ratio(cur: &Interval, c1: &Rat, c2: &Rat, rel: Rel) -> Option<Interval> {
    let full = |iv: Interval| Some(iv);
    if c2.is_zero() {
        let ok = match rel {
            Rel::Gt => c1.is_positive(),
            Rel::Ge => !c1.is_negative(),
            Rel::Eq => c1.is_zero(),
        };
        return if ok { full(cur.clone()) } else { None };
    }
    let r = -c1 / c2;
    // c2 > 0: t ⋈ r;  c2 < 0: r ⋈ t
    let bound = if r.is_negative() { None } else { Some(ExtRat::Fin(r.clone())) };
    let constraint = match (c2.is_positive(), rel) {
        (_, Rel::Eq) => match bound {
            Some(b) => Interval::point(b),
            None => return None,
        },
        (true, rel) => match bound {
            Some(b) => Interval::new(b, rel == Rel::Ge, ExtRat::Inf, false),
            None => return full(cur.clone()),
        },
        (false, rel) => match bound {
            Some(b) => Interval::new(ExtRat::zero(), true, b, rel == Rel::Ge),
            None => return None,
        },
    };
    let out = cur.intersect(&constraint);
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}
