//! Poset-indexed diagrams whose homsets may hold several arrows, and the two
//! concrete cube-indexed diagrams: presented ℓ-groups `A` and the lattices of
//! cones `D`, linked by the support map `η`.

mod lemma43;
mod poset;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::cones::{fmt_point, AmbientCone, LinForm, Region};
use crate::error::{Error, Result};
use crate::lterm::{compile_support, LTerm, Presentation, SupportMode};
use crate::ratcore::{int, Rat};

pub use lemma43::*;
pub use poset::IndexPoset;

/// Arrows that can be composed and compared semantically.
pub trait Arrow: Clone + fmt::Display {
    /// `next ∘ self`
    fn then(&self, next: &Self) -> Result<Self>;
    fn same_as(&self, other: &Self) -> Result<bool>;
}

#[derive(Debug, Clone)]
pub struct NCDiagram<O, M> {
    pub poset: IndexPoset,
    pub objects: Vec<O>,
    homsets: BTreeMap<(usize, usize), Vec<M>>,
}

fn insert_unique<M: Arrow>(set: &mut Vec<M>, m: M) -> Result<()> {
    for existing in set.iter() {
        if existing.same_as(&m)? {
            return Ok(());
        }
    }
    set.push(m);
    Ok(())
}

impl<O, M: Arrow> NCDiagram<O, M> {
    /// Homsets are the given arrows together with every composite along a
    /// chain, with semantically equal arrows identified.
    pub fn generate(
        poset: IndexPoset,
        objects: Vec<O>,
        identities: Vec<M>,
        given: BTreeMap<(usize, usize), Vec<M>>,
    ) -> Result<Self> {
        let n = poset.len();
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|p| (0..n).map(move |q| (p, q)))
            .filter(|&(p, q)| poset.lt(p, q))
            .collect();
        let between = |p: usize, q: usize| (0..n).filter(|&k| poset.lt(p, k) && poset.lt(k, q)).count();
        pairs.sort_by_key(|&(p, q)| (between(p, q), p, q));

        let mut homsets: BTreeMap<(usize, usize), Vec<M>> = BTreeMap::new();
        for (p, id) in identities.into_iter().enumerate() {
            homsets.insert((p, p), vec![id]);
        }
        for (p, r) in pairs {
            let mut set = Vec::new();
            for m in given.get(&(p, r)).into_iter().flatten() {
                insert_unique(&mut set, m.clone())?;
            }
            for q in 0..n {
                if poset.lt(p, q) && poset.lt(q, r) {
                    let firsts = homsets[&(p, q)].clone();
                    let seconds = homsets[&(q, r)].clone();
                    for u in &firsts {
                        for v in &seconds {
                            insert_unique(&mut set, u.then(v)?)?;
                        }
                    }
                }
            }
            if set.is_empty() {
                return Err(Error::validation(format!(
                    "no arrow from {} to {}",
                    poset.name(p),
                    poset.name(r)
                )));
            }
            homsets.insert((p, r), set);
        }
        Ok(NCDiagram {
            poset,
            objects,
            homsets,
        })
    }

    pub fn homset(&self, p: &str, q: &str) -> Result<&[M]> {
        let (i, j) = (self.poset.index(p)?, self.poset.index(q)?);
        self.homsets
            .get(&(i, j))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::validation(format!("{p} is not below {q}")))
    }

    pub fn is_commutative(&self) -> bool {
        self.homsets.values().all(|s| s.len() == 1)
    }

    /// Checks that identities are present and that composites of members
    /// land in homsets. Returns the list of violations.
    pub fn check_closure(&self, identity: impl Fn(&O) -> M) -> Result<Vec<String>> {
        let n = self.poset.len();
        let mut problems = Vec::new();
        for p in 0..n {
            let id = identity(&self.objects[p]);
            let mut found = false;
            for m in &self.homsets[&(p, p)] {
                found |= m.same_as(&id)?;
            }
            if !found {
                problems.push(format!("no identity at {}", self.poset.name(p)));
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if !(self.poset.leq(p, q) && self.poset.leq(q, r)) {
                        continue;
                    }
                    for u in &self.homsets[&(p, q)] {
                        for v in &self.homsets[&(q, r)] {
                            let w = u.then(v)?;
                            let mut found = false;
                            for m in &self.homsets[&(p, r)] {
                                if m.same_as(&w)? {
                                    found = true;
                                    break;
                                }
                            }
                            if !found {
                                problems.push(format!(
                                    "composite {} -> {} -> {} is missing from its homset",
                                    self.poset.name(p),
                                    self.poset.name(q),
                                    self.poset.name(r)
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(problems)
    }
}

/// An ℓ-homomorphism between presentations, given on generators.
#[derive(Debug, Clone)]
pub struct Subst {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub images: BTreeMap<String, LTerm>,
}

impl Subst {
    pub fn new(source: Arc<Presentation>, target: Arc<Presentation>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (g, img) in pairs {
            source.index(g)?;
            let t: LTerm = img.parse()?;
            for v in t.vars() {
                target.index(&v)?;
            }
            images.insert(g.to_string(), t);
        }
        if images.len() != source.dim() {
            return Err(Error::validation(format!(
                "map from {} must give an image for every generator",
                source.name
            )));
        }
        Ok(Subst { source, target, images })
    }

    pub fn identity(p: Arc<Presentation>) -> Self {
        let images = p
            .generators
            .iter()
            .map(|g| (g.clone(), LTerm::var(g)))
            .collect();
        Subst {
            source: p.clone(),
            target: p,
            images,
        }
    }

    pub fn apply(&self, t: &LTerm) -> Result<LTerm> {
        t.substitute(&self.images)
    }
}

impl Arrow for Subst {
    fn then(&self, next: &Self) -> Result<Self> {
        if self.target.name != next.source.name {
            return Err(Error::validation("arrows do not compose"));
        }
        let images = self
            .images
            .iter()
            .map(|(g, t)| Ok((g.clone(), next.apply(t)?)))
            .collect::<Result<_>>()?;
        Ok(Subst {
            source: self.source.clone(),
            target: next.target.clone(),
            images,
        })
    }

    /// Equal as homomorphisms: every generator has equal images in the target.
    fn same_as(&self, other: &Self) -> Result<bool> {
        if self.source.name != other.source.name || self.target.name != other.target.name {
            return Ok(false);
        }
        for (g, s) in &self.images {
            let diff = s.clone().sub(other.images[g].clone());
            if !compile_support(&diff, &self.target, SupportMode::Nonzero)?.is_empty()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return write!(f, "zero map A{} -> A{}", self.source.name, self.target.name);
        }
        let parts: Vec<String> = self.images.iter().map(|(g, t)| format!("{g} -> {t}")).collect();
        write!(f, "A{} -> A{}: {}", self.source.name, self.target.name, parts.join(", "))
    }
}

fn cube_presentations() -> Vec<Arc<Presentation>> {
    IndexPoset::cube3()
        .names()
        .iter()
        .map(|p| Arc::new(Presentation::cube(p).expect("cube presentation")))
        .collect()
}

pub type DiagramA = NCDiagram<Arc<Presentation>, Subst>;

/// The cube of presented ℓ-groups with inclusions, except that the arrow
/// `A1 -> A13` sends `a` to `a'`.
pub fn build_diagram_a() -> Result<DiagramA> {
    let poset = IndexPoset::cube3();
    let pres = cube_presentations();
    let at = |name: &str| pres[poset.index(name).expect("cube element")].clone();
    let mut given: BTreeMap<(usize, usize), Vec<Subst>> = BTreeMap::new();
    let mut put = |p: &str, q: &str, pairs: &[(&str, &str)]| -> Result<()> {
        let m = Subst::new(at(p), at(q), pairs)?;
        given.insert((poset.index(p)?, poset.index(q)?), vec![m]);
        Ok(())
    };
    for q in ["1", "2", "3", "12", "13", "23", "123"] {
        put("∅", q, &[])?;
    }
    put("1", "12", &[("a", "a")])?;
    put("2", "12", &[("b", "b")])?;
    put("1", "13", &[("a", "a'")])?;
    put("3", "13", &[("c", "c")])?;
    put("2", "23", &[("b", "b")])?;
    put("3", "23", &[("c", "c")])?;
    put("12", "123", &[("a", "a"), ("b", "b")])?;
    put("13", "123", &[("a'", "a'"), ("c", "c")])?;
    put("23", "123", &[("b", "b"), ("c", "c")])?;
    let identities = pres.iter().cloned().map(Subst::identity).collect();
    NCDiagram::generate(poset, pres, identities, given)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdcCollapse {
    pub asymp: bool,
    pub within_factor_two: bool,
    pub zero_agrees: bool,
}

impl IdcCollapse {
    pub fn holds(&self) -> bool {
        self.asymp && self.within_factor_two && self.zero_agrees
    }
}

/// The two arrows `A1 -> A123` send `a` to terms with the same support, and
/// each image is at most twice the other, so they induce the same map on
/// principal ideals.
pub fn check_idc_collapse(diagram: &DiagramA) -> Result<IdcCollapse> {
    let maps = diagram.homset("1", "123")?;
    if maps.len() != 2 {
        return Err(Error::inconsistency(format!(
            "expected two arrows 1 -> 123, found {}",
            maps.len()
        )));
    }
    let top = maps[0].target.clone();
    let a = LTerm::var("a");
    let f = maps[0].apply(&a)?;
    let g = maps[1].apply(&a)?;
    let asymp = crate::lterm::asymp(&f, &g, &top)?;
    let over = |s: &LTerm, t: &LTerm| -> Result<bool> {
        let gap = s.clone().sub(t.clone().scale(int(2)));
        compile_support(&gap, &top, SupportMode::Positive)?.is_empty()
    };
    let within_factor_two = over(&f, &g)? && over(&g, &f)?;
    let z0 = maps[0].apply(&LTerm::Zero)?;
    let z1 = maps[1].apply(&LTerm::Zero)?;
    let zero_agrees = compile_support(&z0.sub(z1), &top, SupportMode::Nonzero)?.is_empty()?;
    Ok(IdcCollapse {
        asymp,
        within_factor_two,
        zero_agrees,
    })
}

/// Objects of `D`: the one-element lattice, `2`, and the lattices `O_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DObj {
    Trivial,
    Two,
    Cones(Arc<AmbientCone>),
}

impl fmt::Display for DObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DObj::Trivial => f.write_str("{0}"),
            DObj::Two => f.write_str("2"),
            DObj::Cones(k) => write!(f, "O{}", k.dim),
        }
    }
}

#[derive(Debug, Clone)]
pub enum DElem {
    Zero,
    Bit(bool),
    Reg(Region),
}

impl DElem {
    pub fn same_as(&self, other: &DElem) -> Result<bool> {
        Ok(match (self, other) {
            (DElem::Zero, DElem::Zero) => true,
            (DElem::Bit(a), DElem::Bit(b)) => a == b,
            (DElem::Reg(a), DElem::Reg(b)) => a.equals(b)?,
            _ => false,
        })
    }

    /// A point in exactly one of two regions, if they differ.
    pub fn separating_point(&self, other: &DElem) -> Result<Option<Vec<Rat>>> {
        match (self, other) {
            (DElem::Reg(a), DElem::Reg(b)) => Ok(match a.subset_witness(b)? {
                Some(w) => Some(w),
                None => b.subset_witness(a)?,
            }),
            _ => Ok(None),
        }
    }
}

impl fmt::Display for DElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DElem::Zero => f.write_str("0"),
            DElem::Bit(b) => write!(f, "{}", u8::from(*b)),
            DElem::Reg(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum DMapKind {
    Zero,
    Identity,
    /// The map out of `2` sending 1 to this region.
    Unit(Region),
    /// `X ↦ {x : (x_i, x_j) ∈ X}` from `O2` (coordinates 1-based).
    Cylinder(usize, usize),
    Chain(Vec<DMap>),
}

#[derive(Debug, Clone)]
pub struct DMap {
    pub source: DObj,
    pub target: DObj,
    pub kind: DMapKind,
}

fn bottom(obj: &DObj) -> DElem {
    match obj {
        DObj::Trivial => DElem::Zero,
        DObj::Two => DElem::Bit(false),
        DObj::Cones(k) => DElem::Reg(Region::zero(k.clone())),
    }
}

fn o2_generators(k: &Arc<AmbientCone>) -> Vec<Region> {
    let mut out = Vec::new();
    for p in -2i64..=2 {
        for q in -2i64..=2 {
            if p == 0 && q == 0 {
                continue;
            }
            let mut c = vec![int(0); k.dim];
            c[0] = int(p);
            if k.dim > 1 {
                c[1] = int(q);
            }
            out.push(Region::half_space(k.clone(), LinForm(c)).expect("dimension matches"));
        }
    }
    out
}

impl DMap {
    pub fn apply(&self, x: &DElem) -> Result<DElem> {
        match &self.kind {
            DMapKind::Zero => Ok(bottom(&self.target)),
            DMapKind::Identity => Ok(x.clone()),
            DMapKind::Unit(r) => match x {
                DElem::Bit(true) => Ok(DElem::Reg(r.clone())),
                DElem::Bit(false) => Ok(bottom(&self.target)),
                _ => Err(Error::validation("unit maps act on 2")),
            },
            DMapKind::Cylinder(i, j) => match (x, &self.target) {
                (DElem::Reg(r), DObj::Cones(k)) => {
                    let map = [LinForm::coord(k.dim, i - 1), LinForm::coord(k.dim, j - 1)];
                    Ok(DElem::Reg(r.pull_back(k.clone(), &map)?))
                }
                _ => Err(Error::validation("cylinder maps act on regions")),
            },
            DMapKind::Chain(ms) => {
                let mut cur = x.clone();
                for m in ms {
                    cur = m.apply(&cur)?;
                }
                Ok(cur)
            }
        }
    }

    /// A finite family that generates the source lattice.
    pub fn source_generators(&self) -> Vec<DElem> {
        match &self.source {
            DObj::Trivial => vec![DElem::Zero],
            DObj::Two => vec![DElem::Bit(false), DElem::Bit(true)],
            DObj::Cones(k) => {
                let mut g: Vec<DElem> = o2_generators(k).into_iter().map(DElem::Reg).collect();
                g.push(DElem::Reg(Region::zero(k.clone())));
                g.push(DElem::Reg(Region::unit(k.clone())));
                g
            }
        }
    }
}

impl Arrow for DMap {
    fn then(&self, next: &Self) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::validation("arrows do not compose"));
        }
        let mut chain = match &self.kind {
            DMapKind::Chain(ms) => ms.clone(),
            _ => vec![self.clone()],
        };
        match &next.kind {
            DMapKind::Chain(ms) => chain.extend(ms.iter().cloned()),
            _ => chain.push(next.clone()),
        }
        Ok(DMap {
            source: self.source.clone(),
            target: next.target.clone(),
            kind: DMapKind::Chain(chain),
        })
    }

    fn same_as(&self, other: &Self) -> Result<bool> {
        if self.source != other.source || self.target != other.target {
            return Ok(false);
        }
        for x in self.source_generators() {
            if !self.apply(&x)?.same_as(&other.apply(&x)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for DMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DMapKind::Zero => write!(f, "zero {} -> {}", self.source, self.target),
            DMapKind::Identity => write!(f, "identity on {}", self.source),
            DMapKind::Unit(r) => write!(f, "1 -> {r}"),
            DMapKind::Cylinder(i, j) => write!(f, "cylinder over (x{i}, x{j})"),
            DMapKind::Chain(ms) => {
                let parts: Vec<String> = ms.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" then "))
            }
        }
    }
}

pub type DiagramD = NCDiagram<DObj, DMap>;

fn o(n: usize) -> Arc<AmbientCone> {
    Arc::new(AmbientCone::trivial(n))
}

fn positive_coord(k: &Arc<AmbientCone>, i: usize) -> Region {
    Region::half_space(k.clone(), LinForm::coord(k.dim, i - 1)).expect("dimension matches")
}

fn d_object(p: &str) -> DObj {
    match p.chars().filter(|c| c.is_ascii_digit()).count() {
        0 => DObj::Trivial,
        1 => DObj::Two,
        n => DObj::Cones(o(n)),
    }
}

/// The direct definition of every arrow `p < q` of `D`.
fn delta(p: &str, q: &str) -> DMap {
    let (source, target) = (d_object(p), d_object(q));
    let kind = if p == "∅" {
        DMapKind::Zero
    } else if p == q {
        DMapKind::Identity
    } else if q == "123" && p.len() == 1 {
        let i = p.parse::<usize>().expect("digit");
        DMapKind::Unit(positive_coord(&o(3), i))
    } else if q == "123" {
        let i = p[..1].parse::<usize>().expect("digit");
        let j = p[1..].parse::<usize>().expect("digit");
        DMapKind::Cylinder(i, j)
    } else {
        // singleton into a pair: the first coordinate is the smaller index
        let first = p == &q[..1];
        DMapKind::Unit(positive_coord(&o(2), if first { 1 } else { 2 }))
    };
    DMap { source, target, kind }
}

pub fn build_diagram_d() -> Result<DiagramD> {
    let poset = IndexPoset::cube3();
    let names: Vec<String> = poset.names().to_vec();
    let objects: Vec<DObj> = names.iter().map(|p| d_object(p)).collect();
    let identities = names.iter().map(|p| delta(p, p)).collect();
    let mut given = BTreeMap::new();
    for (i, p) in names.iter().enumerate() {
        for (j, q) in names.iter().enumerate() {
            if poset.lt(i, j) {
                given.insert((i, j), vec![delta(p, q)]);
            }
        }
    }
    NCDiagram::generate(poset, objects, identities, given)
}

/// The support map `η_p` on the principal ideal of a term of `A_p`.
pub fn eta(p: &str, t: &LTerm) -> Result<DElem> {
    let pres = Presentation::cube(p)?;
    match d_object(p) {
        DObj::Trivial => Ok(DElem::Zero),
        DObj::Two => Ok(DElem::Bit(!compile_support(t, &pres, SupportMode::Nonzero)?.is_empty()?)),
        DObj::Cones(k) if k.dim == 2 => Ok(DElem::Reg(compile_support(t, &pres, SupportMode::Nonzero)?)),
        DObj::Cones(k) => {
            let support = compile_support(t, &pres, SupportMode::Nonzero)?;
            Ok(DElem::Reg(collapse_top(&support, &k)?))
        }
    }
}

/// Pulls a region of the top cone back along `(x1, x2, x3) ↦ (x1, x1, x2, x3)`.
pub fn collapse_top(region: &Region, o3: &Arc<AmbientCone>) -> Result<Region> {
    let map = [
        LinForm::coord(3, 0),
        LinForm::coord(3, 0),
        LinForm::coord(3, 1),
        LinForm::coord(3, 2),
    ];
    region.pull_back(o3.clone(), &map)
}

fn fingerprint_points(dim: usize) -> Vec<Vec<Rat>> {
    let vals: [i64; 7] = [0, 1, 2, 3, 5, 7, 11];
    let mut pts = Vec::new();
    match dim {
        0 => {}
        1 => pts.push(vec![int(1)]),
        _ => {
            for (k, &x) in vals.iter().enumerate() {
                for &y in &vals[k..] {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let mut p = vec![int(0); dim];
                    p[0] = int(x);
                    p[1] = int(y);
                    pts.push(p.clone());
                    p.swap(0, 1);
                    pts.push(p);
                }
            }
            pts.sort();
            pts.dedup();
        }
    }
    pts
}

/// Terms over `gens` built from `0` and the generators by at most `depth`
/// rounds of `-s`, `s + g`, `s - g`, `s /\ g`, `s \/ g` (`g` a generator or 0),
/// with terms of equal value on a fixed point set kept once.
pub fn term_pool(gens: &[String], depth: usize) -> Vec<LTerm> {
    let pts = fingerprint_points(gens.len());
    let base: Vec<LTerm> = std::iter::once(LTerm::Zero)
        .chain(gens.iter().map(|g| LTerm::var(g)))
        .collect();
    let print = |t: &LTerm| -> Vec<Rat> {
        pts.iter()
            .map(|p| {
                let env = gens.iter().cloned().zip(p.iter().cloned()).collect();
                t.eval(&env).expect("generators bound")
            })
            .collect()
    };
    let mut seen = HashSet::new();
    let mut pool = Vec::new();
    for t in &base {
        if seen.insert(print(t)) {
            pool.push(t.clone());
        }
    }
    let mut frontier = pool.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            let mut cands = vec![s.clone().neg()];
            for g in base.iter().skip(1) {
                cands.push(s.clone().add(g.clone()));
                cands.push(s.clone().sub(g.clone()));
                cands.push(s.clone().meet(g.clone()));
                cands.push(s.clone().join(g.clone()));
            }
            cands.push(s.clone().pos());
            for c in cands {
                if seen.insert(print(&c)) {
                    next.push(c.clone());
                    pool.push(c);
                }
            }
        }
        frontier = next;
    }
    pool
}

#[derive(Debug, Clone)]
pub struct SquareReport {
    pub lower: String,
    pub upper: String,
    pub terms: usize,
    pub failures: Vec<String>,
}

/// Checks `η_q ∘ α_p^q = δ_p^q ∘ η_p` on the term pool of `A_p` for every
/// cover `p ⋖ q` of the cube.
pub fn verify_eta(a: &DiagramA, d: &DiagramD, depth: usize) -> Result<Vec<SquareReport>> {
    let poset = IndexPoset::cube3();
    let mut out = Vec::new();
    for (i, j) in poset.cover_pairs() {
        let (p, q) = (poset.name(i).to_string(), poset.name(j).to_string());
        let alpha = &a.homset(&p, &q)?[0];
        let delta = &d.homset(&p, &q)?[0];
        let pool = term_pool(&alpha.source.generators, depth);
        let mut failures = Vec::new();
        for t in &pool {
            let left = eta(&q, &alpha.apply(t)?)?;
            let right = delta.apply(&eta(&p, t)?)?;
            if !left.same_as(&right)? {
                let w = left
                    .separating_point(&right)?
                    .map(|w| format!(", witness {}", fmt_point(&w)))
                    .unwrap_or_default();
                failures.push(format!("term {t}: {left} vs {right}{w}"));
            }
        }
        out.push(SquareReport {
            lower: p,
            upper: q,
            terms: pool.len(),
            failures,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CommutativityReport {
    pub closure_problems: Vec<String>,
    pub homset_sizes: Vec<(String, String, usize)>,
    pub commutative: bool,
}

fn commutativity<O, M: Arrow>(dg: &NCDiagram<O, M>, identity: impl Fn(&O) -> M) -> Result<CommutativityReport> {
    let closure_problems = dg.check_closure(identity)?;
    let n = dg.poset.len();
    let mut homset_sizes = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if dg.poset.leq(p, q) {
                homset_sizes.push((
                    dg.poset.name(p).to_string(),
                    dg.poset.name(q).to_string(),
                    dg.homsets[&(p, q)].len(),
                ));
            }
        }
    }
    Ok(CommutativityReport {
        closure_problems,
        homset_sizes,
        commutative: dg.is_commutative(),
    })
}

pub fn verify_a(a: &DiagramA) -> Result<CommutativityReport> {
    commutativity(a, |p| Subst::identity(p.clone()))
}

pub fn verify_d(d: &DiagramD) -> Result<CommutativityReport> {
    commutativity(d, |obj| DMap {
        source: obj.clone(),
        target: obj.clone(),
        kind: DMapKind::Identity,
    })
}

pub(crate) fn rat_is_zero(q: &Rat) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagram_a_has_two_arrows_from_one_to_the_top() {
        let a = build_diagram_a().unwrap();
        assert!(!a.is_commutative());
        assert_eq!(a.homset("1", "123").unwrap().len(), 2);
        for (p, q) in [("2", "123"), ("3", "123"), ("1", "13"), ("∅", "123"), ("12", "123")] {
            assert_eq!(a.homset(p, q).unwrap().len(), 1, "{p} -> {q}");
        }
        let m = &a.homset("1", "13").unwrap()[0];
        assert_eq!(m.apply(&LTerm::var("a")).unwrap(), LTerm::var("a'"));
        let report = verify_a(&a).unwrap();
        assert!(report.closure_problems.is_empty(), "{:?}", report.closure_problems);
    }

    #[test]
    fn arrows_out_of_two_agree_through_both_routes() {
        let a = build_diagram_a().unwrap();
        let via12 = a.homset("2", "12").unwrap()[0].then(&a.homset("12", "123").unwrap()[0]).unwrap();
        let via23 = a.homset("2", "23").unwrap()[0].then(&a.homset("23", "123").unwrap()[0]).unwrap();
        assert!(via12.same_as(&via23).unwrap());
        assert!(via12.same_as(&a.homset("2", "123").unwrap()[0]).unwrap());
    }

    #[test]
    fn collapse_on_principal_ideals() {
        let a = build_diagram_a().unwrap();
        assert!(check_idc_collapse(&a).unwrap().holds());
    }

    #[test]
    fn diagram_d_commutes() {
        let d = build_diagram_d().unwrap();
        let report = verify_d(&d).unwrap();
        assert!(report.commutative);
        assert!(report.closure_problems.is_empty());
    }

    #[test]
    fn worked_squares() {
        let a = build_diagram_a().unwrap();
        let d = build_diagram_d().unwrap();
        let k2 = o(2);
        // (η13 ∘ α1^13)(a) = η13(a') = ⟦x1 > 0⟧₂ = δ1^13(η1(a))
        let alpha = &a.homset("1", "13").unwrap()[0];
        let left = eta("13", &alpha.apply(&LTerm::var("a")).unwrap()).unwrap();
        let right = d.homset("1", "13").unwrap()[0].apply(&eta("1", &LTerm::var("a")).unwrap()).unwrap();
        let x1 = DElem::Reg(positive_coord(&k2, 1));
        assert!(left.same_as(&x1).unwrap());
        assert!(right.same_as(&x1).unwrap());

        // (13,123) on t(a', c) = (a' - 2c)^+: both sides are ⟦x1 - 2x3 > 0⟧₃
        let t: LTerm = "pos(a' - 2*c)".parse().unwrap();
        let left = eta("123", &t).unwrap();
        let right = d.homset("13", "123").unwrap()[0].apply(&eta("13", &t).unwrap()).unwrap();
        let expect = DElem::Reg(Region::half_space(o(3), LinForm::from_ints(&[1, 0, -2])).unwrap());
        assert!(left.same_as(&expect).unwrap());
        assert!(right.same_as(&expect).unwrap());
    }

    #[test]
    fn naturality_at_depth_one() {
        let a = build_diagram_a().unwrap();
        let d = build_diagram_d().unwrap();
        for sq in verify_eta(&a, &d, 1).unwrap() {
            assert!(sq.failures.is_empty(), "{} < {}: {:?}", sq.lower, sq.upper, sq.failures);
        }
    }
}
