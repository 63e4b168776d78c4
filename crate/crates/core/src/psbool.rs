//! Finite poset-scaled Boolean algebras, the algebras `F(X)` of norm
//! coverings, and condensates `A ⊗ S` of finite lattice diagrams.
//!
//! A Boolean algebra is the powerset of its atoms (at most 63, as bit masks);
//! each scale ideal is principal and stored as its generator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cones::Region;
use crate::diagrams::{build_diagram_d, DElem, DObj, IndexPoset};
use crate::error::{Error, Result};
use crate::finlat::FinDistLattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PScaledBA {
    pub poset: IndexPoset,
    pub atoms: Vec<String>,
    /// `scale[p]`: the generator of the ideal at `p`.
    pub scale: Vec<u64>,
}

fn bits(m: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |k| m >> k & 1 == 1)
}

impl PScaledBA {
    pub fn new(poset: IndexPoset, atoms: Vec<String>, scale: Vec<u64>) -> Result<Self> {
        let a = PScaledBA { poset, atoms, scale };
        a.validate()?;
        Ok(a)
    }

    fn full(&self) -> u64 {
        if self.atoms.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.poset.len();
        if self.atoms.len() > 63 {
            return Err(Error::validation("at most 63 atoms are supported"));
        }
        if self.scale.len() != n {
            return Err(Error::validation(format!("need one scale ideal per element, got {}", self.scale.len())));
        }
        if self.scale.iter().any(|m| m & !self.full() != 0) {
            return Err(Error::validation("scale ideal mentions an unknown atom"));
        }
        let union = self.scale.iter().fold(0, |acc, m| acc | m);
        if union != self.full() {
            let missing: Vec<&str> = bits(self.full() & !union).map(|k| self.atoms[k].as_str()).collect();
            return Err(Error::validation(format!(
                "scale ideals do not cover the algebra; atoms outside: {}",
                missing.join(", ")
            )));
        }
        for p in 0..n {
            for q in 0..n {
                let above = self
                    .poset
                    .upper_bounds(&[p, q])
                    .into_iter()
                    .fold(0, |acc, r| acc | self.scale[r]);
                if self.scale[p] & self.scale[q] != above {
                    return Err(Error::validation(format!(
                        "ideals at {} and {} meet in more than the ideals above both",
                        self.poset.name(p),
                        self.poset.name(q)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `‖a‖ = {p : a ∈ A^(p)}`
    pub fn norm_set(&self, atom: usize) -> Vec<usize> {
        (0..self.poset.len()).filter(|&p| self.scale[p] >> atom & 1 == 1).collect()
    }

    /// `|a|`, the largest element of `‖a‖`, for every atom; otherwise the
    /// atoms whose norm set has no largest element.
    pub fn tags(&self) -> std::result::Result<Vec<usize>, Vec<String>> {
        let mut tags = Vec::new();
        let mut bad = Vec::new();
        for k in 0..self.atoms.len() {
            let norm = self.norm_set(k);
            match norm.iter().copied().find(|&p| norm.iter().all(|&q| self.poset.leq(q, p))) {
                Some(p) => tags.push(p),
                None => bad.push(self.atoms[k].clone()),
            }
        }
        if bad.is_empty() {
            Ok(tags)
        } else {
            Err(bad)
        }
    }

    pub fn is_finitely_presented(&self) -> bool {
        self.tags().is_ok()
    }

    fn fp_tags(&self) -> Result<Vec<usize>> {
        self.tags().map_err(|bad| {
            Error::validation(format!("not finitely presented; no largest norm at atoms {}", bad.join(", ")))
        })
    }

    /// Atoms with given tags; `A^(p)` holds the atoms tagged above `p`.
    pub fn from_tags(poset: IndexPoset, atoms: &[(&str, &str)]) -> Result<Self> {
        let mut names = Vec::new();
        let mut tag = Vec::new();
        for (a, p) in atoms {
            names.push(a.to_string());
            tag.push(poset.index(p)?);
        }
        let scale = (0..poset.len())
            .map(|p| {
                tag.iter()
                    .enumerate()
                    .filter(|&(_, &t)| poset.leq(p, t))
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        PScaledBA::new(poset, names, scale)
    }
}

/// `2[p]`: one atom, in the ideal at `q` exactly when `q ≤ p`.
pub fn make_2p(poset: &IndexPoset, p: &str) -> Result<PScaledBA> {
    let i = poset.index(p)?;
    let scale = (0..poset.len()).map(|q| u64::from(poset.leq(q, i))).collect();
    PScaledBA::new(poset.clone(), vec!["1".into()], scale)
}

impl fmt::Display for PScaledBA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags = self.tags();
        let parts: Vec<String> = (0..self.atoms.len())
            .map(|k| match &tags {
                Ok(t) => format!("{}:{}", self.atoms[k], self.poset.name(t[k])),
                Err(_) => self.atoms[k].clone(),
            })
            .collect();
        write!(f, "{} atoms [{}]", self.atoms.len(), parts.join(" "))
    }
}

/// A Boolean homomorphism given by the image of each source atom; the
/// images partition the target atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMorphism {
    pub images: Vec<u64>,
}

impl BoolMorphism {
    pub fn apply(&self, m: u64) -> u64 {
        bits(m).fold(0, |acc, k| acc | self.images[k])
    }

    /// `self` then `next`
    pub fn then(&self, next: &BoolMorphism) -> BoolMorphism {
        BoolMorphism {
            images: self.images.iter().map(|&m| next.apply(m)).collect(),
        }
    }

    pub fn identity(n: usize) -> BoolMorphism {
        BoolMorphism {
            images: (0..n).map(|k| 1 << k).collect(),
        }
    }
}

/// Checks that `f` is a morphism `A → B`; returns whether it is normal.
pub fn check_morphism(a: &PScaledBA, b: &PScaledBA, f: &BoolMorphism) -> Result<bool> {
    if f.images.len() != a.atoms.len() {
        return Err(Error::validation("one image per source atom is required"));
    }
    let mut seen = 0u64;
    for &m in &f.images {
        if m & seen != 0 || m & !b.full() != 0 {
            return Err(Error::validation("atom images must be disjoint subsets of the target"));
        }
        seen |= m;
    }
    if seen != b.full() {
        return Err(Error::validation("atom images must cover the target"));
    }
    let mut normal = f.images.iter().all(|m| m.count_ones() <= 1);
    for p in 0..a.poset.len() {
        let img = f.apply(a.scale[p]);
        if img & !b.scale[p] != 0 {
            return Err(Error::validation(format!(
                "not scale-respecting at {}",
                a.poset.name(p)
            )));
        }
        normal &= img == b.scale[p];
    }
    Ok(normal)
}

/// A commutative diagram of finite distributive lattices over a poset, with
/// maps `σ_p^q` for `p ≤ q`.
#[derive(Debug, Clone)]
pub struct LatticeDiagram {
    pub poset: IndexPoset,
    pub objects: Vec<FinDistLattice>,
    pub maps: BTreeMap<(usize, usize), Vec<usize>>,
}

impl LatticeDiagram {
    pub fn new(
        poset: IndexPoset,
        objects: Vec<FinDistLattice>,
        maps: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        let n = poset.len();
        if objects.len() != n {
            return Err(Error::validation("need one lattice per poset element"));
        }
        let d = LatticeDiagram { poset, objects, maps };
        for p in 0..n {
            for q in 0..n {
                if !d.poset.leq(p, q) {
                    continue;
                }
                let m = d.maps.get(&(p, q)).ok_or_else(|| {
                    Error::validation(format!("missing map {} -> {}", d.poset.name(p), d.poset.name(q)))
                })?;
                let (s, t) = (&d.objects[p], &d.objects[q]);
                if m.len() != s.len() || m.iter().any(|&y| y >= t.len()) || m[0] != 0 {
                    return Err(Error::validation("maps must be total and send zero to zero"));
                }
                for x in 0..s.len() {
                    for y in 0..s.len() {
                        if m[s.join(x, y)] != t.join(m[x], m[y]) || m[s.meet(x, y)] != t.meet(m[x], m[y]) {
                            return Err(Error::validation(format!(
                                "map {} -> {} is not a lattice homomorphism",
                                d.poset.name(p),
                                d.poset.name(q)
                            )));
                        }
                    }
                }
                if p == q && m.iter().enumerate().any(|(x, &y)| x != y) {
                    return Err(Error::validation("maps at p -> p must be identities"));
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if d.poset.leq(p, q) && d.poset.leq(q, r) {
                        let (pq, qr, pr) = (&d.maps[&(p, q)], &d.maps[&(q, r)], &d.maps[&(p, r)]);
                        if (0..pq.len()).any(|x| qr[pq[x]] != pr[x]) {
                            return Err(Error::validation(format!(
                                "diagram does not commute on {} -> {} -> {}",
                                d.poset.name(p),
                                d.poset.name(q),
                                d.poset.name(r)
                            )));
                        }
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn map(&self, p: usize, q: usize) -> &[usize] {
        &self.maps[&(p, q)]
    }
}

fn region_leq(a: &DElem, b: &DElem) -> Result<bool> {
    Ok(match (a, b) {
        (DElem::Zero, DElem::Zero) => true,
        (DElem::Bit(x), DElem::Bit(y)) => !x || *y,
        (DElem::Reg(x), DElem::Reg(y)) => x.is_subset(y)?,
        _ => return Err(Error::validation("elements of different lattices")),
    })
}

fn close_under_lattice_ops(gens: Vec<Region>) -> Result<Vec<Region>> {
    let mut out: Vec<Region> = Vec::new();
    let push = |out: &mut Vec<Region>, r: Region| -> Result<bool> {
        for s in out.iter() {
            if s.equals(&r)? {
                return Ok(false);
            }
        }
        out.push(r);
        Ok(true)
    };
    for g in gens {
        push(&mut out, g)?;
    }
    loop {
        let mut grew = false;
        let snapshot = out.clone();
        for (i, x) in snapshot.iter().enumerate() {
            for y in &snapshot[i + 1..] {
                grew |= push(&mut out, x.meet(y)?)?;
                grew |= push(&mut out, x.join(y)?)?;
            }
        }
        if !grew {
            return Ok(out);
        }
    }
}

/// The finite part of the cone diagram generated by the coordinate regions
/// `⟦x_i > 0⟧` and zero at each vertex of the cube, with the restricted maps.
/// The infinite lattices `O2`, `O3` cannot be tensor factors themselves.
pub fn finite_cone_diagram() -> Result<(LatticeDiagram, Vec<Vec<DElem>>)> {
    let d = build_diagram_d()?;
    let poset = d.poset.clone();
    let mut elements: Vec<Vec<DElem>> = Vec::new();
    let mut objects = Vec::new();
    for p in 0..poset.len() {
        let elems: Vec<DElem> = match &d.objects[p] {
            DObj::Trivial => vec![DElem::Zero],
            DObj::Two => vec![DElem::Bit(false), DElem::Bit(true)],
            DObj::Cones(k) => {
                let mut gens = vec![Region::zero(k.clone())];
                for i in 0..k.dim {
                    gens.push(Region::half_space(k.clone(), crate::cones::LinForm::coord(k.dim, i))?);
                }
                close_under_lattice_ops(gens)?.into_iter().map(DElem::Reg).collect()
            }
        };
        let n = elems.len();
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            for y in 0..n {
                leq[x][y] = region_leq(&elems[x], &elems[y])?;
            }
        }
        let (lat, map) = FinDistLattice::from_order(n, |x, y| leq[x][y])?;
        let mut ordered = vec![DElem::Zero; n];
        for (x, e) in elems.into_iter().enumerate() {
            ordered[map[x]] = e;
        }
        objects.push(lat);
        elements.push(ordered);
    }
    let mut maps = BTreeMap::new();
    for p in 0..poset.len() {
        for q in 0..poset.len() {
            if !poset.leq(p, q) {
                continue;
            }
            let arrow = &d.homset(poset.name(p), poset.name(q))?[0];
            let mut m = Vec::new();
            for x in &elements[p] {
                let y = arrow.apply(x)?;
                let mut found = None;
                for (k, z) in elements[q].iter().enumerate() {
                    if z.same_as(&y)? {
                        found = Some(k);
                        break;
                    }
                }
                m.push(found.ok_or_else(|| Error::inconsistency("restricted map leaves the finite sublattice"))?);
            }
            maps.insert((p, q), m);
        }
    }
    Ok((LatticeDiagram::new(poset, objects, maps)?, elements))
}

/// `A ⊗ S`: one factor `S_{|a|}` per atom `a`. Elements are tuples of
/// factor elements.
#[derive(Debug, Clone)]
pub struct Condensate {
    pub tags: Vec<usize>,
    pub factors: Vec<FinDistLattice>,
}

impl Condensate {
    pub fn size(&self) -> u128 {
        self.factors.iter().map(|f| f.len() as u128).product()
    }

    /// Every element, in lexicographic order of tuples.
    pub fn elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..f.len()).map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// The product as a single lattice (join-irreducibles side by side).
    pub fn as_lattice(&self) -> Result<FinDistLattice> {
        let mut acc = FinDistLattice::chain(0);
        for f in &self.factors {
            acc = crate::finlat::product(&acc, f)?.0;
        }
        Ok(acc)
    }
}

pub fn tensor(a: &PScaledBA, s: &LatticeDiagram) -> Result<Condensate> {
    let tags = a.fp_tags()?;
    Ok(Condensate {
        factors: tags.iter().map(|&p| s.objects[p].clone()).collect(),
        tags,
    })
}

/// `φ ⊗ S`: the component at a target atom `b` is `σ_{|b^φ|}^{|b|}` applied
/// to the coordinate of `b^φ`, the source atom whose image contains `b`.
#[derive(Debug, Clone)]
pub struct CondensateMap {
    pub source_atom: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

impl CondensateMap {
    /// `self` then `next`, composed componentwise through the diagram.
    pub fn then(&self, next: &CondensateMap) -> CondensateMap {
        let source_atom = next.source_atom.iter().map(|&m| self.source_atom[m]).collect();
        let components = next
            .source_atom
            .iter()
            .zip(&next.components)
            .map(|(&m, outer)| self.components[m].iter().map(|&x| outer[x]).collect())
            .collect();
        CondensateMap {
            source_atom,
            components,
        }
    }

    pub fn apply(&self, x: &[usize]) -> Vec<usize> {
        self.source_atom
            .iter()
            .zip(&self.components)
            .map(|(&a, m)| m[x[a]])
            .collect()
    }
}

pub fn tensor_morphism(a: &PScaledBA, b: &PScaledBA, f: &BoolMorphism, s: &LatticeDiagram) -> Result<CondensateMap> {
    check_morphism(a, b, f)?;
    let (ta, tb) = (a.fp_tags()?, b.fp_tags()?);
    let mut source_atom = Vec::new();
    let mut components = Vec::new();
    for (bk, &q) in tb.iter().enumerate() {
        let ak = f
            .images
            .iter()
            .position(|m| m >> bk & 1 == 1)
            .expect("images cover the target");
        let p = ta[ak];
        if !s.poset.leq(p, q) {
            return Err(Error::inconsistency("scale-respecting morphism lowers a tag"));
        }
        source_atom.push(ak);
        components.push(s.map(p, q).to_vec());
    }
    Ok(CondensateMap {
        source_atom,
        components,
    })
}

/// Tensoring a chain `A_0 → A_1 → …` of finitely presented objects commutes
/// with composition: the tensor of each composite equals the composite of
/// the tensors on every element. With a finite chain the colimit is its last
/// object, so this is the finite form of preserving directed colimits.
pub fn check_chain_tensor(objects: &[PScaledBA], maps: &[BoolMorphism], s: &LatticeDiagram) -> Result<()> {
    if maps.len() + 1 != objects.len() {
        return Err(Error::validation("a chain of k objects needs k - 1 maps"));
    }
    let first = tensor(&objects[0], s)?;
    let mut composite = BoolMorphism::identity(objects[0].atoms.len());
    let mut tensored = tensor_morphism(&objects[0], &objects[0], &composite, s)?;
    for (k, f) in maps.iter().enumerate() {
        composite = composite.then(f);
        tensored = tensored.then(&tensor_morphism(&objects[k], &objects[k + 1], f, s)?);
        let direct = tensor_morphism(&objects[0], &objects[k + 1], &composite, s)?;
        for x in first.elements() {
            if direct.apply(&x) != tensored.apply(&x) {
                return Err(Error::inconsistency(format!(
                    "tensor of the composite into object {} differs at {:?}",
                    k + 1,
                    x
                )));
            }
        }
    }
    Ok(())
}

/// Whether a condensate map hits every element of the target.
pub fn is_surjective(map: &CondensateMap, source: &Condensate, target: &Condensate) -> bool {
    let image: BTreeSet<Vec<usize>> = source.elements().iter().map(|x| map.apply(x)).collect();
    image.len() as u128 == target.size()
}

/// A finite poset `X` with an isotone map into the index poset.
#[derive(Debug, Clone)]
pub struct NormCovering {
    pub x: IndexPoset,
    pub norm: Vec<usize>,
}

impl NormCovering {
    pub fn new(x: IndexPoset, target: &IndexPoset, norm: Vec<usize>) -> Result<Self> {
        if norm.len() != x.len() || norm.iter().any(|&p| p >= target.len()) {
            return Err(Error::validation("norm must send every element into the index poset"));
        }
        for u in 0..x.len() {
            for v in 0..x.len() {
                if x.leq(u, v) && !target.leq(norm[u], norm[v]) {
                    return Err(Error::validation(format!(
                        "norm is not isotone at {} <= {}",
                        x.name(u),
                        x.name(v)
                    )));
                }
            }
        }
        let c = NormCovering { x, norm };
        c.check_pseudo_join_semilattice()?;
        Ok(c)
    }

    /// `∇Z`: the minimal upper bounds of `Z`.
    pub fn nabla(&self, z: &[usize]) -> Vec<usize> {
        self.x.minimal(&self.x.upper_bounds(z))
    }

    /// Upper bounds of every subset are generated by their minimal elements,
    /// and `X` itself is `∇`-closed. Both always hold for finite posets; the
    /// check runs the definitions anyway.
    pub fn check_pseudo_join_semilattice(&self) -> Result<()> {
        let n = self.x.len();
        if n > 16 {
            return Err(Error::validation("norm coverings are limited to 16 elements"));
        }
        for mask in 0u32..1 << n {
            let z: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
            let ub = self.x.upper_bounds(&z);
            let gens = self.x.minimal(&ub);
            let generated: Vec<usize> = (0..n).filter(|&u| gens.iter().any(|&g| self.x.leq(g, u))).collect();
            if generated != ub {
                let names: Vec<&str> = z.iter().map(|&k| self.x.name(k)).collect();
                return Err(Error::validation(format!(
                    "upper bounds of {{{}}} are not generated by their minimal elements",
                    names.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// The smallest `∇`-closed set containing `start`, found by closing
    /// under `∇` of subsets; stops after `|X|` rounds.
    pub fn supported_closure(&self, start: &[usize]) -> Result<Vec<usize>> {
        let n = self.x.len();
        let mut set: u32 = start.iter().fold(0, |acc, &u| acc | 1 << u);
        for _ in 0..=n {
            let members: Vec<usize> = (0..n).filter(|&k| set >> k & 1 == 1).collect();
            let mut next = set;
            for sub in 0u32..1 << members.len() {
                let z: Vec<usize> = (0..members.len()).filter(|&k| sub >> k & 1 == 1).map(|k| members[k]).collect();
                for w in self.nabla(&z) {
                    next |= 1 << w;
                }
            }
            if next == set {
                return Ok(members);
            }
            set = next;
        }
        Err(Error::inconsistency("closure under minimal upper bounds did not stabilize"))
    }
}

/// `F(X)` as the powerset of the valuations `X → {0,1}` that satisfy the
/// defining relations, with `ũ` the set of valuations taking 1 at `u`.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    pub algebra: PScaledBA,
    pub valuations: Vec<u32>,
    /// `generators[u]`: the atoms (valuations) in `ũ`.
    pub generators: Vec<u64>,
}

pub fn build_fx(cov: &NormCovering, target: &IndexPoset) -> Result<FreeAlgebra> {
    let n = cov.x.len();
    let on = |v: u32, u: usize| v >> u & 1 == 1;
    let top: Vec<usize> = cov.nabla(&[]);
    let pair_nabla: Vec<Vec<Vec<usize>>> = (0..n).map(|u| (0..n).map(|v| cov.nabla(&[u, v])).collect()).collect();
    let valuations: Vec<u32> = (0u32..1 << n)
        .filter(|&val| {
            let order = (0..n).all(|u| (0..n).all(|v| !cov.x.leq(u, v) || !on(val, v) || on(val, u)));
            let meets = (0..n).all(|u| {
                (0..n).all(|v| (on(val, u) && on(val, v)) == pair_nabla[u][v].iter().any(|&w| on(val, w)))
            });
            let unit = top.iter().any(|&w| on(val, w));
            order && meets && unit
        })
        .collect();
    if valuations.len() > 63 {
        return Err(Error::validation(format!("{} valuations exceed the atom limit", valuations.len())));
    }
    let generators: Vec<u64> = (0..n)
        .map(|u| {
            valuations
                .iter()
                .enumerate()
                .filter(|&(_, &v)| on(v, u))
                .fold(0u64, |acc, (k, _)| acc | 1 << k)
        })
        .collect();
    let scale = (0..target.len())
        .map(|p| {
            (0..n)
                .filter(|&u| target.leq(p, cov.norm[u]))
                .fold(0u64, |acc, u| acc | generators[u])
        })
        .collect();
    let atoms = valuations
        .iter()
        .map(|&v| {
            let ones: Vec<&str> = (0..n).filter(|&u| on(v, u)).map(|u| cov.x.name(u)).collect();
            format!("{{{}}}", ones.join(","))
        })
        .collect();
    let algebra = PScaledBA::new(target.clone(), atoms, scale)
        .map_err(|e| Error::inconsistency(format!("F(X) is not a scaled Boolean algebra: {e}")))?;
    Ok(FreeAlgebra {
        algebra,
        valuations,
        generators,
    })
}

/// `π_x : F(X) → 2[∂x]`, sending `ũ` to 1 exactly when `u ≤ x`; returns the
/// morphism and whether it is normal.
pub fn pi_x(cov: &NormCovering, fx: &FreeAlgebra, target: &IndexPoset, x: usize) -> Result<(BoolMorphism, bool)> {
    let n = cov.x.len();
    let point: u32 = (0..n).filter(|&u| cov.x.leq(u, x)).fold(0, |acc, u| acc | 1 << u);
    let k = fx
        .valuations
        .iter()
        .position(|&v| v == point)
        .ok_or_else(|| Error::inconsistency(format!("the principal valuation at {} is missing", cov.x.name(x))))?;
    let images = (0..fx.valuations.len()).map(|j| u64::from(j == k)).collect();
    let f = BoolMorphism { images };
    let two = make_2p(target, target.name(cov.norm[x]))?;
    let normal = check_morphism(&fx.algebra, &two, &f)?;
    Ok((f, normal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> IndexPoset {
        IndexPoset::cube3()
    }

    #[test]
    fn two_p_scales() {
        let p = cube();
        let bottom = make_2p(&p, "∅").unwrap();
        for q in 0..p.len() {
            assert_eq!(bottom.scale[q], u64::from(p.name(q) == "∅"));
        }
        let top = make_2p(&p, "123").unwrap();
        assert!(top.scale.iter().all(|&m| m == 1));
        assert_eq!(top.tags().unwrap(), vec![p.index("123").unwrap()]);
    }

    #[test]
    fn invalid_scales_are_rejected() {
        let p = cube();
        let mut scale = vec![1u64; p.len()];
        scale[p.index("12").unwrap()] = 0;
        // the ideal at 1 and at 2 meet in the atom, but nothing above both holds it
        assert!(PScaledBA::new(p, vec!["a".into()], scale).is_err());
    }

    #[test]
    fn finite_cone_diagram_shapes() {
        let (s, _) = finite_cone_diagram().unwrap();
        let p = &s.poset;
        let size = |n: &str| s.objects[p.index(n).unwrap()].len();
        assert_eq!((size("∅"), size("1"), size("12"), size("123")), (1, 2, 5, 19));
        let a = make_2p(p, "12").unwrap();
        let t = tensor(&a, &s).unwrap();
        assert_eq!(t.factors.len(), 1);
        assert_eq!(t.factors[0], s.objects[p.index("12").unwrap()]);
    }

    #[test]
    fn morphism_between_two_p() {
        let (s, _) = finite_cone_diagram().unwrap();
        let p = &s.poset;
        let a = make_2p(p, "12").unwrap();
        let b = make_2p(p, "123").unwrap();
        let f = BoolMorphism::identity(1);
        let m = tensor_morphism(&a, &b, &f, &s).unwrap();
        let (i, j) = (p.index("12").unwrap(), p.index("123").unwrap());
        assert_eq!(m.components[0], s.map(i, j));
        assert!(!check_morphism(&a, &b, &f).unwrap());
        let err = tensor_morphism(&b, &a, &f, &s).unwrap_err();
        assert!(err.to_string().contains("not scale-respecting"));
    }

    #[test]
    fn free_algebra_examples() {
        let p = cube();
        let top = p.index("123").unwrap();
        let point = NormCovering::new(IndexPoset::new(&["w"], &[]).unwrap(), &p, vec![top]).unwrap();
        let fx = build_fx(&point, &p).unwrap();
        assert_eq!(fx.valuations, vec![1]);
        assert_eq!(fx.algebra, make_2p(&p, "123").unwrap().clone_with_atoms(&fx.algebra.atoms));

        let anti = NormCovering::new(IndexPoset::new(&["u", "v"], &[]).unwrap(), &p, vec![top, top]).unwrap();
        let fx = build_fx(&anti, &p).unwrap();
        assert_eq!(fx.valuations, vec![0b01, 0b10]);
        for x in 0..2 {
            assert!(pi_x(&anti, &fx, &p, x).unwrap().1);
        }

        let chain = NormCovering::new(IndexPoset::new(&["u", "v"], &[("u", "v")]).unwrap(), &p, vec![top, top]).unwrap();
        let fx = build_fx(&chain, &p).unwrap();
        assert_eq!(fx.valuations, vec![0b01, 0b11]);
        let (f, normal) = pi_x(&chain, &fx, &p, 0).unwrap();
        assert!(normal);
        assert_eq!(f.apply(fx.generators[0]), 1);
        assert_eq!(f.apply(fx.generators[1]), 0);
    }

    #[test]
    fn normal_two_atom_morphism_is_surjective() {
        let (s, _) = finite_cone_diagram().unwrap();
        let p = &s.poset;
        let a = PScaledBA::from_tags(p.clone(), &[("a", "12"), ("b", "123")]).unwrap();
        let b = make_2p(p, "12").unwrap();
        let f = BoolMorphism { images: vec![1, 0] };
        assert!(check_morphism(&a, &b, &f).unwrap());
        let m = tensor_morphism(&a, &b, &f, &s).unwrap();
        assert!(is_surjective(&m, &tensor(&a, &s).unwrap(), &tensor(&b, &s).unwrap()));
        let wrong = BoolMorphism { images: vec![0, 1] };
        assert!(check_morphism(&a, &b, &wrong).is_err());
    }

    #[test]
    fn tensor_respects_chains() {
        let (s, _) = finite_cone_diagram().unwrap();
        let p = &s.poset;
        let objs = vec![
            make_2p(p, "1").unwrap(),
            PScaledBA::from_tags(p.clone(), &[("u", "12"), ("v", "13")]).unwrap(),
            PScaledBA::from_tags(p.clone(), &[("u", "123"), ("v", "13"), ("w", "123")]).unwrap(),
        ];
        let maps = vec![BoolMorphism { images: vec![0b11] }, BoolMorphism { images: vec![0b101, 0b010] }];
        check_chain_tensor(&objs, &maps, &s).unwrap();
    }

    #[test]
    fn supported_closure_adds_joins() {
        let p = cube();
        let x = IndexPoset::new(&["u", "v", "w"], &[("u", "w"), ("v", "w")]).unwrap();
        let top = p.index("123").unwrap();
        let cov = NormCovering::new(x, &p, vec![top; 3]).unwrap();
        assert_eq!(cov.supported_closure(&[0, 1]).unwrap(), vec![0, 1, 2]);
        assert_eq!(cov.nabla(&[]), vec![0, 1]);
    }

    impl PScaledBA {
        fn clone_with_atoms(&self, atoms: &[String]) -> PScaledBA {
            PScaledBA {
                atoms: atoms.to_vec(),
                ..self.clone()
            }
        }
    }
}
