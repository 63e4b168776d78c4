//! Scenario files for the cone and condensate commands. The other kinds are
//! read by the parsers that live next to their checkers.

use std::collections::BTreeMap;
use std::sync::Arc;

use cevian_core::cones::{parse_region, AmbientCone, Constraint, Region};
use cevian_core::diagrams::IndexPoset;
use cevian_core::error::{Error, Result};
use cevian_core::finlat::FinDistLattice;
use cevian_core::psbool::{finite_cone_diagram, BoolMorphism, LatticeDiagram, PScaledBA};

/// `key = value` lines with their line numbers; `#` starts a comment.
fn entries(src: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (k, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(k + 1, format!("expected `key = value`, got `{line}`")))?;
        out.push((k + 1, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { msg, .. } => Error::parse(line, msg),
        other => Error::parse(line, other.to_string()),
    }
}

/// The `kind = ...` line, if present.
pub fn kind_of(src: &str) -> Option<String> {
    entries(src)
        .ok()?
        .into_iter()
        .find(|(_, k, _)| k == "kind")
        .map(|(_, _, v)| v)
}

pub fn expect_kind(src: &str, want: &str) -> Result<()> {
    match kind_of(src) {
        Some(k) if k != want => Err(Error::parse(0, format!("this command reads `kind = {want}` files, got `{k}`"))),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone)]
pub struct ConeScenario {
    pub a: Region,
    pub b: Option<Region>,
}

/// ```text
/// kind = cone
/// dim = 3
/// cone = x1 >= x2            # optional, extra weak constraints
/// A = [x1 > x2] | [x3 > 0]
/// B = [x1 > 0]               # needed for subset, meet, join
/// ```
pub fn parse_cone(src: &str) -> Result<ConeScenario> {
    let mut dim = None;
    let mut cone_line = None;
    let mut regions: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (line, key, value) in entries(src)? {
        match key.as_str() {
            "kind" if value == "cone" => {}
            "dim" => {
                let d: usize = value
                    .parse()
                    .ok()
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| Error::parse(line, format!("`{value}` is not a positive dimension")))?;
                dim = Some(d);
            }
            "cone" => cone_line = Some((line, value)),
            "A" | "B" => {
                if regions.insert(key.clone(), (line, value)).is_some() {
                    return Err(Error::parse(line, format!("`{key}` given twice")));
                }
            }
            other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::parse(0, "missing `dim`"))?;
    let mut constraints = Vec::new();
    if let Some((line, text)) = cone_line {
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            constraints.push(Constraint::parse(part, dim).map_err(at(line))?);
        }
    }
    let ambient = Arc::new(AmbientCone::new("K", dim, constraints).map_err(at(0))?);
    let read = |key: &str| -> Result<Option<Region>> {
        regions
            .get(key)
            .map(|(line, text)| parse_region(text, ambient.clone()).map_err(at(*line)))
            .transpose()
    };
    let a = read("A")?.ok_or_else(|| Error::parse(0, "missing `A`"))?;
    let b = read("B")?;
    Ok(ConeScenario { a, b })
}

#[derive(Debug, Clone)]
pub struct CondensateScenario {
    pub diagram: LatticeDiagram,
    pub diagram_name: String,
    pub source: PScaledBA,
    /// A second algebra and a morphism into it, when given.
    pub morphism: Option<(PScaledBA, BoolMorphism)>,
}

fn parse_atoms(poset: &IndexPoset, text: &str, line: usize) -> Result<PScaledBA> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, tag) = item
            .split_once(':')
            .ok_or_else(|| Error::parse(line, format!("expected `atom:tag`, got `{item}`")))?;
        pairs.push((name.trim(), tag.trim()));
    }
    PScaledBA::from_tags(poset.clone(), &pairs).map_err(at(line))
}

fn parse_lattice_expr(text: &str, line: usize) -> Result<FinDistLattice> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let n = |w: &str| -> Result<usize> {
        w.parse()
            .ok()
            .filter(|&n| n <= 6)
            .ok_or_else(|| Error::parse(line, format!("`{w}` is not a size between 0 and 6")))
    };
    match words.as_slice() {
        ["chain", k] => Ok(FinDistLattice::chain(n(k)?)),
        ["boolean", k] => Ok(FinDistLattice::boolean(n(k)?)),
        _ => Err(Error::parse(line, format!("expected `chain N` or `boolean N`, got `{text}`"))),
    }
}

/// Builds the maps for every `p ≤ q` by composing the given cover maps along
/// a path of covers; commutativity is then checked by the diagram itself.
fn custom_diagram(
    poset: &IndexPoset,
    objects: BTreeMap<usize, FinDistLattice>,
    covers: BTreeMap<(usize, usize), (usize, Vec<usize>)>,
) -> Result<LatticeDiagram> {
    let n = poset.len();
    let objs: Vec<FinDistLattice> = (0..n)
        .map(|p| {
            objects
                .get(&p)
                .cloned()
                .ok_or_else(|| Error::parse(0, format!("missing `object {}`", poset.name(p))))
        })
        .collect::<Result<_>>()?;
    for &(p, q) in covers.keys() {
        if !poset.covers(p, q) {
            return Err(Error::parse(
                covers[&(p, q)].0,
                format!("{} < {} is not a cover; give maps for covers only", poset.name(p), poset.name(q)),
            ));
        }
    }
    let mut maps = BTreeMap::new();
    for p in 0..n {
        for q in 0..n {
            if !poset.leq(p, q) {
                continue;
            }
            let mut m: Vec<usize> = (0..objs[p].len()).collect();
            let mut cur = p;
            while cur != q {
                let next = (0..n)
                    .find(|&r| poset.covers(cur, r) && poset.leq(r, q))
                    .expect("a cover below the target exists");
                let (_, step) = covers.get(&(cur, next)).ok_or_else(|| {
                    Error::parse(0, format!("missing `map {} {}`", poset.name(cur), poset.name(next)))
                })?;
                if step.len() != objs[cur].len() {
                    return Err(Error::parse(
                        covers[&(cur, next)].0,
                        format!("map needs {} entries", objs[cur].len()),
                    ));
                }
                m = m.iter().map(|&x| step[x]).collect();
                cur = next;
            }
            maps.insert((p, q), m);
        }
    }
    LatticeDiagram::new(poset.clone(), objs, maps)
}

/// ```text
/// kind = condensate
/// diagram = cones             # or `custom`, with object/map lines
/// atoms = a:12, b:123
/// target = c:12               # optional second algebra
/// map = a -> c, b -> 0        # optional morphism atoms -> target atoms
/// object 12 = chain 2         # custom diagrams: one per element of P[3]
/// map 1 12 = 0 1              # custom diagrams: element images along a cover
/// ```
pub fn parse_condensate(src: &str) -> Result<CondensateScenario> {
    let poset = IndexPoset::cube3();
    let mut diagram_name = None;
    let mut atoms = None;
    let mut target = None;
    let mut map_line = None;
    let mut objects = BTreeMap::new();
    let mut covers = BTreeMap::new();
    for (line, key, value) in entries(src)? {
        let words: Vec<&str> = key.split_whitespace().collect();
        match words.as_slice() {
            ["kind"] if value == "condensate" => {}
            ["diagram"] if value == "cones" || value == "custom" => diagram_name = Some(value.clone()),
            ["diagram"] => return Err(Error::parse(line, format!("unknown diagram `{value}`"))),
            ["atoms"] => atoms = Some((line, value.clone())),
            ["target"] => target = Some((line, value.clone())),
            ["map"] => map_line = Some((line, value.clone())),
            ["object", p] => {
                let p = poset.index(p).map_err(at(line))?;
                objects.insert(p, parse_lattice_expr(&value, line)?);
            }
            ["map", p, q] => {
                let (p, q) = (poset.index(p).map_err(at(line))?, poset.index(q).map_err(at(line))?);
                let images = value
                    .split_whitespace()
                    .map(|w| w.parse::<usize>().map_err(|_| Error::parse(line, format!("`{w}` is not an index"))))
                    .collect::<Result<Vec<_>>>()?;
                covers.insert((p, q), (line, images));
            }
            _ => return Err(Error::parse(line, format!("unknown key `{key}`"))),
        }
    }
    let diagram_name = diagram_name.ok_or_else(|| Error::parse(0, "missing `diagram`"))?;
    let diagram = if diagram_name == "cones" {
        if !objects.is_empty() || !covers.is_empty() {
            return Err(Error::parse(0, "object and map lines need `diagram = custom`"));
        }
        finite_cone_diagram()?.0
    } else {
        custom_diagram(&poset, objects, covers)?
    };
    let (line, text) = atoms.ok_or_else(|| Error::parse(0, "missing `atoms`"))?;
    let source = parse_atoms(&poset, &text, line)?;
    let morphism = match (target, map_line) {
        (None, None) => None,
        (Some((tl, tt)), Some((ml, mt))) => {
            let b = parse_atoms(&poset, &tt, tl)?;
            let mut images = vec![0u64; source.atoms.len()];
            for item in mt.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (from, to) = item
                    .split_once("->")
                    .ok_or_else(|| Error::parse(ml, format!("expected `atom -> atoms`, got `{item}`")))?;
                let k = source
                    .atoms
                    .iter()
                    .position(|a| a == from.trim())
                    .ok_or_else(|| Error::parse(ml, format!("`{}` is not a source atom", from.trim())))?;
                for t in to.split('+').map(str::trim).filter(|t| *t != "0") {
                    let j = b
                        .atoms
                        .iter()
                        .position(|a| a == t)
                        .ok_or_else(|| Error::parse(ml, format!("`{t}` is not a target atom")))?;
                    images[k] |= 1 << j;
                }
            }
            Some((b, BoolMorphism { images }))
        }
        _ => return Err(Error::parse(0, "`target` and `map` go together")),
    };
    Ok(CondensateScenario {
        diagram,
        diagram_name,
        source,
        morphism,
    })
}
