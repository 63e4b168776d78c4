//! SVG pictures of the 2-simplex section of `(Q⁺)³`.
//!
//! A point `⟨x,y,z⟩` sits at the barycentre of the vertices with weights
//! `x, y, z`. The cylinder `C_ij` meets the simplex in wedges from the
//! opposite vertex `k` to the segments of the edge `ij` where the ratio
//! `x_j/x_i` lies in `U_ij`; those segments are drawn thick.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use cevian_core::ceva::CevaInput;
use cevian_core::ratcore::{int, ExtRat, Rat, RatioSet};

const VERTICES: [(i64, i64); 3] = [(60, 460), (540, 460), (300, 60)];
const COLORS: [&str; 3] = ["#d95f02", "#1b9e77", "#7570b3"];

/// Screen position of a nonzero homogeneous point.
fn place(h: &[Rat; 3]) -> (Rat, Rat) {
    let total: Rat = h.iter().sum();
    let mut x = Rat::zero();
    let mut y = Rat::zero();
    for (w, &(vx, vy)) in h.iter().zip(VERTICES.iter()) {
        x += w * int(vx);
        y += w * int(vy);
    }
    (x / &total, y / total)
}

/// The point of edge `ij` with ratio `x_j/x_i = t`; `∞` is vertex `j`.
fn edge_point(i: usize, j: usize, t: &ExtRat) -> [Rat; 3] {
    let mut h = [Rat::zero(), Rat::zero(), Rat::zero()];
    match t.finite() {
        Some(q) => {
            h[i] = Rat::one();
            h[j] = q.clone();
        }
        None => h[j] = Rat::one(),
    }
    h
}

struct Decimals {
    approximate: usize,
}

impl Decimals {
    /// Exact when the denominator divides a power of ten, otherwise rounded
    /// to 12 significant digits and counted.
    fn fmt(&mut self, q: &Rat) -> String {
        let mut d = q.denom().clone();
        let mut digits = 0u32;
        for p in [2u32, 5] {
            let p = BigInt::from(p);
            while (&d % &p).is_zero() {
                d /= &p;
            }
        }
        if d.is_one() {
            let mut scaled = q.clone();
            while !scaled.is_integer() {
                scaled *= int(10);
                digits += 1;
            }
            return place_point(&scaled.to_integer(), digits);
        }
        self.approximate += 1;
        let int_digits = q.abs().to_integer().to_string().len() as u32;
        let frac = 12u32.saturating_sub(int_digits);
        let scale = BigInt::from(10).pow(frac);
        let scaled = q * Rat::from_integer(scale);
        let (n, d) = (scaled.numer().clone(), scaled.denom().clone());
        let (mut quo, rem) = n.div_rem(&d);
        if rem.abs() * 2 >= d {
            quo += if n.is_negative() { -1 } else { 1 };
        }
        place_point(&quo, frac)
    }
}

fn place_point(n: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let mut out = if digits == 0 {
        s
    } else {
        let pad = (digits as usize + 1).saturating_sub(s.len());
        let s = "0".repeat(pad) + &s;
        let (a, b) = s.split_at(s.len() - digits as usize);
        let b = b.trim_end_matches('0');
        if b.is_empty() {
            a.to_string()
        } else {
            format!("{a}.{b}")
        }
    };
    if neg && out != "0" {
        out.insert(0, '-');
    }
    out
}

fn label(h: &[Rat; 3]) -> String {
    format!("⟨{},{},{}⟩", h[0], h[1], h[2])
}

fn set_of<'a>(input: &'a CevaInput, i: usize, j: usize) -> &'a RatioSet {
    match (i, j) {
        (0, 1) => &input.u12,
        (1, 2) => &input.u23,
        _ => &input.u13,
    }
}

/// Renders the input; `conclusion` adds the three cevians through
/// `⟨1,x,xy⟩`.
pub fn plot_ceva(input: &CevaInput, conclusion: Option<(Rat, Rat)>) -> String {
    let mut dec = Decimals { approximate: 0 };
    let mut body = String::new();
    let pt = |dec: &mut Decimals, h: &[Rat; 3]| {
        let (x, y) = place(h);
        (dec.fmt(&x), dec.fmt(&y))
    };
    let corners: Vec<[Rat; 3]> = (0..3)
        .map(|k| {
            let mut h = [Rat::zero(), Rat::zero(), Rat::zero()];
            h[k] = Rat::one();
            h
        })
        .collect();
    let poly: Vec<String> = corners
        .iter()
        .map(|h| {
            let (x, y) = pt(&mut dec, h);
            format!("{x},{y}")
        })
        .collect();

    let mut labels: Vec<[Rat; 3]> = corners.clone();
    for (c, (i, j, k)) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)].into_iter().enumerate() {
        for iv in set_of(input, i, j).intervals() {
            let (a, b) = (edge_point(i, j, &iv.lo), edge_point(i, j, &iv.hi));
            let (ax, ay) = pt(&mut dec, &a);
            let (bx, by) = pt(&mut dec, &b);
            let (kx, ky) = pt(&mut dec, &corners[k]);
            body.push_str(&format!(
                "  <polygon points=\"{kx},{ky} {ax},{ay} {bx},{by}\" fill=\"{}\" fill-opacity=\"0.18\" stroke=\"none\"/>\n",
                COLORS[c]
            ));
            body.push_str(&format!(
                "  <line x1=\"{ax}\" y1=\"{ay}\" x2=\"{bx}\" y2=\"{by}\" stroke=\"{}\" stroke-width=\"6\" stroke-linecap=\"round\"/>\n",
                COLORS[c]
            ));
            for h in [a, b] {
                if !labels.contains(&h) {
                    labels.push(h);
                }
            }
        }
    }

    if let Some((x, y)) = conclusion {
        let feet = [
            ([Rat::one(), x.clone(), Rat::zero()], 2),
            ([Rat::zero(), Rat::one(), y.clone()], 0),
            ([Rat::one(), Rat::zero(), &x * &y], 1),
        ];
        for (foot, k) in feet {
            let (fx, fy) = pt(&mut dec, &foot);
            let (kx, ky) = pt(&mut dec, &corners[k]);
            body.push_str(&format!(
                "  <line x1=\"{kx}\" y1=\"{ky}\" x2=\"{fx}\" y2=\"{fy}\" stroke=\"#333\" stroke-width=\"1.5\"/>\n"
            ));
            if !labels.contains(&foot) {
                labels.push(foot);
            }
        }
        let centre = [Rat::one(), x.clone(), &x * &y];
        let (cx, cy) = pt(&mut dec, &centre);
        body.push_str(&format!("  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"4\" fill=\"#333\"/>\n"));
        labels.push(centre);
    }

    for h in &labels {
        let (x, y) = pt(&mut dec, h);
        body.push_str(&format!(
            "  <text x=\"{x}\" y=\"{y}\" dx=\"6\" dy=\"-6\" font-family=\"serif\" font-size=\"13\">{}</text>\n",
            label(h)
        ));
    }

    let mut out = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"520\" viewBox=\"0 0 600 520\">\n");
    if dec.approximate > 0 {
        out.push_str(&format!(
            "  <!-- approximate: {} coordinates rounded to 12 significant digits -->\n",
            dec.approximate
        ));
    }
    out.push_str(&format!(
        "  <polygon points=\"{}\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\"/>\n",
        poly.join(" ")
    ));
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}
