//! JSON payloads, LP-format emission and parsing, and SVG plots.
//!
//! JSON schemas carry a `schema` tag (`conic_set.v1`, `polyhedron_h.v1`,
//! `micp_formulation.v1`, `indexed_family.v1`) and print every rational as a
//! "p/q" string. The LP dialect is the CPLEX one: a zero objective, the rows
//! in construction order, a Bounds section declaring every variable free, and
//! a General section listing the integer variables. Rows whose numbers all
//! have terminating decimal expansions are printed as decimals; other rows
//! are scaled to integers and keep their exact rationals in a leading
//! comment, which the parser reads back so round-trips are exact.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cones::{ConicSet, ElementaryCone};
use crate::error::{Error, Result};
use crate::formulations::MicpFormulation;
use crate::polyhedron::{PolyhedronH, PolyhedronV};
use crate::rational::{
    format_rational, lcm_int, parse_integer, parse_rational, Int, Rat, RationalMatrix,
};
use crate::shapes::IndexedFamily;

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn parse_rats(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Parse(format!(
            "schema mismatch: found '{}', expected '{}'",
            found, expected
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeJson {
    pub kind: String,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConicSetJson {
    pub schema: String,
    pub ambient_dim: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    pub cones: Vec<ConeJson>,
}

impl From<&ConicSet> for ConicSetJson {
    fn from(set: &ConicSet) -> Self {
        ConicSetJson {
            schema: "conic_set.v1".to_string(),
            ambient_dim: set.ambient_dim,
            a: set.a.row_vecs().iter().map(|r| rat_strings(r)).collect(),
            b: rat_strings(&set.b),
            cones: set
                .cones
                .iter()
                .map(|c| ConeJson {
                    kind: c.kind_name().to_string(),
                    dim: c.dim(),
                })
                .collect(),
        }
    }
}

fn cone_from_json(c: &ConeJson) -> Result<ElementaryCone> {
    let cone = match c.kind.as_str() {
        "zero" => ElementaryCone::Zero(c.dim),
        "nonneg" => ElementaryCone::Nonneg(c.dim),
        "second_order" => ElementaryCone::SecondOrder(c.dim),
        "rotated_second_order" => ElementaryCone::RotatedSecondOrder(c.dim),
        other => return Err(Error::Parse(format!("unknown cone kind '{}'", other))),
    };
    cone.validate()?;
    Ok(cone)
}

impl TryFrom<&ConicSetJson> for ConicSet {
    type Error = Error;

    fn try_from(j: &ConicSetJson) -> Result<ConicSet> {
        check_schema(&j.schema, "conic_set.v1")?;
        let rows: Vec<Vec<Rat>> = j
            .a
            .iter()
            .map(|r| parse_rats(r))
            .collect::<Result<Vec<_>>>()?;
        let a = if rows.is_empty() {
            RationalMatrix::zeros(0, j.ambient_dim)
        } else {
            RationalMatrix::from_rows(rows)?
        };
        let b = parse_rats(&j.b)?;
        let cones = j
            .cones
            .iter()
            .map(cone_from_json)
            .collect::<Result<Vec<_>>>()?;
        ConicSet::new(j.ambient_dim, a, b, cones)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyhedronHJson {
    pub schema: String,
    pub dim: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<String>>,
    pub f: Vec<String>,
}

impl From<&PolyhedronH> for PolyhedronHJson {
    fn from(p: &PolyhedronH) -> Self {
        PolyhedronHJson {
            schema: "polyhedron_h.v1".to_string(),
            dim: p.dim,
            a: p.ineqs.iter().map(|(r, _)| rat_strings(r)).collect(),
            b: p.ineqs.iter().map(|(_, c)| format_rational(c)).collect(),
            e: p.eqs.iter().map(|(r, _)| rat_strings(r)).collect(),
            f: p.eqs.iter().map(|(_, c)| format_rational(c)).collect(),
        }
    }
}

impl TryFrom<&PolyhedronHJson> for PolyhedronH {
    type Error = Error;

    fn try_from(j: &PolyhedronHJson) -> Result<PolyhedronH> {
        check_schema(&j.schema, "polyhedron_h.v1")?;
        if j.a.len() != j.b.len() || j.e.len() != j.f.len() {
            return Err(Error::Parse("row/offset length mismatch".into()));
        }
        let mut ineqs = Vec::with_capacity(j.a.len());
        for (row, c) in j.a.iter().zip(&j.b) {
            ineqs.push((parse_rats(row)?, parse_rational(c)?));
        }
        let mut eqs = Vec::with_capacity(j.e.len());
        for (row, c) in j.e.iter().zip(&j.f) {
            eqs.push((parse_rats(row)?, parse_rational(c)?));
        }
        PolyhedronH::new(j.dim, ineqs, eqs)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MicpFormulationJson {
    pub schema: String,
    pub n: usize,
    pub p: usize,
    pub d: usize,
    pub set: ConicSetJson,
    pub provenance: String,
}

impl From<&MicpFormulation> for MicpFormulationJson {
    fn from(f: &MicpFormulation) -> Self {
        MicpFormulationJson {
            schema: "micp_formulation.v1".to_string(),
            n: f.n,
            p: f.p,
            d: f.d,
            set: ConicSetJson::from(&f.set),
            provenance: f.provenance.clone(),
        }
    }
}

impl TryFrom<&MicpFormulationJson> for MicpFormulation {
    type Error = Error;

    fn try_from(j: &MicpFormulationJson) -> Result<MicpFormulation> {
        check_schema(&j.schema, "micp_formulation.v1")?;
        let set = ConicSet::try_from(&j.set)?;
        MicpFormulation::new(set, j.n, j.p, j.d, j.provenance.clone())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyMemberJson {
    pub z: Vec<String>,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexedFamilyJson {
    pub schema: String,
    pub members: Vec<FamilyMemberJson>,
}

impl From<&IndexedFamily> for IndexedFamilyJson {
    fn from(fam: &IndexedFamily) -> Self {
        IndexedFamilyJson {
            schema: "indexed_family.v1".to_string(),
            members: fam
                .members
                .iter()
                .map(|(z, p)| FamilyMemberJson {
                    z: z.iter().map(|v| v.to_string()).collect(),
                    vertices: p.vertices.iter().map(|v| rat_strings(v)).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&IndexedFamilyJson> for IndexedFamily {
    type Error = Error;

    fn try_from(j: &IndexedFamilyJson) -> Result<IndexedFamily> {
        check_schema(&j.schema, "indexed_family.v1")?;
        let mut members = BTreeMap::new();
        for m in &j.members {
            let z = m
                .z
                .iter()
                .map(|s| parse_integer(s))
                .collect::<Result<Vec<Int>>>()?;
            let vertices = m
                .vertices
                .iter()
                .map(|v| parse_rats(v))
                .collect::<Result<Vec<_>>>()?;
            if members
                .insert(
                    z,
                    PolyhedronV {
                        vertices,
                        rays: Vec::new(),
                    },
                )
                .is_some()
            {
                return Err(Error::Parse("duplicate index in family".into()));
            }
        }
        IndexedFamily::new(members)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

pub fn from_json_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {}", e)))
}

fn var_name(n: usize, p: usize, col: usize) -> String {
    if col < n {
        format!("x{}", col)
    } else if col < n + p {
        format!("y{}", col - n)
    } else {
        format!("z{}", col - n - p)
    }
}

/// Exact terminating decimal expansion, if the denominator is 2^a 5^b.
fn decimal_exact(r: &Rat) -> Option<String> {
    let mut q = r.denom().clone();
    let (two, five, ten) = (Int::from(2), Int::from(5), Int::from(10));
    let mut a = 0u32;
    let mut b = 0u32;
    while (&q % &two).is_zero() {
        q /= &two;
        a += 1;
    }
    while (&q % &five).is_zero() {
        q /= &five;
        b += 1;
    }
    if !q.is_one() {
        return None;
    }
    let k = a.max(b);
    let scaled = (r.numer() * num::pow(ten, k as usize) / r.denom()).abs();
    let digits = scaled.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if k == 0 {
        return Some(format!("{}{}", sign, digits));
    }
    let digits = if digits.len() <= k as usize {
        format!("{}{}", "0".repeat(k as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - k as usize;
    Some(format!("{}{}.{}", sign, &digits[..split], &digits[split..]))
}

struct LpRow {
    coeffs: Vec<Rat>,
    op: &'static str,
    rhs: Rat,
}

fn lp_rows(f: &MicpFormulation) -> Result<Vec<LpRow>> {
    if !f.set.is_polyhedral() {
        return Err(Error::RequiresPolyhedral(
            "LP export requires polyhedral formulation".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut offset = 0usize;
    for cone in &f.set.cones {
        let op = match cone {
            ElementaryCone::Zero(_) => "=",
            ElementaryCone::Nonneg(_) => ">=",
            _ => unreachable!("checked polyhedral"),
        };
        for i in offset..offset + cone.dim() {
            rows.push(LpRow {
                coeffs: f.set.a.row(i).to_vec(),
                op,
                rhs: -&f.set.b[i],
            });
        }
        offset += cone.dim();
    }
    Ok(rows)
}

fn lp_terms(coeffs: &[Rat], names: &[String], fmt: &dyn Fn(&Rat) -> String) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push_str("- ");
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        if !mag.is_one() {
            out.push_str(&fmt(&mag));
            out.push(' ');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out = format!("0 {}", names[0]);
    }
    out
}

/// Serializes a polyhedral formulation in LP format. Errors on second-order
/// blocks.
pub fn emit_lp(f: &MicpFormulation) -> Result<String> {
    let rows = lp_rows(f)?;
    let names: Vec<String> = (0..f.ambient()).map(|j| var_name(f.n, f.p, j)).collect();
    let mut out = String::new();
    out.push_str(&format!("\\ micp formulation: {}\n", f.provenance));
    out.push_str(&format!("\\ columns: n={} p={} d={}\n", f.n, f.p, f.d));
    out.push_str("Minimize\n obj: 0\nSubject To\n");
    for (i, row) in rows.iter().enumerate() {
        let all_decimal = row
            .coeffs
            .iter()
            .chain(std::iter::once(&row.rhs))
            .all(|c| decimal_exact(c).is_some());
        if all_decimal {
            let fmt: &dyn Fn(&Rat) -> String = &|c| decimal_exact(c).expect("checked");
            out.push_str(&format!(
                " r{}: {} {} {}\n",
                i,
                lp_terms(&row.coeffs, &names, fmt),
                row.op,
                decimal_exact(&row.rhs).expect("checked")
            ));
        } else {
            let exact_fmt: &dyn Fn(&Rat) -> String = &format_rational;
            out.push_str(&format!(
                "\\ exact r{}: {} {} {}\n",
                i,
                lp_terms(&row.coeffs, &names, exact_fmt),
                row.op,
                format_rational(&row.rhs)
            ));
            let scale = row
                .coeffs
                .iter()
                .chain(std::iter::once(&row.rhs))
                .fold(Int::one(), |acc, c| lcm_int(&acc, c.denom()));
            let scale = Rat::from_integer(scale);
            let coeffs: Vec<Rat> = row.coeffs.iter().map(|c| c * &scale).collect();
            let fmt: &dyn Fn(&Rat) -> String = &|c| c.numer().to_string();
            out.push_str(&format!(
                " r{}: {} {} {}\n",
                i,
                lp_terms(&coeffs, &names, fmt),
                row.op,
                (&row.rhs * &scale).numer()
            ));
        }
    }
    out.push_str("Bounds\n");
    for name in &names {
        out.push_str(&format!(" {} free\n", name));
    }
    if f.d > 0 {
        out.push_str("General\n");
        for name in &names[f.n + f.p..] {
            out.push_str(&format!(" {}\n", name));
        }
    }
    out.push_str("End\n");
    Ok(out)
}

fn parse_lp_terms(tokens: &[&str], columns: &BTreeMap<String, usize>) -> Result<(Vec<Rat>, Rat)> {
    let mut coeffs = vec![Rat::zero(); columns.len()];
    let mut idx = 0usize;
    let mut sign = Rat::one();
    let mut pending: Option<Rat> = None;
    let mut op_at = None;
    for (i, tok) in tokens.iter().enumerate() {
        if *tok == "=" || *tok == ">=" || *tok == "<=" {
            op_at = Some(i);
            break;
        }
        idx = i + 1;
        match *tok {
            "+" => sign = Rat::one(),
            "-" => sign = -Rat::one(),
            _ => {
                if let Some(&col) = columns.get(*tok) {
                    let c = pending.take().unwrap_or_else(Rat::one) * &sign;
                    coeffs[col] = &coeffs[col] + c;
                    sign = Rat::one();
                } else {
                    let v = parse_rational(tok)?;
                    if pending.replace(v).is_some() {
                        return Err(Error::Parse(format!(
                            "two consecutive numbers near '{}'",
                            tok
                        )));
                    }
                }
            }
        }
    }
    let op_at = op_at.ok_or_else(|| Error::Parse("row without comparison".into()))?;
    if idx != op_at || pending.is_some() {
        return Err(Error::Parse("dangling coefficient before comparison".into()));
    }
    if op_at + 1 >= tokens.len() {
        return Err(Error::Parse("missing right-hand side".into()));
    }
    let rhs = parse_rational(tokens[op_at + 1])?;
    Ok((coeffs, rhs))
}

/// Parses the LP dialect produced by [`emit_lp`]. Exact-row comments are
/// honored, so a parse of an emitted file reproduces the formulation.
pub fn parse_lp(text: &str) -> Result<MicpFormulation> {
    let mut provenance = String::from("lp_import");
    let mut dims: Option<(usize, usize, usize)> = None;
    let mut exact: BTreeMap<String, String> = BTreeMap::new();
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut general: Vec<String> = Vec::new();
    let mut bounds_names: Vec<String> = Vec::new();
    let mut section = "";

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('\\') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("micp formulation:") {
                provenance = v.trim().to_string();
            } else if let Some(v) = comment.strip_prefix("columns:") {
                let mut n = None;
                let mut p = None;
                let mut d = None;
                for part in v.split_whitespace() {
                    if let Some((k, val)) = part.split_once('=') {
                        let val: usize = val
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad column count '{}'", part)))?;
                        match k {
                            "n" => n = Some(val),
                            "p" => p = Some(val),
                            "d" => d = Some(val),
                            _ => {}
                        }
                    }
                }
                if let (Some(n), Some(p), Some(d)) = (n, p, d) {
                    dims = Some((n, p, d));
                }
            } else if let Some(v) = comment.strip_prefix("exact ") {
                if let Some((name, body)) = v.split_once(':') {
                    exact.insert(name.trim().to_string(), body.trim().to_string());
                }
            }
            continue;
        }
        let lower = line.to_ascii_lowercase();
        match lower.as_str() {
            "minimize" | "maximize" => {
                section = "objective";
                continue;
            }
            "subject to" | "st" | "s.t." => {
                section = "rows";
                continue;
            }
            "bounds" => {
                section = "bounds";
                continue;
            }
            "general" | "generals" | "integer" => {
                section = "general";
                continue;
            }
            "end" => break,
            _ => {}
        }
        match section {
            "objective" => {}
            "rows" => {
                let (name, body) = line
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("row without name: '{}'", line)))?;
                rows.push((name.trim().to_string(), body.trim().to_string()));
            }
            "bounds" => {
                if let Some(name) = line.strip_suffix("free") {
                    bounds_names.push(name.trim().to_string());
                } else {
                    return Err(Error::Parse(format!("unsupported bound '{}'", line)));
                }
            }
            "general" => general.push(line.to_string()),
            _ => return Err(Error::Parse(format!("unexpected line '{}'", line))),
        }
    }

    let (n, p, d) = match dims {
        Some(t) => t,
        None => {
            // Fall back on the Bounds listing: count each name family.
            let count = |prefix: char| {
                bounds_names
                    .iter()
                    .filter_map(|s| {
                        s.strip_prefix(prefix)
                            .and_then(|rest| rest.parse::<usize>().ok())
                    })
                    .map(|i| i + 1)
                    .max()
                    .unwrap_or(0)
            };
            (count('x'), count('y'), count('z'))
        }
    };
    let ambient = n + p + d;
    if ambient == 0 {
        return Err(Error::Parse("no variables declared".into()));
    }
    let columns: BTreeMap<String, usize> = (0..ambient)
        .map(|j| (var_name(n, p, j), j))
        .collect();
    for g in &general {
        if !columns.contains_key(g) {
            return Err(Error::Parse(format!("unknown integer variable '{}'", g)));
        }
        if !g.starts_with('z') {
            return Err(Error::Parse(format!(
                "integer variable '{}' outside the z block",
                g
            )));
        }
    }

    let mut a_rows: Vec<Vec<Rat>> = Vec::new();
    let mut b: Vec<Rat> = Vec::new();
    let mut cones: Vec<ElementaryCone> = Vec::new();
    for (name, body) in &rows {
        let source = exact.get(name).unwrap_or(body);
        let tokens: Vec<&str> = source.split_whitespace().collect();
        let op = tokens
            .iter()
            .find(|t| **t == "=" || **t == ">=" || **t == "<=")
            .copied()
            .ok_or_else(|| Error::Parse(format!("row '{}' has no comparison", name)))?;
        let (mut coeffs, mut rhs) = parse_lp_terms(&tokens, &columns)?;
        if op == "<=" {
            for c in &mut coeffs {
                *c = -&*c;
            }
            rhs = -rhs;
        }
        // Back to conic convention: a . v + b in cone, b = -rhs.
        a_rows.push(coeffs);
        b.push(-rhs);
        cones.push(if op == "=" {
            ElementaryCone::Zero(1)
        } else {
            ElementaryCone::Nonneg(1)
        });
    }

    let a = if a_rows.is_empty() {
        RationalMatrix::zeros(0, ambient)
    } else {
        RationalMatrix::from_rows(a_rows)?
    };
    let set = ConicSet::new(ambient, a, b, cones)?;
    MicpFormulation::new(set, n, p, d, provenance)
}

const SVG_PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948", "#9c755f",
];

/// Renders a two-dimensional family as an SVG plot, one filled polygon per
/// member, colors cycling through a fixed palette in index order.
pub fn render_family_svg(fam: &IndexedFamily) -> Result<String> {
    let mut polygons: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut min = (f64::INFINITY, f64::INFINITY);
    let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (z, poly) in &fam.members {
        let hull = crate::shapes::hull_vertices(&poly.vertices)?;
        if hull.first().map(|v| v.len()) != Some(2) {
            return Err(Error::Invalid(
                "SVG rendering needs a two-dimensional family".into(),
            ));
        }
        let mut pts: Vec<(f64, f64)> = hull
            .iter()
            .map(|v| {
                (
                    v[0].numer().to_string().parse::<f64>().unwrap()
                        / v[0].denom().to_string().parse::<f64>().unwrap(),
                    v[1].numer().to_string().parse::<f64>().unwrap()
                        / v[1].denom().to_string().parse::<f64>().unwrap(),
                )
            })
            .collect();
        let c = pts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        let c = (c.0 / pts.len() as f64, c.1 / pts.len() as f64);
        pts.sort_by(|u, v| {
            let au = (u.1 - c.1).atan2(u.0 - c.0);
            let av = (v.1 - c.1).atan2(v.0 - c.0);
            au.partial_cmp(&av).expect("finite angles")
        });
        for p in &pts {
            min.0 = min.0.min(p.0);
            min.1 = min.1.min(p.1);
            max.0 = max.0.max(p.0);
            max.1 = max.1.max(p.1);
        }
        let label = format!(
            "z = [{}]",
            z.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        polygons.push((label, pts));
    }

    let pad = 0.05 * ((max.0 - min.0).max(max.1 - min.1)).max(1.0);
    let (x0, y0) = (min.0 - pad, min.1 - pad);
    let (w, h) = (max.0 - min.0 + 2.0 * pad, max.1 - min.1 + 2.0 * pad);
    let flip = |y: f64| y0 + h - (y - y0);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"{:.0}\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\">\n",
        (640.0 * h / w).round(),
        x0,
        y0,
        w,
        h
    ));
    for (i, (label, pts)) in polygons.iter().enumerate() {
        let color = SVG_PALETTE[i % SVG_PALETTE.len()];
        let coords = pts
            .iter()
            .map(|p| format!("{:.4},{:.4}", p.0, flip(p.1)))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.35\" stroke=\"{}\" stroke-width=\"{:.4}\"><title>{}</title></polygon>\n",
            coords,
            color,
            color,
            w / 320.0,
            label
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::ConicBuilder;
    use crate::fixtures;
    use crate::rational::{int, rat, rint};

    #[test]
    fn conic_set_json_roundtrip() {
        let set = fixtures::dense_sqrt2().unwrap().set;
        let text = to_json_string(&ConicSetJson::from(&set));
        let parsed: ConicSetJson = from_json_str(&text).unwrap();
        assert_eq!(ConicSet::try_from(&parsed).unwrap(), set);
    }

    #[test]
    fn formulation_json_roundtrip() {
        let f = fixtures::parity_cube(3).unwrap();
        let text = to_json_string(&MicpFormulationJson::from(&f));
        let parsed: MicpFormulationJson = from_json_str(&text).unwrap();
        let g = MicpFormulation::try_from(&parsed).unwrap();
        assert_eq!((g.n, g.p, g.d), (f.n, f.p, f.d));
        assert_eq!(g.set, f.set);
        assert_eq!(g.provenance, f.provenance);
    }

    #[test]
    fn schema_tags_are_checked() {
        let f = fixtures::parity_cube(2).unwrap();
        let mut j = MicpFormulationJson::from(&f);
        j.schema = "micp_formulation.v2".to_string();
        assert!(matches!(
            MicpFormulation::try_from(&j),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn polyhedron_json_roundtrip() {
        let p = PolyhedronH::new(
            2,
            vec![
                (vec![rint(1), rint(0)], rint(1)),
                (vec![rint(0), rint(1)], rat(5, 3)),
            ],
            vec![(vec![rint(1), rint(-1)], rint(0))],
        )
        .unwrap();
        let text = to_json_string(&PolyhedronHJson::from(&p));
        let parsed: PolyhedronHJson = from_json_str(&text).unwrap();
        assert_eq!(PolyhedronH::try_from(&parsed).unwrap(), p);
    }

    #[test]
    fn family_json_roundtrip() {
        let square = |o: i64| PolyhedronV {
            vertices: vec![
                vec![rint(o), rint(0)],
                vec![rint(o + 1), rint(0)],
                vec![rint(o), rint(1)],
                vec![rint(o + 1), rint(1)],
            ],
            rays: Vec::new(),
        };
        let fam = IndexedFamily::new(
            [(vec![int(0)], square(0)), (vec![int(2)], square(2))]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let text = to_json_string(&IndexedFamilyJson::from(&fam));
        let parsed: IndexedFamilyJson = from_json_str(&text).unwrap();
        let back = IndexedFamily::try_from(&parsed).unwrap();
        assert_eq!(back.members.len(), 2);
        assert_eq!(
            back.members[&vec![int(2)]].vertices,
            fam.members[&vec![int(2)]].vertices
        );
    }

    #[test]
    fn lp_emission_is_pinned() {
        let f = fixtures::parity_cube(2).unwrap();
        let expected = "\\ micp formulation: parity_cube(n=2)\n\
                        \\ columns: n=2 p=0 d=1\n\
                        Minimize\n obj: 0\n\
                        Subject To\n r0: x0 + x1 - 2 z0 = 0\n\
                        Bounds\n x0 free\n x1 free\n z0 free\n\
                        General\n z0\n\
                        End\n";
        assert_eq!(emit_lp(&f).unwrap(), expected);
    }

    #[test]
    fn lp_roundtrip_with_fractional_rows() {
        let mut b = ConicBuilder::new(3);
        b.nonneg_row(&[(0, rat(1, 3)), (1, rint(1))], rat(-2, 5));
        b.zero_row(&[(0, rat(1, 2)), (2, rint(-1))], Rat::zero());
        b.nonneg_row(&[(1, rat(7, 10))], rint(2));
        let f = MicpFormulation::new(b.build(), 1, 1, 1, "fractional rows").unwrap();

        let text = emit_lp(&f).unwrap();
        assert!(text.contains("\\ exact r0: 1/3 x0 + y0 >= 2/5\n"));
        assert!(text.contains(" r0: 5 x0 + 15 y0 >= 6\n"));
        assert!(text.contains(" r1: 0.5 x0 - z0 = 0\n"));
        assert!(text.contains(" r2: 0.7 y0 >= -2\n"));

        let g = parse_lp(&text).unwrap();
        assert_eq!((g.n, g.p, g.d), (f.n, f.p, f.d));
        assert_eq!(g.set, f.set);
        assert_eq!(g.provenance, f.provenance);
    }

    #[test]
    fn lp_rejects_conic_formulations() {
        let f = fixtures::hyperbola().unwrap();
        let err = emit_lp(&f).unwrap_err();
        assert!(err
            .to_string()
            .contains("LP export requires polyhedral formulation"));
    }

    #[test]
    fn lp_parse_handles_le_rows() {
        let text = "\\ columns: n=1 p=0 d=1\n\
                    Minimize\n obj: 0\n\
                    Subject To\n r0: x0 - 3 z0 <= 2\n\
                    Bounds\n x0 free\n z0 free\n\
                    General\n z0\nEnd\n";
        let f = parse_lp(text).unwrap();
        assert_eq!(f.set.cones, vec![ElementaryCone::Nonneg(1)]);
        assert_eq!(f.set.a.row(0), &[rint(-1), rint(3)]);
        assert_eq!(f.set.b[0], rint(2));
    }

    #[test]
    fn svg_renders_two_member_family() {
        let tri = PolyhedronV {
            vertices: vec![
                vec![rint(0), rint(0)],
                vec![rint(2), rint(0)],
                vec![rint(0), rint(2)],
                vec![rat(1, 2), rat(1, 2)],
            ],
            rays: Vec::new(),
        };
        let square = PolyhedronV {
            vertices: vec![
                vec![rint(3), rint(0)],
                vec![rint(4), rint(0)],
                vec![rint(4), rint(1)],
                vec![rint(3), rint(1)],
            ],
            rays: Vec::new(),
        };
        let fam = IndexedFamily::new(
            [(vec![int(0)], tri), (vec![int(1)], square)]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let svg = render_family_svg(&fam).unwrap();
        assert!(svg.starts_with("<svg "));
        assert_eq!(svg.matches("<polygon").count(), 2);
        // The interior point of the triangle is not a hull vertex.
        assert_eq!(svg.matches("0.5000").count(), 0);
        assert_eq!(render_family_svg(&fam).unwrap(), svg);
    }
}
