//! ASCII and SVG drawings of report operators on the lattice.

use crate::error::{Error, Result};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// An operator read back from a report, repeated along `y` with `y_period`
/// (zero for a single copy).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawnOperator {
    /// `(slot, a, b)` in the doubled slot convention.
    pub sites: Vec<(usize, i64, i64)>,
    pub y_period: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl Region {
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::ParseError(format!("bad region component `{t}`"))))
            .collect::<Result<_>>()?;
        match v[..] {
            [x0, x1, y0, y1] => Ok(Region { x0, x1, y0, y1 }),
            _ => Err(Error::ParseError("region needs four comma-separated integers x0,x1,y0,y1".into())),
        }
    }

    fn is_empty(&self) -> bool {
        self.x0 > self.x1 || self.y0 > self.y1
    }
}

fn sites_of(op: &Value) -> Vec<(usize, i64, i64)> {
    op.as_array()
        .map(|terms| {
            terms
                .iter()
                .filter_map(|t| {
                    let slot = t.get("slot")?.as_u64()? as usize;
                    let m = t.get("monomial")?.as_array()?;
                    Some((slot, m.first()?.as_i64()?, m.get(1)?.as_i64()?))
                })
                .collect()
        })
        .unwrap_or_default()
}

/// `(w, operators)` from a report: the terms of construction `index` when the
/// report has constructions, otherwise the gauge generators.
pub fn operators_from_report(report: &Value, index: usize) -> Result<(usize, Vec<DrawnOperator>)> {
    let w = report
        .pointer("/analysis/code/w")
        .or_else(|| report.pointer("/code/w"))
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::ParseError("report has no code width".into()))? as usize;
    let list = |v: &Value, key: &str| -> Vec<DrawnOperator> {
        v.as_array()
            .map(|a| {
                a.iter()
                    .map(|t| DrawnOperator { sites: sites_of(&t["operator"]), y_period: t[key].as_i64().unwrap_or(0) })
                    .collect()
            })
            .unwrap_or_default()
    };
    if let Some(cs) = report.get("constructions").and_then(Value::as_array) {
        let c = cs.get(index).ok_or_else(|| Error::ParseError(format!("report has no construction {index}")))?;
        return Ok((w, list(&c["terms"], "y_period")));
    }
    let gauge = report.pointer("/analysis/gauge/generators").or_else(|| report.pointer("/gauge/generators"));
    match gauge {
        Some(g) => Ok((w, list(g, "y_period"))),
        None => Err(Error::ParseError("report has neither constructions nor gauge generators".into())),
    }
}

/// Per-site content: bit 0 for an X part, bit 1 for a Z part.
fn occupancy(w: usize, ops: &[DrawnOperator], r: &Region) -> BTreeMap<(usize, i64, i64), u8> {
    let mut occ = BTreeMap::new();
    for op in ops {
        let Some(b0) = op.sites.iter().map(|s| s.2).min() else { continue };
        let b1 = op.sites.iter().map(|s| s.2).max().unwrap();
        let shifts: Vec<i64> = if op.y_period > 0 {
            let p = op.y_period;
            ((r.y0 - b1).div_euclid(p)..=(r.y1 - b0).div_euclid(p) + 1).map(|k| k * p).collect()
        } else {
            vec![0]
        };
        for dy in shifts {
            for &(slot, a, b) in &op.sites {
                let (s, y) = (slot % w, b + dy);
                if a >= r.x0 && a <= r.x1 && y >= r.y0 && y <= r.y1 {
                    *occ.entry((s, a, y)).or_insert(0) |= if slot < w { 1 } else { 2 };
                }
            }
        }
    }
    occ
}

fn glyph(bits: u8) -> char {
    match bits {
        1 => 'X',
        2 => 'Z',
        3 => 'M',
        _ => '.',
    }
}

/// Text drawing: one row per `y` from top to bottom, `w` characters per cell.
pub fn render_ascii(w: usize, ops: &[DrawnOperator], r: &Region) -> Result<String> {
    if r.is_empty() {
        return Err(Error::RegionEmpty);
    }
    let occ = occupancy(w, ops, r);
    let mut out = format!("# region x {}..{} y {}..{}; X, Z, M = both, . = identity\n", r.x0, r.x1, r.y0, r.y1);
    let label_width = r.y0.to_string().len().max(r.y1.to_string().len());
    for y in (r.y0..=r.y1).rev() {
        let cells: Vec<String> =
            (r.x0..=r.x1).map(|x| (0..w).map(|s| glyph(occ.get(&(s, x, y)).copied().unwrap_or(0))).collect()).collect();
        let _ = writeln!(out, "{y:>label_width$} | {}", cells.join(" "));
    }
    Ok(out)
}

const CELL: i64 = 48;
const MARGIN: i64 = 24;

fn color(bits: u8) -> &'static str {
    match bits {
        1 => "#d62728",
        2 => "#1f77b4",
        _ => "#9467bd",
    }
}

/// SVG drawing. With two slots per cell, slot 0 is the horizontal edge and
/// slot 1 the vertical edge out of each vertex; otherwise slots are dots.
pub fn render_svg(w: usize, ops: &[DrawnOperator], r: &Region) -> Result<String> {
    if r.is_empty() {
        return Err(Error::RegionEmpty);
    }
    let occ = occupancy(w, ops, r);
    let nx = r.x1 - r.x0 + 1;
    let ny = r.y1 - r.y0 + 1;
    let width = nx * CELL + 2 * MARGIN;
    let height = ny * CELL + 2 * MARGIN + 40;
    let px = |a: i64| MARGIN + (a - r.x0) * CELL;
    let py = |b: i64| MARGIN + (r.y1 - b) * CELL + CELL / 2;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#);
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for b in r.y0..=r.y1 {
        for a in r.x0..=r.x1 {
            let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="2" fill="#bbbbbb"/>"##, px(a), py(b));
        }
    }
    for (&(slot, a, b), &bits) in &occ {
        let (x, y) = (px(a), py(b));
        if w == 2 {
            let (x2, y2) = if slot == 0 { (x + CELL, y) } else { (x, y - CELL) };
            let _ = writeln!(s, r#"<line x1="{x}" y1="{y}" x2="{x2}" y2="{y2}" stroke="{}" stroke-width="5"/>"#, color(bits));
        } else {
            let cx = x + (slot as i64 + 1) * CELL / (w as i64 + 1);
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{}" r="6" fill="{}"/>"#, y - CELL / 2, color(bits));
        }
    }
    let ly = height - 20;
    for (i, (label, bits)) in [("X", 1u8), ("Z", 2), ("X and Z", 3)].iter().enumerate() {
        let lx = MARGIN + i as i64 * 90;
        let _ = writeln!(s, r#"<rect x="{lx}" y="{}" width="12" height="12" fill="{}"/>"#, ly - 10, color(*bits));
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" font-family="monospace" font-size="12">{label}</text>"#, lx + 16);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_region_is_rejected() {
        let r = Region { x0: 1, x1: 0, y0: 0, y1: 0 };
        assert_eq!(render_ascii(2, &[], &r), Err(Error::RegionEmpty));
        assert_eq!(render_svg(2, &[], &r), Err(Error::RegionEmpty));
    }

    #[test]
    fn periodic_operator_fills_column() {
        let op = DrawnOperator { sites: vec![(3, 0, 0)], y_period: 1 };
        let r = Region { x0: 0, x1: 0, y0: 0, y1: 2 };
        let text = render_ascii(2, &[op], &r).unwrap();
        assert_eq!(text.lines().filter(|l| l.ends_with(".Z")).count(), 3);
    }
}
