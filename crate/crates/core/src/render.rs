//! SVG 1.1 output: chip layouts with chains, and line charts of bench rows.
//!
//! Rendering only reads its inputs.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::bench::{BenchRow, Method};
use crate::chimera::{HardwareGraph, QubitCoord, QubitId, Shore};
use crate::embedding::Embedding;

const PAD: f64 = 20.0;

fn legend(method: &str) -> String {
    match method.parse::<Method>() {
        Ok(m) => esc(m.title()),
        Err(_) => esc(method),
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Well-separated colour for chain `i` (golden-angle hue walk).
fn colour(i: usize) -> String {
    let h = (i as f64 * 137.507_764) % 360.0;
    let (s, l) = (0.65, if i.is_multiple_of(2) { 0.42 } else { 0.55 });
    let c = (1.0 - (2.0 * l - 1.0f64).abs()) * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let (r, g, b) = match (h / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let byte = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b))
}

struct Geometry {
    cell: f64,
    gap: f64,
}

impl Geometry {
    fn new(l: usize) -> Self {
        let gap = 10.0;
        Self {
            cell: gap * (l as f64 + 1.0) + 8.0,
            gap,
        }
    }

    /// V qubits stand in a column on the left of the cell, H qubits on the right.
    fn point(&self, c: QubitCoord) -> (f64, f64) {
        let x0 = PAD + c.col as f64 * self.cell;
        let y0 = PAD + c.row as f64 * self.cell;
        let x = match c.shore {
            Shore::V => x0 + self.cell * 0.3,
            Shore::H => x0 + self.cell * 0.7,
        };
        (x, y0 + 4.0 + self.gap * (c.wire as f64 + 1.0))
    }
}

/// Chip drawing: cell grid, qubits as dots, chains coloured per variable, dead qubits crossed out.
pub fn render_chip(hw: &HardwareGraph, emb: Option<&Embedding>) -> String {
    let spec = hw.spec();
    let geo = Geometry::new(spec.shore_size);
    let width = 2.0 * PAD + spec.cols as f64 * geo.cell;
    let height = 2.0 * PAD + spec.rows as f64 * geo.cell + 20.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">
<rect width="100%" height="100%" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r##"<g id="cells" fill="none" stroke="#cccccc" stroke-width="1">"##
    );
    for row in 0..spec.rows {
        for col in 0..spec.cols {
            let _ = writeln!(
                out,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}"/>"#,
                PAD + col as f64 * geo.cell + 1.0,
                PAD + row as f64 * geo.cell + 1.0,
                geo.cell - 2.0,
                geo.cell - 2.0
            );
        }
    }
    out.push_str("</g>\n");

    let mut owner: HashMap<QubitId, usize> = HashMap::new();
    if let Some(e) = emb {
        out.push_str("<g id=\"chains\" stroke-width=\"2\">\n");
        for (i, (label, chain)) in e.iter().enumerate() {
            let members: HashSet<QubitId> = chain.iter().copied().collect();
            let col = colour(i);
            let _ = writeln!(out, r#"<g stroke="{col}"><title>{}</title>"#, esc(label));
            for &q in chain {
                owner.insert(q, i);
                if !spec.contains(q) {
                    continue;
                }
                for &p in hw.neighbors(q).unwrap_or(&[]) {
                    if p > q && members.contains(&p) {
                        let (x1, y1) = geo.point(spec.coord(q));
                        let (x2, y2) = geo.point(spec.coord(p));
                        let _ = writeln!(
                            out,
                            r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}"/>"#
                        );
                    }
                }
            }
            out.push_str("</g>\n");
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g id=\"qubits\">\n");
    let labels: Vec<&str> = emb.map(|e| e.labels().collect()).unwrap_or_default();
    for q in (0..spec.num_qubits() as u32).map(QubitId) {
        let (x, y) = geo.point(spec.coord(q));
        if !hw.is_operable(q) {
            let d = 3.5;
            let _ = writeln!(
                out,
                r##"<path class="dead" d="M{:.1},{:.1}L{:.1},{:.1}M{:.1},{:.1}L{:.1},{:.1}" stroke="#d00000" stroke-width="2"><title>dead {q}</title></path>"##,
                x - d,
                y - d,
                x + d,
                y + d,
                x - d,
                y + d,
                x + d,
                y - d
            );
        } else if let Some(&i) = owner.get(&q) {
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.1}" cy="{y:.1}" r="3.5" fill="{}"><title>{q} {}</title></circle>"#,
                colour(i),
                esc(labels[i])
            );
        } else {
            let _ = writeln!(
                out,
                r##"<circle cx="{x:.1}" cy="{y:.1}" r="2" fill="#bbbbbb"/>"##
            );
        }
    }
    out.push_str("</g>\n");
    let caption = match emb {
        Some(e) => format!(
            "{spec}: {} chains, {} qubits, {} dead",
            e.len(),
            e.qubit_total(),
            hw.dead_qubits().len()
        ),
        None => format!("{spec}: {} dead", hw.dead_qubits().len()),
    };
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{:.0}" font-family="sans-serif" font-size="12">{}</text>"#,
        height - 8.0,
        esc(&caption)
    );
    out.push_str("</svg>\n");
    out
}

/// Mean of `metric` per `(method, n)`, averaged over fault seeds.
fn series(rows: &[BenchRow], metric: fn(&BenchRow) -> f64) -> BTreeMap<String, Vec<(f64, f64)>> {
    let mut acc: BTreeMap<(String, usize), (f64, usize)> = BTreeMap::new();
    for r in rows {
        let slot = acc.entry((r.method.clone(), r.n)).or_default();
        slot.0 += metric(r);
        slot.1 += 1;
    }
    let mut out: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for ((method, n), (sum, count)) in acc {
        out.entry(method)
            .or_default()
            .push((n as f64, sum / count as f64));
    }
    out
}

fn panel(
    out: &mut String,
    title: &str,
    data: &BTreeMap<String, Vec<(f64, f64)>>,
    origin: (f64, f64),
    size: (f64, f64),
) {
    let (ox, oy) = origin;
    let (w, h) = size;
    let pts = data.values().flatten();
    let xmin = pts.clone().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = pts.clone().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let ymax = pts.map(|p| p.1).fold(0.0, f64::max).max(1e-9);
    let xspan = (xmax - xmin).max(1.0);
    let sx = |x: f64| ox + 50.0 + (x - xmin) / xspan * (w - 70.0);
    let sy = |y: f64| oy + h - 30.0 - y / ymax * (h - 60.0);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        ox + w / 2.0,
        oy + 16.0,
        esc(title)
    );
    let _ = writeln!(
        out,
        r##"<path d="M{:.1},{:.1}V{:.1}H{:.1}" fill="none" stroke="#333333"/>"##,
        sx(xmin),
        sy(ymax),
        sy(0.0),
        sx(xmax)
    );
    for t in 0..=4 {
        let y = ymax * t as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            sx(xmin) - 4.0,
            sy(y) + 3.0,
            trim(y)
        );
    }
    let ns: Vec<f64> = {
        let mut v: Vec<f64> = data.values().flatten().map(|p| p.0).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let every = ns.len().div_ceil(12).max(1);
    for x in ns.iter().step_by(every) {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            sx(*x),
            sy(0.0) + 14.0,
            trim(*x)
        );
    }
    for (i, (method, pts)) in data.iter().enumerate() {
        let col = colour(i);
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="series" points="{}" fill="none" stroke="{col}" stroke-width="2"><title>{}</title></polyline>"#,
            path.join(" "),
            legend(method)
        );
        for &(x, y) in pts {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{col}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = oy + 30.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" font-family="sans-serif" font-size="11" fill="{col}">{}</text>"#,
            ox + w - 110.0,
            legend(method)
        );
    }
}

fn trim(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Two side-by-side line charts over `n`: success rate and mean qubit count per method.
pub fn render_plot(rows: &[BenchRow]) -> String {
    let (w, h) = (420.0, 300.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{h:.0}" viewBox="0 0 {:.0} {h:.0}">
<rect width="100%" height="100%" fill="white"/>"#,
        2.0 * w,
        2.0 * w
    );
    if !rows.is_empty() {
        panel(
            &mut out,
            "success rate vs n",
            &series(rows, |r| r.success),
            (0.0, 0.0),
            (w, h),
        );
        let used: Vec<BenchRow> = rows.iter().filter(|r| r.success > 0.0).cloned().collect();
        panel(
            &mut out,
            "qubits used vs n",
            &series(&used, |r| r.qubits),
            (w, 0.0),
            (w, h),
        );
    }
    out.push_str("</svg>\n");
    out
}
