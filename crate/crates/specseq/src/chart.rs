//! Deterministic SVG charts: glyphs at `(t − s, s)`, differentials as
//! arrows of slope `r`, and `η`-lines on the integer sheet.

use std::collections::BTreeMap;
use std::fmt::Write;

use specseq_core::abgroup::AbGroup;
use specseq_core::hfpss::{Arrow, Key, Level, Sheet, PERIOD};
use specseq_core::mackey;
use specseq_core::mono::{normalize, parse_mono, top_generator};
use specseq_core::picss::OrderBound;

const CELL: i64 = 24;
const MARGIN: i64 = 40;

/// Glyph shape and fill for a dictionary name.
fn glyph(name: &str) -> (&'static str, bool) {
    let filled = name.contains("blk") || name.contains("black");
    let shape = if name.contains("circle") || name.contains("bullet") {
        "circle"
    } else if name.contains("square") || name.contains("box") {
        "square"
    } else if name.contains("triangle") {
        "triangle"
    } else {
        "unknown"
    };
    (shape, filled)
}

struct Canvas {
    width: i64,
    height: i64,
    cols: i64,
    rows: i64,
    body: String,
}

impl Canvas {
    fn new(cols: i64, rows: i64) -> Self {
        Canvas { width: 2 * MARGIN + cols * CELL, height: 2 * MARGIN + rows * CELL, cols, rows, body: String::new() }
    }

    fn pos(&self, x: i64, y: i64) -> (i64, i64) {
        (MARGIN + x * CELL + CELL / 2, self.height - MARGIN - y * CELL - CELL / 2)
    }

    fn axes(&mut self, x_label: &str, y_label: &str) {
        let (w, h) = (self.width, self.height);
        let b = &mut self.body;
        let _ = writeln!(b, r##"<g stroke="#ddd" stroke-width="1">"##);
        for i in 0..=self.cols {
            let x = MARGIN + i * CELL;
            let _ = writeln!(b, r#"<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{}"/>"#, h - MARGIN);
        }
        for j in 0..=self.rows {
            let y = MARGIN + j * CELL;
            let _ = writeln!(b, r#"<line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}"/>"#, w - MARGIN);
        }
        let _ = writeln!(b, "</g>");
        let _ = writeln!(b, r#"<g font-size="9" text-anchor="middle">"#);
        for i in (0..self.cols).step_by(4) {
            let x = MARGIN + i * CELL + CELL / 2;
            let _ = writeln!(b, r#"<text x="{x}" y="{}">{i}</text>"#, h - MARGIN + 12);
        }
        for j in (0..self.rows).step_by(2) {
            let y = h - MARGIN - j * CELL - CELL / 2 + 3;
            let _ = writeln!(b, r#"<text x="{}" y="{y}">{j}</text>"#, MARGIN - 10);
        }
        let _ = writeln!(b, r#"<text x="{}" y="{}">{x_label}</text>"#, w / 2, h - 8);
        let _ = writeln!(b, r#"<text x="12" y="{}" transform="rotate(-90 12 {})">{y_label}</text>"#, h / 2, h / 2);
        let _ = writeln!(b, "</g>");
    }

    fn glyph(&mut self, x: i64, y: i64, name: &str, tooltip: &str) {
        let (cx, cy) = self.pos(x, y);
        let (shape, filled) = glyph(name);
        let fill = if filled { "black" } else { "white" };
        let b = &mut self.body;
        let _ = write!(b, r#"<g class="glyph" data-name="{name}"><title>{tooltip}</title>"#);
        let _ = match shape {
            "circle" => write!(b, r#"<circle cx="{cx}" cy="{cy}" r="6" fill="{fill}" stroke="black"/>"#),
            "square" => write!(b, r#"<rect x="{}" y="{}" width="12" height="12" fill="{fill}" stroke="black"/>"#, cx - 6, cy - 6),
            "triangle" => write!(
                b,
                r#"<polygon points="{},{} {},{} {},{}" fill="{fill}" stroke="black"/>"#,
                cx - 6,
                cy - 5,
                cx + 6,
                cy - 5,
                cx,
                cy + 6
            ),
            _ => write!(
                b,
                r#"<rect x="{}" y="{}" width="16" height="12" fill="white" stroke="red"/><text x="{cx}" y="{}" font-size="7" text-anchor="middle">?</text>"#,
                cx - 8,
                cy - 6,
                cy + 3
            ),
        };
        let _ = writeln!(b, "</g>");
    }

    fn line(&mut self, from: (i64, i64), to: (i64, i64), style: &str) {
        let (x1, y1) = self.pos(from.0, from.1);
        let (x2, y2) = self.pos(to.0, to.1);
        let _ = writeln!(self.body, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>"#);
    }

    fn finish(self, title: &str, hash: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(s, "<!-- config {hash} -->");
        let _ = writeln!(
            s,
            r##"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="#1f4e9c"/></marker></defs>"##
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="20" font-size="13" text-anchor="middle">{title}</text>"#, self.width / 2);
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

fn stem(k: &Key) -> i64 {
    (k.t - k.s as i64).rem_euclid(PERIOD)
}

/// True when `η` times the generator at `(s, t)` is a nonzero multiple of
/// the generator at `(s + 1, t + 2)`.
fn eta_line(s: usize, t: i64, depth: usize) -> bool {
    let (Some((g, _)), Some((h, _))) = (top_generator(s, t), top_generator(s + 1, t + 2)) else { return false };
    let eta = parse_mono("eta").expect("generator name");
    let Some(m) = g.mul(&eta) else { return false };
    match normalize(&m, depth) {
        Some((c, n, _)) => n == h && c.c.iter().any(|x| *x != 0),
        None => false,
    }
}

/// Chart of one sheet of the homotopy fixed point spectral sequence,
/// reading each `(s, t)` as a Mackey functor over the three levels.
pub fn hfpss_chart(
    groups: &BTreeMap<Key, AbGroup>,
    arrows: &[Arrow],
    sheet: Sheet,
    s_max: usize,
    title: &str,
    hash: &str,
    n: usize,
) -> String {
    let mut c = Canvas::new(PERIOD, s_max as i64 + 1);
    c.axes("t - s (mod 32)", "s");
    let mut cells: BTreeMap<(usize, i64), [AbGroup; 3]> = BTreeMap::new();
    for (k, g) in groups {
        if k.sheet != sheet || k.s > s_max {
            continue;
        }
        let e = cells.entry((k.s, k.t)).or_insert_with(|| [AbGroup::zero(), AbGroup::zero(), AbGroup::zero()]);
        e[k.level.index()] = g.clone();
    }
    cells.retain(|_, v| v.iter().any(|g| !g.is_zero()));

    if sheet == Sheet::Integer {
        let _ = writeln!(c.body, r#"<g stroke="gray" stroke-width="1">"#);
        for &(s, t) in cells.keys() {
            let x = (t - s as i64).rem_euclid(PERIOD);
            if s < s_max && x + 1 < PERIOD && cells.contains_key(&(s + 1, t + 2)) && eta_line(s, t, n) {
                c.line((x, s as i64), (x + 1, s as i64 + 1), "");
            }
        }
        let _ = writeln!(c.body, "</g>");
    }

    let _ = writeln!(c.body, r##"<g stroke="#1f4e9c" stroke-width="1.2" marker-end="url(#head)">"##);
    for a in arrows {
        if a.src.sheet != sheet || a.src.level != Level::Top || a.tgt.s > s_max {
            continue;
        }
        let (x, y) = (stem(&a.src), a.src.s as i64);
        if x == 0 {
            continue;
        }
        c.line((x, y), (x - 1, a.tgt.s as i64), &format!(r#"data-page="{}""#, a.page));
    }
    let _ = writeln!(c.body, "</g>");

    for ((s, t), levels) in &cells {
        let name = mackey::recognize(levels, n, None);
        let tip = format!("({s}, {t}) {name}: {} | {} | {}", levels[0], levels[1], levels[2]);
        c.glyph((t - *s as i64).rem_euclid(PERIOD), *s as i64, &name, &tip);
    }
    c.finish(title, hash)
}

/// Diagonal of the Picard spectral sequence after its differentials.
pub fn pic_chart(bound: &OrderBound, hash: &str, n: usize) -> String {
    let rows = bound.entries.iter().map(|e| e.s as i64).max().unwrap_or(0) + 2;
    let mut c = Canvas::new(3, rows);
    c.axes("t - s", "s");
    for e in &bound.entries {
        if e.groups.iter().all(AbGroup::is_zero) {
            continue;
        }
        let name = mackey::recognize(&e.groups, n, None);
        let tip = format!("s = {}: {} | {} | {} ({})", e.s, e.groups[0], e.groups[1], e.groups[2], e.note);
        c.glyph(0, e.s as i64, &name, &tip);
    }
    c.finish("Picard spectral sequence, stem 0", hash)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chart_has_axes_only() {
        let svg = hfpss_chart(&BTreeMap::new(), &[], Sheet::Integer, 8, "empty", "0", 6);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<line"));
        assert!(!svg.contains(r#"class="glyph""#));
    }

    #[test]
    fn glyph_shapes() {
        assert_eq!(glyph("mdblkcircle"), ("circle", true));
        assert_eq!(glyph("hat-square"), ("square", false));
        assert_eq!(glyph("blacktriangledown"), ("triangle", true));
        assert_eq!(glyph("unknown").0, "unknown");
    }

    #[test]
    fn eta_times_one() {
        assert!(eta_line(0, 0, 6));
    }
}
