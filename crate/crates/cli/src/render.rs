//! Plots of element graphs and the orbital diagram.
//!
//! Output depends only on the input elements, so it is byte-stable.

use std::collections::BTreeSet;
use std::fmt::Write;

use plsol::dynamics::tower_height;
use plsol::orbitals::factor_signed_orbitals;
use plsol::{Interval, PLMap, Rational, SignedOrbital};

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// A factor orbital tagged with the element it came from and its nesting level.
struct Bar {
    element: usize,
    so: SignedOrbital,
    level: usize,
}

fn bars(elements: &[PLMap]) -> Vec<Bar> {
    let all: Vec<(usize, SignedOrbital)> = elements
        .iter()
        .enumerate()
        .flat_map(|(i, f)| factor_signed_orbitals(f).into_iter().map(move |s| (i, s)))
        .collect();
    let distinct: BTreeSet<&Interval> = all.iter().map(|(_, s)| &s.orbital).collect();
    all.iter()
        .map(|(i, s)| Bar {
            element: *i,
            level: distinct
                .iter()
                .filter(|o| **o != &s.orbital && s.orbital.is_subset_of(o))
                .count(),
            so: s.clone(),
        })
        .collect()
}

/// Endpoints shared by orbitals of different elements.
fn shared_endpoints(bars: &[Bar]) -> BTreeSet<Rational> {
    let mut out = BTreeSet::new();
    for (i, a) in bars.iter().enumerate() {
        for b in &bars[i + 1..] {
            if a.so.orbital == b.so.orbital {
                continue;
            }
            for p in [a.so.orbital.left(), a.so.orbital.right()] {
                if p == b.so.orbital.left() || p == b.so.orbital.right() {
                    out.insert(p.clone());
                }
            }
        }
    }
    out
}

fn height(bars: &[Bar]) -> usize {
    tower_height(bars.iter().map(|b| &b.so))
}

pub fn text(elements: &[PLMap]) -> String {
    const W: usize = 64;
    const H: usize = 24;
    let mut grid = vec![vec![' '; W]; H];
    for (c, col) in (0..W).map(|c| (c, (c as f64 + 0.5) / W as f64)) {
        let r = ((1.0 - col) * H as f64).floor().min(H as f64 - 1.0) as usize;
        grid[r][c] = '.';
    }
    for (i, f) in elements.iter().enumerate() {
        let mark = char::from_digit((i % 10) as u32, 10).unwrap_or('*');
        for c in 0..W {
            let x = Rational::new(2 * c as i64 + 1, 2 * W as i64);
            let y = f.apply(&x).to_f64();
            let r = ((1.0 - y) * H as f64).floor().clamp(0.0, H as f64 - 1.0) as usize;
            grid[r][c] = mark;
        }
    }
    let mut s = String::new();
    for (i, f) in elements.iter().enumerate() {
        let _ = writeln!(s, "{i}: {f}");
    }
    let _ = writeln!(s, "+{}+", "-".repeat(W));
    for row in &grid {
        let _ = writeln!(s, "|{}|", row.iter().collect::<String>());
    }
    let _ = writeln!(s, "+{}+", "-".repeat(W));
    let bars = bars(elements);
    let _ = writeln!(s, "orbitals (tower height {})", height(&bars));
    for b in &bars {
        let at = |p: &Rational| (p.to_f64() * W as f64).round() as usize;
        let (l, r) = (at(b.so.orbital.left()), at(b.so.orbital.right()));
        let fill = if b.so.moves_right() { '>' } else { '<' };
        let mut line = vec![' '; W + 1];
        for cell in line.iter_mut().take(r).skip(l + 1) {
            *cell = fill;
        }
        line[l] = '(';
        line[r.min(W)] = ')';
        let _ = writeln!(
            s,
            "  level {} {} {} element {}",
            b.level,
            line.iter().collect::<String>(),
            b.so.orbital,
            b.element
        );
    }
    let shared = shared_endpoints(&bars);
    if !shared.is_empty() {
        let pts: Vec<String> = shared.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(s, "shared endpoints: {}", pts.join(" "));
    }
    s
}

pub fn svg(elements: &[PLMap]) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 20.0;
    const ROW: f64 = 16.0;
    let bars = bars(elements);
    let levels = bars.iter().map(|b| b.level + 1).max().unwrap_or(0);
    let diagram_top = PAD * 2.0 + SIZE;
    let total_h = diagram_top + levels as f64 * ROW + PAD;
    let total_w = SIZE + 2.0 * PAD;
    let px = |x: f64| PAD + x * SIZE;
    let py = |y: f64| PAD + (1.0 - y) * SIZE;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#000"/>"##
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#aaa" stroke-dasharray="4 4"/>"##,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    );
    for (i, f) in elements.iter().enumerate() {
        let pts: Vec<String> = f
            .nodes()
            .iter()
            .map(|(x, y)| format!("{:.3},{:.3}", px(x.to_f64()), py(y.to_f64())))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="element-{i}" points="{}" fill="none" stroke="{}" stroke-width="1.5"><title>{f}</title></polyline>"#,
            pts.join(" "),
            COLORS[i % COLORS.len()]
        );
    }
    for b in &bars {
        let y = diagram_top + b.level as f64 * ROW;
        let (l, r) = (
            px(b.so.orbital.left().to_f64()),
            px(b.so.orbital.right().to_f64()),
        );
        let arrow = if b.so.moves_right() { "right" } else { "left" };
        let _ = writeln!(
            s,
            r#"<line class="orbital moves-{arrow}" x1="{l:.3}" y1="{y:.3}" x2="{r:.3}" y2="{y:.3}" stroke="{}" stroke-width="6"><title>{} element {}</title></line>"#,
            COLORS[b.element % COLORS.len()],
            b.so.orbital,
            b.element
        );
    }
    for p in shared_endpoints(&bars) {
        let x = px(p.to_f64());
        let _ = writeln!(
            s,
            r##"<line class="shared-endpoint" x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="#000" stroke-dasharray="2 2"><title>{p}</title></line>"##,
            diagram_top - ROW / 2.0,
            diagram_top + levels as f64 * ROW
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{:.3}" font-size="10">tower height {}</text>"#,
        total_h - 4.0,
        height(&bars)
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use plsol::fixtures::{g2, g3, x0, x1};

    #[test]
    fn identity_is_diagonal() {
        let t = text(&[PLMap::identity()]);
        assert!(t.contains("tower height 0"));
        assert!(!t.contains("level"));
        // The element's marks cover the diagonal entirely.
        assert!(!t.lines().any(|l| l.contains('.')));
    }

    #[test]
    fn shared_right_endpoint() {
        let t = text(&[x0(), x1()]);
        assert!(t.contains("shared endpoints: 1"));
        assert!(svg(&[x0(), x1()]).contains("<title>1</title>"));
    }

    #[test]
    fn nested_tower() {
        let t = text(&[x0(), g2(), g3()]);
        assert!(t.contains("tower height 3"));
        assert!(t.contains("level 2"));
    }

    #[test]
    fn byte_stable() {
        let z = [x0(), g2(), g3()];
        assert_eq!(svg(&z), svg(&z));
        assert_eq!(text(&z), text(&z));
    }
}
