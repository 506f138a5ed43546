//! Static figure: shaded spectrum cells, the Sigma curve on top, boxed axes
//! with ticks.

use std::fmt::Write as _;

use specpoint::{Label, PlaneSpectrum, PlanePoint};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

struct Frame {
    xmin: f64,
    ymin: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn x(&self, a: f64) -> f64 {
        MARGIN + (a - self.xmin) * self.sx
    }

    fn y(&self, b: f64) -> f64 {
        MARGIN + SIZE - (b - self.ymin) * self.sy
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn num(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn render(s: &PlaneSpectrum) -> String {
    let g = &s.grid;
    let f = Frame {
        xmin: g.xmin,
        ymin: g.ymin,
        sx: SIZE / (g.xmax - g.xmin),
        sy: SIZE / (g.ymax - g.ymin),
    };
    let total = SIZE + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{total}" height="{total}" fill="white"/>"#);

    // Horizontal runs of equal labels keep the file small.
    for (id, label, fill) in [
        ("spectrum-region", Label::InSpectrum, "#9ecae1"),
        ("band", Label::Band, "#e0e0e0"),
    ] {
        let _ = writeln!(out, r#"<g id="{id}" fill="{fill}" stroke="none">"#);
        for j in 0..g.ny {
            let mut i = 0;
            while i < g.nx {
                if s.label(i, j) != label {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < g.nx && s.label(i, j) == label {
                    i += 1;
                }
                let x0 = g.xmin + start as f64 * g.dx();
                let y1 = g.ymin + (j + 1) as f64 * g.dy();
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                    num(f.x(x0)),
                    num(f.y(y1)),
                    num((i - start) as f64 * g.dx() * f.sx),
                    num(g.dy() * f.sy)
                );
            }
        }
        out.push_str("</g>\n");
    }

    out.push_str(r##"<g id="sigma-curve" fill="none" stroke="#08306b" stroke-width="1.5">"##);
    out.push('\n');
    match s.curve.degenerate {
        Some(p) => {
            let _ = writeln!(out, r##"<circle cx="{}" cy="{}" r="3" fill="#08306b"/>"##, num(f.x(p.a)), num(f.y(p.b)));
        }
        None => {
            let pts: Vec<String> = s.curve.points().map(|p: PlanePoint| format!("{},{}", num(f.x(p.a)), num(f.y(p.b)))).collect();
            let _ = writeln!(out, r#"<polygon points="{}"/>"#, pts.join(" "));
        }
    }
    out.push_str("</g>\n");

    let _ = writeln!(out, r#"<g id="axes" stroke="black" fill="none" stroke-width="1">"#);
    let _ = writeln!(out, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}"/>"#);
    if g.xmin < 0.0 && 0.0 < g.xmax {
        let _ = writeln!(out, r#"<line x1="{0}" y1="{MARGIN}" x2="{0}" y2="{1}" stroke-dasharray="3,3"/>"#, num(f.x(0.0)), MARGIN + SIZE);
    }
    if g.ymin < 0.0 && 0.0 < g.ymax {
        let _ = writeln!(out, r#"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke-dasharray="3,3"/>"#, num(f.y(0.0)), MARGIN + SIZE);
    }
    let bottom = MARGIN + SIZE;
    for t in ticks(g.xmin, g.xmax) {
        let x = num(f.x(t));
        let _ = writeln!(out, r#"<line x1="{x}" y1="{bottom}" x2="{x}" y2="{}"/>"#, bottom + 5.0);
        let _ = writeln!(out, r#"<text x="{x}" y="{}" text-anchor="middle" stroke="none" fill="black">{}</text>"#, bottom + 18.0, num(t));
    }
    for t in ticks(g.ymin, g.ymax) {
        let y = num(f.y(t));
        let _ = writeln!(out, r#"<line x1="{}" y1="{y}" x2="{MARGIN}" y2="{y}"/>"#, MARGIN - 5.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle" stroke="none" fill="black">{}</text>"#, MARGIN - 8.0, num(t));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle" stroke="none" fill="black">Re λ</text>"#, MARGIN + SIZE / 2.0, bottom + 40.0);
    let _ = writeln!(
        out,
        r#"<text x="16" y="{0}" text-anchor="middle" stroke="none" fill="black" transform="rotate(-90 16 {0})">Im λ</text>"#,
        MARGIN + SIZE / 2.0
    );
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(ticks(-2.0, 2.0), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(1.25), "1.25");
    }
}
