//! Minimal SVG line plot of the three threshold curves.

use std::fmt::Write;

use gausskey::ThresholdCurve64;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 50.0;
const SERIES: [(&str, &str, &str); 3] = [
    ("eps_q", "#1b9e77", ""),
    ("eps_r", "#d95f02", ""),
    ("eps_rev", "#7570b3", " stroke-dasharray=\"6 4\""),
];

pub fn render(curve: &ThresholdCurve64) -> String {
    let rows = &curve.rows;
    let (x0, x1) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
            (a.min(r.tau), b.max(r.tau))
        });
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
    let y1 = rows
        .iter()
        .map(|r| r.eps_q.max(r.eps_r).max(r.eps_rev))
        .fold(0.0, f64::max);
    let y1 = if y1 > 0.0 { y1 * 1.05 } else { 1.0 };
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / y1 * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        "<path d=\"M{left} {top} L{left} {bottom} L{right} {bottom}\" fill=\"none\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y1 * i as f64 / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{:.3}</text>",
            sx(fx),
            bottom + 16.0,
            fx
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{:.3}</text>",
            left - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">tau</text>",
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        "<text x=\"14\" y=\"{:.2}\" font-size=\"13\">eps</text>",
        top - 16.0
    );

    for (k, (name, color, dash)) in SERIES.iter().enumerate() {
        let value = |r: &gausskey::ThresholdRow<f64>| match k {
            0 => r.eps_q,
            1 => r.eps_r,
            _ => r.eps_rev,
        };
        // break the line across the gap at tau = 1
        let mut d = String::new();
        let mut prev_tau: Option<f64> = None;
        for r in rows {
            let cmd = match prev_tau {
                Some(p) if !(p < 1.0 && r.tau > 1.0) => 'L',
                _ => 'M',
            };
            let _ = write!(d, "{cmd}{:.2} {:.2} ", sx(r.tau), sy(value(r)));
            prev_tau = Some(r.tau);
        }
        let _ = writeln!(
            s,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
            d.trim_end()
        );
        let ly = top + 14.0 * k as f64;
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{color}\">{name}</text>",
            right - 60.0,
            ly
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_path_per_curve() {
        let curve = gausskey::threshold::sweep(0.5, 1.5, 5, 1e-9).unwrap();
        let svg = render(&curve);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<path d=\"M").count(), 4);
        // the curves restart after crossing tau = 1
        assert!(svg.matches(" M").count() >= 3);
    }
}
