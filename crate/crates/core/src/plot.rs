//! Static SVG figures: planar scatter plots of solutions and distance
//! histograms.

use std::fmt::Write as _;

use crate::analysis::{DistanceHistogram, HistogramMode};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objectives::Solution;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 40.0;

/// Stroke color for a model label; unknown labels are gray.
pub fn model_color(model: &str) -> &'static str {
    match model {
        "maxsum" => "#d62728",
        "maxmin" => "#1f77b4",
        "maxminsum" => "#2ca02c",
        "mindiff" => "#ff7f0e",
        "maxmean" => "#9467bd",
        "bilevel-maxsum" => "#8c564b",
        "bilevel-maxminsum" => "#e377c2",
        _ => "#7f7f7f",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Scatter plot of all points with each labeled solution drawn as rings.
///
/// `range` fixes both axes; by default the coordinate bounding box is used.
pub fn scatter_svg(inst: &Instance, solutions: &[(String, Solution)], range: Option<(f64, f64)>) -> Result<String> {
    let coords = inst.coords().ok_or(Error::NoPlanarCoords)?;
    if coords.iter().any(|p| p.len() != 2) {
        return Err(Error::NoPlanarCoords);
    }
    let (lo, hi) = range.unwrap_or_else(|| {
        let lo = coords.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let hi = coords.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let inner = WIDTH - 2.0 * MARGIN;
    let px = |v: f64| MARGIN + (v - lo) / span * inner;
    let py = |v: f64| HEIGHT - MARGIN - (v - lo) / span * inner;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(&inst.name));
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="#000"/>"##
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.2}" font-size="10">{lo}</text>"#, HEIGHT - MARGIN + 14.0);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{hi}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 14.0
    );
    s.push_str("<g class=\"points\">\n");
    for p in coords {
        let _ = writeln!(s, r##"<circle class="point" cx="{:.2}" cy="{:.2}" r="2" fill="#444"/>"##, px(p[0]), py(p[1]));
    }
    s.push_str("</g>\n");
    for (k, (label, sol)) in solutions.iter().enumerate() {
        let color = model_color(label);
        let r = 6.0 + 3.0 * k as f64;
        let _ = writeln!(s, r#"<g class="solution" data-model="{}">"#, escape(label));
        for &i in sol.selected() {
            let p = &coords[i];
            let _ = writeln!(
                s,
                r#"<circle class="selected" cx="{:.2}" cy="{:.2}" r="{r}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                px(p[0]),
                py(p[1])
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">{}</text>"#,
            MARGIN + 90.0 * k as f64,
            MARGIN - 10.0,
            escape(label)
        );
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// One bar per class on a fixed `[0, 1]` relative-frequency axis.
pub fn histogram_svg(hist: &DistanceHistogram) -> String {
    let inner_w = WIDTH - 2.0 * MARGIN;
    let inner_h = HEIGHT - 2.0 * MARGIN;
    let classes = hist.counts.len().max(1);
    let bar_w = inner_w / classes as f64;
    let base = HEIGHT - MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<title>{} histogram, {} distances</title>"#, hist.mode, hist.sample_size);
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN}" y1="{base}" x2="{:.2}" y2="{base}" stroke="#000"/>"##,
        WIDTH - MARGIN
    );
    let _ = writeln!(s, r##"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base}" stroke="#000"/>"##);
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = base - t * inner_h;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{t}</text>"#,
            MARGIN - 4.0,
            y + 3.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="12" y="{:.2}" font-size="12" transform="rotate(-90 12 {:.2})" text-anchor="middle">relative frequency</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let x_label = match hist.mode {
        HistogramMode::Normalized10 => "distance / d_max",
        HistogramMode::IntegerBars => "distance value",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{x_label}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 8.0
    );
    for (k, &rel) in hist.relative.iter().enumerate() {
        let h = rel * inner_h;
        let x = MARGIN + k as f64 * bar_w;
        let _ = writeln!(
            s,
            r##"<rect class="bar" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#1f77b4" stroke="#fff" data-count="{}"/>"##,
            x,
            base - h,
            bar_w,
            h,
            hist.counts[k]
        );
        let label = match hist.mode {
            HistogramMode::Normalized10 => format!("{:.1}", k as f64 / 10.0),
            HistogramMode::IntegerBars => k.to_string(),
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{label}</text>"#,
            x + bar_w / 2.0,
            base + 14.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::histogram;
    use crate::instance::tests::{t4, unit_square};
    use crate::instance::euclidean_instance;

    fn count(svg: &str, class: &str) -> usize {
        let doc = roxmltree::Document::parse(svg).expect("well-formed svg");
        doc.descendants().filter(|n| n.attribute("class") == Some(class)).count()
    }

    fn bar_heights(svg: &str) -> Vec<f64> {
        let doc = roxmltree::Document::parse(svg).unwrap();
        doc.descendants()
            .filter(|n| n.attribute("class") == Some("bar"))
            .map(|n| n.attribute("height").unwrap().parse().unwrap())
            .collect()
    }

    #[test]
    fn scatter_marker_counts() {
        let sq = unit_square();
        let sol = Solution::new(&sq, vec![0, 2]).unwrap();
        let svg = scatter_svg(&sq, &[("maxmin".into(), sol)], None).unwrap();
        assert_eq!(count(&svg, "point"), 4);
        assert_eq!(count(&svg, "selected"), 2);
        assert!(svg.contains(model_color("maxmin")));
        let plain = scatter_svg(&sq, &[], Some((0.0, 1.0))).unwrap();
        assert_eq!((count(&plain, "point"), count(&plain, "selected")), (4, 0));
        assert_eq!(scatter_svg(&sq, &[], None).unwrap(), scatter_svg(&sq, &[], None).unwrap());
    }

    #[test]
    fn scatter_needs_planar_coords() {
        assert_eq!(scatter_svg(&t4(), &[], None), Err(Error::NoPlanarCoords));
        let cube = euclidean_instance(&[vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]], false).unwrap();
        assert_eq!(scatter_svg(&cube, &[], None), Err(Error::NoPlanarCoords));
    }

    #[test]
    fn histogram_bars() {
        let hist = DistanceHistogram {
            mode: HistogramMode::Normalized10,
            counts: vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 3],
            relative: vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            sample_size: 3,
            d_max_used: Some(1.0),
        };
        let svg = histogram_svg(&hist);
        let h = bar_heights(&svg);
        assert_eq!(h.len(), 10);
        assert_eq!(h[9], HEIGHT - 2.0 * MARGIN);
        assert!(h[..9].iter().all(|&v| v == 0.0));
        assert!(svg.contains("relative frequency"));

        let uniform = DistanceHistogram {
            mode: HistogramMode::IntegerBars,
            counts: vec![2; 10],
            relative: vec![0.1; 10],
            sample_size: 20,
            d_max_used: None,
        };
        let h = bar_heights(&histogram_svg(&uniform));
        assert!(h.iter().all(|&v| v == h[0]) && h[0] > 0.0);
    }

    #[test]
    fn histogram_from_solution() {
        let t = t4();
        let s = Solution::new(&t, vec![1, 2, 3]).unwrap();
        let hist = histogram(&[(&t, &s)], HistogramMode::Normalized10).unwrap();
        let h = bar_heights(&histogram_svg(&hist));
        assert_eq!(h.iter().filter(|&&v| v > 0.0).count(), 3);
    }
}
