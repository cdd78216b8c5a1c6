//! SVG rendering of instances, solutions and laminar decompositions.
//!
//! The y-axis is flipped so larger y is drawn higher, and the view box is
//! the bounding box of everything drawn plus a 5% margin on each side.

use std::fmt::Write;

use segstab_core::rational::to_f64;
use segstab_core::{Orientation, Segment, Solution, StabInstance};

const STYLE: &str = ".rect{fill:#4a90d9;fill-opacity:0.15;stroke:#1f4e79}\
.segment{stroke:#111}\
.family-1{stroke:#d62728}\
.family-2{stroke:#2ca02c;stroke-dasharray:4 2}";

/// `(x1, y1, x2, y2)` in the plane.
type Ends = (f64, f64, f64, f64);

fn endpoints(s: &Segment) -> Ends {
    let (a, b, c) = (to_f64(&s.x_left), to_f64(&s.x_right), to_f64(&s.y));
    match s.orientation {
        Orientation::Horizontal => (a, c, b, c),
        Orientation::Vertical => (c, a, c, b),
    }
}

/// One `<rect>` per rect and one `<line>` per solution segment. Segments of
/// a decomposition are drawn with class `family-1` or `family-2`.
pub fn render_svg(inst: &StabInstance, sol: Option<&Solution>, decomposition: Option<&[(Segment, u8)]>) -> String {
    let boxes: Vec<(u64, f64, f64, f64, f64)> = inst
        .rects
        .iter()
        .map(|r| (r.id, to_f64(&r.x_left), to_f64(&r.y_bottom), to_f64(&r.x_right), to_f64(&r.y_top)))
        .collect();
    let mut lines: Vec<(String, u64, Ends)> = Vec::new();
    if let Some(sol) = sol {
        lines.extend(sol.segments.iter().map(|s| ("segment".to_string(), s.id, endpoints(s))));
    }
    if let Some(dec) = decomposition {
        lines.extend(dec.iter().map(|(s, f)| (format!("family-{f}"), s.id, endpoints(s))));
    }

    let xs = boxes.iter().flat_map(|b| [b.1, b.3]).chain(lines.iter().flat_map(|l| [l.2 .0, l.2 .2]));
    let ys = boxes.iter().flat_map(|b| [b.2, b.4]).chain(lines.iter().flat_map(|l| [l.2 .1, l.2 .3]));
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (x0, x1, y0, y1) = if x0.is_finite() { (x0, x1, y0, y1) } else { (0.0, 1.0, 0.0, 1.0) };
    let w = (x1 - x0).max(1e-9);
    let h = (y1 - y0).max(1e-9);
    let (mx, my) = (0.05 * w, 0.05 * h);
    let stroke = 0.004 * w.max(h);
    let flip = |y: f64| y1 - y;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        x0 - mx,
        -my,
        w + 2.0 * mx,
        h + 2.0 * my
    );
    let _ = writeln!(out, "<style>{STYLE}</style>");
    for (id, a, b, c, d) in &boxes {
        let _ = writeln!(
            out,
            r#"<rect class="rect" data-id="{id}" x="{a}" y="{}" width="{}" height="{}" stroke-width="{stroke}"/>"#,
            flip(*d),
            c - a,
            d - b
        );
    }
    for (class, id, (a, b, c, d)) in &lines {
        let _ = writeln!(
            out,
            r#"<line class="{class}" data-id="{id}" x1="{a}" y1="{}" x2="{c}" y2="{}" stroke-width="{}"/>"#,
            flip(*b),
            flip(*d),
            2.0 * stroke
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use segstab_core::forge::{gen_random, RandomParams};
    use segstab_core::laminar::laminarize;
    use segstab_core::rational::int;
    use segstab_core::{candidates::candidate_segments, Objective, Rect};

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn rects_only_without_solution() {
        let inst = gen_random(9, 1, &RandomParams::default()).unwrap();
        let svg = render_svg(&inst, None, None);
        assert_eq!(count(&svg, "<rect "), 9);
        assert_eq!(count(&svg, "<line "), 0);
        assert_eq!(svg, render_svg(&inst, None, None));
    }

    #[test]
    fn solution_lines_and_flipped_axis() {
        let r = Rect::new(0, int(0), int(2), int(0), int(1)).unwrap();
        let inst = StabInstance::unconstrained(vec![r]).unwrap();
        let s = Segment::horizontal(7, int(0), int(2), int(1));
        let sol = Solution::from_segments(vec![s], Objective::Length);
        let svg = render_svg(&inst, Some(&sol), None);
        assert_eq!(count(&svg, r#"class="segment""#), 1);
        // the top edge y = 1 is the highest point, drawn at svg y = 0
        assert!(svg.contains(r#"y1="0""#));
        assert!(svg.contains(r#"<rect class="rect" data-id="0" x="0" y="0" width="2" height="1""#));
    }

    #[test]
    fn decomposition_families_are_distinguishable() {
        let inst = gen_random(6, 3, &RandomParams::default()).unwrap();
        let lam = laminarize(&inst.rects, &candidate_segments(&inst.rects)).unwrap();
        let dec: Vec<(Segment, u8)> = lam.snapped.iter().map(|s| (s.segment.clone(), s.family)).collect();
        let svg = render_svg(&inst, None, Some(&dec));
        let f1 = dec.iter().filter(|d| d.1 == 1).count();
        assert_eq!(count(&svg, r#"class="family-1""#), f1);
        assert_eq!(count(&svg, r#"class="family-2""#), dec.len() - f1);
        assert!(STYLE.contains(".family-1{") && STYLE.contains(".family-2{"));
    }
}
