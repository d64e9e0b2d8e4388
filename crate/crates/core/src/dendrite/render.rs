use std::f64::consts::TAU;
use std::fmt::Write;

use super::DendriteApprox;
use crate::lamination::{Class, Lamination};

const PERIODIC: [&str; 6] = ["#c0392b", "#8e44ad", "#2471a3", "#d68910", "#148f77", "#a04000"];
const PREPERIODIC: [&str; 5] = ["#5d6d7e", "#7f8c8d", "#95a5a6", "#aab7b8", "#bfc9ca"];

fn color(class: &Class, d: u32) -> &'static str {
    match class.orbit_portrait(d) {
        Ok(p) if p.preperiod == 0 => PERIODIC[(p.period - 1) % PERIODIC.len()],
        Ok(p) => PREPERIODIC[(p.preperiod - 1) % PREPERIODIC.len()],
        Err(_) => "#000000",
    }
}

fn point(t: f64, cx: f64, cy: f64, r: f64) -> (f64, f64) {
    (cx + r * (TAU * t).cos(), cy - r * (TAU * t).sin())
}

/// The unit disk with every class drawn as its convex hull: polygons for gaps,
/// chords for leaves, dots for buds. Colors encode period (periodic classes) or
/// preperiod (preperiodic ones).
pub fn render_disk_svg(lam: &Lamination) -> String {
    let (cx, cy, r) = (500.0, 500.0, 460.0);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">"#
    )
    .unwrap();
    writeln!(
        s,
        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="none" stroke="#222" stroke-width="1.5"/>"##
    )
    .unwrap();
    let d = lam.degree();
    for stored in lam.classes() {
        let c = &stored.class;
        let col = color(c, d);
        let width = 1.6 / (1.0 + 0.25 * stored.depth as f64);
        let pts: Vec<(f64, f64)> = c
            .angles()
            .iter()
            .map(|a| point(a.to_f64(), cx, cy, r))
            .collect();
        match pts.len() {
            1 => writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.00" fill="{col}"><title>{c}</title></circle>"#,
                pts[0].0, pts[0].1
            ),
            2 => writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{col}" stroke-width="{width:.2}"><title>{c}</title></line>"#,
                pts[0].0, pts[0].1, pts[1].0, pts[1].1
            ),
            _ => {
                let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                writeln!(
                    s,
                    r#"<polygon points="{}" fill="{col}" fill-opacity="0.35" stroke="{col}" stroke-width="{width:.2}"><title>{c}</title></polygon>"#,
                    list.join(" ")
                )
            }
        }
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// The abstract tree in layers by distance from vertex 0.
pub fn render_tree_svg(dendrite: &DendriteApprox) -> String {
    let tree = dendrite.tree();
    let n = tree.len();
    let levels = (0..n).map(|v| tree.level(v)).max().map_or(1, |m| m + 1);
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); levels];
    for v in 0..n {
        layers[tree.level(v)].push(v);
    }
    let width = 1000.0;
    let step = 40.0;
    let height = step * (levels as f64 + 1.0);
    let mut xy = vec![(0.0, 0.0); n];
    for (l, layer) in layers.iter().enumerate() {
        let gap = width / (layer.len() as f64 + 1.0);
        for (i, &v) in layer.iter().enumerate() {
            xy[v] = (gap * (i as f64 + 1.0), step * (l as f64 + 1.0));
        }
    }
    let d = dendrite.lamination().degree();
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.0} {height:.0}" width="{width:.0}" height="{height:.0}">"#
    )
    .unwrap();
    for (a, b) in tree.edges() {
        writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#555" stroke-width="0.8"/>"##,
            xy[a].0, xy[a].1, xy[b].0, xy[b].1
        )
        .unwrap();
    }
    for v in 0..n {
        let c = dendrite.class(v);
        let radius = 2.0 + c.len() as f64;
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius:.2}" fill="{}"><title>{c}</title></circle>"#,
            xy[v].0,
            xy[v].1,
            color(c, d)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::build_dendrite;
    use crate::lamination::pullback_closure;

    #[test]
    fn svg_is_deterministic_and_complete() {
        let gens: Vec<Class> = ["{1/12,7/12}", "{1/7,2/7,4/7}"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let lam = pullback_closure(2, &gens, 3).unwrap();
        let disk = render_disk_svg(&lam);
        assert_eq!(disk, render_disk_svg(&lam));
        assert_eq!(disk.matches("<title>").count(), lam.len());
        let tree = render_tree_svg(&build_dendrite(&lam).unwrap());
        assert_eq!(tree.matches("<line").count(), lam.len() - 1);
        assert!(tree.ends_with("</svg>\n"));
    }
}
