//! SVG pictures of a search: obstacles, the retained vertex set by class,
//! the goal disc, the final path and an expansion bar.

use std::fmt::Write as _;

use ighastar::search::{Snapshot, VertexClass};
use ighastar::worlds::OccupancyGrid;

/// Everything drawn for one run.
#[derive(Debug, Clone)]
pub struct Scene<'a> {
    pub grid: &'a OccupancyGrid,
    pub start: (f64, f64),
    /// Center and radius.
    pub goal: (f64, f64, f64),
    pub snapshot: Option<&'a Snapshot>,
    pub path: &'a [(f64, f64)],
    pub expansions: u64,
    pub budget: u64,
}

const PX_PER_M: f64 = 20.0;
const BAR: f64 = 1.5;

/// Draw order and style per class; later classes are drawn on top.
const STYLES: [(VertexClass, &str, &str); 4] = [
    (VertexClass::Bounded, "bounded", "fill=\"#d9d9d9\""),
    (VertexClass::Inactive, "inactive", "fill=\"#1f5fd0\" fill-opacity=\"0.35\""),
    (VertexClass::Expanded, "expanded", "fill=\"#5a5a5a\""),
    (VertexClass::Active, "active", "fill=\"#9a9a9a\""),
];

fn n(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn render_svg(scene: &Scene) -> Result<String, String> {
    let g = scene.grid;
    let (w, h) = (g.extent_x(), g.extent_y());
    let inside = |x: f64, y: f64| x.is_finite() && y.is_finite() && (0.0..=w).contains(&x) && (0.0..=h).contains(&y);
    if let Some(s) = scene.snapshot {
        if let Some((_, c)) = s.vertices.iter().find(|(_, c)| !inside(c[0], c[1])) {
            return Err(format!("vertex at ({}, {}) lies outside the {w}x{h} m map", c[0], c[1]));
        }
    }
    if let Some(p) = scene.path.iter().find(|p| !inside(p.0, p.1)) {
        return Err(format!("path point ({}, {}) lies outside the {w}x{h} m map", p.0, p.1));
    }
    if !inside(scene.start.0, scene.start.1) || !inside(scene.goal.0, scene.goal.1) {
        return Err("start or goal lies outside the map".into());
    }
    let flip = |y: f64| h - y;
    let total_h = h + BAR;
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        n(w * PX_PER_M),
        n(total_h * PX_PER_M),
        n(w),
        n(total_h)
    )
    .unwrap();
    let count = |class| scene.snapshot.map_or(0, |s| s.count(class));
    write!(s, "<metadata>").unwrap();
    for (class, name, _) in STYLES {
        write!(s, "{name}={} ", count(class)).unwrap();
    }
    writeln!(s, "expansions={} budget={}</metadata>", scene.expansions, scene.budget).unwrap();
    writeln!(s, "<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>", n(w), n(total_h)).unwrap();

    let cell = g.cell_size();
    writeln!(s, "<g id=\"obstacles\" fill=\"#000000\">").unwrap();
    for iy in 0..g.height() {
        let mut ix = 0;
        while ix < g.width() {
            if !g.is_occupied(ix, iy) {
                ix += 1;
                continue;
            }
            let run_start = ix;
            while ix < g.width() && g.is_occupied(ix, iy) {
                ix += 1;
            }
            writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                n(run_start as f64 * cell),
                n(flip((iy + 1) as f64 * cell)),
                n((ix - run_start) as f64 * cell),
                n(cell)
            )
            .unwrap();
        }
    }
    writeln!(s, "</g>").unwrap();

    if let Some(snap) = scene.snapshot {
        let r = (0.004 * w.max(h)).max(0.5 * cell);
        for (class, name, style) in STYLES {
            writeln!(s, "<g id=\"{name}\" {style}>").unwrap();
            for (_, c) in snap.vertices.iter().filter(|(k, _)| *k == class) {
                writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", n(c[0]), n(flip(c[1])), n(r)).unwrap();
            }
            writeln!(s, "</g>").unwrap();
        }
    }

    let (gx, gy, gr) = scene.goal;
    writeln!(
        s,
        "<circle id=\"goal\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#1a9e3a\" stroke-width=\"{}\"/>",
        n(gx),
        n(flip(gy)),
        n(gr),
        n(0.1 * gr)
    )
    .unwrap();
    writeln!(
        s,
        "<circle id=\"start\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#d62728\"/>",
        n(scene.start.0),
        n(flip(scene.start.1)),
        n(0.2 * gr)
    )
    .unwrap();
    if scene.path.len() > 1 {
        let points: Vec<String> = scene.path.iter().map(|&(x, y)| format!("{},{}", n(x), n(flip(y)))).collect();
        writeln!(
            s,
            "<polyline id=\"path\" points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"/>",
            points.join(" "),
            n(0.05 * gr)
        )
        .unwrap();
    }

    let used = if scene.budget == 0 {
        0.0
    } else {
        (scene.expansions as f64 / scene.budget as f64).min(1.0)
    };
    let bar_y = h + 0.3 * BAR;
    let bar_h = 0.4 * BAR;
    writeln!(
        s,
        "<rect id=\"budget\" x=\"0\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#eeeeee\"/>",
        n(bar_y),
        n(w),
        n(bar_h)
    )
    .unwrap();
    writeln!(
        s,
        "<rect id=\"expansions\" x=\"0\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ff7f0e\"/>",
        n(bar_y),
        n(used * w),
        n(bar_h)
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"monospace\">{} / {} expansions</text>",
        n(0.01 * w),
        n(bar_y + 0.8 * bar_h),
        n(0.7 * bar_h),
        scene.expansions,
        scene.budget
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> OccupancyGrid {
        let mut g = OccupancyGrid::new(20, 10, 0.5).unwrap();
        g.fill_rect(4.0, 0.0, 5.0, 3.0, true);
        g
    }

    fn scene<'a>(g: &'a OccupancyGrid, snap: Option<&'a Snapshot>, path: &'a [(f64, f64)]) -> Scene<'a> {
        Scene {
            grid: g,
            start: (1.0, 1.0),
            goal: (8.0, 4.0, 0.5),
            snapshot: snap,
            path,
            expansions: 25,
            budget: 100,
        }
    }

    #[test]
    fn empty_record_draws_obstacles_and_goal() {
        let g = grid();
        let svg = render_svg(&scene(&g, Some(&Snapshot::default()), &[])).unwrap();
        assert!(svg.contains("id=\"goal\""));
        assert!(svg.contains("<rect x=\"4\" y=\"2\" width=\"1\" height=\"0.5\"/>"));
        assert!(!svg.contains("id=\"path\""));
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn metadata_counts_match() {
        let g = grid();
        let snap = Snapshot {
            vertices: vec![
                (VertexClass::Expanded, [1.0, 1.0, 0.0, 0.0]),
                (VertexClass::Active, [2.0, 1.0, 0.0, 0.0]),
                (VertexClass::Inactive, [2.1, 1.0, 0.0, 0.0]),
                (VertexClass::Inactive, [2.2, 1.0, 0.0, 0.0]),
                (VertexClass::Bounded, [3.0, 1.0, 0.0, 0.0]),
            ],
        };
        let path = [(1.0, 1.0), (8.0, 4.0)];
        let svg = render_svg(&scene(&g, Some(&snap), &path)).unwrap();
        assert!(svg.contains("<metadata>bounded=1 inactive=2 expanded=1 active=1 expansions=25 budget=100</metadata>"));
        assert!(svg.contains("points=\"1,4 8,1\""));
        assert_eq!(svg, render_svg(&scene(&g, Some(&snap), &path)).unwrap());
    }

    #[test]
    fn vertices_off_the_map_are_rejected() {
        let g = grid();
        let snap = Snapshot {
            vertices: vec![(VertexClass::Active, [40.0, 1.0, 0.0, 0.0])],
        };
        assert!(render_svg(&scene(&g, Some(&snap), &[])).is_err());
    }
}
