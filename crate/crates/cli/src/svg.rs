//! SVG staircase figures.
//!
//! Lattice point `(a, b)` sits at pixel `(margin + a * cell, height - margin - b * cell)`.
//! Each hyperbola level `c` is one `<path>` tracing `(x + 1)(y + 1) = c`,
//! sampled at 256 points and clipped to `[0, cap]^2`.

use std::fmt::Write;

use rmi_core::staircase::staircase_corners;
use rmi_core::{Error, MonomialIdeal, Monomial, Restriction, Result, VariableSet};

pub const HYPERBOLA_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub levels: Vec<f64>,
    /// Width and height of one panel in pixels.
    pub size: f64,
    pub margin: f64,
    /// Largest lattice coordinate shown; `None` picks one from the generators.
    pub axis_cap: Option<u64>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            levels: Vec::new(),
            size: 480.0,
            margin: 40.0,
            axis_cap: None,
        }
    }
}

struct Panel {
    size: f64,
    margin: f64,
    cap: f64,
    cell: f64,
}

impl Panel {
    fn new(spec: &RenderSpec, cap: u64) -> Self {
        let cap = cap.max(1) as f64;
        Panel {
            size: spec.size,
            margin: spec.margin,
            cap,
            cell: (spec.size - 2.0 * spec.margin) / cap,
        }
    }

    fn px(&self, a: f64, b: f64) -> (f64, f64) {
        let a = a.min(self.cap);
        let b = b.min(self.cap);
        (self.margin + a * self.cell, self.size - self.margin - b * self.cell)
    }

    fn point(&self, a: f64, b: f64) -> String {
        let (x, y) = self.px(a, b);
        format!("{x:.2},{y:.2}")
    }
}

/// Renders a 2-variable ideal, or the three 2-variable restrictions of a
/// 3-variable ideal side by side.
pub fn render(ideal: &MonomialIdeal, spec: &RenderSpec) -> Result<String> {
    let panels: Vec<(String, Option<MonomialIdeal>)> = match ideal.n() {
        2 => vec![(String::new(), Some(ideal.clone()))],
        3 => [[0, 1], [0, 2], [1, 2]]
            .iter()
            .map(|pair| {
                let t = VariableSet::from_indices(pair, 3)?;
                let label = format!("x{}, x{}", pair[0] + 1, pair[1] + 1);
                Ok(match ideal.restrict(&t)? {
                    Restriction::Unit { .. } => (label, None),
                    Restriction::Ideal(r) => (label, Some(r.ideal)),
                })
            })
            .collect::<Result<_>>()?,
        n => return Err(Error::WrongArity { expected: 2, found: n }),
    };
    let cap = spec.axis_cap.unwrap_or_else(|| {
        let top = panels
            .iter()
            .filter_map(|(_, i)| i.as_ref())
            .flat_map(|i| (0..2).map(move |v| i.max_exponent(v)))
            .max()
            .unwrap_or(0);
        top.max(2) + 2
    });
    let width = spec.size * panels.len() as f64;
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.2}\" height=\"{:.2}\" viewBox=\"0 0 {width:.2} {:.2}\">",
        spec.size, spec.size
    )
    .unwrap();
    writeln!(
        svg,
        "<style>.ideal{{fill:#d9d9d9;stroke:none}}.staircase{{fill:none;stroke:#000;stroke-width:2}}.outer{{fill:#000}}.inner{{fill:#fff;stroke:#000}}.hyperbola{{fill:none;stroke:#1f5fbf}}.axis{{stroke:#000}}</style>"
    )
    .unwrap();
    for (idx, (label, panel_ideal)) in panels.iter().enumerate() {
        let panel = Panel::new(spec, cap);
        writeln!(
            svg,
            "<g transform=\"translate({:.2},0.00)\">",
            idx as f64 * spec.size
        )
        .unwrap();
        if !label.is_empty() {
            writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\">{label}</text>",
                spec.margin,
                spec.margin / 2.0
            )
            .unwrap();
        }
        match panel_ideal {
            None => draw_staircase(&mut svg, &panel, &[Monomial::one(2)], &[]),
            Some(i) if i.is_zero() => {}
            Some(i) => {
                let (outer, inner) = staircase_corners(i)?;
                draw_staircase(&mut svg, &panel, &outer, &inner);
            }
        }
        draw_axes(&mut svg, &panel);
        for &c in &spec.levels {
            draw_hyperbola(&mut svg, &panel, c);
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn draw_axes(svg: &mut String, panel: &Panel) {
    let origin = panel.px(0.0, 0.0);
    let x_end = panel.px(panel.cap, 0.0);
    let y_end = panel.px(0.0, panel.cap);
    writeln!(
        svg,
        "<line class=\"axis\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
        origin.0, origin.1, x_end.0, x_end.1
    )
    .unwrap();
    writeln!(
        svg,
        "<line class=\"axis\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
        origin.0, origin.1, y_end.0, y_end.1
    )
    .unwrap();
}

/// `outer` is sorted by ascending first exponent.
fn draw_staircase(svg: &mut String, panel: &Panel, outer: &[Monomial], inner: &[Monomial]) {
    let coords = |m: &Monomial| (m.get(0) as f64, m.get(1) as f64);
    let mut pts = Vec::with_capacity(2 * outer.len() + 2);
    let (a0, _) = coords(&outer[0]);
    pts.push(panel.point(a0, panel.cap));
    for (j, g) in outer.iter().enumerate() {
        let (a, b) = coords(g);
        if j > 0 {
            let (_, prev_b) = coords(&outer[j - 1]);
            pts.push(panel.point(a, prev_b));
        }
        pts.push(panel.point(a, b));
    }
    let (_, b_last) = coords(outer.last().expect("nonempty"));
    pts.push(panel.point(panel.cap, b_last));
    let path = pts.join(" ");
    writeln!(
        svg,
        "<polygon class=\"ideal\" points=\"{path} {}\"/>",
        panel.point(panel.cap, panel.cap)
    )
    .unwrap();
    writeln!(svg, "<polyline class=\"staircase\" points=\"{path}\"/>").unwrap();
    for g in outer {
        let (a, b) = coords(g);
        if a <= panel.cap && b <= panel.cap {
            let (x, y) = panel.px(a, b);
            writeln!(svg, "<circle class=\"outer\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4.00\"/>")
                .unwrap();
        }
    }
    for c in inner {
        let (a, b) = coords(c);
        if a <= panel.cap && b <= panel.cap {
            let (x, y) = panel.px(a, b);
            writeln!(svg, "<circle class=\"inner\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4.00\"/>")
                .unwrap();
        }
    }
}

fn draw_hyperbola(svg: &mut String, panel: &Panel, c: f64) {
    // y = c / (x + 1) - 1 within the box: x from c/(cap+1) - 1 to c - 1.
    let lo = (c / (panel.cap + 1.0) - 1.0).max(0.0);
    let hi = (c - 1.0).min(panel.cap);
    let mut d = String::new();
    if c.is_finite() && hi >= lo {
        for i in 0..HYPERBOLA_SAMPLES {
            let x = lo + (hi - lo) * i as f64 / (HYPERBOLA_SAMPLES - 1) as f64;
            let y = (c / (x + 1.0) - 1.0).clamp(0.0, panel.cap);
            let (px, py) = panel.px(x, y);
            let cmd = if i == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{px:.2},{py:.2}").unwrap();
            if i + 1 < HYPERBOLA_SAMPLES {
                d.push(' ');
            }
        }
    }
    writeln!(
        svg,
        "<path class=\"hyperbola\" data-level=\"{c:.2}\" d=\"{d}\"/>"
    )
    .unwrap();
}
