// SPDX-License-Identifier: MIT OR Apache-2.0

//! Minimal deterministic SVG line charts.

use std::fmt::Write as _;

use driftsplit::{EnvelopePair, Series};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 0.05;

/// A band to draw: its nesting level (1 = first split) and envelopes.
pub struct Band<'a> {
    pub level: usize,
    pub pair: &'a EnvelopePair<f64>,
}

struct Frame {
    t0: f64,
    t1: f64,
    v0: f64,
    v1: f64,
}

impl Frame {
    fn new(series: &Series) -> Self {
        let ts = series.timestamps();
        let (mut t0, mut t1) = (ts[0], ts[ts.len() - 1]);
        let (mut v0, mut v1) = series
            .values()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        // degenerate extents get a unit span so the mapping stays finite
        if t1 <= t0 {
            t0 -= 0.5;
            t1 += 0.5;
        }
        if v1 <= v0 {
            v0 -= 0.5;
            v1 += 0.5;
        }
        let (dt, dv) = ((t1 - t0) * MARGIN, (v1 - v0) * MARGIN);
        Self {
            t0: t0 - dt,
            t1: t1 + dt,
            v0: v0 - dv,
            v1: v1 + dv,
        }
    }

    fn point(&self, t: f64, v: f64) -> (f64, f64) {
        (
            (t - self.t0) / (self.t1 - self.t0) * WIDTH,
            HEIGHT - (v - self.v0) / (self.v1 - self.v0) * HEIGHT,
        )
    }
}

fn polyline(out: &mut String, frame: &Frame, class: &str, ts: &[f64], vs: &[f64]) {
    let points: Vec<String> = ts
        .iter()
        .zip(vs)
        .map(|(&t, &v)| {
            let (x, y) = frame.point(t, v);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    writeln!(
        out,
        r#"<polyline class="{class}" points="{}"/>"#,
        points.join(" ")
    )
    .expect("string write");
}

pub fn render_svg(series: &Series, bands: &[Band<'_>]) -> String {
    let frame = Frame::new(series);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("string write");
    out.push_str(
        "<style>polyline{fill:none;stroke-width:1}.series{stroke:#444}\
         .upper{stroke:#c0392b}.lower{stroke:#2471a3}</style>\n",
    );
    let (x0, y0) = frame.point(frame.t0, frame.v0);
    let (x1, y1) = frame.point(frame.t1, frame.v1);
    writeln!(
        out,
        r##"<rect x="{x0:.3}" y="{y1:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#ccc"/>"##,
        x1 - x0,
        y0 - y1
    )
    .expect("string write");
    polyline(
        &mut out,
        &frame,
        "series",
        &series.timestamps(),
        series.values(),
    );
    for band in bands {
        let opacity = 1.0 / band.level as f64;
        writeln!(
            out,
            r#"<g class="level-{}" opacity="{opacity:.3}">"#,
            band.level
        )
        .expect("string write");
        polyline(
            &mut out,
            &frame,
            "upper",
            &band.pair.timestamps,
            &band.pair.upper,
        );
        if let Some(lower) = &band.pair.lower {
            polyline(&mut out, &frame, "lower", &band.pair.timestamps, lower);
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
