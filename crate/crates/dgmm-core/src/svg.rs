//! Hand-emitted radar (spider) charts: one radial axis per dimension or
//! activity, a fixed 0..4 radial scale, and one polygon per data series.
//! Output is a standalone SVG 1.1 document, byte-deterministic for
//! identical input.

use crate::analytics::{ActivityProfile, DimensionProfile};

const SIZE: f64 = 480.0;
const CENTER: f64 = SIZE / 2.0;
const RADIUS: f64 = 170.0;
const LABEL_RADIUS: f64 = RADIUS + 18.0;
const SCALE_MAX: f64 = 4.0;

const SERIES_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// One polygon of values, axis-aligned with the chart's axes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarSeries {
    pub label: String,
    pub values: Vec<f64>,
}

/// A radar chart: labelled axes plus one or more value series on the fixed
/// 0..4 scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarChart {
    pub title: String,
    pub axes: Vec<String>,
    pub series: Vec<RadarSeries>,
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn vertex(axis: usize, axis_count: usize, value: f64) -> (f64, f64) {
    let angle = 2.0 * std::f64::consts::PI * axis as f64 / axis_count as f64
        - std::f64::consts::FRAC_PI_2;
    let r = RADIUS * (value / SCALE_MAX).clamp(0.0, 1.0);
    (CENTER + r * angle.cos(), CENTER + r * angle.sin())
}

impl RadarChart {
    pub fn from_dimension_profile(profile: &DimensionProfile) -> RadarChart {
        RadarChart {
            title: format!("Dimension profile, level {}", profile.level),
            axes: profile.entries.iter().map(|e| e.dimension.clone()).collect(),
            series: vec![RadarSeries {
                label: format!("Level {}", profile.level),
                values: profile.entries.iter().map(|e| e.average.to_f64()).collect(),
            }],
        }
    }

    /// Axes are the dimension's activities; one series per assessed level.
    pub fn from_activity_profile(profile: &ActivityProfile) -> RadarChart {
        let mut axes: Vec<(u8, String)> = Vec::new();
        for row in &profile.rows {
            if !axes.iter().any(|(aid, _)| *aid == row.aid) {
                axes.push((row.aid, row.abbreviation.clone()));
            }
        }
        axes.sort_by_key(|(aid, _)| *aid);
        let mut levels: Vec<u8> = profile.rows.iter().map(|r| r.level).collect();
        levels.sort_unstable();
        levels.dedup();

        let series = levels
            .iter()
            .map(|&level| RadarSeries {
                label: format!("Level {level}"),
                values: axes
                    .iter()
                    .map(|(aid, _)| {
                        profile
                            .rows
                            .iter()
                            .find(|r| r.aid == *aid && r.level == level)
                            .map(|r| r.average.to_f64())
                            .unwrap_or(0.0)
                    })
                    .collect(),
            })
            .collect();

        RadarChart {
            title: format!("{} activities by level", profile.dimension),
            axes: axes.into_iter().map(|(_, label)| label).collect(),
            series,
        }
    }

    /// Renders the chart as a standalone SVG document.
    pub fn render(&self) -> String {
        let n = self.axes.len().max(1);
        let mut out = String::new();
        out.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        out.push('\n');
        out.push_str(&format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        ));
        out.push('\n');
        out.push_str(&format!(
            r#"  <title>{}</title>"#,
            escape_xml(&self.title)
        ));
        out.push('\n');
        out.push_str(&format!(
            r##"  <rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##
        ));
        out.push('\n');

        // grid rings at ratings 1..=4
        for ring in 1..=4 {
            let mut points = Vec::with_capacity(n);
            for axis in 0..n {
                let (x, y) = vertex(axis, n, ring as f64);
                points.push(format!("{x:.2},{y:.2}"));
            }
            out.push_str(&format!(
                r##"  <polygon points="{}" fill="none" stroke="#d0d0d0" stroke-width="1"/>"##,
                points.join(" ")
            ));
            out.push('\n');
        }

        // axis spokes and labels
        for (axis, label) in self.axes.iter().enumerate() {
            let (x, y) = vertex(axis, n, SCALE_MAX);
            out.push_str(&format!(
                r##"  <line x1="{CENTER:.2}" y1="{CENTER:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#b0b0b0" stroke-width="1"/>"##
            ));
            out.push('\n');
            let angle = 2.0 * std::f64::consts::PI * axis as f64 / n as f64
                - std::f64::consts::FRAC_PI_2;
            let lx = CENTER + LABEL_RADIUS * angle.cos();
            let ly = CENTER + LABEL_RADIUS * angle.sin();
            let anchor = if angle.cos() < -0.1 {
                "end"
            } else if angle.cos() > 0.1 {
                "start"
            } else {
                "middle"
            };
            out.push_str(&format!(
                r#"  <text x="{lx:.2}" y="{ly:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}" dominant-baseline="middle">{}</text>"#,
                escape_xml(label)
            ));
            out.push('\n');
        }

        // data polygons
        for (i, series) in self.series.iter().enumerate() {
            let color = SERIES_COLORS[i % SERIES_COLORS.len()];
            let mut points = Vec::with_capacity(n);
            for axis in 0..n {
                let value = series.values.get(axis).copied().unwrap_or(0.0);
                let (x, y) = vertex(axis, n, value);
                points.push(format!("{x:.2},{y:.2}"));
            }
            out.push_str(&format!(
                r#"  <polygon points="{}" fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-width="2"><title>{}</title></polygon>"#,
                points.join(" "),
                escape_xml(&series.label)
            ));
            out.push('\n');
        }

        // legend
        for (i, series) in self.series.iter().enumerate() {
            let color = SERIES_COLORS[i % SERIES_COLORS.len()];
            let y = 16.0 + 14.0 * i as f64;
            out.push_str(&format!(
                r#"  <rect x="8" y="{:.2}" width="10" height="10" fill="{color}"/>"#,
                y - 9.0
            ));
            out.push('\n');
            out.push_str(&format!(
                r#"  <text x="22" y="{y:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
                escape_xml(&series.label)
            ));
            out.push('\n');
        }

        out.push_str("</svg>\n");
        out
    }
}
