//! CSV, SVG and JSON writers for sections and closed geodesics.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;

use super::{ClosedGeodesic, Section};
use crate::Real;

/// Columns `traj_id, crossing_index, s, phi, phi_dot`.
pub fn write_section_csv<T: Real + Serialize>(section: &Section<T>, w: impl Write) -> io::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for p in &section.points {
        wr.serialize(p).map_err(io::Error::other)?;
    }
    wr.flush()
}

/// Scatter plot with φ across [0, 2π] and φ̇ up [−φ̇_m, φ̇_m], one hue per
/// trajectory.
pub fn write_section_svg<T: Real>(section: &Section<T>, mut w: impl Write) -> io::Result<()> {
    let (width, height, pad) = (800.0, 500.0, 40.0);
    let range = section.phi_dot_max.to_f64().unwrap_or(1.0);
    let sx = |phi: f64| pad + phi / TAU * (width - 2.0 * pad);
    let sy = |pd: f64| height - pad - (pd + range) / (2.0 * range) * (height - 2.0 * pad);
    let mut body = String::new();
    for p in &section.points {
        let hue = (p.traj_id as f64 * 137.508) % 360.0;
        let (phi, pd) = (p.phi.to_f64().unwrap_or(0.0), p.phi_dot.to_f64().unwrap_or(0.0));
        let _ = writeln!(
            body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1" fill="hsl({hue:.0},70%,40%)"/>"#,
            sx(phi),
            sy(pd)
        );
    }
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )?;
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        w,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        width - 2.0 * pad,
        height - 2.0 * pad
    )?;
    writeln!(w, r#"<clipPath id="plot"><rect x="{pad}" y="{pad}" width="{}" height="{}"/></clipPath>"#, width - 2.0 * pad, height - 2.0 * pad)?;
    writeln!(w, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">φ</text>"#, width / 2.0, height - 10.0)?;
    writeln!(w, r#"<text x="12" y="{}" font-size="14">φ̇</text>"#, height / 2.0)?;
    writeln!(w, r#"<text x="{pad}" y="{}" font-size="11">0</text>"#, height - pad + 14.0)?;
    writeln!(w, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">2π</text>"#, width - pad, height - pad + 14.0)?;
    writeln!(w, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{range:.4}</text>"#, pad - 4.0, pad + 4.0)?;
    writeln!(w, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{:.4}</text>"#, pad - 4.0, height - pad, -range)?;
    writeln!(w, r#"<g clip-path="url(#plot)">"#)?;
    w.write_all(body.as_bytes())?;
    writeln!(w, "</g>\n</svg>")
}

/// Pretty-printed JSON array of closed geodesics.
pub fn write_closed_json<T: Real + Serialize>(found: &[ClosedGeodesic<T>], w: impl Write) -> io::Result<()> {
    serde_json::to_writer_pretty(w, found).map_err(io::Error::other)
}
