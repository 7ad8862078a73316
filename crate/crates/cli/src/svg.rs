//! Hand-written SVG figures of disk configurations and loop reports.
//!
//! Output depends only on the input values: elements are emitted in a
//! fixed order and coordinates are printed with three decimals.

use std::fmt::Write;

use hgschottky::schottky::orbit_sample;
use hgschottky::{Complex64, GeneralizedDisk, LoopKind, SchottkyConfig, SpherePoint};

use crate::format::{c_in, LoopReportJson};

/// Longest side of a panel, in SVG units.
const PANEL: f64 = 600.0;
const PAD: f64 = 0.08;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// World rectangle mapped onto a panel, y pointing up.
#[derive(Clone, Copy, Debug)]
struct Frame {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    scale: f64,
}

impl Frame {
    fn fit(bounds: &Bounds) -> Frame {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = match bounds.rect {
            Some(r) => r,
            None => (-1.0, 1.0, -1.0, 1.0),
        };
        let span = (xmax - xmin).max(ymax - ymin).max(1e-9);
        let pad = PAD * span;
        xmin -= pad;
        xmax += pad;
        ymin -= pad;
        ymax += pad;
        Frame {
            xmin,
            xmax,
            ymin,
            ymax,
            scale: PANEL / (xmax - xmin).max(ymax - ymin),
        }
    }

    fn width(&self) -> f64 {
        (self.xmax - self.xmin) * self.scale
    }

    fn height(&self) -> f64 {
        (self.ymax - self.ymin) * self.scale
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.xmin) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        (self.ymax - y) * self.scale
    }

    fn xy(&self, z: Complex64) -> String {
        format!("{},{}", num(self.x(z.re)), num(self.y(z.im)))
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.xmin, self.ymin),
            Complex64::new(self.xmax, self.ymin),
            Complex64::new(self.xmax, self.ymax),
            Complex64::new(self.xmin, self.ymax),
        ]
    }
}

#[derive(Default)]
struct Bounds {
    rect: Option<(f64, f64, f64, f64)>,
}

impl Bounds {
    fn add(&mut self, z: Complex64) {
        if !z.is_finite() {
            return;
        }
        self.rect = Some(match self.rect {
            None => (z.re, z.re, z.im, z.im),
            Some((a, b, c, d)) => (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im)),
        });
    }

    fn add_point(&mut self, p: SpherePoint) {
        if let Some(z) = p.to_complex() {
            self.add(z);
        }
    }

    fn add_disk(&mut self, d: &GeneralizedDisk) {
        if let (Some(c), Some(r)) = (d.center(), d.radius()) {
            self.add(c - Complex64::new(r, r));
            self.add(c + Complex64::new(r, r));
        }
    }
}

fn disk_element(out: &mut String, f: &Frame, d: &GeneralizedDisk, class: &str, color: &str) {
    let style = format!("class=\"{class}\" fill=\"{color}\" fill-opacity=\"0.25\" stroke=\"{color}\" stroke-width=\"1.5\"");
    match (d.center(), d.radius()) {
        (Some(c), Some(r)) if d.is_bounded() => {
            let _ = writeln!(
                out,
                "<circle {style} cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(f.x(c.re)),
                num(f.y(c.im)),
                num(r * f.scale)
            );
        }
        (Some(c), Some(r)) => {
            // complement of a disk: the panel with a circular hole
            let (cx, cy, rr) = (f.x(c.re), f.y(c.im), r * f.scale);
            let _ = writeln!(
                out,
                "<path {style} fill-rule=\"evenodd\" d=\"M0,0 H{w} V{h} H0 Z M{x0},{cy} A{rr},{rr} 0 1 0 {x1},{cy} A{rr},{rr} 0 1 0 {x0},{cy} Z\"/>",
                w = num(f.width()),
                h = num(f.height()),
                x0 = num(cx - rr),
                x1 = num(cx + rr),
                cy = num(cy),
                rr = num(rr),
            );
        }
        _ => {
            // half-plane clipped to the panel
            let side = |z: Complex64| 2.0 * (d.b().conj() * z).re + d.d();
            let poly = clip_half_plane(&f.corners(), side);
            let pts: Vec<String> = poly.iter().map(|&z| f.xy(z)).collect();
            let _ = writeln!(out, "<polygon {style} points=\"{}\"/>", pts.join(" "));
        }
    }
}

/// The part of a convex polygon where `side <= 0`.
fn clip_half_plane(poly: &[Complex64], side: impl Fn(Complex64) -> f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (sp, sq) = (side(p), side(q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0) != (sq < 0.0) && sp != sq {
            out.push(p + (q - p) * (sp / (sp - sq)));
        }
    }
    out
}

fn marker(out: &mut String, f: &Frame, z: Complex64, class: &str, color: &str, r: f64) {
    let _ = writeln!(
        out,
        "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{color}\"/>",
        num(f.x(z.re)),
        num(f.y(z.im)),
        num(r)
    );
}

fn reference_circle(out: &mut String, f: &Frame, c: Complex64, r: f64) {
    let _ = writeln!(
        out,
        "<circle class=\"reference\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>",
        num(f.x(c.re)),
        num(f.y(c.im)),
        num(r * f.scale)
    );
}

fn polyline(out: &mut String, f: &Frame, pts: &[Complex64], class: &str) {
    let pts: Vec<String> = pts.iter().map(|&z| f.xy(z)).collect();
    let _ = writeln!(
        out,
        "<polyline class=\"{class}\" points=\"{}\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\"/>",
        pts.join(" ")
    );
}

fn document(width: f64, height: f64, title: &str, body: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>", num(width), num(height));
    s.push_str(body);
    s.push_str("</svg>\n");
    s
}

fn config_body(out: &mut String, f: &Frame, disks: &[GeneralizedDisk; 4]) {
    for (i, d) in disks.iter().enumerate() {
        disk_element(out, f, d, "disk", COLORS[i / 2]);
    }
}

/// The four disks, the finite fixed points and optionally the images of
/// the disk centers under reduced words up to `orbit_depth`.
pub fn plot_config(cfg: &SchottkyConfig, orbit_depth: Option<usize>) -> hgschottky::Result<String> {
    let disks = cfg.disks();
    let fixed = [cfg.f1, cfg.f1p, cfg.f2, cfg.f2p];
    let mut b = Bounds::default();
    disks.iter().for_each(|d| b.add_disk(d));
    fixed.iter().for_each(|&p| b.add_point(p));
    let f = Frame::fit(&b);
    let mut body = String::new();
    config_body(&mut body, &f, &disks);
    for (i, p) in fixed.iter().enumerate() {
        if let Some(z) = p.to_complex() {
            marker(&mut body, &f, z, "fixed-point", COLORS[i / 2], 3.0);
        }
    }
    if let Some(depth) = orbit_depth {
        for p in orbit_sample(cfg, depth)? {
            if let Some(z) = p.point.to_complex().filter(|z| z.re.abs() < 1e6 && z.im.abs() < 1e6) {
                marker(&mut body, &f, z, "orbit", "#000000", 1.0);
            }
        }
    }
    Ok(document(f.width(), f.height(), "Schottky configuration", &body))
}

fn sample_disks(report: &LoopReportJson, i: usize) -> Option<[GeneralizedDisk; 4]> {
    let ds = report.samples[i].disks.as_ref()?;
    let v: Vec<GeneralizedDisk> = ds.iter().filter_map(|d| d.to_disk().ok()).collect();
    v.try_into().ok()
}

fn report_bounds(report: &LoopReportJson, panels: &[usize]) -> Bounds {
    let mut b = Bounds::default();
    for s in &report.samples {
        b.add(c_in(s.alpha));
    }
    for &i in panels {
        if let Some(ds) = sample_disks(report, i) {
            ds.iter().for_each(|d| b.add_disk(d));
        }
    }
    b
}

fn reference_layer(out: &mut String, f: &Frame, report: &LoopReportJson) {
    let Some(kind) = report.loop_kind() else {
        return;
    };
    let p = report.profile.to_profile();
    let e = p.epsilon();
    match kind {
        LoopKind::AlphaAroundD0 => {
            let big_r = p.big_r(kind);
            reference_circle(out, f, Complex64::new(0.0, 0.0), e * big_r);
            reference_circle(out, f, Complex64::new(0.0, 0.0), big_r);
        }
        LoopKind::MultiplierGamma2 => reference_circle(out, f, Complex64::new(e, 0.0), p.r(kind)),
        _ => {}
    }
}

fn alpha_path(report: &LoopReportJson, upto: usize) -> Vec<Complex64> {
    report.samples[..=upto].iter().map(|s| c_in(s.alpha)).collect()
}

/// Disks at the first sample and the path of `alpha` over the loop.
pub fn plot_report(report: &LoopReportJson) -> Result<String, String> {
    if report.samples.is_empty() {
        return Err("loop report has no samples".into());
    }
    let f = Frame::fit(&report_bounds(report, &[0]));
    let mut body = String::new();
    if let Some(ds) = sample_disks(report, 0) {
        config_body(&mut body, &f, &ds);
    }
    reference_layer(&mut body, &f, report);
    polyline(&mut body, &f, &alpha_path(report, report.samples.len() - 1), "alpha-path");
    marker(&mut body, &f, c_in(report.samples[0].alpha), "alpha-start", "#2ca02c", 3.0);
    marker(&mut body, &f, c_in(report.winding_center), "winding-center", "#000000", 2.0);
    Ok(document(f.width(), f.height(), &format!("Loop {}", report.kind), &body))
}

/// Panels at `t = 0, 1/4, 1/2, 3/4` side by side, each with the disks at
/// that time and the path of `alpha` so far.
pub fn plot_strip(report: &LoopReportJson) -> Result<String, String> {
    if report.samples.is_empty() {
        return Err("loop report has no samples".into());
    }
    let panels: Vec<usize> = [0.0, 0.25, 0.5, 0.75]
        .iter()
        .map(|&t| {
            (0..report.samples.len())
                .min_by(|&i, &j| (report.samples[i].t - t).abs().total_cmp(&(report.samples[j].t - t).abs()))
                .unwrap_or(0)
        })
        .collect();
    let f = Frame::fit(&report_bounds(report, &panels));
    let mut body = String::new();
    for (k, &i) in panels.iter().enumerate() {
        let _ = writeln!(body, "<g class=\"panel\" transform=\"translate({},0)\">", num(k as f64 * f.width()));
        if let Some(ds) = sample_disks(report, i) {
            config_body(&mut body, &f, &ds);
        }
        polyline(&mut body, &f, &alpha_path(report, i), "alpha-path");
        marker(&mut body, &f, c_in(report.samples[i].alpha), "alpha-start", "#2ca02c", 3.0);
        let _ = writeln!(
            body,
            "<text x=\"8\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">t = {}</text>",
            num(report.samples[i].t)
        );
        body.push_str("</g>\n");
    }
    Ok(document(
        panels.len() as f64 * f.width(),
        f.height(),
        &format!("Loop {}", report.kind),
        &body,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero_printed_once() {
        assert_eq!(num(-0.0), "0.000");
        assert_eq!(num(-1e-9), "0.000");
        assert_eq!(num(1.23456), "1.235");
    }

    #[test]
    fn half_plane_clip_keeps_left_half() {
        let sq = [
            Complex64::new(-1.0, -1.0),
            Complex64::new(1.0, -1.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(-1.0, 1.0),
        ];
        let poly = clip_half_plane(&sq, |z| z.re);
        assert_eq!(poly.len(), 4);
        assert!(poly.iter().all(|z| z.re <= 1e-15));
    }

    #[test]
    fn exterior_disk_drawn_as_hole() {
        let f = Frame::fit(&Bounds {
            rect: Some((-2.0, 2.0, -2.0, 2.0)),
        });
        let mut s = String::new();
        disk_element(&mut s, &f, &GeneralizedDisk::exterior(Complex64::new(0.0, 0.0), 1.0).unwrap(), "disk", "red");
        assert!(s.starts_with("<path") && s.contains("evenodd"));
    }
}
