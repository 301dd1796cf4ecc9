use std::fmt::Write;

use angle_realize::geom::{normalize_similarity, Config};
use angle_realize::{Certificate, Error, PointConfig, Result};

const WIDTH: f64 = 600.0;

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// SVG drawing of a planar configuration after similarity normalization:
/// one labelled circle per point and one arc per certified angle.
///
/// Configurations of higher dimension are refused unless
/// `project_first_two` is set, in which case the first two coordinates are
/// drawn.
pub fn render_svg(config: &PointConfig, certificate: Option<&Certificate>, project_first_two: bool) -> Result<String> {
    let planar = match config.dim() {
        2 => config.clone(),
        d if project_first_two => Config::new(2, config.points().iter().map(|p| p[..2].to_vec()).collect())
            .map_err(|_| Error::InvalidConfig(format!("points coincide after projecting {d} dimensions to two")))?,
        d => return Err(Error::DimensionUnsupported(d)),
    };
    let norm = normalize_similarity(&planar)?;
    // screen coordinates: y grows downwards
    let pts: Vec<(f64, f64)> = norm.points().iter().map(|p| (p[0], -p[1])).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let extent = (x1 - x0).max(y1 - y0);
    let margin = 0.05 * extent;
    let (vx, vy, vw, vh) = (x0 - margin, y0 - margin, x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let height = WIDTH * vh / vw;
    let r = 0.012 * extent;
    let stroke = 0.004 * extent;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(WIDTH),
        num(height),
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    if let Some(cert) = certificate {
        let _ = writeln!(out, r##"<g class="arcs" fill="none" stroke="#c0392b" stroke-width="{}">"##, num(stroke));
        for (k, a) in cert.assignments.iter().enumerate() {
            let apex = a.instance.apex;
            let [i, j] = a.instance.ends;
            if [apex, i, j].iter().any(|&q| q >= pts.len()) {
                return Err(Error::IndexOutOfRange { index: apex.max(i).max(j), len: pts.len() });
            }
            let rho = 0.06 * extent * (1.0 + 0.25 * (k % 4) as f64);
            let p = pts[apex];
            let unit = |q: (f64, f64)| {
                let (dx, dy) = (q.0 - p.0, q.1 - p.1);
                let n = dx.hypot(dy);
                (dx / n, dy / n)
            };
            let (u, w) = (unit(pts[i]), unit(pts[j]));
            let sweep = u8::from(u.0 * w.1 - u.1 * w.0 > 0.0);
            let _ = writeln!(
                out,
                r#"<path d="M {} {} A {} {} 0 0 {} {} {}"/>"#,
                num(p.0 + rho * u.0),
                num(p.1 + rho * u.1),
                num(rho),
                num(rho),
                sweep,
                num(p.0 + rho * w.0),
                num(p.1 + rho * w.1)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, r##"<g class="points" fill="#1f3a5f">"##);
    for (idx, &(x, y)) in pts.iter().enumerate() {
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}"/>"#, num(x), num(y), num(r));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="{}">{idx}</text>"#,
            num(x + 1.5 * r),
            num(y - 1.5 * r),
            num(0.04 * extent)
        );
    }
    let _ = writeln!(out, "</g>\n</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use angle_realize::geom::verify;
    use angle_realize::AngleMultiset;

    fn triangle(scale: f64) -> PointConfig {
        Config::new(2, vec![vec![0.0, 0.0], vec![3.0 * scale, 0.0], vec![scale, 2.0 * scale]]).unwrap()
    }

    fn certificate(c: &PointConfig) -> Certificate {
        let angles = angle_realize::geom::enumerate_angles(c).unwrap();
        let ms = AngleMultiset::from_radians(angles.iter().map(|a| a.measured.radians())).unwrap();
        verify(c, &ms, 1e-9).unwrap()
    }

    #[test]
    fn golden_triangle() {
        let c = triangle(1.0);
        let svg = render_svg(&c, Some(&certificate(&c)), false).unwrap();
        assert_eq!(svg, include_str!("../tests/golden/triangle.svg"));
    }

    #[test]
    fn similarity_invariant() {
        let a = render_svg(&triangle(1.0), None, false).unwrap();
        let b = render_svg(&triangle(2.0), None, false).unwrap();
        assert_eq!(a, b);
        let shifted = triangle(1.0).map_points(|p| vec![p[0] - 4.0, p[1] + 1.5]).unwrap();
        assert_eq!(a, render_svg(&shifted, None, false).unwrap());
    }

    #[test]
    fn one_arc_per_assignment() {
        let c = Config::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.2, 0.9], vec![0.1, 1.1]]).unwrap();
        let cert = certificate(&c);
        let svg = render_svg(&c, Some(&cert), false).unwrap();
        assert_eq!(svg.matches("<path ").count(), cert.len());
        assert_eq!(svg.matches("<circle ").count(), 4);
        assert_eq!(svg.matches("<text ").count(), 4);
    }

    #[test]
    fn higher_dimensions_need_projection() {
        let c = Config::new(3, vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 2.0], vec![0.0, 1.0, -1.0]]).unwrap();
        assert_eq!(render_svg(&c, None, false), Err(Error::DimensionUnsupported(3)));
        let svg = render_svg(&c, None, true).unwrap();
        assert_eq!(svg.matches("<circle ").count(), 3);
    }
}
