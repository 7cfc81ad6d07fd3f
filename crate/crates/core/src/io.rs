//! Curve files: a `# closed` or `# arc` header, then one `x,y,z` node per line.

use std::fs;
use std::path::Path;

use crate::curve::{AnyCurve, ClosedSphereCurve, Polyline, SphereArc};
use crate::error::{Error, Result};
use crate::geom::SpherePoint;

/// Renders a curve in the CSV format, 17 significant digits per coordinate.
pub fn curve_to_csv(c: &dyn Polyline) -> String {
    let mut out = String::from(if c.is_closed() { "# closed\n" } else { "# arc\n" });
    for p in c.nodes() {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p.x(), p.y(), p.z()));
    }
    out
}

/// Parses the CSV format. Nodes are normalized onto the sphere and the
/// result is validated like any constructed curve.
pub fn curve_from_csv(text: &str) -> Result<AnyCurve> {
    let mut closed = None;
    let mut nodes = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(tag) = line.strip_prefix('#') {
            match tag.trim() {
                "closed" if closed.is_none() => closed = Some(true),
                "arc" if closed.is_none() => closed = Some(false),
                _ => {}
            }
            continue;
        }
        let coords: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if coords.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected 3 coordinates, got {}", lineno + 1, coords.len())));
        }
        nodes.push(SpherePoint::new(coords[0], coords[1], coords[2])?);
    }
    match closed {
        Some(true) => Ok(AnyCurve::Closed(ClosedSphereCurve::new(nodes)?)),
        Some(false) => Ok(AnyCurve::Arc(SphereArc::new(nodes)?)),
        None => Err(Error::Parse("missing '# closed' or '# arc' header".into())),
    }
}

pub fn write_curve(path: &Path, c: &dyn Polyline) -> Result<()> {
    fs::write(path, curve_to_csv(c))?;
    Ok(())
}

pub fn read_curve(path: &Path) -> Result<AnyCurve> {
    curve_from_csv(&fs::read_to_string(path)?)
}
