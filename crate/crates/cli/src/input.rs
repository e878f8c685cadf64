//! Cell and functional-spec parsing for the command line.

use std::path::Path;

use hexflow_core::energies::{AreaQuadrature, FunctionalKind, FunctionalSpec, KernelSpec};
use hexflow_core::geometry::{ConvexPolygon, Point};
use hexflow_core::tiling::{from_parallelogram, merge_collinear, regular_hexagon, sample_random};
use hexflow_core::HexCell;

/// Reads a cell from a polygon JSON file: a centrally symmetric hexagon is
/// taken as is, a quadrilateral (or hexagon with mid-edge vertices) is
/// wrapped as a degenerate cell.
pub fn cell_from_file(path: &Path) -> Result<HexCell, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let poly: ConvexPolygon =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    cell_from_polygon(poly)
}

pub fn cell_from_polygon(poly: ConvexPolygon) -> Result<HexCell, String> {
    if poly.len() == 6 {
        if let Ok(cell) = HexCell::try_new(poly.clone()) {
            return Ok(cell);
        }
    }
    let corners = merge_collinear(&poly, 1e-9);
    if corners.len() == 4 {
        return from_parallelogram(corners[0], corners[1], corners[2], corners[3])
            .map_err(|e| e.to_string());
    }
    Err("cell must be a centrally symmetric hexagon or a parallelogram".into())
}

/// `--kind` forms: `regular`, `random:<seed>`, or
/// `parallelogram:x1,y1,x2,y2,x3,y3,x4,y4`.
pub fn cell_from_kind(kind: &str) -> Result<HexCell, String> {
    if kind == "regular" {
        return regular_hexagon(1.0).map_err(|e| e.to_string());
    }
    if let Some(seed) = kind.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|_| format!("bad seed in `{kind}`"))?;
        return sample_random(seed).map_err(|e| e.to_string());
    }
    if let Some(coords) = kind.strip_prefix("parallelogram:") {
        let vals: Vec<f64> = coords
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| format!("bad coordinates in `{kind}`"))?;
        if vals.len() != 8 {
            return Err("parallelogram needs 8 coordinates".into());
        }
        let p: Vec<Point> = vals.chunks(2).map(|c| Point::new(c[0], c[1])).collect();
        return from_parallelogram(p[0], p[1], p[2], p[3]).map_err(|e| e.to_string());
    }
    Err(format!(
        "unknown kind `{kind}` (expected regular, random:<seed>, or parallelogram:<8 coords>)"
    ))
}

pub fn load_cell(input: Option<&Path>, kind: Option<&str>) -> Result<HexCell, String> {
    match (input, kind) {
        (Some(path), None) => cell_from_file(path),
        (None, Some(kind)) => cell_from_kind(kind),
        (None, None) => Err("one of --input or --kind is required".into()),
        (Some(_), Some(_)) => Err("--input and --kind are mutually exclusive".into()),
    }
}

/// Like [`load_cell`], but a 6-vertex polygon that fails the tile invariants
/// is still admitted (flagged), so the tiling witness can reject it itself.
pub fn load_cell_lenient(
    input: Option<&Path>,
    kind: Option<&str>,
) -> Result<(HexCell, bool), String> {
    match load_cell(input, kind) {
        Ok(cell) => Ok((cell, true)),
        Err(strict_err) => {
            let Some(path) = input else {
                return Err(strict_err);
            };
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let poly: ConvexPolygon =
                serde_json::from_str(&text).map_err(|_| strict_err.clone())?;
            hexflow_core::HexCell::new_unchecked(poly)
                .map(|cell| (cell, false))
                .map_err(|_| strict_err)
        }
    }
}

/// Functional strings: `perimeter`, `cheeger`, `lambda1[:h]`, `logcap[:m]`,
/// `riesz:<kernel>`, `nonlocal-perimeter:<kernel>` with kernels `exp:<beta>`,
/// `riesz:<alpha>`, `frac:<s>`.
pub fn parse_functional(text: &str) -> Result<FunctionalSpec, String> {
    let mut parts = text.splitn(2, ':');
    let head = parts.next().unwrap_or_default();
    let rest = parts.next();
    let kind = match head {
        "perimeter" => FunctionalKind::Perimeter,
        "cheeger" => FunctionalKind::Cheeger,
        "lambda1" => FunctionalKind::DirichletLambda1,
        "logcap" => FunctionalKind::LogCapacity,
        "riesz" => FunctionalKind::RieszEnergy(parse_kernel(
            rest.ok_or("riesz needs a kernel, e.g. riesz:exp:1")?,
        )?),
        "nonlocal-perimeter" => FunctionalKind::NonlocalPerimeter(parse_kernel(
            rest.ok_or("nonlocal-perimeter needs a kernel, e.g. nonlocal-perimeter:exp:1")?,
        )?),
        other => return Err(format!("unknown functional `{other}`")),
    };
    let mut spec = FunctionalSpec {
        kind,
        quad: AreaQuadrature::default(),
        mesh_h: 0.1,
        panels: 192,
    };
    match (&spec.kind, rest) {
        (FunctionalKind::DirichletLambda1, Some(h)) => {
            spec.mesh_h = h.parse().map_err(|_| format!("bad mesh size `{h}`"))?;
        }
        (FunctionalKind::LogCapacity, Some(m)) => {
            spec.panels = m.parse().map_err(|_| format!("bad panel count `{m}`"))?;
        }
        _ => {}
    }
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn parse_kernel(text: &str) -> Result<KernelSpec, String> {
    let mut parts = text.splitn(2, ':');
    let family = parts.next().unwrap_or_default();
    let param: f64 = parts
        .next()
        .ok_or_else(|| format!("kernel `{text}` needs a parameter"))?
        .parse()
        .map_err(|_| format!("bad kernel parameter in `{text}`"))?;
    let kernel = match family {
        "exp" => KernelSpec::Exponential { beta: param },
        "riesz" => KernelSpec::RieszPower { alpha: param },
        "frac" => KernelSpec::FractionalSing { s: param },
        other => return Err(format!("unknown kernel family `{other}`")),
    };
    kernel.validate().map_err(|e| e.to_string())?;
    Ok(kernel)
}
