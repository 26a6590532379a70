//! OBJ and STL mesh loading plus a canonical OBJ writer.
//!
//! OBJ polygons are fan-triangulated. STL vertices are welded at 1e-9 m so
//! the per-facet soup becomes an indexed mesh. Formats are picked by file
//! extension first, then by sniffing the content.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::{mesh::TriangleMesh, Point3};

const WELD_TOLERANCE: f64 = 1e-9;
const DEGENERATE_AREA: f64 = 1e-12;

/// Loads an OBJ or STL file into a triangle mesh.
///
/// Zero-area faces (below 1e-12 m²) are dropped; the count is available via
/// [`TriangleMesh::degenerate_dropped`].
pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriangleMesh> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let bytes = std::fs::read(path)?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("obj") => parse_obj(&bytes, path),
        Some("stl") => parse_stl(&bytes, path),
        _ => match sniff_format(&bytes) {
            Some(Format::Obj) => parse_obj(&bytes, path),
            Some(Format::Stl) => parse_stl(&bytes, path),
            None => Err(Error::UnsupportedFormat(path.to_path_buf())),
        },
    }
}

enum Format {
    Obj,
    Stl,
}

fn sniff_format(bytes: &[u8]) -> Option<Format> {
    if is_binary_stl(bytes) {
        return Some(Format::Stl);
    }
    let text = String::from_utf8_lossy(&bytes[..bytes.len().min(4096)]);
    if text.trim_start().starts_with("solid") && text.contains("facet") {
        return Some(Format::Stl);
    }
    for line in text.lines() {
        let line = line.trim_start();
        if line.starts_with("v ") || line.starts_with("f ") || line.starts_with("mtllib") {
            return Some(Format::Obj);
        }
    }
    None
}

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::MalformedMesh {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn parse_obj(bytes: &[u8], path: &Path) -> Result<TriangleMesh> {
    let text =
        std::str::from_utf8(bytes).map_err(|_| malformed(path, "OBJ file is not valid UTF-8"))?;
    let mut vertices: Vec<Point3> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut coords = [0.0; 3];
                for c in &mut coords {
                    let tok = tokens
                        .next()
                        .ok_or_else(|| malformed(path, format!("short vertex, line {}", lineno + 1)))?;
                    *c = tok.parse::<f64>().map_err(|_| {
                        malformed(path, format!("bad vertex coordinate, line {}", lineno + 1))
                    })?;
                }
                vertices.push(Point3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let mut poly = Vec::new();
                for tok in tokens {
                    let first = tok.split('/').next().unwrap_or("");
                    let raw: i64 = first.parse().map_err(|_| {
                        malformed(path, format!("bad face index `{tok}`, line {}", lineno + 1))
                    })?;
                    let idx = if raw > 0 {
                        (raw - 1) as usize
                    } else if raw < 0 {
                        let back = (-raw) as usize;
                        if back > vertices.len() {
                            return Err(malformed(
                                path,
                                format!("relative index out of range, line {}", lineno + 1),
                            ));
                        }
                        vertices.len() - back
                    } else {
                        return Err(malformed(path, format!("zero face index, line {}", lineno + 1)));
                    };
                    if idx >= vertices.len() {
                        return Err(malformed(
                            path,
                            format!("face index out of range, line {}", lineno + 1),
                        ));
                    }
                    poly.push(idx);
                }
                if poly.len() < 3 {
                    return Err(malformed(
                        path,
                        format!("face with fewer than 3 vertices, line {}", lineno + 1),
                    ));
                }
                for k in 1..poly.len() - 1 {
                    faces.push([poly[0], poly[k], poly[k + 1]]);
                }
            }
            // Normals, texture coords, groups, materials and comments are
            // irrelevant for collision geometry.
            _ => {}
        }
    }

    if faces.is_empty() {
        return Err(malformed(path, "no faces"));
    }
    finish(vertices, faces, path)
}

fn is_binary_stl(bytes: &[u8]) -> bool {
    if bytes.len() < 84 {
        return false;
    }
    let count = u32::from_le_bytes([bytes[80], bytes[81], bytes[82], bytes[83]]) as usize;
    bytes.len() == 84 + count * 50
}

fn parse_stl(bytes: &[u8], path: &Path) -> Result<TriangleMesh> {
    if is_binary_stl(bytes) {
        parse_binary_stl(bytes, path)
    } else {
        parse_ascii_stl(bytes, path)
    }
}

fn parse_binary_stl(bytes: &[u8], path: &Path) -> Result<TriangleMesh> {
    let count = u32::from_le_bytes([bytes[80], bytes[81], bytes[82], bytes[83]]) as usize;
    if count == 0 {
        return Err(malformed(path, "no facets"));
    }
    let mut triangles = Vec::with_capacity(count);
    let mut offset = 84;
    for _ in 0..count {
        let mut tri = [Point3::origin(); 3];
        // Skip the 12-byte facet normal; it is recomputed from the vertices.
        let mut at = offset + 12;
        for v in &mut tri {
            let mut coords = [0.0f64; 3];
            for c in &mut coords {
                let raw = f32::from_le_bytes([
                    bytes[at],
                    bytes[at + 1],
                    bytes[at + 2],
                    bytes[at + 3],
                ]);
                *c = raw as f64;
                at += 4;
            }
            *v = Point3::new(coords[0], coords[1], coords[2]);
        }
        triangles.push(tri);
        offset += 50;
    }
    weld_triangles(triangles, path)
}

fn parse_ascii_stl(bytes: &[u8], path: &Path) -> Result<TriangleMesh> {
    let text =
        std::str::from_utf8(bytes).map_err(|_| malformed(path, "STL file is not valid UTF-8"))?;
    let mut triangles = Vec::new();
    let mut current: Vec<Point3> = Vec::new();
    let mut saw_solid = false;

    for (lineno, line) in text.lines().enumerate() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("solid") => saw_solid = true,
            Some("vertex") => {
                let mut coords = [0.0; 3];
                for c in &mut coords {
                    let tok = tokens.next().ok_or_else(|| {
                        malformed(path, format!("short vertex, line {}", lineno + 1))
                    })?;
                    *c = tok.parse::<f64>().map_err(|_| {
                        malformed(path, format!("bad vertex coordinate, line {}", lineno + 1))
                    })?;
                }
                current.push(Point3::new(coords[0], coords[1], coords[2]));
            }
            Some("endfacet") => {
                if current.len() != 3 {
                    return Err(malformed(
                        path,
                        format!("facet with {} vertices, line {}", current.len(), lineno + 1),
                    ));
                }
                triangles.push([current[0], current[1], current[2]]);
                current.clear();
            }
            _ => {}
        }
    }

    if !saw_solid || triangles.is_empty() {
        return Err(malformed(path, "no facets"));
    }
    weld_triangles(triangles, path)
}

/// Welds duplicate vertices within 1e-9 m by coordinate quantization.
fn weld_triangles(triangles: Vec<[Point3; 3]>, path: &Path) -> Result<TriangleMesh> {
    let mut keys: HashMap<(i64, i64, i64), usize> = HashMap::new();
    let mut vertices: Vec<Point3> = Vec::new();
    let mut faces = Vec::with_capacity(triangles.len());
    let quantize = |v: f64| (v / WELD_TOLERANCE).round() as i64;

    for tri in triangles {
        let mut face = [0usize; 3];
        for (k, p) in tri.iter().enumerate() {
            let key = (quantize(p.x), quantize(p.y), quantize(p.z));
            let idx = *keys.entry(key).or_insert_with(|| {
                vertices.push(*p);
                vertices.len() - 1
            });
            face[k] = idx;
        }
        faces.push(face);
    }
    finish(vertices, faces, path)
}

/// Final construction: drop zero-area faces, then validate.
fn finish(vertices: Vec<Point3>, faces: Vec<[usize; 3]>, path: &Path) -> Result<TriangleMesh> {
    let area = |f: &[usize; 3]| -> f64 {
        let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
        (b - a).cross(&(c - a)).norm() * 0.5
    };
    let kept: Vec<[usize; 3]> = faces
        .iter()
        .filter(|f| f[0] < vertices.len() && f[1] < vertices.len() && f[2] < vertices.len())
        .filter(|f| area(f) >= DEGENERATE_AREA)
        .copied()
        .collect();
    let area_dropped = faces.len() - kept.len();
    if kept.is_empty() {
        return Err(malformed(path, "all faces degenerate"));
    }
    let mut mesh =
        TriangleMesh::new(vertices, kept).map_err(|e| malformed(path, e.to_string()))?;
    mesh.bump_degenerate(area_dropped);
    Ok(mesh)
}

/// Writes the mesh as ASCII OBJ with shortest round-trip decimals.
pub fn save_obj(mesh: &TriangleMesh, path: impl AsRef<Path>) -> Result<()> {
    let mut out = Vec::new();
    write_obj(mesh, &mut out)?;
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_obj(mesh: &TriangleMesh, out: &mut impl Write) -> Result<()> {
    for v in mesh.vertices() {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for f in mesh.faces() {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

pub fn obj_string(mesh: &TriangleMesh) -> String {
    let mut out = Vec::new();
    write_obj(mesh, &mut out).expect("writing to memory cannot fail");
    String::from_utf8(out).expect("OBJ output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(name: &str, contents: &[u8]) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("spherize-io-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(contents).unwrap();
        path
    }

    #[test]
    fn ascii_stl_single_facet() {
        let stl = "solid unit\n facet normal 0 0 1\n  outer loop\n   vertex 0 0 0\n   vertex 1 0 0\n   vertex 0 1 0\n  endloop\n endfacet\nendsolid unit\n";
        let path = write_temp("tri.stl", stl.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.vertices().len(), 3);
        assert_eq!(mesh.faces().len(), 1);
    }

    #[test]
    fn obj_quad_fan_triangulates() {
        let obj = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        let path = write_temp("quad.obj", obj.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.vertices().len(), 4);
        assert_eq!(mesh.faces().len(), 2);
    }

    #[test]
    fn empty_file_is_malformed() {
        let path = write_temp("empty.obj", b"");
        match load_mesh(&path) {
            Err(Error::MalformedMesh { .. }) => {}
            other => panic!("expected MalformedMesh, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_reported() {
        match load_mesh("/nonexistent/not-here.obj") {
            Err(Error::FileNotFound(_)) => {}
            other => panic!("expected FileNotFound, got {other:?}"),
        }
    }

    #[test]
    fn binary_stl_welds_shared_vertices() {
        // Two facets sharing an edge: 6 raw vertices, 4 after welding.
        let tris: [[[f32; 3]; 3]; 2] = [
            [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
        ];
        let mut bytes = vec![0u8; 80];
        bytes.extend_from_slice(&(2u32).to_le_bytes());
        for tri in &tris {
            bytes.extend_from_slice(&[0u8; 12]); // normal
            for v in tri {
                for c in v {
                    bytes.extend_from_slice(&c.to_le_bytes());
                }
            }
            bytes.extend_from_slice(&[0u8; 2]); // attribute count
        }
        let path = write_temp("two.stl", &bytes);
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.vertices().len(), 4);
        assert_eq!(mesh.faces().len(), 2);
    }

    #[test]
    fn obj_negative_indices() {
        let obj = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n";
        let path = write_temp("neg.obj", obj.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn obj_round_trip_exact_coordinates() {
        let obj = "v 0.1 -2.375 1e-9\nv 1 0 0\nv 0 1 0.30000000000000004\nf 1 2 3\n";
        let path = write_temp("rt.obj", obj.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        let out = obj_string(&mesh);
        let path2 = write_temp("rt2.obj", out.as_bytes());
        let mesh2 = load_mesh(&path2).unwrap();
        assert_eq!(mesh.vertices(), mesh2.vertices());
        assert_eq!(mesh.faces(), mesh2.faces());
    }

    #[test]
    fn sniffs_stl_without_extension() {
        let stl = "solid s\nfacet normal 0 0 1\nouter loop\nvertex 0 0 0\nvertex 1 0 0\nvertex 0 1 0\nendloop\nendfacet\nendsolid s\n";
        let path = write_temp("mystery.bin", stl.as_bytes());
        assert!(load_mesh(&path).is_ok());
    }

    #[test]
    fn zero_area_faces_dropped_on_load() {
        let obj = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 2 0 0\nf 1 2 3\nf 1 2 4\n";
        let path = write_temp("degen.obj", obj.as_bytes());
        let mesh = load_mesh(&path).unwrap();
        assert_eq!(mesh.faces().len(), 1);
        assert_eq!(mesh.degenerate_dropped(), 1);
    }
}
