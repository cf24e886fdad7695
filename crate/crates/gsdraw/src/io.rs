//! JSON file formats for maps, labelings, classical structures and
//! drawings, and SVG rendering of drawing files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classical::{ClassicalStructure, EdgeColor};
use crate::drawing::{direction_vector, GridDrawing};
use crate::error::{Error, Result};
use crate::labeling::CornerLabeling;
use crate::map::{build_map, MapSpec, PlanarMap};

fn format_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn parse_map(text: &str) -> Result<PlanarMap> {
    let spec: MapSpec = serde_json::from_str(text).map_err(format_err)?;
    build_map(&spec)
}

pub fn map_to_json(m: &PlanarMap) -> String {
    serde_json::to_string_pretty(&m.to_spec()).expect("serializable")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingFile {
    /// `[vertex, dart, label]` for every labeled corner `(vertex, dart)`
    pub corners: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub dual: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_edges: Option<[usize; 4]>,
}

impl LabelingFile {
    pub fn new(m: &PlanarMap, l: &CornerLabeling) -> Self {
        let corners = (0..m.dart_count()).filter(|&d| l.get(d) != 0).map(|d| [m.tail(d), d, l.get(d) as usize]).collect();
        LabelingFile { corners, dual: false, root_edges: None }
    }

    pub fn to_labeling(&self, m: &PlanarMap) -> Result<CornerLabeling> {
        let mut l = CornerLabeling::empty(m.dart_count());
        for &[v, d, k] in &self.corners {
            if d >= m.dart_count() || m.tail(d) != v || !(1..=4).contains(&k) {
                return Err(Error::Format(format!("bad corner [{v}, {d}, {k}]")));
            }
            l.set(d, k as u8);
        }
        Ok(l)
    }
}

pub fn parse_labeling(m: &PlanarMap, text: &str) -> Result<CornerLabeling> {
    serde_json::from_str::<LabelingFile>(text).map_err(format_err)?.to_labeling(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalArc {
    pub edge: usize,
    pub color: EdgeColor,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalFile {
    pub edges: Vec<ClassicalArc>,
}

impl ClassicalFile {
    pub fn new(m: &PlanarMap, s: &ClassicalStructure) -> Self {
        let edges = s
            .arcs
            .iter()
            .enumerate()
            .filter_map(|(e, a)| a.map(|(d, color)| ClassicalArc { edge: e, color, from: m.tail(d), to: m.head(d) }))
            .collect();
        ClassicalFile { edges }
    }

    pub fn to_structure(&self, m: &PlanarMap) -> Result<ClassicalStructure> {
        let mut arcs = vec![None; m.edge_count()];
        for a in &self.edges {
            if a.edge >= m.edge_count() {
                return Err(Error::Format(format!("edge {} out of range", a.edge)));
            }
            let d = 2 * a.edge;
            let dart = match (m.tail(d), m.head(d)) {
                (u, v) if (u, v) == (a.from, a.to) => d,
                (u, v) if (v, u) == (a.from, a.to) => d + 1,
                _ => return Err(Error::Format(format!("edge {} does not join {} and {}", a.edge, a.from, a.to))),
            };
            arcs[a.edge] = Some((dart, a.color));
        }
        Ok(ClassicalStructure { arcs })
    }
}

/// Coordinates file of a drawing; the SVG is rendered from it alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawingFile {
    pub method: String,
    pub grid: [i64; 2],
    pub vertices: BTreeMap<String, [i64; 2]>,
    pub edges: Vec<[usize; 2]>,
    /// interior bend points keyed by position in `edges`, listed from its first vertex
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bends: BTreeMap<String, Vec<[i64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<BTreeMap<String, [i64; 2]>>,
}

const COMPASS: [&str; 4] = ["west", "north", "east", "south"];

impl DrawingFile {
    pub fn new(m: &PlanarMap, g: &GridDrawing) -> Self {
        let vertices = g.coords.iter().enumerate().filter_map(|(v, p)| p.map(|(x, y)| (v.to_string(), [x, y]))).collect();
        let mut edges = Vec::new();
        let mut bends = BTreeMap::new();
        for e in 0..m.edge_count() {
            let Some(p) = &g.polylines[e] else { continue };
            let (u, v) = m.endpoints(e);
            if p.len() > 2 {
                bends.insert(edges.len().to_string(), p[1..p.len() - 1].iter().map(|&(x, y)| [x, y]).collect());
            }
            edges.push([u, v]);
        }
        let arrows = g.arrows.as_ref().map(|a| {
            a.iter()
                .filter_map(|a| g.coords[a.from].map(|(x, y)| (COMPASS[a.direction as usize - 1].to_string(), [x, y])))
                .collect()
        });
        DrawingFile { method: g.method.clone(), grid: [g.width, g.height], vertices, edges, bends, arrows }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(format_err)
    }

    fn point(&self, v: usize) -> Result<[i64; 2]> {
        self.vertices.get(&v.to_string()).copied().ok_or_else(|| Error::Format(format!("vertex {v} has no coordinates")))
    }

    /// Full polyline of the `k`-th listed edge.
    pub fn polyline(&self, k: usize) -> Result<Vec<[i64; 2]>> {
        let [u, v] = self.edges[k];
        let mut pts = vec![self.point(u)?];
        pts.extend(self.bends.get(&k.to_string()).into_iter().flatten().copied());
        pts.push(self.point(v)?);
        Ok(pts)
    }
}

/// SVG on the unit grid, `y` pointing up, integer `viewBox` with a margin of one unit.
pub fn render_svg(f: &DrawingFile) -> Result<String> {
    let (mut x0, mut y0, mut x1, mut y1) = (0i64, 0i64, 0i64, 0i64);
    let mut first = true;
    for p in f.vertices.values().chain(f.bends.values().flatten()) {
        if first {
            (x0, y0, x1, y1) = (p[0], p[1], p[0], p[1]);
            first = false;
        }
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let flip = |p: [i64; 2]| (p[0], y1 - p[1] + y0);
    let mut s = String::new();
    let (vx, vy, vw, vh) = (x0 - 1, y0 - 1, x1 - x0 + 2, y1 - y0 + 2);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx} {vy} {vw} {vh}" width="{}" height="{}">"#, vw * 40, vh * 40);
    s.push_str(r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="4" markerHeight="4" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker></defs>"##);
    s.push('\n');
    s.push_str(r##"<g stroke="#ddd" stroke-width="0.02">"##);
    for x in x0..=x1 {
        let _ = write!(s, r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}"/>"#);
    }
    for y in y0..=y1 {
        let _ = write!(s, r#"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}"/>"#);
    }
    s.push_str("</g>\n");
    s.push_str(r##"<g stroke="#222" stroke-width="0.06" fill="none">"##);
    s.push('\n');
    for k in 0..f.edges.len() {
        let pts: Vec<(i64, i64)> = f.polyline(k)?.into_iter().map(flip).collect();
        if let [(ax, ay), (bx, by)] = pts[..] {
            let _ = writeln!(s, r#"<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>"#);
        } else {
            let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, list.join(" "));
        }
    }
    if let Some(arrows) = &f.arrows {
        for (name, &p) in arrows {
            let k = COMPASS.iter().position(|c| c == name).ok_or_else(|| Error::Format(format!("bad arrow {name}")))?;
            let (dx, dy) = direction_vector(k as u8 + 1);
            let (ax, ay) = flip(p);
            let (bx, by) = (ax + dx, ay - dy);
            let _ = writeln!(s, r#"<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" marker-end="url(#arrow)"/>"#);
        }
    }
    s.push_str("</g>\n");
    s.push_str(r##"<g fill="#c00">"##);
    for p in f.vertices.values() {
        let (x, y) = flip(*p);
        let _ = write!(s, r#"<circle cx="{x}" cy="{y}" r="0.15"/>"#);
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{derive_dual_structure, dualize_labels, RootedMap};
    use crate::fixtures;
    use crate::labeling::{solve_labeling, SolveOptions};
    use crate::ortho::{draw_dual, DualMethod};

    #[test]
    fn normative_square_parses() {
        let text = r#"{"edges": [[0,1],[1,2],[2,3],[3,0]],
            "rotations": [[0,7],[2,1],[4,3],[5,6]], "outer_dart": 7, "outer_vertices": [0,1,2,3]}"#;
        let m = parse_map(text).unwrap();
        assert!(m.same_combinatorics(&fixtures::square()));
        assert!(parse_map(&map_to_json(&m)).unwrap().same_combinatorics(&m));
        assert!(matches!(parse_map("{"), Err(Error::Format(_))));
    }

    #[test]
    fn labeling_file_round_trip() {
        let m = fixtures::cube();
        let l = solve_labeling(&m, SolveOptions::default()).unwrap();
        let text = serde_json::to_string(&LabelingFile::new(&m, &l)).unwrap();
        assert_eq!(parse_labeling(&m, &text).unwrap(), l);
        assert!(parse_labeling(&m, r#"{"corners": [[0, 3, 1]]}"#).is_err());
    }

    #[test]
    fn svg_is_rendered_from_the_coordinates_file() {
        let m = fixtures::cube();
        let r = RootedMap::of_primal(&m).unwrap();
        let l = solve_labeling(&m, SolveOptions::default()).unwrap();
        let ds = derive_dual_structure(&r, &dualize_labels(&m, &l)).unwrap();
        let g = draw_dual(&r, &ds, DualMethod::Increasing).unwrap();
        let f = DrawingFile::new(&r.map, &g);
        let again = DrawingFile::parse(&f.to_json()).unwrap();
        assert_eq!(again, f);
        let svg = render_svg(&again).unwrap();
        assert_eq!(svg, render_svg(&f).unwrap());
        assert_eq!(svg.matches("marker-end").count(), 4);
        assert_eq!(f.bends.values().map(Vec::len).sum::<usize>(), g.bend_count());
    }
}
