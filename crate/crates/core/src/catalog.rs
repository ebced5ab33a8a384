//! Built-in test graphs with curated metadata, plus a seeded subdivided
//! copy of each.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{Graph, GraphDoc, Subdivision};
use crate::verify::Flags;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub graph: GraphDoc,
    pub flags: Flags,
    /// Facial walks of a plane embedding, for planar entries.
    pub faces: Option<Vec<Vec<usize>>>,
    /// A minor model exhibiting a Petersen-family graph, when flagged.
    pub petersen_minor: Option<String>,
    /// Curated answer, cross-checked against the torso test.
    pub kuratowski_connected: Option<bool>,
    pub notes: String,
}

impl CatalogEntry {
    pub fn graph(&self) -> Graph {
        Graph::from_doc(&self.graph).expect("catalog graphs are valid")
    }
}

fn complete(n: usize) -> Vec<(usize, usize)> {
    let mut e = vec![];
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    e
}

fn bipartite(a: usize, b: usize) -> Vec<(usize, usize)> {
    let mut e = vec![];
    for i in 0..a {
        for j in 0..b {
            e.push((i, a + j));
        }
    }
    e
}

fn cube() -> Vec<(usize, usize)> {
    let mut e = vec![];
    for v in 0..8usize {
        for b in 0..3 {
            let w = v ^ (1 << b);
            if v < w {
                e.push((v, w));
            }
        }
    }
    e
}

fn petersen() -> Vec<(usize, usize)> {
    let mut e = vec![];
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    e
}

fn octahedron() -> Vec<(usize, usize)> {
    // antipodal pairs (0,1), (2,3), (4,5)
    complete(6)
        .into_iter()
        .filter(|&(a, b)| !(a / 2 == b / 2))
        .collect()
}

fn octahedron_faces() -> Vec<Vec<usize>> {
    let mut f = vec![];
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                f.push(vec![x, y, z]);
            }
        }
    }
    f
}

struct EntryDef {
    name: &'static str,
    n: usize,
    edges: Vec<(usize, usize)>,
    flags: Flags,
    faces: Option<Vec<Vec<usize>>>,
    petersen_minor: Option<&'static str>,
    kuratowski_connected: Option<bool>,
    notes: &'static str,
}

fn planar(
    name: &'static str,
    n: usize,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<usize>>,
    notes: &'static str,
) -> EntryDef {
    EntryDef {
        name,
        n,
        edges,
        flags: Flags {
            planar: Some(true),
            in_petersen_family_minor: false,
            linkless: Some(true),
        },
        faces: Some(faces),
        petersen_minor: None,
        kuratowski_connected: Some(true),
        notes,
    }
}

fn linkless(
    name: &'static str,
    n: usize,
    edges: Vec<(usize, usize)>,
    kc: Option<bool>,
    notes: &'static str,
) -> EntryDef {
    EntryDef {
        name,
        n,
        edges,
        flags: Flags {
            planar: Some(false),
            in_petersen_family_minor: false,
            linkless: Some(true),
        },
        faces: None,
        petersen_minor: None,
        kuratowski_connected: kc,
        notes,
    }
}

fn base_specs() -> Vec<EntryDef> {
    let quad_w0 = {
        // K3,4 with parts {0,1,2} and a=3, b=4, c=5, d=6, plus ac and ad
        let mut e = bipartite(3, 4);
        e.extend([(3, 5), (3, 6)]);
        e
    };
    let quad_w1 = {
        // a=0 b=1 c=2 d=3; w1=4, w2=5 meet all four; u3=6 on a,b; v3=7 on c,d; u3v3
        let mut e = vec![];
        for w in [4, 5] {
            for x in 0..4 {
                e.push((x, w));
            }
        }
        e.extend([(0, 6), (1, 6), (2, 7), (3, 7), (6, 7)]);
        e
    };
    let composite = {
        let mut e = complete(5);
        e.extend(complete(5).into_iter().map(|(a, b)| (a + 5, b + 5)));
        e.extend([(0, 5), (1, 6), (2, 7)]);
        e
    };
    vec![
        planar(
            "k4",
            4,
            complete(4),
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            "planar, L = 0",
        ),
        linkless(
            "k5",
            5,
            complete(5),
            Some(true),
            "L = Z, generated by the elementary form",
        ),
        linkless(
            "k33",
            6,
            bipartite(3, 3),
            Some(true),
            "L = Z; no skew 2-cycles",
        ),
        linkless(
            "k34",
            7,
            bipartite(3, 4),
            Some(false),
            "needs quad 2-cycles",
        ),
        planar(
            "cube",
            8,
            cube(),
            vec![
                vec![0, 1, 3, 2],
                vec![4, 5, 7, 6],
                vec![0, 1, 5, 4],
                vec![2, 3, 7, 6],
                vec![0, 2, 6, 4],
                vec![1, 3, 7, 5],
            ],
            "planar; opposite faces give a basis of L",
        ),
        planar(
            "prism",
            6,
            vec![
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
            vec![
                vec![0, 1, 2],
                vec![3, 4, 5],
                vec![0, 1, 4, 3],
                vec![1, 2, 5, 4],
                vec![2, 0, 3, 5],
            ],
            "planar",
        ),
        planar(
            "octahedron",
            6,
            octahedron(),
            octahedron_faces(),
            "planar, 4-connected",
        ),
        EntryDef {
            name: "petersen",
            n: 10,
            edges: petersen(),
            flags: Flags {
                planar: Some(false),
                in_petersen_family_minor: true,
                linkless: Some(false),
            },
            faces: None,
            petersen_minor: Some("identity: the graph is the Petersen graph itself"),
            kuratowski_connected: Some(true),
            notes: "Petersen family; Kuratowski 2-cycles lie in B",
        },
        linkless(
            "quad-w0",
            7,
            quad_w0,
            Some(true),
            "width-0 quads; 14 edges, so no Petersen-family minor",
        ),
        linkless(
            "quad-w1",
            8,
            quad_w1,
            Some(false),
            "a quad of positive width; 13 edges",
        ),
        EntryDef {
            name: "composite",
            n: 10,
            edges: composite,
            flags: Flags {
                planar: Some(false),
                in_petersen_family_minor: false,
                linkless: None,
            },
            faces: None,
            petersen_minor: None,
            kuratowski_connected: Some(false),
            notes: "two K5's through a 3-cut; linkless status not curated",
        },
    ]
}

/// Vertex sequence of a facial walk after subdividing.
fn subdivide_face(g: &Graph, sub: &Subdivision, face: &[usize]) -> Vec<usize> {
    let mut out = vec![];
    for i in 0..face.len() {
        let (x, y) = (face[i], face[(i + 1) % face.len()]);
        let e = g.edges_between(x, y)[0];
        let path = &sub.edge_paths[e];
        let mut verts = vec![sub.graph.tail(path[0])];
        for &p in path {
            verts.push(sub.graph.head(p));
        }
        if verts[0] != x {
            verts.reverse();
        }
        out.extend_from_slice(&verts[..verts.len() - 1]);
    }
    out
}

fn entry(s: &EntryDef) -> CatalogEntry {
    CatalogEntry {
        name: s.name.to_string(),
        graph: Graph::from_edges(s.n, &s.edges).to_doc(),
        flags: s.flags.clone(),
        faces: s.faces.clone(),
        petersen_minor: s.petersen_minor.map(str::to_string),
        kuratowski_connected: s.kuratowski_connected,
        notes: s.notes.to_string(),
    }
}

/// A copy of `base` with `count` edges, chosen by `seed`, subdivided once.
pub fn subdivided_variant(base: &CatalogEntry, seed: u64, count: usize) -> CatalogEntry {
    let g = base.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces = vec![1; g.m()];
    for e in sample(&mut rng, g.m(), count.min(g.m())) {
        pieces[e] = 2;
    }
    let sub = g.subdivide(&pieces);
    CatalogEntry {
        name: format!("{}-sub", base.name),
        graph: sub.graph.to_doc(),
        flags: base.flags.clone(),
        faces: base
            .faces
            .as_ref()
            .map(|fs| fs.iter().map(|f| subdivide_face(&g, &sub, f)).collect()),
        petersen_minor: base
            .petersen_minor
            .as_ref()
            .map(|m| format!("{m}, with subdivided edges")),
        kuratowski_connected: base.kuratowski_connected,
        notes: format!("{} subdivided edges of {}", count, base.name),
    }
}

/// Base entries followed by their subdivided variants.
pub fn catalog() -> Vec<CatalogEntry> {
    let base: Vec<CatalogEntry> = base_specs().iter().map(entry).collect();
    let subs: Vec<CatalogEntry> = base
        .iter()
        .enumerate()
        .map(|(i, b)| subdivided_variant(b, 1000 + i as u64, 2))
        .collect();
    base.into_iter().chain(subs).collect()
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::planar_face_basis_check;
    use crate::patterns::{has_kuratowski_subgraph, Caps};
    use crate::verify::kuratowski_connectivity;

    #[test]
    fn entries_are_consistent() {
        let cat = catalog();
        assert_eq!(cat.len(), 22);
        for e in &cat {
            let g = e.graph();
            assert!(g.n() <= 14, "{}", e.name);
            assert!(g.is_simple());
            let nonplanar = has_kuratowski_subgraph(&g, &Caps::default()).unwrap();
            assert_eq!(e.flags.planar, Some(!nonplanar), "{}", e.name);
            assert!(!(e.flags.planar == Some(true) && e.flags.in_petersen_family_minor));
            assert_eq!(e.flags.in_petersen_family_minor, e.petersen_minor.is_some());
            let kc = kuratowski_connectivity(&g, &Caps::default())
                .unwrap()
                .connected;
            if let Some(k) = e.kuratowski_connected {
                assert_eq!(kc, k, "{}", e.name);
            }
            if let Some(f) = &e.faces {
                let v = planar_face_basis_check(&g, f);
                assert_eq!(v.witness, None, "{}", e.name);
            }
        }
    }

    #[test]
    fn variants_are_deterministic() {
        let a = catalog();
        let b = catalog();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.graph, y.graph);
        }
        assert_eq!(find("cube-sub").unwrap().graph().n(), 10);
    }
}
