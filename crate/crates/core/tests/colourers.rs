use tilecolour::colourers::{
    ab_face_2colour_with, bipartite_vertex_colouring, directional_edge_colour,
    pinwheel_coset_edge_colour, standard_colouring, verify_colouring, ColourError, Target,
};
use tilecolour::oracle::standard_table;
use tilecolour::planargraph::build_graph;
use tilecolour::schemes::{apply_table_stats, layout, standard_scheme, UnitType};
use tilecolour::substitution::{default_patch, generate_patch, seed_tile};
use tilecolour::{Patch, Tiling, TilingGraph};

const TARGETS: [Target; 3] = [Target::Vertex, Target::Edge, Target::Face];

fn setup(tiling: Tiling, level: u32) -> (Patch, TilingGraph) {
    let p = default_patch(tiling, level).unwrap();
    let g = build_graph(&p).unwrap();
    (p, g)
}

#[test]
fn standard_colourings_are_proper() {
    for tiling in Tiling::ALL {
        for level in 1..=5 {
            let (p, g) = setup(tiling, level);
            for target in TARGETS {
                let c = match standard_colouring(&p, &g, target) {
                    Err(ColourError::Unsupported(_)) => {
                        let k = standard_scheme(tiling, target).unwrap().level;
                        assert!(level < k, "{tiling} L={level} {target}");
                        continue;
                    }
                    c => c.unwrap(),
                };
                let r = verify_colouring(&g, &c).unwrap();
                assert!(
                    r.is_proper(),
                    "{tiling} L={level} {target}: {:?}",
                    r.conflicts
                );
                assert!(c.assignment.iter().all(Option::is_some));
            }
        }
    }
}

#[test]
fn rotated_seeds_colour_properly() {
    for tiling in Tiling::ALL {
        let kind = tiling.default_seed_kind();
        for rotation in 1..4 {
            let p = generate_patch(tiling, 4, &seed_tile(kind, 4, rotation).unwrap()).unwrap();
            let g = build_graph(&p).unwrap();
            for target in TARGETS {
                let c = standard_colouring(&p, &g, target).unwrap();
                assert!(
                    verify_colouring(&g, &c).unwrap().is_proper(),
                    "{tiling} rot {rotation} {target}"
                );
            }
        }
    }
}

#[test]
fn directional_colouring_uses_two_colours_per_direction() {
    let (_, g) = setup(Tiling::Rp, 3);
    let dirs = Tiling::Rp.edge_directions().unwrap();
    let c = directional_edge_colour(&g, &dirs).unwrap();
    assert_eq!(c.palette, 8);
    for (e, edge) in g.edges.iter().enumerate() {
        let d = edge.direction.unwrap();
        assert_eq!(c.colour(e as u32).unwrap() / 2, d);
    }
    let (_, pg) = setup(Tiling::Pinwheel, 2);
    assert!(directional_edge_colour(&pg, &dirs).is_err());
}

#[test]
fn chair_vertices_are_bipartite() {
    let (_, g) = setup(Tiling::Chair, 4);
    let c = bipartite_vertex_colouring(&g).unwrap();
    assert_eq!(c.palette, 2);
    assert!(verify_colouring(&g, &c).unwrap().is_proper());
    let (_, rg) = setup(Tiling::Rp, 2);
    assert!(matches!(
        bipartite_vertex_colouring(&rg),
        Err(ColourError::OddCycle { .. })
    ));
}

#[test]
fn ab_code_13_must_be_red() {
    let p = default_patch(Tiling::Ab, 4).unwrap();
    let g = build_graph(&p).unwrap();
    let red = ab_face_2colour_with(&p, true).unwrap();
    let blue = ab_face_2colour_with(&p, false).unwrap();
    assert!(verify_colouring(&g, &red).unwrap().is_proper());
    assert!(!verify_colouring(&g, &blue).unwrap().is_proper());
}

#[test]
fn pinwheel_cosets() {
    let (_, g) = setup(Tiling::Pinwheel, 4);
    let (c, report) = pinwheel_coset_edge_colour(&g).unwrap();
    assert!(verify_colouring(&g, &c).unwrap().is_proper());
    for s in &report.subgraphs {
        assert!(s.components >= 1);
        assert!(s.cosets_per_component.iter().all(|&n| n == 2));
        assert!(s.max_coset_degree <= 2);
        assert!(s.paths > 0);
    }
    assert_eq!(
        report.subgraphs[0].edges + report.subgraphs[1].edges,
        g.edges.len()
    );
}

#[test]
fn table_colourings_complete_only_near_the_boundary() {
    for tiling in Tiling::ALL {
        for target in [Target::Vertex, Target::Face] {
            let Ok(table) = standard_table(tiling, target) else {
                continue;
            };
            let (p, g) = setup(tiling, 5);
            let (c, completion) = apply_table_stats(&table, &p, &g).unwrap();
            assert!(verify_colouring(&g, &c).unwrap().is_proper());
            assert!(
                completion.rings <= 1,
                "{tiling} {target}: {} rings",
                completion.rings
            );
            assert!(
                completion.free * 5 < c.assignment.len(),
                "{tiling} {target}: {} free",
                completion.free
            );
        }
    }
}

#[test]
fn scheme_units() {
    let spec = standard_scheme(Tiling::Rp, Target::Vertex).unwrap();
    let (p, g) = setup(Tiling::Rp, 4);
    let lay = layout(&spec, &p, &g).unwrap();
    assert!(lay.unit_count() < lay.supertiles.len());
    assert!(lay
        .unit_types()
        .iter()
        .any(|u| matches!(u, UnitType::SamePair { .. })));
    let members: usize = lay.unit_members().iter().map(Vec::len).sum();
    assert_eq!(members, lay.supertiles.len());
    assert_eq!(lay.face_unit.len(), g.faces.len());
    assert!(standard_scheme(Tiling::Chair, Target::Vertex).is_none());
    assert!(standard_scheme(Tiling::Ab, Target::Face).is_none());
}
