//! Acceptance run: one PASS/FAIL line per criterion.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tilecolour::colourers::{
    pinwheel_coset_edge_colour, standard_colouring, verify_colouring, Colouring, Target,
};
use tilecolour::oracle::{
    bipartite_or_witness, brute_force_chromatic, decide, exact_chromatic, Bipartition,
    ColourProblem, DEFAULT_LIMIT, DEFAULT_NODE_BUDGET,
};
use tilecolour::planargraph::{build_graph, degree_stats, dual_graph, SimpleGraph};
use tilecolour::render_io::{to_canonical_string, Document};
use tilecolour::substitution::{default_patch, pinwheel_mirror_pair, ProtoKind};
use tilecolour::{Patch, Tiling, TilingGraph};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn setup(tiling: Tiling, level: u32) -> Result<(Patch, TilingGraph), String> {
    let p = default_patch(tiling, level).map_err(|e| e.to_string())?;
    let g = build_graph(&p).map_err(|e| e.to_string())?;
    Ok((p, g))
}

/// Standard colouring, checked proper with the given palette.
fn proper(p: &Patch, g: &TilingGraph, target: Target, palette: u32) -> Result<Colouring, String> {
    let c = standard_colouring(p, g, target).map_err(|e| e.to_string())?;
    let r = verify_colouring(g, &c).map_err(|e| e.to_string())?;
    ensure(
        r.is_proper(),
        format!("{target} colouring has {} conflicts", r.conflicts.len()),
    )?;
    ensure(
        c.palette == palette,
        format!("palette {} (want {palette})", c.palette),
    )?;
    ensure(
        c.colours_used() as u32 == palette,
        format!("{} colours used", c.colours_used()),
    )?;
    Ok(c)
}

fn interior_degree(g: &TilingGraph) -> usize {
    degree_stats(g, 2).max_interior_degree
}

fn triangle(g: &SimpleGraph) -> Option<[u32; 3]> {
    for (a, b) in g.edges() {
        for c in (b + 1)..g.len() as u32 {
            if g.has_edge(a, c) && g.has_edge(b, c) {
                return Some([a, b, c]);
            }
        }
    }
    None
}

fn oracle_chi3(g: &SimpleGraph, target: Target) -> Result<usize, String> {
    let problem = ColourProblem {
        graph: g.clone(),
        mode: target,
    };
    let r = exact_chromatic(&problem, DEFAULT_LIMIT).map_err(|e| e.to_string())?;
    ensure(r.chi == 3, format!("oracle chi = {}", r.chi))?;
    let cycle = r.odd_cycle.ok_or("no odd cycle witness")?;
    ensure(cycle.len() % 2 == 1, "witness cycle is even")?;
    Ok(cycle.len())
}

fn c1() -> Check {
    let (p, g) = setup(Tiling::Chair, 4)?;
    ensure(p.tiles.len() == 256, "tile count")?;
    proper(&p, &g, Target::Vertex, 2)?;
    let problem = ColourProblem::from_tiling(&g, Target::Vertex);
    let r = exact_chromatic(&problem, DEFAULT_LIMIT).map_err(|e| e.to_string())?;
    ensure(r.chi == 2, format!("oracle chi = {}", r.chi))?;
    ensure(
        matches!(bipartite_or_witness(&problem), Bipartition::Colouring(_)),
        "not bipartite",
    )?;
    Ok(format!(
        "{} vertices, chi = 2, bipartition found",
        g.vertices.len()
    ))
}

fn c2() -> Check {
    let (p, g) = setup(Tiling::Chair, 4)?;
    proper(&p, &g, Target::Edge, 4)?;
    let d = interior_degree(&g);
    ensure(d == 4, format!("interior degree {d}"))?;
    Ok("palette 4, interior degree 4".into())
}

fn c3() -> Check {
    let (p, g) = setup(Tiling::Chair, 3)?;
    proper(&p, &g, Target::Face, 3)?;
    let mut first = None;
    for level in 0..=3 {
        let (_, g) = setup(Tiling::Chair, level)?;
        if let Bipartition::OddCycle(c) =
            bipartite_or_witness(&ColourProblem::from_tiling(&g, Target::Face))
        {
            first = Some((level, c.len()));
            break;
        }
    }
    let (level, len) = first.ok_or("dual bipartite for all L <= 3")?;
    ensure(level == 1, format!("first odd dual cycle at L = {level}"))?;
    let len3 = oracle_chi3(&dual_graph(&g), Target::Face)?;
    Ok(format!(
        "palette 3; first odd dual cycle at L = {level} (length {len}); L=3 witness length {len3}"
    ))
}

fn c4() -> Check {
    let (p, g) = setup(Tiling::Ab, 4)?;
    proper(&p, &g, Target::Vertex, 3)?;
    let len = oracle_chi3(&g.vertex_graph(), Target::Vertex)?;
    Ok(format!("palette 3; odd cycle of length {len}"))
}

fn c5() -> Check {
    let (p, g) = setup(Tiling::Ab, 3)?;
    proper(&p, &g, Target::Edge, 8)?;
    let d = interior_degree(&g);
    ensure(d == 8, format!("interior degree {d}"))?;
    Ok("palette 8, interior degree 8".into())
}

fn c6() -> Check {
    let (p, g) = setup(Tiling::Ab, 4)?;
    proper(&p, &g, Target::Face, 2)?;
    let problem = ColourProblem::from_tiling(&g, Target::Face);
    ensure(
        matches!(bipartite_or_witness(&problem), Bipartition::Colouring(_)),
        "dual not bipartite",
    )?;
    Ok(format!(
        "palette 2; dual on {} faces bipartite",
        g.faces.len()
    ))
}

fn c7() -> Check {
    let (p, g) = setup(Tiling::Rp, 4)?;
    proper(&p, &g, Target::Vertex, 3)?;
    let t = triangle(&g.vertex_graph()).ok_or("no 3-cycle")?;
    oracle_chi3(&g.vertex_graph(), Target::Vertex)?;
    Ok(format!("palette 3; 3-cycle {t:?}"))
}

fn c8() -> Check {
    let (p, g) = setup(Tiling::Rp, 4)?;
    let dirs = Tiling::Rp.edge_directions().ok_or("no directions")?;
    ensure(dirs.len() == 4, "four directions")?;
    proper(&p, &g, Target::Edge, 8)?;
    let d = interior_degree(&g);
    ensure(d == 8, format!("interior degree {d}"))?;
    Ok("palette 8, interior degree 8".into())
}

/// Refutes a 2-face-colouring on the level-(L-1) supertile under path [0].
fn refute_two_faces(p: &Patch) -> Check {
    let sub = p.restrict(&[0]).map_err(|e| e.to_string())?;
    let g = build_graph(&sub).map_err(|e| e.to_string())?;
    ensure(
        g.faces.len() <= 500,
        format!("sub-patch has {} faces", g.faces.len()),
    )?;
    let dual = dual_graph(&g);
    let two = decide(&dual, 2, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    ensure(two.is_none(), "2-face-colouring found")?;
    let len = oracle_chi3(&dual, Target::Face)?;
    Ok(format!(
        "sub-patch of {} faces not 2-colourable (odd cycle length {len})",
        g.faces.len()
    ))
}

fn c9() -> Check {
    let (p, g) = setup(Tiling::Rp, 4)?;
    proper(&p, &g, Target::Face, 3)?;
    Ok(format!("palette 3; {}", refute_two_faces(&p)?))
}

fn c10() -> Check {
    let (p, g) = setup(Tiling::Pinwheel, 4)?;
    ensure(p.tiles.len() == 625, "tile count")?;
    proper(&p, &g, Target::Vertex, 3)?;
    let t = triangle(&g.vertex_graph()).ok_or("no 3-cycle")?;
    oracle_chi3(&g.vertex_graph(), Target::Vertex)?;
    Ok(format!("palette 3; 3-cycle {t:?}"))
}

fn c11() -> Check {
    let (p, g) = setup(Tiling::Pinwheel, 4)?;
    proper(&p, &g, Target::Edge, 8)?;
    let (_, report) = pinwheel_coset_edge_colour(&g).map_err(|e| e.to_string())?;
    for (name, s) in ["P_{1,2}", "P_sqrt5"].iter().zip(&report.subgraphs) {
        ensure(
            s.cosets_per_component.iter().all(|&c| c == 2),
            format!("{name}: coset counts {:?}", s.cosets_per_component),
        )?;
        ensure(
            s.max_coset_degree <= 2,
            format!("{name}: coset degree {}", s.max_coset_degree),
        )?;
    }
    let pair = pinwheel_mirror_pair().map_err(|e| e.to_string())?;
    let pg = build_graph(&pair).map_err(|e| e.to_string())?;
    let boundary = pg.boundary_vertices();
    let d = (0..pg.vertices.len())
        .filter(|&v| !boundary[v])
        .map(|v| pg.vertex_edges[v].len())
        .max()
        .unwrap_or(0);
    ensure(d == 8, format!("mirror pair inner degree {d}"))?;
    let d4 = interior_degree(&g);
    ensure(d4 <= 8, format!("interior degree {d4} above 8"))?;
    let comps: Vec<usize> = report.subgraphs.iter().map(|s| s.components).collect();
    Ok(format!("palette 8; components {comps:?}, 2 cosets each, coset degree <= 2, acyclic; inner degree 8 on the mirror pair"))
}

fn c12() -> Check {
    let (p, g) = setup(Tiling::Pinwheel, 4)?;
    proper(&p, &g, Target::Face, 3)?;
    Ok(format!("palette 3; {}", refute_two_faces(&p)?))
}

fn ab_counts(level: u32) -> (usize, usize) {
    // Rhombus seed; a triangle splits into 3 triangles and 2 rhombi, a
    // rhombus into 4 triangles and 3 rhombi.
    let (mut t, mut r) = (0usize, 1usize);
    for _ in 0..level {
        (t, r) = (3 * t + 4 * r, 2 * t + 3 * r);
    }
    (t, r)
}

fn random_graph(rng: &mut ChaCha8Rng) -> SimpleGraph {
    let n = rng.gen_range(1..=12);
    let density = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    SimpleGraph::from_edges(n as usize, edges)
}

fn roundtrip<D: Document + PartialEq + std::fmt::Debug>(d: &D) -> Result<(), String> {
    let text = to_canonical_string(d);
    let back = D::from_json_str(&text).map_err(|e| e.to_string())?;
    ensure(
        &back == d,
        format!("{} roundtrip changed the value", D::KIND),
    )?;
    ensure(
        to_canonical_string(&back) == text,
        format!("{} text not stable", D::KIND),
    )
}

fn c13() -> Check {
    for tiling in Tiling::ALL {
        for level in 0..=5 {
            let (p, g) = setup(tiling, level)?;
            let s = degree_stats(&g, 2);
            ensure(
                s.vertices as i64 - s.edges as i64 + s.faces as i64 == 2,
                format!("Euler fails for {tiling} L={level}"),
            )?;
            let n = p.tiles.len();
            let want = match tiling {
                Tiling::Chair => 4usize.pow(level),
                Tiling::Pinwheel | Tiling::Rp => 5usize.pow(level),
                Tiling::Ab => {
                    let (t, r) = ab_counts(level);
                    let got_t = p
                        .tiles
                        .iter()
                        .filter(|x| x.kind == ProtoKind::AbTriangle)
                        .count();
                    ensure(
                        got_t == t,
                        format!("AB L={level}: {got_t} triangles, want {t}"),
                    )?;
                    t + r
                }
            };
            ensure(
                n == want,
                format!("{tiling} L={level}: {n} tiles, want {want}"),
            )?;
            if level <= 4 {
                let seed = p.seed.as_ref().ok_or("no seed")?;
                ensure(
                    p.area() == seed.area(),
                    format!("area changes for {tiling} L={level}"),
                )?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..100 {
        let g = random_graph(&mut rng);
        let problem = ColourProblem {
            graph: g.clone(),
            mode: Target::Vertex,
        };
        let r = exact_chromatic(&problem, DEFAULT_LIMIT).map_err(|e| e.to_string())?;
        let bf = brute_force_chromatic(&g);
        ensure(
            r.chi == bf,
            format!("graph {i}: oracle {} vs enumeration {bf}", r.chi),
        )?;
    }
    let mut docs = 0;
    for (tiling, level) in [
        (Tiling::Chair, 4),
        (Tiling::Ab, 4),
        (Tiling::Rp, 4),
        (Tiling::Pinwheel, 4),
    ] {
        let (p, g) = setup(tiling, level)?;
        roundtrip(&p)?;
        roundtrip(&g)?;
        for target in [Target::Vertex, Target::Edge, Target::Face] {
            roundtrip(&standard_colouring(&p, &g, target).map_err(|e| e.to_string())?)?;
            docs += 1;
        }
        docs += 2;
    }
    Ok(format!(
        "Euler, counts, areas for L <= 5; 100 random graphs agree; {docs} documents roundtrip"
    ))
}

type Criterion = (u32, &'static str, fn() -> Check);

fn main() {
    let checks: [Criterion; 13] = [
        (1, "chair vertex", c1),
        (2, "chair edge", c2),
        (3, "chair face", c3),
        (4, "AB vertex", c4),
        (5, "AB edge", c5),
        (6, "AB face", c6),
        (7, "RP vertex", c7),
        (8, "RP edge", c8),
        (9, "RP face", c9),
        (10, "pinwheel vertex", c10),
        (11, "pinwheel edge", c11),
        (12, "pinwheel face", c12),
        (13, "property suites", c13),
    ];
    let mut failed = 0;
    for (n, name, f) in checks {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {n:>2} {name}: {msg} ({secs:.2}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {n:>2} {name}: {msg} ({secs:.2}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 13 criteria failed");
        std::process::exit(1);
    }
    println!("all 13 criteria pass");
}
