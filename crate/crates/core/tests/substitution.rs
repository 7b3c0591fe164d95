use tilecolour::substitution::{
    ancestor_at_level, child_count, default_patch, expand, generate_patch, generate_patch_with,
    orientation_code, prototile, seed_tile, SubstError, DEFAULT_MAX_LEVEL,
};
use tilecolour::{Exec, Patch, ProtoKind, Scalar, Tiling};

fn ab_counts(level: u32) -> (usize, usize) {
    let (mut t, mut r) = (0, 1);
    for _ in 0..level {
        (t, r) = (3 * t + 4 * r, 2 * t + 3 * r);
    }
    (t, r)
}

#[test]
fn tile_counts() {
    for level in 0..=5 {
        assert_eq!(
            default_patch(Tiling::Chair, level).unwrap().tiles.len(),
            4usize.pow(level)
        );
        assert_eq!(
            default_patch(Tiling::Rp, level).unwrap().tiles.len(),
            5usize.pow(level)
        );
        assert_eq!(
            default_patch(Tiling::Pinwheel, level).unwrap().tiles.len(),
            5usize.pow(level)
        );
        let ab = default_patch(Tiling::Ab, level).unwrap();
        let tri = ab
            .tiles
            .iter()
            .filter(|t| t.kind == ProtoKind::AbTriangle)
            .count();
        assert_eq!((tri, ab.tiles.len() - tri), ab_counts(level));
    }
    assert_eq!(default_patch(Tiling::Ab, 2).unwrap().tiles.len(), 41);
}

#[test]
fn area_is_conserved() {
    for tiling in Tiling::ALL {
        for level in 0..=4 {
            let p = default_patch(tiling, level).unwrap();
            assert_eq!(p.area(), p.seed().unwrap().area(), "{tiling} L={level}");
        }
    }
}

#[test]
fn level_zero_tiles_are_prototile_copies() {
    for tiling in Tiling::ALL {
        let p = default_patch(tiling, 3).unwrap();
        // Pinwheel patches keep integer coordinates by scaling with √5^L.
        let scale = Scalar::int(if tiling == Tiling::Pinwheel { 125 } else { 1 });
        for t in &p.tiles {
            let proto = prototile(t.kind);
            assert_eq!(
                t.area(),
                tilecolour::exactgeom::polygon_area(&proto.polygon) * scale
            );
            assert_eq!(t.transform.det().abs(), scale);
        }
    }
}

#[test]
fn orientation_codes_are_in_range() {
    let ranges = [(Tiling::Chair, 1..=4), (Tiling::Rp, 1..=8)];
    for (tiling, range) in ranges {
        for t in default_patch(tiling, 3).unwrap().tiles {
            let c = orientation_code(&t).unwrap();
            assert!(range.contains(&c), "{tiling} code {c}");
        }
    }
    for t in default_patch(Tiling::Ab, 3).unwrap().tiles {
        let c = orientation_code(&t).unwrap();
        match t.kind {
            ProtoKind::AbTriangle => assert!((1..=16).contains(&c)),
            _ => assert!((1..=4).contains(&c)),
        }
    }
    let pw = &default_patch(Tiling::Pinwheel, 1).unwrap().tiles[0];
    assert!(matches!(
        orientation_code(pw),
        Err(SubstError::NoOrientation(_))
    ));
}

#[test]
fn refinement_is_stable() {
    // The tiles under a level-(L-1) supertile are the level-(L-1) patch of
    // that supertile.
    for tiling in Tiling::ALL {
        let big = default_patch(tiling, 4).unwrap();
        let kids = child_count(big.seed().unwrap().kind) as u8;
        for i in 0..kids {
            let sub = big.restrict(&[i]).unwrap();
            let again = generate_patch(tiling, 3, sub.seed().unwrap()).unwrap();
            assert_eq!(sub, again, "{tiling} child {i}");
        }
    }
}

#[test]
fn generation_is_deterministic_and_exec_independent() {
    for tiling in Tiling::ALL {
        let seed = seed_tile(tiling.default_seed_kind(), 4, 1).unwrap();
        let a = generate_patch_with(tiling, 4, &seed, DEFAULT_MAX_LEVEL, Exec::Sequential).unwrap();
        let b = generate_patch_with(tiling, 4, &seed, DEFAULT_MAX_LEVEL, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn paths_follow_the_hierarchy() {
    let p = default_patch(Tiling::Pinwheel, 3).unwrap();
    for t in &p.tiles {
        assert_eq!(t.path.len(), 3);
        let anc = ancestor_at_level(&p, t, 3).unwrap();
        assert_eq!(anc.supertile, *p.seed().unwrap());
        let parent = ancestor_at_level(&p, t, 1).unwrap();
        assert_eq!(parent.child_index, Some(t.path[2]));
        assert!(expand(&parent.supertile, 1, Exec::Sequential)
            .unwrap()
            .iter()
            .any(|c| c.transform == t.transform));
    }
    let (sup, map) = p.ancestor_indices(2).unwrap();
    assert_eq!(sup.len(), 5);
    assert!(map.iter().all(|&i| i < 5));
}

#[test]
fn full_turn_of_the_seed_is_identity() {
    let a = default_patch(Tiling::Chair, 2).unwrap();
    let s4 = seed_tile(ProtoKind::ChairL, 2, 4).unwrap();
    assert_eq!(generate_patch(Tiling::Chair, 2, &s4).unwrap(), a);
    let ab = default_patch(Tiling::Ab, 2).unwrap();
    let s8 = seed_tile(ProtoKind::AbRhombus, 2, 8).unwrap();
    assert_eq!(generate_patch(Tiling::Ab, 2, &s8).unwrap(), ab);
}

#[test]
fn errors() {
    let seed = seed_tile(ProtoKind::ChairL, 2, 0).unwrap();
    assert!(matches!(
        generate_patch_with(Tiling::Chair, 9, &seed, DEFAULT_MAX_LEVEL, Exec::Sequential),
        Err(SubstError::LevelTooHigh { .. })
    ));
    assert!(matches!(
        generate_patch(Tiling::Ab, 2, &seed),
        Err(SubstError::WrongKind { .. })
    ));
    let p = default_patch(Tiling::Chair, 2).unwrap();
    assert!(p.supertiles(3).is_err());
    assert!(p.restrict(&[7]).is_err());
    let hand = Patch {
        seed: None,
        ..p.clone()
    };
    assert!(matches!(hand.supertiles(1), Err(SubstError::NoSeed)));
}
