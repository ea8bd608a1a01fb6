use chemforge::chem::{parse_reaction, parse_smiles};
use chemforge::corpus::NAMED_MOLECULES;
use chemforge::depict::*;
use proptest::prelude::*;

fn blank(w: u32, h: u32, style: ImageStyle) -> RasterImage {
    let bg = style.background();
    RasterImage {
        width: w,
        height: h,
        pixels: bg.iter().copied().cycle().take((w * h * 3) as usize).collect(),
        style,
    }
}

#[test]
fn bonded_molecules_leave_ink() {
    for (smi, name) in NAMED_MOLECULES {
        let m = parse_smiles(smi).unwrap();
        if m.bonds().is_empty() {
            continue;
        }
        for style in ImageStyle::ALL {
            let img = render_molecule_auto(&m, style, 336, 7).unwrap();
            assert_eq!(img.pixels.len(), (img.width * img.height * 3) as usize);
            let ink = img.ink_fraction();
            assert!(ink >= 0.01, "{name} {} ink {ink}", style.name());
        }
    }
}

#[test]
fn rendering_is_deterministic() {
    let m = parse_smiles("CC(=O)Oc1ccccc1C(=O)O").unwrap();
    for style in ImageStyle::ALL {
        let a = render_molecule(&m, style, (336, 336), 11).unwrap();
        let b = render_molecule(&m, style, (336, 336), 11).unwrap();
        assert_eq!(a.to_png().unwrap(), b.to_png().unwrap());
    }
    let h1 = render_molecule(&m, ImageStyle::Handwritten, (336, 336), 1).unwrap();
    let h2 = render_molecule(&m, ImageStyle::Handwritten, (336, 336), 2).unwrap();
    assert_ne!(h1, h2);
}

#[test]
fn grayscale_and_clean_channels() {
    let m = parse_smiles("OC(=O)c1ccncc1").unwrap();
    for style in [ImageStyle::CleanA, ImageStyle::CleanB] {
        let img = render_molecule(&m, style, (336, 336), 0).unwrap();
        assert!(img.pixels.chunks_exact(3).any(|p| p[0] != p[1] || p[1] != p[2]));
        let g = augment(&img, 3, &[AugmentOp::Grayscale]);
        assert!(g.pixels.chunks_exact(3).all(|p| p[0] == p[1] && p[1] == p[2]));
        let gn = augment(&img, 3, &[AugmentOp::Grayscale, AugmentOp::Noise]);
        assert!(gn.pixels.chunks_exact(3).all(|p| p[0] == p[1] && p[1] == p[2]));
    }
}

#[test]
fn augmentation_contracts() {
    let m = parse_smiles("c1ccc2ccccc2c1N").unwrap();
    let img = render_molecule(&m, ImageStyle::CleanB, (400, 336), 0).unwrap();
    assert_eq!(augment(&img, 9, &[]), img);
    let all = [AugmentOp::ColorJitter, AugmentOp::RotateSmall, AugmentOp::Noise];
    let a = augment(&img, 9, &all);
    let b = augment(&img, 9, &all);
    assert_eq!(a, b);
    assert_eq!((a.width, a.height, a.pixels.len()), (img.width, img.height, img.pixels.len()));
    assert_ne!(augment(&img, 10, &all), a);
}

#[test]
fn reaction_width_grows_with_molecule_count() {
    let rxns = [
        "CCO>>CC=O",
        "CCO.CC(=O)O>>CC(=O)OCC",
        "CCO.CC(=O)O>>CC(=O)OCC.O",
        "CCO.CC(=O)O.CN>>CC(=O)OCC.O",
    ];
    let mut last = 0.0;
    for r in rxns {
        let s = reaction_scene(&parse_reaction(r).unwrap(), ImageStyle::CleanA);
        let b = s.bbox();
        let w = b[2] - b[0];
        assert!(w > last, "{r}: {w} <= {last}");
        last = w;
        let (cw, _) = auto_canvas(&s, 336);
        let img = render_reaction(&parse_reaction(r).unwrap(), ImageStyle::CleanA, (cw, 336), 0).unwrap();
        assert!(img.ink_fraction() > 0.005);
    }
}

#[test]
fn agents_sit_above_arrow() {
    let r = parse_reaction("CCO.CC(=O)O>CCN(CC)CC>CC(=O)OCC").unwrap();
    let s = reaction_scene(&r, ImageStyle::CleanA);
    assert_eq!(s.arrows, 1);
    let arrow: Vec<_> = s.segments.iter().filter(|g| g.kind == SegmentKind::Arrow).collect();
    let arrow_y = arrow.iter().map(|g| g.a[1].max(g.b[1])).fold(f64::MIN, f64::max);
    let x = (
        arrow.iter().map(|g| g.a[0].min(g.b[0])).fold(f64::MAX, f64::min),
        arrow.iter().map(|g| g.a[0].max(g.b[0])).fold(f64::MIN, f64::max),
    );
    let above = s
        .segments
        .iter()
        .filter(|g| g.kind == SegmentKind::Bond && g.a[0] > x.0 && g.a[0] < x.1)
        .all(|g| g.a[1] > arrow_y && g.b[1] > arrow_y);
    assert!(above);
}

#[test]
fn tiling_token_constant() {
    let cfg = ImageEncoderConfig::default();
    assert_eq!((336 / 14) * (336 / 14) / 8, 72);
    assert_eq!(cfg.tokens_per_tile(), 72);
    for ((w, h), tiles) in [((336, 336), 1), ((672, 336), 2), ((1008, 672), 6)] {
        let ts = tile_image(&blank(w, h, ImageStyle::CleanA), &cfg).unwrap();
        assert_eq!(ts.tiles.len(), tiles);
        assert_eq!(ts.token_count(), 72 * tiles as u32);
        assert_eq!(ts.grid.0 * ts.grid.1, tiles as u32);
    }
}

#[test]
fn tiling_pads_with_background() {
    let m = parse_smiles("CCCCCCO").unwrap();
    let img = render_molecule(&m, ImageStyle::Handwritten, (400, 300), 0).unwrap();
    let ts = tile_image(&img, &ImageEncoderConfig::default()).unwrap();
    assert_eq!(ts.grid, (1, 2));
    let right = &ts.tiles[1];
    assert_eq!(right.pixel(335, 335), ImageStyle::Handwritten.background());
    assert_eq!(ts.tiles[0].pixel(10, 20), img.pixel(10, 20));
    assert_eq!(right.pixel(5, 7), img.pixel(336 + 5, 7));
}

#[test]
fn bad_encoder_config_rejected() {
    let c = ImageEncoderConfig { tile_size: 330, ..Default::default() };
    assert!(c.validate().is_err());
    let c = ImageEncoderConfig { reduce_factor: 7, ..Default::default() };
    assert!(c.validate().is_err());
}

proptest! {
    #[test]
    fn token_accounting(w in 1u32..1200, h in 1u32..900) {
        let cfg = ImageEncoderConfig::default();
        let ts = tile_image(&blank(w, h, ImageStyle::CleanB), &cfg).unwrap();
        let expect = w.div_ceil(336) * h.div_ceil(336) * 72;
        prop_assert_eq!(ts.token_count(), expect);
        prop_assert_eq!(cfg.image_tokens(w, h), expect);
        prop_assert!(ts.tiles.iter().all(|t| t.width == 336 && t.height == 336));
    }
}
