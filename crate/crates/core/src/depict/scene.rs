//! Vector primitives (line segments and text labels) in layout units.

use crate::chem::{BondOrder, MolGraph, Reaction};

use super::font;
use super::layout::{layout_2d, smallest_rings, Point};
use super::style::ImageStyle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Bond,
    Arrow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
    pub color: [u8; 3],
    pub kind: SegmentKind,
}

/// One glyph run of a label: character, lower-left corner, height.
#[derive(Debug, Clone, PartialEq)]
pub struct Glyph {
    pub ch: char,
    pub origin: Point,
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub text: String,
    pub glyphs: Vec<Glyph>,
    pub color: [u8; 3],
}

impl Label {
    pub const SIZE: f64 = 0.5;

    /// Label whose first glyph is centred on `anchor`; digits after the main
    /// text become subscripts and trailing signs superscripts.
    pub fn at(anchor: Point, main: &str, sub: &str, sup: &str, size: f64, color: [u8; 3]) -> Label {
        let mut glyphs = Vec::new();
        let first_w = main.chars().next().map_or(0.0, |c| font::advance(c, size) - 0.25 * size);
        let mut x = anchor[0] - first_w / 2.0;
        let base = anchor[1] - size / 2.0;
        for c in main.chars() {
            glyphs.push(Glyph { ch: c, origin: [x, base], size });
            x += font::advance(c, size);
        }
        let small = size * 0.6;
        for c in sub.chars() {
            glyphs.push(Glyph { ch: c, origin: [x, base - 0.2 * size], size: small });
            x += font::advance(c, small);
        }
        for c in sup.chars() {
            glyphs.push(Glyph { ch: c, origin: [x, base + 0.6 * size], size: small });
            x += font::advance(c, small);
        }
        Label {
            text: format!("{main}{sub}{sup}"),
            glyphs,
            color,
        }
    }

    pub fn segments(&self) -> Vec<(Point, Point)> {
        self.glyphs
            .iter()
            .flat_map(|g| font::glyph_segments(g.ch, g.origin, g.size))
            .collect()
    }

    pub fn bbox(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for g in &self.glyphs {
            b[0] = b[0].min(g.origin[0]);
            b[1] = b[1].min(g.origin[1]);
            b[2] = b[2].max(g.origin[0] + font::GLYPH_WIDTH * g.size);
            b[3] = b[3].max(g.origin[1] + g.size);
        }
        b
    }

    fn translate(&mut self, d: Point, s: f64) {
        for g in &mut self.glyphs {
            g.origin = [g.origin[0] * s + d[0], g.origin[1] * s + d[1]];
            g.size *= s;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene {
    pub segments: Vec<Segment>,
    pub labels: Vec<Label>,
    /// Bounding box of each molecule drawn, as [min_x, min_y, max_x, max_y].
    pub regions: Vec<[f64; 4]>,
    pub arrows: usize,
}

fn merge_box(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0].min(b[0]), a[1].min(b[1]), a[2].max(b[2]), a[3].max(b[3])]
}

const EMPTY_BOX: [f64; 4] = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];

impl Scene {
    pub fn bond_segment_count(&self) -> usize {
        self.segments.iter().filter(|s| s.kind == SegmentKind::Bond).count()
    }

    pub fn bbox(&self) -> [f64; 4] {
        let mut b = EMPTY_BOX;
        for s in &self.segments {
            b = merge_box(b, [s.a[0].min(s.b[0]), s.a[1].min(s.b[1]), s.a[0].max(s.b[0]), s.a[1].max(s.b[1])]);
        }
        for l in &self.labels {
            b = merge_box(b, l.bbox());
        }
        if b[0].is_infinite() {
            [0.0, 0.0, 0.0, 0.0]
        } else {
            b
        }
    }

    /// Applies p -> p * s + d to every primitive.
    pub fn transform(&mut self, d: Point, s: f64) {
        let f = |p: Point| [p[0] * s + d[0], p[1] * s + d[1]];
        for seg in &mut self.segments {
            seg.a = f(seg.a);
            seg.b = f(seg.b);
        }
        for l in &mut self.labels {
            l.translate(d, s);
        }
        for r in &mut self.regions {
            let lo = f([r[0], r[1]]);
            let hi = f([r[2], r[3]]);
            *r = [lo[0], lo[1], hi[0], hi[1]];
        }
    }

    fn append(&mut self, other: Scene) {
        self.segments.extend(other.segments);
        self.labels.extend(other.labels);
        self.regions.extend(other.regions);
        self.arrows += other.arrows;
    }
}

fn needs_label(m: &MolGraph, v: usize) -> bool {
    let a = &m.atoms()[v];
    a.element.atomic_number() != 6 || a.formal_charge != 0 || a.isotope.is_some() || m.degree(v) == 0
}

fn atom_label(m: &MolGraph, v: usize, at: Point, style: ImageStyle) -> Label {
    let a = &m.atoms()[v];
    let mut main = String::new();
    let mut sup = String::new();
    if let Some(iso) = a.isotope {
        main.push_str(&iso.to_string());
    }
    main.push_str(a.element.symbol());
    let mut sub = String::new();
    if a.h_count > 0 {
        main.push('H');
        if a.h_count > 1 {
            sub = a.h_count.to_string();
        }
    }
    match a.formal_charge {
        0 => {}
        1 => sup.push('+'),
        -1 => sup.push('-'),
        c if c > 0 => sup = format!("{c}+"),
        c => sup = format!("{}-", -c),
    }
    // centre the element symbol, not the isotope prefix
    let anchor = if a.isotope.is_some() {
        let shift: f64 = a
            .isotope
            .unwrap()
            .to_string()
            .chars()
            .map(|c| font::advance(c, Label::SIZE))
            .sum();
        [at[0] - shift, at[1]]
    } else {
        at
    };
    Label::at(anchor, &main, &sub, &sup, Label::SIZE, style.atom_color(a.element))
}

/// Segments and labels for one molecule at unit bond length.
pub fn molecule_scene(m: &MolGraph, style: ImageStyle) -> Scene {
    let pos = layout_2d(m);
    let rings = smallest_rings(m);
    let labelled: Vec<bool> = (0..m.atom_count()).map(|v| needs_label(m, v)).collect();
    let mut scene = Scene::default();
    let color = style.bond_color();
    for b in m.bonds() {
        let (mut p, mut q) = (pos[b.a], pos[b.b]);
        let d = [q[0] - p[0], q[1] - p[1]];
        let len = d[0].hypot(d[1]).max(1e-9);
        let u = [d[0] / len, d[1] / len];
        let trim = 0.3;
        if labelled[b.a] {
            p = [p[0] + u[0] * trim, p[1] + u[1] * trim];
        }
        if labelled[b.b] {
            q = [q[0] - u[0] * trim, q[1] - u[1] * trim];
        }
        let nrm = [-u[1], u[0]];
        let off = |pt: Point, k: f64| [pt[0] + nrm[0] * k, pt[1] + nrm[1] * k];
        let mut push = |a: Point, c: Point| {
            scene.segments.push(Segment { a, b: c, color, kind: SegmentKind::Bond });
        };
        match b.order {
            BondOrder::Single => push(p, q),
            BondOrder::Double => {
                push(off(p, 0.09), off(q, 0.09));
                push(off(p, -0.09), off(q, -0.09));
            }
            BondOrder::Triple => {
                push(p, q);
                push(off(p, 0.15), off(q, 0.15));
                push(off(p, -0.15), off(q, -0.15));
            }
            BondOrder::Aromatic => {
                push(p, q);
                // inner line toward the centre of the smallest ring holding the bond
                let ring = rings.iter().find(|r| r.contains(&b.a) && r.contains(&b.b));
                if let Some(r) = ring {
                    let c = r.iter().fold([0.0, 0.0], |acc, &v| [acc[0] + pos[v][0], acc[1] + pos[v][1]]);
                    let c = [c[0] / r.len() as f64, c[1] / r.len() as f64];
                    let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
                    let side = if (c[0] - mid[0]) * nrm[0] + (c[1] - mid[1]) * nrm[1] > 0.0 { 0.18 } else { -0.18 };
                    let pa = [p[0] + 0.15 * (q[0] - p[0]), p[1] + 0.15 * (q[1] - p[1])];
                    let qa = [q[0] + 0.15 * (p[0] - q[0]), q[1] + 0.15 * (p[1] - q[1])];
                    push(off(pa, side), off(qa, side));
                }
            }
        }
    }
    for v in 0..m.atom_count() {
        if labelled[v] {
            scene.labels.push(atom_label(m, v, pos[v], style));
        }
    }
    let region = scene.bbox();
    scene.regions.push(region);
    scene
}

const GAP: f64 = 0.8;

fn place_row(out: &mut Scene, mut items: Vec<Scene>, cursor: &mut f64, style: ImageStyle) {
    let n = items.len();
    for (i, mut s) in items.drain(..).enumerate() {
        let b = s.bbox();
        s.transform([*cursor - b[0], -(b[1] + b[3]) / 2.0], 1.0);
        *cursor += b[2] - b[0] + GAP;
        out.append(s);
        if i + 1 < n {
            out.labels.push(Label::at([*cursor + 0.2, 0.0], "+", "", "", 0.6, style.bond_color()));
            *cursor += 0.6 + GAP;
        }
    }
}

/// Reactants, arrow (agents drawn above it at half scale), products.
pub fn reaction_scene(r: &Reaction, style: ImageStyle) -> Scene {
    let mut out = Scene::default();
    let mut cursor = 0.0;
    place_row(&mut out, r.reactants.iter().map(|m| molecule_scene(m, style)).collect(), &mut cursor, style);

    let mut agents = Scene::default();
    let mut agent_cursor = 0.0;
    place_row(&mut agents, r.agents.iter().map(|m| molecule_scene(m, style)).collect(), &mut agent_cursor, style);
    let agent_width = if r.agents.is_empty() { 0.0 } else { (agent_cursor - GAP) * 0.5 };
    let arrow_len = (agent_width + 0.6).max(2.5);
    let (x0, x1) = (cursor, cursor + arrow_len);
    let color = style.bond_color();
    for (a, b) in [([x0, 0.0], [x1, 0.0]), ([x1, 0.0], [x1 - 0.3, 0.18]), ([x1, 0.0], [x1 - 0.3, -0.18])] {
        out.segments.push(Segment { a, b, color, kind: SegmentKind::Arrow });
    }
    out.arrows += 1;
    if !r.agents.is_empty() {
        agents.transform([0.0, 0.0], 0.5);
        let b2 = agents.bbox();
        let dx = x0 + (arrow_len - (b2[2] - b2[0])) / 2.0 - b2[0];
        let dy = 0.35 - b2[1];
        agents.transform([dx, dy], 1.0);
        out.append(agents);
    }
    cursor = x1 + GAP;
    place_row(&mut out, r.products.iter().map(|m| molecule_scene(m, style)).collect(), &mut cursor, style);
    out
}
