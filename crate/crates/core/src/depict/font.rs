//! Minimal stroke font. Glyphs are polylines in a 0.6 × 1.0 box with y up;
//! lowercase letters reuse the capital strokes at reduced height.

type Stroke = &'static [(f64, f64)];

const O_RING: Stroke = &[
    (0.15, 0.0),
    (0.0, 0.15),
    (0.0, 0.85),
    (0.15, 1.0),
    (0.45, 1.0),
    (0.6, 0.85),
    (0.6, 0.15),
    (0.45, 0.0),
    (0.15, 0.0),
];
const P_BOWL: Stroke = &[(0.0, 0.0), (0.0, 1.0), (0.45, 1.0), (0.6, 0.85), (0.6, 0.65), (0.45, 0.5), (0.0, 0.5)];

pub const GLYPH_WIDTH: f64 = 0.6;
pub const LOWERCASE_SCALE: f64 = 0.7;

pub fn strokes(c: char) -> &'static [Stroke] {
    match c.to_ascii_uppercase() {
        'A' => &[&[(0.0, 0.0), (0.3, 1.0), (0.6, 0.0)], &[(0.12, 0.4), (0.48, 0.4)]],
        'B' => &[
            &[(0.0, 0.0), (0.0, 1.0), (0.45, 1.0), (0.55, 0.9), (0.55, 0.6), (0.45, 0.5), (0.0, 0.5)],
            &[(0.45, 0.5), (0.6, 0.4), (0.6, 0.1), (0.5, 0.0), (0.0, 0.0)],
        ],
        'C' => &[&[(0.6, 0.85), (0.45, 1.0), (0.15, 1.0), (0.0, 0.85), (0.0, 0.15), (0.15, 0.0), (0.45, 0.0), (0.6, 0.15)]],
        'D' => &[&[(0.0, 0.0), (0.0, 1.0), (0.4, 1.0), (0.6, 0.8), (0.6, 0.2), (0.4, 0.0), (0.0, 0.0)]],
        'E' => &[&[(0.6, 1.0), (0.0, 1.0), (0.0, 0.0), (0.6, 0.0)], &[(0.0, 0.5), (0.45, 0.5)]],
        'F' => &[&[(0.6, 1.0), (0.0, 1.0), (0.0, 0.0)], &[(0.0, 0.5), (0.45, 0.5)]],
        'G' => &[&[
            (0.6, 0.85),
            (0.45, 1.0),
            (0.15, 1.0),
            (0.0, 0.85),
            (0.0, 0.15),
            (0.15, 0.0),
            (0.45, 0.0),
            (0.6, 0.15),
            (0.6, 0.45),
            (0.35, 0.45),
        ]],
        'H' => &[&[(0.0, 0.0), (0.0, 1.0)], &[(0.6, 0.0), (0.6, 1.0)], &[(0.0, 0.5), (0.6, 0.5)]],
        'I' => &[&[(0.3, 0.0), (0.3, 1.0)], &[(0.1, 1.0), (0.5, 1.0)], &[(0.1, 0.0), (0.5, 0.0)]],
        'J' => &[&[(0.6, 1.0), (0.6, 0.15), (0.45, 0.0), (0.15, 0.0), (0.0, 0.15)]],
        'K' => &[&[(0.0, 0.0), (0.0, 1.0)], &[(0.6, 1.0), (0.0, 0.4)], &[(0.2, 0.6), (0.6, 0.0)]],
        'L' => &[&[(0.0, 1.0), (0.0, 0.0), (0.6, 0.0)]],
        'M' => &[&[(0.0, 0.0), (0.0, 1.0), (0.3, 0.5), (0.6, 1.0), (0.6, 0.0)]],
        'N' => &[&[(0.0, 0.0), (0.0, 1.0), (0.6, 0.0), (0.6, 1.0)]],
        'O' | '0' => &[O_RING],
        'P' => &[P_BOWL],
        'Q' => &[O_RING, &[(0.35, 0.25), (0.6, 0.0)]],
        'R' => &[P_BOWL, &[(0.3, 0.5), (0.6, 0.0)]],
        'S' => &[&[
            (0.6, 0.85),
            (0.45, 1.0),
            (0.15, 1.0),
            (0.0, 0.85),
            (0.0, 0.65),
            (0.15, 0.5),
            (0.45, 0.5),
            (0.6, 0.35),
            (0.6, 0.15),
            (0.45, 0.0),
            (0.15, 0.0),
            (0.0, 0.15),
        ]],
        'T' => &[&[(0.0, 1.0), (0.6, 1.0)], &[(0.3, 1.0), (0.3, 0.0)]],
        'U' => &[&[(0.0, 1.0), (0.0, 0.15), (0.15, 0.0), (0.45, 0.0), (0.6, 0.15), (0.6, 1.0)]],
        'V' => &[&[(0.0, 1.0), (0.3, 0.0), (0.6, 1.0)]],
        'W' => &[&[(0.0, 1.0), (0.15, 0.0), (0.3, 0.6), (0.45, 0.0), (0.6, 1.0)]],
        'X' => &[&[(0.0, 0.0), (0.6, 1.0)], &[(0.0, 1.0), (0.6, 0.0)]],
        'Y' => &[&[(0.0, 1.0), (0.3, 0.5), (0.6, 1.0)], &[(0.3, 0.5), (0.3, 0.0)]],
        'Z' => &[&[(0.0, 1.0), (0.6, 1.0), (0.0, 0.0), (0.6, 0.0)]],
        '1' => &[&[(0.15, 0.8), (0.3, 1.0), (0.3, 0.0)], &[(0.1, 0.0), (0.5, 0.0)]],
        '2' => &[&[(0.0, 0.85), (0.15, 1.0), (0.45, 1.0), (0.6, 0.85), (0.6, 0.6), (0.0, 0.0), (0.6, 0.0)]],
        '3' => &[
            &[(0.0, 0.85), (0.15, 1.0), (0.45, 1.0), (0.6, 0.85), (0.6, 0.6), (0.45, 0.5), (0.2, 0.5)],
            &[(0.45, 0.5), (0.6, 0.4), (0.6, 0.15), (0.45, 0.0), (0.15, 0.0), (0.0, 0.15)],
        ],
        '4' => &[&[(0.45, 0.0), (0.45, 1.0), (0.0, 0.3), (0.6, 0.3)]],
        '5' => &[&[(0.6, 1.0), (0.0, 1.0), (0.0, 0.55), (0.45, 0.55), (0.6, 0.4), (0.6, 0.15), (0.45, 0.0), (0.0, 0.0)]],
        '6' => &[&[
            (0.55, 1.0),
            (0.2, 1.0),
            (0.0, 0.75),
            (0.0, 0.15),
            (0.15, 0.0),
            (0.45, 0.0),
            (0.6, 0.15),
            (0.6, 0.4),
            (0.45, 0.55),
            (0.0, 0.55),
        ]],
        '7' => &[&[(0.0, 1.0), (0.6, 1.0), (0.2, 0.0)]],
        '8' => &[&[
            (0.15, 0.5),
            (0.0, 0.65),
            (0.0, 0.85),
            (0.15, 1.0),
            (0.45, 1.0),
            (0.6, 0.85),
            (0.6, 0.65),
            (0.45, 0.5),
            (0.15, 0.5),
            (0.0, 0.35),
            (0.0, 0.15),
            (0.15, 0.0),
            (0.45, 0.0),
            (0.6, 0.15),
            (0.6, 0.35),
            (0.45, 0.5),
        ]],
        '9' => &[&[(0.6, 0.45), (0.15, 0.45), (0.0, 0.6), (0.0, 0.85), (0.15, 1.0), (0.45, 1.0), (0.6, 0.85), (0.6, 0.25), (0.4, 0.0)]],
        '+' => &[&[(0.3, 0.2), (0.3, 0.8)], &[(0.0, 0.5), (0.6, 0.5)]],
        '-' => &[&[(0.1, 0.5), (0.5, 0.5)]],
        '(' => &[&[(0.4, 1.0), (0.2, 0.75), (0.2, 0.25), (0.4, 0.0)]],
        ')' => &[&[(0.2, 1.0), (0.4, 0.75), (0.4, 0.25), (0.2, 0.0)]],
        _ => &[&[(0.0, 0.0), (0.6, 0.0), (0.6, 1.0), (0.0, 1.0), (0.0, 0.0)]],
    }
}

/// Glyph strokes scaled to `size` (height) and placed with its lower-left
/// corner at `origin`, as line segments.
pub fn glyph_segments(c: char, origin: [f64; 2], size: f64) -> Vec<([f64; 2], [f64; 2])> {
    let s = if c.is_ascii_lowercase() { size * LOWERCASE_SCALE } else { size };
    let mut out = Vec::new();
    for stroke in strokes(c) {
        for w in stroke.windows(2) {
            let p = [origin[0] + w[0].0 * s, origin[1] + w[0].1 * s];
            let q = [origin[0] + w[1].0 * s, origin[1] + w[1].1 * s];
            out.push((p, q));
        }
    }
    out
}

pub fn advance(c: char, size: f64) -> f64 {
    let s = if c.is_ascii_lowercase() { size * LOWERCASE_SCALE } else { size };
    (GLYPH_WIDTH + 0.25) * s
}
