//! 2D coordinates with unit bond length: regular polygons for rings, fused
//! and spiro rings built off shared atoms, 120° zig-zag chains.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;

use crate::chem::{BondOrder, MolGraph};

pub type Point = [f64; 2];

fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

fn unit(angle: f64) -> Point {
    [angle.cos(), angle.sin()]
}

fn angle_of(v: Point) -> f64 {
    v[1].atan2(v[0])
}

fn norm(v: Point) -> f64 {
    v[0].hypot(v[1])
}

fn rotate(v: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    [v[0] * c - v[1] * s, v[0] * s + v[1] * c]
}

fn centroid(points: impl Iterator<Item = Point>) -> Point {
    let mut sum = [0.0, 0.0];
    let mut n = 0.0;
    for p in points {
        sum = add(sum, p);
        n += 1.0;
    }
    if n == 0.0 {
        sum
    } else {
        scale(sum, 1.0 / n)
    }
}

/// Shortest cycle through each ring bond, deduplicated, as ordered atom lists.
pub fn smallest_rings(m: &MolGraph) -> Vec<Vec<usize>> {
    let ring = m.ring_bonds();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut rings = Vec::new();
    for (bi, b) in m.bonds().iter().enumerate() {
        if !ring[bi] {
            continue;
        }
        // BFS from b.a to b.b avoiding this bond
        let mut prev = vec![usize::MAX; m.atom_count()];
        prev[b.a] = b.a;
        let mut queue = VecDeque::from([b.a]);
        while let Some(v) = queue.pop_front() {
            if v == b.b {
                break;
            }
            for &(u, ei) in m.neighbors(v) {
                if ei != bi && ring[ei] && prev[u] == usize::MAX {
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        let mut cycle = vec![b.b];
        let mut v = b.b;
        while v != b.a {
            v = prev[v];
            cycle.push(v);
        }
        cycle.reverse();
        let mut key = cycle.clone();
        key.sort_unstable();
        if seen.insert(key) {
            rings.push(cycle);
        }
    }
    rings.sort_by(|a, b| {
        let mut ka = a.clone();
        let mut kb = b.clone();
        ka.sort_unstable();
        kb.sort_unstable();
        (a.len(), ka).cmp(&(b.len(), kb))
    });
    rings
}

fn polygon_radius(n: usize) -> f64 {
    1.0 / (2.0 * (PI / n as f64).sin())
}

/// Local coordinates for one ring system (rings sharing atoms).
fn layout_ring_system(rings: &[&Vec<usize>], pos: &mut [Option<Point>]) {
    let first = rings[0];
    let n = first.len();
    let r = polygon_radius(n);
    for (k, &a) in first.iter().enumerate() {
        pos[a] = Some(scale(unit(PI / 2.0 + 2.0 * PI * k as f64 / n as f64), r));
    }
    let mut done = vec![false; rings.len()];
    done[0] = true;
    loop {
        let next = (0..rings.len())
            .filter(|&i| !done[i])
            .map(|i| (i, rings[i].iter().filter(|&&a| pos[a].is_some()).count()))
            .filter(|&(_, c)| c > 0)
            .max_by_key(|&(i, c)| (c.min(2), std::cmp::Reverse(i)));
        let Some((ri, _)) = next else { break };
        done[ri] = true;
        place_ring(rings[ri], pos);
    }
}

fn place_ring(cycle: &[usize], pos: &mut [Option<Point>]) {
    let n = cycle.len();
    let placed: Vec<usize> = (0..n).filter(|&i| pos[cycle[i]].is_some()).collect();
    if placed.len() == n {
        return;
    }
    let system_center = centroid(pos.iter().flatten().copied());
    if placed.len() == 1 {
        // spiro: new polygon opposite the existing atoms
        let s = pos[cycle[placed[0]]].unwrap();
        let mut out = sub(s, system_center);
        if norm(out) < 1e-9 {
            out = [1.0, 0.0];
        }
        let out = scale(out, 1.0 / norm(out));
        let r = polygon_radius(n);
        let c = add(s, scale(out, r));
        let a0 = angle_of(sub(s, c));
        for k in 1..n {
            let idx = (placed[0] + k) % n;
            pos[cycle[idx]] = Some(add(c, scale(unit(a0 + 2.0 * PI * k as f64 / n as f64), r)));
        }
        return;
    }
    let adjacent_pair = placed.len() == 2
        && (placed[1] - placed[0] == 1 || (placed[0] == 0 && placed[1] == n - 1));
    if adjacent_pair {
        // fused along a shared edge: reflect the polygon away from the system
        let (i, j) = if placed[1] - placed[0] == 1 {
            (placed[0], placed[1])
        } else {
            (placed[1], placed[0])
        };
        let a = pos[cycle[i]].unwrap();
        let b = pos[cycle[j]].unwrap();
        let mid = scale(add(a, b), 0.5);
        let edge = sub(b, a);
        let mut nrm = [-edge[1], edge[0]];
        nrm = scale(nrm, 1.0 / norm(nrm));
        let away = sub(mid, system_center);
        if nrm[0] * away[0] + nrm[1] * away[1] < 0.0 {
            nrm = scale(nrm, -1.0);
        }
        let apothem = 1.0 / (2.0 * (PI / n as f64).tan());
        let c = add(mid, scale(nrm, apothem));
        let r = polygon_radius(n);
        let a0 = angle_of(sub(a, c));
        let step = 2.0 * PI / n as f64;
        let sign = {
            let guess = add(c, scale(unit(a0 + step), r));
            if norm(sub(guess, b)) < 1e-6 {
                1.0
            } else {
                -1.0
            }
        };
        // walk from a through b and onward
        for k in 2..n {
            let idx = (i + k * (if j == (i + 1) % n { 1 } else { n - 1 })) % n;
            pos[cycle[idx]] = Some(add(c, scale(unit(a0 + sign * step * k as f64), r)));
        }
        return;
    }
    // bridged: fill each unplaced run along an outward arc between its ends
    for start in 0..n {
        if pos[cycle[start]].is_none() || pos[cycle[(start + 1) % n]].is_some() {
            continue;
        }
        let mut end = (start + 1) % n;
        let mut run = Vec::new();
        while pos[cycle[end]].is_none() {
            run.push(cycle[end]);
            end = (end + 1) % n;
        }
        let a = pos[cycle[start]].unwrap();
        let b = pos[cycle[end]].unwrap();
        let mid = scale(add(a, b), 0.5);
        let edge = sub(b, a);
        let mut nrm = if norm(edge) < 1e-9 { [0.0, 1.0] } else { scale([-edge[1], edge[0]], 1.0 / norm(edge)) };
        let away = sub(mid, system_center);
        if nrm[0] * away[0] + nrm[1] * away[1] < 0.0 {
            nrm = scale(nrm, -1.0);
        }
        let k = run.len();
        let bulge = 0.5 * k as f64 + 0.3;
        for (t_idx, &atom) in run.iter().enumerate() {
            let t = (t_idx + 1) as f64 / (k + 1) as f64;
            let p = add(add(a, scale(edge, t)), scale(nrm, bulge * (PI * t).sin()));
            pos[atom] = Some(p);
        }
    }
}

fn is_linear_center(m: &MolGraph, v: usize) -> bool {
    let mut doubles = 0;
    for &(_, bi) in m.neighbors(v) {
        match m.bonds()[bi].order {
            BondOrder::Triple => return true,
            BondOrder::Double => doubles += 1,
            _ => {}
        }
    }
    doubles >= 2
}

/// Deterministic 2D layout; components are placed left to right.
pub fn layout_2d(m: &MolGraph) -> Vec<Point> {
    let n = m.atom_count();
    let rings = smallest_rings(m);
    // ring systems by union-find over ring membership
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for ring in &rings {
        for w in ring.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut in_ring = vec![false; n];
    for ring in &rings {
        for &a in ring {
            in_ring[a] = true;
        }
    }
    let system_of: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let system_members = |root: usize| -> Vec<usize> { (0..n).filter(|&v| system_of[v] == root).collect() };

    let local_system = |root: usize| -> Vec<Option<Point>> {
        let mut local = vec![None; n];
        let sys_rings: Vec<&Vec<usize>> = rings.iter().filter(|r| system_of[r[0]] == root).collect();
        layout_ring_system(&sys_rings, &mut local);
        local
    };

    let mut pos: Vec<Option<Point>> = vec![None; n];
    let mut zig = vec![1.0f64; n];
    let mut components: Vec<Vec<usize>> = m.components();
    components.sort_by_key(|c| c[0]);
    let mut result = vec![[0.0, 0.0]; n];
    let mut cursor_x = 0.0;

    for (ci, comp) in components.iter().enumerate() {
        let root = comp[0];
        let mut queue = VecDeque::new();
        if in_ring[root] {
            let local = local_system(system_of[root]);
            for v in system_members(system_of[root]) {
                pos[v] = local[v];
                queue.push_back(v);
            }
        } else {
            pos[root] = Some([0.0, 0.0]);
            queue.push_back(root);
        }
        while let Some(v) = queue.pop_front() {
            let here = pos[v].unwrap();
            let exits: Vec<usize> = m
                .neighbors(v)
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| pos[u].is_none())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if exits.is_empty() {
                continue;
            }
            let k = exits.len();
            let mut dirs: Vec<(f64, f64)> = Vec::with_capacity(k);
            if in_ring[v] {
                let c = centroid(system_members(system_of[v]).into_iter().filter_map(|a| pos[a]));
                let out = angle_of(sub(here, c));
                for i in 0..k {
                    dirs.push((out + (i as f64 - (k as f64 - 1.0) / 2.0) * PI / 3.0, 1.0));
                }
            } else {
                let placed_nb = m.neighbors(v).iter().map(|&(u, _)| u).find(|&u| pos[u].is_some() && !exits.contains(&u));
                match placed_nb {
                    None => {
                        if k == 1 {
                            dirs.push((PI / 6.0, 1.0));
                        } else {
                            for i in 0..k {
                                dirs.push((PI / 6.0 + 2.0 * PI * i as f64 / k as f64, 1.0));
                            }
                        }
                    }
                    Some(p) => {
                        let beta = angle_of(sub(pos[p].unwrap(), here));
                        let incoming = beta + PI;
                        if k == 1 {
                            if is_linear_center(m, v) {
                                dirs.push((incoming, -zig[v]));
                            } else {
                                dirs.push((incoming - zig[v] * PI / 3.0, -zig[v]));
                            }
                        } else {
                            for i in 0..k {
                                let d = beta + 2.0 * PI * (i + 1) as f64 / (k + 1) as f64;
                                let turn = (d - incoming).sin();
                                dirs.push((d, if turn > 0.0 { 1.0 } else { -1.0 }));
                            }
                        }
                    }
                }
            }
            for (&u, &(dir, z)) in exits.iter().zip(&dirs) {
                if pos[u].is_some() {
                    continue;
                }
                let target = add(here, unit(dir));
                if in_ring[u] {
                    let local = local_system(system_of[u]);
                    let members = system_members(system_of[u]);
                    let lu = local[u].unwrap();
                    let lc = centroid(members.iter().filter_map(|&a| local[a]));
                    let theta = dir - angle_of(sub(lc, lu));
                    for a in members {
                        if pos[a].is_none() {
                            pos[a] = Some(add(target, rotate(sub(local[a].unwrap(), lu), theta)));
                            queue.push_back(a);
                        }
                    }
                } else {
                    pos[u] = Some(target);
                    zig[u] = z;
                    queue.push_back(u);
                }
            }
        }
        // shift the component to the right of the previous one, centred on y = 0
        let pts: Vec<Point> = comp.iter().map(|&v| pos[v].unwrap()).collect();
        let min_x = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let max_x = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let min_y = pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
        let max_y = pts.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
        let dx = if ci == 0 { 0.0 } else { cursor_x - min_x };
        let dy = if components.len() == 1 { 0.0 } else { -(min_y + max_y) / 2.0 };
        for &v in comp {
            let p = pos[v].unwrap();
            result[v] = [p[0] + dx, p[1] + dy];
        }
        cursor_x = max_x + dx + 1.5;
    }
    result
}
