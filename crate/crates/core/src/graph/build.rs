use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Network, NetworkKind, NodeRoles};
use crate::error::{Error, Result};

/// Refuse constructions above this many nodes unless a larger cap is given.
pub const DEFAULT_NODE_CAP: usize = 500_000;

/// Closed-form node count; saturates at `u128::MAX` on overflow.
pub fn node_count(kind: NetworkKind, generation: u32) -> u128 {
    let pow = |base: u128| base.checked_pow(generation);
    let count = match kind {
        NetworkKind::Sg => pow(3).and_then(|p| p.checked_add(3)).map(|p| p / 2),
        NetworkKind::Dsg => pow(3),
        // (11/70)·8^g + (8/15)·3^g + 8/7 over the common denominator 210.
        NetworkKind::Sc => pow(8).zip(pow(3)).and_then(|(e, t)| {
            e.checked_mul(33)?
                .checked_add(t.checked_mul(112)?)?
                .checked_add(240)
                .map(|s| s / 210)
        }),
        NetworkKind::Dsc => pow(8),
        NetworkKind::Custom => None,
    };
    count.unwrap_or(u128::MAX)
}

pub fn generate(kind: NetworkKind, generation: u32) -> Result<Network> {
    generate_with_cap(kind, generation, DEFAULT_NODE_CAP)
}

pub fn generate_with_cap(kind: NetworkKind, generation: u32, cap: usize) -> Result<Network> {
    if kind == NetworkKind::Custom {
        return Err(Error::InvalidParameter(
            "custom networks are loaded from file, not generated".into(),
        ));
    }
    if generation < 1 {
        return Err(Error::InvalidGeneration(generation));
    }
    let nodes = node_count(kind, generation);
    if nodes > cap as u128 {
        return Err(Error::GenerationTooLarge {
            kind,
            generation,
            nodes,
            cap,
        });
    }
    Ok(build(kind, generation))
}

/// Replaces every smallest triangle (square) by a node, linking blocks that
/// share a corner (for squares: that share a side).
///
/// Generation `g` of a gasket or carpet is made of the blocks of a
/// level-`g-1` fractal, so its dual has generation `g - 1`. Generation 1
/// consists of a single block and dualizes to a one-node network.
pub fn dualize(network: &Network) -> Result<Network> {
    let g = network.generation();
    match network.kind() {
        NetworkKind::Sg => {
            let blocks = upward_triangles(network);
            Ok(dual_gasket(blocks, g - 1))
        }
        NetworkKind::Sc => {
            let level = g - 1;
            let side = 3i64.pow(level);
            let blocks = unit_squares(network)
                .into_iter()
                .filter(|&(i, j)| i < side && j < side && in_carpet(i, j))
                .collect();
            Ok(dual_carpet(blocks, level))
        }
        kind => Err(Error::NotDualizable(kind)),
    }
}

fn build(kind: NetworkKind, generation: u32) -> Network {
    match kind {
        NetworkKind::Sg => gasket(generation),
        NetworkKind::Dsg => dual_gasket(gasket_cells(generation), generation),
        NetworkKind::Sc => carpet(generation),
        NetworkKind::Dsc => dual_carpet(carpet_cells(generation), generation),
        NetworkKind::Custom => unreachable!("rejected by generate_with_cap"),
    }
}

/// Skew-lattice lower-left corners of the 3^levels unit triangles of a
/// gasket with side 2^levels, built by placing three shifted copies of the
/// previous level.
fn gasket_cells(levels: u32) -> Vec<(i64, i64)> {
    let mut cells = vec![(0i64, 0i64)];
    let mut side = 1i64;
    for _ in 0..levels {
        cells = [(0, 0), (side, 0), (0, side)]
            .iter()
            .flat_map(|&(da, db)| cells.iter().map(move |&(a, b)| (a + da, b + db)))
            .collect();
        side *= 2;
    }
    cells
}

/// Lower-left corners of the 8^levels unit cells of a carpet with side
/// 3^levels: eight shifted copies per level, the center one left out.
fn carpet_cells(levels: u32) -> Vec<(i64, i64)> {
    let mut cells = vec![(0i64, 0i64)];
    let mut side = 1i64;
    for _ in 0..levels {
        let mut next = Vec::with_capacity(cells.len() * 8);
        for dj in 0..3 {
            for di in 0..3 {
                if di == 1 && dj == 1 {
                    continue;
                }
                next.extend(cells.iter().map(|&(i, j)| (i + di * side, j + dj * side)));
            }
        }
        cells = next;
        side *= 3;
    }
    cells
}

/// Whether cell `(i, j)` survives in a carpet: no base-3 digit position
/// where both indices are 1.
fn in_carpet(mut i: i64, mut j: i64) -> bool {
    while i > 0 || j > 0 {
        if i % 3 == 1 && j % 3 == 1 {
            return false;
        }
        i /= 3;
        j /= 3;
    }
    true
}

fn skew_to_coord((a, b): (i64, i64)) -> [i64; 2] {
    [2 * a + b, b]
}

/// Sorts positions by `(y, x)` and returns them with an index lookup.
fn index_positions(positions: BTreeSet<(i64, i64)>) -> (Vec<[i64; 2]>, HashMap<[i64; 2], usize>) {
    // BTreeSet of (y, x) tuples iterates in the node order.
    let coords: Vec<[i64; 2]> = positions.into_iter().map(|(y, x)| [x, y]).collect();
    let index = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    (coords, index)
}

fn gasket(generation: u32) -> Network {
    let side = 1i64 << (generation - 1);
    let cells = gasket_cells(generation - 1);
    let corners = |(a, b): (i64, i64)| [(a, b), (a + 1, b), (a, b + 1)];

    let positions = cells
        .iter()
        .flat_map(|&c| corners(c))
        .map(|p| {
            let [x, y] = skew_to_coord(p);
            (y, x)
        })
        .collect();
    let (coords, index) = index_positions(positions);
    let node = |p: (i64, i64)| index[&skew_to_coord(p)];

    let mut edges = BTreeSet::new();
    for &cell in &cells {
        let [p, q, r] = corners(cell).map(node);
        for (u, v) in [(p, q), (q, r), (p, r)] {
            edges.insert([u.min(v), u.max(v)]);
        }
    }

    let mut roles = NodeRoles {
        outer: sorted([(0, 0), (side, 0), (0, side)].map(node).to_vec()),
        inner: Vec::new(),
    };
    if generation >= 2 {
        let h = side / 2;
        roles.inner = sorted([(h, 0), (0, h), (h, h)].map(node).to_vec());
    }
    finish(NetworkKind::Sg, generation, coords, edges, roles)
}

/// Network whose nodes are the given unit triangles, linked when two of them
/// share a corner. `level` is the resulting dual-gasket generation.
fn dual_gasket(cells: Vec<(i64, i64)>, level: u32) -> Network {
    let positions = cells
        .iter()
        .map(|&c| {
            let [x, y] = skew_to_coord(c);
            (y, x)
        })
        .collect();
    let (coords, index) = index_positions(positions);
    let node = |p: (i64, i64)| index[&skew_to_coord(p)];

    let mut by_corner: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for &(a, b) in &cells {
        let id = node((a, b));
        for corner in [(a, b), (a + 1, b), (a, b + 1)] {
            by_corner.entry(corner).or_default().push(id);
        }
    }
    let mut edges = BTreeSet::new();
    for ids in by_corner.values() {
        for (k, &u) in ids.iter().enumerate() {
            for &v in &ids[k + 1..] {
                edges.insert([u.min(v), u.max(v)]);
            }
        }
    }

    let mut roles = NodeRoles::default();
    if level >= 1 {
        let side = 1i64 << level;
        roles.outer = sorted([(0, 0), (side - 1, 0), (0, side - 1)].map(node).to_vec());
    }
    if level >= 2 {
        // One of the two triangles meeting at each hole corner, picked so
        // the choice is invariant under rotation of the whole gasket.
        let h = 1i64 << (level - 1);
        roles.inner = sorted([(h - 1, 0), (0, h), (h, h - 1)].map(node).to_vec());
    }
    finish(NetworkKind::Dsg, level, coords, edges, roles)
}

fn carpet(generation: u32) -> Network {
    let side = 3i64.pow(generation - 1);
    let cells = carpet_cells(generation - 1);
    let corners = |(i, j): (i64, i64)| [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];

    let positions = cells
        .iter()
        .flat_map(|&c| corners(c))
        .map(|(x, y)| (y, x))
        .collect();
    let (coords, index) = index_positions(positions);
    let node = |(x, y): (i64, i64)| index[&[x, y]];

    let mut edges = BTreeSet::new();
    for &cell in &cells {
        let ids = corners(cell).map(node);
        for k in 0..4 {
            let (u, v) = (ids[k], ids[(k + 1) % 4]);
            edges.insert([u.min(v), u.max(v)]);
        }
    }

    let mut roles = NodeRoles {
        outer: sorted([(0, 0), (side, 0), (0, side), (side, side)].map(node).to_vec()),
        inner: Vec::new(),
    };
    if generation >= 2 {
        let h = side / 3;
        roles.inner = sorted([(h, h), (2 * h, h), (h, 2 * h), (2 * h, 2 * h)].map(node).to_vec());
    }
    finish(NetworkKind::Sc, generation, coords, edges, roles)
}

/// Network whose nodes are the given unit squares, linked only when two
/// squares share a side (never diagonally).
fn dual_carpet(cells: Vec<(i64, i64)>, level: u32) -> Network {
    let positions = cells.iter().map(|&(i, j)| (j, i)).collect();
    let (coords, index) = index_positions(positions);

    let mut edges = BTreeSet::new();
    for (u, &[i, j]) in coords.iter().enumerate() {
        for neighbor in [[i + 1, j], [i, j + 1]] {
            if let Some(&v) = index.get(&neighbor) {
                edges.insert([u.min(v), u.max(v)]);
            }
        }
    }

    let node = |(i, j): (i64, i64)| index[&[i, j]];
    let mut roles = NodeRoles::default();
    if level >= 1 {
        let s = 3i64.pow(level) - 1;
        roles.outer = sorted([(0, 0), (s, 0), (0, s), (s, s)].map(node).to_vec());
    }
    if level >= 2 {
        // Cells diagonally outside each corner of the central hole.
        let h = 3i64.pow(level - 1);
        roles.inner = sorted(
            [(h - 1, h - 1), (2 * h, h - 1), (h - 1, 2 * h), (2 * h, 2 * h)]
                .map(node)
                .to_vec(),
        );
    }
    finish(NetworkKind::Dsc, level, coords, edges, roles)
}

/// Skew-lattice lower-left corners of the upward unit triangles present in
/// a gasket network.
fn upward_triangles(network: &Network) -> Vec<(i64, i64)> {
    let has_edge = |u: usize, v: usize| network.neighbors(u).binary_search(&v).is_ok();
    let mut cells = Vec::new();
    for (u, &[x, y]) in network.coords().iter().enumerate() {
        let right = network.node_at([x + 2, y]);
        let top = network.node_at([x + 1, y + 1]);
        if let (Some(r), Some(t)) = (right, top) {
            if has_edge(u, r) && has_edge(u, t) && has_edge(r, t) {
                // x = 2a + b, y = b
                cells.push(((x - y) / 2, y));
            }
        }
    }
    cells
}

/// Lower-left corners of the unit squares whose four sides are all edges.
fn unit_squares(network: &Network) -> Vec<(i64, i64)> {
    let has_edge = |u: usize, v: usize| network.neighbors(u).binary_search(&v).is_ok();
    let mut cells = Vec::new();
    for (u, &[x, y]) in network.coords().iter().enumerate() {
        let corners = (
            network.node_at([x + 1, y]),
            network.node_at([x + 1, y + 1]),
            network.node_at([x, y + 1]),
        );
        if let (Some(a), Some(b), Some(c)) = corners {
            if has_edge(u, a) && has_edge(a, b) && has_edge(b, c) && has_edge(c, u) {
                cells.push((x, y));
            }
        }
    }
    cells
}

fn sorted(mut nodes: Vec<usize>) -> Vec<usize> {
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

fn finish(
    kind: NetworkKind,
    generation: u32,
    coords: Vec<[i64; 2]>,
    edges: BTreeSet<[usize; 2]>,
    roles: NodeRoles,
) -> Network {
    Network::from_parts(kind, generation, coords, edges, roles)
        .expect("fractal construction yields a valid network")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_counts() {
        let sc: Vec<u128> = (1..=6).map(|g| node_count(NetworkKind::Sc, g)).collect();
        assert_eq!(sc, [4, 16, 96, 688, 5280, 41584]);
        assert_eq!(node_count(NetworkKind::Sg, 9), 9843);
        assert_eq!(node_count(NetworkKind::Dsg, 8), 6561);
        assert_eq!(node_count(NetworkKind::Dsc, 4), 4096);
        assert_eq!(node_count(NetworkKind::Dsc, 60), u128::MAX);
    }

    #[test]
    fn constructed_counts_match_closed_form() {
        for kind in NetworkKind::FRACTALS {
            let top = if kind.is_carpet() { 4 } else { 6 };
            for g in 1..=top {
                let net = generate(kind, g).unwrap();
                assert_eq!(net.node_count() as u128, node_count(kind, g), "{kind} g={g}");
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(generate(NetworkKind::Sg, 3).unwrap().node_count(), 15);
        assert_eq!(generate(NetworkKind::Dsg, 2).unwrap().node_count(), 9);
        assert_eq!(generate(NetworkKind::Sc, 2).unwrap().node_count(), 16);
        assert_eq!(generate(NetworkKind::Dsc, 1).unwrap().node_count(), 8);
    }

    #[test]
    fn gasket_edge_count_is_three_to_the_g() {
        for g in 1..=6 {
            let net = generate(NetworkKind::Sg, g).unwrap();
            assert_eq!(net.edge_count(), 3usize.pow(g));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            generate(NetworkKind::Sg, 0),
            Err(Error::InvalidGeneration(0))
        ));
        assert!(matches!(
            generate(NetworkKind::Dsc, 7),
            Err(Error::GenerationTooLarge { .. })
        ));
        assert!(generate_with_cap(NetworkKind::Dsc, 7, 3_000_000).is_ok());
        let dual = generate(NetworkKind::Dsg, 2).unwrap();
        assert!(matches!(dualize(&dual), Err(Error::NotDualizable(NetworkKind::Dsg))));
    }

    #[test]
    fn carpet_membership() {
        assert!(in_carpet(0, 0));
        assert!(!in_carpet(1, 1));
        assert!(!in_carpet(4, 4));
        assert!(!in_carpet(3, 4));
        assert!(in_carpet(3, 1));
        assert_eq!(carpet_cells(2).len(), 64);
        assert!(carpet_cells(2).iter().all(|&(i, j)| in_carpet(i, j)));
    }

    #[test]
    fn corners_have_gasket_degree_two() {
        for g in 2..=6 {
            let net = generate(NetworkKind::Sg, g).unwrap();
            assert_eq!(net.outer_corners().len(), 3);
            for &c in net.outer_corners() {
                assert_eq!(net.degree(c), 2);
            }
            assert_eq!(net.outer_corners()[0], 0);
        }
    }

    #[test]
    fn roles_are_disjoint_and_sized() {
        for kind in NetworkKind::FRACTALS {
            for g in 2..=4 {
                let net = generate(kind, g).unwrap();
                let roles = net.node_roles();
                assert_eq!(roles.outer.len(), kind.corner_count());
                assert_eq!(roles.inner.len(), kind.corner_count());
                assert!(roles.outer.iter().all(|n| !roles.inner.contains(n)));
            }
            let first = generate(kind, 1).unwrap();
            assert!(first.node_roles().inner.is_empty());
            assert!(matches!(first.inner_hole_corners(), Err(Error::NoInnerHole(1))));
        }
    }

    #[test]
    fn degree_bounds() {
        // frozen from construction, g = 1..5
        let expected = [
            (NetworkKind::Sg, [2, 4, 4, 4, 4]),
            (NetworkKind::Dsg, [2, 3, 3, 3, 3]),
            (NetworkKind::Sc, [2, 4, 4, 4, 4]),
            (NetworkKind::Dsc, [2, 4, 4, 4, 4]),
        ];
        for (kind, degrees) in expected {
            for (g, &d) in (1..=5).zip(&degrees) {
                assert_eq!(generate(kind, g).unwrap().max_degree(), d, "{kind} g={g}");
            }
        }
    }

    #[test]
    fn sg2_degrees() {
        let net = generate(NetworkKind::Sg, 2).unwrap();
        let mut degrees: Vec<usize> = (0..6).map(|k| net.degree(k)).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, [2, 2, 2, 4, 4, 4]);
        for &k in &net.node_roles().inner {
            assert_eq!(net.degree(k), 4);
        }
    }

    #[test]
    fn dualize_matches_generated_duals() {
        for g in 2..=5 {
            let sg = generate(NetworkKind::Sg, g).unwrap();
            assert_eq!(dualize(&sg).unwrap(), generate(NetworkKind::Dsg, g - 1).unwrap());
        }
        for g in 2..=4 {
            let sc = generate(NetworkKind::Sc, g).unwrap();
            assert_eq!(dualize(&sc).unwrap(), generate(NetworkKind::Dsc, g - 1).unwrap());
        }
    }

    #[test]
    fn dualize_single_block() {
        for kind in [NetworkKind::Sg, NetworkKind::Sc] {
            let dual = dualize(&generate(kind, 1).unwrap()).unwrap();
            assert_eq!(dual.node_count(), 1);
            assert_eq!(dual.edge_count(), 0);
            assert_eq!(dual.generation(), 0);
        }
    }

    #[test]
    fn dual_carpet_ring() {
        let ring = dualize(&generate(NetworkKind::Sc, 2).unwrap()).unwrap();
        assert_eq!(ring.node_count(), 8);
        assert_eq!(ring.edge_count(), 8);
        assert!((0..8).all(|k| ring.degree(k) == 2));
    }

    #[test]
    fn construction_is_deterministic() {
        for kind in NetworkKind::FRACTALS {
            assert_eq!(generate(kind, 3).unwrap(), generate(kind, 3).unwrap());
        }
    }
}
