//! Canonical forms of diagrams modulo the antisymmetry relation.
//!
//! The underlying multigraph of each connected component is labeled canonically
//! by individualization and refinement; the lexicographically least adjacency
//! code over all leaves of the search tree fixes the representative. The
//! representative orients every trivalent vertex by the order of its darts, so
//! the sign of a diagram is the product over its vertices of the parity of the
//! transported cyclic order. Leaves with equal codes differ by automorphisms;
//! if two of them disagree on the sign the diagram equals its own negative.
//!
//! Parallel edges between distinct vertices never contribute to the sign
//! (exchanging two of them transposes darts at both ends), so vertex labelings
//! are enough once self-loops have been sent to zero.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::Diagram;

/// Canonical representative of an isomorphism class of diagrams.
///
/// Equality, ordering and hashing use the key only.
#[derive(Clone)]
pub struct CanonicalDiagram {
    key: Arc<[u8]>,
    diagram: Arc<Diagram>,
}

impl CanonicalDiagram {
    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn degree(&self) -> usize {
        self.diagram.degree()
    }

    pub fn legs(&self) -> usize {
        self.diagram.legs()
    }

    pub fn empty() -> Self {
        match canonicalize(&Diagram::empty()) {
            Canonical::Form(c, _) => c,
            Canonical::Zero => unreachable!(),
        }
    }
}

impl PartialEq for CanonicalDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CanonicalDiagram {}

impl PartialOrd for CanonicalDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl Hash for CanonicalDiagram {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl fmt::Debug for CanonicalDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CanonicalDiagram(deg {}, legs {}, circles {}, key {:02x?})",
            self.degree(),
            self.legs(),
            self.diagram.circles(),
            &self.key[..]
        )
    }
}

/// Result of canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Canonical {
    /// The diagram equals its own negative.
    Zero,
    /// The canonical representative and the sign `s` with `d = s * representative`.
    Form(CanonicalDiagram, i8),
}

impl Canonical {
    pub fn is_zero(&self) -> bool {
        matches!(self, Canonical::Zero)
    }
}

pub fn canonicalize(d: &Diagram) -> Canonical {
    if d.has_self_loop() {
        return Canonical::Zero;
    }
    let mut parts = Vec::new();
    let mut sign = 1i8;
    for verts in d.components() {
        match canonical_component(d, &verts) {
            None => return Canonical::Zero,
            Some(part) => {
                sign *= part.sign;
                parts.push(part);
            }
        }
    }
    parts.sort_by(|a, b| a.code.cmp(&b.code));

    assert!(d.circles() <= u16::MAX as usize, "too many circles");
    let mut key = Vec::new();
    key.extend_from_slice(&(d.circles() as u16).to_be_bytes());
    for p in &parts {
        key.extend_from_slice(&p.code);
    }
    let diagram = assemble(&parts, d.circles());
    Canonical::Form(CanonicalDiagram { key: key.into(), diagram: Arc::new(diagram) }, sign)
}

struct ComponentForm {
    code: Vec<u8>,
    sign: i8,
}

/// Local view of one component: vertex kinds and adjacency multiplicities.
struct Local<'a> {
    d: &'a Diagram,
    verts: &'a [usize],
    index: Vec<usize>,
    mult: Vec<u8>,
    n: usize,
}

impl<'a> Local<'a> {
    fn new(d: &'a Diagram, verts: &'a [usize]) -> Self {
        let n = verts.len();
        assert!(n <= u8::MAX as usize, "component too large to canonicalize");
        let mut index = vec![usize::MAX; d.num_vertices()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut mult = vec![0u8; n * n];
        for (i, &v) in verts.iter().enumerate() {
            for &x in d.cell(v) {
                let j = index[d.owner(d.partner(x))];
                mult[i * n + j] += 1;
            }
        }
        Self { d, verts, index, mult, n }
    }

    fn kind(&self, i: usize) -> u8 {
        self.d.cell(self.verts[i]).len() as u8
    }

    fn mult(&self, i: usize, j: usize) -> u8 {
        self.mult[i * self.n + j]
    }

    /// Canonical code under the labeling `label[i]` (a permutation of `0..n`).
    fn code(&self, inv: &[usize]) -> Vec<u8> {
        let n = self.n;
        let mut code = Vec::with_capacity(1 + n + n * (n - 1) / 2);
        code.push(n as u8);
        code.extend(inv.iter().map(|&i| self.kind(i)));
        for a in 0..n {
            for b in a + 1..n {
                code.push(self.mult(inv[a], inv[b]));
            }
        }
        code
    }

    /// Orientation sign of transporting the component along `label`.
    fn sign(&self, label: &[usize]) -> i8 {
        // parallel index of each dart: rank among darts of its vertex leading
        // to the same neighbour, numbered from the endpoint with smaller label
        let d = self.d;
        let mut pidx = vec![0u8; d.num_darts()];
        for (i, &v) in self.verts.iter().enumerate() {
            let mut seen: Vec<(usize, u8)> = Vec::with_capacity(3);
            for &x in d.cell(v) {
                let j = self.index[d.owner(d.partner(x))];
                if label[i] < label[j] {
                    let k = match seen.iter_mut().find(|(w, _)| *w == j) {
                        Some(e) => {
                            e.1 += 1;
                            e.1
                        }
                        None => {
                            seen.push((j, 0));
                            0
                        }
                    };
                    pidx[x] = k;
                    pidx[d.partner(x)] = k;
                }
            }
        }
        let mut sign = 1i8;
        for &v in self.verts {
            let cell = d.cell(v);
            if cell.len() != 3 {
                continue;
            }
            let keys: Vec<(usize, u8)> = cell
                .iter()
                .map(|&x| (label[self.index[d.owner(d.partner(x))]], pidx[x]))
                .collect();
            let inversions = (0..3)
                .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
                .filter(|&(a, b)| keys[a] > keys[b])
                .count();
            if inversions % 2 == 1 {
                sign = -sign;
            }
        }
        sign
    }

    /// Refines a coloring until stable. Colors are ranks of label-invariant
    /// signatures, so the result does not depend on the input numbering.
    fn refine(&self, colors: &mut [usize]) {
        let n = self.n;
        let mut count = distinct(colors);
        loop {
            let sigs: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
                .map(|i| {
                    let mut nb: Vec<(usize, u8)> =
                        (0..n).filter(|&j| self.mult(i, j) > 0).map(|j| (colors[j], self.mult(i, j))).collect();
                    nb.sort_unstable();
                    (colors[i], nb)
                })
                .collect();
            let mut sorted: Vec<&(usize, Vec<(usize, u8)>)> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            for (i, s) in sigs.iter().enumerate() {
                colors[i] = sorted.binary_search(&s).unwrap();
            }
            let next = sorted.len();
            if next == count {
                return;
            }
            count = next;
        }
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Search<'a> {
    local: &'a Local<'a>,
    best: Option<Vec<u8>>,
    best_sign: i8,
    odd_automorphism: bool,
    stop_on_odd: bool,
}

impl Search<'_> {
    fn run(&mut self, mut colors: Vec<usize>) {
        self.local.refine(&mut colors);
        let n = self.local.n;
        // first cell (by color) with more than one vertex
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let Some(target) = sizes.iter().position(|&s| s > 1) else {
            self.leaf(&colors);
            return;
        };
        for v in 0..n {
            if colors[v] != target {
                continue;
            }
            let next: Vec<usize> =
                colors.iter().enumerate().map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 }).collect();
            self.run(next);
            if self.odd_automorphism && self.stop_on_odd {
                return;
            }
        }
    }

    fn leaf(&mut self, label: &[usize]) {
        let n = self.local.n;
        let mut inv = vec![0; n];
        for (i, &l) in label.iter().enumerate() {
            inv[l] = i;
        }
        let code = self.local.code(&inv);
        let ord = match &self.best {
            None => Ordering::Less,
            Some(b) => code.cmp(b),
        };
        match ord {
            Ordering::Less => {
                self.best_sign = self.local.sign(label);
                self.best = Some(code);
            }
            Ordering::Equal => {
                if self.local.sign(label) != self.best_sign {
                    self.odd_automorphism = true;
                }
            }
            Ordering::Greater => {}
        }
    }
}

fn canonical_component(d: &Diagram, verts: &[usize]) -> Option<ComponentForm> {
    let local = Local::new(d, verts);
    let colors: Vec<usize> = (0..local.n).map(|i| if local.kind(i) == 1 { 0 } else { 1 }).collect();
    let mut search = Search { local: &local, best: None, best_sign: 1, odd_automorphism: false, stop_on_odd: true };
    search.run(colors);
    if search.odd_automorphism {
        return None;
    }
    Some(ComponentForm { code: search.best.expect("search visits at least one leaf"), sign: search.best_sign })
}

/// Isomorphism key of the underlying loopless multigraph, ignoring cyclic
/// orders; defined also for classes that vanish by antisymmetry.
pub fn graph_key(d: &Diagram) -> Vec<u8> {
    let mut codes: Vec<Vec<u8>> = d
        .components()
        .iter()
        .map(|verts| {
            let local = Local::new(d, verts);
            let colors: Vec<usize> = (0..local.n).map(|i| if local.kind(i) == 1 { 0 } else { 1 }).collect();
            let mut search =
                Search { local: &local, best: None, best_sign: 1, odd_automorphism: false, stop_on_odd: false };
            search.run(colors);
            search.best.expect("search visits at least one leaf")
        })
        .collect();
    codes.sort();
    let mut key = (d.circles() as u16).to_be_bytes().to_vec();
    key.extend(codes.concat());
    key
}

/// Builds the representative diagram from sorted component codes.
fn assemble(parts: &[ComponentForm], circles: usize) -> Diagram {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut pair: Vec<usize> = Vec::new();
    for p in parts {
        let n = p.code[0] as usize;
        let kinds = &p.code[1..1 + n];
        let upper = &p.code[1 + n..];
        let mult = |a: usize, b: usize| -> u8 {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if a == b {
                return 0;
            }
            // row-major upper triangle without diagonal
            upper[a * n - a * (a + 1) / 2 + (b - a - 1)]
        };
        // dart (vertex a, neighbour b, parallel k), ordered by a then b then k
        let base = pair.len();
        let mut first_dart = vec![0usize; n];
        let mut next = base;
        for a in 0..n {
            first_dart[a] = next;
            let deg: usize = (0..n).map(|b| mult(a, b) as usize).sum();
            debug_assert_eq!(deg, kinds[a] as usize);
            cells.push((next..next + deg).collect());
            next += deg;
        }
        pair.resize(next, usize::MAX);
        for a in 0..n {
            let mut slot = first_dart[a];
            for b in 0..n {
                for k in 0..mult(a, b) as usize {
                    // offset of (a, k) among b's darts toward a
                    let before: usize = (0..a).map(|c| mult(b, c) as usize).sum();
                    pair[slot] = first_dart[b] + before + k;
                    slot += 1;
                }
            }
        }
    }
    Diagram::from_parts(cells, pair, circles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn form(d: &Diagram) -> (CanonicalDiagram, i8) {
        match canonicalize(d) {
            Canonical::Form(c, s) => (c, s),
            Canonical::Zero => panic!("unexpected zero"),
        }
    }

    fn random_relabel(d: &Diagram, rng: &mut ChaCha8Rng) -> Diagram {
        let mut dp: Vec<usize> = (0..d.num_darts()).collect();
        dp.shuffle(rng);
        let mut vp: Vec<usize> = (0..d.num_vertices()).collect();
        vp.shuffle(rng);
        // also rotate cyclic orders, which must not change anything
        let r = d.relabel(&dp, &vp);
        let cells = r
            .cells()
            .iter()
            .map(|c| {
                let mut c = c.clone();
                let k = rng.gen_range(0..c.len());
                c.rotate_left(k);
                c
            })
            .collect();
        Diagram::from_parts(cells, (0..r.num_darts()).map(|x| r.partner(x)).collect(), r.circles())
    }

    #[test]
    fn odd_wheels_vanish() {
        for k in 0..=4 {
            assert!(canonicalize(&Diagram::wheel(2 * k + 1).unwrap()).is_zero(), "wheel {}", 2 * k + 1);
        }
        for k in 1..=5 {
            assert!(!canonicalize(&Diagram::wheel(2 * k).unwrap()).is_zero());
        }
    }

    #[test]
    fn tadpole_vanishes() {
        // loop at a trivalent vertex whose third dart goes to a leg
        let tadpole = Diagram::new(vec![vec![0, 1, 2], vec![3]], &[(0, 1), (2, 3)], 0).unwrap();
        assert!(canonicalize(&tadpole).is_zero());
        // the same tadpole hanging off a wheel
        let w = Diagram::wheel(2).unwrap().disjoint_union(&tadpole);
        assert!(canonicalize(&w).is_zero());
    }

    #[test]
    fn tadpole_zero_by_orientation_brute_force() {
        // for both cyclic orders at the loop vertex, exchanging the two loop
        // darts is an automorphism that reverses the order there
        let base = Diagram::new(vec![vec![0, 1, 2], vec![3]], &[(0, 1), (2, 3)], 0).unwrap();
        let same_cycle = |a: &[usize], b: &[usize]| (0..3).any(|r| {
            let mut c = a.to_vec();
            c.rotate_left(r);
            c == b
        });
        for d in [base.clone(), base.flip_vertex(0)] {
            let swapped = d.relabel(&[1, 0, 2, 3], &[0, 1]);
            assert!(same_cycle(swapped.cell(0), d.flip_vertex(0).cell(0)));
            assert!(!same_cycle(swapped.cell(0), d.cell(0)));
            assert!(canonicalize(&d).is_zero());
        }
    }

    #[test]
    fn relabeling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w2 = Diagram::wheel(2).unwrap();
        let samples = [
            w2.clone(),
            Diagram::wheel(4).unwrap(),
            Diagram::wheel(6).unwrap().disjoint_union(&w2),
            Diagram::theta().disjoint_union(&Diagram::theta()),
            Diagram::interval().disjoint_union(&w2).with_circles(2),
        ];
        for d in &samples {
            let (c, s) = form(d);
            for _ in 0..20 {
                let r = random_relabel(d, &mut rng);
                let (c2, s2) = form(&r);
                assert_eq!(c, c2);
                assert_eq!(s, s2);
            }
        }
    }

    #[test]
    fn flipping_a_vertex_flips_sign() {
        let d = Diagram::wheel(4).unwrap();
        let (c, s) = form(&d);
        for v in 0..4 {
            let (c2, s2) = form(&d.flip_vertex(v));
            assert_eq!(c, c2);
            assert_eq!(s, -s2);
        }
    }

    #[test]
    fn idempotent() {
        for d in [Diagram::wheel(6).unwrap(), Diagram::theta(), Diagram::interval(), Diagram::empty()] {
            let (c, _) = form(&d);
            let (c2, s2) = form(c.diagram());
            assert_eq!(c, c2);
            assert_eq!(s2, 1);
            assert_eq!(c.diagram(), c2.diagram());
        }
    }

    #[test]
    fn interval_is_positive() {
        let (c, s) = form(&Diagram::interval());
        assert_eq!(s, 1);
        assert_eq!(c.legs(), 2);
    }

    #[test]
    fn circles_distinguish() {
        let (a, _) = form(&Diagram::theta());
        let (b, _) = form(&Diagram::theta().with_circles(1));
        assert_ne!(a, b);
    }

    #[test]
    fn random_orientations_consistent() {
        // random flips: sign changes by (-1)^flips
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = Diagram::wheel(8).unwrap();
        let (c, s) = form(&d);
        for _ in 0..30 {
            let mut e = d.clone();
            let mut flips = 0;
            for v in 0..8 {
                if rng.gen_bool(0.5) {
                    e = e.flip_vertex(v);
                    flips += 1;
                }
            }
            let e = random_relabel(&e, &mut rng);
            let (c2, s2) = form(&e);
            assert_eq!(c, c2);
            assert_eq!(s2, if flips % 2 == 0 { s } else { -s });
        }
    }
}
