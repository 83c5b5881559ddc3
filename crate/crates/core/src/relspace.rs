//! The space of closed trivalent graphs of a fixed degree modulo AS and IHX,
//! realized as an enumerated basis and a row-reduced relation matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::diagrams::{canonicalize, graph_key, Canonical, CanonicalDiagram, Diagram, DiagramCombination};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Largest degree with an enumerated basis.
pub const MAX_DEGREE: usize = 4;

/// A sparse integer row indexed by basis position.
pub type SparseRow = BTreeMap<usize, BigInt>;

/// Builds a closed trivalent diagram from a symmetric multiplicity matrix.
fn from_adjacency(adj: &[Vec<u8>]) -> Diagram {
    let n = adj.len();
    let cells: Vec<Vec<usize>> = (0..n).map(|v| (3 * v..3 * v + 3).collect()).collect();
    let mut next: Vec<usize> = (0..n).map(|v| 3 * v).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..adj[i][j] {
                edges.push((next[i], next[j]));
                next[i] += 1;
                next[j] += 1;
            }
        }
    }
    Diagram::new(cells, &edges, 0).expect("valid cubic multigraph")
}

/// Visits labeled loopless cubic multigraphs on `n` vertices in which every
/// vertex after the first has a neighbour of smaller index. Every connected
/// graph has such a labeling (breadth-first order).
fn connected_adjacencies(n: usize, visit: &mut impl FnMut(&[Vec<u8>])) {
    fn rec(adj: &mut [Vec<u8>], deg: &mut [u8], i: usize, j: usize, visit: &mut impl FnMut(&[Vec<u8>])) {
        let n = adj.len();
        if j == n {
            if deg[i] != 3 {
                return;
            }
            if i + 1 == n {
                visit(adj);
                return;
            }
            if (0..=i).all(|k| adj[k][i + 1] == 0) {
                return;
            }
            rec(adj, deg, i + 1, i + 2, visit);
            return;
        }
        let room = (3 - deg[i]).min(3 - deg[j]);
        for m in 0..=room {
            adj[i][j] = m;
            adj[j][i] = m;
            deg[i] += m;
            deg[j] += m;
            rec(adj, deg, i, j + 1, visit);
            deg[i] -= m;
            deg[j] -= m;
        }
        adj[i][j] = 0;
        adj[j][i] = 0;
    }
    let mut adj = vec![vec![0u8; n]; n];
    let mut deg = vec![0u8; n];
    if n >= 2 {
        rec(&mut adj, &mut deg, 0, 1, visit);
    }
}

/// Isomorphism classes of connected loopless cubic multigraphs with `2n`
/// vertices, one oriented representative each. With `keep_zero = false` the
/// classes that vanish by antisymmetry are dropped.
pub fn connected_trivalent(n: usize, keep_zero: bool) -> Result<Vec<Diagram>> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::OutOfRange(format!("connected graphs are enumerated for degree 1..={MAX_DEGREE}, got {n}")));
    }
    let mut seen = BTreeMap::new();
    connected_adjacencies(2 * n, &mut |adj| {
        let d = from_adjacency(adj);
        if d.components().len() == 1 {
            seen.entry(graph_key(&d)).or_insert(d);
        }
    });
    Ok(seen.into_values().filter(|d| keep_zero || !canonicalize(d).is_zero()).collect())
}

/// Canonical closed trivalent graphs with `2n` vertices that survive
/// antisymmetry, connected or not, sorted by canonical key.
pub fn enumerate_trivalent(n: usize) -> Result<Vec<CanonicalDiagram>> {
    if n > MAX_DEGREE {
        return Err(Error::OutOfRange(format!("trivalent graphs are enumerated up to degree {MAX_DEGREE}, got {n}")));
    }
    // connected pieces as (degree, diagram)
    let mut pieces: Vec<(usize, Diagram)> = Vec::new();
    for k in 1..=n {
        pieces.extend(connected_trivalent(k, false)?.into_iter().map(|d| (k, d)));
    }
    fn rec(
        pieces: &[(usize, Diagram)],
        start: usize,
        left: usize,
        acc: &Diagram,
        out: &mut BTreeSet<CanonicalDiagram>,
    ) {
        if left == 0 {
            if let Canonical::Form(c, _) = canonicalize(acc) {
                out.insert(c);
            }
            return;
        }
        for (i, (k, d)) in pieces.iter().enumerate().skip(start) {
            if *k <= left {
                rec(pieces, i, left - k, &acc.disjoint_union(d), out);
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(&pieces, 0, n, &Diagram::empty(), &mut out);
    Ok(out.into_iter().collect())
}

/// The three terms `(I, H, X)` of the IHX relation `I - H - X = 0` at the edge
/// through dart `e`, whose ends must be distinct trivalent vertices.
///
/// With cyclic orders `(e, p, q)` and `(f, r, s)` at the ends of `I`, the term
/// `H` has orders `(e, q, r)` and `(f, s, p)`, and `X` has `(e, p, r)` and
/// `(f, q, s)`. Only the cells change; every dart keeps its partner.
pub fn ihx_terms(d: &Diagram, e: usize) -> Result<[Diagram; 3]> {
    let f = d.partner(e);
    let (u, v) = (d.owner(e), d.owner(f));
    if u == v || d.cell(u).len() != 3 || d.cell(v).len() != 3 {
        return Err(Error::Domain(format!("dart {e} is not on an edge between two distinct trivalent vertices")));
    }
    let rot = |vertex: usize, first: usize| -> (usize, usize) {
        let c = d.cell(vertex);
        let i = c.iter().position(|&x| x == first).unwrap();
        (c[(i + 1) % 3], c[(i + 2) % 3])
    };
    let (p, q) = rot(u, e);
    let (r, s) = rot(v, f);
    let i = d.regroup(&[(u, vec![e, p, q]), (v, vec![f, r, s])]);
    let h = d.regroup(&[(u, vec![e, q, r]), (v, vec![f, s, p])]);
    let x = d.regroup(&[(u, vec![e, p, r]), (v, vec![f, q, s])]);
    Ok([i, h, x])
}

/// `I - H - X` at the edge through dart `e`.
pub fn ihx_relation(d: &Diagram, e: usize) -> Result<DiagramCombination> {
    let [i, h, x] = ihx_terms(d, e)?;
    let mut out = DiagramCombination::from_diagram(&i);
    out.add_diagram(&h, &-Rational::from_integer(1.into()));
    out.add_diagram(&x, &-Rational::from_integer(1.into()));
    Ok(out)
}

/// Darts through which every internal edge of `d` is visited once.
fn internal_edges(d: &Diagram) -> Vec<usize> {
    (0..d.num_darts())
        .filter(|&x| {
            let y = d.partner(x);
            x < y && d.owner(x) != d.owner(y) && d.cell(d.owner(x)).len() == 3 && d.cell(d.owner(y)).len() == 3
        })
        .collect()
}

/// One IHX row per internal edge of every basis graph, in basis coordinates.
pub fn ihx_relations(basis: &[CanonicalDiagram]) -> Result<Vec<SparseRow>> {
    let index: HashMap<&CanonicalDiagram, usize> = basis.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut rows = Vec::new();
    for g in basis {
        let d = g.diagram();
        for e in internal_edges(d) {
            let row = to_row(&ihx_relation(d, e)?, &index)?;
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn to_row(x: &DiagramCombination, index: &HashMap<&CanonicalDiagram, usize>) -> Result<SparseRow> {
    let mut row = SparseRow::new();
    for (c, v) in x.iter() {
        let &i = index
            .get(c)
            .ok_or_else(|| Error::Inconsistent(format!("relation term {c:?} is missing from the basis")))?;
        debug_assert!(v.is_integer());
        row.insert(i, v.to_integer());
    }
    Ok(row)
}

/// Reduced row echelon form over the integers, kept fraction-free: each row
/// is primitive with a positive pivot, and pivot columns vanish in all other
/// rows.
#[derive(Debug, Clone, Default)]
pub struct RowEchelon {
    pivots: BTreeMap<usize, SparseRow>,
}

fn make_primitive(row: &mut SparseRow) {
    let g = row.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    let negate = row.values().next().is_some_and(Signed::is_negative);
    if g.is_zero() {
        return;
    }
    let g = if negate { -g } else { g };
    for x in row.values_mut() {
        *x /= &g;
    }
}

/// `a * row - b * other`.
fn combine(row: &SparseRow, a: &BigInt, other: &SparseRow, b: &BigInt) -> SparseRow {
    let mut out = SparseRow::new();
    for (&c, x) in row {
        out.insert(c, a * x);
    }
    for (&c, y) in other {
        let entry = out.entry(c).or_insert_with(BigInt::zero);
        *entry -= b * y;
        if entry.is_zero() {
            out.remove(&c);
        }
    }
    out
}

impl RowEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.pivots.values()
    }

    fn eliminate(&self, mut row: SparseRow) -> SparseRow {
        for (c, p) in &self.pivots {
            if let Some(b) = row.get(c).cloned() {
                row = combine(&row, &p[c], p, &b);
                make_primitive(&mut row);
            }
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.eliminate(row);
        if row.is_empty() {
            return false;
        }
        make_primitive(&mut row);
        let c = *row.keys().next().unwrap();
        for p in self.pivots.values_mut() {
            if let Some(b) = p.get(&c).cloned() {
                *p = combine(p, &row[&c], &row, &b);
                make_primitive(p);
            }
        }
        self.pivots.insert(c, row);
        true
    }

    /// The normal form of a rational vector modulo the row space.
    pub fn reduce(&self, v: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let mut v = v.clone();
        for (c, p) in &self.pivots {
            let Some(x) = v.get(c).cloned() else { continue };
            let factor = x / Rational::from_integer(p[c].clone());
            for (&k, y) in p {
                let entry = v.entry(k).or_insert_with(Rational::zero);
                *entry -= &factor * Rational::from_integer(y.clone());
                if entry.is_zero() {
                    v.remove(&k);
                }
            }
        }
        v
    }
}

/// Clears denominators of a rational vector.
fn integer_row(v: &BTreeMap<usize, Rational>) -> SparseRow {
    let l = v.values().fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
    v.iter().map(|(&k, x)| (k, (x * Rational::from_integer(l.clone())).to_integer())).collect()
}

/// Rank of a list of rational vectors.
pub fn rational_rank(vectors: &[Vec<Rational>]) -> usize {
    let mut ech = RowEchelon::new();
    for v in vectors {
        let sparse: BTreeMap<usize, Rational> =
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        ech.insert(integer_row(&sparse));
    }
    ech.rank()
}

/// The degree-`n` part of the algebra of closed trivalent graphs.
#[derive(Debug)]
pub struct QuotientSpace {
    degree: usize,
    basis: Vec<CanonicalDiagram>,
    index: HashMap<CanonicalDiagram, usize>,
    relations: RowEchelon,
    free: Vec<usize>,
}

impl QuotientSpace {
    /// Enumerates the basis and row-reduces all IHX relations.
    pub fn build(n: usize) -> Result<Self> {
        let basis = enumerate_trivalent(n)?;
        let mut relations = RowEchelon::new();
        for row in ihx_relations(&basis)? {
            relations.insert(row);
        }
        let index = basis.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let pivots: BTreeSet<usize> = relations.pivot_columns().collect();
        let free = (0..basis.len()).filter(|i| !pivots.contains(i)).collect();
        Ok(Self { degree: n, basis, index, relations, free })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[CanonicalDiagram] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.relations.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.basis.len() - self.relations.rank()
    }

    pub fn relation_rows(&self) -> &RowEchelon {
        &self.relations
    }

    /// Basis graphs whose classes form the complement basis of the quotient.
    pub fn complement_basis(&self) -> Vec<&CanonicalDiagram> {
        self.free.iter().map(|&i| &self.basis[i]).collect()
    }

    fn ambient_vector(&self, x: &DiagramCombination) -> Result<BTreeMap<usize, Rational>> {
        let mut v = BTreeMap::new();
        for (c, coeff) in x.iter() {
            if c.legs() > 0 {
                return Err(Error::Domain("quotient coordinates need diagrams without legs".into()));
            }
            if c.diagram().circles() > 0 {
                return Err(Error::Domain("substitute circles before taking quotient coordinates".into()));
            }
            if c.degree() != self.degree {
                return Err(Error::DegreeMismatch { expected: self.degree, found: c.degree() });
            }
            let &i = self
                .index
                .get(c)
                .ok_or_else(|| Error::Inconsistent(format!("diagram {c:?} is missing from the basis")))?;
            v.insert(i, coeff.clone());
        }
        Ok(v)
    }

    /// Coordinates of the class of `x` in the complement basis.
    pub fn coordinates(&self, x: &DiagramCombination) -> Result<Vec<Rational>> {
        let r = self.relations.reduce(&self.ambient_vector(x)?);
        Ok(self.free.iter().map(|i| r.get(i).cloned().unwrap_or_else(Rational::zero)).collect())
    }

    pub fn equal_mod_relations(&self, x: &DiagramCombination, y: &DiagramCombination) -> Result<bool> {
        Ok(self.coordinates(&(x - y))?.iter().all(Zero::is_zero))
    }

    /// Rank of the span of `images` in the quotient.
    pub fn map_rank(&self, images: &[DiagramCombination]) -> Result<usize> {
        let coords = images.iter().map(|x| self.coordinates(x)).collect::<Result<Vec<_>>>()?;
        Ok(rational_rank(&coords))
    }
}

static SPACES: [OnceLock<Arc<QuotientSpace>>; MAX_DEGREE + 1] = [const { OnceLock::new() }; MAX_DEGREE + 1];

/// The quotient space of degree `n`, built once per process.
pub fn space(n: usize) -> Result<Arc<QuotientSpace>> {
    let cell = SPACES
        .get(n)
        .ok_or_else(|| Error::OutOfRange(format!("quotient spaces exist up to degree {MAX_DEGREE}, got {n}")))?;
    if let Some(s) = cell.get() {
        return Ok(s.clone());
    }
    let built = Arc::new(QuotientSpace::build(n)?);
    Ok(cell.get_or_init(|| built).clone())
}

pub fn quotient_dim(n: usize) -> Result<usize> {
    Ok(space(n)?.quotient_dim())
}

pub fn coordinates(x: &DiagramCombination, n: usize) -> Result<Vec<Rational>> {
    space(n)?.coordinates(x)
}

pub fn equal_mod_relations(x: &DiagramCombination, y: &DiagramCombination, n: usize) -> Result<bool> {
    space(n)?.equal_mod_relations(x, y)
}

pub fn map_rank(images: &[DiagramCombination], n: usize) -> Result<usize> {
    space(n)?.map_rank(images)
}
