use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A uni-trivalent diagram built from darts (half-edges).
///
/// Every dart belongs to exactly one vertex cell and is paired with exactly one
/// other dart by an edge. Cells have size 1 (legs) or 3; a trivalent cell lists
/// its darts in cyclic order. Vertex-free circle components are only counted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    cells: Vec<Vec<usize>>,
    pair: Vec<usize>,
    owner: Vec<usize>,
    circles: usize,
}

impl Diagram {
    /// Builds a diagram from vertex cells over darts `0..D` and an edge list.
    pub fn new(cells: Vec<Vec<usize>>, edges: &[(usize, usize)], circles: usize) -> Result<Self> {
        let ndarts: usize = cells.iter().map(Vec::len).sum();
        let mut owner = vec![usize::MAX; ndarts];
        for (v, cell) in cells.iter().enumerate() {
            if cell.len() != 1 && cell.len() != 3 {
                return Err(Error::Structure(format!("vertex {v} has valency {}", cell.len())));
            }
            for &d in cell {
                if d >= ndarts {
                    return Err(Error::Structure(format!("dart {d} out of range 0..{ndarts}")));
                }
                if owner[d] != usize::MAX {
                    return Err(Error::Structure(format!("dart {d} lies in two vertices")));
                }
                owner[d] = v;
            }
        }
        let mut pair = vec![usize::MAX; ndarts];
        for &(a, b) in edges {
            if a >= ndarts || b >= ndarts {
                return Err(Error::Structure(format!("edge ({a},{b}) names an unknown dart")));
            }
            if a == b {
                return Err(Error::Structure(format!("edge ({a},{a}) pairs a dart with itself")));
            }
            if pair[a] != usize::MAX || pair[b] != usize::MAX {
                return Err(Error::Structure(format!("edge ({a},{b}) reuses a dart")));
            }
            pair[a] = b;
            pair[b] = a;
        }
        if let Some(d) = pair.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Structure(format!("dart {d} is not on any edge")));
        }
        Ok(Self { cells, pair, owner, circles })
    }

    pub(crate) fn from_parts(cells: Vec<Vec<usize>>, pair: Vec<usize>, circles: usize) -> Self {
        let mut owner = vec![0; pair.len()];
        for (v, cell) in cells.iter().enumerate() {
            for &d in cell {
                owner[d] = v;
            }
        }
        debug_assert!(pair.iter().enumerate().all(|(d, &p)| p != d && pair[p] == d));
        Self { cells, pair, owner, circles }
    }

    pub fn empty() -> Self {
        Self::from_parts(vec![], vec![], 0)
    }

    /// `k` vertex-free circles.
    pub fn circles_only(k: usize) -> Self {
        Self::from_parts(vec![], vec![], k)
    }

    /// The interval: two legs joined by an edge.
    pub fn interval() -> Self {
        Self::from_parts(vec![vec![0], vec![1]], vec![1, 0], 0)
    }

    /// The wheel with `n` legs: an `n`-cycle of trivalent vertices, each with one
    /// outward leg, all oriented coherently as (previous, leg, next).
    pub fn wheel(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("wheel needs at least one leg".into()));
        }
        let mut cells = Vec::with_capacity(2 * n);
        let mut pair = vec![0; 4 * n];
        for i in 0..n {
            let (prev, next, leg) = (3 * i, 3 * i + 1, 3 * i + 2);
            cells.push(vec![prev, leg, next]);
            let succ_prev = 3 * ((i + 1) % n);
            pair[next] = succ_prev;
            pair[succ_prev] = next;
            pair[leg] = 3 * n + i;
            pair[3 * n + i] = leg;
        }
        for i in 0..n {
            cells.push(vec![3 * n + i]);
        }
        Ok(Self::from_parts(cells, pair, 0))
    }

    /// The theta graph: two trivalent vertices joined by three edges.
    pub fn theta() -> Self {
        Self::from_parts(vec![vec![0, 1, 2], vec![3, 5, 4]], vec![3, 4, 5, 0, 1, 2], 0)
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let off = self.pair.len();
        let voff = self.cells.len();
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().map(|c| c.iter().map(|d| d + off).collect()));
        let mut pair = self.pair.clone();
        pair.extend(other.pair.iter().map(|p| p + off));
        let mut owner = self.owner.clone();
        owner.extend(other.owner.iter().map(|v| v + voff));
        Self { cells, pair, owner, circles: self.circles + other.circles }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, v: usize) -> &[usize] {
        &self.cells[v]
    }

    pub fn partner(&self, d: usize) -> usize {
        self.pair[d]
    }

    pub fn owner(&self, d: usize) -> usize {
        self.owner[d]
    }

    pub fn num_darts(&self) -> usize {
        self.pair.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.cells.len()
    }

    pub fn circles(&self) -> usize {
        self.circles
    }

    pub fn is_leg(&self, v: usize) -> bool {
        self.cells[v].len() == 1
    }

    pub fn legs(&self) -> usize {
        self.cells.iter().filter(|c| c.len() == 1).count()
    }

    pub fn trivalent(&self) -> usize {
        self.cells.len() - self.legs()
    }

    /// Half the number of vertices.
    pub fn degree(&self) -> usize {
        self.cells.len() / 2
    }

    /// Darts of the univalent vertices, in vertex order.
    pub fn leg_darts(&self) -> Vec<usize> {
        self.cells.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect()
    }

    pub fn with_circles(mut self, circles: usize) -> Self {
        self.circles = circles;
        self
    }

    /// True if some trivalent vertex carries an edge to itself.
    pub fn has_self_loop(&self) -> bool {
        (0..self.pair.len()).any(|d| self.owner[d] == self.owner[self.pair[d]])
    }

    /// Connected components as lists of vertices (circles are not included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.cells.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &d in &self.cells[v] {
                    let w = self.owner[self.pair[d]];
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Replaces the cells of some vertices by new cells over the same darts.
    pub(crate) fn regroup(&self, replacements: &[(usize, Vec<usize>)]) -> Self {
        let mut cells = self.cells.clone();
        for (v, cell) in replacements {
            cells[*v] = cell.clone();
        }
        Self::from_parts(cells, self.pair.clone(), self.circles)
    }

    /// Deletes the given vertices and reconnects the strands through their darts.
    ///
    /// `joins` pairs darts of deleted vertices; each surviving dart whose edge ran
    /// into a deleted vertex is reconnected by following edges and joins until a
    /// surviving dart is reached. Closed loops made only of deleted darts become
    /// circles. Deleted darts that are neither joined nor connected to survivors
    /// by an edge must pair among themselves.
    pub(crate) fn remove_and_join(&self, removed: &[usize], joins: &[(usize, usize)]) -> Self {
        let nd = self.pair.len();
        let mut dead = vec![false; self.cells.len()];
        for &v in removed {
            dead[v] = true;
        }
        let mut join = vec![usize::MAX; nd];
        for &(a, b) in joins {
            join[a] = b;
            join[b] = a;
        }
        // renumber surviving darts and vertices
        let mut new_id = vec![usize::MAX; nd];
        let mut cells = Vec::new();
        let mut next = 0;
        for (v, cell) in self.cells.iter().enumerate() {
            if dead[v] {
                continue;
            }
            cells.push(
                cell.iter()
                    .map(|&d| {
                        new_id[d] = next;
                        next += 1;
                        next - 1
                    })
                    .collect::<Vec<_>>(),
            );
        }
        let mut pair = vec![usize::MAX; next];
        let mut visited = vec![false; nd];
        for d in 0..nd {
            if new_id[d] == usize::MAX || pair[new_id[d]] != usize::MAX {
                continue;
            }
            let mut x = self.pair[d];
            while new_id[x] == usize::MAX {
                visited[x] = true;
                let y = join[x];
                debug_assert!(y != usize::MAX, "dead dart {x} is neither joined nor paired");
                visited[y] = true;
                x = self.pair[y];
            }
            pair[new_id[d]] = new_id[x];
            pair[new_id[x]] = new_id[d];
        }
        let mut circles = self.circles;
        for &(a, _) in joins {
            if visited[a] {
                continue;
            }
            // a closed strand: alternate join / edge until back at a
            let mut x = a;
            loop {
                visited[x] = true;
                let y = join[x];
                visited[y] = true;
                x = self.pair[y];
                if x == a {
                    break;
                }
            }
            circles += 1;
        }
        Self::from_parts(cells, pair, circles)
    }

    /// Applies a permutation of dart labels (`perm[old] = new`) and of vertex order.
    pub fn relabel(&self, dart_perm: &[usize], vertex_perm: &[usize]) -> Self {
        let mut cells = vec![Vec::new(); self.cells.len()];
        for (v, cell) in self.cells.iter().enumerate() {
            cells[vertex_perm[v]] = cell.iter().map(|&d| dart_perm[d]).collect();
        }
        let mut pair = vec![0; self.pair.len()];
        for (d, &p) in self.pair.iter().enumerate() {
            pair[dart_perm[d]] = dart_perm[p];
        }
        Self::from_parts(cells, pair, self.circles)
    }

    /// Reverses the cyclic order at trivalent vertex `v`.
    pub fn flip_vertex(&self, v: usize) -> Self {
        let mut cells = self.cells.clone();
        assert_eq!(cells[v].len(), 3, "only trivalent vertices carry an orientation");
        cells[v].swap(1, 2);
        Self::from_parts(cells, self.pair.clone(), self.circles)
    }

    /// Subdivides the edge through dart `d` by a new trivalent vertex carrying a leg.
    pub fn attach_leg(&self, d: usize) -> Self {
        let n = self.pair.len();
        let (a, b, c, l) = (n, n + 1, n + 2, n + 3);
        let mut pair = self.pair.clone();
        let e = pair[d];
        pair.extend([d, e, l, c]);
        pair[d] = a;
        pair[e] = b;
        let mut cells = self.cells.clone();
        cells.push(vec![a, b, c]);
        cells.push(vec![l]);
        Self::from_parts(cells, pair, self.circles)
    }

    pub fn to_json(&self) -> Value {
        let mut edges = Vec::new();
        for (d, &p) in self.pair.iter().enumerate() {
            if d < p {
                edges.push(json!([d, p]));
            }
        }
        json!({ "circles": self.circles, "vertices": self.cells, "edges": edges })
    }

    /// Reads `{"circles": k, "vertices": [[..],..], "edges": [[a,b],..]}`.
    /// Dart labels may be any distinct non-negative integers.
    pub fn from_json(v: &Value) -> Result<Self> {
        let circles = match v.get("circles") {
            None => 0,
            Some(c) => c
                .as_u64()
                .ok_or_else(|| Error::Malformed("`circles` must be a non-negative integer".into()))?
                as usize,
        };
        let as_u64_list = |x: &Value, what: &str| -> Result<Vec<u64>> {
            x.as_array()
                .ok_or_else(|| Error::Malformed(format!("{what} must be an array")))?
                .iter()
                .map(|d| d.as_u64().ok_or_else(|| Error::Malformed(format!("{what} entries must be dart labels"))))
                .collect()
        };
        let raw_cells = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("diagram needs a `vertices` array".into()))?
            .iter()
            .map(|c| as_u64_list(c, "vertex"))
            .collect::<Result<Vec<_>>>()?;
        let raw_edges = match v.get("edges") {
            None => Vec::new(),
            Some(e) => e
                .as_array()
                .ok_or_else(|| Error::Malformed("`edges` must be an array".into()))?
                .iter()
                .map(|e| {
                    let l = as_u64_list(e, "edge")?;
                    if l.len() != 2 {
                        return Err(Error::Malformed("edges are pairs of darts".into()));
                    }
                    Ok((l[0], l[1]))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let mut index = BTreeMap::new();
        for &d in raw_cells.iter().flatten() {
            if index.insert(d, 0).is_some() {
                return Err(Error::Structure(format!("dart {d} lies in two vertices")));
            }
        }
        for (i, slot) in index.values_mut().enumerate() {
            *slot = i;
        }
        let lookup = |d: u64| {
            index.get(&d).copied().ok_or_else(|| Error::Structure(format!("edge names unknown dart {d}")))
        };
        let cells = raw_cells.iter().map(|c| c.iter().map(|d| index[d]).collect()).collect();
        let edges = raw_edges
            .iter()
            .map(|&(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(cells, &edges, circles)
    }
}

/// One connected component of a diagram, as reported by [`classify_components`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub legs: usize,
    pub trivalent: usize,
    pub is_interval: bool,
    /// `Some(n)` if the component is the wheel with `n` legs.
    pub wheel: Option<usize>,
    /// Trivalent vertices minus legs.
    pub trivalent_excess: i64,
}

impl ComponentReport {
    pub fn is_wheel(&self) -> bool {
        self.wheel.is_some()
    }
}

pub fn classify_components(d: &Diagram) -> Vec<ComponentReport> {
    d.components()
        .into_iter()
        .map(|verts| {
            let legs = verts.iter().filter(|&&v| d.is_leg(v)).count();
            let trivalent = verts.len() - legs;
            let is_interval = trivalent == 0;
            let wheel = (trivalent > 0 && legs == trivalent && is_wheel_component(d, &verts)).then_some(legs);
            ComponentReport {
                legs,
                trivalent,
                is_interval,
                wheel,
                trivalent_excess: trivalent as i64 - legs as i64,
            }
        })
        .collect()
}

/// Every trivalent vertex has exactly one leg and the trivalent vertices form
/// one cycle.
fn is_wheel_component(d: &Diagram, verts: &[usize]) -> bool {
    for &v in verts {
        if d.is_leg(v) {
            continue;
        }
        let legs_here = d.cell(v).iter().filter(|&&x| d.is_leg(d.owner(d.partner(x)))).count();
        if legs_here != 1 {
            return false;
        }
    }
    // with one leg each, the hub is 2-regular; connectedness of the component
    // makes it a single cycle
    true
}

/// Membership data for the subspaces of interval-free, trivalent-excess and
/// wheel diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub interval_free: bool,
    pub has_excess_component: bool,
    pub all_wheels: bool,
}

pub fn membership(d: &Diagram) -> Membership {
    let reports = classify_components(d);
    Membership {
        interval_free: reports.iter().all(|r| !r.is_interval),
        has_excess_component: reports.iter().any(|r| r.trivalent_excess > 0),
        all_wheels: d.circles() == 0 && reports.iter().all(ComponentReport::is_wheel),
    }
}
