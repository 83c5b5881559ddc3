//! Alexander and Conway polynomials of knots from Seifert matrices and from
//! planar diagram codes.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{int, nu_series, rational_to_json, sinh_half_series, Rational, SymmetricLaurent, TruncatedSeries};

/// Crossing bound for the skein recursion.
pub const MAX_CROSSINGS: usize = 12;

/// A polynomial in `z` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConwayPolynomial {
    coeffs: Vec<Rational>,
}

impl ConwayPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Only even powers of `z` and constant term 1.
    pub fn is_knot_like(&self) -> bool {
        self.coeff(0).is_one() && self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    fn add_scaled_shifted(&mut self, other: &Self, sign: i64) {
        // self += sign * z * other
        let n = self.coeffs.len().max(other.coeffs.len() + 1);
        self.coeffs.resize(n, Rational::zero());
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k + 1] += c * int(sign);
        }
        *self = Self::new(std::mem::take(&mut self.coeffs));
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(rational_to_json).collect())
    }
}

impl fmt::Display for ConwayPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match k {
                0 => mag.to_string(),
                _ => {
                    let var = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if mag.is_one() { var } else { format!("{mag}*{var}") }
                }
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Product of full coefficient vectors of Laurent polynomials.
fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Substitutes `z^2 = t - 2 + t^{-1}`.
pub fn conway_to_alexander(c: &ConwayPolynomial) -> Result<SymmetricLaurent> {
    if c.coeffs.iter().skip(1).step_by(2).any(|x| !x.is_zero()) {
        return Err(Error::Domain(format!("Conway polynomial {c} has odd powers of z")));
    }
    let d = c.coeffs.len().saturating_sub(1) / 2;
    let mut full = vec![Rational::zero(); 2 * d + 1];
    let z2 = [int(1), int(-2), int(1)];
    let mut power = vec![int(1)];
    for k in 0..=d {
        let coeff = c.coeff(2 * k);
        // power is (t - 2 + 1/t)^k, centred in `full`
        for (i, p) in power.iter().enumerate() {
            full[d - k + i] += &coeff * p;
        }
        power = poly_mul(&power, &z2);
    }
    SymmetricLaurent::from_full(&full)
}

/// Inverse of [`conway_to_alexander`] on symmetric Laurent polynomials.
pub fn alexander_to_conway(a: &SymmetricLaurent) -> ConwayPolynomial {
    let mut full = a.full_coeffs();
    let d = a.span();
    let mut out = vec![Rational::zero(); 2 * d + 1];
    for k in (0..=d).rev() {
        // coefficient of t^k after removing higher terms
        let coeff = full[d + k].clone();
        out[2 * k] = coeff.clone();
        let mut power = vec![int(1)];
        for _ in 0..k {
            power = poly_mul(&power, &[int(1), int(-2), int(1)]);
        }
        for (i, p) in power.iter().enumerate() {
            full[d - k + i] -= &coeff * p;
        }
    }
    ConwayPolynomial::new(out)
}

/// `nu(h) * C(e^{h/2} - e^{-h/2})` to the given order.
pub fn renormalized_conway(c: &ConwayPolynomial, order: usize) -> TruncatedSeries {
    &nu_series(order) * &sinh_half_series(order).compose_poly(&c.coeffs)
}

/// A square integer matrix of even size pairing `det(V - V^T) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertMatrix {
    rows: Vec<Vec<i64>>,
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

impl SeifertMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("Seifert matrix must be square".into()));
        }
        if n % 2 == 1 {
            return Err(Error::Domain("a knot Seifert matrix has even size".into()));
        }
        let v = Self { rows };
        let d = v.determinant_at(&int(1), &int(-1));
        if d != int(1) {
            return Err(Error::Domain(format!("det(V - V^T) = {d}, expected 1")));
        }
        Ok(v)
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `det(a V + b V^T)`.
    fn determinant_at(&self, a: &Rational, b: &Rational) -> Rational {
        let n = self.size();
        let m = (0..n)
            .map(|i| (0..n).map(|j| a * int(self.rows[i][j]) + b * int(self.rows[j][i])).collect())
            .collect();
        determinant(m)
    }

    /// Reads `{"matrix": [[..], ..]}` or a bare list of rows.
    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.get("matrix").unwrap_or(v);
        let rows = rows.as_array().ok_or_else(|| Error::Malformed("Seifert matrix must be a list of rows".into()))?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Malformed("Seifert matrix row must be a list".into()))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| Error::Malformed(format!("non-integer entry {x}"))))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    pub fn to_json(&self) -> Value {
        json!({ "matrix": self.rows })
    }
}

/// `det(t^{1/2} V - t^{-1/2} V^T)`, found by interpolating
/// `t^{-g} det(t V - V^T)` through `2g + 1` points.
pub fn alexander_from_seifert(v: &SeifertMatrix) -> Result<SymmetricLaurent> {
    let n = v.size();
    let points: Vec<Rational> = (1..=n as i64 + 1).map(int).collect();
    let values: Vec<Rational> = points.iter().map(|t| v.determinant_at(t, &int(-1))).collect();
    // Lagrange interpolation to coefficients of t^0..t^n
    let mut coeffs = vec![Rational::zero(); n + 1];
    for (i, (xi, yi)) in points.iter().zip(&values).enumerate() {
        let mut basis = vec![int(1)];
        let mut denom = int(1);
        for (j, xj) in points.iter().enumerate() {
            if j != i {
                basis = poly_mul(&basis, &[-xj.clone(), int(1)]);
                denom *= xi - xj;
            }
        }
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += yi * b / &denom;
        }
    }
    let a = SymmetricLaurent::from_full(&coeffs)?;
    a.ensure_normalized()?;
    Ok(a)
}

/// A knot diagram given by its planar diagram code.
///
/// Each crossing lists four arc labels counterclockwise starting from the
/// incoming under-arc. Orientation of the over-arcs is inferred by walking
/// the knot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdCode {
    crossings: Vec<[i64; 4]>,
}

/// An oriented crossing on numbered arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Crossing {
    under_in: usize,
    under_out: usize,
    over_in: usize,
    over_out: usize,
    sign: i8,
}

impl PdCode {
    pub fn new(crossings: Vec<[i64; 4]>) -> Result<Self> {
        let pd = Self { crossings };
        pd.oriented()?;
        Ok(pd)
    }

    pub fn crossings(&self) -> &[[i64; 4]] {
        &self.crossings
    }

    /// Reads `{"crossings": [[a, b, c, d], ..], "signs": "auto"}`. An explicit
    /// `signs` list must agree with the inferred orientation.
    pub fn from_json(v: &Value) -> Result<Self> {
        let list = v
            .get("crossings")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("PD code needs a `crossings` list".into()))?;
        let mut crossings = Vec::with_capacity(list.len());
        for c in list {
            let labels = c.as_array().ok_or_else(|| Error::Malformed("crossing must be a list".into()))?;
            if labels.len() != 4 {
                return Err(Error::Malformed(format!("crossing {c} does not have four arcs")));
            }
            let mut x = [0i64; 4];
            for (slot, l) in x.iter_mut().zip(labels) {
                *slot = l.as_i64().ok_or_else(|| Error::Malformed(format!("arc label {l} is not an integer")))?;
            }
            crossings.push(x);
        }
        let pd = Self::new(crossings)?;
        match v.get("signs") {
            None => {}
            Some(Value::String(s)) if s == "auto" => {}
            Some(Value::Array(signs)) => {
                let given: Vec<i64> = signs
                    .iter()
                    .map(|s| s.as_i64().filter(|x| x.abs() == 1).ok_or_else(|| Error::Malformed(format!("bad sign {s}"))))
                    .collect::<Result<_>>()?;
                if given != pd.signs()? {
                    return Err(Error::Malformed("given crossing signs disagree with the orientation".into()));
                }
            }
            Some(other) => return Err(Error::Malformed(format!("`signs` must be \"auto\" or a list, got {other}"))),
        }
        Ok(pd)
    }

    pub fn to_json(&self) -> Value {
        json!({ "crossings": self.crossings, "signs": "auto" })
    }

    /// Crossing signs in input order.
    pub fn signs(&self) -> Result<Vec<i64>> {
        Ok(self.oriented()?.1.iter().map(|c| c.sign as i64).collect())
    }

    pub fn writhe(&self) -> Result<i64> {
        Ok(self.signs()?.iter().sum())
    }

    /// Numbers the arcs and orients every crossing; returns the arc count too.
    fn oriented(&self) -> Result<(usize, Vec<Crossing>)> {
        let n = self.crossings.len();
        if n > MAX_CROSSINGS {
            return Err(Error::OutOfRange(format!("{n} crossings exceed the bound of {MAX_CROSSINGS}")));
        }
        let mut places: HashMap<i64, Vec<(usize, usize)>> = HashMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            for (p, &l) in c.iter().enumerate() {
                places.entry(l).or_default().push((i, p));
            }
        }
        if let Some((l, _)) = places.iter().find(|(_, v)| v.len() != 2) {
            return Err(Error::Malformed(format!("arc {l} must appear exactly twice")));
        }
        if n == 0 {
            return Ok((0, Vec::new()));
        }
        let mut labels: Vec<i64> = places.keys().copied().collect();
        labels.sort_unstable();
        let arc: HashMap<i64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        // walk the knot entering crossing 0 along its under-arc
        let mut over_entry: Vec<Option<usize>> = vec![None; n];
        let mut under_seen = vec![false; n];
        let (mut ci, mut pos) = (0usize, 0usize);
        let mut steps = 0;
        loop {
            match pos {
                0 => {
                    if under_seen[ci] {
                        return Err(Error::Malformed("under-arc traversed twice".into()));
                    }
                    under_seen[ci] = true;
                }
                1 | 3 => {
                    if over_entry[ci].is_some() {
                        return Err(Error::Malformed("over-arc traversed twice".into()));
                    }
                    over_entry[ci] = Some(pos);
                }
                _ => {
                    return Err(Error::Malformed(format!(
                        "crossing {ci} is entered against its under-arc; the first label must be the incoming under-arc"
                    )))
                }
            }
            steps += 1;
            let out_label = self.crossings[ci][(pos + 2) % 4];
            let next = places[&out_label].iter().copied().find(|&(cj, pj)| (cj, pj) != (ci, (pos + 2) % 4));
            let (cj, pj) = next.expect("label occurs twice");
            (ci, pos) = (cj, pj);
            if (ci, pos) == (0, 0) {
                break;
            }
            if steps > 2 * n {
                return Err(Error::Malformed("walk does not close up".into()));
            }
        }
        if steps != 2 * n {
            return Err(Error::Domain("PD code describes a link; only knots are supported".into()));
        }
        let crossings = self
            .crossings
            .iter()
            .zip(&over_entry)
            .map(|(c, entry)| {
                let entry = entry.expect("every over-arc is visited");
                Crossing {
                    under_in: arc[&c[0]],
                    under_out: arc[&c[2]],
                    over_in: arc[&c[entry]],
                    over_out: arc[&c[(entry + 2) % 4]],
                    // over-arc from position 3 to 1 is a positive crossing
                    sign: if entry == 3 { 1 } else { -1 },
                }
            })
            .collect();
        Ok((labels.len(), crossings))
    }
}

/// An oriented diagram reduced to combinatorics: crossings on numbered arcs
/// plus a count of crossing-free circles.
#[derive(Debug, Clone)]
struct SkeinDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
}

impl SkeinDiagram {
    /// A knot diagram; without crossings it is a single circle.
    fn knot(crossings: Vec<Crossing>) -> Self {
        let free_loops = usize::from(crossings.is_empty());
        Self { crossings, free_loops }
    }

    /// The crossing met along an arc, and whether it is met on the under-arc.
    fn head(&self, arc: usize) -> (usize, bool) {
        for (i, c) in self.crossings.iter().enumerate() {
            if c.under_in == arc {
                return (i, true);
            }
            if c.over_in == arc {
                return (i, false);
            }
        }
        unreachable!("every arc ends at a crossing")
    }

    /// Components as arc cycles, ordered by smallest arc, each starting there.
    fn components(&self) -> Vec<Vec<usize>> {
        let mut arcs: Vec<usize> = self.crossings.iter().flat_map(|c| [c.under_in, c.over_in]).collect();
        arcs.sort_unstable();
        let mut done = vec![false; arcs.last().map_or(0, |&a| a + 1)];
        let mut out = Vec::new();
        for &start in &arcs {
            if done[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut a = start;
            loop {
                done[a] = true;
                cycle.push(a);
                let (ci, under) = self.head(a);
                let c = self.crossings[ci];
                a = if under { c.under_out } else { c.over_out };
                if a == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    /// First crossing met on its under-arc before its over-arc when walking
    /// the components in order from their basepoints.
    fn first_ascending(&self) -> Option<usize> {
        let mut met = vec![false; self.crossings.len()];
        for cycle in self.components() {
            for &a in &cycle {
                let (ci, under) = self.head(a);
                if !met[ci] {
                    if under {
                        return Some(ci);
                    }
                    met[ci] = true;
                }
            }
        }
        None
    }

    fn switched(&self, i: usize) -> Self {
        let mut d = self.clone();
        let c = d.crossings[i];
        d.crossings[i] = Crossing {
            under_in: c.over_in,
            under_out: c.over_out,
            over_in: c.under_in,
            over_out: c.under_out,
            sign: -c.sign,
        };
        d
    }

    /// The oriented smoothing: each incoming arc continues on the other
    /// strand's outgoing arc.
    fn smoothed(&self, i: usize) -> Self {
        let c = self.crossings[i];
        let mut crossings = self.crossings.clone();
        crossings.remove(i);
        let mut free_loops = self.free_loops;
        let mut rename = |from: usize, to: usize, crossings: &mut Vec<Crossing>| {
            if from == to {
                free_loops += 1;
                return;
            }
            for x in crossings.iter_mut() {
                for a in [&mut x.under_in, &mut x.under_out, &mut x.over_in, &mut x.over_out] {
                    if *a == from {
                        *a = to;
                    }
                }
            }
        };
        // arc under_in now continues as over_out; keep the smaller label
        let (a, b) = (c.under_in.min(c.over_out), c.under_in.max(c.over_out));
        rename(b, a, &mut crossings);
        let (mut x, mut y) = (c.over_in, c.under_out);
        // the first rename may have touched the second pair
        for v in [&mut x, &mut y] {
            if *v == b {
                *v = a;
            }
        }
        let (a2, b2) = (x.min(y), x.max(y));
        rename(b2, a2, &mut crossings);
        Self { crossings, free_loops }
    }

    fn conway(&self) -> ConwayPolynomial {
        let Some(i) = self.first_ascending() else {
            // descending: an unlink with this many components
            let comps = self.components().len() + self.free_loops;
            return if comps == 1 { ConwayPolynomial::one() } else { ConwayPolynomial::zero() };
        };
        let sign = self.crossings[i].sign as i64;
        // C(L+) - C(L-) = z C(L0)
        let mut value = self.switched(i).conway();
        let smooth = self.smoothed(i).conway();
        value.add_scaled_shifted(&smooth, sign);
        value
    }
}

/// Conway polynomial by the skein recursion toward a descending diagram.
pub fn conway_from_pd(pd: &PdCode) -> Result<ConwayPolynomial> {
    let (_, crossings) = pd.oriented()?;
    Ok(SkeinDiagram::knot(crossings).conway())
}

/// [`conway_from_pd`] after renumbering the arcs by `perm`, which moves the
/// basepoint and the order in which crossings are resolved.
pub fn conway_from_pd_relabeled(pd: &PdCode, perm: &[usize]) -> Result<ConwayPolynomial> {
    let (arcs, crossings) = pd.oriented()?;
    if perm.len() != arcs {
        return Err(Error::Domain(format!("relabeling has {} entries for {arcs} arcs", perm.len())));
    }
    let crossings = crossings
        .into_iter()
        .map(|c| Crossing {
            under_in: perm[c.under_in],
            under_out: perm[c.under_out],
            over_in: perm[c.over_in],
            over_out: perm[c.over_out],
            sign: c.sign,
        })
        .collect();
    Ok(SkeinDiagram::knot(crossings).conway())
}

/// A bundled knot with both input forms and its expected Conway polynomial.
#[derive(Debug, Clone)]
pub struct KnotEntry {
    pub name: &'static str,
    pub pd: &'static [[i64; 4]],
    pub seifert: &'static [&'static [i64]],
    pub conway: &'static [i64],
}

impl KnotEntry {
    pub fn pd_code(&self) -> PdCode {
        PdCode::new(self.pd.to_vec()).expect("bundled PD codes are valid")
    }

    pub fn seifert_matrix(&self) -> SeifertMatrix {
        SeifertMatrix::new(self.seifert.iter().map(|r| r.to_vec()).collect()).expect("bundled Seifert matrices are valid")
    }

    pub fn expected_conway(&self) -> ConwayPolynomial {
        ConwayPolynomial::from_ints(self.conway)
    }
}

pub const KNOT_TABLE: &[KnotEntry] = &[
    KnotEntry { name: "0_1", pd: &[], seifert: &[], conway: &[1] },
    KnotEntry {
        name: "3_1",
        pd: &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]],
        seifert: &[&[-1, 1], &[0, -1]],
        conway: &[1, 0, 1],
    },
    KnotEntry {
        name: "4_1",
        pd: &[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]],
        seifert: &[&[1, 1], &[0, -1]],
        conway: &[1, 0, -1],
    },
    KnotEntry {
        name: "5_1",
        pd: &[[1, 6, 2, 7], [3, 8, 4, 9], [5, 10, 6, 1], [7, 2, 8, 3], [9, 4, 10, 5]],
        seifert: &[&[-1, 1, 0, 0], &[0, -1, 1, 0], &[0, 0, -1, 1], &[0, 0, 0, -1]],
        conway: &[1, 0, 3, 0, 1],
    },
    KnotEntry {
        name: "5_2",
        pd: &[[1, 4, 2, 5], [3, 8, 4, 9], [5, 10, 6, 1], [9, 6, 10, 7], [7, 2, 8, 3]],
        seifert: &[&[-1, 1], &[0, -2]],
        conway: &[1, 0, 2],
    },
    KnotEntry {
        name: "6_1",
        pd: &[[1, 4, 2, 5], [7, 10, 8, 11], [3, 9, 4, 8], [9, 3, 10, 2], [5, 12, 6, 1], [11, 6, 12, 7]],
        seifert: &[&[-1, 1], &[0, 2]],
        conway: &[1, 0, -2],
    },
];

/// Looks up a bundled knot by table name or by one of the aliases `unknot`,
/// `trefoil` and `figure8`.
pub fn knot_by_name(name: &str) -> Result<&'static KnotEntry> {
    let name = match name {
        "unknot" => "0_1",
        "trefoil" => "3_1",
        "figure8" | "figure-eight" => "4_1",
        other => other,
    };
    KNOT_TABLE
        .iter()
        .find(|k| k.name == name)
        .ok_or_else(|| Error::Domain(format!("unknown knot `{name}`; known: {}", knot_names().join(", "))))
}

pub fn knot_names() -> Vec<&'static str> {
    KNOT_TABLE.iter().map(|k| k.name).collect()
}
