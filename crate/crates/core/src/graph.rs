//! Resolution graphs: decorated trees of rational curves.
//!
//! A graph is read from a JSON document of the form
//!
//! ```json
//! { "vertices": [ { "id": "v1", "euler": -2 }, { "id": "v2", "euler": -2 } ],
//!   "edges": [ ["v1", "v2"] ] }
//! ```
//!
//! Parsing only checks syntax and id consistency. [`validate`] decides the
//! tree condition and negative definiteness of the intersection form, the
//! latter exactly through the signs of the leading principal minors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolutionGraph {
    ids: Vec<String>,
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidationFailure {
    NotTree,
    NotNegativeDefinite,
    DuplicateEdge,
    UnknownVertex,
}

impl ValidationFailure {
    pub fn code(self) -> &'static str {
        match self {
            ValidationFailure::NotTree => "NOT_TREE",
            ValidationFailure::NotNegativeDefinite => "NOT_NEGATIVE_DEFINITE",
            ValidationFailure::DuplicateEdge => "DUPLICATE_EDGE",
            ValidationFailure::UnknownVertex => "UNKNOWN_VERTEX",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    fn from_failures(mut failures: Vec<ValidationFailure>) -> Self {
        failures.sort();
        failures.dedup();
        ValidationReport {
            ok: failures.is_empty(),
            failures,
        }
    }

    pub fn failure_codes(&self) -> Vec<&'static str> {
        self.failures.iter().map(|f| f.code()).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    euler: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<(String, String)>,
}

impl ResolutionGraph {
    /// Builds a graph from named vertices and named edges, in the given order.
    pub fn from_named<S: AsRef<str>>(vertices: &[(S, i64)], edges: &[(S, S)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        let mut ids = Vec::with_capacity(vertices.len());
        let mut euler = Vec::with_capacity(vertices.len());
        for (id, e) in vertices {
            let id = id.as_ref();
            if index.insert(id.to_string(), ids.len()).is_some() {
                return Err(Error::DuplicateVertex(id.to_string()));
            }
            ids.push(id.to_string());
            euler.push(*e);
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ResolutionGraph { ids, euler, edges })
    }

    /// Builds a graph with ids `v0, v1, ...` from Euler numbers and index edges.
    pub fn from_indexed(euler: &[i64], edges: &[(usize, usize)]) -> Result<Self> {
        let ids: Vec<String> = (0..euler.len()).map(|i| format!("v{i}")).collect();
        for &(a, b) in edges {
            for x in [a, b] {
                if x >= euler.len() {
                    return Err(Error::UnknownVertex(format!("v{x}")));
                }
            }
        }
        Ok(ResolutionGraph {
            ids,
            euler: euler.to_vec(),
            edges: edges.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn euler(&self) -> &[i64] {
        &self.euler
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Intersection matrix: Euler numbers on the diagonal, 1 per edge.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, &e) in self.euler.iter().enumerate() {
            m[i][i] = e;
        }
        for &(a, b) in &self.edges {
            if a != b {
                m[a][b] = 1;
                m[b][a] = 1;
            }
        }
        m
    }

    /// Returns a copy with the edge at position `k` removed.
    pub fn without_edge(&self, k: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(k);
        g
    }

    // -- named graphs ---------------------------------------------------

    /// Chain of `n` vertices with Euler number −2.
    pub fn a_n(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_indexed(&vec![-2; n], &edges).expect("indices in range")
    }

    /// D_n: a chain v0..v(n-2) with an extra leaf attached to v(n-3).
    pub fn d_n(n: usize) -> Self {
        assert!(n >= 4);
        let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((n - 3, n - 1));
        Self::from_indexed(&vec![-2; n], &edges).expect("indices in range")
    }

    /// E_n (n = 6, 7, 8): a chain of length n−1 with a leaf on the third vertex.
    pub fn e_n(n: usize) -> Self {
        assert!((6..=8).contains(&n));
        let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((2, n - 1));
        Self::from_indexed(&vec![-2; n], &edges).expect("indices in range")
    }

    /// Star-shaped graph: vertex 0 is the center, each leg is a chain.
    pub fn star(center: i64, legs: &[&[i64]]) -> Self {
        let mut euler = vec![center];
        let mut edges = Vec::new();
        for leg in legs {
            let mut prev = 0;
            for &e in leg.iter() {
                euler.push(e);
                let cur = euler.len() - 1;
                edges.push((prev, cur));
                prev = cur;
            }
        }
        Self::from_indexed(&euler, &edges).expect("indices in range")
    }
}

/// Parses the JSON graph document. No mathematical validation happens here.
pub fn parse_graph(text: &str) -> Result<ResolutionGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let vertices: Vec<(&str, i64)> = doc.vertices.iter().map(|v| (v.id.as_str(), v.euler)).collect();
    let edges: Vec<(&str, &str)> = doc.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    ResolutionGraph::from_named(&vertices, &edges)
}

/// Canonical compact JSON serialization; `parse_graph` inverts it exactly.
pub fn serialize_graph(g: &ResolutionGraph) -> String {
    let doc = GraphDoc {
        vertices: g
            .ids
            .iter()
            .zip(&g.euler)
            .map(|(id, &euler)| VertexDoc { id: id.clone(), euler })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|&(a, b)| (g.ids[a].clone(), g.ids[b].clone()))
            .collect(),
    };
    serde_json::to_string(&doc).expect("graph documents always serialize")
}

pub fn validate(g: &ResolutionGraph) -> ValidationReport {
    let mut failures = Vec::new();
    let n = g.len();

    let mut seen = std::collections::HashSet::new();
    for &(a, b) in &g.edges {
        if !seen.insert((a.min(b), a.max(b))) {
            failures.push(ValidationFailure::DuplicateEdge);
        }
    }
    if !is_tree(n, &g.edges) {
        failures.push(ValidationFailure::NotTree);
    }
    if n == 0 || !is_negative_definite(&g.intersection_matrix()) {
        failures.push(ValidationFailure::NotNegativeDefinite);
    }
    ValidationReport::from_failures(failures)
}

fn is_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 || edges.len() != n - 1 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Leading principal minors of an integer matrix, computed exactly by
/// fraction-free (Bareiss) elimination without pivoting. Stops at the first
/// vanishing minor, since later minors are then not produced by this scheme.
pub fn leading_principal_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Negative definite iff the k-th leading principal minor has sign (−1)^k.
pub fn is_negative_definite(m: &[Vec<i64>]) -> bool {
    let minors = leading_principal_minors(m);
    minors.len() == m.len()
        && minors.iter().enumerate().all(|(k, d)| {
            if k % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
}

/// Exact determinant of an integer matrix (Bareiss with row pivoting).
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    prev * sign
}
