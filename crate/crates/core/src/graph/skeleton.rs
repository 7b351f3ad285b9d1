use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::GraphError;

/// Total degree allowed in [`TwoGraphSkeleton::path_count`] unless overridden.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Edge colour. Blue edges have degree `e1`, red edges degree `e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::Blue, Color::Red];

    /// Zero-based coordinate in `N^2`.
    pub fn index(self) -> usize {
        match self {
            Color::Blue => 0,
            Color::Red => 1,
        }
    }

    /// One-based label used in reports (`1` for blue, `2` for red).
    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn other(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }

    pub fn from_number(n: u8) -> Option<Color> {
        match n {
            1 => Some(Color::Blue),
            2 => Some(Color::Red),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Blue => f.write_str("blue"),
            Color::Red => f.write_str("red"),
        }
    }
}

/// Element of `N^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree {
    pub n1: u32,
    pub n2: u32,
}

impl Degree {
    pub const ZERO: Degree = Degree { n1: 0, n2: 0 };
    pub const E1: Degree = Degree { n1: 1, n2: 0 };
    pub const E2: Degree = Degree { n1: 0, n2: 1 };
    pub const E12: Degree = Degree { n1: 1, n2: 1 };

    pub const fn new(n1: u32, n2: u32) -> Self {
        Self { n1, n2 }
    }

    pub fn unit(color: Color) -> Self {
        match color {
            Color::Blue => Self::E1,
            Color::Red => Self::E2,
        }
    }

    pub fn get(&self, color: Color) -> u32 {
        match color {
            Color::Blue => self.n1,
            Color::Red => self.n2,
        }
    }

    pub fn total(&self) -> u32 {
        self.n1 + self.n2
    }

    /// Componentwise order.
    pub fn le(&self, other: &Degree) -> bool {
        self.n1 <= other.n1 && self.n2 <= other.n2
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree::new(self.n1.max(other.n1), self.n2.max(other.n2))
    }

    pub fn dot(&self, r: [f64; 2]) -> f64 {
        self.n1 as f64 * r[0] + self.n2 as f64 * r[1]
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree::new(self.n1 + rhs.n1, self.n2 + rhs.n2)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

/// Set of vertex indices of one skeleton.
pub type VertexSubset = BTreeSet<usize>;

/// Square matrix of edge counts; entry `(v, w)` counts edges with range `v` and source `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    n: usize,
    data: Vec<i64>,
}

impl CountMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, range: usize, source: usize) -> i64 {
        self.data[range * self.n + source]
    }

    pub fn set(&mut self, range: usize, source: usize, value: i64) {
        self.data[range * self.n + source] = value;
    }

    /// Entry as an unsigned count; negative entries are clamped to zero
    /// (only valid skeletons reach the counting code).
    pub fn count(&self, range: usize, source: usize) -> u64 {
        self.get(range, source).max(0) as u64
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    /// Principal submatrix on `keep` (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> CountMatrix {
        let mut out = CountMatrix::zeros(keep.len());
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                out.set(i, j, self.get(a, b));
            }
        }
        out
    }

    pub fn mul_i128(&self, other: &CountMatrix) -> Vec<i128> {
        let n = self.n;
        let mut out = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k) as i128;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j) as i128;
                }
            }
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == 0))
    }
}

/// One failed check from [`TwoGraphSkeleton::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NegativeEntry {
        color: Color,
        range: String,
        source: String,
        value: i64,
    },
    NonCommuting {
        range: String,
        source: String,
        blue_red: String,
        red_blue: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeEntry {
                color,
                range,
                source,
                value,
            } => write!(f, "negative {color} entry ({range},{source}) = {value}"),
            Violation::NonCommuting {
                range,
                source,
                blue_red,
                red_blue,
            } => write!(
                f,
                "(A1*A2)({range},{source}) = {blue_red} but (A2*A1)({range},{source}) = {red_blue}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// JSON input document for a skeleton; rows are listed in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDocument {
    pub vertices: Vec<String>,
    pub blue: Vec<Vec<i64>>,
    pub red: Vec<Vec<i64>>,
}

/// The coloured multigraph of a finite 2-graph, stored as its two vertex matrices.
///
/// Construction checks only structure (square matrices of the right size,
/// unique names). The 2-graph conditions are checked once and cached; the
/// counting and spectral operations refuse skeletons that fail them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGraphSkeleton {
    vertices: Vec<String>,
    blue: CountMatrix,
    red: CountMatrix,
    report: ValidationReport,
}

impl TwoGraphSkeleton {
    pub fn new(
        vertices: Vec<String>,
        blue: Vec<Vec<i64>>,
        red: Vec<Vec<i64>>,
    ) -> Result<Self, GraphError> {
        let n = vertices.len();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let check = |name: &'static str, rows: &Vec<Vec<i64>>| {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                Err(GraphError::DimensionMismatch {
                    matrix: name,
                    vertices: n,
                })
            } else {
                Ok(())
            }
        };
        check("blue", &blue)?;
        check("red", &red)?;
        let blue = CountMatrix::from_rows(&blue).expect("checked square");
        let red = CountMatrix::from_rows(&red).expect("checked square");
        Ok(Self::from_matrices(vertices, blue, red))
    }

    pub(crate) fn from_matrices(vertices: Vec<String>, blue: CountMatrix, red: CountMatrix) -> Self {
        let mut skeleton = Self {
            vertices,
            blue,
            red,
            report: ValidationReport::default(),
        };
        skeleton.report = skeleton.compute_report();
        skeleton
    }

    pub fn from_document(doc: SkeletonDocument) -> Result<Self, GraphError> {
        Self::new(doc.vertices, doc.blue, doc.red)
    }

    pub fn to_document(&self) -> SkeletonDocument {
        SkeletonDocument {
            vertices: self.vertices.clone(),
            blue: self.blue.rows(),
            red: self.red.rows(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GraphError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn subset(&self, names: &[&str]) -> Result<VertexSubset, GraphError> {
        names.iter().map(|n| self.index_of(n)).collect()
    }

    pub fn names_of(&self, set: &VertexSubset) -> Vec<String> {
        set.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    pub fn matrix(&self, color: Color) -> &CountMatrix {
        match color {
            Color::Blue => &self.blue,
            Color::Red => &self.red,
        }
    }

    /// Number of `color` edges with range `range` and source `source`.
    pub fn edges(&self, color: Color, range: usize, source: usize) -> u64 {
        self.matrix(color).count(range, source)
    }

    pub fn validate(&self) -> ValidationReport {
        self.report.clone()
    }

    pub fn is_valid(&self) -> bool {
        self.report.is_valid()
    }

    pub fn ensure_valid(&self) -> Result<(), GraphError> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(GraphError::InvalidSkeleton(self.report.clone()))
        }
    }

    fn compute_report(&self) -> ValidationReport {
        let n = self.vertex_count();
        let mut violations = Vec::new();
        for color in Color::ALL {
            let m = self.matrix(color);
            for v in 0..n {
                for w in 0..n {
                    if m.get(v, w) < 0 {
                        violations.push(Violation::NegativeEntry {
                            color,
                            range: self.vertices[v].clone(),
                            source: self.vertices[w].clone(),
                            value: m.get(v, w),
                        });
                    }
                }
            }
        }
        let br = self.blue.mul_i128(&self.red);
        let rb = self.red.mul_i128(&self.blue);
        for v in 0..n {
            for w in 0..n {
                if br[v * n + w] != rb[v * n + w] {
                    violations.push(Violation::NonCommuting {
                        range: self.vertices[v].clone(),
                        source: self.vertices[w].clone(),
                        blue_red: br[v * n + w].to_string(),
                        red_blue: rb[v * n + w].to_string(),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// `|v Λ^n w|`, the number of paths of degree `n` with range `v` and source `w`.
    pub fn path_count(&self, n: Degree, v: usize, w: usize) -> Result<BigUint, GraphError> {
        self.path_count_capped(n, v, w, DEFAULT_DEGREE_CAP)
    }

    pub fn path_count_capped(
        &self,
        n: Degree,
        v: usize,
        w: usize,
        cap: u32,
    ) -> Result<BigUint, GraphError> {
        self.ensure_valid()?;
        let size = self.vertex_count();
        if v >= size || w >= size {
            return Err(GraphError::UnknownVertex(format!("#{}", v.max(w))));
        }
        if n.total() > cap {
            return Err(GraphError::DegreeCapExceeded {
                total: n.total(),
                cap,
            });
        }
        // Row v of A1^{n1} A2^{n2}.
        let mut row: Vec<BigUint> = (0..size)
            .map(|j| if j == v { BigUint::one() } else { BigUint::zero() })
            .collect();
        for (color, times) in [(Color::Blue, n.n1), (Color::Red, n.n2)] {
            for _ in 0..times {
                row = self.row_times(&row, color);
            }
        }
        Ok(row.swap_remove(w))
    }

    /// The full matrix `A1^{n1} A2^{n2}` of path counts, indexed `[range][source]`.
    pub fn path_count_matrix(&self, n: Degree) -> Result<Vec<Vec<BigUint>>, GraphError> {
        self.ensure_valid()?;
        if n.total() > DEFAULT_DEGREE_CAP {
            return Err(GraphError::DegreeCapExceeded {
                total: n.total(),
                cap: DEFAULT_DEGREE_CAP,
            });
        }
        let size = self.vertex_count();
        let mut rows = Vec::with_capacity(size);
        for v in 0..size {
            let mut row: Vec<BigUint> = (0..size)
                .map(|j| if j == v { BigUint::one() } else { BigUint::zero() })
                .collect();
            for (color, times) in [(Color::Blue, n.n1), (Color::Red, n.n2)] {
                for _ in 0..times {
                    row = self.row_times(&row, color);
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }

    pub(crate) fn row_times(&self, row: &[BigUint], color: Color) -> Vec<BigUint> {
        let m = self.matrix(color);
        let size = self.vertex_count();
        (0..size)
            .map(|j| {
                row.iter()
                    .enumerate()
                    .filter(|(k, c)| !c.is_zero() && m.get(*k, j) != 0)
                    .fold(BigUint::zero(), |acc, (k, c)| acc + c * m.count(k, j))
            })
            .collect()
    }

    /// Number of `color` edges with range `v`, over all sources.
    pub fn in_degree(&self, color: Color, v: usize) -> u64 {
        (0..self.vertex_count()).map(|w| self.edges(color, v, w)).sum()
    }
}
