//! The subinvariance vector `y_v = sum_{mu in Λv} x^{d(mu)}` and the matrix
//! `M = (1 - x1 A1)^{-1} (1 - x2 A2)^{-1}` whose column sums it is.

use super::{KmsError, KmsScalar, WeightPoint};
use crate::families;
use crate::field::{Field, Number, OrderedField};
use crate::graph::{Color, CountMatrix, TwoGraphSkeleton};
use crate::linalg::Matrix;

/// Total degree at which [`y_bruteforce`] truncates unless told otherwise.
pub const DEFAULT_SERIES_CAP: u32 = 60;

pub(crate) fn to_matrix<S: Field>(m: &CountMatrix) -> Matrix<S> {
    Matrix::from_fn(m.size(), m.size(), |i, j| S::from_i64(m.get(i, j)))
}

fn check_convergent<S: KmsScalar>(g: &TwoGraphSkeleton, x: &[S; 2]) -> Result<(), KmsError> {
    for color in Color::ALL {
        if S::radius_cmp(g.matrix(color), &x[color.index()]) != std::cmp::Ordering::Less {
            return Err(KmsError::Divergent(color));
        }
    }
    Ok(())
}

/// `M = prod_i (1 - x_i A_i)^{-1}`; requires `x_i rho(A_i) < 1` for both colours.
pub fn m_matrix<S: KmsScalar>(g: &TwoGraphSkeleton, x: &[S; 2]) -> Result<Matrix<S>, KmsError> {
    g.ensure_valid()?;
    check_convergent(g, x)?;
    let n = g.vertex_count();
    let mut product = Matrix::identity(n);
    for color in Color::ALL {
        let factor = Matrix::identity(n).sub(&to_matrix::<S>(g.matrix(color)).scale(&x[color.index()]));
        let inverse = factor
            .inverse()
            .ok_or(KmsError::Divergent(color))?;
        product = product.mul(&inverse);
    }
    Ok(product)
}

/// Closed form `y^T = 1^T M`.
pub fn y_closed<S: KmsScalar>(g: &TwoGraphSkeleton, x: &[S; 2]) -> Result<Vec<S>, KmsError> {
    Ok(m_matrix(g, x)?.column_sums())
}

/// Truncated series for `y` with an estimate of the neglected tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEstimate {
    pub y: Vec<f64>,
    /// Per-vertex bound on `|y_true - y|`: a geometric tail estimate plus an
    /// allowance for floating-point accumulation.
    pub tail_bound: Vec<f64>,
    pub cap: u32,
    /// `max_i x_i rho(A_i)`.
    pub ratio: f64,
}

/// Sums `x^n 1^T A1^{n1} A2^{n2}` over `n1 + n2 <= cap`.
///
/// The tail beyond the cap is estimated per vertex by continuing the last
/// shell geometrically, with ratio the larger of `max_i x_i rho(A_i)` and the
/// observed ratio of the last two shells.
pub fn y_bruteforce(
    g: &TwoGraphSkeleton,
    x: [f64; 2],
    cap: u32,
) -> Result<SeriesEstimate, KmsError> {
    g.ensure_valid()?;
    check_convergent(g, &x)?;
    let n = g.vertex_count();
    let a1: Vec<Vec<f64>> = g.matrix(Color::Blue).rows().iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let a2: Vec<Vec<f64>> = g.matrix(Color::Red).rows().iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let times = |row: &[f64], m: &[Vec<f64>], scale: f64| -> Vec<f64> {
        (0..n)
            .map(|j| scale * (0..n).map(|k| row[k] * m[k][j]).sum::<f64>())
            .collect()
    };

    let cap_usize = cap as usize;
    let mut shells = vec![vec![0.0f64; n]; cap_usize + 1];
    let mut blue_part = vec![1.0f64; n];
    for n1 in 0..=cap_usize {
        if n1 > 0 {
            blue_part = times(&blue_part, &a1, x[0]);
        }
        let mut row = blue_part.clone();
        for n2 in 0..=cap_usize - n1 {
            if n2 > 0 {
                row = times(&row, &a2, x[1]);
            }
            for v in 0..n {
                shells[n1 + n2][v] += row[v];
            }
        }
    }
    let y: Vec<f64> = (0..n).map(|v| shells.iter().map(|s| s[v]).sum()).collect();

    let ratio = Color::ALL
        .iter()
        .map(|&c| x[c.index()] * crate::graph::spectral::matrix_spectral_radius(g.matrix(c)))
        .fold(0.0, f64::max);
    let tail_bound = (0..n)
        .map(|v| {
            let last = shells[cap_usize][v];
            let rounding = 16.0 * (cap as f64 + 1.0) * f64::EPSILON * y[v];
            if last == 0.0 {
                return rounding;
            }
            let prev = if cap_usize > 0 { shells[cap_usize - 1][v] } else { 0.0 };
            let observed = if prev > 0.0 { last / prev } else { ratio };
            let r = ratio.max(observed);
            if r >= 1.0 {
                f64::INFINITY
            } else {
                last * r / (1.0 - r) + rounding
            }
        })
        .collect();
    Ok(SeriesEstimate {
        y,
        tail_bound,
        cap,
        ratio,
    })
}

/// A computed subinvariance vector, tagged with the method that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SubinvarianceVector {
    pub method: String,
    pub values: Vec<Number>,
    /// Per-vertex error bound for approximate methods.
    pub error_bound: Option<Vec<f64>>,
}

/// A way of computing `y`, selectable by name.
pub trait SubinvarianceMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn compute(
        &self,
        g: &TwoGraphSkeleton,
        x: &WeightPoint,
    ) -> Result<SubinvarianceVector, KmsError>;
}

/// Column sums of the product of inverses.
pub struct ClosedForm;

impl SubinvarianceMethod for ClosedForm {
    fn name(&self) -> &'static str {
        "closed"
    }
    fn summary(&self) -> &'static str {
        "column sums of (1 - x1 A1)^-1 (1 - x2 A2)^-1"
    }
    fn compute(&self, g: &TwoGraphSkeleton, x: &WeightPoint) -> Result<SubinvarianceVector, KmsError> {
        let values = match x {
            WeightPoint::Exact(x) => y_closed(g, x)?.iter().map(OrderedField::to_number).collect(),
            WeightPoint::Approx(x) => y_closed(g, x)?.iter().map(OrderedField::to_number).collect(),
        };
        Ok(SubinvarianceVector {
            method: self.name().to_string(),
            values,
            error_bound: None,
        })
    }
}

/// Truncated path sum.
pub struct SeriesSum {
    pub cap: u32,
}

impl SubinvarianceMethod for SeriesSum {
    fn name(&self) -> &'static str {
        "series"
    }
    fn summary(&self) -> &'static str {
        "truncated sum over paths of total degree at most the cap"
    }
    fn compute(&self, g: &TwoGraphSkeleton, x: &WeightPoint) -> Result<SubinvarianceVector, KmsError> {
        let est = y_bruteforce(g, x.to_f64(), self.cap)?;
        Ok(SubinvarianceVector {
            method: self.name().to_string(),
            values: est.y.into_iter().map(Number::Approx).collect(),
            error_bound: Some(est.tail_bound),
        })
    }
}

/// Hand-derived formulas for the recognised one-source families.
pub struct FamilyFormula;

impl SubinvarianceMethod for FamilyFormula {
    fn name(&self) -> &'static str {
        "family"
    }
    fn summary(&self) -> &'static str {
        "closed formulas for the two- and three-vertex families"
    }
    fn compute(&self, g: &TwoGraphSkeleton, x: &WeightPoint) -> Result<SubinvarianceVector, KmsError> {
        g.ensure_valid()?;
        let family = families::detect_family(g).ok_or_else(|| {
            KmsError::Unsupported("skeleton does not match a family with closed formulas".into())
        })?;
        let formulas = family.y_formulas().ok_or_else(|| {
            KmsError::Unsupported(format!("no closed formula for y on the {} family", family.kind))
        })?;
        if let WeightPoint::Exact(q) = x {
            check_convergent(g, q)?;
        } else {
            check_convergent(g, &x.to_f64())?;
        }
        let mut values = vec![Number::Approx(f64::NAN); g.vertex_count()];
        for (role, f) in formulas.iter().enumerate() {
            let v = family.order[role];
            values[v] = match x {
                WeightPoint::Exact(q) => Number::Exact(
                    f.eval(&q[0], &q[1])
                        .map_err(|e| KmsError::Inconsistent(e.to_string()))?,
                ),
                WeightPoint::Approx(p) => Number::Approx(f.eval_f64(p[0], p[1])),
            };
        }
        Ok(SubinvarianceVector {
            method: self.name().to_string(),
            values,
            error_bound: None,
        })
    }
}

/// Named strategies for computing `y`.
pub struct SubinvarianceRegistry {
    methods: Vec<Box<dyn SubinvarianceMethod>>,
}

impl SubinvarianceRegistry {
    pub fn empty() -> Self {
        Self {
            methods: Vec::new(),
        }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ClosedForm));
        r.register(Box::new(SeriesSum {
            cap: DEFAULT_SERIES_CAP,
        }));
        r.register(Box::new(FamilyFormula));
        r
    }

    /// Adds a method, replacing any existing one with the same name.
    pub fn register(&mut self, method: Box<dyn SubinvarianceMethod>) {
        self.methods.retain(|m| m.name() != method.name());
        self.methods.push(method);
    }

    pub fn get(&self, name: &str) -> Option<&dyn SubinvarianceMethod> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }
}

impl Default for SubinvarianceRegistry {
    fn default() -> Self {
        Self::standard()
    }
}
