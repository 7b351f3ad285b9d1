//! Exact identity checks for the recognised families, as a registry of named checks.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exhaustive::{ck_evaluate, ck_expand, minimal_exhaustive_set};
use crate::families::{detect_family, FamilyKind, FamilyMatch};
use crate::field::{format_rational, Field};
use crate::graph::{Color, TwoGraphSkeleton};
use crate::kms::{kms_simplex, sink_state};
use crate::linalg::Matrix;
use crate::symbolic::RationalFunction2 as Rf;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentityError {
    #[error("skeleton does not match the two-, three- or four-vertex family")]
    NotAFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "detail")]
pub enum IdentityOutcome {
    Pass,
    Fail(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub description: String,
    pub outcome: IdentityOutcome,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.outcome == IdentityOutcome::Pass
    }
}

/// One named identity, checked exactly on a recognised family member.
pub trait IdentityCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn applies_to(&self, kind: FamilyKind) -> bool;
    /// `Err` carries a human-readable account of the disagreement.
    fn check(&self, family: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String>;
}

/// The standard point used for numeric spot checks.
fn standard_point() -> [BigRational; 2] {
    [
        BigRational::new(1.into(), 8.into()),
        BigRational::new(1.into(), 12.into()),
    ]
}

fn rf_point() -> [Rf; 2] {
    [Rf::x1(), Rf::x2()]
}

fn same(label: &str, lhs: &Rf, rhs: &Rf) -> Result<(), String> {
    if lhs.equals(rhs) {
        return Ok(());
    }
    let [x1, x2] = standard_point();
    let at = |f: &Rf| {
        f.eval(&x1, &x2)
            .map(|v| format_rational(&v))
            .unwrap_or_else(|_| "pole".into())
    };
    Err(format!(
        "{label}: sides differ (at x = (1/8, 1/12): {} vs {})",
        at(lhs),
        at(rhs)
    ))
}

fn same_vec(label: &str, lhs: &[Rf], rhs: &[Rf]) -> Result<(), String> {
    lhs.iter()
        .zip(rhs)
        .enumerate()
        .try_for_each(|(i, (a, b))| same(&format!("{label}[{i}]"), a, b))
}

/// Vertex matrices of `g` in role order, as symbolic matrices.
fn role_matrix(family: &FamilyMatch, g: &TwoGraphSkeleton, color: Color) -> Matrix<Rf> {
    let n = family.order.len();
    Matrix::from_fn(n, n, |i, j| {
        Rf::from_i64(g.matrix(color).get(family.order[i], family.order[j]))
    })
}

/// `1 - x_i A_i` in role order.
fn one_minus_matrix(family: &FamilyMatch, g: &TwoGraphSkeleton, color: Color) -> Matrix<Rf> {
    let n = family.order.len();
    let x = &rf_point()[color.index()];
    Matrix::identity(n).sub(&role_matrix(family, g, color).scale(x))
}

/// `M = (1 - x1 A1)^{-1} (1 - x2 A2)^{-1}` computed symbolically in role order.
fn symbolic_m(family: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<Matrix<Rf>, String> {
    let inv = |c| {
        one_minus_matrix(family, g, c)
            .inverse()
            .ok_or_else(|| "1 - x A is singular as a rational matrix".to_string())
    };
    Ok(inv(Color::Blue)?.mul(&inv(Color::Red)?))
}

fn from_rows(rows: Vec<Vec<Rf>>) -> Matrix<Rf> {
    let n = rows.len();
    Matrix::from_fn(n, n, |i, j| rows[i][j].clone())
}

fn is_identity(label: &str, m: &Matrix<Rf>) -> Result<(), String> {
    let id = Matrix::<Rf>::identity(m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            same(&format!("{label} entry ({i},{j})"), m.get(i, j), id.get(i, j))?;
        }
    }
    Ok(())
}

struct YvTwoForms;
impl IdentityCheck for YvTwoForms {
    fn name(&self) -> &'static str {
        "yv-two-forms"
    }
    fn description(&self) -> &'static str {
        "1 + a1x1/Δ + a2x2/(1-d2x2) = 1 + a2x2/Δ + a1x1/(1-d1x1)"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind != FamilyKind::FourVertex
    }
    fn check(&self, f: &FamilyMatch, _: &TwoGraphSkeleton) -> Result<(), String> {
        same("y_v", &f.y_v(), &f.y_v_alt())
    }
}

struct DeltaCancellation;
impl IdentityCheck for DeltaCancellation {
    fn name(&self) -> &'static str {
        "delta-cancellation"
    }
    fn description(&self) -> &'static str {
        "a1x1/Δ + a2x2(1-d1x1)/Δ - a2x2/Δ - a1x1(1-d2x2)/Δ = 0"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind != FamilyKind::FourVertex
    }
    fn check(&self, f: &FamilyMatch, _: &TwoGraphSkeleton) -> Result<(), String> {
        let [x1, x2] = rf_point();
        let p = &f.params;
        let di = f.delta().recip().map_err(|e| e.to_string())?;
        let one = Rf::one();
        let blue = one.clone() - Rf::from_i64(p.d[0]) * x1.clone();
        let red = one - Rf::from_i64(p.d[1]) * x2.clone();
        let a1x1 = Rf::from_i64(p.a[0]) * x1;
        let a2x2 = Rf::from_i64(p.a[1]) * x2;
        let lhs = (a1x1.clone() + a2x2.clone() * blue - a2x2 - a1x1 * red) * di;
        same("x1 x2 terms", &lhs, &Rf::zero())
    }
}

struct YwTwoForms;
impl IdentityCheck for YwTwoForms {
    fn name(&self) -> &'static str {
        "yw-two-forms"
    }
    fn description(&self) -> &'static str {
        "1 + b2x2 + b1x1/Δ + a2b2x2²/(1-d2x2) = 1 + b1x1/(1-d1x1) + b2x2·y_v"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind == FamilyKind::ThreeVertex
    }
    fn check(&self, f: &FamilyMatch, _: &TwoGraphSkeleton) -> Result<(), String> {
        same("y_w", &f.y_w(), &f.y_w_alt())
    }
}

struct InverseThree;
impl IdentityCheck for InverseThree {
    fn name(&self) -> &'static str {
        "inverse-3x3"
    }
    fn description(&self) -> &'static str {
        "closed-form inverse times (1 - x1A1)(1 - x2A2) is the identity"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind == FamilyKind::ThreeVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let product = one_minus_matrix(f, g, Color::Blue).mul(&one_minus_matrix(f, g, Color::Red));
        is_identity("inverse", &from_rows(f.inverse_three_by_three()).mul(&product))
    }
}

struct InverseTwo;
impl IdentityCheck for InverseTwo {
    fn name(&self) -> &'static str {
        "inverse-2x2"
    }
    fn description(&self) -> &'static str {
        "Δ^-1 [[1, a2x2 + a1x1(1-d2x2)], [0, Δ]] inverts (1 - x1A1)(1 - x2A2)"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind == FamilyKind::TwoVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let product = one_minus_matrix(f, g, Color::Blue).mul(&one_minus_matrix(f, g, Color::Red));
        is_identity("inverse", &from_rows(f.m_two_by_two()).mul(&product))
    }
}

struct MEpsU;
impl IdentityCheck for MEpsU {
    fn name(&self) -> &'static str {
        "m-eps-u"
    }
    fn description(&self) -> &'static str {
        "m(ε_u) = M e_u / y_u is the point mass at u"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind != FamilyKind::FourVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let m = symbolic_m(f, g)?;
        let yu = f.y_u();
        let col: Vec<Rf> = m.column(0).into_iter().map(|e| e / yu.clone()).collect();
        let mut expect = vec![Rf::zero(); col.len()];
        expect[0] = Rf::one();
        same_vec("m(ε_u)", &col, &expect)
    }
}

struct Phi2Normalized;
impl IdentityCheck for Phi2Normalized {
    fn name(&self) -> &'static str {
        "phi2-normalized"
    }
    fn description(&self) -> &'static str {
        "the closed-form state at v equals M e_v / y_v and sums to 1"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind == FamilyKind::TwoVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let phi = f.phi_v();
        let m = symbolic_m(f, g)?;
        let yv = f.y_v();
        let col: Vec<Rf> = m.column(1).into_iter().map(|e| e / yv.clone()).collect();
        same_vec("φ_2", &phi, &col)?;
        let total = phi.into_iter().fold(Rf::zero(), |a, b| a + b);
        same("sum", &total, &Rf::one())
    }
}

struct Phi2KillsCk;
impl IdentityCheck for Phi2KillsCk {
    fn name(&self) -> &'static str {
        "phi2-kills-ck"
    }
    fn description(&self) -> &'static str {
        "the relation at u vanishes on the state at v, symbolically and at x = (1/8, 1/12)"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind == FamilyKind::TwoVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let (u, v) = (f.order[0], f.order[1]);
        let relation = minimal_exhaustive_set(g, u)
            .map_err(|e| e.to_string())?
            .relations()
            .first()
            .cloned()
            .ok_or("no relation at u")?;
        let expansion = ck_expand(g, &relation).map_err(|e| e.to_string())?;

        let mut state = vec![Rf::zero(); 2];
        for (role, value) in f.phi_v().into_iter().enumerate() {
            state[f.order[role]] = value;
        }
        let symbolic = ck_evaluate(&expansion, &state, &rf_point());
        same("symbolic value", &symbolic, &Rf::zero())?;

        let x = standard_point();
        let report = kms_simplex(g, &x).map_err(|e| e.to_string())?;
        let numeric = ck_evaluate(&expansion, &report.extremes[v].values, &x);
        let from_symbolic = symbolic.eval(&x[0], &x[1]).map_err(|e| e.to_string())?;
        if numeric != from_symbolic {
            return Err(format!(
                "numeric value {} disagrees with symbolic {}",
                format_rational(&numeric),
                format_rational(&from_symbolic)
            ));
        }
        Ok(())
    }
}

struct CharPhi3;
impl IdentityCheck for CharPhi3 {
    fn name(&self) -> &'static str {
        "charphi3-normalized"
    }
    fn description(&self) -> &'static str {
        "the closed-form state at w equals M e_w / y_w and sums to 1"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind == FamilyKind::ThreeVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let phi = f.phi_w();
        let m = symbolic_m(f, g)?;
        let yw = f.y_w();
        let col: Vec<Rf> = m.column(2).into_iter().map(|e| e / yw.clone()).collect();
        same_vec("φ_3", &phi, &col)?;
        let total = phi.into_iter().fold(Rf::zero(), |a, b| a + b);
        same("sum", &total, &Rf::one())
    }
}

struct YClosedVsFamily;
impl IdentityCheck for YClosedVsFamily {
    fn name(&self) -> &'static str {
        "y-closed-vs-family"
    }
    fn description(&self) -> &'static str {
        "column sums of the symbolic product of inverses match the family formulas for y"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind != FamilyKind::FourVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let sums = symbolic_m(f, g)?.column_sums();
        let formulas = f.y_formulas().ok_or("no formulas")?;
        same_vec("y", &sums, &formulas)
    }
}

struct BlockSolveSymmetry;
impl IdentityCheck for BlockSolveSymmetry {
    fn name(&self) -> &'static str {
        "block-solve-color-symmetry"
    }
    fn description(&self) -> &'static str {
        "blue and red closed-form block solves at x agree with each other and with the eigenvector solve"
    }
    fn applies_to(&self, kind: FamilyKind) -> bool {
        kind == FamilyKind::FourVertex
    }
    fn check(&self, f: &FamilyMatch, g: &TwoGraphSkeleton) -> Result<(), String> {
        let render = |v: &[BigRational]| {
            v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
        };
        let red = f.block_solve(Color::Red).ok_or("red solve has a zero denominator")?;
        let blue = f.block_solve(Color::Blue).ok_or("blue solve has a zero denominator")?;
        if red != blue {
            return Err(format!("blue ({}) vs red ({})", render(&blue), render(&red)));
        }
        let solved = sink_state(g, f.order[3]).map_err(|e| e.to_string())?;
        let z: Vec<BigRational> = f.order[..3].iter().map(|&v| solved.z[v].clone()).collect();
        if z != red {
            return Err(format!(
                "closed form ({}) vs linear solve ({})",
                render(&red),
                render(&z)
            ));
        }
        Ok(())
    }
}

/// Named identity checks, run in registration order.
pub struct IdentityRegistry {
    checks: Vec<Box<dyn IdentityCheck>>,
}

impl IdentityRegistry {
    pub fn empty() -> Self {
        Self { checks: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(YvTwoForms));
        r.register(Box::new(DeltaCancellation));
        r.register(Box::new(YwTwoForms));
        r.register(Box::new(InverseTwo));
        r.register(Box::new(InverseThree));
        r.register(Box::new(MEpsU));
        r.register(Box::new(Phi2Normalized));
        r.register(Box::new(Phi2KillsCk));
        r.register(Box::new(CharPhi3));
        r.register(Box::new(YClosedVsFamily));
        r.register(Box::new(BlockSolveSymmetry));
        r
    }

    /// Adds a check, replacing any existing one with the same name.
    pub fn register(&mut self, check: Box<dyn IdentityCheck>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn get(&self, name: &str) -> Option<&dyn IdentityCheck> {
        self.checks
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    /// Runs every check applicable to the detected family.
    pub fn run(&self, g: &TwoGraphSkeleton) -> Result<(FamilyMatch, Vec<IdentityResult>), IdentityError> {
        let family = detect_family(g).ok_or(IdentityError::NotAFamily)?;
        let results = self
            .checks
            .iter()
            .filter(|c| c.applies_to(family.kind))
            .map(|c| IdentityResult {
                name: c.name().to_string(),
                description: c.description().to_string(),
                outcome: match c.check(&family, g) {
                    Ok(()) => IdentityOutcome::Pass,
                    Err(why) => IdentityOutcome::Fail(why),
                },
            })
            .collect();
        Ok((family, results))
    }
}

impl Default for IdentityRegistry {
    fn default() -> Self {
        Self::standard()
    }
}
