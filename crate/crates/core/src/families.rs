//! Recognition of the one-source families and their hand-derived formulas.
//!
//! Vertex roles are `u, v, w, x`. With rows indexed by range:
//!
//! ```text
//! two-vertex    A1 = [d1 a1]       A2 = [d2 a2]
//!                    [0  0 ]            [0  0 ]
//! three-vertex  A1 = [d1 a1 b1]    A2 = [d2 a2 0 ]
//!                    [0  0  0 ]         [0  0  b2]
//!                    [0  0  0 ]         [0  0  0 ]
//! four-vertex   A1 = [d1 a1 b1 0 ] A2 = [d2 a2 0  0 ]
//!                    [0  0  0  g1]      [0  0  b2 0 ]
//!                    [0  0  0  c1]      [0  0  0  c2]
//!                    [0  0  0  f1]      [0  0  0  f2]
//! ```
//!
//! Every named parameter must be positive. Detection does not require the
//! commutation relations, so perturbed instances are still recognised and the
//! identity checks can report what breaks.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::graph::{Color, TwoGraphSkeleton};
use crate::symbolic::{one_minus, RationalFunction2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    TwoVertex,
    ThreeVertex,
    FourVertex,
}

impl FamilyKind {
    pub fn size(self) -> usize {
        match self {
            FamilyKind::TwoVertex => 2,
            FamilyKind::ThreeVertex => 3,
            FamilyKind::FourVertex => 4,
        }
    }

    /// Nonzero pattern `(color, range role, source role, parameter)`.
    fn pattern(self) -> &'static [(Color, usize, usize, Param)] {
        use Color::{Blue, Red};
        use Param::*;
        match self {
            FamilyKind::TwoVertex => &[
                (Blue, 0, 0, D1),
                (Blue, 0, 1, A1),
                (Red, 0, 0, D2),
                (Red, 0, 1, A2),
            ],
            FamilyKind::ThreeVertex => &[
                (Blue, 0, 0, D1),
                (Blue, 0, 1, A1),
                (Blue, 0, 2, B1),
                (Red, 0, 0, D2),
                (Red, 0, 1, A2),
                (Red, 1, 2, B2),
            ],
            FamilyKind::FourVertex => &[
                (Blue, 0, 0, D1),
                (Blue, 0, 1, A1),
                (Blue, 0, 2, B1),
                (Blue, 1, 3, G1),
                (Blue, 2, 3, C1),
                (Blue, 3, 3, F1),
                (Red, 0, 0, D2),
                (Red, 0, 1, A2),
                (Red, 1, 2, B2),
                (Red, 2, 3, C2),
                (Red, 3, 3, F2),
            ],
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::TwoVertex => "two-vertex",
            FamilyKind::ThreeVertex => "three-vertex",
            FamilyKind::FourVertex => "four-vertex",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Param {
    D1,
    D2,
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
    G1,
    F1,
    F2,
}

/// Edge-count parameters; those not used by a family are zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub d: [i64; 2],
    pub a: [i64; 2],
    pub b: [i64; 2],
    pub c: [i64; 2],
    pub g1: i64,
    pub f: [i64; 2],
}

impl FamilyParams {
    fn slot(&mut self, p: Param) -> &mut i64 {
        match p {
            Param::D1 => &mut self.d[0],
            Param::D2 => &mut self.d[1],
            Param::A1 => &mut self.a[0],
            Param::A2 => &mut self.a[1],
            Param::B1 => &mut self.b[0],
            Param::B2 => &mut self.b[1],
            Param::C1 => &mut self.c[0],
            Param::C2 => &mut self.c[1],
            Param::G1 => &mut self.g1,
            Param::F1 => &mut self.f[0],
            Param::F2 => &mut self.f[1],
        }
    }

    /// Builds the skeleton of `kind` with these parameters on vertices `u, v, ...`.
    pub fn skeleton(&self, kind: FamilyKind) -> TwoGraphSkeleton {
        let n = kind.size();
        let mut blue = vec![vec![0i64; n]; n];
        let mut red = vec![vec![0i64; n]; n];
        let mut params = *self;
        for &(color, r, s, p) in kind.pattern() {
            let m = if color == Color::Blue { &mut blue } else { &mut red };
            m[r][s] = *params.slot(p);
        }
        let names = ["u", "v", "w", "x"][..n].iter().map(|s| s.to_string()).collect();
        TwoGraphSkeleton::new(names, blue, red).expect("family matrices are square")
    }

    /// The commutation relations the family needs, as `(description, holds)`.
    pub fn relations(&self, kind: FamilyKind) -> Vec<(String, bool)> {
        let [d1, d2] = self.d;
        let [a1, a2] = self.a;
        let [b1, b2] = self.b;
        let [c1, c2] = self.c;
        let [f1, f2] = self.f;
        let g1 = self.g1;
        let mut out = vec![("a1 d2 = a2 d1".to_string(), a1 * d2 == a2 * d1)];
        if kind != FamilyKind::TwoVertex {
            out.push(("a1 b2 = d2 b1".to_string(), a1 * b2 == d2 * b1));
        }
        if kind == FamilyKind::FourVertex {
            out.push(("g1 f2 = b2 c1".to_string(), g1 * f2 == b2 * c1));
            out.push(("f1 c2 = f2 c1".to_string(), f1 * c2 == f2 * c1));
        }
        out
    }
}

/// A skeleton recognised as a family member; `order[role]` is the vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMatch {
    pub kind: FamilyKind,
    pub order: Vec<usize>,
    pub params: FamilyParams,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Tries every assignment of vertices to roles; the first lexicographic match wins.
pub fn detect_family(g: &TwoGraphSkeleton) -> Option<FamilyMatch> {
    let kind = match g.vertex_count() {
        2 => FamilyKind::TwoVertex,
        3 => FamilyKind::ThreeVertex,
        4 => FamilyKind::FourVertex,
        _ => return None,
    };
    let pattern = kind.pattern();
    permutations(kind.size()).into_iter().find_map(|order| {
        let mut params = FamilyParams::default();
        for color in Color::ALL {
            for r in 0..order.len() {
                for s in 0..order.len() {
                    let value = g.matrix(color).get(order[r], order[s]);
                    match pattern
                        .iter()
                        .find(|&&(c, pr, ps, _)| c == color && pr == r && ps == s)
                    {
                        Some(&(_, _, _, p)) if value > 0 => *params.slot(p) = value,
                        None if value == 0 => {}
                        _ => return None,
                    }
                }
            }
        }
        Some(FamilyMatch {
            kind,
            order,
            params,
        })
    })
}

fn int(n: i64) -> RationalFunction2 {
    RationalFunction2::constant(BigRational::from_integer(n.into()))
}

/// `1 / (1 - c x_i)`.
fn geometric(c: i64, color_index: usize) -> RationalFunction2 {
    RationalFunction2::from_polynomial(one_minus(c, color_index))
        .recip()
        .expect("1 - c x is a nonzero polynomial")
}

impl FamilyMatch {
    fn x(&self) -> (RationalFunction2, RationalFunction2) {
        (RationalFunction2::x1(), RationalFunction2::x2())
    }

    /// `Delta = (1 - d1 x1)(1 - d2 x2)`.
    pub fn delta(&self) -> RationalFunction2 {
        RationalFunction2::from_polynomial(
            &one_minus(self.params.d[0], 0) * &one_minus(self.params.d[1], 1),
        )
    }

    fn delta_inv(&self) -> RationalFunction2 {
        self.delta().recip().expect("Delta is a nonzero polynomial")
    }

    pub fn y_u(&self) -> RationalFunction2 {
        self.delta_inv()
    }

    /// `y_v = 1 + a1 x1 / Delta + a2 x2 / (1 - d2 x2)`.
    pub fn y_v(&self) -> RationalFunction2 {
        let (x1, x2) = self.x();
        let p = &self.params;
        int(1) + int(p.a[0]) * x1 * self.delta_inv() + int(p.a[1]) * x2 * geometric(p.d[1], 1)
    }

    /// `y_v = 1 + a2 x2 / Delta + a1 x1 / (1 - d1 x1)`.
    pub fn y_v_alt(&self) -> RationalFunction2 {
        let (x1, x2) = self.x();
        let p = &self.params;
        int(1) + int(p.a[1]) * x2 * self.delta_inv() + int(p.a[0]) * x1 * geometric(p.d[0], 0)
    }

    /// `y_w = 1 + b2 x2 + b1 x1 / Delta + a2 b2 x2^2 / (1 - d2 x2)`.
    pub fn y_w(&self) -> RationalFunction2 {
        let (x1, x2) = self.x();
        let p = &self.params;
        int(1)
            + int(p.b[1]) * x2.clone()
            + int(p.b[0]) * x1 * self.delta_inv()
            + int(p.a[1] * p.b[1]) * x2.clone() * x2 * geometric(p.d[1], 1)
    }

    /// `y_w = 1 + b1 x1 / (1 - d1 x1) + b2 x2 y_v`, with `y_v` in its second form.
    pub fn y_w_alt(&self) -> RationalFunction2 {
        let (x1, x2) = self.x();
        let p = &self.params;
        int(1) + int(p.b[0]) * x1 * geometric(p.d[0], 0) + int(p.b[1]) * x2 * self.y_v_alt()
    }

    /// Closed formulas for `y`, by role, where the family has them.
    pub fn y_formulas(&self) -> Option<Vec<RationalFunction2>> {
        match self.kind {
            FamilyKind::TwoVertex => Some(vec![self.y_u(), self.y_v()]),
            FamilyKind::ThreeVertex => Some(vec![self.y_u(), self.y_v(), self.y_w()]),
            FamilyKind::FourVertex => None,
        }
    }

    /// `Delta^{-1} [[1, a2 x2 + a1 x1 (1 - d2 x2)], [0, Delta]]`, rows by role.
    pub fn m_two_by_two(&self) -> Vec<Vec<RationalFunction2>> {
        let (x1, x2) = self.x();
        let p = &self.params;
        let di = self.delta_inv();
        let corner = (int(p.a[1]) * x2
            + int(p.a[0]) * x1 * RationalFunction2::from_polynomial(one_minus(p.d[1], 1)))
            * di.clone();
        vec![vec![di, corner], vec![int(0), int(1)]]
    }

    /// The displayed inverse of `(1 - x1 A1)(1 - x2 A2)` for the three-vertex family.
    pub fn inverse_three_by_three(&self) -> Vec<Vec<RationalFunction2>> {
        let (x1, x2) = self.x();
        let p = &self.params;
        let di = self.delta_inv();
        let blue = RationalFunction2::from_polynomial(one_minus(p.d[0], 0));
        let e12 = blue.clone() * int(p.a[1]) * x2.clone() + int(p.a[0]) * x1.clone();
        let e13 = blue * int(p.a[1] * p.b[1]) * x2.clone() * x2.clone() + int(p.b[0]) * x1;
        vec![
            vec![di.clone(), e12 * di.clone(), e13 * di],
            vec![int(0), int(1), int(p.b[1]) * x2],
            vec![int(0), int(0), int(1)],
        ]
    }

    /// Vertex values of the extreme state at `v` in the two-vertex family.
    pub fn phi_v(&self) -> Vec<RationalFunction2> {
        let (x1, x2) = self.x();
        let p = &self.params;
        let yv_inv = self.y_v().recip().expect("y_v >= 1");
        let top = int(p.a[1]) * x2.clone() + int(p.a[0]) * x1.clone()
            - int(p.a[0] * p.d[1]) * x1 * x2;
        vec![yv_inv.clone() * self.delta_inv() * top, yv_inv]
    }

    /// Vertex values of the extreme state at `w` in the three-vertex family.
    pub fn phi_w(&self) -> Vec<RationalFunction2> {
        let (x1, x2) = self.x();
        let p = &self.params;
        let yw_inv = self.y_w().recip().expect("y_w >= 1");
        let blue = RationalFunction2::from_polynomial(one_minus(p.d[0], 0));
        let top = blue * int(p.a[1] * p.b[1]) * x2.clone() * x2.clone() + int(p.b[0]) * x1;
        vec![
            self.delta_inv() * top * yw_inv.clone(),
            int(p.b[1]) * x2 * yw_inv.clone(),
            yw_inv,
        ]
    }

    /// Closed-form block solve at the critical vertex `x` of the four-vertex
    /// family, for the given colour; `None` when a denominator vanishes.
    pub fn block_solve(&self, color: Color) -> Option<Vec<BigRational>> {
        if self.kind != FamilyKind::FourVertex {
            return None;
        }
        let p = &self.params;
        let q = |n: i64, d: i64| (d != 0).then(|| BigRational::new(n.into(), d.into()));
        match color {
            Color::Red => {
                let [f2, d2, a2, b2, c2] = [p.f[1], p.d[1], p.a[1], p.b[1], p.c[1]];
                Some(vec![
                    q(a2 * b2 * c2, (f2 - d2) * f2 * f2)?,
                    q(b2 * c2, f2 * f2)?,
                    q(c2, f2)?,
                ])
            }
            Color::Blue => {
                let [f1, d1, a1, b1, c1] = [p.f[0], p.d[0], p.a[0], p.b[0], p.c[0]];
                Some(vec![
                    q(a1 * p.g1 + b1 * c1, (f1 - d1) * f1)?,
                    q(p.g1, f1)?,
                    q(c1, f1)?,
                ])
            }
        }
    }
}
