//! Second-order forward-mode jets over the six chart variables.
//!
//! A [`Jet2`] carries a value together with its exact gradient and Hessian
//! with respect to the chart coordinates. Propagating jets through the metric
//! formulas yields every ∂ₖg and ∂ₗ∂ₖg needed by the Christoffel symbols and
//! their first derivatives — no symbolic differentiation, no finite-difference
//! noise.
//!
//! Only polynomial-rational arithmetic is provided (add, sub, mul, powers,
//! guarded inverse, composition with a [`FunctionSpec`]); the canonical metric
//! forms need nothing else. Division is fallible: the metrics have genuine
//! singular loci and hitting one must surface as a typed error, not as NaN.

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;

/// Number of chart variables.
pub const DIM: usize = 6;

/// Default threshold below which a jet inverse reports [`Error::DivisionNearZero`].
pub const DEFAULT_DIVISION_GUARD: f64 = 1e-12;

/// Truncated second-order Taylor value: scalar, 6-gradient, symmetric 6×6 Hessian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub val: f64,
    pub grad: [f64; DIM],
    pub hess: [[f64; DIM]; DIM],
}

impl Jet2 {
    /// Jet of a constant: zero gradient, zero Hessian.
    pub fn constant(val: f64) -> Self {
        Self {
            val,
            grad: [0.0; DIM],
            hess: [[0.0; DIM]; DIM],
        }
    }

    /// Jet of the coordinate `x^(k+1)` seeded at `val`: unit gradient slot, zero Hessian.
    pub fn variable(val: f64, k: usize) -> Self {
        assert!(k < DIM, "variable index {k} out of range");
        let mut grad = [0.0; DIM];
        grad[k] = 1.0;
        Self {
            val,
            grad,
            hess: [[0.0; DIM]; DIM],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// Largest asymmetry of the Hessian slots; exact zero for jets built from
    /// the arithmetic in this module.
    pub fn hessian_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                worst = worst.max((self.hess[i][j] - self.hess[j][i]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite()
            && self.grad.iter().all(|g| g.is_finite())
            && self.hess.iter().flatten().all(|h| h.is_finite())
    }

    pub fn sq(self) -> Self {
        self * self
    }

    /// Integer power by repeated multiplication (exact for jets).
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Jet2::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Guarded inverse with the default threshold.
    pub fn inv(self) -> Result<Self> {
        self.inv_guarded(DEFAULT_DIVISION_GUARD)
    }

    /// Second-order inverse: 1/a, −a′/a², quotient-rule Hessian. Errors when
    /// |value| is below `guard` — the caller is on a singular locus.
    pub fn inv_guarded(self, guard: f64) -> Result<Self> {
        if self.val.abs() < guard {
            return Err(Error::DivisionNearZero {
                value: self.val,
                guard,
            });
        }
        let u = 1.0 / self.val;
        let u2 = u * u;
        let u3 = u2 * u;
        let mut out = Jet2::constant(u);
        for i in 0..DIM {
            out.grad[i] = -u2 * self.grad[i];
        }
        for i in 0..DIM {
            for j in i..DIM {
                let h = -u2 * self.hess[i][j] + 2.0 * u3 * self.grad[i] * self.grad[j];
                out.hess[i][j] = h;
                out.hess[j][i] = h;
            }
        }
        Ok(out)
    }
}

/// Faà di Bruno to second order: f(a), f′(a)·a′, f′(a)·a″ + f″(a)·a′⊗a′.
pub fn compose(f: &FunctionSpec, a: Jet2) -> Jet2 {
    let (f0, f1, f2) = f.eval2(a.val);
    let mut out = Jet2::constant(f0);
    for i in 0..DIM {
        out.grad[i] = f1 * a.grad[i];
    }
    for i in 0..DIM {
        for j in i..DIM {
            let h = f1 * a.hess[i][j] + f2 * a.grad[i] * a.grad[j];
            out.hess[i][j] = h;
            out.hess[j][i] = h;
        }
    }
    out
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let mut out = self;
        out.val += rhs.val;
        for i in 0..DIM {
            out.grad[i] += rhs.grad[i];
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out.hess[i][j] += rhs.hess[i][j];
            }
        }
        out
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        let mut out = self;
        out.val -= rhs.val;
        for i in 0..DIM {
            out.grad[i] -= rhs.grad[i];
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out.hess[i][j] -= rhs.hess[i][j];
            }
        }
        out
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self * -1.0
    }
}

impl std::ops::Mul for Jet2 {
    type Output = Jet2;
    /// Second-order Leibniz product; the Hessian is filled from the upper
    /// triangle so symmetry is exact, not rounding-level.
    fn mul(self, rhs: Jet2) -> Jet2 {
        let mut out = Jet2::constant(self.val * rhs.val);
        for i in 0..DIM {
            out.grad[i] = self.val * rhs.grad[i] + rhs.val * self.grad[i];
        }
        for i in 0..DIM {
            for j in i..DIM {
                let h = self.val * rhs.hess[i][j]
                    + rhs.val * self.hess[i][j]
                    + (self.grad[i] * rhs.grad[j] + self.grad[j] * rhs.grad[i]);
                out.hess[i][j] = h;
                out.hess[j][i] = h;
            }
        }
        out
    }
}

impl std::ops::Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        let mut out = self;
        out.val *= s;
        for i in 0..DIM {
            out.grad[i] *= s;
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out.hess[i][j] *= s;
            }
        }
        out
    }
}

impl std::ops::Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, j: Jet2) -> Jet2 {
        j * self
    }
}

impl std::ops::Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, s: f64) -> Jet2 {
        let mut out = self;
        out.val += s;
        out
    }
}

impl std::ops::Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, s: f64) -> Jet2 {
        let mut out = self;
        out.val -= s;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn square_of_seeded_variable() {
        let x = Jet2::variable(2.0, 0);
        let y = x * x;
        assert_eq!(y.val, 4.0);
        assert_eq!(y.grad[0], 4.0);
        assert_eq!(y.hess[0][0], 2.0);
        assert_eq!(y.grad[1], 0.0);
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let mut a = Jet2::variable(1.7, 2);
        a.grad[4] = -0.3;
        a.hess[1][3] = 0.25;
        a.hess[3][1] = 0.25;
        let b = a * Jet2::one();
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_partial_of_xy() {
        let x = Jet2::variable(3.0, 0);
        let y = Jet2::variable(5.0, 1);
        let p = x * y;
        assert_eq!(p.val, 15.0);
        assert_eq!(p.grad[0], 5.0);
        assert_eq!(p.grad[1], 3.0);
        assert_eq!(p.hess[0][1], 1.0);
        assert_eq!(p.hess[1][0], 1.0);
        assert_eq!(p.hess[0][0], 0.0);
    }

    #[test]
    fn inverse_of_x_at_two() {
        let x = Jet2::variable(2.0, 0);
        let r = x.inv().unwrap();
        assert_eq!(r.val, 0.5);
        assert_eq!(r.grad[0], -0.25);
        assert_eq!(r.hess[0][0], 0.25);
    }

    #[test]
    fn inverse_guard_trips_on_zero() {
        let z = Jet2::variable(0.0, 3);
        assert!(matches!(z.inv(), Err(Error::DivisionNearZero { .. })));
        let tiny = Jet2::constant(1e-13);
        assert!(tiny.inv().is_err());
        assert!(tiny.inv_guarded(1e-14).is_ok());
    }

    #[test]
    fn compose_square_at_three() {
        let f = FunctionSpec::new(vec![0.0, 0.0, 1.0]).unwrap();
        let x = Jet2::variable(3.0, 1);
        let y = compose(&f, x);
        assert_eq!(y.val, 9.0);
        assert_eq!(y.grad[1], 6.0);
        assert_eq!(y.hess[1][1], 2.0);
    }

    #[test]
    fn compose_constant_kills_derivatives() {
        let f = FunctionSpec::constant(7.5);
        let mut x = Jet2::variable(0.4, 0);
        x.hess[0][0] = 3.0;
        let y = compose(&f, x);
        assert_eq!(y, Jet2::constant(7.5));
    }

    #[test]
    fn compose_cube_matches_central_differences() {
        // f(t) = t^3 through the inner map a(x) = x0 + 2 x1 (a genuine 2-variable jet).
        let f = FunctionSpec::new(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let inner = |x0: f64, x1: f64| (x0 + 2.0 * x1).powi(3);
        let (x0, x1) = (2.0, 0.3);
        let a = Jet2::variable(x0, 0) + 2.0 * Jet2::variable(x1, 1);
        let y = compose(&f, a);

        let h = 1e-4;
        let d0 = (inner(x0 + h, x1) - inner(x0 - h, x1)) / (2.0 * h);
        let d1 = (inner(x0, x1 + h) - inner(x0, x1 - h)) / (2.0 * h);
        let d00 = (inner(x0 + h, x1) - 2.0 * inner(x0, x1) + inner(x0 - h, x1)) / (h * h);
        let d01 = (inner(x0 + h, x1 + h) - inner(x0 + h, x1 - h) - inner(x0 - h, x1 + h)
            + inner(x0 - h, x1 - h))
            / (4.0 * h * h);
        assert!(close(y.grad[0], d0, 1e-6));
        assert!(close(y.grad[1], d1, 1e-6));
        assert!(close(y.hess[0][0], d00, 1e-6));
        assert!(close(y.hess[0][1], d01, 1e-6));
    }

    /// Build the jet of P(x_i)·Q(x_j) directly from exact polynomial
    /// derivatives, without jet arithmetic.
    fn product_jet_oracle(
        p: &FunctionSpec,
        i: usize,
        q: &FunctionSpec,
        j: usize,
        xi: f64,
        xj: f64,
    ) -> Jet2 {
        let (pv, pd, pdd) = p.eval2(xi);
        let (qv, qd, qdd) = q.eval2(xj);
        let mut out = Jet2::constant(pv * qv);
        if i == j {
            // same variable: full product rule
            out.grad[i] = pd * qv + pv * qd;
            out.hess[i][i] = pdd * qv + 2.0 * pd * qd + pv * qdd;
        } else {
            out.grad[i] = pd * qv;
            out.grad[j] = pv * qd;
            out.hess[i][i] = pdd * qv;
            out.hess[j][j] = pv * qdd;
            out.hess[i][j] = pd * qd;
            out.hess[j][i] = pd * qd;
        }
        out
    }

    proptest! {
        /// Leibniz rule: jet multiplication of polynomial seeds equals the jet
        /// of the product polynomial, to rounding.
        #[test]
        fn leibniz_against_polynomial_oracle(
            pc in proptest::collection::vec(-2.0f64..2.0, 1..=4),
            qc in proptest::collection::vec(-2.0f64..2.0, 1..=4),
            i in 0usize..DIM,
            j in 0usize..DIM,
            xi in -1.5f64..1.5,
            xj in -1.5f64..1.5,
        ) {
            let p = FunctionSpec::new(pc).unwrap();
            let q = FunctionSpec::new(qc).unwrap();
            let xj = if i == j { xi } else { xj };
            let a = compose(&p, Jet2::variable(xi, i));
            let b = compose(&q, Jet2::variable(xj, j));
            let got = a * b;
            let want = product_jet_oracle(&p, i, &q, j, xi, xj);
            prop_assert!(close(got.val, want.val, 1e-14));
            for k in 0..DIM {
                prop_assert!(close(got.grad[k], want.grad[k], 1e-14));
                for l in 0..DIM {
                    prop_assert!(close(got.hess[k][l], want.hess[k][l], 1e-14));
                }
            }
        }

        /// inv(inv(a)) round-trips for regular jets.
        #[test]
        fn inverse_round_trip(
            c in proptest::collection::vec(-2.0f64..2.0, 1..=4),
            i in 0usize..DIM,
            x in -1.5f64..1.5,
            shift in 2.0f64..5.0,
        ) {
            let p = FunctionSpec::new(c).unwrap();
            // shift away from zero so the jet is comfortably regular
            let a = compose(&p, Jet2::variable(x, i)) + shift;
            prop_assume!(a.val.abs() > 0.5);
            let back = a.inv().unwrap().inv().unwrap();
            prop_assert!(close(back.val, a.val, 1e-14));
            for k in 0..DIM {
                prop_assert!(close(back.grad[k], a.grad[k], 1e-13));
                for l in 0..DIM {
                    prop_assert!(close(back.hess[k][l], a.hess[k][l], 1e-13));
                }
            }
        }

        /// Arithmetic keeps Hessians exactly symmetric.
        #[test]
        fn hessian_symmetry_is_exact(
            pc in proptest::collection::vec(-2.0f64..2.0, 2..=4),
            qc in proptest::collection::vec(-2.0f64..2.0, 2..=4),
            i in 0usize..DIM,
            j in 0usize..DIM,
            x in -1.0f64..1.0,
            y in -1.0f64..1.0,
        ) {
            let p = FunctionSpec::new(pc).unwrap();
            let q = FunctionSpec::new(qc).unwrap();
            let a = compose(&p, Jet2::variable(x, i));
            let b = compose(&q, Jet2::variable(y, j));
            let m = a * b;
            prop_assert_eq!(m.hessian_asymmetry(), 0.0);
            let s = (a + b) * (a - b);
            prop_assert_eq!(s.hessian_asymmetry(), 0.0);
            if (a + b + 3.0).val.abs() > 0.1 {
                let r = (a + b + 3.0).inv().unwrap();
                prop_assert_eq!(r.hessian_asymmetry(), 0.0);
            }
        }
    }
}
