use serde::{Deserialize, Serialize};

/// Lower-order term `h(x, u, ∇u)` added to the right-hand side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbationSpec {
    #[default]
    None,
    /// `h = μ|u|^{q-1}u + |u|^{q₁-1}u |∇u|²/(1+|∇u|²)`, for `0 < p < 1`.
    Sublinear { mu: f64, q: f64, q1: f64 },
    /// `h = λu + |u|^{q-1}u |∇u|²/(1+|∇u|²)`, for `p > 1`.
    Superlinear { lambda: f64, q: f64 },
}

fn spow(s: f64, q: f64) -> f64 {
    s.abs().powf(q).copysign(s)
}

impl PerturbationSpec {
    /// `h(s, |ξ|²)`.
    #[inline]
    pub fn eval(&self, s: f64, grad_sq: f64) -> f64 {
        let sat = grad_sq / (1.0 + grad_sq);
        match *self {
            PerturbationSpec::None => 0.0,
            PerturbationSpec::Sublinear { mu, q, q1 } => mu * spow(s, q) + spow(s, q1) * sat,
            PerturbationSpec::Superlinear { lambda, q } => lambda * s + spow(s, q) * sat,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, PerturbationSpec::None)
    }

    /// Linear coefficient `λ` (zero for the other forms).
    pub fn lambda(&self) -> f64 {
        match *self {
            PerturbationSpec::Superlinear { lambda, .. } => lambda,
            _ => 0.0,
        }
    }

    pub fn needs_eigenvalue(&self) -> bool {
        matches!(self, PerturbationSpec::Superlinear { .. })
    }

    /// Lists every violated structural hypothesis for exponent `p`.
    ///
    /// `a_lambda1` is `a·λ₁(Ω)`; when supplied, the linear coefficient of the
    /// superlinear form is checked against it.
    pub fn violations(&self, p: f64, a_lambda1: Option<f64>) -> Vec<String> {
        let mut out = Vec::new();
        match *self {
            PerturbationSpec::None => {}
            PerturbationSpec::Sublinear { mu, q, q1 } => {
                if !(p > 0.0 && p < 1.0) {
                    out.push(format!("(H1) applies only to 0 < p < 1, got p = {p}"));
                }
                if !(p < q && q <= q1 && q1 < 1.0) {
                    out.push(format!(
                        "(H1) requires 0 < p < q <= q1 < 1, got p = {p}, q = {q}, q1 = {q1}"
                    ));
                }
                if !(mu >= 0.0 && mu.is_finite()) {
                    out.push(format!("(A) requires h >= 0, so mu >= 0; got mu = {mu}"));
                }
            }
            PerturbationSpec::Superlinear { lambda, q } => {
                if !(p > 1.0) {
                    out.push(format!("(H2) applies only to p > 1, got p = {p}"));
                }
                if !(1.0 < q && q < p) {
                    out.push(format!("(H2) requires 1 < q < p, got q = {q}, p = {p}"));
                }
                if !(lambda >= 0.0 && lambda.is_finite()) {
                    out.push(format!("(H2) requires lambda >= 0, got {lambda}"));
                }
                if let Some(bound) = a_lambda1 {
                    if !(lambda < bound) {
                        out.push(format!(
                            "lambda < a*lambda1 required, got lambda = {lambda}, a*lambda1 = {bound}"
                        ));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hypotheses_reported_by_name() {
        let sup = PerturbationSpec::Superlinear {
            lambda: 1.0,
            q: 6.0,
        };
        let v = sup.violations(5.0, Some(10.0));
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("(H2) requires 1 < q < p"));

        let v = sup.violations(5.0, Some(0.5));
        assert!(v.iter().any(|m| m.contains("lambda < a*lambda1")));

        let sub = PerturbationSpec::Sublinear {
            mu: 1.0,
            q: 0.4,
            q1: 0.8,
        };
        assert!(sub.violations(0.5, None)[0].contains("(H1)"));
        assert!(PerturbationSpec::Sublinear {
            mu: 1.0,
            q: 0.7,
            q1: 0.8
        }
        .violations(0.5, None)
        .is_empty());
    }

    #[test]
    fn none_is_zero() {
        assert_eq!(PerturbationSpec::None.eval(3.0, 2.0), 0.0);
    }

    proptest! {
        #[test]
        fn nonnegative_for_positive_arguments(
            s in 1e-8f64..1e3,
            g in 0.0f64..1e4,
            mu in 0.0f64..10.0,
            lambda in 0.0f64..10.0,
        ) {
            let sub = PerturbationSpec::Sublinear { mu, q: 0.7, q1: 0.8 };
            let sup = PerturbationSpec::Superlinear { lambda, q: 2.0 };
            prop_assert!(sub.eval(s, g) >= 0.0);
            prop_assert!(sup.eval(s, g) >= 0.0);
        }
    }
}
