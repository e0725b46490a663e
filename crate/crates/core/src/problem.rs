//! Common interface for the second-order eigenproblems on [−1,1].

use crate::field::Field;

/// Coefficients of h'' + drift·h' + potential·h = λ·weight·h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalForm<T> {
    pub drift: T,
    pub potential: T,
    pub weight: T,
}

/// A linear second-order eigenproblem on [−1,1] with regular singular
/// endpoints, written in normal form.
pub trait Problem {
    /// Normal-form coefficients at x (interior points, or complex points off
    /// the real segment when collecting Taylor data).
    fn normal_form<T: Field>(&self, x: T) -> NormalForm<T>;

    /// An endpoint branch h ~ (1∓x)^σ is admissible when −σ is strictly
    /// below this bound.
    fn divergence_bound(&self) -> f64;

    /// Descriptive tag used in reports.
    fn label(&self) -> String;

    /// Interior points where the coefficients are singular. Collocation
    /// grids must avoid them.
    fn interior_singular_points(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Sturm–Liouville data −(p u')' + q u = λ w u.
pub trait SturmLiouville {
    fn p(&self, x: f64) -> f64;
    fn q(&self, x: f64) -> f64;
    fn w(&self, x: f64) -> f64;

    /// p(x)/(1−x²), finite at the poles. Implementors with a closed form
    /// should override this; the default loses accuracy near x = ±1.
    fn p_reduced(&self, x: f64) -> f64 {
        self.p(x) / (1.0 - x * x)
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn normal_form<T: Field>(&self, x: T) -> NormalForm<T> {
        (**self).normal_form(x)
    }
    fn divergence_bound(&self) -> f64 {
        (**self).divergence_bound()
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn interior_singular_points(&self) -> Vec<f64> {
        (**self).interior_singular_points()
    }
}
