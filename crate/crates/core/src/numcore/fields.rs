use std::fmt;
use std::sync::Arc;

use super::dual::{Dual, Real};
use super::{Covector, Vector};

/// A global vector-space chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    dim: usize,
    label: String,
}

impl Chart {
    /// # Panics
    /// If `dim == 0`.
    pub fn new(dim: usize, label: impl Into<String>) -> Self {
        assert!(dim >= 1, "chart dimension must be positive");
        Self {
            dim,
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A function that can be evaluated on any [`Real`] scalar, which gives
/// exact derivatives through dual numbers.
pub trait SmoothFn: Send + Sync {
    fn eval<S: Real>(&self, x: &[S]) -> S;
}

type F64Fn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type DualFn = Arc<dyn Fn(&[Dual]) -> Dual + Send + Sync>;

/// Real-valued function on a chart.
#[derive(Clone)]
pub struct ScalarField {
    chart: Chart,
    value: F64Fn,
    dual: Option<DualFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("chart", &self.chart)
            .field("dual", &self.dual.is_some())
            .finish()
    }
}

impl ScalarField {
    /// Wraps an opaque function; derivatives fall back to central differences.
    pub fn black_box(chart: Chart, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            chart,
            value: Arc::new(f),
            dual: None,
        }
    }

    /// Wraps a function that also evaluates on dual numbers.
    pub fn smooth<F: SmoothFn + 'static>(chart: Chart, f: F) -> Self {
        let f = Arc::new(f);
        let g = Arc::clone(&f);
        Self {
            chart,
            value: Arc::new(move |x: &[f64]| f.eval(x)),
            dual: Some(Arc::new(move |x: &[Dual]| g.eval(x))),
        }
    }

    pub fn constant(chart: Chart, c: f64) -> Self {
        Self::smooth(chart, Constant(c))
    }

    /// The `i`-th coordinate function.
    pub fn coordinate(chart: Chart, i: usize) -> Self {
        Self::smooth(chart, Coordinate(i))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn eval_dual(&self, x: &[Dual]) -> Option<Dual> {
        self.dual.as_ref().map(|f| f(x))
    }

    pub fn has_dual(&self) -> bool {
        self.dual.is_some()
    }

    /// Pointwise product, keeping dual evaluation when both factors have it.
    pub fn mul(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (Arc::clone(&self.value), Arc::clone(&other.value));
        let dual = match (&self.dual, &other.dual) {
            (Some(a), Some(b)) => {
                let (a, b) = (Arc::clone(a), Arc::clone(b));
                Some(Arc::new(move |x: &[Dual]| a(x) * b(x)) as DualFn)
            }
            _ => None,
        };
        ScalarField {
            chart: self.chart.clone(),
            value: Arc::new(move |x: &[f64]| a(x) * b(x)),
            dual,
        }
    }

    /// Pull back along a chart map `phi: self.chart ← source`.
    pub fn compose(
        &self,
        source: Chart,
        phi: impl Fn(&[f64]) -> Vector + Send + Sync + 'static,
    ) -> ScalarField {
        let f = Arc::clone(&self.value);
        ScalarField::black_box(source, move |x| f(phi(x).as_slice()))
    }
}

struct Constant(f64);

impl SmoothFn for Constant {
    fn eval<S: Real>(&self, _x: &[S]) -> S {
        S::from_f64(self.0)
    }
}

struct Coordinate(usize);

impl SmoothFn for Coordinate {
    fn eval<S: Real>(&self, x: &[S]) -> S {
        x[self.0]
    }
}

/// Vector field on a chart.
#[derive(Clone)]
pub struct VectorField {
    chart: Chart,
    f: Arc<dyn Fn(&[f64]) -> Vector + Send + Sync>,
}

impl VectorField {
    pub fn new(chart: Chart, f: impl Fn(&[f64]) -> Vector + Send + Sync + 'static) -> Self {
        Self {
            chart,
            f: Arc::new(f),
        }
    }

    pub fn constant(chart: Chart, v: Vector) -> Self {
        Self::new(chart, move |_| v.clone())
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn eval(&self, x: &[f64]) -> Vector {
        (self.f)(x)
    }
}

/// 1-form on a chart, evaluated as a covector in the coordinate dual basis.
#[derive(Clone)]
pub struct OneFormField {
    chart: Chart,
    f: Arc<dyn Fn(&[f64]) -> Covector + Send + Sync>,
}

impl OneFormField {
    pub fn new(chart: Chart, f: impl Fn(&[f64]) -> Covector + Send + Sync + 'static) -> Self {
        Self {
            chart,
            f: Arc::new(f),
        }
    }

    pub fn constant(chart: Chart, c: Covector) -> Self {
        Self::new(chart, move |_| c.clone())
    }

    /// The exact differential `df`, using dual numbers when available.
    pub fn exact(f: &ScalarField) -> Self {
        let f = f.clone();
        let chart = f.chart().clone();
        Self::new(chart, move |x| {
            super::gradient(&f, x, super::DiffMode::Auto {
                step: crate::tolerances::FD_STEP,
            })
            .unwrap_or_else(|_| Covector::from_element(x.len(), f64::NAN))
        })
    }

    /// `f·φ` for a scalar field `f`.
    pub fn scale(&self, f: &ScalarField) -> Self {
        let (form, f) = (self.clone(), f.clone());
        Self::new(self.chart.clone(), move |x| form.eval(x) * f.eval(x))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn eval(&self, x: &[f64]) -> Covector {
        (self.f)(x)
    }
}
